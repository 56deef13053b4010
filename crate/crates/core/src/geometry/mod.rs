//! Exact geometric kernel: rational points, the simplex method, and the
//! convexity predicates built on it.

pub mod convex;
pub mod lp;
pub mod min_norm;
pub mod point;

pub use convex::{
    in_convex_hull, ray_hit_parameter, ray_hits_convex, segment_in_union, segment_interval,
    separating_hyperplane, simplices_intersect, BoundingBox,
};
pub use lp::{Constraint, Domain, LinearSystem, LpOutcome, Optimum, Relation, Sense};
pub use point::{Hyperplane, QPoint};
