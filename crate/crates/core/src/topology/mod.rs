//! Nerves, integer homology, collapses and fundamental-group presentations.

pub mod collapse;
pub mod complex;
pub mod homology;
pub mod nerve;
pub mod pi1;

pub use collapse::{greedy_collapse, CollapseCertificate};
pub use complex::{Face, SimplicialComplex};
pub use homology::{homology, homology_upto, HomologyReport};
pub use nerve::{build_nerve, build_nerve_with, build_pruned_nerve_with, maximal_members, nerve_of_family, Budget, Nerve, NerveStats};
pub use pi1::{pi1_presentation, Presentation};
