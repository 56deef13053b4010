//! Constructive certificates with exact standalone verifiers: Tverberg star
//! centers, d-core points, strong separations, planar star centers and ray
//! witnesses.

mod planar;
mod ray;
mod star;
mod tverberg;

pub use planar::{planar_star_center, segment_meet, verify_planar_kernel, KernelSample, PlanarKernelReport};
pub use ray::{ray_spot_check, ray_witness, strong_separation, RayBudget, RayWitness, SeparationCertificate};
pub use star::{d_core_point, is_d_core_point, star_certificate, PigeonholeEntry, SegmentCheck, StarCenterReport};
pub use tverberg::{find_tverberg, SetPartitions, TverbergCertificate};
