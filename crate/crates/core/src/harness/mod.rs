//! Instance generation, analysis reports, the counterexample search loop and
//! SVG rendering.

pub mod analyze;
pub mod generate;
pub mod render;
pub mod search;

pub use analyze::{
    analyze, verify_report, AnalysisReport, AnalyzeOptions, Attempt, Certificate, Outcome, Replay,
};
pub use generate::{generate_instance, partition_instance, MatroidChoice, Mode, SearchConfig};
pub use render::{convex_hull_2d, render_svg, Overlays};
pub use search::{read_findings, search_counterexamples, Finding, Flag, SearchSummary, Status};
pub use crate::rng::SplitMix64;
