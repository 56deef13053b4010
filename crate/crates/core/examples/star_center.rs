//! Tverberg star center and d-core point of a generated planar instance.

use geojoin::certificates::{d_core_point, star_certificate};
use geojoin::harness::{generate_instance, SearchConfig};

fn main() -> geojoin::Result<()> {
    let cfg = SearchConfig::new(2, vec![2; 7]).with_seed(7);
    let inst = generate_instance(&cfg, 0)?;
    let report = star_certificate(&inst, 10, 1)?;
    println!("center {:?}", report.center);
    println!("Tverberg parts {:?}", report.tverberg.parts);
    println!("{} pigeonhole entries, {} segment checks", report.pigeonhole.len(), report.segment_checks.len());
    println!("verifies: {}", report.verify(&inst)?);
    println!("d-core point {:?}", d_core_point(&inst)?);
    Ok(())
}
