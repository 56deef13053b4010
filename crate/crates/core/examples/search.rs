//! A small seeded search campaign with a findings log.

use geojoin::harness::{read_findings, search_counterexamples, SearchConfig};

fn main() -> geojoin::Result<()> {
    let cfg = SearchConfig::new(2, vec![2, 2, 2]).with_seed(42).with_count(50);
    let path = std::env::temp_dir().join(format!("geojoin-findings-{}.jsonl", std::process::id()));
    let summary = search_counterexamples(&cfg, Some(&path))?;
    println!("config {}", summary.config_digest);
    println!(
        "{} processed, {} homology flags, {} pi_1 flags, {} incomplete, {:.2}s",
        summary.processed, summary.flagged_homology, summary.flagged_pi1, summary.incomplete, summary.seconds
    );
    for f in read_findings(&path)? {
        println!("finding {:?}: problems {:?}", f.flags, f.verify()?);
    }
    let _ = std::fs::remove_file(path);
    Ok(())
}
