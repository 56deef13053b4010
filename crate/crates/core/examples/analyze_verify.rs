//! Full analysis of a generated instance, a JSON round trip, and an
//! independent re-check of the report.

use geojoin::harness::{analyze, generate_instance, verify_report, AnalysisReport, AnalyzeOptions, Replay, SearchConfig};
use geojoin::join::Instance;

fn main() -> geojoin::Result<()> {
    let cfg = SearchConfig::new(2, vec![2, 3, 2]).with_seed(11);
    let inst = generate_instance(&cfg, 3)?;
    let report = analyze(&inst, &AnalyzeOptions::for_config(&cfg), Some(Replay::new(&cfg, 3)))?;
    println!("nerve counts {:?}", report.nerve.counts);
    println!("reduced betti {:?}, collapsed to a point: {}", report.homology.betti, report.collapse.collapsed_to_point);
    for a in &report.attempts {
        println!("attempt {a:?}");
    }
    for c in &report.certificates {
        println!("{} certificate verifies: {}", c.kind(), c.verify(&inst)?);
    }

    let text = serde_json::to_string(&report)?;
    let back: AnalysisReport = serde_json::from_str(&text)?;
    let reloaded = Instance::from_json(&inst.to_json())?;
    println!("{} bytes of report; recheck problems {:?}", text.len(), verify_report(&reloaded, &back)?);
    Ok(())
}
