use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::analyze::{analyze, verify_report, AnalysisReport, AnalyzeOptions, Replay};
use super::generate::{generate_instance, SearchConfig};
use crate::error::{Error, Result};
use crate::join::{Instance, InstanceFile};

/// Instances analyzed in parallel before their findings are written.
const CHUNK: u64 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    /// Nonzero reduced homology where the join is conjectured contractible.
    Homology,
    /// Trivial homology with a presentation that did not simplify to nothing.
    Pi1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Clean,
    Flagged,
    Incomplete,
    /// Outside the conjectured regime; analyzed but never flagged.
    OutOfRegime,
}

/// One line of the findings log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub flags: Vec<Flag>,
    pub instance: InstanceFile,
    pub report: AnalysisReport,
}

impl Finding {
    /// Re-checks the embedded report against the embedded instance.
    pub fn verify(&self) -> Result<Vec<String>> {
        let inst = Instance::from_file(self.instance.clone())?;
        verify_report(&inst, &self.report)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub config_digest: String,
    pub requested: u64,
    pub processed: u64,
    pub flagged_homology: u64,
    pub flagged_pi1: u64,
    pub incomplete: u64,
    pub out_of_regime: u64,
    /// Per-instance status, by index.
    pub statuses: Vec<Status>,
    pub seconds: f64,
}

/// `m ≥ d+1` classes, or rank at least `d+1` for other matroids.
pub fn in_conjectured_regime(instance: &Instance) -> bool {
    let d = instance.dimension();
    match instance.class_count() {
        Some(m) => m > d,
        None => instance.full_rank() > d,
    }
}

fn flags_of(instance: &Instance, report: &AnalysisReport) -> Vec<Flag> {
    let mut flags = Vec::new();
    if !in_conjectured_regime(instance) {
        return flags;
    }
    if report.homology_nontrivial() {
        flags.push(Flag::Homology);
    }
    if report.pi1_suspicious() {
        flags.push(Flag::Pi1);
    }
    flags
}

/// Streams `config.count` generated instances through the analysis, appending
/// every flagged one (instance and full report) to `findings` as a JSON line.
pub fn search_counterexamples(config: &SearchConfig, findings: Option<&Path>) -> Result<SearchSummary> {
    config.validate()?;
    let start = Instant::now();
    let mut opts = AnalyzeOptions::for_config(config);
    opts.certificates = false;
    let mut file = match findings {
        Some(p) => Some(OpenOptions::new().create(true).append(true).open(p)?),
        None => None,
    };
    let mut summary = SearchSummary {
        config_digest: config.digest(),
        requested: config.count,
        processed: 0,
        flagged_homology: 0,
        flagged_pi1: 0,
        incomplete: 0,
        out_of_regime: 0,
        statuses: Vec::with_capacity(config.count as usize),
        seconds: 0.0,
    };
    let mut lo = 0;
    while lo < config.count {
        let hi = (lo + CHUNK).min(config.count);
        let results: Vec<(Instance, AnalysisReport)> = (lo..hi)
            .into_par_iter()
            .map(|index| {
                let inst = generate_instance(config, index)?;
                let report = analyze(&inst, &opts, Some(Replay::new(config, index)))?;
                Ok((inst, report))
            })
            .collect::<Result<_>>()?;
        for (inst, report) in results {
            summary.processed += 1;
            let flags = flags_of(&inst, &report);
            let status = if !flags.is_empty() {
                Status::Flagged
            } else if report.incomplete.is_some() {
                Status::Incomplete
            } else if !in_conjectured_regime(&inst) {
                Status::OutOfRegime
            } else {
                Status::Clean
            };
            match status {
                Status::Incomplete => summary.incomplete += 1,
                Status::OutOfRegime => summary.out_of_regime += 1,
                _ => {}
            }
            summary.flagged_homology += flags.contains(&Flag::Homology) as u64;
            summary.flagged_pi1 += flags.contains(&Flag::Pi1) as u64;
            summary.statuses.push(status);
            if !flags.is_empty() {
                if let Some(f) = file.as_mut() {
                    let line = serde_json::to_string(&Finding { flags, instance: inst.to_file(), report })?;
                    writeln!(f, "{line}")?;
                    f.flush()?;
                }
            }
        }
        lo = hi;
    }
    summary.seconds = start.elapsed().as_secs_f64();
    Ok(summary)
}

/// Reads a findings log, one finding per nonblank line.
pub fn read_findings(path: &Path) -> Result<Vec<Finding>> {
    let f = std::fs::File::open(path)?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line).map_err(|e| Error::Input(format!("findings line {}: {e}", i + 1)))?,
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_search_is_clean_and_counts_everything() {
        let cfg = SearchConfig::new(2, vec![2, 2, 1]).with_seed(21).with_count(40);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("findings.jsonl");
        let s = search_counterexamples(&cfg, Some(&path)).unwrap();
        assert_eq!(s.processed, 40);
        assert_eq!(s.statuses.len(), 40);
        assert_eq!(s.flagged_homology + s.flagged_pi1, 0);
        assert!(read_findings(&path).unwrap().is_empty());
    }

    #[test]
    fn two_planar_classes_are_never_flagged() {
        // Two classes in the plane: the join can have holes but is never flagged.
        let cfg = SearchConfig::new(2, vec![2, 2]).with_seed(3).with_count(30);
        let s = search_counterexamples(&cfg, None).unwrap();
        assert_eq!(s.out_of_regime + s.incomplete, 30);
        assert_eq!(s.flagged_homology, 0);
    }

    #[test]
    fn findings_round_trip_and_verify() {
        // The crossing pair has a hole; the flag is attached by hand.
        let cfg = SearchConfig::new(2, vec![2, 2]).with_seed(0);
        let inst = crate::harness::partition_instance(2, &[&[&[-1, -1], &[-1, 1]], &[&[1, 1], &[1, -1]]]).unwrap();
        let report = analyze(&inst, &AnalyzeOptions::for_config(&cfg), None).unwrap();
        let f = Finding { flags: vec![Flag::Homology], instance: inst.to_file(), report };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.jsonl");
        std::fs::write(&path, format!("{}\n\n", serde_json::to_string(&f).unwrap())).unwrap();
        let back = read_findings(&path).unwrap();
        assert_eq!(back.len(), 1);
        assert!(back[0].verify().unwrap().is_empty());
    }
}
