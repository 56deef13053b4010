use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::generate::SearchConfig;
use crate::certificates::{
    is_d_core_point, ray_witness, star_certificate, strong_separation, RayBudget, RayWitness, SeparationCertificate,
    StarCenterReport,
};
use crate::error::{Error, Result};
use crate::filtration::{filtration_trace, FiltrationOptions, FiltrationTrace};
use crate::geometry::point::QPoint;
use crate::join::{join_contains, Instance, MembershipWitness};
use crate::topology::{
    build_nerve_with, build_pruned_nerve_with, greedy_collapse, homology, pi1_presentation, Budget, CollapseCertificate,
    HomologyReport, Nerve, NerveStats,
};

/// Enough to regenerate a generated instance bit for bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Replay {
    pub seed: u64,
    pub index: u64,
    pub config_digest: String,
    pub config: SearchConfig,
}

impl Replay {
    pub fn new(config: &SearchConfig, index: u64) -> Self {
        Replay { seed: config.seed, index, config_digest: config.digest(), config: config.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NerveSummary {
    pub cap: usize,
    pub counts: Vec<usize>,
    pub cap_binding: bool,
    pub stats: NerveStats,
    /// Basis indices kept when contained basis simplices were pruned.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollapseSummary {
    pub pairs: usize,
    pub residual_counts: Vec<usize>,
    pub collapsed_to_point: bool,
    /// Collapsed to a point with no faces at the cap, so nothing was cut off.
    pub certifies_contractible: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pi1Summary {
    pub base_vertex: usize,
    pub generators: usize,
    pub relators: usize,
}

/// A certificate with the data its verifier needs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Star { report: StarCenterReport },
    Separation { point: QPoint, certificate: SeparationCertificate },
    Ray { witness: RayWitness },
    Membership { point: QPoint, witness: MembershipWitness },
    Collapse {
        cap: usize,
        /// Built over the containment-maximal basis simplices.
        #[serde(default)]
        pruned: bool,
        certificate: CollapseCertificate,
    },
    Core { point: QPoint },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Star { .. } => "star",
            Certificate::Separation { .. } => "separation",
            Certificate::Ray { .. } => "ray",
            Certificate::Membership { .. } => "membership",
            Certificate::Collapse { .. } => "collapse",
            Certificate::Core { .. } => "core",
        }
    }

    /// Exact standalone check against `instance`.
    pub fn verify(&self, instance: &Instance) -> Result<bool> {
        match self {
            Certificate::Star { report } => report.verify(instance),
            Certificate::Separation { point, certificate } => {
                Ok(point.dim() == instance.dimension() && certificate.verify(instance, point))
            }
            Certificate::Ray { witness } => witness.verify(instance),
            Certificate::Membership { point, witness } => witness.verify(instance, point),
            Certificate::Collapse { cap, pruned, certificate } => {
                Ok(certificate.verify(&nerve_for(instance, *cap, Budget::default(), *pruned)?.1.complex))
            }
            Certificate::Core { point } => is_d_core_point(instance, point),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Verified,
    NotFound,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attempt {
    pub kind: String,
    pub outcome: Outcome,
    pub detail: Option<String>,
}

/// Wall-clock seconds per stage.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub nerve: f64,
    pub homology: f64,
    pub collapse: f64,
    pub pi1: f64,
    pub certificates: f64,
    pub filtration: f64,
    pub total: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub instance_digest: String,
    pub replay: Option<Replay>,
    pub dimension: usize,
    pub classes: Option<usize>,
    pub rank: usize,
    pub basis_count: usize,
    pub nerve: NerveSummary,
    pub homology: HomologyReport,
    pub collapse: CollapseSummary,
    pub pi1: Option<Vec<Pi1Summary>>,
    pub attempts: Vec<Attempt>,
    pub certificates: Vec<Certificate>,
    pub filtration: Option<FiltrationTrace>,
    pub timings: Timings,
    /// Why the analysis is partial, if it is.
    pub incomplete: Option<String>,
}

impl AnalysisReport {
    /// Nonzero reduced Betti numbers in the computed range.
    pub fn homology_nontrivial(&self) -> bool {
        !self.homology.is_trivial()
    }

    /// Trivial homology but a presentation that did not simplify away.
    pub fn pi1_suspicious(&self) -> bool {
        self.homology.is_trivial() && self.pi1.as_ref().is_some_and(|p| p.iter().any(|c| c.generators > 0))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeOptions {
    pub cap: usize,
    pub budget: Budget,
    pub certificates: bool,
    pub star_samples: usize,
    pub star_seed: u64,
    pub ray: RayBudget,
    /// Include the approximate filtration trace, capped at this many faces.
    pub trace: Option<(FiltrationOptions, usize)>,
    /// Build the nerve over the containment-maximal basis simplices only.
    pub prune_contained: bool,
}

impl AnalyzeOptions {
    pub fn new(cap: usize) -> Self {
        AnalyzeOptions {
            cap,
            budget: Budget::default(),
            certificates: true,
            star_samples: 20,
            star_seed: 0,
            ray: RayBudget::default(),
            trace: None,
            prune_contained: false,
        }
    }

    pub fn for_config(config: &SearchConfig) -> Self {
        let mut o = AnalyzeOptions::new(config.effective_cap());
        o.budget = config.budget;
        o.prune_contained = config.prune;
        o
    }

    /// Adds the filtration trace at the configured tolerance.
    pub fn with_trace(mut self, tolerance: f64, max_faces: usize) -> Self {
        self.trace = Some((FiltrationOptions { tolerance, ..Default::default() }, max_faces));
        self
    }
}

/// The nerve of all basis simplices, or of the containment-maximal ones.
fn nerve_for(instance: &Instance, cap: usize, budget: Budget, pruned: bool) -> Result<(Option<Vec<usize>>, Nerve)> {
    if pruned {
        let (kept, nerve) = build_pruned_nerve_with(instance, cap, budget)?;
        Ok((Some(kept), nerve))
    } else {
        Ok((None, build_nerve_with(instance, cap, budget)?))
    }
}

fn secs(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

/// Nerve, homology, collapse, fundamental group and the certificates that
/// apply to the instance's parameters.
pub fn analyze(instance: &Instance, opts: &AnalyzeOptions, replay: Option<Replay>) -> Result<AnalysisReport> {
    let start = Instant::now();
    let mut timings = Timings::default();
    let d = instance.dimension();

    let t = Instant::now();
    let (cover, nerve) = nerve_for(instance, opts.cap, opts.budget, opts.prune_contained)?;
    timings.nerve = secs(t);
    let complex = &nerve.complex;
    let mut incomplete = nerve.incomplete.clone();

    let t = Instant::now();
    let hom = homology(complex, true)?;
    timings.homology = secs(t);

    let t = Instant::now();
    let cert = greedy_collapse(complex);
    timings.collapse = secs(t);
    let collapse = CollapseSummary {
        pairs: cert.pairs.len(),
        residual_counts: cert.residual.counts(),
        collapsed_to_point: cert.collapsed_to_point(),
        certifies_contractible: cert.collapsed_to_point() && !complex.cap_binding() && nerve.is_complete(),
    };

    let t = Instant::now();
    let pi1 = if complex.cap() >= 2 {
        Some(
            pi1_presentation(complex)?
                .into_iter()
                .map(|p| Pi1Summary { base_vertex: p.base_vertex, generators: p.generators.len(), relators: p.relators.len() })
                .collect(),
        )
    } else {
        None
    };
    timings.pi1 = secs(t);

    let t = Instant::now();
    let mut attempts = Vec::new();
    let mut certificates = Vec::new();
    if opts.certificates {
        if collapse.certifies_contractible {
            certificates.push(Certificate::Collapse { cap: opts.cap, pruned: opts.prune_contained, certificate: cert });
        }
        run_certificates(instance, opts, &mut attempts, &mut certificates)?;
    }
    timings.certificates = secs(t);

    let t = Instant::now();
    let filtration = match &opts.trace {
        Some((fo, max)) => match filtration_trace(instance, opts.cap, fo, *max) {
            Ok(tr) => Some(tr),
            Err(Error::BudgetExceeded(m)) => {
                incomplete.get_or_insert(format!("filtration trace skipped: {m}"));
                None
            }
            Err(e) => return Err(e),
        },
        None => None,
    };
    timings.filtration = secs(t);
    timings.total = secs(start);

    Ok(AnalysisReport {
        instance_digest: instance.digest(),
        replay,
        dimension: d,
        classes: instance.class_count(),
        rank: instance.full_rank(),
        basis_count: instance.basis_count(),
        nerve: NerveSummary {
            cap: complex.cap(),
            counts: complex.counts(),
            cap_binding: complex.cap_binding(),
            stats: nerve.stats.clone(),
            cover,
        },
        homology: hom,
        collapse,
        pi1,
        attempts,
        certificates,
        filtration,
        timings,
        incomplete,
    })
}

fn attempt(kind: &str, outcome: Outcome, detail: Option<String>) -> Attempt {
    Attempt { kind: kind.into(), outcome, detail }
}

fn run_certificates(
    instance: &Instance,
    opts: &AnalyzeOptions,
    attempts: &mut Vec<Attempt>,
    certificates: &mut Vec<Certificate>,
) -> Result<()> {
    let d = instance.dimension();
    if instance.full_rank() > d * (d + 1) {
        let report = star_certificate(instance, opts.star_samples, opts.star_seed)?;
        attempts.push(attempt("star", Outcome::Verified, Some(format!("center {:?}", report.center))));
        certificates.push(Certificate::Star { report });
    } else {
        attempts.push(attempt("star", Outcome::NotApplicable, Some("rank does not exceed d(d+1)".into())));
    }

    let o = QPoint::origin(d);
    let partition_regime = instance.class_count().is_some_and(|m| m >= d + 1);
    if !partition_regime {
        attempts.push(attempt("separation", Outcome::NotApplicable, Some("needs at least d+1 classes".into())));
        return Ok(());
    }
    if let Some(witness) = join_contains(instance, &o)? {
        attempts.push(attempt("separation", Outcome::NotApplicable, Some("origin lies in the join".into())));
        certificates.push(Certificate::Membership { point: o, witness });
        return Ok(());
    }
    let certificate = strong_separation(instance, &o)?;
    attempts.push(attempt("separation", Outcome::Verified, Some(format!("classes {} and {}", certificate.i, certificate.j))));
    certificates.push(Certificate::Separation { point: o, certificate });
    if d == 3 {
        match ray_witness(instance, opts.ray)? {
            Some(witness) => {
                attempts.push(attempt("ray", Outcome::Verified, Some(format!("attempt {}", witness.attempt))));
                certificates.push(Certificate::Ray { witness });
            }
            None => attempts.push(attempt("ray", Outcome::NotFound, Some("retry budget exhausted".into()))),
        }
    }
    Ok(())
}

/// Mismatches between a stored report and a fresh exact recomputation.
pub fn verify_report(instance: &Instance, report: &AnalysisReport) -> Result<Vec<String>> {
    let mut problems = Vec::new();
    if instance.digest() != report.instance_digest {
        problems.push("instance digest differs".into());
    }
    if let Some(r) = &report.replay {
        if r.config.digest() != r.config_digest {
            problems.push("config digest differs".into());
        }
        if super::generate::generate_instance(&r.config, r.index)? != *instance {
            problems.push("replayed instance differs".into());
        }
    }
    let (cover, nerve) = nerve_for(instance, report.nerve.cap, Budget::default(), report.nerve.cover.is_some())?;
    let nerve = nerve.complex;
    if cover != report.nerve.cover {
        problems.push("pruned cover differs".into());
    }
    if nerve.counts() != report.nerve.counts {
        problems.push(format!("nerve counts {:?} != {:?}", nerve.counts(), report.nerve.counts));
    }
    if homology(&nerve, true)? != report.homology {
        problems.push("homology differs".into());
    }
    for c in &report.certificates {
        if !c.verify(instance)? {
            problems.push(format!("{} certificate fails verification", c.kind()));
        }
    }
    Ok(problems)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::generate::{generate_instance, partition_instance};

    #[test]
    fn crossing_pair_fixture() {
        let inst = partition_instance(2, &[&[&[-1, -1], &[-1, 1]], &[&[1, 1], &[1, -1]]]).unwrap();
        let r = analyze(&inst, &AnalyzeOptions::new(3), None).unwrap();
        assert_eq!(r.nerve.counts, vec![4, 5]);
        assert_eq!(r.homology.betti, vec![0, 2, 0]);
        assert!(!r.collapse.collapsed_to_point);
        assert_eq!(r.pi1.as_ref().unwrap()[0].generators, 2);
        assert!(!r.pi1_suspicious() && r.homology_nontrivial());
    }

    #[test]
    fn full_simplex_nerve_collapses() {
        let inst = partition_instance(2, &[&[&[0, 0]], &[&[4, 0], &[0, 4]], &[&[1, 1], &[2, 1]]]).unwrap();
        let r = analyze(&inst, &AnalyzeOptions::new(4), None).unwrap();
        assert_eq!(r.nerve.counts, vec![4, 6, 4, 1]);
        assert!(r.collapse.certifies_contractible);
        assert!(r.certificates.iter().any(|c| c.kind() == "collapse"));
        assert!(verify_report(&inst, &r).unwrap().is_empty());
    }

    #[test]
    fn pruned_cover_keeps_homology() {
        // Classes of sizes 4, 1, 4, 4: many basis triangles nest.
        let cfg = SearchConfig::new(2, vec![4, 1, 4, 4]).with_seed(0xa2);
        let inst = generate_instance(&cfg, 7).unwrap();
        let full = analyze(&inst, &AnalyzeOptions::new(3), None).unwrap();
        let mut opts = AnalyzeOptions::new(3);
        opts.prune_contained = true;
        let pruned = analyze(&inst, &opts, None).unwrap();
        let kept = pruned.nerve.cover.clone().unwrap();
        assert!(kept.len() < inst.basis_count());
        assert_eq!(pruned.nerve.counts[0], kept.len());
        assert_eq!(pruned.homology, full.homology);
        assert!(verify_report(&inst, &pruned).unwrap().is_empty());
        let mut tampered = pruned.clone();
        tampered.nerve.cover.as_mut().unwrap().pop();
        assert!(!verify_report(&inst, &tampered).unwrap().is_empty());
    }

    #[test]
    fn replay_and_tamper_detection() {
        let cfg = SearchConfig::new(3, vec![2; 4]).with_seed(12);
        let inst = generate_instance(&cfg, 2).unwrap();
        let mut r = analyze(&inst, &AnalyzeOptions::for_config(&cfg), Some(Replay::new(&cfg, 2))).unwrap();
        assert!(r.homology.is_trivial());
        assert!(verify_report(&inst, &r).unwrap().is_empty());
        r.nerve.counts[1] += 1;
        assert_eq!(verify_report(&inst, &r).unwrap().len(), 1);
        let json = serde_json::to_string(&r).unwrap();
        let back: AnalysisReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.certificates, r.certificates);
    }
}
