use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use geojoin::certificates::{
    d_core_point, ray_witness, star_certificate, strong_separation, RayBudget,
};
use geojoin::harness::{
    analyze, generate_instance, read_findings, render_svg, search_counterexamples, verify_report, AnalysisReport,
    AnalyzeOptions, Certificate, MatroidChoice, Overlays, Replay, SearchConfig,
};
use geojoin::join::{join_contains, Instance, Label};
use geojoin::{Error, QPoint, Rational, Result};

#[derive(Parser)]
#[command(name = "geojoin", version, about = "Exact topology of geometric joins")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate seeded random instances.
    Gen {
        #[command(flatten)]
        gen: GenArgs,
        /// Output file (one instance) or directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Nerve, homology, collapse, pi_1 and certificates for one instance.
    Analyze {
        /// Instance JSON; generated from the flags when absent.
        instance: Option<PathBuf>,
        #[command(flatten)]
        gen: GenArgs,
        /// Campaign index of the generated instance.
        #[arg(long, default_value_t = 0)]
        index: u64,
        /// Include the approximate filtration trace.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search a seeded campaign for nontrivial topology.
    Search {
        #[command(flatten)]
        gen: GenArgs,
        /// JSONL file that flagged instances are appended to.
        #[arg(long)]
        findings: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Produce one certificate for an instance.
    Certify {
        instance: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Query point for separation and membership, as `x,y,...` with rationals.
        #[arg(long, default_value = "origin")]
        point: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate, a report or a findings log.
    Verify {
        /// Instance JSON, needed for --certificate and --report.
        instance: Option<PathBuf>,
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        findings: Option<PathBuf>,
    },
    /// Draw a planar instance as SVG.
    Render {
        instance: PathBuf,
        /// Overlay the star center and its Tverberg partition.
        #[arg(long)]
        star: bool,
        /// Overlay a d-core point.
        #[arg(long)]
        core: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Star,
    Separation,
    Ray,
    Dcore,
    Membership,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Class sizes, comma separated.
    #[arg(long, default_value = "2,2,2")]
    classes: String,
    /// `partition`, `uniform:r` or `bases:FILE`.
    #[arg(long, default_value = "partition")]
    matroid: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: u64,
    /// Coordinates are drawn from `[-bound, bound]`.
    #[arg(long, default_value_t = 10)]
    bound: i64,
    /// Nerve dimension cap.
    #[arg(long)]
    cap: Option<usize>,
    /// Maximum number of intersection LPs per nerve.
    #[arg(long)]
    budget_lp: Option<u64>,
    /// Filtration tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Build nerves over the basis simplices not contained in another.
    #[arg(long)]
    prune: bool,
}

impl GenArgs {
    fn config(&self) -> Result<SearchConfig> {
        let classes = self
            .classes
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|e| Error::Input(format!("class size {s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let mut c = SearchConfig::new(self.dim, classes).with_seed(self.seed).with_count(self.count).with_bound(self.bound);
        c.matroid = parse_matroid(&self.matroid)?;
        c.cap = self.cap;
        c.budget.max_lp_calls = self.budget_lp;
        c.tolerance = self.tolerance;
        c.prune = self.prune;
        c.validate()?;
        Ok(c)
    }
}

fn parse_matroid(s: &str) -> Result<MatroidChoice> {
    if s == "partition" {
        return Ok(MatroidChoice::Partition);
    }
    if let Some(r) = s.strip_prefix("uniform:") {
        return r.parse().map(MatroidChoice::Uniform).map_err(|e| Error::Input(format!("uniform rank {r:?}: {e}")));
    }
    if let Some(file) = s.strip_prefix("bases:") {
        let bases: Vec<Vec<Label>> = serde_json::from_str(&std::fs::read_to_string(file)?)?;
        return Ok(MatroidChoice::Bases(bases));
    }
    Err(Error::Input(format!("unknown matroid {s:?}; use partition, uniform:r or bases:FILE")))
}

fn parse_point(s: &str, dim: usize) -> Result<QPoint> {
    if s == "origin" {
        return Ok(QPoint::origin(dim));
    }
    let coords = s
        .split(',')
        .map(|c| c.trim().parse::<Rational>().map_err(|_| Error::Input(format!("bad coordinate {c:?}"))))
        .collect::<Result<Vec<_>>>()?;
    if coords.len() != dim {
        return Err(Error::Input(format!("point has {} coordinates, instance dimension {dim}", coords.len())));
    }
    Ok(QPoint::new(coords))
}

/// Writes a line to stdout; a closed pipe ends output quietly.
fn print_line(text: &str) -> Result<()> {
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => print_line(text.trim_end()),
    }
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&std::fs::read_to_string(path)?).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn mismatch(problems: Vec<String>) -> Result<()> {
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::Inconsistency(problems.join("; ")))
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { gen, out } => {
            let config = gen.config()?;
            match (&out, config.count) {
                (Some(dir), n) if n > 1 || dir.is_dir() => {
                    std::fs::create_dir_all(dir)?;
                    for i in 0..n {
                        generate_instance(&config, i)?.save(&dir.join(format!("instance-{i:05}.json")))?;
                    }
                }
                (Some(file), _) => generate_instance(&config, 0)?.save(file)?,
                (None, n) => {
                    for i in 0..n {
                        let inst = generate_instance(&config, i)?;
                        print_line(&serde_json::to_string(&inst.to_file())?)?;
                    }
                }
            }
        }
        Command::Analyze { instance, gen, index, trace, out } => {
            let config = gen.config()?;
            let (inst, replay) = match instance {
                Some(p) => (Instance::load(&p)?, None),
                None => (generate_instance(&config, index)?, Some(Replay::new(&config, index))),
            };
            let mut opts = AnalyzeOptions::for_config(&config);
            opts.cap = config.cap.unwrap_or(inst.dimension() + 1);
            if trace {
                opts = opts.with_trace(config.tolerance, 100_000);
            }
            let report = analyze(&inst, &opts, replay)?;
            emit(&serde_json::to_string_pretty(&report)?, out.as_deref())?;
            if let Some(why) = report.incomplete {
                return Err(Error::BudgetExceeded(why));
            }
        }
        Command::Search { gen, findings, out } => {
            let config = gen.config()?;
            let summary = search_counterexamples(&config, findings.as_deref())?;
            emit(&serde_json::to_string_pretty(&summary)?, out.as_deref())?;
            if summary.incomplete > 0 {
                return Err(Error::BudgetExceeded(format!("{} instances incomplete", summary.incomplete)));
            }
        }
        Command::Certify { instance, kind, point, samples, seed, out } => {
            let inst = Instance::load(&instance)?;
            let cert = match kind {
                Kind::Star => Some(Certificate::Star { report: star_certificate(&inst, samples, seed)? }),
                Kind::Separation => {
                    let o = parse_point(&point, inst.dimension())?;
                    let certificate = strong_separation(&inst, &o)?;
                    Some(Certificate::Separation { point: o, certificate })
                }
                Kind::Ray => ray_witness(&inst, RayBudget { seed, ..Default::default() })?
                    .map(|witness| Certificate::Ray { witness }),
                Kind::Dcore => d_core_point(&inst)?.map(|point| Certificate::Core { point }),
                Kind::Membership => {
                    let o = parse_point(&point, inst.dimension())?;
                    join_contains(&inst, &o)?.map(|witness| Certificate::Membership { point: o, witness })
                }
            };
            match cert {
                Some(c) => emit(&serde_json::to_string_pretty(&c)?, out.as_deref())?,
                None => eprintln!("no certificate of this kind exists or was found"),
            }
        }
        Command::Verify { instance, certificate, report, findings } => {
            let load = || -> Result<Instance> {
                let p = instance.as_ref().ok_or_else(|| Error::Input("an instance path is required".into()))?;
                Instance::load(p)
            };
            let mut checked = false;
            if let Some(c) = certificate {
                let cert: Certificate = load_json(&c)?;
                if !cert.verify(&load()?)? {
                    return Err(Error::Inconsistency(format!("{} certificate does not verify", cert.kind())));
                }
                println!("{} certificate verified", cert.kind());
                checked = true;
            }
            if let Some(r) = report {
                let rep: AnalysisReport = load_json(&r)?;
                mismatch(verify_report(&load()?, &rep)?)?;
                println!("report verified");
                checked = true;
            }
            if let Some(f) = findings {
                let all = read_findings(&f)?;
                for (i, finding) in all.iter().enumerate() {
                    mismatch(finding.verify()?.into_iter().map(|p| format!("finding {}: {p}", i + 1)).collect())?;
                }
                println!("{} findings verified", all.len());
                checked = true;
            }
            if !checked {
                return Err(Error::Input("nothing to verify; pass --certificate, --report or --findings".into()));
            }
        }
        Command::Render { instance, star, core, out } => {
            let inst = Instance::load(&instance)?;
            let mut overlays = Overlays::default();
            if star {
                let r = star_certificate(&inst, 0, 0)?;
                overlays.star_center = Some(r.center);
                overlays.tverberg = Some(r.tverberg);
            }
            if core {
                overlays.core = d_core_point(&inst)?;
            }
            emit(&render_svg(&inst, &overlays)?, out.as_deref())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("geojoin: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
