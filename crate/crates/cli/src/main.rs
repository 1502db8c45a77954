//! `popstack` command-line front end.
//!
//! Exit codes: 0 success, 1 a verify run found counterexamples, 2 usage or
//! parameter error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use popstack::bound::{all_bounds, best_bound, ElementBound};
use popstack::constructions::{family_metrics, plot_points, Family, FamilySpec};
use popstack::motion::TraceMotions;
use popstack::stats::{self, DnEstimate, Source};
use popstack::verify::{self, Claim, ClaimReport, PivotWindow};
use popstack::{sort_trace, InteriorMode, MotionTable, Permutation};

const CLAIM_HELP: &str = "Claim ids: obs-2.1 (no decreasing run longer than 3 after a pass), \
obs-3.1 (pivot centers were interior two sorts earlier), obs-3.2 (movers kept moving or were \
interior), lemma-3.3 (pop-stop counts), pivot-window (no pivot centers near the ends), thm-3.4 \
(t* lower bound), all (every claim; mode-taking claims in both modes).\n\
Window ids: ceil-half w(s)=ceil((s-1)/2) [default], floor-half-plus-one w(s)=floor(s/2)+1, \
first-last-i w(s)=floor((s+3)/2), within-i-minus-one w(s)=floor((s+1)/2).";

#[derive(Parser)]
#[command(name = "popstack", version, about = "Pop-stack sorting laboratory")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write output to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print pop(p).
    Sort { permutation: Permutation },
    /// Print the full sort trace as JSON.
    Trace {
        permutation: Permutation,
        /// Include the motion table of every sort.
        #[arg(long)]
        motions: bool,
    },
    /// Check a claim and write a JSON report.
    #[command(after_help = CLAIM_HELP)]
    Verify(VerifyArgs),
    /// Print the best t* lower bound and every per-element bound as JSON.
    Bound { permutation: Permutation },
    /// Mean number of passes, exact or sampled, as CSV.
    Dn(StatArgs),
    /// Histogram of t* as CSV.
    Hist(StatArgs),
    /// Generate a construction family member.
    Construct {
        #[arg(long)]
        family: FamilyArg,
        #[arg(long)]
        k: usize,
        /// Emit pass counts, pivot counts and arrival sorts as JSON.
        #[arg(long, conflicts_with = "plot_data")]
        metrics: bool,
        /// Emit `position,value` CSV for a scatter plot.
        #[arg(long)]
        plot_data: bool,
    },
    /// Fraction of samples with a large element far left after one pass.
    Lichev(SampleArgs),
    /// Per-sample t* against the best lower bound, as CSV; summary JSON on stderr.
    Gap {
        #[command(flatten)]
        sample: SampleArgs,
        /// Write only the summary JSON to the output.
        #[arg(long)]
        summary: bool,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Claim id, or `all`.
    #[arg(long, value_parser = claim_values())]
    claim: String,
    /// Check every permutation of length 1..=n-max.
    #[arg(long, conflicts_with_all = ["perm", "samples"])]
    n_max: Option<usize>,
    /// Check only these permutations (repeatable).
    #[arg(long, conflicts_with = "samples")]
    perm: Vec<Permutation>,
    /// Length for sampled checking.
    #[arg(long, requires = "samples")]
    n: Option<usize>,
    /// Number of uniform samples.
    #[arg(long, requires = "n")]
    samples: Option<u64>,
    /// Master seed for sampled checking.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Interior reading for obs-3.1 and obs-3.2.
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    mode: ModeArg,
    /// Pivot-window id.
    #[arg(long, default_value = "ceil-half", value_parser = window_values())]
    window: String,
    /// First sort checked by pivot-window.
    #[arg(long, default_value_t = 2)]
    s_min: usize,
}

fn claim_values() -> clap::builder::PossibleValuesParser {
    let mut ids: Vec<&'static str> = Claim::IDS.to_vec();
    ids.push("all");
    clap::builder::PossibleValuesParser::new(ids)
}

fn window_values() -> clap::builder::PossibleValuesParser {
    clap::builder::PossibleValuesParser::new(PivotWindow::ALL.map(PivotWindow::id))
}

#[derive(Args)]
struct StatArgs {
    #[arg(long)]
    n: usize,
    /// Enumerate all n! permutations.
    #[arg(long, conflicts_with = "samples", required_unless_present = "samples")]
    exact: bool,
    /// Number of uniform samples.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Weak,
    Both,
}

impl ModeArg {
    fn modes(self) -> Vec<InteriorMode> {
        match self {
            ModeArg::Strict => vec![InteriorMode::Strict],
            ModeArg::Weak => vec![InteriorMode::Weak],
            ModeArg::Both => vec![InteriorMode::Strict, InteriorMode::Weak],
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Asymmetric,
    Symmetric,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Asymmetric => Family::Asymmetric,
            FamilyArg::Symmetric => Family::Symmetric,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<popstack::Error> for Failure {
    fn from(e: popstack::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(io::Error::other(e))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(io::Error::other(e))
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = pool.install(|| {
        let mut out = open_output(cli.output.as_ref())?;
        let clean = run(cli.command, &mut out)?;
        out.flush()?;
        Ok(clean)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn open_output(path: Option<&PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize + ?Sized>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Returns `Ok(false)` when a verify run found counterexamples.
fn run(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Sort { permutation } => {
            writeln!(out, "{}", permutation.pop())?;
        }
        Command::Trace {
            permutation,
            motions,
        } => {
            #[derive(Serialize)]
            struct TraceOut<'a> {
                permutation: &'a Permutation,
                t_star: usize,
                steps: &'a [Permutation],
                #[serde(skip_serializing_if = "Option::is_none")]
                motions: Option<&'a [MotionTable]>,
            }
            let trace = sort_trace(&permutation)?;
            let tables = if motions {
                Some(TraceMotions::new(&trace)?)
            } else {
                None
            };
            write_json(
                out,
                &TraceOut {
                    permutation: &permutation,
                    t_star: trace.t_star(),
                    steps: trace.steps(),
                    motions: tables.as_ref().map(TraceMotions::tables),
                },
            )?;
        }
        Command::Verify(args) => return run_verify(args, out),
        Command::Bound { permutation } => {
            #[derive(Serialize)]
            struct Best {
                bound: u64,
                i: Option<usize>,
                k: Option<usize>,
            }
            #[derive(Serialize)]
            struct BoundOut {
                permutation: Permutation,
                sigma_1: Permutation,
                t_star: usize,
                best: Option<Best>,
                bounds: Vec<ElementBound>,
            }
            let best = match best_bound(&permutation) {
                Ok(b) => Some(Best {
                    bound: b.bound,
                    i: b.witness.map(|w| w.0),
                    k: b.witness.map(|w| w.1),
                }),
                Err(popstack::Error::IdentityInput) => None,
                Err(e) => return Err(e.into()),
            };
            write_json(
                out,
                &BoundOut {
                    sigma_1: permutation.pop(),
                    t_star: popstack::t_star(&permutation)?,
                    bounds: all_bounds(&permutation),
                    best,
                    permutation,
                },
            )?;
        }
        Command::Dn(args) => {
            let est = match args.samples {
                Some(samples) => stats::sampled_dn(args.n, samples, args.seed)?,
                None => stats::exact_dn(args.n)?,
            };
            write_estimate_csv(out, &est)?;
        }
        Command::Hist(args) => {
            let source = match args.samples {
                Some(samples) => Source::Sampled {
                    samples,
                    seed: args.seed,
                },
                None => Source::Exact,
            };
            let hist = stats::t_star_distribution(args.n, source)?;
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["t_star", "count"])?;
            for (t, c) in hist.counts.iter().enumerate() {
                w.write_record([t.to_string(), c.to_string()])?;
            }
            w.flush()?;
        }
        Command::Construct {
            family,
            k,
            metrics,
            plot_data,
        } => {
            let spec = FamilySpec::new(family.into(), k)?;
            let p = spec.permutation();
            if metrics {
                #[derive(Serialize)]
                struct MetricsOut {
                    #[serde(flatten)]
                    metrics: popstack::constructions::FamilyMetrics,
                    permutation: Permutation,
                }
                write_json(
                    out,
                    &MetricsOut {
                        metrics: family_metrics(spec)?,
                        permutation: p,
                    },
                )?;
            } else if plot_data {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["position", "value"])?;
                for (pos, v) in plot_points(&p) {
                    w.write_record([pos.to_string(), v.to_string()])?;
                }
                w.flush()?;
            } else {
                writeln!(out, "{p}")?;
            }
        }
        Command::Lichev(args) => {
            let fraction = stats::lichev_fraction(args.n, args.samples, args.seed)?;
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["n", "samples", "seed", "fraction"])?;
            w.write_record([
                args.n.to_string(),
                args.samples.to_string(),
                args.seed.to_string(),
                fraction.to_string(),
            ])?;
            w.flush()?;
        }
        Command::Gap { sample, summary } => {
            let report = stats::bound_gap_report(sample.n, sample.samples, sample.seed)?;
            if summary {
                write_json(out, &report.summary)?;
            } else {
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record([
                    "sample_index",
                    "t_star",
                    "best_bound",
                    "i",
                    "k",
                    "lichev_event",
                ])?;
                for r in &report.records {
                    let (i, k) = r.witness.map_or((String::new(), String::new()), |(i, k)| {
                        (i.to_string(), k.to_string())
                    });
                    w.write_record([
                        r.sample_index.to_string(),
                        r.t_star.to_string(),
                        r.best_bound.to_string(),
                        i,
                        k,
                        r.lichev_event.to_string(),
                    ])?;
                }
                w.flush()?;
                eprintln!("{}", serde_json::to_string(&report.summary)?);
            }
        }
    }
    Ok(true)
}

fn write_estimate_csv(out: &mut dyn Write, est: &DnEstimate) -> Result<(), Failure> {
    let opt = |v: Option<String>| v.unwrap_or_default();
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "n",
        "method",
        "samples",
        "seed",
        "mean_t_star",
        "ratio",
        "std_error",
        "exact",
    ])?;
    w.write_record([
        est.n.to_string(),
        est.method.name().to_string(),
        opt(est.samples.map(|s| s.to_string())),
        opt(est.seed.map(|s| s.to_string())),
        est.mean_t_star.to_string(),
        est.ratio.to_string(),
        opt(est.std_error.map(|s| s.to_string())),
        opt(est
            .exact_mean
            .map(|r| format!("{}/{}", r.numer(), r.denom()))),
    ])?;
    w.flush()?;
    Ok(())
}

fn run_verify(args: VerifyArgs, out: &mut dyn Write) -> Outcome {
    let window: PivotWindow = args.window.parse()?;
    let ids: Vec<&str> = if args.claim == "all" {
        Claim::IDS.to_vec()
    } else {
        vec![args.claim.as_str()]
    };
    let mut claims = Vec::new();
    for id in ids {
        let probe = Claim::from_id(id, None, Some(window), Some(args.s_min))?;
        if probe.takes_mode() {
            for mode in args.mode.modes() {
                claims.push(Claim::from_id(id, Some(mode), None, None)?);
            }
        } else {
            claims.push(probe);
        }
    }

    let reports = claims
        .into_iter()
        .map(|claim| -> Result<ClaimReport, Failure> {
            if let Some(n_max) = args.n_max {
                Ok(verify::verify_exhaustive(claim, n_max)?)
            } else if !args.perm.is_empty() {
                Ok(verify::verify_permutations(claim, &args.perm))
            } else if let (Some(n), Some(samples)) = (args.n, args.samples) {
                Ok(verify::verify_sampled(claim, n, samples, args.seed)?)
            } else {
                Err(Failure::Usage(
                    "verify needs --n-max, --perm or --n with --samples".into(),
                ))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;

    let clean = reports.iter().all(ClaimReport::holds);
    for r in &reports {
        eprintln!(
            "{} {}: {} checked, {} counterexamples",
            if r.holds() { "PASS" } else { "FAIL" },
            r.claim_id,
            r.checked_count,
            r.counterexamples.len()
        );
    }
    if let [single] = reports.as_slice() {
        write_json(out, single)?;
    } else {
        write_json(out, &reports)?;
    }
    Ok(clean)
}
