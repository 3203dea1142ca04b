use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use convexgap::analysis::{gamma_sweep, pgm_certificates, SweepResult};
use convexgap::bounds::{operator_report, BoundReport, BOUND_REPORT_HEADER};
use convexgap::cyclic::{generate_cyclic_sequence, CyclicSequence, GammaSchedule};
use convexgap::oracle::{numeric_conjugate, numeric_prox, GridSpec};
use convexgap::suites::{run_all, SuiteConfig, DEFAULT_SEED};
use convexgap::{parse_coords, parse_entry, CatalogEntry, ConvexFunction, ExtReal, Tolerances, Vector};
use serde_json::{json, Value};

/// Gap, Fitzpatrick and Carlier bounds for catalog functions and operators.
#[derive(Debug, Parser)]
#[command(name = "convexgap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Output file; relative paths resolve against the output directory.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Default directory for output files.
    #[arg(long, env = "CONVEXGAP_OUT_DIR", global = true)]
    out_dir: Option<PathBuf>,

    #[arg(long, default_value_t = 1e-9, allow_hyphen_values = true, global = true)]
    abs_tol: f64,

    #[arg(long, default_value_t = 1e-9, allow_hyphen_values = true, global = true)]
    rel_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Point {
    /// Catalog entry, e.g. `energy:dim=2` or `subspace:dim=2:basis=1,1`.
    #[arg(long)]
    spec: String,

    #[arg(long, allow_hyphen_values = true)]
    x: String,

    #[arg(long, allow_hyphen_values = true)]
    xstar: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One bound report at a single step parameter.
    Eval {
        #[command(flatten)]
        point: Point,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
    },
    /// Carlier bound over log-spaced step parameters.
    Sweep {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 1e-6, allow_hyphen_values = true)]
        gamma_lo: f64,
        #[arg(long, default_value_t = 1e6, allow_hyphen_values = true)]
        gamma_hi: f64,
        #[arg(long, default_value_t = 49)]
        count: usize,
    },
    /// Terms of the cyclic series lower bound.
    Series {
        #[command(flatten)]
        point: Point,
        /// Constant step parameter.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "gammas")]
        gamma: Option<f64>,
        /// Explicit comma-separated step parameters.
        #[arg(long, allow_hyphen_values = true)]
        gammas: Option<String>,
        #[arg(long)]
        n_terms: usize,
    },
    /// Seeded property suites.
    Verify {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 5)]
        oracle_samples: usize,
        /// Multiplies every suite tolerance.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        tol_scale: f64,
    },
    /// Closed-form conjugate at `--xstar` and prox at `--x` against grid oracles.
    OracleCompare {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        gamma: f64,
    },
    /// Proximal-gradient run with Carlier certificates.
    Pgm {
        #[arg(long, default_value = "energy:dim=2")]
        spec: String,
        #[arg(long, default_value = "subspace:dim=2:basis=1,1")]
        prox_spec: String,
        #[arg(long, default_value = "3,-1", allow_hyphen_values = true)]
        y0: String,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        step: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long, default_value_t = 200)]
        iters: usize,
    },
}

/// Outcome that is not an input problem.
enum Status {
    Ok,
    ContractViolation(String),
}

fn parse_field<T>(field: &str, parsed: convexgap::Result<T>) -> Result<T> {
    parsed.with_context(|| format!("invalid --{field}"))
}

fn vector_for(entry: &CatalogEntry, field: &str, text: &str) -> Result<Vector> {
    let v = parse_field(field, parse_coords(text))?;
    if v.dim() != entry.dim() {
        bail!("invalid --{field}: expected {} coordinates, got {}", entry.dim(), v.dim());
    }
    Ok(v)
}

fn load_point(p: &Point) -> Result<(CatalogEntry, Vector, Vector)> {
    let entry = parse_field("spec", parse_entry(&p.spec))?;
    let x = vector_for(&entry, "x", &p.x)?;
    let xs = vector_for(&entry, "xstar", &p.xstar)?;
    Ok((entry, x, xs))
}

fn function_of<'a>(entry: &'a CatalogEntry, field: &str) -> Result<&'a ConvexFunction> {
    entry
        .function()
        .with_context(|| format!("invalid --{field}: needs a convex function, not an operator"))
}

fn ext_json(v: Option<ExtReal>) -> Value {
    match v {
        None => Value::Null,
        Some(ExtReal::Finite(f)) => json!(f),
        Some(ExtReal::PosInf) => json!("inf"),
    }
}

fn report_json(r: &BoundReport) -> Value {
    json!({
        "x": r.x.coords(),
        "x_star": r.x_star.coords(),
        "gamma": r.gamma,
        "gap": ext_json(r.gap),
        "fitz": ext_json(r.fitzpatrick),
        "carlier": r.carlier,
        "gap_zero": r.gap_zero,
        "gap_equals_carlier": r.gap_equals_carlier,
    })
}

struct Sink {
    path: Option<PathBuf>,
}

impl Sink {
    fn new(common: &Common, default_name: &str) -> Self {
        let path = match (&common.output, &common.out_dir) {
            (Some(out), Some(dir)) if out.is_relative() => Some(dir.join(out)),
            (Some(out), _) => Some(out.clone()),
            (None, Some(dir)) => Some(dir.join(default_name)),
            (None, None) => None,
        };
        Sink { path }
    }

    fn write(&self, body: &str) -> Result<()> {
        match &self.path {
            Some(path) => {
                if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                    fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
                }
                fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
                println!("wrote {}", path.display());
                Ok(())
            }
            None => {
                io::stdout().write_all(body.as_bytes())?;
                Ok(())
            }
        }
    }

    /// Sibling file with a different extension, if writing to a file.
    fn sibling(&self, ext: &str) -> Option<PathBuf> {
        self.path.as_deref().map(|p| p.with_extension(ext))
    }
}

fn csv(header: &str, rows: &[String]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(row);
        out.push('\n');
    }
    out
}

fn run_eval(common: &Common, tol: &Tolerances, point: &Point, gamma: f64) -> Result<Status> {
    let (entry, x, xs) = load_point(point)?;
    let report = parse_field("gamma", operator_report(&entry.operator(), gamma, &x, &xs, tol))?;
    let body = match common.format {
        Format::Csv => csv(BOUND_REPORT_HEADER, &[report.to_csv_row()]),
        Format::Json => format!("{:#}\n", report_json(&report)),
    };
    Sink::new(common, "eval.csv").write(&body)?;
    if report.chain_holds(tol.abs_tol) {
        Ok(Status::Ok)
    } else {
        Ok(Status::ContractViolation(format!("chain inequality violated: {report:?}")))
    }
}

fn sweep_json(s: &SweepResult) -> Result<Value> {
    let mut header = serde_json::to_value(s.header())?;
    header["gammas"] = json!(s.gammas);
    header["values"] = json!(s.values);
    Ok(header)
}

fn run_sweep(common: &Common, point: &Point, lo: f64, hi: f64, count: usize) -> Result<Status> {
    let (entry, x, xs) = load_point(point)?;
    let sweep = gamma_sweep(&entry.operator(), &x, &xs, lo, hi, count).context("invalid sweep range")?;
    if let Some(bad) = sweep.values.iter().find(|v| v.is_nan() || **v < 0.0) {
        return Ok(Status::ContractViolation(format!("negative Carlier bound {bad}")));
    }
    let sink = Sink::new(common, "sweep.csv");
    match common.format {
        Format::Csv => {
            sink.write(&csv(SweepResult::CSV_HEADER, &sweep.csv_rows()))?;
            let header = format!("{:#}\n", serde_json::to_value(sweep.header())?);
            match sink.sibling("json") {
                Some(path) => {
                    fs::write(&path, &header).with_context(|| format!("writing {}", path.display()))?;
                    println!("wrote {}", path.display());
                }
                None => eprint!("{header}"),
            }
        }
        Format::Json => sink.write(&format!("{:#}\n", sweep_json(&sweep)?))?,
    }
    Ok(Status::Ok)
}

fn series_json(seq: &CyclicSequence) -> Value {
    json!({
        "gammas": seq.gammas,
        "terms": seq.terms,
        "partial_sums": seq.partial_sums,
    })
}

fn run_series(
    common: &Common,
    tol: &Tolerances,
    point: &Point,
    gamma: Option<f64>,
    gammas: Option<&str>,
    n_terms: usize,
) -> Result<Status> {
    let (entry, x, xs) = load_point(point)?;
    let schedule = match (gamma, gammas) {
        (Some(g), _) => parse_field("gamma", GammaSchedule::constant(g))?,
        (None, Some(list)) => {
            let values = parse_field("gammas", parse_coords(list))?;
            parse_field("gammas", GammaSchedule::explicit(values.into_coords()))?
        }
        (None, None) => bail!("invalid --gamma: one of --gamma or --gammas is required"),
    };
    let op = entry.operator();
    let seq = parse_field("n-terms", generate_cyclic_sequence(&op, &x, &xs, &schedule, n_terms))?;
    let body = match common.format {
        Format::Csv => csv(CyclicSequence::CSV_HEADER, &seq.csv_rows()),
        Format::Json => format!("{:#}\n", series_json(&seq)),
    };
    Sink::new(common, "series.csv").write(&body)?;

    let partial = seq.partial_sum();
    let single = seq.terms[0];
    eprintln!("partial_sum {partial}");
    eprintln!("carlier_single_term {single}");
    if let Some(f) = entry.function() {
        let gap = f.fenchel_young_gap(&x, &xs);
        eprintln!("gap {gap}");
        if gap < ExtReal::new(partial - tol.abs_tol) {
            return Ok(Status::ContractViolation(format!("series sum {partial} exceeds gap {gap}")));
        }
    }
    Ok(Status::Ok)
}

fn run_verify(common: &Common, cfg: SuiteConfig) -> Result<Status> {
    println!("seed {}", cfg.seed);
    let outcomes = run_all(&cfg).context("suite setup failed")?;
    let mut failed = 0;
    let mut rows = Vec::new();
    for s in &outcomes {
        println!("{:<18} passed {:>6} failed {:>6}", s.name, s.passed, s.failed);
        for f in &s.failures {
            println!("  offending input: {f}");
        }
        failed += s.failed;
        rows.push(format!("{},{},{},{}", s.name, s.passed, s.failed, s.sample_checksum));
    }
    if common.output.is_some() || common.out_dir.is_some() {
        let body = match common.format {
            Format::Csv => csv("suite,passed,failed,sample_checksum", &rows),
            Format::Json => format!("{:#}\n", serde_json::to_value(&outcomes)?),
        };
        Sink::new(common, "verify.csv").write(&body)?;
    }
    if failed == 0 {
        Ok(Status::Ok)
    } else {
        Ok(Status::ContractViolation(format!("{failed} suite checks failed")))
    }
}

fn run_oracle_compare(common: &Common, point: &Point, gamma: f64) -> Result<Status> {
    let (entry, z, xs) = load_point(point)?;
    let f = function_of(&entry, "spec")?;
    let grid = GridSpec::default_for_dim(f.dim());
    let conj = f.conjugate_eval(&xs);
    let est = numeric_conjugate(f, &xs, &grid).context("invalid --spec for the grid oracle")?;
    let prox = parse_field("gamma", f.prox(gamma, &z))?;
    let approx = numeric_prox(f, gamma, &z, &grid).context("invalid --spec for the grid oracle")?;
    let conj_ok = est.agrees_with(conj, 1e-4);
    let prox_ok = prox.dist(&approx) <= 1e-5;
    let oracle_value = est.value().map_or(json!("divergent"), |v| json!(v));
    let body = match common.format {
        Format::Csv => csv(
            "quantity,closed_form,oracle,agree",
            &[
                format!("conjugate,{conj},{},{conj_ok}", est.value().map_or("divergent".into(), |v| v.to_string())),
                format!("prox,{},{},{prox_ok}", prox.to_joined(), approx.to_joined()),
            ],
        ),
        Format::Json => format!(
            "{:#}\n",
            json!({
                "conjugate": {"closed_form": ext_json(Some(conj)), "oracle": oracle_value, "agree": conj_ok},
                "prox": {"closed_form": prox.coords(), "oracle": approx.coords(), "agree": prox_ok},
            })
        ),
    };
    Sink::new(common, "oracle.csv").write(&body)?;
    if conj_ok && prox_ok {
        Ok(Status::Ok)
    } else {
        Ok(Status::ContractViolation("closed form disagrees with the oracle".into()))
    }
}

#[allow(clippy::too_many_arguments)]
fn run_pgm(
    common: &Common,
    tol: &Tolerances,
    spec: &str,
    prox_spec: &str,
    y0: &str,
    step: f64,
    gamma: f64,
    iters: usize,
) -> Result<Status> {
    let smooth_entry = parse_field("spec", parse_entry(spec))?;
    let prox_entry = parse_field("prox-spec", parse_entry(prox_spec))?;
    let smooth = function_of(&smooth_entry, "spec")?;
    let prox = function_of(&prox_entry, "prox-spec")?;
    let y0 = vector_for(&smooth_entry, "y0", y0)?;
    let trace = pgm_certificates(smooth, prox, step, gamma, &y0, iters).context("proximal-gradient run failed")?;
    let body = match common.format {
        Format::Csv => csv(convexgap::analysis::PgmTrace::CSV_HEADER, &trace.csv_rows()),
        Format::Json => format!(
            "{:#}\n",
            json!({
                "x_ref": trace.x_ref.coords(),
                "bregman": trace.bregman,
                "certificates": trace.certificates,
                "partial_sums": trace.certificate_sums,
            })
        ),
    };
    Sink::new(common, "pgm.csv").write(&body)?;
    let bad = (0..trace.certificates.len()).find(|&n| trace.certificates[n] > trace.bregman[n] + tol.abs_tol);
    Ok(match bad {
        Some(n) => Status::ContractViolation(format!(
            "certificate c_{n} = {} exceeds d_{n} = {}",
            trace.certificates[n], trace.bregman[n]
        )),
        None => Status::Ok,
    })
}

fn run(cli: &Cli) -> Result<Status> {
    let common = &cli.common;
    let defaults = Tolerances::default();
    let tol = Tolerances::new(common.abs_tol, common.rel_tol, defaults.root_tol, defaults.max_iters)
        .context("invalid --abs-tol/--rel-tol")?;
    match &cli.command {
        Command::Eval { point, gamma } => run_eval(common, &tol, point, *gamma),
        Command::Sweep {
            point,
            gamma_lo,
            gamma_hi,
            count,
        } => run_sweep(common, point, *gamma_lo, *gamma_hi, *count),
        Command::Series {
            point,
            gamma,
            gammas,
            n_terms,
        } => run_series(common, &tol, point, *gamma, gammas.as_deref(), *n_terms),
        Command::Verify {
            seed,
            samples,
            oracle_samples,
            tol_scale,
        } => {
            if !(*tol_scale >= 0.0 && tol_scale.is_finite()) {
                bail!("invalid --tol-scale: must be finite and nonnegative");
            }
            let cfg = SuiteConfig {
                seed: *seed,
                samples: *samples,
                oracle_samples: *oracle_samples,
                tol_scale: *tol_scale,
            };
            run_verify(common, cfg)
        }
        Command::OracleCompare { point, gamma } => run_oracle_compare(common, point, *gamma),
        Command::Pgm {
            spec,
            prox_spec,
            y0,
            step,
            gamma,
            iters,
        } => run_pgm(common, &tol, spec, prox_spec, y0, *step, *gamma, *iters),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::ContractViolation(msg)) => {
            eprintln!("contract violation: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
