//! The `bertini` command line: configuration, dispatch, reports.
//!
//! Exit status: 0 ok, 2 configuration error, 3 budget exceeded, 4 internal
//! invariant failure.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{
    bsw_exhaustive, bsw_experiment_with, equidistribution_audit, multi_fiber_experiment, BswConfig,
};
use crate::error::{Error, Result};
use crate::fiber::{
    classify_point_detailed, fiber_density_exhaustive, fiber_density_exhaustive_mod_p, fiber_density_mc, squarefree_form_density,
    DensityEstimate, SectionModP2,
};
use crate::geom::{divisor_smooth_at, parse_form, ClosedPoint, ProjectiveScheme};
use crate::sampling;
use crate::zeta::{
    default_depth, global_zeta_inverse, local_zeta_inverse, ratio_f64, verify_section3_bounds,
    PointCountTable,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

/// Everything a run depends on. Echoed verbatim in every report.
#[derive(Parser, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[command(name = "bertini", version, about = "Bertini density experiments over finite fields and Spec Z")]
pub struct ExperimentConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Truncated inverse zeta value of a fiber (with --p) or of the whole
    /// scheme over p <= R (with --R).
    Zeta(ZetaArgs),
    /// Proportion of sections mod p^2 (or forms mod p) with no singular point.
    FiberDensity(FiberDensityArgs),
    /// Integer sections of O(d) on P^{n-1}_Z, regular over every p <= P.
    MultiFiber(MultiFiberArgs),
    /// Monic polynomials in a height ball with Z[x]/(f) maximal.
    Bsw(BswArgs),
    /// Classify one rational point of div(sigma) mod p^2.
    Classify(ClassifyArgs),
    /// Check the point-count, log and truncation inequalities on a grid.
    VerifyBounds(VerifyBoundsArgs),
    /// How evenly a coefficient box covers residues mod N.
    Equidist(EquidistArgs),
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeArgs {
    /// Scheme file (JSON); without it, P^dim.
    #[arg(long)]
    pub scheme: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
}

impl SchemeArgs {
    fn load(&self) -> Result<ProjectiveScheme> {
        match &self.scheme {
            Some(path) => ProjectiveScheme::load(path),
            None => ProjectiveScheme::projective_space(self.dim, None),
        }
    }
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long)]
    pub p: Option<u64>,
    /// Prime bound for the global product.
    #[arg(long = "R")]
    pub prime_bound: Option<u64>,
    #[arg(long)]
    pub s: u32,
    /// Truncation degree (default: largest e with p^e <= 1024).
    #[arg(long)]
    pub r: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityMode {
    /// Every section mod p^2.
    Exhaustive,
    /// Every form mod p, singular points on the fiber.
    Fiber,
    /// Seeded uniform sampling mod p^2.
    Mc,
    /// Every binary form mod p, squarefree divisor.
    Squarefree,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberDensityArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    #[arg(long, value_enum, default_value_t = DensityMode::Exhaustive)]
    pub mode: DensityMode,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiFiberArgs {
    /// Absolute dimension: sections live on P^{n-1}_Z.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long = "B")]
    pub box_bound: u64,
    #[arg(long = "P")]
    pub prime_bound: u64,
    #[arg(long)]
    pub r: usize,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BswArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long = "R")]
    pub height_bound: u64,
    #[arg(long = "T")]
    pub trial_bound: u64,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Cross-check against point classification for p <= min(T, this).
    #[arg(long, default_value_t = crate::arith::DEFAULT_CROSS_CHECK_BOUND)]
    pub cross_check: u64,
    /// Count every polynomial in the ball instead of sampling.
    #[arg(long)]
    pub exhaustive: bool,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Section, e.g. "X^2+5*Y^2-Z^2".
    #[arg(long)]
    pub section: String,
    #[arg(long)]
    pub p: u64,
    /// Rational point, e.g. "[0:1:0]".
    #[arg(long)]
    pub point: String,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyBoundsArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,3,5,7,11")]
    pub primes: Vec<u64>,
    #[arg(long, default_value_t = 10)]
    pub e_max: usize,
    #[arg(long, default_value_t = 10)]
    pub r_max: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub fiber_dims: Vec<usize>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquidistArgs {
    #[arg(long)]
    pub h: u32,
    #[arg(long = "B")]
    pub box_bound: u64,
    #[arg(long = "N")]
    pub modulus: u64,
}

/// A finished run.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub generator: &'static str,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub results: Value,
    pub duration_seconds: f64,
    #[serde(skip)]
    pub table: Table,
}

/// Flat rows for CSV output.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    /// The results payload as emitted (no timing), for reproducibility checks.
    pub fn results_json(&self) -> String {
        serde_json::to_string(&self.results).expect("results serialize")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Invariant(format!("csv: {e}"));
        w.write_record(&self.table.header).map_err(io)?;
        for row in &self.table.rows {
            w.write_record(row).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Invariant(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(self.to_json() + "\n"),
            Format::Csv => self.to_csv(),
        }
    }
}

fn rational(v: &BigRational) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

fn density_table(d: usize, e: &DensityEstimate) -> Table {
    Table {
        header: vec!["d", "samples", "mean", "ci", "reference", "ref_error"],
        rows: vec![vec![
            d.to_string(),
            e.total.to_string(),
            e.mean.to_string(),
            e.ci_halfwidth.to_string(),
            rational(&e.reference_value),
            rational(&e.reference_error),
        ]],
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("payload serializes")
}

/// Parse "[a:b:c]" into integer coordinates.
pub fn parse_point(text: &str) -> Result<Vec<i64>> {
    let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
    inner
        .split(':')
        .map(|c| {
            c.trim()
                .parse::<i64>()
                .map_err(|_| Error::InvalidInput(format!("bad point coordinate {c:?} in {text:?}")))
        })
        .collect()
}

fn run_zeta(a: &ZetaArgs) -> Result<(Value, Table)> {
    let scheme = a.scheme.load()?;
    let n = scheme.dim() + 1;
    match (a.p, a.prime_bound) {
        (Some(p), None) => {
            let p = scheme.resolve_prime(Some(p))?;
            let r = a.r.unwrap_or_else(|| default_depth(p));
            let t = PointCountTable::for_fiber(&scheme, p, r.max(1))?;
            let z = local_zeta_inverse(&t, a.s, r, n)?;
            let payload = json!({
                "p": p, "s": a.s, "r": r, "n": n,
                "value": rational(&z.value),
                "value_f64": z.value_f64(),
                "error_bound": rational(&z.error_bound),
                "error_f64": z.error_f64(),
                "c0": rational(&z.c0),
                "closed_points": z.a_e.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            });
            let table = Table {
                header: vec!["p", "s", "r", "value", "value_f64", "error_bound"],
                rows: vec![vec![
                    p.to_string(),
                    a.s.to_string(),
                    r.to_string(),
                    rational(&z.value),
                    z.value_f64().to_string(),
                    rational(&z.error_bound),
                ]],
            };
            Ok((payload, table))
        }
        (None, Some(bound)) => {
            if scheme.prime().is_some() {
                return Err(Error::InvalidInput("a global product needs a scheme over Spec Z".into()));
            }
            let tables = crate::ff::primes_up_to(bound)
                .into_iter()
                .map(|p| {
                    let depth = a.r.unwrap_or_else(|| default_depth(p)).max(1);
                    Ok((p, PointCountTable::for_fiber(&scheme, p, depth)?))
                })
                .collect::<Result<_>>()?;
            let g = global_zeta_inverse(&tables, a.s, bound, |p| a.r.unwrap_or_else(|| default_depth(p)), n)?;
            let payload = json!({
                "s": a.s, "prime_bound": bound, "n": n,
                "value": rational(&g.value),
                "value_f64": ratio_f64(&g.value),
                "local_errors": rational(&g.local_errors),
                "tail_error": rational(&g.tail_error),
                "error_bound": rational(&g.error_bound),
                "error_f64": ratio_f64(&g.error_bound),
                "c0": rational(&g.c0),
                "depths": g.depths,
            });
            let table = Table {
                header: vec!["p", "depth"],
                rows: g.depths.iter().map(|(p, r)| vec![p.to_string(), r.to_string()]).collect(),
            };
            Ok((payload, table))
        }
        _ => Err(Error::InvalidInput("give exactly one of --p and --R".into())),
    }
}

fn run_fiber_density(a: &FiberDensityArgs, seed: u64) -> Result<(Value, Table)> {
    let scheme = a.scheme.load()?;
    let (est, extra) = match a.mode {
        DensityMode::Exhaustive => (fiber_density_exhaustive(&scheme, a.p, a.d, a.r)?, json!({})),
        DensityMode::Fiber => (fiber_density_exhaustive_mod_p(&scheme, a.p, a.d, a.r)?, json!({})),
        DensityMode::Mc => (fiber_density_mc(&scheme, a.p, a.d, a.r, a.samples, seed)?, json!({})),
        DensityMode::Squarefree => {
            if !scheme.is_projective_space() || scheme.dim() != 1 {
                return Err(Error::InvalidInput("squarefree mode is for P^1".into()));
            }
            let (est, r) = squarefree_form_density(a.p, a.d)?;
            (est, json!({ "certified_jet_degree": r }))
        }
    };
    let payload = json!({
        "p": a.p, "d": a.d, "r": a.r,
        "estimate": to_value(&est),
        "value": rational(&est.value()),
        "within_tolerance": est.within_tolerance(),
        "extra": extra,
    });
    Ok((payload, density_table(a.d, &est)))
}

fn run_classify(a: &ClassifyArgs) -> Result<(Value, Table)> {
    let scheme = a.scheme.load()?;
    let n = scheme.ambient_dim();
    let form = parse_form(&a.section, n)?;
    let sigma = SectionModP2::new(&form, a.p)?;
    let coords = parse_point(&a.point)?;
    let x = ClosedPoint::rational(a.p, &coords)?;
    let arithmetic = classify_point_detailed(&sigma, &x, &scheme)?;
    let fiber = divisor_smooth_at(&scheme, &form, &x)?;
    let payload = json!({
        "section": form.to_string(),
        "section_mod_p2": sigma.form().to_string(),
        "p": a.p,
        "point": a.point,
        "classification": arithmetic.class,
        "rescued_by_p2_value": arithmetic.rescued,
        "fiber": fiber,
    });
    let table = Table {
        header: vec!["section", "p", "point", "classification", "rescued", "fiber"],
        rows: vec![vec![
            form.to_string(),
            a.p.to_string(),
            a.point.clone(),
            format!("{:?}", arithmetic.class),
            arithmetic.rescued.to_string(),
            format!("{fiber:?}"),
        ]],
    };
    Ok((payload, table))
}

fn run_verify(a: &VerifyBoundsArgs) -> Result<(Value, Table)> {
    let report = verify_section3_bounds(&a.primes, a.e_max, a.r_max, &a.fiber_dims)?;
    let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
    let table = Table {
        header: vec!["check", "fiber_dim", "p", "e", "r", "lhs", "rhs", "holds"],
        rows: report
            .checks
            .iter()
            .map(|c| {
                vec![
                    c.check.to_string(),
                    opt(c.fiber_dim),
                    c.p.to_string(),
                    opt(c.e),
                    opt(c.r),
                    c.lhs.to_string(),
                    c.rhs.to_string(),
                    c.holds.to_string(),
                ]
            })
            .collect(),
    };
    let payload = json!({
        "passed": report.passed(),
        "checks": report.checks.len(),
        "violations": to_value(&report.violations),
    });
    Ok((payload, table))
}

fn run_equidist(a: &EquidistArgs) -> Result<(Value, Table)> {
    let audit = equidistribution_audit(a.h, a.box_bound, a.modulus)?;
    let table = Table {
        header: vec!["h", "B", "N", "k", "s", "min_count", "max_count", "ratio"],
        rows: vec![vec![
            a.h.to_string(),
            a.box_bound.to_string(),
            a.modulus.to_string(),
            audit.k.to_string(),
            audit.s.to_string(),
            audit.min_count.to_string(),
            audit.max_count.to_string(),
            audit.ratio.as_ref().map(rational).unwrap_or_default(),
        ]],
    };
    Ok((to_value(&audit), table))
}

fn dispatch(config: &ExperimentConfig) -> Result<(Value, Table)> {
    let seed = config.seed;
    match &config.command {
        Command::Zeta(a) => run_zeta(a),
        Command::FiberDensity(a) => run_fiber_density(a, seed),
        Command::MultiFiber(a) => {
            let r = multi_fiber_experiment(a.n, a.d, a.box_bound, a.prime_bound, a.r, a.samples, seed)?;
            let table = density_table(a.d, &r.estimate);
            Ok((to_value(&r), table))
        }
        Command::Bsw(a) => {
            let r = if a.exhaustive {
                bsw_exhaustive(a.d, a.height_bound, a.trial_bound, a.cross_check)?
            } else {
                let mut cfg = BswConfig::new(a.d, a.height_bound, a.trial_bound, a.samples, seed);
                cfg.cross_check_bound = a.cross_check;
                bsw_experiment_with(cfg)?
            };
            let table = density_table(a.d, &r.estimate);
            Ok((to_value(&r), table))
        }
        Command::Classify(a) => run_classify(a),
        Command::VerifyBounds(a) => run_verify(a),
        Command::Equidist(a) => run_equidist(a),
    }
}

/// Validate, dispatch and time one run.
pub fn run(config: &ExperimentConfig) -> Result<Report> {
    let start = Instant::now();
    let (results, table) = match config.threads {
        Some(0) => return Err(Error::InvalidInput("--threads must be positive".into())),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?
            .install(|| dispatch(config))?,
        None => dispatch(config)?,
    };
    Ok(Report {
        tool: "bertini",
        version: env!("CARGO_PKG_VERSION"),
        generator: sampling::GENERATOR,
        seed: config.seed,
        config: config.clone(),
        results,
        duration_seconds: start.elapsed().as_secs_f64(),
        table,
    })
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded(_) => EXIT_BUDGET,
        Error::Invariant(_) => EXIT_INTERNAL,
        _ => EXIT_CONFIG,
    }
}

fn write_report(report: &Report, format: Format, output: Option<&Path>) -> Result<()> {
    let text = report.render(format)?;
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::Invariant(format!("stdout: {e}")))
        }
    }
}

/// Run with explicit arguments (program name first); returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match ExperimentConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let outcome = std::panic::catch_unwind(|| {
        let report = run(&config)?;
        write_report(&report, config.format, config.output.as_deref())
    });
    match outcome {
        Ok(Ok(())) => EXIT_OK,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
        Err(_) => EXIT_INTERNAL,
    }
}

pub fn main() -> i32 {
    main_with_args(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(args: &[&str]) -> ExperimentConfig {
        ExperimentConfig::try_parse_from(std::iter::once("bertini").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn point_parsing() {
        assert_eq!(parse_point("[0:1:0]").unwrap(), vec![0, 1, 0]);
        assert_eq!(parse_point(" [ -2 : 3 ] ").unwrap(), vec![-2, 3]);
        assert!(parse_point("[a:1]").is_err());
    }

    #[test]
    fn classify_worked_example() {
        let c = config(&["classify", "--dim", "2", "--section", "X^2+5*Y^2-Z^2", "--p", "5", "--point", "[0:1:0]"]);
        let r = run(&c).unwrap();
        assert_eq!(r.results["classification"], "RegularPoint");
        assert_eq!(r.results["fiber"], "SingularPoint");
    }

    #[test]
    fn zeta_local_and_global() {
        let r = run(&config(&["zeta", "--p", "2", "--s", "2", "--r", "4"])).unwrap();
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let expected = q(27, 64) * q(15, 16) * q(63, 64).pow(2) * q(255, 256).pow(3);
        assert_eq!(r.results["value"], rational(&expected));
        let g = run(&config(&["zeta", "--R", "3", "--s", "3", "--r", "1"])).unwrap();
        assert_eq!(g.results["depths"], json!([[2, 1], [3, 1]]));
        assert!(run(&config(&["zeta", "--s", "2"])).is_err());
    }

    #[test]
    fn config_echo_round_trips() {
        let c = config(&["bsw", "--d", "3", "--R", "10", "--T", "20", "--samples", "500", "--seed", "42"]);
        let text = serde_json::to_string(&c).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn results_reproducible_across_threads() {
        let mut c = config(&["multi-fiber", "--d", "4", "--B", "50", "--P", "5", "--r", "2", "--samples", "5000", "--seed", "3"]);
        let a = run(&c).unwrap();
        c.threads = Some(1);
        let b = run(&c).unwrap();
        assert_eq!(a.results_json(), b.results_json());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(main_with_args(["bertini", "equidist", "--h", "0", "--B", "3", "--N", "5"]), EXIT_CONFIG);
        assert_eq!(main_with_args(["bertini", "nonsense"]), EXIT_CONFIG);
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("r.csv");
        let out = out.to_str().unwrap();
        let budget = ["bertini", "fiber-density", "--p", "7", "--d", "9", "--output", out];
        assert_eq!(main_with_args(budget), EXIT_BUDGET);
        let ok = ["bertini", "equidist", "--h", "2", "--B", "8", "--N", "5", "--format", "csv", "--output", out];
        assert_eq!(main_with_args(ok), EXIT_OK);
        let text = std::fs::read_to_string(out).unwrap();
        assert_eq!(text, "h,B,N,k,s,min_count,max_count,ratio\n2,8,5,3,2,9,16,16/9\n");
    }
}
