//! Command-line driver: dimension tables and the check suites, as TSV or JSON.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exactlinalg::{Field, FieldSpec, FiniteField, PrimeField, Rationals, Subspace};
use crate::maxrank::{
    check, quotient_tensor_map, CheckMode, HlAnalog, Property, TensorSumMap, Verdict, DEFAULT_BUDGET, DEFAULT_THRESHOLD,
};
use crate::polyhl::{check_hl, hl_parameters};
use crate::preproj::PreprojAlgebra;
use crate::quiver::{parse_quiver, Quiver, Weights};

/// Instantiates the configured field and evaluates `$body` with it bound to `$f`.
macro_rules! with_field {
    ($config:expr, |$f:ident| $body:expr) => {
        match FieldSpec::parse(&$config.field)? {
            FieldSpec::Prime(p) => {
                let $f = &PrimeField::new(p)?;
                $body
            }
            FieldSpec::Rational => {
                let $f = &Rationals;
                $body
            }
        }
    };
}

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "preproj", version, about = "Graded preprojective algebras and maximal-rank checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the table of dim V^t_d.
    Dims(RunConfig),
    /// Run a check suite; exits 0 if everything passes and 1 otherwise.
    Check {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        config: RunConfig,
        /// Number of variables (hl-poly).
        #[arg(long)]
        r: Option<usize>,
        /// Degree of the forms (hl-poly).
        #[arg(long)]
        d: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Ar,
    Maxrank,
    Bounds,
    HlAnalog,
    HlPoly,
    Counterexamples,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Quiver file.
    #[arg(long)]
    pub quiver: Option<PathBuf>,
    /// A prime p or "rational".
    #[arg(long, alias = "p", default_value = "65521")]
    pub field: String,
    #[arg(long, default_value_t = 4)]
    pub max_degree: i64,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Defaults to tsv for `dims` and json for `check`.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    pub mode: Mode,
    /// Largest number of subspace tuples an exhaustive check may visit before sampling instead.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    /// Minimal pass fraction of sampled checks.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok((text, passed)) => {
            let _ = out.write_all(text.as_bytes());
            if passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// Runs a parsed command, returning the rendered report and whether everything passed.
pub fn execute(command: &Command) -> Result<(String, bool)> {
    match command {
        Command::Dims(config) => {
            let input = load_quiver(config)?;
            let table = with_field!(config, |f| dims_table(&input, f, config.max_degree))?;
            let text = match config.format.unwrap_or(Format::Tsv) {
                Format::Tsv => dims_tsv(&table),
                Format::Json => {
                    let mut report = header(config, &Some(input), "dims", None);
                    report["dims"] = json!(table);
                    report["result"] = json!("PASS");
                    render_json(&report)
                }
            };
            Ok((text, true))
        }
        Command::Check { suite, config, r, d } => {
            let input = match suite {
                Suite::HlPoly | Suite::Counterexamples => None,
                _ => Some(load_quiver(config)?),
            };
            let items = match suite {
                Suite::Ar => with_field!(config, |f| suite_ar(input.as_ref().unwrap(), f, config.max_degree))?,
                Suite::Bounds => with_field!(config, |f| suite_bounds(input.as_ref().unwrap(), f, config.max_degree))?,
                Suite::Maxrank => suite_maxrank(input.as_ref().unwrap(), &prime_field(config)?, config)?,
                Suite::HlAnalog => suite_hl_analog(input.as_ref().unwrap(), &prime_field(config)?, config)?,
                Suite::HlPoly => {
                    let (r, d) = match (r, d) {
                        (Some(r), Some(d)) => (*r, *d),
                        _ => return Err(Error::InvalidInput("hl-poly needs --r and --d".into())),
                    };
                    suite_hl_poly(&prime_field(config)?, r, d, config)?
                }
                Suite::Counterexamples => suite_counterexamples(&prime_field(config)?, config)?,
            };
            let passed = items.iter().all(|i| i["result"] != "FAIL" || i["informational"] == true);
            let text = match config.format.unwrap_or(Format::Json) {
                Format::Tsv => check_tsv(suite_name(*suite), &items, passed),
                Format::Json => {
                    let mut report = header(config, &input, "check", Some(suite_name(*suite)));
                    report["items"] = Value::Array(items);
                    report["result"] = json!(if passed { "PASS" } else { "FAIL" });
                    render_json(&report)
                }
            };
            Ok((text, passed))
        }
    }
}

fn prime_field(config: &RunConfig) -> Result<PrimeField> {
    match FieldSpec::parse(&config.field)? {
        FieldSpec::Prime(p) => PrimeField::new(p),
        FieldSpec::Rational => Err(Error::PrimeFieldRequired),
    }
}

fn suite_name(suite: Suite) -> &'static str {
    match suite {
        Suite::Ar => "ar",
        Suite::Maxrank => "maxrank",
        Suite::Bounds => "bounds",
        Suite::HlAnalog => "hl-analog",
        Suite::HlPoly => "hl-poly",
        Suite::Counterexamples => "counterexamples",
    }
}

/// A parsed quiver file with its path and content hash.
pub struct QuiverInput {
    pub path: PathBuf,
    pub sha256: String,
    pub quiver: Quiver,
    pub weights: Weights,
}

fn load_quiver(config: &RunConfig) -> Result<QuiverInput> {
    let path = config.quiver.clone().ok_or_else(|| Error::InvalidInput("--quiver is required".into()))?;
    let bytes = std::fs::read(&path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    let text =
        String::from_utf8(bytes.clone()).map_err(|_| Error::InvalidInput(format!("{}: not UTF-8", path.display())))?;
    let (quiver, weights) = parse_quiver(&text)?;
    Ok(QuiverInput { path, sha256: hex::encode(Sha256::digest(&bytes)), quiver, weights })
}

fn header(config: &RunConfig, input: &Option<QuiverInput>, command: &str, suite: Option<&str>) -> Value {
    let field = FieldSpec::parse(&config.field).map(|s| s.to_string()).unwrap_or_default();
    json!({
        "schema_version": SCHEMA_VERSION,
        "tool": "preproj",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "suite": suite,
        "quiver": input.as_ref().map(|i| json!({ "path": i.path.display().to_string(), "sha256": i.sha256 })),
        "field": field,
        "max_degree": config.max_degree,
        "trials": config.trials,
        "seed": config.seed,
        "mode": match config.mode { Mode::Exhaustive => "exhaustive", Mode::Sampled => "sampled" },
        "threshold": config.threshold,
        "budget": config.budget.to_string(),
    })
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn algebra<F: Field>(input: &QuiverInput, field: &F) -> Result<PreprojAlgebra<F>> {
    PreprojAlgebra::new(&input.quiver, &input.weights, field.clone())
}

/// `dims[t][d]` for `0 <= d <= max_d`.
pub fn dims_table<F: Field>(input: &QuiverInput, field: &F, max_d: i64) -> Result<Vec<Vec<usize>>> {
    if max_d < 0 {
        return Err(Error::InvalidInput("--max-degree must be nonnegative".into()));
    }
    Ok(algebra(input, field)?.dims_table(max_d as usize))
}

fn dims_tsv(table: &[Vec<usize>]) -> String {
    let width = table.first().map_or(0, Vec::len);
    let mut s = String::from("t");
    for d in 0..width {
        s.push_str(&format!("\td={d}"));
    }
    s.push('\n');
    for (t, row) in table.iter().enumerate() {
        s.push_str(&(t + 1).to_string());
        for x in row {
            s.push_str(&format!("\t{x}"));
        }
        s.push('\n');
    }
    s
}

fn check_tsv(suite: &str, items: &[Value], passed: bool) -> String {
    let mut s = String::from("suite\tcheck\tt\td\tresult\n");
    let cell = |v: &Value| if v.is_null() { "-".to_string() } else { v.to_string() };
    for item in items {
        s.push_str(&format!(
            "{suite}\t{}\t{}\t{}\t{}{}\n",
            item["check"].as_str().unwrap_or("-"),
            cell(&item["t"]),
            cell(&item["d"]),
            item["result"].as_str().unwrap_or("-"),
            if item["informational"] == true { " (informational)" } else { "" },
        ));
    }
    s.push_str(&format!("{suite}\toverall\t-\t-\t{}\n", if passed { "PASS" } else { "FAIL" }));
    s
}

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Exactness of every almost split sequence `0 -> V^t_d -> B -> V^t_{d+1} -> 0` with `d <= max_d`.
pub fn suite_ar<F: Field>(input: &QuiverInput, field: &F, max_d: i64) -> Result<Vec<Value>> {
    let alg = algebra(input, field)?;
    let mut items = Vec::new();
    for (t, d) in alg.ar_cells(max_d) {
        let seq = alg.ar_sequence(t, d)?;
        let ex = seq.exactness();
        items.push(json!({
            "check": "exactness",
            "t": t + 1,
            "d": d,
            "dims": [seq.start_dim(), seq.middle_dim(), seq.end_dim()],
            "middle": seq.g.classes().iter().map(|c| json!({
                "vertex": c.key.0 + 1,
                "degree": c.key.1,
                "dim": c.dim,
                "multiplicity": c.multiplicity(),
            })).collect::<Vec<_>>(),
            "composition_zero": ex.composition_zero,
            "f_injective": ex.f_injective,
            "g_surjective": ex.g_surjective,
            "image_is_kernel": ex.image_is_kernel,
            "dims_additive": ex.dims_additive,
            "result": pass_fail(ex.holds()),
        }));
    }
    Ok(items)
}

/// The inequalities `dim C < Σ (dim V_i)²` for surjective `g`, `dim A < Σ (dim V_i)²` for
/// injective `f`, and `dim B < 2 Σ (dim V_i)² − 1` for almost split sequences.
pub fn suite_bounds<F: Field>(input: &QuiverInput, field: &F, max_d: i64) -> Result<Vec<Value>> {
    let alg = algebra(input, field)?;
    let n = alg.quiver().vertex_count();
    let mut items = Vec::new();
    let bound_item = |check: &str, t: usize, d: i64, lhs: usize, rhs: usize, applies: bool| {
        json!({
            "check": check,
            "t": t + 1,
            "d": d,
            "lhs": lhs,
            "rhs": rhs,
            "applies": applies,
            "result": if !applies { "N/A" } else { pass_fail(lhs < rhs) },
        })
    };
    for t in 0..n {
        for d in 0..=max_d {
            if alg.dim(t, d) == 0 {
                continue;
            }
            let g = alg.right_mult_g(t, d)?;
            let applies = g.matrix().is_surjective();
            items.push(bound_item("g_bound", t, d, alg.dim(t, d), g.quadratic_sum(), applies));
        }
    }
    for (t, d) in alg.ar_cells(max_d) {
        let seq = alg.ar_sequence(t, d)?;
        let applies = seq.f.matrix().is_injective();
        items.push(bound_item("f_bound", t, d, seq.start_dim(), seq.f.quadratic_sum(), applies));
        let rhs = (2 * seq.quadratic_sum()).saturating_sub(1);
        items.push(bound_item("middle_bound", t, d, seq.middle_dim(), rhs, true));
    }
    Ok(items)
}

fn mode_of(config: &RunConfig) -> CheckMode {
    match config.mode {
        Mode::Exhaustive => CheckMode::Exhaustive { budget: config.budget },
        Mode::Sampled => CheckMode::Sampled { trials: config.trials, seed: config.seed, threshold: config.threshold },
    }
}

/// Runs `property` in the configured mode, sampling instead when exhaustive enumeration
/// would exceed the budget.
fn check_with_fallback<F: FiniteField>(
    map: &TensorSumMap<F>,
    property: Property,
    config: &RunConfig,
) -> Result<Verdict<F>> {
    match check(map, property, mode_of(config), None) {
        Err(Error::BudgetExceeded { .. }) => check(
            map,
            property,
            CheckMode::Sampled { trials: config.trials, seed: config.seed, threshold: config.threshold },
            None,
        ),
        other => other,
    }
}

/// Right omnipresent maximal rank of the tensor forms of every `g^t_d` and of every `f^t_d`
/// in an almost split sequence; left omnipresent of `g^t_d` is reported for information.
pub fn suite_maxrank<F: FiniteField>(input: &QuiverInput, field: &F, config: &RunConfig) -> Result<Vec<Value>> {
    let alg = algebra(input, field)?;
    let n = alg.quiver().vertex_count();
    let mut items = Vec::new();
    let item = |check: &str, t: usize, d: i64, map: &TensorSumMap<F>, v: &Verdict<F>, informational: bool| {
        json!({
            "check": check,
            "t": t + 1,
            "d": d,
            "blocks": map.blocks().iter().map(|b| [b.dim_v, b.dim_w]).collect::<Vec<_>>(),
            "verdict": v.to_json(),
            "informational": informational,
            "result": v.result_str(),
        })
    };
    for t in 0..n {
        for d in 0..=config.max_degree {
            if alg.dim(t, d) == 0 {
                continue;
            }
            let (map, _) = TensorSumMap::from_multiplication_map(&alg.right_mult_g(t, d)?)?;
            let v = check_with_fallback(&map, Property::RightOmnipresent, config)?;
            items.push(item("g_right_omnipresent", t, d, &map, &v, false));
            let v = check_with_fallback(&map, Property::LeftOmnipresent, config)?;
            items.push(item("g_left_omnipresent", t, d, &map, &v, true));
        }
    }
    for (t, d) in alg.ar_cells(config.max_degree) {
        let (map, _) = TensorSumMap::from_multiplication_map(&alg.left_mult_f(t, d)?)?;
        let v = check_with_fallback(&map, Property::RightOmnipresent, config)?;
        items.push(item("f_right_omnipresent", t, d, &map, &v, false));
    }
    Ok(items)
}

/// Generic-basis certificates for every `(t, d)` with `1 <= d <= max_d` and `V^t_d ≠ 0`.
pub fn suite_hl_analog<F: FiniteField>(input: &QuiverInput, field: &F, config: &RunConfig) -> Result<Vec<Value>> {
    let alg = algebra(input, field)?;
    let mut items = Vec::new();
    for t in 0..alg.quiver().vertex_count() {
        for d in 1..=config.max_degree {
            if alg.dim(t, d) == 0 {
                continue;
            }
            let cert = HlAnalog::new(&alg, t, d, None, None)?.certify(config.trials, config.seed);
            items.push(json!({
                "check": "hl_analog",
                "t": t + 1,
                "d": d,
                "certificate": cert.to_json(),
                "result": pass_fail(cert.pass_fraction() >= config.threshold),
            }));
        }
    }
    Ok(items)
}

pub fn suite_hl_poly<F: FiniteField>(field: &F, r: usize, d: usize, config: &RunConfig) -> Result<Vec<Value>> {
    let cert = check_hl(field, r, d, config.trials, config.seed)?;
    let (n, s) = hl_parameters(r, d);
    Ok(vec![json!({
        "check": "hl_poly",
        "t": null,
        "d": d,
        "r": r,
        "n": n,
        "s": s,
        "certificate": cert.to_json(),
        "result": pass_fail(cert.pass_fraction() >= config.threshold),
    })])
}

/// The two known failures of the stronger properties; each passes when the expected
/// failure and its witness are found.
pub fn suite_counterexamples<F: FiniteField>(field: &F, config: &RunConfig) -> Result<Vec<Value>> {
    let exhaustive = CheckMode::Exhaustive { budget: config.budget };
    let sampled = CheckMode::Sampled { trials: config.trials, seed: config.seed, threshold: config.threshold };
    let span =
        |n: usize, v: &[i64]| Subspace::from_spanning(field, n, vec![v.iter().map(|&x| field.from_i64(x)).collect()]);
    let mut items = Vec::new();

    let (q, w) = parse_quiver("vertices 2\narrow b: 1 -> 2\n")?;
    let alg = PreprojAlgebra::new(&q, &w, field.clone())?;
    let (t, _) = TensorSumMap::from_multiplication_map(&alg.right_mult_g(1, 1)?)?;
    let right = check(&t, Property::RightOmnipresent, exhaustive, None)?;
    let left = check(&t, Property::LeftOmnipresent, exhaustive, None)?;
    // In the basis {e_1, b} of V^1_0 the bad line is span{b}.
    let found = left.witness.as_ref().is_some_and(|w| w.subspaces == [span(2, &[0, 1])]);
    items.push(json!({
        "check": "a2_left_omnipresent_fails",
        "t": 2,
        "d": 1,
        "right_omnipresent": right.to_json(),
        "left_omnipresent": left.to_json(),
        "result": pass_fail(right.passed && !left.passed && found),
    }));

    let t = quotient_tensor_map(field);
    let right_general = check(&t, Property::RightGeneral, exhaustive, None)?;
    let right_omni = check(&t, Property::RightOmnipresent, exhaustive, None)?;
    let left_general = check(&t, Property::LeftGeneral, sampled, Some(&[vec![2]]))?;
    let found = right_omni.witness.as_ref().is_some_and(|w| w.subspaces == [span(2, &[1, 0])]);
    let every_trial_fails = left_general.profiles.iter().all(|p| p.failures == p.cases);
    items.push(json!({
        "check": "tensor_quotient",
        "t": null,
        "d": null,
        "right_general": right_general.to_json(),
        "right_omnipresent": right_omni.to_json(),
        "left_general": left_general.to_json(),
        "result": pass_fail(right_general.passed && !right_omni.passed && found && every_trial_fails),
    }));
    Ok(items)
}
