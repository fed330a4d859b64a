//! Command-line front end. [`run`] parses arguments, computes, and returns
//! the text to print with the exit status, so the binary is a thin shell.
//!
//! Exit status: 0 success, 1 verification or computation failure, 2 usage
//! error or invalid parameters.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Number, Value};

use crate::error::BohrError;
use crate::families::{extremal_series, ExtremalSpec, ProductFunctionSpec, SeededRng};
use crate::radius::{limit_sweep_m, limit_sweep_n, solve, RadiusFamily, RadiusResult, AREA_T_SPLIT};
use crate::report::EvalReport;
use crate::series::TruncatedSeries;
use crate::verification::{check_holds_below, check_sharpness_above, CaseReport, SuiteConfig, SuiteReport};

pub const SCHEMA_VERSION: u64 = 1;
pub const THREADS_ENV: &str = "POLYBOHR_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "polybohr", version, about = "Bohr-type radii and inequality checks on the unit polydisc")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one radius equation.
    Radius(FamilyArgs),
    /// Emit a reproduction table.
    Table(TableArgs),
    /// Run the hold-below suite, or the sharpness suite with --sharpness.
    Verify(VerifyArgs),
    /// Run the sharpness suite (same as verify --sharpness).
    Sharpness(VerifyArgs),
    /// Print the Taylor coefficients of a test function.
    Expand(ExpandArgs),
    /// Sweep the radius of the composed Rogosinski sum in N or in m.
    Limits(LimitsArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FamilyName {
    Classical,
    Rogosinski,
    Rmn,
    Rmnn,
    An,
    #[value(name = "convexT", alias = "convex-t")]
    ConvexT,
    #[value(name = "convexMNT", alias = "convex-mnt")]
    ConvexMnt,
    Euler,
    #[value(name = "areaT", alias = "area-t")]
    AreaT,
}

#[derive(Args, Debug, Clone)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyName,
    /// Number of variables.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Vanishing order of the Schwarz map.
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// First degree of the majorant tail.
    #[arg(long = "N", default_value_t = 1)]
    big_n: u32,
    /// Power of the modulus term (rogosinski only).
    #[arg(long, default_value_t = 1)]
    p: u32,
    /// Convex weight (convexT, convexMNT, areaT).
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
    /// Weight of the degree >= 2 majorant (euler).
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TableName {
    #[value(name = "thmC-limits")]
    ThmCLimits,
    #[value(name = "thm2.2-sweepN")]
    SweepN,
    #[value(name = "thm2.2-sweepM")]
    SweepM,
    #[value(name = "thmF-piecewise")]
    ThmFPiecewise,
    #[value(name = "thm2.3-grid")]
    Grid23,
}

/// Tables and their CSV columns:
///
///   thmC-limits     N, radius_x, residual            (A_N, n = 1, N = 1..10)
///   thm2.2-sweepN   m, n, N, radius_r, radius_x, residual
///   thm2.2-sweepM   m, n, N, radius_r, radius_x, residual, a_n_x
///   thmF-piecewise  t, branch, radius_x, radius_r
///   thm2.3-grid     m, n, t, radius_x, radius_r, residual, status
#[derive(Args, Debug, Clone)]
#[command(verbatim_doc_comment)]
struct TableArgs {
    #[arg(long, value_enum)]
    name: TableName,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Vanishing order for the sweeps.
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Number of variables for the sweeps and the piecewise table.
    #[arg(long)]
    n: Option<usize>,
    /// Tail start for the m-sweep.
    #[arg(long = "N", default_value_t = 1)]
    big_n: u32,
}

#[derive(Args, Debug, Clone)]
struct VerifyArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Search for an extremal witness above the radius instead.
    #[arg(long)]
    sharpness: bool,
    #[arg(long, default_value_t = crate::verification::DEFAULT_MARGIN_BELOW)]
    margin_below: f64,
    #[arg(long, default_value_t = crate::verification::DEFAULT_MARGIN_ABOVE)]
    margin_above: f64,
    /// Comma-separated extremal parameters for the sharpness search.
    #[arg(long, value_delimiter = ',')]
    a_schedule: Option<Vec<f64>>,
    /// Random torus points per sample.
    #[arg(long, default_value_t = 2)]
    points: usize,
    /// Include every case in the report.
    #[arg(long)]
    cases: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ExpandFamily {
    Extremal,
    #[value(name = "blaschke-sample")]
    BlaschkeSample,
}

#[derive(Args, Debug, Clone)]
struct ExpandArgs {
    #[arg(long, value_enum)]
    family: ExpandFamily,
    /// Truncation degree.
    #[arg(long = "K", alias = "degree")]
    max_degree: u32,
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Extremal parameter.
    #[arg(long, default_value_t = 0.5)]
    a: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Blaschke factors per coordinate.
    #[arg(long, default_value_t = 2)]
    factors: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SweepVar {
    #[value(name = "N")]
    BigN,
    #[value(name = "m")]
    M,
}

#[derive(Args, Debug, Clone)]
struct LimitsArgs {
    #[arg(long, value_enum)]
    sweep: SweepVar,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long = "N", default_value_t = 1)]
    big_n: u32,
    /// Strictly ascending comma-separated values of the swept parameter.
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<u32>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

/// What to print and how to exit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn usage(stderr: String) -> Self {
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Compute(BohrError),
}

impl From<BohrError> for CliError {
    fn from(e: BohrError) -> Self {
        match e {
            BohrError::InvalidParameter(_) | BohrError::DimensionMismatch { .. } => CliError::Usage(e.to_string()),
            other => CliError::Compute(other),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() { Outcome::usage(text) } else { Outcome::ok(text) };
        }
    };
    if let Err(msg) = configure_threads() {
        return Outcome::usage(format!("error: {msg}\n"));
    }
    let result = match cli.command {
        Command::Radius(args) => cmd_radius(&args),
        Command::Table(args) => cmd_table(&args),
        Command::Verify(args) => cmd_verify(&args, "verify"),
        Command::Sharpness(args) => cmd_verify(&VerifyArgs { sharpness: true, ..args }, "sharpness"),
        Command::Expand(args) => cmd_expand(&args),
        Command::Limits(args) => cmd_limits(&args),
    };
    match result {
        Ok(outcome) => outcome,
        Err(CliError::Usage(msg)) => Outcome::usage(format!("error: {msg}\n")),
        Err(CliError::Compute(e)) => Outcome { code: EXIT_FAILURE, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn configure_threads() -> std::result::Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))?;
    // A pool already built by an earlier call in this process is kept.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Binary64 value as a 17-significant-digit JSON number; non-finite becomes null.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{x:.16e}");
    Value::Number(text.parse::<Number>().expect("formatted float is a valid JSON number"))
}

fn csv_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

fn family_from_args(a: &FamilyArgs) -> CliResult<RadiusFamily> {
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| CliError::Usage(format!("--{name} is required for --family {:?}", a.family)));
    let family = match a.family {
        FamilyName::Classical => RadiusFamily::Classical { n: a.n },
        FamilyName::Rogosinski => RadiusFamily::RogosinskiUni { big_n: a.big_n, p: a.p },
        FamilyName::Rmn => RadiusFamily::RmN { m: a.m, big_n: a.big_n },
        FamilyName::Rmnn => RadiusFamily::RmnN { m: a.m, n: a.n, big_n: a.big_n },
        FamilyName::An => RadiusFamily::AN { n: a.n, big_n: a.big_n },
        FamilyName::ConvexT => RadiusFamily::ConvexT { t: need(a.t, "t")? },
        FamilyName::ConvexMnt => RadiusFamily::ConvexMNT { m: a.m, n: a.n, t: need(a.t, "t")? },
        FamilyName::Euler => RadiusFamily::EulerLambda { n: a.n, lambda: need(a.lambda, "lambda")? },
        FamilyName::AreaT => RadiusFamily::AreaT { n: a.n, t: need(a.t, "t")? },
    };
    family.validate()?;
    Ok(family)
}

/// Family name and parameters, integers kept as integers.
fn family_json(family: &RadiusFamily) -> Value {
    let mut map = Map::new();
    map.insert("family".into(), json!(family.name()));
    for (key, value) in family.params() {
        let v = match key {
            "t" | "lambda" => num(value),
            _ => json!(value as u64),
        };
        map.insert(key.into(), v);
    }
    Value::Object(map)
}

fn radius_json(res: &RadiusResult) -> Value {
    json!({
        "radius_r": num(res.radius_r),
        "radius_x": num(res.radius_x),
        "residual": num(res.residual),
        "bracket": [num(res.bracket.0), num(res.bracket.1)],
        "note": res.note,
    })
}

fn record(command: &str, args: Value, result: Value) -> String {
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "args": args,
        "result": result,
    });
    let mut text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
    text.push('\n');
    text
}

fn cmd_radius(args: &FamilyArgs) -> CliResult<Outcome> {
    let family = family_from_args(args)?;
    let res = solve(family)?;
    Ok(Outcome::ok(record("radius", family_json(&family), radius_json(&res))))
}

fn report_json(rep: &EvalReport) -> Value {
    json!({
        "value": num(rep.value),
        "tail_bound": num(rep.tail_bound),
        "eval_error": num(rep.eval_error),
        "threshold": num(rep.threshold),
        "verdict": rep.verdict.as_str(),
        "modulus_path": rep.modulus_path.map(|p| match p {
            crate::report::ModulusPath::ClosedForm => "closed-form",
            crate::report::ModulusPath::Series => "series",
        }),
    })
}

fn case_json(case: &CaseReport) -> Value {
    json!({
        "index": case.index,
        "seed": case.seed,
        "label": case.label,
        "a": opt_num(case.a),
        "r": num(case.r),
        "K": case.max_degree,
        "verdict": case.verdict.as_str(),
        "report": case.report.as_ref().map(report_json),
        "error": case.error,
    })
}

fn suite_json(rep: &SuiteReport, include_cases: bool) -> Value {
    let mut map = Map::new();
    map.insert("suite".into(), json!(rep.kind.as_str()));
    map.insert("radius_r".into(), opt_num(rep.radius_r));
    map.insert("r_eval".into(), opt_num(rep.r_eval));
    map.insert("cases_total".into(), json!(rep.cases.len()));
    map.insert("holds".into(), json!(rep.holds));
    map.insert("violated".into(), json!(rep.violated));
    map.insert("inconclusive".into(), json!(rep.inconclusive));
    map.insert("worst_slack".into(), num(rep.worst_slack));
    map.insert("witness_a".into(), opt_num(rep.witness_a));
    map.insert("failing_seeds".into(), json!(rep.failing_seeds));
    map.insert("passed".into(), json!(rep.passed));
    if include_cases {
        map.insert("cases".into(), Value::Array(rep.cases.iter().map(case_json).collect()));
    }
    Value::Object(map)
}

fn cmd_verify(args: &VerifyArgs, command: &str) -> CliResult<Outcome> {
    let family = family_from_args(&args.family)?;
    let mut config = SuiteConfig::new(family).with_samples(args.samples).with_seed(args.seed);
    config.margin_below = args.margin_below;
    config.margin_above = args.margin_above;
    config.points_per_sample = args.points;
    if let Some(schedule) = &args.a_schedule {
        config.a_schedule = schedule.clone();
    }
    config.validate()?;
    let report = if args.sharpness { check_sharpness_above(&config)? } else { check_holds_below(&config)? };

    let mut echo = family_json(&family);
    if let Value::Object(map) = &mut echo {
        map.insert("samples".into(), json!(args.samples));
        map.insert("seed".into(), json!(args.seed));
        map.insert("sharpness".into(), json!(args.sharpness));
        map.insert("margin_below".into(), num(config.margin_below));
        map.insert("margin_above".into(), num(config.margin_above));
        map.insert("a_schedule".into(), Value::Array(config.a_schedule.iter().map(|&a| num(a)).collect()));
        map.insert("points".into(), json!(args.points));
    }
    // Sharpness reports are short, so their cases are always listed.
    let include = args.cases || args.sharpness;
    let stdout = record(command, echo, suite_json(&report, include));
    let code = if report.passed { EXIT_OK } else { EXIT_FAILURE };
    let stderr = if report.passed {
        String::new()
    } else {
        format!("suite failed; failing seeds: {:?}\n", report.failing_seeds)
    };
    Ok(Outcome { code, stdout, stderr })
}

fn expand_series(args: &ExpandArgs) -> CliResult<TruncatedSeries> {
    Ok(match args.family {
        ExpandFamily::Extremal => extremal_series(ExtremalSpec::new(args.a, args.n)?, args.max_degree)?,
        ExpandFamily::BlaschkeSample => {
            if args.n == 0 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            let mut rng = SeededRng::new(args.seed);
            let counts = vec![args.factors; args.n];
            ProductFunctionSpec::sample_with(&mut rng, &counts, 0.0)?.series(args.max_degree)?
        }
    })
}

fn cmd_expand(args: &ExpandArgs) -> CliResult<Outcome> {
    let series = expand_series(args)?;
    if args.format == Format::Csv {
        let rows = series.terms().map(|(alpha, c)| vec![alpha.to_string(), csv_num(c.re), csv_num(c.im)]);
        return Ok(Outcome::ok(write_csv(&["index", "re", "im"], rows)?));
    }
    let coefficients: Vec<Value> = series
        .terms()
        .map(|(alpha, c)| json!({ "index": alpha.exponents(), "re": num(c.re), "im": num(c.im) }))
        .collect();
    let tail = series.tail().map(|t| {
        json!({ "c": num(t.c), "q": num(t.q), "weight": t.weight, "valid_from_degree": t.valid_from_degree })
    });
    let mut echo = json!({
        "family": match args.family { ExpandFamily::Extremal => "extremal", ExpandFamily::BlaschkeSample => "blaschke-sample" },
        "n": args.n,
        "K": args.max_degree,
    });
    if let Value::Object(map) = &mut echo {
        match args.family {
            ExpandFamily::Extremal => {
                map.insert("a".into(), num(args.a));
            }
            ExpandFamily::BlaschkeSample => {
                map.insert("seed".into(), json!(args.seed));
                map.insert("factors".into(), json!(args.factors));
            }
        }
    }
    let result = json!({ "nonzero": coefficients.len(), "coefficients": coefficients, "tail": tail });
    Ok(Outcome::ok(record("expand", echo, result)))
}

fn write_csv<R>(header: &[&str], rows: R) -> CliResult<String>
where
    R: IntoIterator<Item = Vec<String>>,
{
    let mut writer = csv::WriterBuilder::new()
        .delimiter(b',')
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Compute(BohrError::Capacity(format!("csv: {e}")));
    writer.write_record(header).map_err(io)?;
    for row in rows {
        writer.write_record(&row).map_err(io)?;
    }
    let bytes = writer.into_inner().map_err(|e| io(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Header and rows of a table, rendered as CSV or as a JSON record.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    fn csv(&self) -> CliResult<String> {
        let cell = |v: &Value| match v {
            Value::Null => String::new(),
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        write_csv(&self.header, self.rows.iter().map(|r| r.iter().map(cell).collect()))
    }

    fn json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| Value::Object(self.header.iter().map(|h| h.to_string()).zip(row.iter().cloned()).collect()))
                .collect(),
        )
    }
}

fn table_thm_c_limits() -> CliResult<Table> {
    let mut rows = Vec::new();
    for big_n in 1..=10 {
        let res = solve(RadiusFamily::AN { n: 1, big_n })?;
        rows.push(vec![json!(big_n), num(res.radius_x), num(res.residual)]);
    }
    Ok(Table { header: vec!["N", "radius_x", "residual"], rows })
}

pub const SWEEP_N_VALUES: [u32; 10] = [1, 2, 3, 5, 10, 20, 50, 100, 200, 400];
pub const SWEEP_M_VALUES: [u32; 8] = [1, 2, 5, 10, 20, 50, 100, 200];
pub const PIECEWISE_T_VALUES: [f64; 11] = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.52, 0.6, 0.7, 0.8, 1.0];
pub const GRID_T_VALUES: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

fn sweep_row(res: &RadiusResult, m: u32, n: usize, big_n: u32) -> Vec<Value> {
    vec![json!(m), json!(n), json!(big_n), num(res.radius_r), num(res.radius_x), num(res.residual)]
}

fn table_sweep_n(m: u32, n: usize) -> CliResult<Table> {
    let results = limit_sweep_n(m, n, &SWEEP_N_VALUES)?;
    let rows = results.iter().zip(SWEEP_N_VALUES).map(|(res, big_n)| sweep_row(res, m, n, big_n)).collect();
    Ok(Table { header: vec!["m", "n", "N", "radius_r", "radius_x", "residual"], rows })
}

fn table_sweep_m(n: usize, big_n: u32) -> CliResult<Table> {
    let results = limit_sweep_m(n, big_n, &SWEEP_M_VALUES)?;
    let a_n = solve(RadiusFamily::AN { n, big_n })?;
    let rows = results
        .iter()
        .zip(SWEEP_M_VALUES)
        .map(|(res, m)| {
            let mut row = sweep_row(res, m, n, big_n);
            row.push(num(a_n.radius_x));
            row
        })
        .collect();
    Ok(Table { header: vec!["m", "n", "N", "radius_r", "radius_x", "residual", "a_n_x"], rows })
}

fn table_piecewise(n: usize) -> CliResult<Table> {
    let mut ts: Vec<f64> = PIECEWISE_T_VALUES.to_vec();
    ts.push(AREA_T_SPLIT);
    ts.sort_by(f64::total_cmp);
    let mut rows = Vec::new();
    for t in ts {
        let res = solve(RadiusFamily::AreaT { n, t })?;
        let branch = if t < AREA_T_SPLIT { "cubic" } else { "constant" };
        rows.push(vec![num(t), json!(branch), num(res.radius_x), num(res.radius_r)]);
    }
    Ok(Table { header: vec!["t", "branch", "radius_x", "radius_r"], rows })
}

fn table_grid_23() -> CliResult<Table> {
    let mut rows = Vec::new();
    for m in 1..=3u32 {
        for n in 1..=3usize {
            for t in GRID_T_VALUES {
                let row = match solve(RadiusFamily::ConvexMNT { m, n, t }) {
                    Ok(res) => vec![json!(m), json!(n), num(t), num(res.radius_x), num(res.radius_r), num(res.residual), json!("ok")],
                    Err(e) => vec![json!(m), json!(n), num(t), Value::Null, Value::Null, Value::Null, json!(e.to_string())],
                };
                rows.push(row);
            }
        }
    }
    Ok(Table { header: vec!["m", "n", "t", "radius_x", "radius_r", "residual", "status"], rows })
}

fn cmd_table(args: &TableArgs) -> CliResult<Outcome> {
    let (name, table) = match args.name {
        TableName::ThmCLimits => ("thmC-limits", table_thm_c_limits()?),
        TableName::SweepN => ("thm2.2-sweepN", table_sweep_n(args.m, args.n.unwrap_or(2))?),
        TableName::SweepM => ("thm2.2-sweepM", table_sweep_m(args.n.unwrap_or(1), args.big_n)?),
        TableName::ThmFPiecewise => ("thmF-piecewise", table_piecewise(args.n.unwrap_or(1))?),
        TableName::Grid23 => ("thm2.3-grid", table_grid_23()?),
    };
    match args.format {
        Format::Csv => Ok(Outcome::ok(table.csv()?)),
        Format::Json => {
            let echo = json!({ "name": name, "m": args.m, "n": args.n, "N": args.big_n });
            Ok(Outcome::ok(record("table", echo, json!({ "rows": table.json() }))))
        }
    }
}

fn cmd_limits(args: &LimitsArgs) -> CliResult<Outcome> {
    let (sweep, table) = match args.sweep {
        SweepVar::BigN => {
            let results = limit_sweep_n(args.m, args.n, &args.values)?;
            let rows = results.iter().zip(&args.values).map(|(res, &big_n)| sweep_row(res, args.m, args.n, big_n)).collect();
            ("N", Table { header: vec!["m", "n", "N", "radius_r", "radius_x", "residual"], rows })
        }
        SweepVar::M => {
            let results = limit_sweep_m(args.n, args.big_n, &args.values)?;
            let rows = results.iter().zip(&args.values).map(|(res, &m)| sweep_row(res, m, args.n, args.big_n)).collect();
            ("m", Table { header: vec!["m", "n", "N", "radius_r", "radius_x", "residual"], rows })
        }
    };
    if args.format == Format::Csv {
        return Ok(Outcome::ok(table.csv()?));
    }
    let mut result = Map::new();
    result.insert("rows".into(), table.json());
    if args.sweep == SweepVar::M {
        let a_n = solve(RadiusFamily::AN { n: args.n, big_n: args.big_n })?;
        result.insert("a_n_x".into(), num(a_n.radius_x));
    }
    let echo = json!({ "sweep": sweep, "m": args.m, "n": args.n, "N": args.big_n, "values": args.values });
    Ok(Outcome::ok(record("limits", echo, Value::Object(result))))
}
