//! Command-line front end: argument model, command execution and output encoding.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use limop::lang;
use limop::limits::{self, Certificate};
use limop::operators::{format_real, BandOperator, HalfLineOperator, Side};
use limop::potentials::Sequence;
use limop::spectra::{self, GammaEvaluator, GridSpec, LevelSetMask};
use limop::words::{self, WindowView};
use limop::Interval;

#[derive(Debug, Parser)]
#[command(name = "limop", version, about = "Band operators over symbolic sequences: spectra, pseudospectra and limit-operator certificates")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Payload file; metadata goes to `<out>.meta.json`. Standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for grid sweeps and pairwise certificates.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Section width for localized lower norms.
    #[arg(long, global = true, default_value_t = 32)]
    pub n: usize,
    /// Number of indices searched (search window length).
    #[arg(long, global = true, default_value_t = 10_000)]
    pub window: u64,
    /// Matching tolerance for certificates.
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    /// Default seed for random generators.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Plus,
    Minus,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Plus => Side::Plus,
            SideArg::Minus => Side::Minus,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump a potential on an index range.
    Generate {
        #[arg(long)]
        potential: String,
        #[arg(long, allow_hyphen_values = true)]
        range: String,
    },
    /// Factor complexity profile on a centred window of `--window` symbols.
    Complexity {
        #[arg(long)]
        potential: String,
        #[arg(long, default_value_t = 15)]
        max_n: usize,
    },
    /// `gamma_n(lambda) = min(nu_n(A - lambda), nu_n((A - lambda)*))` on a grid.
    Spectrum {
        #[arg(long)]
        operator: String,
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
    },
    /// Spectrum grid plus level sets `gamma < eps` for each eps.
    Pseudospectrum {
        #[arg(long)]
        operator: String,
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// Comma-separated eps values.
        #[arg(long)]
        epsilons: String,
    },
    /// Subword inclusion `W_{n+2}(b) in W(c)` and the lower-norm and gamma comparison of the Schroedinger operators.
    Compare {
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// Search range for `c` instead of the centred window.
        #[arg(long, allow_hyphen_values = true)]
        c_range: Option<String>,
    },
    /// Pairwise limit-operator evidence across a family; exit code follows the verdict.
    Minimality {
        /// Family member; repeat for each.
        #[arg(long = "member", required = true)]
        members: Vec<String>,
    },
    /// Eigenvalues of a half-line section classified against the bands.
    Halfline {
        #[arg(long)]
        operator: String,
        /// Section size.
        #[arg(long)]
        size: usize,
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long, value_enum, default_value_t = SideArg::Plus)]
        side: SideArg,
    },
    /// Growth of the generalized eigenvector recurrence on a half-line.
    Transfer {
        #[arg(long)]
        operator: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = SideArg::Plus)]
        side: SideArg,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Generate { .. } => "generate",
            Command::Complexity { .. } => "complexity",
            Command::Spectrum { .. } => "spectrum",
            Command::Pseudospectrum { .. } => "pseudospectrum",
            Command::Compare { .. } => "compare",
            Command::Minimality { .. } => "minimality",
            Command::Halfline { .. } => "halfline",
            Command::Transfer { .. } => "transfer",
        }
    }
}

/// A failure reported as one line of JSON on standard error.
#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
    pub position: Option<usize>,
}

impl CliError {
    pub fn new(kind: &'static str, message: impl Into<String>, position: Option<usize>) -> Self {
        CliError {
            kind,
            message: message.into(),
            position,
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        CliError {
            kind: "usage",
            message: message.into(),
            position: None,
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        CliError {
            kind: "io",
            message: format!("{}: {e}", path.display()),
            position: None,
        }
    }

    pub fn to_json_line(&self) -> String {
        let mut v = json!({ "error": self.kind, "message": self.message });
        if let Some(p) = self.position {
            v["position"] = json!(p);
        }
        v.to_string()
    }
}

impl From<limop::Error> for CliError {
    fn from(e: limop::Error) -> Self {
        let position = match &e {
            limop::Error::Parse { position, .. } => Some(*position),
            _ => None,
        };
        CliError {
            kind: if position.is_some() { "parse" } else { "invalid-input" },
            message: e.to_string(),
            position,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Encoded payload and the process exit code.
#[derive(Debug)]
pub struct Outcome {
    pub payload: String,
    pub exit_code: i32,
}

/// Runs a parsed command, writes the payload and metadata, and returns the exit code.
pub fn execute(cli: &Cli) -> CliResult<i32> {
    let threads = cli.global.threads.unwrap_or_else(|| {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    });
    if threads == 0 {
        return Err(CliError::usage("--threads must be positive"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::usage(e.to_string()))?;
    let outcome = pool.install(|| run(&cli.global, &cli.command))?;
    match &cli.global.out {
        Some(path) => {
            std::fs::write(path, &outcome.payload).map_err(|e| CliError::io(path, e))?;
            let meta = metadata(cli, threads);
            let meta_path = meta_path(path);
            std::fs::write(&meta_path, meta).map_err(|e| CliError::io(&meta_path, e))?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(outcome.payload.as_bytes())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
        }
    }
    Ok(outcome.exit_code)
}

pub fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn metadata(cli: &Cli, threads: usize) -> String {
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let g = &cli.global;
    let v = json!({
        "command": cli.command.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "threads": threads,
        "timestamp": timestamp,
        "format": g.format,
        "n": g.n,
        "window": g.window,
        "eps": g.eps,
        "seed": g.seed,
    });
    let mut s = serde_json::to_string_pretty(&v).unwrap_or_default();
    s.push('\n');
    s
}

/// Executes a command on the current rayon pool and encodes its payload.
pub fn run(g: &Global, cmd: &Command) -> CliResult<Outcome> {
    let done = |payload: String| Ok(Outcome { payload, exit_code: 0 });
    match cmd {
        Command::Generate { potential, range } => {
            let seq = lang::parse_potential_seeded(potential, g.seed)?;
            let range = lang::parse_range(range)?;
            let values = seq.window(range.lo, range.hi);
            match g.format {
                Format::Json => done(encode_json(&json!({
                    "potential": potential,
                    "range": range,
                    "values": values.iter().map(|z| scalar_value(*z)).collect::<Vec<_>>(),
                }))),
                Format::Csv => {
                    let mut s = String::from("n,re,im\n");
                    for (k, z) in range.iter().zip(&values) {
                        s.push_str(&format!("{k},{},{}\n", format_real(z.re), format_real(z.im)));
                    }
                    done(s)
                }
            }
        }
        Command::Complexity { potential, max_n } => {
            let seq = lang::parse_potential_seeded(potential, g.seed)?;
            let view = WindowView::new(seq.clone(), Interval::centered(g.window)?);
            let profile = words::complexity_profile(&view, *max_n)?;
            let alphabet_size = seq.alphabet().map(|a| a.len()).unwrap_or(0);
            let classification = words::classify(&profile, alphabet_size);
            // a plateau at count q forces a period q' <= q
            let period = profile
                .plateau()
                .and_then(|n| words::verify_period(&view, profile.count(n)));
            match g.format {
                Format::Json => done(encode_json(&json!({
                    "potential": potential,
                    "profile": profile,
                    "classification": classification,
                    "plateau": profile.plateau().map(|n| profile.count(n)),
                    "plateauLength": profile.plateau(),
                    "verifiedPeriod": period,
                }))),
                Format::Csv => {
                    let mut s = String::from("n,count,saturated\n");
                    for r in profile.rows() {
                        s.push_str(&format!("{},{},{}\n", r.n, r.count, r.saturated));
                    }
                    done(s)
                }
            }
        }
        Command::Spectrum { operator, grid } => {
            let op = lang::parse_operator_seeded(operator, g.seed)?;
            let grid = lang::parse_grid(grid)?;
            let window = Interval::centered(g.window)?;
            let values = sweep(&op, &grid.points(), g.n, window)?;
            let payload = match g.format {
                Format::Json => encode_json(&json!({
                    "operator": operator,
                    "n": g.n,
                    "window": window,
                    "grid": grid_json(&grid),
                    "points": grid.points().iter().map(|z| scalar_value(*z)).collect::<Vec<_>>(),
                    "gamma": values,
                })),
                Format::Csv => grid_csv(&grid.points(), &[("gamma", &values)]),
            };
            done(payload)
        }
        Command::Pseudospectrum { operator, grid, epsilons } => {
            let op = lang::parse_operator_seeded(operator, g.seed)?;
            let grid = lang::parse_grid(grid)?;
            let eps = lang::parse_epsilons(epsilons)?;
            let window = Interval::centered(g.window)?;
            let points = grid.points();
            let values = sweep(&op, &points, g.n, window)?;
            let masks: Vec<LevelSetMask> = eps.iter().map(|&e| LevelSetMask::from_values(&values, e)).collect();
            let payload = match g.format {
                Format::Json => encode_json(&json!({
                    "operator": operator,
                    "n": g.n,
                    "window": window,
                    "grid": grid_json(&grid),
                    "gamma": values,
                    "masks": masks,
                })),
                Format::Csv => {
                    let mut s = String::from("re,im,gamma");
                    for e in &eps {
                        s.push_str(&format!(",below_{}", format_real(*e)));
                    }
                    s.push('\n');
                    let expanded: Vec<Vec<bool>> = masks.iter().map(|m| m.expand()).collect();
                    for (i, (p, v)) in points.iter().zip(&values).enumerate() {
                        s.push_str(&format!("{},{},{}", format_real(p.re), format_real(p.im), format_real(*v)));
                        for m in &expanded {
                            s.push_str(if m[i] { ",1" } else { ",0" });
                        }
                        s.push('\n');
                    }
                    s
                }
            };
            done(payload)
        }
        Command::Compare { b, c, grid, c_range } => {
            let sb = lang::parse_potential_seeded(b, g.seed)?;
            let sc = lang::parse_potential_seeded(c, g.seed)?;
            let grid = lang::parse_grid(grid)?;
            let wb = Interval::centered(g.window)?;
            let wc = match c_range {
                Some(r) => lang::parse_range(r)?,
                None => wb,
            };
            let report = compare(&sb, &sc, g.n, wb, wc, &grid.points(), g.eps)?;
            let payload = match g.format {
                Format::Json => {
                    let mut v = serde_json::to_value(&report).map_err(|e| CliError::usage(e.to_string()))?;
                    v["b"] = json!(b);
                    v["c"] = json!(c);
                    v["grid"] = grid_json(&grid);
                    encode_json(&v)
                }
                Format::Csv => grid_csv(&grid.points(), &[("gamma_b", &report.gamma_b), ("gamma_c", &report.gamma_c)]),
            };
            done(payload)
        }
        Command::Minimality { members } => {
            let family = members
                .iter()
                .map(|m| lang::parse_potential_seeded(m, g.seed))
                .collect::<limop::Result<Vec<_>>>()?;
            let cert = minimality(&family, g.n, g.window, g.eps)?;
            let exit_code = cert.verdict.exit_code();
            let payload = match g.format {
                Format::Json => encode_json(&json!({ "family": members, "certificate": cert })),
                Format::Csv => {
                    let mut s = String::from("i,j,verdict\n");
                    let size = family.len();
                    if let Some(rows) = cert.evidence["matrix"].as_array() {
                        for (i, row) in rows.iter().enumerate().take(size) {
                            for (j, v) in row.as_array().into_iter().flatten().enumerate() {
                                s.push_str(&format!("{i},{j},{}\n", v.as_str().unwrap_or("")));
                            }
                        }
                    }
                    s
                }
            };
            Ok(Outcome { payload, exit_code })
        }
        Command::Halfline { operator, size, grid, side } => {
            let op = lang::parse_operator_seeded(operator, g.seed)?;
            let grid = lang::parse_real_grid(grid)?;
            let h = HalfLineOperator::new(op, (*side).into());
            let report = spectra::half_line_finite_section(&h, *size, grid, Interval::centered(g.window)?)?;
            let payload = match g.format {
                Format::Json => {
                    let mut v = serde_json::to_value(&report).map_err(|e| CliError::usage(e.to_string()))?;
                    v["operator"] = json!(operator);
                    v["maxPerBoundedGap"] = json!(report.max_per_bounded_gap());
                    encode_json(&v)
                }
                Format::Csv => {
                    let mut s = String::from("eigenvalue,in_gap,ambiguous\n");
                    for ((e, g), a) in report.eigenvalues.iter().zip(&report.in_gap).zip(&report.ambiguous) {
                        s.push_str(&format!("{},{},{}\n", format_real(*e), *g as u8, *a as u8));
                    }
                    s
                }
            };
            done(payload)
        }
        Command::Transfer { operator, lambda, steps, side } => {
            let op = lang::parse_operator_seeded(operator, g.seed)?;
            let h = HalfLineOperator::new(op, (*side).into());
            let report = spectra::transfer_matrix_boundedness(&h, *lambda, *steps)?;
            let payload = match g.format {
                Format::Json => {
                    let mut v = serde_json::to_value(&report).map_err(|e| CliError::usage(e.to_string()))?;
                    v["operator"] = json!(operator);
                    encode_json(&v)
                }
                Format::Csv => {
                    let mut s = String::from("n,log_abs\n");
                    for p in &report.solution_norm_profile {
                        s.push_str(&format!("{},{}\n", p.n, format_real(p.log_abs)));
                    }
                    s
                }
            };
            done(payload)
        }
    }
}

/// `gamma_n` at each point, evaluated on the current pool in grid order.
pub fn sweep(op: &BandOperator, points: &[Complex64], n: usize, window: Interval) -> limop::Result<Vec<f64>> {
    let eval = GammaEvaluator::new(op, n, window)?;
    Ok(points.par_iter().map(|&l| eval.gamma(l)).collect())
}

/// Minimality certificate with the ordered pairs evaluated on the current pool.
pub fn minimality(family: &[Sequence], n: usize, window: u64, eps: Option<f64>) -> limop::Result<Certificate> {
    if family.is_empty() {
        return limits::minimality_report(family, n, window, eps);
    }
    let pairs = limits::minimality_pairs(family.len());
    let certs = pairs
        .par_iter()
        .map(|&(i, j)| limits::limit_operator_evidence(&family[i], &family[j], n, window, eps))
        .collect::<limop::Result<Vec<_>>>()?;
    let scale = certs[0].scale.clone();
    limits::minimality_from_pairs(family.len(), scale, &certs)
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CompareReport {
    pub n: usize,
    pub word_len: usize,
    pub window_b: Interval,
    pub window_c: Interval,
    pub words_b: usize,
    /// Words of `b` of length `n + 2` with no occurrence in `c`'s window.
    pub missing: Vec<words::Word>,
    pub inclusion: bool,
    pub nu_b: f64,
    pub nu_c: f64,
    pub nu_inequality: bool,
    pub gamma_b: Vec<f64>,
    pub gamma_c: Vec<f64>,
    /// Grid points where `gamma_b < gamma_c`; only meaningful when `inclusion` holds.
    pub gamma_violations: usize,
}

/// Subword inclusion at length `n + 2` (the column patterns of an `(n+2) x n`
/// section of a Schroedinger operator) and the implied lower-norm ordering.
pub fn compare(
    b: &Sequence,
    c: &Sequence,
    n: usize,
    window_b: Interval,
    window_c: Interval,
    points: &[Complex64],
    eps: Option<f64>,
) -> limop::Result<CompareReport> {
    let word_len = n + 2;
    let wb = WindowView::new(b.clone(), window_b);
    let wc = WindowView::new(c.clone(), window_c);
    let words_b = words::subword_set(&wb, word_len)?;
    let missing: Vec<words::Word> = match eps {
        None => {
            let words_c = words::subword_set(&wc, word_len)?;
            words_b
                .iter()
                .filter(|w| words_c.binary_search_by(|x| x.cmp_lex(w)).is_err())
                .cloned()
                .collect()
        }
        Some(e) => {
            let mut out = Vec::new();
            for w in &words_b {
                if words::positions_eps(w, &wc, e)?.is_empty() {
                    out.push(w.clone());
                }
            }
            out
        }
    };
    let ab = BandOperator::schroedinger(b.clone());
    let ac = BandOperator::schroedinger(c.clone());
    let eb = GammaEvaluator::new(&ab, n, window_b)?;
    let ec = GammaEvaluator::new(&ac, n, window_c)?;
    let zero = Complex64::new(0.0, 0.0);
    let nu_b = eb.lower_norm(zero)?.value;
    let nu_c = ec.lower_norm(zero)?.value;
    let gamma_b: Vec<f64> = points.par_iter().map(|&l| eb.gamma(l)).collect();
    let gamma_c: Vec<f64> = points.par_iter().map(|&l| ec.gamma(l)).collect();
    let gamma_violations = gamma_b.iter().zip(&gamma_c).filter(|(x, y)| x < y).count();
    Ok(CompareReport {
        n,
        word_len,
        window_b,
        window_c,
        words_b: words_b.len(),
        inclusion: missing.is_empty(),
        missing,
        nu_b,
        nu_c,
        nu_inequality: nu_b >= nu_c,
        gamma_b,
        gamma_c,
        gamma_violations,
    })
}

fn scalar_value(z: Complex64) -> Value {
    if z.im == 0.0 {
        json!(z.re)
    } else {
        json!([z.re, z.im])
    }
}

fn grid_json(g: &GridSpec) -> Value {
    json!({ "re": g.re, "im": g.im })
}

fn grid_csv(points: &[Complex64], columns: &[(&str, &[f64])]) -> String {
    let mut s = String::from("re,im");
    for (name, _) in columns {
        s.push(',');
        s.push_str(name);
    }
    s.push('\n');
    for (i, p) in points.iter().enumerate() {
        s.push_str(&format!("{},{}", format_real(p.re), format_real(p.im)));
        for (_, col) in columns {
            s.push(',');
            s.push_str(&format_real(col[i]));
        }
        s.push('\n');
    }
    s
}

/// Serializes `payload` as JSON with every float printed to 17 significant digits.
pub fn encode_json<T: Serialize>(payload: &T) -> String {
    let v = serde_json::to_value(payload).expect("payload serializes");
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &Value, depth: usize, out: &mut String) {
    let indent = |d: usize, out: &mut String| {
        out.push('\n');
        out.push_str(&"  ".repeat(d));
    };
    match v {
        Value::Number(x) if x.is_f64() => out.push_str(&format_real(x.as_f64().unwrap_or(f64::NAN))),
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(x, depth + 1, out);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                indent(depth + 1, out);
                write_value(x, depth + 1, out);
            }
            indent(depth, out);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push('{');
            for (i, (k, x)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                indent(depth + 1, out);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(x, depth + 1, out);
            }
            indent(depth, out);
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        let s = encode_json(&json!({ "x": 0.1, "k": 3, "v": [1.0, 2.5] }));
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        assert!(s.contains("\"k\": 3"));
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["x"].as_f64(), Some(0.1));
        assert_eq!(back["v"][1].as_f64(), Some(2.5));
    }

    #[test]
    fn meta_path_appends_suffix() {
        assert_eq!(meta_path(Path::new("/tmp/a.json")), PathBuf::from("/tmp/a.json.meta.json"));
    }

    #[test]
    fn compare_identical_sequences() {
        let b = lang::parse_potential("periodic:[0,1]").unwrap();
        let w = Interval::centered(200).unwrap();
        let pts = [Complex64::new(0.5, 0.0), Complex64::new(3.0, 0.0)];
        let r = compare(&b, &b, 4, w, w, &pts, None).unwrap();
        assert!(r.inclusion && r.nu_inequality);
        assert_eq!(r.gamma_b, r.gamma_c);
        assert_eq!(r.gamma_violations, 0);
    }
}
