//! Command-line front end: argument parsing, orchestration and CSV/JSON output.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::charpoly::{coeffs_direct, coeffs_newton, coeffs_pseudo_orbit};
use crate::error::Error;
use crate::graph::file::load_graph;
use crate::graph::MetricGraph;
use crate::orbits::enumerate_irreducible_pseudo_orbits;
use crate::quadrature::QuadratureConfig;
use crate::scattering::bond_scattering_matrix;
use crate::secular::SecularExpansion;
use crate::spectrum::{find_spectrum, DEFAULT_OVERSAMPLE};
use crate::statistics::{variance_diagonal, variance_numeric, variance_pair, variance_rmt, VarianceMethod};
use crate::verify::verify_graph;
use crate::zeta::{
    casimir_force, spectral_determinant_integral, spectral_determinant_orbits, vacuum_energy, vacuum_energy_matrix,
    ScalarReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Representation {
    Orbit,
    Integral,
    Both,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "qgraph", version, about = "Spectral quantities of Neumann quantum graphs")]
pub struct RunConfig {
    /// Graph description (JSON).
    #[arg(long, global = true)]
    pub graph: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Roots of the secular function on (0, kmax].
    Spectrum {
        #[arg(long)]
        kmax: f64,
        #[arg(long, default_value_t = DEFAULT_OVERSAMPLE)]
        oversample: usize,
    },
    /// Characteristic-polynomial coefficients at one k.
    Coeffs {
        #[arg(long)]
        k: f64,
    },
    /// Variance of the coefficients by every method.
    Variance(VarianceArgs),
    /// Spectral determinant on a λ grid.
    Specdet {
        /// a:b:n, n points from a to b inclusive.
        #[arg(long)]
        lambda_grid: String,
        #[arg(long, value_enum, default_value = "both")]
        method: Representation,
    },
    /// Vacuum energy, optionally with the Casimir force on one bond.
    Vacuum {
        /// Bond index or "u-v" label pair.
        #[arg(long)]
        force: Option<String>,
        #[arg(long, value_enum, default_value = "orbit")]
        method: Representation,
    },
    /// Irreducible pseudo orbits up to a total length.
    Orbits {
        /// Defaults to B.
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Oracle-equivalence suite.
    Verify {
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Entries of S, or of U(k) when k is given.
    Matrix {
        #[arg(long)]
        k: Option<f64>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct VarianceArgs {
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
    /// Defaults to 2000 mean level spacings, 2000π/ℒ.
    #[arg(long)]
    pub kmax: Option<f64>,
    /// Comma-separated subset of numeric,pair,diagonal,coe,cue, or "all".
    #[arg(long, default_value = "all")]
    pub methods: String,
    /// Group pseudo orbits by metric length instead of bond-visit profile.
    #[arg(long)]
    pub commensurate: bool,
}

enum CellValue {
    Int(i64),
    Float(f64),
    Text(String),
}

impl CellValue {
    fn csv(&self) -> String {
        match self {
            CellValue::Int(i) => i.to_string(),
            CellValue::Float(x) => format!("{x:e}"),
            CellValue::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            CellValue::Int(i) => json!(i),
            CellValue::Float(x) if x.is_finite() => json!(x),
            CellValue::Float(x) => json!(x.to_string()),
            CellValue::Text(s) => json!(s),
        }
    }
}

impl From<f64> for CellValue {
    fn from(x: f64) -> Self {
        CellValue::Float(x)
    }
}

impl From<usize> for CellValue {
    fn from(x: usize) -> Self {
        CellValue::Int(x as i64)
    }
}

impl From<&str> for CellValue {
    fn from(x: &str) -> Self {
        CellValue::Text(x.to_string())
    }
}

impl From<String> for CellValue {
    fn from(x: String) -> Self {
        CellValue::Text(x)
    }
}

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<CellValue>>,
    notes: Vec<String>,
}

impl Table {
    fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn render(&self, format: Format, echo: &[(String, String)]) -> String {
        match format {
            Format::Csv => {
                let mut out = String::from("# qgraph v1");
                for (k, v) in echo {
                    out.push_str(&format!(" {k}={v}"));
                }
                out.push('\n');
                for n in &self.notes {
                    out.push_str(&format!("# warning: {n}\n"));
                }
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for r in &self.rows {
                    out.push_str(&r.iter().map(CellValue::csv).collect::<Vec<_>>().join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let config: serde_json::Map<String, Value> =
                    echo.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let obj: serde_json::Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(r)
                            .map(|(c, v)| (c.to_string(), v.json()))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let doc = json!({
                    "qgraph": "v1",
                    "config": config,
                    "warnings": self.notes,
                    "rows": rows,
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
                s.push('\n');
                s
            }
        }
    }
}

/// Outcome of one command before it is written out.
struct Outcome {
    text: String,
    code: i32,
    stderr: Vec<String>,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Loop(..)
        | Error::MultiEdge(..)
        | Error::NonPositiveLength { .. }
        | Error::Disconnected
        | Error::UnknownVertex(..)
        | Error::DuplicateVertex(..)
        | Error::Empty
        | Error::LengthMode(..)
        | Error::BondIndex { .. }
        | Error::Fraction(..)
        | Error::TooManyArcs(..)
        | Error::NonPositiveLambda(..)
        | Error::ZeroModeRegime(..)
        | Error::ZetaStrip(..)
        | Error::NonPositiveKmax(..)
        | Error::Json(..)
        | Error::Io(..) => EXIT_USAGE,
        _ => EXIT_NUMERIC,
    }
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("lambda grid must be a:b:n, got {spec:?}"));
    }
    let a: f64 = parts[0].parse().map_err(|_| format!("bad grid start {:?}", parts[0]))?;
    let b: f64 = parts[1].parse().map_err(|_| format!("bad grid end {:?}", parts[1]))?;
    let n: usize = parts[2].parse().map_err(|_| format!("bad grid count {:?}", parts[2]))?;
    if n == 0 {
        return Err("lambda grid needs at least one point".into());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
}

fn parse_bond(g: &MetricGraph, spec: &str) -> Result<usize, String> {
    if let Ok(i) = spec.parse::<usize>() {
        if i < g.bond_count() {
            return Ok(i);
        }
        return Err(format!("bond index {i} out of range (graph has {} bonds)", g.bond_count()));
    }
    if let Some((u, v)) = spec.split_once('-') {
        for b in 0..g.bond_count() {
            let (x, y) = g.bond_labels(b);
            if (x == u && y == v) || (x == v && y == u) {
                return Ok(b);
            }
        }
    }
    Err(format!("no bond {spec:?}; use an index or u-v"))
}

fn fmt_num(x: f64) -> String {
    format!("{x}")
}

fn scalar_row(t: &mut Table, r: &ScalarReport) {
    let q = r.quadrature.as_ref();
    t.rows.push(vec![
        r.quantity.tag().into(),
        r.value.into(),
        r.method.tag().into(),
        r.error_estimate().into(),
        q.map_or(0.0, |q| q.tail_cutoff).into(),
        q.map_or(0, |q| q.panels).into(),
    ]);
    t.notes.extend(r.warnings.iter().cloned());
}

fn execute(cfg: &RunConfig) -> Result<Outcome, (i32, String)> {
    let usage = |m: String| (EXIT_USAGE, m);
    let fail = |e: Error| (exit_code(&e), e.to_string());
    let path = cfg
        .graph
        .as_ref()
        .ok_or_else(|| usage("--graph is required".into()))?;
    let g = load_graph(path).map_err(fail)?;
    let op = bond_scattering_matrix(&g);
    let mut echo: Vec<(String, String)> = vec![
        ("command".into(), command_name(&cfg.command).into()),
        ("graph".into(), path.display().to_string()),
        ("seed".into(), cfg.seed.to_string()),
    ];
    let quad = QuadratureConfig::default();
    let mut code = EXIT_OK;
    let mut stderr = Vec::new();

    let table = match &cfg.command {
        Command::Spectrum { kmax, oversample } => {
            echo.push(("kmax".into(), fmt_num(*kmax)));
            echo.push(("oversample".into(), oversample.to_string()));
            let ex = SecularExpansion::from_operator(&op).map_err(fail)?;
            let s = find_spectrum(&ex, &op, *kmax, *oversample).map_err(fail)?;
            echo.push(("kernel_dim_at_zero".into(), s.kernel_dim_at_zero.to_string()));
            echo.push(("theta".into(), fmt_num(s.theta)));
            let mut t = Table::new(vec!["index", "k", "multiplicity", "residual", "min_singular"]);
            for (i, r) in s.roots.iter().enumerate() {
                t.rows.push(vec![
                    (i + 1).into(),
                    r.k.into(),
                    r.multiplicity.into(),
                    r.residual.into(),
                    r.min_singular.into(),
                ]);
            }
            t.notes = s.warnings.clone();
            stderr.extend(s.warnings);
            t
        }
        Command::Coeffs { k } => {
            echo.push(("k".into(), fmt_num(*k)));
            let z = Complex64::new(*k, 0.0);
            let set = enumerate_irreducible_pseudo_orbits(&g, op.dim()).map_err(fail)?;
            let orbit = coeffs_pseudo_orbit(&set, &op, z).map_err(fail)?;
            let direct = coeffs_direct(&op, z).map_err(fail)?;
            let newton = coeffs_newton(&op, z);
            let mut t = Table::new(vec![
                "n", "orbit_re", "orbit_im", "direct_re", "direct_im", "newton_re", "newton_im",
            ]);
            for n in 0..=op.dim() {
                t.rows.push(vec![
                    n.into(),
                    orbit.a[n].re.into(),
                    orbit.a[n].im.into(),
                    direct.a[n].re.into(),
                    direct.a[n].im.into(),
                    newton.a[n].re.into(),
                    newton.a[n].im.into(),
                ]);
            }
            t
        }
        Command::Variance(v) => {
            let kmax = v.kmax.unwrap_or(2000.0 * std::f64::consts::PI / g.total_length());
            let wanted: Vec<&str> = if v.methods == "all" {
                vec!["numeric", "pair", "diagonal", "coe", "cue"]
            } else {
                v.methods.split(',').map(str::trim).collect()
            };
            for w in &wanted {
                if !["numeric", "pair", "diagonal", "coe", "cue"].contains(w) {
                    return Err(usage(format!("unknown variance method {w:?}")));
                }
            }
            echo.push(("samples".into(), v.samples.to_string()));
            echo.push(("kmax".into(), fmt_num(kmax)));
            echo.push(("methods".into(), wanted.join("+")));
            echo.push(("commensurate".into(), v.commensurate.to_string()));
            let n = op.dim() + 1;
            let nan = vec![f64::NAN; n];
            let (num, se) = if wanted.contains(&"numeric") {
                let c = variance_numeric(&op, v.samples, kmax, cfg.seed).map_err(fail)?;
                let se = c.std_err.clone().unwrap_or_else(|| nan.clone());
                (c.values, se)
            } else {
                (nan.clone(), nan.clone())
            };
            let need_set = wanted.contains(&"pair") || wanted.contains(&"diagonal");
            let set = if need_set {
                Some(enumerate_irreducible_pseudo_orbits(&g, op.dim()).map_err(fail)?)
            } else {
                None
            };
            let pair = match (&set, wanted.contains(&"pair")) {
                (Some(s), true) => variance_pair(s, &op, v.commensurate).map_err(fail)?.values,
                _ => nan.clone(),
            };
            let diag = match (&set, wanted.contains(&"diagonal")) {
                (Some(s), true) => variance_diagonal(s, &op).map_err(fail)?.values,
                _ => nan.clone(),
            };
            let coe = if wanted.contains(&"coe") {
                variance_rmt(g.bond_count(), VarianceMethod::RmtCoe).values
            } else {
                nan.clone()
            };
            let cue = if wanted.contains(&"cue") {
                variance_rmt(g.bond_count(), VarianceMethod::RmtCue).values
            } else {
                nan.clone()
            };
            let mut t = Table::new(vec!["n", "numeric", "se", "pair", "diagonal", "coe", "cue"]);
            for i in 0..n {
                t.rows.push(vec![
                    i.into(),
                    num[i].into(),
                    se[i].into(),
                    pair[i].into(),
                    diag[i].into(),
                    coe[i].into(),
                    cue[i].into(),
                ]);
            }
            t
        }
        Command::Specdet { lambda_grid, method } => {
            let grid = parse_grid(lambda_grid).map_err(usage)?;
            echo.push(("lambda_grid".into(), lambda_grid.clone()));
            echo.push(("method".into(), format!("{method:?}").to_lowercase()));
            let ex = if *method != Representation::Integral {
                Some(SecularExpansion::from_operator(&op).map_err(fail)?)
            } else {
                None
            };
            let mut t = Table::new(vec!["lambda", "orbit_sum", "integral_oracle", "rel_diff", "error_estimate"]);
            for &lambda in &grid {
                let a = match &ex {
                    Some(ex) => spectral_determinant_orbits(ex, lambda).map_err(fail)?.value,
                    None => f64::NAN,
                };
                let (b, err) = if *method != Representation::Orbit {
                    let r = spectral_determinant_integral(&op, lambda, &quad).map_err(fail)?;
                    t.notes.extend(r.warnings.iter().cloned());
                    (r.value, r.error_estimate())
                } else {
                    (f64::NAN, f64::NAN)
                };
                t.rows.push(vec![
                    lambda.into(),
                    a.into(),
                    b.into(),
                    ((a - b).abs() / b.abs()).into(),
                    err.into(),
                ]);
            }
            t
        }
        Command::Vacuum { force, method } => {
            echo.push(("method".into(), format!("{method:?}").to_lowercase()));
            let mut t = Table::new(vec!["quantity", "value", "method", "error_estimate", "tail_cutoff", "panels"]);
            if *method != Representation::Integral {
                let ex = SecularExpansion::from_operator(&op).map_err(fail)?;
                let r = vacuum_energy(&ex, &op, &quad).map_err(fail)?;
                stderr.extend(r.warnings.iter().cloned());
                scalar_row(&mut t, &r);
            }
            if *method != Representation::Orbit {
                let r = vacuum_energy_matrix(&op, &quad).map_err(fail)?;
                scalar_row(&mut t, &r);
            }
            if let Some(b) = force {
                let bond = parse_bond(&g, b).map_err(usage)?;
                let (u, v) = g.bond_labels(bond);
                echo.push(("force".into(), format!("{u}-{v}")));
                let r = casimir_force(&g, bond, &quad).map_err(fail)?;
                scalar_row(&mut t, &r);
            }
            t
        }
        Command::Orbits { max_len } => {
            let max_len = max_len.unwrap_or(g.bond_count());
            echo.push(("max_len".into(), max_len.to_string()));
            let set = enumerate_irreducible_pseudo_orbits(&g, max_len).map_err(fail)?;
            let amps = set.amplitudes(&op);
            let mut t = Table::new(vec!["index", "length", "orbits", "metric_length", "sign", "amplitude_re", "amplitude_im", "arcs"]);
            for (i, (p, a)) in set.pseudo.iter().zip(amps).enumerate() {
                t.rows.push(vec![
                    i.into(),
                    p.topological_length.into(),
                    p.orbit_count().into(),
                    p.metric_length.into(),
                    p.sign().into(),
                    a.re.into(),
                    a.im.into(),
                    set.arc_list(&g, p).into(),
                ]);
            }
            t
        }
        Command::Matrix { k } => {
            let m = match k {
                Some(k) => {
                    echo.push(("k".into(), fmt_num(*k)));
                    op.evolution_real(*k)
                }
                None => op.s().clone(),
            };
            let mut t = Table::new(vec!["row", "col", "to_arc", "from_arc", "re", "im"]);
            for r in 0..m.nrows() {
                for c in 0..m.ncols() {
                    let x = m[(r, c)];
                    t.rows.push(vec![
                        r.into(),
                        c.into(),
                        g.arc_name(r).into(),
                        g.arc_name(c).into(),
                        x.re.into(),
                        x.im.into(),
                    ]);
                }
            }
            t
        }
        Command::Verify { samples } => {
            let report = verify_graph(&g, cfg.seed, *samples).map_err(fail)?;
            if !report.passed() {
                code = EXIT_VERIFY;
                for f in report.failures() {
                    stderr.push(format!("verification failed: {f}"));
                }
            }
            return Ok(Outcome {
                text: report.render(),
                code,
                stderr,
            });
        }
    };
    echo.push(("format".into(), format!("{:?}", cfg.format).to_lowercase()));
    Ok(Outcome {
        text: table.render(cfg.format, &echo),
        code,
        stderr,
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Spectrum { .. } => "spectrum",
        Command::Coeffs { .. } => "coeffs",
        Command::Variance(_) => "variance",
        Command::Specdet { .. } => "specdet",
        Command::Vacuum { .. } => "vacuum",
        Command::Orbits { .. } => "orbits",
        Command::Verify { .. } => "verify",
        Command::Matrix { .. } => "matrix",
    }
}

/// Parse `args`, run the command and write its output. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
            } else {
                let _ = write!(stdout, "{text}");
            }
            return code;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.workers {
        if n == 0 {
            let _ = writeln!(stderr, "error: --workers must be at least 1");
            return EXIT_USAGE;
        }
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot start worker pool: {e}");
            return EXIT_NUMERIC;
        }
    };
    match pool.install(|| execute(&cfg)) {
        Ok(out) => {
            for m in &out.stderr {
                let _ = writeln!(stderr, "{m}");
            }
            let written = match &cfg.out {
                Some(p) => std::fs::write(p, &out.text),
                None => stdout.write_all(out.text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_USAGE;
            }
            out.code
        }
        Err((code, msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(name: &str) -> String {
        std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .join("../../data")
            .join(name)
            .display()
            .to_string()
    }

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("qgraph").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn spectrum_of_interval_lists_multiples_of_pi() {
        let g = data("interval.json");
        let (code, out, _) = call(&["spectrum", "--graph", &g, "--kmax", "50"]);
        assert_eq!(code, EXIT_OK);
        let mut lines = out.lines();
        assert!(lines.next().unwrap().starts_with("# qgraph v1 command=spectrum"));
        assert_eq!(lines.next().unwrap(), "index,k,multiplicity,residual,min_singular");
        let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
        assert_eq!(rows.len(), 15);
        for (n, r) in rows.iter().enumerate() {
            let k: f64 = r[1].parse().unwrap();
            assert!((k - (n + 1) as f64 * std::f64::consts::PI).abs() < 1e-9);
            assert_eq!(r[2], "1");
        }
    }

    #[test]
    fn json_output_parses() {
        let g = data("path.json");
        let (code, out, _) = call(&["specdet", "--graph", &g, "--lambda-grid", "1:3:3", "--format", "json"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["qgraph"], "v1");
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 3);
        for r in rows {
            assert!(r["rel_diff"].as_f64().unwrap() < 1e-12);
        }
    }

    #[test]
    fn vacuum_of_unit_interval() {
        let g = data("interval.json");
        let (code, out, _) = call(&["vacuum", "--graph", &g, "--method", "both"]);
        assert_eq!(code, EXIT_OK);
        let values: Vec<f64> = out
            .lines()
            .filter(|l| l.starts_with("vacuum,"))
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect();
        assert_eq!(values.len(), 2);
        for v in values {
            assert!((v + std::f64::consts::PI / 24.0).abs() < 1e-10);
        }
    }

    #[test]
    fn force_accepts_label_pair_and_index() {
        let g = data("interval.json");
        let (a, out_a, _) = call(&["vacuum", "--graph", &g, "--force", "b-a"]);
        let (b, out_b, _) = call(&["vacuum", "--graph", &g, "--force", "0"]);
        assert_eq!((a, b), (EXIT_OK, EXIT_OK));
        let force = |s: &str| s.lines().find(|l| l.starts_with("force,")).unwrap().to_string();
        assert_eq!(force(&out_a), force(&out_b));
        let (code, _, err) = call(&["vacuum", "--graph", &g, "--force", "x-y"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("no bond"));
    }

    #[test]
    fn out_file_matches_stdout() {
        let g = data("k4.json");
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        let p = path.display().to_string();
        let (code, out, _) = call(&["matrix", "--graph", &g, "--k", "1.5"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(call(&["matrix", "--graph", &g, "--k", "1.5", "--out", &p]).0, EXIT_OK);
        assert_eq!(std::fs::read_to_string(&path).unwrap(), out);
        // header + column line + 12x12 entries
        assert_eq!(out.lines().count(), 2 + 144);
    }

    #[test]
    fn variance_header_and_columns() {
        let g = data("k4.json");
        let (code, out, _) = call(&["variance", "--graph", &g, "--samples", "200", "--methods", "pair,coe"]);
        assert_eq!(code, EXIT_OK);
        let lines: Vec<&str> = out.lines().collect();
        assert!(lines[0].contains("methods=pair+coe"));
        assert_eq!(lines[1], "n,numeric,se,pair,diagonal,coe,cue");
        assert_eq!(lines.len(), 2 + 13);
        let row6: Vec<&str> = lines[2 + 6].split(',').collect();
        assert_eq!(row6[1], "NaN");
        assert!((row6[5].parse::<f64>().unwrap() - (1.0 + 36.0 / 13.0)).abs() < 1e-12);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["spectrum", "--kmax", "5"]).0, EXIT_USAGE);
        assert_eq!(call(&["bogus"]).0, EXIT_USAGE);
        let g = data("path.json");
        assert_eq!(call(&["spectrum", "--graph", &g]).0, EXIT_USAGE);
        assert_eq!(call(&["spectrum", "--graph", &g, "--kmax", "-1"]).0, EXIT_USAGE);
        assert_eq!(call(&["specdet", "--graph", &g, "--lambda-grid", "1:2"]).0, EXIT_USAGE);
        assert_eq!(call(&["specdet", "--graph", &g, "--lambda-grid", "-1:2:3"]).0, EXIT_USAGE);
        assert_eq!(call(&["variance", "--graph", &g, "--methods", "goe"]).0, EXIT_USAGE);
        assert_eq!(call(&["matrix", "--graph", "/nonexistent.json"]).0, EXIT_USAGE);
        assert_eq!(call(&["matrix", "--graph", &g, "--workers", "0"]).0, EXIT_USAGE);
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("verify"));
    }

    #[test]
    fn exit_codes_are_distinct() {
        let codes = [EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_NUMERIC];
        assert_eq!(codes, [0, 1, 2, 3]);
    }

    #[test]
    fn verify_passes_on_all_test_graphs() {
        for name in ["path.json", "interval.json", "k4.json"] {
            let g = data(name);
            let (code, out, err) = call(&["verify", "--graph", &g, "--seed", "7", "--samples", "20"]);
            assert_eq!(code, EXIT_OK, "{name}: {out}{err}");
            assert!(out.ends_with("verify: 11/11 checks passed (20 samples, seed 7)\n"));
        }
    }

    #[test]
    fn output_independent_of_workers() {
        let g = data("k4.json");
        let a = call(&["variance", "--graph", &g, "--samples", "500", "--workers", "1"]);
        let b = call(&["variance", "--graph", &g, "--samples", "500", "--workers", "3"]);
        assert_eq!(a, b);
        let a = call(&["spectrum", "--graph", &g, "--kmax", "40", "--workers", "1"]);
        let b = call(&["spectrum", "--graph", &g, "--kmax", "40", "--workers", "5"]);
        assert_eq!(a, b);
    }
}
