//! Subcommand execution. Ray indices are 1-based here and 0-based in the
//! library.

use std::path::PathBuf;

use serde::Serialize;
use serde_json::json;
use slabcy_core::geom::{default_grading, validate_grading, wall_curve_classes};
use slabcy_core::mirror::{g_series, mirror_map, MirrorData};
use slabcy_core::slab::{assemble, solve_normalized, SlabFunction};
use slabcy_core::verify::{full_suite, SuiteReport};
use slabcy_core::{build_fan, FanData, Grading, QSeries};
use thiserror::Error;

use crate::cache::{Cache, Entry};
use crate::input::{parse_text, InputError};
use crate::render::{
    complex_names, kahler_names, list, ratio, series_json, series_text, slab_json, to_json,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

/// Which route computes the slab blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Order-by-order normalization solver.
    Gs,
    /// Hypergeometric series composed with the inverse mirror map.
    Omt,
    /// Both, with a coefficientwise diff.
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Request {
    Info,
    G { j: usize },
    MirrorMap { inverse: bool },
    Ogw { i: usize },
    Slab { j: usize, method: Method },
    Verify { bound: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub order: i64,
    pub grading: Option<Vec<i64>>,
    pub format: Format,
    pub request: Request,
    pub use_cache: bool,
}

/// Exit code and streams of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{0}")]
    Core(#[from] slabcy_core::Error),
    #[error("{what} {value} is out of range 1..={max}")]
    Index {
        what: &'static str,
        value: usize,
        max: usize,
    },
    #[error("order must be at least 1, got {0}")]
    Order(i64),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use slabcy_core::Error as E;
        match self {
            CliError::Core(E::Geom(_) | E::GradingNotPositive { .. }) => EXIT_INPUT,
            CliError::Core(_) => EXIT_FAILED,
            _ => EXIT_INPUT,
        }
    }
}

/// Runs one request, reading and filling the cache when enabled.
pub fn run(config: &RunConfig) -> Outcome {
    let bytes = match std::fs::read(&config.input) {
        Ok(b) => b,
        Err(source) => {
            let e = CliError::Input(InputError::Io {
                path: config.input.display().to_string(),
                source,
            });
            return failure(&e);
        }
    };
    let cache = config.use_cache.then(|| Cache::for_input(&config.input));
    let key = Cache::key(&bytes, &request_key(config));
    if let Some(hit) = cache.as_ref().and_then(|c| c.load(&key)) {
        return Outcome {
            code: hit.code,
            stdout: hit.stdout,
            stderr: String::new(),
        };
    }
    match execute(config, &bytes) {
        Ok((code, stdout)) => {
            if let Some(c) = &cache {
                c.store(
                    &key,
                    &Entry {
                        code,
                        stdout: stdout.clone(),
                    },
                );
            }
            Outcome {
                code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => failure(&e),
    }
}

fn failure(e: &CliError) -> Outcome {
    Outcome {
        code: e.exit_code(),
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    }
}

fn request_key(config: &RunConfig) -> String {
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "request": config.request,
        "order": config.order,
        "grading": config.grading,
        "format": config.format,
    })
    .to_string()
}

struct Context {
    fan: FanData,
    grading: Grading,
    order: i64,
    format: Format,
}

impl Context {
    fn ray(&self, what: &'static str, value: usize) -> Result<usize, CliError> {
        if value == 0 || value > self.fan.m() {
            return Err(CliError::Index {
                what,
                value,
                max: self.fan.m(),
            });
        }
        Ok(value - 1)
    }

    fn q(&self) -> Vec<String> {
        kahler_names(self.fan.rank(), self.fan.n())
    }

    fn q_check(&self) -> Vec<String> {
        complex_names(self.fan.rank(), self.fan.n())
    }
}

/// Parses the input, then dispatches. Returns the exit code and stdout.
pub fn execute(config: &RunConfig, bytes: &[u8]) -> Result<(i32, String), CliError> {
    if config.order < 1 {
        return Err(CliError::Order(config.order));
    }
    let text = String::from_utf8_lossy(bytes);
    let parsed = parse_text(&text)?;
    let fan = build_fan(&parsed.polytope).map_err(InputError::from)?;
    let grading = match config.grading.clone().or(parsed.grading) {
        Some(w) => {
            let g = Grading::new(w).map_err(InputError::from)?;
            validate_grading(&fan, &g).map_err(InputError::from)?;
            g
        }
        None => default_grading(&fan).map_err(InputError::from)?,
    };
    let cx = Context {
        fan,
        grading,
        order: config.order,
        format: config.format,
    };
    match config.request {
        Request::Info => info(&cx),
        Request::G { j } => g(&cx, cx.ray("ray", j)?),
        Request::MirrorMap { inverse } => mirror(&cx, inverse),
        Request::Ogw { i } => ogw(&cx, cx.ray("ray", i)?),
        Request::Slab { j, method } => slab(&cx, cx.ray("ray", j)?, method),
        Request::Verify { bound } => verify(&cx, bound),
    }
}

fn info(cx: &Context) -> Result<(i32, String), CliError> {
    let fan = &cx.fan;
    let walls: Vec<Vec<i64>> = wall_curve_classes(fan)
        .map_err(InputError::from)?
        .into_iter()
        .map(|c| c.0)
        .collect();
    if cx.format == Format::Json {
        let v = json!({
            "n": fan.n(),
            "m": fan.m(),
            "rays": fan.rays(),
            "input_points": fan.permutation(),
            "coordinates": fan.coords(),
            "curve_basis": fan.curve_basis(),
            "pairing": fan.pairing_table(),
            "grading": cx.grading.weights(),
            "walls": walls,
        });
        return Ok((EXIT_OK, to_json(&v)));
    }
    let mut out = format!("n = {}, m = {}\nrays (input point):\n", fan.n(), fan.m());
    for (i, ray) in fan.rays().iter().enumerate() {
        out += &format!(
            "  v_{} = {}  ({})\n",
            i + 1,
            list(ray),
            fan.permutation()[i]
        );
    }
    out += "coordinates in the base rays:\n";
    for (i, c) in fan.coords().iter().enumerate() {
        out += &format!("  v_{} = {}\n", i + 1, list(c));
    }
    out += "curve basis in basic disc coordinates:\n";
    for (k, beta) in fan.curve_basis().iter().enumerate() {
        out += &format!("  C_{} = {}\n", fan.n() + k + 1, list(beta));
    }
    out += "pairing D_p.C_i:\n";
    for (p, row) in fan.pairing_table().iter().enumerate() {
        out += &format!("  D_{} = {}\n", p + 1, list(row));
    }
    out += &format!("grading = {}\n", list(cx.grading.weights()));
    out += "wall classes:\n";
    for w in &walls {
        out += &format!("  {}\n", list(w));
    }
    Ok((EXIT_OK, out))
}

fn g(cx: &Context, j: usize) -> Result<(i32, String), CliError> {
    let s = g_series(&cx.fan, j, cx.order, &cx.grading)?;
    let out = match cx.format {
        Format::Json => to_json(&json!({ "j": j + 1, "series": series_json(&s) })),
        Format::Text => series_text(&format!("g_{}", j + 1), &s, &cx.q_check()),
    };
    Ok((EXIT_OK, out))
}

fn mirror(cx: &Context, inverse: bool) -> Result<(i32, String), CliError> {
    let map = mirror_map(&cx.fan, cx.order, &cx.grading)?;
    let (images, labels, names) = if inverse {
        (map.inverse(), cx.q_check(), cx.q())
    } else {
        (map.forward(), cx.q(), cx.q_check())
    };
    let out = match cx.format {
        Format::Json => {
            let vars: Vec<_> = labels
                .iter()
                .zip(&images)
                .map(|(l, s)| json!({ "name": l, "series": series_json(s) }))
                .collect();
            let direction = if inverse { "inverse" } else { "forward" };
            to_json(&json!({ "direction": direction, "variables": vars }))
        }
        Format::Text if images.is_empty() => "no Kähler parameters\n".into(),
        Format::Text => labels
            .iter()
            .zip(&images)
            .map(|(l, s)| series_text(l, s, &names))
            .collect(),
    };
    Ok((EXIT_OK, out))
}

fn ogw(cx: &Context, i: usize) -> Result<(i32, String), CliError> {
    let data = MirrorData::compute(&cx.fan, cx.order, &cx.grading)?;
    let s = data.ogw(i)?;
    let out = match cx.format {
        Format::Json => to_json(&json!({ "i": i + 1, "series": series_json(&s) })),
        Format::Text => series_text(&format!("1 + delta_{}", i + 1), &s, &cx.q()),
    };
    Ok((EXIT_OK, out))
}

fn gs_blocks(cx: &Context) -> Result<Vec<QSeries>, CliError> {
    Ok(solve_normalized(&cx.fan, cx.order, &cx.grading)?)
}

fn omt_blocks(cx: &Context) -> Result<Vec<QSeries>, CliError> {
    let data = MirrorData::compute(&cx.fan, cx.order, &cx.grading)?;
    Ok((0..cx.fan.m())
        .map(|i| data.ogw(i))
        .collect::<Result<Vec<_>, _>>()?)
}

/// One differing coefficient between the two routes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
struct Difference {
    block: usize,
    exponent: Vec<i64>,
    gs: String,
    omt: String,
}

fn differences(gs: &SlabFunction, omt: &SlabFunction) -> Vec<Difference> {
    let mut out = Vec::new();
    for (a, b) in gs.blocks.iter().zip(&omt.blocks) {
        let mut exponents: Vec<Vec<i64>> = a
            .series
            .iter()
            .chain(b.series.iter())
            .map(|(e, _)| e.clone())
            .collect();
        exponents.sort();
        exponents.dedup();
        for e in exponents {
            let x = a.series.coefficient(&e).expect("within order");
            let y = b.series.coefficient(&e).expect("within order");
            if x != y {
                out.push(Difference {
                    block: a.ray + 1,
                    exponent: e,
                    gs: ratio(&x),
                    omt: ratio(&y),
                });
            }
        }
    }
    out
}

fn slab_text(label: &str, f: &SlabFunction, names: &[String]) -> String {
    let mut out = format!("[{label}] f_{} = {}\n", f.j + 1, f.render());
    for b in &f.blocks {
        out += &series_text(&format!("A_{}", b.ray + 1), &b.series, names);
    }
    out
}

fn slab(cx: &Context, j: usize, method: Method) -> Result<(i32, String), CliError> {
    let build = |blocks: Vec<QSeries>| assemble(&cx.fan, j, &blocks, cx.order);
    let gs = matches!(method, Method::Gs | Method::Both)
        .then(|| gs_blocks(cx).and_then(|b| Ok(build(b)?)))
        .transpose()?;
    let omt = matches!(method, Method::Omt | Method::Both)
        .then(|| omt_blocks(cx).and_then(|b| Ok(build(b)?)))
        .transpose()?;
    let diff = match (&gs, &omt) {
        (Some(a), Some(b)) => Some(differences(a, b)),
        _ => None,
    };
    let code = match &diff {
        Some(d) if !d.is_empty() => EXIT_FAILED,
        _ => EXIT_OK,
    };
    let out = match cx.format {
        Format::Json => to_json(&json!({
            "j": j + 1,
            "order": cx.order,
            "gs": gs.as_ref().map(slab_json),
            "omt": omt.as_ref().map(slab_json),
            "diff": diff,
        })),
        Format::Text => {
            let names = cx.q();
            let mut out = String::new();
            if let Some(f) = &gs {
                out += &slab_text("gs", f, &names);
            }
            if let Some(f) = &omt {
                out += &slab_text("omt", f, &names);
            }
            match &diff {
                Some(d) if d.is_empty() => out += "diff: none\n",
                Some(d) => {
                    out += &format!("diff: {} coefficients\n", d.len());
                    for x in d {
                        out += &format!(
                            "  A_{} q^{}: gs {}, omt {}\n",
                            x.block,
                            list(&x.exponent),
                            x.gs,
                            x.omt
                        );
                    }
                }
                None => {}
            }
            out
        }
    };
    Ok((code, out))
}

fn verify(cx: &Context, bound: i64) -> Result<(i32, String), CliError> {
    let report: SuiteReport = full_suite(&cx.fan, cx.order, &cx.grading, bound)?;
    let code = if report.passed() {
        EXIT_OK
    } else {
        EXIT_FAILED
    };
    let out = match cx.format {
        Format::Json => to_json(&json!({ "passed": report.passed(), "report": report })),
        Format::Text => {
            let mut out = String::new();
            for c in &report.checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                out += &format!(
                    "{status} {} [{}] ({} compared)",
                    c.check, c.subject, c.compared
                );
                if let Some(m) = &c.first_failure {
                    out += &format!(
                        ": at {} expected {}, got {}",
                        m.location, m.expected, m.actual
                    );
                }
                out.push('\n');
            }
            let failed = report.checks.iter().filter(|c| !c.passed).count();
            if failed == 0 {
                out += &format!(
                    "all {} checks passed at order {}\n",
                    report.checks.len(),
                    cx.order
                );
            } else {
                out += &format!("{failed} of {} checks failed\n", report.checks.len());
            }
            out
        }
    };
    Ok((code, out))
}
