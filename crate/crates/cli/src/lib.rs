//! Command-line front end: resolves a [`RunConfig`], runs one command and
//! renders a versioned report.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

use minkconst::bisector::{classify_pair, inner_bisector, inner_projection, trace_bisector};
use minkconst::constants::{
    estimate_cb, estimate_cs, estimate_d, inner_product_test, search_cb_lower, Parallelism,
    PolygonFamily, SearchConfig, MAX_RESOLUTION, MIN_RESOLUTION,
};
use minkconst::ortho::{birkhoff_test, isosceles_test, roberts_test, sine};
use minkconst::{Error as CoreError, NormSpec, Point, Tolerances};

pub mod figure;

use figure::FigureKind;

pub const SCHEMA: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    NonConvergence(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::NonConvergence(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NonConvergence(_) => CliError::NonConvergence(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    RandomHull,
    LinearSquares,
}

/// Orthogonality types, bisectors and geometric constants of normed planes.
#[derive(Debug, Parser)]
#[command(name = "minkconst", version)]
pub struct Cli {
    /// Norm: euclidean, square, hexagon, octagon, regular:K, lp:P,
    /// polygon:PATH or sampled:PATH.
    #[arg(long, global = true, default_value = "euclidean")]
    pub norm: String,
    /// Direction-grid size.
    #[arg(long, global = true, default_value_t = 256)]
    pub resolution: usize,
    /// Samples per inner bisector.
    #[arg(long, global = true, default_value_t = 128)]
    pub inner_resolution: usize,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: OutputFormat,
    /// Also write a figure of the result to this path.
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    /// Single worker; reports and figures are byte-identical across runs.
    #[arg(long, global = true)]
    pub deterministic: bool,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ToleranceArgs {
    #[arg(long, global = true)]
    pub tol_dir: Option<f64>,
    #[arg(long, global = true)]
    pub tol_norm: Option<f64>,
    #[arg(long, global = true)]
    pub tol_orth: Option<f64>,
    #[arg(long, global = true)]
    pub tol_opt: Option<f64>,
    #[arg(long, global = true)]
    pub tol_bis: Option<f64>,
    #[arg(long, global = true)]
    pub tol_const: Option<f64>,
    #[arg(long, global = true)]
    pub n_roberts: Option<usize>,
    #[arg(long, global = true)]
    pub n_fan: Option<usize>,
}

impl ToleranceArgs {
    fn resolve(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            tol_dir: self.tol_dir.unwrap_or(d.tol_dir),
            tol_norm: self.tol_norm.unwrap_or(d.tol_norm),
            tol_orth: self.tol_orth.unwrap_or(d.tol_orth),
            tol_opt: self.tol_opt.unwrap_or(d.tol_opt),
            tol_bis: self.tol_bis.unwrap_or(d.tol_bis),
            tol_const: self.tol_const.unwrap_or(d.tol_const),
            n_roberts: self.n_roberts.unwrap_or(d.n_roberts),
            n_fan: self.n_fan.unwrap_or(d.n_fan),
        }
    }
}

fn parse_point(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected U,V, got {s:?}"));
    }
    let coord = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    let p = [coord(parts[0])?, coord(parts[1])?];
    if p.iter().all(|c| c.is_finite()) {
        Ok(p)
    } else {
        Err(format!("non-finite coordinate in {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Subcommand)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Describe the loaded norm.
    NormInfo,
    /// The sine s(x, y).
    Sine {
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        x: [f64; 2],
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        y: [f64; 2],
    },
    /// Birkhoff, isosceles and Roberts predicates for (x, y).
    Ortho {
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        x: [f64; 2],
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        y: [f64; 2],
    },
    /// Trace bis(x, y) across parallel lines.
    Bisector {
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        x: [f64; 2],
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        y: [f64; 2],
        #[arg(long, default_value_t = 3.0)]
        offset_max: f64,
        #[arg(long, default_value_t = 61)]
        steps: usize,
    },
    /// Inner bisector of (−x, x) and its radial projection.
    Inner {
        /// Direction of x; normalized onto the unit circle.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        x: [f64; 2],
    },
    /// Estimate c_B.
    Cb,
    /// Estimate c_S.
    Cs,
    /// Estimate D.
    Dconst,
    /// Sampled test for an ellipse (inner-product norm).
    Ipq,
    /// Random search for small c_B values.
    Search {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "random-hull")]
        family: Family,
    },
    /// Write a figure; requires --svg.
    Figure {
        #[arg(long, value_enum)]
        kind: FigureKind,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        x: Option<[f64; 2]>,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        y: Option<[f64; 2]>,
    },
}

/// Everything a run depends on; embedded verbatim in its report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub norm_source: String,
    pub resolution: usize,
    pub inner_resolution: usize,
    pub tolerances: Tolerances,
    pub output_format: OutputFormat,
    pub svg_path: Option<PathBuf>,
    pub deterministic: bool,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> CliResult<Self> {
        let cfg = Self {
            tolerances: cli.tolerances.resolve(),
            command: cli.command,
            norm_source: cli.norm,
            resolution: cli.resolution,
            inner_resolution: cli.inner_resolution,
            output_format: cli.format,
            svg_path: cli.svg,
            deterministic: cli.deterministic,
            seed: cli.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        for (name, r) in [
            ("resolution", self.resolution),
            ("inner-resolution", self.inner_resolution),
        ] {
            if !(MIN_RESOLUTION..=MAX_RESOLUTION).contains(&r) {
                return Err(CliError::Validation(format!(
                    "{name} {r} outside [{MIN_RESOLUTION}, {MAX_RESOLUTION}]"
                )));
            }
        }
        if matches!(self.command, Command::Figure { .. }) && self.svg_path.is_none() {
            return Err(CliError::Validation("figure needs --svg PATH".into()));
        }
        Ok(())
    }

    pub(crate) fn parallelism(&self) -> Parallelism {
        if self.deterministic {
            Parallelism::sequential()
        } else {
            Parallelism::from_env()
        }
    }
}

/// Parses a norm source string.
pub fn load_norm(source: &str) -> CliResult<NormSpec> {
    let bad = |msg: String| CliError::Validation(msg);
    let (kind, arg) = source.split_once(':').unwrap_or((source, ""));
    let number = |what: &str| {
        arg.parse::<f64>()
            .map_err(|_| bad(format!("{what} expects a number, got {arg:?}")))
    };
    let norm = match kind {
        "euclidean" => NormSpec::Euclidean,
        "square" => NormSpec::square(),
        "hexagon" => NormSpec::hexagon(),
        "octagon" => NormSpec::regular_polygon(8, 0.0)?,
        "regular" => NormSpec::regular_polygon(number("regular")? as usize, 0.0)?,
        "lp" => {
            let p = number("lp")?;
            if p.is_infinite() {
                NormSpec::square()
            } else {
                NormSpec::lp(p)?
            }
        }
        "polygon" | "sampled" => {
            let text = std::fs::read_to_string(arg)
                .map_err(|e| bad(format!("cannot read norm file {arg:?}: {e}")))?;
            let norm = NormSpec::from_json(&text)?;
            let wanted = if kind == "polygon" {
                norm.as_polygon().is_some()
            } else {
                norm.is_sampled()
            };
            if !wanted {
                return Err(bad(format!("{arg:?} does not describe a {kind} norm")));
            }
            norm
        }
        _ => return Err(bad(format!("unknown norm source {source:?}"))),
    };
    Ok(norm)
}

/// SHA-256 of the canonical norm file, hex encoded.
pub fn norm_hash(norm: &NormSpec) -> String {
    let text = serde_json::to_string(&norm.to_file()).expect("norm file serializes");
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Report text for stdout, plus the figure written on the side if any.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub figure: Option<PathBuf>,
}

enum Payload {
    Value(Value),
    /// Report value plus CSV rows to use instead of the flattened value.
    WithRows(Value, String),
}

fn pt(p: [f64; 2]) -> Point {
    Point::from(p)
}

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    cfg.validate()?;
    let norm = load_norm(&cfg.norm_source)?;
    let tol = cfg.tolerances;
    let par = cfg.parallelism();
    let mut figure: Option<(FigureKind, figure::FigureData)> = None;

    let payload = match &cfg.command {
        Command::NormInfo => {
            figure = Some((FigureKind::UnitCircle, figure::FigureData::default()));
            let spots = norm.flat_spots();
            Payload::Value(json!({
                "kind": norm.kind(),
                "file": norm.to_file(),
                "vertex_count": norm.as_polygon().map(|p| p.vertices().len()),
                "flat_spots": spots,
                "feature_angles": norm.feature_angles(),
            }))
        }
        Command::Sine { x, y } => {
            let s = sine(&norm, pt(*x), pt(*y))?;
            Payload::Value(json!({ "x": x, "y": y, "sine": s }))
        }
        Command::Ortho { x, y } => {
            let (px, py) = (pt(*x), pt(*y));
            let roberts = match roberts_test(&norm, px, py, &tol) {
                Ok(r) => Some(r),
                Err(CoreError::CollinearAxes) => None,
                Err(e) => return Err(e.into()),
            };
            Payload::Value(json!({
                "x": x,
                "y": y,
                "sine_xy": sine(&norm, px, py)?.value,
                "sine_yx": sine(&norm, py, px)?.value,
                "birkhoff_xy": birkhoff_test(&norm, px, py, &tol)?,
                "birkhoff_yx": birkhoff_test(&norm, py, px, &tol)?,
                "isosceles": isosceles_test(&norm, px, py, &tol)?,
                "roberts": roberts,
            }))
        }
        Command::Bisector {
            x,
            y,
            offset_max,
            steps,
        } => {
            let (px, py) = (pt(*x), pt(*y));
            let class = classify_pair(&norm, px, py)?;
            let trace = trace_bisector(&norm, px, py, *offset_max, *steps, &tol)?;
            let rows = trace.to_csv();
            figure = Some((
                FigureKind::BisectorTrace,
                figure::FigureData {
                    trace: Some(trace.clone()),
                    ..Default::default()
                },
            ));
            Payload::WithRows(json!({ "class": class, "trace": trace }), rows)
        }
        Command::Inner { x } => {
            let x = norm.on_circle(pt(*x));
            let trace = inner_bisector(&norm, x, cfg.inner_resolution, &tol)?;
            let proj = inner_projection(&norm, x, cfg.inner_resolution, &tol)?;
            let rows = trace.to_csv();
            figure = Some((
                FigureKind::InnerProjection,
                figure::FigureData {
                    trace: Some(trace.clone()),
                    directions: proj.direction_samples.iter().map(|c| c.point).collect(),
                    ..Default::default()
                },
            ));
            Payload::WithRows(json!({ "x": x, "trace": trace, "projection": proj }), rows)
        }
        Command::Cb => {
            let r = estimate_cb(&norm, cfg.resolution, cfg.inner_resolution, &tol, par)?;
            figure = Some((
                FigureKind::UnitCircle,
                figure::FigureData {
                    marks: vec![r.witness.x, r.witness.y],
                    ..Default::default()
                },
            ));
            Payload::Value(serde_json::to_value(&r).expect("report serializes"))
        }
        Command::Cs => {
            let r = estimate_cs(&norm, cfg.resolution, &tol, par)?;
            figure = Some((
                FigureKind::ReflectedCircle,
                figure::FigureData {
                    pair: Some((r.witness.x, r.witness.y)),
                    ..Default::default()
                },
            ));
            Payload::Value(serde_json::to_value(&r).expect("report serializes"))
        }
        Command::Dconst => {
            let r = estimate_d(&norm, cfg.resolution, &tol, par)?;
            Payload::Value(serde_json::to_value(&r).expect("report serializes"))
        }
        Command::Ipq => {
            let ok = inner_product_test(&norm, cfg.resolution, &tol, par)?;
            Payload::Value(json!({ "inner_product": ok }))
        }
        Command::Search {
            count,
            n_min,
            n_max,
            family,
        } => {
            let search = SearchConfig {
                family: match family {
                    Family::RandomHull => PolygonFamily::RandomHull,
                    Family::LinearSquares => PolygonFamily::LinearSquares,
                },
                count: *count,
                n_half: (*n_min, *n_max),
                seed: cfg.seed,
                resolution: cfg.resolution,
                inner_resolution: cfg.inner_resolution,
            };
            let reports =
                search_cb_lower(search, &tol, par)?.collect::<minkconst::Result<Vec<_>>>()?;
            let rows = std::iter::once(
                "index,value,running_min,running_min_index,vertex_count\n".to_string(),
            )
            .chain(reports.iter().map(|r| {
                format!(
                    "{},{},{},{},{}\n",
                    r.index,
                    r.value,
                    r.running_min,
                    r.running_min_index,
                    r.vertices.len()
                )
            }))
            .collect();
            Payload::WithRows(json!({ "reports": reports, "conclusive": false }), rows)
        }
        Command::Figure { kind, x, y } => {
            let data = figure::figure_data(&norm, *kind, x.map(pt), y.map(pt), cfg, &tol)?;
            figure = Some((*kind, data));
            Payload::Value(json!({ "kind": kind }))
        }
    };

    let mut written = None;
    if let (Some(path), Some((kind, data))) = (&cfg.svg_path, figure) {
        let svg = figure::render(&norm, kind, &data);
        write_file(path, &svg)?;
        written = Some(path.clone());
    }

    let (result, rows) = match payload {
        Payload::Value(v) => (v, None),
        Payload::WithRows(v, rows) => (v, Some(rows)),
    };
    let report = json!({
        "schema": SCHEMA,
        "config": cfg,
        "norm": { "kind": norm.kind(), "hash": norm_hash(&norm) },
        "figure": written,
        "result": result,
    });
    let stdout = match cfg.output_format {
        OutputFormat::Json => {
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        }
        OutputFormat::Csv => match rows {
            Some(rows) => rows,
            None => flatten_csv(&report),
        },
    };
    Ok(Outcome {
        stdout,
        figure: written,
    })
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// `key,value` rows with dotted keys.
pub fn flatten_csv(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(map) => {
                for (k, v) in map {
                    let key = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(&key, v, out);
                }
            }
            Value::Array(items) => {
                for (i, v) in items.iter().enumerate() {
                    walk(&format!("{prefix}.{i}"), v, out);
                }
            }
            Value::String(s) => out.push_str(&format!("{prefix},{s}\n")),
            other => out.push_str(&format!("{prefix},{other}\n")),
        }
    }
    let mut out = String::from("key,value\n");
    walk("", v, &mut out);
    out
}
