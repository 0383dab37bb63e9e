//! `hypangle`: validate, parametrize, rebuild and draw canonical polygons.
//!
//! Exit codes: 0 success, 1 validation or consistency failure, 2 numerical
//! failure, 3 I/O or parse error.

mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use hypangle::embed::{self, classify, IsometryClass, Model};
use hypangle::formats::{from_json, to_json, GeneratorsDoc, Theta, ThetaDoc, VerticesDoc};
use hypangle::hyperelliptic::{self, central_fan, extract_theta_h_with};
use hypangle::oracle::{self, FleetSpec, OracleReport};
use hypangle::polygon::{self, validate_canonical, CanonicalPolygon, ValidationReport};
use hypangle::teich::{self, CONSISTENCY_TOL};
use hypangle::Error;

use render::{render_svg, RenderOptions};

/// Tolerance for validation, closure and fan measurements unless `--tol` is given.
const CHECK_TOL: f64 = 1e-8;
/// Equivalence tolerance of `roundtrip`.
const ROUNDTRIP_TOL: f64 = 1e-7;
/// Agreement required of the triangle oracle in `oracle-sweep`.
const SWEEP_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "hypangle",
    version,
    about = "Angle coordinates for canonical polygons"
)]
struct RunConfig {
    #[command(subcommand)]
    command: Command,
    /// Tolerance override (positive).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the canonical polygon conditions and closure.
    Validate { polygon: PathBuf },
    /// Read off the angle parameters of a polygon.
    Extract {
        #[arg(long, value_enum)]
        kind: Kind,
        polygon: PathBuf,
    },
    /// Rebuild a polygon from a theta document.
    Reconstruct { theta: PathBuf },
    /// Vertex coordinates of the realized polygon.
    Embed {
        polygon: PathBuf,
        #[arg(long, value_enum, default_value = "halfplane")]
        model: ModelArg,
    },
    /// Side pairing matrices and the defect of the group relation.
    Generators { polygon: PathBuf },
    /// Draw the polygon as SVG.
    Render {
        polygon: PathBuf,
        #[arg(long, value_enum, default_value = "disk")]
        model: ModelArg,
        /// Picture width and height in pixels.
        #[arg(long, default_value_t = 512)]
        size: u32,
        /// Stroke width of the sides.
        #[arg(long, default_value_t = 1.5)]
        stroke: f64,
    },
    /// Extract and rebuild through every chart that applies.
    Roundtrip { polygon: PathBuf },
    /// Cross-check the closed forms against the coordinate oracles.
    OracleSweep {
        /// Number of random triangles; fleet sizes scale with it.
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// Genera of the polygon fleet.
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        genera: Vec<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Teich,
    #[value(alias = "hyperelliptic")]
    Hyper,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Disk,
    Halfplane,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Disk => Model::Disk,
            ModelArg::Halfplane => Model::HalfPlane,
        }
    }
}

/// Why a command stopped; carries its exit code.
#[derive(Debug)]
enum Failure {
    Check(String),
    Numeric(String),
    Input(String),
}

impl Failure {
    fn from_code(code: u8, msg: String) -> Failure {
        match code {
            1 => Failure::Check(msg),
            2 => Failure::Numeric(msg),
            _ => Failure::Input(msg),
        }
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Numeric(_) => 2,
            Failure::Input(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Check(m) | Failure::Numeric(m) | Failure::Input(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::MalformedInput(_) | Error::ModelMismatch => Failure::Input(msg),
            Error::ImageConsistencyError(_)
            | Error::ParameterDomainError(_)
            | Error::NotHyperelliptic { .. }
            | Error::GenusTooSmall { .. }
            | Error::GenusMismatch(..) => Failure::Check(msg),
            _ => Failure::Numeric(msg),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Outcome {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_polygon(path: &Path) -> Result<CanonicalPolygon, Failure> {
    Ok(from_json(&read(path)?)?)
}

/// Conditions (i)–(v) failing is a validation failure; closure alone is numerical.
fn judge(report: &ValidationReport) -> Outcome {
    let failed = report.failures();
    if failed.iter().any(|c| *c != "closure") {
        return Err(Failure::Check(format!(
            "polygon fails conditions {failed:?}"
        )));
    }
    if let Some(c) = report.check("closure").filter(|c| !c.pass) {
        return Err(Error::ClosureFailure { gap: c.residual }.into());
    }
    Ok(())
}

fn load_valid(path: &Path, tol: f64) -> Result<CanonicalPolygon, Failure> {
    let p = load_polygon(path)?;
    judge(&validate_canonical(&p, tol)?)?;
    Ok(p)
}

fn run(cfg: RunConfig) -> Outcome {
    if let Some(t) = cfg.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure::Input(format!("--tol must be positive, got {t}")));
        }
    }
    let tol = cfg.tol.unwrap_or(CHECK_TOL);
    let out = &cfg.output;
    match cfg.command {
        Command::Validate { polygon } => {
            let p = load_polygon(&polygon)?;
            let report = validate_canonical(&p, cfg.tol.unwrap_or(polygon::DEFAULT_TOL))?;
            emit(
                out,
                &to_json(&json!({ "pass": report.pass(), "checks": report.checks })),
            )?;
            judge(&report)
        }
        Command::Extract { kind, polygon } => {
            let p = load_valid(&polygon, tol)?;
            let doc = match kind {
                Kind::Teich => ThetaDoc::from(&teich::extract_theta(&p)?),
                Kind::Hyper => ThetaDoc::from(&extract_theta_h_with(&p, tol)?),
            };
            emit(out, &to_json(&doc))
        }
        Command::Reconstruct { theta } => {
            let doc: ThetaDoc = from_json(&read(&theta)?)?;
            let p = match doc.into_params()? {
                Theta::Teich(t) => teich::reconstruct_teich_with(&t, CONSISTENCY_TOL, tol)?,
                Theta::Hyper(h) => hyperelliptic::reconstruct_hyperelliptic_with(&h, tol)?,
            };
            emit(out, &to_json(&p))
        }
        Command::Embed { polygon, model } => {
            let p = load_valid(&polygon, tol)?;
            let pp = embed::realize(&p, tol)?.to_model(model.into());
            emit(out, &to_json(&VerticesDoc::from(&pp)))
        }
        Command::Generators { polygon } => {
            let p = load_valid(&polygon, tol)?;
            let gens = embed::side_pairings(&embed::realize(&p, tol)?)?;
            let doc = GeneratorsDoc::new(&gens);
            emit(out, &to_json(&doc))?;
            if gens
                .iter()
                .any(|g| classify(g) != IsometryClass::Hyperbolic)
            {
                return Err(Failure::Check("a side pairing is not hyperbolic".into()));
            }
            if !(doc.relation_defect < oracle::RELATION_TOL) {
                return Err(Failure::Check(format!(
                    "relation defect {:.3e}",
                    doc.relation_defect
                )));
            }
            Ok(())
        }
        Command::Render {
            polygon,
            model,
            size,
            stroke,
        } => {
            let p = load_valid(&polygon, tol)?;
            if size == 0 || !(stroke > 0.0) {
                return Err(Failure::Input(
                    "--size and --stroke must be positive".into(),
                ));
            }
            let pp = embed::realize(&p, tol)?;
            let center = if polygon::is_hyperelliptic(&p, tol) {
                central_fan(&p, tol)?.center
            } else {
                pp.vertex_centroid()
            };
            let opts = RenderOptions {
                model: model.into(),
                size,
                stroke,
            };
            emit(out, &render_svg(&pp, center, &opts))
        }
        Command::Roundtrip { polygon } => {
            let p = load_valid(&polygon, tol)?;
            roundtrip(&p, cfg.tol.unwrap_or(ROUNDTRIP_TOL), out)
        }
        Command::OracleSweep { n, genera } => {
            oracle_sweep(n, genera, cfg.tol.unwrap_or(SWEEP_TOL), out)
        }
    }
}

fn roundtrip(p: &CanonicalPolygon, tol: f64, out: &Option<PathBuf>) -> Outcome {
    let mut charts = serde_json::Map::new();
    let mut worst: Option<Failure> = None;
    let mut record = |name: &str, r: hypangle::Result<CanonicalPolygon>| {
        let entry = match r {
            Ok(q) => {
                let dev = oracle::polygon_deviation(p, &q);
                if dev > tol && worst.is_none() {
                    worst = Some(Failure::Check(format!(
                        "{name} round trip deviates by {dev:.3e}"
                    )));
                }
                json!({ "ok": dev <= tol, "deviation": dev })
            }
            Err(e) => {
                let msg = e.to_string();
                let f = Failure::from(e);
                if worst.as_ref().map_or(true, |w| f.code() > w.code()) {
                    worst = Some(Failure::from_code(f.code(), format!("{name}: {msg}")));
                }
                json!({ "ok": false, "error": msg })
            }
        };
        charts.insert(name.to_string(), entry);
    };
    if p.genus >= 3 {
        record(
            "teich",
            teich::extract_theta(p).and_then(|t| teich::reconstruct_teich(&t)),
        );
    }
    if polygon::is_hyperelliptic(p, CHECK_TOL) {
        record(
            "hyperelliptic",
            extract_theta_h_with(p, CHECK_TOL)
                .and_then(|t| hyperelliptic::reconstruct_hyperelliptic(&t)),
        );
    }
    if charts.is_empty() {
        return Err(Failure::Check(
            "no chart applies: genus 2 and not hyperelliptic".into(),
        ));
    }
    emit(out, &to_json(&charts))?;
    worst.map_or(Ok(()), Err)
}

fn oracle_sweep(n: usize, genera: Vec<usize>, tol: f64, out: &Option<PathBuf>) -> Outcome {
    if genera.iter().any(|g| *g < 2) {
        return Err(Failure::Input("genera must be at least 2".into()));
    }
    let mut reports: Vec<OracleReport> = oracle::triangle_sweep(n, 1, tol);
    let spec = FleetSpec {
        genera,
        perturbed: (n / 200).max(1),
        random_theta: (n / 10).max(1),
        perturbed_theta: (n / 10).max(1),
        ..FleetSpec::default()
    };
    reports.extend(oracle::roundtrip_harness(&spec));
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.pass())
        .map(|r| r.quantity.as_str())
        .collect();
    for r in &reports {
        eprintln!("{} {r}", if r.pass() { "ok  " } else { "FAIL" });
    }
    emit(out, &to_json(&reports))?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("oracle disagreement in {failed:?}")))
    }
}

fn main() -> ExitCode {
    let cfg = match RunConfig::try_parse() {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("hypangle: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
