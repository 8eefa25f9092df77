use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, ValueEnum};
use serde::Serialize;

use cmcsurf::kenmotsu::{
    self, harmonicity_residual, GridSpec, HField, KenmotsuError, ReconstructStatus, ScalarGrid,
    Target,
};
use cmcsurf::lingeo::{DomainSignature, MetricKind, Vec3};
use cmcsurf::mesh_io::{self, SurfaceSample};

use crate::config::Config;
use crate::{usage, Outcome};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Metric {
    Euclidean,
    Lorentzian,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Signature {
    Riemannian,
    Lorentzian,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// kenmotsu-grid/1 JSON file, or CSV with header u,v,nx,ny,nz[,H]
    #[arg(long)]
    pub input: PathBuf,
    /// Constant mean curvature; overrides any H stored in the file
    #[arg(long = "H", allow_hyphen_values = true)]
    pub h: Option<f64>,
    /// Ambient metric for CSV input
    #[arg(long, value_enum, default_value = "euclidean")]
    pub metric: Metric,
    /// Domain signature for CSV input
    #[arg(long, value_enum, default_value = "riemannian")]
    pub signature: Signature,
    /// Image of the first grid node, as x,y,z
    #[arg(long, value_delimiter = ',', num_args = 3, allow_hyphen_values = true)]
    pub base: Option<Vec<f64>>,
    /// Integrability residual above which the result is flagged (default from config)
    #[arg(long)]
    pub integrability_tol: Option<f64>,
    /// Base name of the output files
    #[arg(long, default_value = "reconstruct")]
    pub name: String,
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Status {
    Ok,
    IllConditioned { max_residual: f64 },
}

#[derive(Debug, Serialize)]
struct Report {
    schema: &'static str,
    input: String,
    grid: GridSpec,
    metric: MetricKind,
    signature: DomainSignature,
    target: Target,
    #[serde(rename = "H")]
    h: HSummary,
    base: [f64; 3],
    status: Status,
    integrability_tol: f64,
    max_integrability: f64,
    max_harmonicity: f64,
    path_error: f64,
    minimal_nodes: usize,
    files: Vec<String>,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
enum HSummary {
    Constant(f64),
    Range { min: f64, max: f64 },
}

fn residual_csv(g: &ScalarGrid) -> String {
    let mut out = String::from("u,v,value\n");
    for (i, j, u, v) in g.grid.points() {
        let _ = writeln!(out, "{u},{v},{}", g.values[g.grid.idx(i, j)]);
    }
    out
}

fn write(path: &std::path::Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

pub fn run(args: &ReconstructArgs, config: &Config) -> Result<Outcome> {
    let metric = match args.metric {
        Metric::Euclidean => MetricKind::Euclidean,
        Metric::Lorentzian => MetricKind::Lorentzian,
    };
    let signature = match args.signature {
        Signature::Riemannian => DomainSignature::Riemannian,
        Signature::Lorentzian => DomainSignature::Lorentzian,
    };
    let tol = args.integrability_tol.unwrap_or(config.tolerances.integrability);
    if !(tol > 0.0) {
        return Err(usage(format!("--integrability-tol must be positive (got {tol})")));
    }
    let data = kenmotsu::load_grid(&args.input, metric, signature)
        .map_err(|e| usage(format!("{}: {e}", args.input.display())))?;
    let h = match (args.h, data.h) {
        (Some(h), _) => HField::Constant(h),
        (None, Some(h)) => h,
        (None, None) => HField::Constant(config.h),
    };
    let base = match args.base.as_deref() {
        Some(&[x, y, z]) => Vec3::new(x, y, z),
        _ => Vec3::ZERO,
    };
    let g = data.gauss;
    let rec = match kenmotsu::reconstruct_with(&g, &h, base, tol) {
        Ok(r) => r,
        Err(e @ KenmotsuError::MinimalObstruction) => return Err(e.into()),
        Err(e) => return Err(usage(e.to_string())),
    };
    let harmonicity = harmonicity_residual(&g);

    std::fs::create_dir_all(&config.out_dir)?;
    let mut files = Vec::new();
    let mut path = |suffix: &str| {
        let name = format!("{}{suffix}", args.name);
        files.push(name.clone());
        config.out_dir.join(name)
    };
    let grid = g.grid;
    let mesh = mesh_io::mesh_from_nodes(grid.nu, grid.nv, |i, j| {
        let k = grid.idx(i, j);
        Some(SurfaceSample::with_normal(rec.surface.nodes[k], g.nodes[k]))
    })?;
    mesh_io::export_obj(&mesh, &path(".obj"))?;
    write(&path("_integrability.csv"), &residual_csv(&rec.integrability))?;
    write(&path("_harmonicity.csv"), &residual_csv(&harmonicity))?;
    let report_path = path(".json");

    let status = match rec.status {
        ReconstructStatus::Ok => Status::Ok,
        ReconstructStatus::IllConditioned { max_residual } => {
            eprintln!(
                "warning: integrability residual {max_residual:e} exceeds {tol:e}; the surface depends on the integration path"
            );
            Status::IllConditioned { max_residual }
        }
    };
    let h_summary = match &h {
        HField::Constant(c) => HSummary::Constant(*c),
        HField::Nodes(v) => HSummary::Range {
            min: v.iter().copied().fold(f64::INFINITY, f64::min),
            max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        },
    };
    let report = Report {
        schema: "reconstruct-report/1",
        input: args.input.display().to_string(),
        grid,
        metric: g.metric,
        signature: g.signature,
        target: g.target,
        h: h_summary,
        base: base.to_array(),
        status,
        integrability_tol: tol,
        max_integrability: rec.integrability.max(),
        max_harmonicity: harmonicity.max(),
        path_error: rec.path_error,
        minimal_nodes: rec.minimal_nodes,
        files,
    };
    mesh_io::export_report_json(&report, &report_path)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(Outcome::Ok)
}
