use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;

use cmcsurf::delaunay_lorentz::{self, DelaunayKind, DelaunayProfile, LightlikeVariant};
use cmcsurf::elliptic::complete_k;
use cmcsurf::helicoid::{self, Classification, HelicoidParams, PitchRadius, Radii};
use cmcsurf::mesh_io::{self, ProfileCurve, TriangleMesh};

use crate::config::Config;
use crate::{usage, Outcome};

#[derive(Debug, Subcommand)]
pub enum Surface {
    /// cmc-H helicoid for (μ, b) with 0 ≤ μ ≤ 1, 1 ≤ b ≤ 1/μ
    Helicoid(HelicoidArgs),
    /// Lorentzian Delaunay surface of one of the seven kinds
    Delaunay(DelaunayArgs),
}

#[derive(Debug, Args)]
pub struct Mesh {
    /// Nodes along u (default from config)
    #[arg(long)]
    pub nu: Option<usize>,
    /// Nodes along v (default from config)
    #[arg(long)]
    pub nv: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub u_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub u_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub v_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub v_max: Option<f64>,
    /// Base name of the output files
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Args)]
pub struct HelicoidArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub mu: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: f64,
    /// Mean curvature (default from config)
    #[arg(long = "H", allow_hyphen_values = true)]
    pub h: Option<f64>,
    /// Use γ = +a·sn instead of γ = −a·sn
    #[arg(long)]
    pub mirror: bool,
    /// Also write the constant Gaussian curvature companion
    #[arg(long)]
    pub companion: bool,
    #[command(flatten)]
    pub mesh: Mesh,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Variant {
    Linear,
    Sinusoidal,
}

#[derive(Debug, Args)]
pub struct DelaunayArgs {
    /// spacelike-timelike, timelike-timelike, spacelike-spacelike, timelike-spacelike-1,
    /// timelike-spacelike-2, spacelike-lightlike, timelike-lightlike
    #[arg(long)]
    pub kind: String,
    /// Modulus k (k² = k·k)
    #[arg(long, conflicts_with = "k2", allow_hyphen_values = true)]
    pub k: Option<f64>,
    /// Squared modulus, may be negative
    #[arg(long, allow_hyphen_values = true)]
    pub k2: Option<f64>,
    /// φ for the lightlike-axis kinds
    #[arg(long, value_enum, default_value = "sinusoidal")]
    pub variant: Variant,
    /// Take c = −dn for timelike-spacelike-2
    #[arg(long)]
    pub negative_c: bool,
    #[command(flatten)]
    pub mesh: Mesh,
}

#[derive(Debug, Serialize)]
struct MeshStats {
    nu: usize,
    nv: usize,
    u_range: [f64; 2],
    v_range: [f64; 2],
    vertices: usize,
    faces: usize,
    flagged: usize,
}

#[derive(Debug, Serialize)]
struct HelicoidReport {
    schema: &'static str,
    surface: &'static str,
    mu: f64,
    b: f64,
    #[serde(rename = "H")]
    h: f64,
    mirror: bool,
    a: f64,
    c1: f64,
    classification: Classification,
    radii: Radii,
    pitch_radius: PitchRadius,
    mesh: MeshStats,
    files: Vec<String>,
}

#[derive(Debug, Serialize)]
struct DelaunayReport {
    schema: &'static str,
    surface: &'static str,
    kind: DelaunayKind,
    k2: f64,
    variant: LightlikeVariant,
    negative_c: bool,
    signature: cmcsurf::lingeo::DomainSignature,
    target: cmcsurf::kenmotsu::Target,
    #[serde(rename = "H")]
    h: f64,
    mesh: MeshStats,
    files: Vec<String>,
}

const SCHEMA: &str = "generate-report/1";

struct Output {
    dir: PathBuf,
    files: Vec<String>,
}

impl Output {
    fn new(dir: PathBuf) -> Result<Self> {
        std::fs::create_dir_all(&dir)?;
        Ok(Self { dir, files: vec![] })
    }

    fn path(&mut self, name: String) -> PathBuf {
        let p = self.dir.join(&name);
        self.files.push(name);
        p
    }
}

fn grid(m: &Mesh, config: &Config) -> Result<(usize, usize)> {
    let (nu, nv) = (m.nu.unwrap_or(config.grid.nu), m.nv.unwrap_or(config.grid.nv));
    if nu < 2 || nv < 2 {
        return Err(usage(format!("grid sizes must be at least 2 (got {nu} × {nv})")));
    }
    Ok((nu, nv))
}

fn stats(mesh: &TriangleMesh, nu: usize, nv: usize, u: (f64, f64), v: (f64, f64)) -> MeshStats {
    MeshStats {
        nu,
        nv,
        u_range: [u.0, u.1],
        v_range: [v.0, v.1],
        vertices: mesh.vertices.len(),
        faces: mesh.faces.len(),
        flagged: mesh.flagged(),
    }
}

pub fn run(surface: &Surface, config: &Config) -> Result<Outcome> {
    match surface {
        Surface::Helicoid(a) => helicoid(a, config),
        Surface::Delaunay(a) => delaunay(a, config),
    }
}

fn helicoid(args: &HelicoidArgs, config: &Config) -> Result<Outcome> {
    let h = args.h.unwrap_or(config.h);
    let p = HelicoidParams::with_h(args.mu, args.b, h)
        .map_err(|e| usage(e.to_string()))?
        .mirrored(args.mirror);
    let (nu, nv) = grid(&args.mesh, config)?;
    // one full period in u where it is finite, one turn in v
    let period = match complete_k(p.modulus()) {
        Ok(k) => 4.0 * k,
        Err(_) => 6.0,
    };
    let u = (args.mesh.u_min.unwrap_or(0.0), args.mesh.u_max.unwrap_or(period));
    let v = (
        args.mesh.v_min.unwrap_or(0.0),
        args.mesh.v_max.unwrap_or(2.0 * std::f64::consts::PI * p.b()),
    );
    let name = args.mesh.name.clone().unwrap_or_else(|| "helicoid".into());
    let mut out = Output::new(config.out_dir.clone())?;

    let mesh = mesh_io::helicoid_mesh(&p, u, v, nu, nv)?;
    mesh_io::export_obj(&mesh, &out.path(format!("{name}.obj")))?;
    if args.companion {
        let c = mesh_io::companion_mesh(&p, u, v, nu, nv)?;
        mesh_io::export_obj(&c, &out.path(format!("{name}_companion.obj")))?;
    }
    if p.c1() == 0.0 {
        // rotational: the v = 0 meridian
        let curve = ProfileCurve::sample(
            "helicoid",
            |u| helicoid::eval_frame(&p, u, 0.0).ok().map(|f| f.x),
            u,
            nu,
        );
        mesh_io::export_profile_csv(&curve, &out.path(format!("{name}_profile.csv")))?;
    }
    let report_path = out.path(format!("{name}.json"));
    let report = HelicoidReport {
        schema: SCHEMA,
        surface: "helicoid",
        mu: p.mu(),
        b: p.b(),
        h,
        mirror: p.mirror(),
        a: p.a(),
        c1: p.c1(),
        classification: helicoid::classify(&p),
        radii: helicoid::radii(&p),
        pitch_radius: helicoid::pitch_radius(&p),
        mesh: stats(&mesh, nu, nv, u, v),
        files: out.files.clone(),
    };
    mesh_io::export_report_json(&report, &report_path)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(Outcome::Ok)
}

fn default_u_range(p: &DelaunayProfile) -> Result<(f64, f64)> {
    let span = match (p.kind().family(), p.pole_spacing()?) {
        // poles of 1/φ and φ alternate every π/(2k)
        (delaunay_lorentz::Family::Lightlike, Some(s)) => Some(0.5 * s),
        (_, s) => s,
    };
    Ok(match span {
        Some(s) => (0.1 * s, 0.9 * s),
        None => (0.2, 2.0),
    })
}

fn delaunay(args: &DelaunayArgs, config: &Config) -> Result<Outcome> {
    let kind = DelaunayKind::from_name(&args.kind).ok_or_else(|| {
        let names: Vec<_> = DelaunayKind::ALL.iter().map(|k| k.name()).collect();
        usage(format!("unknown kind {:?}; expected one of {}", args.kind, names.join(", ")))
    })?;
    let k2 = match (args.k, args.k2) {
        (Some(k), _) => k * k,
        (_, Some(k2)) => k2,
        _ => return Err(usage("one of --k or --k2 is required")),
    };
    let variant = match args.variant {
        Variant::Linear => LightlikeVariant::PhiLinear,
        Variant::Sinusoidal => LightlikeVariant::PhiSinusoidal,
    };
    let mut p = DelaunayProfile::new(kind, k2).map_err(|e| usage(e.to_string()))?;
    if kind.family() == delaunay_lorentz::Family::Lightlike {
        p = p.with_variant(variant).map_err(|e| usage(e.to_string()))?;
    }
    let p = p.with_negative_c(args.negative_c);
    let (nu, nv) = grid(&args.mesh, config)?;
    let (u0, u1) = default_u_range(&p)?;
    let u = (args.mesh.u_min.unwrap_or(u0), args.mesh.u_max.unwrap_or(u1));
    let v = (args.mesh.v_min.unwrap_or(-1.0), args.mesh.v_max.unwrap_or(1.0));
    let name = args.mesh.name.clone().unwrap_or_else(|| format!("delaunay_{}", kind.name()));
    let mut out = Output::new(config.out_dir.clone())?;

    let mesh = mesh_io::delaunay_mesh(&p, u, v, nu, nv)?;
    mesh_io::export_obj(&mesh, &out.path(format!("{name}.obj")))?;
    let curve = ProfileCurve::sample(
        kind.name(),
        |u| {
            (!delaunay_lorentz::is_singular(&p, u))
                .then(|| delaunay_lorentz::profile_curve(&p, u).ok())
                .flatten()
        },
        u,
        nu,
    );
    mesh_io::export_profile_csv(&curve, &out.path(format!("{name}_profile.csv")))?;
    let report_path = out.path(format!("{name}.json"));
    let report = DelaunayReport {
        schema: SCHEMA,
        surface: "delaunay",
        kind,
        k2,
        variant: p.variant(),
        negative_c: p.negative_c(),
        signature: kind.signature(),
        target: kind.target(),
        h: -0.5,
        mesh: stats(&mesh, nu, nv, u, v),
        files: out.files.clone(),
    };
    mesh_io::export_report_json(&report, &report_path)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(Outcome::Ok)
}

