//! Grid sampling and OBJ/CSV/JSON export.
//!
//! Floats are written with Rust's shortest round-trip formatting, so the same
//! input always produces the same bytes.
//!
//! ```
//! use cmcsurf::lingeo::Vec3;
//! use cmcsurf::mesh_io::{sample, write_obj, SurfaceSample};
//!
//! let mesh = sample(|u, v| Some(SurfaceSample::point(Vec3::new(u, v, 0.0))), (0.0, 1.0), (0.0, 1.0), 3, 3).unwrap();
//! assert_eq!((mesh.vertices.len(), mesh.faces.len()), (9, 8));
//! let mut out = Vec::new();
//! write_obj(&mesh, &mut out).unwrap();
//! assert!(String::from_utf8(out).unwrap().contains("f 1 2 5"));
//! ```

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::delaunay_lorentz::{self, DelaunayProfile};
use crate::helicoid::{self, HelicoidParams};
use crate::lingeo::Vec3;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("grid needs at least 2 nodes per direction (got {nu} × {nv})")]
    GridTooSmall { nu: usize, nv: usize },
    #[error("every grid node is degenerate; nothing to mesh")]
    Empty,
    #[error("profile u values must be strictly increasing (sample {index})")]
    NotIncreasing { index: usize },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, MeshError>;

/// One evaluator result. Evaluators return `None` for a degenerate node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSample {
    pub x: Vec3,
    pub n: Option<Vec3>,
}

impl SurfaceSample {
    pub fn point(x: Vec3) -> Self {
        Self { x, n: None }
    }

    pub fn with_normal(x: Vec3, n: Vec3) -> Self {
        Self { x, n: Some(n) }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TriangleMesh {
    pub vertices: Vec<Vec3>,
    /// Present when every kept node came with a normal.
    pub normals: Option<Vec<Vec3>>,
    /// 0-based indices into `vertices`.
    pub faces: Vec<[usize; 3]>,
    /// One flag per grid node (`u` fastest); flagged nodes have no vertex.
    pub degenerate_flags: Vec<bool>,
}

impl TriangleMesh {
    pub fn flagged(&self) -> usize {
        self.degenerate_flags.iter().filter(|&&f| f).count()
    }
}

/// Sample `nu × nv` nodes spanning both ranges inclusive. Nodes are numbered
/// with `u` fastest and each cell is split into two triangles. A node is
/// degenerate when the evaluator returns `None` or a non-finite point;
/// degenerate nodes and every triangle touching one are dropped.
pub fn sample<F>(f: F, u: (f64, f64), v: (f64, f64), nu: usize, nv: usize) -> Result<TriangleMesh>
where
    F: Fn(f64, f64) -> Option<SurfaceSample>,
{
    let du = (u.1 - u.0) / (nu.max(2) - 1) as f64;
    let dv = (v.1 - v.0) / (nv.max(2) - 1) as f64;
    mesh_from_nodes(nu, nv, |i, j| f(u.0 + i as f64 * du, v.0 + j as f64 * dv))
}

/// Mesh an `nu × nv` grid given per-node samples `f(i, j)`.
pub fn mesh_from_nodes<F>(nu: usize, nv: usize, f: F) -> Result<TriangleMesh>
where
    F: Fn(usize, usize) -> Option<SurfaceSample>,
{
    if nu < 2 || nv < 2 {
        return Err(MeshError::GridTooSmall { nu, nv });
    }
    let mut index = vec![None; nu * nv];
    let mut mesh = TriangleMesh {
        degenerate_flags: vec![true; nu * nv],
        ..Default::default()
    };
    let mut normals = Some(Vec::new());
    for j in 0..nv {
        for i in 0..nu {
            let s = f(i, j).filter(|s| s.x.is_finite() && s.n.is_none_or(|n| n.is_finite()));
            let Some(s) = s else { continue };
            let k = j * nu + i;
            index[k] = Some(mesh.vertices.len());
            mesh.degenerate_flags[k] = false;
            mesh.vertices.push(s.x);
            normals = normals.and_then(|mut ns: Vec<Vec3>| {
                ns.push(s.n?);
                Some(ns)
            });
        }
    }
    if mesh.vertices.is_empty() {
        return Err(MeshError::Empty);
    }
    mesh.normals = normals;
    for j in 0..nv - 1 {
        for i in 0..nu - 1 {
            let a = index[j * nu + i];
            let b = index[j * nu + i + 1];
            let c = index[(j + 1) * nu + i + 1];
            let d = index[(j + 1) * nu + i];
            for tri in [[a, b, c], [a, c, d]] {
                if let [Some(p), Some(q), Some(r)] = tri {
                    mesh.faces.push([p, q, r]);
                }
            }
        }
    }
    Ok(mesh)
}

/// Helicoid mesh with Gauss-map normals. Nodes where the unrotated nodoid
/// profile has a pole (`sn = ±1` at `b = 1/μ`) are flagged.
pub fn helicoid_mesh(p: &HelicoidParams, u: (f64, f64), v: (f64, f64), nu: usize, nv: usize) -> Result<TriangleMesh> {
    sample(
        |u, v| {
            let f = helicoid::eval_frame(p, u, v).ok()?;
            f.x0_check?;
            Some(SurfaceSample::with_normal(f.x, f.n))
        },
        u,
        v,
        nu,
        nv,
    )
}

/// Companion (constant Gaussian curvature front) of a helicoid.
pub fn companion_mesh(p: &HelicoidParams, u: (f64, f64), v: (f64, f64), nu: usize, nv: usize) -> Result<TriangleMesh> {
    sample(
        |u, v| {
            let f = helicoid::eval_frame(p, u, v).ok()?;
            f.x0_check?;
            Some(SurfaceSample::with_normal(f.x_check, f.n))
        },
        u,
        v,
        nu,
        nv,
    )
}

/// Lorentzian Delaunay mesh in ambient coordinates. Poles and conical
/// points are flagged.
pub fn delaunay_mesh(p: &DelaunayProfile, u: (f64, f64), v: (f64, f64), nu: usize, nv: usize) -> Result<TriangleMesh> {
    sample(
        |u, v| {
            if delaunay_lorentz::is_singular(p, u) {
                return None;
            }
            let x = delaunay_lorentz::eval_surface(p, u, v).ok()?;
            let n = delaunay_lorentz::gauss_map(p, u, v).ok()?;
            Some(SurfaceSample::with_normal(x, n))
        },
        u,
        v,
        nu,
        nv,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    pub kind: String,
    samples: Vec<(f64, Vec3)>,
}

impl ProfileCurve {
    pub fn new(kind: impl Into<String>, samples: Vec<(f64, Vec3)>) -> Result<Self> {
        if let Some(index) = samples.windows(2).position(|w| !(w[1].0 > w[0].0)) {
            return Err(MeshError::NotIncreasing { index: index + 1 });
        }
        Ok(Self {
            kind: kind.into(),
            samples,
        })
    }

    /// Sample `f` at `n` evenly spaced `u`, skipping points where it fails.
    pub fn sample(kind: impl Into<String>, f: impl Fn(f64) -> Option<Vec3>, u: (f64, f64), n: usize) -> Self {
        let n = n.max(2);
        let step = (u.1 - u.0) / (n - 1) as f64;
        let samples = (0..n)
            .map(|i| u.0 + i as f64 * step)
            .filter_map(|u| f(u).filter(|x| x.is_finite()).map(|x| (u, x)))
            .collect();
        Self {
            kind: kind.into(),
            samples,
        }
    }

    pub fn samples(&self) -> &[(f64, Vec3)] {
        &self.samples
    }
}

pub fn write_obj(m: &TriangleMesh, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "# cmcsurf mesh")?;
    writeln!(w, "# vertices {} faces {}", m.vertices.len(), m.faces.len())?;
    for v in &m.vertices {
        writeln!(w, "v {} {} {}", v.x, v.y, v.z)?;
    }
    if let Some(ns) = &m.normals {
        for n in ns {
            writeln!(w, "vn {} {} {}", n.x, n.y, n.z)?;
        }
    }
    for f in &m.faces {
        writeln!(w, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    Ok(())
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> MeshError + '_ {
    move |source| MeshError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn export_obj(m: &TriangleMesh, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path).map_err(io_err(path))?);
    write_obj(m, &mut w).and_then(|_| w.flush()).map_err(io_err(path))
}

pub fn write_profile_csv(c: &ProfileCurve, w: impl Write) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["u", "x", "y", "z"])?;
    for (u, x) in &c.samples {
        out.write_record([u.to_string(), x.x.to_string(), x.y.to_string(), x.z.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn export_profile_csv(c: &ProfileCurve, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    write_profile_csv(c, file).map_err(|source| MeshError::Csv {
        path: path.to_path_buf(),
        source,
    })
}

/// Pretty JSON with a trailing newline. Reports carry their own `schema` field.
pub fn export_report_json<T: Serialize + ?Sized>(report: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report).map_err(|source| MeshError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    std::fs::write(path, text).map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane(u: f64, v: f64) -> Option<SurfaceSample> {
        Some(SurfaceSample::point(Vec3::new(u, v, 0.0)))
    }

    #[test]
    fn counts() {
        let m = sample(plane, (0.0, 1.0), (0.0, 1.0), 16, 16).unwrap();
        assert_eq!((m.vertices.len(), m.faces.len()), (256, 450));
        assert!(m.normals.is_none());
        assert!(sample(plane, (0.0, 1.0), (0.0, 1.0), 1, 5).is_err());
    }

    #[test]
    fn flagged_nodes_drop_faces() {
        let m = sample(
            |u, v| (u != 0.5 || v != 0.5).then(|| SurfaceSample::point(Vec3::new(u, v, 0.0))),
            (0.0, 1.0),
            (0.0, 1.0),
            3,
            3,
        )
        .unwrap();
        assert_eq!(m.vertices.len(), 8);
        assert_eq!(m.flagged(), 1);
        assert!(m.degenerate_flags[4]);
        // the a–c diagonals leave two triangles clear of the centre
        assert_eq!(m.faces, [[1, 2, 4], [3, 6, 5]]);
        assert!(matches!(sample(|_, _| None, (0.0, 1.0), (0.0, 1.0), 2, 2), Err(MeshError::Empty)));
    }

    #[test]
    fn nan_is_flagged() {
        let m = sample(
            |u, _| Some(SurfaceSample::point(Vec3::new(if u > 0.9 { f64::NAN } else { u }, 0.0, 0.0))),
            (0.0, 1.0),
            (0.0, 1.0),
            2,
            2,
        )
        .unwrap();
        assert_eq!(m.vertices.len(), 2);
        assert!(m.vertices.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn profile_order() {
        let p = |u: f64| (u, Vec3::new(u, 0.0, 0.0));
        assert!(ProfileCurve::new("t", vec![p(0.0), p(1.0)]).is_ok());
        assert!(matches!(
            ProfileCurve::new("t", vec![p(0.0), p(1.0), p(1.0)]),
            Err(MeshError::NotIncreasing { index: 2 })
        ));
    }
}
