//! Surfaces from their Gauss map: the Kenmotsu-type formula
//! `−2H dx = dn + n × (*dn)` on sampled grids.
//!
//! Three ambient/domain combinations are supported, selected by
//! [`MetricKind`] and [`DomainSignature`]:
//!
//! | ambient    | domain     | Gauss map target |
//! |------------|------------|------------------|
//! | Euclidean  | Riemannian | `S²`             |
//! | Lorentzian | Riemannian | `H²` (spacelike surfaces) |
//! | Lorentzian | Lorentzian | `S²₁` (timelike surfaces) |
//!
//! Derivatives are second-order central differences (one-sided second-order
//! at the grid boundary) and path integrals use the trapezoidal rule, so
//! every discrete quantity converges at `O(h²)`.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lingeo::{
    cross, hodge_star, inner, normalize, DomainSignature, MetricKind, Vec3, VectorOneForm,
};

pub const GRID_SCHEMA: &str = "kenmotsu-grid/1";

/// Nodes must satisfy `|⟨n,n⟩ − ε| <` this to count as lying on the target.
pub const TARGET_TOL: f64 = 1e-10;

/// Nodes with `|H|` below this are treated as zero mean curvature.
pub const MIN_ABS_H: f64 = 1e-12;

/// Relative size of `dn + n × (*dn)` below which a node is flagged minimal.
pub const MINIMAL_REL_TOL: f64 = 1e-8;

/// Default integrability threshold (circulation per unit area) above which
/// a reconstruction is reported ill-conditioned.
pub const DEFAULT_INTEGRABILITY_TOL: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum KenmotsuError {
    #[error("grid needs at least {min}×{min} nodes, got {nu}×{nv}")]
    GridTooSmall { nu: usize, nv: usize, min: usize },
    #[error("grid steps must be positive and finite (du = {du}, dv = {dv})")]
    BadStep { du: f64, dv: f64 },
    #[error("expected {expected} nodes, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("metric {metric:?}, domain {signature:?} and target {target:?} do not form a supported case")]
    InvalidCase {
        metric: MetricKind,
        signature: DomainSignature,
        target: Target,
    },
    #[error("node ({i}, {j}) has ⟨n,n⟩ = {value}, not on target {target:?}")]
    NotOnTarget {
        i: usize,
        j: usize,
        value: f64,
        target: Target,
    },
    #[error("mean curvature vanishes at node ({i}, {j}) (H = {h})")]
    ZeroMeanCurvature { i: usize, j: usize, h: f64 },
    #[error("dn + n × (*dn) vanishes on the whole grid: the data describes a minimal surface, which this formula cannot reconstruct")]
    MinimalObstruction,
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, KenmotsuError>;

/// Where the Gauss map takes its values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    /// unit sphere in Euclidean space
    S2,
    /// hyperbolic plane `⟨n,n⟩_L = −1`
    H2,
    /// de Sitter plane `⟨n,n⟩_L = +1`
    #[serde(rename = "S2_1")]
    S21,
}

impl Target {
    /// The required value of `⟨n, n⟩`.
    pub fn norm(self) -> f64 {
        match self {
            Target::H2 => -1.0,
            Target::S2 | Target::S21 => 1.0,
        }
    }

    /// The target fixed by an ambient metric and domain signature, if any.
    pub fn for_case(metric: MetricKind, signature: DomainSignature) -> Option<Target> {
        match (metric, signature) {
            (MetricKind::Euclidean, DomainSignature::Riemannian) => Some(Target::S2),
            (MetricKind::Lorentzian, DomainSignature::Riemannian) => Some(Target::H2),
            (MetricKind::Lorentzian, DomainSignature::Lorentzian) => Some(Target::S21),
            (MetricKind::Euclidean, DomainSignature::Lorentzian) => None,
        }
    }
}

/// A regular `(u, v)` grid. Node `(i, j)` sits at `(u0 + i du, v0 + j dv)`
/// and is stored at index `j * nu + i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nu: usize,
    pub nv: usize,
    pub u0: f64,
    pub v0: f64,
    pub du: f64,
    pub dv: f64,
}

impl GridSpec {
    pub fn new(nu: usize, nv: usize, u0: f64, v0: f64, du: f64, dv: f64) -> Self {
        Self {
            nu,
            nv,
            u0,
            v0,
            du,
            dv,
        }
    }

    /// `n` nodes spanning `[a, b]` inclusive in each direction.
    pub fn spanning(u: (f64, f64), v: (f64, f64), nu: usize, nv: usize) -> Self {
        let du = (u.1 - u.0) / (nu.max(2) - 1) as f64;
        let dv = (v.1 - v.0) / (nv.max(2) - 1) as f64;
        Self::new(nu, nv, u.0, v.0, du, dv)
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nu + i
    }

    pub fn u(&self, i: usize) -> f64 {
        self.u0 + i as f64 * self.du
    }

    pub fn v(&self, j: usize) -> f64 {
        self.v0 + j as f64 * self.dv
    }

    /// Node coordinates in storage order.
    pub fn points(&self) -> impl Iterator<Item = (usize, usize, f64, f64)> + '_ {
        (0..self.nv).flat_map(move |j| (0..self.nu).map(move |i| (i, j, self.u(i), self.v(j))))
    }

    fn check(&self, min: usize) -> Result<()> {
        if self.nu < min || self.nv < min {
            return Err(KenmotsuError::GridTooSmall {
                nu: self.nu,
                nv: self.nv,
                min,
            });
        }
        if !(self.du > 0.0 && self.dv > 0.0 && self.du.is_finite() && self.dv.is_finite()) {
            return Err(KenmotsuError::BadStep {
                du: self.du,
                dv: self.dv,
            });
        }
        Ok(())
    }
}

/// Sampled Gauss map.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussMapGrid {
    pub grid: GridSpec,
    pub nodes: Vec<Vec3>,
    pub metric: MetricKind,
    pub signature: DomainSignature,
    pub target: Target,
}

impl GaussMapGrid {
    /// Validating constructor: the case must be supported and every node
    /// must lie on the target to within [`TARGET_TOL`].
    pub fn new(
        grid: GridSpec,
        nodes: Vec<Vec3>,
        metric: MetricKind,
        signature: DomainSignature,
        target: Target,
    ) -> Result<Self> {
        grid.check(3)?;
        if nodes.len() != grid.len() {
            return Err(KenmotsuError::ShapeMismatch {
                expected: grid.len(),
                got: nodes.len(),
            });
        }
        if Target::for_case(metric, signature) != Some(target) {
            return Err(KenmotsuError::InvalidCase {
                metric,
                signature,
                target,
            });
        }
        for (i, j, _, _) in grid.points() {
            let n = nodes[grid.idx(i, j)];
            let value = inner(metric, n, n);
            if !((value - target.norm()).abs() < TARGET_TOL) {
                return Err(KenmotsuError::NotOnTarget {
                    i,
                    j,
                    value,
                    target,
                });
            }
        }
        Ok(Self {
            grid,
            nodes,
            metric,
            signature,
            target,
        })
    }

    /// Sample `f(u, v)` on `grid` and validate.
    pub fn sample(
        grid: GridSpec,
        metric: MetricKind,
        signature: DomainSignature,
        f: impl Fn(f64, f64) -> Vec3,
    ) -> Result<Self> {
        let target = Target::for_case(metric, signature).ok_or(KenmotsuError::InvalidCase {
            metric,
            signature,
            target: Target::S2,
        })?;
        let nodes = grid.points().map(|(_, _, u, v)| f(u, v)).collect();
        Self::new(grid, nodes, metric, signature, target)
    }

    pub fn at(&self, i: usize, j: usize) -> Vec3 {
        self.nodes[self.grid.idx(i, j)]
    }

    /// The same grid with `n` replaced by `−n`.
    pub fn negated(&self) -> Self {
        Self {
            nodes: self.nodes.iter().map(|&n| -n).collect(),
            ..self.clone()
        }
    }
}

/// Mean curvature on the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub enum HField {
    Constant(f64),
    Nodes(Vec<f64>),
}

impl HField {
    pub fn at(&self, idx: usize) -> f64 {
        match self {
            HField::Constant(h) => *h,
            HField::Nodes(v) => v[idx],
        }
    }

    fn check(&self, grid: &GridSpec) -> Result<()> {
        if let HField::Nodes(v) = self {
            if v.len() != grid.len() {
                return Err(KenmotsuError::ShapeMismatch {
                    expected: grid.len(),
                    got: v.len(),
                });
            }
        }
        for (i, j, _, _) in grid.points() {
            let h = self.at(grid.idx(i, j));
            if !(h.abs() >= MIN_ABS_H) {
                return Err(KenmotsuError::ZeroMeanCurvature { i, j, h });
            }
        }
        Ok(())
    }
}

/// Sampled surface positions.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGrid {
    pub grid: GridSpec,
    pub nodes: Vec<Vec3>,
}

impl SurfaceGrid {
    pub fn new(grid: GridSpec, nodes: Vec<Vec3>) -> Result<Self> {
        grid.check(1)?;
        if nodes.len() != grid.len() {
            return Err(KenmotsuError::ShapeMismatch {
                expected: grid.len(),
                got: nodes.len(),
            });
        }
        Ok(Self { grid, nodes })
    }

    pub fn sample(grid: GridSpec, f: impl Fn(f64, f64) -> Vec3) -> Self {
        let nodes = grid.points().map(|(_, _, u, v)| f(u, v)).collect();
        Self { grid, nodes }
    }

    pub fn at(&self, i: usize, j: usize) -> Vec3 {
        self.nodes[self.grid.idx(i, j)]
    }

    /// Largest Euclidean distance between corresponding nodes.
    pub fn max_distance(&self, other: &SurfaceGrid) -> f64 {
        self.nodes
            .iter()
            .zip(&other.nodes)
            .map(|(a, b)| (*a - *b).norm_e())
            .fold(0.0, f64::max)
    }
}

/// Scalar values on a grid (used for residual maps).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarGrid {
    pub grid: GridSpec,
    pub values: Vec<f64>,
}

impl ScalarGrid {
    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

// ---------------------------------------------------------------------------
// Finite differences.

fn diff2(f: impl Fn(usize) -> Vec3, i: usize, n: usize, h: f64) -> Vec3 {
    if i == 0 {
        (f(0) * -3.0 + f(1) * 4.0 - f(2)) / (2.0 * h)
    } else if i == n - 1 {
        (f(n - 1) * 3.0 - f(n - 2) * 4.0 + f(n - 3)) / (2.0 * h)
    } else {
        (f(i + 1) - f(i - 1)) / (2.0 * h)
    }
}

fn diff4(f: impl Fn(usize) -> Vec3, i: usize, n: usize, h: f64) -> Vec3 {
    if n < 5 {
        return diff2(f, i, n, h);
    }
    let d = 12.0 * h;
    match i {
        0 => (f(0) * -25.0 + f(1) * 48.0 - f(2) * 36.0 + f(3) * 16.0 - f(4) * 3.0) / d,
        1 => (f(0) * -3.0 - f(1) * 10.0 + f(2) * 18.0 - f(3) * 6.0 + f(4)) / d,
        _ if i == n - 2 => {
            (f(n - 1) * 3.0 + f(n - 2) * 10.0 - f(n - 3) * 18.0 + f(n - 4) * 6.0 - f(n - 5)) / d
        }
        _ if i == n - 1 => {
            (f(n - 1) * 25.0 - f(n - 2) * 48.0 + f(n - 3) * 36.0 - f(n - 4) * 16.0
                + f(n - 5) * 3.0)
                / d
        }
        _ => (f(i - 2) - f(i - 1) * 8.0 + f(i + 1) * 8.0 - f(i + 2)) / d,
    }
}

fn partials(
    nodes: &[Vec3],
    g: &GridSpec,
    i: usize,
    j: usize,
    fourth_order: bool,
) -> (Vec3, Vec3) {
    let along_u = |k: usize| nodes[g.idx(k, j)];
    let along_v = |k: usize| nodes[g.idx(i, k)];
    if fourth_order {
        (diff4(along_u, i, g.nu, g.du), diff4(along_v, j, g.nv, g.dv))
    } else {
        (diff2(along_u, i, g.nu, g.du), diff2(along_v, j, g.nv, g.dv))
    }
}

/// `dn + n × (*dn)` from given partials.
fn bracket(g: &GaussMapGrid, n: Vec3, nu: Vec3, nv: Vec3) -> VectorOneForm {
    let dn = VectorOneForm::new(nu, nv, g.signature);
    let star = hodge_star(dn);
    VectorOneForm::new(
        nu + cross(g.metric, n, star.p),
        nv + cross(g.metric, n, star.q),
        g.signature,
    )
}

/// The Kenmotsu form `ω = −(1/2H){dn + n × (*dn)}` at every node.
pub fn kenmotsu_form(g: &GaussMapGrid, h: &HField) -> Result<Vec<VectorOneForm>> {
    h.check(&g.grid)?;
    let grid = &g.grid;
    let mut out = Vec::with_capacity(grid.len());
    for (i, j, _, _) in grid.points() {
        let idx = grid.idx(i, j);
        let (nu, nv) = partials(&g.nodes, grid, i, j, false);
        let b = bracket(g, g.nodes[idx], nu, nv);
        let s = -0.5 / h.at(idx);
        out.push(VectorOneForm::new(b.p * s, b.q * s, g.signature));
    }
    Ok(out)
}

/// Per-node flag: `‖dn + n × (*dn)‖ ≤ 1e−8·‖dn‖`, i.e. the data is locally
/// that of a minimal surface (or a constant map). Uses fourth-order
/// differences so the threshold is reachable on smooth data.
pub fn minimal_flags(g: &GaussMapGrid) -> Vec<bool> {
    let grid = &g.grid;
    grid.points()
        .map(|(i, j, _, _)| {
            let (nu, nv) = partials(&g.nodes, grid, i, j, true);
            let b = bracket(g, g.at(i, j), nu, nv);
            let size = (b.p.norm_e().powi(2) + b.q.norm_e().powi(2)).sqrt();
            let dn = (nu.norm_e().powi(2) + nv.norm_e().powi(2)).sqrt();
            size <= MINIMAL_REL_TOL * dn
        })
        .collect()
}

fn edge(a: Vec3, b: Vec3, h: f64) -> Vec3 {
    (a + b) * (0.5 * h)
}

/// Counterclockwise circulation of the Kenmotsu form around each grid cell,
/// divided by the cell area: the discrete `d((dn + n × *dn)/H)`.
///
/// Only cells whose four corners carry centred differences are reported,
/// since the one-sided boundary stencils would make the boundary cells
/// first order. A 3-wide direction falls back to all cells.
pub fn integrability_residual(g: &GaussMapGrid, h: &HField) -> Result<ScalarGrid> {
    let omega = kenmotsu_form(g, h)?;
    let grid = &g.grid;
    let w = |i: usize, j: usize| omega[grid.idx(i, j)];
    let skip = |n: usize| usize::from(n >= 4);
    let (si, sj) = (skip(grid.nu), skip(grid.nv));
    let cells = GridSpec::new(
        grid.nu - 1 - 2 * si,
        grid.nv - 1 - 2 * sj,
        grid.u0 + (0.5 + si as f64) * grid.du,
        grid.v0 + (0.5 + sj as f64) * grid.dv,
        grid.du,
        grid.dv,
    );
    let mut values = Vec::with_capacity(cells.len());
    for j in sj..sj + cells.nv {
        for i in si..si + cells.nu {
            let bottom = edge(w(i, j).p, w(i + 1, j).p, grid.du);
            let right = edge(w(i + 1, j).q, w(i + 1, j + 1).q, grid.dv);
            let top = edge(w(i, j + 1).p, w(i + 1, j + 1).p, grid.du);
            let left = edge(w(i, j).q, w(i, j + 1).q, grid.dv);
            let circulation = bottom + right - top - left;
            values.push(circulation.norm_e() / (grid.du * grid.dv));
        }
    }
    Ok(ScalarGrid {
        grid: cells,
        values,
    })
}

/// Size of the part of `d*dn` normal to `n` at interior nodes; zero for
/// harmonic maps into the target.
pub fn harmonicity_residual(g: &GaussMapGrid) -> ScalarGrid {
    let grid = &g.grid;
    let interior = GridSpec::new(
        grid.nu - 2,
        grid.nv - 2,
        grid.u0 + grid.du,
        grid.v0 + grid.dv,
        grid.du,
        grid.dv,
    );
    let sign = match g.signature {
        DomainSignature::Riemannian => 1.0,
        DomainSignature::Lorentzian => -1.0,
    };
    let mut values = Vec::with_capacity(interior.len());
    for j in 1..grid.nv - 1 {
        for i in 1..grid.nu - 1 {
            let n = g.at(i, j);
            let nuu = (g.at(i + 1, j) - n * 2.0 + g.at(i - 1, j)) / (grid.du * grid.du);
            let nvv = (g.at(i, j + 1) - n * 2.0 + g.at(i, j - 1)) / (grid.dv * grid.dv);
            let lap = nuu + nvv * sign;
            let tangential = lap - n * (inner(g.metric, lap, n) / inner(g.metric, n, n));
            values.push(tangential.norm_e());
        }
    }
    ScalarGrid {
        grid: interior,
        values,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReconstructStatus {
    Ok,
    /// The integrability residual exceeded the threshold; the surface is
    /// still returned but depends on the integration path.
    IllConditioned { max_residual: f64 },
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub surface: SurfaceGrid,
    pub status: ReconstructStatus,
    /// Max distance between the row-major and column-major integrations.
    pub path_error: f64,
    pub integrability: ScalarGrid,
    /// Nodes where the data is locally minimal (see [`minimal_flags`]).
    pub minimal_nodes: usize,
}

/// Integrate the Kenmotsu form with the trapezoidal rule, first along `u`
/// on the row `v = v0` and then along `v`, so that node `(0, 0)` lands on
/// `base_point`. A column-major integration is run as a cross-check.
pub fn reconstruct(g: &GaussMapGrid, h: &HField, base_point: Vec3) -> Result<Reconstruction> {
    reconstruct_with(g, h, base_point, DEFAULT_INTEGRABILITY_TOL)
}

pub fn reconstruct_with(
    g: &GaussMapGrid,
    h: &HField,
    base_point: Vec3,
    integrability_tol: f64,
) -> Result<Reconstruction> {
    let omega = kenmotsu_form(g, h)?;
    let flags = minimal_flags(g);
    let minimal_nodes = flags.iter().filter(|&&f| f).count();
    if minimal_nodes == flags.len() {
        return Err(KenmotsuError::MinimalObstruction);
    }
    let grid = g.grid;
    let w = |i: usize, j: usize| omega[grid.idx(i, j)];

    let mut rows = vec![Vec3::ZERO; grid.len()];
    rows[0] = base_point;
    for i in 1..grid.nu {
        rows[grid.idx(i, 0)] = rows[grid.idx(i - 1, 0)] + edge(w(i - 1, 0).p, w(i, 0).p, grid.du);
    }
    for i in 0..grid.nu {
        for j in 1..grid.nv {
            rows[grid.idx(i, j)] =
                rows[grid.idx(i, j - 1)] + edge(w(i, j - 1).q, w(i, j).q, grid.dv);
        }
    }

    let mut cols = vec![Vec3::ZERO; grid.len()];
    cols[0] = base_point;
    for j in 1..grid.nv {
        cols[grid.idx(0, j)] = cols[grid.idx(0, j - 1)] + edge(w(0, j - 1).q, w(0, j).q, grid.dv);
    }
    for j in 0..grid.nv {
        for i in 1..grid.nu {
            cols[grid.idx(i, j)] =
                cols[grid.idx(i - 1, j)] + edge(w(i - 1, j).p, w(i, j).p, grid.du);
        }
    }

    let path_error = rows
        .iter()
        .zip(&cols)
        .map(|(a, b)| (*a - *b).norm_e())
        .fold(0.0, f64::max);
    let integrability = integrability_residual(g, h)?;
    let max_residual = integrability.max();
    let status = if max_residual > integrability_tol {
        ReconstructStatus::IllConditioned { max_residual }
    } else {
        ReconstructStatus::Ok
    };
    Ok(Reconstruction {
        surface: SurfaceGrid { grid, nodes: rows },
        status,
        path_error,
        integrability,
        minimal_nodes,
    })
}

/// Finite-difference geometry at one interior node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdNode {
    pub u: f64,
    pub v: f64,
    /// `(E, F, G)`
    pub first: [f64; 3],
    /// `(L, M, N)` with respect to `normal`
    pub second: [f64; 3],
    pub mean: f64,
    pub gauss: f64,
    pub normal: Vec3,
    /// `|det I|` fell below the degeneracy threshold.
    pub degenerate: bool,
}

impl FdNode {
    /// Hopf coefficient `q` with `II − H·I = Re(q (du + i dv)²)`, meaningful
    /// on conformal Riemannian parameters.
    pub fn hopf(&self) -> Complex64 {
        let [l, m, n] = self.second;
        Complex64::new(0.5 * (l - n), -m)
    }
}

#[derive(Debug, Clone)]
pub struct FdGeometry {
    /// Interior grid the nodes live on.
    pub grid: GridSpec,
    pub nodes: Vec<FdNode>,
}

/// Default relative threshold for `|det I|` in [`fd_geometry`].
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Difference stencil used by [`fd_geometry_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stencil {
    /// three-point central differences, `O(h²)`
    #[default]
    Second,
    /// five-point central differences, `O(h⁴)`
    Fourth,
}

impl Stencil {
    fn half_width(self) -> usize {
        match self {
            Stencil::Second => 1,
            Stencil::Fourth => 2,
        }
    }

    fn first(self) -> &'static [f64] {
        match self {
            Stencil::Second => &[-0.5, 0.0, 0.5],
            Stencil::Fourth => &[1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0],
        }
    }

    fn second(self) -> &'static [f64] {
        match self {
            Stencil::Second => &[1.0, -2.0, 1.0],
            Stencil::Fourth => &[
                -1.0 / 12.0,
                16.0 / 12.0,
                -30.0 / 12.0,
                16.0 / 12.0,
                -1.0 / 12.0,
            ],
        }
    }
}

/// Normal orientation used by [`fd_geometry`]: `x_u × x_v` in Euclidean
/// space and `−x_u ×_L x_v` in Minkowski space.
pub fn default_normal(m: MetricKind, xu: Vec3, xv: Vec3) -> Vec3 {
    match m {
        MetricKind::Euclidean => cross(m, xu, xv),
        MetricKind::Lorentzian => -cross(m, xu, xv),
    }
}

/// First and second fundamental forms, mean and Gaussian curvature by
/// central differences at interior nodes, with `II = ⟨d²x, n⟩`.
/// `H = tr(I⁻¹ II)/2` and `K = ε det II / det I` where `ε = ⟨n, n⟩`. With
/// this sign of `H`, `−2H dx = dn + n × (*dn)` holds in all three cases.
pub fn fd_geometry(s: &SurfaceGrid, m: MetricKind) -> Result<FdGeometry> {
    fd_geometry_with(s, m, Stencil::Second, None::<fn(f64, f64) -> Vec3>)
}

/// Same as [`fd_geometry`] with the normal sign aligned to `reference(u, v)`.
pub fn fd_geometry_aligned(
    s: &SurfaceGrid,
    m: MetricKind,
    reference: impl Fn(f64, f64) -> Vec3,
) -> Result<FdGeometry> {
    fd_geometry_with(s, m, Stencil::Second, Some(reference))
}

/// General form: choice of stencil and optional reference orientation.
/// Interior nodes are those with a full stencil around them.
pub fn fd_geometry_with<F: Fn(f64, f64) -> Vec3>(
    s: &SurfaceGrid,
    m: MetricKind,
    stencil: Stencil,
    reference: Option<F>,
) -> Result<FdGeometry> {
    let grid = &s.grid;
    let w = stencil.half_width();
    grid.check(2 * w + 1)?;
    let interior = GridSpec::new(
        grid.nu - 2 * w,
        grid.nv - 2 * w,
        grid.u0 + w as f64 * grid.du,
        grid.v0 + w as f64 * grid.dv,
        grid.du,
        grid.dv,
    );
    let (du, dv) = (grid.du, grid.dv);
    let (d1, d2) = (stencil.first(), stencil.second());
    let mut nodes = Vec::with_capacity(interior.len());
    for j in w..grid.nv - w {
        for i in w..grid.nu - w {
            let x = |a: usize, b: usize| s.at(i + a - w, j + b - w);
            let mut xu = Vec3::ZERO;
            let mut xv = Vec3::ZERO;
            let mut xuu = Vec3::ZERO;
            let mut xvv = Vec3::ZERO;
            let mut xuv = Vec3::ZERO;
            for k in 0..=2 * w {
                xu += x(k, w) * (d1[k] / du);
                xv += x(w, k) * (d1[k] / dv);
                xuu += x(k, w) * (d2[k] / (du * du));
                xvv += x(w, k) * (d2[k] / (dv * dv));
                for l in 0..=2 * w {
                    if d1[k] != 0.0 && d1[l] != 0.0 {
                        xuv += x(k, l) * (d1[k] * d1[l] / (du * dv));
                    }
                }
            }
            let (u, v) = (grid.u(i), grid.v(j));
            let e = inner(m, xu, xu);
            let f = inner(m, xu, xv);
            let gg = inner(m, xv, xv);
            let det = e * gg - f * f;
            let scale = e * e + gg * gg + 2.0 * f * f;
            let mut raw = default_normal(m, xu, xv);
            if let Some(r) = &reference {
                if inner(MetricKind::Euclidean, raw, r(u, v)) < 0.0 {
                    raw = -raw;
                }
            }
            let normal = normalize(m, raw);
            let degenerate = !(det.abs() > DEGENERACY_TOL * scale) || normal.is_none();
            let n = normal.unwrap_or(Vec3::ZERO);
            let eps = inner(m, n, n);
            let l = inner(m, xuu, n);
            let mm = inner(m, xuv, n);
            let nn = inner(m, xvv, n);
            let (mean, gauss) = if degenerate {
                (f64::NAN, f64::NAN)
            } else {
                let tr = (gg * l - 2.0 * f * mm + e * nn) / det;
                (0.5 * tr, eps * (l * nn - mm * mm) / det)
            };
            nodes.push(FdNode {
                u,
                v,
                first: [e, f, gg],
                second: [l, mm, nn],
                mean,
                gauss,
                normal: n,
                degenerate,
            });
        }
    }
    Ok(FdGeometry {
        grid: interior,
        nodes,
    })
}

/// Parallel surface `x̌ = x + n/(2H)`.
pub fn companion(s: &SurfaceGrid, n: &GaussMapGrid, h: f64) -> Result<SurfaceGrid> {
    if s.nodes.len() != n.nodes.len() {
        return Err(KenmotsuError::ShapeMismatch {
            expected: s.nodes.len(),
            got: n.nodes.len(),
        });
    }
    if !(h.abs() >= MIN_ABS_H) {
        return Err(KenmotsuError::ZeroMeanCurvature { i: 0, j: 0, h });
    }
    let nodes = s
        .nodes
        .iter()
        .zip(&n.nodes)
        .map(|(&x, &nn)| x + nn / (2.0 * h))
        .collect();
    Ok(SurfaceGrid {
        grid: s.grid,
        nodes,
    })
}

// ---------------------------------------------------------------------------
// Grid files.

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum HFile {
    Constant(f64),
    Nodes(Vec<f64>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GridFile {
    schema: String,
    #[serde(flatten)]
    grid: GridSpec,
    metric: MetricKind,
    signature: DomainSignature,
    target: Target,
    normals: Vec<[f64; 3]>,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    h: Option<HFile>,
}

/// A Gauss-map grid file together with its optional mean curvature.
#[derive(Debug, Clone)]
pub struct GridData {
    pub gauss: GaussMapGrid,
    pub h: Option<HField>,
}

pub fn grid_to_json(g: &GaussMapGrid, h: Option<&HField>) -> String {
    let file = GridFile {
        schema: GRID_SCHEMA.to_string(),
        grid: g.grid,
        metric: g.metric,
        signature: g.signature,
        target: g.target,
        normals: g.nodes.iter().map(|n| n.to_array()).collect(),
        h: h.map(|h| match h {
            HField::Constant(c) => HFile::Constant(*c),
            HField::Nodes(v) => HFile::Nodes(v.clone()),
        }),
    };
    serde_json::to_string_pretty(&file).expect("grid serialization is infallible")
}

pub fn grid_from_json(text: &str) -> Result<GridData> {
    let file: GridFile = serde_json::from_str(text).map_err(|e| KenmotsuError::Parse {
        line: e.line() as u64,
        message: e.to_string(),
    })?;
    if file.schema != GRID_SCHEMA {
        return Err(KenmotsuError::Parse {
            line: 1,
            message: format!("unsupported schema {:?}, expected {GRID_SCHEMA:?}", file.schema),
        });
    }
    let nodes = file.normals.iter().map(|&a| Vec3::from(a)).collect();
    let gauss = GaussMapGrid::new(file.grid, nodes, file.metric, file.signature, file.target)?;
    let h = file.h.map(|h| match h {
        HFile::Constant(c) => HField::Constant(c),
        HFile::Nodes(v) => HField::Nodes(v),
    });
    Ok(GridData { gauss, h })
}

/// CSV with header `u,v,nx,ny,nz` and an optional `H` column. Rows must
/// cover a regular grid in storage order (`u` varying fastest).
pub fn grid_from_csv(
    text: &str,
    metric: MetricKind,
    signature: DomainSignature,
) -> Result<GridData> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let parse_err = |line: u64, message: String| KenmotsuError::Parse { line, message };
    let headers = reader
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    let names: Vec<&str> = headers.iter().collect();
    let with_h = match names.as_slice() {
        ["u", "v", "nx", "ny", "nz"] => false,
        ["u", "v", "nx", "ny", "nz", "H"] => true,
        _ => {
            return Err(parse_err(
                1,
                format!("expected header u,v,nx,ny,nz[,H], got {}", names.join(",")),
            ))
        }
    };
    let mut rows: Vec<(f64, f64, Vec3, Option<f64>)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let mut vals = Vec::with_capacity(record.len());
        for (field, name) in record.iter().zip(&names) {
            let x: f64 = field
                .parse()
                .map_err(|_| parse_err(line, format!("column {name}: cannot parse {field:?}")))?;
            vals.push(x);
        }
        rows.push((
            vals[0],
            vals[1],
            Vec3::new(vals[2], vals[3], vals[4]),
            with_h.then(|| vals[5]),
        ));
    }
    if rows.is_empty() {
        return Err(parse_err(2, "no data rows".into()));
    }
    let (u0, v0) = (rows[0].0, rows[0].1);
    let nu = rows.iter().take_while(|r| r.1 == v0).count();
    if rows.len() % nu != 0 {
        return Err(parse_err(
            rows.len() as u64 + 1,
            format!("{} rows do not fill a grid with {nu} nodes per row", rows.len()),
        ));
    }
    let nv = rows.len() / nu;
    let du = if nu > 1 { rows[1].0 - u0 } else { 1.0 };
    let dv = if nv > 1 { rows[nu].1 - v0 } else { 1.0 };
    let grid = GridSpec::new(nu, nv, u0, v0, du, dv);
    for (k, r) in rows.iter().enumerate() {
        let (i, j) = (k % nu, k / nu);
        let tol = 1e-9 * (1.0 + grid.u(i).abs() + grid.v(j).abs());
        if (r.0 - grid.u(i)).abs() > tol || (r.1 - grid.v(j)).abs() > tol {
            return Err(parse_err(
                k as u64 + 2,
                format!("node ({}, {}) does not lie on the regular grid", r.0, r.1),
            ));
        }
    }
    let target = Target::for_case(metric, signature).ok_or(KenmotsuError::InvalidCase {
        metric,
        signature,
        target: Target::S2,
    })?;
    let gauss = GaussMapGrid::new(
        grid,
        rows.iter().map(|r| r.2).collect(),
        metric,
        signature,
        target,
    )?;
    let h = with_h.then(|| HField::Nodes(rows.iter().map(|r| r.3.unwrap_or(0.0)).collect()));
    Ok(GridData { gauss, h })
}

pub fn grid_to_csv(g: &GaussMapGrid, h: Option<&HField>) -> String {
    let mut out = String::from(if h.is_some() {
        "u,v,nx,ny,nz,H\n"
    } else {
        "u,v,nx,ny,nz\n"
    });
    for (i, j, u, v) in g.grid.points() {
        let idx = g.grid.idx(i, j);
        let n = g.nodes[idx];
        out.push_str(&format!("{u},{v},{},{},{}", n.x, n.y, n.z));
        if let Some(h) = h {
            out.push_str(&format!(",{}", h.at(idx)));
        }
        out.push('\n');
    }
    out
}

/// Load a grid file, choosing the format by extension (`.json` or `.csv`).
/// CSV files carry no metadata, so `metric` and `signature` are used.
pub fn load_grid(
    path: &Path,
    metric: MetricKind,
    signature: DomainSignature,
) -> Result<GridData> {
    let text = fs::read_to_string(path).map_err(|source| KenmotsuError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => grid_from_csv(&text, metric, signature),
        _ => grid_from_json(&text),
    }
}
