//! Brute-force numerics used to check the closed forms.
//!
//! Nothing in `bounds`, `cyclic` or `analysis` calls into this module.

use serde::{Deserialize, Serialize};

use crate::catalog::{ConvexFunction, Operator};
use crate::error::{Error, Result};
use crate::numeric::{check_gamma, ExtReal, Tolerances, Vector};

/// Sampled Fitzpatrick values above this are reported as divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;

const GOLDEN_ITERS: usize = 120;
const MAX_SWEEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points_per_axis: usize,
    pub refine_rounds: usize,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, points_per_axis: usize, refine_rounds: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::InvalidArgument(format!("grid needs lo < hi, got [{lo}, {hi}]")));
        }
        if points_per_axis < 3 {
            return Err(Error::InvalidArgument("grid needs at least 3 points per axis".into()));
        }
        Ok(GridSpec {
            lo,
            hi,
            points_per_axis,
            refine_rounds,
        })
    }

    /// `[-50, 50]`, 20001 points, 3 refinements.
    pub fn default_1d() -> Self {
        GridSpec {
            lo: -50.0,
            hi: 50.0,
            points_per_axis: 20_001,
            refine_rounds: 3,
        }
    }

    /// `[-50, 50]²`, 201 points per axis, 3 refinements.
    pub fn default_2d() -> Self {
        GridSpec {
            points_per_axis: 201,
            ..Self::default_1d()
        }
    }

    pub fn default_for_dim(dim: usize) -> Self {
        if dim == 1 {
            Self::default_1d()
        } else {
            Self::default_2d()
        }
    }

    fn spacing(&self, lo: f64, hi: f64) -> f64 {
        (hi - lo) / (self.points_per_axis - 1) as f64
    }
}

/// Result of a grid supremum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum OracleEstimate {
    Value(f64),
    /// The best point sat on the outer grid boundary: the supremum is
    /// probably `+inf`.
    DivergenceSuspected { incumbent: Vec<f64>, value: f64 },
}

impl OracleEstimate {
    pub fn value(&self) -> Option<f64> {
        match self {
            OracleEstimate::Value(v) => Some(*v),
            OracleEstimate::DivergenceSuspected { .. } => None,
        }
    }

    /// Agreement with a closed-form value: equal within `tol`, or both
    /// infinite.
    pub fn agrees_with(&self, closed_form: ExtReal, tol: f64) -> bool {
        match (self, closed_form) {
            (OracleEstimate::Value(v), ExtReal::Finite(c)) => (v - c).abs() <= tol,
            (OracleEstimate::DivergenceSuspected { .. }, ExtReal::PosInf) => true,
            _ => false,
        }
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let h = (hi - lo) / (n - 1) as f64;
    (0..n).map(move |i| if i + 1 == n { hi } else { lo + h * i as f64 })
}

/// Grid estimate of `f*(x*) = sup_x ⟨x, x*⟩ - f(x)` for `dim f ≤ 2`.
///
/// Each refinement rescans a window ten times narrower around the incumbent.
pub fn numeric_conjugate(f: &ConvexFunction, x_star: &Vector, grid: &GridSpec) -> Result<OracleEstimate> {
    let dim = f.dim();
    if dim > 2 {
        return Err(Error::InvalidArgument(format!("grid conjugate supports dim <= 2, got {dim}")));
    }
    x_star.expect_dim(dim)?;
    let objective = |x: &Vector| match f.eval(x) {
        ExtReal::Finite(v) => x.dot(x_star) - v,
        ExtReal::PosInf => f64::NEG_INFINITY,
    };

    let edge = grid.spacing(grid.lo, grid.hi);
    let near_edge = |p: &Vector| {
        p.coords()
            .iter()
            .any(|&c| c - grid.lo < edge || grid.hi - c < edge)
    };

    let mut window: Vec<(f64, f64)> = vec![(grid.lo, grid.hi); dim];
    let mut best: Option<(Vector, f64)> = None;
    let mut interior_best = f64::NEG_INFINITY;
    for round in 0..=grid.refine_rounds {
        let axes: Vec<Vec<f64>> = window
            .iter()
            .map(|&(lo, hi)| linspace(lo, hi, grid.points_per_axis).collect())
            .collect();
        let mut round_best: Option<(Vector, f64)> = None;
        let mut consider = |p: Vector| {
            let val = objective(&p);
            if !near_edge(&p) {
                interior_best = interior_best.max(val);
            }
            // Strict comparison keeps the first maximizer in grid order.
            if val > f64::NEG_INFINITY && round_best.as_ref().is_none_or(|(_, b)| val > *b) {
                round_best = Some((p, val));
            }
        };
        if dim == 1 {
            for &a in &axes[0] {
                consider(Vector::scalar(a));
            }
        } else {
            for &a in &axes[0] {
                for &b in &axes[1] {
                    consider(Vector::from_raw(vec![a, b]));
                }
            }
        }
        if let Some(rb) = round_best {
            if best.as_ref().is_none_or(|(_, b)| rb.1 >= *b) {
                best = Some(rb);
            }
        }
        let Some((center, _)) = &best else {
            return Err(Error::InvalidArgument(format!(
                "no grid point lies in dom {}",
                f.name()
            )));
        };
        if round < grid.refine_rounds {
            window = window
                .iter()
                .enumerate()
                .map(|(i, &(lo, hi))| {
                    let half = (hi - lo) / 20.0;
                    ((center[i] - half).max(grid.lo), (center[i] + half).min(grid.hi))
                })
                .collect();
        }
    }

    let (incumbent, value) = best.expect("set in the loop");
    // A flat objective can put the first maximizer on the edge; only an edge
    // value strictly above every interior value suggests divergence.
    let escapes = near_edge(&incumbent) && value > interior_best + 1e-12 * (1.0 + value.abs());
    Ok(if escapes {
        OracleEstimate::DivergenceSuspected {
            incumbent: incumbent.into_coords(),
            value,
        }
    } else {
        OracleEstimate::Value(value)
    })
}

/// Minimizes a convex `phi` on one axis: grid scan, then golden section on
/// the two cells around the best grid point. Returns the best point seen.
fn minimize_axis(mut phi: impl FnMut(f64) -> f64, lo: f64, hi: f64, points: usize, start: f64) -> f64 {
    let mut best = (start, phi(start));
    let h = (hi - lo) / (points - 1) as f64;
    for t in linspace(lo, hi, points) {
        let v = phi(t);
        if v < best.1 {
            best = (t, v);
        }
    }
    if !best.1.is_finite() {
        return start;
    }

    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (best.0 - h, best.0 + h);
    for _ in 0..GOLDEN_ITERS {
        let c = b - ratio * (b - a);
        let d = a + ratio * (b - a);
        let (fc, fd) = (phi(c), phi(d));
        for (t, v) in [(c, fc), (d, fd)] {
            if v < best.1 {
                best = (t, v);
            }
        }
        if fc.is_infinite() && fd.is_infinite() {
            if best.0 > d {
                a = c;
            } else {
                b = d;
            }
        } else if fc < fd {
            b = d;
        } else {
            a = c;
        }
    }
    best.0
}

/// Approximate `Prox_{γf}(z)` by minimizing `½‖p - z‖² + γ f(p)` directly:
/// golden section for `dim 1`, cyclic coordinate golden section for
/// `dim ≤ 3`.
pub fn numeric_prox(f: &ConvexFunction, gamma: f64, z: &Vector, grid: &GridSpec) -> Result<Vector> {
    check_gamma(gamma)?;
    let dim = f.dim();
    if dim > 3 {
        return Err(Error::InvalidArgument(format!("coordinate prox oracle supports dim <= 3, got {dim}")));
    }
    z.expect_dim(dim)?;
    let objective = |p: &Vector| match f.eval(p) {
        ExtReal::Finite(v) => 0.5 * (p - z).norm_sq() + gamma * v,
        ExtReal::PosInf => f64::INFINITY,
    };

    let mut p = Vector::zeros(dim);
    let sweeps = if dim == 1 { 1 } else { MAX_SWEEPS };
    for _ in 0..sweeps {
        let before = p.clone();
        for i in 0..dim {
            let mut coords = p.clone().into_coords();
            let start = coords[i];
            let t = minimize_axis(
                |t| {
                    coords[i] = t;
                    objective(&Vector::from_raw(coords.clone()))
                },
                grid.lo,
                grid.hi,
                grid.points_per_axis,
                start,
            );
            let mut next = p.into_coords();
            next[i] = t;
            p = Vector::from_raw(next);
        }
        if p.dist(&before) == 0.0 {
            break;
        }
    }
    Ok(p)
}

/// Lower estimate of `F_A(x, x*) - ⟨x, x*⟩` from explicit graph samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitzpatrickEstimate {
    pub value: f64,
    /// `value` exceeded the divergence threshold.
    pub divergent: bool,
}

/// `max over samples of ⟨x, a*⟩ + ⟨a, x*⟩ - ⟨a, a*⟩ - ⟨x, x*⟩`.
pub fn sampled_fitzpatrick(
    a: &Operator,
    x: &Vector,
    x_star: &Vector,
    graph_samples: &[(Vector, Vector)],
    tol: &Tolerances,
) -> Result<FitzpatrickEstimate> {
    if graph_samples.is_empty() {
        return Err(Error::InvalidArgument("no graph samples".into()));
    }
    x.expect_dim(a.dim())?;
    x_star.expect_dim(a.dim())?;
    let mut value = f64::NEG_INFINITY;
    for (index, (p, p_star)) in graph_samples.iter().enumerate() {
        if !a.graph_contains(p, p_star, tol) {
            return Err(Error::NotInGraph {
                operator: a.name(),
                index,
            });
        }
        value = value.max(-(x - p).dot(&(x_star - p_star)));
    }
    Ok(FitzpatrickEstimate {
        value,
        divergent: value > DIVERGENCE_THRESHOLD,
    })
}

/// Graph points `(J_{γA} z, (z - J_{γA} z)/γ)` for every `z` and `γ`.
pub fn minty_graph_samples(a: &Operator, centers: &[Vector], gammas: &[f64]) -> Result<Vec<(Vector, Vector)>> {
    let mut out = Vec::with_capacity(centers.len() * gammas.len());
    for z in centers {
        for &g in gammas {
            let p = a.resolvent(g, z)?;
            let p_star = (z - &p).scale(1.0 / g);
            out.push((p, p_star));
        }
    }
    Ok(out)
}
