//! Sequences of graph points generated by repeated Minty steps, and the
//! series lower bound they certify.

use serde::{Deserialize, Serialize};

use crate::bounds::carlier_bound;
use crate::catalog::Operator;
use crate::error::{Error, Result};
use crate::numeric::{check_gamma, Tolerances, Vector};

/// Step parameters `γ₁, γ₂, ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GammaSchedule {
    Constant(f64),
    Explicit(Vec<f64>),
}

impl GammaSchedule {
    pub fn constant(gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(GammaSchedule::Constant(gamma))
    }

    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("gamma schedule is empty".into()));
        }
        for &g in &values {
            check_gamma(g)?;
        }
        Ok(GammaSchedule::Explicit(values))
    }

    /// The first `n` step parameters.
    pub fn take(&self, n: usize) -> Result<Vec<f64>> {
        match self {
            GammaSchedule::Constant(g) => {
                check_gamma(*g)?;
                Ok(vec![*g; n])
            }
            GammaSchedule::Explicit(values) => {
                if values.len() < n {
                    return Err(Error::InvalidArgument(format!(
                        "schedule has {} values, {n} requested",
                        values.len()
                    )));
                }
                for &g in &values[..n] {
                    check_gamma(g)?;
                }
                Ok(values[..n].to_vec())
            }
        }
    }
}

/// `(a_k, a_k*)` for `k = 1..n` together with the per-step bound terms.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicSequence {
    pub x: Vector,
    pub x_star: Vector,
    pub gammas: Vec<f64>,
    pub pairs: Vec<(Vector, Vector)>,
    /// `‖x - a_k‖² / γ_k`.
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
}

/// Runs `a_k = J_{γ_k A}(x + γ_k a*_{k-1})`, `a_k* = (x + γ_k a*_{k-1} - a_k)/γ_k`
/// from `a_0* = x*`.
pub fn generate_cyclic_sequence(
    a: &Operator,
    x: &Vector,
    x_star: &Vector,
    schedule: &GammaSchedule,
    n_terms: usize,
) -> Result<CyclicSequence> {
    if n_terms == 0 {
        return Err(Error::InvalidArgument("n_terms must be at least 1".into()));
    }
    x.expect_dim(a.dim())?;
    x_star.expect_dim(a.dim())?;
    let gammas = schedule.take(n_terms)?;

    let mut pairs = Vec::with_capacity(n_terms);
    let mut terms = Vec::with_capacity(n_terms);
    let mut partial_sums = Vec::with_capacity(n_terms);
    let mut prev_star = x_star.clone();
    let mut sum = 0.0;
    for &gamma in &gammas {
        let residual = a.resolvent_residual(gamma, x, &prev_star)?;
        let point = x - &residual;
        // x + γ a*_{k-1} - a_k = r + γ a*_{k-1}
        let point_star = prev_star.axpy(1.0 / gamma, &residual);
        let term = residual.norm_sq() / gamma;
        sum += term;
        terms.push(term);
        partial_sums.push(sum);
        pairs.push((point, point_star.clone()));
        prev_star = point_star;
    }
    Ok(CyclicSequence {
        x: x.clone(),
        x_star: x_star.clone(),
        gammas,
        pairs,
        terms,
        partial_sums,
    })
}

impl CyclicSequence {
    pub const CSV_HEADER: &'static str = "k,gamma_k,term_k,partial_sum_k";

    pub fn partial_sum(&self) -> f64 {
        *self.partial_sums.last().expect("sequence is nonempty")
    }

    /// One row per step, `k` starting at 1.
    pub fn csv_rows(&self) -> Vec<String> {
        (0..self.terms.len())
            .map(|i| {
                format!(
                    "{},{:?},{:?},{:?}",
                    i + 1,
                    self.gammas[i],
                    self.terms[i],
                    self.partial_sums[i]
                )
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesBound {
    pub partial_sum: f64,
    pub terms: Vec<f64>,
}

/// Truncated series lower bound on `F_{A,n+1}(x, x*) - ⟨x, x*⟩`. The first
/// term is the Carlier bound at `γ₁`.
pub fn series_bound(
    a: &Operator,
    x: &Vector,
    x_star: &Vector,
    schedule: &GammaSchedule,
    n_terms: usize,
) -> Result<SeriesBound> {
    let seq = generate_cyclic_sequence(a, x, x_star, schedule, n_terms)?;
    // Same computation path, so this is bitwise equal.
    debug_assert_eq!(
        seq.terms[0],
        carlier_bound(a, seq.gammas[0], x, x_star).unwrap_or(f64::NAN)
    );
    Ok(SeriesBound {
        partial_sum: seq.partial_sum(),
        terms: seq.terms,
    })
}

/// Both sides of the cyclic rearrangement identity for arbitrary points
/// `(a_1, a_1*), ..., (a_m, a_m*)`:
///
/// lhs = `⟨x - a_m, a_m*⟩ + ⟨a_1 - x, x*⟩ + Σ_{k<m} ⟨a_{k+1} - a_k, a_k*⟩`
///
/// rhs = `⟨a_1 - x, x* - a_1*⟩ + Σ_{k≥2} ⟨a_k - x, a*_{k-1} - a_k*⟩`
pub fn ncyclic_identity_check(
    x: &Vector,
    x_star: &Vector,
    points: &[(Vector, Vector)],
) -> Result<(f64, f64)> {
    let (first, last) = match (points.first(), points.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::InvalidArgument("need at least one point".into())),
    };
    x.check_dim(x_star)?;
    for (p, p_star) in points {
        x.check_dim(p)?;
        x.check_dim(p_star)?;
    }

    let mut lhs = (x - &last.0).dot(&last.1) + (&first.0 - x).dot(x_star);
    for w in points.windows(2) {
        lhs += (&w[1].0 - &w[0].0).dot(&w[0].1);
    }
    let rhs = cyclic_rhs(x, x_star, points);
    Ok((lhs, rhs))
}

fn cyclic_rhs(x: &Vector, x_star: &Vector, points: &[(Vector, Vector)]) -> f64 {
    let first = &points[0];
    let mut rhs = (&first.0 - x).dot(&(x_star - &first.1));
    for w in points.windows(2) {
        rhs += (&w[1].0 - x).dot(&(&w[0].1 - &w[1].1));
    }
    rhs
}

/// Certified lower estimate of `F_{A,n}(x, x*) - ⟨x, x*⟩` from `n - 1` graph
/// points.
pub fn fitzpatrick_n_lower(
    a: &Operator,
    x: &Vector,
    x_star: &Vector,
    points: &[(Vector, Vector)],
    tol: &Tolerances,
) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("need at least one graph point".into()));
    }
    x.expect_dim(a.dim())?;
    x_star.expect_dim(a.dim())?;
    for (index, (p, p_star)) in points.iter().enumerate() {
        if !a.graph_contains(p, p_star, tol) {
            return Err(Error::NotInGraph {
                operator: a.name(),
                index,
            });
        }
    }
    Ok(cyclic_rhs(x, x_star, points))
}
