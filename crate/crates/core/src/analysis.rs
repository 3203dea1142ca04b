//! Parameter studies of the Carlier bound: sweeps over `γ`, limits at
//! `γ → 0⁺` and `γ → +∞`, boundary regressions and proximal-gradient
//! certificates.

use serde::{Deserialize, Serialize};

use crate::bounds::{bregman_distance, carlier_bound};
use crate::catalog::{make_burg, make_shannon, subdifferential_operator, ConvexFunction, Operator};
use crate::error::{Error, Result};
use crate::lambert::lambert_w_exp;
use crate::numeric::{check_gamma, Vector};

/// Endpoint values above this, increasing toward the endpoint, count as
/// divergence.
pub const DIVERGENCE_THRESHOLD: f64 = 1e9;

/// Number of endpoint values inspected by the classifier.
const ENDPOINT_WINDOW: usize = 5;

/// Range of step parameters swept when classifying the `γ → 0⁺` limit.
pub const LIMIT_SWEEP: (f64, f64, usize) = (1e-14, 1e-2, 49);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum LimitClass {
    ConvergesTo(f64),
    Diverges,
    Undetermined,
    /// Point on the boundary of the relevant domain; no prediction is made.
    Boundary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub gammas: Vec<f64>,
    pub values: Vec<f64>,
    pub argmax_gamma: f64,
    pub max_value: f64,
    pub limit_zero: LimitClass,
    pub limit_infinity: LimitClass,
}

/// Header record written alongside the `(gamma, value)` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepHeader {
    pub count: usize,
    pub gamma_lo: f64,
    pub gamma_hi: f64,
    pub argmax_gamma: f64,
    pub max_value: f64,
    pub limit_zero: LimitClass,
    pub limit_infinity: LimitClass,
}

impl SweepResult {
    pub const CSV_HEADER: &'static str = "gamma,value";

    pub fn csv_rows(&self) -> Vec<String> {
        self.gammas
            .iter()
            .zip(&self.values)
            .map(|(g, v)| format!("{g:?},{v:?}"))
            .collect()
    }

    pub fn header(&self) -> SweepHeader {
        SweepHeader {
            count: self.gammas.len(),
            gamma_lo: self.gammas[0],
            gamma_hi: *self.gammas.last().expect("nonempty sweep"),
            argmax_gamma: self.argmax_gamma,
            max_value: self.max_value,
            limit_zero: self.limit_zero,
            limit_infinity: self.limit_infinity,
        }
    }
}

/// `count` log-spaced points from `lo` to `hi`, both included.
pub fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..count)
        .map(|i| match i {
            0 => lo,
            i if i + 1 == count => hi,
            i => 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64),
        })
        .collect()
}

/// Classifies the limit from values ordered toward the endpoint.
fn classify_endpoint(toward_end: &[f64]) -> LimitClass {
    let v = *toward_end.last().expect("nonempty window");
    let increasing = toward_end.windows(2).all(|w| w[1] > w[0]);
    if toward_end.iter().all(|&c| c > DIVERGENCE_THRESHOLD) && increasing {
        return LimitClass::Diverges;
    }
    let lo = toward_end.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = toward_end.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo < 1e-6 * (1.0 + v.abs()) {
        LimitClass::ConvergesTo(v)
    } else {
        LimitClass::Undetermined
    }
}

pub fn gamma_sweep(
    a: &Operator,
    x: &Vector,
    x_star: &Vector,
    lo: f64,
    hi: f64,
    count: usize,
) -> Result<SweepResult> {
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!("sweep needs 0 < lo < hi, got [{lo}, {hi}]")));
    }
    if count < 3 {
        return Err(Error::InvalidArgument("sweep needs at least 3 points".into()));
    }
    let gammas = log_space(lo, hi, count);
    let values = gammas
        .iter()
        .map(|&g| carlier_bound(a, g, x, x_star))
        .collect::<Result<Vec<_>>>()?;

    let (imax, &max_value) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("count >= 3");
    let w = ENDPOINT_WINDOW.min(count);
    let near_zero: Vec<f64> = values[..w].iter().rev().copied().collect();
    let near_inf = &values[count - w..];
    Ok(SweepResult {
        argmax_gamma: gammas[imax],
        max_value,
        limit_zero: classify_endpoint(&near_zero),
        limit_infinity: classify_endpoint(near_inf),
        gammas,
        values,
    })
}

/// Predicted and observed behaviour of a limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub predicted: LimitClass,
    pub empirical: LimitClass,
    /// Carlier bound at the sweep point nearest the limit.
    pub endpoint_value: f64,
    /// `None` for boundary points, where nothing is predicted.
    pub agree: Option<bool>,
}

fn agreement(predicted: LimitClass, empirical: LimitClass) -> Option<bool> {
    match (predicted, empirical) {
        (LimitClass::Boundary, _) => None,
        (LimitClass::Diverges, e) => Some(e == LimitClass::Diverges),
        (LimitClass::ConvergesTo(p), LimitClass::ConvergesTo(e)) => {
            Some((p - e).abs() <= 1e-6 * (1.0 + p.abs()))
        }
        _ => Some(false),
    }
}

/// Limit of `C_{A,γ}(x, x*)` as `γ → 0⁺`: `+inf` off `cl dom A`, `0` on
/// `dom A`, no prediction on the boundary.
pub fn classify_limit_zero(a: &Operator, x: &Vector, x_star: &Vector) -> Result<LimitReport> {
    use crate::catalog::Membership;
    let predicted = match a.domain(x) {
        Membership::Inside => LimitClass::ConvergesTo(0.0),
        Membership::Outside => LimitClass::Diverges,
        Membership::Boundary => LimitClass::Boundary,
    };
    let (lo, hi, count) = LIMIT_SWEEP;
    let sweep = gamma_sweep(a, x, x_star, lo, hi, count)?;
    Ok(LimitReport {
        predicted,
        empirical: sweep.limit_zero,
        endpoint_value: sweep.values[0],
        agree: agreement(predicted, sweep.limit_zero),
    })
}

/// Limit as `γ → +∞`, through `C_{A,γ}(x, x*) = C_{A⁻¹,1/γ}(x*, x)`.
pub fn classify_limit_infinity(a: &Operator, x: &Vector, x_star: &Vector) -> Result<LimitReport> {
    classify_limit_zero(&a.inverse(), x_star, x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryRow {
    pub entry: String,
    pub gamma: f64,
    pub y: f64,
    /// `C_{∂f,γ}(0, y)` through the generic resolvent path.
    pub value: f64,
    /// The closed-form expression for the same quantity.
    pub closed_form: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryReport {
    pub rows: Vec<BoundaryRow>,
}

impl BoundaryReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

pub const BOUNDARY_GAMMAS: [f64; 4] = [1e-2, 1e-4, 1e-6, 1e-8];
pub const BOUNDARY_YS: [f64; 3] = [-1.0, 0.0, 1.0];

/// `C(0, y)` for Burg (limit 1) and Shannon (limit 0) along shrinking `γ`.
pub fn boundary_limit_regressions() -> Result<BoundaryReport> {
    let burg = subdifferential_operator(make_burg());
    let shannon = subdifferential_operator(make_shannon());
    let origin = Vector::scalar(0.0);
    let mut rows = Vec::new();
    for &gamma in &BOUNDARY_GAMMAS {
        for &y in &BOUNDARY_YS {
            let ys = Vector::scalar(y);
            let value = carlier_bound(&burg, gamma, &origin, &ys)?;
            let sg = gamma.sqrt();
            let closed_form = (0.5 * (sg * y + (gamma * y * y + 4.0).sqrt())).powi(2);
            let mut pass = (value - closed_form).abs() <= 1e-10;
            if gamma <= 1e-8 {
                pass &= (value - 1.0).abs() <= 1e-3;
            }
            rows.push(BoundaryRow {
                entry: "burg".into(),
                gamma,
                y,
                value,
                closed_form,
                pass,
            });

            let value = carlier_bound(&shannon, gamma, &origin, &ys)?;
            let w = lambert_w_exp(y - gamma.ln());
            let closed_form = gamma * w * w;
            let mut pass = value.is_finite() && (value - closed_form).abs() <= 1e-10 * (1.0 + closed_form);
            if gamma <= 1e-6 {
                pass &= value < 1e-3;
            }
            rows.push(BoundaryRow {
                entry: "shannon".into(),
                gamma,
                y,
                value,
                closed_form,
                pass,
            });
        }
    }
    Ok(BoundaryReport { rows })
}

/// Proximal-gradient iterates with their Bregman distances and Carlier
/// certificates to a reference solution.
#[derive(Debug, Clone, PartialEq)]
pub struct PgmTrace {
    pub x_ref: Vector,
    pub iterates: Vec<Vector>,
    /// `D_f(x_ref, y_n)`.
    pub bregman: Vec<f64>,
    /// `C_{∂f,γ}(x_ref, ∇f(y_n))`.
    pub certificates: Vec<f64>,
    pub certificate_sums: Vec<f64>,
    pub bregman_sums: Vec<f64>,
}

impl PgmTrace {
    pub const CSV_HEADER: &'static str = "n,d_n,c_n,partial_sum";

    pub fn csv_rows(&self) -> Vec<String> {
        (0..self.iterates.len())
            .map(|n| {
                format!(
                    "{n},{:?},{:?},{:?}",
                    self.bregman[n], self.certificates[n], self.certificate_sums[n]
                )
            })
            .collect()
    }
}

const PGM_DIVERGENCE_NORM: f64 = 1e12;

fn pgm_run(
    f_smooth: &ConvexFunction,
    f_prox: &ConvexFunction,
    step: f64,
    y0: &Vector,
    iters: usize,
) -> Result<Vec<Vector>> {
    let mut ys = Vec::with_capacity(iters);
    let mut y = y0.clone();
    ys.push(y.clone());
    for n in 1..iters {
        let grad = f_smooth.gradient(&y).ok_or_else(|| Error::MissingGradient {
            function: f_smooth.name(),
        })?;
        y = f_prox.prox(step, &y.axpy(-step, &grad))?;
        if !y.is_finite() || y.norm() > PGM_DIVERGENCE_NORM {
            return Err(Error::Divergence(format!(
                "proximal-gradient iterate {n} has norm {}",
                y.norm()
            )));
        }
        ys.push(y.clone());
    }
    Ok(ys)
}

/// Runs `y_{n+1} = Prox_{step·g}(y_n - step ∇f(y_n))` for `iters` iterates
/// (`y_0` included) and certifies each one against the final iterate of a
/// run ten times longer.
pub fn pgm_certificates(
    f_smooth: &ConvexFunction,
    f_prox: &ConvexFunction,
    step: f64,
    gamma: f64,
    y0: &Vector,
    iters: usize,
) -> Result<PgmTrace> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {step}")));
    }
    check_gamma(gamma)?;
    if iters == 0 {
        return Err(Error::InvalidArgument("iters must be at least 1".into()));
    }
    if f_smooth.dim() != f_prox.dim() {
        return Err(Error::DimensionMismatch {
            expected: f_smooth.dim(),
            found: f_prox.dim(),
        });
    }
    y0.expect_dim(f_smooth.dim())?;

    let x_ref = pgm_run(f_smooth, f_prox, step, y0, 10 * iters)?
        .pop()
        .expect("at least one iterate");
    let iterates = pgm_run(f_smooth, f_prox, step, y0, iters)?;
    let smooth_op = subdifferential_operator(f_smooth.clone());

    let mut bregman = Vec::with_capacity(iters);
    let mut certificates = Vec::with_capacity(iters);
    for y in &iterates {
        let d = bregman_distance(f_smooth, &x_ref, y)?;
        let d = d.finite().ok_or_else(|| {
            Error::InvalidArgument("reference point lies outside dom f_smooth".into())
        })?;
        let grad = f_smooth.gradient(y).ok_or_else(|| Error::MissingGradient {
            function: f_smooth.name(),
        })?;
        bregman.push(d);
        certificates.push(carlier_bound(&smooth_op, gamma, &x_ref, &grad)?);
    }
    let running = |v: &[f64]| {
        v.iter()
            .scan(0.0, |acc, &t| {
                *acc += t;
                Some(*acc)
            })
            .collect::<Vec<_>>()
    };
    Ok(PgmTrace {
        certificate_sums: running(&certificates),
        bregman_sums: running(&bregman),
        x_ref,
        iterates,
        bregman,
        certificates,
    })
}
