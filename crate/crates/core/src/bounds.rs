//! Fenchel-Young gap, Carlier bound, Minty decomposition, Fitzpatrick
//! bounds and Bregman distance.

use serde::{Deserialize, Serialize};

use crate::catalog::{ConvexFunction, Operator};
use crate::error::{Error, Result};
use crate::numeric::{check_gamma, ExtReal, Tolerances, Vector};

fn check_pair(dim: usize, x: &Vector, x_star: &Vector) -> Result<()> {
    x.expect_dim(dim)?;
    x_star.expect_dim(dim)
}

/// `G_f(x, x*) = f(x) + f*(x*) - ⟨x, x*⟩`.
pub fn gap(f: &ConvexFunction, x: &Vector, x_star: &Vector) -> Result<ExtReal> {
    check_pair(f.dim(), x, x_star)?;
    Ok(f.fenchel_young_gap(x, x_star))
}

/// `C_{A,γ}(x, x*) = ‖x - J_{γA}(x + γx*)‖² / γ`.
pub fn carlier_bound(a: &Operator, gamma: f64, x: &Vector, x_star: &Vector) -> Result<f64> {
    check_gamma(gamma)?;
    check_pair(a.dim(), x, x_star)?;
    Ok(a.resolvent_residual(gamma, x, x_star)?.norm_sq() / gamma)
}

/// The graph point `(a, a*)` that the Minty parametrization assigns to
/// `x + γx*`.
#[derive(Debug, Clone, PartialEq)]
pub struct MintyPair {
    pub a: Vector,
    pub a_star: Vector,
    pub gamma: f64,
    pub x: Vector,
    pub x_star: Vector,
}

impl MintyPair {
    /// `‖x - a‖²`.
    pub fn residual_sq(&self) -> f64 {
        (&self.x - &self.a).norm_sq()
    }

    /// `‖(x + γx*) - (a + γa*)‖`, zero in exact arithmetic.
    pub fn sum_defect(&self) -> f64 {
        let lhs = self.x.axpy(self.gamma, &self.x_star);
        let rhs = self.a.axpy(self.gamma, &self.a_star);
        (&lhs - &rhs).norm()
    }

    /// `⟨a - x, x* - a*⟩`.
    pub fn key_inner(&self) -> f64 {
        (&self.a - &self.x).dot(&(&self.x_star - &self.a_star))
    }

    /// `‖(x, x*) - (a, a*)‖²`.
    pub fn pair_distance_sq(&self) -> f64 {
        (&self.x - &self.a).norm_sq() + (&self.x_star - &self.a_star).norm_sq()
    }

    /// `‖(x - a) - (x* - a*)‖²`.
    pub fn cross_distance_sq(&self) -> f64 {
        let dx = &self.x - &self.a;
        let ds = &self.x_star - &self.a_star;
        (&dx - &ds).norm_sq()
    }
}

/// `a = J_{γA}(x + γx*)`, `a* = (x + γx* - a)/γ`.
pub fn minty_decompose(a: &Operator, gamma: f64, x: &Vector, x_star: &Vector) -> Result<MintyPair> {
    check_gamma(gamma)?;
    check_pair(a.dim(), x, x_star)?;
    let z = x.axpy(gamma, x_star);
    let point = a.resolvent(gamma, &z)?;
    let point_star = (&z - &point).scale(1.0 / gamma);
    Ok(MintyPair {
        a: point,
        a_star: point_star,
        gamma,
        x: x.clone(),
        x_star: x_star.clone(),
    })
}

/// `(C_{A,γ}(x, x*), C_{A⁻¹,1/γ}(x*, x))`, the second computed through the
/// closed-form inverse of `A`.
pub fn dual_carlier_check(
    a: &Operator,
    gamma: f64,
    x: &Vector,
    x_star: &Vector,
) -> Result<(f64, f64)> {
    let lhs = carlier_bound(a, gamma, x, x_star)?;
    let rhs = carlier_bound(&a.inverse(), 1.0 / gamma, x_star, x)?;
    Ok((lhs, rhs))
}

/// `F_A(x, x*) - ⟨x, x*⟩` from the catalog closed form, if there is one.
pub fn fitzpatrick_bound(
    a: &Operator,
    x: &Vector,
    x_star: &Vector,
    tol: &Tolerances,
) -> Option<ExtReal> {
    if x.dim() != a.dim() || x_star.dim() != a.dim() {
        return None;
    }
    a.fitzpatrick_bound(x, x_star, tol)
}

/// Outcome of `G(x,x*) + G(y,y*) ≥ ⟨y - x, x* - y*⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCheck {
    pub lhs: ExtReal,
    pub rhs: f64,
    /// `lhs = rhs` within tolerance.
    pub equality: bool,
    /// `y* ∈ ∂f(x)` and `x* ∈ ∂f(y)`.
    pub cross_memberships: bool,
}

impl PairCheck {
    pub fn holds(&self, slack: f64) -> bool {
        self.lhs >= ExtReal::new(self.rhs - slack)
    }
}

pub fn pair_inequality_check(
    f: &ConvexFunction,
    x: &Vector,
    x_star: &Vector,
    y: &Vector,
    y_star: &Vector,
    tol: &Tolerances,
) -> Result<PairCheck> {
    check_pair(f.dim(), x, x_star)?;
    check_pair(f.dim(), y, y_star)?;
    let lhs = f.fenchel_young_gap(x, x_star) + f.fenchel_young_gap(y, y_star);
    let rhs = (y - x).dot(&(x_star - y_star));
    let scale = tol.abs_tol * (1.0 + x.norm() + x_star.norm() + y.norm() + y_star.norm());
    let equality = match lhs {
        ExtReal::Finite(l) => (l - rhs).abs() <= scale,
        ExtReal::PosInf => false,
    };
    let op = Operator::Subdifferential(f.clone());
    let cross_memberships = op.graph_contains(x, y_star, tol) && op.graph_contains(y, x_star, tol);
    Ok(PairCheck {
        lhs,
        rhs,
        equality,
        cross_memberships,
    })
}

/// `D_f(x, y) = f(x) - f(y) - ⟨x - y, ∇f(y)⟩`.
pub fn bregman_distance(f: &ConvexFunction, x: &Vector, y: &Vector) -> Result<ExtReal> {
    x.expect_dim(f.dim())?;
    y.expect_dim(f.dim())?;
    let grad = f.gradient(y).ok_or_else(|| Error::MissingGradient {
        function: f.name(),
    })?;
    let fy = f.eval(y).finite().ok_or_else(|| Error::MissingGradient {
        function: f.name(),
    })?;
    Ok(f.eval(x) - (fy + (x - y).dot(&grad)))
}

/// Gap, Fitzpatrick and Carlier bounds at one `(x, x*, γ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub x: Vector,
    pub x_star: Vector,
    pub gamma: f64,
    /// `None` when the operator is not a subdifferential.
    pub gap: Option<ExtReal>,
    pub fitzpatrick: Option<ExtReal>,
    pub carlier: f64,
    /// `x* ∈ Ax`, equivalently the gap vanishes.
    pub gap_zero: bool,
    /// The two memberships characterizing `G_f = C_{∂f,γ}`.
    pub gap_equals_carlier: bool,
}

pub const BOUND_REPORT_HEADER: &str = "x,x_star,gamma,gap,fitz,carlier,gap_zero,gap_equals_carlier";

fn opt_to_field(v: Option<ExtReal>) -> String {
    match v {
        None => String::new(),
        Some(ExtReal::Finite(f)) => format!("{f:?}"),
        Some(ExtReal::PosInf) => "inf".into(),
    }
}

fn field_to_ext(field: &str) -> Result<Option<ExtReal>> {
    match field {
        "" => Ok(None),
        "inf" => Ok(Some(ExtReal::PosInf)),
        s => s
            .parse::<f64>()
            .map(|v| Some(ExtReal::new(v)))
            .map_err(|_| csv_err(s)),
    }
}

fn csv_err(token: &str) -> Error {
    Error::Parse {
        token: token.to_string(),
        reason: "malformed bound report field".into(),
    }
}

fn parse_joined(field: &str) -> Result<Vector> {
    let coords = field
        .split(';')
        .map(|c| c.parse::<f64>().map_err(|_| csv_err(c)))
        .collect::<Result<Vec<_>>>()?;
    Vector::new(coords)
}

impl BoundReport {
    /// `gap ≥ fitz ≥ carlier ≥ 0`, each comparison allowed `slack`.
    pub fn chain_holds(&self, slack: f64) -> bool {
        let carlier = ExtReal::new(self.carlier);
        let mut ok = self.carlier >= -slack;
        if let Some(fitz) = self.fitzpatrick {
            ok &= fitz + slack >= carlier;
            if let Some(gap) = self.gap {
                ok &= gap + slack >= fitz;
            }
        }
        if let Some(gap) = self.gap {
            ok &= gap + slack >= carlier;
        }
        ok
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{:?},{},{},{:?},{},{}",
            self.x.to_joined(),
            self.x_star.to_joined(),
            self.gamma,
            opt_to_field(self.gap),
            opt_to_field(self.fitzpatrick),
            self.carlier,
            self.gap_zero,
            self.gap_equals_carlier
        )
    }

    pub fn from_csv_row(row: &str) -> Result<Self> {
        let fields: Vec<&str> = row.trim_end().split(',').collect();
        if fields.len() != 8 {
            return Err(csv_err(row));
        }
        let parse_bool = |s: &str| s.parse::<bool>().map_err(|_| csv_err(s));
        Ok(BoundReport {
            x: parse_joined(fields[0])?,
            x_star: parse_joined(fields[1])?,
            gamma: fields[2].parse().map_err(|_| csv_err(fields[2]))?,
            gap: field_to_ext(fields[3])?,
            fitzpatrick: field_to_ext(fields[4])?,
            carlier: fields[5].parse().map_err(|_| csv_err(fields[5]))?,
            gap_zero: parse_bool(fields[6])?,
            gap_equals_carlier: parse_bool(fields[7])?,
        })
    }
}

/// Report for an arbitrary operator; `gap` is filled in only for
/// subdifferentials.
pub fn operator_report(
    a: &Operator,
    gamma: f64,
    x: &Vector,
    x_star: &Vector,
    tol: &Tolerances,
) -> Result<BoundReport> {
    let carlier = carlier_bound(a, gamma, x, x_star)?;
    let minty = minty_decompose(a, gamma, x, x_star)?;
    let gap = a.function().map(|f| f.fenchel_young_gap(x, x_star));
    let gap_zero = a.graph_contains(x, x_star, tol);
    let gap_equals_carlier =
        a.graph_contains(x, &minty.a_star, tol) && a.graph_contains(&minty.a, x_star, tol);
    Ok(BoundReport {
        x: x.clone(),
        x_star: x_star.clone(),
        gamma,
        gap,
        fitzpatrick: a.fitzpatrick_bound(x, x_star, tol),
        carlier,
        gap_zero,
        gap_equals_carlier,
    })
}

/// Gap, Fitzpatrick bound and Carlier bound for `∂f`.
pub fn bound_report(
    f: &ConvexFunction,
    gamma: f64,
    x: &Vector,
    x_star: &Vector,
    tol: &Tolerances,
) -> Result<BoundReport> {
    operator_report(&Operator::Subdifferential(f.clone()), gamma, x, x_star, tol)
}
