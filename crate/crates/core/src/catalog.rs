//! Closed-form convex functions and maximally monotone operators.
//!
//! Every entry knows its value, its conjugate, its proximal mapping and the
//! domain/range of its subdifferential. Operators are either subdifferentials
//! of catalog functions, the planar rotator, or a generic inverse built from
//! the inverse-resolvent identity.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lambert::lambert_w_exp;
use crate::numeric::{check_gamma, ExtReal, Tolerances, Vector};

/// Relative tolerance for membership in a linear subspace.
const SUBSPACE_MEMBERSHIP_TOL: f64 = 1e-9;

/// Position of a point relative to a convex set `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    /// `x ∈ S`.
    Inside,
    /// `x ∈ cl S \ S`.
    Boundary,
    /// `x ∉ cl S`.
    Outside,
}

impl Membership {
    pub fn in_set(self) -> bool {
        self == Membership::Inside
    }

    pub fn in_closure(self) -> bool {
        self != Membership::Outside
    }

    fn open_half_line(x: f64, positive: bool) -> Membership {
        let x = if positive { x } else { -x };
        if x > 0.0 {
            Membership::Inside
        } else if x == 0.0 {
            Membership::Boundary
        } else {
            Membership::Outside
        }
    }
}

/// A linear subspace `U` of `R^n`, stored through an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    orthonormal: Vec<Vector>,
}

impl Subspace {
    /// Orthonormalizes `basis` with modified Gram-Schmidt, applied twice.
    pub fn new(basis: &[Vector]) -> Result<Self> {
        let first = basis
            .first()
            .ok_or_else(|| Error::InvalidArgument("subspace basis is empty".into()))?;
        let ambient_dim = first.dim();
        let mut orthonormal: Vec<Vector> = Vec::with_capacity(basis.len());
        for (index, v) in basis.iter().enumerate() {
            v.expect_dim(ambient_dim)?;
            let original = v.norm();
            if original == 0.0 {
                return Err(Error::RankDeficientBasis { index });
            }
            let mut w = v.clone();
            for _pass in 0..2 {
                for q in &orthonormal {
                    w = w.axpy(-q.dot(&w), q);
                }
            }
            let norm = w.norm();
            if norm <= 1e-10 * original {
                return Err(Error::RankDeficientBasis { index });
            }
            orthonormal.push(w.scale(1.0 / norm));
        }
        Ok(Subspace {
            ambient_dim,
            orthonormal,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.orthonormal.len()
    }

    pub fn orthonormal_basis(&self) -> &[Vector] {
        &self.orthonormal
    }

    /// `P_U z`.
    pub fn project(&self, z: &Vector) -> Vector {
        let mut p = Vector::zeros(self.ambient_dim);
        for q in &self.orthonormal {
            p = p.axpy(q.dot(z), q);
        }
        p
    }

    /// `P_{U⊥} z`.
    pub fn project_complement(&self, z: &Vector) -> Vector {
        z - &self.project(z)
    }

    pub fn contains(&self, x: &Vector) -> bool {
        self.project_complement(x).norm() <= SUBSPACE_MEMBERSHIP_TOL * (1.0 + x.norm())
    }

    pub fn complement_contains(&self, x: &Vector) -> bool {
        self.project(x).norm() <= SUBSPACE_MEMBERSHIP_TOL * (1.0 + x.norm())
    }
}

/// Indicator of `U` (or of `U⊥` when `complement` is set).
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceIndicator {
    space: Arc<Subspace>,
    complement: bool,
}

impl SubspaceIndicator {
    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn is_complement(&self) -> bool {
        self.complement
    }

    /// Projection onto the set this indicator vanishes on.
    pub fn project(&self, z: &Vector) -> Vector {
        if self.complement {
            self.space.project_complement(z)
        } else {
            self.space.project(z)
        }
    }

    /// Projection onto the orthogonal complement of that set.
    pub fn project_perp(&self, z: &Vector) -> Vector {
        if self.complement {
            self.space.project(z)
        } else {
            self.space.project_complement(z)
        }
    }

    pub fn contains(&self, x: &Vector) -> bool {
        if self.complement {
            self.space.complement_contains(x)
        } else {
            self.space.contains(x)
        }
    }

    pub fn perp_contains(&self, x: &Vector) -> bool {
        if self.complement {
            self.space.contains(x)
        } else {
            self.space.complement_contains(x)
        }
    }

    fn conjugate(&self) -> SubspaceIndicator {
        SubspaceIndicator {
            space: Arc::clone(&self.space),
            complement: !self.complement,
        }
    }
}

/// A proper lower semicontinuous convex function with closed-form
/// conjugate and proximal mapping.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexFunction {
    /// `½‖x‖²`, self-conjugate.
    Energy { dim: usize },
    /// `ι_U`; its conjugate is `ι_{U⊥}`.
    Indicator(SubspaceIndicator),
    /// `-ln x` on `x > 0`.
    Burg,
    /// `-1 - ln(-y)` on `y < 0`, the conjugate of `Burg`.
    BurgConjugate,
    /// `x ln x - x` on `x >= 0` (value 0 at the origin).
    Shannon,
    /// `exp(y)`, the conjugate of `Shannon`.
    Exponential,
}

pub fn make_energy(dim: usize) -> Result<ConvexFunction> {
    if dim == 0 {
        return Err(Error::InvalidArgument("energy needs dim >= 1".into()));
    }
    Ok(ConvexFunction::Energy { dim })
}

pub fn make_subspace_indicator(basis: &[Vector]) -> Result<ConvexFunction> {
    let space = Subspace::new(basis)?;
    Ok(ConvexFunction::Indicator(SubspaceIndicator {
        space: Arc::new(space),
        complement: false,
    }))
}

pub fn make_burg() -> ConvexFunction {
    ConvexFunction::Burg
}

pub fn make_shannon() -> ConvexFunction {
    ConvexFunction::Shannon
}

pub fn make_rotator() -> Operator {
    Operator::Rotator(Rotator { sign: 1.0 })
}

/// `∂f` as an operator.
pub fn subdifferential_operator(f: ConvexFunction) -> Operator {
    Operator::Subdifferential(f)
}

/// `A⁻¹` through the inverse-resolvent identity, independent of any closed
/// form `A` may have for its inverse.
pub fn inverse_operator(a: Operator) -> Operator {
    Operator::Inverse(Box::new(a))
}

fn burg_prox(gamma: f64, z: f64) -> f64 {
    let s = (z * z + 4.0 * gamma).sqrt();
    if z >= 0.0 {
        0.5 * (z + s)
    } else {
        2.0 * gamma / (s - z)
    }
}

/// `x - Prox_{γ f}(x + γ y)` for Burg, free of cancellation near the graph.
fn burg_residual(gamma: f64, x: f64, y: f64) -> f64 {
    let z = x + gamma * y;
    let s = (z * z + 4.0 * gamma).sqrt();
    let t = x - gamma * y;
    if t > 0.0 {
        -2.0 * gamma * (x * y + 1.0) / (t + s)
    } else {
        0.5 * (t - s)
    }
}

fn shannon_prox(gamma: f64, z: f64) -> f64 {
    gamma * lambert_w_exp(z / gamma - gamma.ln())
}

fn exponential_prox(gamma: f64, z: f64) -> f64 {
    z - lambert_w_exp(z + gamma.ln())
}

impl ConvexFunction {
    pub fn name(&self) -> String {
        match self {
            ConvexFunction::Energy { dim } => format!("energy:dim={dim}"),
            ConvexFunction::Indicator(ind) => {
                let basis = ind
                    .space
                    .orthonormal
                    .iter()
                    .map(|q| q.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
                    .collect::<Vec<_>>()
                    .join(";");
                let kind = if ind.complement { "subspace-perp" } else { "subspace" };
                format!("{kind}:dim={}:basis={basis}", ind.space.ambient_dim)
            }
            ConvexFunction::Burg => "burg".into(),
            ConvexFunction::BurgConjugate => "burg-conjugate".into(),
            ConvexFunction::Shannon => "shannon".into(),
            ConvexFunction::Exponential => "exp".into(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexFunction::Energy { dim } => *dim,
            ConvexFunction::Indicator(ind) => ind.space.ambient_dim,
            _ => 1,
        }
    }

    /// `f(x)`. Panics if `x` has the wrong dimension.
    pub fn eval(&self, x: &Vector) -> ExtReal {
        assert_eq!(x.dim(), self.dim(), "dimension mismatch in {}", self.name());
        match self {
            ConvexFunction::Energy { .. } => ExtReal::new(0.5 * x.norm_sq()),
            ConvexFunction::Indicator(ind) => ExtReal::indicator(ind.contains(x)),
            ConvexFunction::Burg => {
                let t = x[0];
                if t > 0.0 {
                    ExtReal::new(-t.ln())
                } else {
                    ExtReal::PosInf
                }
            }
            ConvexFunction::BurgConjugate => {
                let t = x[0];
                if t < 0.0 {
                    ExtReal::new(-1.0 - (-t).ln())
                } else {
                    ExtReal::PosInf
                }
            }
            ConvexFunction::Shannon => {
                let t = x[0];
                if t > 0.0 {
                    ExtReal::new(t * t.ln() - t)
                } else if t == 0.0 {
                    ExtReal::ZERO
                } else {
                    ExtReal::PosInf
                }
            }
            ConvexFunction::Exponential => ExtReal::new(x[0].exp()),
        }
    }

    /// The Fenchel conjugate `f*` as a catalog function.
    pub fn conjugate(&self) -> ConvexFunction {
        match self {
            ConvexFunction::Energy { dim } => ConvexFunction::Energy { dim: *dim },
            ConvexFunction::Indicator(ind) => ConvexFunction::Indicator(ind.conjugate()),
            ConvexFunction::Burg => ConvexFunction::BurgConjugate,
            ConvexFunction::BurgConjugate => ConvexFunction::Burg,
            ConvexFunction::Shannon => ConvexFunction::Exponential,
            ConvexFunction::Exponential => ConvexFunction::Shannon,
        }
    }

    /// `f*(x*)`.
    pub fn conjugate_eval(&self, x_star: &Vector) -> ExtReal {
        self.conjugate().eval(x_star)
    }

    /// `Prox_{γf}(z)`, the minimizer of `½‖p - z‖² + γ f(p)`.
    pub fn prox(&self, gamma: f64, z: &Vector) -> Result<Vector> {
        check_gamma(gamma)?;
        z.expect_dim(self.dim())?;
        Ok(match self {
            ConvexFunction::Energy { .. } => z.scale(1.0 / (1.0 + gamma)),
            ConvexFunction::Indicator(ind) => ind.project(z),
            ConvexFunction::Burg => Vector::scalar(burg_prox(gamma, z[0])),
            ConvexFunction::BurgConjugate => Vector::scalar(-burg_prox(gamma, -z[0])),
            ConvexFunction::Shannon => Vector::scalar(shannon_prox(gamma, z[0])),
            ConvexFunction::Exponential => Vector::scalar(exponential_prox(gamma, z[0])),
        })
    }

    /// `x - Prox_{γf}(x + γ x*)`, arranged to avoid cancellation where a
    /// closed form allows it.
    pub fn prox_residual(&self, gamma: f64, x: &Vector, x_star: &Vector) -> Result<Vector> {
        check_gamma(gamma)?;
        x.expect_dim(self.dim())?;
        x_star.expect_dim(self.dim())?;
        Ok(match self {
            ConvexFunction::Energy { .. } => (x - x_star).scale(gamma / (1.0 + gamma)),
            ConvexFunction::Indicator(ind) => {
                ind.project_perp(x).axpy(-gamma, &ind.project(x_star))
            }
            ConvexFunction::Burg => Vector::scalar(burg_residual(gamma, x[0], x_star[0])),
            ConvexFunction::BurgConjugate => {
                Vector::scalar(-burg_residual(gamma, -x[0], -x_star[0]))
            }
            ConvexFunction::Shannon | ConvexFunction::Exponential => {
                x - &self.prox(gamma, &x.axpy(gamma, x_star))?
            }
        })
    }

    /// `∇f(x)` where `f` is differentiable at `x`; `None` otherwise.
    pub fn gradient(&self, x: &Vector) -> Option<Vector> {
        if x.dim() != self.dim() {
            return None;
        }
        match self {
            ConvexFunction::Energy { .. } => Some(x.clone()),
            ConvexFunction::Indicator(_) => None,
            ConvexFunction::Burg => (x[0] > 0.0).then(|| Vector::scalar(-1.0 / x[0])),
            ConvexFunction::BurgConjugate => (x[0] < 0.0).then(|| Vector::scalar(-1.0 / x[0])),
            ConvexFunction::Shannon => (x[0] > 0.0).then(|| Vector::scalar(x[0].ln())),
            ConvexFunction::Exponential => Some(Vector::scalar(x[0].exp())),
        }
    }

    /// `f(x) + f*(x*) - ⟨x, x*⟩`.
    pub fn fenchel_young_gap(&self, x: &Vector, x_star: &Vector) -> ExtReal {
        (self.eval(x) + self.conjugate_eval(x_star)) - x.dot(x_star)
    }

    /// Closed form of `F_{∂f}(x, x*) - ⟨x, x*⟩`, where one is known.
    pub fn fitzpatrick_bound(&self, x: &Vector, x_star: &Vector) -> Option<ExtReal> {
        match self {
            ConvexFunction::Energy { .. } => Some(ExtReal::new(0.25 * (x - x_star).norm_sq())),
            // ⟨x, x*⟩ vanishes for x ∈ U, x* ∈ U⊥.
            ConvexFunction::Indicator(ind) => {
                Some(ExtReal::indicator(ind.contains(x) && ind.perp_contains(x_star)))
            }
            _ => None,
        }
    }

    /// Where `x` lies relative to `dom ∂f`.
    pub fn subdifferential_domain(&self, x: &Vector) -> Membership {
        match self {
            ConvexFunction::Energy { .. } | ConvexFunction::Exponential => Membership::Inside,
            ConvexFunction::Indicator(ind) => {
                if ind.contains(x) {
                    Membership::Inside
                } else {
                    Membership::Outside
                }
            }
            ConvexFunction::Burg | ConvexFunction::Shannon => Membership::open_half_line(x[0], true),
            ConvexFunction::BurgConjugate => Membership::open_half_line(x[0], false),
        }
    }
}

impl fmt::Display for ConvexFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// `x ↦ s·(-x₂, x₁)`: rotation by `s·π/2` with `s = ±1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotator {
    sign: f64,
}

impl Rotator {
    pub fn apply(&self, x: &Vector) -> Vector {
        Vector::from_raw(vec![-self.sign * x[1], self.sign * x[0]])
    }

    pub fn sign(&self) -> f64 {
        self.sign
    }

    /// `(Id + γA)⁻¹ w = (1 + γ²)⁻¹ (w - γ A w)`.
    fn resolvent(&self, gamma: f64, w: &Vector) -> Vector {
        w.axpy(-gamma, &self.apply(w)).scale(1.0 / (1.0 + gamma * gamma))
    }

    /// `x - J_{γA}(x + γx*) = γ(1 + γ²)⁻¹ (d - γ A d)` with `d = Ax - x*`.
    fn residual(&self, gamma: f64, x: &Vector, x_star: &Vector) -> Vector {
        let d = &self.apply(x) - x_star;
        d.axpy(-gamma, &self.apply(&d)).scale(gamma / (1.0 + gamma * gamma))
    }
}

/// A maximally monotone operator with computable resolvent.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    /// `∂f`.
    Subdifferential(ConvexFunction),
    /// A skew rotation of the plane.
    Rotator(Rotator),
    /// `A⁻¹`, resolvent through `J_{μA⁻¹}(w) = w - μ J_{μ⁻¹A}(w/μ)`.
    Inverse(Box<Operator>),
}

impl Operator {
    pub fn name(&self) -> String {
        match self {
            Operator::Subdifferential(f) => format!("subdiff({})", f.name()),
            Operator::Rotator(r) if r.sign > 0.0 => "rotator".into(),
            Operator::Rotator(_) => "rotator-inverse".into(),
            Operator::Inverse(a) => format!("inverse({})", a.name()),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Operator::Subdifferential(f) => f.dim(),
            Operator::Rotator(_) => 2,
            Operator::Inverse(a) => a.dim(),
        }
    }

    /// The function when this is `∂f`.
    pub fn function(&self) -> Option<&ConvexFunction> {
        match self {
            Operator::Subdifferential(f) => Some(f),
            _ => None,
        }
    }

    /// `J_{γA}(z) = (Id + γA)⁻¹ z`.
    pub fn resolvent(&self, gamma: f64, z: &Vector) -> Result<Vector> {
        check_gamma(gamma)?;
        z.expect_dim(self.dim())?;
        match self {
            Operator::Subdifferential(f) => f.prox(gamma, z),
            Operator::Rotator(r) => Ok(r.resolvent(gamma, z)),
            Operator::Inverse(a) => {
                let inner = a.resolvent(1.0 / gamma, &z.scale(1.0 / gamma))?;
                Ok(z.axpy(-gamma, &inner))
            }
        }
    }

    /// `x - J_{γA}(x + γx*)`, the vector whose squared norm over `γ` is the
    /// Carlier bound.
    pub fn resolvent_residual(&self, gamma: f64, x: &Vector, x_star: &Vector) -> Result<Vector> {
        check_gamma(gamma)?;
        x.expect_dim(self.dim())?;
        x_star.expect_dim(self.dim())?;
        match self {
            Operator::Subdifferential(f) => f.prox_residual(gamma, x, x_star),
            Operator::Rotator(r) => Ok(r.residual(gamma, x, x_star)),
            // y - J_{μA⁻¹}(y + μy*) = -μ (y* - J_{μ⁻¹A}(y* + μ⁻¹y))
            Operator::Inverse(a) => Ok(a.resolvent_residual(1.0 / gamma, x_star, x)?.scale(-gamma)),
        }
    }

    /// `x* ∈ Ax` up to `tol.scaled(x, x*)`.
    pub fn graph_contains(&self, x: &Vector, x_star: &Vector, tol: &Tolerances) -> bool {
        if x.dim() != self.dim() || x_star.dim() != self.dim() {
            return false;
        }
        match self {
            Operator::Subdifferential(f) => match f.fenchel_young_gap(x, x_star) {
                ExtReal::Finite(g) => g <= tol.scaled(x, x_star),
                ExtReal::PosInf => false,
            },
            Operator::Rotator(r) => (&r.apply(x) - x_star).norm() <= tol.scaled(x, x_star),
            Operator::Inverse(a) => a.graph_contains(x_star, x, tol),
        }
    }

    /// Where `x` lies relative to `dom A`.
    pub fn domain(&self, x: &Vector) -> Membership {
        match self {
            Operator::Subdifferential(f) => f.subdifferential_domain(x),
            Operator::Rotator(_) => Membership::Inside,
            Operator::Inverse(a) => a.range(x),
        }
    }

    /// Where `x*` lies relative to `ran A`.
    pub fn range(&self, x_star: &Vector) -> Membership {
        match self {
            Operator::Subdifferential(f) => f.conjugate().subdifferential_domain(x_star),
            Operator::Rotator(_) => Membership::Inside,
            Operator::Inverse(a) => a.domain(x_star),
        }
    }

    pub fn in_domain(&self, x: &Vector) -> bool {
        self.domain(x).in_set()
    }

    pub fn in_closure_domain(&self, x: &Vector) -> bool {
        self.domain(x).in_closure()
    }

    pub fn in_range(&self, x_star: &Vector) -> bool {
        self.range(x_star).in_set()
    }

    pub fn in_closure_range(&self, x_star: &Vector) -> bool {
        self.range(x_star).in_closure()
    }

    /// `A⁻¹` in closed form: `∂f*` for subdifferentials, `-A` for the rotator.
    pub fn inverse(&self) -> Operator {
        match self {
            Operator::Subdifferential(f) => Operator::Subdifferential(f.conjugate()),
            Operator::Rotator(r) => Operator::Rotator(Rotator { sign: -r.sign }),
            Operator::Inverse(a) => (**a).clone(),
        }
    }

    /// Closed form of `F_A(x, x*) - ⟨x, x*⟩` where known.
    pub fn fitzpatrick_bound(
        &self,
        x: &Vector,
        x_star: &Vector,
        tol: &Tolerances,
    ) -> Option<ExtReal> {
        match self {
            Operator::Subdifferential(f) => f.fitzpatrick_bound(x, x_star),
            Operator::Rotator(_) => Some(ExtReal::indicator(self.graph_contains(x, x_star, tol))),
            Operator::Inverse(a) => a.fitzpatrick_bound(x_star, x, tol),
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A parsed catalog spec string.
#[derive(Debug, Clone, PartialEq)]
pub enum CatalogEntry {
    Function(ConvexFunction),
    Operator(Operator),
}

impl CatalogEntry {
    pub fn operator(&self) -> Operator {
        match self {
            CatalogEntry::Function(f) => subdifferential_operator(f.clone()),
            CatalogEntry::Operator(a) => a.clone(),
        }
    }

    pub fn function(&self) -> Option<&ConvexFunction> {
        match self {
            CatalogEntry::Function(f) => Some(f),
            CatalogEntry::Operator(a) => a.function(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            CatalogEntry::Function(f) => f.dim(),
            CatalogEntry::Operator(a) => a.dim(),
        }
    }
}

fn parse_err(token: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        token: token.to_string(),
        reason: reason.into(),
    }
}

/// Parses a comma-separated list of finite reals.
pub fn parse_coords(text: &str) -> Result<Vector> {
    let coords = text
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            let v: f64 = tok.parse().map_err(|_| parse_err(tok, "not a real number"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(parse_err(tok, "coordinates must be finite"))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Vector::new(coords).map_err(|e| parse_err(text, e.to_string()))
}

/// Parses `energy:dim=N`, `subspace:dim=N:basis=v1;v2;...`, `burg`,
/// `shannon` or `rotator`.
pub fn parse_entry(spec: &str) -> Result<CatalogEntry> {
    let mut parts = spec.split(':');
    let kind = parts.next().unwrap_or_default().trim();
    let mut dim: Option<usize> = None;
    let mut basis: Option<Vec<Vector>> = None;
    for part in parts {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| parse_err(part, "expected key=value"))?;
        match key.trim() {
            "dim" => {
                let d: usize = value
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(part, "dim must be a positive integer"))?;
                if d == 0 {
                    return Err(parse_err(part, "dim must be a positive integer"));
                }
                dim = Some(d);
            }
            "basis" => {
                basis = Some(
                    value
                        .split(';')
                        .filter(|v| !v.trim().is_empty())
                        .map(parse_coords)
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            other => return Err(parse_err(other, "unknown key")),
        }
    }

    let reject_params = |what: &str| -> Result<()> {
        if dim.is_some() || basis.is_some() {
            Err(parse_err(spec, format!("{what} takes no parameters")))
        } else {
            Ok(())
        }
    };

    match kind {
        "energy" => {
            if basis.is_some() {
                return Err(parse_err("basis", "energy takes no basis"));
            }
            let dim = dim.ok_or_else(|| parse_err(spec, "energy requires dim=N"))?;
            Ok(CatalogEntry::Function(make_energy(dim)?))
        }
        "subspace" => {
            let basis = basis.ok_or_else(|| parse_err(spec, "subspace requires basis=..."))?;
            if basis.is_empty() {
                return Err(parse_err(spec, "subspace basis is empty"));
            }
            let dim = dim.unwrap_or(basis[0].dim());
            for v in &basis {
                if v.dim() != dim {
                    return Err(parse_err(
                        &v.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
                        format!("basis vector has {} coordinates, expected {dim}", v.dim()),
                    ));
                }
            }
            make_subspace_indicator(&basis)
                .map(CatalogEntry::Function)
                .map_err(|e| parse_err(spec, e.to_string()))
        }
        "burg" => reject_params("burg").map(|_| CatalogEntry::Function(make_burg())),
        "shannon" => reject_params("shannon").map(|_| CatalogEntry::Function(make_shannon())),
        "rotator" => reject_params("rotator").map(|_| CatalogEntry::Operator(make_rotator())),
        other => Err(parse_err(other, "unknown catalog entry")),
    }
}
