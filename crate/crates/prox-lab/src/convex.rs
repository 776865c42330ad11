//! The φ ∈ Γ0 catalog: values, conjugates, Euclidean proximity maps,
//! cone projections, and Fenchel–Young gap certification.
//!
//! Subdifferential membership is certified exclusively through the
//! Fenchel–Young gap, never through explicit subgradient enumeration.
//! Indicator membership tests carry a small relative feasibility slack so
//! that solver-produced points sitting numerically on a boundary still
//! evaluate finite; the pairing term of the gap carries the actual residual.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{ProxError, Result};
use crate::space::{pair, DualVector, PrimalVector};

/// Relative feasibility slack for indicator membership tests.
pub(crate) const FEAS_SLACK: f64 = 1e-7;

fn slack(scale: f64) -> f64 {
    FEAS_SLACK * (1.0 + scale)
}

/// Nonempty closed convex cones with closed-form projections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ConeSpec {
    /// {x : x_i >= 0} (nonneg = true) or its polar {x : x_i <= 0}.
    Orthant { dim: usize, nonneg: bool },
    /// Second-order cone {(t, z) : ||z||_2 <= t}, first coordinate is t;
    /// negated = true gives the polar -K.
    SecondOrder { dim: usize, negated: bool },
    /// Linear span of the stored orthonormal basis.
    Subspace { dim: usize, basis: Vec<Vec<f64>> },
    /// {x : <x, normal> <= 0}.
    Halfspace { normal: Vec<f64> },
    /// {t * direction : t >= 0}.
    Ray { direction: Vec<f64> },
}

impl ConeSpec {
    pub fn nonneg_orthant(dim: usize) -> Self {
        ConeSpec::Orthant { dim, nonneg: true }
    }

    pub fn second_order(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(ProxError::UnsupportedCone(
                "second-order cone needs dimension >= 2".into(),
            ));
        }
        Ok(ConeSpec::SecondOrder { dim, negated: false })
    }

    /// Span of the given vectors, orthonormalized by Gram–Schmidt.
    pub fn subspace(dim: usize, generators: &[PrimalVector]) -> Result<Self> {
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for g in generators {
            if g.dim() != dim {
                return Err(ProxError::DimensionMismatch {
                    left: dim,
                    right: g.dim(),
                });
            }
            let mut v = g.coords().to_vec();
            for b in &basis {
                let d: f64 = v.iter().zip(b).map(|(a, c)| a * c).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= d * bi;
                }
            }
            let n: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if n > 1e-12 {
                basis.push(v.iter().map(|a| a / n).collect());
            }
        }
        if basis.is_empty() {
            return Err(ProxError::UnsupportedCone("subspace has no generators".into()));
        }
        Ok(ConeSpec::Subspace { dim, basis })
    }

    pub fn halfspace(normal: PrimalVector) -> Result<Self> {
        if normal.norm2() == 0.0 {
            return Err(ProxError::UnsupportedCone("halfspace normal is zero".into()));
        }
        Ok(ConeSpec::Halfspace {
            normal: normal.coords().to_vec(),
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            ConeSpec::Orthant { dim, .. }
            | ConeSpec::SecondOrder { dim, .. }
            | ConeSpec::Subspace { dim, .. } => *dim,
            ConeSpec::Halfspace { normal } | ConeSpec::Ray { direction: normal } => normal.len(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ConeSpec::Orthant { nonneg: true, .. } => "nonneg_orthant",
            ConeSpec::Orthant { nonneg: false, .. } => "nonpos_orthant",
            ConeSpec::SecondOrder { negated: false, .. } => "second_order",
            ConeSpec::SecondOrder { negated: true, .. } => "second_order_polar",
            ConeSpec::Subspace { .. } => "linear_span_subspace",
            ConeSpec::Halfspace { .. } => "halfspace_cone",
            ConeSpec::Ray { .. } => "ray",
        }
    }

    /// The polar cone, again in closed form.
    pub fn polar(&self) -> ConeSpec {
        match self {
            ConeSpec::Orthant { dim, nonneg } => ConeSpec::Orthant {
                dim: *dim,
                nonneg: !nonneg,
            },
            // The standard SOC is self-dual, so its polar is -K.
            ConeSpec::SecondOrder { dim, negated } => ConeSpec::SecondOrder {
                dim: *dim,
                negated: !negated,
            },
            ConeSpec::Subspace { dim, basis } => {
                // Orthogonal complement: complete the basis and keep the rest.
                let mut full: Vec<Vec<f64>> = basis.clone();
                let mut comp: Vec<Vec<f64>> = Vec::new();
                for i in 0..*dim {
                    let mut v = vec![0.0; *dim];
                    v[i] = 1.0;
                    for b in &full {
                        let d: f64 = v.iter().zip(b).map(|(a, c)| a * c).sum();
                        for (vi, bi) in v.iter_mut().zip(b) {
                            *vi -= d * bi;
                        }
                    }
                    let n: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
                    if n > 1e-10 {
                        let u: Vec<f64> = v.iter().map(|a| a / n).collect();
                        full.push(u.clone());
                        comp.push(u);
                    }
                }
                ConeSpec::Subspace {
                    dim: *dim,
                    basis: comp,
                }
            }
            ConeSpec::Halfspace { normal } => ConeSpec::Ray {
                direction: normal.clone(),
            },
            ConeSpec::Ray { direction } => ConeSpec::Halfspace {
                normal: direction.clone(),
            },
        }
    }

    /// Membership with feasibility slack.
    pub fn contains(&self, x: &[f64]) -> bool {
        let scale = x.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        let eps = slack(scale);
        match self {
            ConeSpec::Orthant { nonneg: true, .. } => x.iter().all(|&c| c >= -eps),
            ConeSpec::Orthant { nonneg: false, .. } => x.iter().all(|&c| c <= eps),
            ConeSpec::SecondOrder { negated, .. } => {
                let t = if *negated { -x[0] } else { x[0] };
                let z: f64 = x[1..].iter().map(|a| a * a).sum::<f64>().sqrt();
                z <= t + eps
            }
            ConeSpec::Subspace { .. } | ConeSpec::Halfspace { .. } | ConeSpec::Ray { .. } => {
                let p = self.project_raw(x);
                x.iter()
                    .zip(&p)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
                    <= eps
            }
        }
    }

    fn project_raw(&self, x: &[f64]) -> Vec<f64> {
        match self {
            ConeSpec::Orthant { nonneg: true, .. } => x.iter().map(|&c| c.max(0.0)).collect(),
            ConeSpec::Orthant { nonneg: false, .. } => x.iter().map(|&c| c.min(0.0)).collect(),
            ConeSpec::SecondOrder { negated: false, .. } => soc_project(x),
            ConeSpec::SecondOrder { negated: true, .. } => {
                let neg: Vec<f64> = x.iter().map(|&c| -c).collect();
                soc_project(&neg).iter().map(|&c| -c).collect()
            }
            ConeSpec::Subspace { basis, .. } => {
                let mut out = vec![0.0; x.len()];
                for b in basis {
                    let d: f64 = x.iter().zip(b).map(|(a, c)| a * c).sum();
                    for (o, bi) in out.iter_mut().zip(b) {
                        *o += d * bi;
                    }
                }
                out
            }
            ConeSpec::Halfspace { normal } => {
                let nn: f64 = normal.iter().map(|a| a * a).sum();
                let d: f64 = x.iter().zip(normal).map(|(a, c)| a * c).sum();
                let t = d.max(0.0) / nn;
                x.iter().zip(normal).map(|(a, c)| a - t * c).collect()
            }
            ConeSpec::Ray { direction } => {
                let nn: f64 = direction.iter().map(|a| a * a).sum();
                let d: f64 = x.iter().zip(direction).map(|(a, c)| a * c).sum();
                let t = d.max(0.0) / nn;
                direction.iter().map(|&c| t * c).collect()
            }
        }
    }

    /// Euclidean metric projection onto the cone.
    pub fn project(&self, x: &PrimalVector) -> PrimalVector {
        PrimalVector::from_raw(self.project_raw(x.coords()))
    }
}

fn soc_project(x: &[f64]) -> Vec<f64> {
    let t = x[0];
    let znorm: f64 = x[1..].iter().map(|a| a * a).sum::<f64>().sqrt();
    if znorm <= t {
        x.to_vec()
    } else if znorm <= -t {
        vec![0.0; x.len()]
    } else {
        let alpha = 0.5 * (t + znorm);
        let mut out = Vec::with_capacity(x.len());
        out.push(alpha);
        for &zi in &x[1..] {
            out.push(alpha * zi / znorm);
        }
        out
    }
}

/// Euclidean projection onto the polar cone K⊖.
pub fn polar_project(cone: &ConeSpec, x: &PrimalVector) -> PrimalVector {
    cone.polar().project(x)
}

/// Per-coordinate domain summary used by the constraint-qualification and
/// precondition checks. Non-separable domains fall back to `NonSeparable`.
#[derive(Debug, Clone, PartialEq)]
pub enum SeparableDomain {
    Full,
    /// Per-coordinate interval, entries may be ±inf.
    Box { lower: Vec<f64>, upper: Vec<f64> },
    NonSeparable,
}

#[derive(Debug, Clone)]
enum PhiKind {
    Zero,
    Linear { c: Vec<f64> },
    L1 { lambda: f64 },
    IndicatorCone { cone: ConeSpec },
    IndicatorBox { lower: Vec<f64>, upper: Vec<f64> },
    IndicatorPoint { c: Vec<f64> },
    SupportBox { lower: Vec<f64>, upper: Vec<f64> },
    Quadratic { q: DMatrix<f64>, c: Vec<f64>, constant: f64 },
}

/// A convex function from the catalog, with value, conjugate value,
/// Euclidean prox, and a domain descriptor.
#[derive(Debug, Clone)]
pub struct ConvexFunction {
    pub name: String,
    pub dim: usize,
    pub bounded_below: bool,
    kind: PhiKind,
}

impl ConvexFunction {
    pub fn zero(n: usize) -> Self {
        Self {
            name: "zero".into(),
            dim: n,
            bounded_below: true,
            kind: PhiKind::Zero,
        }
    }

    pub fn linear(c: DualVector) -> Self {
        let bounded = c.coords().iter().all(|&v| v == 0.0);
        Self {
            name: "linear".into(),
            dim: c.dim(),
            bounded_below: bounded,
            kind: PhiKind::Linear {
                c: c.coords().to_vec(),
            },
        }
    }

    pub fn l1(n: usize, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(ProxError::Invalid("l1 weight must be positive".into()));
        }
        Ok(Self {
            name: format!("l1({lambda})"),
            dim: n,
            bounded_below: true,
            kind: PhiKind::L1 { lambda },
        })
    }

    pub fn indicator_cone(cone: ConeSpec) -> Self {
        Self {
            name: format!("indicator_{}", cone.kind_name()),
            dim: cone.dim(),
            bounded_below: true,
            kind: PhiKind::IndicatorCone { cone },
        }
    }

    pub fn indicator_orthant(n: usize) -> Self {
        Self::indicator_cone(ConeSpec::nonneg_orthant(n))
    }

    pub fn indicator_box(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(ProxError::Invalid("box bounds must have equal nonzero length".into()));
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(ProxError::Invalid("box has empty coordinate interval".into()));
        }
        Ok(Self {
            name: "indicator_box".into(),
            dim: lower.len(),
            bounded_below: true,
            kind: PhiKind::IndicatorBox { lower, upper },
        })
    }

    pub fn indicator_point(c: Vec<f64>) -> Self {
        Self {
            name: "indicator_point".into(),
            dim: c.len(),
            bounded_below: true,
            kind: PhiKind::IndicatorPoint { c },
        }
    }

    pub fn support_box(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(ProxError::Invalid("box bounds must have equal nonzero length".into()));
        }
        let bounded = lower.iter().zip(&upper).all(|(&l, &u)| l <= 0.0 && u >= 0.0);
        Ok(Self {
            name: "support_box".into(),
            dim: lower.len(),
            bounded_below: bounded,
            kind: PhiKind::SupportBox { lower, upper },
        })
    }

    /// ½⟨x, Qx⟩ + ⟨x, c⟩ + constant with Q symmetric PSD.
    pub fn quadratic(q: DMatrix<f64>, c: Vec<f64>, constant: f64) -> Result<Self> {
        let n = q.nrows();
        if q.ncols() != n || c.len() != n || n == 0 {
            return Err(ProxError::Invalid("quadratic data dimensions inconsistent".into()));
        }
        let scale = q.amax().max(1.0);
        for i in 0..n {
            for j in 0..i {
                if (q[(i, j)] - q[(j, i)]).abs() > 1e-12 * scale {
                    return Err(ProxError::Invalid("Q is not symmetric".into()));
                }
            }
        }
        let min_eig = q.clone().symmetric_eigen().eigenvalues.min();
        if min_eig < -1e-10 * scale {
            return Err(ProxError::Invalid("Q is not positive semidefinite".into()));
        }
        let bounded = min_eig > 1e-10 * scale || c.iter().all(|&v| v == 0.0);
        Ok(Self {
            name: "quadratic".into(),
            dim: n,
            bounded_below: bounded,
            kind: PhiKind::Quadratic { q, c, constant },
        })
    }

    pub fn cone(&self) -> Option<&ConeSpec> {
        match &self.kind {
            PhiKind::IndicatorCone { cone } => Some(cone),
            _ => None,
        }
    }

    /// Per-coordinate domain summary for precondition checks.
    pub fn domain(&self) -> SeparableDomain {
        match &self.kind {
            PhiKind::Zero
            | PhiKind::Linear { .. }
            | PhiKind::L1 { .. }
            | PhiKind::SupportBox { .. }
            | PhiKind::Quadratic { .. } => SeparableDomain::Full,
            PhiKind::IndicatorBox { lower, upper } => SeparableDomain::Box {
                lower: lower.clone(),
                upper: upper.clone(),
            },
            PhiKind::IndicatorPoint { c } => SeparableDomain::Box {
                lower: c.clone(),
                upper: c.clone(),
            },
            PhiKind::IndicatorCone { cone } => match cone {
                ConeSpec::Orthant { dim, nonneg: true } => SeparableDomain::Box {
                    lower: vec![0.0; *dim],
                    upper: vec![f64::INFINITY; *dim],
                },
                ConeSpec::Orthant { dim, nonneg: false } => SeparableDomain::Box {
                    lower: vec![f64::NEG_INFINITY; *dim],
                    upper: vec![0.0; *dim],
                },
                _ => SeparableDomain::NonSeparable,
            },
        }
    }

    /// φ(x) ∈ (−∞, +∞].
    pub fn eval_phi(&self, x: &PrimalVector) -> f64 {
        let c = x.coords();
        match &self.kind {
            PhiKind::Zero => 0.0,
            PhiKind::Linear { c: a } => c.iter().zip(a).map(|(x, a)| x * a).sum(),
            PhiKind::L1 { lambda } => lambda * c.iter().map(|v| v.abs()).sum::<f64>(),
            PhiKind::IndicatorCone { cone } => {
                if cone.contains(c) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            PhiKind::IndicatorBox { lower, upper } => {
                let scale = c.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
                let eps = slack(scale);
                if c.iter()
                    .zip(lower.iter().zip(upper))
                    .all(|(v, (l, u))| *v >= l - eps && *v <= u + eps)
                {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            PhiKind::IndicatorPoint { c: point } => {
                let scale = point.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
                let eps = slack(scale);
                if c.iter().zip(point).all(|(v, p)| (v - p).abs() <= eps) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            PhiKind::SupportBox { lower, upper } => support_box_value(c, lower, upper),
            PhiKind::Quadratic { q, c: lin, constant } => {
                let v = DVector::from_column_slice(c);
                0.5 * (q * &v).dot(&v)
                    + c.iter().zip(lin).map(|(x, a)| x * a).sum::<f64>()
                    + constant
            }
        }
    }

    /// φ*(x*), closed form per entry.
    pub fn eval_conj_phi(&self, xstar: &DualVector) -> f64 {
        let c = xstar.coords();
        match &self.kind {
            PhiKind::Zero => indicator_point_value(c, &vec![0.0; self.dim]),
            PhiKind::Linear { c: a } => indicator_point_value(c, a),
            PhiKind::L1 { lambda } => {
                let l = vec![-lambda; self.dim];
                let u = vec![*lambda; self.dim];
                box_indicator_value(c, &l, &u)
            }
            PhiKind::IndicatorCone { cone } => {
                if cone.polar().contains(c) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            PhiKind::IndicatorBox { lower, upper } => support_box_value(c, lower, upper),
            PhiKind::IndicatorPoint { c: point } => {
                c.iter().zip(point).map(|(x, p)| x * p).sum()
            }
            PhiKind::SupportBox { lower, upper } => box_indicator_value(c, lower, upper),
            PhiKind::Quadratic { q, c: lin, constant } => {
                // Finite only when x* - c lies in range(Q).
                let rhs = DVector::from_iterator(
                    self.dim,
                    c.iter().zip(lin).map(|(x, a)| x - a),
                );
                let svd = q.clone().svd(true, true);
                match svd.solve(&rhs, 1e-10) {
                    Ok(y) => {
                        let resid = (q * &y - &rhs).norm();
                        if resid > 1e-7 * (1.0 + rhs.norm()) {
                            f64::INFINITY
                        } else {
                            0.5 * y.dot(&rhs) - constant
                        }
                    }
                    Err(_) => f64::INFINITY,
                }
            }
        }
    }

    /// The unique minimizer of γφ(·) + ½‖x − ·‖².
    pub fn euclid_prox(&self, x: &PrimalVector, gamma: f64) -> Result<PrimalVector> {
        if !(gamma > 0.0) {
            return Err(ProxError::Invalid("prox step gamma must be positive".into()));
        }
        let c = x.coords();
        let out = match &self.kind {
            PhiKind::Zero => c.to_vec(),
            PhiKind::Linear { c: a } => c.iter().zip(a).map(|(x, a)| x - gamma * a).collect(),
            PhiKind::L1 { lambda } => {
                let t = gamma * lambda;
                c.iter()
                    .map(|&v| v.signum() * (v.abs() - t).max(0.0))
                    .collect()
            }
            PhiKind::IndicatorCone { cone } => cone.project_raw(c),
            PhiKind::IndicatorBox { lower, upper } => c
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(v, (l, u))| v.max(*l).min(*u))
                .collect(),
            PhiKind::IndicatorPoint { c: point } => point.clone(),
            PhiKind::SupportBox { lower, upper } => {
                // Moreau: prox of gamma * sigma_C is x - P_{gamma C}(x).
                c.iter()
                    .zip(lower.iter().zip(upper))
                    .map(|(v, (l, u))| v - v.max(gamma * l).min(gamma * u))
                    .collect()
            }
            PhiKind::Quadratic { q, c: lin, .. } => {
                let n = self.dim;
                let mut a = q.scale(gamma);
                for i in 0..n {
                    a[(i, i)] += 1.0;
                }
                let rhs = DVector::from_iterator(n, c.iter().zip(lin).map(|(x, l)| x - gamma * l));
                let sol = a
                    .lu()
                    .solve(&rhs)
                    .ok_or_else(|| ProxError::Invalid("prox linear solve failed".into()))?;
                sol.as_slice().to_vec()
            }
        };
        Ok(PrimalVector::from_raw(out))
    }

    /// φ* as a catalog entry, where the catalog closes under conjugation.
    pub fn conjugate(&self) -> Result<ConvexFunction> {
        match &self.kind {
            PhiKind::Zero => Ok(Self::indicator_point(vec![0.0; self.dim])),
            PhiKind::Linear { c } => Ok(Self::indicator_point(c.clone())),
            PhiKind::L1 { lambda } => {
                Self::indicator_box(vec![-lambda; self.dim], vec![*lambda; self.dim])
            }
            PhiKind::IndicatorCone { cone } => Ok(Self::indicator_cone(cone.polar())),
            PhiKind::IndicatorBox { lower, upper } => {
                Self::support_box(lower.clone(), upper.clone())
            }
            PhiKind::SupportBox { lower, upper } => {
                Self::indicator_box(lower.clone(), upper.clone())
            }
            PhiKind::IndicatorPoint { c } => {
                Ok(Self::linear(DualVector::from_raw(c.clone())))
            }
            PhiKind::Quadratic { q, c, constant } => {
                let min_eig = q.clone().symmetric_eigen().eigenvalues.min();
                if !(min_eig > 1e-10 * q.amax().max(1.0)) {
                    return Err(ProxError::NoConjugate(
                        "quadratic conjugate needs positive definite Q".into(),
                    ));
                }
                let q_inv = q
                    .clone()
                    .cholesky()
                    .ok_or_else(|| ProxError::NoConjugate("cholesky failed".into()))?
                    .inverse();
                // (1/2 <x,Qx> + <x,c> + k)* = 1/2 <y-c, Q^{-1}(y-c)> - k
                let cv = DVector::from_column_slice(c);
                let qc = &q_inv * &cv;
                let lin: Vec<f64> = (-&qc).as_slice().to_vec();
                let new_const = 0.5 * qc.dot(&cv) - constant;
                Self::quadratic(q_inv, lin, new_const)
            }
        }
    }

    /// φ(x) + φ*(x*) − ⟨x, x*⟩, clipped at 0 within tolerance.
    /// A gap at tolerance certifies x* ∈ ∂φ(x).
    pub fn fenchel_young_gap(&self, x: &PrimalVector, xstar: &DualVector) -> f64 {
        let v = self.eval_phi(x);
        let vc = self.eval_conj_phi(xstar);
        if !v.is_finite() || !vc.is_finite() {
            return f64::INFINITY;
        }
        let inner = pair(x, xstar).expect("dimensions match");
        let g = v + vc - inner;
        if g < 0.0 && g > -1e-8 * (1.0 + inner.abs()) {
            0.0
        } else {
            g
        }
    }
}

fn box_indicator_value(c: &[f64], lower: &[f64], upper: &[f64]) -> f64 {
    let scale = c.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let eps = slack(scale);
    if c.iter()
        .zip(lower.iter().zip(upper))
        .all(|(v, (l, u))| *v >= l - eps && *v <= u + eps)
    {
        0.0
    } else {
        f64::INFINITY
    }
}

fn indicator_point_value(c: &[f64], point: &[f64]) -> f64 {
    let scale = point.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let eps = slack(scale);
    if c.iter().zip(point).all(|(v, p)| (v - p).abs() <= eps) {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Support function of the box [lower, upper] (entries may be ±inf).
fn support_box_value(c: &[f64], lower: &[f64], upper: &[f64]) -> f64 {
    let scale = c.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let eps = slack(scale);
    let mut total = 0.0;
    for ((&v, &l), &u) in c.iter().zip(lower).zip(upper) {
        if v > eps {
            if u.is_infinite() {
                return f64::INFINITY;
            }
            total += u * v;
        } else if v < -eps {
            if l.is_infinite() {
                return f64::INFINITY;
            }
            total += l * v;
        } else {
            // treat as zero multiplier; finite bounds still contribute
            if l.is_finite() && u.is_finite() {
                total += (l * v).max(u * v);
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn pv(c: &[f64]) -> PrimalVector {
        PrimalVector::new(c.to_vec()).unwrap()
    }

    fn dv(c: &[f64]) -> DualVector {
        DualVector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn eval_examples() {
        let l1 = ConvexFunction::l1(2, 2.0).unwrap();
        assert_relative_eq!(l1.eval_phi(&pv(&[1.0, -3.0])), 8.0);

        let ind = ConvexFunction::indicator_orthant(2);
        assert_eq!(ind.eval_phi(&pv(&[1.0, 0.0])), 0.0);
        assert_eq!(ind.eval_phi(&pv(&[-1.0, 0.0])), f64::INFINITY);
    }

    #[test]
    fn conjugate_value_examples() {
        let ind = ConvexFunction::indicator_orthant(2);
        assert_eq!(ind.eval_conj_phi(&dv(&[-1.0, -2.0])), 0.0);
        assert_eq!(ind.eval_conj_phi(&dv(&[1.0, -2.0])), f64::INFINITY);

        let l1 = ConvexFunction::l1(2, 2.0).unwrap();
        assert_eq!(l1.eval_conj_phi(&dv(&[1.0, 3.0])), f64::INFINITY);
        assert_eq!(l1.eval_conj_phi(&dv(&[1.0, 2.0])), 0.0);

        let zero = ConvexFunction::zero(2);
        assert_eq!(zero.eval_conj_phi(&dv(&[0.0, 0.0])), 0.0);
        assert_eq!(zero.eval_conj_phi(&dv(&[1.0, 1.0])), f64::INFINITY);
    }

    #[test]
    fn prox_examples() {
        let l1 = ConvexFunction::l1(2, 1.0).unwrap();
        assert_eq!(
            l1.euclid_prox(&pv(&[2.0, -0.5]), 1.0).unwrap(),
            pv(&[1.0, 0.0])
        );

        let ind = ConvexFunction::indicator_orthant(2);
        assert_eq!(
            ind.euclid_prox(&pv(&[1.0, -2.0]), 1.0).unwrap(),
            pv(&[1.0, 0.0])
        );

        let zero = ConvexFunction::zero(2);
        assert_eq!(
            zero.euclid_prox(&pv(&[5.0, 5.0]), 1.0).unwrap(),
            pv(&[5.0, 5.0])
        );

        assert!(zero.euclid_prox(&pv(&[1.0]), 0.0).is_err());
    }

    #[test]
    fn fenchel_young_gap_examples() {
        let l1 = ConvexFunction::l1(2, 1.0).unwrap();
        let g = l1.fenchel_young_gap(&pv(&[2.0, 0.0]), &dv(&[1.0, 0.3]));
        assert!(g.abs() <= 1e-10, "gap {g}");

        let ind = ConvexFunction::indicator_orthant(2);
        let g = ind.fenchel_young_gap(&pv(&[1.0, 0.0]), &dv(&[0.0, -2.0]));
        assert!(g.abs() <= 1e-10);

        let zero = ConvexFunction::zero(2);
        assert_eq!(
            zero.fenchel_young_gap(&pv(&[1.0, 1.0]), &dv(&[1.0, 1.0])),
            f64::INFINITY
        );
    }

    #[test]
    fn polar_project_examples() {
        let orthant = ConeSpec::nonneg_orthant(2);
        assert_eq!(polar_project(&orthant, &pv(&[1.0, -2.0])), pv(&[0.0, -2.0]));

        let v = ConeSpec::subspace(2, &[pv(&[1.0, 0.0])]).unwrap();
        assert_eq!(polar_project(&v, &pv(&[3.0, 4.0])), pv(&[0.0, 4.0]));

        let soc = ConeSpec::second_order(3).unwrap();
        let on_cone = pv(&[5.0, 3.0, 4.0]);
        let pp = polar_project(&soc, &on_cone);
        assert!(pp.norm2() <= 1e-12, "polar projection of a member should vanish");
    }

    #[test]
    fn cone_membership_positively_homogeneous() {
        let cones = [
            ConeSpec::nonneg_orthant(3),
            ConeSpec::second_order(3).unwrap(),
            ConeSpec::subspace(3, &[pv(&[1.0, 1.0, 0.0])]).unwrap(),
            ConeSpec::halfspace(pv(&[1.0, -1.0, 2.0])).unwrap(),
        ];
        let mut s = crate::space::Sampler::new(5);
        for cone in &cones {
            for _ in 0..50 {
                let x = s.standard_normal(3);
                let px = cone.project(&x);
                assert!(cone.contains(px.coords()));
                for &t in &[0.5, 2.0] {
                    assert!(cone.contains(px.scale(t).coords()), "{}", cone.kind_name());
                }
            }
        }
    }

    #[test]
    fn moreau_sum_and_pythagoras_for_cones() {
        let cones = [
            ConeSpec::nonneg_orthant(4),
            ConeSpec::second_order(4).unwrap(),
            ConeSpec::subspace(4, &[pv(&[1.0, 0.0, 1.0, 0.0]), pv(&[0.0, 1.0, 0.0, 0.0])])
                .unwrap(),
            ConeSpec::halfspace(pv(&[1.0, 2.0, -1.0, 0.5])).unwrap(),
        ];
        let mut s = crate::space::Sampler::new(17);
        for cone in &cones {
            for _ in 0..50 {
                let x = s.standard_normal(4);
                let pk = cone.project(&x);
                let pp = polar_project(cone, &x);
                let sum_err = x.sub(&pk).sub(&pp).norm2();
                assert!(sum_err <= 1e-10, "{} sum {sum_err}", cone.kind_name());
                let inner =
                    pair(&pk, &DualVector::from_raw(pp.coords().to_vec())).unwrap();
                assert!(inner.abs() <= 1e-10, "{} orthogonality", cone.kind_name());
                let dk = x.sub(&pk).norm2();
                let dp = x.sub(&pp).norm2();
                let lhs = x.norm2().powi(2);
                assert!(
                    (lhs - dk * dk - dp * dp).abs() <= 1e-8 * (1.0 + lhs),
                    "{} pythagoras",
                    cone.kind_name()
                );
            }
        }
    }

    #[test]
    fn quadratic_conjugate_round_trip() {
        let q = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let phi = ConvexFunction::quadratic(q, vec![1.0, -1.0], 0.0).unwrap();
        let conj = phi.conjugate().unwrap();
        let back = conj.conjugate().unwrap();
        let mut s = crate::space::Sampler::new(3);
        for _ in 0..20 {
            let x = s.standard_normal(2);
            assert_relative_eq!(
                phi.eval_phi(&x),
                back.eval_phi(&x),
                max_relative = 1e-8,
                epsilon = 1e-10
            );
        }
    }

    fn catalog(n: usize) -> Vec<ConvexFunction> {
        vec![
            ConvexFunction::zero(n),
            ConvexFunction::linear(DualVector::from_raw(
                (0..n).map(|i| 0.3 * i as f64 - 0.5).collect(),
            )),
            ConvexFunction::l1(n, 1.0).unwrap(),
            ConvexFunction::indicator_orthant(n),
            ConvexFunction::indicator_box(vec![-1.0; n], vec![2.0; n]).unwrap(),
        ]
    }

    #[test]
    fn euclidean_moreau_identity_on_catalog() {
        let mut s = crate::space::Sampler::new(29);
        for phi in catalog(4) {
            let conj = phi.conjugate().unwrap();
            for _ in 0..50 {
                let x = s.standard_normal(4).scale(2.0);
                let p = phi.euclid_prox(&x, 1.0).unwrap();
                let q = conj.euclid_prox(&x, 1.0).unwrap();
                let err = x.sub(&p).sub(&q).norm2();
                assert!(err <= 1e-6, "Moreau identity failed for {}: {err}", phi.name);
            }
        }
    }

    #[test]
    fn prox_optimality_gap() {
        let mut s = crate::space::Sampler::new(37);
        for phi in catalog(4) {
            for _ in 0..50 {
                let x = s.standard_normal(4).scale(2.0);
                let gamma = 1.0;
                let y = phi.euclid_prox(&x, gamma).unwrap();
                let sub = DualVector::from_raw(
                    x.sub(&y).coords().iter().map(|v| v / gamma).collect(),
                );
                let gap = phi.fenchel_young_gap(&y, &sub);
                assert!(gap <= 1e-6, "prox optimality failed for {}: {gap}", phi.name);
            }
        }
    }

    proptest! {
        #[test]
        fn convexity_midpoint_check(
            xs in proptest::collection::vec(-3.0..3.0f64, 3),
            ys in proptest::collection::vec(-3.0..3.0f64, 3),
            idx in 0usize..5,
        ) {
            let phi = &catalog(3)[idx];
            let x = pv(&xs);
            let y = pv(&ys);
            let fx = phi.eval_phi(&x);
            let fy = phi.eval_phi(&y);
            prop_assume!(fx.is_finite() && fy.is_finite());
            let mid = x.add(&y).scale(0.5);
            let fm = phi.eval_phi(&mid);
            prop_assert!(fm <= 0.5 * fx + 0.5 * fy + 1e-8);
        }

        #[test]
        fn fenchel_young_inequality(
            xs in proptest::collection::vec(-3.0..3.0f64, 3),
            zs in proptest::collection::vec(-3.0..3.0f64, 3),
            idx in 0usize..5,
        ) {
            let phi = &catalog(3)[idx];
            let x = pv(&xs);
            let z = dv(&zs);
            let v = phi.eval_phi(&x);
            let vc = phi.eval_conj_phi(&z);
            // the inequality holds trivially when either side is +inf
            if v.is_finite() && vc.is_finite() {
                let inner = pair(&x, &z).unwrap();
                prop_assert!(v + vc >= inner - 1e-8 * (1.0 + inner.abs()));
            }
        }
    }
}
