//! The Legendre-function catalog: evaluation, gradients, conjugates,
//! Bregman distances, domain descriptors, and the ℓp duality mapping.
//!
//! Four geometries are shipped: `euclidean` (½‖·‖²), `quadratic_spd`
//! (½⟨x,Mx⟩ with M symmetric positive definite), `pnorm_energy` (½‖·‖_p²),
//! and `shannon_entropy` (Σ xᵢ log xᵢ − xᵢ on the closed positive orthant,
//! with 0·log 0 = 0). A fifth entry, `exp_sum` (Σ exp x*ᵢ), exists as the
//! conjugate of the entropy so that dual-side solves stay inside the catalog.
//!
//! Essential smoothness and essential strict convexity are certified
//! analytically per entry; the testable surrogates are the gradient
//! round-trip ∇f*∘∇f = Id and the strictness of the Bregman distance on
//! interior points.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{ProxError, Result};
use crate::space::{p_norm_slice, pair, DualVector, PrimalVector};

/// Effective-domain descriptor for a catalog geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainKind {
    FullSpace,
    OpenPositiveOrthant,
    ClosedPositiveOrthant,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DomainSpec {
    pub kind: DomainKind,
    /// A witness point in the interior of the domain.
    pub interior_point: PrimalVector,
}

impl DomainSpec {
    pub fn full(n: usize) -> Self {
        Self {
            kind: DomainKind::FullSpace,
            interior_point: PrimalVector::zeros(n),
        }
    }

    pub fn orthant(kind: DomainKind, n: usize) -> Self {
        Self {
            kind,
            interior_point: PrimalVector::from_raw(vec![1.0; n]),
        }
    }

    pub fn contains(&self, coords: &[f64]) -> bool {
        match self.kind {
            DomainKind::FullSpace => true,
            DomainKind::OpenPositiveOrthant => coords.iter().all(|&c| c > 0.0),
            DomainKind::ClosedPositiveOrthant => coords.iter().all(|&c| c >= 0.0),
        }
    }

    pub fn contains_interior(&self, coords: &[f64]) -> bool {
        match self.kind {
            DomainKind::FullSpace => true,
            DomainKind::OpenPositiveOrthant | DomainKind::ClosedPositiveOrthant => {
                coords.iter().all(|&c| c > 0.0)
            }
        }
    }
}

#[derive(Debug, Clone)]
enum Payload {
    Euclidean,
    Quadratic { m: DMatrix<f64>, m_inv: DMatrix<f64> },
    PnormEnergy { p: f64 },
    ShannonEntropy,
    ExpSum,
}

/// A geometry descriptor exposing f, ∇f, f*, ∇f*, domains, and coercivity.
#[derive(Debug, Clone)]
pub struct LegendreFunction {
    pub name: String,
    pub dim: usize,
    pub dom_f: DomainSpec,
    pub dom_fstar: DomainSpec,
    pub supercoercive: bool,
    payload: Payload,
}

fn require_pnorm_exponent(p: f64) -> Result<()> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(ProxError::UnsupportedGeometry(format!(
            "pnorm_energy requires 1 < p < inf, got {p}"
        )));
    }
    Ok(())
}

impl LegendreFunction {
    pub fn euclidean(n: usize) -> Self {
        Self {
            name: "euclidean".into(),
            dim: n,
            dom_f: DomainSpec::full(n),
            dom_fstar: DomainSpec::full(n),
            supercoercive: true,
            payload: Payload::Euclidean,
        }
    }

    /// ½⟨x, Mx⟩ for a symmetric positive definite M.
    pub fn quadratic_spd(m: DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n || n == 0 {
            return Err(ProxError::Invalid("matrix must be square and nonempty".into()));
        }
        let scale = m.amax().max(1.0);
        for i in 0..n {
            for j in 0..i {
                if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                    return Err(ProxError::Invalid("matrix is not symmetric".into()));
                }
            }
        }
        let eig = m.clone().symmetric_eigen();
        let min_eig = eig.eigenvalues.min();
        if !(min_eig > 0.0) {
            return Err(ProxError::Invalid(format!(
                "matrix is not positive definite (min eigenvalue {min_eig})"
            )));
        }
        let m_inv = m
            .clone()
            .cholesky()
            .ok_or_else(|| ProxError::Invalid("cholesky failed".into()))?
            .inverse();
        Ok(Self {
            name: "quadratic_spd".into(),
            dim: n,
            dom_f: DomainSpec::full(n),
            dom_fstar: DomainSpec::full(n),
            supercoercive: true,
            payload: Payload::Quadratic { m, m_inv },
        })
    }

    /// ½‖·‖_p² with 1 < p < ∞.
    pub fn pnorm_energy(n: usize, p: f64) -> Result<Self> {
        require_pnorm_exponent(p)?;
        Ok(Self {
            name: format!("pnorm_energy({p})"),
            dim: n,
            dom_f: DomainSpec::full(n),
            dom_fstar: DomainSpec::full(n),
            supercoercive: true,
            payload: Payload::PnormEnergy { p },
        })
    }

    /// Σ xᵢ log xᵢ − xᵢ on the closed positive orthant, 0·log 0 = 0.
    pub fn shannon_entropy(n: usize) -> Self {
        Self {
            name: "shannon_entropy".into(),
            dim: n,
            dom_f: DomainSpec::orthant(DomainKind::ClosedPositiveOrthant, n),
            dom_fstar: DomainSpec::full(n),
            supercoercive: true,
            payload: Payload::ShannonEntropy,
        }
    }

    /// Σ exp x*ᵢ — the conjugate of `shannon_entropy`. Not supercoercive.
    pub fn exp_sum(n: usize) -> Self {
        Self {
            name: "exp_sum".into(),
            dim: n,
            dom_f: DomainSpec::full(n),
            dom_fstar: DomainSpec::orthant(DomainKind::ClosedPositiveOrthant, n),
            supercoercive: false,
            payload: Payload::ExpSum,
        }
    }

    /// The conjugate geometry f*, itself a Legendre function.
    pub fn conjugate(&self) -> LegendreFunction {
        match &self.payload {
            Payload::Euclidean => Self::euclidean(self.dim),
            Payload::Quadratic { m, m_inv } => Self {
                name: "quadratic_spd_conjugate".into(),
                dim: self.dim,
                dom_f: DomainSpec::full(self.dim),
                dom_fstar: DomainSpec::full(self.dim),
                supercoercive: true,
                payload: Payload::Quadratic {
                    m: m_inv.clone(),
                    m_inv: m.clone(),
                },
            },
            Payload::PnormEnergy { p } => {
                Self::pnorm_energy(self.dim, p / (p - 1.0)).expect("conjugate exponent valid")
            }
            Payload::ShannonEntropy => Self::exp_sum(self.dim),
            Payload::ExpSum => Self::shannon_entropy(self.dim),
        }
    }

    fn check_dim(&self, coords: &[f64]) -> Result<()> {
        if coords.len() != self.dim {
            return Err(ProxError::DimensionMismatch {
                left: self.dim,
                right: coords.len(),
            });
        }
        Ok(())
    }

    /// f(x) ∈ (−∞, +∞]; +∞ exactly off dom f.
    pub fn eval_f(&self, x: &PrimalVector) -> f64 {
        self.eval_raw(x.coords())
    }

    fn eval_raw(&self, c: &[f64]) -> f64 {
        match &self.payload {
            Payload::Euclidean => 0.5 * c.iter().map(|v| v * v).sum::<f64>(),
            Payload::Quadratic { m, .. } => {
                let v = DVector::from_column_slice(c);
                0.5 * (m * &v).dot(&v)
            }
            Payload::PnormEnergy { p } => {
                let n = p_norm_slice(c, *p).expect("validated exponent");
                0.5 * n * n
            }
            Payload::ShannonEntropy => {
                if c.iter().any(|&v| v < 0.0) {
                    return f64::INFINITY;
                }
                c.iter()
                    .map(|&v| if v == 0.0 { 0.0 } else { v * v.ln() - v })
                    .sum()
            }
            Payload::ExpSum => c.iter().map(|&v| v.exp()).sum(),
        }
    }

    /// ∇f(x) for x ∈ int dom f.
    pub fn grad_f(&self, x: &PrimalVector) -> Result<DualVector> {
        self.check_dim(x.coords())?;
        if !self.dom_f.contains_interior(x.coords()) {
            return Err(ProxError::DomainError {
                geometry: self.name.clone(),
                detail: "point not in the interior of dom f".into(),
            });
        }
        Ok(DualVector::from_raw(self.grad_raw(x.coords())))
    }

    fn grad_raw(&self, c: &[f64]) -> Vec<f64> {
        match &self.payload {
            Payload::Euclidean => c.to_vec(),
            Payload::Quadratic { m, .. } => {
                let v = DVector::from_column_slice(c);
                (m * v).as_slice().to_vec()
            }
            Payload::PnormEnergy { p } => pnorm_energy_grad(c, *p),
            Payload::ShannonEntropy => c.iter().map(|&v| v.ln()).collect(),
            Payload::ExpSum => c.iter().map(|&v| v.exp()).collect(),
        }
    }

    /// f*(x*), closed form per entry.
    pub fn eval_conj(&self, xstar: &DualVector) -> f64 {
        self.conjugate().eval_raw(xstar.coords())
    }

    /// ∇f*(x*) for x* ∈ int dom f*; inverts grad_f.
    pub fn grad_conj(&self, xstar: &DualVector) -> Result<PrimalVector> {
        self.check_dim(xstar.coords())?;
        if !self.dom_fstar.contains_interior(xstar.coords()) {
            return Err(ProxError::DomainError {
                geometry: format!("{}*", self.name),
                detail: "point not in the interior of dom f*".into(),
            });
        }
        Ok(PrimalVector::from_raw(
            self.conjugate().grad_raw(xstar.coords()),
        ))
    }

    /// Bregman distance D_f(y, x) = f(y) − f(x) − ⟨y − x, ∇f(x)⟩, or +∞
    /// when x ∉ int dom f.
    pub fn bregman(&self, y: &PrimalVector, x: &PrimalVector) -> f64 {
        if !self.dom_f.contains_interior(x.coords()) {
            return f64::INFINITY;
        }
        let fy = self.eval_f(y);
        if !fy.is_finite() {
            return f64::INFINITY;
        }
        let fx = self.eval_f(x);
        let g = DualVector::from_raw(self.grad_raw(x.coords()));
        let inner = pair(&y.sub(x), &g).expect("dimensions checked");
        (fy - fx - inner).max(0.0)
    }
}

fn pnorm_energy_grad(c: &[f64], p: f64) -> Vec<f64> {
    let n = p_norm_slice(c, p).expect("validated exponent");
    if n == 0.0 {
        return vec![0.0; c.len()];
    }
    let t = n.powf(2.0 - p);
    c.iter()
        .map(|&v| t * v.abs().powf(p - 1.0) * v.signum())
        .collect()
}

/// Duality mapping of (R^n, ‖·‖_p): J = ∇(½‖·‖_p²).
pub fn duality_map(p: f64, x: &PrimalVector) -> Result<DualVector> {
    require_pnorm_exponent(p)?;
    Ok(DualVector::from_raw(pnorm_energy_grad(x.coords(), p)))
}
