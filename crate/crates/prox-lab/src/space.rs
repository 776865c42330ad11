//! Primal/dual vector arithmetic, the canonical pairing, ℓp norms,
//! tolerance policy, and seeded randomness for scenario generation.
//!
//! `PrimalVector` and `DualVector` share a coordinate representation but are
//! distinct types: the pairing only accepts one of each, so mixed-role misuse
//! is rejected at compile time. The duality mapping, not the representation,
//! carries the geometry.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{ProxError, Result};

/// A point of the primal space X ≅ R^n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimalVector(Vec<f64>);

/// A point of the dual space X* ≅ R^n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualVector(Vec<f64>);

fn check_finite(coords: &[f64]) -> Result<()> {
    if coords.is_empty() {
        return Err(ProxError::Invalid("vector must have length >= 1".into()));
    }
    if coords.iter().any(|c| !c.is_finite()) {
        return Err(ProxError::Invalid("vector has non-finite entry".into()));
    }
    Ok(())
}

macro_rules! vector_impl {
    ($name:ident) => {
        impl $name {
            pub fn new(coords: Vec<f64>) -> Result<Self> {
                check_finite(&coords)?;
                Ok(Self(coords))
            }

            /// Construction without the finiteness check, for trusted internal arithmetic.
            pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
                Self(coords)
            }

            pub fn zeros(n: usize) -> Self {
                Self(vec![0.0; n])
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn coords(&self) -> &[f64] {
                &self.0
            }

            pub fn add(&self, other: &Self) -> Self {
                Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
            }

            pub fn sub(&self, other: &Self) -> Self {
                Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
            }

            pub fn scale(&self, t: f64) -> Self {
                Self(self.0.iter().map(|a| a * t).collect())
            }

            pub fn norm2(&self) -> f64 {
                self.0.iter().map(|a| a * a).sum::<f64>().sqrt()
            }

            pub fn norm_inf(&self) -> f64 {
                self.0.iter().fold(0.0, |m: f64, a| m.max(a.abs()))
            }
        }
    };
}

vector_impl!(PrimalVector);
vector_impl!(DualVector);

impl PrimalVector {
    /// Reinterpret as a dual point. Used only where an operator output
    /// genuinely changes role (e.g. building a dual-side scenario).
    pub fn into_dual(self) -> DualVector {
        DualVector(self.0)
    }
}

impl DualVector {
    pub fn into_primal(self) -> PrimalVector {
        PrimalVector(self.0)
    }
}

/// Canonical bilinear pairing ⟨x, x*⟩ = Σ x_i x*_i.
pub fn pair(x: &PrimalVector, xstar: &DualVector) -> Result<f64> {
    if x.dim() != xstar.dim() {
        return Err(ProxError::DimensionMismatch {
            left: x.dim(),
            right: xstar.dim(),
        });
    }
    Ok(x.coords()
        .iter()
        .zip(xstar.coords())
        .map(|(a, b)| a * b)
        .sum())
}

/// ℓp norm on raw coordinates, 1 < p < ∞.
pub fn p_norm_slice(coords: &[f64], p: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(ProxError::UnsupportedGeometry(format!(
            "p-norm requires 1 < p < inf, got {p}"
        )));
    }
    // Scale out the largest entry so x^p does not overflow.
    let m = coords.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    if m == 0.0 {
        return Ok(0.0);
    }
    let s: f64 = coords.iter().map(|c| (c.abs() / m).powf(p)).sum();
    Ok(m * s.powf(1.0 / p))
}

pub fn p_norm(x: &PrimalVector, p: f64) -> Result<f64> {
    p_norm_slice(x.coords(), p)
}

pub fn p_norm_dual(xstar: &DualVector, p: f64) -> Result<f64> {
    p_norm_slice(xstar.coords(), p)
}

/// Tolerances used across solves, certificates, and suite verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceProfile {
    /// Scalar identities and objective values.
    pub value_tol: f64,
    /// Vector reconstructions, relative to 1 + ‖x‖.
    pub vector_tol: f64,
    /// Central finite-difference step.
    pub fd_step: f64,
    /// Fenchel–Young gap certificates.
    pub gap_tol: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        Self {
            value_tol: 1e-8,
            vector_tol: 1e-6,
            fd_step: 1e-6,
            gap_tol: 1e-6,
        }
    }
}

impl ToleranceProfile {
    pub fn validate(&self) -> Result<()> {
        let all_pos = self.value_tol > 0.0
            && self.vector_tol > 0.0
            && self.fd_step > 0.0
            && self.gap_tol > 0.0;
        if !all_pos {
            return Err(ProxError::Invalid("tolerances must be strictly positive".into()));
        }
        if self.fd_step * self.fd_step < f64::EPSILON {
            return Err(ProxError::Invalid(
                "fd_step^2 must be at least machine epsilon".into(),
            ));
        }
        Ok(())
    }
}

/// Deterministic scenario sampler, seeded and recorded in reports.
pub struct Sampler {
    rng: ChaCha8Rng,
    pub seed: u64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }

    pub fn standard_normal(&mut self, n: usize) -> PrimalVector {
        let coords = (0..n)
            .map(|_| StandardNormal.sample(&mut self.rng))
            .collect();
        PrimalVector::from_raw(coords)
    }

    pub fn standard_normal_dual(&mut self, n: usize) -> DualVector {
        self.standard_normal(n).into_dual()
    }

    pub fn uniform(&mut self, n: usize, lo: f64, hi: f64) -> PrimalVector {
        use rand::Rng;
        let coords = (0..n).map(|_| self.rng.gen_range(lo..hi)).collect();
        PrimalVector::from_raw(coords)
    }
}
