//! Finite frames in R^n: frame operator, canonical dual frame, optimal
//! bounds, and the frame-adapted decomposition
//!
//! ```text
//! x = a(x) + sum_i <b(x), e*_i> e*_i
//! ```
//!
//! where a(x) minimizes φ(y) + ½Σ|⟨x−y, e_i⟩|² and b(x) minimizes
//! φ*(x*) − ⟨x*, x⟩ + ½Σ|⟨x*, e*_i⟩|². Both solves run through the
//! quadratic geometry f = ½⟨·, S·⟩ with S the frame operator, so this is
//! the S-weighted instance of the general decomposition.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::convex::ConvexFunction;
use crate::decomposition::decompose;
use crate::error::{ProxError, Result};
use crate::legendre::LegendreFunction;
use crate::prox::PairingLedger;
use crate::space::{pair, DualVector, PrimalVector, Sampler, ToleranceProfile};

/// A spanning family of m ≥ n vectors with its frame operator S = Σ e_i e_iᵀ,
/// canonical dual frame e*_i = S⁻¹e_i, and optimal bounds α, β (the extreme
/// eigenvalues of S).
#[derive(Debug, Clone)]
pub struct FrameSystem {
    pub vectors: Vec<PrimalVector>,
    pub s: DMatrix<f64>,
    pub s_inv: DMatrix<f64>,
    pub dual_vectors: Vec<PrimalVector>,
    pub alpha: f64,
    pub beta: f64,
}

const SPAN_TOL: f64 = 1e-10;

pub fn build_frame(vectors: &[PrimalVector]) -> Result<FrameSystem> {
    if vectors.is_empty() {
        return Err(ProxError::NotAFrame);
    }
    let n = vectors[0].dim();
    if vectors.len() < n || vectors.iter().any(|v| v.dim() != n) {
        return Err(ProxError::NotAFrame);
    }
    let mut s = DMatrix::<f64>::zeros(n, n);
    for v in vectors {
        let e = DVector::from_column_slice(v.coords());
        s += &e * e.transpose();
    }
    let eig = s.clone().symmetric_eigen();
    let alpha = eig.eigenvalues.min();
    let beta = eig.eigenvalues.max();
    if alpha <= SPAN_TOL * beta.max(1.0) {
        return Err(ProxError::NotAFrame);
    }
    let s_inv = s
        .clone()
        .cholesky()
        .ok_or(ProxError::NotAFrame)?
        .inverse();
    let dual_vectors = vectors
        .iter()
        .map(|v| {
            let d = &s_inv * DVector::from_column_slice(v.coords());
            PrimalVector::new(d.iter().copied().collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FrameSystem {
        vectors: vectors.to_vec(),
        s,
        s_inv,
        dual_vectors,
        alpha,
        beta,
    })
}

impl FrameSystem {
    pub fn dim(&self) -> usize {
        self.s.nrows()
    }

    /// Analysis energy Σ|⟨x, e_i⟩|².
    pub fn analysis_energy(&self, x: &PrimalVector) -> f64 {
        self.vectors
            .iter()
            .map(|e| {
                let c = pair(x, &e.clone().into_dual()).expect("dims checked");
                c * c
            })
            .sum()
    }

    /// Dual-frame synthesis Σ⟨z, e*_i⟩e*_i (which equals S⁻¹z).
    pub fn dual_synthesis(&self, z: &PrimalVector) -> PrimalVector {
        let mut out = vec![0.0; self.dim()];
        for d in &self.dual_vectors {
            let c = pair(z, &d.clone().into_dual()).expect("dims checked");
            for (o, di) in out.iter_mut().zip(d.coords()) {
                *o += c * di;
            }
        }
        PrimalVector::new(out).expect("finite")
    }

    pub fn apply_s_inv(&self, z: &PrimalVector) -> PrimalVector {
        let v = &self.s_inv * DVector::from_column_slice(z.coords());
        PrimalVector::new(v.iter().copied().collect()).expect("finite")
    }
}

/// The quadratic Legendre function f = ½⟨·, S·⟩ of the frame, with its
/// conjugate cross-checked against ½Σ|⟨x*, e*_i⟩|² on seeded samples.
pub fn frame_legendre(fs: &FrameSystem) -> Result<LegendreFunction> {
    let f = LegendreFunction::quadratic_spd(fs.s.clone())?;
    let mut sampler = Sampler::new(0x0f_a3_7e);
    for _ in 0..100 {
        let xstar = sampler.standard_normal_dual(fs.dim());
        let direct = f.eval_conj(&xstar);
        let coeff: f64 = fs
            .dual_vectors
            .iter()
            .map(|d| {
                let c = pair(d, &xstar).expect("dims");
                0.5 * c * c
            })
            .sum();
        if (direct - coeff).abs() > 1e-8 * (1.0 + direct.abs()) {
            return Err(ProxError::Invalid(format!(
                "frame conjugate mismatch: {direct} vs {coeff}"
            )));
        }
    }
    Ok(f)
}

/// Outcome of the frame decomposition of one point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameDecomposition {
    pub a: PrimalVector,
    pub b: DualVector,
    /// Σ⟨b, e*_i⟩e*_i
    pub synthesis: PrimalVector,
    /// ‖x − a − synthesis‖
    pub reconstruction_residual: f64,
    /// ‖synthesis − S⁻¹b‖ (dual-frame synthesis against the inverse operator)
    pub synthesis_residual: f64,
}

pub fn frame_decompose(
    fs: &FrameSystem,
    phi: &ConvexFunction,
    x: &PrimalVector,
    tol: &ToleranceProfile,
) -> Result<FrameDecomposition> {
    let f = frame_legendre(fs)?;
    let rep = decompose(&f, phi, x, &PairingLedger::default(), tol, 0)?;
    let b_primal = rep.dstar.clone().into_primal();
    let synthesis = fs.dual_synthesis(&b_primal);
    let reconstruction_residual = x.sub(&rep.p).sub(&synthesis).norm2();
    let synthesis_residual = synthesis.sub(&fs.apply_s_inv(&b_primal)).norm2();
    Ok(FrameDecomposition {
        a: rep.p,
        b: rep.dstar,
        synthesis,
        reconstruction_residual,
        synthesis_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pv(c: &[f64]) -> PrimalVector {
        PrimalVector::new(c.to_vec()).unwrap()
    }

    fn mercedes() -> FrameSystem {
        build_frame(&[pv(&[1.0, 0.0]), pv(&[0.0, 1.0]), pv(&[1.0, 1.0])]).unwrap()
    }

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    #[test]
    fn overcomplete_pair_example() {
        let fs = mercedes();
        assert_relative_eq!(fs.s[(0, 0)], 2.0);
        assert_relative_eq!(fs.s[(0, 1)], 1.0);
        assert_relative_eq!(fs.s[(1, 1)], 2.0);
        assert_relative_eq!(fs.alpha, 1.0, max_relative = 1e-12);
        assert_relative_eq!(fs.beta, 3.0, max_relative = 1e-12);
        let e3 = &fs.dual_vectors[2];
        assert!(e3.sub(&pv(&[1.0 / 3.0, 1.0 / 3.0])).norm2() <= 1e-12);
    }

    #[test]
    fn orthonormal_basis_is_parseval() {
        let fs = build_frame(&[pv(&[1.0, 0.0]), pv(&[0.0, 1.0])]).unwrap();
        assert_relative_eq!(fs.alpha, 1.0);
        assert_relative_eq!(fs.beta, 1.0);
        for (e, d) in fs.vectors.iter().zip(&fs.dual_vectors) {
            assert!(e.sub(d).norm2() <= 1e-12);
        }
    }

    #[test]
    fn non_spanning_family_rejected() {
        assert!(matches!(
            build_frame(&[pv(&[1.0, 0.0])]),
            Err(ProxError::NotAFrame)
        ));
        assert!(matches!(
            build_frame(&[pv(&[1.0, 0.0]), pv(&[2.0, 0.0])]),
            Err(ProxError::NotAFrame)
        ));
    }

    #[test]
    fn frame_operator_and_bounds_on_samples() {
        let fs = mercedes();
        let mut s = Sampler::new(5);
        for _ in 0..100 {
            let x = s.standard_normal(2);
            let energy = fs.analysis_energy(&x);
            let nx2 = x.norm2().powi(2);
            assert!(fs.alpha * nx2 <= energy + 1e-10);
            assert!(energy <= fs.beta * nx2 + 1e-10);
            // the bounds are extremal: an inflated beta fails as a lower bound
            assert!(1.01 * fs.beta * nx2 > energy);
            // perfect reconstruction through the canonical dual frame
            let mut rec = vec![0.0; 2];
            for (e, d) in fs.vectors.iter().zip(&fs.dual_vectors) {
                let c = pair(&x, &e.clone().into_dual()).unwrap();
                for (r, di) in rec.iter_mut().zip(d.coords()) {
                    *r += c * di;
                }
            }
            assert!(x.sub(&pv(&rec)).norm2() <= 1e-6 * (1.0 + x.norm2()));
        }
    }

    #[test]
    fn frame_legendre_values() {
        let fs = mercedes();
        let f = frame_legendre(&fs).unwrap();
        assert_relative_eq!(f.eval_f(&pv(&[1.0, 0.0])), 1.0, max_relative = 1e-12);
        assert_relative_eq!(
            f.eval_conj(&DualVector::new(vec![1.0, 0.0]).unwrap()),
            1.0 / 3.0,
            max_relative = 1e-10
        );

        let ortho = build_frame(&[pv(&[1.0, 0.0]), pv(&[0.0, 1.0])]).unwrap();
        let fo = frame_legendre(&ortho).unwrap();
        assert_relative_eq!(fo.eval_f(&pv(&[3.0, 4.0])), 12.5, max_relative = 1e-12);
    }

    #[test]
    fn zero_phi_frame_decomposition() {
        let fs = mercedes();
        let phi = ConvexFunction::zero(2);
        let x = pv(&[0.7, -1.3]);
        let d = frame_decompose(&fs, &phi, &x, &tol()).unwrap();
        assert!(d.a.sub(&x).norm2() <= 1e-6);
        assert!(d.b.norm2() <= 1e-6);
        assert!(d.reconstruction_residual <= 1e-6);
    }

    #[test]
    fn orthant_frame_decomposition() {
        let fs = mercedes();
        let phi = ConvexFunction::indicator_orthant(2);
        let x = pv(&[1.0, -2.0]);
        let d = frame_decompose(&fs, &phi, &x, &tol()).unwrap();
        assert!(d.reconstruction_residual <= 1e-6, "{}", d.reconstruction_residual);
        assert!(d.synthesis_residual <= 1e-8, "{}", d.synthesis_residual);
        // a(x) is the S-weighted projection onto the orthant
        assert!(d.a.coords().iter().all(|&c| c >= -1e-7));
    }

    #[test]
    fn orthonormal_reduction_to_prox_pair() {
        let fs = build_frame(&[pv(&[1.0, 0.0]), pv(&[0.0, 1.0])]).unwrap();
        let phis = vec![
            ConvexFunction::zero(2),
            ConvexFunction::l1(2, 1.0).unwrap(),
            ConvexFunction::indicator_orthant(2),
            ConvexFunction::indicator_box(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap(),
            ConvexFunction::linear(DualVector::new(vec![0.4, -0.2]).unwrap()),
        ];
        let mut s = Sampler::new(17);
        for phi in &phis {
            let conj = phi.conjugate().unwrap();
            for _ in 0..5 {
                let x = s.standard_normal(2).scale(1.5);
                let d = frame_decompose(&fs, phi, &x, &tol()).unwrap();
                let p1 = phi.euclid_prox(&x, 1.0).unwrap();
                let p2 = conj.euclid_prox(&x, 1.0).unwrap();
                assert!(
                    d.a.sub(&p1).norm2() <= 1e-6 * (1.0 + x.norm2()),
                    "a vs prox for {}",
                    phi.name
                );
                assert!(
                    d.b.clone().into_primal().sub(&p2).norm2() <= 1e-6 * (1.0 + x.norm2()),
                    "b vs conjugate prox for {}",
                    phi.name
                );
            }
        }
    }

    #[test]
    fn soft_threshold_frame_example() {
        let fs = build_frame(&[pv(&[1.0, 0.0]), pv(&[0.0, 1.0])]).unwrap();
        let phi = ConvexFunction::l1(2, 1.0).unwrap();
        let d = frame_decompose(&fs, &phi, &pv(&[2.0, -0.5]), &tol()).unwrap();
        assert!(d.a.sub(&pv(&[1.0, 0.0])).norm2() <= 1e-6);
        assert!(
            d.b.sub(&DualVector::new(vec![1.0, -0.5]).unwrap()).norm2() <= 1e-6,
            "{:?}",
            d.b
        );
    }

    #[test]
    fn random_wide_frame_reconstructs() {
        let mut s = Sampler::new(99);
        let vectors: Vec<_> = (0..8).map(|_| s.standard_normal(3)).collect();
        let fs = build_frame(&vectors).unwrap();
        let phi = ConvexFunction::l1(3, 0.5).unwrap();
        for _ in 0..10 {
            let x = s.standard_normal(3).scale(2.0);
            let d = frame_decompose(&fs, &phi, &x, &tol()).unwrap();
            assert!(
                d.reconstruction_residual <= 1e-6 * (1.0 + x.norm2()),
                "{}",
                d.reconstruction_residual
            );
            assert!(d.synthesis_residual <= 1e-8);
        }
    }
}
