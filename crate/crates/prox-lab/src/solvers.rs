//! Composite minimization and low-dimensional brute-force oracles.
//!
//! `minimize_composite` is a proximal-gradient iteration with backtracking on
//! the smooth part; a trial step is rejected (step halved) when the candidate
//! leaves the guarded interior. Termination is by a caller-supplied
//! Fenchel–Young gap certificate, a stall on relative objective decrease, or
//! the iteration budget.
//!
//! `brute_force_min` and `numeric_conjugate` are grid oracles for n <= 3,
//! independent of any solver path; they back the oracle-equivalence suites.

use crate::convex::ConvexFunction;
use crate::error::{ProxError, Result};
use crate::space::{DualVector, PrimalVector, ToleranceProfile};

/// A composite problem: minimize smooth(y) + nonsmooth(y) subject to the
/// interior guard along the iterates.
pub struct CompositeProblem<'a> {
    pub smooth_value: Box<dyn Fn(&PrimalVector) -> f64 + 'a>,
    pub smooth_grad: Box<dyn Fn(&PrimalVector) -> DualVector + 'a>,
    pub nonsmooth: &'a ConvexFunction,
    /// Certifies that a point lies in the interior of the smooth part's domain.
    pub interior_guard: Box<dyn Fn(&PrimalVector) -> bool + 'a>,
    /// Fenchel–Young gap of the target inclusion at the current iterate.
    pub certificate: Box<dyn Fn(&PrimalVector) -> f64 + 'a>,
    pub init: PrimalVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub minimizer: PrimalVector,
    pub objective: f64,
    pub iterations: usize,
    pub gap_certificate: f64,
    pub converged: bool,
}

const BACKTRACK_FACTOR: f64 = 0.5;
const INITIAL_STEP: f64 = 1.0;
pub const DEFAULT_MAX_ITER: usize = 20_000;
const STALL_WINDOW: usize = 5;

/// Proximal gradient with backtracking and interior guarding.
pub fn minimize_composite(
    prob: &CompositeProblem<'_>,
    tol: &ToleranceProfile,
    max_iter: usize,
) -> Result<SolveResult> {
    if max_iter == 0 {
        return Err(ProxError::Invalid("max_iter must be >= 1".into()));
    }
    let mut y = prob.init.clone();
    if !(prob.interior_guard)(&y) || !prob.nonsmooth.eval_phi(&y).is_finite() {
        return Err(ProxError::InfeasibleStart(
            "initial point fails the interior guard or has infinite objective".into(),
        ));
    }
    let objective = |p: &PrimalVector| (prob.smooth_value)(p) + prob.nonsmooth.eval_phi(p);

    let mut obj = objective(&y);
    if !obj.is_finite() {
        return Err(ProxError::InfeasibleStart(
            "objective not finite at the initial point".into(),
        ));
    }

    let mut best = y.clone();
    let mut best_obj = obj;
    let mut best_cert = (prob.certificate)(&y);
    let mut step = INITIAL_STEP;
    let mut stall = 0usize;
    let mut iterations = 0usize;

    for it in 0..max_iter {
        iterations = it + 1;
        if best_cert <= tol.gap_tol {
            break;
        }
        let grad = (prob.smooth_grad)(&y);
        let sval = (prob.smooth_value)(&y);

        // Backtracking: halve the step until the candidate stays interior and
        // satisfies the quadratic upper-bound decrease condition.
        let mut accepted: Option<(PrimalVector, f64)> = None;
        let mut t = step;
        while t > 1e-18 {
            let trial = PrimalVector::from_raw(
                y.coords()
                    .iter()
                    .zip(grad.coords())
                    .map(|(yi, gi)| yi - t * gi)
                    .collect(),
            );
            let cand = prob.nonsmooth.euclid_prox(&trial, t)?;
            if (prob.interior_guard)(&cand) {
                let s_cand = (prob.smooth_value)(&cand);
                if s_cand.is_finite() {
                    let diff = cand.sub(&y);
                    let lin: f64 = diff
                        .coords()
                        .iter()
                        .zip(grad.coords())
                        .map(|(d, g)| d * g)
                        .sum();
                    let quad = diff.coords().iter().map(|d| d * d).sum::<f64>() / (2.0 * t);
                    if s_cand <= sval + lin + quad + 1e-14 * (1.0 + sval.abs()) {
                        accepted = Some((cand, t));
                        break;
                    }
                }
            }
            t *= BACKTRACK_FACTOR;
        }

        let Some((cand, used)) = accepted else {
            break; // step collapsed; return best iterate so far
        };
        // mild step growth after a clean acceptance
        step = (used * 1.5).min(1e6);

        let new_obj = objective(&cand);
        let decrease = obj - new_obj;
        let moved = cand.sub(&y).norm2();
        y = cand;
        if new_obj <= best_obj {
            best_obj = new_obj;
            best = y.clone();
        }
        let cert = (prob.certificate)(&y);
        if cert < best_cert {
            best_cert = cert;
            // certificate is the authoritative measure; keep its iterate
            best = y.clone();
            best_obj = best_obj.min(new_obj);
        }
        obj = new_obj;

        if decrease.abs() / (1.0 + obj.abs()) < tol.value_tol
            && moved <= tol.value_tol * (1.0 + y.norm2())
        {
            stall += 1;
            if stall >= STALL_WINDOW {
                break;
            }
        } else {
            stall = 0;
        }
    }

    let converged = best_cert <= tol.gap_tol;
    Ok(SolveResult {
        minimizer: best,
        objective: best_obj,
        iterations,
        gap_certificate: best_cert,
        converged,
    })
}

/// Axis-aligned search box for the grid oracles.
#[derive(Debug, Clone)]
pub struct GridBox {
    pub bounds: Vec<(f64, f64)>,
}

impl GridBox {
    pub fn cube(n: usize, lo: f64, hi: f64) -> Self {
        Self {
            bounds: vec![(lo, hi); n],
        }
    }

    fn spacing(&self, resolution: usize) -> f64 {
        self.bounds
            .iter()
            .map(|(l, u)| (u - l) / (resolution as f64 - 1.0))
            .fold(0.0, f64::max)
    }
}

/// Half the refined grid spacing: the documented accuracy of the oracles.
pub fn oracle_accuracy(bx: &GridBox, resolution: usize) -> f64 {
    bx.spacing(resolution) / 10.0 / 2.0
}

/// The refined grid spacing (refinement is 10x finer than the coarse grid).
pub fn refined_spacing(bx: &GridBox, resolution: usize) -> f64 {
    bx.spacing(resolution) / 10.0
}

fn grid_scan<F>(
    objective: &F,
    bounds: &[(f64, f64)],
    resolution: usize,
) -> Option<(Vec<f64>, f64, bool)>
where
    F: Fn(&PrimalVector) -> f64,
{
    let n = bounds.len();
    let mut idx = vec![0usize; n];
    let mut best: Option<(Vec<f64>, f64, bool)> = None;
    loop {
        let point: Vec<f64> = idx
            .iter()
            .zip(bounds)
            .map(|(&i, (l, u))| l + (u - l) * i as f64 / (resolution as f64 - 1.0))
            .collect();
        let v = objective(&PrimalVector::from_raw(point.clone()));
        if v.is_finite() {
            // lowest lexicographic grid index wins ties (strict improvement only)
            let better = match &best {
                None => true,
                Some((_, bv, _)) => v < *bv,
            };
            if better {
                let on_boundary = idx.iter().any(|&i| i == 0 || i == resolution - 1);
                best = Some((point, v, on_boundary));
            }
        }
        // advance the multi-index
        let mut k = n;
        while k > 0 {
            k -= 1;
            idx[k] += 1;
            if idx[k] < resolution {
                break;
            }
            idx[k] = 0;
            if k == 0 {
                return best;
            }
        }
    }
}

/// Grid argmin over the box with one 10x-finer refinement pass around the
/// incumbent. Accuracy: half the refined grid spacing per coordinate.
pub fn brute_force_min<F>(
    objective: F,
    bx: &GridBox,
    resolution: usize,
) -> Result<PrimalVector>
where
    F: Fn(&PrimalVector) -> f64,
{
    let n = bx.bounds.len();
    if n > 3 {
        return Err(ProxError::Invalid("brute force oracle limited to n <= 3".into()));
    }
    if resolution < 2 || resolution > 401 {
        return Err(ProxError::Invalid("resolution must be in 2..=401".into()));
    }
    let (coarse, _, _) = grid_scan(&objective, &bx.bounds, resolution)
        .ok_or_else(|| ProxError::Invalid("all grid points infeasible".into()))?;

    // refinement: +-1 coarse spacing around the incumbent at 10x resolution
    let refine_bounds: Vec<(f64, f64)> = coarse
        .iter()
        .zip(&bx.bounds)
        .map(|(&c, (l, u))| {
            let h = (u - l) / (resolution as f64 - 1.0);
            ((c - h).max(*l), (c + h).min(*u))
        })
        .collect();
    let (fine, _, _) = grid_scan(&objective, &refine_bounds, 21)
        .ok_or_else(|| ProxError::Invalid("refinement grid infeasible".into()))?;
    Ok(PrimalVector::from_raw(fine))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericConjugate {
    pub value: f64,
    /// Set when the maximum was attained on the box boundary (box likely too
    /// small; the true supremum may be +inf).
    pub boundary_warning: bool,
}

/// Grid supremum of ⟨x, x*⟩ − g(x) with the same refinement pass as
/// `brute_force_min`.
pub fn numeric_conjugate<G>(
    g: G,
    xstar: &DualVector,
    bx: &GridBox,
    resolution: usize,
) -> Result<NumericConjugate>
where
    G: Fn(&PrimalVector) -> f64,
{
    let n = bx.bounds.len();
    if n > 2 {
        return Err(ProxError::Invalid("numeric conjugate limited to n <= 2".into()));
    }
    if resolution < 2 || resolution > 401 {
        return Err(ProxError::Invalid("resolution must be in 2..=401".into()));
    }
    let xs = xstar.coords().to_vec();
    let negated = |p: &PrimalVector| {
        let inner: f64 = p.coords().iter().zip(&xs).map(|(a, b)| a * b).sum();
        let gv = g(p);
        if gv.is_finite() {
            gv - inner
        } else {
            f64::INFINITY
        }
    };
    let (coarse, coarse_val, on_boundary) = grid_scan(&negated, &bx.bounds, resolution)
        .ok_or_else(|| ProxError::Invalid("all grid points infeasible".into()))?;
    let refine_bounds: Vec<(f64, f64)> = coarse
        .iter()
        .zip(&bx.bounds)
        .map(|(&c, (l, u))| {
            let h = (u - l) / (resolution as f64 - 1.0);
            ((c - h).max(*l), (c + h).min(*u))
        })
        .collect();
    let (_, fine_val, _) = grid_scan(&negated, &refine_bounds, 21)
        .ok_or_else(|| ProxError::Invalid("refinement grid infeasible".into()))?;
    Ok(NumericConjugate {
        value: -fine_val.min(coarse_val),
        boundary_warning: on_boundary,
    })
}
