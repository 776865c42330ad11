//! Bregman proximity under the Shannon entropy geometry, where the
//! multiplicative closed form p = x * exp(-c) is available for linear phi.

use prox_lab::convex::ConvexFunction;
use prox_lab::legendre::LegendreFunction;
use prox_lab::prox::{bprox, PairingLedger};
use prox_lab::solvers::DEFAULT_MAX_ITER;
use prox_lab::space::{DualVector, PrimalVector, ToleranceProfile};

fn main() {
    let f = LegendreFunction::shannon_entropy(3);
    let x = PrimalVector::new(vec![1.0, 0.5, 2.0]).unwrap();
    let c = DualVector::new(vec![1.0, 0.0, -0.5]).unwrap();
    let phi = ConvexFunction::linear(c.clone());
    let tol = ToleranceProfile::default();

    println!("f(x)   = {:.6}", f.eval_f(&x));
    println!("grad f = {:?}", f.grad_f(&x).unwrap().coords());
    let y = PrimalVector::new(vec![2.0, 0.25, 2.0]).unwrap();
    println!("D_f(y, x) = {:.6}", f.bregman(&y, &x));

    let r = bprox(&f, &phi, &x, &PairingLedger::default(), &tol, DEFAULT_MAX_ITER).unwrap();
    println!();
    println!("bprox point        = {:?}", r.point.coords());
    let closed: Vec<f64> = x
        .coords()
        .iter()
        .zip(c.coords())
        .map(|(xi, ci)| xi * (-ci).exp())
        .collect();
    println!("closed form x*e^-c = {closed:?}");
    println!("inclusion residual = {:.3e}", r.inclusion_residual);
    println!("iterations         = {}", r.solve.iterations);

    // a box constraint keeps the point away from the boundary of the orthant
    let boxed = ConvexFunction::indicator_box(vec![0.6; 3], vec![1.5; 3]).unwrap();
    let rb = bprox(&f, &boxed, &x, &PairingLedger::default(), &tol, DEFAULT_MAX_ITER).unwrap();
    println!();
    println!("box-constrained bprox = {:?}", rb.point.coords());
    println!("inclusion residual    = {:.3e}", rb.inclusion_residual);
}
