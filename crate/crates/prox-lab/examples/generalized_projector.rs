//! Generalized projections onto cones in lp geometries: the metric
//! projection (p = 2) against its anisotropic counterparts, and the
//! vanishing pairing with the polar-cone term.

use prox_lab::convex::{ConeSpec, ConvexFunction};
use prox_lab::decomposition::decompose;
use prox_lab::legendre::LegendreFunction;
use prox_lab::prox::{gen_project, PairingLedger};
use prox_lab::space::{pair, PrimalVector, ToleranceProfile};

fn main() {
    let tol = ToleranceProfile::default();
    let orthant = ConeSpec::nonneg_orthant(2);
    let x = PrimalVector::new(vec![1.0, -2.0]).unwrap();

    println!("projections of {:?} onto the orthant:", x.coords());
    for p in [2.0, 1.5, 3.0, 4.0] {
        let proj = gen_project(&orthant, p, &x, &tol, 20_000).unwrap();
        println!("  p = {p:<3} -> {:?}", proj.coords());
    }

    let soc = ConeSpec::second_order(3).unwrap();
    let y = PrimalVector::new(vec![0.4, 1.0, -0.8]).unwrap();
    println!();
    println!("second-order cone, x = {:?}:", y.coords());
    for p in [2.0, 3.0] {
        let proj = gen_project(&soc, p, &y, &tol, 20_000).unwrap();
        println!("  p = {p} -> {:?}", proj.coords());
    }

    // the conic decomposition: <P_K x, dual term> = 0
    let f = LegendreFunction::pnorm_energy(3, 3.0).unwrap();
    let phi = ConvexFunction::indicator_cone(soc);
    let r = decompose(&f, &phi, &y, &PairingLedger::default(), &tol, 0).unwrap();
    println!();
    println!("conic split under p = 3:");
    println!("  P_K x            = {:?}", r.p.coords());
    println!("  dual term        = {:?}", r.dstar.coords());
    println!("  <P_K x, d*>      = {:.3e}", pair(&r.p, &r.dstar).unwrap());
    println!("  reconstruction   = {:.3e}", r.residual_ii);
}
