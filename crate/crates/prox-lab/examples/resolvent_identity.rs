//! Resolvent form of the decomposition with A the subdifferential of phi:
//! x = (Id + grad f* o A)^{-1} x + grad f*((grad f* + A^{-1})^{-1} x),
//! certified through the Fenchel-Young gaps of both inclusions.

use prox_lab::convex::ConvexFunction;
use prox_lab::decomposition::verify_resolvent;
use prox_lab::legendre::LegendreFunction;
use prox_lab::prox::PairingLedger;
use prox_lab::space::{DualVector, PrimalVector, ToleranceProfile};

fn main() {
    let tol = ToleranceProfile::default();
    let ledger = PairingLedger::default();

    let f = LegendreFunction::euclidean(2);
    let phi = ConvexFunction::l1(2, 1.0).unwrap();
    let x = PrimalVector::new(vec![2.0, -0.5]).unwrap();
    let r = verify_resolvent(&f, &phi, &x, &ledger, &tol).unwrap();
    println!("euclidean, l1:");
    println!("  first inclusion  = {:.3e}", r.first_inclusion);
    println!("  second inclusion = {:.3e}", r.second_inclusion);
    println!("  sum residual     = {:.3e}", r.sum_residual);
    println!("  prox-sum check   = {:.3e}", r.euclid_pointwise.unwrap());

    let fe = LegendreFunction::shannon_entropy(2);
    let c = ConvexFunction::linear(DualVector::new(vec![0.5, -0.3]).unwrap());
    let xe = PrimalVector::new(vec![1.0, 2.0]).unwrap();
    let re = verify_resolvent(&fe, &c, &xe, &ledger, &tol).unwrap();
    println!();
    println!("entropy, linear:");
    println!("  first inclusion  = {:.3e}", re.first_inclusion);
    println!("  second inclusion = {:.3e}", re.second_inclusion);
    println!("  sum residual     = {:.3e}", re.sum_residual);
}
