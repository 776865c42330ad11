//! The generalized decomposition x = aprox(x) + grad f*(bprox dual term)
//! in a non-Hilbert geometry (half the squared 4-norm), with all four
//! identity residuals reported.

use prox_lab::convex::ConvexFunction;
use prox_lab::decomposition::decompose;
use prox_lab::legendre::LegendreFunction;
use prox_lab::prox::PairingLedger;
use prox_lab::space::{PrimalVector, ToleranceProfile};

fn main() {
    let f = LegendreFunction::pnorm_energy(3, 4.0).unwrap();
    let phi = ConvexFunction::l1(3, 0.5).unwrap();
    let x = PrimalVector::new(vec![1.2, -0.4, 2.0]).unwrap();
    let tol = ToleranceProfile::default();

    let r = decompose(&f, &phi, &x, &PairingLedger::default(), &tol, 0).unwrap();

    println!("geometry          = {}", f.name);
    println!("phi               = {}", phi.name);
    println!("x                 = {:?}", x.coords());
    println!("p  (aprox term)   = {:?}", r.p.coords());
    println!("d* (dual solve)   = {:?}", r.dstar.coords());
    println!("d* (grad formula) = {:?}", r.dstar_primal.coords());
    println!("agreement         = {:.3e}", r.dstar_agreement);
    println!("reconstruction    = {:?}", r.reconstruction.coords());
    println!();
    println!("f(x)              = {:.9}", f.eval_f(&x));
    println!("inf-convolution   = {:.9}", r.infconv_value);
    println!("diamond term      = {:.9}", r.diamond_value);
    println!();
    println!("residual_i   (value identity)   = {:.3e}", r.residual_i);
    println!("residual_ii  (reconstruction)   = {:.3e}", r.residual_ii);
    println!("residual_iii (pairing, dual d*) = {:.3e}", r.residual_iii);
    println!("residual_iv  (pairing, grad d*) = {:.3e}", r.residual_iv);
    println!("verified = {}", r.verified);
}
