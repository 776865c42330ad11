//! Frame-adapted decomposition: build a redundant frame, inspect its
//! operator and bounds, and split a point as x = a(x) + sum <b, e*_i> e*_i.

use prox_lab::convex::ConvexFunction;
use prox_lab::frames::{build_frame, frame_decompose, frame_legendre};
use prox_lab::space::{PrimalVector, ToleranceProfile};

fn pv(c: &[f64]) -> PrimalVector {
    PrimalVector::new(c.to_vec()).unwrap()
}

fn main() {
    let fs = build_frame(&[pv(&[1.0, 0.0]), pv(&[0.0, 1.0]), pv(&[1.0, 1.0])]).unwrap();
    println!("frame operator S = {}", fs.s);
    println!("bounds: alpha = {}, beta = {}", fs.alpha, fs.beta);
    for (i, d) in fs.dual_vectors.iter().enumerate() {
        println!("e*_{} = {:?}", i + 1, d.coords());
    }

    let f = frame_legendre(&fs).unwrap();
    println!();
    println!("f((1,0))  = {}", f.eval_f(&pv(&[1.0, 0.0])));
    println!(
        "f*((1,0)) = {}",
        f.eval_conj(&prox_lab::space::DualVector::new(vec![1.0, 0.0]).unwrap())
    );

    let phi = ConvexFunction::indicator_orthant(2);
    let x = pv(&[1.0, -2.0]);
    let d = frame_decompose(&fs, &phi, &x, &ToleranceProfile::default()).unwrap();
    println!();
    println!("x           = {:?}", x.coords());
    println!("a(x)        = {:?}", d.a.coords());
    println!("b(x)        = {:?}", d.b.coords());
    println!("synthesis   = {:?}", d.synthesis.coords());
    println!("reconstruction residual = {:.3e}", d.reconstruction_residual);
    println!("synthesis residual      = {:.3e}", d.synthesis_residual);
}
