//! Classical Moreau decomposition in the Euclidean geometry:
//! x = prox_phi(x) + prox_{phi*}(x), with the conic and subspace special
//! cases checked on sampled points.

use prox_lab::convex::{polar_project, ConeSpec, ConvexFunction};
use prox_lab::decomposition::verify_hilbert_special_cases;
use prox_lab::space::{pair, PrimalVector, ToleranceProfile};

fn main() {
    let phi = ConvexFunction::l1(2, 1.0).unwrap();
    let phi_conj = phi.conjugate().unwrap();
    let x = PrimalVector::new(vec![2.0, -0.5]).unwrap();

    let p = phi.euclid_prox(&x, 1.0).unwrap();
    let q = phi_conj.euclid_prox(&x, 1.0).unwrap();
    println!("x              = {:?}", x.coords());
    println!("prox_phi(x)    = {:?}", p.coords());
    println!("prox_phi*(x)   = {:?}", q.coords());
    println!("sum residual   = {:.3e}", x.sub(&p).sub(&q).norm2());
    let fy = pair(&p, &q.clone().into_dual()).unwrap()
        - phi.eval_phi(&p)
        - phi.eval_conj_phi(&q.clone().into_dual());
    println!("pairing gap    = {:.3e}", fy.abs());

    let k = ConeSpec::nonneg_orthant(2);
    let xc = PrimalVector::new(vec![1.0, -2.0]).unwrap();
    let pk = k.project(&xc);
    let pko = polar_project(&k, &xc);
    println!();
    println!("cone split of {:?}: P_K = {:?}, P_polar = {:?}", xc.coords(), pk.coords(), pko.coords());
    println!(
        "pythagoras: {:.1} = {:.1} + {:.1}",
        xc.norm2().powi(2),
        xc.sub(&pk).norm2().powi(2),
        xc.sub(&pko).norm2().powi(2)
    );

    let report = verify_hilbert_special_cases(2024, 100, &ToleranceProfile::default()).unwrap();
    println!();
    println!(
        "sampled suite: {} points, {} failures, max residual {:.3e}",
        report.samples,
        report.failures.len(),
        report.max_pythagoras.max(report.max_sum).max(report.max_orthogonality)
    );
}
