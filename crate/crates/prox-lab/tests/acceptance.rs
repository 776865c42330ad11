//! Acceptance gate: one test per criterion, each printing a single
//! `criterion N: PASS/FAIL` line (visible with `--nocapture`). Tolerances are
//! pinned to the values in the module documentation and must not be loosened.

use std::time::Instant;

use nalgebra::DMatrix;
use prox_lab::convex::{ConeSpec, ConvexFunction};
use prox_lab::decomposition::{
    decompose, sample_admissible, verify_hilbert_special_cases, verify_resolvent,
};
use prox_lab::frames::{build_frame, frame_decompose, frame_legendre};
use prox_lab::legendre::LegendreFunction;
use prox_lab::prox::{aprox, bprox, PairingLedger, PairingLedgerEntry};
use prox_lab::report::{
    run_config, GeometryConfig, PhiConfig, PointSource, RunConfig, RunOptions, ScenarioConfig,
    Suite, ToleranceOverrides,
};
use prox_lab::solvers::{brute_force_min, numeric_conjugate, refined_spacing, GridBox};
use prox_lab::space::{pair, DualVector, PrimalVector, Sampler, ToleranceProfile};

fn tol() -> ToleranceProfile {
    ToleranceProfile::default()
}

fn tridiag_spd(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            2.0
        } else if i.abs_diff(j) == 1 {
            -0.5
        } else {
            0.0
        }
    })
}

/// The registered pairing matrix of criterion 1.
fn pairing_matrix(n: usize) -> Vec<(LegendreFunction, ConvexFunction)> {
    let c: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 0.3 } else { -0.2 }).collect();
    vec![
        (
            LegendreFunction::euclidean(n),
            ConvexFunction::l1(n, 1.0).unwrap(),
        ),
        (
            LegendreFunction::euclidean(n),
            ConvexFunction::indicator_orthant(n),
        ),
        (
            LegendreFunction::quadratic_spd(tridiag_spd(n)).unwrap(),
            ConvexFunction::indicator_orthant(n),
        ),
        (
            LegendreFunction::pnorm_energy(n, 1.5).unwrap(),
            ConvexFunction::indicator_orthant(n),
        ),
        (
            LegendreFunction::pnorm_energy(n, 3.0).unwrap(),
            ConvexFunction::indicator_orthant(n),
        ),
        (
            LegendreFunction::pnorm_energy(n, 4.0).unwrap(),
            ConvexFunction::indicator_orthant(n),
        ),
        (
            LegendreFunction::pnorm_energy(n, 4.0).unwrap(),
            ConvexFunction::l1(n, 0.5).unwrap(),
        ),
        (
            LegendreFunction::shannon_entropy(n),
            ConvexFunction::linear(DualVector::new(c).unwrap()),
        ),
        (
            LegendreFunction::shannon_entropy(n),
            ConvexFunction::indicator_box(vec![0.5; n], vec![2.5; n]).unwrap(),
        ),
    ]
}

fn registered_ledger(n: usize) -> PairingLedger {
    let mut ledger = PairingLedger::default();
    for (f, phi) in pairing_matrix(n) {
        let auto = prox_lab::prox::auto_certify(&f, &phi);
        ledger.register(PairingLedgerEntry {
            justification: "catalog pairing: separable domains".into(),
            ..auto
        });
    }
    ledger
}

fn verdict(criterion: usize, failures: &[String], detail: &str) {
    if failures.is_empty() {
        println!("criterion {criterion}: PASS — {detail}");
    } else {
        println!(
            "criterion {criterion}: FAIL — {} failures; first: {}",
            failures.len(),
            failures[0]
        );
    }
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_1_theorem_suite() {
    let start = Instant::now();
    let tol = tol();
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for n in [2usize, 5, 16] {
        let ledger = registered_ledger(n);
        for (pi, (f, phi)) in pairing_matrix(n).iter().enumerate() {
            let seed = 1000 + 31 * pi as u64 + n as u64;
            let mut sampler = Sampler::new(seed);
            for k in 0..50 {
                let x = sample_admissible(f, phi, &mut sampler, 1.5);
                let r = match decompose(f, phi, &x, &ledger, &tol, seed) {
                    Ok(r) => r,
                    Err(e) => {
                        failures.push(format!("({}, {}) n={n} pt {k}: {e}", f.name, phi.name));
                        continue;
                    }
                };
                checked += 1;
                let fx = f.eval_f(&x).abs();
                if !(r.residual_i <= 1e-8 * (1.0 + fx)) {
                    failures.push(format!(
                        "({}, {}) n={n} pt {k}: residual_i {:.3e}",
                        f.name, phi.name, r.residual_i
                    ));
                }
                if !(r.residual_ii <= 1e-6 * (1.0 + x.norm2())) {
                    failures.push(format!(
                        "({}, {}) n={n} pt {k}: residual_ii {:.3e}",
                        f.name, phi.name, r.residual_ii
                    ));
                }
                if !(r.residual_iii <= 1e-6) || !(r.residual_iv <= 1e-6) {
                    failures.push(format!(
                        "({}, {}) n={n} pt {k}: residual_iii/iv {:.3e}/{:.3e}",
                        f.name, phi.name, r.residual_iii, r.residual_iv
                    ));
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed > 60.0 {
        failures.push(format!("runtime {elapsed:.1}s exceeds 60s"));
    }
    verdict(
        1,
        &failures,
        &format!("{checked} decompositions across 9 pairings x 3 dims in {elapsed:.1}s"),
    );
}

#[test]
fn criterion_2_hilbert_specializations() {
    let rep = verify_hilbert_special_cases(2024, 100, &tol()).unwrap();
    verdict(
        2,
        &rep.failures,
        &format!(
            "subspace/cone/prox identities on {} points, max residual {:.2e}",
            rep.samples,
            rep.max_pythagoras.max(rep.max_sum).max(rep.max_orthogonality)
        ),
    );
}

#[test]
fn criterion_3_conic_projector_decomposition() {
    let tol = tol();
    let n = 3;
    let ledger = PairingLedger::default();
    let mut failures = Vec::new();
    let cones = [ConeSpec::nonneg_orthant(n), ConeSpec::second_order(n).unwrap()];
    for p in [1.5, 3.0, 4.0] {
        let f = LegendreFunction::pnorm_energy(n, p).unwrap();
        for cone in &cones {
            let phi = ConvexFunction::indicator_cone(cone.clone());
            let mut sampler = Sampler::new(40 + p as u64);
            for k in 0..50 {
                let x = sampler.standard_normal(n).scale(1.5);
                let r = match decompose(&f, &phi, &x, &ledger, &tol, 0) {
                    Ok(r) => r,
                    Err(e) => {
                        failures.push(format!("p={p} {} pt {k}: {e}", cone.kind_name()));
                        continue;
                    }
                };
                if !(r.residual_ii <= 1e-6 * (1.0 + x.norm2())) {
                    failures.push(format!(
                        "p={p} {} pt {k}: sum residual {:.3e}",
                        cone.kind_name(),
                        r.residual_ii
                    ));
                }
                let inner = pair(&r.p, &r.dstar).unwrap().abs();
                if !(inner <= 1e-6) {
                    failures.push(format!(
                        "p={p} {} pt {k}: pairing {:.3e}",
                        cone.kind_name(),
                        inner
                    ));
                }
            }
        }
    }
    verdict(3, &failures, "orthant and SOC across p in {1.5, 3, 4}, 50 points each");
}

#[test]
fn criterion_4_frame_corollary() {
    let tol = tol();
    let mut failures = Vec::new();
    let pv = |c: &[f64]| PrimalVector::new(c.to_vec()).unwrap();

    let mut rng = Sampler::new(88);
    let random_frame: Vec<_> = (0..8).map(|_| rng.standard_normal(3)).collect();
    let frames = vec![
        ("overcomplete-2d", build_frame(&[pv(&[1.0, 0.0]), pv(&[0.0, 1.0]), pv(&[1.0, 1.0])]).unwrap()),
        ("random-3x8", build_frame(&random_frame).unwrap()),
        ("orthonormal-2d", build_frame(&[pv(&[1.0, 0.0]), pv(&[0.0, 1.0])]).unwrap()),
    ];

    for (label, fs) in &frames {
        let n = fs.dim();
        let phis = vec![
            ConvexFunction::zero(n),
            ConvexFunction::l1(n, 1.0).unwrap(),
            ConvexFunction::indicator_orthant(n),
        ];
        let mut sampler = Sampler::new(17);
        for phi in &phis {
            for k in 0..10 {
                let x = sampler.standard_normal(n).scale(1.5);
                let d = match frame_decompose(fs, phi, &x, &tol) {
                    Ok(d) => d,
                    Err(e) => {
                        failures.push(format!("{label} {} pt {k}: {e}", phi.name));
                        continue;
                    }
                };
                if !(d.reconstruction_residual <= 1e-6) {
                    failures.push(format!(
                        "{label} {} pt {k}: reconstruction {:.3e}",
                        phi.name, d.reconstruction_residual
                    ));
                }
                if *label == "orthonormal-2d" {
                    let p1 = phi.euclid_prox(&x, 1.0).unwrap();
                    let p2 = phi.conjugate().unwrap().euclid_prox(&x, 1.0).unwrap();
                    let ea = d.a.sub(&p1).norm2();
                    let eb = d.b.clone().into_primal().sub(&p2).norm2();
                    if !(ea <= 1e-8 && eb <= 1e-8) {
                        failures.push(format!(
                            "{label} {} pt {k}: prox-pair mismatch {ea:.3e}/{eb:.3e}",
                            phi.name
                        ));
                    }
                }
            }
        }

        // conjugate formula equivalence on 100 dual samples
        let f = frame_legendre(fs).unwrap();
        let mut ds = Sampler::new(5);
        for _ in 0..100 {
            let xstar = ds.standard_normal_dual(n);
            let direct = f.eval_conj(&xstar);
            let coeff: f64 = fs
                .dual_vectors
                .iter()
                .map(|d| {
                    let c = pair(d, &xstar).unwrap();
                    0.5 * c * c
                })
                .sum();
            if !((direct - coeff).abs() <= 1e-10 * (1.0 + direct.abs())) {
                failures.push(format!("{label}: conjugate formula gap {:.3e}", (direct - coeff).abs()));
            }
        }
    }
    verdict(4, &failures, "3 frames x 3 phi entries, reconstruction and f* formula");
}

fn oracle_boxes(f: &LegendreFunction, x: &PrimalVector) -> (GridBox, GridBox) {
    let r = 1.0 + 2.0 * x.norm2();
    let full = f.dom_f.contains_interior(&vec![-1.0; f.dim]);
    let a = x
        .coords()
        .iter()
        .map(|&xi| if full { (xi - r, xi + r) } else { (xi - r, xi) })
        .collect();
    let b = x
        .coords()
        .iter()
        .map(|&xi| if full { (xi - r, xi + r) } else { (0.0, xi.max(0.0) + r) })
        .collect();
    (GridBox { bounds: a }, GridBox { bounds: b })
}

#[test]
fn criterion_5_oracle_equivalence() {
    let n = 2;
    let resolution = 201;
    // the grid only resolves coordinates to its spacing, so solve well past it
    let tight = ToleranceProfile {
        gap_tol: 1e-12,
        ..tol()
    };
    let ledger = registered_ledger(n);
    let mut failures = Vec::new();
    for (pi, (f, phi)) in pairing_matrix(n).iter().enumerate() {
        let mut sampler = Sampler::new(500 + pi as u64);
        for k in 0..3 {
            let x = sample_admissible(f, phi, &mut sampler, 1.0);
            let (abx, bbx) = oracle_boxes(f, &x);

            let a = aprox(f, phi, &x, &ledger, &tight, 100_000).unwrap();
            let a_obj = |y: &PrimalVector| phi.eval_phi(y) + f.eval_f(&x.sub(y));
            let a_grid = brute_force_min(a_obj, &abx, resolution).unwrap();
            let da = a.point.sub(&a_grid).norm_inf();
            if !(da <= refined_spacing(&abx, resolution)) {
                failures.push(format!(
                    "({}, {}) pt {k}: aprox oracle delta {da:.3e}",
                    f.name, phi.name
                ));
            }

            let b = bprox(f, phi, &x, &ledger, &tight, 100_000).unwrap();
            let xstar = f.grad_f(&x).unwrap();
            let b_obj =
                |y: &PrimalVector| phi.eval_phi(y) + f.eval_f(y) - pair(y, &xstar).unwrap();
            let b_grid = brute_force_min(b_obj, &bbx, resolution).unwrap();
            let db = b.point.sub(&b_grid).norm_inf();
            if !(db <= refined_spacing(&bbx, resolution)) {
                failures.push(format!(
                    "({}, {}) pt {k}: bprox oracle delta {db:.3e}",
                    f.name, phi.name
                ));
            }
        }
    }

    // numeric conjugates against closed forms, on boxes containing the argsup
    let bx = GridBox::cube(2, -3.0, 3.0);
    let bound = refined_spacing(&bx, resolution);
    let feuc = LegendreFunction::euclidean(2);
    for c in [[0.3, -0.2], [1.0, 0.5]] {
        let xstar = DualVector::new(c.to_vec()).unwrap();
        let nc = numeric_conjugate(
            |y: &PrimalVector| feuc.eval_f(y),
            &xstar,
            &bx,
            resolution,
        )
        .unwrap();
        let exact = feuc.eval_conj(&xstar);
        if nc.boundary_warning || !((nc.value - exact).abs() <= bound * (1.0 + xstar.norm2())) {
            failures.push(format!("numeric conjugate (euclidean) off by {:.3e}", (nc.value - exact).abs()));
        }
    }
    let box_phi = ConvexFunction::indicator_box(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
    for c in [[0.7, -0.4], [1.5, 2.0]] {
        let xstar = DualVector::new(c.to_vec()).unwrap();
        let nc = numeric_conjugate(
            |y: &PrimalVector| box_phi.eval_phi(y),
            &xstar,
            &bx,
            resolution,
        )
        .unwrap();
        let exact = box_phi.eval_conj_phi(&xstar);
        if !((nc.value - exact).abs() <= bound * (1.0 + xstar.norm2())) {
            failures.push(format!("numeric conjugate (box) off by {:.3e}", (nc.value - exact).abs()));
        }
    }
    verdict(5, &failures, "grid oracles at n=2, resolution 201, all pairings");
}

#[test]
fn criterion_6_gradient_checks() {
    let n = 4;
    let h = 1e-5;
    let geometries = vec![
        LegendreFunction::euclidean(n),
        LegendreFunction::quadratic_spd(tridiag_spd(n)).unwrap(),
        LegendreFunction::pnorm_energy(n, 1.5).unwrap(),
        LegendreFunction::pnorm_energy(n, 3.0).unwrap(),
        LegendreFunction::pnorm_energy(n, 4.0).unwrap(),
        LegendreFunction::shannon_entropy(n),
        LegendreFunction::exp_sum(n),
    ];
    let mut failures = Vec::new();
    for f in &geometries {
        let mut sampler = Sampler::new(61);
        for k in 0..100 {
            // strictly interior points for every catalog domain
            let x = if f.dom_f.contains_interior(&vec![-1.0; n]) {
                sampler.standard_normal(n).scale(1.5)
            } else {
                sampler.uniform(n, 0.2, 3.0)
            };
            let g = f.grad_f(&x).unwrap();
            let mut worst = 0.0_f64;
            for i in 0..n {
                let mut up = x.coords().to_vec();
                let mut dn = x.coords().to_vec();
                up[i] += h;
                dn[i] -= h;
                let fd = (f.eval_f(&PrimalVector::new(up).unwrap())
                    - f.eval_f(&PrimalVector::new(dn).unwrap()))
                    / (2.0 * h);
                worst = worst.max((fd - g.coords()[i]).abs());
            }
            if !(worst <= 1e-5 * (1.0 + g.norm_inf())) {
                failures.push(format!("{} pt {k}: fd mismatch {worst:.3e}", f.name));
            }
        }
    }
    verdict(6, &failures, "central differences on 100 interior points per geometry");
}

#[test]
fn criterion_7_resolvent_identity() {
    let tol = tol();
    let mut failures = Vec::new();
    for n in [2usize, 5, 16] {
        let ledger = registered_ledger(n);
        for (pi, (f, phi)) in pairing_matrix(n).iter().enumerate() {
            let mut sampler = Sampler::new(700 + pi as u64 + n as u64);
            for k in 0..5 {
                let x = sample_admissible(f, phi, &mut sampler, 1.5);
                let r = match verify_resolvent(f, phi, &x, &ledger, &tol) {
                    Ok(r) => r,
                    Err(e) => {
                        failures.push(format!("({}, {}) n={n} pt {k}: {e}", f.name, phi.name));
                        continue;
                    }
                };
                if !(r.first_inclusion <= 1e-6 && r.second_inclusion <= 1e-6) {
                    failures.push(format!(
                        "({}, {}) n={n} pt {k}: inclusions {:.3e}/{:.3e}",
                        f.name, phi.name, r.first_inclusion, r.second_inclusion
                    ));
                }
                if let Some(e) = r.euclid_pointwise {
                    if !(e <= 1e-8) {
                        failures.push(format!(
                            "({}, {}) n={n} pt {k}: euclidean prox sum {e:.3e}",
                            f.name, phi.name
                        ));
                    }
                }
            }
        }
    }
    verdict(7, &failures, "both inclusions over the criterion-1 matrix");
}

#[test]
fn criterion_8_determinism_and_budget() {
    use std::collections::hash_map::DefaultHasher;
    use std::hash::{Hash, Hasher};

    let start = Instant::now();
    let cfg = RunConfig {
        scenarios: vec![
            ScenarioConfig {
                geometry: GeometryConfig {
                    name: "euclidean".into(),
                    p: None,
                    matrix: None,
                },
                phi: PhiConfig {
                    name: "l1".into(),
                    lambda: Some(1.0),
                    c: None,
                    lower: None,
                    upper: None,
                    cone: None,
                },
                dim: 2,
                points: PointSource::Seeded { count: 10, seed: 7 },
                tolerances: ToleranceOverrides::default(),
                suites: vec![Suite::Theorem, Suite::Hilbert, Suite::Resolvent],
            },
            ScenarioConfig {
                geometry: GeometryConfig {
                    name: "shannon_entropy".into(),
                    p: None,
                    matrix: None,
                },
                phi: PhiConfig {
                    name: "linear".into(),
                    lambda: None,
                    c: Some(vec![0.4, -0.2]),
                    lower: None,
                    upper: None,
                    cone: None,
                },
                dim: 2,
                points: PointSource::Seeded { count: 5, seed: 11 },
                tolerances: ToleranceOverrides::default(),
                suites: vec![Suite::Theorem, Suite::Oracle],
            },
        ],
    };
    let mut failures = Vec::new();
    let a = run_config(&cfg, &RunOptions::default()).unwrap();
    let b = run_config(&cfg, &RunOptions::default()).unwrap();
    let hash = |body: &prox_lab::report::ReportBody| {
        let mut h = DefaultHasher::new();
        serde_json::to_string(body).unwrap().hash(&mut h);
        h.finish()
    };
    let (ha, hb) = (hash(&a.report), hash(&b.report));
    if ha != hb {
        failures.push(format!("report hashes differ: {ha:x} vs {hb:x}"));
    }
    if !a.report.passed {
        failures.push("reference run did not pass".into());
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed > 300.0 {
        failures.push(format!("determinism check took {elapsed:.0}s"));
    }
    verdict(
        8,
        &failures,
        &format!("identical report hash {ha:016x} across repeated runs ({elapsed:.1}s)"),
    );
}
