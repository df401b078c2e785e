//! Acceptance suite. Each criterion prints one PASS/FAIL line.
//!
//! Criterion 4 asserts that `α₀ > √(Σ αₐ²)` alone makes every spectrum real.
//! That is false for N ≥ 3, and random sampling finds counterexamples. It is
//! still run and reported, and is listed in `EXPECTED_FAILURES`. The test fails
//! if any other criterion fails, or if criterion 4 unexpectedly passes.
//!
//! Runs without the libtest harness so the lines show in `cargo test` output.

mod common;

use std::time::Instant;

use common::*;
use num_complex::Complex64 as C;
use pseudoherm::lattice::*;
use pseudoherm::pseudoherm::{delta_coefficients, intertwining_residual, DeltaCoefficients};
use pseudoherm::{
    anticommutator, commutator, hermitize_pair, Boundary, ComplexMatrix, LatticeSpec,
    PseudoHermitianSystem, StateVector, StructureConstants, SuBasis, Tolerances,
};
use rand::Rng;

const ALGEBRA_TOL: f64 = 1e-10;
const ORTHO_TOL: f64 = 1e-12;
const ALGEBRA_SECONDS: f64 = 10.0;
const ORACLE_TOL: f64 = 1e-12;
const DELTA_TOL: f64 = 1e-10;
const IMAG_TOL: f64 = 1e-9;
const PSEUDO_TOL: f64 = 1e-10;
const CONTROL_IMAG: f64 = 1e-6;
const CLOSED_FORM_TOL: f64 = 1e-10;
const DIAGONALIZER_TOL: f64 = 1e-9;
const DUAL_PATH_TOL: f64 = 1e-10;
const CORNER_TOL: f64 = 1e-14;
const SSH_BOUND_TOL: f64 = 1e-12;
const DRIFT_TOL: f64 = 1e-9;
const NORM_VARIATION: f64 = 1e-3;
const TRACE_TOL: f64 = 1e-12;

const EXPECTED_FAILURES: &[usize] = &[4];

struct Outcome {
    pass: bool,
    detail: String,
}

fn tol() -> Tolerances<f64> {
    Tolerances::default()
}

/// Bauer–Fike: every eigenvalue of `h` lies within `‖(h − h†)/2‖₂ ≤ ‖·‖_F` of the real axis.
fn imag_bound(h: &ComplexMatrix) -> f64 {
    h.antihermitian_part().frobenius_norm()
}

fn c1_generator_algebra() -> Outcome {
    let start = Instant::now();
    let (mut comm, mut anti, mut ortho) = (0.0f64, 0.0f64, 0.0f64);
    for n in 2..=5 {
        let basis = SuBasis::<f64>::new(n).unwrap();
        let sc = StructureConstants::compute(&basis).unwrap();
        let g = basis.generators();
        for a in 1..g.len() {
            for b in 1..g.len() {
                let mut c_rhs = ComplexMatrix::zeros(n, n);
                let mut a_rhs = if a == b {
                    ComplexMatrix::identity(n).scale_real(4.0 / n as f64)
                } else {
                    ComplexMatrix::zeros(n, n)
                };
                for (c, t) in g.iter().enumerate().skip(1) {
                    c_rhs = &c_rhs + &t.scale(C::new(0.0, 2.0 * sc.f(a, b, c)));
                    a_rhs = &a_rhs + &t.scale_real(2.0 * sc.d(a, b, c));
                }
                comm = comm.max((&commutator(&g[a], &g[b]).unwrap() - &c_rhs).frobenius_norm());
                anti = anti.max((&anticommutator(&g[a], &g[b]).unwrap() - &a_rhs).frobenius_norm());
                let tr = (&g[a] * &g[b]).trace().unwrap();
                let target = if a == b { 2.0 } else { 0.0 };
                ortho = ortho.max((tr - C::new(target, 0.0)).norm());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: comm <= ALGEBRA_TOL && anti <= ALGEBRA_TOL && ortho <= ORTHO_TOL && secs < ALGEBRA_SECONDS,
        detail: format!("N=2..5 commutator {comm:.1e}, anticommutator {anti:.1e}, Tr(TaTb)-2δ {ortho:.1e}, {secs:.2}s"),
    }
}

fn c2_known_constants() -> Outcome {
    let z = |re: f64, im: f64| C::new(re, im);
    let m = |rows: Vec<Vec<C>>| matrix(rows);
    // Pauli and Gell-Mann matrices typed out by hand
    let s1 = m(vec![vec![z(0., 0.), z(1., 0.)], vec![z(1., 0.), z(0., 0.)]]);
    let s2 = m(vec![vec![z(0., 0.), z(0., -1.)], vec![z(0., 1.), z(0., 0.)]]);
    let s3 = m(vec![vec![z(1., 0.), z(0., 0.)], vec![z(0., 0.), z(-1., 0.)]]);
    let r3 = 1.0 / 3f64.sqrt();
    let l1 = m(vec![
        vec![z(0., 0.), z(1., 0.), z(0., 0.)],
        vec![z(1., 0.), z(0., 0.), z(0., 0.)],
        vec![z(0., 0.), z(0., 0.), z(0., 0.)],
    ]);
    let l8 = ComplexMatrix::from_diag(&[r3, r3, -2.0 * r3]);
    let f_oracle = ((&(&(&s1 * &s2) - &(&s2 * &s1)) * &s3).trace().unwrap() / C::new(0.0, 4.0)).re;
    let d_oracle = ((&(&(&l1 * &l1) + &(&l1 * &l1)) * &l8).trace().unwrap() / 4.0).re;

    let sc2 = StructureConstants::compute(&SuBasis::<f64>::new(2).unwrap()).unwrap();
    let sc3 = StructureConstants::compute(&SuBasis::<f64>::new(3).unwrap()).unwrap();
    let (f, d) = (sc2.f(1, 2, 3), sc3.d(1, 1, 8));
    let err = (f - f_oracle).abs().max((d - d_oracle).abs()).max((f - 1.0).abs()).max((d - r3).abs());
    Outcome {
        pass: err <= ORACLE_TOL,
        detail: format!("f123 = {f:.15}, d118 = {d:.15} (1/√3 = {r3:.15}), max error {err:.1e}"),
    }
}

fn c3_delta_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for n in 2..=6 {
        let basis = SuBasis::<f64>::new(n).unwrap();
        let sc = StructureConstants::compute(&basis).unwrap();
        let mut g = rng(300 + n as u64);
        for _ in 0..100 {
            let eta = random_hermitian(&mut g, n, 1.0);
            let s = random_hermitian(&mut g, n, 1.0);
            let alpha = basis.expand_hermitian(&eta).unwrap();
            let beta = basis.expand_hermitian(&s).unwrap();
            let via = delta_coefficients(&basis, &sc, &alpha, &beta).unwrap();
            let direct = DeltaCoefficients::from_matrix(&basis, &(&s * &eta)).unwrap();
            for (x, y) in via.delta.iter().zip(&direct.delta) {
                worst = worst.max((x - y).norm());
            }
            count += 1;
        }
    }
    Outcome {
        pass: worst <= DELTA_TOL,
        detail: format!("{count} pairs, N=2..6, max |δ_tensor - δ_direct| {worst:.1e}"),
    }
}

fn c4_reality() -> Outcome {
    let (mut total, mut positive, mut indefinite, mut complex_when_indefinite) = (0, 0, 0, 0);
    let (mut worst_imag, mut worst_oracle, mut worst_resid) = (0.0f64, 0.0f64, 0.0f64);
    let mut worst_case = String::new();
    for n in 2..=8 {
        let mut g = rng(400 + n as u64);
        for _ in 0..200 {
            let ratio = g.gen_range(1.0..2.0);
            let eta = metric_with_ratio(&mut g, n, ratio);
            let s = random_hermitian(&mut g, n, 1.0);
            let sys = PseudoHermitianSystem::compose(eta, s, g.gen_range(0.5..2.0), g.gen_range(-1.0..1.0), vec![], tol())
                .unwrap();
            let cert = sys.certify_metric().unwrap();
            assert!(cert.sufficient_bound_met());
            total += 1;
            worst_resid = worst_resid.max(intertwining_residual(sys.operator(), sys.eta()).unwrap());
            let oracle = max_imag(&general_eigenvalues(sys.operator()));
            match sys.hermitize() {
                Ok(herm) => {
                    positive += 1;
                    worst_imag = worst_imag.max(imag_bound(&herm.h));
                    if cert.min_eigenvalue > 1e-3 {
                        worst_oracle = worst_oracle.max(oracle);
                    }
                }
                Err(_) => {
                    indefinite += 1;
                    if oracle > IMAG_TOL {
                        complex_when_indefinite += 1;
                        if worst_case.is_empty() {
                            worst_case = format!(
                                "e.g. N={n}: α0={:.4} > α0min={:.4} but λmin={:.4}, max|Im λ|={oracle:.2e}",
                                cert.alpha0, cert.alpha0_min, cert.lambda_min
                            );
                        }
                    }
                }
            }
        }
    }

    // negative control: indefinite metrics
    let mut control_hits = 0;
    for seed in 0..100u64 {
        let mut g = rng(4000 + seed);
        let n = 2 + (seed as usize % 7);
        let eta = random_indefinite_metric(&mut g, n);
        let s = random_hermitian(&mut g, n, 1.0);
        if max_imag(&general_eigenvalues(&(&s * &eta))) > CONTROL_IMAG {
            control_hits += 1;
        }
    }

    let positive_ok = worst_imag <= IMAG_TOL && worst_oracle <= IMAG_TOL && worst_resid <= PSEUDO_TOL;
    let claim_ok = indefinite == 0;
    Outcome {
        pass: positive_ok && claim_ok && control_hits >= 1,
        detail: format!(
            "{total} systems with α0 > α0min: {positive} positive-definite (Im bound {worst_imag:.1e}, oracle {worst_oracle:.1e}), \
             {indefinite} indefinite despite the bound ({complex_when_indefinite} with complex spectra; {worst_case}); \
             residual {worst_resid:.1e}; control {control_hits}/100 complex"
        ),
    }
}

fn c5_uniform_closed_forms() -> Outcome {
    let mut spectrum_err = 0.0f64;
    let mut diag_err = 0.0f64;
    let pi = std::f64::consts::PI;
    for n in 2..=64 {
        for (g0, g) in [(3.0f64, 1.0f64), (0.7, -0.45), (1.0, 1.0)] {
            let mut bonds = vec![g; n];
            bonds[n - 1] = 0.0;
            let eta = balanced_metric(g0, &bonds);
            let numeric = eta.hermitian_eig(1e-12).unwrap().eigenvalues;
            let closed = uniform_metric_eigenvalues(n, g0, g);
            for (a, b) in numeric.iter().zip(&closed) {
                spectrum_err = spectrum_err.max((a - b).abs());
            }
            let o = uniform_diagonalizer::<f64>(n);
            let d = &(&o * &eta) * &o.transpose();
            let e_k: Vec<f64> = (1..=n).map(|k| g0 + 2.0 * g * (k as f64 * pi / (n as f64 + 1.0)).cos()).collect();
            diag_err = diag_err.max((&d - &ComplexMatrix::from_diag(&e_k)).frobenius_norm());
        }
    }
    let mut mismatches = 0;
    let mut points = 0;
    for n in [3, 8, 21, 64] {
        let edge = 2.0 * (pi / (n as f64 + 1.0)).cos();
        for i in 0..10 {
            for j in 0..10 {
                let g = -1.5 + 3.0 * (i as f64 + 0.5) / 10.0;
                let g0 = edge * g.abs() * (0.55 + 0.1 * j as f64);
                let model = build_uniform(n, g0, g, &tol()).unwrap();
                points += 1;
                if uniform_reality_condition(n, g0, g) != model.certificate.positive_definite {
                    mismatches += 1;
                }
            }
        }
    }
    Outcome {
        pass: spectrum_err <= CLOSED_FORM_TOL && diag_err <= DIAGONALIZER_TOL && mismatches == 0,
        detail: format!(
            "N=2..64 e_k error {spectrum_err:.1e}, diagonalizer residual {diag_err:.1e}, \
             reality condition {mismatches} mismatches on {points} grid points"
        ),
    }
}

fn c6_dual_path() -> Outcome {
    let (mut worst, mut corner, mut count) = (0.0f64, 0.0f64, 0);
    for n in 4..=12 {
        let mut g = rng(600 + n as u64);
        for open in [false, true] {
            for _ in 0..50 {
                let mut bonds: Vec<f64> = (0..n).map(|_| g.gen_range(-1.0..1.0)).collect();
                let boundary = if open {
                    bonds[n - 1] = 0.0;
                    Boundary::Open
                } else {
                    Boundary::Periodic
                };
                let spec = LatticeSpec::generic(g.gen_range(0.5..3.0), bonds, g.gen_range(-1.0..1.0), g.gen_range(-2.0..2.0), boundary);
                let built = build_generic_balanced(&spec, &tol()).unwrap();
                let product = build_from_ansatz(&spec, &spec.balanced_xi(), &tol()).unwrap();
                worst = worst.max((&built.h - &product.h).frobenius_norm());
                if open && n >= 5 {
                    corner = corner.max(max_corner_magnitude(&built.h));
                }
                count += 1;
            }
        }
    }
    Outcome {
        pass: worst <= DUAL_PATH_TOL && corner <= CORNER_TOL,
        detail: format!("{count} models N=4..12, |closed form - Sη| {worst:.1e}, open corners (N≥5) {corner:.1e}"),
    }
}

fn c7_ssh() -> Outcome {
    let (mut bound_err, mut worst_imag, mut worst_oracle, mut checked) = (0.0f64, 0.0f64, 0.0f64, 0);
    let mut all_positive = true;
    for m in 2..=8 {
        let mut g = rng(700 + m as u64);
        for _ in 0..10 {
            let (d1, d2, c) = (g.gen_range(-2.0..2.0), g.gen_range(-2.0..2.0), g.gen_range(0.2..2.0));
            let bound = ssh_bound(m, d1, d2);
            let probe = build_ssh(m, 1.0, d1, d2, c, &tol()).unwrap();
            bound_err = bound_err.max((bound - probe.certificate.alpha0_min).abs());
            let g0 = bound * g.gen_range(1.001..2.0);
            let model = build_ssh(m, g0, d1, d2, c, &tol()).unwrap();
            all_positive &= model.certificate.positive_definite;
            let herm = model.hermitize(&tol()).unwrap();
            worst_imag = worst_imag.max(imag_bound(&herm.h));
            worst_oracle = worst_oracle.max(max_imag(&general_eigenvalues(&model.h)));
            checked += 1;
        }
    }
    Outcome {
        pass: bound_err <= SSH_BOUND_TOL && all_positive && worst_imag <= IMAG_TOL && worst_oracle <= IMAG_TOL,
        detail: format!(
            "m=2..8 |√(m(δ1²+δ2²)) - α0min| {bound_err:.1e}; {checked} models above the bound, \
             Im bound {worst_imag:.1e}, oracle {worst_oracle:.1e}"
        ),
    }
}

fn c8_pseudo_unitarity() -> Outcome {
    let models = [
        ("uniform N=6", build_uniform(6, 3.0, 1.0, &tol()).unwrap()),
        ("ssh m=3", build_ssh(3, 4.0, 1.0, 0.5, 1.0, &tol()).unwrap()),
    ];
    let mut lines = Vec::new();
    let mut pass = true;
    for (name, model) in &models {
        let herm = hermitize_pair(&model.h, &model.eta, &tol()).unwrap();
        let psi0 = StateVector::basis(model.dim(), 0).unwrap();
        let eta_norm = |psi: &StateVector| {
            pseudoherm::pseudoherm::metric_inner_product(&model.eta, psi, psi).unwrap().re.sqrt()
        };
        let reference = eta_norm(&psi0);
        let (mut drift, mut lo, mut hi) = (0.0f64, f64::INFINITY, 0.0f64);
        for k in 0..=100 {
            let psi = herm.evolve(k as f64 * 0.1, &psi0, 1e-10).unwrap();
            drift = drift.max((eta_norm(&psi) - reference).abs() / reference);
            lo = lo.min(psi.norm());
            hi = hi.max(psi.norm());
        }
        pass &= drift <= DRIFT_TOL && hi - lo >= NORM_VARIATION;
        lines.push(format!("{name}: η-norm drift {drift:.1e}, |ψ| range {:.3}", hi - lo));
    }
    Outcome {
        pass,
        detail: format!("t in [0,10] step 0.1; {}", lines.join("; ")),
    }
}

fn c9_balanced_trace() -> Outcome {
    let (mut worst, mut count) = (0.0f64, 0);
    let mut g = rng(900);
    for n in 2..=8 {
        for _ in 0..50 {
            let eta = random_positive_metric(&mut g, n);
            let s = random_hermitian(&mut g, n, 1.0);
            let b: Vec<f64> = (0..n - 1).map(|_| g.gen_range(-0.5..0.5)).collect();
            let sys = PseudoHermitianSystem::compose(eta, s, g.gen_range(0.5..2.0), g.gen_range(-1.0..1.0), b, tol()).unwrap();
            worst = worst.max(sys.split_hermitian_parts().1.trace().unwrap().norm());
            count += 1;
        }
    }
    for n in 3..=16 {
        let mut bonds: Vec<f64> = (0..n).map(|_| g.gen_range(-1.0..1.0)).collect();
        let periodic = LatticeSpec::generic(2.0, bonds.clone(), 0.3, 1.1, Boundary::Periodic);
        bonds[n - 1] = 0.0;
        let open = LatticeSpec::generic(2.0, bonds, 0.3, 1.1, Boundary::Open);
        let mut lattice = vec![
            build_generic_balanced(&periodic, &tol()).unwrap(),
            build_generic_balanced(&open, &tol()).unwrap(),
            build_uniform(n, 2.5, g.gen_range(-1.0..1.0), &tol()).unwrap(),
        ];
        if n % 2 == 0 && n >= 4 {
            lattice.push(build_ssh(n / 2, 3.0, g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0), 0.7, &tol()).unwrap());
        }
        for model in lattice {
            worst = worst.max(model.loss_gain_trace().norm());
            count += 1;
        }
    }
    Outcome {
        pass: worst <= TRACE_TOL,
        detail: format!("{count} operators, max |Tr O_nh| {worst:.1e}"),
    }
}

fn main() {
    let criteria: [(usize, &str, fn() -> Outcome); 9] = [
        (1, "generator algebra", c1_generator_algebra),
        (2, "known structure constants", c2_known_constants),
        (3, "delta coefficient equivalence", c3_delta_equivalence),
        (4, "reality under the alpha0 bound", c4_reality),
        (5, "uniform chain closed forms", c5_uniform_closed_forms),
        (6, "dual-path model construction", c6_dual_path),
        (7, "SSH bound and reality", c7_ssh),
        (8, "pseudo-unitary evolution", c8_pseudo_unitarity),
        (9, "balanced loss-gain trace", c9_balanced_trace),
    ];
    let mut failed = Vec::new();
    for (id, name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!("[{verdict}] {id}. {name}: {} ({:.1}s)", outcome.detail, start.elapsed().as_secs_f64());
        if !outcome.pass {
            failed.push(id);
        }
    }
    if failed != EXPECTED_FAILURES {
        eprintln!("unexpected acceptance result: failing {failed:?}, expected {EXPECTED_FAILURES:?}");
        std::process::exit(1);
    }
    println!("acceptance: {} of 9 criteria pass; expected failures {EXPECTED_FAILURES:?}", 9 - failed.len());
}
