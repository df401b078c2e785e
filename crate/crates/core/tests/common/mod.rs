//! Independent oracles and random inputs shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64 as C;
use pseudoherm::ComplexMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dense(m: &ComplexMatrix) -> Vec<Vec<C>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect()).collect()
}

pub fn matrix(rows: Vec<Vec<C>>) -> ComplexMatrix {
    let n = rows.len();
    let m = rows[0].len();
    ComplexMatrix::new(n, m, rows.into_iter().flatten().collect()).unwrap()
}

/// Eigenvalues of a general complex matrix: Householder reduction to
/// Hessenberg form, then shifted QR with Givens rotations and deflation.
pub fn general_eigenvalues(a: &ComplexMatrix) -> Vec<C> {
    let n = a.rows();
    let mut h = dense(a);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C> = (k + 1..n).map(|i| h[i][k]).collect();
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 { C::new(1.0, 0.0) } else { x[0] / x[0].norm() };
        let mut v = x.clone();
        v[0] += phase * norm;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= vn);
        for j in 0..n {
            let s: C = (0..v.len()).map(|i| v[i].conj() * h[k + 1 + i][j]).sum();
            for i in 0..v.len() {
                h[k + 1 + i][j] -= v[i] * s * 2.0;
            }
        }
        for row in h.iter_mut() {
            let s: C = (0..v.len()).map(|j| row[k + 1 + j] * v[j]).sum();
            for j in 0..v.len() {
                row[k + 1 + j] -= s * v[j].conj() * 2.0;
            }
        }
    }

    let mut eig = Vec::with_capacity(n);
    let mut hi = n as isize - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    while hi >= 0 {
        let hiu = hi as usize;
        let mut l = hiu;
        while l > 0 {
            let s = h[l][l].norm() + h[l - 1][l - 1].norm();
            if h[l][l - 1].norm() <= f64::EPSILON * s.max(f64::MIN_POSITIVE) {
                h[l][l - 1] = C::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hiu {
            eig.push(h[hiu][hiu]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        assert!(total < 1000 * n, "QR oracle did not converge");
        let (a, b, c, d) = (h[hiu - 1][hiu - 1], h[hiu - 1][hiu], h[hiu][hiu - 1], h[hiu][hiu]);
        let mut mu = {
            let half = (a - d) * 0.5;
            let disc = (half * half + b * c).sqrt();
            let (m1, m2) = ((a + d) * 0.5 + disc, (a + d) * 0.5 - disc);
            if (m1 - d).norm() < (m2 - d).norm() { m1 } else { m2 }
        };
        if iter % 11 == 0 {
            mu += C::new(h[hiu][hiu - 1].norm(), 0.0);
        }
        for k in l..=hiu {
            h[k][k] -= mu;
        }
        let mut rots = Vec::new();
        for k in l..hiu {
            let (x, y) = (h[k][k], h[k + 1][k]);
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (p, q) = if r == 0.0 { (C::new(1.0, 0.0), C::new(0.0, 0.0)) } else { (x / r, y / r) };
            for j in l..=hiu {
                let (u, w) = (h[k][j], h[k + 1][j]);
                h[k][j] = p.conj() * u + q.conj() * w;
                h[k + 1][j] = -q * u + p * w;
            }
            rots.push((k, p, q));
        }
        for (k, p, q) in rots {
            for row in h.iter_mut().take(hiu + 1).skip(l) {
                let (u, w) = (row[k], row[k + 1]);
                row[k] = u * p + w * q;
                row[k + 1] = -u * q.conj() + w * p.conj();
            }
        }
        for k in l..=hiu {
            h[k][k] += mu;
        }
    }
    eig
}

pub fn max_imag(eigs: &[C]) -> f64 {
    eigs.iter().fold(0.0, |m, z| m.max(z.im.abs()))
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize, scale: f64) -> ComplexMatrix {
    let mut rows = vec![vec![C::new(0.0, 0.0); n]; n];
    for i in 0..n {
        rows[i][i] = C::new(rng.gen_range(-scale..scale), 0.0);
        for j in i + 1..n {
            let z = C::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
            rows[i][j] = z;
            rows[j][i] = z.conj();
        }
    }
    matrix(rows)
}

/// Random traceless hermitian part with `α₀ = ratio · √(Tr(M²)/2)`.
pub fn metric_with_ratio(rng: &mut impl Rng, n: usize, ratio: f64) -> ComplexMatrix {
    let raw = random_hermitian(rng, n, 1.0);
    let mean = raw.trace().unwrap().re / n as f64;
    let traceless = &raw - &ComplexMatrix::identity(n).scale_real(mean);
    let bound = (traceless.frobenius_norm().powi(2) / 2.0).sqrt();
    &traceless + &ComplexMatrix::identity(n).scale_real(ratio * bound + 1e-3)
}

/// Positive-definite metric: `α₀` sits above the sharp bound `√(2(N−1)/N) α₀ᵐⁱⁿ`.
pub fn random_positive_metric(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let sharp = (2.0 * (n as f64 - 1.0) / n as f64).sqrt();
    let ratio = sharp * rng.gen_range(1.05..2.0);
    metric_with_ratio(rng, n, ratio)
}

/// Hermitian metric with eigenvalues of both signs.
pub fn random_indefinite_metric(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let q = random_hermitian(rng, n, 1.0).hermitian_eig(1e-12).unwrap().vectors;
    let diag: Vec<f64> = (0..n)
        .map(|i| {
            let mag = rng.gen_range(0.3..2.0);
            if i % 2 == 0 { mag } else { -mag }
        })
        .collect();
    &(&q * &ComplexMatrix::from_diag(&diag)) * &q.adjoint()
}

/// Eigenvalues sorted by real part.
pub fn sorted_real_parts(eigs: &[C]) -> Vec<f64> {
    let mut v: Vec<f64> = eigs.iter().map(|z| z.re).collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}
