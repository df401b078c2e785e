//! Pseudo-hermitian operators built as `O = a₀ S η + a₁ Σₖ bₖ ηᵏ`.
//!
//! For Hermitian `S` and invertible Hermitian `η` the operator satisfies
//! `O† η = η O`. When `η` is positive definite, `ρ = √η` maps `O` to the
//! Hermitian `h = ρ O ρ⁻¹`, so spectra are always obtained from a Hermitian
//! eigensolve and time evolution from the Hermitian exponential of `h`.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lstsq::min_norm_lstsq;
use crate::matrix::{anticommutator, commutator, ComplexMatrix};
use crate::scalar::{Real, Tolerances};
use crate::su_basis::{BasisExpansion, StructureConstants, SuBasis};

/// Relative rank tolerance of the band-condition least-squares solve.
pub const BAND_RANK_TOL: f64 = 1e-10;
/// Largest per-equation residual for which a band-condition solve is accepted.
pub const BAND_RESIDUAL_TOL: f64 = 1e-8;

/// A state in `Cᴺ`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real = f64>(Vec<Complex<T>>);

impl<T: Real> StateVector<T> {
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Shape("empty state vector".into()));
        }
        if let Some(i) = amplitudes.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { row: i, col: 0 });
        }
        Ok(Self(amplitudes))
    }

    /// `|site⟩` in dimension `dim` (0-based site).
    pub fn basis(dim: usize, site: usize) -> Result<Self> {
        if site >= dim {
            return Err(Error::Shape(format!("site {site} outside 0..{dim}")));
        }
        let mut v = vec![Complex::new(T::zero(), T::zero()); dim];
        v[site] = Complex::from(T::one());
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.0
    }

    /// Standard norm `√⟨ψ,ψ⟩`.
    pub fn norm(&self) -> T {
        self.0.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }
}

impl<T: Real + Serialize> Serialize for StateVector<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for StateVector<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<[T; 2]>::deserialize(d)?;
        StateVector::new(raw.into_iter().map(|[re, im]| Complex::new(re, im)).collect())
            .map_err(serde::de::Error::custom)
    }
}

/// `⟨u, η v⟩ = u† η v`.
pub fn metric_inner_product<T: Real>(
    eta: &ComplexMatrix<T>,
    u: &StateVector<T>,
    v: &StateVector<T>,
) -> Result<Complex<T>> {
    if u.dim() != v.dim() {
        return Err(Error::Shape(format!("states of dimension {} and {}", u.dim(), v.dim())));
    }
    let ev = eta.mul_vec(v.amplitudes())?;
    if ev.len() != u.dim() {
        return Err(Error::Shape("metric rows do not match state dimension".into()));
    }
    Ok(u.amplitudes()
        .iter()
        .zip(&ev)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b))
}

/// Positivity report for a candidate metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricCertificate<T: Real = f64> {
    /// `Tr(η)/N`.
    pub alpha0: T,
    /// `√(Tr((η − α₀I)²)/2)`. `α₀ > alpha0_min` guarantees positivity only for
    /// N = 2; for larger N use [`MetricCertificate::sharp_bound`].
    pub alpha0_min: T,
    /// Magnitude of the lowest negative eigenvalue of `η − α₀I`, or 0 if there is none.
    pub lambda_min: T,
    pub min_eigenvalue: T,
    pub positive_definite: bool,
}

impl<T: Real> MetricCertificate<T> {
    /// Whether `α₀ > α₀ᵐⁱⁿ` holds. Not sufficient for positivity when N ≥ 3:
    /// the traceless spectrum (−2, 1, 1) has `α₀ᵐⁱⁿ = √3` but `λ_min = 2`.
    pub fn sufficient_bound_met(&self) -> bool {
        self.alpha0 > self.alpha0_min
    }

    /// `√(2(N−1)/N) · α₀ᵐⁱⁿ`, the largest `λ_min` a traceless N×N spectrum with
    /// this Frobenius norm can have; `α₀` above it guarantees positivity.
    pub fn sharp_bound(&self, dim: usize) -> T {
        let n = T::from_usize_lossy(dim);
        (T::lit(2.0) * (n - T::one()) / n).sqrt() * self.alpha0_min
    }

    /// `η − α₀I` is traceless, so `α₀ ≤ 0` rules positivity out.
    pub fn alpha0_allows_positivity(&self) -> bool {
        self.alpha0 > T::zero()
    }
}

/// Eigen-analysis of a Hermitian metric candidate.
pub fn certify_metric<T: Real>(eta: &ComplexMatrix<T>, tol: &Tolerances<T>) -> Result<MetricCertificate<T>> {
    if !eta.is_hermitian(tol.eig) {
        return Err(Error::Contract("metric must be Hermitian".into()));
    }
    let n = eta.rows();
    let eta = eta.hermitian_part();
    let alpha0 = eta.trace()?.re / T::from_usize_lossy(n);
    let traceless = &eta - &ComplexMatrix::identity(n).scale_real(alpha0);
    let alpha0_min = (traceless.frobenius_norm().powi(2) * T::lit(0.5)).sqrt();
    let lowest = traceless.hermitian_eig(tol.eig)?.eigenvalues[0];
    let lambda_min = if lowest < T::zero() { -lowest } else { T::zero() };
    let min_eigenvalue = eta.hermitian_eig(tol.eig)?.eigenvalues[0];
    Ok(MetricCertificate {
        alpha0,
        alpha0_min,
        lambda_min,
        min_eigenvalue,
        positive_definite: min_eigenvalue > tol.pd,
    })
}

fn require_invertible<T: Real>(eta: &ComplexMatrix<T>, tol: &Tolerances<T>) -> Result<()> {
    let ev = eta.hermitian_eig(tol.eig)?.eigenvalues;
    let smallest = ev.iter().fold(T::infinity(), |m, &x| m.min(x.abs()));
    if smallest <= tol.pd {
        return Err(Error::InvalidMetric(format!(
            "metric is singular (smallest |eigenvalue| {:e})",
            smallest.as_f64()
        )));
    }
    Ok(())
}

/// `‖O†η − ηO‖_F / (‖η‖_F ‖O‖_F)`; zero for `O = 0`.
pub fn verify_pseudo_hermiticity<T: Real>(
    o: &ComplexMatrix<T>,
    eta: &ComplexMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<T> {
    if !o.is_square() || o.rows() != eta.rows() || !eta.is_square() {
        return Err(Error::Shape(format!(
            "operator {}x{} vs metric {}x{}",
            o.rows(),
            o.cols(),
            eta.rows(),
            eta.cols()
        )));
    }
    if !eta.is_hermitian(tol.eig) {
        return Err(Error::Contract("metric must be Hermitian".into()));
    }
    require_invertible(eta, tol)?;
    intertwining_residual(o, eta)
}

/// `‖O†η − ηO‖_F / (‖η‖_F ‖O‖_F)` without any condition on `η`; zero for `O = 0`.
pub fn intertwining_residual<T: Real>(o: &ComplexMatrix<T>, eta: &ComplexMatrix<T>) -> Result<T> {
    if !o.is_square() || o.rows() != eta.rows() || !eta.is_square() {
        return Err(Error::Shape(format!("operator {}x{} vs metric {}x{}", o.rows(), o.cols(), eta.rows(), eta.cols())));
    }
    let scale = eta.frobenius_norm() * o.frobenius_norm();
    if scale == T::zero() {
        return Ok(T::zero());
    }
    let defect = &(&o.adjoint() * eta) - &(eta * o);
    Ok(defect.frobenius_norm() / scale)
}

/// `ρ = √η`, its inverse and `h = ρ O ρ⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hermitized<T: Real = f64> {
    pub h: ComplexMatrix<T>,
    pub rho: ComplexMatrix<T>,
    pub rho_inv: ComplexMatrix<T>,
}

impl<T: Real> Hermitized<T> {
    /// Ascending eigenvalues of `h` (and of the original operator).
    pub fn spectrum(&self, tol_eig: T) -> Result<Vec<T>> {
        Ok(self.h.hermitian_eig(tol_eig)?.eigenvalues)
    }

    /// `ρ⁻¹ exp(−i t h) ρ`.
    pub fn propagator(&self, t: T, tol_eig: T) -> Result<ComplexMatrix<T>> {
        let u = self.h.exp_antihermitian_from(t, tol_eig)?;
        Ok(&(&self.rho_inv * &u) * &self.rho)
    }

    /// `ψ(t) = ρ⁻¹ exp(−i t h) ρ ψ(0)`.
    pub fn evolve(&self, t: T, psi: &StateVector<T>, tol_eig: T) -> Result<StateVector<T>> {
        if psi.dim() != self.h.rows() {
            return Err(Error::Shape(format!("state of dimension {} for N = {}", psi.dim(), self.h.rows())));
        }
        if t == T::zero() {
            return Ok(psi.clone());
        }
        let u = self.h.exp_antihermitian_from(t, tol_eig)?;
        let x = self.rho.mul_vec(psi.amplitudes())?;
        let x = u.mul_vec(&x)?;
        StateVector::new(self.rho_inv.mul_vec(&x)?)
    }
}

/// Serializable description of a system: `{"n", "eta", "s", "a0", "a1", "b"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDescription<T: Real = f64> {
    pub n: usize,
    pub eta: ComplexMatrix<T>,
    pub s: ComplexMatrix<T>,
    #[serde(default = "one")]
    pub a0: T,
    #[serde(default)]
    pub a1: T,
    #[serde(default)]
    pub b: Vec<T>,
}

fn one<T: Real>() -> T {
    T::one()
}

/// A composed operator `O` together with its metric.
#[derive(Debug)]
pub struct PseudoHermitianSystem<T: Real = f64> {
    eta: ComplexMatrix<T>,
    s: ComplexMatrix<T>,
    a0: T,
    a1: T,
    b: Vec<T>,
    o: ComplexMatrix<T>,
    tol: Tolerances<T>,
    hermitized: OnceLock<Hermitized<T>>,
}

impl<T: Real> Clone for PseudoHermitianSystem<T> {
    fn clone(&self) -> Self {
        let hermitized = OnceLock::new();
        if let Some(h) = self.hermitized.get() {
            let _ = hermitized.set(h.clone());
        }
        Self {
            eta: self.eta.clone(),
            s: self.s.clone(),
            a0: self.a0,
            a1: self.a1,
            b: self.b.clone(),
            o: self.o.clone(),
            tol: self.tol,
            hermitized,
        }
    }
}

impl<T: Real> PseudoHermitianSystem<T> {
    /// `O = S η` (the `a₀ = 1, a₁ = 0` convention) with default tolerances.
    pub fn from_product(eta: ComplexMatrix<T>, s: ComplexMatrix<T>) -> Result<Self> {
        Self::compose(eta, s, T::one(), T::zero(), Vec::new(), Tolerances::default())
    }

    /// `O = a₀ S η + a₁ Σₖ bₖ ηᵏ` with `k = 1 … len(b) ≤ N − 1`.
    pub fn compose(
        eta: ComplexMatrix<T>,
        s: ComplexMatrix<T>,
        a0: T,
        a1: T,
        b: Vec<T>,
        tol: Tolerances<T>,
    ) -> Result<Self> {
        if !eta.is_square() || !s.is_square() || eta.rows() != s.rows() {
            return Err(Error::Shape(format!(
                "eta {}x{} and S {}x{} must be square and equal in size",
                eta.rows(),
                eta.cols(),
                s.rows(),
                s.cols()
            )));
        }
        let n = eta.rows();
        if !eta.is_hermitian(tol.eig) {
            return Err(Error::Contract("eta must be Hermitian".into()));
        }
        if !s.is_hermitian(tol.eig) {
            return Err(Error::Contract("S must be Hermitian".into()));
        }
        if b.len() > n.saturating_sub(1) {
            return Err(Error::Domain(format!(
                "polynomial term has {} coefficients, at most N − 1 = {} allowed",
                b.len(),
                n - 1
            )));
        }
        if !(a0.is_finite() && a1.is_finite() && b.iter().all(|x| x.is_finite())) {
            return Err(Error::Domain("non-finite composition coefficients".into()));
        }
        require_invertible(&eta, &tol)?;
        let mut o = (&s * &eta).scale_real(a0);
        if a1 != T::zero() {
            o = &o + &polynomial(&eta, &b)?.scale_real(a1);
        }
        Ok(Self {
            eta,
            s,
            a0,
            a1,
            b,
            o,
            tol,
            hermitized: OnceLock::new(),
        })
    }

    pub fn from_description(d: SystemDescription<T>, tol: Tolerances<T>) -> Result<Self> {
        if d.eta.rows() != d.n {
            return Err(Error::Shape(format!("n = {} but eta is {}x{}", d.n, d.eta.rows(), d.eta.cols())));
        }
        Self::compose(d.eta, d.s, d.a0, d.a1, d.b, tol)
    }

    pub fn description(&self) -> SystemDescription<T> {
        SystemDescription {
            n: self.dim(),
            eta: self.eta.clone(),
            s: self.s.clone(),
            a0: self.a0,
            a1: self.a1,
            b: self.b.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.eta.rows()
    }

    pub fn eta(&self) -> &ComplexMatrix<T> {
        &self.eta
    }

    pub fn s(&self) -> &ComplexMatrix<T> {
        &self.s
    }

    /// The composed operator `O`.
    pub fn operator(&self) -> &ComplexMatrix<T> {
        &self.o
    }

    pub fn coefficients(&self) -> (T, T, &[T]) {
        (self.a0, self.a1, &self.b)
    }

    pub fn tolerances(&self) -> &Tolerances<T> {
        &self.tol
    }

    /// `M = Σₖ bₖ ηᵏ`.
    pub fn polynomial_term(&self) -> ComplexMatrix<T> {
        polynomial(&self.eta, &self.b).expect("square metric")
    }

    /// `(O_h, O_nh) = ((a₀/2){S,η} + a₁M, (a₀/2)[S,η])`.
    pub fn split_hermitian_parts(&self) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
        let half = self.a0 * T::lit(0.5);
        let mut oh = anticommutator(&self.s, &self.eta).expect("square").scale_real(half);
        if self.a1 != T::zero() {
            oh = &oh + &self.polynomial_term().scale_real(self.a1);
        }
        let onh = commutator(&self.s, &self.eta).expect("square").scale_real(half);
        (oh, onh)
    }

    pub fn certify_metric(&self) -> Result<MetricCertificate<T>> {
        certify_metric(&self.eta, &self.tol)
    }

    pub fn pseudo_hermiticity_residual(&self) -> Result<T> {
        verify_pseudo_hermiticity(&self.o, &self.eta, &self.tol)
    }

    /// `ρ = √η`, `ρ⁻¹` and `h = ρOρ⁻¹`, computed once and cached.
    pub fn hermitize(&self) -> Result<&Hermitized<T>> {
        if let Some(h) = self.hermitized.get() {
            return Ok(h);
        }
        let value = hermitize_pair(&self.o, &self.eta, &self.tol)?;
        Ok(self.hermitized.get_or_init(|| value))
    }

    /// Ascending eigenvalues of `O`, obtained from the Hermitian `h`.
    pub fn real_spectrum(&self) -> Result<Vec<T>> {
        self.hermitize()?.spectrum(self.tol.eig)
    }

    /// `V(t) = ρ⁻¹ exp(−i t h) ρ = exp(−i t O)`.
    pub fn propagator(&self, t: T) -> Result<ComplexMatrix<T>> {
        self.hermitize()?.propagator(t, self.tol.eig)
    }

    pub fn evolve(&self, t: T, psi: &StateVector<T>) -> Result<StateVector<T>> {
        self.hermitize()?.evolve(t, psi, self.tol.eig)
    }

    /// `⟨ψ, ηψ⟩`, real for Hermitian `η`.
    pub fn metric_norm_sqr(&self, psi: &StateVector<T>) -> Result<T> {
        Ok(metric_inner_product(&self.eta, psi, psi)?.re)
    }
}

/// Hermitizes an arbitrary operator against a positive-definite metric.
pub fn hermitize_pair<T: Real>(
    o: &ComplexMatrix<T>,
    eta: &ComplexMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<Hermitized<T>> {
    if !o.is_square() || o.rows() != eta.rows() {
        return Err(Error::Shape(format!(
            "operator {}x{} vs metric {}x{}",
            o.rows(),
            o.cols(),
            eta.rows(),
            eta.cols()
        )));
    }
    let cert = certify_metric(eta, tol)?;
    if !cert.positive_definite {
        return Err(Error::NotPositiveDefinite {
            eigenvalue: cert.min_eigenvalue.as_f64(),
        });
    }
    let (rho, rho_inv) = eta.hermitian_part().sqrt_spd(tol)?;
    let h = &(&rho * o) * &rho_inv;
    Ok(Hermitized { h, rho, rho_inv })
}

fn polynomial<T: Real>(eta: &ComplexMatrix<T>, b: &[T]) -> Result<ComplexMatrix<T>> {
    let n = eta.rows();
    let mut acc = ComplexMatrix::zeros(n, n);
    let mut power = ComplexMatrix::identity(n);
    for &bk in b {
        power = power.matmul(eta)?;
        acc = &acc + &power.scale_real(bk);
    }
    Ok(acc)
}

/// Complex coefficients `δ₀ … δ_{N²−1}` of an operator in the `Tᵃ` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaCoefficients<T: Real = f64> {
    pub dim: usize,
    pub delta: Vec<Complex<T>>,
}

impl<T: Real> DeltaCoefficients<T> {
    /// Direct trace expansion of a matrix.
    pub fn from_matrix(basis: &SuBasis<T>, m: &ComplexMatrix<T>) -> Result<Self> {
        Ok(Self {
            dim: basis.dim(),
            delta: basis.expand(m)?,
        })
    }

    pub fn reconstruct(&self, basis: &SuBasis<T>) -> Result<ComplexMatrix<T>> {
        basis.reconstruct_complex(&self.delta)
    }
}

/// Coefficients of `S η` from those of `η` (`alpha`) and `S` (`beta`) using
/// the structure constants:
///
/// `δ₀ = α₀β₀ + (2/N) Σ αₐβₐ`, `δₐ = α₀βₐ + β₀αₐ + Σ_{b,c} (dᵃᵇᶜ − i fᵃᵇᶜ) α_b β_c`.
pub fn delta_coefficients<T: Real>(
    basis: &SuBasis<T>,
    sc: &StructureConstants<T>,
    alpha: &BasisExpansion<T>,
    beta: &BasisExpansion<T>,
) -> Result<DeltaCoefficients<T>> {
    let n = basis.dim();
    if alpha.dim != n || beta.dim != n || sc.dim() != n {
        return Err(Error::Shape(format!(
            "dimensions: basis {n}, structure constants {}, alpha {}, beta {}",
            sc.dim(),
            alpha.dim,
            beta.dim
        )));
    }
    let al = &alpha.coefficients;
    let be = &beta.coefficients;
    let m = n * n;
    let zero = Complex::new(T::zero(), T::zero());
    let mut delta = vec![zero; m];
    let dot: T = (1..m).map(|a| al[a] * be[a]).sum();
    delta[0] = Complex::from(al[0] * be[0] + T::lit(2.0) / T::from_usize_lossy(n) * dot);
    for a in 1..m {
        delta[a] = Complex::from(al[0] * be[a] + be[0] * al[a]);
    }
    let mut acc = delta;
    sc.for_each_d_minus_i_f(|a, b, c, z| acc[a] = acc[a] + z * (al[b] * be[c]));
    Ok(DeltaCoefficients { dim: n, delta: acc })
}

/// Flat indices of the symmetric real tridiagonal band: `a = k² + 2k − 2`
/// (`Λˢ_{k,k+1}`) together with every diagonal generator `a = n² − 1`.
pub fn tridiagonal_pattern(dim: usize) -> BTreeSet<usize> {
    let mut p: BTreeSet<usize> = (1..dim).map(|k| k * k + 2 * k - 2).collect();
    p.extend((2..=dim).map(|n| n * n - 1));
    p
}

/// Every off-diagonal generator (symmetric and antisymmetric) coupling sites
/// at distance `≤ max_offset`, plus all diagonal generators.
pub fn band_pattern(dim: usize, max_offset: usize) -> BTreeSet<usize> {
    let mut p: BTreeSet<usize> = (2..=dim).map(|n| n * n - 1).collect();
    for j in 2..=dim {
        for k in 1..j {
            if j - k <= max_offset {
                p.insert(j * j + 2 * k - 2 * j - 1);
                p.insert(j * j + 2 * k - 2 * j);
            }
        }
    }
    p
}

/// `δₐ` (`a ≥ 1`) split by membership in a band pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct BandResiduals<T: Real = f64> {
    pub on_band: Vec<(usize, Complex<T>)>,
    pub off_band: Vec<(usize, Complex<T>)>,
}

impl<T: Real> BandResiduals<T> {
    pub fn max_off_band(&self) -> T {
        self.off_band.iter().fold(T::zero(), |m, (_, z)| m.max(z.norm()))
    }

    /// All off-band coefficients vanish within `tol`.
    pub fn off_band_vanishes(&self, tol: T) -> bool {
        self.max_off_band() <= tol
    }
}

pub fn band_condition_residuals<T: Real>(delta: &DeltaCoefficients<T>, pattern: &BTreeSet<usize>) -> BandResiduals<T> {
    let (on_band, off_band) = delta
        .delta
        .iter()
        .copied()
        .enumerate()
        .skip(1)
        .partition(|(a, _)| pattern.contains(a));
    BandResiduals { on_band, off_band }
}

/// Solves the band conditions for `α₁ … α_{N²−1}` at fixed `α₀` and `β`.
///
/// Each `δₐ` of `Sη` is affine in `α`; on the pattern `δₐ` must equal the
/// matching entry of `targets` (ascending pattern order), off the pattern it
/// must vanish. The complex equations are split into real and imaginary rows
/// and solved in the minimum-norm least-squares sense.
pub fn solve_band_conditions<T: Real>(
    basis: &SuBasis<T>,
    sc: &StructureConstants<T>,
    alpha0: T,
    beta: &BasisExpansion<T>,
    pattern: &BTreeSet<usize>,
    targets: &[Complex<T>],
) -> Result<BasisExpansion<T>> {
    let n = basis.dim();
    let m = n * n;
    if beta.dim != n || sc.dim() != n {
        return Err(Error::Shape("beta / structure constants dimension mismatch".into()));
    }
    if pattern.iter().any(|&a| a == 0 || a >= m) {
        return Err(Error::Domain(format!("pattern must be a subset of 1..{m}")));
    }
    if targets.len() != pattern.len() {
        return Err(Error::Shape(format!(
            "{} targets for a pattern of {} indices",
            targets.len(),
            pattern.len()
        )));
    }
    let be = &beta.coefficients;
    let zero = Complex::new(T::zero(), T::zero());
    // kernel[a][b]: coefficient of α_b in δ_a (a, b ≥ 1).
    let mut kernel = vec![vec![zero; m]; m];
    for (a, row) in kernel.iter_mut().enumerate().skip(1) {
        row[a] = Complex::from(be[0]);
    }
    sc.for_each_d_minus_i_f(|a, b, c, z| kernel[a][b] = kernel[a][b] + z * be[c]);
    let mut rhs = vec![zero; m];
    for (&a, &t) in pattern.iter().zip(targets) {
        rhs[a] = t;
    }
    for a in 1..m {
        rhs[a] = rhs[a] - Complex::from(alpha0 * be[a]);
    }

    let mut rows = Vec::with_capacity(2 * (m - 1));
    let mut b = Vec::with_capacity(2 * (m - 1));
    for a in 1..m {
        rows.push(kernel[a][1..].iter().map(|z| z.re).collect::<Vec<_>>());
        b.push(rhs[a].re);
        rows.push(kernel[a][1..].iter().map(|z| z.im).collect::<Vec<_>>());
        b.push(rhs[a].im);
    }
    let fit = min_norm_lstsq(&rows, &b, T::lit(BAND_RANK_TOL))?;
    let x = fit.solution;

    let mut worst = T::zero();
    for a in 1..m {
        let lhs = kernel[a][1..]
            .iter()
            .zip(&x)
            .fold(zero, |acc, (&k, &xb)| acc + k * xb);
        worst = worst.max((lhs - rhs[a]).norm());
    }
    if !(worst <= T::lit(BAND_RESIDUAL_TOL)) {
        return Err(Error::NoSolution {
            residual: worst.as_f64(),
        });
    }
    let mut coefficients = Vec::with_capacity(m);
    coefficients.push(alpha0);
    coefficients.extend(x);
    BasisExpansion::new(n, coefficients)
}
