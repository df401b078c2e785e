//! Balanced loss-gain chains with nearest and next-nearest neighbour hopping.
//!
//! All models derive from the metric and ansatz
//!
//! ```text
//! η = γ₀ I + Σⱼ γⱼ Λˢ_{j,j+1},    S = ξ₀ I + Σⱼ ξⱼ Λᴬ_{j,j+1}
//! ```
//!
//! with cyclic site labels. Fixing `ξⱼ = −C γⱼ` makes `O = S η` equal to
//!
//! ```text
//! O = γ₀ξ₀ + Σⱼ [ Γⱼ* |j⟩⟨j+1| + iCγⱼγⱼ₊₁ |j⟩⟨j+2| + h.c. − iC(γⱼ² − γⱼ₊₁²) |j+1⟩⟨j+1| ]
//! ```
//!
//! with `Γⱼ = (ξ₀ − iCγ₀)γⱼ`. Setting `γ_N = 0` removes the three corner
//! couplings and gives an open chain.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::pseudoherm::{certify_metric, hermitize_pair, Hermitized, MetricCertificate, PseudoHermitianSystem};
use crate::scalar::{Real, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    #[serde(rename = "generic")]
    GenericBalanced,
    Uniform,
    Ssh,
}

/// Parameters of a chain model.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec<T: Real = f64> {
    pub n: usize,
    pub gamma0: T,
    /// Bond weights `γ₁ … γ_N`; `γ_N` couples site N back to site 1.
    pub gamma: Vec<T>,
    pub xi0: T,
    /// Balance coupling, `ξⱼ = −C γⱼ`.
    pub c: T,
    pub boundary: Boundary,
    pub kind: ModelKind,
}

impl<T: Real> LatticeSpec<T> {
    /// Generic balanced chain with arbitrary bond weights.
    pub fn generic(gamma0: T, gamma: Vec<T>, xi0: T, c: T, boundary: Boundary) -> Self {
        Self {
            n: gamma.len(),
            gamma0,
            gamma,
            xi0,
            c,
            boundary,
            kind: ModelKind::GenericBalanced,
        }
    }

    /// Open chain with `γ₁ = … = γ_{N−1} = γ`, `γ_N = 0`, `ξ₀ = 0`.
    pub fn uniform(n: usize, gamma0: T, gamma: T) -> Self {
        let mut g = vec![gamma; n];
        if let Some(last) = g.last_mut() {
            *last = T::zero();
        }
        Self {
            n,
            gamma0,
            gamma: g,
            xi0: T::zero(),
            c: T::one(),
            boundary: Boundary::Open,
            kind: ModelKind::Uniform,
        }
    }

    /// Periodic chain of `2m` sites with bonds alternating `δ₁, δ₂`.
    pub fn ssh(m: usize, gamma0: T, delta1: T, delta2: T, c: T) -> Self {
        let gamma = (0..2 * m).map(|j| if j % 2 == 0 { delta1 } else { delta2 }).collect();
        Self {
            n: 2 * m,
            gamma0,
            gamma,
            xi0: T::zero(),
            c,
            boundary: Boundary::Periodic,
            kind: ModelKind::Ssh,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::Domain(format!("chain models need N ≥ 3, got {}", self.n)));
        }
        if self.gamma.len() != self.n {
            return Err(Error::Domain(format!("{} bond weights for N = {}", self.gamma.len(), self.n)));
        }
        let finite = self.gamma0.is_finite()
            && self.xi0.is_finite()
            && self.c.is_finite()
            && self.gamma.iter().all(|g| g.is_finite());
        if !finite {
            return Err(Error::Domain("non-finite lattice parameter".into()));
        }
        if self.boundary == Boundary::Open && self.gamma[self.n - 1] != T::zero() {
            return Err(Error::Domain("open boundary requires γ_N = 0".into()));
        }
        match self.kind {
            ModelKind::GenericBalanced => {}
            ModelKind::Uniform => {
                if self.boundary != Boundary::Open || self.xi0 != T::zero() {
                    return Err(Error::Domain("uniform model is open with ξ₀ = 0".into()));
                }
                if self.gamma[..self.n - 1].iter().any(|&g| g != self.gamma[0]) {
                    return Err(Error::Domain("uniform model needs equal bond weights".into()));
                }
            }
            ModelKind::Ssh => {
                if self.n % 2 != 0 || self.n < 4 {
                    return Err(Error::Domain("SSH model needs N = 2m with m ≥ 2".into()));
                }
                if self.boundary != Boundary::Periodic || self.xi0 != T::zero() {
                    return Err(Error::Domain("SSH model is periodic with ξ₀ = 0".into()));
                }
                let alternates = self
                    .gamma
                    .iter()
                    .enumerate()
                    .all(|(j, &g)| g == self.gamma[j % 2]);
                if !alternates {
                    return Err(Error::Domain("SSH bond weights must alternate δ₁, δ₂".into()));
                }
                if self.c == T::zero() {
                    return Err(Error::Domain("SSH model divides by C, which must be nonzero".into()));
                }
            }
        }
        Ok(())
    }

    /// The cyclic ansatz parameters `ξⱼ = −C γⱼ`.
    pub fn balanced_xi(&self) -> Vec<T> {
        self.gamma.iter().map(|&g| -self.c * g).collect()
    }
}

/// A built chain: operator, metric and the metric's certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeModel<T: Real = f64> {
    pub spec: LatticeSpec<T>,
    pub h: ComplexMatrix<T>,
    pub eta: ComplexMatrix<T>,
    pub certificate: MetricCertificate<T>,
}

impl<T: Real> LatticeModel<T> {
    fn assemble(spec: LatticeSpec<T>, h: ComplexMatrix<T>, eta: ComplexMatrix<T>, tol: &Tolerances<T>) -> Result<Self> {
        let certificate = certify_metric(&eta, tol)?;
        Ok(Self {
            spec,
            h,
            eta,
            certificate,
        })
    }

    pub fn dim(&self) -> usize {
        self.h.rows()
    }

    /// `ρ = √η` and `h = ρHρ⁻¹`; refused when the metric is not positive definite.
    pub fn hermitize(&self, tol: &Tolerances<T>) -> Result<Hermitized<T>> {
        hermitize_pair(&self.h, &self.eta, tol)
    }

    pub fn real_spectrum(&self, tol: &Tolerances<T>) -> Result<Vec<T>> {
        self.hermitize(tol)?.spectrum(tol.eig)
    }

    /// `Tr((H − H†)/2)`, the net gain of the loss-gain terms.
    pub fn loss_gain_trace(&self) -> Complex<T> {
        self.h.antihermitian_part().trace().expect("square")
    }
}

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// `γ₀ I + Σⱼ γⱼ Λˢ_{j,j+1}` with cyclic labels.
pub fn balanced_metric<T: Real>(gamma0: T, gamma: &[T]) -> ComplexMatrix<T> {
    let n = gamma.len();
    let mut m = vec![zero(); n * n];
    for j in 0..n {
        m[j * n + j] = m[j * n + j] + Complex::from(gamma0);
        let next = (j + 1) % n;
        m[j * n + next] = m[j * n + next] + Complex::from(gamma[j]);
        m[next * n + j] = m[next * n + j] + Complex::from(gamma[j]);
    }
    ComplexMatrix::from_fn(n, n, |i, j| m[i * n + j])
}

/// `ξ₀ I + Σⱼ ξⱼ Λᴬ_{j,j+1}` with cyclic labels.
pub fn ansatz_s<T: Real>(xi0: T, xi: &[T]) -> ComplexMatrix<T> {
    let n = xi.len();
    let mut m = vec![zero(); n * n];
    for j in 0..n {
        m[j * n + j] = m[j * n + j] + Complex::from(xi0);
        let next = (j + 1) % n;
        // Λᴬ_{k,j} = −i(|k⟩⟨j| − |j⟩⟨k|)
        m[j * n + next] = m[j * n + next] + Complex::new(T::zero(), -xi[j]);
        m[next * n + j] = m[next * n + j] + Complex::new(T::zero(), xi[j]);
    }
    ComplexMatrix::from_fn(n, n, |i, j| m[i * n + j])
}

/// Balanced loss-gain operator assembled entry by entry from the closed form.
fn balanced_operator<T: Real>(spec: &LatticeSpec<T>) -> ComplexMatrix<T> {
    let n = spec.n;
    let g = &spec.gamma;
    let cc = spec.c;
    let gamma_coeff = Complex::new(spec.xi0, -cc * spec.gamma0);
    let mut m = vec![zero(); n * n];
    let mut add = |i: usize, j: usize, z: Complex<T>| m[i * n + j] = m[i * n + j] + z;
    for j in 0..n {
        let next = (j + 1) % n;
        let next2 = (j + 2) % n;
        add(j, j, Complex::from(spec.gamma0 * spec.xi0));
        let big_gamma = gamma_coeff * g[j];
        add(j, next, big_gamma.conj());
        add(next, j, big_gamma);
        let nnn = cc * g[j] * g[next];
        add(j, next2, Complex::new(T::zero(), nnn));
        add(next2, j, Complex::new(T::zero(), -nnn));
        add(next, next, Complex::new(T::zero(), -cc * (g[j] * g[j] - g[next] * g[next])));
    }
    ComplexMatrix::from_fn(n, n, |i, j| m[i * n + j])
}

/// Generic balanced chain from the closed-form operator; keeps the `γ₀ξ₀I` shift.
pub fn build_generic_balanced<T: Real>(spec: &LatticeSpec<T>, tol: &Tolerances<T>) -> Result<LatticeModel<T>> {
    spec.validate()?;
    let h = balanced_operator(spec);
    let eta = balanced_metric(spec.gamma0, &spec.gamma);
    let mut spec = spec.clone();
    spec.kind = ModelKind::GenericBalanced;
    LatticeModel::assemble(spec, h, eta, tol)
}

/// `O = S η` for the ansatz with free `ξ₁ … ξ_N`, through the general composition.
pub fn build_from_ansatz<T: Real>(spec: &LatticeSpec<T>, xi: &[T], tol: &Tolerances<T>) -> Result<LatticeModel<T>> {
    if spec.n < 3 || spec.gamma.len() != spec.n {
        return Err(Error::Domain(format!(
            "ansatz needs N ≥ 3 and N bond weights (N = {}, {} weights)",
            spec.n,
            spec.gamma.len()
        )));
    }
    if xi.len() != spec.n {
        return Err(Error::Domain(format!("{} ξ values for N = {}", xi.len(), spec.n)));
    }
    let eta = balanced_metric(spec.gamma0, &spec.gamma);
    let s = ansatz_s(spec.xi0, xi);
    let sys = PseudoHermitianSystem::compose(eta, s, T::one(), T::zero(), Vec::new(), *tol)?;
    let h = sys.operator().clone();
    let mut spec = spec.clone();
    spec.kind = ModelKind::GenericBalanced;
    LatticeModel::assemble(spec, h, sys.eta().clone(), tol)
}

/// Open chain with uniform couplings and gain/loss on the two end sites:
///
/// `H = iγ₀ Σ(|j⟩⟨j+1| − h.c.) + iγ Σ(|j⟩⟨j+2| − h.c.) + iγ(|1⟩⟨1| − |N⟩⟨N|)`
pub fn build_uniform<T: Real>(n: usize, gamma0: T, gamma: T, tol: &Tolerances<T>) -> Result<LatticeModel<T>> {
    if n < 3 {
        return Err(Error::Domain(format!("uniform chain needs N ≥ 3, got {n}")));
    }
    let spec = LatticeSpec::uniform(n, gamma0, gamma);
    spec.validate()?;
    let h = ComplexMatrix::from_fn(n, n, |r, s| {
        let v = if s == r + 1 {
            gamma0
        } else if r == s + 1 {
            -gamma0
        } else if s == r + 2 {
            gamma
        } else if r == s + 2 {
            -gamma
        } else if r == s && r == 0 {
            gamma
        } else if r == s && r == n - 1 {
            -gamma
        } else {
            T::zero()
        };
        Complex::new(T::zero(), v)
    });
    let eta = balanced_metric(gamma0, &spec.gamma);
    LatticeModel::assemble(spec, h, eta, tol)
}

/// Closed-form metric spectrum `γ₀ + 2γ cos(kπ/(N+1))`, ascending.
pub fn uniform_metric_eigenvalues<T: Real>(n: usize, gamma0: T, gamma: T) -> Vec<T> {
    let denom = T::from_usize_lossy(n + 1);
    let mut e: Vec<T> = (1..=n)
        .map(|k| gamma0 + T::lit(2.0) * gamma * (T::from_usize_lossy(k) * T::PI() / denom).cos())
        .collect();
    e.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    e
}

/// `γ₀ > 2|γ| cos(π/(N+1))`.
pub fn uniform_reality_condition<T: Real>(n: usize, gamma0: T, gamma: T) -> bool {
    gamma0 > T::lit(2.0) * gamma.abs() * (T::PI() / T::from_usize_lossy(n + 1)).cos()
}

/// `[O]ᵢⱼ = √(2/(N+1)) sin(ijπ/(N+1))`, which satisfies `O η Oᵀ = diag(e_k)`.
pub fn uniform_diagonalizer<T: Real>(n: usize) -> ComplexMatrix<T> {
    let denom = T::from_usize_lossy(n + 1);
    let scale = (T::lit(2.0) / denom).sqrt();
    ComplexMatrix::from_fn(n, n, |i, j| {
        let arg = T::from_usize_lossy((i + 1) * (j + 1)) * T::PI() / denom;
        Complex::from(scale * arg.sin())
    })
}

/// Modified SSH chain: the generic balanced operator with alternating bonds
/// `δ₁, δ₂`, `ξ₀ = 0` and periodic wrap, divided by `C`.
pub fn build_ssh<T: Real>(
    m: usize,
    gamma0: T,
    delta1: T,
    delta2: T,
    c: T,
    tol: &Tolerances<T>,
) -> Result<LatticeModel<T>> {
    if m < 2 {
        return Err(Error::Domain(format!("SSH chain needs m ≥ 2, got {m}")));
    }
    let spec = LatticeSpec::ssh(m, gamma0, delta1, delta2, c);
    spec.validate()?;
    let h = balanced_operator(&spec).scale_real(c.recip());
    let eta = balanced_metric(gamma0, &spec.gamma);
    LatticeModel::assemble(spec, h, eta, tol)
}

/// `γ₀ > √(m(δ₁² + δ₂²))`.
pub fn ssh_sufficient_condition<T: Real>(m: usize, gamma0: T, delta1: T, delta2: T) -> bool {
    gamma0 > ssh_bound(m, delta1, delta2)
}

/// `√(m(δ₁² + δ₂²))`.
pub fn ssh_bound<T: Real>(m: usize, delta1: T, delta2: T) -> T {
    (T::from_usize_lossy(m) * (delta1 * delta1 + delta2 * delta2)).sqrt()
}

/// Builds whichever model the spec describes.
pub fn build_model<T: Real>(spec: &LatticeSpec<T>, tol: &Tolerances<T>) -> Result<LatticeModel<T>> {
    spec.validate()?;
    match spec.kind {
        ModelKind::GenericBalanced => build_generic_balanced(spec, tol),
        ModelKind::Uniform => build_uniform(spec.n, spec.gamma0, spec.gamma[0], tol),
        ModelKind::Ssh => build_ssh(spec.n / 2, spec.gamma0, spec.gamma[0], spec.gamma[1], spec.c, tol),
    }
}

/// Entries `(1, N−1)`, `(1, N)` and `(2, N)` (1-based) of an operator.
///
/// For N ≤ 4 these positions coincide with ordinary NN/NNN bonds.
pub fn corner_elements<T: Real>(h: &ComplexMatrix<T>) -> [Complex<T>; 3] {
    let n = h.rows();
    [h.get(0, n - 2), h.get(0, n - 1), h.get(1, n - 1)]
}

/// Mirror entries `(N−1, 1)`, `(N, 1)` and `(N, 2)`.
pub fn corner_mirrors<T: Real>(h: &ComplexMatrix<T>) -> [Complex<T>; 3] {
    let n = h.rows();
    [h.get(n - 2, 0), h.get(n - 1, 0), h.get(n - 1, 1)]
}

/// Largest magnitude over the corner entries and their mirrors.
pub fn max_corner_magnitude<T: Real>(h: &ComplexMatrix<T>) -> T {
    corner_elements(h)
        .iter()
        .chain(corner_mirrors(h).iter())
        .fold(T::zero(), |m, z| m.max(z.norm()))
}

/// JSON layout of a lattice spec:
/// `{"kind", "n", "gamma0", "gamma" (list or scalar), "delta1", "delta2", "m", "xi0", "c", "boundary"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpecFile {
    pub kind: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub gamma0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<GammaField>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Boundary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GammaField {
    Bonds(Vec<f64>),
    Uniform(f64),
}

impl LatticeSpecFile {
    fn reject(&self, fields: &[(&str, bool)]) -> Result<()> {
        for (name, present) in fields {
            if *present {
                return Err(Error::Domain(format!("field `{name}` does not apply to {:?} specs", self.kind)));
            }
        }
        Ok(())
    }

    fn need<V: Copy>(value: Option<V>, name: &str) -> Result<V> {
        value.ok_or_else(|| Error::Domain(format!("missing field `{name}`")))
    }

    pub fn into_spec(self) -> Result<LatticeSpec<f64>> {
        let spec = match self.kind {
            ModelKind::GenericBalanced => {
                self.reject(&[
                    ("delta1", self.delta1.is_some()),
                    ("delta2", self.delta2.is_some()),
                    ("m", self.m.is_some()),
                ])?;
                let n = Self::need(self.n, "n")?;
                let gamma = match &self.gamma {
                    Some(GammaField::Bonds(g)) => g.clone(),
                    _ => return Err(Error::Domain("generic spec needs `gamma` as a list of N bonds".into())),
                };
                if gamma.len() != n {
                    return Err(Error::Domain(format!("{} bond weights for n = {n}", gamma.len())));
                }
                LatticeSpec::generic(
                    self.gamma0,
                    gamma,
                    self.xi0.unwrap_or(0.0),
                    Self::need(self.c, "c")?,
                    self.boundary.unwrap_or(Boundary::Periodic),
                )
            }
            ModelKind::Uniform => {
                self.reject(&[
                    ("delta1", self.delta1.is_some()),
                    ("delta2", self.delta2.is_some()),
                    ("m", self.m.is_some()),
                    ("xi0", self.xi0.is_some()),
                    ("c", self.c.is_some()),
                ])?;
                if self.boundary == Some(Boundary::Periodic) {
                    return Err(Error::Domain("uniform model has an open boundary".into()));
                }
                let gamma = match self.gamma {
                    Some(GammaField::Uniform(g)) => g,
                    _ => return Err(Error::Domain("uniform spec needs a scalar `gamma`".into())),
                };
                LatticeSpec::uniform(Self::need(self.n, "n")?, self.gamma0, gamma)
            }
            ModelKind::Ssh => {
                self.reject(&[("gamma", self.gamma.is_some()), ("xi0", self.xi0.is_some())])?;
                if self.boundary == Some(Boundary::Open) {
                    return Err(Error::Domain("SSH model has a periodic boundary".into()));
                }
                let m = Self::need(self.m, "m")?;
                if let Some(n) = self.n {
                    if n != 2 * m {
                        return Err(Error::Domain(format!("n = {n} but m = {m}")));
                    }
                }
                LatticeSpec::ssh(
                    m,
                    self.gamma0,
                    Self::need(self.delta1, "delta1")?,
                    Self::need(self.delta2, "delta2")?,
                    Self::need(self.c, "c")?,
                )
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Canonical file form of a spec.
    pub fn from_spec(spec: &LatticeSpec<f64>) -> Self {
        let base = Self {
            kind: spec.kind,
            n: Some(spec.n),
            gamma0: spec.gamma0,
            gamma: None,
            delta1: None,
            delta2: None,
            m: None,
            xi0: None,
            c: None,
            boundary: Some(spec.boundary),
        };
        match spec.kind {
            ModelKind::GenericBalanced => Self {
                gamma: Some(GammaField::Bonds(spec.gamma.clone())),
                xi0: Some(spec.xi0),
                c: Some(spec.c),
                ..base
            },
            ModelKind::Uniform => Self {
                gamma: Some(GammaField::Uniform(spec.gamma[0])),
                ..base
            },
            ModelKind::Ssh => Self {
                m: Some(spec.n / 2),
                delta1: Some(spec.gamma[0]),
                delta2: Some(spec.gamma[1]),
                c: Some(spec.c),
                ..base
            },
        }
    }
}
