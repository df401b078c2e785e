//! Fundamental-representation SU(N) generators (generalized Gell-Mann
//! matrices), their flat index map, structure constants and expansions of
//! Hermitian matrices in the `{T⁰ = I, T¹ … T^{N²−1}}` basis.
//!
//! Generators are normalized as `Tr(TᵃTᵇ) = 2δᵃᵇ`. Site labels `k`, `j`, `n`
//! are 1-based; matrix positions are 0-based.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;

/// Largest `N` for which the full `f`/`d` tensors are computed without an explicit override.
pub const DEFAULT_TENSOR_CAP: usize = 12;

/// Residual imaginary part tolerated when reading real numbers off complex traces.
pub const IMAG_RESIDUE_TOL: f64 = 1e-12;

/// Label of a basis element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorLabel {
    Identity,
    /// `|k⟩⟨j| + |j⟩⟨k|`, `1 ≤ k < j ≤ N`.
    Symmetric { k: usize, j: usize },
    /// `−i(|k⟩⟨j| − |j⟩⟨k|)`, `1 ≤ k < j ≤ N`.
    Antisymmetric { k: usize, j: usize },
    /// `√(2/(n²−n)) (Σ_{i<n}|i⟩⟨i| − (n−1)|n⟩⟨n|)`, `2 ≤ n ≤ N`.
    Diagonal { n: usize },
}

impl GeneratorLabel {
    fn validate(self, dim: usize) -> Result<Self> {
        let ok = match self {
            Self::Identity => true,
            Self::Symmetric { k, j } | Self::Antisymmetric { k, j } => 1 <= k && k < j && j <= dim,
            Self::Diagonal { n } => 2 <= n && n <= dim,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::Domain(format!("{self:?} is not a generator of SU({dim})")))
        }
    }

    /// Flat index `a` of this label in an `N`-dimensional basis.
    pub fn flat_index(self, dim: usize) -> Result<usize> {
        Ok(match self.validate(dim)? {
            Self::Identity => 0,
            Self::Symmetric { k, j } => j * j + 2 * k - 2 * j - 1,
            Self::Antisymmetric { k, j } => j * j + 2 * k - 2 * j,
            Self::Diagonal { n } => n * n - 1,
        })
    }

    /// Inverse of [`flat_index`](Self::flat_index).
    pub fn from_flat(a: usize, dim: usize) -> Result<Self> {
        if a >= dim * dim {
            return Err(Error::Domain(format!("flat index {a} outside 0..{} for N = {dim}", dim * dim)));
        }
        if a == 0 {
            return Ok(Self::Identity);
        }
        // Block j occupies (j−1)² ..= j²−1.
        let j = integer_sqrt(a) + 1;
        if a == j * j - 1 {
            return Ok(Self::Diagonal { n: j });
        }
        let r = a - (j - 1) * (j - 1);
        let k = r / 2 + 1;
        Ok(if r % 2 == 0 {
            Self::Symmetric { k, j }
        } else {
            Self::Antisymmetric { k, j }
        })
    }
}

fn integer_sqrt(a: usize) -> usize {
    let mut r = (a as f64).sqrt() as usize;
    while r * r > a {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= a {
        r += 1;
    }
    r
}

/// Nonzero entries `(row, col, value)` of one generator.
type Sparse<T> = Vec<(usize, usize, Complex<T>)>;

/// The `N²` basis matrices `T⁰ … T^{N²−1}`, stored sparsely.
#[derive(Debug, Clone)]
pub struct SuBasis<T: Real = f64> {
    dim: usize,
    entries: Vec<Sparse<T>>,
}

impl<T: Real> SuBasis<T> {
    /// Builds the generalized Gell-Mann basis for `N ≥ 2`.
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Domain(format!("SU(N) basis needs N ≥ 2, got {dim}")));
        }
        let one = Complex::from(T::one());
        let i = Complex::i();
        let entries = (0..dim * dim)
            .map(|a| match GeneratorLabel::from_flat(a, dim).expect("in range") {
                GeneratorLabel::Identity => (0..dim).map(|s| (s, s, one)).collect(),
                GeneratorLabel::Symmetric { k, j } => vec![(k - 1, j - 1, one), (j - 1, k - 1, one)],
                GeneratorLabel::Antisymmetric { k, j } => vec![(k - 1, j - 1, -i), (j - 1, k - 1, i)],
                GeneratorLabel::Diagonal { n } => {
                    let nf = T::from_usize_lossy(n);
                    let s = (T::lit(2.0) / (nf * nf - nf)).sqrt();
                    let mut e: Sparse<T> = (0..n - 1).map(|p| (p, p, Complex::from(s))).collect();
                    e.push((n - 1, n - 1, Complex::from(-(nf - T::one()) * s)));
                    e
                }
            })
            .collect();
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of basis elements, `N²`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn label(&self, a: usize) -> Result<GeneratorLabel> {
        GeneratorLabel::from_flat(a, self.dim)
    }

    pub fn index_of(&self, label: GeneratorLabel) -> Result<usize> {
        label.flat_index(self.dim)
    }

    fn check_index(&self, a: usize) -> Result<()> {
        if a < self.len() {
            Ok(())
        } else {
            Err(Error::Domain(format!("generator index {a} outside 0..{}", self.len())))
        }
    }

    /// Dense matrix of `Tᵃ`.
    pub fn generator(&self, a: usize) -> Result<ComplexMatrix<T>> {
        self.check_index(a)?;
        let n = self.dim;
        let mut m = vec![Complex::new(T::zero(), T::zero()); n * n];
        for &(r, c, v) in &self.entries[a] {
            m[r * n + c] = v;
        }
        ComplexMatrix::new(n, n, m)
    }

    /// All `N²` generators as dense matrices, `T⁰ = I` first.
    pub fn generators(&self) -> Vec<ComplexMatrix<T>> {
        (0..self.len()).map(|a| self.generator(a).expect("in range")).collect()
    }

    fn lookup(&self, a: usize, row: usize, col: usize) -> Complex<T> {
        self.entries[a]
            .iter()
            .find(|&&(r, c, _)| r == row && c == col)
            .map_or(Complex::new(T::zero(), T::zero()), |&(_, _, v)| v)
    }

    fn raw_triple_trace(&self, a: usize, b: usize, c: usize) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for &(i, j, va) in &self.entries[a] {
            for &(jb, k, vb) in &self.entries[b] {
                if jb == j {
                    let vc = self.lookup(c, k, i);
                    acc = acc + va * vb * vc;
                }
            }
        }
        acc
    }

    /// `Tr(TᵃTᵇTᶜ)` for generator indices `a, b, c ≥ 1`.
    pub fn triple_trace(&self, a: usize, b: usize, c: usize) -> Result<Complex<T>> {
        for x in [a, b, c] {
            if x == 0 || x >= self.len() {
                return Err(Error::Domain(format!("triple_trace index {x} outside 1..{}", self.len())));
            }
        }
        Ok(self.raw_triple_trace(a, b, c))
    }

    /// `Tr(M Tᵃ)` computed from the sparse generator.
    fn trace_with(&self, m: &ComplexMatrix<T>, a: usize) -> Complex<T> {
        self.entries[a]
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &(r, c, v)| acc + m.get(c, r) * v)
    }

    fn check_matrix(&self, m: &ComplexMatrix<T>) -> Result<()> {
        if m.rows() != self.dim || m.cols() != self.dim {
            return Err(Error::Shape(format!(
                "expected {n}x{n} matrix, got {}x{}",
                m.rows(),
                m.cols(),
                n = self.dim
            )));
        }
        Ok(())
    }

    /// Complex coefficients `(Tr(M)/N, Tr(M T¹)/2, …)` of an arbitrary square matrix.
    pub fn expand(&self, m: &ComplexMatrix<T>) -> Result<Vec<Complex<T>>> {
        self.check_matrix(m)?;
        let n = T::from_usize_lossy(self.dim);
        let half = T::lit(0.5);
        Ok((0..self.len())
            .map(|a| {
                let t = self.trace_with(m, a);
                if a == 0 {
                    t / n
                } else {
                    t * half
                }
            })
            .collect())
    }

    /// Real coefficients of a Hermitian matrix.
    ///
    /// Hermiticity is checked at the default eigen tolerance and the
    /// Hermitian part is expanded, so every coefficient is real up to
    /// rounding.
    pub fn expand_hermitian(&self, h: &ComplexMatrix<T>) -> Result<BasisExpansion<T>> {
        self.check_matrix(h)?;
        if !h.is_hermitian(T::default_tol_eig()) {
            return Err(Error::Contract("expand_hermitian on a non-Hermitian matrix".into()));
        }
        let sym = h.hermitian_part();
        let coeffs = self.expand(&sym)?;
        let bound = T::lit(IMAG_RESIDUE_TOL) * T::one().max(sym.frobenius_norm());
        let mut out = Vec::with_capacity(coeffs.len());
        for (a, z) in coeffs.into_iter().enumerate() {
            if z.im.abs() > bound {
                return Err(Error::Consistency(format!(
                    "coefficient {a} has imaginary residue {:e}",
                    z.im.as_f64()
                )));
            }
            out.push(z.re);
        }
        Ok(BasisExpansion {
            dim: self.dim,
            coefficients: out,
        })
    }

    /// `Σ_a αₐ Tᵃ`.
    pub fn reconstruct(&self, e: &BasisExpansion<T>) -> Result<ComplexMatrix<T>> {
        let coeffs: Vec<Complex<T>> = e.coefficients.iter().map(|&x| Complex::from(x)).collect();
        self.reconstruct_complex(&coeffs)
    }

    /// `Σ_a δₐ Tᵃ` with complex coefficients.
    pub fn reconstruct_complex(&self, coeffs: &[Complex<T>]) -> Result<ComplexMatrix<T>> {
        if coeffs.len() != self.len() {
            return Err(Error::Shape(format!(
                "{} coefficients supplied, basis has {}",
                coeffs.len(),
                self.len()
            )));
        }
        let n = self.dim;
        let mut m = vec![Complex::new(T::zero(), T::zero()); n * n];
        for (a, &w) in coeffs.iter().enumerate() {
            for &(r, c, v) in &self.entries[a] {
                m[r * n + c] = m[r * n + c] + w * v;
            }
        }
        ComplexMatrix::new(n, n, m)
    }

    /// `|j+1⟩⟨j+1|` assembled from the identity and the diagonal generators,
    /// `j = 0 … N−1`:
    ///
    /// `I/N − √(j/(2(j+1))) Λᴰ_{(j+1)²−1} + Σ_{l=0}^{N−j−2} Λᴰ_{(j+l+2)²−1} / √(2(j+l+1)(j+l+2))`
    pub fn projector_from_diagonals(&self, j: usize) -> Result<ComplexMatrix<T>> {
        let n = self.dim;
        if j >= n {
            return Err(Error::Domain(format!("projector index {j} outside 0..{n}")));
        }
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); self.len()];
        coeffs[0] = Complex::from(T::from_usize_lossy(n).recip());
        if j > 0 {
            let jf = T::from_usize_lossy(j);
            coeffs[(j + 1) * (j + 1) - 1] = Complex::from(-(jf / (T::lit(2.0) * (jf + T::one()))).sqrt());
        }
        for l in 0..(n - j).saturating_sub(1) {
            let p = j + l + 1;
            let w = (T::lit(2.0) * T::from_usize_lossy(p) * T::from_usize_lossy(p + 1)).sqrt().recip();
            coeffs[(p + 1) * (p + 1) - 1] = Complex::from(w);
        }
        self.reconstruct_complex(&coeffs)
    }
}

/// Real coefficients `(α₀, α₁, …, α_{N²−1})` of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisExpansion<T: Real = f64> {
    pub dim: usize,
    pub coefficients: Vec<T>,
}

impl<T: Real> BasisExpansion<T> {
    pub fn new(dim: usize, coefficients: Vec<T>) -> Result<Self> {
        if coefficients.len() != dim * dim {
            return Err(Error::Shape(format!(
                "{} coefficients for N = {dim} (expected {})",
                coefficients.len(),
                dim * dim
            )));
        }
        Ok(Self { dim, coefficients })
    }

    /// `α₀ T⁰` only.
    pub fn identity_multiple(dim: usize, alpha0: T) -> Self {
        let mut coefficients = vec![T::zero(); dim * dim];
        coefficients[0] = alpha0;
        Self { dim, coefficients }
    }

    pub fn alpha0(&self) -> T {
        self.coefficients[0]
    }

    /// `√(Σ_{a≥1} αₐ²)`.
    pub fn traceless_norm(&self) -> T {
        self.coefficients[1..].iter().map(|&x| x * x).sum::<T>().sqrt()
    }
}

/// Canonical-key sparse storage of the `f` and `d` tensors.
#[derive(Debug, Clone)]
pub struct StructureConstants<T: Real = f64> {
    dim: usize,
    /// `a < b < c`.
    f: BTreeMap<(usize, usize, usize), T>,
    /// `a ≤ b ≤ c`.
    d: BTreeMap<(usize, usize, usize), T>,
}

impl<T: Real> StructureConstants<T> {
    /// Computes `fᵃᵇᶜ = Tr([Tᵃ,Tᵇ]Tᶜ)/(4i)` and `dᵃᵇᶜ = Tr({Tᵃ,Tᵇ}Tᶜ)/4`,
    /// refusing `N` above [`DEFAULT_TENSOR_CAP`].
    pub fn compute(basis: &SuBasis<T>) -> Result<Self> {
        Self::compute_with_cap(basis, false)
    }

    /// As [`compute`](Self::compute); `force` lifts the size cap.
    pub fn compute_with_cap(basis: &SuBasis<T>, force: bool) -> Result<Self> {
        let dim = basis.dim();
        if dim > DEFAULT_TENSOR_CAP && !force {
            return Err(Error::Domain(format!(
                "structure constants for N = {dim} exceed the default cap N ≤ {DEFAULT_TENSOR_CAP}"
            )));
        }
        let m = basis.len();
        let keep = T::lit(64.0) * T::epsilon();
        let residue = T::lit(IMAG_RESIDUE_TOL);
        let quarter = T::lit(0.25);
        let mut f = BTreeMap::new();
        let mut d = BTreeMap::new();
        for a in 1..m {
            for b in a..m {
                for c in b..m {
                    let abc = basis.raw_triple_trace(a, b, c);
                    let bac = basis.raw_triple_trace(b, a, c);
                    // (abc − bac)/(4i) = (−i/4)(abc − bac)
                    let fv = (abc - bac) * Complex::new(T::zero(), -quarter);
                    let dv = (abc + bac) * quarter;
                    if fv.im.abs() > residue || dv.im.abs() > residue {
                        return Err(Error::Consistency(format!(
                            "structure constant ({a},{b},{c}) has imaginary residue {:e}",
                            fv.im.abs().max(dv.im.abs()).as_f64()
                        )));
                    }
                    if a < b && b < c && fv.re.abs() > keep {
                        f.insert((a, b, c), fv.re);
                    }
                    if dv.re.abs() > keep {
                        d.insert((a, b, c), dv.re);
                    }
                }
            }
        }
        Ok(Self { dim, f, d })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `fᵃᵇᶜ` for any index order.
    pub fn f(&self, a: usize, b: usize, c: usize) -> T {
        if a == b || b == c || a == c {
            return T::zero();
        }
        let (key, odd) = sort3(a, b, c);
        let v = self.f.get(&key).copied().unwrap_or_else(T::zero);
        if odd {
            -v
        } else {
            v
        }
    }

    /// `dᵃᵇᶜ` for any index order.
    pub fn d(&self, a: usize, b: usize, c: usize) -> T {
        let (key, _) = sort3(a, b, c);
        self.d.get(&key).copied().unwrap_or_else(T::zero)
    }

    /// Canonical nonzero triples `a ≤ b ≤ c` with their `(f, d)` values.
    pub fn nonzero(&self) -> Vec<((usize, usize, usize), T, T)> {
        let mut keys: Vec<_> = self.f.keys().chain(self.d.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
            .map(|(a, b, c)| ((a, b, c), self.f(a, b, c), self.d(a, b, c)))
            .collect()
    }

    /// Calls `visit(a, b, c, z)` once per stored entry and ordered index
    /// triple, where `z` is that entry's contribution to `dᵃᵇᶜ − i fᵃᵇᶜ`.
    /// Summing `z` over calls with equal `(a, b, c)` gives the full value.
    pub(crate) fn for_each_d_minus_i_f(&self, mut visit: impl FnMut(usize, usize, usize, Complex<T>)) {
        for (&(a, b, c), &v) in &self.d {
            let mut perms = permutations(a, b, c);
            perms.sort_unstable();
            perms.dedup();
            for (x, y, z) in perms {
                visit(x, y, z, Complex::from(v));
            }
        }
        for (&(a, b, c), &v) in &self.f {
            for (x, y, z) in permutations(a, b, c) {
                let (_, odd) = sort3(x, y, z);
                let f = if odd { -v } else { v };
                visit(x, y, z, Complex::new(T::zero(), -f));
            }
        }
    }
}

fn permutations(a: usize, b: usize, c: usize) -> Vec<(usize, usize, usize)> {
    vec![(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)]
}

/// Sorts three indices ascending and reports whether the sorting permutation is odd.
fn sort3(a: usize, b: usize, c: usize) -> ((usize, usize, usize), bool) {
    let mut v = [a, b, c];
    let mut odd = false;
    for i in 0..2 {
        for j in 0..2 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                odd = !odd;
            }
        }
    }
    ((v[0], v[1], v[2]), odd)
}
