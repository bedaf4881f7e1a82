//! Dense square matrices, row vectors, and polynomials over `F_p`.
//!
//! Vectors are rows and act on the left: `v -> v * M`. Composition therefore
//! reads left to right, and the matrix of an endomorphism is filled in row by
//! row (row `i` is the image of the `i`-th basis vector).

use std::fmt;

use crate::error::{Error, Result};
use crate::modp::{PrimeModulus, Residue};

/// An `m x m` matrix over `F_p`, stored row-major as canonical residues.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    dim: usize,
    modulus: PrimeModulus,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zero(dim: usize, modulus: PrimeModulus) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension(dim));
        }
        Ok(Self { dim, modulus, data: vec![0; dim * dim] })
    }

    pub fn identity(dim: usize, modulus: PrimeModulus) -> Result<Self> {
        let mut out = Self::zero(dim, modulus)?;
        for i in 0..dim {
            out.data[i * dim + i] = 1;
        }
        Ok(out)
    }

    /// The matrix with a single 1 at `(row, col)` (0-indexed).
    pub fn unit(dim: usize, modulus: PrimeModulus, row: usize, col: usize) -> Result<Self> {
        let mut out = Self::zero(dim, modulus)?;
        if row >= dim || col >= dim {
            return Err(Error::Shape(format!("unit position ({row}, {col}) outside a {dim}x{dim} matrix")));
        }
        out.data[row * dim + col] = 1;
        Ok(out)
    }

    /// Builds a matrix from integer rows, reducing every entry mod p.
    pub fn from_rows(modulus: PrimeModulus, rows: &[Vec<u64>]) -> Result<Self> {
        let dim = rows.len();
        let mut out = Self::zero(dim, modulus)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Shape(format!("row {i} has length {}, expected {dim}", row.len())));
            }
            for (j, &x) in row.iter().enumerate() {
                out.data[i * dim + j] = x % modulus.get();
            }
        }
        Ok(out)
    }

    /// Builds a matrix from residues, which must all share one modulus.
    pub fn from_residues(rows: &[Vec<Residue>]) -> Result<Self> {
        let modulus = rows
            .first()
            .and_then(|r| r.first())
            .map(|r| r.modulus())
            .ok_or(Error::Dimension(0))?;
        let mut values = Vec::with_capacity(rows.len());
        for row in rows {
            let mut out = Vec::with_capacity(row.len());
            for r in row {
                if r.modulus() != modulus {
                    return Err(Error::ModulusMismatch { left: modulus.get(), right: r.modulus().get() });
                }
                out.push(r.value());
            }
            values.push(out);
        }
        Self::from_rows(modulus, &values)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Residue {
        self.modulus.residue(self.data[row * self.dim + col])
    }

    #[inline]
    pub(crate) fn raw(&self) -> &[u64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.data.chunks(self.dim).map(<[u64]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        let m = self.dim;
        self.data.iter().enumerate().all(|(idx, &x)| x == u64::from(idx / m == idx % m))
    }

    /// Positions `(row, col)` of all nonzero entries, row-major.
    pub fn support(&self) -> Vec<(usize, usize)> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(idx, _)| (idx / self.dim, idx % self.dim))
            .collect()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch { left: self.modulus.get(), right: other.modulus.get() });
        }
        if self.dim != other.dim {
            return Err(Error::Shape(format!("{0}x{0} vs {1}x{1}", self.dim, other.dim)));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let p = self.modulus.get();
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| (a + p - b) % p).collect();
        Ok(Self { dim: self.dim, modulus: self.modulus, data })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn scale(&self, c: Residue) -> Result<Self> {
        if c.modulus() != self.modulus {
            return Err(Error::ModulusMismatch { left: self.modulus.get(), right: c.modulus().get() });
        }
        let p = self.modulus.get();
        let data = self.data.iter().map(|&a| a * c.value() % p).collect();
        Ok(Self { dim: self.dim, modulus: self.modulus, data })
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let p = self.modulus.get();
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| {
                let s = a + b;
                if s >= p {
                    s - p
                } else {
                    s
                }
            })
            .collect();
        Self { dim: self.dim, modulus: self.modulus, data }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let m = self.dim;
        let p = self.modulus.get();
        // Products are < p^2 < 2^62; when m of them fit in a u64 we reduce once per entry.
        let lazy = (p - 1).checked_mul(p - 1).and_then(|sq| sq.checked_mul(m as u64)).is_some();
        // First nonzero column of each row of `other`; skips the zero triangle of
        // upper-triangular operands.
        let starts: Vec<usize> = other
            .data
            .chunks(m)
            .map(|row| row.iter().position(|&x| x != 0).unwrap_or(m))
            .collect();
        let mut data = vec![0u64; m * m];
        let mut acc = vec![0u64; m];
        for i in 0..m {
            acc.iter_mut().for_each(|x| *x = 0);
            for (k, &start) in starts.iter().enumerate() {
                let aik = self.data[i * m + k];
                if aik == 0 {
                    continue;
                }
                let row = &other.data[k * m..(k + 1) * m];
                if lazy {
                    for (slot, &b) in acc[start..].iter_mut().zip(&row[start..]) {
                        *slot += aik * b;
                    }
                } else {
                    for (slot, &b) in acc[start..].iter_mut().zip(&row[start..]) {
                        *slot = (*slot + aik * b) % p;
                    }
                }
            }
            for (out, &x) in data[i * m..(i + 1) * m].iter_mut().zip(&acc) {
                *out = x % p;
            }
        }
        Self { dim: m, modulus: self.modulus, data }
    }

    /// `self^e` by binary exponentiation; `self^0 = I`.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim, self.modulus).expect("dim >= 1");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix {0}x{0} mod {1} [", self.dim, self.modulus)?;
        for row in self.data.chunks(self.dim) {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

/// A row vector over `F_p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpVector {
    modulus: PrimeModulus,
    data: Vec<u64>,
}

impl FpVector {
    pub fn new(modulus: PrimeModulus, values: &[u64]) -> Self {
        Self { modulus, data: values.iter().map(|&x| x % modulus.get()).collect() }
    }

    pub fn zero(len: usize, modulus: PrimeModulus) -> Self {
        Self { modulus, data: vec![0; len] }
    }

    /// The standard basis vector `e_index` (0-indexed).
    pub fn basis(len: usize, modulus: PrimeModulus, index: usize) -> Self {
        let mut out = Self::zero(len, modulus);
        out.data[index] = 1;
        out
    }

    pub fn from_residues(modulus: PrimeModulus, values: &[Residue]) -> Result<Self> {
        let mut data = Vec::with_capacity(values.len());
        for r in values {
            if r.modulus() != modulus {
                return Err(Error::ModulusMismatch { left: modulus.get(), right: r.modulus().get() });
            }
            data.push(r.value());
        }
        Ok(Self { modulus, data })
    }

    pub(crate) fn from_raw(modulus: PrimeModulus, data: Vec<u64>) -> Self {
        Self { modulus, data }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn values(&self) -> &[u64] {
        &self.data
    }

    pub fn residues(&self) -> Vec<Residue> {
        self.data.iter().map(|&x| self.modulus.residue(x)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_len(other.modulus, other.len())?;
        Ok(self.add_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let p = self.modulus.get();
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| {
                let s = a + b;
                if s >= p {
                    s - p
                } else {
                    s
                }
            })
            .collect();
        Self { modulus: self.modulus, data }
    }

    pub fn neg(&self) -> Self {
        let p = self.modulus.get();
        Self { modulus: self.modulus, data: self.data.iter().map(|&x| (p - x) % p).collect() }
    }

    fn check_len(&self, modulus: PrimeModulus, len: usize) -> Result<()> {
        if modulus != self.modulus {
            return Err(Error::ModulusMismatch { left: self.modulus.get(), right: modulus.get() });
        }
        if len != self.len() {
            return Err(Error::Shape(format!("vector length {} vs {len}", self.len())));
        }
        Ok(())
    }

    /// `v * M`.
    pub fn mul_matrix(&self, matrix: &FpMatrix) -> Result<Self> {
        self.check_len(matrix.modulus(), matrix.dim())?;
        Ok(self.mul_matrix_unchecked(matrix))
    }

    pub(crate) fn mul_matrix_unchecked(&self, matrix: &FpMatrix) -> Self {
        let m = matrix.dim();
        let p = self.modulus.get();
        let mut out = vec![0u64; m];
        for (i, &vi) in self.data.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            // Row i of an upper-triangular matrix is zero before column i; the
            // general case just multiplies zeros.
            for (slot, &x) in out.iter_mut().zip(&matrix.raw()[i * m..(i + 1) * m]) {
                *slot = (*slot + vi * x) % p;
            }
        }
        Self { modulus: self.modulus, data: out }
    }
}

impl fmt::Debug for FpVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} (mod {})", self.data, self.modulus)
    }
}

/// `J`: ones on the first superdiagonal, zeros elsewhere.
pub fn jordan_nilpotent(m: usize, p: PrimeModulus) -> Result<FpMatrix> {
    let mut out = FpMatrix::zero(m, p)?;
    for i in 0..m - 1 {
        out.data[i * m + i + 1] = 1;
    }
    Ok(out)
}

/// `A = I + J`, the unipotent Jordan block.
pub fn jordan_unipotent(m: usize, p: PrimeModulus) -> Result<FpMatrix> {
    let mut out = jordan_nilpotent(m, p)?;
    for i in 0..m {
        out.data[i * m + i] = 1;
    }
    Ok(out)
}

/// `I + a + a^2 + ... + a^(count-1)`.
///
/// Evaluated by doubling on the pair `(S_k, a^k)` where `S_k` is the partial sum:
/// `S_2k = S_k + a^k S_k` and `S_(k+1) = S_k + a^k`. No inverse of `a - I` is
/// involved, which matters because `A - I = J` is singular.
pub fn geometric_sum(a: &FpMatrix, count: u64) -> Result<FpMatrix> {
    if count == 0 {
        return Err(Error::Domain("geometric_sum needs count >= 1".into()));
    }
    let mut sum = FpMatrix::zero(a.dim(), a.modulus())?;
    let mut power = FpMatrix::identity(a.dim(), a.modulus())?;
    for (step, bit) in (0..64 - count.leading_zeros()).rev().enumerate() {
        // At k = 0 doubling is a no-op.
        if step > 0 {
            sum = sum.add_unchecked(&power.mul_unchecked(&sum));
            power = power.mul_unchecked(&power);
        }
        if (count >> bit) & 1 == 1 {
            sum = sum.add_unchecked(&power);
            power = power.mul_unchecked(a);
        }
    }
    Ok(sum)
}

/// Coefficients `[c_0, ..., c_(m-1)]` with `x = sum c_i J^i`.
///
/// Only upper-triangular Toeplitz matrices lie in the span of the powers of `J`;
/// anything else is rejected with the first offending position.
pub fn superdiagonal_coeffs(x: &FpMatrix) -> Result<Vec<Residue>> {
    let m = x.dim();
    let raw = x.raw();
    for r in 0..m {
        for c in 0..m {
            let expected = if c < r { 0 } else { raw[c - r] };
            if raw[r * m + c] != expected {
                return Err(Error::NotToeplitz { row: r, col: c });
            }
        }
    }
    Ok(raw[..m].iter().map(|&v| x.modulus().residue(v)).collect())
}

/// `(A - I)^e = 0`, i.e. `J^e = 0`. True exactly when `e >= m`, since the
/// minimal polynomial of `A` is `(X - 1)^m`.
pub fn minimal_poly_degree_check(m: usize, p: PrimeModulus, e: u64) -> Result<bool> {
    let a = jordan_unipotent(m, p)?;
    let j = a.checked_sub(&FpMatrix::identity(m, p)?)?;
    Ok(j.pow(e).is_zero())
}

/// A polynomial over `F_p`, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPolynomial {
    modulus: PrimeModulus,
    coeffs: Vec<u64>,
}

impl FpPolynomial {
    pub fn new(modulus: PrimeModulus, values: &[u64]) -> Self {
        let mut coeffs: Vec<u64> = values.iter().map(|&x| x % modulus.get()).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { modulus, coeffs }
    }

    /// `1 + X + ... + X^(len-1)`.
    pub fn all_ones(modulus: PrimeModulus, len: usize) -> Self {
        Self::new(modulus, &vec![1; len])
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn values(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeffs(&self) -> Vec<Residue> {
        self.coeffs.iter().map(|&c| self.modulus.residue(c)).collect()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `self * (X - 1)`.
    pub fn mul_x_minus_one(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let p = self.modulus.get();
        let n = self.coeffs.len();
        let mut out = vec![0u64; n + 1];
        for (i, slot) in out.iter_mut().enumerate() {
            let shifted = if i > 0 { self.coeffs[i - 1] } else { 0 };
            let here = self.coeffs.get(i).copied().unwrap_or(0);
            *slot = (shifted + p - here) % p;
        }
        Self::new(self.modulus, &out)
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, x: &FpMatrix) -> Result<FpMatrix> {
        if x.modulus() != self.modulus {
            return Err(Error::ModulusMismatch { left: self.modulus.get(), right: x.modulus().get() });
        }
        let identity = FpMatrix::identity(x.dim(), self.modulus)?;
        let mut acc = FpMatrix::zero(x.dim(), self.modulus)?;
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul_unchecked(x).add_unchecked(&identity.scale(self.modulus.residue(c))?);
        }
        Ok(acc)
    }
}

impl fmt::Debug for FpPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} (mod {})", self.coeffs, self.modulus)
    }
}

/// `(X - 1)^exponent` over `F_p`, by repeated multiplication by `X - 1`.
pub fn poly_pow_linear(p: PrimeModulus, exponent: u64) -> FpPolynomial {
    let mut acc = FpPolynomial::new(p, &[1]);
    for _ in 0..exponent {
        acc = acc.mul_x_minus_one();
    }
    acc
}
