//! Scalar arithmetic modulo a prime and binomial coefficients mod p.
//!
//! Three independent routes to `C(n, k) mod p` live here:
//!
//! * [`binom_pascal`]: the additive recurrence `C(n, k) = C(n-1, k-1) + C(n-1, k)`,
//!   evaluated entirely in residues. Quadratic, so it is capped.
//! * [`binom_lucas`]: the product of digit binomials over the base-p expansions
//!   of `n` and `k`.
//! * [`kummer_carries`] / [`legendre_valuation`]: the p-adic valuation of
//!   `C(n, k)`, once by counting carries and once from factorial valuations.
//!   `C(n, k) mod p` vanishes exactly when that valuation is positive.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Default row cap for the Pascal recurrence oracle.
pub const DEFAULT_PASCAL_CAP: u64 = 5000;

/// A prime modulus `p < 2^31`, checked at construction.
///
/// The bound keeps every product of two residues below `2^62`, so all residue
/// arithmetic runs in plain `u64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub const MAX_EXCLUSIVE: u64 = 1 << 31;

    pub fn new(p: u64) -> Result<Self> {
        if p >= Self::MAX_EXCLUSIVE {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::CompositeModulus(p));
        }
        Ok(Self(p))
    }

    #[inline]
    pub const fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn residue(self, value: u64) -> Residue {
        Residue::new(value, self)
    }

    pub fn zero(self) -> Residue {
        Residue { value: 0, modulus: self }
    }

    pub fn one(self) -> Residue {
        Residue { value: 1, modulus: self }
    }

    /// `p^e`, or `None` on `u64` overflow.
    pub fn checked_pow(self, e: u32) -> Option<u64> {
        self.0.checked_pow(e)
    }
}

impl fmt::Debug for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrimeModulus({})", self.0)
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Deterministic trial division up to `sqrt(n)`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// All primes `<= bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime(n)).collect()
}

/// An element of `F_p`, always held in canonical form `0 <= value < p`.
///
/// The operator impls (`+`, `-`, `*`, unary `-`) panic when the two operands
/// carry different moduli; the `checked_*` methods report that as an error.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: PrimeModulus,
}

impl Residue {
    #[inline]
    pub fn new(value: u64, modulus: PrimeModulus) -> Self {
        Self { value: value % modulus.0, modulus }
    }

    pub fn from_signed(value: i64, modulus: PrimeModulus) -> Self {
        let p = modulus.0 as i64;
        Self { value: value.rem_euclid(p) as u64, modulus }
    }

    #[inline]
    pub const fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub const fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.value == 0
    }

    fn same_modulus(self, other: Self) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::ModulusMismatch { left: self.modulus.0, right: other.modulus.0 })
        }
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self> {
        self.same_modulus(rhs)?;
        Ok(self.add_unchecked(rhs))
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self> {
        self.same_modulus(rhs)?;
        Ok(self.sub_unchecked(rhs))
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self> {
        self.same_modulus(rhs)?;
        Ok(self.mul_unchecked(rhs))
    }

    #[inline]
    fn add_unchecked(self, rhs: Self) -> Self {
        let p = self.modulus.0;
        let s = self.value + rhs.value;
        Self { value: if s >= p { s - p } else { s }, modulus: self.modulus }
    }

    #[inline]
    fn sub_unchecked(self, rhs: Self) -> Self {
        let p = self.modulus.0;
        let value = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            p - (rhs.value - self.value)
        };
        Self { value, modulus: self.modulus }
    }

    #[inline]
    fn mul_unchecked(self, rhs: Self) -> Self {
        Self { value: self.value * rhs.value % self.modulus.0, modulus: self.modulus }
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = self.modulus.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(base);
            }
            base = base.mul_unchecked(base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat: `a^(p-2)`.
    pub fn inv(self) -> Result<Self> {
        if self.value == 0 {
            return Err(Error::ZeroInverse(self.modulus.0));
        }
        Ok(self.pow(self.modulus.0 - 2))
    }
}

fn expect_same(a: Residue, b: Residue) {
    if let Err(e) = a.same_modulus(b) {
        panic!("{e}");
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Self) -> Self {
        expect_same(self, rhs);
        self.add_unchecked(rhs)
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Self) -> Self {
        expect_same(self, rhs);
        self.sub_unchecked(rhs)
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Self) -> Self {
        expect_same(self, rhs);
        self.mul_unchecked(rhs)
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Self {
        self.modulus.zero().sub_unchecked(self)
    }
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus.0)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Little-endian base-b digits with no leading zeros; zero is the empty string.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitString {
    digits: Vec<u64>,
    base: u64,
}

impl DigitString {
    /// Validates a digit list against the canonical-form invariants.
    pub fn new(digits: Vec<u64>, base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base));
        }
        if let Some((position, &digit)) = digits.iter().enumerate().find(|(_, &d)| d >= base) {
            return Err(Error::InvalidDigit { digit, position, base });
        }
        if digits.last() == Some(&0) {
            return Err(Error::LeadingZero(digits.len() - 1));
        }
        Ok(Self { digits, base })
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// `sum digits[i] * base^i`, or `None` if it does not fit in `u64`.
    pub fn value(&self) -> Option<u64> {
        self.digits
            .iter()
            .rev()
            .try_fold(0u64, |acc, &d| acc.checked_mul(self.base)?.checked_add(d))
    }
}

/// Base-`base` expansion of `x`, least significant digit first.
pub fn digits(mut x: u64, base: u64) -> Result<DigitString> {
    if base < 2 {
        return Err(Error::InvalidBase(base));
    }
    let mut out = Vec::new();
    while x > 0 {
        out.push(x % base);
        x /= base;
    }
    Ok(DigitString { digits: out, base })
}

/// Rows `0, 1, 2, ...` of Pascal's triangle reduced mod p, built by addition only.
#[derive(Clone, Debug)]
pub struct PascalRows {
    row: Vec<Residue>,
    modulus: PrimeModulus,
}

impl PascalRows {
    pub fn new(modulus: PrimeModulus) -> Self {
        Self { row: Vec::new(), modulus }
    }
}

impl Iterator for PascalRows {
    type Item = Vec<Residue>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.row.is_empty() {
            self.row.push(self.modulus.one());
        } else {
            self.row.push(self.modulus.one());
            for j in (1..self.row.len() - 1).rev() {
                self.row[j] = self.row[j] + self.row[j - 1];
            }
        }
        Some(self.row.clone())
    }
}

/// `C(n, k) mod p` by the Pascal recurrence, with the default row cap.
pub fn binom_pascal(n: u64, k: u64, p: PrimeModulus) -> Result<Residue> {
    binom_pascal_capped(n, k, p, DEFAULT_PASCAL_CAP)
}

/// `C(n, k) mod p` by the Pascal recurrence. Returns 0 for `k > n`.
///
/// Only the first `k + 1` entries of each row are kept, so the cost is `O(n k)`.
pub fn binom_pascal_capped(n: u64, k: u64, p: PrimeModulus, cap: u64) -> Result<Residue> {
    if k > n {
        return Ok(p.zero());
    }
    if n > cap {
        return Err(Error::SizeCap { what: "n", value: n.into(), cap: cap.into() });
    }
    let width = k as usize + 1;
    let mut row = vec![p.zero(); width];
    row[0] = p.one();
    for r in 1..=n as usize {
        for j in (1..width.min(r + 1)).rev() {
            row[j] = row[j] + row[j - 1];
        }
    }
    Ok(row[k as usize])
}

/// `C(a, b) mod p` for single digits `a, b < p`.
fn digit_binom(a: u64, b: u64, p: PrimeModulus) -> Residue {
    if b > a {
        return p.zero();
    }
    let b = b.min(a - b);
    if b == 0 {
        return p.one();
    }
    let mut num = p.one();
    let mut den = p.one();
    for j in 0..b {
        num = num * p.residue(a - j);
        den = den * p.residue(j + 1);
    }
    // j + 1 <= b < p, so den is a unit.
    num * den.inv().expect("digit factorials are units mod p")
}

/// `C(n, k) mod p` as the product of digit binomials `C(n_i, k_i)`.
///
/// `k > n` yields 0, since some digit of `k` then exceeds the matching digit of `n`.
/// Each digit binomial costs `O(min(k_i, n_i - k_i))` multiplications, which is
/// negligible for small p but can reach `~p/2` for primes near `2^31`.
pub fn binom_lucas(mut n: u64, mut k: u64, p: PrimeModulus) -> Residue {
    let base = p.get();
    let mut acc = p.one();
    while k > 0 {
        let (ni, ki) = (n % base, k % base);
        if ki > ni {
            return p.zero();
        }
        acc = acc * digit_binom(ni, ki, p);
        n /= base;
        k /= base;
    }
    acc
}

/// Number of carries when adding `k` and `r` in base p.
///
/// By Kummer's theorem this is `v_p(C(k + r, k))`.
pub fn kummer_carries(mut k: u64, mut r: u64, p: PrimeModulus) -> u32 {
    let base = p.get();
    let mut carry = 0u64;
    let mut count = 0u32;
    while k > 0 || r > 0 || carry > 0 {
        let column = k % base + r % base + carry;
        carry = u64::from(column >= base);
        count += carry as u32;
        k /= base;
        r /= base;
    }
    count
}

/// `v_p(x!) = sum_{i >= 1} floor(x / p^i)`.
pub fn factorial_valuation(mut x: u64, p: PrimeModulus) -> u64 {
    let mut total = 0;
    while x > 0 {
        x /= p.get();
        total += x;
    }
    total
}

/// `v_p(C(n, k))` as `v_p(n!) - v_p(k!) - v_p((n-k)!)`.
pub fn legendre_valuation(n: u64, k: u64, p: PrimeModulus) -> Result<u32> {
    if k > n {
        return Err(Error::KExceedsN { n, k });
    }
    let v = factorial_valuation(n, p) - factorial_valuation(k, p) - factorial_valuation(n - k, p);
    Ok(v as u32)
}
