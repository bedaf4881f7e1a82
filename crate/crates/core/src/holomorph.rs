//! The semidirect product `G = V ⋊ <α>` where `V = F_p^m` and `α` acts by the
//! unipotent Jordan block `A`.
//!
//! # Normal form and multiplication
//!
//! Every element is written `α^k · v` with the automorphism on the left,
//! stored as `(k, v)` with `0 <= k < ord(α) = p^n`. Conjugation by `α` applies
//! `α` to `V`: `α^-1 v α = v^α = v·A`, so `v α = α (v·A)` and by induction
//! `v α^k = α^k (v·A^k)`. Writing `V` additively,
//!
//! ```text
//! α^k1 v1 · α^k2 v2 = α^k1 α^k2 (v1·A^k2) v2 = α^(k1 + k2) (v1·A^k2 + v2)
//! ```
//!
//! so `(k1, v1)(k2, v2) = (k1 + k2 mod p^n, v1·A^k2 + v2)`, the identity is
//! `(0, 0)`, and `(k, v)^-1 = (-k, -v·A^-k)` with `A^-k = A^(p^n - k)`.
//!
//! Iterating the product gives `(k, v)^N = (Nk, v·(I + A^k + ... + A^((N-1)k)))`,
//! which is how the endomorphism returned by [`HolGroup::epsilon_endomorphism`]
//! enters the `p^n`-th power of an element.

use std::borrow::Cow;
use std::collections::BTreeMap;

use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fpmatrix::{geometric_sum, jordan_unipotent, FpMatrix, FpVector};
use crate::modp::PrimeModulus;

/// Default cap on `|G|` for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 20;

/// Largest `ord(α) * m^2` for which all powers of `A` are cached.
const POWER_CACHE_LIMIT: u64 = 1 << 22;

/// The unique `n >= 1` with `p^(n-1) < m <= p^n`.
pub fn canonical_n(p: PrimeModulus, m: usize) -> Result<u32> {
    if m < 2 {
        return Err(Error::Domain(format!(
            "dimension {m} has no level n >= 1 with p^(n-1) < m <= p^n"
        )));
    }
    let m = m as u128;
    let p = u128::from(p.get());
    let mut n = 1u32;
    let mut power = p;
    while power < m {
        power *= p;
        n += 1;
    }
    Ok(n)
}

/// Which side of the exponent dichotomy a group falls on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExponentBranch {
    /// `m < p^n`: exponent `p^n`.
    BelowPower,
    /// `m = p^n`: exponent `p^(n+1)`.
    AtPower,
}

impl ExponentBranch {
    pub fn label(self) -> &'static str {
        match self {
            ExponentBranch::BelowPower => "m<p^n",
            ExponentBranch::AtPower => "m=p^n",
        }
    }
}

/// An element `α^k · v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HolElement {
    k: u64,
    v: FpVector,
}

impl HolElement {
    pub fn new(k: u64, v: FpVector) -> Self {
        Self { k, v }
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn v(&self) -> &FpVector {
        &self.v
    }
}

/// `Hol(V, α)` for `V = F_p^m`, `m >= 2`, with `α` acting by `A = I + J`.
#[derive(Clone, Debug)]
pub struct HolGroup {
    modulus: PrimeModulus,
    dim: usize,
    level: u32,
    alpha_order: u64,
    alpha: FpMatrix,
    powers: Option<Vec<FpMatrix>>,
}

pub fn hol_group(p: PrimeModulus, m: usize) -> Result<HolGroup> {
    HolGroup::new(p, m)
}

impl HolGroup {
    /// Builds the group and checks that `α` has order exactly `p^n`.
    pub fn new(modulus: PrimeModulus, dim: usize) -> Result<Self> {
        let level = canonical_n(modulus, dim)?;
        let p = modulus.get();
        let alpha_order = modulus
            .checked_pow(level)
            .filter(|&q| q.checked_mul(p).is_some())
            .ok_or(Error::SizeCap { what: "p^(n+1)", value: u128::MAX, cap: u64::MAX.into() })?;
        let below = alpha_order / p;
        if !(below < dim as u64 && dim as u64 <= alpha_order) {
            return Err(Error::Internal(format!("level {level} does not bracket m = {dim}")));
        }

        let alpha = jordan_unipotent(dim, modulus)?;
        if !alpha.pow(alpha_order).is_identity() {
            return Err(Error::Internal(format!("A^{alpha_order} != I")));
        }
        if alpha.pow(below).is_identity() {
            return Err(Error::Internal(format!("A^{below} = I, so ord(α) < {alpha_order}")));
        }

        let cache_size = (dim as u64).saturating_mul(dim as u64).saturating_mul(alpha_order);
        let powers = (cache_size <= POWER_CACHE_LIMIT).then(|| {
            let mut out = Vec::with_capacity(alpha_order as usize);
            let mut current = FpMatrix::identity(dim, modulus).expect("dim >= 2");
            for _ in 0..alpha_order {
                let next = current.checked_mul(&alpha).expect("same shape");
                out.push(current);
                current = next;
            }
            out
        });

        Ok(Self { modulus, dim, level, alpha_order, alpha, powers })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    /// `m = dim V`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `n`, with `p^(n-1) < m <= p^n`.
    pub fn level(&self) -> u32 {
        self.level
    }

    /// `ord(α) = p^n`.
    pub fn alpha_order(&self) -> u64 {
        self.alpha_order
    }

    pub fn alpha(&self) -> &FpMatrix {
        &self.alpha
    }

    /// `m + n`, so that `|G| = p^(m+n)`.
    pub fn order_exponent(&self) -> u32 {
        self.dim as u32 + self.level
    }

    /// `p^(m+n)`, if it fits in a `u128`.
    pub fn group_order(&self) -> Option<u128> {
        u128::from(self.modulus.get()).checked_pow(self.order_exponent())
    }

    pub fn branch(&self) -> ExponentBranch {
        if (self.dim as u64) < self.alpha_order {
            ExponentBranch::BelowPower
        } else {
            ExponentBranch::AtPower
        }
    }

    /// `A^k` for `0 <= k < p^n`.
    pub fn alpha_power(&self, k: u64) -> Cow<'_, FpMatrix> {
        let k = k % self.alpha_order;
        match &self.powers {
            Some(table) => Cow::Borrowed(&table[k as usize]),
            None => Cow::Owned(self.alpha.pow(k)),
        }
    }

    pub fn identity(&self) -> HolElement {
        HolElement { k: 0, v: FpVector::zero(self.dim, self.modulus) }
    }

    /// `α^k · v` from raw coordinates, reduced into range.
    pub fn element(&self, k: u64, v: &[u64]) -> Result<HolElement> {
        if v.len() != self.dim {
            return Err(Error::Shape(format!("vector length {} in a group with m = {}", v.len(), self.dim)));
        }
        Ok(HolElement { k: k % self.alpha_order, v: FpVector::new(self.modulus, v) })
    }

    pub fn contains(&self, x: &HolElement) -> bool {
        x.k < self.alpha_order && x.v.len() == self.dim && x.v.modulus() == self.modulus
    }

    fn check(&self, x: &HolElement) -> Result<()> {
        if x.v.modulus() != self.modulus {
            return Err(Error::ModulusMismatch { left: self.modulus.get(), right: x.v.modulus().get() });
        }
        if x.v.len() != self.dim || x.k >= self.alpha_order {
            return Err(Error::Shape(format!(
                "element (k = {}, len {}) does not belong to a group with m = {}, ord(α) = {}",
                x.k,
                x.v.len(),
                self.dim,
                self.alpha_order
            )));
        }
        Ok(())
    }

    /// `(k1, v1)(k2, v2) = (k1 + k2, v1·A^k2 + v2)`.
    pub fn mul(&self, x: &HolElement, y: &HolElement) -> Result<HolElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    fn mul_unchecked(&self, x: &HolElement, y: &HolElement) -> HolElement {
        let k = (x.k + y.k) % self.alpha_order;
        let v = x.v.mul_matrix_unchecked(&self.alpha_power(y.k)).add_unchecked(&y.v);
        HolElement { k, v }
    }

    /// `x^e` by square-and-multiply.
    pub fn pow(&self, x: &HolElement, e: u64) -> Result<HolElement> {
        self.check(x)?;
        Ok(self.pow_unchecked(x, e))
    }

    fn pow_unchecked(&self, x: &HolElement, mut e: u64) -> HolElement {
        let mut acc = self.identity();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_unchecked(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_unchecked(&base, &base);
            }
        }
        acc
    }

    /// `(k, v)^-1 = (-k, -v·A^-k)`, with `A^-k` taken as `A^(p^n - k)`.
    pub fn inverse(&self, x: &HolElement) -> Result<HolElement> {
        self.check(x)?;
        let k = (self.alpha_order - x.k) % self.alpha_order;
        let v = x.v.mul_matrix_unchecked(&self.alpha_power(k)).neg();
        Ok(HolElement { k, v })
    }

    pub fn is_identity(&self, x: &HolElement) -> bool {
        x.k == 0 && x.v.is_zero()
    }

    /// Smallest `e >= 1` with `x^e = 1`.
    ///
    /// Every order is a power of p no larger than `p^(n+1)`, so it suffices to
    /// take successive p-th powers.
    pub fn element_order(&self, x: &HolElement) -> Result<u64> {
        self.check(x)?;
        self.order_unchecked(x)
    }

    fn order_unchecked(&self, x: &HolElement) -> Result<u64> {
        let p = self.modulus.get();
        let mut y = x.clone();
        let mut order = 1u64;
        for _ in 0..=self.level + 1 {
            if self.is_identity(&y) {
                return Ok(order);
            }
            y = self.pow_unchecked(&y, p);
            order *= p;
        }
        Err(Error::Internal(format!("element {x:?} has order beyond p^(n+1)")))
    }

    /// `p^n` if `m < p^n`, `p^(n+1)` if `m = p^n`.
    pub fn exponent_formula(&self) -> u64 {
        match self.branch() {
            ExponentBranch::BelowPower => self.alpha_order,
            ExponentBranch::AtPower => self.alpha_order * self.modulus.get(),
        }
    }

    /// Element number `index` in enumeration order: `k` is the fastest-moving
    /// coordinate, then the base-p digits of `v`.
    pub fn element_at(&self, index: u64) -> HolElement {
        let p = self.modulus.get();
        let k = index % self.alpha_order;
        let mut rest = index / self.alpha_order;
        let mut v = vec![0u64; self.dim];
        for slot in v.iter_mut() {
            *slot = rest % p;
            rest /= p;
        }
        HolElement { k, v: FpVector::from_raw(self.modulus, v) }
    }

    /// Visits every element once and tallies element orders.
    pub fn census(&self, cap: u64) -> Result<ExponentCensus> {
        let order = self
            .group_order()
            .filter(|&o| o <= u128::from(cap))
            .ok_or(Error::SizeCap {
                what: "group order",
                value: self.group_order().unwrap_or(u128::MAX),
                cap: cap.into(),
            })? as u64;

        let counts = (0..order)
            .into_par_iter()
            .try_fold(BTreeMap::new, |mut acc: BTreeMap<u64, u64>, index| {
                let o = self.order_unchecked(&self.element_at(index))?;
                *acc.entry(o).or_default() += 1;
                Ok::<_, Error>(acc)
            })
            .try_reduce(BTreeMap::new, |mut left, right| {
                for (o, c) in right {
                    *left.entry(o).or_default() += c;
                }
                Ok(left)
            })?;

        let exponent = counts.keys().fold(1u64, |acc, &o| acc.lcm(&o));
        let elements = counts.values().sum();
        Ok(ExponentCensus { exponent, elements, order_counts: counts })
    }

    /// The exponent as the lcm of all element orders.
    pub fn exponent_brute(&self, cap: u64) -> Result<u64> {
        Ok(self.census(cap)?.exponent)
    }

    /// Checks `(α e_1)^(p^n) = e_m` in the boundary case `m = p^n`.
    pub fn witness_check(&self) -> Result<bool> {
        if self.branch() != ExponentBranch::AtPower {
            return Err(Error::Precondition(format!(
                "witness needs m = p^n, got m = {} and p^n = {}",
                self.dim, self.alpha_order
            )));
        }
        let x = HolElement { k: 1, v: FpVector::basis(self.dim, self.modulus, 0) };
        let expected = HolElement { k: 0, v: FpVector::basis(self.dim, self.modulus, self.dim - 1) };
        Ok(self.pow_unchecked(&x, self.alpha_order) == expected)
    }

    /// `ε(k) = I + A^k + A^2k + ... + A^((p^n - 1)k)`.
    ///
    /// Cross-checked against `δ^(p^s)` where `k = p^s j`, `p ∤ j`, and
    /// `δ = I + A^j + ... + A^((p^n - 1)j)`; the two agree because the p-th power
    /// map is additive on the commutative algebra generated by `A`.
    pub fn epsilon_endomorphism(&self, k: u64) -> Result<FpMatrix> {
        if k >= self.alpha_order {
            return Err(Error::Domain(format!("k = {k} must be < p^n = {}", self.alpha_order)));
        }
        let epsilon = geometric_sum(&self.alpha_power(k), self.alpha_order)?;
        if k == 0 {
            return Ok(epsilon);
        }
        let p = self.modulus.get();
        let (mut j, mut p_s) = (k, 1u64);
        while j % p == 0 {
            j /= p;
            p_s *= p;
        }
        let delta = geometric_sum(&self.alpha_power(j), self.alpha_order)?;
        if delta.pow(p_s) != epsilon {
            return Err(Error::Internal(format!("ε({k}) differs from δ^{p_s} with j = {j}")));
        }
        Ok(epsilon)
    }
}

/// Result of exhaustively enumerating a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentCensus {
    pub exponent: u64,
    pub elements: u64,
    /// Number of elements of each order.
    pub order_counts: BTreeMap<u64, u64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn group(p: u64, m: usize) -> HolGroup {
        HolGroup::new(pm(p), m).unwrap()
    }

    #[test]
    fn canonical_level() {
        assert_eq!(canonical_n(pm(2), 2).unwrap(), 1);
        assert_eq!(canonical_n(pm(2), 3).unwrap(), 2);
        assert_eq!(canonical_n(pm(3), 4).unwrap(), 2);
        assert_eq!(canonical_n(pm(3), 9).unwrap(), 2);
        assert_eq!(canonical_n(pm(3), 10).unwrap(), 3);
        assert!(matches!(canonical_n(pm(3), 1), Err(Error::Domain(_))));
        assert!(matches!(HolGroup::new(pm(3), 0), Err(Error::Domain(_))));
    }

    #[test]
    fn construction() {
        let g = group(2, 2);
        assert_eq!((g.level(), g.alpha_order(), g.group_order()), (1, 2, Some(8)));
        let g = group(3, 2);
        assert_eq!((g.level(), g.alpha_order(), g.group_order()), (1, 3, Some(27)));
        let g = group(2, 4);
        assert_eq!((g.level(), g.alpha_order(), g.group_order()), (2, 4, Some(64)));
        // no power cache at this size, powers computed on demand
        let g = group(2_147_483_647, 2);
        assert!(g.powers.is_none());
        assert_eq!(g.exponent_formula(), 2_147_483_647);
    }

    #[test]
    fn multiplication_examples() {
        let g = group(2, 2);
        let x = g.element(1, &[1, 0]).unwrap();
        let y = g.element(0, &[0, 1]).unwrap();
        assert_eq!(g.mul(&g.identity(), &x).unwrap(), x);
        assert_eq!(g.mul(&x, &y).unwrap(), g.element(1, &[1, 1]).unwrap());
        assert_eq!(g.mul(&x, &x).unwrap(), g.element(0, &[0, 1]).unwrap());
        assert_eq!(g.pow(&x, 1).unwrap(), x);
        assert_eq!(g.pow(&x, 2).unwrap(), g.element(0, &[0, 1]).unwrap());
        assert_eq!(g.pow(&x, 4).unwrap(), g.identity());
        assert_eq!(g.pow(&x, 0).unwrap(), g.identity());
    }

    #[test]
    fn foreign_elements_are_rejected() {
        let g = group(2, 2);
        let h = group(3, 2);
        let x = h.element(1, &[1, 0]).unwrap();
        assert!(matches!(g.mul(&x, &g.identity()), Err(Error::ModulusMismatch { .. })));
        let long = HolElement::new(0, FpVector::zero(3, pm(2)));
        assert!(matches!(g.mul(&long, &g.identity()), Err(Error::Shape(_))));
        let wrapped = HolElement::new(2, FpVector::zero(2, pm(2)));
        assert!(matches!(g.element_order(&wrapped), Err(Error::Shape(_))));
        assert!(!g.contains(&wrapped));
        assert!(matches!(g.element(0, &[1]), Err(Error::Shape(_))));
    }

    #[test]
    fn order_examples() {
        let g = group(2, 2);
        assert_eq!(g.element_order(&g.identity()).unwrap(), 1);
        assert_eq!(g.element_order(&g.element(1, &[1, 0]).unwrap()).unwrap(), 4);
        let g = group(3, 2);
        assert_eq!(g.element_order(&g.element(1, &[0, 0]).unwrap()).unwrap(), 3);
    }

    #[test]
    fn exponent_examples() {
        assert_eq!(group(3, 2).exponent_formula(), 3);
        assert_eq!(group(2, 2).exponent_formula(), 4);
        assert_eq!(group(2, 3).exponent_formula(), 4);
        assert_eq!(group(2, 2).exponent_brute(DEFAULT_ENUMERATION_CAP).unwrap(), 4);
        assert_eq!(group(3, 2).exponent_brute(DEFAULT_ENUMERATION_CAP).unwrap(), 3);
        assert_eq!(group(2, 4).exponent_brute(DEFAULT_ENUMERATION_CAP).unwrap(), 8);
        assert!(matches!(group(2, 4).exponent_brute(63), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn census_of_the_dihedral_case() {
        // Hol(F_2^2, A) has order 8 and exponent 4: it is dihedral of order 8,
        // with one identity, five involutions and two elements of order 4.
        let census = group(2, 2).census(DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(census.elements, 8);
        assert_eq!(census.order_counts, BTreeMap::from([(1, 1), (2, 5), (4, 2)]));
    }

    #[test]
    fn enumeration_is_a_bijection() {
        let g = group(3, 2);
        let all: std::collections::HashSet<HolElement> = (0..27).map(|i| g.element_at(i)).collect();
        assert_eq!(all.len(), 27);
        assert!(all.iter().all(|x| g.contains(x)));
    }

    #[test]
    fn witness_examples() {
        assert!(group(2, 2).witness_check().unwrap());
        assert!(group(3, 3).witness_check().unwrap());
        assert!(group(2, 4).witness_check().unwrap());
        assert!(matches!(group(2, 3).witness_check(), Err(Error::Precondition(_))));
    }

    #[test]
    fn epsilon_examples() {
        let g = group(2, 2);
        assert!(g.epsilon_endomorphism(0).unwrap().is_zero());
        let e = g.epsilon_endomorphism(1).unwrap();
        assert_eq!(e.rows(), vec![vec![0, 1], vec![0, 0]]);
        let g = group(3, 2);
        assert!(g.epsilon_endomorphism(1).unwrap().is_zero());
        assert!(matches!(g.epsilon_endomorphism(3), Err(Error::Domain(_))));
        // k = 2 in hol(2, 3): s = 1, j = 1
        let g = group(2, 3);
        assert!(g.epsilon_endomorphism(2).is_ok());
    }

    #[test]
    fn inverses() {
        let g = group(3, 3);
        for index in 0..g.group_order().unwrap() as u64 {
            let x = g.element_at(index);
            let inv = g.inverse(&x).unwrap();
            assert!(g.is_identity(&g.mul(&x, &inv).unwrap()));
            assert!(g.is_identity(&g.mul(&inv, &x).unwrap()));
        }
    }

    #[test]
    fn uncached_powers_agree_with_cache() {
        let cached = group(5, 3);
        let mut uncached = cached.clone();
        uncached.powers = None;
        for index in (0..cached.group_order().unwrap() as u64).step_by(37) {
            let x = cached.element_at(index);
            let y = cached.element_at((index * 7 + 3) % 625);
            assert_eq!(cached.mul(&x, &y).unwrap(), uncached.mul(&x, &y).unwrap());
        }
    }
}
