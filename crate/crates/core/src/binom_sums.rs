//! Partial column sums of Pascal's triangle mod p.
//!
//! `S(N, i) = C(i, i) + C(i + 1, i) + ... + C(N - 1, i)` for `N = p^n`. Every
//! column with `i < N - 1` sums to 0 mod p, and the last one is the single
//! term `C(N - 1, N - 1) = 1`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modp::{binom_lucas, PrimeModulus, Residue};

/// Default bound on `p^n` for column sums.
pub const DEFAULT_SUM_CAP: u64 = 10_000;

/// Column sums for one `(p, n)`, with `p^n` validated against a cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColumnSums {
    modulus: PrimeModulus,
    power: u32,
    size: u64,
}

impl ColumnSums {
    pub fn new(modulus: PrimeModulus, power: u32, cap: u64) -> Result<Self> {
        if power == 0 {
            return Err(Error::Domain("column sums need n >= 1".into()));
        }
        let size = u128::from(modulus.get()).saturating_pow(power);
        if size > u128::from(cap) {
            return Err(Error::SizeCap { what: "p^n", value: size, cap: cap.into() });
        }
        Ok(Self { modulus, power, size: size as u64 })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    /// `p^n`.
    pub fn size(&self) -> u64 {
        self.size
    }

    fn check_index(&self, i: u64) -> Result<()> {
        if i >= self.size {
            return Err(Error::IndexOutOfRange { index: i, bound: self.size });
        }
        Ok(())
    }

    /// `sum_{k=i}^{p^n - 1} C(k, i) mod p`, term by term via Lucas.
    pub fn direct(&self, i: u64) -> Result<Residue> {
        self.check_index(i)?;
        let p = self.modulus;
        Ok((i..self.size).fold(p.zero(), |acc, k| acc + binom_lucas(k, i, p)))
    }

    /// The same sum through the hockey-stick identity: `C(p^n, i + 1) mod p`.
    pub fn hockey_stick(&self, i: u64) -> Result<Residue> {
        self.check_index(i)?;
        Ok(binom_lucas(self.size, i + 1, self.modulus))
    }

    /// All residues `S(p^n, 0..p^n)`, evaluated column-parallel.
    pub fn report(&self) -> SumReport {
        let residues: Vec<Residue> = (0..self.size)
            .into_par_iter()
            .map(|i| self.direct(i).expect("index in range"))
            .collect();
        let verdict = verdict(&residues);
        SumReport { modulus: self.modulus, power: self.power, residues, verdict }
    }
}

/// True iff every residue but the last is 0 and the last is 1.
fn verdict(residues: &[Residue]) -> bool {
    match residues.split_last() {
        Some((last, rest)) => last.value() == 1 && rest.iter().all(|r| r.is_zero()),
        None => false,
    }
}

/// The column sums `S(p^n, i) mod p` for `i = 0..p^n`, plus the congruence verdict.
///
/// A `false` verdict cannot happen for a correct implementation; it is surfaced
/// rather than asserted so that callers can report it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumReport {
    modulus: PrimeModulus,
    power: u32,
    residues: Vec<Residue>,
    verdict: bool,
}

impl SumReport {
    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn residues(&self) -> &[Residue] {
        &self.residues
    }

    pub fn verdict(&self) -> bool {
        self.verdict
    }
}

pub fn column_sum(p: PrimeModulus, n: u32, i: u64) -> Result<Residue> {
    ColumnSums::new(p, n, DEFAULT_SUM_CAP)?.direct(i)
}

pub fn column_sum_hockeystick(p: PrimeModulus, n: u32, i: u64) -> Result<Residue> {
    ColumnSums::new(p, n, DEFAULT_SUM_CAP)?.hockey_stick(i)
}

pub fn sum_report(p: PrimeModulus, n: u32) -> Result<SumReport> {
    Ok(ColumnSums::new(p, n, DEFAULT_SUM_CAP)?.report())
}
