//! Acceptance suite: one PASS/FAIL line per criterion, exact comparisons,
//! wall-clock budgets checked per criterion. Exits non-zero on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use pascal_modp::binom_sums::{sum_report, ColumnSums, DEFAULT_SUM_CAP};
use pascal_modp::fpmatrix::{
    geometric_sum, jordan_unipotent, poly_pow_linear, superdiagonal_coeffs, FpVector,
};
use pascal_modp::holomorph::{canonical_n, ExponentCensus, HolElement, HolGroup, DEFAULT_ENUMERATION_CAP};
use pascal_modp::modp::{
    binom_lucas, binom_pascal, kummer_carries, legendre_valuation, primes_up_to, PascalRows, PrimeModulus,
};

type Check = Result<String, String>;

fn pm(p: u64) -> PrimeModulus {
    PrimeModulus::new(p).expect("prime")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn prime_powers(p: u64, bound: u64) -> Vec<(u32, u64)> {
    (1u32..)
        .map(|n| (n, p.checked_pow(n)))
        .take_while(|(_, q)| matches!(q, Some(q) if *q <= bound))
        .map(|(n, q)| (n, q.unwrap()))
        .collect()
}

const SMALL_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn column_sums() -> Check {
    let mut reports = 0;
    for p in SMALL_PRIMES {
        for (n, q) in prime_powers(p, DEFAULT_SUM_CAP) {
            let sums = ColumnSums::new(pm(p), n, DEFAULT_SUM_CAP).map_err(|e| e.to_string())?;
            let report = sums.report();
            ensure(report.residues().len() as u64 == q, || format!("p={p} n={n}: wrong length"))?;
            for (i, r) in report.residues().iter().enumerate() {
                let expected = u64::from(i as u64 == q - 1);
                ensure(r.value() == expected, || format!("S({q},{i}) = {} mod {p}", r.value()))?;
                let hs = sums.hockey_stick(i as u64).map_err(|e| e.to_string())?;
                ensure(hs == *r, || format!("p={p} n={n} i={i}: hockey-stick {hs:?} vs direct {r:?}"))?;
            }
            ensure(report.verdict(), || format!("p={p} n={n}: verdict false"))?;
            reports += 1;
        }
    }
    Ok(format!("{reports} reports, all entries exact, oracles agree"))
}

fn geometric_sums_vanish() -> Check {
    let mut cases = 0;
    for p in primes_up_to(7) {
        for (n, q) in prime_powers(p, 128) {
            for m in 1..q as usize {
                let a = jordan_unipotent(m, pm(p)).map_err(|e| e.to_string())?;
                let sum = geometric_sum(&a, q).map_err(|e| e.to_string())?;
                ensure(sum.is_zero(), || format!("p={p} n={n} m={m}: I + A + ... + A^(q-1) != 0"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (p, n, m) cases"))
}

fn polynomial_identity() -> Check {
    let mut cases = 0;
    for p in SMALL_PRIMES {
        for (n, q) in prime_powers(p, 256) {
            let poly = poly_pow_linear(pm(p), q - 1);
            ensure(poly.values() == vec![1u64; q as usize].as_slice(), || {
                format!("p={p} n={n}: (X-1)^(q-1) = {poly:?}")
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (p, n) cases"))
}

fn superdiagonal_bridge() -> Check {
    let mut cases = 0;
    for p in primes_up_to(128) {
        for (n, q) in prime_powers(p, 128) {
            let m = q as usize - 1;
            if m == 0 {
                continue;
            }
            let a = jordan_unipotent(m, pm(p)).map_err(|e| e.to_string())?;
            let coeffs = superdiagonal_coeffs(&geometric_sum(&a, q).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let report = sum_report(pm(p), n).map_err(|e| e.to_string())?;
            ensure(coeffs[..] == report.residues()[..m], || format!("p={p} n={n}: coefficients differ"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (p, n) cases with m = p^n - 1"))
}

/// Every `(p, m)` with `m >= 2` and `p^(m+n) <= 2^20`.
fn enumerable_groups() -> Vec<HolGroup> {
    let mut out = Vec::new();
    for p in primes_up_to(DEFAULT_ENUMERATION_CAP) {
        if p.pow(3) > DEFAULT_ENUMERATION_CAP {
            break;
        }
        for m in 2usize.. {
            let n = canonical_n(pm(p), m).unwrap();
            if u128::from(p).pow(m as u32 + n) > u128::from(DEFAULT_ENUMERATION_CAP) {
                break;
            }
            out.push(HolGroup::new(pm(p), m).unwrap());
        }
    }
    out
}

const EXPONENT_TABLE: [(u64, usize, u64); 10] = [
    (2, 2, 4),
    (3, 2, 3),
    (5, 2, 5),
    (7, 2, 7),
    (2, 3, 4),
    (2, 4, 8),
    (3, 3, 9),
    (3, 4, 9),
    (2, 5, 8),
    (5, 5, 25),
];

fn exponent_table(groups: &[HolGroup], censuses: &mut Vec<ExponentCensus>) -> Check {
    for g in groups {
        let census = g.census(DEFAULT_ENUMERATION_CAP).map_err(|e| e.to_string())?;
        let (p, m) = (g.modulus().get(), g.dim());
        ensure(census.exponent == g.exponent_formula(), || {
            format!("p={p} m={m}: enumerated exponent {} vs closed form {}", census.exponent, g.exponent_formula())
        })?;
        censuses.push(census);
    }
    for (p, m, expected) in EXPONENT_TABLE {
        let idx = groups
            .iter()
            .position(|g| g.modulus().get() == p && g.dim() == m)
            .ok_or_else(|| format!("group ({p}, {m}) missing from the sweep"))?;
        ensure(censuses[idx].exponent == expected, || {
            format!("({p}, {m}): exponent {} expected {expected}", censuses[idx].exponent)
        })?;
    }
    // m = 2: exponent p for odd p, 4 for p = 2
    for (g, c) in groups.iter().zip(censuses.iter()).filter(|(g, _)| g.dim() == 2) {
        let p = g.modulus().get();
        let expected = if p == 2 { 4 } else { p };
        ensure(c.exponent == expected, || format!("m=2, p={p}: exponent {}", c.exponent))?;
    }
    let boundary = groups.iter().filter(|g| g.dim() as u64 == g.alpha_order()).count();
    Ok(format!("{} groups ({} with m = p^n), largest prime {}", groups.len(), boundary, groups.last().unwrap().modulus()))
}

fn order_claims(groups: &[HolGroup], censuses: &[ExponentCensus]) -> Check {
    ensure(groups.len() == censuses.len(), || "census missing (criterion 5 failed early)".into())?;
    for (g, c) in groups.iter().zip(censuses) {
        let (p, m) = (g.modulus().get(), g.dim());
        ensure(Some(u128::from(c.elements)) == g.group_order(), || {
            format!("p={p} m={m}: enumerated {} elements, expected p^{}", c.elements, g.order_exponent())
        })?;
        let alpha = g.element(1, &vec![0; m]).unwrap();
        let order = g.element_order(&alpha).map_err(|e| e.to_string())?;
        ensure(order == g.alpha_order(), || format!("p={p} m={m}: ord(α) = {order}"))?;
    }
    Ok(format!("{} groups", groups.len()))
}

fn witnesses() -> Check {
    for (p, m) in [(2u64, 2usize), (2, 4), (3, 3), (2, 8), (5, 5)] {
        let g = HolGroup::new(pm(p), m).map_err(|e| e.to_string())?;
        ensure(g.witness_check().map_err(|e| e.to_string())?, || format!("({p}, {m}): witness failed"))?;
    }
    Ok("5 boundary groups".into())
}

fn oracle_grid() -> Check {
    let mut entries = 0u64;
    for p in SMALL_PRIMES {
        let p = pm(p);
        for (n, row) in PascalRows::new(p).take(501).enumerate() {
            let n = n as u64;
            for (k, expected) in row.into_iter().enumerate() {
                let k = k as u64;
                let lucas = binom_lucas(n, k, p);
                ensure(lucas == expected, || format!("C({n},{k}) mod {p}: lucas {lucas:?} vs pascal {expected:?}"))?;
                let carries = kummer_carries(k, n - k, p);
                let legendre = legendre_valuation(n, k, p).map_err(|e| e.to_string())?;
                ensure(carries == legendre, || format!("v_{p}(C({n},{k})): carries {carries} vs legendre {legendre}"))?;
                entries += 1;
            }
        }
        // the capped single-value oracle on a diagonal slice of the same grid
        for n in (0..=500u64).step_by(7) {
            for k in (0..=n).step_by(13) {
                ensure(binom_pascal(n, k, p).unwrap() == binom_lucas(n, k, p), || format!("binom_pascal({n},{k},{p})"))?;
            }
        }
    }
    Ok(format!("{entries} grid entries"))
}

fn random_element(g: &HolGroup, rng: &mut StdRng) -> HolElement {
    let p = g.modulus().get();
    let v: Vec<u64> = (0..g.dim()).map(|_| rng.gen_range(0..p)).collect();
    g.element(rng.gen_range(0..g.alpha_order()), &v).unwrap()
}

fn group_axioms(groups: &[HolGroup]) -> Check {
    const TRIPLES: usize = 1000;
    let mut rng = StdRng::seed_from_u64(0x5eed0fa11);
    for g in groups {
        let id = g.identity();
        for _ in 0..TRIPLES {
            let (x, y, z) = (random_element(g, &mut rng), random_element(g, &mut rng), random_element(g, &mut rng));
            let lhs = g.mul(&g.mul(&x, &y).unwrap(), &z).unwrap();
            let rhs = g.mul(&x, &g.mul(&y, &z).unwrap()).unwrap();
            ensure(lhs == rhs, || format!("associativity fails in ({}, {})", g.modulus(), g.dim()))?;
            ensure(g.mul(&x, &id).unwrap() == x && g.mul(&id, &x).unwrap() == x, || "identity".into())?;
            let inv = g.inverse(&x).unwrap();
            ensure(g.is_identity(&g.mul(&x, &inv).unwrap()) && g.is_identity(&g.mul(&inv, &x).unwrap()), || {
                format!("inverse fails for {x:?}")
            })?;
        }
    }
    Ok(format!("{} groups x {TRIPLES} triples", groups.len()))
}

fn power_identity() -> Check {
    let mut checked = 0;
    for (p, m) in [(2u64, 3usize), (3, 2)] {
        let g = HolGroup::new(pm(p), m).map_err(|e| e.to_string())?;
        let q = g.alpha_order();
        let epsilons: Vec<_> = (0..q).map(|k| g.epsilon_endomorphism(k)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        for index in 0..g.group_order().unwrap() as u64 {
            let x = g.element_at(index);
            let lhs = g.pow(&x, q).unwrap();
            let rhs = HolElement::new(0, x.v().mul_matrix(&epsilons[x.k() as usize]).unwrap());
            ensure(lhs == rhs, || format!("({p}, {m}): x = {x:?}, x^q = {lhs:?}, (0, v ε) = {rhs:?}"))?;
            checked += 1;
        }
        // ε(0) = 0 and a zero vector sanity anchor
        ensure(epsilons[0].is_zero(), || "ε(0) != 0".into())?;
        ensure(FpVector::zero(m, pm(p)).mul_matrix(&epsilons[1]).unwrap().is_zero(), || "linear map".into())?;
    }
    Ok(format!("{checked} elements"))
}

struct Runner {
    failures: usize,
}

impl Runner {
    fn run(&mut self, id: u32, name: &str, budget: Option<Duration>, check: impl FnOnce() -> Check) {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let over_budget = budget.is_some_and(|b| elapsed > b);
        let passed = result.is_ok() && !over_budget;
        if !passed {
            self.failures += 1;
        }
        let detail = match (&result, over_budget) {
            (Err(e), _) => e.clone(),
            (Ok(_), true) => format!("over budget {:?}", budget.unwrap()),
            (Ok(d), false) => d.clone(),
        };
        let budget = budget.map_or_else(|| "exact".to_string(), |b| format!("< {:?}", b));
        println!(
            "{} criterion {id:>2}: {name} [{detail}] ({:.2?}, {budget})",
            if passed { "PASS" } else { "FAIL" },
            elapsed
        );
    }
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let mut runner = Runner { failures: 0 };

    runner.run(1, "column sums vanish mod p except the last, both oracles agree", Some(secs(10)), column_sums);
    runner.run(2, "I + A + ... + A^(p^n - 1) = 0 for m < p^n", Some(secs(10)), geometric_sums_vanish);
    runner.run(3, "(X - 1)^(p^n - 1) is all ones", Some(secs(1)), polynomial_identity);
    runner.run(4, "superdiagonal coefficients equal the column sums", Some(secs(5)), superdiagonal_bridge);

    let groups = enumerable_groups();
    let mut censuses = Vec::new();
    runner.run(5, "exponent by enumeration equals the closed form", Some(secs(60)), || {
        exponent_table(&groups, &mut censuses)
    });
    runner.run(6, "|G| = p^(m+n) and ord(α) = p^n", None, || order_claims(&groups, &censuses));
    runner.run(7, "witness (α e_1)^(p^n) = e_m at m = p^n", None, witnesses);
    runner.run(8, "Lucas = Pascal and carries = Legendre on 0 <= k <= n <= 500", Some(secs(30)), oracle_grid);
    runner.run(9, "group axioms on random triples", None, || group_axioms(&groups));
    runner.run(10, "x^(p^n) = (0, v ε(k)) for every element", None, power_identity);

    if runner.failures == 0 {
        println!("acceptance: all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", runner.failures);
        ExitCode::FAILURE
    }
}
