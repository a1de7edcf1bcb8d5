//! Prime tables and counts of integers whose prime factors lie in a window.
//!
//! All counts follow the summation conditions literally: `l` runs over
//! `1 < l < X` (strict), a prime `p` is "small" when `p ≤ Z` and "in the band"
//! when `Z < p ≤ Y`. Real arguments are accepted; integer comparisons use
//! `floor` for `Y, Z` and `ceil(X) − 1` for the largest admissible `l`.

use rayon::prelude::*;
use serde::Serialize;

use crate::dde::Buchstab;
use crate::error::{Error, Result};

/// Largest table [`PrimeTable::new`] will build.
pub const PRIME_LIMIT_GUARD: u64 = 1_000_000_000;

/// Largest `X` the counting functions will enumerate.
pub const COUNT_LIMIT_GUARD: u64 = 100_000_000;

const SEGMENT: u64 = 1 << 18;

/// All primes up to `limit`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

fn simple_sieve(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn sieve_segment(base: &[u64], lo: u64, hi: u64) -> Vec<u64> {
    // primes in [lo, hi)
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let mut start = lo.div_ceil(p) * p;
        if start < p * p {
            start = p * p;
        }
        let mut j = start;
        while j < hi {
            composite[(j - lo) as usize] = true;
            j += p;
        }
    }
    (0..len)
        .filter(|&i| !composite[i])
        .map(|i| lo + i as u64)
        .filter(|&n| n >= 2)
        .collect()
}

impl PrimeTable {
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_guard(limit, PRIME_LIMIT_GUARD)
    }

    /// Segmented sieve; segments are sieved in parallel and concatenated in order.
    pub fn with_guard(limit: u64, guard: u64) -> Result<Self> {
        if limit > guard {
            return Err(Error::LimitExceeded { limit, guard });
        }
        if limit < 2 {
            return Err(Error::Domain(format!("prime table limit {limit} < 2")));
        }
        let root = (limit as f64).sqrt() as u64 + 1;
        let base = simple_sieve(root);
        let starts: Vec<u64> = (0..=limit / SEGMENT).map(|k| k * SEGMENT).collect();
        let primes = starts
            .par_iter()
            .map(|&lo| sieve_segment(&base, lo, (lo + SEGMENT).min(limit + 1)))
            .collect::<Vec<_>>()
            .concat();
        Ok(PrimeTable { limit, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Primes `≤ x`.
    pub fn up_to(&self, x: u64) -> &[u64] {
        &self.primes[..self.primes.partition_point(|&p| p <= x)]
    }

    /// `π(x)` for `x ≤ limit`.
    pub fn pi(&self, x: u64) -> usize {
        self.up_to(x).len()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }

    fn require(&self, need: u64) -> Result<()> {
        if self.limit < need {
            return Err(Error::TableTooSmall { have: self.limit, need });
        }
        Ok(())
    }
}

pub fn primes_up_to(limit: u64) -> Result<PrimeTable> {
    PrimeTable::new(limit)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `X, Y, Z` of a band count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SieveWindow {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Largest `l` with `l < x`, or 0 when there is none above 1.
fn largest_below(x: f64) -> Result<u64> {
    if x.is_nan() {
        return Err(Error::Domain("X is NaN".into()));
    }
    if x <= 2.0 {
        return Ok(0);
    }
    let n = x.ceil() as u64 - 1;
    if n > COUNT_LIMIT_GUARD {
        return Err(Error::LimitExceeded { limit: n, guard: COUNT_LIMIT_GUARD });
    }
    Ok(n)
}

fn floor_bound(v: f64, name: &str) -> Result<u64> {
    if v.is_nan() {
        return Err(Error::Domain(format!("{name} is NaN")));
    }
    Ok(if v <= 0.0 { 0 } else { v.floor().min(u64::MAX as f64) as u64 })
}

/// `keep[l]` is true when no prime `≤ z` divides `l`.
fn rough_flags(n: u64, z: u64, table: &PrimeTable) -> Result<Vec<bool>> {
    let zz = z.min(n);
    table.require(zz)?;
    let mut keep = vec![true; n as usize + 1];
    for &p in table.up_to(zz) {
        let mut j = p;
        while j <= n {
            keep[j as usize] = false;
            j += p;
        }
    }
    Ok(keep)
}

/// `Φ(X, Z)`: integers `1 < l < X` with every prime factor `> Z`.
pub fn phi_rough(x: f64, z: f64, table: &PrimeTable) -> Result<u64> {
    let n = largest_below(x)?;
    if n < 2 {
        return Ok(0);
    }
    let keep = rough_flags(n, floor_bound(z, "Z")?, table)?;
    Ok(keep[2..].iter().filter(|&&k| k).count() as u64)
}

/// Members of the band count, ascending: `1 < l < X`, every prime factor in `(Z, Y]`.
pub fn band_members(x: f64, y: f64, z: f64, table: &PrimeTable) -> Result<Vec<u64>> {
    let n = largest_below(x)?;
    let y = floor_bound(y, "Y")?;
    let z = floor_bound(z, "Z")?;
    if n < 2 || z >= y {
        return Ok(Vec::new());
    }
    let keep = rough_flags(n, z, table)?;
    if y >= n {
        return Ok((2..=n).filter(|&l| keep[l as usize]).collect());
    }
    table.require(y)?;
    // strip band primes; what remains > 1 has a factor above Y
    let mut rest: Vec<u64> = (0..=n).collect();
    for &p in table.up_to(y) {
        if p <= z {
            continue;
        }
        let mut j = p;
        while j <= n {
            let r = &mut rest[j as usize];
            while *r % p == 0 {
                *r /= p;
            }
            j += p;
        }
    }
    Ok((2..=n).filter(|&l| keep[l as usize] && rest[l as usize] == 1).collect())
}

/// `Φ(X, Y, Z)`.
pub fn phi_band(x: f64, y: f64, z: f64, table: &PrimeTable) -> Result<u64> {
    Ok(band_members(x, y, z, table)?.len() as u64)
}

/// `Φ'(X, Y, Z) = Σ log(X/l)` over the band members.
pub fn phi_band_log(x: f64, y: f64, z: f64, table: &PrimeTable) -> Result<f64> {
    Ok(band_members(x, y, z, table)?.iter().map(|&l| (x / l as f64).ln()).sum())
}

/// Main terms `ω(log X/log Z)·X/log Z − Z/log Z` of `Φ(X, Z)`.
pub fn phi_rough_asymptotic(x: f64, z: f64, omega: &Buchstab) -> Result<f64> {
    if !(z >= 2.0 && x >= z) {
        return Err(Error::Domain(format!("need X ≥ Z ≥ 2, got X = {x}, Z = {z}")));
    }
    let lz = z.ln();
    let u = x.ln() / lz;
    if u < 1.0 {
        return Err(Error::Domain(format!("log X/log Z = {u} < 1")));
    }
    Ok(omega.eval(u)? * x / lz - z / lz)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SievebReport {
    pub window: SieveWindow,
    /// `Φ'(X, Y, Z)`.
    pub exact: f64,
    /// `X/(2 log Z) − X/log Y`.
    pub main: f64,
}

/// Exact `Φ'` next to the main terms of its lower bound. Informational: the
/// bound carries an unquantified error term, so nothing is asserted here.
pub fn sieveb_bound_report(x: f64, y: f64, z: f64, table: &PrimeTable) -> Result<SievebReport> {
    let exact = phi_band_log(x, y, z, table)?;
    let main = x / (2.0 * z.ln()) - x / y.ln();
    Ok(SievebReport { window: SieveWindow { x, y, z }, exact, main })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChebyshevReport {
    pub x: f64,
    /// `π(x)·ln x − θ(x)`.
    pub lhs: f64,
    /// `x/ln x`.
    pub rhs: f64,
    pub ratio: f64,
}

pub fn chebyshev_report(x: f64, table: &PrimeTable) -> Result<ChebyshevReport> {
    if !(x >= 10.0) {
        return Err(Error::Domain(format!("x = {x} < 10")));
    }
    let n = x.floor() as u64;
    table.require(n)?;
    let primes = table.up_to(n);
    let theta: f64 = crate::sum::pairwise_sum(&primes.iter().map(|&p| (p as f64).ln()).collect::<Vec<_>>());
    let lhs = primes.len() as f64 * x.ln() - theta;
    let rhs = x / x.ln();
    Ok(ChebyshevReport { x, lhs, rhs, ratio: lhs / rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn table(n: u64) -> PrimeTable {
        PrimeTable::new(n).unwrap()
    }

    #[test]
    fn small_tables() {
        assert_eq!(table(10).primes(), &[2, 3, 5, 7]);
        assert_eq!(table(2).primes(), &[2]);
        assert!(matches!(PrimeTable::new(1), Err(Error::Domain(_))));
        assert!(matches!(
            PrimeTable::new(PRIME_LIMIT_GUARD + 1),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn pi_of_a_million() {
        let t = table(1_000_000);
        assert_eq!(t.len(), 78_498);
        assert_eq!(t.pi(1000), 168);
        assert_eq!(t.pi(10_000), 1229);
    }

    #[test]
    fn table_matches_trial_division_and_miller_rabin() {
        let t = table(20_000);
        let trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
        let expected: Vec<u64> = (0..=20_000).filter(|&n| trial(n)).collect();
        assert_eq!(t.primes(), expected.as_slice());
        for n in 0..=20_000u64 {
            assert_eq!(is_prime(n), trial(n), "{n}");
        }
        // segment boundaries
        let big = table(3 * SEGMENT + 17);
        for w in big.primes().windows(2) {
            assert!(w[0] < w[1]);
        }
        assert!(big.primes().iter().all(|&p| is_prime(p)));
        assert_eq!(big.len(), (2..=3 * SEGMENT + 17).filter(|&n| is_prime(n)).count());
    }

    #[test]
    fn miller_rabin_large() {
        assert!(is_prime(1_000_000_007));
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2, 3, 5, 7
        assert!(!is_prime(1_000_000_007 * 3));
    }

    #[test]
    fn rough_examples() {
        let t = table(100);
        assert_eq!(phi_rough(20.0, 3.0, &t).unwrap(), 6);
        assert_eq!(phi_rough(30.0, 1.0, &t).unwrap(), 28);
        assert_eq!(phi_rough(30.0, 29.0, &t).unwrap(), 0);
        assert_eq!(phi_rough(30.0, 40.0, &t).unwrap(), 0);
        assert_eq!(phi_rough(2.0, 1.0, &t).unwrap(), 0);
        // strict l < X at integer X
        assert_eq!(phi_rough(19.0, 3.0, &t).unwrap(), 5);
        assert_eq!(phi_rough(19.5, 3.0, &t).unwrap(), 6);
    }

    #[test]
    fn band_examples() {
        let t = table(100);
        assert_eq!(band_members(30.0, 10.0, 3.0, &t).unwrap(), vec![5, 7, 25]);
        assert_eq!(phi_band(30.0, 10.0, 10.0, &t).unwrap(), 0);
        // Y < t ≤ YZ: Φ(t, Y, Z) = Φ(t, Z) − Φ(t, Y)
        assert_eq!(phi_band(18.0, 6.0, 3.0, &t).unwrap(), 1);
        assert_eq!(phi_rough(18.0, 3.0, &t).unwrap() - phi_rough(18.0, 6.0, &t).unwrap(), 1);
        assert_eq!(phi_band(12.0, 4.5, 3.0, &t).unwrap(), 0);
        assert_eq!(phi_rough(12.0, 3.0, &t).unwrap() - phi_rough(12.0, 4.5, &t).unwrap(), 0);
    }

    #[test]
    fn band_log_examples() {
        let t = table(100);
        let want = (30.0f64 / 5.0).ln() + (30.0f64 / 7.0).ln() + (30.0f64 / 25.0).ln();
        assert_abs_diff_eq!(phi_band_log(30.0, 10.0, 3.0, &t).unwrap(), want, epsilon = 1e-14);
        assert_abs_diff_eq!(want, 3.4294, epsilon = 1e-4);
        assert_eq!(phi_band_log(30.0, 10.0, 10.0, &t).unwrap(), 0.0);
    }

    #[test]
    fn table_too_small() {
        let t = table(10);
        assert!(matches!(phi_rough(100.0, 50.0, &t), Err(Error::TableTooSmall { .. })));
        assert!(matches!(phi_band(100.0, 50.0, 3.0, &t), Err(Error::TableTooSmall { .. })));
        assert!(phi_rough(100.0, 7.0, &t).is_ok());
    }

    #[test]
    fn asymptotic_at_u_two() {
        let w = Buchstab::default();
        let z: f64 = 100.0;
        let x = z * z;
        let want = x / (2.0 * z.ln()) - z / z.ln();
        assert_abs_diff_eq!(phi_rough_asymptotic(x, z, &w).unwrap(), want, epsilon = 1e-9);
        assert!(phi_rough_asymptotic(10.0, 100.0, &w).is_err());
        assert!(phi_rough_asymptotic(10.0, 1.5, &w).is_err());
    }

    #[test]
    fn asymptotic_against_exact() {
        let w = Buchstab::default();
        let t = table(1_000_000);
        let rel = |x: f64, z: f64| {
            let exact = phi_rough(x, z, &t).unwrap() as f64;
            (phi_rough_asymptotic(x, z, &w).unwrap() - exact).abs() / exact
        };
        assert!(rel(1e6, 1e2) < 0.05);
        assert!(rel(1e4, 10.0) < 0.10);
        // fixed u = 2: error shrinks as Z grows
        assert!(rel(1e6, 1e3) < rel(1e4, 1e2));
    }

    #[test]
    fn sieveb_reports() {
        let t = table(100);
        let r = sieveb_bound_report(30.0, 10.0, 3.0, &t).unwrap();
        assert_abs_diff_eq!(r.exact, 3.4294, epsilon = 1e-4);
        assert_abs_diff_eq!(r.main, 30.0 / (2.0 * 3f64.ln()) - 30.0 / 10f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.main, 0.62, epsilon = 0.01);
        assert!(r.exact > r.main);

        let y: f64 = 1e3;
        let z = 10f64.powf(3.0 * 3.0 / 8.0);
        let t = table(20_000);
        let r = sieveb_bound_report(y * z, y, z, &t).unwrap();
        assert!(r.main > 0.0);

        let r = sieveb_bound_report(10.0, 10.0, 3.0, &table(100)).unwrap();
        assert_abs_diff_eq!(r.exact, (10.0f64 / 5.0).ln() + (10.0f64 / 7.0).ln(), epsilon = 1e-14);
    }

    #[test]
    fn chebyshev_reports() {
        let t = table(1_000_000);
        let r = chebyshev_report(10.0, &t).unwrap();
        assert_abs_diff_eq!(r.lhs, 4.0 * 10f64.ln() - 210f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.lhs, 3.863, epsilon = 1e-3);
        let r = chebyshev_report(1e6, &t).unwrap();
        assert!((0.8..=1.2).contains(&r.ratio), "{}", r.ratio);
        // second-order term 2/ln x is still ~22% at 10⁴
        let r = chebyshev_report(1e4, &t).unwrap();
        assert_abs_diff_eq!(r.ratio, 1.311_107_552_4, epsilon = 1e-9);
        assert!(chebyshev_report(5.0, &t).is_err());
        assert!(matches!(chebyshev_report(1e7, &t), Err(Error::TableTooSmall { .. })));
    }
}
