//! Hecke-eigenvalue datasets: TSV ingest/export, Sato–Tate synthesis and the
//! statistics computed over primes up to `X`.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dde::{ramanujan_prime_bound, SigmaConstants};
use crate::error::{Error, Result};
use crate::hecke::{
    is_ramanujan, lambda_prime_power, lift_coefficients, nine_tenths_statistic, sym_coefficient_prime_power, u_closed,
    Lift, LocalPrimeData, UnitComplex,
};
use crate::multfunc::{gcd, multiplicative, ArithmeticSequence};
use crate::numfmt::format_sig;
use crate::sieve::{is_prime, PrimeTable};
use crate::sum::{pairwise_mean, pairwise_sum};

/// Tolerance on `|χ| = 1` and `λ = χ·conj(λ)` for ingested rows.
pub const INGEST_TOL: f64 = 1e-6;

pub const TSV_HEADER: &str = "p\tlambda_re\tlambda_im\tchi_re\tchi_im";

/// `35²`: every non-Ramanujan prime has `U(p)` above it.
pub const U_THRESHOLD: f64 = 1225.0;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenDataset {
    pub level: u64,
    pub t_phi: f64,
    pub records: Vec<LocalPrimeData>,
    pub source: String,
}

impl EigenDataset {
    /// Checks that every `p` is prime, coprime to the level and strictly ascending.
    /// Error line numbers are record indices counted from 1.
    pub fn new(level: u64, t_phi: f64, records: Vec<LocalPrimeData>, source: impl Into<String>) -> Result<Self> {
        if level == 0 {
            return Err(Error::Validation { line: 0, msg: "level must be positive".into() });
        }
        if !t_phi.is_finite() {
            return Err(Error::Validation { line: 0, msg: "t_phi must be finite".into() });
        }
        for (i, r) in records.iter().enumerate() {
            check_prime(r.p, level, i + 1)?;
            if i > 0 && records[i - 1].p >= r.p {
                return Err(Error::Order { line: i + 1 });
            }
        }
        Ok(EigenDataset { level, t_phi, records, source: source.into() })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, p: u64) -> Option<&LocalPrimeData> {
        self.records.binary_search_by_key(&p, |r| r.p).ok().map(|i| &self.records[i])
    }

    /// Records with `p ≤ x`, after checking that no prime `≤ x` coprime to the
    /// level is absent.
    pub fn covered_up_to(&self, x: f64) -> Result<&[LocalPrimeData]> {
        self.covered(x, Error::IncompleteCoverage)
    }

    fn covered(&self, x: f64, missing: impl Fn(u64) -> Error) -> Result<&[LocalPrimeData]> {
        if !(x >= 2.0) {
            return Ok(&[]);
        }
        let top = x.floor() as u64;
        let table = PrimeTable::new(top)?;
        let end = self.records.partition_point(|r| r.p <= top);
        let mut it = self.records[..end].iter().map(|r| r.p);
        for &p in table.primes() {
            if self.level % p == 0 {
                continue;
            }
            if it.next() != Some(p) {
                return Err(missing(p));
            }
        }
        Ok(&self.records[..end])
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# level={}", self.level).unwrap();
        writeln!(out, "# t_phi={}", format_sig(self.t_phi, 17)).unwrap();
        if !self.source.is_empty() {
            writeln!(out, "# source={}", self.source.replace('\n', " ")).unwrap();
        }
        writeln!(out, "{TSV_HEADER}").unwrap();
        for r in &self.records {
            let c = r.chi.value();
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                r.p,
                format_sig(r.lambda.re, 17),
                format_sig(r.lambda.im, 17),
                format_sig(c.re, 17),
                format_sig(c.im, 17)
            )
            .unwrap();
        }
        out
    }

    pub fn export(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_tsv())?;
        Ok(())
    }
}

fn check_prime(p: u64, level: u64, line: usize) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::Validation { line, msg: format!("p = {p} is not prime") });
    }
    if level % p == 0 {
        return Err(Error::Validation { line, msg: format!("p = {p} divides the level {level}") });
    }
    Ok(())
}

fn parse_field<T: std::str::FromStr>(s: &str, name: &str, line: usize) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse { line, msg: format!("bad {name} field {s:?}") })
}

/// Parses the TSV schema: `# key=value` metadata (`level` and `t_phi` required
/// before the first data row; `source` optional), the column header, then one
/// row per prime.
pub fn parse_tsv(text: &str, default_source: &str) -> Result<EigenDataset> {
    let mut level = None;
    let mut t_phi = None;
    let mut source = None;
    let mut header_seen = false;
    let mut records: Vec<LocalPrimeData> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let row = raw.trim_end_matches('\r');
        if row.trim().is_empty() {
            continue;
        }
        if let Some(comment) = row.strip_prefix('#') {
            if let Some((k, v)) = comment.split_once('=') {
                match k.trim() {
                    "level" => level = Some(parse_field::<u64>(v, "level", line)?),
                    "t_phi" => t_phi = Some(parse_field::<f64>(v, "t_phi", line)?),
                    "source" => source = Some(v.to_string()),
                    _ => {}
                }
            }
            continue;
        }
        if !header_seen {
            let cols: Vec<&str> = row.split('\t').map(str::trim).collect();
            if cols.join("\t") != TSV_HEADER {
                return Err(Error::Parse { line, msg: format!("expected header {TSV_HEADER:?}") });
            }
            header_seen = true;
            continue;
        }
        let (Some(n), Some(_)) = (level, t_phi) else {
            return Err(Error::Parse { line, msg: "metadata `# level=` and `# t_phi=` must precede data rows".into() });
        };
        if n == 0 {
            return Err(Error::Validation { line, msg: "level must be positive".into() });
        }
        let fields: Vec<&str> = row.split('\t').collect();
        if fields.len() != 5 {
            return Err(Error::Parse { line, msg: format!("expected 5 fields, found {}", fields.len()) });
        }
        let p: u64 = parse_field(fields[0], "p", line)?;
        let nums: Vec<f64> = fields[1..]
            .iter()
            .zip(["lambda_re", "lambda_im", "chi_re", "chi_im"])
            .map(|(f, name)| parse_field(f, name, line))
            .collect::<Result<_>>()?;
        if nums.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation { line, msg: "non-finite value".into() });
        }
        check_prime(p, n, line)?;
        if records.last().is_some_and(|r| r.p >= p) {
            return Err(Error::Order { line });
        }
        let chi = UnitComplex::with_tolerance(nums[2], nums[3], INGEST_TOL)
            .map_err(|e| Error::Validation { line, msg: e.to_string() })?;
        let rec = LocalPrimeData::with_tolerance(p, Complex64::new(nums[0], nums[1]), chi, INGEST_TOL)
            .map_err(|e| Error::Validation { line, msg: e.to_string() })?;
        records.push(rec);
    }
    let (Some(level), Some(t_phi)) = (level, t_phi) else {
        return Err(Error::Parse { line: text.lines().count(), msg: "missing `# level=` or `# t_phi=`".into() });
    };
    if !header_seen {
        return Err(Error::Parse { line: text.lines().count(), msg: "missing column header".into() });
    }
    Ok(EigenDataset { level, t_phi, records, source: source.unwrap_or_else(|| default_source.to_string()) })
}

pub fn ingest(path: impl AsRef<Path>) -> Result<EigenDataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_tsv(&text, &path.display().to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SyntheticConfig {
    pub prime_limit: u64,
    pub seed: u64,
    /// `(p, λ)` overrides applied after sampling; `|λ| > 2`.
    pub violations: Vec<(u64, f64)>,
}

impl SyntheticConfig {
    pub fn new(prime_limit: u64, seed: u64) -> Self {
        SyntheticConfig { prime_limit, seed, violations: Vec::new() }
    }

    pub fn validate(&self) -> Result<()> {
        for &(p, l) in &self.violations {
            if !is_prime(p) {
                return Err(Error::Domain(format!("violation at non-prime {p}")));
            }
            if p > self.prime_limit {
                return Err(Error::Domain(format!("violation at {p} beyond prime limit {}", self.prime_limit)));
            }
            if !(l.abs() > 2.0) || !l.is_finite() {
                return Err(Error::Domain(format!("violation λ({p}) = {l} must satisfy |λ| > 2")));
            }
        }
        Ok(())
    }
}

/// `θ` from `(2/π)sin²θ` on `[0, π]` by rejection, with a generator keyed by
/// `(seed, p)` so the draw at `p` does not depend on other primes.
pub fn sato_tate_angle(seed: u64, p: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(p);
    loop {
        let theta = rng.gen_range(0.0..std::f64::consts::PI);
        let s = theta.sin();
        if rng.gen::<f64>() < s * s {
            return theta;
        }
    }
}

/// Level-1, trivial-character dataset with `λ(p) = 2cos θ_p` for every prime up
/// to the configured limit, then the overrides.
pub fn synthesize_sato_tate(config: &SyntheticConfig, table: &PrimeTable) -> Result<EigenDataset> {
    if table.limit() < config.prime_limit {
        return Err(Error::TableTooSmall { have: table.limit(), need: config.prime_limit });
    }
    config.validate()?;
    let seed = config.seed;
    let mut records: Vec<LocalPrimeData> = table
        .up_to(config.prime_limit)
        .par_iter()
        .map(|&p| LocalPrimeData::real(p, 2.0 * sato_tate_angle(seed, p).cos()))
        .collect();
    for &(p, l) in &config.violations {
        let i = records.binary_search_by_key(&p, |r| r.p).expect("validated prime within limit");
        records[i] = LocalPrimeData::real(p, l);
    }
    Ok(EigenDataset {
        level: 1,
        t_phi: 0.0,
        records,
        source: format!("sato-tate seed={} limit={}", config.seed, config.prime_limit),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityReport {
    pub x: f64,
    /// Unramified primes `≤ X`.
    pub pi_x: u64,
    pub ramanujan_count: u64,
    pub ramanujan_fraction: f64,
    /// Mean of `U(p) = (1 + 3A + 5A⁴)²`.
    pub mean_u: f64,
    /// Mean of `(1 + 3A)²`.
    pub mean_nine: f64,
    /// `mean_u/35²`, an upper bound for the non-Ramanujan fraction.
    pub nonram_fraction_bound: f64,
}

impl DensityReport {
    /// `ramanujan_fraction ≥ 1 − nonram_fraction_bound`, up to rounding in the mean.
    pub fn identity_holds(&self) -> bool {
        self.ramanujan_fraction + self.nonram_fraction_bound >= 1.0 - 1e-12
    }
}

fn per_prime<T: Send>(records: &[LocalPrimeData], f: impl Fn(&LocalPrimeData) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    records.par_iter().map(f).collect()
}

pub fn density_report(ds: &EigenDataset, x: f64, ramanujan_tol: f64) -> Result<DensityReport> {
    let recs = ds.covered_up_to(x)?;
    let stats = per_prime(recs, |r| {
        let l = lift_coefficients(r)?;
        Ok((is_ramanujan(r, ramanujan_tol), u_closed(&l), nine_tenths_statistic(r)))
    })?;
    let pi_x = stats.len() as u64;
    let ramanujan_count = stats.iter().filter(|s| s.0).count() as u64;
    let us: Vec<f64> = stats.iter().map(|s| s.1).collect();
    let nines: Vec<f64> = stats.iter().map(|s| s.2).collect();
    let (fraction, mean_u, mean_nine) = if pi_x == 0 {
        (1.0, 0.0, 0.0)
    } else {
        (ramanujan_count as f64 / pi_x as f64, pairwise_mean(&us), pairwise_mean(&nines))
    };
    Ok(DensityReport {
        x,
        pi_x,
        ramanujan_count,
        ramanujan_fraction: fraction,
        mean_u,
        mean_nine,
        nonram_fraction_bound: mean_u / U_THRESHOLD,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeastPrimeReport {
    pub p: u64,
    /// `(N(1 + |t|))^{1/u₀}` with implied constant 1.
    pub bound: f64,
    pub within_bound: bool,
}

pub fn least_ramanujan_prime(ds: &EigenDataset, ramanujan_tol: f64, constants: &SigmaConstants) -> Result<LeastPrimeReport> {
    if ds.is_empty() {
        return Err(Error::Domain("empty dataset".into()));
    }
    let bound = ramanujan_prime_bound(ds.level, ds.t_phi, constants)?;
    let p = ds.records.iter().find(|r| is_ramanujan(r, ramanujan_tol)).map(|r| r.p).ok_or(Error::NoneFound)?;
    Ok(LeastPrimeReport { p, bound, within_bound: p as f64 <= bound })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PntSums {
    pub x: f64,
    /// `Σ_{p≤X} A(p)`.
    pub sum_a: f64,
    /// `Σ_{p≤X} A⁴(p)`.
    pub sum_a4: f64,
    /// `Σ_{pᵏ≤X} log p·|A³(pᵏ)|²`.
    pub lambda_sym3_sq: f64,
    /// `Σ_{pᵏ≤X} log p·|A⁴(pᵏ)|²`.
    pub lambda_sym4_sq: f64,
    /// `sum_a/(X/ln X)`.
    pub sum_a_normalized: f64,
    pub sum_a4_normalized: f64,
    /// `lambda_sym3_sq/X`.
    pub lambda_sym3_sq_normalized: f64,
    pub lambda_sym4_sq_normalized: f64,
}

pub fn pnt_partial_sums(ds: &EigenDataset, x: f64) -> Result<PntSums> {
    let recs = ds.covered_up_to(x)?;
    let rows = per_prime(recs, |r| {
        let l = lift_coefficients(r)?;
        let sp = r.satake();
        let lp = (r.p as f64).ln();
        let (mut s3, mut s4) = (0.0, 0.0);
        let mut q = r.p as f64;
        let mut k = 1;
        while q <= x {
            s3 += lp * sym_coefficient_prime_power(&sp, Lift::Sym3, k).norm_sqr();
            s4 += lp * sym_coefficient_prime_power(&sp, Lift::Sym4, k).norm_sqr();
            q *= r.p as f64;
            k += 1;
        }
        Ok([l.a_adj, l.a_sym4, s3, s4])
    })?;
    let col = |j: usize| pairwise_sum(&rows.iter().map(|r| r[j]).collect::<Vec<_>>());
    let (sum_a, sum_a4, s3, s4) = (col(0), col(1), col(2), col(3));
    let pnt = if x > 1.0 { x / x.ln() } else { f64::NAN };
    Ok(PntSums {
        x,
        sum_a,
        sum_a4,
        lambda_sym3_sq: s3,
        lambda_sym4_sq: s4,
        sum_a_normalized: sum_a / pnt,
        sum_a4_normalized: sum_a4 / pnt,
        lambda_sym3_sq_normalized: s3 / x,
        lambda_sym4_sq_normalized: s4 / x,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RemarkDensity {
    pub x: f64,
    /// `Σ_{p≤X} |A³(p)|²/π(X)`.
    pub sup3: f64,
    /// `Σ_{p≤X} |A⁴(p)|²/π(X)`.
    pub sup4: f64,
}

pub fn remark_density_inequality(ds: &EigenDataset, x: f64) -> Result<RemarkDensity> {
    let recs = ds.covered_up_to(x)?;
    let rows = per_prime(recs, |r| {
        let l = lift_coefficients(r)?;
        Ok((l.a_sym3.norm_sqr(), l.a_sym4 * l.a_sym4))
    })?;
    if rows.is_empty() {
        return Ok(RemarkDensity { x, sup3: 0.0, sup4: 0.0 });
    }
    let s3: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let s4: Vec<f64> = rows.iter().map(|r| r.1).collect();
    Ok(RemarkDensity { x, sup3: pairwise_mean(&s3), sup4: pairwise_mean(&s4) })
}

/// Dense table of `f(n)` for `n ≤ len` from the dataset's prime-power values.
/// Entries sharing a factor with the level are 0.
fn dense_from_records<T>(
    ds: &EigenDataset,
    len: u64,
    zero: T,
    f: impl Fn(&LocalPrimeData, u32) -> T,
) -> Result<ArithmeticSequence<T>>
where
    T: Copy + num_traits::One + std::ops::Mul<Output = T>,
{
    ds.covered(len as f64, Error::MissingCoefficient)?;
    let table = PrimeTable::new(len.max(2))?;
    multiplicative(len, table.primes(), |p, e| match ds.get(p) {
        Some(r) => f(r, e),
        None => zero,
    })
}

/// `λ(n)`.
pub fn lambda_sequence(ds: &EigenDataset, len: u64) -> Result<ArithmeticSequence<Complex64>> {
    dense_from_records(ds, len, Complex64::new(0.0, 0.0), |r, e| lambda_prime_power(&r.satake(), e))
}

/// `χ(n)`.
pub fn chi_sequence(ds: &EigenDataset, len: u64) -> Result<ArithmeticSequence<Complex64>> {
    dense_from_records(ds, len, Complex64::new(0.0, 0.0), |r, e| r.chi.value().powu(e))
}

/// `A(n)` from adjoint prime-power coefficients.
pub fn adjoint_sequence(ds: &EigenDataset, len: u64) -> Result<ArithmeticSequence> {
    dense_from_records(ds, len, 0.0, |r, e| sym_coefficient_prime_power(&r.satake(), Lift::Adjoint, e).re)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct S2Sums {
    pub x: f64,
    pub s: f64,
    pub s_plus: f64,
    pub s_minus: f64,
}

/// `S(x) = Σ_{d<x} λ(d²)·conj(χ(d))·log(x/d)` over `d` coprime to the level,
/// split by the sign of the coefficient. With trivial character the twist is 1.
pub fn s2_sum(ds: &EigenDataset, x: f64) -> Result<S2Sums> {
    if !(x > 1.0) {
        return Err(Error::Domain(format!("x = {x} must exceed 1")));
    }
    let top = x.ceil() as u64 - 1;
    let coeff = dense_from_records(ds, top, 0.0, |r, e| {
        (lambda_prime_power(&r.satake(), 2 * e) * r.chi.conj().powu(e)).re
    })?;
    let (mut s_plus, mut s_minus) = (0.0, 0.0);
    for d in 1..=top {
        if gcd(d, ds.level) != 1 {
            continue;
        }
        let term = coeff.get(d).unwrap() * (x / d as f64).ln();
        if term > 0.0 {
            s_plus += term;
        } else {
            s_minus += term;
        }
    }
    Ok(S2Sums { x, s: s_plus + s_minus, s_plus, s_minus })
}
