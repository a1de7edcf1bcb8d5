//! Dense arithmetic functions on `1..=X` and the sums built from them.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::dde::Sigma;
use crate::error::{Error, Result};
use crate::hecke::{sym_coefficient_prime_power, Lift, SatakePair};
use crate::sieve::{is_prime, PrimeTable};

/// Largest dense sequence any constructor here will allocate.
pub const SEQUENCE_LIMIT_GUARD: u64 = 100_000_000;

/// Values `f(1), …, f(X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArithmeticSequence<T = f64> {
    values: Vec<T>,
}

impl<T: Copy> ArithmeticSequence<T> {
    pub fn from_values(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("empty arithmetic sequence".into()));
        }
        Ok(ArithmeticSequence { values })
    }

    pub fn from_fn(len: u64, f: impl FnMut(u64) -> T) -> Self {
        assert!(len >= 1, "arithmetic sequence needs length ≥ 1");
        ArithmeticSequence { values: (1..=len).map(f).collect() }
    }

    pub fn len(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `f(n)`, or `None` outside `1..=X`.
    pub fn get(&self, n: u64) -> Option<T> {
        if n == 0 {
            return None;
        }
        self.values.get(n as usize - 1).copied()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn map<U: Copy>(&self, f: impl FnMut(&T) -> U) -> ArithmeticSequence<U> {
        ArithmeticSequence { values: self.values.iter().map(f).collect() }
    }

    fn at(&self, n: u64) -> T {
        self.values[n as usize - 1]
    }
}

impl<T: Copy + Zero + One> ArithmeticSequence<T> {
    /// `δ(n) = [n = 1]`.
    pub fn delta(len: u64) -> Self {
        Self::from_fn(len, |n| if n == 1 { T::one() } else { T::zero() })
    }

    pub fn ones(len: u64) -> Self {
        Self::from_fn(len, |_| T::one())
    }
}

fn check_len(len: u64) -> Result<()> {
    if len == 0 {
        return Err(Error::Domain("sequence length must be ≥ 1".into()));
    }
    if len > SEQUENCE_LIMIT_GUARD {
        return Err(Error::LimitExceeded { limit: len, guard: SEQUENCE_LIMIT_GUARD });
    }
    Ok(())
}

/// Multiplicative function on `1..=len` from its values `f(p, e)` at prime
/// powers. `primes` must list every prime `≤ len` for the result to be the
/// full function; entries with an unlisted prime factor only see the listed part.
pub fn multiplicative<T>(len: u64, primes: &[u64], mut f: impl FnMut(u64, u32) -> T) -> Result<ArithmeticSequence<T>>
where
    T: Copy + One + Mul<Output = T>,
{
    check_len(len)?;
    let mut values = vec![T::one(); len as usize];
    let mut at_power = Vec::new();
    for &p in primes.iter().take_while(|&&p| p <= len) {
        at_power.clear();
        at_power.push(T::one());
        let mut q = p;
        let mut e = 1;
        loop {
            at_power.push(f(p, e));
            match q.checked_mul(p) {
                Some(next) if next <= len => {
                    q = next;
                    e += 1;
                }
                _ => break,
            }
        }
        let mut m = p;
        while m <= len {
            let mut r = m / p;
            let mut e = 1;
            while r % p == 0 {
                r /= p;
                e += 1;
            }
            let v = &mut values[m as usize - 1];
            *v = *v * at_power[e];
            m += p;
        }
    }
    Ok(ArithmeticSequence { values })
}

/// Threshold `y` splitting `h(p) = 3` from `h(p) = −1`, and the level whose
/// coprimality condition applies when summing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HSpec {
    pub y: f64,
    pub level: u64,
}

impl HSpec {
    pub fn new(y: f64, level: u64) -> Result<Self> {
        if !(y >= 2.0) {
            return Err(Error::Domain(format!("y = {y} < 2")));
        }
        if level == 0 {
            return Err(Error::Domain("level must be positive".into()));
        }
        Ok(HSpec { y, level })
    }

    pub fn h_at_prime(&self, p: u64) -> f64 {
        if p as f64 <= self.y {
            3.0
        } else {
            -1.0
        }
    }
}

/// Squarefree-supported `h` with `h(p) = 3` for `p ≤ y` and `−1` above.
pub fn h_sequence(spec: &HSpec, len: u64, table: &PrimeTable) -> Result<ArithmeticSequence> {
    if table.limit() < len {
        return Err(Error::TableTooSmall { have: table.limit(), need: len });
    }
    multiplicative(len, table.primes(), |p, e| if e == 1 { spec.h_at_prime(p) } else { 0.0 })
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn last_index(x: f64, len: u64) -> Result<u64> {
    if x.is_nan() {
        return Err(Error::Range("x is NaN".into()));
    }
    if x < 1.0 {
        return Ok(0);
    }
    let n = x.floor();
    if n > len as f64 {
        return Err(Error::Range(format!("x = {x} beyond sequence length {len}")));
    }
    Ok(n as u64)
}

/// `squarefree[n]` for `0 ≤ n ≤ len` (index 0 unused).
pub fn squarefree_mask(len: u64) -> Vec<bool> {
    let mut mask = vec![true; len as usize + 1];
    let mut k = 2u64;
    while k * k <= len {
        let mut m = k * k;
        while m <= len {
            mask[m as usize] = false;
            m += k * k;
        }
        k += 1;
    }
    mask
}

fn admissible(level: u64, squarefree_only: bool, len: u64) -> impl Fn(u64) -> bool {
    let mask = if squarefree_only { Some(squarefree_mask(len)) } else { None };
    move |n| gcd(n, level) == 1 && mask.as_ref().is_none_or(|m| m[n as usize])
}

/// `Σ_{n≤x, (n,N)=1} f(n)`.
pub fn partial_sum(f: &ArithmeticSequence, x: f64, level: u64) -> Result<f64> {
    restricted_sum(f, x, level, false)
}

/// [`partial_sum`] optionally restricted to squarefree `n`.
pub fn restricted_sum(f: &ArithmeticSequence, x: f64, level: u64, squarefree_only: bool) -> Result<f64> {
    let n = last_index(x, f.len())?;
    let ok = admissible(level, squarefree_only, n);
    Ok((1..=n).filter(|&k| ok(k)).map(|k| f.at(k)).sum())
}

/// `Σ_{n≤x, (n,N)=1} f(n)·log(x/n)`, optionally over squarefree `n` only.
pub fn log_weighted_sum(f: &ArithmeticSequence, x: f64, level: u64, squarefree_only: bool) -> Result<f64> {
    let n = last_index(x, f.len())?;
    let ok = admissible(level, squarefree_only, n);
    Ok((1..=n).filter(|&k| ok(k)).map(|k| f.at(k) * (x / k as f64).ln()).sum())
}

/// `∫₁ˣ F(t) dt/t` for the step function `F(t) = Σ_{n≤t}` (same restrictions),
/// summed exactly cell by cell between integers.
pub fn integrated_partial_sums(f: &ArithmeticSequence, x: f64, level: u64, squarefree_only: bool) -> Result<f64> {
    let n = last_index(x, f.len())?;
    let ok = admissible(level, squarefree_only, n);
    let mut running = 0.0;
    let mut total = 0.0;
    for k in 1..=n {
        if ok(k) {
            running += f.at(k);
        }
        let upper = ((k + 1) as f64).min(x);
        total += running * (upper / k as f64).ln();
    }
    Ok(total)
}

/// `(f ⋆ g)(n) = Σ_{d|n} f(d) g(n/d)`.
pub fn dirichlet_convolve<T>(f: &ArithmeticSequence<T>, g: &ArithmeticSequence<T>) -> Result<ArithmeticSequence<T>>
where
    T: Copy + Zero + Mul<Output = T> + Add<Output = T>,
{
    if f.len() != g.len() {
        return Err(Error::LengthMismatch(f.values.len(), g.values.len()));
    }
    let len = f.values.len();
    let mut out = vec![T::zero(); len];
    for d in 1..=len {
        let fd = f.values[d - 1];
        for (k, m) in (d..=len).step_by(d).enumerate() {
            out[m - 1] = out[m - 1] + fd * g.values[k];
        }
    }
    Ok(ArithmeticSequence { values: out })
}

/// Inverse under Dirichlet convolution, by forward accumulation of
/// `f⁻¹(n) = −Σ_{d|n, d>1} f(d) f⁻¹(n/d)`.
pub fn dirichlet_inverse(f: &ArithmeticSequence) -> Result<ArithmeticSequence> {
    if f.at(1) != 1.0 {
        return Err(Error::NotInvertible(f.at(1)));
    }
    Ok(inverse_unchecked(f))
}

fn inverse_unchecked<T>(f: &ArithmeticSequence<T>) -> ArithmeticSequence<T>
where
    T: Copy + Zero + One + Mul<Output = T> + Sub<Output = T>,
{
    let len = f.values.len();
    let mut acc = vec![T::zero(); len];
    let mut inv = vec![T::zero(); len];
    for n in 1..=len {
        let g = if n == 1 { T::one() } else { T::zero() - acc[n - 1] };
        inv[n - 1] = g;
        for (k, m) in (2 * n..=len).step_by(n).enumerate() {
            acc[m - 1] = acc[m - 1] + f.values[k + 1] * g;
        }
    }
    ArithmeticSequence { values: inv }
}

/// Outcome of comparing `A` against `h` on `n ≤ x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvolutionCheck {
    pub x: f64,
    /// `H(t) = Σ_{n≤t,(n,N)=1} h(n) ≥ 0` at every `t ≤ x`.
    pub holds_hypothesis: bool,
    /// Squarefree `Σ A(n)` over `n ≤ x` coprime to the level.
    pub sflat: f64,
    pub hsum: f64,
    /// Squarefree `Σ A(n) log(x/n)`.
    pub sflat_log: f64,
    pub hsum_log: f64,
    /// `min_{t≤x} (𝔖♭(t) − H(t))`, 0 for `x < 1`.
    pub min_gap: f64,
    /// `∫₁ˣ (𝔖♭(t) − H(t)) dt/t` summed over jump points.
    pub log_gap: f64,
    /// `g = A ⋆ h⁻¹` has `g(p) ≥ 0` at every prime `p ≤ x` coprime to the level.
    pub g_nonnegative: bool,
    /// `None` when the hypothesis fails; otherwise whether both inequalities hold.
    pub verified: Option<bool>,
}

/// Checks `𝔖♭(x) ≥ H(x)` and `S♭(x) ≥ Σ h(n) log(x/n)` for a given `A`.
///
/// `A(p) > 3` is required at primes `p ≤ min(y, x)` coprime to the level. Both
/// inequalities are asserted only when every `H(t)`, `t ≤ x`, is nonnegative.
/// The first compares sums directly; the second is confirmed through the gap
/// integral (a sum of nonnegative terms when the first holds pointwise) and by
/// direct comparison up to rounding.
pub fn convolution_lower_bound_check(
    a: &ArithmeticSequence,
    spec: &HSpec,
    x: f64,
    table: &PrimeTable,
) -> Result<ConvolutionCheck> {
    let n = last_index(x, a.len())?;
    let len = n.max(1);
    for &p in table.up_to(len) {
        if p as f64 <= spec.y && spec.level % p != 0 && p <= n && !(a.at(p) > 3.0) {
            return Err(Error::Domain(format!("A({p}) = {} must exceed 3 for p ≤ y", a.at(p))));
        }
    }
    let h = h_sequence(spec, len, table)?;
    let level = spec.level;
    let coprime = |k: u64| gcd(k, level) == 1;
    let sf = squarefree_mask(len);

    let mut sflat = 0.0;
    let mut hsum = 0.0;
    let mut hypothesis = true;
    let mut min_gap = if n == 0 { 0.0 } else { f64::INFINITY };
    let mut log_gap = 0.0;
    for k in 1..=n {
        if coprime(k) && sf[k as usize] {
            sflat += a.at(k);
            hsum += h.at(k);
        }
        hypothesis &= hsum >= 0.0;
        let gap = sflat - hsum;
        min_gap = min_gap.min(gap);
        log_gap += gap * (((k + 1) as f64).min(x) / k as f64).ln();
    }

    let sflat_log = log_weighted_sum(a, x, level, true)?;
    let hsum_log = log_weighted_sum(&h, x, level, true)?;

    let prefix = ArithmeticSequence { values: a.values[..len as usize].to_vec() };
    let g = dirichlet_convolve(&prefix, &dirichlet_inverse(&h)?)?;
    let g_nonnegative = table.up_to(n).iter().filter(|&&p| coprime(p)).all(|&p| g.at(p) >= 0.0);

    let verified = hypothesis.then(|| {
        let scale = sflat_log.abs().max(hsum_log.abs()).max(1.0);
        min_gap >= 0.0 && log_gap >= 0.0 && sflat_log - hsum_log >= -1e-9 * scale
    });
    Ok(ConvolutionCheck {
        x,
        holds_hypothesis: hypothesis,
        sflat,
        hsum,
        sflat_log,
        hsum_log,
        min_gap,
        log_gap,
        g_nonnegative,
        verified,
    })
}

/// Max coefficient residual of
/// `(Σ_k A(pᵏ) Xᵏ)·(1 − A X + A X² − X³)·(1 + A X) = 1 + A X`
/// through `X^degree`, with `A(pᵏ)` the adjoint prime-power coefficients.
pub fn local_factor_identity_check(sp: &SatakePair, degree: usize) -> f64 {
    let coeffs: Vec<Complex64> = (0..=degree).map(|k| sym_coefficient_prime_power(sp, Lift::Adjoint, k as u32)).collect();
    let a = coeffs.get(1).copied().unwrap_or_else(|| sym_coefficient_prime_power(sp, Lift::Adjoint, 1));
    let one = Complex64::new(1.0, 0.0);
    // (1 − aX + aX² − X³)(1 + aX)
    let cubic = [one, -a, a, -one];
    let mut factor = [Complex64::zero(); 5];
    for (i, &c) in cubic.iter().enumerate() {
        factor[i] += c;
        factor[i + 1] += c * a;
    }
    let mut worst = 0.0f64;
    for k in 0..=degree {
        let mut c = Complex64::zero();
        for (j, &f) in factor.iter().enumerate().take(k + 1) {
            c += f * coeffs[k - j];
        }
        let want = match k {
            0 => one,
            1 => a,
            _ => Complex64::zero(),
        };
        worst = worst.max((c - want).norm());
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CConstant {
    pub level: u64,
    pub cutoff: f64,
    pub value: f64,
    /// Bound on `|log c(N) − log value|` from the primes above the cutoff.
    pub tail_bound: f64,
}

fn c_factor(p: u64) -> f64 {
    let q = 1.0 / p as f64;
    (1.0 - q).powi(3) * (1.0 + 3.0 * q)
}

pub fn euler_phi(n: u64) -> u64 {
    let mut m = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

/// `c(N) = (φ(N)/N)³ Π_{p∤N} (1 − 1/p)³(1 + 3/p)` truncated at `p ≤ P`.
///
/// `log((1 − 1/p)³(1 + 3/p)) = −6/p² + 8/p³ − …` stays within `7/p²` in absolute
/// value from `p = 11` on, so the tail is bounded by exact terms for the primes
/// in `(P, 11)` plus `7/max(⌊P⌋, 10)`.
pub fn c_constant(level: u64, cutoff: f64, table: &PrimeTable) -> Result<CConstant> {
    if level == 0 {
        return Err(Error::Domain("level must be positive".into()));
    }
    if !(cutoff >= 1.0) {
        return Err(Error::Domain(format!("cutoff P = {cutoff} < 1")));
    }
    let top = cutoff.floor() as u64;
    if table.limit() < top {
        return Err(Error::TableTooSmall { have: table.limit(), need: top });
    }
    let ratio = euler_phi(level) as f64 / level as f64;
    let product: f64 = table
        .up_to(top)
        .iter()
        .filter(|&&p| level % p != 0)
        .map(|&p| c_factor(p))
        .product();
    let small: f64 = (top + 1..11).filter(|&p| is_prime(p) && level % p != 0).map(|p| c_factor(p).ln().abs()).sum();
    let tail_bound = small + 7.0 / (top.max(10) as f64);
    Ok(CConstant { level, cutoff, value: ratio.powi(3) * product, tail_bound })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanValueReport {
    pub y: f64,
    pub u: f64,
    pub level: u64,
    /// `H(yᵘ)`.
    pub lhs: f64,
    /// `c(N)·σ(u)·(ln y)²·yᵘ`.
    pub rhs: f64,
    pub ratio: f64,
    /// `2·ratio`: the comparison with `σ(u)/Γ(3)` in place of `σ(u)`, which is
    /// what `Σ μ²(n) 3^{ω(n)} ~ c·x·log²x/2` predicts at `u → ∞`.
    pub ratio_gamma_normalized: f64,
}

fn integer_part(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x.floor()
    }
}

/// Compares `H(yᵘ)` with `c(N)·σ(u)·(log y)²·yᵘ`. `c(N)` is truncated at the table limit.
pub fn mean_value_report(spec: &HSpec, u: f64, table: &PrimeTable, sigma: &Sigma) -> Result<MeanValueReport> {
    if !(u > 0.0) {
        return Err(Error::Domain(format!("u = {u} must be positive")));
    }
    let x = integer_part(spec.y.powf(u));
    if x > table.limit() as f64 {
        return Err(Error::TableTooSmall { have: table.limit(), need: x as u64 });
    }
    let len = (x as u64).max(1);
    let h = h_sequence(spec, len, table)?;
    let lhs = partial_sum(&h, x, spec.level)?;
    let c = c_constant(spec.level, table.limit() as f64, table)?.value;
    let rhs = c * sigma.eval(u)? * spec.y.ln().powi(2) * spec.y.powf(u);
    let ratio = lhs / rhs;
    Ok(MeanValueReport {
        y: spec.y,
        u,
        level: spec.level,
        lhs,
        rhs,
        ratio,
        ratio_gamma_normalized: 2.0 * ratio,
    })
}
