//! Local algebra of a Hecke–Maass form at an unramified prime.
//!
//! Everything here is a pure function of the local data `(p, λ(p), χ(p))`. The
//! Satake parameters `{α, β}` are the roots of `X² − λX + χ`; eigenvalues at
//! prime powers and the lift coefficients are symmetric functions of them.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::multfunc::ArithmeticSequence;

/// Absolute tolerance on imaginary parts of quantities that must be real, and on
/// the unit-modulus and `λ = χ·conj(λ)` invariants.
pub const REAL_TOL: f64 = 1e-9;

/// Default slack for `|λ(p)| ≤ 2` on noisy data.
pub const DEFAULT_RAMANUJAN_TOL: f64 = 1e-9;

const DOUBLE_ROOT_TOL: f64 = 1e-12;

/// Imaginary parts are compared relative to `max(1, |z|)`.
fn checked_real(z: Complex64) -> Result<f64> {
    let tol = REAL_TOL * z.norm().max(1.0);
    if z.im.abs() > tol {
        return Err(Error::ImaginaryResidual { residual: z.im.abs(), tol });
    }
    Ok(z.re)
}

/// Value of a Dirichlet character at a prime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitComplex(Complex64);

impl UnitComplex {
    pub const ONE: UnitComplex = UnitComplex(Complex64 { re: 1.0, im: 0.0 });

    pub fn new(re: f64, im: f64) -> Result<Self> {
        Self::with_tolerance(re, im, REAL_TOL)
    }

    pub fn with_tolerance(re: f64, im: f64, tol: f64) -> Result<Self> {
        let z = Complex64::new(re, im);
        let dev = (z.norm() - 1.0).abs();
        if !dev.is_finite() || dev > tol {
            return Err(Error::Domain(format!("|χ| = {} is not 1", z.norm())));
        }
        Ok(UnitComplex(z))
    }

    pub fn from_angle(theta: f64) -> Self {
        UnitComplex(Complex64::from_polar(1.0, theta))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn conj(self) -> Complex64 {
        self.0.conj()
    }
}

/// Unordered pair of Satake parameters with `α·β = χ(p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatakePair {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl SatakePair {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let prod = (alpha * beta).norm();
        if (prod - 1.0).abs() > REAL_TOL {
            return Err(Error::Domain(format!("|αβ| = {prod} is not 1")));
        }
        Ok(SatakePair { alpha, beta })
    }

    pub fn lambda(&self) -> Complex64 {
        self.alpha + self.beta
    }

    pub fn chi(&self) -> Complex64 {
        self.alpha * self.beta
    }

    /// `α/β`, one of the two non-trivial adjoint parameters.
    pub fn ratio(&self) -> Complex64 {
        self.alpha / self.beta
    }

    /// Whether the roots coincide up to [`DOUBLE_ROOT_TOL`].
    pub fn is_double(&self) -> bool {
        (self.alpha - self.beta).norm() < DOUBLE_ROOT_TOL
    }
}

/// Local record `(p, λ(p), χ(p))` at an unramified prime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalPrimeData {
    pub p: u64,
    pub lambda: Complex64,
    pub chi: UnitComplex,
}

impl LocalPrimeData {
    /// Checks `λ = χ·conj(λ)` to [`REAL_TOL`]. Primality of `p` is the caller's
    /// responsibility (datasets validate it once against a prime table).
    pub fn new(p: u64, lambda: Complex64, chi: UnitComplex) -> Result<Self> {
        Self::with_tolerance(p, lambda, chi, REAL_TOL)
    }

    pub fn with_tolerance(p: u64, lambda: Complex64, chi: UnitComplex, tol: f64) -> Result<Self> {
        if !lambda.re.is_finite() || !lambda.im.is_finite() {
            return Err(Error::Domain(format!("λ({p}) is not finite")));
        }
        let dev = (lambda - chi.value() * lambda.conj()).norm();
        if dev > tol {
            return Err(Error::Domain(format!(
                "λ({p}) = {lambda} violates λ = χ·conj(λ) by {dev:e}"
            )));
        }
        Ok(LocalPrimeData { p, lambda, chi })
    }

    /// Trivial character, real eigenvalue.
    pub fn real(p: u64, lambda: f64) -> Self {
        LocalPrimeData { p, lambda: Complex64::new(lambda, 0.0), chi: UnitComplex::ONE }
    }

    pub fn satake(&self) -> SatakePair {
        satake_from_lambda(self.lambda, self.chi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftCoefficients {
    /// `A(p)`, adjoint.
    pub a_adj: f64,
    /// `A^{[3]}(p)`, symmetric cube.
    pub a_sym3: Complex64,
    /// `A^{[4]}(p)`, symmetric fourth power twisted by `conj(χ)²`.
    pub a_sym4: f64,
}

impl LiftCoefficients {
    /// Residuals of `A² = A⁴ + A + 1` and `A·A⁴ = |A³|² − 1`.
    pub fn identity_residuals(&self) -> (f64, f64) {
        let a = self.a_adj;
        let a4 = self.a_sym4;
        let r1 = a * a - (a4 + a + 1.0);
        let r2 = a * a4 - (self.a_sym3.norm_sqr() - 1.0);
        (r1, r2)
    }
}

/// Which local parameter tuple a prime-power coefficient is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lift {
    /// `{α, β}`; `h_k` gives `λ(p^k)`.
    Standard,
    /// `{α/β, 1, β/α}`.
    Adjoint,
    /// `{α³, α²β, αβ², β³}`.
    Sym3,
    /// `{α²/β², α/β, 1, β/α, β²/α²}`.
    Sym4,
}

impl Lift {
    pub fn parameters(self, sp: &SatakePair) -> Vec<Complex64> {
        let (a, b) = (sp.alpha, sp.beta);
        let one = Complex64::new(1.0, 0.0);
        match self {
            Lift::Standard => vec![a, b],
            Lift::Adjoint => {
                let r = a / b;
                vec![r, one, r.inv()]
            }
            Lift::Sym3 => vec![a * a * a, a * a * b, a * b * b, b * b * b],
            Lift::Sym4 => {
                let r = a / b;
                let s = r.inv();
                vec![r * r, r, one, s, s * s]
            }
        }
    }
}

/// Complete homogeneous symmetric polynomial `h_k` of `xs`.
pub fn complete_homogeneous(xs: &[Complex64], k: usize) -> Complex64 {
    let mut h = vec![Complex64::new(0.0, 0.0); k + 1];
    h[0] = Complex64::new(1.0, 0.0);
    for &x in xs {
        for j in 1..=k {
            h[j] = h[j] + x * h[j - 1];
        }
    }
    h[k]
}

/// Roots of `X² − λX + χ`. The larger root comes from the quadratic formula and
/// the smaller from `χ/α`, which keeps the product exact when they differ in size.
pub fn satake_from_lambda(lambda: Complex64, chi: UnitComplex) -> SatakePair {
    let c = chi.value();
    let disc = (lambda * lambda - 4.0 * c).sqrt();
    let plus = (lambda + disc) * 0.5;
    let minus = (lambda - disc) * 0.5;
    let (alpha, beta) = if plus.norm() >= minus.norm() { (plus, c / plus) } else { (minus, c / minus) };
    if (alpha - beta).norm() < DOUBLE_ROOT_TOL {
        let root = lambda * 0.5;
        return SatakePair { alpha: root, beta: root };
    }
    SatakePair { alpha, beta }
}

/// `λ(p^n) = (α^{n+1} − β^{n+1})/(α − β)`, evaluated as `Σ_j α^j β^{n−j}`, which
/// is the same polynomial and reduces to `(n+1)αⁿ` at a double root.
pub fn lambda_prime_power(sp: &SatakePair, n: u32) -> Complex64 {
    if sp.is_double() {
        return sp.alpha.powu(n) * (n as f64 + 1.0);
    }
    complete_homogeneous(&[sp.alpha, sp.beta], n as usize)
}

/// `A(p) = λ(p²)·conj(χ(p)) = |λ(p)|² − 1`.
pub fn adjoint_coefficient(d: &LocalPrimeData) -> Result<f64> {
    let lambda_p2 = d.lambda * d.lambda - d.chi.value();
    checked_real(lambda_p2 * d.chi.conj())
}

/// `A(n) = Σ_{k²|n} λ(n²/k⁴)·conj(χ(n/k²))` from dense `λ` and `χ` tables.
pub fn adjoint_coefficient_n(
    lambda: &ArithmeticSequence<Complex64>,
    chi: &ArithmeticSequence<Complex64>,
    n: u64,
) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let mut total = Complex64::new(0.0, 0.0);
    let mut k = 1u64;
    while k * k <= n {
        if n % (k * k) == 0 {
            let m = n / (k * k);
            let l = lambda.get(m * m).ok_or(Error::MissingCoefficient(m * m))?;
            let c = chi.get(m).ok_or(Error::MissingCoefficient(m))?;
            total += l * c.conj();
        }
        k += 1;
    }
    Ok(total)
}

pub fn sym3_coefficient(sp: &SatakePair) -> Complex64 {
    Lift::Sym3.parameters(sp).into_iter().sum()
}

pub fn sym4_twisted_coefficient(sp: &SatakePair) -> Result<f64> {
    if sp.alpha.norm() == 0.0 || sp.beta.norm() == 0.0 {
        return Err(Error::Domain("zero Satake parameter".into()));
    }
    checked_real(Lift::Sym4.parameters(sp).into_iter().sum())
}

pub fn lift_coefficients(d: &LocalPrimeData) -> Result<LiftCoefficients> {
    let sp = d.satake();
    Ok(LiftCoefficients {
        a_adj: adjoint_coefficient(d)?,
        a_sym3: sym3_coefficient(&sp),
        a_sym4: sym4_twisted_coefficient(&sp)?,
    })
}

/// Coefficient at `p^k` of the lift's local L-factor: `h_k` of its parameter tuple.
pub fn sym_coefficient_prime_power(sp: &SatakePair, lift: Lift, k: u32) -> Complex64 {
    complete_homogeneous(&lift.parameters(sp), k as usize)
}

pub fn is_ramanujan(d: &LocalPrimeData, tol: f64) -> bool {
    d.lambda.norm() <= 2.0 + tol
}

/// `λ(p^{2n})·conj(χ(p))ⁿ` at a non-Ramanujan prime, where it exceeds `2n + 1`.
pub fn nonramanujan_growth(d: &LocalPrimeData, n: u32) -> Result<f64> {
    if is_ramanujan(d, 0.0) {
        return Err(Error::NotApplicable(format!("p = {} is a Ramanujan prime", d.p)));
    }
    let sp = d.satake();
    checked_real(lambda_prime_power(&sp, 2 * n) * d.chi.conj().powu(n))
}

/// `U(p) = (1 + 3A + 5A⁴)²`.
pub fn u_statistic(d: &LocalPrimeData) -> Result<f64> {
    let l = lift_coefficients(d)?;
    Ok(u_closed(&l))
}

pub fn u_closed(l: &LiftCoefficients) -> f64 {
    let t = 1.0 + 3.0 * l.a_adj + 5.0 * l.a_sym4;
    t * t
}

/// `−20 + 15A + 19A⁴ + 30|A³|² + 25(A⁴)²`, equal to [`u_closed`] by the Hecke relations.
pub fn u_expanded(l: &LiftCoefficients) -> f64 {
    -20.0 + 15.0 * l.a_adj + 19.0 * l.a_sym4 + 30.0 * l.a_sym3.norm_sqr() + 25.0 * l.a_sym4 * l.a_sym4
}

/// `(1 + 3A(p))²`.
pub fn nine_tenths_statistic(d: &LocalPrimeData) -> f64 {
    let a = d.lambda.norm_sqr() - 1.0;
    let t = 1.0 + 3.0 * a;
    t * t
}

/// Random local data with `λ = χ·conj(λ)`: `χ = e^{iψ}` and `λ = e^{iψ/2}·t`
/// with real `t`, `|t| ≤ 2` for Ramanujan data and `2 < |t| < 6` otherwise.
pub fn sample_local_data<R: Rng + ?Sized>(rng: &mut R, p: u64, ramanujan: bool, trivial_character: bool) -> LocalPrimeData {
    let psi = if trivial_character { 0.0 } else { rng.gen_range(0.0..std::f64::consts::TAU) };
    let magnitude = if ramanujan { rng.gen_range(0.0..=2.0) } else { rng.gen_range(2.0..6.0) + 1e-6 };
    let t = if rng.gen::<bool>() { magnitude } else { -magnitude };
    let chi = UnitComplex::from_angle(psi);
    let lambda = Complex64::from_polar(1.0, psi / 2.0) * t;
    LocalPrimeData { p, lambda, chi }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pair(a: Complex64, b: Complex64) -> SatakePair {
        SatakePair::new(a, b).unwrap()
    }

    fn unordered_eq(sp: &SatakePair, a: Complex64, b: Complex64, tol: f64) -> bool {
        let direct = (sp.alpha - a).norm() < tol && (sp.beta - b).norm() < tol;
        let swapped = (sp.alpha - b).norm() < tol && (sp.beta - a).norm() < tol;
        direct || swapped
    }

    #[test]
    fn satake_examples() {
        let one = UnitComplex::ONE;
        assert!(unordered_eq(&satake_from_lambda(c(2.0, 0.0), one), c(1.0, 0.0), c(1.0, 0.0), 1e-15));
        assert!(unordered_eq(&satake_from_lambda(c(0.0, 0.0), one), c(0.0, 1.0), c(0.0, -1.0), 1e-15));
        assert!(unordered_eq(&satake_from_lambda(c(2.5, 0.0), one), c(2.0, 0.0), c(0.5, 0.0), 1e-15));
        assert!(satake_from_lambda(c(2.0, 0.0), one).is_double());
    }

    #[test]
    fn prime_power_examples() {
        let sp = pair(c(2.0, 0.0), c(0.5, 0.0));
        assert_eq!(lambda_prime_power(&sp, 0), c(1.0, 0.0));
        assert_abs_diff_eq!(lambda_prime_power(&sp, 2).re, 5.25, epsilon = 1e-14);
        let sp = pair(c(0.0, 1.0), c(0.0, -1.0));
        assert_abs_diff_eq!(lambda_prime_power(&sp, 2).re, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(lambda_prime_power(&sp, 2).im, 0.0, epsilon = 1e-14);
        let double = pair(c(1.0, 0.0), c(1.0, 0.0));
        assert_eq!(lambda_prime_power(&double, 7), c(8.0, 0.0));
    }

    #[test]
    fn prime_power_matches_ratio_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let ram: bool = rng.gen();
            let d = sample_local_data(&mut rng, 2, ram, false);
            let sp = d.satake();
            if (sp.alpha - sp.beta).norm() < 1e-3 {
                continue;
            }
            for n in 0..8u32 {
                let ratio = (sp.alpha.powu(n + 1) - sp.beta.powu(n + 1)) / (sp.alpha - sp.beta);
                let got = lambda_prime_power(&sp, n);
                assert!((got - ratio).norm() < 1e-9 * (1.0 + ratio.norm()), "n={n} {got} {ratio}");
            }
        }
    }

    #[test]
    fn hecke_recursion() {
        // λ(p^{n+1}) = λ(p)λ(p^n) − χ(p)λ(p^{n−1})
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let ram: bool = rng.gen();
            let d = sample_local_data(&mut rng, 3, ram, false);
            let sp = d.satake();
            for n in 1..10u32 {
                let lhs = lambda_prime_power(&sp, n + 1);
                let rhs = d.lambda * lambda_prime_power(&sp, n) - d.chi.value() * lambda_prime_power(&sp, n - 1);
                assert!((lhs - rhs).norm() < 1e-9 * (1.0 + lhs.norm()));
            }
        }
    }

    #[test]
    fn adjoint_examples() {
        assert_abs_diff_eq!(adjoint_coefficient(&LocalPrimeData::real(2, 0.0)).unwrap(), -1.0);
        assert_abs_diff_eq!(adjoint_coefficient(&LocalPrimeData::real(2, 2.0)).unwrap(), 3.0);
        let d = LocalPrimeData::real(2, 2.5);
        assert_abs_diff_eq!(adjoint_coefficient(&d).unwrap(), 5.25, epsilon = 1e-14);
        assert_abs_diff_eq!(lambda_prime_power(&d.satake(), 2).re, 5.25, epsilon = 1e-14);
    }

    #[test]
    fn adjoint_rejects_inconsistent_data() {
        // λ = i with χ = 1 breaks λ = χ·conj(λ); bypass the constructor on purpose.
        let d = LocalPrimeData { p: 2, lambda: c(1.0, 1.0), chi: UnitComplex::ONE };
        assert!(matches!(adjoint_coefficient(&d), Err(Error::ImaginaryResidual { .. })));
        assert!(LocalPrimeData::new(2, c(1.0, 1.0), UnitComplex::ONE).is_err());
    }

    #[test]
    fn sym_examples() {
        let ones = pair(c(1.0, 0.0), c(1.0, 0.0));
        let quarter = pair(c(0.0, 1.0), c(0.0, -1.0));
        let theta = std::f64::consts::PI / 3.0;
        let unit = pair(Complex64::from_polar(1.0, theta), Complex64::from_polar(1.0, -theta));
        let real = pair(c(2.0, 0.0), c(0.5, 0.0));

        assert_abs_diff_eq!(sym3_coefficient(&ones).re, 4.0);
        assert_abs_diff_eq!(sym3_coefficient(&quarter).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sym3_coefficient(&unit).re, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sym3_coefficient(&unit).im, 0.0, epsilon = 1e-14);

        assert_abs_diff_eq!(sym4_twisted_coefficient(&ones).unwrap(), 5.0);
        assert_abs_diff_eq!(sym4_twisted_coefficient(&quarter).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sym4_twisted_coefficient(&real).unwrap(), 21.3125, epsilon = 1e-13);
    }

    #[test]
    fn lift_examples() {
        let l = lift_coefficients(&LocalPrimeData::real(2, 0.0)).unwrap();
        assert_abs_diff_eq!(l.a_adj, -1.0);
        assert_abs_diff_eq!(l.a_sym3.norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(l.a_sym4, 1.0, epsilon = 1e-14);

        let l = lift_coefficients(&LocalPrimeData::real(2, 2.0)).unwrap();
        assert_eq!((l.a_adj, l.a_sym3.re, l.a_sym4), (3.0, 4.0, 5.0));

        let l = lift_coefficients(&LocalPrimeData::real(2, 2.5)).unwrap();
        assert_abs_diff_eq!(l.a_adj, 5.25, epsilon = 1e-13);
        assert_abs_diff_eq!(l.a_sym3.re, 10.625, epsilon = 1e-13);
        assert_abs_diff_eq!(l.a_sym4, 21.3125, epsilon = 1e-13);
    }

    #[test]
    fn prime_power_coefficients() {
        let ones = pair(c(1.0, 0.0), c(1.0, 0.0));
        let quarter = pair(c(0.0, 1.0), c(0.0, -1.0));
        assert_eq!(sym_coefficient_prime_power(&quarter, Lift::Adjoint, 0), c(1.0, 0.0));
        assert_abs_diff_eq!(sym_coefficient_prime_power(&ones, Lift::Adjoint, 2).re, 6.0);
        assert_abs_diff_eq!(sym_coefficient_prime_power(&quarter, Lift::Sym4, 1).re, 1.0, epsilon = 1e-14);
        // (1−x)^{-3}: h_k of {1,1,1} is C(k+2, 2)
        for k in 0..20u32 {
            let want = ((k + 1) * (k + 2) / 2) as f64;
            assert_abs_diff_eq!(sym_coefficient_prime_power(&ones, Lift::Adjoint, k).re, want);
        }
    }

    #[test]
    fn adjoint_divisor_formula() {
        // λ(p)=2, χ=1: λ(p^k) = k+1; A(p) = −1 at λ(p) = 0.
        let p2 = ArithmeticSequence::from_fn(16, |n| match n {
            1 => c(1.0, 0.0),
            2 => c(2.0, 0.0),
            4 => c(3.0, 0.0),
            8 => c(4.0, 0.0),
            16 => c(5.0, 0.0),
            _ => c(0.0, 0.0),
        });
        let chi = ArithmeticSequence::from_fn(16, |_| c(1.0, 0.0));
        assert_eq!(adjoint_coefficient_n(&p2, &chi, 1).unwrap(), c(1.0, 0.0));
        assert_eq!(adjoint_coefficient_n(&p2, &chi, 4).unwrap(), c(6.0, 0.0));
        assert!(matches!(adjoint_coefficient_n(&p2, &chi, 8), Err(Error::MissingCoefficient(64))));

        let zero = ArithmeticSequence::from_fn(9, |n| match n {
            1 => c(1.0, 0.0),
            3 => c(0.0, 0.0),
            9 => c(-1.0, 0.0),
            _ => c(0.0, 0.0),
        });
        assert_eq!(adjoint_coefficient_n(&zero, &chi, 3).unwrap(), c(-1.0, 0.0));
    }

    #[test]
    fn ramanujan_classification() {
        assert!(is_ramanujan(&LocalPrimeData::real(2, 0.0), 0.0));
        assert!(!is_ramanujan(&LocalPrimeData::real(2, 2.5), 0.0));
        assert!(is_ramanujan(&LocalPrimeData::real(2, 2.0), 0.0));
        assert!(is_ramanujan(&LocalPrimeData::real(2, -2.0 - 1e-12), DEFAULT_RAMANUJAN_TOL));
    }

    #[test]
    fn growth_examples() {
        let d = LocalPrimeData::real(2, 2.5);
        assert_abs_diff_eq!(nonramanujan_growth(&d, 1).unwrap(), 5.25, epsilon = 1e-13);
        assert_abs_diff_eq!(nonramanujan_growth(&d, 2).unwrap(), 21.3125, epsilon = 1e-12);
        assert_abs_diff_eq!(nonramanujan_growth(&LocalPrimeData::real(2, 3.0), 1).unwrap(), 8.0, epsilon = 1e-12);
        assert!(matches!(nonramanujan_growth(&LocalPrimeData::real(2, 1.0), 1), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn statistic_examples() {
        let zero = LocalPrimeData::real(2, 0.0);
        let two = LocalPrimeData::real(2, 2.0);
        let big = LocalPrimeData::real(2, 2.5);
        assert_abs_diff_eq!(u_statistic(&zero).unwrap(), 9.0, epsilon = 1e-12);
        assert_abs_diff_eq!(u_expanded(&lift_coefficients(&zero).unwrap()), 9.0, epsilon = 1e-12);
        assert_eq!(u_statistic(&two).unwrap(), 1225.0);
        // (1 + 15.75 + 106.5625)² = 123.3125²
        assert_abs_diff_eq!(u_statistic(&big).unwrap(), 15_205.972_656_25, epsilon = 1e-8);
        assert!(u_statistic(&big).unwrap() > 35.0 * 35.0);

        assert_eq!(nine_tenths_statistic(&zero), 4.0);
        assert_eq!(nine_tenths_statistic(&two), 100.0);
        assert_abs_diff_eq!(nine_tenths_statistic(&big), 280.5625, epsilon = 1e-12);
    }

    #[test]
    fn unit_complex_rejects_non_unit() {
        assert!(UnitComplex::new(0.9, 0.0).is_err());
        assert!(UnitComplex::new(0.6, 0.8).is_ok());
    }

    proptest! {
        #[test]
        fn satake_round_trip(d_seed in any::<u64>(), ram in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(d_seed);
            let d = sample_local_data(&mut rng, 7, ram, false);
            let sp = d.satake();
            let scale = 1.0 + d.lambda.norm();
            prop_assert!((sp.lambda() - d.lambda).norm() <= 1e-12 * scale);
            prop_assert!((sp.chi() - d.chi.value()).norm() <= 1e-12);
        }

        #[test]
        fn non_ramanujan_ratio_real_positive(t in 2.0001f64..8.0, neg in any::<bool>()) {
            let d = LocalPrimeData::real(5, if neg { -t } else { t });
            let r = d.satake().ratio();
            prop_assert!(r.im.abs() < 1e-12 && r.re > 0.0);
            let (lo, hi) = if r.re < 1.0 { (r.re, 1.0 / r.re) } else { (1.0 / r.re, r.re) };
            prop_assert!(lo < 1.0 && hi > 1.0);
            for n in 1..=5u32 {
                prop_assert!(nonramanujan_growth(&d, n).unwrap() > (2 * n + 1) as f64);
            }
        }

        #[test]
        fn first_prime_power_is_lift_coefficient(seed in any::<u64>(), ram in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = sample_local_data(&mut rng, 3, ram, false);
            let sp = d.satake();
            let l = lift_coefficients(&d).unwrap();
            let sym3: Complex64 = Lift::Sym3.parameters(&sp).into_iter().sum();
            prop_assert_eq!(sym_coefficient_prime_power(&sp, Lift::Sym3, 1), sym3);
            prop_assert_eq!(sym_coefficient_prime_power(&sp, Lift::Sym3, 1), l.a_sym3);
            let adj: Complex64 = Lift::Adjoint.parameters(&sp).into_iter().sum();
            prop_assert_eq!(sym_coefficient_prime_power(&sp, Lift::Adjoint, 1), adj);
            let sym4: Complex64 = Lift::Sym4.parameters(&sp).into_iter().sum();
            prop_assert_eq!(sym_coefficient_prime_power(&sp, Lift::Sym4, 1), sym4);
            prop_assert_eq!(sym_coefficient_prime_power(&sp, Lift::Sym4, 1).re, l.a_sym4);
            prop_assert_eq!(sym_coefficient_prime_power(&sp, Lift::Standard, 1), sp.alpha + sp.beta);
        }
    }
}
