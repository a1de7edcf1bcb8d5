//! Linear delay differential equations `y'(u) = a(u)·y(u) + b(u)·y(u − 1)`.
//!
//! [`solve`] integrates by the method of steps with a fixed classical RK4 step
//! `h = 1/m`, so `u − 1` always lands on a stored node at full steps. Delayed
//! values at half steps come from the cubic Hermite interpolant of the stored
//! `(y, y')`, or from the analytic history while `u − 1` is still inside it.
//!
//! Two instances are provided: the sieve density `σ(u)` (`σ = u²` on `(0, 1]`,
//! `(u⁻²σ)' = −4σ(u−1)/u³`) and the Buchstab function `ω(u)` (`uω = 1` on
//! `[1, 2]`, `(uω)' = ω(u−1)`).

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::special::dilog;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Default step, `1/10000`.
pub const DEFAULT_STEP: f64 = 1e-4;

/// Largest grid `solve` will allocate.
pub const GRID_NODE_GUARD: u64 = 100_000_000;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Clone)]
pub struct DelayOdeProblem {
    pub a: RealFn,
    pub b: RealFn,
    /// Known solution on `[u_start − 1, u_start]`.
    pub history: RealFn,
    pub history_derivative: RealFn,
    pub u_start: f64,
}

impl fmt::Debug for DelayOdeProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DelayOdeProblem").field("u_start", &self.u_start).finish_non_exhaustive()
    }
}

impl DelayOdeProblem {
    /// Right-hand side `a(u)·y + b(u)·delayed`.
    pub fn rhs(&self, u: f64, y: f64, delayed: f64) -> f64 {
        (self.a)(u) * y + (self.b)(u) * delayed
    }
}

/// `σ`: history `u²` on `(0, 1]`; `σ' = (2/u)σ − (4/u)σ(u−1)` for `u > 1`,
/// the product-rule expansion of `(u⁻²σ)' = −4σ(u−1)/u³`.
pub fn sigma_problem() -> DelayOdeProblem {
    DelayOdeProblem {
        a: Arc::new(|u| 2.0 / u),
        b: Arc::new(|u| -4.0 / u),
        history: Arc::new(|u| u * u),
        history_derivative: Arc::new(|u| 2.0 * u),
        u_start: 1.0,
    }
}

/// `ω`: history `1/u` on `[1, 2]`; `ω' = −ω/u + ω(u−1)/u` for `u > 2`,
/// the product-rule expansion of `(uω)' = ω(u−1)`.
pub fn buchstab_problem() -> DelayOdeProblem {
    DelayOdeProblem {
        a: Arc::new(|u| -1.0 / u),
        b: Arc::new(|u| 1.0 / u),
        history: Arc::new(|u| 1.0 / u),
        history_derivative: Arc::new(|u| -1.0 / (u * u)),
        u_start: 2.0,
    }
}

/// Uniform-node solution covering `[u_start − 1, u_end]`, history included.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionGrid {
    first: f64,
    steps_per_unit: usize,
    y: Vec<f64>,
    dy: Vec<f64>,
    /// Derivative of the history at `u_start` (the stored one is the ODE's).
    seam_left_dy: f64,
}

impl SolutionGrid {
    pub fn u_start(&self) -> f64 {
        self.first
    }

    pub fn u_end(&self) -> f64 {
        self.u_at(self.y.len() - 1)
    }

    pub fn h(&self) -> f64 {
        1.0 / self.steps_per_unit as f64
    }

    pub fn steps_per_unit(&self) -> usize {
        self.steps_per_unit
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn u_at(&self, i: usize) -> f64 {
        self.first + i as f64 / self.steps_per_unit as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn derivatives(&self) -> &[f64] {
        &self.dy
    }

    /// `(u, y, y')` for every node.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.len()).map(move |i| (self.u_at(i), self.y[i], self.dy[i]))
    }

    /// Cubic Hermite interpolant of the stored `(y, y')`.
    pub fn eval(&self, u: f64) -> Result<f64> {
        let end = self.u_end();
        if !(self.first..=end).contains(&u) {
            return Err(Error::Range(format!("u = {u} outside grid [{}, {end}]", self.first)));
        }
        let m = self.steps_per_unit as f64;
        let pos = (u - self.first) * m;
        let i = (pos.floor() as usize).min(self.len() - 2);
        let t = pos - i as f64;
        let dy0 = self.dy[i];
        let dy1 = if i + 1 == self.steps_per_unit { self.seam_left_dy } else { self.dy[i + 1] };
        Ok(hermite(self.y[i], dy0, self.y[i + 1], dy1, 1.0 / m, t))
    }

    /// `u,y` CSV, one row per node, `digits` significant digits.
    pub fn to_csv(&self, digits: usize) -> String {
        use crate::numfmt::format_sig;
        let mut out = String::from("u,y\n");
        for (u, y, _) in self.nodes() {
            out.push_str(&format_sig(u, digits));
            out.push(',');
            out.push_str(&format_sig(y, digits));
            out.push('\n');
        }
        out
    }
}

fn hermite(y0: f64, dy0: f64, y1: f64, dy1: f64, h: f64, t: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    h00 * y0 + h10 * h * dy0 + h01 * y1 + h11 * h * dy1
}

/// `h` as `1/m`, accepted only when `m·h = 1` to within rounding.
pub fn steps_per_unit(h: f64) -> Result<usize> {
    if !(h > 0.0 && h <= 1.0) {
        return Err(Error::StepSizeInvalid(h));
    }
    let m = (1.0 / h).round();
    if (m * h - 1.0).abs() > 1e-12 {
        return Err(Error::StepSizeInvalid(h));
    }
    Ok(m as usize)
}

/// Method-of-steps RK4 integration from `problem.u_start` to `u_end` (rounded up
/// to the next node). The grid also carries the history nodes on
/// `[u_start − 1, u_start]`.
pub fn solve(problem: &DelayOdeProblem, u_end: f64, h: f64) -> Result<SolutionGrid> {
    let m = steps_per_unit(h)?;
    if !(u_end >= problem.u_start) {
        return Err(Error::Range(format!("u_end = {u_end} before u_start = {}", problem.u_start)));
    }
    let hf = 1.0 / m as f64;
    let steps = ((u_end - problem.u_start) * m as f64 - 1e-9).ceil().max(0.0) as usize;
    let first = problem.u_start - 1.0;
    let u_at = |i: usize| first + i as f64 / m as f64;
    let total = m.saturating_add(steps).saturating_add(1);
    if total as u64 > GRID_NODE_GUARD {
        return Err(Error::LimitExceeded { limit: total as u64, guard: GRID_NODE_GUARD });
    }
    let mut y = Vec::with_capacity(total);
    let mut dy = Vec::with_capacity(total);

    for i in 0..m {
        let u = u_at(i);
        y.push((problem.history)(u));
        dy.push((problem.history_derivative)(u));
    }
    let y_seam = (problem.history)(problem.u_start);
    y.push(y_seam);
    dy.push(problem.rhs(problem.u_start, y_seam, (problem.history)(first)));
    let seam_left_dy = (problem.history_derivative)(problem.u_start);

    for i in m..m + steps {
        let u = u_at(i);
        let mid = u + 0.5 * hf;
        let next = u_at(i + 1);
        let j = i - m;
        let delayed_mid = if j < m {
            // u − 1 + h/2 still inside the history segment
            (problem.history)(u_at(j) + 0.5 * hf)
        } else {
            0.5 * (y[j] + y[j + 1]) + hf * (dy[j] - dy[j + 1]) / 8.0
        };
        let delayed_next = y[j + 1];
        let y0 = y[i];
        let k1 = dy[i];
        let a_mid = (problem.a)(mid);
        let b_mid = (problem.b)(mid) * delayed_mid;
        let k2 = a_mid * (y0 + 0.5 * hf * k1) + b_mid;
        let k3 = a_mid * (y0 + 0.5 * hf * k2) + b_mid;
        let k4 = (problem.a)(next) * (y0 + hf * k3) + (problem.b)(next) * delayed_next;
        let y1 = y0 + hf / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        y.push(y1);
        dy.push(problem.rhs(next, y1, delayed_next));
    }

    Ok(SolutionGrid { first, steps_per_unit: m, y, dy, seam_left_dy })
}

/// `σ(u) = 7u² − 8u + 2 − 4u² ln u` on `[1, 2]`.
pub fn sigma_closed_12(u: f64) -> Result<f64> {
    if !(1.0..=2.0).contains(&u) {
        return Err(Error::Domain(format!("u = {u} outside [1, 2]")));
    }
    Ok(7.0 * u * u - 8.0 * u + 2.0 - 4.0 * u * u * u.ln())
}

/// Dilogarithm closed form of `σ` on `[2, 3]`.
pub fn sigma_closed_23(u: f64) -> Result<f64> {
    if !(2.0..=3.0).contains(&u) {
        return Err(Error::Domain(format!("u = {u} outside [2, 3]")));
    }
    let u2 = u * u;
    let l1 = (u - 1.0).ln();
    let l = u.ln();
    Ok(16.0 * u2 * dilog(1.0 - u)? + 4.0 * PI * PI * u2 / 3.0 + 35.0 * u2 - 24.0 * u2 * l1
        + 16.0 * u2 * l1 * l
        - 4.0 * u2 * l
        - 80.0 * u
        + 32.0 * u * l1
        - 8.0 * l1
        + 34.0)
}

/// Smallest zero `u₀` of `σ` and the exponent `1/u₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaConstants {
    pub u0: f64,
    pub exponent: f64,
}

impl SigmaConstants {
    pub fn new(u0: f64) -> Result<Self> {
        if !(u0 > 1.0) {
            return Err(Error::Domain(format!("u0 = {u0} must exceed 1")));
        }
        Ok(SigmaConstants { u0, exponent: 1.0 / u0 })
    }
}

/// First sign change of the grid solution after its leading zeros, refined by
/// bisection on the Hermite interpolant.
pub fn smallest_zero(grid: &SolutionGrid) -> Result<SigmaConstants> {
    if grid.u_end() < 4.0 {
        return Err(Error::Range(format!("grid ends at {} < 4", grid.u_end())));
    }
    let ys = grid.values();
    let no_zero = || Error::NoZeroFound { from: grid.u_start(), to: grid.u_end() };
    let start = ys.iter().position(|&v| v != 0.0).ok_or_else(no_zero)?;
    let sign = ys[start].signum();
    let k = (start + 1..ys.len()).find(|&i| ys[i] * sign <= 0.0).ok_or_else(no_zero)?;
    if ys[k] == 0.0 {
        return SigmaConstants::new(grid.u_at(k));
    }
    let (mut lo, mut hi) = (grid.u_at(k - 1), grid.u_at(k));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = grid.eval(mid)?;
        if v == 0.0 {
            return SigmaConstants::new(mid);
        }
        if v * sign > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    SigmaConstants::new(0.5 * (lo + hi))
}

/// Solves the σ problem to `u_end` with step `h` and locates its first zero.
pub fn sigma_constants(h: f64) -> Result<SigmaConstants> {
    smallest_zero(&solve(&sigma_problem(), 4.0, h)?)
}

/// `1/(1 + δ)`: exponent of `y` in terms of `t_φ` when `z = y^δ`, `x = y^{1+δ}`.
pub fn section2_exponent(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 0.375) {
        return Err(Error::Domain(format!("delta = {delta} outside (0, 3/8)")));
    }
    Ok(1.0 / (1.0 + delta))
}

/// `N²(1 + |t|)²`, upper bound for the analytic conductor of the adjoint lift.
pub fn conductor_bound(level: u64, t: f64) -> f64 {
    let base = level as f64 * (1.0 + t.abs());
    base * base
}

/// `Q^{1/(2u₀)} = (N(1 + |t|))^{1/u₀}` with the implied constant set to 1.
pub fn ramanujan_prime_bound(level: u64, t: f64, constants: &SigmaConstants) -> Result<f64> {
    if level == 0 {
        return Err(Error::Domain("level must be positive".into()));
    }
    Ok(conductor_bound(level, t).powf(0.5 * constants.exponent))
}

/// `σ(u)` on `(0, u_end]`: exact `u²` on `(0, 1]`, solved grid beyond.
#[derive(Debug, Clone)]
pub struct Sigma {
    grid: SolutionGrid,
}

impl Sigma {
    pub fn new(u_end: f64, h: f64) -> Result<Self> {
        Ok(Sigma { grid: solve(&sigma_problem(), u_end.max(1.0), h)? })
    }

    pub fn grid(&self) -> &SolutionGrid {
        &self.grid
    }

    pub fn eval(&self, u: f64) -> Result<f64> {
        if !(u > 0.0) {
            return Err(Error::Domain(format!("σ undefined at u = {u}")));
        }
        if u <= 1.0 {
            return Ok(u * u);
        }
        self.grid.eval(u)
    }
}

/// Buchstab `ω(u)` for `u ≥ 1`: exact `1/u` on `[1, 2]`, solved grid to `u_end`,
/// and the limit `e^{−γ}` past it (the difference decays faster than `u^{−u}`).
#[derive(Debug, Clone)]
pub struct Buchstab {
    grid: SolutionGrid,
}

impl Buchstab {
    pub const DEFAULT_END: f64 = 20.0;

    pub fn new(u_end: f64, h: f64) -> Result<Self> {
        Ok(Buchstab { grid: solve(&buchstab_problem(), u_end.max(2.0), h)? })
    }

    pub fn grid(&self) -> &SolutionGrid {
        &self.grid
    }

    pub fn eval(&self, u: f64) -> Result<f64> {
        if !(u >= 1.0) {
            return Err(Error::Domain(format!("ω undefined at u = {u}")));
        }
        if u <= 2.0 {
            return Ok(1.0 / u);
        }
        if u > self.grid.u_end() {
            return Ok((-EULER_GAMMA).exp());
        }
        self.grid.eval(u)
    }
}

impl Default for Buchstab {
    fn default() -> Self {
        Buchstab::new(Self::DEFAULT_END, DEFAULT_STEP).expect("default step divides 1")
    }
}
