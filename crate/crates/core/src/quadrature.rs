//! Double-exponential quadrature.
//!
//! Finite intervals use the tanh-sinh rule, whose nodes cluster
//! doubly-exponentially at the endpoints, so algebraic endpoint behavior
//! (`sin^{nu+1}` zeros, `x^{-1/2}` singularities) costs nothing extra. The
//! half line `[0, inf)` uses the exp-sinh rule. Each rule halves its step
//! until two successive levels agree; finite intervals that still fail are
//! bisected. Periodic integrands over the circle use the trapezoid rule with
//! doubling, which is spectrally accurate for smooth functions.
//!
//! Every integration runs against an evaluation budget and reports
//! [`Error::BudgetExceeded`] instead of looping.

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::{Add, Mul, Sub};

use crate::error::{invalid, Error, Result};
use crate::C64;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_BUDGET: usize = 1_000_000;

const H0: f64 = 0.5;
const TMAX: f64 = 6.0;
const MAX_LEVEL: u32 = 8;
const MIN_LEVEL: u32 = 3;
const MAX_BISECTION_DEPTH: u32 = 24;

/// Values an integrand may return.
pub trait QuadValue:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(self) -> f64;
    fn is_finite_value(self) -> bool;
}

impl QuadValue for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for C64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn is_finite_value(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of integrand evaluations.
    pub budget: usize,
    /// Characteristic length of the integrand on the half line; the exp-sinh
    /// nodes are centered on it.
    pub scale: f64,
}

impl QuadratureOptions {
    /// Relative and absolute tolerance both set to `tol`.
    pub fn new(tol: f64) -> Self {
        Self {
            rel_tol: tol,
            abs_tol: tol,
            budget: DEFAULT_BUDGET,
            scale: 1.0,
        }
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol >= 0.0) {
            return Err(invalid("tol", format!("tolerances must be positive, got rel {} abs {}", self.rel_tol, self.abs_tol)));
        }
        if self.budget == 0 {
            return Err(invalid("budget", "evaluation budget must be positive"));
        }
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(invalid("scale", format!("scale must be positive, got {}", self.scale)));
        }
        Ok(())
    }

    fn accepts(&self, err: f64, value: f64) -> bool {
        err <= (self.rel_tol * value).max(self.abs_tol)
    }
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self::new(DEFAULT_TOL)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub error_estimate: f64,
    pub evaluations: usize,
}

struct Counter {
    used: usize,
    budget: usize,
}

impl Counter {
    fn spend(&mut self, n: usize) -> bool {
        self.used += n;
        self.used <= self.budget
    }
}

fn eval<T: QuadValue, F: Fn(f64) -> T>(f: &F, x: f64) -> Result<T> {
    let v = f(x);
    if v.is_finite_value() {
        Ok(v)
    } else {
        Err(Error::NonFinite("integrand"))
    }
}

/// Node and weight of the tanh-sinh rule on `[a, b]` at abscissa `t`, or
/// `None` once the node is numerically on an endpoint.
fn tanh_sinh_node(a: f64, b: f64, t: f64) -> Option<(f64, f64)> {
    let hw = 0.5 * (b - a);
    let u = FRAC_PI_2 * t.sinh();
    let e = (-2.0 * u.abs()).exp();
    let delta = hw * 2.0 * e / (1.0 + e);
    let w = hw * FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
    let x = if t > 0.0 { b - delta } else { a + delta };
    if delta == 0.0 || w == 0.0 || x <= a || x >= b {
        None
    } else {
        Some((x, w))
    }
}

/// Node and weight of the exp-sinh rule on `[0, inf)` at abscissa `t`.
fn exp_sinh_node(scale: f64, t: f64) -> Option<(f64, f64)> {
    let u = FRAC_PI_2 * t.sinh();
    let x = scale * u.exp();
    let w = x * FRAC_PI_2 * t.cosh();
    if x == 0.0 || !x.is_finite() || !w.is_finite() || w == 0.0 {
        None
    } else {
        Some((x, w))
    }
}

enum Outcome<T> {
    Converged(T, f64),
    Stalled(T, f64),
}

/// Level-doubling driver shared by both double-exponential rules.
fn de_levels<T, F, N>(
    f: &F,
    node: N,
    opts: &QuadratureOptions,
    counter: &mut Counter,
    abs_tol: f64,
) -> Result<Outcome<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
    N: Fn(f64) -> Option<(f64, f64)>,
{
    let mut h = H0;
    let jmax = (TMAX / h).ceil() as i64;
    let mut sum = T::default();
    let mut n = 0;
    for j in -jmax..=jmax {
        if let Some((x, w)) = node(j as f64 * h) {
            sum = sum + eval(f, x)? * w;
            n += 1;
        }
    }
    if !counter.spend(n) {
        return Err(budget_error(counter, sum * h, f64::INFINITY));
    }
    let mut estimate = sum * h;
    let mut err = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let jmax = (TMAX / h).ceil() as i64;
        let mut n = 0;
        let mut j = -jmax + if jmax % 2 == 0 { 1 } else { 0 };
        while j <= jmax {
            if let Some((x, w)) = node(j as f64 * h) {
                sum = sum + eval(f, x)? * w;
                n += 1;
            }
            j += 2;
        }
        let next = sum * h;
        err = (next - estimate).magnitude();
        estimate = next;
        if !counter.spend(n) {
            return Err(budget_error(counter, estimate, err));
        }
        if level >= MIN_LEVEL && err <= (opts.rel_tol * estimate.magnitude()).max(abs_tol) {
            return Ok(Outcome::Converged(estimate, err));
        }
    }
    Ok(Outcome::Stalled(estimate, err))
}

fn budget_error<T: QuadValue>(counter: &Counter, best: T, err: f64) -> Error {
    Error::BudgetExceeded {
        budget: counter.budget,
        best: best.magnitude(),
        error_estimate: err,
    }
}

fn finite_recursive<T: QuadValue, F: Fn(f64) -> T>(
    f: &F,
    a: f64,
    b: f64,
    opts: &QuadratureOptions,
    abs_tol: f64,
    depth: u32,
    counter: &mut Counter,
) -> Result<(T, f64)> {
    match de_levels(f, |t| tanh_sinh_node(a, b, t), opts, counter, abs_tol)? {
        Outcome::Converged(v, e) => Ok((v, e)),
        Outcome::Stalled(v, e) => {
            if depth >= MAX_BISECTION_DEPTH {
                return Err(budget_error(counter, v, e));
            }
            let m = 0.5 * (a + b);
            let (l, el) = finite_recursive(f, a, m, opts, 0.5 * abs_tol, depth + 1, counter)?;
            let (r, er) = finite_recursive(f, m, b, opts, 0.5 * abs_tol, depth + 1, counter)?;
            Ok((l + r, el + er))
        }
    }
}

/// `∫_a^b f(x) dx` to `max(tol |I|, tol)`.
pub fn integrate_finite<T, F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    integrate_finite_with(f, a, b, &QuadratureOptions::new(tol))
}

pub fn integrate_finite_with<T, F>(
    f: F,
    a: f64,
    b: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    opts.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::NonFinite("integrate_finite bounds"));
    }
    if !(a < b) {
        return Err(invalid("bounds", format!("need a < b, got [{a}, {b}]")));
    }
    let mut counter = Counter {
        used: 0,
        budget: opts.budget,
    };
    let (value, error_estimate) = finite_recursive(&f, a, b, opts, opts.abs_tol, 0, &mut counter)?;
    if !opts.accepts(error_estimate, value.magnitude()) {
        return Err(budget_error(&counter, value, error_estimate));
    }
    Ok(QuadratureResult {
        value,
        error_estimate,
        evaluations: counter.used,
    })
}

/// `∫_0^inf f(x) dx` for integrands decaying at least like `exp(-c sqrt(x))`.
pub fn integrate_semi_infinite<T, F>(f: F, tol: f64) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    integrate_semi_infinite_with(f, &QuadratureOptions::new(tol))
}

pub fn integrate_semi_infinite_with<T, F>(f: F, opts: &QuadratureOptions) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    opts.validate()?;
    let mut counter = Counter {
        used: 0,
        budget: opts.budget,
    };
    let scale = opts.scale;
    match de_levels(&f, |t| exp_sinh_node(scale, t), opts, &mut counter, opts.abs_tol)? {
        Outcome::Converged(value, error_estimate) => Ok(QuadratureResult {
            value,
            error_estimate,
            evaluations: counter.used,
        }),
        Outcome::Stalled(v, e) => Err(budget_error(&counter, v, e)),
    }
}

/// `(1/2pi) ∫_0^{2pi} f(theta) dtheta` by the doubling trapezoid rule.
pub fn integrate_circle<T, F>(f: F, tol: f64) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    integrate_circle_with(f, &QuadratureOptions::new(tol))
}

pub fn integrate_circle_with<T, F>(f: F, opts: &QuadratureOptions) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    opts.validate()?;
    let mut counter = Counter {
        used: 0,
        budget: opts.budget,
    };
    let mut n = 8usize;
    let mut sum = T::default();
    for k in 0..n {
        sum = sum + eval(&f, 2.0 * PI * k as f64 / n as f64)?;
    }
    counter.spend(n);
    let mut estimate = sum * (1.0 / n as f64);
    loop {
        // add the midpoints of the current grid
        for k in 0..n {
            sum = sum + eval(&f, 2.0 * PI * (k as f64 + 0.5) / n as f64)?;
        }
        let ok = counter.spend(n);
        n *= 2;
        let next = sum * (1.0 / n as f64);
        let err = (next - estimate).magnitude();
        estimate = next;
        if n >= 32 && opts.accepts(err, estimate.magnitude()) {
            return Ok(QuadratureResult {
                value: estimate,
                error_estimate: err,
                evaluations: counter.used,
            });
        }
        if !ok {
            return Err(budget_error(&counter, estimate, err));
        }
    }
}

/// `c_n(F) = (1/2pi) ∫_0^{2pi} e^{-i n theta} F(theta) dtheta`.
pub fn fourier_coefficient<F>(f: F, n: i64, tol: f64) -> Result<QuadratureResult<C64>>
where
    F: Fn(f64) -> C64,
{
    integrate_circle(|t| C64::from_polar(1.0, -(n as f64) * t) * f(t), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn finite_examples() {
        let r = integrate_finite(|x| x, 0.0, 1.0, 1e-12).unwrap();
        assert_relative_eq!(r.value, 0.5, epsilon = 1e-14);
        let r = integrate_finite(|t: f64| t.sin().powi(2), 0.0, PI, 1e-12).unwrap();
        assert_relative_eq!(r.value, FRAC_PI_2, epsilon = 1e-13);
        let r = integrate_finite(|x: f64| x.powf(-0.5), 0.0, 1.0, 1e-10).unwrap();
        assert_relative_eq!(r.value, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn semi_infinite_examples() {
        let r = integrate_semi_infinite(|x: f64| (-x).exp(), 1e-12).unwrap();
        assert_relative_eq!(r.value, 1.0, epsilon = 1e-12);
        let r = integrate_semi_infinite(|x: f64| x * (-x).exp(), 1e-12).unwrap();
        assert_relative_eq!(r.value, 1.0, epsilon = 1e-12);
        let k0 = |x: f64| {
            crate::specfun::bessel_k(crate::specfun::BesselOrder::new(0.0).unwrap(), 2.0 * x.sqrt())
                .unwrap_or(0.0)
        };
        let r = integrate_semi_infinite(k0, 1e-10).unwrap();
        assert_relative_eq!(r.value, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn circle_examples() {
        let one = |_t: f64| C64::new(1.0, 0.0);
        assert_relative_eq!(fourier_coefficient(one, 0, 1e-12).unwrap().value.re, 1.0, epsilon = 1e-14);
        let r = fourier_coefficient(|t| C64::from_polar(1.0, t), 1, 1e-12).unwrap();
        assert_relative_eq!(r.value.re, 1.0, epsilon = 1e-14);
        assert!(r.value.im.abs() < 1e-14);
        let r = fourier_coefficient(|t: f64| C64::new(t.cos(), 0.0), 1, 1e-12).unwrap();
        assert_relative_eq!(r.value.re, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn complex_integrand() {
        let r = integrate_finite(|x: f64| C64::new(x.cos(), x.sin()), 0.0, PI, 1e-12).unwrap();
        assert!(r.value.re.abs() < 1e-12);
        assert_relative_eq!(r.value.im, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn budget_is_enforced() {
        let opts = QuadratureOptions::new(1e-14).with_budget(50);
        let err = integrate_finite_with(|x: f64| x.sin(), 0.0, 1.0, &opts).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { budget: 50, .. }));
    }

    #[test]
    fn bad_inputs() {
        assert!(integrate_finite(|x| x, 1.0, 0.0, 1e-10).is_err());
        assert!(integrate_finite(|x| x, 0.0, 1.0, 0.0).is_err());
        assert!(matches!(
            integrate_finite(|_x| f64::NAN, 0.0, 1.0, 1e-10),
            Err(Error::NonFinite(_))
        ));
    }
}
