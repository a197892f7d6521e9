//! Gazeau-Klauder coherent states at `beta = 0`:
//!
//! `|z, gamma> = N(|z|^2)^{-1/2} sum_n z^n e^{-i gamma excitation(n)} / sqrt(rho_n) |n>`
//!
//! with `N(x) = sum_n x^n / rho_n = sum_n y^n / ((2nu+3)_n n!)`, `y = x/s`.
//! Because `rho_n` grows like `(n!)^2 s^n`, the series converges for every
//! complex `z`. The resolution of the identity holds with the radial weight
//! `w(x) = 2 x^{nu+1} K_{2nu+2}(2 sqrt(x/s)) / (s^{nu+2} Gamma(2nu+3))`, whose
//! moments are exactly `rho_n`.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::quadrature::{integrate_circle, integrate_semi_infinite_with, QuadratureOptions, QuadratureResult};
use crate::specfun::{bessel_i, bessel_i_scaled, bessel_k_scaled, ln_gamma_real, BesselOrder, CompensatedSum};
use crate::spectrum::{excitation, ln_rho, ModelParams};
use crate::verify::{relative_error, VerificationReport};
use crate::C64;

pub const DEFAULT_TAIL_TOL: f64 = 1e-12;
pub const DEFAULT_NMAX_CAP: usize = 400;

/// Series are cut once a term drops below this fraction of the partial sum.
const SERIES_CUTOFF: f64 = 1e-17;
const MAX_SERIES_TERMS: usize = 1_000_000;

fn check_x(x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::NonFinite("coherent: x"));
    }
    if x < 0.0 {
        return Err(Error::Domain {
            function: "normalization",
            detail: format!("x = {x} < 0"),
        });
    }
    Ok(())
}

/// `d^j/dx^j N(x) = sum_m (m+j)!/(m! rho_{m+j}) x^m`, summed term by term.
pub fn normalization_derivative(p: &ModelParams, x: f64, j: usize) -> Result<f64> {
    check_x(x)?;
    let ln_a0 = ln_factorial(j) - ln_rho(p, j);
    let mut term = ln_a0.exp();
    let mut sum = CompensatedSum::default();
    sum.add(term);
    for m in 0..MAX_SERIES_TERMS {
        let k = m + j + 1;
        let ratio = (k as f64 / (m + 1) as f64) * x / excitation(p, k);
        term *= ratio;
        sum.add(term);
        if ratio < 1.0 && term <= SERIES_CUTOFF * sum.total() {
            let total = sum.total();
            return if total.is_finite() {
                Ok(total)
            } else {
                Err(Error::Overflow("normalization series"))
            };
        }
        if !term.is_finite() {
            return Err(Error::Overflow("normalization series"));
        }
    }
    Err(Error::LossOfSignificance {
        what: "normalization series",
        detail: format!("no convergence after {MAX_SERIES_TERMS} terms at x = {x}"),
    })
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `N(x)` by its defining series.
pub fn normalization_n(p: &ModelParams, x: f64) -> Result<f64> {
    normalization_derivative(p, x, 0)
}

/// `ln N(x)`, summed in log space so it stays finite where `N` overflows.
pub fn ln_normalization_n(p: &ModelParams, x: f64) -> Result<f64> {
    check_x(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let lnx = x.ln();
    let mut lt = 0.0;
    let mut acc = LogSum::new(0.0);
    for n in 1..MAX_SERIES_TERMS {
        let e = excitation(p, n);
        lt += lnx - e.ln();
        acc.add(lt);
        if x < e && lt <= acc.ln_total() + SERIES_CUTOFF.ln() {
            return Ok(acc.ln_total());
        }
    }
    Err(Error::LossOfSignificance {
        what: "normalization series",
        detail: format!("no convergence after {MAX_SERIES_TERMS} terms at x = {x}"),
    })
}

/// Running `ln sum exp(l_i)`.
#[derive(Debug, Clone, Copy)]
struct LogSum {
    max: f64,
    rel: f64,
}

impl LogSum {
    fn new(first: f64) -> Self {
        Self { max: first, rel: 1.0 }
    }

    fn add(&mut self, l: f64) {
        if l > self.max {
            self.rel = self.rel * (self.max - l).exp() + 1.0;
            self.max = l;
        } else {
            self.rel += (l - self.max).exp();
        }
    }

    fn ln_total(&self) -> f64 {
        self.max + self.rel.ln()
    }
}

/// `N(x) = Gamma(2nu+3) y^{-(nu+1)} I_{2nu+2}(2 sqrt(y))`, `y = x/s`.
pub fn normalization_n_bessel(p: &ModelParams, x: f64) -> Result<f64> {
    check_x(x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    let nu = p.nu();
    let y = x / p.scale_s();
    let u = 2.0 * y.sqrt();
    let order = BesselOrder::new(2.0 * nu + 2.0)?;
    let ln_i = bessel_i_scaled(order, u)?.ln() + u;
    let v = (ln_gamma_real(2.0 * nu + 3.0)? - (nu + 1.0) * y.ln() + ln_i).exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow("normalization_n_bessel"))
    }
}

/// The closed form as it is usually printed,
/// `Gamma(2nu+3) (x/s)^{-(2nu+2)} I_{2nu+2}(2x/s)`. It does not equal the
/// series; kept only to quantify the discrepancy.
pub fn normalization_n_printed(p: &ModelParams, x: f64) -> Result<f64> {
    check_x(x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    let nu = p.nu();
    let y = x / p.scale_s();
    let order = BesselOrder::new(2.0 * nu + 2.0)?;
    Ok(crate::specfun::gamma_real(2.0 * nu + 3.0)? * y.powf(-(2.0 * nu + 2.0)) * bessel_i(order, 2.0 * y)?)
}

/// Largest relative deviation of the printed closed form from the series over `xs`.
pub fn printed_normalization_discrepancy(p: &ModelParams, xs: &[f64]) -> Result<VerificationReport> {
    let mut worst = (0.0f64, 0.0f64);
    for &x in xs {
        let r = relative_error(normalization_n_printed(p, x)?, normalization_n(p, x)?);
        if r > worst.0 || worst.0.is_nan() {
            worst = (r, x);
        }
    }
    Ok(VerificationReport::informational(
        "printed N(x) closed form vs series",
        worst.0,
        format!(
            "largest deviation at x = {}; the series is matched by Gamma(2nu+3) (x/s)^(-(nu+1)) I_(2nu+2)(2 sqrt(x/s))",
            worst.1
        ),
    ))
}

/// A truncated coherent state: Fock coefficients `c_0..=c_{n_max}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentState {
    params: ModelParams,
    z: C64,
    gamma: f64,
    tail_tol: f64,
    coefficients: Vec<C64>,
    ln_partial_norm: f64,
    tail_bound: f64,
}

impl CoherentState {
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn z(&self) -> C64 {
        self.z
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `x = |z|^2`.
    pub fn x(&self) -> f64 {
        self.z.norm_sqr()
    }

    pub fn n_max(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    /// `c_n`, zero beyond the truncation.
    pub fn coefficient(&self, n: usize) -> C64 {
        self.coefficients.get(n).copied().unwrap_or_default()
    }

    pub fn tail_tol(&self) -> f64 {
        self.tail_tol
    }

    /// Upper bound on `sum_{n > n_max} x^n/rho_n` relative to `N(x)`.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// `ln sum_{n <= n_max} x^n/rho_n`, the normalization actually applied.
    pub fn ln_normalization(&self) -> f64 {
        self.ln_partial_norm
    }

    /// `e^{-i t H}|z, gamma> = |z, gamma + t>`.
    pub fn evolve(&self, t: f64) -> CoherentState {
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(n, c)| c * C64::from_polar(1.0, -t * excitation(&self.params, n)))
            .collect();
        CoherentState {
            gamma: self.gamma + t,
            coefficients,
            ..self.clone()
        }
    }

    /// `<z, gamma| H |z, gamma>` in units of `s`-scaled energy: `sum excitation(n) |c_n|^2`.
    pub fn action(&self) -> f64 {
        action_identity(self)
    }
}

/// `|z, gamma>` with the default truncation cap.
pub fn make_state(p: &ModelParams, z: C64, gamma: f64, tail_tol: f64) -> Result<CoherentState> {
    make_state_with_cap(p, z, gamma, tail_tol, DEFAULT_NMAX_CAP)
}

/// `|z, gamma>` truncated at the smallest `n_max` with
/// `sum_{n >= n_max} x^n/rho_n <= tail_tol * sum_{n <= n_max} x^n/rho_n`
/// (a ratio-test bound). Including the last kept term in the bound makes
/// the action identity hold to `tail_tol` relative as well.
pub fn make_state_with_cap(p: &ModelParams, z: C64, gamma: f64, tail_tol: f64, cap: usize) -> Result<CoherentState> {
    if !(tail_tol > 0.0 && tail_tol <= 1e-6) {
        return Err(invalid("tail_tol", format!("must lie in (0, 1e-6], got {tail_tol}")));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite("make_state: z"));
    }
    if !gamma.is_finite() {
        return Err(Error::NonFinite("make_state: gamma"));
    }
    let x = z.norm_sqr();
    if x == 0.0 {
        return Ok(CoherentState {
            params: *p,
            z,
            gamma,
            tail_tol,
            coefficients: vec![C64::new(1.0, 0.0)],
            ln_partial_norm: 0.0,
            tail_bound: 0.0,
        });
    }
    let lnx = x.ln();
    // ln t_n with t_n = x^n / rho_n
    let mut lt = vec![0.0];
    let mut acc = LogSum::new(0.0);
    let mut n = 0;
    let tail_bound = loop {
        if n >= cap {
            return Err(Error::Truncation { cap, x });
        }
        let next = lt[n] + lnx - excitation(p, n + 1).ln();
        let r = x / excitation(p, n + 2);
        if r < 1.0 {
            let total = acc.ln_total();
            let beyond = (next - total).exp() / (1.0 - r);
            let last = (lt[n] - total).exp();
            if last + beyond <= tail_tol {
                break beyond;
            }
        }
        lt.push(next);
        acc.add(next);
        n += 1;
    };
    let ln_norm = acc.ln_total();
    let arg = z.arg();
    let coefficients = lt
        .iter()
        .enumerate()
        .map(|(k, l)| C64::from_polar((0.5 * (l - ln_norm)).exp(), k as f64 * arg - gamma * excitation(p, k)))
        .collect();
    Ok(CoherentState {
        params: *p,
        z,
        gamma,
        tail_tol,
        coefficients,
        ln_partial_norm: ln_norm,
        tail_bound,
    })
}

/// `<z', gamma | z, gamma>` for `a = |z, gamma>`, `b = |z', gamma>`, from the
/// series `sum (z conj(z')/s)^n / ((2nu+3)_n n!)` over `sqrt(N(|z|^2) N(|z'|^2))`.
pub fn overlap(a: &CoherentState, b: &CoherentState) -> Result<C64> {
    if a.params != b.params {
        return Err(invalid("overlap", "states belong to different models"));
    }
    if (a.gamma - b.gamma).abs() > 1e-12 * a.gamma.abs().max(1.0) {
        return Err(invalid(
            "overlap",
            format!("states carry different gamma ({} vs {})", a.gamma, b.gamma),
        ));
    }
    let p = &a.params;
    let half_ln = 0.5 * (ln_normalization_n(p, a.x())? + ln_normalization_n(p, b.x())?);
    let w = a.z * b.z.conj();
    let m = w.norm();
    if m == 0.0 {
        return Ok(C64::new((-half_ln).exp(), 0.0));
    }
    let (lnm, arg) = (m.ln(), w.arg());
    let mut lt = -half_ln;
    let mut sum = C64::new(lt.exp(), 0.0);
    let mut abs_sum = lt.exp();
    for n in 1..MAX_SERIES_TERMS {
        let e = excitation(p, n);
        lt += lnm - e.ln();
        let t = lt.exp();
        sum += C64::from_polar(t, n as f64 * arg);
        abs_sum += t;
        if m < e && t <= SERIES_CUTOFF * abs_sum {
            return Ok(sum);
        }
    }
    Err(Error::LossOfSignificance {
        what: "overlap series",
        detail: format!("no convergence after {MAX_SERIES_TERMS} terms"),
    })
}

/// `|| |z> - |z'> ||^2 = 2 (1 - Re <z'|z>)`.
pub fn label_distance_sq(a: &CoherentState, b: &CoherentState) -> Result<f64> {
    Ok(2.0 * (1.0 - overlap(a, b)?.re))
}

/// `sum_n excitation(n) |c_n|^2`, which should equal `|z|^2`.
pub fn action_identity(state: &CoherentState) -> f64 {
    state
        .coefficients
        .iter()
        .enumerate()
        .map(|(n, c)| excitation(&state.params, n) * c.norm_sqr())
        .collect::<CompensatedSum>()
        .total()
}

/// The radial weight `w(x)` solving `∫_0^inf x^n w(x) dx = rho_n`, and the
/// density of the measure `dmu = (1/pi) w(x) N(x) d^2z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureDensity {
    params: ModelParams,
    order: BesselOrder,
    ln_prefactor: f64,
}

/// Below this Bessel argument `K_m(u)` is replaced by its leading term
/// `Gamma(m)/2 (2/u)^m` (relative error `O(u^2)`).
const K_SMALL_ARGUMENT: f64 = 1e-8;

impl MeasureDensity {
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// `ln w(x)` for `x > 0`.
    pub fn ln_weight(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain {
                function: "measure weight",
                detail: format!("x = {x}"),
            });
        }
        let nu = self.params.nu();
        let u = 2.0 * (x / self.params.scale_s()).sqrt();
        let m = self.order.value();
        let ln_k = if u < K_SMALL_ARGUMENT {
            ln_gamma_real(m)? - std::f64::consts::LN_2 + m * (2.0 / u).ln()
        } else {
            bessel_k_scaled(self.order, u)?.ln() - u
        };
        Ok(self.ln_prefactor + (nu + 1.0) * x.ln() + ln_k)
    }

    /// `w(x) = 2 x^{nu+1} K_{2nu+2}(2 sqrt(x/s)) / (s^{nu+2} Gamma(2nu+3))`;
    /// at `x = 0` the limit `1/(s (2nu+2))`.
    pub fn weight(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            return Ok(weight_at_origin(&self.params));
        }
        Ok(self.ln_weight(x)?.exp())
    }

    /// `(1/pi) w(x) N(x) = 2/(pi s) I_{2nu+2}(u) K_{2nu+2}(u)`, `u = 2 sqrt(x/s)`.
    pub fn radial_density(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        let s = self.params.scale_s();
        if x == 0.0 {
            return Ok(weight_at_origin(&self.params) / PI);
        }
        let u = 2.0 * (x / s).sqrt();
        if u < K_SMALL_ARGUMENT {
            return Ok((self.ln_weight(x)?.exp()) * normalization_n(&self.params, x)? / PI);
        }
        Ok(2.0 / (PI * s) * bessel_i_scaled(self.order, u)? * bessel_k_scaled(self.order, u)?)
    }

    /// The density as usually printed,
    /// `2 s^nu / (pi x^{nu+1}) I_{2nu+2}(2x/s) K_{2nu+2}(2 sqrt(x/s))`.
    pub fn printed_radial_density(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::Domain {
                function: "printed measure density",
                detail: format!("x = {x}"),
            });
        }
        let nu = self.params.nu();
        let s = self.params.scale_s();
        let u = 2.0 * (x / s).sqrt();
        Ok(2.0 * s.powf(nu) / (PI * x.powf(nu + 1.0))
            * bessel_i(self.order, 2.0 * x / s)?
            * bessel_k_scaled(self.order, u)?
            * (-u).exp())
    }
}

pub fn measure_density(p: &ModelParams) -> Result<MeasureDensity> {
    let nu = p.nu();
    let order = BesselOrder::new(2.0 * nu + 2.0)?;
    let ln_prefactor = std::f64::consts::LN_2 - (nu + 2.0) * p.scale_s().ln() - ln_gamma_real(2.0 * nu + 3.0)?;
    Ok(MeasureDensity {
        params: *p,
        order,
        ln_prefactor,
    })
}

/// `w(0+) = 1/(s (2nu+2))`.
pub fn weight_at_origin(p: &ModelParams) -> f64 {
    1.0 / (p.scale_s() * (2.0 * p.nu() + 2.0))
}

/// Where `x^n w(x)` peaks: `s (n+nu+1)^2`.
fn moment_scale(p: &ModelParams, n: usize) -> f64 {
    let k = n as f64 + p.nu() + 1.0;
    p.scale_s() * k * k
}

/// `∫_0^inf x^n w(x) dx` by quadrature.
pub fn moment(p: &ModelParams, n: usize, tol: f64) -> Result<QuadratureResult<f64>> {
    moment_with(p, n, &QuadratureOptions::new(tol))
}

/// As [`moment`], with explicit quadrature options (the node scale is
/// always set from `n`).
pub fn moment_with(p: &ModelParams, n: usize, opts: &QuadratureOptions) -> Result<QuadratureResult<f64>> {
    let r = normalized_moment_with(p, n, |_| 1.0, opts)?;
    let scale = ln_rho(p, n).exp();
    Ok(QuadratureResult {
        value: r.value * scale,
        error_estimate: r.error_estimate * scale,
        evaluations: r.evaluations,
    })
}

/// `(1/rho_n) ∫_0^inf f(x) x^n w(x) dx`. The weight is assembled in log
/// space and divided by `rho_n` before integration, so the quadrature sees
/// an O(1) integrand for every `n`.
pub fn normalized_moment_with<F>(p: &ModelParams, n: usize, f: F, opts: &QuadratureOptions) -> Result<QuadratureResult<f64>>
where
    F: Fn(f64) -> f64,
{
    let w = measure_density(p)?;
    let ln_rho_n = ln_rho(p, n);
    let nf = n as f64;
    let opts = opts.with_scale(moment_scale(p, n));
    integrate_semi_infinite_with(
        |x| {
            if x <= 0.0 {
                return if n == 0 { f(0.0) * weight_at_origin(p) } else { 0.0 };
            }
            match w.ln_weight(x) {
                Ok(l) => f(x) * (nf * x.ln() + l - ln_rho_n).exp(),
                Err(_) => f64::NAN,
            }
        },
        &opts,
    )
}

/// `∫_0^inf t^mu K_order(a t) dt = 2^{mu-1} a^{-mu-1} Gamma((1+mu+order)/2) Gamma((1+mu-order)/2)`,
/// valid for `mu + 1 > |order|`, `a > 0`.
pub fn bessel_k_power_integral(mu: f64, order: f64, a: f64) -> Result<f64> {
    if !(mu + 1.0 > order.abs()) || !(a > 0.0) {
        return Err(invalid(
            "bessel_k_power_integral",
            format!("need mu + 1 > |order| and a > 0 (mu = {mu}, order = {order}, a = {a})"),
        ));
    }
    let l = (mu - 1.0) * std::f64::consts::LN_2 - (mu + 1.0) * a.ln()
        + ln_gamma_real(0.5 * (1.0 + mu + order))?
        + ln_gamma_real(0.5 * (1.0 + mu - order))?;
    Ok(l.exp())
}

/// `ln ∫_0^inf x^mu w(x) dx = ln(s^mu Gamma(2nu+3+mu) Gamma(1+mu) / Gamma(2nu+3))`
/// for real `mu > -1`: the analytic continuation of `ln rho_n`.
pub fn ln_mellin_moment(p: &ModelParams, mu: f64) -> Result<f64> {
    if !(mu > -1.0) {
        return Err(invalid("mu", format!("must be > -1, got {mu}")));
    }
    let a = 2.0 * p.nu() + 3.0;
    Ok(mu * p.scale_s().ln() + ln_gamma_real(a + mu)? + ln_gamma_real(1.0 + mu)? - ln_gamma_real(a)?)
}

/// `∫ x^n w(x) dx` from the `K` power integral after `x = s u^2/4`:
/// `2/(s^{nu+2} Gamma(2nu+3)) (s/4)^{n+nu+1} (s/2) ∫ u^{2n+2nu+3} K_{2nu+2}(u) du`.
pub fn moment_closed_form(p: &ModelParams, n: usize) -> Result<f64> {
    let nu = p.nu();
    let s = p.scale_s();
    let e = n as f64 + nu + 1.0;
    let integral = bessel_k_power_integral(2.0 * e + 1.0, 2.0 * nu + 2.0, 1.0)?;
    let pre = std::f64::consts::LN_2 - (nu + 2.0) * s.ln() - ln_gamma_real(2.0 * nu + 3.0)? + e * (0.25 * s).ln()
        + (0.5 * s).ln();
    Ok(pre.exp() * integral)
}

/// `<n| ∫ dmu |z><z| |m>`: the angular integral gives `delta_{nm}` (checked
/// numerically) and the radial part is `moment(n)/rho_n`.
pub fn verify_resolution_of_identity(p: &ModelParams, n: usize, m: usize, tol: f64) -> Result<VerificationReport> {
    let k = n as f64 - m as f64;
    let angular = integrate_circle(|t| C64::from_polar(1.0, k * t), 1e-14)?.value;
    let name = format!("resolution of identity <{n}|.|{m}>");
    if n != m {
        return Ok(VerificationReport::check(name, angular.norm(), tol).with_detail("angular orthogonality"));
    }
    let radial = moment(p, n, 0.01 * tol)?.value;
    let value = angular.re * (radial.ln() - ln_rho(p, n)).exp();
    Ok(VerificationReport::check(name, (value - 1.0).abs(), tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_k;
    use approx::assert_relative_eq;

    fn unit(nu: f64) -> ModelParams {
        ModelParams::unit(nu, 0.0).unwrap()
    }

    #[test]
    fn normalization_examples() {
        let p = unit(0.0);
        assert_eq!(normalization_n(&p, 0.0).unwrap(), 1.0);
        // 8 terms of sum 1/((3)_n n!)
        let mut poch = 1.0;
        let mut fact = 1.0;
        let mut eight = 0.0;
        for n in 0..8 {
            if n > 0 {
                poch *= 2.0 + n as f64;
                fact *= n as f64;
            }
            eight += 1.0 / (poch * fact);
        }
        assert_relative_eq!(normalization_n(&p, 1.0).unwrap(), eight, max_relative = 1e-9);
        assert_relative_eq!(normalization_n(&p, 1.0).unwrap(), 1.377896895397476, max_relative = 1e-14);
        let i2 = bessel_i(BesselOrder::new(2.0).unwrap(), 2.0).unwrap();
        assert_relative_eq!(normalization_n(&p, 1.0).unwrap(), 2.0 * i2, max_relative = 1e-13);
        assert_relative_eq!(normalization_derivative(&p, 1.0, 1).unwrap(), 0.4254799184797053, max_relative = 1e-13);
    }

    #[test]
    fn log_series_matches_direct_series() {
        let p = ModelParams::new(1.3, 0.0, 0.7, 1.0).unwrap();
        for &x in &[1e-3, 0.5, 3.0, 40.0, 400.0] {
            assert_relative_eq!(
                ln_normalization_n(&p, x).unwrap(),
                normalization_n(&p, x).unwrap().ln(),
                max_relative = 1e-13
            );
        }
        // far past f64 overflow of N itself
        let big = ln_normalization_n(&p, 1e8).unwrap();
        assert!(big.is_finite() && big > 700.0);
    }

    #[test]
    fn printed_closed_form_differs() {
        let p = unit(0.0);
        let r = printed_normalization_discrepancy(&p, &[0.5, 1.0, 2.0]).unwrap();
        assert!(r.informational && r.residual > 0.1);
    }

    #[test]
    fn zero_state_and_truncation() {
        let p = unit(0.5);
        let s = make_state(&p, C64::new(0.0, 0.0), 0.3, 1e-12).unwrap();
        assert_eq!(s.coefficients(), &[C64::new(1.0, 0.0)]);
        assert!(make_state(&p, C64::new(1.0, 0.0), 0.0, 1e-3).is_err());
        assert!(matches!(
            make_state_with_cap(&p, C64::new(100.0, 0.0), 0.0, 1e-12, 20),
            Err(Error::Truncation { cap: 20, .. })
        ));
    }

    #[test]
    fn weight_limits_and_small_argument_branch() {
        let p = ModelParams::new(0.7, 0.0, 1.5, 1.0).unwrap();
        let w = measure_density(&p).unwrap();
        assert_relative_eq!(w.weight(1e-20).unwrap(), weight_at_origin(&p), max_relative = 1e-12);
        // both sides of the branch switch
        let x = 0.25 * 1.5 * K_SMALL_ARGUMENT * K_SMALL_ARGUMENT;
        assert_relative_eq!(w.weight(x * 0.999).unwrap(), w.weight(x * 1.001).unwrap(), max_relative = 1e-6);
        // direct formula at a moderate point
        let x = 2.0;
        let u = 2.0 * (x / 1.5f64).sqrt();
        let direct = 2.0 * x.powf(1.7) / (1.5f64.powf(2.7) * crate::specfun::gamma_real(4.4).unwrap())
            * bessel_k(BesselOrder::new(3.4).unwrap(), u).unwrap();
        assert_relative_eq!(w.weight(x).unwrap(), direct, max_relative = 1e-12);
    }

    #[test]
    fn k_power_integral_examples() {
        // ∫ t K_0(t) dt = 1
        assert_relative_eq!(bessel_k_power_integral(1.0, 0.0, 1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert!(bessel_k_power_integral(0.5, 2.0, 1.0).is_err());
    }
}
