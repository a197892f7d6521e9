//! Modified Bessel functions `I_m(x)` and `K_m(x)` of real order `m >= 0` and
//! real argument `x`.
//!
//! `I` is summed from its power series for `x <= SERIES_CROSSOVER`. Above the
//! crossover, and for `K` everywhere, Temme's method is used: the ratio
//! `I'/I` from a continued fraction, `K_mu, K_{mu+1}` for `|mu| <= 1/2` from
//! Temme's series (`x < 2`) or Steed's continued fraction (`x >= 2`), the
//! Wronskian to recover `I_mu`, and stable recurrences in the order. Integer
//! orders need no special casing: Temme's series is written in terms of
//! `sinh(mu d)/(mu d)` and `pi mu / sin(pi mu)`, both regular at `mu = 0`.

use std::f64::consts::PI;

use super::gamma::{ln_gamma_real, rgamma_real, temme_gammas};
use crate::error::{invalid, Error, Result};

/// Below this argument `I_m` comes from the power series.
pub const SERIES_CROSSOVER: f64 = 30.0;

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAXIT: usize = 100_000;
const TEMME_XMIN: f64 = 2.0;
// ln(f64::MAX) with a little headroom
const EXP_LIMIT: f64 = 709.0;

/// A nonnegative, finite Bessel order.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(order: f64) -> Result<Self> {
        if !order.is_finite() || order < 0.0 {
            return Err(invalid("order", format!("Bessel order must be finite and >= 0, got {order}")));
        }
        Ok(Self(order))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for BesselOrder {
    type Error = Error;

    fn try_from(order: f64) -> Result<Self> {
        Self::new(order)
    }
}

fn check_arg(function: &'static str, x: f64, allow_zero: bool) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::NonFinite(function));
    }
    if x < 0.0 || (!allow_zero && x == 0.0) {
        return Err(Error::Domain {
            function,
            detail: format!("x = {x}"),
        });
    }
    Ok(())
}

/// `I_m(x)`.
pub fn bessel_i(m: BesselOrder, x: f64) -> Result<f64> {
    check_arg("bessel_i", x, true)?;
    if x > EXP_LIMIT {
        return Err(Error::Overflow("bessel_i"));
    }
    if x <= SERIES_CROSSOVER {
        return i_series(m.0, x, false);
    }
    let (i_scaled, _) = bessel_ik_scaled(m.0, x)?;
    let v = i_scaled * x.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow("bessel_i"))
    }
}

/// `e^{-x} I_m(x)`.
pub fn bessel_i_scaled(m: BesselOrder, x: f64) -> Result<f64> {
    check_arg("bessel_i_scaled", x, true)?;
    if x <= SERIES_CROSSOVER {
        return i_series(m.0, x, true);
    }
    Ok(bessel_ik_scaled(m.0, x)?.0)
}

/// `K_m(x)` for `x > 0`. Underflows to zero for very large `x`; use
/// [`bessel_k_scaled`] there.
pub fn bessel_k(m: BesselOrder, x: f64) -> Result<f64> {
    check_arg("bessel_k", x, false)?;
    let (_, k_scaled) = bessel_ik_scaled(m.0, x)?;
    let v = k_scaled * (-x).exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow("bessel_k"))
    }
}

/// `e^{x} K_m(x)` for `x > 0`.
pub fn bessel_k_scaled(m: BesselOrder, x: f64) -> Result<f64> {
    check_arg("bessel_k_scaled", x, false)?;
    Ok(bessel_ik_scaled(m.0, x)?.1)
}

/// `K_m(x) = (pi/2) (I_{-m}(x) - I_m(x)) / sin(m pi)` evaluated literally,
/// with both `I` from their power series. Only meaningful for non-integer
/// `m` and moderate `x` (the difference cancels like `e^{-2x}`).
pub fn bessel_k_from_i_difference(m: f64, x: f64) -> Result<f64> {
    check_arg("bessel_k_from_i_difference", x, false)?;
    let s = (m * PI).sin();
    if m.fract() == 0.0 || s == 0.0 {
        return Err(Error::Domain {
            function: "bessel_k_from_i_difference",
            detail: format!("integer order {m}"),
        });
    }
    Ok(0.5 * PI * (i_series_signed_order(-m, x) - i_series_signed_order(m, x)) / s)
}

/// Power series of `I_order(x)` for any real order (negative orders use the
/// reciprocal Gamma function, so integer negative orders are handled).
pub fn i_series_signed_order(order: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    let mut sum = 0.0;
    let mut k = 0usize;
    let mut power = half.powf(order);
    let mut kfact = 1.0;
    loop {
        let term = power * rgamma_real(k as f64 + order + 1.0) / kfact;
        sum += term;
        if k > 2 && term.abs() <= EPS * sum.abs() {
            break;
        }
        k += 1;
        if k > 500 {
            break;
        }
        power *= q;
        kfact *= k as f64;
    }
    sum
}

fn i_series(m: f64, x: f64, scaled: bool) -> Result<f64> {
    if x == 0.0 {
        return Ok(if m == 0.0 { 1.0 } else { 0.0 });
    }
    let half = 0.5 * x;
    let mut ln_pref = m * half.ln() - ln_gamma_real(m + 1.0)?;
    if scaled {
        ln_pref -= x;
    }
    let q = half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    while term > EPS * sum {
        k += 1.0;
        term *= q / (k * (k + m));
        sum += term;
    }
    let v = ln_pref.exp() * sum;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow("bessel_i"))
    }
}

/// Above `ASYMPTOTIC_FACTOR * (nu^2 + 1)` the Hankel expansions are used.
const ASYMPTOTIC_FACTOR: f64 = 1e4;

/// Hankel expansions of `e^{-x} I_nu(x)` and `e^{x} K_nu(x)` for `x >> nu^2`.
fn bessel_ik_asymptotic(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let (mut si, mut sk) = (1.0, 1.0);
    for k in 1..30 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        sk += term;
        si += if k % 2 == 1 { -term } else { term };
        if term.abs() < EPS * 1e-1 {
            break;
        }
    }
    (si / (2.0 * PI * x).sqrt(), sk * (PI / (2.0 * x)).sqrt())
}

/// `(e^{-x} I_nu(x), e^{x} K_nu(x))` by Temme's method.
fn bessel_ik_scaled(nu: f64, x: f64) -> Result<(f64, f64)> {
    if x > ASYMPTOTIC_FACTOR * nu.mul_add(nu, 1.0) {
        return Ok(bessel_ik_asymptotic(nu, x));
    }
    let nl = (nu + 0.5).floor() as usize;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;

    // continued fraction for I'_nu / I_nu
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..MAXIT {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::LossOfSignificance {
            what: "bessel continued fraction",
            detail: format!("no convergence for nu = {nu}, x = {x}"),
        });
    }

    // downward recurrence to order mu, unnormalized
    let mut ril = FPMIN;
    let mut ripl = h * ril;
    let mut ril1 = ril;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
        if ril.abs() > 1e250 {
            ril *= 1e-250;
            ripl *= 1e-250;
            ril1 *= 1e-250;
        }
    }
    let f = ripl / ril;

    let (rkmu, rk1) = if x < TEMME_XMIN {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let e = e.exp();
        let mut p = 0.5 * e / gampl;
        let mut q = 0.5 / (e * gammi);
        let mut c = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        let mut converged = false;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c *= dd / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = c * ff;
            sum += del;
            let del1 = c * (p - fi * ff);
            sum1 += del1;
            if del.abs() < sum.abs() * EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::LossOfSignificance {
                what: "Temme series",
                detail: format!("no convergence for nu = {nu}, x = {x}"),
            });
        }
        let ex = x.exp();
        (sum * ex, sum1 * xi2 * ex)
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut h = d;
        let mut delh = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - xmu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        let mut converged = false;
        for i in 2..MAXIT {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::LossOfSignificance {
                what: "Steed continued fraction",
                detail: format!("no convergence for nu = {nu}, x = {x}"),
            });
        }
        let h = a1 * h;
        let rkmu = (PI / (2.0 * x)).sqrt() / s;
        let rk1 = rkmu * (xmu + x + 0.5 - h) * xi;
        (rkmu, rk1)
    };

    let rkmup = xmu * xi * rkmu - rk1;
    let rimu = xi / (f * rkmu - rkmup);
    let ri = rimu * ril1 / ril;

    let mut rkmu = rkmu;
    let mut rk1 = rk1;
    for i in 1..=nl {
        let rktemp = (xmu + i as f64) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = rktemp;
    }
    if !rkmu.is_finite() || !ri.is_finite() {
        return Err(Error::Overflow("bessel_k"));
    }
    Ok((ri, rkmu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ord(m: f64) -> BesselOrder {
        BesselOrder::new(m).unwrap()
    }

    // independent oracle: direct truncated power series
    fn i_truncated(m: f64, x: f64, terms: usize) -> f64 {
        (0..terms)
            .map(|k| {
                (0.5 * x).powf(2.0 * k as f64 + m)
                    / (crate::specfun::gamma_real(k as f64 + 1.0).unwrap()
                        * crate::specfun::gamma_real(k as f64 + m + 1.0).unwrap())
            })
            .sum()
    }

    #[test]
    fn asymptotic_branch_is_continuous() {
        for &m in &[0.0, 0.5, 2.0, 6.6] {
            // both methods at the switch point
            let edge = ASYMPTOTIC_FACTOR * (m * m + 1.0);
            let (i_lo, k_lo) = bessel_ik_scaled(m, edge).unwrap();
            let (i_hi, k_hi) = bessel_ik_asymptotic(m, edge);
            assert_relative_eq!(i_lo, i_hi, max_relative = 1e-12);
            assert_relative_eq!(k_lo, k_hi, max_relative = 1e-12);
        }
        let k = bessel_k_scaled(ord(2.0), 1e100).unwrap();
        assert_relative_eq!(k, (PI / 2e100).sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn i_examples() {
        assert_eq!(bessel_i(ord(0.0), 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(ord(2.0), 0.0).unwrap(), 0.0);
        // 5-term and 25-term truncated series oracles
        let oracle = i_truncated(2.0, 0.2, 5);
        assert_relative_eq!(oracle, 0.005_016_687_513_894_678, max_relative = 1e-15);
        assert_relative_eq!(bessel_i(ord(2.0), 0.2).unwrap(), oracle, max_relative = 1e-14);
        let oracle = i_truncated(2.0, 2.0, 25);
        assert_relative_eq!(oracle, 0.688_948_447_698_738_2, max_relative = 1e-14);
        assert_relative_eq!(bessel_i(ord(2.0), 2.0).unwrap(), oracle, max_relative = 1e-14);
    }

    #[test]
    fn i_is_continuous_across_the_crossover() {
        for &m in &[0.0, 0.5, 2.0, 4.6, 11.3] {
            let below = bessel_i_scaled(ord(m), SERIES_CROSSOVER).unwrap();
            let above = bessel_ik_scaled(m, SERIES_CROSSOVER).unwrap().0;
            assert_relative_eq!(below, above, max_relative = 1e-13);
        }
    }

    #[test]
    fn k_examples() {
        // half-integer closed form
        let exact = (PI / 2.0).sqrt() * (-1.0f64).exp();
        assert_relative_eq!(bessel_k(ord(0.5), 1.0).unwrap(), exact, max_relative = 1e-14);
        assert_relative_eq!(exact, 0.461_068_504_447_894_6, max_relative = 1e-14);
        for &x in &[0.01, 0.7, 3.0, 25.0] {
            let exact = (PI / (2.0 * x)).sqrt() * (-x).exp();
            assert_relative_eq!(bessel_k(ord(0.5), x).unwrap(), exact, max_relative = 1e-14);
            let exact15 = exact * (1.0 + 1.0 / x);
            assert_relative_eq!(bessel_k(ord(1.5), x).unwrap(), exact15, max_relative = 1e-14);
        }
        assert!(bessel_k(ord(1.0), 0.0).is_err());
        assert!(bessel_k(ord(1.0), -1.0).is_err());
    }

    #[test]
    fn k2_matches_integral_representation() {
        // K_2(1) = ∫_0^∞ e^{-cosh t} cosh(2t) dt, by a fine trapezoid sum
        let h = 1e-3;
        let oracle: f64 = (0..20_000)
            .map(|i| {
                let t = i as f64 * h;
                let w = if i == 0 { 0.5 } else { 1.0 };
                w * (-t.cosh()).exp() * (2.0 * t).cosh() * h
            })
            .sum();
        assert_relative_eq!(oracle, 1.624_838_898_635_177_5, max_relative = 1e-12);
        assert_relative_eq!(bessel_k(ord(2.0), 1.0).unwrap(), oracle, max_relative = 1e-13);
    }

    #[test]
    fn k_reproduces_i_difference_formula() {
        for &m in &[0.3, 0.5, 1.7, 2.6, 4.4] {
            for &x in &[0.1, 0.5, 1.0, 2.5, 5.0] {
                let k = bessel_k(ord(m), x).unwrap();
                let kd = bessel_k_from_i_difference(m, x).unwrap();
                assert_relative_eq!(k, kd, max_relative = 1e-10);
            }
        }
        assert!(bessel_k_from_i_difference(2.0, 1.0).is_err());
    }

    #[test]
    fn integer_order_k_is_the_limit_of_the_difference_formula() {
        let eps = 1e-4;
        for &m in &[0.0, 1.0, 2.0, 3.0] {
            for &x in &[0.3, 1.0, 3.0] {
                let avg = 0.5
                    * (bessel_k_from_i_difference(m + eps, x).unwrap()
                        + bessel_k_from_i_difference((m - eps).abs(), x).unwrap());
                assert_relative_eq!(bessel_k(ord(m), x).unwrap(), avg, max_relative = 1e-7);
            }
        }
    }

    #[test]
    fn wronskian_identity() {
        let orders = [0.0, 0.5, 2.0, 2.0 * 0.3 + 2.0, 2.0 * 1.7 + 2.0];
        for &m in &orders {
            let mut x = 0.1;
            while x <= 30.0 {
                let lhs = bessel_i(ord(m), x).unwrap() * bessel_k(ord(m + 1.0), x).unwrap()
                    + bessel_i(ord(m + 1.0), x).unwrap() * bessel_k(ord(m), x).unwrap();
                assert_relative_eq!(lhs * x, 1.0, max_relative = 1e-10);
                x += 0.37;
            }
        }
    }

    #[test]
    fn large_arguments_use_scaling() {
        let x = 800.0;
        assert!(matches!(bessel_i(ord(1.0), x), Err(Error::Overflow(_))));
        let is = bessel_i_scaled(ord(1.0), x).unwrap();
        let ks = bessel_k_scaled(ord(1.0), x).unwrap();
        // leading asymptotics: e^{-x} I ~ 1/sqrt(2 pi x), e^x K ~ sqrt(pi/(2x))
        assert_relative_eq!(is * (2.0 * PI * x).sqrt(), 1.0, max_relative = 1e-3);
        assert_relative_eq!(ks / (PI / (2.0 * x)).sqrt(), 1.0, max_relative = 1e-3);
        assert_relative_eq!(is * ks * 2.0 * x, 1.0, max_relative = 1e-3);
    }

    #[test]
    fn asymptotic_branch_joins_temme() {
        for nu in [0.0, 0.5, 2.0, 4.6] {
            let edge = ASYMPTOTIC_FACTOR * (nu * nu + 1.0);
            let (i_lo, k_lo) = bessel_ik_scaled(nu, edge).unwrap();
            let (i_hi, k_hi) = bessel_ik_asymptotic(nu, edge);
            assert_relative_eq!(i_lo, i_hi, max_relative = 1e-12);
            assert_relative_eq!(k_lo, k_hi, max_relative = 1e-12);
            // Wronskian in scaled form: x (I_nu K_{nu+1} + I_{nu+1} K_nu) = 1
            let x = 3.0 * edge;
            let (i0, k0) = bessel_ik_scaled(nu, x).unwrap();
            let (i1, k1) = bessel_ik_scaled(nu + 1.0, x).unwrap();
            assert_relative_eq!(x * (i0 * k1 + i1 * k0), 1.0, max_relative = 1e-13);
        }
    }

    #[test]
    fn order_validation() {
        assert!(BesselOrder::new(-0.1).is_err());
        assert!(BesselOrder::new(f64::NAN).is_err());
        assert_eq!(BesselOrder::try_from(2.5).unwrap().value(), 2.5);
    }
}
