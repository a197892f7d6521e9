//! Normalized eigenfunctions.
//!
//! With `theta = pi x / L`, `lambda_n = n + nu + 1` and
//! `a_n = -lambda_n + i beta / lambda_n`, level `n` is
//!
//! `phi_n(x) = (-i)^n K_n sin^{lambda_n}(theta) exp(-beta theta / lambda_n) P_n^{(a_n, conj a_n)}(i cot theta)`.
//!
//! The polynomial is `i^n` times a real function, so the `(-i)^n` phase makes
//! every `phi_n` real. It also fixes the sign so that the lowering operator
//! maps `phi_{n+1}^{(nu)}` to a *positive* multiple of `phi_n^{(nu+1)}`. At
//! `beta = 0` this convention gives `phi_n = (-1)^n |n>`, where `|n>` is the
//! Gegenbauer state of [`fock_state`] with positive normalization.
//!
//! Evaluation never forms `cot theta`: writing `w = (1 - i cot theta)/2`,
//! `sin(theta) w = -i e^{i theta}/2`, so
//! `sin^{n}(theta) P_n = sum_k d_k sin^{n-k}(theta) (-i e^{i theta}/2)^k`,
//! whose terms stay bounded at both walls.

use std::f64::consts::{LN_2, PI};

use super::ModelParams;
use crate::error::{invalid, Error, Result};
use crate::quadrature::integrate_finite;
use crate::specfun::dd::{CDd, Dd};
use crate::specfun::{
    gamma, gegenbauer_c, gegenbauer_norm_sq, ln_gamma, ln_gamma_real, pochhammer, CompensatedSum,
    JacobiSeries,
};
use crate::C64;

const MAX_CONDITIONING: f64 = 1e12;
const MAX_IMAGINARY_RESIDUE: f64 = 1e-10;
const FOCK_NORM_CHECK: f64 = 1e-9;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// The Hermitian double sum
/// `O = sum_{k,s} u_k conj(u_s) Gamma(2n + 2nu + 3 - k - s)` with
/// `u_k = (-n)_k (-2nu-n-1)_k / ((-nu-n-i b)_k k! Gamma(n+nu+2-k+i b))`,
/// `b = beta/(n+nu+1)`, that carries the `x`-integral of `|phi_n|^2`.
///
/// The sum cancels heavily (conditioning near `1e9` at `n = 8`). Factoring
/// `Gamma(nu+2+ib)` out of every `u_k` and `Gamma(2nu+3)` out of every
/// kernel entry leaves products of linear factors, which are accumulated in
/// double-double arithmetic.
pub fn normalization_overlap(p: &ModelParams, n: usize) -> Result<f64> {
    Ok(ln_overlap(p, n)?.exp())
}

fn ln_overlap(p: &ModelParams, n: usize) -> Result<f64> {
    let nu = p.nu();
    let nf = n as f64;
    let lam = Dd::new(nf) + Dd::new(nu) + Dd::new(1.0);
    let b = Dd::new(p.beta()) / lam;
    let cd = |re: Dd, im: Dd| CDd::new(re, im);
    let two_nu = Dd::new(2.0 * nu);

    // v_k = u_k Gamma(nu+2+ib)
    let mut v = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut num = CDd::real(Dd::new(1.0));
        let mut den = CDd::real(Dd::new(1.0));
        for j in 0..k {
            let jf = Dd::new(j as f64);
            num = num * CDd::real(jf - Dd::new(nf));
            num = num * CDd::real(jf - two_nu - Dd::new(nf + 1.0));
            den = den * cd(jf - Dd::new(nu) - Dd::new(nf), -b);
            den = den * CDd::real(jf + Dd::new(1.0));
        }
        for j in 0..n - k {
            den = den * cd(Dd::new(nu) + Dd::new(2.0 + j as f64), b);
        }
        v.push(num / den);
    }
    // kernel entries Gamma(2n+2nu+3-j) / Gamma(2nu+3) = (2nu+3)_{2n-j}
    let mut kernel = vec![Dd::new(1.0); 2 * n + 1];
    for i in 1..=2 * n {
        kernel[i] = kernel[i - 1] * (two_nu + Dd::new(2.0 + i as f64));
    }
    kernel.reverse();

    let mut sum = CDd::default();
    let mut abs = 0.0;
    for k in 0..=n {
        for s in 0..=n {
            let t = v[k] * v[s].conj() * CDd::real(kernel[k + s]);
            abs += t.norm_sq().to_f64().sqrt();
            sum = sum + t;
        }
    }
    let (re, im) = (sum.re.to_f64(), sum.im.to_f64());
    if !re.is_finite() || !abs.is_finite() {
        return Err(Error::Overflow("normalization double sum"));
    }
    if !(re > 0.0) {
        return Err(Error::LossOfSignificance {
            what: "normalization double sum",
            detail: format!("non-positive value {re:e} at n = {n}"),
        });
    }
    let conditioning = abs / re;
    if conditioning > MAX_CONDITIONING {
        return Err(Error::LossOfSignificance {
            what: "normalization double sum",
            detail: format!("conditioning {conditioning:e} at n = {n}"),
        });
    }
    if im.abs() > MAX_IMAGINARY_RESIDUE * re {
        return Err(Error::LossOfSignificance {
            what: "normalization double sum",
            detail: format!("imaginary residue {:e} relative at n = {n}", im.abs() / re),
        });
    }
    let g = ln_gamma(c(nu + 2.0, b.to_f64()))?.re;
    Ok(ln_gamma_real(2.0 * nu + 3.0)? - 2.0 * g + re.ln())
}

/// `K_n > 0` from
/// `1/K_n^2 = L |(a_n+1)_n|^2 / n!^2 e^{-beta pi/lambda_n} 2^{-2 lambda_n} O(n; nu, beta)`.
pub fn normalization_k(p: &ModelParams, n: usize) -> Result<f64> {
    let nf = n as f64;
    let lam = nf + p.nu() + 1.0;
    let ln_o = ln_overlap(p, n)?;
    let poch = pochhammer(c(-nf - p.nu(), p.beta() / lam), n).norm();
    let ln_inv_k2 = p.box_l().ln() + 2.0 * poch.ln() - 2.0 * ln_gamma_real(nf + 1.0)? - p.beta() * PI / lam
        - 2.0 * lam * LN_2
        + ln_o;
    Ok((-0.5 * ln_inv_k2).exp())
}

/// `2^{nu+1} e^{beta pi/(2(nu+1))} / sqrt(L Gamma(2nu+3))`.
///
/// This is `K_0` only at `nu = beta = 0`; in general
/// `K_0 = |Gamma(nu + 2 + i beta/(nu+1))| * ground_normalization_prefactor`.
pub fn ground_normalization_prefactor(p: &ModelParams) -> Result<f64> {
    let nu = p.nu();
    let ln = (nu + 1.0) * LN_2 + p.beta() * PI / (2.0 * (nu + 1.0))
        - 0.5 * (p.box_l().ln() + ln_gamma_real(2.0 * nu + 3.0)?);
    Ok(ln.exp())
}

/// `|Gamma(nu + 2 + i beta/(nu+1))|`, the factor relating [`ground_normalization_prefactor`]
/// to `K_0`.
pub fn ground_gamma_factor(p: &ModelParams) -> Result<f64> {
    Ok(gamma(c(p.nu() + 2.0, p.beta() / (p.nu() + 1.0)))?.norm())
}

/// `(sin theta, cos theta)` for `theta = pi x / L`, with the sine taken from
/// the nearer wall.
pub(crate) fn angle(p: &ModelParams, x: f64) -> Option<(f64, f64)> {
    let l = p.box_l();
    if !(x > 0.0 && x < l) {
        return None;
    }
    if x <= 0.5 * l {
        let t = PI * x / l;
        Some((t.sin(), t.cos()))
    } else {
        let t = PI * (l - x) / l;
        Some((t.sin(), -t.cos()))
    }
}

#[derive(Debug, Clone)]
enum Form {
    Jacobi(JacobiSeries),
    Gegenbauer,
}

/// A normalized bound state, evaluable on `(0, L)` and zero outside.
#[derive(Debug, Clone)]
pub struct Eigenfunction {
    n: usize,
    params: ModelParams,
    normalization: f64,
    form: Form,
}

/// `phi_n` in the Jacobi form, normalized with [`normalization_k`].
pub fn eigenfunction(p: &ModelParams, n: usize) -> Result<Eigenfunction> {
    let lam = n as f64 + p.nu() + 1.0;
    let a = c(-lam, p.beta() / lam);
    let series = JacobiSeries::new(n, a, a.conj())?;
    Ok(Eigenfunction {
        n,
        params: *p,
        normalization: normalization_k(p, n)?,
        form: Form::Jacobi(series),
    })
}

/// The `beta = 0` state `|n> = Z_n sin^{nu+1}(theta) C_n^{(nu+1)}(cos theta)`, `Z_n > 0`.
///
/// `Z_n` comes from the Gegenbauer norm in closed form and is checked against
/// quadrature before it is used.
pub fn fock_state(p: &ModelParams, n: usize) -> Result<Eigenfunction> {
    if p.beta() != 0.0 {
        return Err(invalid("beta", "Fock states are defined for beta = 0"));
    }
    let lam = p.nu() + 1.0;
    let h = gegenbauer_norm_sq(n, lam)?;
    let q = integrate_finite(
        |t: f64| {
            let cn = gegenbauer_c(n, lam, t.cos()).unwrap_or(f64::NAN);
            t.sin().powf(2.0 * lam) * cn * cn
        },
        0.0,
        PI,
        1e-13,
    )?;
    let mismatch = (q.value - h).abs() / h;
    if mismatch > FOCK_NORM_CHECK {
        return Err(Error::Verification {
            name: format!("Gegenbauer norm closed form, n = {n}"),
            residual: mismatch,
            tolerance: FOCK_NORM_CHECK,
        });
    }
    Ok(Eigenfunction {
        n,
        params: *p,
        normalization: (p.box_l() / PI * h).powf(-0.5),
        form: Form::Gegenbauer,
    })
}

impl Eigenfunction {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// `K_n` for the Jacobi form, `Z_n` for the Gegenbauer form.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// The function without its normalization constant.
    pub fn profile(&self, x: f64) -> C64 {
        let Some((s, co)) = angle(&self.params, x) else {
            return C64::new(0.0, 0.0);
        };
        let nu = self.params.nu();
        match &self.form {
            Form::Jacobi(series) => {
                let lam = self.n as f64 + nu + 1.0;
                let theta = PI * x / self.params.box_l();
                // -i e^{i theta} / 2
                let q = c(s, -co) * 0.5;
                let mut re = CompensatedSum::default();
                let mut im = CompensatedSum::default();
                let mut qk = c(1.0, 0.0);
                for (k, d) in series.coefficients().iter().enumerate() {
                    let t = d * qk * s.powi((self.n - k) as i32);
                    re.add(t.re);
                    im.add(t.im);
                    qk *= q;
                }
                let phase = C64::i().powi(-(self.n as i32));
                let envelope = s.powf(nu + 1.0) * (-self.params.beta() * theta / lam).exp();
                phase * c(re.total(), im.total()) * envelope
            }
            Form::Gegenbauer => {
                let cn = gegenbauer_c(self.n, nu + 1.0, co).unwrap_or(f64::NAN);
                c(s.powf(nu + 1.0) * cn, 0.0)
            }
        }
    }

    /// `(nu+1, lambda_n)`: the state is `sin^{nu+1}(theta) e^{-beta theta/lambda_n} u(theta)`
    /// with `u` given by [`reduced`](Self::reduced).
    pub(crate) fn envelope_exponents(&self) -> (f64, f64) {
        let nu = self.params.nu();
        (nu + 1.0, self.n as f64 + nu + 1.0)
    }

    /// The normalized state with the wall envelope divided out, a
    /// trigonometric polynomial, at complex `theta`. `None` for the
    /// Gegenbauer form.
    pub(crate) fn reduced(&self, theta: C64) -> Option<C64> {
        let Form::Jacobi(series) = &self.form else {
            return None;
        };
        let s = theta.sin();
        let q = c(0.0, -0.5) * (C64::i() * theta).exp();
        let mut sum = C64::default();
        let mut qk = c(1.0, 0.0);
        for (k, d) in series.coefficients().iter().enumerate() {
            sum += d * qk * s.powi((self.n - k) as i32);
            qk *= q;
        }
        Some(C64::i().powi(-(self.n as i32)) * sum * self.normalization)
    }

    pub fn evaluate_complex(&self, x: f64) -> C64 {
        self.profile(x) * self.normalization
    }

    /// The (real) value; the imaginary part of [`evaluate_complex`](Self::evaluate_complex)
    /// is rounding noise.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.evaluate_complex(x).re
    }

    /// Independent `beta = 0` evaluator:
    /// `(-1)^n Z_n sin^{nu+1}(theta) C_n^{(nu+1)}(cos theta)` for the Jacobi form,
    /// the state itself for the Gegenbauer form.
    pub fn evaluate_gegenbauer(&self, x: f64) -> Result<f64> {
        if self.params.beta() != 0.0 {
            return Err(invalid("beta", "the Gegenbauer form exists only for beta = 0"));
        }
        let Some((s, co)) = angle(&self.params, x) else {
            return Ok(0.0);
        };
        let lam = self.params.nu() + 1.0;
        let z = (self.params.box_l() / PI * gegenbauer_norm_sq(self.n, lam)?).powf(-0.5);
        let sign = match self.form {
            Form::Jacobi(_) if self.n % 2 == 1 => -1.0,
            _ => 1.0,
        };
        Ok(sign * z * s.powf(lam) * gegenbauer_c(self.n, lam, co)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::jacobi_p;
    use approx::assert_relative_eq;

    #[test]
    fn ground_state_normalization_examples() {
        let p = ModelParams::unit(0.0, 0.0).unwrap();
        assert_relative_eq!(normalization_k(&p, 0).unwrap(), 2f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(ground_normalization_prefactor(&p).unwrap(), 2f64.sqrt(), max_relative = 1e-14);
        for &(nu, beta, l) in &[(0.5, 0.7, 1.0), (2.3, 2.0, 3.0), (1.0, 0.0, 0.5)] {
            let p = ModelParams::new(nu, beta, 1.0, l).unwrap();
            let k0 = normalization_k(&p, 0).unwrap();
            let corrected = ground_gamma_factor(&p).unwrap() * ground_normalization_prefactor(&p).unwrap();
            assert_relative_eq!(k0, corrected, max_relative = 1e-12);
        }
    }

    #[test]
    fn inverse_k_squared_reference_values() {
        // high-precision quadrature of the unnormalized profile
        let cases = [
            (0, 0.0, 0.0, 0.5),
            (0, 1.0, 0.0, 0.375),
            (0, 0.5, 0.7, 0.108_913_195_509_366),
            (3, 0.5, 0.7, 0.013_852_453_353_312_9),
            (8, 2.3, 2.0, 0.001_671_981_902_577_29),
            (8, 0.5, 0.0, 4.601_390_598_745_43e-5),
        ];
        for &(n, nu, beta, expected) in &cases {
            let p = ModelParams::unit(nu, beta).unwrap();
            let k = normalization_k(&p, n).unwrap();
            assert_relative_eq!(1.0 / (k * k), expected, max_relative = 1e-13);
        }
    }

    #[test]
    fn profile_matches_direct_jacobi_evaluation() {
        let p = ModelParams::unit(0.5, 0.7).unwrap();
        for n in 0..6 {
            let phi = eigenfunction(&p, n).unwrap();
            let lam = n as f64 + 1.5;
            let a = c(-lam, 0.7 / lam);
            for &x in &[0.2, 0.37, 0.5, 0.81] {
                let t = PI * x;
                let direct = C64::i().powi(-(n as i32))
                    * t.sin().powf(lam)
                    * (-0.7 * t / lam).exp()
                    * jacobi_p(n, a, a.conj(), c(0.0, t.cos() / t.sin())).unwrap();
                let got = phi.profile(x);
                assert!((got - direct).norm() <= 1e-12 * (1.0 + direct.norm()));
                assert!(got.im.abs() <= 1e-12 * (1.0 + got.re.abs()));
            }
        }
    }

    #[test]
    fn vanishes_at_and_outside_the_walls() {
        let p = ModelParams::new(0.5, 0.7, 1.0, 2.0).unwrap();
        let phi = eigenfunction(&p, 3).unwrap();
        assert_eq!(phi.evaluate(0.0), 0.0);
        assert_eq!(phi.evaluate(2.0), 0.0);
        assert_eq!(phi.evaluate(-1.0), 0.0);
        assert!(phi.evaluate(1e-6).abs() < 1e-7);
        assert!(phi.evaluate(2.0 - 1e-6).abs() < 1e-7);
    }

    #[test]
    fn fock_state_requires_beta_zero() {
        let p = ModelParams::unit(0.5, 0.7).unwrap();
        assert!(fock_state(&p, 1).is_err());
        assert!(eigenfunction(&p, 1).unwrap().evaluate_gegenbauer(0.3).is_err());
    }
}
