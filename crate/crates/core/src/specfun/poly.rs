//! Jacobi and Gegenbauer polynomials.

use super::gamma::{ln_gamma_real, pochhammer};
use super::CompensatedSum;
use crate::error::{invalid, Error, Result};
use crate::C64;

/// Explicit hypergeometric form of `P_n^{(a,b)}(z)`:
/// `sum_k d_k w^k` with `w = (1 - z)/2` and
/// `d_k = (a+k+1)_{n-k} (-n)_k (n+a+b+1)_k / (n! k!)`.
///
/// Holomorphic in `z`, so it accepts complex arguments and complex
/// parameters. Construction fails with [`Error::SingularParameter`] when some
/// `(a+1)_k`, `k <= n`, vanishes.
#[derive(Debug, Clone)]
pub struct JacobiSeries {
    coeffs: Vec<C64>,
}

impl JacobiSeries {
    pub fn new(n: usize, a: C64, b: C64) -> Result<Self> {
        if !(a.re.is_finite() && a.im.is_finite() && b.re.is_finite() && b.im.is_finite()) {
            return Err(Error::NonFinite("jacobi parameters"));
        }
        for j in 0..n {
            if a + 1.0 + j as f64 == C64::new(0.0, 0.0) {
                return Err(Error::SingularParameter { k: j + 1 });
            }
        }
        let one = C64::new(1.0, 0.0);
        let nab = C64::new(n as f64 + 1.0, 0.0) + a + b;
        let mut nfact = 1.0;
        for i in 1..=n {
            nfact *= i as f64;
        }
        let mut coeffs = Vec::with_capacity(n + 1);
        // (-n)_k (n+a+b+1)_k / k!, accumulated
        let mut head = one;
        for k in 0..=n {
            if k > 0 {
                let kf = k as f64;
                head *= (kf - 1.0 - n as f64) * (nab + (kf - 1.0)) / kf;
            }
            let tail = pochhammer(a + (k as f64 + 1.0), n - k);
            coeffs.push(head * tail / nfact);
        }
        Ok(Self { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The `d_k`, lowest power of `w` first.
    pub fn coefficients(&self) -> &[C64] {
        &self.coeffs
    }

    /// `sum_k |d_k w^k|`, the scale against which rounding in [`eval`](Self::eval)
    /// should be measured.
    pub fn abs_sum(&self, z: C64) -> f64 {
        let w = (C64::new(1.0, 0.0) - z) * 0.5;
        let mut wk = 1.0;
        let mut s = 0.0;
        for d in &self.coeffs {
            s += d.norm() * wk;
            wk *= w.norm();
        }
        s
    }

    pub fn eval(&self, z: C64) -> C64 {
        let w = (C64::new(1.0, 0.0) - z) * 0.5;
        let mut re = CompensatedSum::default();
        let mut im = CompensatedSum::default();
        let mut wk = C64::new(1.0, 0.0);
        for d in &self.coeffs {
            let t = d * wk;
            re.add(t.re);
            im.add(t.im);
            wk *= w;
        }
        C64::new(re.total(), im.total())
    }
}

/// `P_n^{(a,b)}(z)`.
pub fn jacobi_p(n: usize, a: C64, b: C64, z: C64) -> Result<C64> {
    Ok(JacobiSeries::new(n, a, b)?.eval(z))
}

/// `C_n^{(lambda)}(x)` by the three-term recurrence.
pub fn gegenbauer_c(n: usize, lambda: f64, x: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(invalid("lambda", format!("Gegenbauer parameter must be > 0, got {lambda}")));
    }
    if !x.is_finite() {
        return Err(Error::NonFinite("gegenbauer_c"));
    }
    let mut prev = 1.0;
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * lambda * x;
    for k in 2..=n {
        let kf = k as f64;
        let next = (2.0 * x * (kf + lambda - 1.0) * cur - (kf + 2.0 * lambda - 2.0) * prev) / kf;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `∫_{-1}^{1} (1-x^2)^{lambda-1/2} C_n^{(lambda)}(x)^2 dx`.
pub fn gegenbauer_norm_sq(n: usize, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(invalid("lambda", format!("Gegenbauer parameter must be > 0, got {lambda}")));
    }
    let nf = n as f64;
    let ln = std::f64::consts::PI.ln() + (1.0 - 2.0 * lambda) * std::f64::consts::LN_2
        + ln_gamma_real(nf + 2.0 * lambda)?
        - ln_gamma_real(nf + 1.0)?
        - (nf + lambda).ln()
        - 2.0 * ln_gamma_real(lambda)?;
    Ok(ln.exp())
}
