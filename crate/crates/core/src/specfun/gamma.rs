//! Gamma-family kernels: complex log-Gamma (Lanczos, g = 7, with reflection),
//! real Gamma, reciprocal Gamma and Pochhammer symbols.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::C64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// Taylor coefficients of 1/Γ(z) about z = 0 (coefficient of z^k at index k).
const RGAMMA_TAYLOR: [f64; 27] = [
    0.0,
    1.0,
    0.577_215_664_901_532_860_61,
    -0.655_878_071_520_253_881_08,
    -0.042_002_635_034_095_235_529,
    0.166_538_611_382_291_489_5,
    -0.042_197_734_555_544_336_748,
    -0.009_621_971_527_876_973_562_1,
    0.007_218_943_246_663_099_542_4,
    -0.001_165_167_591_859_065_112_1,
    -0.000_215_241_674_114_950_972_82,
    0.000_128_050_282_388_116_186_15,
    -0.000_020_134_854_780_788_238_656,
    -1.250_493_482_142_670_657_3e-6,
    1.133_027_231_981_695_882_4e-6,
    -2.056_338_416_977_607_103_5e-7,
    6.116_095_104_481_415_817_9e-9,
    5.002_007_644_469_222_930_1e-9,
    -1.181_274_570_487_020_144_6e-9,
    1.043_426_711_691_100_510_5e-10,
    7.782_263_439_905_071_254e-12,
    -3.696_805_618_642_205_708_2e-12,
    5.100_370_287_454_475_979e-13,
    -2.058_326_053_566_506_783_2e-14,
    -5.348_122_539_423_017_982_4e-15,
    1.226_778_628_238_260_790_2e-15,
    -1.181_259_301_697_458_769_5e-16,
];

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

fn check_finite(z: C64, name: &'static str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(name))
    }
}

/// `ln sin(πz)` without overflowing for large `|Im z|`.
fn ln_sin_pi(z: C64) -> C64 {
    let w = z * PI;
    let i = C64::i();
    if w.im >= 0.0 {
        // sin w = e^{-iw} (e^{2iw} - 1) / (2i)
        -i * w + ((i * w * 2.0).exp() - 1.0).ln() - (i * 2.0).ln()
    } else {
        // sin w = e^{iw} (1 - e^{-2iw}) / (2i)
        i * w + (C64::new(1.0, 0.0) - (-i * w * 2.0).exp()).ln() - (i * 2.0).ln()
    }
}

fn ln_gamma_lanczos(z: C64) -> C64 {
    let z = z - 1.0;
    let mut sum = C64::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (z + 0.5) * t.ln() - t + sum.ln() + LN_SQRT_2PI
}

/// Complex log-Gamma.
///
/// `exp(ln_gamma(z)) = Γ(z)`; the imaginary part follows the analytic
/// continuation of `ln Γ` along the right half plane (the same branch as
/// SciPy's `loggamma`), so it is not confined to `(-π, π]`.
pub fn ln_gamma(z: C64) -> Result<C64> {
    check_finite(z, "ln_gamma")?;
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(Error::Pole(z.re));
    }
    if z.re < 0.5 {
        let one = C64::new(1.0, 0.0);
        Ok(C64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma_lanczos(one - z))
    } else {
        Ok(ln_gamma_lanczos(z))
    }
}

/// Complex Gamma function.
pub fn gamma(z: C64) -> Result<C64> {
    Ok(ln_gamma(z)?.exp())
}

/// `ln |Γ(x)|` for real `x`.
pub fn ln_gamma_real(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite("ln_gamma_real"));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x < 0.5 {
        Ok(PI.ln() - (PI * x).sin().abs().ln() - ln_gamma_lanczos_real(1.0 - x))
    } else {
        Ok(ln_gamma_lanczos_real(x))
    }
}

fn ln_gamma_lanczos_real(x: f64) -> f64 {
    let z = x - 1.0;
    let mut sum = LANCZOS[0];
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (z + 0.5) * t.ln() - t + sum.ln() + LN_SQRT_2PI
}

/// Real Gamma function.
pub fn gamma_real(x: f64) -> Result<f64> {
    let lg = ln_gamma_real(x)?;
    // for x < 0 the sign of Γ is (-1)^{ceil(-x)}
    let sign = if x > 0.0 || ((-x).ceil() as i64) % 2 == 0 {
        1.0
    } else {
        -1.0
    };
    let v = sign * lg.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow("gamma_real"))
    }
}

/// Reciprocal Gamma `1/Γ(x)`, entire: zero at the non-positive integers.
pub fn rgamma_real(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x.abs() <= 0.5 {
        return rgamma_taylor(x);
    }
    match gamma_real(x) {
        Ok(g) => 1.0 / g,
        Err(_) => 0.0,
    }
}

fn rgamma_taylor(x: f64) -> f64 {
    RGAMMA_TAYLOR.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Temme's auxiliary functions for `|mu| <= 1/2`:
/// `(gam1, gam2, 1/Γ(1+mu), 1/Γ(1-mu))` with
/// `gam1 = (1/Γ(1-mu) - 1/Γ(1+mu)) / (2 mu)` and
/// `gam2 = (1/Γ(1-mu) + 1/Γ(1+mu)) / 2`.
pub(crate) fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    // 1/Γ(1+x) = Σ_{k≥1} c_k x^{k-1}
    let mut even = 0.0; // Σ c_k x^{k-2}, k even
    let mut odd = 0.0; // Σ c_k x^{k-1}, k odd
    let x2 = mu * mu;
    for k in (1..RGAMMA_TAYLOR.len()).rev() {
        if k % 2 == 0 {
            even = even * x2 + RGAMMA_TAYLOR[k];
        } else {
            odd = odd * x2 + RGAMMA_TAYLOR[k];
        }
    }
    // 1/Γ(1+mu) = odd + mu * even, 1/Γ(1-mu) = odd - mu * even
    let gampl = odd + mu * even;
    let gammi = odd - mu * even;
    (-even, odd, gampl, gammi)
}

/// Rising factorial `z (z+1) … (z+k-1)` as a direct product (empty product 1).
pub fn pochhammer(z: C64, k: usize) -> C64 {
    (0..k).fold(C64::new(1.0, 0.0), |acc, j| acc * (z + j as f64))
}

/// Real rising factorial.
pub fn pochhammer_real(x: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (x + j as f64))
}
