//! Special functions: Gamma, Pochhammer, modified Bessel, Jacobi and
//! Gegenbauer polynomials.

mod bessel;
pub(crate) mod dd;
mod gamma;
mod poly;

pub use bessel::{
    bessel_i, bessel_i_scaled, bessel_k, bessel_k_from_i_difference, bessel_k_scaled,
    i_series_signed_order, BesselOrder, SERIES_CROSSOVER,
};
pub use gamma::{gamma, gamma_real, ln_gamma, ln_gamma_real, pochhammer, pochhammer_real, rgamma_real};
pub use poly::{gegenbauer_c, gegenbauer_norm_sq, jacobi_p, JacobiSeries};

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}
