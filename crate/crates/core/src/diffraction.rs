//! Numerical diffraction: Fejér-smoothed spectra, Riesz partial products and
//! the Wiener mean.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::alphabet::{Angle, PhiContext};
use crate::autocorrelation::EtaTable;
use crate::error::DiffractionError;

/// Depth above which Riesz products are accumulated as sums of logarithms.
const LOG_SPACE_DEPTH: u32 = 20;

/// Density samples at `t = i/G`, `i = 0..G`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumGrid {
    pub resolution: usize,
    /// Fejér order `K`, or the depth `M` of a Riesz product.
    pub kernel_order: usize,
    pub values: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct SpectrumRow {
    pub t: f64,
    pub value: f64,
}

impl SpectrumGrid {
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.resolution as f64
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Share of the total mass carried by the `k` largest samples.
    pub fn top_mass_fraction(&self, k: usize) -> f64 {
        let mut v: Vec<f64> = self.values.iter().map(|x| x.max(0.0)).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        let total: f64 = v.iter().sum();
        v.iter().take(k).sum::<f64>() / total
    }

    /// `max_i |values_i - mean|`.
    pub fn flatness_deviation(&self) -> f64 {
        let m = self.mean();
        self.values
            .iter()
            .map(|v| (v - m).abs())
            .fold(0.0, f64::max)
    }

    /// `Σ|a_i - b_i| / Σ|b_i|`.
    pub fn relative_l1_distance(&self, reference: &SpectrumGrid) -> Result<f64, DiffractionError> {
        if self.resolution != reference.resolution {
            return Err(DiffractionError::InvalidGrid(format!(
                "resolutions differ: {} vs {}",
                self.resolution, reference.resolution
            )));
        }
        let num: f64 = self
            .values
            .iter()
            .zip(&reference.values)
            .map(|(a, b)| (a - b).abs())
            .sum();
        let den: f64 = reference.values.iter().map(|b| b.abs()).sum();
        Ok(num / den)
    }

    /// Rows `(t, value)` with small negative roundoff clamped to zero.
    pub fn rows(&self) -> Vec<SpectrumRow> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| SpectrumRow {
                t: i as f64 / self.resolution as f64,
                value: v.max(0.0),
            })
            .collect()
    }
}

/// `Σ_{|m|≤K} (1 - |m|/(K+1)) η(m) e^{-2πimt}` on `G` points.
pub fn fejer_spectrum(
    eta: &EtaTable,
    k: usize,
    g: usize,
) -> Result<SpectrumGrid, DiffractionError> {
    if !g.is_power_of_two() || k == 0 || k > g / 2 {
        return Err(DiffractionError::InvalidGrid(format!(
            "need G a power of two and 1 <= K <= G/2 (K={k}, G={g})"
        )));
    }
    if eta.max_lag() < k {
        return Err(DiffractionError::WindowTooSmall {
            needed: k as i64,
            available: eta.max_lag() as i64,
        });
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); g];
    for m in -(k as i64)..=k as i64 {
        let w = 1.0 - m.unsigned_abs() as f64 / (k + 1) as f64;
        let v = eta.get(m).expect("lag checked above");
        buf[m.rem_euclid(g as i64) as usize] += v * w;
    }
    FftPlanner::<f64>::new()
        .plan_fft_forward(g)
        .process(&mut buf);
    Ok(SpectrumGrid {
        resolution: g,
        kernel_order: k,
        values: buf.iter().map(|z| z.re).collect(),
    })
}

/// `Π_{m<M} (1/2)|1 + e^{2πia} e^{2πi·2^m t}|² = Π_{m<M} (1 + cos 2π(a + 2^m t))`.
pub fn riesz_partial(
    a: Angle,
    depth: u32,
    g: usize,
    ctx: &PhiContext,
) -> Result<SpectrumGrid, DiffractionError> {
    if depth == 0 || g == 0 {
        return Err(DiffractionError::InvalidGrid(
            "need M >= 1 and G >= 1".into(),
        ));
    }
    let shift = a.value(ctx);
    let gg = g as u128;
    let mut doublings = Vec::with_capacity(depth as usize);
    let mut p: u128 = 1 % gg;
    for _ in 0..depth {
        doublings.push(p);
        p = (2 * p) % gg;
    }
    let tau = 2.0 * std::f64::consts::PI;
    let values = (0..g)
        .into_par_iter()
        .map(|i| {
            let factor = |p: u128| {
                let x = ((p * i as u128) % gg) as f64 / g as f64;
                1.0 + (tau * (shift + x)).cos()
            };
            if depth > LOG_SPACE_DEPTH {
                doublings.iter().map(|&p| factor(p).ln()).sum::<f64>().exp()
            } else {
                doublings.iter().map(|&p| factor(p)).product()
            }
        })
        .collect();
    Ok(SpectrumGrid {
        resolution: g,
        kernel_order: depth as usize,
        values,
    })
}

/// `(1/(2N+1)) Σ_{|m|≤N} |η(m)|²`.
pub fn wiener_l2_mean(eta: &EtaTable, n: usize) -> Result<f64, DiffractionError> {
    if eta.max_lag() < n {
        return Err(DiffractionError::WindowTooSmall {
            needed: n as i64,
            available: eta.max_lag() as i64,
        });
    }
    let tail: f64 = eta.values()[1..=n].iter().map(|v| v.norm_sqr()).sum();
    Ok((eta.values()[0].norm_sqr() + 2.0 * tail) / (2 * n + 1) as f64)
}
