//! Birkhoff averages `(1/(2N+1)) Σ_{|j|≤N} u_j · conj(u_{j+m})` over a window.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::alphabet::{character_angle, Angle, Character, PhiContext};
use crate::error::EtaError;
use crate::substitution::TwoSidedWord;

/// Chunk length of the partitioned sums; chunk results are added in index order.
const CHUNK: usize = 1 << 14;

/// Unit weights `u_n = χ(w_n)` on a window of coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedComb {
    weights: Vec<Complex64>,
    origin: usize,
}

impl WeightedComb {
    pub fn new(weights: Vec<Complex64>, origin: usize) -> Self {
        assert!(origin < weights.len().max(1), "origin outside the comb");
        WeightedComb { weights, origin }
    }

    pub fn from_word(
        w: &TwoSidedWord,
        chi: &Character,
        ctx: &PhiContext,
    ) -> Result<Self, EtaError> {
        let weights = w
            .letters()
            .iter()
            .map(|a| character_angle(chi, a).map(|t| t.eval_unit(ctx)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(WeightedComb {
            weights,
            origin: w.origin(),
        })
    }

    /// Weights `e^{2πi·n·t}` for a list of angles `t`.
    pub fn from_angles(angles: &[Angle], scale: i64, origin: usize, ctx: &PhiContext) -> Self {
        let weights = angles
            .iter()
            .map(|t| t.scale(scale).eval_unit(ctx))
            .collect();
        WeightedComb::new(weights, origin)
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    /// Largest `N` with `[-N, N]` inside the window.
    pub fn max_radius(&self) -> usize {
        self.origin.min(self.weights.len() - 1 - self.origin)
    }

    /// Largest lag `m` with `[-n, n + m]` inside the window.
    pub fn max_lag(&self, n: usize) -> Option<usize> {
        if n > self.origin {
            return None;
        }
        (self.weights.len() - 1 - self.origin).checked_sub(n)
    }

    fn check(&self, n: usize, lag: usize) -> Result<(), EtaError> {
        if n > self.origin {
            return Err(EtaError::WindowTooSmall {
                needed: n as i64,
                available: self.origin as i64,
            });
        }
        let available = self.max_lag(n).unwrap_or(0);
        if lag > available {
            return Err(EtaError::WindowTooSmall {
                needed: lag as i64,
                available: available as i64,
            });
        }
        Ok(())
    }

    /// `η(m)` averaged over `[-n, n]`; negative lags reuse the window of `|m|`.
    pub fn eta(&self, m: i64, n: usize) -> Result<Complex64, EtaError> {
        let lag = m.unsigned_abs() as usize;
        self.check(n, lag)?;
        if m == 0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let v = self.direct(lag, n);
        Ok(if m < 0 { v.conj() } else { v })
    }

    fn direct(&self, lag: usize, n: usize) -> Complex64 {
        let start = self.origin - n;
        let a = &self.weights[start..start + 2 * n + 1];
        let b = &self.weights[start + lag..start + lag + 2 * n + 1];
        let partial: Vec<Complex64> = a
            .par_chunks(CHUNK)
            .zip(b.par_chunks(CHUNK))
            .map(|(x, y)| x.iter().zip(y).map(|(u, v)| u * v.conj()).sum())
            .collect();
        partial.iter().sum::<Complex64>() / (2 * n + 1) as f64
    }

    /// `η(0..=max_lag)`; uses one FFT cross-correlation for many lags.
    pub fn eta_range(&self, max_lag: usize, n: usize) -> Result<Vec<Complex64>, EtaError> {
        self.check(n, max_lag)?;
        if max_lag <= 64 {
            return Ok((0..=max_lag)
                .map(|m| {
                    if m == 0 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        self.direct(m, n)
                    }
                })
                .collect());
        }
        let len_a = 2 * n + 1;
        let len_b = len_a + max_lag;
        let size = len_b.next_power_of_two();
        let start = self.origin - n;
        let mut fa = vec![Complex64::new(0.0, 0.0); size];
        fa[..len_a].copy_from_slice(&self.weights[start..start + len_a]);
        let mut fb = vec![Complex64::new(0.0, 0.0); size];
        fb[..len_b].copy_from_slice(&self.weights[start..start + len_b]);
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft_forward(size);
        let inv = planner.plan_fft_inverse(size);
        fwd.process(&mut fa);
        fwd.process(&mut fb);
        for (x, y) in fa.iter_mut().zip(&fb) {
            *x = x.conj() * y;
        }
        inv.process(&mut fa);
        // fa[m] = size · Σ_i conj(a_i) b_{i+m}
        let norm = (size * len_a) as f64;
        let mut out: Vec<Complex64> = fa[..=max_lag].iter().map(|v| v.conj() / norm).collect();
        out[0] = Complex64::new(1.0, 0.0);
        Ok(out)
    }
}

/// `η(m)` of `χ(w)` over `[-n, n]`.
pub fn eta_empirical(
    w: &TwoSidedWord,
    chi: &Character,
    m: i64,
    n: usize,
    ctx: &PhiContext,
) -> Result<Complex64, EtaError> {
    WeightedComb::from_word(w, chi, ctx)?.eta(m, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Letter;

    fn comb(ws: &[Complex64], origin: usize) -> WeightedComb {
        WeightedComb::new(ws.to_vec(), origin)
    }

    #[test]
    fn constant_word() {
        let w = TwoSidedWord::new(vec![Letter::Circle(Angle::ZERO); 21], 10).unwrap();
        for m in -5..=5 {
            let v = eta_empirical(&w, &Character::Circle(1), m, 5, &PhiContext::golden()).unwrap();
            assert!((v - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn window_checks() {
        let c = comb(&[Complex64::new(1.0, 0.0); 11], 5);
        assert!(c.eta(0, 5).is_ok());
        assert!(matches!(c.eta(1, 5), Err(EtaError::WindowTooSmall { .. })));
        assert!(matches!(c.eta(0, 6), Err(EtaError::WindowTooSmall { .. })));
        assert_eq!(c.max_lag(3), Some(2));
    }

    #[test]
    fn alternating_signs() {
        let ws: Vec<Complex64> = (0..101)
            .map(|i| Complex64::new(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0))
            .collect();
        let c = comb(&ws, 50);
        assert!((c.eta(1, 40).unwrap() + 1.0).norm() < 1e-15);
        assert!((c.eta(-2, 40).unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn fft_matches_direct() {
        let ctx = PhiContext::golden();
        let angles: Vec<Angle> = (0..3000i64)
            .map(|i| Angle::phi_multiple((i * i) % 7 - 3))
            .collect();
        let c = WeightedComb::from_angles(&angles, 1, 1400, &ctx);
        let fast = c.eta_range(200, 1300).unwrap();
        for m in [0usize, 1, 2, 17, 100, 200] {
            let slow = c.eta(m as i64, 1300).unwrap();
            assert!((fast[m] - slow).norm() < 1e-12, "lag {m}");
        }
    }
}
