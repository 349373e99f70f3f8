//! Autocorrelation coefficients `η(m)` of character-weighted combs.

mod empirical;
mod exact;

use num_complex::Complex64;

use crate::alphabet::PhiContext;
use crate::error::EtaError;

pub use empirical::{eta_empirical, WeightedComb};
pub use exact::{
    eta1_closed_form, eta_coincidence_scale, eta_exact_bijective, eta_l_minus_one_closed_form,
    BijectiveEta, BijectiveRecurrenceSpec,
};

#[derive(Clone, Debug)]
pub enum EtaSource {
    ExactBijective(BijectiveEta),
    /// Empirical base values with `η(Lm)` replaced by the coincidence scaling.
    ExactCoincidenceScale {
        comb: WeightedComb,
        radius: usize,
        length: usize,
        constants: usize,
    },
    Empirical {
        comb: WeightedComb,
        radius: usize,
    },
    /// Fixed list `η(0), η(1), …`.
    Explicit,
}

/// Memoized `η(m)` for `0 ≤ m ≤ max_lag`; negative lags are conjugates.
///
/// Values are filled by [`EtaTable::ensure`] and read through `&self`.
#[derive(Clone, Debug)]
pub struct EtaTable {
    source: EtaSource,
    values: Vec<Complex64>,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct EtaRow {
    pub m: i64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
}

impl EtaTable {
    pub fn exact_bijective(spec: BijectiveRecurrenceSpec, ctx: PhiContext) -> Self {
        EtaTable {
            source: EtaSource::ExactBijective(BijectiveEta::new(spec, ctx)),
            values: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn empirical(comb: WeightedComb, radius: usize) -> Result<Self, EtaError> {
        comb.max_lag(radius).ok_or(EtaError::WindowTooSmall {
            needed: radius as i64,
            available: comb.origin() as i64,
        })?;
        Ok(EtaTable {
            source: EtaSource::Empirical { comb, radius },
            values: vec![Complex64::new(1.0, 0.0)],
        })
    }

    pub fn coincidence_scale(
        comb: WeightedComb,
        radius: usize,
        length: usize,
        constants: usize,
    ) -> Result<Self, EtaError> {
        eta_coincidence_scale(Complex64::new(1.0, 0.0), constants, length)?;
        comb.max_lag(radius).ok_or(EtaError::WindowTooSmall {
            needed: radius as i64,
            available: comb.origin() as i64,
        })?;
        Ok(EtaTable {
            source: EtaSource::ExactCoincidenceScale {
                comb,
                radius,
                length,
                constants,
            },
            values: vec![Complex64::new(1.0, 0.0)],
        })
    }

    pub fn explicit(values: Vec<Complex64>) -> Result<Self, EtaError> {
        if values.is_empty() {
            return Err(EtaError::InvalidParameter("need at least eta(0)".into()));
        }
        Ok(EtaTable {
            source: EtaSource::Explicit,
            values,
        })
    }

    pub fn source(&self) -> &EtaSource {
        &self.source
    }

    pub fn source_name(&self) -> &'static str {
        match self.source {
            EtaSource::ExactBijective(_) => "exact-bijective",
            EtaSource::ExactCoincidenceScale { .. } => "exact-coincidence-scale",
            EtaSource::Empirical { .. } => "empirical",
            EtaSource::Explicit => "explicit",
        }
    }

    /// Largest lag currently stored.
    pub fn max_lag(&self) -> usize {
        self.values.len() - 1
    }

    /// Largest lag the source can provide, `None` when unbounded.
    pub fn capacity(&self) -> Option<usize> {
        match &self.source {
            EtaSource::ExactBijective(_) => None,
            EtaSource::ExactCoincidenceScale { comb, radius, .. }
            | EtaSource::Empirical { comb, radius } => comb.max_lag(*radius),
            EtaSource::Explicit => Some(self.max_lag()),
        }
    }

    /// Computes and stores `η(0..=max_lag)`.
    pub fn ensure(&mut self, max_lag: usize) -> Result<(), EtaError> {
        if max_lag <= self.max_lag() {
            return Ok(());
        }
        if let Some(cap) = self.capacity() {
            if max_lag > cap {
                return Err(EtaError::WindowTooSmall {
                    needed: max_lag as i64,
                    available: cap as i64,
                });
            }
        }
        match &mut self.source {
            EtaSource::ExactBijective(e) => {
                for m in self.values.len()..=max_lag {
                    self.values.push(e.get(m as i64));
                }
            }
            EtaSource::Empirical { comb, radius } => {
                self.values = comb.eta_range(max_lag, *radius)?;
            }
            EtaSource::ExactCoincidenceScale {
                comb,
                radius,
                length,
                constants,
            } => {
                let mut vs = comb.eta_range(max_lag, *radius)?;
                for m in 1..=max_lag {
                    if m % *length == 0 {
                        vs[m] = eta_coincidence_scale(vs[m / *length], *constants, *length)?;
                    }
                }
                self.values = vs;
            }
            EtaSource::Explicit => unreachable!("capacity bounds explicit tables"),
        }
        Ok(())
    }

    pub fn get(&self, m: i64) -> Option<Complex64> {
        let v = *self.values.get(m.unsigned_abs() as usize)?;
        Some(if m < 0 { v.conj() } else { v })
    }

    pub fn eta(&self, m: i64) -> Result<Complex64, EtaError> {
        self.get(m).ok_or(EtaError::WindowTooSmall {
            needed: m.abs(),
            available: self.max_lag() as i64,
        })
    }

    /// Stored values for `m = 0..=max_lag`.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn rows(&self, lo: i64, hi: i64) -> Result<Vec<EtaRow>, EtaError> {
        (lo..=hi)
            .map(|m| {
                self.eta(m).map(|v| EtaRow {
                    m,
                    re: v.re,
                    im: v.im,
                    abs: v.norm(),
                })
            })
            .collect()
    }
}

/// `P_ε ∩ [-M, M]` and the largest gap between consecutive members.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct AlmostPeriods {
    pub members: Vec<i64>,
    /// `None` when fewer than two members were found.
    pub max_gap: Option<i64>,
}

pub fn almost_period_set(
    eta: &EtaTable,
    epsilon: f64,
    m_max: usize,
) -> Result<AlmostPeriods, EtaError> {
    if !(epsilon > 0.0) || m_max == 0 {
        return Err(EtaError::InvalidParameter(
            "need epsilon > 0 and M >= 1".into(),
        ));
    }
    let e0 = eta.eta(0)?;
    let mut members = Vec::new();
    for m in -(m_max as i64)..=m_max as i64 {
        if (e0 - eta.eta(m)?).norm().sqrt() < epsilon {
            members.push(m);
        }
    }
    let max_gap = members.windows(2).map(|w| w[1] - w[0]).max();
    Ok(AlmostPeriods { members, max_gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Angle;

    #[test]
    fn table_symmetry_and_bounds() {
        let ctx = PhiContext::golden();
        let spec = BijectiveRecurrenceSpec::new(
            4,
            1,
            vec![
                Angle::ZERO,
                Angle::ZERO,
                Angle::phi_multiple(1),
                Angle::ZERO,
            ],
        )
        .unwrap();
        let mut t = EtaTable::exact_bijective(spec, ctx);
        t.ensure(300).unwrap();
        assert_eq!(t.get(0), Some(Complex64::new(1.0, 0.0)));
        for m in 1..=300 {
            assert_eq!(t.get(-m).unwrap(), t.get(m).unwrap().conj());
            assert!(t.get(m).unwrap().norm() <= 1.0 + 1e-12);
        }
        assert!(t.get(301).is_none());
        assert_eq!(t.rows(-1, 1).unwrap().len(), 3);
    }

    #[test]
    fn almost_periods_trivial_cases() {
        let ones = EtaTable::explicit(vec![Complex64::new(1.0, 0.0); 11]).unwrap();
        let p = almost_period_set(&ones, 0.1, 10).unwrap();
        assert_eq!(p.members.len(), 21);
        assert_eq!(p.max_gap, Some(1));
        let mut delta = vec![Complex64::new(0.0, 0.0); 11];
        delta[0] = Complex64::new(1.0, 0.0);
        let d = EtaTable::explicit(delta).unwrap();
        assert_eq!(almost_period_set(&d, 0.5, 10).unwrap().members, vec![0]);
        assert_eq!(almost_period_set(&d, 0.5, 10).unwrap().max_gap, None);
        assert_eq!(almost_period_set(&d, 1.5, 10).unwrap().members.len(), 21);
        assert!(almost_period_set(&d, 0.5, 11).is_err());
    }

    #[test]
    fn explicit_tables_do_not_grow() {
        let mut t = EtaTable::explicit(vec![Complex64::new(1.0, 0.0); 3]).unwrap();
        assert!(matches!(t.ensure(5), Err(EtaError::WindowTooSmall { .. })));
    }
}
