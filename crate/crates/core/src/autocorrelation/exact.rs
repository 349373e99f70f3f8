//! Exact autocorrelation of pseudo-fixed points of bijective rules.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::alphabet::{character_angle, Angle, Character, PhiContext};
use crate::error::{EtaError, SubstitutionError};
use crate::substitution::PseudoFixedSetup;

/// Length, anchor and character values `c_r = χ(β_r)` of a translation rule.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct BijectiveRecurrenceSpec {
    length: usize,
    shift: usize,
    coefficients: Vec<Angle>,
}

impl BijectiveRecurrenceSpec {
    pub fn new(length: usize, shift: usize, coefficients: Vec<Angle>) -> Result<Self, EtaError> {
        if length < 2 || coefficients.len() != length || shift >= length {
            return Err(EtaError::InvalidParameter(format!(
                "need L >= 2, L coefficients and 0 <= s < L (L={length}, s={shift}, {} coefficients)",
                coefficients.len()
            )));
        }
        Ok(BijectiveRecurrenceSpec {
            length,
            shift,
            coefficients,
        })
    }

    /// Character values of the normalized columns of `setup`.
    pub fn from_setup(setup: &PseudoFixedSetup, chi: &Character) -> Result<Self, EtaError> {
        let mut cs = Vec::with_capacity(setup.length());
        for c in setup.base.columns() {
            if !c.is_translation() {
                return Err(SubstitutionError::Unsupported(
                    "exact recurrence needs translation columns".into(),
                )
                .into());
            }
            cs.push(character_angle(chi, c.letter())?);
        }
        Self::new(setup.length(), setup.shift, cs)
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn coefficients(&self) -> &[Angle] {
        &self.coefficients
    }

    fn c(&self, i: i64) -> Angle {
        self.coefficients[i.rem_euclid(self.length as i64) as usize]
    }
}

/// `η(1) = Σ_{r=0}^{L-2} c_r c̄_{r+1} / (L - c_{L-1} c̄_0)`.
pub fn eta1_closed_form(spec: &BijectiveRecurrenceSpec, ctx: &PhiContext) -> Complex64 {
    let l = spec.length;
    let cs = &spec.coefficients;
    let num: Complex64 = (0..l - 1).map(|r| (cs[r] - cs[r + 1]).eval_unit(ctx)).sum();
    let den = Complex64::new(l as f64, 0.0) - (cs[l - 1] - cs[0]).eval_unit(ctx);
    num / den
}

/// `η(L-1) = (1/L)[c_0 c̄_{L-1} + η(1) Σ_{i=1}^{L-1} c_i c̄_{i-1}]`.
pub fn eta_l_minus_one_closed_form(spec: &BijectiveRecurrenceSpec, ctx: &PhiContext) -> Complex64 {
    let l = spec.length;
    let cs = &spec.coefficients;
    let eta1 = eta1_closed_form(spec, ctx);
    let tail: Complex64 = (1..l).map(|i| (cs[i] - cs[i - 1]).eval_unit(ctx)).sum();
    ((cs[0] - cs[l - 1]).eval_unit(ctx) + eta1 * tail) / l as f64
}

/// Memoized top-down evaluator of the bijective recurrence.
#[derive(Clone, Debug)]
pub struct BijectiveEta {
    spec: BijectiveRecurrenceSpec,
    ctx: PhiContext,
    memo: HashMap<i64, Complex64>,
}

impl BijectiveEta {
    pub fn new(spec: BijectiveRecurrenceSpec, ctx: PhiContext) -> Self {
        let mut memo = HashMap::new();
        memo.insert(0, Complex64::new(1.0, 0.0));
        memo.insert(1, eta1_closed_form(&spec, &ctx));
        BijectiveEta { spec, ctx, memo }
    }

    pub fn spec(&self) -> &BijectiveRecurrenceSpec {
        &self.spec
    }

    pub fn get(&mut self, m: i64) -> Complex64 {
        if m < 0 {
            return self.get(-m).conj();
        }
        if let Some(&v) = self.memo.get(&m) {
            return v;
        }
        let l = self.spec.length as i64;
        let s = self.spec.shift as i64;
        let (q, k) = (m.div_euclid(l), m.rem_euclid(l));
        let mut acc = Complex64::new(0.0, 0.0);
        for r in -s..=l - 1 - s {
            let f = if r + k <= l - 1 - s {
                0
            } else {
                (r + k + s).div_euclid(l)
            };
            let w = (self.spec.c(r + s) - self.spec.c(r + k + s)).eval_unit(&self.ctx);
            acc += self.get(q + f) * w;
        }
        let v = acc / l as f64;
        self.memo.insert(m, v);
        v
    }
}

pub fn eta_exact_bijective(spec: &BijectiveRecurrenceSpec, m: i64, ctx: &PhiContext) -> Complex64 {
    BijectiveEta::new(spec.clone(), *ctx).get(m)
}

/// `η(Lm) = p/L + ((L-p)/L)·η(m)` for a rule with `p` constant columns.
pub fn eta_coincidence_scale(
    eta_m: Complex64,
    p: usize,
    length: usize,
) -> Result<Complex64, EtaError> {
    if length < 2 || p == 0 || p > length {
        return Err(EtaError::InvalidParameter(format!(
            "need 1 <= p <= L and L >= 2, got p={p}, L={length}"
        )));
    }
    let l = length as f64;
    Ok(Complex64::new(p as f64 / l, 0.0) + eta_m * ((length - p) as f64 / l))
}
