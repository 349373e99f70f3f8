use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::AlphabetError;

/// Golden-ratio conjugate, the default stand-in for the formal irrational.
pub const GOLDEN_PHI: f64 = 0.618033988749895;

/// Element `q + k·φ (mod 1)` of the circle, with `q` rational and `φ` formal.
///
/// Equality is structural: two angles are equal iff their normalized `q` and
/// their `k` agree. Use [`Angle::same_as`] when `φ` has been declared rational.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Angle {
    q: Ratio<i64>,
    k: i64,
}

fn frac(q: Ratio<i64>) -> Ratio<i64> {
    q - q.floor()
}

impl Angle {
    pub const ZERO: Angle = Angle {
        q: Ratio::new_raw(0, 1),
        k: 0,
    };

    pub fn new(q: Ratio<i64>, k: i64) -> Self {
        Angle { q: frac(q), k }
    }

    /// `num/den (mod 1)`. Panics if `den == 0`.
    pub fn rational(num: i64, den: i64) -> Self {
        Angle::new(Ratio::new(num, den), 0)
    }

    /// `k·φ`.
    pub fn phi_multiple(k: i64) -> Self {
        Angle {
            q: Ratio::zero(),
            k,
        }
    }

    pub fn q(&self) -> Ratio<i64> {
        self.q
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero() && self.k == 0
    }

    /// `n·t`, the image of `t` under `z ↦ zⁿ`.
    pub fn scale(self, n: i64) -> Self {
        Angle::new(self.q * n, self.k * n)
    }

    /// Substitutes a rational `φ` exactly; identity for irrational contexts.
    pub fn resolve(self, ctx: &PhiContext) -> Self {
        match ctx.exact {
            Some(r) if self.k != 0 => Angle::new(self.q + r * self.k, 0),
            _ => self,
        }
    }

    /// Equality under the context's notion of `φ`.
    pub fn same_as(self, other: Angle, ctx: &PhiContext) -> bool {
        self.resolve(ctx) == other.resolve(ctx)
    }

    /// Multiplicative order of `e^{2πi t}`, `None` when infinite.
    pub fn order(self, ctx: &PhiContext) -> Option<u64> {
        let t = self.resolve(ctx);
        if t.k != 0 {
            None
        } else {
            Some(*t.q.denom() as u64)
        }
    }

    /// Representative in `[0, 1)` as a float.
    pub fn value(self, ctx: &PhiContext) -> f64 {
        let t = self.resolve(ctx);
        let base = *t.q.numer() as f64 / *t.q.denom() as f64;
        if t.k == 0 {
            return base;
        }
        let x = (base + (t.k as f64 * ctx.phi).rem_euclid(1.0)).rem_euclid(1.0);
        if x >= 1.0 {
            0.0
        } else {
            x
        }
    }

    /// `e^{2πi t}`. Quarter turns are returned exactly.
    pub fn eval_unit(self, ctx: &PhiContext) -> Complex64 {
        let t = self.resolve(ctx);
        if t.k == 0 {
            let (n, d) = (*t.q.numer(), *t.q.denom());
            match (n, d) {
                (0, 1) => return Complex64::new(1.0, 0.0),
                (1, 2) => return Complex64::new(-1.0, 0.0),
                (1, 4) => return Complex64::new(0.0, 1.0),
                (3, 4) => return Complex64::new(0.0, -1.0),
                _ => {}
            }
        }
        let mut x = t.value(ctx);
        if x >= 0.5 {
            x -= 1.0;
        }
        let (s, c) = (2.0 * std::f64::consts::PI * x).sin_cos();
        Complex64::new(c, s)
    }
}

/// `e^{2πi(q + kφ)}` at the context's precision.
pub fn eval_unit(t: Angle, ctx: &PhiContext) -> Complex64 {
    t.eval_unit(ctx)
}

impl Default for Angle {
    fn default() -> Self {
        Angle::ZERO
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle::new(self.q + rhs.q, self.k + rhs.k)
    }
}

impl AddAssign for Angle {
    fn add_assign(&mut self, rhs: Angle) {
        *self = *self + rhs;
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle::new(-self.q, -self.k)
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        self + (-rhs)
    }
}

impl Sum for Angle {
    fn sum<I: Iterator<Item = Angle>>(iter: I) -> Angle {
        iter.fold(Angle::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Angle {
    /// `0`, `1/4`, `φ`, `-2φ`, `1/4+φ`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let phi_part = match self.k {
            0 => String::new(),
            1 => "φ".to_string(),
            -1 => "-φ".to_string(),
            k => format!("{k}φ"),
        };
        if self.q.is_zero() {
            if phi_part.is_empty() {
                write!(f, "0")
            } else {
                write!(f, "{phi_part}")
            }
        } else if phi_part.is_empty() {
            write!(f, "{}", self.q)
        } else if self.k > 0 {
            write!(f, "{}+{phi_part}", self.q)
        } else {
            write!(f, "{}{phi_part}", self.q)
        }
    }
}

impl serde::Serialize for Angle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Angle", 2)?;
        st.serialize_field("q", &self.q.to_string())?;
        st.serialize_field("k", &self.k)?;
        st.end()
    }
}

/// Numeric value of `φ`, and its exact fraction when declared rational.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiContext {
    phi: f64,
    exact: Option<Ratio<i64>>,
}

impl PhiContext {
    pub fn irrational(phi: f64) -> Result<Self, AlphabetError> {
        if !(phi > 0.0 && phi < 1.0) {
            return Err(AlphabetError::InvalidPhi(phi));
        }
        Ok(PhiContext { phi, exact: None })
    }

    pub fn rational(num: i64, den: i64) -> Result<Self, AlphabetError> {
        if den == 0 {
            return Err(AlphabetError::InvalidPhi(f64::NAN));
        }
        let r = Ratio::new(num, den);
        if r <= Ratio::zero() || r >= Ratio::one() {
            return Err(AlphabetError::InvalidPhi(num as f64 / den as f64));
        }
        Ok(PhiContext {
            phi: *r.numer() as f64 / *r.denom() as f64,
            exact: Some(r),
        })
    }

    pub fn golden() -> Self {
        PhiContext {
            phi: GOLDEN_PHI,
            exact: None,
        }
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn is_rational(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact(&self) -> Option<Ratio<i64>> {
        self.exact
    }
}

impl Default for PhiContext {
    fn default() -> Self {
        PhiContext::golden()
    }
}
