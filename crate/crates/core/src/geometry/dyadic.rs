use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exact `mantissa / 2^exp`, kept with an odd mantissa unless `exp = 0`.
///
/// Arithmetic panics on `i128` overflow; every quantity in this crate stays
/// far below that range.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Dyadic {
    mantissa: i128,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic {
        mantissa: 0,
        exp: 0,
    };
    pub const ONE: Dyadic = Dyadic {
        mantissa: 1,
        exp: 0,
    };
    pub const FIVE_HALVES: Dyadic = Dyadic {
        mantissa: 5,
        exp: 1,
    };

    pub fn new(mantissa: i128, exp: u32) -> Self {
        let mut d = Dyadic { mantissa, exp };
        d.normalize();
        d
    }

    pub fn from_int(n: i128) -> Self {
        Dyadic {
            mantissa: n,
            exp: 0,
        }
    }

    /// `2^{-n}`.
    pub fn half_pow(n: u32) -> Self {
        Dyadic {
            mantissa: 1,
            exp: n,
        }
    }

    pub fn mantissa(&self) -> i128 {
        self.mantissa
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    fn normalize(&mut self) {
        if self.mantissa == 0 {
            self.exp = 0;
            return;
        }
        let tz = self.mantissa.trailing_zeros().min(self.exp);
        self.mantissa >>= tz;
        self.exp -= tz;
    }

    fn scaled(&self, exp: u32) -> i128 {
        let shift = exp - self.exp;
        assert!(shift < 127, "dyadic exponent out of range");
        self.mantissa
            .checked_mul(1i128 << shift)
            .expect("dyadic mantissa overflow")
    }

    pub fn to_f64(&self) -> f64 {
        self.mantissa as f64 / 2f64.powi(self.exp as i32)
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let e = self.exp.max(rhs.exp);
        let m = self
            .scaled(e)
            .checked_add(rhs.scaled(e))
            .expect("dyadic mantissa overflow");
        Dyadic::new(m, e)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -self.mantissa,
            exp: self.exp,
        }
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        let m = self
            .mantissa
            .checked_mul(rhs.mantissa)
            .expect("dyadic mantissa overflow");
        Dyadic::new(m, self.exp + rhs.exp)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.max(other.exp);
        self.scaled(e).cmp(&other.scaled(e))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::iter::Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Dyadic {
    /// `m` for integers, `m/2^e` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.mantissa)
        } else {
            write!(f, "{}/2^{}", self.mantissa, self.exp)
        }
    }
}

impl serde::Serialize for Dyadic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
