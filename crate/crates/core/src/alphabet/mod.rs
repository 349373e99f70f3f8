//! Compact alphabets: finite cyclic groups, the circle (restricted to the
//! subgroup `{q + kφ}`), finite products of those, and `ℕ₀ ∪ {∞}`.

mod angle;
mod cyclotomic;

use std::fmt;

use num_rational::Ratio;

pub use angle::{eval_unit, Angle, PhiContext, GOLDEN_PHI};
pub use cyclotomic::{cyclotomic_polynomial, exact_sum_is_zero, ZeroTest, MAX_CYCLOTOMIC_ORDER};

use crate::error::AlphabetError;

/// Element of the one-point compactification `ℕ₀ ∪ {∞}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ExtNat {
    Finite(u64),
    Infinity,
}

impl ExtNat {
    /// `2^{-n}`, with `2^{-∞} = 0`; the metric is `|2^{-m} - 2^{-n}|`.
    pub fn embedding(self) -> f64 {
        match self {
            ExtNat::Finite(n) => 0.5f64.powi(n.min(2000) as i32),
            ExtNat::Infinity => 0.0,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(n) => write!(f, "{n}"),
            ExtNat::Infinity => write!(f, "∞"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum AlphabetKind {
    Cyclic(u32),
    Circle,
    Product(Vec<AlphabetKind>),
    ExtNat,
}

impl AlphabetKind {
    pub fn identity(&self) -> Result<Letter, AlphabetError> {
        Ok(match self {
            AlphabetKind::Cyclic(n) => Letter::cyclic(*n, 0)?,
            AlphabetKind::Circle => Letter::Circle(Angle::ZERO),
            AlphabetKind::Product(ks) => {
                Letter::Product(ks.iter().map(|k| k.identity()).collect::<Result<_, _>>()?)
            }
            AlphabetKind::ExtNat => return Err(AlphabetError::NotAGroup(self.to_string())),
        })
    }

    pub fn is_finite(&self) -> bool {
        match self {
            AlphabetKind::Cyclic(_) => true,
            AlphabetKind::Circle | AlphabetKind::ExtNat => false,
            AlphabetKind::Product(ks) => ks.iter().all(|k| k.is_finite()),
        }
    }
}

impl fmt::Display for AlphabetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphabetKind::Cyclic(n) => write!(f, "C{n}"),
            AlphabetKind::Circle => write!(f, "S1"),
            AlphabetKind::Product(ks) => {
                let parts: Vec<String> = ks.iter().map(|k| k.to_string()).collect();
                write!(f, "{}", parts.join("×"))
            }
            AlphabetKind::ExtNat => write!(f, "N0∪{{∞}}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Letter {
    Cyclic { modulus: u32, residue: u32 },
    Circle(Angle),
    Product(Vec<Letter>),
    ExtNat(ExtNat),
}

impl Letter {
    pub fn cyclic(modulus: u32, residue: i64) -> Result<Letter, AlphabetError> {
        if modulus == 0 {
            return Err(AlphabetError::ZeroModulus);
        }
        Ok(Letter::Cyclic {
            modulus,
            residue: residue.rem_euclid(modulus as i64) as u32,
        })
    }

    pub fn circle(t: Angle) -> Letter {
        Letter::Circle(t)
    }

    pub fn kind(&self) -> AlphabetKind {
        match self {
            Letter::Cyclic { modulus, .. } => AlphabetKind::Cyclic(*modulus),
            Letter::Circle(_) => AlphabetKind::Circle,
            Letter::Product(ls) => AlphabetKind::Product(ls.iter().map(|l| l.kind()).collect()),
            Letter::ExtNat(_) => AlphabetKind::ExtNat,
        }
    }

    pub fn same_alphabet(&self, other: &Letter) -> bool {
        match (self, other) {
            (Letter::Cyclic { modulus: a, .. }, Letter::Cyclic { modulus: b, .. }) => a == b,
            (Letter::Circle(_), Letter::Circle(_)) => true,
            (Letter::ExtNat(_), Letter::ExtNat(_)) => true,
            (Letter::Product(a), Letter::Product(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.same_alphabet(y))
            }
            _ => false,
        }
    }

    pub fn compose(&self, other: &Letter) -> Result<Letter, AlphabetError> {
        compose(self, other)
    }

    pub fn inverse(&self) -> Result<Letter, AlphabetError> {
        Ok(match self {
            Letter::Cyclic { modulus, residue } => Letter::cyclic(*modulus, -(*residue as i64))?,
            Letter::Circle(t) => Letter::Circle(-*t),
            Letter::Product(ls) => {
                Letter::Product(ls.iter().map(|l| l.inverse()).collect::<Result<_, _>>()?)
            }
            Letter::ExtNat(_) => return Err(AlphabetError::NotAGroup(self.kind().to_string())),
        })
    }

    /// Substitutes a rational `φ` in every circle component.
    pub fn resolve(&self, ctx: &PhiContext) -> Letter {
        match self {
            Letter::Circle(t) => Letter::Circle(t.resolve(ctx)),
            Letter::Product(ls) => Letter::Product(ls.iter().map(|l| l.resolve(ctx)).collect()),
            other => other.clone(),
        }
    }

    /// Multiplicative order, `None` when infinite (or for `ℕ₀ ∪ {∞}`).
    pub fn order(&self, ctx: &PhiContext) -> Option<u64> {
        match self {
            Letter::Cyclic { modulus, residue } => {
                let g = num_integer::gcd(*modulus, *residue);
                Some((*modulus / g.max(1)) as u64).map(|o| if *residue == 0 { 1 } else { o })
            }
            Letter::Circle(t) => t.order(ctx),
            Letter::Product(ls) => ls.iter().try_fold(1u64, |acc, l| {
                l.order(ctx).map(|o| num_integer::lcm(acc, o))
            }),
            Letter::ExtNat(_) => None,
        }
    }

    /// Discrete metric on cyclic factors, arc length on the circle, max over
    /// products, `|2^{-m} - 2^{-n}|` on `ℕ₀ ∪ {∞}`.
    pub fn distance(&self, other: &Letter, ctx: &PhiContext) -> Result<f64, AlphabetError> {
        match (self, other) {
            (Letter::Cyclic { residue: a, .. }, Letter::Cyclic { residue: b, .. })
                if self.same_alphabet(other) =>
            {
                Ok(if a == b { 0.0 } else { 1.0 })
            }
            (Letter::Circle(a), Letter::Circle(b)) => {
                let x = (*a - *b).value(ctx);
                Ok(x.min(1.0 - x))
            }
            (Letter::Product(a), Letter::Product(b)) if self.same_alphabet(other) => a
                .iter()
                .zip(b)
                .try_fold(0.0f64, |acc, (x, y)| Ok(acc.max(x.distance(y, ctx)?))),
            (Letter::ExtNat(a), Letter::ExtNat(b)) => Ok((a.embedding() - b.embedding()).abs()),
            _ => Err(mismatch(self, other)),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Cyclic { residue, .. } => write!(f, "{residue}"),
            Letter::Circle(t) => write!(f, "{t}"),
            Letter::Product(ls) => {
                let parts: Vec<String> = ls.iter().map(|l| l.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
            Letter::ExtNat(n) => write!(f, "{n}"),
        }
    }
}

fn mismatch(a: &Letter, b: &Letter) -> AlphabetError {
    AlphabetError::AlphabetMismatch(a.kind().to_string(), b.kind().to_string())
}

/// Group product on cyclic, circle and product alphabets.
pub fn compose(a: &Letter, b: &Letter) -> Result<Letter, AlphabetError> {
    match (a, b) {
        (
            Letter::Cyclic {
                modulus: m,
                residue: x,
            },
            Letter::Cyclic {
                modulus: n,
                residue: y,
            },
        ) if m == n => Ok(Letter::Cyclic {
            modulus: *m,
            residue: ((*x as u64 + *y as u64) % *m as u64) as u32,
        }),
        (Letter::Circle(s), Letter::Circle(t)) => Ok(Letter::Circle(*s + *t)),
        (Letter::Product(xs), Letter::Product(ys)) if xs.len() == ys.len() => Ok(Letter::Product(
            xs.iter()
                .zip(ys)
                .map(|(x, y)| compose(x, y))
                .collect::<Result<_, _>>()?,
        )),
        (Letter::ExtNat(_), Letter::ExtNat(_)) => {
            Err(AlphabetError::NotAGroup(AlphabetKind::ExtNat.to_string()))
        }
        _ => Err(mismatch(a, b)),
    }
}

/// Unitary character of a compact abelian alphabet.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Character {
    /// `r ↦ e^{2πi·index·r/modulus}` on `C_modulus`.
    Cyclic {
        modulus: u32,
        index: u32,
    },
    /// `z ↦ zⁿ` on the circle.
    Circle(i64),
    Product(Vec<Character>),
    Trivial,
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Character::Cyclic { modulus, index } => write!(f, "chi_{index} mod {modulus}"),
            Character::Circle(n) => write!(f, "chi_{n}"),
            Character::Product(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                write!(f, "{}", parts.join(" ⊗ "))
            }
            Character::Trivial => write!(f, "trivial"),
        }
    }
}

impl serde::Serialize for Character {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The angle `t` with `χ(a) = e^{2πi t}`.
pub fn character_angle(chi: &Character, a: &Letter) -> Result<Angle, AlphabetError> {
    match (chi, a) {
        (Character::Trivial, _) => Ok(Angle::ZERO),
        (
            Character::Cyclic { modulus, index },
            Letter::Cyclic {
                modulus: n,
                residue,
            },
        ) if modulus == n => {
            let num = (*index as i64 * *residue as i64) % *n as i64;
            Ok(Angle::new(Ratio::new(num, *n as i64), 0))
        }
        (Character::Circle(n), Letter::Circle(t)) => Ok(t.scale(*n)),
        (Character::Product(cs), Letter::Product(ls)) if cs.len() == ls.len() => cs
            .iter()
            .zip(ls)
            .map(|(c, l)| character_angle(c, l))
            .sum::<Result<Angle, _>>(),
        _ => Err(AlphabetError::AlphabetMismatch(
            chi.to_string(),
            a.kind().to_string(),
        )),
    }
}

impl Character {
    pub fn angle(&self, a: &Letter) -> Result<Angle, AlphabetError> {
        character_angle(self, a)
    }
}
