//! Embedded example rules and a seeded generator of random cyclic rules.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::alphabet::{AlphabetKind, Angle, Letter};
use crate::classifier::CyclicFactor;
use crate::substitution::{Column, ConstantLengthRule, ExtNatRule, SpinRule, SubstitutionRule};

/// `[θ] ↦ [θ][θ][θα][θ]` on the circle.
pub fn rho1() -> ConstantLengthRule {
    ConstantLengthRule::circle(&[
        Angle::ZERO,
        Angle::ZERO,
        Angle::phi_multiple(1),
        Angle::ZERO,
    ])
    .expect("valid columns")
}

/// `[θ] ↦ [θ][1][θα][θ]`: one coincidence at position 1.
pub fn rho2() -> ConstantLengthRule {
    ConstantLengthRule::new(
        AlphabetKind::Circle,
        vec![
            Column::Translation(Letter::Circle(Angle::ZERO)),
            Column::Constant(Letter::Circle(Angle::ZERO)),
            Column::Translation(Letter::Circle(Angle::phi_multiple(1))),
            Column::Translation(Letter::Circle(Angle::ZERO)),
        ],
    )
    .expect("valid columns")
}

/// Spin matrix `[[1, −1], [α, α]]`.
pub fn spin() -> SpinRule {
    SpinRule::new(vec![
        vec![Angle::ZERO, Angle::rational(1, 2)],
        vec![Angle::phi_multiple(1), Angle::phi_multiple(1)],
    ])
    .expect("square matrix")
}

/// `[a] ↦ [a][ag]⋯[ag^{n-1}][a]` on `C_n` with `g` a generator.
pub fn cyclic(n: u32) -> ConstantLengthRule {
    assert!(n >= 1, "cyclic group order must be positive");
    CyclicFactor {
        n: n as u64,
        g0: Angle::ZERO,
        g: Angle::rational(1, n as i64),
    }
    .rule()
}

/// `[θ] ↦ [θ][θ·(g,α)][θ]` on `C_2 × S¹`.
pub fn c2xs1() -> ConstantLengthRule {
    let alphabet = AlphabetKind::Product(vec![AlphabetKind::Cyclic(2), AlphabetKind::Circle]);
    let e = Letter::Product(vec![
        Letter::Cyclic {
            modulus: 2,
            residue: 0,
        },
        Letter::Circle(Angle::ZERO),
    ]);
    let g = Letter::Product(vec![
        Letter::Cyclic {
            modulus: 2,
            residue: 1,
        },
        Letter::Circle(Angle::phi_multiple(1)),
    ]);
    ConstantLengthRule::translations(alphabet, vec![e.clone(), g, e]).expect("valid columns")
}

/// Bijective rule on `C_k` with `L` uniformly random translation columns.
pub fn random_cyclic_rule<R: Rng>(rng: &mut R, k: u32, length: usize) -> ConstantLengthRule {
    assert!(k >= 1 && length >= 2, "need k >= 1 and L >= 2");
    let betas = (0..length)
        .map(|_| Letter::Cyclic {
            modulus: k,
            residue: rng.gen_range(0..k),
        })
        .collect();
    ConstantLengthRule::translations(AlphabetKind::Cyclic(k), betas).expect("valid columns")
}

/// Names accepted for embedded rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Rho1,
    Rho2,
    Spin,
    ExtNat,
    Cyclic(u32),
    C2xS1,
}

impl Builtin {
    pub fn rule(self) -> SubstitutionRule {
        match self {
            Builtin::Rho1 => rho1().into(),
            Builtin::Rho2 => rho2().into(),
            Builtin::Spin => spin().into(),
            Builtin::ExtNat => SubstitutionRule::ExtNat(ExtNatRule),
            Builtin::Cyclic(n) => cyclic(n).into(),
            Builtin::C2xS1 => c2xs1().into(),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Rho1 => write!(f, "rho1"),
            Builtin::Rho2 => write!(f, "rho2"),
            Builtin::Spin => write!(f, "spin"),
            Builtin::ExtNat => write!(f, "extnat"),
            Builtin::Cyclic(n) => write!(f, "cyclic({n})"),
            Builtin::C2xS1 => write!(f, "c2xs1"),
        }
    }
}

impl FromStr for Builtin {
    type Err = String;

    /// `rho1`, `rho2`, `spin`, `extnat`, `c2xs1`, `cyclic(n)` or `cyclic<n>`.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        match s {
            "rho1" => return Ok(Builtin::Rho1),
            "rho2" => return Ok(Builtin::Rho2),
            "spin" => return Ok(Builtin::Spin),
            "extnat" | "extnat-example" => return Ok(Builtin::ExtNat),
            "c2xs1" => return Ok(Builtin::C2xS1),
            _ => {}
        }
        let arg = s
            .strip_prefix("cyclic")
            .map(|r| r.trim_start_matches('(').trim_end_matches(')'))
            .ok_or_else(|| format!("unknown builtin '{s}'"))?;
        match arg.parse::<u32>() {
            Ok(n) if n >= 1 => Ok(Builtin::Cyclic(n)),
            _ => Err(format!("bad cyclic order in '{s}'")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rules_print_as_quoted() {
        assert_eq!(rho1().to_string(), "[θ] ↦ [θ][θ][θα][θ]");
        assert_eq!(rho2().to_string(), "[θ] ↦ [θ][1][θα][θ]");
        assert_eq!(c2xs1().to_string(), "[θ] ↦ [θ][θ·(g,α)][θ]");
        assert_eq!(
            spin().to_string(),
            "(θ,0) ↦ (θ,0)(−θ,1)\n(θ,1) ↦ (θα,0)(θα,1)"
        );
        assert_eq!(cyclic(2).to_string(), "[a] ↦ [a][ag][a]");
    }

    #[test]
    fn names_round_trip() {
        for b in [
            Builtin::Rho1,
            Builtin::Rho2,
            Builtin::Spin,
            Builtin::ExtNat,
            Builtin::Cyclic(5),
            Builtin::C2xS1,
        ] {
            assert_eq!(b.to_string().parse::<Builtin>().unwrap(), b);
        }
        assert_eq!("cyclic3".parse::<Builtin>().unwrap(), Builtin::Cyclic(3));
        assert!("cyclic(0)".parse::<Builtin>().is_err());
        assert!("rho3".parse::<Builtin>().is_err());
    }

    #[test]
    fn random_rules_are_seeded() {
        let a = random_cyclic_rule(&mut ChaCha8Rng::seed_from_u64(7), 6, 5);
        let b = random_cyclic_rule(&mut ChaCha8Rng::seed_from_u64(7), 6, 5);
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
        assert!(a.is_bijective());
    }
}
