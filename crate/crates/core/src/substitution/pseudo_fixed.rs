use super::{Column, ConstantLengthRule, TwoSidedWord};
use crate::alphabet::{compose, Letter};
use crate::error::SubstitutionError;

/// Largest power of the rule tried when looking for an internal anchor column.
pub const MAX_POWER: u32 = 4;

/// Normalized power `ϱ'` of a rule together with the anchor column `s`, so
/// that the generated word satisfies `w_{L'm+k-s} = ϱ'_k(w_m)`.
#[derive(Clone, PartialEq, Debug)]
pub struct PseudoFixedSetup {
    pub base: ConstantLengthRule,
    pub power: u32,
    pub shift: usize,
    pub seed: Letter,
}

impl PseudoFixedSetup {
    pub fn length(&self) -> usize {
        self.base.len()
    }
}

/// Picks the power and anchor column of `rule`.
///
/// Translation rules: the first internal identity column of the smallest
/// power with an internal position, else column 1; every column is then
/// multiplied by the inverse of the anchor's translation. Rules with
/// constant columns: the smallest internal constant position; nothing is
/// renormalized and the seed becomes that constant.
pub fn normalize_pseudo_fixed(
    rule: &ConstantLengthRule,
    seed: &Letter,
) -> Result<PseudoFixedSetup, SubstitutionError> {
    let no_internal = SubstitutionError::NoInternalColumn {
        length: rule.len(),
        max_power: MAX_POWER,
    };
    if rule.len() < 2 {
        return Err(no_internal);
    }
    if !seed.same_alphabet(&rule.alphabet().identity()?) {
        return Err(crate::error::AlphabetError::AlphabetMismatch(
            rule.alphabet().to_string(),
            seed.kind().to_string(),
        )
        .into());
    }
    if rule.constant_count() > 0 {
        for m in 1..=MAX_POWER {
            let p = rule.power(m)?;
            if p.len() < 3 {
                continue;
            }
            if let Some(s) = (1..p.len() - 1).find(|&s| !p.column(s).is_translation()) {
                let seed = p.column(s).letter().clone();
                return Ok(PseudoFixedSetup {
                    base: p,
                    power: m,
                    shift: s,
                    seed,
                });
            }
        }
        return Err(no_internal);
    }
    let m = (1..=MAX_POWER)
        .find(|&m| rule.len().pow(m) >= 3)
        .ok_or(no_internal)?;
    let p = rule.power(m)?;
    let identity = rule.alphabet().identity()?;
    let s = (1..p.len() - 1)
        .find(|&s| p.column(s).letter() == &identity)
        .unwrap_or(1);
    let inv = p.column(s).letter().inverse()?;
    let columns = p
        .columns()
        .iter()
        .map(|c| compose(c.letter(), &inv).map(Column::Translation))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PseudoFixedSetup {
        base: ConstantLengthRule::new(rule.alphabet().clone(), columns)?,
        power: m,
        shift: s,
        seed: seed.clone(),
    })
}

/// Window `[-radius, radius]` of the pseudo-fixed word grown from the seed.
///
/// Each round recomputes only the coordinates that land in the target
/// window. One extra round is run at the end and compared letter by letter.
pub fn pseudo_fixed_prefix(
    setup: &PseudoFixedSetup,
    radius: u64,
) -> Result<TwoSidedWord, SubstitutionError> {
    let r = radius as i64;
    let lp = setup.length() as i64;
    let s = setup.shift as i64;
    let mut word = TwoSidedWord::single(setup.seed.clone());
    loop {
        let lo = (lp * word.min_coord() - s).max(-r);
        let hi = (lp * word.max_coord() + lp - 1 - s).min(r);
        let mut letters = Vec::with_capacity((hi - lo + 1) as usize);
        for n in lo..=hi {
            let m = (n + s).div_euclid(lp);
            let k = (n + s).rem_euclid(lp) as usize;
            let prev = word.get(m).expect("preimage lies in the previous window");
            letters.push(setup.base.column(k).apply(prev)?);
        }
        let next = TwoSidedWord::new(letters, (-lo) as usize)?;
        for n in word.min_coord()..=word.max_coord() {
            if next.get(n) != word.get(n) {
                return Err(SubstitutionError::NotNested { coordinate: n });
            }
        }
        if word.min_coord() == -r && word.max_coord() == r {
            return Ok(word);
        }
        word = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{AlphabetKind, Angle};

    fn circle(t: Angle) -> Letter {
        Letter::Circle(t)
    }

    fn rho1() -> ConstantLengthRule {
        ConstantLengthRule::circle(&[
            Angle::ZERO,
            Angle::ZERO,
            Angle::phi_multiple(1),
            Angle::ZERO,
        ])
        .unwrap()
    }

    fn rho2() -> ConstantLengthRule {
        ConstantLengthRule::new(
            AlphabetKind::Circle,
            vec![
                Column::Translation(circle(Angle::ZERO)),
                Column::Constant(circle(Angle::ZERO)),
                Column::Translation(circle(Angle::phi_multiple(1))),
                Column::Translation(circle(Angle::ZERO)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn three_translations_normalize_by_middle() {
        let (a, b, c) = (
            Angle::phi_multiple(1),
            Angle::rational(1, 5),
            Angle::phi_multiple(3),
        );
        let rule = ConstantLengthRule::circle(&[a, b, c]).unwrap();
        let setup = normalize_pseudo_fixed(&rule, &circle(Angle::ZERO)).unwrap();
        assert_eq!((setup.power, setup.shift), (1, 1));
        assert_eq!(
            setup.base,
            ConstantLengthRule::circle(&[a - b, Angle::ZERO, c - b]).unwrap()
        );
    }

    #[test]
    fn rho1_is_already_normalized() {
        let setup = normalize_pseudo_fixed(&rho1(), &circle(Angle::ZERO)).unwrap();
        assert_eq!((setup.power, setup.shift), (1, 1));
        assert_eq!(setup.base, rho1());
    }

    #[test]
    fn rho2_anchors_at_the_coincidence() {
        let seed = circle(Angle::rational(1, 7));
        let setup = normalize_pseudo_fixed(&rho2(), &seed).unwrap();
        assert_eq!((setup.power, setup.shift), (1, 1));
        assert_eq!(setup.seed, circle(Angle::ZERO));
        assert_eq!(setup.base, rho2());
    }

    #[test]
    fn length_two_needs_the_square() {
        let rule = ConstantLengthRule::circle(&[Angle::ZERO, Angle::phi_multiple(1)]).unwrap();
        let setup = normalize_pseudo_fixed(&rule, &circle(Angle::ZERO)).unwrap();
        assert_eq!((setup.power, setup.shift, setup.length()), (2, 1, 4));
        assert_eq!(
            setup.base.column(1),
            &Column::Translation(circle(Angle::ZERO))
        );
    }

    #[test]
    fn length_one_has_no_internal_column() {
        let rule = ConstantLengthRule::circle(&[Angle::ZERO]).unwrap();
        assert!(matches!(
            normalize_pseudo_fixed(&rule, &circle(Angle::ZERO)),
            Err(SubstitutionError::NoInternalColumn { .. })
        ));
    }

    #[test]
    fn rho1_window_radius_two() {
        let setup = normalize_pseudo_fixed(&rho1(), &circle(Angle::ZERO)).unwrap();
        let w = pseudo_fixed_prefix(&setup, 2).unwrap();
        assert_eq!(w.to_string(), "[0][0] | [0][φ][0]");
        // the window grown from the two-letter seed 0|0 occurs inside
        let big = pseudo_fixed_prefix(&setup, 64).unwrap();
        let alpha = circle(Angle::phi_multiple(1));
        let zero = circle(Angle::ZERO);
        let pattern = [alpha.clone(), zero.clone(), zero.clone(), zero, alpha];
        assert!(big.letters().windows(5).any(|x| x == pattern));
    }

    #[test]
    fn rho2_window_places_ones_on_a_progression() {
        let setup = normalize_pseudo_fixed(&rho2(), &circle(Angle::ZERO)).unwrap();
        let w = pseudo_fixed_prefix(&setup, 40).unwrap();
        let one = circle(Angle::ZERO);
        for m in -10..=10i64 {
            assert_eq!(w.get(4 * m), Some(&one));
        }
        assert_eq!(w.get(1), Some(&circle(Angle::phi_multiple(1))));
    }

    #[test]
    fn radius_zero_is_the_seed() {
        let seed = circle(Angle::rational(1, 3));
        let setup = normalize_pseudo_fixed(&rho1(), &seed).unwrap();
        assert_eq!(
            pseudo_fixed_prefix(&setup, 0).unwrap(),
            TwoSidedWord::single(seed)
        );
    }

    #[test]
    fn supertile_relation_and_nesting() {
        for rule in [rho1(), rho2()] {
            let setup = normalize_pseudo_fixed(&rule, &circle(Angle::ZERO)).unwrap();
            let (lp, s) = (setup.length() as i64, setup.shift as i64);
            let w = pseudo_fixed_prefix(&setup, 300).unwrap();
            for m in -70..=70i64 {
                for k in 0..lp {
                    let lhs = w.get(lp * m + k - s).unwrap();
                    let rhs = setup
                        .base
                        .column(k as usize)
                        .apply(w.get(m).unwrap())
                        .unwrap();
                    assert_eq!(lhs, &rhs);
                }
            }
            let smaller = pseudo_fixed_prefix(&setup, 299).unwrap();
            assert_eq!(w.window(-299, 299).unwrap(), smaller);
        }
    }

    #[test]
    fn broken_setup_is_not_nested() {
        let mut setup = normalize_pseudo_fixed(&rho1(), &circle(Angle::ZERO)).unwrap();
        setup.shift = 2;
        assert!(matches!(
            pseudo_fixed_prefix(&setup, 5),
            Err(SubstitutionError::NotNested { coordinate: 0 })
        ));
    }
}
