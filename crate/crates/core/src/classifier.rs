//! Per-character spectral verdicts for the supported rule families.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::alphabet::{
    character_angle, exact_sum_is_zero, Angle, Character, Letter, PhiContext, ZeroTest,
};
use crate::autocorrelation::{eta1_closed_form, BijectiveRecurrenceSpec};
use crate::error::ClassifyError;
use crate::substitution::{
    alphabet_net, normalize_pseudo_fixed, primitivity_probe_with_net, pseudo_fixed_prefix, Column,
    ConstantLengthRule, ProbeConfig, ProbeOutcome, SpinRule, SubstitutionRule, TwoSidedWord,
};

pub const BIJECTIVE_DICHOTOMY: &str = "bijective-dichotomy";
pub const COINCIDENCE_PURE_POINT: &str = "coincidence-pure-point";
pub const SPIN_TRIVIAL_CHARACTER: &str = "spin-trivial-character";
pub const SPIN_UNITARY: &str = "spin-unitary";
pub const SPIN_RANK_ONE: &str = "spin-rank-one";
pub const SPIN_UNRESOLVED: &str = "spin-unresolved";

/// Finite subgroups larger than this are probed on the full ε-net instead.
const MAX_SUBGROUP: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum SpectralKind {
    PurePoint,
    PurelySingularContinuous,
    Lebesgue,
    Mixed,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
    pub abs: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        ComplexValue {
            re: z.re,
            im: z.im,
            abs: z.norm(),
        }
    }
}

/// Periodic factor `[a] ↦ [ag₀][ag₀g]⋯[ag₀g^{n-1}][ag₀]` with `n = ord(g)`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct CyclicFactor {
    pub n: u64,
    pub g0: Angle,
    pub g: Angle,
}

impl CyclicFactor {
    /// Order of the cyclic group carrying the factor.
    pub fn modulus(&self) -> u32 {
        let d0 = *self.g0.q().denom() as u64;
        let d1 = *self.g.q().denom() as u64;
        num_integer::lcm(d0, d1) as u32
    }

    fn residue(&self, t: Angle) -> i64 {
        let n = self.modulus() as i64;
        (t.q() * n).to_integer()
    }

    pub fn rule(&self) -> ConstantLengthRule {
        let n = self.modulus();
        let mut columns: Vec<Column> = (0..self.n as i64)
            .map(|j| {
                let r = self.residue(self.g0 + self.g.scale(j));
                Column::Translation(Letter::Cyclic {
                    modulus: n,
                    residue: r.rem_euclid(n as i64) as u32,
                })
            })
            .collect();
        columns.push(columns[0].clone());
        ConstantLengthRule::new(crate::alphabet::AlphabetKind::Cyclic(n), columns)
            .expect("cyclic columns share one alphabet")
    }

    /// Pseudo-fixed window of the factor rule seeded at the identity.
    pub fn word(&self, radius: u64) -> Result<TwoSidedWord, ClassifyError> {
        let rule = self.rule();
        let seed = rule.alphabet().identity()?;
        let setup = normalize_pseudo_fixed(&rule, &seed)?;
        Ok(pseudo_fixed_prefix(&setup, radius)?)
    }
}

#[derive(Clone, Debug, PartialEq, Default, serde::Serialize)]
pub struct Evidence {
    pub theorem: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta1: Option<ComplexValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_test: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor: Option<CyclicFactor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor_rule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coincidences: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitary: Option<ZeroTest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_one: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SpectralVerdict {
    pub kind: SpectralKind,
    pub ac_absent: bool,
    pub evidence: Evidence,
}

fn violation(theorem: &'static str, reason: impl Into<String>) -> ClassifyError {
    ClassifyError::HypothesisViolation {
        theorem,
        reason: reason.into(),
    }
}

/// All elements generated by `gens`, if finite and small.
fn generated_subgroup(gens: &[Letter], identity: Letter, ctx: &PhiContext) -> Option<Vec<Letter>> {
    if gens.iter().any(|g| g.order(ctx).is_none()) {
        return None;
    }
    let mut seen = BTreeSet::from([identity.clone()]);
    let mut frontier = vec![identity];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.compose(g).ok()?.resolve(ctx);
            if seen.insert(y.clone()) {
                if seen.len() > MAX_SUBGROUP {
                    return None;
                }
                frontier.push(y);
            }
        }
    }
    Some(seen.into_iter().collect())
}

/// Verdict for a rule whose columns are all translations.
///
/// The `|η(1)| = 1` condition is decided on exact angles: the character
/// values `a_j = χ(β_j)` must have constant consecutive differences and
/// `a_0 = a_{L-1}`. Primitivity is probed on the subgroup generated by the
/// normalized columns when that subgroup is finite, otherwise on an ε-net
/// of the whole alphabet.
pub fn classify_bijective(
    rule: &ConstantLengthRule,
    chi: &Character,
    ctx: &PhiContext,
) -> Result<SpectralVerdict, ClassifyError> {
    if !rule.is_bijective() {
        return Err(violation(
            BIJECTIVE_DICHOTOMY,
            "rule has a non-translation column",
        ));
    }
    let identity = rule.alphabet().identity()?;
    let setup = normalize_pseudo_fixed(rule, &identity)?;
    let cfg = ProbeConfig::default();

    let gens: Vec<Letter> = setup
        .base
        .columns()
        .iter()
        .map(|c| c.letter().resolve(ctx))
        .collect();
    let (net, net_name) = match generated_subgroup(&gens, identity.clone(), ctx) {
        Some(h) => {
            let name = format!("subgroup of order {}", h.len());
            (h, name)
        }
        None => (
            alphabet_net(rule.alphabet(), cfg.epsilon),
            format!("{}-net of {}", cfg.epsilon, rule.alphabet()),
        ),
    };
    let probe = primitivity_probe_with_net(
        &SubstitutionRule::ConstantLength(setup.base.clone()),
        &net,
        &cfg,
        ctx,
    )?;

    let spec = BijectiveRecurrenceSpec::from_setup(&setup, chi)?;
    let eta1 = eta1_closed_form(&spec, ctx);
    let mut evidence = Evidence {
        theorem: BIJECTIVE_DICHOTOMY,
        eta1: Some(eta1.into()),
        ..Default::default()
    };

    if let ProbeOutcome::Fail { centre } = probe {
        evidence.probe = Some(format!(
            "fail on {net_name}: ball of radius {} at {centre} not reached within depth {}",
            cfg.epsilon, cfg.depth
        ));
        return Ok(SpectralVerdict {
            kind: SpectralKind::Unknown,
            ac_absent: true,
            evidence,
        });
    }
    evidence.probe = Some(format!("pass on {net_name}"));

    let a: Vec<Angle> = rule
        .columns()
        .iter()
        .map(|c| character_angle(chi, c.letter()).map(|t| t.resolve(ctx)))
        .collect::<Result<_, _>>()?;
    let l = a.len();
    let d = a[1] - a[0];
    let steps_equal = (1..l - 1).all(|j| a[j + 1] - a[j] == d);
    let ends_equal = a[0] == a[l - 1];
    evidence.exact_test = Some(format!(
        "consecutive character differences constant: {steps_equal}; first and last columns agree: {ends_equal}"
    ));
    if steps_equal && ends_equal {
        let n = d.order(ctx).expect("(L-1)·g = 0 forces finite order");
        let factor = CyclicFactor { n, g0: a[0], g: d };
        evidence.factor_rule = Some(factor.rule().to_string());
        evidence.factor = Some(factor);
        Ok(SpectralVerdict {
            kind: SpectralKind::PurePoint,
            ac_absent: true,
            evidence,
        })
    } else {
        Ok(SpectralVerdict {
            kind: SpectralKind::PurelySingularContinuous,
            ac_absent: true,
            evidence,
        })
    }
}

/// Verdict for a rule with at least one constant column.
pub fn classify_coincidence(
    rule: &ConstantLengthRule,
    chi: &Character,
) -> Result<SpectralVerdict, ClassifyError> {
    let p = rule.constant_count();
    if p == 0 {
        return Err(violation(
            COINCIDENCE_PURE_POINT,
            "rule has no constant column",
        ));
    }
    let identity = rule.alphabet().identity()?;
    for c in rule.columns() {
        character_angle(chi, c.letter())?;
    }
    character_angle(chi, &identity)?;
    let l = rule.len();
    Ok(SpectralVerdict {
        kind: SpectralKind::PurePoint,
        ac_absent: true,
        evidence: Evidence {
            theorem: COINCIDENCE_PURE_POINT,
            coincidences: Some(p),
            contraction: Some((l - p) as f64 / l as f64),
            ..Default::default()
        },
    })
}

/// Verdict for the character `z ↦ zⁿ` on the spin component.
pub fn classify_spin(
    rule: &SpinRule,
    n: i64,
    ctx: &PhiContext,
) -> Result<SpectralVerdict, ClassifyError> {
    if n == 0 {
        return Ok(SpectralVerdict {
            kind: SpectralKind::PurePoint,
            ac_absent: true,
            evidence: Evidence {
                theorem: SPIN_TRIVIAL_CHARACTER,
                note: Some("trivial character: the comb is the lattice comb".into()),
                ..Default::default()
            },
        });
    }
    let q = rule.digits();
    let w = |i: usize, j: usize| rule.entry(i, j).scale(n).resolve(ctx);

    let mut unitary = ZeroTest::Zero;
    'rows: for i1 in 0..q {
        for i2 in i1 + 1..q {
            let terms: Vec<Angle> = (0..q).map(|j| w(i1, j) - w(i2, j)).collect();
            match exact_sum_is_zero(&terms, ctx) {
                ZeroTest::Zero => {}
                ZeroTest::NonZero => {
                    unitary = ZeroTest::NonZero;
                    break 'rows;
                }
                ZeroTest::Unknown => unitary = ZeroTest::Unknown,
            }
        }
    }
    if unitary == ZeroTest::Zero {
        return Ok(SpectralVerdict {
            kind: SpectralKind::Lebesgue,
            ac_absent: false,
            evidence: Evidence {
                theorem: SPIN_UNITARY,
                unitary: Some(unitary),
                multiplicity: Some(q),
                note: Some(format!(
                    "Lebesgue spectral type of multiplicity {q} on the character subspace"
                )),
                ..Default::default()
            },
        });
    }

    let mut rank_one = true;
    for i1 in 0..q {
        for i2 in 0..q {
            for j1 in 0..q {
                for j2 in 0..q {
                    if w(i1, j1) + w(i2, j2) != w(i1, j2) + w(i2, j1) {
                        rank_one = false;
                    }
                }
            }
        }
    }
    if rank_one {
        let diagonal: Vec<Angle> = (0..q).map(|j| w(j, j)).collect();
        let factor = ConstantLengthRule::circle(&diagonal)?;
        let mut v = classify_bijective(&factor, &Character::Circle(1), ctx)?;
        v.evidence.theorem = SPIN_RANK_ONE;
        v.evidence.unitary = Some(unitary);
        v.evidence.rank_one = Some(true);
        v.evidence.note = Some(format!("delegated to the bijective factor {factor}"));
        if v.evidence.factor_rule.is_none() {
            v.evidence.factor_rule = Some(factor.to_string());
        }
        return Ok(v);
    }
    Ok(SpectralVerdict {
        kind: SpectralKind::Unknown,
        ac_absent: false,
        evidence: Evidence {
            theorem: SPIN_UNRESOLVED,
            unitary: Some(unitary),
            rank_one: Some(false),
            note: Some("character matrix is neither scaled unitary nor rank one".into()),
            ..Default::default()
        },
    })
}

/// Exponent `n` of a spin-rule character `χ_n ⊗ trivial`.
fn spin_exponent(chi: &Character) -> Option<i64> {
    match chi {
        Character::Circle(n) => Some(*n),
        Character::Trivial => Some(0),
        Character::Product(cs) => match cs.as_slice() {
            [Character::Circle(n), Character::Trivial] => Some(*n),
            [Character::Circle(n), Character::Cyclic { index: 0, .. }] => Some(*n),
            _ => None,
        },
        _ => None,
    }
}

pub fn classify(
    rule: &SubstitutionRule,
    chi: &Character,
    ctx: &PhiContext,
) -> Result<SpectralVerdict, ClassifyError> {
    match rule {
        SubstitutionRule::ConstantLength(r) if r.constant_count() > 0 => {
            classify_coincidence(r, chi)
        }
        SubstitutionRule::ConstantLength(r) => classify_bijective(r, chi, ctx),
        SubstitutionRule::Spin(r) => {
            let n = spin_exponent(chi).ok_or_else(|| {
                violation(
                    "spin-general",
                    format!("character {chi} is not trivial on digits"),
                )
            })?;
            classify_spin(r, n, ctx)
        }
        SubstitutionRule::ExtNat(_) => Err(violation(
            BIJECTIVE_DICHOTOMY,
            "the alphabet carries no group structure",
        )),
    }
}

impl SpectralVerdict {
    /// `|η(1)|` when recorded.
    pub fn eta1_modulus(&self) -> Option<f64> {
        self.evidence.eta1.map(|z| z.abs)
    }

    pub fn is_pure_point(&self) -> bool {
        self.kind == SpectralKind::PurePoint
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::AlphabetKind;
    use crate::substitution::detect_period;

    fn rho1() -> ConstantLengthRule {
        ConstantLengthRule::circle(&[
            Angle::ZERO,
            Angle::ZERO,
            Angle::phi_multiple(1),
            Angle::ZERO,
        ])
        .unwrap()
    }

    fn sample_spin() -> SpinRule {
        SpinRule::new(vec![
            vec![Angle::ZERO, Angle::rational(1, 2)],
            vec![Angle::phi_multiple(1), Angle::phi_multiple(1)],
        ])
        .unwrap()
    }

    #[test]
    fn rho1_irrational_is_singular_continuous() {
        let ctx = PhiContext::golden();
        for n in 1..=4 {
            let v = classify_bijective(&rho1(), &Character::Circle(n), &ctx).unwrap();
            assert_eq!(v.kind, SpectralKind::PurelySingularContinuous);
            assert!(v.ac_absent);
            assert!(v.eta1_modulus().unwrap() < 1.0 - 1e-6);
        }
    }

    #[test]
    fn rho1_root_of_unity_is_pure_point() {
        let ctx = PhiContext::rational(1, 3).unwrap();
        let v = classify_bijective(&rho1(), &Character::Circle(3), &ctx).unwrap();
        assert_eq!(v.kind, SpectralKind::PurePoint);
        assert!((v.eta1_modulus().unwrap() - 1.0).abs() < 1e-10);
        let f = v.evidence.factor.unwrap();
        assert_eq!(f.n, 1);
        let w = f.word(64).unwrap();
        assert!(detect_period(&w).unwrap() <= 12);
        let v1 = classify_bijective(&rho1(), &Character::Circle(1), &ctx).unwrap();
        assert_eq!(v1.kind, SpectralKind::PurelySingularContinuous);
    }

    #[test]
    fn product_example_has_periodic_factor() {
        let kind = AlphabetKind::Product(vec![AlphabetKind::Cyclic(2), AlphabetKind::Circle]);
        let e1 = Letter::Product(vec![
            Letter::cyclic(2, 0).unwrap(),
            Letter::Circle(Angle::ZERO),
        ]);
        let ga = Letter::Product(vec![
            Letter::cyclic(2, 1).unwrap(),
            Letter::Circle(Angle::phi_multiple(1)),
        ]);
        let rule = ConstantLengthRule::translations(kind, vec![e1.clone(), ga, e1]).unwrap();
        let ctx = PhiContext::golden();
        let chi = Character::Product(vec![
            Character::Cyclic {
                modulus: 2,
                index: 1,
            },
            Character::Trivial,
        ]);
        let v = classify_bijective(&rule, &chi, &ctx).unwrap();
        assert_eq!(v.kind, SpectralKind::PurePoint);
        assert_eq!(v.evidence.factor_rule.as_deref(), Some("[a] ↦ [a][ag][a]"));
        assert_eq!(
            detect_period(&v.evidence.factor.unwrap().word(100).unwrap()),
            Some(2)
        );
        let chi2 = Character::Product(vec![
            Character::Cyclic {
                modulus: 2,
                index: 1,
            },
            Character::Circle(1),
        ]);
        let v2 = classify_bijective(&rule, &chi2, &ctx).unwrap();
        assert_eq!(v2.kind, SpectralKind::PurelySingularContinuous);
    }

    #[test]
    fn coincidence_rules() {
        let one = Letter::Circle(Angle::ZERO);
        let rho2 = ConstantLengthRule::new(
            AlphabetKind::Circle,
            vec![
                Column::Translation(one.clone()),
                Column::Constant(one.clone()),
                Column::Translation(Letter::Circle(Angle::phi_multiple(1))),
                Column::Translation(one.clone()),
            ],
        )
        .unwrap();
        let v = classify_coincidence(&rho2, &Character::Circle(1)).unwrap();
        assert_eq!(v.kind, SpectralKind::PurePoint);
        assert_eq!(v.evidence.coincidences, Some(1));
        assert_eq!(v.evidence.contraction, Some(0.75));
        let all =
            ConstantLengthRule::new(AlphabetKind::Circle, vec![Column::Constant(one); 3]).unwrap();
        assert!(classify_coincidence(&all, &Character::Circle(2))
            .unwrap()
            .is_pure_point());
        assert!(matches!(
            classify_coincidence(&rho1(), &Character::Circle(1)),
            Err(ClassifyError::HypothesisViolation {
                theorem: COINCIDENCE_PURE_POINT,
                ..
            })
        ));
        assert!(matches!(
            classify_bijective(&rho2, &Character::Circle(1), &PhiContext::golden()),
            Err(ClassifyError::HypothesisViolation {
                theorem: BIJECTIVE_DICHOTOMY,
                ..
            })
        ));
    }

    #[test]
    fn spin_parity() {
        let ctx = PhiContext::golden();
        let rule = sample_spin();
        assert_eq!(
            classify_spin(&rule, 0, &ctx).unwrap().kind,
            SpectralKind::PurePoint
        );
        for n in 1..=20 {
            let v = classify_spin(&rule, n, &ctx).unwrap();
            let want = if n % 2 == 1 {
                SpectralKind::Lebesgue
            } else {
                SpectralKind::PurelySingularContinuous
            };
            assert_eq!(v.kind, want, "n = {n}");
        }
        let v = classify_spin(&rule, 2, &ctx).unwrap();
        assert_eq!(v.evidence.factor_rule.as_deref(), Some("[θ] ↦ [θ][θα²]"));
    }

    #[test]
    fn generic_spin_matrix_is_unknown() {
        let rule = SpinRule::new(vec![
            vec![Angle::ZERO, Angle::rational(1, 3)],
            vec![Angle::phi_multiple(1), Angle::rational(1, 5)],
        ])
        .unwrap();
        let v = classify_spin(&rule, 1, &PhiContext::golden()).unwrap();
        assert_eq!(v.kind, SpectralKind::Unknown);
    }

    #[test]
    fn finite_effective_alphabets() {
        let rule = ConstantLengthRule::circle(&[
            Angle::ZERO,
            Angle::ZERO,
            Angle::rational(1, 2),
            Angle::ZERO,
        ])
        .unwrap();
        let v = classify_bijective(&rule, &Character::Circle(1), &PhiContext::golden()).unwrap();
        assert_eq!(v.kind, SpectralKind::PurelySingularContinuous);
        assert_eq!(
            v.evidence.probe.as_deref(),
            Some("pass on subgroup of order 2")
        );
    }

    #[test]
    fn non_primitive_rule_is_unknown() {
        let letter = |r: i64, k: i64| {
            Letter::Product(vec![
                Letter::cyclic(2, r).unwrap(),
                Letter::Circle(Angle::phi_multiple(k)),
            ])
        };
        let stuck = ConstantLengthRule::translations(
            AlphabetKind::Product(vec![AlphabetKind::Cyclic(2), AlphabetKind::Circle]),
            vec![letter(0, 0), letter(0, 0), letter(0, 1)],
        )
        .unwrap();
        let chi = Character::Product(vec![Character::Trivial, Character::Circle(1)]);
        let v = classify_bijective(&stuck, &chi, &PhiContext::golden()).unwrap();
        assert_eq!(v.kind, SpectralKind::Unknown);
        assert!(v.evidence.probe.unwrap().starts_with("fail"));
    }

    #[test]
    fn verdict_json_shape() {
        let v = classify_bijective(&rho1(), &Character::Circle(1), &PhiContext::golden()).unwrap();
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["kind"], "PurelySingularContinuous");
        assert_eq!(json["evidence"]["theorem"], BIJECTIVE_DICHOTOMY);
        assert!(json["evidence"]["eta1"]["abs"].as_f64().unwrap() < 1.0);
    }
}
