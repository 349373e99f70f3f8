use compact_subst::alphabet::{
    character_angle, exact_sum_is_zero, AlphabetKind, Angle, Character, Letter, PhiContext,
    ZeroTest,
};
use compact_subst::autocorrelation::{BijectiveRecurrenceSpec, EtaTable, WeightedComb};
use compact_subst::builtins::random_cyclic_rule;
use compact_subst::diffraction::fejer_spectrum;
use compact_subst::substitution::{normalize_pseudo_fixed, pseudo_fixed_prefix, PseudoFixedSetup};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn angle() -> impl Strategy<Value = Angle> {
    (-50i64..50, 1i64..40, -5i64..5)
        .prop_map(|(p, q, k)| Angle::rational(p, q) + Angle::phi_multiple(k))
}

fn rational_angle() -> impl Strategy<Value = Angle> {
    (0i64..60, 1i64..13).prop_map(|(p, q)| Angle::rational(p, q))
}

/// Three letters of one random alphabet: `C_n`, `S¹` or `C_n × S¹`.
fn letter_triple() -> impl Strategy<Value = (Letter, Letter, Letter)> {
    let cyc = |n: u32| {
        (0..n).prop_map(move |r| Letter::Cyclic {
            modulus: n,
            residue: r,
        })
    };
    prop_oneof![
        (1u32..12).prop_flat_map(move |n| (cyc(n), cyc(n), cyc(n))),
        (angle(), angle(), angle()).prop_map(|(a, b, c)| (
            Letter::Circle(a),
            Letter::Circle(b),
            Letter::Circle(c)
        )),
        (1u32..6).prop_flat_map(move |n| {
            let prod = move || {
                (cyc(n), angle()).prop_map(|(x, t)| Letter::Product(vec![x, Letter::Circle(t)]))
            };
            (prod(), prod(), prod())
        }),
    ]
}

fn character_for(a: &Letter, index: i64) -> Character {
    match a.kind() {
        AlphabetKind::Cyclic(n) => Character::Cyclic {
            modulus: n,
            index: index.rem_euclid(n as i64) as u32,
        },
        AlphabetKind::Circle => Character::Circle(index),
        AlphabetKind::Product(ks) => Character::Product(
            ks.iter()
                .map(|k| match k {
                    AlphabetKind::Cyclic(n) => Character::Cyclic {
                        modulus: *n,
                        index: index.rem_euclid(*n as i64) as u32,
                    },
                    _ => Character::Circle(index - 3),
                })
                .collect(),
        ),
        AlphabetKind::ExtNat => unreachable!(),
    }
}

fn setup(k: u32, len: usize, seed: u64) -> PseudoFixedSetup {
    let rule = random_cyclic_rule(&mut ChaCha8Rng::seed_from_u64(seed), k, len);
    normalize_pseudo_fixed(&rule, &rule.alphabet().identity().unwrap()).unwrap()
}

proptest! {
    #[test]
    fn group_axioms((a, b, c) in letter_triple()) {
        let e = a.kind().identity().unwrap();
        let ab_c = a.compose(&b).unwrap().compose(&c).unwrap();
        let a_bc = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(a.compose(&e).unwrap(), a.clone());
        prop_assert_eq!(e.compose(&a).unwrap(), a.clone());
        prop_assert_eq!(a.compose(&a.inverse().unwrap()).unwrap(), e);
        prop_assert_eq!(a.compose(&b).unwrap(), b.compose(&a).unwrap());
    }

    #[test]
    fn unit_values_have_modulus_one(t in angle(), phi in 0.01f64..0.99) {
        let ctx = PhiContext::irrational(phi).unwrap();
        prop_assert!((t.eval_unit(&ctx).norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn nested_windows(k in 2u32..7, len in 2usize..6, seed in any::<u64>(), r in 0u64..200) {
        let s = setup(k, len, seed);
        let small = pseudo_fixed_prefix(&s, r).unwrap();
        let big = pseudo_fixed_prefix(&s, r + 1).unwrap();
        prop_assert_eq!(big.window(-(r as i64), r as i64).unwrap(), small);
    }

    #[test]
    fn supertile_relation(k in 2u32..7, len in 2usize..6, seed in any::<u64>()) {
        let s = setup(k, len, seed);
        let w = pseudo_fixed_prefix(&s, 300).unwrap();
        let lp = s.length() as i64;
        let sh = s.shift as i64;
        for m in -20i64..=20 {
            for k in 0..lp {
                let n = lp * m + k - sh;
                let want = s.base.column(k as usize).apply(w.get(m).unwrap()).unwrap();
                prop_assert_eq!(w.get(n).unwrap(), &want);
            }
        }
    }

    #[test]
    fn exact_eta_invariants(k in 2u32..7, len in 2usize..6, seed in any::<u64>(), index in 0u32..7) {
        let s = setup(k, len, seed);
        let chi = Character::Cyclic { modulus: k, index };
        let spec = BijectiveRecurrenceSpec::from_setup(&s, &chi).unwrap();
        let mut t = EtaTable::exact_bijective(spec, PhiContext::golden());
        t.ensure(200).unwrap();
        prop_assert_eq!(t.get(0).unwrap(), Complex64::new(1.0, 0.0));
        for m in 1..=200i64 {
            let v = t.get(m).unwrap();
            prop_assert!(v.norm() <= 1.0 + 1e-12);
            prop_assert_eq!(t.get(-m).unwrap(), v.conj());
        }
    }

    #[test]
    fn fejer_of_a_word_is_nonnegative(k in 2u32..7, len in 2usize..6, seed in any::<u64>()) {
        let s = setup(k, len, seed);
        let ctx = PhiContext::golden();
        let w = pseudo_fixed_prefix(&s, 3000).unwrap();
        let comb = WeightedComb::from_word(&w, &Character::Cyclic { modulus: k, index: 1 }, &ctx).unwrap();
        let mut t = EtaTable::empirical(comb, 2000).unwrap();
        t.ensure(256).unwrap();
        let f = fejer_spectrum(&t, 256, 1024).unwrap();
        prop_assert!(f.min() >= -1e-9);
        prop_assert!((f.mean() - 1.0).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn characters_are_homomorphisms((a, b, _) in letter_triple(), index in -6i64..7) {
        let chi = character_for(&a, index);
        let lhs = character_angle(&chi, &a.compose(&b).unwrap()).unwrap();
        let rhs = character_angle(&chi, &a).unwrap() + character_angle(&chi, &b).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn exact_zero_test_matches_numeric(ts in prop::collection::vec(rational_angle(), 1..9)) {
        let ctx = PhiContext::golden();
        let numeric: Complex64 = ts.iter().map(|t| t.eval_unit(&ctx)).sum();
        let exact = exact_sum_is_zero(&ts, &ctx);
        prop_assert_ne!(exact, ZeroTest::Unknown);
        prop_assert_eq!(exact == ZeroTest::Zero, numeric.norm() < 1e-10);
    }

    #[test]
    fn zero_test_on_balanced_sums(n in 2i64..13, shift in rational_angle()) {
        // Full orbits of an n-th root of unity sum to zero.
        let ts: Vec<Angle> = (0..n).map(|j| shift + Angle::rational(j, n)).collect();
        prop_assert_eq!(exact_sum_is_zero(&ts, &PhiContext::golden()), ZeroTest::Zero);
    }
}
