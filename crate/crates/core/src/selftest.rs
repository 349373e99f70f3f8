//! Acceptance checks run by the `acceptance` test target and the CLI.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Angle, Character, PhiContext, GOLDEN_PHI};
use crate::autocorrelation::{
    almost_period_set, eta1_closed_form, eta_coincidence_scale, BijectiveEta,
    BijectiveRecurrenceSpec, EtaTable, WeightedComb,
};
use crate::builtins;
use crate::classifier::{classify_bijective, classify_coincidence, classify_spin, SpectralKind};
use crate::diffraction::{fejer_spectrum, riesz_partial};
use crate::geometry::{
    audit_delone, delone_window, frequency_estimate, m_apply, natural_length, power_iteration,
    Dyadic, TruncatedFunction, INFLATION,
};
use crate::substitution::{
    detect_period, normalize_pseudo_fixed, pseudo_fixed_prefix, spin_word, ConstantLengthRule,
    PseudoFixedSetup,
};

#[derive(Clone, Debug, serde::Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub seconds: f64,
    pub checks: Vec<Check>,
}

impl CriterionReport {
    /// One line: `criterion N PASS|FAIL title (t s)`.
    pub fn summary_line(&self) -> String {
        format!(
            "criterion {} {} {} ({:.2} s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.seconds
        )
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Recorder {
    id: u8,
    title: &'static str,
    start: Instant,
    budget: Option<f64>,
    checks: Vec<Check>,
}

impl Recorder {
    fn new(id: u8, title: &'static str, budget: Option<f64>) -> Self {
        Recorder {
            id,
            title,
            start: Instant::now(),
            budget,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn fail(&mut self, name: impl Into<String>, err: impl std::fmt::Display) {
        self.check(name, false, format!("error: {err}"));
    }

    fn finish(mut self) -> CriterionReport {
        let seconds = self.start.elapsed().as_secs_f64();
        if let Some(b) = self.budget {
            self.check(
                "runtime",
                seconds < b,
                format!("{seconds:.2} s, budget {b} s"),
            );
        }
        CriterionReport {
            id: self.id,
            title: self.title,
            passed: self.checks.iter().all(|c| c.passed),
            seconds,
            checks: self.checks,
        }
    }
}

fn setup_of(rule: &ConstantLengthRule) -> PseudoFixedSetup {
    let id = rule.alphabet().identity().expect("group alphabet");
    normalize_pseudo_fixed(rule, &id).expect("builtin rules admit an anchor")
}

fn comb_of(
    setup: &PseudoFixedSetup,
    chi: &Character,
    radius: u64,
    ctx: &PhiContext,
) -> Result<WeightedComb, String> {
    let w = pseudo_fixed_prefix(setup, radius).map_err(|e| e.to_string())?;
    WeightedComb::from_word(&w.resolve(ctx), chi, ctx).map_err(|e| e.to_string())
}

fn golden() -> PhiContext {
    PhiContext::irrational(GOLDEN_PHI).expect("valid φ")
}

/// Closed-form and empirical `η(1)` for the circle example.
pub fn criterion_1() -> CriterionReport {
    let mut r = Recorder::new(1, "eta(1) closed form and empirical average", Some(30.0));
    let ctx = golden();
    let setup = setup_of(&builtins::rho1());
    let n_avg = 4usize.pow(10);
    for n in 1..=3i64 {
        let chi = Character::Circle(n);
        let spec = BijectiveRecurrenceSpec::from_setup(&setup, &chi).expect("translation rule");
        let closed = eta1_closed_form(&spec, &ctx);
        let want =
            1.0 / 3.0 + (2.0 / 3.0) * (2.0 * std::f64::consts::PI * n as f64 * GOLDEN_PHI).cos();
        let err = (closed - Complex64::new(want, 0.0)).norm();
        r.check(
            format!("closed form n={n}"),
            err <= 1e-12,
            format!("|Δ| = {err:.2e}"),
        );
        match comb_of(&setup, &chi, n_avg as u64 + 1, &ctx)
            .and_then(|c| c.eta(1, n_avg).map_err(|e| e.to_string()))
        {
            Ok(emp) => {
                let d = (emp - closed).norm();
                r.check(
                    format!("empirical n={n}"),
                    d <= 5e-3,
                    format!("N = 4^10, |Δ| = {d:.2e}"),
                );
            }
            Err(e) => r.fail(format!("empirical n={n}"), e),
        }
    }
    r.finish()
}

/// `η(4^r m) = η(m)` for length-4 translation rules.
pub fn criterion_2() -> CriterionReport {
    let mut r = Recorder::new(2, "scaling eta(L^r m) = eta(m)", None);
    let ctx = golden();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut cases = vec![("rho1".to_string(), builtins::rho1(), Character::Circle(1))];
    for i in 0..20 {
        let rule = builtins::random_cyclic_rule(&mut rng, 6, 4);
        cases.push((
            format!("random C6 #{i}"),
            rule,
            Character::Cyclic {
                modulus: 6,
                index: 1,
            },
        ));
    }
    for (name, rule, chi) in cases {
        let spec =
            BijectiveRecurrenceSpec::from_setup(&setup_of(&rule), &chi).expect("translation rule");
        let mut eta = BijectiveEta::new(spec, ctx);
        let mut worst = 0.0f64;
        for m in 1..=64i64 {
            let base = eta.get(m);
            for p in 1..=5u32 {
                worst = worst.max((eta.get(4i64.pow(p) * m) - base).norm());
            }
        }
        r.check(name, worst <= 1e-12, format!("max |Δ| = {worst:.2e}"));
    }
    r.finish()
}

/// Exact dichotomy verdicts for the circle example.
pub fn criterion_3() -> CriterionReport {
    let mut r = Recorder::new(3, "bijective dichotomy", None);
    let ctx = golden();
    for n in 1..=6 {
        match classify_bijective(&builtins::rho1(), &Character::Circle(n), &ctx) {
            Ok(v) => r.check(
                format!("irrational n={n}"),
                v.kind == SpectralKind::PurelySingularContinuous,
                format!("{:?}", v.kind),
            ),
            Err(e) => r.fail(format!("irrational n={n}"), e),
        }
    }
    let third = PhiContext::rational(1, 3).expect("valid φ");
    match classify_bijective(&builtins::rho1(), &Character::Circle(3), &third) {
        Ok(v) => {
            r.check(
                "phi=1/3 n=3 verdict",
                v.kind == SpectralKind::PurePoint,
                format!("{:?}", v.kind),
            );
            match v.evidence.factor.as_ref().map(|f| f.word(256)) {
                Some(Ok(w)) => {
                    let p = detect_period(&w);
                    r.check(
                        "phi=1/3 n=3 factor period",
                        matches!(p, Some(p) if p <= 12),
                        format!("period {p:?}"),
                    );
                }
                Some(Err(e)) => r.fail("phi=1/3 n=3 factor period", e),
                None => r.check("phi=1/3 n=3 factor period", false, "no factor reported"),
            }
        }
        Err(e) => r.fail("phi=1/3 n=3 verdict", e),
    }
    r.finish()
}

/// Coincidence verdict, scaling identity and almost periods.
pub fn criterion_4() -> CriterionReport {
    let mut r = Recorder::new(4, "coincidence pure point", None);
    let ctx = golden();
    let chi = Character::Circle(1);
    let rule = builtins::rho2();
    match classify_coincidence(&rule, &chi) {
        Ok(v) => r.check(
            "verdict",
            v.kind == SpectralKind::PurePoint,
            format!("{:?}", v.kind),
        ),
        Err(e) => r.fail("verdict", e),
    }
    let setup = setup_of(&rule);
    let radius = 1usize << 20;
    let max_lag = 4096;
    let comb = match comb_of(&setup, &chi, (radius + max_lag) as u64, &ctx) {
        Ok(c) => c,
        Err(e) => {
            r.fail("empirical window", e);
            return r.finish();
        }
    };
    let emp = comb.eta_range(max_lag, radius).expect("window sized above");
    let mut worst = 0.0f64;
    for m in 1..=16usize {
        let mut predicted = emp[m];
        let mut scale = m;
        for _ in 1..=4 {
            predicted = eta_coincidence_scale(predicted, 1, 4).expect("p < L");
            scale *= 4;
            worst = worst.max((predicted - emp[scale]).norm());
        }
    }
    r.check(
        "scaling vs empirical",
        worst <= 5e-3,
        format!("N = 2^20, max |Δ| = {worst:.2e}"),
    );

    let m_max = 4usize.pow(6);
    match EtaTable::coincidence_scale(comb, radius, 4, 1).and_then(|mut t| {
        t.ensure(m_max)?;
        Ok(t)
    }) {
        Ok(t) => {
            let closest = (1..=m_max as i64)
                .map(|m| {
                    (Complex64::new(1.0, 0.0) - t.get(m).expect("filled"))
                        .norm()
                        .sqrt()
                })
                .fold(f64::INFINITY, f64::min);
            match almost_period_set(&t, 0.2, m_max) {
                Ok(p) => r.check(
                    "rho2 almost periods eps=0.2",
                    p.max_gap.is_some(),
                    format!(
                        "{} members in [-4^6, 4^6], max gap {:?}, min |1-eta|^(1/2) over lags >= 1 = {closest:.3}",
                        p.members.len(),
                        p.max_gap
                    ),
                ),
                Err(e) => r.fail("rho2 almost periods eps=0.2", e),
            }
        }
        Err(e) => r.fail("rho2 almost periods eps=0.2", e),
    }

    let spec = BijectiveRecurrenceSpec::from_setup(&setup_of(&builtins::rho1()), &chi)
        .expect("translation rule");
    let mut t = EtaTable::exact_bijective(spec, ctx);
    match t
        .ensure(m_max)
        .map_err(|e| e.to_string())
        .and_then(|_| almost_period_set(&t, 0.05, m_max).map_err(|e| e.to_string()))
    {
        Ok(p) => {
            let positive: Vec<i64> = p.members.iter().copied().filter(|&m| m >= 1).collect();
            r.check(
                "rho1 almost periods eps=0.05",
                positive.is_empty(),
                format!("{} members in [1, 4^6]", positive.len()),
            );
        }
        Err(e) => r.fail("rho1 almost periods eps=0.05", e),
    }
    r.finish()
}

/// Spin verdicts, Lebesgue signature and the Riesz/Fejér comparison.
pub fn criterion_5() -> CriterionReport {
    let mut r = Recorder::new(5, "spin trichotomy", None);
    let ctx = golden();
    let rule = builtins::spin();
    let mut mismatches = Vec::new();
    for n in 0..=20i64 {
        let want = match n {
            0 => SpectralKind::PurePoint,
            n if n % 2 == 1 => SpectralKind::Lebesgue,
            _ => SpectralKind::PurelySingularContinuous,
        };
        match classify_spin(&rule, n, &ctx) {
            Ok(v) if v.kind == want => {}
            Ok(v) => mismatches.push(format!("n={n}: {:?}", v.kind)),
            Err(e) => mismatches.push(format!("n={n}: {e}")),
        }
    }
    r.check(
        "verdicts n=0..20",
        mismatches.is_empty(),
        mismatches.join("; "),
    );

    let n_avg = 1usize << 20;
    let word = spin_word(&rule, Angle::ZERO, 0, 22);
    let comb = WeightedComb::from_angles(word.spins(), 1, n_avg, &ctx);
    match comb.eta_range(100, n_avg) {
        Ok(v) => {
            let worst = v[1..].iter().map(|z| z.norm()).fold(0.0, f64::max);
            r.check(
                "n=1 Lebesgue signature",
                worst <= 0.02,
                format!("N = 2^20, max |eta(m)| = {worst:.2e}"),
            );
        }
        Err(e) => r.fail("n=1 Lebesgue signature", e),
    }

    let g = 1usize << 13;
    let k = 1usize << 12;
    let factor =
        ConstantLengthRule::circle(&[Angle::ZERO, Angle::phi_multiple(2)]).expect("valid columns");
    let spec = BijectiveRecurrenceSpec::from_setup(&setup_of(&factor), &Character::Circle(1))
        .expect("translation rule");
    let mut eta = EtaTable::exact_bijective(spec, ctx);
    let result = eta
        .ensure(k)
        .map_err(|e| e.to_string())
        .and_then(|_| fejer_spectrum(&eta, k, g).map_err(|e| e.to_string()))
        .and_then(|f| {
            let rz =
                riesz_partial(Angle::phi_multiple(2), 12, g, &ctx).map_err(|e| e.to_string())?;
            rz.relative_l1_distance(&f).map_err(|e| e.to_string())
        });
    match result {
        Ok(d) => r.check(
            "n=2 Riesz vs Fejér",
            d <= 0.1,
            format!("M = 12, K = 2^12, G = 2^13, relative L1 = {d:.3}"),
        ),
        Err(e) => r.fail("n=2 Riesz vs Fejér", e),
    }
    r.finish()
}

/// Eigen-identity, power iteration and letter frequencies.
pub fn criterion_6() -> CriterionReport {
    let mut r = Recorder::new(6, "geometry eigendata", Some(10.0));
    let cap = 40;
    let ell = TruncatedFunction::from_fn(cap, natural_length);
    let m = m_apply(&ell);
    let exact = (0..cap).all(|n| m.values[n] == INFLATION * ell.values[n])
        && m.infinity == INFLATION * ell.infinity;
    r.check(
        "exact eigen-identity below cap",
        exact,
        format!("indices 0..{cap} and infinity"),
    );
    match power_iteration(cap, 1e-10, 100_000) {
        Ok(p) => {
            let dl = (p.lambda - 2.5).abs();
            let de = (0..=20)
                .map(|n| (p.ell.values[n] - (2.0 - 0.5f64.powi(n as i32))).abs())
                .fold(0.0, f64::max);
            r.check(
                "lambda",
                dl <= 1e-6,
                format!("lambda = {}, |Δ| = {dl:.2e}", p.lambda),
            );
            r.check(
                "length function",
                de <= 1e-6,
                format!("sup n<=20 |Δ| = {de:.2e}, {} iterations", p.iterations),
            );
        }
        Err(e) => r.fail("power iteration", e),
    }
    match frequency_estimate(14) {
        Ok(f) => {
            let worst = (0..=6)
                .map(|n| {
                    let v = *f.values[n].numer() as f64 / *f.values[n].denom() as f64;
                    (v - 0.5f64.powi(n as i32 + 1)).abs()
                })
                .fold(0.0, f64::max);
            r.check(
                "frequencies depth 14",
                worst <= 1e-3,
                format!("max n<=6 |Δ| = {worst:.2e}"),
            );
        }
        Err(e) => r.fail("frequencies depth 14", e),
    }
    r.finish()
}

/// Exact audits of a two-sided window of `10⁴` tiles.
pub fn criterion_7() -> CriterionReport {
    let mut r = Recorder::new(7, "Delone audits", None);
    match delone_window(5_000, 5_000) {
        Ok(d) => {
            let a = audit_delone(&d);
            r.check(
                "min gap",
                a.min_gap == Dyadic::ONE,
                format!("{}", a.min_gap),
            );
            r.check(
                "gap values",
                a.gaps_in_length_set && a.gaps_match_labels,
                format!("sup gap {}", a.sup_gap),
            );
            r.check(
                "inflation",
                a.inflation_failures.is_empty(),
                format!(
                    "{} points checked, {} failures",
                    a.inflation_checked,
                    a.inflation_failures.len()
                ),
            );
            r.check(
                "distinct gaps",
                a.distinct_gaps >= 10,
                format!("{}", a.distinct_gaps),
            );
        }
        Err(e) => r.fail("window", e),
    }
    r.finish()
}

/// Exact against empirical `η` and verdicts against word periodicity.
pub fn criterion_8() -> CriterionReport {
    let mut r = Recorder::new(8, "oracle equivalence on random cyclic rules", Some(300.0));
    let ctx = golden();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n_avg = 1_000_000usize;
    let mut eta_fail = Vec::new();
    let mut verdict_fail = Vec::new();
    let mut worst = 0.0f64;
    let mut pp = 0;
    for i in 0..100 {
        let k = rng.gen_range(2..=6u32);
        let len = rng.gen_range(2..=5usize);
        let rule = builtins::random_cyclic_rule(&mut rng, k, len);
        let chi = Character::Cyclic {
            modulus: k,
            index: 1,
        };
        let setup = setup_of(&rule);
        let spec = BijectiveRecurrenceSpec::from_setup(&setup, &chi).expect("translation rule");
        let mut exact = BijectiveEta::new(spec, ctx);
        let word = match pseudo_fixed_prefix(&setup, (n_avg + 32) as u64) {
            Ok(w) => w,
            Err(e) => {
                eta_fail.push(format!("#{i}: {e}"));
                continue;
            }
        };
        let comb = WeightedComb::from_word(&word, &chi, &ctx).expect("cyclic character");
        let emp = comb.eta_range(32, n_avg).expect("window sized above");
        let d = (0..=32)
            .map(|m| (emp[m] - exact.get(m as i64)).norm())
            .fold(0.0, f64::max);
        worst = worst.max(d);
        if d > 5e-3 {
            eta_fail.push(format!("#{i} {rule}: {d:.2e}"));
        }
        let window = word.window(-4096, 4096).expect("inside the prefix");
        let periodic = detect_period(&window).is_some();
        match classify_bijective(&rule, &chi, &ctx) {
            Ok(v) => {
                let agrees = match v.kind {
                    SpectralKind::PurePoint => periodic,
                    SpectralKind::PurelySingularContinuous => !periodic,
                    _ => false,
                };
                pp += v.is_pure_point() as usize;
                if !agrees {
                    verdict_fail.push(format!("#{i} {rule}: {:?}, periodic {periodic}", v.kind));
                }
            }
            Err(e) => verdict_fail.push(format!("#{i}: {e}")),
        }
    }
    r.check(
        "exact vs empirical",
        eta_fail.is_empty(),
        format!(
            "N = 10^6, |m| <= 32, max |Δ| = {worst:.2e}; {}",
            eta_fail.join("; ")
        ),
    );
    r.check(
        "verdict vs periodicity",
        verdict_fail.is_empty(),
        format!("{pp} pure point of 100; {}", verdict_fail.join("; ")),
    );
    r.finish()
}

pub fn criterion(id: u8) -> Option<CriterionReport> {
    Some(match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        _ => return None,
    })
}

pub fn run_all() -> Vec<CriterionReport> {
    (1..=8).filter_map(criterion).collect()
}
