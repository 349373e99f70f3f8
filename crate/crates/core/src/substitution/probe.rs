//! Finite-data probes: primitivity evidence and periodicity of windows.

use std::collections::BTreeSet;

use num_rational::Ratio;

use super::{SubstitutionRule, TwoSidedWord};
use crate::alphabet::{AlphabetKind, Angle, ExtNat, Letter, PhiContext};
use crate::error::SubstitutionError;

/// Sets of reachable letters larger than this stop the probe.
const MAX_REACHABLE: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeConfig {
    pub epsilon: f64,
    pub depth: u32,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            epsilon: 0.1,
            depth: 32,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProbeOutcome {
    Pass,
    /// Centre of an ε-ball that no single power reaches from every net letter.
    Fail {
        centre: Letter,
    },
}

impl ProbeOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, ProbeOutcome::Pass)
    }
}

/// Finite ε-net of an alphabet: every letter of a finite group, `⌈1/ε⌉`
/// equally spaced angles on the circle, products of component nets, and
/// `{0,…,n₀, ∞}` on `ℕ₀ ∪ {∞}` with `2^{-n₀} < ε`.
pub fn alphabet_net(kind: &AlphabetKind, epsilon: f64) -> Vec<Letter> {
    match kind {
        AlphabetKind::Cyclic(n) => (0..*n)
            .map(|r| Letter::Cyclic {
                modulus: *n,
                residue: r,
            })
            .collect(),
        AlphabetKind::Circle => {
            let m = (1.0 / epsilon).ceil().clamp(1.0, 1e5) as i64;
            (0..m)
                .map(|j| Letter::Circle(Angle::new(Ratio::new(j, m), 0)))
                .collect()
        }
        AlphabetKind::Product(ks) => {
            let mut acc: Vec<Vec<Letter>> = vec![Vec::new()];
            for k in ks {
                let net = alphabet_net(k, epsilon);
                acc = acc
                    .into_iter()
                    .flat_map(|prefix| {
                        net.iter().map(move |a| {
                            let mut v = prefix.clone();
                            v.push(a.clone());
                            v
                        })
                    })
                    .collect();
            }
            acc.into_iter().map(Letter::Product).collect()
        }
        AlphabetKind::ExtNat => {
            let mut n0 = 0u64;
            while 0.5f64.powi(n0 as i32) >= epsilon && n0 < 60 {
                n0 += 1;
            }
            let mut net: Vec<Letter> = (0..=n0)
                .map(|n| Letter::ExtNat(ExtNat::Finite(n)))
                .collect();
            net.push(Letter::ExtNat(ExtNat::Infinity));
            net
        }
    }
}

/// Primitivity evidence on the default ε-net of the rule's alphabet.
pub fn primitivity_probe(
    rule: &SubstitutionRule,
    cfg: &ProbeConfig,
    ctx: &PhiContext,
) -> Result<ProbeOutcome, SubstitutionError> {
    let net = alphabet_net(&rule.alphabet(), cfg.epsilon);
    primitivity_probe_with_net(rule, &net, cfg, ctx)
}

/// For every ball `B(u, ε)`, `u` in `net`, looks for one `p ≤ depth` such
/// that `ϱ^p(a)` meets the ball for every `a` in `net`.
pub fn primitivity_probe_with_net(
    rule: &SubstitutionRule,
    net: &[Letter],
    cfg: &ProbeConfig,
    ctx: &PhiContext,
) -> Result<ProbeOutcome, SubstitutionError> {
    let net: Vec<Letter> = net
        .iter()
        .map(|a| a.resolve(ctx))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if net.is_empty() {
        return Ok(ProbeOutcome::Pass);
    }
    let mut reach: Vec<BTreeSet<Letter>> =
        net.iter().map(|a| BTreeSet::from([a.clone()])).collect();
    let mut covered = vec![false; net.len()];
    for _ in 0..cfg.depth {
        let mut next = Vec::with_capacity(reach.len());
        for set in &reach {
            let mut out = BTreeSet::new();
            for a in set {
                for b in rule.image(a)? {
                    out.insert(b.resolve(ctx));
                }
            }
            if out.len() > MAX_REACHABLE {
                return Ok(first_uncovered(&net, &covered));
            }
            next.push(out);
        }
        reach = next;
        for (u, centre) in net.iter().enumerate() {
            if covered[u] {
                continue;
            }
            let mut hit = true;
            for set in &reach {
                let mut any = false;
                for x in set {
                    if x.distance(centre, ctx)? < cfg.epsilon {
                        any = true;
                        break;
                    }
                }
                if !any {
                    hit = false;
                    break;
                }
            }
            covered[u] = hit;
        }
        if covered.iter().all(|&c| c) {
            return Ok(ProbeOutcome::Pass);
        }
    }
    Ok(first_uncovered(&net, &covered))
}

fn first_uncovered(net: &[Letter], covered: &[bool]) -> ProbeOutcome {
    let u = covered.iter().position(|&c| !c).unwrap_or(0);
    ProbeOutcome::Fail {
        centre: net[u].clone(),
    }
}

/// Smallest `p` with `w_{i+p} = w_i` across the window, reported only when
/// the window is at least four periods long.
pub fn detect_period(w: &TwoSidedWord) -> Option<usize> {
    let xs = w.letters();
    let n = xs.len();
    let mut pi = vec![0usize; n];
    for i in 1..n {
        let mut k = pi[i - 1];
        while k > 0 && xs[i] != xs[k] {
            k = pi[k - 1];
        }
        if xs[i] == xs[k] {
            k += 1;
        }
        pi[i] = k;
    }
    let p = n - pi[n - 1];
    (4 * p <= n).then_some(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{AlphabetKind, Angle};
    use crate::substitution::{ConstantLengthRule, ExtNatRule};

    #[test]
    fn rho1_passes_with_irrational_phi() {
        let rule = ConstantLengthRule::circle(&[
            Angle::ZERO,
            Angle::ZERO,
            Angle::phi_multiple(1),
            Angle::ZERO,
        ])
        .unwrap();
        let cfg = ProbeConfig {
            epsilon: 0.1,
            depth: 8,
        };
        let out = primitivity_probe(&rule.into(), &cfg, &PhiContext::golden()).unwrap();
        assert_eq!(out, ProbeOutcome::Pass);
    }

    #[test]
    fn identity_rule_fails() {
        let rule = ConstantLengthRule::circle(&[Angle::ZERO, Angle::ZERO]).unwrap();
        let out = primitivity_probe(&rule.into(), &ProbeConfig::default(), &PhiContext::golden())
            .unwrap();
        assert!(!out.passed());
    }

    #[test]
    fn rational_rotation_fails_on_the_full_circle() {
        let rule = ConstantLengthRule::circle(&[
            Angle::ZERO,
            Angle::ZERO,
            Angle::phi_multiple(1),
            Angle::ZERO,
        ])
        .unwrap();
        let ctx = PhiContext::rational(1, 3).unwrap();
        let out = primitivity_probe(&rule.into(), &ProbeConfig::default(), &ctx).unwrap();
        assert!(!out.passed());
    }

    #[test]
    fn extnat_rule_passes() {
        let mut net: Vec<Letter> = (0..=10)
            .map(|n| Letter::ExtNat(ExtNat::Finite(n)))
            .collect();
        net.push(Letter::ExtNat(ExtNat::Infinity));
        let cfg = ProbeConfig {
            epsilon: 0.1,
            depth: 12,
        };
        let rule = SubstitutionRule::ExtNat(ExtNatRule);
        let out = primitivity_probe_with_net(&rule, &net, &cfg, &PhiContext::golden()).unwrap();
        assert_eq!(out, ProbeOutcome::Pass);
        assert!(primitivity_probe(&rule, &cfg, &PhiContext::golden())
            .unwrap()
            .passed());
    }

    #[test]
    fn nets() {
        assert_eq!(alphabet_net(&AlphabetKind::Cyclic(3), 0.1).len(), 3);
        assert_eq!(alphabet_net(&AlphabetKind::Circle, 0.1).len(), 10);
        let prod = AlphabetKind::Product(vec![AlphabetKind::Cyclic(2), AlphabetKind::Circle]);
        assert_eq!(alphabet_net(&prod, 0.25).len(), 8);
        let ext = alphabet_net(&AlphabetKind::ExtNat, 0.1);
        assert_eq!(ext.len(), 6);
        assert_eq!(ext.last(), Some(&Letter::ExtNat(ExtNat::Infinity)));
    }

    fn word_of(residues: &[i64], modulus: u32) -> TwoSidedWord {
        let letters = residues
            .iter()
            .map(|&r| Letter::cyclic(modulus, r).unwrap())
            .collect();
        TwoSidedWord::new(letters, 0).unwrap()
    }

    #[test]
    fn periods() {
        assert_eq!(detect_period(&word_of(&[1; 12], 2)), Some(1));
        let w: Vec<i64> = (0..40).map(|i| [0, 1, 1][i % 3]).collect();
        assert_eq!(detect_period(&word_of(&w, 2)), Some(3));
        let tm: Vec<i64> = (0..256u32).map(|i| (i.count_ones() % 2) as i64).collect();
        assert_eq!(detect_period(&word_of(&tm, 2)), None);
        assert_eq!(detect_period(&word_of(&[0, 1, 0, 1, 0, 1, 0], 2)), None);
    }
}
