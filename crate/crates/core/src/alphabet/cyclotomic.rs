//! Exact vanishing test for sums of unit complexes `Σ e^{2πi(q_j + k_j φ)}`.
//!
//! Terms are grouped by their `φ`-coefficient. Each group is a sum of roots
//! of unity, i.e. an element of `ℚ(ζ_N)` with `N` the lcm of the
//! denominators; it vanishes iff the integer polynomial `Σ x^{q_j N}` is
//! divisible by the cyclotomic polynomial `Φ_N`.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;

use super::angle::{Angle, PhiContext};

/// Orders above this are reported as [`ZeroTest::Unknown`].
pub const MAX_CYCLOTOMIC_ORDER: i64 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum ZeroTest {
    Zero,
    NonZero,
    Unknown,
}

pub fn exact_sum_is_zero(ts: &[Angle], ctx: &PhiContext) -> ZeroTest {
    let mut groups: BTreeMap<i64, Vec<Angle>> = BTreeMap::new();
    for t in ts {
        let t = t.resolve(ctx);
        groups.entry(t.k()).or_default().push(t);
    }
    let mut cache = HashMap::new();
    let mut unknown = false;
    for terms in groups.values() {
        match rational_group_is_zero(terms, &mut cache) {
            Some(true) => {}
            Some(false) => return ZeroTest::NonZero,
            None => unknown = true,
        }
    }
    if unknown {
        ZeroTest::Unknown
    } else {
        ZeroTest::Zero
    }
}

fn rational_group_is_zero(terms: &[Angle], cache: &mut HashMap<i64, Vec<i128>>) -> Option<bool> {
    let order = terms.iter().fold(1i64, |acc, t| acc.lcm(t.q().denom()));
    if order > MAX_CYCLOTOMIC_ORDER {
        return None;
    }
    let mut poly = vec![0i128; order as usize];
    for t in terms {
        let e = t.q().numer() * (order / t.q().denom());
        poly[e as usize] += 1;
    }
    let phi = cyclotomic_polynomial(order, cache);
    Some(remainder_is_zero(poly, &phi))
}

fn remainder_is_zero(mut poly: Vec<i128>, divisor: &[i128]) -> bool {
    let d = divisor.len() - 1;
    for deg in (d..poly.len()).rev() {
        let c = poly[deg];
        if c != 0 {
            for (i, &a) in divisor.iter().enumerate() {
                poly[deg - d + i] -= c * a;
            }
        }
    }
    poly.iter().take(d).all(|&c| c == 0)
}

/// Coefficients (low to high) of `Φ_n`.
pub fn cyclotomic_polynomial(n: i64, cache: &mut HashMap<i64, Vec<i128>>) -> Vec<i128> {
    if let Some(p) = cache.get(&n) {
        return p.clone();
    }
    // x^n - 1
    let mut num = vec![0i128; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d, cache);
            num = exact_divide(&num, &phi_d);
        }
    }
    cache.insert(n, num.clone());
    num
}

fn exact_divide(num: &[i128], den: &[i128]) -> Vec<i128> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quo = vec![0i128; dn - dd + 1];
    for deg in (dd..=dn).rev() {
        let c = rem[deg];
        quo[deg - dd] = c;
        if c != 0 {
            for (i, &a) in den.iter().enumerate() {
                rem[deg - dd + i] -= c * a;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quo
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn cyclotomic_polynomials() {
        let mut cache = HashMap::new();
        assert_eq!(cyclotomic_polynomial(1, &mut cache), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2, &mut cache), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(3, &mut cache), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4, &mut cache), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6, &mut cache), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12, &mut cache), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn examples() {
        let ctx = PhiContext::golden();
        assert_eq!(
            exact_sum_is_zero(&[Angle::ZERO, Angle::rational(1, 2)], &ctx),
            ZeroTest::Zero
        );
        assert_eq!(
            exact_sum_is_zero(
                &[Angle::ZERO, Angle::rational(1, 3), Angle::rational(2, 3)],
                &ctx
            ),
            ZeroTest::Zero
        );
        assert_eq!(
            exact_sum_is_zero(&[Angle::ZERO, Angle::phi_multiple(1)], &ctx),
            ZeroTest::NonZero
        );
    }

    #[test]
    fn rational_phi_is_substituted() {
        let half = PhiContext::rational(1, 2).unwrap();
        assert_eq!(
            exact_sum_is_zero(&[Angle::ZERO, Angle::phi_multiple(1)], &half),
            ZeroTest::Zero
        );
    }

    #[test]
    fn non_trivial_vanishing_sum() {
        // fifth roots of unity plus the antipodal pair ζ_6, ζ_6^4
        let ctx = PhiContext::golden();
        let mut ts: Vec<Angle> = (0..5).map(|j| Angle::rational(j, 5)).collect();
        ts.push(Angle::rational(1, 6));
        ts.push(Angle::rational(2, 3));
        assert_eq!(exact_sum_is_zero(&ts, &ctx), ZeroTest::Zero);
        ts.push(Angle::rational(1, 5));
        assert_eq!(exact_sum_is_zero(&ts, &ctx), ZeroTest::NonZero);
    }

    #[test]
    fn empty_sum_is_zero_and_huge_orders_unknown() {
        let ctx = PhiContext::golden();
        assert_eq!(exact_sum_is_zero(&[], &ctx), ZeroTest::Zero);
        let big = Angle::new(Ratio::new(1, MAX_CYCLOTOMIC_ORDER + 1), 0);
        assert_eq!(exact_sum_is_zero(&[big, -big], &ctx), ZeroTest::Unknown);
    }
}
