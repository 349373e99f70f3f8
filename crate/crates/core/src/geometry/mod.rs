//! Non-constant-length example on `ℕ₀ ∪ {∞}`: the length operator, its
//! Perron data, letter frequencies and the associated Delone set.

mod dyadic;

use std::collections::BTreeSet;

use num_rational::Ratio;

use crate::alphabet::ExtNat;
use crate::error::GeometryError;
use crate::substitution::ExtNatRule;

pub use dyadic::Dyadic;

/// Inflation factor of the shipped rule, `5/2`.
pub const INFLATION: Dyadic = Dyadic::FIVE_HALVES;

/// Values on `{0, …, N}` plus a value at `∞`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct TruncatedFunction<T> {
    pub values: Vec<T>,
    pub infinity: T,
}

impl<T: Clone> TruncatedFunction<T> {
    pub fn constant(cap: usize, v: T) -> Self {
        TruncatedFunction {
            values: vec![v.clone(); cap + 1],
            infinity: v,
        }
    }

    pub fn from_fn(cap: usize, f: impl Fn(ExtNat) -> T) -> Self {
        TruncatedFunction {
            values: (0..=cap as u64).map(|n| f(ExtNat::Finite(n))).collect(),
            infinity: f(ExtNat::Infinity),
        }
    }

    pub fn cap(&self) -> usize {
        self.values.len() - 1
    }

    /// Value at a letter; finite letters above the cap read the `∞` value.
    pub fn at(&self, a: ExtNat) -> &T {
        match a {
            ExtNat::Finite(n) => self.values.get(n as usize).unwrap_or(&self.infinity),
            ExtNat::Infinity => &self.infinity,
        }
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> TruncatedFunction<U> {
        TruncatedFunction {
            values: self.values.iter().map(&f).collect(),
            infinity: f(&self.infinity),
        }
    }

    /// Entries in the order `0, …, N, ∞`.
    pub fn iter(&self) -> impl Iterator<Item = (ExtNat, &T)> {
        self.values
            .iter()
            .enumerate()
            .map(|(n, v)| (ExtNat::Finite(n as u64), v))
            .chain(std::iter::once((ExtNat::Infinity, &self.infinity)))
    }
}

/// The exact length function `ℓ*(n) = 2 − 2^{-n}`, `ℓ*(∞) = 2`.
pub fn natural_length(a: ExtNat) -> Dyadic {
    match a {
        ExtNat::Finite(n) => Dyadic::from_int(2) - Dyadic::half_pow(n as u32),
        ExtNat::Infinity => Dyadic::from_int(2),
    }
}

/// `(Mf)(a) = Σ_{b ∈ ϱ(a)} f(b)`, with `N+1` read as `∞` at the cap.
pub fn m_apply<T>(f: &TruncatedFunction<T>) -> TruncatedFunction<T>
where
    T: Clone + std::ops::Add<Output = T>,
{
    let n = f.cap();
    assert!(n >= 2, "cap must be at least 2");
    let v = &f.values;
    let inf = &f.infinity;
    let mut out = Vec::with_capacity(n + 1);
    out.push(v[0].clone() + v[1].clone());
    for i in 1..n {
        out.push(v[0].clone() + v[i + 1].clone() + v[i - 1].clone());
    }
    out.push(v[0].clone() + inf.clone() + v[n - 1].clone());
    TruncatedFunction {
        values: out,
        infinity: v[0].clone() + inf.clone() + inf.clone(),
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct PowerIteration {
    pub lambda: f64,
    pub ell: TruncatedFunction<f64>,
    pub iterations: usize,
    /// Collatz–Wielandt bounds `(min, max)` of `(Mf)(a)/f(a)` per iterate.
    pub brackets: Vec<(f64, f64)>,
}

fn ratio_bracket(mf: &TruncatedFunction<f64>, f: &TruncatedFunction<f64>) -> (f64, f64) {
    mf.iter()
        .zip(f.iter())
        .map(|((_, a), (_, b))| a / b)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r), hi.max(r))
        })
}

/// Normalized power iteration `f ↦ Mf/(Mf)(0)` from `f ≡ 1`.
pub fn power_iteration(
    cap: usize,
    tol: f64,
    max_iter: usize,
) -> Result<PowerIteration, GeometryError> {
    if cap < 10 {
        return Err(GeometryError::InvalidParameter(format!(
            "cap must be at least 10, got {cap}"
        )));
    }
    if !(tol > 0.0) {
        return Err(GeometryError::InvalidParameter(
            "tolerance must be positive".into(),
        ));
    }
    power_iteration_from(TruncatedFunction::constant(cap, 1.0), tol, max_iter)
}

/// Power iteration from a given positive start.
pub fn power_iteration_from(
    start: TruncatedFunction<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<PowerIteration, GeometryError> {
    if start.cap() < 2 || start.iter().any(|(_, v)| !(*v > 0.0)) {
        return Err(GeometryError::InvalidSeed(
            "start must be positive with cap >= 2".into(),
        ));
    }
    let mut f = start.map(|v| v / start.values[0]);
    let mut brackets = Vec::new();
    for it in 1..=max_iter {
        let mf = m_apply(&f);
        brackets.push(ratio_bracket(&mf, &f));
        let lambda = mf.values[0];
        let next = mf.map(|v| v / lambda);
        let change = next
            .iter()
            .zip(f.iter())
            .map(|((_, a), (_, b))| (a - b).abs())
            .fold(0.0, f64::max);
        f = next;
        if change < tol {
            return Ok(PowerIteration {
                lambda,
                ell: f,
                iterations: it,
                brackets,
            });
        }
    }
    Err(GeometryError::NoConvergence {
        iterations: max_iter,
    })
}

/// Exact letter proportions in `ϱ^depth(0)`, indexed `0..=depth` plus `∞`.
pub fn frequency_estimate(depth: usize) -> Result<TruncatedFunction<Ratio<u128>>, GeometryError> {
    if depth < 8 {
        return Err(GeometryError::InvalidParameter(format!(
            "depth must be at least 8, got {depth}"
        )));
    }
    let counts = letter_counts(depth);
    let total: u128 = counts.iter().sum();
    let mut f = TruncatedFunction::constant(depth, Ratio::new(0u128, 1));
    for (n, &c) in counts.iter().enumerate() {
        f.values[n] = Ratio::new(c, total);
    }
    Ok(f)
}

/// Occurrences of each finite letter in `ϱ^depth(0)`; `∞` never occurs.
fn letter_counts(depth: usize) -> Vec<u128> {
    let mut c = vec![0u128; depth + 2];
    c[0] = 1;
    for _ in 0..depth {
        let mut next = vec![0u128; depth + 2];
        for (n, &k) in c.iter().enumerate() {
            if k == 0 {
                continue;
            }
            for b in ExtNatRule.image_of(ExtNat::Finite(n as u64)) {
                if let ExtNat::Finite(m) = b {
                    next[m as usize] += k;
                }
            }
        }
        c = next;
    }
    c.truncate(depth + 1);
    c
}

/// Left endpoints of tiles, labelled by their letter.
#[derive(Clone, Debug, PartialEq)]
pub struct DeloneSet {
    points: Vec<Dyadic>,
    labels: Vec<ExtNat>,
    /// Index of the point at 0.
    origin: usize,
}

impl DeloneSet {
    pub fn points(&self) -> &[Dyadic] {
        &self.points
    }

    pub fn labels(&self) -> &[ExtNat] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn left_tiles(&self) -> usize {
        self.origin
    }

    pub fn right_tiles(&self) -> usize {
        self.points.len() - self.origin
    }

    /// `[left, right)`: from the first point to the end of the last tile.
    pub fn window(&self) -> (Dyadic, Dyadic) {
        let last = self.points.len() - 1;
        (
            self.points[0],
            self.points[last] + natural_length(self.labels[last]),
        )
    }

    pub fn contains(&self, x: Dyadic) -> bool {
        self.points.binary_search(&x).is_ok()
    }

    /// The `left` tiles before 0 and the `right` tiles from 0 on.
    pub fn restrict(&self, left: usize, right: usize) -> Result<DeloneSet, GeometryError> {
        if left > self.left_tiles() || right > self.right_tiles() || right == 0 {
            return Err(GeometryError::InvalidParameter(format!(
                "window of {left}+{right} tiles exceeds {}+{}",
                self.left_tiles(),
                self.right_tiles()
            )));
        }
        let lo = self.origin - left;
        let hi = self.origin + right;
        Ok(DeloneSet {
            points: self.points[lo..hi].to_vec(),
            labels: self.labels[lo..hi].to_vec(),
            origin: left,
        })
    }
}

/// Points of `ϱ^k(∞) | ϱ^k(0)` with the seed boundary at 0.
pub fn delone_build(iterations: usize) -> DeloneSet {
    let rule = ExtNatRule;
    assert_eq!(
        rule.image_of(ExtNat::Infinity).last(),
        Some(&ExtNat::Infinity)
    );
    assert_eq!(
        rule.image_of(ExtNat::Finite(0)).first(),
        Some(&ExtNat::Finite(0))
    );
    let mut left = vec![ExtNat::Infinity];
    let mut right = vec![ExtNat::Finite(0)];
    for _ in 0..iterations {
        left = left.iter().flat_map(|&a| rule.image_of(a)).collect();
        right = right.iter().flat_map(|&a| rule.image_of(a)).collect();
    }
    let mut points = Vec::with_capacity(left.len() + right.len());
    let mut x = Dyadic::ZERO;
    for &a in left.iter().rev() {
        x = x - natural_length(a);
        points.push(x);
    }
    points.reverse();
    x = Dyadic::ZERO;
    for &a in &right {
        points.push(x);
        x = x + natural_length(a);
    }
    let origin = left.len();
    left.extend(right);
    DeloneSet {
        points,
        labels: left,
        origin,
    }
}

/// Smallest build with at least `left` and `right` tiles on each side.
pub fn delone_window(left: usize, right: usize) -> Result<DeloneSet, GeometryError> {
    let mut k = 0;
    loop {
        let d = delone_build(k);
        if d.left_tiles() >= left && d.right_tiles() >= right {
            return d.restrict(left, right);
        }
        k += 1;
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct DeloneAudit {
    pub tiles: usize,
    pub left_tiles: usize,
    pub right_tiles: usize,
    pub window: (Dyadic, Dyadic),
    pub min_gap: Dyadic,
    pub sup_gap: Dyadic,
    /// Largest gap among finite-labelled tiles.
    pub sup_finite_gap: Option<Dyadic>,
    /// Every tile of length 2 carries the label `∞`.
    pub sup_gap_only_at_infinity: bool,
    /// Every gap equals the length of its label.
    pub gaps_match_labels: bool,
    /// Every gap lies in `{2 − 2^{-n}} ∪ {2}`.
    pub gaps_in_length_set: bool,
    pub inflation_checked: usize,
    pub inflation_failures: Vec<Dyadic>,
    pub distinct_gaps: usize,
}

impl DeloneAudit {
    pub fn passed(&self) -> bool {
        self.min_gap == Dyadic::ONE
            && self.sup_gap <= Dyadic::from_int(2)
            && self.sup_finite_gap.is_none_or(|g| g < Dyadic::from_int(2))
            && self.sup_gap_only_at_infinity
            && self.gaps_match_labels
            && self.gaps_in_length_set
            && self.inflation_failures.is_empty()
    }
}

fn in_length_set(g: Dyadic) -> bool {
    let two = Dyadic::from_int(2);
    if g == two {
        return true;
    }
    let r = two - g;
    r > Dyadic::ZERO && r.mantissa() == 1
}

pub fn audit_delone(d: &DeloneSet) -> DeloneAudit {
    assert!(!d.is_empty(), "empty Delone window");
    let (lo, hi) = d.window();
    let two = Dyadic::from_int(2);
    let gaps: Vec<Dyadic> = d
        .points
        .windows(2)
        .map(|w| w[1] - w[0])
        .chain(std::iter::once(hi - d.points[d.len() - 1]))
        .collect();
    let min_gap = *gaps.iter().min().expect("nonempty");
    let sup_gap = *gaps.iter().max().expect("nonempty");
    let sup_finite_gap = gaps
        .iter()
        .zip(&d.labels)
        .filter(|(_, a)| matches!(a, ExtNat::Finite(_)))
        .map(|(g, _)| *g)
        .max();
    let sup_gap_only_at_infinity = gaps
        .iter()
        .zip(&d.labels)
        .all(|(g, a)| *g != two || *a == ExtNat::Infinity);
    let gaps_match_labels = gaps
        .iter()
        .zip(&d.labels)
        .all(|(g, a)| *g == natural_length(*a));
    let gaps_in_length_set = gaps.iter().all(|g| in_length_set(*g));
    let mut inflation_checked = 0;
    let mut inflation_failures = Vec::new();
    for &x in &d.points {
        let y = INFLATION * x;
        if y >= lo && y < hi {
            inflation_checked += 1;
            if !d.contains(y) {
                inflation_failures.push(x);
            }
        }
    }
    let distinct: BTreeSet<Dyadic> = gaps.iter().copied().collect();
    DeloneAudit {
        tiles: d.len(),
        left_tiles: d.left_tiles(),
        right_tiles: d.right_tiles(),
        window: (lo, hi),
        min_gap,
        sup_gap,
        sup_finite_gap,
        sup_gap_only_at_infinity,
        gaps_match_labels,
        gaps_in_length_set,
        inflation_checked,
        inflation_failures,
        distinct_gaps: distinct.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ell_star(cap: usize) -> TruncatedFunction<Dyadic> {
        TruncatedFunction::from_fn(cap, natural_length)
    }

    #[test]
    fn operator_on_constant_counts_image_lengths() {
        let m = m_apply(&TruncatedFunction::constant(12, 1u32));
        assert_eq!(m.values[0], 2);
        assert!(m.values[1..].iter().all(|&v| v == 3));
        assert_eq!(m.infinity, 3);
    }

    #[test]
    fn natural_length_is_an_exact_eigenfunction_below_the_cap() {
        let cap = 40;
        let l = ell_star(cap);
        let m = m_apply(&l);
        assert_eq!(m.values[0], Dyadic::new(5, 1));
        for n in 0..cap {
            assert_eq!(m.values[n], INFLATION * l.values[n], "index {n}");
        }
        assert_eq!(m.infinity, Dyadic::from_int(5));
        let err = m.values[cap] - INFLATION * l.values[cap];
        assert_eq!(err, Dyadic::half_pow(cap as u32 + 1));
    }

    #[test]
    fn power_iteration_recovers_the_inflation_factor() {
        let p = power_iteration(40, 1e-10, 100_000).unwrap();
        assert!((p.lambda - 2.5).abs() <= 1e-6, "lambda {}", p.lambda);
        for n in 0..=20 {
            let want = 2.0 - 0.5f64.powi(n as i32);
            assert!((p.ell.values[n] - want).abs() <= 1e-6, "n={n}");
        }
        for w in p.brackets.windows(2) {
            assert!(w[1].0 >= w[0].0 - 1e-12 && w[1].1 <= w[0].1 + 1e-12);
        }
        for &(lo, hi) in &p.brackets {
            assert!(lo <= 2.5 + 1e-9 && 2.5 <= hi + 1e-9);
        }
        let small = power_iteration(10, 1e-10, 100_000).unwrap();
        assert!((small.lambda - p.lambda).abs() <= 1e-2);
    }

    #[test]
    fn exact_eigenfunction_is_nearly_fixed() {
        let cap = 30;
        let start = ell_star(cap).map(|d| d.to_f64());
        let p = power_iteration_from(start.clone(), 1.0, 10).unwrap();
        assert_eq!(p.iterations, 1);
        let change = p
            .ell
            .iter()
            .zip(start.iter())
            .map(|((_, a), (_, b))| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(change <= 2f64.powi(-(cap as i32)));
    }

    #[test]
    fn power_iteration_errors() {
        assert!(matches!(
            power_iteration(9, 1e-6, 10),
            Err(GeometryError::InvalidParameter(_))
        ));
        assert!(matches!(
            power_iteration(40, 1e-14, 3),
            Err(GeometryError::NoConvergence { iterations: 3 })
        ));
    }

    #[test]
    fn frequencies() {
        let f = frequency_estimate(14).unwrap();
        let total: Ratio<u128> = f.values.iter().copied().sum::<Ratio<u128>>() + f.infinity;
        assert_eq!(total, Ratio::from_integer(1));
        assert_eq!(f.infinity, Ratio::from_integer(0));
        assert!(f.values.windows(2).all(|w| w[0] >= w[1]));
        // Exact counts in the image of 0 under the 14th power.
        let counts = [
            140007u128, 69789, 35395, 17197, 9099, 4049, 2343, 853, 563, 145, 111, 17, 15, 1, 1,
        ];
        for (n, &c) in counts.iter().enumerate() {
            assert_eq!(f.values[n], Ratio::new(c, 279585), "n={n}");
        }
        let deeper = frequency_estimate(16).unwrap();
        for n in 0..=6 {
            let v = *deeper.values[n].numer() as f64 / *deeper.values[n].denom() as f64;
            assert!((v - 0.5f64.powi(n as i32 + 1)).abs() <= 1e-3, "n={n}: {v}");
        }
        assert!(frequency_estimate(7).is_err());
    }

    #[test]
    fn small_builds() {
        let d0 = delone_build(0);
        assert_eq!(d0.points(), &[Dyadic::from_int(-2), Dyadic::ZERO]);
        let d1 = delone_build(1);
        let right: Vec<Dyadic> = d1.points()[d1.left_tiles()..].to_vec();
        assert_eq!(right, vec![Dyadic::ZERO, Dyadic::ONE]);
        assert_eq!(d1.window().1, Dyadic::new(5, 1));
        assert_eq!(d1.window().0, Dyadic::from_int(-5));
    }

    #[test]
    fn right_side_gaps() {
        let d = delone_window(0, 10_000).unwrap();
        let a = audit_delone(&d);
        assert!(a.passed(), "{a:?}");
        assert!(a.sup_gap < Dyadic::from_int(2));
        assert_eq!(a.min_gap, Dyadic::ONE);
    }

    #[test]
    fn two_sided_audit() {
        let d = delone_window(5_000, 5_000).unwrap();
        let a = audit_delone(&d);
        assert!(a.passed(), "{a:?}");
        assert_eq!(a.sup_gap, Dyadic::from_int(2));
        assert!(a.inflation_checked > 1000);
        assert!(a.distinct_gaps >= 10);
        let big = audit_delone(&delone_window(50_000, 50_000).unwrap());
        assert!(big.distinct_gaps >= 13 && big.distinct_gaps > a.distinct_gaps);
    }
}
