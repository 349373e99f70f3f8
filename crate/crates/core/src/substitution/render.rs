//! Multiplicative rendering of rules: `[θ] ↦ [θ][θ][θα][θ]`.

use std::fmt;

use num_traits::Zero;

use super::{Column, ConstantLengthRule, ExtNatRule, SpinRule, SubstitutionRule};
use crate::alphabet::{Angle, Letter};

fn superscript(n: i64) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut s = String::new();
    if n < 0 {
        s.push('⁻');
    }
    for c in n.unsigned_abs().to_string().chars() {
        s.push(DIGITS[c.to_digit(10).unwrap() as usize]);
    }
    s
}

fn power(base: &str, n: i64) -> String {
    match n {
        0 => String::new(),
        1 => base.to_string(),
        n => format!("{base}{}", superscript(n)),
    }
}

/// Sign flag and remaining factor of `e^{2πi t}` written with `α = e^{2πiφ}`.
fn circle_parts(t: Angle) -> (bool, String) {
    let q = t.q();
    let (neg, root) = if q.is_zero() {
        (false, String::new())
    } else if q == num_rational::Ratio::new(1, 2) {
        (true, String::new())
    } else {
        (false, format!("e({q})"))
    };
    (neg, root + &power("α", t.k()))
}

fn group_element(a: &Letter) -> String {
    match a {
        Letter::Cyclic { residue, .. } => {
            if *residue == 0 {
                "e".into()
            } else {
                power("g", *residue as i64)
            }
        }
        Letter::Circle(t) => {
            let (neg, rest) = circle_parts(*t);
            let body = if rest.is_empty() {
                "1".to_string()
            } else {
                rest
            };
            if neg {
                format!("−{body}")
            } else {
                body
            }
        }
        Letter::Product(ls) => {
            let parts: Vec<String> = ls.iter().map(group_element).collect();
            format!("({})", parts.join(","))
        }
        Letter::ExtNat(n) => n.to_string(),
    }
}

fn is_identity(a: &Letter) -> bool {
    match a {
        Letter::Cyclic { residue, .. } => *residue == 0,
        Letter::Circle(t) => t.is_zero(),
        Letter::Product(ls) => ls.iter().all(is_identity),
        Letter::ExtNat(_) => false,
    }
}

fn variable(a: &Letter) -> &'static str {
    match a {
        Letter::Cyclic { .. } => "a",
        _ => "θ",
    }
}

/// `θ·β` in multiplicative notation, e.g. `θα`, `−θ`, `ag`, `θ·(g,α)`.
pub fn render_translation(beta: &Letter) -> String {
    let v = variable(beta);
    match beta {
        Letter::Circle(t) => {
            let (neg, rest) = circle_parts(*t);
            format!("{}{v}{rest}", if neg { "−" } else { "" })
        }
        Letter::Cyclic { residue, .. } => format!("{v}{}", power("g", *residue as i64)),
        _ if is_identity(beta) => v.to_string(),
        _ => format!("{v}·{}", group_element(beta)),
    }
}

pub fn render_constant(c: &Letter) -> String {
    group_element(c)
}

impl fmt::Display for ConstantLengthRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = variable(self.columns[0].letter());
        write!(f, "[{v}] ↦ ")?;
        for c in &self.columns {
            match c {
                Column::Translation(b) => write!(f, "[{}]", render_translation(b))?,
                Column::Constant(a) => write!(f, "[{}]", render_constant(a))?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for SpinRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.matrix().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "(θ,{i}) ↦ ")?;
            for (j, &w) in row.iter().enumerate() {
                write!(f, "({},{j})", render_translation(&Letter::Circle(w)))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for ExtNatRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[0] ↦ [0][1]\n[n] ↦ [0][n+1][n−1]\n[∞] ↦ [0][∞][∞]")
    }
}

impl fmt::Display for SubstitutionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubstitutionRule::ConstantLength(r) => r.fmt(f),
            SubstitutionRule::Spin(r) => r.fmt(f),
            SubstitutionRule::ExtNat(r) => r.fmt(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::AlphabetKind;

    #[test]
    fn circle_rules() {
        let rho1 = ConstantLengthRule::circle(&[
            Angle::ZERO,
            Angle::ZERO,
            Angle::phi_multiple(1),
            Angle::ZERO,
        ])
        .unwrap();
        assert_eq!(rho1.to_string(), "[θ] ↦ [θ][θ][θα][θ]");
        let r = ConstantLengthRule::circle(&[
            Angle::ZERO,
            Angle::phi_multiple(2),
            Angle::phi_multiple(-1),
        ])
        .unwrap();
        assert_eq!(r.to_string(), "[θ] ↦ [θ][θα²][θα⁻¹]");
    }

    #[test]
    fn cyclic_and_product_rules() {
        let c2 = ConstantLengthRule::translations(
            AlphabetKind::Cyclic(2),
            vec![
                Letter::cyclic(2, 0).unwrap(),
                Letter::cyclic(2, 1).unwrap(),
                Letter::cyclic(2, 0).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(c2.to_string(), "[a] ↦ [a][ag][a]");
        let e1 = Letter::Product(vec![
            Letter::cyclic(2, 0).unwrap(),
            Letter::Circle(Angle::ZERO),
        ]);
        let ga = Letter::Product(vec![
            Letter::cyclic(2, 1).unwrap(),
            Letter::Circle(Angle::phi_multiple(1)),
        ]);
        let p = ConstantLengthRule::translations(
            AlphabetKind::Product(vec![AlphabetKind::Cyclic(2), AlphabetKind::Circle]),
            vec![e1.clone(), ga, e1],
        )
        .unwrap();
        assert_eq!(p.to_string(), "[θ] ↦ [θ][θ·(g,α)][θ]");
    }

    #[test]
    fn spin_rule() {
        let spin = SpinRule::new(vec![
            vec![Angle::ZERO, Angle::rational(1, 2)],
            vec![Angle::phi_multiple(1), Angle::phi_multiple(1)],
        ])
        .unwrap();
        assert_eq!(
            spin.to_string(),
            "(θ,0) ↦ (θ,0)(−θ,1)\n(θ,1) ↦ (θα,0)(θα,1)"
        );
    }
}
