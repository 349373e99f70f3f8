use super::{SpinRule, TwoSidedWord};
use crate::alphabet::{Angle, Letter};
use crate::error::SubstitutionError;

/// The letter `(θ, d)` of `S¹ × C_q`.
pub fn spin_letter(theta: Angle, digit: u32, q: u32) -> Letter {
    Letter::Product(vec![
        Letter::Circle(theta),
        Letter::Cyclic {
            modulus: q,
            residue: digit % q,
        },
    ])
}

/// `ϱ^p(θ, d)` of a spin rule, kept as parallel spin and digit arrays.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinWord {
    spins: Vec<Angle>,
    digits: Vec<u32>,
}

impl SpinWord {
    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn spins(&self) -> &[Angle] {
        &self.spins
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Letter word with `origin` as the coordinate-0 index.
    pub fn to_word(&self, q: u32, origin: usize) -> Result<TwoSidedWord, SubstitutionError> {
        let letters = self
            .spins
            .iter()
            .zip(&self.digits)
            .map(|(&t, &d)| spin_letter(t, d, q))
            .collect();
        TwoSidedWord::new(letters, origin)
    }
}

/// Iterates the spin rule `iterations` times on `(theta, digit)`.
///
/// The digit of position `j` in any image is `j mod q`, so only the spins
/// depend on the matrix.
pub fn spin_word(rule: &SpinRule, theta: Angle, digit: u32, iterations: u32) -> SpinWord {
    let q = rule.digits();
    let mut spins = vec![theta];
    let mut digits = vec![digit % q as u32];
    for _ in 0..iterations {
        let mut ns = Vec::with_capacity(spins.len() * q);
        let mut nd = Vec::with_capacity(spins.len() * q);
        for (&t, &d) in spins.iter().zip(&digits) {
            let row = &rule.matrix()[d as usize];
            for (j, &w) in row.iter().enumerate() {
                ns.push(t + w);
                nd.push(j as u32);
            }
        }
        spins = ns;
        digits = nd;
    }
    SpinWord { spins, digits }
}
