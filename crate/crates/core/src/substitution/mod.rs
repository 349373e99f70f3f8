//! Substitution rules and their action on two-sided words.

mod probe;
mod pseudo_fixed;
mod render;
mod spin;

use std::fmt;

use crate::alphabet::{compose, AlphabetKind, Angle, ExtNat, Letter, PhiContext};
use crate::error::{AlphabetError, SubstitutionError};

pub use probe::{
    alphabet_net, detect_period, primitivity_probe, primitivity_probe_with_net, ProbeConfig,
    ProbeOutcome,
};
pub use pseudo_fixed::{normalize_pseudo_fixed, pseudo_fixed_prefix, PseudoFixedSetup, MAX_POWER};
pub use render::{render_constant, render_translation};
pub use spin::{spin_letter, spin_word, SpinWord};

/// One column of a constant-length rule: position `j` of every image.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Column {
    /// `θ ↦ θ·β`
    Translation(Letter),
    /// `θ ↦ c`
    Constant(Letter),
}

impl Column {
    pub fn letter(&self) -> &Letter {
        match self {
            Column::Translation(b) | Column::Constant(b) => b,
        }
    }

    pub fn is_translation(&self) -> bool {
        matches!(self, Column::Translation(_))
    }

    pub fn apply(&self, a: &Letter) -> Result<Letter, AlphabetError> {
        match self {
            Column::Translation(b) => compose(a, b),
            Column::Constant(c) => {
                if a.same_alphabet(c) {
                    Ok(c.clone())
                } else {
                    Err(AlphabetError::AlphabetMismatch(
                        a.kind().to_string(),
                        c.kind().to_string(),
                    ))
                }
            }
        }
    }

    /// `self ∘ inner`: apply `inner`, then `self`.
    pub fn after(&self, inner: &Column) -> Result<Column, AlphabetError> {
        Ok(match (self, inner) {
            (Column::Constant(c), _) => Column::Constant(c.clone()),
            (Column::Translation(b), Column::Translation(b0)) => {
                Column::Translation(compose(b0, b)?)
            }
            (Column::Translation(b), Column::Constant(c)) => Column::Constant(compose(c, b)?),
        })
    }

    fn resolve(&self, ctx: &PhiContext) -> Column {
        match self {
            Column::Translation(b) => Column::Translation(b.resolve(ctx)),
            Column::Constant(c) => Column::Constant(c.resolve(ctx)),
        }
    }
}

/// Constant-length substitution on a group alphabet, given by its columns.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ConstantLengthRule {
    alphabet: AlphabetKind,
    columns: Vec<Column>,
}

impl ConstantLengthRule {
    pub fn new(alphabet: AlphabetKind, columns: Vec<Column>) -> Result<Self, SubstitutionError> {
        if columns.is_empty() {
            return Err(SubstitutionError::Empty);
        }
        let identity = alphabet.identity()?;
        for c in &columns {
            if !c.letter().same_alphabet(&identity) {
                return Err(AlphabetError::AlphabetMismatch(
                    alphabet.to_string(),
                    c.letter().kind().to_string(),
                )
                .into());
            }
        }
        Ok(ConstantLengthRule { alphabet, columns })
    }

    /// Rule whose columns are all translations.
    pub fn translations(
        alphabet: AlphabetKind,
        betas: Vec<Letter>,
    ) -> Result<Self, SubstitutionError> {
        Self::new(
            alphabet,
            betas.into_iter().map(Column::Translation).collect(),
        )
    }

    /// Rule on the circle with translation columns given as angles.
    pub fn circle(angles: &[Angle]) -> Result<Self, SubstitutionError> {
        Self::translations(
            AlphabetKind::Circle,
            angles.iter().map(|&t| Letter::Circle(t)).collect(),
        )
    }

    pub fn alphabet(&self) -> &AlphabetKind {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, k: usize) -> &Column {
        &self.columns[k]
    }

    pub fn is_bijective(&self) -> bool {
        self.columns.iter().all(Column::is_translation)
    }

    pub fn constant_count(&self) -> usize {
        self.columns.iter().filter(|c| !c.is_translation()).count()
    }

    pub fn image(&self, a: &Letter) -> Result<Vec<Letter>, AlphabetError> {
        self.columns.iter().map(|c| c.apply(a)).collect()
    }

    /// `ϱ^m`, whose column `L·j + k` is `column_k ∘ column^{(m-1)}_j`.
    pub fn power(&self, m: u32) -> Result<ConstantLengthRule, SubstitutionError> {
        if m == 0 {
            return Ok(ConstantLengthRule {
                alphabet: self.alphabet.clone(),
                columns: vec![Column::Translation(self.alphabet.identity()?)],
            });
        }
        let mut cols = self.columns.clone();
        for _ in 1..m {
            let mut next = Vec::with_capacity(cols.len() * self.len());
            for inner in &cols {
                for outer in &self.columns {
                    next.push(outer.after(inner)?);
                }
            }
            cols = next;
        }
        Ok(ConstantLengthRule {
            alphabet: self.alphabet.clone(),
            columns: cols,
        })
    }

    pub fn resolve(&self, ctx: &PhiContext) -> ConstantLengthRule {
        ConstantLengthRule {
            alphabet: self.alphabet.clone(),
            columns: self.columns.iter().map(|c| c.resolve(ctx)).collect(),
        }
    }
}

/// Spin substitution on `S¹ × {0,…,q-1}`: `(θ, i) ↦ (θ + W_{i0}, 0) ⋯ (θ + W_{i,q-1}, q-1)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SpinRule {
    matrix: Vec<Vec<Angle>>,
}

impl SpinRule {
    pub fn new(matrix: Vec<Vec<Angle>>) -> Result<Self, SubstitutionError> {
        let q = matrix.len();
        if q < 2 || matrix.iter().any(|row| row.len() != q) || q > u32::MAX as usize {
            return Err(SubstitutionError::MalformedSpinMatrix);
        }
        Ok(SpinRule { matrix })
    }

    pub fn digits(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<Angle>] {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> Angle {
        self.matrix[i][j]
    }

    pub fn alphabet(&self) -> AlphabetKind {
        AlphabetKind::Product(vec![
            AlphabetKind::Circle,
            AlphabetKind::Cyclic(self.digits() as u32),
        ])
    }

    pub fn image(&self, a: &Letter) -> Result<Vec<Letter>, AlphabetError> {
        let (theta, d) = self.split(a)?;
        Ok((0..self.digits())
            .map(|j| spin_letter(theta + self.matrix[d][j], j as u32, self.digits() as u32))
            .collect())
    }

    fn split(&self, a: &Letter) -> Result<(Angle, usize), AlphabetError> {
        if let Letter::Product(parts) = a {
            if let [Letter::Circle(t), Letter::Cyclic { modulus, residue }] = parts.as_slice() {
                if *modulus as usize == self.digits() {
                    return Ok((*t, *residue as usize));
                }
            }
        }
        Err(AlphabetError::AlphabetMismatch(
            self.alphabet().to_string(),
            a.kind().to_string(),
        ))
    }
}

/// `0 ↦ 0 1`, `n ↦ 0 (n+1) (n-1)`, `∞ ↦ 0 ∞ ∞` on `ℕ₀ ∪ {∞}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct ExtNatRule;

impl ExtNatRule {
    pub fn image_of(&self, a: ExtNat) -> Vec<ExtNat> {
        use ExtNat::*;
        match a {
            Finite(0) => vec![Finite(0), Finite(1)],
            Finite(n) => vec![Finite(0), Finite(n + 1), Finite(n - 1)],
            Infinity => vec![Finite(0), Infinity, Infinity],
        }
    }

    pub fn image(&self, a: &Letter) -> Result<Vec<Letter>, AlphabetError> {
        match a {
            Letter::ExtNat(n) => Ok(self.image_of(*n).into_iter().map(Letter::ExtNat).collect()),
            other => Err(AlphabetError::AlphabetMismatch(
                AlphabetKind::ExtNat.to_string(),
                other.kind().to_string(),
            )),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SubstitutionRule {
    ConstantLength(ConstantLengthRule),
    Spin(SpinRule),
    ExtNat(ExtNatRule),
}

impl SubstitutionRule {
    pub fn alphabet(&self) -> AlphabetKind {
        match self {
            SubstitutionRule::ConstantLength(r) => r.alphabet().clone(),
            SubstitutionRule::Spin(r) => r.alphabet(),
            SubstitutionRule::ExtNat(_) => AlphabetKind::ExtNat,
        }
    }

    pub fn image(&self, a: &Letter) -> Result<Vec<Letter>, AlphabetError> {
        match self {
            SubstitutionRule::ConstantLength(r) => r.image(a),
            SubstitutionRule::Spin(r) => r.image(a),
            SubstitutionRule::ExtNat(r) => r.image(a),
        }
    }
}

impl From<ConstantLengthRule> for SubstitutionRule {
    fn from(r: ConstantLengthRule) -> Self {
        SubstitutionRule::ConstantLength(r)
    }
}

impl From<SpinRule> for SubstitutionRule {
    fn from(r: SpinRule) -> Self {
        SubstitutionRule::Spin(r)
    }
}

/// Finite window of a bi-infinite sequence; letter `i` sits at coordinate `i - origin`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TwoSidedWord {
    letters: Vec<Letter>,
    origin: usize,
}

impl TwoSidedWord {
    pub fn new(letters: Vec<Letter>, origin: usize) -> Result<Self, SubstitutionError> {
        if letters.is_empty() {
            return Err(SubstitutionError::Empty);
        }
        if origin >= letters.len() {
            return Err(SubstitutionError::OriginOutOfRange {
                origin,
                len: letters.len(),
            });
        }
        Ok(TwoSidedWord { letters, origin })
    }

    pub fn single(a: Letter) -> Self {
        TwoSidedWord {
            letters: vec![a],
            origin: 0,
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn min_coord(&self) -> i64 {
        -(self.origin as i64)
    }

    pub fn max_coord(&self) -> i64 {
        self.letters.len() as i64 - 1 - self.origin as i64
    }

    pub fn covers(&self, lo: i64, hi: i64) -> bool {
        lo >= self.min_coord() && hi <= self.max_coord()
    }

    pub fn get(&self, n: i64) -> Option<&Letter> {
        let i = n + self.origin as i64;
        if i < 0 {
            return None;
        }
        self.letters.get(i as usize)
    }

    /// Sub-window over coordinates `lo..=hi`, which must contain 0.
    pub fn window(&self, lo: i64, hi: i64) -> Option<TwoSidedWord> {
        if lo > 0 || hi < 0 || !self.covers(lo, hi) {
            return None;
        }
        let a = (lo + self.origin as i64) as usize;
        let b = (hi + self.origin as i64) as usize;
        Some(TwoSidedWord {
            letters: self.letters[a..=b].to_vec(),
            origin: (-lo) as usize,
        })
    }

    pub fn resolve(&self, ctx: &PhiContext) -> TwoSidedWord {
        TwoSidedWord {
            letters: self.letters.iter().map(|a| a.resolve(ctx)).collect(),
            origin: self.origin,
        }
    }
}

impl fmt::Display for TwoSidedWord {
    /// `[a][b] | [c][d]` with the bar left of coordinate 0.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.letters.iter().enumerate() {
            if i == self.origin && i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "[{a}]")?;
        }
        Ok(())
    }
}

/// Image word; the image of the letter at coordinate 0 starts at coordinate 0.
pub fn apply(rule: &SubstitutionRule, w: &TwoSidedWord) -> Result<TwoSidedWord, SubstitutionError> {
    let mut letters = Vec::new();
    let mut origin = 0;
    for (i, a) in w.letters.iter().enumerate() {
        if i == w.origin {
            origin = letters.len();
        }
        letters.extend(rule.image(a)?);
    }
    TwoSidedWord::new(letters, origin)
}
