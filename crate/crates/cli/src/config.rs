//! Line-oriented rule files and the shared angle/letter/character syntax.
//!
//! ```text
//! # comment
//! [alphabet]
//! kind = circle            # cyclic | circle | product | spin | extnat
//! phi = 0.618033988749895
//! phi-mode = irrational    # or rational, with phi = p/q
//!
//! [rule]
//! translation 0
//! translation 0
//! translation phi
//! translation 0
//!
//! [character]
//! chi = 1
//! ```

use std::fmt;

use compact_subst::alphabet::{AlphabetKind, Angle, Character, Letter, PhiContext};
use compact_subst::builtins::Builtin;
use compact_subst::substitution::{Column, ConstantLengthRule, SpinRule, SubstitutionRule};
use num_rational::Ratio;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Position-free syntax error; `offset` is a byte offset into the parsed text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub offset: usize,
    pub message: String,
}

impl SyntaxError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        SyntaxError {
            offset,
            message: message.into(),
        }
    }

    fn at(self, line: usize, column: usize) -> ParseError {
        ParseError {
            line,
            column: column + self.offset,
            message: self.message,
        }
    }
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.offset, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiSpec {
    Irrational(f64),
    Rational(i64, i64),
}

impl PhiSpec {
    pub fn context(self) -> Result<PhiContext, String> {
        match self {
            PhiSpec::Irrational(x) => PhiContext::irrational(x).map_err(|e| e.to_string()),
            PhiSpec::Rational(p, q) => PhiContext::rational(p, q).map_err(|e| e.to_string()),
        }
    }

    /// Parses `value` as a float, or exactly as `p/q` or a decimal when `rational`.
    pub fn parse(value: &str, rational: bool) -> Result<PhiSpec, SyntaxError> {
        let v = value.trim();
        if !rational {
            return v
                .parse::<f64>()
                .map(PhiSpec::Irrational)
                .map_err(|_| SyntaxError::new(0, format!("'{v}' is not a number")));
        }
        let r = parse_exact_rational(v)
            .ok_or_else(|| SyntaxError::new(0, format!("'{v}' is not p/q or a decimal")))?;
        Ok(PhiSpec::Rational(*r.numer(), *r.denom()))
    }
}

fn parse_exact_rational(s: &str) -> Option<Ratio<i64>> {
    if let Some((p, q)) = s.split_once('/') {
        let q: i64 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(Ratio::new(p.trim().parse().ok()?, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if frac.len() > 15 || (int.is_empty() && frac.is_empty()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let r = Ratio::new(digits.parse::<i64>().ok()?, 10i64.pow(frac.len() as u32));
    Some(if neg { -r } else { r })
}

/// Angles such as `0`, `1/3`, `phi`, `-2phi`, `1/4+3phi` (`φ`, `α`, `alpha` also accepted).
pub fn parse_angle(s: &str) -> Result<Angle, SyntaxError> {
    let bytes: Vec<(usize, char)> = s.char_indices().collect();
    let mut i = 0;
    let mut total = Angle::ZERO;
    let mut any = false;
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].1.is_whitespace() {
            *i += 1;
        }
    };
    let off = |i: usize| bytes.get(i).map_or(s.len(), |b| b.0);
    loop {
        skip_ws(&mut i);
        let mut sign = 1i64;
        if i < bytes.len() && (bytes[i].1 == '+' || bytes[i].1 == '-') {
            if bytes[i].1 == '-' {
                sign = -1;
            }
            i += 1;
            skip_ws(&mut i);
        } else if any {
            return Err(SyntaxError::new(off(i), "expected '+' or '-'"));
        }
        let start = i;
        while i < bytes.len() && bytes[i].1.is_ascii_digit() {
            i += 1;
        }
        let num: Option<i64> = if i > start {
            Some(
                s[off(start)..off(i)]
                    .parse()
                    .map_err(|_| SyntaxError::new(off(start), "integer out of range"))?,
            )
        } else {
            None
        };
        skip_ws(&mut i);
        let rest = &s[off(i)..];
        let phi_len = ["phi", "alpha", "φ", "α"]
            .iter()
            .find(|w| rest.starts_with(**w))
            .map(|w| w.chars().count());
        if let Some(n) = phi_len {
            i += n;
            total += Angle::phi_multiple(sign * num.unwrap_or(1));
        } else if let Some(p) = num {
            let mut q = 1i64;
            if i < bytes.len() && bytes[i].1 == '/' {
                i += 1;
                skip_ws(&mut i);
                let qs = i;
                while i < bytes.len() && bytes[i].1.is_ascii_digit() {
                    i += 1;
                }
                q = s[off(qs)..off(i)]
                    .parse()
                    .map_err(|_| SyntaxError::new(off(qs), "expected a denominator"))?;
                if q == 0 {
                    return Err(SyntaxError::new(off(qs), "zero denominator"));
                }
            }
            total += Angle::rational(sign * p, q);
        } else {
            return Err(SyntaxError::new(off(start), "expected a number or 'phi'"));
        }
        any = true;
        skip_ws(&mut i);
        if i >= bytes.len() {
            return Ok(total);
        }
    }
}

/// A letter of `kind`: a residue, an angle, or `(x, y, …)` for products.
pub fn parse_letter(s: &str, kind: &AlphabetKind) -> Result<Letter, SyntaxError> {
    let lead = s.len() - s.trim_start().len();
    let t = s.trim();
    match kind {
        AlphabetKind::Cyclic(n) => {
            let r: i64 = t.parse().map_err(|_| {
                SyntaxError::new(lead, format!("expected a residue mod {n}, got '{t}'"))
            })?;
            Letter::cyclic(*n, r).map_err(|e| SyntaxError::new(lead, e.to_string()))
        }
        AlphabetKind::Circle => parse_angle(t)
            .map(Letter::Circle)
            .map_err(|e| SyntaxError::new(lead + e.offset, e.message)),
        AlphabetKind::Product(ks) => {
            let inner = t
                .strip_prefix('(')
                .and_then(|x| x.strip_suffix(')'))
                .ok_or_else(|| SyntaxError::new(lead, "expected '(…)' for a product letter"))?;
            let parts: Vec<&str> = inner.split(',').collect();
            if parts.len() != ks.len() {
                return Err(SyntaxError::new(
                    lead,
                    format!("expected {} components, got {}", ks.len(), parts.len()),
                ));
            }
            let mut pos = lead + 1;
            let mut letters = Vec::with_capacity(ks.len());
            for (p, k) in parts.iter().zip(ks) {
                letters.push(
                    parse_letter(p, k).map_err(|e| SyntaxError::new(pos + e.offset, e.message))?,
                );
                pos += p.len() + 1;
            }
            Ok(Letter::Product(letters))
        }
        AlphabetKind::ExtNat => Err(SyntaxError::new(
            lead,
            "ℕ₀∪{∞} letters are not accepted here",
        )),
    }
}

/// Character for an alphabet: `trivial`, an integer, or comma-separated
/// integers for the factors of a product.
pub fn parse_character(s: &str, kind: &AlphabetKind) -> Result<Character, SyntaxError> {
    let t = s.trim();
    if t == "trivial" {
        return Ok(Character::Trivial);
    }
    let parts: Vec<&str> = t.split(',').collect();
    let mut ints = Vec::with_capacity(parts.len());
    let mut pos = 0;
    for p in &parts {
        let lead = p.len() - p.trim_start().len();
        ints.push(p.trim().parse::<i64>().map_err(|_| {
            SyntaxError::new(
                pos + lead,
                format!("expected an integer, got '{}'", p.trim()),
            )
        })?);
        pos += p.len() + 1;
    }
    let single = |k: &AlphabetKind, n: i64| match k {
        AlphabetKind::Cyclic(m) => Ok(Character::Cyclic {
            modulus: *m,
            index: n.rem_euclid(*m as i64) as u32,
        }),
        AlphabetKind::Circle => Ok(Character::Circle(n)),
        other => Err(SyntaxError::new(
            0,
            format!("no integer characters on {other}"),
        )),
    };
    match kind {
        AlphabetKind::Product(ks) if ints.len() == ks.len() => Ok(Character::Product(
            ks.iter()
                .zip(&ints)
                .map(|(k, &n)| single(k, n))
                .collect::<Result<_, _>>()?,
        )),
        AlphabetKind::Product(ks) => Err(SyntaxError::new(
            0,
            format!("expected {} comma-separated indices for {kind}", ks.len()),
        )),
        k if ints.len() == 1 => single(k, ints[0]),
        _ => Err(SyntaxError::new(0, "expected a single integer")),
    }
}

/// Character used for a rule: spin rules read an integer as `χ_n` on the spin component.
pub fn character_for_rule(s: &str, rule: &SubstitutionRule) -> Result<Character, SyntaxError> {
    match rule {
        SubstitutionRule::Spin(_) => {
            let t = s.trim();
            if t == "trivial" {
                return Ok(Character::Trivial);
            }
            t.parse::<i64>().map(Character::Circle).map_err(|_| {
                SyntaxError::new(0, format!("expected an integer spin character, got '{t}'"))
            })
        }
        _ => parse_character(s, &rule.alphabet()),
    }
}

#[derive(Debug, Clone)]
pub struct ConfigFile {
    pub rule: SubstitutionRule,
    pub phi: Option<PhiSpec>,
    /// Character text and the position of its value.
    pub chi: Option<(String, usize, usize)>,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Alphabet,
    Rule,
    Character,
}

enum RuleBody {
    Columns(Vec<(usize, usize, bool, String)>),
    Spin {
        q: usize,
        line: usize,
        rows: Vec<(usize, usize, String)>,
    },
    Builtin(Builtin),
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

fn parse_kind(
    v: &str,
    modulus: Option<u32>,
    factors: Option<&str>,
) -> Result<AlphabetKind, SyntaxError> {
    match v {
        "circle" => Ok(AlphabetKind::Circle),
        "cyclic" => modulus
            .map(AlphabetKind::Cyclic)
            .ok_or_else(|| SyntaxError::new(0, "cyclic alphabets need 'modulus'")),
        "product" => {
            let f =
                factors.ok_or_else(|| SyntaxError::new(0, "product alphabets need 'factors'"))?;
            f.split(',')
                .map(|x| {
                    let x = x.trim();
                    if x == "circle" {
                        Ok(AlphabetKind::Circle)
                    } else if let Some(n) = x.strip_prefix("cyclic") {
                        n.trim_start_matches('(')
                            .trim_end_matches(')')
                            .trim()
                            .parse()
                            .ok()
                            .filter(|&n: &u32| n > 0)
                            .map(AlphabetKind::Cyclic)
                            .ok_or_else(|| SyntaxError::new(0, format!("bad factor '{x}'")))
                    } else {
                        Err(SyntaxError::new(0, format!("bad factor '{x}'")))
                    }
                })
                .collect::<Result<Vec<_>, _>>()
                .map(AlphabetKind::Product)
        }
        "extnat" => Ok(AlphabetKind::ExtNat),
        other => Err(SyntaxError::new(
            0,
            format!("unknown alphabet kind '{other}'"),
        )),
    }
}

/// Parses a whole rule file.
pub fn parse_config(text: &str) -> Result<ConfigFile, ParseError> {
    let mut section = Section::None;
    let mut kind_entry: Option<(usize, usize, String)> = None;
    let mut modulus: Option<u32> = None;
    let mut factors: Option<String> = None;
    let mut phi_entry: Option<(usize, usize, String)> = None;
    let mut phi_rational = false;
    let mut chi = None;
    let mut body: Option<RuleBody> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = content.len() - content.trim_start().len() + 1;
        if trimmed.starts_with('[') {
            section = match trimmed {
                "[alphabet]" => Section::Alphabet,
                "[rule]" => Section::Rule,
                "[character]" => Section::Character,
                other => return Err(err(line, col, format!("unknown section '{other}'"))),
            };
            continue;
        }
        match section {
            Section::None => {
                return Err(err(line, col, "expected a section header such as [rule]"))
            }
            Section::Alphabet | Section::Character => {
                let (key, value) = trimmed
                    .split_once('=')
                    .ok_or_else(|| err(line, col, "expected 'key = value'"))?;
                let key = key.trim();
                let vcol = col + trimmed.find('=').expect("split above") + 1;
                let vlead = value.len() - value.trim_start().len();
                let vcol = vcol + vlead;
                let value = value.trim().to_string();
                match (section, key) {
                    (Section::Alphabet, "kind") => kind_entry = Some((line, vcol, value)),
                    (Section::Alphabet, "modulus") => {
                        modulus =
                            Some(value.parse().ok().filter(|&n: &u32| n > 0).ok_or_else(|| {
                                err(line, vcol, "modulus must be a positive integer")
                            })?)
                    }
                    (Section::Alphabet, "factors") => factors = Some(value),
                    (Section::Alphabet, "phi") => phi_entry = Some((line, vcol, value)),
                    (Section::Alphabet, "phi-mode") => {
                        phi_rational = match value.as_str() {
                            "rational" => true,
                            "irrational" => false,
                            _ => {
                                return Err(err(
                                    line,
                                    vcol,
                                    "phi-mode must be 'rational' or 'irrational'",
                                ))
                            }
                        }
                    }
                    (Section::Character, "chi") => chi = Some((value, line, vcol)),
                    _ => return Err(err(line, col, format!("unknown key '{key}'"))),
                }
            }
            Section::Rule => {
                let (word, rest) = trimmed
                    .split_once(char::is_whitespace)
                    .unwrap_or((trimmed, ""));
                let rcol = col + trimmed.len() - rest.trim_start().len();
                let rest = rest.trim().to_string();
                match word {
                    "translation" | "constant" => {
                        let is_t = word == "translation";
                        match body.get_or_insert(RuleBody::Columns(Vec::new())) {
                            RuleBody::Columns(cs) => cs.push((line, rcol, is_t, rest)),
                            _ => {
                                return Err(err(
                                    line,
                                    col,
                                    "columns cannot follow a spin or builtin rule",
                                ))
                            }
                        }
                    }
                    "spin" => {
                        if body.is_some() {
                            return Err(err(line, col, "only one rule per file"));
                        }
                        let q: usize =
                            rest.parse().ok().filter(|&q| q >= 1).ok_or_else(|| {
                                err(line, rcol, "spin needs a positive digit count")
                            })?;
                        body = Some(RuleBody::Spin {
                            q,
                            line,
                            rows: Vec::new(),
                        });
                    }
                    "row" => match body.as_mut() {
                        Some(RuleBody::Spin { rows, .. }) => rows.push((line, rcol, rest)),
                        _ => return Err(err(line, col, "'row' outside a spin rule")),
                    },
                    "builtin" => {
                        if body.is_some() {
                            return Err(err(line, col, "only one rule per file"));
                        }
                        let b: Builtin = rest.parse().map_err(|e: String| err(line, rcol, e))?;
                        body = Some(RuleBody::Builtin(b));
                    }
                    other => return Err(err(line, col, format!("unknown rule entry '{other}'"))),
                }
            }
        }
    }

    let last = text.lines().count().max(1);
    let rule = match body {
        None => return Err(err(last, 1, "missing [rule] section")),
        Some(RuleBody::Builtin(b)) => b.rule(),
        Some(RuleBody::Spin { q, line, rows }) => {
            if rows.len() != q {
                return Err(err(
                    line,
                    1,
                    format!("spin {q} needs {q} rows, found {}", rows.len()),
                ));
            }
            let mut matrix = Vec::with_capacity(q);
            for (l, c, text) in rows {
                let mut row = Vec::with_capacity(q);
                let mut pos = 0;
                for tok in text.split_whitespace() {
                    let at = text[pos..].find(tok).expect("token from text") + pos;
                    row.push(parse_angle(tok).map_err(|e| e.at(l, c + at))?);
                    pos = at + tok.len();
                }
                if row.len() != q {
                    return Err(err(
                        l,
                        c,
                        format!("expected {q} angles, found {}", row.len()),
                    ));
                }
                matrix.push(row);
            }
            SpinRule::new(matrix)
                .map_err(|e| err(line, 1, e.to_string()))?
                .into()
        }
        Some(RuleBody::Columns(cs)) => {
            let (kl, kc, kv) =
                kind_entry.ok_or_else(|| err(cs[0].0, 1, "column rules need [alphabet] kind"))?;
            let kind = parse_kind(&kv, modulus, factors.as_deref()).map_err(|e| e.at(kl, kc))?;
            if kind == AlphabetKind::ExtNat {
                return Err(err(kl, kc, "column rules need a group alphabet"));
            }
            let mut columns = Vec::with_capacity(cs.len());
            for (l, c, is_t, text) in cs {
                let a = parse_letter(&text, &kind).map_err(|e| e.at(l, c))?;
                columns.push(if is_t {
                    Column::Translation(a)
                } else {
                    Column::Constant(a)
                });
            }
            ConstantLengthRule::new(kind, columns)
                .map_err(|e| err(last, 1, e.to_string()))?
                .into()
        }
    };
    let phi = match phi_entry {
        Some((l, c, v)) => Some(PhiSpec::parse(&v, phi_rational).map_err(|e| e.at(l, c))?),
        None => None,
    };
    if let Some((v, l, c)) = &chi {
        character_for_rule(v, &rule).map_err(|e| e.at(*l, *c))?;
    }
    Ok(ConfigFile { rule, phi, chi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0").unwrap(), Angle::ZERO);
        assert_eq!(parse_angle("phi").unwrap(), Angle::phi_multiple(1));
        assert_eq!(parse_angle("-2phi").unwrap(), Angle::phi_multiple(-2));
        assert_eq!(
            parse_angle("1/4 + 3φ").unwrap(),
            Angle::rational(1, 4) + Angle::phi_multiple(3)
        );
        assert_eq!(
            parse_angle("1/2-α").unwrap(),
            Angle::rational(1, 2) - Angle::phi_multiple(1)
        );
        assert_eq!(parse_angle("1/0").unwrap_err().offset, 2);
        assert_eq!(parse_angle("1 2").unwrap_err().offset, 2);
        assert!(parse_angle("").is_err());
    }

    #[test]
    fn exact_phi() {
        assert_eq!(
            PhiSpec::parse("1/3", true).unwrap(),
            PhiSpec::Rational(1, 3)
        );
        assert_eq!(
            PhiSpec::parse("0.25", true).unwrap(),
            PhiSpec::Rational(1, 4)
        );
        assert_eq!(
            PhiSpec::parse("0.25", false).unwrap(),
            PhiSpec::Irrational(0.25)
        );
        assert!(PhiSpec::parse("x", true).is_err());
    }

    #[test]
    fn letters_and_characters() {
        let prod = AlphabetKind::Product(vec![AlphabetKind::Cyclic(2), AlphabetKind::Circle]);
        assert_eq!(
            parse_letter("(1, phi)", &prod).unwrap(),
            Letter::Product(vec![
                Letter::Cyclic {
                    modulus: 2,
                    residue: 1
                },
                Letter::Circle(Angle::phi_multiple(1))
            ])
        );
        assert_eq!(parse_letter("(1, ph)", &prod).unwrap_err().offset, 4);
        assert_eq!(
            parse_character("1,0", &prod).unwrap(),
            Character::Product(vec![
                Character::Cyclic {
                    modulus: 2,
                    index: 1
                },
                Character::Circle(0)
            ])
        );
        assert!(parse_character("1", &prod).is_err());
        assert_eq!(
            parse_character("-1", &AlphabetKind::Cyclic(6)).unwrap(),
            Character::Cyclic {
                modulus: 6,
                index: 5
            }
        );
    }

    #[test]
    fn full_file() {
        let text = "# circle example\n[alphabet]\nkind = circle\nphi = 1/3\nphi-mode = rational\n\n[rule]\ntranslation 0\ntranslation 0\ntranslation phi\ntranslation 0\n[character]\nchi = 3\n";
        let c = parse_config(text).unwrap();
        assert_eq!(c.rule.to_string(), "[θ] ↦ [θ][θ][θα][θ]");
        assert_eq!(c.phi, Some(PhiSpec::Rational(1, 3)));
        assert_eq!(c.chi.unwrap().0, "3");
    }

    #[test]
    fn spin_and_builtin_files() {
        let spin = parse_config("[rule]\nspin 2\nrow 0 1/2\nrow phi phi\n").unwrap();
        assert_eq!(
            spin.rule.to_string(),
            "(θ,0) ↦ (θ,0)(−θ,1)\n(θ,1) ↦ (θα,0)(θα,1)"
        );
        let ext = parse_config("[rule]\nbuiltin extnat-example\n").unwrap();
        assert!(matches!(ext.rule, SubstitutionRule::ExtNat(_)));
    }

    #[test]
    fn error_positions() {
        let e =
            parse_config("[alphabet]\nkind = circle\n[rule]\ntranslation 0\n  translation 1/x\n")
                .unwrap_err();
        assert_eq!((e.line, e.column), (5, 17));
        let e = parse_config("[rule]\nspin 2\nrow 0 1/2\nrow phi qq\n").unwrap_err();
        assert_eq!((e.line, e.column), (4, 9));
        let e = parse_config("[alphabet]\nkind = torus\n[rule]\ntranslation 0\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 8));
        let e = parse_config("translation 0\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        let e = parse_config(
            "[alphabet]\nkind = cyclic\nmodulus = 3\n[rule]\ntranslation 1\n[character]\nchi = z\n",
        )
        .unwrap_err();
        assert_eq!((e.line, e.column), (7, 7));
    }
}
