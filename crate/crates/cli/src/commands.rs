use std::path::PathBuf;

use compact_subst::alphabet::{Angle, Character, ExtNat, PhiContext};
use compact_subst::autocorrelation::{
    almost_period_set, BijectiveRecurrenceSpec, EtaTable, WeightedComb,
};
use compact_subst::builtins::Builtin;
use compact_subst::classifier::{classify, SpectralVerdict};
use compact_subst::diffraction::{fejer_spectrum, riesz_partial, SpectrumGrid};
use compact_subst::error::ClassifyError;
use compact_subst::geometry::{
    audit_delone, delone_build, frequency_estimate, power_iteration, DeloneSet,
};
use compact_subst::selftest;
use compact_subst::substitution::{
    normalize_pseudo_fixed, pseudo_fixed_prefix, spin_word, ConstantLengthRule, PseudoFixedSetup,
    SubstitutionRule,
};
use serde::Serialize;

use crate::config::{
    character_for_rule, parse_angle, parse_config, parse_letter, ParseError, PhiSpec,
};
use crate::output::{write_csv, write_json, write_text};
use crate::{Command, EtaMethod, Format, GeometryCommand, Source};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}:{source}")]
    Config { path: String, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error("hypothesis of {theorem} violated: {reason}")]
    Hypothesis {
        theorem: &'static str,
        reason: String,
    },
    #[error("{0}")]
    Runtime(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Hypothesis { .. } => 1,
            CliError::Config { .. } | CliError::Usage(_) => 2,
            CliError::Runtime(_) | CliError::Io(_) => 4,
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::HypothesisViolation { theorem, reason } => {
                CliError::Hypothesis { theorem, reason }
            }
            other => CliError::Runtime(other.to_string()),
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

struct Loaded {
    rule: SubstitutionRule,
    ctx: PhiContext,
    chi_text: Option<String>,
}

impl Loaded {
    fn character(&self) -> Result<Character, CliError> {
        let text = self
            .chi_text
            .as_deref()
            .ok_or_else(|| CliError::Usage("a character is required (--chi)".into()))?;
        character_for_rule(text, &self.rule)
            .map_err(|e| CliError::Usage(format!("--chi: {}", e.message)))
    }
}

fn load(src: &Source) -> Result<Loaded, CliError> {
    let (rule, file_phi, file_chi) = match (&src.builtin, &src.config) {
        (Some(name), None) => {
            let b: Builtin = name.parse().map_err(CliError::Usage)?;
            (b.rule(), None, None)
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            let cfg = parse_config(&text).map_err(|source| CliError::Config {
                path: path.display().to_string(),
                source,
            })?;
            (cfg.rule, cfg.phi, cfg.chi.map(|c| c.0))
        }
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --builtin or --config".into(),
            ))
        }
    };
    let phi = match &src.phi {
        Some(v) => Some(
            PhiSpec::parse(v, src.rational)
                .map_err(|e| CliError::Usage(format!("--phi: {}", e.message)))?,
        ),
        None if src.rational && !matches!(file_phi, Some(PhiSpec::Rational(..))) => {
            return Err(CliError::Usage("--rational needs --phi p/q".into()))
        }
        None => file_phi,
    };
    let ctx = match phi {
        Some(p) => p.context().map_err(CliError::Usage)?,
        None => PhiContext::golden(),
    };
    Ok(Loaded {
        rule,
        ctx,
        chi_text: src.chi.clone().or(file_chi),
    })
}

fn setup_for(rule: &ConstantLengthRule, seed: Option<&str>) -> Result<PseudoFixedSetup, CliError> {
    let seed = match seed {
        Some(s) => parse_letter(s, rule.alphabet())
            .map_err(|e| CliError::Usage(format!("--seed: {}", e.message)))?,
        None => rule.alphabet().identity().map_err(runtime)?,
    };
    normalize_pseudo_fixed(rule, &seed).map_err(runtime)
}

pub fn run(cmd: Command) -> Result<u8, CliError> {
    match cmd {
        Command::Orbit {
            source,
            output,
            show_rule,
            radius,
            iterations,
            seed,
        } => {
            let l = load(&source)?;
            if show_rule {
                write_text(&output.out, &format!("{}\n", l.rule))?;
                return Ok(0);
            }
            orbit(&l, &output.out, radius, iterations, seed.as_deref())?;
        }
        Command::Eta {
            source,
            output,
            max_lag,
            method,
            radius,
            symmetric,
            almost_periods,
        } => {
            let l = load(&source)?;
            let table = eta_table(&l, method, max_lag, radius)?;
            if let Some(eps) = almost_periods {
                let p = almost_period_set(&table, eps, max_lag)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                write_json(&output.out, &p)?;
            } else {
                let lo = if symmetric { -(max_lag as i64) } else { 0 };
                write_csv(
                    &output.out,
                    &table.rows(lo, max_lag as i64).map_err(runtime)?,
                )?;
            }
        }
        Command::Classify { source, output } => {
            let l = load(&source)?;
            let chi = match l.rule {
                SubstitutionRule::ExtNat(_) => Character::Trivial,
                _ => l.character()?,
            };
            let verdict = classify(&l.rule, &chi, &l.ctx)?;
            write_json(
                &output.out,
                &ClassifyReport {
                    rule: l.rule.to_string(),
                    character: chi.to_string(),
                    phi: l.ctx.phi(),
                    phi_rational: l.ctx.is_rational(),
                    verdict,
                },
            )?;
        }
        Command::Spectrum {
            source,
            output,
            k,
            grid,
            method,
            radius,
            format,
        } => {
            let l = load(&source)?;
            let table = eta_table(&l, method, k, radius)?;
            let s = fejer_spectrum(&table, k, grid).map_err(|e| CliError::Usage(e.to_string()))?;
            write_grid(&output.out, &s, format)?;
        }
        Command::Riesz {
            output,
            angle,
            depth,
            grid,
            phi,
            rational,
            format,
        } => {
            let a = parse_angle(&angle)
                .map_err(|e| CliError::Usage(format!("--angle: {}", e.message)))?;
            let ctx = match phi {
                Some(v) => PhiSpec::parse(&v, rational)
                    .map_err(|e| CliError::Usage(format!("--phi: {}", e.message)))?
                    .context()
                    .map_err(CliError::Usage)?,
                None => PhiContext::golden(),
            };
            let s =
                riesz_partial(a, depth, grid, &ctx).map_err(|e| CliError::Usage(e.to_string()))?;
            write_grid(&output.out, &s, format)?;
        }
        Command::Geometry { action } => match action {
            GeometryCommand::Eig {
                output,
                cap,
                tol,
                max_iter,
            } => {
                let p = power_iteration(cap, tol, max_iter).map_err(|e| match e {
                    compact_subst::error::GeometryError::InvalidParameter(m) => CliError::Usage(m),
                    other => runtime(other),
                })?;
                let ell = p
                    .ell
                    .iter()
                    .map(|(a, v)| LetterValue {
                        letter: a.to_string(),
                        value: *v,
                    })
                    .collect();
                write_json(
                    &output.out,
                    &EigReport {
                        cap,
                        lambda: p.lambda,
                        iterations: p.iterations,
                        bracket: *p.brackets.last().expect("at least one iterate"),
                        ell,
                    },
                )?;
            }
            GeometryCommand::Freq { output, depth } => {
                let f = frequency_estimate(depth).map_err(|e| CliError::Usage(e.to_string()))?;
                let rows: Vec<FreqRow> = f
                    .iter()
                    .map(|(a, r)| FreqRow {
                        letter: a.to_string(),
                        numerator: *r.numer(),
                        denominator: *r.denom(),
                        value: *r.numer() as f64 / *r.denom() as f64,
                        expected: match a {
                            ExtNat::Finite(n) => 0.5f64.powi(n as i32 + 1),
                            ExtNat::Infinity => 0.0,
                        },
                    })
                    .collect();
                write_csv(&output.out, &rows)?;
            }
        },
        Command::Delone {
            output,
            iters,
            left,
            right,
            audit,
            points,
        } => {
            let mut d = delone_build(iters);
            if left.is_some() || right.is_some() {
                let l = left.unwrap_or(d.left_tiles());
                let r = right.unwrap_or(d.right_tiles());
                d = d
                    .restrict(l, r)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
            }
            if audit {
                write_json(&output.out, &audit_delone(&d))?;
                if let Some(p) = points {
                    write_csv(&Some(p), &point_rows(&d))?;
                }
            } else {
                write_csv(&output.out, &point_rows(&d))?;
            }
        }
        Command::Selftest {
            output,
            criteria,
            json,
        } => {
            let ids = if criteria.is_empty() {
                (1..=8).collect()
            } else {
                criteria
            };
            let mut reports = Vec::with_capacity(ids.len());
            for id in ids {
                reports.push(
                    selftest::criterion(id)
                        .ok_or_else(|| CliError::Usage(format!("no criterion {id}")))?,
                );
            }
            if json {
                write_json(&output.out, &reports)?;
            } else {
                write_text(&output.out, &selftest_table(&reports))?;
            }
            if reports.iter().any(|r| !r.passed) {
                return Ok(3);
            }
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct ClassifyReport {
    rule: String,
    character: String,
    phi: f64,
    phi_rational: bool,
    verdict: SpectralVerdict,
}

#[derive(Serialize)]
struct LetterValue {
    letter: String,
    value: f64,
}

#[derive(Serialize)]
struct EigReport {
    cap: usize,
    lambda: f64,
    iterations: usize,
    bracket: (f64, f64),
    ell: Vec<LetterValue>,
}

#[derive(Serialize)]
struct FreqRow {
    letter: String,
    numerator: u128,
    denominator: u128,
    value: f64,
    expected: f64,
}

#[derive(Serialize)]
struct PointRow {
    index: i64,
    label: String,
    mantissa: i128,
    exponent: u32,
    decimal: f64,
}

#[derive(Serialize)]
struct WordRow {
    n: i64,
    letter: String,
}

#[derive(Serialize)]
struct SpinRow {
    n: usize,
    spin: String,
    digit: u32,
}

#[derive(Serialize)]
struct GridSummary<'a> {
    resolution: usize,
    kernel_order: usize,
    mean: f64,
    min: f64,
    top10_mass: f64,
    values: &'a [f64],
}

fn point_rows(d: &DeloneSet) -> Vec<PointRow> {
    let origin = d.left_tiles() as i64;
    d.points()
        .iter()
        .zip(d.labels())
        .enumerate()
        .map(|(i, (x, a))| PointRow {
            index: i as i64 - origin,
            label: a.to_string(),
            mantissa: x.mantissa(),
            exponent: x.exp(),
            decimal: x.to_f64(),
        })
        .collect()
}

fn write_grid(out: &Option<PathBuf>, s: &SpectrumGrid, format: Format) -> Result<(), CliError> {
    match format {
        Format::Csv => write_csv(out, &s.rows())?,
        Format::Json => write_json(
            out,
            &GridSummary {
                resolution: s.resolution,
                kernel_order: s.kernel_order,
                mean: s.mean(),
                min: s.min(),
                top10_mass: s.top_mass_fraction(10),
                values: &s.values,
            },
        )?,
    }
    Ok(())
}

fn orbit(
    l: &Loaded,
    out: &Option<PathBuf>,
    radius: u64,
    iterations: u32,
    seed: Option<&str>,
) -> Result<(), CliError> {
    match &l.rule {
        SubstitutionRule::ConstantLength(r) => {
            let setup = setup_for(r, seed)?;
            let w = pseudo_fixed_prefix(&setup, radius).map_err(runtime)?;
            let rows: Vec<WordRow> = (w.min_coord()..=w.max_coord())
                .map(|n| WordRow {
                    n,
                    letter: w.get(n).expect("inside the window").to_string(),
                })
                .collect();
            write_csv(out, &rows)?;
        }
        SubstitutionRule::Spin(r) => {
            let theta = match seed {
                Some(s) => {
                    parse_angle(s).map_err(|e| CliError::Usage(format!("--seed: {}", e.message)))?
                }
                None => Angle::ZERO,
            };
            let w = spin_word(r, theta, 0, iterations);
            let rows: Vec<SpinRow> = w
                .spins()
                .iter()
                .zip(w.digits())
                .enumerate()
                .map(|(n, (t, &d))| SpinRow {
                    n,
                    spin: t.to_string(),
                    digit: d,
                })
                .collect();
            write_csv(out, &rows)?;
        }
        SubstitutionRule::ExtNat(_) => {
            let d = delone_build(iterations as usize);
            let origin = d.left_tiles() as i64;
            let rows: Vec<WordRow> = d
                .labels()
                .iter()
                .enumerate()
                .map(|(i, a)| WordRow {
                    n: i as i64 - origin,
                    letter: a.to_string(),
                })
                .collect();
            write_csv(out, &rows)?;
        }
    }
    Ok(())
}

fn spin_exponent(chi: &Character) -> i64 {
    match chi {
        Character::Circle(n) => *n,
        _ => 0,
    }
}

fn eta_table(
    l: &Loaded,
    method: EtaMethod,
    max_lag: usize,
    radius: usize,
) -> Result<EtaTable, CliError> {
    let chi = l.character()?;
    let mut table = match &l.rule {
        SubstitutionRule::ConstantLength(r) => {
            let setup = setup_for(r, None)?;
            let coincidence = r.constant_count() > 0;
            let comb = || -> Result<WeightedComb, CliError> {
                let w = pseudo_fixed_prefix(&setup, (radius + max_lag) as u64).map_err(runtime)?;
                WeightedComb::from_word(&w.resolve(&l.ctx), &chi, &l.ctx).map_err(runtime)
            };
            match (method, coincidence) {
                (EtaMethod::Auto | EtaMethod::Exact, false) => {
                    let spec =
                        BijectiveRecurrenceSpec::from_setup(&setup, &chi).map_err(runtime)?;
                    EtaTable::exact_bijective(spec, l.ctx)
                }
                (EtaMethod::Exact, true) => {
                    return Err(CliError::Usage(
                        "the exact recurrence needs translation columns; use --method coincidence"
                            .into(),
                    ))
                }
                (EtaMethod::Coincidence, false) => {
                    return Err(CliError::Usage(
                        "coincidence scaling needs a constant column".into(),
                    ))
                }
                (EtaMethod::Auto | EtaMethod::Coincidence, true) => EtaTable::coincidence_scale(
                    comb()?,
                    radius,
                    setup.length(),
                    setup.base.constant_count(),
                )
                .map_err(runtime)?,
                (EtaMethod::Empirical, _) => {
                    EtaTable::empirical(comb()?, radius).map_err(runtime)?
                }
            }
        }
        SubstitutionRule::Spin(r) => {
            if matches!(method, EtaMethod::Exact | EtaMethod::Coincidence) {
                return Err(CliError::Usage(
                    "spin rules support only empirical coefficients".into(),
                ));
            }
            let needed = 2 * radius + 1 + max_lag;
            let q = r.digits();
            let mut iterations = 0u32;
            while q.pow(iterations) < needed {
                iterations += 1;
            }
            let w = spin_word(r, Angle::ZERO, 0, iterations);
            let comb = WeightedComb::from_angles(w.spins(), spin_exponent(&chi), radius, &l.ctx);
            EtaTable::empirical(comb, radius).map_err(runtime)?
        }
        SubstitutionRule::ExtNat(_) => {
            return Err(CliError::Usage(
                "the ℕ₀∪{∞} alphabet carries no characters".into(),
            ))
        }
    };
    table.ensure(max_lag).map_err(runtime)?;
    Ok(table)
}

fn selftest_table(reports: &[selftest::CriterionReport]) -> String {
    let mut s = String::from("criterion  status  seconds  title\n");
    for r in reports {
        s.push_str(&format!(
            "{:>9}  {:<6}  {:>7.2}  {}\n",
            r.id,
            if r.passed { "PASS" } else { "FAIL" },
            r.seconds,
            r.title
        ));
        for c in r.failed_checks() {
            s.push_str(&format!("           - {}: {}\n", c.name, c.detail));
        }
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    s.push_str(&format!("{passed}/{} criteria passed\n", reports.len()));
    s
}
