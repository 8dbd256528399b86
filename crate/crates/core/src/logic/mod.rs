//! A toy continuous propositional logic.
//!
//! Structures are valuations of the atoms in `[0, 1]`, sentences are
//! `[0,1]`-valued formulas, and a structure satisfies a sentence when the
//! sentence takes the value exactly 1. The structure space `[0,1]^k` is
//! compact, so every pointwise convergent sentence sequence should be
//! uniformly metastable modulo any theory; the space is approximated by the
//! grid of valuations with step `1/r`.

pub mod formula;

use std::fmt;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcspace::{check_pointwise, uniform_over_points, FunctionFamilyView, PointSet, PointwiseReport, UniformOverPoints};
use crate::numeric::{format_rational, Epsilon, Rational};
use crate::par;
use crate::sampling::SamplingPrefix;
use crate::sequence::{SequenceView, SourceTag};

pub use formula::Formula;

/// Upper limit on the number of grid valuations enumerated.
pub const MAX_GRID_POINTS: u64 = 4_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Language {
    atoms: Vec<String>,
}

impl Language {
    pub fn new(atoms: Vec<String>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::config("atoms", "a language needs at least one atom"));
        }
        for (i, a) in atoms.iter().enumerate() {
            let ident =
                a.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') && a.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ident || formula::CONNECTIVES.contains(&a.as_str()) {
                return Err(Error::config("atoms", format!("`{a}` is not a valid atom name")));
            }
            if atoms[..i].contains(a) {
                return Err(Error::config("atoms", format!("duplicate atom `{a}`")));
            }
        }
        Ok(Language { atoms })
    }

    /// Atoms in order of first appearance across `texts`. Understands the
    /// sentence-file conventions: `#` comment lines, a `template:` prefix and
    /// the `half^n` power.
    pub fn infer<'a>(texts: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let mut atoms: Vec<String> = Vec::new();
        let lines = texts
            .into_iter()
            .flat_map(str::lines)
            .map(str::trim)
            .filter(|l| !l.starts_with('#'));
        for line in lines {
            let text = line.strip_prefix("template:").unwrap_or(line);
            let mut chars = text.char_indices().peekable();
            while let Some((start, c)) = chars.next() {
                if c.is_ascii_alphabetic() || c == '_' {
                    let mut end = start + 1;
                    while let Some(&(i, d)) = chars.peek() {
                        if d.is_ascii_alphanumeric() || d == '_' {
                            end = i + 1;
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    let word = &text[start..end];
                    if !formula::CONNECTIVES.contains(&word) && !atoms.iter().any(|a| a == word) {
                        atoms.push(word.to_string());
                    }
                } else if c.is_ascii_digit() || c == '^' {
                    while chars.peek().is_some_and(|&(_, d)| d.is_ascii_alphanumeric()) {
                        chars.next();
                    }
                }
            }
        }
        Self::new(atoms)
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == name)
    }
}

/// A valuation of every atom in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Structure {
    values: Vec<Rational>,
    names: std::sync::Arc<[String]>,
}

impl Structure {
    pub fn new(lang: &Language, values: Vec<Rational>) -> Result<Self> {
        if values.len() != lang.len() {
            return Err(Error::config(
                "structure",
                format!("expected {} values, got {}", lang.len(), values.len()),
            ));
        }
        if let Some(v) = values.iter().find(|v| **v < Rational::zero() || **v > Rational::one()) {
            return Err(Error::config(
                "structure",
                format!("value {} is outside [0, 1]", format_rational(v)),
            ));
        }
        Ok(Structure {
            values,
            names: lang.atoms().to_vec().into(),
        })
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, v)) in self.names.iter().zip(&self.values).enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{name}={}", format_rational(v))?;
        }
        Ok(())
    }
}

/// Satisfaction is value exactly 1.
pub fn satisfies(m: &Structure, phi: &Formula) -> bool {
    phi.eval(m).is_one()
}

/// A finite set of sentences.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Theory {
    pub sentences: Vec<Formula>,
}

impl Theory {
    pub fn new(sentences: Vec<Formula>) -> Self {
        Theory { sentences }
    }

    /// One formula per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str, lang: &Language) -> Result<Self> {
        let sentences = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| Formula::parse(l, lang))
            .collect::<Result<_>>()?;
        Ok(Theory { sentences })
    }

    pub fn is_model(&self, m: &Structure) -> bool {
        self.sentences.iter().all(|phi| satisfies(m, phi))
    }
}

/// All valuations with values in `{0, 1/r, …, 1}` that satisfy every
/// sentence of `theory`, in lexicographic order (first atom most
/// significant). An empty result is a legitimate answer.
pub fn model_grid(lang: &Language, theory: &Theory, resolution: u32) -> Result<Vec<Structure>> {
    if resolution == 0 {
        return Err(Error::config("grid-resolution", "must be at least 1"));
    }
    let side = resolution as u64 + 1;
    let total = (0..lang.len())
        .try_fold(1u64, |acc, _| acc.checked_mul(side))
        .filter(|&t| t <= MAX_GRID_POINTS);
    let total = total.ok_or_else(|| {
        Error::config(
            "grid-resolution",
            format!("{side}^{} grid valuations exceed the limit of {MAX_GRID_POINTS}", lang.len()),
        )
    })? as usize;
    let steps: Vec<Rational> = (0..side)
        .map(|i| Rational::new(BigInt::from(i), BigInt::from(resolution)))
        .collect();
    let k = lang.len();
    let candidates = par::map_indexed(total, |mut code| {
        let mut values = vec![Rational::zero(); k];
        for slot in values.iter_mut().rev() {
            *slot = steps[code % side as usize].clone();
            code /= side as usize;
        }
        let m = Structure::new(lang, values).expect("grid values lie in [0, 1]");
        theory.is_model(&m).then_some(m)
    });
    Ok(candidates.into_iter().flatten().collect())
}

/// A sentence sequence `φ_0, φ_1, …`.
///
/// Text form: either one formula per line (optionally prefixed `n:` with
/// indices covering `0..N` exactly once), or a single line
/// `template: <formula>` in which `half^n(X)` expands to `n` nested
/// `half`s, instantiated for `n < length`.
pub fn parse_sentence_sequence(text: &str, lang: &Language, length: usize) -> Result<Vec<Formula>> {
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if let [single] = lines[..] {
        if let Some(template) = single.strip_prefix("template:") {
            return expand_template(template.trim(), lang, length);
        }
    }
    if lines.is_empty() {
        return Err(Error::config("sentences", "no sentences given"));
    }
    let mut slots: Vec<Option<Formula>> = vec![None; lines.len()];
    for (line_no, line) in lines.iter().enumerate() {
        let (index, body) = match line.split_once(':') {
            Some((idx, body)) => {
                let idx: usize = idx
                    .trim()
                    .parse()
                    .map_err(|_| Error::config("sentences", format!("bad index `{}` on line {}", idx.trim(), line_no + 1)))?;
                (idx, body.trim())
            }
            None => (line_no, *line),
        };
        let slot = slots
            .get_mut(index)
            .ok_or_else(|| Error::config("sentences", format!("index {index} out of range 0..{}", lines.len())))?;
        if slot.is_some() {
            return Err(Error::config("sentences", format!("index {index} given twice")));
        }
        *slot = Some(Formula::parse(body, lang)?);
    }
    Ok(slots.into_iter().map(|s| s.expect("every index filled")).collect())
}

/// Expands `half^n(…)` in a template for each `n < length`.
pub fn expand_template(template: &str, lang: &Language, length: usize) -> Result<Vec<Formula>> {
    (0..length)
        .map(|n| Formula::parse(&expand_half_power(template, n)?, lang))
        .collect()
}

fn expand_half_power(text: &str, n: usize) -> Result<String> {
    const MARK: &str = "half^n(";
    let Some(start) = text.find(MARK) else {
        return Ok(text.to_string());
    };
    let open = start + MARK.len() - 1;
    let mut depth = 0usize;
    let close = text[open..]
        .char_indices()
        .find_map(|(i, c)| {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        return Some(open + i);
                    }
                }
                _ => {}
            }
            None
        })
        .ok_or_else(|| Error::syntax(open, "unbalanced parentheses in template"))?;
    let inner = expand_half_power(&text[open + 1..close], n)?;
    let rest = expand_half_power(&text[close + 1..], n)?;
    Ok(format!("{}{}{}{}{}", &text[..start], "half(".repeat(n), inner, ")".repeat(n), rest))
}

#[derive(Debug, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
#[allow(clippy::large_enum_variant)]
pub enum ModuloOutcome {
    /// No grid valuation satisfies the theory.
    EmptyModelClass,
    Analyzed {
        pointwise: PointwiseReport,
        uniform: UniformOverPoints,
    },
}

#[derive(Debug, Serialize)]
pub struct ModuloAnalysis {
    pub resolution: u32,
    pub grid_size: u64,
    pub models: usize,
    pub sequence_length: usize,
    pub outcome: ModuloOutcome,
    /// `n ↦ φ_n^𝔐` over the model grid, for follow-up certification.
    #[serde(skip)]
    pub family: Option<FunctionFamilyView>,
}

/// Values of `φs` over `models` as a function family (one point per model).
pub fn sentence_family(lang: &Language, models: &[Structure], sentences: &[Formula]) -> Result<FunctionFamilyView> {
    let _ = lang;
    let ids = models.iter().map(|m| m.to_string()).collect();
    let slices = par::map_slice(models, |m| {
        SequenceView::exact(SourceTag::Expression, sentences.iter().map(|phi| phi.eval(m)).collect())
    });
    FunctionFamilyView::new(PointSet::new(ids)?, slices)
}

/// Pointwise convergence and the least uniform rate of `φs` modulo
/// `theory`, over the grid of resolution `r`.
pub fn analyze_modulo(
    lang: &Language,
    theory: &Theory,
    sentences: &[Formula],
    eps: &Epsilon,
    eta: &SamplingPrefix,
    resolution: u32,
) -> Result<ModuloAnalysis> {
    if sentences.is_empty() {
        return Err(Error::config("sentences", "no sentences given"));
    }
    if let Some(index) = eta.max_index().filter(|&i| i >= sentences.len()) {
        return Err(Error::OutOfHorizon {
            index,
            horizon: sentences.len(),
        });
    }
    let models = model_grid(lang, theory, resolution)?;
    let grid_size = (resolution as u64 + 1).pow(lang.len() as u32);
    let mut analysis = ModuloAnalysis {
        resolution,
        grid_size,
        models: models.len(),
        sequence_length: sentences.len(),
        outcome: ModuloOutcome::EmptyModelClass,
        family: None,
    };
    if models.is_empty() {
        return Ok(analysis);
    }
    let family = sentence_family(lang, &models, sentences)?;
    analysis.outcome = ModuloOutcome::Analyzed {
        pointwise: check_pointwise(&family, eps),
        uniform: uniform_over_points(&family, eps, eta)?,
    };
    analysis.family = Some(family);
    Ok(analysis)
}

impl ModuloAnalysis {
    pub fn e_star(&self) -> Option<u64> {
        match &self.outcome {
            ModuloOutcome::Analyzed { uniform, .. } => uniform.outcome.e_star(),
            ModuloOutcome::EmptyModelClass => None,
        }
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational;
    use crate::rates::RateBound;

    fn p() -> Language {
        Language::new(vec!["p".into()]).unwrap()
    }

    fn structure(v: Rational) -> Structure {
        Structure::new(&p(), vec![v]).unwrap()
    }

    fn f(text: &str) -> Formula {
        Formula::parse(text, &p()).unwrap()
    }

    #[test]
    fn satisfaction_is_value_one() {
        assert!(satisfies(&structure(rational(1, 1)), &f("p")));
        assert!(!satisfies(&structure(rational(1, 2)), &f("max(p, neg(p))")));
        assert!(satisfies(&structure(rational(0, 1)), &f("max(p, neg(p))")));
        assert!(satisfies(&structure(rational(1, 1)), &f("max(p, neg(p))")));
    }

    #[test]
    fn grid_examples() {
        let lang = p();
        let all = model_grid(&lang, &Theory::default(), 2).unwrap();
        let values: Vec<_> = all.iter().map(|m| m.values()[0].clone()).collect();
        assert_eq!(values, vec![rational(0, 1), rational(1, 2), rational(1, 1)]);

        let t = Theory::new(vec![f("p")]);
        let ones = model_grid(&lang, &t, 10).unwrap();
        assert_eq!(ones.len(), 1);
        assert_eq!(ones[0].to_string(), "p=1");

        let t = Theory::new(vec![f("max(p, neg(p))")]);
        let ends: Vec<_> = model_grid(&lang, &t, 10).unwrap().iter().map(|m| m.to_string()).collect();
        assert_eq!(ends, vec!["p=0", "p=1"]);

        let t = Theory::new(vec![f("p"), f("neg(p)")]);
        assert!(model_grid(&lang, &t, 10).unwrap().is_empty());
    }

    #[test]
    fn grid_is_lexicographic() {
        let lang = Language::new(vec!["a".into(), "b".into()]).unwrap();
        let ids: Vec<_> = model_grid(&lang, &Theory::default(), 1)
            .unwrap()
            .iter()
            .map(|m| m.to_string())
            .collect();
        assert_eq!(ids, vec!["a=0,b=0", "a=0,b=1", "a=1,b=0", "a=1,b=1"]);
        assert!(model_grid(&lang, &Theory::default(), 0).is_err());
    }

    #[test]
    fn language_inference() {
        let lang = Language::infer(["max(q, neg(p))", "dotminus(p, 1/2)", "r1"]).unwrap();
        assert_eq!(lang.atoms(), &["q", "p", "r1"]);
        let lang = Language::infer(["# about s\ntemplate: half^n(min(t, u))", "0: t"]).unwrap();
        assert_eq!(lang.atoms(), &["t", "u"]);
        assert!(Language::new(vec!["neg".into()]).is_err());
        assert!(Language::new(vec!["p".into(), "p".into()]).is_err());
    }

    #[test]
    fn template_expansion() {
        let seq = expand_template("half^n(neg(p))", &p(), 3).unwrap();
        assert_eq!(seq[0], f("neg(p)"));
        assert_eq!(seq[2], f("half(half(neg(p)))"));
        let nested = expand_template("max(half^n(p), half^n(neg(p)))", &p(), 2).unwrap();
        assert_eq!(nested[1], f("max(half(p), half(neg(p)))"));
    }

    #[test]
    fn sentence_files() {
        let plain = parse_sentence_sequence("p\nneg(p)\n# c\np\n", &p(), 0).unwrap();
        assert_eq!(plain.len(), 3);
        let indexed = parse_sentence_sequence("1: neg(p)\n0: p\n", &p(), 0).unwrap();
        assert_eq!(indexed, vec![f("p"), f("neg(p)")]);
        assert!(parse_sentence_sequence("0: p\n0: p\n", &p(), 0).is_err());
        assert!(parse_sentence_sequence("5: p\n", &p(), 0).is_err());
        let t = parse_sentence_sequence("template: half^n(neg(p))\n", &p(), 6).unwrap();
        assert_eq!(t.len(), 6);
    }

    #[test]
    fn constant_sentence_modulo_p() {
        let t = Theory::new(vec![f("p")]);
        let seq = vec![f("p"); 8];
        let eta = SamplingPrefix::pairs(7).unwrap();
        let a = analyze_modulo(&p(), &t, &seq, &Epsilon::ratio(1, 10).unwrap(), &eta, 10).unwrap();
        assert_eq!(a.e_star(), Some(1));
    }

    #[test]
    fn halving_sequence_has_small_rate() {
        let seq = expand_template("half^n(neg(p))", &p(), 16).unwrap();
        let eta = SamplingPrefix::pairs(10).unwrap();
        let a = analyze_modulo(&p(), &Theory::default(), &seq, &Epsilon::ratio(1, 10).unwrap(), &eta, 100).unwrap();
        assert_eq!(a.models, 101);
        assert!(a.e_star().unwrap() <= 5);
    }

    #[test]
    fn alternating_sentences_refute_every_bound() {
        let t = Theory::new(vec![f("p")]);
        let seq: Vec<_> = (0..12).map(|n| if n % 2 == 0 { f("p") } else { f("neg(p)") }).collect();
        let eps = Epsilon::ratio(1, 2).unwrap();
        let eta = SamplingPrefix::pairs(11).unwrap();
        let a = analyze_modulo(&p(), &t, &seq, &eps, &eta, 10).unwrap();
        match &a.outcome {
            ModuloOutcome::Analyzed { pointwise, uniform } => {
                assert!(!pointwise.all_certified());
                assert_eq!(uniform.outcome.e_star(), None);
            }
            other => panic!("{other:?}"),
        }
        let fam = a.family.unwrap();
        for b in 1..=11 {
            let out = crate::funcspace::certify_over_points(
                &fam,
                &RateBound::constant(b),
                std::slice::from_ref(&eps),
                std::slice::from_ref(&eta),
            )
            .unwrap();
            assert!(out.refutation().is_some(), "bound {b}");
        }
    }

    #[test]
    fn empty_model_class() {
        let t = Theory::new(vec![f("p"), f("neg(p)")]);
        let a = analyze_modulo(
            &p(),
            &t,
            &[f("p")],
            &Epsilon::ratio(1, 2).unwrap(),
            &SamplingPrefix::pairs(1).unwrap_or_else(|_| unreachable!()).truncated(1).unwrap(),
            4,
        );
        // pairs(1) references index 1, beyond a one-sentence sequence.
        assert!(a.is_err());
        let eta = SamplingPrefix::from_levels([vec![0]]).unwrap();
        let a = analyze_modulo(&p(), &t, &[f("p")], &Epsilon::ratio(1, 2).unwrap(), &eta, 4).unwrap();
        assert!(matches!(a.outcome, ModuloOutcome::EmptyModelClass));
    }
}
