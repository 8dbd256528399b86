//! Built-in sequence families, their adversaries, and trace ingestion.
//!
//! Each generator states how its finite sample relates to the infinite
//! family it stands for (see [`FamilySpec::coverage`]).

pub mod expr;
pub mod trace;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{format_rational, integer, Epsilon, Rational};
use crate::rates::FamilySample;
use crate::sampling::SamplingPrefix;
use crate::sequence::{SequenceView, SourceTag};

pub use expr::SequenceExpr;
pub use trace::{ingest_trace, ingest_trace_file};

#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// Every 0/1 sequence that changes value at most once, in either
    /// direction, with the change before the horizon.
    Monotone01,
    /// `0,1,0,1,…` for `p` terms, then zeros, for each even `2 ≤ p ≤ max_prefix`.
    EventuallyZeroAlternating {
        max_prefix: usize,
    },
    /// Running averages of a base sequence.
    Cesaro {
        base: SequenceExpr,
    },
    Expressions(Vec<SequenceExpr>),
    Constants(Vec<Rational>),
    /// Float rows; `labels` names them (point ids for a matrix), empty
    /// meaning `row-1`, `row-2`, ….
    Trace {
        source: String,
        rows: Vec<Vec<f64>>,
        labels: Vec<String>,
        tolerance: f64,
    },
}

/// A member and a sampling prefix chosen to defeat a claimed bound.
#[derive(Clone, Debug, PartialEq)]
pub struct AdversaryMove {
    pub member: usize,
    pub sampling: SamplingPrefix,
}

/// A family description: generator, parameters and horizon.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub horizon: usize,
    pub generator: Generator,
}

#[derive(Debug, Serialize)]
pub struct FamilyDescription {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub horizon: usize,
    pub coverage: String,
    pub has_adversary: bool,
}

/// All monotone 0/1 sequences with flip index below `horizon`.
pub fn gen_monotone01(horizon: usize) -> Result<FamilySpec> {
    if horizon == 0 {
        return Err(Error::config("horizon", "must be at least 1"));
    }
    Ok(FamilySpec {
        horizon,
        generator: Generator::Monotone01,
    })
}

/// Eventually-zero sequences with alternating prefixes of every even
/// length up to `max_prefix`; needs `max_prefix ≤ horizon`.
pub fn gen_eventually_zero_alternating(max_prefix: usize, horizon: usize) -> Result<FamilySpec> {
    if max_prefix > horizon {
        return Err(Error::config(
            "family",
            format!("alternating prefix bound {max_prefix} exceeds the horizon {horizon}"),
        ));
    }
    if max_prefix < 2 {
        return Err(Error::config("family", "alternating prefix bound must be at least 2"));
    }
    Ok(FamilySpec {
        horizon,
        generator: Generator::EventuallyZeroAlternating { max_prefix },
    })
}

pub fn gen_cesaro(base: SequenceExpr, horizon: usize) -> Result<FamilySpec> {
    let spec = FamilySpec {
        horizon,
        generator: Generator::Cesaro { base },
    };
    spec.sample()?;
    Ok(spec)
}

pub fn gen_constants(values: Vec<Rational>, horizon: usize) -> FamilySpec {
    FamilySpec {
        horizon,
        generator: Generator::Constants(values),
    }
}

pub fn gen_expressions(exprs: Vec<SequenceExpr>, horizon: usize) -> FamilySpec {
    FamilySpec {
        horizon,
        generator: Generator::Expressions(exprs),
    }
}

/// Running averages `a_n = (x_0 + … + x_n)/(n+1)`.
pub fn cesaro_averages(values: &[Rational]) -> Vec<Rational> {
    let mut sum = Rational::zero();
    let mut count = Rational::zero();
    values
        .iter()
        .map(|x| {
            sum += x;
            count += Rational::one();
            &sum / &count
        })
        .collect()
}

fn monotone_member(horizon: usize, index: usize) -> (String, SequenceView) {
    // const-0, const-1, up@1..H-1, down@1..H-1
    let (label, f): (String, Box<dyn Fn(usize) -> i64>) = match index {
        0 => ("const-0".into(), Box::new(|_| 0)),
        1 => ("const-1".into(), Box::new(|_| 1)),
        i if i < horizon + 1 => {
            let t = i - 1;
            (format!("up@{t}"), Box::new(move |n| (n >= t) as i64))
        }
        i => {
            let t = i - horizon;
            (format!("down@{t}"), Box::new(move |n| (n < t) as i64))
        }
    };
    (label, SequenceView::from_fn(horizon, |n| integer(f(n))))
}

fn alternating_member(prefix: usize, horizon: usize) -> SequenceView {
    SequenceView::from_fn(horizon, |n| integer(if n < prefix { n as i64 % 2 } else { 0 }))
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self.generator {
            Generator::Monotone01 => "monotone01",
            Generator::EventuallyZeroAlternating { .. } => "alternating",
            Generator::Cesaro { .. } => "cesaro",
            Generator::Expressions(_) => "expr",
            Generator::Constants(_) => "const",
            Generator::Trace { .. } => "trace",
        }
    }

    pub fn params(&self) -> BTreeMap<String, String> {
        let mut p = BTreeMap::new();
        match &self.generator {
            Generator::Monotone01 => {}
            Generator::EventuallyZeroAlternating { max_prefix } => {
                p.insert("max_prefix".into(), max_prefix.to_string());
            }
            Generator::Cesaro { base } => {
                p.insert("base".into(), base.to_string());
            }
            Generator::Expressions(es) => {
                for (i, e) in es.iter().enumerate() {
                    p.insert(format!("expr{i}"), e.to_string());
                }
            }
            Generator::Constants(cs) => {
                let list: Vec<_> = cs.iter().map(format_rational).collect();
                p.insert("values".into(), list.join(","));
            }
            Generator::Trace {
                source, rows, tolerance, ..
            } => {
                p.insert("source".into(), source.clone());
                p.insert("rows".into(), rows.len().to_string());
                p.insert("tolerance".into(), tolerance.to_string());
            }
        }
        p
    }

    /// How the finite sample relates to the family it represents.
    pub fn coverage(&self) -> String {
        match &self.generator {
            Generator::Monotone01 => format!(
                "exhaustive: every monotone 0/1 sequence with flip index below {} (all pair-distinguishable behaviour at this horizon)",
                self.horizon
            ),
            Generator::EventuallyZeroAlternating { max_prefix } => format!(
                "partial: only the alternating-prefix subfamily of the eventually-zero sequences, even prefix lengths 2..={max_prefix}"
            ),
            Generator::Cesaro { .. } => "single sequence of running averages (toolkit extension)".into(),
            Generator::Expressions(_) | Generator::Constants(_) => "explicit finite family".into(),
            Generator::Trace { .. } => "ingested trace rows (toolkit extension)".into(),
        }
    }

    pub fn describe(&self) -> FamilyDescription {
        FamilyDescription {
            name: self.name().into(),
            params: self.params(),
            horizon: self.horizon,
            coverage: self.coverage(),
            has_adversary: matches!(self.generator, Generator::EventuallyZeroAlternating { .. }),
        }
    }

    pub fn len(&self) -> usize {
        match &self.generator {
            Generator::Monotone01 => 2 * self.horizon,
            Generator::EventuallyZeroAlternating { max_prefix } => max_prefix / 2,
            Generator::Cesaro { .. } => 1,
            Generator::Expressions(es) => es.len(),
            Generator::Constants(cs) => cs.len(),
            Generator::Trace { rows, .. } => rows.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Materializes the members in their canonical order.
    pub fn sample(&self) -> Result<FamilySample> {
        let h = self.horizon;
        let (labels, members): (Vec<String>, Vec<SequenceView>) = match &self.generator {
            Generator::Monotone01 => (0..2 * h).map(|i| monotone_member(h, i)).unzip(),
            Generator::EventuallyZeroAlternating { max_prefix } => (1..=max_prefix / 2)
                .map(|k| (format!("alt-prefix-{}", 2 * k), alternating_member(2 * k, h)))
                .unzip(),
            Generator::Cesaro { base } => {
                let avg = cesaro_averages(&base.values(h)?);
                (
                    vec![format!("cesaro({base})")],
                    vec![SequenceView::exact(SourceTag::Expression, avg)],
                )
            }
            Generator::Expressions(es) => {
                let mut labels = Vec::new();
                let mut members = Vec::new();
                for e in es {
                    labels.push(e.to_string());
                    members.push(SequenceView::exact(SourceTag::Expression, e.values(h)?));
                }
                (labels, members)
            }
            Generator::Constants(cs) => cs
                .iter()
                .map(|c| {
                    (
                        format!("const-{}", format_rational(c)),
                        SequenceView::exact(SourceTag::ClosedForm, vec![c.clone(); h]),
                    )
                })
                .unzip(),
            Generator::Trace {
                rows, labels, tolerance, ..
            } => rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let label = labels.get(i).cloned().unwrap_or_else(|| format!("row-{}", i + 1));
                    (label, SequenceView::trace(r.clone(), *tolerance))
                })
                .unzip(),
        };
        FamilySample::new(members, labels, format!("{}{:?}", self.name(), self.params()))
    }

    /// Adversary hook: a member and sampling that defeat the constant bound
    /// `bound` at tolerance `eps`, if this family has one.
    ///
    /// For the alternating family this is the member with prefix length
    /// `2·bound + 2` under `η_m = {m, m+1}`, `m < bound`.
    pub fn adversary(&self, eps: &Epsilon, bound: u64) -> Option<AdversaryMove> {
        match self.generator {
            Generator::EventuallyZeroAlternating { max_prefix } => {
                if bound == 0 || eps.value() > &integer(1) {
                    return None;
                }
                let bound = usize::try_from(bound).ok()?;
                let prefix = bound.checked_mul(2)?.checked_add(2)?;
                if prefix > max_prefix {
                    return None;
                }
                Some(AdversaryMove {
                    member: prefix / 2 - 1,
                    sampling: SamplingPrefix::pairs(bound).expect("nonempty"),
                })
            }
            _ => None,
        }
    }
}
