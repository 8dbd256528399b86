use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{integer, Epsilon, Rational, Scalar, DEFAULT_TOLERANCE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceTag {
    ClosedForm,
    Expression,
    Trace,
}

#[derive(Clone, Debug, PartialEq)]
enum Values {
    Exact(Arc<[Rational]>),
    Float { data: Arc<[f64]>, tolerance: f64 },
}

/// The values `x_0, …, x_{H−1}` of a real sequence up to its horizon `H`.
///
/// Values are materialized once and shared, so clones are cheap and
/// evaluation is trivially repeatable.
#[derive(Clone, Debug, PartialEq)]
pub struct SequenceView {
    source: SourceTag,
    values: Values,
}

impl SequenceView {
    pub fn exact(source: SourceTag, values: Vec<Rational>) -> Self {
        SequenceView {
            source,
            values: Values::Exact(values.into()),
        }
    }

    pub fn from_fn(horizon: usize, f: impl Fn(usize) -> Rational) -> Self {
        Self::exact(SourceTag::ClosedForm, (0..horizon).map(f).collect())
    }

    pub fn constant(horizon: usize, value: i64) -> Self {
        Self::from_fn(horizon, |_| integer(value))
    }

    pub fn trace(values: Vec<f64>, tolerance: f64) -> Self {
        SequenceView {
            source: SourceTag::Trace,
            values: Values::Float {
                data: values.into(),
                tolerance,
            },
        }
    }

    /// Rebuilds a view from serialized scalars (all exact, or all float).
    pub fn from_scalars(values: &[Scalar], tolerance: Option<f64>) -> Result<Self> {
        if values.iter().all(|v| matches!(v, Scalar::Exact(_))) {
            let data = values.iter().filter_map(|v| v.exact().cloned()).collect();
            Ok(Self::exact(SourceTag::ClosedForm, data))
        } else if values.iter().all(|v| matches!(v, Scalar::Float(_))) {
            Ok(Self::trace(
                values.iter().map(Scalar::to_f64).collect(),
                tolerance.unwrap_or(DEFAULT_TOLERANCE),
            ))
        } else {
            Err(Error::Internal("mixed exact and float values".into()))
        }
    }

    pub fn source(&self) -> SourceTag {
        self.source
    }

    pub fn horizon(&self) -> usize {
        match &self.values {
            Values::Exact(v) => v.len(),
            Values::Float { data, .. } => data.len(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.values, Values::Exact(_))
    }

    /// Comparison tolerance; zero for exact sources.
    pub fn tolerance(&self) -> f64 {
        match &self.values {
            Values::Exact(_) => 0.0,
            Values::Float { tolerance, .. } => *tolerance,
        }
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.horizon() {
            Ok(())
        } else {
            Err(Error::OutOfHorizon {
                index,
                horizon: self.horizon(),
            })
        }
    }

    pub fn value(&self, index: usize) -> Result<Scalar> {
        self.check_index(index)?;
        Ok(match &self.values {
            Values::Exact(v) => Scalar::Exact(v[index].clone()),
            Values::Float { data, .. } => Scalar::Float(data[index]),
        })
    }

    pub fn exact_values(&self) -> Option<&[Rational]> {
        match &self.values {
            Values::Exact(v) => Some(v),
            Values::Float { .. } => None,
        }
    }

    pub fn values(&self) -> Vec<Scalar> {
        (0..self.horizon()).map(|i| self.value(i).expect("in range")).collect()
    }

    /// `max − min` over the given indices, which equals the largest
    /// pairwise distance; zero for fewer than two indices.
    pub fn spread<I: IntoIterator<Item = usize>>(&self, indices: I) -> Result<Scalar> {
        match &self.values {
            Values::Exact(v) => {
                let mut bounds: Option<(&Rational, &Rational)> = None;
                for i in indices {
                    self.check_index(i)?;
                    let x = &v[i];
                    bounds = Some(match bounds {
                        None => (x, x),
                        Some((lo, hi)) => (if x < lo { x } else { lo }, if x > hi { x } else { hi }),
                    });
                }
                Ok(Scalar::Exact(bounds.map_or_else(|| integer(0), |(lo, hi)| hi - lo)))
            }
            Values::Float { data, .. } => {
                let mut bounds: Option<(f64, f64)> = None;
                for i in indices {
                    self.check_index(i)?;
                    let x = data[i];
                    bounds = Some(bounds.map_or((x, x), |(lo, hi)| (lo.min(x), hi.max(x))));
                }
                Ok(Scalar::Float(bounds.map_or(0.0, |(lo, hi)| hi - lo)))
            }
        }
    }

    /// Whether an oscillation counts as strictly below `eps` for this view.
    pub fn below(&self, oscillation: &Scalar, eps: &Epsilon) -> bool {
        oscillation.below(eps, self.tolerance())
    }

    /// `|x_i − x_j| ≥ ε` in the refutation sense.
    pub fn separated(&self, i: usize, j: usize, eps: &Epsilon) -> Result<bool> {
        Ok(!self.below(&self.spread([i, j])?, eps))
    }
}
