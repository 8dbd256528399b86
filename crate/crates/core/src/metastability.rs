//! Single-sequence metastability: oscillation over a sampled index set,
//! least witnesses, the horizon-limited Cauchy index and refuting samplings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{Epsilon, Scalar};
use crate::sampling::{IndexSet, SamplingPrefix};
use crate::sequence::SequenceView;

/// A level `m` whose sampled oscillation is strictly below the `ε` it was
/// computed for.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub level: usize,
    pub oscillation: Scalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exhausted {
    Horizon,
    SamplingLength,
    Grid,
}

/// Three-valued outcome of a truncated quantifier.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Verdict {
    /// Holds for everything that was tested; says nothing past the horizon.
    CertifiedAtHorizon {
        note: String,
    },
    /// Refuted by replayable evidence, named in `evidence`.
    Refuted {
        evidence: String,
    },
    Inconclusive {
        exhausted: Exhausted,
        note: String,
    },
}

impl Verdict {
    /// Process exit status for this verdict.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::CertifiedAtHorizon { .. } => 0,
            Verdict::Refuted { .. } => 1,
            Verdict::Inconclusive { .. } => 2,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::CertifiedAtHorizon { .. })
    }
}

/// Largest pairwise distance `max_{i,j∈s} |x_i − x_j|`.
pub fn oscillation(x: &SequenceView, s: &IndexSet) -> Result<Scalar> {
    x.spread(s.iter())
}

fn check_sampling(x: &SequenceView, eta: &SamplingPrefix) -> Result<()> {
    match eta.max_index() {
        Some(index) => x.check_index(index),
        None => Ok(()),
    }
}

/// Least level `m < L` with `oscillation(x, η_m) < ε`.
///
/// `None` only means that this prefix contains no witness.
pub fn find_witness(x: &SequenceView, eps: &Epsilon, eta: &SamplingPrefix) -> Result<Option<Witness>> {
    check_sampling(x, eta)?;
    for (level, set) in eta.levels().iter().enumerate() {
        let osc = oscillation(x, set)?;
        if x.below(&osc, eps) {
            return Ok(Some(Witness { level, oscillation: osc }));
        }
    }
    Ok(None)
}

/// Oscillations of every level `m < upto` (used for refutation evidence).
pub fn level_oscillations(x: &SequenceView, eta: &SamplingPrefix, upto: usize) -> Result<Vec<Scalar>> {
    check_sampling(x, eta)?;
    eta.levels().iter().take(upto).map(|set| oscillation(x, set)).collect()
}

/// Least `N < H` such that every pair in `x_N, …, x_{H−1}` lies within `ε`.
///
/// This is the Cauchy modulus as far as the horizon can see; the singleton
/// tail `{H−1}` always qualifies, so the result is `None` only for an empty
/// view.
pub fn cauchy_index(x: &SequenceView, eps: &Epsilon) -> Option<usize> {
    let h = x.horizon();
    if h == 0 {
        return None;
    }
    // The tail spread only shrinks as N grows, so scan backwards keeping the
    // positions of the tail minimum and maximum.
    let values = x.values();
    let (mut lo, mut hi) = (h - 1, h - 1);
    let mut least = h - 1;
    for n in (0..h - 1).rev() {
        if values[n] < values[lo] {
            lo = n;
        }
        if values[n] > values[hi] {
            hi = n;
        }
        let spread = x.spread([lo, hi]).expect("in range");
        if x.below(&spread, eps) {
            least = n;
        } else {
            break;
        }
    }
    Some(least)
}

/// Builds `η_m = {i_m, j_m}` with `m ≤ i_m < j_m < H` and
/// `|x_{i_m} − x_{j_m}| ≥ ε` for every `m < len`, taking the
/// lexicographically least pair at each level. `None` if some level has no
/// such pair inside the horizon.
pub fn refuting_sampling(x: &SequenceView, eps: &Epsilon, len: usize) -> Option<SamplingPrefix> {
    if len == 0 {
        return None;
    }
    let h = x.horizon();
    let mut levels = Vec::with_capacity(len);
    for m in 0..len {
        let pair = (m..h).find_map(|i| (i + 1..h).find(|&j| x.separated(i, j, eps).expect("in range")).map(|j| (i, j)))?;
        levels.push(IndexSet::from([pair.0, pair.1]));
    }
    let eta = SamplingPrefix::new(levels).expect("pairs start at their level");
    debug_assert!(matches!(find_witness(x, eps, &eta), Ok(None)));
    Some(eta)
}

/// Like [`refuting_sampling`], but checks the soundness guarantee and
/// reports a violation as an error.
pub fn checked_refuting_sampling(x: &SequenceView, eps: &Epsilon, len: usize) -> Result<Option<SamplingPrefix>> {
    match refuting_sampling(x, eps, len) {
        Some(eta) => match find_witness(x, eps, &eta)? {
            None => Ok(Some(eta)),
            Some(w) => Err(Error::Internal(format!("refuting sampling admits a witness at level {}", w.level))),
        },
        None => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{integer, rational};

    fn eps(p: i64, q: i64) -> Epsilon {
        Epsilon::ratio(p, q).unwrap()
    }

    fn alternating_then_zero(prefix: usize, horizon: usize) -> SequenceView {
        SequenceView::from_fn(horizon, |n| integer(if n < prefix { n as i64 % 2 } else { 0 }))
    }

    fn geometric(horizon: usize) -> SequenceView {
        SequenceView::from_fn(horizon, |n| {
            Rational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(2), n))
        })
    }

    use crate::numeric::Rational;

    #[test]
    fn oscillation_examples() {
        let alt = SequenceView::from_fn(8, |n| integer(n as i64 % 2));
        assert_eq!(oscillation(&alt, &IndexSet::from([1, 2])).unwrap(), Scalar::Exact(integer(1)));
        assert_eq!(oscillation(&alt, &IndexSet::new()).unwrap(), Scalar::Exact(integer(0)));
        assert_eq!(oscillation(&alt, &IndexSet::from([3])).unwrap(), Scalar::Exact(integer(0)));
        let g = geometric(8);
        assert_eq!(oscillation(&g, &IndexSet::from([2, 3])).unwrap(), Scalar::Exact(rational(1, 8)));
    }

    #[test]
    fn oscillation_out_of_horizon_names_index() {
        let x = SequenceView::constant(4, 0);
        let err = oscillation(&x, &IndexSet::from([1, 9])).unwrap_err();
        assert!(matches!(err, Error::OutOfHorizon { index: 9, .. }));
    }

    #[test]
    fn witness_examples() {
        let c = SequenceView::constant(16, 3);
        let w = find_witness(&c, &eps(1, 10), &SamplingPrefix::pairs(8).unwrap()).unwrap().unwrap();
        assert_eq!(w.level, 0);

        let alt = alternating_then_zero(6, 16);
        let w = find_witness(&alt, &eps(1, 2), &SamplingPrefix::pairs(8).unwrap()).unwrap().unwrap();
        assert_eq!(w.level, 6);

        let flip = SequenceView::from_fn(16, |n| integer((n >= 5) as i64));
        let straddle = SamplingPrefix::from_levels((0..5).map(|m| vec![m, 5]).chain([vec![5, 6]])).unwrap();
        let w = find_witness(&flip, &eps(1, 2), &straddle).unwrap().unwrap();
        assert_eq!(w.level, 5);
    }

    #[test]
    fn no_witness_within_prefix() {
        let alt = SequenceView::from_fn(16, |n| integer(n as i64 % 2));
        assert_eq!(find_witness(&alt, &eps(1, 2), &SamplingPrefix::pairs(8).unwrap()).unwrap(), None);
        let short = SequenceView::constant(4, 0);
        assert!(find_witness(&short, &eps(1, 2), &SamplingPrefix::pairs(8).unwrap()).is_err());
    }

    #[test]
    fn cauchy_examples() {
        assert_eq!(cauchy_index(&SequenceView::constant(10, 1), &eps(1, 10)), Some(0));
        assert_eq!(cauchy_index(&geometric(32), &eps(3, 10)), Some(2));
        let alt = SequenceView::from_fn(32, |n| integer(n as i64 % 2));
        assert_eq!(cauchy_index(&alt, &eps(1, 2)), Some(31));
        assert_eq!(cauchy_index(&SequenceView::from_fn(0, integer_zero), &eps(1, 2)), None);
    }

    fn integer_zero(_: usize) -> Rational {
        integer(0)
    }

    #[test]
    fn refuting_examples() {
        let alt = SequenceView::from_fn(32, |n| integer(n as i64 % 2));
        let eta = refuting_sampling(&alt, &eps(1, 2), 8).unwrap();
        assert_eq!(eta, SamplingPrefix::pairs(8).unwrap());
        assert_eq!(find_witness(&alt, &eps(1, 2), &eta).unwrap(), None);

        assert_eq!(refuting_sampling(&SequenceView::constant(32, 1), &eps(1, 2), 4), None);

        let g = geometric(32);
        let two = refuting_sampling(&g, &eps(3, 10), 2).unwrap();
        assert_eq!(two.level(0), &IndexSet::from([0, 1]));
        assert_eq!(two.level(1), &IndexSet::from([1, 3]));
        // from index 2 on every pair differs by at most 1/4
        assert_eq!(refuting_sampling(&g, &eps(3, 10), 3), None);
    }

    #[test]
    fn trace_tolerance_applies_to_witnesses() {
        let x = SequenceView::trace(vec![0.0, 0.5 + 1e-12, 0.0, 0.0], 1e-9);
        let w = find_witness(&x, &eps(1, 2), &SamplingPrefix::pairs(2).unwrap()).unwrap().unwrap();
        assert_eq!(w.level, 0);
        assert_eq!(refuting_sampling(&x, &eps(1, 2), 1), None);
    }
}
