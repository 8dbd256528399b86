//! Uniform metastability rates for families of sequences.
//!
//! A rate `E(ε, η)` is read as a uniform *bound*: every member must have
//! its own witness level strictly below `E(ε, η)`; members do not have to
//! share a level. Failures are reported as [`Refutation`]s, which carry the
//! per-level oscillations (all `≥ ε`) and the member values they were
//! computed from, so they can be replayed without the generating family.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::families::expr::{ceil_to_u64, Expr};
use crate::families::FamilySpec;
use crate::metastability::{find_witness, level_oscillations, Witness};
use crate::numeric::{Epsilon, Rational, Scalar};
use crate::par;
use crate::report::SCHEMA_VERSION;
use crate::sampling::SamplingPrefix;
use crate::sequence::SequenceView;
use crate::Verdict;

/// A finite, indexed sample of a family; all members share a horizon.
#[derive(Clone, Debug)]
pub struct FamilySample {
    members: Vec<SequenceView>,
    labels: Vec<String>,
    provenance: String,
    horizon: usize,
}

impl FamilySample {
    pub fn new(members: Vec<SequenceView>, labels: Vec<String>, provenance: impl Into<String>) -> Result<Self> {
        let horizon = members.first().map_or(0, SequenceView::horizon);
        if let Some(i) = members.iter().position(|m| m.horizon() != horizon) {
            return Err(Error::config(
                "family",
                format!("member {i} has horizon {}, expected {horizon}", members[i].horizon()),
            ));
        }
        if labels.len() != members.len() {
            return Err(Error::Internal("one label per member".into()));
        }
        Ok(FamilySample {
            members,
            labels,
            provenance: provenance.into(),
            horizon,
        })
    }

    pub fn from_views(members: Vec<SequenceView>) -> Result<Self> {
        let labels = (0..members.len()).map(|i| format!("member-{i}")).collect();
        Self::new(members, labels, "explicit")
    }

    pub fn members(&self) -> &[SequenceView] {
        &self.members
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn member(&self, id: usize) -> Result<&SequenceView> {
        self.members.get(id).ok_or(Error::UnknownMember(id))
    }

    fn check_sampling(&self, eta: &SamplingPrefix) -> Result<()> {
        match eta.max_index() {
            Some(index) if index >= self.horizon => Err(Error::OutOfHorizon {
                index,
                horizon: self.horizon,
            }),
            _ => Ok(()),
        }
    }
}

/// Rate expression over `eps`, `maxeta0` (largest index of `η_0`) and `len`
/// (prefix length). The bound is `max(1, ⌈value⌉)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RateExpr(Expr);

pub const RATE_VARS: [&str; 3] = ["eps", "maxeta0", "len"];

impl RateExpr {
    pub fn parse(text: &str) -> Result<Self> {
        Expr::parse(text, &RATE_VARS).map(RateExpr)
    }

    pub fn eval(&self, eps: &Epsilon, eta: &SamplingPrefix) -> Result<Rational> {
        let lookup = |v: &str| match v {
            "eps" => Some(eps.value().clone()),
            "maxeta0" => Some(Rational::from_integer(BigInt::from(eta.max_eta0()))),
            "len" => Some(Rational::from_integer(BigInt::from(eta.len()))),
            _ => None,
        };
        self.0.eval(&lookup).map_err(Error::InvalidExpr)
    }
}

impl fmt::Display for RateExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for RateExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RateExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        RateExpr::parse(&String::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub epsilon: Epsilon,
    pub sampling: SamplingPrefix,
    pub bound: u64,
}

/// A candidate rate `E(ε, η)`.
///
/// JSON: `{"kind": "constant", "value": 5}`, `{"kind": "max-eta0-plus-one"}`,
/// `{"kind": "table", "default": 4, "entries": [...]}` or
/// `{"kind": "expression", "text": "maxeta0 + 1"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RateBound {
    Constant {
        value: u64,
    },
    /// `max η_0 + 1`: the monotone-family rate under the strict witness
    /// convention (a flip exactly at `max η_0` needs witness `max η_0`).
    MaxEta0PlusOne,
    /// Lookup by exact `(ε, η)`, falling back to `default`.
    Table {
        default: u64,
        entries: Vec<TableEntry>,
    },
    Expression {
        text: RateExpr,
    },
}

impl RateBound {
    pub fn constant(value: u64) -> Self {
        RateBound::Constant { value }
    }

    /// Evaluates the bound; the result is always at least 1.
    pub fn evaluate(&self, eps: &Epsilon, eta: &SamplingPrefix) -> Result<u64> {
        let raw = match self {
            RateBound::Constant { value } => *value,
            RateBound::MaxEta0PlusOne => eta.max_eta0() as u64 + 1,
            RateBound::Table { default, entries } => entries
                .iter()
                .find(|e| &e.epsilon == eps && &e.sampling == eta)
                .map_or(*default, |e| e.bound),
            RateBound::Expression { text } => ceil_to_u64(&text.eval(eps, eta)?),
        };
        Ok(raw.max(1))
    }
}

impl fmt::Display for RateBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RateBound::Constant { value } => write!(f, "const:{value}"),
            RateBound::MaxEta0PlusOne => f.write_str("maxeta0plus1"),
            RateBound::Table { default, entries } => write!(f, "table({} entries, default {default})", entries.len()),
            RateBound::Expression { text } => write!(f, "expr:{text}"),
        }
    }
}

/// Evidence that member `member` has no witness below `bound` for
/// `(epsilon, sampling)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Refutation {
    pub schema_version: u32,
    pub member: usize,
    pub member_label: String,
    pub epsilon: Epsilon,
    pub sampling: SamplingPrefix,
    pub bound: u64,
    /// Oscillation at each level `m < bound`.
    pub oscillations: Vec<Scalar>,
    /// `x_0, …, x_k` for the largest index `k` used by levels below `bound`.
    pub member_prefix: Vec<Scalar>,
    /// Comparison tolerance for float members; absent for exact ones.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tolerance: Option<f64>,
}

impl Refutation {
    /// Builds the refutation record without judging it; use [`replay`] to
    /// check it.
    pub fn build(family: &FamilySample, member: usize, eps: &Epsilon, eta: &SamplingPrefix, bound: u64) -> Result<Self> {
        let x = family.member(member)?;
        let upto = usize::try_from(bound).unwrap_or(usize::MAX);
        if upto > eta.len() {
            return Err(Error::Internal(format!("bound {bound} exceeds the sampling length {}", eta.len())));
        }
        let oscillations = level_oscillations(x, eta, upto)?;
        let last = eta.levels()[..upto].iter().filter_map(|s| s.max()).max().unwrap_or(0);
        let member_prefix = (0..=last.min(x.horizon().saturating_sub(1)))
            .map(|i| x.value(i))
            .collect::<Result<_>>()?;
        Ok(Refutation {
            schema_version: SCHEMA_VERSION,
            member,
            member_label: family.labels()[member].clone(),
            epsilon: eps.clone(),
            sampling: eta.clone(),
            bound,
            oscillations,
            member_prefix,
            tolerance: (!x.is_exact()).then(|| x.tolerance()),
        })
    }

    fn check_against(&self, x: &SequenceView) -> bool {
        let Ok(upto) = usize::try_from(self.bound) else {
            return false;
        };
        if upto > self.sampling.len() || self.oscillations.len() != upto {
            return false;
        }
        self.sampling.levels()[..upto]
            .iter()
            .zip(&self.oscillations)
            .all(|(set, recorded)| match x.spread(set.iter()) {
                Ok(osc) => &osc == recorded && !x.below(&osc, &self.epsilon),
                Err(_) => false,
            })
    }

    /// Replays against the embedded member values only.
    pub fn replay_standalone(&self) -> bool {
        match SequenceView::from_scalars(&self.member_prefix, self.tolerance) {
            Ok(x) => self.check_against(&x),
            Err(_) => false,
        }
    }
}

/// Recomputes every level `m < B` from the family member and checks that
/// its oscillation is `≥ ε` (and matches the recorded value).
pub fn replay(refutation: &Refutation, family: &FamilySample) -> Result<bool> {
    let x = family.member(refutation.member)?;
    Ok(refutation.check_against(x))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairBound {
    pub epsilon_index: usize,
    pub sampling_index: usize,
    pub bound: u64,
    /// The bound exceeds the sampling length, so this pair is not certified.
    pub inconclusive: bool,
    /// Members with no witness anywhere in the prefix (only possible for
    /// inconclusive pairs).
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub unwitnessed: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub member: usize,
    pub epsilon_index: usize,
    pub sampling_index: usize,
    pub level: usize,
    pub oscillation: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformCertificate {
    pub schema_version: u32,
    pub rate: RateBound,
    pub epsilons: Vec<Epsilon>,
    pub samplings: Vec<SamplingPrefix>,
    pub bounds: Vec<PairBound>,
    pub witnesses: Vec<WitnessEntry>,
}

impl UniformCertificate {
    pub fn verdict(&self) -> Verdict {
        let flagged = self.bounds.iter().filter(|b| b.inconclusive).count();
        if flagged == 0 {
            Verdict::CertifiedAtHorizon {
                note: format!(
                    "every member has a witness below the rate for {} epsilon(s) x {} sampling prefix(es); \
                     valid only for the tested horizon and samplings",
                    self.epsilons.len(),
                    self.samplings.len()
                ),
            }
        } else {
            Verdict::Inconclusive {
                exhausted: crate::metastability::Exhausted::SamplingLength,
                note: format!("{flagged} (epsilon, sampling) pair(s) have a bound beyond the sampling length"),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum CertifyOutcome {
    Certificate(UniformCertificate),
    Refutation(Refutation),
}

impl CertifyOutcome {
    pub fn verdict(&self) -> Verdict {
        match self {
            CertifyOutcome::Certificate(c) => c.verdict(),
            CertifyOutcome::Refutation(r) => Verdict::Refuted {
                evidence: format!("member {} ({}) has no witness below {}", r.member, r.member_label, r.bound),
            },
        }
    }

    pub fn certificate(&self) -> Option<&UniformCertificate> {
        match self {
            CertifyOutcome::Certificate(c) => Some(c),
            CertifyOutcome::Refutation(_) => None,
        }
    }

    pub fn refutation(&self) -> Option<&Refutation> {
        match self {
            CertifyOutcome::Certificate(_) => None,
            CertifyOutcome::Refutation(r) => Some(r),
        }
    }

    pub fn is_certified(&self) -> bool {
        self.verdict().is_certified()
    }
}

/// Checks that every member has a witness strictly below `rate(ε, η)` for
/// every tested `ε` and `η`. The first failure in (member, ε, sampling)
/// order becomes the refutation.
pub fn certify_uniform(
    family: &FamilySample,
    rate: &RateBound,
    epsilons: &[Epsilon],
    samplings: &[SamplingPrefix],
) -> Result<CertifyOutcome> {
    for eta in samplings {
        family.check_sampling(eta)?;
    }
    let pairs: Vec<(usize, usize)> = (0..epsilons.len())
        .flat_map(|e| (0..samplings.len()).map(move |s| (e, s)))
        .collect();
    let bounds = pairs
        .iter()
        .map(|&(e, s)| rate.evaluate(&epsilons[e], &samplings[s]))
        .collect::<Result<Vec<_>>>()?;

    let per_pair = pairs.len();
    let witnesses = par::map_indexed(family.len() * per_pair, |k| {
        let (member, pair) = (k / per_pair, k % per_pair);
        let (e, s) = pairs[pair];
        find_witness(&family.members[member], &epsilons[e], &samplings[s])
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mut table = Vec::new();
    let mut pair_bounds: Vec<PairBound> = pairs
        .iter()
        .zip(&bounds)
        .map(|(&(e, s), &bound)| PairBound {
            epsilon_index: e,
            sampling_index: s,
            bound,
            inconclusive: bound > samplings[s].len() as u64,
            unwitnessed: Vec::new(),
        })
        .collect();

    for (k, witness) in witnesses.into_iter().enumerate() {
        let (member, pair) = (k / per_pair, k % per_pair);
        let (e, s) = pairs[pair];
        let bound = bounds[pair];
        match witness {
            Some(w) if (w.level as u64) < bound => table.push(WitnessEntry {
                member,
                epsilon_index: e,
                sampling_index: s,
                level: w.level,
                oscillation: w.oscillation,
            }),
            // No witness inside the prefix, but the bound reaches past it.
            None if pair_bounds[pair].inconclusive => pair_bounds[pair].unwitnessed.push(member),
            _ => {
                let r = Refutation::build(family, member, &epsilons[e], &samplings[s], bound)?;
                return Ok(CertifyOutcome::Refutation(r));
            }
        }
    }

    Ok(CertifyOutcome::Certificate(UniformCertificate {
        schema_version: SCHEMA_VERSION,
        rate: rate.clone(),
        epsilons: epsilons.to_vec(),
        samplings: samplings.to_vec(),
        bounds: pair_bounds,
        witnesses: table,
    }))
}

/// How [`refute_uniform_bound`] looks for a counterexample.
#[derive(Clone, Debug)]
pub enum Strategy {
    /// Ask the family's adversary hook for a member and sampling.
    Adversary,
    /// Scan every member against the given samplings.
    Search(Vec<SamplingPrefix>),
}

/// Tries to defeat the constant bound `bound` at `eps`. Every returned
/// refutation has passed replay; an adversary move that fails replay is an
/// internal inconsistency.
pub fn refute_uniform_bound(spec: &FamilySpec, eps: &Epsilon, bound: u64, strategy: &Strategy) -> Result<Option<Refutation>> {
    let family = spec.sample()?;
    let refutation = match strategy {
        Strategy::Adversary => match spec.adversary(eps, bound) {
            None => return Ok(None),
            Some(mv) => {
                family.check_sampling(&mv.sampling)?;
                Refutation::build(&family, mv.member, eps, &mv.sampling, bound)?
            }
        },
        Strategy::Search(samplings) => match certify_uniform(&family, &RateBound::constant(bound), std::slice::from_ref(eps), samplings)? {
            CertifyOutcome::Refutation(r) => r,
            CertifyOutcome::Certificate(_) => return Ok(None),
        },
    };
    if !replay(&refutation, &family)? {
        return Err(Error::Internal(format!(
            "refutation of bound {bound} on member {} failed replay",
            refutation.member
        )));
    }
    Ok(Some(refutation))
}

/// Least witness of every member, in member order.
pub fn least_witnesses(family: &FamilySample, eps: &Epsilon, eta: &SamplingPrefix) -> Result<Vec<Option<Witness>>> {
    family.check_sampling(eta)?;
    par::map_slice(family.members(), |x| find_witness(x, eps, eta))
        .into_iter()
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SynthOutcome {
    /// `E* = 1 + max` least witness level.
    Rate { e_star: u64, witness_levels: Vec<usize> },
    /// Some member has no witness inside the prefix.
    Inconclusive { member: usize, label: String },
}

impl SynthOutcome {
    pub fn e_star(&self) -> Option<u64> {
        match self {
            SynthOutcome::Rate { e_star, .. } => Some(*e_star),
            SynthOutcome::Inconclusive { .. } => None,
        }
    }

    pub fn verdict(&self) -> Verdict {
        match self {
            SynthOutcome::Rate { e_star, .. } => Verdict::CertifiedAtHorizon {
                note: format!("least uniform bound E* = {e_star} for this sampling prefix"),
            },
            SynthOutcome::Inconclusive { member, label } => Verdict::Inconclusive {
                exhausted: crate::metastability::Exhausted::SamplingLength,
                note: format!("member {member} ({label}) has no witness inside the prefix"),
            },
        }
    }
}

/// Exhaustive least uniform rate for one `(ε, η)`: the brute-force oracle.
pub fn synth_minimal_uniform_rate(family: &FamilySample, eps: &Epsilon, eta: &SamplingPrefix) -> Result<SynthOutcome> {
    let witnesses = least_witnesses(family, eps, eta)?;
    let mut levels = Vec::with_capacity(witnesses.len());
    for (member, w) in witnesses.into_iter().enumerate() {
        match w {
            Some(w) => levels.push(w.level),
            None => {
                return Ok(SynthOutcome::Inconclusive {
                    member,
                    label: family.labels()[member].clone(),
                })
            }
        }
    }
    let e_star = levels.iter().max().map_or(1, |&m| m as u64 + 1);
    Ok(SynthOutcome::Rate {
        e_star,
        witness_levels: levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{gen_constants, gen_eventually_zero_alternating, gen_monotone01};
    use crate::numeric::integer;

    fn half() -> Epsilon {
        Epsilon::ratio(1, 2).unwrap()
    }

    fn alternating(prefixes: &[usize], horizon: usize) -> FamilySample {
        FamilySample::from_views(
            prefixes
                .iter()
                .map(|&p| SequenceView::from_fn(horizon, |n| integer(if n < p { n as i64 % 2 } else { 0 })))
                .collect(),
        )
        .unwrap()
    }

    fn constants01(horizon: usize) -> FamilySample {
        gen_constants(vec![integer(0), integer(1)], horizon).sample().unwrap()
    }

    #[test]
    fn monotone_family_certifies_with_max_eta0_plus_one() {
        let fam = gen_monotone01(11).unwrap().sample().unwrap();
        let straddle = SamplingPrefix::straddle(7, 10).unwrap();
        let out = certify_uniform(&fam, &RateBound::MaxEta0PlusOne, &[half()], std::slice::from_ref(&straddle)).unwrap();
        assert!(out.is_certified(), "{out:?}");
        // Plain max η₀ is one short under the strict convention.
        let short = RateBound::Expression {
            text: RateExpr::parse("maxeta0").unwrap(),
        };
        let out = certify_uniform(&fam, &short, &[half()], &[straddle]).unwrap();
        let r = out.refutation().unwrap();
        assert_eq!(fam.labels()[r.member], "up@7");
    }

    #[test]
    fn alternating_refutes_constant_bound() {
        let b = 3;
        let fam = alternating(&[2, 2 * b + 2], 16);
        let out = certify_uniform(
            &fam,
            &RateBound::constant(b as u64),
            &[half()],
            &[SamplingPrefix::pairs(12).unwrap()],
        )
        .unwrap();
        let r = out.refutation().unwrap();
        assert_eq!(r.member, 1);
        assert_eq!(r.oscillations, vec![Scalar::Exact(integer(1)); b]);
        assert!(replay(r, &fam).unwrap());
        assert!(r.replay_standalone());
    }

    #[test]
    fn constants_certify_at_level_zero() {
        let fam = constants01(8);
        let out = certify_uniform(
            &fam,
            &RateBound::constant(1),
            &[Epsilon::ratio(1, 10).unwrap()],
            &[SamplingPrefix::pairs(4).unwrap()],
        )
        .unwrap();
        let cert = out.certificate().unwrap();
        assert_eq!(cert.witnesses.len(), 2);
        assert!(cert.witnesses.iter().all(|w| w.level == 0));
    }

    #[test]
    fn bound_past_prefix_is_flagged() {
        let fam = alternating(&[8], 16);
        let out = certify_uniform(&fam, &RateBound::constant(9), &[half()], &[SamplingPrefix::pairs(4).unwrap()]).unwrap();
        let cert = out.certificate().unwrap();
        assert!(cert.bounds[0].inconclusive);
        assert_eq!(cert.bounds[0].unwitnessed, vec![0]);
        assert_eq!(out.verdict().exit_code(), 2);
    }

    #[test]
    fn sampling_beyond_horizon_is_an_error() {
        let fam = constants01(4);
        let err = certify_uniform(&fam, &RateBound::constant(1), &[half()], &[SamplingPrefix::pairs(4).unwrap()]).unwrap_err();
        assert!(matches!(err, Error::OutOfHorizon { index: 4, .. }));
    }

    #[test]
    fn adversary_refutes_ten() {
        let spec = gen_eventually_zero_alternating(126, 128).unwrap();
        let r = refute_uniform_bound(&spec, &half(), 10, &Strategy::Adversary).unwrap().unwrap();
        assert_eq!(r.member_label, "alt-prefix-22");
        assert_eq!(r.sampling, SamplingPrefix::pairs(10).unwrap());
        assert!(r.replay_standalone());
    }

    #[test]
    fn nothing_to_refute() {
        let mono = gen_monotone01(12).unwrap();
        let straddle = SamplingPrefix::straddle(7, 9).unwrap();
        let b = straddle.max_eta0() as u64 + 1;
        assert_eq!(
            refute_uniform_bound(&mono, &half(), b, &Strategy::Search(vec![straddle])).unwrap(),
            None
        );
        assert_eq!(refute_uniform_bound(&mono, &half(), 1, &Strategy::Adversary).unwrap(), None);

        let consts = gen_constants(vec![integer(2), integer(5)], 8);
        let any = Strategy::Search(vec![SamplingPrefix::pairs(6).unwrap()]);
        assert_eq!(
            refute_uniform_bound(&consts, &Epsilon::ratio(1, 100).unwrap(), 1, &any).unwrap(),
            None
        );
    }

    #[test]
    fn synth_examples() {
        let eps = Epsilon::ratio(1, 10).unwrap();
        let out = synth_minimal_uniform_rate(&constants01(8), &eps, &SamplingPrefix::pairs(5).unwrap()).unwrap();
        assert_eq!(out.e_star(), Some(1));

        let mono = gen_monotone01(11).unwrap().sample().unwrap();
        let out = synth_minimal_uniform_rate(&mono, &half(), &SamplingPrefix::straddle(7, 10).unwrap()).unwrap();
        assert_eq!(out.e_star(), Some(8));

        let alt = alternating(&[2, 4, 6], 16);
        let out = synth_minimal_uniform_rate(&alt, &half(), &SamplingPrefix::pairs(10).unwrap()).unwrap();
        assert_eq!(
            out,
            SynthOutcome::Rate {
                e_star: 7,
                witness_levels: vec![2, 4, 6]
            }
        );

        let short = synth_minimal_uniform_rate(&alt, &half(), &SamplingPrefix::pairs(5).unwrap()).unwrap();
        assert!(matches!(short, SynthOutcome::Inconclusive { member: 2, .. }));
    }

    #[test]
    fn replay_rejects_bad_evidence() {
        let fam = FamilySample::from_views(vec![SequenceView::constant(4, 1)]).unwrap();
        let forged = Refutation {
            schema_version: SCHEMA_VERSION,
            member: 0,
            member_label: "member-0".into(),
            epsilon: half(),
            sampling: SamplingPrefix::pairs(1).unwrap(),
            bound: 1,
            oscillations: vec![Scalar::Exact(integer(1))],
            member_prefix: vec![Scalar::Exact(integer(1)); 2],
            tolerance: None,
        };
        assert!(!replay(&forged, &fam).unwrap());
        assert!(!forged.replay_standalone());
        let missing = Refutation { member: 3, ..forged };
        assert!(matches!(replay(&missing, &fam), Err(Error::UnknownMember(3))));
    }

    #[test]
    fn rate_bound_json() {
        let r: RateBound = serde_json::from_str(r#"{"kind":"expression","text":"maxeta0 + 1"}"#).unwrap();
        let eta = SamplingPrefix::straddle(4, 6).unwrap();
        assert_eq!(r.evaluate(&half(), &eta).unwrap(), 5);
        let t: RateBound = serde_json::from_str(
            r#"{"kind":"table","default":2,"entries":[{"epsilon":"1/2","sampling":{"levels":[[0,4],[1,4],[2,4],[3,4],[4],[5,6]]},"bound":9}]}"#,
        )
        .unwrap();
        assert_eq!(t.evaluate(&half(), &eta).unwrap(), 9);
        assert_eq!(t.evaluate(&Epsilon::ratio(1, 3).unwrap(), &eta).unwrap(), 2);
        assert_eq!(RateBound::constant(0).evaluate(&half(), &eta).unwrap(), 1);
        let e = RateBound::Expression {
            text: RateExpr::parse("1/eps").unwrap(),
        };
        assert_eq!(e.evaluate(&Epsilon::ratio(2, 7).unwrap(), &eta).unwrap(), 4);
        assert_eq!(
            serde_json::to_string(&RateBound::MaxEta0PlusOne).unwrap(),
            r#"{"kind":"max-eta0-plus-one"}"#
        );
    }
}
