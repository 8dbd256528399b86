//! Command drivers behind the `metastab` binary.
//!
//! Each `cmd_*` takes an [`AnalysisConfig`] and returns a [`Report`]; the
//! report's exit code follows the three-valued verdict (0 certified or
//! nothing to refute, 1 refuted, 2 inconclusive). Source strings use a
//! `name:params` syntax or `@path` for files; see [`parse_sampling`],
//! [`parse_family`] and [`parse_rate`].

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::families::{
    gen_cesaro, gen_constants, gen_eventually_zero_alternating, gen_expressions, gen_monotone01, ingest_trace_file, FamilySpec, Generator,
    SequenceExpr,
};
use crate::funcspace::{build_prop23_instance, certify_over_points, check_pointwise, uniform_over_points, FunctionFamilyView};
use crate::logic::{analyze_modulo, parse_sentence_sequence, read_text, Language, ModuloOutcome, Theory};
use crate::metastability::{cauchy_index, checked_refuting_sampling, find_witness, Exhausted, Verdict};
use crate::numeric::{parse_rational, Epsilon, Scalar, DEFAULT_TOLERANCE};
use crate::par;
use crate::rates::{
    certify_uniform, refute_uniform_bound, synth_minimal_uniform_rate, CertifyOutcome, FamilySample, RateBound, RateExpr, Strategy,
};
use crate::report::{Report, Timing};
use crate::sampling::SamplingPrefix;

pub const DEFAULT_HORIZON: usize = 64;
pub const DEFAULT_RESOLUTION: u32 = 100;
/// Default index-set size bound for `random:` samplings.
pub const RANDOM_SET_SIZE: usize = 3;

/// Everything a command needs; echoed verbatim into its report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub horizon: usize,
    pub epsilons: Vec<Epsilon>,
    pub samplings: Vec<String>,
    pub family: Option<String>,
    pub rate: Option<String>,
    pub bound: Option<u64>,
    pub strategy: Option<String>,
    pub points: Option<usize>,
    pub theory: Option<String>,
    pub sentences: Option<String>,
    pub atoms: Option<Vec<String>>,
    pub grid_resolution: u32,
    pub tolerance: f64,
    pub refute_length: Option<usize>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            horizon: DEFAULT_HORIZON,
            epsilons: vec![Epsilon::ratio(1, 2).expect("positive")],
            samplings: vec!["pairs".into()],
            family: None,
            rate: None,
            bound: None,
            strategy: None,
            points: None,
            theory: None,
            sentences: None,
            atoms: None,
            grid_resolution: DEFAULT_RESOLUTION,
            tolerance: DEFAULT_TOLERANCE,
            refute_length: None,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::config("horizon", "must be at least 1"));
        }
        if self.epsilons.is_empty() {
            return Err(Error::config("epsilon", "give at least one epsilon"));
        }
        if self.samplings.is_empty() {
            return Err(Error::config("sampling", "give at least one sampling"));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(Error::config("tolerance", "must be a finite non-negative number"));
        }
        if self.grid_resolution == 0 {
            return Err(Error::config("grid-resolution", "must be at least 1"));
        }
        Ok(())
    }

    fn require<'a>(&self, value: &'a Option<String>, field: &str) -> Result<&'a str> {
        value.as_deref().ok_or_else(|| Error::config(field, "required for this command"))
    }
}

fn file_arg(spec: &str) -> Option<&Path> {
    spec.strip_prefix('@').map(Path::new)
}

fn parse_usize(field: &str, text: &str) -> Result<usize> {
    text.trim()
        .parse()
        .map_err(|_| Error::config(field, format!("`{text}` is not a natural number")))
}

/// Sampling sources:
///
/// * `pairs[:L]`: `η_m = {m, m+1}`, default `L = H − 1`
/// * `intervals:w[:L]`: `η_m = {m, …, m+w}`, default `L = H − w`
/// * `straddle:c[:L]`: `η_m = {m, c}` for `m ≤ c`, then pairs; default `L = c + 1`
/// * `random:L:seed[:k]`: up to `k` (default 3) random indices in `[m, H)` per level
/// * `@file.json`: `{"levels": [[…], …]}`
///
/// Every index must be below the horizon `H`.
pub fn parse_sampling(spec: &str, horizon: usize) -> Result<SamplingPrefix> {
    let field = "sampling";
    let bad = |msg: String| Error::config(field, format!("`{spec}`: {msg}"));
    let eta = if let Some(path) = file_arg(spec) {
        SamplingPrefix::load(path)?
    } else {
        let mut parts = spec.split(':');
        let name = parts.next().unwrap_or_default();
        let args = parts.map(|p| parse_usize(field, p)).collect::<Result<Vec<_>>>()?;
        let arg = |i: usize, default: Option<usize>| {
            args.get(i)
                .copied()
                .or(default)
                .ok_or_else(|| bad(format!("missing parameter {}", i + 1)))
        };
        match name {
            "pairs" => SamplingPrefix::pairs(arg(0, Some(horizon.saturating_sub(1)))?),
            "intervals" => {
                let w = arg(0, None)?;
                SamplingPrefix::intervals(w, arg(1, Some(horizon.saturating_sub(w)))?)
            }
            "straddle" => {
                let c = arg(0, None)?;
                SamplingPrefix::straddle(c, arg(1, Some(c + 1))?)
            }
            "random" => SamplingPrefix::random(arg(0, None)?, horizon, arg(2, Some(RANDOM_SET_SIZE))?, arg(1, None)? as u64),
            other => return Err(bad(format!("unknown sampling generator `{other}`"))),
        }
        .map_err(|e| bad(e.to_string()))?
    };
    if let Some(index) = eta.max_index().filter(|&i| i >= horizon) {
        return Err(bad(format!("index {index} is not below the horizon {horizon}")));
    }
    Ok(eta)
}

/// Family sources:
///
/// * `monotone01`
/// * `alternating[:P]`: even alternating prefixes up to `P` (default the
///   largest even number not above `H`)
/// * `cesaro:<expr>`: running averages of a sequence expression
/// * `expr:<e1>;<e2>;…`: explicit sequence expressions
/// * `const:<v1>,<v2>,…`: constant sequences
/// * `matrix:<path>`: function-family matrix CSV, one member per point
/// * `@file.csv`: a trace, one sequence per row
/// * `@file`: one sequence expression per line
pub fn parse_family(spec: &str, horizon: usize, tolerance: f64) -> Result<FamilySpec> {
    let field = "family";
    let bad = |msg: String| Error::config(field, format!("`{spec}`: {msg}"));
    if let Some(path) = file_arg(spec) {
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
            return ingest_trace_file(path, tolerance);
        }
        let text = read_text(path)?;
        let exprs = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(SequenceExpr::parse)
            .collect::<Result<Vec<_>>>()?;
        return checked(gen_expressions(exprs, horizon));
    }
    let (name, rest) = spec.split_once(':').map_or((spec, None), |(n, r)| (n, Some(r)));
    match (name, rest) {
        ("monotone01", None) => gen_monotone01(horizon),
        ("alternating", p) => {
            let max_prefix = match p {
                Some(p) => parse_usize(field, p)?,
                None => horizon & !1,
            };
            gen_eventually_zero_alternating(max_prefix, horizon)
        }
        ("cesaro", Some(e)) => gen_cesaro(SequenceExpr::parse(e)?, horizon),
        ("expr", Some(list)) => {
            let exprs = list.split(';').map(SequenceExpr::parse).collect::<Result<Vec<_>>>()?;
            checked(gen_expressions(exprs, horizon))
        }
        ("matrix", Some(path)) => {
            let path = Path::new(path);
            let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
            let fam = FunctionFamilyView::read_matrix_csv(file, tolerance)?;
            let slices = (0..fam.points().len()).map(|x| fam.slice(x).values().iter().map(Scalar::to_f64).collect());
            Ok(FamilySpec {
                horizon: fam.horizon(),
                generator: Generator::Trace {
                    source: path.display().to_string(),
                    rows: slices.collect(),
                    labels: fam.points().ids().to_vec(),
                    tolerance,
                },
            })
        }
        ("const", Some(list)) => {
            let values = list.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
            Ok(gen_constants(values, horizon))
        }
        _ => Err(bad("unknown family source".into())),
    }
}

fn checked(spec: FamilySpec) -> Result<FamilySpec> {
    spec.sample()?;
    Ok(spec)
}

/// Rate sources: `const:N`, `maxeta0plus1`, `expr:<rate expression>` or
/// `@file.json` holding a serialized [`RateBound`].
pub fn parse_rate(spec: &str) -> Result<RateBound> {
    let bad = |msg: &str| Error::config("rate", format!("`{spec}`: {msg}"));
    if let Some(path) = file_arg(spec) {
        return Ok(serde_json::from_str(&read_text(path)?)?);
    }
    match spec.split_once(':') {
        None if spec == "maxeta0plus1" => Ok(RateBound::MaxEta0PlusOne),
        Some(("const", n)) => {
            let value: u64 = n.trim().parse().map_err(|_| bad("not a natural number"))?;
            if value == 0 {
                return Err(bad("a rate bound must be at least 1"));
            }
            Ok(RateBound::constant(value))
        }
        Some(("expr", text)) => Ok(RateBound::Expression {
            text: RateExpr::parse(text)?,
        }),
        _ => Err(bad("expected const:N, maxeta0plus1, expr:<text> or @file")),
    }
}

struct Resolved {
    spec: FamilySpec,
    family: FamilySample,
    samplings: Vec<SamplingPrefix>,
}

fn resolve_family(config: &AnalysisConfig) -> Result<Resolved> {
    config.validate()?;
    let spec = parse_family(config.require(&config.family, "family")?, config.horizon, config.tolerance)?;
    let family = spec.sample()?;
    if family.is_empty() {
        return Err(Error::config("family", "the family has no members"));
    }
    let samplings = config
        .samplings
        .iter()
        .map(|s| parse_sampling(s, spec.horizon))
        .collect::<Result<Vec<_>>>()?;
    Ok(Resolved { spec, family, samplings })
}

fn finish(mut report: Report, started: Instant) -> Report {
    report.timing = Some(Timing {
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    });
    report
}

fn worst(verdicts: impl IntoIterator<Item = Verdict>) -> Option<Verdict> {
    verdicts.into_iter().max_by_key(|v| match v {
        Verdict::CertifiedAtHorizon { .. } => 0,
        Verdict::Inconclusive { .. } => 1,
        Verdict::Refuted { .. } => 2,
    })
}

/// Single-sequence analysis of every member: Cauchy index per `ε`, least
/// witness per sampling, and optionally a refuting sampling of length
/// `refute_length`.
pub fn cmd_analyze(config: &AnalysisConfig) -> Result<Report> {
    let started = Instant::now();
    let r = resolve_family(config)?;
    let members = par::map_indexed(r.family.len(), |id| -> Result<_> {
        let x = &r.family.members()[id];
        let mut missing = 0usize;
        let mut per_eps = Vec::new();
        for eps in &config.epsilons {
            let witnesses = r
                .samplings
                .iter()
                .map(|eta| find_witness(x, eps, eta))
                .collect::<Result<Vec<_>>>()?;
            missing += witnesses.iter().filter(|w| w.is_none()).count();
            let refuting = match config.refute_length {
                Some(len) => checked_refuting_sampling(x, eps, len)?,
                None => None,
            };
            per_eps.push(json!({
                "epsilon": eps,
                "cauchy_index": cauchy_index(x, eps),
                "witnesses": witnesses,
                "refuting_sampling": refuting,
            }));
        }
        let verdict = if missing == 0 {
            Verdict::CertifiedAtHorizon {
                note: "a witness exists in every tested sampling prefix".into(),
            }
        } else {
            Verdict::Inconclusive {
                exhausted: Exhausted::SamplingLength,
                note: format!("{missing} (epsilon, sampling) pair(s) have no witness inside the prefix"),
            }
        };
        Ok((
            json!({"id": id, "label": r.family.labels()[id], "results": per_eps, "verdict": verdict}),
            verdict,
        ))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let verdict = worst(members.iter().map(|(_, v)| v.clone())).expect("nonempty family");
    let results = json!({
        "family": r.spec.describe(),
        "samplings": r.samplings,
        "members": members.into_iter().map(|(m, _)| m).collect::<Vec<_>>(),
    });
    let mut report = Report::new("analyze", config, verdict, results);
    report
        .notes
        .push("certification holds only for the tested horizon and sampling prefixes".into());
    Ok(finish(report, started))
}

/// `certify_uniform` for a family and a rate.
pub fn cmd_certify(config: &AnalysisConfig) -> Result<Report> {
    let started = Instant::now();
    let r = resolve_family(config)?;
    let rate = parse_rate(config.require(&config.rate, "rate")?)?;
    let outcome = certify_uniform(&r.family, &rate, &config.epsilons, &r.samplings)?;
    let mut report = Report::new(
        "certify",
        config,
        outcome.verdict(),
        json!({"family": r.spec.describe(), "samplings": r.samplings, "outcome": outcome}),
    );
    if let CertifyOutcome::Refutation(refutation) = outcome {
        report.refutations.push(refutation);
    }
    if rate == RateBound::MaxEta0PlusOne {
        report.notes.push(
            "max eta0 + 1 is used instead of max eta0: witnesses must lie strictly below the rate, \
             and a flip at max eta0 against a straddle sampling needs witness max eta0"
                .into(),
        );
    }
    Ok(finish(report, started))
}

/// Tries to defeat the constant bound `--bound` for each `ε`.
pub fn cmd_refute(config: &AnalysisConfig) -> Result<Report> {
    let started = Instant::now();
    let r = resolve_family(config)?;
    let bound = config.bound.ok_or_else(|| Error::config("bound", "required for this command"))?;
    let has_adversary = r.spec.describe().has_adversary;
    let strategy = match config.strategy.as_deref().unwrap_or("auto") {
        "adversary" => Strategy::Adversary,
        "search" => Strategy::Search(r.samplings.clone()),
        "auto" if has_adversary => Strategy::Adversary,
        "auto" => Strategy::Search(r.samplings.clone()),
        other => return Err(Error::config("strategy", format!("unknown strategy `{other}`"))),
    };
    let mut refutations = Vec::new();
    let mut attempts = Vec::new();
    for eps in &config.epsilons {
        let found = refute_uniform_bound(&r.spec, eps, bound, &strategy)?;
        attempts.push(json!({"epsilon": eps, "refuted": found.is_some()}));
        refutations.extend(found);
    }
    let verdict = if refutations.is_empty() {
        Verdict::CertifiedAtHorizon {
            note: format!("no refutation of bound {bound} found; this is not a proof that the bound holds"),
        }
    } else {
        Verdict::Refuted {
            evidence: format!("{} replay-verified refutation(s) of bound {bound}", refutations.len()),
        }
    };
    let strategy_name = match strategy {
        Strategy::Adversary => "adversary",
        Strategy::Search(_) => "search",
    };
    let results = json!({
        "family": r.spec.describe(),
        "bound": bound,
        "strategy": strategy_name,
        "attempts": attempts,
    });
    let mut report = Report::new("refute", config, verdict, results);
    report.refutations = refutations;
    Ok(finish(report, started))
}

/// Least uniform rate `E*` for every `(ε, η)`, with the coherence check
/// (certify at `E*` succeeds, at `E* − 1` fails).
pub fn cmd_synth(config: &AnalysisConfig) -> Result<Report> {
    let started = Instant::now();
    let r = resolve_family(config)?;
    let mut entries = Vec::new();
    let mut verdicts = Vec::new();
    for (e, eps) in config.epsilons.iter().enumerate() {
        for (s, eta) in r.samplings.iter().enumerate() {
            let outcome = synth_minimal_uniform_rate(&r.family, eps, eta)?;
            let coherent = match outcome.e_star() {
                Some(e_star) => coherent_at(&r.family, eps, eta, e_star)?,
                None => true,
            };
            if !coherent {
                return Err(Error::Internal(format!(
                    "E* for epsilon {eps}, sampling {s} is not coherent with certification"
                )));
            }
            verdicts.push(outcome.verdict());
            entries.push(json!({"epsilon_index": e, "sampling_index": s, "outcome": outcome}));
        }
    }
    let verdict = worst(verdicts).expect("at least one pair");
    let results = json!({"family": r.spec.describe(), "epsilons": config.epsilons, "samplings": r.samplings, "rates": entries});
    Ok(finish(Report::new("synth", config, verdict, results), started))
}

/// `certify(constant E*)` succeeds and, when `E* ≥ 2`, `certify(E* − 1)` fails.
pub fn coherent_at(family: &FamilySample, eps: &Epsilon, eta: &SamplingPrefix, e_star: u64) -> Result<bool> {
    let eps = std::slice::from_ref(eps);
    let eta = std::slice::from_ref(eta);
    let at = certify_uniform(family, &RateBound::constant(e_star), eps, eta)?.is_certified();
    let below = e_star < 2
        || certify_uniform(family, &RateBound::constant(e_star - 1), eps, eta)?
            .refutation()
            .is_some();
    Ok(at && below)
}

/// Builds the discrete `g_0, F, g_1, F, …` instance on `--points` points and
/// reports pointwise moduli, per-point witnesses and `E*`; with `--rate`,
/// also tries to certify that rate over the points.
pub fn cmd_prop23(config: &AnalysisConfig) -> Result<Report> {
    let started = Instant::now();
    config.validate()?;
    let points = config.points.ok_or_else(|| Error::config("points", "required for this command"))?;
    let fam = build_prop23_instance(points, config.horizon)?;
    let samplings = config
        .samplings
        .iter()
        .map(|s| parse_sampling(s, config.horizon))
        .collect::<Result<Vec<_>>>()?;
    let pointwise: Vec<_> = config.epsilons.iter().map(|eps| check_pointwise(&fam, eps)).collect();
    let mut uniform = Vec::new();
    let mut verdicts = Vec::new();
    for (e, eps) in config.epsilons.iter().enumerate() {
        for (s, eta) in samplings.iter().enumerate() {
            let u = uniform_over_points(&fam, eps, eta)?;
            verdicts.push(u.outcome.verdict());
            uniform.push(json!({"epsilon_index": e, "sampling_index": s, "result": u}));
        }
    }
    let mut results = json!({
        "points": points,
        "horizon": config.horizon,
        "samplings": samplings,
        "pointwise": pointwise,
        "uniform": uniform,
    });
    let mut refutations = Vec::new();
    let verdict = match &config.rate {
        Some(rate) => {
            let outcome = certify_over_points(&fam, &parse_rate(rate)?, &config.epsilons, &samplings)?;
            let v = outcome.verdict();
            results["certification"] = serde_json::to_value(&outcome)?;
            refutations.extend(outcome.refutation().cloned());
            v
        }
        None => worst(verdicts).expect("at least one pair"),
    };
    let mut report = Report::new("prop23", config, verdict, results);
    report.refutations = refutations;
    report
        .notes
        .push("finite discrete point set: every subset is closed, so only the growth of witness levels is observable".into());
    Ok(finish(report, started))
}

fn inline_or_file(spec: &str) -> Result<String> {
    match file_arg(spec) {
        Some(path) => read_text(path),
        None => Ok(spec.split(';').collect::<Vec<_>>().join("\n")),
    }
}

/// Rate analysis of a sentence sequence modulo a theory on the valuation
/// grid. `--sentences` is `@file`, `template:<formula with half^n(…)>`, or
/// `;`-separated formulas; `--theory` is `@file` or `;`-separated formulas.
pub fn cmd_logic(config: &AnalysisConfig) -> Result<Report> {
    let started = Instant::now();
    config.validate()?;
    let sentences_text = inline_or_file(config.require(&config.sentences, "sentences")?)?;
    let theory_text = match &config.theory {
        Some(t) => inline_or_file(t)?,
        None => String::new(),
    };
    let lang = match &config.atoms {
        Some(atoms) => Language::new(atoms.clone())?,
        None => Language::infer([sentences_text.as_str(), theory_text.as_str()])?,
    };
    let theory = Theory::parse(&theory_text, &lang)?;
    let sentences = parse_sentence_sequence(&sentences_text, &lang, config.horizon)?;
    let samplings = config
        .samplings
        .iter()
        .map(|s| parse_sampling(s, sentences.len()))
        .collect::<Result<Vec<_>>>()?;

    let mut analyses = Vec::new();
    let mut verdicts = Vec::new();
    let mut family = None;
    for (e, eps) in config.epsilons.iter().enumerate() {
        for (s, eta) in samplings.iter().enumerate() {
            let a = analyze_modulo(&lang, &theory, &sentences, eps, eta, config.grid_resolution)?;
            verdicts.push(match &a.outcome {
                ModuloOutcome::EmptyModelClass => Verdict::Inconclusive {
                    exhausted: Exhausted::Grid,
                    note: "no grid valuation satisfies the theory".into(),
                },
                ModuloOutcome::Analyzed { uniform, .. } => uniform.outcome.verdict(),
            });
            analyses.push(json!({"epsilon_index": e, "sampling_index": s, "analysis": &a}));
            if family.is_none() {
                family = a.family;
            }
        }
    }
    let mut results = json!({
        "atoms": lang.atoms(),
        "theory": theory.sentences.iter().map(|f| f.display(&lang).to_string()).collect::<Vec<_>>(),
        "sentence_count": sentences.len(),
        "grid_resolution": config.grid_resolution,
        "samplings": samplings,
        "analyses": analyses,
    });
    let mut refutations = Vec::new();
    let verdict = match (&config.rate, &family) {
        (Some(rate), Some(fam)) => {
            let outcome = certify_over_points(fam, &parse_rate(rate)?, &config.epsilons, &samplings)?;
            results["certification"] = serde_json::to_value(&outcome)?;
            let v = outcome.verdict();
            refutations.extend(outcome.refutation().cloned());
            v
        }
        _ => worst(verdicts).expect("at least one pair"),
    };
    let mut report = Report::new("logic", config, verdict, results);
    report.refutations = refutations;
    report.notes.push(format!(
        "structure space approximated by the grid with step 1/{}; satisfaction means value exactly 1",
        config.grid_resolution
    ));
    Ok(finish(report, started))
}

/// Writes the sampling JSON for a generator spec.
pub fn cmd_gen_sampling(config: &AnalysisConfig, out: Option<&PathBuf>) -> Result<String> {
    config.validate()?;
    let eta = parse_sampling(&config.samplings[0], config.horizon)?;
    let mut text = eta.to_json();
    text.push('\n');
    if let Some(path) = out {
        std::fs::write(path, &text).map_err(|e| Error::io(path, e))?;
    }
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> AnalysisConfig {
        AnalysisConfig::default()
    }

    #[test]
    fn sampling_sources() {
        assert_eq!(parse_sampling("pairs", 10).unwrap().len(), 9);
        assert_eq!(parse_sampling("pairs:4", 10).unwrap(), SamplingPrefix::pairs(4).unwrap());
        assert_eq!(parse_sampling("intervals:3", 10).unwrap().len(), 7);
        assert_eq!(parse_sampling("straddle:5", 10).unwrap().len(), 6);
        assert_eq!(parse_sampling("random:8:1", 10).unwrap().len(), 8);
        let err = parse_sampling("pairs:10", 10).unwrap_err();
        assert!(err.to_string().contains("`sampling`"), "{err}");
        assert!(parse_sampling("zigzag", 10).is_err());
        assert!(parse_sampling("intervals", 10).is_err());
    }

    #[test]
    fn family_sources() {
        assert_eq!(parse_family("monotone01", 8, 1e-9).unwrap().len(), 16);
        assert_eq!(parse_family("alternating", 9, 1e-9).unwrap().len(), 4);
        assert_eq!(parse_family("alternating:4", 9, 1e-9).unwrap().len(), 2);
        assert_eq!(parse_family("const:0,1/2", 9, 1e-9).unwrap().len(), 2);
        assert_eq!(parse_family("expr:1/2^n;n", 9, 1e-9).unwrap().len(), 2);
        assert_eq!(parse_family("cesaro:mod(n,2)", 9, 1e-9).unwrap().len(), 1);
        assert!(parse_family("expr:1/0", 9, 1e-9).is_err());
        assert!(parse_family("nope", 9, 1e-9).is_err());
    }

    #[test]
    fn rate_sources() {
        assert_eq!(parse_rate("const:3").unwrap(), RateBound::constant(3));
        assert_eq!(parse_rate("maxeta0plus1").unwrap(), RateBound::MaxEta0PlusOne);
        assert!(parse_rate("expr:maxeta0 + 2").is_ok());
        assert!(parse_rate("const:0").is_err());
        assert!(parse_rate("const:x").is_err());
        assert!(parse_rate("fancy").is_err());
    }

    #[test]
    fn synth_on_constants() {
        let config = AnalysisConfig {
            family: Some("const:0,1".into()),
            epsilons: vec!["1/10".parse().unwrap()],
            ..cfg()
        };
        let report = cmd_synth(&config).unwrap();
        assert_eq!(report.exit_code, 0);
        assert_eq!(report.results["rates"][0]["outcome"]["e_star"], 1);
    }

    #[test]
    fn refute_alternating() {
        let config = AnalysisConfig {
            family: Some("alternating".into()),
            bound: Some(10),
            horizon: 128,
            ..cfg()
        };
        let report = cmd_refute(&config).unwrap();
        assert_eq!(report.exit_code, 1);
        assert_eq!(report.refutations[0].member_label, "alt-prefix-22");
        assert!(report.replay_all());
    }

    #[test]
    fn prop23_report() {
        let config = AnalysisConfig {
            points: Some(4),
            horizon: 10,
            ..cfg()
        };
        let report = cmd_prop23(&config).unwrap();
        assert_eq!(report.exit_code, 0);
        assert_eq!(report.results["uniform"][0]["result"]["outcome"]["e_star"], 6);
    }

    #[test]
    fn missing_fields_are_named() {
        let err = cmd_certify(&AnalysisConfig {
            family: Some("monotone01".into()),
            ..cfg()
        })
        .unwrap_err();
        assert!(err.to_string().contains("`rate`"), "{err}");
        let err = cmd_prop23(&cfg()).unwrap_err();
        assert!(err.to_string().contains("`points`"), "{err}");
        let err = cmd_analyze(&AnalysisConfig {
            epsilons: vec![],
            family: Some("monotone01".into()),
            ..cfg()
        })
        .unwrap_err();
        assert!(err.to_string().contains("`epsilon`"), "{err}");
    }

    #[test]
    fn logic_template() {
        let config = AnalysisConfig {
            sentences: Some("template: half^n(neg(p))".into()),
            epsilons: vec!["1/10".parse().unwrap()],
            samplings: vec!["pairs:8".into()],
            horizon: 16,
            ..cfg()
        };
        let report = cmd_logic(&config).unwrap();
        assert_eq!(report.exit_code, 0);
        assert_eq!(report.results["atoms"], json!(["p"]));
    }
}
