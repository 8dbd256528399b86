//! Function sequences `⟨h_n⟩` on a finite point set: pointwise convergence
//! versus uniform metastability over the points.
//!
//! On a finite point set every subset is closed, so "closed subspace"
//! amounts to choosing a subset of the points; the topological content of
//! the non-pseudocompact counterexample survives only through how its
//! witness levels grow with the number of points.

use std::collections::BTreeSet;
use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metastability::{cauchy_index, Exhausted, Verdict};
use crate::numeric::{integer, Epsilon, Scalar};
use crate::par;
use crate::rates::{certify_uniform, least_witnesses, synth_minimal_uniform_rate, CertifyOutcome, FamilySample, RateBound, SynthOutcome};
use crate::sampling::SamplingPrefix;
use crate::sequence::SequenceView;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PointSet(Vec<String>);

impl PointSet {
    pub fn new(ids: Vec<String>) -> Result<Self> {
        if ids.is_empty() {
            return Err(Error::config("points", "a point set needs at least one point"));
        }
        let mut seen = BTreeSet::new();
        if let Some(dup) = ids.iter().find(|id| !seen.insert(id.as_str())) {
            return Err(Error::config("points", format!("duplicate point id `{dup}`")));
        }
        Ok(PointSet(ids))
    }

    pub fn ids(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Values `h_n(x)` for `n < H` and every point `x`, stored per point.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionFamilyView {
    points: PointSet,
    slices: Vec<SequenceView>,
    horizon: usize,
}

impl FunctionFamilyView {
    pub fn new(points: PointSet, slices: Vec<SequenceView>) -> Result<Self> {
        if slices.len() != points.len() {
            return Err(Error::Internal("one slice per point".into()));
        }
        let horizon = slices[0].horizon();
        if let Some(i) = slices.iter().position(|s| s.horizon() != horizon) {
            return Err(Error::config(
                "family",
                format!("point {} has a different horizon", points.ids()[i]),
            ));
        }
        Ok(FunctionFamilyView { points, slices, horizon })
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// The sequence `n ↦ h_n(x)` at the point with position `point`.
    pub fn slice(&self, point: usize) -> &SequenceView {
        &self.slices[point]
    }

    pub fn value(&self, n: usize, point: usize) -> Result<Scalar> {
        self.slices
            .get(point)
            .ok_or_else(|| Error::config("point", format!("no point at position {point}")))?
            .value(n)
    }

    /// Restricts to the points at the given positions (a "closed subspace").
    pub fn restrict(&self, positions: &[usize]) -> Result<Self> {
        let ids = positions
            .iter()
            .map(|&p| {
                self.points
                    .ids()
                    .get(p)
                    .cloned()
                    .ok_or_else(|| Error::config("points", format!("no point at position {p}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(PointSet::new(ids)?, positions.iter().map(|&p| self.slices[p].clone()).collect())
    }

    /// The per-point slices as a family, labelled by point id.
    pub fn as_family(&self) -> FamilySample {
        FamilySample::new(self.slices.clone(), self.points.ids().to_vec(), "function family slices").expect("slices share a horizon")
    }

    /// Reads the matrix CSV format: a header row of point ids, then one row
    /// of decimal values per level `n`.
    pub fn read_matrix_csv<R: Read>(reader: R, tolerance: f64) -> Result<Self> {
        let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = csv
            .headers()
            .map_err(|e| Error::Ingest {
                row: 1,
                column: None,
                message: e.to_string(),
            })?
            .iter()
            .map(str::to_string)
            .collect::<Vec<_>>();
        if header.is_empty() || header.iter().all(String::is_empty) {
            return Err(Error::Ingest {
                row: 1,
                column: None,
                message: "missing header of point ids".into(),
            });
        }
        let points = PointSet::new(header)?;
        let mut columns = vec![Vec::new(); points.len()];
        for (i, record) in csv.records().enumerate() {
            let row = i + 2;
            let record = record.map_err(|e| Error::Ingest {
                row,
                column: None,
                message: e.to_string(),
            })?;
            for (j, cell) in record.iter().enumerate() {
                let v: f64 = cell.parse().ok().filter(|v: &f64| v.is_finite()).ok_or_else(|| Error::Ingest {
                    row,
                    column: Some(j + 1),
                    message: format!("`{cell}` is not a finite decimal"),
                })?;
                columns[j].push(v);
            }
        }
        if columns[0].is_empty() {
            return Err(Error::Ingest {
                row: 2,
                column: None,
                message: "no levels".into(),
            });
        }
        let slices = columns.into_iter().map(|c| SequenceView::trace(c, tolerance)).collect();
        Self::new(points, slices)
    }

    pub fn write_matrix_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut csv = csv::Writer::from_writer(writer);
        let ingest = |e: csv::Error| Error::Internal(e.to_string());
        csv.write_record(self.points.ids()).map_err(ingest)?;
        for n in 0..self.horizon {
            let row: Vec<String> = self
                .slices
                .iter()
                .map(|s| s.value(n).expect("in range").to_f64().to_string())
                .collect();
            csv.write_record(&row).map_err(ingest)?;
        }
        csv.flush().map_err(|e| Error::Internal(e.to_string()))
    }
}

/// The discrete counterexample on points `0..P`: with `f_n` the indicator
/// of point `n`, `g_k = Σ_{i≤k} f_i` and `F ≡ 1`, the sequence is
/// `g_0, F, g_1, F, …`, i.e. `h_{2k}(x) = [x ≤ k]` and `h_{2k+1} ≡ 1`.
/// It converges pointwise to `F` but its witness levels grow with `x`.
pub fn build_prop23_instance(points: usize, horizon: usize) -> Result<FunctionFamilyView> {
    if points == 0 {
        return Err(Error::config("points", "need at least one point"));
    }
    if horizon < 2 * points {
        return Err(Error::config(
            "horizon",
            format!(
                "the {points}-point instance needs a horizon of at least {}, got {horizon}",
                2 * points
            ),
        ));
    }
    let ids = (0..points).map(|x| x.to_string()).collect();
    let slices = (0..points)
        .map(|x| SequenceView::from_fn(horizon, |n| integer((n % 2 == 1 || x <= n / 2) as i64)))
        .collect();
    FunctionFamilyView::new(PointSet::new(ids)?, slices)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointwiseEntry {
    pub point: String,
    /// Horizon-limited Cauchy index of the slice at this `ε`.
    pub modulus: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointwiseReport {
    pub epsilon: Epsilon,
    pub horizon: usize,
    pub entries: Vec<PointwiseEntry>,
}

impl PointwiseReport {
    pub fn all_certified(&self) -> bool {
        self.entries.iter().all(|e| e.verdict.is_certified())
    }
}

/// Per-point Cauchy index at `ε`. A point is certified when its modulus
/// leaves at least two terms in the tail (`modulus + 1 < H`); otherwise only
/// the trivial singleton tail qualified and the horizon is exhausted.
pub fn check_pointwise(fam: &FunctionFamilyView, eps: &Epsilon) -> PointwiseReport {
    let h = fam.horizon;
    let entries = par::map_indexed(fam.points.len(), |p| {
        let modulus = cauchy_index(&fam.slices[p], eps).expect("nonempty horizon");
        let verdict = if modulus + 1 < h {
            Verdict::CertifiedAtHorizon {
                note: format!("tail from {modulus} to {} stays within epsilon", h - 1),
            }
        } else {
            Verdict::Inconclusive {
                exhausted: Exhausted::Horizon,
                note: "no tail with two or more terms stays within epsilon".into(),
            }
        };
        PointwiseEntry {
            point: fam.points.ids()[p].clone(),
            modulus,
            verdict,
        }
    });
    PointwiseReport {
        epsilon: eps.clone(),
        horizon: h,
        entries,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointWitness {
    pub point: String,
    pub level: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniformOverPoints {
    pub epsilon: Epsilon,
    pub witnesses: Vec<PointWitness>,
    pub outcome: SynthOutcome,
}

/// Least witness at every point and the least uniform bound `E*`.
pub fn uniform_over_points(fam: &FunctionFamilyView, eps: &Epsilon, eta: &SamplingPrefix) -> Result<UniformOverPoints> {
    let family = fam.as_family();
    let witnesses = least_witnesses(&family, eps, eta)?
        .into_iter()
        .zip(fam.points.ids())
        .map(|(w, id)| PointWitness {
            point: id.clone(),
            level: w.map(|w| w.level),
        })
        .collect();
    Ok(UniformOverPoints {
        epsilon: eps.clone(),
        witnesses,
        outcome: synth_minimal_uniform_rate(&family, eps, eta)?,
    })
}

/// `certify_uniform` over the per-point slices.
pub fn certify_over_points(
    fam: &FunctionFamilyView,
    rate: &RateBound,
    epsilons: &[Epsilon],
    samplings: &[SamplingPrefix],
) -> Result<CertifyOutcome> {
    certify_uniform(&fam.as_family(), rate, epsilons, samplings)
}
