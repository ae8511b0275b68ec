//! Claim harness: evaluates every checkable statement about the constants
//! on a list of spaces and produces a verdict table.

mod claims;

use std::time::Instant;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{GeoError, Result};
use crate::optimize::OptConfig;
use crate::orthogonality::IsoPair;
use crate::space::SpaceSpec;

pub use claims::{claims, find_claim, Claim, ClaimKind};

/// Outcome of one claim on one space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// A report-only statement that the computation contradicts.
    MismatchDocumented,
}

/// Evidence attached to a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    Pair(IsoPair),
    Point(Vec<f64>),
}

/// Ordered `label -> value` table, serialized as a JSON object.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Measured(Vec<(String, f64)>);

impl Measured {
    pub fn push(&mut self, label: impl Into<String>, value: f64) {
        self.0.push((label.into(), value));
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.0.iter().find(|(l, _)| l == label).map(|(_, v)| *v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(l, v)| (l.as_str(), *v))
    }
}

impl Serialize for Measured {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (l, v) in &self.0 {
            map.serialize_entry(l, v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimReport {
    pub claim_id: String,
    pub space: SpaceSpec,
    pub verdict: Verdict,
    pub measured: Measured,
    pub witness: Option<Witness>,
    /// Wall time, or 0 unless timings were requested.
    pub runtime_ms: u64,
}

/// Runs the selected claims (all when `ids` is `None`) on every applicable
/// space. Reports are sorted by claim id, then space.
pub fn run_claims(
    spaces: &[SpaceSpec],
    ids: Option<&[String]>,
    cfg: &OptConfig,
    record_timings: bool,
) -> Result<Vec<ClaimReport>> {
    if spaces.is_empty() {
        return Err(GeoError::InvalidConfig("no spaces given".into()));
    }
    cfg.validate()?;
    let selected: Vec<&Claim> = match ids {
        None => claims().iter().collect(),
        Some(ids) => ids
            .iter()
            .map(|id| find_claim(id).ok_or_else(|| GeoError::UnknownClaim(id.clone())))
            .collect::<Result<_>>()?,
    };
    let mut reports = Vec::new();
    for space in spaces {
        space.validate()?;
        let mut ctx = claims::Context::new(space, cfg);
        for claim in &selected {
            if !claim.applies_to(space) {
                continue;
            }
            let start = Instant::now();
            let out = claims::evaluate(claim, &mut ctx)?;
            let verdict = match (out.holds, claim.kind) {
                (true, _) => Verdict::Pass,
                (false, ClaimKind::Asserted) => Verdict::Fail,
                (false, ClaimKind::Report) => Verdict::MismatchDocumented,
            };
            reports.push(ClaimReport {
                claim_id: claim.id.to_string(),
                space: space.clone(),
                verdict,
                measured: out.measured,
                witness: out.witness,
                runtime_ms: if record_timings {
                    start.elapsed().as_millis() as u64
                } else {
                    0
                },
            });
        }
    }
    reports.sort_by(|a, b| {
        (a.claim_id.as_str(), a.space.to_string()).cmp(&(b.claim_id.as_str(), b.space.to_string()))
    });
    reports.dedup_by(|a, b| a.claim_id == b.claim_id && a.space == b.space);
    Ok(reports)
}

/// No asserted claim failed.
pub fn all_asserted_pass(reports: &[ClaimReport]) -> bool {
    reports.iter().all(|r| r.verdict != Verdict::Fail)
}
