//! Verification of n-ampleness witness tuples.
//!
//! A witness is a chain of tuples whose iterated closures intersect
//! trivially, whose last tuple depends on the first, and which satisfies an
//! independence ladder (Pillay's form, or Evans' stronger form with the
//! whole tail on the left). Non-(n+1)-ampleness is not decidable on a
//! finite approximation, so the module only verifies witnesses and the
//! flag-extraction corollary; failures are reported as candidates, never
//! as disproofs.

use crate::closure::{acl, independent_tuple};
use crate::graph::{FlagKind, LevelGraph, VertexId};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AmpleVariant {
    Pillay,
    Evans,
}

/// A candidate witness: tuples `a_0..a_m`, parameters adjoined to every
/// closure computation, and the ladder variant to check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmpleInstance {
    pub tuples: Vec<Vec<VertexId>>,
    pub params: Vec<VertexId>,
    pub variant: AmpleVariant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFailure {
    /// 1 = closure intersection, 2 = dependence of a_m on a_0, 3 = ladder.
    pub condition: u32,
    pub index: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub verdict: bool,
    pub failures: Vec<WitnessFailure>,
}

fn with_params(inst: &AmpleInstance, sets: &[&[VertexId]]) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = inst.params.clone();
    for s in sets {
        out.extend_from_slice(s);
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn flatten(tuples: &[Vec<VertexId>]) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = tuples.iter().flatten().copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Checks the witness conditions, reporting the first failing index per
/// condition.
pub fn verify_witness(g: &LevelGraph, inst: &AmpleInstance) -> Result<WitnessReport> {
    for v in inst.tuples.iter().flatten().chain(inst.params.iter()) {
        g.check_vertex(*v)?;
    }
    let m = inst.tuples.len().saturating_sub(1);
    let mut report = WitnessReport {
        verdict: true,
        failures: Vec::new(),
    };
    if m == 0 {
        report.verdict = false;
        report.failures.push(WitnessFailure {
            condition: 1,
            index: 0,
            detail: "a witness needs at least two tuples".into(),
        });
        return Ok(report);
    }

    // 1: cl(a_0..a_{i-1}, a_i) ∩ cl(a_0..a_{i-1}, a_{i+1}) = cl(a_0..a_{i-1})
    for i in 0..m {
        let prefix = flatten(&inst.tuples[..i]);
        let left = acl(g, &with_params(inst, &[&prefix, &inst.tuples[i]]))?;
        let right = acl(g, &with_params(inst, &[&prefix, &inst.tuples[i + 1]]))?;
        let base = acl(g, &with_params(inst, &[&prefix]))?;
        let meet: BTreeSet<VertexId> = left.intersection(&right).copied().collect();
        if meet != base {
            report.verdict = false;
            report.failures.push(WitnessFailure {
                condition: 1,
                index: i,
                detail: format!("intersection {meet:?} differs from {base:?}"),
            });
            break;
        }
    }

    // 2: a_m forks with a_0 over the parameters.
    let a_last = inst.tuples[m].clone();
    let a_first = inst.tuples[0].clone();
    if independent_tuple(
        g,
        &with_params(inst, &[&a_last]),
        &a_first,
        &with_params(inst, &[]),
    )? {
        report.verdict = false;
        report.failures.push(WitnessFailure {
            condition: 2,
            index: m,
            detail: "last tuple is independent from the first".into(),
        });
    }

    // 3: the independence ladder.
    for i in 0..m {
        let ok = match inst.variant {
            AmpleVariant::Pillay => {
                let b = flatten(&inst.tuples[..=i]);
                independent_tuple(
                    g,
                    &with_params(inst, &[&a_last]),
                    &b,
                    &with_params(inst, &[&inst.tuples[i]]),
                )?
            }
            AmpleVariant::Evans => {
                let tail = flatten(&inst.tuples[i + 1..]);
                let b = flatten(&inst.tuples[..i]);
                independent_tuple(
                    g,
                    &with_params(inst, &[&tail]),
                    &b,
                    &with_params(inst, &[&inst.tuples[i]]),
                )?
            }
        };
        if !ok {
            report.verdict = false;
            report.failures.push(WitnessFailure {
                condition: 3,
                index: i,
                detail: "independence ladder fails".into(),
            });
            break;
        }
    }
    Ok(report)
}

/// Packages the first chamber as an n-ample witness with empty parameters.
pub fn flag_witness(g: &LevelGraph, variant: AmpleVariant) -> Result<AmpleInstance> {
    let chambers = crate::building::chambers(g);
    let chamber = chambers.first().ok_or(Error::NoChamberInGraph)?;
    Ok(AmpleInstance {
        tuples: chamber.iter().map(|&v| vec![v]).collect(),
        params: Vec::new(),
        variant,
    })
}

/// Outcome of the flag-extraction corollary on a passing witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtractOutcome {
    Flag(Vec<VertexId>),
    /// Reported as a falsification candidate, never as a disproof.
    NotFound,
    NotAWitness(WitnessReport),
}

/// Searches the per-tuple closures for vertices `b_i ∈ cl(a_i)` forming a
/// flag.
pub fn extract_flag(g: &LevelGraph, inst: &AmpleInstance) -> Result<ExtractOutcome> {
    let report = verify_witness(g, inst)?;
    if !report.verdict {
        return Ok(ExtractOutcome::NotAWitness(report));
    }
    let closures: Vec<Vec<VertexId>> = inst
        .tuples
        .iter()
        .map(|t| {
            acl(g, &with_params(inst, &[t])).map(|s| s.into_iter().collect::<Vec<VertexId>>())
        })
        .collect::<Result<_>>()?;
    let mut chosen: Vec<VertexId> = Vec::new();
    if search_flag(g, &closures, &mut chosen)? {
        Ok(ExtractOutcome::Flag(chosen))
    } else {
        Ok(ExtractOutcome::NotFound)
    }
}

fn search_flag(
    g: &LevelGraph,
    closures: &[Vec<VertexId>],
    chosen: &mut Vec<VertexId>,
) -> Result<bool> {
    if chosen.len() == closures.len() {
        return Ok(g.classify_flag(chosen)? != FlagKind::NotFlag);
    }
    for &cand in &closures[chosen.len()] {
        if chosen.contains(&cand) {
            continue;
        }
        let mut ok = true;
        for &prev in chosen.iter() {
            if !g.incident(prev, cand)? {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        chosen.push(cand);
        if search_flag(g, closures, chosen)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}
