//! Parallel driver for the exhaustive checks. `SPIDER_THREADS` caps the
//! number of worker threads.

use rayon::prelude::*;
use serde::Serialize;
use spider_core::statesum::StateSumError;
use spider_core::verify::{
    all_instances, double_square_parameters, fuzz_invariance, verify_consequences, verify_double_square,
    verify_relation, ConsequenceCheck, FuzzReport, VerificationReport,
};
use spider_core::web::{RelationInstance, RelationKind};

use crate::format::boundary_to_dto;

pub const THREADS_VAR: &str = "SPIDER_THREADS";

/// A pool honoring `SPIDER_THREADS`; rayon's default size otherwise.
pub fn pool() -> rayon::ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = std::env::var(THREADS_VAR).ok().and_then(|v| v.parse::<usize>().ok()) {
        b = b.num_threads(t.max(1));
    }
    b.build().expect("thread pool")
}

/// Which relations to run: `all`, a base name (both variants) or a
/// `_reversed` name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationFilter {
    All,
    Kind { kind: RelationKind, reversed: Option<bool> },
}

impl RelationFilter {
    pub fn parse(s: &str) -> Option<RelationFilter> {
        if s == "all" {
            return Some(RelationFilter::All);
        }
        if let Some(base) = s.strip_suffix("_reversed") {
            return RelationKind::parse(base).map(|kind| RelationFilter::Kind {
                kind,
                reversed: Some(true),
            });
        }
        RelationKind::parse(s).map(|kind| RelationFilter::Kind { kind, reversed: None })
    }

    pub fn accepts(&self, inst: &RelationInstance) -> bool {
        match *self {
            RelationFilter::All => true,
            RelationFilter::Kind { kind, reversed } => {
                inst.kind == kind && reversed.is_none_or(|r| r == inst.reversed)
            }
        }
    }
}

/// Relation instances for every `n`, in catalog order.
pub fn selected_instances(ns: &[u8], filter: &RelationFilter) -> Vec<RelationInstance> {
    ns.iter()
        .flat_map(|&n| all_instances(n))
        .filter(|i| filter.accepts(i))
        .collect()
}

pub fn run_relations(instances: &[RelationInstance]) -> Result<Vec<VerificationReport>, StateSumError> {
    pool().install(|| instances.par_iter().map(verify_relation).collect())
}

/// Saddle, curl, bubble and double-square checks for every `n`.
pub fn run_consequences(ns: &[u8]) -> Result<Vec<ConsequenceCheck>, StateSumError> {
    pool().install(|| {
        let per_n: Vec<Result<Vec<ConsequenceCheck>, StateSumError>> = ns
            .par_iter()
            .map(|&n| {
                let mut out = verify_consequences(n);
                for (k, l) in double_square_parameters(n) {
                    out.push(verify_double_square(n, k, l)?);
                }
                Ok(out)
            })
            .collect();
        per_n.into_iter().try_fold(Vec::new(), |mut acc, r| {
            acc.extend(r?);
            Ok(acc)
        })
    })
}

/// One fuzz run per `n`, seeded by `seed + n`.
pub fn run_fuzz(ns: &[u8], seed: u64, iters: usize, moves: usize, budget: usize) -> Vec<(u8, FuzzReport)> {
    pool().install(|| {
        ns.par_iter()
            .map(|&n| (n, fuzz_invariance(n, seed.wrapping_add(n as u64), iters, moves, budget)))
            .collect()
    })
}

#[derive(Serialize)]
pub struct FailureJson {
    pub boundary: crate::format::BoundaryDto,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Serialize)]
pub struct ReportJson {
    pub relation: String,
    pub n: u8,
    pub params: Vec<u8>,
    pub checked: usize,
    pub skipped: usize,
    pub passed: bool,
    pub failures: Vec<FailureJson>,
}

impl From<&VerificationReport> for ReportJson {
    fn from(r: &VerificationReport) -> Self {
        ReportJson {
            relation: r.relation.clone(),
            n: r.n,
            params: r.params.clone(),
            checked: r.checked,
            skipped: r.skipped,
            passed: r.passed(),
            failures: r
                .failures
                .iter()
                .map(|f| FailureJson {
                    boundary: boundary_to_dto(&f.data),
                    lhs: f.lhs.to_string(),
                    rhs: f.rhs.to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct CheckJson {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl From<&ConsequenceCheck> for CheckJson {
    fn from(c: &ConsequenceCheck) -> Self {
        CheckJson {
            name: c.name.clone(),
            passed: c.passed,
            detail: c.detail.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filters() {
        assert_eq!(RelationFilter::parse("all"), Some(RelationFilter::All));
        assert!(RelationFilter::parse("twist").is_none());
        let only_rev = RelationFilter::parse("digon_reversed").unwrap();
        let insts = selected_instances(&[3], &only_rev);
        assert!(!insts.is_empty() && insts.iter().all(|i| i.reversed));
        let both = selected_instances(&[3], &RelationFilter::parse("digon").unwrap());
        assert_eq!(both.len(), 2 * insts.len());
    }

    #[test]
    fn parallel_matches_sequential() {
        let insts = selected_instances(&[3], &RelationFilter::All);
        let par = run_relations(&insts).unwrap();
        let seq: Vec<_> = insts.iter().map(|i| verify_relation(i).unwrap()).collect();
        assert_eq!(par, seq);
    }
}
