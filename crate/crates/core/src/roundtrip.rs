//! The reduction experiment: build the tree drawing of each instance, decide it with
//! the tree search and compare with brute-force satisfiability.

use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cnf::{brute_force_sat, Clause, CnfInstance, Literal};
use crate::error::Result;
use crate::reduction::{assignment_from_tree, build_gamma, witness_tree_from_assignment};
use crate::search::{find_ic_rooted_spanning_tree, verify_ic_rooted_tree, SearchOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundtripRecord {
    pub index: usize,
    pub instance: String,
    pub digest: String,
    pub alpha: usize,
    pub beta: usize,
    pub sat: bool,
    pub tree: Verdict,
    /// `None` when the search ran out of budget.
    pub agree: Option<bool>,
    /// Whether the witness tree of a satisfying assignment verifies and maps back to a
    /// satisfying assignment; `None` for unsatisfiable instances.
    pub witness: Option<bool>,
    pub expansions: u64,
    pub wall_ms: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RoundtripSummary {
    pub total: usize,
    pub agree: usize,
    pub disagree: usize,
    pub unknown: usize,
    pub witness_failures: usize,
}

impl RoundtripSummary {
    pub fn of(records: &[RoundtripRecord]) -> Self {
        let mut s = RoundtripSummary {
            total: records.len(),
            ..Default::default()
        };
        for r in records {
            match r.agree {
                Some(true) => s.agree += 1,
                Some(false) => s.disagree += 1,
                None => s.unknown += 1,
            }
            if r.witness == Some(false) {
                s.witness_failures += 1;
            }
        }
        s
    }

    pub fn all_agree(&self) -> bool {
        self.agree == self.total && self.witness_failures == 0
    }
}

/// Every clause over variables `1..=alpha` with one to three distinct variables, in a
/// fixed order.
pub fn all_clauses(alpha: usize) -> Vec<Clause> {
    let mut out = Vec::new();
    // Each variable is absent, positive or negative.
    let total = 3usize.pow(alpha as u32);
    for code in 1..total {
        let mut clause = Vec::new();
        let mut c = code;
        for var in 1..=alpha {
            match c % 3 {
                1 => clause.push(Literal::positive(var)),
                2 => clause.push(Literal::negative(var)),
                _ => {}
            }
            c /= 3;
        }
        if clause.len() <= 3 {
            out.push(clause);
        }
    }
    out
}

/// All instances with exactly `alpha` variables and `beta` clauses, clauses ordered.
pub fn instances_of_size(alpha: usize, beta: usize) -> Vec<CnfInstance> {
    let clauses = all_clauses(alpha);
    let mut lists: Vec<Vec<Clause>> = vec![Vec::new()];
    for _ in 0..beta {
        lists = lists
            .into_iter()
            .flat_map(|l| {
                clauses.iter().map(move |c| {
                    let mut next = l.clone();
                    next.push(c.clone());
                    next
                })
            })
            .collect();
    }
    lists
        .into_iter()
        .map(|cl| CnfInstance::new(alpha, cl).expect("enumerated clauses are valid"))
        .collect()
}

/// All instances with `1..=alpha_max` variables and `0..=beta_max` clauses.
pub fn enumerate_instances(alpha_max: usize, beta_max: usize) -> Vec<CnfInstance> {
    (1..=alpha_max)
        .flat_map(|a| (0..=beta_max).flat_map(move |b| instances_of_size(a, b)))
        .collect()
}

/// Seeded random instances with `alpha` variables and `beta` clauses of uniformly random
/// width.
pub fn sample_instances(alpha: usize, beta: usize, count: usize, seed: u64) -> Vec<CnfInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let clauses = (0..beta)
                .map(|_| {
                    let width = rng.gen_range(1..=alpha.min(3));
                    let mut vars = sample(&mut rng, alpha, width).into_vec();
                    vars.sort_unstable();
                    vars.into_iter()
                        .map(|v| Literal::new(v + 1, rng.gen_bool(0.5)))
                        .collect()
                })
                .collect();
            CnfInstance::new(alpha, clauses).expect("sampled clauses are valid")
        })
        .collect()
}

/// Runs one instance through the whole pipeline.
pub fn check_instance(index: usize, instance: &CnfInstance, budget: u64) -> Result<RoundtripRecord> {
    let start = Instant::now();
    let gamma = build_gamma(instance)?;
    let root = gamma.layout.root()?;
    let search = find_ic_rooted_spanning_tree(&gamma.drawing, root, budget)?;
    let sat = brute_force_sat(instance)?;
    let tree = match &search.outcome {
        SearchOutcome::Found(t) => {
            if !verify_ic_rooted_tree(&gamma.drawing, t)? {
                return Err(crate::Error::construction("search result", "the found tree fails verification"));
            }
            Verdict::Yes
        }
        SearchOutcome::Absent => Verdict::No,
        SearchOutcome::Unknown => Verdict::Unknown,
    };
    let agree = match tree {
        Verdict::Unknown => None,
        v => Some((v == Verdict::Yes) == sat.is_some()),
    };
    let witness = match &sat {
        Some(asg) => Some(
            witness_tree_from_assignment(&gamma, asg)
                .and_then(|t| assignment_from_tree(&gamma, &t))
                .is_ok_and(|back| back.satisfies(instance)),
        ),
        None => None,
    };
    Ok(RoundtripRecord {
        index,
        instance: instance.to_string(),
        digest: instance.digest(),
        alpha: instance.alpha(),
        beta: instance.beta(),
        sat: sat.is_some(),
        tree,
        agree,
        witness,
        expansions: search.expansions,
        wall_ms: start.elapsed().as_secs_f64() * 1000.0,
    })
}

/// Checks every instance in parallel; records come back in input order.
pub fn run_roundtrip(instances: &[CnfInstance], budget: u64) -> Result<Vec<RoundtripRecord>> {
    instances
        .par_iter()
        .enumerate()
        .map(|(i, inst)| check_instance(i, inst, budget))
        .collect()
}

/// Exhaustive over `alpha <= alpha_max`, `beta <= beta_max` when `samples` is zero,
/// otherwise `samples` seeded instances of exactly that size.
pub fn roundtrip(alpha_max: usize, beta_max: usize, samples: usize, seed: u64, budget: u64) -> Result<Vec<RoundtripRecord>> {
    let instances = if samples == 0 {
        enumerate_instances(alpha_max, beta_max)
    } else {
        sample_instances(alpha_max, beta_max, samples, seed)
    };
    run_roundtrip(&instances, budget)
}
