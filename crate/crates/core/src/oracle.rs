//! Exhaustive search on small instances.
//!
//! Vertices are coloured in id order and colours tried in list order. After
//! each assignment the search backtracks if a repetition passes through the
//! vertex just coloured, which is exact: in any repetitive colouring the
//! last-coloured vertex of the offending path lies on it.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embed::PlaneGraph;
use crate::engine::{run, EngineError, ListAssignment, Status};
use crate::repetition::{find_repetition_through, verify_facial_nonrepetitive};
use crate::Colour;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_colours: usize,
    pub max_universe: usize,
    pub max_expansions: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_vertices: 12,
            max_colours: 6,
            max_universe: 256,
            max_expansions: 100_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle budget exceeded: {what} is {actual}, limit {limit}")]
    BudgetExceeded {
        what: &'static str,
        actual: u64,
        limit: u64,
    },
    #[error("list assignment covers {lists} vertices, graph has {n}")]
    ListMismatch { lists: usize, n: usize },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum Feasibility {
    Feasible { witness: Vec<Colour> },
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleOutcome {
    #[serde(flatten)]
    pub feasibility: Feasibility,
    pub nodes_expanded: u64,
}

impl OracleOutcome {
    pub fn witness(&self) -> Option<&[Colour]> {
        match &self.feasibility {
            Feasibility::Feasible { witness } => Some(witness),
            Feasibility::Infeasible => None,
        }
    }
}

/// Smallest `k <= k_max` admitting a facial non-repetitive `k`-colouring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiOutcome {
    /// `None` when no `k <= k_max` works.
    pub k: Option<usize>,
    pub k_max: usize,
    pub witness: Option<Vec<Colour>>,
    pub nodes_expanded: u64,
}

fn check(what: &'static str, actual: usize, limit: usize) -> Result<(), OracleError> {
    if actual > limit {
        return Err(OracleError::BudgetExceeded {
            what,
            actual: actual as u64,
            limit: limit as u64,
        });
    }
    Ok(())
}

struct Search<'a> {
    g: &'a PlaneGraph,
    lists: Vec<Vec<Colour>>,
    /// Only try colours up to the largest used so far plus one. Exact when
    /// all lists are `1..=k`, by symmetry of colour names.
    symmetric: bool,
    c: Vec<Colour>,
    nodes: u64,
    cap: u64,
}

impl Search<'_> {
    fn go(&mut self, v: usize, max_used: Colour) -> Result<bool, OracleError> {
        if v == self.g.n() {
            return Ok(true);
        }
        for i in 0..self.lists[v].len() {
            let col = self.lists[v][i];
            if self.symmetric && col > max_used + 1 {
                break;
            }
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(OracleError::BudgetExceeded {
                    what: "node expansions",
                    actual: self.nodes,
                    limit: self.cap,
                });
            }
            self.c[v] = col;
            if find_repetition_through(self.g, &self.c, v).is_none() && self.go(v + 1, max_used.max(col))? {
                return Ok(true);
            }
        }
        self.c[v] = 0;
        Ok(false)
    }
}

fn search(
    g: &PlaneGraph,
    lists: Vec<Vec<Colour>>,
    symmetric: bool,
    budget: &OracleBudget,
) -> Result<OracleOutcome, OracleError> {
    let mut s = Search {
        g,
        lists,
        symmetric,
        c: vec![0; g.n()],
        nodes: 0,
        cap: budget.max_expansions,
    };
    let found = s.go(0, 0)?;
    let feasibility = if found {
        debug_assert!(verify_facial_nonrepetitive(g, &s.c).is_ok());
        Feasibility::Feasible { witness: s.c }
    } else {
        Feasibility::Infeasible
    };
    Ok(OracleOutcome {
        feasibility,
        nodes_expanded: s.nodes,
    })
}

/// Complete search for a colouring from the given lists.
pub fn feasible_for_lists(
    g: &PlaneGraph,
    lists: &ListAssignment,
    budget: &OracleBudget,
) -> Result<OracleOutcome, OracleError> {
    if lists.n() != g.n() {
        return Err(OracleError::ListMismatch {
            lists: lists.n(),
            n: g.n(),
        });
    }
    check("vertex count", g.n(), budget.max_vertices)?;
    let universe: BTreeSet<Colour> = (0..g.n()).flat_map(|v| lists.list(v).iter().copied()).collect();
    check("list universe", universe.len(), budget.max_universe)?;
    let raw = (0..g.n()).map(|v| lists.list(v).to_vec()).collect();
    search(g, raw, false, budget)
}

/// Facial Thue chromatic number by trying `k = 1, 2, .., k_max`.
pub fn pi_f_exact(g: &PlaneGraph, k_max: usize, budget: &OracleBudget) -> Result<PiOutcome, OracleError> {
    check("vertex count", g.n(), budget.max_vertices)?;
    check("colour count", k_max, budget.max_colours)?;
    let mut nodes = 0;
    for k in 1..=k_max {
        let lists = vec![(1..=k as Colour).collect(); g.n()];
        let remaining = OracleBudget {
            max_expansions: budget.max_expansions - nodes,
            ..*budget
        };
        let out = search(g, lists, true, &remaining)?;
        nodes += out.nodes_expanded;
        if let Feasibility::Feasible { witness } = out.feasibility {
            return Ok(PiOutcome {
                k: Some(k),
                k_max,
                witness: Some(witness),
                nodes_expanded: nodes,
            });
        }
    }
    Ok(PiOutcome {
        k: None,
        k_max,
        witness: None,
        nodes_expanded: nodes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EcOracleReport {
    pub oracle: OracleOutcome,
    pub runs: usize,
    pub successes: usize,
    pub exhausted: usize,
    /// Successful runs whose colouring fails the verifier.
    pub invalid_successes: usize,
    /// Runs that succeeded although the oracle says no colouring exists.
    pub contradictions: usize,
}

impl EcOracleReport {
    pub fn consistent(&self) -> bool {
        self.contradictions == 0 && self.invalid_successes == 0
    }
}

/// Runs the engine once per seed and compares against the exact answer.
pub fn ec_vs_oracle(
    g: &PlaneGraph,
    lists: &ListAssignment,
    seeds: &[u64],
    engine_budget: usize,
    budget: &OracleBudget,
) -> Result<EcOracleReport, OracleError> {
    let oracle = feasible_for_lists(g, lists, budget)?;
    let infeasible = oracle.witness().is_none();
    let mut report = EcOracleReport {
        oracle,
        runs: 0,
        successes: 0,
        exhausted: 0,
        invalid_successes: 0,
        contradictions: 0,
    };
    for &seed in seeds {
        let out = run(g, lists, seed, engine_budget)?;
        report.runs += 1;
        match out.status {
            Status::Success => {
                report.successes += 1;
                if verify_facial_nonrepetitive(g, &out.colouring).is_err() {
                    report.invalid_successes += 1;
                }
                if infeasible {
                    report.contradictions += 1;
                }
            }
            Status::Exhausted => report.exhausted += 1,
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> PlaneGraph {
        let rot = (0..n)
            .map(|i| {
                let mut r = Vec::new();
                if i > 0 {
                    r.push(i - 1);
                }
                if i + 1 < n {
                    r.push(i + 1);
                }
                r
            })
            .collect();
        PlaneGraph::new(n, rot).unwrap()
    }

    #[test]
    fn p2_lists() {
        let g = path(2);
        let b = OracleBudget::default();
        let bad = ListAssignment::from_lists(vec![vec![1], vec![1]]).unwrap();
        assert_eq!(
            feasible_for_lists(&g, &bad, &b).unwrap().feasibility,
            Feasibility::Infeasible
        );
        let ok = ListAssignment::new(vec![vec![1], vec![1, 2]], 1).unwrap();
        // Only the first entry of each list is usable at l = 1.
        assert!(feasible_for_lists(&g, &ok, &b).unwrap().witness().is_none());
        let ok = ListAssignment::new(vec![vec![1, 3], vec![1, 2]], 2).unwrap();
        assert_eq!(
            feasible_for_lists(&g, &ok, &b).unwrap().witness(),
            Some(&[1, 2][..])
        );
    }

    #[test]
    fn budget_limits() {
        let b = OracleBudget::default();
        assert!(matches!(
            pi_f_exact(&path(13), 3, &b),
            Err(OracleError::BudgetExceeded {
                what: "vertex count",
                ..
            })
        ));
        assert!(matches!(
            pi_f_exact(&path(3), 7, &b),
            Err(OracleError::BudgetExceeded { .. })
        ));
        let tiny = OracleBudget {
            max_expansions: 3,
            ..b
        };
        assert!(matches!(
            pi_f_exact(&path(6), 3, &tiny),
            Err(OracleError::BudgetExceeded {
                what: "node expansions",
                ..
            })
        ));
    }

    #[test]
    fn small_paths() {
        let b = OracleBudget::default();
        let ks: Vec<_> = (1..=5).map(|n| pi_f_exact(&path(n), 4, &b).unwrap().k).collect();
        assert_eq!(ks, vec![Some(1), Some(2), Some(2), Some(3), Some(3)]);
    }
}
