//! ThresholdGreedy: greedy coverage under a workload cap τ, with τ chosen to
//! maximize `λ·C_τ − τ`, and the λ sweep that reuses a single greedy chain.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::greedy::{greedy_cover, GreedyState};
use crate::model::{Assignment, Coverage, Instance};
use crate::search::{search_thresholds, threshold_objective, SearchMode, Solution};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ChainMode {
    /// One greedy run extended one capacity step at a time, so
    /// `A_1 ⊆ A_2 ⊆ …`.
    #[default]
    WarmStart,
    /// An independent greedy run for every τ.
    Fresh,
}

impl FromStr for ChainMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "warm" | "warm-start" => Ok(ChainMode::WarmStart),
            "fresh" => Ok(ChainMode::Fresh),
            other => Err(Error::invalid(format!("unknown chain mode {other:?}"))),
        }
    }
}

impl fmt::Display for ChainMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChainMode::WarmStart => "warm",
            ChainMode::Fresh => "fresh",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ThresholdOptions {
    pub search: SearchMode,
    pub chain: ChainMode,
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("lambda must be a positive finite number, got {lambda}")))
    }
}

/// Warm-start greedy chain that remembers `C_τ` for every capacity reached.
pub struct GreedyChain<'a> {
    state: GreedyState<'a>,
    coverages: Vec<Coverage>,
}

impl<'a> GreedyChain<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        GreedyChain {
            state: GreedyState::new(instance, 0),
            coverages: vec![Coverage::zero()],
        }
    }

    /// `C_τ`, extending the chain as needed.
    pub fn coverage(&mut self, instance: &Instance, tau: u32) -> &Coverage {
        while self.state.capacity() < tau {
            self.state.extend_capacity();
            self.coverages.push(self.state.assignment().total_coverage(instance));
        }
        &self.coverages[tau as usize]
    }

    pub fn assignment_at(&self, tau: u32) -> Assignment {
        self.state.assignment_at(tau)
    }

    pub fn capacity(&self) -> u32 {
        self.state.capacity()
    }
}

pub fn threshold_greedy(instance: &Instance, lambda: f64, search: SearchMode) -> Result<Solution> {
    threshold_greedy_with(
        instance,
        lambda,
        ThresholdOptions {
            search,
            chain: ChainMode::WarmStart,
        },
    )
}

pub fn threshold_greedy_with(instance: &Instance, lambda: f64, options: ThresholdOptions) -> Result<Solution> {
    check_lambda(lambda)?;
    let m = instance.num_tasks() as u32;
    match options.chain {
        ChainMode::WarmStart => {
            let mut chain = GreedyChain::new(instance);
            let (trace, _) = search_thresholds(m, options.search, lambda, |tau| {
                Ok((chain.coverage(instance, tau).clone(), ()))
            })?;
            Ok(Solution {
                assignment: chain.assignment_at(trace.best_tau),
                trace,
                lambda,
            })
        }
        ChainMode::Fresh => {
            let (trace, best) = search_thresholds(m, options.search, lambda, |tau| {
                let a = greedy_cover(instance, tau);
                Ok((a.total_coverage(instance), a))
            })?;
            Ok(Solution {
                assignment: best.unwrap_or_else(|| Assignment::new(instance)),
                trace,
                lambda,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LambdaRow {
    pub lambda: f64,
    pub best_tau: u32,
    pub coverage: Coverage,
    /// Realized `Lmax` of `A_{best_tau}`.
    pub max_load: u32,
    /// `λ·C_τ − τ` at `best_tau`.
    pub objective: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LambdaSweepReport {
    pub rows: Vec<LambdaRow>,
}

/// Best τ for each λ from a single warm-start chain. `lambdas` must be
/// non-empty, positive, and non-increasing.
pub fn lambda_sweep(instance: &Instance, lambdas: &[f64]) -> Result<LambdaSweepReport> {
    if lambdas.is_empty() {
        return Err(Error::invalid("lambda list is empty"));
    }
    for &l in lambdas {
        check_lambda(l)?;
    }
    if lambdas.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::invalid("lambda list must be sorted in non-increasing order"));
    }
    let m = instance.num_tasks() as u32;
    let mut chain = GreedyChain::new(instance);
    // The largest λ has the latest stopping point; its linear scan records
    // every τ any smaller λ needs.
    search_thresholds(m, SearchMode::Linear, lambdas[0], |tau| {
        Ok((chain.coverage(instance, tau).clone(), ()))
    })?;
    let reached = chain.capacity();
    let rows = lambdas
        .iter()
        .map(|&lambda| {
            let mut best = (0u32, 0.0f64);
            for tau in 1..=reached {
                let f = threshold_objective(lambda, &chain.coverages[tau as usize], tau);
                if f > best.1 {
                    best = (tau, f);
                }
            }
            let a = chain.assignment_at(best.0);
            LambdaRow {
                lambda,
                best_tau: best.0,
                coverage: chain.coverages[best.0 as usize].clone(),
                max_load: a.max_load(),
                objective: best.1,
            }
        })
        .collect();
    Ok(LambdaSweepReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::tiny;
    use crate::model::InstanceBuilder;

    #[test]
    fn tiny_lambda_two() {
        let inst = tiny();
        for search in [SearchMode::Linear, SearchMode::ExpLinear, SearchMode::Full] {
            let s = threshold_greedy(&inst, 2.0, search).unwrap();
            assert_eq!(s.best_tau(), 1);
            assert_eq!(s.trace.best_objective, 3.0);
            assert_eq!(s.assignment.pairs(), vec![(0, 0), (2, 1)]);
            assert_eq!(s.realized_objective(&inst), 3.0);
        }
    }

    #[test]
    fn small_lambda_returns_empty() {
        let inst = tiny();
        let s = threshold_greedy(&inst, 0.4, SearchMode::Linear).unwrap();
        assert_eq!(s.best_tau(), 0);
        assert!(s.assignment.is_empty());
        assert_eq!(s.trace.best_objective, 0.0);
    }

    #[test]
    fn single_task_takes_every_useful_expert() {
        let inst = InstanceBuilder::new()
            .expert("a", &["x"])
            .expert("b", &["y"])
            .expert("c", &["z"])
            .expert("d", &["w"])
            .task("t", &["x", "y", "z"])
            .build()
            .unwrap();
        // At λ = 1 the full team scores 1 − 1 = 0 and ties with the empty
        // assignment, which wins the tie.
        let s = threshold_greedy(&inst, 1.0, SearchMode::ExpLinear).unwrap();
        assert_eq!(s.trace.entries[0].objective, 0.0);
        assert_eq!(s.best_tau(), 0);
        assert_eq!(greedy_cover(&inst, 1).pairs(), vec![(0, 0), (1, 0), (2, 0)]);
        let s = threshold_greedy(&inst, 1.5, SearchMode::ExpLinear).unwrap();
        assert_eq!(s.best_tau(), 1);
        assert_eq!(s.assignment.pairs(), vec![(0, 0), (1, 0), (2, 0)]);
    }

    #[test]
    fn fresh_and_warm_agree_on_tiny() {
        let inst = tiny();
        let warm = threshold_greedy(&inst, 2.0, SearchMode::Full).unwrap();
        let fresh = threshold_greedy_with(
            &inst,
            2.0,
            ThresholdOptions {
                search: SearchMode::Full,
                chain: ChainMode::Fresh,
            },
        )
        .unwrap();
        assert_eq!(warm.assignment, fresh.assignment);
        assert_eq!(warm.trace, fresh.trace);
    }

    #[test]
    fn sweep_on_tiny() {
        let inst = tiny();
        let r = lambda_sweep(&inst, &[4.0, 2.0, 0.4]).unwrap();
        let taus: Vec<u32> = r.rows.iter().map(|row| row.best_tau).collect();
        assert_eq!(taus, vec![1, 1, 0]);
        assert_eq!(r.rows[1].objective, 3.0);
        assert_eq!(r.rows[2].objective, 0.0);
    }

    #[test]
    fn single_lambda_sweep_matches_run() {
        let inst = tiny();
        let r = lambda_sweep(&inst, &[2.0]).unwrap();
        let s = threshold_greedy(&inst, 2.0, SearchMode::Linear).unwrap();
        assert_eq!(r.rows[0].best_tau, s.best_tau());
        assert_eq!(r.rows[0].objective, s.trace.best_objective);
    }

    #[test]
    fn sweep_rejects_bad_lists() {
        let inst = tiny();
        assert!(lambda_sweep(&inst, &[]).is_err());
        assert!(lambda_sweep(&inst, &[1.0, 2.0]).is_err());
        assert!(lambda_sweep(&inst, &[1.0, -1.0]).is_err());
        assert!(threshold_greedy(&inst, 0.0, SearchMode::Linear).is_err());
    }

    #[test]
    fn one_task_sweep() {
        let inst = InstanceBuilder::new()
            .expert("a", &["x"])
            .task("t", &["x"])
            .build()
            .unwrap();
        let r = lambda_sweep(&inst, &[5.0, 2.0, 1.5]).unwrap();
        assert!(r.rows.iter().all(|row| row.best_tau == 1));
    }
}
