//! Search over workload thresholds τ, shared by the balanced and network
//! solvers and the individual-assignment baseline.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{Assignment, Coverage, Instance};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SearchMode {
    /// τ = 1, 2, … stopping at the first strict decrease of F_τ.
    Linear,
    /// Probes τ = 1, 2, 4, … until F drops, then a linear scan of the
    /// bracket.
    #[default]
    ExpLinear,
    /// Every τ in 1..=m, no early termination.
    Full,
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(SearchMode::Linear),
            "exp-linear" | "exp_linear" => Ok(SearchMode::ExpLinear),
            "full" => Ok(SearchMode::Full),
            other => Err(Error::invalid(format!("unknown search mode {other:?}"))),
        }
    }
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchMode::Linear => "linear",
            SearchMode::ExpLinear => "exp-linear",
            SearchMode::Full => "full",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceEntry {
    pub tau: u32,
    pub coverage: Coverage,
    /// `λ·C_τ − τ`.
    pub objective: f64,
}

/// Every visited τ in increasing order, plus the winner. `best_tau = 0`
/// means the empty assignment (F = 0) won.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdTrace {
    pub entries: Vec<TraceEntry>,
    pub best_tau: u32,
    pub best_objective: f64,
}

/// Output of a τ-searching solver.
#[derive(Clone, Debug)]
pub struct Solution {
    pub assignment: Assignment,
    pub trace: ThresholdTrace,
    pub lambda: f64,
}

impl Solution {
    pub fn best_tau(&self) -> u32 {
        self.trace.best_tau
    }

    pub fn coverage(&self, instance: &Instance) -> Coverage {
        self.assignment.total_coverage(instance)
    }

    pub fn realized_lmax(&self) -> u32 {
        self.assignment.max_load()
    }

    /// `λ·C − Lmax` of the returned assignment.
    pub fn realized_objective(&self, instance: &Instance) -> f64 {
        self.assignment.objective(instance, self.lambda)
    }
}

pub(crate) fn threshold_objective(lambda: f64, coverage: &Coverage, tau: u32) -> f64 {
    lambda * coverage.to_f64() - tau as f64
}

struct Driver<T, F> {
    lambda: f64,
    eval: F,
    seen: BTreeMap<u32, (Coverage, f64)>,
    best_tau: u32,
    best_objective: f64,
    best: Option<T>,
}

impl<T, F: FnMut(u32) -> Result<(Coverage, T)>> Driver<T, F> {
    fn value(&mut self, tau: u32) -> Result<f64> {
        if let Some(&(_, f)) = self.seen.get(&tau) {
            return Ok(f);
        }
        let (coverage, payload) = (self.eval)(tau)?;
        let f = threshold_objective(self.lambda, &coverage, tau);
        self.seen.insert(tau, (coverage, f));
        if f > self.best_objective || (f == self.best_objective && tau < self.best_tau) {
            self.best_tau = tau;
            self.best_objective = f;
            self.best = Some(payload);
        }
        Ok(f)
    }

    /// Consecutive scan over `from..=to`, stopping at the first strict
    /// decrease relative to the previous τ.
    fn scan(&mut self, from: u32, to: u32) -> Result<()> {
        let mut prev = if from > 1 { Some(self.value(from - 1)?) } else { None };
        for tau in from..=to {
            let f = self.value(tau)?;
            if prev.is_some_and(|p| f < p) {
                break;
            }
            prev = Some(f);
        }
        Ok(())
    }
}

/// Runs the τ search. `eval(τ)` must return `C_τ` and a payload (usually the
/// assignment); only the incumbent's payload is kept. `None` means the
/// empty assignment is best. Ties in F prefer the smaller τ.
pub fn search_thresholds<T, F>(
    max_tau: u32,
    mode: SearchMode,
    lambda: f64,
    eval: F,
) -> Result<(ThresholdTrace, Option<T>)>
where
    F: FnMut(u32) -> Result<(Coverage, T)>,
{
    let mut d = Driver {
        lambda,
        eval,
        seen: BTreeMap::new(),
        best_tau: 0,
        best_objective: 0.0,
        best: None,
    };
    if max_tau > 0 {
        match mode {
            SearchMode::Full => {
                for tau in 1..=max_tau {
                    d.value(tau)?;
                }
            }
            SearchMode::Linear => d.scan(1, max_tau)?,
            SearchMode::ExpLinear => {
                // probes[k] = (τ, F_τ) for τ = 1, 2, 4, …, capped at max_tau
                let mut probes: Vec<(u32, f64)> = Vec::new();
                let mut hi = max_tau;
                let mut p = 1u32;
                loop {
                    let f = d.value(p)?;
                    if probes.last().is_some_and(|&(_, q)| f < q) {
                        hi = p - 1;
                        break;
                    }
                    probes.push((p, f));
                    if p == max_tau {
                        break;
                    }
                    p = p.saturating_mul(2).min(max_tau);
                }
                // Up to the drop, probe values are non-decreasing. The
                // smallest τ attaining the peak lies past the last probe
                // strictly below the final pre-drop probe.
                let top = probes.last().map(|&(_, f)| f).unwrap_or(f64::NEG_INFINITY);
                let lo = probes
                    .iter()
                    .rev()
                    .find(|&&(_, f)| f < top)
                    .map(|&(t, _)| t)
                    .unwrap_or(0);
                d.scan(lo + 1, hi)?;
            }
        }
    }
    let entries = d
        .seen
        .into_iter()
        .map(|(tau, (coverage, objective))| TraceEntry {
            tau,
            coverage,
            objective,
        })
        .collect();
    Ok((
        ThresholdTrace {
            entries,
            best_tau: d.best_tau,
            best_objective: d.best_objective,
        },
        d.best,
    ))
}
