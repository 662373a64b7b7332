//! NThreshold: radius-bounded team formation. Candidate teams are balls in
//! the coordination graph; for each τ they are matched to tasks, expanded to
//! expert-task pairs, and pruned back to load τ.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{candidate_teams_r, group_teams, split_radii, team_radius, CoordinationGraph, Team};
use crate::matching::{assign_teams_exact_with_caps, assign_teams_greedy_with_caps, CostMatrix};
use crate::model::{team_cover, Assignment, Instance};
use crate::pruning::team_pruning;
use crate::search::{search_thresholds, SearchMode, Solution};
use crate::threshold::check_lambda;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateMode {
    /// One ball of radius r per expert.
    Radius,
    /// Balls at radii r/k, 2r/k, …, r.
    AllRadii { splits: u32 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Matcher {
    #[default]
    Exact,
    Greedy,
}

impl FromStr for Matcher {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "lp" => Ok(Matcher::Exact),
            "greedy" => Ok(Matcher::Greedy),
            other => Err(Error::invalid(format!("unknown matcher {other:?}"))),
        }
    }
}

impl fmt::Display for Matcher {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Matcher::Exact => "exact",
            Matcher::Greedy => "greedy",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NThresholdConfig {
    pub radius: f64,
    pub lambda: f64,
    pub candidates: CandidateMode,
    pub matcher: Matcher,
    pub search: SearchMode,
}

impl NThresholdConfig {
    pub fn new(radius: f64, lambda: f64) -> Self {
        NThresholdConfig {
            radius,
            lambda,
            candidates: CandidateMode::Radius,
            matcher: Matcher::Exact,
            search: SearchMode::ExpLinear,
        }
    }

    /// Variant label such as `NThreshold-R-LP` or `NThreshold-All-Greedy`.
    pub fn variant_name(&self) -> String {
        let c = match self.candidates {
            CandidateMode::Radius => "R",
            CandidateMode::AllRadii { .. } => "All",
        };
        let m = match self.matcher {
            Matcher::Exact => "LP",
            Matcher::Greedy => "Greedy",
        };
        format!("NThreshold-{c}-{m}")
    }
}

#[derive(Clone, Debug)]
pub struct NThresholdOutput {
    pub solution: Solution,
    pub candidates: CandidatePool,
    /// Tasks of the returned assignment whose pruned team had lost its
    /// center and was cut back to a ball of radius r.
    pub repaired_tasks: usize,
}

pub fn nthreshold(instance: &Instance, graph: &CoordinationGraph, config: &NThresholdConfig) -> Result<NThresholdOutput> {
    check_lambda(config.lambda)?;
    if graph.num_experts() != instance.num_experts() {
        return Err(Error::invalid(format!(
            "graph has {} experts, instance has {}",
            graph.num_experts(),
            instance.num_experts()
        )));
    }
    let radii = match config.candidates {
        CandidateMode::Radius => vec![config.radius],
        CandidateMode::AllRadii { splits } => {
            if splits == 0 {
                return Err(Error::invalid("number of radius splits must be at least 1"));
            }
            split_radii(config.radius, splits)
        }
    };
    let mut balls = Vec::new();
    for r in radii {
        balls.extend(candidate_teams_r(graph, r)?);
    }
    let pool = CandidatePool::new(group_teams(balls));
    let members: Vec<&[u32]> = pool.teams.iter().map(|t| t.members.as_slice()).collect();
    let cost = CostMatrix::from_teams(instance, &members)?;

    let m = instance.num_tasks() as u32;
    let (trace, best) = search_thresholds(m, config.search, config.lambda, |tau| {
        let (a, repairs) = assign_prune(instance, graph, &pool, &cost, tau, config);
        Ok((a.total_coverage(instance), (a, repairs)))
    })?;
    let (assignment, repaired_tasks) = best.unwrap_or_else(|| (Assignment::new(instance), 0));
    Ok(NThresholdOutput {
        solution: Solution {
            assignment,
            trace,
            lambda: config.lambda,
        },
        candidates: pool,
        repaired_tasks,
    })
}

/// Distinct candidate teams. A member set produced by several balls is
/// kept once with its multiplicity; at threshold τ it may serve
/// `multiplicity · τ` tasks, exactly what the separate copies could.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidatePool {
    pub teams: Vec<Team>,
    pub multiplicity: Vec<u32>,
}

impl CandidatePool {
    pub fn new(grouped: Vec<(Team, u32)>) -> Self {
        let (teams, multiplicity) = grouped.into_iter().unzip();
        CandidatePool { teams, multiplicity }
    }

    pub fn len(&self) -> usize {
        self.teams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.teams.is_empty()
    }

    pub fn capacities(&self, tau: u32) -> Vec<u32> {
        self.multiplicity.iter().map(|&k| k.saturating_mul(tau)).collect()
    }
}

/// One τ step: match, expand, prune, and restore the radius bound.
pub fn assign_prune(
    instance: &Instance,
    graph: &CoordinationGraph,
    pool: &CandidatePool,
    cost: &CostMatrix,
    tau: u32,
    config: &NThresholdConfig,
) -> (Assignment, usize) {
    let caps = pool.capacities(tau);
    let matching = match config.matcher {
        Matcher::Exact => assign_teams_exact_with_caps(cost, &caps),
        Matcher::Greedy => assign_teams_greedy_with_caps(cost, &caps),
    };
    let mut expanded = Assignment::new(instance);
    for (k, j) in matching.pairs() {
        for &i in &pool.teams[k].members {
            expanded.insert(instance, i as usize, j);
        }
    }
    let mut pruned = team_pruning(instance, &expanded, tau);
    let repairs = repair_radius(instance, graph, &mut pruned, config.radius);
    (pruned, repairs)
}

/// A pruned team may have lost the center that made it a ball of radius r.
/// Such a team is cut down to the best-covering ball `{y : d(x, y) ≤ r}`
/// around one of its remaining members `x` (ties: smallest `x`). Returns the
/// number of tasks changed.
fn repair_radius(instance: &Instance, graph: &CoordinationGraph, assignment: &mut Assignment, r: f64) -> usize {
    let mut repaired = 0;
    for j in 0..instance.num_tasks() {
        let team = assignment.team(j).to_vec();
        if team.is_empty() || team_radius(&team, graph).0 <= r {
            continue;
        }
        let mut best: Option<(usize, Vec<u32>)> = None;
        for &x in &team {
            let ball: Vec<u32> = team
                .iter()
                .copied()
                .filter(|&y| graph.distance(x as usize, y as usize) <= r)
                .collect();
            let covered = team_cover(instance, j, ball.iter().map(|&i| i as usize)).len();
            if best.as_ref().is_none_or(|(c, _)| covered > *c) {
                best = Some((covered, ball));
            }
        }
        let (_, keep) = best.expect("team is non-empty");
        for &i in &team {
            if keep.binary_search(&i).is_err() {
                assignment.remove(instance, i as usize, j);
            }
        }
        repaired += 1;
    }
    repaired
}
