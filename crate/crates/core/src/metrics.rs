//! Team characteristics of an assignment: size, radius, density and mean
//! pairwise distance per task team, plus averages over non-empty teams.

use crate::error::{Error, Result};
use crate::graph::{team_radius, CoordinationGraph};
use crate::model::{Assignment, Instance};

#[derive(Clone, Debug, PartialEq)]
pub struct TeamRow {
    pub task: usize,
    pub size: usize,
    pub radius: f64,
    /// `1 + Σ(degree in the team-induced subgraph) / size`, unweighted,
    /// over the input edges.
    pub density: f64,
    /// Mean closure distance over member pairs; `None` for singletons.
    pub pairwise: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TeamReport {
    /// Non-empty teams only.
    pub rows: Vec<TeamRow>,
    pub avg_size: f64,
    pub max_size: usize,
    pub avg_radius: f64,
    pub avg_density: f64,
    /// Mean of `pairwise` over teams with at least two members.
    pub avg_pairwise: Option<f64>,
    /// Non-empty teams left out of `avg_pairwise`.
    pub excluded_from_pairwise: usize,
}

pub fn team_characteristics(
    assignment: &Assignment,
    instance: &Instance,
    graph: &CoordinationGraph,
) -> Result<TeamReport> {
    if graph.num_experts() != instance.num_experts() {
        return Err(Error::invalid(format!(
            "graph has {} experts, instance has {}",
            graph.num_experts(),
            instance.num_experts()
        )));
    }
    let mut rows = Vec::new();
    for j in 0..instance.num_tasks() {
        let team = assignment.team(j);
        if team.is_empty() {
            continue;
        }
        let size = team.len();
        let mut degree_sum = 0usize;
        let mut dist_sum = 0.0;
        for (k, &a) in team.iter().enumerate() {
            for &b in &team[k + 1..] {
                if graph.adjacent(a as usize, b as usize) {
                    degree_sum += 2;
                }
                dist_sum += graph.distance(a as usize, b as usize);
            }
        }
        let pair_count = size * (size - 1) / 2;
        rows.push(TeamRow {
            task: j,
            size,
            radius: team_radius(team, graph).0,
            density: 1.0 + degree_sum as f64 / size as f64,
            pairwise: (pair_count > 0).then(|| dist_sum / pair_count as f64),
        });
    }
    let count = rows.len();
    let mean = |f: &dyn Fn(&TeamRow) -> f64| {
        if count == 0 {
            0.0
        } else {
            rows.iter().map(f).sum::<f64>() / count as f64
        }
    };
    let pairwise: Vec<f64> = rows.iter().filter_map(|r| r.pairwise).collect();
    Ok(TeamReport {
        avg_size: mean(&|r| r.size as f64),
        max_size: rows.iter().map(|r| r.size).max().unwrap_or(0),
        avg_radius: mean(&|r| r.radius),
        avg_density: mean(&|r| r.density),
        avg_pairwise: (!pairwise.is_empty()).then(|| pairwise.iter().sum::<f64>() / pairwise.len() as f64),
        excluded_from_pairwise: count - pairwise.len(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::metric_closure;

    fn two_on_one_task() -> Instance {
        Instance::from_skill_ids(2, &[vec![0], vec![1], vec![0]], &[vec![0, 1], vec![0]]).unwrap()
    }

    #[test]
    fn singletons() {
        let inst = two_on_one_task();
        let g = metric_closure(3, &[(0, 1, 0.2)]).unwrap();
        let a = Assignment::from_pairs(&inst, [(0, 0), (2, 1)]);
        let r = team_characteristics(&a, &inst, &g).unwrap();
        assert_eq!(r.avg_size, 1.0);
        assert_eq!(r.avg_radius, 0.0);
        assert_eq!(r.avg_density, 1.0);
        assert_eq!(r.avg_pairwise, None);
        assert_eq!(r.excluded_from_pairwise, 2);
    }

    #[test]
    fn adjacent_pair() {
        let inst = two_on_one_task();
        let g = metric_closure(3, &[(0, 1, 0.2)]).unwrap();
        let a = Assignment::from_pairs(&inst, [(0, 0), (1, 0)]);
        let r = team_characteristics(&a, &inst, &g).unwrap();
        let row = &r.rows[0];
        assert_eq!((row.size, row.radius, row.density, row.pairwise), (2, 0.2, 2.0, Some(0.2)));
        assert_eq!(r.max_size, 2);
    }

    #[test]
    fn non_adjacent_pair() {
        let inst = two_on_one_task();
        let g = metric_closure(3, &[(0, 2, 0.25), (2, 1, 0.25)]).unwrap();
        let a = Assignment::from_pairs(&inst, [(0, 0), (1, 0)]);
        let row = &team_characteristics(&a, &inst, &g).unwrap().rows[0];
        assert_eq!(row.density, 1.0);
        assert_eq!(row.pairwise, Some(0.5));
    }

    #[test]
    fn empty_assignment() {
        let inst = two_on_one_task();
        let g = metric_closure(3, &[]).unwrap();
        let r = team_characteristics(&Assignment::new(&inst), &inst, &g).unwrap();
        assert!(r.rows.is_empty());
        assert_eq!((r.avg_size, r.max_size, r.avg_pairwise), (0.0, 0, None));
    }
}
