//! Comparison algorithms: TaskGreedy, NoUpdateGreedy and GreedyIndividual.

use crate::error::{Error, Result};
use crate::graph::CoordinationGraph;
use crate::model::{Assignment, Fraction, Instance};
use crate::rng::Rng64;
use crate::search::{search_thresholds, SearchMode, Solution};
use crate::threshold::check_lambda;

/// Gain floors tried when tuning β.
pub const BETA_GRID: [f64; 5] = [0.0, 0.1, 0.2, 0.3, 0.5];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BaselineConfig {
    /// A pair is added only if its gain is strictly greater than `beta`.
    pub beta: f64,
    pub seed: u64,
    pub tau: Option<u32>,
    pub radius: Option<f64>,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        BaselineConfig {
            beta: 0.0,
            seed: 0,
            tau: None,
            radius: None,
        }
    }
}

impl BaselineConfig {
    fn check(&self) -> Result<()> {
        if self.beta.is_nan() || self.beta < 0.0 {
            return Err(Error::invalid(format!("beta must be non-negative, got {}", self.beta)));
        }
        Ok(())
    }
}

fn above(gain: Fraction, beta: f64) -> bool {
    !gain.is_zero() && gain.to_f64() > beta
}

/// Tasks in index order; each task repeatedly takes the expert with the
/// largest coverage gain on it while that gain exceeds β. Experts are
/// scanned in a per-task seeded shuffle, which decides ties.
pub fn task_greedy(instance: &Instance, config: &BaselineConfig) -> Result<Assignment> {
    config.check()?;
    let mut rng = Rng64::new(config.seed);
    let mut a = Assignment::new(instance);
    let mut order: Vec<u32> = (0..instance.num_experts() as u32).collect();
    for j in 0..instance.num_tasks() {
        order.sort_unstable();
        rng.shuffle(&mut order);
        loop {
            let mut best: Option<(Fraction, u32)> = None;
            for &i in &order {
                if a.contains(i as usize, j) {
                    continue;
                }
                let g = a.marginal_gain(instance, i as usize, j);
                if best.is_none_or(|(b, _)| g > b) {
                    best = Some((g, i));
                }
            }
            match best {
                Some((g, i)) if above(g, config.beta) => {
                    a.insert(instance, i as usize, j);
                }
                _ => break,
            }
        }
    }
    Ok(a)
}

/// Pairs with static gain `v(i, j)` (gain against the empty assignment)
/// sorted by decreasing `v`, ties by `(expert, task)`.
fn static_order(instance: &Instance, beta: f64) -> Vec<(Fraction, u32, u32)> {
    let mut pairs = Vec::new();
    for (j, experts) in instance.relevant_experts().into_iter().enumerate() {
        for i in experts {
            let v = instance.static_gain(i as usize, j);
            if above(v, beta) {
                pairs.push((v, i, j as u32));
            }
        }
    }
    pairs.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    pairs
}

/// Every pair whose static gain exceeds β; gains are never updated.
pub fn no_update_greedy(instance: &Instance, config: &BaselineConfig) -> Result<Assignment> {
    config.check()?;
    let mut a = Assignment::new(instance);
    for (_, i, j) in static_order(instance, config.beta) {
        a.insert(instance, i as usize, j as usize);
    }
    Ok(a)
}

/// Pairs in static-gain order; a pair is kept if the expert's load stays
/// within τ and the expert is within distance r of every expert already on
/// the task. Requires `tau` and `radius`.
pub fn greedy_individual(instance: &Instance, graph: &CoordinationGraph, config: &BaselineConfig) -> Result<Assignment> {
    config.check()?;
    let tau = config.tau.ok_or_else(|| Error::invalid("greedy-individual requires tau"))?;
    let r = config.radius.ok_or_else(|| Error::invalid("greedy-individual requires a radius"))?;
    check_graph(instance, graph)?;
    Ok(individual_pass(instance, graph, &static_order(instance, config.beta), tau, r))
}

fn check_graph(instance: &Instance, graph: &CoordinationGraph) -> Result<()> {
    if graph.num_experts() != instance.num_experts() {
        return Err(Error::invalid(format!(
            "graph has {} experts, instance has {}",
            graph.num_experts(),
            instance.num_experts()
        )));
    }
    Ok(())
}

fn individual_pass(
    instance: &Instance,
    graph: &CoordinationGraph,
    order: &[(Fraction, u32, u32)],
    tau: u32,
    r: f64,
) -> Assignment {
    let mut a = Assignment::new(instance);
    for &(_, i, j) in order {
        let (e, t) = (i as usize, j as usize);
        if a.load(e) < tau && a.team(t).iter().all(|&x| graph.distance(e, x as usize) <= r) {
            a.insert(instance, e, t);
        }
    }
    a
}

/// GreedyIndividual with τ chosen by the threshold search on `λ·C − τ`.
pub fn greedy_individual_search(
    instance: &Instance,
    graph: &CoordinationGraph,
    lambda: f64,
    radius: f64,
    beta: f64,
    search: SearchMode,
) -> Result<Solution> {
    check_lambda(lambda)?;
    BaselineConfig {
        beta,
        ..Default::default()
    }
    .check()?;
    check_graph(instance, graph)?;
    let order = static_order(instance, beta);
    let (trace, best) = search_thresholds(instance.num_tasks() as u32, search, lambda, |tau| {
        let a = individual_pass(instance, graph, &order, tau, radius);
        Ok((a.total_coverage(instance), a))
    })?;
    Ok(Solution {
        assignment: best.unwrap_or_else(|| Assignment::new(instance)),
        trace,
        lambda,
    })
}

/// Runs `solve` for every β in `grid` and keeps the assignment with the
/// largest `λ·C − Lmax` (ties: earlier β).
pub fn best_over_betas<F>(instance: &Instance, lambda: f64, grid: &[f64], mut solve: F) -> Result<(f64, Assignment)>
where
    F: FnMut(f64) -> Result<Assignment>,
{
    let mut best: Option<(f64, f64, Assignment)> = None;
    for &beta in grid {
        let a = solve(beta)?;
        let f = a.objective(instance, lambda);
        if best.as_ref().is_none_or(|(_, bf, _)| f > *bf) {
            best = Some((beta, f, a));
        }
    }
    let (beta, _, a) = best.ok_or_else(|| Error::invalid("beta grid is empty"))?;
    Ok((beta, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::metric_closure;
    use crate::greedy::greedy_cover;
    use crate::model::fixtures::tiny;

    fn complete(n: usize, w: f64) -> CoordinationGraph {
        let mut edges = Vec::new();
        for i in 0..n as u32 {
            for j in i + 1..n as u32 {
                edges.push((i, j, w));
            }
        }
        metric_closure(n, &edges).unwrap()
    }

    fn with_beta(beta: f64) -> BaselineConfig {
        BaselineConfig {
            beta,
            ..Default::default()
        }
    }

    #[test]
    fn beta_one_gives_empty() {
        let inst = tiny();
        assert!(task_greedy(&inst, &with_beta(1.0)).unwrap().is_empty());
        assert!(no_update_greedy(&inst, &with_beta(1.0)).unwrap().is_empty());
    }

    #[test]
    fn task_greedy_covers_tiny_for_every_seed() {
        let inst = tiny();
        for seed in 0..20 {
            let a = task_greedy(
                &inst,
                &BaselineConfig {
                    seed,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(a.total_coverage(&inst).to_f64(), 2.0);
        }
    }

    #[test]
    fn task_greedy_single_task_matches_greedy_cover() {
        let inst = Instance::from_skill_ids(
            5,
            &[vec![0, 1], vec![1, 2, 3], vec![4], vec![0]],
            &[vec![0, 1, 2, 3, 4]],
        )
        .unwrap();
        let a = task_greedy(&inst, &with_beta(0.0)).unwrap();
        let g = greedy_cover(&inst, 1);
        // equal gains may be broken differently, coverage and size agree
        assert_eq!(a.total_coverage(&inst), g.total_coverage(&inst));
        assert_eq!(a.len(), g.len());
    }

    #[test]
    fn no_update_keeps_redundant_pairs() {
        let inst = tiny();
        let a = no_update_greedy(&inst, &with_beta(0.0)).unwrap();
        // X3 = {a,c,d} has static gain 1/2 on J1 = {a,b}
        assert!(a.contains(2, 0));
        assert_eq!(a.pairs(), vec![(0, 0), (1, 1), (2, 0), (2, 1)]);
    }

    #[test]
    fn no_update_on_disjoint_skills_matches_greedy() {
        let inst = Instance::from_skill_ids(4, &[vec![0], vec![1], vec![2, 3]], &[vec![0, 1], vec![2, 3]]).unwrap();
        let a = no_update_greedy(&inst, &with_beta(0.0)).unwrap();
        assert_eq!(a, greedy_cover(&inst, 2));
    }

    #[test]
    fn individual_constraints() {
        let inst = tiny();
        let far = complete(3, 1.0);
        let cfg = BaselineConfig {
            tau: Some(2),
            radius: Some(0.5),
            ..Default::default()
        };
        let a = greedy_individual(&inst, &far, &cfg).unwrap();
        assert!((0..2).all(|j| a.team(j).len() <= 1));

        let near = complete(3, 0.1);
        let cfg = BaselineConfig {
            tau: Some(2),
            radius: Some(0.5),
            ..Default::default()
        };
        let a = greedy_individual(&inst, &near, &cfg).unwrap();
        assert_eq!(a, no_update_greedy(&inst, &with_beta(0.0)).unwrap());

        let cfg = BaselineConfig { tau: Some(1), ..cfg };
        let a = greedy_individual(&inst, &near, &cfg).unwrap();
        assert!(a.max_load() <= 1);
        assert!(greedy_individual(&inst, &near, &with_beta(0.0)).is_err());
    }

    #[test]
    fn individual_search_respects_radius() {
        let inst = tiny();
        let g = complete(3, 0.1);
        let s = greedy_individual_search(&inst, &g, 2.0, 0.5, 0.0, SearchMode::ExpLinear).unwrap();
        assert!(s.realized_lmax() <= s.best_tau());
        assert_eq!(s.trace.best_objective, 3.0);
    }

    #[test]
    fn beta_selection() {
        let inst = tiny();
        let (beta, a) = best_over_betas(&inst, 2.0, &BETA_GRID, |b| no_update_greedy(&inst, &with_beta(b))).unwrap();
        // β = 0.5 drops the half-gain pairs and leaves the optimal pair set
        assert_eq!(beta, 0.5);
        assert_eq!(a.pairs(), vec![(0, 0), (2, 1)]);
    }

    #[test]
    fn rejects_negative_beta() {
        assert!(task_greedy(&tiny(), &with_beta(-0.1)).is_err());
    }
}
