//! Random instances and graphs shared by the integration tests.
#![allow(dead_code)]

use teamcover::graph::{metric_closure, CoordinationGraph};
use teamcover::rng::Rng64;
use teamcover::Instance;

/// Each expert holds each skill with probability `p`; each task requires
/// each skill with probability `p`, redrawn as a single random skill when
/// it comes up empty.
pub fn random_instance(rng: &mut Rng64, n: usize, m: usize, skills: usize, p: f64) -> Instance {
    let mut draw = |force: bool| {
        let mut set: Vec<u32> = (0..skills as u32).filter(|_| rng.next_f64() < p).collect();
        if force && set.is_empty() {
            set.push(rng.below(skills as u64) as u32);
        }
        set
    };
    let experts: Vec<Vec<u32>> = (0..n).map(|_| draw(false)).collect();
    let tasks: Vec<Vec<u32>> = (0..m).map(|_| draw(true)).collect();
    Instance::from_skill_ids(skills, &experts, &tasks).unwrap()
}

/// Instance with `n ∈ 1..=max_n`, `m ∈ 1..=max_m`, `|S| ∈ 1..=max_s`.
pub fn random_small(rng: &mut Rng64, max_n: usize, max_m: usize, max_s: usize) -> Instance {
    let n = 1 + rng.below(max_n as u64) as usize;
    let m = 1 + rng.below(max_m as u64) as usize;
    let s = 1 + rng.below(max_s as u64) as usize;
    let p = 0.25 + 0.5 * rng.next_f64();
    random_instance(rng, n, m, s, p)
}

/// Erdős–Rényi edge set with weights uniform in (0, 1].
pub fn random_edges(rng: &mut Rng64, n: usize, p: f64) -> Vec<(u32, u32, f64)> {
    let mut edges = Vec::new();
    for i in 0..n as u32 {
        for j in i + 1..n as u32 {
            if rng.next_f64() < p {
                edges.push((i, j, 1.0 - rng.next_f64()));
            }
        }
    }
    edges
}

pub fn random_graph(rng: &mut Rng64, n: usize, p: f64) -> CoordinationGraph {
    metric_closure(n, &random_edges(rng, n, p)).unwrap()
}
