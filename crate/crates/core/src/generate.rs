//! Synthetic instances and coordination-graph builders.

use crate::error::{Error, Result};
use crate::model::{Instance, InstanceBuilder};
use crate::rng::Rng64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorParams {
    pub experts: usize,
    pub tasks: usize,
    pub skills: usize,
    /// Mean skills per expert.
    pub skills_per_expert: f64,
    /// Mean skills per task.
    pub skills_per_task: f64,
    pub seed: u64,
}

/// `floor(mean)` plus one with probability `frac(mean)`.
fn sample_size(rng: &mut Rng64, mean: f64) -> usize {
    let base = mean.floor();
    base as usize + usize::from(rng.next_f64() < mean - base)
}

/// `k` distinct ids from `0..universe`, increasing.
fn sample_ids(rng: &mut Rng64, universe: usize, k: usize, pool: &mut [u32]) -> Vec<u32> {
    for (i, x) in pool.iter_mut().enumerate() {
        *x = i as u32;
    }
    for i in 0..k {
        let j = i + rng.below((universe - i) as u64) as usize;
        pool.swap(i, j);
    }
    let mut out = pool[..k].to_vec();
    out.sort_unstable();
    out
}

/// Random instance: expert `i` is `e{i}`, task `j` is `t{j}`, skills are
/// `s{k}`. Set sizes are drawn around the requested means and skills are
/// sampled uniformly without replacement. Tasks get at least one skill.
pub fn generate_instance(params: &GeneratorParams) -> Result<Instance> {
    let p = params;
    if p.experts == 0 || p.tasks == 0 || p.skills == 0 {
        return Err(Error::invalid("experts, tasks and skills must all be positive"));
    }
    for (what, mean) in [("skills per expert", p.skills_per_expert), ("skills per task", p.skills_per_task)] {
        if !(mean.is_finite() && mean > 0.0) {
            return Err(Error::invalid(format!("{what} must be positive, got {mean}")));
        }
        if mean.ceil() > p.skills as f64 {
            return Err(Error::invalid(format!("{what} = {mean} exceeds {} skills", p.skills)));
        }
    }
    let mut rng = Rng64::new(p.seed);
    let mut pool = vec![0u32; p.skills];
    let names: Vec<String> = (0..p.skills).map(|k| format!("s{k}")).collect();
    let mut b = InstanceBuilder::new();
    for i in 0..p.experts {
        let k = sample_size(&mut rng, p.skills_per_expert);
        let ids = sample_ids(&mut rng, p.skills, k, &mut pool);
        let skills: Vec<&str> = ids.iter().map(|&s| names[s as usize].as_str()).collect();
        b.expert(&format!("e{i}"), &skills);
    }
    for j in 0..p.tasks {
        let k = sample_size(&mut rng, p.skills_per_task).max(1);
        let ids = sample_ids(&mut rng, p.skills, k, &mut pool);
        let skills: Vec<&str> = ids.iter().map(|&s| names[s as usize].as_str()).collect();
        b.task(&format!("t{j}"), &skills);
    }
    b.build()
}

/// Edge weight `e^{−f·D}` for each co-occurrence count `D`.
pub fn build_cooccurrence_graph(pair_counts: &[(u32, u32, f64)], f: f64) -> Result<Vec<(u32, u32, f64)>> {
    if !(f.is_finite() && f >= 0.0) {
        return Err(Error::invalid(format!("decay f must be non-negative, got {f}")));
    }
    pair_counts
        .iter()
        .map(|&(i, j, d)| {
            if d.is_nan() || d <= 0.0 {
                return Err(Error::invalid(format!("co-occurrence count for ({i}, {j}) must be positive, got {d}")));
            }
            Ok((i, j, (-f * d).exp()))
        })
        .collect()
}

/// Complete graph with Jaccard distances between expert skill sets. Two
/// empty sets are at distance 1.
pub fn build_jaccard_graph(instance: &Instance) -> Vec<(u32, u32, f64)> {
    let experts = instance.experts();
    let mut edges = Vec::with_capacity(experts.len() * experts.len().saturating_sub(1) / 2);
    for (i, a) in experts.iter().enumerate() {
        for (j, b) in experts.iter().enumerate().skip(i + 1) {
            let union = a.skills.union_len(&b.skills);
            let w = if union == 0 {
                1.0
            } else {
                1.0 - a.skills.intersection_len(&b.skills) as f64 / union as f64
            };
            edges.push((i as u32, j as u32, w));
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(seed: u64) -> GeneratorParams {
        GeneratorParams {
            experts: 30,
            tasks: 40,
            skills: 12,
            skills_per_expert: 2.2,
            skills_per_task: 2.0,
            seed,
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(generate_instance(&params(5)).unwrap(), generate_instance(&params(5)).unwrap());
        assert_ne!(generate_instance(&params(5)).unwrap(), generate_instance(&params(6)).unwrap());
    }

    #[test]
    fn sizes_track_means() {
        let mut p = params(1);
        p.experts = 2000;
        p.tasks = 2000;
        let inst = generate_instance(&p).unwrap();
        let avg_e = inst.experts().iter().map(|e| e.skills.len()).sum::<usize>() as f64 / 2000.0;
        let avg_t = inst.tasks().iter().map(|t| t.skills.len()).sum::<usize>() as f64 / 2000.0;
        assert!((avg_e - 2.2).abs() < 0.05, "{avg_e}");
        assert!((avg_t - 2.0).abs() < 0.05, "{avg_t}");
    }

    #[test]
    fn full_skill_experts_cover_everything() {
        let mut p = params(2);
        p.skills_per_expert = 12.0;
        let inst = generate_instance(&p).unwrap();
        for e in inst.experts() {
            for t in inst.tasks() {
                assert_eq!(e.skills.intersection_len(&t.skills), t.skills.len());
            }
        }
    }

    #[test]
    fn infeasible_parameters() {
        let mut p = params(0);
        p.skills_per_task = 12.5;
        assert!(generate_instance(&p).is_err());
        let mut p = params(0);
        p.tasks = 0;
        assert!(generate_instance(&p).is_err());
    }

    #[test]
    fn cooccurrence_weights() {
        let e = build_cooccurrence_graph(&[(0, 1, 10.0), (1, 2, 500.0)], 0.1).unwrap();
        assert!((e[0].2 - (-1.0f64).exp()).abs() < 1e-15);
        assert!((e[0].2 - 0.367879).abs() < 1e-6);
        assert!(e[1].2 < 1e-20);
        let flat = build_cooccurrence_graph(&[(0, 1, 3.0)], 0.0).unwrap();
        assert_eq!(flat[0].2, 1.0);
        assert!(build_cooccurrence_graph(&[(0, 1, 0.0)], 0.1).is_err());
    }

    #[test]
    fn jaccard_weights() {
        let inst = Instance::from_skill_ids(
            4,
            &[vec![0, 1], vec![1, 2], vec![0, 1], vec![3], vec![], vec![]],
            &[vec![0]],
        )
        .unwrap();
        let e = build_jaccard_graph(&inst);
        let w = |i: u32, j: u32| e.iter().find(|x| x.0 == i && x.1 == j).unwrap().2;
        assert!((w(0, 1) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(w(0, 2), 0.0);
        assert_eq!(w(0, 3), 1.0);
        assert_eq!(w(4, 5), 1.0);
        assert_eq!(e.len(), 15);
    }
}
