//! Coverage-loss pruning: trims an assignment until every expert holds at
//! most τ tasks, always dropping the pair whose removal costs the least
//! coverage.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::model::{Assignment, Fraction, Instance};

/// Per-task multiplicity of each required skill among the team members.
struct TaskCounts {
    // skills of the task, increasing id
    skills: Vec<u32>,
    counts: Vec<u32>,
}

impl TaskCounts {
    fn new(instance: &Instance, task: usize, team: &[u32]) -> Self {
        let skills: Vec<u32> = instance.task(task).skills.iter().map(|s| s.0).collect();
        let mut tc = TaskCounts {
            counts: vec![0; skills.len()],
            skills,
        };
        for &i in team {
            tc.apply(instance, i as usize, 1);
        }
        tc
    }

    fn apply(&mut self, instance: &Instance, expert: usize, delta: i32) {
        let e = &instance.expert(expert).skills;
        for (pos, &s) in self.skills.iter().enumerate() {
            if e.contains(crate::skills::SkillId(s)) {
                self.counts[pos] = (self.counts[pos] as i32 + delta) as u32;
            }
        }
    }

    /// Required skills only `expert` covers, over the task size.
    fn loss(&self, instance: &Instance, expert: usize) -> Fraction {
        let e = &instance.expert(expert).skills;
        let unique = self
            .skills
            .iter()
            .zip(&self.counts)
            .filter(|&(&s, &c)| c == 1 && e.contains(crate::skills::SkillId(s)))
            .count();
        Fraction::new(unique as u32, self.skills.len() as u32)
    }
}

/// Removes pairs of overloaded experts in order of increasing coverage
/// loss (ties by smallest `(expert, task)`) until every load is ≤ `tau`.
/// Losses on a task are recomputed after each removal from it. Pairs of
/// experts already within `tau` are never removed.
pub fn team_pruning(instance: &Instance, assignment: &Assignment, tau: u32) -> Assignment {
    let m = instance.num_tasks();
    let mut loads: Vec<u32> = assignment.loads().to_vec();
    if loads.iter().all(|&l| l <= tau) {
        return assignment.clone();
    }
    let mut teams: Vec<Vec<u32>> = (0..m).map(|j| assignment.team(j).to_vec()).collect();
    let mut counts: Vec<Option<TaskCounts>> = (0..m).map(|_| None).collect();
    let mut versions = vec![0u32; m];
    let mut heap = BinaryHeap::new();

    let seed = |j: usize, teams: &[Vec<u32>], counts: &mut [Option<TaskCounts>], loads: &[u32], version: u32, heap: &mut BinaryHeap<_>| {
        let tc = counts[j].get_or_insert_with(|| TaskCounts::new(instance, j, &teams[j]));
        for &i in &teams[j] {
            if loads[i as usize] > tau {
                heap.push(Reverse((tc.loss(instance, i as usize), i, j as u32, version)));
            }
        }
    };
    for j in 0..m {
        if teams[j].iter().any(|&i| loads[i as usize] > tau) {
            seed(j, &teams, &mut counts, &loads, 0, &mut heap);
        }
    }
    while let Some(Reverse((_, i, j, stamp))) = heap.pop() {
        let (e, t) = (i as usize, j as usize);
        if stamp != versions[t] || loads[e] <= tau {
            continue;
        }
        let pos = teams[t].binary_search(&i).expect("queued pair is assigned");
        teams[t].remove(pos);
        loads[e] -= 1;
        if let Some(tc) = counts[t].as_mut() {
            tc.apply(instance, e, -1);
        }
        versions[t] += 1;
        seed(t, &teams, &mut counts, &loads, versions[t], &mut heap);
    }
    Assignment::from_pairs(
        instance,
        teams
            .iter()
            .enumerate()
            .flat_map(|(j, team)| team.iter().map(move |&i| (i as usize, j))),
    )
}
