//! Exhaustive reference solvers for tiny instances.
//!
//! Everything here works on its own `u64` skill masks and integer
//! arithmetic, independent of the solver code paths it is used to check.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::matching::{CostMatrix, DualCertificate, TeamTaskMatching};
use crate::model::{Assignment, Instance};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    /// Largest `n·m` for subset enumeration.
    pub max_pairs: usize,
    /// Largest number of team-to-task maps to enumerate.
    pub max_matchings: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_pairs: 16,
            max_matchings: 2_000_000,
        }
    }
}

/// Skill masks and exact coverage weights of a small instance.
struct Small {
    n: usize,
    m: usize,
    experts: Vec<u64>,
    tasks: Vec<u64>,
    // coverage of task j in units of 1/denom is popcount * weight[j]
    weight: Vec<u64>,
    denom: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Small {
    fn new(instance: &Instance) -> Result<Self> {
        if instance.num_skills() > 64 {
            return Err(Error::TooLarge(format!(
                "{} skills; oracles support at most 64",
                instance.num_skills()
            )));
        }
        let mask = |ids: &crate::skills::SkillSet| ids.iter().fold(0u64, |acc, s| acc | 1 << s.0);
        let experts: Vec<u64> = instance.experts().iter().map(|e| mask(&e.skills)).collect();
        let tasks: Vec<u64> = instance.tasks().iter().map(|t| mask(&t.skills)).collect();
        let mut denom = 1u64;
        for &t in &tasks {
            let size = t.count_ones() as u64;
            denom = denom / gcd(denom, size) * size;
        }
        let weight = tasks.iter().map(|t| denom / t.count_ones() as u64).collect();
        Ok(Small {
            n: experts.len(),
            m: tasks.len(),
            experts,
            tasks,
            weight,
            denom,
        })
    }

    fn pairs(&self, limits: &OracleLimits) -> Result<usize> {
        let p = self.n * self.m;
        if p > limits.max_pairs || p >= 64 {
            return Err(Error::TooLarge(format!("{p} expert-task pairs, limit {}", limits.max_pairs)));
        }
        Ok(p)
    }

    /// (scaled coverage, max load) of the pair set `mask`; pair `p` is
    /// expert `p / m`, task `p % m`.
    fn evaluate(&self, mask: u64) -> (u64, u32) {
        let mut covered = vec![0u64; self.m];
        let mut loads = vec![0u32; self.n];
        let mut bits = mask;
        while bits != 0 {
            let p = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (i, j) = (p / self.m, p % self.m);
            covered[j] |= self.experts[i];
            loads[i] += 1;
        }
        let c = (0..self.m)
            .map(|j| (covered[j] & self.tasks[j]).count_ones() as u64 * self.weight[j])
            .sum();
        (c, loads.into_iter().max().unwrap_or(0))
    }

    fn to_assignment(&self, instance: &Instance, mask: u64) -> Assignment {
        let pairs = (0..self.n * self.m)
            .filter(|&p| mask & (1 << p) != 0)
            .map(|p| (p / self.m, p % self.m));
        Assignment::from_pairs(instance, pairs)
    }
}

/// Lexicographic order of the increasing pair lists encoded by two masks.
fn lex_cmp(a: u64, b: u64) -> Ordering {
    let (mut x, mut y) = (a, b);
    loop {
        match (x == 0, y == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (px, py) = (x.trailing_zeros(), y.trailing_zeros());
        if px != py {
            return px.cmp(&py);
        }
        x &= x - 1;
        y &= y - 1;
    }
}

struct Best {
    mask: u64,
    value: f64,
}

impl Best {
    fn offer(&mut self, mask: u64, value: f64) {
        let tie_break = mask
            .count_ones()
            .cmp(&self.mask.count_ones())
            .then_with(|| lex_cmp(mask, self.mask));
        if value > self.value || (value == self.value && tie_break == Ordering::Less) {
            self.mask = mask;
            self.value = value;
        }
    }
}

fn objective(lambda: f64, coverage: u64, denom: u64, lmax: u32) -> f64 {
    lambda * (coverage as f64 / denom as f64) - lmax as f64
}

/// Maximizer of `λ·C − Lmax` over all `2^{n·m}` assignments. Ties go to
/// the fewest pairs, then the lexicographically smallest sorted pair list.
pub fn brute_force_opt(instance: &Instance, lambda: f64, limits: &OracleLimits) -> Result<(Assignment, f64)> {
    let s = Small::new(instance)?;
    let p = s.pairs(limits)?;
    let mut best = Best {
        mask: 0,
        value: 0.0,
    };
    for mask in 1..1u64 << p {
        let (c, l) = s.evaluate(mask);
        best.offer(mask, objective(lambda, c, s.denom, l));
    }
    Ok((s.to_assignment(instance, best.mask), best.value))
}

/// Same optimum as [`brute_force_opt`], visiting subsets in Gray-code order
/// with incremental skill counts.
pub fn brute_force_opt_gray(instance: &Instance, lambda: f64, limits: &OracleLimits) -> Result<(Assignment, f64)> {
    let s = Small::new(instance)?;
    let p = s.pairs(limits)?;
    // per task, per skill: number of assigned experts holding it
    let mut counts = vec![[0u32; 64]; s.m];
    let mut loads = vec![0u32; s.n];
    let mut covered = vec![0u64; s.m];
    let mut best = Best {
        mask: 0,
        value: 0.0,
    };
    let mut mask = 0u64;
    for step in 1..1u64 << p {
        let flip = step.trailing_zeros() as usize;
        let (i, j) = (flip / s.m, flip % s.m);
        let adding = mask & (1 << flip) == 0;
        mask ^= 1 << flip;
        let mut bits = s.experts[i] & s.tasks[j];
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if adding {
                counts[j][b] += 1;
                covered[j] |= 1 << b;
            } else {
                counts[j][b] -= 1;
                if counts[j][b] == 0 {
                    covered[j] &= !(1 << b);
                }
            }
        }
        if adding {
            loads[i] += 1;
        } else {
            loads[i] -= 1;
        }
        let c: u64 = (0..s.m).map(|t| covered[t].count_ones() as u64 * s.weight[t]).sum();
        let l = loads.iter().copied().max().unwrap_or(0);
        best.offer(mask, objective(lambda, c, s.denom, l));
    }
    Ok((s.to_assignment(instance, best.mask), best.value))
}

/// Largest total coverage with every expert load ≤ `tau`.
pub fn brute_force_coverage_opt(instance: &Instance, tau: u32, limits: &OracleLimits) -> Result<f64> {
    let s = Small::new(instance)?;
    let p = s.pairs(limits)?;
    let mut best = 0u64;
    for mask in 0..1u64 << p {
        let (c, l) = s.evaluate(mask);
        if l <= tau && c > best {
            best = c;
        }
    }
    Ok(best as f64 / s.denom as f64)
}

/// Exact optimum (scaled) of the teams-matching program: each task gets at
/// most one team, and every expert's total load across the teams used is
/// ≤ `tau`. `membership[k]` lists team `k`'s experts.
pub fn brute_force_teams_matching(
    cost: &CostMatrix,
    membership: &[Vec<u32>],
    num_experts: usize,
    tau: u32,
    limits: &OracleLimits,
) -> Result<i64> {
    let (k, m) = (cost.num_teams(), cost.num_tasks());
    if membership.len() != k {
        return Err(Error::invalid("one member list per team required"));
    }
    let space = (k as u64 + 1).checked_pow(m as u32);
    if space.is_none_or(|c| c > limits.max_matchings) {
        return Err(Error::TooLarge(format!("{}^{m} team maps", k + 1)));
    }
    let mut loads = vec![0u32; num_experts];
    Ok(teams_rec(cost, membership, tau, 0, &mut loads))
}

fn teams_rec(cost: &CostMatrix, membership: &[Vec<u32>], tau: u32, task: usize, loads: &mut [u32]) -> i64 {
    if task == cost.num_tasks() {
        return 0;
    }
    let mut best = teams_rec(cost, membership, tau, task + 1, loads);
    for (k, members) in membership.iter().enumerate() {
        let w = cost.get(k, task);
        if w == 0 || members.iter().any(|&i| loads[i as usize] >= tau) {
            continue;
        }
        for &i in members {
            loads[i as usize] += 1;
        }
        best = best.max(w + teams_rec(cost, membership, tau, task + 1, loads));
        for &i in members {
            loads[i as usize] -= 1;
        }
    }
    best
}

/// Exact optimum (scaled) of the team-to-task assignment with a per-team
/// cap of `tau`: the teams-matching program where team `k` is expert `k`.
pub fn brute_force_assign_teams(cost: &CostMatrix, tau: u32, limits: &OracleLimits) -> Result<i64> {
    let identity: Vec<Vec<u32>> = (0..cost.num_teams() as u32).map(|k| vec![k]).collect();
    brute_force_teams_matching(cost, &identity, cost.num_teams(), tau, limits)
}

/// Checks that `matching` is feasible under `caps`, that its stated value
/// is right, that `cert` is dual feasible, and that both objectives agree.
pub fn verify_dual(cost: &CostMatrix, caps: &[u32], matching: &TeamTaskMatching, cert: &DualCertificate) -> bool {
    let (k, m) = (cost.num_teams(), cost.num_tasks());
    if matching.assigned.len() != m || cert.task.len() != m || cert.team.len() != k || caps.len() != k {
        return false;
    }
    let mut uses = vec![0u32; k];
    let mut value = 0i64;
    for (j, team) in matching.assigned.iter().enumerate() {
        if let Some(t) = *team {
            uses[t] += 1;
            value += cost.get(t, j);
        }
    }
    if value != matching.value_scaled || uses.iter().zip(caps).any(|(u, c)| u > c) {
        return false;
    }
    let mut z = vec![0i64; k * m];
    for &((t, j), v) in &cert.pair {
        if t >= k || j >= m {
            return false;
        }
        z[t * m + j] += v;
    }
    if cert.task.iter().chain(&cert.team).chain(&z).any(|&x| x < 0) {
        return false;
    }
    for t in 0..k {
        for j in 0..m {
            if cert.task[j] + cert.team[t] + z[t * m + j] < cost.get(t, j) {
                return false;
            }
        }
    }
    let dual: i64 = cert.task.iter().sum::<i64>()
        + cert.team.iter().zip(caps).map(|(&v, &c)| v * c as i64).sum::<i64>()
        + z.iter().sum::<i64>();
    dual == value
}

/// Reference greedy without lazy evaluation: every step rescans all pairs
/// and takes the largest gain, ties by smallest `(expert, task)`. Returns
/// the pairs in the order added.
pub fn naive_greedy_cover(instance: &Instance, tau: u32) -> Result<Vec<(usize, usize)>> {
    Ok(naive_greedy_chain(instance, tau)?.pop().unwrap_or_default())
}

/// The naive greedy run at capacity 1, then continued at capacity 2, … up
/// to `max_tau`. Entry `τ − 1` holds every pair added so far, in order.
pub fn naive_greedy_chain(instance: &Instance, max_tau: u32) -> Result<Vec<Vec<(usize, usize)>>> {
    let s = Small::new(instance)?;
    let sizes: Vec<u64> = s.tasks.iter().map(|t| t.count_ones() as u64).collect();
    let mut covered = vec![0u64; s.m];
    let mut assigned = vec![false; s.n * s.m];
    let mut loads = vec![0u32; s.n];
    let mut added = Vec::new();
    let mut chain = Vec::new();
    for cap in 1..=max_tau {
        loop {
            // best gain as (new skills, task size)
            let mut best: Option<(u64, u64, usize, usize)> = None;
            for i in 0..s.n {
                if loads[i] >= cap {
                    continue;
                }
                for j in 0..s.m {
                    if assigned[i * s.m + j] {
                        continue;
                    }
                    let g = (s.experts[i] & s.tasks[j] & !covered[j]).count_ones() as u64;
                    if g == 0 {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bg, bs, _, _)) => g * bs > bg * sizes[j],
                    };
                    if better {
                        best = Some((g, sizes[j], i, j));
                    }
                }
            }
            let Some((_, _, i, j)) = best else { break };
            assigned[i * s.m + j] = true;
            covered[j] |= s.experts[i] & s.tasks[j];
            loads[i] += 1;
            added.push((i, j));
        }
        chain.push(added.clone());
    }
    Ok(chain)
}
