//! Assigning pre-formed teams to tasks: each task gets at most one team,
//! each team serves at most τ tasks, maximizing total coverage.
//!
//! Coverage values are scaled to integers by the lcm of all task sizes so
//! the exact solver compares path costs without rounding.

use crate::error::{Error, Result};
use crate::model::{team_cover, Instance};

/// Team × task coverage matrix in scaled integer units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostMatrix {
    teams: usize,
    tasks: usize,
    scale: i64,
    entries: Vec<i64>,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl CostMatrix {
    /// Entry `(k, j)` is the coverage of task `j` by team `k`.
    pub fn from_teams<T: AsRef<[u32]>>(instance: &Instance, teams: &[T]) -> Result<Self> {
        let mut scale: i64 = 1;
        for t in instance.tasks() {
            let size = t.size() as i64;
            scale = (scale / gcd(scale, size))
                .checked_mul(size)
                .ok_or_else(|| Error::ScaleOverflow(format!("lcm of task sizes exceeds {}", i64::MAX)))?;
        }
        let m = instance.num_tasks() as i64;
        if scale.checked_mul(m.max(1)).is_none_or(|total| total > i64::MAX / 4) {
            return Err(Error::ScaleOverflow(format!("scale {scale} times {m} tasks")));
        }
        let mut entries = Vec::with_capacity(teams.len() * instance.num_tasks());
        for team in teams {
            let members = team.as_ref();
            for (j, t) in instance.tasks().iter().enumerate() {
                let covered = team_cover(instance, j, members.iter().map(|&i| i as usize)).len() as i64;
                entries.push(covered * (scale / t.size() as i64));
            }
        }
        Ok(CostMatrix {
            teams: teams.len(),
            tasks: instance.num_tasks(),
            scale,
            entries,
        })
    }

    /// Matrix from already-scaled entries (row-major), each in `0..=scale`.
    pub fn from_scaled(teams: usize, tasks: usize, scale: i64, entries: Vec<i64>) -> Result<Self> {
        if scale <= 0 {
            return Err(Error::invalid("scale must be positive"));
        }
        if entries.len() != teams * tasks {
            return Err(Error::invalid(format!(
                "expected {} entries, got {}",
                teams * tasks,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&e| !(0..=scale).contains(&e)) {
            return Err(Error::invalid(format!("entry {bad} outside 0..={scale}")));
        }
        Ok(CostMatrix {
            teams,
            tasks,
            scale,
            entries,
        })
    }

    pub fn num_teams(&self) -> usize {
        self.teams
    }

    pub fn num_tasks(&self) -> usize {
        self.tasks
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn get(&self, team: usize, task: usize) -> i64 {
        self.entries[team * self.tasks + task]
    }
}

/// Partial map task → team.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TeamTaskMatching {
    pub assigned: Vec<Option<usize>>,
    /// Total coverage in units of `1/scale`.
    pub value_scaled: i64,
    pub scale: i64,
}

impl TeamTaskMatching {
    pub fn value(&self) -> f64 {
        self.value_scaled as f64 / self.scale as f64
    }

    pub fn team_uses(&self, teams: usize) -> Vec<u32> {
        let mut uses = vec![0; teams];
        for k in self.assigned.iter().flatten() {
            uses[*k] += 1;
        }
        uses
    }

    /// `(team, task)` pairs, increasing task.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.assigned
            .iter()
            .enumerate()
            .filter_map(|(j, k)| k.map(|k| (k, j)))
            .collect()
    }
}

#[derive(Clone, Copy, Debug)]
struct Arc {
    to: usize,
    rev: usize,
    cap: i64,
    cost: i64,
}

/// Residual network: source, teams, tasks, sink.
struct Network {
    graph: Vec<Vec<Arc>>,
    source: usize,
    sink: usize,
    teams: usize,
}

impl Network {
    fn build(cost: &CostMatrix, caps: &[u32]) -> Self {
        let (k, m) = (cost.teams, cost.tasks);
        let source = 0;
        let sink = k + m + 1;
        let mut net = Network {
            graph: vec![Vec::new(); k + m + 2],
            source,
            sink,
            teams: k,
        };
        for (team, &cap) in caps.iter().enumerate() {
            net.add(source, 1 + team, cap as i64, 0);
        }
        for team in 0..k {
            for task in 0..m {
                let w = cost.get(team, task);
                if w > 0 {
                    net.add(1 + team, 1 + k + task, 1, -w);
                }
            }
        }
        for task in 0..m {
            net.add(1 + k + task, sink, 1, 0);
        }
        net
    }

    fn add(&mut self, from: usize, to: usize, cap: i64, cost: i64) {
        let rf = self.graph[to].len();
        let rt = self.graph[from].len();
        self.graph[from].push(Arc { to, rev: rf, cap, cost });
        self.graph[to].push(Arc {
            to: from,
            rev: rt,
            cap: 0,
            cost: -cost,
        });
    }

    fn task_node(&self, task: usize) -> usize {
        1 + self.teams + task
    }
}

const INF: i64 = i64::MAX / 4;

/// Optimal integral solution of the assignment LP, by successive shortest
/// augmenting paths; stops once no augmenting path has positive gain.
pub fn assign_teams_exact(cost: &CostMatrix, tau: u32) -> TeamTaskMatching {
    assign_teams_exact_with_caps(cost, &vec![tau; cost.teams])
}

/// [`assign_teams_exact`] with a separate use limit per team.
pub fn assign_teams_exact_with_caps(cost: &CostMatrix, caps: &[u32]) -> TeamTaskMatching {
    assert_eq!(caps.len(), cost.teams, "one capacity per team");
    let mut net = Network::build(cost, caps);
    let nodes = net.graph.len();
    let (s, t) = (net.source, net.sink);

    // The network is a DAG before any flow, so potentials come from a
    // topological pass (source, teams, tasks, sink).
    let mut pi = vec![0i64; nodes];
    for team in 0..cost.teams {
        for arc in &net.graph[1 + team] {
            if arc.cap > 0 && arc.cost < pi[arc.to] {
                pi[arc.to] = arc.cost;
            }
        }
    }
    pi[t] = (0..cost.tasks).map(|j| pi[net.task_node(j)]).min().unwrap_or(0);

    let mut dist = vec![INF; nodes];
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; nodes];
    let mut done = vec![false; nodes];
    loop {
        dist.fill(INF);
        prev.fill(None);
        done.fill(false);
        dist[s] = 0;
        // Dense Dijkstra; ties settle the smallest node index first.
        loop {
            let mut u = usize::MAX;
            for v in 0..nodes {
                if !done[v] && dist[v] < INF && (u == usize::MAX || dist[v] < dist[u]) {
                    u = v;
                }
            }
            if u == usize::MAX {
                break;
            }
            done[u] = true;
            for (idx, arc) in net.graph[u].iter().enumerate() {
                if arc.cap <= 0 || done[arc.to] {
                    continue;
                }
                let nd = dist[u] + arc.cost + pi[u] - pi[arc.to];
                if nd < dist[arc.to] {
                    dist[arc.to] = nd;
                    prev[arc.to] = Some((u, idx));
                }
            }
        }
        if dist[t] >= INF {
            break;
        }
        let path_cost = dist[t] + pi[t] - pi[s];
        if path_cost >= 0 {
            break;
        }
        let dt = dist[t];
        for v in 0..nodes {
            pi[v] += dist[v].min(dt);
        }
        let mut v = t;
        while let Some((u, idx)) = prev[v] {
            let rev = net.graph[u][idx].rev;
            net.graph[u][idx].cap -= 1;
            net.graph[v][rev].cap += 1;
            v = u;
        }
    }

    let mut assigned = vec![None; cost.tasks];
    let mut value = 0;
    for team in 0..cost.teams {
        for arc in &net.graph[1 + team] {
            if arc.to > cost.teams && arc.to != t && arc.cost < 0 && arc.cap == 0 {
                let task = arc.to - 1 - cost.teams;
                assigned[task] = Some(team);
                value += -arc.cost;
            }
        }
    }
    TeamTaskMatching {
        assigned,
        value_scaled: value,
        scale: cost.scale,
    }
}

/// Repeatedly takes the largest remaining entry whose team has capacity
/// and whose task is free; ties by smallest `(team, task)`.
pub fn assign_teams_greedy(cost: &CostMatrix, tau: u32) -> TeamTaskMatching {
    assign_teams_greedy_with_caps(cost, &vec![tau; cost.teams])
}

/// [`assign_teams_greedy`] with a separate use limit per team.
pub fn assign_teams_greedy_with_caps(cost: &CostMatrix, caps: &[u32]) -> TeamTaskMatching {
    assert_eq!(caps.len(), cost.teams, "one capacity per team");
    let mut order: Vec<(i64, usize, usize)> = (0..cost.teams)
        .flat_map(|k| (0..cost.tasks).map(move |j| (k, j)))
        .filter_map(|(k, j)| {
            let w = cost.get(k, j);
            (w > 0).then_some((w, k, j))
        })
        .collect();
    order.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut assigned = vec![None; cost.tasks];
    let mut uses = vec![0u32; cost.teams];
    let mut value = 0;
    for (w, k, j) in order {
        if assigned[j].is_none() && uses[k] < caps[k] {
            assigned[j] = Some(k);
            uses[k] += 1;
            value += w;
        }
    }
    TeamTaskMatching {
        assigned,
        value_scaled: value,
        scale: cost.scale,
    }
}

/// Solution of the dual of the assignment LP
/// (`min Σu_j + Σcap_k·v_k + Σz_kj` s.t. `u_j + v_k + z_kj ≥ c_kj`, all
/// ≥ 0), in scaled units. `pair` holds the non-zero `z_kj`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCertificate {
    pub task: Vec<i64>,
    pub team: Vec<i64>,
    pub pair: Vec<((usize, usize), i64)>,
}

impl DualCertificate {
    pub fn objective(&self, caps: &[u32]) -> i64 {
        self.task.iter().sum::<i64>()
            + self.team.iter().zip(caps).map(|(&v, &c)| v * c as i64).sum::<i64>()
            + self.pair.iter().map(|&(_, z)| z).sum::<i64>()
    }
}

/// Dual solution read off shortest-path potentials of the residual network
/// of `matching`. When `matching` is optimal its objective equals the
/// matching value, certifying that the LP optimum is integral.
pub fn dual_certificate(cost: &CostMatrix, caps: &[u32], matching: &TeamTaskMatching) -> DualCertificate {
    assert_eq!(caps.len(), cost.teams, "one capacity per team");
    let mut net = Network::build(cost, caps);
    let (s, t) = (net.source, net.sink);
    for (j, k) in matching.assigned.iter().enumerate() {
        let Some(k) = *k else { continue };
        let task = net.task_node(j);
        for (from, to) in [(s, 1 + k), (1 + k, task), (task, t)] {
            let idx = net.graph[from]
                .iter()
                .position(|a| a.to == to && a.cap > 0)
                .expect("matched pair must be an arc of the network");
            let rev = net.graph[from][idx].rev;
            net.graph[from][idx].cap -= 1;
            net.graph[to][rev].cap += 1;
        }
    }
    // Circulation closure: unlimited sink → source arc of cost 0.
    let flow = matching.assigned.iter().flatten().count() as i64;
    net.add(t, s, INF, 0);
    let last = net.graph[t].len() - 1;
    let rev = net.graph[t][last].rev;
    net.graph[t][last].cap -= flow;
    net.graph[s][rev].cap += flow;

    // Bellman–Ford from a virtual root joined to every node at cost 0.
    let nodes = net.graph.len();
    let mut pi = vec![0i64; nodes];
    for _ in 0..nodes {
        let mut changed = false;
        for u in 0..nodes {
            for arc in &net.graph[u] {
                if arc.cap > 0 && pi[u] + arc.cost < pi[arc.to] {
                    pi[arc.to] = pi[u] + arc.cost;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let task: Vec<i64> = (0..cost.tasks).map(|j| (pi[s] - pi[net.task_node(j)]).max(0)).collect();
    let team: Vec<i64> = (0..cost.teams).map(|k| (pi[1 + k] - pi[s]).max(0)).collect();
    let mut pair = Vec::new();
    for (k, &v) in team.iter().enumerate() {
        for (j, &u) in task.iter().enumerate() {
            let z = cost.get(k, j) - u - v;
            if z > 0 {
                pair.push(((k, j), z));
            }
        }
    }
    DualCertificate { task, team, pair }
}
