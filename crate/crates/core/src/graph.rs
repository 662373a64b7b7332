//! Expert coordination graph, its shortest-path closure, team radius and
//! diameter, and candidate-team generation.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct CoordinationGraph {
    n: usize,
    edges: Vec<(u32, u32, f64)>,
    // sorted neighbor lists of the input edges (no self loops)
    adjacency: Vec<Vec<u32>>,
    // row-major n×n; f64::INFINITY for disconnected pairs
    dist: Vec<f64>,
}

#[derive(Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// All-pairs shortest paths over an undirected weighted edge list.
pub fn metric_closure(n: usize, edges: &[(u32, u32, f64)]) -> Result<CoordinationGraph> {
    let mut dist = vec![f64::INFINITY; n * n];
    for i in 0..n {
        dist[i * n + i] = 0.0;
    }
    let mut adjacency = vec![Vec::new(); n];
    for &(a, b, w) in edges {
        let (i, j) = (a as usize, b as usize);
        if i >= n || j >= n {
            return Err(Error::invalid(format!("edge ({a}, {b}) references an expert outside 0..{n}")));
        }
        if w.is_nan() || w < 0.0 {
            return Err(Error::invalid(format!("edge ({a}, {b}) has invalid weight {w}")));
        }
        if i != j {
            adjacency[i].push(b);
            adjacency[j].push(a);
            if w < dist[i * n + j] {
                dist[i * n + j] = w;
                dist[j * n + i] = w;
            }
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
        list.dedup();
    }
    if n > 0 && edges.len() * 8 >= n * n {
        floyd_warshall(n, &mut dist);
    } else {
        dijkstra_all(n, &adjacency, &mut dist);
    }
    // Summation order can differ by direction in the last bit.
    for i in 0..n {
        for j in i + 1..n {
            let d = dist[i * n + j].min(dist[j * n + i]);
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    Ok(CoordinationGraph {
        n,
        edges: edges.to_vec(),
        adjacency,
        dist,
    })
}

fn floyd_warshall(n: usize, dist: &mut [f64]) {
    for k in 0..n {
        for i in 0..n {
            let dik = dist[i * n + k];
            if dik == f64::INFINITY {
                continue;
            }
            for j in 0..n {
                let via = dik + dist[k * n + j];
                if via < dist[i * n + j] {
                    dist[i * n + j] = via;
                }
            }
        }
    }
}

// `dist` holds the direct edge weights on entry.
fn dijkstra_all(n: usize, adjacency: &[Vec<u32>], dist: &mut [f64]) {
    let direct = dist.to_vec();
    let mut row = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    for s in 0..n {
        row.fill(f64::INFINITY);
        row[s] = 0.0;
        heap.push(Reverse((Key(0.0), s as u32)));
        while let Some(Reverse((Key(d), u))) = heap.pop() {
            let u = u as usize;
            if d > row[u] {
                continue;
            }
            for &v in &adjacency[u] {
                let v = v as usize;
                let nd = d + direct[u * n + v];
                if nd < row[v] {
                    row[v] = nd;
                    heap.push(Reverse((Key(nd), v as u32)));
                }
            }
        }
        dist[s * n..(s + 1) * n].copy_from_slice(&row);
    }
}

impl CoordinationGraph {
    pub fn num_experts(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32, f64)] {
        &self.edges
    }

    /// Shortest-path distance; `f64::INFINITY` if disconnected.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    /// Whether `i` and `j` share an input edge.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&(j as u32)).is_ok()
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.adjacency[i]
    }

    /// Largest finite closure distance (0 if none).
    pub fn max_finite_distance(&self) -> f64 {
        self.dist.iter().copied().filter(|d| d.is_finite()).fold(0.0, f64::max)
    }
}

/// `(radius, center)` of a non-empty team: the member minimizing its largest
/// distance to the other members. Ties go to the smallest index.
pub fn team_radius(members: &[u32], graph: &CoordinationGraph) -> (f64, u32) {
    assert!(!members.is_empty(), "team must be non-empty");
    let mut best = (f64::INFINITY, members[0]);
    let mut first = true;
    for &c in members {
        let ecc = members
            .iter()
            .map(|&x| graph.distance(c as usize, x as usize))
            .fold(0.0, f64::max);
        if first || ecc < best.0 || (ecc == best.0 && c < best.1) {
            best = (ecc, c);
            first = false;
        }
    }
    best
}

/// Largest pairwise distance within a non-empty team.
pub fn team_diameter(members: &[u32], graph: &CoordinationGraph) -> f64 {
    assert!(!members.is_empty(), "team must be non-empty");
    let mut d: f64 = 0.0;
    for (k, &a) in members.iter().enumerate() {
        for &b in &members[k + 1..] {
            d = d.max(graph.distance(a as usize, b as usize));
        }
    }
    d
}

#[derive(Clone, Debug, PartialEq)]
pub struct Team {
    /// Increasing expert indices.
    pub members: Vec<u32>,
    pub center: u32,
    pub radius: f64,
}

impl Team {
    pub fn new(mut members: Vec<u32>, graph: &CoordinationGraph) -> Self {
        members.sort_unstable();
        members.dedup();
        let (radius, center) = team_radius(&members, graph);
        Team {
            members,
            center,
            radius,
        }
    }
}

fn ball(graph: &CoordinationGraph, center: usize, r: f64) -> Vec<u32> {
    (0..graph.num_experts())
        .filter(|&j| j == center || graph.distance(center, j) <= r)
        .map(|j| j as u32)
        .collect()
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_nan() || r <= 0.0 {
        return Err(Error::invalid(format!("radius must be positive, got {r}")));
    }
    Ok(())
}

/// One team per expert: the expert plus everyone within distance `r`.
pub fn candidate_teams_r(graph: &CoordinationGraph, r: f64) -> Result<Vec<Team>> {
    check_radius(r)?;
    Ok((0..graph.num_experts())
        .map(|i| Team::new(ball(graph, i, r), graph))
        .collect())
}

/// Balls at radii `r/k, 2r/k, …, r`, with repeated member sets dropped
/// (first occurrence kept).
pub fn candidate_teams_allr(graph: &CoordinationGraph, r: f64, k: u32) -> Result<Vec<Team>> {
    check_radius(r)?;
    if k == 0 {
        return Err(Error::invalid("number of radius splits must be at least 1"));
    }
    let mut all = Vec::new();
    for rs in split_radii(r, k) {
        all.extend(candidate_teams_r(graph, rs)?);
    }
    Ok(dedup_teams(all))
}

/// `r/k, 2r/k, …, r`, with the last value exactly `r`.
pub fn split_radii(r: f64, k: u32) -> Vec<f64> {
    (1..=k)
        .map(|s| if s == k { r } else { r * s as f64 / k as f64 })
        .collect()
}

/// Removes repeated member sets, keeping first occurrences.
pub fn dedup_teams(teams: Vec<Team>) -> Vec<Team> {
    group_teams(teams).into_iter().map(|(t, _)| t).collect()
}

/// Distinct member sets in first-occurrence order, each with the number of
/// times it appeared.
pub fn group_teams(teams: Vec<Team>) -> Vec<(Team, u32)> {
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut out: Vec<(Team, u32)> = Vec::new();
    for t in teams {
        match index.get(&t.members) {
            Some(&k) => out[k].1 += 1,
            None => {
                index.insert(t.members.clone(), out.len());
                out.push((t, 1));
            }
        }
    }
    out
}
