//! Experts, tasks, assignments and the coverage / load / objective functions.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::skills::{SkillId, SkillSet};

/// Exact non-negative fraction with a small denominator. Used for marginal
/// gains and coverage losses, which are always `count / |task skills|`.
#[derive(Clone, Copy, Debug)]
pub struct Fraction {
    pub num: u32,
    pub den: u32,
}

impl Fraction {
    pub fn new(num: u32, den: u32) -> Self {
        assert!(den > 0, "zero denominator");
        Fraction { num, den }
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Fraction {}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u64 * other.den as u64).cmp(&(other.num as u64 * self.den as u64))
    }
}

/// Exact total coverage, kept as one numerator per distinct task size so
/// that sums never round. Converted to `f64` only for reporting and for the
/// real-valued objective.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Coverage {
    by_size: BTreeMap<u32, u64>,
}

impl Coverage {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add(&mut self, covered: u32, task_size: u32) {
        if covered > 0 {
            *self.by_size.entry(task_size).or_insert(0) += covered as u64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.by_size.is_empty()
    }

    pub fn to_f64(&self) -> f64 {
        self.by_size
            .iter()
            .map(|(&size, &num)| num as f64 / size as f64)
            .sum()
    }

    /// Reduced `(numerator, denominator)`, if it fits in `u128`.
    pub fn as_ratio(&self) -> Option<(u128, u128)> {
        let mut num: u128 = 0;
        let mut den: u128 = 1;
        for (&size, &n) in &self.by_size {
            let s = size as u128;
            let l = lcm_u128(den, s)?;
            num = num.checked_mul(l / den)?.checked_add((n as u128).checked_mul(l / s)?)?;
            den = l;
            let g = gcd_u128(num, den);
            if g > 1 {
                num /= g;
                den /= g;
            }
        }
        Some((num, den))
    }
}

impl fmt::Display for Coverage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

pub(crate) fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm_u128(a: u128, b: u128) -> Option<u128> {
    (a / gcd_u128(a, b)).checked_mul(b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expert {
    pub name: String,
    pub skills: SkillSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Task {
    pub name: String,
    pub skills: SkillSet,
}

impl Task {
    pub fn size(&self) -> u32 {
        self.skills.len() as u32
    }
}

/// Immutable problem instance: experts and tasks over a shared skill universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    skill_names: Vec<String>,
    experts: Vec<Expert>,
    tasks: Vec<Task>,
}

impl Instance {
    pub fn new(skill_names: Vec<String>, experts: Vec<Expert>, tasks: Vec<Task>) -> Result<Self> {
        if experts.is_empty() {
            return Err(Error::invalid("instance requires n ≥ 1"));
        }
        if tasks.is_empty() {
            return Err(Error::invalid("instance requires m ≥ 1"));
        }
        let universe = skill_names.len() as u32;
        let check = |set: &SkillSet, what: &str, name: &str| -> Result<()> {
            if set.iter().any(|s| s.0 >= universe) {
                return Err(Error::invalid(format!("{what} {name} references unknown skill")));
            }
            Ok(())
        };
        let mut seen = HashMap::new();
        for e in &experts {
            check(&e.skills, "expert", &e.name)?;
            if seen.insert(e.name.as_str(), ()).is_some() {
                return Err(Error::invalid(format!("duplicate expert id {}", e.name)));
            }
        }
        seen.clear();
        for t in &tasks {
            check(&t.skills, "task", &t.name)?;
            if t.skills.is_empty() {
                return Err(Error::invalid(format!("task {} has no skills", t.name)));
            }
            if seen.insert(t.name.as_str(), ()).is_some() {
                return Err(Error::invalid(format!("duplicate task id {}", t.name)));
            }
        }
        Ok(Instance {
            skill_names,
            experts,
            tasks,
        })
    }

    /// Instance from raw skill-id lists; names are `e{i}`, `t{j}`, `s{k}`.
    pub fn from_skill_ids(num_skills: usize, experts: &[Vec<u32>], tasks: &[Vec<u32>]) -> Result<Self> {
        if let Some(bad) = experts.iter().chain(tasks).flatten().find(|&&s| s as usize >= num_skills) {
            return Err(Error::invalid(format!("skill id {bad} ≥ universe size {num_skills}")));
        }
        let set = |v: &Vec<u32>| SkillSet::from_ids(num_skills, v.iter().map(|&s| SkillId(s)));
        Instance::new(
            (0..num_skills).map(|k| format!("s{k}")).collect(),
            experts
                .iter()
                .enumerate()
                .map(|(i, v)| Expert {
                    name: format!("e{i}"),
                    skills: set(v),
                })
                .collect(),
            tasks
                .iter()
                .enumerate()
                .map(|(j, v)| Task {
                    name: format!("t{j}"),
                    skills: set(v),
                })
                .collect(),
        )
    }

    pub fn num_experts(&self) -> usize {
        self.experts.len()
    }

    pub fn num_tasks(&self) -> usize {
        self.tasks.len()
    }

    pub fn num_skills(&self) -> usize {
        self.skill_names.len()
    }

    pub fn experts(&self) -> &[Expert] {
        &self.experts
    }

    pub fn tasks(&self) -> &[Task] {
        &self.tasks
    }

    pub fn expert(&self, i: usize) -> &Expert {
        &self.experts[i]
    }

    pub fn task(&self, j: usize) -> &Task {
        &self.tasks[j]
    }

    pub fn skill_names(&self) -> &[String] {
        &self.skill_names
    }

    pub fn skill_name(&self, id: SkillId) -> &str {
        &self.skill_names[id.index()]
    }

    /// Gain of `(expert, task)` against the empty assignment.
    pub fn static_gain(&self, expert: usize, task: usize) -> Fraction {
        let t = &self.tasks[task];
        Fraction::new(self.experts[expert].skills.intersection_len(&t.skills) as u32, t.size())
    }

    /// For each task, the experts sharing at least one skill with it
    /// (increasing index).
    pub fn relevant_experts(&self) -> Vec<Vec<u32>> {
        let mut by_skill: Vec<Vec<u32>> = vec![Vec::new(); self.num_skills()];
        for (i, e) in self.experts.iter().enumerate() {
            for s in e.skills.iter() {
                by_skill[s.index()].push(i as u32);
            }
        }
        let mut mark = vec![u32::MAX; self.num_experts()];
        self.tasks
            .iter()
            .enumerate()
            .map(|(j, t)| {
                let mut out = Vec::new();
                for s in t.skills.iter() {
                    for &i in &by_skill[s.index()] {
                        if mark[i as usize] != j as u32 {
                            mark[i as usize] = j as u32;
                            out.push(i);
                        }
                    }
                }
                out.sort_unstable();
                out
            })
            .collect()
    }
}

/// Builder that interns skill names in first-occurrence order.
#[derive(Default)]
pub struct InstanceBuilder {
    skills: Vec<String>,
    index: HashMap<String, u32>,
    experts: Vec<(String, Vec<SkillId>)>,
    tasks: Vec<(String, Vec<SkillId>)>,
}

impl InstanceBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, skill: &str) -> SkillId {
        if let Some(&id) = self.index.get(skill) {
            return SkillId(id);
        }
        let id = self.skills.len() as u32;
        self.skills.push(skill.to_owned());
        self.index.insert(skill.to_owned(), id);
        SkillId(id)
    }

    pub fn expert<S: AsRef<str>>(&mut self, name: &str, skills: &[S]) -> &mut Self {
        let ids = skills.iter().map(|s| self.intern(s.as_ref())).collect();
        self.experts.push((name.to_owned(), ids));
        self
    }

    pub fn task<S: AsRef<str>>(&mut self, name: &str, skills: &[S]) -> &mut Self {
        let ids = skills.iter().map(|s| self.intern(s.as_ref())).collect();
        self.tasks.push((name.to_owned(), ids));
        self
    }

    pub fn build(&self) -> Result<Instance> {
        let u = self.skills.len();
        Instance::new(
            self.skills.clone(),
            self.experts
                .iter()
                .map(|(name, ids)| Expert {
                    name: name.clone(),
                    skills: SkillSet::from_ids(u, ids.iter().copied()),
                })
                .collect(),
            self.tasks
                .iter()
                .map(|(name, ids)| Task {
                    name: name.clone(),
                    skills: SkillSet::from_ids(u, ids.iter().copied()),
                })
                .collect(),
        )
    }
}

/// A set of (expert, task) pairs with cached per-task covered skills and
/// per-expert loads. Mutations take the owning [`Instance`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    teams: Vec<Vec<u32>>,
    covered: Vec<SkillSet>,
    loads: Vec<u32>,
    len: usize,
}

impl Assignment {
    pub fn new(instance: &Instance) -> Self {
        Assignment {
            teams: vec![Vec::new(); instance.num_tasks()],
            covered: vec![SkillSet::empty(instance.num_skills()); instance.num_tasks()],
            loads: vec![0; instance.num_experts()],
            len: 0,
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(instance: &Instance, pairs: I) -> Self {
        let mut a = Self::new(instance);
        for (e, t) in pairs {
            a.insert(instance, e, t);
        }
        a
    }

    /// Adds the pair; returns `false` if it was already present.
    pub fn insert(&mut self, instance: &Instance, expert: usize, task: usize) -> bool {
        let team = &mut self.teams[task];
        match team.binary_search(&(expert as u32)) {
            Ok(_) => false,
            Err(pos) => {
                team.insert(pos, expert as u32);
                let gained = instance.expert(expert).skills.intersection(&instance.task(task).skills);
                self.covered[task].insert_all(&gained);
                self.loads[expert] += 1;
                self.len += 1;
                true
            }
        }
    }

    /// Removes the pair; returns `false` if it was absent.
    pub fn remove(&mut self, instance: &Instance, expert: usize, task: usize) -> bool {
        let team = &mut self.teams[task];
        match team.binary_search(&(expert as u32)) {
            Err(_) => false,
            Ok(pos) => {
                team.remove(pos);
                self.covered[task] = team_cover(instance, task, team.iter().map(|&i| i as usize));
                self.loads[expert] -= 1;
                self.len -= 1;
                true
            }
        }
    }

    pub fn contains(&self, expert: usize, task: usize) -> bool {
        self.teams[task].binary_search(&(expert as u32)).is_ok()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Experts assigned to `task`, increasing index.
    pub fn team(&self, task: usize) -> &[u32] {
        &self.teams[task]
    }

    pub fn load(&self, expert: usize) -> u32 {
        self.loads[expert]
    }

    pub fn loads(&self) -> &[u32] {
        &self.loads
    }

    /// Required skills of `task` covered by its team.
    pub fn covered_skills(&self, task: usize) -> &SkillSet {
        &self.covered[task]
    }

    pub fn covered_count(&self, task: usize) -> u32 {
        self.covered[task].len() as u32
    }

    /// Exact `C(J_j | A)` as a fraction.
    pub fn task_coverage(&self, instance: &Instance, task: usize) -> Fraction {
        Fraction::new(self.covered_count(task), instance.task(task).size())
    }

    pub fn coverage_of_task(&self, instance: &Instance, task: usize) -> f64 {
        self.task_coverage(instance, task).to_f64()
    }

    pub fn total_coverage(&self, instance: &Instance) -> Coverage {
        let mut c = Coverage::zero();
        for (j, t) in instance.tasks().iter().enumerate() {
            c.add(self.covered_count(j), t.size());
        }
        c
    }

    pub fn max_load(&self) -> u32 {
        self.loads.iter().copied().max().unwrap_or(0)
    }

    /// `λ·C(A) − Lmax(A)`.
    pub fn objective(&self, instance: &Instance, lambda: f64) -> f64 {
        lambda * self.total_coverage(instance).to_f64() - self.max_load() as f64
    }

    /// Gain in total coverage from adding `(expert, task)`.
    pub fn marginal_gain(&self, instance: &Instance, expert: usize, task: usize) -> Fraction {
        let t = instance.task(task);
        let e = &instance.expert(expert).skills;
        let inter = e.intersection_len(&t.skills) - e.intersection_len(&self.covered[task]);
        Fraction::new(inter as u32, t.size())
    }

    /// Pairs sorted by `(expert, task)`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .teams
            .iter()
            .enumerate()
            .flat_map(|(j, team)| team.iter().map(move |&i| (i as usize, j)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_subset_of(&self, other: &Assignment) -> bool {
        self.teams
            .iter()
            .enumerate()
            .all(|(j, team)| team.iter().all(|&i| other.contains(i as usize, j)))
    }

    /// Whether the caches match a from-scratch recomputation.
    pub fn caches_consistent(&self, instance: &Instance) -> bool {
        let fresh = Assignment::from_pairs(instance, self.pairs());
        fresh.covered == self.covered && fresh.loads == self.loads && fresh.len == self.len
    }
}

/// Covered required skills of `task` for an arbitrary team.
pub fn team_cover<I: IntoIterator<Item = usize>>(instance: &Instance, task: usize, team: I) -> SkillSet {
    let t = &instance.task(task).skills;
    let mut acc = SkillSet::empty(instance.num_skills());
    for i in team {
        acc.insert_all(&instance.expert(i).skills);
    }
    acc.intersection(t)
}


#[cfg(test)]
mod tests {
    use super::fixtures::tiny;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn coverage_of_single_task() {
        let inst = InstanceBuilder::new()
            .expert("x", &["c"])
            .expert("y", &["a", "b"])
            .expert("z", &["a"])
            .task("cd", &["c", "d"])
            .task("ab", &["a", "b"])
            .build()
            .unwrap();
        let mut a = Assignment::new(&inst);
        assert_eq!(a.coverage_of_task(&inst, 0), 0.0);
        a.insert(&inst, 0, 0);
        assert_eq!(a.coverage_of_task(&inst, 0), 0.5);
        a.insert(&inst, 1, 1);
        a.insert(&inst, 2, 1);
        assert_eq!(a.coverage_of_task(&inst, 1), 1.0);
    }

    #[test]
    fn tiny_totals() {
        let inst = tiny();
        let empty = Assignment::new(&inst);
        assert_eq!(empty.total_coverage(&inst).to_f64(), 0.0);
        assert_eq!(empty.max_load(), 0);
        assert_eq!(empty.objective(&inst, 3.5), 0.0);

        let a = Assignment::from_pairs(&inst, [(0, 0), (2, 1)]);
        assert_eq!(a.total_coverage(&inst).to_f64(), 2.0);
        assert_eq!(a.objective(&inst, 2.0), 3.0);

        let b = Assignment::from_pairs(&inst, [(1, 1)]);
        assert_eq!(b.total_coverage(&inst).to_f64(), 0.5);
        assert_eq!(b.total_coverage(&inst).as_ratio(), Some((1, 2)));
    }

    #[test]
    fn objective_lambda_one() {
        // coverage 2, Lmax 1
        let inst = tiny();
        let a = Assignment::from_pairs(&inst, [(0, 0), (2, 1)]);
        assert_eq!(a.objective(&inst, 1.0), 1.0);
    }

    #[test]
    fn max_load_cases() {
        let inst = InstanceBuilder::new()
            .expert("a", &["s"])
            .expert("b", &["s"])
            .expert("c", &["s"])
            .expert("d", &["s"])
            .task("t0", &["s"])
            .task("t1", &["s"])
            .task("t2", &["s"])
            .build()
            .unwrap();
        // loads {0,2,3,2}
        let a = Assignment::from_pairs(&inst, [(1, 0), (1, 1), (2, 0), (2, 1), (2, 2), (3, 1), (3, 2)]);
        assert_eq!(a.loads(), &[0, 2, 3, 2]);
        assert_eq!(a.max_load(), 3);
        let all = Assignment::from_pairs(&inst, (0..3).map(|t| (0, t)));
        assert_eq!(all.max_load(), 3);
    }

    #[test]
    fn duplicate_insert_is_noop() {
        let inst = tiny();
        let mut a = Assignment::new(&inst);
        assert!(a.insert(&inst, 0, 0));
        assert!(!a.insert(&inst, 0, 0));
        assert_eq!(a.len(), 1);
        assert_eq!(a.load(0), 1);
        assert!(!a.remove(&inst, 1, 0));
    }

    #[test]
    fn rejects_bad_instances() {
        let err = InstanceBuilder::new().expert("e", &["a"]).build().unwrap_err();
        assert!(err.to_string().contains("m ≥ 1"));
        let empty: [&str; 0] = [];
        assert!(InstanceBuilder::new().expert("e", &["a"]).task("t", &empty).build().is_err());
        assert!(InstanceBuilder::new()
            .expert("e", &["a"])
            .expert("e", &["a"])
            .task("t", &["a"])
            .build()
            .is_err());
    }

    #[test]
    fn fraction_ordering_is_exact() {
        assert!(Fraction::new(1, 3) < Fraction::new(2, 5));
        assert_eq!(Fraction::new(2, 4), Fraction::new(1, 2));
        assert!(Fraction::new(0, 7).is_zero());
    }

    fn arb_instance() -> impl Strategy<Value = Instance> {
        (1usize..4, 1usize..4, 1usize..6).prop_flat_map(|(n, m, s)| {
            let skill = 0..s as u32;
            (
                proptest::collection::vec(proptest::collection::vec(skill.clone(), 0..4), n),
                proptest::collection::vec(proptest::collection::vec(skill, 1..4), m),
            )
                .prop_map(move |(e, t)| Instance::from_skill_ids(s, &e, &t).unwrap())
        })
    }

    proptest! {
        #[test]
        fn caches_survive_random_edits(
            inst in arb_instance(),
            ops in proptest::collection::vec((any::<bool>(), 0usize..4, 0usize..4), 0..40),
        ) {
            let mut a = Assignment::new(&inst);
            for (add, e, t) in ops {
                let (e, t) = (e % inst.num_experts(), t % inst.num_tasks());
                if add { a.insert(&inst, e, t); } else { a.remove(&inst, e, t); }
                prop_assert!(a.caches_consistent(&inst));
            }
            let c = a.total_coverage(&inst).to_f64();
            prop_assert!(c >= 0.0 && c <= inst.num_tasks() as f64 + 1e-12);
            prop_assert!(a.max_load() as usize <= inst.num_tasks());
        }

        #[test]
        fn coverage_is_monotone_and_submodular(inst in arb_instance(), seed in any::<u64>()) {
            // A ⊆ B built from the same random pair order; p outside B
            let pairs: Vec<(usize, usize)> = (0..inst.num_experts())
                .flat_map(|e| (0..inst.num_tasks()).map(move |t| (e, t)))
                .collect();
            let k = pairs.len();
            let mut order: Vec<usize> = (0..k).collect();
            let mut rng = crate::rng::Rng64::new(seed);
            rng.shuffle(&mut order);
            let cut_b = (seed as usize) % k;
            let cut_a = cut_b / 2;
            let a = Assignment::from_pairs(&inst, order[..cut_a].iter().map(|&x| pairs[x]));
            let b = Assignment::from_pairs(&inst, order[..cut_b].iter().map(|&x| pairs[x]));
            let ca = a.total_coverage(&inst).to_f64();
            let cb = b.total_coverage(&inst).to_f64();
            prop_assert!(cb + 1e-12 >= ca);
            for &x in &order[cut_b..] {
                let (e, t) = pairs[x];
                prop_assert!(a.marginal_gain(&inst, e, t) >= b.marginal_gain(&inst, e, t));
            }
        }
    }
}
