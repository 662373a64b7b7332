//! Text formats.
//!
//! Experts and tasks: one record per line, `id<TAB>skill,skill,…`. Graphs:
//! `id<TAB>id<TAB>weight` with expert ids. Co-occurrence counts:
//! `id<TAB>id<TAB>count`. Assignments: `expert_id<TAB>task_id`. Blank lines
//! and lines starting with `#` are skipped everywhere.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{metric_closure, CoordinationGraph};
use crate::model::{Assignment, Instance, InstanceBuilder};
use crate::search::Solution;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Non-comment lines as (1-based line number, TAB-separated fields).
fn records<'a>(text: &'a str) -> impl Iterator<Item = (usize, Vec<&'a str>)> + 'a {
    text.lines().enumerate().filter_map(|(k, raw)| {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() || line.starts_with('#') {
            None
        } else {
            Some((k + 1, line.split('\t').collect()))
        }
    })
}

struct SkillRecord {
    line: usize,
    id: String,
    skills: Vec<String>,
}

fn parse_skill_records(path: &Path, text: &str, what: &str) -> Result<Vec<SkillRecord>> {
    let mut out = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (line, fields) in records(text) {
        if fields.len() > 2 {
            return Err(parse_err(path, line, format!("expected `id<TAB>skills`, found {} fields", fields.len())));
        }
        let id = fields[0].trim();
        if id.is_empty() {
            return Err(parse_err(path, line, format!("empty {what} id")));
        }
        if let Some(first) = seen.insert(id.to_owned(), line) {
            return Err(parse_err(path, line, format!("duplicate {what} id {id:?} (first on line {first})")));
        }
        let list = fields.get(1).map(|s| s.trim()).unwrap_or("");
        let mut skills = Vec::new();
        if !list.is_empty() {
            for s in list.split(',') {
                let s = s.trim();
                if s.is_empty() {
                    return Err(parse_err(path, line, "empty skill name in list"));
                }
                skills.push(s.to_owned());
            }
        }
        out.push(SkillRecord {
            line,
            id: id.to_owned(),
            skills,
        });
    }
    Ok(out)
}

/// Reads an instance. Skills are numbered in order of first appearance,
/// experts file first; indices follow line order.
pub fn parse_instance(experts_path: &Path, tasks_path: &Path) -> Result<Instance> {
    let experts = parse_skill_records(experts_path, &read(experts_path)?, "expert")?;
    let tasks = parse_skill_records(tasks_path, &read(tasks_path)?, "task")?;
    let mut b = InstanceBuilder::new();
    for r in &experts {
        b.expert(&r.id, &r.skills);
    }
    for r in &tasks {
        if r.skills.is_empty() {
            return Err(parse_err(tasks_path, r.line, format!("task {:?} has no skills", r.id)));
        }
        b.task(&r.id, &r.skills);
    }
    b.build()
}

fn format_records<'a>(items: impl Iterator<Item = (&'a str, Vec<&'a str>)>) -> String {
    let mut out = String::new();
    for (id, skills) in items {
        let _ = writeln!(out, "{id}\t{}", skills.join(","));
    }
    out
}

pub fn format_experts(instance: &Instance) -> String {
    format_records(
        instance
            .experts()
            .iter()
            .map(|e| (e.name.as_str(), e.skills.iter().map(|s| instance.skill_name(s)).collect())),
    )
}

pub fn format_tasks(instance: &Instance) -> String {
    format_records(
        instance
            .tasks()
            .iter()
            .map(|t| (t.name.as_str(), t.skills.iter().map(|s| instance.skill_name(s)).collect())),
    )
}

pub fn write_instance(instance: &Instance, experts_path: &Path, tasks_path: &Path) -> Result<()> {
    write(experts_path, &format_experts(instance))?;
    write(tasks_path, &format_tasks(instance))
}

fn expert_index(instance: &Instance) -> HashMap<&str, u32> {
    instance
        .experts()
        .iter()
        .enumerate()
        .map(|(i, e)| (e.name.as_str(), i as u32))
        .collect()
}

/// Rows `id<TAB>id<TAB>number` with both ids resolved to expert indices.
fn parse_weighted_pairs(path: &Path, instance: &Instance, what: &str) -> Result<Vec<(u32, u32, f64)>> {
    let text = read(path)?;
    let index = expert_index(instance);
    let mut out = Vec::new();
    for (line, fields) in records(&text) {
        if fields.len() != 3 {
            return Err(parse_err(path, line, format!("expected `id<TAB>id<TAB>{what}`")));
        }
        let mut ends = [0u32; 2];
        for (slot, name) in ends.iter_mut().zip(&fields[..2]) {
            *slot = *index
                .get(name.trim())
                .ok_or_else(|| parse_err(path, line, format!("unknown expert id {:?}", name.trim())))?;
        }
        let value: f64 = fields[2]
            .trim()
            .parse()
            .map_err(|_| parse_err(path, line, format!("invalid {what} {:?}", fields[2].trim())))?;
        out.push((ends[0], ends[1], value));
    }
    Ok(out)
}

/// Reads an edge list and closes it under shortest paths.
pub fn parse_graph(path: &Path, instance: &Instance) -> Result<CoordinationGraph> {
    let edges = parse_weighted_pairs(path, instance, "weight")?;
    metric_closure(instance.num_experts(), &edges)
}

pub fn parse_pair_counts(path: &Path, instance: &Instance) -> Result<Vec<(u32, u32, f64)>> {
    parse_weighted_pairs(path, instance, "count")
}

pub fn format_edges(instance: &Instance, edges: &[(u32, u32, f64)]) -> String {
    let mut out = String::new();
    for &(i, j, w) in edges {
        let _ = writeln!(
            out,
            "{}\t{}\t{w}",
            instance.expert(i as usize).name,
            instance.expert(j as usize).name
        );
    }
    out
}

pub fn write_edges(path: &Path, instance: &Instance, edges: &[(u32, u32, f64)]) -> Result<()> {
    write(path, &format_edges(instance, edges))
}

/// `expert_id<TAB>task_id` lines sorted by (expert, task) index.
pub fn format_assignment(instance: &Instance, assignment: &Assignment) -> String {
    let mut out = String::new();
    for (i, j) in assignment.pairs() {
        let _ = writeln!(out, "{}\t{}", instance.expert(i).name, instance.task(j).name);
    }
    out
}

pub fn write_assignment(path: &Path, instance: &Instance, assignment: &Assignment) -> Result<()> {
    write(path, &format_assignment(instance, assignment))
}

pub fn parse_assignment(path: &Path, instance: &Instance) -> Result<Assignment> {
    let text = read(path)?;
    let experts = expert_index(instance);
    let tasks: HashMap<&str, usize> = instance
        .tasks()
        .iter()
        .enumerate()
        .map(|(j, t)| (t.name.as_str(), j))
        .collect();
    let mut a = Assignment::new(instance);
    for (line, fields) in records(&text) {
        if fields.len() != 2 {
            return Err(parse_err(path, line, "expected `expert_id<TAB>task_id`"));
        }
        let e = experts
            .get(fields[0].trim())
            .ok_or_else(|| parse_err(path, line, format!("unknown expert id {:?}", fields[0].trim())))?;
        let t = tasks
            .get(fields[1].trim())
            .ok_or_else(|| parse_err(path, line, format!("unknown task id {:?}", fields[1].trim())))?;
        a.insert(instance, *e as usize, *t);
    }
    Ok(a)
}

/// Header of every solver CSV.
pub const RUN_CSV_HEADER: &str = "kind,tau,coverage,realized_lmax,objective,wall_time_ms";

/// One `tau` row per visited threshold (`λ·C_τ − τ` in the objective
/// column), then a `summary` row for the returned assignment with its
/// realized `Lmax` and `λ·C − Lmax`. The wall-time cell is left empty when
/// `wall_time_ms` is `None`.
pub fn format_run_csv(instance: &Instance, solution: &Solution, wall_time_ms: Option<f64>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{RUN_CSV_HEADER}");
    for e in &solution.trace.entries {
        let _ = writeln!(out, "tau,{},{},,{},", e.tau, e.coverage.to_f64(), e.objective);
    }
    let time = wall_time_ms.map(|t| format!("{t:.3}")).unwrap_or_default();
    let _ = writeln!(
        out,
        "summary,{},{},{},{},{time}",
        solution.best_tau(),
        solution.coverage(instance).to_f64(),
        solution.realized_lmax(),
        solution.realized_objective(instance),
    );
    out
}

/// CSV for a single assignment without a τ trace (fixed-τ baselines).
pub fn format_assignment_csv(instance: &Instance, assignment: &Assignment, lambda: f64, tau: Option<u32>, wall_time_ms: Option<f64>) -> String {
    let time = wall_time_ms.map(|t| format!("{t:.3}")).unwrap_or_default();
    format!(
        "{RUN_CSV_HEADER}\nsummary,{},{},{},{},{time}\n",
        tau.map(|t| t.to_string()).unwrap_or_default(),
        assignment.total_coverage(instance).to_f64(),
        assignment.max_load(),
        assignment.objective(instance, lambda),
    )
}

pub const SWEEP_CSV_HEADER: &str = "lambda,best_tau,coverage,max_load,objective";

pub fn format_sweep_csv(report: &crate::threshold::LambdaSweepReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{SWEEP_CSV_HEADER}");
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.lambda,
            r.best_tau,
            r.coverage.to_f64(),
            r.max_load,
            r.objective
        );
    }
    out
}

pub const METRICS_CSV_HEADER: &str = "task,size,radius,density,pairwise";

pub fn format_metrics_csv(instance: &Instance, report: &crate::metrics::TeamReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{METRICS_CSV_HEADER}");
    for r in &report.rows {
        let pairwise = r.pairwise.map(|p| p.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{pairwise}",
            instance.task(r.task).name,
            r.size,
            r.radius,
            r.density
        );
    }
    let avg_pairwise = report.avg_pairwise.map(|p| p.to_string()).unwrap_or_default();
    let _ = writeln!(
        out,
        "average,{},{},{},{avg_pairwise}",
        report.avg_size, report.avg_radius, report.avg_density
    );
    let _ = writeln!(out, "max,{},,,", report.max_size);
    out
}
