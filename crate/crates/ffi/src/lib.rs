//! C ABI over the `teamcover` solvers.
//!
//! Every function returns a [`TcStatus`]; results come back through out
//! pointers. Objects are opaque and owned by the caller once returned; free
//! them with the matching `*_free` function. On failure a message is kept
//! per thread and can be read with [`tc_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::slice;

use teamcover::graph::{metric_closure, CoordinationGraph};
use teamcover::io::parse_instance;
use teamcover::nthreshold::{nthreshold, CandidateMode, Matcher, NThresholdConfig};
use teamcover::{threshold_greedy, Error, Instance, SearchMode, Solution};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TcStatus {
    TcOk = 0,
    TcNullPointer = 1,
    TcInvalidArgument = 2,
    TcParse = 3,
    TcIo = 4,
    TcSolver = 5,
    TcPanic = 6,
}

/// Search over τ: linear scan.
pub const TC_SEARCH_LINEAR: u32 = 0;
/// Search over τ: doubling probes, then a linear scan of the bracket.
pub const TC_SEARCH_EXP_LINEAR: u32 = 1;
/// Search over τ: every τ from 1 to m.
pub const TC_SEARCH_FULL: u32 = 2;

pub struct TcInstance(Instance);

pub struct TcGraph(CoordinationGraph);

pub struct TcSolution {
    solution: Solution,
    coverage: f64,
    objective: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: TcStatus, msg: &str) -> TcStatus {
    set_error(msg);
    status
}

fn from_error(e: &Error) -> TcStatus {
    let status = match e {
        Error::Parse { .. } => TcStatus::TcParse,
        Error::Io { .. } => TcStatus::TcIo,
        Error::InvalidInput(_) => TcStatus::TcInvalidArgument,
        Error::TooLarge(_) | Error::ScaleOverflow(_) => TcStatus::TcSolver,
    };
    fail(status, &e.to_string())
}

fn guard(f: impl FnOnce() -> TcStatus) -> TcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(TcStatus::TcPanic, &format!("panic: {msg}"))
        }
    }
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

unsafe fn path<'a>(p: *const c_char) -> Result<&'a Path, TcStatus> {
    if p.is_null() {
        return Err(fail(TcStatus::TcNullPointer, "path is null"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Path::new)
        .map_err(|_| fail(TcStatus::TcInvalidArgument, "path is not valid UTF-8"))
}

/// Reads `len` items; a null pointer is accepted only when `len` is 0.
unsafe fn array<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], TcStatus> {
    if len == 0 {
        Ok(&[])
    } else if p.is_null() {
        Err(fail(TcStatus::TcNullPointer, &format!("{what} is null")))
    } else {
        Ok(slice::from_raw_parts(p, len))
    }
}

/// Splits CSR arrays (`offsets` has `count + 1` entries) into lists.
unsafe fn csr(offsets: *const u32, values: *const u32, count: usize, what: &str) -> Result<Vec<Vec<u32>>, TcStatus> {
    let offsets = array(offsets, count + 1, what)?;
    let end = *offsets.last().unwrap_or(&0) as usize;
    let values = array(values, end, what)?;
    let mut out = Vec::with_capacity(count);
    for w in offsets.windows(2) {
        let (a, b) = (w[0] as usize, w[1] as usize);
        if a > b || b > end {
            return Err(fail(TcStatus::TcInvalidArgument, &format!("{what} offsets are not monotone")));
        }
        out.push(values[a..b].to_vec());
    }
    Ok(out)
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses the TAB-separated experts and tasks files.
///
/// # Safety
/// Paths must be null or NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_instance_from_files(
    experts_path: *const c_char,
    tasks_path: *const c_char,
    out: *mut *mut TcInstance,
) -> TcStatus {
    guard(|| {
        if out.is_null() {
            return fail(TcStatus::TcNullPointer, "out is null");
        }
        let (e, t) = match (path(experts_path), path(tasks_path)) {
            (Ok(e), Ok(t)) => (e, t),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match parse_instance(e, t) {
            Ok(inst) => {
                put(out, TcInstance(inst));
                TcStatus::TcOk
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Builds an instance from skill ids in CSR form: expert `i` holds
/// `expert_skills[expert_offsets[i]..expert_offsets[i + 1]]`, likewise for
/// tasks. Offset arrays have `count + 1` entries.
///
/// # Safety
/// Arrays must hold the stated number of elements; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_instance_from_arrays(
    num_skills: u32,
    num_experts: usize,
    expert_offsets: *const u32,
    expert_skills: *const u32,
    num_tasks: usize,
    task_offsets: *const u32,
    task_skills: *const u32,
    out: *mut *mut TcInstance,
) -> TcStatus {
    guard(|| {
        if out.is_null() {
            return fail(TcStatus::TcNullPointer, "out is null");
        }
        let experts = match csr(expert_offsets, expert_skills, num_experts, "expert skills") {
            Ok(v) => v,
            Err(s) => return s,
        };
        let tasks = match csr(task_offsets, task_skills, num_tasks, "task skills") {
            Ok(v) => v,
            Err(s) => return s,
        };
        match Instance::from_skill_ids(num_skills as usize, &experts, &tasks) {
            Ok(inst) => {
                put(out, TcInstance(inst));
                TcStatus::TcOk
            }
            Err(e) => from_error(&e),
        }
    })
}

/// # Safety
/// `instance` must be null or a pointer returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn tc_instance_free(instance: *mut TcInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// Number of experts, 0 for a null instance.
///
/// # Safety
/// `instance` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn tc_instance_num_experts(instance: *const TcInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.0.num_experts())
}

/// Number of tasks, 0 for a null instance.
///
/// # Safety
/// `instance` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn tc_instance_num_tasks(instance: *const TcInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.0.num_tasks())
}

/// Shortest-path closure of an undirected weighted edge list over
/// `num_experts` nodes.
///
/// # Safety
/// The three edge arrays must hold `num_edges` elements; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn tc_graph_from_edges(
    num_experts: usize,
    sources: *const u32,
    targets: *const u32,
    weights: *const f64,
    num_edges: usize,
    out: *mut *mut TcGraph,
) -> TcStatus {
    guard(|| {
        if out.is_null() {
            return fail(TcStatus::TcNullPointer, "out is null");
        }
        let arrays = (
            array(sources, num_edges, "sources"),
            array(targets, num_edges, "targets"),
            array(weights, num_edges, "weights"),
        );
        let (s, t, w) = match arrays {
            (Ok(s), Ok(t), Ok(w)) => (s, t, w),
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return e,
        };
        let edges: Vec<(u32, u32, f64)> = (0..num_edges).map(|k| (s[k], t[k], w[k])).collect();
        match metric_closure(num_experts, &edges) {
            Ok(g) => {
                put(out, TcGraph(g));
                TcStatus::TcOk
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Closure distance between experts `i` and `j` (infinity if disconnected).
///
/// # Safety
/// `graph` must be valid and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tc_graph_distance(graph: *const TcGraph, i: usize, j: usize, out: *mut f64) -> TcStatus {
    guard(|| {
        let Some(g) = graph.as_ref() else {
            return fail(TcStatus::TcNullPointer, "graph is null");
        };
        if out.is_null() {
            return fail(TcStatus::TcNullPointer, "out is null");
        }
        let n = g.0.num_experts();
        if i >= n || j >= n {
            return fail(TcStatus::TcInvalidArgument, &format!("expert index out of range 0..{n}"));
        }
        *out = g.0.distance(i, j);
        TcStatus::TcOk
    })
}

/// # Safety
/// `graph` must be null or a pointer returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn tc_graph_free(graph: *mut TcGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

fn search_mode(code: u32) -> Result<SearchMode, TcStatus> {
    match code {
        TC_SEARCH_LINEAR => Ok(SearchMode::Linear),
        TC_SEARCH_EXP_LINEAR => Ok(SearchMode::ExpLinear),
        TC_SEARCH_FULL => Ok(SearchMode::Full),
        other => Err(fail(TcStatus::TcInvalidArgument, &format!("unknown search mode {other}"))),
    }
}

unsafe fn finish(inst: &Instance, result: teamcover::Result<Solution>, out: *mut *mut TcSolution) -> TcStatus {
    match result {
        Ok(solution) => {
            let coverage = solution.coverage(inst).to_f64();
            let objective = solution.realized_objective(inst);
            put(
                out,
                TcSolution {
                    solution,
                    coverage,
                    objective,
                },
            );
            TcStatus::TcOk
        }
        Err(e) => from_error(&e),
    }
}

/// ThresholdGreedy with balancing coefficient `lambda`; `search` is one of
/// the `TC_SEARCH_*` codes.
///
/// # Safety
/// `instance` must be valid and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tc_threshold_greedy(
    instance: *const TcInstance,
    lambda: f64,
    search: u32,
    out: *mut *mut TcSolution,
) -> TcStatus {
    guard(|| {
        let Some(inst) = instance.as_ref() else {
            return fail(TcStatus::TcNullPointer, "instance is null");
        };
        if out.is_null() {
            return fail(TcStatus::TcNullPointer, "out is null");
        }
        let mode = match search_mode(search) {
            Ok(m) => m,
            Err(s) => return s,
        };
        finish(&inst.0, threshold_greedy(&inst.0, lambda, mode), out)
    })
}

/// NThreshold with team radius bound `radius`. `all_radii` selects balls at
/// `k` evenly split radii instead of radius `radius` only; `greedy_matcher`
/// selects the greedy team matcher instead of the exact one.
///
/// # Safety
/// `instance` and `graph` must be valid and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tc_nthreshold(
    instance: *const TcInstance,
    graph: *const TcGraph,
    lambda: f64,
    radius: f64,
    all_radii: bool,
    k: u32,
    greedy_matcher: bool,
    search: u32,
    out: *mut *mut TcSolution,
) -> TcStatus {
    guard(|| {
        let (Some(inst), Some(g)) = (instance.as_ref(), graph.as_ref()) else {
            return fail(TcStatus::TcNullPointer, "instance or graph is null");
        };
        if out.is_null() {
            return fail(TcStatus::TcNullPointer, "out is null");
        }
        let mode = match search_mode(search) {
            Ok(m) => m,
            Err(s) => return s,
        };
        let mut cfg = NThresholdConfig::new(radius, lambda);
        if all_radii {
            cfg.candidates = CandidateMode::AllRadii { splits: k };
        }
        if greedy_matcher {
            cfg.matcher = Matcher::Greedy;
        }
        cfg.search = mode;
        finish(&inst.0, nthreshold(&inst.0, &g.0, &cfg).map(|o| o.solution), out)
    })
}

/// Winning threshold; 0 means the empty assignment won.
///
/// # Safety
/// `solution` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn tc_solution_best_tau(solution: *const TcSolution) -> u32 {
    solution.as_ref().map_or(0, |s| s.solution.best_tau())
}

/// Total coverage of the returned assignment.
///
/// # Safety
/// `solution` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn tc_solution_coverage(solution: *const TcSolution) -> f64 {
    solution.as_ref().map_or(0.0, |s| s.coverage)
}

/// Largest expert load of the returned assignment.
///
/// # Safety
/// `solution` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn tc_solution_max_load(solution: *const TcSolution) -> u32 {
    solution.as_ref().map_or(0, |s| s.solution.realized_lmax())
}

/// `λ·C − Lmax` of the returned assignment.
///
/// # Safety
/// `solution` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn tc_solution_objective(solution: *const TcSolution) -> f64 {
    solution.as_ref().map_or(0.0, |s| s.objective)
}

/// Number of (expert, task) pairs in the returned assignment.
///
/// # Safety
/// `solution` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn tc_solution_num_pairs(solution: *const TcSolution) -> usize {
    solution.as_ref().map_or(0, |s| s.solution.assignment.len())
}

/// Copies the pairs, sorted by (expert, task), into two arrays of
/// `capacity` elements. Fails with `TC_INVALID_ARGUMENT` if they are too
/// short.
///
/// # Safety
/// `solution` must be valid; both arrays must hold `capacity` elements.
#[no_mangle]
pub unsafe extern "C" fn tc_solution_pairs(
    solution: *const TcSolution,
    experts: *mut u32,
    tasks: *mut u32,
    capacity: usize,
) -> TcStatus {
    guard(|| {
        let Some(s) = solution.as_ref() else {
            return fail(TcStatus::TcNullPointer, "solution is null");
        };
        let pairs = s.solution.assignment.pairs();
        if pairs.len() > capacity {
            return fail(
                TcStatus::TcInvalidArgument,
                &format!("capacity {capacity} below {} pairs", pairs.len()),
            );
        }
        if pairs.is_empty() {
            return TcStatus::TcOk;
        }
        if experts.is_null() || tasks.is_null() {
            return fail(TcStatus::TcNullPointer, "output array is null");
        }
        let (e, t) = (slice::from_raw_parts_mut(experts, capacity), slice::from_raw_parts_mut(tasks, capacity));
        for (k, (i, j)) in pairs.into_iter().enumerate() {
            e[k] = i as u32;
            t[k] = j as u32;
        }
        TcStatus::TcOk
    })
}

/// # Safety
/// `solution` must be null or a pointer returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn tc_solution_free(solution: *mut TcSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}
