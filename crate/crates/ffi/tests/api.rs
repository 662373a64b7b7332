use std::ffi::{CStr, CString};
use std::fs;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use teamcover_ffi::*;

// TINY: X1={a,b}, X2={c}, X3={a,c,d}; J1={a,b}, J2={c,d}; skills a..d = 0..3
unsafe fn tiny() -> *mut TcInstance {
    let expert_offsets = [0u32, 2, 3, 6];
    let expert_skills = [0u32, 1, 2, 0, 2, 3];
    let task_offsets = [0u32, 2, 4];
    let task_skills = [0u32, 1, 2, 3];
    let mut inst = ptr::null_mut();
    let status = tc_instance_from_arrays(
        4,
        3,
        expert_offsets.as_ptr(),
        expert_skills.as_ptr(),
        2,
        task_offsets.as_ptr(),
        task_skills.as_ptr(),
        &mut inst,
    );
    assert_eq!(status, TcStatus::TcOk);
    inst
}

unsafe fn last_error() -> String {
    let p = tc_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

#[test]
fn threshold_greedy_on_tiny() {
    unsafe {
        let inst = tiny();
        assert_eq!((tc_instance_num_experts(inst), tc_instance_num_tasks(inst)), (3, 2));
        let mut sol = ptr::null_mut();
        assert_eq!(tc_threshold_greedy(inst, 2.0, TC_SEARCH_EXP_LINEAR, &mut sol), TcStatus::TcOk);
        assert_eq!(tc_solution_best_tau(sol), 1);
        assert_eq!(tc_solution_objective(sol), 3.0);
        assert_eq!(tc_solution_coverage(sol), 2.0);
        assert_eq!(tc_solution_max_load(sol), 1);
        let n = tc_solution_num_pairs(sol);
        let (mut e, mut t) = (vec![0u32; n], vec![0u32; n]);
        assert_eq!(tc_solution_pairs(sol, e.as_mut_ptr(), t.as_mut_ptr(), n), TcStatus::TcOk);
        assert_eq!((e, t), (vec![0, 2], vec![0, 1]));
        let mut short = [0u32; 1];
        assert_eq!(
            tc_solution_pairs(sol, short.as_mut_ptr(), short.as_mut_ptr(), 1),
            TcStatus::TcInvalidArgument
        );
        tc_solution_free(sol);
        tc_instance_free(inst);
    }
}

#[test]
fn nthreshold_on_tiny() {
    unsafe {
        let inst = tiny();
        let (s, t, w) = ([0u32, 1], [1u32, 2], [0.2, 0.3]);
        let mut g = ptr::null_mut();
        assert_eq!(tc_graph_from_edges(3, s.as_ptr(), t.as_ptr(), w.as_ptr(), 2, &mut g), TcStatus::TcOk);
        let mut d = 0.0;
        assert_eq!(tc_graph_distance(g, 0, 2, &mut d), TcStatus::TcOk);
        assert!((d - 0.5).abs() < 1e-12);
        assert_eq!(tc_graph_distance(g, 0, 3, &mut d), TcStatus::TcInvalidArgument);
        for (all, greedy) in [(false, false), (true, true)] {
            let mut sol = ptr::null_mut();
            let status = tc_nthreshold(inst, g, 2.0, 1.0, all, 3, greedy, TC_SEARCH_EXP_LINEAR, &mut sol);
            assert_eq!(status, TcStatus::TcOk);
            assert_eq!(tc_solution_objective(sol), 3.0);
            tc_solution_free(sol);
        }
        tc_graph_free(g);
        tc_instance_free(inst);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut inst = ptr::null_mut();
        let missing = CString::new("/nonexistent/experts.tsv").unwrap();
        assert_eq!(tc_instance_from_files(missing.as_ptr(), missing.as_ptr(), &mut inst), TcStatus::TcIo);
        assert!(last_error().contains("nonexistent"));
        assert_eq!(tc_instance_from_files(ptr::null(), missing.as_ptr(), &mut inst), TcStatus::TcNullPointer);

        let offsets = [0u32, 1];
        let skills = [7u32];
        let status = tc_instance_from_arrays(
            2,
            1,
            offsets.as_ptr(),
            skills.as_ptr(),
            1,
            offsets.as_ptr(),
            skills.as_ptr(),
            &mut inst,
        );
        assert_eq!(status, TcStatus::TcInvalidArgument);

        let tiny = tiny();
        let mut sol = ptr::null_mut();
        assert_eq!(tc_threshold_greedy(tiny, 2.0, 9, &mut sol), TcStatus::TcInvalidArgument);
        assert_eq!(tc_threshold_greedy(tiny, -1.0, TC_SEARCH_FULL, &mut sol), TcStatus::TcInvalidArgument);
        assert!(sol.is_null());
        assert_eq!(tc_threshold_greedy(ptr::null(), 1.0, TC_SEARCH_FULL, &mut sol), TcStatus::TcNullPointer);
        tc_instance_free(tiny);

        let mut g = ptr::null_mut();
        let (s, t, w) = ([0u32], [5u32], [1.0]);
        assert_eq!(tc_graph_from_edges(2, s.as_ptr(), t.as_ptr(), w.as_ptr(), 1, &mut g), TcStatus::TcInvalidArgument);

        tc_instance_free(ptr::null_mut());
        tc_graph_free(ptr::null_mut());
        tc_solution_free(ptr::null_mut());
        assert_eq!(tc_solution_num_pairs(ptr::null()), 0);
    }
}

#[test]
fn instance_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let (e, t) = (dir.path().join("e.tsv"), dir.path().join("t.tsv"));
    fs::write(&e, "X1\ta,b\nX2\tc\nX3\ta,c,d\n").unwrap();
    fs::write(&t, "J1\ta,b\nJ2\tc,d\n").unwrap();
    let (e, t) = (
        CString::new(e.to_str().unwrap()).unwrap(),
        CString::new(t.to_str().unwrap()).unwrap(),
    );
    unsafe {
        let mut inst = ptr::null_mut();
        assert_eq!(tc_instance_from_files(e.as_ptr(), t.as_ptr(), &mut inst), TcStatus::TcOk);
        assert_eq!(tc_instance_num_experts(inst), 3);
        tc_instance_free(inst);
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "teamcover.h"

int main(void) {
    uint32_t eo[] = {0, 2, 3, 6}, es[] = {0, 1, 2, 0, 2, 3};
    uint32_t to[] = {0, 2, 4}, ts[] = {0, 1, 2, 3};
    TcInstance *inst = NULL;
    TcSolution *sol = NULL;
    if (tc_instance_from_arrays(4, 3, eo, es, 2, to, ts, &inst) != TC_OK) return 1;
    if (tc_threshold_greedy(inst, 2.0, TC_SEARCH_EXP_LINEAR, &sol) != TC_OK) return 2;
    printf("%u %.1f\n", tc_solution_best_tau(sol), tc_solution_objective(sol));
    if (tc_threshold_greedy(inst, 2.0, 42, &sol) != TC_INVALID_ARGUMENT) return 3;
    if (tc_last_error_message() == NULL) return 4;
    tc_solution_free(sol);
    tc_instance_free(inst);
    return 0;
}
"#;

/// Compiles a C program against the generated header and the static
/// library. Skipped when no C compiler is on PATH.
#[test]
fn c_program_links_against_header() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found, skipping");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libteamcover_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built, skipping", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let exe = dir.path().join("smoke");
    fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "1 3.0\n");
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
        .ok_or(())
}
