use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const RUN_HEADER: &str = "kind,tau,coverage,realized_lmax,objective,wall_time_ms";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_teamcover"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn tiny_files(dir: &Path) {
    fs::write(dir.join("experts.tsv"), "# TINY\nX1\ta,b\nX2\tc\nX3\ta,c,d\n").unwrap();
    fs::write(dir.join("tasks.tsv"), "J1\ta,b\nJ2\tc,d\n").unwrap();
    fs::write(dir.join("graph.tsv"), "X1\tX2\t0.2\nX2\tX3\t0.3\nX1\tX3\t0.4\n").unwrap();
}

fn summary(csv: &str) -> Vec<String> {
    csv.lines()
        .find(|l| l.starts_with("summary,"))
        .unwrap()
        .split(',')
        .map(str::to_owned)
        .collect()
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn solve_balanced_tiny() {
    let dir = tempfile::tempdir().unwrap();
    tiny_files(dir.path());
    let out = run(
        dir.path(),
        &["solve-balanced", "--experts", "experts.tsv", "--tasks", "tasks.tsv", "--lambda", "2", "--out", "run.csv"],
    );
    ok(&out);
    let csv = fs::read_to_string(dir.path().join("run.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), RUN_HEADER);
    let s = summary(&csv);
    assert_eq!(s[1], "1");
    assert_eq!(s[4].parse::<f64>().unwrap(), 3.0);
    assert_eq!(s[5], "");
    let sidecar = fs::read_to_string(dir.path().join("run.csv.assignment.tsv")).unwrap();
    assert_eq!(sidecar, "X1\tJ1\nX3\tJ2\n");
}

#[test]
fn timing_fills_last_column() {
    let dir = tempfile::tempdir().unwrap();
    tiny_files(dir.path());
    let csv = ok(&run(
        dir.path(),
        &["solve-balanced", "--experts", "experts.tsv", "--tasks", "tasks.tsv", "--lambda", "2", "--timing"],
    ));
    assert!(summary(&csv)[5].parse::<f64>().unwrap() >= 0.0);
}

#[test]
fn lambda_sweep_rows() {
    let dir = tempfile::tempdir().unwrap();
    tiny_files(dir.path());
    let csv = ok(&run(
        dir.path(),
        &["lambda-sweep", "--experts", "experts.tsv", "--tasks", "tasks.tsv", "--lambdas", "4,2,0.4"],
    ));
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "lambda,best_tau,coverage,max_load,objective");
    let taus: Vec<u32> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(taus.len(), 3);
    assert!(taus.windows(2).all(|w| w[1] <= w[0]), "{taus:?}");
}

#[test]
fn solve_network_requires_graph() {
    let dir = tempfile::tempdir().unwrap();
    tiny_files(dir.path());
    let out = run(
        dir.path(),
        &["solve-network", "--experts", "experts.tsv", "--tasks", "tasks.tsv", "--lambda", "2", "--radius", "1"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn solve_network_tiny() {
    let dir = tempfile::tempdir().unwrap();
    tiny_files(dir.path());
    for extra in [&["--candidates", "r"][..], &["--candidates", "allr", "--k", "3", "--matcher", "greedy"]] {
        let mut args = vec![
            "solve-network",
            "--experts",
            "experts.tsv",
            "--tasks",
            "tasks.tsv",
            "--graph",
            "graph.tsv",
            "--lambda",
            "2",
            "--radius",
            "1",
        ];
        args.extend_from_slice(extra);
        let csv = ok(&run(dir.path(), &args));
        assert_eq!(summary(&csv)[4].parse::<f64>().unwrap(), 3.0);
    }
}

#[test]
fn missing_input_and_unknown_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["solve-balanced", "--experts", "nope", "--tasks", "nope", "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope"));
    let out = run(dir.path(), &["solve-balanced", "--wat"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_error_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    tiny_files(dir.path());
    fs::write(dir.path().join("tasks.tsv"), "J1\ta,b\nJ2\n").unwrap();
    let out = run(
        dir.path(),
        &["solve-balanced", "--experts", "experts.tsv", "--tasks", "tasks.tsv", "--lambda", "2"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tasks.tsv:2"));
}

#[test]
fn oracle_too_large_is_solver_error() {
    let dir = tempfile::tempdir().unwrap();
    tiny_files(dir.path());
    let out = run(
        dir.path(),
        &["oracle", "--experts", "experts.tsv", "--tasks", "tasks.tsv", "--lambda", "2", "--max-pairs", "4"],
    );
    assert_eq!(out.status.code(), Some(1));
    let csv = ok(&run(
        dir.path(),
        &["oracle", "--experts", "experts.tsv", "--tasks", "tasks.tsv", "--lambda", "2"],
    ));
    assert_eq!(summary(&csv)[4].parse::<f64>().unwrap(), 3.0);
}

#[test]
fn baselines_and_metrics() {
    let dir = tempfile::tempdir().unwrap();
    tiny_files(dir.path());
    let base = ["--experts", "experts.tsv", "--tasks", "tasks.tsv", "--lambda", "2"];
    for algo in [&["task-greedy"][..], &["no-update", "--beta", "0.5"]] {
        let mut args = vec!["baseline", "--algo"];
        args.extend_from_slice(algo);
        args.extend_from_slice(&base);
        let csv = ok(&run(dir.path(), &args));
        assert_eq!(csv.lines().next().unwrap(), RUN_HEADER);
    }
    let mut args = vec!["baseline", "--algo", "greedy-individual", "--graph", "graph.tsv", "--radius", "0.5"];
    args.extend_from_slice(&base);
    args.extend_from_slice(&["--out", "gi.csv", "--assignment", "gi.tsv"]);
    ok(&run(dir.path(), &args));
    let csv = ok(&run(
        dir.path(),
        &[
            "metrics",
            "--experts",
            "experts.tsv",
            "--tasks",
            "tasks.tsv",
            "--graph",
            "graph.tsv",
            "--assignment",
            "gi.tsv",
        ],
    ));
    assert_eq!(csv.lines().next().unwrap(), "task,size,radius,density,pairwise");
    assert!(csv.lines().any(|l| l.starts_with("average,")));
}

#[test]
fn generate_and_build_graph() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let gen = |e: &str, t: &str| {
        ok(&run(
            d,
            &[
                "generate",
                "--experts",
                e,
                "--tasks",
                t,
                "--num-experts",
                "20",
                "--num-tasks",
                "30",
                "--num-skills",
                "8",
                "--skills-per-expert",
                "2.2",
                "--skills-per-task",
                "2",
                "--seed",
                "7",
            ],
        ))
    };
    gen("e1.tsv", "t1.tsv");
    gen("e2.tsv", "t2.tsv");
    assert_eq!(fs::read(d.join("e1.tsv")).unwrap(), fs::read(d.join("e2.tsv")).unwrap());
    assert_eq!(fs::read(d.join("t1.tsv")).unwrap(), fs::read(d.join("t2.tsv")).unwrap());

    ok(&run(
        d,
        &["build-graph", "--experts", "e1.tsv", "--tasks", "t1.tsv", "--kind", "jaccard", "--out", "j.tsv"],
    ));
    assert_eq!(fs::read_to_string(d.join("j.tsv")).unwrap().lines().count(), 190);

    fs::write(d.join("pairs.tsv"), "e0\te1\t10\ne1\te2\t3\n").unwrap();
    let edges = ok(&run(
        d,
        &["build-graph", "--experts", "e1.tsv", "--tasks", "t1.tsv", "--kind", "cooccurrence", "--pairs", "pairs.tsv"],
    ));
    let w: f64 = edges.lines().next().unwrap().split('\t').nth(2).unwrap().parse().unwrap();
    assert!((w - (-1.0f64).exp()).abs() < 1e-12);
    let out = run(d, &["build-graph", "--experts", "e1.tsv", "--tasks", "t1.tsv", "--kind", "cooccurrence"]);
    assert_eq!(out.status.code(), Some(2));
}

