//! CLI integration: schemas, determinism, exit codes, config files.

use std::path::PathBuf;

use muntz_spectral::cli::{main_impl, parse_args, run};
use muntz_spectral::quadrature::{mapped_rule, MuntzBasisParams};
use muntz_spectral::jacobi::JacobiParams;

fn argv(args: &[&str]) -> Vec<String> {
    args.iter().map(|s| s.to_string()).collect()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("muntz_cli_integration");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run_to_file(args: &[&str], name: &str) -> String {
    let path = tmp(name);
    let mut full = argv(args);
    full.push("--output".into());
    full.push(path.to_str().unwrap().into());
    let config = parse_args(&full).unwrap();
    run(&config).unwrap();
    std::fs::read_to_string(&path).unwrap()
}

#[test]
fn quad_csv_matches_library_values() {
    let text = run_to_file(
        &[
            "quad", "--alpha", "-0.5", "--beta", "2", "--sigma", "0.5", "--b", "10", "--n", "5",
        ],
        "quad.csv",
    );
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "j,node,weight");
    let params = MuntzBasisParams::new(
        JacobiParams::new(-0.5, 2.0).unwrap(),
        0.5,
        0.0,
        0.5,
        10.0,
    )
    .unwrap();
    let rule = mapped_rule(5, params).unwrap();
    for (j, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[0].parse::<usize>().unwrap(), j);
        let node: f64 = cells[1].parse().unwrap();
        let weight: f64 = cells[2].parse().unwrap();
        assert!((node - rule.nodes[j]).abs() < 1e-15 * (1.0 + node.abs()));
        assert!((weight - rule.weights[j]).abs() < 1e-15 * (1.0 + weight.abs()));
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = run_to_file(&["paper-repro", "ex3", "--sweep", "10,20"], "det_a.csv");
    let b = run_to_file(&["paper-repro", "ex3", "--sweep", "10,20"], "det_b.csv");
    assert_eq!(a, b);
    // line endings are bare newlines
    assert!(!a.contains('\r'));
    assert!(a.ends_with('\n'));
}

#[test]
fn sweep_parallelism_does_not_change_bytes() {
    // single-threaded reference
    std::env::set_var("MUNTZ_SPECTRAL_THREADS", "1");
    let serial = run_to_file(&["solve-nonlinear", "--sweep", "10,15,20"], "serial.csv");
    std::env::set_var("MUNTZ_SPECTRAL_THREADS", "4");
    let parallel = run_to_file(&["solve-nonlinear", "--sweep", "10,15,20"], "parallel.csv");
    std::env::remove_var("MUNTZ_SPECTRAL_THREADS");
    assert_eq!(serial, parallel);
}

#[test]
fn zero_rhs_solution_is_zero() {
    let text = run_to_file(&["solve-linear", "--problem", "zero", "--n", "8"], "zero.csv");
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,y,exact,abs_err");
    for line in lines {
        let y: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(y.abs() < 1e-12, "{line}");
    }
}

#[test]
fn json_mirrors_csv_schema() {
    let text = run_to_file(&["quad", "--n", "2", "--format", "json"], "quad.json");
    assert!(text.contains("\"schema_version\": 1"));
    assert!(text.contains("\"command\": \"quad\""));
    assert!(text.contains("\"columns\": [\"j\", \"node\", \"weight\"]"));
}

#[test]
fn exit_codes() {
    // validation failures exit 2
    assert_eq!(main_impl(&argv(&["nonsense"])), 2);
    assert_eq!(main_impl(&argv(&["quad", "--alpha", "abc"])), 2);
    assert_eq!(main_impl(&argv(&["quad", "--alpha", "-2.0"])), 2);
    // numeric failure (direct construction overflow) exits 3
    let out = tmp("overflow.csv");
    assert_eq!(
        main_impl(&argv(&[
            "diffmat",
            "--side",
            "left",
            "--approach",
            "direct",
            "--n",
            "120",
            "--output",
            out.to_str().unwrap(),
        ])),
        3
    );
    // success exits 0
    let ok = tmp("ok.csv");
    assert_eq!(
        main_impl(&argv(&["quad", "--n", "3", "--output", ok.to_str().unwrap()])),
        0
    );
}

#[test]
fn paper_repro_ex1_reproduces_table_band() {
    let text = run_to_file(&["paper-repro", "ex1", "--sweep", "45"], "ex1.csv");
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "N,mu,approach,cond,cond_over_2n2mu,max_err"
    );
    // the stable rows at N=45 must sit in the published ratio band
    let refs = [(0.25, 0.9453), (0.5, 1.1183), (0.75, 1.1487)];
    let mut seen = 0;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        if cells[2] != "stable" {
            continue;
        }
        let mu: f64 = cells[1].parse().unwrap();
        let ratio: f64 = cells[4].parse().unwrap();
        let want = refs.iter().find(|(m, _)| (*m - mu).abs() < 1e-12).unwrap().1;
        assert!(
            ((ratio - want) / want).abs() < 0.05,
            "mu={mu}: {ratio} vs {want}"
        );
        seen += 1;
    }
    assert_eq!(seen, 3);
}

#[test]
fn config_file_drives_a_solve() {
    let cfg = tmp("run.cfg");
    std::fs::write(&cfg, "problem = riccati\nn = 30\n").unwrap();
    let out = tmp("riccati_cfg.csv");
    let code = main_impl(&argv(&[
        "solve-nonlinear",
        "--config",
        cfg.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]));
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), "x,y,exact,abs_err");
    assert_eq!(text.lines().count(), 32); // header + 31 nodes
}
