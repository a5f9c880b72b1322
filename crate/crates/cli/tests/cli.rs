use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn twopiece(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twopiece"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = twopiece(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn solve_matches_golden_tables() {
    for well in ["triangular", "convexp", "divexp"] {
        let got = stdout_of(&["solve", "--well", well]);
        assert_eq!(got, golden(&format!("solve_{well}.csv")), "{well}");
    }
}

#[test]
fn solve_reproduces_quoted_energies() {
    let quoted = [
        ("triangular", [2.9789, 6.8366]),
        ("convexp", [-7.3460, -1.0622]),
        ("divexp", [6.4646, 17.5365]),
    ];
    let rows: Value = serde_json::from_str(&stdout_of(&["solve", "--format", "json"])).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for (i, row) in rows.iter().enumerate() {
        let (well, e) = quoted[i / 2];
        assert_eq!(row["well"]["kind"], well);
        assert!((row["energy"].as_f64().unwrap() - e[i % 2]).abs() < 5e-4);
        assert!(row["oracle"]["abs_energy_diff"].as_f64().unwrap() < 1e-3);
    }
}

#[test]
fn tails_match_golden_and_order_by_parity() {
    let got = stdout_of(&["tails", "--format", "csv"]);
    assert_eq!(got, golden("tails.csv"));
    let report: Value = serde_json::from_str(&stdout_of(&["tails"])).unwrap();
    let states = report["states"].as_array().unwrap();
    for pair in states.chunks(2) {
        let s0 = pair[0]["tail_fit"]["exponent"].as_f64().unwrap();
        let s1 = pair[1]["tail_fit"]["exponent"].as_f64().unwrap();
        assert!(s0 < s1, "{s0} vs {s1}");
    }
}

#[test]
fn figure_output_is_byte_stable() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let out = twopiece(&[
            "figure",
            "--well",
            "triangular",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let names = ["triangular_n0.csv", "triangular_n1.csv", "triangular.json"];
    for name in names {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
    let csv = std::fs::read_to_string(a.path().join("triangular_n0.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("p,I,p2I,p4I,p6I"));
    assert_eq!(lines.count(), 200);
    assert!(!csv.contains('\r'));
    let sidecar: Value =
        serde_json::from_str(&std::fs::read_to_string(a.path().join("triangular.json")).unwrap())
            .unwrap();
    assert_eq!(sidecar["states"].as_array().unwrap().len(), 2);
    assert_eq!(
        sidecar["states"][1]["moments"][2]["verdict"]["verdict"],
        "converged"
    );
}

#[test]
fn figure_shows_the_long_even_tail() {
    let dir = tempfile::tempdir().unwrap();
    let out = twopiece(&[
        "figure",
        "--well",
        "triangular",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let column = |name: &str| -> Vec<(f64, f64)> {
        std::fs::read_to_string(dir.path().join(name))
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| {
                let f: Vec<f64> = l.split(',').map(|v| v.parse().unwrap()).collect();
                (f[0], f[4])
            })
            .collect()
    };
    let (even, odd) = (column("triangular_n0.csv"), column("triangular_n1.csv"));
    for (e, o) in even.iter().zip(&odd).filter(|(e, _)| e.0 >= 15.0) {
        assert!(e.1 > o.1, "p = {}", e.0);
    }
}

#[test]
fn moments_follow_the_documented_examples() {
    let report: Value = serde_json::from_str(&stdout_of(&[
        "moments",
        "--well",
        "triangular",
        "--state",
        "1",
        "--j",
        "3",
    ]))
    .unwrap();
    let r = &report["states"][0]["reports"][0];
    assert_eq!(r["j"], 3);
    assert_eq!(r["verdict"]["verdict"], "converged");

    let report: Value =
        serde_json::from_str(&stdout_of(&["moments", "--well", "divexp", "--j", "1"])).unwrap();
    for st in report["states"].as_array().unwrap() {
        // ⟨p²⟩ = E − ⟨V⟩ = ⟨E − V⟩
        let r = &st["reports"][0];
        let momentum = r["verdict"]["value"].as_f64().unwrap();
        let ev = st["ev_terms"][0].as_f64().unwrap();
        assert!((momentum - ev).abs() <= 1e-3 * ev, "{momentum} vs {ev}");
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| twopiece(args).status.code();
    assert_eq!(code(&["solve", "--well", "triangular"]), Some(0));
    assert_eq!(code(&["solve", "--well", "square"]), Some(2));
    assert_eq!(code(&["explode"]), Some(2));
    assert_eq!(code(&["solve", "--v0", "3"]), Some(2));
    assert_eq!(code(&["moments", "--cutoffs", "1,2,3"]), Some(2));
    assert_eq!(
        code(&["solve", "--config", "/nonexistent/twopiece.toml"]),
        Some(2)
    );
    // the convergent well at V0 = 15 binds only three levels
    assert_eq!(
        code(&["tails", "--well", "convexp", "--state", "5"]),
        Some(3)
    );
    // a grid too sparse for the fit windows
    assert_eq!(
        code(&["tails", "--well", "divexp", "--points", "50"]),
        Some(3)
    );
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(
        &path,
        "well = \"divexp\"\nmax_states = 3\nformat = \"json\"\n",
    )
    .unwrap();
    let cfg = path.to_str().unwrap();
    let rows: Value = serde_json::from_str(&stdout_of(&["solve", "--config", cfg])).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 3);
    let csv = stdout_of(&[
        "solve",
        "--config",
        cfg,
        "--format",
        "csv",
        "--max-states",
        "1",
    ]);
    assert_eq!(csv.lines().count(), 2);
    assert!(csv
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("divexp,5,1,0,even,6.46467"));

    std::fs::write(&path, "wells = \"divexp\"\n").unwrap();
    assert_eq!(twopiece(&["solve", "--config", cfg]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/spectrum.csv");
    let out = twopiece(&[
        "solve",
        "--well",
        "convexp",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        golden("solve_convexp.csv")
    );
}
