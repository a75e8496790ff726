use std::process::{Command, Output};

use serde_json::Value;
use skinning_bounds::TowerReal;
use skinning_bounds_cli::SweepRow;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_skinning-bounds"))
}

fn run(args: &[&str]) -> Output {
    bin().arg("--quiet").args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = run(&full);
    assert!(o.status.success(), "{}", stderr(&o));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn bound_json_carries_every_field() {
    let v = json(&["bound", "-g", "1", "-n", "1", "-l", "0.5"]);
    for key in [
        "g",
        "n",
        "abs_chi",
        "kappa",
        "ell",
        "epsilon",
        "t_used",
        "a1",
        "ln_a2",
        "ln_c_prefactor",
        "c",
        "norm_bound",
        "gap",
        "ln_c",
        "loglog_ell_over_c",
        "asymptotic_rhs",
        "asymptotic_ratio",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let ln_c: TowerReal = v["ln_c"]["text"].as_str().unwrap().parse().unwrap();
    assert!((ln_c.to_f64() + 283_987.376_454_383_8).abs() < 1e-6);
    assert_eq!(v["ln_c"]["level"], 0);
    assert_eq!(v["c"]["level"], 1);
    assert_eq!(v["c"]["recip"], true);
    let norm = v["norm_bound"]["text"].as_str().unwrap();
    assert!(norm.starts_with("1 - exp(-283987.37"), "{norm}");
    assert!(norm.ends_with("≈ 1 - 10^(-123334.2)"), "{norm}");
}

#[test]
fn bound_rejections_exit_two() {
    let o = run(&["bound", "-g", "0", "-n", "3", "-l", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("kappa=0: contraction constant undefined"));
    assert!(o.stdout.is_empty());

    let o = run(&["bound", "-g", "1", "-n", "1", "-l", "3.0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("systole 3 out of range"));

    let o = run(&["bound", "-g", "1", "-n", "0", "-l", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not hyperbolic"));

    let o = run(&["bound", "-g", "1", "-n", "1", "-l", "0.5", "--t", "0.5"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["bound", "-g", "1", "-n", "1", "-l", "0.5", "--epsilon", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("epsilon"));

    let o = run(&["bound", "-g", "x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn banner_goes_to_stderr_unless_quiet() {
    let loud = bin()
        .args(["bound", "-g", "1", "-n", "1", "-l", "0.5"])
        .output()
        .unwrap();
    let quiet = run(&["bound", "-g", "1", "-n", "1", "-l", "0.5"]);
    assert!(stderr(&loud).starts_with("skinning-bounds "));
    assert!(stderr(&quiet).is_empty());
    assert_eq!(loud.stdout, quiet.stdout);
}

#[test]
fn sweep_skips_non_hyperbolic_cells_with_accounting() {
    let o = run(&["sweep", "-g", "1..3", "-n", "0..1", "-l", "0.5", "--format", "csv"]);
    assert!(o.status.success());
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let cells: Vec<(u64, u64)> = rdr
        .deserialize::<SweepRow>()
        .map(|r| r.map(|r| (r.g, r.n)).unwrap())
        .collect();
    assert_eq!(cells, [(1, 1), (2, 0), (2, 1), (3, 0), (3, 1)]);
    let err = stderr(&o);
    assert!(err.contains("skipped (g=1, n=0, l=0.5)"), "{err}");
    assert!(err.contains("5 rows generated, 1 cells skipped"), "{err}");
}

#[test]
fn sweep_header_matches_column_contract() {
    let o = run(&["sweep", "-g", "2", "-n", "0", "-l", "0.5", "--format", "csv"]);
    let header = stdout(&o).lines().next().unwrap().to_string();
    assert_eq!(
        header,
        "g,n,abs_chi,kappa,ell,epsilon,t,a1,ln_a2,ln_c,loglog_ell_over_c,asymptotic_rhs,asymptotic_ratio"
    );
}

#[test]
fn single_cell_sweep_equals_bound() {
    for format in ["csv", "json"] {
        let bound = run(&["bound", "-g", "2", "-n", "1", "-l", "0.25", "--format", format]);
        let sweep = run(&["sweep", "-g", "2", "-n", "1", "-l", "0.25", "--format", format]);
        if format == "csv" {
            assert_eq!(bound.stdout, sweep.stdout);
        } else {
            let b: Value = serde_json::from_slice(&bound.stdout).unwrap();
            let s: Value = serde_json::from_slice(&sweep.stdout).unwrap();
            assert_eq!(s.as_array().unwrap(), &[b]);
        }
    }
}

#[test]
fn csv_round_trips_bit_identically() {
    let o = run(&[
        "sweep",
        "-g",
        "1..4",
        "-n",
        "0..4",
        "-l",
        "0.1:0.5:0.2",
        "--format",
        "csv",
    ]);
    let text = o.stdout;
    let rows: Vec<SweepRow> = csv::Reader::from_reader(text.as_slice())
        .deserialize()
        .collect::<Result<_, _>>()
        .unwrap();
    assert!(!rows.is_empty());
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(r).unwrap();
    }
    assert_eq!(w.into_inner().unwrap(), text);
    for r in &rows {
        let t: TowerReal = r.ln_c.parse().unwrap();
        assert_eq!(t.exact_string(), r.ln_c);
    }
}

#[test]
fn sweep_rows_are_lexicographic() {
    let o = run(&[
        "sweep",
        "-g",
        "0..3",
        "-n",
        "0..3",
        "-l",
        "1.0,0.25,0.5",
        "--format",
        "csv",
    ]);
    let rows: Vec<SweepRow> = csv::Reader::from_reader(o.stdout.as_slice())
        .deserialize()
        .collect::<Result<_, _>>()
        .unwrap();
    let keys: Vec<(u64, u64, f64)> = rows.iter().map(|r| (r.g, r.n, r.ell)).collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)).then(a.2.total_cmp(&b.2)));
    assert_eq!(keys, sorted);
    // (0,3) has kappa = 0 and is skipped alongside the non-hyperbolic cells.
    assert!(stderr(&o).contains("skipped (g=0, n=3, l=0.25): kappa=0"));
}

#[test]
fn sweep_input_errors_exit_two() {
    for args in [
        ["sweep", "-g", "3..1", "-n", "0", "-l", "0.5"],
        ["sweep", "-g", "1", "-n", "0..x", "-l", "0.5"],
        ["sweep", "-g", "1", "-n", "1", "-l", "0.5:0.1:0.1"],
        ["sweep", "-g", "1", "-n", "1", "-l", "0.5,9"],
        ["sweep", "-g", "1", "-n", "1", "-l", "0:1:0"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
    let o = run(&["sweep", "-g", "1", "-n", "1", "-l", "0.5", "--threads", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_output_file_and_io_errors() {
    let dir = std::env::temp_dir().join(format!("skinning-bounds-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rows.csv");
    let path_str = path.to_str().unwrap();
    let args = ["sweep", "-g", "1..2", "-n", "1..2", "-l", "0.5", "--format", "csv"];
    let to_file = run(&[&args[..], &["--output", path_str]].concat());
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), run(&args).stdout);
    std::fs::remove_dir_all(&dir).unwrap();

    let missing = dir.join("no-such-dir").join("rows.csv");
    let o = run(&[&args[..], &["--output", missing.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn thread_count_does_not_change_output() {
    let args = [
        "sweep", "-g", "1..4", "-n", "0..4", "-l", "0.25,0.5", "--format", "json",
    ];
    let one = run(&[&args[..], &["--threads", "1"]].concat());
    let four = run(&[&args[..], &["--threads", "4"]].concat());
    let env = bin()
        .arg("--quiet")
        .args(args)
        .env("SKINNING_BOUNDS_THREADS", "3")
        .output()
        .unwrap();
    assert!(one.status.success() && four.status.success() && env.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, env.stdout);
}

#[test]
fn constants_table() {
    let v = json(&["constants"]);
    let rows = v.as_array().unwrap();
    let names: Vec<&str> = rows.iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["eps0", "c1", "c2", "c3", "c4", "c5", "c6", "c7", "k"]);
    for r in rows {
        let value = r["value"].as_f64().unwrap();
        if r["name"] == "c6" {
            assert!((value.ln() - 89.585).abs() < 1e-3);
            assert_eq!(r["printed"], 76.5904);
        } else if let Some(p) = r["printed"].as_f64() {
            assert!((value - p).abs() <= 5e-4, "{r}");
        }
    }
    let text = run(&["constants"]);
    assert!(stdout(&text).contains("coth(pi/12)"));
    let csv = run(&["constants", "--format", "csv"]);
    assert!(stdout(&csv).starts_with("name,value,printed,definition\n"));
}

#[test]
fn verify_default_passes_with_documented_findings() {
    let o = run(&["verify"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    let findings = text.split("documented findings").nth(1).unwrap();
    assert!(findings.contains("c6_consistency"));
    assert!(findings.contains("sinh_linear_bound_literal"));
    assert!(text.ends_with("result: pass\n"));

    let v = json(&["verify"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["failures"], 0);
}

fn verdicts(grid: &str) -> Vec<(String, String)> {
    let v = json(&["verify", "--grid", grid]);
    let ids = v["identities"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["name"].clone(), c["status"].clone()));
    let oracles = v["oracles"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| (o["claim_id"].clone(), o["status"].clone()));
    ids.chain(oracles)
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

#[test]
fn verify_verdicts_stable_under_refinement() {
    assert_eq!(verdicts("1000"), verdicts("100000"));
}

#[test]
fn verify_failure_paths() {
    let o = run(&["verify", "--tol", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("undocumented verification failure"));
    let o = run(&["verify", "--tol", "0", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains(",FAIL,"));
    let o = run(&["verify", "--grid", "10"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify", "--tol", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn asymptotic_table_rows() {
    let v = json(&["asymptotic", "--max-genus", "50"]);
    let rows = v["rows"].as_array().unwrap();
    let keys: Vec<(u64, u64)> = rows
        .iter()
        .map(|r| (r["g"].as_u64().unwrap(), r["n"].as_u64().unwrap()))
        .collect();
    assert_eq!(keys, [(10, 0), (10, 10), (20, 0), (20, 20), (50, 0), (50, 50)]);
    let row = |g: u64, n: u64| rows.iter().find(|r| r["g"] == g && r["n"] == n).unwrap();
    assert!((row(50, 0)["ratio"].as_f64().unwrap() - 0.9992).abs() < 1e-4);
    assert!((row(20, 0)["leading_ratio"].as_f64().unwrap() - 1.0246).abs() < 1e-3);
    assert_eq!(row(50, 0)["abs_chi"], 98);
    assert_eq!(v["monotone_n_eq_g"], true);
    // |ratio − 1| grows slightly from g = 10 to g = 20 at n = 0.
    assert_eq!(row(20, 0)["deviation_decreasing"], false);
    assert_eq!(row(50, 0)["deviation_decreasing"], true);
    assert_eq!(v["monotone_n0"], false);
}

#[test]
fn asymptotic_rejects_small_genus() {
    let o = run(&["asymptotic", "--max-genus", "9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("at least 10"));
}

#[test]
fn skinning_reports_dominating_component() {
    let single = json(&["skinning", "--boundary", "1,1,0.5"]);
    assert_eq!(single["dominating"], 0);
    assert_eq!(single["components"].as_array().unwrap().len(), 1);

    let pair = json(&["skinning", "--boundary", "1,1,0.5;2,0,0.5"]);
    assert_eq!(pair["dominating"], 1);
    assert_eq!(pair["components"][1]["g"], 2);
    assert_eq!(pair["max_norm_bound"], pair["components"][1]["norm_bound"]);

    let text = stdout(&run(&["skinning", "--boundary", "1,1,0.5;2,0,0.5"]));
    assert!(
        text.contains("dominated by     component 2 (g=2, n=0, l=0.5)"),
        "{text}"
    );
}

#[test]
fn skinning_errors_name_the_component() {
    let o = run(&["skinning", "--boundary", "0,3,0.5;1,1,0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("boundary component 1: kappa=0"));
    let o = run(&["skinning", "--boundary", "1,1,0.5;2,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("boundary component 2"));
    let o = run(&["skinning", "--boundary", "1,1,0.5;2,0,9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("boundary component 2: systole"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let commands: [&[&str]; 5] = [
        &["bound", "-g", "3", "-n", "2", "-l", "0.7"],
        &["constants", "--format", "json"],
        &["asymptotic", "--max-genus", "20", "--format", "csv"],
        &["skinning", "--boundary", "1,1,0.5;2,0,0.5", "--format", "csv"],
        &["sweep", "-g", "1..3", "-n", "0..3", "-l", "0.5", "--format", "json"],
    ];
    for args in commands {
        let (a, b) = (run(args), run(args));
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
