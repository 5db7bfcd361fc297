use std::path::Path;
use std::process::{Command, Output};

fn hoa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hoa"))
        .args(args)
        .output()
        .expect("run hoa")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn eval_prints_criterion_json() {
    let out = hoa(&[
        "eval", "--state", "binomial", "--p", "0.5", "--M", "10", "--l", "1", "--r-m", "1",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["d"].as_f64().unwrap() + 2.5).abs() < 1e-12);
    assert_eq!(v["classification"], "antibunched");
    assert_eq!(v["state"], "binomial");
    assert_eq!(v["A"], v["R"]);

    let out = hoa(&[
        "eval", "--state", "pacs", "--alpha", "1", "--m", "0", "--l", "3",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["classification"], "coherent");
}

#[test]
fn exit_codes() {
    assert_eq!(
        code(&hoa(&[
            "eval", "--state", "binomial", "--p", "0.5", "--M", "2", "--l", "5"
        ])),
        2
    );
    assert_eq!(
        code(&hoa(&[
            "eval", "--state", "binomial", "--p", "1.5", "--M", "4", "--l", "1"
        ])),
        2
    );
    assert_eq!(
        code(&hoa(&[
            "eval", "--state", "hs", "--L", "3", "--M", "4", "--eta", "0.5", "--l", "1"
        ])),
        2
    );
    assert_eq!(
        code(&hoa(&[
            "eval", "--state", "binomial", "--p", "0.5", "--l", "1"
        ])),
        1
    );
    assert_eq!(code(&hoa(&["eval", "--nonsense"])), 1);
    assert_eq!(code(&hoa(&["figure", "fig11"])), 1);
    assert_eq!(code(&hoa(&["figure", "fig6", "--range", "bogus"])), 1);
    assert_eq!(
        code(&hoa(&["sweep", "--config", "/nonexistent/config.json"])),
        1
    );
    assert_eq!(code(&hoa(&["--help"])), 0);
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn sweep_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.json");
    write(
        &cfg,
        r#"{
            "state": {"state": "gbs", "params": {"N": 10, "alpha": 2, "beta": 1}},
            "axes": [{"name": "N", "start": 5, "stop": 20, "count": 4}],
            "l_values": [2, 8],
            "method": "both",
            "outputs": {"A": true, "R": [1, 2]}
        }"#,
    );
    let out_path = dir.path().join("out.csv");
    let out = hoa(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "N,l,status,d_oracle,d_closed,abs_dev,rel_dev,agree,A,R_m1,R_m2,classification"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 8);
    // N = 5, l = 8 violates N > l and is reported per point.
    assert!(rows[1].starts_with("5.0000000000000000e0,8,constraint"));
    assert!(rows
        .iter()
        .filter(|r| r.contains(",ok,"))
        .all(|r| r.contains(",true,")));
    assert!(!text.contains('\r'));

    write(
        &cfg,
        r#"{"state": {"state": "geometric", "params": {"eta": 0.5}}, "axes": [{"name": "N", "start": 1, "stop": 2, "count": 2}], "l_values": [1]}"#,
    );
    assert_eq!(code(&hoa(&["sweep", "--config", cfg.to_str().unwrap()])), 1);
}

#[test]
fn figure_csv_layout() {
    let out = hoa(&["figure", "fig9"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "alpha,d3_x10,d4,status");
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    // 17 significant digits in scientific notation.
    let mantissa = first[1].split('e').next().unwrap().trim_start_matches('-');
    assert_eq!(mantissa.replace('.', "").len(), 17);
    assert_eq!(text.lines().count(), 31);
}

#[test]
fn figure_json_and_range_override() {
    let out = hoa(&[
        "figure",
        "fig6",
        "--range",
        "eta=0.2:0.8:7",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["columns"], serde_json::json!(["eta", "d8", "status"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 7);
}

#[test]
fn crosscheck_reports_rows_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    let out = hoa(&[
        "crosscheck",
        "--state",
        "binomial",
        "--lmax",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 disagree"));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("state,params,l,d_oracle,d_closed,abs_dev,rel_dev,agree,note\n"));
}

#[test]
fn pnd_dump_formats() {
    let out = hoa(&["pnd", "--state", "binomial", "--p", "0.5", "--M", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "n,probability\n0,2.5000000000000000e-1\n1,5.0000000000000000e-1\n2,2.5000000000000000e-1\n"
    );
    let out = hoa(&[
        "pnd",
        "--state",
        "geometric",
        "--eta",
        "0.5",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["state"], "geometric");
    assert_eq!(v["truncated"], true);
    assert!(v["tail_bound"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str], name: &str| {
        let path = dir.path().join(name);
        let mut full: Vec<&str> = args.to_vec();
        let p = path.to_str().unwrap().to_string();
        full.extend(["--out", &p]);
        assert_eq!(code(&hoa(&full)), 0);
        std::fs::read(&path).unwrap()
    };
    let mc = [
        "mc",
        "--state",
        "nbs",
        "--eta",
        "0.5",
        "--M",
        "3",
        "--l",
        "2",
        "--samples",
        "20000",
        "--seed",
        "9",
    ];
    assert_eq!(run(&mc, "a.json"), run(&mc, "b.json"));
    let fig = ["figure", "fig2", "--oracle", "--range", "alpha=0:4:3"];
    assert_eq!(run(&fig, "a.csv"), run(&fig, "b.csv"));
}

#[test]
fn mc_reports_estimate_and_exact_value() {
    let out = hoa(&[
        "mc",
        "--state",
        "binomial",
        "--p",
        "0.5",
        "--M",
        "10",
        "--l",
        "1",
        "--samples",
        "200000",
        "--seed",
        "4",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let est = &v["estimate"];
    assert_eq!(est["seed"], 4);
    assert_eq!(est["n_samples"], 200000);
    let d_hat = est["d_hat"].as_f64().unwrap();
    let se = est["stderr"].as_f64().unwrap();
    assert!((d_hat - v["exact_d"].as_f64().unwrap()).abs() < 5.0 * se);
}
