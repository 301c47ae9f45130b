mod common;

use common::{assert_valid, corpus, planted_failures, repo_root, run_bin, validator};
use fio_nuclear_cli::{load_scenario, load_scenario_with, run_command, Command, Format, Overrides, RunContext};
use serde_json::Value;

const COMMANDS: [Command; 6] =
    [Command::Apply, Command::Kernel, Command::Trace, Command::Spectrum, Command::Verify, Command::Report];

fn json_of(path: &str, cmd: Command) -> Value {
    let s = load_scenario(&repo_root().join(path)).unwrap();
    let a = run_command(cmd, &s, &RunContext::default()).unwrap();
    serde_json::from_slice(&a[0].bytes).unwrap()
}

fn cx(v: &Value) -> (f64, f64) {
    (v["re"].as_f64().unwrap(), v["im"].as_f64().unwrap())
}

#[test]
fn gaussian_trace_record() {
    let t = json_of("corpus/01_gaussian_rank1.json", Command::Trace);
    for key in ["formula_trace", "kernel_trace", "factored_trace", "eigen_sum"] {
        let (re, im) = cx(&t[key]);
        assert!((re - 1.0).abs() <= 1e-4 && im.abs() <= 1e-4, "{key}");
    }
    for d in t["pairwise_discrepancies"].as_array().unwrap() {
        assert!(d["value"].as_f64().unwrap() <= 1e-4);
    }
    assert_eq!(t["eigenvalues"].as_array().unwrap().len(), 256);
    assert_eq!(t["applicability"]["spectral_formula_applies"], Value::Bool(true));
}

#[test]
fn round_trip_verify_record() {
    let v = json_of("corpus/02_gaussian_round_trip.json", Command::Verify);
    assert_eq!(v["verdict"], "certified_nuclear");
    assert!(v["max_residual"].as_f64().unwrap() <= 1e-12);
    let p = json_of("corpus/17_perturbed_symbol_rejected.json", Command::Verify);
    assert_eq!(p["verdict"], "rejected");
    assert!((0.9e-3..=1.1e-3).contains(&p["max_residual"].as_f64().unwrap()));
}

#[test]
fn zero_symbol_spectrum() {
    let s = json_of("corpus/08_zero_symbol.json", Command::Spectrum);
    let e = s["eigenvalues"].as_array().unwrap();
    assert_eq!(e.len(), 256);
    assert!(e.iter().all(|z| cx(z) == (0.0, 0.0)));
}

#[test]
fn csv_layouts() {
    let o = Overrides { format: Some(Format::Csv), ..Overrides::default() };
    let s = load_scenario_with(&repo_root().join("corpus/19_hermite_l4_n64.json"), &o).unwrap();
    let k = run_command(Command::Kernel, &s, &RunContext::default()).unwrap();
    assert_eq!(k[0].path, std::path::PathBuf::from("kernel.csv"));
    let text = String::from_utf8(k[0].bytes.clone()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "i,j,re,im");
    assert_eq!(lines.len(), 1 + 64 * 64);
    assert!(lines[1].starts_with("0,0,") && lines[65].starts_with("1,0,"));
    let sp = run_command(Command::Spectrum, &s, &RunContext::default()).unwrap();
    assert!(String::from_utf8(sp[0].bytes.clone()).unwrap().starts_with("k,re,im\n"));
    let ap = run_command(Command::Apply, &s, &RunContext::default()).unwrap();
    assert!(String::from_utf8(ap[0].bytes.clone()).unwrap().starts_with("i,x,re,im\n"));
}

#[test]
fn every_output_matches_its_schema() {
    let schemas: Vec<_> = ["apply.json", "kernel.json", "trace.json", "spectrum.json", "verify.json", "report.json"]
        .iter()
        .map(|n| validator(n))
        .collect();
    let json = Overrides { format: Some(Format::Json), ..Overrides::default() };
    for file in corpus() {
        let s = load_scenario_with(&file, &json).unwrap();
        for (cmd, schema) in COMMANDS.iter().zip(&schemas) {
            let out = match run_command(*cmd, &s, &RunContext::default()) {
                Ok(a) => a,
                // verify needs a decomposition the scenario may not carry
                Err(e) if *cmd == Command::Verify && e.field.as_deref() == Some("decomposition") => continue,
                Err(e) => panic!("{} {}: {e}", file.display(), cmd.name()),
            };
            let doc: Value = serde_json::from_slice(&out[0].bytes).unwrap();
            assert_valid(schema, &doc, &format!("{} {}", file.display(), cmd.name()));
        }
    }
}

#[test]
fn report_plots_are_svg() {
    let s = load_scenario(&repo_root().join("corpus/24_plots_enabled.json")).unwrap();
    let a = run_command(Command::Report, &s, &RunContext::default()).unwrap();
    assert_eq!(a.len(), 4);
    for plot in &a[1..] {
        assert!(plot.path.starts_with("plots"));
        let text = std::str::from_utf8(&plot.bytes).unwrap();
        assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
    }
    let doc: Value = serde_json::from_slice(&a[0].bytes).unwrap();
    assert_eq!(doc["plots"].as_array().unwrap().len(), 3);
}

#[test]
fn planted_failures_exit_with_documented_codes() {
    let error_schema = validator("error.json");
    let failures = planted_failures();
    assert!(failures.len() >= 4);
    for (file, cmd, code) in failures {
        let out = run_bin(&[&cmd, "--scenario", file.to_str().unwrap()], &[]);
        assert_eq!(out.status.code(), Some(code), "{}", file.display());
        assert!(out.stdout.is_empty());
        let err: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert_valid(&error_schema, &err, &file.display().to_string());
        assert_eq!(err["exit_code"].as_i64(), Some(code as i64));
    }
}

#[test]
fn stdout_and_out_dir_carry_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = repo_root().join("corpus/18_gaussian_l6_n128.json");
    let s = scenario.to_str().unwrap();
    let a = run_bin(&["trace", "--scenario", s], &[]);
    assert!(a.status.success());
    let b = run_bin(&["trace", "--scenario", s, "--out", dir.path().to_str().unwrap()], &[]);
    assert!(b.status.success() && b.stdout.is_empty());
    assert_eq!(a.stdout, std::fs::read(dir.path().join("trace.json")).unwrap());
}

#[test]
fn thread_count_does_not_change_output() {
    let scenario = repo_root().join("corpus/12_random_rank5.json");
    let s = scenario.to_str().unwrap();
    let one = run_bin(&["report", "--scenario", s], &[("FIO_NUCLEAR_THREADS", "1")]);
    let four = run_bin(&["report", "--scenario", s], &[("FIO_NUCLEAR_THREADS", "4")]);
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    let bad = run_bin(&["trace", "--scenario", s], &[("FIO_NUCLEAR_THREADS", "zero")]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn flags_override_the_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = repo_root().join("corpus/18_gaussian_l6_n128.json");
    let out = run_bin(
        &[
            "report",
            "--scenario",
            scenario.to_str().unwrap(),
            "--out",
            dir.path().to_str().unwrap(),
            "--plots",
            "--grid-N",
            "96",
            "--seed",
            "3",
        ],
        &[],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&std::fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(doc["trace"]["grid"]["N"], 96);
    assert!(dir.path().join("plots/eigenvalues.svg").exists());

    let small = repo_root().join("corpus/19_hermite_l4_n64.json");
    let csv = run_bin(&["spectrum", "--scenario", small.to_str().unwrap(), "--format", "csv"], &[]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 65);

    let tol = run_bin(&["verify", "--scenario", scenario.to_str().unwrap(), "--tolerance", "1.0"], &[]);
    let v: Value = serde_json::from_slice(&tol.stdout).unwrap();
    assert_eq!(v["tolerance"].as_f64(), Some(1.0));
    assert_eq!(v["verdict"], "certified_nuclear");
}

#[cfg(unix)]
#[test]
fn interrupt_cancels_the_eigen_solve() {
    let scenario = repo_root().join("corpus/11_random_rank3.json");
    let child = std::process::Command::new(env!("CARGO_BIN_EXE_fio-nuclear"))
        .args(["spectrum", "--scenario", scenario.to_str().unwrap(), "--grid-N", "1536"])
        .stdout(std::process::Stdio::null())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    std::thread::sleep(std::time::Duration::from_millis(1500));
    let status = std::process::Command::new("kill").args(["-INT", &child.id().to_string()]).status().unwrap();
    assert!(status.success());
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(130), "{}", String::from_utf8_lossy(&out.stderr));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "cancelled");
}
