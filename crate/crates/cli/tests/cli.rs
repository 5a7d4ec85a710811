use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use nanoqed_cli::output::{echoed_config, echoed_derived, fmt_num};
use nanoqed_cli::run::derived_quantities;
use nanoqed_cli::RunConfig;

const PAIR: &str = "\
# two co-located emitters, one photon
[cavity]

[emitter]
kappa_vib = 0

[emitter]
kappa_vib = 0

[initial]
state = photon

[model]
n_max = 1
sector_cap = 1

[evolution]
method = rk4
t_max = 120
dt = 0.05
record_stride = 4
";

fn nanoqed(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nanoqed"));
    cmd.args(args).env_remove("NANOQED_WORKERS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn run_in(dir: &Path, sub: &str, config: &str, extra: &[&str]) -> Output {
    let cfg = dir.join(format!("{sub}.ini"));
    fs::write(&cfg, config).unwrap();
    let out = dir.join(format!("{sub}-out"));
    let mut args = vec![sub, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    nanoqed(&args, &[])
}

fn summary_value(csv: &str, key: &str) -> f64 {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .find_map(|l| l.strip_prefix(&format!("{key},")))
        .unwrap_or_else(|| panic!("no {key}"))
        .parse()
        .unwrap()
}

#[test]
fn simulate_writes_reproducible_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let first = run_in(tmp.path(), "simulate", PAIR, &["--seed-free"]);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let out = tmp.path().join("simulate-out");
    let ts = fs::read_to_string(out.join("timeseries.csv")).unwrap();
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(ts.lines().any(|l| l.starts_with("time_fs,photon_number,pop_1,pop_2,P_S,P_A")));

    // co-located pair from a photon: the antisymmetric state is never populated
    let body: Vec<Vec<f64>> = ts
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("time"))
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert!(body.iter().all(|r| r[5].abs() < 1e-12));
    let expected = (8.0 * 38.664_543_892_539_14f64.powi(2) - 40.526_f64.powi(2)).sqrt();
    assert!((summary_value(&summary, "rabi_frequency") - expected).abs() < 0.01 * expected);

    // identical bytes on rerun
    let again = run_in(tmp.path(), "simulate", PAIR, &[]);
    assert!(again.status.success());
    assert_eq!(fs::read_to_string(out.join("timeseries.csv")).unwrap(), ts);
    assert_eq!(fs::read_to_string(out.join("summary.csv")).unwrap(), summary);
}

#[test]
fn echoed_header_is_self_describing() {
    let tmp = tempfile::tempdir().unwrap();
    assert!(run_in(tmp.path(), "simulate", PAIR, &[]).status.success());
    let ts = fs::read_to_string(tmp.path().join("simulate-out/timeseries.csv")).unwrap();

    let echoed = echoed_config(&ts);
    let cfg = RunConfig::parse(&echoed, tmp.path()).unwrap();
    let derived: Vec<(String, String)> = derived_quantities(&cfg)
        .into_iter()
        .map(|(k, v)| (k, fmt_num(v)))
        .chain([("code_version".into(), env!("CARGO_PKG_VERSION").into())])
        .collect();
    assert_eq!(echoed_derived(&ts), derived);

    let rerun_dir = tmp.path().join("rerun");
    fs::create_dir(&rerun_dir).unwrap();
    assert!(run_in(&rerun_dir, "simulate", &echoed, &[]).status.success());
    let ts2 = fs::read_to_string(rerun_dir.join("simulate-out/timeseries.csv")).unwrap();
    assert_eq!(ts2, ts);
}

#[test]
fn sweep_is_independent_of_worker_count() {
    let cfg = "[cavity]\n[emitter]\n[initial]\nstate = photon\n[sweep]\nkind = map\naxis1 = delta_cav, -100, 100, 5\naxis2 = delta_p, -120, 120, 9\nobservables = re_a, extinction, pop_1\n";
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("map.ini");
    fs::write(&path, cfg).unwrap();
    let mut tables = Vec::new();
    for (workers, env) in [("1", None), ("3", None), ("", Some("2"))] {
        let out = tmp.path().join(format!("out{workers}{}", env.unwrap_or("")));
        let mut args = vec!["sweep", "--config", path.to_str().unwrap(), "--out", out.to_str().unwrap()];
        if !workers.is_empty() {
            args.extend(["--workers", workers]);
        }
        let envs: Vec<(&str, &str)> = env.map(|w| vec![("NANOQED_WORKERS", w)]).unwrap_or_default();
        let o = nanoqed(&args, &envs);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        tables.push(fs::read_to_string(out.join("sweep.csv")).unwrap());
    }
    assert!(tables.windows(2).all(|w| w[0] == w[1]));
    let rows = tables[0].lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 1 + 45);
    assert!(tables[0].contains("\ndelta_cav,delta_p,re_a,extinction,pop_1\n"));
}

#[test]
fn position_sweep_and_hybrid() {
    let tmp = tempfile::tempdir().unwrap();
    let pos = "[cavity]\n[emitter]\n[emitter]\n[initial]\nstate = photon\n[model]\nn_max = 1\nsector_cap = 1\n[evolution]\nt_max = 100\ndt = 0.1\nrecord_stride = 2\n[sweep]\nkind = position\nplacement = symmetric_pair\naxis = position_x, 0, 10, 6\n";
    let o = run_in(tmp.path(), "sweep", pos, &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = fs::read_to_string(tmp.path().join("sweep-out/sweep.csv")).unwrap();
    assert!(table.contains("# placement = symmetric_pair"));
    let header = table.lines().find(|l| l.starts_with("position_x")).unwrap();
    assert!(header.contains("effective_coupling"));

    let o = run_in(tmp.path(), "hybrid", "[cavity]\n[emitter]\n[initial]\nstate = photon\n", &[]);
    assert!(o.status.success());
    let summary = fs::read_to_string(tmp.path().join("hybrid-out/summary.csv")).unwrap();
    assert!(summary_value(&summary, "splitting") > 0.0);
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();

    let o = run_in(tmp.path(), "simulate", "[cavity]\n[emitter]\nkappa_vibb = 3\n", &[]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains(":3:1:") && err.contains("kappa_vib"), "{err}");

    let o = run_in(tmp.path(), "steady", "[cavity]\n[emitter]\n[initial]\nstate = photon\n", &[]);
    assert_eq!(o.status.code(), Some(1));

    let o = nanoqed(&["simulate", "--config", "/nonexistent.ini", "--out", "x"], &[]);
    assert_eq!(o.status.code(), Some(1));

    let o = nanoqed(&["frobnicate"], &[]);
    assert_eq!(o.status.code(), Some(1));

    // the exponential propagator refuses large systems
    let mut big = String::from("[cavity]\n");
    for _ in 0..6 {
        big.push_str("[emitter]\n");
    }
    big.push_str("[initial]\nstate = photon\n[evolution]\nmethod = expm\nt_max = 1\n");
    let o = run_in(tmp.path(), "simulate", &big, &[]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));

    assert_eq!(nanoqed(&["--help"], &[]).status.code(), Some(0));
}
