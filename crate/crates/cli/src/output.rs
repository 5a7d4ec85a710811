//! CSV serialization of a [`ResultBundle`].
//!
//! Every file opens with a `# ` comment block: the full configuration in
//! input syntax, then `# [derived]` and, for sweeps, `# [metadata]`
//! sections of `key = value` lines. Column headers and rows follow.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;
use crate::run::{ResultBundle, Value};

pub const TIMESERIES_CSV: &str = "timeseries.csv";
pub const SWEEP_CSV: &str = "sweep.csv";
pub const SUMMARY_CSV: &str = "summary.csv";

/// Full-precision scientific notation.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.17e}")
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Comment block shared by all files of a bundle.
pub fn header(bundle: &ResultBundle) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# nanoqed {} run", bundle.mode);
    for line in bundle.config.to_ini().lines() {
        if line.is_empty() {
            s.push_str("#\n");
        } else {
            let _ = writeln!(s, "# {line}");
        }
    }
    s.push_str("#\n# [derived]\n");
    for (k, v) in &bundle.derived {
        let _ = writeln!(s, "# {k} = {}", fmt_num(*v));
    }
    let _ = writeln!(s, "# code_version = {}", env!("CARGO_PKG_VERSION"));
    if let Some(sweep) = &bundle.sweep {
        s.push_str("#\n# [metadata]\n");
        for (k, v) in &sweep.metadata {
            let _ = writeln!(s, "# {k} = {v}");
        }
    }
    s
}

/// Configuration text echoed in a CSV header, ready for `RunConfig::parse`.
pub fn echoed_config(csv: &str) -> String {
    let mut out = String::new();
    for line in csv.lines().skip(1) {
        let Some(body) = line.strip_prefix('#') else { break };
        let body = body.strip_prefix(' ').unwrap_or(body);
        if body == "[derived]" {
            break;
        }
        out.push_str(body);
        out.push('\n');
    }
    out
}

/// `key = value` pairs of the `# [derived]` section of a CSV header.
pub fn echoed_derived(csv: &str) -> Vec<(String, String)> {
    csv.lines()
        .map_while(|l| l.strip_prefix('#').map(str::trim_start))
        .skip_while(|l| *l != "[derived]")
        .skip(1)
        .take_while(|l| !l.starts_with('['))
        .filter(|l| !l.is_empty())
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

pub fn timeseries_csv(bundle: &ResultBundle) -> Option<String> {
    let ts = bundle.timeseries.as_ref()?;
    let mut s = header(bundle);
    let names: Vec<&str> = ts.channel_names().iter().map(String::as_str).collect();
    let _ = writeln!(s, "time_fs,{}", names.join(","));
    let cols: Vec<&[f64]> = names.iter().filter_map(|n| ts.channel(n)).collect();
    for (k, t) in ts.times().iter().enumerate() {
        s.push_str(&fmt_num(*t));
        for c in &cols {
            s.push(',');
            s.push_str(&fmt_num(c[k]));
        }
        s.push('\n');
    }
    Some(s)
}

pub fn sweep_csv(bundle: &ResultBundle) -> Option<String> {
    let r = bundle.sweep.as_ref()?;
    let mut s = header(bundle);
    let mut cols: Vec<String> = r.axes.iter().map(|a| a.kind.name().to_string()).collect();
    cols.extend(r.observables.iter().cloned());
    let _ = writeln!(s, "{}", cols.join(","));
    for cell in 0..r.cells() {
        let row: Vec<String> = r
            .coordinates(cell)
            .into_iter()
            .chain(r.grids.iter().map(|g| g[cell]))
            .map(fmt_num)
            .collect();
        let _ = writeln!(s, "{}", row.join(","));
    }
    Some(s)
}

pub fn summary_csv(bundle: &ResultBundle) -> String {
    let mut s = header(bundle);
    s.push_str("quantity,value\n");
    for (k, v) in &bundle.summary {
        let v = match v {
            Value::Num(x) => fmt_num(*x),
            Value::Text(t) => quote(t),
        };
        let _ = writeln!(s, "{},{v}", quote(k));
    }
    s
}

/// Writes all tables of the bundle into `dir`, creating it if needed.
pub fn write_bundle(bundle: &ResultBundle, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let io = |path: &Path| {
        let path = path.display().to_string();
        move |source| CliError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let mut written = Vec::new();
    let files = [
        (TIMESERIES_CSV, timeseries_csv(bundle)),
        (SWEEP_CSV, sweep_csv(bundle)),
        (SUMMARY_CSV, Some(summary_csv(bundle))),
    ];
    for (name, content) in files {
        if let Some(content) = content {
            let path = dir.join(name);
            fs::write(&path, content).map_err(io(&path))?;
            written.push(path);
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use std::path::Path;

    use super::*;
    use crate::config::RunConfig;
    use crate::run::{derived_quantities, run, Mode};

    const PAIR: &str = "[cavity]\n[emitter]\nx = 1\n[emitter]\nx = -2\n[initial]\nstate = emitter:1\n[model]\nn_max = 1\nsector_cap = 1\n[evolution]\nmethod = rk4\nt_max = 40\ndt = 0.1\n";

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, -1.0 / 3.0, 6.02214076e23, 1e-300, 0.0] {
            assert_eq!(fmt_num(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(quote("a,b"), "\"a,b\"");
    }

    #[test]
    fn header_echo_reproduces_config_and_ratios() {
        let cfg = RunConfig::parse(PAIR, Path::new(".")).unwrap();
        let b = run(&cfg, Mode::Simulate, None).unwrap();
        let csv = timeseries_csv(&b).unwrap();
        let echoed = RunConfig::parse(&echoed_config(&csv), Path::new(".")).unwrap();
        assert_eq!(echoed, cfg);
        let table = echoed_derived(&csv);
        let recomputed: Vec<(String, String)> = derived_quantities(&echoed)
            .into_iter()
            .map(|(k, v)| (k, fmt_num(v)))
            .chain([("code_version".to_string(), env!("CARGO_PKG_VERSION").to_string())])
            .collect();
        assert_eq!(table, recomputed);
    }

    #[test]
    fn table_layout() {
        let cfg = RunConfig::parse(PAIR, Path::new(".")).unwrap();
        let b = run(&cfg, Mode::Simulate, None).unwrap();
        let csv = timeseries_csv(&b).unwrap();
        let body: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body[0], "time_fs,photon_number,pop_1,pop_2,P_S,P_A,re_a,im_a");
        assert_eq!(body.len(), 1 + b.timeseries.as_ref().unwrap().len());
        assert!(body[1..].iter().all(|r| r.split(',').count() == 8));
        assert!(sweep_csv(&b).is_none());
        assert!(summary_csv(&b).contains("\nquantity,value\n"));
    }
}
