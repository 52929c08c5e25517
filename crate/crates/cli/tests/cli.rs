use std::fs;
use std::process::{Command, Output};

fn jfds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jfds")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sod_csv_has_one_row_per_cell() {
    let o = jfds(&["run", "--case", "sod", "--cells", "100", "--scheme", "zbs", "--order", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,rho,u,p,e");
    assert_eq!(lines.len(), 101);
    for line in &lines[1..] {
        let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 5);
        assert!(fields[1] > 0.0 && fields[3] > 0.0);
    }
    assert!(!text.contains('\r'));
}

#[test]
fn output_file_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let o = jfds(&["run", "--case", "lax", "--order", "2", "--cells", "80", "--out", path.to_str().unwrap()]);
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn config_file_is_read_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "case=sonic\ncells=40\nscheme=tvs\n").unwrap();
    let o = jfds(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 41);
    let o = jfds(&["run", "--config", cfg.to_str().unwrap(), "--cells", "60"]);
    assert_eq!(stdout(&o).lines().count(), 61);
}

#[test]
fn smooth_eoc_table() {
    let o = jfds(&["run", "--case", "smooth", "--format", "eoc"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "cells,L1,L2,Linf,EOC_L1,EOC_L2,EOC_Linf");
    let cells: Vec<&str> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(cells, ["40", "80", "160", "320", "640"]);
    let last: Vec<f64> = lines[5].split(',').map(|f| f.parse().unwrap()).collect();
    assert!((last[4] - 1.0).abs() < 0.15, "finest-pair order {}", last[4]);
}

#[test]
fn report_format() {
    let o = jfds(&["run", "--case", "sod", "--format", "report"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("case: sod"));
    assert!(text.contains("error rho: L1"));
}

#[test]
fn blow_up_exits_with_diagnostics() {
    let o = jfds(&["run", "--case", "blast", "--scheme", "tvs", "--order", "2", "--cells", "200", "--cfl", "1.0"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("TVS-FDS scheme blew up"), "{err}");
    assert!(err.contains("step") && err.contains("cell"), "{err}");
}

#[test]
fn configuration_errors_exit_2() {
    let bad: [&[&str]; 6] = [
        &["run", "--case", "no-such-case"],
        &["run", "--case", "sod", "--order", "3"],
        &["run", "--case", "sod", "--scheme", "roe"],
        &["run", "--case", "sod", "--grid", "10x10"],
        &["run", "--case", "ramp", "--cells", "10"],
        &["run", "--case", "sod", "--out", "/nonexistent-dir/x.csv"],
    ];
    for args in bad {
        let o = jfds(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn two_dimensional_csv() {
    let o = jfds(&["run", "--case", "shock-reflection", "--grid", "12x4", "--t-final", "0.05"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# ni=12 nj=4");
    assert_eq!(lines[1], "# contour p 0.7:0.1:2.9");
    assert_eq!(lines[2], "x,y,rho,u,v,p");
    assert_eq!(lines.len(), 3 + 48);
    let row: Vec<f64> = lines[3].split(',').map(|f| f.parse().unwrap()).collect();
    assert_eq!(row.len(), 6);
}

#[test]
fn list_cases_names_every_case() {
    let text = stdout(&jfds(&["list-cases"]));
    for name in ["sod", "lax", "blast", "shock-entropy", "shock-reflection", "ramp", "wedge", "half-cylinder"] {
        assert!(text.contains(name), "{name}");
    }
    let machine = stdout(&jfds(&["list-cases", "--machine"]));
    let rows: Vec<Vec<&str>> = machine.lines().map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 16);
    assert!(rows.iter().all(|r| r.len() == 4 && (r[0] == "1d" || r[0] == "2d")));
}

#[test]
fn verify_is_reproducible() {
    let a = jfds(&["verify", "oracle", "--samples", "50", "--seed", "7"]);
    let b = jfds(&["verify", "oracle", "--samples", "50", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("PASS oracle/"));
    assert_eq!(jfds(&["verify", "everything"]).status.code(), Some(2));
}
