use std::io::Write;
use std::process::{Command, Output, Stdio};

use cprop::cli::{run, RunConfig};
use cprop::format::{parse_csp, render_csp};
use cprop::{examples, normalize, Algorithm};

fn cprop(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cprop"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8(bytes.to_vec()).unwrap()
}

#[test]
fn ac3_on_e1() {
    let out = cprop(&["--algorithm", "ac3"], &render_csp(&examples::e1()));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(text(&out.stdout), "var x 1 2\nvar y 2 3\n");
    assert!(out.stderr.is_empty());
}

#[test]
fn pc2_on_e4_reports_emptiness() {
    let out = cprop(&["--algorithm", "pc2"], &render_csp(&examples::e4_csp()));
    assert_eq!(out.status.code(), Some(1));
    let stdout = text(&out.stdout);
    for pair in ["con c_x_y (x y) { }", "con c_x_z (x z) { }", "con c_y_z (y z) { }"] {
        assert!(stdout.contains(pair), "{stdout}");
    }
    parse_csp(&stdout).unwrap();
}

#[test]
fn directional_without_order_is_a_usage_error() {
    let out = cprop(&["--algorithm", "dac"], &render_csp(&examples::e2()));
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("requires --order"));
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors() {
    let e2 = render_csp(&examples::e2());
    for args in [
        vec!["--algorithm", "darc", "--order", "x,y"],
        vec!["--algorithm", "darc", "--order", "x,y,q"],
        vec!["--algorithm", "ac4"],
        vec!["--algorithm", "ac3", "--policy", "some"],
        vec!["--algorithm", "ac3", "--step-limit", "0"],
        vec![],
    ] {
        assert_eq!(cprop(&args, &e2).status.code(), Some(2), "{args:?}");
    }
    let out = cprop(&["--algorithm", "ac3"], "var x 1\ncon c (x x) { }\n");
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("2:1"));
    let out = cprop(&["--algorithm", "ac3", "/nonexistent/file.csp"], "");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn file_argument_and_order() {
    let dir = std::env::temp_dir().join(format!("cprop-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("e2.csp");
    std::fs::write(&path, render_csp(&examples::e2())).unwrap();
    let out = cprop(
        &["--algorithm", "darc", "--order", "z,y,x", path.to_str().unwrap()],
        "",
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(text(&out.stdout), "var x 1 2 3\nvar y 2 3\nvar z 3\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn trace_and_oracle_go_to_stderr() {
    let e1 = render_csp(&examples::e1());
    let plain = cprop(&["--algorithm", "hyperarc"], &e1);
    let traced = cprop(&["--algorithm", "hyperarc", "--trace", "--oracle"], &e1);
    assert_eq!(plain.stdout, traced.stdout);
    let stderr = text(&traced.stderr);
    assert!(stderr.starts_with("1\tpi1(lt)\tchanged={1}\t"), "{stderr}");
    assert!(stderr.ends_with("oracle: MATCH\n"), "{stderr}");
}

#[test]
fn step_limit_is_an_internal_failure() {
    let out = cprop(&["--algorithm", "hyperarc", "--step-limit", "1"], &render_csp(&examples::e2()));
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn oracle_matches_every_algorithm() {
    let complete = render_csp(&normalize(&examples::e3()).unwrap().to_csp());
    for a in Algorithm::ALL {
        let mut config = RunConfig::new(a);
        config.oracle_check = true;
        config.order = Some(vec!["y".into(), "x".into(), "z".into()]);
        let out = run(&config, &complete);
        assert!(out.stderr.contains("oracle: MATCH"), "{a}: {}", out.stderr);
        assert_eq!(out.code, 0, "{a}");
    }
}

#[test]
fn output_feeds_back_in() {
    let e4 = render_csp(&examples::e4_csp());
    for a in [Algorithm::HyperArc, Algorithm::Path, Algorithm::Dpc] {
        let mut config = RunConfig::new(a);
        config.order = Some(vec!["x".into(), "y".into(), "z".into()]);
        let once = run(&config, &e4);
        let twice = run(&config, &once.stdout);
        assert_eq!(once.stdout, twice.stdout, "{a}");
        assert_eq!(once, run(&config, &e4), "{a}");
    }
}
