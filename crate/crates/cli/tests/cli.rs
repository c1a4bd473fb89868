use std::fs;
use std::process::{Command, Output};

fn msd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msd")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn convergence_time_to_stdout() {
    let o = msd(&["convergence-time", "--levels", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("# study=time exponent=exp-example1 u0=sin-pi fixed=M=32\n"));
    assert!(text.contains("0,128,1.7768e-4,*\n"), "{text}");
}

#[test]
fn config_file_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ex2.cfg");
    let out = dir.path().join("table.md");
    fs::write(
        &cfg,
        "exponent = exp-example2\nu0 = poly-x2-1mx2\nm_cells = 16\nlevels = 2\n",
    )
    .unwrap();
    let o = msd(&[
        "convergence-space",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--format",
        "markdown",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("| 16 | 2.7669e-5 | * |"), "{text}");
    assert!(text.contains("| 32 | 7.2184e-6 | 1.9385 |"), "{text}");
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "m_cells = 64\nn_steps = 10\n").unwrap();
    let o = msd(&["solve", "--config", cfg.to_str().unwrap(), "--m-cells", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,value");
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[1], "0,0");
    assert_eq!(lines[5], "1,0");
}

#[test]
fn weights_dump_lists_lower_triangle() {
    let o = msd(&["weights-dump", "--n-steps", "4", "--exponent", "zero"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,k,b");
    assert_eq!(lines.len(), 11);
    assert!(lines[1..].iter().all(|l| l.ends_with(",0")));
}

#[test]
fn figure1_csv() {
    let o = msd(&["figure1", "--n-steps", "16", "--m-cells", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("t,heat,multiscale,subdiffusion\n0,1,1,1\n"));
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        &["convergence-time", "--levels", "1"][..],
        &["solve", "--exponent", "bogus"],
        &["solve", "--t-final", "abc"],
        &["solve", "--config", "/nonexistent/run.cfg"],
        &["solve", "--unknown-flag", "1"],
        &["figure1", "--alpha-t", "1.2"],
    ] {
        let o = msd(args);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn solver_failure_exits_3() {
    // A single step of length 10 makes 1 + b[n][n] negative.
    let o = msd(&["solve", "--t-final", "10", "--n-steps", "1"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let o = msd(&[
        "convergence-time",
        "--t-final",
        "10",
        "--n-steps",
        "8",
        "--levels",
        "3",
        "--m-cells",
        "8",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains(",failed,"));
}
