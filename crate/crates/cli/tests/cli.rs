use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn tamc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tamc")).args(args).env_remove("TAMC_FUEL").output().unwrap()
}

fn corpus(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(name);
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn run_trace_prints_one_line_per_transition() {
    let o = tamc(&["run", "--machine", "target", "--trace", &corpus("running_example.lam")]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    let (trace, tail) = lines.split_at(lines.len() - 2);
    assert_eq!(trace.len(), 9);
    for (k, l) in trace.iter().enumerate() {
        let cols: Vec<&str> = l.split('\t').collect();
        assert_eq!(cols.len(), 6, "{l}");
        assert_eq!(cols[0], (k + 1).to_string());
    }
    assert_eq!(trace.iter().filter(|l| l.split('\t').nth(2) == Some("betav")).count(), 1);
    assert_eq!(trace.iter().filter(|l| l.split('\t').nth(2) != Some("-")).count(), 1);
    assert_eq!(tail[0], "halt\tsuccessful\t9 transitions");
    assert_eq!(tail[1], "fun(x#1) -> x#1 x#1");
}

#[test]
fn trace_is_deterministic() {
    for m in ["source", "int", "target"] {
        let a = tamc(&["run", "--machine", m, "--trace", &corpus("deep_closure.lam")]);
        let b = tamc(&["run", "--machine", m, "--trace", &corpus("deep_closure.lam")]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn dump_states_prints_full_states() {
    let o = tamc(&["run", "--machine", "int", "--trace", "--dump-states", &corpus("identity.lam")]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("0\tinit\t-\n  focus: ◦ [(); (x). x]<>"));
    assert!(text.contains("  state: "));
}

#[test]
fn machines_report_clashes() {
    for m in ["source", "int", "target"] {
        let o = tamc(&["run", "--machine", m, &corpus("clash_projection.lam")]);
        assert!(o.status.success());
        assert!(stdout(&o).starts_with("halt\tclash(projection)"), "{m}");
    }
}

#[test]
fn fuel_flag_wins_over_environment() {
    let file = corpus("running_example.lam");
    let env_only = Command::new(env!("CARGO_BIN_EXE_tamc")).args(["run", &file]).env("TAMC_FUEL", "3").output().unwrap();
    assert!(stdout(&env_only).starts_with("halt\tfuel-exhausted\t3 transitions"));
    let both =
        Command::new(env!("CARGO_BIN_EXE_tamc")).args(["run", "--fuel", "50", &file]).env("TAMC_FUEL", "3").output().unwrap();
    assert!(stdout(&both).starts_with("halt\tsuccessful"));
}

#[test]
fn convert_prints_translations() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("id.lam");
    std::fs::write(&p, "fun(x) -> x").unwrap();
    let p = p.to_string_lossy().into_owned();
    assert_eq!(stdout(&tamc(&["convert", "--to", "target", &p])), "[^{0,1} pi1 s]<>\n");
    assert_eq!(stdout(&tamc(&["convert", "--to", "int", &p])), "[(); (x). x]<>\n");
}

#[test]
fn reads_programs_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tamc"))
        .args(["metrics", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"fun(x1) -> fun(x2) -> x1 x2").unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    assert!(stdout(&o).contains("height\t2\n"));
}

#[test]
fn seeded_bisim_passes() {
    let o = tamc(&["bisim", "--seed", "42", "--count", "500"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("500 checked, 0 failed\n"));
}

#[test]
fn bisim_checks_files_and_families() {
    let o = tamc(&["bisim", "--families", "6", &corpus("clash_arity.lam"), &corpus("twice_applied.lam")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("clash(abstraction)"));
    assert!(text.ends_with("16 checked, 0 failed\n"));
}

#[test]
fn bench_writes_one_row_per_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.csv");
    let o = tamc(&["bench", "--family", "tuple-explosion", "--n-max", "15", "--csv", &out.to_string_lossy()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "family,n,machine,size,width,height,beta,pi,total,elem_ops,env_copy_ops,lookup_ops");
    assert_eq!(lines.len(), 16);
    assert!(lines[15].starts_with("tuple-explosion,15,target,"));
}

#[test]
fn bench_accepts_several_machines() {
    let o = tamc(&["bench", "--family", "fun-explosion", "--n-max", "2", "--machine", "source", "--machine", "int"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(tamc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(tamc(&["run", "/nonexistent/file.lam"]).status.code(), Some(2));
    assert_eq!(tamc(&["bench", "--family", "tuple-explosion", "--n-min", "5", "--n-max", "2"]).status.code(), Some(2));
    assert_eq!(tamc(&["bisim"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.lam");
    std::fs::write(&bad, "fun(x) ->").unwrap();
    let o = tamc(&["run", &bad.to_string_lossy()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("syntax error at 1:10"));
    let open = dir.path().join("open.lam");
    std::fs::write(&open, "fun(x) -> y").unwrap();
    assert_eq!(tamc(&["run", &open.to_string_lossy()]).status.code(), Some(2));
}
