use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopdetect"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn last_outcome(out: &Output) -> String {
    let text = stdout(out);
    text.lines()
        .last()
        .unwrap()
        .rsplit(',')
        .next()
        .unwrap()
        .to_string()
}

#[test]
fn simulate_rho() {
    let out = run(&["simulate", "--mu", "0", "--lambda", "3", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("# seed=1 "));
    assert_eq!(
        text.lines().nth(1).unwrap(),
        "hop,node_id_hex,tortoise_hex,snapshot,outcome"
    );
    assert_eq!(last_outcome(&out), "detected@7");
    assert_eq!(text.lines().count(), 2 + 7);
}

#[test]
fn simulate_chain() {
    let out = run(&["simulate", "--chain", "5", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(last_outcome(&out), "terminated@5");
}

#[test]
fn simulate_budget_exit() {
    let out = run(&["simulate", "--mu", "0", "--lambda", "3", "--max-hops", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(last_outcome(&out), "budget_exhausted");
}

#[test]
fn simulate_random_graph() {
    let out = run(&[
        "simulate",
        "--random",
        "30",
        "--terminal-prob",
        "0.2",
        "--seed",
        "9",
        "--start",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["simulate"]).status.code(), Some(64));
    assert_eq!(run(&["simulate", "--lambda", "0"]).status.code(), Some(64));
    assert_eq!(
        run(&["simulate", "--lambda", "3", "--chain", "4"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(
        run(&["simulate", "--chain", "3", "--start", "3"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(run(&["bogus"]).status.code(), Some(64));
    assert_eq!(
        run(&["latency", "--mu", "1,2", "--lambda", "3"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(run(&["collisions", "--bits", "0"]).status.code(), Some(64));
    assert_eq!(
        run(&["header", "encode", "--tortoise", "1", "--hops", "70000"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn collisions() {
    let out = run(&["collisions", "--bits", "32", "--lengths", "8192"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "id_bits,path_length,p_exact,p_approx");
    assert_eq!(lines.len(), 2);
    let p: f64 = lines[1].split(',').nth(2).unwrap().parse().unwrap();
    assert!((0.005..=0.015).contains(&p));

    let out = run(&["collisions", "--bits", "1", "--lengths", "3"]);
    let p: f64 = stdout(&out)
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(2)
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(p, 1.0);

    let out = run(&["collisions"]);
    assert_eq!(stdout(&out).lines().count(), 1 + 4 * 13);
}

#[test]
fn latency() {
    let out = run(&[
        "latency", "--mu", "2,0,0", "--lambda", "4,1,255", "--ttl", "255",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "mu,lambda,brent_hop,ttl_hop,ratio\n\
         2,4,8,255,31.875000\n\
         0,1,1,255,255.000000\n\
         0,255,511,255,0.499022\n"
    );
    // Beyond the hop counter the simulation overflows before detecting.
    let out = run(&["latency", "--mu", "0", "--lambda", "40000"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn header_roundtrip() {
    let out = run(&[
        "header",
        "encode",
        "--tortoise",
        "0",
        "--hops",
        "0",
        "--nonce",
        "0",
    ]);
    assert_eq!(stdout(&out), format!("{}\n", "0".repeat(28)));

    let out = run(&[
        "header",
        "encode",
        "--tortoise",
        "0x0102030405060708",
        "--hops",
        "0x0a0b",
        "--nonce",
        "0x0c0d0e0f",
    ]);
    assert_eq!(
        stdout(&out),
        "0102030405060708 0a0b 0c0d0e0f\n".replace(' ', "")
    );

    let out = run(&["header", "decode", "0102030405060708090a0b0c0d0e"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "tortoise=0x0102030405060708\nhops=0x090a\nnonce=0x0b0c0d0e\n"
    );

    assert_eq!(run(&["header", "decode", "0102"]).status.code(), Some(65));
    assert_eq!(run(&["header", "decode", "zz"]).status.code(), Some(65));
    assert_eq!(run(&["header", "decode", "012"]).status.code(), Some(65));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["simulate", "--random", "40", "--seed", "3"][..],
        &["simulate", "--mu", "5", "--lambda", "9", "--seed", "77"][..],
        &["collisions", "--bits", "24,48", "--lengths", "16,1024"][..],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout);
    }
}

#[test]
fn writes_to_file() {
    let dir = std::env::temp_dir().join(format!("loopdetect-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("trace.csv");
    let out = run(&["simulate", "--chain", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.ends_with("3,,,,terminated@3\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}
