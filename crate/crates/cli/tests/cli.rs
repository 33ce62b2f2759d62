use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rectcover"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn triangular_exact_cover() {
    let d = TempDir::new().unwrap();
    ok(d.path(), &["gen", "triangular", "4", "-o", "t4.bm"]);
    assert_eq!(
        std::fs::read_to_string(d.path().join("t4.bm")).unwrap(),
        "4 4\n0111\n0011\n0001\n0000\n"
    );
    let out = ok(d.path(), &["cover", "--method", "exact", "t4.bm", "-o", "t4.cov"]);
    assert!(out.starts_with("cost 8\n"), "{out}");
    assert!(out.contains("optimal true"));
    let v = ok(d.path(), &["verify", "covering", "t4.bm", "t4.cov"]);
    assert!(v.ends_with("cost 8\n"), "{v}");
}

#[test]
fn certificate_round_trip() {
    let d = TempDir::new().unwrap();
    ok(d.path(), &["gen", "triangular", "8", "-o", "t8.bm"]);
    assert_eq!(
        ok(d.path(), &["cover", "--method", "lp", "t8.bm", "--dual", "c8.dc"]),
        "lp 24\n"
    );
    assert_eq!(
        ok(d.path(), &["verify", "certificate", "t8.bm", "c8.dc"]),
        "feasible, value 24\n"
    );

    // doubling every value breaks feasibility
    let text = std::fs::read_to_string(d.path().join("c8.dc")).unwrap();
    let mut lines = text.lines();
    let mut bad = format!("{}\n", lines.next().unwrap());
    for l in lines {
        let (ij, v) = l.rsplit_once(' ').unwrap();
        let (p, q) = v.split_once('/').unwrap();
        bad.push_str(&format!("{ij} {}/{q}\n", 2 * p.parse::<i64>().unwrap()));
    }
    std::fs::write(d.path().join("bad.dc"), bad).unwrap();
    let out = run(d.path(), &["verify", "certificate", "t8.bm", "bad.dc"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("infeasible"));
}

#[test]
fn regex_lengths() {
    let d = TempDir::new().unwrap();
    assert_eq!(ok(d.path(), &["regex", "length", "--family", "ln", "4"]), "8\n");
    assert_eq!(
        ok(d.path(), &["regex", "emit", "--family", "ln", "4", "--method", "dc"]),
        "a0 a1 + (a0+a1)(a2+a3) + a2 a3\n"
    );
    std::fs::write(d.path().join("l.l2"), "2 3\n0 0\n0 1\n1 1\n").unwrap();
    assert_eq!(ok(d.path(), &["regex", "length", "--language", "l.l2"]), "5\n");
}

#[test]
fn network_checks() {
    let d = TempDir::new().unwrap();
    ok(d.path(), &["gen", "allones", "2", "2", "-o", "j.bm"]);
    // both inputs into one middle node feeding both outputs
    let net = "nodes 5 edges 4 in 2 out 2\ni 0 0\ni 1 1\no 0 3\no 1 4\ne 0 2\ne 1 2\ne 2 3\ne 2 4\n";
    std::fs::write(d.path().join("j.rn"), net).unwrap();
    let out = ok(d.path(), &["verify", "network", "j.bm", "j.rn", "--unambiguous"]);
    assert_eq!(out, "expresses, size 4, depth 2..2, unambiguous true\n");
    ok(d.path(), &["gen", "triangular", "2", "-o", "t2.bm"]);
    assert_eq!(code(&run(d.path(), &["verify", "network", "t2.bm", "j.rn"])), 1);
}

#[test]
fn budgets_and_errors_have_distinct_codes() {
    let d = TempDir::new().unwrap();
    ok(d.path(), &["gen", "kneser", "6", "1", "1", "-o", "k.bm"]);
    let out = run(d.path(), &["cover", "k.bm", "--bb-budget", "10"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stdout).contains("optimal false"));
    assert_eq!(code(&run(d.path(), &["cover", "k.bm", "--max-rects", "3"])), 2);

    std::fs::write(d.path().join("bad.bm"), "2 2\n01\n1\n").unwrap();
    let out = run(d.path(), &["cover", "bad.bm"]);
    assert_eq!(code(&out), 1);
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("line 3"),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(code(&run(d.path(), &["frobnicate"])), 1);
    assert_eq!(code(&run(d.path(), &["cover", "missing.bm"])), 1);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let d = TempDir::new().unwrap();
    ok(d.path(), &["gen", "disjointness", "3", "-o", "d3.bm"]);
    for args in [
        &["cover", "--method", "greedy", "d3.bm"][..],
        &["cover", "--method", "exact", "d3.bm"],
        &["cover", "--method", "lp", "d3.bm", "--unweighted"],
        &["bounds", "--matrix", "d3.bm"],
        &["table", "--k-max", "5", "--blocks"],
        &["regex", "emit", "--family", "ln", "6"],
    ] {
        let a = run(d.path(), args);
        let b = run(d.path(), args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    ok(d.path(), &["cover", "--method", "exact", "d3.bm", "-o", "a.cov"]);
    ok(d.path(), &["cover", "--method", "exact", "d3.bm", "-o", "b.cov"]);
    assert_eq!(
        std::fs::read(d.path().join("a.cov")).unwrap(),
        std::fs::read(d.path().join("b.cov")).unwrap()
    );
}

#[test]
fn direct_product_report() {
    let d = TempDir::new().unwrap();
    std::fs::write(d.path().join("k.bm"), "2 2\n11\n01\n").unwrap();
    ok(d.path(), &["gen", "allones", "2", "2", "-o", "m.bm"]);
    ok(d.path(), &["gen", "kron", "k.bm", "m.bm", "-o", "km.bm"]);
    ok(d.path(), &["cover", "km.bm", "-o", "km.cov"]);
    // the depth-2 network of the optimal covering, written by hand from the .cov
    let cov = std::fs::read_to_string(d.path().join("km.cov")).unwrap();
    let rects: Vec<(Vec<usize>, Vec<usize>)> = cov
        .lines()
        .skip(1)
        .map(|l| {
            let parts: Vec<&str> = l.split(' ').collect();
            let idx = |s: &str| s.split(',').map(|t| t.parse().unwrap()).collect();
            (idx(parts[1]), idx(parts[3]))
        })
        .collect();
    let t = rects.len();
    let mut edges = Vec::new();
    for (k, (rows, cols)) in rects.iter().enumerate() {
        edges.extend(cols.iter().map(|j| format!("e {j} {}", 8 + k)));
        edges.extend(rows.iter().map(|i| format!("e {} {}", 8 + k, 4 + i)));
    }
    let mut net = format!("nodes {} edges {} in 4 out 4\n", 8 + t, edges.len());
    for j in 0..4 {
        net.push_str(&format!("i {j} {j}\n"));
    }
    for i in 0..4 {
        net.push_str(&format!("o {i} {}\n", 4 + i));
    }
    net.push_str(&(edges.join("\n") + "\n"));
    std::fs::write(d.path().join("km.rn"), net).unwrap();
    let text = ok(d.path(), &["verify", "direct-product", "k.bm", "m.bm", "km.rn"]);
    assert!(text.contains("CHAIN") && text.ends_with("holds true\n"), "{text}");
    let csv = ok(
        d.path(),
        &["verify", "direct-product", "k.bm", "m.bm", "km.rn", "--csv"],
    );
    assert!(csv.starts_with("section,item,value,ok\n"));
}
