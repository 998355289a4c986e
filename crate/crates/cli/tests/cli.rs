use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn hdta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn reach_exit_codes() {
    let fig3 = fixture("fig3.hdta");
    let none = fixture("fig5-no-square.hdta");
    for engine in ["zone", "region", "concrete"] {
        let o = hdta(&["reach", path(&fig3), "--engine", engine]);
        assert_eq!(o.status.code(), Some(0), "{engine}: {}", stdout(&o));
        assert!(stdout(&o).starts_with("reachable"));
        let o = hdta(&["reach", path(&none), "--engine", engine]);
        assert_eq!(o.status.code(), Some(1), "{engine}");
    }
    let o = hdta(&[
        "reach",
        path(&fig3),
        "--engine",
        "region",
        "--max-region-constant",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_reports_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let good = fs::read_to_string(fixture("fig9-a.hdta")).unwrap();
    let bad = dir.path().join("bad.hdta");
    fs::write(&bad, good.replace("| p0 | p1 |", "| p0 | nowhere |")).unwrap();
    let o = hdta(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 9: cube `ea`"));
    assert_eq!(
        hdta(&["validate", path(&fixture("fig9-a.hdta"))])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn dot_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.dot");
    let b = dir.path().join("b.dot");
    let fig3 = fixture("fig3.hdta");
    for cmd in ["zonegraph", "regiongraph"] {
        for out in [&a, &b] {
            let o = hdta(&[cmd, path(&fig3), "--dot", out.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0));
        }
        let first = fs::read_to_string(&a).unwrap();
        assert!(first.starts_with("digraph"));
        assert_eq!(first, fs::read_to_string(&b).unwrap());
    }
}

#[test]
fn single_state_zone_graph() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("one.hdta");
    fs::write(
        &file,
        "hdta 1\nclocks x\nactions a\ninitial s\nfinal s\ncube s 0 | - | - | - | true | -\n",
    )
    .unwrap();
    let o = hdta(&[
        "zonegraph",
        file.to_str().unwrap(),
        "--dot",
        dir.path().join("g.dot").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1 nodes, 0 edges");
}

#[test]
fn product_of_the_two_factors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("prod.hdta");
    let o = hdta(&[
        "product",
        path(&fixture("fig9-a.hdta")),
        path(&fixture("fig9-b.hdta")),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(stdout(&o).trim(), "9 cubes, dimension 2");
    assert_eq!(
        hdta(&["reach", out.to_str().unwrap()]).status.code(),
        Some(0)
    );

    let clash = hdta(&[
        "product",
        path(&fixture("fig9-a.hdta")),
        path(&fixture("fig9-a.hdta")),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(clash.status.code(), Some(2));
    let renamed = hdta(&[
        "product",
        path(&fixture("fig9-a.hdta")),
        path(&fixture("fig9-a.hdta")),
        "-o",
        out.to_str().unwrap(),
        "--rename-clocks",
    ]);
    assert_eq!(renamed.status.code(), Some(0));
    assert!(fs::read_to_string(&out).unwrap().contains("clocks l.x r.x"));
}

#[test]
fn convert_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let ta = dir.path().join("a.ta");
    let back = dir.path().join("a.hdta");
    let a = path(&fixture("fig9-a.hdta")).to_owned();
    let o = hdta(&["convert", "hdta-to-ta", &a, "-o", ta.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        hdta(&["validate", ta.to_str().unwrap()]).status.code(),
        Some(0)
    );
    let o = hdta(&[
        "convert",
        "ta-to-hdta",
        ta.to_str().unwrap(),
        "-o",
        back.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        hdta(&["reach", back.to_str().unwrap()]).status.code(),
        Some(0)
    );

    let fig3 = path(&fixture("fig3.hdta")).to_owned();
    assert_eq!(
        hdta(&["convert", "hdta-to-ta", &fig3, "-o", ta.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let o = hdta(&[
        "convert",
        "hdta-to-ta",
        &fig3,
        "-o",
        ta.to_str().unwrap(),
        "--unfold",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn trace_is_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.jsonl");
    let o = hdta(&[
        "reach",
        path(&fixture("fig3.hdta")),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&trace).unwrap();
    assert!(!text.is_empty());
    for line in text.lines() {
        assert!(line.starts_with('{') && line.ends_with('}'), "{line}");
        assert!(line.contains("\"cube\""));
    }
}

#[test]
fn milner_bench_small() {
    let o = hdta(&[
        "bench",
        "milner",
        "--n",
        "2",
        "--d",
        "1",
        "--D",
        "3",
        "--interleaved",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<&str> = out
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect();
    assert_eq!(rows.len(), 2, "{out}");
    assert_eq!(
        hdta(&["bench", "milner", "--n", "0"]).status.code(),
        Some(2)
    );
}
