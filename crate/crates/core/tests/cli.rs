use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cdp::metrics::MetricsReport;

fn cdp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdp"))
        .args(args)
        .output()
        .expect("spawn cdp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn run_toy(out: &Path) -> Output {
    cdp(&[
        "run",
        "--kind",
        "toy5",
        "--knn",
        "2",
        "--tau",
        "0.75",
        "--k",
        "2",
        "--no-standardize",
        "--out",
        out.to_str().unwrap(),
    ])
}

#[test]
fn generate_writes_csv() {
    let o = cdp(&["generate", "--kind", "toy5", "--n", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("name,x0,x1,x2"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn generate_is_seed_deterministic() {
    let a = cdp(&["generate", "--kind", "swiss_roll", "--n", "200", "--seed", "4"]);
    let b = cdp(&["generate", "--kind", "swiss_roll", "--n", "200", "--seed", "4"]);
    let c = cdp(&["generate", "--kind", "swiss_roll", "--n", "200", "--seed", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn generate_to_file_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("torus.csv");
    let o = cdp(&["generate", "--kind", "torus", "--n", "50", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let cloud = cdp::datasets::load_csv(&path).unwrap();
    assert_eq!((cloud.len(), cloud.dim()), (50, 3));
    assert!(cloud.color().is_some());
}

#[test]
fn invalid_arguments_are_rejected() {
    assert!(!cdp(&["generate", "--kind", "torus", "--n", "0"]).status.success());
    assert!(!cdp(&["generate", "--kind", "cube"]).status.success());
    assert!(!cdp(&["generate", "--kind", "torus", "--param", "nope=1"]).status.success());
    assert!(!cdp(&["run", "--kind", "toy5", "--tau", "1.5"]).status.success());
    assert!(!cdp(&["run", "--kind", "toy5", "--tau", "0"]).status.success());
    assert!(!cdp(&["run"]).status.success());

    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let o = cdp(&["run", "--kind", "toy5", "--knn", "2", "--k", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--k"));
}

#[test]
fn toy_run_prints_headline_and_writes_layout() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("toy");
    let o = run_toy(&out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("q10(psi)=0.9435 ≤ r̃/r ≤ q90(1/phi*)=1.5461 for ≥90% of pairs per side"));
    assert!(text.contains("C_sp=0.5076"));
    assert!(text.contains("fixed error=22.63%"));
    assert!(text.contains("reselected error=16.01%"));
    assert!(text.contains("certificates holding: 5/5"));
    for f in ["points.csv", "projected.csv", "certificates.csv", "report.txt", "scatter.svg"] {
        assert!(out.join(f).is_file(), "missing {f}");
    }
    assert!(!out.join("edges.csv").exists());

    let report = MetricsReport::from_text(&fs::read_to_string(out.join("report.txt")).unwrap()).unwrap();
    assert_eq!(report.n_admissible, 5);
    assert_eq!(report.fixed_error_percent, "22.63");
    assert_eq!(report.parameters.k_nn, 2);

    let certs = fs::read_to_string(out.join("certificates.csv")).unwrap();
    let mut lines = certs.lines();
    assert_eq!(lines.next().unwrap(), cdp::certificates::CERTIFICATE_HEADER);
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().any(|r| r.starts_with("D,E,") && r.ends_with(",D>C>B>A>E")));
}

#[test]
fn certify_summarizes_a_run() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("toy");
    assert!(run_toy(&out).status.success());
    let o = cdp(&["certify", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("pairs: 5"));
    assert!(text.contains("certificates holding: 5/5"));
    assert!(text.contains("fixed-pairs error=22.63%"));
    assert!(text
        .lines()
        .any(|l| l == "q10(psi)=0.9435 ≤ r̃/r ≤ q90(1/phi*)=1.5461 for ≥90% of pairs per side"));

    let missing = cdp(&["certify", tmp.path().join("absent").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(1));
    fs::write(out.join("certificates.csv"), "garbage\n1,2\n").unwrap();
    assert!(!cdp(&["certify", out.to_str().unwrap()]).status.success());
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = tmp.path().join(name);
        let o = cdp(&[
            "run", "--kind", "helix", "--n", "300", "--seed", "9", "--emit-edges", "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        out
    };
    let (a, b) = (run("a"), run("b"));
    for f in ["report.txt", "certificates.csv", "points.csv", "projected.csv", "scatter.svg", "edges.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f} differs");
    }
}

#[test]
fn scatter_is_well_formed_svg() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("s");
    let o = cdp(&["run", "--kind", "s_curve", "--n", "250", "--seed", "1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let kept = cdp::datasets::load_csv(out.join("projected.csv")).unwrap().len();
    let svg = fs::read_to_string(out.join("scatter.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    let circles = doc.descendants().filter(|n| n.has_tag_name("circle")).count();
    assert_eq!(circles, kept);
}

#[test]
fn csv_input_and_pca_method() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("toy.csv");
    let o = cdp(&["generate", "--kind", "toy5", "--out", input.to_str().unwrap()]);
    assert!(o.status.success());
    let out = tmp.path().join("pca");
    let o = cdp(&[
        "run", "--input", input.to_str().unwrap(), "--knn", "2", "--tau", "0.75", "--no-standardize",
        "--method", "pca", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("certificates holding: 5/5"));
    let report = MetricsReport::from_text(&fs::read_to_string(out.join("report.txt")).unwrap()).unwrap();
    assert_eq!(report.method, "pca");
}

#[test]
fn exit_codes_for_degenerate_inputs() {
    let tmp = tempfile::tempdir().unwrap();
    // no pair is admissible at this threshold
    let o = cdp(&[
        "run", "--kind", "toy5", "--knn", "2", "--tau", "0.3", "--no-standardize", "--out",
        tmp.path().join("e").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));

    let dup = tmp.path().join("dup.csv");
    fs::write(&dup, "x,y,z\n0,0,0\n1,0,0\n0,1,0\n1,0,0\n0,0,1\n").unwrap();
    let o = cdp(&["run", "--input", dup.to_str().unwrap(), "--knn", "2", "--out",
        tmp.path().join("d").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("coincide"));
}
