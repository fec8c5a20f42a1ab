use mct::io;
use mct_core::anticommuting::clifford_generators;
use mct_core::pathology::simplex_surprise_tuple;
use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn workdir(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn mct(dir: &PathBuf, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mct")).current_dir(dir).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const CUBE01_3: &str = r#"{"dim": 3, "kind": "v_polytope", "vertices": [
    [0,0,0],[1,0,0],[0,1,0],[1,1,0],[0,0,1],[1,0,1],[0,1,1],[1,1,1]]}"#;
const BALL2: &str = r#"{"dim": 2, "kind": "named", "name": {"type": "ball", "radius": 1.0}}"#;
const SIMPLEX2: &str = r#"{"dim": 2, "kind": "named", "name": {"type": "simplex_standard"}}"#;
const SQUARE: &str = r#"{"dim": 2, "kind": "h_polytope", "facets": [
    {"a": [1, 0], "b": 1}, {"a": [-1, 0], "b": 0}, {"a": [0, 1], "b": 1}, {"a": [0, -1], "b": 0}]}"#;

#[test]
fn theta_of_unit_cube() {
    let dir = workdir("theta");
    fs::write(dir.join("cube01_3.json"), CUBE01_3).unwrap();
    let o = mct(&dir, &["theta", "--body", "cube01_3.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "3.0");
    let o = mct(&dir, &["theta", "--body", "cube01_3.json", "--method", "bisection", "--tol", "1e-10"]);
    assert_eq!(code(&o), 0);
    assert!((stdout(&o).trim().parse::<f64>().unwrap() - 3.0).abs() < 1e-6);
    fs::write(dir.join("ball.json"), BALL2).unwrap();
    assert_eq!(code(&mct(&dir, &["theta", "--body", "ball.json"])), 3);
}

#[test]
fn contraction_pipeline_verifies() {
    let dir = workdir("contractions");
    fs::write(
        dir.join("t.json"),
        r#"{"d":2,"n":2,"hermitian":[false,false],"matrices":[[[0,0],[1,0],[0,0],[0,0]],[[0,0],[0,0],[1,0],[0,0]]]}"#,
    )
    .unwrap();
    let o = mct(&dir, &["dilate", "contractions", "--in", "t.json", "--out", "cert.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = mct(&dir, &["verify", "--cert", "cert.json", "--tol", "1e-8"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("resolution_of_identity"));
}

#[test]
fn clifford_pair_lies_in_wmax_of_the_disk() {
    let dir = workdir("wmax");
    fs::write(dir.join("ball2.json"), BALL2).unwrap();
    assert_eq!(code(&mct(&dir, &["gen", "clifford", "--d", "2", "--out", "f2.json"])), 0);
    let o = mct(&dir, &["check", "wmax", "--body", "ball2.json", "--in", "f2.json"]);
    assert_eq!(code(&o), 0);
    // (Z, X) violates x + y ≤ 1 on the square [0,1]².
    fs::write(dir.join("square.json"), SQUARE).unwrap();
    let o = mct(&dir, &["check", "wmax", "--body", "square.json", "--in", "f2.json"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("non_member"));
}

#[test]
fn generators_round_trip_exactly() {
    let dir = workdir("roundtrip");
    assert_eq!(code(&mct(&dir, &["gen", "example", "simplex-surprise", "--p", "1.5", "--trunc", "9", "--out", "s.json"])), 0);
    let t = io::read_tuple(&dir.join("s.json")).unwrap();
    assert_eq!(t, simplex_surprise_tuple(1.5, 9).unwrap());
    let o = mct(&dir, &["gen", "clifford", "--d", "5"]);
    let t = io::tuple_from_json(&serde_json::from_str(&stdout(&o)).unwrap()).unwrap();
    assert_eq!(t, clifford_generators(5).unwrap().f);
}

#[test]
fn gallery_generators() {
    let dir = workdir("gallery");
    fs::write(dir.join("tri.json"), r#"{"dim": 2, "kind": "v_polytope", "vertices": [[0,0],[2,0],[0.5,1.5]]}"#).unwrap();
    fs::write(dir.join("box.json"), SQUARE).unwrap();
    let o = mct(&dir, &["gen", "example", "ball-covering", "--body", "tri.json", "--k", "4", "--out", "bc.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(io::read_tuple(&dir.join("bc.json")).unwrap().dim(), 24);
    let o = mct(&dir, &["gen", "example", "staircase", "--body", "box.json", "--trunc", "5", "--out", "st.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(io::read_tuple(&dir.join("st.json")).unwrap().dim(), 7);
    assert_eq!(code(&mct(&dir, &["check", "minimality", "--in", "st.json", "--body", "box.json"])), 1);
    assert_eq!(code(&mct(&dir, &["gen", "example", "staircase", "--body", "box.json"])), 3);
}

#[test]
fn minimality_exit_codes() {
    let dir = workdir("minimality");
    fs::write(dir.join("simplex.json"), SIMPLEX2).unwrap();
    fs::write(dir.join("square.json"), SQUARE).unwrap();
    mct(&dir, &["gen", "example", "minimal-normal", "--body", "square.json", "--out", "n.json"]);
    assert_eq!(code(&mct(&dir, &["check", "minimality", "--in", "n.json", "--body", "square.json"])), 0);
    mct(&dir, &["gen", "example", "simplex-surprise", "--trunc", "8", "--out", "s.json"]);
    let o = mct(&dir, &["check", "minimality", "--in", "s.json", "--body", "simplex.json"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("not decidable at truncation"));
    assert_eq!(code(&mct(&dir, &["report", "--in", "s.json", "--body", "simplex.json"])), 0);
    // W1 of the surprise tuple is not inside the square's translate.
    fs::write(dir.join("far.json"), r#"{"dim": 2, "kind": "v_polytope", "vertices": [[2,2],[3,2],[2,3]]}"#).unwrap();
    assert_eq!(code(&mct(&dir, &["check", "minimality", "--in", "s.json", "--body", "far.json"])), 3);
}

#[test]
fn sd_classification_exit_codes() {
    let dir = workdir("sd");
    assert_eq!(code(&mct(&dir, &["check", "sd", "--scales", "2,2"])), 0);
    assert_eq!(code(&mct(&dir, &["check", "sd", "--scales", "1.1,1.1"])), 1);
    assert_eq!(code(&mct(&dir, &["check", "sd", "--scales", "1.6,1.6"])), 2);
    assert_eq!(code(&mct(&dir, &["check", "sd", "--scales", "2,x"])), 3);
    assert_eq!(code(&mct(&dir, &["check", "sd", "--scales", "2,-1"])), 3);
}

#[test]
fn certificate_dilations_verify() {
    let dir = workdir("dilations");
    mct(&dir, &["gen", "clifford", "--d", "2", "--out", "f2.json"]);
    fs::write(dir.join("simplex.json"), SIMPLEX2).unwrap();
    fs::write(
        dir.join("x.json"),
        r#"{"d":2,"n":2,"hermitian":[true,true],"matrices":[[[0.5,0],[0.1,0],[0.1,0],[0.2,0]],[[0.3,0],[0,0.1],[0,-0.1],[0.1,0]]]}"#,
    )
    .unwrap();
    let cases: &[&[&str]] = &[
        &["dilate", "anticommuting", "--in", "x.json", "--out", "c.json"],
        &["dilate", "cube-ball", "--in", "x.json", "--scales", "0.7,0.7", "--out", "c.json"],
        &["dilate", "orthogonal", "--in", "x.json", "--out", "c.json"],
        &["dilate", "wmin-simplex", "--in", "x.json", "--body", "simplex.json", "--out", "c.json"],
        &["dilate", "symmetrize", "--in", "f2.json", "--out", "c.json"],
    ];
    for args in cases {
        let o = mct(&dir, args);
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(code(&mct(&dir, &["verify", "--cert", "c.json"])), 0, "{args:?}");
    }
    // Scales violating Σ a⁻² ≤ 1 are a premise error.
    assert_eq!(code(&mct(&dir, &["dilate", "anticommuting", "--in", "x.json", "--scales", "1,1"])), 3);
}

#[test]
fn verify_recomputes_residuals() {
    let dir = workdir("tamper");
    fs::write(dir.join("x.json"), r#"{"d":1,"n":1,"hermitian":[true],"matrices":[[[0.5,0]]]}"#).unwrap();
    assert_eq!(code(&mct(&dir, &["dilate", "halmos", "--in", "x.json", "--out", "c.json"])), 0);
    let mut cert: io::CertificateJson = serde_json::from_str(&fs::read_to_string(dir.join("c.json")).unwrap()).unwrap();
    cert.dilation.matrices[0][0][0] += 1e-3;
    fs::write(dir.join("bad.json"), serde_json::to_string(&cert).unwrap()).unwrap();
    let o = mct(&dir, &["verify", "--cert", "bad.json"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn malformed_input_exits_3() {
    let dir = workdir("malformed");
    fs::write(dir.join("bad.json"), "{\"d\": ").unwrap();
    let o = mct(&dir, &["verify", "--cert", "bad.json"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("malformed JSON"));
    assert_eq!(code(&mct(&dir, &["range", "--in", "missing.json"])), 3);
    assert_eq!(code(&mct(&dir, &["nonsense"])), 3);
    assert_eq!(code(&mct(&dir, &["--help"])), 0);
}

#[test]
fn range_outputs() {
    let dir = workdir("range");
    mct(&dir, &["gen", "clifford", "--d", "2", "--out", "f2.json"]);
    let o = mct(&dir, &["range", "--in", "f2.json", "--directions", "64"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["outer_facets"].as_array().unwrap().len(), 68);
    fs::write(dir.join("sq.json"), SQUARE).unwrap();
    mct(&dir, &["gen", "example", "minimal-normal", "--body", "sq.json", "--out", "n.json"]);
    let o = mct(&dir, &["range", "--in", "n.json", "--normal"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("v_polytope"));
}
