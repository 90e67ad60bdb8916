use std::path::PathBuf;
use std::process::Command;

use toramp_cli::run;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn ok(args: &[&str]) -> String {
    let out = run(std::iter::once("toramp").chain(args.iter().copied()));
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    out.stdout
}

fn code(args: &[&str]) -> i32 {
    run(std::iter::once("toramp").chain(args.iter().copied())).code
}

#[test]
fn documented_examples() {
    let pent = fixture("pentagon.fan.json");
    assert_eq!(ok(&["adjoint", &pent]), "x3*x4*x5 + x1*x4*x5 + x1*x2*x5 + x1*x2*x3 + x2*x3*x4\n");
    assert_eq!(ok(&["evaluate", &pent, "--x", "1,1,1,1,1"]), "5\n");
    // Twelve of the thirty lines lie in one of the planes and are pruned.
    let hex = ok(&["sing-decompose", &fixture("hexagon.fan.json")]);
    assert!(hex.ends_with("18 components of dim 1, 2 components of dim 2\n"), "{hex}");
    assert_eq!(hex.lines().filter(|l| l.starts_with("dim 1:")).count(), 18);
}

#[test]
fn binary_matches_library() {
    let pent = fixture("pentagon.fan.json");
    let out = Command::new(env!("CARGO_BIN_EXE_toramp")).args(["evaluate", &pent, "--x", "1,2,3,4,5"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), ok(&["evaluate", &pent, "--x", "1,2,3,4,5"]));
    let bad = Command::new(env!("CARGO_BIN_EXE_toramp")).args(["adjoint", "/nonexistent.json"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    let pent = fixture("pentagon.fan.json");
    assert_eq!(code(&["no-such-command"]), 1);
    assert_eq!(code(&["adjoint", "/nonexistent.json"]), 1);
    assert_eq!(code(&["evaluate", &pent, "--x", "1.5,1,1,1,1"]), 1);
    assert_eq!(code(&["evaluate", &pent, "--x", "1,0,1,1,1"]), 2);
    assert_eq!(code(&["evaluate", &pent]), 2);
    assert_eq!(code(&["warren", &pent]), 2);
    assert_eq!(code(&["interpolate", &pent]), 2);
    assert_eq!(code(&["sing-system", &pent, "--J", "0,1"]), 2);

    let dir = std::env::temp_dir().join(format!("toramp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let float = dir.join("float.fan.json");
    std::fs::write(&float, r#"{"kind":"fan","d":1,"rays":[[1.5],[-1]],"max_cones":[[0],[1]]}"#).unwrap();
    assert_eq!(code(&["adjoint", float.to_str().unwrap()]), 1);
}

#[test]
fn one_based_input() {
    let dir = std::env::temp_dir().join(format!("toramp-cli-ob-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("pentagon1.fan.json");
    std::fs::write(
        &f,
        r#"{"kind":"fan","d":2,"rays":[[1,0],[0,1],[-1,1],[-1,0],[0,-1]],
            "max_cones":[[1,2],[2,3],[3,4],[4,5],[1,5]]}"#,
    )
    .unwrap();
    let f = f.to_str().unwrap();
    let pent = fixture("pentagon.fan.json");
    assert_eq!(ok(&["adjoint", f, "--one-based"]), ok(&["adjoint", &pent]));
    assert_eq!(ok(&["restrict", f, "--one-based", "--tau", "1"]), ok(&["restrict", &pent, "--tau", "0"]));
    assert_eq!(code(&["adjoint", f]), 2);
}

#[test]
fn structured_output() {
    let pent = fixture("pentagon.fan.json");
    let v: serde_json::Value = serde_json::from_str(&ok(&["evaluate", &pent, "--x", "1,1,1,1,1", "--format", "structured"])).unwrap();
    assert_eq!(v["value"], "5");
    let hex = ok(&["sing-decompose", &fixture("hexagon.fan.json"), "--format", "structured"]);
    let v: serde_json::Value = serde_json::from_str(&hex).unwrap();
    assert_eq!(v["components"].as_array().unwrap().len(), 20);
    let w = ok(&["walls", &fixture("cuboid.polytope.json"), "--format", "structured"]);
    let v: serde_json::Value = serde_json::from_str(&w).unwrap();
    let walls = v["walls"].as_array().unwrap();
    assert_eq!(walls.len(), 12);
    let w35 = walls.iter().find(|w| w["sigma"] == serde_json::json!([3, 5])).unwrap();
    assert_eq!(w35["facet_defining"], false);
}

#[test]
fn polytope_commands() {
    let pent = fixture("pentagon.polytope.json");
    assert_eq!(ok(&["warren", &pent]), "-y1*y2 - 3*y1 + 3*y2 + 5\n");
    assert_eq!(
        ok(&["warren", &fixture("unbounded-pentagon.polytope.json")]),
        "20*y1^3 - 20*y1*y2^2 + 224*y1^2 - 90*y2^2 + 812*y1 + 960\n"
    );
    assert_eq!(ok(&["def-check", &pent, "--z", "1,1,1,2,1"]), "boundary: {4}\n");
    assert_eq!(ok(&["def-check", &pent, "--z", "1,1,1,3,1"]), "outside: {4}\n");
    assert_eq!(ok(&["def-check", &pent]), "interior\n");
    assert_eq!(ok(&["shrink", &pent, "--face", "3", "--z", "1,1,1,2,1"]), "(2, 1)\n");
    assert_eq!(ok(&["smooth-check", &pent]), "smooth\n");
    assert_eq!(ok(&["smooth-check", &pent, "--z", "1,1,1,2,1"]), "singular at (2, -2)\n");
    let deg = ok(&["degenerate", &fixture("cuboid.polytope.json"), "--face", "0", "--z", "7,0,1,0,0,2"]);
    assert!(deg.contains("(-8*y1 - 11*y2 - 7*y3 + 7)"), "{deg}");
    let split = ok(&["split", &fixture("abhy3.polytope.json"), "--face", "1"]);
    assert!(split.starts_with("restriction = x25*x26*x35*x36*(x13 + x24)*(x15 + x46)\n"), "{split}");
    let sq = ok(&["santalo", &fixture("unit-square.polytope.json"), "--tol", "1e-12"]);
    assert!(sq.starts_with("(0.500000000000, 0.500000000000)"), "{sq}");
    assert_eq!(ok(&["dual-volume", &fixture("unit-square.polytope.json"), "--x", "1,1,1,1"]), ok(&["evaluate", &fixture("unit-square.polytope.json"), "--x", "1,1,1,1"]));
}

#[test]
fn fan_commands() {
    let oct = fixture("octagon-alpha1.fan.json");
    assert_eq!(ok(&["ngon-check", &oct]), "special\n");
    assert!(ok(&["sing-check", &oct]).starts_with("torus witness"));
    assert_eq!(ok(&["ngon-check", &fixture("octagon-alpha2.fan.json")]), "generic\n");
    let cube = fixture("cube.polytope.json");
    assert_eq!(ok(&["primitive-collections", &cube]), "{x1, x2}\n{x3, x4}\n{x5, x6}\n");
    let abhy = ok(&["sing-decompose", &fixture("abhy3.polytope.json")]);
    assert!(abhy.contains("factored cover") && abhy.contains("J = {x15, x36}"), "{abhy}");
    let res = ok(&["residue", &fixture("hexagon.fan.json"), "--tau", "0"]);
    assert!(res.ends_with("residue = 1 * (1/(x2) + 1/(x6))\n"), "{res}");
}

#[test]
fn strict_validation() {
    let dir = std::env::temp_dir().join(format!("toramp-cli-strict-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("overlap.fan.json");
    std::fs::write(&f, r#"{"kind":"fan","d":2,"rays":[[1,0],[0,1],[1,1],[-1,0]],"max_cones":[[0,1],[2,3]]}"#).unwrap();
    let f = f.to_str().unwrap();
    assert_eq!(code(&["amplitude", f, "--strict"]), 2);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["sing-decompose".to_string(), fixture("octagon-alpha2.fan.json")],
        vec!["chamber-spaces".to_string(), fixture("cuboid.polytope.json")],
    ] {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(ok(&a), ok(&a));
    }
}
