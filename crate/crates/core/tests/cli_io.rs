mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::process::{Command, Stdio};

use common::{cyclic, orthant, quadric, square};
use serde_json::Value;
use toric_conic::io::class_color;
use toric_conic::{analyze, parse_input, render_svg_2d, AnalysisOptions, Error, SvgWindow, ToricAlgebra};

const SQUARE: &str = r#"{"rank":3,"primal_rays":[[0,0,1],[1,0,1],[0,1,1],[1,1,1]]}"#;
const CYCLIC: &str = r#"{"rank":2,"normals":[[0,1],[3,-2]]}"#;

fn quick() -> AnalysisOptions {
    AnalysisOptions { acyclicity: false, ..AnalysisOptions::default() }
}

#[test]
fn parse_examples() {
    assert!(parse_input(r#"{"rank":2,"dual_rays":[[1,1],[-1,1]]}"#).is_ok());
    assert!(parse_input(SQUARE).is_ok());
    let err = parse_input(r#"{"rank":2,"normals":[[0,1]],"dual_rays":[[0,1]]}"#).unwrap_err();
    assert!(err.to_string().contains("exactly one"), "{err}");
}

#[test]
fn parse_errors_are_precise() {
    let e = parse_input(r#"{"rank":2,"normals":[[0,1],[1,0.5]]}"#).unwrap_err();
    assert!(e.to_string().contains("normals[1][1]"), "{e}");
    let e = parse_input(r#"{"rank":3,"normals":[[0,1]]}"#).unwrap_err();
    assert!(e.to_string().contains("rank is 3"), "{e}");
    let e = parse_input("{\"rank\":2,\n \"normals\": [[0,1]").unwrap_err();
    assert!(e.to_string().contains("line 2"), "{e}");
    let e = parse_input(r#"{"rank":2,"normals":[[0,1]],"colour":1}"#).unwrap_err();
    assert!(e.to_string().contains("colour"), "{e}");
}

#[test]
fn big_integers_may_be_strings() {
    let input = parse_input(r#"{"rank":1,"normals":[["1"]]}"#).unwrap();
    assert_eq!(input.vectors[0][0], 1.into());
}

#[test]
fn analyze_examples() {
    let sq = analyze(&parse_input(SQUARE).unwrap(), &quick()).unwrap();
    assert_eq!(sq.classes.len(), 3);
    assert_eq!(sq.global_dimension, 3);
    let pdims: Vec<u64> = sq.classes.iter().map(|c| c["pdim"].as_u64().unwrap()).collect();
    assert_eq!(pdims, vec![3, 2, 2]);
    assert_eq!(serde_json::to_value(&sq.nccr).unwrap()["verdict"], "not_nccr");

    let cy = analyze(&parse_input(CYCLIC).unwrap(), &quick()).unwrap();
    assert_eq!((cy.classes.len(), cy.global_dimension), (3, 2));
    assert_eq!(serde_json::to_value(&cy.nccr).unwrap()["verdict"], "nccr");

    let o = analyze(&parse_input(r#"{"rank":2,"normals":[[1,0],[0,1]]}"#).unwrap(), &quick()).unwrap();
    assert_eq!((o.classes.len(), o.global_dimension), (1, 2));
    assert_eq!(serde_json::to_value(&o.nccr).unwrap()["verdict"], "nccr");
}

#[test]
fn analyze_is_deterministic() {
    let input = parse_input(SQUARE).unwrap();
    let options = AnalysisOptions { supports: vec![vec![0, 1]], ..AnalysisOptions::default() };
    let a = analyze(&input, &options).unwrap().to_json();
    let b = analyze(&input, &options).unwrap().to_json();
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["acyclicity"]["passed"], true);
    assert_eq!(v["partial_supports"][0]["verdict"]["verdict"], "nccr");
    assert_eq!(v["class_count"]["enumerated"], v["class_count"]["grid_oracle"]);
}

fn colors(alg: &ToricAlgebra, w: &SvgWindow) -> BTreeSet<String> {
    render_svg_2d(alg, w).unwrap().tiles.iter().map(|t| t.color.clone()).collect()
}

#[test]
fn svg_color_counts() {
    assert_eq!(colors(&quadric(), &SvgWindow::square(-2, 2)).len(), 2);
    assert_eq!(colors(&orthant(2), &SvgWindow::square(-1, 1)).len(), 1);
    assert_eq!(colors(&cyclic(), &SvgWindow::new(-1, 0, -1, 0)).len(), 3);
}

#[test]
fn svg_tiles_classify_to_their_color() {
    for (alg, w) in [(quadric(), SvgWindow::square(-2, 2)), (cyclic(), SvgWindow::square(-1, 1))] {
        let r = render_svg_2d(&alg, &w).unwrap();
        assert!(!r.tiles.is_empty());
        for t in &r.tiles {
            let c = alg.chamber_of(&t.witness).unwrap();
            assert_eq!(c, t.chamber);
            let canon = alg.canonical_class(&c).unwrap();
            assert_eq!(alg.class_index(&c).unwrap(), t.class);
            assert_eq!(class_color(&canon), t.color);
            assert!(r.svg.contains(&t.color));
        }
    }
}

#[test]
fn svg_is_byte_stable() {
    let w = SvgWindow::square(-2, 2);
    let a = render_svg_2d(&quadric(), &w).unwrap().svg;
    assert_eq!(a, render_svg_2d(&quadric(), &w).unwrap().svg);
    assert!(a.starts_with("<?xml") || a.starts_with("<svg"));
    assert!(a.contains("version=\"1.1\""));
}

#[test]
fn svg_needs_rank_two() {
    assert!(matches!(render_svg_2d(&square(), &SvgWindow::square(-1, 1)), Err(Error::Unsupported(_))));
}

fn cli(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_toric-conic"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn cli_chambers_and_cells() {
    let (code, out, _) = cli(&["chambers"], SQUARE);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3);
    let (code, out, _) = cli(&["--json", "cells", "A0"], SQUARE);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["cells"].as_array().unwrap().len(), 10);
    let (code, _, _) = cli(&["cells", "0,0,0,-1"], SQUARE);
    assert_eq!(code, 0);
}

#[test]
fn cli_resolution_and_nccr() {
    let (code, out, _) = cli(&["--json", "resolution", "--support", "A0,A1", "A0"], SQUARE);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["pdim"], 3);
    assert_eq!(v["verified"], true);
    let (_, out, _) = cli(&["nccr", "--support", "A0,A1"], SQUARE);
    assert_eq!(out.trim(), "NCCR");
    let (_, out, _) = cli(&["--json", "nccr"], SQUARE);
    assert!(out.contains("not_nccr"));
}

#[test]
fn cli_frobenius_svg_and_acyclicity() {
    let (code, out, _) = cli(&["--json", "frobenius", "--q", "2"], r#"{"rank":2,"normals":[[1,1],[-1,1]]}"#);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["decomposition"]["A0"], 2);
    assert_eq!(v["decomposition"]["A1"], 2);
    let (code, out, _) = cli(&["svg", "--window", "-1,0,-1,0"], CYCLIC);
    assert_eq!(code, 0);
    assert!(out.contains("<svg"));
    let (code, out, _) = cli(&["acyclicity", "--window", "1"], CYCLIC);
    assert_eq!(code, 0);
    assert!(out.ends_with("total violations 0\n"));
}

#[test]
fn cli_exit_codes() {
    let (code, _, err) = cli(&["chambers"], r#"{"rank":2,"normals":[[0,1]],"dual_rays":[[0,1]]}"#);
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"));
    let (code, _, _) = cli(&["svg"], SQUARE);
    assert_eq!(code, 1);
    let (code, _, _) = cli(&["cells", "A7"], SQUARE);
    assert_eq!(code, 1);
}
