use std::io::Write;
use std::process::{Command, Output, Stdio};

use hermloc::form::HermForm;
use hermloc::json::{form_doc, parse, FormDoc, SeriesDoc, SimilitudeJson};
use hermloc::ring::RingSpec;
use serde_json::Value;

fn hermloc(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hermloc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

const STD2: &str = r#"{"v": 1, "a": [["0","0"],["0","0"]], "b": [["0","1"],["-1","0"]]}"#;

#[test]
fn disc_of_the_standard_plane_is_one() {
    let o = hermloc(&["disc", "--ring-preset", "q2i"], STD2);
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    assert_eq!(v["disc"], "1");
    assert_eq!(v["nondegenerate"], true);
}

#[test]
fn reducing_the_zero_form_is_a_domain_error() {
    let zero = r#"{"a": [["0","0"],["0","0"]], "b": [["0","0"],["0","0"]]}"#;
    let o = hermloc(&["reduce", "--ring-preset", "q2sqrt2"], zero);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json_out(&o)["error"]["kind"], "Degenerate");
}

#[test]
fn malformed_input_exits_with_one() {
    for (args, text) in [
        (vec!["disc", "--ring-preset", "q2i"], "{\"a\": "),
        (
            vec!["disc", "--ring-preset", "q2i"],
            r#"{"a": [], "b": [], "extra": 1}"#,
        ),
        (
            vec!["disc", "--ring-preset", "q2i"],
            r#"{"v": 2, "a": [], "b": []}"#,
        ),
        (vec!["disc"], STD2),
        (vec!["cochar-sp"], "[]"),
    ] {
        let o = hermloc(&args, text);
        assert_eq!(o.status.code(), Some(1), "{args:?} {text}");
    }
    let o = hermloc(&["disc", "/nonexistent/form.json"], "");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn constraint_violation_is_a_domain_error() {
    let bad = r#"{"a": [["1"]], "b": [["0"]]}"#;
    let o = hermloc(&["validate", "--ring-preset", "q2i"], bad);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json_out(&o)["error"]["kind"], "ConstraintViolation");
}

#[test]
fn outputs_round_trip_and_are_deterministic() {
    let ring = RingSpec::preset("qp-sqrt-p:3", None).unwrap();
    let f = HermForm::standard(&ring, 3).unwrap();
    let doc = form_doc(&f).to_string();
    let reparsed: FormDoc = parse(&doc).unwrap();
    assert_eq!(reparsed.a.len(), 3);

    let first = hermloc(&["reduce"], &doc);
    let second = hermloc(&["reduce"], &doc);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let sim: SimilitudeJson =
        serde_json::from_value(json_out(&first)["similitude"].clone()).unwrap();
    let s = sim.to_similitude(&ring).unwrap();
    assert!(s.verify(&f, &f).unwrap());

    let series =
        r#"{"q": 9, "p": 3, "maxden": 9, "prec": 6, "coeffs": [[["2","3/1"]], [["1","0"]]]}"#;
    let o = hermloc(&["series"], series);
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    assert_eq!(v["primitive_degree"], 1);
    assert_eq!(v["distinguished_deg1"], true);
    let again: SeriesDoc = serde_json::from_value(v["series"].clone()).unwrap();
    let (r, s) = again.to_series().unwrap();
    assert_eq!(r.prec, 6);
    assert!(r.is_distinguished_deg1(&s));
}

#[test]
fn lift_and_similar_subcommands() {
    let ring = RingSpec::preset("q2i", None).unwrap();
    let f = HermForm::standard(&ring, 2).unwrap();
    let body = form_doc(&f);
    let lift = serde_json::json!({
        "ring": body["ring"],
        "a": body["a"],
        "b": body["b"],
        "similitude": {
            "precision": 2,
            "gamma1": [[{"a": "1", "b": "0"}, {"a": "0", "b": "0"}], [{"a": "0", "b": "0"}, {"a": "1", "b": "0"}]],
            "gamma2": "1"
        }
    });
    let o = hermloc(&["lift"], &lift.to_string());
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
    assert_eq!(json_out(&o)["similitude"]["precision"], 6);

    let similar = serde_json::json!({
        "ring": {"preset": "q2i"},
        "f1": {"a": body["a"], "b": body["b"]},
        "f2": {"a": [["0", "0"], ["0", "0"]], "b": [["0", "0"], ["0", "0"]]},
    });
    let o = hermloc(&["similar"], &similar.to_string());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_out(&o)["similar"], false);
}

#[test]
fn factor_and_cochar_subcommands() {
    let poly =
        r#"{"q": 9, "maxden": 9, "poly": [[["1","3"]], [["8","1"],["8","2"]], [["1","0"]]]}"#;
    let o = hermloc(&["factor"], poly);
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    assert_eq!(v["factorization"]["complete"], true);
    assert_eq!(v["factorization"]["roots"].as_array().unwrap().len(), 2);

    let not_monic = r#"{"q": 9, "maxden": 9, "poly": [[["1","0"]], [["2","0"]]]}"#;
    assert_eq!(hermloc(&["factor"], not_monic).status.code(), Some(2));

    let act = r#"{"v": 1, "rank": 1, "generators": [[[-1]]], "mu": [3]}"#;
    let o = hermloc(&["cochar-sp"], act);
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    assert_eq!(v["sp"]["torsion"][0]["mod"], 2);
    assert_eq!(v["sp"]["torsion"][0]["val"], 1);

    let bad = r#"{"rank": 1, "generators": [[[2]]]}"#;
    let o = hermloc(&["cochar-sp"], bad);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json_out(&o)["error"]["kind"], "NonUnimodular");
}
