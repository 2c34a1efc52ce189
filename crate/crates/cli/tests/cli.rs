use std::path::Path;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use proptest::prelude::*;
use serde_json::Value;
use tempfile::TempDir;

use mzv_cli::expr::{parse, Expr};
use mzv_core::word::{IndexVector, Word};

fn mzv(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mzv"))
        .args(args)
        .env("MZV_CACHE_DIR", cache)
        .env_remove("MZV_DIGITS")
        .output()
        .expect("spawn mzv")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn schema(name: &str) -> JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../schemas")
        .join(name);
    let raw: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    JSONSchema::compile(&raw).expect("schema compiles")
}

fn assert_valid(schema: &JSONSchema, v: &Value) {
    if let Err(errors) = schema.validate(v) {
        let msgs: Vec<String> = errors.map(|e| e.to_string()).collect();
        panic!("schema violations: {msgs:?}\n{v:#}");
    }
}

#[test]
fn verify_theorem1_k5_passes() {
    let dir = TempDir::new().unwrap();
    let o = mzv(
        dir.path(),
        &["verify", "theorem1", "--k", "5", "--digits", "40"],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn verify_pushdown_json_matches_schema_and_text() {
    let dir = TempDir::new().unwrap();
    let o = mzv(
        dir.path(),
        &["verify", "pushdown39", "--digits", "40", "--json"],
    );
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid(&schema("report.schema.json"), &v);
    assert_eq!(v["pass"], Value::Bool(true));

    let text = mzv(dir.path(), &["verify", "pushdown39", "--digits", "40"]);
    assert_eq!(text.status.code(), Some(0));
    assert!(stdout(&text).contains("PASS"));
}

#[test]
fn every_identity_serializes_to_schema() {
    let dir = TempDir::new().unwrap();
    let s = schema("identity.schema.json");
    let list = mzv(dir.path(), &["identity", "list"]);
    let names: Vec<String> = stdout(&list).lines().map(str::to_string).collect();
    assert_eq!(names.len(), 7);
    for name in &names {
        let o = mzv(
            dir.path(),
            &[
                "identity", "show", name, "--k", "2", "--l", "1", "--n", "4", "--json",
            ],
        );
        assert_eq!(o.status.code(), Some(0), "{name}");
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_valid(&s, &v);
        assert_eq!(v["name"], Value::String(name.clone()));
    }
}

#[test]
fn eval_json_matches_schema() {
    let dir = TempDir::new().unwrap();
    let o = mzv(
        dir.path(),
        &["eval", "z(2) - 1/6*z(2)", "--digits", "30", "--json"],
    );
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid(&schema("ball.schema.json"), &v);
    assert_eq!(v["expr"], Value::String("5/6*z(2)".into()));
    assert!(v["mid"]
        .as_str()
        .unwrap()
        .starts_with("1.37077838904018869706"));
}

#[test]
fn coaction_of_three_bar_nine_bar_reduces_to_zero() {
    let dir = TempDir::new().unwrap();
    let o = mzv(
        dir.path(),
        &["coaction", "z(-3,-9)", "--r", "1", "--reduce"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn coaction_raw_lists_every_cut() {
    let dir = TempDir::new().unwrap();
    let o = mzv(dir.path(), &["coaction", "z(-3,-9)", "--r", "11", "--raw"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let cases: [(&[&str], i32); 8] = [
        (&["eval", "z(2,0)"], 2),
        (&["eval", "z(2"], 2),
        (&["eval", "z(1)"], 1),
        (&["eval", "I(0,1)"], 1),
        (&["verify", "nosuch"], 2),
        (&["verify", "theorem1", "--k", "0"], 2),
        (&["frobnicate"], 2),
        (&["coaction", "z(2)", "--r", "2", "--reduce"], 2),
    ];
    for (args, code) in cases {
        let o = mzv(dir.path(), args);
        assert_eq!(
            o.status.code(),
            Some(code),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn leading_minus_is_an_expression() {
    let dir = TempDir::new().unwrap();
    let o = mzv(dir.path(), &["eval", "-z(2) + z(2)", "--no-cache"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).starts_with("0.000"));
}

#[test]
fn parse_errors_report_a_column() {
    let dir = TempDir::new().unwrap();
    let o = mzv(dir.path(), &["eval", "z(2) + * z(3)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("column 8"));
}

#[test]
fn cache_lifecycle() {
    let dir = TempDir::new().unwrap();
    let cache = dir.path().join("c");
    let c = cache.to_str().unwrap();
    let o = mzv(&cache, &["eval", "z(3)*z(1,-2)", "--digits", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let stats = stdout(&mzv(&cache, &["cache", "stats", "--dir", c]));
    assert!(stats.contains("keys: 2"), "{stats}");

    let again = mzv(&cache, &["eval", "z(3)*z(1,-2)", "--digits", "20"]);
    let mid = |out: &Output| stdout(out).split(" +/- ").next().unwrap().to_string();
    assert_eq!(mid(&again), mid(&o));
    let stats = stdout(&mzv(&cache, &["cache", "stats", "--dir", c]));
    assert!(stats.contains("records: 2"), "{stats}");

    assert!(stdout(&mzv(&cache, &["cache", "clear", "--dir", c])).starts_with("removed"));
    assert!(stdout(&mzv(&cache, &["cache", "stats", "--dir", c])).contains("records: 0"));
}

#[test]
fn digits_default_comes_from_environment() {
    let dir = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_mzv"))
        .args(["eval", "z(2)", "--json", "--no-cache"])
        .env("MZV_DIGITS", "15")
        .env("MZV_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["digits"], Value::from(15));
}

fn arb_index() -> impl Strategy<Value = Expr> {
    (
        0u32..2,
        prop::collection::vec((1i64..5, any::<bool>()), 1..4),
    )
        .prop_map(|(k0, entries)| {
            let signed: Vec<i64> = entries
                .iter()
                .map(|&(k, bar)| if bar { -k } else { k })
                .collect();
            let ix = IndexVector::signed(k0, &signed).unwrap();
            if k0 == 0 {
                Expr::Zeta(ix)
            } else {
                Expr::RegZeta(ix)
            }
        })
}

fn arb_leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0i64..50, 1i64..12)
            .prop_map(|(n, d)| Expr::Rational(num_rational::BigRational::new(n.into(), d.into()))),
        arb_index(),
        prop::collection::vec(prop::sample::select(vec![0i64, 1, -1]), 1..6)
            .prop_map(|v| Expr::Word(Word::from_values(&v).unwrap())),
    ]
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    arb_leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
        ]
    })
}

proptest! {
    #[test]
    fn parse_inverts_print(e in arb_expr()) {
        let printed = e.to_string();
        prop_assert_eq!(parse(&printed).unwrap(), e, "{}", printed);
    }

    #[test]
    fn canonical_form_is_a_fixed_point(e in arb_expr()) {
        let comb = e.to_comb();
        let canonical = Expr::from_comb(&comb);
        let reparsed = parse(&canonical.to_string()).unwrap();
        prop_assert_eq!(&reparsed, &canonical);
        prop_assert_eq!(reparsed.to_comb(), comb);
    }
}
