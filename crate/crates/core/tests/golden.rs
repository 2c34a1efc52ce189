use std::path::PathBuf;

use mzv_core::identities::{pushdown_39, theorem1, Identity};

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

fn check(id: &Identity, file: &str) {
    let expected = golden(file);
    assert_eq!(id.to_json_string(), expected, "{file} drifted");
    let parsed: serde_json::Value = serde_json::from_str(&expected).unwrap();
    assert_eq!(
        Identity::from_json(&parsed).unwrap().combination,
        id.combination
    );
}

#[test]
fn theorem1_k5_is_bit_exact() {
    check(&theorem1(5).unwrap(), "theorem1_k5.json");
}

#[test]
fn pushdown39_is_bit_exact() {
    check(&pushdown_39(), "pushdown39.json");
}
