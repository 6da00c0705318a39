#![allow(dead_code)]

use fedosov_core::lie_pair::{validate_pair, ChoiceSpec, Connection, LiePair, LiePairSpec};

pub const FIXTURES: [&str; 6] = ["heisenberg_center", "heisenberg_x", "sl2_borel", "sl2_h", "abelian", "affine_line"];

pub fn spec(name: &str) -> LiePairSpec {
    let path = format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    LiePairSpec::from_json(&text).unwrap()
}

pub fn pair(name: &str) -> LiePair {
    validate_pair(&spec(name)).unwrap()
}

/// The pair with its declared or default connection.
pub fn pair_conn(name: &str) -> (LiePair, Connection) {
    choice(&spec(name))
}

pub fn choice(s: &LiePairSpec) -> (LiePair, Connection) {
    let p = validate_pair(s).unwrap();
    let c = match &s.connection {
        Some(g) => Connection::from_strings(&p, g).unwrap(),
        None => Connection::default_for(&p),
    };
    (p, c)
}

pub fn alternatives(name: &str) -> Vec<ChoiceSpec> {
    spec(name).alternatives
}
