//! Fixture loading shared by the benchmarks.

use fedosov_core::lie_pair::{validate_pair, Connection, LiePair, LiePairSpec};

pub fn spec(name: &str) -> LiePairSpec {
    let path = format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    LiePairSpec::from_json(&text).expect("fixture parses")
}

/// The fixture's pair with its declared or default connection.
pub fn pair_conn(name: &str) -> (LiePair, Connection) {
    let s = spec(name);
    let p = validate_pair(&s).expect("fixture is valid");
    let c = match &s.connection {
        Some(g) => Connection::from_strings(&p, g).expect("connection parses"),
        None => Connection::default_for(&p),
    };
    (p, c)
}
