//! JSON schema for Lie-pair input files.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One nonzero bracket `[x_i, x_j] = Σ_k coeffs[k] x_k`; indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<usize, String>,
}

/// A different `(j, ∇)` on the same Lie pair.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splitting: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<Vec<Vec<Vec<String>>>>,
}

/// Raw input. `splitting` is a `dimL × (dimL − dimA)` matrix whose columns are
/// `j(∂_k)` in the input basis, where `∂_k` is the class of the k-th basis vector
/// outside `aIndices`; `connection[l][b][k]` is `Γ^k_{l,b}` with `l` in the input
/// basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LiePairSpec {
    pub name: String,
    pub dim_l: usize,
    pub dim_a: usize,
    pub basis: Vec<String>,
    pub a_indices: Vec<usize>,
    pub brackets: Vec<BracketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splitting: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alternatives: Vec<ChoiceSpec>,
}

impl LiePairSpec {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// The same pair with `choice` replacing the splitting and connection.
    pub fn with_choice(&self, choice: &ChoiceSpec) -> LiePairSpec {
        LiePairSpec {
            splitting: choice.splitting.clone(),
            connection: choice.connection.clone(),
            alternatives: Vec::new(),
            ..self.clone()
        }
    }
}
