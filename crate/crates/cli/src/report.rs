//! Machine-readable reports and replayable violation witnesses.

use std::collections::BTreeMap;
use std::sync::Arc;

use galois_core::{FiniteAlgebra, Signature};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// An algebra inlined into a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraData {
    pub kind: String,
    /// Basic tables, row-major.
    pub tables: Vec<Vec<u32>>,
}

impl AlgebraData {
    pub fn of(a: &FiniteAlgebra) -> Self {
        Self {
            kind: a.signature().name().to_string(),
            tables: a.basic_tables().to_vec(),
        }
    }

    pub fn load(&self) -> Result<Arc<FiniteAlgebra>, String> {
        let sig = Signature::from_name(&self.kind)
            .ok_or_else(|| format!("unknown kind `{}`", self.kind))?;
        FiniteAlgebra::from_tables(sig, self.tables.clone())
            .map(Arc::new)
            .map_err(|e| e.to_string())
    }
}

/// Everything needed to re-run one failed check in isolation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Which check failed, e.g. `closure-axiom` or `hopf-identity`.
    pub check: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub algebras: Vec<AlgebraData>,
    /// Maps between `algebras`, as `(dom, cod, values)`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<(usize, usize, Vec<u32>)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subsets: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub matrices: Vec<Vec<Vec<i128>>>,
}

impl Witness {
    pub fn new(check: &str) -> Self {
        Self {
            check: check.to_string(),
            ..Self::default()
        }
    }

    pub fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.params.insert(k.to_string(), v.to_string());
        self
    }

    pub fn get(&self, k: &str) -> Result<&str, String> {
        self.params
            .get(k)
            .map(String::as_str)
            .ok_or_else(|| format!("witness lacks `{k}`"))
    }

    pub fn algebra(mut self, a: &FiniteAlgebra) -> Self {
        self.algebras.push(AlgebraData::of(a));
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub check: String,
    pub detail: String,
    pub witness: WitnessBox,
}

/// Ordering for witnesses goes through their JSON text so reports sort
/// canonically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WitnessBox(pub Witness);

impl PartialOrd for WitnessBox {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WitnessBox {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let a = serde_json::to_string(&self.0).unwrap_or_default();
        let b = serde_json::to_string(&other.0).unwrap_or_default();
        a.cmp(&b)
    }
}

impl Violation {
    pub fn new(detail: impl Into<String>, witness: Witness) -> Self {
        Self {
            check: witness.check.clone(),
            detail: detail.into(),
            witness: WitnessBox(witness),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Vec<String>,
    /// Input file path to SHA-256 of its contents.
    pub inputs: BTreeMap<String, String>,
    pub results: BTreeMap<String, Value>,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Self {
            command,
            ..Self::default()
        }
    }

    pub fn input(&mut self, path: &str, bytes: &[u8]) {
        self.inputs.insert(path.to_string(), sha256_hex(bytes));
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.results.insert(key.to_string(), v.into());
    }

    pub fn violations_from(&mut self, mut v: Vec<Violation>) {
        self.violations.append(&mut v);
        self.violations.sort();
        self.violations.dedup();
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.results {
            match v {
                Value::String(t) => s.push_str(&format!("{k}: {t}\n")),
                other => s.push_str(&format!("{k}: {other}\n")),
            }
        }
        for v in &self.violations {
            s.push_str(&format!("VIOLATION [{}] {}\n", v.check, v.detail));
        }
        s
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn witness_roundtrip() {
        let w = Witness::new("cube")
            .param("seed", 7)
            .algebra(&galois_core::corpus::named::klein4());
        let text = serde_json::to_string(&w).unwrap();
        let back: Witness = serde_json::from_str(&text).unwrap();
        assert_eq!(back, w);
        assert_eq!(back.algebras[0].load().unwrap().size(), 4);
    }
}
