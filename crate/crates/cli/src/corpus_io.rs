//! Where suites get their algebras: generated in memory, or read back from
//! a directory written by `corpus gen` (selected by `GALOIS_CORPUS_DIR`).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock};

use galois_core::corpus::{self, Entry};
use galois_core::finalg::iso_type;
use galois_core::FiniteAlgebra;
use serde::{Deserialize, Serialize};

use crate::format::{parse_algebra, write_algebra, write_matrix};
use crate::report::sha256_hex;

pub const CORPUS_ENV: &str = "GALOIS_CORPUS_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    Groups,
    Loops,
    Rings,
    CommutativeRings,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Groups,
        Family::Loops,
        Family::Rings,
        Family::CommutativeRings,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Groups => "groups",
            Family::Loops => "loops",
            Family::Rings => "rings",
            Family::CommutativeRings => "crings",
        }
    }

    /// Largest order the family is generated up to.
    pub fn limit(self) -> usize {
        match self {
            Family::Groups | Family::CommutativeRings => 16,
            Family::Loops => 6,
            Family::Rings => 8,
        }
    }

    fn generate(self, max: usize) -> Vec<Entry> {
        match self {
            Family::Groups => corpus::groups(max),
            Family::Loops => corpus::loops(max),
            Family::Rings => corpus::rings(max),
            Family::CommutativeRings => corpus::commutative_rings(max),
        }
    }

    /// Known class counts for orders `1..`, where they are embedded.
    pub fn expected_counts(self) -> &'static [usize] {
        match self {
            Family::Groups => &corpus::GROUP_COUNTS,
            Family::Loops => &corpus::LOOP_COUNTS,
            Family::Rings => &corpus::RING_COUNTS,
            Family::CommutativeRings => &corpus::COMMUTATIVE_RING_COUNTS,
        }
    }
}

fn generated(f: Family) -> &'static [Entry] {
    static CELLS: [OnceLock<Vec<Entry>>; 4] = [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ];
    CELLS[f as usize].get_or_init(|| f.generate(f.limit()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub file: String,
    pub size: usize,
    pub sha256: String,
    pub iso_type: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub families: BTreeMap<String, Vec<ManifestEntry>>,
    /// Random presentation matrices: file name to hash.
    pub fgab: BTreeMap<String, String>,
}

/// The corpus a command works on.
#[derive(Clone, Debug, Default)]
pub struct CorpusSource {
    dir: Option<PathBuf>,
}

impl CorpusSource {
    pub fn generated() -> Self {
        Self { dir: None }
    }

    pub fn dir(path: impl Into<PathBuf>) -> Self {
        Self {
            dir: Some(path.into()),
        }
    }

    /// The directory named by `GALOIS_CORPUS_DIR` if it holds a manifest,
    /// otherwise the in-memory corpus.
    pub fn from_env() -> Self {
        match std::env::var_os(CORPUS_ENV).map(PathBuf::from) {
            Some(p) if p.join("manifest.json").is_file() => Self::dir(p),
            _ => Self::generated(),
        }
    }

    pub fn location(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// Members of the family of order at most `max` (capped at the family
    /// limit).
    pub fn family(&self, f: Family, max: Option<usize>) -> Result<Vec<Entry>, String> {
        let max = max.unwrap_or(usize::MAX).min(f.limit());
        let all: Vec<Entry> = match &self.dir {
            None => generated(f).to_vec(),
            Some(d) => load_family(d, f)?,
        };
        Ok(all
            .into_iter()
            .filter(|e| e.algebra.size() <= max)
            .collect())
    }
}

fn read_manifest(dir: &Path) -> Result<Manifest, String> {
    let path = dir.join("manifest.json");
    let text = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_family(dir: &Path, f: Family) -> Result<Vec<Entry>, String> {
    let m = read_manifest(dir)?;
    let list = m.families.get(f.name()).cloned().unwrap_or_default();
    list.iter()
        .map(|e| {
            let path = dir.join(&e.file);
            let bytes = fs::read(&path).map_err(|err| format!("{}: {err}", path.display()))?;
            if sha256_hex(&bytes) != e.sha256 {
                return Err(format!(
                    "{}: hash does not match the manifest",
                    path.display()
                ));
            }
            let text =
                String::from_utf8(bytes).map_err(|_| format!("{}: not UTF-8", path.display()))?;
            let a = parse_algebra(&text).map_err(|err| format!("{}: {err}", path.display()))?;
            Ok(Entry {
                name: e.name.clone(),
                algebra: Arc::new(a),
            })
        })
        .collect()
}

/// Writes every family up to `max` and `fgab_count` random presentations
/// into `dir`. Class counts and pairwise distinct iso types are checked on
/// the way; a failure there is an internal mismatch.
pub fn generate(
    dir: &Path,
    seed: u64,
    max: Option<usize>,
    fgab_count: usize,
) -> Result<Manifest, GenError> {
    let io = |p: &Path, e: std::io::Error| GenError::Io(format!("{}: {e}", p.display()));
    let mut manifest = Manifest {
        seed,
        ..Manifest::default()
    };
    for f in Family::ALL {
        let entries = CorpusSource::generated()
            .family(f, max)
            .map_err(GenError::Io)?;
        check_family(f, &entries)?;
        let sub = dir.join(f.name());
        fs::create_dir_all(&sub).map_err(|e| io(&sub, e))?;
        let mut list = Vec::new();
        for e in &entries {
            let file = format!("{}/{}.alg", f.name(), e.name);
            let t = iso_type(&e.algebra).to_string();
            let text = write_algebra(&e.algebra, Some(&format!("{} {t}", e.name)));
            let path = dir.join(&file);
            fs::write(&path, &text).map_err(|err| io(&path, err))?;
            list.push(ManifestEntry {
                name: e.name.clone(),
                file,
                size: e.algebra.size(),
                sha256: sha256_hex(text.as_bytes()),
                iso_type: t,
            });
        }
        manifest.families.insert(f.name().to_string(), list);
    }
    let sub = dir.join("fgab");
    fs::create_dir_all(&sub).map_err(|e| io(&sub, e))?;
    for (i, m) in crate::suites::random_presentations(seed, fgab_count)
        .iter()
        .enumerate()
    {
        let file = format!("fgab/p{i:03}.mat");
        let text = write_matrix(m);
        let path = dir.join(&file);
        fs::write(&path, &text).map_err(|err| io(&path, err))?;
        manifest.fgab.insert(file, sha256_hex(text.as_bytes()));
    }
    let path = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serialises");
    fs::write(&path, text + "\n").map_err(|e| io(&path, e))?;
    Ok(manifest)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenError {
    Io(String),
    Mismatch(String),
}

fn check_family(f: Family, entries: &[Entry]) -> Result<(), GenError> {
    let counts = f.expected_counts();
    let top = entries.iter().map(|e| e.algebra.size()).max().unwrap_or(0);
    for n in 1..=top.min(counts.len()) {
        let got = entries.iter().filter(|e| e.algebra.size() == n).count();
        if got != counts[n - 1] {
            return Err(GenError::Mismatch(format!(
                "{}: {got} classes of order {n}, expected {}",
                f.name(),
                counts[n - 1]
            )));
        }
    }
    let mut types: Vec<_> = entries.iter().map(|e| iso_type(&e.algebra)).collect();
    types.sort();
    if types.windows(2).any(|w| w[0] == w[1]) {
        return Err(GenError::Mismatch(format!(
            "{}: two members share an iso type",
            f.name()
        )));
    }
    Ok(())
}

pub fn algebras(entries: &[Entry]) -> Vec<Arc<FiniteAlgebra>> {
    entries.iter().map(|e| e.algebra.clone()).collect()
}
