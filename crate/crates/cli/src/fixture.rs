//! The fixture corpus: `<id>.hk` holds a presentation, `<id>.json` the
//! values it is expected to produce.

use std::fs;
use std::path::{Path, PathBuf};

use hk_core::estimate::Fraction;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FsigExpectation {
    pub sop: String,
    pub e_max: u32,
    pub s: String,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    pub description: String,
    #[serde(default)]
    pub tags: Vec<String>,
    pub e_max: u32,
    pub dimension: usize,
    pub regular: bool,
    #[serde(default)]
    pub hypersurface: bool,
    /// Exact colengths for `e = 0..=e_max`.
    #[serde(default)]
    pub colengths: Option<Vec<u64>>,
    /// Id in the reference table.
    #[serde(default)]
    pub reference: Option<String>,
    #[serde(default)]
    pub e_hk: Option<String>,
    #[serde(default)]
    pub tolerance: f64,
    /// Whether rational reconstruction must return `e_hk` exactly.
    #[serde(default)]
    pub exact: bool,
    #[serde(default)]
    pub multiplicity: Option<u64>,
    #[serde(default)]
    pub fsig: Option<FsigExpectation>,
    /// Computed and printed, never compared.
    #[serde(default)]
    pub report_only: bool,
    #[serde(default)]
    pub conjectured: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub id: String,
    pub path: PathBuf,
    pub text: String,
    pub expected: Expected,
}

impl Fixture {
    pub fn matches(&self, filter: &str) -> bool {
        self.id.contains(filter) || self.expected.tags.iter().any(|t| t == filter)
    }
}

/// Parses `"a/b"` or `"a"`.
pub fn parse_fraction(s: &str) -> Option<Fraction> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse().ok()?, d.trim().parse().ok()?),
        None => (s.trim().parse().ok()?, 1),
    };
    (den > 0).then(|| Fraction::new(num, den))
}

/// Paths of every `*.hk` file in `dir`, sorted.
pub fn list_dir(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let listing = fs::read_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let mut out = Vec::new();
    for entry in listing {
        let path = entry.map_err(|e| e.to_string())?.path();
        if path.extension().is_some_and(|x| x == "hk") {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

/// Every fixture in `dir`, sorted by id.
pub fn load_dir(dir: &Path) -> Result<Vec<Fixture>, String> {
    list_dir(dir)?.iter().map(|p| load(p)).collect()
}

pub fn fixture_id(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

pub fn load(path: &Path) -> Result<Fixture, String> {
    let id = fixture_id(path);
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let json_path = path.with_extension("json");
    let json = fs::read_to_string(&json_path).map_err(|e| format!("{}: {e}", json_path.display()))?;
    let expected = serde_json::from_str(&json).map_err(|e| format!("{}: {e}", json_path.display()))?;
    Ok(Fixture {
        id,
        path: path.to_path_buf(),
        text,
        expected,
    })
}

/// The corpus shipped with the repository.
pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}
