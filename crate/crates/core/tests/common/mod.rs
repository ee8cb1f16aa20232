#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use hk_core::presentation::{parse, ParsedProblem};

pub mod oracle;

pub struct Fixture {
    pub id: String,
    pub problem: ParsedProblem,
    pub e_max: u32,
    pub regular: bool,
    /// System of parameters with `R/J` Gorenstein, and its sampling depth.
    pub sop: Option<(String, u32)>,
    pub text: String,
}

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Every fixture in the corpus with the sampling depth it declares.
pub fn fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();
    for entry in fs::read_dir(fixtures_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|x| x != "hk") {
            continue;
        }
        let text = fs::read_to_string(&path).unwrap();
        let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(path.with_extension("json")).unwrap()).unwrap();
        out.push(Fixture {
            id: path.file_stem().unwrap().to_string_lossy().into_owned(),
            problem: parse(&text).unwrap(),
            e_max: json["e_max"].as_u64().unwrap() as u32,
            regular: json["regular"].as_bool().unwrap(),
            sop: json
                .get("fsig")
                .map(|f| (f["sop"].as_str().unwrap().to_string(), f["e_max"].as_u64().unwrap() as u32)),
            text,
        });
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}
