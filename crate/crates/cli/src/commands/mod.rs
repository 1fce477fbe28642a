//! One module per subcommand, plus the plumbing they share.

pub mod family;
pub mod integral;
pub mod plot;
pub mod search;
pub mod verify;

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::args::Global;
use crate::exit::Failure;
use crate::output::{OutDir, RunManifest};

pub(crate) fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::read(path, e))
}

/// Deserializes `bytes`, naming the offending field on failure.
pub(crate) fn parse_json<T: DeserializeOwned>(bytes: &[u8], what: &str) -> Result<T, Failure> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            Failure::malformed(format!("malformed {what}: {inner}"))
        } else {
            Failure::malformed(format!("malformed {what}: field `{path}`: {inner}"))
        }
    })
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("results serialize") + "\n"
}

/// Files produced by one run, written only when `--out-dir` is set.
pub(crate) struct Files {
    manifest: RunManifest,
    files: Vec<(String, String)>,
}

impl Files {
    pub fn new(command: &str, config: serde_json::Value, global: &Global) -> Self {
        let mut config = config;
        if let serde_json::Value::Object(map) = &mut config {
            map.insert("tol".into(), global.tol.into());
        }
        Files {
            manifest: RunManifest::new(command, config, global.seed),
            files: Vec::new(),
        }
    }

    pub fn input(&mut self, path: &Path, bytes: &[u8]) {
        self.manifest.input(path, bytes);
    }

    pub fn add(&mut self, name: impl Into<String>, contents: impl Into<String>) {
        self.files.push((name.into(), contents.into()));
    }

    /// Adds a CSV table and the plot derived from it.
    pub fn add_plotted(&mut self, stem: &str, csv: String) -> Result<(), Failure> {
        let svg = crate::svg::render(&csv, stem)?;
        self.add(format!("{stem}.csv"), csv);
        self.add(format!("{stem}.svg"), svg);
        Ok(())
    }

    pub fn write(self, global: &Global) -> Result<(), Failure> {
        let Some(dir) = &global.out_dir else {
            return Ok(());
        };
        let mut out = OutDir::create(dir, self.manifest)?;
        for (name, contents) in &self.files {
            out.write(name, contents)?;
        }
        out.finish()
    }
}
