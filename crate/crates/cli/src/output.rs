//! Reading inputs and writing outputs with embedded provenance.

use std::path::{Path, PathBuf};

use blocknorm::digest::digest_bytes;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::CliError;

pub struct Ctx {
    pub config: RunConfig,
    pub argv: Vec<String>,
}

/// A parsed JSON input with the digest of its bytes.
pub struct Input<T> {
    pub value: T,
    pub digest: String,
}

/// Reads JSON, dropping a top-level `provenance` key so that emitted files
/// can be fed back in.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<Input<T>, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let mut v: Value =
        serde_json::from_slice(&bytes).map_err(|e| CliError::Json(format!("{}: {e}", path.display())))?;
    if let Value::Object(map) = &mut v {
        map.remove("provenance");
    }
    let value = serde_json::from_value(v).map_err(|e| CliError::Json(format!("{}: {e}", path.display())))?;
    Ok(Input {
        value,
        digest: digest_bytes(&bytes),
    })
}

pub fn read_value(path: &Path) -> Result<Input<Value>, CliError> {
    read_json(path)
}

/// One command's output: a JSON document and, where defined, a CSV form.
pub struct Output {
    pub json: Value,
    pub csv: Option<String>,
    pub seed: Option<u64>,
    pub input_digests: Vec<String>,
}

impl Output {
    pub fn new(result: &impl Serialize) -> Self {
        Self {
            json: serde_json::to_value(result).expect("outputs serialize"),
            csv: None,
            seed: None,
            input_digests: Vec::new(),
        }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_input(mut self, digest: &str) -> Self {
        self.input_digests.push(digest.to_string());
        self
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

impl Ctx {
    fn provenance(&self, out: &Output) -> Value {
        json!({
            "tool": "blocknorm",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.argv,
            "config": self.config,
            "seed": out.seed,
            "input_digests": out.input_digests,
        })
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        self.config.resolve(path)
    }

    /// Writes to each path (CSV by extension, JSON otherwise), or prints
    /// JSON to stdout when no path is given.
    pub fn emit(&self, paths: &[PathBuf], out: Output) -> Result<(), CliError> {
        let prov = self.provenance(&out);
        let mut doc = out.json.clone();
        if let Value::Object(map) = &mut doc {
            map.insert("provenance".into(), prov.clone());
        } else {
            doc = json!({ "result": doc, "provenance": prov });
        }
        let json_text = serde_json::to_string_pretty(&doc).expect("outputs serialize");
        if paths.is_empty() {
            println!("{json_text}");
            return Ok(());
        }
        for p in paths {
            let path = self.resolve(p);
            let text = if is_csv(&path) {
                let csv = out
                    .csv
                    .as_ref()
                    .ok_or_else(|| CliError::Usage(format!("{}: this output has no CSV form", path.display())))?;
                format!(
                    "# provenance: {}\n{csv}",
                    serde_json::to_string(&prov).expect("provenance serializes")
                )
            } else {
                json_text.clone()
            };
            write_text(&path, &text)?;
        }
        Ok(())
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}
