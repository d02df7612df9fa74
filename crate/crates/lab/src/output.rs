//! Files produced by a command, stamped with the config hash.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use mfbose_core::Complex64;
use serde_json::{json, Value};

/// One output file, rendered in memory so that commands stay pure.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

/// Collects files for one command run.
#[derive(Debug, Clone)]
pub struct Outputs {
    hash: String,
    pub files: Vec<OutputFile>,
}

impl Outputs {
    pub fn new(hash: &str) -> Self {
        Self {
            hash: hash.to_string(),
            files: Vec::new(),
        }
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    /// `body` must be a JSON object; the hash is added as `config_hash`.
    pub fn json(&mut self, name: &str, mut body: Value) {
        body["config_hash"] = Value::String(self.hash.clone());
        let mut text = serde_json::to_string_pretty(&body).expect("json renders");
        text.push('\n');
        self.push(name, text);
    }

    /// A `#`-prefixed hash line, the header, then one line per row.
    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) {
        let mut text = format!("# config_hash={}\n{}\n", self.hash, header.join(","));
        for r in rows {
            text.push_str(&r.join(","));
            text.push('\n');
        }
        self.push(name, text);
    }

    pub fn text(&mut self, name: &str, contents: String) {
        self.push(name, contents);
    }

    fn push(&mut self, name: &str, contents: String) {
        self.files.push(OutputFile {
            name: name.to_string(),
            contents,
        });
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|f| f.name == name).map(|f| f.contents.as_str())
    }

    /// Writes every file plus `manifest.json`. Wall-clock timings go to
    /// `timings.json` so the manifest stays byte-stable.
    pub fn write(&self, dir: &Path, command: &str, seconds: f64) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        for f in &self.files {
            fs::write(dir.join(&f.name), &f.contents)?;
        }
        let manifest = json!({
            "config_hash": self.hash,
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "outputs": self.files.iter().map(|f| f.name.clone()).collect::<Vec<_>>(),
        });
        fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest).expect("json renders") + "\n")?;
        let timings = json!({ "command": command, "seconds": seconds });
        fs::write(dir.join("timings.json"), serde_json::to_string_pretty(&timings).expect("json renders") + "\n")
    }
}

pub fn num(x: f64) -> String {
    format!("{x}")
}

/// `row col re im` lines with a short header, zero-based indices.
pub fn triplets(dim: usize, hash: &str, label: &str, entries: impl Iterator<Item = (usize, usize, Complex64)>) -> String {
    let mut s = format!("# {label}\n# config_hash={hash}\n# dim={dim}\n# row col re im\n");
    for (i, j, z) in entries {
        let _ = writeln!(s, "{i} {j} {:e} {:e}", z.re, z.im);
    }
    s
}
