//! Run manifests: config echo, checksummed outputs, results, timings.

use crate::cache::sha256_hex;
use crate::config::ExperimentConfig;
use crate::error::CliError;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const TOOL: &str = "distal";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileRecord {
    /// Relative to the manifest's directory for outputs, absolute for inputs.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub seconds: f64,
}

/// Everything here may change between otherwise identical runs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Runtime {
    pub threads: usize,
    pub wall_seconds: f64,
    pub stages: Vec<Stage>,
    pub cache_hits: u64,
    pub cache_misses: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: Value,
    pub files: Vec<FileRecord>,
    #[serde(default)]
    pub inputs: Vec<FileRecord>,
    pub results: Value,
    pub precision: Value,
    pub runtime: Runtime,
}

pub fn manifest_path(out: &Path) -> PathBuf {
    sibling(out, ".manifest.json")
}

/// `<out><suffix>` next to `out`.
pub fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Collects what a subcommand produces; written out by [`Run::finish`].
pub struct Run {
    command: String,
    config: Value,
    out: Option<PathBuf>,
    started: Instant,
    files: Vec<FileRecord>,
    inputs: Vec<FileRecord>,
    results: Map<String, Value>,
    precision: Map<String, Value>,
    runtime: Runtime,
}

impl Run {
    pub fn new(command: &str, cfg: &ExperimentConfig, extra: Value) -> Run {
        let mut config = serde_json::to_value(cfg).expect("config serializes");
        if let (Value::Object(c), Value::Object(e)) = (&mut config, extra) {
            for (k, v) in e {
                c.insert(k, v);
            }
        }
        Run {
            command: command.to_string(),
            config,
            out: cfg.out.clone(),
            started: Instant::now(),
            files: Vec::new(),
            inputs: Vec::new(),
            results: Map::new(),
            precision: Map::new(),
            runtime: Runtime { threads: cfg.threads, ..Runtime::default() },
        }
    }

    pub fn stage<R>(&mut self, name: &str, f: impl FnOnce() -> R) -> R {
        let t = Instant::now();
        let r = f();
        self.runtime.stages.push(Stage { name: name.to_string(), seconds: t.elapsed().as_secs_f64() });
        r
    }

    pub fn cache(&mut self, hit: bool) {
        if hit {
            self.runtime.cache_hits += 1;
        } else {
            self.runtime.cache_misses += 1;
        }
    }

    pub fn result(&mut self, key: &str, v: impl Serialize) {
        self.results.insert(key.to_string(), serde_json::to_value(v).expect("result serializes"));
    }

    pub fn precision(&mut self, key: &str, v: impl Serialize) {
        self.precision.insert(key.to_string(), serde_json::to_value(v).expect("report serializes"));
    }

    pub fn input(&mut self, path: &Path, sha256: &str) -> Result<(), CliError> {
        let bytes = fs::metadata(path)?.len();
        let path = fs::canonicalize(path)?;
        self.inputs.push(FileRecord { path: path.display().to_string(), sha256: sha256.to_string(), bytes });
        Ok(())
    }

    /// Writes the main output to `--out`, or to stdout when none is set.
    pub fn emit(&mut self, data: &str) -> Result<(), CliError> {
        match self.out.clone() {
            Some(p) => self.write(&p, data.as_bytes()),
            None => {
                print!("{data}");
                Ok(())
            }
        }
    }

    /// Writes a secondary output `<out><suffix>`; without `--out` it goes
    /// to stderr.
    pub fn emit_sibling(&mut self, suffix: &str, data: &str) -> Result<(), CliError> {
        match self.out.clone() {
            Some(p) => self.write(&sibling(&p, suffix), data.as_bytes()),
            None => {
                eprint!("{data}");
                Ok(())
            }
        }
    }

    fn write(&mut self, path: &Path, bytes: &[u8]) -> Result<(), CliError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, bytes)?;
        let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into());
        self.files.push(FileRecord { path: name, sha256: sha256_hex(bytes), bytes: bytes.len() as u64 });
        Ok(())
    }

    /// Writes `<out>.manifest.json` when an output path was given.
    pub fn finish(mut self) -> Result<Option<RunManifest>, CliError> {
        let Some(out) = self.out.clone() else {
            return Ok(None);
        };
        self.runtime.wall_seconds = self.started.elapsed().as_secs_f64();
        let m = RunManifest {
            tool: TOOL.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: self.command,
            config: self.config,
            files: self.files,
            inputs: self.inputs,
            results: Value::Object(self.results),
            precision: Value::Object(self.precision),
            runtime: self.runtime,
        };
        let mut text = serde_json::to_string_pretty(&m).expect("manifest serializes");
        text.push('\n');
        fs::write(manifest_path(&out), text)?;
        Ok(Some(m))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verification {
    pub checked: usize,
    pub mismatched: Vec<String>,
}

/// Recomputes every checksum a manifest lists.
pub fn verify(manifest: &Path) -> Result<Verification, CliError> {
    let text = fs::read_to_string(manifest)?;
    let m: RunManifest =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("unreadable manifest: {e}")))?;
    let base = manifest.parent().unwrap_or(Path::new(""));
    let mut mismatched = Vec::new();
    let mut checked = 0;
    let outputs = m.files.iter().map(|f| (base.join(&f.path), f));
    let inputs = m.inputs.iter().map(|f| (PathBuf::from(&f.path), f));
    for (path, rec) in outputs.chain(inputs) {
        checked += 1;
        match fs::read(&path) {
            Ok(bytes) if sha256_hex(&bytes) == rec.sha256 && bytes.len() as u64 == rec.bytes => {}
            Ok(_) => mismatched.push(format!("{}: checksum differs", rec.path)),
            Err(e) => mismatched.push(format!("{}: {e}", rec.path)),
        }
    }
    Ok(Verification { checked, mismatched })
}
