//! Output sinks shared by the subcommands.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde_json::{Map, Value};

use crate::manifest::{sidecar_path, RunManifest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Any failure that ends a run with exit status 2.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Library(gamma_spacings::Error),
    Io {
        path: Option<PathBuf>,
        source: io::Error,
    },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => f.write_str(msg),
            Failure::Library(e) => write!(f, "{e}"),
            Failure::Io {
                path: Some(p),
                source,
            } => write!(f, "{}: {source}", p.display()),
            Failure::Io { path: None, source } => write!(f, "{source}"),
        }
    }
}

impl From<gamma_spacings::Error> for Failure {
    fn from(e: gamma_spacings::Error) -> Self {
        Failure::Library(e)
    }
}

impl From<io::Error> for Failure {
    fn from(source: io::Error) -> Self {
        Failure::Io { path: None, source }
    }
}

pub type CliResult<T> = std::result::Result<T, Failure>;

pub fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn at(path: &Path) -> impl FnOnce(io::Error) -> Failure + '_ {
    move |source| Failure::Io {
        path: Some(path.to_path_buf()),
        source,
    }
}

/// Runs `body` against the file at `path`, or stdout when no path is given.
pub fn with_writer<F>(path: Option<&Path>, body: F) -> CliResult<()>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).map_err(at(p))?);
            body(&mut w).and_then(|_| w.flush()).map_err(at(p))
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            body(&mut w).and_then(|_| w.flush())?;
            Ok(())
        }
    }
}

/// Writes manifest comments followed by `body`, plus the sidecar when writing to a file.
pub fn emit_csv<F>(manifest: &RunManifest, path: Option<&Path>, body: F) -> CliResult<()>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    with_writer(path, |w| {
        manifest.write_comments(w)?;
        body(w)
    })?;
    write_sidecar(manifest, path)
}

/// Writes `{"manifest": ..., <fields>}` as pretty JSON, plus the sidecar when writing to a file.
pub fn emit_json(
    manifest: &RunManifest,
    path: Option<&Path>,
    fields: Map<String, Value>,
) -> CliResult<()> {
    let mut doc = Map::new();
    doc.insert(
        "manifest".into(),
        serde_json::to_value(manifest).map_err(io::Error::from)?,
    );
    doc.extend(fields);
    with_writer(path, |w| {
        serde_json::to_writer_pretty(&mut *w, &Value::Object(doc))?;
        writeln!(w)
    })?;
    write_sidecar(manifest, path)
}

fn write_sidecar(manifest: &RunManifest, path: Option<&Path>) -> CliResult<()> {
    if let Some(p) = path {
        let side = sidecar_path(p);
        manifest.write_json(&side).map_err(at(&side))?;
    }
    Ok(())
}

/// Creates `dir` if needed and writes its `manifest.json`.
pub fn prepare_dir(manifest: &RunManifest, dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(at(dir))?;
    let path = dir.join("manifest.json");
    manifest.write_json(&path).map_err(at(&path))
}

pub fn to_json<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("output records serialize to JSON")
}
