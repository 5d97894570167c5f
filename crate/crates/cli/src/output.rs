//! Rendering of command results and atomic file output.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::config::{Config, Format};
use crate::error::{CliError, CliResult};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "THERMO_OUTPUT_DIR";

pub const TOOL: &str = "thermo";

/// A command result, renderable either as a table or as a JSON document.
pub struct Output {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub json: Value,
}

pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            // shortest representation that parses back to the same f64
            Cell::Num(x) => format!("{x:?}"),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a Config,
    result: &'a Value,
}

pub fn render(command: &str, config: &Config, output: &Output) -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    match config.format.unwrap_or(Format::Json) {
        Format::Json => {
            let envelope = Envelope {
                tool: TOOL,
                version: impurity_thermometry::VERSION,
                command,
                config,
                result: &output.json,
            };
            serde_json::to_writer_pretty(&mut buf, &envelope).map_err(|e| CliError::config(e.to_string()))?;
            buf.push(b'\n');
        }
        Format::Csv => {
            let config_line = serde_json::to_string(config).map_err(|e| CliError::config(e.to_string()))?;
            writeln!(buf, "# {TOOL} {}", impurity_thermometry::VERSION).expect("write to memory");
            writeln!(buf, "# command: {command}").expect("write to memory");
            writeln!(buf, "# config: {config_line}").expect("write to memory");
            let mut writer = csv::Writer::from_writer(&mut buf);
            writer.write_record(&output.columns)?;
            for row in &output.rows {
                writer.write_record(row.iter().map(Cell::render))?;
            }
            writer.flush().map_err(|e| CliError::Io {
                path: "<memory>".into(),
                source: e,
            })?;
        }
    }
    Ok(buf)
}

/// Where a command writes: `--out`, else the env directory, else stdout.
pub fn destination(out: Option<&Path>, command: &str, format: Format) -> Option<PathBuf> {
    if let Some(out) = out {
        return Some(out.to_path_buf());
    }
    std::env::var_os(OUTPUT_DIR_ENV)
        .filter(|d| !d.is_empty())
        .map(|dir| PathBuf::from(dir).join(format!("{command}.{}", format.extension())))
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
