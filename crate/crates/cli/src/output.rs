use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use spatial_lgi::{Error, Result};

use crate::settings::Diagnostics;

/// Directory for outputs when no `--output` is given.
pub const OUTPUT_DIR_ENV: &str = "SLGI_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

pub fn resolve_format(text: Option<String>, default: Format, allowed: &[Format], diag: &mut Diagnostics) -> Format {
    let Some(text) = text else { return default };
    let f = match text.to_ascii_lowercase().as_str() {
        "csv" => Format::Csv,
        "json" => Format::Json,
        _ => {
            diag.push(format!("--format: unknown format '{text}'"));
            return default;
        }
    };
    if !allowed.contains(&f) {
        diag.push(format!("--format: '{text}' is not available for this command"));
        return default;
    }
    f
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Destination {
    Stdout,
    File(PathBuf),
}

/// Explicit path, else `$SLGI_OUTPUT_DIR/<stem>.<ext>`, else stdout.
pub fn destination(explicit: Option<PathBuf>, stem: &str, format: Format) -> Destination {
    if let Some(p) = explicit {
        return Destination::File(p);
    }
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => {
            Destination::File(Path::new(&dir).join(format!("{stem}.{}", format.extension())))
        }
        _ => Destination::Stdout,
    }
}

/// Files appear only once fully written (temp file in the same directory, then rename).
pub fn emit<F>(dest: &Destination, write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match dest {
        Destination::Stdout => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
            lock.flush()?;
            Ok(())
        }
        Destination::File(path) => {
            let parent = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
                _ => PathBuf::from("."),
            };
            std::fs::create_dir_all(&parent)?;
            let tmp = tempfile::NamedTempFile::new_in(&parent)?;
            {
                let mut w = BufWriter::new(tmp.as_file());
                write(&mut w)?;
                w.flush()?;
            }
            tmp.persist(path).map_err(|e| Error::Io(e.error.to_string()))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
    }
}
