//! Atomic file output: everything is written to a temporary file in the
//! target directory and renamed into place.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;
use tempfile::NamedTempFile;

use crate::error::CliError;

pub struct OutputDir {
    dir: PathBuf,
    timestamp: bool,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(dir: &Path, timestamp: bool) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            timestamp,
            written: Vec::new(),
        })
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn write_with<F>(&mut self, name: &str, f: F) -> Result<PathBuf, CliError>
    where
        F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
    {
        let mut tmp = NamedTempFile::new_in(&self.dir)?;
        {
            let mut buf = std::io::BufWriter::new(tmp.as_file_mut());
            f(&mut buf)?;
            buf.flush()?;
        }
        tmp.as_file().sync_all()?;
        let path = self.dir.join(name);
        tmp.persist(&path).map_err(|e| CliError::Io(e.error))?;
        self.written.push(path.clone());
        Ok(path)
    }

    /// Pretty JSON; objects gain a `generated_at` unix time unless
    /// timestamps are disabled.
    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let mut v = serde_json::to_value(value)?;
        if self.timestamp {
            if let Value::Object(m) = &mut v {
                let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
                m.insert("generated_at".into(), Value::from(secs));
            }
        }
        self.write_with(name, |w| {
            serde_json::to_writer_pretty(&mut *w, &v)?;
            writeln!(w)?;
            Ok(())
        })
    }
}
