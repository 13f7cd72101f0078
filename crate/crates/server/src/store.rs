//! Finished transcripts, one write-once file per match.

use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use bidding_core::Transcript;

const EXTENSION: &str = "transcript";

#[derive(Debug)]
pub struct Store {
    dir: PathBuf,
}

impl Store {
    pub fn open(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Store { dir: dir.to_path_buf() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}.{EXTENSION}"))
    }

    /// Writes the transcript once; an existing file is never replaced.
    pub fn save(&self, id: &str, t: &Transcript) -> io::Result<()> {
        let mut file = OpenOptions::new().write(true).create_new(true).open(self.path(id))?;
        file.write_all(t.to_string().as_bytes())?;
        file.sync_all()
    }

    /// Every stored transcript by id, sorted by id. Unparsable files are
    /// returned as errors.
    pub fn load_all(&self) -> io::Result<Vec<(String, Result<Transcript, String>)>> {
        let mut out = Vec::new();
        for entry in fs::read_dir(&self.dir)? {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) != Some(EXTENSION) {
                continue;
            }
            let Some(id) = path.file_stem().and_then(|s| s.to_str()) else {
                continue;
            };
            let parsed = fs::read_to_string(&path)
                .map_err(|e| e.to_string())
                .and_then(|text| Transcript::parse(&text).map_err(|e| e.to_string()));
            out.push((id.to_string(), parsed));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }
}
