//! Content-addressed store of finished command output.
//!
//! Each entry is `<sha256 of the request>.jsonl`: a header line `# exit N`
//! followed by the exact bytes the command printed.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

pub struct Cache {
    dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub exit: i32,
    pub body: String,
}

pub fn key(request: &str) -> String {
    hex::encode(Sha256::digest(request.as_bytes()))
}

impl Cache {
    pub fn new(dir: &Path) -> Self {
        Cache {
            dir: dir.to_path_buf(),
        }
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.jsonl"))
    }

    /// A missing or unreadable entry is a miss.
    pub fn get(&self, key: &str) -> Option<Entry> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let (header, body) = text.split_once('\n')?;
        let exit = header.strip_prefix("# exit ")?.parse().ok()?;
        Some(Entry {
            exit,
            body: body.to_string(),
        })
    }

    /// Written to a temporary file in the same directory, then renamed.
    pub fn put(&self, key: &str, entry: &Entry) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        write!(tmp, "# exit {}\n{}", entry.exit, entry.body)?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }
}
