//! Benchmark dataset manifest: a plain-text table of image name, path and
//! expected dimensions. Canonical benchmark files are referenced here rather
//! than vendored; callers fall back to synthetic stand-ins when a file is
//! absent.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub name: String,
    pub path: PathBuf,
    pub expected_width: u32,
    pub expected_height: u32,
}

#[derive(Debug, Clone, Default)]
pub struct DatasetManifest {
    entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    /// Parses the `name path width height` table. `#` starts a comment,
    /// blank lines are skipped, names must be unique.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<ManifestEntry> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(Error::Manifest(format!(
                    "line {}: expected `name path width height`, got {raw:?}",
                    lineno + 1
                )));
            }
            let parse_dim = |s: &str| {
                s.parse::<u32>()
                    .map_err(|_| Error::Manifest(format!("line {}: bad size {s:?}", lineno + 1)))
            };
            let entry = ManifestEntry {
                name: fields[0].to_string(),
                path: PathBuf::from(fields[1]),
                expected_width: parse_dim(fields[2])?,
                expected_height: parse_dim(fields[3])?,
            };
            if entries.iter().any(|e| e.name == entry.name) {
                return Err(Error::Manifest(format!("duplicate name {:?}", entry.name)));
            }
            entries.push(entry);
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::FileNotFound(path.to_path_buf()));
        }
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn entries(&self) -> &[ManifestEntry] {
        &self.entries
    }

    pub fn find(&self, name: &str) -> Option<&ManifestEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Resolves an entry's path against `root` when it is relative.
    pub fn resolve_path(&self, entry: &ManifestEntry, root: Option<&Path>) -> PathBuf {
        match root {
            Some(root) if entry.path.is_relative() => root.join(&entry.path),
            _ => entry.path.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_table_with_comments() {
        let m = DatasetManifest::parse(
            "# benchmark set\n\
             grass grass.png 512 512\n\
             \n\
             deer  images/deer.pgm 1024 1024  # big one\n",
        )
        .unwrap();
        assert_eq!(m.entries().len(), 2);
        assert_eq!(m.find("deer").unwrap().expected_width, 1024);
        assert!(m.find("missing").is_none());
    }

    #[test]
    fn rejects_duplicates_and_bad_rows() {
        assert!(DatasetManifest::parse("a a.png 1 1\na b.png 2 2\n").is_err());
        assert!(DatasetManifest::parse("a a.png 1\n").is_err());
        assert!(DatasetManifest::parse("a a.png one 1\n").is_err());
    }

    #[test]
    fn resolves_relative_paths() {
        let m = DatasetManifest::parse("a img/a.png 1 1\nb /abs/b.png 1 1\n").unwrap();
        let root = Path::new("/data");
        assert_eq!(
            m.resolve_path(m.find("a").unwrap(), Some(root)),
            PathBuf::from("/data/img/a.png")
        );
        assert_eq!(
            m.resolve_path(m.find("b").unwrap(), Some(root)),
            PathBuf::from("/abs/b.png")
        );
    }
}
