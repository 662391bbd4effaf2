//! Tab-separated dataset manifests: `id<TAB>path<TAB>code`, `*` for
//! uncategorized images, `#` comments.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::code::IrmaCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestRecord {
    pub id: String,
    /// Resolved against the manifest's directory.
    pub path: PathBuf,
    /// `None` for uncategorized images.
    pub code: Option<IrmaCode>,
}

impl ManifestRecord {
    /// Class label used for training and indexing: the flat code.
    pub fn label(&self) -> Option<&str> {
        self.code.as_ref().map(IrmaCode::raw)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub split: Split,
    pub records: Vec<ManifestRecord>,
}

impl Manifest {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Records with a code, in file order.
    pub fn categorized(&self) -> impl Iterator<Item = &ManifestRecord> {
        self.records.iter().filter(|r| r.code.is_some())
    }

    pub fn categorized_count(&self) -> usize {
        self.categorized().count()
    }

    pub fn uncategorized_count(&self) -> usize {
        self.len() - self.categorized_count()
    }

    pub fn find(&self, id: &str) -> Option<&ManifestRecord> {
        self.records.iter().find(|r| r.id == id)
    }
}

pub fn load_manifest(path: &Path, split: Split) -> Result<Manifest> {
    if !path.is_file() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let text = fs::read_to_string(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new(""));
    parse_manifest(&text, path, base, split)
}

/// Parses manifest text; `source` is only used in error messages.
pub fn parse_manifest(text: &str, source: &Path, base: &Path, split: Split) -> Result<Manifest> {
    let malformed = |line: usize, reason: String| Error::MalformedRow {
        path: source.to_path_buf(),
        line,
        reason,
    };
    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(malformed(
                line_no,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        }
        let (id, rel, code) = (fields[0].trim(), fields[1].trim(), fields[2].trim());
        if id.is_empty() || rel.is_empty() {
            return Err(malformed(line_no, "empty id or path".into()));
        }
        let code = match code {
            "*" => None,
            c => Some(IrmaCode::parse(c).map_err(|e| malformed(line_no, e.to_string()))?),
        };
        if !seen.insert(id.to_owned()) {
            return Err(Error::DuplicateId(id.to_owned()));
        }
        records.push(ManifestRecord {
            id: id.to_owned(),
            path: base.join(rel),
            code,
        });
    }
    Ok(Manifest { split, records })
}

/// Serializes records back to manifest text with paths relative to `base`.
pub fn format_manifest(records: &[ManifestRecord], base: &Path) -> String {
    let mut out = String::new();
    for r in records {
        let rel = r.path.strip_prefix(base).unwrap_or(&r.path);
        let code = r.code.map_or_else(|| "*".to_owned(), |c| c.hyphenated());
        out.push_str(&format!("{}\t{}\t{}\n", r.id, rel.display(), code));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Manifest> {
        parse_manifest(text, Path::new("m.tsv"), Path::new("/data"), Split::Train)
    }

    #[test]
    fn three_rows_one_uncategorized() {
        let m = parse("# header\na\timg/a.png\t1121-120-200-700\n\nb\timg/b.png\t*\nc\timg/c.png\t1121120200700\n").unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(m.uncategorized_count(), 1);
        assert_eq!(m.categorized_count(), 2);
        assert_eq!(m.records[0].path, Path::new("/data/img/a.png"));
        assert_eq!(m.records[2].label(), Some("1121120200700"));
    }

    #[test]
    fn malformed_rows_report_line() {
        match parse("a\tb\n") {
            Err(Error::MalformedRow { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
        match parse("# c\na\tp\t1121-120-200-700\nb\tp\tnotacode\n") {
            Err(Error::MalformedRow { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse("a\tp\t*\na\tq\t*\n"),
            Err(Error::DuplicateId(_))
        ));
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            load_manifest(Path::new("/nonexistent/manifest.tsv"), Split::Test),
            Err(Error::MissingFile(_))
        ));
    }

    #[test]
    fn format_round_trip() {
        let m = parse("a\timg/a.png\t1121-120-200-700\nb\tb.png\t*\n").unwrap();
        let text = format_manifest(&m.records, Path::new("/data"));
        assert_eq!(parse(&text).unwrap(), m);
    }
}
