//! Result files: JSONL and CSV bodies under a `#` header line carrying the
//! configuration hash and seed list, written atomically.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Hex SHA-256 of the JSON encoding of `config`.
pub fn config_hash<T: Serialize + ?Sized>(config: &T) -> String {
    let bytes = serde_json::to_vec(config).expect("configuration serializes to JSON");
    hex::encode(Sha256::digest(&bytes))
}

/// `# config_hash=<hex> seeds=[a,b,...]`, newline-terminated.
pub fn header_line(hash: &str, seeds: &[u64]) -> String {
    let seeds: Vec<String> = seeds.iter().map(u64::to_string).collect();
    format!("# config_hash={hash} seeds=[{}]\n", seeds.join(","))
}

/// One JSON document per line.
pub fn jsonl<T: Serialize>(records: impl IntoIterator<Item = T>) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(&r).expect("record serializes to JSON"));
        out.push('\n');
    }
    out
}

/// CSV with a header row taken from the record's field names.
pub fn csv<T: Serialize>(records: impl IntoIterator<Item = T>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r).map_err(|e| Error::invalid("csv", e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::invalid("csv", e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// CSV with an explicit header row, for records without field names.
pub fn csv_with_header<T: Serialize>(header: &[&str], records: impl IntoIterator<Item = T>) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header).map_err(|e| Error::invalid("csv", e.to_string()))?;
    for r in records {
        w.serialize(r).map_err(|e| Error::invalid("csv", e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::invalid("csv", e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        round: usize,
        mean_x: f64,
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = config_hash(&serde_json::json!({"alpha": 0.1}));
        assert_eq!(a, config_hash(&serde_json::json!({"alpha": 0.1})));
        assert_ne!(a, config_hash(&serde_json::json!({"alpha": 0.2})));
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn header_format() {
        assert_eq!(header_line("ab", &[1, 22]), "# config_hash=ab seeds=[1,22]\n");
        assert_eq!(header_line("ab", &[]), "# config_hash=ab seeds=[]\n");
    }

    #[test]
    fn csv_bodies() {
        let rows = [Row { round: 1, mean_x: 0.5 }, Row { round: 2, mean_x: 0.25 }];
        assert_eq!(csv(&rows).unwrap(), "round,mean_x\n1,0.5\n2,0.25\n");
        let tuples = [(0.1, 2usize)];
        assert_eq!(csv_with_header(&["alpha", "n"], tuples).unwrap(), "alpha,n\n0.1,2\n");
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, "first\n").unwrap();
        write_atomic(&path, "second\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
