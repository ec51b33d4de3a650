//! Content-addressed report cache. Entries carry the hash of their payload
//! and are checked on every read; writes go through a temporary file and an
//! atomic rename so concurrent runs never see partial entries.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    payload_sha256: String,
    payload: String,
}

fn entry_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.json"))
}

fn digest(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

/// The cached payload, or `None` when missing or failing validation.
pub fn read(dir: &Path, key: &str) -> Option<String> {
    let text = fs::read_to_string(entry_path(dir, key)).ok()?;
    let e: Entry = serde_json::from_str(&text).ok()?;
    (e.key == key && e.payload_sha256 == digest(&e.payload)).then_some(e.payload)
}

pub fn write(dir: &Path, key: &str, payload: &str) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let e = Entry { key: key.into(), payload_sha256: digest(payload), payload: payload.into() };
    let nanos = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_nanos());
    let tmp = dir.join(format!(".{key}.{}.{nanos}.tmp", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(serde_json::to_string(&e).expect("serializable").as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, entry_path(dir, key))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_tamper() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "abc", "{\"x\": 1}\n").unwrap();
        assert_eq!(read(dir.path(), "abc").as_deref(), Some("{\"x\": 1}\n"));
        let p = entry_path(dir.path(), "abc");
        let t = fs::read_to_string(&p).unwrap().replace("1}", "2}");
        fs::write(&p, t).unwrap();
        assert_eq!(read(dir.path(), "abc"), None);
        assert_eq!(read(dir.path(), "missing"), None);
    }
}
