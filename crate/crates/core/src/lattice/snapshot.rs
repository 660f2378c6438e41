//! Snapshot files: a JSON header next to a raw little-endian `f64` payload.
//!
//! The payload holds `n^4 * 6` values, site-major in the grid order (`x0`
//! slowest), with the six 2-form components `(c01, c02, c03, c23, c31, c12)`
//! contiguous per site. Values are stored bit-exactly.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::field::Field;
use super::grid::{Grid, Scheme};
use crate::error::{Error, Result};
use crate::exterior4::Form2;
use crate::scalar::Real;

pub const FORMAT_VERSION: u32 = 1;

pub const COMPONENT_ORDER: [&str; 6] = ["c01", "c02", "c03", "c23", "c31", "c12"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnapshotHeader {
    pub format_version: u32,
    pub n: usize,
    pub scheme: Scheme,
    pub component_order: Vec<String>,
    pub layout: String,
    pub dtype: String,
    pub time: f64,
    pub monitors: serde_json::Value,
    /// Payload file name, relative to the header's directory.
    pub payload: String,
}

/// Writes `<stem>.json` and `<stem>.bin` into `dir`; returns the header path.
pub fn write_snapshot<T: Real>(
    dir: &Path,
    stem: &str,
    rho: &Field<Form2<T>>,
    time: f64,
    monitors: serde_json::Value,
) -> Result<PathBuf> {
    let grid = rho.grid();
    let payload = format!("{stem}.bin");
    let header = SnapshotHeader {
        format_version: FORMAT_VERSION,
        n: grid.n(),
        scheme: grid.scheme(),
        component_order: COMPONENT_ORDER.iter().map(|s| s.to_string()).collect(),
        layout: "site-major, x0 slowest, 6 components per site".into(),
        dtype: "f64-le".into(),
        time,
        monitors,
        payload: payload.clone(),
    };
    let mut out = BufWriter::new(File::create(dir.join(&payload))?);
    for v in rho.values() {
        for c in v.0 {
            out.write_all(&c.as_f64().to_le_bytes())?;
        }
    }
    out.flush()?;
    let header_path = dir.join(format!("{stem}.json"));
    let mut h = BufWriter::new(File::create(&header_path)?);
    serde_json::to_writer_pretty(&mut h, &header)?;
    h.write_all(b"\n")?;
    h.flush()?;
    Ok(header_path)
}

/// Reads a snapshot from its header path.
pub fn read_snapshot(header_path: &Path) -> Result<(SnapshotHeader, Field<Form2<f64>>)> {
    let header: SnapshotHeader = serde_json::from_reader(BufReader::new(File::open(header_path)?))
        .map_err(|e| Error::Snapshot(format!("{}: {e}", header_path.display())))?;
    if header.format_version != FORMAT_VERSION {
        return Err(Error::Snapshot(format!(
            "unsupported format version {}",
            header.format_version
        )));
    }
    if header.component_order != COMPONENT_ORDER {
        return Err(Error::Snapshot(format!(
            "unexpected component order {:?}",
            header.component_order
        )));
    }
    let grid = Grid::new(header.n, header.scheme)?;
    let dir = header_path.parent().unwrap_or(Path::new("."));
    let mut bytes = Vec::new();
    BufReader::new(File::open(dir.join(&header.payload))?).read_to_end(&mut bytes)?;
    let expected = grid.len() * 6 * 8;
    if bytes.len() != expected {
        return Err(Error::Snapshot(format!(
            "payload has {} bytes, expected {expected}",
            bytes.len()
        )));
    }
    let values = bytes
        .chunks_exact(48)
        .map(|site| {
            Form2(std::array::from_fn(|c| {
                f64::from_le_bytes(site[8 * c..8 * c + 8].try_into().expect("8-byte chunk"))
            }))
        })
        .collect();
    Ok((header, Field::new(grid, values)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid::new(4, Scheme::Fd2).unwrap();
        let f = Field::from_fn(g, |s| {
            Form2(std::array::from_fn(|i| {
                ((s * 6 + i) as f64).sqrt() * 1e-3 + 0.1
            }))
        });
        let path = write_snapshot(
            dir.path(),
            "snap",
            &f,
            0.25,
            serde_json::json!({"energy": 2.0}),
        )
        .unwrap();
        let (h, back) = read_snapshot(&path).unwrap();
        assert_eq!(h.n, 4);
        assert_eq!(h.scheme, Scheme::Fd2);
        assert_eq!(h.time, 0.25);
        for (a, b) in f.values().iter().zip(back.values()) {
            for c in 0..6 {
                assert_eq!(a.0[c].to_bits(), b.0[c].to_bits());
            }
        }
    }

    #[test]
    fn truncated_payload_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid::spectral(4).unwrap();
        let f = Field::constant(g, Form2([1.0, 0.0, 0.0, 1.0, 0.0, 0.0]));
        let path = write_snapshot(dir.path(), "s", &f, 0.0, serde_json::Value::Null).unwrap();
        std::fs::write(dir.path().join("s.bin"), [0u8; 16]).unwrap();
        assert!(matches!(read_snapshot(&path), Err(Error::Snapshot(_))));
    }
}
