//! Binary container shared by bases and checkpoints: an 8-byte little-endian
//! header length, a UTF-8 JSON header, then a blob of little-endian `f64`.

use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

pub fn write<H: Serialize>(path: &Path, header: &H, chunks: &[&[f64]]) -> Result<()> {
    let json = serde_json::to_vec(header).map_err(|e| Error::Format(e.to_string()))?;
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let mut put = |bytes: &[u8]| out.write_all(bytes).map_err(|e| Error::io(path, e));
    put(&(json.len() as u64).to_le_bytes())?;
    put(&json)?;
    for chunk in chunks {
        let mut buf = Vec::with_capacity(chunk.len() * 8);
        for v in *chunk {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        put(&buf)?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Reads the header and the full float payload.
pub fn read<H: DeserializeOwned>(path: &Path) -> Result<(H, Vec<f64>)> {
    let mut bytes = Vec::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path, e))?;
    if bytes.len() < 8 {
        return Err(Error::Format(format!("{}: truncated header", path.display())));
    }
    let len = u64::from_le_bytes(bytes[..8].try_into().unwrap()) as usize;
    let body = &bytes[8..];
    if len > body.len() {
        return Err(Error::Format(format!(
            "{}: header length {len} exceeds file size",
            path.display()
        )));
    }
    let header: H = serde_json::from_slice(&body[..len])
        .map_err(|e| Error::Format(format!("{}: bad header: {e}", path.display())))?;
    let blob = &body[len..];
    if blob.len() % 8 != 0 {
        return Err(Error::Format(format!(
            "{}: payload is not a whole number of f64 values",
            path.display()
        )));
    }
    let values = blob
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((header, values))
}
