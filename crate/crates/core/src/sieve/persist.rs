//! Binary checkpoint file.
//!
//! Layout, little-endian throughout:
//!
//! ```text
//! [8]  magic "MERTBLv1"
//! [8]  u64 limit
//! [8]  u64 stride
//! [8]  u64 count
//! [8 × count] i64 checkpoints
//! [8]  u64 trailer = Σ checkpoints (mod 2^64)
//! ```

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use thiserror::Error;

use super::{MertensTable, DEFAULT_BLOCK_SIZE};

pub const MAGIC: &[u8; 8] = b"MERTBLv1";

const HEADER_LEN: usize = 8 + 3 * 8;

#[derive(Debug, Error)]
pub enum TableFormatError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("bad magic: expected \"MERTBLv1\", found {found:?}")]
    BadMagic { found: Vec<u8> },
    #[error("truncated {section}: needed {needed} bytes, {available} available")]
    Truncated { section: &'static str, needed: usize, available: usize },
    #[error("checksum mismatch: trailer {stored:#018x}, computed {computed:#018x}")]
    Checksum { stored: u64, computed: u64 },
    #[error("inconsistent header: {0}")]
    Inconsistent(String),
    #[error("{0} unexpected bytes after trailer")]
    TrailingBytes(usize),
}

fn checksum(values: &[i64]) -> u64 {
    values.iter().fold(0u64, |acc, &v| acc.wrapping_add(v as u64))
}

/// Serialize `table` into `w`.
pub fn write_table<W: Write>(table: &MertensTable, mut w: W) -> io::Result<()> {
    let cps = table.checkpoints();
    let mut buf = Vec::with_capacity(HEADER_LEN + 8 * cps.len() + 8);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&table.limit().to_le_bytes());
    buf.extend_from_slice(&table.stride().to_le_bytes());
    buf.extend_from_slice(&(cps.len() as u64).to_le_bytes());
    for v in cps {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    buf.extend_from_slice(&checksum(cps).to_le_bytes());
    w.write_all(&buf)?;
    w.flush()
}

/// Parse a table from a complete file image.
pub fn read_table(bytes: &[u8]) -> Result<MertensTable, TableFormatError> {
    let magic =
        bytes.get(..8).ok_or(TableFormatError::Truncated { section: "magic", needed: 8, available: bytes.len() })?;
    if magic != MAGIC {
        return Err(TableFormatError::BadMagic { found: magic.to_vec() });
    }
    if bytes.len() < HEADER_LEN {
        return Err(TableFormatError::Truncated { section: "header", needed: HEADER_LEN, available: bytes.len() });
    }
    let word = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
    let (limit, stride, count) = (word(8), word(16), word(24));
    if limit == 0 || stride == 0 || stride > limit {
        return Err(TableFormatError::Inconsistent(format!("limit {limit}, stride {stride}")));
    }
    if count != limit / stride {
        return Err(TableFormatError::Inconsistent(format!("count {count} != floor({limit} / {stride})")));
    }

    let body = &bytes[HEADER_LEN..];
    let needed = usize::try_from(count)
        .ok()
        .and_then(|c| c.checked_mul(8))
        .ok_or_else(|| TableFormatError::Inconsistent(format!("count {count} too large")))?;
    if body.len() < needed {
        return Err(TableFormatError::Truncated { section: "checkpoints", needed, available: body.len() });
    }
    let checkpoints: Vec<i64> =
        body[..needed].chunks_exact(8).map(|c| i64::from_le_bytes(c.try_into().unwrap())).collect();

    let rest = &body[needed..];
    if rest.len() < 8 {
        return Err(TableFormatError::Truncated { section: "trailer", needed: 8, available: rest.len() });
    }
    if rest.len() > 8 {
        return Err(TableFormatError::TrailingBytes(rest.len() - 8));
    }
    let stored = u64::from_le_bytes(rest.try_into().unwrap());
    let computed = checksum(&checkpoints);
    if stored != computed {
        return Err(TableFormatError::Checksum { stored, computed });
    }
    MertensTable::from_parts(limit, stride, DEFAULT_BLOCK_SIZE, checkpoints)
        .map_err(|e| TableFormatError::Inconsistent(e.to_string()))
}

pub fn save_table(table: &MertensTable, path: impl AsRef<Path>) -> io::Result<()> {
    let file = fs::File::create(path)?;
    write_table(table, io::BufWriter::new(file))
}

pub fn load_table(path: impl AsRef<Path>) -> Result<MertensTable, TableFormatError> {
    read_table(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::mertens_scan;

    fn image(t: &MertensTable) -> Vec<u8> {
        let mut v = Vec::new();
        write_table(t, &mut v).unwrap();
        v
    }

    #[test]
    fn layout_is_exact() {
        let t = mertens_scan(10, 1, 10).unwrap();
        let bytes = image(&t);
        assert_eq!(bytes.len(), 8 + 24 + 80 + 8);
        assert_eq!(&bytes[..8], b"MERTBLv1");
        assert_eq!(&bytes[8..16], &10u64.to_le_bytes());
        assert_eq!(&bytes[16..24], &1u64.to_le_bytes());
        assert_eq!(&bytes[24..32], &10u64.to_le_bytes());
        assert_eq!(&bytes[32..40], &1i64.to_le_bytes());
        assert_eq!(&bytes[40..48], &0i64.to_le_bytes());
        assert_eq!(&bytes[48..56], &(-1i64).to_le_bytes());
        // 1 + 0 - 1 - 1 - 2 - 1 - 2 - 2 - 2 - 1 = -11
        assert_eq!(&bytes[112..], &(-11i64 as u64).to_le_bytes());
    }

    #[test]
    fn round_trip() {
        let t = mertens_scan(10, 1, 10).unwrap();
        assert_eq!(read_table(&image(&t)).unwrap(), t);
    }

    #[test]
    fn wrong_magic() {
        let t = mertens_scan(10, 1, 10).unwrap();
        let mut bytes = image(&t);
        bytes[7] = b'2';
        assert!(matches!(read_table(&bytes), Err(TableFormatError::BadMagic { .. })));
        assert!(matches!(read_table(b"MER"), Err(TableFormatError::Truncated { section: "magic", .. })));
    }

    #[test]
    fn truncated_sections() {
        let t = mertens_scan(10, 1, 10).unwrap();
        let bytes = image(&t);
        assert!(matches!(read_table(&bytes[..20]), Err(TableFormatError::Truncated { section: "header", .. })));
        assert!(matches!(read_table(&bytes[..60]), Err(TableFormatError::Truncated { section: "checkpoints", .. })));
        assert!(matches!(
            read_table(&bytes[..bytes.len() - 3]),
            Err(TableFormatError::Truncated { section: "trailer", .. })
        ));
    }

    #[test]
    fn corrupted_checkpoint_fails_checksum() {
        let t = mertens_scan(10, 1, 10).unwrap();
        let mut bytes = image(&t);
        bytes[40] ^= 1;
        assert!(matches!(read_table(&bytes), Err(TableFormatError::Checksum { .. })));
    }

    #[test]
    fn inconsistent_count_and_trailing_bytes() {
        let t = mertens_scan(10, 1, 10).unwrap();
        let mut bytes = image(&t);
        bytes[24] = 9;
        assert!(matches!(read_table(&bytes), Err(TableFormatError::Inconsistent(_))));
        let mut bytes = image(&t);
        bytes.push(0);
        assert!(matches!(read_table(&bytes), Err(TableFormatError::TrailingBytes(1))));
    }
}
