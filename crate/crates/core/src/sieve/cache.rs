// Binary table layout:
//   bytes 0..8    magic "MSIEVE01"
//   bytes 8..16   n_max, u64 little-endian
//   n_max bytes   value at n = 1, 2, ..., n_max as i8
//   1 byte        kind tag (0 = moebius, 1 = liouville)

use super::{MobiusTable, SieveError, TableKind};
use std::io::{Read, Write};

pub const CACHE_MAGIC: &[u8; 8] = b"MSIEVE01";

pub fn write_table<W: Write>(table: &MobiusTable, mut w: W) -> Result<(), SieveError> {
    w.write_all(CACHE_MAGIC)?;
    w.write_all(&table.n_max().to_le_bytes())?;
    let bytes: Vec<u8> = table.values().iter().map(|&v| v as u8).collect();
    w.write_all(&bytes)?;
    w.write_all(&[table.kind().tag()])?;
    w.flush()?;
    Ok(())
}

pub fn read_table<R: Read>(mut r: R) -> Result<MobiusTable, SieveError> {
    let corrupt = |msg: &str| SieveError::CacheCorrupt(msg.to_string());
    let mut header = [0u8; 16];
    r.read_exact(&mut header).map_err(|_| corrupt("truncated header"))?;
    if &header[..8] != CACHE_MAGIC {
        return Err(corrupt("bad magic"));
    }
    let n_max = u64::from_le_bytes(header[8..].try_into().unwrap());
    if n_max == 0 {
        return Err(corrupt("n_max is zero"));
    }
    let mut body = Vec::new();
    r.read_to_end(&mut body)?;
    if body.len() as u64 != n_max + 1 {
        return Err(corrupt("length does not match n_max"));
    }
    let tag = body.pop().unwrap();
    let kind = TableKind::from_tag(tag).ok_or_else(|| corrupt("unknown kind tag"))?;
    let mut values = Vec::with_capacity(body.len());
    for b in body {
        let v = b as i8;
        if !(-1..=1).contains(&v) {
            return Err(corrupt("value outside {-1, 0, 1}"));
        }
        values.push(v);
    }
    if values[0] != 1 {
        return Err(corrupt("value at n = 1 is not 1"));
    }
    if kind == TableKind::Liouville && values.contains(&0) {
        return Err(corrupt("zero in a Liouville table"));
    }
    Ok(MobiusTable::from_parts(kind, values))
}
