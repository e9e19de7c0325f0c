//! Index file layout, little-endian throughout:
//!
//! ```text
//! magic     8 bytes   "VLGIDX01"
//! width     u8        bytes per suffix-array entry, 5 or 8
//! reserved  7 bytes   zero
//! n         u64       text length
//! text      n bytes
//! sa        n * width bytes
//! checksum  u64       CRC-64/XZ of every preceding byte
//! ```

use std::io::{self, Read, Write};

use crc::{Crc, Digest, CRC_64_XZ};

use super::{check_capacity, IndexError, Store, SuffixArray, Text};

pub const INDEX_MAGIC: &[u8; 8] = b"VLGIDX01";

static CRC64: Crc<u64> = Crc::<u64>::new(&CRC_64_XZ);

const CHUNK: usize = 1 << 16;

/// Bytes used per suffix-array entry on disk.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PositionWidth {
    #[default]
    Five,
    Eight,
}

impl PositionWidth {
    pub fn bytes(self) -> usize {
        match self {
            PositionWidth::Five => 5,
            PositionWidth::Eight => 8,
        }
    }

    pub fn from_bytes(w: u8) -> Option<Self> {
        match w {
            5 => Some(PositionWidth::Five),
            8 => Some(PositionWidth::Eight),
            _ => None,
        }
    }
}

struct HashingWriter<'a, W> {
    inner: W,
    digest: Digest<'a, u64>,
}

impl<W: Write> HashingWriter<'_, W> {
    fn put(&mut self, bytes: &[u8]) -> io::Result<()> {
        self.digest.update(bytes);
        self.inner.write_all(bytes)
    }
}

/// Writes `text` and `sa` in the index format.
pub fn save_index<W: Write>(
    text: &Text,
    sa: &SuffixArray,
    out: W,
    width: PositionWidth,
) -> Result<(), IndexError> {
    let n = text.len();
    check_capacity(n as u64)?;
    if sa.len() != n {
        return Err(IndexError::Malformed(format!(
            "suffix array has {} entries for a {n}-byte text",
            sa.len()
        )));
    }
    let mut w = HashingWriter {
        inner: out,
        digest: CRC64.digest(),
    };
    let mut header = [0u8; 24];
    header[..8].copy_from_slice(INDEX_MAGIC);
    header[8] = width.bytes() as u8;
    header[16..24].copy_from_slice(&(n as u64).to_le_bytes());
    w.put(&header)?;
    w.put(text.as_bytes())?;

    let wb = width.bytes();
    let mut buf = Vec::with_capacity(CHUNK * wb);
    let mut flush_entries = |entries: &mut dyn Iterator<Item = u64>, w: &mut HashingWriter<'_, W>| -> io::Result<()> {
        for p in entries {
            buf.extend_from_slice(&p.to_le_bytes()[..wb]);
            if buf.len() >= CHUNK * wb {
                w.put(&buf)?;
                buf.clear();
            }
        }
        w.put(&buf)?;
        buf.clear();
        Ok(())
    };
    match &sa.store {
        Store::Narrow(v) => flush_entries(&mut v.iter().map(|&p| p as u64), &mut w)?,
        Store::Wide(v) => flush_entries(&mut v.iter().copied(), &mut w)?,
    }

    let HashingWriter { mut inner, digest } = w;
    inner.write_all(&digest.finalize().to_le_bytes())?;
    Ok(())
}

struct HashingReader<'a, R> {
    inner: R,
    digest: Digest<'a, u64>,
}

impl<R: Read> HashingReader<'_, R> {
    fn take(&mut self, buf: &mut [u8]) -> Result<(), IndexError> {
        read_exact(&mut self.inner, buf)?;
        self.digest.update(buf);
        Ok(())
    }
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8]) -> Result<(), IndexError> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        io::ErrorKind::UnexpectedEof => IndexError::Truncated,
        _ => IndexError::Io(e),
    })
}

/// Reads an index written by [`save_index`], verifying magic, layout
/// and checksum.
pub fn load_index<R: Read>(src: R) -> Result<(Text, SuffixArray), IndexError> {
    let mut r = HashingReader {
        inner: src,
        digest: CRC64.digest(),
    };
    let mut magic = [0u8; 8];
    r.take(&mut magic)?;
    if &magic != INDEX_MAGIC {
        return Err(IndexError::BadMagic(magic));
    }
    let mut rest = [0u8; 16];
    r.take(&mut rest)?;
    let width = PositionWidth::from_bytes(rest[0]).ok_or(IndexError::BadWidth(rest[0]))?;
    if rest[1..8].iter().any(|&b| b != 0) {
        return Err(IndexError::Malformed("reserved header bytes are not zero".into()));
    }
    let n = u64::from_le_bytes(rest[8..16].try_into().unwrap());
    check_capacity(n).map_err(|_| IndexError::Malformed(format!("text length {n} exceeds capacity")))?;
    let n = usize::try_from(n).map_err(|_| IndexError::Malformed("text length overflows usize".into()))?;

    // Grow buffers chunk by chunk so a corrupt length cannot force a huge
    // allocation before truncation is detected.
    let mut text = Vec::new();
    let mut chunk = vec![0u8; CHUNK * 8];
    while text.len() < n {
        let step = (n - text.len()).min(chunk.len());
        r.take(&mut chunk[..step])?;
        text.extend_from_slice(&chunk[..step]);
    }

    let wb = width.bytes();
    let narrow = n as u64 <= u32::MAX as u64;
    let mut narrow_sa: Vec<u32> = Vec::new();
    let mut wide_sa: Vec<u64> = Vec::new();
    let mut bad_entry = None;
    let mut done = 0usize;
    while done < n {
        let count = (n - done).min(CHUNK);
        let bytes = &mut chunk[..count * wb];
        r.take(bytes)?;
        for entry in bytes.chunks_exact(wb) {
            let mut le = [0u8; 8];
            le[..wb].copy_from_slice(entry);
            let p = u64::from_le_bytes(le);
            if p >= n as u64 {
                bad_entry.get_or_insert(p);
            }
            if narrow {
                narrow_sa.push(p as u32);
            } else {
                wide_sa.push(p);
            }
        }
        done += count;
    }

    let HashingReader { mut inner, digest } = r;
    let computed = digest.finalize();
    let mut stored = [0u8; 8];
    read_exact(&mut inner, &mut stored)?;
    let stored = u64::from_le_bytes(stored);
    if stored != computed {
        return Err(IndexError::Checksum { stored, computed });
    }
    if let Some(p) = bad_entry {
        return Err(IndexError::Malformed(format!("suffix array entry {p} out of range")));
    }
    let mut probe = [0u8; 1];
    if inner.read(&mut probe)? != 0 {
        return Err(IndexError::Malformed("trailing bytes after checksum".into()));
    }

    let store = if narrow {
        Store::Narrow(narrow_sa)
    } else {
        Store::Wide(wide_sa)
    };
    Ok((Text::new(text), SuffixArray { store }))
}
