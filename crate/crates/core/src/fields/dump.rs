//! Field dump container.
//!
//! Layout: an ASCII header of `key=value` lines terminated by a line `end`, followed by
//! `n²` little-endian `f64` values in row-major order (first index along `ξ₁`).
//!
//! ```text
//! oseen-field
//! version=1
//! frame=scaled
//! time=0.5
//! n=256
//! half_width=12
//! precision=f64-le
//! end
//! <binary payload>
//! ```

use std::io::{BufRead, BufReader, Read, Write};

use super::{Frame, Grid2D, ScalarField};
use crate::error::{Error, Result};

const MAGIC: &str = "oseen-field";
const VERSION: u32 = 1;

pub fn write_dump(w: &ScalarField, out: &mut impl Write) -> Result<()> {
    writeln!(out, "{MAGIC}")?;
    writeln!(out, "version={VERSION}")?;
    writeln!(out, "frame={}", w.frame().name())?;
    writeln!(out, "time={:?}", w.time())?;
    writeln!(out, "n={}", w.grid().n())?;
    writeln!(out, "half_width={:?}", w.grid().half_width())?;
    writeln!(out, "precision=f64-le")?;
    writeln!(out, "end")?;
    let mut bytes = Vec::with_capacity(8 * w.values().len());
    for v in w.values() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    out.write_all(&bytes)?;
    Ok(())
}

pub fn read_dump(input: impl Read) -> Result<ScalarField> {
    let mut reader = BufReader::new(input);
    let mut line = String::new();
    reader.read_line(&mut line)?;
    if line.trim_end() != MAGIC {
        return Err(Error::Format("missing magic line".into()));
    }
    let (mut frame, mut time, mut n, mut half) = (None, None, None, None);
    loop {
        line.clear();
        if reader.read_line(&mut line)? == 0 {
            return Err(Error::Format("header not terminated".into()));
        }
        let entry = line.trim_end();
        if entry == "end" {
            break;
        }
        let (key, value) =
            entry.split_once('=').ok_or_else(|| Error::Format(format!("bad header line {entry:?}")))?;
        let bad = |_| Error::Format(format!("bad value for {key}: {value:?}"));
        match key {
            "version" => {
                let v: u32 = value.parse().map_err(|_| Error::Format(format!("bad version {value:?}")))?;
                if v != VERSION {
                    return Err(Error::Format(format!("unsupported version {v}")));
                }
            }
            "frame" => {
                frame = Some(match value {
                    "scaled" => Frame::Scaled,
                    "unscaled" => Frame::Unscaled,
                    other => return Err(Error::Format(format!("unknown frame {other:?}"))),
                })
            }
            "time" => time = Some(value.parse::<f64>().map_err(bad)?),
            "n" => n = Some(value.parse::<usize>().map_err(|_| Error::Format(format!("bad n {value:?}")))?),
            "half_width" => half = Some(value.parse::<f64>().map_err(bad)?),
            "precision" if value == "f64-le" => {}
            "precision" => return Err(Error::Format(format!("unsupported precision {value:?}"))),
            _ => {}
        }
    }
    let missing = |k: &str| Error::Format(format!("header lacks {k}"));
    let grid = Grid2D::new(n.ok_or_else(|| missing("n"))?, half.ok_or_else(|| missing("half_width"))?)?;
    let mut payload = vec![0u8; 8 * grid.len()];
    reader.read_exact(&mut payload).map_err(|_| Error::Format("truncated payload".into()))?;
    let values = payload.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    ScalarField::new(
        grid,
        values,
        frame.ok_or_else(|| missing("frame"))?,
        time.ok_or_else(|| missing("time"))?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bitwise() {
        let grid = Grid2D::new(16, 3.5).unwrap();
        let w = ScalarField::from_fn(grid, |x, y| (x * 0.3).sin() + y * y * 1e-300)
            .with_frame(Frame::Unscaled, 2.75)
            .unwrap();
        let mut buf = Vec::new();
        write_dump(&w, &mut buf).unwrap();
        let back = read_dump(buf.as_slice()).unwrap();
        assert_eq!(back.grid(), w.grid());
        assert_eq!(back.frame(), Frame::Unscaled);
        assert_eq!(back.time(), 2.75);
        assert!(back.values().iter().zip(w.values()).all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_dump(&b"hello\n"[..]).is_err());
        assert!(read_dump(&b"oseen-field\nversion=1\nn=4\nend\n"[..]).is_err());
    }
}
