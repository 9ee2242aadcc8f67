//! File formats.
//!
//! Instances, text: a header line holding `n`, then `n` lines of `n` whitespace-separated costs.
//! Instances, binary: magic `SUBM1`, little-endian `u64` n, then `n²` little-endian `f64` row-major.
//! Distributions, draws and metric tables for EMD are text; see the parsers below.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::instance::DenseCosts;

pub const MAGIC: &[u8; 5] = b"SUBM1";

pub fn write_text<W: Write>(costs: &DenseCosts, mut out: W) -> Result<()> {
    let n = costs.n();
    writeln!(out, "{n}")?;
    for row in costs.data().chunks(n.max(1)).take(n) {
        let line: Vec<String> = row.iter().map(|c| format!("{c}")).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

pub fn read_text<R: Read>(input: R) -> Result<DenseCosts> {
    let reader = BufReader::new(input);
    let mut lines = reader.lines();
    let header = loop {
        match lines.next() {
            Some(line) => {
                let line = line?;
                if !line.trim().is_empty() {
                    break line;
                }
            }
            None => return Err(Error::Format("missing header".into())),
        }
    };
    let n: usize = header
        .trim()
        .parse()
        .map_err(|_| Error::Format(format!("bad header {header:?}")))?;
    let mut data = Vec::with_capacity(n * n);
    let mut rows = 0;
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let before = data.len();
        for tok in line.split_whitespace() {
            let c: f64 = tok
                .parse()
                .map_err(|_| Error::Format(format!("bad cost {tok:?} on row {rows}")))?;
            data.push(c);
        }
        if data.len() - before != n {
            return Err(Error::Format(format!(
                "row {rows} has {} entries, expected {n}",
                data.len() - before
            )));
        }
        rows += 1;
    }
    if rows != n {
        return Err(Error::Format(format!("expected {n} rows, found {rows}")));
    }
    DenseCosts::new(n, data)
}

pub fn write_binary<W: Write>(costs: &DenseCosts, mut out: W) -> Result<()> {
    let n = costs.n() as u64;
    out.write_all(MAGIC)?;
    out.write_all(&n.to_le_bytes())?;
    for c in costs.data() {
        out.write_all(&c.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut input: R) -> Result<DenseCosts> {
    let mut magic = [0u8; 5];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let mut word = [0u8; 8];
    input.read_exact(&mut word)?;
    let n = u64::from_le_bytes(word) as usize;
    let mut data = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        input
            .read_exact(&mut word)
            .map_err(|_| Error::Format("truncated cost block".into()))?;
        data.push(f64::from_le_bytes(word));
    }
    DenseCosts::new(n, data)
}

/// Reads either format, picking binary when the file starts with the magic.
pub fn read_instance(path: &Path) -> Result<DenseCosts> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(MAGIC) {
        read_binary(&bytes[..])
    } else {
        read_text(&bytes[..])
    }
}

pub fn write_instance(path: &Path, costs: &DenseCosts, binary: bool) -> Result<()> {
    let mut file = std::io::BufWriter::new(fs::File::create(path)?);
    if binary {
        write_binary(costs, &mut file)?;
    } else {
        write_text(costs, &mut file)?;
    }
    file.flush()?;
    Ok(())
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// Distribution file: one `point mass` pair per line, `#` starts a comment.
/// Points are ids in `0..support`; missing ids get mass 0.
pub fn parse_distribution(text: &str) -> Result<Vec<f64>> {
    let mut masses: Vec<f64> = Vec::new();
    for (line, content) in data_lines(text) {
        let bad = || Error::Format(format!("line {line}: expected `point mass`, found {content:?}"));
        let mut parts = content.split_whitespace();
        let (Some(p), Some(m), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad());
        };
        let p: usize = p.parse().map_err(|_| bad())?;
        let m: f64 = m.parse().map_err(|_| bad())?;
        if masses.len() <= p {
            masses.resize(p + 1, 0.0);
        }
        masses[p] += m;
    }
    if masses.is_empty() {
        return Err(Error::Format("distribution file lists no points".into()));
    }
    Ok(masses)
}

/// Draw file: point ids separated by whitespace, in draw order.
pub fn parse_draws(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (line, content) in data_lines(text) {
        for tok in content.split_whitespace() {
            out.push(tok.parse().map_err(|_| Error::Format(format!("line {line}: bad point id {tok:?}")))?);
        }
    }
    Ok(out)
}

/// Metric file: a header `rows cols` (or a single `n` for a square table),
/// then `rows` lines of `cols` distances.
pub fn parse_metric(text: &str) -> Result<(usize, usize, Vec<f64>)> {
    let mut lines = data_lines(text);
    let (_, header) = lines.next().ok_or_else(|| Error::Format("missing header".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Format(format!("bad header {header:?}")))?;
    let (rows, cols) = match dims[..] {
        [n] => (n, n),
        [r, c] => (r, c),
        _ => return Err(Error::Format(format!("bad header {header:?}"))),
    };
    let mut data = Vec::with_capacity(rows * cols);
    let mut seen = 0;
    for (line, content) in lines {
        let before = data.len();
        for tok in content.split_whitespace() {
            data.push(tok.parse().map_err(|_| Error::Format(format!("line {line}: bad distance {tok:?}")))?);
        }
        if data.len() - before != cols {
            return Err(Error::Format(format!("line {line}: expected {cols} entries, found {}", data.len() - before)));
        }
        seen += 1;
    }
    if seen != rows {
        return Err(Error::Format(format!("expected {rows} rows, found {seen}")));
    }
    Ok((rows, cols, data))
}
