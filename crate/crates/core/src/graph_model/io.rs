//! Graph and partition files.
//!
//! A graph file starts with the header line `ssbm n k p q seed` and then
//! lists one `i j` line (0-indexed, `i <= j`) per nonzero upper-triangle
//! entry of the adjacency matrix. A partition file is the JSON object
//! `{"n": .., "k": .., "assignment": [..]}` with labels in `1..=k`.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{Partition, SsbmParams};
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

pub fn write_graph<W: Write>(mut w: W, params: &SsbmParams, adjacency: &SymMatrix) -> Result<()> {
    writeln!(
        w,
        "ssbm {} {} {} {} {}",
        params.n, params.k, params.p, params.q, params.seed
    )?;
    let n = adjacency.n();
    for i in 0..n {
        for j in i..n {
            if adjacency.get(i, j) != 0.0 {
                writeln!(w, "{i} {j}")?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, what: &str, line: usize) -> Result<T> {
    field
        .ok_or_else(|| Error::Parse(format!("line {line}: missing {what}")))?
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: malformed {what}")))
}

/// Reads a graph file back into its header parameters and 0/1 adjacency.
pub fn read_graph<R: BufRead>(r: R) -> Result<(SsbmParams, SymMatrix)> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty graph file".into()))??;
    let mut fields = header.split_whitespace();
    if fields.next() != Some("ssbm") {
        return Err(Error::Parse("graph header must start with `ssbm`".into()));
    }
    let n: usize = parse_field(fields.next(), "n", 1)?;
    let k: usize = parse_field(fields.next(), "k", 1)?;
    let p: f64 = parse_field(fields.next(), "p", 1)?;
    let q: f64 = parse_field(fields.next(), "q", 1)?;
    let seed: u64 = parse_field(fields.next(), "seed", 1)?;
    if fields.next().is_some() {
        return Err(Error::Parse("line 1: trailing fields in header".into()));
    }
    let params = SsbmParams::new(n, k, p, q, seed)?;

    let mut data = vec![0.0; n * n];
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let lineno = idx + 2;
        if line.trim().is_empty() {
            continue;
        }
        let mut f = line.split_whitespace();
        let i: usize = parse_field(f.next(), "i", lineno)?;
        let j: usize = parse_field(f.next(), "j", lineno)?;
        if f.next().is_some() || i > j || j >= n {
            return Err(Error::Parse(format!(
                "line {lineno}: expected `i j` with i <= j < {n}"
            )));
        }
        data[i * n + j] = 1.0;
        data[j * n + i] = 1.0;
    }
    Ok((params, SymMatrix::from_row_major(n, data)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionFile {
    pub n: usize,
    pub k: usize,
    pub assignment: Vec<usize>,
}

impl From<&Partition> for PartitionFile {
    fn from(p: &Partition) -> Self {
        Self {
            n: p.n(),
            k: p.k(),
            assignment: p.assignment().iter().map(|&l| l + 1).collect(),
        }
    }
}

impl TryFrom<PartitionFile> for Partition {
    type Error = Error;

    fn try_from(f: PartitionFile) -> Result<Self> {
        if f.assignment.len() != f.n {
            return Err(Error::Parse(format!(
                "partition lists {} labels for n = {}",
                f.assignment.len(),
                f.n
            )));
        }
        let labels = f
            .assignment
            .iter()
            .map(|&l| {
                if l == 0 || l > f.k {
                    Err(Error::Parse(format!("label {l} outside 1..={}", f.k)))
                } else {
                    Ok(l - 1)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(f.k, labels)
    }
}

pub fn write_partition<W: Write>(mut w: W, partition: &Partition) -> Result<()> {
    serde_json::to_writer(&mut w, &PartitionFile::from(partition))?;
    writeln!(w)?;
    Ok(())
}

pub fn read_partition<R: std::io::Read>(r: R) -> Result<Partition> {
    let file: PartitionFile = serde_json::from_reader(r)?;
    file.try_into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_file_layout() {
        let params = SsbmParams::new(3, 1, 0.5, 0.25, 9).unwrap();
        let adj = SymMatrix::from_row_major(3, vec![1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0])
            .unwrap();
        let mut buf = Vec::new();
        write_graph(&mut buf, &params, &adj).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text, "ssbm 3 1 0.5 0.25 9\n0 0\n0 1\n1 2\n");
        let (back_params, back) = read_graph(&buf[..]).unwrap();
        assert_eq!(back_params, params);
        assert_eq!(back, adj);
    }

    #[test]
    fn malformed_graphs() {
        assert!(read_graph(&b""[..]).is_err());
        assert!(read_graph(&b"graph 3 1 0.5 0.1 0\n"[..]).is_err());
        assert!(read_graph(&b"ssbm 3 1 0.5 0.1 0\n2 1\n"[..]).is_err());
        assert!(read_graph(&b"ssbm 3 1 0.5 0.1 0\n0 3\n"[..]).is_err());
        assert!(read_graph(&b"ssbm 3 1 0.5 x 0\n"[..]).is_err());
    }

    #[test]
    fn partition_json_uses_one_based_labels() {
        let p = Partition::from_sizes(&[2, 1]);
        let mut buf = Vec::new();
        write_partition(&mut buf, &p).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap().trim(),
            r#"{"n":3,"k":2,"assignment":[1,1,2]}"#
        );
        assert_eq!(read_partition(&buf[..]).unwrap(), p);
        assert!(read_partition(&br#"{"n":2,"k":1,"assignment":[1,2]}"#[..]).is_err());
        assert!(read_partition(&br#"{"n":3,"k":1,"assignment":[1,1]}"#[..]).is_err());
    }
}
