//! Reading and writing incidence matrices.
//!
//! Three interchange formats are supported:
//!
//! * `hyperedge-list`: UTF-8 text, one hyperedge per line as
//!   whitespace-separated node labels. A blank line is an empty hyperedge;
//!   duplicate lines are parallel hyperedges.
//! * `benson`: the two-file layout used by many public hypergraph datasets,
//!   one stream listing the member count of each hyperedge (`nverts`) and one
//!   listing the flattened members in order (`simplices`).
//! * `dense-matrix`: CSV of 0/1 cells, nodes as rows, with an optional header
//!   row of hyperedge labels and an optional leading node-label column.
//!
//! A packed binary container for sample batches is also provided so large
//! ensembles do not have to round-trip through text.

use std::fmt;
use std::io::{BufRead, Read, Write};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::incidence::IncidenceMatrix;

/// Incidence matrix interchange format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// One hyperedge per line, whitespace-separated node labels.
    HyperedgeList,
    /// Two-stream `nverts` + `simplices` layout.
    Benson,
    /// Dense 0/1 CSV.
    DenseMatrix,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hyperedge-list" => Ok(Format::HyperedgeList),
            "benson" => Ok(Format::Benson),
            "dense-matrix" => Ok(Format::DenseMatrix),
            other => Err(Error::invalid(format!(
                "unknown format {:?} (expected hyperedge-list, benson or dense-matrix)",
                other
            ))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::HyperedgeList => "hyperedge-list",
            Format::Benson => "benson",
            Format::DenseMatrix => "dense-matrix",
        })
    }
}

/// Reads a hyperedge-list stream.
pub fn read_hyperedge_list<R: BufRead>(reader: R) -> Result<IncidenceMatrix> {
    let mut hyperedges: Vec<Vec<String>> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let members: Vec<String> = line.split_whitespace().map(str::to_owned).collect();
        let mut seen = std::collections::HashSet::new();
        for m in &members {
            if !seen.insert(m.as_str()) {
                return Err(Error::parse(
                    idx + 1,
                    format!("node {:?} repeated within one hyperedge", m),
                ));
            }
        }
        hyperedges.push(members);
    }
    IncidenceMatrix::from_labeled_hyperedges(&hyperedges)
}

/// Writes the hyperedge-list form of `m`.
///
/// Only hyperedge memberships are written, so isolated nodes do not survive a
/// round trip through this format; use [`write_dense_csv`] when they must.
/// Node labels containing whitespace cannot be represented and are rejected.
pub fn write_hyperedge_list<W: Write>(m: &IncidenceMatrix, mut writer: W) -> Result<()> {
    for alpha in 0..m.n_hyperedges() {
        let mut first = true;
        for &i in m.hyperedge_members(alpha) {
            let label = m.node_label(i as usize);
            if label.contains(char::is_whitespace) {
                return Err(Error::invalid(format!(
                    "node label {:?} contains whitespace and cannot be written as hyperedge-list",
                    label
                )));
            }
            if !first {
                writer.write_all(b" ")?;
            }
            writer.write_all(label.as_bytes())?;
            first = false;
        }
        writer.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads the two-stream benson layout: hyperedge sizes from `nverts`,
/// flattened member labels from `simplices`.
pub fn read_benson<R1: BufRead, R2: BufRead>(
    nverts: R1,
    simplices: R2,
) -> Result<IncidenceMatrix> {
    let sizes = read_tokens(nverts)?;
    let members = read_tokens(simplices)?;
    let mut hyperedges: Vec<Vec<String>> = Vec::new();
    let mut cursor = 0usize;
    for (line, token) in &sizes {
        let size: usize = token.parse().map_err(|_| {
            Error::parse(*line, format!("invalid hyperedge size {:?}", token))
        })?;
        if cursor + size > members.len() {
            return Err(Error::parse(
                *line,
                format!(
                    "hyperedge of size {} needs members past the end of the simplices stream \
                     ({} listed in total)",
                    size,
                    members.len()
                ),
            ));
        }
        let slice = &members[cursor..cursor + size];
        let mut seen = std::collections::HashSet::new();
        for (member_line, label) in slice {
            if !seen.insert(label.as_str()) {
                return Err(Error::parse(
                    *member_line,
                    format!("node {:?} repeated within one hyperedge", label),
                ));
            }
        }
        hyperedges.push(slice.iter().map(|(_, t)| t.clone()).collect());
        cursor += size;
    }
    if cursor != members.len() {
        let (line, _) = members[cursor];
        return Err(Error::parse(
            line,
            format!(
                "{} unconsumed members in the simplices stream",
                members.len() - cursor
            ),
        ));
    }
    IncidenceMatrix::from_labeled_hyperedges(&hyperedges)
}

/// Whitespace-tokenizes a stream, remembering the 1-based line of each token.
fn read_tokens<R: BufRead>(reader: R) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        for token in line.split_whitespace() {
            out.push((idx + 1, token.to_owned()));
        }
    }
    Ok(out)
}

fn is_cell(field: &str) -> bool {
    matches!(field.trim(), "0" | "1")
}

/// Reads a dense 0/1 CSV.
///
/// Layout is sniffed: a first record made entirely of 0/1 cells means no
/// header row, otherwise the first record is taken as hyperedge labels; a
/// body whose first column is not all 0/1 is taken to carry node labels.
/// Matrices whose labels are themselves the strings `"0"`/`"1"` defeat the
/// sniffer; the writer always emits a `node` corner field so its own output
/// is never ambiguous.
pub fn read_dense_csv<R: Read>(reader: R) -> Result<IncidenceMatrix> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut records: Vec<(usize, Vec<String>)> = Vec::new();
    for record in csv_reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        records.push((
            line,
            record.iter().map(|f| f.trim().to_owned()).collect(),
        ));
    }
    if records.is_empty() {
        return IncidenceMatrix::from_memberships(0, Vec::new());
    }

    let has_header = !records[0].1.iter().all(|f| is_cell(f));
    let body = if has_header { &records[1..] } else { &records[..] };
    let has_label_col = body
        .iter()
        .any(|(_, fields)| fields.first().is_some_and(|f| !is_cell(f)));

    let header_labels: Option<Vec<String>> = if has_header {
        let fields = &records[0].1;
        let labels = if has_label_col { &fields[1..] } else { &fields[..] };
        Some(labels.to_vec())
    } else {
        None
    };

    let mut node_labels = Vec::new();
    let mut dense_rows: Vec<Vec<bool>> = Vec::new();
    let mut width: Option<usize> = None;
    for (line, fields) in body {
        let (label, cells) = if has_label_col {
            let Some((first, rest)) = fields.split_first() else {
                return Err(Error::parse(*line, "empty record"));
            };
            (Some(first.clone()), rest)
        } else {
            (None, &fields[..])
        };
        match width {
            None => width = Some(cells.len()),
            Some(w) if w != cells.len() => {
                return Err(Error::parse(
                    *line,
                    format!("record has {} cells, expected {}", cells.len(), w),
                ));
            }
            Some(_) => {}
        }
        let mut row = Vec::with_capacity(cells.len());
        for cell in cells {
            match cell.trim() {
                "0" => row.push(false),
                "1" => row.push(true),
                other => {
                    return Err(Error::parse(
                        *line,
                        format!("cell {:?} is not 0 or 1", other),
                    ));
                }
            }
        }
        if let Some(label) = label {
            node_labels.push(label);
        }
        dense_rows.push(row);
    }

    if let (Some(w), Some(labels)) = (width, header_labels.as_ref()) {
        if labels.len() != w {
            return Err(Error::parse(
                records[0].0,
                format!("header lists {} hyperedges, body has {}", labels.len(), w),
            ));
        }
    }

    let mut m = IncidenceMatrix::from_dense_rows(&dense_rows)?;
    if has_label_col {
        m = m.with_node_labels(node_labels)?;
    }
    if let Some(labels) = header_labels {
        m = m.with_hyperedge_labels(labels)?;
    }
    Ok(m)
}

/// Writes `m` as dense CSV with a header row and a leading label column.
///
/// Unlabeled nodes are written as `n0`, `n1`, ... rather than bare indices,
/// so the label column of the writer's own output never looks like cell
/// data to [`read_dense_csv`].
pub fn write_dense_csv<W: Write>(m: &IncidenceMatrix, writer: W) -> Result<()> {
    let mut csv_writer = csv::Writer::from_writer(writer);
    let mut header = Vec::with_capacity(m.n_hyperedges() + 1);
    header.push("node".to_owned());
    for alpha in 0..m.n_hyperedges() {
        header.push(m.hyperedge_label(alpha).into_owned());
    }
    csv_writer.write_record(&header)?;
    for i in 0..m.n_nodes() {
        let mut record = Vec::with_capacity(m.n_hyperedges() + 1);
        record.push(match m.node_labels() {
            Some(_) => m.node_label(i).into_owned(),
            None => format!("n{i}"),
        });
        for alpha in 0..m.n_hyperedges() {
            record.push(if m.contains(i, alpha) { "1" } else { "0" }.to_owned());
        }
        csv_writer.write_record(&record)?;
    }
    csv_writer.flush()?;
    Ok(())
}

/// Magic bytes opening a packed sample container.
pub const SAMPLE_CONTAINER_MAGIC: &[u8; 8] = b"HGNSAMP1";

/// Writes a batch of same-shape matrices as a packed binary container.
///
/// Layout, all integers little-endian: the 8-byte magic `HGNSAMP1`, then
/// `u64` sample count, `u64` N, `u64` L, then per sample a `u64` cell count
/// followed by that many `(u32 node, u32 hyperedge)` pairs in column-major
/// order.
pub fn write_sample_container<W: Write>(samples: &[IncidenceMatrix], mut writer: W) -> Result<()> {
    let (n, l) = match samples.first() {
        Some(first) => (first.n_nodes(), first.n_hyperedges()),
        None => (0, 0),
    };
    for s in samples {
        if s.n_nodes() != n || s.n_hyperedges() != l {
            return Err(Error::invalid(
                "all samples in a container must share one shape",
            ));
        }
    }
    writer.write_all(SAMPLE_CONTAINER_MAGIC)?;
    writer.write_all(&(samples.len() as u64).to_le_bytes())?;
    writer.write_all(&(n as u64).to_le_bytes())?;
    writer.write_all(&(l as u64).to_le_bytes())?;
    for s in samples {
        writer.write_all(&s.total_ones().to_le_bytes())?;
        for (i, alpha) in s.cells() {
            writer.write_all(&i.to_le_bytes())?;
            writer.write_all(&alpha.to_le_bytes())?;
        }
    }
    Ok(())
}

/// Reads a packed sample container written by [`write_sample_container`].
pub fn read_sample_container<R: Read>(mut reader: R) -> Result<Vec<IncidenceMatrix>> {
    let mut magic = [0u8; 8];
    reader.read_exact(&mut magic)?;
    if &magic != SAMPLE_CONTAINER_MAGIC {
        return Err(Error::invalid("not a sample container (bad magic)"));
    }
    let count = read_u64(&mut reader)? as usize;
    let n = read_u64(&mut reader)? as usize;
    let l = read_u64(&mut reader)? as usize;
    let mut samples = Vec::with_capacity(count);
    for _ in 0..count {
        let t = read_u64(&mut reader)? as usize;
        let mut memberships: Vec<Vec<u32>> = vec![Vec::new(); l];
        for _ in 0..t {
            let i = read_u32(&mut reader)?;
            let alpha = read_u32(&mut reader)? as usize;
            if alpha >= l {
                return Err(Error::invalid(format!(
                    "hyperedge index {} out of range in container (L = {})",
                    alpha, l
                )));
            }
            memberships[alpha].push(i);
        }
        samples.push(IncidenceMatrix::from_memberships(n, memberships)?);
    }
    Ok(samples)
}

fn read_u64<R: Read>(reader: &mut R) -> Result<u64> {
    let mut buf = [0u8; 8];
    reader.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

fn read_u32<R: Read>(reader: &mut R) -> Result<u32> {
    let mut buf = [0u8; 4];
    reader.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperedge_list_blank_line_is_empty_hyperedge() {
        let m = read_hyperedge_list("a b\n\nb c\n".as_bytes()).unwrap();
        assert_eq!(m.n_nodes(), 3);
        assert_eq!(m.n_hyperedges(), 3);
        assert_eq!(m.hyperedge_members(1), &[] as &[u32]);
        assert_eq!(m.total_ones(), 4);
    }

    #[test]
    fn hyperedge_list_duplicate_lines_are_parallel() {
        let m = read_hyperedge_list("a b\na b\n".as_bytes()).unwrap();
        assert_eq!(m.n_hyperedges(), 2);
        assert_eq!(m.hyperedge_members(0), m.hyperedge_members(1));
    }

    #[test]
    fn hyperedge_list_rejects_repeated_member() {
        let err = read_hyperedge_list("a b a\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 1"));
    }

    #[test]
    fn hyperedge_list_round_trips() {
        let text = "a b\n\nb c d\nd\n";
        let m = read_hyperedge_list(text.as_bytes()).unwrap();
        let mut out = Vec::new();
        write_hyperedge_list(&m, &mut out).unwrap();
        let again = read_hyperedge_list(out.as_slice()).unwrap();
        assert!(m.same_cells(&again));
        assert_eq!(m.node_labels(), again.node_labels());
    }

    #[test]
    fn benson_reads_sizes_and_members() {
        let m = read_benson("2\n2\n".as_bytes(), "a\nb\nb\nc\n".as_bytes()).unwrap();
        assert_eq!(m.n_nodes(), 3);
        assert_eq!(m.n_hyperedges(), 2);
        assert_eq!(m.degree_summary().node_degrees(), &[1, 2, 1]);
    }

    #[test]
    fn benson_rejects_count_mismatch() {
        let short = read_benson("2\n3\n".as_bytes(), "a\nb\nc\nd\n".as_bytes()).unwrap_err();
        assert!(short.to_string().contains("line 2"), "{short}");
        let long = read_benson("2\n".as_bytes(), "a\nb\nc\n".as_bytes()).unwrap_err();
        assert!(long.to_string().contains("line 3"), "{long}");
    }

    #[test]
    fn dense_csv_with_header_and_labels() {
        let text = "node,e1,e2\nu,1,0\nv,1,1\n";
        let m = read_dense_csv(text.as_bytes()).unwrap();
        assert_eq!(m.n_nodes(), 2);
        assert_eq!(m.n_hyperedges(), 2);
        assert_eq!(m.node_labels().unwrap(), &["u", "v"]);
        assert_eq!(m.hyperedge_labels().unwrap(), &["e1", "e2"]);
        assert!(m.contains(1, 1));
        assert!(!m.contains(0, 1));
    }

    #[test]
    fn dense_csv_bare_grid() {
        let m = read_dense_csv("1,0\n0,1\n".as_bytes()).unwrap();
        assert_eq!(m.n_nodes(), 2);
        assert!(m.node_labels().is_none());
        assert!(m.contains(0, 0));
        assert!(!m.contains(0, 1));
    }

    #[test]
    fn dense_csv_rejects_non_binary_cell() {
        let err = read_dense_csv("node,e1\nu,2\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn dense_csv_round_trips_isolated_nodes() {
        let m = IncidenceMatrix::from_memberships(3, vec![vec![0], vec![]]).unwrap();
        let mut out = Vec::new();
        write_dense_csv(&m, &mut out).unwrap();
        let again = read_dense_csv(out.as_slice()).unwrap();
        assert!(m.same_cells(&again));
        assert_eq!(again.n_nodes(), 3);
    }

    #[test]
    fn sample_container_round_trips() {
        let a = IncidenceMatrix::from_memberships(3, vec![vec![0, 2], vec![1]]).unwrap();
        let b = IncidenceMatrix::from_memberships(3, vec![vec![], vec![0, 1, 2]]).unwrap();
        let mut bytes = Vec::new();
        write_sample_container(&[a.clone(), b.clone()], &mut bytes).unwrap();
        let back = read_sample_container(bytes.as_slice()).unwrap();
        assert_eq!(back.len(), 2);
        assert!(back[0].same_cells(&a));
        assert!(back[1].same_cells(&b));
    }

    #[test]
    fn sample_container_rejects_bad_magic() {
        let err = read_sample_container(&b"NOTMAGIC\0\0\0\0"[..]).unwrap_err();
        assert!(err.to_string().contains("magic"));
    }
}
