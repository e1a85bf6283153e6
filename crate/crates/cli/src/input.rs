//! File plumbing shared by the subcommands.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use hypernull::incidence::IncidenceMatrix;
use hypernull::io::{self, Format};

/// Loads an incidence matrix in any supported format. `-` reads standard
/// input (not available for `benson`, which spans two files).
pub fn load_matrix(path: &Path, format: Format) -> Result<IncidenceMatrix> {
    let matrix = match format {
        Format::Benson => {
            let (nverts, simplices) = benson_paths(path)?;
            io::read_benson(open(&nverts)?, open(&simplices)?)?
        }
        Format::HyperedgeList => io::read_hyperedge_list(reader(path)?)?,
        Format::DenseMatrix => io::read_dense_csv(reader(path)?)?,
    };
    eprintln!(
        "hypernull: loaded {} nodes, {} hyperedges, {} incidences from {}",
        matrix.n_nodes(),
        matrix.n_hyperedges(),
        matrix.total_ones(),
        path.display()
    );
    Ok(matrix)
}

/// Resolves the two files of a `benson` dataset from its `nverts` member.
pub fn benson_paths(input: &Path) -> Result<(PathBuf, PathBuf)> {
    let name = input
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or_default();
    if !name.contains("nverts") {
        bail!(
            "benson input must point at the nverts file; the simplices file is \
             found by substituting 'simplices' into its name"
        );
    }
    let sibling = input.with_file_name(name.replace("nverts", "simplices"));
    Ok((input.to_path_buf(), sibling))
}

/// Opens `path` for buffered reading, with `-` standing for standard input.
pub fn reader(path: &Path) -> Result<Box<dyn BufRead>> {
    if path == Path::new("-") {
        Ok(Box::new(std::io::stdin().lock()))
    } else {
        Ok(Box::new(open(path)?))
    }
}

/// Reads the whole file, with `-` standing for standard input.
pub fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    let mut bytes = Vec::new();
    reader(path)?
        .read_to_end(&mut bytes)
        .with_context(|| format!("cannot read {}", path.display()))?;
    Ok(bytes)
}

/// The data sink: `--out` when given, standard output otherwise.
pub fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    match out {
        Some(path) => Ok(Box::new(BufWriter::new(create(path)?))),
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

pub fn open(path: &Path) -> Result<BufReader<File>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(file))
}

pub fn create(path: &Path) -> Result<File> {
    File::create(path).with_context(|| format!("cannot create {}", path.display()))
}
