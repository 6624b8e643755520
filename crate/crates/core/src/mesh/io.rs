//! Plain-text mesh format.
//!
//! ```text
//! dim n_vertices n_cells
//! x y [z]            (n_vertices lines, 17 significant digits)
//! i0 i1 i2 [i3]      (n_cells lines, zero-based)
//! ```
//!
//! Faces and boundary flags are rebuilt on import.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::SimplicialMesh;
use crate::{Error, Result};

pub fn write_mesh<W: Write>(mesh: &SimplicialMesh, mut out: W) -> Result<()> {
    if mesh.n_cells() == 0 {
        return Err(Error::InvalidMesh("cannot export an empty mesh".into()));
    }
    writeln!(
        out,
        "{} {} {}",
        mesh.dim(),
        mesh.n_vertices(),
        mesh.n_cells()
    )?;
    for v in 0..mesh.n_vertices() {
        let line: Vec<String> = mesh.vertex(v).iter().map(|x| format!("{x:.16e}")).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    for c in 0..mesh.n_cells() {
        let line: Vec<String> = mesh.cell(c).iter().map(usize::to_string).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    out.flush()?;
    Ok(())
}

pub fn export_mesh(mesh: &SimplicialMesh, path: impl AsRef<Path>) -> Result<()> {
    // validate before touching the filesystem
    if mesh.n_cells() == 0 {
        return Err(Error::InvalidMesh("cannot export an empty mesh".into()));
    }
    write_mesh(mesh, BufWriter::new(File::create(path)?))
}

pub fn read_mesh<R: Read>(input: R) -> Result<SimplicialMesh> {
    let mut lines = BufReader::new(input).lines();
    let mut next_line = |what: &str| -> Result<String> {
        lines
            .next()
            .transpose()?
            .ok_or_else(|| Error::Parse(format!("unexpected end of file reading {what}")))
    };
    let header = next_line("header")?;
    let head: Vec<usize> = header
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Parse(format!("bad header `{header}`")))
        })
        .collect::<Result<_>>()?;
    let [dim, nv, nc] = head[..] else {
        return Err(Error::Parse(format!("bad header `{header}`")));
    };
    let mut coords = Vec::with_capacity(nv * dim);
    for _ in 0..nv {
        let line = next_line("vertex")?;
        let row = parse_row::<f64>(&line, dim)?;
        coords.extend(row);
    }
    let mut cells = Vec::with_capacity(nc * (dim + 1));
    for _ in 0..nc {
        let line = next_line("cell")?;
        cells.extend(parse_row::<usize>(&line, dim + 1)?);
    }
    SimplicialMesh::new(dim, coords, cells)
}

pub fn import_mesh(path: impl AsRef<Path>) -> Result<SimplicialMesh> {
    read_mesh(File::open(path)?)
}

fn parse_row<T: std::str::FromStr>(line: &str, n: usize) -> Result<Vec<T>> {
    let row: Vec<T> = line
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Parse(format!("bad token `{t}`")))
        })
        .collect::<Result<_>>()?;
    if row.len() != n {
        return Err(Error::Parse(format!("expected {n} entries in `{line}`")));
    }
    Ok(row)
}
