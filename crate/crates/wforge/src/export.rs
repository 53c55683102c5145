//! Mesh and per-vertex field output.

use std::io::{self, Write};

use wforge_core::geom::{immerse_sampled, ImmerseOptions, SampledGrid, SurfacePatch};
use wforge_core::sphere::UnitVector;

use crate::context::Context;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Ply,
    Csv,
}

impl MeshFormat {
    pub fn parse(name: &str) -> CliResult<Self> {
        match name.to_ascii_lowercase().as_str() {
            "obj" => Ok(MeshFormat::Obj),
            "ply" => Ok(MeshFormat::Ply),
            "csv" => Ok(MeshFormat::Csv),
            other => Err(CliError::config(format!("unknown format `{}` (obj, ply, csv)", other))),
        }
    }

    /// Format from `--format`, else from the output extension, else OBJ.
    pub fn resolve(flag: Option<&str>, out: &str) -> CliResult<Self> {
        match flag {
            Some(f) => Self::parse(f),
            None => match std::path::Path::new(out).extension().and_then(|e| e.to_str()) {
                Some(ext) => Self::parse(ext).or(Ok(MeshFormat::Obj)),
                None => Ok(MeshFormat::Obj),
            },
        }
    }
}

/// An immersed grid with the data needed to write it.
#[derive(Debug, Clone)]
pub struct Export {
    pub label: String,
    pub sampled: SampledGrid,
    pub patch: SurfacePatch,
    /// Vertex directions whose `n_V` is written to the CSV.
    pub vertices: Vec<UnitVector>,
}

pub fn build(ctx: &Context) -> CliResult<Export> {
    let data = &ctx.instance.data;
    let sampled = ctx.grid.sample(data)?;
    let patch = immerse_sampled(data, &sampled, ctx.theta, ctx.basepoint, &ImmerseOptions::default())?;
    if patch.positions.iter().flatten().any(|x| !x.is_finite()) {
        return Err(CliError::Numeric("immersion produced non-finite coordinates".into()));
    }
    let vertices = ctx.instance.vertex_configuration().map(|v| v.listed).unwrap_or_default();
    Ok(Export { label: format!("{} theta={:.16e}", data.label(), ctx.theta), sampled, patch, vertices })
}

/// Each quad split along its first diagonal.
pub fn triangles(faces: &[[usize; 4]]) -> Vec<[usize; 3]> {
    faces.iter().flat_map(|&[a, b, c, d]| [[a, b, c], [a, c, d]]).collect()
}

pub fn write_obj<W: Write>(w: &mut W, e: &Export) -> io::Result<()> {
    writeln!(w, "# wforge {}", e.label)?;
    for p in &e.patch.positions {
        writeln!(w, "v {:.16e} {:.16e} {:.16e}", p[0], p[1], p[2])?;
    }
    for n in &e.patch.normals {
        let n = n.as_array();
        writeln!(w, "vn {:.16e} {:.16e} {:.16e}", n[0], n[1], n[2])?;
    }
    for t in triangles(&e.patch.faces) {
        let [a, b, c] = t.map(|k| k + 1);
        writeln!(w, "f {a}//{a} {b}//{b} {c}//{c}")?;
    }
    Ok(())
}

pub fn write_ply<W: Write>(w: &mut W, e: &Export) -> io::Result<()> {
    let tris = triangles(&e.patch.faces);
    writeln!(w, "ply")?;
    writeln!(w, "format ascii 1.0")?;
    writeln!(w, "comment wforge {}", e.label)?;
    writeln!(w, "element vertex {}", e.patch.len())?;
    for p in ["x", "y", "z", "nx", "ny", "nz"] {
        writeln!(w, "property double {}", p)?;
    }
    writeln!(w, "element face {}", tris.len())?;
    writeln!(w, "property list uchar int vertex_indices")?;
    writeln!(w, "end_header")?;
    for (p, n) in e.patch.positions.iter().zip(&e.patch.normals) {
        let n = n.as_array();
        writeln!(w, "{:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {:.16e}", p[0], p[1], p[2], n[0], n[1], n[2])?;
    }
    for [a, b, c] in tris {
        writeln!(w, "3 {} {} {}", a, b, c)?;
    }
    Ok(())
}

/// One row per vertex: grid indices, G, position, Λ, K, normal and `n_V`.
pub fn write_csv<W: Write>(w: &mut W, e: &Export) -> io::Result<()> {
    write!(w, "i_r,i_phi,g_re,g_im,x1,x2,x3,lambda,curvature,n1,n2,n3")?;
    for k in 0..e.vertices.len() {
        write!(w, ",n_v{}", k + 1)?;
    }
    writeln!(w)?;
    let p = &e.patch;
    for k in 0..p.len() {
        let (i, j) = e.sampled.coords[k];
        let g = p.grid[k];
        let x = p.positions[k];
        let n = p.normals[k];
        let a = n.as_array();
        write!(
            w,
            "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            i, j, g.re, g.im, x[0], x[1], x[2], p.metric[k], p.curvature[k], a[0], a[1], a[2]
        )?;
        for v in &e.vertices {
            write!(w, ",{:.16e}", n.dot(v))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn write<W: Write>(w: &mut W, e: &Export, format: MeshFormat) -> io::Result<()> {
    match format {
        MeshFormat::Obj => write_obj(w, e),
        MeshFormat::Ply => write_ply(w, e),
        MeshFormat::Csv => write_csv(w, e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quads_split_along_a_fixed_diagonal() {
        assert_eq!(triangles(&[[0, 1, 2, 3]]), vec![[0, 1, 2], [0, 2, 3]]);
    }

    #[test]
    fn format_resolution() {
        assert_eq!(MeshFormat::resolve(None, "a.ply").unwrap(), MeshFormat::Ply);
        assert_eq!(MeshFormat::resolve(Some("csv"), "a.ply").unwrap(), MeshFormat::Csv);
        assert_eq!(MeshFormat::resolve(None, "mesh").unwrap(), MeshFormat::Obj);
        assert!(MeshFormat::resolve(Some("stl"), "a").is_err());
    }
}
