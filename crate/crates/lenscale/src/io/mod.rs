//! Density rasters, volume files and the convergence log.

pub mod history;
pub mod pgm;
pub mod vtk;

use std::path::Path;

use crate::error::{Error, Result};

/// A scalar field on an element grid, x fastest, then y, then z.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub dims: [usize; 3],
    pub values: Vec<f64>,
}

impl Field {
    pub fn new(dims: [usize; 3], values: Vec<f64>) -> Result<Self> {
        if dims.contains(&0) || dims.iter().product::<usize>() != values.len() {
            return Err(Error::config("field", format!("{} values do not fill a {:?} grid", values.len(), dims)));
        }
        Ok(Self { dims, values })
    }

    pub fn is_2d(&self) -> bool {
        self.dims[2] == 1
    }
}

/// Reads a raster (`.pgm`) or volume (`.vtk`) file, chosen by extension.
pub fn read_field(path: &Path) -> Result<Field> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("pgm") => pgm::read(path),
        Some("vtk") => vtk::read(path),
        _ => Err(Error::format(path, "expected a .pgm or .vtk file")),
    }
}

/// Writes a PGM for 2D fields and a VTK file otherwise. Returns the path
/// written, with the extension chosen here.
pub fn write_field(stem: &Path, field: &Field) -> Result<std::path::PathBuf> {
    if field.is_2d() {
        let path = stem.with_extension("pgm");
        pgm::write(&path, field)?;
        Ok(path)
    } else {
        let path = stem.with_extension("vtk");
        vtk::write(&path, field, "density")?;
        Ok(path)
    }
}
