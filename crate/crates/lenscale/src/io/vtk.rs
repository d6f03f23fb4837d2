//! Legacy structured-points volume files. Points sit at element centroids,
//! so the point dimensions equal the element counts.

use std::fmt::Write as _;
use std::path::Path;

use super::Field;
use crate::error::{Error, Result};

pub fn encode(field: &Field, name: &str) -> String {
    let [nx, ny, nz] = field.dims;
    let mut s = String::with_capacity(16 * field.values.len() + 256);
    s.push_str("# vtk DataFile Version 3.0\n");
    let _ = writeln!(s, "lenscale {name}");
    s.push_str("ASCII\nDATASET STRUCTURED_POINTS\n");
    let _ = writeln!(s, "DIMENSIONS {nx} {ny} {nz}");
    s.push_str("ORIGIN 0.5 0.5 0.5\nSPACING 1 1 1\n");
    let _ = writeln!(s, "POINT_DATA {}", field.values.len());
    let _ = writeln!(s, "SCALARS {name} double 1");
    s.push_str("LOOKUP_TABLE default\n");
    for row in field.values.chunks(nx) {
        let line: Vec<String> = row.iter().map(|v| format!("{}", v.clamp(0.0, 1.0))).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

pub fn write(path: &Path, field: &Field, name: &str) -> Result<()> {
    std::fs::write(path, encode(field, name)).map_err(|e| Error::io(path, e))
}

pub fn decode(text: &str) -> std::result::Result<Field, String> {
    let mut lines = text.lines();
    if !lines.next().is_some_and(|l| l.starts_with("# vtk DataFile")) {
        return Err("missing `# vtk DataFile` line".into());
    }
    lines.next();
    if lines.next().map(str::trim) != Some("ASCII") {
        return Err("only ASCII files are supported".into());
    }
    let mut dims = None;
    let mut count = None;
    for line in lines.by_ref() {
        let mut t = line.split_whitespace();
        match t.next() {
            Some("DATASET") if t.next() != Some("STRUCTURED_POINTS") => {
                return Err("only STRUCTURED_POINTS datasets are supported".into());
            }
            Some("DIMENSIONS") => {
                let d: Vec<usize> = t
                    .map(|x| x.parse().map_err(|e| format!("bad dimension `{x}`: {e}")))
                    .collect::<std::result::Result<_, String>>()?;
                if d.len() != 3 {
                    return Err("DIMENSIONS needs three values".into());
                }
                dims = Some([d[0], d[1], d[2]]);
            }
            Some("POINT_DATA") => {
                let n = t.next().ok_or("POINT_DATA needs a count")?;
                count = Some(n.parse::<usize>().map_err(|e| format!("bad count `{n}`: {e}"))?);
            }
            Some("LOOKUP_TABLE") => break,
            _ => {}
        }
    }
    let dims = dims.ok_or("missing DIMENSIONS")?;
    let count = count.ok_or("missing POINT_DATA")?;
    let values: Vec<f64> = lines
        .flat_map(str::split_whitespace)
        .take(count)
        .map(|x| x.parse::<f64>().map_err(|e| format!("bad scalar `{x}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    if values.len() != count {
        return Err(format!("expected {count} scalars, found {}", values.len()));
    }
    Field::new(dims, values).map_err(|e| e.to_string())
}

pub fn read(path: &Path) -> Result<Field> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    decode(&text).map_err(|m| Error::format(path, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_round_trip() {
        let vals: Vec<f64> = (0..24).map(|i| (i as f64 * 0.37).sin().abs()).collect();
        let f = Field::new([4, 3, 2], vals).unwrap();
        let g = decode(&encode(&f, "density")).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn header_is_legacy_structured_points() {
        let f = Field::new([2, 1, 1], vec![0.0, 1.0]).unwrap();
        let s = encode(&f, "rho");
        assert!(s.contains("DATASET STRUCTURED_POINTS\nDIMENSIONS 2 1 1\n"));
        assert!(s.contains("POINT_DATA 2\nSCALARS rho double 1\nLOOKUP_TABLE default\n0 1\n"));
    }

    #[test]
    fn rejects_short_data() {
        let f = Field::new([2, 2, 1], vec![0.0; 4]).unwrap();
        let s = encode(&f, "d").replace("0 0\n0 0\n", "0 0\n");
        assert!(decode(&s).is_err());
        assert!(decode("not vtk").is_err());
    }
}
