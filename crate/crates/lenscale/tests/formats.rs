use lenscale::io::{pgm, read_field, vtk, write_field, Field};

#[test]
fn raster_written_by_run_reads_back_in_grid_order() {
    let dir = tempfile::tempdir().unwrap();
    let (nx, ny) = (7, 5);
    let vals: Vec<f64> = (0..nx * ny).map(|e| ((e % nx) as f64 + 0.1 * (e / nx) as f64) / 8.0).collect();
    let f = Field::new([nx, ny, 1], vals.clone()).unwrap();
    let path = write_field(&dir.path().join("d"), &f).unwrap();
    assert_eq!(path.extension().unwrap(), "pgm");
    let g = read_field(&path).unwrap();
    assert_eq!(g.dims, [nx, ny, 1]);
    for (a, b) in vals.iter().zip(&g.values) {
        assert!((a - b).abs() < 1e-4);
    }
    // The first sample row is the top of the domain.
    let bytes = std::fs::read(&path).unwrap();
    let header_len = bytes.len() - 2 * nx * ny;
    let first = u16::from_be_bytes([bytes[header_len], bytes[header_len + 1]]);
    assert_eq!(first, (vals[nx * (ny - 1)] * 65535.0).round() as u16);
}

#[test]
fn volumes_use_vtk() {
    let dir = tempfile::tempdir().unwrap();
    let f = Field::new([3, 2, 2], (0..12).map(|i| i as f64 / 11.0).collect()).unwrap();
    let path = write_field(&dir.path().join("v"), &f).unwrap();
    assert_eq!(path.extension().unwrap(), "vtk");
    assert_eq!(read_field(&path).unwrap(), f);
    assert_eq!(vtk::decode(&vtk::encode(&f, "x")).unwrap(), f);
}

#[test]
fn values_are_clamped_to_unit_interval() {
    let f = Field::new([2, 1, 1], vec![-0.5, 1.5]).unwrap();
    assert_eq!(pgm::decode(&pgm::encode(&f)).unwrap().values, vec![0.0, 1.0]);
    assert_eq!(vtk::decode(&vtk::encode(&f, "x")).unwrap().values, vec![0.0, 1.0]);
}

#[test]
fn unknown_extension_is_a_config_error() {
    let e = read_field(std::path::Path::new("design.png")).unwrap_err();
    assert_eq!(e.exit_code(), 2);
    let e = read_field(std::path::Path::new("/nonexistent/design.pgm")).unwrap_err();
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn mismatched_field_is_rejected() {
    assert!(Field::new([2, 2, 1], vec![0.0; 3]).is_err());
    assert!(Field::new([0, 2, 1], vec![]).is_err());
}
