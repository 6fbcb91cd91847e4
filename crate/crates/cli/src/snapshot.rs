//! Plot-grid sampling of discrete fields.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use mbnls_core::discretization::DiscreteField;

/// Plot intervals per direction; rows carry both endpoints, so a direction
/// contributes 201 sample coordinates.
const PLOT_INTERVALS: usize = 200;

/// Writes `snap_t{t:.6}.csv` under `dir` and returns the path. The grid is
/// uniform over the unit domain and independent of the FE mesh; values come
/// from the field's own basis, so curved (P2/P3/Hermite) profiles are exact.
pub fn write_snapshot(field: &DiscreteField, t: f64, dir: &Path) -> io::Result<PathBuf> {
    let path = dir.join(format!("snap_t{t:.6}.csv"));
    let file = fs::File::create(&path)?;
    let mut w = BufWriter::new(file);
    let dim = field.space().mesh().dim();
    let sample = |j: usize| j as f64 / PLOT_INTERVALS as f64;
    let eval = |y| {
        field
            .eval(y)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))
    };
    if dim == 1 {
        writeln!(w, "t,y1,re,im")?;
        for j in 0..=PLOT_INTERVALS {
            let y1 = sample(j);
            let v = eval([y1, 0.0])?;
            writeln!(w, "{t:.6},{y1:.6},{:e},{:e}", v.re, v.im)?;
        }
    } else {
        writeln!(w, "t,y1,y2,re,im")?;
        for j2 in 0..=PLOT_INTERVALS {
            let y2 = sample(j2);
            for j1 in 0..=PLOT_INTERVALS {
                let y1 = sample(j1);
                let v = eval([y1, y2])?;
                writeln!(w, "{t:.6},{y1:.6},{y2:.6},{:e},{:e}", v.re, v.im)?;
            }
        }
    }
    w.flush()?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mbnls_core::discretization::{BasisKind, DiscreteField, Space};

    #[test]
    fn one_dimensional_snapshot_has_201_rows_and_zero_values() {
        let space = Space::build(1, 8, BasisKind::LagrangeP1).unwrap();
        let field = DiscreteField::zeros(&space);
        let dir = tempfile::tempdir().unwrap();
        let path = write_snapshot(&field, 0.25, dir.path()).unwrap();
        assert_eq!(path.file_name().unwrap(), "snap_t0.250000.csv");
        let text = fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,y1,re,im"));
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 201);
        assert!(rows.iter().all(|r| r.ends_with(",0e0,0e0")));
        assert!(rows[0].starts_with("0.250000,0.000000,"));
        assert!(rows[200].starts_with("0.250000,1.000000,"));
    }

    #[test]
    fn two_dimensional_snapshot_covers_the_square() {
        let space = Space::build(2, 4, BasisKind::LagrangeP1).unwrap();
        let field = DiscreteField::zeros(&space);
        let dir = tempfile::tempdir().unwrap();
        let path = write_snapshot(&field, 0.0, dir.path()).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,y1,y2,re,im"));
        assert_eq!(lines.count(), 201 * 201);
    }
}
