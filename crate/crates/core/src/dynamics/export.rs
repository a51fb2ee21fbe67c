use std::io::Write;

use super::{DynamicsError, Trajectory};
use crate::poisson::Layout;
use crate::shape::Shape;

/// Column names: `t`, the phase-space coordinates, `h, d, k`, `j`, `C1..C3`.
pub fn csv_header(shape: Shape) -> Vec<String> {
    let mut cols = vec!["t".to_string()];
    cols.extend(Layout::new(shape).names());
    cols.extend(["h", "d", "k"].map(String::from));
    if shape.spin_len() == 1 {
        cols.push("j".into());
    } else {
        cols.extend((1..=3).map(|a| format!("j_{a}")));
    }
    cols.extend(["C1", "C2", "C3"].map(String::from));
    cols
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes the trajectory as CSV with 17 significant digits.
pub fn write_csv<W: Write>(traj: &Trajectory, out: W) -> Result<(), DynamicsError> {
    let err = |e: csv::Error| DynamicsError::Export(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    let Some(first) = traj.states.first() else {
        return Ok(());
    };
    w.write_record(csv_header(first.shape)).map_err(err)?;
    for ((t, s), (g, c)) in traj
        .times
        .iter()
        .zip(&traj.states)
        .zip(traj.generators.iter().zip(&traj.casimirs))
    {
        let mut row = vec![fmt17(*t)];
        row.extend(s.to_flat().into_iter().map(fmt17));
        row.extend([g.h, g.d, g.k].into_iter().map(fmt17));
        row.extend(g.j.iter().copied().map(fmt17));
        row.extend(c.as_array().into_iter().map(fmt17));
        w.write_record(&row).map_err(err)?;
    }
    w.flush()
        .map_err(|e| DynamicsError::Export(e.to_string()))?;
    Ok(())
}
