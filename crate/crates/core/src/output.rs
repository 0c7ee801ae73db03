//! CSV output: the diagnostics series, field snapshots and the run manifest.
//!
//! Numbers are written with Rust's shortest round-trip exponent format, so
//! parsing a value back gives the identical `f64`. Lines end in `\n`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::diagnostics::SeriesRecord;
use crate::error::{Error, Result};
use crate::grid::Field;
use crate::solver::SimState;

pub const SERIES_FILE: &str = "series.csv";
pub const MANIFEST_FILE: &str = "manifest.txt";
pub const SNAPSHOT_COLUMNS: [&str; 6] = ["x", "E", "n_e", "n_p", "p_e", "p_p"];

pub fn snapshot_file_name(index: usize) -> String {
    format!("fields_{index:06}.csv")
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

/// Appends series rows to `series.csv` as they are produced.
pub struct SeriesWriter {
    path: PathBuf,
    out: BufWriter<File>,
}

impl SeriesWriter {
    pub fn create(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let mut out = create(&path)?;
        writeln!(out, "{}", SeriesRecord::COLUMNS.join(",")).map_err(|e| Error::io(&path, e))?;
        Ok(Self { path, out })
    }

    pub fn append(&mut self, record: &SeriesRecord) -> Result<()> {
        let row: Vec<String> = record.values().iter().map(|v| format!("{v:e}")).collect();
        writeln!(self.out, "{}", row.join(",")).map_err(|e| Error::io(&self.path, e))
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush().map_err(|e| Error::io(&self.path, e))
    }
}

pub fn write_series(records: &[SeriesRecord], path: impl AsRef<Path>) -> Result<()> {
    let mut w = SeriesWriter::create(path.as_ref())?;
    for r in records {
        w.append(r)?;
    }
    w.finish()
}

/// Writes `fields_NNNNNN.csv` into `dir` and returns its path.
pub fn write_snapshot(state: &SimState, dir: impl AsRef<Path>, index: usize) -> Result<PathBuf> {
    let path = dir.as_ref().join(snapshot_file_name(index));
    let mut out = create(&path)?;
    let io = |e| Error::io(&path, e);
    writeln!(out, "# t = {:e}", state.t).map_err(io)?;
    writeln!(out, "{}", SNAPSHOT_COLUMNS.join(",")).map_err(io)?;
    for j in 0..state.grid.cells() {
        writeln!(
            out,
            "{:e},{:e},{:e},{:e},{:e},{:e}",
            state.grid.x(j),
            state.e[j],
            state.n_e[j],
            state.n_p[j],
            state.p_e[j],
            state.p_p[j]
        )
        .map_err(io)?;
    }
    out.flush().map_err(io)?;
    Ok(path)
}

/// Columns of a snapshot file.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub x: Field,
    pub e: Field,
    pub n_e: Field,
    pub n_p: Field,
    pub p_e: Field,
    pub p_p: Field,
}

pub fn read_snapshot(path: impl AsRef<Path>) -> Result<Snapshot> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let bad = |line: usize, msg: String| {
        Error::InvalidParameter(format!("{}:{line}: {msg}", path.display()))
    };
    let mut t = 0.0;
    let mut cols: [Vec<f64>; 6] = Default::default();
    let mut header_seen = false;
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("t =") {
                t = v
                    .trim()
                    .parse()
                    .map_err(|_| bad(lineno, format!("bad time `{v}`")))?;
            }
            continue;
        }
        if !header_seen {
            if line != SNAPSHOT_COLUMNS.join(",") {
                return Err(bad(lineno, format!("unexpected header `{line}`")));
            }
            header_seen = true;
            continue;
        }
        let values: Vec<&str> = line.split(',').collect();
        if values.len() != 6 {
            return Err(bad(
                lineno,
                format!("expected 6 columns, got {}", values.len()),
            ));
        }
        for (col, v) in cols.iter_mut().zip(values) {
            col.push(
                v.trim()
                    .parse()
                    .map_err(|_| bad(lineno, format!("bad number `{v}`")))?,
            );
        }
    }
    let [x, e, n_e, n_p, p_e, p_p] = cols.map(Field::from);
    Ok(Snapshot {
        t,
        x,
        e,
        n_e,
        n_p,
        p_e,
        p_p,
    })
}

/// Hex SHA-256 of a file's contents.
pub fn file_digest(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Writes `manifest.txt`: status comments, the resolved configuration and a
/// digest of each listed output file. The whole file parses as a config.
pub fn write_manifest(
    dir: impl AsRef<Path>,
    config: &RunConfig,
    status: &str,
    outputs: &[PathBuf],
) -> Result<PathBuf> {
    let dir = dir.as_ref();
    let path = dir.join(MANIFEST_FILE);
    let mut text = String::new();
    text.push_str(&format!("# pairfluid {}\n", env!("CARGO_PKG_VERSION")));
    text.push_str("# format = 1\n");
    for line in status.lines() {
        text.push_str(&format!("# status: {line}\n"));
    }
    text.push_str("# resolved configuration\n");
    text.push_str(&config.to_text());
    text.push_str("# output digests (sha256)\n");
    for out in outputs {
        let name = out
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        text.push_str(&format!("# {} {}\n", file_digest(out)?, name));
    }
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1D;
    use crate::physics::PhysicsParams;
    use crate::solver::{initial_condition, InitialCondition};

    #[test]
    fn header_only_series() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(SERIES_FILE);
        write_series(&[], &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            "t,field_energy,kinetic_e,kinetic_p,total_energy,total_energy_sub,delta_pairs,max_abs_E,max_gamma,gauss_residual,balance_rhs\n"
        );
    }

    #[test]
    fn equilibrium_row() {
        let dir = tempfile::tempdir().unwrap();
        let grid = Grid1D::new(100.0, 64).unwrap();
        let params = PhysicsParams::reference();
        let ic = InitialCondition::Uniform {
            base_e: 1.01,
            base_p: 0.01,
        };
        let s = initial_condition(&ic, &grid, &params, 0.0, 0.0).unwrap();
        let n0 = crate::diagnostics::electron_count(&s);
        let rec = SeriesRecord::measure(&s, &params, n0);
        let path = dir.path().join(SERIES_FILE);
        write_series(&[rec], &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let row: Vec<f64> = text
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(row.len(), 11);
        assert_eq!(row[6], 0.0);
        assert!(row[9] <= 1e-12);
        assert_eq!(row, rec.values());
        assert!(!text.contains('\r'));
    }

    #[test]
    fn snapshot_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let grid = Grid1D::new(24000.0, 256).unwrap();
        let params = PhysicsParams::reference();
        let mut s = initial_condition(
            &InitialCondition::paper_gaussian(),
            &grid,
            &params,
            0.0,
            0.0,
        )
        .unwrap();
        s.t = 12.5;
        s.p_e = Field::from_fn(&grid, |x| (x / 3000.0).sin() / 3.0);
        let path = write_snapshot(&s, dir.path(), 42).unwrap();
        assert!(path.ends_with("fields_000042.csv"));
        let snap = read_snapshot(&path).unwrap();
        assert_eq!(snap.t, 12.5);
        assert_eq!(snap.e, s.e);
        assert_eq!(snap.p_e, s.p_e);
        assert_eq!(snap.x, grid.coordinates());
    }

    #[test]
    fn malformed_snapshot_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "x,E\n1,2\n").unwrap();
        assert!(read_snapshot(&path).is_err());
        assert!(matches!(
            read_snapshot(dir.path().join("missing.csv")),
            Err(Error::Io { .. })
        ));
    }
}
