//! Run driver: builds the initial state, steps it to `t_end` and hands
//! diagnostics and snapshots to an [`Observer`].

use std::path::PathBuf;

use crate::config::RunConfig;
use crate::diagnostics::{electron_count, SeriesRecord};
use crate::error::{Error, Result};
use crate::output::{write_snapshot, SeriesWriter, SERIES_FILE};
use crate::solver::{initial_condition, rk4_step, SimState};

/// Receives run output as it is produced.
pub trait Observer {
    fn record(&mut self, record: &SeriesRecord) -> Result<()>;
    fn snapshot(&mut self, step: usize, state: &SimState) -> Result<()>;
}

/// How a run ended. Configuration and I/O failures are returned as `Err`
/// from [`run_with`]; a numerical breakdown ends the run early and is
/// reported here together with the last valid state.
#[derive(Debug)]
pub struct RunEnd {
    pub state: SimState,
    pub steps: usize,
    pub breakdown: Option<Error>,
}

/// Builds the `t = 0` state of a configuration.
pub fn initial_state(config: &RunConfig) -> Result<SimState> {
    config.validate()?;
    let params = config.physics_params()?;
    let grid = config.grid()?;
    let ic = config.ic.initial_condition()?;
    initial_condition(&ic, &grid, &params, config.ic.p_e, config.ic.p_p)
}

/// Runs `config`, emitting a record every `series_every` steps and a
/// snapshot every `snapshot_every` steps; both are always emitted at the
/// first and last step.
pub fn run_with(config: &RunConfig, observer: &mut dyn Observer) -> Result<RunEnd> {
    let params = config.physics_params()?;
    let mut state = initial_state(config)?;
    let initial_pairs = electron_count(&state);
    let (steps, dt) = config.solver.schedule(&state.grid);
    let series_every = config.output.series_every;
    let snapshot_every = config.output.snapshot_every;

    observer.record(&SeriesRecord::measure(&state, &params, initial_pairs))?;
    observer.snapshot(0, &state)?;

    for step in 1..=steps {
        match rk4_step(&state, dt, &params, &config.solver) {
            Ok(mut next) => {
                next.t = step as f64 * dt;
                state = next;
            }
            Err(err @ Error::NumericalBreakdown { .. }) => {
                let last = step - 1;
                if last % series_every != 0 {
                    observer.record(&SeriesRecord::measure(&state, &params, initial_pairs))?;
                }
                if snapshot_every == 0 || last % snapshot_every != 0 {
                    observer.snapshot(last, &state)?;
                }
                return Ok(RunEnd {
                    state,
                    steps: last,
                    breakdown: Some(err),
                });
            }
            Err(err) => return Err(err),
        }
        let last = step == steps;
        if last || step % series_every == 0 {
            observer.record(&SeriesRecord::measure(&state, &params, initial_pairs))?;
        }
        let snap_due = snapshot_every != 0 && step % snapshot_every == 0;
        if last || snap_due {
            observer.snapshot(step, &state)?;
        }
    }
    Ok(RunEnd {
        state,
        steps,
        breakdown: None,
    })
}

/// Collects everything in memory.
#[derive(Debug, Default)]
pub struct MemoryObserver {
    pub records: Vec<SeriesRecord>,
    pub snapshots: Vec<(usize, SimState)>,
}

impl Observer for MemoryObserver {
    fn record(&mut self, record: &SeriesRecord) -> Result<()> {
        self.records.push(*record);
        Ok(())
    }

    fn snapshot(&mut self, step: usize, state: &SimState) -> Result<()> {
        self.snapshots.push((step, state.clone()));
        Ok(())
    }
}

#[derive(Debug)]
pub struct RunOutput {
    pub final_state: SimState,
    pub records: Vec<SeriesRecord>,
    pub snapshots: Vec<(usize, SimState)>,
    pub breakdown: Option<Error>,
}

/// Runs `config` entirely in memory.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    let mut obs = MemoryObserver::default();
    let end = run_with(config, &mut obs)?;
    Ok(RunOutput {
        final_state: end.state,
        records: obs.records,
        snapshots: obs.snapshots,
        breakdown: end.breakdown,
    })
}

/// Streams the series and snapshots into `output.dir`.
pub struct FileObserver {
    dir: PathBuf,
    series: Option<SeriesWriter>,
    written: Vec<PathBuf>,
}

impl FileObserver {
    pub fn create(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        let series_path = dir.join(SERIES_FILE);
        let series = SeriesWriter::create(&series_path)?;
        Ok(Self {
            dir,
            series: Some(series),
            written: vec![series_path],
        })
    }

    /// Flushes the series and returns every file written, series first.
    pub fn finish(mut self) -> Result<Vec<PathBuf>> {
        if let Some(series) = self.series.take() {
            series.finish()?;
        }
        Ok(self.written)
    }
}

impl Observer for FileObserver {
    fn record(&mut self, record: &SeriesRecord) -> Result<()> {
        match self.series.as_mut() {
            Some(s) => s.append(record),
            None => Ok(()),
        }
    }

    fn snapshot(&mut self, step: usize, state: &SimState) -> Result<()> {
        let path = write_snapshot(state, &self.dir, step)?;
        self.written.push(path);
        Ok(())
    }
}
