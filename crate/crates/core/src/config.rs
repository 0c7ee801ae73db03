//! Run configuration and its line-oriented text format.
//!
//! ```text
//! # comment
//! section.key = value   # trailing comment
//! ```
//!
//! Keys are case-sensitive. Numbers use `.` as decimal point and may use
//! scientific notation; booleans are `true`/`false` (or `on`/`off`).
//! Unknown or repeated keys are errors, as is setting both `solver.dt` and
//! `solver.cfl`. Every key has a default, so an empty file describes the
//! reference run.
//!
//! | key | default |
//! |-----|---------|
//! | `physics.N0` | 0.2 |
//! | `physics.alpha` | 7.2973525693e-3 |
//! | `physics.a` | 0 |
//! | `physics.eps_field` | 1e-8 |
//! | `grid.half_width` | 24000 |
//! | `grid.cells` | 2048 |
//! | `solver.cfl` / `solver.dt` | cfl 0.4 |
//! | `solver.t_end` | 1500 |
//! | `solver.displacement_terms` | true |
//! | `solver.paper_ampere_sign` | false |
//! | `solver.bohm` | false |
//! | `solver.nu_h` | 0 |
//! | `ic.kind` | paper-gaussian (`sine`, `uniform`, `file`) |
//! | `ic.L` | 6000 |
//! | `ic.base_e`, `ic.base_p` | 1.01, 0.01 |
//! | `ic.amplitude` | 2 |
//! | `ic.epsilon`, `ic.mode` | 1e-6, 1 |
//! | `ic.p_e`, `ic.p_p` | 0, 0 |
//! | `ic.path` | unset (required for `file`) |
//! | `output.dir` | output |
//! | `output.series_every` | 1 |
//! | `output.snapshot_every` | 16 (0: first and last only) |

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::physics::{si, PhysicsParams, DEFAULT_EPS_FIELD};
use crate::solver::{InitialCondition, SolverOptions, TimeStep};

#[derive(Debug, Clone, PartialEq)]
pub struct PhysicsConfig {
    pub n0: f64,
    pub alpha: f64,
    pub a: f64,
    pub eps_field: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub half_width: f64,
    pub cells: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IcKind {
    PaperGaussian,
    Sine,
    Uniform,
    File,
}

impl IcKind {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "paper-gaussian" => Some(IcKind::PaperGaussian),
            "sine" => Some(IcKind::Sine),
            "uniform" => Some(IcKind::Uniform),
            "file" => Some(IcKind::File),
            _ => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            IcKind::PaperGaussian => "paper-gaussian",
            IcKind::Sine => "sine",
            IcKind::Uniform => "uniform",
            IcKind::File => "file",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IcConfig {
    pub kind: IcKind,
    pub width: f64,
    pub base_e: f64,
    pub base_p: f64,
    pub amplitude: f64,
    pub epsilon: f64,
    pub mode: u32,
    pub p_e: f64,
    pub p_p: f64,
    pub path: Option<PathBuf>,
}

impl IcConfig {
    pub fn initial_condition(&self) -> Result<InitialCondition> {
        Ok(match self.kind {
            IcKind::PaperGaussian => InitialCondition::PaperGaussian {
                base_e: self.base_e,
                base_p: self.base_p,
                amplitude: self.amplitude,
                width: self.width,
            },
            IcKind::Sine => InitialCondition::Sine {
                base_e: self.base_e,
                base_p: self.base_p,
                epsilon: self.epsilon,
                mode: self.mode,
            },
            IcKind::Uniform => InitialCondition::Uniform {
                base_e: self.base_e,
                base_p: self.base_p,
            },
            IcKind::File => InitialCondition::File(self.path.clone().ok_or_else(|| {
                Error::InvalidParameter("ic.kind = file requires ic.path".into())
            })?),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub series_every: usize,
    /// Zero writes only the first and last snapshot.
    pub snapshot_every: usize,
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub physics: PhysicsConfig,
    pub grid: GridConfig,
    pub solver: SolverOptions,
    pub ic: IcConfig,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            physics: PhysicsConfig {
                n0: 0.2,
                alpha: si::FINE_STRUCTURE,
                a: 0.0,
                eps_field: DEFAULT_EPS_FIELD,
            },
            grid: GridConfig {
                half_width: 24000.0,
                cells: 2048,
            },
            solver: SolverOptions::default(),
            ic: IcConfig {
                kind: IcKind::PaperGaussian,
                width: 6000.0,
                base_e: 1.01,
                base_p: 0.01,
                amplitude: 2.0,
                epsilon: 1e-6,
                mode: 1,
                p_e: 0.0,
                p_p: 0.0,
                path: None,
            },
            output: OutputConfig {
                dir: PathBuf::from("output"),
                series_every: 1,
                snapshot_every: 16,
            },
        }
    }
}

impl RunConfig {
    pub fn physics_params(&self) -> Result<PhysicsParams> {
        let p = &self.physics;
        PhysicsParams::new(p.n0, p.alpha, p.a, p.eps_field)
    }

    pub fn grid(&self) -> Result<Grid1D> {
        Grid1D::new(self.grid.half_width, self.grid.cells)
    }

    /// Checks every numeric precondition that can be checked before the
    /// initial state is built.
    pub fn validate(&self) -> Result<()> {
        self.physics_params()?;
        let grid = self.grid()?;
        self.solver.validate(&grid)?;
        let ic = &self.ic;
        for (name, v) in [("ic.base_e", ic.base_e), ("ic.base_p", ic.base_p)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be > 0, got {v}"
                )));
            }
        }
        for (name, v) in [
            ("ic.amplitude", ic.amplitude),
            ("ic.epsilon", ic.epsilon),
            ("ic.p_e", ic.p_e),
            ("ic.p_p", ic.p_p),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite, got {v}"
                )));
            }
        }
        if !(ic.width > 0.0 && ic.width.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "ic.L must be > 0, got {}",
                ic.width
            )));
        }
        if ic.mode == 0 {
            return Err(Error::InvalidParameter("ic.mode must be >= 1".into()));
        }
        ic.initial_condition()?;
        if self.output.series_every == 0 {
            return Err(Error::InvalidParameter(
                "output.series_every must be >= 1".into(),
            ));
        }
        Ok(())
    }

    /// Serializes every key, with numbers written so that parsing the text
    /// back yields bit-identical values.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let p = &self.physics;
        let _ = writeln!(s, "physics.N0 = {:?}", p.n0);
        let _ = writeln!(s, "physics.alpha = {:?}", p.alpha);
        let _ = writeln!(s, "physics.a = {:?}", p.a);
        let _ = writeln!(s, "physics.eps_field = {:?}", p.eps_field);
        let _ = writeln!(s, "grid.half_width = {:?}", self.grid.half_width);
        let _ = writeln!(s, "grid.cells = {}", self.grid.cells);
        let so = &self.solver;
        match so.step {
            TimeStep::Cfl(c) => {
                let _ = writeln!(s, "solver.cfl = {c:?}");
            }
            TimeStep::Dt(dt) => {
                let _ = writeln!(s, "solver.dt = {dt:?}");
            }
        }
        let _ = writeln!(s, "solver.t_end = {:?}", so.t_end);
        let _ = writeln!(s, "solver.displacement_terms = {}", so.displacement_terms);
        let _ = writeln!(s, "solver.paper_ampere_sign = {}", so.paper_ampere_sign);
        let _ = writeln!(s, "solver.bohm = {}", so.bohm);
        let _ = writeln!(s, "solver.nu_h = {:?}", so.nu_h);
        let ic = &self.ic;
        let _ = writeln!(s, "ic.kind = {}", ic.kind.name());
        let _ = writeln!(s, "ic.L = {:?}", ic.width);
        let _ = writeln!(s, "ic.base_e = {:?}", ic.base_e);
        let _ = writeln!(s, "ic.base_p = {:?}", ic.base_p);
        let _ = writeln!(s, "ic.amplitude = {:?}", ic.amplitude);
        let _ = writeln!(s, "ic.epsilon = {:?}", ic.epsilon);
        let _ = writeln!(s, "ic.mode = {}", ic.mode);
        let _ = writeln!(s, "ic.p_e = {:?}", ic.p_e);
        let _ = writeln!(s, "ic.p_p = {:?}", ic.p_p);
        if let Some(path) = &ic.path {
            let _ = writeln!(s, "ic.path = {}", path.display());
        }
        let _ = writeln!(s, "output.dir = {}", self.output.dir.display());
        let _ = writeln!(s, "output.series_every = {}", self.output.series_every);
        let _ = writeln!(s, "output.snapshot_every = {}", self.output.snapshot_every);
        s
    }
}

fn parse_f64(line: usize, key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| Error::config(line, format!("{key}: expected a number, got `{v}`")))
}

fn parse_usize(line: usize, key: &str, v: &str) -> Result<usize> {
    v.parse::<usize>().map_err(|_| {
        Error::config(
            line,
            format!("{key}: expected a non-negative integer, got `{v}`"),
        )
    })
}

fn parse_bool(line: usize, key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "on" => Ok(true),
        "false" | "off" => Ok(false),
        _ => Err(Error::config(
            line,
            format!("{key}: expected true or false, got `{v}`"),
        )),
    }
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut seen = HashSet::new();
    let mut dt_line = None;
    let mut cfl_line = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| {
            Error::config(
                line,
                format!("expected `section.key = value`, got `{content}`"),
            )
        })?;
        let (key, value) = (key.trim(), value.trim());
        if !key.contains('.') {
            return Err(Error::config(line, format!("key `{key}` has no section")));
        }
        if value.is_empty() {
            return Err(Error::config(line, format!("{key}: missing value")));
        }
        if !seen.insert(key.to_string()) {
            return Err(Error::config(line, format!("{key} is set twice")));
        }
        match key {
            "physics.N0" => cfg.physics.n0 = parse_f64(line, key, value)?,
            "physics.alpha" => cfg.physics.alpha = parse_f64(line, key, value)?,
            "physics.a" => cfg.physics.a = parse_f64(line, key, value)?,
            "physics.eps_field" => cfg.physics.eps_field = parse_f64(line, key, value)?,
            "grid.half_width" => cfg.grid.half_width = parse_f64(line, key, value)?,
            "grid.cells" => cfg.grid.cells = parse_usize(line, key, value)?,
            "solver.cfl" => {
                cfl_line = Some(line);
                cfg.solver.step = TimeStep::Cfl(parse_f64(line, key, value)?);
            }
            "solver.dt" => {
                dt_line = Some(line);
                cfg.solver.step = TimeStep::Dt(parse_f64(line, key, value)?);
            }
            "solver.t_end" => cfg.solver.t_end = parse_f64(line, key, value)?,
            "solver.displacement_terms" => {
                cfg.solver.displacement_terms = parse_bool(line, key, value)?
            }
            "solver.paper_ampere_sign" => {
                cfg.solver.paper_ampere_sign = parse_bool(line, key, value)?
            }
            "solver.bohm" => cfg.solver.bohm = parse_bool(line, key, value)?,
            "solver.nu_h" => cfg.solver.nu_h = parse_f64(line, key, value)?,
            "ic.kind" => {
                cfg.ic.kind = IcKind::parse(value)
                    .ok_or_else(|| Error::config(line, format!("unknown ic.kind `{value}`")))?
            }
            "ic.L" => cfg.ic.width = parse_f64(line, key, value)?,
            "ic.base_e" => cfg.ic.base_e = parse_f64(line, key, value)?,
            "ic.base_p" => cfg.ic.base_p = parse_f64(line, key, value)?,
            "ic.amplitude" => cfg.ic.amplitude = parse_f64(line, key, value)?,
            "ic.epsilon" => cfg.ic.epsilon = parse_f64(line, key, value)?,
            "ic.mode" => {
                cfg.ic.mode = value.parse().map_err(|_| {
                    Error::config(line, format!("ic.mode: expected an integer, got `{value}`"))
                })?
            }
            "ic.p_e" => cfg.ic.p_e = parse_f64(line, key, value)?,
            "ic.p_p" => cfg.ic.p_p = parse_f64(line, key, value)?,
            "ic.path" => cfg.ic.path = Some(PathBuf::from(value)),
            "output.dir" => cfg.output.dir = PathBuf::from(value),
            "output.series_every" => cfg.output.series_every = parse_usize(line, key, value)?,
            "output.snapshot_every" => cfg.output.snapshot_every = parse_usize(line, key, value)?,
            _ => return Err(Error::config(line, format!("unknown key `{key}`"))),
        }
    }

    if let (Some(a), Some(b)) = (dt_line, cfl_line) {
        return Err(Error::config(
            a.max(b),
            "solver.dt and solver.cfl are mutually exclusive",
        ));
    }
    cfg.validate().map_err(|e| match e {
        Error::InvalidParameter(msg) => Error::config(last_line, msg),
        other => other,
    })?;
    Ok(cfg)
}
