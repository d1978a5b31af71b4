//! Scenario files: one JSON object, every field optional, unknown keys
//! rejected.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use relkvn::flow::{read_snapshot, GaussianSpec, GridAxis, PhaseGrid, PhaseSpaceState};
use relkvn::generators::{Family, FieldSpec, ForceField};
use relkvn::scalar::{ProbeConfig, Var};
use relkvn::series::DEFAULT_SERIES_ORDER;
use relkvn::Representation;
use serde::{Deserialize, Serialize};

use crate::run_report::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Scenario {
    pub mass: f64,
    pub field: FieldSpec,
    pub state: Option<StateSpec>,
    pub grid: Option<GridSpec>,
    pub integrator: IntegratorSpec,
    pub boosts: Vec<BoostSpec>,
    pub trajectory: Option<TrajectorySpec>,
    pub series: SeriesSpec,
    pub probes: ProbeSpec,
    pub tolerances: Tolerances,
    pub output: OutputSpec,
    pub seed: u64,
    /// Negative control: generator family to corrupt in algebra checks.
    pub mutate: Option<Family>,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            mass: 1.0,
            field: FieldSpec::default(),
            state: None,
            grid: None,
            integrator: IntegratorSpec::default(),
            boosts: Vec::new(),
            trajectory: None,
            series: SeriesSpec::default(),
            probes: ProbeSpec::default(),
            tolerances: Tolerances::default(),
            output: OutputSpec::default(),
            seed: 0,
            mutate: None,
        }
    }
}

/// Gaussian over the grid axes, or a snapshot file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StateSpec {
    pub representation: Option<Representation>,
    pub center: Vec<f64>,
    pub width: Vec<f64>,
    pub snapshot: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    pub axes: Vec<AxisSpec>,
    /// Values of coordinates that are not grid axes, by name (`x2`, `v3`).
    pub frozen: BTreeMap<String, f64>,
}

/// Velocity axes default to the open interval `(−0.999, 0.999)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub var: String,
    #[serde(default)]
    pub min: Option<f64>,
    #[serde(default)]
    pub max: Option<f64>,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorSpec {
    pub dt: f64,
    pub t_end: f64,
    /// Snapshot interval; only the final state when absent.
    pub snapshot_every: Option<f64>,
}

impl Default for IntegratorSpec {
    fn default() -> Self {
        IntegratorSpec { dt: 1e-3, t_end: 0.0, snapshot_every: None }
    }
}

/// Boost along axis 1, 2 or 3 by a rapidity or a velocity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoostSpec {
    pub axis: usize,
    #[serde(default)]
    pub rapidity: Option<f64>,
    #[serde(default)]
    pub velocity: Option<f64>,
    #[serde(default = "default_boost_step")]
    pub step: f64,
}

fn default_boost_step() -> f64 {
    1e-2
}

impl BoostSpec {
    pub fn resolved_rapidity(&self) -> Result<f64, CliError> {
        match (self.rapidity, self.velocity) {
            (Some(s), None) => Ok(s),
            (None, Some(v)) if v.abs() < 1.0 => Ok(v.atanh()),
            _ => Err(CliError::Config(format!("boost along axis {} needs exactly one of rapidity or |velocity| < 1", self.axis))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrajectorySpec {
    pub r0: [f64; 3],
    pub v0: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SeriesSpec {
    pub identity: Option<String>,
    pub order: usize,
    pub rapidity: f64,
}

impl Default for SeriesSpec {
    fn default() -> Self {
        SeriesSpec { identity: None, order: DEFAULT_SERIES_ORDER, rapidity: 0.3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeSpec {
    pub trials: usize,
    pub v_max: f64,
}

impl Default for ProbeSpec {
    fn default() -> Self {
        ProbeSpec { trials: 100, v_max: 0.9 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub algebra: f64,
    pub series: f64,
    /// Norm change per unit time.
    pub norm_drift: f64,
    /// Peak and centroid comparisons, in grid cells.
    pub peak_cells: f64,
    pub trajectory_velocity: f64,
    pub trajectory_position: f64,
    /// Free-streaming mean position against `⟨X⟩₀ + t⟨V⟩₀`.
    pub free_mean: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            algebra: 1e-9,
            series: 1e-9,
            norm_drift: 1e-6,
            peak_cells: 2.0,
            trajectory_velocity: 1e-8,
            trajectory_position: 1e-7,
            free_mean: 1e-3,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub dir: Option<PathBuf>,
}

/// Flag values that override the scenario.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub order: Option<usize>,
    pub out: Option<PathBuf>,
    pub mutate: Option<Family>,
    pub identity: Option<String>,
}

impl Scenario {
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Scenario, CliError> {
        let mut scenario = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                let mut s: Scenario = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                s.rebase(p.parent().unwrap_or(Path::new("")));
                s
            }
            None => Scenario::default(),
        };
        scenario.apply(overrides);
        scenario.validate()?;
        Ok(scenario)
    }

    /// Resolves relative snapshot paths against the scenario's directory.
    fn rebase(&mut self, base: &Path) {
        if let Some(snap) = self.state.as_mut().and_then(|s| s.snapshot.as_mut()) {
            if snap.is_relative() {
                *snap = base.join(&*snap);
            }
        }
    }

    fn apply(&mut self, o: &Overrides) {
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(tol) = o.tol {
            self.tolerances.algebra = tol;
            self.tolerances.series = tol;
        }
        if let Some(order) = o.order {
            self.series.order = order;
        }
        if let Some(out) = &o.out {
            self.output.dir = Some(out.clone());
        }
        if o.mutate.is_some() {
            self.mutate = o.mutate;
        }
        if o.identity.is_some() {
            self.series.identity = o.identity.clone();
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return bad(format!("mass must be positive, got {}", self.mass));
        }
        self.force_field()?;
        if !(self.integrator.dt > 0.0) || !(self.integrator.t_end >= 0.0) {
            return bad("integrator needs dt > 0 and t_end >= 0".into());
        }
        if let Some(every) = self.integrator.snapshot_every {
            if !(every > 0.0) {
                return bad("snapshot_every must be positive".into());
            }
        }
        if self.probes.trials == 0 || !(self.probes.v_max > 0.0 && self.probes.v_max < 1.0) {
            return bad("probes need trials > 0 and 0 < v_max < 1".into());
        }
        for b in &self.boosts {
            if !(1..=3).contains(&b.axis) {
                return bad(format!("boost axis must be 1, 2 or 3, got {}", b.axis));
            }
            b.resolved_rapidity()?;
        }
        if let Some(g) = &self.grid {
            self.phase_grid(g)?;
        }
        Ok(())
    }

    pub fn force_field(&self) -> Result<ForceField, CliError> {
        self.field.to_field().map_err(|e| CliError::Config(format!("field: {e}")))
    }

    pub fn probe_config(&self, tol: f64) -> ProbeConfig {
        let mut cfg = ProbeConfig::default().with_seed(self.seed).with_trials(self.probes.trials).with_tol(tol);
        cfg.v_max = self.probes.v_max;
        cfg
    }

    fn phase_grid(&self, spec: &GridSpec) -> Result<PhaseGrid, CliError> {
        let config = |e: relkvn::Error| CliError::Config(format!("grid: {e}"));
        let axes = spec
            .axes
            .iter()
            .map(|a| {
                let var = Var::from_name(&a.var).ok_or_else(|| CliError::Config(format!("grid: unknown coordinate `{}`", a.var)))?;
                let open = matches!(var, Var::V(_));
                let (min, max) = match (a.min, a.max) {
                    (Some(lo), Some(hi)) => (lo, hi),
                    (None, None) if open => (-0.999, 0.999),
                    _ => return Err(CliError::Config(format!("grid: axis `{}` needs min and max", a.var))),
                };
                GridAxis::new(var, min, max, a.count).map_err(config)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut grid = PhaseGrid::new(axes).map_err(config)?;
        for (name, value) in &spec.frozen {
            match Var::from_name(name) {
                Some(var @ (Var::X(_) | Var::V(_) | Var::P(_))) if grid.axis_of(var).is_none() => grid = grid.with_frozen(var, *value),
                _ => return Err(CliError::Config(format!("grid: cannot freeze `{name}`"))),
            }
        }
        Ok(grid)
    }

    /// The initial state: a snapshot file, or a Gaussian on the scenario
    /// grid.
    pub fn initial_state(&self) -> Result<PhaseSpaceState, CliError> {
        let spec = self.state.as_ref().ok_or_else(|| CliError::Config("scenario has no state".into()))?;
        if let Some(path) = &spec.snapshot {
            let file = std::fs::File::open(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            return read_snapshot(std::io::BufReader::new(file)).map_err(|e| CliError::Config(format!("{}: {e}", path.display())));
        }
        let grid = self.phase_grid(self.grid.as_ref().ok_or_else(|| CliError::Config("gaussian state needs a grid".into()))?)?;
        let repr = spec.representation.unwrap_or(Representation::Velocity);
        PhaseSpaceState::gaussian(repr, grid, &GaussianSpec { center: spec.center.clone(), width: spec.width.clone() })
            .map_err(|e| CliError::Config(format!("state: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_an_empty_object() {
        let s: Scenario = serde_json::from_str("{}").unwrap();
        assert_eq!(s, Scenario::default());
        assert_eq!(s.tolerances.algebra, 1e-9);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<Scenario>(r#"{"mas": 1.0}"#).is_err());
        assert!(serde_json::from_str::<Scenario>(r#"{"integrator": {"dt": 1e-3, "steps": 3}}"#).is_err());
        assert!(serde_json::from_str::<Scenario>(r#"{"field": {"phi": "x1", "b": 1}}"#).is_err());
    }

    #[test]
    fn overrides_take_precedence() {
        let mut s = Scenario::default();
        s.apply(&Overrides { seed: Some(9), tol: Some(1e-6), order: Some(3), mutate: Some(Family::Boost), ..Overrides::default() });
        assert_eq!((s.seed, s.series.order, s.mutate), (9, 3, Some(Family::Boost)));
        assert_eq!(s.tolerances.series, 1e-6);
    }

    #[test]
    fn velocity_axes_default_to_the_open_interval() {
        let s: Scenario = serde_json::from_str(
            r#"{"grid": {"axes": [{"var": "x1", "min": -1, "max": 1, "count": 8}, {"var": "v1", "count": 9}], "frozen": {"v2": 0.1}},
                "state": {"center": [0, 0], "width": [0.3, 0.2]}}"#,
        )
        .unwrap();
        let state = s.initial_state().unwrap();
        assert_eq!(state.grid.axes[1].max, 0.999);
        assert_eq!(state.grid.frozen[4], 0.1);
    }

    #[test]
    fn boosts_need_one_parameter() {
        let b = BoostSpec { axis: 3, rapidity: None, velocity: Some(0.5), step: 1e-2 };
        assert!((b.resolved_rapidity().unwrap() - 0.5f64.atanh()).abs() < 1e-15);
        let both = BoostSpec { rapidity: Some(0.1), ..b };
        assert!(both.resolved_rapidity().is_err());
    }
}
