//! Seeded numerical probing: two expressions are declared equal when they
//! agree to an absolute tolerance at every sampled point.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::eval::SamplePoint;
use super::expr::{ScalarExpr, Var};
use crate::error::{Error, Result};

/// Sampling domain and acceptance rule for numerical probing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
    /// Velocities are drawn uniformly from the ball `|v| ≤ v_max`.
    pub v_max: f64,
    pub x_range: (f64, f64),
    pub p_range: (f64, f64),
    pub t_range: (f64, f64),
    /// Range for any named parameter not fixed in `fixed`.
    pub param_range: (f64, f64),
    /// Resampling attempts per trial after a domain error.
    pub max_retries: usize,
    #[serde(skip)]
    pub fixed: SamplePoint,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            trials: 100,
            tol: 1e-9,
            seed: 0,
            v_max: 0.9,
            x_range: (-2.0, 2.0),
            p_range: (-2.0, 2.0),
            t_range: (0.0, 2.0),
            param_range: (0.5, 2.0),
            max_retries: 32,
            fixed: SamplePoint::new(),
        }
    }
}

impl ProbeConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn fix(mut self, var: Var, value: f64) -> Self {
        self.fixed.set(var, value);
        self
    }

    pub fn fix_param(mut self, name: &str, value: f64) -> Self {
        self.fixed.set_param(name, value);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        Ok(())
    }

    /// The sample point for a trial and attempt. Each pair owns an
    /// independent generator stream, so points do not depend on the order
    /// in which trials run.
    pub fn point(&self, trial: usize, attempt: usize, params: &[String]) -> SamplePoint {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(((trial as u64) << 10) | attempt as u64);
        let mut p = SamplePoint::new();
        let uniform = |rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)| rng.gen_range(lo..=hi);
        for k in 0..3u8 {
            p.set(Var::X(k), uniform(&mut rng, self.x_range));
        }
        let v = loop {
            let u: [f64; 3] = [0, 1, 2].map(|_| rng.gen_range(-1.0..=1.0));
            if u.iter().map(|c| c * c).sum::<f64>() <= 1.0 {
                break u;
            }
        };
        for k in 0..3u8 {
            p.set(Var::V(k), self.v_max * v[k as usize]);
        }
        for k in 0..3u8 {
            p.set(Var::P(k), uniform(&mut rng, self.p_range));
        }
        p.set(Var::T, uniform(&mut rng, self.t_range));
        for name in params {
            p.set_param(name, uniform(&mut rng, self.param_range));
        }
        for (v, x) in self.fixed.assigned() {
            p.set(v, x);
        }
        for (k, x) in self.fixed.params() {
            p.set_param(k, *x);
        }
        p
    }
}

/// Outcome of a probe: the worst absolute residual and where it occurred.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub pass: bool,
    pub max_residual: f64,
    pub trials: usize,
    pub resamples: usize,
    #[serde(skip)]
    pub worst_point: Option<SamplePoint>,
}

/// Per-pair residuals over a shared set of points.
#[derive(Clone, Debug, PartialEq)]
pub struct BatchReport {
    pub max_residuals: Vec<f64>,
    pub trials: usize,
    pub resamples: usize,
    pub worst_points: Vec<Option<SamplePoint>>,
}

struct TrialOutcome {
    residuals: Vec<f64>,
    attempts: usize,
    point: SamplePoint,
}

fn eval_pairs(pairs: &[(ScalarExpr, ScalarExpr)], p: &SamplePoint) -> Result<Vec<f64>> {
    pairs
        .iter()
        .map(|(a, b)| {
            let x = a.eval(p)?;
            let y = b.eval(p)?;
            let r = (x - y).norm();
            if !(x.re.is_finite() && x.im.is_finite() && y.re.is_finite() && y.im.is_finite()) {
                return Err(Error::DomainError(format!("non-finite value at {p}")));
            }
            Ok(r)
        })
        .collect()
}

/// Probes several pairs at the same seeded points. A domain error in any
/// pair resamples the point for all of them.
pub fn probe_pairs(pairs: &[(ScalarExpr, ScalarExpr)], cfg: &ProbeConfig) -> Result<BatchReport> {
    cfg.validate()?;
    let mut params = std::collections::BTreeSet::new();
    for (a, b) in pairs {
        params.extend(a.params());
        params.extend(b.params());
    }
    let params: Vec<String> = params.into_iter().collect();
    let outcomes: Vec<Result<TrialOutcome>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut last = String::new();
            for attempt in 0..=cfg.max_retries {
                let p = cfg.point(trial, attempt, &params);
                match eval_pairs(pairs, &p) {
                    Ok(residuals) => {
                        return Ok(TrialOutcome { residuals, attempts: attempt, point: p })
                    }
                    Err(Error::DomainError(msg)) => last = msg,
                    Err(e) => return Err(e),
                }
            }
            Err(Error::ProbeExhausted { attempts: cfg.max_retries + 1, reason: last })
        })
        .collect();
    let mut report = BatchReport {
        max_residuals: vec![0.0; pairs.len()],
        trials: cfg.trials,
        resamples: 0,
        worst_points: vec![None; pairs.len()],
    };
    for outcome in outcomes {
        let o = outcome?;
        report.resamples += o.attempts;
        for (k, r) in o.residuals.iter().enumerate() {
            if *r > report.max_residuals[k] || report.worst_points[k].is_none() {
                report.max_residuals[k] = report.max_residuals[k].max(*r);
                report.worst_points[k] = Some(o.point.clone());
            }
        }
    }
    Ok(report)
}

/// Seeded numerical equality of two expressions.
pub fn equal_numeric(a: &ScalarExpr, b: &ScalarExpr, cfg: &ProbeConfig) -> Result<ProbeReport> {
    let batch = probe_pairs(&[(a.clone(), b.clone())], cfg)?;
    let max_residual = batch.max_residuals[0];
    Ok(ProbeReport {
        pass: max_residual <= cfg.tol,
        max_residual,
        trials: batch.trials,
        resamples: batch.resamples,
        worst_point: batch.worst_points.into_iter().next().flatten(),
    })
}
