//! Point-particle characteristics of the relativistic force equation.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::ForceField;
use crate::scalar::{lorentz_factor, CompiledExpr, ScalarExpr};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub positions: Vec<[f64; 3]>,
    pub velocities: Vec<[f64; 3]>,
    /// Canonical momenta `m γ v + A`.
    pub momenta: Vec<[f64; 3]>,
    pub dt: f64,
    pub method_order: u32,
}

impl TrajectoryRecord {
    pub fn last_position(&self) -> [f64; 3] {
        *self.positions.last().expect("record has the initial sample")
    }

    pub fn last_velocity(&self) -> [f64; 3] {
        *self.velocities.last().expect("record has the initial sample")
    }

    pub fn last_momentum(&self) -> [f64; 3] {
        *self.momenta.last().expect("record has the initial sample")
    }

    /// CSV with header `t,x1,x2,x3,v1,v2,v3`, twelve decimals.
    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "t,x1,x2,x3,v1,v2,v3")?;
        for ((t, x), v) in self.times.iter().zip(&self.positions).zip(&self.velocities) {
            writeln!(out, "{t:.12},{:.12},{:.12},{:.12},{:.12},{:.12},{:.12}", x[0], x[1], x[2], v[0], v[1], v[2])?;
        }
        Ok(())
    }
}

struct Compiled {
    exprs: Vec<CompiledExpr>,
    scratch: Vec<f64>,
}

impl Compiled {
    fn new(exprs: &[ScalarExpr]) -> Result<Self> {
        let params = BTreeMap::new();
        let exprs = exprs.iter().map(|e| CompiledExpr::new(e, &params)).collect::<Result<Vec<_>>>()?;
        let n = exprs.iter().map(CompiledExpr::scratch_len).max().unwrap_or(0);
        Ok(Compiled { exprs, scratch: vec![0.0; n] })
    }

    fn eval(&mut self, k: usize, inputs: &[f64; 10]) -> f64 {
        self.exprs[k].eval_with(inputs, &mut self.scratch)
    }
}

fn inputs(r: &[f64; 3], v: &[f64; 3], t: f64) -> [f64; 10] {
    let mut y = [0.0; 10];
    y[..3].copy_from_slice(r);
    y[3..6].copy_from_slice(v);
    y[9] = t;
    y
}

/// Fixed-step RK4 for `dr/dt = v`, `dv/dt = (1/(m γ)) [F − (v·F) v]` with the
/// Lorentz force of `field`.
pub fn integrate_trajectory(mass: f64, field: &ForceField, r0: [f64; 3], v0: [f64; 3], t_end: f64, dt: f64) -> Result<TrajectoryRecord> {
    if !(mass > 0.0) || !(dt > 0.0) || !(t_end >= 0.0) {
        return Err(Error::InvalidArgument(format!("need mass > 0, dt > 0, t_end >= 0; got {mass}, {dt}, {t_end}")));
    }
    let speed = |v: &[f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if speed(&v0) >= 1.0 {
        return Err(Error::SpeedLimitBreached { t: 0.0, speed: speed(&v0) });
    }
    let accel = crate::generators::velocity_acceleration(mass, field);
    let gamma = ScalarExpr::constant(crate::scalar::Number::real(mass)) * lorentz_factor();
    let momentum: Vec<ScalarExpr> = (0..3).map(|k| &(&gamma * &ScalarExpr::v(k)) + &field.vector_potential[k]).collect();
    let mut acc = Compiled::new(&accel)?;
    let mut mom = Compiled::new(&momentum)?;

    let steps = (t_end / dt).round() as usize;
    let h = if steps == 0 { 0.0 } else { t_end / steps as f64 };
    let mut rec = TrajectoryRecord {
        times: Vec::with_capacity(steps + 1),
        positions: Vec::with_capacity(steps + 1),
        velocities: Vec::with_capacity(steps + 1),
        momenta: Vec::with_capacity(steps + 1),
        dt: h,
        method_order: 4,
    };
    let (mut r, mut v) = (r0, v0);
    let mut rate = |r: &[f64; 3], v: &[f64; 3], t: f64| -> [f64; 3] {
        let y = inputs(r, v, t);
        [acc.eval(0, &y), acc.eval(1, &y), acc.eval(2, &y)]
    };
    let mut record = |rec: &mut TrajectoryRecord, t: f64, r: [f64; 3], v: [f64; 3]| {
        let y = inputs(&r, &v, t);
        rec.times.push(t);
        rec.positions.push(r);
        rec.velocities.push(v);
        rec.momenta.push([mom.eval(0, &y), mom.eval(1, &y), mom.eval(2, &y)]);
    };
    record(&mut rec, 0.0, r, v);
    for n in 0..steps {
        let t = n as f64 * h;
        let add = |a: &[f64; 3], b: &[f64; 3], s: f64| [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]];
        let k1v = rate(&r, &v, t);
        let k1r = v;
        let (r2, v2) = (add(&r, &k1r, h / 2.0), add(&v, &k1v, h / 2.0));
        let k2v = rate(&r2, &v2, t + h / 2.0);
        let k2r = v2;
        let (r3, v3) = (add(&r, &k2r, h / 2.0), add(&v, &k2v, h / 2.0));
        let k3v = rate(&r3, &v3, t + h / 2.0);
        let k3r = v3;
        let (r4, v4) = (add(&r, &k3r, h), add(&v, &k3v, h));
        let k4v = rate(&r4, &v4, t + h);
        let k4r = v4;
        for k in 0..3 {
            r[k] += h / 6.0 * (k1r[k] + 2.0 * k2r[k] + 2.0 * k3r[k] + k4r[k]);
            v[k] += h / 6.0 * (k1v[k] + 2.0 * k2v[k] + 2.0 * k3v[k] + k4v[k]);
        }
        let t = (n + 1) as f64 * h;
        if r.iter().chain(&v).any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteState(format!("trajectory at t = {t}")));
        }
        if speed(&v) >= 1.0 {
            return Err(Error::SpeedLimitBreached { t, speed: speed(&v) });
        }
        record(&mut rec, t, r, v);
    }
    Ok(rec)
}

/// Closed-form 1D motion from rest under a constant force:
/// `v = (Ft/m)/√(1 + (Ft/m)²)`, `x = (m/F)(√(1 + (Ft/m)²) − 1)`.
/// Returns `(x, v)`.
pub fn constant_force_oracle(mass: f64, force: f64, t: f64) -> (f64, f64) {
    let a = force * t / mass;
    let root = (1.0 + a * a).sqrt();
    let x = if force == 0.0 { 0.0 } else { mass / force * (root - 1.0) };
    (x, a / root)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_values() {
        assert_eq!(constant_force_oracle(1.0, 1.0, 0.0), (0.0, 0.0));
        let (x, v) = constant_force_oracle(1.0, 1.0, 1.0);
        assert!((v - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((x - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        let mut prev = 0.0;
        for k in 1..200 {
            let (_, v) = constant_force_oracle(1.0, 1.0, k as f64 * 0.5);
            assert!(v > prev && v < 1.0);
            prev = v;
        }
    }

    #[test]
    fn free_motion_is_linear() {
        let rec = integrate_trajectory(1.0, &ForceField::free(), [1.0, 0.0, -1.0], [0.2, -0.3, 0.4], 2.0, 1e-2).unwrap();
        let x = rec.last_position();
        assert!((x[0] - 1.4).abs() < 1e-13 && (x[1] + 0.6).abs() < 1e-13 && (x[2] + 0.2).abs() < 1e-13);
        assert_eq!(rec.times.len(), 201);
    }

    #[test]
    fn constant_force_matches_oracle_at_unit_time() {
        let rec = integrate_trajectory(2.0, &ForceField::constant([2.0, 0.0, 0.0]), [0.0; 3], [0.0; 3], 1.0, 1e-3).unwrap();
        let (x, v) = constant_force_oracle(2.0, 2.0, 1.0);
        assert!((rec.last_velocity()[0] - v).abs() < 1e-12);
        assert!((rec.last_position()[0] - x).abs() < 1e-12);
        // canonical momentum m γ v = F t for A = 0
        assert!((rec.last_momentum()[0] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_superluminal_start() {
        let err = integrate_trajectory(1.0, &ForceField::free(), [0.0; 3], [0.8, 0.7, 0.0], 1.0, 1e-3).unwrap_err();
        assert!(matches!(err, Error::SpeedLimitBreached { .. }));
    }

    #[test]
    fn csv_header_and_precision() {
        let rec = integrate_trajectory(1.0, &ForceField::free(), [0.0; 3], [0.5, 0.0, 0.0], 0.1, 0.05).unwrap();
        let mut buf = Vec::new();
        rec.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,x1,x2,x3,v1,v2,v3"));
        assert_eq!(lines.nth(2), Some("0.100000000000,0.050000000000,0.000000000000,0.000000000000,0.500000000000,0.000000000000,0.000000000000"));
    }
}
