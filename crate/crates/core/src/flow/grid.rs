//! Tensor-product phase-space grids with cubic Lagrange interpolation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Var;

/// Uniform axis over one phase-space coordinate, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridAxis {
    pub var: Var,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridAxis {
    pub fn new(var: Var, min: f64, max: f64, count: usize) -> Result<Self> {
        if count < 4 || !(max > min) || !min.is_finite() || !max.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "axis {} needs at least 4 points on a finite interval, got {count} on [{min}, {max}]",
                var.name()
            )));
        }
        Ok(GridAxis { var, min, max, count })
    }

    /// Velocity axis on the open interval `(−0.999, 0.999)`.
    pub fn open_velocity(var: Var, count: usize) -> Result<Self> {
        GridAxis::new(var, -0.999, 0.999, count)
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.min + i as f64 * self.spacing()
    }

    /// Start index and weights of the 4-point stencil around `x`, or `None`
    /// outside the axis.
    fn stencil(&self, x: f64) -> Option<(usize, [f64; 4])> {
        let h = self.spacing();
        let u = (x - self.min) / h;
        let last = (self.count - 1) as f64;
        if !(u >= -1e-9 && u <= last + 1e-9) {
            return None;
        }
        let base = (u.floor() as isize - 1).clamp(0, self.count as isize - 4) as usize;
        let r = u - base as f64;
        let w = [
            -(r - 1.0) * (r - 2.0) * (r - 3.0) / 6.0,
            r * (r - 2.0) * (r - 3.0) / 2.0,
            -r * (r - 1.0) * (r - 3.0) / 2.0,
            r * (r - 1.0) * (r - 2.0) / 6.0,
        ];
        Some((base, w))
    }
}

/// Row-major grid over a subset of the phase-space coordinates. Coordinates
/// without an axis are frozen at the values in `frozen`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseGrid {
    pub axes: Vec<GridAxis>,
    pub frozen: [f64; 10],
    strides: Vec<usize>,
}

impl PhaseGrid {
    pub fn new(axes: Vec<GridAxis>) -> Result<Self> {
        if axes.is_empty() || axes.len() > 6 {
            return Err(Error::InvalidArgument(format!("grid needs 1 to 6 axes, got {}", axes.len())));
        }
        for (k, a) in axes.iter().enumerate() {
            if a.var == Var::T {
                return Err(Error::InvalidArgument("time cannot be a grid axis".into()));
            }
            if axes[..k].iter().any(|b| b.var == a.var) {
                return Err(Error::InvalidArgument(format!("duplicate grid axis {}", a.var.name())));
            }
        }
        let mut strides = vec![1; axes.len()];
        for k in (0..axes.len() - 1).rev() {
            strides[k] = strides[k + 1] * axes[k + 1].count;
        }
        Ok(PhaseGrid { axes, frozen: [0.0; 10], strides })
    }

    pub fn with_frozen(mut self, var: Var, value: f64) -> Self {
        self.frozen[var.slot()] = value;
        self
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dims(&self) -> usize {
        self.axes.len()
    }

    pub fn vars(&self) -> Vec<Var> {
        self.axes.iter().map(|a| a.var).collect()
    }

    pub fn axis_of(&self, var: Var) -> Option<usize> {
        self.axes.iter().position(|a| a.var == var)
    }

    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(GridAxis::spacing).product()
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.strides[axis]
    }

    /// Per-axis indices of a flat index.
    pub fn unravel(&self, mut idx: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|s| {
                let i = idx / s;
                idx %= s;
                i
            })
            .collect()
    }

    /// Slot inputs `[x1 x2 x3 v1 v2 v3 p1 p2 p3 t]` of a node, time zero.
    pub fn point(&self, idx: usize) -> [f64; 10] {
        let mut out = self.frozen;
        for (k, i) in self.unravel(idx).into_iter().enumerate() {
            out[self.axes[k].var.slot()] = self.axes[k].coord(i);
        }
        out
    }

    /// Tensor-product cubic Lagrange interpolation of `data` at the grid
    /// coordinates of `point`; `None` when the point lies outside.
    pub fn interpolate(&self, data: &[Complex64], point: &[f64; 10]) -> Option<Complex64> {
        let d = self.dims();
        let mut stencils = [(0usize, [0.0f64; 4]); 6];
        for k in 0..d {
            stencils[k] = self.axes[k].stencil(point[self.axes[k].var.slot()])?;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        let mut digits = [0usize; 6];
        loop {
            let mut w = 1.0;
            let mut idx = 0;
            for k in 0..d {
                let (base, ws) = &stencils[k];
                w *= ws[digits[k]];
                idx += (base + digits[k]) * self.strides[k];
            }
            acc += data[idx] * w;
            let mut k = d;
            loop {
                if k == 0 {
                    return Some(acc);
                }
                k -= 1;
                digits[k] += 1;
                if digits[k] < 4 {
                    break;
                }
                digits[k] = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_interpolation_is_exact_for_cubics() {
        let grid = PhaseGrid::new(vec![
            GridAxis::new(Var::X(0), -1.0, 2.0, 13).unwrap(),
            GridAxis::new(Var::V(0), -0.5, 0.5, 9).unwrap(),
        ])
        .unwrap();
        let f = |p: &[f64; 10]| Complex64::new(p[0].powi(3) - 2.0 * p[0] * p[3], p[3].powi(2));
        let data: Vec<Complex64> = (0..grid.len()).map(|i| f(&grid.point(i))).collect();
        for (x, v) in [(0.123, 0.31), (-0.99, -0.49), (1.97, 0.0)] {
            let mut p = [0.0; 10];
            p[0] = x;
            p[3] = v;
            let z = grid.interpolate(&data, &p).unwrap();
            assert!((z - f(&p)).norm() < 1e-12);
        }
        let mut outside = [0.0; 10];
        outside[0] = 2.5;
        assert!(grid.interpolate(&data, &outside).is_none());
    }

    #[test]
    fn unravel_round_trips() {
        let grid = PhaseGrid::new(vec![
            GridAxis::new(Var::X(0), 0.0, 1.0, 5).unwrap(),
            GridAxis::new(Var::V(0), 0.0, 1.0, 7).unwrap(),
        ])
        .unwrap();
        let idx = 3 * 7 + 4;
        assert_eq!(grid.unravel(idx), vec![3, 4]);
        assert!((grid.point(idx)[3] - 4.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_axes() {
        assert!(GridAxis::new(Var::X(0), 1.0, 0.0, 10).is_err());
        assert!(GridAxis::new(Var::X(0), 0.0, 1.0, 3).is_err());
        let a = GridAxis::new(Var::X(0), 0.0, 1.0, 5).unwrap();
        assert!(PhaseGrid::new(vec![a, a]).is_err());
    }
}
