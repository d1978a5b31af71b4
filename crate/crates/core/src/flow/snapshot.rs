//! Text snapshots of grid states.
//!
//! ```text
//! relkvn-snapshot 1
//! representation velocity
//! time 0
//! frozen x1 x2 x3 v1 v2 v3 p1 p2 p3   (nine values)
//! axis x1 -3 5 161                     (one line per axis, row-major order)
//! records 32361
//! 0 re im                              (one line per node)
//! ```
//!
//! Numbers are written in shortest round-trip form, so a written snapshot
//! reads back bit-identically.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use super::grid::{GridAxis, PhaseGrid};
use super::state::PhaseSpaceState;
use crate::error::{Error, Result};
use crate::operator::Representation;
use crate::scalar::Var;

const MAGIC: &str = "relkvn-snapshot 1";

pub fn write_snapshot(state: &PhaseSpaceState, mut out: impl Write) -> Result<()> {
    writeln!(out, "{MAGIC}")?;
    writeln!(out, "representation {}", state.repr)?;
    writeln!(out, "time {:?}", state.t)?;
    let frozen: Vec<String> = state.grid.frozen[..9].iter().map(|x| format!("{x:?}")).collect();
    writeln!(out, "frozen {}", frozen.join(" "))?;
    for a in &state.grid.axes {
        writeln!(out, "axis {} {:?} {:?} {}", a.var.name(), a.min, a.max, a.count)?;
    }
    writeln!(out, "records {}", state.psi.len())?;
    for (i, z) in state.psi.iter().enumerate() {
        writeln!(out, "{i} {:?} {:?}", z.re, z.im)?;
    }
    Ok(())
}

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { offset: line, message: msg.into() }
}

fn num<T: std::str::FromStr>(line: usize, s: Option<&str>) -> Result<T> {
    s.and_then(|s| s.parse().ok()).ok_or_else(|| bad(line, "expected a number"))
}

pub fn read_snapshot(input: impl BufRead) -> Result<PhaseSpaceState> {
    let mut lines = input.lines().enumerate();
    let mut next = || -> Result<(usize, String)> {
        let (n, l) = lines.next().ok_or_else(|| bad(0, "unexpected end of snapshot"))?;
        Ok((n + 1, l?))
    };
    let (n, magic) = next()?;
    if magic.trim() != MAGIC {
        return Err(bad(n, "not a snapshot file"));
    }
    let field = |n: usize, line: &str, key: &str| -> Result<String> {
        line.strip_prefix(key).map(|s| s.trim().to_owned()).ok_or_else(|| bad(n, format!("expected `{key}`")))
    };
    let (n, l) = next()?;
    let repr = match field(n, &l, "representation")?.as_str() {
        "velocity" => Representation::Velocity,
        "momentum" => Representation::Momentum,
        other => return Err(bad(n, format!("unknown representation `{other}`"))),
    };
    let (n, l) = next()?;
    let t: f64 = num(n, Some(&field(n, &l, "time")?))?;
    let (n, l) = next()?;
    let frozen_text = field(n, &l, "frozen")?;
    let frozen: Vec<f64> = frozen_text.split_whitespace().map(|s| num(n, Some(s))).collect::<Result<_>>()?;
    if frozen.len() != 9 {
        return Err(bad(n, "expected nine frozen values"));
    }
    let mut axes = Vec::new();
    let count = loop {
        let (n, l) = next()?;
        if let Some(rest) = l.strip_prefix("axis ") {
            let mut it = rest.split_whitespace();
            let var = it.next().and_then(Var::from_name).ok_or_else(|| bad(n, "unknown axis variable"))?;
            axes.push(GridAxis::new(var, num(n, it.next())?, num(n, it.next())?, num(n, it.next())?)?);
        } else {
            break num::<usize>(n, Some(&field(n, &l, "records")?))?;
        }
    };
    let mut grid = PhaseGrid::new(axes)?;
    grid.frozen[..9].copy_from_slice(&frozen);
    if count != grid.len() {
        return Err(bad(0, format!("{count} records for a grid of {} nodes", grid.len())));
    }
    let mut psi = vec![Complex64::new(0.0, 0.0); count];
    for _ in 0..count {
        let (n, l) = next()?;
        let mut it = l.split_whitespace();
        let i: usize = num(n, it.next())?;
        if i >= count {
            return Err(bad(n, "record index out of range"));
        }
        psi[i] = Complex64::new(num(n, it.next())?, num(n, it.next())?);
    }
    PhaseSpaceState::new(repr, grid, psi, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::state::GaussianSpec;

    #[test]
    fn round_trip_is_exact() {
        let grid = PhaseGrid::new(vec![GridAxis::new(Var::X(0), -1.0, 1.0, 9).unwrap(), GridAxis::new(Var::P(0), -2.0, 2.0, 7).unwrap()])
            .unwrap()
            .with_frozen(Var::P(1), 0.25);
        let mut s = PhaseSpaceState::gaussian(Representation::Momentum, grid, &GaussianSpec { center: vec![0.1, 0.2], width: vec![0.3, 0.5] })
            .unwrap();
        s.t = 1.5;
        s.psi[3] *= Complex64::new(0.3, -0.7);
        let mut buf = Vec::new();
        write_snapshot(&s, &mut buf).unwrap();
        let back = read_snapshot(buf.as_slice()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn rejects_truncated_input() {
        assert!(read_snapshot("relkvn-snapshot 1\nrepresentation velocity\n".as_bytes()).is_err());
        assert!(read_snapshot("hello".as_bytes()).is_err());
    }
}
