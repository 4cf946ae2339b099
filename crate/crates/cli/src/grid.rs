//! `--grid x:lo:hi:n,z:lo:hi:m[,y=v]` and `--domain x:lo:hi,y:lo:hi,z:lo:hi`.

use optiflow_core::grid::{AxisRange, PlaneGrid};
use optiflow_core::tracing::DomainBox;
use optiflow_core::{Axis, Vec3};
use serde::Serialize;

use crate::CliError;

fn number(s: &str, what: &str) -> Result<f64, CliError> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| CliError::Invalid(format!("{what}: `{s}` is not a number")))
}

fn axis(s: &str) -> Result<Axis, CliError> {
    Axis::from_name(s.trim()).ok_or_else(|| CliError::Invalid(format!("unknown axis `{s}` (expected x, y or z)")))
}

/// Two sampled axes and the coordinate held fixed along the third (0 by default).
pub fn parse_grid(text: &str) -> Result<PlaneGrid, CliError> {
    let mut ranges = Vec::new();
    let mut fixed = None;
    for part in text.split(',') {
        if let Some((name, value)) = part.split_once('=') {
            fixed = Some((axis(name)?, number(value, "--grid fixed coordinate")?));
            continue;
        }
        let f: Vec<&str> = part.split(':').collect();
        if f.len() != 4 {
            return Err(CliError::Invalid(format!("--grid entry `{part}` must look like x:lo:hi:n")));
        }
        let count = f[3]
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Invalid(format!("--grid count `{}` is not a positive integer", f[3])))?;
        ranges.push(AxisRange::new(axis(f[0])?, number(f[1], "--grid lo")?, number(f[2], "--grid hi")?, count)?);
    }
    let [first, second] = ranges[..] else {
        return Err(CliError::Invalid("--grid needs exactly two sampled axes".into()));
    };
    let grid = PlaneGrid::new(first, second, fixed.map_or(0.0, |(_, v)| v))?;
    if let Some((a, _)) = fixed {
        if a != grid.normal_axis() {
            return Err(CliError::Invalid(format!("--grid fixes `{}`, which is also sampled", a.name())));
        }
    }
    Ok(grid)
}

pub fn parse_domain(text: &str) -> Result<DomainBox, CliError> {
    let mut lo = [None; 3];
    let mut hi = [None; 3];
    for part in text.split(',') {
        let f: Vec<&str> = part.split(':').collect();
        if f.len() != 3 {
            return Err(CliError::Invalid(format!("--domain entry `{part}` must look like x:lo:hi")));
        }
        let i = axis(f[0])? as usize;
        lo[i] = Some(number(f[1], "--domain lo")?);
        hi[i] = Some(number(f[2], "--domain hi")?);
    }
    let get = |v: [Option<f64>; 3]| -> Result<Vec3, CliError> {
        match v {
            [Some(x), Some(y), Some(z)] => Ok(Vec3::new(x, y, z)),
            _ => Err(CliError::Invalid("--domain must bound all of x, y and z".into())),
        }
    };
    Ok(DomainBox::new(get(lo)?, get(hi)?)?)
}

#[derive(Debug, Serialize)]
pub struct AxisDesc {
    pub axis: &'static str,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Grid metadata written next to every layer set. Layers are row-major
/// with the second axis varying fastest.
#[derive(Debug, Serialize)]
pub struct GridDesc {
    pub first: AxisDesc,
    pub second: AxisDesc,
    pub fixed_axis: &'static str,
    pub fixed_value: f64,
}

impl GridDesc {
    pub fn of(grid: &PlaneGrid) -> Self {
        let desc = |r: &AxisRange| AxisDesc {
            axis: r.axis.name(),
            lo: r.lo,
            hi: r.hi,
            count: r.count,
        };
        GridDesc {
            first: desc(&grid.first),
            second: desc(&grid.second),
            fixed_axis: grid.normal_axis().name(),
            fixed_value: grid.fixed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_strings() {
        let g = parse_grid("x:-4:4:400,z:0:3000:600").unwrap();
        assert_eq!(g.shape(), (400, 600));
        assert_eq!((g.normal_axis(), g.fixed), (Axis::Y, 0.0));
        let g = parse_grid("x:-1:1:10, y:-1:1:20, z=2.5").unwrap();
        assert_eq!(g.fixed, 2.5);
        for bad in ["x:-4:4:400", "x:-4:4:1,z:0:1:5", "x:4:-4:10,z:0:1:5", "x:0:1:5,x:0:1:5", "q:0:1:5,z:0:1:5", "x:0:1:5,z:0:1:5,x=1", "x:0:a:5,z:0:1:5"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn domain_strings() {
        let d = parse_domain("x:-1:1,y:-2:2,z:0:5").unwrap();
        assert!(d.contains(Vec3::new(0.5, -1.5, 4.0)));
        assert!(parse_domain("x:-1:1,z:0:5").is_err());
    }
}
