//! Extended translation invariance checks on the affine maps of a system.
//!
//! With `Ĉ = C - I` split into `C1` (ETI rows and columns), `C2` (ETI rows,
//! other columns) and `d1` (ETI offsets), a region is ETI over the chosen
//! coordinates iff `C1 C1 = 0`, `C1 C2 = 0` and `C1 d1 = 0`.

use nalgebra::DMatrix;
use parc_polytope::AffineMap;

use crate::error::{PwaError, Result};
use crate::system::PwaSystem;

pub const ETI_TOL: f64 = 1e-10;

/// Max-abs entries of the three products for one region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtiResidual {
    pub c1c1: f64,
    pub c1c2: f64,
    pub c1d1: f64,
}

impl EtiResidual {
    pub fn passes(&self) -> bool {
        self.c1c1 <= ETI_TOL && self.c1c2 <= ETI_TOL && self.c1d1 <= ETI_TOL
    }
}

/// Residuals for an arbitrary set of ETI coordinates.
pub fn eti_residual(map: &AffineMap, eti: &[usize]) -> EtiResidual {
    let n = map.dim();
    let other: Vec<usize> = (0..n).filter(|i| !eti.contains(i)).collect();
    let ch = map.matrix() - DMatrix::identity(n, n);
    let c1 = DMatrix::from_fn(eti.len(), eti.len(), |r, c| ch[(eti[r], eti[c])]);
    let c2 = DMatrix::from_fn(eti.len(), other.len(), |r, c| ch[(eti[r], other[c])]);
    let d1 = DMatrix::from_fn(eti.len(), 1, |r, _| map.offset()[eti[r]]);
    let amax = |m: DMatrix<f64>| if m.is_empty() { 0.0 } else { m.amax() };
    EtiResidual {
        c1c1: amax(&c1 * &c1),
        c1c2: amax(&c1 * &c2),
        c1d1: amax(&c1 * &d1),
    }
}

/// Per-timestep, per-region residuals for the leading `n_eti` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct EtiReport {
    pub n_eti: usize,
    pub steps: Vec<Vec<EtiResidual>>,
}

impl EtiReport {
    pub fn passes(&self) -> bool {
        self.steps.iter().flatten().all(EtiResidual::passes)
    }

    /// `(timestep, region)` pairs that fail.
    pub fn failures(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (t, regions) in self.steps.iter().enumerate() {
            for (i, r) in regions.iter().enumerate() {
                if !r.passes() {
                    out.push((t, i));
                }
            }
        }
        out
    }
}

pub fn check_eti(system: &PwaSystem, n_eti: usize) -> Result<EtiReport> {
    let n = system.layout().total();
    if n_eti > n {
        return Err(PwaError::InvalidLayout(format!("n_eti = {n_eti} exceeds dimension {n}")));
    }
    let idx: Vec<usize> = (0..n_eti).collect();
    Ok(EtiReport {
        n_eti,
        steps: system
            .steps()
            .iter()
            .map(|regions| regions.iter().map(|r| eti_residual(&r.map, &idx)).collect())
            .collect(),
    })
}

fn all_pass(system: &PwaSystem, idx: &[usize]) -> bool {
    system
        .steps()
        .iter()
        .flatten()
        .all(|r| eti_residual(&r.map, idx).passes())
}

/// Largest `n` such that every region is ETI over the first `n` coordinates.
pub fn max_eti_prefix(system: &PwaSystem) -> usize {
    let n = system.layout().total();
    (0..=n)
        .rev()
        .find(|&m| all_pass(system, &(0..m).collect::<Vec<_>>()))
        .unwrap_or(0)
}

/// Coordinates `j >= base` whose addition to the ETI prefix `0..base` breaks
/// invariance in some region.
pub fn non_eti_states(system: &PwaSystem, base: usize) -> Vec<usize> {
    let n = system.layout().total();
    (base..n)
        .filter(|&j| {
            let mut idx: Vec<usize> = (0..base).collect();
            idx.push(j);
            !all_pass(system, &idx)
        })
        .collect()
}
