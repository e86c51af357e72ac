//! Merging of regions that share a map and whose union is convex.

use nalgebra::DVector;
use parc_polytope::{convex_hull_pair, tolerances, vertex_enumeration, HPolytope, PolytopeError};

use crate::error::Result;
use crate::system::{PwaRegion, PwaSystem};

const MAP_TOL: f64 = 1e-10;

/// True iff `P ∪ Q` is convex, i.e. `conv(P, Q) ⊆ P ∪ Q`. Every piece of the
/// hull strictly beyond a facet row of `P` must lie inside `Q`.
pub fn union_is_convex(p: &HPolytope, q: &HPolytope) -> Result<bool> {
    let hull = convex_hull_pair(p, q)?;
    let tol = tolerances().membership;
    for i in 0..p.num_constraints() {
        let a: DVector<f64> = p.a().row(i).transpose();
        // hull ∩ {a·x >= b_i + δ}
        let norm = a.norm();
        if norm <= 1e-14 {
            continue;
        }
        let cut = HPolytope::from_rows(
            p.dim(),
            &[((-&a).iter().copied().collect(), -p.b()[i] - 1e-7 * norm)],
        )?;
        let piece = hull.intersect(&cut)?;
        let verts = match vertex_enumeration(&piece) {
            Ok(v) => v,
            Err(PolytopeError::Empty) => continue,
            Err(e) => return Err(e.into()),
        };
        for v in verts.vertices() {
            if !q.contains(v, tol)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Greedily merges, per timestep, pairs of regions whose maps agree within
/// `1e-10` and whose union is convex. Region order otherwise unchanged.
pub fn merge_regions(system: &PwaSystem) -> Result<PwaSystem> {
    let mut steps = Vec::with_capacity(system.num_steps());
    for regions in system.steps() {
        let mut cur: Vec<PwaRegion> = regions.to_vec();
        'restart: loop {
            for i in 0..cur.len() {
                for j in i + 1..cur.len() {
                    let same = (cur[i].map.matrix() - cur[j].map.matrix()).amax() <= MAP_TOL
                        && (cur[i].map.offset() - cur[j].map.offset()).amax() <= MAP_TOL;
                    if same && union_is_convex(&cur[i].region, &cur[j].region)? {
                        let hull = convex_hull_pair(&cur[i].region, &cur[j].region)?
                            .remove_redundancy()?;
                        cur[i].region = hull;
                        cur.remove(j);
                        continue 'restart;
                    }
                }
            }
            break;
        }
        steps.push(cur);
    }
    PwaSystem::new(
        system.layout(),
        system.dt(),
        system.tf(),
        steps,
        system.domain().cloned(),
    )
}
