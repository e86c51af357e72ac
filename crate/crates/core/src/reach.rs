use parc_polytope::{pontryagin_diff, HPolytope};
use parc_pwa::{ModeSequence, PwaSystem};

use crate::error::{CoreError, Result};

/// Backward reach sets `Ω_0 ..= Ω_N` for a fixed mode sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct ReachChain {
    pub sets: Vec<HPolytope>,
    /// Some set along the chain is empty, so every earlier set is too.
    pub empty: bool,
}

impl ReachChain {
    pub fn initial(&self) -> &HPolytope {
        &self.sets[0]
    }
}

/// Backward chain from `terminal`. Each step takes the preimage under the map
/// of mode `s_t` and keeps only states inside that mode's region, so forward
/// PWA rollouts from `Ω_0` follow the sequence. `Ω_0` is further intersected
/// with `initial_bound` when given.
pub fn reach_chain(
    system: &PwaSystem,
    s: &ModeSequence,
    terminal: &HPolytope,
    initial_bound: Option<&HPolytope>,
) -> Result<ReachChain> {
    system.validate_sequence(s)?;
    let n = system.layout().total();
    if terminal.dim() != n {
        return Err(CoreError::InvalidInput(format!(
            "target has dimension {}, system {n}",
            terminal.dim()
        )));
    }
    let steps = system.num_steps();
    let mut sets = vec![HPolytope::empty(n); steps + 1];
    sets[steps] = terminal.clone();
    let mut empty = terminal.is_empty()?;
    if !empty {
        for t in (0..steps).rev() {
            let region = &system.regions(t)[s.modes[t]];
            let mut cur = sets[t + 1].inverse_affine_map(&region.map)?.intersect(&region.region)?;
            if t == 0 {
                if let Some(b) = initial_bound {
                    cur = cur.intersect(b)?;
                }
            }
            let cur = cur.remove_redundancy()?;
            if cur.is_empty()? {
                empty = true;
                break;
            }
            sets[t] = cur;
        }
    }
    Ok(ReachChain { sets, empty })
}

/// Exact backward reach sets of `goal` under the affine dynamics of `s`.
pub fn reach_set(system: &PwaSystem, s: &ModeSequence, goal: &HPolytope) -> Result<ReachChain> {
    reach_chain(system, s, goal, None)
}

/// Reach sets that absorb tracking error: the chain starts from
/// `goal ⊖ E_tf` and `Ω_0` is restricted to the valid region `X̄`.
pub fn reach_set_with_error(
    system: &PwaSystem,
    s: &ModeSequence,
    goal: &HPolytope,
    e_tf: &HPolytope,
    valid_region: &HPolytope,
) -> Result<ReachChain> {
    let shrunk = pontryagin_diff(goal, e_tf)?;
    reach_chain(system, s, &shrunk, Some(valid_region))
}
