use nalgebra::DVector;
use parc_polytope::{tolerances, HPolytope};
use parc_pwa::PwaSystem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};

pub const DEFAULT_EXPERT_BUDGET: usize = 512;

/// Samples parameters uniformly from `k_domain` and returns the first
/// augmented start `[w; k; p_other]` whose PWA rollout from `p0` stays in the
/// domain and ends in `goal`. Rejected draws outside `k_domain` count
/// against `budget`.
pub fn find_expert(
    system: &PwaSystem,
    p0: &DVector<f64>,
    k_domain: &HPolytope,
    goal: &HPolytope,
    budget: usize,
    seed: u64,
) -> Result<Option<DVector<f64>>> {
    let layout = system.layout();
    if p0.len() != layout.n_plan() || k_domain.dim() != layout.n_k() {
        return Err(CoreError::InvalidInput("start or parameter domain has the wrong dimension".into()));
    }
    let (lo, hi) = k_domain.clip(tolerances().world).bounding_box()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = tolerances().membership;
    for _ in 0..budget {
        let k = DVector::from_iterator(
            lo.len(),
            lo.iter().zip(&hi).map(|(&l, &h)| if h > l { rng.random_range(l..=h) } else { l }),
        );
        if !k_domain.contains(&k, tol)? {
            continue;
        }
        let x0 = layout.augment(p0, &k);
        let Ok(s) = system.mode_sequence(&x0) else {
            continue;
        };
        let r = system.rollout_sequence(&s, &x0, 0)?;
        let last = r.states.last().expect("rollout has states");
        if goal.contains(last, tol)? && system.domain().map_or(Ok(true), |d| d.contains(last, tol))? {
            return Ok(Some(x0));
        }
    }
    Ok(None)
}
