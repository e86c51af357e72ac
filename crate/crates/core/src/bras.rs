use nalgebra::DVector;
use parc_polytope::{project, tolerances, HPolytope, HitAndRun};
use parc_pwa::{check_eti, ModeSequence, PwaSystem};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::avoid::{avoid_chain, buffer_obstacle, collision_filter, intermediate_avoid};
use crate::error::{CoreError, Result};
use crate::reach::reach_chain;
use crate::scenario::{augment, Scenario};
use crate::tracking::{error_sets, ErrorProfile};

/// Avoid polytope `Λ_{i,t,0}` tagged with its obstacle and timestep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AvoidSet {
    pub obstacle: usize,
    pub t: usize,
    pub set: HPolytope,
}

/// Outcome of the hull filter for one `(obstacle, timestep)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterFlag {
    pub obstacle: usize,
    pub t: usize,
    pub hit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub lp_tol: f64,
    pub membership_tol: f64,
    pub dedup_tol: f64,
    pub world: f64,
    pub skip_filter: bool,
    pub tracking_error: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Reach set, reach chain and tagged avoid sets for one mode sequence. The
/// safe set is `reach` minus the union of the avoid sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrasResult {
    pub mode_sequence: ModeSequence,
    pub reach: HPolytope,
    pub reach_chain: Vec<HPolytope>,
    pub avoid: Vec<AvoidSet>,
    pub filtered: Vec<FilterFlag>,
    pub n_obstacles: usize,
    /// The reach set is empty (for instance the goal vanished under error).
    pub empty: bool,
    pub provenance: Provenance,
}

impl BrasResult {
    /// In the reach set and in no avoid set.
    pub fn contains(&self, x: &DVector<f64>) -> Result<bool> {
        let tol = tolerances().membership;
        if self.empty || !self.reach.contains(x, tol)? {
            return Ok(false);
        }
        for a in &self.avoid {
            if a.set.contains(x, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BrasOptions {
    /// Compute avoid sets for every pair instead of filtering by the hull test.
    pub skip_filter: bool,
}

/// Augmented obstacles, the goal shrunk by the final error, the interval
/// error sets and the set that bounds `Ω_0`.
struct Targets {
    obstacles: Vec<HPolytope>,
    shrunk: HPolytope,
    ebar: Option<Vec<HPolytope>>,
    valid: HPolytope,
}

fn targets(system: &PwaSystem, scenario: &Scenario, profile: Option<&ErrorProfile>) -> Result<Targets> {
    let layout = system.layout();
    if scenario.layout != layout {
        return Err(CoreError::InvalidInput("scenario layout differs from the system layout".into()));
    }
    let (goal, obstacles) = augment(scenario)?;
    let n = layout.total();
    let domain = system.domain().cloned().unwrap_or_else(|| HPolytope::universe(n));
    Ok(match profile {
        None => Targets {
            shrunk: goal,
            obstacles,
            ebar: None,
            valid: domain,
        },
        Some(p) => {
            p.validate(&layout, system.num_steps())?;
            let (e_tf, ebar) = error_sets(p, &layout)?;
            Targets {
                shrunk: parc_polytope::pontryagin_diff(&goal, &e_tf)?,
                obstacles,
                ebar: Some(ebar),
                valid: p.valid_region.clone(),
            }
        }
    })
}

/// Full pipeline for the mode sequence of the expert plan from `expert_x0`.
pub fn compute_bras(
    system: &PwaSystem,
    scenario: &Scenario,
    expert_x0: &DVector<f64>,
    profile: Option<&ErrorProfile>,
    options: BrasOptions,
) -> Result<BrasResult> {
    let layout = system.layout();
    let n = layout.total();
    if expert_x0.len() != n {
        return Err(CoreError::InvalidInput(format!("expert state has dimension {}, expected {n}", expert_x0.len())));
    }
    let tg = targets(system, scenario, profile)?;
    let s = system.mode_sequence(expert_x0)?;
    let tol = tolerances();
    let provenance = Provenance {
        lp_tol: tol.lp,
        membership_tol: tol.membership,
        dedup_tol: tol.dedup,
        world: tol.world,
        skip_filter: options.skip_filter,
        tracking_error: profile.is_some(),
        seed: None,
    };
    let steps = system.num_steps();
    let flagged_empty = |s: ModeSequence, chain: Vec<HPolytope>| BrasResult {
        mode_sequence: s,
        reach: HPolytope::empty(n),
        reach_chain: chain,
        avoid: Vec::new(),
        filtered: Vec::new(),
        n_obstacles: tg.obstacles.len(),
        empty: true,
        provenance: provenance.clone(),
    };
    if tg.shrunk.is_empty()? {
        return Ok(flagged_empty(s, vec![HPolytope::empty(n); steps + 1]));
    }
    let rollout = system.rollout_sequence(&s, expert_x0, 0)?;
    let last = rollout.states.last().expect("rollout has states");
    if !tg.shrunk.contains(last, tol.membership)? {
        return Err(CoreError::ExpertNotGoalReaching(format!(
            "terminal state violates the goal by {:.3e}",
            tg.shrunk.max_violation(last)?
        )));
    }
    let report = check_eti(system, layout.n_eti())?;
    for (t, &m) in s.modes.iter().enumerate() {
        if !report.steps[t][m].passes() {
            return Err(CoreError::EtiViolation { step: t, region: m, n_eti: layout.n_eti() });
        }
    }
    let chain = reach_chain(system, &s, &tg.shrunk, Some(&tg.valid))?;
    if chain.empty {
        return Ok(flagged_empty(s, chain.sets));
    }
    let domain_other = match system.domain() {
        Some(d) if layout.n_eti() < n => Some(project(d, layout.n_eti()..n)?),
        _ => None,
    };
    let pairs: Vec<(usize, usize)> = (0..tg.obstacles.len())
        .flat_map(|i| (0..steps).map(move |t| (i, t)))
        .collect();
    let outcomes = pairs
        .par_iter()
        .map(|&(i, t)| {
            let obstacle = match &tg.ebar {
                Some(e) => buffer_obstacle(&tg.obstacles[i], &e[t])?,
                None => tg.obstacles[i].clone(),
            };
            let hit = options.skip_filter || collision_filter(&chain.sets[t], &chain.sets[t + 1], &obstacle)?;
            if !hit {
                return Ok((FilterFlag { obstacle: i, t, hit }, None));
            }
            let tt = intermediate_avoid(
                system,
                &s,
                t,
                &chain.sets[t],
                &obstacle,
                layout.n_eti(),
                domain_other.as_ref(),
            )?;
            let set = avoid_chain(system, &s, &tt, t)?;
            Ok((FilterFlag { obstacle: i, t, hit }, Some(AvoidSet { obstacle: i, t, set })))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut filtered = Vec::with_capacity(outcomes.len());
    let mut avoid = Vec::new();
    for (flag, set) in outcomes {
        filtered.push(flag);
        avoid.extend(set);
    }
    Ok(BrasResult {
        mode_sequence: s,
        reach: chain.sets[0].clone(),
        reach_chain: chain.sets,
        avoid,
        filtered,
        n_obstacles: tg.obstacles.len(),
        empty: false,
        provenance,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleOutcome {
    pub samples: Vec<DVector<f64>>,
    pub attempts: usize,
    /// The attempt budget ran out before `n` samples were accepted.
    pub exhausted: bool,
}

pub const DEFAULT_REJECTION_BUDGET: usize = 100_000;

/// Hit-and-run samples of the reach set that fall in no avoid set.
pub fn sample_bras(result: &BrasResult, n: usize, seed: u64, budget: usize) -> Result<SampleOutcome> {
    if result.empty || result.reach.is_empty()? {
        return Err(CoreError::EmptyReach);
    }
    let mut walk = HitAndRun::new(&result.reach, seed)?;
    let tol = tolerances().membership;
    let mut samples = Vec::with_capacity(n);
    let mut attempts = 0;
    while samples.len() < n && attempts < budget {
        attempts += 1;
        let x = walk.next_point();
        let mut blocked = false;
        for a in &result.avoid {
            if a.set.contains(&x, tol)? {
                blocked = true;
                break;
            }
        }
        if !blocked {
            samples.push(x);
        }
    }
    Ok(SampleOutcome {
        exhausted: samples.len() < n,
        samples,
        attempts,
    })
}

/// First problem found by [`verify_plan`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    LeftDomain { step: usize },
    MissedGoal { violation: f64 },
    Collision { obstacle: usize, step: usize, substep: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub violation: Option<Violation>,
}

pub const DEFAULT_SUBSTEPS: usize = 50;

/// Independent check of one plan: roll out the PWA dynamics, require the
/// final state in the (shrunk) goal, and require every interpolated
/// workspace sub-segment to miss every (buffered) workspace obstacle.
pub fn verify_plan(
    system: &PwaSystem,
    scenario: &Scenario,
    profile: Option<&ErrorProfile>,
    x0: &DVector<f64>,
    substeps: usize,
) -> Result<VerifyReport> {
    let tg = targets(system, scenario, profile)?;
    let layout = system.layout();
    let n_w = layout.n_w();
    let rollout = system.rollout(x0, substeps)?;
    let fail = |v| Ok(VerifyReport { passed: false, violation: Some(v) });
    if let Some(step) = rollout.exited_at {
        return fail(Violation::LeftDomain { step });
    }
    let per = substeps.max(1);
    for (i, obs) in scenario.obstacles.iter().enumerate() {
        for t in 0..system.num_steps() {
            let buffered = match &profile {
                Some(p) => {
                    let e = &p.e_int[t];
                    let neg: Vec<f64> = e.iter().map(|v| -v).collect();
                    buffer_obstacle(obs, &HPolytope::from_bounds(&neg, e)?)?
                }
                None => obs.clone(),
            };
            for j in 0..per {
                let a = rollout.samples[t * per + j].1.rows(0, n_w).into_owned();
                let b = rollout.samples[t * per + j + 1].1.rows(0, n_w).into_owned();
                let seg = parc_polytope::Segment::new(a, b)?;
                if parc_polytope::segment_intersects(&buffered, &seg)? {
                    return fail(Violation::Collision { obstacle: i, step: t, substep: j });
                }
            }
        }
    }
    let last = rollout.states.last().expect("rollout has states");
    if !tg.shrunk.contains(last, tolerances().membership)? {
        return fail(Violation::MissedGoal { violation: tg.shrunk.max_violation(last)? });
    }
    Ok(VerifyReport { passed: true, violation: None })
}

/// Recombines results computed on disjoint coordinate blocks: the reach set
/// is the product of the part reach sets and each `(obstacle, timestep)`
/// avoid set is the product of the part avoid sets. A pair missing from any
/// part (filtered out there) has an empty product and is dropped.
pub fn combine_decoupled(parts: &[BrasResult]) -> Result<BrasResult> {
    let first = parts.first().ok_or_else(|| CoreError::Misalignment("no parts".into()))?;
    for (j, p) in parts.iter().enumerate().skip(1) {
        if p.n_obstacles != first.n_obstacles {
            return Err(CoreError::Misalignment(format!("part {j} has {} obstacles, part 0 has {}", p.n_obstacles, first.n_obstacles)));
        }
        if p.reach_chain.len() != first.reach_chain.len() {
            return Err(CoreError::Misalignment(format!("part {j} has a different number of timesteps")));
        }
        if p.mode_sequence != first.mode_sequence {
            return Err(CoreError::Misalignment(format!("part {j} follows a different mode sequence")));
        }
    }
    let product = |sets: Vec<&HPolytope>| -> HPolytope {
        let mut it = sets.into_iter();
        let head = it.next().expect("nonempty").clone();
        it.fold(head, |acc, s| acc.cartesian_product(s))
    };
    let steps = first.reach_chain.len() - 1;
    let empty = parts.iter().any(|p| p.empty);
    let reach_chain: Vec<HPolytope> = (0..=steps)
        .map(|t| product(parts.iter().map(|p| &p.reach_chain[t]).collect()))
        .collect();
    let mut avoid = Vec::new();
    let mut filtered = Vec::new();
    for i in 0..first.n_obstacles {
        for t in 0..steps {
            let found: Vec<Option<&AvoidSet>> = parts
                .iter()
                .map(|p| p.avoid.iter().find(|a| a.obstacle == i && a.t == t))
                .collect();
            let hit = parts.iter().all(|p| {
                p.filtered.iter().any(|f| f.obstacle == i && f.t == t && f.hit)
            });
            filtered.push(FilterFlag { obstacle: i, t, hit });
            if found.iter().all(Option::is_some) {
                let sets = found.iter().map(|a| &a.expect("present").set).collect();
                avoid.push(AvoidSet { obstacle: i, t, set: product(sets) });
            }
        }
    }
    let dim: usize = parts.iter().map(|p| p.reach.dim()).sum();
    Ok(BrasResult {
        mode_sequence: first.mode_sequence.clone(),
        reach: if empty { HPolytope::empty(dim) } else { reach_chain[0].clone() },
        reach_chain,
        avoid,
        filtered,
        n_obstacles: first.n_obstacles,
        empty,
        provenance: first.provenance.clone(),
    })
}
