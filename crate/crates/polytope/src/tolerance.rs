//! Process-wide numeric tolerances.
//!
//! Every kernel operation reads the current values through [`tolerances`]. The
//! defaults suit problems whose coordinates are O(1)..O(10^3); the CLI exposes
//! them for badly scaled inputs.

use std::sync::atomic::{AtomicU64, Ordering};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Primal feasibility tolerance of the simplex solver.
    pub lp: f64,
    /// Slack allowed by membership tests (`Ax <= b + tol`).
    pub membership: f64,
    /// Two vertices closer than this (max-norm) are the same vertex.
    pub dedup: f64,
    /// Half-width of the world box used to clip unbounded sets.
    pub world: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            lp: 1e-9,
            membership: 1e-8,
            dedup: 1e-7,
            world: 1e6,
        }
    }
}

static LP: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9
static MEMBERSHIP: AtomicU64 = AtomicU64::new(0x3E45_798E_E230_8C3A); // 1e-8
static DEDUP: AtomicU64 = AtomicU64::new(0x3E7A_D7F2_9ABC_AF48); // 1e-7
static WORLD: AtomicU64 = AtomicU64::new(0x412E_8480_0000_0000); // 1e6

pub fn tolerances() -> Tolerances {
    Tolerances {
        lp: f64::from_bits(LP.load(Ordering::Relaxed)),
        membership: f64::from_bits(MEMBERSHIP.load(Ordering::Relaxed)),
        dedup: f64::from_bits(DEDUP.load(Ordering::Relaxed)),
        world: f64::from_bits(WORLD.load(Ordering::Relaxed)),
    }
}

pub fn set_tolerances(tol: Tolerances) {
    LP.store(tol.lp.to_bits(), Ordering::Relaxed);
    MEMBERSHIP.store(tol.membership.to_bits(), Ordering::Relaxed);
    DEDUP.store(tol.dedup.to_bits(), Ordering::Relaxed);
    WORLD.store(tol.world.to_bits(), Ordering::Relaxed);
}
