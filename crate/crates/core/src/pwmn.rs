//! Seeded generators for the two planned real-world layouts.
//!
//! Both generators place houses or buildings around a street or open-space
//! skeleton, then accept a draw only if the unit-disk graph is connected and
//! the global metrics sit inside the ranges reported for real deployments.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::topology::{global_metrics, GlobalMetrics, WmnTopology, DEFAULT_RADIO_RANGE_M};

/// Draws attempted before giving up on a seed.
pub const MAX_PLACEMENT_ATTEMPTS: usize = 200;

/// Real-world bounds: density, minimum distance (m), transitivity.
pub const REAL_WORLD_DELTA: (f64, f64) = (0.05, 0.1);
pub const REAL_WORLD_EPS_MIN: (f64, f64) = (2.0, 22.0);
pub const REAL_WORLD_T: (f64, f64) = (0.1, 0.8);

/// Houses closer than this are merged by the placer into one draw failure.
const MIN_SEPARATION_M: f64 = 2.0;
const LOT_PAIR_PROBABILITY: f64 = 0.45;
const LOT_SPACING: (f64, f64) = (140.0, 200.0);
const OFFICE_FRONTAGE_PROBABILITY: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PwmnKind {
    /// 25 houses along three parallel streets in 1000 m × 1000 m.
    Suburban25,
    /// 50 nodes in building clusters around two open spaces in 1500 m × 1500 m.
    Urban50,
}

impl PwmnKind {
    pub fn label(self) -> &'static str {
        match self {
            PwmnKind::Suburban25 => "PWMN_25",
            PwmnKind::Urban50 => "PWMN_50",
        }
    }

    pub fn node_count(self) -> usize {
        match self {
            PwmnKind::Suburban25 => 25,
            PwmnKind::Urban50 => 50,
        }
    }

    pub fn extent_m(self) -> f64 {
        match self {
            PwmnKind::Suburban25 => 1000.0,
            PwmnKind::Urban50 => 1500.0,
        }
    }
}

pub fn within_real_world_ranges(m: &GlobalMetrics) -> bool {
    let inside = |v: f64, (lo, hi): (f64, f64)| v >= lo && v <= hi;
    inside(m.density_delta, REAL_WORLD_DELTA)
        && inside(m.radius_eps_min, REAL_WORLD_EPS_MIN)
        && m.transitivity_defined
        && inside(m.transitivity_t, REAL_WORLD_T)
}

/// Generates a planned mesh for `kind`; one radio per node until a PHY
/// profile is applied with [`WmnTopology::with_radios`].
pub fn build_pwmn(kind: PwmnKind, seed: u64) -> Result<WmnTopology> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = String::from("no draw attempted");
    for _ in 0..MAX_PLACEMENT_ATTEMPTS {
        let Some(points) = (match kind {
            PwmnKind::Suburban25 => place_suburban(&mut rng),
            PwmnKind::Urban50 => place_urban(&mut rng),
        }) else {
            last = "placement violated minimum separation".into();
            continue;
        };
        let topo = WmnTopology::from_points(kind.label(), &points, 1, DEFAULT_RADIO_RANGE_M)?;
        if !topo.is_unit_disk_connected() {
            last = "unit-disk graph disconnected".into();
            continue;
        }
        let m = global_metrics(&topo)?;
        if within_real_world_ranges(&m) {
            return Ok(topo);
        }
        last = format!(
            "metrics out of range: delta={:.4} eps_min={:.2} T={:.3}",
            m.density_delta, m.radius_eps_min, m.transitivity_t
        );
    }
    Err(CoreError::GenerationFailure { attempts: MAX_PLACEMENT_ATTEMPTS, reason: last })
}

fn push_separated(points: &mut Vec<(f64, f64)>, p: (f64, f64), extent: f64) -> bool {
    let p = (p.0.clamp(0.0, extent), p.1.clamp(0.0, extent));
    if points.iter().any(|q| (q.0 - p.0).hypot(q.1 - p.1) < MIN_SEPARATION_M) {
        return false;
    }
    points.push(p);
    true
}

/// Row housing: each street carries a sequence of lots holding a detached
/// house or a semi-detached pair, lots spaced so only neighbouring lots hear
/// each other.
fn place_suburban(rng: &mut ChaCha8Rng) -> Option<Vec<(f64, f64)>> {
    const STREETS_Y: [f64; 3] = [220.0, 470.0, 720.0];
    const PER_STREET: [usize; 3] = [8, 9, 8];
    let extent = PwmnKind::Suburban25.extent_m();
    let mut points = Vec::with_capacity(25);
    for (street, &y0) in STREETS_Y.iter().enumerate() {
        let count = PER_STREET[street];
        let mut x = rng.gen_range(30.0..80.0);
        let mut placed = 0;
        while placed < count {
            let side = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let y = y0 + side * rng.gen_range(8.0..30.0);
            if !push_separated(&mut points, (x, y), extent) {
                return None;
            }
            placed += 1;
            if placed < count && rng.gen_bool(LOT_PAIR_PROBABILITY) {
                let dx = rng.gen_range(6.0..20.0);
                if !push_separated(&mut points, (x + dx, y), extent) {
                    return None;
                }
                placed += 1;
                x += dx;
            }
            x += rng.gen_range(LOT_SPACING.0..LOT_SPACING.1);
        }
    }
    Some(points)
}

/// Residential blocks and office frontages on the rim of two open public
/// spaces. The first cluster of each space faces the other space so the two
/// neighbourhoods can reach each other.
fn place_urban(rng: &mut ChaCha8Rng) -> Option<Vec<(f64, f64)>> {
    const SPACES: [(f64, f64); 2] = [(450.0, 760.0), (1060.0, 740.0)];
    const SPACE_RADIUS: f64 = 200.0;
    const CLUSTERS_PER_SPACE: usize = 5;
    const NODES_PER_CLUSTER: usize = 5;
    let extent = PwmnKind::Urban50.extent_m();
    let mut points = Vec::with_capacity(50);
    for (s, &(cx, cy)) in SPACES.iter().enumerate() {
        let facing = if s == 0 { 0.0 } else { std::f64::consts::PI };
        let phase = facing + rng.gen_range(-0.15..0.15);
        for k in 0..CLUSTERS_PER_SPACE {
            let angle = phase + TAU * k as f64 / CLUSTERS_PER_SPACE as f64 + rng.gen_range(-0.15..0.15);
            let rim = SPACE_RADIUS + rng.gen_range(40.0..80.0);
            let (bx, by) = (cx + rim * angle.cos(), cy + rim * angle.sin());
            if rng.gen_bool(OFFICE_FRONTAGE_PROBABILITY) {
                // frontage running tangent to the rim
                let (tx, ty) = (-angle.sin(), angle.cos());
                let mut offset = -2.0 * 105.0;
                for _ in 0..NODES_PER_CLUSTER {
                    let jitter = rng.gen_range(-15.0..15.0);
                    let p = (bx + offset * tx + jitter * ty, by + offset * ty - jitter * tx);
                    if !push_separated(&mut points, p, extent) {
                        return None;
                    }
                    offset += rng.gen_range(90.0..120.0);
                }
            } else {
                for _ in 0..NODES_PER_CLUSTER {
                    let r = 45.0 * rng.gen::<f64>().sqrt();
                    let a = rng.gen_range(0.0..TAU);
                    if !push_separated(&mut points, (bx + r * a.cos(), by + r * a.sin()), extent) {
                        return None;
                    }
                }
            }
        }
    }
    Some(points)
}
