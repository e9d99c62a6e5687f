use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{bfs::bfs_on, icag_on, CaGenRequest, CaRecord, GenMode, Generator};
use crate::assignment::{CaKind, Channel, ChannelAssignment, ChannelSet, MAX_CHANNEL};
use crate::conflict::Mesh;
use crate::error::{CoreError, Result};
use crate::tiem::{Scorer, TiemId, TiemParams};
use crate::topology::WmnTopology;

/// Attempts evaluated per parallel batch.
const BATCH: usize = 32;
/// Attempts per requested record before a generator gives up its quota.
const ATTEMPTS_PER_SLOT: usize = 8;
/// Draws before a random assignment falls back to everyone sharing channel 1.
const RANDOM_DRAWS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CorpusMix {
    /// All-default, ICAG in both modes, BFS baseline and random fill.
    Generic,
    /// ICAG graph-preserving runs only.
    GraphPreserving,
    /// ICAG topology-preserving runs only.
    TopologyPreserving,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusConfig {
    pub master_seed: u64,
    pub channel_count: Channel,
    pub mix: CorpusMix,
    pub params: TiemParams,
    /// Disables the early return inside the mitigation function.
    pub full_sweep: bool,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self {
            master_seed: 1,
            channel_count: 3,
            mix: CorpusMix::Generic,
            params: TiemParams::default(),
            full_sweep: false,
        }
    }
}

fn mix_seed(master: u64, stream: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A connected assignment with random channel sets: every node draws a
/// full-size subset, then nodes in seeded order drop channels while the
/// mesh stays connected.
pub fn random_valid_ca(topo: &WmnTopology, channel_count: Channel, seed: u64) -> Result<ChannelAssignment> {
    let mesh = Mesh::with_default_range(topo);
    random_on(&mesh, channel_count, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn random_on(mesh: &Mesh<'_>, channel_count: Channel, rng: &mut ChaCha8Rng) -> Result<ChannelAssignment> {
    if channel_count == 0 || channel_count > MAX_CHANNEL {
        return Err(CoreError::invalid(format!("channel count {channel_count} must be in 1..=64")));
    }
    let n = mesh.node_count();
    let k = mesh.topology().radios_per_node().min(channel_count as usize);
    let all: Vec<Channel> = (1..=channel_count).collect();
    let mut ca = None;
    for _ in 0..RANDOM_DRAWS {
        let sets = (0..n).map(|_| all.choose_multiple(rng, k).copied().collect()).collect();
        let cand = ChannelAssignment::new(sets, channel_count, CaKind::Generic)?;
        if mesh.is_connected(&cand)? {
            ca = Some(cand);
            break;
        }
    }
    let mut ca = match ca {
        Some(ca) => ca,
        None => ChannelAssignment::all_default(n, channel_count)?,
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for node in order {
        let set = ca.node_channels(node);
        if set.len() < 2 || !rng.gen_bool(0.5) {
            continue;
        }
        let chans: Vec<Channel> = set.iter().collect();
        let drop = *chans.choose(rng).expect("non-empty");
        let cand = ca.with_node_channels(node, set.without(drop))?;
        if mesh.is_connected(&cand)? {
            ca = cand;
        }
    }
    Ok(ca)
}

#[derive(Clone, Copy)]
enum Source {
    Icag(GenMode),
    Bfs,
    Random,
}

impl Source {
    fn stream(self) -> u64 {
        match self {
            Source::Icag(GenMode::GraphPreserving) => 1,
            Source::Icag(GenMode::TopologyPreserving) => 2,
            Source::Bfs => 3,
            Source::Random => 4,
        }
    }
}

struct Builder<'s, 'a> {
    scorer: &'s Scorer<'a>,
    cfg: &'s CorpusConfig,
    seen: HashSet<Vec<ChannelSet>>,
    records: Vec<CaRecord>,
}

impl Builder<'_, '_> {
    fn push(&mut self, rec: CaRecord) -> bool {
        if self.seen.insert(rec.assignment.channels().to_vec()) {
            self.records.push(rec);
            true
        } else {
            false
        }
    }

    fn attempt(&self, source: Source, index: usize) -> Result<CaRecord> {
        let seed = mix_seed(self.cfg.master_seed, source.stream(), index as u64);
        let mesh = self.scorer.mesh();
        match source {
            Source::Icag(mode) => {
                let metric = TiemId::ALL[index % TiemId::ALL.len()];
                let req = CaGenRequest::new(mesh.topology(), self.cfg.channel_count, metric, mode, seed)
                    .params(self.cfg.params)
                    .full_sweep(self.cfg.full_sweep);
                icag_on(self.scorer, &req)
            }
            Source::Bfs => bfs_on(mesh, self.cfg.channel_count, seed),
            Source::Random => Ok(CaRecord {
                assignment: random_on(mesh, self.cfg.channel_count, &mut ChaCha8Rng::seed_from_u64(seed))?,
                generator: Generator::Random,
                metric: None,
                mode: None,
                tie: None,
                seed,
            }),
        }
    }

    /// Adds up to `quota` new distinct records from `source`; returns how
    /// many were added.
    fn fill(&mut self, source: Source, quota: usize) -> Result<usize> {
        let budget = quota * ATTEMPTS_PER_SLOT + BATCH;
        let mut added = 0;
        let mut next = 0;
        while added < quota && next < budget {
            let batch: Vec<Result<CaRecord>> =
                (next..next + BATCH).into_par_iter().map(|i| self.attempt(source, i)).collect();
            next += BATCH;
            for rec in batch {
                if added == quota {
                    break;
                }
                if self.push(rec?) {
                    added += 1;
                }
            }
        }
        Ok(added)
    }
}

/// Builds `size` distinct assignments for `topo`, deterministic in the
/// master seed.
///
/// The generic mix starts with the all-default assignment, then takes 60%
/// graph-preserving and 20% topology-preserving ICAG runs cycling through
/// the four metrics, 15% BFS baselines, and fills the rest with random
/// connected assignments. Any shortfall of one generator passes to the
/// next.
pub fn generate_corpus(topo: &WmnTopology, size: usize, cfg: &CorpusConfig) -> Result<Vec<CaRecord>> {
    if size == 0 {
        return Err(CoreError::invalid("corpus size must be at least 1"));
    }
    let scorer = Scorer::new(topo, &cfg.params)?;
    let mut b = Builder { scorer: &scorer, cfg, seen: HashSet::new(), records: Vec::with_capacity(size) };
    match cfg.mix {
        CorpusMix::Generic => {
            b.push(CaRecord {
                assignment: ChannelAssignment::all_default(topo.node_count(), cfg.channel_count)?,
                generator: Generator::AllDefault,
                metric: None,
                mode: None,
                tie: None,
                seed: cfg.master_seed,
            });
            let share = |f: f64| ((f * size as f64).round() as usize).min(size - 1);
            let plan = [
                (Source::Icag(GenMode::GraphPreserving), share(0.60)),
                (Source::Icag(GenMode::TopologyPreserving), share(0.20)),
                (Source::Bfs, share(0.15)),
            ];
            let mut carry = 0;
            for (source, quota) in plan {
                let want = (quota + carry).min(size - b.records.len());
                let got = b.fill(source, want)?;
                carry = want - got;
            }
            let rest = size - b.records.len();
            b.fill(Source::Random, rest)?;
        }
        CorpusMix::GraphPreserving => {
            b.fill(Source::Icag(GenMode::GraphPreserving), size)?;
        }
        CorpusMix::TopologyPreserving => {
            b.fill(Source::Icag(GenMode::TopologyPreserving), size)?;
        }
    }
    if b.records.len() < size {
        return Err(CoreError::CorpusUnderflow { achieved: b.records.len(), requested: size });
    }
    Ok(b.records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::build_grid;

    #[test]
    fn random_assignments_are_connected() {
        let g = build_grid(4, 4, 250.0, 250.0).unwrap().with_radios(2).unwrap();
        let mesh = Mesh::with_default_range(&g);
        for seed in 0..20 {
            let ca = random_valid_ca(&g, 3, seed).unwrap();
            assert!(mesh.is_connected(&ca).unwrap());
            ca.validate_for(&g).unwrap();
        }
    }

    #[test]
    fn tiny_instance_underflows() {
        let t = WmnTopology::from_points("pair", &[(0.0, 0.0), (100.0, 0.0)], 1, 250.0).unwrap();
        let cfg = CorpusConfig::default();
        match generate_corpus(&t, 100, &cfg) {
            Err(CoreError::CorpusUnderflow { achieved, requested }) => {
                assert_eq!(achieved, 3);
                assert_eq!(requested, 100);
            }
            other => panic!("expected underflow, got {other:?}"),
        }
    }
}
