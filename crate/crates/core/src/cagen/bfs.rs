use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CaRecord, Generator};
use crate::assignment::{Channel, ChannelAssignment, ChannelSet, MAX_CHANNEL};
use crate::conflict::Mesh;
use crate::error::{CoreError, Result};
use crate::topology::WmnTopology;

/// Breadth-first baseline from a seeded root.
///
/// Each visited node ranks channels by how often they are used by already
/// assigned nodes within interference range, ties broken by a seeded
/// rotation of `1..=channel_count`. A node fills its radios from the top of
/// that ranking, except that its first radio takes the best-ranked channel
/// of its BFS parent so the tree link always operates.
pub fn bfs_ca(topo: &WmnTopology, channel_count: Channel, seed: u64) -> Result<CaRecord> {
    bfs_on(&Mesh::with_default_range(topo), channel_count, seed)
}

pub(crate) fn bfs_on(mesh: &Mesh<'_>, channel_count: Channel, seed: u64) -> Result<CaRecord> {
    if channel_count == 0 || channel_count > MAX_CHANNEL {
        return Err(CoreError::invalid(format!("channel count {channel_count} must be in 1..=64")));
    }
    let topo = mesh.topology();
    if !topo.is_unit_disk_connected() {
        return Err(CoreError::invalid(format!("topology {} is disconnected", topo.label())));
    }
    let n = mesh.node_count();
    let k = topo.radios_per_node().min(channel_count as usize);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let root = rng.gen_range(0..n);
    let offset = rng.gen_range(0..channel_count);
    let rotation = |c: Channel| (c - 1 + channel_count - offset) % channel_count;

    let mut sets: Vec<Option<ChannelSet>> = vec![None; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::from([root]);
    let mut seen = vec![false; n];
    seen[root] = true;
    while let Some(v) = queue.pop_front() {
        let mut usage = vec![0usize; channel_count as usize + 1];
        for (u, set) in sets.iter().enumerate() {
            if let Some(set) = set {
                if mesh.within_interference(u, v) {
                    for c in set.iter() {
                        usage[c as usize] += 1;
                    }
                }
            }
        }
        let mut ranked: Vec<Channel> = (1..=channel_count).collect();
        ranked.sort_by_key(|&c| (usage[c as usize], rotation(c)));

        let mut set = ChannelSet::EMPTY;
        if let Some(ps) = sets.get(parent[v]).copied().flatten() {
            let first = ranked.iter().copied().find(|&c| ps.contains(c)).expect("parent set non-empty");
            set.insert(first);
        }
        for &c in &ranked {
            if set.len() == k {
                break;
            }
            set.insert(c);
        }
        sets[v] = Some(set);
        for &w in &mesh.adjacency()[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    let channels = sets.into_iter().map(|s| s.expect("connected topology visits every node")).collect();
    Ok(CaRecord {
        assignment: ChannelAssignment::new(channels, channel_count, crate::assignment::CaKind::Generic)?,
        generator: Generator::Bfs,
        metric: None,
        mode: None,
        tie: None,
        seed,
    })
}
