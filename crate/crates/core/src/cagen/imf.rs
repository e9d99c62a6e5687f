use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CaGenRequest, GenMode};
use crate::assignment::{CaKind, Channel, ChannelAssignment, ChannelSet};
use crate::error::{CoreError, Result};
use crate::tiem::{Scorer, Tie, TiemId};

/// Upper bound on sweeps over nodes × channels.
pub const MAX_SWEEPS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChangeKind {
    /// The channel was already on one of the node's radios.
    Unchanged,
    /// A free radio took the channel.
    Added,
    /// A radio was retuned from `removed` to the channel.
    Replaced { removed: Channel },
}

/// A tentative channel change; `previous` restores the node.
#[derive(Debug, Clone)]
pub struct ChannelChange {
    pub assignment: ChannelAssignment,
    pub node: usize,
    pub previous: ChannelSet,
    pub kind: ChangeKind,
    /// Estimate of `assignment`, when the change rule had to compute it.
    pub tie: Option<Tie>,
}

impl ChannelChange {
    pub fn revert(&self) -> ChannelAssignment {
        self.assignment.with_node_channels(self.node, self.previous).expect("previous channel set was valid")
    }
}

/// Installs `channel` on `node`.
///
/// With a free radio the channel is added. With every radio busy, one
/// channel is retuned: among replacements that keep the mesh connected
/// (all replacements when none does), the one with the lowest estimate
/// under `metric`, ties to the lowest removed channel.
pub fn apply_channel_change(
    scorer: &Scorer<'_>,
    metric: TiemId,
    ca: &ChannelAssignment,
    node: usize,
    channel: Channel,
) -> Result<ChannelChange> {
    if node >= ca.node_count() {
        return Err(CoreError::invalid(format!("unknown node {node}")));
    }
    if channel == 0 || channel > ca.channel_count() {
        return Err(CoreError::invalid(format!("channel {channel} outside 1..={}", ca.channel_count())));
    }
    let current = ca.node_channels(node);
    if current.contains(channel) {
        return Ok(ChannelChange {
            assignment: ca.clone(),
            node,
            previous: current,
            kind: ChangeKind::Unchanged,
            tie: None,
        });
    }
    let radios = scorer.mesh().topology().radios_per_node();
    if current.len() < radios {
        return Ok(ChannelChange {
            assignment: ca.with_node_channels(node, current.with(channel))?,
            node,
            previous: current,
            kind: ChangeKind::Added,
            tie: None,
        });
    }

    let mut best: Option<(bool, Tie, Channel, ChannelAssignment)> = None;
    for removed in current.iter() {
        let cand = ca.with_node_channels(node, current.without(removed).with(channel))?;
        let connected = scorer.mesh().is_connected(&cand)?;
        let tie = scorer.score(metric, &cand)?;
        let better = match &best {
            None => true,
            Some((bc, bt, _, _)) => match (connected, *bc) {
                (true, false) => true,
                (false, true) => false,
                _ => tie.min_form().total_cmp(&bt.min_form()) == Ordering::Less,
            },
        };
        if better {
            best = Some((connected, tie, removed, cand));
        }
    }
    let (_, tie, removed, assignment) = best.expect("full node has at least one channel");
    Ok(ChannelChange { assignment, node, previous: current, kind: ChangeKind::Replaced { removed }, tie: Some(tie) })
}

/// Interference mitigation: greedy single-node changes from the all-default
/// assignment, accepted when the mesh stays connected and the estimate
/// drops. A free-radio addition is also accepted when the estimate does not
/// rise, since channels on idle radios are what later retunes build on.
/// After its channels, a node with several channels also tries releasing
/// each one, kept only on a strict improvement.
///
/// Nodes are visited in seeded order, trying every channel. After each
/// node a seeded coin decides whether to return the current assignment;
/// `full_sweep` disables this and repeats sweeps until one accepts nothing.
pub fn imf(req: &CaGenRequest<'_>) -> Result<ChannelAssignment> {
    req.check()?;
    let scorer = Scorer::new(req.topo, &req.params)?;
    imf_on(&scorer, req)
}

pub(crate) fn imf_on(scorer: &Scorer<'_>, req: &CaGenRequest<'_>) -> Result<ChannelAssignment> {
    let mesh = scorer.mesh();
    let n = mesh.node_count();
    let kind = match req.mode {
        GenMode::GraphPreserving | GenMode::TopologyPreserving => CaKind::GraphPreserving,
    };
    let mut ca = ChannelAssignment::all_default(n, req.channel_count)?.with_kind(kind);
    if n <= 1 {
        return Ok(ca);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);

    let mut prev = scorer.score(req.metric, &ca)?.min_form();
    for _ in 0..MAX_SWEEPS {
        let mut accepted = false;
        for &node in &order {
            for channel in 1..=req.channel_count {
                let change = apply_channel_change(scorer, req.metric, &ca, node, channel)?;
                if change.kind == ChangeKind::Unchanged || !mesh.is_connected(&change.assignment)? {
                    continue;
                }
                let curr = match change.tie {
                    Some(t) => t.min_form(),
                    None => scorer.score(req.metric, &change.assignment)?.min_form(),
                };
                let keep = curr < prev || (change.kind == ChangeKind::Added && curr <= prev);
                if keep {
                    ca = change.assignment;
                    prev = curr;
                    accepted = true;
                }
            }
            let current = ca.node_channels(node);
            if current.len() > 1 {
                for channel in current.iter() {
                    let cand = ca.with_node_channels(node, current.without(channel))?;
                    if !mesh.is_connected(&cand)? {
                        continue;
                    }
                    let curr = scorer.score(req.metric, &cand)?.min_form();
                    if curr < prev {
                        ca = cand;
                        prev = curr;
                        accepted = true;
                        break;
                    }
                }
            }
            if !req.full_sweep && rng.gen::<u32>() % 2 == 0 {
                return Ok(ca);
            }
        }
        if !accepted {
            break;
        }
    }
    Ok(ca)
}
