use crate::assignment::{CaKind, ChannelAssignment, ChannelSet};
use crate::error::{CoreError, Result};
use crate::tiem::{Scorer, TiemId, TiemParams};
use crate::topology::WmnTopology;

/// Restores every potential link of an assignment.
///
/// Nodes are visited in id order. For each neighbour pair `i < j` with
/// disjoint sets, one channel of `j` is swapped for one of `i`'s. Among all
/// (mutual, exclusive) pairs the swap breaking the fewest of `j`'s other
/// links wins, then the lowest estimate under `metric`, then the lowest
/// channel ids. When `j` has a free radio the mutual channel is simply added.
/// Passes repeat until no pair is left disjoint. If swaps keep cycling, the
/// most used channel is pushed into both ends of every remaining disjoint
/// pair and never removed, which always terminates.
pub fn forward_correct(
    topo: &WmnTopology,
    ca: &ChannelAssignment,
    metric: TiemId,
    params: &TiemParams,
) -> Result<ChannelAssignment> {
    let scorer = Scorer::new(topo, params)?;
    forward_correct_on(&scorer, ca, metric)
}

pub(crate) fn forward_correct_on(
    scorer: &Scorer<'_>,
    ca: &ChannelAssignment,
    metric: TiemId,
) -> Result<ChannelAssignment> {
    let mesh = scorer.mesh();
    let topo = mesh.topology();
    ca.validate_for(topo)?;
    let n = mesh.node_count();
    let adj = mesh.adjacency();
    let radios = topo.radios_per_node();
    let max_passes = 2 * n + 2;
    let mut cur = ca.clone().with_kind(CaKind::TopologyPreserving);
    let mut last_pair = None;

    for _ in 0..max_passes {
        let mut changed = false;
        for i in 0..n {
            for &j in &adj[i] {
                let (si, sj) = (cur.node_channels(i), cur.node_channels(j));
                if j <= i || !si.is_disjoint(&sj) {
                    continue;
                }
                last_pair = Some((i, j));
                let mut best: Option<((usize, f64, u32, u32), ChannelSet)> = None;
                for mutual in si.iter() {
                    let swaps: Vec<(u32, ChannelSet)> = if sj.len() < radios {
                        vec![(0, sj.with(mutual))]
                    } else {
                        sj.iter().map(|ex| (ex, sj.without(ex).with(mutual))).collect()
                    };
                    for (ex, next) in swaps {
                        let broken = adj[j]
                            .iter()
                            .filter(|&&k| k != i)
                            .filter(|&&k| {
                                let sk = cur.node_channels(k);
                                !sj.is_disjoint(&sk) && next.is_disjoint(&sk)
                            })
                            .count();
                        let cand = cur.with_node_channels(j, next)?;
                        let tie = scorer.score(metric, &cand)?.min_form();
                        let key = (broken, tie, mutual, ex);
                        let better = best.as_ref().is_none_or(|(bk, _)| {
                            key.0
                                .cmp(&bk.0)
                                .then(key.1.total_cmp(&bk.1))
                                .then(key.2.cmp(&bk.2))
                                .then(key.3.cmp(&bk.3))
                                .is_lt()
                        });
                        if better {
                            best = Some((key, next));
                        }
                    }
                }
                let (_, next) = best.expect("non-empty channel sets give a candidate");
                cur = cur.with_node_channels(j, next)?;
                changed = true;
            }
        }
        if !changed || mesh.preserves_topology(&cur)? {
            break;
        }
    }
    if !mesh.preserves_topology(&cur)? {
        cur = anchor(scorer, cur, metric)?;
    }
    if mesh.preserves_topology(&cur)? {
        Ok(cur)
    } else {
        let (i, j) = last_pair.expect("a disjoint pair was visited");
        Err(CoreError::CorrectionFailure(i, j))
    }
}

fn anchor(scorer: &Scorer<'_>, mut cur: ChannelAssignment, metric: TiemId) -> Result<ChannelAssignment> {
    let mesh = scorer.mesh();
    let n = mesh.node_count();
    let adj = mesh.adjacency();
    let radios = mesh.topology().radios_per_node();
    let mut uses = std::collections::BTreeMap::new();
    for v in 0..n {
        for c in cur.node_channels(v).iter() {
            *uses.entry(c).or_insert(0usize) += 1;
        }
    }
    let Some(c) = uses.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))).map(|(c, _)| *c) else {
        return Ok(cur);
    };
    for i in 0..n {
        for &j in &adj[i] {
            if j <= i || !cur.node_channels(i).is_disjoint(&cur.node_channels(j)) {
                continue;
            }
            for v in [i, j] {
                let sv = cur.node_channels(v);
                if sv.contains(c) {
                    continue;
                }
                let options: Vec<(u32, ChannelSet)> = if sv.len() < radios {
                    vec![(0, sv.with(c))]
                } else {
                    sv.iter().map(|ex| (ex, sv.without(ex).with(c))).collect()
                };
                let mut best: Option<((usize, f64, u32), ChannelSet)> = None;
                for (ex, next) in options {
                    let broken = adj[v]
                        .iter()
                        .filter(|&&k| {
                            let sk = cur.node_channels(k);
                            !sv.is_disjoint(&sk) && next.is_disjoint(&sk)
                        })
                        .count();
                    let tie = scorer.score(metric, &cur.with_node_channels(v, next)?)?.min_form();
                    let key = (broken, tie, ex);
                    let better = best.as_ref().is_none_or(|(bk, _)| {
                        key.0.cmp(&bk.0).then(key.1.total_cmp(&bk.1)).then(key.2.cmp(&bk.2)).is_lt()
                    });
                    if better {
                        best = Some((key, next));
                    }
                }
                let (_, next) = best.expect("non-empty channel sets give a candidate");
                cur = cur.with_node_channels(v, next)?;
            }
        }
    }
    Ok(cur)
}
