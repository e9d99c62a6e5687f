//! Analytic network aggregate throughput under a protocol interference model.
//!
//! Flows follow minimum-hop routes over operating links. Each link's rate is
//! the PHY rate divided by one plus the number of conflicting links that also
//! carry traffic, that rate is shared equally between the flows crossing it,
//! and a flow gets the smallest share along its route.

use std::collections::VecDeque;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::assignment::{ChannelAssignment, OperatingLink};
use crate::conflict::Mesh;
use crate::error::{CoreError, Result};
use crate::topology::WmnTopology;

pub const DEFAULT_PAYLOAD_MB: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Flow {
    pub source: usize,
    pub destination: usize,
    pub payload_mb: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    pub flow: Flow,
    pub links: Vec<OperatingLink>,
    /// Visited nodes, source first.
    pub nodes: Vec<usize>,
}

impl Route {
    pub fn hop_count(&self) -> usize {
        self.links.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NatResult {
    pub nat_mbps: f64,
    /// Throughput of each routed flow, in input order.
    pub per_flow_mbps: Vec<f64>,
    pub routed_flow_count: usize,
}

/// One flow per unordered node pair, smaller id as source.
pub fn all_pairs_flows(topo: &WmnTopology) -> Vec<Flow> {
    let n = topo.node_count();
    let mut flows = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for s in 0..n {
        for d in s + 1..n {
            flows.push(Flow { source: s, destination: d, payload_mb: DEFAULT_PAYLOAD_MB });
        }
    }
    flows
}

/// A seeded subset of [`all_pairs_flows`] holding `fraction` of the pairs
/// (at least one), kept in pair order.
pub fn sample_flows(topo: &WmnTopology, fraction: f64, seed: u64) -> Result<Vec<Flow>> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(CoreError::invalid(format!("subsample fraction {fraction} outside (0, 1]")));
    }
    let flows = all_pairs_flows(topo);
    if fraction == 1.0 || flows.is_empty() {
        return Ok(flows);
    }
    let keep = ((fraction * flows.len() as f64).round() as usize).clamp(1, flows.len());
    let mut picked = sample(&mut ChaCha8Rng::seed_from_u64(seed), flows.len(), keep).into_vec();
    picked.sort_unstable();
    Ok(picked.into_iter().map(|i| flows[i]).collect())
}

struct LinkIndex {
    n: usize,
    slot: Vec<usize>,
}

impl LinkIndex {
    fn new(n: usize, links: &[OperatingLink]) -> Self {
        let mut slot = vec![usize::MAX; n * n];
        for (i, l) in links.iter().enumerate() {
            slot[l.a * n + l.b] = i;
            slot[l.b * n + l.a] = i;
        }
        Self { n, slot }
    }

    fn get(&self, a: usize, b: usize) -> Option<usize> {
        let i = self.slot[a * self.n + b];
        (i != usize::MAX).then_some(i)
    }
}

/// Minimum-hop routes as (node path, link indices into `links`). Among
/// equal-length paths the lexicographically smallest node sequence wins.
fn shortest_routes(n: usize, links: &[OperatingLink], flows: &[Flow]) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    let index = LinkIndex::new(n, links);
    let mut adj = vec![Vec::new(); n];
    for l in links {
        adj[l.a].push(l.b);
        adj[l.b].push(l.a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let mut dist_to: Vec<Option<Vec<usize>>> = vec![None; n];
    let mut out = Vec::with_capacity(flows.len());
    let mut failed = Vec::new();
    for f in flows {
        if f.source >= n || f.destination >= n || f.source == f.destination {
            return Err(CoreError::invalid(format!("bad flow {} -> {}", f.source, f.destination)));
        }
        let dist = dist_to[f.destination].get_or_insert_with(|| {
            let mut d = vec![usize::MAX; n];
            d[f.destination] = 0;
            let mut q = VecDeque::from([f.destination]);
            while let Some(v) = q.pop_front() {
                for &w in &adj[v] {
                    if d[w] == usize::MAX {
                        d[w] = d[v] + 1;
                        q.push_back(w);
                    }
                }
            }
            d
        });
        if dist[f.source] == usize::MAX {
            failed.push((f.source, f.destination));
            continue;
        }
        let mut nodes = vec![f.source];
        let mut hops = Vec::with_capacity(dist[f.source]);
        let mut v = f.source;
        while v != f.destination {
            let w = *adj[v].iter().find(|&&w| dist[w] + 1 == dist[v]).expect("BFS predecessor exists");
            hops.push(index.get(v, w).expect("adjacent over an operating link"));
            nodes.push(w);
            v = w;
        }
        out.push((nodes, hops));
    }
    if failed.is_empty() {
        Ok(out)
    } else {
        Err(CoreError::RoutingFailure(failed))
    }
}

pub fn route_flows(topo: &WmnTopology, ca: &ChannelAssignment, flows: &[Flow]) -> Result<Vec<Route>> {
    route_flows_on(&Mesh::with_default_range(topo), ca, flows)
}

pub fn route_flows_on(mesh: &Mesh<'_>, ca: &ChannelAssignment, flows: &[Flow]) -> Result<Vec<Route>> {
    let links = mesh.operating_links(ca)?;
    let routes = shortest_routes(mesh.node_count(), &links, flows)?;
    Ok(flows
        .iter()
        .zip(routes)
        .map(|(f, (nodes, hops))| Route { flow: *f, links: hops.iter().map(|&i| links[i]).collect(), nodes })
        .collect())
}

/// Capacity model on fixed routes: `routes` hold link indices in
/// `0..link_count`, `conflicts` pairs of conflicting link indices.
pub fn nat_on_routes(
    link_count: usize,
    conflicts: &[(usize, usize)],
    routes: &[Vec<usize>],
    phy_rate_mbps: f64,
) -> Result<NatResult> {
    if !(phy_rate_mbps > 0.0 && phy_rate_mbps.is_finite()) {
        return Err(CoreError::invalid(format!("PHY rate {phy_rate_mbps} must be positive")));
    }
    let mut load = vec![0usize; link_count];
    for r in routes {
        if r.is_empty() {
            return Err(CoreError::invalid("route without hops"));
        }
        for &l in r {
            if l >= link_count {
                return Err(CoreError::invalid(format!("link {l} outside 0..{link_count}")));
            }
            load[l] += 1;
        }
    }
    let mut active_degree = vec![0usize; link_count];
    for &(a, b) in conflicts {
        if a >= link_count || b >= link_count || a == b {
            return Err(CoreError::invalid(format!("bad conflict pair ({a}, {b})")));
        }
        if load[a] > 0 && load[b] > 0 {
            active_degree[a] += 1;
            active_degree[b] += 1;
        }
    }
    let share = |l: usize| phy_rate_mbps / (1 + active_degree[l]) as f64 / load[l] as f64;
    let per_flow_mbps: Vec<f64> =
        routes.iter().map(|r| r.iter().map(|&l| share(l)).fold(f64::INFINITY, f64::min)).collect();
    Ok(NatResult { nat_mbps: per_flow_mbps.iter().sum(), routed_flow_count: routes.len(), per_flow_mbps })
}

pub fn simulate_nat(
    topo: &WmnTopology,
    ca: &ChannelAssignment,
    flows: &[Flow],
    phy_rate_mbps: f64,
) -> Result<NatResult> {
    simulate_nat_on(&Mesh::with_default_range(topo), ca, flows, phy_rate_mbps)
}

pub fn simulate_nat_on(
    mesh: &Mesh<'_>,
    ca: &ChannelAssignment,
    flows: &[Flow],
    phy_rate_mbps: f64,
) -> Result<NatResult> {
    if !(phy_rate_mbps > 0.0 && phy_rate_mbps.is_finite()) {
        return Err(CoreError::invalid(format!("PHY rate {phy_rate_mbps} must be positive")));
    }
    let links = mesh.operating_links(ca)?;
    let routes = shortest_routes(mesh.node_count(), &links, flows)?;
    let cg = mesh.conflict_graph_of(links);
    let hops: Vec<Vec<usize>> = routes.into_iter().map(|(_, h)| h).collect();
    nat_on_routes(cg.vertices().len(), cg.edges(), &hops, phy_rate_mbps)
}
