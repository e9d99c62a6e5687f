//! Conflict graphs over operating links, and a cached view of a topology
//! used by every evaluator that scores many assignments on one layout.

use crate::assignment::{links_connected, ChannelAssignment, OperatingLink};
use crate::error::{CoreError, Result};
use crate::topology::{potential_links, PotentialLink, WmnTopology};

/// Interference range as a multiple of radio range when none is configured.
pub const DEFAULT_INTERFERENCE_FACTOR: f64 = 2.0;

/// Vertices are operating links; an edge joins two co-channel links that
/// share a node or have endpoints within interference range.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    vertices: Vec<OperatingLink>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    words: usize,
    bits: Vec<u64>,
}

impl ConflictGraph {
    fn empty(vertices: Vec<OperatingLink>) -> Self {
        let n = vertices.len();
        let words = n.div_ceil(64).max(1);
        Self { vertices, edges: Vec::new(), adjacency: vec![Vec::new(); n], words, bits: vec![0; words * n] }
    }

    fn add_edge(&mut self, i: usize, j: usize) {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.edges.push((i, j));
        self.adjacency[i].push(j);
        self.adjacency[j].push(i);
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
        self.bits[j * self.words + i / 64] |= 1 << (i % 64);
    }

    pub fn vertices(&self) -> &[OperatingLink] {
        &self.vertices
    }

    /// Edges as `(i, j)` vertex-index pairs with `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn conflicts(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] & (1 << (j % 64)) != 0
    }
}

/// Distances and adjacency of one topology under a fixed interference
/// range, precomputed once.
#[derive(Debug, Clone)]
pub struct Mesh<'a> {
    topo: &'a WmnTopology,
    links: Vec<PotentialLink>,
    adjacency: Vec<Vec<usize>>,
    interference_range: f64,
    near: Vec<bool>,
}

impl<'a> Mesh<'a> {
    pub fn new(topo: &'a WmnTopology, interference_range: f64) -> Result<Self> {
        if interference_range.is_nan() || interference_range < topo.radio_range() {
            return Err(CoreError::invalid(format!(
                "interference range {interference_range} is below radio range {}",
                topo.radio_range()
            )));
        }
        let n = topo.node_count();
        let mut near = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                near[a * n + b] = a != b && topo.distance(a, b) <= interference_range;
            }
        }
        Ok(Self { topo, links: potential_links(topo), adjacency: topo.adjacency(), interference_range, near })
    }

    /// Mesh with the default interference range of twice the radio range.
    pub fn with_default_range(topo: &'a WmnTopology) -> Self {
        Self::new(topo, DEFAULT_INTERFERENCE_FACTOR * topo.radio_range())
            .expect("default interference range exceeds radio range")
    }

    pub fn topology(&self) -> &'a WmnTopology {
        self.topo
    }

    pub fn potential_links(&self) -> &[PotentialLink] {
        &self.links
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn interference_range(&self) -> f64 {
        self.interference_range
    }

    pub fn node_count(&self) -> usize {
        self.topo.node_count()
    }

    /// Whether two nodes are distinct and within interference range.
    pub fn within_interference(&self, a: usize, b: usize) -> bool {
        self.near[a * self.node_count() + b]
    }

    pub fn links_conflict(&self, l1: &OperatingLink, l2: &OperatingLink) -> bool {
        l1.channel == l2.channel
            && (l1.shares_node(l2)
                || [l1.a, l1.b].iter().any(|&u| self.within_interference(u, l2.a) || self.within_interference(u, l2.b)))
    }

    fn check(&self, ca: &ChannelAssignment) -> Result<()> {
        if ca.node_count() != self.node_count() {
            return Err(CoreError::invalid(format!(
                "assignment covers {} nodes, topology has {}",
                ca.node_count(),
                self.node_count()
            )));
        }
        Ok(())
    }

    pub fn operating_links(&self, ca: &ChannelAssignment) -> Result<Vec<OperatingLink>> {
        self.check(ca)?;
        Ok(self
            .links
            .iter()
            .filter_map(|l| {
                let common = ca.node_channels(l.a).intersection(&ca.node_channels(l.b));
                common.lowest().map(|channel| OperatingLink { a: l.a, b: l.b, channel })
            })
            .collect())
    }

    pub fn conflict_graph(&self, ca: &ChannelAssignment) -> Result<ConflictGraph> {
        Ok(self.conflict_graph_of(self.operating_links(ca)?))
    }

    pub fn conflict_graph_of(&self, links: Vec<OperatingLink>) -> ConflictGraph {
        let mut by_channel: Vec<(u32, usize)> = links.iter().enumerate().map(|(i, l)| (l.channel, i)).collect();
        by_channel.sort_unstable();
        let mut cg = ConflictGraph::empty(links);
        let mut start = 0;
        while start < by_channel.len() {
            let ch = by_channel[start].0;
            let end = start + by_channel[start..].iter().take_while(|(c, _)| *c == ch).count();
            for x in start..end {
                for y in x + 1..end {
                    let (i, j) = (by_channel[x].1, by_channel[y].1);
                    if self.links_conflict(&cg.vertices[i], &cg.vertices[j]) {
                        cg.add_edge(i, j);
                    }
                }
            }
            start = end;
        }
        cg.edges.sort_unstable();
        for list in &mut cg.adjacency {
            list.sort_unstable();
        }
        cg
    }

    pub fn is_connected(&self, ca: &ChannelAssignment) -> Result<bool> {
        Ok(links_connected(self.node_count(), &self.operating_links(ca)?))
    }

    pub fn preserves_topology(&self, ca: &ChannelAssignment) -> Result<bool> {
        self.check(ca)?;
        Ok(self.links.iter().all(|l| !ca.node_channels(l.a).is_disjoint(&ca.node_channels(l.b))))
    }
}

/// Conflict graph of `ca` on `topo` with the given interference range.
pub fn build_conflict_graph(
    topo: &WmnTopology,
    ca: &ChannelAssignment,
    interference_range: f64,
) -> Result<ConflictGraph> {
    Mesh::new(topo, interference_range)?.conflict_graph(ca)
}
