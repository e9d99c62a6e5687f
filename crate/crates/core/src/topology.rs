//! Node placement, unit-disk link derivation and global topology metrics.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// Radio range used by every topology in the study.
pub const DEFAULT_RADIO_RANGE_M: f64 = 250.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: usize,
    pub x: f64,
    pub y: f64,
}

impl Node {
    pub fn distance(&self, other: &Node) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A static mesh deployment: node coordinates plus the radio configuration
/// shared by all nodes.
///
/// Fields are private so the id/coordinate invariants established by
/// [`WmnTopology::new`] hold for every instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WmnTopology {
    label: String,
    #[serde(rename = "radio_range_m")]
    radio_range: f64,
    radios_per_node: usize,
    nodes: Vec<Node>,
}

#[derive(Deserialize)]
struct TopologyFile {
    label: String,
    radio_range_m: f64,
    radios_per_node: usize,
    nodes: Vec<Node>,
}

impl<'de> Deserialize<'de> for WmnTopology {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = TopologyFile::deserialize(d)?;
        WmnTopology::new(raw.label, raw.nodes, raw.radios_per_node, raw.radio_range_m).map_err(serde::de::Error::custom)
    }
}

impl WmnTopology {
    pub fn new(label: impl Into<String>, nodes: Vec<Node>, radios_per_node: usize, radio_range: f64) -> Result<Self> {
        if radios_per_node == 0 {
            return Err(CoreError::invalid("radios_per_node must be at least 1"));
        }
        if !(radio_range.is_finite() && radio_range > 0.0) {
            return Err(CoreError::invalid(format!("radio range {radio_range} must be positive")));
        }
        for (idx, n) in nodes.iter().enumerate() {
            if n.id != idx {
                return Err(CoreError::invalid(format!("node at position {idx} has id {}", n.id)));
            }
            if !(n.x.is_finite() && n.y.is_finite() && n.x >= 0.0 && n.y >= 0.0) {
                return Err(CoreError::invalid(format!("node {} has invalid coordinates", n.id)));
            }
        }
        Ok(Self { label: label.into(), radio_range, radios_per_node, nodes })
    }

    /// Builds a topology from bare coordinates, numbering nodes in order.
    pub fn from_points(
        label: impl Into<String>,
        points: &[(f64, f64)],
        radios_per_node: usize,
        radio_range: f64,
    ) -> Result<Self> {
        let nodes = points.iter().enumerate().map(|(id, &(x, y))| Node { id, x, y }).collect();
        Self::new(label, nodes, radios_per_node, radio_range)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn radio_range(&self) -> f64 {
        self.radio_range
    }

    pub fn radios_per_node(&self) -> usize {
        self.radios_per_node
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        self.nodes[a].distance(&self.nodes[b])
    }

    /// Same placement with a different radio budget (the PHY profile decides
    /// radios per node, not the layout).
    pub fn with_radios(mut self, radios_per_node: usize) -> Result<Self> {
        if radios_per_node == 0 {
            return Err(CoreError::invalid("radios_per_node must be at least 1"));
        }
        self.radios_per_node = radios_per_node;
        Ok(self)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    /// Node adjacency of the unit-disk graph, neighbors in ascending order.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.node_count()];
        for link in potential_links(self) {
            adj[link.a].push(link.b);
            adj[link.b].push(link.a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// True when the unit-disk graph is a single component.
    pub fn is_unit_disk_connected(&self) -> bool {
        components_connected(&self.adjacency())
    }
}

pub(crate) fn components_connected(adj: &[Vec<usize>]) -> bool {
    if adj.len() <= 1 {
        return true;
    }
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == adj.len()
}

/// An edge of the unit-disk graph; `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialLink {
    pub a: usize,
    pub b: usize,
    pub distance: f64,
}

/// All node pairs within radio range (boundary inclusive), ordered by `(a, b)`.
pub fn potential_links(topo: &WmnTopology) -> Vec<PotentialLink> {
    let nodes = topo.nodes();
    let mut out = Vec::new();
    for a in 0..nodes.len() {
        for b in a + 1..nodes.len() {
            let d = nodes[a].distance(&nodes[b]);
            if d <= topo.radio_range() {
                out.push(PotentialLink { a, b, distance: d });
            }
        }
    }
    out
}

/// Square or rectangular grid of `rows × cols` nodes.
pub fn build_grid(rows: usize, cols: usize, spacing: f64, range: f64) -> Result<WmnTopology> {
    if rows < 2 || cols < 2 {
        return Err(CoreError::invalid(format!("grid dimensions {rows}x{cols} must be at least 2x2")));
    }
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(CoreError::invalid(format!("grid spacing {spacing} must be positive")));
    }
    let mut points = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            points.push((i as f64 * spacing, j as f64 * spacing));
        }
    }
    WmnTopology::from_points(format!("GWMN_{rows}x{cols}"), &points, 1, range)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GlobalMetrics {
    pub density_delta: f64,
    pub radius_eps_min: f64,
    pub transitivity_t: f64,
    pub transitivity_defined: bool,
    pub triangles: usize,
    pub connected_triples: usize,
    pub link_count: usize,
}

/// Network density, minimum inter-node distance and transitivity of the
/// unit-disk graph.
pub fn global_metrics(topo: &WmnTopology) -> Result<GlobalMetrics> {
    let n = topo.node_count();
    if n < 2 {
        return Err(CoreError::invalid("global metrics need at least two nodes"));
    }
    let links = potential_links(topo);
    let adj = topo.adjacency();

    let mut eps = f64::INFINITY;
    for a in 0..n {
        for b in a + 1..n {
            eps = eps.min(topo.distance(a, b));
        }
    }

    // Each triangle is seen once per edge (a,b) via a common neighbor c > b.
    let mut triangles = 0usize;
    for l in &links {
        triangles += sorted_common_above(&adj[l.a], &adj[l.b], l.b);
    }
    let triples: usize = adj.iter().map(|nb| nb.len() * nb.len().saturating_sub(1) / 2).sum();
    // Triangle-free graphs report NA rather than zero.
    let (t, defined) =
        if triples == 0 || triangles == 0 { (0.0, false) } else { (3.0 * triangles as f64 / triples as f64, true) };

    Ok(GlobalMetrics {
        density_delta: links.len() as f64 / (n * (n - 1)) as f64,
        radius_eps_min: eps,
        transitivity_t: t,
        transitivity_defined: defined,
        triangles,
        connected_triples: triples,
        link_count: links.len(),
    })
}

fn sorted_common_above(a: &[usize], b: &[usize], floor: usize) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if a[i] > floor {
                    count += 1;
                }
                i += 1;
                j += 1;
            }
        }
    }
    count
}
