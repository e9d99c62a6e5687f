//! Theoretical interference estimation metrics.
//!
//! TID counts conflict-graph edges. The other three metrics are link-level
//! surrogates that keep the qualitative behaviour of the published metrics:
//!
//! * CDAL: `Σ_c n_c (n_c − 1) / 2` over channels, `n_c` links on channel `c`.
//! * CXLS: over every connected set of `X` operating links, count the pairs
//!   inside the set that do not conflict, and sum.
//! * CALM: `Σ_l 1 / (1 + deg(l))` with `deg` the conflict-graph degree.
//!
//! TID and CDAL grow with interference; CXLS and CALM grow with resilience.
//! [`Tie::min_form`] maps all four onto a lower-is-better scale.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::assignment::{ChannelAssignment, OperatingLink};
use crate::conflict::{ConflictGraph, Mesh, DEFAULT_INTERFERENCE_FACTOR};
use crate::error::{CoreError, Result};
use crate::topology::WmnTopology;

/// Default link-set size for CXLS.
pub const DEFAULT_XLS_SIZE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TiemId {
    #[serde(rename = "TID")]
    Tid,
    #[serde(rename = "CDAL")]
    Cdal,
    #[serde(rename = "CXLS")]
    Cxls,
    #[serde(rename = "CALM")]
    Calm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    HigherIsWorse,
    HigherIsBetter,
}

impl TiemId {
    pub const ALL: [TiemId; 4] = [TiemId::Tid, TiemId::Cdal, TiemId::Cxls, TiemId::Calm];

    pub fn orientation(self) -> Orientation {
        match self {
            TiemId::Tid | TiemId::Cdal => Orientation::HigherIsWorse,
            TiemId::Cxls | TiemId::Calm => Orientation::HigherIsBetter,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TiemId::Tid => "TID",
            TiemId::Cdal => "CDAL",
            TiemId::Cxls => "CXLS",
            TiemId::Calm => "CALM",
        }
    }
}

impl fmt::Display for TiemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TiemId {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "TID" => Ok(TiemId::Tid),
            "CDAL" | "CDAL_COST" => Ok(TiemId::Cdal),
            "CXLS" | "CXLS_WT" => Ok(TiemId::Cxls),
            "CALM" => Ok(TiemId::Calm),
            _ => Err(CoreError::invalid(format!("unknown interference metric '{s}'"))),
        }
    }
}

/// A theoretical interference estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tie {
    pub value: f64,
    pub metric: TiemId,
}

impl Tie {
    /// Value on a lower-is-better scale.
    pub fn min_form(&self) -> f64 {
        match self.metric.orientation() {
            Orientation::HigherIsWorse => self.value,
            Orientation::HigherIsBetter => -self.value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TiemParams {
    /// Interference range in meters; twice the radio range when absent.
    pub interference_range_m: Option<f64>,
    /// Link-set size for CXLS.
    pub xls_size: usize,
}

impl Default for TiemParams {
    fn default() -> Self {
        Self { interference_range_m: None, xls_size: DEFAULT_XLS_SIZE }
    }
}

impl TiemParams {
    pub fn interference_range(&self, topo: &WmnTopology) -> f64 {
        self.interference_range_m.unwrap_or(DEFAULT_INTERFERENCE_FACTOR * topo.radio_range())
    }

    pub fn mesh<'a>(&self, topo: &'a WmnTopology) -> Result<Mesh<'a>> {
        Mesh::new(topo, self.interference_range(topo))
    }
}

pub fn compute_tid(cg: &ConflictGraph) -> Tie {
    Tie { value: cg.edge_count() as f64, metric: TiemId::Tid }
}

pub fn compute_cdal(links: &[OperatingLink]) -> Tie {
    let mut per_channel = std::collections::BTreeMap::<u32, u64>::new();
    for l in links {
        *per_channel.entry(l.channel).or_default() += 1;
    }
    let cost: u64 = per_channel.values().map(|&n| n * (n - 1) / 2).sum();
    Tie { value: cost as f64, metric: TiemId::Cdal }
}

pub fn compute_calm(cg: &ConflictGraph) -> Tie {
    let value = (0..cg.vertices().len()).map(|v| 1.0 / (1.0 + cg.degree(v) as f64)).sum();
    Tie { value, metric: TiemId::Calm }
}

/// CXLS over connected sets of `xls_size` links of the conflict graph's
/// vertex set.
pub fn compute_cxls(cg: &ConflictGraph, node_count: usize, xls_size: usize) -> Result<Tie> {
    if xls_size < 2 {
        return Err(CoreError::invalid(format!("CXLS link-set size {xls_size} must be at least 2")));
    }
    let incident = incidence(cg.vertices(), node_count);
    let value = if xls_size == 3 { triple_weight(cg, &incident) } else { enumerated_weight(cg, &incident, xls_size) };
    Ok(Tie { value: value as f64, metric: TiemId::Cxls })
}

fn incidence(links: &[OperatingLink], node_count: usize) -> Vec<Vec<usize>> {
    let mut incident = vec![Vec::new(); node_count];
    for (i, l) in links.iter().enumerate() {
        incident[l.a].push(i);
        incident[l.b].push(i);
    }
    incident
}

fn set_weight(cg: &ConflictGraph, set: &[usize]) -> u64 {
    let mut w = 0;
    for (k, &i) in set.iter().enumerate() {
        for &j in &set[k + 1..] {
            if !cg.conflicts(i, j) {
                w += 1;
            }
        }
    }
    w
}

/// Connected three-link sets are stars, paths and triangles; each is visited
/// exactly once.
fn triple_weight(cg: &ConflictGraph, incident: &[Vec<usize>]) -> u64 {
    let links = cg.vertices();
    let mut total = 0;
    for at in incident {
        for x in 0..at.len() {
            for y in x + 1..at.len() {
                for z in y + 1..at.len() {
                    total += set_weight(cg, &[at[x], at[y], at[z]]);
                }
            }
        }
    }
    for (m, mid) in links.iter().enumerate() {
        for &p in &incident[mid.a] {
            if p == m {
                continue;
            }
            let u = links[p].other(mid.a);
            for &q in &incident[mid.b] {
                if q == m {
                    continue;
                }
                let w = links[q].other(mid.b);
                // a triangle is reached from each of its links; keep one
                if u != w || (m < p && m < q) {
                    total += set_weight(cg, &[p, m, q]);
                }
            }
        }
    }
    total
}

/// Depth-first walk over the line graph, deduplicating link sets.
fn enumerated_weight(cg: &ConflictGraph, incident: &[Vec<usize>], size: usize) -> u64 {
    fn walk(
        links: &[OperatingLink],
        incident: &[Vec<usize>],
        size: usize,
        path: &mut Vec<usize>,
        seen: &mut HashSet<Vec<usize>>,
    ) {
        if path.len() == size {
            let mut key = path.clone();
            key.sort_unstable();
            seen.insert(key);
            return;
        }
        let last = links[*path.last().unwrap()];
        for node in [last.a, last.b] {
            for &next in &incident[node] {
                if !path.contains(&next) {
                    path.push(next);
                    walk(links, incident, size, path, seen);
                    path.pop();
                }
            }
        }
    }
    let mut seen = HashSet::new();
    let links = cg.vertices();
    for start in 0..links.len() {
        let mut path = vec![start];
        walk(links, incident, size, &mut path, &mut seen);
    }
    seen.iter().map(|set| set_weight(cg, set)).sum()
}

/// All four estimates of one assignment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TieVector {
    pub tid: f64,
    pub cdal: f64,
    pub cxls: f64,
    pub calm: f64,
}

impl TieVector {
    pub fn get(&self, metric: TiemId) -> f64 {
        match metric {
            TiemId::Tid => self.tid,
            TiemId::Cdal => self.cdal,
            TiemId::Cxls => self.cxls,
            TiemId::Calm => self.calm,
        }
    }
}

/// Evaluates estimates on one mesh; the unit the generators call in their
/// inner loops.
#[derive(Debug, Clone)]
pub struct Scorer<'a> {
    mesh: Mesh<'a>,
    xls_size: usize,
}

impl<'a> Scorer<'a> {
    pub fn new(topo: &'a WmnTopology, params: &TiemParams) -> Result<Self> {
        if params.xls_size < 2 {
            return Err(CoreError::invalid(format!("CXLS link-set size {} must be at least 2", params.xls_size)));
        }
        Ok(Self { mesh: params.mesh(topo)?, xls_size: params.xls_size })
    }

    pub fn mesh(&self) -> &Mesh<'a> {
        &self.mesh
    }

    pub fn score_graph(&self, metric: TiemId, cg: &ConflictGraph) -> Result<Tie> {
        Ok(match metric {
            TiemId::Tid => compute_tid(cg),
            TiemId::Cdal => compute_cdal(cg.vertices()),
            TiemId::Cxls => compute_cxls(cg, self.mesh.node_count(), self.xls_size)?,
            TiemId::Calm => compute_calm(cg),
        })
    }

    pub fn score(&self, metric: TiemId, ca: &ChannelAssignment) -> Result<Tie> {
        self.score_graph(metric, &self.mesh.conflict_graph(ca)?)
    }

    pub fn score_all(&self, ca: &ChannelAssignment) -> Result<TieVector> {
        let cg = self.mesh.conflict_graph(ca)?;
        Ok(TieVector {
            tid: compute_tid(&cg).value,
            cdal: compute_cdal(cg.vertices()).value,
            cxls: compute_cxls(&cg, self.mesh.node_count(), self.xls_size)?.value,
            calm: compute_calm(&cg).value,
        })
    }
}

/// Scores `ca` on `topo` with `metric`.
pub fn evaluate(metric: TiemId, topo: &WmnTopology, ca: &ChannelAssignment, params: &TiemParams) -> Result<Tie> {
    Scorer::new(topo, params)?.score(metric, ca)
}
