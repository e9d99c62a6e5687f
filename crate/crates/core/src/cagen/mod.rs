//! Channel assignment generators: the interference mitigation function,
//! the interference-aware generator built on it, forward correction for
//! topology preservation, a breadth-first baseline and corpus assembly.

mod bfs;
mod corpus;
mod forward;
mod imf;

use serde::{Deserialize, Serialize};

use crate::assignment::{CaKind, Channel, ChannelAssignment, MAX_CHANNEL};
use crate::error::{CoreError, Result};
use crate::tiem::{Scorer, Tie, TiemId, TiemParams};
use crate::topology::WmnTopology;

pub use bfs::bfs_ca;
pub use corpus::{generate_corpus, random_valid_ca, CorpusConfig, CorpusMix};
pub use forward::forward_correct;
pub use imf::{apply_channel_change, imf, ChangeKind, ChannelChange, MAX_SWEEPS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GenMode {
    GraphPreserving,
    TopologyPreserving,
}

#[derive(Debug, Clone)]
pub struct CaGenRequest<'a> {
    pub topo: &'a WmnTopology,
    pub channel_count: Channel,
    pub metric: TiemId,
    pub mode: GenMode,
    pub seed: u64,
    pub params: TiemParams,
    /// Disable the random early return so every run sweeps to convergence.
    pub full_sweep: bool,
}

impl<'a> CaGenRequest<'a> {
    pub fn new(topo: &'a WmnTopology, channel_count: Channel, metric: TiemId, mode: GenMode, seed: u64) -> Self {
        Self { topo, channel_count, metric, mode, seed, params: TiemParams::default(), full_sweep: false }
    }

    pub fn full_sweep(mut self, on: bool) -> Self {
        self.full_sweep = on;
        self
    }

    pub fn params(mut self, params: TiemParams) -> Self {
        self.params = params;
        self
    }

    fn check(&self) -> Result<()> {
        if self.channel_count == 0 || self.channel_count > MAX_CHANNEL {
            return Err(CoreError::invalid(format!("channel count {} must be in 1..=64", self.channel_count)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    AllDefault,
    IcagGpca,
    IcagTpca,
    Bfs,
    Random,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::AllDefault => "all-default",
            Generator::IcagGpca => "icag-gpca",
            Generator::IcagTpca => "icag-tpca",
            Generator::Bfs => "bfs",
            Generator::Random => "random",
        }
    }
}

/// A generated assignment with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct CaRecord {
    pub assignment: ChannelAssignment,
    pub generator: Generator,
    pub metric: Option<TiemId>,
    pub mode: Option<GenMode>,
    /// Estimate under `metric` at generation time; absent for baselines.
    pub tie: Option<Tie>,
    pub seed: u64,
}

/// One JSON-lines row of a persisted corpus; field order is fixed.
#[derive(Debug, Serialize, Deserialize)]
struct RecordLine {
    generator: Generator,
    metric: Option<TiemId>,
    mode: Option<GenMode>,
    seed: u64,
    tie: Option<f64>,
    per_node_channels: Vec<crate::assignment::ChannelSet>,
}

impl CaRecord {
    pub fn to_json_line(&self) -> Result<String> {
        let line = RecordLine {
            generator: self.generator,
            metric: self.metric,
            mode: self.mode,
            seed: self.seed,
            tie: self.tie.map(|t| t.value),
            per_node_channels: self.assignment.channels().to_vec(),
        };
        Ok(serde_json::to_string(&line)?)
    }

    pub fn from_json_line(text: &str, channel_count: Channel) -> Result<Self> {
        let line: RecordLine = serde_json::from_str(text)?;
        let kind = match line.mode {
            Some(GenMode::GraphPreserving) => CaKind::GraphPreserving,
            Some(GenMode::TopologyPreserving) => CaKind::TopologyPreserving,
            None => CaKind::Generic,
        };
        let assignment = ChannelAssignment::new(line.per_node_channels, channel_count, kind)?;
        let tie = match (line.metric, line.tie) {
            (Some(metric), Some(value)) => Some(Tie { value, metric }),
            _ => None,
        };
        Ok(Self { assignment, generator: line.generator, metric: line.metric, mode: line.mode, tie, seed: line.seed })
    }
}

/// Runs the mitigation function and, for topology-preserving requests,
/// forward correction on its output.
pub fn icag(req: &CaGenRequest<'_>) -> Result<CaRecord> {
    req.check()?;
    let scorer = Scorer::new(req.topo, &req.params)?;
    icag_on(&scorer, req)
}

pub(crate) fn icag_on(scorer: &Scorer<'_>, req: &CaGenRequest<'_>) -> Result<CaRecord> {
    let gpca = imf::imf_on(scorer, req)?;
    let (assignment, generator) = match req.mode {
        GenMode::GraphPreserving => (gpca, Generator::IcagGpca),
        GenMode::TopologyPreserving => (forward::forward_correct_on(scorer, &gpca, req.metric)?, Generator::IcagTpca),
    };
    let tie = scorer.score(req.metric, &assignment)?;
    Ok(CaRecord {
        assignment,
        generator,
        metric: Some(req.metric),
        mode: Some(req.mode),
        tie: Some(tie),
        seed: req.seed,
    })
}
