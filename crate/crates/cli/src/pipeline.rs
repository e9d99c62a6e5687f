use std::collections::BTreeMap;

use cir_core::cagen::{generate_corpus, CorpusConfig, Generator};
use cir_core::capsim::{sample_flows, simulate_nat_on};
use cir_core::tiem::{Scorer, TieVector};
use cir_stats::{fit_ols, pearson_cc, relationship_label, sam_select, Dataset, Direction, StatsError};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{RunConfig, TopologyId};
use crate::error::{CirError, Result};
use crate::scenario::{enumerate_scenarios, CaType, FitFailure, Nature, ScenarioReport, ScenarioSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusRow {
    pub ca_id: usize,
    pub generator: Generator,
    pub ties: TieVector,
    pub nat_mbps: f64,
}

/// Scored assignments of one (topology, CA type) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusData {
    pub topology: TopologyId,
    pub ca_type: CaType,
    pub rows: Vec<CorpusRow>,
}

impl CorpusData {
    pub fn nat(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.nat_mbps).collect()
    }

    pub fn tie(&self, metric: cir_core::tiem::TiemId) -> Vec<f64> {
        self.rows.iter().map(|r| r.ties.get(metric)).collect()
    }
}

/// Generates the corpus and computes every estimate and the NAT of each
/// assignment.
pub fn build_corpus(cfg: &RunConfig, topology: TopologyId, ca_type: CaType) -> Result<CorpusData> {
    cfg.validate()?;
    let topo = cfg.build_topology(topology)?;
    let phy = cfg.phy(topology);
    let corpus_cfg = CorpusConfig {
        master_seed: cfg.master_seed,
        channel_count: phy.channels,
        mix: ca_type.mix(),
        params: cfg.tiem,
        full_sweep: cfg.full_sweep,
    };
    let records = generate_corpus(&topo, cfg.corpus_size, &corpus_cfg)?;
    let flows = sample_flows(&topo, cfg.flow_fraction, cfg.master_seed)?;
    let scorer = Scorer::new(&topo, &cfg.tiem)?;
    let rows = records
        .par_iter()
        .enumerate()
        .map(|(ca_id, r)| {
            let ties = scorer.score_all(&r.assignment)?;
            let nat = simulate_nat_on(scorer.mesh(), &r.assignment, &flows, phy.rate_mbps)?;
            Ok(CorpusRow { ca_id, generator: r.generator, ties, nat_mbps: nat.nat_mbps })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CorpusData { topology, ca_type, rows })
}

/// Regression and selection on an already assembled x/y series.
pub fn analyze_series(spec: ScenarioSpec, x: Vec<f64>, y: Vec<f64>, cfg: &RunConfig) -> Result<ScenarioReport> {
    let n = x.len();
    let cc = pearson_cc(&x, &y).ok();
    let data = Dataset::new(x, y, spec.direction)?;
    let mut models = Vec::new();
    let mut fit_failures = Vec::new();
    for &degree in &cfg.degrees {
        match fit_ols(&data, degree) {
            Ok(m) => models.push(m),
            Err(e @ (StatsError::DegenerateFit(_) | StatsError::InvalidArgument(_))) => {
                fit_failures.push(FitFailure { degree, error: e.to_string() })
            }
            Err(e) => return Err(e.into()),
        }
    }
    if models.is_empty() {
        let why = fit_failures.first().map_or("no degrees configured".to_string(), |f| f.error.clone());
        return Err(CirError::Stats(StatsError::DegenerateFit(why)));
    }
    let verdict = sam_select(&models, &cfg.sam)?;
    Ok(ScenarioReport {
        spec,
        corpus_size: n,
        label: relationship_label(&verdict),
        nature: Nature::of(verdict.brm.as_ref()),
        models,
        fit_failures,
        verdict,
        cc,
    })
}

/// The scenario's regression over a corpus built for its topology and CA type.
pub fn analyze(spec: ScenarioSpec, corpus: &CorpusData, cfg: &RunConfig) -> Result<ScenarioReport> {
    if (corpus.topology, corpus.ca_type) != (spec.topology, spec.ca_type) {
        return Err(CirError::Config(format!(
            "TS{} needs the {} {} corpus, got {} {}",
            spec.id, spec.topology, spec.ca_type, corpus.topology, corpus.ca_type
        )));
    }
    let (tie, nat) = (corpus.tie(spec.metric), corpus.nat());
    let (x, y) = match spec.direction {
        Direction::IxTy => (tie, nat),
        Direction::TxIy => (nat, tie),
    };
    analyze_series(spec, x, y, cfg).map_err(|e| e.in_scenario(spec.id))
}

pub fn run_scenario(spec: ScenarioSpec, cfg: &RunConfig) -> Result<ScenarioReport> {
    let corpus = build_corpus(cfg, spec.topology, spec.ca_type).map_err(|e| e.in_scenario(spec.id))?;
    analyze(spec, &corpus, cfg)
}

#[derive(Debug)]
pub struct RunOutcome {
    pub corpora: Vec<Result<CorpusData, String>>,
    /// Scenarios in TS order with their report or failure message.
    pub results: Vec<(ScenarioSpec, Result<ScenarioReport, String>)>,
}

impl RunOutcome {
    pub fn failures(&self) -> usize {
        self.results.iter().filter(|(_, r)| r.is_err()).count()
    }

    pub fn reports(&self) -> impl Iterator<Item = &ScenarioReport> {
        self.results.iter().filter_map(|(_, r)| r.as_ref().ok())
    }
}

/// All 48 scenarios. A failed corpus or scenario is recorded and the rest
/// still run.
pub fn run_all(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let specs = enumerate_scenarios();
    let mut keys: Vec<(TopologyId, CaType)> = specs.iter().map(|s| (s.topology, s.ca_type)).collect();
    keys.sort();
    keys.dedup();
    let corpora: Vec<Result<CorpusData, String>> =
        keys.par_iter().map(|&(t, c)| build_corpus(cfg, t, c).map_err(|e| e.to_string())).collect();
    let by_key: BTreeMap<_, _> = keys.iter().zip(&corpora).collect();
    let results = specs
        .par_iter()
        .map(|&spec| {
            let r = match by_key[&(spec.topology, spec.ca_type)] {
                Ok(corpus) => analyze(spec, corpus, cfg).map_err(|e| e.to_string()),
                Err(e) => Err(format!("scenario TS{}: {e}", spec.id)),
            };
            (spec, r)
        })
        .collect();
    Ok(RunOutcome { corpora, results })
}
