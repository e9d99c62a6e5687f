use std::fmt;

use cir_core::cagen::CorpusMix;
use cir_core::tiem::TiemId;
use cir_stats::{Direction, RegressionModel, SamVerdict, Significance};
use serde::{Deserialize, Serialize};

use crate::config::TopologyId;

pub const SCENARIO_COUNT: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaType {
    Generic,
    #[serde(rename = "GPCA")]
    Gpca,
    #[serde(rename = "TPCA")]
    Tpca,
}

impl CaType {
    pub const ALL: [CaType; 3] = [CaType::Generic, CaType::Gpca, CaType::Tpca];

    pub fn label(self) -> &'static str {
        match self {
            CaType::Generic => "Generic",
            CaType::Gpca => "GPCA",
            CaType::Tpca => "TPCA",
        }
    }

    /// Lower-case form used in file names.
    pub fn key(self) -> &'static str {
        match self {
            CaType::Generic => "generic",
            CaType::Gpca => "gpca",
            CaType::Tpca => "tpca",
        }
    }

    pub fn mix(self) -> CorpusMix {
        match self {
            CaType::Generic => CorpusMix::Generic,
            CaType::Gpca => CorpusMix::GraphPreserving,
            CaType::Tpca => CorpusMix::TopologyPreserving,
        }
    }
}

impl fmt::Display for CaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for CaType {
    type Err = crate::CirError;

    fn from_str(s: &str) -> crate::Result<Self> {
        CaType::ALL
            .into_iter()
            .find(|c| c.key().eq_ignore_ascii_case(s))
            .ok_or_else(|| crate::CirError::Config(format!("unknown CA type {s}; expected generic, gpca or tpca")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub id: usize,
    pub topology: TopologyId,
    pub ca_type: CaType,
    pub metric: TiemId,
    pub direction: Direction,
}

/// TS1..TS48: one block of eight per topology on generic assignments
/// (four TxIy then four IxTy), then the GPCA and TPCA blocks on GWMN_5x5.
pub fn enumerate_scenarios() -> Vec<ScenarioSpec> {
    let blocks = TopologyId::ALL
        .into_iter()
        .map(|t| (t, CaType::Generic))
        .chain([(TopologyId::Gwmn5x5, CaType::Gpca), (TopologyId::Gwmn5x5, CaType::Tpca)]);
    let mut out = Vec::with_capacity(SCENARIO_COUNT);
    for (topology, ca_type) in blocks {
        for direction in [Direction::TxIy, Direction::IxTy] {
            for metric in TiemId::ALL {
                out.push(ScenarioSpec { id: out.len() + 1, topology, ca_type, metric, direction });
            }
        }
    }
    out
}

pub fn scenario(id: usize) -> Option<ScenarioSpec> {
    id.checked_sub(1).and_then(|i| enumerate_scenarios().get(i).copied())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Nature {
    Linear,
    Quadratic,
    /// Degree three or more.
    Polynomial,
    None,
}

impl Nature {
    pub fn of(model: Option<&RegressionModel>) -> Self {
        match model.map(|m| m.degree) {
            None => Nature::None,
            Some(1) => Nature::Linear,
            Some(2) => Nature::Quadratic,
            Some(_) => Nature::Polynomial,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Nature::Linear => "Linear",
            Nature::Quadratic => "Quadratic",
            Nature::Polynomial => "Polynomial",
            Nature::None => "None",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitFailure {
    pub degree: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub spec: ScenarioSpec,
    pub corpus_size: usize,
    pub models: Vec<RegressionModel>,
    /// Degrees that could not be fitted on this data.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fit_failures: Vec<FitFailure>,
    pub verdict: SamVerdict,
    pub label: Significance,
    pub nature: Nature,
    pub cc: Option<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forty_eight_in_canonical_order() {
        let s = enumerate_scenarios();
        assert_eq!(s.len(), 48);
        assert!(s.iter().enumerate().all(|(i, x)| x.id == i + 1));
        for x in &s[..4] {
            assert_eq!((x.topology, x.ca_type, x.direction), (TopologyId::Gwmn5x5, CaType::Generic, Direction::TxIy));
        }
        assert!(s[4..8].iter().all(|x| x.direction == Direction::IxTy && x.topology == TopologyId::Gwmn5x5));
        assert_eq!(s[8].topology, TopologyId::Gwmn7x7);
        assert_eq!(s[24].topology, TopologyId::Pwmn50);
        let count = |t, c| s.iter().filter(|x| x.topology == t && x.ca_type == c).count();
        assert_eq!(count(TopologyId::Gwmn5x5, CaType::Tpca), 8);
        assert_eq!(count(TopologyId::Gwmn5x5, CaType::Gpca), 8);
        assert_eq!(s.iter().filter(|x| x.ca_type == CaType::Generic).count(), 32);
        let distinct: std::collections::HashSet<_> =
            s.iter().map(|x| (x.topology, x.ca_type, x.metric, x.direction)).collect();
        assert_eq!(distinct.len(), 48);
        assert_eq!(scenario(41).unwrap().ca_type, CaType::Tpca);
        assert!(scenario(0).is_none() && scenario(49).is_none());
    }
}
