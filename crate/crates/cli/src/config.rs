use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cir_core::assignment::Channel;
use cir_core::pwmn::{build_pwmn, PwmnKind};
use cir_core::tiem::TiemParams;
use cir_core::topology::{build_grid, WmnTopology, DEFAULT_RADIO_RANGE_M};
use cir_stats::SamConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CirError, Result};

/// Radios, channels and link rate applied to one topology family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhyProfile {
    pub radios: usize,
    pub channels: Channel,
    pub rate_mbps: f64,
}

impl PhyProfile {
    pub const GRID: PhyProfile = PhyProfile { radios: 2, channels: 3, rate_mbps: 9.0 };
    pub const PLANNED: PhyProfile = PhyProfile { radios: 3, channels: 4, rate_mbps: 54.0 };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TopologyId {
    #[serde(rename = "GWMN_5x5")]
    Gwmn5x5,
    #[serde(rename = "GWMN_7x7")]
    Gwmn7x7,
    #[serde(rename = "PWMN_25")]
    Pwmn25,
    #[serde(rename = "PWMN_50")]
    Pwmn50,
}

impl TopologyId {
    pub const ALL: [TopologyId; 4] = [TopologyId::Gwmn5x5, TopologyId::Gwmn7x7, TopologyId::Pwmn25, TopologyId::Pwmn50];

    pub fn label(self) -> &'static str {
        match self {
            TopologyId::Gwmn5x5 => "GWMN_5x5",
            TopologyId::Gwmn7x7 => "GWMN_7x7",
            TopologyId::Pwmn25 => "PWMN_25",
            TopologyId::Pwmn50 => "PWMN_50",
        }
    }

    pub fn is_grid(self) -> bool {
        matches!(self, TopologyId::Gwmn5x5 | TopologyId::Gwmn7x7)
    }
}

impl fmt::Display for TopologyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TopologyId {
    type Err = CirError;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        TopologyId::ALL.into_iter().find(|t| t.label().replace('_', "").to_ascii_lowercase() == key).ok_or_else(|| {
            CirError::Config(format!("unknown topology {s}; expected one of GWMN_5x5, GWMN_7x7, PWMN_25, PWMN_50"))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub master_seed: u64,
    /// Seed of the planned-mesh layout draw.
    pub pwmn_seed: u64,
    pub corpus_size: usize,
    pub grid_phy: PhyProfile,
    pub pwmn_phy: PhyProfile,
    pub sam: SamConfig,
    pub degrees: Vec<usize>,
    /// Share of node pairs carrying a flow.
    pub flow_fraction: f64,
    pub tiem: TiemParams,
    /// Disables the early return of the mitigation function.
    pub full_sweep: bool,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            master_seed: 1,
            pwmn_seed: 1,
            corpus_size: 100,
            grid_phy: PhyProfile::GRID,
            pwmn_phy: PhyProfile::PLANNED,
            sam: SamConfig::default(),
            degrees: vec![1, 2],
            flow_fraction: 1.0,
            tiem: TiemParams::default(),
            full_sweep: false,
            output_dir: PathBuf::from("cir-out"),
        }
    }
}

impl RunConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: RunConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.sam.validate()?;
        if self.corpus_size < 3 {
            return Err(CirError::Config(format!("corpus size {} below 3", self.corpus_size)));
        }
        if self.degrees.is_empty() || self.degrees.contains(&0) {
            return Err(CirError::Config("degrees must be a non-empty list of positive integers".into()));
        }
        if !(self.flow_fraction > 0.0 && self.flow_fraction <= 1.0) {
            return Err(CirError::Config(format!("flow fraction {} outside (0, 1]", self.flow_fraction)));
        }
        for phy in [self.grid_phy, self.pwmn_phy] {
            if phy.radios == 0 || phy.channels == 0 || phy.rate_mbps.is_nan() || phy.rate_mbps <= 0.0 {
                return Err(CirError::Config(format!("invalid PHY profile {phy:?}")));
            }
        }
        Ok(())
    }

    pub fn phy(&self, topo: TopologyId) -> PhyProfile {
        if topo.is_grid() {
            self.grid_phy
        } else {
            self.pwmn_phy
        }
    }

    /// The topology with the radio count of its PHY profile applied.
    pub fn build_topology(&self, id: TopologyId) -> Result<WmnTopology> {
        let base = match id {
            TopologyId::Gwmn5x5 => build_grid(5, 5, DEFAULT_RADIO_RANGE_M, DEFAULT_RADIO_RANGE_M)?,
            TopologyId::Gwmn7x7 => build_grid(7, 7, DEFAULT_RADIO_RANGE_M, DEFAULT_RADIO_RANGE_M)?,
            TopologyId::Pwmn25 => build_pwmn(PwmnKind::Suburban25, self.pwmn_seed)?,
            TopologyId::Pwmn50 => build_pwmn(PwmnKind::Urban50, self.pwmn_seed)?,
        };
        Ok(base.with_radios(self.phy(id).radios)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_phy_table() {
        let c = RunConfig::default();
        assert_eq!(c.phy(TopologyId::Gwmn7x7), PhyProfile { radios: 2, channels: 3, rate_mbps: 9.0 });
        assert_eq!(c.phy(TopologyId::Pwmn50), PhyProfile { radios: 3, channels: 4, rate_mbps: 54.0 });
        c.validate().unwrap();
    }

    #[test]
    fn partial_json_keeps_defaults() {
        let c: RunConfig = serde_json::from_str(r#"{"corpus_size": 40, "output_dir": "x"}"#).unwrap();
        assert_eq!(c.corpus_size, 40);
        assert_eq!(c.degrees, vec![1, 2]);
        assert_eq!(c.output_dir, PathBuf::from("x"));
    }

    #[test]
    fn topology_labels_parse_loosely() {
        assert_eq!("GWMN_5x5".parse::<TopologyId>().unwrap(), TopologyId::Gwmn5x5);
        assert_eq!("pwmn50".parse::<TopologyId>().unwrap(), TopologyId::Pwmn50);
        assert!("GWMN_6x6".parse::<TopologyId>().is_err());
    }

    #[test]
    fn radios_applied() {
        let c = RunConfig::default();
        assert_eq!(c.build_topology(TopologyId::Gwmn5x5).unwrap().radios_per_node(), 2);
        assert_eq!(c.build_topology(TopologyId::Pwmn25).unwrap().radios_per_node(), 3);
    }
}
