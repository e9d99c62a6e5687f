//! Channel assignments and the operating links they induce.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CoreError, Result};
use crate::topology::{components_connected, potential_links, WmnTopology};

pub type Channel = u32;

/// Highest channel id a [`ChannelSet`] can hold.
pub const MAX_CHANNEL: Channel = 64;

/// Set of channel ids `1..=64`, stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChannelSet(u64);

impl ChannelSet {
    pub const EMPTY: ChannelSet = ChannelSet(0);

    pub fn single(ch: Channel) -> Self {
        let mut s = Self::EMPTY;
        s.insert(ch);
        s
    }

    pub fn insert(&mut self, ch: Channel) {
        assert!((1..=MAX_CHANNEL).contains(&ch), "channel {ch} out of range");
        self.0 |= 1 << (ch - 1);
    }

    pub fn remove(&mut self, ch: Channel) {
        if (1..=MAX_CHANNEL).contains(&ch) {
            self.0 &= !(1 << (ch - 1));
        }
    }

    pub fn with(mut self, ch: Channel) -> Self {
        self.insert(ch);
        self
    }

    pub fn without(mut self, ch: Channel) -> Self {
        self.remove(ch);
        self
    }

    pub fn contains(&self, ch: Channel) -> bool {
        (1..=MAX_CHANNEL).contains(&ch) && self.0 & (1 << (ch - 1)) != 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn intersection(&self, other: &ChannelSet) -> ChannelSet {
        ChannelSet(self.0 & other.0)
    }

    pub fn is_disjoint(&self, other: &ChannelSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_superset(&self, other: &ChannelSet) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn lowest(&self) -> Option<Channel> {
        (self.0 != 0).then(|| self.0.trailing_zeros() + 1)
    }

    pub fn highest(&self) -> Option<Channel> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros())
    }

    /// Channels in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = Channel> + '_ {
        let bits = self.0;
        (1..=MAX_CHANNEL).filter(move |c| bits & (1 << (c - 1)) != 0)
    }
}

impl FromIterator<Channel> for ChannelSet {
    fn from_iter<I: IntoIterator<Item = Channel>>(iter: I) -> Self {
        let mut s = ChannelSet::EMPTY;
        for c in iter {
            s.insert(c);
        }
        s
    }
}

impl fmt::Debug for ChannelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for ChannelSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ChannelSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<Channel>::deserialize(d)?;
        if let Some(bad) = raw.iter().find(|c| !(1..=MAX_CHANNEL).contains(c)) {
            return Err(serde::de::Error::custom(format!("channel {bad} out of range")));
        }
        Ok(raw.into_iter().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaKind {
    Generic,
    GraphPreserving,
    TopologyPreserving,
}

/// Per-node channel sets over `1..=channel_count`.
///
/// Equality and hashing ignore `kind`: two assignments are the same scheme
/// when every node carries the same channels.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelAssignment {
    channels: Vec<ChannelSet>,
    channel_count: Channel,
    kind: CaKind,
}

impl PartialEq for ChannelAssignment {
    fn eq(&self, other: &Self) -> bool {
        self.channel_count == other.channel_count && self.channels == other.channels
    }
}

impl Eq for ChannelAssignment {}

impl std::hash::Hash for ChannelAssignment {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.channel_count.hash(state);
        self.channels.hash(state);
    }
}

impl ChannelAssignment {
    pub fn new(channels: Vec<ChannelSet>, channel_count: Channel, kind: CaKind) -> Result<Self> {
        if channel_count == 0 || channel_count > MAX_CHANNEL {
            return Err(CoreError::invalid(format!("channel count {channel_count} must be in 1..=64")));
        }
        for (node, set) in channels.iter().enumerate() {
            if set.is_empty() {
                return Err(CoreError::invalid(format!("node {node} has no channel")));
            }
            if set.highest().unwrap() > channel_count {
                return Err(CoreError::invalid(format!("node {node} uses a channel above {channel_count}")));
            }
        }
        Ok(Self { channels, channel_count, kind })
    }

    /// Every radio of every node on channel 1.
    pub fn all_default(node_count: usize, channel_count: Channel) -> Result<Self> {
        Self::new(vec![ChannelSet::single(1); node_count], channel_count, CaKind::Generic)
    }

    pub fn channels(&self) -> &[ChannelSet] {
        &self.channels
    }

    pub fn node_channels(&self, node: usize) -> ChannelSet {
        self.channels[node]
    }

    pub fn channel_count(&self) -> Channel {
        self.channel_count
    }

    pub fn kind(&self) -> CaKind {
        self.kind
    }

    pub fn node_count(&self) -> usize {
        self.channels.len()
    }

    pub fn with_kind(mut self, kind: CaKind) -> Self {
        self.kind = kind;
        self
    }

    /// Copy with one node's channel set replaced, validated against the
    /// channel range.
    pub fn with_node_channels(&self, node: usize, set: ChannelSet) -> Result<Self> {
        if node >= self.channels.len() {
            return Err(CoreError::invalid(format!("unknown node {node}")));
        }
        if set.is_empty() || set.highest().unwrap() > self.channel_count {
            return Err(CoreError::invalid(format!("invalid channel set {set:?} for node {node}")));
        }
        let mut next = self.clone();
        next.channels[node] = set;
        Ok(next)
    }

    /// Checks node coverage and the radio budget of `topo`.
    pub fn validate_for(&self, topo: &WmnTopology) -> Result<()> {
        if self.channels.len() != topo.node_count() {
            return Err(CoreError::invalid(format!(
                "assignment covers {} nodes, topology has {}",
                self.channels.len(),
                topo.node_count()
            )));
        }
        if let Some((node, set)) = self.channels.iter().enumerate().find(|(_, s)| s.len() > topo.radios_per_node()) {
            return Err(CoreError::invalid(format!(
                "node {node} uses {} channels with {} radios",
                set.len(),
                topo.radios_per_node()
            )));
        }
        Ok(())
    }
}

/// A potential link that is usable under an assignment, on one channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OperatingLink {
    pub a: usize,
    pub b: usize,
    pub channel: Channel,
}

impl OperatingLink {
    pub fn shares_node(&self, other: &OperatingLink) -> bool {
        self.a == other.a || self.a == other.b || self.b == other.a || self.b == other.b
    }

    pub fn other(&self, node: usize) -> usize {
        if self.a == node {
            self.b
        } else {
            self.a
        }
    }
}

/// One link per potential link whose endpoints share a channel, placed on
/// the lowest common channel. Ordered by `(a, b)`.
pub fn operating_links(topo: &WmnTopology, ca: &ChannelAssignment) -> Result<Vec<OperatingLink>> {
    if ca.node_count() != topo.node_count() {
        return Err(CoreError::invalid(format!(
            "assignment covers {} nodes, topology has {}",
            ca.node_count(),
            topo.node_count()
        )));
    }
    Ok(potential_links(topo)
        .into_iter()
        .filter_map(|l| {
            let common = ca.node_channels(l.a).intersection(&ca.node_channels(l.b));
            common.lowest().map(|channel| OperatingLink { a: l.a, b: l.b, channel })
        })
        .collect())
}

/// Whether the operating-link graph spans every node in one component.
pub fn is_connected(topo: &WmnTopology, ca: &ChannelAssignment) -> Result<bool> {
    let links = operating_links(topo, ca)?;
    Ok(links_connected(topo.node_count(), &links))
}

pub(crate) fn links_connected(node_count: usize, links: &[OperatingLink]) -> bool {
    let mut adj = vec![Vec::new(); node_count];
    for l in links {
        adj[l.a].push(l.b);
        adj[l.b].push(l.a);
    }
    components_connected(&adj)
}

/// Whether every potential link keeps at least one common channel.
pub fn preserves_topology(topo: &WmnTopology, ca: &ChannelAssignment) -> Result<bool> {
    if ca.node_count() != topo.node_count() {
        return Err(CoreError::invalid("assignment and topology node counts differ"));
    }
    Ok(potential_links(topo).iter().all(|l| !ca.node_channels(l.a).is_disjoint(&ca.node_channels(l.b))))
}
