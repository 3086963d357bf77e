//! Machine-readable record of one orbit computation. Serialization is
//! deterministic: same inputs, same seed, same bytes.

use serde::{Deserialize, Serialize};

use crate::braid::RamificationType;
use crate::catalog::cache::ENGINE_VERSION;
use crate::classic::{orbit_partition, ClassicParams, OrbitReport};
use crate::error::Result;
use crate::genus::Engine;
use crate::graph::{run_matching, MatchingReport, SamplingParams};
use crate::group::PermGroup;
use crate::matching::{MatchingOptions, NodeIndex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCount {
    pub class: String,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeInventory {
    pub k: usize,
    pub pure_halves: bool,
    pub head_orbits: Vec<ClassCount>,
    pub tail_orbits: Vec<ClassCount>,
    pub pairs: Vec<ClassCount>,
    pub head_total: usize,
    pub tail_total: usize,
    pub pair_total: usize,
    /// Nodal classes with head or tail orbits but no matching pair.
    pub classes_without_pairs: usize,
    pub prenodes: usize,
    pub nodes: usize,
    pub prenode_length_total: u128,
}

impl NodeInventory {
    pub fn of(index: &NodeIndex<'_>) -> Result<NodeInventory> {
        let table = index.group.conjugacy_classes()?;
        let named = |v: Vec<usize>| -> Vec<ClassCount> {
            v.into_iter()
                .enumerate()
                .filter(|&(_, n)| n > 0)
                .map(|(c, count)| ClassCount {
                    class: table.class(c).label.clone(),
                    count,
                })
                .collect()
        };
        let heads = index.head_orbit_counts();
        let tails = index.tail_orbit_counts();
        let pairs = index.pair_counts();
        let classes_without_pairs = (0..heads.len())
            .filter(|&c| (heads[c] > 0 || tails[c] > 0) && pairs[c] == 0)
            .count();
        Ok(NodeInventory {
            k: index.k(),
            pure_halves: index.pure_halves,
            head_total: heads.iter().sum(),
            tail_total: tails.iter().sum(),
            pair_total: pairs.iter().sum(),
            head_orbits: named(heads),
            tail_orbits: named(tails),
            pairs: named(pairs),
            classes_without_pairs,
            prenodes: index.prenodes.len(),
            nodes: index.node_count(),
            prenode_length_total: index.total_prenode_length(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub engine_version: String,
    pub group: String,
    pub fingerprint: String,
    pub group_order: u128,
    pub ramification_type: Vec<String>,
    pub engine: Engine,
    pub product_one_count: u128,
    /// Orbit lengths, longest first.
    pub lengths: Vec<u128>,
    pub classic: Option<OrbitReport>,
    pub inventory: Option<NodeInventory>,
    pub matching: Option<MatchingReport>,
}

impl Certificate {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(s: &str) -> Result<Certificate> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn orbit_count(&self) -> usize {
        self.lengths.len()
    }
}

pub fn classic_certificate(
    name: &str,
    group: &PermGroup,
    rt: &RamificationType,
    params: &ClassicParams,
) -> Result<Certificate> {
    let report = orbit_partition(group, rt, params)?;
    Ok(Certificate {
        engine_version: ENGINE_VERSION.to_string(),
        group: name.to_string(),
        fingerprint: group.fingerprint(),
        group_order: group.order(),
        ramification_type: rt.labels.clone(),
        engine: Engine::Classic,
        product_one_count: report.product_one_count,
        lengths: report.orbits.iter().map(|o| o.length as u128).collect(),
        classic: Some(report),
        inventory: None,
        matching: None,
    })
}

/// Returns the index too, for callers that want to cache its shadows.
pub fn matching_certificate<'g>(
    name: &str,
    group: &'g PermGroup,
    rt: &RamificationType,
    opts: &MatchingOptions,
    sampling: SamplingParams,
) -> Result<(NodeIndex<'g>, Certificate)> {
    let (index, report) = run_matching(group, rt, opts, sampling)?;
    let cert = Certificate {
        engine_version: ENGINE_VERSION.to_string(),
        group: name.to_string(),
        fingerprint: group.fingerprint(),
        group_order: group.order(),
        ramification_type: rt.labels.clone(),
        engine: Engine::Matching,
        product_one_count: report.product_one_count,
        lengths: report.lengths(),
        classic: None,
        inventory: Some(NodeInventory::of(&index)?),
        matching: Some(report),
    };
    Ok((index, cert))
}
