//! Random edge discovery between nodes and extraction of connected
//! components, which are the braid orbits.

use std::collections::BTreeMap;

use petgraph::unionfind::UnionFind;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::braid::{BraidWord, RamificationType};
use crate::classic::{OrbitReport, Tuple};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::matching::{MatchingOptions, NodeIndex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingParams {
    /// Stop a node after this many successful edge draws.
    pub s: u32,
    /// Give up on a node after this many tries without any success.
    pub t: u32,
    pub seed: u64,
}

impl Default for SamplingParams {
    fn default() -> Self {
        SamplingParams {
            s: 5,
            t: 50,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeCounters {
    pub node: usize,
    pub tries: u32,
    pub successes: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeWitness {
    pub from: usize,
    pub to: usize,
    /// Tuple in `from` that the word moves into `to`.
    pub tuple: Tuple,
    pub word: String,
}

#[derive(Clone, Debug)]
pub struct OrbitGraph {
    pub nodes: Vec<usize>,
    pub edges: BTreeMap<(usize, usize), EdgeWitness>,
    pub counters: Vec<NodeCounters>,
    pub params: SamplingParams,
}

/// Draws random tuples from every node, applies a random crossing
/// generator and records an edge whenever the image lies in another node.
/// A node stops after `s` successes, or after `t` tries with none.
pub fn sample_edges(index: &NodeIndex<'_>, params: SamplingParams) -> Result<OrbitGraph> {
    let cross = &index.split.cross;
    if cross.is_empty() {
        return Err(Error::Internal("no crossing generators".into()));
    }
    let nodes: Vec<usize> = index.nodes().map(|p| p.id).collect();
    let mut edges = BTreeMap::new();
    let mut counters = Vec::with_capacity(nodes.len());
    for &node in &nodes {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(node as u64);
        let (mut c, mut d) = (0u32, 0u32);
        loop {
            if d >= params.s || (d == 0 && c >= params.t) {
                break;
            }
            c += 1;
            let t = index.random_tuple(node, &mut rng)?;
            let q = cross[rng.gen_range(0..cross.len())];
            let mut u = t.clone();
            q.apply(&mut u)?;
            let target = index.identify_node(&u)?;
            if target != node {
                d += 1;
                let key = (node.min(target), node.max(target));
                edges.entry(key).or_insert_with(|| EdgeWitness {
                    from: node,
                    to: target,
                    tuple: t,
                    word: BraidWord::single(q).to_string(),
                });
            }
        }
        counters.push(NodeCounters {
            node,
            tries: c,
            successes: d,
        });
    }
    Ok(OrbitGraph {
        nodes,
        edges,
        counters,
        params,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// The node graph is connected, so the single orbit is certain.
    #[serde(rename = "DETERMINISTIC")]
    Deterministic,
    /// Several components; separation relies on the sampling.
    #[serde(rename = "MONTE-CARLO")]
    MonteCarlo,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Deterministic => "DETERMINISTIC",
            Verdict::MonteCarlo => "MONTE-CARLO",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub nodes: Vec<usize>,
    /// Number of tuples, including skipped prenodes credited to members.
    pub tuples: u128,
    /// Number of `G`-classes of tuples.
    pub length: u128,
    pub representative: Tuple,
}

/// Union-find over the recorded edges; components sorted by decreasing
/// length, then by least node id.
pub fn components(index: &NodeIndex<'_>, graph: &OrbitGraph) -> Result<Vec<Component>> {
    let pos: BTreeMap<usize, usize> = graph.nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let mut uf = UnionFind::<usize>::new(graph.nodes.len());
    for &(a, b) in graph.edges.keys() {
        uf.union(pos[&a], pos[&b]);
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &n) in graph.nodes.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().push(n);
    }
    let table = index.group.conjugacy_classes()?;
    let center = table.classes().iter().filter(|c| c.size() == 1).count() as u128;
    let order = index.group.order();
    let mut out: Vec<Component> = groups
        .into_values()
        .map(|nodes| {
            let tuples: u128 = nodes.iter().map(|&n| index.credited_length(n)).sum();
            Component {
                representative: index.prenodes[nodes[0]].representative.clone(),
                nodes,
                tuples,
                length: tuples * center / order,
            }
        })
        .collect();
    out.sort_by(|a, b| b.length.cmp(&a.length).then(a.nodes[0].cmp(&b.nodes[0])));
    Ok(out)
}

pub fn verdict(components: &[Component]) -> Verdict {
    if components.len() <= 1 {
        Verdict::Deterministic
    } else {
        Verdict::MonteCarlo
    }
}

/// True iff the components agree with the oracle's generating orbits: every
/// orbit representative lies in a distinct component of equal length.
pub fn verify_components(
    index: &NodeIndex<'_>,
    components: &[Component],
    oracle: &OrbitReport,
) -> Result<bool> {
    if components.len() != oracle.orbits.len() {
        return Ok(false);
    }
    let mut comp_of = BTreeMap::new();
    for (i, c) in components.iter().enumerate() {
        for &n in &c.nodes {
            comp_of.insert(n, i);
        }
    }
    let mut used = vec![false; components.len()];
    for orbit in &oracle.orbits {
        let node = index.identify_node(&orbit.representative)?;
        let Some(&ci) = comp_of.get(&node) else {
            return Ok(false);
        };
        if used[ci] || components[ci].length != orbit.length as u128 {
            return Ok(false);
        }
        used[ci] = true;
    }
    Ok(true)
}

/// Result of a full matching-engine run on one ramification type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingReport {
    pub ramification_type: Vec<String>,
    pub k: usize,
    pub skip_rule: bool,
    pub sampling: SamplingParams,
    pub product_one_count: u128,
    pub prenodes: usize,
    pub nodes: usize,
    pub components: Vec<Component>,
    pub verdict: Verdict,
    pub edges: Vec<EdgeWitness>,
    pub counters: Vec<NodeCounters>,
}

impl MatchingReport {
    pub fn lengths(&self) -> Vec<u128> {
        self.components.iter().map(|c| c.length).collect()
    }
}

pub fn run_matching<'g>(
    group: &'g PermGroup,
    rt: &RamificationType,
    opts: &MatchingOptions,
    sampling: SamplingParams,
) -> Result<(NodeIndex<'g>, MatchingReport)> {
    let index = NodeIndex::build(group, rt, opts)?;
    let graph = sample_edges(&index, sampling)?;
    let comps = components(&index, &graph)?;
    let report = MatchingReport {
        ramification_type: rt.labels.clone(),
        k: index.k(),
        skip_rule: opts.skip_rule,
        sampling,
        product_one_count: index.product_one_count,
        prenodes: index.prenodes.len(),
        nodes: graph.nodes.len(),
        verdict: verdict(&comps),
        components: comps,
        edges: graph.edges.values().cloned().collect(),
        counters: graph.counters,
    };
    Ok((index, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classic::{orbit_partition, ClassicParams};
    use crate::perm::Perm;

    fn p(n: usize, s: &str) -> Perm {
        Perm::parse(n, s).unwrap()
    }

    #[test]
    fn s5_agrees_with_oracle() {
        let g = PermGroup::new(5, vec![p(5, "(1,2)"), p(5, "(1,2,3,4,5)")]).unwrap();
        let t = g.conjugacy_classes().unwrap();
        for ty in ["2A,2A,2A,2A", "2A,2A,3A,4A", "2A,2A,2A,2A,2A"] {
            let rt = RamificationType::parse(t, ty).unwrap();
            let oracle = orbit_partition(&g, &rt, &ClassicParams::default()).unwrap();
            let (idx, rep) =
                run_matching(&g, &rt, &MatchingOptions::default(), SamplingParams::default())
                    .unwrap();
            let graph = sample_edges(&idx, SamplingParams::default()).unwrap();
            let comps = components(&idx, &graph).unwrap();
            assert!(verify_components(&idx, &comps, &oracle).unwrap(), "{ty}");
            assert_eq!(rep.components, comps);
        }
    }

    #[test]
    fn corrupted_edges_fail_verification() {
        let g = PermGroup::new(4, vec![p(4, "(1,2)"), p(4, "(1,2,3,4)")]).unwrap();
        let t = g.conjugacy_classes().unwrap();
        let rt = RamificationType::parse(t, "2B,2B,2B,2B,2B,2B").unwrap();
        let oracle = orbit_partition(&g, &rt, &ClassicParams::default()).unwrap();
        let idx = NodeIndex::build(&g, &rt, &MatchingOptions::default()).unwrap();
        assert!(verify_components(
            &idx,
            &components(&idx, &sample_edges(&idx, SamplingParams::default()).unwrap()).unwrap(),
            &oracle
        )
        .unwrap());
        let mut graph = sample_edges(&idx, SamplingParams::default()).unwrap();
        assert!(idx.node_count() > 1);
        graph.edges.clear();
        let comps = components(&idx, &graph).unwrap();
        assert!(!verify_components(&idx, &comps, &oracle).unwrap());
    }
}
