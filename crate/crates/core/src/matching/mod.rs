//! Head/tail matching engine. Nodes (orbits of `L_k × R_k × G`) are built
//! from matching head and tail shadows glued along double cosets of
//! `C_G(x_0)`, without ever enumerating the full Nielsen class.

mod shadow;

use rand::seq::SliceRandom;
use rand::Rng;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

pub use shadow::{BraidOrbit, Shadow, ShadowOrbit};

use crate::braid::{
    parabolic_generators, split_generators, split_generators_pure, RamificationType, Split,
};
use crate::classic::Tuple;
use crate::error::{Error, Result};
use crate::group::{ClassId, ClassProducts, DoubleCosets, PermGroup};
use crate::perm::{product, Perm};

/// A matching pair of a head orbit and a tail orbit of one nodal type.
#[derive(Clone, Debug)]
pub struct Pair {
    pub class: ClassId,
    pub head_orbit: usize,
    pub tail_orbit: usize,
    /// `N_t \ C_G(x_0) / N_h`.
    pub cosets: DoubleCosets,
    pub prenodes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrenodeStatus {
    Node,
    NonGenerating,
    /// Type `{1_G}` with non-commuting head and tail groups; its tuples are
    /// credited to `attached_to`.
    Skipped,
}

#[derive(Clone, Debug)]
pub struct Prenode {
    pub id: usize,
    pub class: ClassId,
    pub pair: usize,
    pub coset: usize,
    pub d: Perm,
    pub representative: Tuple,
    /// Tuples with closing element exactly `x_0`.
    pub shadow_length: u128,
    /// All tuples of the prenode: `shadow_length · |C|`.
    pub length: u128,
    pub generating: bool,
    pub commuting: bool,
    pub status: PrenodeStatus,
    pub attached_to: Option<usize>,
}

impl Prenode {
    pub fn is_node(&self) -> bool {
        self.status == PrenodeStatus::Node
    }
}

#[derive(Clone, Debug)]
pub struct MatchingOptions {
    pub k: Option<usize>,
    /// Drop identity-type prenodes whose head and tail do not commute.
    pub skip_rule: bool,
    /// Heads and tails are orbits of pure braids only; the same-block
    /// `Q_i` then act as crossing generators.
    pub pure_halves: bool,
}

impl Default for MatchingOptions {
    fn default() -> Self {
        MatchingOptions {
            k: None,
            skip_rule: true,
            pure_halves: false,
        }
    }
}

/// All level-`k` prenodes of a ramification type, with the data needed to
/// identify the node of any tuple.
pub struct NodeIndex<'g> {
    pub group: &'g PermGroup,
    pub rt: RamificationType,
    pub split: Split,
    pub skip_rule: bool,
    pub pure_halves: bool,
    pub heads: Vec<Option<Shadow>>,
    pub tails: Vec<Option<Shadow>>,
    pub pairs: Vec<Pair>,
    pub prenodes: Vec<Prenode>,
    pair_lookup: FxHashMap<(ClassId, usize, usize), usize>,
    pub product_one_count: u128,
}

impl<'g> NodeIndex<'g> {
    pub fn build(
        group: &'g PermGroup,
        rt: &RamificationType,
        opts: &MatchingOptions,
    ) -> Result<NodeIndex<'g>> {
        let k = opts.k.unwrap_or_else(|| rt.default_level());
        let split = if opts.pure_halves {
            split_generators_pure(rt, k)?
        } else {
            split_generators(rt, k)?
        };
        let table = group.conjugacy_classes()?;
        let products = ClassProducts::new(table);
        let r = rt.arity();
        let mut heads = Vec::with_capacity(table.len());
        let mut tails = Vec::with_capacity(table.len());
        let head_dist = products.product_distribution(&rt.classes[..k]);
        let tail_dist = products.product_distribution(&rt.classes[k..]);
        for c in 0..table.len() {
            // heads close to x0 ∈ C, i.e. their product lies in C⁻¹
            let cinv = table.inverse_class(c);
            if head_dist[cinv] == 0 || tail_dist[c] == 0 {
                heads.push(None);
                tails.push(None);
                continue;
            }
            heads.push(Some(Shadow::build(
                group,
                &rt.classes[..k],
                &split.left,
                0,
                c,
                true,
            )?));
            tails.push(Some(Shadow::build(
                group,
                &rt.classes[k..r],
                &split.right,
                k,
                c,
                false,
            )?));
        }

        let mut index = NodeIndex {
            group,
            rt: rt.clone(),
            split,
            skip_rule: opts.skip_rule,
            pure_halves: opts.pure_halves,
            heads,
            tails,
            pairs: Vec::new(),
            prenodes: Vec::new(),
            pair_lookup: FxHashMap::default(),
            product_one_count: products.product_one_count(&rt.classes),
        };
        index.build_prenodes()?;
        index.attach_skipped()?;
        Ok(index)
    }

    fn build_prenodes(&mut self) -> Result<()> {
        let table = self.group.conjugacy_classes()?;
        let identity = table.identity_class();
        for c in 0..table.len() {
            let (Some(hs), Some(ts)) = (&self.heads[c], &self.tails[c]) else {
                continue;
            };
            let z = table.class(c).centralizer();
            let z_order = z.order();
            let csize = table.class(c).size() as u128;
            for (hi, ho) in hs.orbits.iter().enumerate() {
                for (ti, to) in ts.orbits.iter().enumerate() {
                    let cosets = DoubleCosets::compute(&to.normalizer, &ho.normalizer, z)?;
                    let pair_id = self.pairs.len();
                    let h0 = hs.base_representative(hi);
                    let t0 = ts.base_representative(ti);
                    let braid_part = hs.base_size(hi) as u128 * ts.base_size(ti) as u128;
                    let mut ids = Vec::with_capacity(cosets.len());
                    for (j, d) in cosets.representatives.iter().enumerate() {
                        let mut rep = h0.clone();
                        rep.extend(t0.iter().map(|x| x.conj(d)));
                        let shadow_length = z_order * braid_part * cosets.sizes[j] as u128
                            / (ho.normalizer_order as u128 * to.normalizer_order as u128);
                        let generating = self.group.generates(&rep);
                        let commuting = rep[..h0.len()]
                            .iter()
                            .all(|a| rep[h0.len()..].iter().all(|b| a.commutes_with(b)));
                        let status = if !generating {
                            PrenodeStatus::NonGenerating
                        } else if c == identity && self.skip_rule && !commuting {
                            PrenodeStatus::Skipped
                        } else {
                            PrenodeStatus::Node
                        };
                        let id = self.prenodes.len();
                        ids.push(id);
                        self.prenodes.push(Prenode {
                            id,
                            class: c,
                            pair: pair_id,
                            coset: j,
                            d: d.clone(),
                            representative: rep,
                            shadow_length,
                            length: shadow_length * csize,
                            generating,
                            commuting,
                            status,
                            attached_to: None,
                        });
                    }
                    self.pair_lookup.insert((c, hi, ti), pair_id);
                    self.pairs.push(Pair {
                        class: c,
                        head_orbit: hi,
                        tail_orbit: ti,
                        cosets,
                        prenodes: ids,
                    });
                }
            }
        }
        Ok(())
    }

    /// Credits every skipped prenode to a node of non-identity type in the
    /// same braid orbit, found by a breadth-first braid search from its
    /// representative.
    fn attach_skipped(&mut self) -> Result<()> {
        let gens = parabolic_generators(&self.rt, false);
        let k = self.split.k;
        for i in 0..self.prenodes.len() {
            if self.prenodes[i].status != PrenodeStatus::Skipped {
                continue;
            }
            let start = self.prenodes[i].representative.clone();
            let mut seen = rustc_hash::FxHashSet::default();
            seen.insert(start.clone());
            let mut queue = std::collections::VecDeque::from([start]);
            let mut found = None;
            'search: while let Some(t) = queue.pop_front() {
                for g in &gens {
                    let mut u = t.clone();
                    g.apply(&mut u)?;
                    if !product(u[0].degree(), u[k..].iter()).is_identity() {
                        found = Some(u);
                        break 'search;
                    }
                    if seen.len() < 1_000_000 && seen.insert(u.clone()) {
                        queue.push_back(u);
                    }
                }
            }
            let u = found.ok_or_else(|| {
                Error::Internal("skipped prenode has no non-identity neighbour".into())
            })?;
            let target = self.identify_prenode(&u)?;
            if !self.prenodes[target].is_node() {
                return Err(Error::Internal("skipped prenode attached to a non-node".into()));
            }
            self.prenodes[i].attached_to = Some(target);
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.split.k
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Prenode> {
        self.prenodes.iter().filter(|p| p.is_node())
    }

    pub fn node_count(&self) -> usize {
        self.nodes().count()
    }

    /// Number of head orbits (or tail orbits) per nodal class.
    pub fn head_orbit_counts(&self) -> Vec<usize> {
        self.heads
            .iter()
            .map(|s| s.as_ref().map_or(0, |s| s.orbits.len()))
            .collect()
    }

    pub fn tail_orbit_counts(&self) -> Vec<usize> {
        self.tails
            .iter()
            .map(|s| s.as_ref().map_or(0, |s| s.orbits.len()))
            .collect()
    }

    /// Matching pairs per nodal class.
    pub fn pair_counts(&self) -> Vec<usize> {
        let mut out = vec![0; self.heads.len()];
        for p in &self.pairs {
            out[p.class] += 1;
        }
        out
    }

    /// Prenode containing `t`.
    pub fn identify_prenode(&self, t: &[Perm]) -> Result<usize> {
        let table = self.group.conjugacy_classes()?;
        let k = self.split.k;
        let x = product(t[0].degree(), t[k..].iter());
        let c = table.class_of(&x).ok_or(Error::NotInGroup)?;
        let g = table.conjugator_from(&x).ok_or(Error::NotInGroup)?;
        let (Some(hs), Some(ts)) = (&self.heads[c], &self.tails[c]) else {
            return Err(Error::NodeNotFound);
        };
        let h: Tuple = t[..k].iter().map(|y| y.conj(&g)).collect();
        let tl: Tuple = t[k..].iter().map(|y| y.conj(&g)).collect();
        let hb = hs.braid_orbit_of(&h).ok_or(Error::NodeNotFound)?;
        let tb = ts.braid_orbit_of(&tl).ok_or(Error::NodeNotFound)?;
        let (ho, a) = (hs.braid_orbits[hb].half_orbit, &hs.braid_orbits[hb].conjugator);
        let (to, b) = (ts.braid_orbits[tb].half_orbit, &ts.braid_orbits[tb].conjugator);
        let pair = *self
            .pair_lookup
            .get(&(c, ho, to))
            .ok_or(Error::NodeNotFound)?;
        let u = b * &a.inverse();
        let z = table.class(c).centralizer().elements()?;
        let coset = self.pairs[pair]
            .cosets
            .coset_of(z, &u)
            .ok_or(Error::NodeNotFound)?;
        Ok(self.pairs[pair].prenodes[coset])
    }

    /// Node containing `t`: its prenode, or for a skipped prenode the node
    /// it is attached to.
    pub fn identify_node(&self, t: &[Perm]) -> Result<usize> {
        let id = self.identify_prenode(t)?;
        let p = &self.prenodes[id];
        match p.status {
            PrenodeStatus::Node => Ok(id),
            PrenodeStatus::Skipped => p.attached_to.ok_or(Error::NodeNotFound),
            PrenodeStatus::NonGenerating => Err(Error::NodeNotFound),
        }
    }

    /// Uniformly random tuple of a prenode.
    pub fn random_tuple<R: Rng + ?Sized>(&self, id: usize, rng: &mut R) -> Result<Tuple> {
        let table = self.group.conjugacy_classes()?;
        let p = &self.prenodes[id];
        let pair = &self.pairs[p.pair];
        let hs = self.heads[p.class].as_ref().unwrap();
        let ts = self.tails[p.class].as_ref().unwrap();
        let ho = &hs.orbits[pair.head_orbit];
        let to = &ts.orbits[pair.tail_orbit];
        let z = table.class(p.class).centralizer().elements()?;
        let a = z.get(rng.gen_range(0..z.len() as u32));
        let n = to.normalizer.random_element(rng);
        let m = ho.normalizer.random_element(rng);
        let b = &(&(&n * &p.d) * &m) * a;
        let h = hs.braid_orbits[ho.base]
            .elements
            .choose(rng)
            .expect("braid orbits are nonempty");
        let t = ts.braid_orbits[to.base]
            .elements
            .choose(rng)
            .expect("braid orbits are nonempty");
        let g = self.group.random_element(rng);
        let mut out: Tuple = h.iter().map(|x| x.conj(a).conj(&g)).collect();
        out.extend(t.iter().map(|x| x.conj(&b).conj(&g)));
        Ok(out)
    }

    /// `Σ` of all prenode lengths; equals the structure constant.
    pub fn total_prenode_length(&self) -> u128 {
        self.prenodes.iter().map(|p| p.length).sum()
    }

    /// Tuples credited to a node: its own plus those of attached skipped
    /// prenodes.
    pub fn credited_length(&self, node: usize) -> u128 {
        self.prenodes[node].length
            + self
                .prenodes
                .iter()
                .filter(|p| p.attached_to == Some(node))
                .map(|p| p.length)
                .sum::<u128>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classic::{enumerate_tuples, tuple_product};

    fn p(n: usize, s: &str) -> Perm {
        Perm::parse(n, s).unwrap()
    }

    fn s5() -> PermGroup {
        PermGroup::new(5, vec![p(5, "(1,2)"), p(5, "(1,2,3,4,5)")]).unwrap()
    }

    #[test]
    fn prenode_lengths_sum_to_structure_constant() {
        let g = s5();
        let t = g.conjugacy_classes().unwrap();
        for (ty, k) in [("2A,2A,2A,2A", 2), ("2A,2A,3A,4A", 2), ("2A,2A,2A,2A,2A,2A", 3)] {
            let rt = RamificationType::parse(t, ty).unwrap();
            for skip in [true, false] {
                let idx = NodeIndex::build(
                    &g,
                    &rt,
                    &MatchingOptions {
                        k: Some(k),
                        skip_rule: skip,
                        ..MatchingOptions::default()
                    },
                )
                .unwrap();
                assert_eq!(idx.total_prenode_length(), idx.product_one_count, "{ty}");
            }
        }
    }

    #[test]
    fn nodes_cover_tuples_exactly_once() {
        let g = s5();
        let t = g.conjugacy_classes().unwrap();
        let rt = RamificationType::parse(t, "2A,2A,3A,4A").unwrap();
        let idx = NodeIndex::build(&g, &rt, &MatchingOptions::default()).unwrap();
        let all = enumerate_tuples(&g, &rt, false).unwrap();
        let mut counts = vec![0u128; idx.prenodes.len()];
        for x in &all {
            counts[idx.identify_prenode(x).unwrap()] += 1;
        }
        for p in &idx.prenodes {
            assert_eq!(counts[p.id], p.length, "prenode {}", p.id);
            assert_eq!(idx.identify_prenode(&p.representative).unwrap(), p.id);
            assert!(tuple_product(&p.representative).is_identity());
        }
    }
}
