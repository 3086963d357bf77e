//! Candidate genus-zero ramification types of an affine group, the filter
//! chain, and dispatch to an orbit engine.

use std::collections::BTreeMap;

use petgraph::unionfind::UnionFind;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::braid::{parabolic_generators, RamificationType};
use crate::classic::{orbit_partition, ClassicParams, Orbit, OrbitReport, Tuple};
use crate::error::{Error, Result};
use crate::graph::{run_matching, SamplingParams, Verdict};
use crate::group::{ClassId, ClassProducts, ClassTable, PermGroup};
use crate::matching::MatchingOptions;

/// All multisets of non-identity classes with at least three entries whose
/// permutation indices sum to `2(n + g - 1)`. Entries are listed by class
/// id, so equal classes are consecutive.
pub fn rh_candidate_types(table: &ClassTable, degree: usize, g: usize) -> Vec<RamificationType> {
    let target = 2 * (degree + g) - 2;
    let cands: Vec<(ClassId, usize)> = table
        .classes()
        .iter()
        .filter(|c| c.perm_index > 0 && c.perm_index <= target)
        .map(|c| (c.id, c.perm_index))
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(
        cands: &[(ClassId, usize)],
        from: usize,
        left: usize,
        cur: &mut Vec<ClassId>,
        out: &mut Vec<Vec<ClassId>>,
    ) {
        if left == 0 {
            if cur.len() >= 3 {
                out.push(cur.clone());
            }
            return;
        }
        for i in from..cands.len() {
            let (c, ind) = cands[i];
            if ind <= left {
                cur.push(c);
                go(cands, i, left - ind, cur, out);
                cur.pop();
            }
        }
    }
    go(&cands, 0, target, &mut cur, &mut out);
    out.into_iter()
        .map(|classes| RamificationType::new(table, classes).expect("sorted types are block ordered"))
        .collect()
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Exact check of `|G| Σ (1 - 1/|τ_i|) = 2(|G| + g - 1)`.
pub fn rh_galois_check(orders: &[u64], group_order: u128, g: u64) -> bool {
    let l = orders
        .iter()
        .fold(1u128, |acc, &o| acc / gcd(acc, o as u128) * o as u128);
    let lhs: u128 = orders.iter().map(|&o| l - l / o as u128).sum::<u128>() * group_order;
    let rhs = 2 * (group_order + g as u128) * l;
    lhs + 2 * l == rhs
}

/// `e - log_p(max fixed points over the coset xN)` for every class, i.e.
/// the codimension of the fixed space of the linear part.
pub fn scott_values(table: &ClassTable, socle: &PermGroup, p: u64, e: u32) -> Result<Vec<u32>> {
    let n = socle.elements()?;
    if n.len() as u128 != (p as u128).pow(e) {
        return Err(Error::NotAffine { p, e });
    }
    let mut out = Vec::with_capacity(table.len());
    for c in table.classes() {
        let best = n
            .iter()
            .map(|t| (&c.representative * t).fixed_points())
            .max()
            .unwrap_or(0);
        let mut d = 0;
        let mut q = 1usize;
        while q < best {
            q *= p as usize;
            d += 1;
        }
        if q != best {
            return Err(Error::NotAffine { p, e });
        }
        out.push(e - d);
    }
    Ok(out)
}

/// Scott's bound: a type generating an irreducible group needs `Σ v ≥ 2e`.
pub fn scott_filter(rt: &RamificationType, values: &[u32], e: u32) -> bool {
    rt.classes.iter().map(|&c| values[c]).sum::<u32>() >= 2 * e
}

pub fn structure_constant_filter(products: &ClassProducts<'_>, rt: &RamificationType) -> bool {
    products.product_one_count(&rt.classes) > 0
}

/// Triples up to conjugation: `a` is the fixed representative of `C_1`, `b`
/// runs over `C_2` with `(ab)⁻¹ ∈ C_3`, and solutions are identified under
/// `C_G(a)`. Each generating solution is a pure-braid orbit of length one.
pub fn enumerate_triples(group: &PermGroup, rt: &RamificationType) -> Result<OrbitReport> {
    let (report, _) = triples_with_lookup(group, rt)?;
    Ok(report)
}

type TripleLookup = FxHashMap<crate::perm::Perm, usize>;

fn triples_with_lookup(group: &PermGroup, rt: &RamificationType) -> Result<(OrbitReport, TripleLookup)> {
    if rt.arity() != 3 {
        return Err(Error::Internal("enumerate_triples needs r = 3".into()));
    }
    let table = group.conjugacy_classes()?;
    let products = ClassProducts::new(table);
    let (c1, c2, c3) = (rt.classes[0], rt.classes[1], rt.classes[2]);
    let a = table.class(c1).representative.clone();
    let cent = table.class(c1).centralizer();
    let zgens = cent.generators();
    let center = table.classes().iter().filter(|c| c.size() == 1).count() as u128;
    let order = group.order();

    let mut orbit_of: TripleLookup = FxHashMap::default();
    let mut orbits = Vec::new();
    let mut non_generating = Vec::new();
    let mut reps: Vec<(usize, bool)> = Vec::new();
    for b in table.class(c2).members() {
        if orbit_of.contains_key(b) {
            continue;
        }
        let c = (&a * b).inverse();
        if table.class_of(&c) != Some(c3) {
            continue;
        }
        let id = reps.len();
        let mut queue = vec![b.clone()];
        orbit_of.insert(b.clone(), id);
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i].clone();
            i += 1;
            for z in zgens {
                let y = x.conj(z);
                if !orbit_of.contains_key(&y) {
                    orbit_of.insert(y.clone(), id);
                    queue.push(y);
                }
            }
        }
        let t: Tuple = vec![a.clone(), b.clone(), c];
        let generating = group.generates(&t);
        // stabilizer of the triple in G is C_G(a) ∩ C_G(b)
        let stab = cent.order() / queue.len() as u128;
        let orbit = Orbit {
            length: 1,
            tuples: order / stab,
            representative: t,
            generating,
        };
        if generating {
            if stab != center {
                return Err(Error::Internal("generating triple with large stabilizer".into()));
            }
            reps.push((orbits.len(), true));
            orbits.push(orbit);
        } else {
            reps.push((non_generating.len(), false));
            non_generating.push(orbit);
        }
    }
    // sort the generating orbits and map every candidate b to its sorted
    // position (usize::MAX for non-generating solutions)
    let mut order_idx: Vec<usize> = (0..orbits.len()).collect();
    order_idx.sort_by(|&x, &y| orbits[x].representative.cmp(&orbits[y].representative));
    let mut new_pos = vec![0; orbits.len()];
    for (new, &old) in order_idx.iter().enumerate() {
        new_pos[old] = new;
    }
    let lookup = orbit_of
        .into_iter()
        .map(|(b, id)| {
            let (pos, generating) = reps[id];
            (b, if generating { new_pos[pos] } else { usize::MAX })
        })
        .collect();
    let mut slots: Vec<Option<Orbit>> = orbits.into_iter().map(Some).collect();
    let orbits: Vec<Orbit> = order_idx.iter().map(|&i| slots[i].take().unwrap()).collect();
    let report = OrbitReport {
        ramification_type: rt.labels.clone(),
        orbits,
        non_generating,
        product_one_count: products.product_one_count(&rt.classes),
    };
    Ok((report, lookup))
}

/// Groups the generating triple orbits into orbits of the full parabolic
/// subgroup, which also swaps entries of equal class.
pub fn triple_components(group: &PermGroup, rt: &RamificationType) -> Result<Vec<Vec<usize>>> {
    let (report, lookup) = triples_with_lookup(group, rt)?;
    let table = group.conjugacy_classes()?;
    let locate = |t: &Tuple| -> Result<usize> {
        let g = table.conjugator_from(&t[0]).ok_or(Error::NotInGroup)?;
        match lookup.get(&t[1].conj(&g)) {
            Some(&i) if i != usize::MAX => Ok(i),
            _ => Err(Error::Internal("braid image left the generating Nielsen class".into())),
        }
    };
    let gens = parabolic_generators(rt, false);
    let mut uf = UnionFind::<usize>::new(report.orbits.len());
    for (i, o) in report.orbits.iter().enumerate() {
        for q in &gens {
            let mut u = o.representative.clone();
            q.apply(&mut u)?;
            uf.union(i, locate(&u)?);
        }
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..report.orbits.len() {
        comps.entry(uf.find(i)).or_default().push(i);
    }
    Ok(comps.into_values().collect())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Classic,
    #[default]
    Matching,
}

impl std::str::FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Engine> {
        match s {
            "classic" => Ok(Engine::Classic),
            "matching" => Ok(Engine::Matching),
            _ => Err(Error::Catalog(format!("unknown engine {s:?} (classic|matching)"))),
        }
    }
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Engine::Classic => "classic",
            Engine::Matching => "matching",
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassifyParams {
    pub engine: Engine,
    pub scott: bool,
    pub sampling: SamplingParams,
    pub skip_rule: bool,
    pub work_cap: usize,
    /// Largest arity to run; longer types are reported as not computed.
    pub max_arity: usize,
}

impl Default for ClassifyParams {
    fn default() -> Self {
        ClassifyParams {
            engine: Engine::default(),
            scott: true,
            sampling: SamplingParams::default(),
            skip_rule: true,
            work_cap: crate::classic::DEFAULT_WORK_CAP,
            max_arity: usize::MAX,
        }
    }
}

/// One genus-zero system row: a type with at least one generating orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemRow {
    pub group: String,
    pub ramification_type: Vec<String>,
    pub indices: Vec<usize>,
    /// Braid orbits; for triples these are pure-braid orbits (solutions up
    /// to conjugation).
    pub orbits: usize,
    /// Orbits of the parabolic subgroup, i.e. components. Differs from
    /// `orbits` only for triples with a repeated class.
    pub components: usize,
    pub largest: u128,
    pub lengths: Vec<u128>,
    pub verdict: Option<Verdict>,
}

impl SystemRow {
    pub fn arity(&self) -> usize {
        self.ramification_type.len()
    }

    pub fn type_label(&self) -> String {
        format!("({})", self.ramification_type.join(","))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Classification {
    pub group: String,
    pub degree: usize,
    pub p: u64,
    pub e: u32,
    pub params: ClassifyParams,
    pub rh_types: usize,
    pub after_scott: usize,
    pub after_structure: usize,
    pub systems: Vec<SystemRow>,
    /// Types that passed the filters but exceed `max_arity`.
    pub not_computed: Vec<Vec<String>>,
}

impl Classification {
    pub fn components(&self) -> usize {
        self.systems.iter().map(|s| s.components).sum()
    }

    pub fn components_by_arity(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for s in &self.systems {
            *m.entry(s.arity()).or_insert(0) += s.components;
        }
        m
    }
}

/// Runs one type through the chosen engine and returns its row, or `None`
/// when no tuple generates the group.
pub fn classify_type(
    name: &str,
    group: &PermGroup,
    rt: &RamificationType,
    params: &ClassifyParams,
) -> Result<Option<SystemRow>> {
    let table = group.conjugacy_classes()?;
    let indices: Vec<usize> = rt.classes.iter().map(|&c| table.class(c).perm_index).collect();
    let (orbits, components, lengths, verdict) = if rt.arity() == 3 {
        let report = enumerate_triples(group, rt)?;
        let n = report.orbits.len();
        let comps = if n == 0 { 0 } else { triple_components(group, rt)?.len() };
        (n, comps, vec![1u128; n], None)
    } else {
        match params.engine {
            Engine::Classic => {
                let cp = ClassicParams {
                    work_cap: params.work_cap,
                    lemma_exact: false,
                    non_generating: false,
                };
                let report = orbit_partition(group, rt, &cp)?;
                let lengths: Vec<u128> = report.orbits.iter().map(|o| o.length as u128).collect();
                (lengths.len(), lengths.len(), lengths, None)
            }
            Engine::Matching => {
                let opts = MatchingOptions {
                    skip_rule: params.skip_rule,
                    ..MatchingOptions::default()
                };
                let (_, report) = run_matching(group, rt, &opts, params.sampling)?;
                let lengths = report.lengths();
                (lengths.len(), lengths.len(), lengths, Some(report.verdict))
            }
        }
    };
    if orbits == 0 {
        return Ok(None);
    }
    let n = group.degree();
    if indices.iter().sum::<usize>() != 2 * n - 2 {
        return Err(Error::Internal(format!("{rt} violates Riemann-Hurwitz")));
    }
    Ok(Some(SystemRow {
        group: name.to_string(),
        ramification_type: rt.labels.clone(),
        indices,
        orbits,
        components,
        largest: lengths.iter().copied().max().unwrap_or(0),
        lengths,
        verdict,
    }))
}

/// The full filter chain for an affine group of degree `p^e`.
pub fn classify(
    name: &str,
    group: &PermGroup,
    p: u64,
    e: u32,
    params: &ClassifyParams,
) -> Result<Classification> {
    let table = group.conjugacy_classes()?;
    let products = ClassProducts::new(table);
    let degree = group.degree();
    let types = rh_candidate_types(table, degree, 0);
    let rh_types = types.len();
    let types: Vec<RamificationType> = if params.scott {
        let socle = group.socle_regular_elementary(p, e)?;
        let values = scott_values(table, &socle, p, e)?;
        types.into_iter().filter(|rt| scott_filter(rt, &values, e)).collect()
    } else {
        types
    };
    let after_scott = types.len();
    let types: Vec<RamificationType> = types
        .into_iter()
        .filter(|rt| structure_constant_filter(&products, rt))
        .collect();
    let after_structure = types.len();
    let mut systems = Vec::new();
    let mut not_computed = Vec::new();
    for rt in &types {
        if rt.arity() > params.max_arity {
            not_computed.push(rt.labels.clone());
            continue;
        }
        if let Some(row) = classify_type(name, group, rt, params)? {
            systems.push(row);
        }
    }
    systems.sort_by(|a, b| {
        (a.arity(), &a.ramification_type).cmp(&(b.arity(), &b.ramification_type))
    });
    Ok(Classification {
        group: name.to_string(),
        degree,
        p,
        e,
        params: params.clone(),
        rh_types,
        after_scott,
        after_structure,
        systems,
        not_computed,
    })
}

/// Distinct multisets of labels, for comparing against tables written in
/// another order.
pub fn type_key(labels: &[String]) -> Vec<String> {
    let mut v = labels.to_vec();
    v.sort();
    v
}

pub fn distinct_classes(rt: &RamificationType) -> usize {
    rt.classes.iter().collect::<FxHashSet<_>>().len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;

    fn p(n: usize, s: &str) -> Perm {
        Perm::parse(n, s).unwrap()
    }

    fn s4() -> PermGroup {
        PermGroup::new(4, vec![p(4, "(1,2)"), p(4, "(1,2,3,4)")]).unwrap()
    }

    #[test]
    fn hurwitz_curve() {
        assert!(rh_galois_check(&[2, 3, 7], 168, 3));
        assert!(!rh_galois_check(&[2, 3, 7], 168, 2));
        assert!(!rh_galois_check(&[1, 1, 1], 12, 0));
        assert!(!rh_galois_check(&[1, 1, 1], 12, 5));
    }

    #[test]
    fn galois_check_matches_regular_index() {
        // S3 acting regularly: index of x is 6 - 6/|x|
        for (orders, g) in [(vec![2u64, 2, 3], 0u64), (vec![2, 2, 2, 2], 1), (vec![3, 3, 3], 1)] {
            let ind: u64 = orders.iter().map(|o| 6 - 6 / o).sum();
            assert_eq!(rh_galois_check(&orders, 6, g), ind == 2 * (6 + g - 1));
        }
    }

    #[test]
    fn candidates_sum_to_target() {
        let g = s4();
        let t = g.conjugacy_classes().unwrap();
        let types = rh_candidate_types(t, 4, 0);
        assert!(!types.is_empty());
        for rt in &types {
            assert!(rt.arity() >= 3);
            let s: usize = rt.classes.iter().map(|&c| t.class(c).perm_index).sum();
            assert_eq!(s, 6);
        }
        // (2,2,2,2,2,2) transpositions and (4,4,2-cycle) are both present
        let labels: Vec<String> = types.iter().map(|r| r.to_string()).collect();
        let tr = t.class_of(&p(4, "(1,2)")).unwrap();
        assert!(types.iter().any(|r| r.classes == vec![tr; 6]), "{labels:?}");
    }

    #[test]
    fn structure_constant_discards_s3_triple_transpositions() {
        let g = PermGroup::new(3, vec![p(3, "(1,2)"), p(3, "(1,2,3)")]).unwrap();
        let t = g.conjugacy_classes().unwrap();
        let rt = RamificationType::parse(t, "2A,2A,2A").unwrap();
        assert!(!structure_constant_filter(&ClassProducts::new(t), &rt));
    }

    #[test]
    fn triples_match_classic_on_s5() {
        let g = PermGroup::new(5, vec![p(5, "(1,2)"), p(5, "(1,2,3,4,5)")]).unwrap();
        let t = g.conjugacy_classes().unwrap();
        for rt in rh_candidate_types(t, 5, 0).iter().filter(|r| r.arity() == 3) {
            let tri = enumerate_triples(&g, rt).unwrap();
            let classic = orbit_partition(&g, rt, &ClassicParams::default()).unwrap();
            assert_eq!(tri.product_one_count, classic.product_one_count);
            assert_eq!(tri.total_tuples(), classic.total_tuples(), "{rt}");
            let comps = triple_components(&g, rt).unwrap();
            assert_eq!(comps.len(), classic.orbits.len(), "{rt}");
            if distinct_classes(rt) == 3 {
                assert_eq!(tri.orbits.len(), classic.orbits.len(), "{rt}");
            }
        }
    }

    #[test]
    fn scott_values_of_s4() {
        // S4 = 2^2:S3 on 4 points; transpositions fix a line, 3-cycles nothing
        let g = s4();
        let t = g.conjugacy_classes().unwrap();
        let socle = g.socle_regular_elementary(2, 2).unwrap();
        let v = scott_values(t, &socle, 2, 2).unwrap();
        assert_eq!(v[t.class_of(&p(4, "(1,2)")).unwrap()], 1);
        assert_eq!(v[t.class_of(&p(4, "(1,2,3)")).unwrap()], 2);
        assert_eq!(v[t.class_of(&p(4, "(1,2)(3,4)")).unwrap()], 0);
    }

    #[test]
    fn scott_filter_is_only_an_optimization() {
        let g = s4();
        let mut on = ClassifyParams::default();
        on.engine = Engine::Classic;
        let mut off = on.clone();
        off.scott = false;
        let a = classify("S4", &g, 2, 2, &on).unwrap();
        let b = classify("S4", &g, 2, 2, &off).unwrap();
        assert_eq!(a.systems, b.systems);
        assert!(a.after_scott <= b.after_scott);
        assert!(!a.systems.is_empty());
    }

    #[test]
    fn engines_agree_on_s4() {
        let g = s4();
        let mut c = ClassifyParams::default();
        c.engine = Engine::Classic;
        let m = ClassifyParams::default();
        let a = classify("S4", &g, 2, 2, &c).unwrap();
        let b = classify("S4", &g, 2, 2, &m).unwrap();
        let strip = |rows: &[SystemRow]| -> Vec<(Vec<String>, Vec<u128>)> {
            rows.iter().map(|r| (r.ramification_type.clone(), r.lengths.clone())).collect()
        };
        assert_eq!(strip(&a.systems), strip(&b.systems));
    }
}
