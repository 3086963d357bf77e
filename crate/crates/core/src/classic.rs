//! Exhaustive orbit engine: enumerates Nielsen tuples of a ramification type
//! and partitions them into `B_P × G` orbits by breadth-first search over
//! canonical forms. This is the ground-truth oracle for the matching engine.

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::braid::{parabolic_generators, BraidGen, RamificationType};
use crate::error::{Error, Result};
use crate::group::{ClassId, ClassProducts, ClassTable, PermGroup};
use crate::perm::{product, Perm};

pub type Tuple = Vec<Perm>;

pub const DEFAULT_WORK_CAP: usize = 10_000_000;

/// Calls `f` on every tuple of `C_1 × ⋯ × C_m` whose product is `target`,
/// optionally with the first entry fixed. Positions whose partial product
/// can no longer be completed are pruned using class-product counts.
/// Returning `false` from `f` stops the enumeration.
pub fn for_each_tuple(
    products: &ClassProducts<'_>,
    classes: &[ClassId],
    target: &Perm,
    first: Option<&Perm>,
    mut f: impl FnMut(&[Perm]) -> Result<bool>,
) -> Result<()> {
    let table = products.table();
    let m = classes.len();
    if m == 0 {
        return Ok(());
    }
    // feasible[i][l]: some tuple of C_i..C_m has product in class l
    let mut feasible = vec![vec![false; table.len()]; m + 1];
    for i in 0..m {
        for (l, &n) in products.product_distribution(&classes[i..]).iter().enumerate() {
            feasible[i][l] = n > 0;
        }
    }
    feasible[m][table.identity_class()] = true;
    let degree = target.degree();
    let mut stack: Vec<Perm> = Vec::with_capacity(m);
    let mut partial = vec![Perm::identity(degree)];

    fn rec(
        i: usize,
        m: usize,
        classes: &[ClassId],
        table: &ClassTable,
        target: &Perm,
        first: Option<&Perm>,
        feasible: &[Vec<bool>],
        stack: &mut Vec<Perm>,
        partial: &mut Vec<Perm>,
        f: &mut dyn FnMut(&[Perm]) -> Result<bool>,
    ) -> Result<bool> {
        let p = partial[i].clone();
        if i == m - 1 {
            let g = &p.inverse() * target;
            if table.class_of(&g) == Some(classes[i]) && (i > 0 || first.map_or(true, |x| *x == g))
            {
                stack.push(g);
                let go = f(stack)?;
                stack.pop();
                return Ok(go);
            }
            return Ok(true);
        }
        let members: &[Perm] = match (i, first) {
            (0, Some(x)) => std::slice::from_ref(x),
            _ => table.class(classes[i]).members(),
        };
        for g in members {
            let q = &p * g;
            let rest = &q.inverse() * target;
            let Some(l) = table.class_of(&rest) else {
                return Err(Error::NotInGroup);
            };
            if !feasible[i + 1][l] {
                continue;
            }
            stack.push(g.clone());
            partial.push(q);
            let go = rec(
                i + 1,
                m,
                classes,
                table,
                target,
                first,
                feasible,
                stack,
                partial,
                f,
            )?;
            partial.pop();
            stack.pop();
            if !go {
                return Ok(false);
            }
        }
        Ok(true)
    }

    if let Some(x) = first {
        if table.class_of(x) != Some(classes[0]) {
            return Ok(());
        }
    }
    rec(
        0,
        m,
        classes,
        table,
        target,
        first,
        &feasible,
        &mut stack,
        &mut partial,
        &mut f,
    )?;
    Ok(())
}

/// All product-one tuples of a type, optionally only the generating ones.
pub fn enumerate_tuples(
    group: &PermGroup,
    rt: &RamificationType,
    generating_only: bool,
) -> Result<Vec<Tuple>> {
    let table = group.conjugacy_classes()?;
    let products = ClassProducts::new(table);
    let mut out = Vec::new();
    for_each_tuple(
        &products,
        &rt.classes,
        &group.identity(),
        None,
        |t| {
            if !generating_only || group.generates(t) {
                out.push(t.to_vec());
            }
            Ok(true)
        },
    )?;
    Ok(out)
}

/// Lexicographically least member of `{t^g : g ∈ under}`, given the
/// elements of `under`.
pub fn canonical_form(t: &[Perm], under: &[Perm]) -> Tuple {
    let mut best = t.to_vec();
    for g in under {
        if lex_less_conj(t, g, &best) {
            best = t.iter().map(|x| x.conj(g)).collect();
        }
    }
    best
}

/// Whether `t^g < best`, conjugating entries lazily.
fn lex_less_conj(t: &[Perm], g: &Perm, best: &[Perm]) -> bool {
    for (x, b) in t.iter().zip(best) {
        let y = x.conj(g);
        match y.cmp(b) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}

/// Canonical forms under diagonal conjugation by the whole group: the first
/// entry is moved to its class representative, then the remaining freedom
/// (the representative's centralizer) is minimized over.
pub struct Canonicalizer<'g> {
    table: &'g ClassTable,
    centralizers: FxHashMap<ClassId, Vec<Perm>>,
}

impl<'g> Canonicalizer<'g> {
    pub fn new(group: &'g PermGroup, classes: &[ClassId]) -> Result<Canonicalizer<'g>> {
        let table = group.conjugacy_classes()?;
        let mut centralizers = FxHashMap::default();
        for &c in classes {
            if let std::collections::hash_map::Entry::Vacant(e) = centralizers.entry(c) {
                e.insert(table.class(c).centralizer().elements()?.as_slice().to_vec());
            }
        }
        Ok(Canonicalizer {
            table,
            centralizers,
        })
    }

    /// Returns the canonical form and the order of its stabilizer in `G`.
    pub fn canonical(&self, t: &[Perm]) -> Result<(Tuple, usize)> {
        let (c, _) = self.table.locate(&t[0]).ok_or(Error::NotInGroup)?;
        let g = self.table.conjugator_from(&t[0]).ok_or(Error::NotInGroup)?;
        let moved: Tuple = t.iter().map(|x| x.conj(&g)).collect();
        let cent = self
            .centralizers
            .get(&c)
            .ok_or_else(|| Error::Internal("class not prepared for canonical forms".into()))?;
        let mut best = moved.clone();
        let mut stab = 0;
        for z in cent {
            let mut ord = std::cmp::Ordering::Equal;
            for (x, b) in moved.iter().zip(&best).skip(1) {
                ord = x.conj(z).cmp(b);
                if ord != std::cmp::Ordering::Equal {
                    break;
                }
            }
            match ord {
                std::cmp::Ordering::Less => {
                    best = moved.iter().map(|x| x.conj(z)).collect();
                    stab = 1;
                }
                std::cmp::Ordering::Equal => stab += 1,
                std::cmp::Ordering::Greater => {}
            }
        }
        Ok((best, stab))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    /// Number of `G`-classes of tuples (canonical forms).
    pub length: u64,
    /// Number of tuples.
    pub tuples: u128,
    pub representative: Tuple,
    pub generating: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub ramification_type: Vec<String>,
    /// Generating orbits, longest first.
    pub orbits: Vec<Orbit>,
    pub non_generating: Vec<Orbit>,
    pub product_one_count: u128,
}

impl OrbitReport {
    pub fn lengths(&self) -> Vec<u64> {
        self.orbits.iter().map(|o| o.length).collect()
    }

    pub fn largest(&self) -> u64 {
        self.orbits.iter().map(|o| o.length).max().unwrap_or(0)
    }

    pub fn generating_tuples(&self) -> u128 {
        self.orbits.iter().map(|o| o.tuples).sum()
    }

    pub fn total_tuples(&self) -> u128 {
        self.generating_tuples() + self.non_generating.iter().map(|o| o.tuples).sum::<u128>()
    }
}

#[derive(Clone, Debug)]
pub struct ClassicParams {
    pub work_cap: usize,
    /// Use only the generators named in the parabolic generator lemma.
    pub lemma_exact: bool,
    /// Also partition the non-generating tuples.
    pub non_generating: bool,
}

impl Default for ClassicParams {
    fn default() -> Self {
        ClassicParams {
            work_cap: DEFAULT_WORK_CAP,
            lemma_exact: false,
            non_generating: true,
        }
    }
}

/// Partitions the Nielsen tuples of `rt` into orbits of `B_P × G`.
pub fn orbit_partition(
    group: &PermGroup,
    rt: &RamificationType,
    params: &ClassicParams,
) -> Result<OrbitReport> {
    let table = group.conjugacy_classes()?;
    let products = ClassProducts::new(table);
    let total = products.product_one_count(&rt.classes);
    let gens = parabolic_generators(rt, params.lemma_exact);
    let canon = Canonicalizer::new(group, &rt.classes)?;
    let order = group.order();
    let x0 = table.class(rt.classes[0]).representative.clone();

    let mut seen: FxHashSet<Tuple> = FxHashSet::default();
    let mut orbits = Vec::new();
    let mut non_generating = Vec::new();
    let mut accounted: u128 = 0;
    let mut ng_accounted: u128 = 0;
    let mut visited = 0usize;

    for_each_tuple(&products, &rt.classes, &group.identity(), Some(&x0), |t| {
        let (form, _) = canon.canonical(t)?;
        if seen.contains(&form) {
            return Ok(true);
        }
        let generating = group.generates(&form);
        let mut orbit =
            bfs_orbit(&canon, &gens, form, order, &mut seen, params.work_cap, &mut visited)?;
        orbit.generating = generating;
        if generating {
            accounted += orbit.tuples;
            orbits.push(orbit);
        } else {
            ng_accounted += orbit.tuples;
            if params.non_generating {
                non_generating.push(orbit);
            }
        }
        Ok(accounted + ng_accounted < total)
    })?;

    if accounted + ng_accounted != total {
        return Err(Error::Internal(format!(
            "orbits account for {} of {} tuples",
            accounted + ng_accounted,
            total
        )));
    }
    orbits.sort_by(|a, b| b.length.cmp(&a.length).then(a.representative.cmp(&b.representative)));
    non_generating
        .sort_by(|a, b| b.length.cmp(&a.length).then(a.representative.cmp(&b.representative)));
    Ok(OrbitReport {
        ramification_type: rt.labels.clone(),
        orbits,
        non_generating,
        product_one_count: total,
    })
}

fn bfs_orbit(
    canon: &Canonicalizer<'_>,
    gens: &[BraidGen],
    start: Tuple,
    order: u128,
    seen: &mut FxHashSet<Tuple>,
    work_cap: usize,
    visited: &mut usize,
) -> Result<Orbit> {
    let (_, stab0) = canon.canonical(&start)?;
    let mut queue = vec![(start.clone(), stab0)];
    seen.insert(start.clone());
    let mut tuples: u128 = 0;
    let mut head = 0;
    while head < queue.len() {
        let (t, stab) = queue[head].clone();
        head += 1;
        tuples += order / stab as u128;
        for g in gens {
            let mut u = t.clone();
            g.apply(&mut u)?;
            let (form, s) = canon.canonical(&u)?;
            if !seen.contains(&form) {
                seen.insert(form.clone());
                *visited += 1;
                if *visited > work_cap {
                    return Err(Error::WorkCap(work_cap));
                }
                queue.push((form, s));
            }
        }
    }
    Ok(Orbit {
        length: queue.len() as u64,
        tuples,
        representative: start,
        generating: false,
    })
}

/// Summary of one `(L_k × G)`-orbit on heads (or `(R_k × G)`-orbit on
/// tails) of a fixed nodal type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfOrbit {
    pub class: ClassId,
    /// Number of half-tuples `(g_1, …, g_k)` (closing element not pinned).
    pub tuples: u128,
    pub representative: Tuple,
}

/// Head orbits of nodal type `c`: the `k`-tuples in `C_1 × ⋯ × C_k` whose
/// product closes to an element of `c`.
pub fn compute_heads(
    group: &PermGroup,
    rt: &RamificationType,
    k: usize,
    c: ClassId,
) -> Result<Vec<HalfOrbit>> {
    half_orbits(group, rt, k, c, true)
}

/// Tail orbits of nodal type `d`: the `(r-k)`-tuples closing to `d`.
pub fn compute_tails(
    group: &PermGroup,
    rt: &RamificationType,
    k: usize,
    d: ClassId,
) -> Result<Vec<HalfOrbit>> {
    half_orbits(group, rt, k, d, false)
}

fn half_orbits(
    group: &PermGroup,
    rt: &RamificationType,
    k: usize,
    c: ClassId,
    head: bool,
) -> Result<Vec<HalfOrbit>> {
    let table = group.conjugacy_classes()?;
    let split = crate::braid::split_generators(rt, k)?;
    let shadow = if head {
        crate::matching::Shadow::build(group, &rt.classes[..k], &split.left, 0, c, true)?
    } else {
        let x0_class = table.inverse_class(c);
        crate::matching::Shadow::build(group, &rt.classes[k..], &split.right, k, x0_class, false)?
    };
    let size = table.class(c).size() as u128;
    Ok(shadow
        .orbits
        .iter()
        .map(|o| HalfOrbit {
            class: c,
            tuples: o.shadow_size as u128 * size,
            representative: shadow.braid_orbits[o.base].elements[0].clone(),
        })
        .collect())
}

/// Product of a tuple, left to right.
pub fn tuple_product(t: &[Perm]) -> Perm {
    product(t[0].degree(), t.iter())
}
