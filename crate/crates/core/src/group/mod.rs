//! Generator-defined permutation groups and the algorithms the orbit
//! engines need: order and membership, explicit element tables, conjugacy
//! classes with conjugator transversals, centralizers, double cosets,
//! class-product counting and the affine socle.

mod bsgs;
mod class_product;
mod classes;
mod double_coset;
mod socle;

use std::collections::VecDeque;
use std::sync::OnceLock;

use rand::Rng;
use rustc_hash::FxHashMap;

pub use bsgs::Bsgs;
pub use class_product::ClassProducts;
pub use classes::{ClassId, ClassTable, ConjClass};
pub use double_coset::DoubleCosets;

use crate::error::{Error, Result};
use crate::perm::Perm;

/// Default ceiling on explicit element enumeration.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// Sorted list of all elements with a reverse index.
#[derive(Debug)]
pub struct ElementTable {
    elements: Vec<Perm>,
    index: FxHashMap<Perm, u32>,
}

impl ElementTable {
    fn new(bsgs: &Bsgs) -> ElementTable {
        let mut elements = Vec::with_capacity(bsgs.order() as usize);
        bsgs.for_each_element(|g| elements.push(g.clone()));
        elements.sort_unstable();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i as u32))
            .collect();
        ElementTable { elements, index }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, i: u32) -> &Perm {
        &self.elements[i as usize]
    }

    pub fn index_of(&self, g: &Perm) -> Option<u32> {
        self.index.get(g).copied()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Perm> {
        self.elements.iter()
    }

    pub fn as_slice(&self) -> &[Perm] {
        &self.elements
    }
}

/// A permutation group given by generators. Order, stabilizer chain,
/// element table and conjugacy classes are computed on first use and then
/// cached; a fully cached group is read-only and can be shared freely.
#[derive(Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    cap: u128,
    label_pins: Vec<(String, Perm)>,
    bsgs: OnceLock<Bsgs>,
    elements: OnceLock<ElementTable>,
    classes: OnceLock<ClassTable>,
}

/// Subgroups are ordinary groups on the same points.
pub type Subgroup = PermGroup;

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let g = PermGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            cap: self.cap,
            label_pins: self.label_pins.clone(),
            bsgs: OnceLock::new(),
            elements: OnceLock::new(),
            classes: OnceLock::new(),
        };
        if let Some(b) = self.bsgs.get() {
            let _ = g.bsgs.set(b.clone());
        }
        g
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<PermGroup> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        let generators = if generators.is_empty() {
            vec![Perm::identity(degree)]
        } else {
            generators
        };
        Ok(PermGroup {
            degree,
            generators,
            cap: DEFAULT_ENUMERATION_CAP,
            label_pins: Vec::new(),
            bsgs: OnceLock::new(),
            elements: OnceLock::new(),
            classes: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::new(degree, Vec::new()).unwrap()
    }

    pub fn with_cap(mut self, cap: u128) -> PermGroup {
        self.cap = cap;
        self
    }

    /// Pins class labels: each `(label, member)` names the class containing
    /// `member`. Unpinned classes take the remaining letters.
    pub fn with_label_pins(mut self, pins: Vec<(String, Perm)>) -> PermGroup {
        self.label_pins = pins;
        self.classes = OnceLock::new();
        self
    }

    fn from_bsgs(degree: usize, generators: Vec<Perm>, bsgs: Bsgs, cap: u128) -> PermGroup {
        let g = PermGroup::new(degree, generators).unwrap().with_cap(cap);
        let _ = g.bsgs.set(bsgs);
        g
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn cap(&self) -> u128 {
        self.cap
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    pub fn bsgs(&self) -> &Bsgs {
        self.bsgs.get_or_init(|| Bsgs::new(self.degree, &self.generators))
    }

    pub fn order(&self) -> u128 {
        self.bsgs().order()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.bsgs().contains(g)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        self.bsgs().random_element(rng)
    }

    pub fn subgroup(&self, generators: Vec<Perm>) -> Result<Subgroup> {
        Ok(PermGroup::new(self.degree, generators)?.with_cap(self.cap))
    }

    /// True iff the entries of `tuple` generate the whole group. The tuple
    /// is assumed to lie in the group.
    pub fn generates(&self, tuple: &[Perm]) -> bool {
        let target = self.order();
        let mut b = Bsgs::new(self.degree, &[]);
        for g in tuple {
            b.extend(g);
            if b.order() == target {
                return true;
            }
        }
        b.order() == target
    }

    pub fn elements(&self) -> Result<&ElementTable> {
        if let Some(e) = self.elements.get() {
            return Ok(e);
        }
        let order = self.order();
        if order > self.cap {
            return Err(Error::CapExceeded {
                order,
                cap: self.cap,
            });
        }
        Ok(self.elements.get_or_init(|| ElementTable::new(self.bsgs())))
    }

    pub fn conjugacy_classes(&self) -> Result<&ClassTable> {
        if let Some(c) = self.classes.get() {
            return Ok(c);
        }
        let table = ClassTable::compute(self)?;
        Ok(self.classes.get_or_init(|| table))
    }

    /// Orbit of a point under the group.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut out = vec![point];
        seen[point] = true;
        let mut head = 0;
        while head < out.len() {
            let p = out[head];
            head += 1;
            for g in &self.generators {
                let q = g.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    out.push(q);
                }
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).len() == self.degree
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter()
            .enumerate()
            .all(|(i, a)| gens[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    /// Smallest subgroup containing `gens` and normalized by this group.
    pub fn normal_closure(&self, gens: &[Perm]) -> Subgroup {
        let mut b = Bsgs::new(self.degree, &[]);
        let mut closure_gens: Vec<Perm> = Vec::new();
        let mut queue: VecDeque<Perm> = gens.iter().cloned().collect();
        while let Some(x) = queue.pop_front() {
            if b.extend(&x) {
                closure_gens.push(x.clone());
                for s in &self.generators {
                    queue.push_back(x.conj(s));
                }
            }
        }
        PermGroup::from_bsgs(self.degree, closure_gens, b, self.cap)
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let gens = &self.generators;
        let mut comms = Vec::new();
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i + 1..] {
                let c = &(&a.inverse() * &b.inverse()) * &(a * b);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        self.normal_closure(&comms)
    }

    /// True iff the second derived subgroup is trivial.
    pub fn is_metabelian(&self) -> bool {
        self.derived_subgroup().derived_subgroup().order() == 1
    }

    /// Order of the centre, by testing every element against the generators.
    pub fn center_order(&self) -> Result<u128> {
        let elems = self.elements()?;
        Ok(elems
            .iter()
            .filter(|z| self.generators.iter().all(|g| z.commutes_with(g)))
            .count() as u128)
    }

    /// Elements of `self` commuting with `x`, by brute force over the
    /// element table.
    pub fn centralizer_brute(&self, x: &Perm) -> Result<Vec<Perm>> {
        Ok(self
            .elements()?
            .iter()
            .filter(|g| g.commutes_with(x))
            .cloned()
            .collect())
    }

    /// Centralizer of a group element, built from the class transversal.
    pub fn centralizer(&self, x: &Perm) -> Result<Subgroup> {
        let classes = self.conjugacy_classes()?;
        let id = classes.class_of(x).ok_or(Error::NotInGroup)?;
        let class = classes.class(id);
        let c = classes.conjugator_to(x).ok_or(Error::NotInGroup)?;
        // x = rep^c, so C(x) = C(rep)^c
        let gens = class
            .centralizer()
            .generators()
            .iter()
            .map(|z| z.conj(&c))
            .collect();
        self.subgroup(gens)
    }

    /// Some `g` with `x^g = y`, or `None` when the elements are not
    /// conjugate.
    pub fn find_conjugator(&self, x: &Perm, y: &Perm) -> Result<Option<Perm>> {
        let classes = self.conjugacy_classes()?;
        let (cx, cy) = match (classes.class_of(x), classes.class_of(y)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::NotInGroup),
        };
        if cx != cy {
            return Ok(None);
        }
        let gx = classes.conjugator_to(x).unwrap();
        let gy = classes.conjugator_to(y).unwrap();
        Ok(Some(&gx.inverse() * &gy))
    }

    /// Canonical text used for cache keys: degree and generators.
    pub fn fingerprint(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        format!("{}:{}", self.degree, gens.join(";"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Perm {
        Perm::parse(n, s).unwrap()
    }

    pub(crate) fn s3() -> PermGroup {
        PermGroup::new(3, vec![p(3, "(1,2)"), p(3, "(1,2,3)")]).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(s3().order(), 6);
        let g = s3();
        assert!(g.contains(&p(3, "(1,3)")));
        assert_eq!(g.elements().unwrap().len(), 6);
    }

    #[test]
    fn generates_examples() {
        let g = s3();
        assert!(g.generates(g.generators()));
        assert!(!g.generates(&[g.identity(), g.identity(), g.identity()]));
        assert!(!g.generates(&[p(3, "(1,2,3)"), p(3, "(1,3,2)")]));
        assert!(g.generates(&[p(3, "(1,2)"), p(3, "(2,3)")]));
    }

    #[test]
    fn centralizer_and_conjugator() {
        let g = s3();
        assert_eq!(g.centralizer(&p(3, "(1,2)")).unwrap().order(), 2);
        let x = p(3, "(1,2)");
        let y = p(3, "(1,3)");
        let c = g.find_conjugator(&x, &y).unwrap().unwrap();
        assert_eq!(x.conj(&c), y);
        assert!(g
            .find_conjugator(&x, &p(3, "(1,2,3)"))
            .unwrap()
            .is_none());
    }

    #[test]
    fn derived_series() {
        let g = s3();
        assert_eq!(g.derived_subgroup().order(), 3);
        assert!(g.is_metabelian());
        let s4 = PermGroup::new(4, vec![p(4, "(1,2)"), p(4, "(1,2,3,4)")]).unwrap();
        assert_eq!(s4.derived_subgroup().order(), 12);
        assert!(!s4.is_metabelian());
        assert_eq!(s4.center_order().unwrap(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let g = s3().with_cap(5);
        assert!(matches!(g.elements(), Err(Error::CapExceeded { .. })));
        assert!(g.conjugacy_classes().is_err());
    }
}
