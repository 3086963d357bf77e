use rustc_hash::FxHashMap;

use super::{Bsgs, PermGroup};
use crate::error::{Error, Result};
use crate::perm::Perm;

pub type ClassId = usize;

#[derive(Debug)]
pub struct ConjClass {
    pub id: ClassId,
    pub label: String,
    /// Lexicographically least member.
    pub representative: Perm,
    pub element_order: u64,
    pub perm_index: usize,
    members: Vec<Perm>,
    /// `conjugators[i]` maps the representative to `members[i]`.
    conjugators: Vec<Perm>,
    centralizer: PermGroup,
}

impl ConjClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Members in increasing order; the first is the representative.
    pub fn members(&self) -> &[Perm] {
        &self.members
    }

    pub fn conjugators(&self) -> &[Perm] {
        &self.conjugators
    }

    /// Centralizer of the representative.
    pub fn centralizer(&self) -> &PermGroup {
        &self.centralizer
    }

    pub fn fixed_points(&self) -> usize {
        self.representative.fixed_points()
    }
}

/// Conjugacy classes of a group whose elements fit under the enumeration
/// cap, with a member lookup and conjugator transversal for every class.
#[derive(Debug)]
pub struct ClassTable {
    classes: Vec<ConjClass>,
    lookup: FxHashMap<Perm, (u32, u32)>,
    inverse: Vec<ClassId>,
}

fn letters(mut i: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'A' + (i % 26) as u8);
        if i < 26 {
            break;
        }
        i = i / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).unwrap()
}

impl ClassTable {
    pub(super) fn compute(group: &PermGroup) -> Result<ClassTable> {
        let elements = group.elements()?;
        let order = group.order();
        let gens = group.generators();
        let n = elements.len();
        let mut assigned = vec![false; n];

        struct Raw {
            members: Vec<Perm>,
            conjugators: Vec<Perm>,
            centralizer: PermGroup,
        }
        let mut raw: Vec<Raw> = Vec::new();

        for start in 0..n {
            if assigned[start] {
                continue;
            }
            let rep = elements.get(start as u32).clone();
            assigned[start] = true;
            let mut members = vec![rep.clone()];
            let mut conjugators = vec![group.identity()];
            let mut pos: FxHashMap<Perm, usize> = FxHashMap::default();
            pos.insert(rep.clone(), 0);
            let mut cent = Bsgs::new(group.degree(), &[]);
            let mut cent_gens = Vec::new();
            let mut head = 0;
            while head < members.len() {
                let m = members[head].clone();
                let cm = conjugators[head].clone();
                head += 1;
                for s in gens {
                    let img = m.conj(s);
                    match pos.get(&img) {
                        Some(&j) => {
                            // cm·s·conj[j]⁻¹ fixes rep
                            let z = &(&cm * s) * &conjugators[j].inverse();
                            if !z.is_identity() && cent.extend(&z) {
                                cent_gens.push(z);
                            }
                        }
                        None => {
                            let idx = elements.index_of(&img).ok_or(Error::NotInGroup)?;
                            assigned[idx as usize] = true;
                            pos.insert(img.clone(), members.len());
                            members.push(img);
                            conjugators.push(&cm * s);
                        }
                    }
                }
            }
            let expected = order / members.len() as u128;
            if cent.order() != expected {
                return Err(Error::Internal(format!(
                    "centralizer order {} != {}",
                    cent.order(),
                    expected
                )));
            }
            let mut both: Vec<(Perm, Perm)> = members.into_iter().zip(conjugators).collect();
            both.sort_unstable_by(|a, b| a.0.cmp(&b.0));
            let (members, conjugators) = both.into_iter().unzip();
            let centralizer =
                PermGroup::from_bsgs(group.degree(), cent_gens, cent, group.cap());
            raw.push(Raw {
                members,
                conjugators,
                centralizer,
            });
        }

        raw.sort_by(|a, b| {
            let ka = (a.members[0].order(), a.members.len(), &a.members[0]);
            let kb = (b.members[0].order(), b.members.len(), &b.members[0]);
            ka.cmp(&kb)
        });

        let labels = assign_labels(
            &raw.iter()
                .map(|r| (r.members[0].order(), r.members[0].clone()))
                .collect::<Vec<_>>(),
            group.label_pins.as_slice(),
            |x| raw.iter().position(|r| r.members.binary_search(x).is_ok()),
        )?;

        let mut lookup = FxHashMap::default();
        let mut classes = Vec::with_capacity(raw.len());
        for (id, (r, label)) in raw.into_iter().zip(labels).enumerate() {
            for (i, m) in r.members.iter().enumerate() {
                lookup.insert(m.clone(), (id as u32, i as u32));
            }
            let rep = r.members[0].clone();
            classes.push(ConjClass {
                id,
                label,
                element_order: rep.order(),
                perm_index: rep.perm_index(),
                representative: rep,
                members: r.members,
                conjugators: r.conjugators,
                centralizer: r.centralizer,
            });
        }
        let inverse = classes
            .iter()
            .map(|c| lookup[&c.representative.inverse()].0 as ClassId)
            .collect();
        Ok(ClassTable {
            classes,
            lookup,
            inverse,
        })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn class(&self, id: ClassId) -> &ConjClass {
        &self.classes[id]
    }

    pub fn identity_class(&self) -> ClassId {
        0
    }

    pub fn class_of(&self, x: &Perm) -> Option<ClassId> {
        self.lookup.get(x).map(|&(c, _)| c as ClassId)
    }

    /// Class id and position within the class' member list.
    pub fn locate(&self, x: &Perm) -> Option<(ClassId, usize)> {
        self.lookup.get(x).map(|&(c, i)| (c as ClassId, i as usize))
    }

    /// Some `c` with `rep^c = x`.
    pub fn conjugator_to(&self, x: &Perm) -> Option<Perm> {
        self.locate(x)
            .map(|(c, i)| self.classes[c].conjugators[i].clone())
    }

    /// Some `g` with `x^g = rep`.
    pub fn conjugator_from(&self, x: &Perm) -> Option<Perm> {
        self.conjugator_to(x).map(|c| c.inverse())
    }

    pub fn inverse_class(&self, id: ClassId) -> ClassId {
        self.inverse[id]
    }

    pub fn by_label(&self, label: &str) -> Option<ClassId> {
        self.classes.iter().position(|c| c.label == label)
    }

    pub fn labels(&self) -> Vec<&str> {
        self.classes.iter().map(|c| c.label.as_str()).collect()
    }

    /// Parses a label, reporting the known labels on failure.
    pub fn resolve(&self, label: &str) -> Result<ClassId> {
        self.by_label(label.trim()).ok_or_else(|| Error::UnknownClass {
            label: label.trim().to_string(),
            known: self.labels().join(","),
        })
    }
}

/// Default labels are `<order><letter>` by (order, size, representative);
/// pinned labels override, unpinned classes take the unused letters.
fn assign_labels(
    keys: &[(u64, Perm)],
    pins: &[(String, Perm)],
    class_of: impl Fn(&Perm) -> Option<usize>,
) -> Result<Vec<String>> {
    let mut labels: Vec<Option<String>> = vec![None; keys.len()];
    for (label, member) in pins {
        let id = class_of(member)
            .ok_or_else(|| Error::Catalog(format!("pinned {label}: element not in group")))?;
        let order = keys[id].0;
        if !label.starts_with(&order.to_string())
            || !label[order.to_string().len()..]
                .chars()
                .all(|c| c.is_ascii_uppercase())
        {
            return Err(Error::Catalog(format!(
                "pinned label {label} does not match element order {order}"
            )));
        }
        if let Some(prev) = &labels[id] {
            if prev != label {
                return Err(Error::Catalog(format!(
                    "class pinned twice as {prev} and {label}"
                )));
            }
        }
        if labels.iter().flatten().any(|l| l == label) && labels[id].is_none() {
            return Err(Error::Catalog(format!("label {label} pinned to two classes")));
        }
        labels[id] = Some(label.clone());
    }
    let mut i = 0;
    while i < keys.len() {
        let order = keys[i].0;
        let mut j = i;
        while j < keys.len() && keys[j].0 == order {
            j += 1;
        }
        let mut next = 0;
        for slot in labels[i..j].iter_mut() {
            if slot.is_none() {
                loop {
                    let candidate = format!("{order}{}", letters(next));
                    next += 1;
                    if !pins.iter().any(|(l, _)| *l == candidate) {
                        *slot = Some(candidate);
                        break;
                    }
                }
            }
        }
        i = j;
    }
    Ok(labels.into_iter().map(Option::unwrap).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Perm {
        Perm::parse(n, s).unwrap()
    }

    #[test]
    fn letters_roll_over() {
        assert_eq!(letters(0), "A");
        assert_eq!(letters(25), "Z");
        assert_eq!(letters(26), "AA");
    }

    #[test]
    fn s3_classes() {
        let g = PermGroup::new(3, vec![p(3, "(1,2)"), p(3, "(1,2,3)")]).unwrap();
        let t = g.conjugacy_classes().unwrap();
        let sizes: Vec<usize> = t.classes().iter().map(|c| c.size()).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
        assert_eq!(t.labels(), vec!["1A", "2A", "3A"]);
        assert_eq!(t.class(1).representative, p(3, "(2,3)"));
        for c in t.classes() {
            assert_eq!(c.centralizer().order() * c.size() as u128, 6);
            for (m, conj) in c.members().iter().zip(c.conjugators()) {
                assert_eq!(&c.representative.conj(conj), m);
            }
        }
        assert_eq!(t.inverse_class(2), 2);
    }

    #[test]
    fn class_sizes_partition_the_group() {
        let s5 = PermGroup::new(5, vec![p(5, "(1,2)"), p(5, "(1,2,3,4,5)")]).unwrap();
        let t = s5.conjugacy_classes().unwrap();
        assert_eq!(t.len(), 7);
        let total: usize = t.classes().iter().map(|c| c.size()).sum();
        assert_eq!(total, 120);
        for c in t.classes() {
            for s in s5.generators() {
                assert_eq!(t.class_of(&c.representative.conj(s)), Some(c.id));
            }
        }
    }

    #[test]
    fn pins_override_letters() {
        let s4 = PermGroup::new(4, vec![p(4, "(1,2)"), p(4, "(1,2,3,4)")]).unwrap();
        let default = s4.conjugacy_classes().unwrap();
        // 2A = double transpositions (size 3), 2B = transpositions (size 6)
        assert_eq!(default.class_of(&p(4, "(1,2)(3,4)")).map(|c| default.class(c).label.clone()), Some("2A".into()));
        let pinned = s4
            .clone()
            .with_label_pins(vec![("2A".into(), p(4, "(1,3)"))]);
        let t = pinned.conjugacy_classes().unwrap();
        assert_eq!(t.class(t.class_of(&p(4, "(2,4)")).unwrap()).label, "2A");
        assert_eq!(t.class(t.class_of(&p(4, "(1,4)(2,3)")).unwrap()).label, "2B");
        let bad = s4.with_label_pins(vec![("3A".into(), p(4, "(1,3)"))]);
        assert!(bad.conjugacy_classes().is_err());
    }
}
