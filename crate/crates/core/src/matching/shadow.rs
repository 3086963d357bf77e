use rustc_hash::FxHashMap;

use crate::braid::BraidGen;
use crate::classic::{for_each_tuple, Tuple};
use crate::error::{Error, Result};
use crate::group::{Bsgs, ClassId, ClassProducts, PermGroup};
use crate::perm::Perm;

/// An orbit of the braid generators alone (no conjugation) inside a shadow.
#[derive(Clone, Debug)]
pub struct BraidOrbit {
    pub elements: Vec<Tuple>,
    /// Index into [`Shadow::orbits`].
    pub half_orbit: usize,
    /// `c` with `base^c` equal to this orbit, `base` being the first braid
    /// orbit of the same half orbit.
    pub conjugator: Perm,
}

/// One head (or tail) orbit, seen through its shadow: a `C_G(x_0)`-orbit of
/// braid-only orbits.
#[derive(Clone, Debug)]
pub struct ShadowOrbit {
    pub base: usize,
    pub members: Vec<usize>,
    /// Stabilizer of the base braid orbit in `C_G(x_0)`.
    pub normalizer: PermGroup,
    pub normalizer_order: usize,
    /// Number of shadow elements in this orbit.
    pub shadow_size: usize,
}

/// The half-tuples whose closing element is pinned to `x_0`.
///
/// For heads these are `(g_1, …, g_k)` with product `x_0⁻¹`; for tails
/// `(g_{k+1}, …, g_r)` with product `x_0`. Either way the group acting on
/// the shadow is `C_G(x_0)`.
#[derive(Clone, Debug)]
pub struct Shadow {
    pub class: ClassId,
    pub x0: Perm,
    pub head: bool,
    pub braid_orbits: Vec<BraidOrbit>,
    pub orbits: Vec<ShadowOrbit>,
    lookup: FxHashMap<Tuple, u32>,
}

impl Shadow {
    /// `gens` carry global positions; `offset` is subtracted to act on the
    /// half-tuple.
    pub fn build(
        group: &PermGroup,
        classes: &[ClassId],
        gens: &[BraidGen],
        offset: usize,
        class: ClassId,
        head: bool,
    ) -> Result<Shadow> {
        let table = group.conjugacy_classes()?;
        let products = ClassProducts::new(table);
        let x0 = table.class(class).representative.clone();
        let target = if head { x0.inverse() } else { x0.clone() };
        let mut elements = Vec::new();
        for_each_tuple(&products, classes, &target, None, |t| {
            elements.push(t.to_vec());
            Ok(true)
        })?;
        let gens: Vec<BraidGen> = gens.iter().map(|g| shift(*g, offset)).collect();
        Shadow::from_elements(group, class, x0, head, elements, &gens)
    }

    fn from_elements(
        group: &PermGroup,
        class: ClassId,
        x0: Perm,
        head: bool,
        elements: Vec<Tuple>,
        gens: &[BraidGen],
    ) -> Result<Shadow> {
        let table = group.conjugacy_classes()?;
        let mut lookup: FxHashMap<Tuple, u32> = FxHashMap::default();
        let mut braid_orbits: Vec<BraidOrbit> = Vec::new();
        for t in elements {
            if lookup.contains_key(&t) {
                continue;
            }
            let id = braid_orbits.len() as u32;
            lookup.insert(t.clone(), id);
            let mut orbit = vec![t];
            let mut head_idx = 0;
            while head_idx < orbit.len() {
                let cur = orbit[head_idx].clone();
                head_idx += 1;
                for g in gens {
                    let mut u = cur.clone();
                    g.apply(&mut u)?;
                    if !lookup.contains_key(&u) {
                        lookup.insert(u.clone(), id);
                        orbit.push(u);
                    }
                }
            }
            braid_orbits.push(BraidOrbit {
                elements: orbit,
                half_orbit: usize::MAX,
                conjugator: x0.clone(),
            });
        }

        let cent = table.class(class).centralizer();
        let cent_elems = cent.elements()?;
        let zgens = cent.generators();
        let mut orbits = Vec::new();
        for start in 0..braid_orbits.len() {
            if braid_orbits[start].half_orbit != usize::MAX {
                continue;
            }
            let hid = orbits.len();
            braid_orbits[start].half_orbit = hid;
            braid_orbits[start].conjugator = group.identity();
            let mut members = vec![start];
            let mut i = 0;
            while i < members.len() {
                let b = members[i];
                i += 1;
                let rep = braid_orbits[b].elements[0].clone();
                let cb = braid_orbits[b].conjugator.clone();
                for z in zgens {
                    let img: Tuple = rep.iter().map(|x| x.conj(z)).collect();
                    let j = *lookup
                        .get(&img)
                        .ok_or_else(|| Error::Internal("shadow not closed under C_G(x0)".into()))?
                        as usize;
                    if braid_orbits[j].half_orbit == usize::MAX {
                        braid_orbits[j].half_orbit = hid;
                        braid_orbits[j].conjugator = &cb * z;
                        members.push(j);
                    }
                }
            }
            let base_rep = &braid_orbits[start].elements[0];
            let mut nb = Bsgs::new(group.degree(), &[]);
            let mut ngens = Vec::new();
            let mut norder = 0;
            for z in cent_elems.iter() {
                let img: Tuple = base_rep.iter().map(|x| x.conj(z)).collect();
                if lookup.get(&img) == Some(&(start as u32)) {
                    norder += 1;
                    if nb.extend(z) {
                        ngens.push(z.clone());
                    }
                }
            }
            if nb.order() != norder as u128 {
                return Err(Error::Internal("normalizer is not a subgroup".into()));
            }
            let shadow_size = members.len() * braid_orbits[start].elements.len();
            orbits.push(ShadowOrbit {
                base: start,
                members,
                normalizer: group.subgroup(ngens)?,
                normalizer_order: norder,
                shadow_size,
            });
        }
        Ok(Shadow {
            class,
            x0,
            head,
            braid_orbits,
            orbits,
            lookup,
        })
    }

    pub fn len(&self) -> usize {
        self.lookup.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lookup.is_empty()
    }

    /// Braid orbit containing a half-tuple of the shadow.
    pub fn braid_orbit_of(&self, t: &[Perm]) -> Option<usize> {
        self.lookup.get(t).map(|&i| i as usize)
    }

    pub fn base_representative(&self, orbit: usize) -> &Tuple {
        &self.braid_orbits[self.orbits[orbit].base].elements[0]
    }

    pub fn base_size(&self, orbit: usize) -> usize {
        self.braid_orbits[self.orbits[orbit].base].elements.len()
    }
}

pub(crate) fn shift(g: BraidGen, offset: usize) -> BraidGen {
    match g {
        BraidGen::Q(i) => BraidGen::Q(i - offset),
        BraidGen::Qij(i, j) => BraidGen::Qij(i - offset, j - offset),
    }
}
