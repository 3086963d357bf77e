use super::{ElementTable, PermGroup};
use crate::error::{Error, Result};
use crate::perm::Perm;

/// The double cosets `A·w·B` partitioning a group `W` that contains both
/// `A` and `B`.
#[derive(Debug, Clone)]
pub struct DoubleCosets {
    /// Least element of each double coset, in increasing order.
    pub representatives: Vec<Perm>,
    pub sizes: Vec<usize>,
    /// Coset id of every element of `W`, indexed like `W`'s element table.
    coset_of: Vec<u32>,
}

impl DoubleCosets {
    /// Enumerates `A\W/B` by closing each unassigned element under left
    /// multiplication by generators of `A` and right multiplication by
    /// generators of `B`.
    pub fn compute(a: &PermGroup, b: &PermGroup, within: &PermGroup) -> Result<DoubleCosets> {
        let elems = within.elements()?;
        for g in a.generators().iter().chain(b.generators()) {
            if elems.index_of(g).is_none() {
                return Err(Error::NotInGroup);
            }
        }
        let n = elems.len();
        let mut coset_of = vec![u32::MAX; n];
        let mut representatives = Vec::new();
        let mut sizes = Vec::new();
        let mut queue: Vec<u32> = Vec::new();
        for start in 0..n {
            if coset_of[start] != u32::MAX {
                continue;
            }
            let id = representatives.len() as u32;
            representatives.push(elems.get(start as u32).clone());
            coset_of[start] = id;
            queue.clear();
            queue.push(start as u32);
            let mut head = 0;
            while head < queue.len() {
                let x = elems.get(queue[head]).clone();
                head += 1;
                let left = a.generators().iter().map(|s| s * &x);
                let right = b.generators().iter().map(|t| &x * t);
                for y in left.chain(right) {
                    let j = elems.index_of(&y).ok_or(Error::NotInGroup)? as usize;
                    if coset_of[j] == u32::MAX {
                        coset_of[j] = id;
                        queue.push(j as u32);
                    }
                }
            }
            sizes.push(queue.len());
        }
        Ok(DoubleCosets {
            representatives,
            sizes,
            coset_of,
        })
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// Coset id of the element with index `i` in the ambient element table.
    pub fn coset_of_index(&self, i: u32) -> usize {
        self.coset_of[i as usize] as usize
    }

    pub fn coset_of(&self, within: &ElementTable, g: &Perm) -> Option<usize> {
        within.index_of(g).map(|i| self.coset_of_index(i))
    }
}
