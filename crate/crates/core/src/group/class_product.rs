use std::sync::{Arc, Mutex};

use rustc_hash::FxHashMap;

use super::{ClassId, ClassTable};

/// Class multiplication counts and the product-one (structure constant)
/// counts built from them, computed without characters.
///
/// `row(c)[k][l]` is the number of `y ∈ C_c` with `x·y ∈ C_l` for a fixed
/// `x ∈ C_k`; the value does not depend on the choice of `x`.
pub struct ClassProducts<'a> {
    table: &'a ClassTable,
    rows: Mutex<FxHashMap<ClassId, Arc<Vec<Vec<u32>>>>>,
}

impl<'a> ClassProducts<'a> {
    pub fn new(table: &'a ClassTable) -> Self {
        ClassProducts {
            table,
            rows: Mutex::new(FxHashMap::default()),
        }
    }

    pub fn table(&self) -> &'a ClassTable {
        self.table
    }

    pub fn row(&self, c: ClassId) -> Arc<Vec<Vec<u32>>> {
        if let Some(r) = self.rows.lock().unwrap().get(&c) {
            return r.clone();
        }
        let n = self.table.len();
        let members = self.table.class(c).members();
        let mut row = vec![vec![0u32; n]; n];
        for (k, counts) in row.iter_mut().enumerate() {
            let x = &self.table.class(k).representative;
            for y in members {
                let l = self
                    .table
                    .class_of(&(x * y))
                    .expect("class table covers the group");
                counts[l] += 1;
            }
        }
        let row = Arc::new(row);
        self.rows.lock().unwrap().insert(c, row.clone());
        row
    }

    /// `out[l]` = number of tuples in `C_1 × ⋯ × C_r` whose product lies in
    /// class `l`.
    pub fn product_distribution(&self, classes: &[ClassId]) -> Vec<u128> {
        let n = self.table.len();
        let mut dist = vec![0u128; n];
        dist[self.table.identity_class()] = 1;
        for &c in classes {
            let row = self.row(c);
            let mut next = vec![0u128; n];
            for (k, &f) in dist.iter().enumerate() {
                if f == 0 {
                    continue;
                }
                for (l, &m) in row[k].iter().enumerate() {
                    if m > 0 {
                        next[l] += f * m as u128;
                    }
                }
            }
            dist = next;
        }
        dist
    }

    /// Number of tuples `(g_1, …, g_r) ∈ C_1 × ⋯ × C_r` with product one.
    pub fn product_one_count(&self, classes: &[ClassId]) -> u128 {
        self.product_distribution(classes)[self.table.identity_class()]
    }

    /// Number of tuples in the given classes whose product is one fixed
    /// element of class `target`.
    pub fn count_with_product(&self, classes: &[ClassId], target: ClassId) -> u128 {
        let dist = self.product_distribution(classes);
        dist[target] / self.table.class(target).size() as u128
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::PermGroup;
    use crate::perm::Perm;

    fn p(n: usize, s: &str) -> Perm {
        Perm::parse(n, s).unwrap()
    }

    /// Naive backtracking count over explicit class members.
    fn brute(table: &ClassTable, classes: &[ClassId], degree: usize) -> u128 {
        fn rec(table: &ClassTable, classes: &[ClassId], acc: &Perm) -> u128 {
            match classes.split_first() {
                None => acc.is_identity() as u128,
                Some((&c, rest)) => table
                    .class(c)
                    .members()
                    .iter()
                    .map(|g| rec(table, rest, &(acc * g)))
                    .sum(),
            }
        }
        rec(table, classes, &Perm::identity(degree))
    }

    #[test]
    fn s3_examples() {
        let g = PermGroup::new(3, vec![p(3, "(1,2)"), p(3, "(1,2,3)")]).unwrap();
        let t = g.conjugacy_classes().unwrap();
        let cp = ClassProducts::new(t);
        let a2 = t.by_label("2A").unwrap();
        let a3 = t.by_label("3A").unwrap();
        assert_eq!(cp.product_one_count(&[a2, a2, a2]), 0);
        assert_eq!(cp.product_one_count(&[a2, a2, a3]), 6);
    }

    #[test]
    fn agrees_with_brute_force_on_s4() {
        let g = PermGroup::new(4, vec![p(4, "(1,2)"), p(4, "(1,2,3,4)")]).unwrap();
        let t = g.conjugacy_classes().unwrap();
        let cp = ClassProducts::new(t);
        let n = t.len();
        for a in 1..n {
            for b in a..n {
                for c in b..n {
                    let ty = [a, b, c];
                    assert_eq!(cp.product_one_count(&ty), brute(t, &ty, 4), "{ty:?}");
                }
                // (x, y) ∈ C × C⁻¹ with xy = 1 forces y = x⁻¹
                let inv = t.inverse_class(a);
                assert_eq!(cp.product_one_count(&[a, inv]), t.class(a).size() as u128);
            }
        }
        let four = [1, 2, 1, 3];
        assert_eq!(cp.product_one_count(&four), brute(t, &four, 4));
    }
}
