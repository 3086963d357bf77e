use super::PermGroup;
use crate::error::{Error, Result};

impl PermGroup {
    /// The regular normal elementary abelian subgroup of order `p^e` of an
    /// affine group of degree `p^e`.
    ///
    /// Tries the normal closure of each class of elements of order `p` and
    /// accepts the first one that is elementary abelian, of order `p^e` and
    /// transitive.
    pub fn socle_regular_elementary(&self, p: u64, e: u32) -> Result<PermGroup> {
        let target = (p as u128).pow(e);
        let not_affine = || Error::NotAffine { p, e };
        if self.degree() as u128 != target {
            return Err(not_affine());
        }
        let classes = self.conjugacy_classes()?;
        for class in classes.classes() {
            if class.element_order != p {
                continue;
            }
            let closure = self.normal_closure(std::slice::from_ref(&class.representative));
            if closure.order() != target || !closure.is_abelian() || !closure.is_transitive() {
                continue;
            }
            if closure.generators().iter().all(|g| g.order() == p) {
                return Ok(closure);
            }
        }
        Err(not_affine())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;

    #[test]
    fn symmetric_group_is_not_affine() {
        let s5 = PermGroup::new(
            5,
            vec![
                Perm::parse(5, "(1,2)").unwrap(),
                Perm::parse(5, "(1,2,3,4,5)").unwrap(),
            ],
        )
        .unwrap();
        assert!(matches!(
            s5.socle_regular_elementary(5, 1),
            Err(Error::NotAffine { .. })
        ));
    }

    #[test]
    fn s4_has_klein_socle() {
        let s4 = PermGroup::new(
            4,
            vec![
                Perm::parse(4, "(1,2)").unwrap(),
                Perm::parse(4, "(1,2,3,4)").unwrap(),
            ],
        )
        .unwrap();
        let v = s4.socle_regular_elementary(2, 2).unwrap();
        assert_eq!(v.order(), 4);
        assert!(v.contains(&Perm::parse(4, "(1,2)(3,4)").unwrap()));
    }
}
