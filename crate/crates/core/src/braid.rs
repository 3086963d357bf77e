//! The braid action on product-one tuples and the generator bookkeeping for
//! the parabolic subgroup `B_P` and its split at a level `k`.
//!
//! Indices are 1-based as in the usual notation `Q_i`, `Q_{ij}`. Words act
//! on the right and are applied left to right.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::group::{ClassId, ClassTable};
use crate::perm::Perm;

/// `Q_i`: `(…, g_i, g_{i+1}, …) → (…, g_{i+1}, g_{i+1}⁻¹ g_i g_{i+1}, …)`.
pub fn apply_qi(t: &mut [Perm], i: usize) -> Result<()> {
    check_index(t.len(), i, i + 1)?;
    let (a, b) = (t[i - 1].clone(), t[i].clone());
    t[i] = a.conj(&b);
    t[i - 1] = b;
    Ok(())
}

/// Inverse of [`apply_qi`]: `(u, v) → (u v u⁻¹, u)`.
pub fn apply_qi_inv(t: &mut [Perm], i: usize) -> Result<()> {
    check_index(t.len(), i, i + 1)?;
    let (u, v) = (t[i - 1].clone(), t[i].clone());
    t[i - 1] = v.conj(&u.inverse());
    t[i] = u;
    Ok(())
}

/// `Q_{ij} = Q_{j-1} ⋯ Q_{i+1} Q_i² Q_{i+1}⁻¹ ⋯ Q_{j-1}⁻¹`.
pub fn apply_qij(t: &mut [Perm], i: usize, j: usize) -> Result<()> {
    if i == 0 || i >= j {
        return Err(Error::BraidIndex {
            index: i,
            arity: t.len(),
        });
    }
    check_index(t.len(), i, j)?;
    for m in (i + 1..j).rev() {
        apply_qi(t, m)?;
    }
    apply_qi(t, i)?;
    apply_qi(t, i)?;
    for m in i + 1..j {
        apply_qi_inv(t, m)?;
    }
    Ok(())
}

/// The second expression `Q_i⁻¹ ⋯ Q_{j-2}⁻¹ Q_{j-1}² Q_{j-2} ⋯ Q_i`.
pub fn apply_qij_alt(t: &mut [Perm], i: usize, j: usize) -> Result<()> {
    if i == 0 || i >= j {
        return Err(Error::BraidIndex {
            index: i,
            arity: t.len(),
        });
    }
    check_index(t.len(), i, j)?;
    for m in i..j - 1 {
        apply_qi_inv(t, m)?;
    }
    apply_qi(t, j - 1)?;
    apply_qi(t, j - 1)?;
    for m in (i..j - 1).rev() {
        apply_qi(t, m)?;
    }
    Ok(())
}

fn check_index(arity: usize, i: usize, j: usize) -> Result<()> {
    if i == 0 || j > arity {
        return Err(Error::BraidIndex {
            index: if i == 0 { i } else { j },
            arity,
        });
    }
    Ok(())
}

/// Diagonal conjugation `t ↦ t^g`.
pub fn conjugate_tuple(t: &[Perm], g: &Perm) -> Vec<Perm> {
    t.iter().map(|x| x.conj(g)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BraidGen {
    Q(usize),
    Qij(usize, usize),
}

impl BraidGen {
    /// First and last position moved.
    pub fn support(&self) -> (usize, usize) {
        match *self {
            BraidGen::Q(i) => (i, i + 1),
            BraidGen::Qij(i, j) => (i, j),
        }
    }

    pub fn apply(&self, t: &mut [Perm]) -> Result<()> {
        match *self {
            BraidGen::Q(i) => apply_qi(t, i),
            BraidGen::Qij(i, j) => apply_qij(t, i, j),
        }
    }

    pub fn apply_inv(&self, t: &mut [Perm]) -> Result<()> {
        match *self {
            BraidGen::Q(i) => apply_qi_inv(t, i),
            BraidGen::Qij(i, j) => {
                if i == 0 || i >= j {
                    return Err(Error::BraidIndex {
                        index: i,
                        arity: t.len(),
                    });
                }
                check_index(t.len(), i, j)?;
                for m in (i + 1..j).rev() {
                    apply_qi(t, m)?;
                }
                apply_qi_inv(t, i)?;
                apply_qi_inv(t, i)?;
                for m in i + 1..j {
                    apply_qi_inv(t, m)?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for BraidGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BraidGen::Q(i) => write!(f, "Q{i}"),
            BraidGen::Qij(i, j) if i < 10 && j < 10 => write!(f, "Q{i}{j}"),
            BraidGen::Qij(i, j) => write!(f, "Q{i},{j}"),
        }
    }
}

/// A word in the `Q_i` and `Q_{ij}`, applied left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BraidWord(pub Vec<(BraidGen, bool)>);

impl BraidWord {
    pub fn single(g: BraidGen) -> BraidWord {
        BraidWord(vec![(g, false)])
    }

    pub fn apply(&self, t: &mut [Perm]) -> Result<()> {
        for &(g, inv) in &self.0 {
            if inv {
                g.apply_inv(t)?;
            } else {
                g.apply(t)?;
            }
        }
        Ok(())
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord(self.0.iter().rev().map(|&(g, inv)| (g, !inv)).collect())
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(g, inv)| if *inv { format!("{g}^-1") } else { g.to_string() })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<BraidWord> {
        let bad = |tok: &str| Error::Parse {
            line: 1,
            column: s.find(tok).map_or(0, |c| c + 1),
            message: format!("bad braid generator {tok:?}"),
        };
        let mut word = Vec::new();
        for tok in s.split_whitespace() {
            let (body, inv) = match tok.strip_suffix("^-1") {
                Some(b) => (b, true),
                None => (tok, false),
            };
            let digits = body.strip_prefix('Q').ok_or_else(|| bad(tok))?;
            let num = |x: &str| x.parse::<usize>().map_err(|_| bad(tok));
            let g = if let Some((a, b)) = digits.split_once(',') {
                BraidGen::Qij(num(a)?, num(b)?)
            } else if digits.len() == 2 {
                BraidGen::Qij(num(&digits[..1])?, num(&digits[1..])?)
            } else {
                BraidGen::Q(num(digits)?)
            };
            word.push((g, inv));
        }
        Ok(BraidWord(word))
    }
}

/// An ordered list of classes where equal classes are consecutive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RamificationType {
    pub classes: Vec<ClassId>,
    pub labels: Vec<String>,
}

impl RamificationType {
    pub fn new(table: &ClassTable, classes: Vec<ClassId>) -> Result<RamificationType> {
        let labels = classes
            .iter()
            .map(|&c| table.class(c).label.clone())
            .collect();
        let rt = RamificationType { classes, labels };
        rt.check_block_order()?;
        Ok(rt)
    }

    /// Parses `"2A,2A,3B"` (parentheses optional).
    pub fn parse(table: &ClassTable, text: &str) -> Result<RamificationType> {
        let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
        let classes = inner
            .split(',')
            .map(|l| table.resolve(l))
            .collect::<Result<Vec<_>>>()?;
        RamificationType::new(table, classes)
    }

    fn check_block_order(&self) -> Result<()> {
        for (i, c) in self.classes.iter().enumerate() {
            if let Some(j) = self.classes[i + 1..].iter().position(|d| d == c) {
                if j > 0 {
                    return Err(Error::NotBlockOrdered(self.to_string()));
                }
            }
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.classes.len()
    }

    /// Block index of every (1-based) position, stored 0-based.
    pub fn blocks(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.classes.len());
        let mut b = 0;
        for i in 0..self.classes.len() {
            if i > 0 && self.classes[i] != self.classes[i - 1] {
                b += 1;
            }
            out.push(b);
        }
        out
    }

    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.classes[i - 1] == self.classes[j - 1]
    }

    pub fn default_level(&self) -> usize {
        self.arity() / 2
    }

    /// The sub-type `C_from..=C_to` (1-based, inclusive).
    pub fn slice(&self, from: usize, to: usize) -> RamificationType {
        RamificationType {
            classes: self.classes[from - 1..to].to_vec(),
            labels: self.labels[from - 1..to].to_vec(),
        }
    }
}

impl fmt::Display for RamificationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.labels.join(","))
    }
}

/// Generators of `B_P`: every `Q_{ij}` plus `Q_i` for same-block neighbours.
/// With `lemma_exact` only the cross-block `Q_{ij}` are kept.
pub fn parabolic_generators(rt: &RamificationType, lemma_exact: bool) -> Vec<BraidGen> {
    let r = rt.arity();
    let mut gens = Vec::new();
    for i in 1..r {
        if rt.same_block(i, i + 1) {
            gens.push(BraidGen::Q(i));
        }
    }
    for i in 1..=r {
        for j in i + 1..=r {
            if !lemma_exact || !rt.same_block(i, j) {
                gens.push(BraidGen::Qij(i, j));
            }
        }
    }
    gens
}

#[derive(Clone, Debug)]
pub struct Split {
    pub k: usize,
    pub left: Vec<BraidGen>,
    pub right: Vec<BraidGen>,
    pub cross: Vec<BraidGen>,
}

/// Partitions the parabolic generators into those supported on `1..=k`,
/// on `k+1..=r`, and the crossing set `S`.
pub fn split_generators(rt: &RamificationType, k: usize) -> Result<Split> {
    let r = rt.arity();
    if k <= 1 || k >= r {
        return Err(Error::BadLevel { k, r });
    }
    let mut split = Split {
        k,
        left: Vec::new(),
        right: Vec::new(),
        cross: Vec::new(),
    };
    for g in parabolic_generators(rt, false) {
        let (lo, hi) = g.support();
        if hi <= k {
            split.left.push(g);
        } else if lo > k {
            split.right.push(g);
        } else {
            split.cross.push(g);
        }
    }
    Ok(split)
}

/// Like [`split_generators`], but the halves keep only pure braids; the
/// same-block `Q_i` move to the crossing set.
pub fn split_generators_pure(rt: &RamificationType, k: usize) -> Result<Split> {
    let mut split = split_generators(rt, k)?;
    for side in [&mut split.left, &mut split.right] {
        let (q, rest): (Vec<BraidGen>, Vec<BraidGen>) =
            side.iter().partition(|g| matches!(g, BraidGen::Q(_)));
        *side = rest;
        split.cross.extend(q);
    }
    Ok(split)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::PermGroup;

    fn p(n: usize, s: &str) -> Perm {
        Perm::parse(n, s).unwrap()
    }

    fn s4() -> PermGroup {
        PermGroup::new(4, vec![p(4, "(1,2)"), p(4, "(1,2,3,4)")]).unwrap()
    }

    #[test]
    fn qi_formula() {
        let (a, b, c) = (p(4, "(1,2)"), p(4, "(2,3,4)"), p(4, "(1,4)"));
        let mut t = vec![a.clone(), b.clone(), c.clone()];
        apply_qi(&mut t, 1).unwrap();
        assert_eq!(t, vec![b.clone(), a.conj(&b), c.clone()]);
        apply_qi_inv(&mut t, 1).unwrap();
        assert_eq!(t, vec![a, b, c]);
        assert!(apply_qi(&mut t, 3).is_err());
        assert!(apply_qi(&mut t, 0).is_err());
    }

    #[test]
    fn qij_adjacent_is_square() {
        let t0 = vec![p(4, "(1,2)"), p(4, "(2,3,4)"), p(4, "(1,4,3)")];
        let mut a = t0.clone();
        apply_qij(&mut a, 2, 3).unwrap();
        let mut b = t0.clone();
        apply_qi(&mut b, 2).unwrap();
        apply_qi(&mut b, 2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn inverse_generators_undo() {
        let t0 = vec![
            p(4, "(1,2)"),
            p(4, "(2,3,4)"),
            p(4, "(1,4,3)"),
            p(4, "(1,3)(2,4)"),
            p(4, "(1,2,3)"),
        ];
        for i in 1..=5 {
            for j in i + 1..=5 {
                let g = BraidGen::Qij(i, j);
                let mut t = t0.clone();
                g.apply(&mut t).unwrap();
                g.apply_inv(&mut t).unwrap();
                assert_eq!(t, t0, "{g}");
            }
        }
    }

    #[test]
    fn word_display_and_parse() {
        let w = BraidWord(vec![(BraidGen::Q(3), true), (BraidGen::Qij(1, 2), false)]);
        assert_eq!(w.to_string(), "Q3^-1 Q12");
        assert_eq!("Q3^-1 Q12".parse::<BraidWord>().unwrap(), w);
        let long = BraidWord(vec![(BraidGen::Qij(3, 11), false)]);
        assert_eq!(long.to_string().parse::<BraidWord>().unwrap(), long);
        assert!("X1".parse::<BraidWord>().is_err());
    }

    #[test]
    fn parabolic_examples() {
        let g = s4();
        let t = g.conjugacy_classes().unwrap();
        let distinct = RamificationType::parse(t, "2A,2B,3A").unwrap();
        assert_eq!(
            parabolic_generators(&distinct, false),
            vec![BraidGen::Qij(1, 2), BraidGen::Qij(1, 3), BraidGen::Qij(2, 3)]
        );
        let equal = RamificationType::parse(t, "2B,2B,2B").unwrap();
        assert_eq!(parabolic_generators(&equal, false).len(), 5);
        assert!(parabolic_generators(&equal, true)
            .iter()
            .all(|g| matches!(g, BraidGen::Q(_))));
        assert!(RamificationType::parse(t, "2B,3A,2B").is_err());
        assert!(RamificationType::parse(t, "2B,9Z").is_err());
    }

    #[test]
    fn split_examples() {
        let rt = RamificationType {
            classes: (0..6).collect(),
            labels: (0..6).map(|i| format!("X{i}")).collect(),
        };
        let s = split_generators(&rt, 3).unwrap();
        assert_eq!(s.cross.len(), 9);
        assert!(s.cross.iter().all(|g| matches!(g, BraidGen::Qij(i, j) if *i <= 3 && *j > 3)));
        let rt = RamificationType {
            classes: vec![1, 1, 1, 2, 2, 2],
            labels: ["2A", "2A", "2A", "2B", "2B", "2B"].map(String::from).to_vec(),
        };
        let s = split_generators(&rt, 3).unwrap();
        assert!(!s.cross.contains(&BraidGen::Q(3)));
        assert_eq!(s.cross.len(), 9);
        assert!(split_generators(&rt, 1).is_err());
        assert!(split_generators(&rt, 6).is_err());
    }
}
