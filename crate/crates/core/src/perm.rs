//! Fixed-degree permutations.
//!
//! Points are `0..n` internally and `1..=n` in cycle notation. Products are
//! read left to right: `a * b` maps `i` to `b(a(i))`, i.e. apply `a` first.
//! This is the convention used everywhere in the crate (conjugation,
//! braid moves, tuple products).

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest supported degree. Points are stored as bytes.
pub const MAX_DEGREE: usize = 256;

type Images = SmallVec<[u8; 32]>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    images: Images,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        assert!(
            (1..=MAX_DEGREE).contains(&degree),
            "degree {degree} out of range"
        );
        Perm {
            images: (0..degree).map(|i| i as u8).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: &[usize]) -> Result<Perm> {
        let n = images.len();
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::BadDegree(n));
        }
        let mut seen = vec![false; n];
        for &img in images {
            if img >= n || seen[img] {
                return Err(Error::NotBijection);
            }
            seen[img] = true;
        }
        Ok(Perm {
            images: images.iter().map(|&i| i as u8).collect(),
        })
    }

    /// Builds a permutation of the given degree from 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Perm> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::BadDegree(degree));
        }
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (pos, &p) in cycle.iter().enumerate() {
                if p >= degree {
                    return Err(Error::PointOutOfRange { point: p + 1, degree });
                }
                if used[p] {
                    return Err(Error::NotBijection);
                }
                used[p] = true;
                images[p] = cycle[(pos + 1) % cycle.len()];
            }
        }
        Perm::from_images(&images)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&b| b as usize)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &b)| i == b as usize)
    }

    fn check_degree(&self, other: &Perm) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(())
    }

    /// `self` then `other`.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        self.check_degree(other)?;
        Ok(self.then(other))
    }

    #[inline]
    fn then(&self, other: &Perm) -> Perm {
        Perm {
            images: self.images.iter().map(|&i| other.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images: Images = SmallVec::from_elem(0, self.degree());
        for (i, &b) in self.images.iter().enumerate() {
            images[b as usize] = i as u8;
        }
        Perm { images }
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate(&self, g: &Perm) -> Result<Perm> {
        self.check_degree(g)?;
        Ok(self.conj(g))
    }

    /// Unchecked conjugation for hot loops; degrees are asserted.
    #[inline]
    pub fn conj(&self, g: &Perm) -> Perm {
        assert_eq!(self.degree(), g.degree(), "degree mismatch in conjugation");
        let mut images: Images = SmallVec::from_elem(0, self.degree());
        for (i, &b) in self.images.iter().enumerate() {
            images[g.images[i] as usize] = g.images[b as usize];
        }
        Perm { images }
    }

    /// Disjoint cycles of length at least two, 0-based, each starting at its
    /// smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.apply(start);
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.apply(p);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Sorted cycle lengths, fixed points included as 1-cycles.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                len += 1;
                p = self.apply(p);
            }
            lens.push(len);
        }
        lens.sort_unstable();
        lens
    }

    pub fn fixed_points(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &b)| i == b as usize)
            .count()
    }

    pub fn num_cycles(&self) -> usize {
        self.cycle_type().len()
    }

    /// Degree minus the number of cycles: the minimal number of
    /// transpositions whose product is this permutation.
    pub fn perm_index(&self) -> usize {
        self.degree() - self.num_cycles()
    }

    pub fn order(&self) -> u64 {
        self.cycle_type()
            .into_iter()
            .fold(1u64, |acc, l| lcm(acc, l as u64))
    }

    pub fn pow(&self, mut exp: u64) -> Perm {
        let mut base = self.clone();
        let mut acc = Perm::identity(self.degree());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            exp >>= 1;
        }
        acc
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.then(other) == other.then(self)
    }

    /// Parses cycle notation with 1-based points, e.g. `(1,2,3)(4,5)`.
    /// Whitespace is ignored; `()` is the identity.
    pub fn parse(degree: usize, text: &str) -> Result<Perm> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut current: Option<Vec<usize>> = None;
        let mut number = String::new();
        let bad = |col: usize, msg: &str| Error::Parse {
            line: 1,
            column: col + 1,
            message: msg.to_string(),
        };
        let flush = |number: &mut String, cur: &mut Vec<usize>, col: usize| -> Result<()> {
            if number.is_empty() {
                return Err(bad(col, "expected a point"));
            }
            let p: usize = number.parse().map_err(|_| bad(col, "bad number"))?;
            if p == 0 || p > degree {
                return Err(Error::PointOutOfRange { point: p, degree });
            }
            cur.push(p - 1);
            number.clear();
            Ok(())
        };
        for (col, ch) in text.chars().enumerate() {
            match ch {
                c if c.is_whitespace() => {}
                '(' => {
                    if current.is_some() {
                        return Err(bad(col, "nested '('"));
                    }
                    current = Some(Vec::new());
                }
                ')' => {
                    let mut cur = current.take().ok_or_else(|| bad(col, "unmatched ')'"))?;
                    if !number.is_empty() {
                        flush(&mut number, &mut cur, col)?;
                    } else if !cur.is_empty() {
                        return Err(bad(col, "trailing ','"));
                    }
                    if cur.len() > 1 {
                        cycles.push(cur);
                    }
                }
                ',' => {
                    let cur = current.as_mut().ok_or_else(|| bad(col, "',' outside a cycle"))?;
                    flush(&mut number, cur, col)?;
                }
                d if d.is_ascii_digit() => {
                    if current.is_none() {
                        return Err(bad(col, "point outside a cycle"));
                    }
                    number.push(d);
                }
                _ => return Err(bad(col, &format!("unexpected character {ch:?}"))),
            }
        }
        if current.is_some() {
            return Err(bad(text.chars().count(), "unterminated cycle"));
        }
        Perm::from_cycles(degree, &cycles)
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Serialized as the list of 1-based images.
impl serde::Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.images.iter().map(|&x| x as usize + 1))
    }
}

impl<'de> serde::Deserialize<'de> for Perm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Perm, D::Error> {
        let images: Vec<usize> = serde::Deserialize::deserialize(d)?;
        if images.contains(&0) {
            return Err(serde::de::Error::custom("images are 1-based"));
        }
        let zero: Vec<usize> = images.iter().map(|x| x - 1).collect();
        Perm::from_images(&zero).map_err(serde::de::Error::custom)
    }
}

impl Mul for &Perm {
    type Output = Perm;

    /// Left-to-right product. Panics on a degree mismatch; use
    /// [`Perm::compose`] for a checked version.
    #[inline]
    fn mul(self, rhs: &Perm) -> Perm {
        assert_eq!(self.degree(), rhs.degree(), "degree mismatch in product");
        self.then(rhs)
    }
}

impl Ord for Perm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.images.cmp(&other.images)
    }
}

impl PartialOrd for Perm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Product of a sequence of permutations, left to right.
pub fn product<'a, I>(degree: usize, perms: I) -> Perm
where
    I: IntoIterator<Item = &'a Perm>,
{
    perms
        .into_iter()
        .fold(Perm::identity(degree), |acc, p| &acc * p)
}
