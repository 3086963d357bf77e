//! Affine permutation groups `V:H ≤ AGL(e, p)` acting on the `p^e` vectors
//! of `F_p^e`, built from matrix generators of the linear part.
//!
//! A vector `(v_0, …, v_{e-1})` is the point `Σ v_i p^i` (0-based). Matrices
//! act on column vectors.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;

/// Square matrix over the prime field `F_p`, row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    p: u64,
    n: usize,
    a: Vec<u64>,
}

impl Mat {
    pub fn new(p: u64, n: usize, rows: &[&[i64]]) -> Mat {
        assert_eq!(rows.len(), n);
        let mut a = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n);
            a.extend(row.iter().map(|&x| x.rem_euclid(p as i64) as u64));
        }
        Mat { p, n, a }
    }

    pub fn from_entries(p: u64, n: usize, a: Vec<u64>) -> Mat {
        assert_eq!(a.len(), n * n);
        Mat {
            p,
            n,
            a: a.into_iter().map(|x| x % p).collect(),
        }
    }

    pub fn identity(p: u64, n: usize) -> Mat {
        let mut a = vec![0; n * n];
        for i in 0..n {
            a[i * n + i] = 1;
        }
        Mat { p, n, a }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> u64 {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.a[i * self.n + j]
    }

    pub fn entries(&self) -> &[u64] {
        &self.a
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!((self.p, self.n), (other.p, other.n));
        let n = self.n;
        let mut a = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = self.a[i * n + k];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    a[i * n + j] = (a[i * n + j] + x * other.a[k * n + j]) % self.p;
                }
            }
        }
        Mat { p: self.p, n, a }
    }

    pub fn pow(&self, mut e: u64) -> Mat {
        let mut base = self.clone();
        let mut acc = Mat::identity(self.p, self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum::<u64>() % self.p)
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat::identity(self.p, self.n)
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let (p, n) = (self.p, self.n);
        let mut m = self.a.clone();
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| m[r * n + col] != 0) else {
                continue;
            };
            for j in 0..n {
                m.swap(rank * n + j, piv * n + j);
            }
            let inv = mod_inverse(m[rank * n + col], p);
            for j in 0..n {
                m[rank * n + j] = m[rank * n + j] * inv % p;
            }
            for r in 0..n {
                if r != rank && m[r * n + col] != 0 {
                    let f = m[r * n + col];
                    for j in 0..n {
                        m[r * n + j] = (m[r * n + j] + p * p - f * m[rank * n + j]) % p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n
    }

    /// Multiplicative order; the matrix must be invertible.
    pub fn order(&self) -> u64 {
        let mut x = self.clone();
        let mut k = 1;
        while !x.is_identity() {
            x = x.mul(self);
            k += 1;
        }
        k
    }

    /// Companion matrix of the monic polynomial
    /// `x^n + c_{n-1} x^{n-1} + ⋯ + c_0`, with `coeffs = [c_0, …, c_{n-1}]`.
    /// It represents multiplication by a root in the basis `1, α, …`.
    pub fn companion(p: u64, coeffs: &[u64]) -> Mat {
        let n = coeffs.len();
        let mut a = vec![0; n * n];
        for i in 1..n {
            a[i * n + (i - 1)] = 1;
        }
        for (i, &c) in coeffs.iter().enumerate() {
            a[i * n + (n - 1)] = (p - c % p) % p;
        }
        Mat { p, n, a }
    }

    /// The permutation `v ↦ A·v` of the points of `F_p^n`.
    pub fn to_perm(&self) -> Result<Perm> {
        let size = (self.p as usize).pow(self.n as u32);
        let images: Vec<usize> = (0..size)
            .map(|i| point_of(self.p, &self.apply(&vector_of(self.p, self.n, i))))
            .collect();
        Perm::from_images(&images)
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                let r: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
                format!("[{}]", r.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

pub fn mod_inverse(x: u64, p: u64) -> u64 {
    let mut r = 1;
    let mut base = x % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    r
}

pub fn vector_of(p: u64, n: usize, mut point: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    for x in v.iter_mut() {
        *x = (point % p as usize) as u64;
        point /= p as usize;
    }
    v
}

pub fn point_of(p: u64, v: &[u64]) -> usize {
    v.iter().rev().fold(0, |acc, &x| acc * p as usize + x as usize)
}

/// Translation by the `i`-th basis vector.
pub fn translation(p: u64, n: usize, i: usize) -> Result<Perm> {
    let size = (p as usize).pow(n as u32);
    let images: Vec<usize> = (0..size)
        .map(|pt| {
            let mut v = vector_of(p, n, pt);
            v[i] = (v[i] + 1) % p;
            point_of(p, &v)
        })
        .collect();
    Perm::from_images(&images)
}

/// `V:H` with `V` all translations and `H = ⟨linear⟩`.
pub fn affine_group(p: u64, e: usize, linear: &[Mat]) -> Result<PermGroup> {
    let size = (p as usize).pow(e as u32);
    if size > crate::perm::MAX_DEGREE {
        return Err(Error::BadDegree(size));
    }
    let mut gens = Vec::new();
    for i in 0..e {
        gens.push(translation(p, e, i)?);
    }
    for m in linear {
        if m.dim() != e || m.field() != p || !m.is_invertible() {
            return Err(Error::Catalog(format!("bad linear generator {m:?}")));
        }
        gens.push(m.to_perm()?);
    }
    PermGroup::new(size, gens)
}

/// Generators of `GL(n, p)`: a scalar-free diagonal matrix, an elementary
/// transvection and the cyclic permutation matrix.
pub fn general_linear_generators(p: u64, n: usize) -> Vec<Mat> {
    let mut gens = Vec::new();
    if p > 2 {
        let mut d = Mat::identity(p, n);
        d.a[0] = primitive_root(p);
        gens.push(d);
    }
    if n > 1 {
        let mut t = Mat::identity(p, n);
        t.a[1] = 1;
        gens.push(t);
        let mut c = Mat::from_entries(p, n, vec![0; n * n]);
        for i in 0..n {
            c.a[((i + 1) % n) * n + i] = 1;
        }
        gens.push(c);
    }
    gens
}

pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    (2..p)
        .find(|&g| {
            let mut x = 1;
            (1..p - 1).all(|_| {
                x = x * g % p;
                x != 1
            })
        })
        .unwrap()
}

/// Companion matrix of some primitive polynomial of degree `n` over `F_p`,
/// i.e. a generator of a Singer cycle of order `p^n - 1`.
pub fn singer_cycle(p: u64, n: usize) -> Mat {
    let target = p.pow(n as u32) - 1;
    let total = p.pow(n as u32);
    for code in 0..total {
        let coeffs: Vec<u64> = vector_of(p, n, code as usize);
        if coeffs[0] == 0 {
            continue;
        }
        let m = Mat::companion(p, &coeffs);
        if m.order() == target {
            return m;
        }
    }
    unreachable!("every finite field has a primitive element")
}

/// The Frobenius map `x ↦ x^p` of `F_{p^n}` in the basis `1, α, …,
/// α^{n-1}`, where `α` is the root whose multiplication is `singer`.
pub fn frobenius(singer: &Mat) -> Mat {
    let (p, n) = (singer.p, singer.n);
    let mut a = vec![0; n * n];
    for j in 0..n {
        // column j = coordinates of α^{jp} = singer^{jp} e_0
        let col = singer.pow(j as u64 * p).apply(&unit(n, 0));
        for i in 0..n {
            a[i * n + j] = col[i];
        }
    }
    Mat { p, n, a }
}

fn unit(n: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn general_linear_orders() {
        let gl = |p: u64, n: usize| {
            affine_group(p, n, &general_linear_generators(p, n))
                .unwrap()
                .order()
        };
        assert_eq!(gl(2, 3), 8 * 168);
        assert_eq!(gl(3, 2), 9 * 48);
        assert_eq!(gl(2, 4), 16 * 20160);
        assert_eq!(gl(5, 2), 25 * 480);
    }

    #[test]
    fn singer_and_frobenius() {
        let s = singer_cycle(2, 3);
        assert_eq!(s.order(), 7);
        let f = frobenius(&s);
        assert_eq!(f.order(), 3);
        // Frobenius normalizes the Singer cycle: f s f⁻¹ = s^p
        let fi = f.pow(2);
        assert_eq!(f.mul(&s).mul(&fi), s.pow(2));
        let g = affine_group(2, 3, &[s, f]).unwrap();
        assert_eq!(g.order(), 168);
    }

    #[test]
    fn translations_form_the_socle() {
        let g = affine_group(3, 2, &general_linear_generators(3, 2)).unwrap();
        let v = g.socle_regular_elementary(3, 2).unwrap();
        assert_eq!(v.order(), 9);
        for t in 0..2 {
            assert!(v.contains(&translation(3, 2, t).unwrap()));
        }
        for x in v.elements().unwrap().iter().skip(1) {
            assert_eq!(x.fixed_points(), 0);
            assert_eq!(x.order(), 3);
        }
    }

    #[test]
    fn rank_and_points() {
        let m = Mat::new(5, 2, &[&[1, 2], &[2, 4]]);
        assert_eq!(m.rank(), 1);
        assert_eq!(point_of(5, &vector_of(5, 2, 17)), 17);
    }
}
