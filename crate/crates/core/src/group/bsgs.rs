//! Deterministic Schreier–Sims.

use rand::Rng;

use crate::perm::Perm;

#[derive(Clone, Debug)]
struct Level {
    base_point: usize,
    strong_gens: Vec<Perm>,
    orbit: Vec<usize>,
    /// `transversal[p]` maps the base point to `p`.
    transversal: Vec<Option<Perm>>,
}

impl Level {
    fn new(degree: usize, base_point: usize, strong_gens: Vec<Perm>) -> Level {
        let mut level = Level {
            base_point,
            strong_gens,
            orbit: Vec::new(),
            transversal: vec![None; degree],
        };
        level.rebuild_orbit();
        level
    }

    fn rebuild_orbit(&mut self) {
        let degree = self.transversal.len();
        self.transversal.iter_mut().for_each(|t| *t = None);
        self.transversal[self.base_point] = Some(Perm::identity(degree));
        self.orbit.clear();
        self.orbit.push(self.base_point);
        let mut head = 0;
        while head < self.orbit.len() {
            let p = self.orbit[head];
            head += 1;
            for s in &self.strong_gens {
                let q = s.apply(p);
                if self.transversal[q].is_none() {
                    let u = self.transversal[p].as_ref().unwrap() * s;
                    self.transversal[q] = Some(u);
                    self.orbit.push(q);
                }
            }
        }
    }
}

/// A base and strong generating set.
#[derive(Clone, Debug)]
pub struct Bsgs {
    degree: usize,
    levels: Vec<Level>,
}

impl Bsgs {
    pub fn new(degree: usize, gens: &[Perm]) -> Bsgs {
        let mut bsgs = Bsgs {
            degree,
            levels: Vec::new(),
        };
        let gens: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        if gens.is_empty() {
            return bsgs;
        }
        for g in &gens {
            if bsgs.levels.iter().all(|l| g.apply(l.base_point) == l.base_point) {
                let moved = (0..degree).find(|&p| g.apply(p) != p).unwrap();
                bsgs.levels.push(Level::new(degree, moved, Vec::new()));
            }
        }
        for i in 0..bsgs.levels.len() {
            let fixed: Vec<usize> = bsgs.levels[..i].iter().map(|l| l.base_point).collect();
            let sg: Vec<Perm> = gens
                .iter()
                .filter(|g| fixed.iter().all(|&b| g.apply(b) == b))
                .cloned()
                .collect();
            bsgs.levels[i].strong_gens = sg;
            bsgs.levels[i].rebuild_orbit();
        }
        bsgs.complete(bsgs.levels.len() as isize - 1);
        bsgs
    }

    /// Runs the Schreier generator test from level `start` downward.
    fn complete(&mut self, start: isize) {
        let mut i = start;
        while i >= 0 {
            let level = i as usize;
            match self.find_missing(level) {
                Some((h, j)) => {
                    if j == self.levels.len() {
                        let moved = (0..self.degree).find(|&p| h.apply(p) != p).unwrap();
                        self.levels.push(Level::new(self.degree, moved, Vec::new()));
                    }
                    for l in level + 1..=j {
                        self.levels[l].strong_gens.push(h.clone());
                        self.levels[l].rebuild_orbit();
                    }
                    i = j as isize;
                }
                None => i -= 1,
            }
        }
    }

    /// First Schreier generator at `level` whose sift through the deeper
    /// levels leaves a nontrivial residue.
    fn find_missing(&self, level: usize) -> Option<(Perm, usize)> {
        let lv = &self.levels[level];
        for &beta in &lv.orbit {
            let u_beta = lv.transversal[beta].as_ref().unwrap();
            for s in &lv.strong_gens {
                let img = s.apply(beta);
                let u_img = lv.transversal[img].as_ref().unwrap();
                let g = &(u_beta * s) * &u_img.inverse();
                let (h, j) = self.sift_from(g, level + 1);
                if !h.is_identity() {
                    return Some((h, j));
                }
            }
        }
        None
    }

    /// Sifts `g` starting at `from`; returns the residue and the level at
    /// which it fell out (`levels.len()` when it passed every level).
    fn sift_from(&self, mut g: Perm, from: usize) -> (Perm, usize) {
        for (j, lv) in self.levels.iter().enumerate().skip(from) {
            let img = g.apply(lv.base_point);
            match &lv.transversal[img] {
                Some(u) => g = &g * &u.inverse(),
                None => return (g, j),
            }
        }
        (g, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, _) = self.sift_from(g.clone(), 0);
        h.is_identity()
    }

    /// Adds `g` as a generator if it is not already a member; returns whether
    /// the group grew.
    pub fn extend(&mut self, g: &Perm) -> bool {
        let (h, j) = self.sift_from(g.clone(), 0);
        if h.is_identity() {
            return false;
        }
        if j == self.levels.len() {
            let moved = (0..self.degree).find(|&p| h.apply(p) != p).unwrap();
            self.levels.push(Level::new(self.degree, moved, Vec::new()));
        }
        for l in 0..=j {
            self.levels[l].strong_gens.push(h.clone());
            self.levels[l].rebuild_orbit();
        }
        self.complete(j as isize);
        true
    }

    /// Calls `f` on every element. Elements come out as
    /// `u_{k-1} ⋯ u_1 u_0` over all transversal choices.
    pub fn for_each_element(&self, mut f: impl FnMut(&Perm)) {
        fn rec(levels: &[Level], acc: &Perm, f: &mut dyn FnMut(&Perm)) {
            match levels.split_first() {
                None => f(acc),
                Some((last, rest)) => {
                    for &p in &last.orbit {
                        let u = last.transversal[p].as_ref().unwrap();
                        rec(rest, &(acc * u), f);
                    }
                }
            }
        }
        let rev: Vec<Level> = self.levels.iter().rev().cloned().collect();
        rec(&rev, &Perm::identity(self.degree), &mut f);
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        let mut acc = Perm::identity(self.degree);
        for lv in self.levels.iter().rev() {
            let p = lv.orbit[rng.gen_range(0..lv.orbit.len())];
            acc = &acc * lv.transversal[p].as_ref().unwrap();
        }
        acc
    }

    pub fn strong_generators(&self) -> Vec<Perm> {
        self.levels
            .first()
            .map(|l| l.strong_gens.clone())
            .unwrap_or_default()
    }
}
