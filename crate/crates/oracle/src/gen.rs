//! Seeded random instances.
//!
//! Every set is built around an anchor point on the `1/2`-grid that lies in
//! its relative interior, so instances drawn with a shared anchor satisfy
//! every ri qualification condition by construction.

use nearconvex::exactlp::Constraint;
use nearconvex::linalg::{self, dot};
use nearconvex::ncset::faces;
use nearconvex::plfunc::PolyCone;
use nearconvex::{HPoly, NCSet, PLFunction, RMatrix, ROPoly, RVector, Rational, SVMap, VPoly};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MAX_CONSTRAINTS: usize = 6;
pub const MAX_PIECES: usize = 4;

pub fn instance_seed(seed: u64, index: u64) -> u64 {
    seed.wrapping_mul(1_000_003).wrapping_add(index)
}

fn half(k: i64) -> Rational {
    Rational::new(k, 2)
}

/// A corrupted set with its expected hull.
#[derive(Clone, Debug)]
pub struct Corrupted {
    pub set: NCSet,
    pub hull: HPoly,
    pub kind: &'static str,
}

#[derive(Clone, Debug)]
pub struct Cone {
    pub cone: PolyCone,
    /// A point of `ri K`.
    pub interior: RVector,
}

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        xs.choose(&mut self.rng).expect("nonempty")
    }

    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        xs.shuffle(&mut self.rng);
    }

    /// A point of the `1/2`-grid in `[−1, 1]^d`.
    pub fn anchor(&mut self, dim: usize) -> RVector {
        (0..dim).map(|_| half(self.range(-2, 2))).collect()
    }

    pub fn rational(&mut self, lo: i64, hi: i64, den: i64) -> Rational {
        Rational::new(self.range(lo * den, hi * den), den)
    }

    pub fn vector(&mut self, dim: usize, lo: i64, hi: i64, den: i64) -> RVector {
        (0..dim).map(|_| self.rational(lo, hi, den)).collect()
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> RMatrix {
        let r = (0..rows).map(|_| (0..cols).map(|_| Rational::from_int(self.range(-2, 2))).collect()).collect();
        RMatrix::from_rows(r, cols)
    }

    fn directions(&mut self, dim: usize, k: usize) -> Vec<RVector> {
        if k == dim {
            let mut perm: Vec<usize> = (0..dim).collect();
            self.shuffle(&mut perm);
            return perm
                .into_iter()
                .map(|i| linalg::scale(&linalg::unit(dim, i), &Rational::from_int(if self.chance(0.5) { 1 } else { -1 })))
                .collect();
        }
        loop {
            let us: Vec<RVector> = (0..k).map(|_| (0..dim).map(|_| Rational::from_int(self.range(-1, 1))).collect()).collect();
            if linalg::rank(&us, dim) == k {
                return us;
            }
        }
    }

    /// Vertices of a simplex-like polytope with `anchor` in its relative
    /// interior.
    pub fn polytope_vertices(&mut self, dim: usize, anchor: &[Rational]) -> Vec<RVector> {
        let k = if dim >= 2 && self.chance(0.25) { dim - 1 } else { dim };
        let us = self.directions(dim, k);
        let mut pts = vec![];
        let mut sum = linalg::zeros(dim);
        for u in &us {
            let r = half(self.range(1, 3));
            pts.push(linalg::axpy(anchor, &r, u));
            sum = linalg::add(&sum, u);
        }
        let s = half(self.range(1, 2));
        pts.push(linalg::axpy(anchor, &-s, &sum));
        if self.chance(0.3) {
            let mut v = anchor.to_vec();
            for u in &us {
                let c = half(*self.pick(&[-2, 1, 2]));
                v = linalg::axpy(&v, &c, u);
            }
            pts.push(v);
        }
        pts
    }

    pub fn polytope(&mut self, dim: usize, anchor: &[Rational]) -> HPoly {
        let mut pts = self.polytope_vertices(dim, anchor);
        loop {
            let v = VPoly { dim, points: pts.clone(), rays: vec![] };
            let h = v.to_hrep().expect("within caps");
            if h.ineq.len() <= MAX_CONSTRAINTS || pts.len() <= dim + 1 {
                return h;
            }
            pts.pop();
        }
    }

    /// `ri P` plus a few faces of `P`, or the same `ri P` cut into three pieces
    /// by a hyperplane through the anchor.
    pub fn ncset(&mut self, dim: usize, anchor: &[Rational]) -> NCSet {
        let p = self.polytope(dim, anchor);
        self.ncset_on(&p, anchor)
    }

    pub fn ncset_on(&mut self, p: &HPoly, anchor: &[Rational]) -> NCSet {
        let dim = p.dim;
        let mut bases: Vec<HPoly> = vec![];
        let split = self.chance(0.3);
        if split {
            bases.extend(self.split(p, anchor));
        } else {
            bases.push(p.clone());
        }
        let top = ROPoly::ri_of(p).expect("nonempty").aff_dim();
        let mut proper: Vec<HPoly> = faces(p).into_iter().filter(|f| ROPoly::ri_of(f).is_some_and(|r| r.aff_dim() < top)).collect();
        self.shuffle(&mut proper);
        let extra = self.range(0, if split { 1 } else { 2 }) as usize;
        bases.extend(proper.into_iter().take(extra));
        NCSet::from_pieces(dim, &bases).assume_valid()
    }

    fn split(&mut self, p: &HPoly, anchor: &[Rational]) -> Vec<HPoly> {
        let dim = p.dim;
        let v = p.to_vrep().expect("caps");
        for _ in 0..20 {
            let h: RVector = (0..dim).map(|_| Rational::from_int(self.range(-1, 1))).collect();
            let c = dot(&h, anchor);
            if v.points.iter().all(|x| dot(&h, x) == c) {
                continue;
            }
            let mut lo = p.clone();
            lo.ineq.push(Constraint::new(h.clone(), c.clone()));
            let mut hi = p.clone();
            hi.ineq.push(Constraint::new(linalg::neg(&h), -&c));
            let mut mid = p.clone();
            mid.eq.push(Constraint::new(h, c));
            return vec![lo, hi, mid];
        }
        vec![p.clone()]
    }

    /// Corrupted sets for negative controls: an extra point beyond a vertex,
    /// the facets without the interior, or a hole at the anchor.
    pub fn corrupted(&mut self, dim: usize, anchor: &[Rational]) -> Corrupted {
        let pts = self.polytope_vertices(dim, anchor);
        let p = VPoly { dim, points: pts.clone(), rays: vec![] }.to_hrep().expect("caps");
        let good = self.ncset_on(&p, anchor);
        match self.range(0, 2) {
            0 => {
                let v = self.pick(&p.to_vrep().expect("caps").points).clone();
                let q = linalg::sub(&linalg::scale(&v, &Rational::from_int(2)), anchor);
                let mut all = pts.clone();
                all.push(q.clone());
                let hull = VPoly { dim, points: all, rays: vec![] }.to_hrep().expect("caps");
                Corrupted { set: good.union(&NCSet::open(&HPoly::point(&q))), hull, kind: "extra-point" }
            }
            1 => {
                let top = ROPoly::ri_of(&p).expect("nonempty").aff_dim();
                let facets: Vec<HPoly> = faces(&p).into_iter().filter(|f| ROPoly::ri_of(f).is_some_and(|r| r.aff_dim() + 1 == top)).collect();
                Corrupted { set: NCSet::from_pieces(dim, &facets), hull: p, kind: "facets-only" }
            }
            _ => Corrupted { set: NCSet::from_pieces(dim, &punctured(&p, anchor)), hull: p, kind: "hole" },
        }
    }

    /// A function with the given anchor in `ri dom f`: max-affine on a random
    /// domain, possibly raised by `1/2` on one boundary face.
    pub fn plfunction(&mut self, n: usize, anchor: &[Rational]) -> PLFunction {
        let domain = if self.chance(0.2) { NCSet::open(&HPoly::universe(n)) } else { self.ncset(n, anchor) };
        self.plfunction_on(&domain)
    }

    pub fn plfunction_on(&mut self, domain: &NCSet) -> PLFunction {
        let n = domain.dim();
        let k = self.range(1, 2);
        let pieces: Vec<(RVector, Rational)> = (0..k).map(|_| (self.vector(n, -2, 2, 1), half(self.range(-2, 2)))).collect();
        let ri = domain.relative_interior().expect("caps");
        let low: Vec<ROPoly> = match &ri {
            Some(r) => domain.pieces().iter().filter(|p| !r.contains(&p.witness())).cloned().collect(),
            None => vec![],
        };
        if !low.is_empty() && self.chance(0.25) {
            let face = self.pick(&low).clone();
            let rest: Vec<ROPoly> = domain.pieces().iter().filter(|p| **p != face).cloned().collect();
            let bumped: Vec<(RVector, Rational)> = pieces.iter().map(|(a, b)| (a.clone(), b + &half(1))).collect();
            let f0 = PLFunction::max_affine(n, &pieces, &NCSet::from_ro(n, rest, true)).expect("dims");
            let f1 = PLFunction::max_affine(n, &bumped, &NCSet::single(face)).expect("dims");
            return PLFunction::trusted(n, f0.epi.union(&f1.epi).assume_valid());
        }
        PLFunction::max_affine(n, &pieces, domain).expect("dims")
    }

    pub fn cone(&mut self, m: usize) -> Cone {
        let one = Rational::one();
        match self.range(0, 3) {
            0 => Cone { cone: PolyCone::orthant(m), interior: vec![one; m] },
            1 => {
                let ineq = (0..m).map(|i| Constraint::new(linalg::unit(m, i), Rational::zero())).collect();
                let k = PolyCone::new(HPoly::new(m, ineq, vec![])).expect("cone");
                Cone { cone: k, interior: vec![-one; m] }
            }
            2 => Cone { cone: PolyCone::new(HPoly::universe(m)).expect("cone"), interior: linalg::zeros(m) },
            _ => Cone { cone: PolyCone::new(HPoly::point(&linalg::zeros(m))).expect("cone"), interior: linalg::zeros(m) },
        }
    }

    /// `G(x) = Gx + c + K` with `y0 ∈ ri G(x0)`.
    pub fn cone_map(&mut self, x0: &[Rational], y0: &[Rational]) -> (RMatrix, RVector, Cone) {
        let m = y0.len();
        let g = self.matrix(m, x0.len());
        let k = self.cone(m);
        let c = linalg::sub(&linalg::sub(y0, &g.mul_vec(x0)), &k.interior);
        (g, c, k)
    }

    /// A map with `(x0, y0) ∈ ri gph F`.
    pub fn svmap(&mut self, x0: &[Rational], y0: &[Rational]) -> SVMap {
        let (n, p) = (x0.len(), y0.len());
        if self.chance(0.4) {
            let (g, c, k) = self.cone_map(x0, y0);
            return SVMap::affine_plus_cone(&g, &c, k.cone.hpoly()).expect("dims");
        }
        let mut a = x0.to_vec();
        a.extend(y0.iter().cloned());
        SVMap::trusted(n, p, self.ncset(n + p, &a))
    }
}

/// `ri P` without the anchor, as pieces cut by coordinate hyperplanes.
pub fn punctured(p: &HPoly, anchor: &[Rational]) -> Vec<HPoly> {
    let dim = p.dim;
    let mut out = vec![];
    let mut slice = p.clone();
    for i in 0..dim {
        let v = slice.to_vrep().expect("caps");
        if v.points.iter().all(|x| x[i] == anchor[i]) && v.rays.iter().all(|r| r[i].is_zero()) {
            continue;
        }
        let e = linalg::unit(dim, i);
        let mut lo = slice.clone();
        lo.ineq.push(Constraint::new(e.clone(), anchor[i].clone()));
        let mut hi = slice.clone();
        hi.ineq.push(Constraint::new(linalg::neg(&e), -&anchor[i]));
        out.push(lo);
        out.push(hi);
        slice.eq.push(Constraint::new(e, anchor[i].clone()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_anchored() {
        for seed in 0..30 {
            let mut a = Gen::new(seed);
            let mut b = Gen::new(seed);
            let dim = 1 + (seed as usize % 3);
            let x = a.anchor(dim);
            assert_eq!(x, b.anchor(dim));
            let s = a.ncset(dim, &x);
            assert_eq!(s, b.ncset(dim, &x));
            assert!(s.pieces().len() <= MAX_PIECES);
            assert!(s.relative_interior().unwrap().unwrap().contains(&x));
            assert!(s.is_nearly_convex().unwrap().nearly_convex);
            let f = a.plfunction(dim, &x);
            assert!(f.is_nearly_convex().unwrap());
            assert!(f.dom().relative_interior().unwrap().unwrap().contains(&x));
        }
    }

    #[test]
    fn corruptions_are_not_nearly_convex() {
        for seed in 0..30 {
            let mut g = Gen::new(seed);
            let dim = 1 + (seed as usize % 3);
            let x = g.anchor(dim);
            let c = g.corrupted(dim, &x);
            assert!(!c.set.is_nearly_convex().unwrap().nearly_convex, "{}", c.kind);
            assert!(c.set.hull().unwrap().same_set(&c.hull), "{}", c.kind);
        }
    }
}
