//! Lattice scans over `(1/den) Z^d ∩ [−4, 4]^d`.

use nearconvex::exactlp::Constraint;
use nearconvex::linalg;
use nearconvex::{MixedSystem, NCSet, RVector, Rational};
use serde::Serialize;

use crate::oset::OSet;

pub const BOX: i64 = 4;
pub const DEFAULT_DEN: i64 = 16;

/// A row `a·x (≤|<|=) b` rescaled to integers for lattice points `x = k/den`.
#[derive(Clone, Debug)]
struct IntRow {
    a: Vec<i128>,
    b: i128,
}

impl IntRow {
    fn new(c: &Constraint, den: i64) -> Option<IntRow> {
        let mut pairs = Vec::with_capacity(c.row.len() + 1);
        for v in c.row.iter().chain(std::iter::once(&c.rhs)) {
            pairs.push(v.as_i64_pair()?);
        }
        let mut l: i128 = 1;
        for &(_, d) in &pairs {
            l = lcm(l, d as i128);
            if l > 1 << 40 {
                return None;
            }
        }
        let scaled: Vec<i128> = pairs.iter().map(|&(n, d)| n as i128 * (l / d as i128)).collect();
        let (a, b) = scaled.split_at(c.row.len());
        Some(IntRow { a: a.to_vec(), b: b[0] * den as i128 })
    }

    fn slack(&self, k: &[i64]) -> i128 {
        let mut s = self.b;
        for (a, &x) in self.a.iter().zip(k) {
            s -= a * x as i128;
        }
        s
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i128, b: i128) -> i128 {
    a / gcd(a, b) * b
}

/// Integer form of a mixed system; falls back to exact rationals when a
/// coefficient does not fit.
#[derive(Clone, Debug)]
pub struct IntSystem {
    den: i64,
    weak: Vec<IntRow>,
    strict: Vec<IntRow>,
    eq: Vec<IntRow>,
    exact: Option<MixedSystem>,
}

impl IntSystem {
    pub fn new(s: &MixedSystem, den: i64) -> IntSystem {
        let conv = |rows: &[Constraint]| rows.iter().map(|c| IntRow::new(c, den)).collect::<Option<Vec<_>>>();
        match (conv(&s.weak), conv(&s.strict), conv(&s.eq)) {
            (Some(weak), Some(strict), Some(eq)) => IntSystem { den, weak, strict, eq, exact: None },
            _ => IntSystem { den, weak: vec![], strict: vec![], eq: vec![], exact: Some(s.clone()) },
        }
    }

    pub fn contains(&self, k: &[i64]) -> bool {
        if let Some(s) = &self.exact {
            return s.satisfied_by(&to_point(k, self.den));
        }
        self.eq.iter().all(|r| r.slack(k) == 0) && self.strict.iter().all(|r| r.slack(k) > 0) && self.weak.iter().all(|r| r.slack(k) >= 0)
    }
}

pub fn to_point(k: &[i64], den: i64) -> RVector {
    k.iter().map(|&v| Rational::new(v, den)).collect()
}

/// Membership in a union of pieces, each an integer system.
#[derive(Clone, Debug)]
pub struct IntUnion(Vec<IntSystem>);

impl IntUnion {
    pub fn of(set: &OSet, den: i64) -> IntUnion {
        IntUnion(set.pieces.iter().map(|p| IntSystem::new(&p.sys, den)).collect())
    }

    pub fn contains(&self, k: &[i64]) -> bool {
        self.0.iter().any(|s| s.contains(k))
    }
}

/// Lattice box covering the generators of `set`, clipped to `[−4, 4]^d`.
pub fn lattice_box(set: &OSet, den: i64) -> Vec<(i64, i64)> {
    let g = set.generators();
    let cap = BOX * den;
    (0..set.dim)
        .map(|i| {
            if g.points.is_empty() {
                return (1, 0);
            }
            let scaled = |v: &Rational| v * &Rational::from_int(den);
            let mut lo = g.points.iter().map(|p| scaled(&p[i]).floor()).min().unwrap();
            let mut hi = g.points.iter().map(|p| -(-scaled(&p[i])).floor()).max().unwrap();
            if g.rays.iter().any(|r| r[i].is_negative()) {
                lo = Rational::from_int(-cap);
            }
            if g.rays.iter().any(|r| r[i].is_positive()) {
                hi = Rational::from_int(cap);
            }
            let lo = lo.as_i64_pair().map_or(-cap, |(n, _)| n.max(-cap));
            let hi = hi.as_i64_pair().map_or(cap, |(n, _)| n.min(cap));
            (lo, hi)
        })
        .collect()
}

/// Calls `f` on every lattice point of the box; stops when `f` returns false.
pub fn scan(bounds: &[(i64, i64)], mut f: impl FnMut(&[i64]) -> bool) {
    if bounds.iter().any(|(lo, hi)| lo > hi) {
        return;
    }
    let mut k: Vec<i64> = bounds.iter().map(|b| b.0).collect();
    loop {
        if !f(&k) {
            return;
        }
        let mut i = 0;
        loop {
            if i == k.len() {
                return;
            }
            if k[i] < bounds[i].1 {
                k[i] += 1;
                break;
            }
            k[i] = bounds[i].0;
            i += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub point: RVector,
    pub expected: bool,
    pub got: bool,
}

/// Lattice points where the library set and the oracle set disagree.
pub fn grid_membership_oracle(lib: &NCSet, orc: &OSet, den: i64) -> Vec<Mismatch> {
    let lib_o = OSet::from_ncset(lib);
    let bounds: Vec<(i64, i64)> = lattice_box(orc, den)
        .into_iter()
        .zip(lattice_box(&lib_o, den))
        .map(|(a, b)| {
            if a.0 > a.1 {
                b
            } else if b.0 > b.1 {
                a
            } else {
                (a.0.min(b.0), a.1.max(b.1))
            }
        })
        .collect();
    let fast = IntUnion::of(orc, den);
    let mut out = vec![];
    scan(&bounds, |k| {
        let expected = fast.contains(k);
        let x = to_point(k, den);
        let got = lib.contains(&x);
        if expected != got {
            out.push(Mismatch { point: x, expected, got });
        }
        true
    });
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NcVerdict {
    pub nearly_convex: bool,
    /// A point of `ri(conv Ω)` missing from `Ω`.
    pub witness: Option<RVector>,
}

/// Near-convexity from the definition with `C = ri(conv Ω)`: `Ω ⊂ cl C`
/// always, so the test is `C ⊂ Ω`, probed on the lattice and on averages of
/// generators.
pub fn nc_oracle(set: &NCSet, den: i64) -> NcVerdict {
    let omega = OSet::from_ncset(set);
    let c = omega.ri();
    let mut witness = None;
    let mut probe = |x: RVector| {
        if witness.is_none() && c.contains(&x) && !omega.contains(&x) {
            witness = Some(x);
        }
    };
    let g = omega.generators();
    let pts = &g.points;
    for i in 0..pts.len() {
        for j in i..pts.len() {
            let mid = linalg::scale(&linalg::add(&pts[i], &pts[j]), &Rational::new(1, 2));
            for r in &g.rays {
                probe(linalg::add(&mid, r));
            }
            for l in j..pts.len() {
                let s = linalg::add(&linalg::add(&pts[i], &pts[j]), &pts[l]);
                probe(linalg::scale(&s, &Rational::new(1, 3)));
            }
            probe(mid);
        }
    }
    for p in &omega.pieces {
        probe(p.center());
    }
    if witness.is_none() {
        let ci = IntUnion::of(&c, den);
        let oi = IntUnion::of(&omega, den);
        scan(&lattice_box(&c, den), |k| {
            if ci.contains(k) && !oi.contains(k) {
                witness = Some(to_point(k, den));
                return false;
            }
            true
        });
    }
    NcVerdict { nearly_convex: witness.is_none(), witness }
}

/// `nc_oracle` at the finest denominator in {16, 8, 4, 2} whose lattice box
/// stays under `budget` points.
pub fn nc_oracle_budget(set: &NCSet, budget: u64) -> NcVerdict {
    let c = OSet::from_ncset(set).ri();
    let den = [DEFAULT_DEN, 8, 4, 2]
        .into_iter()
        .find(|&d| {
            let size: f64 = lattice_box(&c, d).iter().map(|(lo, hi)| (hi - lo + 1).max(0) as f64).product();
            size <= budget as f64
        })
        .unwrap_or(1);
    nc_oracle(set, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nearconvex::rational::{int, q};
    use nearconvex::HPoly;

    #[test]
    fn deleted_point_is_caught() {
        let sq = HPoly::cube(2, &int(-1), &int(1));
        let full = NCSet::from_closed(&sq);
        assert!(nc_oracle(&full, DEFAULT_DEN).nearly_convex);
        // square minus the origin: open square split by coordinate
        let mut pieces = vec![];
        for (i, sign) in [(0, 1), (0, -1)] {
            let mut p = sq.clone();
            let mut row = linalg::zeros(2);
            row[i] = int(-sign);
            p.ineq.push(Constraint::new(row, int(0)));
            pieces.push(NCSet::open(&p));
        }
        let mut holed = pieces[0].union(&pieces[1]);
        let axis = HPoly::new(
            2,
            vec![Constraint::new(vec![int(0), int(1)], int(1)), Constraint::new(vec![int(0), int(-1)], int(0))],
            vec![Constraint::new(vec![int(1), int(0)], int(0))],
        );
        holed = holed.union(&NCSet::open(&axis));
        let v = nc_oracle(&holed, DEFAULT_DEN);
        assert!(!v.nearly_convex);
        assert!(v.witness.unwrap()[0].is_zero());
        assert!(grid_membership_oracle(&holed, &OSet::from_ncset(&holed), 4).is_empty());
        let orc = OSet::from_ncset(&NCSet::open(&sq));
        let mm = grid_membership_oracle(&holed, &orc, 4);
        assert!(mm.iter().any(|m| m.point == vec![int(0), int(0)]));
        assert!(mm.iter().all(|m| m.point != vec![q(1, 2), int(0)]));
    }
}
