//! Small hand-checked instances through the public API.

use nearconvex::conjugate::{support, support_of_intersection, ConjError};
use nearconvex::plfunc::{epi_m, sum_affine_composite, PolyCone};
use nearconvex::rational::{int, q};
use nearconvex::variational::{build_ovf, coderivative, normal_cone, subdifferential, VarError};
use nearconvex::{Constraint, Extended, HPoly, NCSet, PLFunction, RMatrix, Rational, SVMap};

fn c(row: &[i64], rhs: i64) -> Constraint {
    Constraint::new(row.iter().map(|&a| int(a)).collect(), int(rhs))
}

fn interval(lo: i64, hi: i64) -> HPoly {
    HPoly::cube(1, &int(lo), &int(hi))
}

fn square() -> HPoly {
    HPoly::cube(2, &int(0), &int(1))
}

/// `[0, 1]²` without `(1/2, 0)`.
fn omega_b() -> NCSet {
    let s = square();
    let mut pieces: Vec<HPoly> = nearconvex::ncset::faces(&s);
    pieces.retain(|f| !(f.eq.len() == 1 && f.contains(&[q(1, 2), int(0)])));
    for (row, rhs) in [(vec![int(1), int(0)], q(1, 2)), (vec![int(-1), int(0)], q(-1, 2))] {
        let mut half = s.clone();
        half.eq.push(c(&[0, 1], 0));
        half.ineq.push(Constraint::new(row, rhs));
        pieces.push(half);
    }
    NCSet::from_pieces(2, &pieces).validate().unwrap()
}

/// `F(x) = [x, x + 1]` on `[0, 2]`.
fn strip() -> SVMap {
    let g = HPoly::new(2, vec![c(&[1, 0], 2), c(&[-1, 0], 0), c(&[1, -1], 0), c(&[-1, 1], 1)], vec![]);
    SVMap::from_closed_graph(1, 1, &g).unwrap()
}

fn abs() -> PLFunction {
    PLFunction::max_affine(1, &[(vec![int(1)], int(0)), (vec![int(-1)], int(0))], &NCSet::open(&HPoly::universe(1))).unwrap()
}

#[test]
fn deleted_point_square() {
    let o = omega_b();
    assert!(!o.contains(&[q(1, 2), int(0)]));
    assert!(o.contains(&[q(1, 2), q(1, 2)]) && o.contains(&[q(1, 4), int(0)]));
    assert!(o.is_nearly_convex().unwrap().nearly_convex);
    assert!(o.closure().unwrap().same_set(&square()));
    assert!(o.ri_set().unwrap().same_points(&NCSet::open(&square())));
    let shadow = o.project(&[0]);
    assert!(shadow.same_points(&NCSet::from_closed(&interval(0, 1))));
    assert!(shadow.ri_set().unwrap().same_points(&NCSet::open(&interval(0, 1))));
}

#[test]
fn two_points_are_not_nearly_convex() {
    let s = NCSet::from_closed(&HPoly::point(&[int(0)])).union(&NCSet::from_closed(&HPoly::point(&[int(1)])));
    let d = s.is_nearly_convex().unwrap();
    assert!(!d.nearly_convex);
    assert_eq!(d.witness, Some(vec![q(1, 2)]));
}

#[test]
fn intersections_flag_touching_sets() {
    let (a, b) = (NCSet::from_closed(&interval(0, 1)), NCSet::from_closed(&interval(1, 2)));
    let (meet, qc) = a.intersect(&b).unwrap();
    assert!(!qc);
    assert!(meet.same_points(&NCSet::from_closed(&HPoly::point(&[int(1)]))));
    let half_open = |coord: usize| {
        let mut p = square();
        p.ineq.retain(|r| !(r.row[coord] == int(-1)));
        NCSet::open(&square()).union(&NCSet::from_faces(&square(), &[vec![], vec![]]).unwrap()).union(&NCSet::open(&p))
    };
    let (m, qc) = half_open(0).intersect(&half_open(1)).unwrap();
    assert!(qc);
    assert!(m.ri_set().unwrap().same_points(&NCSet::open(&square())));
}

#[test]
fn open_intervals_add() {
    let s = NCSet::open(&interval(0, 1)).minkowski_sum(&NCSet::open(&interval(0, 1))).unwrap();
    assert!(s.same_points(&NCSet::open(&interval(0, 2))));
}

#[test]
fn strip_map_calculus() {
    let f = strip();
    assert!(f.eval(&[int(1)]).unwrap().same_points(&NCSet::from_closed(&interval(1, 2))));
    assert!(f.dom().same_points(&NCSet::from_closed(&interval(0, 2))));
    assert!(f.rge().same_points(&NCSet::from_closed(&interval(0, 3))));
    assert!(f.inverse().eval(&[int(2)]).unwrap().same_points(&NCSet::from_closed(&interval(1, 2))));

    let (img, qc) = f.image_of_set(&NCSet::from_closed(&interval(0, 1))).unwrap();
    assert!(qc && img.same_points(&NCSet::from_closed(&interval(0, 2))));
    let (img, qc) = f.image_of_set(&NCSet::from_closed(&HPoly::point(&[int(1)]))).unwrap();
    assert!(qc && img.ri_set().unwrap().same_points(&NCSet::open(&interval(1, 2))));

    let (pre, qc) = f.inverse_image(&NCSet::from_closed(&HPoly::point(&[int(2)]))).unwrap();
    assert!(qc && pre.same_points(&NCSet::from_closed(&interval(1, 2))));
    let (pre, qc) = f.inverse_image(&NCSet::from_closed(&HPoly::point(&[int(3)]))).unwrap();
    assert!(!qc && pre.same_points(&NCSet::from_closed(&HPoly::point(&[int(2)]))));

    let double = SVMap::affine(&RMatrix::from_rows(vec![vec![int(2)]], 1), &[int(0)]);
    let (gf, qc) = f.compose(&double).unwrap();
    assert!(qc);
    assert!(gf.eval(&[int(1)]).unwrap().same_points(&NCSet::from_closed(&interval(2, 4))));
}

#[test]
fn functions_and_cones() {
    assert_eq!(abs().eval(&[int(-2)]).unwrap(), Extended::Finite(int(2)));
    let ind = PLFunction::indicator(&NCSet::from_closed(&interval(0, 1)));
    assert_eq!(ind.eval(&[int(2)]).unwrap(), Extended::PosInf);

    let k = PolyCone::new(HPoly::new(2, vec![c(&[1, -1], 0), c(&[-1, 0], 0)], vec![])).unwrap();
    let dual = k.dual().unwrap();
    for (v, inside) in [([1, 0], true), ([-1, 1], true), ([0, 1], true), ([-1, 0], false)] {
        assert_eq!(dual.contains(&[int(v[0]), int(v[1])]), inside);
    }

    // g(X) + M with X = [0, 1], g(x) = 2x, M = [0, 1)
    let m = NCSet::from_closed(&interval(0, 1)).intersect_pointwise(&NCSet::open(&HPoly::new(1, vec![c(&[1], 1)], vec![])), false);
    let (e, certified) = epi_m(&RMatrix::from_rows(vec![vec![int(2)]], 1), &[int(0)], &m).unwrap();
    assert!(certified);
    let (img, _) = SVMap::trusted(1, 1, e).image_of_set(&NCSet::from_closed(&interval(0, 1))).unwrap();
    assert!(img.ri_set().unwrap().same_points(&NCSet::open(&interval(0, 3))));

    let phi = sum_affine_composite(&abs(), &abs(), &RMatrix::identity(1)).unwrap();
    assert_eq!(phi.eval(&[int(1), int(-3)]).unwrap(), Extended::Finite(int(3)));
    assert!(phi.is_nearly_convex().unwrap());
}

#[test]
fn normal_cones_and_subgradients() {
    let o = omega_b();
    assert_eq!(normal_cone(&o, &[q(1, 4), int(0)]).unwrap().generators, vec![vec![int(0), int(-1)]]);
    assert!(normal_cone(&o, &[q(1, 2), q(1, 2)]).unwrap().is_trivial());
    assert_eq!(normal_cone(&o, &[q(1, 2), int(0)]), Err(VarError::PointNotInSet));

    assert!(subdifferential(&abs(), &[int(0)]).unwrap().set.same_set(&interval(-1, 1)));
    assert!(subdifferential(&abs(), &[int(1)]).unwrap().set.same_set(&HPoly::point(&[int(1)])));
    let half_open = NCSet::open(&interval(-1, 1)).union(&NCSet::from_closed(&HPoly::point(&[int(1)])));
    let (r, _) = abs().restrict(&half_open).unwrap();
    let up = HPoly::new(1, vec![c(&[-1], -1)], vec![]);
    assert!(subdifferential(&r, &[int(1)]).unwrap().set.same_set(&up));

    let f = strip();
    assert!(coderivative(&f, &[int(1)], &[int(1)], &[int(1)]).unwrap().same_set(&HPoly::point(&[int(1)])));
    assert!(coderivative(&f, &[int(0)], &[int(0)], &[int(1)]).unwrap().same_set(&HPoly::new(1, vec![c(&[1], 1)], vec![])));
}

#[test]
fn optimal_value_of_the_strip() {
    let inst = build_ovf(&PLFunction::linear(&[int(0), int(1)], &int(0)), &strip()).unwrap();
    assert!(inst.qc);
    let mu = PLFunction::max_affine(1, &[(vec![int(1)], int(0))], &NCSet::from_closed(&interval(0, 2))).unwrap();
    assert!(inst.mu.epi.same_points(&mu.epi));
    assert!(inst.solution_map(&[int(1)]).unwrap().same_points(&NCSet::from_closed(&HPoly::point(&[int(1)]))));

    let open = SVMap::constant(1, &NCSet::open(&interval(0, 1)));
    let inst = build_ovf(&PLFunction::linear(&[int(0), int(1)], &int(0)), &open).unwrap();
    assert!(inst.solution_map(&[int(5)]).unwrap().is_empty());
    assert_eq!(inst.ovf_subdifferential(&[int(5)], &[int(0)]), Err(VarError::EmptySolutionMap));
}

#[test]
fn support_functions() {
    let sq = NCSet::from_closed(&square());
    let s = support(&sq, &[int(1), int(1)]).unwrap();
    assert_eq!(s.value, Extended::Finite(int(2)));
    assert_eq!(support(&sq, &[int(0), int(0)]).unwrap().value, Extended::Finite(Rational::zero()));
    let tri = NCSet::from_closed(&HPoly::new(2, vec![c(&[1, 1], 1), c(&[-1, 0], 0), c(&[0, -1], 0)], vec![]));
    let r = support_of_intersection(&sq, &tri, &[int(1), int(1)]).unwrap();
    assert!(r.qc && r.verdict);
    assert_eq!(r.lhs, Extended::Finite(int(1)));
    assert!(r.witness.is_some());
    let touching = support_of_intersection(&NCSet::from_closed(&interval(0, 1)), &NCSet::from_closed(&interval(1, 2)), &[int(1)]);
    assert_eq!(touching.unwrap_err(), ConjError::QCViolated);
}
