//! Conjugates, values and subgradients read off the generators of closed
//! epigraphs, with no LP.

use nearconvex::exactlp::Constraint;
use nearconvex::linalg::{self, dot};
use nearconvex::{Extended, HPoly, PLFunction, Rational, VPoly};

use crate::oset::OSet;

fn minus_one() -> Rational {
    -Rational::one()
}

fn lift(w: &[Rational], last: Rational) -> Vec<Rational> {
    let mut z = w.to_vec();
    z.push(last);
    z
}

/// `f*(w) = sup{⟨w, x⟩ − λ : (x, λ) ∈ epi f}` as a max over generators.
pub fn generator_conjugate_oracle(f: &PLFunction, w: &[Rational]) -> Extended {
    OSet::from_ncset(&f.epi).support(&lift(w, minus_one()))
}

/// `σ_Ω(v)` over generators of the pieces.
pub fn support_oracle(s: &OSet, v: &[Rational]) -> Extended {
    s.support(v)
}

/// Closed epigraph of `f*` from the generators of `cl epi f`.
pub fn conjugate_epi_oracle(f: &PLFunction) -> HPoly {
    epi_from_generators(&OSet::from_ncset(&f.epi).generators())
}

/// `{(w, β) : ⟨w, x⟩ − λ ≤ β for points, ⟨w, r_x⟩ − r_λ ≤ 0 for rays}`.
pub fn epi_from_generators(g: &VPoly) -> HPoly {
    let n = g.dim - 1;
    let mut ineq = vec![];
    for p in &g.points {
        ineq.push(Constraint::new(lift(&p[..n], minus_one()), p[n].clone()));
    }
    for r in &g.rays {
        ineq.push(Constraint::new(lift(&r[..n], Rational::zero()), r[n].clone()));
    }
    if g.points.is_empty() {
        return HPoly::empty(n + 1);
    }
    HPoly::new(n + 1, ineq, vec![])
}

/// `f(x) = inf{λ : (x, λ) ∈ epi f}` from the fiber over `x`.
pub fn value_oracle(f: &PLFunction, x: &[Rational]) -> Extended {
    OSet::from_ncset(&f.epi).fiber(x).inf_last()
}

/// `∂f(x̄) = {v : ⟨v, x − x̄⟩ ≤ λ − f(x̄) on cl epi f}` for finite `f(x̄)`.
pub fn subdifferential_oracle(f: &PLFunction, x: &[Rational], fx: &Rational) -> HPoly {
    subdifferential_from_generators(&OSet::from_ncset(&f.epi).generators(), x, fx)
}

/// Same as `subdifferential_oracle` for an epigraph given by generators.
pub fn subdifferential_from_generators(g: &VPoly, x: &[Rational], fx: &Rational) -> HPoly {
    let n = g.dim - 1;
    let mut ineq = vec![];
    for p in &g.points {
        ineq.push(Constraint::new(linalg::sub(&p[..n], x), &p[n] - fx));
    }
    for r in &g.rays {
        ineq.push(Constraint::new(r[..n].to_vec(), r[n].clone()));
    }
    HPoly::new(n, ineq, vec![])
}

/// Checks a claimed finite conjugate value `value = ⟨w, x⟩ − λ` at some
/// generator of `cl epi f`.
pub fn conjugate_attained(f: &PLFunction, w: &[Rational], value: &Rational) -> bool {
    let g = OSet::from_ncset(&f.epi).generators();
    let n = f.n;
    g.rays.iter().all(|r| !(&dot(w, &r[..n]) - &r[n]).is_positive()) && g.points.iter().any(|p| &(&dot(w, &p[..n]) - &p[n]) == value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nearconvex::rational::{int, q};
    use nearconvex::NCSet;

    fn abs() -> PLFunction {
        PLFunction::max_affine(1, &[(vec![int(1)], int(0)), (vec![int(-1)], int(0))], &NCSet::open(&HPoly::universe(1))).unwrap()
    }

    #[test]
    fn abs_conjugate() {
        let f = abs();
        assert_eq!(generator_conjugate_oracle(&f, &[q(1, 2)]), Extended::Finite(int(0)));
        assert_eq!(generator_conjugate_oracle(&f, &[int(2)]), Extended::PosInf);
        assert_eq!(generator_conjugate_oracle(&f, &[int(0)]), Extended::Finite(int(0)));
        let e = conjugate_epi_oracle(&f);
        assert!(e.contains(&[int(1), int(0)]));
        assert!(!e.contains(&[int(2), int(5)]));
        assert_eq!(value_oracle(&f, &[int(-3)]), Extended::Finite(int(3)));
        let s = subdifferential_oracle(&f, &[int(0)], &int(0));
        assert!(s.contains(&[int(-1)]) && s.contains(&[q(1, 3)]) && !s.contains(&[int(2)]));
        assert!(conjugate_attained(&f, &[int(1)], &int(0)));
    }
}
