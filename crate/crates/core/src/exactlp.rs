//! Exact simplex with Bland's rule, strict feasibility and certificates.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::{dot, solve_linear, LinearSolution, RMatrix, RVector};
use crate::rational::Rational;

/// One row `⟨row, x⟩ (≤ | < | =) rhs`; the relation is given by where it is stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub row: RVector,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(row: RVector, rhs: Rational) -> Self {
        Constraint { row, rhs }
    }

    pub fn slack(&self, x: &[Rational]) -> Rational {
        &self.rhs - &dot(&self.row, x)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MixedSystem {
    pub dim: usize,
    pub weak: Vec<Constraint>,
    pub strict: Vec<Constraint>,
    pub eq: Vec<Constraint>,
}

impl MixedSystem {
    pub fn new(dim: usize) -> Self {
        MixedSystem { dim, ..Default::default() }
    }

    pub fn check_dims(&self) -> Result<(), LpError> {
        let ok = |cs: &[Constraint]| cs.iter().all(|c| c.row.len() == self.dim);
        if ok(&self.weak) && ok(&self.strict) && ok(&self.eq) {
            Ok(())
        } else {
            Err(LpError::DimensionMismatch)
        }
    }

    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        self.weak.iter().all(|c| !c.slack(x).is_negative())
            && self.strict.iter().all(|c| c.slack(x).is_positive())
            && self.eq.iter().all(|c| c.slack(x).is_zero())
    }

    /// Same system with every strict row relaxed to weak.
    pub fn closed(&self) -> MixedSystem {
        let mut s = self.clone();
        s.weak.append(&mut s.strict);
        s
    }

    pub fn append(&mut self, other: &MixedSystem) {
        assert_eq!(self.dim, other.dim);
        self.weak.extend(other.weak.iter().cloned());
        self.strict.extend(other.strict.iter().cloned());
        self.eq.extend(other.eq.iter().cloned());
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("solve_lp takes a closed system; found strict rows")]
    StrictRowsPresent,
}

/// Rational extended by ±∞.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Extended {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Extended {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn neg(&self) -> Extended {
        match self {
            Extended::NegInf => Extended::PosInf,
            Extended::PosInf => Extended::NegInf,
            Extended::Finite(r) => Extended::Finite(-r),
        }
    }

    /// Sum with the convention +∞ + (−∞) = +∞ (inf-addition).
    pub fn add(&self, other: &Extended) -> Extended {
        match (self, other) {
            (Extended::PosInf, _) | (_, Extended::PosInf) => Extended::PosInf,
            (Extended::NegInf, _) | (_, Extended::NegInf) => Extended::NegInf,
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
        }
    }

    /// `self − other` where ∞ − ∞ is taken as +∞ (used for duality gaps).
    pub fn sub(&self, other: &Extended) -> Extended {
        match (self, other) {
            (Extended::PosInf, _) | (_, Extended::NegInf) => Extended::PosInf,
            (Extended::NegInf, _) | (_, Extended::PosInf) => Extended::NegInf,
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a - b),
        }
    }

    fn rank(&self) -> i8 {
        match self {
            Extended::NegInf => -1,
            Extended::Finite(_) => 0,
            Extended::PosInf => 1,
        }
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Rational> for Extended {
    fn from(r: Rational) -> Self {
        Extended::Finite(r)
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => write!(f, "-inf"),
            Extended::PosInf => write!(f, "+inf"),
            Extended::Finite(r) => write!(f, "{r}"),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "-inf" => Ok(Extended::NegInf),
            "+inf" | "inf" => Ok(Extended::PosInf),
            _ => s.parse().map(Extended::Finite).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub value: Extended,
    pub primal_witness: Option<RVector>,
    /// Infeasible: multipliers on the weak rows followed by the equality rows.
    /// Unbounded: a recession direction with negative objective slope.
    pub certificate: Option<RVector>,
}

// ---------------------------------------------------------------------------
// Core simplex over free variables: min c·z s.t. A z ≤ b

enum Core {
    Optimal(RVector),
    Infeasible,
    Unbounded { point: RVector, ray: RVector },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Free,
    Slack,
    Art,
}

struct Tableau {
    t: Vec<RVector>,
    rhs: RVector,
    basis: Vec<usize>,
    kind: Vec<Kind>,
    flip: Vec<bool>,
    d: RVector,
    z0: Rational,
}

impl Tableau {
    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.t[r][j].clone();
        if p != Rational::one() {
            let inv = p.recip();
            for x in self.t[r].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
            self.rhs[r] = &self.rhs[r] * &inv;
        }
        let prow = self.t[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.t.len() {
            if i == r || self.t[i][j].is_zero() {
                continue;
            }
            let f = self.t[i][j].clone();
            for (x, y) in self.t[i].iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
            self.rhs[i] -= &(&f * &prhs);
        }
        if !self.d[j].is_zero() {
            let f = self.d[j].clone();
            for (x, y) in self.d.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
            self.z0 += &(&f * &prhs);
        }
        self.basis[r] = j;
    }

    fn negate_column(&mut self, j: usize) {
        for row in self.t.iter_mut() {
            row[j] = -&row[j];
        }
        self.d[j] = -&self.d[j];
        self.flip[j] = !self.flip[j];
    }

    /// Runs Bland's rule until optimal; returns the unbounded entering column if any.
    fn run(&mut self, allow_art: bool) -> Option<usize> {
        let ncols = self.kind.len();
        loop {
            let mut entering = None;
            for j in 0..ncols {
                if self.basis.contains(&j) {
                    continue;
                }
                match self.kind[j] {
                    Kind::Art if !allow_art => continue,
                    Kind::Free => {
                        if self.d[j].is_positive() {
                            self.negate_column(j);
                        }
                        if self.d[j].is_negative() {
                            entering = Some(j);
                            break;
                        }
                    }
                    _ => {
                        if self.d[j].is_negative() {
                            entering = Some(j);
                            break;
                        }
                    }
                }
            }
            let j = entering?;
            let mut best: Option<(Rational, usize, usize)> = None;
            for r in 0..self.t.len() {
                if self.kind[self.basis[r]] == Kind::Free || !self.t[r][j].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / &self.t[r][j];
                let better = match &best {
                    None => true,
                    Some((br, bb, _)) => ratio < *br || (ratio == *br && self.basis[r] < *bb),
                };
                if better {
                    best = Some((ratio, self.basis[r], r));
                }
            }
            match best {
                None => return Some(j),
                Some((_, _, r)) => self.pivot(r, j),
            }
        }
    }

    fn values(&self) -> RVector {
        let mut v = vec![Rational::zero(); self.kind.len()];
        for (r, &b) in self.basis.iter().enumerate() {
            v[b] = self.rhs[r].clone();
        }
        v
    }

    fn free_part(&self, vals: &[Rational], k: usize) -> RVector {
        (0..k).map(|j| if self.flip[j] { -&vals[j] } else { vals[j].clone() }).collect()
    }
}

fn simplex(a: &[RVector], b: &[Rational], c: &[Rational]) -> Core {
    let k = c.len();
    let m = a.len();
    let n_art = b.iter().filter(|x| x.is_negative()).count();
    let ncols = k + m + n_art;
    let mut kind = vec![Kind::Free; k];
    kind.extend(std::iter::repeat_n(Kind::Slack, m));
    kind.extend(std::iter::repeat_n(Kind::Art, n_art));
    let mut t = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art = 0;
    for i in 0..m {
        let mut row = vec![Rational::zero(); ncols];
        if b[i].is_negative() {
            for j in 0..k {
                row[j] = -&a[i][j];
            }
            row[k + i] = -Rational::one();
            row[k + m + art] = Rational::one();
            basis.push(k + m + art);
            rhs.push(-&b[i]);
            art += 1;
        } else {
            row[..k].clone_from_slice(&a[i][..k]);
            row[k + i] = Rational::one();
            basis.push(k + i);
            rhs.push(b[i].clone());
        }
        t.push(row);
    }
    let mut tab = Tableau { t, rhs, basis, kind, flip: vec![false; ncols], d: vec![Rational::zero(); ncols], z0: Rational::zero() };

    if n_art > 0 {
        for j in k + m..ncols {
            tab.d[j] = Rational::one();
        }
        for r in 0..m {
            if tab.kind[tab.basis[r]] == Kind::Art {
                let row = tab.t[r].clone();
                for (x, y) in tab.d.iter_mut().zip(&row) {
                    if !y.is_zero() {
                        *x -= y;
                    }
                }
                tab.z0 += &tab.rhs[r];
            }
        }
        tab.run(true);
        if tab.z0.is_positive() {
            return Core::Infeasible;
        }
        // drive out artificials at level zero
        let mut r = 0;
        while r < tab.t.len() {
            if tab.kind[tab.basis[r]] == Kind::Art {
                let col = (0..k + m).find(|&j| !tab.t[r][j].is_zero());
                match col {
                    Some(j) => {
                        tab.pivot(r, j);
                        r += 1;
                    }
                    None => {
                        tab.t.remove(r);
                        tab.rhs.remove(r);
                        tab.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
        for row in tab.t.iter_mut() {
            row.truncate(k + m);
        }
        tab.kind.truncate(k + m);
        tab.flip.truncate(k + m);
    }

    // phase 2 objective in terms of nonbasic columns
    let ncols = k + m;
    let mut d = vec![Rational::zero(); ncols];
    for j in 0..k {
        d[j] = if tab.flip[j] { -&c[j] } else { c[j].clone() };
    }
    let mut z0 = Rational::zero();
    for r in 0..tab.t.len() {
        let bcol = tab.basis[r];
        let cb = d[bcol].clone();
        if cb.is_zero() {
            continue;
        }
        let row = tab.t[r].clone();
        for (x, y) in d.iter_mut().zip(&row) {
            if !y.is_zero() {
                *x -= &(&cb * y);
            }
        }
        z0 += &(&cb * &tab.rhs[r]);
    }
    tab.d = d;
    tab.z0 = z0;

    match tab.run(false) {
        None => {
            let vals = tab.values();
            Core::Optimal(tab.free_part(&vals, k))
        }
        Some(j) => {
            let vals = tab.values();
            let point = tab.free_part(&vals, k);
            let mut dir = vec![Rational::zero(); ncols];
            dir[j] = Rational::one();
            for (r, &bcol) in tab.basis.iter().enumerate() {
                dir[bcol] = -&tab.t[r][j];
            }
            let ray = tab.free_part(&dir, k);
            Core::Unbounded { point, ray }
        }
    }
}

// ---------------------------------------------------------------------------

/// Affine parametrization x = x0 + N z of an equality system.
struct EqParam {
    x0: RVector,
    basis: Vec<RVector>,
}

fn param_eq(dim: usize, eq: &[Constraint]) -> Result<EqParam, RVector> {
    if eq.is_empty() {
        return Ok(EqParam { x0: vec![Rational::zero(); dim], basis: (0..dim).map(|i| crate::linalg::unit(dim, i)).collect() });
    }
    let e = RMatrix::from_rows(eq.iter().map(|c| c.row.clone()).collect(), dim);
    let d: RVector = eq.iter().map(|c| c.rhs.clone()).collect();
    match solve_linear(&e, &d) {
        LinearSolution::Solution { particular, nullspace } => Ok(EqParam { x0: particular, basis: nullspace }),
        LinearSolution::NoSolution => {
            // y with yᵀE = 0 and yᵀd = −1
            let mut rows: Vec<RVector> = (0..dim).map(|j| eq.iter().map(|c| c.row[j].clone()).collect()).collect();
            rows.push(d.clone());
            let m = RMatrix::from_rows(rows, eq.len());
            let mut rhs = vec![Rational::zero(); dim];
            rhs.push(-Rational::one());
            match solve_linear(&m, &rhs) {
                LinearSolution::Solution { particular, .. } => Err(particular),
                LinearSolution::NoSolution => unreachable!("Fredholm alternative"),
            }
        }
    }
}

fn solve_closed(c: &[Rational], dim: usize, weak: &[Constraint], eq: &[Constraint], want_cert: bool) -> LpOutcome {
    let param = match param_eq(dim, eq) {
        Ok(p) => p,
        Err(y) => {
            let mut cert = vec![Rational::zero(); weak.len()];
            cert.extend(y);
            return LpOutcome { status: LpStatus::Infeasible, value: Extended::PosInf, primal_witness: None, certificate: Some(cert) };
        }
    };
    let k = param.basis.len();
    // reduced rows A N and b − A x0
    let a_red: Vec<RVector> = weak.iter().map(|cst| param.basis.iter().map(|nv| dot(&cst.row, nv)).collect()).collect();
    let b_red: RVector = weak.iter().map(|cst| cst.slack(&param.x0)).collect();
    let c_red: RVector = param.basis.iter().map(|nv| dot(c, nv)).collect();
    let lift = |z: &[Rational]| -> RVector {
        let mut x = param.x0.clone();
        for (zi, nv) in z.iter().zip(&param.basis) {
            if !zi.is_zero() {
                x = crate::linalg::axpy(&x, zi, nv);
            }
        }
        x
    };
    let lift_dir = |z: &[Rational]| -> RVector {
        let mut x = vec![Rational::zero(); dim];
        for (zi, nv) in z.iter().zip(&param.basis) {
            if !zi.is_zero() {
                x = crate::linalg::axpy(&x, zi, nv);
            }
        }
        x
    };
    match simplex(&a_red, &b_red, &c_red) {
        Core::Optimal(z) => {
            let x = lift(&z);
            let v = dot(c, &x);
            LpOutcome { status: LpStatus::Optimal, value: Extended::Finite(v), primal_witness: Some(x), certificate: None }
        }
        Core::Unbounded { point, ray } => {
            LpOutcome { status: LpStatus::Unbounded, value: Extended::NegInf, primal_witness: Some(lift(&point)), certificate: Some(lift_dir(&ray)) }
        }
        Core::Infeasible => {
            let certificate = if want_cert { Some(farkas(dim, weak, eq, &a_red, &b_red, k)) } else { None };
            LpOutcome { status: LpStatus::Infeasible, value: Extended::PosInf, primal_witness: None, certificate }
        }
    }
}

/// Multipliers (y ≥ 0 on weak rows, z on equalities) with yᵀA + zᵀE = 0 and yᵀb + zᵀd = −1.
fn farkas(dim: usize, weak: &[Constraint], eq: &[Constraint], a_red: &[RVector], b_red: &[Rational], k: usize) -> RVector {
    let m = weak.len();
    let mut aux_weak = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![Rational::zero(); m];
        row[i] = -Rational::one();
        aux_weak.push(Constraint::new(row, Rational::zero()));
    }
    let mut aux_eq = Vec::with_capacity(k + 1);
    for j in 0..k {
        aux_eq.push(Constraint::new(a_red.iter().map(|r| r[j].clone()).collect(), Rational::zero()));
    }
    aux_eq.push(Constraint::new(b_red.to_vec(), -Rational::one()));
    let zero = vec![Rational::zero(); m];
    let out = solve_closed(&zero, m, &aux_weak, &aux_eq, false);
    let y = out.primal_witness.expect("Farkas system must be feasible");
    let mut cert = y.clone();
    if !eq.is_empty() {
        // Eᵀ z = −Aᵀ y
        let rows: Vec<RVector> = (0..dim).map(|j| eq.iter().map(|c| c.row[j].clone()).collect()).collect();
        let et = RMatrix::from_rows(rows, eq.len());
        let rhs: RVector = (0..dim).map(|j| -weak.iter().zip(&y).map(|(c, yi)| &c.row[j] * yi).sum::<Rational>()).collect();
        match solve_linear(&et, &rhs) {
            LinearSolution::Solution { particular, .. } => cert.extend(particular),
            LinearSolution::NoSolution => unreachable!("yᵀA lies in the row space of E"),
        }
    }
    cert
}

/// Minimize ⟨objective, x⟩ over a closed system.
pub fn solve_lp(objective: &[Rational], system: &MixedSystem) -> Result<LpOutcome, LpError> {
    system.check_dims()?;
    if objective.len() != system.dim {
        return Err(LpError::DimensionMismatch);
    }
    if !system.strict.is_empty() {
        return Err(LpError::StrictRowsPresent);
    }
    Ok(solve_closed(objective, system.dim, &system.weak, &system.eq, true))
}

/// Maximize; the returned value is the maximum (or +∞ when unbounded).
pub fn maximize(objective: &[Rational], system: &MixedSystem) -> Result<LpOutcome, LpError> {
    let neg: RVector = objective.iter().map(|x| -x).collect();
    let mut out = solve_lp(&neg, system)?;
    out.value = match out.status {
        LpStatus::Optimal => out.value.neg(),
        LpStatus::Unbounded => Extended::PosInf,
        LpStatus::Infeasible => Extended::NegInf,
    };
    Ok(out)
}

/// Minimum of a linear function, without a Farkas certificate on infeasibility.
pub fn minimize_quick(objective: &[Rational], system: &MixedSystem) -> LpOutcome {
    debug_assert!(system.strict.is_empty());
    solve_closed(objective, system.dim, &system.weak, &system.eq, false)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictOutcome {
    pub feasible: bool,
    pub witness: Option<RVector>,
    /// Farkas multipliers when even the closed relaxation is empty.
    pub certificate: Option<RVector>,
}

fn strict_impl(system: &MixedSystem, want_cert: bool) -> StrictOutcome {
    let n = system.dim;
    if system.strict.is_empty() {
        let zero = vec![Rational::zero(); n];
        let out = solve_closed(&zero, n, &system.weak, &system.eq, want_cert);
        return match out.status {
            LpStatus::Infeasible => StrictOutcome { feasible: false, witness: None, certificate: out.certificate },
            _ => StrictOutcome { feasible: true, witness: out.primal_witness, certificate: None },
        };
    }
    let ext = |c: &Constraint, t: Rational| {
        let mut row = c.row.clone();
        row.push(t);
        Constraint::new(row, c.rhs.clone())
    };
    let mut weak: Vec<Constraint> = system.weak.iter().map(|c| ext(c, Rational::zero())).collect();
    weak.extend(system.strict.iter().map(|c| ext(c, Rational::one())));
    let mut cap = vec![Rational::zero(); n + 1];
    cap[n] = Rational::one();
    weak.push(Constraint::new(cap, Rational::one()));
    let eq: Vec<Constraint> = system.eq.iter().map(|c| ext(c, Rational::zero())).collect();
    let mut obj = vec![Rational::zero(); n + 1];
    obj[n] = -Rational::one();
    let out = solve_closed(&obj, n + 1, &weak, &eq, false);
    let closure_cert = || {
        if want_cert {
            solve_closed(&vec![Rational::zero(); n], n, &system.closed().weak, &system.eq, true).certificate
        } else {
            None
        }
    };
    match out.status {
        LpStatus::Optimal => {
            let x = out.primal_witness.unwrap();
            if x[n].is_positive() {
                StrictOutcome { feasible: true, witness: Some(x[..n].to_vec()), certificate: None }
            } else {
                StrictOutcome { feasible: false, witness: None, certificate: closure_cert() }
            }
        }
        LpStatus::Infeasible => StrictOutcome { feasible: false, witness: None, certificate: closure_cert() },
        LpStatus::Unbounded => unreachable!("slack is capped"),
    }
}

/// Decide whether the mixed system has a solution.
pub fn strict_feasible(system: &MixedSystem) -> Result<(bool, Option<RVector>), LpError> {
    system.check_dims()?;
    let out = strict_impl(system, false);
    Ok((out.feasible, out.witness))
}

/// Like [`strict_feasible`], also returning a Farkas certificate when the closure is empty.
pub fn strict_feasible_certified(system: &MixedSystem) -> Result<StrictOutcome, LpError> {
    system.check_dims()?;
    Ok(strict_impl(system, true))
}

/// Infallible variant for internal callers whose dimensions are known to agree.
pub fn feasible(system: &MixedSystem) -> Option<RVector> {
    debug_assert!(system.check_dims().is_ok());
    let out = strict_impl(system, false);
    out.witness
}

/// Checks an outcome against its own claims; used by tests and oracles.
pub fn verify_outcome(objective: &[Rational], system: &MixedSystem, out: &LpOutcome) -> bool {
    match out.status {
        LpStatus::Optimal => {
            let Some(x) = &out.primal_witness else { return false };
            system.satisfied_by(x) && out.value == Extended::Finite(dot(objective, x))
        }
        LpStatus::Unbounded => {
            let (Some(x), Some(r)) = (&out.primal_witness, &out.certificate) else { return false };
            system.satisfied_by(x)
                && dot(objective, r).is_negative()
                && system.weak.iter().all(|c| !dot(&c.row, r).is_positive())
                && system.eq.iter().all(|c| dot(&c.row, r).is_zero())
        }
        LpStatus::Infeasible => {
            let Some(y) = &out.certificate else { return false };
            let m = system.weak.len();
            if y.len() != m + system.eq.len() || y[..m].iter().any(|v| v.is_negative()) {
                return false;
            }
            let rows = system.weak.iter().chain(&system.eq);
            let mut comb = vec![Rational::zero(); system.dim];
            let mut rhs = Rational::zero();
            for (c, yi) in rows.zip(y) {
                comb = crate::linalg::axpy(&comb, yi, &c.row);
                rhs += &(yi * &c.rhs);
            }
            comb.iter().all(|v| v.is_zero()) && rhs.is_negative()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    fn c(row: &[i64], rhs: i64) -> Constraint {
        Constraint::new(row.iter().map(|&x| int(x)).collect(), int(rhs))
    }

    #[test]
    fn single_binding_constraint() {
        let mut s = MixedSystem::new(1);
        s.weak.push(c(&[-1], -1));
        let out = solve_lp(&[int(1)], &s).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.value, Extended::Finite(int(1)));
        assert_eq!(out.primal_witness, Some(vec![int(1)]));
    }

    #[test]
    fn box_lp() {
        let mut s = MixedSystem::new(2);
        s.weak = vec![c(&[1, 0], 1), c(&[-1, 0], 0), c(&[0, 1], 1), c(&[0, -1], 0)];
        let obj = [int(-1), int(-1)];
        let out = solve_lp(&obj, &s).unwrap();
        assert_eq!(out.value, Extended::Finite(int(-2)));
        assert_eq!(out.primal_witness, Some(vec![int(1), int(1)]));
        assert!(verify_outcome(&obj, &s, &out));
    }

    #[test]
    fn contradictory_bounds() {
        let mut s = MixedSystem::new(1);
        s.weak = vec![c(&[1], -1), c(&[-1], 0)];
        let out = solve_lp(&[int(1)], &s).unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
        assert_eq!(out.certificate, Some(vec![int(1), int(1)]));
        assert!(verify_outcome(&[int(1)], &s, &out));
    }

    #[test]
    fn unbounded_ray() {
        let mut s = MixedSystem::new(2);
        s.weak = vec![c(&[-1, 0], 0), c(&[1, -1], 3)];
        let obj = [int(-1), int(0)];
        let out = solve_lp(&obj, &s).unwrap();
        assert_eq!(out.status, LpStatus::Unbounded);
        assert_eq!(out.value, Extended::NegInf);
        assert!(verify_outcome(&obj, &s, &out));
    }

    #[test]
    fn equalities_and_inconsistent_equalities() {
        let mut s = MixedSystem::new(2);
        s.eq = vec![c(&[1, 1], 2)];
        s.weak = vec![c(&[-1, 0], 0), c(&[0, -1], 0)];
        let obj = [int(1), int(3)];
        let out = solve_lp(&obj, &s).unwrap();
        assert_eq!(out.value, Extended::Finite(int(2)));
        assert!(verify_outcome(&obj, &s, &out));

        s.eq.push(c(&[2, 2], 5));
        let out = solve_lp(&obj, &s).unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
        assert!(verify_outcome(&obj, &s, &out));

        // feasible equalities, infeasible inequalities: certificate mixes both blocks
        let mut s = MixedSystem::new(2);
        s.eq = vec![c(&[1, -1], 0)];
        s.weak = vec![c(&[1, 0], -1), c(&[0, -1], 0)];
        let out = solve_lp(&obj, &s).unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
        assert!(verify_outcome(&obj, &s, &out));
    }

    #[test]
    fn strict_examples() {
        let mut s = MixedSystem::new(1);
        s.strict = vec![c(&[-1], 0), c(&[1], 1)];
        let (ok, w) = strict_feasible(&s).unwrap();
        assert!(ok);
        assert_eq!(w, Some(vec![q(1, 2)]));

        let mut s = MixedSystem::new(1);
        s.weak = vec![c(&[1], 0)];
        s.strict = vec![c(&[-1], 0)];
        assert!(!strict_feasible(&s).unwrap().0);

        // ri of the square meets ri of its bottom edge? no
        let mut s = MixedSystem::new(2);
        s.strict = vec![c(&[1, 0], 1), c(&[-1, 0], 0), c(&[0, 1], 1), c(&[0, -1], 0)];
        s.strict.extend([c(&[1, 0], 1), c(&[-1, 0], 0)]);
        s.eq = vec![c(&[0, 1], 0)];
        assert!(!strict_feasible(&s).unwrap().0);
    }

    #[test]
    fn strict_with_empty_closure_has_certificate() {
        let mut s = MixedSystem::new(1);
        s.weak = vec![c(&[1], -1)];
        s.strict = vec![c(&[-1], 0)];
        let out = strict_feasible_certified(&s).unwrap();
        assert!(!out.feasible);
        let y = out.certificate.unwrap();
        assert!(verify_outcome(
            &[int(0)],
            &s.closed(),
            &LpOutcome { status: LpStatus::Infeasible, value: Extended::PosInf, primal_witness: None, certificate: Some(y) }
        ));
    }

    #[test]
    fn dimension_mismatch_is_usage_error() {
        let mut s = MixedSystem::new(2);
        s.weak.push(c(&[1], 0));
        assert_eq!(solve_lp(&[int(0), int(0)], &s), Err(LpError::DimensionMismatch));
    }
}
