//! Dense exact linear algebra.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::Rational;

pub type RVector = Vec<Rational>;

/// Row-major dense matrix with fixed shape.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Panics if rows have different lengths.
    pub fn from_rows(rows: Vec<RVector>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        RMatrix { rows: r, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> Vec<RVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[Rational]) -> RVector {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    pub fn mul(&self, other: &RMatrix) -> RMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + &(a * other.get(k, j));
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

/// JSON form: array of rows.
impl Serialize for RMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<RVector>::deserialize(d)?;
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(serde::de::Error::custom("ragged matrix"));
        }
        Ok(RMatrix::from_rows(rows, cols))
    }
}

/// Horizontal block `[A B]`.
pub fn hcat(a: &RMatrix, b: &RMatrix) -> RMatrix {
    assert_eq!(a.nrows(), b.nrows());
    let rows = (0..a.nrows())
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.extend(b.row(i).iter().cloned());
            r
        })
        .collect();
    RMatrix::from_rows(rows, a.ncols() + b.ncols())
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut s = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

pub fn zeros(n: usize) -> RVector {
    vec![Rational::zero(); n]
}

pub fn unit(n: usize, i: usize) -> RVector {
    let mut v = zeros(n);
    v[i] = Rational::one();
    v
}

pub fn add(a: &[Rational], b: &[Rational]) -> RVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> RVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Rational], s: &Rational) -> RVector {
    a.iter().map(|x| x * s).collect()
}

pub fn neg(a: &[Rational]) -> RVector {
    a.iter().map(|x| -x).collect()
}

/// a + s*b
pub fn axpy(a: &[Rational], s: &Rational, b: &[Rational]) -> RVector {
    a.iter().zip(b).map(|(x, y)| x + &(s * y)).collect()
}

pub fn is_zero_vec(a: &[Rational]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Reduced row echelon form of an augmented system, in place.
/// Returns pivot columns (among the first `ncols` columns).
pub fn rref(rows: &mut Vec<RVector>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        if inv != Rational::one() {
            rows[r] = scale(&rows[r], &inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = -&rows[i][c];
                rows[i] = axpy(&rows[i], &f, &rows[r]);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Solution { particular: RVector, nullspace: Vec<RVector> },
    NoSolution,
}

/// All solutions of `A x = b`.
pub fn solve_linear(a: &RMatrix, b: &[Rational]) -> LinearSolution {
    assert_eq!(a.nrows(), b.len(), "dimension mismatch");
    let n = a.ncols();
    let mut rows: Vec<RVector> = (0..a.nrows())
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows, n);
    if rows[pivots.len()..].iter().any(|r| !r[n].is_zero()) {
        return LinearSolution::NoSolution;
    }
    let mut particular = zeros(n);
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = rows[i][n].clone();
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let nullspace = free
        .iter()
        .map(|&f| {
            let mut v = zeros(n);
            v[f] = Rational::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -&rows[i][f];
            }
            v
        })
        .collect();
    LinearSolution::Solution { particular, nullspace }
}

pub fn rank(rows: &[RVector], ncols: usize) -> usize {
    let mut r = rows.to_vec();
    rref(&mut r, ncols).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn identity_system() {
        let a = RMatrix::identity(2);
        let sol = solve_linear(&a, &[int(3), int(-1)]);
        assert_eq!(sol, LinearSolution::Solution { particular: vec![int(3), int(-1)], nullspace: vec![] });
    }

    #[test]
    fn underdetermined() {
        let a = RMatrix::from_rows(vec![vec![int(1), int(1)]], 2);
        match solve_linear(&a, &[int(2)]) {
            LinearSolution::Solution { particular, nullspace } => {
                assert_eq!(particular, vec![int(2), int(0)]);
                assert_eq!(nullspace, vec![vec![int(-1), int(1)]]);
            }
            LinearSolution::NoSolution => panic!(),
        }
    }

    #[test]
    fn inconsistent() {
        let a = RMatrix::from_rows(vec![vec![int(0)]], 1);
        assert_eq!(solve_linear(&a, &[int(1)]), LinearSolution::NoSolution);
    }
}
