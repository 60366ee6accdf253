//! Small exact integer and rational linear algebra: Smith normal form,
//! lattice membership and rational coweight vectors.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

pub type IntMatrix = Vec<Vec<i64>>;

/// `u * a * v == diag(d)` with `u`, `v` unimodular.
#[derive(Debug, Clone)]
pub struct Smith {
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Diagonal entries, `min(rows, cols)` of them; nonzero ones come first
    /// and each divides the next.
    pub diagonal: Vec<i64>,
    pub rank: usize,
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn swap_rows(m: &mut IntMatrix, i: usize, j: usize) {
    m.swap(i, j);
}

fn swap_cols(m: &mut IntMatrix, i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

/// row_i += k * row_j
fn add_row(m: &mut IntMatrix, i: usize, j: usize, k: i64) {
    if k == 0 {
        return;
    }
    let src = m[j].clone();
    for (a, b) in m[i].iter_mut().zip(src) {
        *a += k * b;
    }
}

/// col_i += k * col_j
fn add_col(m: &mut IntMatrix, i: usize, j: usize, k: i64) {
    if k == 0 {
        return;
    }
    for row in m.iter_mut() {
        row[i] += k * row[j];
    }
}

pub fn smith_normal_form(a: &IntMatrix, cols: usize) -> Smith {
    let rows = a.len();
    let mut m = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let steps = rows.min(cols);
    let mut rank = 0;

    for t in 0..steps {
        // Pick the smallest nonzero entry of the trailing block as pivot.
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i][j] != 0)
            .min_by_key(|&(i, j)| m[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut m, t, pi);
        swap_rows(&mut u, t, pi);
        swap_cols(&mut m, t, pj);
        swap_cols(&mut v, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if m[i][t] != 0 {
                    let q = Integer::div_floor(&m[i][t], &m[t][t]);
                    add_row(&mut m, i, t, -q);
                    add_row(&mut u, i, t, -q);
                    if m[i][t] != 0 {
                        swap_rows(&mut m, t, i);
                        swap_rows(&mut u, t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if m[t][j] != 0 {
                    let q = Integer::div_floor(&m[t][j], &m[t][t]);
                    add_col(&mut m, j, t, -q);
                    add_col(&mut v, j, t, -q);
                    if m[t][j] != 0 {
                        swap_cols(&mut m, t, j);
                        swap_cols(&mut v, t, j);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // Divisibility: fold any offending row into the pivot row.
            let offending = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| m[i][j] % m[t][t] != 0);
            match offending {
                Some((i, _)) => {
                    add_row(&mut m, t, i, 1);
                    add_row(&mut u, t, i, 1);
                }
                None => break,
            }
        }
        if m[t][t] < 0 {
            for x in m[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
        rank += 1;
    }

    let diagonal = (0..steps).map(|i| m[i][i]).collect();
    Smith {
        u,
        v,
        diagonal,
        rank,
    }
}

/// Whether the column vector `b` lies in the column span (over Z) of `a`.
pub fn in_column_lattice(a: &IntMatrix, cols: usize, b: &[i64]) -> bool {
    let snf = smith_normal_form(a, cols);
    let ub: Vec<i64> = snf
        .u
        .iter()
        .map(|row| row.iter().zip(b).map(|(x, y)| x * y).sum())
        .collect();
    ub.iter().enumerate().all(|(i, &x)| {
        if i < snf.rank {
            x % snf.diagonal[i] == 0
        } else {
            x == 0
        }
    })
}

pub fn transpose(a: &IntMatrix, cols: usize) -> IntMatrix {
    (0..cols).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

/// Quotient `Z^n / L` for a full-rank row lattice `L`, with a coordinate map
/// sending a vector to its residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteQuotient {
    /// Invariant factors strictly greater than one.
    pub orders: Vec<i64>,
    positions: Vec<usize>,
    v: IntMatrix,
}

impl FiniteQuotient {
    /// `generators` are row vectors of length `n` spanning a full-rank sublattice.
    pub fn new(generators: &IntMatrix, n: usize) -> Option<Self> {
        let snf = smith_normal_form(generators, n);
        if snf.rank < n {
            return None;
        }
        let positions: Vec<usize> = (0..n).filter(|&i| snf.diagonal[i] > 1).collect();
        Some(Self {
            orders: positions.iter().map(|&i| snf.diagonal[i]).collect(),
            positions,
            v: snf.v,
        })
    }

    pub fn order(&self) -> i64 {
        self.orders.iter().product()
    }

    pub fn residues(&self, x: &[i64]) -> Vec<i64> {
        // For row lattices: u * G * v = D, so x lies in rowspan(G) iff x*v in rowspan(D).
        self.positions
            .iter()
            .zip(&self.orders)
            .map(|(&p, &d)| {
                let c: i64 = x.iter().zip(&self.v).map(|(xi, row)| xi * row[p]).sum();
                c.rem_euclid(d)
            })
            .collect()
    }
}

/// Solves the square system `a x = b` over Q; `None` if `a` is singular.
pub fn solve_rational(a: &IntMatrix, b: &[Rational64]) -> Option<Vec<Rational64>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r: Vec<Rational64> = row.iter().map(|&x| Rational64::from_integer(x)).collect();
            r.push(bi);
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| m[r][col] != Rational64::from_integer(0))?;
        m.swap(col, pivot);
        let p = m[col][col];
        for x in m[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && m[r][col] != Rational64::from_integer(0) {
                let f = m[r][col];
                let src = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(src) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n]).collect())
}

/// A vector with rational entries kept as integer numerators over one
/// positive common denominator in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QVec {
    num: Vec<i64>,
    den: i64,
}

impl QVec {
    pub fn new(num: Vec<i64>, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let sign = den.signum();
        let mut num: Vec<i64> = num.into_iter().map(|x| x * sign).collect();
        let mut den = den.abs();
        let g = num.iter().fold(den, |g, &x| g.gcd(&x));
        if g > 1 {
            num.iter_mut().for_each(|x| *x /= g);
            den /= g;
        }
        Self { num, den }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Self::new(v.to_vec(), 1)
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![0; n], 1)
    }

    pub fn numerators(&self) -> &[i64] {
        &self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn len(&self) -> usize {
        self.num.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|&x| x == 0)
    }

    pub fn coord(&self, i: usize) -> Rational64 {
        Rational64::new(self.num[i], self.den)
    }

    /// Pairing with a functional given by integer coefficients on the coordinates.
    pub fn pair(&self, functional: &[i64]) -> Rational64 {
        let s: i64 = self.num.iter().zip(functional).map(|(a, b)| a * b).sum();
        Rational64::new(s, self.den)
    }

    pub fn as_integral(&self) -> Option<&[i64]> {
        (self.den == 1).then_some(&self.num[..])
    }
}

impl PartialOrd for QVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QVec {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.num.len().min(other.num.len());
        for i in 0..n {
            let o = self.coord(i).cmp(&other.coord(i));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.num.len().cmp(&other.num.len())
    }
}

impl fmt::Display for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, _) in self.num.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", format_rational(self.coord(i)))?;
        }
        write!(f, "]")
    }
}

pub fn format_rational(r: Rational64) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
