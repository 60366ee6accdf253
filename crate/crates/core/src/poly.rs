//! Integer polynomials in `ξ = v - v⁻¹`, Laurent polynomials in `v`, and
//! ordinary polynomials in `q`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

fn trim(c: &mut Vec<i64>) {
    while c.last() == Some(&0) {
        c.pop();
    }
}

fn add_dense(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, &x) in b.iter().enumerate() {
        out[i] += x;
    }
    trim(&mut out);
    out
}

fn mul_dense(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Writes `Σ c_k X^k` from the highest power down, e.g. `3ξ^2 - ξ + 1`.
fn write_terms(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (i64, i64)>,
    var: &str,
) -> fmt::Result {
    let mut first = true;
    for (k, c) in terms {
        if c == 0 {
            continue;
        }
        let sign = if c < 0 { "-" } else { "+" };
        if first {
            if c < 0 {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        first = false;
        let a = c.abs();
        match k {
            0 => write!(f, "{a}")?,
            _ => {
                if a != 1 {
                    write!(f, "{a}")?;
                }
                write!(f, "{var}")?;
                if k != 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// An element of `Z[ξ]`; `coeffs[k]` is the coefficient of `ξ^k`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "XiRepr", into = "XiRepr")]
pub struct XiPoly {
    coeffs: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct XiRepr {
    xi_coeffs: Vec<i64>,
}

impl TryFrom<XiRepr> for XiPoly {
    type Error = String;
    fn try_from(r: XiRepr) -> Result<Self, String> {
        Ok(XiPoly::new(r.xi_coeffs))
    }
}

impl From<XiPoly> for XiRepr {
    fn from(p: XiPoly) -> Self {
        XiRepr { xi_coeffs: p.coeffs }
    }
}

impl XiPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        trim(&mut coeffs);
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `c ξ^k`.
    pub fn monomial(k: usize, c: i64) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial (degree `-∞`).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Value at `v = 1`, i.e. the constant term.
    pub fn at_v_one(&self) -> i64 {
        self.coeff(0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    /// Whether every nonzero monomial has degree of the given parity.
    pub fn has_parity(&self, parity: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(k, &c)| c == 0 || k % 2 == parity % 2)
    }

    /// Multiplies by `ξ^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    pub fn to_laurent(&self) -> LaurentPoly {
        let xi = LaurentPoly::new(-1, vec![-1, 0, 1]);
        let mut acc = LaurentPoly::zero();
        let mut power = LaurentPoly::one();
        for &c in &self.coeffs {
            acc = &acc + &power.scale(c);
            power = &power * &xi;
        }
        acc
    }

    /// `q^{half_shift/2} · p(√q - 1/√q)` as a polynomial in `q`, when the
    /// result is integral. Each `ξ^k` contributes `q^{(half_shift - k)/2} (q-1)^k`.
    pub fn to_q_poly(&self, half_shift: usize) -> Option<QPoly> {
        let mut acc = QPoly::zero();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if k > half_shift || !(half_shift - k).is_multiple_of(2) {
                return None;
            }
            let mut term = QPoly::monomial((half_shift - k) / 2, c);
            for _ in 0..k {
                term = &term * &QPoly::new(vec![-1, 1]);
            }
            acc = &acc + &term;
        }
        Some(acc)
    }
}

impl fmt::Display for XiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.coeffs.len() as i64;
        write_terms(f, (0..n).rev().map(|k| (k, self.coeffs[k as usize])), "ξ")
    }
}

impl Add for &XiPoly {
    type Output = XiPoly;
    fn add(self, o: &XiPoly) -> XiPoly {
        XiPoly {
            coeffs: add_dense(&self.coeffs, &o.coeffs),
        }
    }
}

impl AddAssign<&XiPoly> for XiPoly {
    fn add_assign(&mut self, o: &XiPoly) {
        self.coeffs = add_dense(&self.coeffs, &o.coeffs);
    }
}

impl Sub for &XiPoly {
    type Output = XiPoly;
    fn sub(self, o: &XiPoly) -> XiPoly {
        self + &(-o)
    }
}

impl Neg for &XiPoly {
    type Output = XiPoly;
    fn neg(self) -> XiPoly {
        XiPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &XiPoly {
    type Output = XiPoly;
    fn mul(self, o: &XiPoly) -> XiPoly {
        XiPoly {
            coeffs: mul_dense(&self.coeffs, &o.coeffs),
        }
    }
}

/// An element of `Z[v, v⁻¹]`: `Σ coeffs[i] v^{low + i}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<i64>,
}

impl LaurentPoly {
    pub fn new(low: i64, coeffs: Vec<i64>) -> Self {
        let mut p = Self { low, coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        trim(&mut self.coeffs);
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        self.coeffs.drain(..lead);
        self.low = if self.coeffs.is_empty() { 0 } else { self.low + lead as i64 };
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(0, vec![1])
    }

    pub fn monomial(k: i64, c: i64) -> Self {
        Self::new(k, vec![c])
    }

    /// `v - v⁻¹`.
    pub fn xi() -> Self {
        Self::new(-1, vec![-1, 0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: i64) -> i64 {
        usize::try_from(k - self.low)
            .ok()
            .and_then(|i| self.coeffs.get(i).copied())
            .unwrap_or(0)
    }

    /// Lowest and highest exponents, `None` for zero.
    pub fn span(&self) -> Option<(i64, i64)> {
        (!self.is_zero()).then(|| (self.low, self.low + self.coeffs.len() as i64 - 1))
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::new(self.low, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval_at_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// Rewrites the polynomial in powers of `ξ`, if it lies in `Z[ξ]`.
    pub fn to_xi(&self) -> Option<XiPoly> {
        let mut rest = self.clone();
        let mut out: Vec<i64> = Vec::new();
        while let Some((lo, hi)) = rest.span() {
            if hi < 0 || lo != -hi {
                return None;
            }
            let d = hi as usize;
            let c = rest.coeff(hi);
            if out.len() <= d {
                out.resize(d + 1, 0);
            }
            out[d] += c;
            rest = &rest - &XiPoly::monomial(d, c).to_laurent();
        }
        Some(XiPoly::new(out))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .map(|(i, &c)| (self.low + i as i64, c));
        let mut first = true;
        for (k, c) in terms {
            if c == 0 {
                continue;
            }
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { "-" } else { "+" })?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                1 if a == 1 => write!(f, "v")?,
                1 => write!(f, "{a}v")?,
                _ if a == 1 => write!(f, "v^{k}")?,
                _ => write!(f, "{a}v^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let low = self.low.min(o.low);
        let a: Vec<i64> = std::iter::repeat_n(0, (self.low - low) as usize)
            .chain(self.coeffs.iter().copied())
            .collect();
        let b: Vec<i64> = std::iter::repeat_n(0, (o.low - low) as usize)
            .chain(o.coeffs.iter().copied())
            .collect();
        LaurentPoly::new(low, add_dense(&a, &b))
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self + &o.scale(-1)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::new(self.low + o.low, mul_dense(&self.coeffs, &o.coeffs))
    }
}

/// A polynomial in `q`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QPoly {
    coeffs: Vec<i64>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        trim(&mut coeffs);
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(k: usize, c: i64) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, q: i64) -> i64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * q + c)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.coeffs.len() as i64;
        write_terms(f, (0..n).rev().map(|k| (k, self.coeffs[k as usize])), "q")
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, o: &QPoly) -> QPoly {
        QPoly {
            coeffs: add_dense(&self.coeffs, &o.coeffs),
        }
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, o: &QPoly) -> QPoly {
        QPoly {
            coeffs: mul_dense(&self.coeffs, &o.coeffs),
        }
    }
}
