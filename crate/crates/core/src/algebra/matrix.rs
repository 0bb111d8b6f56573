//! 2×2 matrices over the Laurent rings, and transition matrices.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::One;

use super::poly::{BiLaurentPoly, LaurentPoly};
use super::scalar::ExactScalar;
use crate::error::{Error, Result};

/// 2×2 matrix of Laurent polynomials in `z` (data on the exceptional divisor).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentMatrix2 {
    pub entries: [[LaurentPoly; 2]; 2],
}

impl LaurentMatrix2 {
    pub fn new(entries: [[LaurentPoly; 2]; 2]) -> Self {
        Self { entries }
    }

    pub fn identity() -> Self {
        Self::diag(LaurentPoly::one(), LaurentPoly::one())
    }

    pub fn diag(a: LaurentPoly, d: LaurentPoly) -> Self {
        Self::new([[a, LaurentPoly::zero()], [LaurentPoly::zero(), d]])
    }

    /// `diag(z^j, z^-j)`.
    pub fn split_diagonal(j: u32) -> Self {
        let j = i64::from(j);
        Self::diag(LaurentPoly::z_pow(j), LaurentPoly::z_pow(-j))
    }

    pub fn get(&self, r: usize, c: usize) -> &LaurentPoly {
        &self.entries[r][c]
    }

    pub fn det(&self) -> LaurentPoly {
        let [[a, b], [c, d]] = &self.entries;
        &(a * d) - &(b * c)
    }

    pub fn adjugate(&self) -> Self {
        let [[a, b], [c, d]] = &self.entries;
        Self::new([[d.clone(), -b], [-c, a.clone()]])
    }

    /// Inverse, defined when the determinant is a monomial `c·z^k`.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        let (c, k) = det.as_monomial().ok_or(Error::NonUnitDeterminant)?;
        let inv = LaurentPoly::monomial(c.inv().ok_or(Error::NonUnitDeterminant)?, -k);
        Ok(self.adjugate().map(|e| e * &inv))
    }

    pub fn map(&self, mut f: impl FnMut(&LaurentPoly) -> LaurentPoly) -> Self {
        let e = &self.entries;
        Self::new([[f(&e[0][0]), f(&e[0][1])], [f(&e[1][0]), f(&e[1][1])]])
    }

    pub fn shift(&self, k: i64) -> Self {
        self.map(|e| e.shift(k))
    }

    /// Smallest and largest `z`-exponent over all entries.
    pub fn z_span(&self) -> Option<(i64, i64)> {
        let lo = self.entries.iter().flatten().filter_map(|e| e.min_exp()).min()?;
        let hi = self.entries.iter().flatten().filter_map(|e| e.max_exp()).max()?;
        Some((lo, hi))
    }

    pub fn is_polynomial_in_z(&self) -> bool {
        self.entries.iter().flatten().all(LaurentPoly::is_polynomial_in_z)
    }

    pub fn is_polynomial_in_z_inv(&self) -> bool {
        self.entries.iter().flatten().all(LaurentPoly::is_polynomial_in_z_inv)
    }
}

impl<'a> Mul<&'a LaurentMatrix2> for &'a LaurentMatrix2 {
    type Output = LaurentMatrix2;
    fn mul(self, rhs: &LaurentMatrix2) -> LaurentMatrix2 {
        let a = &self.entries;
        let b = &rhs.entries;
        let cell = |r: usize, c: usize| &(&a[r][0] * &b[0][c]) + &(&a[r][1] * &b[1][c]);
        LaurentMatrix2::new([[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]])
    }
}

impl fmt::Display for LaurentMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.entries;
        write!(f, "[[{}, {}], [{}, {}]]", e[0][0], e[0][1], e[1][0], e[1][1])
    }
}

/// 2×2 matrix over the truncated ring; all entries share one truncation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix2 {
    entries: [[BiLaurentPoly; 2]; 2],
}

impl Matrix2 {
    /// Entries are re-truncated to the smallest truncation among them.
    pub fn new(entries: [[BiLaurentPoly; 2]; 2]) -> Self {
        let trunc = entries.iter().flatten().map(BiLaurentPoly::trunc).min().unwrap_or(0);
        let [[a, b], [c, d]] = entries;
        Self {
            entries: [
                [a.truncated(trunc), b.truncated(trunc)],
                [c.truncated(trunc), d.truncated(trunc)],
            ],
        }
    }

    pub fn identity(trunc: u32) -> Self {
        Self::diag(BiLaurentPoly::one(trunc), BiLaurentPoly::one(trunc))
    }

    pub fn zero(trunc: u32) -> Self {
        let z = BiLaurentPoly::zero(trunc);
        Self::new([[z.clone(), z.clone()], [z.clone(), z]])
    }

    pub fn diag(a: BiLaurentPoly, d: BiLaurentPoly) -> Self {
        let trunc = a.trunc().min(d.trunc());
        Self::new([[a, BiLaurentPoly::zero(trunc)], [BiLaurentPoly::zero(trunc), d]])
    }

    /// `diag(z^j, z^-j)`.
    pub fn split_diagonal(j: u32, trunc: u32) -> Self {
        let j = i64::from(j);
        Self::diag(BiLaurentPoly::z_pow(j, trunc), BiLaurentPoly::z_pow(-j, trunc))
    }

    pub fn from_laurent(m: &LaurentMatrix2, trunc: u32) -> Self {
        let e = &m.entries;
        let f = |p: &LaurentPoly| BiLaurentPoly::from_laurent(p, trunc);
        Self::new([[f(&e[0][0]), f(&e[0][1])], [f(&e[1][0]), f(&e[1][1])]])
    }

    pub fn trunc(&self) -> u32 {
        self.entries[0][0].trunc()
    }

    pub fn get(&self, r: usize, c: usize) -> &BiLaurentPoly {
        &self.entries[r][c]
    }

    pub fn entries(&self) -> &[[BiLaurentPoly; 2]; 2] {
        &self.entries
    }

    pub fn into_entries(self) -> [[BiLaurentPoly; 2]; 2] {
        self.entries
    }

    pub fn map(&self, mut f: impl FnMut(&BiLaurentPoly) -> BiLaurentPoly) -> Self {
        let e = &self.entries;
        Self::new([[f(&e[0][0]), f(&e[0][1])], [f(&e[1][0]), f(&e[1][1])]])
    }

    pub fn truncated(&self, trunc: u32) -> Self {
        self.map(|e| e.truncated(trunc))
    }

    pub fn with_trunc_raised(&self, trunc: u32) -> Self {
        self.map(|e| e.with_trunc_raised(trunc))
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        self.map(|e| e.scale(s))
    }

    pub fn order_part(&self, k: u32) -> Self {
        self.map(|e| e.order_part(k))
    }

    pub fn restrict_to_exceptional(&self) -> LaurentMatrix2 {
        let e = &self.entries;
        let f = BiLaurentPoly::restrict_to_exceptional;
        LaurentMatrix2::new([[f(&e[0][0]), f(&e[0][1])], [f(&e[1][0]), f(&e[1][1])]])
    }

    pub fn det(&self) -> BiLaurentPoly {
        let [[a, b], [c, d]] = &self.entries;
        &(a * d) - &(b * c)
    }

    pub fn adjugate(&self) -> Self {
        let [[a, b], [c, d]] = &self.entries;
        Self::new([[d.clone(), -b], [-c, a.clone()]])
    }

    /// Exact inverse in the truncated ring: adjugate times the series
    /// inverse of the determinant.
    pub fn inverse(&self) -> Result<Self> {
        let det_inv = self.det().inverse()?;
        Ok(self.adjugate().map(|e| e * &det_inv))
    }

    pub fn is_u_holomorphic(&self) -> bool {
        self.entries.iter().flatten().all(BiLaurentPoly::is_u_holomorphic)
    }

    pub fn is_v_holomorphic(&self) -> bool {
        self.entries.iter().flatten().all(BiLaurentPoly::is_v_holomorphic)
    }

    /// Determinant restricted to `u = 0` is a nonzero constant.
    pub fn has_unit_constant_det(&self) -> bool {
        self.det().restrict_to_exceptional().as_nonzero_constant().is_some()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(BiLaurentPoly::is_zero)
    }

    pub fn z_span(&self) -> Option<(i64, i64)> {
        let spans: Vec<_> = self.entries.iter().flatten().filter_map(BiLaurentPoly::z_span).collect();
        let lo = spans.iter().map(|s| s.0).min()?;
        let hi = spans.iter().map(|s| s.1).max()?;
        Some((lo, hi))
    }
}

impl<'a> Mul<&'a Matrix2> for &'a Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: &Matrix2) -> Matrix2 {
        let a = &self.entries;
        let b = &rhs.entries;
        let cell = |r: usize, c: usize| &(&a[r][0] * &b[0][c]) + &(&a[r][1] * &b[1][c]);
        Matrix2::new([[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]])
    }
}

impl<'a> Add<&'a Matrix2> for &'a Matrix2 {
    type Output = Matrix2;
    fn add(self, rhs: &Matrix2) -> Matrix2 {
        let a = &self.entries;
        let b = &rhs.entries;
        let cell = |r: usize, c: usize| &a[r][c] + &b[r][c];
        Matrix2::new([[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]])
    }
}

impl<'a> Sub<&'a Matrix2> for &'a Matrix2 {
    type Output = Matrix2;
    fn sub(self, rhs: &Matrix2) -> Matrix2 {
        let a = &self.entries;
        let b = &rhs.entries;
        let cell = |r: usize, c: usize| &a[r][c] - &b[r][c];
        Matrix2::new([[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]])
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.entries;
        write!(f, "[[{}, {}], [{}, {}]]", e[0][0], e[0][1], e[1][0], e[1][1])
    }
}

impl fmt::Debug for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [u^{}]", self.trunc())
    }
}

/// Transition matrix of a rank-2 bundle from the chart `U(z, u)` to the
/// chart `V(xi, v)`.
///
/// Holds only matrices whose determinant at `u = 0` is a nonzero constant,
/// which is the zero first Chern class condition.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TransitionMatrix2 {
    matrix: Matrix2,
}

impl TransitionMatrix2 {
    pub fn new(matrix: Matrix2) -> Result<Self> {
        if !matrix.has_unit_constant_det() {
            return Err(Error::NonConstantDeterminant);
        }
        Ok(Self { matrix })
    }

    /// `diag(z^j, z^-j)`, the split bundle `O(j) + O(-j)`.
    pub fn split(j: u32, trunc: u32) -> Self {
        Self {
            matrix: Matrix2::split_diagonal(j, trunc),
        }
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix2 {
        self.matrix
    }

    pub fn trunc(&self) -> u32 {
        self.matrix.trunc()
    }

    pub fn truncated(&self, trunc: u32) -> Self {
        Self {
            matrix: self.matrix.truncated(trunc),
        }
    }

    pub fn restrict_to_exceptional(&self) -> LaurentMatrix2 {
        self.matrix.restrict_to_exceptional()
    }

    /// Transition matrix of the same bundle in new frames: `C^-1·T·A`.
    pub fn gauge(&self, a: &Matrix2, c: &Matrix2) -> Result<Self> {
        let c_inv = c.inverse()?;
        Self::new(&(&c_inv * &self.matrix) * a)
    }
}

/// Exactly the identity matrix, at any truncation.
pub fn is_identity(m: &Matrix2) -> bool {
    let one = ExactScalar::one();
    let e = m.entries();
    e[0][1].is_zero()
        && e[1][0].is_zero()
        && e[0][0].len() == 1
        && e[1][1].len() == 1
        && e[0][0].coeff(0, 0) == one
        && e[1][1].coeff(0, 0) == one
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: u32 = 3;

    fn m(c: i64, l: i64, i: u32) -> BiLaurentPoly {
        BiLaurentPoly::monomial(c.into(), l, i, N)
    }

    fn zero() -> BiLaurentPoly {
        BiLaurentPoly::zero(N)
    }

    #[test]
    fn inverse_examples() {
        let id = Matrix2::identity(N);
        assert_eq!(id.inverse().unwrap(), id);

        let d = Matrix2::diag(m(1, 1, 0), m(1, -1, 0));
        assert_eq!(d.inverse().unwrap(), Matrix2::diag(m(1, -1, 0), m(1, 1, 0)));

        let unip = Matrix2::new([[m(1, 0, 0), m(1, 0, 1)], [zero(), m(1, 0, 0)]]);
        let expected = Matrix2::new([[m(1, 0, 0), m(-1, 0, 1)], [zero(), m(1, 0, 0)]]);
        assert_eq!(unip.inverse().unwrap(), expected);
    }

    #[test]
    fn inverse_with_nilpotent_determinant_part() {
        let a = Matrix2::new([
            [&m(2, 1, 0) + &m(1, 3, 1), m(1, -2, 2)],
            [m(5, 0, 1), &m(1, -1, 0) + &m(-1, 0, 3)],
        ]);
        let inv = a.inverse().unwrap();
        assert!(is_identity(&(&a * &inv)));
        assert!(is_identity(&(&inv * &a)));
    }

    #[test]
    fn non_unit_determinant_rejected() {
        let a = Matrix2::diag(&m(1, 0, 0) + &m(1, 1, 0), m(1, 0, 0));
        assert!(matches!(a.inverse(), Err(Error::NonUnitDeterminant)));
    }

    #[test]
    fn transition_requires_constant_det() {
        let bad = Matrix2::diag(m(1, 1, 0), m(1, 0, 0));
        assert!(matches!(TransitionMatrix2::new(bad), Err(Error::NonConstantDeterminant)));
        let ok = Matrix2::new([[m(1, 2, 0), m(1, 1, 1)], [zero(), m(1, -2, 0)]]);
        assert!(TransitionMatrix2::new(ok).is_ok());
    }

    #[test]
    fn mixed_truncations_are_lowered() {
        let a = BiLaurentPoly::monomial(1.into(), 0, 3, 3);
        let b = BiLaurentPoly::one(1);
        let mat = Matrix2::new([[a, b.clone()], [b.clone(), b]]);
        assert_eq!(mat.trunc(), 1);
        assert!(mat.get(0, 0).is_zero());
    }
}
