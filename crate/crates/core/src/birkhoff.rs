//! Splitting type of the restriction to the exceptional divisor and its
//! Birkhoff factorization.
//!
//! A matrix `M` of Laurent polynomials in `z` with constant determinant is
//! read as the transition matrix `s_V = M·s_U` of a rank-2 bundle on `P^1`,
//! with `s_U` polynomial in `z` and `s_V` polynomial in `z^-1`. In this
//! convention the scalar transition `z^k` is `O(-k)`, so twisting by
//! `O(-k)` multiplies `M` by `z^k`.
//!
//! Global sections of a twist are computed as the kernel of a finite exact
//! linear system. From `s_U = M^-1·s_V` every section has `z`-degree at most
//! `hi(M) - k`, where `hi(M)` is the largest `z`-exponent in `M` (the
//! adjugate has the same exponents as `M`).

use num_traits::{One, Zero};

use crate::algebra::{ExactScalar, LaurentMatrix2, LaurentPoly, LinearSystem, SparseRow};
use crate::error::{Error, Result};

/// `M = a·diag(z^j, z^-j)·b`, with `a` polynomial in `z^-1` and `b`
/// polynomial in `z`, both with nonzero constant determinant.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitFactorization {
    pub j: u32,
    pub a: LaurentMatrix2,
    pub b: LaurentMatrix2,
}

impl SplitFactorization {
    pub fn middle(&self) -> LaurentMatrix2 {
        LaurentMatrix2::split_diagonal(self.j)
    }

    pub fn recompose(&self) -> LaurentMatrix2 {
        &(&self.a * &self.middle()) * &self.b
    }
}

/// Bounds on the factor degrees of [`grothendieck_split`]:
/// `deg_z(b) <= hi(M) + j` and `deg_{z^-1}(a) <= j - lo(M)`, where
/// `[lo, hi]` is the `z`-exponent span of `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorDegreeBound {
    pub z_side: i64,
    pub z_inv_side: i64,
}

pub fn factor_degree_bound(m: &LaurentMatrix2, j: u32) -> FactorDegreeBound {
    let (lo, hi) = m.z_span().unwrap_or((0, 0));
    FactorDegreeBound {
        z_side: hi + i64::from(j),
        z_inv_side: i64::from(j) - lo,
    }
}

fn check_det(m: &LaurentMatrix2) -> Result<ExactScalar> {
    m.det()
        .as_nonzero_constant()
        .cloned()
        .ok_or(Error::NonConstantDeterminant)
}

fn var_f(k: i64) -> usize {
    2 * k as usize
}

fn var_g(k: i64) -> usize {
    2 * k as usize + 1
}

/// Add, for each row of `n`, the equations "coefficient of `z^e` in
/// `(n·s)_row` is zero for every `e > max_exp`", where `s = (f, g)` has
/// components of degree at most `deg`.
fn add_degree_constraints(sys: &mut LinearSystem, n: &LaurentMatrix2, deg: i64, max_exp: i64) {
    for r in 0..2 {
        let mut eqs: std::collections::BTreeMap<i64, SparseRow> = Default::default();
        for (col, var) in [(0, var_f as fn(i64) -> usize), (1, var_g)] {
            for (l, c) in n.get(r, col).terms() {
                for k in 0..=deg {
                    if l + k > max_exp {
                        let row = eqs.entry(l + k).or_default();
                        let e = row.entry(var(k)).or_insert_with(ExactScalar::zero);
                        *e += c;
                    }
                }
            }
        }
        for (_, row) in eqs {
            sys.add_homogeneous(row);
        }
    }
}

fn unpack(x: &[ExactScalar], deg: i64) -> [LaurentPoly; 2] {
    let f = LaurentPoly::from_terms((0..=deg).map(|k| (k, x[var_f(k)].clone())));
    let g = LaurentPoly::from_terms((0..=deg).map(|k| (k, x[var_g(k)].clone())));
    [f, g]
}

/// Basis of the global sections of the bundle with transition `n`, as pairs
/// `(f, g)` of polynomials in `z` of degree at most `deg`.
fn sections_bounded(n: &LaurentMatrix2, deg: i64) -> Vec<[LaurentPoly; 2]> {
    if deg < 0 {
        return Vec::new();
    }
    let mut sys = LinearSystem::new(2 * (deg as usize + 1));
    add_degree_constraints(&mut sys, n, deg, 0);
    sys.kernel().iter().map(|v| unpack(v, deg)).collect()
}

fn hi_exp(m: &LaurentMatrix2) -> i64 {
    m.z_span().map_or(0, |(_, hi)| hi)
}

/// Basis of `H^0(E ⊗ O(-k))` for the bundle `E` on `P^1` with transition `m`.
pub fn twisted_sections(m: &LaurentMatrix2, k: i64) -> Result<Vec<[LaurentPoly; 2]>> {
    check_det(m)?;
    Ok(sections_bounded(&m.shift(k), hi_exp(m) - k))
}

/// `h^0(E ⊗ O(-k))`.
pub fn section_dimension(m: &LaurentMatrix2, k: i64) -> Result<usize> {
    twisted_sections(m, k).map(|s| s.len())
}

/// The `j >= 0` with `E ≅ O(j) + O(-j)`, from section counts alone: the
/// largest `k >= 1` with `h^0(E ⊗ O(-k)) > 0`, or `0` if there is none.
pub fn splitting_type(m: &LaurentMatrix2) -> Result<u32> {
    check_det(m)?;
    let hi = hi_exp(m);
    let mut j = 0;
    for k in 1..=hi {
        if sections_bounded(&m.shift(k), hi - k).is_empty() {
            break;
        }
        j = k as u32;
    }
    Ok(j)
}

fn columns(c1: [LaurentPoly; 2], c2: [LaurentPoly; 2]) -> LaurentMatrix2 {
    let [f1, g1] = c1;
    let [f2, g2] = c2;
    LaurentMatrix2::new([[f1, f2], [g1, g2]])
}

/// Explicit `M = a·diag(z^j, z^-j)·b`.
///
/// The columns of `b^-1` form a frame of `E` over the `z` chart adapted to
/// the splitting: the second column spans `H^0(E ⊗ O(-j))` and the first is
/// found by one linear solve that also fixes `det(b^-1) = 1`.
pub fn grothendieck_split(m: &LaurentMatrix2) -> Result<SplitFactorization> {
    let j = splitting_type(m)?;
    let hi = hi_exp(m);
    let frame = if j == 0 {
        let secs = sections_bounded(m, hi);
        let [s1, s2]: [[LaurentPoly; 2]; 2] = secs
            .try_into()
            .map_err(|s: Vec<_>| Error::Internal(format!("trivial bundle with h0 = {}", s.len())))?;
        columns(s1, s2)
    } else {
        let jj = i64::from(j);
        let mut secs = sections_bounded(&m.shift(jj), hi - jj);
        if secs.len() != 1 {
            return Err(Error::Internal(format!("h0(E(-j)) = {} for j = {j}", secs.len())));
        }
        let second = secs.pop().unwrap();
        let deg = hi + jj;
        let mut sys = LinearSystem::new(2 * (deg as usize + 1));
        add_degree_constraints(&mut sys, m, deg, jj);
        // det[first | second] = f·second_g - g·second_f = 1
        let mut det_rows: std::collections::BTreeMap<i64, SparseRow> = Default::default();
        for k in 0..=deg {
            for (l, c) in second[1].terms() {
                *det_rows.entry(l + k).or_default().entry(var_f(k)).or_insert_with(ExactScalar::zero) += c;
            }
            for (l, c) in second[0].terms() {
                *det_rows.entry(l + k).or_default().entry(var_g(k)).or_insert_with(ExactScalar::zero) -= c;
            }
        }
        det_rows.entry(0).or_default();
        for (e, row) in det_rows {
            let rhs = if e == 0 { ExactScalar::one() } else { ExactScalar::zero() };
            sys.add_equation(row, rhs);
        }
        let sol = sys
            .solve()
            .ok_or_else(|| Error::Internal("no unimodular completion of the O(j) frame".into()))?;
        columns(unpack(&sol.particular, deg), second)
    };

    if frame.det().as_nonzero_constant().is_none() {
        return Err(Error::Internal("section frame is degenerate".into()));
    }
    let a = &(m * &frame) * &LaurentMatrix2::split_diagonal(j).inverse()?;
    let b = frame.inverse()?;
    let split = SplitFactorization { j, a, b };
    if !split.a.is_polynomial_in_z_inv() || !split.b.is_polynomial_in_z() || split.recompose() != *m {
        return Err(Error::Internal("Birkhoff factorization failed to verify".into()));
    }
    Ok(split)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(l: i64) -> LaurentPoly {
        LaurentPoly::z_pow(l)
    }

    fn c(v: i64) -> LaurentPoly {
        LaurentPoly::constant(v.into())
    }

    fn upper(j: i64) -> LaurentMatrix2 {
        LaurentMatrix2::new([[zp(j), c(1)], [LaurentPoly::zero(), zp(-j)]])
    }

    #[test]
    fn splitting_type_examples() {
        assert_eq!(splitting_type(&LaurentMatrix2::identity()).unwrap(), 0);
        assert_eq!(splitting_type(&LaurentMatrix2::split_diagonal(3)).unwrap(), 3);
        assert_eq!(splitting_type(&upper(1)).unwrap(), 0);
    }

    #[test]
    fn section_counts_of_split_bundles() {
        // E = O(j) + O(-j): h0(E(-k)) = max(0, j-k+1) + max(0, -j-k+1)
        for j in 0..5u32 {
            let m = LaurentMatrix2::split_diagonal(j);
            for k in -2..6i64 {
                let jj = i64::from(j);
                let expected = (jj - k + 1).max(0) + (-jj - k + 1).max(0);
                assert_eq!(section_dimension(&m, k).unwrap() as i64, expected, "j={j} k={k}");
            }
        }
    }

    #[test]
    fn upper_triangular_extension_oracle() {
        // [[z, 1], [0, z^-1]]: h0(E(-1)) = 0 so the bundle is trivial
        let m = upper(1);
        assert_eq!(section_dimension(&m, 1).unwrap(), 0);
        assert_eq!(section_dimension(&m, 0).unwrap(), 2);
        let split = grothendieck_split(&m).unwrap();
        assert_eq!(split.j, 0);
        assert_eq!(&split.a * &split.b, m);

        // [[z^2, z], [0, z^-2]] is O(1) + O(-1): the z-term lowers the type by one
        let m = LaurentMatrix2::new([[zp(2), zp(1)], [LaurentPoly::zero(), zp(-2)]]);
        assert_eq!(splitting_type(&m).unwrap(), 1);
        assert_eq!(grothendieck_split(&m).unwrap().recompose(), m);
    }

    #[test]
    fn split_of_diagonal_is_identity_factors() {
        let split = grothendieck_split(&LaurentMatrix2::split_diagonal(2)).unwrap();
        assert_eq!(split.j, 2);
        assert_eq!(split.a, LaurentMatrix2::identity());
        assert_eq!(split.b, LaurentMatrix2::identity());
    }

    #[test]
    fn rejects_non_constant_determinant() {
        let m = LaurentMatrix2::diag(zp(1), c(1));
        assert_eq!(splitting_type(&m), Err(Error::NonConstantDeterminant));
        assert_eq!(grothendieck_split(&m), Err(Error::NonConstantDeterminant));
    }

    #[test]
    fn permuted_diagonal() {
        // antidiagonal [[0, z^-2], [-z^2, 0]] is still O(2) + O(-2)
        let m = LaurentMatrix2::new([[LaurentPoly::zero(), zp(-2)], [-&zp(2), LaurentPoly::zero()]]);
        let split = grothendieck_split(&m).unwrap();
        assert_eq!(split.j, 2);
        assert_eq!(split.recompose(), m);
    }
}
