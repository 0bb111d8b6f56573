//! Canonical transition matrices `[[z^j, p], [0, z^-j]]`.
//!
//! Two transition matrices describe the same bundle when `T·A = C·T'` for
//! `A` holomorphic on `U` and `C` holomorphic on `V`, both invertible. With
//! `T` upper triangular and diagonal `(z^j, z^-j)`, unipotent gauges shift
//! `p` by `z^j·α - z^-j·β`, where `α` has monomials `z^l u^i` with `l >= 0`
//! and `β` has `l <= i`. What survives is the window
//!
//! ```text
//! W(j) = { (i, l) : 1 <= i <= 2j-2,  i-j+1 <= l <= j-1 }
//! ```
//!
//! The reduction runs in two phases: a Birkhoff factorization of the
//! `u = 0` slice brings the diagonal to `(z^j, z^-j)`, then each `u`-order
//! `k = 1..N` is cleared by a gauge step `(I + a_k, I + c_k)` solved
//! monomial by monomial.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{BiLaurentPoly, ExactScalar, Matrix2, TransitionMatrix2};
use crate::birkhoff::{grothendieck_split, splitting_type};
use crate::error::{Error, Result};

/// `true` iff `(i, l)` lies in `W(j)`.
pub fn in_window(j: u32, i: u32, l: i64) -> bool {
    let (j, i) = (i64::from(j), i64::from(i));
    i >= 1 && i <= 2 * j - 2 && l > i - j && l < j
}

/// Range of `l` in the level-`i` row of `W(j)`; empty outside `1..=2j-2`.
pub fn window_level(j: u32, i: u32) -> std::ops::RangeInclusive<i64> {
    let (jj, ii) = (i64::from(j), i64::from(i));
    if i == 0 || ii > 2 * jj - 2 {
        #[allow(clippy::reversed_empty_ranges)]
        return 1..=0;
    }
    (ii - jj + 1)..=(jj - 1)
}

/// `W(j)` as `(i, l)` pairs in ascending `(i, l)` order.
pub fn canonical_window(j: u32) -> Vec<(u32, i64)> {
    (1..=(2 * j).saturating_sub(2))
        .flat_map(|i| window_level(j, i).map(move |l| (i, l)))
        .collect()
}

/// `|W(j)| = (2j-2)(2j-1)/2` for `j >= 1`, zero otherwise.
pub fn window_size(j: u32) -> usize {
    if j <= 1 {
        0
    } else {
        let j = j as usize;
        (2 * j - 2) * (2 * j - 1) / 2
    }
}

/// `j` together with the coefficients `p_{il}`, `(i, l) ∈ W(j)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CanonicalForm {
    j: u32,
    coeffs: BTreeMap<(u32, i64), ExactScalar>,
    trunc: u32,
}

impl CanonicalForm {
    /// Checks window membership and `trunc >= 2j - 2`; zero coefficients
    /// are dropped.
    pub fn new<I>(j: u32, coeffs: I, trunc: u32) -> Result<Self>
    where
        I: IntoIterator<Item = ((u32, i64), ExactScalar)>,
    {
        let required = (2 * j).saturating_sub(2);
        if trunc < required {
            return Err(Error::TruncationTooLow { trunc, required });
        }
        Self::new_unchecked_trunc(j, coeffs, trunc)
    }

    /// Like [`CanonicalForm::new`] without the `trunc >= 2j - 2` check.
    pub(crate) fn new_unchecked_trunc<I>(j: u32, coeffs: I, trunc: u32) -> Result<Self>
    where
        I: IntoIterator<Item = ((u32, i64), ExactScalar)>,
    {
        let mut map = BTreeMap::new();
        for ((i, l), c) in coeffs {
            if !in_window(j, i, l) {
                return Err(Error::OutsideWindow { j, i, l });
            }
            if i > trunc {
                continue;
            }
            let entry: &mut ExactScalar = map.entry((i, l)).or_default();
            *entry += &c;
            if entry.is_zero() {
                map.remove(&(i, l));
            }
        }
        Ok(Self { j, coeffs: map, trunc })
    }

    /// `diag(z^j, z^-j)` at the default truncation `2j - 2`.
    pub fn split(j: u32) -> Self {
        Self {
            j,
            coeffs: BTreeMap::new(),
            trunc: default_trunc(j),
        }
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn coeffs(&self) -> &BTreeMap<(u32, i64), ExactScalar> {
        &self.coeffs
    }

    pub fn coeff(&self, i: u32, l: i64) -> ExactScalar {
        self.coeffs.get(&(i, l)).cloned().unwrap_or_default()
    }

    pub fn is_split(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficients of the level-`i` window row, ascending in `l`.
    pub fn level(&self, i: u32) -> Vec<ExactScalar> {
        window_level(self.j, i).map(|l| self.coeff(i, l)).collect()
    }

    /// The same form with a different truncation; coefficients above the
    /// new order are dropped.
    pub fn with_trunc(&self, trunc: u32) -> Self {
        Self {
            j: self.j,
            coeffs: self
                .coeffs
                .iter()
                .filter(|((i, _), _)| *i <= trunc)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
            trunc,
        }
    }

    /// `p = sum p_{il} z^l u^i`.
    pub fn p(&self) -> BiLaurentPoly {
        BiLaurentPoly::from_terms(self.coeffs.iter().map(|((i, l), c)| (*l, *i, c.clone())), self.trunc)
    }

    pub fn to_matrix(&self) -> Matrix2 {
        let j = i64::from(self.j);
        Matrix2::new([
            [BiLaurentPoly::z_pow(j, self.trunc), self.p()],
            [BiLaurentPoly::zero(self.trunc), BiLaurentPoly::z_pow(-j, self.trunc)],
        ])
    }

    pub fn to_transition(&self) -> TransitionMatrix2 {
        TransitionMatrix2::new(self.to_matrix()).expect("canonical matrices have determinant 1")
    }
}

/// Default truncation `2j - 2`, the top `u`-degree of the window.
pub fn default_trunc(j: u32) -> u32 {
    (2 * j).saturating_sub(2)
}

/// Gauge matrices `A` (on `U`) and `C` (on `V`) with `T·A = C·K`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaugePair {
    pub a: Matrix2,
    pub c: Matrix2,
}

impl GaugePair {
    pub fn identity(trunc: u32) -> Self {
        Self {
            a: Matrix2::identity(trunc),
            c: Matrix2::identity(trunc),
        }
    }

    /// `A` is `U`-holomorphic and `C` is `V`-holomorphic, each with a
    /// nonzero constant determinant on the exceptional divisor.
    pub fn is_valid(&self) -> bool {
        self.a.is_u_holomorphic()
            && self.c.is_v_holomorphic()
            && self.a.has_unit_constant_det()
            && self.c.has_unit_constant_det()
    }

    /// `from·A = C·to` exactly at the smaller truncation.
    pub fn intertwines(&self, from: &Matrix2, to: &Matrix2) -> bool {
        (&(from * &self.a) - &(&self.c * to)).is_zero()
    }

    /// Compose `self` (from `T` to `K`) with `next` (from `K` to `K'`).
    pub fn then(&self, next: &GaugePair) -> GaugePair {
        GaugePair {
            a: &self.a * &next.a,
            c: &self.c * &next.c,
        }
    }

    /// The gauge from `K` back to `T`.
    pub fn inverse(&self) -> Result<GaugePair> {
        Ok(GaugePair {
            a: self.a.inverse()?,
            c: self.c.inverse()?,
        })
    }
}

/// `q = z^j·alpha + z^-j·beta + residual`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonomialSplit {
    /// `U`-holomorphic
    pub alpha: BiLaurentPoly,
    /// `V`-holomorphic
    pub beta: BiLaurentPoly,
    /// supported in `W(j)`
    pub residual: BiLaurentPoly,
}

/// Split each monomial `z^l u^i` of `q`: into `alpha` if `l >= j`, else
/// into `beta` if `l <= i - j`, else into the residual.
pub fn monomial_reduce(q: &BiLaurentPoly, j: u32) -> Result<MonomialSplit> {
    let jj = i64::from(j);
    let n = q.trunc();
    let mut out = MonomialSplit {
        alpha: BiLaurentPoly::zero(n),
        beta: BiLaurentPoly::zero(n),
        residual: BiLaurentPoly::zero(n),
    };
    for (l, i, c) in q.terms() {
        if i == 0 {
            return Err(Error::HasDivisorLevelTerms);
        }
        if l >= jj {
            out.alpha.add_term(l - jj, i, c);
        } else if l <= i64::from(i) - jj {
            out.beta.add_term(l + jj, i, c);
        } else {
            out.residual.add_term(l, i, c);
        }
    }
    Ok(out)
}

/// Output of the order-by-order reduction at an arbitrary truncation.
#[derive(Clone, Debug)]
pub(crate) struct Reduction {
    pub j: u32,
    pub coeffs: BTreeMap<(u32, i64), ExactScalar>,
    pub gauge: GaugePair,
}

/// Gauge step `(I + a_k, I + c_k)` clearing the `u^k` part of a matrix
/// congruent to `diag(z^j, z^-j)` modulo `u`.
fn order_step(e: &Matrix2, j: u32, k: u32) -> Result<(Matrix2, Matrix2)> {
    let jj = i64::from(j);
    let n = e.trunc();
    let zero = || BiLaurentPoly::zero(n);
    let mut a = [[zero(), zero()], [zero(), zero()]];
    let mut c = [[zero(), zero()], [zero(), zero()]];

    for (l, i, v) in e.get(0, 0).terms() {
        if l >= jj {
            a[0][0].add_term(l - jj, i, &-v);
        } else {
            c[0][0].add_term(l - jj, i, v);
        }
    }
    for (l, i, v) in e.get(1, 1).terms() {
        if l >= -jj {
            a[1][1].add_term(l + jj, i, &-v);
        } else {
            c[1][1].add_term(l + jj, i, v);
        }
    }
    for (l, i, v) in e.get(1, 0).terms() {
        if l >= -jj {
            a[1][0].add_term(l + jj, i, &-v);
        } else {
            c[1][0].add_term(l - jj, i, v);
        }
    }
    let upper = monomial_reduce(e.get(0, 1), j)?;
    debug_assert!(upper.residual.terms().all(|(l, i, _)| i == k && in_window(j, i, l)));
    a[0][1] = -&upper.alpha;
    c[0][1] = upper.beta;

    Ok((Matrix2::new(a), Matrix2::new(c)))
}

/// Reduce `t` to `[[z^j, p], [0, z^-j]]` with `p` window-supported, at the
/// truncation of `t` (no lower bound on it).
pub(crate) fn reduce(t: &TransitionMatrix2) -> Result<Reduction> {
    let n = t.trunc();
    let split = grothendieck_split(&t.restrict_to_exceptional())?;
    let j = split.j;

    let mut a_acc = Matrix2::from_laurent(&split.b.inverse()?, n);
    let mut c_acc = Matrix2::from_laurent(&split.a, n);
    let mut cur = &(&c_acc.inverse()? * t.matrix()) * &a_acc;

    let id = Matrix2::identity(n);
    for k in 1..=n {
        let (ak, ck) = order_step(&cur.order_part(k), j, k)?;
        if ak.is_zero() && ck.is_zero() {
            continue;
        }
        let step_a = &id + &ak;
        let step_c = &id + &ck;
        cur = &(&step_c.inverse()? * &cur) * &step_a;
        a_acc = &a_acc * &step_a;
        c_acc = &c_acc * &step_c;
    }

    let jj = i64::from(j);
    let diag_ok = *cur.get(0, 0) == BiLaurentPoly::z_pow(jj, n)
        && *cur.get(1, 1) == BiLaurentPoly::z_pow(-jj, n)
        && cur.get(1, 0).is_zero();
    if !diag_ok || cur.get(0, 1).terms().any(|(l, i, _)| !in_window(j, i, l)) {
        return Err(Error::Internal(format!("reduction did not reach canonical shape: {cur}")));
    }
    let coeffs = cur.get(0, 1).terms().map(|(l, i, c)| ((i, l), c.clone())).collect();
    Ok(Reduction {
        j,
        coeffs,
        gauge: GaugePair { a: a_acc, c: c_acc },
    })
}

/// Canonical form `K` of `t` with gauges `(A, C)` such that `t·A = C·K`
/// modulo `u^(N+1)`, `N = t.trunc()`.
pub fn canonicalize(t: &TransitionMatrix2) -> Result<(CanonicalForm, GaugePair)> {
    let j = splitting_type(&t.restrict_to_exceptional())?;
    let required = default_trunc(j);
    if t.trunc() < required {
        return Err(Error::TruncationTooLow {
            trunc: t.trunc(),
            required,
        });
    }
    let red = reduce(t)?;
    let form = CanonicalForm::new_unchecked_trunc(red.j, red.coeffs, t.trunc())?;
    Ok((form, red.gauge))
}
