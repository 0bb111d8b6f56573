//! Sparse Laurent polynomials.
//!
//! [`LaurentPoly`] is a Laurent polynomial in the fibre coordinate `z` of the
//! exceptional divisor. [`BiLaurentPoly`] is an element of the formal
//! neighbourhood ring `Q(i)[z, z^-1][u] / (u^(N+1))` on the chart overlap,
//! where `N` is the truncation order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::scalar::ExactScalar;
use crate::error::{Error, Result};

fn fmt_monomial(f: &mut fmt::Formatter<'_>, c: &ExactScalar, vars: &[(&str, i64)]) -> fmt::Result {
    let vars: Vec<_> = vars.iter().filter(|(_, e)| *e != 0).collect();
    if vars.is_empty() {
        return write!(f, "{c}");
    }
    if c == &-ExactScalar::one() {
        write!(f, "-")?;
    } else if !c.is_one() {
        write!(f, "{c}*")?;
    }
    for (k, (name, e)) in vars.iter().enumerate() {
        if k > 0 {
            write!(f, "*")?;
        }
        if *e == 1 {
            write!(f, "{name}")?;
        } else {
            write!(f, "{name}^{e}")?;
        }
    }
    Ok(())
}

/// Laurent polynomial in `z`, sparse, zero coefficients never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, ExactScalar>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(ExactScalar::one())
    }

    pub fn constant(c: ExactScalar) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: ExactScalar, l: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(l, &c);
        p
    }

    /// `z^l`.
    pub fn z_pow(l: i64) -> Self {
        Self::monomial(ExactScalar::one(), l)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, ExactScalar)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (l, c) in terms {
            p.add_term(l, &c);
        }
        p
    }

    pub fn add_term(&mut self, l: i64, c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(l).or_insert_with(ExactScalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&l);
        }
    }

    pub fn coeff(&self, l: i64) -> ExactScalar {
        self.terms.get(&l).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &ExactScalar)> + '_ {
        self.terms.iter().map(|(l, c)| (*l, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// The nonzero constant `c` if this polynomial is exactly `c`.
    pub fn as_nonzero_constant(&self) -> Option<&ExactScalar> {
        match self.terms.len() {
            1 => self.terms.get(&0),
            _ => None,
        }
    }

    /// `(c, k)` if this polynomial is the single monomial `c·z^k`.
    pub fn as_monomial(&self) -> Option<(&ExactScalar, i64)> {
        match self.terms.len() {
            1 => self.terms.iter().next().map(|(l, c)| (c, *l)),
            _ => None,
        }
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(l, c)| (l + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(l, c)| (*l, c * s)).collect(),
        }
    }

    /// Holomorphic on the `z` chart of `P^1`.
    pub fn is_polynomial_in_z(&self) -> bool {
        self.min_exp().is_none_or(|l| l >= 0)
    }

    /// Holomorphic on the `z^-1` chart of `P^1`.
    pub fn is_polynomial_in_z_inv(&self) -> bool {
        self.max_exp().is_none_or(|l| l <= 0)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (l, c) in &rhs.terms {
            out.add_term(*l, c);
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (l, c) in &rhs.terms {
            out.add_term(*l, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (la, ca) in &self.terms {
            for (lb, cb) in &rhs.terms {
                out.add_term(la + lb, &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(l, c)| (*l, -c)).collect(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (l, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            fmt_monomial(f, c, &[("z", *l)])?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sparse `sum c_{il} z^l u^i` truncated at `u^(trunc+1)`.
///
/// Terms are keyed by `(i, l)`, so iteration order is ascending `u`-degree
/// then ascending `z`-degree. Binary operations truncate to the smaller of
/// the two operand truncations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BiLaurentPoly {
    terms: BTreeMap<(u32, i64), ExactScalar>,
    trunc: u32,
}

impl BiLaurentPoly {
    pub fn zero(trunc: u32) -> Self {
        Self {
            terms: BTreeMap::new(),
            trunc,
        }
    }

    pub fn one(trunc: u32) -> Self {
        Self::constant(ExactScalar::one(), trunc)
    }

    pub fn constant(c: ExactScalar, trunc: u32) -> Self {
        Self::monomial(c, 0, 0, trunc)
    }

    /// `c·z^l·u^i`; zero if `i > trunc`.
    pub fn monomial(c: ExactScalar, l: i64, i: u32, trunc: u32) -> Self {
        let mut p = Self::zero(trunc);
        p.add_term(l, i, &c);
        p
    }

    /// `z^l`.
    pub fn z_pow(l: i64, trunc: u32) -> Self {
        Self::monomial(ExactScalar::one(), l, 0, trunc)
    }

    /// Build from `(l, i, coefficient)` triples; repeated indices are summed.
    pub fn from_terms<I: IntoIterator<Item = (i64, u32, ExactScalar)>>(terms: I, trunc: u32) -> Self {
        let mut p = Self::zero(trunc);
        for (l, i, c) in terms {
            p.add_term(l, i, &c);
        }
        p
    }

    /// Embed a Laurent polynomial in `z` as the `u^0` slice.
    pub fn from_laurent(p: &LaurentPoly, trunc: u32) -> Self {
        Self::from_terms(p.terms().map(|(l, c)| (l, 0, c.clone())), trunc)
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    /// Add `c·z^l·u^i` in place, dropping it if `i` exceeds the truncation.
    pub fn add_term(&mut self, l: i64, i: u32, c: &ExactScalar) {
        if i > self.trunc || c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, l)).or_insert_with(ExactScalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(i, l));
        }
    }

    pub fn coeff(&self, l: i64, i: u32) -> ExactScalar {
        self.terms.get(&(i, l)).cloned().unwrap_or_else(ExactScalar::zero)
    }

    /// Iterate `(l, i, coefficient)` in canonical `(i, l)` order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, u32, &ExactScalar)> + '_ {
        self.terms.iter().map(|((i, l), c)| (*l, *i, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Re-truncate to `min(self.trunc, trunc)`.
    pub fn truncated(&self, trunc: u32) -> Self {
        let trunc = trunc.min(self.trunc);
        Self {
            terms: self
                .terms
                .range(..(trunc + 1, i64::MIN))
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
            trunc,
        }
    }

    /// Same terms with a larger truncation order. The extra orders are
    /// taken to be zero.
    pub fn with_trunc_raised(&self, trunc: u32) -> Self {
        let mut out = self.truncated(trunc);
        out.trunc = trunc;
        out
    }

    /// The homogeneous `u^k` part, as a polynomial with the same truncation.
    pub fn order_part(&self, k: u32) -> Self {
        Self {
            terms: self
                .terms
                .range((k, i64::MIN)..=(k, i64::MAX))
                .map(|(key, c)| (*key, c.clone()))
                .collect(),
            trunc: self.trunc,
        }
    }

    /// Smallest `u`-exponent present.
    pub fn u_valuation(&self) -> Option<u32> {
        self.terms.keys().next().map(|(i, _)| *i)
    }

    /// Range of `z`-exponents present.
    pub fn z_span(&self) -> Option<(i64, i64)> {
        let mut it = self.terms.keys().map(|(_, l)| *l);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), l| (lo.min(l), hi.max(l))))
    }

    /// Multiply by `z^k`.
    pub fn shift_z(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|((i, l), c)| ((*i, l + k), c.clone())).collect(),
            trunc: self.trunc,
        }
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        if s.is_zero() {
            return Self::zero(self.trunc);
        }
        Self {
            terms: self.terms.iter().map(|(k, c)| (*k, c * s)).collect(),
            trunc: self.trunc,
        }
    }

    /// Keep the terms satisfying `keep(l, i)`.
    pub fn filter(&self, mut keep: impl FnMut(i64, u32) -> bool) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|((i, l), _)| keep(*l, *i))
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
            trunc: self.trunc,
        }
    }

    /// Polynomial in `z` and `u` (every term has `l >= 0`).
    pub fn is_u_holomorphic(&self) -> bool {
        self.terms.keys().all(|(_, l)| *l >= 0)
    }

    /// Polynomial in `xi = z^-1` and `v = z·u` (every term has `l <= i`).
    pub fn is_v_holomorphic(&self) -> bool {
        self.terms.keys().all(|(i, l)| *l <= i64::from(*i))
    }

    /// The `u = 0` slice, a Laurent polynomial on the exceptional divisor.
    pub fn restrict_to_exceptional(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.terms
                .range((0, i64::MIN)..=(0, i64::MAX))
                .map(|((_, l), c)| (*l, c.clone())),
        )
    }

    /// Rewrite in the coordinates `(xi, v)` of the second chart:
    /// `z^l u^i = xi^(i-l) v^i`.
    pub fn to_v_chart(&self) -> Result<VChartPoly> {
        let mut terms = BTreeMap::new();
        for ((i, l), c) in &self.terms {
            if *l > i64::from(*i) {
                return Err(Error::NotVHolomorphic { l: *l, i: *i });
            }
            let a = u32::try_from(i64::from(*i) - l).map_err(|_| Error::NotVHolomorphic { l: *l, i: *i })?;
            terms.insert((*i, a), c.clone());
        }
        Ok(VChartPoly {
            terms,
            trunc: self.trunc,
        })
    }

    /// Multiplicative inverse in the truncated ring.
    ///
    /// Requires the `u = 0` part to be a monomial `c·z^k`; the nilpotent
    /// remainder is expanded as a finite geometric series.
    pub fn inverse(&self) -> Result<Self> {
        let base = self.restrict_to_exceptional();
        let (c, k) = base.as_monomial().ok_or(Error::NonUnitDeterminant)?;
        let base_inv = Self::monomial(c.inv().ok_or(Error::NonUnitDeterminant)?, -k, 0, self.trunc);
        // self = base·(1 + n) with n nilpotent.
        let n = &(self * &base_inv) - &Self::one(self.trunc);
        let mut acc = Self::one(self.trunc);
        let mut power = Self::one(self.trunc);
        let minus_n = -&n;
        for _ in 0..self.trunc {
            power = &power * &minus_n;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Ok(&acc * &base_inv)
    }
}

impl<'a> Add<&'a BiLaurentPoly> for &'a BiLaurentPoly {
    type Output = BiLaurentPoly;
    fn add(self, rhs: &BiLaurentPoly) -> BiLaurentPoly {
        let mut out = self.truncated(rhs.trunc);
        for ((i, l), c) in &rhs.terms {
            out.add_term(*l, *i, c);
        }
        out
    }
}

impl<'a> Sub<&'a BiLaurentPoly> for &'a BiLaurentPoly {
    type Output = BiLaurentPoly;
    fn sub(self, rhs: &BiLaurentPoly) -> BiLaurentPoly {
        let mut out = self.truncated(rhs.trunc);
        for ((i, l), c) in &rhs.terms {
            out.add_term(*l, *i, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a BiLaurentPoly> for &'a BiLaurentPoly {
    type Output = BiLaurentPoly;
    fn mul(self, rhs: &BiLaurentPoly) -> BiLaurentPoly {
        let trunc = self.trunc.min(rhs.trunc);
        let mut out = BiLaurentPoly::zero(trunc);
        for ((ia, la), ca) in &self.terms {
            for ((ib, lb), cb) in &rhs.terms {
                if ia + ib > trunc {
                    // keys are sorted by u-degree
                    break;
                }
                out.add_term(la + lb, ia + ib, &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &BiLaurentPoly {
    type Output = BiLaurentPoly;
    fn neg(self) -> BiLaurentPoly {
        BiLaurentPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
            trunc: self.trunc,
        }
    }
}

impl fmt::Display for BiLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((i, l), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            fmt_monomial(f, c, &[("z", *l), ("u", i64::from(*i))])?;
        }
        Ok(())
    }
}

impl fmt::Debug for BiLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [u^{}]", self.trunc)
    }
}

/// A polynomial in `(xi, v)`, the coordinates of the second chart.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VChartPoly {
    /// keyed by `(v-degree, xi-degree)`
    terms: BTreeMap<(u32, u32), ExactScalar>,
    trunc: u32,
}

impl VChartPoly {
    pub fn coeff(&self, xi_deg: u32, v_deg: u32) -> ExactScalar {
        self.terms.get(&(v_deg, xi_deg)).cloned().unwrap_or_else(ExactScalar::zero)
    }

    /// Iterate `(xi-degree, v-degree, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &ExactScalar)> + '_ {
        self.terms.iter().map(|((b, a), c)| (*a, *b, c))
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    /// Back to `(z, u)`: `xi^a v^b = z^(b-a) u^b`.
    pub fn to_u_chart(&self) -> BiLaurentPoly {
        BiLaurentPoly::from_terms(
            self.terms
                .iter()
                .map(|((b, a), c)| (i64::from(*b) - i64::from(*a), *b, c.clone())),
            self.trunc,
        )
    }
}

impl fmt::Display for VChartPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((b, a), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            fmt_monomial(f, c, &[("xi", i64::from(*a)), ("v", i64::from(*b))])?;
        }
        Ok(())
    }
}

impl fmt::Debug for VChartPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
