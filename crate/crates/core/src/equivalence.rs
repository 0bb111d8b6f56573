//! Holomorphic equivalence on a formal neighbourhood of the exceptional
//! divisor.
//!
//! Two transition matrices `T`, `T'` are equivalent modulo `u^(N+1)` when
//! `T·A = C·T'` for some `U`-holomorphic `A` and `V`-holomorphic `C` whose
//! determinants are nonzero constants on the divisor. The identity is
//! linear in the coefficients of `(A, C)`, so the decision is:
//!
//! 1. reduce both sides to canonical form (the gauges are kept);
//! 2. solve the exact linear system `K·A = C·K'` with `A` and `C` supported
//!    on bounded monomial sets;
//! 3. look for a unit-determinant point of the solution space.
//!
//! For canonical inputs of equal splitting type the order-`i` entries of any
//! solution satisfy `0 <= deg_z A_i <= 2j + i` and `-2j <= deg_z C_i <= i`,
//! so the default bound width `2j` never misses a witness. On the solution
//! space `det A|_{u=0}` is a constant-valued quadratic form `q`; it is not
//! identically zero iff it is nonzero at one of the points `e_k` or
//! `e_k + e_l`, which makes the unit test exact.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{
    BiLaurentPoly, ExactScalar, LaurentMatrix2, LaurentPoly, LinearSystem, Matrix2, ProjectiveVector,
    SparseRow, TransitionMatrix2,
};
use crate::birkhoff::splitting_type;
use crate::canonical::{reduce, window_level, CanonicalForm, GaugePair};
use crate::error::{Error, Result};

/// Monomial support of the unknown gauges: at `u`-order `i`, `A` uses
/// `z^0 ..= z^(width + i)` and `C` uses `z^-width ..= z^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeBounds {
    pub width: i64,
}

impl DegreeBounds {
    /// Width that provably contains every witness between canonical forms
    /// of splitting type `j`.
    pub fn sufficient(j: u32) -> Self {
        Self { width: 2 * i64::from(j) }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EquivalenceOptions {
    /// Override the bound width; `None` uses [`DegreeBounds::sufficient`].
    pub width: Option<i64>,
}

/// Certificate `T·A = C·T'` modulo `u^(order+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub a: Matrix2,
    pub c: Matrix2,
    pub order: u32,
}

impl EquivalenceWitness {
    /// Re-check the certificate from scratch against the inputs it claims to
    /// relate.
    pub fn verify(&self, t: &TransitionMatrix2, t2: &TransitionMatrix2) -> bool {
        let lhs = t.matrix().truncated(self.order);
        let rhs = t2.matrix().truncated(self.order);
        let gauge = GaugePair {
            a: self.a.truncated(self.order),
            c: self.c.truncated(self.order),
        };
        gauge.is_valid() && gauge.intertwines(&lhs, &rhs)
    }

    /// Witness for `T' ~ T`.
    pub fn inverse(&self) -> Result<Self> {
        Ok(Self {
            a: self.a.inverse()?,
            c: self.c.inverse()?,
            order: self.order,
        })
    }

    /// Witness for `T ~ T''` from `T ~ T'` (self) and `T' ~ T''`.
    pub fn compose(&self, next: &Self) -> Self {
        let order = self.order.min(next.order);
        Self {
            a: (&self.a * &next.a).truncated(order),
            c: (&self.c * &next.c).truncated(order),
            order,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent(EquivalenceWitness),
    NotEquivalent,
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent(_))
    }

    pub fn witness(&self) -> Option<&EquivalenceWitness> {
        match self {
            Verdict::Equivalent(w) => Some(w),
            Verdict::NotEquivalent => None,
        }
    }
}

/// A verdict together with the order and bounds it was decided at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub verdict: Verdict,
    pub order: u32,
    pub splitting_types: (u32, u32),
    pub bounds: DegreeBounds,
}

impl EquivalenceReport {
    pub fn is_equivalent(&self) -> bool {
        self.verdict.is_equivalent()
    }
}

pub fn are_equivalent(t: &TransitionMatrix2, t2: &TransitionMatrix2, order: u32) -> Result<EquivalenceReport> {
    are_equivalent_with(t, t2, order, &EquivalenceOptions::default())
}

pub fn are_equivalent_with(
    t: &TransitionMatrix2,
    t2: &TransitionMatrix2,
    order: u32,
    opts: &EquivalenceOptions,
) -> Result<EquivalenceReport> {
    let trunc = t.trunc().min(t2.trunc());
    if order > trunc {
        return Err(Error::OrderTooLarge { order, trunc });
    }
    let t = t.truncated(order);
    let t2 = t2.truncated(order);
    let j1 = splitting_type(&t.restrict_to_exceptional())?;
    let j2 = splitting_type(&t2.restrict_to_exceptional())?;
    let bounds = DegreeBounds {
        width: opts.width.unwrap_or(2 * i64::from(j1.max(j2))),
    };
    let report = |verdict| EquivalenceReport {
        verdict,
        order,
        splitting_types: (j1, j2),
        bounds,
    };

    if j1 != j2 {
        return Ok(report(Verdict::NotEquivalent));
    }
    if t == t2 {
        let witness = EquivalenceWitness {
            a: Matrix2::identity(order),
            c: Matrix2::identity(order),
            order,
        };
        return Ok(report(Verdict::Equivalent(witness)));
    }

    let r1 = reduce(&t)?;
    let r2 = reduce(&t2)?;
    let k1 = CanonicalForm::new_unchecked_trunc(r1.j, r1.coeffs.clone(), order)?;
    let k2 = CanonicalForm::new_unchecked_trunc(r2.j, r2.coeffs.clone(), order)?;

    match solve_canonical(&k1.to_matrix(), &k2.to_matrix(), order, bounds)? {
        Some(mid) => {
            // t·A1 = C1·k1, k1·Am = Cm·k2, t2·A2 = C2·k2
            let back = r2.gauge.inverse()?;
            let gauge = r1.gauge.then(&mid).then(&back);
            let witness = EquivalenceWitness {
                a: gauge.a,
                c: gauge.c,
                order,
            };
            if !witness.verify(&t, &t2) {
                return Err(Error::Internal("composed witness failed verification".into()));
            }
            Ok(report(Verdict::Equivalent(witness)))
        }
        None if bounds.width < DegreeBounds::sufficient(j1).width => Err(Error::DegreeBoundExceeded(format!(
            "no witness within width {} (sufficient width for j = {j1} is {})",
            bounds.width,
            DegreeBounds::sufficient(j1).width
        ))),
        None => Ok(report(Verdict::NotEquivalent)),
    }
}

#[derive(Clone, Copy)]
enum Side {
    A,
    C,
}

#[derive(Clone, Copy)]
struct Unknown {
    side: Side,
    row: usize,
    col: usize,
    l: i64,
    i: u32,
}

fn unknowns(order: u32, bounds: DegreeBounds) -> Vec<Unknown> {
    let mut out = Vec::new();
    for side in [Side::A, Side::C] {
        for row in 0..2 {
            for col in 0..2 {
                for i in 0..=order {
                    let range = match side {
                        Side::A => 0..=bounds.width + i64::from(i),
                        Side::C => -bounds.width..=i64::from(i),
                    };
                    out.extend(range.map(|l| Unknown { side, row, col, l, i }));
                }
            }
        }
    }
    out
}

fn assemble(vars: &[Unknown], x: &[ExactScalar], order: u32) -> GaugePair {
    let zero = || BiLaurentPoly::zero(order);
    let mut a = [[zero(), zero()], [zero(), zero()]];
    let mut c = [[zero(), zero()], [zero(), zero()]];
    for (v, val) in vars.iter().zip(x) {
        let target = match v.side {
            Side::A => &mut a,
            Side::C => &mut c,
        };
        target[v.row][v.col].add_term(v.l, v.i, val);
    }
    GaugePair {
        a: Matrix2::new(a),
        c: Matrix2::new(c),
    }
}

fn order_zero_a(vars: &[Unknown], x: &[ExactScalar]) -> LaurentMatrix2 {
    let mut e: [[LaurentPoly; 2]; 2] = Default::default();
    for (v, val) in vars.iter().zip(x) {
        if matches!(v.side, Side::A) && v.i == 0 {
            e[v.row][v.col].add_term(v.l, val);
        }
    }
    LaurentMatrix2::new(e)
}

/// Solve `k1·A = C·k2` for a unit-determinant pair, or show none exists
/// within `bounds`.
fn solve_canonical(k1: &Matrix2, k2: &Matrix2, order: u32, bounds: DegreeBounds) -> Result<Option<GaugePair>> {
    let vars = unknowns(order, bounds);
    let mut eqs: BTreeMap<(usize, usize, u32, i64), SparseRow> = BTreeMap::new();
    for (idx, v) in vars.iter().enumerate() {
        match v.side {
            // (k1·A)_{r, col} gets k1_{r, row}·z^l u^i
            Side::A => {
                for r in 0..2 {
                    for (lk, ik, ck) in k1.get(r, v.row).terms() {
                        if ik + v.i > order {
                            continue;
                        }
                        let e = eqs.entry((r, v.col, ik + v.i, lk + v.l)).or_default();
                        *e.entry(idx).or_insert_with(ExactScalar::zero) += ck;
                    }
                }
            }
            // (C·k2)_{row, c} gets z^l u^i·k2_{col, c}, with a minus sign
            Side::C => {
                for c in 0..2 {
                    for (lk, ik, ck) in k2.get(v.col, c).terms() {
                        if ik + v.i > order {
                            continue;
                        }
                        let e = eqs.entry((v.row, c, ik + v.i, lk + v.l)).or_default();
                        *e.entry(idx).or_insert_with(ExactScalar::zero) -= ck;
                    }
                }
            }
        }
    }
    let mut sys = LinearSystem::new(vars.len());
    for (_, row) in eqs {
        sys.add_homogeneous(row);
    }
    let kernel = sys.kernel();
    if kernel.is_empty() {
        return Ok(None);
    }

    let blocks: Vec<LaurentMatrix2> = kernel.iter().map(|v| order_zero_a(&vars, v)).collect();
    let unit_value = |m: &LaurentMatrix2| -> Result<Option<ExactScalar>> {
        let det = m.det();
        if det.terms().any(|(l, c)| l != 0 && !c.is_zero()) {
            return Err(Error::Internal(
                "determinant on the solution space is not constant along the divisor".into(),
            ));
        }
        Ok(Some(det.coeff(0)).filter(|c| !c.is_zero()))
    };

    let mut choice: Option<Vec<usize>> = None;
    for k in 0..blocks.len() {
        if unit_value(&blocks[k])?.is_some() {
            choice = Some(vec![k]);
            break;
        }
    }
    if choice.is_none() {
        'outer: for k in 0..blocks.len() {
            for l in (k + 1)..blocks.len() {
                let sum = LaurentMatrix2::new(std::array::from_fn(|r| {
                    std::array::from_fn(|c| blocks[k].get(r, c) + blocks[l].get(r, c))
                }));
                if unit_value(&sum)?.is_some() {
                    choice = Some(vec![k, l]);
                    break 'outer;
                }
            }
        }
    }
    let Some(picked) = choice else {
        return Ok(None);
    };

    let mut x = vec![ExactScalar::zero(); vars.len()];
    for k in picked {
        for (xi, vi) in x.iter_mut().zip(&kernel[k]) {
            *xi += vi;
        }
    }
    let gauge = assemble(&vars, &x, order);
    if !gauge.is_valid() || !gauge.intertwines(k1, k2) {
        return Err(Error::Internal("linear-system witness failed verification".into()));
    }
    Ok(Some(gauge))
}

/// Either the zero vector or a projective class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FirstNeighborhoodClass {
    Zero,
    Class(ProjectiveVector),
}

/// The `u^1` coefficients `(p_{1,l})`, `l = 2-j ..= j-1`, up to scale.
pub fn first_neighborhood_class(k: &CanonicalForm) -> FirstNeighborhoodClass {
    match ProjectiveVector::from_affine(&k.level(1)) {
        Some(v) => FirstNeighborhoodClass::Class(v),
        None => FirstNeighborhoodClass::Zero,
    }
}

/// Number of `u^1` window slots, `2j - 2` for `j >= 1`.
pub fn first_neighborhood_slots(j: u32) -> usize {
    window_level(j, 1).count()
}

/// Equivalence on the first formal neighbourhood: the `u^1` parts agree up
/// to a nonzero scalar.
pub fn equivalent_first_neighborhood(k: &CanonicalForm, k2: &CanonicalForm) -> Result<bool> {
    if k.j() != k2.j() {
        return Err(Error::SplittingTypeMismatch(k.j(), k2.j()));
    }
    Ok(first_neighborhood_class(k) == first_neighborhood_class(k2))
}

/// `true` for the identity pair; used to recognise trivial witnesses.
pub fn is_identity_witness(w: &EquivalenceWitness) -> bool {
    crate::algebra::is_identity(&w.a) && crate::algebra::is_identity(&w.c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(j: u32, coeffs: &[((u32, i64), i64)], trunc: u32) -> CanonicalForm {
        CanonicalForm::new(j, coeffs.iter().map(|(k, v)| (*k, ExactScalar::from(*v))), trunc).unwrap()
    }

    #[test]
    fn reflexive_with_identity_witness() {
        let t = form(2, &[((1, 1), 1), ((2, 1), 3)], 2).to_transition();
        let rep = are_equivalent(&t, &t, 2).unwrap();
        let w = rep.verdict.witness().unwrap();
        assert!(is_identity_witness(w));
        assert_eq!(rep.order, 2);
    }

    #[test]
    fn proportional_first_order_parts() {
        let a = form(2, &[((1, 1), 1)], 2).to_transition();
        let b = form(2, &[((1, 1), 2)], 2).to_transition();
        let rep = are_equivalent(&a, &b, 2).unwrap();
        assert!(rep.is_equivalent());
        assert!(rep.verdict.witness().unwrap().verify(&a, &b));
    }

    #[test]
    fn non_proportional_first_order_parts() {
        let a = form(2, &[((1, 1), 1)], 2).to_transition();
        let b = form(2, &[((1, 0), 1)], 2).to_transition();
        let rep = are_equivalent(&a, &b, 1).unwrap();
        assert_eq!(rep.verdict, Verdict::NotEquivalent);
    }

    #[test]
    fn split_is_isolated_from_zu() {
        let a = TransitionMatrix2::split(2, 2);
        let b = form(2, &[((1, 1), 1)], 2).to_transition();
        for order in 1..=2 {
            assert!(!are_equivalent(&a, &b, order).unwrap().is_equivalent());
        }
    }

    #[test]
    fn different_splitting_types() {
        let a = TransitionMatrix2::split(2, 2);
        let b = TransitionMatrix2::split(1, 2);
        let rep = are_equivalent(&a, &b, 2).unwrap();
        assert_eq!(rep.splitting_types, (2, 1));
        assert!(!rep.is_equivalent());
    }

    #[test]
    fn order_too_large() {
        let a = TransitionMatrix2::split(2, 2);
        assert_eq!(
            are_equivalent(&a, &a, 3).unwrap_err(),
            Error::OrderTooLarge { order: 3, trunc: 2 }
        );
    }

    #[test]
    fn narrow_bounds_are_reported() {
        let a = form(2, &[((1, 1), 1)], 2).to_transition();
        let b = form(2, &[((1, 0), 1)], 2).to_transition();
        let opts = EquivalenceOptions { width: Some(1) };
        assert!(matches!(
            are_equivalent_with(&a, &b, 1, &opts),
            Err(Error::DegreeBoundExceeded(_))
        ));
    }

    #[test]
    fn first_neighborhood_examples() {
        let k = form(2, &[((1, 0), 3), ((1, 1), 6)], 2);
        let expected = ProjectiveVector::from_affine(&[1.into(), 2.into()]).unwrap();
        assert_eq!(first_neighborhood_class(&k), FirstNeighborhoodClass::Class(expected));

        assert_eq!(first_neighborhood_class(&form(2, &[((2, 1), 1)], 2)), FirstNeighborhoodClass::Zero);

        let k = form(3, &[((1, -1), 0), ((1, 0), 5), ((1, 1), 0), ((1, 2), 5)], 4);
        let FirstNeighborhoodClass::Class(v) = first_neighborhood_class(&k) else { panic!() };
        assert_eq!(v.to_string(), "[0 : 1 : 0 : 1]");
    }

    #[test]
    fn first_neighborhood_equivalence_examples() {
        let zu = form(2, &[((1, 1), 1)], 2);
        assert!(equivalent_first_neighborhood(&zu, &form(2, &[((1, 1), -7)], 2)).unwrap());
        assert!(!equivalent_first_neighborhood(&zu, &form(2, &[((1, 1), 1), ((1, 0), 1)], 2)).unwrap());
        assert!(equivalent_first_neighborhood(&form(2, &[((2, 1), 1)], 2), &form(2, &[((2, 1), 4)], 2)).unwrap());
        assert_eq!(
            equivalent_first_neighborhood(&zu, &CanonicalForm::split(3)),
            Err(Error::SplittingTypeMismatch(2, 3))
        );
    }
}
