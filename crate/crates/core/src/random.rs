//! Deterministic random generators for gauges, canonical forms and Birkhoff
//! inputs. All take an explicit RNG so that callers control seeding.

use rand::Rng;

use crate::algebra::{BiLaurentPoly, ExactScalar, LaurentMatrix2, LaurentPoly, Matrix2, TransitionMatrix2};
use crate::canonical::{canonical_window, CanonicalForm, GaugePair};
use crate::error::Result;

pub use rand_chacha::ChaCha8Rng as SeededRng;

pub fn seeded(seed: u64) -> SeededRng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Integer in `[-bound, bound]`.
pub fn small_int<R: Rng>(rng: &mut R, bound: i64) -> i64 {
    rng.gen_range(-bound..=bound)
}

pub fn small_scalar<R: Rng>(rng: &mut R, bound: i64) -> ExactScalar {
    small_int(rng, bound).into()
}

pub fn nonzero_scalar<R: Rng>(rng: &mut R, bound: i64) -> ExactScalar {
    loop {
        let v = small_int(rng, bound);
        if v != 0 {
            return v.into();
        }
    }
}

/// Random polynomial with monomials `z^l u^i`, `1 <= i <= trunc` when
/// `nilpotent`, and `l` drawn from `allowed(i)`.
fn random_poly<R: Rng>(
    rng: &mut R,
    trunc: u32,
    nilpotent: bool,
    terms: usize,
    allowed: impl Fn(u32) -> (i64, i64),
) -> BiLaurentPoly {
    let mut p = BiLaurentPoly::zero(trunc);
    let lo_i = u32::from(nilpotent);
    if lo_i > trunc {
        return p;
    }
    for _ in 0..terms {
        let i = rng.gen_range(lo_i..=trunc);
        let (lo, hi) = allowed(i);
        let l = rng.gen_range(lo..=hi);
        p.add_term(l, i, &small_scalar(rng, 2));
    }
    p
}

/// `U`-holomorphic polynomial with `z`-degree at most `deg`.
pub fn random_u_poly<R: Rng>(rng: &mut R, trunc: u32, deg: i64, nilpotent: bool) -> BiLaurentPoly {
    let terms = rng.gen_range(0..=3);
    random_poly(rng, trunc, nilpotent, terms, |_| (0, deg))
}

/// `V`-holomorphic polynomial with `xi`-degree at most `deg`.
pub fn random_v_poly<R: Rng>(rng: &mut R, trunc: u32, deg: i64, nilpotent: bool) -> BiLaurentPoly {
    let terms = rng.gen_range(0..=3);
    random_poly(rng, trunc, nilpotent, terms, |i| (i64::from(i) - deg, i64::from(i)))
}

fn elementary_product<R: Rng>(
    rng: &mut R,
    trunc: u32,
    mut entry: impl FnMut(&mut R, bool) -> BiLaurentPoly,
) -> Matrix2 {
    let one = BiLaurentPoly::one(trunc);
    let zero = BiLaurentPoly::zero(trunc);
    let c1 = BiLaurentPoly::constant(nonzero_scalar(rng, 2), trunc);
    let c2 = BiLaurentPoly::constant(nonzero_scalar(rng, 2), trunc);
    // diagonal with unit entries: constant plus a nilpotent part
    let d = Matrix2::diag(&c1 + &entry(rng, true), c2);
    let upper = Matrix2::new([[one.clone(), entry(rng, false)], [zero.clone(), one.clone()]]);
    let lower = Matrix2::new([[one.clone(), zero.clone()], [entry(rng, false), one.clone()]]);
    let upper2 = Matrix2::new([[one.clone(), entry(rng, false)], [zero, one]]);
    &(&(&d * &upper) * &lower) * &upper2
}

/// Invertible `U`-holomorphic matrix with constant determinant on the
/// divisor.
pub fn random_u_gauge<R: Rng>(rng: &mut R, trunc: u32, deg: i64) -> Matrix2 {
    elementary_product(rng, trunc, |r, nil| random_u_poly(r, trunc, deg, nil))
}

/// Invertible `V`-holomorphic matrix with constant determinant on the
/// divisor.
pub fn random_v_gauge<R: Rng>(rng: &mut R, trunc: u32, deg: i64) -> Matrix2 {
    elementary_product(rng, trunc, |r, nil| random_v_poly(r, trunc, deg, nil))
}

pub fn random_gauge_pair<R: Rng>(rng: &mut R, trunc: u32, deg: i64) -> GaugePair {
    GaugePair {
        a: random_u_gauge(rng, trunc, deg),
        c: random_v_gauge(rng, trunc, deg),
    }
}

/// `T = C·K·A^-1`, so that `T·A = C·K`.
pub fn apply_gauge(k: &Matrix2, gauge: &GaugePair) -> Result<TransitionMatrix2> {
    TransitionMatrix2::new(&(&gauge.c * k) * &gauge.a.inverse()?)
}

/// Random transition matrix of a bundle equivalent to `k`, with the gauge
/// that relates them.
pub fn random_gauge_of<R: Rng>(rng: &mut R, k: &Matrix2, deg: i64) -> Result<(TransitionMatrix2, GaugePair)> {
    let gauge = random_gauge_pair(rng, k.trunc(), deg);
    Ok((apply_gauge(k, &gauge)?, gauge))
}

/// Canonical form with all window coefficients below `depth` zero and at
/// least one nonzero coefficient at level `depth` (when that level exists).
/// `depth = None` gives the split form.
pub fn random_canonical<R: Rng>(rng: &mut R, j: u32, depth: Option<u32>, trunc: u32, bound: i64) -> CanonicalForm {
    let Some(depth) = depth else {
        return CanonicalForm::split(j).with_trunc(trunc);
    };
    let window: Vec<_> = canonical_window(j).into_iter().filter(|(i, _)| *i >= depth && *i <= trunc).collect();
    let level: Vec<_> = window.iter().filter(|(i, _)| *i == depth).copied().collect();
    let mut coeffs: Vec<((u32, i64), ExactScalar)> =
        window.iter().map(|idx| (*idx, small_scalar(rng, bound))).collect();
    if !level.is_empty() && coeffs.iter().all(|((i, _), c)| *i != depth || num_traits::Zero::is_zero(c)) {
        let pick = level[rng.gen_range(0..level.len())];
        coeffs.push((pick, nonzero_scalar(rng, bound)));
    }
    let full = trunc.max(2 * j - 2);
    CanonicalForm::new(j, coeffs, full).expect("window-supported coefficients").with_trunc(trunc)
}

fn random_laurent<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> LaurentPoly {
    let n = rng.gen_range(0..=2);
    LaurentPoly::from_terms((0..n).map(|_| (rng.gen_range(lo..=hi), small_scalar(rng, 2))))
}

fn elementary_laurent<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> LaurentMatrix2 {
    let c1 = LaurentPoly::constant(nonzero_scalar(rng, 2));
    let c2 = LaurentPoly::constant(nonzero_scalar(rng, 2));
    let d = LaurentMatrix2::diag(c1, c2);
    let upper = LaurentMatrix2::new([[LaurentPoly::one(), random_laurent(rng, lo, hi)], [LaurentPoly::zero(), LaurentPoly::one()]]);
    let lower = LaurentMatrix2::new([[LaurentPoly::one(), LaurentPoly::zero()], [random_laurent(rng, lo, hi), LaurentPoly::one()]]);
    &(&d * &upper) * &lower
}

/// `(a·diag(z^j, z^-j)·b, a, b)` with `a` polynomial in `z^-1` and `b`
/// polynomial in `z`, both of degree at most `deg` per factor.
pub fn random_birkhoff_input<R: Rng>(rng: &mut R, j: u32, deg: i64) -> (LaurentMatrix2, LaurentMatrix2, LaurentMatrix2) {
    let a = elementary_laurent(rng, -deg, 0);
    let b = elementary_laurent(rng, 0, deg);
    let m = &(&a * &LaurentMatrix2::split_diagonal(j)) * &b;
    (m, a, b)
}
