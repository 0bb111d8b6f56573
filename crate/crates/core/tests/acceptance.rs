//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits nonzero if any fails.

use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::Rng;

use blowup_core::algebra::{BiLaurentPoly, ExactScalar, LaurentMatrix2, LaurentPoly, TransitionMatrix2};
use blowup_core::birkhoff::{grothendieck_split, section_dimension, splitting_type};
use blowup_core::canonical::{canonical_window, canonicalize, CanonicalForm, GaugePair};
use blowup_core::equivalence::{
    are_equivalent, equivalent_first_neighborhood, first_neighborhood_slots, EquivalenceWitness,
};
use blowup_core::moduli::{dimension_count, m2_classify, m2_separable, M2Point, PqAssignment};
use blowup_core::random::{
    random_birkhoff_input, random_canonical, random_gauge_of, seeded, small_scalar, SeededRng,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn form(j: u32, coeffs: &[((u32, i64), ExactScalar)], trunc: u32) -> CanonicalForm {
    CanonicalForm::new(j, coeffs.to_vec(), trunc).unwrap()
}

fn j2(c10: ExactScalar, c11: ExactScalar, c21: ExactScalar) -> TransitionMatrix2 {
    form(2, &[((1, 0), c10), ((1, 1), c11), ((2, 1), c21)], 2).to_transition()
}

fn int(v: i64) -> ExactScalar {
    v.into()
}

/// Independent window membership: the double-sum bounds.
fn window_oracle(j: u32, i: u32, l: i64) -> bool {
    let (j, i) = (i64::from(j), i64::from(i));
    (1..=2 * j - 2).contains(&i) && (i - j + 1..=j - 1).contains(&l)
}

fn check_witness(w: &EquivalenceWitness, t: &TransitionMatrix2, t2: &TransitionMatrix2) -> Result<(), String> {
    let n = w.order;
    let lhs = &t.matrix().truncated(n) * &w.a.truncated(n);
    let rhs = &w.c.truncated(n) * &t2.matrix().truncated(n);
    ensure!(lhs == rhs, "witness identity T·A = C·T' fails");
    ensure!(w.a.is_u_holomorphic() && w.c.is_v_holomorphic(), "witness not holomorphic on its chart");
    ensure!(w.a.has_unit_constant_det() && w.c.has_unit_constant_det(), "witness determinant not a unit");
    Ok(())
}

fn equivalent(t: &TransitionMatrix2, t2: &TransitionMatrix2, order: u32) -> Result<bool, String> {
    let report = are_equivalent(t, t2, order).map_err(e)?;
    ensure!(report.order == order, "verdict reports order {} instead of {order}", report.order);
    if let Some(w) = report.verdict.witness() {
        check_witness(w, t, t2)?;
    }
    Ok(report.is_equivalent())
}

fn window_formula() -> Outcome {
    for j in 1..=8u32 {
        let jj = j as usize;
        let expected = (2 * jj - 2) * (2 * jj - 1) / 2;
        let w = canonical_window(j);
        ensure!(w.len() == expected, "|W({j})| = {} != {expected}", w.len());
        ensure!(w.iter().all(|&(i, l)| window_oracle(j, i, l)), "W({j}) has an index outside the bounds");
    }
    ensure!(canonical_window(0).is_empty(), "W(0) not empty");
    ensure!(canonical_window(2) == vec![(1, 0), (1, 1), (2, 1)], "W(2) = {:?}", canonical_window(2));
    Ok("sizes 0,1,3,6,...,91 for j = 1..8".into())
}

fn low_types_trivial() -> Outcome {
    let mut rng = seeded(0x5eed_0002);
    for j in [0u32, 1] {
        let split = TransitionMatrix2::split(j, 2);
        for _ in 0..20 {
            let (t, _) = random_gauge_of(&mut rng, split.matrix(), 2).map_err(e)?;
            ensure!(splitting_type(&t.restrict_to_exceptional()).map_err(e)? == j, "wrong splitting type");
            let (k, _) = canonicalize(&t).map_err(e)?;
            ensure!(k.j() == j && k.is_split(), "j = {j} input canonicalized to {k:?}");
            ensure!(equivalent(&t, &split, 2)?, "j = {j} input not equivalent to the split bundle");
        }
    }
    Ok("40 random gauges of diag(1,1), diag(z,z^-1)".into())
}

fn soundness() -> Outcome {
    let mut rng = seeded(0x5eed_0003);
    for j in [2u32, 3] {
        let trunc = 2 * j - 2;
        for n in 0..50 {
            let depth = match rng.gen_range(0..=trunc) {
                0 => None,
                d => Some(d),
            };
            let k0 = random_canonical(&mut rng, j, depth, trunc, 3);
            let (t, _) = random_gauge_of(&mut rng, &k0.to_matrix(), 2).map_err(e)?;
            let (k, g) = canonicalize(&t).map_err(e)?;
            ensure!(k.j() == j, "case {n}: j = {} expected {j}", k.j());
            let km = k.to_matrix();
            ensure!((t.matrix() * &g.a) == (&g.c * &km), "case {n}: T·A != C·K");
            ensure!(g.a.is_u_holomorphic() && g.c.is_v_holomorphic(), "case {n}: gauge not holomorphic");
            ensure!(g.a.has_unit_constant_det() && g.c.has_unit_constant_det(), "case {n}: gauge det not a unit");
            ensure!(
                k.coeffs().keys().all(|&(i, l)| window_oracle(j, i, l)),
                "case {n}: coefficients outside the window"
            );
            let jj = i64::from(j);
            ensure!(
                *km.get(0, 0) == BiLaurentPoly::z_pow(jj, trunc)
                    && *km.get(1, 1) == BiLaurentPoly::z_pow(-jj, trunc)
                    && km.get(1, 0).is_zero(),
                "case {n}: wrong shape"
            );
            let (k2, g2) = canonicalize(&k.to_transition()).map_err(e)?;
            ensure!(k2 == k && g2 == GaugePair::identity(trunc), "case {n}: not idempotent");
        }
    }
    Ok("100 random inputs, j = 2, 3".into())
}

fn proportional(a: &[ExactScalar], b: &[ExactScalar]) -> bool {
    (0..a.len()).all(|x| (0..a.len()).all(|y| (&a[x] * &b[y] - &a[y] * &b[x]).is_zero()))
}

fn random_gaussian(rng: &mut SeededRng) -> ExactScalar {
    let den = rng.gen_range(1..=4);
    let v = ExactScalar::gaussian(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
    v.checked_div(&int(den)).unwrap()
}

fn first_level(j: u32, v: &[ExactScalar]) -> CanonicalForm {
    let lo = 2 - i64::from(j);
    let coeffs: Vec<_> = v.iter().enumerate().map(|(k, c)| ((1, lo + k as i64), c.clone())).collect();
    CanonicalForm::new(j, coeffs, 2 * j - 2).unwrap().with_trunc(1)
}

fn random_vector(rng: &mut SeededRng, n: usize) -> Vec<ExactScalar> {
    loop {
        let v: Vec<_> = (0..n).map(|_| small_scalar(rng, 3)).collect();
        if v.iter().any(|c| !c.is_zero()) {
            return v;
        }
    }
}

fn first_neighborhood() -> Outcome {
    let mut rng = seeded(0x5eed_0004);
    let mut agree = 0;
    for n in 0..60 {
        let j = rng.gen_range(2..=4);
        let slots = first_neighborhood_slots(j);
        let v = random_vector(&mut rng, slots);
        let (w, want) = if n < 30 {
            let lambda = loop {
                let l = random_gaussian(&mut rng);
                if !l.is_zero() {
                    break l;
                }
            };
            (v.iter().map(|c| c * &lambda).collect::<Vec<_>>(), true)
        } else {
            let w = loop {
                let w = random_vector(&mut rng, slots);
                if !proportional(&v, &w) {
                    break w;
                }
            };
            (w, false)
        };
        let (k, k2) = (first_level(j, &v), first_level(j, &w));
        let got = equivalent(&k.to_transition(), &k2.to_transition(), 1)?;
        ensure!(got == want, "case {n}: order-1 verdict {got}, expected {want}");
        ensure!(equivalent_first_neighborhood(&k, &k2).map_err(e)? == got, "case {n}: disagreement");
        agree += 1;
    }
    Ok(format!("{agree}/60 agree (30 proportional, 30 not)"))
}

fn m2_desk_check() -> Outcome {
    let base = j2(int(1), int(0), int(0));
    for t in [int(1), int(-1), int(5), ExactScalar::ratio(1, 2)] {
        ensure!(equivalent(&j2(int(1), int(0), t.clone()), &base, 2)?, "(1,0,{t}) !~ (1,0,0)");
    }
    let q = j2(int(0), int(0), int(1));
    for s in [2, -3] {
        ensure!(equivalent(&j2(int(0), int(0), int(s)), &q, 2)?, "(0,0,{s}) !~ (0,0,1)");
    }
    let split = TransitionMatrix2::split(2, 2);
    let generic = j2(int(1), int(3), int(0));
    for (a, b, name) in [(&split, &q, "SPLIT/Q"), (&split, &generic, "SPLIT/GENERIC"), (&q, &generic, "Q/GENERIC")] {
        ensure!(!equivalent(a, b, 2)?, "{name} judged equivalent");
    }
    let tag = |t: &TransitionMatrix2| canonicalize(t).map_err(e).and_then(|(k, _)| m2_classify(&k).map_err(e));
    let (ts, tq) = (tag(&split)?, tag(&q)?);
    ensure!(ts == M2Point::Split && tq == M2Point::Q, "tags {ts}, {tq}");
    ensure!(!m2_separable(&ts, &tq, PqAssignment::default()), "SPLIT and Q separable");
    let g1 = tag(&base)?;
    let g2 = tag(&j2(int(0), int(1), int(0)))?;
    ensure!(g1 != g2, "distinct GENERIC points collapsed");
    ensure!(m2_separable(&g1, &g2, PqAssignment::default()), "distinct GENERIC points not separable");
    Ok("t in {1,-1,5,1/2}, s in {2,-3}, three strata distinct, (p,q) inseparable".into())
}

fn dimensions() -> Outcome {
    for j in 2..=8u32 {
        let d = dimension_count(j).map_err(e)?;
        let jj = j as usize;
        ensure!(d.generic == 2 * jj - 3, "j = {j}: generic {}", d.generic);
        ensure!(d.generic + 1 == first_neighborhood_slots(j), "j = {j}: generic != slots - 1");
        let lower: Vec<usize> = (2..=2 * jj - 2).map(|i| 2 * jj - 2 - i).collect();
        ensure!(d.deeper == lower, "j = {j}: lower strata {:?}", d.deeper);
        ensure!(d.window_size == canonical_window(j).len(), "j = {j}: window size");
    }
    Ok("j = 2..8".into())
}

fn birkhoff() -> Outcome {
    let mut rng = seeded(0x5eed_0007);
    for n in 0..100 {
        let j = rng.gen_range(0..=4);
        let (m, _, _) = random_birkhoff_input(&mut rng, j, 2);
        let split = grothendieck_split(&m).map_err(e)?;
        ensure!(split.j == j, "case {n}: re-split to {} instead of {j}", split.j);
        ensure!(
            &(&split.a * &LaurentMatrix2::split_diagonal(j)) * &split.b == m,
            "case {n}: factors do not recompose"
        );
        ensure!(split.a.is_polynomial_in_z_inv() && split.b.is_polynomial_in_z(), "case {n}: factor sides");
    }
    let z = |l| LaurentPoly::z_pow(l);
    let ext = LaurentMatrix2::new([[z(1), LaurentPoly::one()], [LaurentPoly::zero(), z(-1)]]);
    ensure!(section_dimension(&ext, 1).map_err(e)? == 0, "h0(E(-1)) != 0");
    ensure!(section_dimension(&ext, 0).map_err(e)? == 2, "h0(E) != 2");
    ensure!(splitting_type(&ext).map_err(e)? == 0, "[[z,1],[0,z^-1]] not trivial");
    Ok("100 factorizations, j = 0..4".into())
}

fn random_bundle(rng: &mut SeededRng, k: &CanonicalForm) -> Result<TransitionMatrix2, String> {
    random_gauge_of(rng, &k.to_matrix(), 1).map(|(t, _)| t).map_err(e)
}

fn small_j2(rng: &mut SeededRng) -> CanonicalForm {
    let depth = [None, Some(1), Some(2)][rng.gen_range(0..3)];
    random_canonical(rng, 2, depth, 2, 1)
}

fn coherence() -> Outcome {
    let mut rng = seeded(0x5eed_0008);
    for _ in 0..10 {
        let k = small_j2(&mut rng);
        let t = random_bundle(&mut rng, &k)?;
        let report = are_equivalent(&t, &t, 2).map_err(e)?;
        ensure!(report.is_equivalent(), "not reflexive");
        check_witness(report.verdict.witness().unwrap(), &t, &t)?;
    }
    let mut equivalent_pairs = 0;
    for n in 0..50 {
        let k = small_j2(&mut rng);
        let k2 = if n % 2 == 0 { k.clone() } else { small_j2(&mut rng) };
        let (t, t2) = (random_bundle(&mut rng, &k)?, random_bundle(&mut rng, &k2)?);
        let ab = equivalent(&t, &t2, 2)?;
        let ba = equivalent(&t2, &t, 2)?;
        ensure!(ab == ba, "pair {n}: asymmetric verdict");
        equivalent_pairs += usize::from(ab);
    }
    for n in 0..20 {
        let j = if n % 4 == 3 { 3 } else { 2 };
        let order = 2 * j - 2;
        let depth = rng.gen_range(1..=order);
        let k = random_canonical(&mut rng, j, Some(depth), order, 2);
        let ts: Vec<_> = (0..3).map(|_| random_bundle(&mut rng, &k)).collect::<Result<_, _>>()?;
        let w = |a: &TransitionMatrix2, b: &TransitionMatrix2| -> Result<EquivalenceWitness, String> {
            let r = are_equivalent(a, b, order).map_err(e)?;
            r.verdict.witness().cloned().ok_or_else(|| format!("triple {n}: gauge-related pair inequivalent"))
        };
        let (w01, w12) = (w(&ts[0], &ts[1])?, w(&ts[1], &ts[2])?);
        check_witness(&w01, &ts[0], &ts[1])?;
        check_witness(&w12, &ts[1], &ts[2])?;
        check_witness(&w01.compose(&w12), &ts[0], &ts[2])?;
        ensure!(equivalent(&ts[0], &ts[2], order)?, "triple {n}: not transitive");
    }
    Ok(format!("reflexive x10, symmetric x50 ({equivalent_pairs} equivalent), transitive x20"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 8] = [
        ("1 window formula", window_formula, 1),
        ("2 M0/M1 triviality", low_types_trivial, 10),
        ("3 canonicalization soundness", soundness, 60),
        ("4 first-neighbourhood criterion", first_neighborhood, 30),
        ("5 M2 desk verification", m2_desk_check, 30),
        ("6 dimension accounting", dimensions, 1),
        ("7 Birkhoff round-trip", birkhoff, 60),
        ("8 oracle coherence", coherence, 60),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(_) if elapsed > Duration::from_secs(limit) => Err(format!("took {elapsed:?}, limit {limit} s")),
            other => other,
        };
        match result {
            Ok(detail) => println!("PASS  criterion {name} ({elapsed:.2?}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name} ({elapsed:.2?}): {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 8 acceptance criteria passed");
}
