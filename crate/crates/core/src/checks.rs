//! Randomized self-checks that compare the main algorithms against
//! independent oracles. Used by the `oracle-check` command and the test
//! suites.

use rand::Rng;

use crate::algebra::ExactScalar;
use crate::birkhoff::{grothendieck_split, splitting_type};
use crate::canonical::{canonicalize, CanonicalForm};
use crate::equivalence::{are_equivalent, equivalent_first_neighborhood};
use crate::moduli::{classify, m2_classify};
use crate::random::{random_birkhoff_input, random_canonical, random_gauge_of, seeded, SeededRng};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn run(name: &'static str, count: usize, rng: &mut SeededRng, mut case: impl FnMut(&mut SeededRng) -> Result<(), String>) -> CheckOutcome {
    let mut out = CheckOutcome { name, cases: count, failures: 0, first_failure: None };
    for n in 0..count {
        if let Err(msg) = case(rng) {
            out.failures += 1;
            out.first_failure.get_or_insert_with(|| format!("case {n}: {msg}"));
        }
    }
    out
}

/// Random `a·diag(z^j, z^-j)·b` must factor back with the same `j`.
pub fn birkhoff_round_trip(rng: &mut SeededRng, count: usize) -> CheckOutcome {
    run("birkhoff_round_trip", count, rng, |rng| {
        let j = rng.gen_range(0..=3);
        let (m, _, _) = random_birkhoff_input(rng, j, 2);
        let found = splitting_type(&m).map_err(|e| e.to_string())?;
        if found != j {
            return Err(format!("splitting type {found}, expected {j} for {m}"));
        }
        let split = grothendieck_split(&m).map_err(|e| e.to_string())?;
        if split.recompose() != m || !split.a.is_polynomial_in_z_inv() || !split.b.is_polynomial_in_z() {
            return Err(format!("bad factorization of {m}"));
        }
        Ok(())
    })
}

fn random_depth(rng: &mut SeededRng, j: u32) -> Option<u32> {
    let top = 2 * j - 2;
    match rng.gen_range(0..=top) {
        0 => None,
        d => Some(d),
    }
}

/// Canonicalizing a random gauge transform of a canonical form returns a
/// verified gauge, the same moduli class, and an equivalent bundle.
pub fn gauge_round_trip(rng: &mut SeededRng, count: usize) -> CheckOutcome {
    run("gauge_round_trip", count, rng, |rng| {
        let j = rng.gen_range(2..=3);
        let depth = random_depth(rng, j);
        let trunc = 2 * j - 2;
        let k = random_canonical(rng, j, depth, trunc, 2);
        let (t, _) = random_gauge_of(rng, &k.to_matrix(), 1).map_err(|e| e.to_string())?;
        let (k2, g) = canonicalize(&t).map_err(|e| e.to_string())?;
        if !g.is_valid() || !g.intertwines(t.matrix(), &k2.to_matrix()) {
            return Err(format!("canonicalize gauge does not verify for {}", t.matrix()));
        }
        if classify(&k2) != classify(&k) {
            return Err(format!("class changed: {} vs {}", classify(&k), classify(&k2)));
        }
        let report = are_equivalent(&t, &k.to_transition(), trunc).map_err(|e| e.to_string())?;
        match report.verdict.witness() {
            Some(w) if w.verify(&t, &k.to_transition()) => Ok(()),
            Some(_) => Err("witness failed verification".into()),
            None => Err(format!("gauge transform judged inequivalent to {k:?}")),
        }
    })
}

fn perturb_higher(rng: &mut SeededRng, k: &CanonicalForm) -> CanonicalForm {
    let scale = loop {
        let s = rng.gen_range(-3i64..=3);
        if s != 0 {
            break ExactScalar::from(s);
        }
    };
    let coeffs = k.coeffs().iter().map(|(&(i, l), c)| {
        let v = if i == 1 { c * &scale } else { ExactScalar::from(rng.gen_range(-2i64..=2)) };
        ((i, l), v)
    });
    let full = k.trunc().max(2 * k.j() - 2);
    CanonicalForm::new(k.j(), coeffs.collect::<Vec<_>>(), full).expect("same window").with_trunc(k.trunc())
}

/// At order one, the linear-system decision agrees with comparing the
/// projectivized `u^1` coefficients.
pub fn first_neighborhood_agreement(rng: &mut SeededRng, count: usize) -> CheckOutcome {
    run("first_neighborhood_agreement", count, rng, |rng| {
        let j = rng.gen_range(2..=3);
        let k = random_canonical(rng, j, Some(1), 1, 2);
        let k2 = if rng.gen_bool(0.5) {
            perturb_higher(rng, &k)
        } else {
            let d = if rng.gen_bool(0.8) { Some(1) } else { None };
            random_canonical(rng, j, d, 1, 2)
        };
        let expected = equivalent_first_neighborhood(&k, &k2).map_err(|e| e.to_string())?;
        let got = are_equivalent(&k.to_transition(), &k2.to_transition(), 1)
            .map_err(|e| e.to_string())?
            .is_equivalent();
        if got != expected {
            return Err(format!("order-1 verdict {got}, projective comparison {expected} for {k:?} / {k2:?}"));
        }
        Ok(())
    })
}

/// For `j = 2`, two canonical forms are equivalent at order two exactly
/// when they have the same `M_2` tag.
pub fn m2_agreement(rng: &mut SeededRng, count: usize) -> CheckOutcome {
    run("m2_agreement", count, rng, |rng| {
        let pick = |rng: &mut SeededRng| {
            let depth = [None, Some(1), Some(2)][rng.gen_range(0..3)];
            random_canonical(rng, 2, depth, 2, 1)
        };
        let k = pick(rng);
        let k2 = pick(rng);
        let expected = m2_classify(&k).map_err(|e| e.to_string())? == m2_classify(&k2).map_err(|e| e.to_string())?;
        let got = are_equivalent(&k.to_transition(), &k2.to_transition(), 2)
            .map_err(|e| e.to_string())?
            .is_equivalent();
        if got != expected {
            return Err(format!("order-2 verdict {got}, M2 tags equal {expected} for {k:?} / {k2:?}"));
        }
        Ok(())
    })
}

/// All suites, `count` cases each, from one seed.
pub fn run_oracle_checks(seed: u64, count: usize) -> Vec<CheckOutcome> {
    let mut rng = seeded(seed);
    vec![
        birkhoff_round_trip(&mut rng, count),
        gauge_round_trip(&mut rng, count),
        first_neighborhood_agreement(&mut rng, count),
        m2_agreement(&mut rng, count),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_on_a_small_sample() {
        for outcome in run_oracle_checks(1, 8) {
            assert!(outcome.passed(), "{outcome:?}");
        }
    }
}
