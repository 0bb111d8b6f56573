//! One function per subcommand. Each returns a JSON value, a one-line
//! summary and an exit status.

use serde_json::{json, Value};

use blowup_core::algebra::{ExactScalar, Matrix2, ProjectiveVector, TransitionMatrix2};
use blowup_core::birkhoff::splitting_type;
use blowup_core::canonical::{canonicalize, default_trunc, CanonicalForm};
use blowup_core::checks::run_oracle_checks;
use blowup_core::equivalence::{are_equivalent_with, EquivalenceOptions, Verdict};
use blowup_core::moduli::{classify, m2_classify, PqAssignment};
use blowup_core::random::{random_canonical, seeded};
use blowup_core::Error;

use crate::document::{BundleDocument, DocumentError, Term};

pub const EXIT_NOT_EQUIVALENT: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INVALID_INPUT,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::DegreeBoundExceeded(_) | Error::Internal(_) => CliError::Internal(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<DocumentError> for CliError {
    fn from(e: DocumentError) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub value: Value,
    pub summary: String,
    pub exit: i32,
}

impl Report {
    fn ok(value: Value, summary: String) -> Self {
        Self { value, summary, exit: 0 }
    }
}

pub fn scalar_json(c: &ExactScalar) -> Value {
    let t = Term::new(0, 0, c);
    json!({ "re": t.re, "im": t.im })
}

fn matrix_json(m: &Matrix2) -> Value {
    json!(BundleDocument::from_matrix(m, None).entries)
}

fn projective_json(v: &ProjectiveVector) -> Value {
    Value::Array(v.coords().iter().map(scalar_json).collect())
}

fn coeffs_json(k: &CanonicalForm) -> Value {
    Value::Array(
        k.coeffs()
            .iter()
            .map(|(&(i, l), c)| {
                let t = Term::new(l, i, c);
                json!({ "i": i, "l": l, "re": t.re, "im": t.im })
            })
            .collect(),
    )
}

/// Parse a document and apply an optional truncation override.
pub fn load(text: &str, trunc: Option<u32>) -> Result<TransitionMatrix2, CliError> {
    let doc = BundleDocument::parse(text)?;
    let t = doc.transition()?;
    Ok(match trunc {
        None => t,
        Some(n) if n <= t.trunc() => t.truncated(n),
        Some(n) => TransitionMatrix2::new(t.matrix().with_trunc_raised(n))?,
    })
}

pub fn canonicalize_cmd(t: &TransitionMatrix2) -> Result<Report, CliError> {
    let (k, g) = canonicalize(t)?;
    let doc = BundleDocument::from_matrix(&k.to_matrix(), Some(k.j()));
    let value = json!({
        "j": k.j(),
        "order": k.trunc(),
        "coeffs": coeffs_json(&k),
        "canonical": doc,
        "gauge": { "a": matrix_json(&g.a), "c": matrix_json(&g.c) },
    });
    let terms: Vec<String> = k.coeffs().iter().map(|((i, l), c)| format!("({i},{l})={c}")).collect();
    let summary = format!("j = {}, order {}, coeffs {{{}}}", k.j(), k.trunc(), terms.join(", "));
    Ok(Report::ok(value, summary))
}

pub fn splitting_type_cmd(t: &TransitionMatrix2) -> Result<Report, CliError> {
    let j = splitting_type(&t.restrict_to_exceptional())?;
    Ok(Report::ok(json!({ "j": j }), format!("j = {j}")))
}

pub fn equivalent_cmd(
    t: &TransitionMatrix2,
    t2: &TransitionMatrix2,
    order: Option<u32>,
    width: Option<i64>,
) -> Result<Report, CliError> {
    let order = order.unwrap_or_else(|| t.trunc().min(t2.trunc()));
    let report = are_equivalent_with(t, t2, order, &EquivalenceOptions { width })?;
    let (verdict, witness, exit) = match &report.verdict {
        Verdict::Equivalent(w) => ("Equivalent", json!({ "a": matrix_json(&w.a), "c": matrix_json(&w.c) }), 0),
        Verdict::NotEquivalent => ("NotEquivalent", Value::Null, EXIT_NOT_EQUIVALENT),
    };
    let (j1, j2) = report.splitting_types;
    let value = json!({
        "verdict": verdict,
        "order": report.order,
        "splitting_types": [j1, j2],
        "bounds": { "width": report.bounds.width },
        "witness": witness,
    });
    let summary = format!(
        "{verdict} at order {} (j = {j1}, {j2}; degree width {})",
        report.order, report.bounds.width
    );
    Ok(Report { value, summary, exit })
}

fn pq_name(pq: PqAssignment) -> &'static str {
    match pq {
        PqAssignment::SplitIsP => "split-is-p",
        PqAssignment::SplitIsQ => "split-is-q",
    }
}

pub fn classify_cmd(t: &TransitionMatrix2, pq: PqAssignment) -> Result<Report, CliError> {
    let j = splitting_type(&t.restrict_to_exceptional())?;
    if j <= 1 {
        let value = json!({
            "j": j,
            "unique_point": true,
            "depth": Value::Null,
            "class": Value::Null,
            "partial": false,
        });
        return Ok(Report::ok(value, format!("j = {j}: the unique point of M_{j}")));
    }
    let (k, _) = canonicalize(t)?;
    let point = classify(&k);
    let mut value = json!({
        "j": j,
        "unique_point": false,
        "depth": point.depth,
        "class": point.class.as_ref().map(projective_json),
        "partial": point.partial,
    });
    let mut summary = point.to_string();
    if point.partial {
        summary.push_str(" (partial)");
    }
    if j == 2 {
        let tag = m2_classify(&k)?;
        let label = match &tag {
            blowup_core::moduli::M2Point::Generic(_) => "GENERIC",
            blowup_core::moduli::M2Point::Q => "Q",
            blowup_core::moduli::M2Point::Split => "SPLIT",
        };
        let top = match blowup_core::moduli::M2TopPoint::from_stratum(&tag, pq) {
            blowup_core::moduli::M2TopPoint::P => "p",
            blowup_core::moduli::M2TopPoint::Q => "q",
            blowup_core::moduli::M2TopPoint::Line(_) => "P1",
        };
        value["m2"] = json!({ "tag": label, "point": top, "p_q_assignment": pq_name(pq) });
        summary = format!("{summary}; M2 {tag} ({top}, {})", pq_name(pq));
    }
    Ok(Report::ok(value, summary))
}

/// Parse `--depth`: a positive integer or `split`.
pub fn parse_depth(s: &str) -> Result<Option<u32>, String> {
    if s == "split" {
        return Ok(None);
    }
    match s.parse::<u32>() {
        Ok(0) | Err(_) => Err(format!("depth must be a positive integer or 'split', got {s:?}")),
        Ok(d) => Ok(Some(d)),
    }
}

pub fn sample_cmd(j: u32, depth: Option<u32>, seed: u64, count: usize, trunc: Option<u32>) -> Result<Report, CliError> {
    let trunc = trunc.unwrap_or_else(|| default_trunc(j));
    if let Some(d) = depth {
        if j < 2 || d > 2 * j - 2 {
            return Err(CliError::Input(format!("depth {d} is outside 1..={} for j = {j}", (2 * j).saturating_sub(2))));
        }
    }
    let mut rng = seeded(seed);
    let docs: Vec<BundleDocument> = (0..count)
        .map(|_| {
            let k = random_canonical(&mut rng, j, depth, trunc, 3);
            BundleDocument::from_matrix(&k.to_matrix(), Some(j))
        })
        .collect();
    let summary = format!("{count} canonical forms with j = {j}, seed {seed}");
    Ok(Report::ok(json!(docs), summary))
}

pub fn oracle_check_cmd(seed: u64, count: usize) -> Result<Report, CliError> {
    let outcomes = run_oracle_checks(seed, count);
    let passed = outcomes.iter().all(|o| o.passed());
    let props: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            json!({
                "name": o.name,
                "passed": o.passed(),
                "cases": o.cases,
                "failures": o.failures,
                "first_failure": o.first_failure,
            })
        })
        .collect();
    let summary = outcomes
        .iter()
        .map(|o| format!("{} {} ({}/{})", if o.passed() { "PASS" } else { "FAIL" }, o.name, o.cases - o.failures, o.cases))
        .collect::<Vec<_>>()
        .join("\n");
    let value = json!({ "seed": seed, "count": count, "passed": passed, "properties": props });
    Ok(Report { value, summary, exit: if passed { 0 } else { EXIT_INTERNAL } })
}
