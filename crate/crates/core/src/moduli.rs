//! Points of the moduli of bundles with fixed splitting type, and the
//! topology of the `j = 2` space `M_2 = P^1 ∪ {p, q}`.

use std::fmt;

use num_traits::Zero;

use crate::algebra::ProjectiveVector;
use crate::canonical::{window_size, CanonicalForm};
use crate::error::{Error, Result};

/// Stratum and class of a canonical form.
///
/// `depth` is the smallest `u`-order with a nonzero window coefficient
/// (`None` for the split bundle), `class` the projectivized coefficients of
/// that level. `partial` marks forms whose first neighbourhood is already
/// split, i.e. the ones not distinguished at order one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuliPoint {
    pub j: u32,
    pub depth: Option<u32>,
    pub class: Option<ProjectiveVector>,
    pub partial: bool,
}

impl ModuliPoint {
    pub fn is_split(&self) -> bool {
        self.depth.is_none()
    }

    /// For `j <= 1` the moduli space is a single point.
    pub fn is_unique_point(&self) -> bool {
        self.j <= 1
    }

    /// Dimension of the stratum this point lies in: `2j-2-i` for depth `i`,
    /// zero for the split bundle.
    pub fn stratum_dimension(&self) -> usize {
        match self.depth {
            Some(i) => (2 * self.j - 2 - i) as usize,
            None => 0,
        }
    }
}

impl fmt::Display for ModuliPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.depth, &self.class) {
            (Some(i), Some(c)) => write!(f, "j={} depth={} class={}", self.j, i, c),
            _ => write!(f, "j={} split", self.j),
        }
    }
}

pub fn classify(k: &CanonicalForm) -> ModuliPoint {
    let j = k.j();
    let depth = (1..=k.trunc()).find(|&i| k.level(i).iter().any(|c| !c.is_zero()));
    let class = depth.and_then(|i| ProjectiveVector::from_affine(&k.level(i)));
    ModuliPoint {
        j,
        depth,
        class,
        partial: depth.is_some_and(|i| i > 1),
    }
}

/// Stratum sizes for splitting type `j >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionCount {
    /// `|W(j)|`, the number of canonical coefficients.
    pub window_size: usize,
    /// Dimension of the generic (depth one) stratum, `2j-3`.
    pub generic: usize,
    /// Dimensions `2j-2-i` of the depth-`i` strata, `i = 2..=2j-2`.
    pub deeper: Vec<usize>,
}

pub fn dimension_count(j: u32) -> Result<DimensionCount> {
    if j < 2 {
        return Err(Error::InvalidArgument(format!("dimension count needs j >= 2, got {j}")));
    }
    let top = 2 * j as usize - 2;
    Ok(DimensionCount {
        window_size: window_size(j),
        generic: top - 1,
        deeper: (2..=top).map(|i| top - i).collect(),
    })
}

/// Stratum of a `j = 2` bundle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum M2Point {
    /// First neighbourhood nontrivial; the point of `P^1` is its class.
    Generic(ProjectiveVector),
    /// Split on the first neighbourhood, nontrivial at order two.
    Q,
    Split,
}

impl fmt::Display for M2Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            M2Point::Generic(c) => write!(f, "GENERIC{c}"),
            M2Point::Q => write!(f, "Q"),
            M2Point::Split => write!(f, "SPLIT"),
        }
    }
}

pub fn m2_classify(k: &CanonicalForm) -> Result<M2Point> {
    if k.j() != 2 {
        return Err(Error::InvalidArgument(format!("M2 classification needs j = 2, got {}", k.j())));
    }
    let m = classify(k);
    Ok(match (m.depth, m.class) {
        (Some(1), Some(c)) => M2Point::Generic(c),
        (Some(_), _) => M2Point::Q,
        _ => M2Point::Split,
    })
}

/// Which of the two special strata plays the role of `p` (the point whose
/// closure contains the other). The default is `p = SPLIT`, `q = Q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PqAssignment {
    #[default]
    SplitIsP,
    SplitIsQ,
}

/// A point of the topological space `P^1 ∪ {p, q}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum M2TopPoint {
    Line(ProjectiveVector),
    P,
    Q,
}

impl M2TopPoint {
    pub fn from_stratum(x: &M2Point, pq: PqAssignment) -> Self {
        match (x, pq) {
            (M2Point::Generic(c), _) => M2TopPoint::Line(c.clone()),
            (M2Point::Split, PqAssignment::SplitIsP) | (M2Point::Q, PqAssignment::SplitIsQ) => M2TopPoint::P,
            _ => M2TopPoint::Q,
        }
    }
}

fn is_p1_point(v: &ProjectiveVector) -> bool {
    v.coords().len() == 2
}

/// A finite or cofinite subset of `P^1`.
#[derive(Clone, Debug)]
pub enum P1Region {
    Finite(Vec<ProjectiveVector>),
    /// Everything except the listed points.
    Cofinite(Vec<ProjectiveVector>),
}

fn dedup(mut v: Vec<ProjectiveVector>) -> Vec<ProjectiveVector> {
    let mut out: Vec<ProjectiveVector> = Vec::with_capacity(v.len());
    for x in v.drain(..) {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn union_sets(a: &[ProjectiveVector], b: &[ProjectiveVector]) -> Vec<ProjectiveVector> {
    dedup(a.iter().chain(b).cloned().collect())
}

fn inter_sets(a: &[ProjectiveVector], b: &[ProjectiveVector]) -> Vec<ProjectiveVector> {
    a.iter().filter(|x| b.contains(x)).cloned().collect()
}

fn minus_sets(a: &[ProjectiveVector], b: &[ProjectiveVector]) -> Vec<ProjectiveVector> {
    a.iter().filter(|x| !b.contains(x)).cloned().collect()
}

impl P1Region {
    pub fn empty() -> Self {
        P1Region::Finite(Vec::new())
    }

    pub fn all() -> Self {
        P1Region::Cofinite(Vec::new())
    }

    fn points(&self) -> &[ProjectiveVector] {
        match self {
            P1Region::Finite(v) | P1Region::Cofinite(v) => v,
        }
    }

    fn validate(self) -> Result<Self> {
        if let Some(bad) = self.points().iter().find(|v| !is_p1_point(v)) {
            return Err(Error::UnsupportedSubsetDescription(format!("{bad} is not a point of P^1")));
        }
        Ok(match self {
            P1Region::Finite(v) => P1Region::Finite(dedup(v)),
            P1Region::Cofinite(v) => P1Region::Cofinite(dedup(v)),
        })
    }

    pub fn contains(&self, x: &ProjectiveVector) -> bool {
        match self {
            P1Region::Finite(v) => v.contains(x),
            P1Region::Cofinite(v) => !v.contains(x),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, P1Region::Finite(v) if v.is_empty())
    }

    /// Open sets of `P^1` in this algebra are the empty set and the
    /// cofinite sets.
    pub fn is_open(&self) -> bool {
        self.is_empty() || matches!(self, P1Region::Cofinite(_))
    }

    /// Dense iff infinite, i.e. cofinite.
    pub fn is_dense(&self) -> bool {
        matches!(self, P1Region::Cofinite(_))
    }

    pub fn closure(&self) -> Self {
        match self {
            P1Region::Finite(v) => P1Region::Finite(v.clone()),
            P1Region::Cofinite(_) => P1Region::all(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        use P1Region::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(union_sets(a, b)),
            (Cofinite(a), Cofinite(b)) => Cofinite(inter_sets(a, b)),
            (Finite(f), Cofinite(c)) | (Cofinite(c), Finite(f)) => Cofinite(minus_sets(c, f)),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        use P1Region::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(inter_sets(a, b)),
            (Cofinite(a), Cofinite(b)) => Cofinite(union_sets(a, b)),
            (Finite(f), Cofinite(c)) | (Cofinite(c), Finite(f)) => Finite(minus_sets(f, c)),
        }
    }
}

impl PartialEq for P1Region {
    fn eq(&self, other: &Self) -> bool {
        use P1Region::*;
        let same = |a: &[ProjectiveVector], b: &[ProjectiveVector]| a.len() == b.len() && a.iter().all(|x| b.contains(x));
        match (self, other) {
            (Finite(a), Finite(b)) | (Cofinite(a), Cofinite(b)) => same(a, b),
            _ => false,
        }
    }
}

/// A subset of `M_2`, in normalized form.
#[derive(Clone, Debug, PartialEq)]
pub struct M2Subset {
    pub line: P1Region,
    pub p: bool,
    pub q: bool,
}

impl M2Subset {
    pub fn empty() -> Self {
        Self { line: P1Region::empty(), p: false, q: false }
    }

    pub fn whole() -> Self {
        Self { line: P1Region::all(), p: true, q: true }
    }

    pub fn contains(&self, x: &M2TopPoint) -> bool {
        match x {
            M2TopPoint::Line(v) => self.line.contains(v),
            M2TopPoint::P => self.p,
            M2TopPoint::Q => self.q,
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        Self { line: self.line.union(&other.line), p: self.p || other.p, q: self.q || other.q }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self { line: self.line.intersection(&other.line), p: self.p && other.p, q: self.q && other.q }
    }

    /// Open iff a union of basic opens `V`, `V ∪ {p}`, `V ∪ {p, q}` with
    /// `V` open in `P^1` (nonempty for the last two): `p` needs a nonempty
    /// line part, and `q` needs `p` as well.
    pub fn is_open(&self) -> bool {
        if !self.line.is_open() {
            return false;
        }
        if (self.p || self.q) && self.line.is_empty() {
            return false;
        }
        !self.q || self.p
    }

    /// Every open neighbourhood of `p` or `q` contains a cofinite part of
    /// `P^1`, and every neighbourhood of `q` contains `p`.
    pub fn closure(&self) -> Self {
        let dense = self.line.is_dense();
        Self {
            line: self.line.closure(),
            p: self.p || dense,
            q: self.q || self.p || dense,
        }
    }
}

impl fmt::Display for M2Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[ProjectiveVector]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        match &self.line {
            P1Region::Finite(v) => write!(f, "{{{}}}", list(v))?,
            P1Region::Cofinite(v) if v.is_empty() => write!(f, "P1")?,
            P1Region::Cofinite(v) => write!(f, "P1 \\ {{{}}}", list(v))?,
        }
        if self.p {
            write!(f, " + p")?;
        }
        if self.q {
            write!(f, " + q")?;
        }
        Ok(())
    }
}

/// One piece of a subset description; a description is the union of its
/// pieces.
#[derive(Clone, Debug, PartialEq)]
pub enum M2Piece {
    Line(P1Region),
    /// `V ∪ {p}`.
    WithP(P1Region),
    /// `V ∪ {p, q}`.
    WithPQ(P1Region),
    Points(Vec<M2TopPoint>),
}

/// Normalize a description. Fails with
/// [`Error::UnsupportedSubsetDescription`] on points that do not live on
/// `P^1`.
pub fn m2_subset(pieces: &[M2Piece]) -> Result<M2Subset> {
    let mut out = M2Subset::empty();
    for piece in pieces {
        let part = match piece.clone() {
            M2Piece::Line(r) => M2Subset { line: r.validate()?, p: false, q: false },
            M2Piece::WithP(r) => M2Subset { line: r.validate()?, p: true, q: false },
            M2Piece::WithPQ(r) => M2Subset { line: r.validate()?, p: true, q: true },
            M2Piece::Points(pts) => {
                let mut s = M2Subset::empty();
                let mut line = Vec::new();
                for x in pts {
                    match x {
                        M2TopPoint::Line(v) => line.push(v),
                        M2TopPoint::P => s.p = true,
                        M2TopPoint::Q => s.q = true,
                    }
                }
                s.line = P1Region::Finite(line).validate()?;
                s
            }
        };
        out = out.union(&part);
    }
    Ok(out)
}

pub fn m2_is_open(pieces: &[M2Piece]) -> Result<bool> {
    Ok(m2_subset(pieces)?.is_open())
}

pub fn m2_closure(pieces: &[M2Piece]) -> Result<M2Subset> {
    Ok(m2_subset(pieces)?.closure())
}

/// Whether two distinct points have disjoint open neighbourhoods. Only
/// `{p, q}` fails: every neighbourhood of `q` contains `p`. A point is never
/// separable from itself.
pub fn m2_separable_points(x: &M2TopPoint, y: &M2TopPoint) -> bool {
    if x == y {
        return false;
    }
    !matches!((x, y), (M2TopPoint::P, M2TopPoint::Q) | (M2TopPoint::Q, M2TopPoint::P))
}

pub fn m2_separable(x: &M2Point, y: &M2Point, pq: PqAssignment) -> bool {
    m2_separable_points(&M2TopPoint::from_stratum(x, pq), &M2TopPoint::from_stratum(y, pq))
}
