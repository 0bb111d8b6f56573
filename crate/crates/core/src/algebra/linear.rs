//! Exact sparse linear systems over `Q(i)`.
//!
//! Rows are kept in reduced row echelon form as they are added, so the
//! solver is incremental: every inserted equation is reduced against the
//! existing pivots, and a new pivot is eliminated from all earlier rows.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::scalar::ExactScalar;

pub type SparseRow = BTreeMap<usize, ExactScalar>;

/// Solution set of `M·x = b`: `particular + span(kernel)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSolution {
    pub particular: Vec<ExactScalar>,
    pub kernel: Vec<Vec<ExactScalar>>,
}

#[derive(Clone, Debug)]
pub struct LinearSystem {
    num_vars: usize,
    /// pivot column -> (row with 1 at the pivot, rhs)
    rows: BTreeMap<usize, (SparseRow, ExactScalar)>,
    inconsistent: bool,
}

fn axpy(target: &mut SparseRow, factor: &ExactScalar, row: &SparseRow) {
    for (col, v) in row {
        let entry = target.entry(*col).or_insert_with(ExactScalar::zero);
        *entry -= &(factor * v);
        if entry.is_zero() {
            target.remove(col);
        }
    }
}

impl LinearSystem {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            rows: BTreeMap::new(),
            inconsistent: false,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    /// Add the equation `sum row[k]·x_k = rhs`. Zero entries in `row` are
    /// ignored.
    pub fn add_equation(&mut self, mut row: SparseRow, mut rhs: ExactScalar) {
        row.retain(|_, v| !v.is_zero());
        debug_assert!(row.keys().all(|&c| c < self.num_vars));

        let hits: Vec<usize> = row.keys().filter(|c| self.rows.contains_key(c)).copied().collect();
        for col in hits {
            let Some(factor) = row.get(&col).cloned() else { continue };
            let (prow, prhs) = &self.rows[&col];
            axpy(&mut row, &factor, prow);
            rhs -= &(&factor * prhs);
        }

        let Some((&pivot, lead)) = row.iter().next() else {
            if !rhs.is_zero() {
                self.inconsistent = true;
            }
            return;
        };
        let inv = lead.inv().expect("nonzero pivot");
        for v in row.values_mut() {
            *v = &*v * &inv;
        }
        rhs = &rhs * &inv;

        for (prow, prhs) in self.rows.values_mut() {
            if let Some(factor) = prow.get(&pivot).cloned() {
                axpy(prow, &factor, &row);
                *prhs -= &(&factor * &rhs);
            }
        }
        self.rows.insert(pivot, (row, rhs));
    }

    pub fn add_homogeneous(&mut self, row: SparseRow) {
        self.add_equation(row, ExactScalar::zero());
    }

    /// Full solution set, `None` when inconsistent.
    pub fn solve(&self) -> Option<AffineSolution> {
        if self.inconsistent {
            return None;
        }
        let mut particular = vec![ExactScalar::zero(); self.num_vars];
        for (pivot, (_, rhs)) in &self.rows {
            particular[*pivot] = rhs.clone();
        }
        Some(AffineSolution {
            particular,
            kernel: self.kernel(),
        })
    }

    /// Basis of the null space of the coefficient matrix, one vector per
    /// free column, in ascending column order.
    pub fn kernel(&self) -> Vec<Vec<ExactScalar>> {
        let mut basis = Vec::new();
        for free in (0..self.num_vars).filter(|c| !self.rows.contains_key(c)) {
            let mut v = vec![ExactScalar::zero(); self.num_vars];
            v[free] = ExactScalar::one();
            for (pivot, (row, _)) in &self.rows {
                if let Some(x) = row.get(&free) {
                    v[*pivot] = -x;
                }
            }
            basis.push(v);
        }
        basis
    }
}
