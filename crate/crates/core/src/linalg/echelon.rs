use super::scalar::{Field, Scalar};
use super::sparse::{self, Accumulator, SparseVec};

/// Incrementally maintained reduced row echelon basis of a subspace of `K^width`.
///
/// Every stored row has a leading 1 at its pivot and zeros in all other pivot
/// columns, so the basis (sorted by pivot) is the canonical RREF of the span
/// regardless of insertion order.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    width: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
    pivot_row: Vec<usize>,
    acc: Accumulator,
}

const NONE: usize = usize::MAX;

impl Echelon {
    pub fn new(field: Field, width: usize) -> Self {
        Echelon {
            field,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: vec![NONE; width],
            acc: Accumulator::new(field, width),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col] != NONE
    }

    /// Residue of `v` modulo the span; zero iff `v` lies in the span.
    pub fn reduce(&mut self, v: &SparseVec) -> SparseVec {
        let mut any = false;
        for (c, _) in v {
            if self.pivot_row[*c] != NONE {
                any = true;
                break;
            }
        }
        if !any {
            return v.clone();
        }
        for (c, x) in v {
            self.acc.add(*c, x);
        }
        for (c, x) in v {
            let r = self.pivot_row[*c];
            if r != NONE {
                self.acc.add_scaled(&x.neg(), &self.rows[r]);
            }
        }
        self.acc.take()
    }

    pub fn contains(&mut self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let pivot = r[0].0;
        let inv = r[0].1.inv().expect("nonzero leading entry");
        let r = sparse::scale(&r, &inv);
        for row in self.rows.iter_mut() {
            if let Some(x) = sparse::get(row, pivot) {
                let x = x.neg();
                *row = sparse::axpy(row, &x, &r);
            }
        }
        self.pivot_row[pivot] = self.rows.len();
        self.pivots.push(pivot);
        self.rows.push(r);
        true
    }

    /// `(pivot, row)` pairs sorted by pivot column.
    pub fn sorted_rows(&self) -> Vec<(usize, &SparseVec)> {
        let mut out: Vec<_> = self.pivots.iter().copied().zip(self.rows.iter()).collect();
        out.sort_by_key(|(p, _)| *p);
        out
    }

    pub fn pivots_sorted(&self) -> Vec<usize> {
        let mut p = self.pivots.clone();
        p.sort_unstable();
        p
    }

    pub fn row_for_pivot(&self, col: usize) -> Option<&SparseVec> {
        match self.pivot_row[col] {
            NONE => None,
            r => Some(&self.rows[r]),
        }
    }

    pub fn dense_reduce(&mut self, v: &[Scalar]) -> SparseVec {
        self.reduce(&sparse::from_dense(v))
    }
}
