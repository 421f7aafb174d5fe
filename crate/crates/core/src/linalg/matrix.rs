use std::fmt;

use super::echelon::Echelon;
use super::scalar::{Field, Scalar};
use super::sparse::{self, Accumulator, SparseVec};
use crate::error::{Error, Result};

/// Sparse row-major matrix over an exact field. Column vectors are acted on
/// from the left: a `rows x cols` matrix maps `K^cols` to `K^rows`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Matrix {
            field,
            rows: n,
            cols: n,
            data: (0..n).map(|i| vec![(i, field.one())]).collect(),
        }
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(field: Field, diag: &[Scalar]) -> Self {
        Matrix {
            field,
            rows: diag.len(),
            cols: diag.len(),
            data: diag
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    if x.is_zero() {
                        Vec::new()
                    } else {
                        vec![(i, x.clone())]
                    }
                })
                .collect(),
        }
    }

    pub fn from_sparse_rows(field: Field, rows: usize, cols: usize, data: Vec<SparseVec>) -> Self {
        debug_assert_eq!(data.len(), rows);
        debug_assert!(data
            .iter()
            .all(|r| r.iter().all(|(c, x)| *c < cols && !x.is_zero())));
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Builds a matrix from `(row, col, value)` triples; repeated positions are summed.
    pub fn from_triplets(
        field: Field,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Self {
        let mut per_row: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); rows];
        for (r, c, x) in triplets {
            assert!(
                r < rows && c < cols,
                "triplet ({r},{c}) outside {rows}x{cols}"
            );
            per_row[r].push((c, x));
        }
        let mut acc = Accumulator::new(field, cols);
        let data = per_row
            .into_iter()
            .map(|entries| {
                for (c, x) in &entries {
                    acc.add(*c, x);
                }
                acc.take()
            })
            .collect();
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn from_dense(field: Field, rows: &[Vec<Scalar>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len());
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "ragged row of length {} (expected {cols})",
                    r.len()
                )));
            }
            if let Some(x) = r.iter().find(|x| x.field() != field) {
                return Err(Error::FieldMismatch {
                    expected: field,
                    found: x.field(),
                });
            }
            data.push(sparse::from_dense(r));
        }
        Ok(Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let dense: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        let mut m = Matrix::from_dense(field, &dense).expect("rectangular input");
        m.cols = cols;
        m
    }

    pub fn column(field: Field, v: &[Scalar]) -> Self {
        Matrix {
            field,
            rows: v.len(),
            cols: 1,
            data: v
                .iter()
                .map(|x| {
                    if x.is_zero() {
                        Vec::new()
                    } else {
                        vec![(0, x.clone())]
                    }
                })
                .collect(),
        }
    }

    /// Matrix whose columns are the given dense vectors of length `rows`.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let triplets = columns.iter().enumerate().flat_map(|(c, col)| {
            col.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(move |(r, x)| (r, c, x.clone()))
        });
        Matrix::from_triplets(field, rows, columns.len(), triplets)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, r: usize) -> &SparseVec {
        &self.data[r]
    }

    pub fn row_data(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        sparse::get(&self.data[r], c)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self
                .data
                .iter()
                .enumerate()
                .all(|(i, r)| r.len() == 1 && r[0].0 == i && r[0].1.is_one())
    }

    /// Iterates over nonzero entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, x)| (r, *c, x)))
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        self.data
            .iter()
            .map(|r| sparse::to_dense(self.field, r, self.cols))
            .collect()
    }

    pub fn column_sparse(&self, c: usize) -> SparseVec {
        self.data
            .iter()
            .enumerate()
            .filter_map(|(r, row)| sparse::get(row, c).map(|x| (r, x.clone())))
            .collect()
    }

    pub fn column_vec(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        let t = self.transpose();
        t.data
            .iter()
            .map(|r| sparse::to_dense(self.field, r, self.rows))
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut data: Vec<SparseVec> = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, x) in row {
                data[*c].push((r, x.clone()));
            }
        }
        Matrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    fn check_same_shape(&self, other: &Matrix) {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.check_same_shape(other);
        let one = self.field.one();
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| sparse::axpy(a, &one, b))
            .collect();
        self.with_data(data)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.check_same_shape(other);
        let m1 = self.field.from_i64(-1);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| sparse::axpy(a, &m1, b))
            .collect();
        self.with_data(data)
    }

    pub fn scale(&self, a: &Scalar) -> Matrix {
        let data = self.data.iter().map(|r| sparse::scale(r, a)).collect();
        self.with_data(data)
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&self.field.from_i64(-1))
    }

    fn with_data(&self, data: Vec<SparseVec>) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!(
            self.cols, other.rows,
            "inner dimension mismatch {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut acc = Accumulator::new(self.field, other.cols);
        let data = self
            .data
            .iter()
            .map(|row| {
                for (k, x) in row {
                    acc.add_scaled(x, &other.data[*k]);
                }
                acc.take()
            })
            .collect();
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        self.data
            .iter()
            .map(|r| sparse::dot_dense(r, v, self.field))
            .collect()
    }

    pub fn apply_sparse(&self, v: &SparseVec) -> SparseVec {
        // column access through the transpose would be cheaper for repeated use
        let mut acc = Accumulator::new(self.field, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            let mut s = self.field.zero();
            let (mut i, mut j) = (0, 0);
            while i < row.len() && j < v.len() {
                match row[i].0.cmp(&v[j].0) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        s = s.add(&row[i].1.mul(&v[j].1));
                        i += 1;
                        j += 1;
                    }
                }
            }
            acc.add(r, &s);
        }
        acc.take()
    }

    /// Kronecker product with index `(i, j) -> i * other.rows + j` on rows, likewise on columns.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "field mismatch");
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = Vec::with_capacity(rows);
        for a in &self.data {
            for b in &other.data {
                let mut row = Vec::with_capacity(a.len() * b.len());
                for (ca, xa) in a {
                    for (cb, xb) in b {
                        row.push((ca * other.cols + cb, xa.mul(xb)));
                    }
                }
                data.push(row);
            }
        }
        Matrix {
            field: self.field,
            rows,
            cols,
            data,
        }
    }

    pub fn hstack(blocks: &[&Matrix]) -> Matrix {
        let first = blocks.first().expect("at least one block");
        let rows = first.rows;
        let mut data: Vec<SparseVec> = vec![Vec::new(); rows];
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            for (r, row) in b.data.iter().enumerate() {
                data[r].extend(row.iter().map(|(c, x)| (c + off, x.clone())));
            }
            off += b.cols;
        }
        Matrix {
            field: first.field,
            rows,
            cols: off,
            data,
        }
    }

    pub fn vstack(blocks: &[&Matrix]) -> Matrix {
        let first = blocks.first().expect("at least one block");
        let cols = first.cols;
        let mut data = Vec::new();
        for b in blocks {
            assert_eq!(b.cols, cols);
            data.extend(b.data.iter().cloned());
        }
        Matrix {
            field: first.field,
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn block_diag(field: Field, blocks: &[&Matrix]) -> Matrix {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut data = Vec::with_capacity(rows);
        let mut off = 0;
        for b in blocks {
            for row in &b.data {
                data.push(row.iter().map(|(c, x)| (c + off, x.clone())).collect());
            }
            off += b.cols;
        }
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Submatrix on the given row and column index lists (in that order).
    pub fn select(&self, row_idx: &[usize], col_idx: &[usize]) -> Matrix {
        let mut pos = vec![usize::MAX; self.cols];
        for (k, &c) in col_idx.iter().enumerate() {
            pos[c] = k;
        }
        let data = row_idx
            .iter()
            .map(|&r| {
                let mut row: SparseVec = self.data[r]
                    .iter()
                    .filter(|(c, _)| pos[*c] != usize::MAX)
                    .map(|(c, x)| (pos[*c], x.clone()))
                    .collect();
                row.sort_by_key(|(c, _)| *c);
                row
            })
            .collect();
        Matrix {
            field: self.field,
            rows: row_idx.len(),
            cols: col_idx.len(),
            data,
        }
    }

    /// Places `self` into a larger zero matrix at the given row/column positions.
    pub fn embed(&self, rows: usize, cols: usize, row_pos: &[usize], col_pos: &[usize]) -> Matrix {
        let triplets = self
            .entries()
            .map(|(r, c, x)| (row_pos[r], col_pos[c], x.clone()));
        Matrix::from_triplets(self.field, rows, cols, triplets)
    }

    /// Row echelon data of the row space.
    pub fn row_echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.field, self.cols);
        for r in &self.data {
            e.insert(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        // eliminating along the smaller side is cheaper
        if self.rows <= self.cols {
            self.row_echelon().rank()
        } else {
            self.transpose().row_echelon().rank()
        }
    }

    /// Reduced row echelon form (nonzero rows only, sorted by pivot).
    pub fn rref(&self) -> Matrix {
        let e = self.row_echelon();
        let data: Vec<SparseVec> = e
            .sorted_rows()
            .into_iter()
            .map(|(_, r)| r.clone())
            .collect();
        Matrix {
            field: self.field,
            rows: data.len(),
            cols: self.cols,
            data,
        }
    }

    /// Basis of `{x : self * x = 0}` as the columns of a `cols x k` matrix.
    /// One basis vector per free column, with a 1 there and 0 at the other free columns.
    pub fn kernel(&self) -> Matrix {
        let e = self.row_echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !e.is_pivot(*c)).collect();
        let mut free_pos = vec![usize::MAX; self.cols];
        for (k, &c) in free.iter().enumerate() {
            free_pos[c] = k;
        }
        let mut triplets = Vec::new();
        for (k, &c) in free.iter().enumerate() {
            triplets.push((c, k, self.field.one()));
        }
        for (p, row) in e.sorted_rows() {
            for (c, x) in row {
                if *c != p {
                    triplets.push((p, free_pos[*c], x.neg()));
                }
            }
        }
        Matrix::from_triplets(self.field, self.cols, free.len(), triplets)
    }

    /// Returns `x` with `self * x = b`, or `None` if inconsistent. Free variables are set to zero.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        Ok(Solver::new(self).solve(b))
    }

    /// Cokernel `K^rows / im(self)` with deterministic representatives.
    pub fn cokernel(&self) -> Cokernel {
        let mut e = Echelon::new(self.field, self.rows);
        for col in &self.transpose().data {
            e.insert(col);
        }
        Cokernel::from_echelon(&e)
    }

    pub fn map_entries(&self, f: impl Fn(usize, usize, &Scalar) -> Scalar) -> Matrix {
        let triplets = self.entries().map(|(r, c, x)| (r, c, f(r, c, x)));
        Matrix::from_triplets(
            self.field,
            self.rows,
            self.cols,
            triplets.collect::<Vec<_>>(),
        )
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Cokernel data: `projection` is `k x m`, `section` is `m x k`, with
/// `projection * section = I` and `projection` killing the image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cokernel {
    pub projection: Matrix,
    pub section: Matrix,
    /// Non-pivot coordinates of the ambient space; the quotient basis.
    pub free: Vec<usize>,
}

impl Cokernel {
    /// Quotient of `K^width` by the span held in `e`.
    pub fn from_echelon(e: &Echelon) -> Self {
        let field = e.field();
        let m = e.width();
        let free: Vec<usize> = (0..m).filter(|c| !e.is_pivot(*c)).collect();
        let mut free_pos = vec![usize::MAX; m];
        for (k, &c) in free.iter().enumerate() {
            free_pos[c] = k;
        }
        let mut triplets = Vec::new();
        for (k, &c) in free.iter().enumerate() {
            triplets.push((k, c, field.one()));
        }
        for (p, row) in e.sorted_rows() {
            for (c, x) in row {
                if *c != p {
                    triplets.push((free_pos[*c], p, x.neg()));
                }
            }
        }
        let projection = Matrix::from_triplets(field, free.len(), m, triplets);
        let section = Matrix::from_triplets(
            field,
            m,
            free.len(),
            free.iter().enumerate().map(|(k, &c)| (c, k, field.one())),
        );
        Cokernel {
            projection,
            section,
            free,
        }
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }
}

/// Precomputed elimination for repeated solves `M x = b`.
#[derive(Clone, Debug)]
pub struct Solver {
    field: Field,
    cols: usize,
    rows: usize,
    /// For pivot rows: (pivot column, transformation row over the right-hand side).
    solution_rows: Vec<(usize, SparseVec)>,
    /// Consistency conditions on the right-hand side.
    conditions: Vec<SparseVec>,
}

impl Solver {
    pub fn new(m: &Matrix) -> Self {
        let (rows, cols) = m.shape();
        let mut e = Echelon::new(m.field, cols + rows);
        for (r, row) in m.data.iter().enumerate() {
            let mut aug = row.clone();
            aug.push((cols + r, m.field.one()));
            e.insert(&aug);
        }
        let mut solution_rows = Vec::new();
        let mut conditions = Vec::new();
        for (p, row) in e.sorted_rows() {
            let rhs: SparseVec = row
                .iter()
                .filter(|(c, _)| *c >= cols)
                .map(|(c, x)| (c - cols, x.clone()))
                .collect();
            if p < cols {
                solution_rows.push((p, rhs));
            } else {
                conditions.push(rhs);
            }
        }
        Solver {
            field: m.field,
            cols,
            rows,
            solution_rows,
            conditions,
        }
    }

    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        if self
            .conditions
            .iter()
            .any(|c| !sparse::dot_dense(c, b, self.field).is_zero())
        {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (p, t) in &self.solution_rows {
            x[*p] = sparse::dot_dense(t, b, self.field);
        }
        Some(x)
    }

    pub fn rank(&self) -> usize {
        self.solution_rows.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::zeros(q(), 2, 2).rank(), 0);
        assert_eq!(Matrix::identity(q(), 3).rank(), 3);
        assert_eq!(Matrix::from_i64(q(), &[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn solve_examples() {
        let f = q();
        let x = Matrix::identity(f, 2)
            .solve(&[f.from_i64(1), f.from_i64(2)])
            .unwrap();
        assert_eq!(x, Some(vec![f.from_i64(1), f.from_i64(2)]));
        let none = Matrix::zeros(f, 2, 2)
            .solve(&[f.from_i64(1), f.zero()])
            .unwrap();
        assert_eq!(none, None);
        let free = Matrix::from_i64(f, &[&[1, 1]])
            .solve(&[f.from_i64(3)])
            .unwrap();
        assert_eq!(free, Some(vec![f.from_i64(3), f.zero()]));
        assert!(Matrix::identity(f, 2).solve(&[f.one()]).is_err());
    }

    #[test]
    fn cokernel_examples() {
        let f = q();
        assert_eq!(Matrix::identity(f, 3).cokernel().dim(), 0);
        let zero = Matrix::zeros(f, 2, 1).cokernel();
        assert_eq!(zero.dim(), 2);
        assert!(zero.projection.is_identity());
        let e1 = Matrix::from_i64(f, &[&[1], &[0]]);
        let c = e1.cokernel();
        assert_eq!(c.dim(), 1);
        assert!(c.projection.mul(&e1).is_zero());
        assert_eq!(c.projection.get(0, 0), f.zero());
        assert_eq!(c.projection.get(0, 1), f.one());
    }

    #[test]
    fn kernel_has_complementary_dimension() {
        let m = Matrix::from_i64(q(), &[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        let k = m.kernel();
        assert_eq!(k.cols() + m.rank(), 3);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn kron_matches_index_convention() {
        let f = q();
        let a = Matrix::from_i64(f, &[&[1, 2], &[3, 4]]);
        let b = Matrix::from_i64(f, &[&[0, 5], &[6, 7]]);
        let k = a.kron(&b);
        // (i,j),(k,l) entry = a[i][k] * b[j][l]
        assert_eq!(k.get(2 + 1, 1), f.from_i64(3 * 7));
        assert_eq!(k.get(1, 2 + 1), f.from_i64(2 * 7));
    }
}
