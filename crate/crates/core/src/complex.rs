//! Bounded cochain complexes of finite-dimensional vector spaces.
//!
//! A complex is a graded basis (each basis vector has a degree, in any order)
//! together with one differential matrix on the whole space that raises
//! degree by one. Tensor and hom complexes use the Koszul conventions
//! `d(x ⊗ y) = dx ⊗ y + (-1)^|x| x ⊗ dy` and `d(φ) = d∘φ - (-1)^|φ| φ∘d`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{sparse, Field, Matrix, Scalar, Solver};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Complex {
    field: Field,
    degrees: Vec<i32>,
    d: Matrix,
}

/// Outcome of [`Complex::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexReport {
    /// Degrees `n` with `d^{n+1} ∘ d^n != 0`.
    pub failing_degrees: Vec<i32>,
}

impl ComplexReport {
    pub fn passed(&self) -> bool {
        self.failing_degrees.is_empty()
    }
}

impl Complex {
    /// Builds a complex; the differential must raise degree by exactly one.
    /// `d² = 0` is not checked here (see [`Complex::validate`]).
    pub fn new(field: Field, degrees: Vec<i32>, d: Matrix) -> Result<Self> {
        let n = degrees.len();
        if d.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "differential is {:?} for a space of dimension {n}",
                d.shape()
            )));
        }
        if d.field() != field {
            return Err(Error::FieldMismatch {
                expected: field,
                found: d.field(),
            });
        }
        if let Some((r, c, _)) = d.entries().find(|(r, c, _)| degrees[*r] != degrees[*c] + 1) {
            return Err(Error::InvalidInput(format!(
                "differential entry ({r},{c}) maps degree {} to degree {}",
                degrees[c], degrees[r]
            )));
        }
        Ok(Complex { field, degrees, d })
    }

    pub(crate) fn new_unchecked(field: Field, degrees: Vec<i32>, d: Matrix) -> Self {
        debug_assert!(d.entries().all(|(r, c, _)| degrees[r] == degrees[c] + 1));
        Complex { field, degrees, d }
    }

    pub fn zero(field: Field) -> Self {
        Complex {
            field,
            degrees: Vec::new(),
            d: Matrix::zeros(field, 0, 0),
        }
    }

    /// `K[0]`: one basis vector in degree 0.
    pub fn unit(field: Field) -> Self {
        Complex::with_zero_differential(field, vec![0])
    }

    pub fn with_zero_differential(field: Field, degrees: Vec<i32>) -> Self {
        let n = degrees.len();
        Complex {
            field,
            degrees,
            d: Matrix::zeros(field, n, n),
        }
    }

    /// `K` in `degree` and `degree + 1` with differential `1`: a contractible complex.
    pub fn contractible(field: Field, degree: i32) -> Self {
        Complex {
            field,
            degrees: vec![degree, degree + 1],
            d: Matrix::from_triplets(field, 2, 2, [(1, 0, field.one())]),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn d(&self) -> &Matrix {
        &self.d
    }

    /// Basis indices of degree `n`, increasing.
    pub fn indices_in(&self, n: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == n).collect()
    }

    pub fn dim_in(&self, n: i32) -> usize {
        self.degrees.iter().filter(|&&k| k == n).count()
    }

    /// Minimal window `[lo, hi]` containing all basis vectors.
    pub fn support(&self) -> Option<(i32, i32)> {
        let lo = *self.degrees.iter().min()?;
        let hi = *self.degrees.iter().max()?;
        Some((lo, hi))
    }

    /// Dimensions per degree over the support window.
    pub fn dims(&self) -> BTreeMap<i32, usize> {
        let mut m = BTreeMap::new();
        for &k in &self.degrees {
            *m.entry(k).or_insert(0) += 1;
        }
        m
    }

    /// `(-1)^{deg}` on the diagonal.
    pub fn parity_matrix(&self) -> Matrix {
        let diag: Vec<Scalar> = self
            .degrees
            .iter()
            .map(|&k| self.field.sign(k as i64))
            .collect();
        Matrix::diagonal(self.field, &diag)
    }

    /// The shift `X[k]` with `X[k]^n = X^{n+k}` and differential `(-1)^k d`.
    pub fn shift(&self, k: i32) -> Complex {
        Complex {
            field: self.field,
            degrees: self.degrees.iter().map(|&n| n - k).collect(),
            d: self.d.scale(&self.field.sign(k as i64)),
        }
    }

    pub fn direct_sum(field: Field, parts: &[&Complex]) -> Complex {
        let degrees = parts
            .iter()
            .flat_map(|c| c.degrees.iter().copied())
            .collect();
        let blocks: Vec<&Matrix> = parts.iter().map(|c| &c.d).collect();
        Complex {
            field,
            degrees,
            d: Matrix::block_diag(field, &blocks),
        }
    }

    /// `X ⊗ Y` with basis `x_i ⊗ y_j` at index `i * dim(Y) + j`.
    pub fn tensor(x: &Complex, y: &Complex) -> Result<Complex> {
        if x.field != y.field {
            return Err(Error::FieldMismatch {
                expected: x.field,
                found: y.field,
            });
        }
        let f = x.field;
        let degrees = x
            .degrees
            .iter()
            .flat_map(|&a| y.degrees.iter().map(move |&b| a + b))
            .collect();
        let d =
            x.d.kron(&Matrix::identity(f, y.dim()))
                .add(&x.parity_matrix().kron(&y.d));
        Ok(Complex {
            field: f,
            degrees,
            d,
        })
    }

    /// Hom complex: basis `E_{rc}` (r in Y, c in X) at index `r * dim(X) + c`,
    /// of degree `|y_r| - |x_c|`.
    pub fn hom(x: &Complex, y: &Complex) -> Result<Complex> {
        if x.field != y.field {
            return Err(Error::FieldMismatch {
                expected: x.field,
                found: y.field,
            });
        }
        let f = x.field;
        let degrees: Vec<i32> = y
            .degrees
            .iter()
            .flat_map(|&r| x.degrees.iter().map(move |&c| r - c))
            .collect();
        let signs: Vec<Scalar> = degrees.iter().map(|&k| f.sign(k as i64)).collect();
        let post = y.d.kron(&Matrix::identity(f, x.dim()));
        let pre = Matrix::identity(f, y.dim())
            .kron(&x.d.transpose())
            .mul(&Matrix::diagonal(f, &signs));
        Ok(Complex {
            field: f,
            degrees,
            d: post.sub(&pre),
        })
    }

    /// Reads a hom-complex vector back as a `dim(Y) x dim(X)` matrix.
    pub fn hom_vector_to_matrix(x: &Complex, y: &Complex, v: &[Scalar]) -> Matrix {
        let n = x.dim();
        let triplets = v
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(k, a)| (k / n, k % n, a.clone()));
        Matrix::from_triplets(x.field, y.dim(), x.dim(), triplets.collect::<Vec<_>>())
    }

    pub fn matrix_to_hom_vector(x: &Complex, y: &Complex, m: &Matrix) -> Vec<Scalar> {
        let mut v = vec![x.field.zero(); x.dim() * y.dim()];
        for (r, c, a) in m.entries() {
            v[r * x.dim() + c] = a.clone();
        }
        v
    }

    pub fn validate(&self) -> ComplexReport {
        let dd = self.d.mul(&self.d);
        let mut failing: Vec<i32> = dd.entries().map(|(_, c, _)| self.degrees[c]).collect();
        failing.sort_unstable();
        failing.dedup();
        ComplexReport {
            failing_degrees: failing,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passed()
    }

    /// Total rank of the differential (sum over all degrees).
    pub fn differential_rank(&self) -> usize {
        self.d.rank()
    }

    pub fn is_acyclic(&self) -> bool {
        2 * self.differential_rank() == self.dim()
    }

    /// `H^n` with deterministic representatives; fails on an invalid complex.
    pub fn cohomology(&self, n: i32) -> Result<Cohomology> {
        if !self.is_valid() {
            return Err(Error::InvalidInput(
                "cohomology of a complex with d² ≠ 0".into(),
            ));
        }
        Ok(Cohomology::compute(self, n))
    }

    /// `dim H^n` for every degree in the support.
    pub fn betti(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        let Some((lo, hi)) = self.support() else {
            return out;
        };
        for n in lo..=hi {
            let here = self.indices_in(n);
            let next = self.indices_in(n + 1);
            let prev = self.indices_in(n - 1);
            let rank_out = self.d.select(&next, &here).rank();
            let rank_in = self.d.select(&here, &prev).rank();
            out.insert(n, here.len() - rank_out - rank_in);
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees
            .iter()
            .map(|&k| if k.rem_euclid(2) == 0 { 1 } else { -1 })
            .sum()
    }

    pub fn cohomology_euler_characteristic(&self) -> i64 {
        self.betti()
            .iter()
            .map(|(&k, &b)| {
                if k.rem_euclid(2) == 0 {
                    b as i64
                } else {
                    -(b as i64)
                }
            })
            .sum()
    }

    /// Permutes the basis: new basis vector `i` is old basis vector `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Complex {
        let degrees = perm.iter().map(|&i| self.degrees[i]).collect();
        Complex {
            field: self.field,
            degrees,
            d: self.d.select(perm, perm),
        }
    }

    /// Subcomplex/quotient transport: `proj * d * sect` on a space with the given degrees.
    pub fn induced(&self, degrees: Vec<i32>, proj: &Matrix, sect: &Matrix) -> Complex {
        Complex::new_unchecked(self.field, degrees, proj.mul(&self.d).mul(sect))
    }
}

/// `H^n` of a complex with chosen representatives and class coordinates.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub degree: i32,
    /// Cocycle representatives, as ambient vectors.
    pub representatives: Vec<Vec<Scalar>>,
    field: Field,
    ambient: usize,
    here: Vec<usize>,
    d_out: Matrix,
    solver: Solver,
}

impl Cohomology {
    fn compute(c: &Complex, n: i32) -> Self {
        let f = c.field;
        let here = c.indices_in(n);
        let d_out = c.d.select(&c.indices_in(n + 1), &here);
        let d_in = c.d.select(&here, &c.indices_in(n - 1));
        let cycles = d_out.kernel();
        let mut ech = crate::linalg::Echelon::new(f, here.len());
        let boundary_cols = d_in.transpose();
        for col in boundary_cols.row_data() {
            ech.insert(col);
        }
        let mut reps_local = Vec::new();
        for z in cycles.transpose().row_data() {
            if ech.insert(z) {
                reps_local.push(z.clone());
            }
        }
        let mut columns: Vec<Vec<Scalar>> = reps_local
            .iter()
            .map(|z| sparse::to_dense(f, z, here.len()))
            .collect();
        columns.extend(
            boundary_cols
                .row_data()
                .iter()
                .map(|b| sparse::to_dense(f, b, here.len())),
        );
        let system = Matrix::from_columns(f, here.len(), &columns);
        let representatives = reps_local
            .iter()
            .map(|z| {
                let mut v = vec![f.zero(); c.dim()];
                for (i, x) in z {
                    v[here[*i]] = x.clone();
                }
                v
            })
            .collect();
        Cohomology {
            degree: n,
            representatives,
            field: f,
            ambient: c.dim(),
            here,
            d_out,
            solver: Solver::new(&system),
        }
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Coordinates of the class of an ambient vector, or `None` unless it is a
    /// degree-`n` cocycle.
    pub fn class_of(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.ambient);
        let mut here_pos = vec![usize::MAX; self.ambient];
        for (k, &i) in self.here.iter().enumerate() {
            here_pos[i] = k;
        }
        if v.iter()
            .enumerate()
            .any(|(i, x)| !x.is_zero() && here_pos[i] == usize::MAX)
        {
            return None;
        }
        let local: Vec<Scalar> = self.here.iter().map(|&i| v[i].clone()).collect();
        if !self.d_out.apply(&local).iter().all(|x| x.is_zero()) {
            return None;
        }
        let sol = self.solver.solve(&local)?;
        Some(sol[..self.dim()].to_vec())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn is_boundary(&self, v: &[Scalar]) -> bool {
        self.class_of(v)
            .is_some_and(|c| c.iter().all(|x| x.is_zero()))
    }

    pub fn field(&self) -> Field {
        self.field
    }
}

/// A homogeneous linear map between complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub source: Complex,
    pub target: Complex,
    pub degree: i32,
    pub matrix: Matrix,
}

/// A degree −1 map used to witness homotopies.
pub type Homotopy = GradedMap;

impl GradedMap {
    pub fn new(source: Complex, target: Complex, degree: i32, matrix: Matrix) -> Result<Self> {
        if matrix.shape() != (target.dim(), source.dim()) {
            return Err(Error::DimensionMismatch(format!(
                "map matrix {:?} between spaces of dimension {} and {}",
                matrix.shape(),
                source.dim(),
                target.dim()
            )));
        }
        if let Some((r, c, _)) = matrix
            .entries()
            .find(|(r, c, _)| target.degree(*r) != source.degree(*c) + degree)
        {
            return Err(Error::InvalidInput(format!(
                "entry ({r},{c}) does not have degree {degree}"
            )));
        }
        Ok(GradedMap {
            source,
            target,
            degree,
            matrix,
        })
    }

    pub fn zero(source: Complex, target: Complex, degree: i32) -> Self {
        let m = Matrix::zeros(source.field(), target.dim(), source.dim());
        GradedMap {
            source,
            target,
            degree,
            matrix: m,
        }
    }

    pub fn identity(c: &Complex) -> Self {
        GradedMap {
            source: c.clone(),
            target: c.clone(),
            degree: 0,
            matrix: Matrix::identity(c.field(), c.dim()),
        }
    }

    /// `d∘φ - (-1)^k φ∘d`.
    pub fn differential(&self) -> Matrix {
        let f = self.source.field();
        self.target.d().mul(&self.matrix).sub(
            &self
                .matrix
                .mul(self.source.d())
                .scale(&f.sign(self.degree as i64)),
        )
    }

    pub fn is_closed(&self) -> bool {
        self.differential().is_zero()
    }

    pub fn compose(&self, first: &GradedMap) -> GradedMap {
        GradedMap {
            source: first.source.clone(),
            target: self.target.clone(),
            degree: self.degree + first.degree,
            matrix: self.matrix.mul(&first.matrix),
        }
    }
}

/// A closed degree-0 map, i.e. a morphism of complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap(GradedMap);

impl ChainMap {
    pub fn new(map: GradedMap) -> Result<Self> {
        if map.degree != 0 {
            return Err(Error::InvalidInput(format!(
                "chain map of degree {}",
                map.degree
            )));
        }
        if !map.is_closed() {
            return Err(Error::NotClosed(
                "map does not commute with the differentials".into(),
            ));
        }
        Ok(ChainMap(map))
    }

    pub fn from_matrix(source: &Complex, target: &Complex, m: Matrix) -> Result<Self> {
        ChainMap::new(GradedMap::new(source.clone(), target.clone(), 0, m)?)
    }

    pub fn identity(c: &Complex) -> Self {
        ChainMap(GradedMap::identity(c))
    }

    pub fn map(&self) -> &GradedMap {
        &self.0
    }

    pub fn source(&self) -> &Complex {
        &self.0.source
    }

    pub fn target(&self) -> &Complex {
        &self.0.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0.matrix
    }

    /// Mapping cone `Y ⊕ X[1]` with differential `[[d_Y, f], [0, -d_X]]`.
    pub fn cone(&self) -> Complex {
        let (x, y) = (self.source(), self.target());
        let f = x.field();
        let top = Matrix::hstack(&[y.d(), self.matrix()]);
        let bottom = Matrix::hstack(&[&Matrix::zeros(f, x.dim(), y.dim()), &x.d().neg()]);
        let degrees = y
            .degrees()
            .iter()
            .copied()
            .chain(x.degrees().iter().map(|k| k - 1))
            .collect();
        Complex::new_unchecked(f, degrees, Matrix::vstack(&[&top, &bottom]))
    }

    pub fn is_quasi_iso(&self) -> bool {
        self.cone().is_acyclic()
    }

    /// Homotopy inverse `g` with homotopies `h` on the source and `k` on the
    /// target: `g f - id = d h + h d`, `f g - id = d k + k d`. Solved as one
    /// linear system in the entries of `g`, `h`, `k`.
    pub fn find_homotopy_inverse(&self) -> Option<HomotopyInverse> {
        let (x, y) = (self.source(), self.target());
        let field = x.field();
        let f = self.matrix();
        let (nx, ny) = (x.dim(), y.dim());
        let g_slots: Vec<(usize, usize)> = pairs(nx, ny)
            .filter(|&(r, c)| x.degree(r) == y.degree(c))
            .collect();
        let h_slots: Vec<(usize, usize)> = pairs(nx, nx)
            .filter(|&(r, c)| x.degree(r) == x.degree(c) - 1)
            .collect();
        let k_slots: Vec<(usize, usize)> = pairs(ny, ny)
            .filter(|&(r, c)| y.degree(r) == y.degree(c) - 1)
            .collect();
        // equations: [g f - dh - hd] (nx*nx), [f g - dk - kd] (ny*ny), [d g - g d] (nx*ny)
        let off2 = nx * nx;
        let off3 = off2 + ny * ny;
        let eq_len = off3 + nx * ny;
        let f_t = f.transpose();
        let (dx, dy) = (x.d(), y.d());
        let (dx_t, dy_t) = (dx.transpose(), dy.transpose());
        let one = field.one();
        let mone = field.from_i64(-1);
        let mut columns: Vec<Vec<(usize, Scalar)>> = Vec::new();
        for &(r, c) in &g_slots {
            let mut col = Vec::new();
            // E_rc f: row r of result = row c of f
            unit_left(&mut col, r, c, f, nx, 0, &one);
            // f E_rc: column c of result = column r of f
            unit_right(&mut col, &f_t, r, c, ny, off2, &one);
            // d_X E_rc - E_rc d_Y
            unit_right(&mut col, &dx_t, r, c, ny, off3, &one);
            unit_left(&mut col, r, c, dy, ny, off3, &mone);
            columns.push(col);
        }
        for &(r, c) in &h_slots {
            let mut col = Vec::new();
            unit_right(&mut col, &dx_t, r, c, nx, 0, &mone);
            unit_left(&mut col, r, c, dx, nx, 0, &mone);
            columns.push(col);
        }
        for &(r, c) in &k_slots {
            let mut col = Vec::new();
            unit_right(&mut col, &dy_t, r, c, ny, off2, &mone);
            unit_left(&mut col, r, c, dy, ny, off2, &mone);
            columns.push(col);
        }
        let system = columns_to_matrix(field, eq_len, columns);
        let mut rhs = vec![field.zero(); eq_len];
        for i in 0..nx {
            rhs[i * nx + i] = one.clone();
        }
        for i in 0..ny {
            rhs[off2 + i * ny + i] = one.clone();
        }
        let sol = Solver::new(&system).solve(&rhs)?;
        let take = |slots: &[(usize, usize)], start: usize, rows: usize, cols: usize| {
            let triplets = slots
                .iter()
                .enumerate()
                .filter(|(k, _)| !sol[start + k].is_zero())
                .map(|(k, &(r, c))| (r, c, sol[start + k].clone()));
            Matrix::from_triplets(field, rows, cols, triplets.collect::<Vec<_>>())
        };
        let g = take(&g_slots, 0, nx, ny);
        let h = take(&h_slots, g_slots.len(), nx, nx);
        let k = take(&k_slots, g_slots.len() + h_slots.len(), ny, ny);
        let inverse = HomotopyInverse {
            inverse: ChainMap(GradedMap {
                source: y.clone(),
                target: x.clone(),
                degree: 0,
                matrix: g,
            }),
            source_homotopy: GradedMap {
                source: x.clone(),
                target: x.clone(),
                degree: -1,
                matrix: h,
            },
            target_homotopy: GradedMap {
                source: y.clone(),
                target: y.clone(),
                degree: -1,
                matrix: k,
            },
        };
        debug_assert!(inverse.verify(self));
        Some(inverse)
    }
}

/// Witness data returned by [`ChainMap::find_homotopy_inverse`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyInverse {
    pub inverse: ChainMap,
    pub source_homotopy: Homotopy,
    pub target_homotopy: Homotopy,
}

impl HomotopyInverse {
    /// Re-checks both homotopy identities exactly.
    pub fn verify(&self, f: &ChainMap) -> bool {
        let field = f.source().field();
        let (x, y) = (f.source(), f.target());
        let g = self.inverse.matrix();
        let (h, k) = (&self.source_homotopy.matrix, &self.target_homotopy.matrix);
        let lhs1 = g.mul(f.matrix()).sub(&Matrix::identity(field, x.dim()));
        let rhs1 = x.d().mul(h).add(&h.mul(x.d()));
        let lhs2 = f.matrix().mul(g).sub(&Matrix::identity(field, y.dim()));
        let rhs2 = y.d().mul(k).add(&k.mul(y.d()));
        self.inverse.map().is_closed() && lhs1 == rhs1 && lhs2 == rhs2
    }
}

fn pairs(rows: usize, cols: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..rows).flat_map(move |r| (0..cols).map(move |c| (r, c)))
}

/// Adds `scale * (E_rc · a)` into an equation block of row length `width`:
/// row `r` of the product is row `c` of `a`.
pub(crate) fn unit_left(
    col: &mut Vec<(usize, Scalar)>,
    r: usize,
    c: usize,
    a: &Matrix,
    width: usize,
    offset: usize,
    scale: &Scalar,
) {
    for (j, x) in a.row(c) {
        col.push((offset + r * width + j, x.mul(scale)));
    }
}

/// Adds `scale * (a · E_rc)` into an equation block of row length `width`,
/// given `a_t = aᵀ`: column `c` of the product is column `r` of `a`.
pub(crate) fn unit_right(
    col: &mut Vec<(usize, Scalar)>,
    a_t: &Matrix,
    r: usize,
    c: usize,
    width: usize,
    offset: usize,
    scale: &Scalar,
) {
    for (i, x) in a_t.row(r) {
        col.push((offset + i * width + c, x.mul(scale)));
    }
}

/// Assembles a matrix from unsorted, possibly repeated column entries.
pub(crate) fn columns_to_matrix(
    field: Field,
    rows: usize,
    columns: Vec<Vec<(usize, Scalar)>>,
) -> Matrix {
    let ncols = columns.len();
    let triplets = columns
        .into_iter()
        .enumerate()
        .flat_map(|(c, col)| col.into_iter().map(move |(r, x)| (r, c, x)));
    Matrix::from_triplets(field, rows, ncols, triplets.collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn two_term(field: Field, entry: i64) -> Complex {
        Complex::new(
            field,
            vec![0, 1],
            Matrix::from_triplets(field, 2, 2, [(1, 0, field.from_i64(entry))]),
        )
        .unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(Complex::with_zero_differential(Q, vec![0, 1, 1]).is_valid());
        assert!(two_term(Q, 1).is_valid());
        let bad = Complex::new(
            Q,
            vec![0, 1, 2],
            Matrix::from_triplets(Q, 3, 3, [(1, 0, Q.one()), (2, 1, Q.one())]),
        )
        .unwrap();
        assert_eq!(bad.validate().failing_degrees, vec![0]);
    }

    #[test]
    fn cohomology_examples() {
        let c = two_term(Q, 1);
        assert_eq!(c.cohomology(0).unwrap().dim(), 0);
        assert_eq!(c.cohomology(1).unwrap().dim(), 0);
        let z = two_term(Q, 0);
        assert_eq!(z.cohomology(0).unwrap().dim(), 1);
        assert_eq!(z.cohomology(1).unwrap().dim(), 1);
        let flat = Complex::with_zero_differential(Q, vec![2, 2, 3]);
        assert_eq!(flat.cohomology(2).unwrap().dim(), 2);
        assert_eq!(flat.cohomology(3).unwrap().dim(), 1);
    }

    #[test]
    fn cohomology_of_invalid_complex_is_an_error() {
        let bad = Complex::new(
            Q,
            vec![0, 1, 2],
            Matrix::from_triplets(Q, 3, 3, [(1, 0, Q.one()), (2, 1, Q.one())]),
        )
        .unwrap();
        assert!(bad.cohomology(0).is_err());
    }

    #[test]
    fn differential_must_raise_degree() {
        assert!(Complex::new(
            Q,
            vec![0, 0],
            Matrix::from_triplets(Q, 2, 2, [(1, 0, Q.one())])
        )
        .is_err());
    }

    #[test]
    fn tensor_with_unit_is_identity() {
        let y = two_term(Q, 3);
        assert_eq!(Complex::tensor(&Complex::unit(Q), &y).unwrap(), y);
        assert_eq!(Complex::tensor(&y, &Complex::unit(Q)).unwrap(), y);
    }

    #[test]
    fn contractible_tensor_is_acyclic() {
        let y = Complex::new(
            Q,
            vec![-1, 0, 0],
            Matrix::from_triplets(Q, 3, 3, [(1, 0, Q.from_i64(2))]),
        )
        .unwrap();
        let t = Complex::tensor(&Complex::contractible(Q, 0), &y).unwrap();
        assert!(t.is_valid());
        assert!(t.betti().values().all(|&b| b == 0));
    }

    #[test]
    fn hom_from_unit_is_identity() {
        let y = two_term(Q, 5);
        assert_eq!(Complex::hom(&Complex::unit(Q), &y).unwrap(), y);
    }

    #[test]
    fn identity_class_is_nonzero() {
        let x = two_term(Q, 0);
        let h = Complex::hom(&x, &x).unwrap();
        let id = Complex::matrix_to_hom_vector(&x, &x, &Matrix::identity(Q, 2));
        let class = h.cohomology(0).unwrap().class_of(&id).unwrap();
        assert!(class.iter().any(|c| !c.is_zero()));
        // the identity of a contractible complex is null-homotopic
        let c = Complex::contractible(Q, 0);
        let hc = Complex::hom(&c, &c).unwrap();
        let idc = Complex::matrix_to_hom_vector(&c, &c, &Matrix::identity(Q, 2));
        assert!(hc.cohomology(0).unwrap().is_boundary(&idc));
    }

    #[test]
    fn quasi_iso_examples() {
        let k = Complex::unit(Q);
        assert!(ChainMap::identity(&k).is_quasi_iso());
        let zero = ChainMap::from_matrix(&k, &Complex::zero(Q), Matrix::zeros(Q, 0, 1)).unwrap();
        assert!(!zero.is_quasi_iso());
        assert!(zero.find_homotopy_inverse().is_none());
        let cone = zero.cone();
        assert_eq!(cone.degrees(), &[-1]);
    }

    #[test]
    fn inclusion_into_contractible_sum() {
        // K[0] -> K^2 --[0 1]--> K, including as e1
        let x = Complex::unit(Q);
        let y = Complex::new(
            Q,
            vec![0, 0, 1],
            Matrix::from_triplets(Q, 3, 3, [(2, 1, Q.one())]),
        )
        .unwrap();
        let f = ChainMap::from_matrix(&x, &y, Matrix::from_i64(Q, &[&[1], &[0], &[0]])).unwrap();
        assert!(f.is_quasi_iso());
        assert!(f.cone().is_acyclic());
        let inv = f.find_homotopy_inverse().unwrap();
        assert!(inv.verify(&f));
        assert_eq!(inv.inverse.matrix(), &Matrix::from_i64(Q, &[&[1, 0, 0]]));
    }

    #[test]
    fn identity_inverse_is_identity() {
        let x = two_term(Q, 0);
        let inv = ChainMap::identity(&x).find_homotopy_inverse().unwrap();
        assert!(inv.inverse.matrix().is_identity());
        assert!(inv.source_homotopy.matrix.is_zero());
        assert!(inv.target_homotopy.matrix.is_zero());
    }
}
