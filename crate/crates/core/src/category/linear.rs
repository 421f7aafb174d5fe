use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{sparse_columns, DgCategory, DgFunctor};
use crate::complex::Cohomology;
use crate::linalg::{sparse, Field, Matrix, Scalar, Solver, SparseVec};
use crate::validation::{Identity, ValidationReport, Verdict};

/// How ambient (dg-level) hom elements are read back as coordinates.
#[derive(Clone, Debug)]
enum Coordinates {
    /// Z⁰: coordinates in a basis of closed degree-0 elements.
    Cycles {
        solver: Solver,
        degree_zero: Vec<usize>,
        d_out: Matrix,
        width: usize,
    },
    /// H⁰: class coordinates.
    Classes(Cohomology),
}

/// A linear category with finite-dimensional homs: the output of `Z⁰` and `H⁰`.
/// Each basis vector remembers a representative in the underlying dg hom.
#[derive(Clone, Debug)]
pub struct LinearCategory {
    field: Field,
    objects: Vec<String>,
    reps: Vec<Vec<SparseVec>>,
    coords: Vec<Coordinates>,
    /// Same layout as [`DgCategory`] tables.
    compose: Vec<Vec<SparseVec>>,
    units: Vec<SparseVec>,
}

/// Outcome of an isomorphism search in a linear category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoSearch {
    pub verdict: Verdict,
    /// `(f, f⁻¹)` in coordinates when found.
    pub witness: Option<(SparseVec, SparseVec)>,
    pub examined: u64,
}

/// Enumeration cap for exhaustive searches over finite fields.
pub const ENUMERATION_LIMIT: u64 = 1 << 16;

impl LinearCategory {
    /// `Z⁰(A)`: closed degree-0 morphisms.
    pub fn z0(a: &DgCategory) -> Self {
        let n = a.len();
        let field = a.field();
        let mut reps = Vec::with_capacity(n * n);
        let mut coords = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let h = a.hom(x, y);
                let zero = h.indices_in(0);
                let d_out = h.d().select(&h.indices_in(1), &zero);
                let ker = d_out.kernel();
                let basis: Vec<SparseVec> = (0..ker.cols())
                    .map(|c| {
                        ker.column_sparse(c)
                            .into_iter()
                            .map(|(i, v)| (zero[i], v))
                            .collect()
                    })
                    .collect();
                let solver = Solver::new(&ker);
                reps.push(basis);
                coords.push(Coordinates::Cycles {
                    solver,
                    degree_zero: zero,
                    d_out,
                    width: h.dim(),
                });
            }
        }
        LinearCategory::assemble(a, reps, coords, field)
    }

    /// `H⁰(A)`: degree-0 cohomology of every hom complex.
    pub fn h0(a: &DgCategory) -> Self {
        let n = a.len();
        let field = a.field();
        let mut reps = Vec::with_capacity(n * n);
        let mut coords = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let c = a.hom(x, y).cohomology(0).expect("validated hom complex");
                reps.push(
                    c.representatives
                        .iter()
                        .map(|v| sparse::from_dense(v))
                        .collect(),
                );
                coords.push(Coordinates::Classes(c));
            }
        }
        LinearCategory::assemble(a, reps, coords, field)
    }

    fn assemble(
        a: &DgCategory,
        reps: Vec<Vec<SparseVec>>,
        coords: Vec<Coordinates>,
        field: Field,
    ) -> Self {
        let n = a.len();
        let mut out = LinearCategory {
            field,
            objects: a.objects().to_vec(),
            reps,
            coords,
            compose: Vec::new(),
            units: Vec::new(),
        };
        let mut compose = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let mut t = Vec::new();
                    for g in &out.reps[y * n + z] {
                        for f in &out.reps[x * n + y] {
                            let v = a.compose(x, y, z, g, f);
                            t.push(
                                out.coordinates(x, z, &v)
                                    .expect("composition of closed degree-0 maps is closed"),
                            );
                        }
                    }
                    compose.push(t);
                }
            }
        }
        out.compose = compose;
        out.units = (0..n)
            .map(|x| out.coordinates(x, x, a.unit(x)).expect("units are closed"))
            .collect();
        out
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn dim(&self, x: usize, y: usize) -> usize {
        self.reps[x * self.len() + y].len()
    }

    pub fn unit(&self, x: usize) -> &SparseVec {
        &self.units[x]
    }

    /// Representative in the dg hom of a coordinate vector.
    pub fn representative(&self, x: usize, y: usize, v: &SparseVec) -> SparseVec {
        let reps = &self.reps[x * self.len() + y];
        let mut acc: SparseVec = Vec::new();
        for (i, c) in v {
            acc = sparse::axpy(&acc, c, &reps[*i]);
        }
        acc
    }

    /// Coordinates of a dg-level element, or `None` if it is not a closed degree-0 element.
    pub fn coordinates(&self, x: usize, y: usize, v: &SparseVec) -> Option<SparseVec> {
        match &self.coords[x * self.len() + y] {
            Coordinates::Cycles {
                solver,
                degree_zero,
                d_out,
                width,
            } => {
                let mut pos = vec![usize::MAX; *width];
                for (k, &i) in degree_zero.iter().enumerate() {
                    pos[i] = k;
                }
                if v.iter().any(|(i, _)| pos[*i] == usize::MAX) {
                    return None;
                }
                let mut local = vec![self.field.zero(); degree_zero.len()];
                for (i, c) in v {
                    local[pos[*i]] = c.clone();
                }
                if d_out.apply(&local).iter().any(|c| !c.is_zero()) {
                    return None;
                }
                solver.solve(&local).map(|s| sparse::from_dense(&s))
            }
            Coordinates::Classes(c) => {
                let dense = sparse::to_dense(self.field, v, c.ambient_dim());
                c.class_of(&dense).map(|s| sparse::from_dense(&s))
            }
        }
    }

    pub fn compose(&self, x: usize, y: usize, z: usize, g: &SparseVec, f: &SparseVec) -> SparseVec {
        let n = self.len();
        let t = &self.compose[(x * n + y) * n + z];
        let dxy = self.dim(x, y);
        let mut acc = sparse::Accumulator::new(self.field, self.dim(x, z));
        for (j, b) in g {
            for (i, a) in f {
                acc.add_scaled(&b.mul(a), &t[j * dxy + i]);
            }
        }
        acc.take()
    }

    /// Associativity and unit laws on basis elements.
    pub fn validate(&self) -> ValidationReport {
        let n = self.len();
        let one = self.field.one();
        let mut report = ValidationReport::default();
        for x in 0..n {
            for y in 0..n {
                for i in 0..self.dim(x, y) {
                    let e = vec![(i, one.clone())];
                    if self.compose(x, x, y, &e, self.unit(x)) != e {
                        report.push(
                            Identity::RightUnit,
                            vec![self.objects[x].clone(), self.objects[y].clone()],
                            format!("basis {i}"),
                        );
                    }
                    if self.compose(x, y, y, self.unit(y), &e) != e {
                        report.push(
                            Identity::LeftUnit,
                            vec![self.objects[x].clone(), self.objects[y].clone()],
                            format!("basis {i}"),
                        );
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        for k in 0..self.dim(z, w) {
                            for j in 0..self.dim(y, z) {
                                for i in 0..self.dim(x, y) {
                                    let (h, g, f) = (
                                        vec![(k, one.clone())],
                                        vec![(j, one.clone())],
                                        vec![(i, one.clone())],
                                    );
                                    let lhs =
                                        self.compose(x, y, w, &self.compose(y, z, w, &h, &g), &f);
                                    let rhs =
                                        self.compose(x, z, w, &h, &self.compose(x, y, z, &g, &f));
                                    if lhs != rhs {
                                        report.push(
                                            Identity::Associativity,
                                            [x, y, z, w]
                                                .iter()
                                                .map(|&o| self.objects[o].clone())
                                                .collect(),
                                            format!("basis ({k},{j},{i})"),
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        report
    }

    /// Opposite linear category (no signs: everything sits in degree 0).
    pub fn opposite(&self) -> LinearCategory {
        let n = self.len();
        let mut reps = Vec::with_capacity(n * n);
        let mut coords = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                reps.push(self.reps[y * n + x].clone());
                coords.push(self.coords[y * n + x].clone());
            }
        }
        let mut compose = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (dyx, dzy) = (self.dim(y, x), self.dim(z, y));
                    let src = &self.compose[(z * n + y) * n + x];
                    let mut t = Vec::with_capacity(dyx * dzy);
                    for g in 0..dzy {
                        for f in 0..dyx {
                            t.push(src[f * dzy + g].clone());
                        }
                    }
                    compose.push(t);
                }
            }
        }
        LinearCategory {
            field: self.field,
            objects: self.objects.clone(),
            reps,
            coords,
            compose,
            units: self.units.clone(),
        }
    }

    /// Equality of objects, hom dimensions, representatives, composition and units.
    pub fn same_structure(&self, other: &LinearCategory) -> bool {
        self.field == other.field
            && self.objects == other.objects
            && self.reps == other.reps
            && self.compose == other.compose
            && self.units == other.units
    }

    /// Two-sided inverse of `f: x → y`, if any.
    pub fn inverse(&self, x: usize, y: usize, f: &SparseVec) -> Option<SparseVec> {
        let dyx = self.dim(y, x);
        let one = self.field.one();
        let right: Vec<SparseVec> = (0..dyx)
            .map(|j| self.compose(x, y, x, &vec![(j, one.clone())], f))
            .collect();
        let left: Vec<SparseVec> = (0..dyx)
            .map(|j| self.compose(y, x, y, f, &vec![(j, one.clone())]))
            .collect();
        let g = Solver::new(&sparse_columns(self.field, self.dim(x, x), right))
            .solve(&sparse::to_dense(self.field, self.unit(x), self.dim(x, x)))?;
        let g = sparse::from_dense(&g);
        Solver::new(&sparse_columns(self.field, self.dim(y, y), left)).solve(&sparse::to_dense(
            self.field,
            self.unit(y),
            self.dim(y, y),
        ))?;
        // a left inverse and a right inverse coincide
        debug_assert_eq!(self.compose(y, x, y, f, &g), *self.unit(y));
        Some(g)
    }

    pub fn is_invertible(&self, x: usize, y: usize, f: &SparseVec) -> bool {
        self.inverse(x, y, f).is_some()
    }

    /// Necessary condition for `x ≅ y`: matching hom dimensions against every object.
    fn dimension_profile_matches(&self, x: usize, y: usize) -> bool {
        (0..self.len())
            .all(|z| self.dim(x, z) == self.dim(y, z) && self.dim(z, x) == self.dim(z, y))
    }

    /// Searches for an isomorphism `x → y`: exhaustive over small finite
    /// fields, seeded random over Q (then a negative answer is `Unknown`).
    pub fn find_isomorphism(&self, x: usize, y: usize, seed: u64, budget: usize) -> IsoSearch {
        let zx = self.unit(x).is_empty();
        let zy = self.unit(y).is_empty();
        if zx || zy {
            let both = zx && zy;
            return IsoSearch {
                verdict: Verdict::from_bool(both),
                witness: both.then(|| (Vec::new(), Vec::new())),
                examined: 0,
            };
        }
        if x == y {
            return IsoSearch {
                verdict: Verdict::Yes,
                witness: Some((self.unit(x).clone(), self.unit(x).clone())),
                examined: 0,
            };
        }
        if self.dim(x, y) == 0 || !self.dimension_profile_matches(x, y) {
            return IsoSearch {
                verdict: Verdict::No,
                witness: None,
                examined: 0,
            };
        }
        let d = self.dim(x, y);
        let mut examined = 0u64;
        match self.field.space_size(d) {
            Some(total) if total <= ENUMERATION_LIMIT => {
                for v in self.field.enumerate(d) {
                    examined += 1;
                    let f = sparse::from_dense(&v);
                    if let Some(g) = self.inverse(x, y, &f) {
                        return IsoSearch {
                            verdict: Verdict::Yes,
                            witness: Some((f, g)),
                            examined,
                        };
                    }
                }
                IsoSearch {
                    verdict: Verdict::No,
                    witness: None,
                    examined,
                }
            }
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let candidates =
                    (0..d)
                        .map(|i| vec![(i, self.field.one())])
                        .chain((0..budget).map(|_| {
                            let v: Vec<Scalar> = (0..d)
                                .map(|_| self.field.from_i64(rng.gen_range(-3..=3)))
                                .collect();
                            sparse::from_dense(&v)
                        }));
                for f in candidates {
                    examined += 1;
                    if let Some(g) = self.inverse(x, y, &f) {
                        return IsoSearch {
                            verdict: Verdict::Yes,
                            witness: Some((f, g)),
                            examined,
                        };
                    }
                }
                IsoSearch {
                    verdict: Verdict::Unknown,
                    witness: None,
                    examined,
                }
            }
        }
    }

    /// All isomorphisms `x → y` by enumeration (finite fields only; `None` if
    /// the hom space is too large to enumerate).
    pub fn isomorphisms(&self, x: usize, y: usize) -> Option<Vec<(SparseVec, SparseVec)>> {
        let d = self.dim(x, y);
        let total = self.field.space_size(d)?;
        if total > ENUMERATION_LIMIT {
            return None;
        }
        Some(
            self.field
                .enumerate(d)
                .filter_map(|v| {
                    let f = sparse::from_dense(&v);
                    self.inverse(x, y, &f).map(|g| (f, g))
                })
                .collect(),
        )
    }

    /// Partition of the objects into isomorphism classes; `None` if some
    /// pair could not be decided.
    pub fn iso_classes(&self, seed: u64, budget: usize) -> Option<Vec<Vec<usize>>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        'next: for x in 0..self.len() {
            for class in classes.iter_mut() {
                match self.find_isomorphism(class[0], x, seed, budget).verdict {
                    Verdict::Yes => {
                        class.push(x);
                        continue 'next;
                    }
                    Verdict::No => {}
                    Verdict::Unknown => return None,
                }
            }
            classes.push(vec![x]);
        }
        Some(classes)
    }

    /// Matrix of the map induced by `F` on this kind of hom space, from
    /// `self(x, y)` to `target(F x, F y)`.
    pub fn functor_matrix(
        &self,
        f: &DgFunctor,
        target: &LinearCategory,
        x: usize,
        y: usize,
    ) -> Matrix {
        let (fx, fy) = (f.object(x), f.object(y));
        let cols: Vec<SparseVec> = self.reps[x * self.len() + y]
            .iter()
            .map(|r| {
                target
                    .coordinates(fx, fy, &f.apply(x, y, r))
                    .expect("dg functors preserve closed degree-0 elements")
            })
            .collect();
        sparse_columns(self.field, target.dim(fx, fy), cols)
    }
}
