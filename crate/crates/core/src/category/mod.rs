//! Finite dg categories in basis form.
//!
//! A [`DgCategory`] stores one [`Complex`] per ordered pair of objects and
//! the structure constants of composition on basis elements. Composition is
//! written `g ∘ f` for `f: x → y`, `g: y → z`.

mod build;
mod checks;
mod functor;
mod linear;
mod mor;

use std::collections::HashMap;

pub use build::CategoryBuilder;
pub use checks::{
    check_fibration, check_quasi_equivalence, FibrationReport, QuasiEquivalenceReport,
};
pub use functor::DgFunctor;
pub use linear::{IsoSearch, LinearCategory, ENUMERATION_LIMIT};
pub use mor::{
    construct_standard_homotopy, fiber_product, mor_category, mor_category_on, path_object,
    path_object_with, FiberProduct, MorObject, PathObject,
};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::linalg::{sparse, Field, Matrix, Scalar, SparseVec};
use crate::par;
use crate::validation::{Identity, ValidationReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgCategory {
    field: Field,
    objects: Vec<String>,
    /// `hom(x, y)` at `x * n + y`.
    homs: Vec<Complex>,
    labels: Vec<Vec<String>>,
    /// Table for `(x, y, z)` at `(x * n + y) * n + z`; entry `g * dim(x,y) + f`
    /// holds `g ∘ f` in `hom(x, z)`.
    compose: Vec<Vec<SparseVec>>,
    units: Vec<SparseVec>,
}

impl DgCategory {
    /// Assembles a category from raw tables, checking only shapes.
    pub fn from_parts(
        field: Field,
        objects: Vec<String>,
        homs: Vec<Complex>,
        labels: Vec<Vec<String>>,
        compose: Vec<Vec<SparseVec>>,
        units: Vec<SparseVec>,
    ) -> Result<Self> {
        let n = objects.len();
        let shape = |msg: String| Err(Error::DimensionMismatch(msg));
        if homs.len() != n * n
            || labels.len() != n * n
            || compose.len() != n * n * n
            || units.len() != n
        {
            return shape(format!("table sizes do not match {n} objects"));
        }
        for (k, h) in homs.iter().enumerate() {
            if h.field() != field {
                return Err(Error::FieldMismatch {
                    expected: field,
                    found: h.field(),
                });
            }
            if labels[k].len() != h.dim() {
                return shape(format!(
                    "hom {k} has {} labels for dimension {}",
                    labels[k].len(),
                    h.dim()
                ));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let t = &compose[(x * n + y) * n + z];
                    let (dxy, dyz, dxz) = (
                        homs[x * n + y].dim(),
                        homs[y * n + z].dim(),
                        homs[x * n + z].dim(),
                    );
                    if t.len() != dxy * dyz {
                        return shape(format!(
                            "composition table ({x},{y},{z}) has {} entries, expected {}",
                            t.len(),
                            dxy * dyz
                        ));
                    }
                    if t.iter().any(|v| v.iter().any(|(i, _)| *i >= dxz)) {
                        return shape(format!(
                            "composition table ({x},{y},{z}) leaves hom({x},{z})"
                        ));
                    }
                }
            }
            if units[x].iter().any(|(i, _)| *i >= homs[x * n + x].dim()) {
                return shape(format!("unit of object {x} out of range"));
            }
        }
        Ok(DgCategory {
            field,
            objects,
            homs,
            labels,
            compose,
            units,
        })
    }

    /// The one-object category `K` with `End = K` in degree 0.
    pub fn unit_category(field: Field) -> Self {
        DgCategory {
            field,
            objects: vec!["*".into()],
            homs: vec![Complex::unit(field)],
            labels: vec![vec!["id".into()]],
            compose: vec![vec![vec![(0, field.one())]]],
            units: vec![vec![(0, field.one())]],
        }
    }

    pub fn empty(field: Field) -> Self {
        DgCategory {
            field,
            objects: Vec::new(),
            homs: Vec::new(),
            labels: Vec::new(),
            compose: Vec::new(),
            units: Vec::new(),
        }
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

    pub fn object_name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn hom(&self, x: usize, y: usize) -> &Complex {
        &self.homs[x * self.len() + y]
    }

    pub fn hom_dim(&self, x: usize, y: usize) -> usize {
        self.hom(x, y).dim()
    }

    pub fn basis_degree(&self, x: usize, y: usize, i: usize) -> i32 {
        self.hom(x, y).degree(i)
    }

    pub fn labels(&self, x: usize, y: usize) -> &[String] {
        &self.labels[x * self.len() + y]
    }

    pub fn basis_index(&self, x: usize, y: usize, label: &str) -> Option<usize> {
        self.labels(x, y).iter().position(|l| l == label)
    }

    pub fn unit(&self, x: usize) -> &SparseVec {
        &self.units[x]
    }

    pub fn unit_dense(&self, x: usize) -> Vec<Scalar> {
        sparse::to_dense(self.field, self.unit(x), self.hom_dim(x, x))
    }

    pub(crate) fn table(&self, x: usize, y: usize, z: usize) -> &[SparseVec] {
        let n = self.len();
        &self.compose[(x * n + y) * n + z]
    }

    /// `g ∘ f` for basis elements `f ∈ hom(x,y)`, `g ∈ hom(y,z)`.
    pub fn compose_basis(&self, x: usize, y: usize, z: usize, g: usize, f: usize) -> &SparseVec {
        &self.table(x, y, z)[g * self.hom_dim(x, y) + f]
    }

    /// `g ∘ f` for arbitrary elements.
    pub fn compose(&self, x: usize, y: usize, z: usize, g: &SparseVec, f: &SparseVec) -> SparseVec {
        let mut acc = sparse::Accumulator::new(self.field, self.hom_dim(x, z));
        for (j, b) in g {
            for (i, a) in f {
                acc.add_scaled(&b.mul(a), self.compose_basis(x, y, z, *j, *i));
            }
        }
        acc.take()
    }

    /// Matrix of `f ↦ g ∘ f` from `hom(x,y)` to `hom(x,z)`.
    pub fn left_composition_matrix(&self, x: usize, y: usize, z: usize, g: &SparseVec) -> Matrix {
        let cols: Vec<SparseVec> = (0..self.hom_dim(x, y))
            .map(|i| self.compose(x, y, z, g, &vec![(i, self.field.one())]))
            .collect();
        sparse_columns(self.field, self.hom_dim(x, z), cols)
    }

    /// Matrix of `g ↦ g ∘ f` from `hom(y,z)` to `hom(x,z)`.
    pub fn right_composition_matrix(&self, x: usize, y: usize, z: usize, f: &SparseVec) -> Matrix {
        let cols: Vec<SparseVec> = (0..self.hom_dim(y, z))
            .map(|j| self.compose(x, y, z, &vec![(j, self.field.one())], f))
            .collect();
        sparse_columns(self.field, self.hom_dim(x, z), cols)
    }

    /// Human-readable rendering of a hom element as a labelled combination.
    pub fn render(&self, x: usize, y: usize, v: &SparseVec) -> String {
        render_combination(self.labels(x, y), v)
    }

    /// Returns a copy with one composition entry replaced (for mutation testing).
    pub fn with_composition(
        &self,
        x: usize,
        y: usize,
        z: usize,
        g: usize,
        f: usize,
        value: SparseVec,
    ) -> DgCategory {
        let mut out = self.clone();
        let n = self.len();
        let dxy = self.hom_dim(x, y);
        out.compose[(x * n + y) * n + z][g * dxy + f] = value;
        out
    }

    /// Returns a copy with a different unit element at `x` (for mutation testing).
    pub fn with_unit(&self, x: usize, value: SparseVec) -> DgCategory {
        let mut out = self.clone();
        out.units[x] = value;
        out
    }

    /// Returns a copy with a replaced hom complex differential (for mutation testing).
    pub fn with_hom(&self, x: usize, y: usize, hom: Complex) -> Result<DgCategory> {
        let mut out = self.clone();
        if hom.dim() != self.hom_dim(x, y) {
            return Err(Error::DimensionMismatch(
                "replacement hom has a different dimension".into(),
            ));
        }
        let n = self.len();
        out.homs[x * n + y] = hom;
        Ok(out)
    }

    /// Checks every dg category identity on basis elements.
    pub fn validate(&self) -> ValidationReport {
        let n = self.len();
        let mut report = ValidationReport::default();
        for x in 0..n {
            for y in 0..n {
                let r = self.hom(x, y).validate();
                if !r.passed() {
                    report.push(
                        Identity::DSquared,
                        self.names(&[x, y]),
                        format!("d² ≠ 0 starting in degrees {:?}", r.failing_degrees),
                    );
                }
            }
        }
        for x in 0..n {
            self.check_unit(x, &mut report);
        }
        let triples: Vec<ValidationReport> = par::map_range(n * n * n, |k| {
            self.check_triple(k / (n * n), (k / n) % n, k % n)
        });
        for r in triples {
            report.extend(r);
        }
        let quads: Vec<ValidationReport> = par::map_range(n * n * n * n, |k| {
            let (x, y, z, w) = (k / (n * n * n), (k / (n * n)) % n, (k / n) % n, k % n);
            self.check_associativity(x, y, z, w)
        });
        for r in quads {
            report.extend(r);
        }
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passed()
    }

    fn names(&self, objs: &[usize]) -> Vec<String> {
        objs.iter().map(|&o| self.objects[o].clone()).collect()
    }

    fn check_unit(&self, x: usize, report: &mut ValidationReport) {
        let f = self.field;
        let hxx = self.hom(x, x);
        let u = self.unit(x);
        if u.iter().any(|(i, _)| hxx.degree(*i) != 0) {
            report.push(
                Identity::UnitDegree,
                self.names(&[x]),
                "unit has a component outside degree 0",
            );
        }
        if !hxx.d().apply_sparse(u).is_empty() {
            report.push(Identity::UnitClosed, self.names(&[x]), "d(unit) ≠ 0");
        }
        for y in 0..self.len() {
            for i in 0..self.hom_dim(x, y) {
                let e = vec![(i, f.one())];
                if self.compose(x, x, y, &e, u) != e {
                    report.push(
                        Identity::RightUnit,
                        self.names(&[x, y]),
                        format!("{} ∘ id ≠ {}", self.labels(x, y)[i], self.labels(x, y)[i]),
                    );
                }
            }
            for i in 0..self.hom_dim(y, x) {
                let e = vec![(i, f.one())];
                if self.compose(y, x, x, u, &e) != e {
                    report.push(
                        Identity::LeftUnit,
                        self.names(&[y, x]),
                        format!("id ∘ {} ≠ {}", self.labels(y, x)[i], self.labels(y, x)[i]),
                    );
                }
            }
        }
    }

    fn check_triple(&self, x: usize, y: usize, z: usize) -> ValidationReport {
        let mut report = ValidationReport::default();
        let f = self.field;
        let (hxy, hyz, hxz) = (self.hom(x, y), self.hom(y, z), self.hom(x, z));
        let objs = self.names(&[x, y, z]);
        let mut degree_bad = None;
        let mut leibniz_bad = None;
        for j in 0..hyz.dim() {
            let gj = vec![(j, f.one())];
            let dg = hyz.d().column_sparse(j);
            for i in 0..hxy.dim() {
                let fi = vec![(i, f.one())];
                let comp = self.compose_basis(x, y, z, j, i);
                let want = hyz.degree(j) + hxy.degree(i);
                if degree_bad.is_none() && comp.iter().any(|(k, _)| hxz.degree(*k) != want) {
                    degree_bad = Some((j, i));
                }
                let lhs = hxz.d().apply_sparse(comp);
                let df = hxy.d().column_sparse(i);
                let t1 = self.compose(x, y, z, &dg, &fi);
                let t2 = self.compose(x, y, z, &gj, &df);
                let rhs = sparse::axpy(&t1, &f.sign(hyz.degree(j) as i64), &t2);
                if leibniz_bad.is_none() && lhs != rhs {
                    leibniz_bad = Some((j, i));
                }
            }
        }
        if let Some((j, i)) = degree_bad {
            report.push(
                Identity::CompositionDegree,
                objs.clone(),
                format!(
                    "{} ∘ {} has the wrong degree",
                    self.labels(y, z)[j],
                    self.labels(x, y)[i]
                ),
            );
        }
        if let Some((j, i)) = leibniz_bad {
            report.push(
                Identity::Leibniz,
                objs,
                format!(
                    "d({g} ∘ {f}) ≠ d{g} ∘ {f} ± {g} ∘ d{f}",
                    g = self.labels(y, z)[j],
                    f = self.labels(x, y)[i]
                ),
            );
        }
        report
    }

    fn check_associativity(&self, x: usize, y: usize, z: usize, w: usize) -> ValidationReport {
        let mut report = ValidationReport::default();
        let (a, b, c) = (self.hom_dim(x, y), self.hom_dim(y, z), self.hom_dim(z, w));
        for k in 0..c {
            for j in 0..b {
                let hg = self.compose_basis(y, z, w, k, j);
                for i in 0..a {
                    let gf = self.compose_basis(x, y, z, j, i);
                    let lhs = self.compose(x, y, w, hg, &vec![(i, self.field.one())]);
                    let rhs = self.compose(x, z, w, &vec![(k, self.field.one())], gf);
                    if lhs != rhs {
                        report.push(
                            Identity::Associativity,
                            self.names(&[x, y, z, w]),
                            format!(
                                "({h} ∘ {g}) ∘ {f} ≠ {h} ∘ ({g} ∘ {f})",
                                h = self.labels(z, w)[k],
                                g = self.labels(y, z)[j],
                                f = self.labels(x, y)[i]
                            ),
                        );
                        return report;
                    }
                }
            }
        }
        report
    }

    /// The opposite category: `hom_op(x,y) = hom(y,x)` and
    /// `f ∘^op g = (-1)^{|f||g|} g ∘ f`.
    pub fn opposite(&self) -> DgCategory {
        let n = self.len();
        let mut homs = Vec::with_capacity(n * n);
        let mut labels = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                homs.push(self.hom(y, x).clone());
                labels.push(self.labels(y, x).to_vec());
            }
        }
        let compose = par::map_range(n * n * n, |k| {
            let (x, y, z) = (k / (n * n), (k / n) % n, k % n);
            // g ∈ hom_op(y,z) = hom(z,y), f ∈ hom_op(x,y) = hom(y,x); result f ∘ g in hom(z,x)
            let (dyx, dzy) = (self.hom_dim(y, x), self.hom_dim(z, y));
            let mut t = Vec::with_capacity(dyx * dzy);
            for g in 0..dzy {
                for f in 0..dyx {
                    let s =
                        (self.basis_degree(y, x, f) as i64) * (self.basis_degree(z, y, g) as i64);
                    t.push(sparse::scale(
                        self.compose_basis(z, y, x, f, g),
                        &self.field.sign(s),
                    ));
                }
            }
            t
        });
        DgCategory {
            field: self.field,
            objects: self.objects.clone(),
            homs,
            labels,
            compose,
            units: self.units.clone(),
        }
    }

    /// `A ⊗ B`: objects are pairs `(a, b)` at index `a * |B| + b`, homs are
    /// tensor complexes, and `(f₂⊗g₂)∘(f₁⊗g₁) = (-1)^{|g₂||f₁|} f₂f₁ ⊗ g₂g₁`.
    pub fn tensor(a: &DgCategory, b: &DgCategory) -> Result<DgCategory> {
        if a.field != b.field {
            return Err(Error::FieldMismatch {
                expected: a.field,
                found: b.field,
            });
        }
        let field = a.field;
        let (na, nb) = (a.len(), b.len());
        let n = na * nb;
        let split = |o: usize| (o / nb, o % nb);
        let mut objects = Vec::with_capacity(n);
        for x in 0..na {
            for y in 0..nb {
                objects.push(format!("({},{})", a.objects[x], b.objects[y]));
            }
        }
        let mut homs = Vec::with_capacity(n * n);
        let mut labels = Vec::with_capacity(n * n);
        for p in 0..n {
            for q in 0..n {
                let ((a1, b1), (a2, b2)) = (split(p), split(q));
                homs.push(Complex::tensor(a.hom(a1, a2), b.hom(b1, b2))?);
                let mut l = Vec::new();
                for la in a.labels(a1, a2) {
                    for lb in b.labels(b1, b2) {
                        l.push(format!("{la}⊗{lb}"));
                    }
                }
                labels.push(l);
            }
        }
        let compose = par::map_range(n * n * n, |k| {
            let (p, q, r) = (k / (n * n), (k / n) % n, k % n);
            let ((a1, b1), (a2, b2), (a3, b3)) = (split(p), split(q), split(r));
            let (da12, db12) = (a.hom_dim(a1, a2), b.hom_dim(b1, b2));
            let (da23, db23) = (a.hom_dim(a2, a3), b.hom_dim(b2, b3));
            let db13 = b.hom_dim(b1, b3);
            let mut t = Vec::with_capacity(da12 * db12 * da23 * db23);
            for f2 in 0..da23 {
                for g2 in 0..db23 {
                    for f1 in 0..da12 {
                        for g1 in 0..db12 {
                            let s = (b.basis_degree(b2, b3, g2) as i64)
                                * (a.basis_degree(a1, a2, f1) as i64);
                            let sign = field.sign(s);
                            let ff = a.compose_basis(a1, a2, a3, f2, f1);
                            let gg = b.compose_basis(b1, b2, b3, g2, g1);
                            t.push(sparse_kron(ff, gg, db13, &sign));
                        }
                    }
                }
            }
            t
        });
        let units = (0..n)
            .map(|p| {
                let (x, y) = split(p);
                sparse_kron(a.unit(x), b.unit(y), b.hom_dim(y, y), &field.one())
            })
            .collect();
        Ok(DgCategory {
            field,
            objects,
            homs,
            labels,
            compose,
            units,
        })
    }

    /// `A × B`: objects are pairs, `hom = hom_A ⊕ hom_B`, componentwise composition.
    pub fn product(a: &DgCategory, b: &DgCategory) -> Result<DgCategory> {
        if a.field != b.field {
            return Err(Error::FieldMismatch {
                expected: a.field,
                found: b.field,
            });
        }
        let field = a.field;
        let (na, nb) = (a.len(), b.len());
        let n = na * nb;
        let split = |o: usize| (o / nb, o % nb);
        let mut objects = Vec::with_capacity(n);
        for x in 0..na {
            for y in 0..nb {
                objects.push(format!("({},{})", a.objects[x], b.objects[y]));
            }
        }
        let mut homs = Vec::with_capacity(n * n);
        let mut labels = Vec::with_capacity(n * n);
        for p in 0..n {
            for q in 0..n {
                let ((a1, b1), (a2, b2)) = (split(p), split(q));
                homs.push(Complex::direct_sum(field, &[a.hom(a1, a2), b.hom(b1, b2)]));
                let mut l: Vec<String> = a
                    .labels(a1, a2)
                    .iter()
                    .map(|s| format!("({s},0)"))
                    .collect();
                l.extend(b.labels(b1, b2).iter().map(|s| format!("(0,{s})")));
                labels.push(l);
            }
        }
        let compose = par::map_range(n * n * n, |k| {
            let (p, q, r) = (k / (n * n), (k / n) % n, k % n);
            let ((a1, b1), (a2, b2), (a3, b3)) = (split(p), split(q), split(r));
            let (da12, da23, da13) = (a.hom_dim(a1, a2), a.hom_dim(a2, a3), a.hom_dim(a1, a3));
            let (db12, db23) = (b.hom_dim(b1, b2), b.hom_dim(b2, b3));
            let (d12, d23) = (da12 + db12, da23 + db23);
            let mut t = vec![Vec::new(); d12 * d23];
            for g in 0..d23 {
                for f in 0..d12 {
                    t[g * d12 + f] = match (g < da23, f < da12) {
                        (true, true) => a.compose_basis(a1, a2, a3, g, f).clone(),
                        (false, false) => {
                            shift_sparse(b.compose_basis(b1, b2, b3, g - da23, f - da12), da13)
                        }
                        _ => Vec::new(),
                    };
                }
            }
            t
        });
        let units = (0..n)
            .map(|p| {
                let (x, y) = split(p);
                let mut u = a.unit(x).clone();
                u.extend(shift_sparse(b.unit(y), a.hom_dim(x, x)));
                u
            })
            .collect();
        Ok(DgCategory {
            field,
            objects,
            homs,
            labels,
            compose,
            units,
        })
    }

    /// Full subcategory on the listed objects, in the given order.
    pub fn full_subcategory(&self, keep: &[usize]) -> DgCategory {
        let m = keep.len();
        let mut homs = Vec::with_capacity(m * m);
        let mut labels = Vec::with_capacity(m * m);
        for &x in keep {
            for &y in keep {
                homs.push(self.hom(x, y).clone());
                labels.push(self.labels(x, y).to_vec());
            }
        }
        let mut compose = Vec::with_capacity(m * m * m);
        for &x in keep {
            for &y in keep {
                for &z in keep {
                    compose.push(self.table(x, y, z).to_vec());
                }
            }
        }
        DgCategory {
            field: self.field,
            objects: keep.iter().map(|&x| self.objects[x].clone()).collect(),
            homs,
            labels,
            compose,
            units: keep.iter().map(|&x| self.units[x].clone()).collect(),
        }
    }

    /// Subcategory on `objects` (indices into `self`) whose hom complexes are
    /// the subcomplexes spanned by the columns of `inclusions[i * m + j]`.
    /// Closure under `d` and composition is checked.
    pub fn sub_homs(
        &self,
        objects: &[usize],
        names: Vec<String>,
        inclusions: Vec<Matrix>,
    ) -> Result<DgCategory> {
        let m = objects.len();
        let field = self.field;
        let mut homs = Vec::with_capacity(m * m);
        let mut solvers = Vec::with_capacity(m * m);
        let mut labels = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                let (x, y) = (objects[i], objects[j]);
                let inc = &inclusions[i * m + j];
                let parent = self.hom(x, y);
                let solver = crate::linalg::Solver::new(inc);
                let mut degrees = Vec::with_capacity(inc.cols());
                for c in 0..inc.cols() {
                    let col = inc.column_sparse(c);
                    let deg = col.first().map(|(r, _)| parent.degree(*r));
                    match deg {
                        Some(d) if col.iter().all(|(r, _)| parent.degree(*r) == d) => {
                            degrees.push(d)
                        }
                        _ => {
                            return Err(Error::InvalidInput(
                                "sub-hom basis vector is zero or not homogeneous".into(),
                            ))
                        }
                    }
                }
                let dcols = parent.d().mul(inc);
                let mut triplets = Vec::new();
                for c in 0..inc.cols() {
                    let v = dcols.column_vec(c);
                    let sol = solver
                        .solve(&v)
                        .ok_or_else(|| Error::NotClosed("sub-hom not closed under d".into()))?;
                    triplets.extend(
                        sol.into_iter()
                            .enumerate()
                            .filter(|(_, a)| !a.is_zero())
                            .map(|(r, a)| (r, c, a)),
                    );
                }
                let d = Matrix::from_triplets(field, inc.cols(), inc.cols(), triplets);
                homs.push(Complex::new(field, degrees, d)?);
                labels.push(
                    (0..inc.cols())
                        .map(|c| self.render(x, y, &inc.column_sparse(c)))
                        .collect(),
                );
                solvers.push(solver);
            }
        }
        let mut compose = Vec::with_capacity(m * m * m);
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let (x, y, z) = (objects[i], objects[j], objects[k]);
                    let (inc_f, inc_g) = (&inclusions[i * m + j], &inclusions[j * m + k]);
                    let target = &solvers[i * m + k];
                    let dxz = self.hom_dim(x, z);
                    let mut t = Vec::with_capacity(inc_f.cols() * inc_g.cols());
                    for g in 0..inc_g.cols() {
                        let gv = inc_g.column_sparse(g);
                        for f in 0..inc_f.cols() {
                            let v = self.compose(x, y, z, &gv, &inc_f.column_sparse(f));
                            let sol = target.solve(&sparse::to_dense(field, &v, dxz)).ok_or_else(
                                || Error::NotClosed("sub-homs not closed under composition".into()),
                            )?;
                            t.push(sparse::from_dense(&sol));
                        }
                    }
                    compose.push(t);
                }
            }
        }
        let mut units = Vec::with_capacity(m);
        for i in 0..m {
            let x = objects[i];
            let sol = solvers[i * m + i]
                .solve(&self.unit_dense(x))
                .ok_or_else(|| Error::NotClosed("sub-homs do not contain the units".into()))?;
            units.push(sparse::from_dense(&sol));
        }
        DgCategory::from_parts(field, names, homs, labels, compose, units)
    }

    /// Objects reachable along nonzero homs, used for directedness: returns a
    /// topological order when `hom(x,y) = 0` for `x ≠ y` outside a partial
    /// order and every `hom(x,x)` is `K·unit`.
    pub fn directed_order(&self) -> Option<Vec<usize>> {
        let n = self.len();
        for x in 0..n {
            let h = self.hom(x, x);
            if h.dim() != 1 || h.degree(0) != 0 || self.unit(x).is_empty() {
                return None;
            }
        }
        let mut indegree = vec![0usize; n];
        for x in 0..n {
            for (y, deg) in indegree.iter_mut().enumerate() {
                if x != y && self.hom_dim(x, y) > 0 {
                    *deg += 1;
                }
            }
        }
        let mut order = Vec::with_capacity(n);
        let mut ready: Vec<usize> = (0..n).filter(|&x| indegree[x] == 0).collect();
        while let Some(x) = ready.pop() {
            order.push(x);
            for (y, deg) in indegree.iter_mut().enumerate() {
                if x != y && self.hom_dim(x, y) > 0 {
                    *deg -= 1;
                    if *deg == 0 {
                        ready.push(y);
                    }
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Index of an object by name, with a lookup table for bulk use.
    pub fn object_lookup(&self) -> HashMap<&str, usize> {
        self.objects
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect()
    }
}

/// `(a ⊗ b) * sign` with index `i * width_b + j`.
pub(crate) fn sparse_kron(
    a: &SparseVec,
    b: &SparseVec,
    width_b: usize,
    sign: &Scalar,
) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a {
        for (j, y) in b {
            out.push((i * width_b + j, x.mul(y).mul(sign)));
        }
    }
    out
}

pub(crate) fn shift_sparse(v: &SparseVec, offset: usize) -> SparseVec {
    v.iter().map(|(i, x)| (i + offset, x.clone())).collect()
}

pub(crate) fn sparse_columns(field: Field, rows: usize, cols: Vec<SparseVec>) -> Matrix {
    let n = cols.len();
    let triplets = cols
        .into_iter()
        .enumerate()
        .flat_map(|(c, v)| v.into_iter().map(move |(r, x)| (r, c, x)));
    Matrix::from_triplets(field, rows, n, triplets.collect::<Vec<_>>())
}

pub(crate) fn render_combination(labels: &[String], v: &SparseVec) -> String {
    if v.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (i, x)) in v.iter().enumerate() {
        let coeff = x.to_text();
        let term = if x.is_one() {
            labels[*i].clone()
        } else {
            format!("{coeff}*{}", labels[*i])
        };
        if k > 0 {
            out.push('+');
        }
        out.push_str(&term);
    }
    out
}
