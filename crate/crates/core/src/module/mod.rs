//! Right dg modules over a finite dg category.
//!
//! A module `M` assigns a complex to each object and, to each basis element
//! `f: x → y`, a map `M(y) → M(x)` of degree `|f|`. The action is
//! contravariant with the Koszul rule `M(g ∘ f) = (-1)^{|f||g|} M(f) ∘ M(g)`.

mod hom;
mod tensor;
mod transform;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

pub use hom::{check_yoneda, module_hom_complex, HomComplex, YonedaCheck};
pub use tensor::{
    check_hflat, induced_tensor_map, tensor_over, tensor_over_middle, HFlatReport, TensorProduct,
};
pub use transform::NatTransform;

use crate::category::{DgCategory, DgFunctor};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, SparseVec};
use crate::par;
use crate::validation::{Identity, ValidationReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgModule {
    base: Arc<DgCategory>,
    values: Vec<Complex>,
    /// `actions[x * n + y][f]` is the action of basis element `f ∈ hom(x, y)`,
    /// a matrix from `value(y)` to `value(x)`.
    actions: Vec<Vec<Matrix>>,
}

/// Per-object cohomology table with the overall acyclicity verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AcyclicityTag {
    pub acyclic: bool,
    /// `(object, degree → dim Hⁿ)`, listing only nonzero cohomology.
    pub cohomology: Vec<(String, BTreeMap<i32, usize>)>,
}

impl DgModule {
    /// Assembles a module, checking only shapes and fields. Use
    /// [`DgModule::validate`] for the module identities.
    pub fn new(
        base: Arc<DgCategory>,
        values: Vec<Complex>,
        actions: Vec<Vec<Matrix>>,
    ) -> Result<Self> {
        let n = base.len();
        let field = base.field();
        if values.len() != n || actions.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "module tables do not match {n} objects"
            )));
        }
        if let Some(v) = values.iter().find(|v| v.field() != field) {
            return Err(Error::FieldMismatch {
                expected: field,
                found: v.field(),
            });
        }
        for x in 0..n {
            for y in 0..n {
                let acts = &actions[x * n + y];
                if acts.len() != base.hom_dim(x, y) {
                    return Err(Error::DimensionMismatch(format!(
                        "{} actions given for hom({}, {}) of dimension {}",
                        acts.len(),
                        base.object_name(x),
                        base.object_name(y),
                        base.hom_dim(x, y)
                    )));
                }
                for m in acts {
                    if m.field() != field {
                        return Err(Error::FieldMismatch {
                            expected: field,
                            found: m.field(),
                        });
                    }
                    if m.shape() != (values[x].dim(), values[y].dim()) {
                        return Err(Error::DimensionMismatch(format!(
                            "action for hom({}, {}) has shape {:?}, expected {:?}",
                            base.object_name(x),
                            base.object_name(y),
                            m.shape(),
                            (values[x].dim(), values[y].dim())
                        )));
                    }
                }
            }
        }
        Ok(DgModule {
            base,
            values,
            actions,
        })
    }

    /// Builds a module from a value table and an action callback
    /// `(x, y, f) ↦ matrix value(y) → value(x)`.
    pub fn from_fn(
        base: Arc<DgCategory>,
        values: Vec<Complex>,
        act: impl Fn(usize, usize, usize) -> Matrix,
    ) -> Result<Self> {
        let n = base.len();
        let actions = (0..n * n)
            .map(|k| {
                (0..base.hom_dim(k / n, k % n))
                    .map(|f| act(k / n, k % n, f))
                    .collect()
            })
            .collect();
        DgModule::new(base, values, actions)
    }

    pub fn zero(base: Arc<DgCategory>) -> Self {
        let field = base.field();
        let values = vec![Complex::zero(field); base.len()];
        DgModule::from_fn(base, values, |_, _, _| Matrix::zeros(field, 0, 0))
            .expect("zero module shapes")
    }

    /// The representable module `h^x = hom(−, x)`, acting by precomposition:
    /// `f: w → v` sends `φ ∈ hom(v, x)` to `(-1)^{|f||φ|} φ ∘ f`.
    pub fn yoneda(base: &Arc<DgCategory>, x: usize) -> Result<Self> {
        if x >= base.len() {
            return Err(Error::UnknownObject(format!("object index {x}")));
        }
        let a = base.clone();
        let field = a.field();
        let values = (0..a.len()).map(|w| a.hom(w, x).clone()).collect();
        DgModule::from_fn(base.clone(), values, |w, v, f| {
            let df = a.basis_degree(w, v, f) as i64;
            let cols = (0..a.hom_dim(v, x))
                .map(|phi| {
                    let s = field.sign(df * a.basis_degree(v, x, phi) as i64);
                    crate::linalg::sparse::scale(a.compose_basis(w, v, x, phi, f), &s)
                })
                .collect();
            crate::category::sparse_columns(field, a.hom_dim(w, x), cols)
        })
    }

    pub fn yoneda_named(base: &Arc<DgCategory>, x: &str) -> Result<Self> {
        DgModule::yoneda(base, base.object_index(x)?)
    }

    pub fn yoneda_all(base: &Arc<DgCategory>) -> Vec<DgModule> {
        (0..base.len())
            .map(|x| DgModule::yoneda(base, x).expect("object in range"))
            .collect()
    }

    /// The module with value `K` in degree 0 at `x` and zero elsewhere, where
    /// the unit of `x` acts by 1 and every other basis element by 0. Fails
    /// when this is not a dg module (for example when `x` has an invertible
    /// non-unit endomorphism).
    pub fn simple(base: &Arc<DgCategory>, x: usize) -> Result<Self> {
        if x >= base.len() {
            return Err(Error::UnknownObject(format!("object index {x}")));
        }
        let field = base.field();
        let unit = base.unit(x);
        let unit_basis = match unit.as_slice() {
            [(i, c)] if c.is_one() => *i,
            _ => {
                return Err(Error::InvalidInput(format!(
                    "unit of {} is not a basis element",
                    base.object_name(x)
                )))
            }
        };
        let values = (0..base.len())
            .map(|w| {
                if w == x {
                    Complex::unit(field)
                } else {
                    Complex::zero(field)
                }
            })
            .collect::<Vec<_>>();
        let dims: Vec<usize> = values.iter().map(Complex::dim).collect();
        let m = DgModule::from_fn(base.clone(), values, |w, v, f| {
            if w == x && v == x && f == unit_basis {
                Matrix::identity(field, 1)
            } else {
                Matrix::zeros(field, dims[w], dims[v])
            }
        })?;
        let report = m.validate();
        if !report.passed() {
            return Err(Error::InvalidInput(format!(
                "no simple module at {}: {report}",
                base.object_name(x)
            )));
        }
        Ok(m)
    }

    pub fn base(&self) -> &Arc<DgCategory> {
        &self.base
    }

    pub fn field(&self) -> Field {
        self.base.field()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, x: usize) -> &Complex {
        &self.values[x]
    }

    pub fn values(&self) -> &[Complex] {
        &self.values
    }

    pub fn total_dim(&self) -> usize {
        self.values.iter().map(Complex::dim).sum()
    }

    /// Action of the basis element `f ∈ hom(x, y)`.
    pub fn action(&self, x: usize, y: usize, f: usize) -> &Matrix {
        &self.actions[x * self.len() + y][f]
    }

    pub fn actions(&self, x: usize, y: usize) -> &[Matrix] {
        &self.actions[x * self.len() + y]
    }

    /// Action of an arbitrary element of `hom(x, y)`.
    pub fn act(&self, x: usize, y: usize, f: &SparseVec) -> Matrix {
        let mut out = Matrix::zeros(self.field(), self.values[x].dim(), self.values[y].dim());
        for (i, c) in f {
            out = out.add(&self.action(x, y, *i).scale(c));
        }
        out
    }

    /// Returns a copy with one action matrix replaced (for mutation testing).
    pub fn with_action(&self, x: usize, y: usize, f: usize, m: Matrix) -> Result<DgModule> {
        let mut actions = self.actions.clone();
        actions[x * self.len() + y][f] = m;
        DgModule::new(self.base.clone(), self.values.clone(), actions)
    }

    /// Same tables over a different base with identical shape, e.g. `A` versus `K ⊗ A`.
    pub fn rebase(&self, base: Arc<DgCategory>) -> Result<DgModule> {
        let n = self.len();
        let same_shape = base.len() == n
            && base.field() == self.field()
            && (0..n)
                .all(|x| (0..n).all(|y| base.hom(x, y).degrees() == self.base.hom(x, y).degrees()));
        if !same_shape {
            return Err(Error::BaseMismatch(
                "rebasing onto a category of a different shape".into(),
            ));
        }
        Ok(DgModule {
            base,
            values: self.values.clone(),
            actions: self.actions.clone(),
        })
    }

    /// Checks the complexes and every action identity on basis elements.
    pub fn validate(&self) -> ValidationReport {
        let n = self.len();
        let a = &*self.base;
        let field = self.field();
        let mut report = ValidationReport::default();
        for x in 0..n {
            let r = self.values[x].validate();
            if !r.passed() {
                report.push(
                    Identity::DSquared,
                    vec![a.object_name(x).to_string()],
                    format!("d² ≠ 0 in degrees {:?}", r.failing_degrees),
                );
            }
            if !self.act(x, x, a.unit(x)).is_identity() {
                report.push(
                    Identity::ActionUnit,
                    vec![a.object_name(x).to_string()],
                    "the unit does not act as the identity",
                );
            }
        }
        let pairs: Vec<ValidationReport> = par::map_range(n * n, |k| {
            let (x, y) = (k / n, k % n);
            let mut report = ValidationReport::default();
            let names = vec![a.object_name(x).to_string(), a.object_name(y).to_string()];
            let (vx, vy) = (&self.values[x], &self.values[y]);
            for f in 0..a.hom_dim(x, y) {
                let m = self.action(x, y, f);
                let df = a.basis_degree(x, y, f);
                if let Some((r, c, _)) = m
                    .entries()
                    .find(|(r, c, _)| vx.degree(*r) != vy.degree(*c) + df)
                {
                    report.push(
                        Identity::ActionDegree,
                        names.clone(),
                        format!(
                            "action of {} has entry ({r},{c}) off degree {df}",
                            a.labels(x, y)[f]
                        ),
                    );
                }
                let lhs = vx
                    .d()
                    .mul(m)
                    .sub(&m.mul(vy.d()).scale(&field.sign(df as i64)));
                let rhs = self.act(x, y, &a.hom(x, y).d().column_sparse(f));
                if lhs != rhs {
                    report.push(
                        Identity::ActionDifferential,
                        names.clone(),
                        format!("d∘M({f}) ∓ M({f})∘d ≠ M(d{f})", f = a.labels(x, y)[f]),
                    );
                }
            }
            report
        });
        for r in pairs {
            report.extend(r);
        }
        let triples: Vec<ValidationReport> = par::map_range(n * n * n, |k| {
            self.check_composition(k / (n * n), (k / n) % n, k % n)
        });
        for r in triples {
            report.extend(r);
        }
        report
    }

    fn check_composition(&self, x: usize, y: usize, z: usize) -> ValidationReport {
        let a = &*self.base;
        let field = self.field();
        let mut report = ValidationReport::default();
        for g in 0..a.hom_dim(y, z) {
            for f in 0..a.hom_dim(x, y) {
                let lhs = self.act(x, z, a.compose_basis(x, y, z, g, f));
                let sign =
                    field.sign(a.basis_degree(x, y, f) as i64 * a.basis_degree(y, z, g) as i64);
                let rhs = self.action(x, y, f).mul(self.action(y, z, g)).scale(&sign);
                if lhs != rhs {
                    report.push(
                        Identity::ActionComposition,
                        vec![
                            a.object_name(x).to_string(),
                            a.object_name(y).to_string(),
                            a.object_name(z).to_string(),
                        ],
                        format!(
                            "M({g} ∘ {f}) ≠ ±M({f}) ∘ M({g})",
                            g = a.labels(y, z)[g],
                            f = a.labels(x, y)[f]
                        ),
                    );
                    return report;
                }
            }
        }
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passed()
    }

    /// `M[k]`: values shifted by `k`, actions scaled by `(-1)^{k|f|}`.
    pub fn shift(&self, k: i32) -> DgModule {
        let field = self.field();
        let n = self.len();
        let actions = (0..n * n)
            .map(|p| {
                let (x, y) = (p / n, p % n);
                self.actions[p]
                    .iter()
                    .enumerate()
                    .map(|(f, m)| {
                        m.scale(&field.sign(k as i64 * self.base.basis_degree(x, y, f) as i64))
                    })
                    .collect()
            })
            .collect();
        DgModule {
            base: self.base.clone(),
            values: self.values.iter().map(|v| v.shift(k)).collect(),
            actions,
        }
    }

    /// Direct sum over a common base; summands are stacked in order.
    pub fn direct_sum(base: &Arc<DgCategory>, parts: &[&DgModule]) -> Result<DgModule> {
        if let Some(p) = parts.iter().find(|p| p.base != *base && *p.base != **base) {
            return Err(Error::BaseMismatch(format!(
                "summand over a different category ({} objects)",
                p.len()
            )));
        }
        let field = base.field();
        let values = (0..base.len())
            .map(|x| {
                Complex::direct_sum(field, &parts.iter().map(|p| p.value(x)).collect::<Vec<_>>())
            })
            .collect();
        DgModule::from_fn(base.clone(), values, |x, y, f| {
            Matrix::block_diag(
                field,
                &parts.iter().map(|p| p.action(x, y, f)).collect::<Vec<_>>(),
            )
        })
    }

    /// Restriction along a dg functor `G: A → B`: `value(x) = M(G x)`,
    /// `f ↦ M(G f)`. Literal precomposition.
    pub fn restrict(g: &DgFunctor, m: &DgModule) -> Result<DgModule> {
        if *g.target != *m.base {
            return Err(Error::BaseMismatch(
                "functor target differs from the module base".into(),
            ));
        }
        let values = (0..g.source.len())
            .map(|x| m.value(g.object(x)).clone())
            .collect();
        DgModule::from_fn(g.source.clone(), values, |x, y, f| {
            m.act(g.object(x), g.object(y), &g.hom_map(x, y).column_sparse(f))
        })
    }

    /// `M ⊠ N` over `A ⊗ B` with value `M(x) ⊗ N(y)` at `(x, y)`. The basis
    /// element `f ⊗ g` acts by `v ⊗ w ↦ (-1)^{|g||v|} M(f)v ⊗ N(g)w`.
    pub fn external_tensor(m: &DgModule, n: &DgModule) -> Result<DgModule> {
        if m.field() != n.field() {
            return Err(Error::FieldMismatch {
                expected: m.field(),
                found: n.field(),
            });
        }
        let base = Arc::new(DgCategory::tensor(&m.base, &n.base)?);
        DgModule::external_tensor_over(base, m, n)
    }

    /// [`DgModule::external_tensor`] over a caller-supplied copy of `A ⊗ B`.
    pub(crate) fn external_tensor_over(
        base: Arc<DgCategory>,
        m: &DgModule,
        n: &DgModule,
    ) -> Result<DgModule> {
        let (a, b) = (&*m.base, &*n.base);
        let nb = b.len();
        let values = (0..a.len() * nb)
            .map(|k| Complex::tensor(m.value(k / nb), n.value(k % nb)))
            .collect::<Result<Vec<_>>>()?;
        DgModule::from_fn(base, values, |p, q, k| {
            let (x, y, x2, y2) = (p / nb, p % nb, q / nb, q % nb);
            let bd = b.hom_dim(y, y2);
            let (f, g) = (k / bd, k % bd);
            let dg = b.basis_degree(y, y2, g);
            let signed = if dg % 2 == 0 {
                m.action(x, x2, f).clone()
            } else {
                m.action(x, x2, f).mul(&m.value(x2).parity_matrix())
            };
            signed.kron(n.action(y, y2, g))
        })
    }

    pub fn is_acyclic(&self) -> AcyclicityTag {
        let mut cohomology = Vec::new();
        for (x, v) in self.values.iter().enumerate() {
            let betti: BTreeMap<i32, usize> =
                v.betti().into_iter().filter(|(_, b)| *b > 0).collect();
            if !betti.is_empty() {
                cohomology.push((self.base.object_name(x).to_string(), betti));
            }
        }
        AcyclicityTag {
            acyclic: cohomology.is_empty(),
            cohomology,
        }
    }

    /// Per object, the dimension of the value in each degree.
    pub fn dims(&self) -> Vec<BTreeMap<i32, usize>> {
        self.values.iter().map(Complex::dims).collect()
    }
}
