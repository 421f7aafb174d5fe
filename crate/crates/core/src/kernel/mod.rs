//! Kernels (bimodules over `A^op ⊗ B`), their curried functors `A → dgm(B)`,
//! and the extension, restriction and composition operations built on them.

mod adjunction;
mod compare;

use std::sync::Arc;

pub use adjunction::{check_adjunction, AdjunctionReport};
pub use compare::{
    associator, check_associativity, ext_sum_iso, ext_yoneda_iso, extcomp_iso, kerprod_ext_iso,
    kerprod_value_iso, left_unit_iso, res_yoneda_iso, right_unit_iso, IsoCheck,
};

use crate::category::{DgCategory, DgFunctor};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseVec};
use crate::module::{
    module_hom_complex, tensor_over_middle, DgModule, HomComplex, NatTransform, TensorProduct,
};
use crate::par;
use crate::validation::{Identity, ValidationReport};

/// A kernel from `A` to `B`: a dg module over `A^op ⊗ B`, whose object
/// `(x, y)` sits at index `x * |B| + y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    left: Arc<DgCategory>,
    right: Arc<DgCategory>,
    carrier: Arc<DgModule>,
}

impl Kernel {
    pub fn new(left: Arc<DgCategory>, right: Arc<DgCategory>, carrier: DgModule) -> Result<Self> {
        let expected = DgCategory::tensor(&left.opposite(), &right)?;
        if **carrier.base() != expected {
            return Err(Error::BaseMismatch(
                "kernel carrier must be a module over A^op ⊗ B".into(),
            ));
        }
        Ok(Kernel {
            left,
            right,
            carrier: Arc::new(carrier),
        })
    }

    /// Reinterprets a module over a category with the same tables as `A^op ⊗ B`.
    pub fn from_module(
        left: Arc<DgCategory>,
        right: Arc<DgCategory>,
        carrier: &DgModule,
    ) -> Result<Self> {
        let base = Arc::new(DgCategory::tensor(&left.opposite(), &right)?);
        Kernel::new(left, right, carrier.rebase(base)?)
    }

    pub fn zero(left: Arc<DgCategory>, right: Arc<DgCategory>) -> Result<Self> {
        let base = Arc::new(DgCategory::tensor(&left.opposite(), &right)?);
        Kernel::new(left, right, DgModule::zero(base))
    }

    pub fn left(&self) -> &Arc<DgCategory> {
        &self.left
    }

    pub fn right(&self) -> &Arc<DgCategory> {
        &self.right
    }

    pub fn carrier(&self) -> &Arc<DgModule> {
        &self.carrier
    }

    /// Value at `(x, y)`.
    pub fn value(&self, x: usize, y: usize) -> &crate::Complex {
        self.carrier.value(x * self.right.len() + y)
    }

    pub fn validate(&self) -> ValidationReport {
        self.carrier.validate()
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passed()
    }

    /// Action of `f ⊗ 1_y` for `f ∈ hom_A(x2, x)` (as an element), mapping `E(x2, y) → E(x, y)`.
    pub(crate) fn act_left(&self, x: usize, x2: usize, y: usize, f: &SparseVec) -> Matrix {
        let nb = self.right.len();
        let b = &*self.right;
        let element = crate::category::sparse_kron(f, b.unit(y), b.hom_dim(y, y), &b.field().one());
        self.carrier.act(x * nb + y, x2 * nb + y, &element)
    }

    /// Action of `1_x ⊗ g` for `g ∈ hom_B(y, y2)`, mapping `E(x, y2) → E(x, y)`.
    pub(crate) fn act_right(&self, x: usize, y: usize, y2: usize, g: &SparseVec) -> Matrix {
        let nb = self.right.len();
        let a = &*self.left;
        let element =
            crate::category::sparse_kron(a.unit(x), g, self.right.hom_dim(y, y2), &a.field().one());
        self.carrier.act(x * nb + y, x * nb + y2, &element)
    }
}

/// A dg functor `A → dgm(B)`: one `B`-module per object of `A` and, per
/// basis element `f: x → x'`, a transformation `F(x) → F(x')` of degree `|f|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleValuedFunctor {
    source: Arc<DgCategory>,
    target_base: Arc<DgCategory>,
    objects: Vec<Arc<DgModule>>,
    /// `morphisms[x * n + x2][f]` for `f ∈ hom_A(x, x2)`.
    morphisms: Vec<Vec<NatTransform>>,
}

impl ModuleValuedFunctor {
    pub fn new(
        source: Arc<DgCategory>,
        target_base: Arc<DgCategory>,
        objects: Vec<Arc<DgModule>>,
        morphisms: Vec<Vec<NatTransform>>,
    ) -> Result<Self> {
        let n = source.len();
        if objects.len() != n || morphisms.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "functor tables do not match {n} objects"
            )));
        }
        if objects.iter().any(|m| **m.base() != *target_base) {
            return Err(Error::BaseMismatch(
                "functor values must be modules over the target base".into(),
            ));
        }
        for x in 0..n {
            for x2 in 0..n {
                let ts = &morphisms[x * n + x2];
                if ts.len() != source.hom_dim(x, x2) {
                    return Err(Error::DimensionMismatch(format!(
                        "{} transformations for hom({}, {})",
                        ts.len(),
                        source.object_name(x),
                        source.object_name(x2)
                    )));
                }
                if ts
                    .iter()
                    .any(|t| *t.source() != objects[x] || *t.target() != objects[x2])
                {
                    return Err(Error::InvalidInput(format!(
                        "transformation for hom({}, {}) has the wrong endpoints",
                        source.object_name(x),
                        source.object_name(x2)
                    )));
                }
            }
        }
        Ok(ModuleValuedFunctor {
            source,
            target_base,
            objects,
            morphisms,
        })
    }

    /// The Yoneda embedding `x ↦ h^x`, `f ↦ f ∘ −`.
    pub fn yoneda(a: &Arc<DgCategory>) -> Self {
        let field = a.field();
        let n = a.len();
        let objects: Vec<Arc<DgModule>> =
            DgModule::yoneda_all(a).into_iter().map(Arc::new).collect();
        let morphisms = (0..n * n)
            .map(|k| {
                let (x, x2) = (k / n, k % n);
                (0..a.hom_dim(x, x2))
                    .map(|f| {
                        let e = vec![(f, field.one())];
                        let components = (0..n)
                            .map(|w| a.left_composition_matrix(w, x, x2, &e))
                            .collect();
                        NatTransform::new(
                            objects[x].clone(),
                            objects[x2].clone(),
                            a.basis_degree(x, x2, f),
                            components,
                        )
                        .expect("postcomposition shapes")
                    })
                    .collect()
            })
            .collect();
        ModuleValuedFunctor {
            source: a.clone(),
            target_base: a.clone(),
            objects,
            morphisms,
        }
    }

    /// `F ∘ G` for a dg functor `G: C → A`.
    pub fn precompose(&self, g: &DgFunctor) -> Result<Self> {
        if *g.target != *self.source {
            return Err(Error::BaseMismatch(
                "functor target differs from the source category".into(),
            ));
        }
        let c = g.source.clone();
        let n = c.len();
        let objects = (0..n).map(|x| self.objects[g.object(x)].clone()).collect();
        let morphisms = (0..n * n)
            .map(|k| {
                let (x, x2) = (k / n, k % n);
                (0..c.hom_dim(x, x2))
                    .map(|f| {
                        self.apply(
                            g.object(x),
                            g.object(x2),
                            &g.hom_map(x, x2).column_sparse(f),
                            c.basis_degree(x, x2, f),
                        )
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        ModuleValuedFunctor::new(c, self.target_base.clone(), objects, morphisms)
    }

    pub fn source(&self) -> &Arc<DgCategory> {
        &self.source
    }

    pub fn target_base(&self) -> &Arc<DgCategory> {
        &self.target_base
    }

    pub fn object(&self, x: usize) -> &Arc<DgModule> {
        &self.objects[x]
    }

    pub fn morphism(&self, x: usize, x2: usize, f: usize) -> &NatTransform {
        &self.morphisms[x * self.source.len() + x2][f]
    }

    /// `F(f)` for a homogeneous element `f ∈ hom(x, x2)` of the given degree.
    pub fn apply(&self, x: usize, x2: usize, f: &SparseVec, degree: i32) -> Result<NatTransform> {
        let mut out = NatTransform::zero(self.objects[x].clone(), self.objects[x2].clone(), degree);
        for (i, c) in f {
            out = out.add(&self.morphism(x, x2, *i).scale(c))?;
        }
        Ok(out)
    }

    /// Checks every value, every transformation, units, composition and the
    /// chain-map condition `F(df) = d F(f)`.
    pub fn validate(&self) -> ValidationReport {
        let a = &*self.source;
        let n = a.len();
        let mut report = ValidationReport::default();
        for (x, m) in self.objects.iter().enumerate() {
            for mut v in m.validate().violations {
                v.objects.insert(0, a.object_name(x).to_string());
                report.violations.push(v);
            }
        }
        for x in 0..n {
            for x2 in 0..n {
                let names = vec![a.object_name(x).to_string(), a.object_name(x2).to_string()];
                for f in 0..a.hom_dim(x, x2) {
                    let t = self.morphism(x, x2, f);
                    if t.degree() != a.basis_degree(x, x2, f) {
                        report.push(
                            Identity::FunctorDegree,
                            names.clone(),
                            format!("F({}) has degree {}", a.labels(x, x2)[f], t.degree()),
                        );
                    }
                    for v in t.validate().violations {
                        report.push(
                            v.identity,
                            names.clone(),
                            format!("F({}): {}", a.labels(x, x2)[f], v.witness),
                        );
                    }
                    let df = a.hom(x, x2).d().column_sparse(f);
                    let ok = self
                        .apply(x, x2, &df, t.degree() + 1)
                        .map(|rhs| rhs == t.differential())
                        .unwrap_or(false);
                    if !ok {
                        report.push(
                            Identity::FunctorChainMap,
                            names.clone(),
                            format!("F(d{0}) ≠ d F({0})", a.labels(x, x2)[f]),
                        );
                    }
                }
            }
            let unit = self.apply(x, x, a.unit(x), 0);
            if unit
                .map(|u| u != NatTransform::identity(&self.objects[x]))
                .unwrap_or(true)
            {
                report.push(
                    Identity::FunctorUnit,
                    vec![a.object_name(x).to_string()],
                    "F(id) ≠ id",
                );
            }
        }
        let triples: Vec<ValidationReport> = par::map_range(n * n * n, |k| {
            let (x, y, z) = (k / (n * n), (k / n) % n, k % n);
            let mut report = ValidationReport::default();
            'outer: for g in 0..a.hom_dim(y, z) {
                for f in 0..a.hom_dim(x, y) {
                    let deg = a.basis_degree(x, y, f) + a.basis_degree(y, z, g);
                    let lhs = self.apply(x, z, a.compose_basis(x, y, z, g, f), deg);
                    let rhs = self.morphism(y, z, g).compose(self.morphism(x, y, f));
                    if lhs.ok() != rhs.ok() {
                        report.push(
                            Identity::FunctorComposition,
                            vec![
                                a.object_name(x).to_string(),
                                a.object_name(y).to_string(),
                                a.object_name(z).to_string(),
                            ],
                            format!(
                                "F({g} ∘ {f}) ≠ F({g}) ∘ F({f})",
                                g = a.labels(y, z)[g],
                                f = a.labels(x, y)[f]
                            ),
                        );
                        break 'outer;
                    }
                }
            }
            report
        });
        for r in triples {
            report.extend(r);
        }
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passed()
    }
}

/// `Φ_E`: `x ↦ E(x, −)`, with `g ∈ hom_B` acting by `1_x ⊗ g` and
/// `Φ_E(f)(y) = E(f ⊗ 1_y)`.
pub fn curry_kernel(e: &Kernel) -> ModuleValuedFunctor {
    let (a, b) = (&e.left, &e.right);
    let field = a.field();
    let (na, nb) = (a.len(), b.len());
    let objects: Vec<Arc<DgModule>> = (0..na)
        .map(|x| {
            let values = (0..nb).map(|y| e.value(x, y).clone()).collect();
            let m = DgModule::from_fn(b.clone(), values, |y, y2, g| {
                e.act_right(x, y, y2, &vec![(g, field.one())])
            })
            .expect("slice shapes");
            Arc::new(m)
        })
        .collect();
    let morphisms = (0..na * na)
        .map(|k| {
            let (x, x2) = (k / na, k % na);
            (0..a.hom_dim(x, x2))
                .map(|f| {
                    let components = (0..nb)
                        .map(|y| e.act_left(x2, x, y, &vec![(f, field.one())]))
                        .collect();
                    NatTransform::new(
                        objects[x].clone(),
                        objects[x2].clone(),
                        a.basis_degree(x, x2, f),
                        components,
                    )
                    .expect("component shapes")
                })
                .collect()
        })
        .collect();
    ModuleValuedFunctor {
        source: a.clone(),
        target_base: b.clone(),
        objects,
        morphisms,
    }
}

/// Inverse of [`curry_kernel`]: `E(x, y) = F(x)(y)`, with `f ⊗ g` acting by
/// `F(f)(y) ∘ F(x')(g)` for `f: x' → x` in `A`.
pub fn uncurry_functor(f: &ModuleValuedFunctor) -> Result<Kernel> {
    let (a, b) = (&f.source, &f.target_base);
    let base = Arc::new(DgCategory::tensor(&a.opposite(), b)?);
    let nb = b.len();
    let values = (0..a.len() * nb)
        .map(|k| f.objects[k / nb].value(k % nb).clone())
        .collect();
    let carrier = DgModule::from_fn(base, values, |p, q, k| {
        let (x, y, x2, y2) = (p / nb, p % nb, q / nb, q % nb);
        let bd = b.hom_dim(y, y2);
        let (fa, g) = (k / bd, k % bd);
        // fa ∈ hom_{A^op}(x, x2) = hom_A(x2, x)
        f.morphism(x2, x, fa)
            .component(y)
            .mul(f.objects[x2].action(y, y2, g))
    })?;
    Kernel::new(a.clone(), b.clone(), carrier)
}

/// The identity kernel: value `hom_A(y, x)` at `(x, y)`; curries to the Yoneda embedding.
pub fn unit_kernel(a: &Arc<DgCategory>) -> Kernel {
    uncurry_functor(&ModuleValuedFunctor::yoneda(a)).expect("Yoneda embedding is a valid functor")
}

/// `M ⊗_A E`, as the full tensor product over `K ⊗ A` and `A^op ⊗ B`.
pub fn ext_tensor(e: &Kernel, m: &DgModule) -> Result<TensorProduct> {
    if **m.base() != *e.left {
        return Err(Error::BaseMismatch(
            "module is not over the kernel's source category".into(),
        ));
    }
    let k = Arc::new(DgCategory::unit_category(m.field()));
    let m2 = Arc::new(m.rebase(Arc::new(DgCategory::tensor(&k, &e.left)?))?);
    tensor_over_middle(&m2, &k, &e.left, &e.carrier, &e.right)
}

/// `Ext_E(M) = M ⊗_A E`, a module over `B`.
pub fn ext_apply(e: &Kernel, m: &DgModule) -> Result<DgModule> {
    ext_tensor(e, m)?.module.rebase(e.right.clone())
}

/// `res_F(N)`: `x ↦ Hom(F(x), N)`; `f: x → x'` sends `ψ` to `(-1)^{|f||ψ|} ψ ∘ F(f)`.
pub fn res_apply(f: &ModuleValuedFunctor, n: &Arc<DgModule>) -> Result<DgModule> {
    Ok(res_apply_full(f, n)?.0)
}

/// [`res_apply`] together with the hom complexes giving each value its basis.
pub fn res_apply_full(
    f: &ModuleValuedFunctor,
    n: &Arc<DgModule>,
) -> Result<(DgModule, Vec<HomComplex>)> {
    if **n.base() != *f.target_base {
        return Err(Error::BaseMismatch(
            "module is not over the functor's target base".into(),
        ));
    }
    let a = &f.source;
    let field = a.field();
    let homs = par::map(&f.objects, |fx| module_hom_complex(fx, n))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let values = homs.iter().map(|h| h.complex().clone()).collect();
    let module = DgModule::from_fn(a.clone(), values, |x, x2, fb| {
        let ff = f.morphism(x, x2, fb);
        let (src, dst) = (&homs[x2], &homs[x]);
        let cols: Vec<Vec<crate::linalg::Scalar>> = (0..src.dim())
            .map(|i| {
                let psi = src.transform(i);
                let sign = field.sign(ff.degree() as i64 * psi.degree() as i64);
                let composite = psi.compose(ff).expect("matching modules").scale(&sign);
                dst.coordinates(&composite)
                    .expect("composite of natural transformations is natural")
            })
            .collect();
        Matrix::from_columns(field, dst.dim(), &cols)
    })?;
    Ok((module, homs))
}

/// `Ind_G(M) = Ext` along the kernel of `Yon_B ∘ G`.
pub fn ind_apply(g: &DgFunctor, m: &DgModule) -> Result<DgModule> {
    ext_apply(&induction_kernel(g)?, m)
}

/// The kernel `uncurry(Yon_B ∘ G)` from `A` to `B`.
pub fn induction_kernel(g: &DgFunctor) -> Result<Kernel> {
    uncurry_functor(&ModuleValuedFunctor::yoneda(&g.target).precompose(g)?)
}

/// `Res_G(M) = M(G(−))`, literal precomposition.
pub fn res_g_apply(g: &DgFunctor, m: &DgModule) -> Result<DgModule> {
    DgModule::restrict(g, m)
}

/// `E₁ ⊗_B E₂` as a kernel from `A` to `C`.
pub fn compose_kernels(e1: &Kernel, e2: &Kernel) -> Result<Kernel> {
    Ok(compose_kernels_full(e1, e2)?.0)
}

pub fn compose_kernels_full(e1: &Kernel, e2: &Kernel) -> Result<(Kernel, TensorProduct)> {
    if *e1.right != *e2.left {
        return Err(Error::BaseMismatch(
            "middle categories of the kernels differ".into(),
        ));
    }
    let a_op = Arc::new(e1.left.opposite());
    let t = tensor_over_middle(&e1.carrier, &a_op, &e1.right, &e2.carrier, &e2.right)?;
    let k = Kernel {
        left: e1.left.clone(),
        right: e2.right.clone(),
        carrier: t.module.clone(),
    };
    Ok((k, t))
}

/// `E₁ ⊠ E₂` from `A₁ ⊗ A₂` to `B₁ ⊗ B₂`: the external tensor of carriers
/// restricted along the reshuffle `(A₁^op ⊗ A₂^op) ⊗ (B₁ ⊗ B₂) → (A₁^op ⊗ B₁) ⊗ (A₂^op ⊗ B₂)`.
pub fn external_kernel_product(e1: &Kernel, e2: &Kernel) -> Result<Kernel> {
    let (a1, a2) = (e1.left.opposite(), e2.left.opposite());
    let swap = DgFunctor::swap_middle(&a1, &a2, &e1.right, &e2.right)?;
    let ext = DgModule::external_tensor_over(swap.target.clone(), &e1.carrier, &e2.carrier)?;
    let restricted = DgModule::restrict(&swap, &ext)?;
    let left = Arc::new(DgCategory::tensor(&e1.left, &e2.left)?);
    let right = Arc::new(DgCategory::tensor(&e1.right, &e2.right)?);
    Kernel::from_module(left, right, &restricted)
}

/// The kernel `uncurry(Yon_B ∘ F)` of a dg functor `F: A → B`.
pub fn functor_kernel(f: &DgFunctor) -> Result<Kernel> {
    induction_kernel(f)
}
