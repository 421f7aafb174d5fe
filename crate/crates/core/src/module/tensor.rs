//! Tensor products of dg modules as cokernels of the `Ξ` relations.
//!
//! For `M` over `L ⊗ B` and `N` over `B^op ⊗ R`, the value of `M ⊗_B N` at
//! `(l, r)` is the quotient of `⊕_b M(l,b) ⊗ N(b,r)` by the span of
//! `M(f)v₁ ⊗ v₂ - (-1)^{|v₁||f|} v₁ ⊗ N(f)v₂` for every basis triple
//! `(v₁, f, v₂)`, with `f` ranging over all degrees.

use std::sync::Arc;

use serde::Serialize;

use super::{DgModule, NatTransform};
use crate::category::{sparse_kron, DgCategory};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::linalg::{Cokernel, Echelon, Matrix, Scalar, SparseVec};
use crate::par;
use crate::validation::Verdict;

#[derive(Clone, Debug)]
struct Slice {
    /// Start of the summand `M(l,b) ⊗ N(b,r)` in the pre-quotient space, per `b`.
    offsets: Vec<usize>,
    pre: Complex,
    cokernel: Cokernel,
}

/// `M ⊗_B N` together with the quotient data needed to move between pure
/// tensors and the chosen cokernel basis.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub module: Arc<DgModule>,
    left: Arc<DgCategory>,
    middle: Arc<DgCategory>,
    right: Arc<DgCategory>,
    m: Arc<DgModule>,
    n: Arc<DgModule>,
    slices: Vec<Slice>,
}

impl TensorProduct {
    pub fn left(&self) -> &Arc<DgCategory> {
        &self.left
    }

    pub fn middle(&self) -> &Arc<DgCategory> {
        &self.middle
    }

    pub fn right(&self) -> &Arc<DgCategory> {
        &self.right
    }

    pub fn first(&self) -> &Arc<DgModule> {
        &self.m
    }

    pub fn second(&self) -> &Arc<DgModule> {
        &self.n
    }

    /// The uncollapsed sum `⊕_b M(l,b) ⊗ N(b,r)` at result object `obj = l * |R| + r`.
    pub fn pre_space(&self, obj: usize) -> &Complex {
        &self.slices[obj].pre
    }

    pub fn summand_offset(&self, obj: usize, b: usize) -> usize {
        self.slices[obj].offsets[b]
    }

    /// Class of `v_i ⊗ w_j` from summand `b` in the quotient at `obj`.
    pub fn class_of_pure(&self, obj: usize, b: usize, i: usize, j: usize) -> Vec<Scalar> {
        let r = obj % self.right.len();
        let nr = self.right.len();
        let width = self.n.value(b * nr + r).dim();
        let s = &self.slices[obj];
        s.cokernel
            .projection
            .column_vec(s.offsets[b] + i * width + j)
    }

    /// Projection of a pre-space vector to the quotient at `obj`.
    pub fn project(&self, obj: usize, v: &[Scalar]) -> Vec<Scalar> {
        self.slices[obj].cokernel.projection.apply(v)
    }

    pub fn projection(&self, obj: usize) -> &Matrix {
        &self.slices[obj].cokernel.projection
    }

    /// The pre-space representative chosen for each quotient basis vector.
    pub fn section(&self, obj: usize) -> &Matrix {
        &self.slices[obj].cokernel.section
    }

    /// `θ ⊗ 1: M₁ ⊗ N → M₂ ⊗ N` for `θ: M₁ → M₂`, where `self = M₁ ⊗ N`
    /// and `target = M₂ ⊗ N`.
    pub fn induced_left(
        &self,
        theta: &NatTransform,
        target: &TensorProduct,
    ) -> Result<NatTransform> {
        if *theta.source() != self.m || *theta.target() != target.m || *self.n != *target.n {
            return Err(Error::BaseMismatch(
                "transformation does not match the tensor factors".into(),
            ));
        }
        let nb = self.middle.len();
        let nr = self.right.len();
        let field = self.module.field();
        let components = (0..self.module.len())
            .map(|obj| {
                let (l, r) = (obj / nr, obj % nr);
                let blocks: Vec<Matrix> = (0..nb)
                    .map(|b| {
                        theta
                            .component(l * nb + b)
                            .kron(&Matrix::identity(field, self.n.value(b * nr + r).dim()))
                    })
                    .collect();
                let pre = Matrix::block_diag(field, &blocks.iter().collect::<Vec<_>>());
                target.projection(obj).mul(&pre).mul(self.section(obj))
            })
            .collect();
        NatTransform::new(
            self.module.clone(),
            target.module.clone(),
            theta.degree(),
            components,
        )
    }

    /// `1 ⊗ ψ: M ⊗ N₁ → M ⊗ N₂`, `v ⊗ w ↦ (-1)^{|ψ||v|} v ⊗ ψ(w)`.
    pub fn induced_right(
        &self,
        psi: &NatTransform,
        target: &TensorProduct,
    ) -> Result<NatTransform> {
        if *psi.source() != self.n || *psi.target() != target.n || *self.m != *target.m {
            return Err(Error::BaseMismatch(
                "transformation does not match the tensor factors".into(),
            ));
        }
        let nb = self.middle.len();
        let nr = self.right.len();
        let field = self.module.field();
        let components = (0..self.module.len())
            .map(|obj| {
                let (l, r) = (obj / nr, obj % nr);
                let blocks: Vec<Matrix> = (0..nb)
                    .map(|b| {
                        let v = self.m.value(l * nb + b);
                        let left = if psi.degree() % 2 == 0 {
                            Matrix::identity(field, v.dim())
                        } else {
                            v.parity_matrix()
                        };
                        left.kron(psi.component(b * nr + r))
                    })
                    .collect();
                let pre = Matrix::block_diag(field, &blocks.iter().collect::<Vec<_>>());
                target.projection(obj).mul(&pre).mul(self.section(obj))
            })
            .collect();
        NatTransform::new(
            self.module.clone(),
            target.module.clone(),
            psi.degree(),
            components,
        )
    }
}

/// `M ⊗_B N` for `M` over `left ⊗ middle` and `N` over `middle^op ⊗ right`;
/// the result lives over `left ⊗ right`.
pub fn tensor_over_middle(
    m: &Arc<DgModule>,
    left: &Arc<DgCategory>,
    middle: &Arc<DgCategory>,
    n: &Arc<DgModule>,
    right: &Arc<DgCategory>,
) -> Result<TensorProduct> {
    if **m.base() != DgCategory::tensor(left, middle)? {
        return Err(Error::BaseMismatch(
            "first factor is not a module over left ⊗ middle".into(),
        ));
    }
    if **n.base() != DgCategory::tensor(&middle.opposite(), right)? {
        return Err(Error::BaseMismatch(
            "second factor is not a module over middle^op ⊗ right".into(),
        ));
    }
    let base = Arc::new(DgCategory::tensor(left, right)?);
    let (nl, nr) = (left.len(), right.len());
    let factors = Factors {
        m,
        left,
        middle,
        n,
        right,
    };
    let slices: Vec<Slice> = par::map_range(nl * nr, |obj| factors.slice(obj / nr, obj % nr));
    let values = slices
        .iter()
        .map(|s| {
            s.pre.induced(
                s.cokernel.free.iter().map(|&c| s.pre.degree(c)).collect(),
                &s.cokernel.projection,
                &s.cokernel.section,
            )
        })
        .collect();
    let field = base.field();
    let nb = middle.len();
    let module = DgModule::from_fn(base, values, |p, q, k| {
        let (l, r, l2, r2) = (p / nr, p % nr, q / nr, q % nr);
        let rd = right.hom_dim(r, r2);
        let (alpha, gamma) = (k / rd, k % rd);
        let odd = right.basis_degree(r, r2, gamma) % 2 != 0;
        let blocks: Vec<Matrix> = (0..nb)
            .map(|b| {
                let on_m = m.act(
                    l * nb + b,
                    l2 * nb + b,
                    &sparse_kron(
                        &vec![(alpha, field.one())],
                        middle.unit(b),
                        middle.hom_dim(b, b),
                        &field.one(),
                    ),
                );
                let on_n = n.act(
                    b * nr + r,
                    b * nr + r2,
                    &sparse_kron(
                        middle.unit(b),
                        &vec![(gamma, field.one())],
                        rd,
                        &field.one(),
                    ),
                );
                let on_m = if odd {
                    on_m.mul(&m.value(l2 * nb + b).parity_matrix())
                } else {
                    on_m
                };
                on_m.kron(&on_n)
            })
            .collect();
        let pre = Matrix::block_diag(field, &blocks.iter().collect::<Vec<_>>());
        slices[p]
            .cokernel
            .projection
            .mul(&pre)
            .mul(&slices[q].cokernel.section)
    })?;
    Ok(TensorProduct {
        module: Arc::new(module),
        left: left.clone(),
        middle: middle.clone(),
        right: right.clone(),
        m: m.clone(),
        n: n.clone(),
        slices,
    })
}

struct Factors<'a> {
    m: &'a DgModule,
    left: &'a DgCategory,
    middle: &'a DgCategory,
    n: &'a DgModule,
    right: &'a DgCategory,
}

impl Factors<'_> {
    fn slice(&self, l: usize, r: usize) -> Slice {
        let (m, n, middle) = (self.m, self.n, self.middle);
        let field = m.field();
        let nb = middle.len();
        let nr = self.right.len();
        let mut offsets = Vec::with_capacity(nb);
        let mut parts = Vec::with_capacity(nb);
        let mut total = 0;
        for b in 0..nb {
            offsets.push(total);
            let t = Complex::tensor(m.value(l * nb + b), n.value(b * nr + r)).expect("same field");
            total += t.dim();
            parts.push(t);
        }
        let pre = Complex::direct_sum(field, &parts.iter().collect::<Vec<_>>());
        let mut ech = Echelon::new(field, total);
        let (unit_l, unit_r) = (self.left.unit(l), self.right.unit(r));
        let rr = self.right.hom_dim(r, r);
        for b in 0..nb {
            for b2 in 0..nb {
                let (mb2, nb1, nb2) = (
                    m.value(l * nb + b2),
                    n.value(b * nr + r),
                    n.value(b2 * nr + r),
                );
                for f in 0..middle.hom_dim(b, b2) {
                    let e_f = vec![(f, field.one())];
                    let df = middle.basis_degree(b, b2, f) as i64;
                    // 1_l ⊗ f acting on M(l, b2) → M(l, b); f ⊗ 1_r acting on N(b, r) → N(b2, r).
                    let on_m = m.act(
                        l * nb + b,
                        l * nb + b2,
                        &sparse_kron(unit_l, &e_f, middle.hom_dim(b, b2), &field.one()),
                    );
                    let on_n = n.act(
                        b2 * nr + r,
                        b * nr + r,
                        &sparse_kron(&e_f, unit_r, rr, &field.one()),
                    );
                    let on_m_cols = on_m.transpose();
                    let on_n_cols = on_n.transpose();
                    for v1 in 0..mb2.dim() {
                        let sign = field.sign(mb2.degree(v1) as i64 * df);
                        for v2 in 0..nb1.dim() {
                            let mut rel: SparseVec = Vec::new();
                            for (i, c) in on_m_cols.row(v1) {
                                rel.push((offsets[b] + i * nb1.dim() + v2, c.clone()));
                            }
                            for (j, c) in on_n_cols.row(v2) {
                                rel.push((offsets[b2] + v1 * nb2.dim() + j, c.mul(&sign).neg()));
                            }
                            let rel = normalize(rel);
                            if !rel.is_empty() {
                                ech.insert(&rel);
                            }
                        }
                    }
                }
            }
        }
        Slice {
            offsets,
            pre,
            cokernel: Cokernel::from_echelon(&ech),
        }
    }
}

/// Sorts entries and merges repeated indices, dropping zeros.
fn normalize(mut v: Vec<(usize, Scalar)>) -> SparseVec {
    v.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, c) in v {
        match out.last_mut() {
            Some((j, acc)) if *j == i => *acc = acc.add(&c),
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// `M ⊗_A N` as a complex, for `M` over `A` and `N` over `A^op`.
pub fn tensor_over(m: &DgModule, n: &DgModule) -> Result<Complex> {
    let a = m.base();
    if **n.base() != a.opposite() {
        return Err(Error::BaseMismatch(
            "second factor must be a module over the opposite category".into(),
        ));
    }
    let k = Arc::new(DgCategory::unit_category(a.field()));
    let m2 = Arc::new(m.rebase(Arc::new(DgCategory::tensor(&k, a)?))?);
    let n2 = Arc::new(n.rebase(Arc::new(DgCategory::tensor(&a.opposite(), &k)?))?);
    let t = tensor_over_middle(&m2, &k, a, &n2, &k)?;
    Ok(t.module.value(0).clone())
}

/// `θ ⊗ 1_N` for `θ: M₁ → M₂` over `left ⊗ middle` and `N` over `middle^op ⊗ right`.
pub fn induced_tensor_map(
    theta: &NatTransform,
    n: &Arc<DgModule>,
    left: &Arc<DgCategory>,
    middle: &Arc<DgCategory>,
    right: &Arc<DgCategory>,
) -> Result<NatTransform> {
    let t1 = tensor_over_middle(theta.source(), left, middle, n, right)?;
    let t2 = tensor_over_middle(theta.target(), left, middle, n, right)?;
    t1.induced_left(theta, &t2)
}

/// Battery-relative h-flatness evidence: `M ⊗_A N` for each acyclic `N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HFlatReport {
    /// `Yes` when every acyclic battery entry gives an acyclic tensor
    /// product; this is evidence relative to the battery, not a proof.
    pub verdict: Verdict,
    pub battery_size: usize,
    /// Battery indices skipped because the entry was not acyclic.
    pub skipped: Vec<usize>,
    /// Battery indices whose tensor product has cohomology.
    pub failures: Vec<usize>,
}

/// Tensors `M` (over `A`) with each `A^op`-module of the battery.
pub fn check_hflat(m: &DgModule, battery: &[DgModule]) -> Result<HFlatReport> {
    let results: Vec<Result<Option<bool>>> = par::map(battery, |n| {
        if !n.is_acyclic().acyclic {
            return Ok(None);
        }
        Ok(Some(tensor_over(m, n)?.is_acyclic()))
    });
    let mut skipped = Vec::new();
    let mut failures = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r? {
            None => skipped.push(i),
            Some(false) => failures.push(i),
            Some(true) => {}
        }
    }
    Ok(HFlatReport {
        verdict: Verdict::from_bool(failures.is_empty()),
        battery_size: battery.len(),
        skipped,
        failures,
    })
}
