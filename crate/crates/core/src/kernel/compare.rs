//! Explicit comparison maps between kernel constructions, each checked to
//! be a well-defined, closed, natural, invertible degree-0 transformation.

use std::sync::Arc;

use serde::Serialize;

use super::{
    compose_kernels_full, curry_kernel, ext_tensor, external_kernel_product, res_apply_full,
    unit_kernel, Kernel, ModuleValuedFunctor,
};
use crate::category::DgCategory;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};
use crate::module::{tensor_over_middle, DgModule, NatTransform, TensorProduct};
use crate::par;

/// Outcome of checking one comparison map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoCheck {
    pub name: String,
    /// The map is independent of the chosen cokernel representatives.
    pub well_defined: bool,
    pub closed: bool,
    pub natural: bool,
    pub invertible: bool,
    /// Per object of the common base: `(degree, dimension)` pairs of the source.
    pub dims: Vec<Vec<(i32, usize)>>,
}

impl IsoCheck {
    pub fn passed(&self) -> bool {
        self.well_defined && self.closed && self.natural && self.invertible
    }

    fn evaluate(name: impl Into<String>, theta: &NatTransform, well_defined: bool) -> IsoCheck {
        let closed = theta.degree() == 0 && theta.is_closed();
        IsoCheck {
            name: name.into(),
            well_defined,
            closed,
            natural: theta.is_valid(),
            invertible: theta
                .components()
                .iter()
                .all(|c| c.rows() == c.cols() && c.rank() == c.rows()),
            dims: theta
                .source()
                .values()
                .iter()
                .map(|v| v.dims().into_iter().collect())
                .collect(),
        }
    }
}

/// Turns a map defined on the pre-quotient space at `obj` into a map on the
/// quotient, and reports whether it kills the relations.
fn descend(tp: &TensorProduct, obj: usize, pre_map: &Matrix) -> (Matrix, bool) {
    let component = pre_map.mul(tp.section(obj));
    let ok = component.mul(tp.projection(obj)) == *pre_map;
    (component, ok)
}

fn columns(field: crate::linalg::Field, rows: usize, cols: Vec<Vec<Scalar>>) -> Matrix {
    Matrix::from_columns(field, rows, &cols)
}

/// `Ext_E(h^x) → Φ_E(x)`, `[φ ⊗ e] ↦ E(φ ⊗ 1)(e)`.
pub fn ext_yoneda_iso(e: &Kernel, x: usize) -> Result<IsoCheck> {
    let a = e.left().clone();
    let h = DgModule::yoneda(&a, x)?;
    let tp = ext_tensor(e, &h)?;
    let phi = curry_kernel(e);
    let target = phi.object(x).clone();
    let source = Arc::new(tp.module.rebase(e.right().clone())?);
    let field = a.field();
    let mut well_defined = true;
    let components = (0..e.right().len())
        .map(|y| {
            let mut cols = Vec::new();
            for w in 0..a.len() {
                let dim_e = e.value(w, y).dim();
                for f in 0..a.hom_dim(w, x) {
                    let act = e.act_left(x, w, y, &vec![(f, field.one())]);
                    for j in 0..dim_e {
                        cols.push(act.column_vec(j));
                    }
                }
            }
            let (c, ok) = descend(&tp, y, &columns(field, target.value(y).dim(), cols));
            well_defined &= ok;
            c
        })
        .collect();
    let theta = NatTransform::new(source, target, 0, components)?;
    Ok(IsoCheck::evaluate(
        format!("Ext(h^{}) ≅ Φ({})", a.object_name(x), a.object_name(x)),
        &theta,
        well_defined,
    ))
}

/// `unit_A ∘ E → E`, `[φ ⊗ e] ↦ E(φ ⊗ 1)(e)`.
pub fn left_unit_iso(e: &Kernel) -> Result<IsoCheck> {
    let a = e.left().clone();
    let (composite, tp) = compose_kernels_full(&unit_kernel(&a), e)?;
    let field = a.field();
    let nb = e.right().len();
    let results: Vec<(Matrix, bool)> = par::map_range(a.len() * nb, |obj| {
        let (x, y) = (obj / nb, obj % nb);
        let mut cols = Vec::new();
        for w in 0..a.len() {
            for f in 0..a.hom_dim(w, x) {
                let act = e.act_left(x, w, y, &vec![(f, field.one())]);
                for j in 0..e.value(w, y).dim() {
                    cols.push(act.column_vec(j));
                }
            }
        }
        descend(&tp, obj, &columns(field, e.value(x, y).dim(), cols))
    });
    finish(
        "unit ∘ E ≅ E",
        composite.carrier().clone(),
        e.carrier().clone(),
        results,
    )
}

/// `E ∘ unit_B → E`, `[e ⊗ ψ] ↦ (-1)^{|e||ψ|} E(1 ⊗ ψ)(e)`.
pub fn right_unit_iso(e: &Kernel) -> Result<IsoCheck> {
    let b = e.right().clone();
    let (composite, tp) = compose_kernels_full(e, &unit_kernel(&b))?;
    let field = b.field();
    let nb = b.len();
    let results: Vec<(Matrix, bool)> = par::map_range(e.left().len() * nb, |obj| {
        let (x, y) = (obj / nb, obj % nb);
        let mut cols = Vec::new();
        for w in 0..nb {
            let v = e.value(x, w);
            let acts: Vec<Matrix> = (0..b.hom_dim(y, w))
                .map(|g| e.act_right(x, y, w, &vec![(g, field.one())]))
                .collect();
            for i in 0..v.dim() {
                for (g, act) in acts.iter().enumerate() {
                    let s = field.sign(v.degree(i) as i64 * b.basis_degree(y, w, g) as i64);
                    cols.push(act.column_vec(i).iter().map(|c| c.mul(&s)).collect());
                }
            }
        }
        descend(&tp, obj, &columns(field, e.value(x, y).dim(), cols))
    });
    finish(
        "E ∘ unit ≅ E",
        composite.carrier().clone(),
        e.carrier().clone(),
        results,
    )
}

fn finish(
    name: &str,
    source: Arc<DgModule>,
    target: Arc<DgModule>,
    results: Vec<(Matrix, bool)>,
) -> Result<IsoCheck> {
    let well_defined = results.iter().all(|r| r.1);
    let theta = NatTransform::new(
        source,
        target,
        0,
        results.into_iter().map(|r| r.0).collect(),
    )?;
    Ok(IsoCheck::evaluate(name, &theta, well_defined))
}

/// `Ext_E(M ⊕ M′) → Ext_E(M) ⊕ Ext_E(M′)`, splitting pure tensors by summand.
pub fn ext_sum_iso(e: &Kernel, m1: &DgModule, m2: &DgModule) -> Result<IsoCheck> {
    let a = e.left().clone();
    let b = e.right().clone();
    let sum = DgModule::direct_sum(&a, &[m1, m2])?;
    let tp = ext_tensor(e, &sum)?;
    let (t1, t2) = (ext_tensor(e, m1)?, ext_tensor(e, m2)?);
    let e1 = t1.module.rebase(b.clone())?;
    let e2 = t2.module.rebase(b.clone())?;
    let target = Arc::new(DgModule::direct_sum(&b, &[&e1, &e2])?);
    let source = Arc::new(tp.module.rebase(b.clone())?);
    let field = a.field();
    let results: Vec<(Matrix, bool)> = (0..b.len())
        .map(|y| {
            let (d1, d2) = (e1.value(y).dim(), e2.value(y).dim());
            let mut cols = Vec::new();
            for w in 0..a.len() {
                let de = e.value(w, y).dim();
                for i in 0..m1.value(w).dim() + m2.value(w).dim() {
                    for j in 0..de {
                        let mut col = vec![field.zero(); d1 + d2];
                        if i < m1.value(w).dim() {
                            let c = t1
                                .projection(y)
                                .column_vec(t1.summand_offset(y, w) + i * de + j);
                            col[..d1].clone_from_slice(&c);
                        } else {
                            let c = t2.projection(y).column_vec(
                                t2.summand_offset(y, w) + (i - m1.value(w).dim()) * de + j,
                            );
                            col[d1..].clone_from_slice(&c);
                        }
                        cols.push(col);
                    }
                }
            }
            descend(&tp, y, &columns(field, d1 + d2, cols))
        })
        .collect();
    finish("Ext(M ⊕ M′) ≅ Ext(M) ⊕ Ext(M′)", source, target, results)
}

/// The comparison `M ⊗_A (E ⊗_B G) → (M ⊗_A E) ⊗_B G` for `M` over
/// `L ⊗ A`, `E` over `A^op ⊗ B`, `G` over `B^op ⊗ R`, sending
/// `[m ⊗ [e ⊗ g]] ↦ [[m ⊗ e] ⊗ g]`.
pub fn associator(
    m: &Arc<DgModule>,
    e: &Arc<DgModule>,
    g: &Arc<DgModule>,
    cats: [&Arc<DgCategory>; 4],
) -> Result<(IsoCheck, NatTransform)> {
    let [l, a, b, r] = cats;
    let a_op = Arc::new(a.opposite());
    let t1 = tensor_over_middle(m, l, a, e, b)?;
    let lhs = tensor_over_middle(&t1.module, l, b, g, r)?;
    let t2 = tensor_over_middle(e, &a_op, b, g, r)?;
    let rhs = tensor_over_middle(m, l, a, &t2.module, r)?;
    let field = l.field();
    let (na, nb, nr) = (a.len(), b.len(), r.len());
    let results: Vec<(Matrix, bool)> = par::map_range(l.len() * nr, |obj| {
        let (li, ri) = (obj / nr, obj % nr);
        let lhs_dim = lhs.module.value(obj).dim();
        // [[m_i ⊗ e_j] ⊗ g_q] for m_i ∈ M(l,a), e_j ∈ E(a,b), g_q ∈ G(b,r).
        let to_lhs = |ai: usize, bi: usize, i: usize, j: usize, q: usize| -> Vec<Scalar> {
            let class = t1.class_of_pure(li * nb + bi, ai, i, j);
            let dg = g.value(bi * nr + ri).dim();
            let mut out = vec![field.zero(); lhs_dim];
            for (u, c) in class.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let col = lhs
                    .projection(obj)
                    .column_vec(lhs.summand_offset(obj, bi) + u * dg + q);
                for (o, x) in out.iter_mut().zip(col) {
                    *o = o.add(&x.mul(c));
                }
            }
            out
        };
        let rhs_dim = rhs.module.value(obj).dim();
        let section = rhs.section(obj);
        let mut cols = Vec::with_capacity(rhs_dim);
        for s in 0..rhs_dim {
            let mut col = vec![field.zero(); lhs_dim];
            for (idx, coeff) in section.column_sparse(s) {
                let (ai, within) = locate(&rhs, obj, na, idx);
                let dt2 = t2.module.value(ai * nr + ri).dim();
                let (i, k) = (within / dt2, within % dt2);
                for (idx2, c2) in t2.section(ai * nr + ri).column_sparse(k) {
                    let (bi, w2) = locate(&t2, ai * nr + ri, nb, idx2);
                    let dg = g.value(bi * nr + ri).dim();
                    let v = to_lhs(ai, bi, i, w2 / dg, w2 % dg);
                    let scale = coeff.mul(&c2);
                    for (o, x) in col.iter_mut().zip(v) {
                        *o = o.add(&x.mul(&scale));
                    }
                }
            }
            cols.push(col);
        }
        let comp = columns(field, lhs_dim, cols);
        // Well-defined: the map from the triple tensor space to the left side
        // factors through its projection onto the right side.
        let mut ok = true;
        'check: for ai in 0..na {
            let dm = m.value(li * na + ai).dim();
            let dt2 = t2.module.value(ai * nr + ri).dim();
            for bi in 0..nb {
                let (de, dg) = (e.value(ai * nb + bi).dim(), g.value(bi * nr + ri).dim());
                for i in 0..dm {
                    for j in 0..de {
                        for q in 0..dg {
                            let t2_class = t2.class_of_pure(ai * nr + ri, bi, j, q);
                            let mut rhs_class = vec![field.zero(); rhs_dim];
                            for (k, c) in t2_class.iter().enumerate() {
                                if c.is_zero() {
                                    continue;
                                }
                                let col = rhs
                                    .projection(obj)
                                    .column_vec(rhs.summand_offset(obj, ai) + i * dt2 + k);
                                for (o, x) in rhs_class.iter_mut().zip(col) {
                                    *o = o.add(&x.mul(c));
                                }
                            }
                            if comp.apply(&rhs_class) != to_lhs(ai, bi, i, j, q) {
                                ok = false;
                                break 'check;
                            }
                        }
                    }
                }
            }
        }
        (comp, ok)
    });
    let well_defined = results.iter().all(|r| r.1);
    let theta = NatTransform::new(
        rhs.module.clone(),
        lhs.module.clone(),
        0,
        results.into_iter().map(|r| r.0).collect(),
    )?;
    Ok((
        IsoCheck::evaluate("M ⊗ (E ⊗ G) ≅ (M ⊗ E) ⊗ G", &theta, well_defined),
        theta,
    ))
}

/// Summand and offset within it of a pre-space index.
fn locate(tp: &TensorProduct, obj: usize, summands: usize, idx: usize) -> (usize, usize) {
    let mut s = summands - 1;
    while tp.summand_offset(obj, s) > idx {
        s -= 1;
    }
    (s, idx - tp.summand_offset(obj, s))
}

/// Kernel-composition associativity `(E₁ ∘ E₂) ∘ E₃ ≅ E₁ ∘ (E₂ ∘ E₃)`.
pub fn check_associativity(e1: &Kernel, e2: &Kernel, e3: &Kernel) -> Result<IsoCheck> {
    if *e1.right() != *e2.left() || *e2.right() != *e3.left() {
        return Err(Error::BaseMismatch("kernels are not composable".into()));
    }
    let l = Arc::new(e1.left().opposite());
    let (check, _) = associator(
        e1.carrier(),
        e2.carrier(),
        e3.carrier(),
        [&l, e1.right(), e2.right(), e3.right()],
    )?;
    Ok(IsoCheck {
        name: "(E₁ ∘ E₂) ∘ E₃ ≅ E₁ ∘ (E₂ ∘ E₃)".into(),
        ..check
    })
}

/// `Ext_{E₁ ∘ E₂}(M) ≅ Ext_{E₂}(Ext_{E₁}(M))`.
pub fn extcomp_iso(e1: &Kernel, e2: &Kernel, m: &DgModule) -> Result<IsoCheck> {
    if *e1.right() != *e2.left() || **m.base() != **e1.left() {
        return Err(Error::BaseMismatch(
            "kernels and module are not composable".into(),
        ));
    }
    let k = Arc::new(DgCategory::unit_category(m.field()));
    let m2 = Arc::new(m.rebase(Arc::new(DgCategory::tensor(&k, e1.left())?))?);
    let (check, _) = associator(
        &m2,
        e1.carrier(),
        e2.carrier(),
        [&k, e1.left(), e1.right(), e2.right()],
    )?;
    Ok(IsoCheck {
        name: "Ext_{E₁∘E₂}(M) ≅ Ext_{E₂}(Ext_{E₁}(M))".into(),
        ..check
    })
}

/// `Φ_{E₁⊠E₂}((x₁, x₂)) ≅ Φ_{E₁}(x₁) ⊠ Φ_{E₂}(x₂)` by the identity on values.
pub fn kerprod_value_iso(e1: &Kernel, e2: &Kernel, x1: usize, x2: usize) -> Result<IsoCheck> {
    let product = external_kernel_product(e1, e2)?;
    let phi = curry_kernel(&product);
    let source = phi.object(x1 * e2.left().len() + x2).clone();
    let (p1, p2) = (curry_kernel(e1), curry_kernel(e2));
    let ext =
        DgModule::external_tensor(p1.object(x1), p2.object(x2))?.rebase(source.base().clone())?;
    let target = Arc::new(ext);
    if source.values() != target.values() {
        return Ok(IsoCheck {
            name: "Φ_{E₁⊠E₂} ≅ Φ_{E₁} ⊠ Φ_{E₂}".into(),
            well_defined: true,
            closed: false,
            natural: false,
            invertible: false,
            dims: Vec::new(),
        });
    }
    let field = source.field();
    let components = source
        .values()
        .iter()
        .map(|v| Matrix::identity(field, v.dim()))
        .collect();
    let theta = NatTransform::new(source, target, 0, components)?;
    Ok(IsoCheck::evaluate(
        "Φ_{E₁⊠E₂} ≅ Φ_{E₁} ⊠ Φ_{E₂}",
        &theta,
        true,
    ))
}

/// `Ext_{E₁⊠E₂}(M₁ ⊠ M₂) → Ext_{E₁}(M₁) ⊠ Ext_{E₂}(M₂)`,
/// `[(m₁⊗m₂) ⊗ (e₁⊗e₂)] ↦ (-1)^{|m₂||e₁|} [m₁⊗e₁] ⊗ [m₂⊗e₂]`.
pub fn kerprod_ext_iso(e1: &Kernel, e2: &Kernel, m1: &DgModule, m2: &DgModule) -> Result<IsoCheck> {
    let product = external_kernel_product(e1, e2)?;
    let m = DgModule::external_tensor(m1, m2)?.rebase(product.left().clone())?;
    let tp = ext_tensor(&product, &m)?;
    let (t1, t2) = (ext_tensor(e1, m1)?, ext_tensor(e2, m2)?);
    let target = Arc::new(
        DgModule::external_tensor(
            &t1.module.rebase(e1.right().clone())?,
            &t2.module.rebase(e2.right().clone())?,
        )?
        .rebase(product.right().clone())?,
    );
    let source = Arc::new(tp.module.rebase(product.right().clone())?);
    let field = m.field();
    let (na2, nb2) = (e2.left().len(), e2.right().len());
    let results: Vec<(Matrix, bool)> = par::map_range(source.len(), |obj| {
        let (y1, y2) = (obj / nb2, obj % nb2);
        let d_t2 = t2.module.value(y2).dim();
        let mut cols = Vec::new();
        for x in 0..m.len() {
            let (x1, x2) = (x / na2, x % na2);
            let (v1, v2) = (m1.value(x1), m2.value(x2));
            let (w1, w2) = (e1.value(x1, y1), e2.value(x2, y2));
            for i1 in 0..v1.dim() {
                for i2 in 0..v2.dim() {
                    for j1 in 0..w1.dim() {
                        for j2 in 0..w2.dim() {
                            let s = field.sign(v2.degree(i2) as i64 * w1.degree(j1) as i64);
                            let c1 = t1
                                .projection(y1)
                                .column_vec(t1.summand_offset(y1, x1) + i1 * w1.dim() + j1);
                            let c2 = t2
                                .projection(y2)
                                .column_vec(t2.summand_offset(y2, x2) + i2 * w2.dim() + j2);
                            let mut col = vec![field.zero(); c1.len() * d_t2];
                            for (a, p) in c1.iter().enumerate() {
                                if p.is_zero() {
                                    continue;
                                }
                                for (b, q) in c2.iter().enumerate() {
                                    col[a * d_t2 + b] = p.mul(q).mul(&s);
                                }
                            }
                            cols.push(col);
                        }
                    }
                }
            }
        }
        descend(&tp, obj, &columns(field, target.value(obj).dim(), cols))
    });
    finish(
        "Ext_{E₁⊠E₂}(M₁⊠M₂) ≅ Ext_{E₁}(M₁) ⊠ Ext_{E₂}(M₂)",
        source,
        target,
        results,
    )
}

/// `res_{Yon}(N) → N`, evaluation of `θ: h^x → N` at the unit of `x`.
pub fn res_yoneda_iso(n: &Arc<DgModule>) -> Result<IsoCheck> {
    let b = n.base().clone();
    let yon = ModuleValuedFunctor::yoneda(&b);
    let (res, homs) = res_apply_full(&yon, n)?;
    let field = b.field();
    let components = (0..b.len())
        .map(|x| {
            let unit = b.unit_dense(x);
            let cols = (0..homs[x].dim())
                .map(|i| homs[x].transform(i).component(x).apply(&unit))
                .collect();
            columns(field, n.value(x).dim(), cols)
        })
        .collect();
    let theta = NatTransform::new(Arc::new(res), n.clone(), 0, components)?;
    Ok(IsoCheck::evaluate("res_Yon(N) ≅ N", &theta, true))
}
