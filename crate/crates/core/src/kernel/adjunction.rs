//! The adjunction `Ext_E ⊣ res_{Φ_E}` on explicit instances.

use std::sync::Arc;

use serde::Serialize;

use super::{curry_kernel, ext_tensor, res_apply_full, Kernel, ModuleValuedFunctor};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};
use crate::module::{module_hom_complex, DgModule, HomComplex, NatTransform, TensorProduct};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjunctionReport {
    /// `(degree, dim)` of `Hom(Ext_E M, N)`.
    pub hom_dims: Vec<(i32, usize)>,
    /// The adjunct map `Hom(Ext_E M, N) → Hom(M, res N)` is a bijection.
    pub bijection: bool,
    pub chain_map: bool,
    pub natural_in_m: bool,
    pub natural_in_n: bool,
    pub unit_natural: bool,
    pub counit_well_defined: bool,
    pub counit_natural: bool,
    /// `ε_{Ext M} ∘ Ext(η_M) = id`.
    pub triangle_ext: bool,
    /// `res(ε_N) ∘ η_{res N} = id`.
    pub triangle_res: bool,
}

impl AdjunctionReport {
    pub fn passed(&self) -> bool {
        self.bijection
            && self.chain_map
            && self.natural_in_m
            && self.natural_in_n
            && self.unit_natural
            && self.counit_well_defined
            && self.counit_natural
            && self.triangle_ext
            && self.triangle_res
    }
}

/// Everything needed to move between the two sides for a fixed `M` and `N`.
struct Sides {
    m: Arc<DgModule>,
    phi: ModuleValuedFunctor,
    tp: TensorProduct,
    ext_m: Arc<DgModule>,
    n: Arc<DgModule>,
    res_n: Arc<DgModule>,
    /// `Hom(Φ(x), N)` per object `x`, the bases of `res N`.
    homs: Vec<HomComplex>,
}

impl Sides {
    fn new(e: &Kernel, m: &Arc<DgModule>, n: &Arc<DgModule>) -> Result<Sides> {
        let phi = curry_kernel(e);
        let tp = ext_tensor(e, m)?;
        let ext_m = Arc::new(tp.module.rebase(e.right().clone())?);
        let (res, homs) = res_apply_full(&phi, n)?;
        Ok(Sides {
            m: m.clone(),
            phi,
            tp,
            ext_m,
            n: n.clone(),
            res_n: Arc::new(res),
            homs,
        })
    }

    /// `θ: Ext M → N` to `M → res N`, `m ↦ (e ↦ θ([m ⊗ e]))`.
    fn adjunct(&self, theta: &NatTransform) -> Option<NatTransform> {
        let field = self.m.field();
        let components = (0..self.m.len())
            .map(|x| {
                let vm = self.m.value(x);
                let cols = (0..vm.dim())
                    .map(|i| {
                        let comps = (0..self.n.len())
                            .map(|y| {
                                let dim_e = self.phi.object(x).value(y).dim();
                                let cols: Vec<Vec<Scalar>> = (0..dim_e)
                                    .map(|j| {
                                        theta.component(y).apply(&self.tp.class_of_pure(y, x, i, j))
                                    })
                                    .collect();
                                Matrix::from_columns(field, self.n.value(y).dim(), &cols)
                            })
                            .collect();
                        let tau = NatTransform::new(
                            self.phi.object(x).clone(),
                            self.n.clone(),
                            theta.degree() + vm.degree(i),
                            comps,
                        )
                        .ok()?;
                        self.homs[x].coordinates(&tau)
                    })
                    .collect::<Option<Vec<_>>>()?;
                Some(Matrix::from_columns(
                    field,
                    self.res_n.value(x).dim(),
                    &cols,
                ))
            })
            .collect::<Option<Vec<_>>>()?;
        NatTransform::new(
            self.m.clone(),
            self.res_n.clone(),
            theta.degree(),
            components,
        )
        .ok()
    }
}

/// `res(ψ): res N → res N′`, `τ ↦ ψ ∘ τ`, between two `res` constructions for the same `Φ`.
fn res_map(src: &Sides, dst: &Sides, psi: &NatTransform) -> Option<NatTransform> {
    let field = src.m.field();
    let components = (0..src.res_n.len())
        .map(|x| {
            let cols = (0..src.homs[x].dim())
                .map(|i| dst.homs[x].coordinates(&psi.compose(&src.homs[x].transform(i)).ok()?))
                .collect::<Option<Vec<_>>>()?;
            Some(Matrix::from_columns(field, dst.res_n.value(x).dim(), &cols))
        })
        .collect::<Option<Vec<_>>>()?;
    NatTransform::new(
        src.res_n.clone(),
        dst.res_n.clone(),
        psi.degree(),
        components,
    )
    .ok()
}

/// The counit `Ext(res N) → N`, `[τ ⊗ e] ↦ τ(y)(e)`, and whether it is well defined.
fn counit(e: &Kernel, sides: &Sides) -> Result<(NatTransform, bool)> {
    let field = e.left().field();
    let tp = ext_tensor(e, &sides.res_n)?;
    let source = Arc::new(tp.module.rebase(e.right().clone())?);
    let mut ok = true;
    let components = (0..e.right().len())
        .map(|y| {
            let mut cols = Vec::new();
            for x in 0..e.left().len() {
                let taus: Vec<NatTransform> = (0..sides.homs[x].dim())
                    .map(|i| sides.homs[x].transform(i))
                    .collect();
                for tau in &taus {
                    for j in 0..e.value(x, y).dim() {
                        cols.push(tau.component(y).column_vec(j));
                    }
                }
            }
            let pre = Matrix::from_columns(field, sides.n.value(y).dim(), &cols);
            let comp = pre.mul(tp.section(y));
            ok &= comp.mul(tp.projection(y)) == pre;
            comp
        })
        .collect();
    Ok((
        NatTransform::new(source, sides.n.clone(), 0, components)?,
        ok,
    ))
}

/// Lifts `ξ: M → M′` over `A` to `Ext(ξ)` given both tensor products.
fn ext_map(
    from: &Sides,
    to_tp: &TensorProduct,
    to_ext: &Arc<DgModule>,
    xi: &NatTransform,
) -> Result<NatTransform> {
    let lifted = NatTransform::new(
        from.tp.first().clone(),
        to_tp.first().clone(),
        xi.degree(),
        xi.components().to_vec(),
    )?;
    let t = from.tp.induced_left(&lifted, to_tp)?;
    NatTransform::new(
        from.ext_m.clone(),
        to_ext.clone(),
        t.degree(),
        t.components().to_vec(),
    )
}

/// Builds the adjunct isomorphism `Hom(Ext_E M, N) ≅ Hom(M, res_{Φ_E} N)`
/// and checks it together with naturality, unit, counit and both triangle identities.
pub fn check_adjunction(e: &Kernel, m: &DgModule, n: &DgModule) -> Result<AdjunctionReport> {
    if **m.base() != **e.left() || **n.base() != **e.right() {
        return Err(Error::BaseMismatch(
            "modules do not match the kernel's categories".into(),
        ));
    }
    let field = m.field();
    let (m, n) = (Arc::new(m.clone()), Arc::new(n.clone()));
    let sides = Sides::new(e, &m, &n)?;
    let lhs = module_hom_complex(&sides.ext_m, &n)?;
    let rhs = module_hom_complex(&m, &sides.res_n)?;

    let adjunct_coords =
        |h: &HomComplex, theta: &NatTransform| sides.adjunct(theta).and_then(|t| h.coordinates(&t));
    let cols: Option<Vec<Vec<Scalar>>> = (0..lhs.dim())
        .map(|i| adjunct_coords(&rhs, &lhs.transform(i)))
        .collect();
    let (bijection, chain_map) = match &cols {
        Some(cols) => {
            let map = Matrix::from_columns(field, rhs.dim(), cols);
            let square = map.rows() == map.cols() && map.rank() == map.rows();
            let graded = map
                .entries()
                .all(|(r, c, _)| rhs.complex().degree(r) == lhs.complex().degree(c));
            (
                square,
                graded && map.mul(lhs.complex().d()) == rhs.complex().d().mul(&map),
            )
        }
        None => (false, false),
    };

    // Naturality in N along endomorphisms ψ of N: adj(ψ ∘ θ) = res(ψ) ∘ adj(θ).
    let ends_n = module_hom_complex(&n, &n)?;
    let mut natural_in_n = true;
    'n: for p in 0..ends_n.dim() {
        let psi = ends_n.transform(p);
        let Some(res_psi) = res_map(&sides, &sides, &psi) else {
            natural_in_n = false;
            break;
        };
        for i in 0..lhs.dim() {
            let theta = lhs.transform(i);
            let lhs_side = psi.compose(&theta).ok().and_then(|t| sides.adjunct(&t));
            let rhs_side = sides.adjunct(&theta).and_then(|t| res_psi.compose(&t).ok());
            if lhs_side.is_none() || lhs_side != rhs_side {
                natural_in_n = false;
                break 'n;
            }
        }
    }

    // Naturality in M along endomorphisms ξ of M: adj(θ ∘ Ext ξ) = adj(θ) ∘ ξ.
    let ends_m = module_hom_complex(&m, &m)?;
    let mut natural_in_m = true;
    'm: for p in 0..ends_m.dim() {
        let xi = ends_m.transform(p);
        let ext_xi = ext_map(&sides, &sides.tp, &sides.ext_m, &xi)?;
        for i in 0..lhs.dim() {
            let theta = lhs.transform(i);
            let lhs_side = theta.compose(&ext_xi).ok().and_then(|t| sides.adjunct(&t));
            let rhs_side = sides.adjunct(&theta).and_then(|t| t.compose(&xi).ok());
            if lhs_side.is_none() || lhs_side != rhs_side {
                natural_in_m = false;
                break 'm;
            }
        }
    }

    // Unit η_M = adj(id_{Ext M}), and the first triangle identity.
    let ext_sides = Sides::new(e, &m, &sides.ext_m)?;
    let eta_m = ext_sides.adjunct(&NatTransform::identity(&sides.ext_m));
    let unit_natural = eta_m
        .as_ref()
        .is_some_and(|t| t.is_valid() && t.is_closed());
    let (eps_ext, eps_ext_ok) = counit(e, &ext_sides)?;
    let triangle_ext = match &eta_m {
        Some(eta) => {
            let tp_res = ext_tensor(e, &ext_sides.res_n)?;
            let ext_eta = ext_map(&sides, &tp_res, eps_ext.source(), eta)?;
            eps_ext_ok && eps_ext.compose(&ext_eta)? == NatTransform::identity(&sides.ext_m)
        }
        None => false,
    };

    // Counit ε_N and the second triangle identity res(ε_N) ∘ η_{res N} = id.
    let (eps_n, counit_well_defined) = counit(e, &sides)?;
    let counit_natural = eps_n.is_valid() && eps_n.is_closed();
    let res_n = sides.res_n.clone();
    let res_side = Sides::new(e, &res_n, &n)?;
    let tp_res = ext_tensor(e, &res_n)?;
    let ext_res = Arc::new(tp_res.module.rebase(e.right().clone())?);
    let round = Sides::new(e, &res_n, &ext_res)?;
    let eta_res = round.adjunct(&NatTransform::identity(&ext_res));
    let eps_as_map = NatTransform::new(ext_res.clone(), n.clone(), 0, eps_n.components().to_vec())?;
    let triangle_res = match (eta_res, res_map(&round, &res_side, &eps_as_map)) {
        (Some(eta), Some(res_eps)) => {
            let composite = res_eps.compose(&eta)?;
            composite.components() == NatTransform::identity(&res_n).components()
        }
        _ => false,
    };

    Ok(AdjunctionReport {
        hom_dims: lhs.complex().dims().into_iter().collect(),
        bijection,
        chain_map,
        natural_in_m,
        natural_in_n,
        unit_natural,
        counit_well_defined,
        counit_natural,
        triangle_ext,
        triangle_res,
    })
}
