//! Bundled example categories.

use std::sync::Arc;

use crate::category::{CategoryBuilder, DgCategory, DgFunctor};
use crate::kernel::{functor_kernel, unit_kernel, Kernel};
use crate::linalg::{Field, Matrix};
use crate::module::{DgModule, NatTransform};
use crate::validation::{Identity, ValidationReport};

/// The one-object category `K`.
pub fn unit(field: Field) -> DgCategory {
    DgCategory::unit_category(field)
}

/// `x --a--> y`, everything in degree 0.
pub fn a2(field: Field) -> DgCategory {
    CategoryBuilder::new(field)
        .objects(&["x", "y"])
        .morphism("a", "x", "y", 0)
        .and_then(|b| b.build())
        .expect("static example")
}

/// `x --a--> y --b--> z` with the composite `ba`.
pub fn a3(field: Field) -> DgCategory {
    CategoryBuilder::new(field)
        .objects(&["x", "y", "z"])
        .morphism("a", "x", "y", 0)
        .and_then(|b| b.morphism("b", "y", "z", 0))
        .and_then(|b| b.morphism("ba", "x", "z", 0))
        .map(|b| b.product("b", "a", &[("ba", 1)]))
        .and_then(|b| b.build())
        .expect("static example")
}

/// One object with `End = K·id ⊕ K·ε`, `|ε| = -1`, `ε² = 0`, `dε = 0`.
pub fn dual_numbers(field: Field) -> DgCategory {
    CategoryBuilder::new(field)
        .objects(&["*"])
        .morphism("e", "*", "*", -1)
        .and_then(|b| b.build())
        .expect("static example")
}

/// `hom(x, y) = K·h ⊕ K·a` with `|h| = -1`, `|a| = 0`, `dh = a`: a contractible hom complex.
pub fn contractible_arrow(field: Field) -> DgCategory {
    CategoryBuilder::new(field)
        .objects(&["x", "y"])
        .morphism("h", "x", "y", -1)
        .and_then(|b| b.morphism("a", "x", "y", 0))
        .map(|b| b.differential("h", &[("a", 1)]))
        .and_then(|b| b.build())
        .expect("static example")
}

/// Two objects with mutually inverse degree-0 isomorphisms `u: x → y`, `v: y → x`.
pub fn iso_arrow(field: Field) -> DgCategory {
    CategoryBuilder::new(field)
        .objects(&["x", "y"])
        .morphism("u", "x", "y", 0)
        .and_then(|b| b.morphism("v", "y", "x", 0))
        .map(|b| {
            b.product("v", "u", &[("id_x", 1)])
                .product("u", "v", &[("id_y", 1)])
        })
        .and_then(|b| b.build())
        .expect("static example")
}

/// `x --u--> y --v--> z` with `|u| = |v| = 1` and the composite `vu` in degree 2.
pub fn odd_path(field: Field) -> DgCategory {
    CategoryBuilder::new(field)
        .objects(&["x", "y", "z"])
        .morphism("u", "x", "y", 1)
        .and_then(|b| b.morphism("v", "y", "z", 1))
        .and_then(|b| b.morphism("vu", "x", "z", 2))
        .map(|b| b.product("v", "u", &[("vu", 1)]))
        .and_then(|b| b.build())
        .expect("static example")
}

/// Every bundled base category, by name.
pub fn categories(field: Field) -> Vec<(&'static str, DgCategory)> {
    vec![
        ("K", unit(field)),
        ("A2", a2(field)),
        ("A3", a3(field)),
        ("dual", dual_numbers(field)),
        ("contractible-arrow", contractible_arrow(field)),
        ("iso-arrow", iso_arrow(field)),
        ("odd-path", odd_path(field)),
    ]
}

/// Bundled categories that are directed (scalar endomorphisms, no cycles).
pub fn directed_categories(field: Field) -> Vec<(&'static str, DgCategory)> {
    categories(field)
        .into_iter()
        .filter(|(_, c)| c.directed_order().is_some())
        .collect()
}

/// Test modules over `base`: Yoneda modules and their shifts, simple modules
/// where they exist, a direct sum, and cones of identities.
pub fn module_battery(base: &Arc<DgCategory>) -> Vec<(String, DgModule)> {
    let mut out = vec![("0".to_string(), DgModule::zero(base.clone()))];
    let yoneda = DgModule::yoneda_all(base);
    for (x, h) in yoneda.iter().enumerate() {
        let name = base.object_name(x);
        out.push((format!("h^{name}"), h.clone()));
        out.push((format!("h^{name}[1]"), h.shift(1)));
        if let Ok(s) = DgModule::simple(base, x) {
            out.push((format!("S_{name}"), s));
        }
    }
    if yoneda.len() >= 2 {
        let sum = DgModule::direct_sum(base, &[&yoneda[0], &yoneda[yoneda.len() - 1].shift(-1)])
            .expect("common base");
        out.push(("h-sum".to_string(), sum));
    }
    out.extend(acyclic_battery(base).into_iter().take(1));
    out
}

/// Acyclic modules over `base`: cones of the identity of each Yoneda module
/// in several shifts, and of each simple module.
pub fn acyclic_battery(base: &Arc<DgCategory>) -> Vec<(String, DgModule)> {
    let mut out = Vec::new();
    for (x, h) in DgModule::yoneda_all(base).into_iter().enumerate() {
        let name = base.object_name(x);
        for k in [0, 1, -1, 2] {
            let m = Arc::new(h.shift(k));
            let cone = NatTransform::identity(&m)
                .cone()
                .expect("identity is closed");
            out.push((format!("cone(id_h^{name}[{k}])"), cone));
        }
    }
    for x in 0..base.len() {
        if let Ok(s) = DgModule::simple(base, x) {
            let cone = NatTransform::identity(&Arc::new(s))
                .cone()
                .expect("identity is closed");
            out.push((format!("cone(id_S_{})", base.object_name(x)), cone));
        }
    }
    out
}

/// The functor `A₂ → K` sending both objects to `*` and `a` to the identity.
pub fn collapse_a2(field: Field) -> DgFunctor {
    let (src, k) = (Arc::new(a2(field)), Arc::new(unit(field)));
    let one = Matrix::identity(field, 1);
    let maps = vec![
        one.clone(),
        one.clone(),
        Matrix::from_columns(field, 1, &[]),
        one,
    ];
    DgFunctor::new(src, k, vec![0, 0], maps).expect("static example")
}

/// Bundled kernels: unit kernels of every category, kernels of a few dg
/// functors, a shifted unit kernel with odd structure, and a zero kernel.
pub fn kernels(field: Field) -> Vec<(String, Kernel)> {
    let mut out = Vec::new();
    for (name, c) in categories(field) {
        out.push((format!("unit({name})"), unit_kernel(&Arc::new(c))));
    }
    let a2 = Arc::new(a2(field));
    let a3 = Arc::new(a3(field));
    let dual = Arc::new(dual_numbers(field));
    let functors = [
        ("incl(x→A2)", DgFunctor::object_inclusion(&a2, 0)),
        ("incl(y→A2)", DgFunctor::object_inclusion(&a2, 1)),
        ("incl({x,z}→A3)", DgFunctor::full_inclusion(&a3, &[0, 2])),
        ("collapse(A2→K)", collapse_a2(field)),
    ];
    for (name, f) in functors {
        out.push((name.to_string(), functor_kernel(&f).expect("valid functor")));
    }
    let shifted = unit_kernel(&dual).carrier().shift(1);
    out.push((
        "unit(dual)[1]".to_string(),
        Kernel::new(dual.clone(), dual, shifted).expect("same base"),
    ));
    out.push((
        "zero(A2→A3)".to_string(),
        Kernel::zero(a2, a3).expect("same field"),
    ));
    out
}

/// A deliberately corrupted instance and the identity its validator must name.
pub struct Mutant {
    pub name: &'static str,
    pub expected: Identity,
    pub report: ValidationReport,
}

/// Negates every composite of two odd basis elements.
fn drop_odd_signs(c: &DgCategory) -> DgCategory {
    let mut out = c.clone();
    let n = c.len();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for g in 0..c.hom_dim(y, z) {
                    for f in 0..c.hom_dim(x, y) {
                        let odd =
                            c.basis_degree(y, z, g) % 2 != 0 && c.basis_degree(x, y, f) % 2 != 0;
                        let v = c.compose_basis(x, y, z, g, f);
                        if odd && !v.is_empty() {
                            out = out.with_composition(
                                x,
                                y,
                                z,
                                g,
                                f,
                                v.iter().map(|(i, a)| (*i, a.neg())).collect(),
                            );
                        }
                    }
                }
            }
        }
    }
    out
}

fn label(c: &DgCategory, x: usize, y: usize, l: &str) -> usize {
    c.basis_index(x, y, l).expect("static label")
}

/// Corrupted categories, functors, modules, kernels and transformations over
/// Q, each breaking one identity: sign flips in opposite and tensor
/// composition, associativity, unit laws, dropped Koszul signs in actions.
pub fn mutants() -> Vec<Mutant> {
    let q = Field::Rational;
    let one = q.one();
    let mut out = Vec::new();
    let mut push = |name, expected, report| {
        out.push(Mutant {
            name,
            expected,
            report,
        })
    };

    let c = contractible_arrow(q);
    let cc = DgCategory::tensor(&c, &c).expect("same field");
    push(
        "opposite without the odd composition sign",
        Identity::Leibniz,
        drop_odd_signs(&cc.opposite()).validate(),
    );

    let (xx, yx, yy) = (0, 2, 3);
    let (h_id, id_h, hh) = (
        label(&cc, xx, yx, "h⊗id_x"),
        label(&cc, yx, yy, "id_y⊗h"),
        label(&cc, xx, yy, "h⊗h"),
    );
    push(
        "tensor composition without the Koszul sign",
        Identity::Leibniz,
        cc.with_composition(xx, yx, yy, id_h, h_id, vec![(hh, one.clone())])
            .validate(),
    );

    let iso = iso_arrow(q);
    let (u, v, idx) = (
        label(&iso, 0, 1, "u"),
        label(&iso, 1, 0, "v"),
        label(&iso, 0, 0, "id_x"),
    );
    push(
        "v∘u rescaled to 2·id_x",
        Identity::Associativity,
        iso.with_composition(0, 1, 0, v, u, vec![(idx, q.from_i64(2))])
            .validate(),
    );

    let a = a2(q);
    push(
        "a∘id_x := 0",
        Identity::RightUnit,
        a.with_composition(0, 0, 1, 0, 0, Vec::new()).validate(),
    );
    push(
        "id_y∘a := 0",
        Identity::LeftUnit,
        a.with_composition(0, 1, 1, 0, 0, Vec::new()).validate(),
    );
    push(
        "id_y∘h := a (degree -1 composite in degree 0)",
        Identity::CompositionDegree,
        c.with_composition(
            0,
            1,
            1,
            0,
            label(&c, 0, 1, "h"),
            vec![(label(&c, 0, 1, "a"), one.clone())],
        )
        .validate(),
    );

    let dual = dual_numbers(q);
    push(
        "unit of dual numbers := e",
        Identity::UnitDegree,
        dual.with_unit(0, vec![(label(&dual, 0, 0, "e"), one.clone())])
            .validate(),
    );

    let open = CategoryBuilder::new(q)
        .objects(&["*"])
        .morphism("h", "*", "*", 0)
        .and_then(|b| b.morphism("t", "*", "*", 1))
        .map(|b| b.differential("h", &[("t", 1)]))
        .and_then(|b| b.build())
        .expect("static example");
    let (id, h) = (label(&open, 0, 0, "id_*"), label(&open, 0, 0, "h"));
    push(
        "unit := id + h with d(h) ≠ 0",
        Identity::UnitClosed,
        open.with_unit(0, vec![(id, one.clone()), (h, one.clone())])
            .validate(),
    );

    let broken_d = Matrix::from_triplets(q, 3, 3, [(1, 0, one.clone()), (2, 1, one.clone())]);
    let k = Arc::new(unit(q));
    let bad_value = crate::Complex::new(q, vec![0, 1, 2], broken_d).expect("degrees match");
    let bad = DgModule::from_fn(k, vec![bad_value], |_, _, _| Matrix::identity(q, 3))
        .expect("shapes match");
    push(
        "module value with d² ≠ 0",
        Identity::DSquared,
        bad.validate(),
    );

    let odd = Arc::new(odd_path(q));
    let hz = DgModule::yoneda(&odd, 2).expect("object exists");
    let u = label(&odd, 0, 1, "u");
    let unsigned = hz
        .with_action(0, 1, u, hz.action(0, 1, u).neg())
        .expect("same shape");
    push(
        "Yoneda action of u without the Koszul sign",
        Identity::ActionComposition,
        unsigned.validate(),
    );

    let a2q = Arc::new(a);
    let hy = DgModule::yoneda(&a2q, 1).expect("object exists");
    let idx = label(&a2q, 0, 0, "id_x");
    let doubled = hy
        .with_action(0, 0, idx, hy.action(0, 0, idx).scale(&q.from_i64(2)))
        .expect("same shape");
    push("id_x acting as 2", Identity::ActionUnit, doubled.validate());

    let e = unit_kernel(&Arc::new(c.clone()));
    let carrier = e.carrier();
    let values: Vec<crate::Complex> = carrier
        .values()
        .iter()
        .map(|v| crate::Complex::with_zero_differential(q, v.degrees().to_vec()))
        .collect();
    let flat = DgModule::from_fn(carrier.base().clone(), values, |x, y, f| {
        carrier.action(x, y, f).clone()
    })
    .expect("same shapes");
    push(
        "unit kernel with the differential dropped",
        Identity::ActionDifferential,
        flat.validate(),
    );

    let collapse = collapse_a2(q);
    let mut maps = collapse.hom_maps.clone();
    maps[0] = Matrix::zeros(q, 1, 1);
    let f = DgFunctor::new(
        collapse.source.clone(),
        collapse.target.clone(),
        collapse.object_map.clone(),
        maps,
    )
    .expect("same shapes");
    push(
        "collapse functor sending id_x to 0",
        Identity::FunctorUnit,
        f.validate(),
    );

    let a3q = Arc::new(a3(q));
    let id3 = DgFunctor::identity(&a3q);
    let mut maps = id3.hom_maps.clone();
    maps[2] = Matrix::zeros(q, 1, 1);
    let f = DgFunctor::new(a3q.clone(), a3q.clone(), id3.object_map.clone(), maps)
        .expect("same shapes");
    push(
        "identity of A3 sending ba to 0",
        Identity::FunctorComposition,
        f.validate(),
    );

    let hy = Arc::new(DgModule::yoneda(&a2q, 1).expect("object exists"));
    let id = NatTransform::identity(&hy);
    let mut comps = id.components().to_vec();
    comps[0] = Matrix::zeros(q, comps[0].rows(), comps[0].cols());
    let t = NatTransform::new(hy.clone(), hy, 0, comps).expect("same shapes");
    push(
        "identity of h^y with the x component zeroed",
        Identity::Naturality,
        t.validate(),
    );

    out
}
