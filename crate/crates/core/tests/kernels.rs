use std::sync::Arc;

use dgker::category::{DgCategory, DgFunctor};
use dgker::corpus;
use dgker::kernel::{
    check_adjunction, check_associativity, compose_kernels, curry_kernel, ext_apply, ext_sum_iso,
    ext_yoneda_iso, extcomp_iso, external_kernel_product, ind_apply, kerprod_ext_iso,
    kerprod_value_iso, left_unit_iso, res_apply, res_g_apply, res_yoneda_iso, right_unit_iso,
    uncurry_functor, unit_kernel, Kernel, ModuleValuedFunctor,
};
use dgker::linalg::Field;
use dgker::module::{module_hom_complex, DgModule, NatTransform};
use dgker::Complex;

const F2: Field = Field::F2;
const F3: Field = Field::Prime(3);
const Q: Field = Field::Rational;

fn arc<T>(t: T) -> Arc<T> {
    Arc::new(t)
}

fn kernel(field: Field, name: &str) -> Kernel {
    corpus::kernels(field)
        .into_iter()
        .find(|(n, _)| n == name)
        .unwrap()
        .1
}

/// Small modules over `base` for the heavier checks.
fn small_modules(base: &Arc<DgCategory>) -> Vec<(String, DgModule)> {
    corpus::module_battery(base)
        .into_iter()
        .filter(|(_, m)| m.total_dim() <= 4)
        .collect()
}

#[test]
fn bundled_kernels_validate_and_curry_round_trips() {
    for field in [F2, F3, Q] {
        for (name, e) in corpus::kernels(field) {
            let r = e.validate();
            assert!(r.passed(), "{name}/{field}: {r}");
            let phi = curry_kernel(&e);
            let r = phi.validate();
            assert!(r.passed(), "curry {name}/{field}: {r}");
            assert_eq!(uncurry_functor(&phi).unwrap(), e, "{name}/{field}");
        }
    }
}

#[test]
fn unit_kernel_curries_to_yoneda() {
    for field in [F2, Q] {
        for (name, c) in corpus::categories(field) {
            let a = arc(c);
            let e = unit_kernel(&a);
            let phi = curry_kernel(&e);
            let yon = ModuleValuedFunctor::yoneda(&a);
            for x in 0..a.len() {
                assert_eq!(**phi.object(x), DgModule::yoneda(&a, x).unwrap(), "{name}");
            }
            assert_eq!(phi, yon, "{name}");
            assert_eq!(uncurry_functor(&yon).unwrap(), e, "{name}");
        }
    }
}

#[test]
fn unit_kernel_values() {
    let a = arc(corpus::a2(Q));
    let e = unit_kernel(&a);
    // value at (x, y) is hom(y, x)
    assert_eq!(e.value(1, 0).dims(), [(0, 1)].into());
    assert_eq!(e.value(0, 1).dim(), 0);
    assert_eq!(e.value(0, 0).dims(), [(0, 1)].into());

    let k = arc(corpus::unit(Q));
    let u = unit_kernel(&k);
    assert_eq!(u.carrier().values(), &[Complex::unit(Q)]);
}

#[test]
fn zero_kernel_curries_to_zero() {
    let a2 = arc(corpus::a2(F2));
    let a3 = arc(corpus::a3(F2));
    let e = Kernel::zero(a2.clone(), a3.clone()).unwrap();
    let phi = curry_kernel(&e);
    for x in 0..a2.len() {
        assert_eq!(phi.object(x).total_dim(), 0);
    }
    assert_eq!(uncurry_functor(&phi).unwrap(), e);
    let n = arc(DgModule::yoneda(&a3, 0).unwrap());
    assert_eq!(res_apply(&phi, &n).unwrap().total_dim(), 0);
}

#[test]
fn kernel_rejects_wrong_base() {
    let a2 = arc(corpus::a2(F2));
    let m = DgModule::zero(a2.clone());
    assert!(Kernel::new(a2.clone(), a2, m).is_err());
}

#[test]
fn ext_of_yoneda_is_the_curried_value() {
    for field in [F2, F3, Q] {
        for (name, e) in corpus::kernels(field) {
            for x in 0..e.left().len() {
                let iso = ext_yoneda_iso(&e, x).unwrap();
                assert!(iso.passed(), "{name}/{field} at {x}: {iso:?}");
            }
        }
    }
}

#[test]
fn composing_with_unit_kernels() {
    for field in [F2, F3, Q] {
        for (name, e) in corpus::kernels(field) {
            let l = left_unit_iso(&e).unwrap();
            assert!(l.passed(), "{name}/{field}: {l:?}");
            let r = right_unit_iso(&e).unwrap();
            assert!(r.passed(), "{name}/{field}: {r:?}");
            let composed = compose_kernels(&unit_kernel(e.left()), &e).unwrap();
            assert_eq!(composed.carrier().dims(), e.carrier().dims(), "{name}");
        }
    }
}

#[test]
fn ext_along_unit_kernel_is_identity_up_to_iso() {
    for field in [F2, Q] {
        for (name, c) in corpus::categories(field) {
            let a = arc(c);
            let e = unit_kernel(&a);
            for (mname, m) in corpus::module_battery(&a) {
                let ext = ext_apply(&e, &m).unwrap();
                assert!(ext.is_valid(), "{name} {mname}");
                assert_eq!(ext.dims(), m.dims(), "{name} {mname}");
            }
        }
    }
}

#[test]
fn ext_over_unit_category_is_the_complex_tensor() {
    let k = arc(corpus::unit(F3));
    let c = Complex::contractible(F3, 1).shift(0);
    let d = Complex::with_zero_differential(F3, vec![0, 2, -1]);
    let e = Kernel::from_module(
        k.clone(),
        k.clone(),
        &DgModule::new(
            arc(DgCategory::tensor(&k.opposite(), &k).unwrap()),
            vec![c.clone()],
            vec![vec![dgker::linalg::Matrix::identity(F3, c.dim())]],
        )
        .unwrap(),
    )
    .unwrap();
    let m = DgModule::new(
        k.clone(),
        vec![d.clone()],
        vec![vec![dgker::linalg::Matrix::identity(F3, d.dim())]],
    )
    .unwrap();
    let ext = ext_apply(&e, &m).unwrap();
    assert_eq!(ext.value(0).dims(), Complex::tensor(&d, &c).unwrap().dims());
    assert_eq!(
        ext.value(0).betti(),
        Complex::tensor(&d, &c).unwrap().betti()
    );
}

#[test]
fn res_along_yoneda_is_identity_up_to_iso() {
    for field in [F2, Q] {
        for (name, c) in corpus::categories(field) {
            let a = arc(c);
            for (mname, m) in corpus::module_battery(&a) {
                let iso = res_yoneda_iso(&arc(m)).unwrap();
                assert!(iso.passed(), "{name} {mname}: {iso:?}");
            }
        }
    }
}

#[test]
fn induction_and_restriction_along_functors() {
    let a = arc(corpus::a2(Q));
    let id = DgFunctor::identity(&a);
    for (mname, m) in corpus::module_battery(&a) {
        assert_eq!(res_g_apply(&id, &m).unwrap(), m, "{mname}");
        let ind = ind_apply(&id, &m).unwrap();
        assert!(ind.is_valid());
        assert_eq!(ind.dims(), m.dims(), "{mname}");
    }
    // restricting h^y along the inclusion of x reads off hom(x, y) = K·a
    let incl = DgFunctor::object_inclusion(&a, 0);
    let hy = DgModule::yoneda(&a, 1).unwrap();
    let r = res_g_apply(&incl, &hy).unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(r.value(0).dims(), [(0, 1)].into());

    // Ind along the inclusion of x sends the Yoneda module of x to h^x
    let hx = DgModule::yoneda(&incl.source, 0).unwrap();
    let ind = ind_apply(&incl, &hx).unwrap();
    assert_eq!(ind.dims(), DgModule::yoneda(&a, 0).unwrap().dims());
}

#[test]
fn adjunction_on_bundled_triples() {
    let mut count = 0;
    for field in [F2, F3] {
        for name in [
            "unit(A2)",
            "unit(dual)",
            "incl(x→A2)",
            "collapse(A2→K)",
            "unit(dual)[1]",
            "incl({x,z}→A3)",
            "unit(contractible-arrow)",
        ] {
            let e = kernel(field, name);
            let ms = small_modules(e.left());
            let ns = small_modules(e.right());
            for (mname, m) in ms.iter().take(3) {
                for (nname, n) in ns.iter().skip(1).take(2) {
                    let r = check_adjunction(&e, m, n).unwrap();
                    assert!(r.passed(), "{name}/{field} M={mname} N={nname}: {r:?}");
                    count += 1;
                }
            }
        }
    }
    assert!(count >= 10);
}

#[test]
fn adjunction_special_cases() {
    let a = arc(corpus::a2(Q));
    let e = unit_kernel(&a);
    let m = DgModule::yoneda(&a, 0).unwrap();
    let n = corpus::module_battery(&a).pop().unwrap().1;
    let r = check_adjunction(&e, &m, &n).unwrap();
    assert!(r.passed());
    let direct = module_hom_complex(&arc(m.clone()), &arc(n.clone())).unwrap();
    assert_eq!(
        r.hom_dims,
        direct.complex().dims().into_iter().collect::<Vec<_>>()
    );

    let zero = DgModule::zero(a.clone());
    let r = check_adjunction(&e, &m, &zero).unwrap();
    assert!(r.passed());
    assert!(r.hom_dims.iter().all(|&(_, d)| d == 0));

    let other = arc(corpus::a3(Q));
    assert!(check_adjunction(&e, &DgModule::zero(other), &n).is_err());
}

/// Every ordered pair of bundled kernels whose middle categories agree.
fn composable_pairs(field: Field) -> Vec<(String, Kernel, Kernel)> {
    let ks = corpus::kernels(field);
    let mut out = Vec::new();
    for (n1, e1) in &ks {
        for (n2, e2) in &ks {
            if e1.right() == e2.left() {
                out.push((format!("{n1} then {n2}"), e1.clone(), e2.clone()));
            }
        }
    }
    out
}

#[test]
fn extcomp_on_composable_pairs() {
    let pairs = composable_pairs(F2);
    assert!(pairs.len() >= 10);
    for (name, e1, e2) in pairs {
        for (mname, m) in small_modules(e1.left()) {
            let iso = extcomp_iso(&e1, &e2, &m).unwrap();
            assert!(iso.passed(), "{name} M={mname}: {iso:?}");
        }
        let composed = compose_kernels(&e1, &e2).unwrap();
        assert!(composed.is_valid(), "{name}");
    }
}

#[test]
fn kernel_composition_is_associative() {
    for field in [F2, F3, Q] {
        let triples = [
            ("incl(x→A2)", "unit(A2)", "collapse(A2→K)"),
            ("unit(dual)[1]", "unit(dual)[1]", "unit(dual)"),
            ("incl(y→A2)", "unit(A2)", "unit(A2)"),
        ];
        for (a, b, c) in triples {
            let iso = check_associativity(&kernel(field, a), &kernel(field, b), &kernel(field, c))
                .unwrap();
            assert!(iso.passed(), "{a}, {b}, {c} over {field}: {iso:?}");
        }
    }
    let a2 = kernel(F2, "unit(A2)");
    let dual = kernel(F2, "unit(dual)");
    assert!(check_associativity(&a2, &dual, &dual).is_err());
}

#[test]
fn unit_product_is_the_unit_of_the_tensor_category() {
    for field in [F2, Q] {
        for (p, q) in [
            ("A2", "dual"),
            ("K", "K"),
            ("dual", "odd-path"),
            ("contractible-arrow", "A2"),
        ] {
            let a1 = arc(corpus::categories(field)
                .into_iter()
                .find(|(n, _)| *n == p)
                .unwrap()
                .1);
            let a2 = arc(corpus::categories(field)
                .into_iter()
                .find(|(n, _)| *n == q)
                .unwrap()
                .1);
            let product = external_kernel_product(&unit_kernel(&a1), &unit_kernel(&a2)).unwrap();
            let t = arc(DgCategory::tensor(&a1, &a2).unwrap());
            assert_eq!(product, unit_kernel(&t), "{p} ⊠ {q}");
        }
    }
}

#[test]
fn kernel_products_commute_with_currying_and_ext() {
    let pairs = [
        ("unit(A2)", "unit(dual)"),
        ("unit(K)", "unit(K)"),
        ("incl(x→A2)", "unit(dual)[1]"),
        ("collapse(A2→K)", "unit(odd-path)"),
    ];
    for field in [F2, F3] {
        for (p, q) in pairs {
            let (e1, e2) = (kernel(field, p), kernel(field, q));
            let product = external_kernel_product(&e1, &e2).unwrap();
            assert!(product.is_valid(), "{p} ⊠ {q}");
            for x1 in 0..e1.left().len() {
                for x2 in 0..e2.left().len() {
                    let iso = kerprod_value_iso(&e1, &e2, x1, x2).unwrap();
                    assert!(iso.passed(), "{p} ⊠ {q} at ({x1},{x2}): {iso:?}");
                }
            }
            for (n1, m1) in small_modules(e1.left()).into_iter().take(3) {
                for (n2, m2) in small_modules(e2.left()).into_iter().skip(1).take(2) {
                    let iso = kerprod_ext_iso(&e1, &e2, &m1, &m2).unwrap();
                    assert!(iso.passed(), "{p} ⊠ {q} on {n1} ⊠ {n2}: {iso:?}");
                }
            }
        }
    }
}

#[test]
fn kernel_product_over_unit_categories_is_the_complex_tensor() {
    let k = arc(corpus::unit(F3));
    let base = arc(DgCategory::tensor(&k.opposite(), &k).unwrap());
    let c = Complex::contractible(F3, 0);
    let d = Complex::with_zero_differential(F3, vec![1, -2]);
    let mk = |v: &Complex| {
        let m = DgModule::new(
            base.clone(),
            vec![v.clone()],
            vec![vec![dgker::linalg::Matrix::identity(F3, v.dim())]],
        )
        .unwrap();
        Kernel::new(k.clone(), k.clone(), m).unwrap()
    };
    let product = external_kernel_product(&mk(&c), &mk(&d)).unwrap();
    assert_eq!(product.value(0, 0), &Complex::tensor(&c, &d).unwrap());
}

#[test]
fn ext_preserves_finite_direct_sums() {
    for field in [F2, Q] {
        for (name, e) in corpus::kernels(field) {
            let ms = small_modules(e.left());
            let (m1, m2) = (&ms[1].1, &ms[ms.len() - 1].1);
            let iso = ext_sum_iso(&e, m1, m2).unwrap();
            assert!(iso.passed(), "{name}/{field}: {iso:?}");
        }
    }
}

fn nonzero_betti(c: &Complex) -> Vec<(i32, usize)> {
    c.betti().into_iter().filter(|&(_, b)| b > 0).collect()
}

#[test]
fn homotopy_equivalent_carriers_give_quasi_isomorphic_values() {
    for field in [F2, Q] {
        for (name, e) in corpus::kernels(field) {
            // E ⊕ cone(id_E) is homotopy equivalent to E
            let carrier = e.carrier().clone();
            let cone = NatTransform::identity(&carrier).cone().unwrap();
            let bigger = DgModule::direct_sum(carrier.base(), &[&carrier, &cone]).unwrap();
            let e2 = Kernel::new(e.left().clone(), e.right().clone(), bigger).unwrap();
            let (p1, p2) = (curry_kernel(&e), curry_kernel(&e2));
            for x in 0..e.left().len() {
                let ok = p1
                    .object(x)
                    .values()
                    .iter()
                    .zip(p2.object(x).values())
                    .all(|(a, b)| nonzero_betti(a) == nonzero_betti(b));
                assert!(ok, "{name} at {x}");
            }
        }
    }
}
