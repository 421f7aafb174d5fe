use std::sync::Arc;

use dgker::category::{
    check_fibration, check_quasi_equivalence, construct_standard_homotopy, fiber_product,
    mor_category, path_object, DgCategory, DgFunctor, LinearCategory,
};
use dgker::corpus;
use dgker::linalg::{Field, Matrix};
use dgker::{Error, Identity, Verdict};

const F2: Field = Field::F2;
const Q: Field = Field::Rational;

#[test]
fn bundled_categories_validate() {
    for field in [F2, Field::Prime(3), Q] {
        for (name, c) in corpus::categories(field) {
            let r = c.validate();
            assert!(r.passed(), "{name} over {field}: {r}");
        }
    }
}

#[test]
fn broken_unit_law_is_named() {
    let a = corpus::a2(Q);
    let (x, y) = (0, 1);
    // a ∘ id_x := 0
    let broken = a.with_composition(x, x, y, 0, 0, Vec::new());
    let r = broken.validate();
    assert!(r.violates(Identity::RightUnit));
    assert!(r
        .violations
        .iter()
        .any(|v| v.identity == Identity::RightUnit && v.objects == ["x", "y"]));
}

#[test]
fn opposite_of_a2_transposes() {
    let op = corpus::a2(Q).opposite();
    assert_eq!(op.hom_dim(1, 0), 1);
    assert_eq!(op.hom_dim(0, 1), 0);
    assert_eq!(op.labels(1, 0), ["a"]);
}

#[test]
fn opposite_is_an_involution() {
    for (_, c) in corpus::categories(Q) {
        assert_eq!(c.opposite().opposite(), c);
        assert!(c.opposite().is_valid());
    }
}

#[test]
fn opposite_composite_of_odd_maps_changes_sign() {
    let c = corpus::odd_path(Q);
    let op = c.opposite();
    assert!(op.is_valid());
    // in the opposite, u ∈ hom_op(y, x), v ∈ hom_op(z, y); u ∘op v = -(v ∘ u)
    let composite = op.compose_basis(2, 1, 0, 0, 0);
    assert_eq!(composite, &vec![(0, Q.from_i64(-1))]);
}

/// Negates every composite of two odd basis elements: the opposite
/// category with the unsigned composition rule.
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
                            let neg = v.iter().map(|(i, a)| (*i, a.neg())).collect();
                            out = out.with_composition(x, y, z, g, f, neg);
                        }
                    }
                }
            }
        }
    }
    out
}

#[test]
fn unsigned_opposite_fails_validation() {
    let c = corpus::contractible_arrow(Q);
    let cc = DgCategory::tensor(&c, &c).unwrap();
    let op = cc.opposite();
    assert!(op.is_valid());
    let r = drop_odd_signs(&op).validate();
    assert!(r.violates(Identity::Leibniz), "{r}");
}

#[test]
fn dropping_the_tensor_sign_breaks_leibniz() {
    let c = corpus::contractible_arrow(Q);
    let t = DgCategory::tensor(&c, &c).unwrap();
    let (xx, yx, yy) = (0, 2, 3);
    let h_id = t.basis_index(xx, yx, "h⊗id_x").unwrap();
    let id_h = t.basis_index(yx, yy, "id_y⊗h").unwrap();
    let hh = t.basis_index(xx, yy, "h⊗h").unwrap();
    assert_eq!(
        t.compose_basis(xx, yx, yy, id_h, h_id),
        &vec![(hh, Q.from_i64(-1))]
    );
    let broken = t.with_composition(xx, yx, yy, id_h, h_id, vec![(hh, Q.one())]);
    let r = broken.validate();
    assert!(r.violates(Identity::Leibniz), "{r}");
}

#[test]
fn tensor_dimensions_and_unit() {
    let a = corpus::a2(Q);
    let t = DgCategory::tensor(&a, &a).unwrap();
    assert_eq!(t.len(), 4);
    assert_eq!(t.hom(0, 3).dim_in(0), 1);
    assert!(t.is_valid());
    let k = corpus::unit(Q);
    for (_, b) in corpus::categories(Q) {
        let kb = DgCategory::tensor(&k, &b).unwrap();
        for x in 0..b.len() {
            for y in 0..b.len() {
                assert_eq!(kb.hom(x, y), b.hom(x, y));
            }
        }
        assert!(kb.is_valid());
    }
}

#[test]
fn tensor_of_dual_numbers_validates() {
    for field in [F2, Q] {
        let d = corpus::dual_numbers(field);
        assert!(DgCategory::tensor(&d, &d).unwrap().is_valid());
        let o = corpus::odd_path(field);
        assert!(DgCategory::tensor(&o, &d).unwrap().is_valid());
    }
}

#[test]
fn h0_examples() {
    let a = corpus::a2(Q);
    let h = LinearCategory::h0(&a);
    assert_eq!(h.dim(0, 1), 1);
    assert_eq!(h.dim(1, 0), 0);
    assert!(h.validate().passed());
    let d = LinearCategory::h0(&corpus::dual_numbers(Q));
    assert_eq!(d.dim(0, 0), 1);
    let c = LinearCategory::h0(&corpus::contractible_arrow(Q));
    assert_eq!(c.dim(0, 1), 0);
    let z = LinearCategory::z0(&corpus::contractible_arrow(Q));
    assert_eq!(z.dim(0, 1), 1);
}

#[test]
fn h0_commutes_with_opposite() {
    for (_, c) in corpus::categories(Q) {
        let lhs = LinearCategory::h0(&c.opposite());
        let rhs = LinearCategory::h0(&c).opposite();
        assert!(lhs.same_structure(&rhs));
    }
}

#[test]
fn mor_of_a2_over_f2() {
    let a = corpus::a2(F2);
    let (m, objects) = mor_category(&a).unwrap();
    assert_eq!(objects.len(), 7);
    let r = m.validate();
    assert!(r.passed(), "{r}");
}

#[test]
fn mor_categories_validate() {
    for (name, c) in corpus::categories(F2) {
        let (m, _) = mor_category(&c).unwrap();
        let r = m.validate();
        assert!(r.passed(), "Mor({name}): {r}");
    }
    for (name, c) in corpus::categories(Q) {
        let (m, _) = mor_category(&c).unwrap();
        let r = m.validate();
        assert!(r.passed(), "Mor({name}) over Q: {r}");
    }
}

#[test]
fn path_object_of_a2() {
    let a = Arc::new(corpus::a2(F2));
    let p = path_object(&a).unwrap();
    assert_eq!(p.category.len(), 2);
    assert!(p.category.is_valid());
    let id = DgFunctor::identity(&a);
    assert_eq!(p.source.compose(&p.iota).unwrap(), id);
    assert_eq!(p.target.compose(&p.iota).unwrap(), id);
    assert_eq!(
        check_quasi_equivalence(&p.iota, 0, 16).verdict,
        Verdict::Yes
    );
    assert_eq!(check_fibration(&p.source_target).verdict, Verdict::Yes);
}

#[test]
fn path_objects_of_the_corpus() {
    for (name, c) in corpus::categories(F2) {
        let a = Arc::new(c);
        let p = path_object(&a).unwrap();
        assert!(p.category.is_valid(), "{name}");
        for f in [&p.iota, &p.source, &p.target, &p.source_target] {
            assert!(f.is_valid(), "{name}: {}", f.validate());
        }
        let diagonal = DgFunctor::pairing(
            &DgFunctor::identity(&a),
            &DgFunctor::identity(&a),
            p.product.clone(),
        )
        .unwrap();
        assert_eq!(
            p.source_target.compose(&p.iota).unwrap(),
            diagonal,
            "{name}"
        );
        assert_eq!(
            check_quasi_equivalence(&p.iota, 0, 16).verdict,
            Verdict::Yes,
            "{name}"
        );
        assert_eq!(
            check_fibration(&p.source_target).verdict,
            Verdict::Yes,
            "{name}"
        );
    }
}

#[test]
fn iso_arrow_path_object_has_all_isomorphisms() {
    let a = Arc::new(corpus::iso_arrow(F2));
    let p = path_object(&a).unwrap();
    // (x,x,id), (x,y,u), (y,x,v), (y,y,id)
    assert_eq!(p.category.len(), 4);
}

#[test]
fn quasi_equivalence_negative() {
    let a = Arc::new(corpus::a2(F2));
    let inc = DgFunctor::object_inclusion(&a, 0);
    let r = check_quasi_equivalence(&inc, 0, 16);
    assert_eq!(r.verdict, Verdict::No);
    assert_eq!(
        check_quasi_equivalence(&DgFunctor::identity(&a), 0, 16).verdict,
        Verdict::Yes
    );
}

#[test]
fn fibration_checks() {
    let a = Arc::new(corpus::a2(F2));
    assert_eq!(
        check_fibration(&DgFunctor::identity(&a)).verdict,
        Verdict::Yes
    );
    let c = Arc::new(corpus::contractible_arrow(F2));
    // A2 → C sending a to a is a dg functor that misses h
    let f = DgFunctor::new(
        a.clone(),
        c.clone(),
        vec![0, 1],
        vec![
            Matrix::identity(F2, 1),
            Matrix::from_i64(F2, &[&[0], &[1]]),
            Matrix::zeros(F2, 0, 0),
            Matrix::identity(F2, 1),
        ],
    )
    .unwrap();
    assert!(f.is_valid(), "{}", f.validate());
    let r = check_fibration(&f);
    assert_eq!(r.verdict, Verdict::No);
    assert_eq!(r.non_full, vec![("x".to_string(), "y".to_string())]);
}

#[test]
fn fiber_products() {
    let a = Arc::new(corpus::a2(F2));
    let id = DgFunctor::identity(&a);
    let fp = fiber_product(&id, &id).unwrap();
    assert_eq!(fp.category.len(), 2);
    assert!(fp.category.is_valid());
    assert!(fp.first.is_valid() && fp.second.is_valid());
    for x in 0..2 {
        for y in 0..2 {
            assert_eq!(fp.category.hom(x, y).dims(), a.hom(x, y).dims());
        }
    }
    // disjoint images
    let k = Arc::new(corpus::unit(F2));
    let at_x =
        DgFunctor::new(k.clone(), a.clone(), vec![0], vec![Matrix::identity(F2, 1)]).unwrap();
    let at_y =
        DgFunctor::new(k.clone(), a.clone(), vec![1], vec![Matrix::identity(F2, 1)]).unwrap();
    assert_eq!(fiber_product(&at_x, &at_y).unwrap().category.len(), 0);
    // A2 ×_{A2} P(A2) along t
    let p = path_object(&a).unwrap();
    let fp = fiber_product(&id, &p.target).unwrap();
    assert_eq!(fp.category.len(), 2);
    assert!(fp.category.is_valid());
}

#[test]
fn standard_homotopy_identity() {
    let a = Arc::new(corpus::a2(F2));
    let id = DgFunctor::identity(&a);
    let alpha: Vec<_> = (0..2).map(|x| a.unit(x).clone()).collect();
    let (p, h) = construct_standard_homotopy(&id, &id, &alpha).unwrap();
    assert!(h.is_valid());
    assert_eq!(p.source.compose(&h).unwrap(), id);
    assert_eq!(p.target.compose(&h).unwrap(), id);
    assert_eq!(h, p.iota);
}

#[test]
fn standard_homotopy_through_an_isomorphism() {
    // F, G: K → I2 picking x and y; α = u
    for field in [F2, Q] {
        let i = Arc::new(corpus::iso_arrow(field));
        let k = Arc::new(corpus::unit(field));
        let f = DgFunctor::new(
            k.clone(),
            i.clone(),
            vec![0],
            vec![Matrix::identity(field, 1)],
        )
        .unwrap();
        let g = DgFunctor::new(
            k.clone(),
            i.clone(),
            vec![1],
            vec![Matrix::identity(field, 1)],
        )
        .unwrap();
        let u = vec![(i.basis_index(0, 1, "u").unwrap(), field.one())];
        let (p, h) = construct_standard_homotopy(&f, &g, &[u]).unwrap();
        assert!(h.is_valid());
        assert_eq!(p.source.compose(&h).unwrap(), f);
        assert_eq!(p.target.compose(&h).unwrap(), g);
    }
}

#[test]
fn standard_homotopy_rejects_non_invertible() {
    let a = Arc::new(corpus::a2(F2));
    let k = Arc::new(corpus::unit(F2));
    let f = DgFunctor::new(k.clone(), a.clone(), vec![0], vec![Matrix::identity(F2, 1)]).unwrap();
    let g = DgFunctor::new(k.clone(), a.clone(), vec![1], vec![Matrix::identity(F2, 1)]).unwrap();
    let err = construct_standard_homotopy(&f, &g, &[vec![(0, F2.one())]]).unwrap_err();
    assert_eq!(err, Error::NotInvertible("*".into()));
}

#[test]
fn swap_middle_is_a_dg_functor() {
    let d = corpus::dual_numbers(Q);
    let o = corpus::odd_path(Q);
    let a = corpus::a2(Q);
    let s = DgFunctor::swap_middle(&d, &o, &d, &a).unwrap();
    let r = s.validate();
    assert!(r.passed(), "{r}");
}

#[test]
fn identity_tensor_quasi_equivalence() {
    let a = Arc::new(corpus::a2(F2));
    let p = path_object(&a).unwrap();
    let d = Arc::new(corpus::dual_numbers(F2));
    let t = DgFunctor::tensor(&DgFunctor::identity(&d), &p.iota).unwrap();
    assert!(t.is_valid());
    assert_eq!(check_quasi_equivalence(&t, 0, 16).verdict, Verdict::Yes);
}
