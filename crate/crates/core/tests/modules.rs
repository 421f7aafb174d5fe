use std::collections::BTreeMap;
use std::sync::Arc;

use dgker::category::DgCategory;
use dgker::corpus;
use dgker::linalg::{Field, Matrix};
use dgker::module::{
    check_hflat, check_yoneda, module_hom_complex, tensor_over, tensor_over_middle, DgModule,
    NatTransform,
};
use dgker::{Complex, Identity, Verdict};

const F2: Field = Field::F2;
const Q: Field = Field::Rational;

fn arc(c: DgCategory) -> Arc<DgCategory> {
    Arc::new(c)
}

#[test]
fn battery_modules_validate() {
    for field in [F2, Field::Prime(3), Q] {
        for (name, c) in corpus::categories(field) {
            let a = arc(c);
            for (mname, m) in corpus::module_battery(&a) {
                let r = m.validate();
                assert!(r.passed(), "{mname} over {name}/{field}: {r}");
            }
            for (mname, m) in corpus::acyclic_battery(&a) {
                assert!(m.is_acyclic().acyclic, "{mname} over {name}");
            }
        }
    }
}

#[test]
fn yoneda_modules_of_a2() {
    let a = arc(corpus::a2(Q));
    let hy = DgModule::yoneda_named(&a, "y").unwrap();
    assert_eq!(hy.value(0).dim(), 1);
    assert_eq!(hy.value(1).dim(), 1);
    // a: x → y sends id_y to a
    assert_eq!(hy.action(0, 1, 0), &Matrix::from_i64(Q, &[&[1]]));
    let hx = DgModule::yoneda_named(&a, "x").unwrap();
    assert_eq!(hx.value(1).dim(), 0);
    assert!(DgModule::yoneda_named(&a, "w").is_err());
}

#[test]
fn yoneda_over_dual_numbers() {
    let a = arc(corpus::dual_numbers(Q));
    let h = DgModule::yoneda(&a, 0).unwrap();
    assert_eq!(h.value(0).dims(), BTreeMap::from([(-1, 1), (0, 1)]));
    let e = a.basis_index(0, 0, "e").unwrap();
    let act = h.action(0, 0, e);
    assert!(act
        .entries()
        .all(|(r, c, _)| h.value(0).degree(r) == h.value(0).degree(c) - 1));
    assert!(!act.is_zero());
    assert!(h.is_valid());
}

#[test]
fn dropped_koszul_sign_in_action_is_caught() {
    // On h ⊠ h over dual ⊗ dual, ε⊗1 and 1⊗ε must act by anticommuting maps;
    // dropping the sign on 1⊗ε makes them commute.
    for field in [Field::Prime(3), Q] {
        let a = arc(corpus::dual_numbers(field));
        let h = DgModule::yoneda(&a, 0).unwrap();
        let hh = DgModule::external_tensor(&h, &h).unwrap();
        assert!(hh.is_valid());
        let e = a.basis_index(0, 0, "e").unwrap();
        let id = a.basis_index(0, 0, "id_*").unwrap();
        let one_e = id * a.hom_dim(0, 0) + e;
        let unsigned = Matrix::identity(field, 2).kron(h.action(0, 0, e));
        let broken = hh.with_action(0, 0, one_e, unsigned).unwrap();
        let r = broken.validate();
        assert!(r.violates(Identity::ActionComposition), "{r}");
        assert!(r
            .violations
            .iter()
            .any(|v| v.objects.iter().all(|o| o == "(*,*)")));
    }
}

#[test]
fn broken_unit_action_is_caught() {
    let a = arc(corpus::a2(Q));
    let h = DgModule::yoneda(&a, 1).unwrap();
    let broken = h
        .with_action(1, 1, 0, Matrix::from_i64(Q, &[&[2]]))
        .unwrap();
    let r = broken.validate();
    assert!(r.violates(Identity::ActionUnit));
}

#[test]
fn wrong_action_degree_is_caught() {
    let a = arc(corpus::contractible_arrow(Q));
    let h = DgModule::yoneda(&a, 1).unwrap();
    let hidx = a.basis_index(0, 1, "h").unwrap();
    let aidx = a.basis_index(0, 1, "a").unwrap();
    // let h act as a does
    let broken = h
        .with_action(0, 1, hidx, h.action(0, 1, aidx).clone())
        .unwrap();
    let r = broken.validate();
    assert!(r.violates(Identity::ActionDegree));
}

#[test]
fn zero_module_validates() {
    for (_, c) in corpus::categories(F2) {
        assert!(DgModule::zero(arc(c)).is_valid());
    }
}

#[test]
fn dg_yoneda_on_every_battery_module() {
    let mut instances = 0;
    for field in [F2, Q] {
        for (name, c) in corpus::categories(field) {
            let a = arc(c);
            for (mname, m) in corpus::module_battery(&a) {
                let m = Arc::new(m);
                for x in 0..a.len() {
                    let check = check_yoneda(&m, x).unwrap();
                    assert!(
                        check.passed(),
                        "{name}/{field}, M = {mname}, X = {}: {check:?}",
                        a.object_name(x)
                    );
                    instances += 1;
                }
            }
        }
    }
    assert!(instances >= 20);
}

#[test]
fn identity_is_a_cycle_of_the_endomorphism_complex() {
    for (_, c) in corpus::categories(Q) {
        let a = arc(c);
        for (_, m) in corpus::module_battery(&a) {
            let m = Arc::new(m);
            let hom = module_hom_complex(&m, &m).unwrap();
            let id = NatTransform::identity(&m);
            let coords = hom.coordinates(&id).expect("identity is natural");
            assert!(hom.complex().d().apply(&coords).iter().all(|x| x.is_zero()));
            let back = hom.element(&coords, 0).unwrap();
            assert_eq!(back, id);
        }
    }
}

#[test]
fn hom_basis_elements_are_natural_and_d_matches() {
    for (_, c) in corpus::categories(Field::Prime(5)) {
        let a = arc(c);
        let battery = corpus::module_battery(&a);
        for (_, m) in battery.iter().take(4) {
            for (_, n) in battery.iter().take(4) {
                let (m, n) = (Arc::new(m.clone()), Arc::new(n.clone()));
                let hom = module_hom_complex(&m, &n).unwrap();
                for i in 0..hom.dim() {
                    let t = hom.transform(i);
                    assert!(t.is_valid());
                    let dt = t.differential();
                    assert!(dt.is_valid());
                    let col = hom.complex().d().column_vec(i);
                    assert_eq!(hom.element(&col, t.degree() + 1).unwrap(), dt);
                }
            }
        }
    }
}

#[test]
fn disjoint_supports_give_zero_hom() {
    let a = arc(corpus::a2(Q));
    let sx = Arc::new(DgModule::simple(&a, 0).unwrap());
    let sy = Arc::new(DgModule::simple(&a, 1).unwrap());
    assert_eq!(module_hom_complex(&sx, &sy).unwrap().dim(), 0);
    assert_eq!(module_hom_complex(&sy, &sx).unwrap().dim(), 0);
}

#[test]
fn simple_module_needs_a_local_endomorphism_ring() {
    let a = arc(corpus::iso_arrow(Q));
    assert!(DgModule::simple(&a, 0).is_err());
    let d = arc(corpus::dual_numbers(Q));
    assert!(DgModule::simple(&d, 0).unwrap().is_valid());
}

/// Dimensions of `M ⊗_A N` per degree from a dense relation matrix built
/// directly from the action tables.
#[allow(clippy::needless_range_loop)]
fn brute_force_tensor_dims(m: &DgModule, n: &DgModule) -> BTreeMap<i32, usize> {
    let a = m.base();
    let field = m.field();
    let mut basis = Vec::new();
    for c in 0..a.len() {
        for i in 0..m.value(c).dim() {
            for j in 0..n.value(c).dim() {
                basis.push((c, i, j, m.value(c).degree(i) + n.value(c).degree(j)));
            }
        }
    }
    let index = |c: usize, i: usize, j: usize| {
        basis
            .iter()
            .position(|&(c2, i2, j2, _)| (c2, i2, j2) == (c, i, j))
            .unwrap()
    };
    let mut rows: Vec<Vec<dgker::linalg::Scalar>> = Vec::new();
    for b in 0..a.len() {
        for b2 in 0..a.len() {
            for f in 0..a.hom_dim(b, b2) {
                let df = a.basis_degree(b, b2, f) as i64;
                let am = m.action(b, b2, f).to_dense();
                let an = n.action(b2, b, f).to_dense();
                for v1 in 0..m.value(b2).dim() {
                    for v2 in 0..n.value(b).dim() {
                        let mut row = vec![field.zero(); basis.len()];
                        for i in 0..m.value(b).dim() {
                            let k = index(b, i, v2);
                            row[k] = row[k].add(&am[i][v1]);
                        }
                        let s = field.sign(m.value(b2).degree(v1) as i64 * df);
                        for j in 0..n.value(b2).dim() {
                            let k = index(b2, v1, j);
                            row[k] = row[k].sub(&an[j][v2].mul(&s));
                        }
                        rows.push(row);
                    }
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    let degrees: std::collections::BTreeSet<i32> = basis.iter().map(|b| b.3).collect();
    for d in degrees {
        let cols: Vec<usize> = (0..basis.len()).filter(|&k| basis[k].3 == d).collect();
        let sub: Vec<Vec<_>> = rows
            .iter()
            .map(|r| cols.iter().map(|&k| r[k].clone()).collect())
            .collect();
        let rank = if sub.is_empty() {
            0
        } else {
            Matrix::from_dense(field, &sub).unwrap().rank()
        };
        if cols.len() > rank {
            out.insert(d, cols.len() - rank);
        }
    }
    out
}

fn constant_a2_op(field: Field) -> DgModule {
    let op = arc(corpus::a2(field).opposite());
    let values = vec![Complex::unit(field), Complex::unit(field)];
    DgModule::from_fn(op, values, |_, _, _| Matrix::identity(field, 1)).unwrap()
}

#[test]
fn tensor_identifies_summands_along_a() {
    let a = arc(corpus::a2(Q));
    let hy = DgModule::yoneda(&a, 1).unwrap();
    let n = constant_a2_op(Q);
    assert!(n.is_valid());
    let t = tensor_over(&hy, &n).unwrap();
    assert_eq!(t.dims(), BTreeMap::from([(0, 1)]));
    assert_eq!(brute_force_tensor_dims(&hy, &n), BTreeMap::from([(0, 1)]));
}

#[test]
fn tensor_with_yoneda_evaluates() {
    // h^X ⊗_A N ≅ N(X), compared against the brute-force cokernel as well.
    for field in [F2, Q] {
        for (name, c) in corpus::categories(field) {
            let a = arc(c);
            let op = arc(a.opposite());
            let mut battery = corpus::module_battery(&op);
            battery.truncate(6);
            for x in 0..a.len() {
                let h = DgModule::yoneda(&a, x).unwrap();
                for (nname, n) in &battery {
                    let t = tensor_over(&h, n).unwrap();
                    assert!(t.is_valid());
                    let brute = brute_force_tensor_dims(&h, n);
                    assert_eq!(
                        t.dims()
                            .into_iter()
                            .filter(|(_, d)| *d > 0)
                            .collect::<BTreeMap<_, _>>(),
                        brute,
                        "{name}, {nname}"
                    );
                    assert_eq!(t.dims(), n.value(x).dims(), "{name}, X = {x}, N = {nname}");
                }
            }
        }
    }
}

#[test]
fn tensor_over_unit_category_is_the_complex_tensor() {
    let k = arc(DgCategory::unit_category(Q));
    let c = Complex::new(Q, vec![0, 1], Matrix::from_i64(Q, &[&[0, 0], &[1, 0]])).unwrap();
    let d = Complex::with_zero_differential(Q, vec![-1, 0, 2]);
    let m =
        DgModule::from_fn(k.clone(), vec![c.clone()], |_, _, _| Matrix::identity(Q, 2)).unwrap();
    let n = DgModule::from_fn(arc(k.opposite()), vec![d.clone()], |_, _, _| {
        Matrix::identity(Q, 3)
    })
    .unwrap();
    assert_eq!(
        tensor_over(&m, &n).unwrap(),
        Complex::tensor(&c, &d).unwrap()
    );
}

#[test]
fn tensor_bimodule_form_validates() {
    // Yoneda modules over L ⊗ B and B^op ⊗ R, with odd morphisms on every side.
    for field in [F2, Field::Prime(3), Q] {
        let cats = [
            corpus::a2(field),
            corpus::dual_numbers(field),
            corpus::contractible_arrow(field),
        ];
        for (l, b, r) in [(1, 0, 1), (0, 1, 1), (1, 1, 1), (2, 1, 1), (1, 2, 1)] {
            let (left, middle, right) = (
                arc(cats[l].clone()),
                arc(cats[b].clone()),
                arc(cats[r].clone()),
            );
            let lb = arc(DgCategory::tensor(&left, &middle).unwrap());
            let br = arc(DgCategory::tensor(&middle.opposite(), &right).unwrap());
            for x in 0..lb.len() {
                for y in 0..br.len() {
                    let m = Arc::new(DgModule::yoneda(&lb, x).unwrap());
                    let n = Arc::new(DgModule::yoneda(&br, y).unwrap());
                    let t = tensor_over_middle(&m, &left, &middle, &n, &right).unwrap();
                    let rep = t.module.validate();
                    assert!(rep.passed(), "({l},{b},{r}) {x} {y} over {field}: {rep}");
                }
            }
        }
    }
}

#[test]
fn tensor_rejects_mismatched_bases() {
    let a = arc(corpus::a2(Q));
    let m = DgModule::yoneda(&a, 0).unwrap();
    let n = DgModule::yoneda(&a, 0).unwrap();
    assert!(tensor_over(&m, &n).is_err());
}

#[test]
fn external_tensor_dims_and_validity() {
    for field in [F2, Q] {
        let a = arc(corpus::dual_numbers(field));
        let b = arc(corpus::contractible_arrow(field));
        let ma = corpus::module_battery(&a);
        let mb = corpus::module_battery(&b);
        for (_, m) in ma.iter().take(4) {
            for (_, n) in mb.iter().take(4) {
                let t = DgModule::external_tensor(m, n).unwrap();
                assert!(t.is_valid());
                for x in 0..a.len() {
                    for y in 0..b.len() {
                        let v = t.value(x * b.len() + y);
                        for (deg, dim) in v.dims() {
                            let expect: usize = m
                                .value(x)
                                .dims()
                                .iter()
                                .map(|(p, dp)| dp * n.value(y).dim_in(deg - p))
                                .sum();
                            assert_eq!(dim, expect);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn external_tensor_with_unit_module() {
    let a = arc(corpus::a3(Q));
    let k = arc(DgCategory::unit_category(Q));
    let unit =
        DgModule::from_fn(k, vec![Complex::unit(Q)], |_, _, _| Matrix::identity(Q, 1)).unwrap();
    for (_, m) in corpus::module_battery(&a) {
        let t = DgModule::external_tensor(&m, &unit).unwrap();
        assert_eq!(t.values(), m.values());
        for x in 0..a.len() {
            for y in 0..a.len() {
                assert_eq!(t.actions(x, y), m.actions(x, y));
            }
        }
    }
}

#[test]
fn external_tensor_agrees_with_tensor_over_unit_middle() {
    let field = Q;
    let a = arc(corpus::dual_numbers(field));
    let b = arc(corpus::a2(field));
    let k = arc(DgCategory::unit_category(field));
    let m = DgModule::yoneda(&a, 0).unwrap();
    let n = DgModule::yoneda(&b, 1).unwrap();
    let ext = DgModule::external_tensor(&m, &n).unwrap();
    let m2 = Arc::new(m.rebase(arc(DgCategory::tensor(&a, &k).unwrap())).unwrap());
    let n2 = Arc::new(
        n.rebase(arc(DgCategory::tensor(&k.opposite(), &b).unwrap()))
            .unwrap(),
    );
    let t = tensor_over_middle(&m2, &a, &k, &n2, &b).unwrap();
    assert_eq!(t.module.values(), ext.values());
    for p in 0..ext.len() {
        for q in 0..ext.len() {
            assert_eq!(t.module.actions(p, q), ext.actions(p, q));
        }
    }
}

#[test]
fn induced_maps_are_functorial() {
    let field = Q;
    let a = arc(corpus::a2(field));
    let k = arc(DgCategory::unit_category(field));
    let ka = arc(DgCategory::tensor(&k, &a).unwrap());
    let opk = arc(DgCategory::tensor(&a.opposite(), &k).unwrap());
    let n = Arc::new(
        corpus::module_battery(&arc(a.opposite()))
            .remove(1)
            .1
            .rebase(opk)
            .unwrap(),
    );
    let hx = Arc::new(DgModule::yoneda(&a, 0).unwrap().rebase(ka.clone()).unwrap());
    let hy = Arc::new(DgModule::yoneda(&a, 1).unwrap().rebase(ka.clone()).unwrap());
    // θ: h^x → h^y, postcomposition with a (rank one)
    let hom = module_hom_complex(&hx, &hy).unwrap();
    let theta = (0..hom.dim())
        .map(|i| hom.transform(i))
        .find(|t| t.degree() == 0 && !t.is_zero())
        .unwrap();
    let id_y = NatTransform::identity(&hy);
    let t_x = tensor_over_middle(&hx, &k, &a, &n, &k).unwrap();
    let t_y = tensor_over_middle(&hy, &k, &a, &n, &k).unwrap();
    let induced = t_x.induced_left(&theta, &t_y).unwrap();
    assert!(induced.is_valid());
    let composite = t_x
        .induced_left(&id_y.compose(&theta).unwrap(), &t_y)
        .unwrap();
    let two_step = t_y
        .induced_left(&id_y, &t_y)
        .unwrap()
        .compose(&induced)
        .unwrap();
    assert_eq!(composite, two_step);
    assert_eq!(
        t_y.induced_left(&id_y, &t_y).unwrap(),
        NatTransform::identity(&t_y.module)
    );
    let zero = NatTransform::zero(hx.clone(), hy.clone(), 0);
    assert!(t_x.induced_left(&zero, &t_y).unwrap().is_zero());
}

#[test]
fn shifts_and_cones() {
    let a = arc(corpus::odd_path(Q));
    for (_, m) in corpus::module_battery(&a) {
        for k in [-1, 1, 2] {
            assert!(m.shift(k).is_valid());
        }
        let m = Arc::new(m);
        let cone = NatTransform::identity(&m).cone().unwrap();
        assert!(cone.is_valid());
        assert!(cone.is_acyclic().acyclic);
    }
}

#[test]
fn acyclicity_tags() {
    let a = arc(corpus::a2(Q));
    assert!(DgModule::zero(a.clone()).is_acyclic().acyclic);
    let tag = DgModule::yoneda(&a, 1).unwrap().is_acyclic();
    assert!(!tag.acyclic);
    assert_eq!(tag.cohomology.len(), 2);
}

#[test]
fn yoneda_modules_pass_hflat_battery() {
    for (_, c) in corpus::categories(F2) {
        let a = arc(c);
        let op = arc(a.opposite());
        let battery: Vec<DgModule> = corpus::acyclic_battery(&op)
            .into_iter()
            .map(|(_, m)| m)
            .collect();
        for h in DgModule::yoneda_all(&a) {
            let r = check_hflat(&h, &battery).unwrap();
            assert_eq!(r.verdict, Verdict::Yes);
            assert!(r.skipped.is_empty());
        }
    }
}
