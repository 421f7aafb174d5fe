use std::sync::Arc;

use dgker::category::{DgCategory, LinearCategory};
use dgker::corpus;
use dgker::kernel::{functor_kernel, unit_kernel, Kernel};
use dgker::linalg::{Field, Scalar};
use dgker::module::{module_hom_complex, DgModule, HomComplex, NatTransform};
use dgker::resolution::{
    bar_resolution, certify, essim_membership, heq_classes, homotopy_equivalence_modules,
    hprojective_battery_check, is_semi_free, resolve_kernel, rqr_check, slice_certificate,
    Generator, ResolutionStatus,
};
use dgker::Verdict;

const F2: Field = Field::F2;
const F3: Field = Field::Prime(3);
const Q: Field = Field::Rational;
const SEED: u64 = 7;
const BUDGET: usize = 64;

fn arc<T>(t: T) -> Arc<T> {
    Arc::new(t)
}

fn sum(base: &Arc<DgCategory>, parts: &[&DgModule]) -> DgModule {
    DgModule::direct_sum(base, parts).unwrap()
}

fn cone_of_identity(m: &DgModule) -> DgModule {
    NatTransform::identity(&arc(m.clone())).cone().unwrap()
}

#[test]
fn bar_resolutions_of_directed_categories_are_complete() {
    for field in [F2, F3, Q] {
        for (name, c) in corpus::directed_categories(field) {
            let a = arc(c);
            for (mname, m) in corpus::module_battery(&a) {
                let m = arc(m);
                let r = bar_resolution(&m, 8);
                assert_eq!(r.status, ResolutionStatus::Complete, "{name} {mname}");
                let report = r.module.validate();
                assert!(report.passed(), "{name} {mname}: {report}");
                assert!(
                    r.augmentation.is_valid() && r.augmentation.is_closed(),
                    "{name} {mname}"
                );
                assert!(r.augmentation.is_quasi_iso(), "{name} {mname}");
                assert!(
                    is_semi_free(&r.module, &r.certificate).unwrap(),
                    "{name} {mname}"
                );
            }
        }
    }
}

#[test]
fn resolution_of_a_yoneda_module_starts_with_it() {
    let a = arc(corpus::a2(F2));
    let hx = arc(DgModule::yoneda(&a, 0).unwrap());
    let r = bar_resolution(&hx, 4);
    assert_eq!(r.chains, vec![vec![0]]);
    assert_eq!(r.certificate.summands()[0], vec![(0, 0)]);
    assert_eq!(r.module.dims(), hx.dims());
}

#[test]
fn simple_module_resolution_matches_the_two_term_model() {
    let a = arc(corpus::a2(F2));
    let sy = arc(DgModule::simple(&a, 1).unwrap());
    let r = bar_resolution(&sy, 4);
    assert_eq!(r.status, ResolutionStatus::Complete);
    assert_eq!(r.chains, vec![vec![1], vec![1, 0]]);

    // the model: cone of h^x → h^y, φ ↦ a∘φ
    let hx = arc(DgModule::yoneda(&a, 0).unwrap());
    let hy = arc(DgModule::yoneda(&a, 1).unwrap());
    let homs = module_hom_complex(&hx, &hy).unwrap();
    assert_eq!(homs.complex().dims(), [(0, 1)].into());
    let model = arc(homs.transform(0).cone().unwrap());

    let total = |m: &DgModule| m.total_dim();
    assert_eq!(total(&r.module), total(&hx) + total(&hy));
    let heq = homotopy_equivalence_modules(&r.module, &model, SEED, BUDGET).unwrap();
    assert_eq!(heq.verdict, Verdict::Yes);
    let w = heq.witness.unwrap();
    assert!(w.verify());
    assert!(w.forward.cone().unwrap().is_acyclic().acyclic);
}

#[test]
fn zero_module_resolves_to_zero() {
    let a = arc(corpus::a3(Q));
    let r = bar_resolution(&arc(DgModule::zero(a)), 3);
    assert_eq!(r.module.total_dim(), 0);
    assert_eq!(r.status, ResolutionStatus::Complete);
}

#[test]
fn truncated_resolutions_report_their_status() {
    for field in [F2, Q] {
        for c in [corpus::dual_numbers(field), corpus::iso_arrow(field)] {
            let a = arc(c);
            let m = arc(DgModule::yoneda(&a, 0).unwrap());
            let r = bar_resolution(&m, 3);
            assert!(r.module.is_valid());
            assert!(is_semi_free(&r.module, &r.certificate).unwrap());
            let expected = if r.augmentation.is_quasi_iso() {
                ResolutionStatus::TruncatedQuasiIso
            } else {
                ResolutionStatus::Insufficient
            };
            assert_eq!(r.status, expected);
        }
    }
}

#[test]
fn yoneda_certificate_and_forced_failures() {
    let a = arc(corpus::a3(F3));
    let hy = DgModule::yoneda(&a, 1).unwrap();
    let unit = Generator {
        object: 1,
        degree: 0,
        element: a.unit_dense(1),
    };
    let cert = certify(&hy, vec![unit.clone()]).unwrap();
    assert_eq!(cert.step_count(), 1);
    assert!(is_semi_free(&hy, &cert).unwrap());

    let mut wrong = cert.clone();
    wrong.generators[0].degree = 1;
    assert!(!is_semi_free(&hy, &wrong).unwrap());

    // a bar certificate with a tampered attaching degree
    let sy = arc(DgModule::simple(&arc(corpus::a2(F3)), 1).unwrap());
    let r = bar_resolution(&sy, 4);
    let g = r
        .certificate
        .attaching
        .iter()
        .position(|t| !t.is_empty())
        .unwrap();
    let mut tampered = r.certificate.clone();
    tampered.generators[g].degree += 2;
    assert!(!is_semi_free(&r.module, &tampered).unwrap());

    let mut malformed = cert;
    malformed.steps.clear();
    assert!(is_semi_free(&hy, &malformed).is_err());

    // not a free basis: the unit of the wrong object
    assert!(certify(&hy, vec![Generator { object: 0, ..unit }]).is_none());
}

#[test]
fn hprojective_battery_checks() {
    for field in [F2, Q] {
        for (name, c) in corpus::directed_categories(field) {
            let a = arc(c);
            let battery = corpus::acyclic_battery(&a);
            assert!(battery.len() >= 5, "{name}");
            for (mname, m) in corpus::module_battery(&a) {
                let r = bar_resolution(&arc(m), 8);
                let report = hprojective_battery_check(&r.module, &battery).unwrap();
                assert_eq!(report.verdict, Verdict::Yes, "{name} {mname}: {report:?}");
            }
        }
    }
    let a = arc(corpus::a2(F2));
    let sy = arc(DgModule::simple(&a, 1).unwrap());
    let cone_hx = cone_of_identity(&DgModule::yoneda(&a, 0).unwrap());
    let report = hprojective_battery_check(&sy, &[("cone".into(), cone_hx)]).unwrap();
    assert_eq!(report.verdict, Verdict::Yes);

    let empty = hprojective_battery_check(&sy, &[]).unwrap();
    assert_eq!(empty.verdict, Verdict::Unknown);
    assert!(!empty.evidence);

    let not_acyclic = vec![("h^x".to_string(), DgModule::yoneda(&a, 0).unwrap())];
    assert!(hprojective_battery_check(&sy, &not_acyclic).is_err());
}

#[test]
fn homotopy_equivalence_examples() {
    let a = arc(corpus::a2(F2));
    let hx = DgModule::yoneda(&a, 0).unwrap();
    let hy = DgModule::yoneda(&a, 1).unwrap();

    let same =
        homotopy_equivalence_modules(&arc(hy.clone()), &arc(hy.clone()), SEED, BUDGET).unwrap();
    assert_eq!(same.verdict, Verdict::Yes);
    assert!(same.witness.unwrap().verify());

    let padded = arc(sum(&a, &[&hy, &cone_of_identity(&hx)]));
    let r = homotopy_equivalence_modules(&arc(hy.clone()), &padded, SEED, BUDGET).unwrap();
    assert_eq!(r.verdict, Verdict::Yes);
    assert!(r.witness.unwrap().verify());

    let r = homotopy_equivalence_modules(&arc(hx), &arc(hy), SEED, BUDGET).unwrap();
    assert_eq!(r.verdict, Verdict::No);

    let other = arc(corpus::a3(F2));
    assert!(
        homotopy_equivalence_modules(&padded, &arc(DgModule::zero(other)), SEED, BUDGET).is_err()
    );
}

/// `N(x) = N(y) = K` with `a` acting by zero: same cohomology as `h^y`, not equivalent to it.
fn split_module(field: Field) -> (Arc<DgCategory>, DgModule) {
    let a = arc(corpus::a2(field));
    let hy = DgModule::yoneda(&a, 1).unwrap();
    let zero = dgker::linalg::Matrix::zeros(field, 1, 1);
    (a, hy.with_action(0, 1, 0, zero).unwrap())
}

#[test]
fn undecided_over_the_rationals() {
    let (a, split) = split_module(Q);
    assert!(split.is_valid());
    let hy = arc(DgModule::yoneda(&a, 1).unwrap());
    let r = homotopy_equivalence_modules(&hy, &arc(split.clone()), SEED, BUDGET).unwrap();
    assert_eq!(r.verdict, Verdict::Unknown);
    assert!(r.examined as usize > BUDGET);

    let (a2, split2) = split_module(F2);
    let hy2 = arc(DgModule::yoneda(&a2, 1).unwrap());
    assert_eq!(
        homotopy_equivalence_modules(&hy2, &arc(split2), SEED, BUDGET)
            .unwrap()
            .verdict,
        Verdict::No
    );
}

fn vectors_of(h: &HomComplex, n: i32, coeffs: &[Scalar], basis: &[Vec<Scalar>]) -> NatTransform {
    let field = h.source().field();
    let mut v = vec![field.zero(); h.dim()];
    for (b, c) in basis.iter().zip(coeffs) {
        for (o, x) in v.iter_mut().zip(b) {
            *o = o.add(&x.mul(c));
        }
    }
    h.element(&v, n).unwrap()
}

fn degree_zero_cycles(h: &HomComplex) -> Vec<Vec<Scalar>> {
    let c = h.complex();
    let idx = c.indices_in(0);
    let all: Vec<usize> = (0..c.dim()).collect();
    c.d()
        .select(&all, &idx)
        .kernel()
        .columns()
        .into_iter()
        .map(|k| {
            let mut v = vec![c.field().zero(); c.dim()];
            for (i, x) in k.into_iter().enumerate() {
                v[idx[i]] = x;
            }
            v
        })
        .collect()
}

/// Is `θ` a boundary in `h`?
fn is_boundary(h: &HomComplex, theta: &NatTransform) -> bool {
    let c = h.complex();
    let coords = h.coordinates(theta).unwrap();
    let all: Vec<usize> = (0..c.dim()).collect();
    c.d()
        .select(&all, &c.indices_in(-1))
        .solve(&coords)
        .unwrap()
        .is_some()
}

/// Exhaustive search over all pairs of degree-0 cycles `f`, `g`.
fn brute_force_equivalent(m: &Arc<DgModule>, n: &Arc<DgModule>) -> bool {
    let field = m.field();
    let (hmn, hnm) = (
        module_hom_complex(m, n).unwrap(),
        module_hom_complex(n, m).unwrap(),
    );
    let (hmm, hnn) = (
        module_hom_complex(m, m).unwrap(),
        module_hom_complex(n, n).unwrap(),
    );
    let (zf, zg) = (degree_zero_cycles(&hmn), degree_zero_cycles(&hnm));
    assert!(zf.len() + zg.len() <= 14, "brute force too large");
    let id_m = NatTransform::identity(m);
    let id_n = NatTransform::identity(n);
    let minus = field.from_i64(-1);
    for cf in field.enumerate(zf.len()) {
        let f = vectors_of(&hmn, 0, &cf, &zf);
        for cg in field.enumerate(zg.len()) {
            let g = vectors_of(&hnm, 0, &cg, &zg);
            let gf = g.compose(&f).unwrap().add(&id_m.scale(&minus)).unwrap();
            let fg = f.compose(&g).unwrap().add(&id_n.scale(&minus)).unwrap();
            if is_boundary(&hmm, &gf) && is_boundary(&hnn, &fg) {
                return true;
            }
        }
    }
    false
}

#[test]
fn equivalence_decisions_agree_with_brute_force() {
    let mut compared = 0;
    for (name, c) in [
        ("A2", corpus::a2(F2)),
        ("dual", corpus::dual_numbers(F2)),
        ("contractible-arrow", corpus::contractible_arrow(F2)),
    ] {
        let a = arc(c);
        let mut modules: Vec<(String, DgModule)> = corpus::module_battery(&a)
            .into_iter()
            .filter(|(_, m)| m.total_dim() <= 4)
            .collect();
        if name == "A2" {
            modules.push(("split".into(), split_module(F2).1));
            let hy = DgModule::yoneda(&a, 1).unwrap();
            modules.push((
                "h^y+cone".into(),
                sum(
                    &a,
                    &[&hy, &cone_of_identity(&DgModule::yoneda(&a, 0).unwrap())],
                ),
            ));
        }
        for (n1, m1) in &modules {
            for (n2, m2) in &modules {
                if m1.total_dim() + m2.total_dim() > 8 {
                    continue;
                }
                let (m1, m2) = (arc(m1.clone()), arc(m2.clone()));
                let r = homotopy_equivalence_modules(&m1, &m2, SEED, BUDGET).unwrap();
                assert_ne!(r.verdict, Verdict::Unknown, "{name}: {n1} vs {n2}");
                assert_eq!(
                    r.verdict == Verdict::Yes,
                    brute_force_equivalent(&m1, &m2),
                    "{name}: {n1} vs {n2}"
                );
                if let Some(w) = r.witness {
                    assert!(w.verify());
                }
                compared += 1;
            }
        }
    }
    assert!(compared >= 30);
}

#[test]
fn essential_image_membership() {
    let a = arc(corpus::a2(F2));
    let hy = DgModule::yoneda(&a, 1).unwrap();
    let r = essim_membership(&arc(hy.clone()), SEED, BUDGET).unwrap();
    assert_eq!((r.verdict, r.object), (Verdict::Yes, Some(1)));

    let padded = sum(
        &a,
        &[&hy, &cone_of_identity(&DgModule::yoneda(&a, 0).unwrap())],
    );
    let r = essim_membership(&arc(padded), SEED, BUDGET).unwrap();
    assert_eq!((r.verdict, r.object), (Verdict::Yes, Some(1)));
    assert!(r.witness.unwrap().verify());

    let sy = DgModule::simple(&a, 1).unwrap();
    assert_eq!(
        essim_membership(&arc(sy), SEED, BUDGET).unwrap().verdict,
        Verdict::No
    );
}

#[test]
fn right_quasi_representability() {
    for (name, c) in corpus::categories(F2) {
        let a = arc(c);
        let r = rqr_check(&unit_kernel(&a), SEED, BUDGET).unwrap();
        assert_eq!(r.verdict, Verdict::Yes, "{name}");
        for (x, entry) in r.entries.iter().enumerate() {
            assert_eq!(
                entry.witness_object.as_deref(),
                Some(a.object_name(x)),
                "{name}"
            );
            assert!(entry.witness.as_ref().unwrap().verify());
        }
    }
    for (name, e) in corpus::kernels(F2) {
        if name.starts_with("incl") || name.starts_with("collapse") {
            assert_eq!(
                rqr_check(&e, SEED, BUDGET).unwrap().verdict,
                Verdict::Yes,
                "{name}"
            );
        }
    }
    // a kernel from K whose only value is S_y
    let k = arc(corpus::unit(F2));
    let a2 = arc(corpus::a2(F2));
    let sy = DgModule::simple(&a2, 1).unwrap();
    let e = Kernel::from_module(k, a2, &sy).unwrap();
    let r = rqr_check(&e, SEED, BUDGET).unwrap();
    assert_eq!(r.verdict, Verdict::No);
    assert_eq!(r.entries[0].witness_object, None);
}

#[test]
fn resolved_kernels_have_semi_free_slices() {
    for field in [F2, Q] {
        let a2 = arc(corpus::a2(field));
        let a3 = arc(corpus::a3(field));
        let kernels = [
            ("unit(A2)", unit_kernel(&a2)),
            ("unit(A3)", unit_kernel(&a3)),
            (
                "incl(x→A2)",
                functor_kernel(&dgker::category::DgFunctor::object_inclusion(&a2, 0)).unwrap(),
            ),
            (
                "collapse",
                functor_kernel(&corpus::collapse_a2(field)).unwrap(),
            ),
        ];
        for (name, e) in kernels {
            let r = resolve_kernel(&e, 8);
            assert_eq!(r.status, ResolutionStatus::Complete, "{name}");
            assert!(r.kernel.is_valid());
            assert!(
                is_semi_free(r.kernel.carrier(), &r.certificate).unwrap(),
                "{name}"
            );
            let phi = dgker::kernel::curry_kernel(&r.kernel);
            let battery = corpus::acyclic_battery(e.right());
            for x in 0..e.left().len() {
                let cert =
                    slice_certificate(&r.kernel, &r.certificate, x).expect("slice is semi-free");
                assert!(is_semi_free(phi.object(x), &cert).unwrap(), "{name} at {x}");
                let report = hprojective_battery_check(phi.object(x), &battery).unwrap();
                assert_eq!(report.verdict, Verdict::Yes, "{name} at {x}");
            }
        }
    }
    let zero = Kernel::zero(arc(corpus::a2(F2)), arc(corpus::a3(F2))).unwrap();
    let r = resolve_kernel(&zero, 4);
    assert_eq!(r.kernel.carrier().total_dim(), 0);
}

#[test]
fn micro_count_of_equivalence_classes() {
    let k = arc(corpus::unit(F2));
    let b = arc(corpus::a2(F2));
    let mut candidates: Vec<DgModule> = corpus::module_battery(&b)
        .into_iter()
        .map(|(_, m)| m)
        .collect();
    let hx = DgModule::yoneda(&b, 0).unwrap();
    let hy = DgModule::yoneda(&b, 1).unwrap();
    candidates.push(sum(&b, &[&hx, &cone_of_identity(&hy)]));
    candidates.push(sum(&b, &[&hy, &cone_of_identity(&hx)]));
    candidates.push(split_module(F2).1);
    let mut representable = Vec::new();
    for m in candidates {
        let e = Kernel::from_module(k.clone(), b.clone(), &m).unwrap();
        if rqr_check(&e, SEED, BUDGET).unwrap().verdict == Verdict::Yes {
            representable.push(arc(m));
        }
    }
    assert!(representable.len() >= 4);
    let classes = heq_classes(&representable, SEED, BUDGET).unwrap().unwrap();
    let iso_classes = LinearCategory::h0(&b).iso_classes(SEED, BUDGET).unwrap();
    assert_eq!(iso_classes.len(), 2);
    assert_eq!(classes.len(), iso_classes.len());
}
