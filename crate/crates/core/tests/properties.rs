use std::sync::Arc;

use proptest::prelude::*;

use dgker::category::{DgCategory, DgFunctor};
use dgker::corpus;
use dgker::io::{parse, serialize, Document, NoReferences, Payload};
use dgker::linalg::{Field, Matrix, Scalar};
use dgker::module::{module_hom_complex, DgModule};
use dgker::{par, ChainMap, Complex};

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::F2),
        Just(Field::Prime(5)),
        Just(Field::Rational)
    ]
}

fn matrix_in(field: Field, rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| {
        let triplets = v
            .into_iter()
            .enumerate()
            .map(|(k, x)| (k / cols.max(1), k % cols.max(1), field.from_i64(x)));
        Matrix::from_triplets(field, rows, cols, triplets)
    })
}

fn matrix() -> impl Strategy<Value = Matrix> {
    (field(), 0usize..6, 0usize..6).prop_flat_map(|(f, r, c)| matrix_in(f, r, c))
}

fn vector(field: Field, n: usize) -> impl Strategy<Value = Vec<Scalar>> {
    proptest::collection::vec(-3i64..=3, n)
        .prop_map(move |v| v.into_iter().map(|x| field.from_i64(x)).collect())
}

/// A three-term complex in degrees 0, 1, 2 with `d₁ = R · coker(d₀)`, so `d² = 0`.
fn complex_in(field: Field) -> impl Strategy<Value = Complex> {
    (0usize..4, 0usize..4, 0usize..4)
        .prop_flat_map(move |(n0, n1, n2)| {
            (
                matrix_in(field, n1, n0),
                matrix_in(field, n2, n1.max(1) * 4),
                Just((n0, n1, n2)),
            )
        })
        .prop_map(move |(d0, r, (n0, n1, n2))| {
            let coker = d0.cokernel();
            let k = coker.dim();
            let r = r.select(&(0..n2).collect::<Vec<_>>(), &(0..k).collect::<Vec<_>>());
            let d1 = r.mul(&coker.projection);
            let n = n0 + n1 + n2;
            let (p0, p1, p2): (Vec<usize>, Vec<usize>, Vec<usize>) = (
                (0..n0).collect(),
                (n0..n0 + n1).collect(),
                (n0 + n1..n).collect(),
            );
            let d = d0.embed(n, n, &p1, &p0).add(&d1.embed(n, n, &p2, &p1));
            let degrees = p0
                .iter()
                .map(|_| 0)
                .chain(p1.iter().map(|_| 1))
                .chain(p2.iter().map(|_| 2))
                .collect();
            Complex::new(field, degrees, d).expect("d² = 0 by construction")
        })
}

fn complex() -> impl Strategy<Value = Complex> {
    field().prop_flat_map(complex_in)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(m in matrix()) {
        let k = m.kernel();
        prop_assert_eq!(m.rank() + k.cols(), m.cols());
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert_eq!(m.cokernel().dim(), m.rows() - m.rank());
    }

    #[test]
    fn cokernel_kills_the_image(m in matrix()) {
        let c = m.cokernel();
        prop_assert!(c.projection.mul(&m).is_zero());
        prop_assert!(c.projection.mul(&c.section).is_identity());
    }

    #[test]
    fn solve_recovers_consistent_systems((m, x) in matrix().prop_flat_map(|m| {
        let (f, c) = (m.field(), m.cols());
        (Just(m), vector(f, c))
    })) {
        let b = m.apply(&x);
        let y = m.solve(&b).unwrap().expect("b is in the image");
        prop_assert_eq!(m.apply(&y), b);
    }

    #[test]
    fn rref_is_deterministic_and_idempotent(m in matrix()) {
        let r = m.rref();
        prop_assert_eq!(&r, &m.rref());
        prop_assert_eq!(r.rref(), r.clone());
        prop_assert_eq!(r.rank(), m.rank());
    }

    #[test]
    fn euler_characteristic_is_cohomological(c in complex()) {
        prop_assert!(c.is_valid());
        prop_assert_eq!(c.euler_characteristic(), c.cohomology_euler_characteristic());
    }

    #[test]
    fn kunneth_for_tensor_products((x, y) in field().prop_flat_map(|f| (complex_in(f), complex_in(f)))) {
        let t = Complex::tensor(&x, &y).unwrap();
        prop_assert!(t.is_valid());
        let (bx, by) = (x.betti(), y.betti());
        let bt = t.betti();
        for (n, &b) in &bt {
            let expected: usize = bx.iter().map(|(i, p)| p * by.get(&(n - i)).copied().unwrap_or(0)).sum();
            prop_assert_eq!(b, expected, "degree {}", n);
        }
    }

    #[test]
    fn shift_moves_cohomology(c in complex(), k in -2i32..3) {
        let s = c.shift(k);
        let moved: Vec<(i32, usize)> = c.betti().into_iter().map(|(n, b)| (n - k, b)).collect();
        prop_assert_eq!(s.betti().into_iter().collect::<Vec<_>>(), moved);
    }

    /// The inclusion `C → C ⊕ D` is a quasi-isomorphism exactly when `D` is
    /// acyclic, and then (over a field) it has a verified homotopy inverse.
    #[test]
    fn quasi_isomorphisms_have_homotopy_inverses((c, d) in field().prop_flat_map(|f| (complex_in(f), complex_in(f)))) {
        let f = c.field();
        let sum = Complex::direct_sum(f, &[&c, &d]);
        let incl = Matrix::identity(f, c.dim()).embed(sum.dim(), c.dim(), &(0..c.dim()).collect::<Vec<_>>(), &(0..c.dim()).collect::<Vec<_>>());
        let map = ChainMap::from_matrix(&c, &sum, incl).unwrap();
        let qi = map.is_quasi_iso();
        prop_assert_eq!(qi, d.is_acyclic());
        let inverse = map.find_homotopy_inverse();
        prop_assert_eq!(inverse.is_some(), qi);
        if let Some(inv) = inverse {
            prop_assert!(inv.verify(&map));
        }
    }

    #[test]
    fn cone_of_identity_is_acyclic(c in complex()) {
        prop_assert!(ChainMap::identity(&c).cone().is_acyclic());
    }
}

fn category() -> impl Strategy<Value = DgCategory> {
    const NAMES: [&str; 5] = ["K", "A2", "dual", "contractible-arrow", "odd-path"];
    (
        field(),
        proptest::sample::select(&NAMES[..]),
        proptest::sample::select(&NAMES[..]),
    )
        .prop_map(|(f, a, b)| {
            let get = |n: &str| {
                corpus::categories(f)
                    .into_iter()
                    .find(|(m, _)| *m == n)
                    .unwrap()
                    .1
            };
            let (a, b) = (get(a), get(b));
            DgCategory::tensor(&a, &b).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn tensor_products_validate_and_round_trip(c in category()) {
        prop_assert!(c.is_valid());
        prop_assert!(c.opposite().is_valid());
        prop_assert_eq!(c.opposite().opposite(), c.clone());
        let doc = Document::new(Payload::Category(Arc::new(c)));
        let text = serialize(&doc);
        prop_assert_eq!(parse(&text, &NoReferences).unwrap(), doc);
    }

    #[test]
    fn identity_functor_composes_to_itself(c in category()) {
        let c = Arc::new(c);
        let id = DgFunctor::identity(&c);
        prop_assert!(id.is_valid());
        prop_assert_eq!(id.compose(&id).unwrap(), id);
    }
}

#[test]
fn parallel_and_sequential_paths_agree() {
    let a = Arc::new(
        DgCategory::tensor(
            &corpus::a2(Field::Prime(3)),
            &corpus::dual_numbers(Field::Prime(3)),
        )
        .unwrap(),
    );
    let modules: Vec<Arc<DgModule>> = corpus::module_battery(&a)
        .into_iter()
        .map(|(_, m)| Arc::new(m))
        .collect();
    let run = || {
        let mut out = Vec::new();
        for m in &modules {
            for n in &modules {
                out.push(module_hom_complex(m, n).unwrap().complex().clone());
            }
        }
        (out, a.validate())
    };
    par::set_parallel(false);
    let sequential = run();
    par::set_parallel(true);
    let parallel = run();
    assert_eq!(sequential, parallel);
}
