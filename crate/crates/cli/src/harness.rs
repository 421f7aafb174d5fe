//! The acceptance suite: fifteen exact, property-style criteria over the
//! bundled corpus. Each criterion reports how many instances it examined and
//! names every failing one.

use std::fmt::Display;
use std::fs;
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::Parser;
use serde_json::{json, Value};

use dgker::category::{
    check_fibration, check_quasi_equivalence, construct_standard_homotopy, mor_category,
    path_object, DgCategory, DgFunctor, LinearCategory,
};
use dgker::corpus;
use dgker::io::{parse, report_schema, serialize, Check, Document, NoReferences, Payload, Report};
use dgker::kernel::{
    check_adjunction, check_associativity, curry_kernel, ext_sum_iso, ext_yoneda_iso, extcomp_iso,
    external_kernel_product, kerprod_ext_iso, kerprod_value_iso, left_unit_iso, right_unit_iso,
    unit_kernel, Kernel,
};
use dgker::linalg::{Field, Matrix, Scalar};
use dgker::module::{check_yoneda, module_hom_complex, DgModule, HomComplex, NatTransform};
use dgker::resolution::{
    bar_resolution, heq_classes, homotopy_equivalence_modules, hprojective_battery_check,
    is_semi_free, resolve_kernel, rqr_check, slice_certificate, ResolutionStatus,
};
use dgker::{Error, Result, Verdict};

use crate::commands::{execute, Cli};

const F2: Field = Field::F2;
const Q: Field = Field::Rational;

pub struct Outcome {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub instances: usize,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn check(&self) -> Check {
        Check::new(
            format!("{:>2}. {}", self.id, self.title),
            Verdict::from_bool(self.passed),
            json!({ "instances": self.instances, "failures": self.failures }),
        )
    }

    /// One line for terminal output.
    pub fn line(&self) -> String {
        let mut s = format!(
            "[{}] {:>2}. {} ({} instances)",
            if self.passed { "pass" } else { "FAIL" },
            self.id,
            self.title,
            self.instances
        );
        for f in self.failures.iter().take(5) {
            s.push_str("\n       ");
            s.push_str(f);
        }
        s
    }
}

#[derive(Default)]
struct Tally {
    instances: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, name: impl Display, ok: bool) {
        self.instances += 1;
        if !ok {
            self.failures.push(name.to_string());
        }
    }

    /// Unwraps a fallible step, recording an error as a failed instance.
    fn ok<T>(&mut self, name: impl Display, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(format!("{name}: {e}"), false);
                None
            }
        }
    }

    fn at_least(&mut self, what: &str, count: usize, min: usize) {
        if count < min {
            self.failures
                .push(format!("only {count} {what}, need at least {min}"));
        }
    }

    fn finish(self, id: usize, title: &'static str) -> Outcome {
        Outcome {
            id,
            title,
            passed: self.failures.is_empty() && self.instances > 0,
            instances: self.instances,
            failures: self.failures,
        }
    }
}

fn arc<T>(t: T) -> Arc<T> {
    Arc::new(t)
}

fn category(field: Field, name: &str) -> Arc<DgCategory> {
    arc(corpus::categories(field)
        .into_iter()
        .find(|(n, _)| *n == name)
        .expect("bundled category")
        .1)
}

fn kernel(field: Field, name: &str) -> Kernel {
    corpus::kernels(field)
        .into_iter()
        .find(|(n, _)| n == name)
        .expect("bundled kernel")
        .1
}

fn small_modules(base: &Arc<DgCategory>) -> Vec<(String, DgModule)> {
    corpus::module_battery(base)
        .into_iter()
        .filter(|(_, m)| m.total_dim() <= 4)
        .collect()
}

fn cone_of_identity(m: &DgModule) -> DgModule {
    NatTransform::identity(&arc(m.clone()))
        .cone()
        .expect("identity is closed")
}

fn direct_sum(base: &Arc<DgCategory>, parts: &[&DgModule]) -> DgModule {
    DgModule::direct_sum(base, parts).expect("common base")
}

/// `h^y` over A₂ with `a` acting by zero: same cohomology as `h^y`, not equivalent to it.
fn split_module(field: Field) -> DgModule {
    let a = arc(corpus::a2(field));
    let hy = DgModule::yoneda(&a, 1).expect("object exists");
    hy.with_action(0, 1, 0, Matrix::zeros(field, 1, 1))
        .expect("well-formed action")
}

fn validator_soundness(field: Field) -> Outcome {
    let mut t = Tally::default();
    let mut fields = vec![field];
    if field != Q {
        fields.push(Q);
    }
    for field in fields {
        for (name, c) in corpus::categories(field) {
            let c = arc(c);
            t.check(format!("{name}/{field}: {}", c.validate()), c.is_valid());
            for (mname, m) in corpus::module_battery(&c) {
                t.check(
                    format!("{mname} over {name}/{field}: {}", m.validate()),
                    m.is_valid(),
                );
            }
        }
        for (name, e) in corpus::kernels(field) {
            t.check(format!("{name}/{field}: {}", e.validate()), e.is_valid());
        }
        let collapse = corpus::collapse_a2(field);
        t.check(format!("collapse/{field}"), collapse.is_valid());
    }
    let mutants = corpus::mutants();
    t.at_least("mutants", mutants.len(), 10);
    for m in mutants {
        t.check(
            format!(
                "mutant {} should violate {}: {}",
                m.name, m.expected, m.report
            ),
            !m.report.passed() && m.report.violates(m.expected),
        );
    }
    t.finish(
        1,
        "validator accepts the corpus and names the identity each mutant breaks",
    )
}

fn dg_yoneda(field: Field) -> Outcome {
    let mut t = Tally::default();
    for (name, c) in corpus::categories(field) {
        let a = arc(c);
        for (mname, m) in corpus::module_battery(&a) {
            let m = arc(m);
            for x in 0..a.len() {
                let label = format!("{name}, M = {mname}, X = {}", a.object_name(x));
                let start = Instant::now();
                if let Some(check) = t.ok(&label, check_yoneda(&m, x)) {
                    let slow = start.elapsed() > Duration::from_secs(1);
                    t.check(format!("{label}: {check:?}"), check.passed());
                    if slow {
                        t.failures.push(format!("{label}: took longer than 1 s"));
                    }
                }
            }
        }
    }
    let n = t.instances;
    t.at_least("instances", n, 20);
    t.finish(2, "Hom(h^X, M) ≅ M(X) degreewise")
}

/// Ordered pairs of bundled kernels whose middle categories agree.
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

fn tensor_unit_and_associativity(field: Field) -> Outcome {
    let mut t = Tally::default();
    for (name, e) in corpus::kernels(field) {
        if let Some(iso) = t.ok(&name, left_unit_iso(&e)) {
            t.check(format!("left unit {name}: {iso:?}"), iso.passed());
        }
        if let Some(iso) = t.ok(&name, right_unit_iso(&e)) {
            t.check(format!("right unit {name}: {iso:?}"), iso.passed());
        }
    }
    let ks = corpus::kernels(field);
    let mut triples = 0;
    for (n1, e1) in &ks {
        for (n2, e2) in ks.iter().filter(|(_, e2)| e1.right() == e2.left()) {
            for (n3, e3) in ks.iter().filter(|(_, e3)| e2.right() == e3.left()) {
                let label = format!("({n1}, {n2}, {n3})");
                if let Some(iso) = t.ok(&label, check_associativity(e1, e2, e3)) {
                    t.check(format!("{label}: {iso:?}"), iso.passed());
                }
                triples += 1;
            }
        }
    }
    t.at_least("composable triples", triples, 10);
    t.finish(
        3,
        "unit-kernel composition and associativity comparisons are isomorphisms",
    )
}

fn adjunction(field: Field) -> Outcome {
    let mut t = Tally::default();
    let names = [
        "unit(A2)",
        "unit(dual)",
        "incl(x→A2)",
        "collapse(A2→K)",
        "unit(dual)[1]",
        "incl({x,z}→A3)",
        "unit(contractible-arrow)",
    ];
    for name in names {
        let e = kernel(field, name);
        let ms = small_modules(e.left());
        let ns = small_modules(e.right());
        for (mname, m) in ms.iter().take(3) {
            for (nname, n) in ns.iter().skip(1).take(2) {
                let label = format!("{name}, M = {mname}, N = {nname}");
                if let Some(r) = t.ok(&label, check_adjunction(&e, m, n)) {
                    t.check(format!("{label}: {r:?}"), r.passed());
                }
            }
        }
    }
    let n = t.instances;
    t.at_least("triples", n, 10);
    t.finish(
        4,
        "Ext_E is left adjoint to res (naturality and triangle identities)",
    )
}

fn ext_of_yoneda(field: Field) -> Outcome {
    let mut t = Tally::default();
    for (name, e) in corpus::kernels(field) {
        for x in 0..e.left().len() {
            let label = format!("{name} at {}", e.left().object_name(x));
            if let Some(iso) = t.ok(&label, ext_yoneda_iso(&e, x)) {
                t.check(format!("{label}: {iso:?}"), iso.passed());
            }
        }
        let ms = small_modules(e.left());
        let (m1, m2) = (&ms[1], &ms[ms.len() - 1]);
        let label = format!("{name} on {} ⊕ {}", m1.0, m2.0);
        if let Some(iso) = t.ok(&label, ext_sum_iso(&e, &m1.1, &m2.1)) {
            t.check(format!("{label}: {iso:?}"), iso.passed());
        }
    }
    t.finish(
        5,
        "Ext_E(h^X) ≅ Φ_E(X), and Ext_E preserves finite direct sums",
    )
}

fn ext_of_composite(field: Field) -> Outcome {
    let mut t = Tally::default();
    let pairs = composable_pairs(field);
    t.at_least("composable pairs", pairs.len(), 10);
    for (name, e1, e2) in pairs {
        for (mname, m) in small_modules(e1.left()) {
            let label = format!("{name}, M = {mname}");
            if let Some(iso) = t.ok(&label, extcomp_iso(&e1, &e2, &m)) {
                t.check(format!("{label}: {iso:?}"), iso.passed());
            }
        }
    }
    let (a, b, c) = ("incl(x→A2)", "unit(A2)", "collapse(A2→K)");
    if let Some(iso) = t.ok(
        "associativity",
        check_associativity(&kernel(field, a), &kernel(field, b), &kernel(field, c)),
    ) {
        t.check(
            format!("associativity on ({a}, {b}, {c}): {iso:?}"),
            iso.passed(),
        );
    }
    t.finish(6, "Ext_{E₂} ∘ Ext_{E₁} ≅ Ext_{E₁∘E₂}")
}

fn kernel_products(field: Field) -> Outcome {
    let mut t = Tally::default();
    let pairs = [
        ("unit(A2)", "unit(dual)"),
        ("unit(K)", "unit(K)"),
        ("unit(A2)", "unit(A2)"),
        ("incl(x→A2)", "unit(dual)[1]"),
        ("collapse(A2→K)", "unit(odd-path)"),
    ];
    for (p, q) in pairs {
        let (e1, e2) = (kernel(field, p), kernel(field, q));
        let label = format!("{p} ⊠ {q}");
        if let Some(product) = t.ok(&label, external_kernel_product(&e1, &e2)) {
            t.check(format!("{label} validates"), product.is_valid());
            if p.starts_with("unit") && q.starts_with("unit") {
                let tensor = arc(DgCategory::tensor(e1.left(), e2.left()).expect("same field"));
                t.check(
                    format!("{label} is the unit kernel of the tensor"),
                    product == unit_kernel(&tensor),
                );
            }
        }
        for x1 in 0..e1.left().len() {
            for x2 in 0..e2.left().len() {
                let at = format!("{label} at ({x1},{x2})");
                if let Some(iso) = t.ok(&at, kerprod_value_iso(&e1, &e2, x1, x2)) {
                    t.check(format!("{at}: {iso:?}"), iso.passed());
                }
            }
        }
        for (n1, m1) in small_modules(e1.left()).into_iter().take(3) {
            for (n2, m2) in small_modules(e2.left()).into_iter().skip(1).take(2) {
                let on = format!("{label} on {n1} ⊠ {n2}");
                if let Some(iso) = t.ok(&on, kerprod_ext_iso(&e1, &e2, &m1, &m2)) {
                    t.check(format!("{on}: {iso:?}"), iso.passed());
                }
            }
        }
    }
    t.finish(7, "external kernel products commute with currying and Ext")
}

fn path_objects(seed: u64, budget: usize) -> Outcome {
    let mut t = Tally::default();
    for (name, c) in corpus::categories(F2) {
        let a = arc(c);
        if let Some((m, _)) = t.ok(format!("Mor({name})"), mor_category(&a)) {
            t.check(format!("Mor({name}): {}", m.validate()), m.is_valid());
        }
        let Some(p) = t.ok(format!("P({name})"), path_object(&a)) else {
            continue;
        };
        t.check(
            format!("P({name}): {}", p.category.validate()),
            p.category.is_valid(),
        );
        for (fname, f) in [
            ("ι", &p.iota),
            ("s", &p.source),
            ("t", &p.target),
            ("(s,t)", &p.source_target),
        ] {
            t.check(format!("{fname} on {name}: {}", f.validate()), f.is_valid());
        }
        let id = DgFunctor::identity(&a);
        let diagonal = DgFunctor::pairing(&id, &id, p.product.clone());
        let composite = p.source_target.compose(&p.iota);
        t.check(
            format!("(s,t)∘ι = diagonal on {name}"),
            matches!((&composite, &diagonal), (Ok(l), Ok(r)) if l == r),
        );
        let qe = check_quasi_equivalence(&p.iota, seed, budget);
        t.check(format!("ι on {name}: {qe:?}"), qe.verdict == Verdict::Yes);
        let fib = check_fibration(&p.source_target);
        t.check(
            format!("(s,t) on {name}: {fib:?}"),
            fib.verdict == Verdict::Yes,
        );
    }
    t.finish(
        8,
        "P(A) is a path object: (s,t)∘ι = Δ, ι a quasi-equivalence, (s,t) a fibration",
    )
}

fn pick(k: &Arc<DgCategory>, b: &Arc<DgCategory>, x: usize) -> DgFunctor {
    DgFunctor::new(
        k.clone(),
        b.clone(),
        vec![x],
        vec![Matrix::identity(b.field(), 1)],
    )
    .expect("unit maps to unit")
}

fn standard_homotopies(field: Field) -> Outcome {
    let mut t = Tally::default();
    let check = |t: &mut Tally,
                 label: String,
                 f: &DgFunctor,
                 g: &DgFunctor,
                 alpha: &[dgker::linalg::SparseVec]| {
        if let Some((p, h)) = t.ok(&label, construct_standard_homotopy(f, g, alpha)) {
            t.check(format!("{label}: H is a dg functor"), h.is_valid());
            t.check(
                format!("{label}: s∘H = F"),
                p.source.compose(&h).ok().as_ref() == Some(f),
            );
            t.check(
                format!("{label}: t∘H = G"),
                p.target.compose(&h).ok().as_ref() == Some(g),
            );
        }
    };
    for (name, c) in corpus::categories(field) {
        let a = arc(c);
        let id = DgFunctor::identity(&a);
        let units: Vec<_> = (0..a.len()).map(|x| a.unit(x).clone()).collect();
        check(&mut t, format!("identity of {name}"), &id, &id, &units);
    }
    let i = category(field, "iso-arrow");
    let k = arc(corpus::unit(field));
    let (at_x, at_y) = (pick(&k, &i, 0), pick(&k, &i, 1));
    let u = vec![(i.basis_index(0, 1, "u").expect("u"), field.one())];
    let v = vec![(i.basis_index(1, 0, "v").expect("v"), field.one())];
    check(&mut t, "K → iso-arrow through u".into(), &at_x, &at_y, &[u]);
    check(&mut t, "K → iso-arrow through v".into(), &at_y, &at_x, &[v]);

    let a2 = category(field, "A2");
    let a = vec![(a2.basis_index(0, 1, "a").expect("a"), field.one())];
    let rejected = matches!(
        construct_standard_homotopy(&pick(&k, &a2, 0), &pick(&k, &a2, 1), &[a]),
        Err(Error::NotInvertible(_))
    );
    t.check("a non-invertible α is rejected", rejected);
    t.finish(9, "standard homotopy H: A → P(B) with s∘H = F, t∘H = G")
}

fn resolutions(field: Field, seed: u64, budget: usize) -> Outcome {
    let mut t = Tally::default();
    for (name, c) in corpus::directed_categories(field) {
        let a = arc(c);
        for (mname, m) in corpus::module_battery(&a) {
            let label = format!("{mname} over {name}");
            let m = arc(m);
            let r = bar_resolution(&m, 8);
            t.check(
                format!("{label}: status {:?}", r.status),
                r.status == ResolutionStatus::Complete,
            );
            t.check(
                format!("{label}: {}", r.module.validate()),
                r.module.is_valid(),
            );
            t.check(
                format!("{label}: π closed"),
                r.augmentation.is_valid() && r.augmentation.is_closed(),
            );
            t.check(
                format!("{label}: π quasi-isomorphism"),
                r.augmentation.is_quasi_iso(),
            );
            let cert = is_semi_free(&r.module, &r.certificate);
            t.check(format!("{label}: certificate"), matches!(cert, Ok(true)));
        }
    }
    // S_y over A₂ against the cone of h^x → h^y
    let a = category(field, "A2");
    let sy = arc(DgModule::simple(&a, 1).expect("A2 is directed"));
    let r = bar_resolution(&sy, 4);
    let hx = arc(DgModule::yoneda(&a, 0).expect("x"));
    let hy = arc(DgModule::yoneda(&a, 1).expect("y"));
    if let Some(homs) = t.ok("Hom(h^x, h^y)", module_hom_complex(&hx, &hy)) {
        t.check(
            "Hom(h^x, h^y) is one-dimensional",
            homs.complex().dims() == [(0, 1)].into(),
        );
        if let Some(model) = t.ok("cone model", homs.transform(0).cone()) {
            let model = arc(model);
            if let Some(heq) = t.ok(
                "S_y model",
                homotopy_equivalence_modules(&r.module, &model, seed, budget),
            ) {
                t.check(
                    format!("resolution of S_y ≃ cone(h^x → h^y): {:?}", heq.verdict),
                    heq.verdict == Verdict::Yes,
                );
                if let Some(w) = heq.witness {
                    t.check("S_y witness verifies", w.verify());
                    let acyclic = w.forward.cone().map(|c| c.is_acyclic().acyclic);
                    t.check(
                        "cone of the comparison map is acyclic",
                        matches!(acyclic, Ok(true)),
                    );
                }
            }
        }
    }
    t.finish(
        10,
        "bar resolutions are complete, exact and certified semi-free",
    )
}

fn hprojective_slices(field: Field) -> Outcome {
    let mut t = Tally::default();
    for (name, e) in corpus::kernels(field) {
        if e.left().directed_order().is_none() || e.right().directed_order().is_none() {
            continue;
        }
        let r = resolve_kernel(&e, 8);
        t.check(
            format!("{name}: status {:?}", r.status),
            r.status == ResolutionStatus::Complete,
        );
        t.check(format!("{name}: resolution validates"), r.kernel.is_valid());
        let battery = corpus::acyclic_battery(e.right());
        t.at_least("acyclic modules", battery.len(), 5);
        let phi = curry_kernel(&r.kernel);
        for x in 0..e.left().len() {
            let label = format!("{name} at {}", e.left().object_name(x));
            match slice_certificate(&r.kernel, &r.certificate, x) {
                Some(cert) => t.check(
                    format!("{label}: slice certificate"),
                    matches!(is_semi_free(phi.object(x), &cert), Ok(true)),
                ),
                None => t.check(format!("{label}: slice is not semi-free"), false),
            }
            if let Some(report) = t.ok(&label, hprojective_battery_check(phi.object(x), &battery)) {
                t.check(
                    format!("{label}: {report:?}"),
                    report.verdict == Verdict::Yes,
                );
            }
        }
    }
    t.finish(11, "slices of resolved kernels kill the acyclic battery")
}

fn combine(h: &HomComplex, n: i32, coeffs: &[Scalar], basis: &[Vec<Scalar>]) -> NatTransform {
    let field = h.source().field();
    let mut v = vec![field.zero(); h.dim()];
    for (b, c) in basis.iter().zip(coeffs) {
        for (o, x) in v.iter_mut().zip(b) {
            *o = o.add(&x.mul(c));
        }
    }
    h.element(&v, n).expect("degree-homogeneous combination")
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

fn is_boundary(h: &HomComplex, theta: &NatTransform) -> bool {
    let c = h.complex();
    let coords = h.coordinates(theta).expect("θ lies in the complex");
    let all: Vec<usize> = (0..c.dim()).collect();
    matches!(
        c.d().select(&all, &c.indices_in(-1)).solve(&coords),
        Ok(Some(_))
    )
}

/// Exhaustive search over every pair of degree-0 cycles.
fn brute_force_equivalent(m: &Arc<DgModule>, n: &Arc<DgModule>) -> Result<bool> {
    let field = m.field();
    let (hmn, hnm) = (module_hom_complex(m, n)?, module_hom_complex(n, m)?);
    let (hmm, hnn) = (module_hom_complex(m, m)?, module_hom_complex(n, n)?);
    let (zf, zg) = (degree_zero_cycles(&hmn), degree_zero_cycles(&hnm));
    let minus = field.from_i64(-1);
    let (id_m, id_n) = (
        NatTransform::identity(m).scale(&minus),
        NatTransform::identity(n).scale(&minus),
    );
    for cf in field.enumerate(zf.len()) {
        let f = combine(&hmn, 0, &cf, &zf);
        for cg in field.enumerate(zg.len()) {
            let g = combine(&hnm, 0, &cg, &zg);
            if is_boundary(&hmm, &g.compose(&f)?.add(&id_m)?)
                && is_boundary(&hnn, &f.compose(&g)?.add(&id_n)?)
            {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn equivalence_decisions(seed: u64, budget: usize) -> Outcome {
    let mut t = Tally::default();
    for name in ["A2", "dual", "contractible-arrow"] {
        let a = category(F2, name);
        let mut modules = small_modules(&a);
        if name == "A2" {
            modules.push(("split".into(), split_module(F2)));
            let hy = DgModule::yoneda(&a, 1).expect("y");
            let hx = DgModule::yoneda(&a, 0).expect("x");
            modules.push((
                "h^y ⊕ cone".into(),
                direct_sum(&a, &[&hy, &cone_of_identity(&hx)]),
            ));
        }
        for (n1, m1) in &modules {
            for (n2, m2) in &modules {
                if m1.total_dim() + m2.total_dim() > 8 {
                    continue;
                }
                let label = format!("{name}: {n1} vs {n2}");
                let (m1, m2) = (arc(m1.clone()), arc(m2.clone()));
                let Some(r) = t.ok(&label, homotopy_equivalence_modules(&m1, &m2, seed, budget))
                else {
                    continue;
                };
                let Some(truth) = t.ok(&label, brute_force_equivalent(&m1, &m2)) else {
                    continue;
                };
                t.check(
                    format!("{label}: decided {:?}, brute force {truth}", r.verdict),
                    r.verdict == Verdict::from_bool(truth),
                );
                if let Some(w) = r.witness {
                    t.check(format!("{label}: witness verifies"), w.verify());
                }
            }
        }
    }
    t.finish(
        12,
        "homotopy-equivalence decisions over F2 agree with brute force",
    )
}

fn representable_count(seed: u64, budget: usize) -> Outcome {
    let mut t = Tally::default();
    let k = arc(corpus::unit(F2));
    let b = category(F2, "A2");
    let mut candidates: Vec<(String, DgModule)> = corpus::module_battery(&b);
    let hx = DgModule::yoneda(&b, 0).expect("x");
    let hy = DgModule::yoneda(&b, 1).expect("y");
    candidates.push((
        "h^x ⊕ cone(id_h^y)".into(),
        direct_sum(&b, &[&hx, &cone_of_identity(&hy)]),
    ));
    candidates.push((
        "h^y ⊕ cone(id_h^x)".into(),
        direct_sum(&b, &[&hy, &cone_of_identity(&hx)]),
    ));
    candidates.push(("split".into(), split_module(F2)));
    let mut representable = Vec::new();
    for (name, m) in candidates {
        let Some(e) = t.ok(&name, Kernel::from_module(k.clone(), b.clone(), &m)) else {
            continue;
        };
        if let Some(r) = t.ok(&name, rqr_check(&e, seed, budget)) {
            t.check(
                format!("{name}: rqr decided"),
                r.verdict != Verdict::Unknown,
            );
            if r.verdict == Verdict::Yes {
                representable.push(arc(m));
            }
        }
    }
    let iso = LinearCategory::h0(&b).iso_classes(7, 64);
    t.check(
        "Iso(H⁰(A2)) decided with 2 classes",
        iso.as_ref().map(Vec::len) == Some(2),
    );
    match heq_classes(&representable, seed, budget) {
        Ok(Some(classes)) => t.check(
            format!(
                "{} representable kernels in {} classes",
                representable.len(),
                classes.len()
            ),
            Some(classes.len()) == iso.as_ref().map(Vec::len),
        ),
        Ok(None) => t.check("equivalence classes undecided", false),
        Err(e) => t.check(format!("equivalence classes: {e}"), false),
    }
    t.finish(
        13,
        "right quasi-representable kernels K → A2 form |Iso H⁰(A2)| classes",
    )
}

fn tensor_preserves_quasi_equivalences(seed: u64, budget: usize) -> Outcome {
    let mut t = Tally::default();
    let a2 = category(F2, "A2");
    let iso = category(F2, "iso-arrow");
    let k = arc(corpus::unit(F2));
    let ka2 = arc(DgCategory::tensor(&k, &a2).expect("same field"));
    let mut functors: Vec<(String, DgFunctor)> = Vec::new();
    for name in ["A2", "dual", "contractible-arrow"] {
        functors.push((
            format!("id_{name}"),
            DgFunctor::identity(&category(F2, name)),
        ));
    }
    for name in ["A2", "iso-arrow"] {
        if let Some(p) = t.ok(format!("P({name})"), path_object(&category(F2, name))) {
            functors.push((format!("ι_{name}"), p.iota));
        }
    }
    functors.push(("x → iso-arrow".into(), DgFunctor::object_inclusion(&iso, 0)));
    if let Some(f) = t.ok("K⊗A2 → A2", DgFunctor::relabel(ka2, a2.clone())) {
        functors.push(("K⊗A2 → A2".into(), f));
    }
    functors.push(("x → A2".into(), DgFunctor::object_inclusion(&a2, 0)));
    let mut quasi = 0;
    for (fname, f) in &functors {
        if check_quasi_equivalence(f, seed, budget).verdict != Verdict::Yes {
            continue;
        }
        quasi += 1;
        for aname in ["K", "A2", "dual", "contractible-arrow"] {
            let a = category(F2, aname);
            let label = format!("id_{aname} ⊗ {fname}");
            if let Some(tf) = t.ok(&label, DgFunctor::tensor(&DgFunctor::identity(&a), f)) {
                t.check(format!("{label}: {}", tf.validate()), tf.is_valid());
                let r = check_quasi_equivalence(&tf, seed, budget);
                t.check(
                    format!("{label}: {:?}", r.verdict),
                    r.verdict == Verdict::Yes,
                );
            }
        }
    }
    t.at_least("quasi-equivalences", quasi, 3);
    t.finish(14, "id_A ⊗ F is a quasi-equivalence whenever F is")
}

/// Every kind of payload built from the bundled corpus.
fn corpus_documents(field: Field) -> Vec<(String, Document)> {
    let mut out = Vec::new();
    for (name, c) in corpus::categories(field) {
        let c = arc(c);
        out.push((
            name.to_string(),
            Document::new(Payload::Category(c.clone())),
        ));
        out.push((
            format!("{name}^op"),
            Document::new(Payload::Category(arc(c.opposite()))),
        ));
        for (mname, m) in corpus::module_battery(&c) {
            let m = arc(m);
            out.push((
                format!("{mname} over {name}"),
                Document::new(Payload::Module(m.clone())),
            ));
            out.push((
                format!("id of {mname} over {name}"),
                Document::new(Payload::Transformation(NatTransform::identity(&m))),
            ));
        }
    }
    let a2 = arc(corpus::a2(field));
    if let Ok(t) = DgCategory::tensor(&a2, &a2) {
        out.push(("A2⊗A2".into(), Document::new(Payload::Category(arc(t)))));
    }
    if let Ok((m, _)) = mor_category(&a2) {
        out.push(("Mor(A2)".into(), Document::new(Payload::Category(arc(m)))));
    }
    if let Ok(p) = path_object(&a2) {
        out.push((
            "P(A2)".into(),
            Document::new(Payload::Category(p.category.clone())),
        ));
        out.push(("ι".into(), Document::new(Payload::Functor(p.iota))));
        out.push((
            "(s,t)".into(),
            Document::new(Payload::Functor(p.source_target)),
        ));
    }
    out.push((
        "collapse".into(),
        Document::new(Payload::Functor(corpus::collapse_a2(field))),
    ));
    for (name, k) in corpus::kernels(field) {
        out.push((name, Document::new(Payload::Kernel(k))));
    }
    out
}

fn run_command(args: &[&str]) -> Result<Report> {
    let cli = Cli::try_parse_from(std::iter::once("dgker").chain(args.iter().copied()))
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    execute(&cli)
}

fn serialization() -> Outcome {
    let mut t = Tally::default();
    for field in [F2, Field::Prime(3), Q] {
        for (name, doc) in corpus_documents(field) {
            let text = serialize(&doc);
            let ok = match parse(&text, &NoReferences) {
                Ok(back) => back == doc && serialize(&back) == text,
                Err(_) => false,
            };
            t.check(format!("round trip of {name} over {field}"), ok);
        }
    }

    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => {
            t.check(format!("temporary directory: {e}"), false);
            return t.finish(
                15,
                "documents round-trip and reports are valid and deterministic",
            );
        }
    };
    let d = |f: &str| dir.path().join(f).display().to_string();
    let _ = t.ok(
        "export-corpus",
        run_command(&["export-corpus", &d(""), "--field", "F2"]),
    );
    if let Ok(entries) = fs::read_dir(dir.path()) {
        for entry in entries.flatten() {
            let path = entry.path();
            let Ok(text) = fs::read_to_string(&path) else {
                continue;
            };
            let same = io_round_trip(&text);
            t.check(format!("file {} round-trips", path.display()), same);
        }
    }

    let schema: Value = serde_json::from_str(report_schema()).expect("schema is JSON");
    let validator = match jsonschema::validator_for(&schema) {
        Ok(v) => v,
        Err(e) => {
            t.check(format!("report schema: {e}"), false);
            return t.finish(
                15,
                "documents round-trip and reports are valid and deterministic",
            );
        }
    };
    let out = d("E12.dg");
    let commands: Vec<Vec<String>> = [
        vec!["validate", &d("A2.dg")],
        vec!["opposite", &d("odd-path.dg")],
        vec!["h0", &d("iso-arrow.dg")],
        vec!["yoneda", &d("A3.dg"), "y"],
        vec!["path-object", &d("A2.dg")],
        vec!["curry", &d("kernel.incl_x_A2.dg"), "x"],
        vec!["ext", &d("kernel.unit_A2.dg"), &d("A2.h_y.dg")],
        vec![
            "compose-kernels",
            &d("kernel.incl_x_A2.dg"),
            &d("kernel.unit_A2.dg"),
            "--out",
            &out,
        ],
        vec!["validate", &out],
        vec!["bar-resolve", &d("A2.S_y.dg")],
        vec![
            "heq-modules",
            &d("iso-arrow.h_x.dg"),
            &d("iso-arrow.h_y.dg"),
            "--seed",
            "3",
        ],
        vec!["heq-modules", &d("A2.h_x.dg"), &d("A2.h_y.dg")],
        vec!["essim", &d("A2.S_x.dg")],
        vec!["check-qe", &d("collapse_A2.dg")],
        vec!["check-fibration", &d("A2.path.iota.dg")],
    ]
    .iter()
    .map(|c| c.iter().map(|s| s.to_string()).collect())
    .collect();
    for cmd in &commands {
        let args: Vec<&str> = cmd.iter().map(String::as_str).collect();
        let label = cmd[0].clone();
        let Some(first) = t.ok(&label, run_command(&args)) else {
            continue;
        };
        let json = first.to_json();
        let valid = serde_json::from_str::<Value>(&json)
            .map(|v| validator.is_valid(&v))
            .unwrap_or(false);
        t.check(format!("{label}: report matches the schema"), valid);
        t.check(
            format!("{label}: exit code agrees with the verdict"),
            first.verdict == Verdict::all(first.checks.iter().map(|c| c.verdict))
                && first.exit_code
                    == [Verdict::Yes, Verdict::No, Verdict::Unknown]
                        .iter()
                        .position(|v| *v == first.verdict)
                        .unwrap_or(3) as i32,
        );
        let second = run_command(&args).map(|r| r.to_json());
        t.check(
            format!("{label}: byte-identical on rerun"),
            second.as_deref() == Ok(json.as_str()),
        );
    }
    t.finish(
        15,
        "documents round-trip and reports are valid and deterministic",
    )
}

fn io_round_trip(text: &str) -> bool {
    match parse(text, &NoReferences) {
        Ok(doc) => serialize(&doc) == text,
        Err(_) => false,
    }
}

/// Runs every criterion. `field` applies to the criteria that are stated
/// over an arbitrary field; the others fix F2 (or Q for the mutants).
pub fn run(field: Field, seed: u64, budget: usize) -> Vec<Outcome> {
    let criteria: Vec<Box<dyn Fn() -> Outcome + Send + Sync>> = vec![
        Box::new(move || validator_soundness(field)),
        Box::new(move || dg_yoneda(field)),
        Box::new(move || tensor_unit_and_associativity(field)),
        Box::new(move || adjunction(field)),
        Box::new(move || ext_of_yoneda(field)),
        Box::new(move || ext_of_composite(field)),
        Box::new(move || kernel_products(field)),
        Box::new(move || path_objects(seed, budget)),
        Box::new(move || standard_homotopies(field)),
        Box::new(move || resolutions(field, seed, budget)),
        Box::new(move || hprojective_slices(field)),
        Box::new(move || equivalence_decisions(seed, budget)),
        Box::new(move || representable_count(seed, budget)),
        Box::new(move || tensor_preserves_quasi_equivalences(seed, budget)),
        Box::new(serialization),
    ];
    criteria.iter().map(|c| c()).collect()
}
