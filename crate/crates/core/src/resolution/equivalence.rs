//! Homotopy equivalences between dg modules, essential-image membership,
//! right quasi-representability, and h-projectivity evidence.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::category::ENUMERATION_LIMIT;
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::kernel::{curry_kernel, Kernel};
use crate::linalg::{sparse, Echelon, Field, Matrix, Scalar, Solver};
use crate::module::{module_hom_complex, DgModule, HomComplex, NatTransform};
use crate::par;
use crate::validation::Verdict;

/// `f: M → N`, `g: N → M` closed of degree 0 with `d(h_m) = g∘f - 1` and `d(h_n) = f∘g - 1`.
#[derive(Clone, Debug)]
pub struct HeqWitness {
    pub forward: NatTransform,
    pub backward: NatTransform,
    pub homotopy_source: NatTransform,
    pub homotopy_target: NatTransform,
}

impl HeqWitness {
    /// Rechecks every identity of the witness exactly.
    pub fn verify(&self) -> bool {
        let closed = |t: &NatTransform| t.degree() == 0 && t.is_valid() && t.is_closed();
        let deviation = |h: &NatTransform, a: &NatTransform, b: &NatTransform| -> Option<bool> {
            let composite = a.compose(b).ok()?;
            let id = NatTransform::identity(b.source());
            let minus = composite
                .add(&id.scale(&id.source().field().from_i64(-1)))
                .ok()?;
            Some(h.degree() == -1 && h.is_valid() && h.differential() == minus)
        };
        closed(&self.forward)
            && closed(&self.backward)
            && deviation(&self.homotopy_source, &self.backward, &self.forward) == Some(true)
            && deviation(&self.homotopy_target, &self.forward, &self.backward) == Some(true)
    }
}

#[derive(Clone, Debug)]
pub struct HeqResult {
    pub verdict: Verdict,
    pub witness: Option<HeqWitness>,
    /// Candidate classes in `H⁰(Hom(M, N))` that were tried.
    pub examined: u64,
    /// Whether the search covered every class (always true on a `No`).
    pub exhaustive: bool,
}

impl HeqResult {
    fn no(examined: u64) -> HeqResult {
        HeqResult {
            verdict: Verdict::No,
            witness: None,
            examined,
            exhaustive: true,
        }
    }
}

fn nonzero_betti(c: &Complex) -> Vec<(i32, usize)> {
    c.betti().into_iter().filter(|&(_, b)| b > 0).collect()
}

/// Coordinates (in the hom complex basis) of a basis of cycles in degree `n`.
fn cycles(h: &HomComplex, n: i32) -> Vec<Vec<Scalar>> {
    let c = h.complex();
    let idx = c.indices_in(n);
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

/// `d` from degree `n - 1` into the full hom complex, as a matrix.
fn boundary_map(h: &HomComplex, n: i32) -> Matrix {
    let c = h.complex();
    let all: Vec<usize> = (0..c.dim()).collect();
    c.d().select(&all, &c.indices_in(n - 1))
}

/// Representatives of `H⁰`: cycles completing a basis of the boundaries.
fn h0_representatives(h: &HomComplex) -> Vec<Vec<Scalar>> {
    let c = h.complex();
    let mut e = Echelon::new(c.field(), c.dim());
    for col in boundary_map(h, 0).columns() {
        e.insert(&sparse::from_dense(&col));
    }
    cycles(h, 0)
        .into_iter()
        .filter(|z| e.insert(&sparse::from_dense(z)))
        .collect()
}

fn combine(field: Field, vectors: &[Vec<Scalar>], coeffs: &[Scalar], len: usize) -> Vec<Scalar> {
    let mut out = vec![field.zero(); len];
    for (v, c) in vectors.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o = o.add(&x.mul(c));
        }
    }
    out
}

struct Search {
    field: Field,
    hmn: HomComplex,
    hnm: HomComplex,
    hmm: HomComplex,
    hnn: HomComplex,
    reps: Vec<Vec<Scalar>>,
    /// Basis of `Z⁰(N, M)` in `hnm` coordinates.
    backward: Vec<Vec<Scalar>>,
    /// `comp[j][i]`: coordinates in `hnn` of `reps[j] ∘ backward[i]`.
    comp: Vec<Vec<Vec<Scalar>>>,
    /// `d` of a basis of `Hom(N, N)⁻¹`, and that basis.
    bounds_n: Matrix,
    solver_m: Solver,
    id_n: Vec<Scalar>,
    id_m: Vec<Scalar>,
}

impl Search {
    fn new(m: &Arc<DgModule>, n: &Arc<DgModule>) -> Result<Search> {
        let field = m.field();
        let hmn = module_hom_complex(m, n)?;
        let hnm = module_hom_complex(n, m)?;
        let hmm = module_hom_complex(m, m)?;
        let hnn = module_hom_complex(n, n)?;
        let reps = h0_representatives(&hmn);
        let backward = cycles(&hnm, 0);
        let comp = par::map(&reps, |r| {
            let f = hmn.element(r, 0).expect("degree-0 cycle");
            backward
                .iter()
                .map(|g| {
                    let g = hnm.element(g, 0).expect("degree-0 cycle");
                    hnn.coordinates(&f.compose(&g).expect("composable"))
                        .expect("composite is natural")
                })
                .collect()
        });
        let bounds_n = boundary_map(&hnn, 0);
        let solver_m = Solver::new(&boundary_map(&hmm, 0));
        let id_n = hnn
            .coordinates(&NatTransform::identity(n))
            .expect("identity is natural");
        let id_m = hmm
            .coordinates(&NatTransform::identity(m))
            .expect("identity is natural");
        Ok(Search {
            field,
            hmn,
            hnm,
            hmm,
            hnn,
            reps,
            backward,
            comp,
            bounds_n,
            solver_m,
            id_n,
            id_m,
        })
    }

    /// Tries to invert the class `Σ coeffs[j] reps[j]` up to homotopy.
    fn invert(&self, coeffs: &[Scalar]) -> Option<HeqWitness> {
        let field = self.field;
        let dim_nn = self.hnn.dim();
        // columns: f∘g_i, then -d(k_l)
        let mut cols: Vec<Vec<Scalar>> = (0..self.backward.len())
            .map(|i| {
                let parts: Vec<Vec<Scalar>> = self.comp.iter().map(|row| row[i].clone()).collect();
                combine(field, &parts, coeffs, dim_nn)
            })
            .collect();
        for col in self.bounds_n.columns() {
            cols.push(col.iter().map(Scalar::neg).collect());
        }
        let system = Matrix::from_columns(field, dim_nn, &cols);
        let x = Solver::new(&system).solve(&self.id_n)?;
        let (xg, xk) = x.split_at(self.backward.len());
        let f = self
            .hmn
            .element(&combine(field, &self.reps, coeffs, self.hmn.dim()), 0)
            .ok()?;
        let g = self
            .hnm
            .element(&combine(field, &self.backward, xg, self.hnm.dim()), 0)
            .ok()?;
        let kn_coords = {
            let idx = self.hnn.complex().indices_in(-1);
            let mut v = vec![field.zero(); dim_nn];
            for (k, c) in xk.iter().enumerate() {
                v[idx[k]] = c.clone();
            }
            v
        };
        let homotopy_target = self.hnn.element(&kn_coords, -1).ok()?;
        // g∘f - 1 must be a boundary in Hom(M, M)
        let gf = self.hmm.coordinates(&g.compose(&f).ok()?)?;
        let rhs: Vec<Scalar> = gf.iter().zip(&self.id_m).map(|(a, b)| a.sub(b)).collect();
        let y = self.solver_m.solve(&rhs)?;
        let idx = self.hmm.complex().indices_in(-1);
        let mut km = vec![field.zero(); self.hmm.dim()];
        for (k, c) in y.into_iter().enumerate() {
            km[idx[k]] = c;
        }
        let homotopy_source = self.hmm.element(&km, -1).ok()?;
        Some(HeqWitness {
            forward: f,
            backward: g,
            homotopy_source,
            homotopy_target,
        })
    }
}

/// Decides whether `M` and `N` are homotopy equivalent, i.e. isomorphic in
/// `H⁰(dgm(A))`. Candidates run over `H⁰(Hom(M, N))`: exhaustively over
/// finite fields up to the enumeration limit, otherwise over the basis
/// classes and `budget` seeded random combinations, where failure is `Unknown`.
/// Each candidate is inverted up to homotopy by exact linear algebra.
pub fn homotopy_equivalence_modules(
    m: &Arc<DgModule>,
    n: &Arc<DgModule>,
    seed: u64,
    budget: usize,
) -> Result<HeqResult> {
    if **m.base() != **n.base() {
        return Err(Error::BaseMismatch(
            "modules over different categories".into(),
        ));
    }
    let same_cohomology = m
        .values()
        .iter()
        .zip(n.values())
        .all(|(a, b)| nonzero_betti(a) == nonzero_betti(b));
    if !same_cohomology {
        return Ok(HeqResult::no(0));
    }
    let search = Search::new(m, n)?;
    let field = search.field;
    let h = search.reps.len();
    let mut examined = 0u64;
    let found = |coeffs: &[Scalar], examined: &mut u64| {
        *examined += 1;
        search.invert(coeffs)
    };
    match field.space_size(h) {
        Some(total) if total <= ENUMERATION_LIMIT => {
            for v in field.enumerate(h) {
                if let Some(w) = found(&v, &mut examined) {
                    return Ok(HeqResult {
                        verdict: Verdict::Yes,
                        witness: Some(w),
                        examined,
                        exhaustive: false,
                    });
                }
            }
            Ok(HeqResult::no(examined))
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let basis = (0..h).map(|i| {
                let mut v = vec![field.zero(); h];
                v[i] = field.one();
                v
            });
            let random: Vec<Vec<Scalar>> = (0..budget)
                .map(|_| {
                    (0..h)
                        .map(|_| field.from_i64(rng.gen_range(-3..=3)))
                        .collect()
                })
                .collect();
            for v in std::iter::once(vec![field.zero(); h])
                .chain(basis)
                .chain(random)
            {
                if let Some(w) = found(&v, &mut examined) {
                    return Ok(HeqResult {
                        verdict: Verdict::Yes,
                        witness: Some(w),
                        examined,
                        exhaustive: false,
                    });
                }
            }
            Ok(HeqResult {
                verdict: Verdict::Unknown,
                witness: None,
                examined,
                exhaustive: false,
            })
        }
    }
}

/// Partitions modules into homotopy-equivalence classes, or `None` if some
/// comparison came back `Unknown`.
pub fn heq_classes(
    modules: &[Arc<DgModule>],
    seed: u64,
    budget: usize,
) -> Result<Option<Vec<Vec<usize>>>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    'next: for (i, m) in modules.iter().enumerate() {
        for class in classes.iter_mut() {
            match homotopy_equivalence_modules(&modules[class[0]], m, seed, budget)?.verdict {
                Verdict::Yes => {
                    class.push(i);
                    continue 'next;
                }
                Verdict::Unknown => return Ok(None),
                Verdict::No => {}
            }
        }
        classes.push(vec![i]);
    }
    Ok(Some(classes))
}

#[derive(Clone, Debug)]
pub struct EssimResult {
    pub verdict: Verdict,
    /// The representing object, when found.
    pub object: Option<usize>,
    pub witness: Option<HeqWitness>,
}

/// Whether `M` is homotopy equivalent to some Yoneda module `h^y`. A module
/// that literally is some `h^y` is witnessed by `y` and the identity.
pub fn essim_membership(m: &Arc<DgModule>, seed: u64, budget: usize) -> Result<EssimResult> {
    essim_preferring(m, None, seed, budget)
}

/// Like [`essim_membership`], trying the object `prefer` before the others.
fn essim_preferring(
    m: &Arc<DgModule>,
    prefer: Option<usize>,
    seed: u64,
    budget: usize,
) -> Result<EssimResult> {
    let base = m.base().clone();
    let mut order: Vec<usize> = prefer.into_iter().collect();
    order.extend((0..base.len()).filter(|&y| Some(y) != prefer));
    let yoneda: Vec<(usize, Arc<DgModule>)> = order
        .into_iter()
        .map(|y| Ok((y, Arc::new(DgModule::yoneda(&base, y)?))))
        .collect::<Result<_>>()?;
    if let Some(&(y, _)) = yoneda.iter().find(|(_, h)| **h == **m) {
        let id = NatTransform::identity(m);
        let zero = NatTransform::zero(m.clone(), m.clone(), -1);
        return Ok(EssimResult {
            verdict: Verdict::Yes,
            object: Some(y),
            witness: Some(HeqWitness {
                forward: id.clone(),
                backward: id,
                homotopy_source: zero.clone(),
                homotopy_target: zero,
            }),
        });
    }
    let mut verdict = Verdict::No;
    for (y, h) in &yoneda {
        let y = *y;
        let r = homotopy_equivalence_modules(m, h, seed, budget)?;
        match r.verdict {
            Verdict::Yes => {
                return Ok(EssimResult {
                    verdict: Verdict::Yes,
                    object: Some(y),
                    witness: r.witness,
                })
            }
            Verdict::Unknown => verdict = Verdict::Unknown,
            Verdict::No => {}
        }
    }
    Ok(EssimResult {
        verdict,
        object: None,
        witness: None,
    })
}

#[derive(Clone, Debug)]
pub struct RqrEntry {
    pub object: String,
    pub verdict: Verdict,
    pub witness_object: Option<String>,
    pub witness: Option<HeqWitness>,
}

#[derive(Clone, Debug)]
pub struct RqrReport {
    pub verdict: Verdict,
    pub entries: Vec<RqrEntry>,
}

/// Right quasi-representability: every `Φ_E(x)` lies in the essential image of Yoneda.
pub fn rqr_check(e: &Kernel, seed: u64, budget: usize) -> Result<RqrReport> {
    let phi = curry_kernel(e);
    let (a, b) = (e.left(), e.right());
    let entries = (0..a.len())
        .map(|x| {
            let prefer = (**a == **b).then_some(x);
            let r = essim_preferring(phi.object(x), prefer, seed, budget)?;
            Ok(RqrEntry {
                object: a.object_name(x).to_string(),
                verdict: r.verdict,
                witness_object: r.object.map(|y| b.object_name(y).to_string()),
                witness: r.witness,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RqrReport {
        verdict: Verdict::all(entries.iter().map(|e| e.verdict)),
        entries,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HprojReport {
    /// `Yes` if every `H⁰(Hom(M, N))` vanishes; `Unknown` for an empty battery.
    pub verdict: Verdict,
    /// `(battery member, dim H⁰(Hom(M, N)))`.
    pub entries: Vec<(String, usize)>,
    pub evidence: bool,
}

/// Checks `H⁰(Hom(M, N)) = 0` for each acyclic `N` of the battery.
/// Non-acyclic battery members are rejected.
pub fn hprojective_battery_check(
    m: &Arc<DgModule>,
    battery: &[(String, DgModule)],
) -> Result<HprojReport> {
    if let Some((name, _)) = battery.iter().find(|(_, n)| !n.is_acyclic().acyclic) {
        return Err(Error::InvalidInput(format!(
            "battery member {name} is not acyclic"
        )));
    }
    let entries = battery
        .iter()
        .map(|(name, n)| {
            let h = module_hom_complex(m, &Arc::new(n.clone()))?;
            Ok((
                name.clone(),
                h.complex().betti().get(&0).copied().unwrap_or(0),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = if entries.is_empty() {
        Verdict::Unknown
    } else {
        Verdict::from_bool(entries.iter().all(|(_, d)| *d == 0))
    };
    Ok(HprojReport {
        verdict,
        evidence: !entries.is_empty(),
        entries,
    })
}
