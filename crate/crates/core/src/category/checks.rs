//! Quasi-equivalence and fibration checks for dg functors.

use serde::Serialize;

use super::linear::ENUMERATION_LIMIT;
use super::{DgFunctor, LinearCategory};
use crate::complex::ChainMap;
use crate::linalg::{sparse, Solver};
use crate::validation::Verdict;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiEquivalenceReport {
    pub verdict: Verdict,
    /// Hom pairs `(x, y)` whose component is not a quasi-isomorphism.
    pub non_quasi_iso: Vec<(String, String)>,
    /// Per target object: the verdict and, when found, a source object whose
    /// image is isomorphic to it in `H⁰`.
    pub essential_image: Vec<(String, Verdict, Option<String>)>,
}

/// Decides whether `F` is a quasi-isomorphism on every hom complex and
/// essentially surjective on `H⁰` (the latter three-valued over Q).
pub fn check_quasi_equivalence(f: &DgFunctor, seed: u64, budget: usize) -> QuasiEquivalenceReport {
    let (a, b) = (&*f.source, &*f.target);
    let mut non_quasi_iso = Vec::new();
    for x in 0..a.len() {
        for y in 0..a.len() {
            let map = ChainMap::from_matrix(
                a.hom(x, y),
                b.hom(f.object(x), f.object(y)),
                f.hom_map(x, y).clone(),
            );
            let ok = map.map(|m| m.is_quasi_iso()).unwrap_or(false);
            if !ok {
                non_quasi_iso.push((a.object_name(x).to_string(), a.object_name(y).to_string()));
            }
        }
    }
    let h0 = LinearCategory::h0(b);
    let essential_image: Vec<(String, Verdict, Option<String>)> = (0..b.len())
        .map(|t| {
            let mut verdict = Verdict::No;
            for x in 0..a.len() {
                match h0.find_isomorphism(f.object(x), t, seed, budget).verdict {
                    Verdict::Yes => {
                        return (
                            b.object_name(t).to_string(),
                            Verdict::Yes,
                            Some(a.object_name(x).to_string()),
                        )
                    }
                    Verdict::Unknown => verdict = Verdict::Unknown,
                    Verdict::No => {}
                }
            }
            (b.object_name(t).to_string(), verdict, None)
        })
        .collect();
    let homs = Verdict::from_bool(non_quasi_iso.is_empty());
    let verdict = homs.and(Verdict::all(essential_image.iter().map(|e| e.1)));
    QuasiEquivalenceReport {
        verdict,
        non_quasi_iso,
        essential_image,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibrationReport {
    pub verdict: Verdict,
    /// Hom pairs whose component is not surjective.
    pub non_full: Vec<(String, String)>,
    /// Isomorphisms `F(a) → b` of `H⁰` that admit no lift, as text.
    pub unlifted: Vec<String>,
    pub isofibration: Verdict,
}

/// Decides whether `F` is full (surjective on every hom complex) and `H⁰(F)`
/// is an isofibration. The isofibration half is decided by enumeration over
/// finite fields and reported `Unknown` otherwise.
pub fn check_fibration(f: &DgFunctor) -> FibrationReport {
    let (a, b) = (&*f.source, &*f.target);
    let mut non_full = Vec::new();
    for x in 0..a.len() {
        for y in 0..a.len() {
            let m = f.hom_map(x, y);
            if m.rank() != m.rows() {
                non_full.push((a.object_name(x).to_string(), a.object_name(y).to_string()));
            }
        }
    }
    let field = a.field();
    let ha = LinearCategory::h0(a);
    let hb = LinearCategory::h0(b);
    let mut unlifted = Vec::new();
    let mut isofibration = if field.is_finite() {
        Verdict::Yes
    } else {
        Verdict::Unknown
    };
    if field.is_finite() {
        'search: for x in 0..a.len() {
            let fx = f.object(x);
            for t in 0..b.len() {
                let Some(isos) = hb.isomorphisms(fx, t) else {
                    isofibration = Verdict::Unknown;
                    break 'search;
                };
                for (v, _) in isos {
                    match lift_isomorphism(f, &ha, &hb, x, t, &v) {
                        Some(true) => {}
                        Some(false) => {
                            isofibration = Verdict::No;
                            unlifted.push(format!(
                                "{} at {} → {}",
                                hb_render(&v),
                                b.object_name(fx),
                                b.object_name(t)
                            ));
                        }
                        None => {
                            isofibration = Verdict::Unknown;
                            break 'search;
                        }
                    }
                }
            }
        }
    }
    let verdict = Verdict::from_bool(non_full.is_empty()).and(isofibration);
    FibrationReport {
        verdict,
        non_full,
        unlifted,
        isofibration,
    }
}

fn hb_render(v: &sparse::SparseVec) -> String {
    let parts: Vec<String> = v.iter().map(|(i, c)| format!("{c}·[{i}]")).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

/// Whether some iso `u: x → x'` with `F x' = t` maps to `v`; `None` if the
/// affine solution space is too large to enumerate.
fn lift_isomorphism(
    f: &DgFunctor,
    ha: &LinearCategory,
    hb: &LinearCategory,
    x: usize,
    t: usize,
    v: &sparse::SparseVec,
) -> Option<bool> {
    let field = ha.field();
    for x2 in (0..f.source.len()).filter(|&x2| f.object(x2) == t) {
        let m = ha.functor_matrix(f, hb, x, x2);
        let rhs = sparse::to_dense(field, v, m.rows());
        let Some(particular) = Solver::new(&m).solve(&rhs) else {
            continue;
        };
        let kernel = m.kernel();
        let k = kernel.cols();
        if field.space_size(k).is_none_or(|s| s > ENUMERATION_LIMIT) {
            return None;
        }
        for coeffs in field.enumerate(k) {
            let shift = kernel.apply(&coeffs);
            let u: Vec<_> = particular
                .iter()
                .zip(&shift)
                .map(|(p, s)| p.add(s))
                .collect();
            if ha.is_invertible(x, x2, &sparse::from_dense(&u)) {
                return Some(true);
            }
        }
    }
    Some(false)
}
