//! Semi-free certificates: a free basis of generators together with a
//! filtration in which each generator's differential lies in earlier steps.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar, Solver};
use crate::module::DgModule;

/// A generator `e ∈ P(object)`, spanning a summand `h^object[-degree]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub object: usize,
    pub degree: i32,
    pub element: Vec<Scalar>,
}

/// One term `e_h·φ` of an attaching map, `φ ∈ hom(object of g, object of h)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Attachment {
    pub generator: usize,
    pub coefficient: Vec<Scalar>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SemiFreeCertificate {
    pub generators: Vec<Generator>,
    /// Filtration step of each generator.
    pub steps: Vec<usize>,
    /// `d(e_g) = Σ e_h·φ_h` for each generator `g`.
    pub attaching: Vec<Vec<Attachment>>,
}

impl SemiFreeCertificate {
    pub fn step_count(&self) -> usize {
        self.steps.iter().max().map_or(0, |s| s + 1)
    }

    /// The Yoneda summands `(object, shift)` added at each step.
    pub fn summands(&self) -> Vec<Vec<(usize, i32)>> {
        let mut out = vec![Vec::new(); self.step_count()];
        for (g, &s) in self.generators.iter().zip(&self.steps) {
            out[s].push((g.object, -g.degree));
        }
        out
    }
}

/// `e·φ = (-1)^{|φ||e|} act(φ)(e)` for every generator and every basis `φ`
/// of `hom(z, object)`, as the columns of a matrix into `P(z)`.
fn free_map(p: &DgModule, generators: &[Generator], z: usize) -> Matrix {
    let base = p.base();
    let field = p.field();
    let mut cols = Vec::new();
    for g in generators {
        for phi in 0..base.hom_dim(z, g.object) {
            let s = field.sign(base.basis_degree(z, g.object, phi) as i64 * g.degree as i64);
            let v = p.action(z, g.object, phi).apply(&g.element);
            cols.push(v.iter().map(|x| x.mul(&s)).collect());
        }
    }
    Matrix::from_columns(field, p.value(z).dim(), &cols)
}

fn is_basis(m: &Matrix) -> bool {
    m.rows() == m.cols() && m.rank() == m.rows()
}

fn shape_ok(p: &DgModule, generators: &[Generator]) -> bool {
    generators
        .iter()
        .all(|g| g.object < p.len() && g.element.len() == p.value(g.object).dim())
}

/// Builds a certificate from a candidate free basis: checks the basis,
/// computes attaching maps, and orders generators into filtration steps.
/// Returns `None` if the generators are not a free basis or no such ordering exists.
pub fn certify(p: &DgModule, generators: Vec<Generator>) -> Option<SemiFreeCertificate> {
    if !shape_ok(p, &generators) {
        return None;
    }
    let base = p.base();
    let maps: Vec<Matrix> = (0..p.len()).map(|z| free_map(p, &generators, z)).collect();
    if !maps.iter().all(is_basis) {
        return None;
    }
    let solvers: Vec<Solver> = maps.iter().map(Solver::new).collect();
    let mut attaching = Vec::with_capacity(generators.len());
    for g in &generators {
        let dg = p.value(g.object).d().apply(&g.element);
        let coords = solvers[g.object].solve(&dg)?;
        let mut terms = Vec::new();
        let mut at = 0;
        for (h, gh) in generators.iter().enumerate() {
            let len = base.hom_dim(g.object, gh.object);
            let coefficient = coords[at..at + len].to_vec();
            at += len;
            if coefficient.iter().any(|x| !x.is_zero()) {
                terms.push(Attachment {
                    generator: h,
                    coefficient,
                });
            }
        }
        attaching.push(terms);
    }
    let mut steps: Vec<Option<usize>> = vec![None; generators.len()];
    loop {
        let mut progress = false;
        for g in 0..generators.len() {
            if steps[g].is_some() {
                continue;
            }
            let deps: Option<Vec<usize>> =
                attaching[g].iter().map(|t| steps[t.generator]).collect();
            if let Some(deps) = deps {
                steps[g] = Some(deps.into_iter().max().map_or(0, |s| s + 1));
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    let steps = steps.into_iter().collect::<Option<Vec<_>>>()?;
    Some(SemiFreeCertificate {
        generators,
        steps,
        attaching,
    })
}

/// Verifies a certificate exactly: homogeneous generators forming a free
/// basis, attaching maps of the right degree that reproduce every
/// differential, and attachments only to strictly earlier steps.
/// Malformed certificates (wrong lengths, unknown objects or generators) are errors.
pub fn is_semi_free(p: &DgModule, cert: &SemiFreeCertificate) -> Result<bool> {
    let n = cert.generators.len();
    if !shape_ok(p, &cert.generators) || cert.steps.len() != n || cert.attaching.len() != n {
        return Err(Error::InvalidInput(
            "certificate does not match the module's shape".into(),
        ));
    }
    let base = p.base();
    let field = p.field();
    for (g, terms) in cert.generators.iter().zip(&cert.attaching) {
        for t in terms {
            let Some(h) = cert.generators.get(t.generator) else {
                return Err(Error::InvalidInput(format!(
                    "attachment to unknown generator {}",
                    t.generator
                )));
            };
            if t.coefficient.len() != base.hom_dim(g.object, h.object) {
                return Err(Error::InvalidInput(
                    "attaching coefficient has the wrong length".into(),
                ));
            }
        }
    }
    let homogeneous = cert.generators.iter().all(|g| {
        let value = p.value(g.object);
        g.element
            .iter()
            .enumerate()
            .all(|(i, x)| x.is_zero() || value.degree(i) == g.degree)
    });
    if !homogeneous || !(0..p.len()).all(|z| is_basis(&free_map(p, &cert.generators, z))) {
        return Ok(false);
    }
    for (gi, g) in cert.generators.iter().enumerate() {
        let mut sum = vec![field.zero(); g.element.len()];
        for t in &cert.attaching[gi] {
            let h = &cert.generators[t.generator];
            if cert.steps[t.generator] >= cert.steps[gi] {
                return Ok(false);
            }
            for (phi, c) in t.coefficient.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if base.basis_degree(g.object, h.object, phi) != g.degree + 1 - h.degree {
                    return Ok(false);
                }
                let s = field
                    .sign(base.basis_degree(g.object, h.object, phi) as i64 * h.degree as i64)
                    .mul(c);
                let v = p.action(g.object, h.object, phi).apply(&h.element);
                for (acc, x) in sum.iter_mut().zip(v) {
                    *acc = acc.add(&x.mul(&s));
                }
            }
        }
        if sum != p.value(g.object).d().apply(&g.element) {
            return Ok(false);
        }
    }
    Ok(true)
}
