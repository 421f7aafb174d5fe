//! The hom complex between two dg modules.

use std::sync::Arc;

use serde::Serialize;

use super::{DgModule, NatTransform};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar, Solver};
use crate::par;

/// Degree-`n` natural transformations, as the kernel of the graded
/// naturality system on the unknown component entries.
#[derive(Clone, Debug)]
struct DegreeBlock {
    degree: i32,
    /// Unknown `k` is entry `(r, c)` of the component at object `x`.
    unknowns: Vec<(usize, usize, usize)>,
    /// Per object, a `dim N(x) × dim M(x)` lookup into `unknowns` (`usize::MAX` = none).
    lookup: Vec<Vec<usize>>,
    /// Columns: a basis of solutions in unknown coordinates.
    basis: Matrix,
    solver: Solver,
}

/// `Hom(M, N)` with an explicit basis of homogeneous natural transformations.
#[derive(Clone, Debug)]
pub struct HomComplex {
    source: Arc<DgModule>,
    target: Arc<DgModule>,
    complex: Complex,
    blocks: Vec<DegreeBlock>,
    /// Complex basis index `i` is column `blocks[b].basis[.., k]`.
    locate: Vec<(usize, usize)>,
}

impl HomComplex {
    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn source(&self) -> &Arc<DgModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DgModule> {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    /// The transformation of basis element `i`.
    pub fn transform(&self, i: usize) -> NatTransform {
        let (b, k) = self.locate[i];
        let block = &self.blocks[b];
        let coords = block.basis.column_vec(k);
        self.transform_from_unknowns(block, &coords)
    }

    /// The transformation with complex coordinates `v`, which must be
    /// homogeneous of degree `n`.
    pub fn element(&self, v: &[Scalar], n: i32) -> Result<NatTransform> {
        let mut out = NatTransform::zero(self.source.clone(), self.target.clone(), n);
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if self.complex.degree(i) != n {
                return Err(Error::InvalidInput(format!(
                    "coordinate {i} is not of degree {n}"
                )));
            }
            out = out.add(&self.transform(i).scale(c))?;
        }
        Ok(out)
    }

    /// Coordinates of a homogeneous transformation, or `None` if it is not natural.
    pub fn coordinates(&self, theta: &NatTransform) -> Option<Vec<Scalar>> {
        let field = self.source.field();
        let mut out = vec![field.zero(); self.dim()];
        let Some(b) = self.blocks.iter().position(|b| b.degree == theta.degree()) else {
            return theta.is_zero().then_some(out);
        };
        let block = &self.blocks[b];
        let mut flat = vec![field.zero(); block.unknowns.len()];
        for (x, comp) in theta.components().iter().enumerate() {
            for (r, c, value) in comp.entries() {
                let k = block.lookup[x][r * self.source.value(x).dim() + c];
                if k == usize::MAX {
                    return None;
                }
                flat[k] = value.clone();
            }
        }
        let local = block.solver.solve(&flat)?;
        for (i, &(bb, k)) in self.locate.iter().enumerate() {
            if bb == b {
                out[i] = local[k].clone();
            }
        }
        Some(out)
    }

    fn transform_from_unknowns(&self, block: &DegreeBlock, coords: &[Scalar]) -> NatTransform {
        let field = self.source.field();
        let n = self.source.len();
        let mut triplets: Vec<Vec<(usize, usize, Scalar)>> = vec![Vec::new(); n];
        for (k, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                let (x, r, col) = block.unknowns[k];
                triplets[x].push((r, col, c.clone()));
            }
        }
        let components = triplets
            .into_iter()
            .enumerate()
            .map(|(x, t)| {
                Matrix::from_triplets(
                    field,
                    self.target.value(x).dim(),
                    self.source.value(x).dim(),
                    t,
                )
            })
            .collect();
        NatTransform::new(
            self.source.clone(),
            self.target.clone(),
            block.degree,
            components,
        )
        .expect("component shapes")
    }
}

/// Builds `Hom(M, N)`: in degree `n`, all degree-`n` natural transformations;
/// differential `dθ = d ∘ θ - (-1)^n θ ∘ d`.
pub fn module_hom_complex(m: &Arc<DgModule>, n: &Arc<DgModule>) -> Result<HomComplex> {
    if m.base() != n.base() && **m.base() != **n.base() {
        return Err(Error::BaseMismatch(
            "hom between modules over different categories".into(),
        ));
    }
    let field = m.field();
    let range = degree_range(m, n);
    let degrees: Vec<i32> = match range {
        Some((lo, hi)) => (lo..=hi).collect(),
        None => Vec::new(),
    };
    let blocks: Vec<DegreeBlock> = par::map(&degrees, |&d| solve_degree(m, n, d));
    let mut locate = Vec::new();
    let mut basis_degrees = Vec::new();
    let mut offsets = Vec::new();
    for (b, block) in blocks.iter().enumerate() {
        offsets.push(locate.len());
        for k in 0..block.basis.cols() {
            locate.push((b, k));
            basis_degrees.push(block.degree);
        }
    }
    let total = locate.len();
    let mut hom = HomComplex {
        source: m.clone(),
        target: n.clone(),
        complex: Complex::zero(field),
        blocks,
        locate,
    };
    // Differential: image of each basis transformation in the next block.
    let columns: Vec<Vec<(usize, Scalar)>> = par::map_range(total, |i| {
        let theta = hom.transform(i);
        let dtheta = theta.differential();
        let (b, _) = hom.locate[i];
        if b + 1 >= hom.blocks.len() {
            debug_assert!(dtheta.is_zero());
            return Vec::new();
        }
        let next = &hom.blocks[b + 1];
        let mut flat = vec![field.zero(); next.unknowns.len()];
        for (x, comp) in dtheta.components().iter().enumerate() {
            for (r, c, value) in comp.entries() {
                let k = next.lookup[x][r * m.value(x).dim() + c];
                flat[k] = value.clone();
            }
        }
        let local = next
            .solver
            .solve(&flat)
            .expect("the differential of a natural transformation is natural");
        local
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (offsets[b + 1] + k, c))
            .collect()
    });
    let d = crate::complex::columns_to_matrix(field, total, columns);
    hom.complex = Complex::new(field, basis_degrees, d)?;
    Ok(hom)
}

fn degree_range(m: &DgModule, n: &DgModule) -> Option<(i32, i32)> {
    let sm = m
        .values()
        .iter()
        .filter_map(Complex::support)
        .reduce(|a, b| (a.0.min(b.0), a.1.max(b.1)))?;
    let sn = n
        .values()
        .iter()
        .filter_map(Complex::support)
        .reduce(|a, b| (a.0.min(b.0), a.1.max(b.1)))?;
    Some((sn.0 - sm.1, sn.1 - sm.0))
}

fn solve_degree(m: &DgModule, n: &DgModule, degree: i32) -> DegreeBlock {
    let a = m.base();
    let field = m.field();
    let objects = a.len();
    let mut unknowns = Vec::new();
    let mut lookup = Vec::with_capacity(objects);
    let mut ranges = Vec::with_capacity(objects);
    for x in 0..objects {
        let start = unknowns.len();
        let (vm, vn) = (m.value(x), n.value(x));
        let mut table = vec![usize::MAX; vn.dim() * vm.dim()];
        for r in 0..vn.dim() {
            for c in 0..vm.dim() {
                if vn.degree(r) == vm.degree(c) + degree {
                    table[r * vm.dim() + c] = unknowns.len();
                    unknowns.push((x, r, c));
                }
            }
        }
        lookup.push(table);
        ranges.push(start..unknowns.len());
    }
    // Equation rows for `θ(x) M(f) - (-1)^{n|f|} N(f) θ(y) = 0`, one block per (x, y, f).
    let mut triplets = Vec::new();
    let mut row_offset = 0;
    for x in 0..objects {
        for y in 0..objects {
            let width = m.value(y).dim();
            let rows = n.value(x).dim() * width;
            for f in 0..a.hom_dim(x, y) {
                let sign = field.sign(degree as i64 * a.basis_degree(x, y, f) as i64);
                let act_m = m.action(x, y, f);
                let act_n_t = n.action(x, y, f).transpose();
                // θ(x)_{r,c} contributes row c of M(f) to equation row r.
                for k in ranges[x].clone() {
                    let (_, r, c) = unknowns[k];
                    for (j, v) in act_m.row(c) {
                        triplets.push((row_offset + r * width + j, k, v.clone()));
                    }
                }
                // θ(y)_{r,c} contributes -sign times column r of N(f) to equation column c.
                for k in ranges[y].clone() {
                    let (_, r, c) = unknowns[k];
                    for (i, v) in act_n_t.row(r) {
                        triplets.push((row_offset + i * width + c, k, v.mul(&sign).neg()));
                    }
                }
                row_offset += rows;
            }
        }
    }
    let system = Matrix::from_triplets(field, row_offset, unknowns.len(), triplets);
    let basis = system.kernel();
    let solver = Solver::new(&basis);
    DegreeBlock {
        degree,
        unknowns,
        lookup,
        basis,
        solver,
    }
}

/// The evaluation map `Hom(h^x, M) → M(x)`, `θ ↦ θ(x)(id_x)`, and whether
/// it is an isomorphism of complexes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct YonedaCheck {
    pub object: String,
    pub hom_dims: Vec<(i32, usize)>,
    pub value_dims: Vec<(i32, usize)>,
    pub chain_map: bool,
    pub isomorphism: bool,
}

impl YonedaCheck {
    pub fn passed(&self) -> bool {
        self.chain_map && self.isomorphism
    }
}

/// Verifies the dg Yoneda isomorphism for `h^x` and `M` by evaluating at the unit.
pub fn check_yoneda(m: &Arc<DgModule>, x: usize) -> Result<YonedaCheck> {
    let a = m.base().clone();
    let h = Arc::new(DgModule::yoneda(&a, x)?);
    let hom = module_hom_complex(&h, m)?;
    let field = m.field();
    let unit = a.unit_dense(x);
    let columns: Vec<Vec<Scalar>> = (0..hom.dim())
        .map(|i| hom.transform(i).component(x).apply(&unit))
        .collect();
    let ev = Matrix::from_columns(field, m.value(x).dim(), &columns);
    let chain_map = ev.mul(hom.complex().d()) == m.value(x).d().mul(&ev)
        && ev
            .entries()
            .all(|(r, c, _)| m.value(x).degree(r) == hom.complex().degree(c));
    let isomorphism = ev.rows() == ev.cols() && ev.rank() == ev.rows();
    Ok(YonedaCheck {
        object: a.object_name(x).to_string(),
        hom_dims: hom.complex().dims().into_iter().collect(),
        value_dims: m.value(x).dims().into_iter().collect(),
        chain_map,
        isomorphism,
    })
}
