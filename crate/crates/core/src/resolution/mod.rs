//! Reduced bar resolutions with semi-free certificates, h-projectivity
//! evidence, and homotopy-equivalence decisions between dg modules.
//!
//! Modules are contravariant (`f ∈ hom(x, y)` acts `M(y) → M(x)`), so we
//! read them as right modules with `v·f = (-1)^{|f||v|} act(f)(v)`. The bar
//! resolution of `M` has value
//! `P(z) = ⊕ M(x₀) ⊗ Ā(x₁, x₀) ⊗ … ⊗ Ā(xₙ, xₙ₋₁) ⊗ hom(z, xₙ)`
//! over chains `x₀, …, xₙ`, where `Ā` is `hom` with the unit line divided out.
//! A basis element `m[a₁|…|aₙ]φ` has degree `|m| + Σ(|aᵢ| - 1) + |φ|`.

mod certificate;
mod equivalence;

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

pub use certificate::{certify, is_semi_free, Attachment, Generator, SemiFreeCertificate};
pub use equivalence::{
    essim_membership, heq_classes, homotopy_equivalence_modules, hprojective_battery_check,
    rqr_check, EssimResult, HeqResult, HeqWitness, HprojReport, RqrEntry, RqrReport,
};

use crate::category::DgCategory;
use crate::complex::Complex;
use crate::kernel::{curry_kernel, Kernel};
use crate::linalg::{Field, Matrix, Scalar};
use crate::module::{DgModule, NatTransform};
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResolutionStatus {
    /// Every chain was included and the augmentation is a quasi-isomorphism.
    Complete,
    /// Chains were cut at the length bound, yet the augmentation is still a quasi-isomorphism.
    TruncatedQuasiIso,
    /// Chains were cut and the augmentation is not a quasi-isomorphism.
    Insufficient,
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub module: Arc<DgModule>,
    /// The augmentation `π: P → M`.
    pub augmentation: NatTransform,
    pub certificate: SemiFreeCertificate,
    pub status: ResolutionStatus,
    /// The chains `x₀, …, xₙ` indexing the summands, in the order used by every value.
    pub chains: Vec<Vec<usize>>,
}

/// `hom(x, y)` modulo the unit when `x = y`.
struct Reduced {
    degrees: Vec<i32>,
    lift: Matrix,
    proj: Matrix,
    d: Matrix,
}

impl Reduced {
    fn new(a: &DgCategory, x: usize, y: usize) -> Reduced {
        let field = a.field();
        let hom = a.hom(x, y);
        let (proj, lift, degrees) = if x == y {
            let coker = Matrix::column(field, &a.unit_dense(x)).cokernel();
            let degrees = coker.free.iter().map(|&c| hom.degree(c)).collect();
            (coker.projection, coker.section, degrees)
        } else {
            let id = Matrix::identity(field, hom.dim());
            (id.clone(), id, hom.degrees().to_vec())
        };
        let d = proj.mul(hom.d()).mul(&lift);
        Reduced {
            degrees,
            lift,
            proj,
            d,
        }
    }

    fn dim(&self) -> usize {
        self.degrees.len()
    }
}

struct Chain {
    objects: Vec<usize>,
    /// Dimension of each tensor factor, `M(x₀)` first.
    radix: Vec<usize>,
    dim: usize,
    /// Degree of each coefficient basis vector `m[a₁|…|aₙ]`.
    degrees: Vec<i32>,
}

struct Bar<'a> {
    a: &'a DgCategory,
    m: &'a DgModule,
    reduced: Vec<Reduced>,
    chains: Vec<Chain>,
    index: HashMap<Vec<usize>, usize>,
    truncated: bool,
}

fn sign(field: Field, k: i64) -> Scalar {
    field.sign(k)
}

impl<'a> Bar<'a> {
    fn new(m: &'a DgModule, max_length: usize) -> Bar<'a> {
        let a: &DgCategory = m.base();
        let n = a.len();
        let reduced: Vec<Reduced> = (0..n * n).map(|k| Reduced::new(a, k / n, k % n)).collect();
        let mut bar = Bar {
            a,
            m,
            reduced,
            chains: Vec::new(),
            index: HashMap::new(),
            truncated: false,
        };
        let mut layer: Vec<Vec<usize>> = (0..n)
            .filter(|&x| m.value(x).dim() > 0)
            .map(|x| vec![x])
            .collect();
        let mut length = 0;
        while !layer.is_empty() {
            let mut next = Vec::new();
            for objects in layer {
                let last = *objects.last().expect("chains are non-empty");
                for y in 0..n {
                    if bar.reduced(y, last).dim() > 0 {
                        if length == max_length {
                            bar.truncated = true;
                        } else {
                            let mut longer = objects.clone();
                            longer.push(y);
                            next.push(longer);
                        }
                    }
                }
                bar.push_chain(objects);
            }
            layer = next;
            length += 1;
        }
        bar
    }

    /// `Ā(x, y)`, a quotient of `hom(x, y)`.
    fn reduced(&self, x: usize, y: usize) -> &Reduced {
        &self.reduced[x * self.a.len() + y]
    }

    fn push_chain(&mut self, objects: Vec<usize>) {
        let mut radix = vec![self.m.value(objects[0]).dim()];
        for w in objects.windows(2) {
            radix.push(self.reduced(w[1], w[0]).dim());
        }
        let dim = radix.iter().product();
        let degrees = (0..dim)
            .map(|v| {
                let digits = decode(&radix, v);
                let mut deg = self.m.value(objects[0]).degree(digits[0]);
                for k in 1..objects.len() {
                    deg += self.reduced(objects[k], objects[k - 1]).degrees[digits[k]] - 1;
                }
                deg
            })
            .collect();
        self.index.insert(objects.clone(), self.chains.len());
        self.chains.push(Chain {
            objects,
            radix,
            dim,
            degrees,
        });
    }

    fn factor_degree(&self, c: &Chain, k: usize, i: usize) -> i32 {
        if k == 0 {
            self.m.value(c.objects[0]).degree(i)
        } else {
            self.reduced(c.objects[k], c.objects[k - 1]).degrees[i]
        }
    }

    fn factor_d(&self, c: &Chain, k: usize) -> &Matrix {
        if k == 0 {
            self.m.value(c.objects[0]).d()
        } else {
            &self.reduced(c.objects[k], c.objects[k - 1]).d
        }
    }

    /// `b₁` on the coefficient factors of `m[a₁|…|aₙ]`, returning
    /// `(coefficient index, scalar)` pairs in the same chain. `prefix[k]` is
    /// the suspended degree of the factors before `k`.
    fn internal(&self, c: &Chain, digits: &[usize], prefix: &[i64]) -> Vec<(usize, Scalar)> {
        let field = self.a.field();
        let mut out = Vec::new();
        for k in 0..c.objects.len() {
            let s = sign(field, prefix[k] + 1);
            for (r, x) in self.factor_d(c, k).column_sparse(digits[k]) {
                let mut d2 = digits.to_vec();
                d2[k] = r;
                out.push((encode(&c.radix, &d2), x.mul(&s)));
            }
        }
        out
    }

    /// Suspended-degree prefix sums over the coefficient factors.
    fn prefix(&self, c: &Chain, digits: &[usize]) -> Vec<i64> {
        let mut prefix = vec![0i64];
        for (k, &i) in digits.iter().enumerate() {
            let last = *prefix.last().expect("non-empty");
            prefix.push(last + self.factor_degree(c, k, i) as i64 - 1);
        }
        prefix
    }

    fn offsets(&self, z: usize) -> (Vec<usize>, usize) {
        let mut offsets = Vec::with_capacity(self.chains.len());
        let mut total = 0;
        for c in &self.chains {
            offsets.push(total);
            total += c.dim * self.a.hom_dim(z, *c.objects.last().expect("non-empty"));
        }
        (offsets, total)
    }

    /// The value `P(z)` with its differential.
    fn value(&self, z: usize) -> Complex {
        let a = self.a;
        let field = a.field();
        let (offsets, total) = self.offsets(z);
        let mut degrees = Vec::with_capacity(total);
        for c in &self.chains {
            let last = *c.objects.last().expect("non-empty");
            let hom = a.hom(z, last);
            for v in 0..c.dim {
                for p in 0..hom.dim() {
                    degrees.push(c.degrees[v] + hom.degree(p));
                }
            }
        }
        let mut triplets = Vec::new();
        for (ci, c) in self.chains.iter().enumerate() {
            let n = c.objects.len() - 1;
            let last = c.objects[n];
            let hom = a.hom(z, last);
            let hd = hom.dim();
            for v in 0..c.dim {
                let digits = decode(&c.radix, v);
                let prefix = self.prefix(c, &digits);
                for p in 0..hd {
                    let col = offsets[ci] + v * hd + p;
                    let mut push = |row: usize, x: Scalar| triplets.push((row, col, x));
                    for (v2, x) in self.internal(c, &digits, &prefix) {
                        push(offsets[ci] + v2 * hd + p, x);
                    }
                    let s = sign(field, prefix[n + 1] + 1);
                    for (p2, x) in hom.d().column_sparse(p) {
                        push(offsets[ci] + v * hd + p2, x.mul(&s));
                    }
                    if n == 0 {
                        continue;
                    }
                    // b₂ merges: m·a₁, aₖ∘aₖ₊₁, and aₙ∘φ.
                    for k in 0..=n {
                        let s = sign(
                            field,
                            prefix[k] + self.factor_degree(c, k, digits[k]) as i64,
                        );
                        if k == 0 {
                            let (x0, x1) = (c.objects[0], c.objects[1]);
                            let red = self.reduced(x1, x0);
                            let lifted = red.lift.column_sparse(digits[1]);
                            let deg_a = red.degrees[digits[1]] as i64;
                            let deg_m = self.m.value(x0).degree(digits[0]) as i64;
                            let s = s.mul(&sign(field, deg_a * deg_m));
                            // absent exactly when M(x₁) = 0
                            let Some(&ci2) = self.index.get(&c.objects[1..]) else {
                                continue;
                            };
                            let c2 = &self.chains[ci2];
                            let act = self.m.act(x1, x0, &lifted);
                            for (r, x) in act.column_sparse(digits[0]) {
                                let mut d2 = vec![r];
                                d2.extend_from_slice(&digits[2..]);
                                push(offsets[ci2] + encode(&c2.radix, &d2) * hd + p, x.mul(&s));
                            }
                        } else if k < n {
                            let (xa, xb, xc) = (c.objects[k + 1], c.objects[k], c.objects[k - 1]);
                            let f = self.reduced(xb, xc).lift.column_sparse(digits[k]);
                            let g = self.reduced(xa, xb).lift.column_sparse(digits[k + 1]);
                            let product = a.compose(xa, xb, xc, &f, &g);
                            let red = self.reduced(xa, xc);
                            let projected = red.proj.apply_sparse(&product);
                            if projected.is_empty() {
                                continue;
                            }
                            let mut objects = c.objects.clone();
                            objects.remove(k);
                            let ci2 = self.index[&objects];
                            let c2 = &self.chains[ci2];
                            for (r, x) in projected {
                                let mut d2 = digits.clone();
                                d2.remove(k + 1);
                                d2[k] = r;
                                push(offsets[ci2] + encode(&c2.radix, &d2) * hd + p, x.mul(&s));
                            }
                        } else {
                            let (xb, xc) = (c.objects[n], c.objects[n - 1]);
                            let f = self.reduced(xb, xc).lift.column_sparse(digits[n]);
                            let product = a.compose(z, xb, xc, &f, &vec![(p, field.one())]);
                            let ci2 = self.index[&c.objects[..n]];
                            let c2 = &self.chains[ci2];
                            let hd2 = a.hom_dim(z, xc);
                            let v2 = encode(&c2.radix, &digits[..n]);
                            for (r, x) in product {
                                push(offsets[ci2] + v2 * hd2 + r, x.mul(&s));
                            }
                        }
                    }
                }
            }
        }
        let d = Matrix::from_triplets(field, total, total, triplets);
        Complex::new(field, degrees, d).expect("bar differential has degree one")
    }

    /// Action of the basis element `f` of `hom(x, y)`: `P(y) → P(x)`, `w ↦ (-1)^{|f||w|} w·f`.
    fn action(&self, values: &[Complex], x: usize, y: usize, f: usize) -> Matrix {
        let a = self.a;
        let field = a.field();
        let (ox, tx) = self.offsets(x);
        let (oy, ty) = self.offsets(y);
        let deg_f = a.basis_degree(x, y, f) as i64;
        let f_vec = vec![(f, field.one())];
        let mut triplets = Vec::new();
        for (ci, c) in self.chains.iter().enumerate() {
            let last = *c.objects.last().expect("non-empty");
            let (hy, hx) = (a.hom_dim(y, last), a.hom_dim(x, last));
            for v in 0..c.dim {
                for p in 0..hy {
                    let col = oy[ci] + v * hy + p;
                    let s = sign(field, deg_f * values[y].degree(col) as i64);
                    for (r, val) in a.compose(x, y, last, &vec![(p, field.one())], &f_vec) {
                        triplets.push((ox[ci] + v * hx + r, col, val.mul(&s)));
                    }
                }
            }
        }
        Matrix::from_triplets(field, tx, ty, triplets)
    }

    /// `π(m[]φ) = (-1)^{|m|} m·φ`, zero on longer chains.
    fn augmentation(&self, z: usize, total: usize) -> Matrix {
        let a = self.a;
        let field = a.field();
        let (offsets, _) = self.offsets(z);
        let mut triplets = Vec::new();
        for (ci, c) in self.chains.iter().enumerate() {
            if c.objects.len() != 1 {
                continue;
            }
            let x0 = c.objects[0];
            let hom = a.hom(z, x0);
            for p in 0..hom.dim() {
                let act = self.m.act(z, x0, &vec![(p, field.one())]);
                for i in 0..c.dim {
                    let deg_m = self.m.value(x0).degree(i) as i64;
                    let s = sign(field, deg_m + deg_m * hom.degree(p) as i64);
                    for (r, x) in act.column_sparse(i) {
                        triplets.push((r, offsets[ci] + i * hom.dim() + p, x.mul(&s)));
                    }
                }
            }
        }
        Matrix::from_triplets(field, self.m.value(z).dim(), total, triplets)
    }

    /// One generator `v ⊗ 1` per vector of a basis of each coefficient space
    /// adapted to its cycles, so every differential lands in earlier steps.
    fn generators(&self, values: &[Complex]) -> Vec<Generator> {
        let a = self.a;
        let field = a.field();
        let mut out = Vec::new();
        for (ci, c) in self.chains.iter().enumerate() {
            let last = *c.objects.last().expect("non-empty");
            let mut triplets = Vec::new();
            for v in 0..c.dim {
                let digits = decode(&c.radix, v);
                let prefix = self.prefix(c, &digits);
                for (r, x) in self.internal(c, &digits, &prefix) {
                    triplets.push((r, v, x));
                }
            }
            let dv = Matrix::from_triplets(field, c.dim, c.dim, triplets);
            let coefficient = Complex::new(field, c.degrees.clone(), dv)
                .expect("internal differential has degree one");
            let (offsets, total) = self.offsets(last);
            let unit = a.unit_dense(last);
            let hd = unit.len();
            for (degree, vector) in adapted_basis(&coefficient) {
                let mut element = vec![field.zero(); total];
                for (v, x) in vector.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (p, u) in unit.iter().enumerate() {
                        element[offsets[ci] + v * hd + p] = x.mul(u);
                    }
                }
                debug_assert_eq!(values[last].dim(), total);
                out.push(Generator {
                    object: last,
                    degree,
                    element,
                });
            }
        }
        out
    }
}

/// A basis of the complex: first the cycles, then a complement, degree by degree.
fn adapted_basis(c: &Complex) -> Vec<(i32, Vec<Scalar>)> {
    let field = c.field();
    let mut out = Vec::new();
    let Some((lo, hi)) = c.support() else {
        return out;
    };
    for n in lo..=hi {
        let idx = c.indices_in(n);
        if idx.is_empty() {
            continue;
        }
        let block = c.d().select(&(0..c.dim()).collect::<Vec<_>>(), &idx);
        let kernel = block.kernel();
        let mut echelon = crate::linalg::Echelon::new(field, idx.len());
        let mut local: Vec<Vec<Scalar>> = Vec::new();
        for col in kernel.columns() {
            echelon.insert(&crate::linalg::sparse::from_dense(&col));
            local.push(col);
        }
        for k in 0..idx.len() {
            let mut e = vec![field.zero(); idx.len()];
            e[k] = field.one();
            if echelon.insert(&crate::linalg::sparse::from_dense(&e)) {
                local.push(e);
            }
        }
        for v in local {
            let mut full = vec![field.zero(); c.dim()];
            for (k, x) in v.into_iter().enumerate() {
                full[idx[k]] = x;
            }
            out.push((n, full));
        }
    }
    out
}

fn decode(radix: &[usize], mut v: usize) -> Vec<usize> {
    let mut digits = vec![0; radix.len()];
    for k in (0..radix.len()).rev() {
        digits[k] = v % radix[k];
        v /= radix[k];
    }
    digits
}

fn encode(radix: &[usize], digits: &[usize]) -> usize {
    radix.iter().zip(digits).fold(0, |acc, (r, d)| acc * r + d)
}

/// The reduced bar resolution `π: P → M`, with chains cut at `max_length`
/// reduced factors. On directed categories the chains end by themselves.
pub fn bar_resolution(m: &Arc<DgModule>, max_length: usize) -> Resolution {
    let bar = Bar::new(m, max_length);
    let base = m.base().clone();
    let n = base.len();
    let values: Vec<Complex> = par::map_range(n, |z| bar.value(z));
    let actions: Vec<Vec<Matrix>> = par::map_range(n * n, |k| {
        let (x, y) = (k / n, k % n);
        (0..base.hom_dim(x, y))
            .map(|f| bar.action(&values, x, y, f))
            .collect()
    });
    let generators = bar.generators(&values);
    let components: Vec<Matrix> = (0..n)
        .map(|z| bar.augmentation(z, values[z].dim()))
        .collect();
    let p =
        Arc::new(DgModule::new(base, values, actions).expect("bar tables have the module's shape"));
    let augmentation =
        NatTransform::new(p.clone(), m.clone(), 0, components).expect("augmentation shapes");
    let certificate = certify(&p, generators).unwrap_or_default();
    let quasi_iso = augmentation.is_quasi_iso();
    let status = match (bar.truncated, quasi_iso) {
        (false, true) => ResolutionStatus::Complete,
        (true, true) => ResolutionStatus::TruncatedQuasiIso,
        _ => ResolutionStatus::Insufficient,
    };
    Resolution {
        module: p,
        augmentation,
        certificate,
        status,
        chains: bar.chains.into_iter().map(|c| c.objects).collect(),
    }
}

#[derive(Clone, Debug)]
pub struct KernelResolution {
    pub kernel: Kernel,
    pub augmentation: NatTransform,
    pub certificate: SemiFreeCertificate,
    pub status: ResolutionStatus,
}

/// Bar resolution of a kernel's carrier over `A^op ⊗ B`.
pub fn resolve_kernel(e: &Kernel, max_length: usize) -> KernelResolution {
    let r = bar_resolution(e.carrier(), max_length);
    let kernel = Kernel::new(e.left().clone(), e.right().clone(), (*r.module).clone())
        .expect("same base as the carrier");
    KernelResolution {
        kernel,
        augmentation: r.augmentation,
        certificate: r.certificate,
        status: r.status,
    }
}

/// Certificate for the slice `Φ_E(x)` of a semi-free kernel: each generator
/// `e` at `(x', y)` contributes `E(α ⊗ 1)(e)` for a basis `α` of `hom_A(x', x)`.
pub fn slice_certificate(
    e: &Kernel,
    certificate: &SemiFreeCertificate,
    x: usize,
) -> Option<SemiFreeCertificate> {
    let (a, b) = (e.left(), e.right());
    let field = a.field();
    let nb = b.len();
    let phi = curry_kernel(e);
    let slice = phi.object(x);
    let mut generators = Vec::new();
    for g in &certificate.generators {
        let (xg, yg) = (g.object / nb, g.object % nb);
        for alpha in 0..a.hom_dim(xg, x) {
            let act = e.act_left(x, xg, yg, &vec![(alpha, field.one())]);
            generators.push(Generator {
                object: yg,
                degree: g.degree + a.basis_degree(xg, x, alpha),
                element: act.apply(&g.element),
            });
        }
    }
    certify(slice, generators)
}
