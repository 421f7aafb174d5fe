use std::sync::Arc;

use super::{sparse_columns, DgCategory};
use crate::error::{Error, Result};
use crate::linalg::{sparse, Matrix, SparseVec};
use crate::par;
use crate::validation::{Identity, ValidationReport};

/// A dg functor in basis form: an object map and one matrix per hom pair,
/// `hom_maps[x * n + y]: hom(x,y) → hom(F x, F y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgFunctor {
    pub source: Arc<DgCategory>,
    pub target: Arc<DgCategory>,
    pub object_map: Vec<usize>,
    pub hom_maps: Vec<Matrix>,
}

impl DgFunctor {
    pub fn new(
        source: Arc<DgCategory>,
        target: Arc<DgCategory>,
        object_map: Vec<usize>,
        hom_maps: Vec<Matrix>,
    ) -> Result<Self> {
        let n = source.len();
        if object_map.len() != n || hom_maps.len() != n * n {
            return Err(Error::DimensionMismatch(
                "functor tables do not match the source".into(),
            ));
        }
        if let Some(&o) = object_map.iter().find(|&&o| o >= target.len()) {
            return Err(Error::DimensionMismatch(format!(
                "object map points at {o}, outside the target"
            )));
        }
        if source.field() != target.field() {
            return Err(Error::FieldMismatch {
                expected: source.field(),
                found: target.field(),
            });
        }
        for x in 0..n {
            for y in 0..n {
                let want = (
                    target.hom_dim(object_map[x], object_map[y]),
                    source.hom_dim(x, y),
                );
                if hom_maps[x * n + y].shape() != want {
                    return Err(Error::DimensionMismatch(format!(
                        "hom map ({},{}) has shape {:?}, expected {want:?}",
                        source.object_name(x),
                        source.object_name(y),
                        hom_maps[x * n + y].shape()
                    )));
                }
            }
        }
        Ok(DgFunctor {
            source,
            target,
            object_map,
            hom_maps,
        })
    }

    pub fn identity(a: &Arc<DgCategory>) -> Self {
        let n = a.len();
        let mut maps = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                maps.push(Matrix::identity(a.field(), a.hom_dim(x, y)));
            }
        }
        DgFunctor {
            source: a.clone(),
            target: a.clone(),
            object_map: (0..n).collect(),
            hom_maps: maps,
        }
    }

    pub fn hom_map(&self, x: usize, y: usize) -> &Matrix {
        &self.hom_maps[x * self.source.len() + y]
    }

    pub fn object(&self, x: usize) -> usize {
        self.object_map[x]
    }

    pub fn apply(&self, x: usize, y: usize, v: &SparseVec) -> SparseVec {
        self.hom_map(x, y).apply_sparse(v)
    }

    pub fn validate(&self) -> ValidationReport {
        let (a, b) = (&*self.source, &*self.target);
        let n = a.len();
        let f = a.field();
        let mut report = ValidationReport::default();
        let name = |x: usize| a.object_name(x).to_string();
        for x in 0..n {
            for y in 0..n {
                let m = self.hom_map(x, y);
                let (hs, ht) = (a.hom(x, y), b.hom(self.object(x), self.object(y)));
                if let Some((r, c, _)) =
                    m.entries().find(|(r, c, _)| ht.degree(*r) != hs.degree(*c))
                {
                    report.push(
                        Identity::FunctorDegree,
                        vec![name(x), name(y)],
                        format!(
                            "basis {} maps out of degree into {}",
                            a.labels(x, y)[c],
                            b.labels(self.object(x), self.object(y))[r]
                        ),
                    );
                }
                if ht.d().mul(m) != m.mul(hs.d()) {
                    report.push(
                        Identity::FunctorChainMap,
                        vec![name(x), name(y)],
                        "d∘F ≠ F∘d",
                    );
                }
            }
            if self.apply(x, x, a.unit(x)) != *b.unit(self.object(x)) {
                report.push(Identity::FunctorUnit, vec![name(x)], "F(unit) ≠ unit");
            }
        }
        let triples: Vec<ValidationReport> = par::map_range(n * n * n, |k| {
            let (x, y, z) = (k / (n * n), (k / n) % n, k % n);
            let mut r = ValidationReport::default();
            let (fx, fy, fz) = (self.object(x), self.object(y), self.object(z));
            'outer: for g in 0..a.hom_dim(y, z) {
                let fg = self.apply(y, z, &vec![(g, f.one())]);
                for h in 0..a.hom_dim(x, y) {
                    let lhs = self.apply(x, z, a.compose_basis(x, y, z, g, h));
                    let rhs = b.compose(fx, fy, fz, &fg, &self.apply(x, y, &vec![(h, f.one())]));
                    if lhs != rhs {
                        r.push(
                            Identity::FunctorComposition,
                            vec![name(x), name(y), name(z)],
                            format!(
                                "F({g} ∘ {h}) ≠ F({g}) ∘ F({h})",
                                g = a.labels(y, z)[g],
                                h = a.labels(x, y)[h]
                            ),
                        );
                        break 'outer;
                    }
                }
            }
            r
        });
        for r in triples {
            report.extend(r);
        }
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passed()
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &DgFunctor) -> Result<DgFunctor> {
        if first.target.as_ref() != self.source.as_ref() {
            return Err(Error::BaseMismatch(
                "composing functors with mismatched middle category".into(),
            ));
        }
        let n = first.source.len();
        let mut maps = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                maps.push(
                    self.hom_map(first.object(x), first.object(y))
                        .mul(first.hom_map(x, y)),
                );
            }
        }
        Ok(DgFunctor {
            source: first.source.clone(),
            target: self.target.clone(),
            object_map: first.object_map.iter().map(|&o| self.object(o)).collect(),
            hom_maps: maps,
        })
    }

    /// `F ⊗ G: A ⊗ C → B ⊗ D`.
    pub fn tensor(f: &DgFunctor, g: &DgFunctor) -> Result<DgFunctor> {
        let source = Arc::new(DgCategory::tensor(&f.source, &g.source)?);
        let target = Arc::new(DgCategory::tensor(&f.target, &g.target)?);
        let (na, nc, nd) = (f.source.len(), g.source.len(), g.target.len());
        let n = na * nc;
        let object_map = (0..n)
            .map(|p| f.object(p / nc) * nd + g.object(p % nc))
            .collect();
        let mut maps = Vec::with_capacity(n * n);
        for p in 0..n {
            for q in 0..n {
                maps.push(f.hom_map(p / nc, q / nc).kron(g.hom_map(p % nc, q % nc)));
            }
        }
        DgFunctor::new(source, target, object_map, maps)
    }

    /// `(F, G): A → B × C` into an already built product category.
    pub fn pairing(f: &DgFunctor, g: &DgFunctor, product: Arc<DgCategory>) -> Result<DgFunctor> {
        if f.source.as_ref() != g.source.as_ref() {
            return Err(Error::BaseMismatch(
                "pairing functors with different sources".into(),
            ));
        }
        let a = &f.source;
        let n = a.len();
        let nc = g.target.len();
        let object_map = (0..n).map(|x| f.object(x) * nc + g.object(x)).collect();
        let mut maps = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                maps.push(Matrix::vstack(&[f.hom_map(x, y), g.hom_map(x, y)]));
            }
        }
        DgFunctor::new(a.clone(), product, object_map, maps)
    }

    /// Projection `A × B → A` (`second = false`) or `→ B`.
    pub fn projection(
        product: &Arc<DgCategory>,
        a: &Arc<DgCategory>,
        b: &Arc<DgCategory>,
        second: bool,
    ) -> Result<DgFunctor> {
        let (na, nb) = (a.len(), b.len());
        let n = na * nb;
        let field = a.field();
        let target = if second { b.clone() } else { a.clone() };
        let object_map = (0..n)
            .map(|p| if second { p % nb } else { p / nb })
            .collect();
        let mut maps = Vec::with_capacity(n * n);
        for p in 0..n {
            for q in 0..n {
                let (da, db) = (a.hom_dim(p / nb, q / nb), b.hom_dim(p % nb, q % nb));
                let m = if second {
                    Matrix::hstack(&[&Matrix::zeros(field, db, da), &Matrix::identity(field, db)])
                } else {
                    Matrix::hstack(&[&Matrix::identity(field, da), &Matrix::zeros(field, da, db)])
                };
                maps.push(m);
            }
        }
        DgFunctor::new(product.clone(), target, object_map, maps)
    }

    /// Inclusion of a full subcategory given by object indices.
    pub fn full_inclusion(a: &Arc<DgCategory>, keep: &[usize]) -> DgFunctor {
        let sub = Arc::new(a.full_subcategory(keep));
        let m = keep.len();
        let mut maps = Vec::with_capacity(m * m);
        for &x in keep {
            for &y in keep {
                maps.push(Matrix::identity(a.field(), a.hom_dim(x, y)));
            }
        }
        DgFunctor {
            source: sub,
            target: a.clone(),
            object_map: keep.to_vec(),
            hom_maps: maps,
        }
    }

    /// The canonical reshuffle `(P⊗Q)⊗(R⊗S) → (P⊗R)⊗(Q⊗S)`,
    /// `(p⊗q)⊗(r⊗s) ↦ (-1)^{|q||r|} (p⊗r)⊗(q⊗s)`.
    pub fn swap_middle(
        p: &DgCategory,
        q: &DgCategory,
        r: &DgCategory,
        s: &DgCategory,
    ) -> Result<DgFunctor> {
        let pq = DgCategory::tensor(p, q)?;
        let rs = DgCategory::tensor(r, s)?;
        let pr = DgCategory::tensor(p, r)?;
        let qs = DgCategory::tensor(q, s)?;
        let source = Arc::new(DgCategory::tensor(&pq, &rs)?);
        let target = Arc::new(DgCategory::tensor(&pr, &qs)?);
        let field = p.field();
        let (nq, nr, ns) = (q.len(), r.len(), s.len());
        let (nrs, nqs) = (nr * ns, nq * ns);
        let split = |o: usize| {
            let (a, b) = (o / nrs, o % nrs);
            (a / nq, a % nq, b / ns, b % ns)
        };
        let n = source.len();
        let object_map = (0..n)
            .map(|o| {
                let (pi, qi, ri, si) = split(o);
                (pi * nr + ri) * nqs + (qi * ns + si)
            })
            .collect();
        let maps = par::map_range(n * n, |k| {
            let ((p1, q1, r1, s1), (p2, q2, r2, s2)) = (split(k / n), split(k % n));
            let (dp, dq, dr, ds) = (
                p.hom_dim(p1, p2),
                q.hom_dim(q1, q2),
                r.hom_dim(r1, r2),
                s.hom_dim(s1, s2),
            );
            let mut cols = Vec::with_capacity(dp * dq * dr * ds);
            for ip in 0..dp {
                for iq in 0..dq {
                    for ir in 0..dr {
                        for is in 0..ds {
                            let sign = field.sign(
                                q.basis_degree(q1, q2, iq) as i64
                                    * r.basis_degree(r1, r2, ir) as i64,
                            );
                            let idx = (ip * dr + ir) * (dq * ds) + (iq * ds + is);
                            cols.push(vec![(idx, sign)]);
                        }
                    }
                }
            }
            sparse_columns(field, dp * dq * dr * ds, cols)
        });
        DgFunctor::new(source, target, object_map, maps)
    }

    /// Functor picking out one object of a category together with its
    /// endomorphisms, i.e. the inclusion of the full subcategory on `x`.
    pub fn object_inclusion(a: &Arc<DgCategory>, x: usize) -> DgFunctor {
        DgFunctor::full_inclusion(a, &[x])
    }

    /// Image of a hom element under the functor as a dense vector.
    pub fn apply_dense(&self, x: usize, y: usize, v: &SparseVec) -> Vec<crate::linalg::Scalar> {
        let (fx, fy) = (self.object(x), self.object(y));
        sparse::to_dense(
            self.target.field(),
            &self.apply(x, y, v),
            self.target.hom_dim(fx, fy),
        )
    }

    /// Embeds `K ⊗ A` or `A ⊗ K`-style reinterpretations: a functor between
    /// categories with identical tables, via identity matrices.
    pub fn relabel(source: Arc<DgCategory>, target: Arc<DgCategory>) -> Result<DgFunctor> {
        let n = source.len();
        if target.len() != n {
            return Err(Error::BaseMismatch(
                "relabelling between categories of different size".into(),
            ));
        }
        let mut maps = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                maps.push(Matrix::identity(source.field(), source.hom_dim(x, y)));
            }
        }
        DgFunctor::new(source, target, (0..n).collect(), maps)
    }
}
