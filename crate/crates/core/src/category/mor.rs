//! The morphism category `Mor(A)`, the path object `P(A)`, fibre products
//! and standard homotopies.

use std::sync::Arc;

use super::linear::ENUMERATION_LIMIT;
use super::{render_combination, sparse_columns, DgCategory, DgFunctor, LinearCategory};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::linalg::{sparse, Matrix, SparseVec};

/// An object `(X, Y, f)` of `Mor(A)` with `f ∈ Z⁰ hom(X, Y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MorObject {
    pub source: usize,
    pub target: usize,
    pub morphism: SparseVec,
}

impl MorObject {
    pub fn identity(a: &DgCategory, x: usize) -> Self {
        MorObject {
            source: x,
            target: x,
            morphism: a.unit(x).clone(),
        }
    }

    pub fn name(&self, a: &DgCategory) -> String {
        format!(
            "({},{},{})",
            a.object_name(self.source),
            a.object_name(self.target),
            render_combination(a.labels(self.source, self.target), &self.morphism)
        )
    }
}

/// Default object set of `Mor(A)`: every closed degree-0 morphism over a
/// finite field; over Q the finite sample `0`, a basis of `Z⁰`, and units.
pub fn default_mor_objects(a: &DgCategory) -> Result<Vec<MorObject>> {
    let z0 = LinearCategory::z0(a);
    let field = a.field();
    let mut out = Vec::new();
    for x in 0..a.len() {
        for y in 0..a.len() {
            let d = z0.dim(x, y);
            let mut push = |v: SparseVec| {
                let o = MorObject {
                    source: x,
                    target: y,
                    morphism: v,
                };
                if !out.contains(&o) {
                    out.push(o);
                }
            };
            if field.is_finite() {
                match field.space_size(d) {
                    Some(total) if total <= ENUMERATION_LIMIT => {}
                    _ => {
                        return Err(Error::LimitExceeded(format!(
                            "Z⁰ hom({}, {}) too large to enumerate",
                            a.object_name(x),
                            a.object_name(y)
                        )))
                    }
                }
                for coeffs in field.enumerate(d) {
                    push(z0.representative(x, y, &sparse::from_dense(&coeffs)));
                }
            } else {
                push(Vec::new());
                for i in 0..d {
                    push(z0.representative(x, y, &vec![(i, field.one())]));
                }
                if x == y {
                    push(a.unit(x).clone());
                }
            }
        }
    }
    Ok(out)
}

/// `Mor(A)` on its default object set.
pub fn mor_category(a: &DgCategory) -> Result<(DgCategory, Vec<MorObject>)> {
    let objects = default_mor_objects(a)?;
    Ok((mor_category_on(a, &objects)?, objects))
}

/// `Mor(A)` on an explicit list of triples.
///
/// `hom((X,Y,f),(X',Y',f'))` in degree `n` is
/// `A(X,X')ⁿ ⊕ A(Y,Y')ⁿ ⊕ A(X,Y')ⁿ⁻¹` with basis blocks `a | b | h`,
/// `d(a,b,h) = (da, db, dh + (-1)ⁿ(f'∘a - b∘f))` and
/// `(a',b',h')∘(a,b,h) = (a'a, b'b, b'h + (-1)ⁿ h'a)` where `n = |(a,b,h)|`.
pub fn mor_category_on(a: &DgCategory, objects: &[MorObject]) -> Result<DgCategory> {
    let field = a.field();
    let z0 = LinearCategory::z0(a);
    for o in objects {
        if o.source >= a.len()
            || o.target >= a.len()
            || z0.coordinates(o.source, o.target, &o.morphism).is_none()
        {
            return Err(Error::InvalidInput(format!(
                "{} is not a closed degree-0 morphism",
                o.name(a)
            )));
        }
    }
    let m = objects.len();
    let mut homs = Vec::with_capacity(m * m);
    let mut labels = Vec::with_capacity(m * m);
    for p in objects {
        for q in objects {
            let (x, y, f) = (p.source, p.target, &p.morphism);
            let (x2, y2, f2) = (q.source, q.target, &q.morphism);
            let (ha, hb, hh) = (a.hom(x, x2), a.hom(y, y2), a.hom(x, y2));
            let (na, nb, nh) = (ha.dim(), hb.dim(), hh.dim());
            let dim = na + nb + nh;
            let mut degrees: Vec<i32> = ha.degrees().to_vec();
            degrees.extend_from_slice(hb.degrees());
            degrees.extend(hh.degrees().iter().map(|k| k + 1));
            let mut triplets = Vec::new();
            for (r, c, v) in ha.d().entries() {
                triplets.push((r, c, v.clone()));
            }
            for (r, c, v) in hb.d().entries() {
                triplets.push((na + r, na + c, v.clone()));
            }
            for (r, c, v) in hh.d().entries() {
                triplets.push((na + nb + r, na + nb + c, v.clone()));
            }
            for i in 0..na {
                let s = field.sign(ha.degree(i) as i64);
                for (r, v) in a.compose(x, x2, y2, f2, &vec![(i, field.one())]) {
                    triplets.push((na + nb + r, i, v.mul(&s)));
                }
            }
            for j in 0..nb {
                let s = field.sign(hb.degree(j) as i64 + 1);
                for (r, v) in a.compose(x, y, y2, &vec![(j, field.one())], f) {
                    triplets.push((na + nb + r, na + j, v.mul(&s)));
                }
            }
            let d = Matrix::from_triplets(field, dim, dim, triplets);
            homs.push(Complex::new(field, degrees, d)?);
            let mut l: Vec<String> = a.labels(x, x2).iter().map(|s| format!("a:{s}")).collect();
            l.extend(a.labels(y, y2).iter().map(|s| format!("b:{s}")));
            l.extend(a.labels(x, y2).iter().map(|s| format!("h:{s}")));
            labels.push(l);
        }
    }
    let mut compose = Vec::with_capacity(m * m * m);
    for p in objects {
        for q in objects {
            for r in objects {
                let (x, y) = (p.source, p.target);
                let (x2, y2) = (q.source, q.target);
                let (x3, y3) = (r.source, r.target);
                let (na1, nb1, nh1) = (a.hom_dim(x, x2), a.hom_dim(y, y2), a.hom_dim(x, y2));
                let (na2, nb2, nh2) = (a.hom_dim(x2, x3), a.hom_dim(y2, y3), a.hom_dim(x2, y3));
                let (na3, nb3) = (a.hom_dim(x, x3), a.hom_dim(y, y3));
                let d1 = na1 + nb1 + nh1;
                let d2 = na2 + nb2 + nh2;
                let mut t = vec![Vec::new(); d1 * d2];
                for g in 0..d2 {
                    for f in 0..d1 {
                        let v = if g < na2 && f < na1 {
                            a.compose_basis(x, x2, x3, g, f).clone()
                        } else if (na2..na2 + nb2).contains(&g) && (na1..na1 + nb1).contains(&f) {
                            super::shift_sparse(a.compose_basis(y, y2, y3, g - na2, f - na1), na3)
                        } else if (na2..na2 + nb2).contains(&g) && f >= na1 + nb1 {
                            super::shift_sparse(
                                a.compose_basis(x, y2, y3, g - na2, f - na1 - nb1),
                                na3 + nb3,
                            )
                        } else if g >= na2 + nb2 && f < na1 {
                            let s = field.sign(a.basis_degree(x, x2, f) as i64);
                            super::shift_sparse(
                                &sparse::scale(a.compose_basis(x, x2, y3, g - na2 - nb2, f), &s),
                                na3 + nb3,
                            )
                        } else {
                            Vec::new()
                        };
                        t[g * d1 + f] = v;
                    }
                }
                compose.push(t);
            }
        }
    }
    let units = objects
        .iter()
        .map(|o| {
            let mut u = a.unit(o.source).clone();
            u.extend(super::shift_sparse(
                a.unit(o.target),
                a.hom_dim(o.source, o.source),
            ));
            u
        })
        .collect();
    DgCategory::from_parts(
        field,
        objects.iter().map(|o| o.name(a)).collect(),
        homs,
        labels,
        compose,
        units,
    )
}

/// `P(A) ⊂ Mor(A)` with `ι: A → P(A)`, `s, t: P(A) → A` and `(s,t): P(A) → A × A`.
#[derive(Clone, Debug)]
pub struct PathObject {
    pub base: Arc<DgCategory>,
    pub category: Arc<DgCategory>,
    pub objects: Vec<MorObject>,
    pub iota: DgFunctor,
    pub source: DgFunctor,
    pub target: DgFunctor,
    pub product: Arc<DgCategory>,
    pub source_target: DgFunctor,
}

pub fn path_object(a: &Arc<DgCategory>) -> Result<PathObject> {
    path_object_with(a, &[])
}

/// Path object whose object set also contains the given triples (when they
/// are homotopy equivalences). Useful over Q, where the default object set
/// is only a sample.
pub fn path_object_with(a: &Arc<DgCategory>, extra: &[MorObject]) -> Result<PathObject> {
    let h0 = LinearCategory::h0(a);
    let mut candidates = default_mor_objects(a)?;
    for o in extra {
        if !candidates.contains(o) {
            candidates.push(o.clone());
        }
    }
    let objects: Vec<MorObject> = candidates
        .into_iter()
        .filter(|o| match h0.coordinates(o.source, o.target, &o.morphism) {
            Some(c) => h0.is_invertible(o.source, o.target, &c),
            None => false,
        })
        .collect();
    let p = Arc::new(mor_category_on(a, &objects)?);
    let field = a.field();
    let n = a.len();
    let index_of = |o: &MorObject| objects.iter().position(|q| q == o);
    let iota_objects: Vec<usize> = (0..n)
        .map(|x| {
            index_of(&MorObject::identity(a, x))
                .expect("identity triples are homotopy equivalences")
        })
        .collect();
    let mut iota_maps = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let d = a.hom_dim(x, y);
            let id = Matrix::identity(field, d);
            iota_maps.push(Matrix::vstack(&[&id, &id, &Matrix::zeros(field, d, d)]));
        }
    }
    let iota = DgFunctor::new(a.clone(), p.clone(), iota_objects, iota_maps)?;
    let m = objects.len();
    let mut s_maps = Vec::with_capacity(m * m);
    let mut t_maps = Vec::with_capacity(m * m);
    for o in &objects {
        for q in &objects {
            let (na, nb, nh) = (
                a.hom_dim(o.source, q.source),
                a.hom_dim(o.target, q.target),
                a.hom_dim(o.source, q.target),
            );
            s_maps.push(Matrix::hstack(&[
                &Matrix::identity(field, na),
                &Matrix::zeros(field, na, nb + nh),
            ]));
            t_maps.push(Matrix::hstack(&[
                &Matrix::zeros(field, nb, na),
                &Matrix::identity(field, nb),
                &Matrix::zeros(field, nb, nh),
            ]));
        }
    }
    let source = DgFunctor::new(
        p.clone(),
        a.clone(),
        objects.iter().map(|o| o.source).collect(),
        s_maps,
    )?;
    let target = DgFunctor::new(
        p.clone(),
        a.clone(),
        objects.iter().map(|o| o.target).collect(),
        t_maps,
    )?;
    let product = Arc::new(DgCategory::product(a, a)?);
    let source_target = DgFunctor::pairing(&source, &target, product.clone())?;
    Ok(PathObject {
        base: a.clone(),
        category: p,
        objects,
        iota,
        source,
        target,
        product,
        source_target,
    })
}

/// `A ×_C B` along `F: A → C` and `G: B → C`, with its two projections.
#[derive(Clone, Debug)]
pub struct FiberProduct {
    pub category: Arc<DgCategory>,
    /// Pairs `(a, b)` with `F(a) = G(b)`, in object order.
    pub pairs: Vec<(usize, usize)>,
    pub first: DgFunctor,
    pub second: DgFunctor,
}

pub fn fiber_product(f: &DgFunctor, g: &DgFunctor) -> Result<FiberProduct> {
    if f.target.as_ref() != g.target.as_ref() {
        return Err(Error::BaseMismatch(
            "fibre product of functors with different targets".into(),
        ));
    }
    let (a, b) = (&f.source, &g.source);
    let product = DgCategory::product(a, b)?;
    let nb = b.len();
    let pairs: Vec<(usize, usize)> = (0..a.len())
        .flat_map(|x| (0..nb).map(move |y| (x, y)))
        .filter(|&(x, y)| f.object(x) == g.object(y))
        .collect();
    let m = pairs.len();
    let mut inclusions = Vec::with_capacity(m * m);
    for &(x, y) in &pairs {
        for &(x2, y2) in &pairs {
            let difference = Matrix::hstack(&[f.hom_map(x, x2), &g.hom_map(y, y2).neg()]);
            let degrees: Vec<i32> = product.hom(x * nb + y, x2 * nb + y2).degrees().to_vec();
            inclusions.push(homogeneous_kernel(&difference, &degrees));
        }
    }
    let names = pairs
        .iter()
        .map(|&(x, y)| format!("({},{})", a.object_name(x), b.object_name(y)))
        .collect();
    let objects: Vec<usize> = pairs.iter().map(|&(x, y)| x * nb + y).collect();
    let category = Arc::new(product.sub_homs(&objects, names, inclusions.clone())?);
    let mut first_maps = Vec::with_capacity(m * m);
    let mut second_maps = Vec::with_capacity(m * m);
    for (i, &(x, y)) in pairs.iter().enumerate() {
        for (j, &(x2, y2)) in pairs.iter().enumerate() {
            let inc = &inclusions[i * m + j];
            let (da, db) = (a.hom_dim(x, x2), b.hom_dim(y, y2));
            let cols: Vec<usize> = (0..inc.cols()).collect();
            first_maps.push(inc.select(&(0..da).collect::<Vec<_>>(), &cols));
            second_maps.push(inc.select(&(da..da + db).collect::<Vec<_>>(), &cols));
        }
    }
    let first = DgFunctor::new(
        category.clone(),
        a.clone(),
        pairs.iter().map(|p| p.0).collect(),
        first_maps,
    )?;
    let second = DgFunctor::new(
        category.clone(),
        b.clone(),
        pairs.iter().map(|p| p.1).collect(),
        second_maps,
    )?;
    Ok(FiberProduct {
        category,
        pairs,
        first,
        second,
    })
}

/// Kernel basis of a degree-preserving map, computed degree by degree so
/// every basis vector is homogeneous. Columns ordered by degree.
pub(crate) fn homogeneous_kernel(m: &Matrix, degrees: &[i32]) -> Matrix {
    let field = m.field();
    let mut ds: Vec<i32> = degrees.to_vec();
    ds.sort_unstable();
    ds.dedup();
    let mut cols: Vec<SparseVec> = Vec::new();
    let all_rows: Vec<usize> = (0..m.rows()).collect();
    for d in ds {
        let idx: Vec<usize> = (0..degrees.len()).filter(|&i| degrees[i] == d).collect();
        let k = m.select(&all_rows, &idx).kernel();
        for c in 0..k.cols() {
            cols.push(
                k.column_sparse(c)
                    .into_iter()
                    .map(|(i, v)| (idx[i], v))
                    .collect(),
            );
        }
    }
    sparse_columns(field, degrees.len(), cols)
}

/// The standard homotopy `H: A → P(B)`, `X ↦ (F X, G X, α(X))`,
/// `a ↦ (F a, G a, 0)`, from a closed degree-0 natural transformation `α`
/// whose components are invertible in `H⁰(B)`.
pub fn construct_standard_homotopy(
    f: &DgFunctor,
    g: &DgFunctor,
    alpha: &[SparseVec],
) -> Result<(PathObject, DgFunctor)> {
    if f.source.as_ref() != g.source.as_ref() || f.target.as_ref() != g.target.as_ref() {
        return Err(Error::BaseMismatch(
            "standard homotopy between functors with different ends".into(),
        ));
    }
    let (a, b) = (&f.source, &f.target);
    let field = a.field();
    if alpha.len() != a.len() {
        return Err(Error::DimensionMismatch(
            "one component per object expected".into(),
        ));
    }
    let h0 = LinearCategory::h0(b);
    for (x, comp) in alpha.iter().enumerate() {
        let (fx, gx) = (f.object(x), g.object(x));
        let hom = b.hom(fx, gx);
        if comp
            .iter()
            .any(|(i, _)| *i >= hom.dim() || hom.degree(*i) != 0)
        {
            return Err(Error::InvalidInput(format!(
                "component at '{}' is not of degree 0",
                a.object_name(x)
            )));
        }
        if !hom.d().apply_sparse(comp).is_empty() {
            return Err(Error::NotClosed(format!(
                "component at '{}'",
                a.object_name(x)
            )));
        }
    }
    for x in 0..a.len() {
        for y in 0..a.len() {
            for i in 0..a.hom_dim(x, y) {
                let e = vec![(i, field.one())];
                let lhs = b.compose(
                    f.object(x),
                    g.object(x),
                    g.object(y),
                    &g.apply(x, y, &e),
                    &alpha[x],
                );
                let rhs = b.compose(
                    f.object(x),
                    f.object(y),
                    g.object(y),
                    &alpha[y],
                    &f.apply(x, y, &e),
                );
                if lhs != rhs {
                    return Err(Error::InvalidInput(format!(
                        "transformation is not natural at {} ∈ hom({}, {})",
                        a.labels(x, y)[i],
                        a.object_name(x),
                        a.object_name(y)
                    )));
                }
            }
        }
    }
    for (x, comp) in alpha.iter().enumerate() {
        let (fx, gx) = (f.object(x), g.object(x));
        let invertible = h0
            .coordinates(fx, gx, comp)
            .is_some_and(|c| h0.is_invertible(fx, gx, &c));
        if !invertible {
            return Err(Error::NotInvertible(a.object_name(x).to_string()));
        }
    }
    let triples: Vec<MorObject> = (0..a.len())
        .map(|x| MorObject {
            source: f.object(x),
            target: g.object(x),
            morphism: alpha[x].clone(),
        })
        .collect();
    let path = path_object_with(b, &triples)?;
    let object_map = triples
        .iter()
        .map(|t| {
            path.objects
                .iter()
                .position(|o| o == t)
                .expect("triple was added")
        })
        .collect();
    let n = a.len();
    let mut maps = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let nh = b.hom_dim(f.object(x), g.object(y));
            let zero = Matrix::zeros(field, nh, a.hom_dim(x, y));
            maps.push(Matrix::vstack(&[f.hom_map(x, y), g.hom_map(x, y), &zero]));
        }
    }
    let h = DgFunctor::new(a.clone(), path.category.clone(), object_map, maps)?;
    Ok((path, h))
}
