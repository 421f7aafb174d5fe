use std::collections::HashMap;

use super::DgCategory;
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::linalg::{sparse, Field, Matrix, Scalar, SparseVec};

/// Builds a dg category from named basis morphisms.
///
/// Every `hom(x, x)` starts with the unit `id_<x>` as basis vector 0. Products
/// not declared with [`CategoryBuilder::product`] are zero, except those
/// involving a unit.
#[derive(Clone, Debug)]
pub struct CategoryBuilder {
    field: Field,
    objects: Vec<String>,
    /// Basis per hom pair: (label, degree).
    basis: Vec<Vec<(String, i32)>>,
    where_is: HashMap<String, (usize, usize, usize)>,
    differentials: Vec<(String, Vec<(String, Scalar)>)>,
    products: HashMap<(String, String), Vec<(String, Scalar)>>,
}

impl CategoryBuilder {
    pub fn new(field: Field) -> Self {
        CategoryBuilder {
            field,
            objects: Vec::new(),
            basis: Vec::new(),
            where_is: HashMap::new(),
            differentials: Vec::new(),
            products: HashMap::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Declares objects; must be called before any morphism.
    pub fn objects(mut self, names: &[&str]) -> Self {
        assert!(self.where_is.is_empty(), "objects must be declared first");
        self.objects = names.iter().map(|s| s.to_string()).collect();
        let n = self.objects.len();
        self.basis = vec![Vec::new(); n * n];
        for x in 0..n {
            let label = format!("id_{}", self.objects[x]);
            self.where_is.insert(label.clone(), (x, x, 0));
            self.basis[x * n + x].push((label, 0));
        }
        self
    }

    fn index(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    /// Adds a basis morphism `label: source → target` of the given degree.
    pub fn morphism(
        mut self,
        label: &str,
        source: &str,
        target: &str,
        degree: i32,
    ) -> Result<Self> {
        let (x, y) = (self.index(source)?, self.index(target)?);
        if self.where_is.contains_key(label) {
            return Err(Error::InvalidInput(format!(
                "duplicate morphism label '{label}'"
            )));
        }
        let n = self.objects.len();
        let slot = &mut self.basis[x * n + y];
        self.where_is.insert(label.to_string(), (x, y, slot.len()));
        slot.push((label.to_string(), degree));
        Ok(self)
    }

    /// Sets `d(label) = Σ c·term`.
    pub fn differential(mut self, label: &str, terms: &[(&str, i64)]) -> Self {
        let terms = terms
            .iter()
            .map(|(t, c)| (t.to_string(), self.field.from_i64(*c)))
            .collect();
        self.differentials.push((label.to_string(), terms));
        self
    }

    /// Sets `g ∘ f = Σ c·term`.
    pub fn product(mut self, g: &str, f: &str, terms: &[(&str, i64)]) -> Self {
        let terms = terms
            .iter()
            .map(|(t, c)| (t.to_string(), self.field.from_i64(*c)))
            .collect();
        self.products.insert((g.to_string(), f.to_string()), terms);
        self
    }

    fn locate(&self, label: &str) -> Result<(usize, usize, usize)> {
        self.where_is
            .get(label)
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("unknown morphism '{label}'")))
    }

    fn combination(&self, terms: &[(String, Scalar)], x: usize, y: usize) -> Result<SparseVec> {
        let mut dense = vec![self.field.zero(); self.basis[x * self.objects.len() + y].len()];
        for (t, c) in terms {
            let (tx, ty, i) = self.locate(t)?;
            if (tx, ty) != (x, y) {
                return Err(Error::InvalidInput(format!(
                    "'{t}' is not in hom({}, {})",
                    self.objects[x], self.objects[y]
                )));
            }
            dense[i] = dense[i].add(c);
        }
        Ok(sparse::from_dense(&dense))
    }

    /// Assembles the tables. Shape and degree errors are reported here; the
    /// dg identities are left to [`DgCategory::validate`].
    pub fn build(self) -> Result<DgCategory> {
        let n = self.objects.len();
        let field = self.field;
        let mut d_triplets: Vec<Vec<(usize, usize, Scalar)>> = vec![Vec::new(); n * n];
        for (label, terms) in &self.differentials {
            let (x, y, i) = self.locate(label)?;
            for (j, c) in self.combination(terms, x, y)? {
                d_triplets[x * n + y].push((j, i, c));
            }
        }
        let mut homs = Vec::with_capacity(n * n);
        for (k, b) in self.basis.iter().enumerate() {
            let d =
                Matrix::from_triplets(field, b.len(), b.len(), std::mem::take(&mut d_triplets[k]));
            homs.push(Complex::new(
                field,
                b.iter().map(|(_, deg)| *deg).collect(),
                d,
            )?);
        }
        let mut compose = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (bf, bg) = (&self.basis[x * n + y], &self.basis[y * n + z]);
                    let mut t = Vec::with_capacity(bf.len() * bg.len());
                    for (g, (gl, _)) in bg.iter().enumerate() {
                        for (f, (fl, _)) in bf.iter().enumerate() {
                            let v = if y == z && g == 0 {
                                vec![(f, field.one())]
                            } else if x == y && f == 0 {
                                vec![(g, field.one())]
                            } else {
                                match self.products.get(&(gl.clone(), fl.clone())) {
                                    Some(terms) => self.combination(terms, x, z)?,
                                    None => Vec::new(),
                                }
                            };
                            t.push(v);
                        }
                    }
                    compose.push(t);
                }
            }
        }
        for (g, f) in self.products.keys() {
            let (gx, _, _) = self.locate(g)?;
            let (_, fy, _) = self.locate(f)?;
            if gx != fy {
                return Err(Error::InvalidInput(format!(
                    "'{g}' and '{f}' are not composable"
                )));
            }
        }
        let labels = self
            .basis
            .iter()
            .map(|b| b.iter().map(|(l, _)| l.clone()).collect())
            .collect();
        let units = (0..n).map(|_| vec![(0, field.one())]).collect();
        DgCategory::from_parts(field, self.objects, homs, labels, compose, units)
    }
}
