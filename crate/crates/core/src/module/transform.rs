//! Graded natural transformations between dg modules.

use std::sync::Arc;

use super::DgModule;
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::validation::{Identity, ValidationReport};

/// A degree-`n` transformation `θ: M → N` with one component
/// `θ(x): M(x) → N(x)` per object. Naturality carries the Koszul sign:
/// `θ(x) ∘ M(f) = (-1)^{n|f|} N(f) ∘ θ(y)` for `f: x → y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTransform {
    source: Arc<DgModule>,
    target: Arc<DgModule>,
    degree: i32,
    components: Vec<Matrix>,
}

impl NatTransform {
    /// Checks shapes and the common base; naturality is left to [`NatTransform::validate`].
    pub fn new(
        source: Arc<DgModule>,
        target: Arc<DgModule>,
        degree: i32,
        components: Vec<Matrix>,
    ) -> Result<Self> {
        if source.base() != target.base() && **source.base() != **target.base() {
            return Err(Error::BaseMismatch(
                "source and target live over different categories".into(),
            ));
        }
        if components.len() != source.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} components for {} objects",
                components.len(),
                source.len()
            )));
        }
        for (x, c) in components.iter().enumerate() {
            if c.shape() != (target.value(x).dim(), source.value(x).dim()) {
                return Err(Error::DimensionMismatch(format!(
                    "component at {} has shape {:?}",
                    source.base().object_name(x),
                    c.shape()
                )));
            }
        }
        Ok(NatTransform {
            source,
            target,
            degree,
            components,
        })
    }

    pub fn zero(source: Arc<DgModule>, target: Arc<DgModule>, degree: i32) -> Self {
        let field = source.field();
        let components = (0..source.len())
            .map(|x| Matrix::zeros(field, target.value(x).dim(), source.value(x).dim()))
            .collect();
        NatTransform {
            source,
            target,
            degree,
            components,
        }
    }

    pub fn identity(m: &Arc<DgModule>) -> Self {
        let field = m.field();
        let components = m
            .values()
            .iter()
            .map(|v| Matrix::identity(field, v.dim()))
            .collect();
        NatTransform {
            source: m.clone(),
            target: m.clone(),
            degree: 0,
            components,
        }
    }

    pub fn source(&self) -> &Arc<DgModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DgModule> {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn component(&self, x: usize) -> &Matrix {
        &self.components[x]
    }

    pub fn components(&self) -> &[Matrix] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Matrix::is_zero)
    }

    /// Checks component degrees and graded naturality on every basis morphism.
    pub fn validate(&self) -> ValidationReport {
        let a = self.source.base();
        let field = self.source.field();
        let n = a.len();
        let mut report = ValidationReport::default();
        for x in 0..n {
            let (vm, vn) = (self.source.value(x), self.target.value(x));
            if let Some((r, c, _)) = self.components[x]
                .entries()
                .find(|(r, c, _)| vn.degree(*r) != vm.degree(*c) + self.degree)
            {
                report.push(
                    Identity::NaturalityDegree,
                    vec![a.object_name(x).to_string()],
                    format!("component entry ({r},{c}) is not of degree {}", self.degree),
                );
            }
        }
        for x in 0..n {
            for y in 0..n {
                for f in 0..a.hom_dim(x, y) {
                    let sign = field.sign(self.degree as i64 * a.basis_degree(x, y, f) as i64);
                    let lhs = self.components[x].mul(self.source.action(x, y, f));
                    let rhs = self
                        .target
                        .action(x, y, f)
                        .mul(&self.components[y])
                        .scale(&sign);
                    if lhs != rhs {
                        report.push(
                            Identity::Naturality,
                            vec![a.object_name(x).to_string(), a.object_name(y).to_string()],
                            format!("θ(x) ∘ M({f}) ≠ ±N({f}) ∘ θ(y)", f = a.labels(x, y)[f]),
                        );
                    }
                }
            }
        }
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passed()
    }

    /// `(dθ)(x) = d ∘ θ(x) - (-1)^n θ(x) ∘ d`.
    pub fn differential(&self) -> NatTransform {
        let field = self.source.field();
        let s = field.sign(self.degree as i64);
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(x, c)| {
                self.target
                    .value(x)
                    .d()
                    .mul(c)
                    .sub(&c.mul(self.source.value(x).d()).scale(&s))
            })
            .collect();
        NatTransform {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree + 1,
            components,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.differential().is_zero()
    }

    /// `self ∘ first`, componentwise.
    pub fn compose(&self, first: &NatTransform) -> Result<NatTransform> {
        if *first.target != *self.source {
            return Err(Error::BaseMismatch(
                "composing transformations with mismatched modules".into(),
            ));
        }
        Ok(NatTransform {
            source: first.source.clone(),
            target: self.target.clone(),
            degree: self.degree + first.degree,
            components: self
                .components
                .iter()
                .zip(&first.components)
                .map(|(a, b)| a.mul(b))
                .collect(),
        })
    }

    pub fn add(&self, other: &NatTransform) -> Result<NatTransform> {
        if self.degree != other.degree
            || *self.source != *other.source
            || *self.target != *other.target
        {
            return Err(Error::InvalidInput(
                "adding transformations of different type".into(),
            ));
        }
        Ok(NatTransform {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect(),
            ..self.clone()
        })
    }

    pub fn scale(&self, c: &crate::linalg::Scalar) -> NatTransform {
        NatTransform {
            components: self.components.iter().map(|m| m.scale(c)).collect(),
            ..self.clone()
        }
    }

    /// A closed degree-0 transformation whose components are all invertible.
    pub fn is_isomorphism(&self) -> bool {
        self.degree == 0
            && self.is_closed()
            && self
                .components
                .iter()
                .all(|c| c.rows() == c.cols() && c.rank() == c.rows())
    }

    /// Objectwise quasi-isomorphism (for closed degree-0 transformations).
    pub fn is_quasi_iso(&self) -> bool {
        self.degree == 0
            && self.is_closed()
            && (0..self.source.len()).all(|x| {
                crate::complex::ChainMap::from_matrix(
                    self.source.value(x),
                    self.target.value(x),
                    self.components[x].clone(),
                )
                .map(|m| m.is_quasi_iso())
                .unwrap_or(false)
            })
    }

    /// The cone `N ⊕ M[1]` of a closed degree-0 transformation, with
    /// differential `[[d_N, θ], [0, -d_M]]` and action `diag(N(f), (-1)^{|f|} M(f))`.
    pub fn cone(&self) -> Result<DgModule> {
        if self.degree != 0 || !self.is_closed() {
            return Err(Error::NotClosed(
                "the cone needs a closed degree-0 transformation".into(),
            ));
        }
        let a = self.source.base();
        let field = a.field();
        let values = (0..a.len())
            .map(|x| {
                crate::complex::ChainMap::from_matrix(
                    self.source.value(x),
                    self.target.value(x),
                    self.components[x].clone(),
                )
                .map(|m| m.cone())
            })
            .collect::<Result<Vec<Complex>>>()?;
        DgModule::from_fn(a.clone(), values, |x, y, f| {
            let s = field.sign(a.basis_degree(x, y, f) as i64);
            Matrix::block_diag(
                field,
                &[
                    self.target.action(x, y, f),
                    &self.source.action(x, y, f).scale(&s),
                ],
            )
        })
    }
}
