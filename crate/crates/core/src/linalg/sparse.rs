//! Sorted sparse vectors: `(index, value)` pairs, strictly increasing
//! indices, no stored zeros.

use super::scalar::{Field, Scalar};

pub type SparseVec = Vec<(usize, Scalar)>;

pub fn from_dense(v: &[Scalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn to_dense(field: Field, v: &SparseVec, len: usize) -> Vec<Scalar> {
    let mut out = vec![field.zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

pub fn get(v: &SparseVec, i: usize) -> Option<&Scalar> {
    v.binary_search_by_key(&i, |(j, _)| *j)
        .ok()
        .map(|k| &v[k].1)
}

pub fn scale(v: &SparseVec, a: &Scalar) -> SparseVec {
    if a.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x.mul(a))).collect()
}

/// `y + a * x`.
pub fn axpy(y: &SparseVec, a: &Scalar, x: &SparseVec) -> SparseVec {
    if a.is_zero() || x.is_empty() {
        return y.clone();
    }
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        let take_y = j >= x.len() || (i < y.len() && y[i].0 < x[j].0);
        let take_x = i >= y.len() || (j < x.len() && x[j].0 < y[i].0);
        if take_y {
            out.push(y[i].clone());
            i += 1;
        } else if take_x {
            out.push((x[j].0, x[j].1.mul(a)));
            j += 1;
        } else {
            let s = y[i].1.add(&x[j].1.mul(a));
            if !s.is_zero() {
                out.push((y[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn add(a: &SparseVec, b: &SparseVec, field: Field) -> SparseVec {
    axpy(a, &field.one(), b)
}

pub fn dot_dense(v: &SparseVec, w: &[Scalar], field: Field) -> Scalar {
    let mut acc = field.zero();
    for (i, x) in v {
        if !w[*i].is_zero() {
            acc = acc.add(&x.mul(&w[*i]));
        }
    }
    acc
}

/// Accumulates many scaled sparse vectors into a dense buffer, then compacts.
#[derive(Clone, Debug)]
pub struct Accumulator {
    field: Field,
    buf: Vec<Scalar>,
    touched: Vec<usize>,
    mark: Vec<bool>,
}

impl Accumulator {
    pub fn new(field: Field, len: usize) -> Self {
        Accumulator {
            field,
            buf: vec![field.zero(); len],
            touched: Vec::new(),
            mark: vec![false; len],
        }
    }

    pub fn add(&mut self, i: usize, x: &Scalar) {
        if x.is_zero() {
            return;
        }
        if !self.mark[i] {
            self.mark[i] = true;
            self.touched.push(i);
        }
        self.buf[i] = self.buf[i].add(x);
    }

    pub fn add_scaled(&mut self, a: &Scalar, v: &SparseVec) {
        if a.is_zero() {
            return;
        }
        for (i, x) in v {
            self.add(*i, &x.mul(a));
        }
    }

    pub fn take(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            let x = std::mem::replace(&mut self.buf[i], self.field.zero());
            self.mark[i] = false;
            if !x.is_zero() {
                out.push((i, x));
            }
        }
        self.touched.clear();
        out
    }
}
