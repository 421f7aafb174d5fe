//! JSON documents for categories, functors, modules, kernels and
//! transformations, and machine-readable command reports.
//!
//! A document is a JSON object
//!
//! ```text
//! { "version": 1, "field": "F2", "kind": "module",
//!   "references": { "A": "A2.dg" }, "payload": { ... } }
//! ```
//!
//! Scalars are strings (`"3/4"` over Q, residues over F_p). Hom elements are
//! written as `{label: scalar}` maps over the stable basis labels; module
//! matrices as `[row, col, scalar]` triplets. A category- or module-valued
//! field is either an inline payload or `{"ref": name}` naming an entry of
//! `references`, which the [`Resolver`] loads.

mod report;

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Map, Value};

pub use report::{report_schema, Check, Report};

use crate::category::{DgCategory, DgFunctor};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::linalg::{sparse, Field, Matrix, Scalar, SparseVec};
use crate::module::{DgModule, NatTransform};

pub const FORMAT_VERSION: u64 = 1;

/// Nesting limit for documents referencing documents.
const MAX_DEPTH: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Category(Arc<DgCategory>),
    Functor(DgFunctor),
    Module(Arc<DgModule>),
    Kernel(Kernel),
    Transformation(NatTransform),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Category(_) => "category",
            Payload::Functor(_) => "functor",
            Payload::Module(_) => "module",
            Payload::Kernel(_) => "kernel",
            Payload::Transformation(_) => "transformation",
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Payload::Category(c) => c.field(),
            Payload::Functor(f) => f.source.field(),
            Payload::Module(m) => m.field(),
            Payload::Kernel(k) => k.left().field(),
            Payload::Transformation(t) => t.source().field(),
        }
    }
}

/// A resolved reference: where it came from and what it holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reference {
    pub path: String,
    pub payload: Payload,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub field: Field,
    pub references: BTreeMap<String, Reference>,
    pub payload: Payload,
}

impl Document {
    pub fn new(payload: Payload) -> Document {
        Document {
            field: payload.field(),
            references: BTreeMap::new(),
            payload,
        }
    }

    /// Adds a named reference; fields equal to its payload serialize as `{"ref": name}`.
    pub fn with_reference(mut self, name: &str, path: &str, payload: Payload) -> Document {
        self.references.insert(
            name.to_string(),
            Reference {
                path: path.to_string(),
                payload,
            },
        );
        self
    }

    pub fn category(&self) -> Result<&Arc<DgCategory>> {
        match &self.payload {
            Payload::Category(c) => Ok(c),
            p => Err(wrong_kind("category", p.kind())),
        }
    }

    pub fn functor(&self) -> Result<&DgFunctor> {
        match &self.payload {
            Payload::Functor(f) => Ok(f),
            p => Err(wrong_kind("functor", p.kind())),
        }
    }

    pub fn module(&self) -> Result<&Arc<DgModule>> {
        match &self.payload {
            Payload::Module(m) => Ok(m),
            p => Err(wrong_kind("module", p.kind())),
        }
    }

    pub fn kernel(&self) -> Result<&Kernel> {
        match &self.payload {
            Payload::Kernel(k) => Ok(k),
            p => Err(wrong_kind("kernel", p.kind())),
        }
    }

    pub fn transformation(&self) -> Result<&NatTransform> {
        match &self.payload {
            Payload::Transformation(t) => Ok(t),
            p => Err(wrong_kind("transformation", p.kind())),
        }
    }
}

fn wrong_kind(expected: &str, found: &str) -> Error {
    Error::InvalidInput(format!("expected a {expected} document, found a {found}"))
}

/// Loads referenced documents by path.
pub trait Resolver {
    fn resolve(&self, path: &str, depth: usize) -> Result<Document>;
}

/// Rejects every reference.
pub struct NoReferences;

impl Resolver for NoReferences {
    fn resolve(&self, path: &str, _depth: usize) -> Result<Document> {
        Err(Error::DanglingReference(path.to_string()))
    }
}

/// In-memory documents keyed by path.
impl Resolver for BTreeMap<String, Document> {
    fn resolve(&self, path: &str, _depth: usize) -> Result<Document> {
        self.get(path)
            .cloned()
            .ok_or_else(|| Error::DanglingReference(path.to_string()))
    }
}

/// Reads references relative to a directory.
pub struct FileResolver {
    pub dir: PathBuf,
}

impl FileResolver {
    pub fn for_file(path: &Path) -> FileResolver {
        FileResolver {
            dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
        }
    }
}

impl Resolver for FileResolver {
    fn resolve(&self, path: &str, depth: usize) -> Result<Document> {
        let full = self.dir.join(path);
        let text =
            fs::read_to_string(&full).map_err(|_| Error::DanglingReference(path.to_string()))?;
        let nested = FileResolver::for_file(&full);
        parse_at_depth(&text, &nested, depth + 1)
    }
}

/// Reads and parses a document file, resolving references next to it.
pub fn load(path: &Path) -> Result<Document> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse(&text, &FileResolver::for_file(path))
}

pub fn parse(text: &str, resolver: &dyn Resolver) -> Result<Document> {
    parse_at_depth(text, resolver, 0)
}

fn parse_at_depth(text: &str, resolver: &dyn Resolver, depth: usize) -> Result<Document> {
    if depth > MAX_DEPTH {
        return Err(Error::InvalidInput(
            "references nest too deeply (cycle?)".into(),
        ));
    }
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut cx = Reader {
        text,
        field: Field::F2,
        refs: BTreeMap::new(),
    };
    let top = cx.object(&value, "document")?;
    let version = top
        .get("version")
        .and_then(Value::as_u64)
        .ok_or_else(|| cx.error("\"version\"", "missing or non-integer \"version\""))?;
    if version != FORMAT_VERSION {
        return Err(Error::UnknownVersion(version));
    }
    let field_text = cx.string(top, "field")?;
    cx.field = Field::parse(field_text).map_err(|e| cx.error(field_text, &e.to_string()))?;
    if let Some(refs) = top.get("references") {
        for (name, path) in cx.object(refs, "references")? {
            let path = path
                .as_str()
                .ok_or_else(|| cx.error(name, "reference paths must be strings"))?;
            let doc = resolver.resolve(path, depth).map_err(|e| match e {
                Error::DanglingReference(_) => Error::DanglingReference(name.clone()),
                e => e,
            })?;
            if doc.field != cx.field {
                return Err(Error::FieldMismatch {
                    expected: cx.field,
                    found: doc.field,
                });
            }
            cx.refs.insert(
                name.clone(),
                Reference {
                    path: path.to_string(),
                    payload: doc.payload,
                },
            );
        }
    }
    let kind = cx.string(top, "kind")?;
    let body = top
        .get("payload")
        .ok_or_else(|| cx.error("\"kind\"", "missing \"payload\""))?;
    let payload = match kind {
        "category" => Payload::Category(Arc::new(cx.category_payload(body)?)),
        "functor" => Payload::Functor(cx.functor_payload(body)?),
        "module" => Payload::Module(Arc::new(cx.module_payload(body)?)),
        "kernel" => Payload::Kernel(cx.kernel_payload(body)?),
        "transformation" => Payload::Transformation(cx.transformation_payload(body)?),
        other => return Err(cx.error(other, &format!("unknown payload kind '{other}'"))),
    };
    Ok(Document {
        field: cx.field,
        references: cx.refs,
        payload,
    })
}

/// Canonical pretty-printed JSON text of a document.
pub fn serialize(doc: &Document) -> String {
    let w = Writer {
        refs: &doc.references,
    };
    let payload = match &doc.payload {
        Payload::Category(c) => w.category_payload(c),
        Payload::Functor(f) => w.functor_payload(f),
        Payload::Module(m) => w.module_payload(m),
        Payload::Kernel(k) => w.kernel_payload(k),
        Payload::Transformation(t) => w.transformation_payload(t),
    };
    let refs: Map<String, Value> = doc
        .references
        .iter()
        .map(|(k, r)| (k.clone(), Value::String(r.path.clone())))
        .collect();
    let mut top = Map::new();
    top.insert("version".into(), json!(FORMAT_VERSION));
    top.insert("field".into(), json!(doc.field.to_string()));
    top.insert("kind".into(), json!(doc.payload.kind()));
    if !refs.is_empty() {
        top.insert("references".into(), Value::Object(refs));
    }
    top.insert("payload".into(), payload);
    let mut text =
        serde_json::to_string_pretty(&Value::Object(top)).expect("JSON values serialize");
    text.push('\n');
    text
}

/// 1-based line and column of the first occurrence of `needle`, or of the start.
fn locate(text: &str, needle: &str) -> (usize, usize) {
    let at = text.find(needle).unwrap_or(0);
    let before = &text[..at];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(at, |nl| at - nl - 1) + 1;
    (line, column)
}

struct Reader<'a> {
    text: &'a str,
    field: Field,
    refs: BTreeMap<String, Reference>,
}

impl Reader<'_> {
    fn error(&self, near: &str, message: &str) -> Error {
        let (line, column) = locate(self.text, near);
        Error::Parse {
            line,
            column,
            message: message.to_string(),
        }
    }

    fn object<'v>(&self, v: &'v Value, what: &str) -> Result<&'v Map<String, Value>> {
        v.as_object()
            .ok_or_else(|| self.error(&v.to_string(), &format!("{what} must be an object")))
    }

    fn array<'v>(&self, v: &'v Value, what: &str) -> Result<&'v Vec<Value>> {
        v.as_array()
            .ok_or_else(|| self.error(&v.to_string(), &format!("{what} must be an array")))
    }

    fn field_of<'v>(&self, m: &'v Map<String, Value>, key: &str) -> Result<&'v Value> {
        m.get(key)
            .ok_or_else(|| self.error(&format!("\"{key}\""), &format!("missing \"{key}\"")))
    }

    fn string<'v>(&self, m: &'v Map<String, Value>, key: &str) -> Result<&'v str> {
        self.field_of(m, key)?.as_str().ok_or_else(|| {
            self.error(
                &format!("\"{key}\""),
                &format!("\"{key}\" must be a string"),
            )
        })
    }

    fn int(&self, v: &Value, what: &str) -> Result<i64> {
        v.as_i64()
            .ok_or_else(|| self.error(&v.to_string(), &format!("{what} must be an integer")))
    }

    fn index(&self, v: &Value, bound: usize, what: &str) -> Result<usize> {
        match v.as_u64() {
            Some(i) if (i as usize) < bound => Ok(i as usize),
            _ => Err(self.error(
                &v.to_string(),
                &format!("{what} {v} out of range (< {bound})"),
            )),
        }
    }

    fn scalar(&self, v: &Value) -> Result<Scalar> {
        let text = match v {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            _ => return Err(self.error(&v.to_string(), "scalars must be strings or integers")),
        };
        self.field
            .parse_scalar(&text)
            .map_err(|e| self.error(&text, &e.to_string()))
    }

    fn object_index(&self, c: &DgCategory, name: &str) -> Result<usize> {
        c.object_index(name)
            .map_err(|_| self.error(&format!("\"{name}\""), &format!("unknown object '{name}'")))
    }

    /// `{label: scalar}` over the basis of `hom(x, y)`.
    fn hom_element(&self, c: &DgCategory, x: usize, y: usize, v: &Value) -> Result<SparseVec> {
        let mut acc = sparse::Accumulator::new(self.field, c.hom_dim(x, y));
        for (label, s) in self.object(v, "hom element")? {
            let i = c.basis_index(x, y, label).ok_or_else(|| {
                self.error(
                    &format!("\"{label}\""),
                    &format!(
                        "unknown basis label '{label}' in hom({}, {})",
                        c.object_name(x),
                        c.object_name(y)
                    ),
                )
            })?;
            acc.add(i, &self.scalar(s)?);
        }
        Ok(acc.take())
    }

    /// `[[row, col, scalar], ...]`.
    fn matrix(&self, v: &Value, rows: usize, cols: usize) -> Result<Matrix> {
        let mut triplets = Vec::new();
        for t in self.array(v, "matrix")? {
            let t = self.array(t, "matrix entry")?;
            if t.len() != 3 {
                return Err(self.error(
                    &Value::Array(t.clone()).to_string(),
                    "matrix entries are [row, col, scalar]",
                ));
            }
            triplets.push((
                self.index(&t[0], rows, "row")?,
                self.index(&t[1], cols, "column")?,
                self.scalar(&t[2])?,
            ));
        }
        Ok(Matrix::from_triplets(self.field, rows, cols, triplets))
    }

    fn complex(&self, v: &Value) -> Result<Complex> {
        let m = self.object(v, "complex")?;
        let degrees = self
            .array(self.field_of(m, "degrees")?, "degrees")?
            .iter()
            .map(|d| self.int(d, "degree").map(|d| d as i32))
            .collect::<Result<Vec<_>>>()?;
        let n = degrees.len();
        let d = match m.get("d") {
            Some(d) => self.matrix(d, n, n)?,
            None => Matrix::zeros(self.field, n, n),
        };
        Complex::new(self.field, degrees, d).map_err(|e| self.error("\"d\"", &e.to_string()))
    }

    fn reference(&self, v: &Value) -> Result<Option<&Payload>> {
        let Some(name) = v.as_object().and_then(|m| m.get("ref")) else {
            return Ok(None);
        };
        let name = name
            .as_str()
            .ok_or_else(|| self.error("\"ref\"", "\"ref\" must be a string"))?;
        self.refs
            .get(name)
            .map(|r| Some(&r.payload))
            .ok_or_else(|| Error::DanglingReference(name.to_string()))
    }

    fn category_field(&self, v: &Value) -> Result<Arc<DgCategory>> {
        match self.reference(v)? {
            Some(Payload::Category(c)) => Ok(c.clone()),
            Some(p) => Err(self.error(
                "\"ref\"",
                &format!("reference names a {}, expected a category", p.kind()),
            )),
            None => Ok(Arc::new(self.category_payload(v)?)),
        }
    }

    fn module_field(&self, v: &Value) -> Result<Arc<DgModule>> {
        match self.reference(v)? {
            Some(Payload::Module(m)) => Ok(m.clone()),
            Some(p) => Err(self.error(
                "\"ref\"",
                &format!("reference names a {}, expected a module", p.kind()),
            )),
            None => Ok(Arc::new(self.module_payload(v)?)),
        }
    }

    fn category_payload(&self, v: &Value) -> Result<DgCategory> {
        let m = self.object(v, "category")?;
        let mut objects = Vec::new();
        for o in self.array(self.field_of(m, "objects")?, "objects")? {
            let name = o
                .as_str()
                .ok_or_else(|| self.error(&o.to_string(), "object names must be strings"))?;
            if objects.iter().any(|x| x == name) {
                return Err(self.error(
                    &format!("\"{name}\""),
                    &format!("duplicate object '{name}'"),
                ));
            }
            objects.push(name.to_string());
        }
        let n = objects.len();
        let find = |name: &str| {
            objects.iter().position(|o| o == name).ok_or_else(|| {
                self.error(&format!("\"{name}\""), &format!("unknown object '{name}'"))
            })
        };
        let mut homs = vec![Complex::zero(self.field); n * n];
        let mut labels = vec![Vec::new(); n * n];
        let mut seen = HashSet::new();
        let mut differentials = Vec::new();
        for h in self.array(self.field_of(m, "homs")?, "homs")? {
            let hm = self.object(h, "hom")?;
            let (x, y) = (
                find(self.string(hm, "source")?)?,
                find(self.string(hm, "target")?)?,
            );
            if !seen.insert((x, y)) {
                return Err(self.error(&h.to_string(), "hom listed twice"));
            }
            let mut degrees = Vec::new();
            for b in self.array(self.field_of(hm, "basis")?, "basis")? {
                let b = self.array(b, "basis element")?;
                let label = b.first().and_then(Value::as_str);
                let (Some(label), Some(deg)) = (label, b.get(1)) else {
                    return Err(self.error(
                        &Value::Array(b.clone()).to_string(),
                        "basis elements are [label, degree]",
                    ));
                };
                if labels[x * n + y].iter().any(|l| l == label) {
                    return Err(self.error(
                        &format!("\"{label}\""),
                        &format!("duplicate basis label '{label}'"),
                    ));
                }
                labels[x * n + y].push(label.to_string());
                degrees.push(self.int(deg, "degree")? as i32);
            }
            homs[x * n + y] = Complex::with_zero_differential(self.field, degrees);
            differentials.push((x, y, hm.get("d")));
        }
        // Differentials are hom elements, so need the labels in place first.
        let shell = DgCategory::from_parts(
            self.field,
            objects.clone(),
            homs.clone(),
            labels.clone(),
            empty_tables(&homs, n),
            vec![Vec::new(); n],
        )?;
        for (x, y, d) in differentials {
            let Some(d) = d else { continue };
            let dim = shell.hom_dim(x, y);
            let mut triplets = Vec::new();
            for (label, image) in self.object(d, "differential")? {
                let c = shell.basis_index(x, y, label).ok_or_else(|| {
                    self.error(
                        &format!("\"{label}\""),
                        &format!("unknown basis label '{label}'"),
                    )
                })?;
                for (r, s) in self.hom_element(&shell, x, y, image)? {
                    triplets.push((r, c, s));
                }
            }
            let degrees = shell.hom(x, y).degrees().to_vec();
            homs[x * n + y] = Complex::new(
                self.field,
                degrees,
                Matrix::from_triplets(self.field, dim, dim, triplets),
            )
            .map_err(|e| self.error(&format!("\"{}\"", objects[x]), &e.to_string()))?;
        }
        let mut compose = empty_tables(&homs, n);
        for entry in self.array(self.field_of(m, "composition")?, "composition")? {
            let e = self.object(entry, "composition entry")?;
            let x = find(self.string(e, "source")?)?;
            let y = find(self.string(e, "middle")?)?;
            let z = find(self.string(e, "target")?)?;
            let (outer, inner) = (self.string(e, "outer")?, self.string(e, "inner")?);
            let g = shell.basis_index(y, z, outer).ok_or_else(|| {
                self.error(
                    &format!("\"{outer}\""),
                    &format!("unknown basis label '{outer}'"),
                )
            })?;
            let f = shell.basis_index(x, y, inner).ok_or_else(|| {
                self.error(
                    &format!("\"{inner}\""),
                    &format!("unknown basis label '{inner}'"),
                )
            })?;
            compose[(x * n + y) * n + z][g * shell.hom_dim(x, y) + f] =
                self.hom_element(&shell, x, z, self.field_of(e, "value")?)?;
        }
        let units_v = self.object(self.field_of(m, "units")?, "units")?;
        let mut units = vec![Vec::new(); n];
        for (name, u) in units_v {
            let x = find(name)?;
            units[x] = self.hom_element(&shell, x, x, u)?;
        }
        DgCategory::from_parts(self.field, objects, homs, labels, compose, units)
            .map_err(|e| self.error("\"objects\"", &e.to_string()))
    }

    fn functor_payload(&self, v: &Value) -> Result<DgFunctor> {
        let m = self.object(v, "functor")?;
        let source = self.category_field(self.field_of(m, "source")?)?;
        let target = self.category_field(self.field_of(m, "target")?)?;
        let objs = self.object(self.field_of(m, "objects")?, "object map")?;
        let mut object_map = Vec::with_capacity(source.len());
        for x in 0..source.len() {
            let name = source.object_name(x);
            let image = objs
                .get(name)
                .and_then(Value::as_str)
                .ok_or_else(|| self.error("\"objects\"", &format!("object map misses '{name}'")))?;
            object_map.push(self.object_index(&target, image)?);
        }
        let n = source.len();
        let mut hom_maps: Vec<Matrix> = (0..n * n)
            .map(|k| {
                let (x, y) = (k / n, k % n);
                Matrix::zeros(
                    self.field,
                    target.hom_dim(object_map[x], object_map[y]),
                    source.hom_dim(x, y),
                )
            })
            .collect();
        for entry in self.array(self.field_of(m, "maps")?, "maps")? {
            let e = self.object(entry, "hom map")?;
            let x = self.object_index(&source, self.string(e, "source")?)?;
            let y = self.object_index(&source, self.string(e, "target")?)?;
            let (fx, fy) = (object_map[x], object_map[y]);
            let mut triplets = Vec::new();
            for (label, image) in self.object(self.field_of(e, "images")?, "images")? {
                let c = source.basis_index(x, y, label).ok_or_else(|| {
                    self.error(
                        &format!("\"{label}\""),
                        &format!("unknown basis label '{label}'"),
                    )
                })?;
                for (r, s) in self.hom_element(&target, fx, fy, image)? {
                    triplets.push((r, c, s));
                }
            }
            hom_maps[x * n + y] = Matrix::from_triplets(
                self.field,
                target.hom_dim(fx, fy),
                source.hom_dim(x, y),
                triplets,
            );
        }
        DgFunctor::new(source, target, object_map, hom_maps)
            .map_err(|e| self.error("\"maps\"", &e.to_string()))
    }

    /// Values and actions over a known base.
    fn module_body(&self, base: Arc<DgCategory>, m: &Map<String, Value>) -> Result<DgModule> {
        let n = base.len();
        let vals = self.object(self.field_of(m, "values")?, "values")?;
        let mut values = vec![Complex::zero(self.field); n];
        for (name, c) in vals {
            values[self.object_index(&base, name)?] = self.complex(c)?;
        }
        let mut actions: Vec<Vec<Matrix>> = (0..n * n)
            .map(|k| {
                let (x, y) = (k / n, k % n);
                (0..base.hom_dim(x, y))
                    .map(|_| Matrix::zeros(self.field, values[x].dim(), values[y].dim()))
                    .collect()
            })
            .collect();
        for entry in self.array(self.field_of(m, "actions")?, "actions")? {
            let e = self.object(entry, "action")?;
            let x = self.object_index(&base, self.string(e, "source")?)?;
            let y = self.object_index(&base, self.string(e, "target")?)?;
            let label = self.string(e, "morphism")?;
            let f = base.basis_index(x, y, label).ok_or_else(|| {
                self.error(
                    &format!("\"{label}\""),
                    &format!("unknown basis label '{label}'"),
                )
            })?;
            actions[x * n + y][f] = self.matrix(
                self.field_of(e, "matrix")?,
                values[x].dim(),
                values[y].dim(),
            )?;
        }
        DgModule::new(base, values, actions).map_err(|e| self.error("\"values\"", &e.to_string()))
    }

    fn module_payload(&self, v: &Value) -> Result<DgModule> {
        let m = self.object(v, "module")?;
        let base = self.category_field(self.field_of(m, "base")?)?;
        self.module_body(base, m)
    }

    fn kernel_payload(&self, v: &Value) -> Result<Kernel> {
        let m = self.object(v, "kernel")?;
        let left = self.category_field(self.field_of(m, "left")?)?;
        let right = self.category_field(self.field_of(m, "right")?)?;
        let base = Arc::new(DgCategory::tensor(&left.opposite(), &right)?);
        let carrier =
            self.module_body(base, self.object(self.field_of(m, "carrier")?, "carrier")?)?;
        Kernel::new(left, right, carrier)
    }

    fn transformation_payload(&self, v: &Value) -> Result<NatTransform> {
        let m = self.object(v, "transformation")?;
        let source = self.module_field(self.field_of(m, "source")?)?;
        let target = self.module_field(self.field_of(m, "target")?)?;
        let degree = self.int(self.field_of(m, "degree")?, "degree")? as i32;
        let comps = self.object(self.field_of(m, "components")?, "components")?;
        let base = source.base().clone();
        let mut components: Vec<Matrix> = (0..base.len())
            .map(|x| Matrix::zeros(self.field, target.value(x).dim(), source.value(x).dim()))
            .collect();
        for (name, c) in comps {
            let x = self.object_index(&base, name)?;
            components[x] = self.matrix(c, target.value(x).dim(), source.value(x).dim())?;
        }
        NatTransform::new(source, target, degree, components)
            .map_err(|e| self.error("\"components\"", &e.to_string()))
    }
}

/// Composition tables of the right shapes, all zero.
fn empty_tables(homs: &[Complex], n: usize) -> Vec<Vec<SparseVec>> {
    (0..n * n * n)
        .map(|k| {
            let (x, y, z) = (k / (n * n), k / n % n, k % n);
            vec![Vec::new(); homs[x * n + y].dim() * homs[y * n + z].dim()]
        })
        .collect()
}

struct Writer<'a> {
    refs: &'a BTreeMap<String, Reference>,
}

fn scalar(s: &Scalar) -> Value {
    Value::String(s.to_text())
}

fn triplets(m: &Matrix) -> Value {
    Value::Array(
        m.entries()
            .map(|(r, c, s)| json!([r, c, scalar(s)]))
            .collect(),
    )
}

fn hom_element(c: &DgCategory, x: usize, y: usize, v: &SparseVec) -> Value {
    let labels = c.labels(x, y);
    Value::Object(
        v.iter()
            .map(|(i, s)| (labels[*i].clone(), scalar(s)))
            .collect(),
    )
}

fn complex(c: &Complex) -> Value {
    let mut m = Map::new();
    m.insert("degrees".into(), json!(c.degrees()));
    if !c.d().is_zero() {
        m.insert("d".into(), triplets(c.d()));
    }
    Value::Object(m)
}

impl Writer<'_> {
    fn category_field(&self, c: &Arc<DgCategory>) -> Value {
        for (name, r) in self.refs {
            if matches!(&r.payload, Payload::Category(rc) if **rc == **c) {
                return json!({ "ref": name });
            }
        }
        self.category_payload(c)
    }

    fn module_field(&self, m: &Arc<DgModule>) -> Value {
        for (name, r) in self.refs {
            if matches!(&r.payload, Payload::Module(rm) if **rm == **m) {
                return json!({ "ref": name });
            }
        }
        self.module_payload(m)
    }

    fn category_payload(&self, c: &DgCategory) -> Value {
        let n = c.len();
        let mut homs = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let h = c.hom(x, y);
                if h.dim() == 0 {
                    continue;
                }
                let labels = c.labels(x, y);
                let basis: Vec<Value> = labels
                    .iter()
                    .zip(h.degrees())
                    .map(|(l, d)| json!([l, d]))
                    .collect();
                let mut entry = Map::new();
                entry.insert("source".into(), json!(c.object_name(x)));
                entry.insert("target".into(), json!(c.object_name(y)));
                entry.insert("basis".into(), Value::Array(basis));
                if !h.d().is_zero() {
                    let d: Map<String, Value> = (0..h.dim())
                        .filter_map(|i| {
                            let col = h.d().column_sparse(i);
                            (!col.is_empty())
                                .then(|| (labels[i].clone(), hom_element(c, x, y, &col)))
                        })
                        .collect();
                    entry.insert("d".into(), Value::Object(d));
                }
                homs.push(Value::Object(entry));
            }
        }
        let mut composition = Vec::new();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for g in 0..c.hom_dim(y, z) {
                        for f in 0..c.hom_dim(x, y) {
                            let v = c.compose_basis(x, y, z, g, f);
                            if v.is_empty() {
                                continue;
                            }
                            composition.push(json!({
                                "source": c.object_name(x),
                                "middle": c.object_name(y),
                                "target": c.object_name(z),
                                "outer": c.labels(y, z)[g],
                                "inner": c.labels(x, y)[f],
                                "value": hom_element(c, x, z, v),
                            }));
                        }
                    }
                }
            }
        }
        let units: Map<String, Value> = (0..n)
            .map(|x| {
                (
                    c.object_name(x).to_string(),
                    hom_element(c, x, x, c.unit(x)),
                )
            })
            .collect();
        json!({
            "objects": c.objects(),
            "homs": homs,
            "composition": composition,
            "units": units,
        })
    }

    fn functor_payload(&self, f: &DgFunctor) -> Value {
        let (s, t) = (&f.source, &f.target);
        let objects: Map<String, Value> = (0..s.len())
            .map(|x| {
                (
                    s.object_name(x).to_string(),
                    json!(t.object_name(f.object(x))),
                )
            })
            .collect();
        let mut maps = Vec::new();
        for x in 0..s.len() {
            for y in 0..s.len() {
                let m = f.hom_map(x, y);
                if m.is_zero() {
                    continue;
                }
                let images: Map<String, Value> = (0..m.cols())
                    .filter_map(|c| {
                        let col = m.column_sparse(c);
                        (!col.is_empty()).then(|| {
                            (
                                s.labels(x, y)[c].clone(),
                                hom_element(t, f.object(x), f.object(y), &col),
                            )
                        })
                    })
                    .collect();
                maps.push(json!({
                    "source": s.object_name(x),
                    "target": s.object_name(y),
                    "images": images,
                }));
            }
        }
        json!({
            "source": self.category_field(s),
            "target": self.category_field(t),
            "objects": objects,
            "maps": maps,
        })
    }

    fn module_body(&self, m: &DgModule) -> Map<String, Value> {
        let base = m.base();
        let n = base.len();
        let values: Map<String, Value> = (0..n)
            .map(|x| (base.object_name(x).to_string(), complex(m.value(x))))
            .collect();
        let mut actions = Vec::new();
        for x in 0..n {
            for y in 0..n {
                for (f, a) in m.actions(x, y).iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    actions.push(json!({
                        "source": base.object_name(x),
                        "target": base.object_name(y),
                        "morphism": base.labels(x, y)[f],
                        "matrix": triplets(a),
                    }));
                }
            }
        }
        let mut out = Map::new();
        out.insert("values".into(), Value::Object(values));
        out.insert("actions".into(), Value::Array(actions));
        out
    }

    fn module_payload(&self, m: &DgModule) -> Value {
        let mut body = self.module_body(m);
        body.insert("base".into(), self.category_field(m.base()));
        Value::Object(body)
    }

    fn kernel_payload(&self, k: &Kernel) -> Value {
        json!({
            "left": self.category_field(k.left()),
            "right": self.category_field(k.right()),
            "carrier": Value::Object(self.module_body(k.carrier())),
        })
    }

    fn transformation_payload(&self, t: &NatTransform) -> Value {
        let base = t.source().base();
        let components: Map<String, Value> = t
            .components()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(x, c)| (base.object_name(x).to_string(), triplets(c)))
            .collect();
        json!({
            "source": self.module_field(t.source()),
            "target": self.module_field(t.target()),
            "degree": t.degree(),
            "components": components,
        })
    }
}
