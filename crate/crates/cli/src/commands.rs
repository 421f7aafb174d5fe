use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use dgker::category::{
    check_fibration, check_quasi_equivalence, construct_standard_homotopy, fiber_product,
    mor_category, path_object, DgCategory, DgFunctor, LinearCategory,
};
use dgker::corpus;
use dgker::io::{self, serialize, Check, Document, Payload, Report};
use dgker::kernel::{
    check_adjunction, compose_kernels, curry_kernel, ext_apply, external_kernel_product, ind_apply,
    res_apply, res_g_apply, uncurry_functor, unit_kernel,
};
use dgker::linalg::{sparse, Field, Matrix, Scalar, SparseVec};
use dgker::module::{tensor_over, DgModule, NatTransform};
use dgker::resolution::{
    bar_resolution, essim_membership, homotopy_equivalence_modules, hprojective_battery_check,
    is_semi_free, rqr_check, Attachment, Generator, HeqWitness, ResolutionStatus,
    SemiFreeCertificate,
};
use dgker::{Error, Result, ValidationReport, Verdict};

use crate::harness;

#[derive(Parser, Debug)]
#[command(
    name = "dgker",
    version,
    about = "Exact computations with finite dg categories, modules and kernels"
)]
pub struct Cli {
    /// Base field: Q, F<p> or Fp:<p>. Documents must agree with it.
    #[arg(long, global = true, env = "DGKER_FIELD")]
    pub field: Option<String>,
    /// Seed for randomized searches over Q.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Candidate budget for searches that cannot be exhaustive.
    #[arg(long, global = true, default_value_t = 64)]
    pub budget: usize,
    /// Where to write the produced document (default: embed it in the report).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print the machine-readable report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check every identity of a document's payload.
    Validate { file: PathBuf },
    /// The opposite category, with the Koszul sign on composition.
    Opposite { category: PathBuf },
    /// Tensor product of two categories.
    TensorCat { first: PathBuf, second: PathBuf },
    /// `M ⊗_A N` for `M` over `A` and `N` over `A^op`, as a module over K.
    TensorMod { first: PathBuf, second: PathBuf },
    /// `M ⊠ N` over `A ⊗ B` for `M` over `A` and `N` over `B`.
    ExternalTensor { first: PathBuf, second: PathBuf },
    /// The cohomology category `H⁰(A)`.
    H0 { category: PathBuf },
    /// The cycle category `Z⁰(A)` and its isomorphism classes.
    Z0 { category: PathBuf },
    /// The representable module `h^x` with the Yoneda check.
    Yoneda { category: PathBuf, object: String },
    /// The morphism category of a category.
    Mor { category: PathBuf },
    /// The path object `P(A)` with its inclusion and endpoint functors.
    PathObject { category: PathBuf },
    /// Fiber product of two functors with a common target.
    FiberProduct { first: PathBuf, second: PathBuf },
    /// The value `Φ_E(X)` of the curried kernel.
    Curry { kernel: PathBuf, object: String },
    /// Curries and uncurries a kernel, checking the round trip.
    Uncurry { kernel: PathBuf },
    /// The unit kernel of a category.
    UnitKernel { category: PathBuf },
    /// Extension of a module along a kernel.
    Ext { kernel: PathBuf, module: PathBuf },
    /// Restriction of a module along a kernel.
    Res { kernel: PathBuf, module: PathBuf },
    /// Induction of a module along a functor.
    Ind { functor: PathBuf, module: PathBuf },
    /// Restriction of a module along a functor.
    ResG { functor: PathBuf, module: PathBuf },
    /// Composite of two kernels.
    ComposeKernels { first: PathBuf, second: PathBuf },
    /// External product of two kernels.
    KernelProduct { first: PathBuf, second: PathBuf },
    /// Checks the extension/restriction adjunction on a pair of modules.
    CheckAdjunction {
        kernel: PathBuf,
        source: PathBuf,
        target: PathBuf,
    },
    /// Truncated bar resolution of a module.
    BarResolve {
        module: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_length: usize,
        /// Also write the semi-free certificate here.
        #[arg(long)]
        certificate_out: Option<PathBuf>,
    },
    /// Checks a semi-free certificate against its module.
    SemifreeCheck {
        module: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
    },
    /// `H⁰ Hom(M, N) = 0` for the bundled acyclic battery plus any extra modules.
    HprojBattery {
        module: PathBuf,
        extra: Vec<PathBuf>,
    },
    /// Decides whether two modules are homotopy equivalent.
    HeqModules { first: PathBuf, second: PathBuf },
    /// Decides whether a module is homotopy equivalent to a representable one.
    Essim { module: PathBuf },
    /// Decides whether a kernel is right quasi-representable, object by object.
    RqrCheck { kernel: PathBuf },
    /// Decides whether a functor is a quasi-equivalence.
    CheckQe { functor: PathBuf },
    /// Decides whether a functor is a fibration.
    CheckFibration { functor: PathBuf },
    /// `H: A → P(B)` from `F`, `G` and `α` given as `{object: {label: scalar}}` (or `@file`).
    StandardHomotopy {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        alpha: String,
    },
    /// Runs the acceptance criteria.
    Harness {
        #[arg(long, default_value = "acceptance")]
        suite: String,
    },
    /// Writes the bundled corpus as documents.
    ExportCorpus { dir: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Opposite { .. } => "opposite",
            Command::TensorCat { .. } => "tensor-cat",
            Command::TensorMod { .. } => "tensor-mod",
            Command::ExternalTensor { .. } => "external-tensor",
            Command::H0 { .. } => "h0",
            Command::Z0 { .. } => "z0",
            Command::Yoneda { .. } => "yoneda",
            Command::Mor { .. } => "mor",
            Command::PathObject { .. } => "path-object",
            Command::FiberProduct { .. } => "fiber-product",
            Command::Curry { .. } => "curry",
            Command::Uncurry { .. } => "uncurry",
            Command::UnitKernel { .. } => "unit-kernel",
            Command::Ext { .. } => "ext",
            Command::Res { .. } => "res",
            Command::Ind { .. } => "ind",
            Command::ResG { .. } => "res-g",
            Command::ComposeKernels { .. } => "compose-kernels",
            Command::KernelProduct { .. } => "kernel-product",
            Command::CheckAdjunction { .. } => "check-adjunction",
            Command::BarResolve { .. } => "bar-resolve",
            Command::SemifreeCheck { .. } => "semifree-check",
            Command::HprojBattery { .. } => "hproj-battery",
            Command::HeqModules { .. } => "heq-modules",
            Command::Essim { .. } => "essim",
            Command::RqrCheck { .. } => "rqr-check",
            Command::CheckQe { .. } => "check-qe",
            Command::CheckFibration { .. } => "check-fibration",
            Command::StandardHomotopy { .. } => "standard-homotopy",
            Command::Harness { .. } => "harness",
            Command::ExportCorpus { .. } => "export-corpus",
        }
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    field: Option<Field>,
}

impl Ctx<'_> {
    fn load(&self, path: &Path) -> Result<Document> {
        let doc = io::load(path)?;
        if let Some(f) = self.field {
            if f != doc.field {
                return Err(Error::FieldMismatch {
                    expected: f,
                    found: doc.field,
                });
            }
        }
        Ok(doc)
    }

    fn category(&self, path: &Path) -> Result<Arc<DgCategory>> {
        self.load(path)?.category().cloned()
    }

    fn functor(&self, path: &Path) -> Result<DgFunctor> {
        self.load(path)?.functor().cloned()
    }

    fn module(&self, path: &Path) -> Result<Arc<DgModule>> {
        self.load(path)?.module().cloned()
    }

    fn kernel(&self, path: &Path) -> Result<dgker::kernel::Kernel> {
        self.load(path)?.kernel().cloned()
    }

    /// Writes the document to `--out`, or returns it for embedding in the report.
    fn emit(&self, payload: Payload) -> Result<Value> {
        let text = serialize(&Document::new(payload));
        match &self.cli.out {
            Some(out) => {
                fs::write(out, text).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
                Ok(json!({ "written": out.display().to_string() }))
            }
            None => Ok(
                json!({ "document": serde_json::from_str::<Value>(&text).expect("serializer emits JSON") }),
            ),
        }
    }
}

fn validation(name: &str, r: &ValidationReport) -> Check {
    Check::from_bool(
        name,
        r.passed(),
        if r.passed() {
            Value::Null
        } else {
            json!(r.violations)
        },
    )
}

fn dims(m: &DgModule) -> Value {
    let base = m.base();
    (0..m.len())
        .map(|x| (base.object_name(x).to_string(), json!(m.value(x).dims())))
        .collect::<serde_json::Map<_, _>>()
        .into()
}

fn with(mut data: Value, key: &str, value: Value) -> Value {
    data.as_object_mut()
        .expect("object")
        .insert(key.to_string(), value);
    data
}

fn witness_json(w: &HeqWitness) -> Value {
    let doc = |t: &NatTransform| {
        serde_json::from_str::<Value>(&serialize(&Document::new(Payload::Transformation(
            t.clone(),
        ))))
        .expect("JSON")
    };
    json!({
        "forward": doc(&w.forward),
        "backward": doc(&w.backward),
        "homotopy_source": doc(&w.homotopy_source),
        "homotopy_target": doc(&w.homotopy_target),
    })
}

fn heq_checks(
    name: &str,
    verdict: Verdict,
    witness: Option<&HeqWitness>,
    detail: Value,
) -> Vec<Check> {
    let mut checks = vec![Check::new(name, verdict, detail)];
    if let Some(w) = witness {
        checks.push(Check::from_bool(
            "witness verifies",
            w.verify(),
            Value::Null,
        ));
    }
    checks
}

pub fn execute(cli: &Cli) -> Result<Report> {
    let field = cli.field.as_deref().map(Field::parse).transpose()?;
    let cx = Ctx { cli, field };
    let (seed, budget) = (cli.seed, cli.budget);
    let name = cli.command.name();
    let (checks, data) = match &cli.command {
        Command::Validate { file } => {
            let doc = cx.load(file)?;
            let r = match &doc.payload {
                Payload::Category(c) => c.validate(),
                Payload::Functor(f) => f.validate(),
                Payload::Module(m) => m.validate(),
                Payload::Kernel(k) => k.validate(),
                Payload::Transformation(t) => t.validate(),
            };
            let kind = doc.payload.kind();
            (
                vec![validation(&format!("{kind} identities"), &r)],
                json!({ "kind": kind, "field": doc.field.to_string() }),
            )
        }
        Command::Opposite { category } => {
            let op = cx.category(category)?.opposite();
            (
                vec![validation("opposite", &op.validate())],
                cx.emit(Payload::Category(Arc::new(op)))?,
            )
        }
        Command::TensorCat { first, second } => {
            let t = DgCategory::tensor(&*cx.category(first)?, &*cx.category(second)?)?;
            (
                vec![validation("tensor category", &t.validate())],
                cx.emit(Payload::Category(Arc::new(t)))?,
            )
        }
        Command::TensorMod { first, second } => {
            let (m, n) = (cx.module(first)?, cx.module(second)?);
            let c = tensor_over(&m, &n)?;
            let k = Arc::new(DgCategory::unit_category(m.field()));
            let module = DgModule::new(
                k,
                vec![c.clone()],
                vec![vec![Matrix::identity(m.field(), c.dim())]],
            )?;
            let checks = vec![Check::from_bool("d² = 0", c.is_valid(), Value::Null)];
            let data = with(
                cx.emit(Payload::Module(Arc::new(module)))?,
                "dims",
                json!(c.dims()),
            );
            (checks, with(data, "cohomology", json!(c.betti())))
        }
        Command::ExternalTensor { first, second } => {
            let t = DgModule::external_tensor(&*cx.module(first)?, &*cx.module(second)?)?;
            (
                vec![validation("external tensor", &t.validate())],
                cx.emit(Payload::Module(Arc::new(t)))?,
            )
        }
        Command::H0 { category } | Command::Z0 { category } => {
            let c = cx.category(category)?;
            let lin = if name == "h0" {
                LinearCategory::h0(&c)
            } else {
                LinearCategory::z0(&c)
            };
            let mut table = Vec::new();
            for x in 0..lin.len() {
                for y in 0..lin.len() {
                    table.push(json!({ "source": c.object_name(x), "target": c.object_name(y), "dim": lin.dim(x, y) }));
                }
            }
            let classes = lin.iso_classes(seed, budget);
            let named = classes.as_ref().map(|cls| {
                cls.iter()
                    .map(|cl| cl.iter().map(|&x| c.object_name(x)).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            });
            let checks = vec![
                validation("linear category", &lin.validate()),
                Check::new(
                    "isomorphism classes decided",
                    if classes.is_some() {
                        Verdict::Yes
                    } else {
                        Verdict::Unknown
                    },
                    Value::Null,
                ),
            ];
            (checks, json!({ "homs": table, "iso_classes": named }))
        }
        Command::Yoneda { category, object } => {
            let h = DgModule::yoneda_named(&cx.category(category)?, object)?;
            (
                vec![validation("Yoneda module", &h.validate())],
                cx.emit(Payload::Module(Arc::new(h)))?,
            )
        }
        Command::Mor { category } => {
            let (m, objects) = mor_category(&*cx.category(category)?)?;
            let data = with(
                cx.emit(Payload::Category(Arc::new(m.clone())))?,
                "objects",
                json!(objects.len()),
            );
            (vec![validation("Mor category", &m.validate())], data)
        }
        Command::PathObject { category } => {
            let a = cx.category(category)?;
            let p = path_object(&a)?;
            let id = DgFunctor::identity(&a);
            let diagonal = DgFunctor::pairing(&id, &id, p.product.clone())?;
            let qe = check_quasi_equivalence(&p.iota, seed, budget);
            let fib = check_fibration(&p.source_target);
            let checks = vec![
                validation("path category", &p.category.validate()),
                validation("ι", &p.iota.validate()),
                validation("(s,t)", &p.source_target.validate()),
                Check::from_bool(
                    "(s,t)∘ι = diagonal",
                    p.source_target.compose(&p.iota)? == diagonal,
                    Value::Null,
                ),
                Check::new("ι is a quasi-equivalence", qe.verdict, json!(qe)),
                Check::new("(s,t) is a fibration", fib.verdict, json!(fib)),
            ];
            let data = with(
                cx.emit(Payload::Category(p.category.clone()))?,
                "objects",
                json!(p.category.objects()),
            );
            (checks, data)
        }
        Command::FiberProduct { first, second } => {
            let fp = fiber_product(&cx.functor(first)?, &cx.functor(second)?)?;
            let checks = vec![
                validation("fibre product", &fp.category.validate()),
                validation("first projection", &fp.first.validate()),
                validation("second projection", &fp.second.validate()),
            ];
            let data = with(
                cx.emit(Payload::Category(fp.category.clone()))?,
                "objects",
                json!(fp.category.objects()),
            );
            (checks, data)
        }
        Command::Curry { kernel, object } => {
            let e = cx.kernel(kernel)?;
            let x = e.left().object_index(object)?;
            let phi = curry_kernel(&e);
            let m = phi.object(x).clone();
            (
                vec![validation("curried functor", &phi.validate())],
                with(cx.emit(Payload::Module(m.clone()))?, "dims", dims(&m)),
            )
        }
        Command::Uncurry { kernel } => {
            let e = cx.kernel(kernel)?;
            let back = uncurry_functor(&curry_kernel(&e))?;
            let checks = vec![
                Check::from_bool("uncurry ∘ curry = id", back == e, Value::Null),
                validation("kernel", &back.validate()),
            ];
            (checks, cx.emit(Payload::Kernel(back))?)
        }
        Command::UnitKernel { category } => {
            let e = unit_kernel(&cx.category(category)?);
            (
                vec![validation("unit kernel", &e.validate())],
                cx.emit(Payload::Kernel(e))?,
            )
        }
        Command::Ext { kernel, module } => {
            let m = ext_apply(&cx.kernel(kernel)?, &*cx.module(module)?)?;
            (
                vec![validation("Ext", &m.validate())],
                with(
                    cx.emit(Payload::Module(Arc::new(m.clone())))?,
                    "dims",
                    dims(&m),
                ),
            )
        }
        Command::Res { kernel, module } => {
            let m = res_apply(&curry_kernel(&cx.kernel(kernel)?), &cx.module(module)?)?;
            (
                vec![validation("res", &m.validate())],
                with(
                    cx.emit(Payload::Module(Arc::new(m.clone())))?,
                    "dims",
                    dims(&m),
                ),
            )
        }
        Command::Ind { functor, module } => {
            let m = ind_apply(&cx.functor(functor)?, &*cx.module(module)?)?;
            (
                vec![validation("Ind", &m.validate())],
                with(
                    cx.emit(Payload::Module(Arc::new(m.clone())))?,
                    "dims",
                    dims(&m),
                ),
            )
        }
        Command::ResG { functor, module } => {
            let m = res_g_apply(&cx.functor(functor)?, &*cx.module(module)?)?;
            (
                vec![validation("res along G", &m.validate())],
                with(
                    cx.emit(Payload::Module(Arc::new(m.clone())))?,
                    "dims",
                    dims(&m),
                ),
            )
        }
        Command::ComposeKernels { first, second } => {
            let e = compose_kernels(&cx.kernel(first)?, &cx.kernel(second)?)?;
            (
                vec![validation("composite kernel", &e.validate())],
                cx.emit(Payload::Kernel(e))?,
            )
        }
        Command::KernelProduct { first, second } => {
            let e = external_kernel_product(&cx.kernel(first)?, &cx.kernel(second)?)?;
            (
                vec![validation("kernel product", &e.validate())],
                cx.emit(Payload::Kernel(e))?,
            )
        }
        Command::CheckAdjunction {
            kernel,
            source,
            target,
        } => {
            let r = check_adjunction(
                &cx.kernel(kernel)?,
                &*cx.module(source)?,
                &*cx.module(target)?,
            )?;
            let v = json!(r);
            let checks = v
                .as_object()
                .expect("report is an object")
                .iter()
                .filter_map(|(k, b)| {
                    b.as_bool()
                        .map(|b| Check::from_bool(k.as_str(), b, Value::Null))
                })
                .collect();
            (checks, json!({ "hom_dims": r.hom_dims }))
        }
        Command::BarResolve {
            module,
            max_length,
            certificate_out,
        } => {
            let m = cx.module(module)?;
            let r = bar_resolution(&m, *max_length);
            let status = match r.status {
                ResolutionStatus::Complete | ResolutionStatus::TruncatedQuasiIso => Verdict::Yes,
                ResolutionStatus::Insufficient => Verdict::No,
            };
            let checks = vec![
                validation("resolution", &r.module.validate()),
                Check::from_bool(
                    "augmentation is a closed chain map",
                    r.augmentation.is_valid() && r.augmentation.is_closed(),
                    Value::Null,
                ),
                Check::from_bool(
                    "augmentation is a quasi-isomorphism",
                    r.augmentation.is_quasi_iso(),
                    Value::Null,
                ),
                Check::from_bool(
                    "certificate verifies",
                    is_semi_free(&r.module, &r.certificate)?,
                    Value::Null,
                ),
                Check::new("status", status, json!(r.status)),
            ];
            let base = m.base();
            let chains: Vec<Vec<&str>> = r
                .chains
                .iter()
                .map(|c| c.iter().map(|&x| base.object_name(x)).collect())
                .collect();
            let summands: Vec<Vec<Value>> = r
                .certificate
                .summands()
                .iter()
                .map(|step| {
                    step.iter()
                        .map(|&(x, k)| json!({ "object": base.object_name(x), "shift": k }))
                        .collect()
                })
                .collect();
            let mut data = with(
                cx.emit(Payload::Module(r.module.clone()))?,
                "chains",
                json!(chains),
            );
            data = with(data, "summands", json!(summands));
            match certificate_out {
                Some(path) => {
                    let text = serde_json::to_string_pretty(&r.certificate)
                        .expect("certificates serialize")
                        + "\n";
                    fs::write(path, text)
                        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                    data = with(
                        data,
                        "certificate_written",
                        json!(path.display().to_string()),
                    );
                }
                None => data = with(data, "certificate", json!(r.certificate)),
            }
            (checks, data)
        }
        Command::SemifreeCheck {
            module,
            certificate,
        } => {
            let m = cx.module(module)?;
            let text = fs::read_to_string(certificate)
                .map_err(|e| Error::Io(format!("{}: {e}", certificate.display())))?;
            let cert = parse_certificate(&text, m.field())?;
            let ok = is_semi_free(&m, &cert)?;
            (
                vec![Check::from_bool("semi-free certificate", ok, Value::Null)],
                json!({ "steps": cert.step_count() }),
            )
        }
        Command::HprojBattery { module, extra } => {
            let m = cx.module(module)?;
            let mut battery = corpus::acyclic_battery(m.base());
            for path in extra {
                battery.push((path.display().to_string(), (*cx.module(path)?).clone()));
            }
            let r = hprojective_battery_check(&m, &battery)?;
            (
                vec![Check::new(
                    "H⁰ Hom(M, N) = 0 on the battery",
                    r.verdict,
                    json!(r.entries),
                )],
                json!({ "battery": battery.len() }),
            )
        }
        Command::HeqModules { first, second } => {
            let r = homotopy_equivalence_modules(
                &cx.module(first)?,
                &cx.module(second)?,
                seed,
                budget,
            )?;
            let detail = json!({ "examined": r.examined, "exhaustive": r.exhaustive });
            let data = json!({ "witness": r.witness.as_ref().map(witness_json) });
            (
                heq_checks("homotopy equivalent", r.verdict, r.witness.as_ref(), detail),
                data,
            )
        }
        Command::Essim { module } => {
            let m = cx.module(module)?;
            let r = essim_membership(&m, seed, budget)?;
            let object = r.object.map(|y| m.base().object_name(y).to_string());
            let data = json!({ "object": object, "witness": r.witness.as_ref().map(witness_json) });
            (
                heq_checks(
                    "in the essential image of Yoneda",
                    r.verdict,
                    r.witness.as_ref(),
                    Value::Null,
                ),
                data,
            )
        }
        Command::RqrCheck { kernel } => {
            let r = rqr_check(&cx.kernel(kernel)?, seed, budget)?;
            let mut checks = Vec::new();
            for e in &r.entries {
                checks.push(Check::new(
                    format!("Φ({}) representable", e.object),
                    e.verdict,
                    json!({ "by": e.witness_object }),
                ));
                if let Some(w) = &e.witness {
                    checks.push(Check::from_bool(
                        format!("witness at {} verifies", e.object),
                        w.verify(),
                        Value::Null,
                    ));
                }
            }
            (checks, json!({ "verdict": r.verdict }))
        }
        Command::CheckQe { functor } => {
            let r = check_quasi_equivalence(&cx.functor(functor)?, seed, budget);
            (
                vec![Check::new("quasi-equivalence", r.verdict, json!(r))],
                Value::Null,
            )
        }
        Command::CheckFibration { functor } => {
            let r = check_fibration(&cx.functor(functor)?);
            (
                vec![Check::new("fibration", r.verdict, json!(r))],
                Value::Null,
            )
        }
        Command::StandardHomotopy {
            first,
            second,
            alpha,
        } => {
            let (f, g) = (cx.functor(first)?, cx.functor(second)?);
            let alpha = parse_alpha(alpha, &f, &g)?;
            match construct_standard_homotopy(&f, &g, &alpha) {
                Err(Error::NotInvertible(x)) => (
                    vec![Check::new(
                        "α invertible in H⁰",
                        Verdict::No,
                        json!({ "object": x }),
                    )],
                    Value::Null,
                ),
                Err(e) => return Err(e),
                Ok((p, h)) => {
                    let checks = vec![
                        validation("H", &h.validate()),
                        Check::from_bool("s∘H = F", p.source.compose(&h)? == f, Value::Null),
                        Check::from_bool("t∘H = G", p.target.compose(&h)? == g, Value::Null),
                    ];
                    (checks, cx.emit(Payload::Functor(h))?)
                }
            }
        }
        Command::Harness { suite } => {
            if suite != "acceptance" {
                return Err(Error::InvalidInput(format!(
                    "unknown suite '{suite}' (available: acceptance)"
                )));
            }
            let outcomes = harness::run(field.unwrap_or(Field::F2), seed, budget);
            let checks = outcomes.iter().map(harness::Outcome::check).collect();
            (checks, Value::Null)
        }
        Command::ExportCorpus { dir } => {
            let written = export_corpus(dir, field.unwrap_or(Field::F2))?;
            (
                vec![Check::from_bool("corpus written", true, Value::Null)],
                json!({ "files": written }),
            )
        }
    };
    Ok(Report::new(name, checks, data))
}

/// Reads `--alpha`: a JSON object (or `@path` to one) mapping each source
/// object `X` to an element of `hom(F X, G X)` written as `{label: scalar}`.
fn parse_alpha(text: &str, f: &DgFunctor, g: &DgFunctor) -> Result<Vec<SparseVec>> {
    let owned;
    let text = match text.strip_prefix('@') {
        Some(path) => {
            owned = fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
            owned.as_str()
        }
        None => text,
    };
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let (a, b) = (&f.source, &f.target);
    let bad = |m: String| Error::InvalidInput(format!("alpha: {m}"));
    let map = v
        .as_object()
        .ok_or_else(|| bad("expected an object".into()))?;
    (0..a.len())
        .map(|x| {
            let name = a.object_name(x);
            let (fx, gx) = (f.object(x), g.object(x));
            let entry = map
                .get(name)
                .and_then(Value::as_object)
                .ok_or_else(|| bad(format!("missing component at '{name}'")))?;
            let mut acc = sparse::Accumulator::new(b.field(), b.hom_dim(fx, gx));
            for (label, s) in entry {
                let i = b
                    .basis_index(fx, gx, label)
                    .ok_or_else(|| bad(format!("unknown label '{label}'")))?;
                acc.add(i, &scalar(b.field(), s)?);
            }
            Ok(acc.take())
        })
        .collect()
}

fn scalar(field: Field, v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => field.parse_scalar(s),
        Value::Number(n) => field.parse_scalar(&n.to_string()),
        _ => Err(Error::InvalidInput(format!("bad scalar {v}"))),
    }
}

/// Reads a certificate in the form written by `bar-resolve`.
fn parse_certificate(text: &str, field: Field) -> Result<SemiFreeCertificate> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let bad = |what: &str| Error::InvalidInput(format!("certificate: malformed {what}"));
    let arr = |v: &Value, what: &str| v.as_array().cloned().ok_or_else(|| bad(what));
    let scalars = |v: &Value, what: &str| {
        arr(v, what)?
            .iter()
            .map(|s| scalar(field, s))
            .collect::<Result<Vec<_>>>()
    };
    let uint = |v: &Value, what: &str| v.as_u64().map(|n| n as usize).ok_or_else(|| bad(what));
    let generators = arr(&v["generators"], "generators")?
        .iter()
        .map(|g| {
            Ok(Generator {
                object: uint(&g["object"], "object")?,
                degree: g["degree"].as_i64().ok_or_else(|| bad("degree"))? as i32,
                element: scalars(&g["element"], "element")?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let steps = arr(&v["steps"], "steps")?
        .iter()
        .map(|s| uint(s, "step"))
        .collect::<Result<Vec<_>>>()?;
    let attaching = arr(&v["attaching"], "attaching")?
        .iter()
        .map(|terms| {
            arr(terms, "attaching")?
                .iter()
                .map(|t| {
                    Ok(Attachment {
                        generator: uint(&t["generator"], "generator")?,
                        coefficient: scalars(&t["coefficient"], "coefficient")?,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SemiFreeCertificate {
        generators,
        steps,
        attaching,
    })
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect::<String>()
        .trim_matches('_')
        .to_string()
}

/// Writes categories, Yoneda modules, functors and kernels of the corpus.
fn export_corpus(dir: &Path, field: Field) -> Result<Vec<String>> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut written = Vec::new();
    let mut write = |name: String, payload: Payload| -> Result<()> {
        let file = format!("{name}.dg");
        fs::write(dir.join(&file), serialize(&Document::new(payload)))
            .map_err(|e| Error::Io(format!("{file}: {e}")))?;
        written.push(file);
        Ok(())
    };
    for (name, c) in corpus::categories(field) {
        let c = Arc::new(c);
        let stem = if name == "K" {
            "K".to_string()
        } else {
            file_stem(name)
        };
        write(stem.clone(), Payload::Category(c.clone()))?;
        for (x, h) in DgModule::yoneda_all(&c).into_iter().enumerate() {
            let obj = match c.object_name(x) {
                "*" => "star".to_string(),
                other => file_stem(other),
            };
            write(format!("{stem}.h_{obj}"), Payload::Module(Arc::new(h)))?;
        }
    }
    let a2 = Arc::new(corpus::a2(field));
    for x in 0..a2.len() {
        if let Ok(s) = DgModule::simple(&a2, x) {
            write(
                format!("A2.S_{}", a2.object_name(x)),
                Payload::Module(Arc::new(s)),
            )?;
        }
    }
    write(
        "A2.path.iota".into(),
        Payload::Functor(path_object(&a2)?.iota),
    )?;
    write(
        "collapse_A2".into(),
        Payload::Functor(corpus::collapse_a2(field)),
    )?;
    for (name, k) in corpus::kernels(field) {
        write(format!("kernel.{}", file_stem(&name)), Payload::Kernel(k))?;
    }
    Ok(written)
}
