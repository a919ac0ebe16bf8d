//! Command-line front end for the `bmz` binary.
//!
//! Exit codes: 0 success, 2 theorem or pairing failure, 3 input error,
//! 4 orthogonal states. Nothing is written to stdout on a nonzero exit.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::bcs::{self, BcsError, BcsPair, BcsSpec};
use crate::canonical::{
    canonical_pair_form, verify_canonical, CanonicalError, CanonicalReport, Convention, PairedCanonicalForm,
    Tolerances, DEFAULT_ILL_CONDITIONED, DEFAULT_RESIDUAL_TOL,
};
use crate::gcm::{overlap_with, transition_density_with, GcmError};
use crate::io::{pair, read_antisymmetric, FormFile, IoError, MatrixFile};
use crate::jordan::{jordan_decompose, JordanError, DEFAULT_CLUSTER_TOL};
use crate::linalg::{condition_number, AntisymmetricMatrix, DEFAULT_ANTISYM_TOL, DEFAULT_RANK_TOL};

pub const EXIT_THEOREM: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_ORTHOGONAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "bmz",
    version,
    about = "Simultaneous canonical forms of antisymmetric matrix pairs and condensate overlaps"
)]
struct Cli {
    /// Emit the report as JSON instead of key/value text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Canonical form of (C, C') in the paired Jordan basis of C^+C'.
    Canonize(CanonizeArgs),
    /// Phase-resolved overlap <C'|C>.
    Overlap(PairArgs),
    /// Transition density (1 + C^+C')^-1 C^+C', written as a matrix file.
    Density(DensityArgs),
    /// Jordan decomposition of C^+C' only.
    Jordan(PairArgs),
    /// Write the 4x4 defective example C, C' for a given a.
    Example(ExampleArgs),
    /// Write a BCS-form condensate matrix.
    GenBcs(GenBcsArgs),
    /// Re-check a saved canonical form against C, C'.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct TolArgs {
    /// Relative linking distance for eigenvalue clustering.
    #[arg(long, default_value_t = DEFAULT_CLUSTER_TOL)]
    cluster_tol: f64,
    /// Relative tolerance for rank decisions.
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    rank_tol: f64,
    /// Relative tolerance for canonical-form residuals.
    #[arg(long, default_value_t = DEFAULT_RESIDUAL_TOL)]
    residual_tol: f64,
    /// Condition estimate above which results are flagged ill-conditioned.
    #[arg(long, default_value_t = DEFAULT_ILL_CONDITIONED)]
    condition_limit: f64,
}

impl TolArgs {
    fn tolerances(&self) -> Result<Tolerances, Failure> {
        for (name, v) in [
            ("--cluster-tol", self.cluster_tol),
            ("--rank-tol", self.rank_tol),
            ("--residual-tol", self.residual_tol),
            ("--condition-limit", self.condition_limit),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Failure::Input(format!(
                    "{name} must be a positive finite number, got {v}"
                )));
            }
        }
        Ok(Tolerances {
            antisym: DEFAULT_ANTISYM_TOL,
            cluster: self.cluster_tol,
            rank: self.rank_tol,
            residual: self.residual_tol,
            ill_conditioned: self.condition_limit,
        })
    }
}

#[derive(Debug, Args)]
struct PairArgs {
    /// Matrix file for C.
    c: PathBuf,
    /// Matrix file for C'.
    cp: PathBuf,
    #[command(flatten)]
    tols: TolArgs,
}

#[derive(Debug, Args)]
struct CanonizeArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Normalization of the pair parameters: beta-eq-d or sqrt-d.
    #[arg(long, default_value = "beta-eq-d")]
    convention: Convention,
    /// Save the canonical form (basis, blocks, pair data) for `verify`.
    #[arg(long)]
    save_form: Option<PathBuf>,
    /// Save the basis W as a matrix file.
    #[arg(long)]
    save_w: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DensityArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Output matrix file for rho.
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ExampleArgs {
    /// Real part of a.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    a_re: f64,
    /// Imaginary part of a.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    a_im: f64,
    /// Directory receiving C.json and Cp.json.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct GenBcsArgs {
    /// Pair amplitudes, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "spec")]
    c: Vec<f64>,
    /// Phase angles (radians) of s per pair; a single value applies to all.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "spec")]
    s_angle: Vec<f64>,
    /// Allow negative amplitudes.
    #[arg(long)]
    relaxed: bool,
    /// JSON spec file: {"pairs": [{"c": 0.6, "s": [re, im]}], "relaxed": false}.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Rotate by a random unitary drawn from this seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output matrix file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Canonical form saved by `canonize --save-form`.
    form: PathBuf,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Theorem(String),
    Orthogonal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Theorem(_) => EXIT_THEOREM,
            Failure::Orthogonal(_) => EXIT_ORTHOGONAL,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Input(m) => format!("input error: {m}"),
            Failure::Theorem(m) => format!("theorem/pairing failure: {m}"),
            Failure::Orthogonal(m) => format!("orthogonal states: {m}"),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<CanonicalError> for Failure {
    fn from(e: CanonicalError) -> Self {
        match e {
            CanonicalError::DimensionMismatch { .. } => Failure::Input(e.to_string()),
            _ => Failure::Theorem(format!("[{}] {e}", e.invariant())),
        }
    }
}

impl From<JordanError> for Failure {
    fn from(e: JordanError) -> Self {
        Failure::Theorem(format!("[jordan-decomposition] {e}"))
    }
}

impl From<GcmError> for Failure {
    fn from(e: GcmError) -> Self {
        match e {
            GcmError::Canonical(c) => c.into(),
            GcmError::Orthogonal { .. } => Failure::Orthogonal(e.to_string()),
            GcmError::Linalg(_) => Failure::Theorem(e.to_string()),
        }
    }
}

impl From<BcsError> for Failure {
    fn from(e: BcsError) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Canonize(a) => canonize(a),
        Command::Overlap(a) => overlap(a),
        Command::Density(a) => density(a),
        Command::Jordan(a) => jordan(a),
        Command::Example(a) => example(a),
        Command::GenBcs(a) => gen_bcs(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(report) => Outcome {
            code: 0,
            stdout: if cli.json {
                render_json(&report)
            } else {
                render_text(&report)
            },
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code(),
            stdout: String::new(),
            stderr: format!("{}\n", f.message()),
        },
    }
}

fn render_json(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// `key.path: value` lines; scalars and scalar arrays are printed as JSON
/// (strings unquoted).
fn render_text(report: &Value) -> String {
    fn walk(v: &Value, prefix: &str, out: &mut String) {
        match v {
            Value::Object(map) => {
                for (k, x) in map {
                    let key = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(x, &key, out);
                }
            }
            Value::Array(items) if items.iter().any(|x| x.is_object()) => {
                for (i, x) in items.iter().enumerate() {
                    walk(x, &format!("{prefix}[{i}]"), out);
                }
            }
            Value::String(s) => {
                let _ = writeln!(out, "{prefix}: {s}");
            }
            other => {
                let _ = writeln!(out, "{prefix}: {other}");
            }
        }
    }
    let mut out = String::new();
    walk(report, "", &mut out);
    out
}

fn cx(z: Complex64) -> Value {
    // Adding zero folds -0.0 into 0.0.
    json!([z.re + 0.0, z.im + 0.0])
}

fn digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

fn tolerance_echo(t: &Tolerances) -> Value {
    json!({
        "antisym": t.antisym,
        "cluster": t.cluster,
        "rank": t.rank,
        "residual": t.residual,
        "condition_limit": t.ill_conditioned,
    })
}

struct LoadedPair {
    c: AntisymmetricMatrix,
    cp: AntisymmetricMatrix,
    inputs: Value,
    tols: Tolerances,
}

fn load_pair(a: &PairArgs) -> Result<LoadedPair, Failure> {
    let tols = a.tols.tolerances()?;
    let (c, cb) = read_antisymmetric(&a.c, tols.antisym)?;
    let (cp, cpb) = read_antisymmetric(&a.cp, tols.antisym)?;
    if c.dim() != cp.dim() {
        return Err(Failure::Input(format!(
            "dimension mismatch: C is {0}x{0}, C' is {1}x{1}",
            c.dim(),
            cp.dim()
        )));
    }
    let inputs = json!({
        "c": { "path": a.c.display().to_string(), "sha256": digest(&cb) },
        "cp": { "path": a.cp.display().to_string(), "sha256": digest(&cpb) },
    });
    Ok(LoadedPair { c, cp, inputs, tols })
}

fn header(command: &str, loaded: &LoadedPair) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("inputs".into(), loaded.inputs.clone());
    m.insert("dim".into(), json!(loaded.c.dim()));
    m.insert("tolerances".into(), tolerance_echo(&loaded.tols));
    m
}

fn block_table(form: &PairedCanonicalForm) -> Value {
    let mut role = vec![String::new(); form.blocks.len()];
    for (k, p) in form.pairs.iter().enumerate() {
        role[p.block] = format!("pair {k}");
        role[p.partner] = format!("pair {k} partner");
    }
    for &b in &form.null_sector {
        role[b] = "null".into();
    }
    Value::Array(
        form.blocks
            .iter()
            .map(|b| {
                json!({
                    "id": b.id,
                    "d": cx(b.eigenvalue),
                    "length": b.length,
                    "start": b.start,
                    "role": role[b.id],
                })
            })
            .collect(),
    )
}

fn pair_table(form: &PairedCanonicalForm) -> Value {
    Value::Array(
        form.pairs
            .iter()
            .map(|p| {
                json!({
                    "block": p.block,
                    "partner": p.partner,
                    "d": cx(p.eigenvalue),
                    "length": p.length,
                    "c": p.c_value(),
                    "c_prime": cx(p.cp_value()),
                    "phase": cx(p.phase),
                    "beta": p.beta.iter().map(|&z| cx(z)).collect::<Vec<_>>(),
                    "beta_prime": p.beta_prime.iter().map(|&z| cx(z)).collect::<Vec<_>>(),
                    "zero_eigenvalue": p.zero_eigenvalue,
                    "unresolved": p.unresolved,
                })
            })
            .collect(),
    )
}

fn residual_table(r: &CanonicalReport) -> Value {
    json!({
        "jordan": r.jordan_residual,
        "c_adjoint": r.c_residual,
        "c_adjoint_rel": r.c_residual_rel,
        "c_prime": r.cp_residual,
        "c_prime_rel": r.cp_residual_rel,
        "beta_constraint": r.beta_constraint,
        "convention": r.convention_deviation,
        "symmetry": r.symmetry,
        "skew_diagonal": r.skew_diagonal,
        "phase": r.phase,
    })
}

fn flags(form: &PairedCanonicalForm) -> Value {
    json!({
        "ill_conditioned": form.ill_conditioned,
        "null_sector_dim": form.null_sector_dimension(),
        "zero_eigenvalue_pairs": form.pairs.iter().filter(|p| p.zero_eigenvalue).count(),
        "unresolved_pairs": form.pairs.iter().filter(|p| p.unresolved).count(),
    })
}

// A well-conditioned form that misses a tolerance is a failure; an
// ill-conditioned one is reported with its flag.
fn check_value(report: &CanonicalReport, form: &PairedCanonicalForm, tol: f64) -> Result<Value, Failure> {
    let failing = report.failing_invariant(tol);
    if let (Some(name), false) = (failing, form.ill_conditioned) {
        return Err(Failure::Theorem(format!(
            "[{name}] canonical form misses tolerance {tol:e} (residuals: {report:?})"
        )));
    }
    Ok(json!({ "passed": failing.is_none(), "failing_invariant": failing }))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn canonize(a: &CanonizeArgs) -> Result<Value, Failure> {
    let loaded = load_pair(&a.pair)?;
    let form = canonical_pair_form(&loaded.c, &loaded.cp, a.convention, &loaded.tols)?;
    let report = verify_canonical(&loaded.c, &loaded.cp, &form)?;
    let check = check_value(&report, &form, loaded.tols.residual)?;

    let mut outputs = Map::new();
    if let Some(path) = &a.save_form {
        write_file(path, &FormFile::from_form(&form).render())?;
        outputs.insert("form".into(), json!(path.display().to_string()));
    }
    if let Some(path) = &a.save_w {
        MatrixFile::from_matrix(&form.w, Some("W")).write(path)?;
        outputs.insert("w".into(), json!(path.display().to_string()));
    }

    let mut m = header("canonize", &loaded);
    m.insert("convention".into(), json!(form.convention.to_string()));
    m.insert(
        "structure".into(),
        json!(if form.is_diagonalizable() {
            "diagonalizable"
        } else {
            "defective"
        }),
    );
    m.insert("blocks".into(), block_table(&form));
    m.insert("pairs".into(), pair_table(&form));
    m.insert("residuals".into(), residual_table(&report));
    m.insert("condition".into(), json!(form.condition));
    m.insert("flags".into(), flags(&form));
    m.insert("check".into(), check);
    if !outputs.is_empty() {
        m.insert("outputs".into(), Value::Object(outputs));
    }
    Ok(Value::Object(m))
}

fn overlap(a: &PairArgs) -> Result<Value, Failure> {
    let loaded = load_pair(a)?;
    let r = overlap_with(&loaded.c, &loaded.cp, &loaded.tols)?;
    let mut m = header("overlap", &loaded);
    m.insert("overlap".into(), cx(r.value));
    m.insert(
        "factors".into(),
        Value::Array(
            r.per_pair_factors
                .iter()
                .map(|f| json!({ "d": cx(f.eigenvalue), "length": f.length, "factor": cx(f.factor) }))
                .collect(),
        ),
    );
    m.insert(
        "determinant_check".into(),
        json!({
            "det_one_plus_m": cx(r.determinant),
            "overlap_squared": cx(r.value * r.value),
            "relative_discrepancy": r.determinant_discrepancy,
        }),
    );
    m.insert("condition".into(), json!(r.condition));
    m.insert(
        "flags".into(),
        json!({
            "ill_conditioned": r.ill_conditioned,
            "orthogonal": r.orthogonal,
            "null_sector_dim": r.null_sector_dimension,
        }),
    );
    Ok(Value::Object(m))
}

fn density(a: &DensityArgs) -> Result<Value, Failure> {
    let loaded = load_pair(&a.pair)?;
    let rho = transition_density_with(&loaded.c, &loaded.cp, loaded.tols.rank)?;
    let trace = rho.trace();
    let block_trace = overlap_with(&loaded.c, &loaded.cp, &loaded.tols)
        .ok()
        .map(|r| r.block_trace());
    let file = MatrixFile::from_matrix(&rho, Some("rho"))
        .with_metadata("c_sha256", loaded.inputs["c"]["sha256"].clone())
        .with_metadata("cp_sha256", loaded.inputs["cp"]["sha256"].clone());
    let rendered = file.render();
    write_file(&a.out, &rendered)?;
    let mut m = header("density", &loaded);
    m.insert(
        "output".into(),
        json!({ "path": a.out.display().to_string(), "sha256": digest(rendered.as_bytes()) }),
    );
    m.insert("trace".into(), cx(trace));
    m.insert("block_trace".into(), block_trace.map(cx).unwrap_or(Value::Null));
    m.insert(
        "trace_discrepancy".into(),
        block_trace.map(|b| json!((b - trace).norm())).unwrap_or(Value::Null),
    );
    Ok(Value::Object(m))
}

fn jordan(a: &PairArgs) -> Result<Value, Failure> {
    let loaded = load_pair(a)?;
    let mat = loaded
        .c
        .adjoint_product(&loaded.cp)
        .map_err(|e| Failure::Input(e.to_string()))?;
    let d = jordan_decompose(&mat, loaded.tols.cluster, loaded.tols.rank)?;
    let mut m = header("jordan", &loaded);
    m.insert(
        "structure".into(),
        json!(if d.is_diagonalizable() {
            "diagonalizable"
        } else {
            "defective"
        }),
    );
    m.insert(
        "blocks".into(),
        Value::Array(
            d.blocks
                .iter()
                .map(|b| json!({ "id": b.id, "d": cx(b.eigenvalue), "length": b.length, "start": b.start }))
                .collect(),
        ),
    );
    m.insert("residual".into(), json!(d.residual));
    m.insert("condition_w".into(), json!(condition_number(&d.w)));
    Ok(Value::Object(m))
}

fn example(a: &ExampleArgs) -> Result<Value, Failure> {
    if !(a.a_re.is_finite() && a.a_im.is_finite()) {
        return Err(Failure::Input("a must be finite".into()));
    }
    let av = Complex64::new(a.a_re, a.a_im);
    let (c, cp) = bcs::defective_example(av);
    std::fs::create_dir_all(&a.out_dir).map_err(|e| Failure::Input(format!("{}: {e}", a.out_dir.display())))?;
    let mut files = Map::new();
    for (name, label, mat) in [("C.json", "C", &c), ("Cp.json", "C'", &cp)] {
        let text = MatrixFile::from_matrix(mat.matrix(), Some(label))
            .with_metadata("generator", json!("defective-example"))
            .with_metadata("a", cx(av))
            .render();
        let path = a.out_dir.join(name);
        write_file(&path, &text)?;
        files.insert(
            label.to_owned(),
            json!({ "path": path.display().to_string(), "sha256": digest(text.as_bytes()) }),
        );
    }
    Ok(json!({
        "command": "example",
        "a": cx(av),
        "files": files,
    }))
}

#[derive(Debug, Deserialize)]
struct SpecFile {
    pairs: Vec<SpecPair>,
    #[serde(default)]
    relaxed: bool,
}

#[derive(Debug, Deserialize)]
struct SpecPair {
    c: f64,
    #[serde(default = "unit_phase")]
    s: [f64; 2],
}

fn unit_phase() -> [f64; 2] {
    [1.0, 0.0]
}

fn gen_bcs(a: &GenBcsArgs) -> Result<Value, Failure> {
    let (pairs, relaxed) = match &a.spec {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            let spec: SpecFile = serde_json::from_str(&text)
                .map_err(|e| Failure::Input(format!("{}: malformed spec: {e}", path.display())))?;
            let pairs = spec
                .pairs
                .iter()
                .map(|p| BcsPair {
                    c: p.c,
                    s: Complex64::new(p.s[0], p.s[1]),
                })
                .collect::<Vec<_>>();
            (pairs, spec.relaxed || a.relaxed)
        }
        None => {
            let angles: Vec<f64> = match a.s_angle.len() {
                0 => vec![0.0; a.c.len()],
                1 => vec![a.s_angle[0]; a.c.len()],
                k if k == a.c.len() => a.s_angle.clone(),
                k => {
                    return Err(Failure::Input(format!(
                        "--s-angle has {k} values for {} amplitudes",
                        a.c.len()
                    )))
                }
            };
            let pairs =
                a.c.iter()
                    .zip(angles)
                    .map(|(&c, t)| BcsPair {
                        c,
                        s: Complex64::from_polar(1.0, t),
                    })
                    .collect();
            (pairs, a.relaxed)
        }
    };
    let spec = if relaxed {
        BcsSpec::relaxed(pairs)?
    } else {
        BcsSpec::new(pairs)?
    };
    let rotation = a.seed.map(|seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        bcs::random_unitary(&mut rng, spec.modes())
    });
    let c = bcs::build_bcs_matrix(&spec, rotation.as_ref())?;
    let file = MatrixFile::from_matrix(c.matrix(), Some("C"))
        .with_metadata("generator", json!("bcs"))
        .with_metadata("c", json!(spec.pairs().iter().map(|p| p.c).collect::<Vec<_>>()))
        .with_metadata("s", json!(spec.pairs().iter().map(|p| pair(p.s)).collect::<Vec<_>>()))
        .with_metadata("relaxed", json!(spec.is_relaxed()))
        .with_metadata("seed", json!(a.seed));
    let text = file.render();
    write_file(&a.out, &text)?;
    Ok(json!({
        "command": "gen-bcs",
        "pairs": spec.pairs().len(),
        "dim": spec.modes(),
        "seed": a.seed,
        "output": { "path": a.out.display().to_string(), "sha256": digest(text.as_bytes()) },
    }))
}

fn verify(a: &VerifyArgs) -> Result<Value, Failure> {
    let loaded = load_pair(&a.pair)?;
    let p = a.form.display().to_string();
    let bytes = std::fs::read(&a.form).map_err(|e| Failure::Input(format!("{p}: {e}")))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| Failure::Input(format!("{p}: {e}")))?;
    let form = FormFile::parse(text, &p)?
        .to_form()
        .map_err(|e| Failure::Input(format!("{p}: {e}")))?;
    if form.dim() != loaded.c.dim() {
        return Err(Failure::Input(format!(
            "dimension mismatch: form is {0}x{0}, matrices are {1}x{1}",
            form.dim(),
            loaded.c.dim()
        )));
    }
    let report = verify_canonical(&loaded.c, &loaded.cp, &form)?;
    let check = check_value(&report, &form, loaded.tols.residual)?;
    let mut m = header("verify", &loaded);
    m.insert("form".into(), json!({ "path": p, "sha256": digest(&bytes) }));
    m.insert("convention".into(), json!(form.convention.to_string()));
    m.insert("residuals".into(), residual_table(&report));
    m.insert("flags".into(), flags(&form));
    m.insert("check".into(), check);
    Ok(Value::Object(m))
}
