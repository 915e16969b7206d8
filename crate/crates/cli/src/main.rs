//! `nearconvex` command-line front end.
//!
//! Every input is a JSON file with rationals as strings; every run prints one
//! JSON document. Exit codes: 0 success, 1 identity or assertion violated,
//! 2 usage or input error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nearconvex::conjugate;
use nearconvex::duality;
use nearconvex::variational::{self, build_ovf};
use nearconvex::{NCSet, PLFunction, RMatrix, RVector, Rational, SVMap};
use nearconvex_oracle::suite::{self, Mutation};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "nearconvex", version, about = "Exact calculus of nearly convex polyhedral objects")]
struct Cli {
    /// Check the relative interior identity behind set operations.
    #[arg(long, global = true)]
    certify: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Near-convexity diagnostic of a set.
    Check {
        set: PathBuf,
    },
    /// Relative interior of a nearly convex set.
    Ri {
        set: PathBuf,
    },
    /// Closure of a nearly convex set.
    Closure {
        set: PathBuf,
    },
    Member {
        set: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// `{A x + b : x ∈ Ω}`; the map file is `{"A": matrix, "b": vector}`.
    Image {
        set: PathBuf,
        map: PathBuf,
    },
    /// `{x : A x + b ∈ Ω}`.
    Preimage {
        set: PathBuf,
        map: PathBuf,
    },
    Intersect {
        a: PathBuf,
        b: PathBuf,
    },
    Product {
        a: PathBuf,
        b: PathBuf,
    },
    /// Restriction of a set-valued map to a set.
    Restrict {
        map: PathBuf,
        set: PathBuf,
    },
    #[command(subcommand)]
    Map(MapCmd),
    #[command(subcommand)]
    Ovf(OvfCmd),
    #[command(subcommand)]
    Conj(ConjCmd),
    /// Support function `σ_Ω(v)`.
    Support {
        set: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Normal cone of a set at a point.
    Ncone {
        set: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Coderivative `D*F(x, y)(v)`.
    Coderiv {
        map: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    #[command(subcommand)]
    Duality(DualityCmd),
    /// Runs a randomized theorem suite.
    Verify {
        theorem: String,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = ["none", "corrupt-piece", "corrupt-conjugate"], default_value = "none")]
        mutation: String,
    },
}

#[derive(Subcommand)]
enum MapCmd {
    Sum {
        f: PathBuf,
        g: PathBuf,
    },
    /// `G ∘ F`.
    Compose {
        f: PathBuf,
        g: PathBuf,
    },
    /// `F⁻¹(Θ)`.
    Inverse {
        map: PathBuf,
        set: PathBuf,
    },
    Eval {
        map: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

/// Instance files are `{"f": function, "F": map}`.
#[derive(Subcommand)]
enum OvfCmd {
    Eval {
        inst: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    Subdiff {
        inst: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    Solutions {
        inst: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    Conjugate {
        inst: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

#[derive(Subcommand)]
enum ConjCmd {
    /// `f*(w)`, or the whole conjugate without `--point`.
    Fn {
        f: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// `F*(u, v)`.
    Svm {
        map: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    Sum {
        f1: PathBuf,
        f2: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// `(g ∘ A)*(w)`; the matrix file is `{"A": matrix}`.
    Chain {
        g: PathBuf,
        matrix: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

#[derive(Subcommand)]
enum DualityCmd {
    /// `{"f": function, "n": primal dimension}`.
    General {
        inst: PathBuf,
    },
    /// `{"phi": function, "theta": set, "G": map}`.
    Lagrange {
        inst: PathBuf,
    },
    FenchelLagrange {
        inst: PathBuf,
    },
    /// `{"g": function, "h": function, "A": matrix}`.
    Fenchel {
        inst: PathBuf,
    },
}

#[derive(Deserialize)]
struct Affine {
    #[serde(rename = "A")]
    a: RMatrix,
    #[serde(default)]
    b: Option<RVector>,
}

#[derive(Deserialize)]
struct MatrixFile {
    #[serde(rename = "A")]
    a: RMatrix,
}

#[derive(Deserialize)]
struct OvfFile {
    f: PLFunction,
    #[serde(rename = "F")]
    map: SVMap,
}

#[derive(Deserialize)]
struct GeneralFile {
    f: PLFunction,
    n: usize,
}

#[derive(Deserialize)]
struct LagrangeFile {
    phi: PLFunction,
    theta: NCSet,
    #[serde(rename = "G")]
    g: SVMap,
}

#[derive(Deserialize)]
struct FenchelFile {
    g: PLFunction,
    h: PLFunction,
    #[serde(rename = "A")]
    a: RMatrix,
}

/// What a command produced: the JSON document and whether it upholds every
/// identity it checked.
struct Output {
    doc: Value,
    holds: bool,
}

impl Output {
    fn ok(doc: Value) -> Output {
        Output { doc, holds: true }
    }

    fn checked(doc: Value, holds: bool) -> Output {
        Output { doc, holds }
    }
}

type Run = Result<Output, String>;

fn read<T: DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn point(s: &str) -> Result<RVector, String> {
    if s.trim().is_empty() {
        return Ok(vec![]);
    }
    s.split(',').map(|t| t.trim().parse::<Rational>().map_err(|e| format!("bad rational `{t}`: {e}"))).collect()
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn dims(expected: usize, got: usize, what: &str) -> Result<(), String> {
    if expected == got {
        Ok(())
    } else {
        Err(format!("{what}: expected dimension {expected}, got {got}"))
    }
}

/// Compares `ri out` with the formula `rhs`; adds `certified` and, on
/// failure, both sides.
fn certify(doc: &mut Value, certify: bool, out: &NCSet, rhs: impl FnOnce() -> Result<NCSet, String>) -> Result<bool, String> {
    if !certify {
        return Ok(true);
    }
    let lhs = ri(out)?;
    let rhs = rhs()?;
    let ok = lhs.same_points(&rhs);
    doc["certified"] = json!(ok);
    if !ok {
        doc["ri_lhs"] = to_value(&lhs);
        doc["ri_rhs"] = to_value(&rhs);
    }
    Ok(ok)
}

fn ri(s: &NCSet) -> Result<NCSet, String> {
    s.ri_set().map_err(err)
}

fn affine(path: &Path, dim: usize) -> Result<(RMatrix, RVector), String> {
    let m: Affine = read(path)?;
    dims(dim, m.a.ncols(), "matrix columns")?;
    let b = m.b.unwrap_or_else(|| vec![Rational::zero(); m.a.nrows()]);
    dims(m.a.nrows(), b.len(), "shift")?;
    Ok((m.a, b))
}

fn run(cli: Cli) -> Run {
    let cert = cli.certify;
    match cli.cmd {
        Cmd::Check { set } => {
            let s: NCSet = read(&set)?;
            Ok(Output::ok(to_value(&s.is_nearly_convex().map_err(err)?)))
        }
        Cmd::Ri { set } => Ok(Output::ok(json!({ "set": ri(&read(&set)?)? }))),
        Cmd::Closure { set } => {
            let s: NCSet = read(&set)?;
            Ok(Output::ok(to_value(&s.closure().map_err(err)?)))
        }
        Cmd::Member { set, point: p } => {
            let s: NCSet = read(&set)?;
            let x = point(&p)?;
            dims(s.dim(), x.len(), "point")?;
            Ok(Output::ok(json!({ "member": s.contains(&x) })))
        }
        Cmd::Image { set, map } => {
            let s: NCSet = read(&set)?;
            let (a, b) = affine(&map, s.dim())?;
            let out = s.affine_image(&a, &b);
            let mut doc = json!({ "set": out });
            let ok = certify(&mut doc, cert, &out, || Ok(ri(&s)?.affine_image(&a, &b)))?;
            Ok(Output::checked(doc, ok))
        }
        Cmd::Preimage { set, map } => {
            let s: NCSet = read(&set)?;
            let m: Affine = read(&map)?;
            dims(s.dim(), m.a.nrows(), "matrix rows")?;
            let b = m.b.unwrap_or_else(|| vec![Rational::zero(); m.a.nrows()]);
            let (out, qc) = s.affine_preimage(&m.a, &b).map_err(err)?;
            let mut doc = json!({ "set": out, "qc": qc });
            let ok = certify(&mut doc, cert, &out, || Ok(ri(&s)?.affine_preimage(&m.a, &b).map_err(err)?.0))?;
            Ok(Output::checked(doc, ok))
        }
        Cmd::Intersect { a, b } => {
            let (s1, s2): (NCSet, NCSet) = (read(&a)?, read(&b)?);
            dims(s1.dim(), s2.dim(), "second set")?;
            let (out, qc) = s1.intersect(&s2).map_err(err)?;
            let mut doc = json!({ "set": out, "qc": qc });
            let ok = certify(&mut doc, cert, &out, || Ok(ri(&s1)?.intersect_pointwise(&ri(&s2)?, true)))?;
            Ok(Output::checked(doc, ok))
        }
        Cmd::Product { a, b } => {
            let (s1, s2): (NCSet, NCSet) = (read(&a)?, read(&b)?);
            let out = s1.product(&s2);
            let mut doc = json!({ "set": out });
            let ok = certify(&mut doc, cert, &out, || Ok(ri(&s1)?.product(&ri(&s2)?)))?;
            Ok(Output::checked(doc, ok))
        }
        Cmd::Restrict { map, set } => {
            let f: SVMap = read(&map)?;
            let s: NCSet = read(&set)?;
            let (out, qc) = f.restrict(&s).map_err(err)?;
            let mut doc = json!({ "map": out, "qc": qc });
            let total = f.n + f.p;
            let ok = certify(&mut doc, cert, &out.graph, || {
                let coords: Vec<usize> = (0..f.n).collect();
                let base = NCSet::single(f.ri_graph().map_err(err)?);
                Ok(base.intersect_pointwise(&ri(&s)?.cylinder(total, &coords), true))
            })?;
            Ok(Output::checked(doc, ok))
        }
        Cmd::Map(m) => run_map(m),
        Cmd::Ovf(o) => run_ovf(o),
        Cmd::Conj(c) => run_conj(c),
        Cmd::Support { set, point: p } => {
            let s: NCSet = read(&set)?;
            let v = point(&p)?;
            dims(s.dim(), v.len(), "direction")?;
            Ok(Output::ok(to_value(&conjugate::support(&s, &v).map_err(err)?)))
        }
        Cmd::Ncone { set, point: p } => {
            let s: NCSet = read(&set)?;
            Ok(Output::ok(to_value(&variational::normal_cone(&s, &point(&p)?).map_err(err)?)))
        }
        Cmd::Coderiv { map, x, y, v } => {
            let f: SVMap = read(&map)?;
            let d = variational::coderivative(&f, &point(&x)?, &point(&y)?, &point(&v)?).map_err(err)?;
            Ok(Output::ok(json!({ "set": d })))
        }
        Cmd::Duality(d) => run_duality(d),
        Cmd::Verify { theorem, count, seed, mutation } => {
            let m = match mutation.as_str() {
                "corrupt-piece" => Mutation::CorruptPiece,
                "corrupt-conjugate" => Mutation::CorruptConjugate,
                _ => Mutation::None,
            };
            let r = suite::theorem_suite_mutated(&theorem, count, seed, m).map_err(err)?;
            Ok(Output::checked(to_value(&r), r.all_pass()))
        }
    }
}

fn run_map(m: MapCmd) -> Run {
    match m {
        MapCmd::Sum { f, g } => {
            let (f, g): (SVMap, SVMap) = (read(&f)?, read(&g)?);
            let (out, qc) = f.sum(&g).map_err(err)?;
            Ok(Output::ok(json!({ "map": out, "qc": qc })))
        }
        MapCmd::Compose { f, g } => {
            let (f, g): (SVMap, SVMap) = (read(&f)?, read(&g)?);
            let (out, qc) = f.compose(&g).map_err(err)?;
            Ok(Output::ok(json!({ "map": out, "qc": qc })))
        }
        MapCmd::Inverse { map, set } => {
            let f: SVMap = read(&map)?;
            let (out, qc) = f.inverse_image(&read(&set)?).map_err(err)?;
            Ok(Output::ok(json!({ "set": out, "qc": qc })))
        }
        MapCmd::Eval { map, point: p } => {
            let f: SVMap = read(&map)?;
            Ok(Output::ok(json!({ "set": f.eval(&point(&p)?).map_err(err)? })))
        }
    }
}

fn ovf(path: &Path) -> Result<variational::OVFInstance, String> {
    let file: OvfFile = read(path)?;
    build_ovf(&file.f, &file.map).map_err(err)
}

fn run_ovf(o: OvfCmd) -> Run {
    match o {
        OvfCmd::Eval { inst, point: p } => {
            let i = ovf(&inst)?;
            let x = point(&p)?;
            dims(i.n(), x.len(), "point")?;
            Ok(Output::ok(json!({ "value": i.mu.eval(&x).map_err(err)?, "qc": i.qc })))
        }
        OvfCmd::Subdiff { inst, x, y } => {
            let r = ovf(&inst)?.ovf_subdifferential(&point(&x)?, &point(&y)?).map_err(err)?;
            Ok(Output::checked(to_value(&r), r.equal))
        }
        OvfCmd::Solutions { inst, point: p } => {
            let i = ovf(&inst)?;
            Ok(Output::ok(json!({ "set": i.solution_map(&point(&p)?).map_err(err)? })))
        }
        OvfCmd::Conjugate { inst, point: p } => {
            let r = conjugate::ovf_conjugate(&ovf(&inst)?, &point(&p)?).map_err(err)?;
            Ok(Output::checked(to_value(&r), r.verdict))
        }
    }
}

fn run_conj(c: ConjCmd) -> Run {
    match c {
        ConjCmd::Fn { f, point: None } => {
            let f: PLFunction = read(&f)?;
            Ok(Output::ok(json!({ "conjugate": conjugate::fenchel(&f).map_err(err)? })))
        }
        ConjCmd::Fn { f, point: Some(p) } => {
            let f: PLFunction = read(&f)?;
            let w = point(&p)?;
            dims(f.n, w.len(), "point")?;
            Ok(Output::ok(json!({ "value": conjugate::fenchel_value(&f, &w).map_err(err)? })))
        }
        ConjCmd::Svm { map, u, v } => {
            let f: SVMap = read(&map)?;
            Ok(Output::ok(to_value(&conjugate::svm_conjugate(&f, &point(&u)?, &point(&v)?).map_err(err)?)))
        }
        ConjCmd::Sum { f1, f2, point: p } => {
            let r = conjugate::conjugate_sum(&read(&f1)?, &read(&f2)?, &point(&p)?).map_err(err)?;
            Ok(Output::checked(to_value(&r), r.verdict))
        }
        ConjCmd::Chain { g, matrix, point: p } => {
            let a: MatrixFile = read(&matrix)?;
            let r = conjugate::conjugate_chain(&read(&g)?, &a.a, &point(&p)?).map_err(err)?;
            Ok(Output::checked(to_value(&r), r.verdict))
        }
    }
}

fn run_duality(d: DualityCmd) -> Run {
    let r = match d {
        DualityCmd::General { inst } => {
            let i: GeneralFile = read(&inst)?;
            duality::general_duality(&i.f, i.n)
        }
        DualityCmd::Lagrange { inst } => {
            let i: LagrangeFile = read(&inst)?;
            duality::lagrange_duality(&i.phi, &i.theta, &i.g)
        }
        DualityCmd::FenchelLagrange { inst } => {
            let i: LagrangeFile = read(&inst)?;
            duality::fenchel_lagrange_duality(&i.phi, &i.theta, &i.g)
        }
        DualityCmd::Fenchel { inst } => {
            let i: FenchelFile = read(&inst)?;
            duality::fenchel_duality(&i.g, &i.h, &i.a)
        }
    }
    .map_err(err)?;
    Ok(Output::checked(to_value(&r), r.verdict()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.doc).expect("serializable");
            // a closed pipe on stdout is not an error of the computation
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if out.holds {
                ExitCode::SUCCESS
            } else {
                eprintln!("identity violated");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
