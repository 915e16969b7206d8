//! Acceptance criteria 1 to 9, one line each.
//!
//! Runs as a plain binary so the lines show up in `cargo test` output.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nearconvex::duality::{fenchel_duality, lagrange_cone_duality};
use nearconvex::plfunc::PolyCone;
use nearconvex::rational::int;
use nearconvex::{Constraint, Extended, HPoly, NCSet, PLFunction, RMatrix, SVMap};
use nearconvex_oracle::suite::{mutation_targets, theorem_suite, theorem_suite_mutated, Mutation, SuiteReport};

const SEED: u64 = 20240611;

type Criterion = (&'static str, fn(&mut Verdict) -> String);

struct Verdict {
    ok: bool,
    notes: Vec<String>,
}

impl Verdict {
    fn new() -> Verdict {
        Verdict { ok: true, notes: vec![] }
    }

    fn check(&mut self, ok: bool, note: impl Into<String>) {
        if !ok {
            self.ok = false;
            self.notes.push(note.into());
        }
    }

    /// Runs a suite and requires every instance to pass within `limit`.
    fn suite(&mut self, id: &str, count: usize, limit: Duration) -> SuiteReport {
        let t = Instant::now();
        let r = theorem_suite(id, count, SEED).expect("registered suite");
        let dt = t.elapsed();
        let first = r.failures.first().map(|f| format!(" (seed {}: {})", f.seed, f.detail)).unwrap_or_default();
        self.check(r.all_pass(), format!("{id}: {}/{} pass{first}", r.passes, r.count));
        self.check(dt <= limit, format!("{id}: took {:.1}s, limit {}s", dt.as_secs_f64(), limit.as_secs()));
        r
    }
}

fn suites(v: &mut Verdict, ids: &[&str]) -> String {
    let mut total = 0;
    for id in ids {
        total += v.suite(id, 100, Duration::from_secs(300)).passes;
    }
    format!("{total}/{} instances over {} suites", 100 * ids.len(), ids.len())
}

fn criterion1(v: &mut Verdict) -> String {
    let r = v.suite("prop2.1", 200, Duration::from_secs(120));
    format!("{}/200 sets classified like the oracle", r.passes)
}

fn criterion2(v: &mut Verdict) -> String {
    suites(v, &["thm2.2a", "thm2.2c", "thm2.2d", "thm2.3", "thm2.4", "thm3.1", "cor3.2", "thm3.3", "cor3.4", "thm3.5", "cor3.6", "thm3.7", "thm3.8"])
}

fn criterion3(v: &mut Verdict) -> String {
    suites(v, &["thm4.1", "cor4.2", "cor4.3", "cor4.4", "thm4.5", "cor4.6", "cor4.7", "cor4.8", "thm4.9", "cor4.10"])
}

fn criterion4(v: &mut Verdict) -> String {
    suites(v, &["thm5.2", "lemma5.1"])
}

fn strip() -> SVMap {
    let c = |row: &[i64], rhs: i64| Constraint::new(row.iter().map(|&a| int(a)).collect(), int(rhs));
    let g = HPoly::new(2, vec![c(&[1, 0], 2), c(&[-1, 0], 0), c(&[1, -1], 0), c(&[-1, 1], 1)], vec![]);
    SVMap::from_closed_graph(1, 1, &g).unwrap()
}

fn criterion5(v: &mut Verdict) -> String {
    let s = suites(v, &["thm5.3"]);
    // μ(x) = x + δ_[0, 2] from f(x, y) = y over F(x) = [x, x + 1]
    let inst = nearconvex::variational::build_ovf(&PLFunction::linear(&[int(0), int(1)], &int(0)), &strip()).unwrap();
    let at1 = inst.ovf_subdifferential(&[int(1)], &[int(1)]).unwrap();
    v.check(at1.equal && at1.lhs.same_set(&HPoly::point(&[int(1)])), "∂μ(1) ≠ {1}");
    let at0 = inst.ovf_subdifferential(&[int(0)], &[int(0)]).unwrap();
    let half_line = HPoly::new(1, vec![Constraint::new(vec![int(1)], int(1))], vec![]);
    v.check(at0.equal && at0.lhs.same_set(&half_line), "∂μ(0) ≠ (−∞, 1]");
    format!("{s}; worked example ∂μ(1) = {{1}}, ∂μ(0) = (−∞, 1]")
}

fn criterion6(v: &mut Verdict) -> String {
    suites(v, &["thm6.1", "prop6.2", "thm6.3", "cor6.4", "thm6.6", "thm6.7", "ex6.8"])
}

fn abs_shift(s: i64) -> PLFunction {
    let everywhere = NCSet::open(&HPoly::universe(1));
    PLFunction::max_affine(1, &[(vec![int(1)], int(-s)), (vec![int(-1)], int(s))], &everywhere).unwrap()
}

fn criterion7(v: &mut Verdict) -> String {
    let s = suites(v, &["weak-duality", "cor7.2", "thm7.3", "lemma7.4", "cor7.5", "thm7.6", "thm7.8", "thm7.1b"]);
    let one = Extended::Finite(int(1));
    // min x subject to 1 − x ∈ −R_+ over [0, 3]
    let r = lagrange_cone_duality(
        &PLFunction::linear(&[int(1)], &int(0)),
        &NCSet::from_closed(&HPoly::cube(1, &int(0), &int(3))),
        &RMatrix::from_rows(vec![vec![int(-1)]], 1),
        &[int(1)],
        &PolyCone::orthant(1),
    )
    .unwrap();
    v.check(r.v == one && r.v_d == one && r.verdict(), format!("Lagrange x ≥ 1: V = {}, V_d = {}", r.v, r.v_d));
    let r = fenchel_duality(&abs_shift(0), &abs_shift(1), &RMatrix::identity(1)).unwrap();
    v.check(r.v == one && r.v_d == one && r.verdict(), format!("|x| + |x − 1|: V = {}, V_d = {}", r.v, r.v_d));
    format!("{s}; worked instances V = V_d = 1")
}

fn criterion8(v: &mut Verdict) -> String {
    let ids = ["prop2.1", "thm3.7", "cor4.8", "thm5.3", "thm6.3", "thm7.6", "weak-duality"];
    for id in ids {
        let a = theorem_suite(id, 20, SEED).unwrap().to_json();
        let b = theorem_suite(id, 20, SEED).unwrap().to_json();
        let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| theorem_suite(id, 20, SEED).unwrap().to_json());
        v.check(a == b && a == serial, format!("{id}: reports differ between runs"));
    }
    format!("{} suites, three runs each, byte-identical JSON", ids.len())
}

fn criterion9(v: &mut Verdict) -> String {
    let mut caught = 0;
    let mut total = 0;
    for m in [Mutation::CorruptPiece, Mutation::CorruptConjugate] {
        for id in mutation_targets(m) {
            let r = theorem_suite_mutated(id, 100, SEED, m).unwrap();
            caught += r.count - r.passes;
            total += r.count;
            v.check(r.passes == 0, format!("{id} under {m:?}: {} of {} mutants undetected", r.passes, r.count));
        }
    }
    format!("{caught}/{total} mutants detected")
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("near-convexity recognition", criterion1),
        ("relative interior calculus", criterion2),
        ("nearly convex constructions", criterion3),
        ("optimal value functions", criterion4),
        ("subdifferential of the optimal value", criterion5),
        ("conjugate calculus", criterion6),
        ("duality", criterion7),
        ("determinism", criterion8),
        ("negative controls", criterion9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let mut v = Verdict::new();
        let t = Instant::now();
        let summary = run(&mut v);
        let status = if v.ok { "PASS" } else { "FAIL" };
        println!("criterion {} [{status}] {name}: {summary} ({:.1}s)", i + 1, t.elapsed().as_secs_f64());
        for n in &v.notes {
            println!("    {n}");
        }
        failed += usize::from(!v.ok);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
