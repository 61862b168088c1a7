//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

use mltt_core::declarative::{mutate, validate, Derivation, Judgment, Rule};
use mltt_core::harness::{diff_run, run_suite, GenConfig, Suite, PROP_FUEL};
use mltt_core::surface::{parse_derivations, print};
use mltt_core::{Subst, Term};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DIFF_QUERIES: usize = 1000;
const DIFF_MAX_EXHAUSTED: f64 = 0.01;
const DIFF_TIME_LIMIT: Duration = Duration::from_secs(60);
const SUBJECT_REDUCTION_SAMPLES: usize = 1000;
const CANONICITY_SAMPLES: usize = 200;
const CANONICITY_FUEL: u64 = 1_000_000;
const CLASSIFICATION_SAMPLES: usize = 500;
const STRENGTHENING_SAMPLES: usize = 1000;
const CLOSURE_SAMPLES: usize = 500;
const MIN_DERIVATIONS_PER_RULE: usize = 2;
const MUTANTS_PER_DERIVATION: u64 = 20;
const MIN_MUTANT_REJECTION: f64 = 0.95;
const SUBSTITUTION_TERMS: usize = 10_000;
const FUEL_MONOTONICITY_SAMPLES: usize = 500;
const OMEGA_FUELS: [u64; 5] = [0, 1, 10, 1000, 100_000];
const TRACE_FUEL: u64 = 1000;

const ALGOS: [&str; 2] = ["typed", "untyped"];

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn mltt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mltt"))
        .args(args)
        .stdin(Stdio::null())
        .output()
        .expect("the mltt binary runs")
}

fn exit_code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

fn query(algo: &str, q: &str) -> Output {
    mltt(&["--algo", algo, "-e", q])
}

// 1

fn differential() -> Verdict {
    let start = Instant::now();
    let r = diff_run(DIFF_QUERIES, &GenConfig::default());
    let took = start.elapsed();
    let summary = format!(
        "{} queries, {} agreements, {} disagreements, {} fuel-exhausted ({:.2}%), {:.1}s",
        r.total,
        r.agreements,
        r.disagreements.len(),
        r.fuel_exhausted,
        100.0 * r.exhausted_rate(),
        took.as_secs_f64()
    );
    ensure(r.disagreements.is_empty(), || {
        let d = &r.disagreements[0];
        format!("{summary}; first: {} (typed {}, untyped {})", d.query, d.typed, d.untyped)
    })?;
    ensure(r.exhausted_rate() <= DIFF_MAX_EXHAUSTED, || summary.clone())?;
    ensure(took < DIFF_TIME_LIMIT, || summary.clone())?;
    ensure(r.total == r.agreements + r.disagreements.len() + r.fuel_exhausted, || {
        format!("counts do not add up: {summary}")
    })?;
    Ok(summary)
}

// 2

const NEUTRAL_RULES: [&str; 9] = [
    "NePos", "NeuNeu", "NVar", "NApp", "NSig1", "NSig2", "NNatElim", "NEmptyElim", "NIdInd",
];
const EXPANSION_RULES: [&str; 6] = ["FunExp", "CSigEta", "CLamNe", "CNeLam", "CPairNe", "CNePair"];

fn traced(algo: &str) -> Result<Vec<String>, String> {
    let file = manifest_dir().join("tests/golden/eta_query.mltt");
    let fuel = TRACE_FUEL.to_string();
    let o = mltt(&["--algo", algo, "--fuel", &fuel, "--trace", file.to_str().unwrap()]);
    ensure(exit_code(&o) == 0, || format!("{algo}: exit {}", exit_code(&o)))?;
    let got = String::from_utf8_lossy(&o.stderr).into_owned();
    let golden = std::fs::read_to_string(manifest_dir().join(format!("tests/golden/{algo}.trace")))
        .map_err(|e| format!("{algo} golden file: {e}"))?;
    ensure(got == golden, || format!("{algo} trace differs from the golden file:\n{got}"))?;
    Ok(got.lines().map(|l| l.trim().to_string()).collect())
}

fn trace_shapes() -> Result<(Vec<String>, Vec<String>), String> {
    let typed = traced("typed")?;
    let untyped = traced("untyped")?;
    ensure(typed.first().map(String::as_str) == Some("TTmRed"), || {
        "typed trace does not start with TTmRed".into()
    })?;
    let exp = typed.iter().position(|r| r == "FunExp");
    let neu = typed.iter().position(|r| NEUTRAL_RULES.contains(&r.as_str()));
    ensure(matches!((exp, neu), (Some(e), Some(n)) if e < n), || {
        "typed trace has no FunExp before its first neutral rule".into()
    })?;
    let nn = untyped.iter().position(|r| r == "NeuNeu");
    let var = untyped.iter().rposition(|r| r == "UVar");
    ensure(matches!((nn, var), (Some(a), Some(b)) if a < b), || {
        "untyped trace lacks NeuNeu followed by UVar".into()
    })?;
    ensure(!untyped.iter().any(|r| EXPANSION_RULES.contains(&r.as_str())), || {
        "untyped trace contains an expansion rule".into()
    })?;
    Ok((typed, untyped))
}

fn trace_divergence() -> Verdict {
    let (typed, untyped) = trace_shapes()?;
    Ok(format!(
        "golden traces match: typed {} rules (FunExp first), untyped {} rules ({})",
        typed.len(),
        untyped.len(),
        untyped.join(" > ")
    ))
}

// 3, 4, 5, 8, 9, 12

fn suite(s: Suite, n: usize) -> Result<String, String> {
    let r = run_suite(s, n, &GenConfig::default());
    let line = format!("{} samples, {} failures, {} vacuous", r.total, r.failures.len(), r.vacuous);
    ensure(r.failures.is_empty(), || format!("{line}\n{r}"))?;
    Ok(line)
}

fn subject_reduction() -> Verdict {
    suite(Suite::SubjectReduction, SUBJECT_REDUCTION_SAMPLES)
}

fn canonicity() -> Verdict {
    ensure(PROP_FUEL == CANONICITY_FUEL, || format!("suite fuel is {PROP_FUEL}"))?;
    suite(Suite::Canonicity, CANONICITY_SAMPLES).map(|l| format!("{l}, fuel {CANONICITY_FUEL}"))
}

fn classification() -> Verdict {
    suite(Suite::Classification, CLASSIFICATION_SAMPLES)
}

fn strengthening() -> Verdict {
    suite(Suite::Strengthening, STRENGTHENING_SAMPLES)
}

fn closure() -> Verdict {
    let mut parts = Vec::new();
    for s in [Suite::Symmetry, Suite::Transitivity, Suite::Weakening] {
        parts.push(format!("{s}: {}", suite(s, CLOSURE_SAMPLES).map_err(|e| format!("{s}: {e}"))?));
    }
    Ok(parts.join("; "))
}

// 6

const PI_ETA: [&str; 10] = [
    r"conv (f : Nat -> Nat) |- f == \x:Nat. f x : Nat -> Nat",
    r"conv (f : Nat -> Nat -> Nat) |- f == \x:Nat. f x : Nat -> Nat -> Nat",
    r"conv (f : Nat -> Nat -> Nat) |- f == \x:Nat. \y:Nat. f x y : Nat -> Nat -> Nat",
    r"conv (A : U) (f : A -> A) |- f == \x:A. f x : A -> A",
    r"conv (B : Nat -> U) (f : (n : Nat) -> B n) |- f == \n:Nat. f n : (n : Nat) -> B n",
    r"conv (f : Empty -> Nat) |- \x:Empty. f x == f : Empty -> Nat",
    r"conv (f : (Nat -> Nat) -> Nat) |- f == \g:Nat -> Nat. f g : (Nat -> Nat) -> Nat",
    r"conv (f : U -> U) |- f == \X:U. f X : U -> U",
    r"conv (f : (Nat * Nat) -> Nat) |- f == \p:Nat * Nat. f p : (Nat * Nat) -> Nat",
    r"conv (a : Nat) (f : Id Nat a a -> Nat) |- f == \e:Id Nat a a. f e : Id Nat a a -> Nat",
];

const SIG_ETA: [&str; 10] = [
    r"conv (p : Nat * Nat) |- p == pair {x:Nat. Nat} (fst p, snd p) : Nat * Nat",
    r"conv (p : (x : Nat) * Id Nat x x) |- p == pair {x:Nat. Id Nat x x} (fst p, snd p) : (x : Nat) * Id Nat x x",
    r"conv (p : (Nat -> Nat) * Nat) |- p == pair {x:Nat -> Nat. Nat} (fst p, snd p) : (Nat -> Nat) * Nat",
    r"conv (A : U) (p : A * A) |- p == pair {x:A. A} (fst p, snd p) : A * A",
    r"conv (p : Nat * Nat * Nat) |- p == pair {x:Nat. Nat * Nat} (fst p, snd p) : Nat * Nat * Nat",
    r"conv (p : Nat * Nat * Nat) |- p == pair {x:Nat. Nat * Nat} (fst p, pair {y:Nat. Nat} (fst (snd p), snd (snd p))) : Nat * Nat * Nat",
    r"conv (p : U * Nat) |- p == pair {X:U. Nat} (fst p, snd p) : U * Nat",
    r"conv (B : Nat -> U) (p : (n : Nat) * B n) |- p == pair {n:Nat. B n} (fst p, snd p) : (n : Nat) * B n",
    r"conv (p : Nat * Empty) |- pair {x:Nat. Empty} (fst p, snd p) == p : Nat * Empty",
    r"conv (p : (Nat * Nat) * Nat) |- p == pair {x:Nat * Nat. Nat} (fst p, snd p) : (Nat * Nat) * Nat",
];

fn all_exit(queries: &[&str], want: i32) -> Result<(), String> {
    for q in queries {
        for algo in ALGOS {
            let o = query(algo, q);
            ensure(exit_code(&o) == want, || {
                format!(
                    "{algo}: exit {} (want {want}) on `{q}`: {}",
                    exit_code(&o),
                    String::from_utf8_lossy(&o.stdout).trim()
                )
            })?;
        }
    }
    Ok(())
}

fn eta_laws() -> Verdict {
    all_exit(&PI_ETA, 0)?;
    all_exit(&SIG_ETA, 0)?;
    trace_shapes()?;
    Ok(format!(
        "{} Pi and {} Sigma instances accepted by both; x == x at Pi accepted with distinct rule shapes",
        PI_ETA.len(),
        SIG_ETA.len()
    ))
}

// 7

const NEGATIVE: [&str; 20] = [
    r"conv |- zero == succ zero : Nat",
    r"conv |- succ zero == succ (succ zero) : Nat",
    r"conv (x : Nat) (y : Nat) |- x == y : Nat",
    r"conv (f : Nat -> Nat) (g : Nat -> Nat) |- f == g : Nat -> Nat",
    r"conv |- Nat -> Nat == Nat : U",
    r"conv |- Nat == Empty : U",
    r"conv |- Nat * Nat == Nat -> Nat : U",
    r"conv (x : Nat) |- x == zero : Nat",
    r"conv (x : Nat) |- succ x == x : Nat",
    r"conv |- \x:Nat. x == \x:Nat. zero : Nat -> Nat",
    r"conv |- pair {x:Nat. Nat} (zero, zero) == pair {x:Nat. Nat} (zero, succ zero) : Nat * Nat",
    r"conv (p : Nat * Nat) |- fst p == snd p : Nat",
    r"conv (f : Nat -> Nat) |- f zero == f (succ zero) : Nat",
    r"conv (A : U) (B : U) |- A == B : U",
    r"conv |- Id Nat zero zero == Id Nat zero (succ zero) : U",
    r"conv (x : Nat) |- natrec (y. Nat) zero (y z. z) x == x : Nat",
    r"conv (e : Empty) (f : Empty) |- emptyrec (x. Nat) e == emptyrec (x. Nat) f : Nat",
    r"conv |- (x : Nat) -> Nat == (x : Nat) -> Empty : U",
    r"conv (A : U) |- A -> A == A : U",
    r"conv (f : Nat -> Nat) |- f == \x:Nat. succ (f x) : Nat -> Nat",
];

fn negative() -> Verdict {
    all_exit(&NEGATIVE, 1)?;
    Ok(format!("{} pairs rejected (exit 1) by both", NEGATIVE.len()))
}

// 10

fn fixture_files() -> Vec<PathBuf> {
    let dir = manifest_dir().join("../core/fixtures");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .expect("fixture directory")
        .map(|e| e.expect("directory entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "drv"))
        .collect();
    files.sort();
    files
}

fn binders(g: &mltt_core::Context) -> (String, Vec<String>) {
    let names: Vec<String> = (0..g.len()).map(|k| format!("x{k}")).collect();
    let mut out = String::new();
    for (k, ty) in g.entries().iter().enumerate() {
        out.push_str(&format!("({} : {}) ", names[k], print(ty, &names[..k])));
    }
    (out, names)
}

fn rederive(ds: &[Derivation]) -> Result<usize, String> {
    let mut batch = String::new();
    let mut n = 0;
    for d in ds {
        for node in d.nodes() {
            if let Judgment::Typed(g, t, a) = &node.conclusion {
                let (ctx, names) = binders(g);
                batch.push_str(&format!("check {ctx}|- {} : {}\n", print(t, &names), print(a, &names)));
                n += 1;
            }
        }
    }
    let path = std::env::temp_dir().join(format!("mltt-acceptance-{}.mltt", std::process::id()));
    std::fs::write(&path, &batch).map_err(|e| e.to_string())?;
    let p = path.to_str().unwrap();
    for algo in ALGOS {
        let o = mltt(&["--algo", algo, "--fuel", "1000000", p]);
        ensure(exit_code(&o) == 0, || {
            let out = String::from_utf8_lossy(&o.stdout);
            let bad = out.lines().find(|l| *l != "accept").unwrap_or("").to_string();
            format!("{algo}: exit {} re-deriving typing judgments: {bad}", exit_code(&o))
        })?;
    }
    let _ = std::fs::remove_file(&path);
    Ok(n)
}

fn declarative_oracle() -> Verdict {
    let mut all = Vec::new();
    for f in fixture_files() {
        let q = format!("validate |- {}", f.display());
        let o = query("typed", &q);
        ensure(exit_code(&o) == 0, || {
            format!("{}: {}", f.display(), String::from_utf8_lossy(&o.stdout).trim())
        })?;
        let src = std::fs::read_to_string(&f).map_err(|e| e.to_string())?;
        let ds = parse_derivations(&src).map_err(|e| format!("{}: {e}", f.display()))?;
        all.extend(ds);
    }
    for (i, d) in all.iter().enumerate() {
        validate(d).map_err(|e| format!("derivation {i}: {e}"))?;
    }
    let mut per_rule: BTreeMap<&str, usize> = Rule::ALL.iter().map(|r| (r.name(), 0)).collect();
    for d in &all {
        let mut seen: Vec<Rule> = d.nodes().into_iter().map(|n| n.rule).collect();
        seen.sort_by_key(|r| r.name());
        seen.dedup();
        for r in seen {
            *per_rule.get_mut(r.name()).expect("every rule is listed") += 1;
        }
    }
    let thin: Vec<&str> = per_rule
        .iter()
        .filter(|(_, n)| **n < MIN_DERIVATIONS_PER_RULE)
        .map(|(r, _)| *r)
        .collect();
    ensure(thin.is_empty(), || format!("rules with fewer than {MIN_DERIVATIONS_PER_RULE} derivations: {thin:?}"))?;
    let (mut total, mut rejected) = (0usize, 0usize);
    for (i, d) in all.iter().enumerate() {
        for k in 0..MUTANTS_PER_DERIVATION {
            total += 1;
            if validate(&mutate(d, (i as u64) << 8 | k)).is_err() {
                rejected += 1;
            }
        }
    }
    let rate = rejected as f64 / total as f64;
    ensure(rate >= MIN_MUTANT_REJECTION, || format!("mutant rejection {:.2}%", 100.0 * rate))?;
    let typed = rederive(&all)?;
    Ok(format!(
        "{} derivations valid, {} rules each in >= {MIN_DERIVATIONS_PER_RULE}, {:.2}% of {total} mutants rejected, {typed} typing judgments re-derived by both",
        all.len(),
        Rule::ALL.len(),
        100.0 * rate
    ))
}

// 11

fn ref_shift(t: &Term, cutoff: usize, n: usize) -> Term {
    match t {
        Term::Var(i) if *i >= cutoff => Term::Var(i + n),
        Term::Var(_) => t.clone(),
        _ => t.map_children(|c, k| ref_shift(c, cutoff + k, n)),
    }
}

fn ref_subst(t: &Term, j: usize, s: &Term) -> Term {
    match t {
        Term::Var(i) if *i == j => ref_shift(s, 0, j),
        Term::Var(i) if *i > j => Term::Var(i - 1),
        Term::Var(_) => t.clone(),
        _ => t.map_children(|c, k| ref_subst(c, j + k, s)),
    }
}

fn ref_parallel(t: &Term, s: &Subst) -> Term {
    let k = s.explicit().len();
    let mut out = ref_shift(t, k, s.tail_shift());
    for (j, e) in s.explicit().iter().enumerate() {
        out = ref_subst(&out, 0, &ref_shift(e, 0, k - 1 - j));
    }
    out
}

fn random_term(rng: &mut ChaCha8Rng, depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..5) {
            0 => Term::Univ,
            1 => Term::Nat,
            2 => Term::Zero,
            3 => Term::Empty,
            _ => Term::Var(rng.gen_range(0..6)),
        };
    }
    let sub = |rng: &mut ChaCha8Rng| random_term(rng, depth - 1);
    match rng.gen_range(0..13) {
        0 => Term::pi(sub(rng), sub(rng)),
        1 => Term::lam(sub(rng), sub(rng)),
        2 => Term::app(sub(rng), sub(rng)),
        3 => Term::sig(sub(rng), sub(rng)),
        4 => Term::pair(sub(rng), sub(rng), sub(rng), sub(rng)),
        5 => Term::fst(sub(rng)),
        6 => Term::snd(sub(rng)),
        7 => Term::succ(sub(rng)),
        8 => Term::nat_elim(sub(rng), sub(rng), sub(rng), sub(rng)),
        9 => Term::empty_elim(sub(rng), sub(rng)),
        10 => Term::id(sub(rng), sub(rng), sub(rng)),
        11 => Term::refl(sub(rng), sub(rng)),
        _ => Term::id_elim(sub(rng), sub(rng), sub(rng), sub(rng), sub(rng)),
    }
}

fn random_subst(rng: &mut ChaCha8Rng) -> Subst {
    let k = rng.gen_range(0..4);
    let explicit = (0..k).map(|_| random_term(rng, 2)).collect();
    Subst::new(explicit, rng.gen_range(0..3))
}

fn substitution() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut failures: Vec<String> = Vec::new();
    for i in 0..SUBSTITUTION_TERMS {
        let t = random_term(&mut rng, 5);
        let u = random_term(&mut rng, 3);
        let (a, b, c) = (random_subst(&mut rng), random_subst(&mut rng), random_subst(&mut rng));
        let id = Subst::id();
        let laws = [
            ("identity", t.subst(&id) == t),
            ("left unit", id.compose(&a) == a),
            ("right unit", a.compose(&id) == a),
            ("associativity", a.compose(&b).compose(&c) == a.compose(&b.compose(&c))),
            ("composition", t.subst(&a.compose(&b)) == t.subst(&a).subst(&b)),
            ("single oracle", t.subst1(&u) == ref_subst(&t, 0, &u)),
            ("parallel oracle", t.subst(&a) == ref_parallel(&t, &a)),
        ];
        for (law, ok) in laws {
            if !ok {
                failures.push(format!("term {i}: {law}"));
            }
        }
    }
    ensure(failures.is_empty(), || format!("{} failures, first: {}", failures.len(), failures[0]))?;
    Ok(format!("{SUBSTITUTION_TERMS} terms, 7 laws each, 0 failures"))
}

// 12

const OMEGA: &str = r"(\x:Nat. x x) (\x:Nat. x x)";

fn fuel_discipline() -> Verdict {
    let line = suite(Suite::FuelMonotonicity, FUEL_MONOTONICITY_SAMPLES)?;
    let whnf = format!("whnf |- {OMEGA}");
    let conv = format!("conv |- {OMEGA} == {OMEGA} : Nat");
    for fuel in OMEGA_FUELS {
        for algo in ALGOS {
            for q in [&whnf, &conv] {
                let f = fuel.to_string();
                let o = mltt(&["--algo", algo, "--fuel", &f, "-e", q]);
                ensure(exit_code(&o) == 2, || {
                    format!("{algo} at fuel {fuel}: exit {} on `{q}`", exit_code(&o))
                })?;
            }
        }
    }
    Ok(format!("{line}; Omega exits 2 at fuel {OMEGA_FUELS:?} under both"))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 12] = [
        ("differential equivalence", differential),
        ("trace divergence", trace_divergence),
        ("subject reduction", subject_reduction),
        ("canonicity", canonicity),
        ("classification", classification),
        ("eta laws", eta_laws),
        ("negative suite", negative),
        ("strengthening", strengthening),
        ("symmetry, transitivity, weakening", closure),
        ("declarative oracle", declarative_oracle),
        ("substitution calculus", substitution),
        ("fuel discipline", fuel_discipline),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {:>2} [{name}]: PASS ({detail}) [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} [{name}]: FAIL ({why}) [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
