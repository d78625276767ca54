//! Acceptance criteria, one line each. Every check recomputes its expected
//! values with a small oracle written here rather than trusting the library's
//! own self-checks.

#![allow(clippy::absurd_extreme_comparisons)]

#[path = "../../core/tests/support/fo_oracle.rs"]
mod fo_oracle;

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use indepfam::encoder::{
    decode_ultrafilter, encode_filter_extension, roundtrip_check, DecodedUltrafilter,
};
use indepfam::filters::{compactness_solve, FilterError, FiniteFilter, Subset};
use indepfam::format::FamilyFile;
use indepfam::henkin::{henkin_pipeline, model_check, FOFormula, HenkinConfig, HenkinError, Term};
use indepfam::proplogic::{cell_of, iota, support, verify_iota_identity, Assignment, Formula};
use indepfam::setcore::{
    cell_witness, enumerate_ground, eval_setexpr, indep_member, BaseSet, CellSpec, FamilySpec,
    GroundPoint,
};
use indepfam_cli::commands::{
    default_iota_family, random_formulas, random_theories, roundtrip_filters,
};
use indepfam_cli::suite::{bundled_family, fo_corpus, LAMBDA2, LAMBDA3, OMEGA8};
use indepfam_cli::RunConfig;

const SEED: u64 = 7;
const INDEPENDENCE_LIMIT: Duration = Duration::from_secs(10);
const ABUNDANCE_LIMIT: Duration = Duration::from_secs(10);
const IOTA_LIMIT: Duration = Duration::from_secs(60);
const SOLVE_LIMIT: Duration = Duration::from_secs(60);
const WITNESSES: usize = 100;
const IOTA_FORMULAS: usize = 1000;
const IOTA_MAX_ATOMS: usize = 6;
const IOTA_MAX_DEPTH: usize = 5;
const THEORIES: usize = 500;
const THEORY_MAX_ATOMS: usize = 8;
const THEORY_MAX_FORMULAS: usize = 30;
const RANDOM_FILTERS: usize = 50;
const FILTER_MAX_N: u32 = 4;
/// Every criterion below is exact: zero discrepancies are tolerated.
const TOLERANCE: usize = 0;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cfg() -> RunConfig {
    RunConfig {
        seed: Some(SEED),
        ..RunConfig::default()
    }
}

// ---- ground space oracle ----

/// Every `⟨X, Z⟩` with `X ⊆ {0..n-1}`, `|X| < width` and `Z ⊆ P(X)`.
fn oracle_ground(n: u64, width: usize) -> BTreeSet<GroundPoint> {
    let mut out = BTreeSet::new();
    for xmask in 0u64..1 << n {
        let x: Vec<u64> = (0..n).filter(|i| xmask >> i & 1 == 1).collect();
        if x.len() >= width {
            continue;
        }
        let subsets: Vec<Vec<u64>> = (0u64..1 << x.len())
            .map(|m| {
                (0..x.len())
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| x[i])
                    .collect()
            })
            .collect();
        for zmask in 0u64..1 << subsets.len() {
            let z: Vec<Vec<u64>> = (0..subsets.len())
                .filter(|i| zmask >> i & 1 == 1)
                .map(|i| subsets[i].clone())
                .collect();
            out.insert(GroundPoint::new(x.clone(), z).expect("trace inside support"));
        }
    }
    out
}

/// `A ∩ X ∈ Z`, computed from plain membership.
fn oracle_member(p: &GroundPoint, a: &BaseSet) -> bool {
    let meet: Vec<u64> = p
        .support()
        .iter()
        .copied()
        .filter(|&x| a.contains(x))
        .collect();
    p.trace().contains(&meet)
}

fn in_cell(p: &GroundPoint, family: &FamilySpec, cell: &CellSpec) -> bool {
    cell.signs()
        .iter()
        .all(|(&g, &v)| oracle_member(p, &family.generators()[g]) == v)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

fn finite_n(file: &FamilyFile) -> u64 {
    match file.family.domain().kind() {
        indepfam::setcore::DomainKind::Finite(n) => n,
        k => panic!("expected a finite domain, got {k:?}"),
    }
}

// ---- criteria ----

fn independence() -> Outcome {
    let start = Instant::now();
    let cfg = cfg();
    let mut summary = Vec::new();
    let mut discrepancies = 0;
    for (src, expected_size) in [(LAMBDA2, Some(26)), (LAMBDA3, None)] {
        let file = bundled_family(src, &cfg).map_err(|e| e.to_string())?;
        let family = &file.family;
        let n = finite_n(&file);
        let width = family.domain().width();
        check(family.len() == 1 << n, || {
            format!("finite({n}) family should hold all {} subsets", 1 << n)
        })?;

        let ground = oracle_ground(n, width);
        if let Some(size) = expected_size {
            check(ground.len() == size, || {
                format!("|J| for finite({n}) is {}, expected {size}", ground.len())
            })?;
        }
        let enumerated: BTreeSet<GroundPoint> = enumerate_ground(family.domain(), n)
            .map_err(|e| e.to_string())?
            .into_iter()
            .collect();
        check(enumerated == ground, || {
            format!("library enumeration of finite({n}) differs from the oracle")
        })?;

        let mut cells = 0;
        for k in 0..width {
            for gamma in combinations(family.len(), k) {
                for signs in 0u64..1 << k {
                    let cell = CellSpec::from_pairs(
                        gamma
                            .iter()
                            .enumerate()
                            .map(|(i, &g)| (g, signs >> i & 1 == 1)),
                    );
                    cells += 1;
                    let members: Vec<&GroundPoint> = ground
                        .iter()
                        .filter(|p| in_cell(p, family, &cell))
                        .collect();
                    if members.is_empty() {
                        return Err(format!("cell {cell:?} over finite({n}) is empty"));
                    }
                    let ws = cell_witness(family, &cell, 1, file.bound)
                        .map_err(|e| format!("{cell:?}: {e}"))?;
                    discrepancies += ws.iter().filter(|w| !members.contains(w)).count();
                }
            }
        }
        summary.push(format!("finite({n}): |J|={} cells={cells}", ground.len()));
    }
    let elapsed = start.elapsed();
    check(discrepancies <= TOLERANCE, || {
        format!("{discrepancies} witnesses outside their cell")
    })?;
    check(elapsed < INDEPENDENCE_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} discrepancies=0 in {:.2}s",
        summary.join(", "),
        elapsed.as_secs_f64()
    ))
}

fn abundance() -> Outcome {
    let start = Instant::now();
    let file = bundled_family(OMEGA8, &cfg()).map_err(|e| e.to_string())?;
    let family = &file.family;
    check(family.len() == 8, || {
        format!("expected 8 generators, got {}", family.len())
    })?;
    check(
        family
            .generators()
            .iter()
            .all(|g| matches!(g, BaseSet::Computable(_) | BaseSet::Cofinite(_))),
        || "generators should be computable sets".into(),
    )?;
    let mut total = 0;
    for signs in 0u64..1 << 8 {
        let cell = CellSpec::from_pairs((0..8).map(|g| (g, signs >> g & 1 == 1)));
        let ws = cell_witness(family, &cell, WITNESSES, file.bound)
            .map_err(|e| format!("{cell:?}: {e}"))?;
        let distinct: BTreeSet<&GroundPoint> = ws.iter().collect();
        check(ws.len() == WITNESSES && distinct.len() == WITNESSES, || {
            format!("{cell:?}: {} distinct", distinct.len())
        })?;
        for w in &ws {
            for (&g, &v) in cell.signs() {
                let a = &family.generators()[g];
                check(indep_member(w, a) == v && oracle_member(w, a) == v, || {
                    format!("{w} misplaced for {g}")
                })?;
            }
        }
        total += ws.len();
    }
    let elapsed = start.elapsed();
    check(elapsed < ABUNDANCE_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "256 full cells x {WITNESSES} witnesses ({total} re-verified) in {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn eval_bits(f: &Formula, value: &dyn Fn(usize) -> bool) -> bool {
    match f {
        Formula::Atom(a) => value(*a),
        Formula::Not(g) => !eval_bits(g, value),
        Formula::And(gs) => gs.iter().all(|g| eval_bits(g, value)),
        Formula::Or(gs) => gs.iter().any(|g| eval_bits(g, value)),
    }
}

fn iota_identity() -> Outcome {
    let start = Instant::now();
    let cfg = cfg();
    let file = default_iota_family(&cfg).map_err(|e| e.to_string())?;
    let family = &file.family;
    let n = finite_n(&file);
    check(n == 3, || format!("expected finite(3), got finite({n})"))?;
    let ground = oracle_ground(n, family.domain().width());
    let formulas = random_formulas(SEED, IOTA_FORMULAS, IOTA_MAX_ATOMS, cfg.width);
    check(formulas.len() == IOTA_FORMULAS, || {
        "wrong formula count".into()
    })?;
    let mut mismatches = 0;
    for phi in &formulas {
        let gamma: Vec<usize> = support(phi).into_iter().collect();
        check(
            gamma.len() <= IOTA_MAX_ATOMS && phi.depth() <= IOTA_MAX_DEPTH,
            || format!("{phi:?} is out of shape"),
        )?;
        let image = iota(phi, family).map_err(|e| e.to_string())?;
        let satisfying: Vec<CellSpec> = (0u64..1 << gamma.len())
            .map(|bits| {
                CellSpec::from_pairs(
                    gamma
                        .iter()
                        .enumerate()
                        .map(|(i, &g)| (g, bits >> i & 1 == 1)),
                )
            })
            .filter(|c| eval_bits(phi, &|a| c.signs()[&a]))
            .collect();
        for p in &ground {
            let lhs = eval_setexpr(&image, p, family).map_err(|e| e.to_string())?;
            let rhs = satisfying.iter().any(|c| in_cell(p, family, c));
            if lhs != rhs {
                mismatches += 1;
            }
        }
        let report = verify_iota_identity(phi, &support(phi), family, cfg.truncation)
            .map_err(|e| e.to_string())?;
        check(
            report.holds && report.points_checked == ground.len(),
            || format!("library check failed on {phi:?}"),
        )?;
    }
    let elapsed = start.elapsed();
    check(mismatches <= TOLERANCE, || {
        format!("{mismatches} pointwise mismatches")
    })?;
    check(elapsed < IOTA_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{IOTA_FORMULAS} formulas x {} points, mismatches=0 in {:.2}s",
        ground.len(),
        elapsed.as_secs_f64()
    ))
}

fn partition() -> Outcome {
    let file = bundled_family(LAMBDA2, &cfg()).map_err(|e| e.to_string())?;
    let family = &file.family;
    let ground = oracle_ground(finite_n(&file), family.domain().width());
    let mut gammas = 0;
    for k in 0..=3 {
        for gamma in combinations(family.len(), k) {
            gammas += 1;
            let cells: Vec<Assignment> = (0u64..1 << k)
                .map(|bits| Assignment::from_bits(&gamma, bits))
                .collect();
            let mut sizes = vec![0usize; cells.len()];
            for p in &ground {
                let mut hits = 0;
                for (i, s) in cells.iter().enumerate() {
                    if eval_setexpr(&cell_of(s), p, family).map_err(|e| e.to_string())? {
                        sizes[i] += 1;
                        hits += 1;
                    }
                }
                check(hits == 1, || {
                    format!("{p} lies in {hits} cells over {gamma:?}")
                })?;
            }
            let total: usize = sizes.iter().sum();
            check(total == 26, || {
                format!("cells over {gamma:?} sum to {total}")
            })?;
            let set: BTreeSet<usize> = gamma.iter().copied().collect();
            let report = indepfam::proplogic::partition_check(&set, family, finite_n(&file))
                .map_err(|e| e.to_string())?;
            let lib: Vec<usize> = report.cell_sizes.iter().map(|(_, n)| *n).collect();
            check(report.holds && lib == sizes, || {
                format!("library sizes {lib:?} vs oracle {sizes:?} over {gamma:?}")
            })?;
        }
    }
    Ok(format!(
        "{gammas} index sets, every cell family disjoint and summing to 26"
    ))
}

fn truth_table(theory: &[Formula]) -> Option<u64> {
    (0u64..1 << THEORY_MAX_ATOMS)
        .find(|&bits| theory.iter().all(|f| eval_bits(f, &|a| bits >> a & 1 == 1)))
}

fn compactness() -> Outcome {
    let start = Instant::now();
    let theories = random_theories(SEED, THEORIES);
    let (mut agree, mut sat) = (0, 0);
    for (i, t) in theories.iter().enumerate() {
        let atoms: BTreeSet<usize> = t.iter().flat_map(support).collect();
        check(
            t.len() <= THEORY_MAX_FORMULAS && atoms.iter().all(|&a| a < THEORY_MAX_ATOMS),
            || format!("theory {i} is out of shape"),
        )?;
        let oracle = truth_table(t);
        match compactness_solve(t) {
            Ok(s) => {
                let value = |a: usize| s.get(a).ok_or(a);
                for f in t {
                    let unset = support(f).into_iter().find(|&a| value(a).is_err());
                    check(unset.is_none(), || {
                        format!("theory {i}: model leaves a{} unset", unset.unwrap_or(0))
                    })?;
                    check(eval_bits(f, &|a| s.get(a) == Some(true)), || {
                        format!("theory {i}: model falsifies {f:?}")
                    })?;
                }
                sat += 1;
                if oracle.is_some() {
                    agree += 1;
                }
            }
            Err(FilterError::Unsatisfiable) => {
                if oracle.is_none() {
                    agree += 1;
                }
            }
            Err(e) => return Err(format!("theory {i}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    check(agree == THEORIES, || {
        format!("agreement {agree}/{THEORIES}")
    })?;
    check(elapsed < SOLVE_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "agreement {agree}/{THEORIES} (sat={sat} unsat={}) in {:.2}s",
        THEORIES - sat,
        elapsed.as_secs_f64()
    ))
}

fn henkin_soundness() -> Outcome {
    let corpus = fo_corpus().map_err(|e| e.to_string())?;
    check(corpus.len() >= 10, || {
        format!("corpus has {} theories", corpus.len())
    })?;
    let x = || Term::var("x");
    let required = vec![
        FOFormula::exists(&["x"], FOFormula::rel("P", vec![x()])),
        FOFormula::forall(
            &["x"],
            FOFormula::implies(
                FOFormula::rel("P", vec![x()]),
                FOFormula::rel("Q", vec![x()]),
            ),
        ),
    ];
    check(corpus.iter().any(|(_, t)| *t == required), || {
        "corpus lacks the witness/implication theory".into()
    })?;
    let mut with_equality = 0;
    let (mut sat, mut unsat) = (0, 0);
    for (name, theory) in &corpus {
        if theory.iter().any(mentions_equality) {
            with_equality += 1;
        }
        let expected = fo_oracle::oracle_verdict(theory);
        match henkin_pipeline(theory, &HenkinConfig::default()) {
            Ok(run) => {
                for phi in theory {
                    let holds =
                        model_check(&run.structure, phi).map_err(|e| format!("{name}: {e}"))?;
                    check(holds, || {
                        format!("{name}: extracted structure falsifies an axiom")
                    })?;
                }
                check(expected == fo_oracle::Verdict::Sat, || {
                    format!("{name}: pipeline SAT, oracle {expected:?}")
                })?;
                sat += 1;
            }
            Err(HenkinError::Unsatisfiable) => {
                check(expected == fo_oracle::Verdict::Unsat, || {
                    format!("{name}: pipeline UNSAT, oracle {expected:?}")
                })?;
                unsat += 1;
            }
            Err(e) => return Err(format!("{name}: {e}")),
        }
    }
    check(with_equality >= 1, || {
        "corpus has no equality theory".into()
    })?;
    check(unsat >= 3, || {
        format!("only {unsat} unsatisfiable theories")
    })?;
    Ok(format!(
        "{} theories (sat={sat} unsat={unsat}, {with_equality} with equality) match the oracle",
        corpus.len()
    ))
}

fn mentions_equality(f: &FOFormula) -> bool {
    match f {
        FOFormula::Eq(..) => true,
        FOFormula::Rel(..) => false,
        FOFormula::Not(g) | FOFormula::Exists(_, g) | FOFormula::Forall(_, g) => {
            mentions_equality(g)
        }
        FOFormula::And(gs) | FOFormula::Or(gs) => gs.iter().any(mentions_equality),
    }
}

/// Ultra-ness, upward closure, meets and properness, all by brute force.
fn is_ultrafilter(members: &BTreeSet<u64>, n: u32) -> bool {
    let full = (1u64 << n) - 1;
    let all = 0..=full;
    !members.contains(&0)
        && all
            .clone()
            .all(|x| members.contains(&x) != members.contains(&(full & !x)))
        && members.iter().all(|&x| {
            all.clone()
                .filter(|&y| y & x == x)
                .all(|y| members.contains(&y))
        })
        && members
            .iter()
            .all(|&x| members.iter().all(|&y| members.contains(&(x & y))))
}

fn decoded_ok(d: &DecodedUltrafilter, f: &FiniteFilter) -> bool {
    let members: BTreeSet<u64> = d.members.iter().map(|s| s.0).collect();
    is_ultrafilter(&members, f.n()) && f.generators().iter().all(|g| members.contains(&g.0))
}

/// Every ultrafilter on `n` containing the generators, found by checking
/// every family of subsets.
fn oracle_ultrafilters(f: &FiniteFilter) -> BTreeSet<BTreeSet<u64>> {
    let subsets = 1u64 << f.n();
    (0u64..1 << subsets)
        .map(|fam| {
            (0..subsets)
                .filter(|x| fam >> x & 1 == 1)
                .collect::<BTreeSet<u64>>()
        })
        .filter(|m| is_ultrafilter(m, f.n()) && f.generators().iter().all(|g| m.contains(&g.0)))
        .collect()
}

fn bijection(f: &FiniteFilter, pruned: bool) -> Result<(), String> {
    let t = encode_filter_extension(f, f.width(), None, pruned).map_err(|e| e.to_string())?;
    let formulas = t.formulas();
    let mut decoded = BTreeSet::new();
    let mut models = 0;
    for bits in 0u64..1 << t.field.len() {
        if formulas
            .iter()
            .all(|phi| eval_bits(phi, &|a| bits >> a & 1 == 1))
        {
            models += 1;
            let members: BTreeSet<u64> = t
                .field
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .map(|(_, x)| x.0)
                .collect();
            decoded.insert(members);
        }
    }
    let expected = oracle_ultrafilters(f);
    check(models == decoded.len() && decoded == expected, || {
        format!(
            "filter {:?} on {}: {models} models, {} ultrafilters",
            f.generators(),
            f.n(),
            expected.len()
        )
    })
}

fn every_filter_up_to_2(width: usize) -> Vec<FiniteFilter> {
    let mut out = Vec::new();
    for n in 1..=2u32 {
        for core in 1u64..1 << (1u64 << n) {
            let gens: Vec<Subset> = (0u64..1 << n)
                .filter(|x| core >> x & 1 == 1)
                .map(Subset)
                .collect();
            if let Ok(f) = FiniteFilter::new(n, width, gens) {
                if !f.core().is_empty() {
                    out.push(f);
                }
            }
        }
    }
    out
}

fn encoder_roundtrip() -> Outcome {
    let cfg = cfg();
    let filters =
        roundtrip_filters(&cfg, FILTER_MAX_N, true, RANDOM_FILTERS).map_err(|e| e.to_string())?;
    let principal = filters.len() - RANDOM_FILTERS;
    check(
        principal == (1..=FILTER_MAX_N as usize).sum::<usize>(),
        || format!("{principal} principal filters"),
    )?;
    for f in &filters {
        check(f.n() <= FILTER_MAX_N && !f.core().is_empty(), || {
            format!("{f:?} is not a proper filter on n <= 4")
        })?;
        let r = roundtrip_check(f, cfg.width, true)
            .map_err(|e| format!("{:?}: {e}", f.generators()))?;
        let via_henkin = r.via_henkin.as_ref().ok_or("missing first-order route")?;
        for d in [&r.via_filter, via_henkin] {
            check(decoded_ok(d, f), || {
                format!(
                    "{:?}: decoded {d} is not an extending ultrafilter",
                    f.generators()
                )
            })?;
        }
        check(r.ok(), || {
            format!("{:?}: round trip report failed", f.generators())
        })?;
        let t = encode_filter_extension(f, cfg.width, None, true).map_err(|e| e.to_string())?;
        let again = decode_ultrafilter(
            &compactness_solve(&t.formulas()).map_err(|e| e.to_string())?,
            &t,
        )
        .map_err(|e| e.to_string())?;
        check(again == r.via_filter, || {
            "decoding is not reproducible".into()
        })?;
    }
    let small: Vec<&FiniteFilter> = filters.iter().filter(|f| f.n() <= 2).collect();
    let every = every_filter_up_to_2(cfg.width);
    for f in small.iter().copied().chain(&every) {
        bijection(f, true)?;
        bijection(f, false)?;
    }
    Ok(format!(
        "{} filters ({principal} principal, {RANDOM_FILTERS} random) extend and are ultra; bijection on {} filters with n <= 2",
        filters.len(),
        small.len() + every.len()
    ))
}

fn suite_bytes(parallel: usize) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_indepfam"))
        .args([
            "suite",
            "--seed",
            &SEED.to_string(),
            "--format",
            "records",
            "--parallel",
            &parallel.to_string(),
        ])
        .output()
        .map_err(|e| e.to_string())?;
    check(out.status.success(), || {
        format!(
            "suite exited with {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        )
    })?;
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let first = suite_bytes(1)?;
    let second = suite_bytes(1)?;
    check(!first.is_empty(), || "empty report".into())?;
    check(first == second, || {
        "two runs with the same seed differ".into()
    })?;
    let threaded = suite_bytes(2)?;
    check(first == threaded, || "the two-worker run differs".into())?;
    let text = String::from_utf8(first).map_err(|e| e.to_string())?;
    let last = text.lines().last().unwrap_or_default();
    check(last.contains(r#""verdict":"pass""#), || {
        format!("suite summary: {last}")
    })?;
    Ok(format!(
        "{} record lines, byte-identical across runs and worker counts",
        text.lines().count()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("independence", independence),
        ("witness abundance", abundance),
        ("embedding identity", iota_identity),
        ("partition", partition),
        ("compactness pipeline", compactness),
        ("henkin soundness", henkin_soundness),
        ("encoder round trip", encoder_roundtrip),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} {name}: PASS {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
