//! One function per subcommand, plus the loaders that turn files into the
//! values those functions take.

use std::collections::{BTreeSet, HashSet};
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use indepfam::encoder::{
    assignment_from_structure, decode_ultrafilter, encode_filter_extension, random_proper_filter,
    roundtrip_check, EncodeError, FilterTheory,
};
use indepfam::filters::{compactness_solve, FilterError, FilterPresentation, FiniteFilter, Subset};
use indepfam::format::{
    parse_assignment, parse_cell, parse_family, parse_filter, parse_fo_theory, parse_model,
    parse_theory, print_cell, print_filter, print_fo_theory, print_theory, set_from_sexp,
    FamilyFile,
};
use indepfam::henkin::{
    henkin_pipeline, model_check, ClosureLimits, FOFormula, HenkinConfig, HenkinError, Structure,
};
use indepfam::proplogic::{
    evaluate, partition_check, random_formula, random_theory, support, verify_iota_identity,
    Assignment, Formula, FormulaShape,
};
use indepfam::setcore::{
    cell_witness, enumerate_ground, BaseDomain, BaseSet, CellSpec, FamilySpec, GroundPoint,
};
use indepfam::sexpr::{parse_all, parse_one};

use crate::{fan_out, BudgetExceeded, InputError, Report, RunConfig};

/// Largest atom count the exhaustive truth-table search accepts.
pub const TRUTH_TABLE_MAX_ATOMS: usize = 24;
/// Largest field the exhaustive model census of `roundtrip` enumerates.
pub const CENSUS_MAX_FIELD: usize = 16;

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))
        .map_err(anyhow::Error::new)
}

fn located<T, E: std::fmt::Display>(path: &Path, r: std::result::Result<T, E>) -> Result<T> {
    r.map_err(|e| anyhow::Error::new(InputError(format!("{}:{e}", path.display()))))
}

pub fn load_family(path: &Path, cfg: &RunConfig) -> Result<FamilyFile> {
    located(
        path,
        parse_family(&read_file(path)?, cfg.width, cfg.search_bound),
    )
}

pub fn load_theory(path: &Path) -> Result<Vec<Formula>> {
    located(path, parse_theory(&read_file(path)?))
}

pub fn load_fo_theory(path: &Path) -> Result<Vec<FOFormula>> {
    located(path, parse_fo_theory(&read_file(path)?))
}

pub fn load_finite_filter(path: &Path, cfg: &RunConfig) -> Result<FiniteFilter> {
    match located(
        path,
        parse_filter(&read_file(path)?, cfg.width, cfg.search_bound),
    )? {
        FilterPresentation::Finite(f) => Ok(f),
        FilterPresentation::Symbolic(_) => Err(InputError(format!(
            "{}: this command needs a finite carrier",
            path.display()
        ))
        .into()),
    }
}

/// A cell spec given inline (starting with `(`) or as a file path.
pub fn load_cell(arg: &str) -> Result<CellSpec> {
    if arg.trim_start().starts_with('(') {
        return parse_cell(arg).map_err(|e| InputError(format!("--cell:{e}")).into());
    }
    let path = Path::new(arg);
    located(path, parse_cell(&read_file(path)?))
}

/// Space-separated finite set literals, e.g. `"{} {0} {1 2} {0 1 2}"`.
pub fn parse_field(src: &str) -> Result<Vec<Subset>> {
    let bad = |e: String| anyhow::Error::new(InputError(format!("--field: {e}")));
    let mut out = Vec::new();
    for s in parse_all(src).map_err(|e| bad(e.to_string()))? {
        match set_from_sexp(&s).map_err(|e| bad(e.to_string()))? {
            BaseSet::Finite(v) if v.iter().all(|&x| x < 63) => out.push(Subset::from_elems(v)),
            _ => return Err(bad(format!("`{s}` is not a small finite set"))),
        }
    }
    Ok(out)
}

/// Either kind of model file `decode` accepts.
#[derive(Debug, Clone)]
pub enum ModelInput {
    Assignment(Assignment),
    Structure(Structure),
}

pub fn load_model_input(path: &Path) -> Result<ModelInput> {
    let src = read_file(path)?;
    let head = located(path, parse_one(&src))?
        .form()
        .map(|(h, _)| h.to_string());
    match head.as_deref() {
        Some("model") => Ok(ModelInput::Structure(located(path, parse_model(&src))?)),
        _ => Ok(ModelInput::Assignment(located(
            path,
            parse_assignment(&src),
        )?)),
    }
}

/// Which cells `indep` visits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellSelection {
    One(CellSpec),
    /// Every sign pattern over every set of fewer than `width` generators.
    All,
    /// Every sign pattern over all generators at once.
    Full,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn select_cells(family: &FamilySpec, sel: &CellSelection) -> Vec<CellSpec> {
    match sel {
        CellSelection::One(c) => vec![c.clone()],
        CellSelection::Full => CellSpec::all_over(&(0..family.len()).collect::<Vec<_>>()),
        CellSelection::All => {
            let top = (family.domain().width() - 1).min(family.len());
            (0..=top)
                .flat_map(|k| combinations(family.len(), k))
                .flat_map(|g| CellSpec::all_over(&g))
                .collect()
        }
    }
}

struct CellOutcome {
    witnesses: Vec<GroundPoint>,
    in_cell: bool,
    distinct: bool,
    enumerated: Option<usize>,
    discrepancies: usize,
}

fn check_cell(
    family: &FamilySpec,
    cell: &CellSpec,
    count: usize,
    bound: u64,
    ground: Option<(&[GroundPoint], u64)>,
) -> Result<CellOutcome> {
    let witnesses = cell_witness(family, cell, count, bound)?;
    let mut in_cell = witnesses.len() == count;
    for w in &witnesses {
        in_cell &= cell.contains(family, w)?;
    }
    let distinct = witnesses.iter().collect::<HashSet<_>>().len() == witnesses.len();
    let (mut enumerated, mut discrepancies) = (None, 0);
    if let Some((points, truncation)) = ground {
        let mut members = HashSet::new();
        for p in points {
            if cell.contains(family, p)? {
                members.insert(p);
            }
        }
        discrepancies += usize::from(members.is_empty() != witnesses.is_empty());
        for w in witnesses
            .iter()
            .filter(|w| w.support().iter().all(|&e| e < truncation))
        {
            discrepancies += usize::from(!members.contains(w));
        }
        enumerated = Some(members.len());
    }
    Ok(CellOutcome {
        witnesses,
        in_cell,
        distinct,
        enumerated,
        discrepancies,
    })
}

pub fn indep(
    cfg: &RunConfig,
    file: &FamilyFile,
    sel: &CellSelection,
    count: usize,
    exhaustive: bool,
) -> Result<Report> {
    let start = Instant::now();
    let family = &file.family;
    let mut report = Report::new("indep");
    let ground = if exhaustive {
        Some(enumerate_ground(family.domain(), cfg.truncation)?)
    } else {
        None
    };
    if let Some(g) = &ground {
        report.count("ground_points", g.len() as u64);
    }
    let cells = select_cells(family, sel);
    let outcomes = fan_out(cfg.parallel, &cells, |c| {
        check_cell(
            family,
            c,
            count,
            file.bound,
            ground.as_deref().map(|g| (g, cfg.truncation)),
        )
    });
    for (cell, outcome) in cells.iter().zip(outcomes) {
        let o = outcome.with_context(|| format!("cell {}", print_cell(cell)))?;
        let ok = o.in_cell && o.distinct && o.discrepancies == 0;
        report.count("cells", 1);
        report.count("witnessed", u64::from(ok));
        report.count("witnesses", o.witnesses.len() as u64);
        report.count("discrepancies", o.discrepancies as u64);
        if !ok {
            report.violated();
        }
        let shown: Vec<String> = o.witnesses.iter().map(|w| w.to_string()).collect();
        report.line(format!(
            "{} {}: {} witness(es){}{}",
            if ok { "ok  " } else { "FAIL" },
            print_cell(cell),
            o.witnesses.len(),
            o.enumerated
                .map(|m| format!(", {m} enumerated"))
                .unwrap_or_default(),
            shown
                .first()
                .map(|w| format!(", first {w}"))
                .unwrap_or_default(),
        ));
        report.record(
            "cell",
            json!({
                "cell": print_cell(cell),
                "witnesses": shown,
                "in_cell": o.in_cell,
                "distinct": o.distinct,
                "enumerated": o.enumerated,
                "discrepancies": o.discrepancies,
            }),
        );
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// `finite(3)` with every subset as a generator.
pub fn default_iota_family(cfg: &RunConfig) -> Result<FamilyFile> {
    let domain = BaseDomain::finite(3, cfg.width)?;
    let gens = (0u64..8)
        .map(|m| BaseSet::finite((0..3).filter(|i| m >> i & 1 == 1)))
        .collect();
    Ok(FamilyFile {
        family: FamilySpec::new(domain, gens, cfg.search_bound)?,
        bound: cfg.search_bound,
    })
}

/// Seeded formulas of depth at most 5 over `atoms` atoms, with connective
/// arity kept below `width`.
pub fn random_formulas(seed: u64, count: usize, atoms: usize, width: usize) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = FormulaShape::new(5, atoms, (width - 1).min(3));
    (0..count)
        .map(|_| random_formula(&mut rng, &shape))
        .collect()
}

pub fn iota_check(cfg: &RunConfig, file: &FamilyFile, formulas: &[Formula]) -> Result<Report> {
    let start = Instant::now();
    let family = &file.family;
    let mut report = Report::new("iota-check");
    let results = fan_out(cfg.parallel, formulas, |phi| {
        let gamma = support(phi);
        let iota = verify_iota_identity(phi, &gamma, family, cfg.truncation)?;
        let part = partition_check(&gamma, family, cfg.truncation)?;
        anyhow::Ok((gamma, iota, part))
    });
    for (i, (phi, r)) in formulas.iter().zip(results).enumerate() {
        let (gamma, iota, part) = r.with_context(|| format!("formula #{i} {phi}"))?;
        let sum: usize = part.cell_sizes.iter().map(|(_, n)| n).sum();
        let ok = iota.holds && part.holds && sum == part.total_points;
        report.count("formulas", 1);
        report.count("holds", u64::from(ok));
        if !ok {
            report.violated();
        }
        report.line(format!(
            "{} #{i} {phi}: |ι(φ)| = {} over {} points, {} satisfying cell(s) of {}",
            if ok { "ok  " } else { "FAIL" },
            iota.image_size,
            iota.points_checked,
            iota.satisfying_cells,
            part.cell_sizes.len(),
        ));
        report.record(
            "formula",
            json!({
                "index": i,
                "formula": phi.to_string(),
                "atoms": gamma.len(),
                "iota_holds": iota.holds,
                "image_size": iota.image_size,
                "satisfying_cells": iota.satisfying_cells,
                "points": iota.points_checked,
                "partition_holds": part.holds,
                "cell_size_sum": sum,
                "counterexample": iota.counterexample.or(part.counterexample).map(|p| p.to_string()),
            }),
        );
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Partition check for every set of at most `max_gamma` generators.
pub fn partition(cfg: &RunConfig, file: &FamilyFile, max_gamma: usize) -> Result<Report> {
    let start = Instant::now();
    let family = &file.family;
    let mut report = Report::new("partition");
    let gammas: Vec<Vec<usize>> = (0..=max_gamma.min(family.len()))
        .flat_map(|k| combinations(family.len(), k))
        .collect();
    let results = fan_out(cfg.parallel, &gammas, |g| {
        partition_check(&g.iter().copied().collect(), family, cfg.truncation)
    });
    for (g, r) in gammas.iter().zip(results) {
        let part = r?;
        let sizes: Vec<usize> = part.cell_sizes.iter().map(|(_, n)| *n).collect();
        let sum: usize = sizes.iter().sum();
        let ok = part.holds && sum == part.total_points;
        report.count("index_sets", 1);
        report.count("holds", u64::from(ok));
        if !ok {
            report.violated();
        }
        report.line(format!(
            "{} Γ={g:?}: sizes {sizes:?} sum {sum} of {}",
            if ok { "ok  " } else { "FAIL" },
            part.total_points
        ));
        report.record(
            "index-set",
            json!({
                "gamma": g,
                "cell_sizes": sizes,
                "sum": sum,
                "total_points": part.total_points,
                "overlaps": part.overlaps,
                "uncovered": part.uncovered,
                "holds": ok,
            }),
        );
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SolveMode {
    Filter,
    Direct,
    Both,
}

/// The first satisfying assignment over the theory's atoms in binary order.
pub fn truth_table_search(theory: &[Formula]) -> Result<Option<Assignment>> {
    let atoms: Vec<usize> = theory
        .iter()
        .flat_map(support)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if atoms.len() > TRUTH_TABLE_MAX_ATOMS {
        return Err(BudgetExceeded(format!(
            "truth table over {} atoms exceeds the cap of {TRUTH_TABLE_MAX_ATOMS}",
            atoms.len()
        ))
        .into());
    }
    for bits in 0u64..1 << atoms.len() {
        let s = Assignment::from_bits(&atoms, bits);
        if satisfies(theory, &s) {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

fn satisfies(theory: &[Formula], s: &Assignment) -> bool {
    theory.iter().all(|f| evaluate(f, s) == Ok(true))
}

/// Seeded theories with at most 8 atoms and 8 formulas, which lands near an
/// even split between satisfiable and unsatisfiable.
pub fn random_theories(seed: u64, count: usize) -> Vec<Vec<Formula>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = FormulaShape::new(4, 8, 3);
    (0..count)
        .map(|_| random_theory(&mut rng, &shape, 8))
        .collect()
}

/// Also returns the model found for each theory.
pub fn solve(
    cfg: &RunConfig,
    theories: &[Vec<Formula>],
    mode: SolveMode,
) -> Result<(Report, Vec<Option<Assignment>>)> {
    let start = Instant::now();
    let mut report = Report::new("solve");
    let results = fan_out(cfg.parallel, theories, |t| {
        let filter = match mode {
            SolveMode::Direct => None,
            _ => Some(match compactness_solve(t) {
                Ok(s) => Some(s),
                Err(FilterError::Unsatisfiable) => None,
                Err(e) => return Err(anyhow::Error::new(e)),
            }),
        };
        let direct = match mode {
            SolveMode::Filter => None,
            _ => Some(truth_table_search(t)?),
        };
        Ok((filter, direct))
    });
    let mut unsat_seen = false;
    let mut models = Vec::with_capacity(theories.len());
    for (i, (t, r)) in theories.iter().zip(results).enumerate() {
        let (filter, direct) = r.with_context(|| format!("theory #{i}"))?;
        let sat = match (&filter, &direct) {
            (Some(f), _) => f.is_some(),
            (None, Some(d)) => d.is_some(),
            (None, None) => unreachable!("some mode runs"),
        };
        let agree = match (&filter, &direct) {
            (Some(f), Some(d)) => f.is_some() == d.is_some(),
            _ => true,
        };
        let model = filter
            .clone()
            .flatten()
            .or_else(|| direct.clone().flatten());
        let verified = model.as_ref().is_none_or(|s| satisfies(t, s));
        let ok = agree && verified;
        report.count("theories", 1);
        report.count(if sat { "sat" } else { "unsat" }, 1);
        report.count("agree", u64::from(agree));
        if !ok {
            report.violated();
        }
        unsat_seen |= !sat;
        let verdict = |v: &Option<Option<Assignment>>| {
            v.as_ref()
                .map(|m| if m.is_some() { "sat" } else { "unsat" })
        };
        report.line(format!(
            "{} #{i}: {}{}",
            if ok { "ok  " } else { "FAIL" },
            if sat { "SAT" } else { "UNSAT" },
            model.as_ref().map(|m| format!(" {m}")).unwrap_or_default(),
        ));
        report.record(
            "theory",
            json!({
                "index": i,
                "formulas": t.len(),
                "verdict": if sat { "sat" } else { "unsat" },
                "filter": verdict(&filter),
                "direct": verdict(&direct),
                "agree": agree,
                "model": model.as_ref().map(|m| m.to_string()),
                "model_verified": model.as_ref().map(|_| verified),
            }),
        );
        models.push(model);
    }
    if theories.len() == 1 && unsat_seen {
        report.unsat();
    }
    report.elapsed = start.elapsed();
    Ok((report, models))
}

/// Runs the pipeline; UNSAT and soundness failures become verdicts, other
/// errors abort.
pub fn henkin(
    cfg: &RunConfig,
    theory: &[FOFormula],
    limits: ClosureLimits,
) -> Result<(Report, Option<Structure>)> {
    let start = Instant::now();
    let mut report = Report::new("henkin");
    let config = HenkinConfig {
        width: cfg.width,
        limits,
    };
    let run = match henkin_pipeline(theory, &config) {
        Ok(run) => run,
        Err(HenkinError::Unsatisfiable) => {
            report.unsat();
            report.line("UNSAT");
            report.record(
                "verdict",
                json!({ "verdict": "unsat", "axioms": theory.len() }),
            );
            report.elapsed = start.elapsed();
            return Ok((report, None));
        }
        Err(HenkinError::SoundnessViolation(f)) => {
            report.violated();
            report.line(format!("FAIL extracted structure falsifies {f}"));
            report.record("verdict", json!({ "verdict": "unsound", "falsified": f }));
            report.elapsed = start.elapsed();
            return Ok((report, None));
        }
        Err(e) => return Err(e.into()),
    };
    let m = &run.structure;
    let closure = &run.image.closure;
    report.count("closure_rounds", closure.rounds as u64);
    report.count("closure_terms", closure.terms.len() as u64);
    report.count("variables", run.image.variables.len() as u64);
    report.count("image_axioms", run.image.axioms.len() as u64);
    report.count("domain", m.domain.len() as u64);
    report.line("SAT");
    report.line(m.to_string());
    for (i, f) in theory.iter().enumerate() {
        let holds = model_check(m, f)?;
        report.count("axioms_checked", 1);
        if !holds {
            report.violated();
        }
        report.line(format!("{} {f}", if holds { "ok  " } else { "FAIL" }));
        report.record(
            "axiom",
            json!({ "index": i, "formula": f.to_string(), "holds": holds }),
        );
    }
    report.record(
        "model",
        json!({
            "verdict": "sat",
            "domain": m.domain.len(),
            "model": m.to_string(),
            "closure_rounds": closure.rounds,
            "closure_terms": closure.terms.len(),
            "variables": run.image.variables.len(),
        }),
    );
    report.elapsed = start.elapsed();
    Ok((report, Some(run.structure)))
}

/// How `encode`/`decode` build the theory.
#[derive(Debug, Clone, Default)]
pub struct EncodeOptions {
    pub field: Option<Vec<Subset>>,
    /// Instantiate the closure scheme literally instead of pruning it.
    pub literal: bool,
}

pub fn encoded_theory(filter: &FiniteFilter, opts: &EncodeOptions) -> Result<FilterTheory> {
    Ok(encode_filter_extension(
        filter,
        filter.width(),
        opts.field.clone(),
        !opts.literal,
    )?)
}

/// The theory text is returned separately so it can be written to a file.
pub fn encode(
    filter: &FiniteFilter,
    opts: &EncodeOptions,
    first_order: bool,
) -> Result<(Report, String)> {
    let start = Instant::now();
    let t = encoded_theory(filter, opts)?;
    let fo = t.to_fo();
    let text = if first_order {
        print_fo_theory(&fo)
    } else {
        let comments: Vec<String> = t
            .axioms
            .iter()
            .zip(&fo)
            .map(|(a, f)| format!("{}: {f}", a.scheme))
            .collect();
        print_theory(&t.formulas(), Some(&comments))
    };
    let mut report = Report::new("encode");
    for scheme in ["member", "closure", "complement"] {
        let n = t
            .axioms
            .iter()
            .filter(|a| a.scheme.to_string() == scheme)
            .count();
        report.count(scheme, n as u64);
    }
    report.count("field", t.field.len() as u64);
    report.line(text.trim_end());
    let atoms: Vec<String> = t
        .field
        .iter()
        .enumerate()
        .map(|(i, &x)| format!("a{i}={}", FilterTheory::constant_name(x)))
        .collect();
    report.record(
        "encoding",
        json!({
            "filter": print_filter(filter).trim_end(),
            "n": t.n,
            "field": t.field.len(),
            "atoms": atoms,
            "axioms": t.axioms.len(),
            "pruned": t.pruned,
            "first_order": first_order,
            "theory": text,
        }),
    );
    report.elapsed = start.elapsed();
    Ok((report, text))
}

pub fn decode(filter: &FiniteFilter, opts: &EncodeOptions, model: &ModelInput) -> Result<Report> {
    let start = Instant::now();
    let t = encoded_theory(filter, opts)?;
    let s = match model {
        ModelInput::Assignment(s) => s.clone(),
        ModelInput::Structure(m) => assignment_from_structure(m, &t)?,
    };
    let mut report = Report::new("decode");
    match decode_ultrafilter(&s, &t) {
        Ok(u) => {
            let members: Vec<String> = u.members.iter().map(|x| x.to_string()).collect();
            report.line(format!("ultrafilter {u} with {} member(s)", members.len()));
            report.record(
                "ultrafilter",
                json!({ "ultrafilter": u.to_string(), "members": members }),
            );
        }
        Err(EncodeError::NotAModel { axiom, text }) => {
            report.violated();
            report.line(format!("FAIL not a model: {text}"));
            let axiom = (axiom != usize::MAX).then_some(axiom);
            report.record("not-a-model", json!({ "axiom": axiom, "text": text }));
        }
        Err(e) => return Err(e.into()),
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Every principal filter on `1..=max_n`, then `random` seeded proper filters
/// on `max_n`.
pub fn roundtrip_filters(
    cfg: &RunConfig,
    max_n: u32,
    principal: bool,
    random: usize,
) -> Result<Vec<FiniteFilter>> {
    let mut out = Vec::new();
    if principal {
        for n in 1..=max_n {
            for p in 0..u64::from(n) {
                out.push(FiniteFilter::new(
                    n,
                    cfg.width,
                    vec![Subset::from_elems([p])],
                )?);
            }
        }
    }
    if random > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.require_seed()?);
        out.extend((0..random).map(|_| random_proper_filter(&mut rng, max_n, cfg.width)));
    }
    Ok(out)
}

/// Models of the encoded theory among all assignments to its atoms, and the
/// points their decoded ultrafilters are principal at.
fn model_census(t: &FilterTheory) -> Result<(usize, BTreeSet<u64>)> {
    if t.field.len() > CENSUS_MAX_FIELD {
        return Err(BudgetExceeded(format!("model census over {} atoms", t.field.len())).into());
    }
    let idx: Vec<usize> = (0..t.field.len()).collect();
    let (mut models, mut points) = (0, BTreeSet::new());
    for bits in 0u64..1 << idx.len() {
        if let Ok(u) = decode_ultrafilter(&Assignment::from_bits(&idx, bits), t) {
            models += 1;
            points.extend(u.atom.least().filter(|_| u.atom.len() == 1));
        }
    }
    Ok((models, points))
}

pub fn roundtrip(
    cfg: &RunConfig,
    filters: &[FiniteFilter],
    with_henkin: bool,
    exhaustive: bool,
) -> Result<Report> {
    let start = Instant::now();
    let mut report = Report::new("roundtrip");
    let results = fan_out(cfg.parallel, filters, |f| {
        let r = roundtrip_check(f, f.width(), with_henkin)?;
        let census = if exhaustive && f.n() <= 3 {
            Some(model_census(&encoded_theory(
                f,
                &EncodeOptions::default(),
            )?)?)
        } else {
            None
        };
        anyhow::Ok((r, census))
    });
    for (i, (f, res)) in filters.iter().zip(results).enumerate() {
        let shown = print_filter(f).trim_end().to_string();
        let (r, census) = res.with_context(|| format!("filter #{i} {shown}"))?;
        let bijection = census.as_ref().map(|(models, points)| {
            *models == points.len() && points.iter().copied().eq(f.core().elems())
        });
        let ok = r.ok() && bijection != Some(false);
        report.count("filters", 1);
        report.count("ok", u64::from(ok));
        report.count("paths_agree", u64::from(r.paths_agree));
        if !ok {
            report.violated();
        }
        report.line(format!(
            "{} #{i} {shown}: {}{}{}",
            if ok { "ok  " } else { "FAIL" },
            r.via_filter,
            r.via_henkin
                .as_ref()
                .map(|h| format!(", first-order route {h}"))
                .unwrap_or_default(),
            census
                .as_ref()
                .map(|(m, _)| format!(", {m} model(s)"))
                .unwrap_or_default(),
        ));
        let direct: Vec<String> = r.direct.iter().map(|u| u.to_string()).collect();
        report.record(
            "roundtrip",
            json!({
                "index": i,
                "filter": shown,
                "axioms": r.theory_axioms,
                "via_filter": r.via_filter.to_string(),
                "via_henkin": r.via_henkin.as_ref().map(|h| h.to_string()),
                "direct": direct,
                "extends": r.extends,
                "matches_direct": r.matches_direct,
                "paths_agree": r.paths_agree,
                "models": census.as_ref().map(|c| c.0),
                "bijection": bijection,
            }),
        );
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Random formulas for `iota-check --random`, sized to the family.
pub fn iota_random(cfg: &RunConfig, file: &FamilyFile, count: usize) -> Result<Vec<Formula>> {
    let atoms = file.family.len().min(6);
    if atoms == 0 {
        return Err(InputError("the family has no generators".into()).into());
    }
    Ok(random_formulas(
        cfg.require_seed()?,
        count,
        atoms,
        file.family.domain().width(),
    ))
}
