//! The seeded end-to-end suite: every workload over the bundled corpus, in a
//! fixed order, folded into one report.

use anyhow::{Context, Result};

use indepfam::format::{parse_family, parse_fo_theory, parse_theory, FamilyFile};
use indepfam::henkin::{ClosureLimits, FOFormula};
use indepfam::proplogic::Formula;

use crate::commands::{self, CellSelection, SolveMode};
use crate::{Report, RunConfig};

pub const LAMBDA2: &str = include_str!("../corpus/families/lambda2.fam");
pub const LAMBDA3: &str = include_str!("../corpus/families/lambda3.fam");
pub const OMEGA8: &str = include_str!("../corpus/families/omega8.fam");
pub const IOTA_CORPUS: &str = include_str!("../corpus/prop/corpus20.thy");

/// The first-order corpus as `(name, source)`.
pub const FO_CORPUS: &[(&str, &str)] = &[
    (
        "01-witness-implies",
        include_str!("../corpus/fo/01-witness-implies.fo"),
    ),
    (
        "02-witness-refuted",
        include_str!("../corpus/fo/02-witness-refuted.fo"),
    ),
    (
        "03-congruence-refuted",
        include_str!("../corpus/fo/03-congruence-refuted.fo"),
    ),
    (
        "04-function-congruence-refuted",
        include_str!("../corpus/fo/04-function-congruence-refuted.fo"),
    ),
    (
        "05-function-value",
        include_str!("../corpus/fo/05-function-value.fo"),
    ),
    (
        "06-symmetry-refuted",
        include_str!("../corpus/fo/06-symmetry-refuted.fo"),
    ),
    (
        "07-two-witnesses",
        include_str!("../corpus/fo/07-two-witnesses.fo"),
    ),
    (
        "08-singleton-refuted",
        include_str!("../corpus/fo/08-singleton-refuted.fo"),
    ),
    (
        "09-nested-witness",
        include_str!("../corpus/fo/09-nested-witness.fo"),
    ),
    (
        "10-negated-existential",
        include_str!("../corpus/fo/10-negated-existential.fo"),
    ),
    (
        "11-iff-refuted",
        include_str!("../corpus/fo/11-iff-refuted.fo"),
    ),
    (
        "12-equality-chain-refuted",
        include_str!("../corpus/fo/12-equality-chain-refuted.fo"),
    ),
];

pub const IOTA_RANDOM: usize = 1000;
pub const SOLVE_RANDOM: usize = 500;
pub const ROUNDTRIP_RANDOM: usize = 50;
pub const ROUNDTRIP_MAX_N: u32 = 4;
pub const WITNESS_COUNT: usize = 100;
pub const PARTITION_MAX_GAMMA: usize = 3;

pub fn bundled_family(src: &str, cfg: &RunConfig) -> Result<FamilyFile> {
    Ok(parse_family(src, cfg.width, cfg.search_bound)?)
}

pub fn fo_corpus() -> Result<Vec<(&'static str, Vec<FOFormula>)>> {
    FO_CORPUS
        .iter()
        .map(|&(name, src)| {
            Ok((
                name,
                parse_fo_theory(src).with_context(|| name.to_string())?,
            ))
        })
        .collect()
}

pub fn iota_corpus() -> Result<Vec<Formula>> {
    Ok(parse_theory(IOTA_CORPUS)?)
}

/// Runs every workload; needs a seed.
pub fn suite(cfg: &RunConfig) -> Result<Report> {
    let seed = cfg.require_seed()?;
    let mut report = Report::new("suite");

    for src in [LAMBDA2, LAMBDA3] {
        let fam = bundled_family(src, cfg)?;
        report.absorb(commands::indep(cfg, &fam, &CellSelection::All, 1, true)?);
    }
    let omega = bundled_family(OMEGA8, cfg)?;
    report.absorb(commands::indep(
        cfg,
        &omega,
        &CellSelection::Full,
        WITNESS_COUNT,
        false,
    )?);

    let fam3 = commands::default_iota_family(cfg)?;
    report.absorb(commands::iota_check(cfg, &fam3, &iota_corpus()?)?);
    let formulas = commands::random_formulas(seed, IOTA_RANDOM, 6, cfg.width);
    report.absorb(commands::iota_check(cfg, &fam3, &formulas)?);

    report.absorb(commands::partition(
        cfg,
        &bundled_family(LAMBDA2, cfg)?,
        PARTITION_MAX_GAMMA,
    )?);

    report.absorb(
        commands::solve(
            cfg,
            &commands::random_theories(seed, SOLVE_RANDOM),
            SolveMode::Both,
        )?
        .0,
    );

    for (_, theory) in fo_corpus()? {
        let (mut r, _) = commands::henkin(cfg, &theory, ClosureLimits::default())?;
        // UNSAT is an expected outcome inside the suite.
        if r.verdict == crate::Verdict::Unsat {
            r.verdict = crate::Verdict::Pass;
        }
        report.absorb(r);
    }

    let filters = commands::roundtrip_filters(cfg, ROUNDTRIP_MAX_N, true, ROUNDTRIP_RANDOM)?;
    report.absorb(commands::roundtrip(cfg, &filters, true, true)?);
    Ok(report)
}
