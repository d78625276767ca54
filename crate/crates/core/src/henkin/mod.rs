//! Quantified theories reduced to propositional ones: witness constants,
//! truth-definition axioms over the finite term universe, and extraction of
//! a model from a satisfying assignment by quotienting terms.

mod closure;
mod image;
mod model;
mod syntax;

pub use closure::{close_witnesses, Closure, ClosureLimits, WitnessFamily, NEG, POS};
pub use image::{propositionalize, Axiom, PropImage, Scheme, TAUTOLOGY_SHELL_CAP};
pub use model::{extract_structure, model_check, FunctionTable, RelationTable, Structure};
pub use syntax::{FOFormula, Signature, Term};

use crate::filters::{compactness_solve, FilterError};
use crate::proplogic::Assignment;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HenkinError {
    #[error("arity {arity} violates width {width}")]
    ArityExceeded { arity: usize, width: usize },
    #[error("symbol `{0}` is used with two arities or in two roles")]
    SymbolClash(String),
    #[error("free variable `{0}`")]
    FreeVariable(String),
    #[error("witness closure not stable after {rounds} rounds")]
    ClosureBudgetExceeded {
        rounds: usize,
        partial: Box<Closure>,
    },
    #[error("closure {what} exceed the cap of {cap}")]
    UniverseOverflow { what: &'static str, cap: usize },
    #[error("assignment leaves variable a{0} unset")]
    IncompleteAssignment(usize),
    #[error("axiom #{axiom} ({scheme}) is false: {text}")]
    InconsistentAssignment {
        axiom: usize,
        scheme: Scheme,
        text: String,
    },
    #[error("symbol `{0}` is missing from the structure")]
    SignatureMismatch(String),
    #[error("theory is unsatisfiable")]
    Unsatisfiable,
    #[error("extracted structure falsifies {0}")]
    SoundnessViolation(String),
    #[error(transparent)]
    Filter(#[from] FilterError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HenkinConfig {
    pub width: usize,
    pub limits: ClosureLimits,
}

impl Default for HenkinConfig {
    fn default() -> Self {
        HenkinConfig {
            width: 4,
            limits: ClosureLimits::default(),
        }
    }
}

/// Everything a successful run produced.
#[derive(Debug, Clone)]
pub struct HenkinRun {
    pub image: PropImage,
    pub assignment: Assignment,
    pub structure: Structure,
}

/// Closes, propositionalizes, solves through the filter route and extracts a
/// structure, which is then model-checked against every sentence of `theory`.
pub fn henkin_pipeline(
    theory: &[FOFormula],
    config: &HenkinConfig,
) -> Result<HenkinRun, HenkinError> {
    let closure = close_witnesses(theory, config.width, config.limits)?;
    let image = propositionalize(&closure)?;
    let mut assignment = match compactness_solve(&image.formulas()) {
        Err(FilterError::Unsatisfiable) => return Err(HenkinError::Unsatisfiable),
        other => other?,
    };
    // Variables no axiom mentions are unconstrained.
    for i in 0..image.variables.len() {
        if assignment.get(i).is_none() {
            assignment.set(i, false);
        }
    }
    let structure = extract_structure(&image, &assignment)?;
    for f in theory {
        if !model_check(&structure, f)? {
            return Err(HenkinError::SoundnessViolation(f.to_string()));
        }
    }
    Ok(HenkinRun {
        image,
        assignment,
        structure,
    })
}

#[cfg(test)]
#[path = "../../tests/support/fo_oracle.rs"]
mod oracle;
