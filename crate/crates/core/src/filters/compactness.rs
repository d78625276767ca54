//! Satisfiability of propositional theories through the filter generated by
//! their images in the set algebra.

use std::collections::BTreeSet;

use super::{
    assignment_from_ultrafilter, extend_ultrafilter_symbolic, FilterError, SymbolicFilter,
    Ultrafilter,
};
use crate::proplogic::{evaluate, support, Assignment, Formula};
use crate::setcore::{BaseDomain, BaseSet, FamilySpec, SetExpr};

/// The pieces of a successful solve.
#[derive(Debug, Clone)]
pub struct CompactnessSolution {
    pub assignment: Assignment,
    pub family: FamilySpec,
    /// Atom index of each family generator.
    pub atoms: Vec<usize>,
    pub ultrafilter: Ultrafilter,
}

/// Returns an assignment satisfying every formula of `theory`, or
/// [`FilterError::Unsatisfiable`] when the filter generated by the images
/// `ι(φ)` is improper.
pub fn compactness_solve(theory: &[Formula]) -> Result<Assignment, FilterError> {
    compactness_solve_traced(theory).map(|s| s.assignment)
}

/// As [`compactness_solve`], also returning the family and ultrafilter.
///
/// Each atom gets a fresh generator: the `k`-th distinct atom is sent to the
/// singleton `{k}` over omega, and the width is one more than the number of
/// atoms (or the largest arity).
pub fn compactness_solve_traced(theory: &[Formula]) -> Result<CompactnessSolution, FilterError> {
    let atoms: Vec<usize> = theory
        .iter()
        .flat_map(support)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let max_arity = theory.iter().map(Formula::max_arity).max().unwrap_or(0);
    let width = atoms.len().max(max_arity).max(1) + 1;
    let bound = atoms.len() as u64 + 1;
    let family = FamilySpec::new(
        BaseDomain::omega(width)?,
        (0..atoms.len() as u64)
            .map(|k| BaseSet::finite([k]))
            .collect(),
        bound,
    )?;

    let dense = |g: usize| atoms.binary_search(&g).expect("atom collected above");
    let images: Vec<SetExpr> = theory.iter().map(|f| dense_iota(f, &dense)).collect();
    // An empty theory generates the trivial filter.
    let gens = if images.is_empty() {
        vec![SetExpr::full()]
    } else {
        images
    };
    let filter = SymbolicFilter::new(family.clone(), gens)?;
    let ultrafilter = match extend_ultrafilter_symbolic(&filter, bound) {
        Err(FilterError::ImproperFilter) => return Err(FilterError::Unsatisfiable),
        other => other?,
    };
    let dense_assignment = assignment_from_ultrafilter(&ultrafilter, &family)?;
    let assignment = Assignment::from_pairs(
        dense_assignment
            .values()
            .iter()
            .map(|(&k, &v)| (atoms[k], v)),
    );
    for f in theory {
        if !evaluate(f, &assignment)? {
            return Err(FilterError::InvalidPresentation(format!(
                "derived assignment falsifies {f}"
            )));
        }
    }
    Ok(CompactnessSolution {
        assignment,
        family,
        atoms,
        ultrafilter,
    })
}

fn dense_iota(f: &Formula, dense: &impl Fn(usize) -> usize) -> SetExpr {
    match f {
        Formula::Atom(g) => SetExpr::Generator(dense(*g)),
        Formula::Not(x) => SetExpr::complement(dense_iota(x, dense)),
        Formula::And(xs) => SetExpr::Intersect(xs.iter().map(|x| dense_iota(x, dense)).collect()),
        Formula::Or(xs) => SetExpr::Union(xs.iter().map(|x| dense_iota(x, dense)).collect()),
    }
}
