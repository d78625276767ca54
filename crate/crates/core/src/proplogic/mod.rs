//! Bounded-arity propositional formulas over generator atoms, and their
//! embedding `ι` into the set algebra generated by the independent family.

mod random;
mod verify;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use random::{random_formula, random_theory, FormulaShape};
pub use verify::{
    iota_equivalent, partition_check, verify_iota_identity, IotaReport, PartitionReport,
};

use crate::setcore::{FamilySpec, SetError, SetExpr};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PropError {
    #[error("atom a{0} is not bound by the assignment")]
    UnboundAtom(usize),
    #[error("unknown generator {0}")]
    UnknownGenerator(usize),
    #[error("connective with {arity} children violates width {width}")]
    ArityExceeded { arity: usize, width: usize },
    #[error("index set misses atom a{0} of the formula")]
    IndexSetTooSmall(usize),
    #[error(transparent)]
    Set(#[from] SetError),
}

/// `and()` is true and `or()` is false.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(usize),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Or(vec![Formula::not(a), b])
    }

    pub fn max_arity(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) => f.max_arity(),
            Formula::And(fs) | Formula::Or(fs) => fs
                .iter()
                .map(Formula::max_arity)
                .max()
                .unwrap_or(0)
                .max(fs.len()),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) => 1 + f.depth(),
            Formula::And(fs) | Formula::Or(fs) => {
                1 + fs.iter().map(Formula::depth).max().unwrap_or(0)
            }
        }
    }

    /// Every connective must have fewer than `width` children.
    pub fn check_width(&self, width: usize) -> Result<(), PropError> {
        match self.max_arity() {
            a if a >= width => Err(PropError::ArityExceeded { arity: a, width }),
            _ => Ok(()),
        }
    }

    fn collect_atoms(&self, out: &mut BTreeSet<usize>) {
        match self {
            Formula::Atom(g) => {
                out.insert(*g);
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_atoms(out)),
        }
    }

    fn eval_bound(&self, s: &Assignment) -> bool {
        match self {
            Formula::Atom(g) => s.values[g],
            Formula::Not(f) => !f.eval_bound(s),
            Formula::And(fs) => fs.iter().all(|f| f.eval_bound(s)),
            Formula::Or(fs) => fs.iter().any(|f| f.eval_bound(s)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seq = |f: &mut fmt::Formatter<'_>, head: &str, xs: &[Formula]| {
            write!(f, "({head}")?;
            for x in xs {
                write!(f, " {x}")?;
            }
            write!(f, ")")
        };
        match self {
            Formula::Atom(g) => write!(f, "a{g}"),
            Formula::Not(x) => write!(f, "(not {x})"),
            Formula::And(xs) => seq(f, "and", xs),
            Formula::Or(xs) => seq(f, "or", xs),
        }
    }
}

/// A finite partial truth assignment `s : Γ → 2`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    values: BTreeMap<usize, bool>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, bool)>) -> Self {
        Assignment {
            values: pairs.into_iter().collect(),
        }
    }

    /// Bit `i` of `bits` (most significant first) gives the value of `gamma[i]`.
    pub fn from_bits(gamma: &[usize], bits: u64) -> Self {
        let k = gamma.len();
        Self::from_pairs(
            gamma
                .iter()
                .enumerate()
                .map(|(i, &g)| (g, bits >> (k - 1 - i) & 1 == 1)),
        )
    }

    pub fn get(&self, g: usize) -> Option<bool> {
        self.values.get(&g).copied()
    }

    pub fn set(&mut self, g: usize, v: bool) {
        self.values.insert(g, v);
    }

    pub fn values(&self) -> &BTreeMap<usize, bool> {
        &self.values
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn restrict(&self, gamma: &BTreeSet<usize>) -> Assignment {
        Assignment {
            values: self
                .values
                .iter()
                .filter(|(g, _)| gamma.contains(g))
                .map(|(&g, &v)| (g, v))
                .collect(),
        }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (g, v)) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}↦{}", u8::from(*v))?;
        }
        f.write_str("}")
    }
}

/// The atom indices occurring in `phi`.
pub fn support(phi: &Formula) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    phi.collect_atoms(&mut out);
    out
}

/// Truth value of `phi` under `s`; every atom of `phi` must be bound.
pub fn evaluate(phi: &Formula, s: &Assignment) -> Result<bool, PropError> {
    if let Some(g) = support(phi).into_iter().find(|g| !s.values.contains_key(g)) {
        return Err(PropError::UnboundAtom(g));
    }
    Ok(phi.eval_bound(s))
}

/// Structural translation into the set algebra: atoms to generators, `not`
/// to complement, `and`/`or` to intersection/union.
pub fn iota(phi: &Formula, family: &FamilySpec) -> Result<SetExpr, PropError> {
    if let Some(&g) = support(phi).iter().find(|&&g| g >= family.len()) {
        return Err(PropError::UnknownGenerator(g));
    }
    Ok(iota_unchecked(phi))
}

pub(crate) fn iota_unchecked(phi: &Formula) -> SetExpr {
    match phi {
        Formula::Atom(g) => SetExpr::Generator(*g),
        Formula::Not(f) => SetExpr::complement(iota_unchecked(f)),
        Formula::And(fs) => SetExpr::Intersect(fs.iter().map(iota_unchecked).collect()),
        Formula::Or(fs) => SetExpr::Union(fs.iter().map(iota_unchecked).collect()),
    }
}

/// The cell `A(s)`: positive generators intersected with the complements of
/// the negative ones; the empty assignment gives the whole ground space.
pub fn cell_of(s: &Assignment) -> SetExpr {
    let mut parts: Vec<SetExpr> = s
        .values
        .iter()
        .filter(|(_, &v)| v)
        .map(|(&g, _)| SetExpr::Generator(g))
        .chain(
            s.values
                .iter()
                .filter(|(_, &v)| !v)
                .map(|(&g, _)| SetExpr::complement(SetExpr::Generator(g))),
        )
        .collect();
    match parts.len() {
        1 => parts.pop().unwrap(),
        _ => SetExpr::Intersect(parts),
    }
}
