//! Width-complete filters on finite powersets and on the set algebra named
//! by family generators, their properness, and ultrafilter extension.
//!
//! Ultrafilter choice is canonical: the least point of the generators'
//! intersection for finite carriers, and the first satisfying cell in
//! sign-lex order for symbolic carriers.

mod compactness;
mod search;

use std::fmt;

pub use compactness::{compactness_solve, compactness_solve_traced, CompactnessSolution};
pub use search::find_cell;

use crate::proplogic::{Assignment, PropError};
use crate::setcore::{
    cell_witness, eval_setexpr, indep_member, CellSpec, FamilySpec, GroundPoint, SetError, SetExpr,
};

/// Largest base size for finite-powerset carriers.
pub const MAX_FINITE_BASE: u32 = 63;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FilterError {
    #[error("filter is improper")]
    ImproperFilter,
    #[error("theory is unsatisfiable")]
    Unsatisfiable,
    #[error("no witness found and no refutation derived below search bound {0}")]
    Inconclusive(u64),
    #[error("ultrafilter does not live on this carrier")]
    WrongCarrier,
    #[error("invalid filter presentation: {0}")]
    InvalidPresentation(String),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Prop(#[from] PropError),
}

/// A subset of `{0, …, n-1}` as a bitmask, `n ≤ 63`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(pub u64);

impl Subset {
    pub fn full(n: u32) -> Self {
        Subset((1u64 << n) - 1)
    }

    pub fn from_elems(elems: impl IntoIterator<Item = u64>) -> Self {
        Subset(elems.into_iter().fold(0, |m, e| m | 1 << e))
    }

    pub fn contains(self, e: u64) -> bool {
        e < 64 && self.0 >> e & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn complement(self, n: u32) -> Self {
        Subset(!self.0 & Subset::full(n).0)
    }

    pub fn intersect(self, other: Subset) -> Self {
        Subset(self.0 & other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn least(self) -> Option<u64> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as u64)
    }

    pub fn elems(self) -> impl Iterator<Item = u64> {
        (0..64).filter(move |&e| self.0 >> e & 1 == 1)
    }

    /// All subsets of `{0, …, n-1}` in mask order.
    pub fn all(n: u32) -> impl Iterator<Item = Subset> {
        (0..=Subset::full(n).0).map(Subset)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<u64> = self.elems().collect();
        f.write_str(&crate::setcore::fmt_elems(&v))
    }
}

/// A filter on `P(n)` given by generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteFilter {
    n: u32,
    width: usize,
    gens: Vec<Subset>,
}

impl FiniteFilter {
    pub fn new(n: u32, width: usize, gens: Vec<Subset>) -> Result<Self, FilterError> {
        if n > MAX_FINITE_BASE {
            return Err(FilterError::InvalidPresentation(format!(
                "base {n} exceeds {MAX_FINITE_BASE}"
            )));
        }
        if width < 2 {
            return Err(FilterError::InvalidPresentation(format!(
                "width {width} < 2"
            )));
        }
        if gens.is_empty() {
            return Err(FilterError::InvalidPresentation("no generators".into()));
        }
        if let Some(g) = gens.iter().find(|g| !g.is_subset_of(Subset::full(n))) {
            return Err(FilterError::InvalidPresentation(format!(
                "generator {g} is not a subset of {n}"
            )));
        }
        Ok(FiniteFilter { n, width, gens })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn generators(&self) -> &[Subset] {
        &self.gens
    }

    /// `⋂ generators`, folded in chunks of fewer than `width` sets.
    pub fn core(&self) -> Subset {
        self.gens
            .chunks(self.width - 1)
            .map(|chunk| {
                chunk
                    .iter()
                    .fold(Subset::full(self.n), |acc, g| acc.intersect(*g))
            })
            .fold(Subset::full(self.n), Subset::intersect)
    }

    /// Membership in the generated filter: supersets of the core.
    pub fn contains(&self, x: Subset) -> bool {
        self.core().is_subset_of(x)
    }

    pub fn members(&self) -> Vec<Subset> {
        Subset::all(self.n).filter(|&x| self.contains(x)).collect()
    }
}

/// A filter on the set algebra over a family, given by generator expressions.
#[derive(Debug, Clone)]
pub struct SymbolicFilter {
    family: FamilySpec,
    gens: Vec<SetExpr>,
}

impl SymbolicFilter {
    pub fn new(family: FamilySpec, gens: Vec<SetExpr>) -> Result<Self, FilterError> {
        if gens.is_empty() {
            return Err(FilterError::InvalidPresentation("no generators".into()));
        }
        let width = family.domain().width();
        for e in &gens {
            if let Some(&g) = e.generators().iter().find(|&&g| g >= family.len()) {
                return Err(SetError::UnknownGenerator(g).into());
            }
            if e.max_arity() >= width {
                return Err(SetError::WidthExceeded {
                    size: e.max_arity(),
                    width,
                }
                .into());
            }
        }
        Ok(SymbolicFilter { family, gens })
    }

    pub fn family(&self) -> &FamilySpec {
        &self.family
    }

    pub fn generators(&self) -> &[SetExpr] {
        &self.gens
    }
}

#[derive(Debug, Clone)]
pub enum FilterPresentation {
    Finite(FiniteFilter),
    Symbolic(SymbolicFilter),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Point {
    Base(u64),
    Ground(GroundPoint),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Base(e) => write!(f, "{e}"),
            Point::Ground(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperReport {
    pub proper: bool,
    pub witness: Option<Point>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ultrafilter {
    /// `{X ⊆ n | point ∈ X}`
    Principal { n: u32, point: u64 },
    /// `{Y ⊆ J | witness ∈ Y}` for a point of the ground space.
    PrincipalGround(GroundPoint),
    /// The ultrafilter at a witness of the cell `A(cell)`.
    CellBased {
        cell: CellSpec,
        witness: GroundPoint,
    },
}

impl Ultrafilter {
    /// Membership of a subset of the finite base.
    pub fn contains_subset(&self, x: Subset) -> Result<bool, FilterError> {
        match self {
            Ultrafilter::Principal { point, .. } => Ok(x.contains(*point)),
            _ => Err(FilterError::WrongCarrier),
        }
    }

    /// Membership of a set-algebra element; defined for every expression
    /// over the family, including generators the filter never mentioned.
    pub fn contains_expr(&self, e: &SetExpr, family: &FamilySpec) -> Result<bool, FilterError> {
        Ok(eval_setexpr(e, self.ground_witness()?, family)?)
    }

    pub fn ground_witness(&self) -> Result<&GroundPoint, FilterError> {
        match self {
            Ultrafilter::PrincipalGround(p) | Ultrafilter::CellBased { witness: p, .. } => Ok(p),
            Ultrafilter::Principal { .. } => Err(FilterError::WrongCarrier),
        }
    }
}

impl fmt::Display for Ultrafilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ultrafilter::Principal { point, .. } => write!(f, "principal({point})"),
            Ultrafilter::PrincipalGround(p) => write!(f, "principal({p})"),
            Ultrafilter::CellBased { cell, witness } => {
                let signs: Vec<String> = cell
                    .signs()
                    .iter()
                    .map(|(g, v)| format!("{g}↦{}", u8::from(*v)))
                    .collect();
                write!(f, "cell({{{}}}) at {witness}", signs.join(", "))
            }
        }
    }
}

pub fn is_proper(
    filter: &FilterPresentation,
    search_bound: u64,
) -> Result<ProperReport, FilterError> {
    match filter {
        FilterPresentation::Finite(ff) => {
            let core = ff.core();
            Ok(ProperReport {
                proper: !core.is_empty(),
                witness: core.least().map(Point::Base),
            })
        }
        FilterPresentation::Symbolic(sf) => match find_cell(&sf.gens) {
            None => Ok(ProperReport {
                proper: false,
                witness: None,
            }),
            Some(cell) => match cell_witness(&sf.family, &cell, 1, search_bound) {
                Ok(mut pts) => Ok(ProperReport {
                    proper: true,
                    witness: Some(Point::Ground(pts.remove(0))),
                }),
                Err(
                    SetError::NoDifferenceFound(_)
                    | SetError::ExhaustedSupports { .. }
                    | SetError::WidthExceeded { .. },
                ) => Err(FilterError::Inconclusive(search_bound)),
                Err(e) => Err(e.into()),
            },
        },
    }
}

/// The principal ultrafilter at the least point of the generators'
/// intersection.
pub fn extend_ultrafilter_finite(filter: &FiniteFilter) -> Result<Ultrafilter, FilterError> {
    let point = filter.core().least().ok_or(FilterError::ImproperFilter)?;
    Ok(Ultrafilter::Principal { n: filter.n, point })
}

/// Selects the first cell on which every generator holds and materializes a
/// witness point in it; the ultrafilter is the principal one at that point.
pub fn extend_ultrafilter_symbolic(
    filter: &SymbolicFilter,
    search_bound: u64,
) -> Result<Ultrafilter, FilterError> {
    let cell = find_cell(&filter.gens).ok_or(FilterError::ImproperFilter)?;
    let witness = cell_witness(&filter.family, &cell, 1, search_bound)?.remove(0);
    for e in &filter.gens {
        if !eval_setexpr(e, &witness, &filter.family)? {
            return Err(FilterError::InvalidPresentation(format!(
                "witness {witness} misses generator {e}"
            )));
        }
    }
    Ok(Ultrafilter::CellBased { cell, witness })
}

/// `S(γ) = 1` iff `I(A_γ)` belongs to the ultrafilter, for every named
/// generator of the family.
pub fn assignment_from_ultrafilter(
    u: &Ultrafilter,
    family: &FamilySpec,
) -> Result<Assignment, FilterError> {
    let w = u.ground_witness()?;
    Ok(Assignment::from_pairs(
        family
            .generators()
            .iter()
            .enumerate()
            .map(|(g, a)| (g, indep_member(w, a))),
    ))
}
