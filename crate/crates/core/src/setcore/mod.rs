//! Base domain, base sets and the independent family built over the ground
//! space of pairs `⟨X, Z⟩`.
//!
//! A set `A` of base elements is sent to `I(A) = {⟨X, Z⟩ | A ∩ X ∈ Z}`. The
//! family of all such `I(A)` is independent: any cell cut out by fewer than
//! `width` sign constraints over pairwise-distinct base sets is nonempty, and
//! [`cell_witness`] constructs its points explicitly.

mod family;
mod point;
mod setexpr;

use std::fmt;
use std::sync::Arc;

pub use family::{cell_witness, separating_support, CellSpec, FamilySpec};
pub use point::{
    enumerate_ground, enumerate_ground_capped, ground_size, GroundPoint, DEFAULT_ENUM_CAP,
};
pub use setexpr::{eval_setexpr, SetExpr};

/// Elements of the base domain are naturals.
pub type Elem = u64;

/// Largest accepted search bound for differences and witnesses.
pub const MAX_SEARCH_BOUND: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SetError {
    #[error("no difference found below search bound {0}")]
    NoDifferenceFound(u64),
    #[error("size {size} violates the width bound {width}")]
    WidthExceeded { size: usize, width: usize },
    #[error("only {found} admissible supports exist, {wanted} requested")]
    ExhaustedSupports { found: usize, wanted: usize },
    #[error("enumeration needs {needed} points, cap is {cap}")]
    SizeOverflow { needed: u128, cap: usize },
    #[error("unknown generator {0}")]
    UnknownGenerator(usize),
    #[error("generators {first} and {second} agree below search bound {bound}")]
    DuplicateGenerators {
        first: usize,
        second: usize,
        bound: u64,
    },
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid ground point: {0}")]
    InvalidPoint(String),
    #[error("invalid base set: {0}")]
    InvalidSet(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainKind {
    /// `{0, …, n-1}`
    Finite(u64),
    Omega,
}

/// The base domain together with its width, the exclusive bound on
/// intersection arities and ground-point support sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BaseDomain {
    kind: DomainKind,
    width: usize,
}

impl BaseDomain {
    pub fn new(kind: DomainKind, width: usize) -> Result<Self, SetError> {
        if width < 2 {
            return Err(SetError::InvalidDomain(format!("width {width} < 2")));
        }
        if let DomainKind::Finite(n) = kind {
            if width as u128 > n as u128 + 1 {
                return Err(SetError::InvalidDomain(format!(
                    "width {width} exceeds n + 1 = {} for finite({n})",
                    n as u128 + 1
                )));
            }
        }
        Ok(BaseDomain { kind, width })
    }

    pub fn finite(n: u64, width: usize) -> Result<Self, SetError> {
        Self::new(DomainKind::Finite(n), width)
    }

    pub fn omega(width: usize) -> Result<Self, SetError> {
        Self::new(DomainKind::Omega, width)
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn contains(&self, e: Elem) -> bool {
        match self.kind {
            DomainKind::Finite(n) => e < n,
            DomainKind::Omega => true,
        }
    }

    /// Clamps a search bound to the domain.
    pub fn clamp(&self, bound: u64) -> u64 {
        match self.kind {
            DomainKind::Finite(n) => bound.min(n),
            DomainKind::Omega => bound,
        }
    }
}

impl fmt::Display for BaseDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            DomainKind::Finite(n) => write!(f, "finite({n}), width {}", self.width),
            DomainKind::Omega => write!(f, "omega, width {}", self.width),
        }
    }
}

/// A decidable, enumerable set of naturals.
pub trait ComputableSet: fmt::Debug + Send + Sync {
    fn contains(&self, x: Elem) -> bool;

    /// Least member `>= from`, if any.
    fn next_member(&self, from: Elem) -> Option<Elem>;

    /// Least non-member `>= from`, if any.
    fn next_absent(&self, from: Elem) -> Option<Elem>;

    /// Optionally names an element of the symmetric difference with `other`
    /// that lies beyond any bounded search. Callers re-check the answer.
    fn difference_hint(&self, _other: &BaseSet) -> Option<Elem> {
        None
    }

    /// The s-expression literal for this set.
    fn literal(&self) -> String;
}

/// The computable sets with a textual literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    Evens,
    Odds,
    /// Multiples of k (k ≥ 1).
    Mult(u64),
    /// The half-open interval `[a, b)`.
    Interval(u64, u64),
}

impl ComputableSet for Builtin {
    fn contains(&self, x: Elem) -> bool {
        match *self {
            Builtin::Evens => x.is_multiple_of(2),
            Builtin::Odds => x % 2 == 1,
            Builtin::Mult(k) => x.is_multiple_of(k),
            Builtin::Interval(a, b) => a <= x && x < b,
        }
    }

    fn next_member(&self, from: Elem) -> Option<Elem> {
        match *self {
            Builtin::Evens => from.checked_add(from % 2),
            Builtin::Odds => from.checked_add(1 - from % 2),
            Builtin::Mult(k) => match from % k {
                0 => Some(from),
                r => from.checked_add(k - r),
            },
            Builtin::Interval(a, b) => Some(from.max(a)).filter(|&x| x < b),
        }
    }

    fn next_absent(&self, from: Elem) -> Option<Elem> {
        match *self {
            Builtin::Evens => from.checked_add(1 - from % 2),
            Builtin::Odds => from.checked_add(from % 2),
            Builtin::Mult(1) => None,
            Builtin::Mult(k) => Some(if from.is_multiple_of(k) {
                from + 1
            } else {
                from
            }),
            Builtin::Interval(a, b) => Some(if a <= from && from < b { b } else { from }),
        }
    }

    fn literal(&self) -> String {
        match *self {
            Builtin::Evens => "(builtin evens)".into(),
            Builtin::Odds => "(builtin odds)".into(),
            Builtin::Mult(k) => format!("(builtin (mult {k}))"),
            Builtin::Interval(a, b) => format!("(builtin (interval {a} {b}))"),
        }
    }
}

/// A subset of the base domain.
#[derive(Debug, Clone)]
pub enum BaseSet {
    /// Sorted, duplicate-free members.
    Finite(Vec<Elem>),
    /// Sorted, duplicate-free non-members.
    Cofinite(Vec<Elem>),
    Computable(Arc<dyn ComputableSet>),
}

fn normalize(mut v: Vec<Elem>) -> Vec<Elem> {
    v.sort_unstable();
    v.dedup();
    v
}

impl BaseSet {
    pub fn finite(elems: impl IntoIterator<Item = Elem>) -> Self {
        BaseSet::Finite(normalize(elems.into_iter().collect()))
    }

    pub fn cofinite(excluded: impl IntoIterator<Item = Elem>) -> Self {
        BaseSet::Cofinite(normalize(excluded.into_iter().collect()))
    }

    pub fn builtin(b: Builtin) -> Result<Self, SetError> {
        match b {
            Builtin::Mult(0) => Err(SetError::InvalidSet("mult 0".into())),
            Builtin::Interval(a, b) if a > b => Err(SetError::InvalidSet(format!(
                "interval {a} {b} is reversed"
            ))),
            _ => Ok(BaseSet::Computable(Arc::new(b))),
        }
    }

    pub fn computable(set: Arc<dyn ComputableSet>) -> Self {
        BaseSet::Computable(set)
    }

    pub fn contains(&self, x: Elem) -> bool {
        match self {
            BaseSet::Finite(v) => v.binary_search(&x).is_ok(),
            BaseSet::Cofinite(v) => v.binary_search(&x).is_err(),
            BaseSet::Computable(c) => c.contains(x),
        }
    }

    /// `self ∩ support`, for a sorted support.
    pub fn restrict(&self, support: &[Elem]) -> Vec<Elem> {
        support
            .iter()
            .copied()
            .filter(|&x| self.contains(x))
            .collect()
    }

    fn next_member(&self, from: Elem) -> Option<Elem> {
        match self {
            BaseSet::Finite(v) => v.iter().copied().find(|&x| x >= from),
            BaseSet::Cofinite(v) => {
                let mut x = from;
                for &e in v.iter().filter(|&&e| e >= from) {
                    if e != x {
                        break;
                    }
                    x = x.checked_add(1)?;
                }
                Some(x)
            }
            BaseSet::Computable(c) => c.next_member(from),
        }
    }

    fn next_absent(&self, from: Elem) -> Option<Elem> {
        match self {
            BaseSet::Finite(v) => BaseSet::Cofinite(v.clone()).next_member(from),
            BaseSet::Cofinite(v) => v.iter().copied().find(|&x| x >= from),
            BaseSet::Computable(c) => c.next_absent(from),
        }
    }

    fn listed_max(&self) -> Option<Elem> {
        match self {
            BaseSet::Finite(v) | BaseSet::Cofinite(v) => Some(v.last().map_or(0, |m| m + 1)),
            BaseSet::Computable(_) => None,
        }
    }

    /// Least element of `self △ other` below `bound`, then any element the
    /// difference helpers can certify. Helper answers are re-checked.
    pub fn first_difference(&self, other: &BaseSet, bound: u64) -> Option<Elem> {
        match (self, other) {
            (BaseSet::Finite(a), BaseSet::Finite(b))
            | (BaseSet::Cofinite(a), BaseSet::Cofinite(b)) => {
                return first_unshared(a, b);
            }
            _ => {}
        }
        if let Some(x) = (0..bound).find(|&x| self.contains(x) != other.contains(x)) {
            return Some(x);
        }
        self.difference_helper(other)
            .or_else(|| other.difference_helper(self))
            .filter(|&x| self.contains(x) != other.contains(x))
    }

    fn difference_helper(&self, other: &BaseSet) -> Option<Elem> {
        match self {
            // Beyond the listed elements a finite set is empty and a
            // cofinite set is full, so the first difference is exact.
            BaseSet::Finite(_) | BaseSet::Cofinite(_) => {
                let tail = self.listed_max()?.max(other.listed_max().unwrap_or(0));
                (0..tail)
                    .find(|&x| self.contains(x) != other.contains(x))
                    .or_else(|| match self {
                        BaseSet::Finite(_) => other.next_member(tail),
                        _ => other.next_absent(tail),
                    })
            }
            BaseSet::Computable(c) => c.difference_hint(other),
        }
    }
}

impl fmt::Display for BaseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseSet::Finite(v) => f.write_str(&fmt_elems(v)),
            BaseSet::Cofinite(v) => write!(f, "(co {})", fmt_elems(v)),
            BaseSet::Computable(c) => f.write_str(&c.literal()),
        }
    }
}

/// Least element in exactly one of two sorted lists.
fn first_unshared(a: &[Elem], b: &[Elem]) -> Option<Elem> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => return Some(a[i]),
            std::cmp::Ordering::Greater => return Some(b[j]),
        }
    }
    a.get(i).or(b.get(j)).copied()
}

/// `{0 1 3}`
pub fn fmt_elems(v: &[Elem]) -> String {
    let inner: Vec<String> = v.iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", inner.join(" "))
}

/// Membership in the independent-family member `I(A)`: `A ∩ X ∈ Z`.
pub fn indep_member(p: &GroundPoint, a: &BaseSet) -> bool {
    p.trace_contains(&a.restrict(p.support()))
}

/// Returns `⟨{γ}, {{γ}}⟩` for the least `γ ∈ A △ B` found, a point in exactly
/// one of `I(A)`, `I(B)`.
pub fn distinctness_witness(
    a: &BaseSet,
    b: &BaseSet,
    search_bound: u64,
) -> Result<GroundPoint, SetError> {
    let g = a
        .first_difference(b, search_bound)
        .ok_or(SetError::NoDifferenceFound(search_bound))?;
    Ok(GroundPoint::singleton_witness(g))
}
