//! Filter extension problems as quantifier-free theories over constants
//! `a_X` and one predicate `U`, and decoding of models into ultrafilters.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;

use crate::filters::{
    compactness_solve, extend_ultrafilter_finite, FilterError, FiniteFilter, Subset, Ultrafilter,
};
use crate::henkin::{
    henkin_pipeline, model_check, FOFormula, HenkinConfig, HenkinError, Structure, Term,
};
use crate::proplogic::{evaluate, Assignment, Formula};

/// Largest base encoded over the full powerset without an explicit field.
pub const FULL_FIELD_MAX_BASE: u32 = 4;
/// Largest field accepted at all.
pub const FIELD_CAP: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error("field of {size} sets over base {n} is too large")]
    FieldTooLarge { n: u32, size: usize },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("filter is improper")]
    ImproperFilter,
    #[error("not a model: axiom #{axiom} is false: {text}")]
    NotAModel { axiom: usize, text: String },
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Henkin(#[from] HenkinError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EncScheme {
    /// `U(a_X)` for a filter member `X`.
    Member,
    /// `⋀ U(a_{X_i}) → U(a_Y)` with `Y ⊇ ⋂ X_i`.
    Closure,
    /// `U(a_X) ↔ ¬U(a_{n∖X})`.
    Complement,
}

impl fmt::Display for EncScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EncScheme::Member => "member",
            EncScheme::Closure => "closure",
            EncScheme::Complement => "complement",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedAxiom {
    pub scheme: EncScheme,
    pub formula: Formula,
}

/// Atom `a<i>` stands for `U(a_X)` with `X = field[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterTheory {
    pub n: u32,
    pub width: usize,
    pub field: Vec<Subset>,
    pub axioms: Vec<EncodedAxiom>,
    pub filter: FiniteFilter,
    /// Whether the closure scheme was pruned to covers and pairwise meets.
    pub pruned: bool,
}

impl FilterTheory {
    pub fn atom(&self, x: Subset) -> Option<usize> {
        self.field.binary_search(&x).ok()
    }

    pub fn formulas(&self) -> Vec<Formula> {
        self.axioms.iter().map(|a| a.formula.clone()).collect()
    }

    pub fn count(&self, scheme: EncScheme) -> usize {
        self.axioms.iter().filter(|a| a.scheme == scheme).count()
    }

    /// Name of the constant for `x`: `a_` followed by its elements.
    pub fn constant_name(x: Subset) -> String {
        let parts: Vec<String> = x.elems().map(|e| e.to_string()).collect();
        format!("a_{}", parts.join("_"))
    }

    /// The theory over `U` and the constants `a_X`.
    pub fn to_fo(&self) -> Vec<FOFormula> {
        let u = |g: usize| {
            FOFormula::rel(
                "U",
                vec![Term::constant(&Self::constant_name(self.field[g]))],
            )
        };
        fn lift(f: &Formula, u: &impl Fn(usize) -> FOFormula) -> FOFormula {
            match f {
                Formula::Atom(g) => u(*g),
                Formula::Not(x) => FOFormula::not(lift(x, u)),
                Formula::And(xs) => FOFormula::And(xs.iter().map(|x| lift(x, u)).collect()),
                Formula::Or(xs) => FOFormula::Or(xs.iter().map(|x| lift(x, u)).collect()),
            }
        }
        self.axioms.iter().map(|a| lift(&a.formula, &u)).collect()
    }
}

fn check_field(n: u32, field: &[Subset]) -> Result<(), EncodeError> {
    let set: BTreeSet<Subset> = field.iter().copied().collect();
    let full = Subset::full(n);
    if !set.contains(&full) || !set.contains(&Subset(0)) {
        return Err(EncodeError::InvalidField(
            "must contain the empty set and the base".into(),
        ));
    }
    for &x in &set {
        if !x.is_subset_of(full) {
            return Err(EncodeError::InvalidField(format!(
                "{x} is not a subset of {n}"
            )));
        }
        if !set.contains(&x.complement(n)) {
            return Err(EncodeError::InvalidField(format!(
                "misses the complement of {x}"
            )));
        }
        for &y in &set {
            if !set.contains(&x.intersect(y)) {
                return Err(EncodeError::InvalidField(format!("misses {x} ∩ {y}")));
            }
        }
    }
    Ok(())
}

/// All subsets of `items` with fewer than `limit` elements, smallest first.
fn small_subsets(items: usize, limit: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 1..limit {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&l| l + 1);
            for i in start..items {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Compiles "`filter` extends to an ultrafilter on `field`" into a theory.
///
/// The field defaults to the full powerset up to [`FULL_FIELD_MAX_BASE`]. With
/// `pruned`, the closure scheme keeps only `U(a_n)`, the cover steps
/// `U(a_X) → U(a_Y)` for `Y` a minimal proper superset of `X` in the field,
/// and the pairwise meets `U(a_X) ∧ U(a_Z) → U(a_{X∩Z})` for incomparable
/// `X, Z` (when `width ≥ 3`); every literal instance follows from these.
pub fn encode_filter_extension(
    filter: &FiniteFilter,
    width: usize,
    field: Option<Vec<Subset>>,
    pruned: bool,
) -> Result<FilterTheory, EncodeError> {
    let n = filter.n();
    let mut field = match field {
        Some(f) => f,
        None if n <= FULL_FIELD_MAX_BASE => Subset::all(n).collect(),
        None => {
            return Err(EncodeError::FieldTooLarge {
                n,
                size: 1 << n.min(62),
            })
        }
    };
    field.sort();
    field.dedup();
    if field.len() > FIELD_CAP {
        return Err(EncodeError::FieldTooLarge {
            n,
            size: field.len(),
        });
    }
    check_field(n, &field)?;
    if let Some(g) = filter
        .generators()
        .iter()
        .find(|g| field.binary_search(g).is_err())
    {
        return Err(EncodeError::InvalidField(format!(
            "generator {g} is not in the field"
        )));
    }
    if filter.core().is_empty() {
        return Err(EncodeError::ImproperFilter);
    }
    let width = width.max(2);
    let at = |x: Subset| Formula::Atom(field.binary_search(&x).expect("field is closed"));
    let mut axioms = Vec::new();
    let mut push = |scheme, formula| axioms.push(EncodedAxiom { scheme, formula });

    for &x in &field {
        if filter.contains(x) {
            push(EncScheme::Member, at(x));
        }
    }

    if pruned {
        push(EncScheme::Closure, at(Subset::full(n)));
        for &x in &field {
            let above: Vec<Subset> = field
                .iter()
                .copied()
                .filter(|&y| y != x && x.is_subset_of(y))
                .collect();
            for &y in &above {
                let minimal = !above.iter().any(|&z| z != y && z.is_subset_of(y));
                if minimal {
                    push(EncScheme::Closure, Formula::implies(at(x), at(y)));
                }
            }
        }
        if width >= 3 {
            for (i, &x) in field.iter().enumerate() {
                for &z in &field[i + 1..] {
                    if !x.is_subset_of(z) && !z.is_subset_of(x) {
                        let premise = Formula::And(vec![at(x), at(z)]);
                        push(
                            EncScheme::Closure,
                            Formula::implies(premise, at(x.intersect(z))),
                        );
                    }
                }
            }
        }
    } else {
        for seq in small_subsets(field.len(), width) {
            let meet = seq
                .iter()
                .fold(Subset::full(n), |acc, &i| acc.intersect(field[i]));
            let premise = Formula::And(seq.iter().map(|&i| Formula::Atom(i)).collect());
            for &y in field.iter().filter(|&&y| meet.is_subset_of(y)) {
                push(EncScheme::Closure, Formula::implies(premise.clone(), at(y)));
            }
        }
    }

    for &x in &field {
        let c = x.complement(n);
        if x < c {
            let ax = Formula::And(vec![
                Formula::implies(at(x), Formula::not(at(c))),
                Formula::implies(Formula::not(at(c)), at(x)),
            ]);
            push(EncScheme::Complement, ax);
        }
    }
    Ok(FilterTheory {
        n,
        width,
        field,
        axioms,
        filter: filter.clone(),
        pruned,
    })
}

/// An ultrafilter on the field, read off a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedUltrafilter {
    pub members: Vec<Subset>,
    /// The meet of all members: a singleton when the field is the full
    /// powerset and `width ≥ 3`, possibly empty at width 2.
    pub atom: Subset,
}

impl DecodedUltrafilter {
    /// The principal ultrafilter it names, when the field is the full powerset.
    pub fn principal(&self, n: u32) -> Option<Ultrafilter> {
        (self.atom.len() == 1).then(|| Ultrafilter::Principal {
            n,
            point: self.atom.least().expect("nonempty"),
        })
    }
}

impl fmt::Display for DecodedUltrafilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.atom.len() {
            0 => write!(f, "{} members with no common point", self.members.len()),
            1 => write!(f, "principal({})", self.atom.least().expect("nonempty")),
            _ => write!(f, "generated by {}", self.atom),
        }
    }
}

/// `U = {X | a_X true}`, after checking every axiom and, independently, that
/// `U` is an ultrafilter on the field containing the filter.
pub fn decode_ultrafilter(
    s: &Assignment,
    t: &FilterTheory,
) -> Result<DecodedUltrafilter, EncodeError> {
    for (i, ax) in t.axioms.iter().enumerate() {
        let holds = evaluate(&ax.formula, s).map_err(|e| EncodeError::NotAModel {
            axiom: i,
            text: e.to_string(),
        })?;
        if !holds {
            return Err(EncodeError::NotAModel {
                axiom: i,
                text: format!("{} {}", ax.scheme, ax.formula),
            });
        }
    }
    let not_model = |text: String| EncodeError::NotAModel {
        axiom: usize::MAX,
        text,
    };
    let members: Vec<Subset> = t
        .field
        .iter()
        .enumerate()
        .filter(|&(i, _)| s.get(i) == Some(true))
        .map(|(_, &x)| x)
        .collect();
    let inside = |x: Subset| members.binary_search(&x).is_ok();
    let full = Subset::full(t.n);
    for &x in &t.field {
        if inside(x) == inside(x.complement(t.n)) {
            return Err(not_model(format!(
                "exactly one of {x} and its complement must be in U"
            )));
        }
        if t.filter.contains(x) && !inside(x) {
            return Err(not_model(format!("filter member {x} is missing")));
        }
    }
    for &x in &members {
        for &y in &t.field {
            if x.is_subset_of(y) && !inside(y) {
                return Err(not_model(format!("{y} ⊇ {x} is missing")));
            }
        }
        // Pairwise meets give every finite meet; width 2 asks for none.
        if t.width >= 3 {
            for &z in &members {
                if !inside(x.intersect(z)) {
                    return Err(not_model(format!("{x} ∩ {z} is missing")));
                }
            }
        }
    }
    if inside(Subset(0)) {
        return Err(not_model("U contains the empty set".into()));
    }
    let atom = members.iter().fold(full, |acc, &x| acc.intersect(x));
    Ok(DecodedUltrafilter { members, atom })
}

/// Reads `U(a_X)` off a structure for the first-order form of `t`.
pub fn assignment_from_structure(
    m: &Structure,
    t: &FilterTheory,
) -> Result<Assignment, EncodeError> {
    let mut s = Assignment::new();
    for (i, &x) in t.field.iter().enumerate() {
        let atom = FOFormula::rel("U", vec![Term::constant(&FilterTheory::constant_name(x))]);
        s.set(i, model_check(m, &atom)?);
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundtripReport {
    pub theory_axioms: usize,
    pub via_filter: DecodedUltrafilter,
    pub via_henkin: Option<DecodedUltrafilter>,
    /// The extension seeded at each point of the generators' intersection.
    pub direct: Vec<Ultrafilter>,
    /// Every decoded ultrafilter contains the filter.
    pub extends: bool,
    /// Every decoded ultrafilter is one of `direct`.
    pub matches_direct: bool,
    pub paths_agree: bool,
}

impl RoundtripReport {
    pub fn ok(&self) -> bool {
        self.extends && self.matches_direct
    }
}

/// Encodes over the full powerset, solves through the filter route (and the
/// first-order pipeline when `with_henkin`), decodes and compares with the
/// direct extensions.
pub fn roundtrip_check(
    filter: &FiniteFilter,
    width: usize,
    with_henkin: bool,
) -> Result<RoundtripReport, EncodeError> {
    let n = filter.n();
    let t = encode_filter_extension(filter, width, None, true)?;
    let mut direct = Vec::new();
    for p in filter.core().elems() {
        let mut gens = filter.generators().to_vec();
        gens.push(Subset::from_elems([p]));
        direct.push(extend_ultrafilter_finite(&FiniteFilter::new(
            n,
            filter.width(),
            gens,
        )?)?);
    }
    let via_filter = decode_ultrafilter(&compactness_solve(&t.formulas())?, &t)?;
    let via_henkin = if with_henkin {
        let config = HenkinConfig {
            width: width.max(3),
            ..HenkinConfig::default()
        };
        let run = henkin_pipeline(&t.to_fo(), &config)?;
        Some(decode_ultrafilter(
            &assignment_from_structure(&run.structure, &t)?,
            &t,
        )?)
    } else {
        None
    };
    let decoded: Vec<&DecodedUltrafilter> = std::iter::once(&via_filter)
        .chain(via_henkin.as_ref())
        .collect();
    let extends = decoded.iter().all(|d| {
        filter
            .generators()
            .iter()
            .all(|g| d.members.binary_search(g).is_ok())
    });
    let matches_direct = decoded
        .iter()
        .all(|d| d.principal(n).is_some_and(|u| direct.contains(&u)));
    let paths_agree = via_henkin.as_ref().is_none_or(|h| *h == via_filter);
    Ok(RoundtripReport {
        theory_axioms: t.axioms.len(),
        via_filter,
        via_henkin,
        direct,
        extends,
        matches_direct,
        paths_agree,
    })
}

/// A random proper filter on `n`: between one and three generators, redrawn
/// until their intersection is nonempty.
pub fn random_proper_filter<R: Rng>(rng: &mut R, n: u32, width: usize) -> FiniteFilter {
    assert!(n >= 1, "random filters need a nonempty base");
    loop {
        let k = rng.gen_range(1..=3);
        let gens: Vec<Subset> = (0..k)
            .map(|_| Subset(rng.gen_range(0..=Subset::full(n).0)))
            .collect();
        let f = FiniteFilter::new(n, width, gens).expect("generators lie in the base");
        if !f.core().is_empty() {
            return f;
        }
    }
}
