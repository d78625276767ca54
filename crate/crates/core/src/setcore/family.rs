use std::collections::{BTreeMap, HashMap};

use super::{indep_member, BaseDomain, BaseSet, DomainKind, Elem, GroundPoint, SetError};

/// Combination checks [`separating_support`] spends on the exact minimal
/// search before falling back to greedy growth.
const MINIMAL_SEARCH_BUDGET: usize = 1 << 16;

/// Named generators `γ ↦ A_γ` over a base domain.
#[derive(Debug, Clone)]
pub struct FamilySpec {
    domain: BaseDomain,
    generators: Vec<BaseSet>,
}

impl FamilySpec {
    /// Validates that generators are subsets of the domain and pairwise
    /// distinct, with every difference found below `search_bound` or certified
    /// by a difference helper.
    pub fn new(
        domain: BaseDomain,
        generators: Vec<BaseSet>,
        search_bound: u64,
    ) -> Result<Self, SetError> {
        if let DomainKind::Finite(n) = domain.kind() {
            for (i, g) in generators.iter().enumerate() {
                if let BaseSet::Finite(v) = g {
                    if let Some(x) = v.iter().find(|&&x| x >= n) {
                        return Err(SetError::InvalidSet(format!(
                            "generator {i} contains {x} outside {domain}"
                        )));
                    }
                }
            }
        }
        let fam = FamilySpec { domain, generators };
        for i in 0..fam.generators.len() {
            for j in i + 1..fam.generators.len() {
                if fam.difference(i, j, search_bound).is_none() {
                    return Err(SetError::DuplicateGenerators {
                        first: i,
                        second: j,
                        bound: search_bound,
                    });
                }
            }
        }
        Ok(fam)
    }

    pub fn domain(&self) -> &BaseDomain {
        &self.domain
    }

    pub fn generators(&self) -> &[BaseSet] {
        &self.generators
    }

    pub fn generator(&self, g: usize) -> Option<&BaseSet> {
        self.generators.get(g)
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    fn difference(&self, i: usize, j: usize, bound: u64) -> Option<Elem> {
        first_difference_in(
            &self.domain,
            &self.generators[i],
            &self.generators[j],
            bound,
        )
    }
}

fn first_difference_in(domain: &BaseDomain, a: &BaseSet, b: &BaseSet, bound: u64) -> Option<Elem> {
    a.first_difference(b, domain.clamp(bound))
        .filter(|&x| domain.contains(x))
}

/// A finite sign pattern `s : Γ → 2` naming the cell
/// `A(s) = ⋂{I(A_γ) | s(γ)=1} ∖ ⋃{I(A_γ) | s(γ)=0}`.
/// The empty pattern names the whole ground space.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellSpec {
    signs: BTreeMap<usize, bool>,
}

impl CellSpec {
    pub fn new(signs: BTreeMap<usize, bool>) -> Self {
        CellSpec { signs }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, bool)>) -> Self {
        CellSpec {
            signs: pairs.into_iter().collect(),
        }
    }

    pub fn signs(&self) -> &BTreeMap<usize, bool> {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn positives(&self) -> impl Iterator<Item = usize> + '_ {
        self.signs.iter().filter(|(_, &v)| v).map(|(&g, _)| g)
    }

    pub fn negatives(&self) -> impl Iterator<Item = usize> + '_ {
        self.signs.iter().filter(|(_, &v)| !v).map(|(&g, _)| g)
    }

    /// Whether `p` lies in the cell.
    pub fn contains(&self, family: &FamilySpec, p: &GroundPoint) -> Result<bool, SetError> {
        for (&g, &sign) in &self.signs {
            let a = family.generator(g).ok_or(SetError::UnknownGenerator(g))?;
            if indep_member(p, a) != sign {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All `2^|Γ|` patterns over `gamma`, in lexicographic order of sign vectors.
    pub fn all_over(gamma: &[usize]) -> Vec<CellSpec> {
        let k = gamma.len();
        (0u64..1 << k)
            .map(|bits| {
                CellSpec::from_pairs(
                    gamma
                        .iter()
                        .enumerate()
                        .map(|(i, &g)| (g, bits >> (k - 1 - i) & 1 == 1)),
                )
            })
            .collect()
    }
}

fn separates(positives: &[&BaseSet], negatives: &[&BaseSet], x: &[Elem]) -> bool {
    first_collision(positives, negatives, x).is_none()
}

/// First (positive, negative) pair whose traces on `x` coincide.
fn first_collision(
    positives: &[&BaseSet],
    negatives: &[&BaseSet],
    x: &[Elem],
) -> Option<(usize, usize)> {
    let mut traces: HashMap<Vec<Elem>, usize> = HashMap::with_capacity(positives.len());
    for (i, a) in positives.iter().enumerate() {
        traces.entry(a.restrict(x)).or_insert(i);
    }
    negatives
        .iter()
        .enumerate()
        .find_map(|(j, b)| traces.get(&b.restrict(x)).map(|&i| (i, j)))
}

/// A finite support `X` with `|X| < width` on which no positive set agrees
/// with a negative one, i.e. `{A_α ∩ X} ∩ {B_β ∩ X} = ∅`.
///
/// Candidates are drawn from the least difference of every positive/negative
/// pair; the result is the first separating candidate subset in (size, lex)
/// order. Sizes are scanned whole while their combined candidate count stays
/// within [`MINIMAL_SEARCH_BUDGET`]; past that the search falls back to
/// growing `X` from empty by the difference of the first colliding pair
/// until nothing collides.
pub fn separating_support(
    domain: &BaseDomain,
    positives: &[&BaseSet],
    negatives: &[&BaseSet],
    search_bound: u64,
) -> Result<Vec<Elem>, SetError> {
    let mut pool = Vec::new();
    let mut diff = vec![vec![0; negatives.len()]; positives.len()];
    for (i, a) in positives.iter().enumerate() {
        for (j, b) in negatives.iter().enumerate() {
            let g = first_difference_in(domain, a, b, search_bound)
                .ok_or(SetError::NoDifferenceFound(search_bound))?;
            diff[i][j] = g;
            pool.push(g);
        }
    }
    pool.sort_unstable();
    pool.dedup();

    let width = domain.width();
    let mut budget = MINIMAL_SEARCH_BUDGET;
    let mut exhausted = true;
    for size in hitting_lower_bound(&pool, positives, negatives)..=pool.len().min(width - 1) {
        let layer = binomial(pool.len(), size);
        if layer > budget {
            exhausted = false;
            break;
        }
        budget -= layer;
        if let Some(x) = first_separating_of_size(&pool, size, positives, negatives) {
            return Ok(x);
        }
    }
    if exhausted {
        // Every admissible size was tried; only larger candidates separate.
        return Err(SetError::WidthExceeded {
            size: pool.len(),
            width,
        });
    }

    let mut x: Vec<Elem> = Vec::new();
    while let Some((i, j)) = first_collision(positives, negatives, &x) {
        let g = diff[i][j];
        let at = x
            .binary_search(&g)
            .expect_err("a contained difference separates its pair");
        x.insert(at, g);
    }
    if x.len() >= width {
        return Err(SetError::WidthExceeded {
            size: x.len(),
            width,
        });
    }
    Ok(x)
}

/// `X ⊆ pool` separates a pair exactly when it meets the pool elements the
/// two sets disagree on, so pairwise disjoint disagreement sets each need
/// their own element of `X`.
fn hitting_lower_bound(pool: &[Elem], positives: &[&BaseSet], negatives: &[&BaseSet]) -> usize {
    let words = pool.len().div_ceil(64);
    let mask = |a: &BaseSet| {
        let mut m = vec![0u64; words];
        for (k, &e) in pool.iter().enumerate() {
            if a.contains(e) {
                m[k / 64] |= 1 << (k % 64);
            }
        }
        m
    };
    let pos: Vec<Vec<u64>> = positives.iter().map(|a| mask(a)).collect();
    let neg: Vec<Vec<u64>> = negatives.iter().map(|b| mask(b)).collect();
    let mut used = vec![0u64; words];
    let mut bound = 0;
    for a in &pos {
        for b in &neg {
            if (0..words).all(|w| (a[w] ^ b[w]) & used[w] == 0) {
                bound += 1;
                for w in 0..words {
                    used[w] |= a[w] ^ b[w];
                }
            }
        }
    }
    bound
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn first_separating_of_size(
    pool: &[Elem],
    size: usize,
    positives: &[&BaseSet],
    negatives: &[&BaseSet],
) -> Option<Vec<Elem>> {
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let x: Vec<Elem> = idx.iter().map(|&i| pool[i]).collect();
        if separates(positives, negatives, &x) {
            return Some(x);
        }
        if !next_combination(&mut idx, pool.len()) {
            return None;
        }
    }
}

/// Advances `idx` to the next k-combination of `0..n` in lex order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `count` distinct points of the cell `A(s)`, each of the form
/// `⟨X, {A_γ ∩ X | s(γ)=1}⟩` for a support `X` extending the separating
/// support by fresh elements in increasing order.
pub fn cell_witness(
    family: &FamilySpec,
    s: &CellSpec,
    count: usize,
    search_bound: u64,
) -> Result<Vec<GroundPoint>, SetError> {
    let domain = family.domain();
    let width = domain.width();
    if s.len() >= width {
        return Err(SetError::WidthExceeded {
            size: s.len(),
            width,
        });
    }
    let lookup = |g: usize| family.generator(g).ok_or(SetError::UnknownGenerator(g));
    let positives = s.positives().map(lookup).collect::<Result<Vec<_>, _>>()?;
    let negatives = s.negatives().map(lookup).collect::<Result<Vec<_>, _>>()?;
    let base = separating_support(domain, &positives, &negatives, search_bound)?;

    let limit = match domain.kind() {
        DomainKind::Finite(n) => n,
        DomainKind::Omega => search_bound.max(base.last().map_or(0, |m| m + 1)),
    };
    let fresh: Vec<Elem> = (0..limit)
        .filter(|e| base.binary_search(e).is_err())
        .collect();

    let mut out = Vec::with_capacity(count);
    'sizes: for extra in 0..=fresh.len().min(width - 1 - base.len()) {
        if out.len() == count {
            break;
        }
        let mut idx: Vec<usize> = (0..extra).collect();
        loop {
            if out.len() == count {
                break 'sizes;
            }
            let mut x = base.clone();
            x.extend(idx.iter().map(|&i| fresh[i]));
            x.sort_unstable();
            let trace = positives.iter().map(|a| a.restrict(&x)).collect();
            let p = GroundPoint::from_parts(x, trace);
            debug_assert!(s.contains(family, &p).unwrap_or(false));
            if !s.contains(family, &p)? {
                return Err(SetError::InvalidPoint(format!(
                    "constructed {p} lies outside the cell"
                )));
            }
            out.push(p);
            if !next_combination(&mut idx, fresh.len()) {
                break;
            }
        }
    }
    if out.len() < count {
        return Err(SetError::ExhaustedSupports {
            found: out.len(),
            wanted: count,
        });
    }
    Ok(out)
}
