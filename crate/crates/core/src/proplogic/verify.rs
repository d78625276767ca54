//! Exhaustive pointwise checks of the embedding over a truncated ground space.

use std::collections::BTreeSet;

use super::{cell_of, evaluate, iota, support, Assignment, Formula, PropError};
use crate::setcore::{enumerate_ground, indep_member, FamilySpec, GroundPoint, SetError, SetExpr};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IotaReport {
    pub holds: bool,
    pub counterexample: Option<GroundPoint>,
    pub points_checked: usize,
    /// Points of the truncated ground space lying in `ι(φ)`.
    pub image_size: usize,
    /// Assignments over the index set satisfying the formula.
    pub satisfying_cells: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionReport {
    pub holds: bool,
    /// Cell sizes in sign-lex order of assignments over the index set.
    pub cell_sizes: Vec<(Assignment, usize)>,
    pub total_points: usize,
    /// Points lying in more than one cell.
    pub overlaps: usize,
    /// Points lying in no cell.
    pub uncovered: usize,
    /// Points not in the cell of their own trace pattern.
    pub pattern_misses: usize,
    pub counterexample: Option<GroundPoint>,
}

/// Per-point generator membership, computed on demand.
struct MemberCache<'a> {
    family: &'a FamilySpec,
    point: &'a GroundPoint,
    known: Vec<Option<bool>>,
}

impl<'a> MemberCache<'a> {
    fn new(family: &'a FamilySpec, point: &'a GroundPoint) -> Self {
        MemberCache {
            family,
            point,
            known: vec![None; family.len()],
        }
    }

    fn member(&mut self, g: usize) -> Result<bool, SetError> {
        let slot = self.known.get_mut(g).ok_or(SetError::UnknownGenerator(g))?;
        Ok(*slot.get_or_insert_with(|| indep_member(self.point, &self.family.generators()[g])))
    }

    fn eval(&mut self, e: &SetExpr) -> Result<bool, SetError> {
        e.eval_with(&mut |g| self.member(g))
    }
}

fn assignments_over(gamma: &BTreeSet<usize>) -> impl Iterator<Item = Assignment> {
    let idx: Vec<usize> = gamma.iter().copied().collect();
    (0u64..1 << idx.len()).map(move |bits| Assignment::from_bits(&idx, bits))
}

/// Checks `ι(φ) = ⋃{A(s) | s ∈ 2^Γ, s(φ) = 1}` at every point of the ground
/// space truncated to supports inside `{0, …, truncation-1}`.
pub fn verify_iota_identity(
    phi: &Formula,
    gamma: &BTreeSet<usize>,
    family: &FamilySpec,
    truncation: u64,
) -> Result<IotaReport, PropError> {
    if let Some(&g) = support(phi).iter().find(|g| !gamma.contains(g)) {
        return Err(PropError::IndexSetTooSmall(g));
    }
    phi.check_width(family.domain().width())?;
    let image = iota(phi, family)?;
    let mut cells = Vec::new();
    for s in assignments_over(gamma) {
        if evaluate(phi, &s)? {
            cells.push(cell_of(&s));
        }
    }
    let points = enumerate_ground(family.domain(), truncation)?;
    let mut report = IotaReport {
        holds: true,
        counterexample: None,
        points_checked: points.len(),
        image_size: 0,
        satisfying_cells: cells.len(),
    };
    for p in &points {
        let mut cache = MemberCache::new(family, p);
        let lhs = cache.eval(&image)?;
        let mut rhs = false;
        for c in &cells {
            if cache.eval(c)? {
                rhs = true;
                break;
            }
        }
        report.image_size += usize::from(lhs);
        if lhs != rhs && report.holds {
            report.holds = false;
            report.counterexample = Some(p.clone());
        }
    }
    Ok(report)
}

/// Checks that the cells `{A(s) | s ∈ 2^Γ}` are pairwise disjoint and cover
/// the truncated ground space, and that every point lies in the cell of its
/// own trace pattern `s_p(γ) = [p ∈ I(A_γ)]`.
pub fn partition_check(
    gamma: &BTreeSet<usize>,
    family: &FamilySpec,
    truncation: u64,
) -> Result<PartitionReport, PropError> {
    if let Some(&g) = gamma.iter().find(|&&g| g >= family.len()) {
        return Err(PropError::UnknownGenerator(g));
    }
    let cells: Vec<(Assignment, SetExpr)> = assignments_over(gamma)
        .map(|s| {
            let e = cell_of(&s);
            (s, e)
        })
        .collect();
    let points = enumerate_ground(family.domain(), truncation)?;
    let mut sizes = vec![0usize; cells.len()];
    let mut report = PartitionReport {
        holds: true,
        cell_sizes: Vec::new(),
        total_points: points.len(),
        overlaps: 0,
        uncovered: 0,
        pattern_misses: 0,
        counterexample: None,
    };
    for p in &points {
        let mut cache = MemberCache::new(family, p);
        let mut hits = 0;
        let mut sign_clash = false;
        for (i, (s, e)) in cells.iter().enumerate() {
            if cache.eval(e)? {
                hits += 1;
                sizes[i] += 1;
                // A(s) ⊆ A_γ where s(γ)=1 and A(s) ∩ A_γ = ∅ where s(γ)=0.
                for (&g, &v) in s.values() {
                    sign_clash |= cache.member(g)? != v;
                }
            }
        }
        let own = Assignment::from_pairs(
            gamma
                .iter()
                .map(|&g| (g, indep_member(p, &family.generators()[g]))),
        );
        let in_own = cache.eval(&cell_of(&own))?;
        let bad = sign_clash
            || match hits {
                0 => {
                    report.uncovered += 1;
                    true
                }
                1 => false,
                _ => {
                    report.overlaps += 1;
                    true
                }
            };
        if !in_own {
            report.pattern_misses += 1;
        }
        if (bad || !in_own) && report.holds {
            report.holds = false;
            report.counterexample = Some(p.clone());
        }
    }
    report.cell_sizes = cells.into_iter().map(|(s, _)| s).zip(sizes).collect();
    Ok(report)
}

/// Extensional equality of `ι(φ)` and `ι(ψ)` on the truncated ground space.
pub fn iota_equivalent(
    phi: &Formula,
    psi: &Formula,
    family: &FamilySpec,
    truncation: u64,
) -> Result<bool, PropError> {
    let (a, b) = (iota(phi, family)?, iota(psi, family)?);
    for p in enumerate_ground(family.domain(), truncation)? {
        let mut cache = MemberCache::new(family, &p);
        if cache.eval(&a)? != cache.eval(&b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcore::{BaseDomain, BaseSet};

    fn full_family(n: u64) -> FamilySpec {
        let gens = (0u64..1 << n)
            .map(|m| BaseSet::finite((0..n).filter(|i| m >> i & 1 == 1)))
            .collect();
        FamilySpec::new(BaseDomain::finite(n, n as usize + 1).unwrap(), gens, 64).unwrap()
    }

    #[test]
    fn identity_on_atoms_and_contradictions() {
        let fam = full_family(2);
        let a0 = Formula::Atom(0);
        for t in 0..=2 {
            let r = verify_iota_identity(&a0, &BTreeSet::from([0]), &fam, t).unwrap();
            assert!(r.holds);
        }
        let contra = Formula::And(vec![a0.clone(), Formula::not(a0)]);
        let r = verify_iota_identity(&contra, &BTreeSet::from([0]), &fam, 2).unwrap();
        assert!(r.holds);
        assert_eq!(r.image_size, 0);
        assert_eq!(r.satisfying_cells, 0);
    }

    #[test]
    fn gamma_must_cover_support() {
        let fam = full_family(2);
        let f = Formula::Or(vec![Formula::Atom(0), Formula::Atom(1)]);
        assert_eq!(
            verify_iota_identity(&f, &BTreeSet::from([0]), &fam, 2),
            Err(PropError::IndexSetTooSmall(1))
        );
    }

    #[test]
    fn partition_sizes_sum_to_ground_size() {
        let fam = FamilySpec::new(
            BaseDomain::finite(2, 3).unwrap(),
            vec![BaseSet::finite([0]), BaseSet::finite([1])],
            64,
        )
        .unwrap();
        let r = partition_check(&BTreeSet::from([0, 1]), &fam, 2).unwrap();
        assert!(r.holds);
        assert_eq!(r.cell_sizes.len(), 4);
        assert_eq!(r.cell_sizes.iter().map(|(_, n)| n).sum::<usize>(), 26);
        assert!(r.cell_sizes.iter().all(|(_, n)| *n > 0));

        let r = partition_check(&BTreeSet::new(), &fam, 2).unwrap();
        assert_eq!(r.cell_sizes, vec![(Assignment::new(), 26)]);
    }

    #[test]
    fn tautologically_equivalent_formulas_share_images() {
        let fam = full_family(2);
        let (a, b) = (Formula::Atom(1), Formula::Atom(2));
        let lhs = Formula::not(Formula::And(vec![a.clone(), b.clone()]));
        let rhs = Formula::Or(vec![Formula::not(a.clone()), Formula::not(b.clone())]);
        assert!(iota_equivalent(&lhs, &rhs, &fam, 2).unwrap());
        assert!(!iota_equivalent(&a, &b, &fam, 2).unwrap());
    }
}
