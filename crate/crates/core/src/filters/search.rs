//! Backtracking search for a sign pattern making every constraint expression
//! true on its cell: decide, propagate through complements, intersections
//! and unions, backtrack chronologically. No learning.

use std::collections::{BTreeMap, VecDeque};

use crate::setcore::{CellSpec, SetExpr};

#[derive(Debug)]
struct Conflict;

type Forced = Option<(usize, bool)>;

struct Search<'a> {
    constraints: &'a [SetExpr],
    /// Generator index → variable slot.
    slot: BTreeMap<usize, usize>,
    vars: Vec<usize>,
    value: Vec<Option<bool>>,
    watch: Vec<Vec<usize>>,
    trail: Vec<usize>,
    /// (trail length before the decision, variable, whether both values were tried)
    decisions: Vec<(usize, usize, bool)>,
}

/// The first sign pattern, in sign-lex order over the mentioned generators
/// (false before true), under which every constraint holds; `None` when the
/// constraints are jointly unsatisfiable.
pub fn find_cell(constraints: &[SetExpr]) -> Option<CellSpec> {
    let mut vars: Vec<usize> = constraints.iter().flat_map(|c| c.generators()).collect();
    vars.sort_unstable();
    vars.dedup();
    let slot: BTreeMap<usize, usize> = vars.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let mut watch = vec![Vec::new(); vars.len()];
    for (ci, c) in constraints.iter().enumerate() {
        for g in c.generators() {
            watch[slot[&g]].push(ci);
        }
    }
    let mut s = Search {
        constraints,
        slot,
        value: vec![None; vars.len()],
        vars,
        watch,
        trail: Vec::new(),
        decisions: Vec::new(),
    };
    s.run()
}

impl<'a> Search<'a> {
    fn run(&mut self) -> Option<CellSpec> {
        let all: Vec<usize> = (0..self.constraints.len()).collect();
        if self.propagate(all).is_err() {
            return None;
        }
        loop {
            match self.value.iter().position(Option::is_none) {
                None => {
                    return Some(CellSpec::from_pairs(
                        self.vars
                            .iter()
                            .zip(&self.value)
                            .map(|(&g, v)| (g, v.expect("complete"))),
                    ))
                }
                Some(var) => {
                    self.decisions.push((self.trail.len(), var, false));
                    let mut outcome = self.assign_and_propagate(var, false);
                    while outcome.is_err() {
                        // Undo to the most recent decision with an untried value.
                        loop {
                            let (mark, v, flipped) = self.decisions.pop()?;
                            self.undo_to(mark);
                            if !flipped {
                                self.decisions.push((mark, v, true));
                                outcome = self.assign_and_propagate(v, true);
                                break;
                            }
                        }
                    }
                }
            }
        }
    }

    fn undo_to(&mut self, mark: usize) {
        for v in self.trail.drain(mark..) {
            self.value[v] = None;
        }
    }

    fn assign(&mut self, var: usize, val: bool) {
        self.value[var] = Some(val);
        self.trail.push(var);
    }

    fn assign_and_propagate(&mut self, var: usize, val: bool) -> Result<(), Conflict> {
        self.assign(var, val);
        self.propagate(self.watch[var].clone())
    }

    fn propagate(&mut self, start: Vec<usize>) -> Result<(), Conflict> {
        let mut queue: VecDeque<usize> = start.into();
        let mut queued = vec![false; self.constraints.len()];
        for &c in &queue {
            queued[c] = true;
        }
        while let Some(ci) = queue.pop_front() {
            queued[ci] = false;
            while let Some((g, val)) = self.force(&self.constraints[ci], true)? {
                let var = self.slot[&g];
                self.assign(var, val);
                for &other in &self.watch[var] {
                    if other != ci && !queued[other] {
                        queued[other] = true;
                        queue.push_back(other);
                    }
                }
            }
        }
        Ok(())
    }

    fn eval3(&self, e: &SetExpr) -> Option<bool> {
        match e {
            SetExpr::Generator(g) => self.value[self.slot[g]],
            SetExpr::Complement(c) => self.eval3(c).map(|v| !v),
            SetExpr::Intersect(es) => fold3(es.iter().map(|c| self.eval3(c)), false),
            SetExpr::Union(es) => fold3(es.iter().map(|c| self.eval3(c)), true),
        }
    }

    /// A literal that must hold for `e` to evaluate to `want`, a conflict if
    /// `e` already evaluates to `!want`, or nothing.
    fn force(&self, e: &SetExpr, want: bool) -> Result<Forced, Conflict> {
        match e {
            SetExpr::Generator(g) => match self.value[self.slot[g]] {
                Some(v) if v == want => Ok(None),
                Some(_) => Err(Conflict),
                None => Ok(Some((*g, want))),
            },
            SetExpr::Complement(c) => self.force(c, !want),
            SetExpr::Intersect(es) | SetExpr::Union(es) => {
                let every = matches!(e, SetExpr::Intersect(_)) == want;
                if every {
                    // Each child must evaluate to `want`.
                    for c in es {
                        if let Some(l) = self.force(c, want)? {
                            return Ok(Some(l));
                        }
                    }
                    Ok(None)
                } else {
                    // Some child must evaluate to `want`.
                    let mut open = None;
                    let mut open_count = 0;
                    for c in es {
                        match self.eval3(c) {
                            Some(v) if v == want => return Ok(None),
                            Some(_) => {}
                            None => {
                                open_count += 1;
                                open = Some(c);
                            }
                        }
                    }
                    match (open_count, open) {
                        (0, _) => Err(Conflict),
                        (1, Some(c)) => self.force(c, want),
                        _ => Ok(None),
                    }
                }
            }
        }
    }
}

/// Kleene fold: `absorbing` short-circuits, otherwise unknown if any unknown.
fn fold3(vals: impl Iterator<Item = Option<bool>>, absorbing: bool) -> Option<bool> {
    let mut unknown = false;
    for v in vals {
        match v {
            Some(b) if b == absorbing => return Some(absorbing),
            Some(_) => {}
            None => unknown = true,
        }
    }
    if unknown {
        None
    } else {
        Some(!absorbing)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(i: usize) -> SetExpr {
        SetExpr::Generator(i)
    }

    fn brute_force(constraints: &[SetExpr]) -> Option<CellSpec> {
        let mut vars: Vec<usize> = constraints.iter().flat_map(|c| c.generators()).collect();
        vars.sort_unstable();
        vars.dedup();
        CellSpec::all_over(&vars).into_iter().find(|cell| {
            constraints
                .iter()
                .all(|c| c.eval_with(&mut |x| Ok::<_, ()>(cell.signs()[&x])).unwrap())
        })
    }

    #[test]
    fn examples() {
        let cs = [g(0), SetExpr::complement(g(1))];
        assert_eq!(
            find_cell(&cs),
            Some(CellSpec::from_pairs([(0, true), (1, false)]))
        );
        let cs = [SetExpr::Union(vec![g(0), g(1)]), SetExpr::complement(g(0))];
        assert_eq!(
            find_cell(&cs),
            Some(CellSpec::from_pairs([(0, false), (1, true)]))
        );
        let cs = [SetExpr::Intersect(vec![g(0)]), SetExpr::complement(g(0))];
        assert_eq!(find_cell(&cs), None);
        assert_eq!(find_cell(&[]), Some(CellSpec::default()));
        assert_eq!(find_cell(&[SetExpr::empty()]), None);
    }

    #[test]
    fn agrees_with_brute_force_on_lex_first() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        fn rnd(rng: &mut impl Rng, d: usize) -> SetExpr {
            if d == 0 || rng.gen_ratio(1, 3) {
                return g(rng.gen_range(0..6));
            }
            match rng.gen_range(0..3) {
                0 => SetExpr::complement(rnd(rng, d - 1)),
                1 => {
                    SetExpr::Intersect((0..rng.gen_range(0..4)).map(|_| rnd(rng, d - 1)).collect())
                }
                _ => SetExpr::Union((0..rng.gen_range(0..4)).map(|_| rnd(rng, d - 1)).collect()),
            }
        }
        for _ in 0..400 {
            let n = rng.gen_range(1..6);
            let cs: Vec<SetExpr> = (0..n).map(|_| rnd(&mut rng, 3)).collect();
            assert_eq!(find_cell(&cs), brute_force(&cs), "{cs:?}");
        }
    }
}
