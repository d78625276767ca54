//! The propositional image: one variable per closure formula and the axiom
//! instances tying the variables together.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::closure::{tuples, Closure};
use super::syntax::{FOFormula, Term};
use super::HenkinError;
use crate::proplogic::{evaluate, Assignment, Formula};

/// Quantifier-free closure formulas with more atomic shells than this are not
/// checked for tautologyhood.
pub const TAUTOLOGY_SHELL_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scheme {
    /// A sentence of the input theory.
    Theory,
    /// A quantifier-free tautology.
    Tautology,
    Negation,
    Conjunction,
    Disjunction,
    /// `[[∃x̄ φ]] ↔ [[φ(c̄)]]` for the witness constants `c̄`.
    Witness,
    /// `[[φ(t̄)]] → [[φ(c̄)]]`, or `[[φ(t̄)]] → [[∃x̄ φ]]` when no witnesses exist.
    WitnessInstance,
    /// `[[∀x̄ ψ]] ↔ ¬[[∃x̄ ¬ψ]]`.
    Universal,
    /// `[[∀x̄ ψ]] → [[ψ(t̄)]]`.
    UniversalInstance,
    Reflexivity,
    Symmetry,
    Transitivity,
    Congruence,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Scheme::Theory => "theory",
            Scheme::Tautology => "tautology",
            Scheme::Negation => "negation",
            Scheme::Conjunction => "conjunction",
            Scheme::Disjunction => "disjunction",
            Scheme::Witness => "witness",
            Scheme::WitnessInstance => "witness-instance",
            Scheme::Universal => "universal",
            Scheme::UniversalInstance => "universal-instance",
            Scheme::Reflexivity => "reflexivity",
            Scheme::Symmetry => "symmetry",
            Scheme::Transitivity => "transitivity",
            Scheme::Congruence => "congruence",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axiom {
    pub scheme: Scheme,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropImage {
    /// Variable `a<i>` stands for `variables[i]`.
    pub variables: Vec<FOFormula>,
    index: BTreeMap<FOFormula, usize>,
    pub axioms: Vec<Axiom>,
    /// Closure terms in canonical order.
    pub terms: Vec<Term>,
    pub closure: Closure,
}

impl PropImage {
    pub fn var(&self, f: &FOFormula) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn eq_var(&self, a: &Term, b: &Term) -> Option<usize> {
        self.var(&FOFormula::Eq(a.clone(), b.clone()))
    }

    pub fn formulas(&self) -> Vec<Formula> {
        self.axioms.iter().map(|a| a.formula.clone()).collect()
    }

    /// The first axiom falsified by `s`, with its index.
    pub fn first_violation(&self, s: &Assignment) -> Result<Option<(usize, &Axiom)>, HenkinError> {
        if let Some(i) = (0..self.variables.len()).find(|&i| s.get(i).is_none()) {
            return Err(HenkinError::IncompleteAssignment(i));
        }
        for (i, ax) in self.axioms.iter().enumerate() {
            if !evaluate(&ax.formula, s).expect("assignment is total") {
                return Ok(Some((i, ax)));
            }
        }
        Ok(None)
    }

    pub fn count(&self, scheme: Scheme) -> usize {
        self.axioms.iter().filter(|a| a.scheme == scheme).count()
    }
}

fn iff(a: Formula, b: Formula) -> Formula {
    Formula::And(vec![
        Formula::implies(a.clone(), b.clone()),
        Formula::implies(b, a),
    ])
}

struct Emitter {
    index: BTreeMap<FOFormula, usize>,
    axioms: Vec<Axiom>,
}

impl Emitter {
    fn v(&self, f: &FOFormula) -> Formula {
        Formula::Atom(self.index[f])
    }

    fn try_v(&self, f: &FOFormula) -> Option<Formula> {
        self.index.get(f).map(|&i| Formula::Atom(i))
    }

    fn emit(&mut self, scheme: Scheme, formula: Formula) {
        self.axioms.push(Axiom { scheme, formula });
    }

    /// `⋀ [[t_i = u_i]]` over the positions where the tuples differ.
    fn args_equal(&self, ts: &[Term], us: &[Term]) -> Vec<Formula> {
        ts.iter()
            .zip(us)
            .filter(|(t, u)| t != u)
            .map(|(t, u)| self.v(&FOFormula::Eq(t.clone(), u.clone())))
            .collect()
    }
}

/// Quantifier-free `f` as a propositional formula over its atomic shells.
fn shell_form(f: &FOFormula, shells: &mut Vec<FOFormula>) -> Formula {
    match f {
        FOFormula::Rel(..) | FOFormula::Eq(..) => {
            let i = shells.iter().position(|s| s == f).unwrap_or_else(|| {
                shells.push(f.clone());
                shells.len() - 1
            });
            Formula::Atom(i)
        }
        FOFormula::Not(g) => Formula::not(shell_form(g, shells)),
        FOFormula::And(gs) => Formula::And(gs.iter().map(|g| shell_form(g, shells)).collect()),
        FOFormula::Or(gs) => Formula::Or(gs.iter().map(|g| shell_form(g, shells)).collect()),
        FOFormula::Exists(..) | FOFormula::Forall(..) => unreachable!("quantifier-free input"),
    }
}

fn is_tautology(f: &FOFormula) -> bool {
    let mut shells = Vec::new();
    let p = shell_form(f, &mut shells);
    if shells.len() > TAUTOLOGY_SHELL_CAP {
        return false;
    }
    let idx: Vec<usize> = (0..shells.len()).collect();
    (0u64..1 << shells.len())
        .all(|bits| evaluate(&p, &Assignment::from_bits(&idx, bits)).expect("total"))
}

/// Emits the variable table and the axiom instances for a stable closure.
///
/// Equality variables `[[t = u]]` exist for every pair of closure terms once
/// the closure mentions equality, together with reflexivity, symmetry,
/// transitivity and congruence for every function and relation symbol. A
/// closure without equality only gets the reflexive instances, and the term
/// quotient is then the identity.
pub fn propositionalize(closure: &Closure) -> Result<PropImage, HenkinError> {
    if !closure.stable {
        return Err(HenkinError::ClosureBudgetExceeded {
            rounds: closure.rounds,
            partial: Box::new(closure.clone()),
        });
    }
    let mut terms = closure.terms.clone();
    terms.sort();
    let mut vars: BTreeSet<FOFormula> = closure.formulas.keys().cloned().collect();
    let with_equality = closure.mentions_equality();
    for t in &terms {
        for u in &terms {
            if t == u || with_equality {
                vars.insert(FOFormula::Eq(t.clone(), u.clone()));
            }
        }
    }
    let variables: Vec<FOFormula> = vars.into_iter().collect();
    let index: BTreeMap<FOFormula, usize> = variables
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, f)| (f, i))
        .collect();
    let mut e = Emitter {
        index,
        axioms: Vec::new(),
    };

    for f in &closure.theory {
        let v = e.v(f);
        e.emit(Scheme::Theory, v);
    }

    let inst =
        |vs: &[String], body: &FOFormula, args: &[Term]| body.instantiate(vs, args).canonical();
    for f in &variables {
        match f {
            FOFormula::Rel(..) | FOFormula::Eq(..) => {}
            FOFormula::Not(g) => {
                let ax = iff(e.v(f), Formula::not(e.v(g)));
                e.emit(Scheme::Negation, ax);
            }
            FOFormula::And(gs) | FOFormula::Or(gs) => {
                let kids: Vec<Formula> = gs.iter().map(|g| e.v(g)).collect();
                let (scheme, rhs) = match f {
                    FOFormula::And(_) => (Scheme::Conjunction, Formula::And(kids)),
                    _ => (Scheme::Disjunction, Formula::Or(kids)),
                };
                let ax = iff(e.v(f), rhs);
                e.emit(scheme, ax);
            }
            FOFormula::Exists(vs, body) => {
                let witness = closure.family_of.get(f).map(|&id| {
                    let consts = closure.families[id].constants(id);
                    (inst(vs, body, &consts), consts)
                });
                if let Some((wf, _)) = &witness {
                    let ax = iff(e.v(f), e.v(wf));
                    e.emit(Scheme::Witness, ax);
                }
                for tuple in tuples(terms.len(), vs.len()) {
                    let args: Vec<Term> = tuple.iter().map(|&i| terms[i].clone()).collect();
                    if witness.as_ref().is_some_and(|(_, c)| *c == args) {
                        continue;
                    }
                    if let Some(instance) = e.try_v(&inst(vs, body, &args)) {
                        let target = witness.as_ref().map_or_else(|| e.v(f), |(wf, _)| e.v(wf));
                        e.emit(Scheme::WitnessInstance, Formula::implies(instance, target));
                    }
                }
            }
            FOFormula::Forall(vs, body) => {
                let companion =
                    FOFormula::Exists(vs.clone(), Box::new(FOFormula::not((**body).clone())))
                        .canonical();
                if let Some(c) = e.try_v(&companion) {
                    let ax = iff(e.v(f), Formula::not(c));
                    e.emit(Scheme::Universal, ax);
                }
                for tuple in tuples(terms.len(), vs.len()) {
                    let args: Vec<Term> = tuple.iter().map(|&i| terms[i].clone()).collect();
                    if let Some(instance) = e.try_v(&inst(vs, body, &args)) {
                        let ax = Formula::implies(e.v(f), instance);
                        e.emit(Scheme::UniversalInstance, ax);
                    }
                }
            }
        }
        if f.is_quantifier_free()
            && !matches!(f, FOFormula::Rel(..) | FOFormula::Eq(..))
            && is_tautology(f)
        {
            let v = e.v(f);
            e.emit(Scheme::Tautology, v);
        }
    }

    for t in &terms {
        let v = e.v(&FOFormula::Eq(t.clone(), t.clone()));
        e.emit(Scheme::Reflexivity, v);
    }
    if with_equality {
        equality_axioms(&mut e, &terms, &variables);
    }
    Ok(PropImage {
        variables,
        index: e.index,
        axioms: e.axioms,
        terms,
        closure: closure.clone(),
    })
}

fn equality_axioms(e: &mut Emitter, terms: &[Term], variables: &[FOFormula]) {
    let eq = |e: &Emitter, a: &Term, b: &Term| e.v(&FOFormula::Eq(a.clone(), b.clone()));
    for (i, t) in terms.iter().enumerate() {
        for u in &terms[i + 1..] {
            let ax = Formula::implies(eq(e, t, u), eq(e, u, t));
            e.emit(Scheme::Symmetry, ax);
            let ax = Formula::implies(eq(e, u, t), eq(e, t, u));
            e.emit(Scheme::Symmetry, ax);
        }
    }
    for t in terms {
        for u in terms.iter().filter(|u| *u != t) {
            for w in terms.iter().filter(|w| *w != t && *w != u) {
                let ax =
                    Formula::implies(Formula::And(vec![eq(e, t, u), eq(e, u, w)]), eq(e, t, w));
                e.emit(Scheme::Transitivity, ax);
            }
        }
    }
    // Function congruence over pairs of closure terms with the same head.
    let apps: Vec<(&String, &Vec<Term>, &Term)> = terms
        .iter()
        .filter_map(|t| match t {
            Term::App(f, args) => Some((f, args, t)),
            _ => None,
        })
        .collect();
    for &(f, xs, t) in &apps {
        for &(g, ys, u) in &apps {
            if f == g && t != u {
                let ax = Formula::implies(Formula::And(e.args_equal(xs, ys)), eq(e, t, u));
                e.emit(Scheme::Congruence, ax);
            }
        }
    }
    // Relation congruence over pairs of tabled atoms with the same relation.
    let atoms: Vec<(&String, &Vec<Term>, &FOFormula)> = variables
        .iter()
        .filter_map(|f| match f {
            FOFormula::Rel(r, args) if !args.is_empty() => Some((r, args, f)),
            _ => None,
        })
        .collect();
    for &(r, xs, a) in &atoms {
        for &(q, ys, b) in &atoms {
            if r == q && a != b {
                let mut premises = e.args_equal(xs, ys);
                premises.push(e.v(a));
                let ax = Formula::implies(Formula::And(premises), e.v(b));
                e.emit(Scheme::Congruence, ax);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::closure::{close_witnesses, ClosureLimits};
    use super::*;

    fn image(t: &[FOFormula]) -> PropImage {
        propositionalize(&close_witnesses(t, 4, ClosureLimits::default()).unwrap()).unwrap()
    }

    fn p(t: Term) -> FOFormula {
        FOFormula::rel("P", vec![t])
    }

    #[test]
    fn ground_atom_is_asserted() {
        let pc = p(Term::constant("c"));
        let im = image(std::slice::from_ref(&pc));
        let v = im.var(&pc).unwrap();
        assert!(im.axioms.contains(&Axiom {
            scheme: Scheme::Theory,
            formula: Formula::Atom(v)
        }));
        assert_eq!(im.count(Scheme::Witness), 0);
    }

    #[test]
    fn existential_is_tied_to_its_witness() {
        let ex = FOFormula::exists(&["x"], p(Term::var("x")));
        let im = image(std::slice::from_ref(&ex));
        let (e, w) = (
            im.var(&ex.canonical()).unwrap(),
            im.var(&p(Term::Witness {
                family: 0,
                index: 0,
            }))
            .unwrap(),
        );
        let expected = iff(Formula::Atom(e), Formula::Atom(w));
        assert!(im.axioms.contains(&Axiom {
            scheme: Scheme::Witness,
            formula: expected
        }));
    }

    #[test]
    fn term_instances_imply_the_witness_instance() {
        let t = [
            FOFormula::exists(&["x"], p(Term::var("x"))),
            p(Term::constant("d")),
        ];
        let im = image(&t);
        let pd = im.var(&p(Term::constant("d"))).unwrap();
        let pw = im
            .var(&p(Term::Witness {
                family: 0,
                index: 0,
            }))
            .unwrap();
        let expected = Formula::implies(Formula::Atom(pd), Formula::Atom(pw));
        assert!(im.axioms.contains(&Axiom {
            scheme: Scheme::WitnessInstance,
            formula: expected
        }));
    }

    #[test]
    fn equality_axioms_only_when_needed() {
        let im = image(&[p(Term::constant("c")), p(Term::constant("d"))]);
        assert_eq!(im.count(Scheme::Transitivity), 0);
        assert_eq!(im.count(Scheme::Reflexivity), 2);
        assert!(im
            .eq_var(&Term::constant("c"), &Term::constant("d"))
            .is_none());

        let im = image(&[
            FOFormula::Eq(Term::constant("c"), Term::constant("d")),
            p(Term::constant("e")),
        ]);
        assert_eq!(im.count(Scheme::Reflexivity), 3);
        assert_eq!(im.count(Scheme::Symmetry), 6);
        assert_eq!(im.count(Scheme::Transitivity), 6);
        // P(c), P(d), P(e) are not all tabled; only P(e) is.
        assert_eq!(im.count(Scheme::Congruence), 0);
    }

    #[test]
    fn tautologies_are_asserted() {
        let pc = p(Term::constant("c"));
        let taut = FOFormula::Or(vec![pc.clone(), FOFormula::not(pc)]);
        let im = image(&[FOFormula::not(FOFormula::not(taut.clone()))]);
        let v = im.var(&taut).unwrap();
        assert!(im.axioms.contains(&Axiom {
            scheme: Scheme::Tautology,
            formula: Formula::Atom(v)
        }));
    }
}
