//! Witness closure over the finite subformula/term universe.
//!
//! Every closure formula carries the polarities under which it can occur.
//! A positive existential (or negative universal, through its companion
//! `∃¬`) needs witness constants; a negative existential (or positive
//! universal) needs an instance for every closure term tuple. Polarity keeps
//! the universe finite for nested existentials, which would otherwise be
//! instantiated at their own witnesses forever.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::syntax::{FOFormula, Signature, Term};
use super::HenkinError;

pub const POS: u8 = 1;
pub const NEG: u8 = 2;

fn flip(bits: u8) -> u8 {
    ((bits & POS) << 1) | ((bits & NEG) >> 1)
}

/// Caps on the closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureLimits {
    pub max_rounds: usize,
    pub max_terms: usize,
    pub max_formulas: usize,
}

impl Default for ClosureLimits {
    fn default() -> Self {
        ClosureLimits {
            max_rounds: 16,
            max_terms: 24,
            max_formulas: 20_000,
        }
    }
}

/// The constants `c_0 … c_{arity-1}` attached to one canonical existential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessFamily {
    pub formula: FOFormula,
    pub arity: usize,
}

impl WitnessFamily {
    pub fn constants(&self, family: usize) -> Vec<Term> {
        (0..self.arity)
            .map(|index| Term::Witness { family, index })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    /// Theory sentences in canonical form, in input order.
    pub theory: Vec<FOFormula>,
    pub signature: Signature,
    /// Closure formulas with their polarity bits.
    pub formulas: BTreeMap<FOFormula, u8>,
    /// Closure terms in insertion order.
    pub terms: Vec<Term>,
    pub families: Vec<WitnessFamily>,
    pub family_of: BTreeMap<FOFormula, usize>,
    /// Rounds that changed the closure.
    pub rounds: usize,
    /// Whether a fixpoint was reached.
    pub stable: bool,
}

impl Closure {
    /// Source existential and index of a witness constant.
    pub fn witness_source(&self, t: &Term) -> Option<(&FOFormula, usize)> {
        match t {
            Term::Witness { family, index } => {
                self.families.get(*family).map(|f| (&f.formula, *index))
            }
            _ => None,
        }
    }

    pub fn mentions_equality(&self) -> bool {
        self.formulas.keys().any(|f| matches!(f, FOFormula::Eq(..)))
    }
}

/// The existential that stands in for a domain being nonempty.
fn inhabited() -> FOFormula {
    FOFormula::exists(&["x"], FOFormula::Eq(Term::var("x"), Term::var("x"))).canonical()
}

struct Builder {
    c: Closure,
    term_set: BTreeSet<Term>,
    queue: VecDeque<(FOFormula, u8)>,
    pending: BTreeSet<FOFormula>,
    /// Quantified formula → (instance polarity, number of leading terms already
    /// covered).
    instantiators: BTreeMap<FOFormula, (u8, usize)>,
    limits: ClosureLimits,
}

impl Builder {
    fn add(&mut self, f: FOFormula, bits: u8) {
        let entry = self.c.formulas.entry(f.clone()).or_insert(0);
        let new = bits & !*entry;
        if new != 0 {
            *entry |= new;
            self.queue.push_back((f, new));
        }
    }

    fn add_terms(&mut self, f: &FOFormula) {
        let mut ts = BTreeSet::new();
        f.ground_terms(&mut ts);
        for t in ts {
            if self.term_set.insert(t.clone()) {
                self.c.terms.push(t);
            }
        }
    }

    fn register(&mut self, f: &FOFormula, bits: u8) {
        let e = self.instantiators.entry(f.clone()).or_insert((0, 0));
        if e.0 | bits != e.0 {
            e.0 |= bits;
            e.1 = 0;
        }
    }

    fn drain(&mut self) -> Result<(), HenkinError> {
        while let Some((f, bits)) = self.queue.pop_front() {
            if self.c.formulas.len() > self.limits.max_formulas {
                return Err(HenkinError::UniverseOverflow {
                    what: "formulas",
                    cap: self.limits.max_formulas,
                });
            }
            match &f {
                FOFormula::Rel(..) | FOFormula::Eq(..) => self.add_terms(&f),
                FOFormula::Not(g) => self.add((**g).clone(), flip(bits)),
                FOFormula::And(gs) | FOFormula::Or(gs) => {
                    for g in gs {
                        self.add(g.clone(), bits);
                    }
                }
                FOFormula::Exists(..) => {
                    self.add_terms(&f);
                    if bits & POS != 0 && !self.c.family_of.contains_key(&f) {
                        self.pending.insert(f.clone());
                    }
                    if bits & NEG != 0 {
                        self.register(&f, NEG);
                    }
                }
                FOFormula::Forall(vs, body) => {
                    self.add_terms(&f);
                    if bits & POS != 0 {
                        self.register(&f, POS);
                    }
                    if bits & NEG != 0 {
                        let companion = FOFormula::Exists(
                            vs.clone(),
                            Box::new(FOFormula::not((**body).clone())),
                        );
                        self.add(companion.canonical(), POS);
                    }
                }
            }
        }
        if self.c.terms.len() > self.limits.max_terms {
            return Err(HenkinError::UniverseOverflow {
                what: "terms",
                cap: self.limits.max_terms,
            });
        }
        Ok(())
    }

    fn needs_instances(&self) -> bool {
        self.instantiators
            .values()
            .any(|&(_, covered)| covered < self.c.terms.len())
    }

    fn round(&mut self) -> Result<(), HenkinError> {
        for f in std::mem::take(&mut self.pending) {
            let FOFormula::Exists(vs, body) = &f else {
                unreachable!("only existentials are pending")
            };
            let id = self.c.families.len();
            let fam = WitnessFamily {
                formula: f.clone(),
                arity: vs.len(),
            };
            let consts = fam.constants(id);
            self.c.families.push(fam);
            self.c.family_of.insert(f.clone(), id);
            self.add(body.instantiate(vs, &consts).canonical(), POS);
        }
        self.drain()?;
        let n = self.c.terms.len();
        let terms = self.c.terms.clone();
        let work: Vec<(FOFormula, u8, usize)> = self
            .instantiators
            .iter()
            .filter(|(_, &(_, covered))| covered < n)
            .map(|(f, &(bits, covered))| (f.clone(), bits, covered))
            .collect();
        for (f, bits, covered) in work {
            let (FOFormula::Exists(vs, body) | FOFormula::Forall(vs, body)) = &f else {
                unreachable!("only quantifiers are instantiated")
            };
            for tuple in
                tuples(n, vs.len()).filter(|t| covered == 0 || t.iter().any(|&i| i >= covered))
            {
                let args: Vec<Term> = tuple.iter().map(|&i| terms[i].clone()).collect();
                self.add(body.instantiate(vs, &args).canonical(), bits);
            }
            if let Some(e) = self.instantiators.get_mut(&f) {
                e.1 = n;
            }
        }
        self.drain()
    }
}

/// All `k`-tuples over `0..n` in lexicographic order.
pub(crate) fn tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if k == 0 {
        1
    } else {
        n.checked_pow(k as u32).unwrap_or(usize::MAX)
    };
    (0..total).map(move |mut code| {
        let mut t = vec![0; k];
        for slot in t.iter_mut().rev() {
            *slot = code % n.max(1);
            code /= n.max(1);
        }
        t
    })
}

/// Closes `theory` under witness constants and term instances. The theory
/// must consist of sentences whose arities stay below `width`.
pub fn close_witnesses(
    theory: &[FOFormula],
    width: usize,
    limits: ClosureLimits,
) -> Result<Closure, HenkinError> {
    for f in theory {
        if let Some(v) = f.free_vars().into_iter().next() {
            return Err(HenkinError::FreeVariable(v));
        }
        f.check_width(width)?;
    }
    let signature = Signature::of_theory(theory)?;
    let canon: Vec<FOFormula> = theory.iter().map(FOFormula::canonical).collect();
    let mut b = Builder {
        c: Closure {
            theory: canon.clone(),
            signature,
            formulas: BTreeMap::new(),
            terms: Vec::new(),
            families: Vec::new(),
            family_of: BTreeMap::new(),
            rounds: 0,
            stable: false,
        },
        term_set: BTreeSet::new(),
        queue: VecDeque::new(),
        pending: BTreeSet::new(),
        instantiators: BTreeMap::new(),
        limits,
    };
    for f in canon {
        b.add(f, POS);
    }
    b.drain()?;
    if b.c.terms.is_empty() && b.pending.is_empty() {
        b.add(inhabited(), POS);
        b.drain()?;
    }
    loop {
        if b.pending.is_empty() && !b.needs_instances() {
            b.c.stable = true;
            return Ok(b.c);
        }
        if b.c.rounds == limits.max_rounds {
            return Err(HenkinError::ClosureBudgetExceeded {
                rounds: b.c.rounds,
                partial: Box::new(b.c),
            });
        }
        b.c.rounds += 1;
        b.round()?;
    }
}
