//! Reference verdicts for first-order theories, independent of the pipeline:
//! brute-force search for models with at most three elements, and ground
//! resolution over skolemized Herbrand instances.

use std::collections::{BTreeMap, BTreeSet};

use indepfam::henkin::{FOFormula, Signature, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Sat,
    Unsat,
    Unknown,
}

pub fn oracle_verdict(theory: &[FOFormula]) -> Verdict {
    let sat = small_model_exists(theory, 3);
    let unsat = ground_refutation(theory);
    match (sat, unsat) {
        (true, true) => panic!("oracle found both a model and a refutation"),
        (true, false) => Verdict::Sat,
        (false, true) => Verdict::Unsat,
        (false, false) => Verdict::Unknown,
    }
}

// ---- finite model search ----

struct Interp<'a> {
    n: usize,
    consts: BTreeMap<&'a str, usize>,
    funs: BTreeMap<&'a str, Vec<usize>>,
    rels: BTreeMap<&'a str, Vec<bool>>,
}

fn code(args: &[usize], n: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

fn eval_term(m: &Interp, t: &Term, env: &BTreeMap<String, usize>) -> usize {
    match t {
        Term::Var(v) => env[v],
        Term::Const(c) => m.consts[c.as_str()],
        Term::App(f, args) => {
            let vals: Vec<usize> = args.iter().map(|a| eval_term(m, a, env)).collect();
            m.funs[f.as_str()][code(&vals, m.n)]
        }
        Term::Witness { .. } => unreachable!("input theories have no witnesses"),
    }
}

fn sat(m: &Interp, f: &FOFormula, env: &mut BTreeMap<String, usize>) -> bool {
    match f {
        FOFormula::Rel(r, args) => {
            let vals: Vec<usize> = args.iter().map(|a| eval_term(m, a, env)).collect();
            m.rels[r.as_str()][code(&vals, m.n)]
        }
        FOFormula::Eq(a, b) => eval_term(m, a, env) == eval_term(m, b, env),
        FOFormula::Not(g) => !sat(m, g, env),
        FOFormula::And(gs) => gs.iter().all(|g| sat(m, g, env)),
        FOFormula::Or(gs) => gs.iter().any(|g| sat(m, g, env)),
        FOFormula::Exists(vs, body) | FOFormula::Forall(vs, body) => {
            let exists = matches!(f, FOFormula::Exists(..));
            let saved: Vec<Option<usize>> = vs.iter().map(|v| env.get(v).copied()).collect();
            let mut result = !exists;
            for c in 0..m.n.pow(vs.len() as u32) {
                let mut rest = c;
                for v in vs.iter().rev() {
                    env.insert(v.clone(), rest % m.n);
                    rest /= m.n;
                }
                if sat(m, body, env) == exists {
                    result = exists;
                    break;
                }
            }
            for (v, old) in vs.iter().zip(saved) {
                match old {
                    Some(x) => env.insert(v.clone(), x),
                    None => env.remove(v),
                };
            }
            result
        }
    }
}

/// Mixed-radix counter over `radices`.
fn odometer(radices: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = radices.iter().product();
    (0..total).map(move |mut c| {
        radices
            .iter()
            .map(|&r| {
                let d = c % r;
                c /= r;
                d
            })
            .collect()
    })
}

fn small_model_exists(theory: &[FOFormula], max_size: usize) -> bool {
    let sig = Signature::of_theory(theory).expect("valid signature");
    for n in 1..=max_size {
        // One digit per constant, function table entry and relation table entry.
        let mut radices = Vec::new();
        radices.extend(sig.constants.iter().map(|_| n));
        for &k in sig.functions.values() {
            radices.extend(std::iter::repeat_n(n, n.pow(k as u32)));
        }
        for &k in sig.relations.values() {
            radices.extend(std::iter::repeat_n(2, n.pow(k as u32)));
        }
        let space: f64 = radices.iter().map(|&r| r as f64).product();
        if space > (1u64 << 22) as f64 {
            continue;
        }
        for digits in odometer(&radices) {
            let mut it = digits.into_iter();
            let consts = sig
                .constants
                .iter()
                .map(|c| (c.as_str(), it.next().unwrap()))
                .collect();
            let funs = sig
                .functions
                .iter()
                .map(|(f, &k)| {
                    (
                        f.as_str(),
                        (0..n.pow(k as u32)).map(|_| it.next().unwrap()).collect(),
                    )
                })
                .collect();
            let rels = sig
                .relations
                .iter()
                .map(|(r, &k)| {
                    (
                        r.as_str(),
                        (0..n.pow(k as u32))
                            .map(|_| it.next().unwrap() == 1)
                            .collect(),
                    )
                })
                .collect();
            let m = Interp {
                n,
                consts,
                funs,
                rels,
            };
            if theory.iter().all(|f| sat(&m, f, &mut BTreeMap::new())) {
                return true;
            }
        }
    }
    false
}

// ---- ground resolution ----

/// Negation normal form with skolemized existentials; universally bound
/// variables are renamed apart and left free.
enum Nnf {
    Lit(bool, FOFormula),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

struct Skolem {
    fresh: usize,
}

fn subst_term(t: &Term, map: &BTreeMap<String, Term>) -> Term {
    match t {
        Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::App(f, args) => {
            Term::App(f.clone(), args.iter().map(|a| subst_term(a, map)).collect())
        }
        _ => t.clone(),
    }
}

fn subst_atom(f: &FOFormula, map: &BTreeMap<String, Term>) -> FOFormula {
    match f {
        FOFormula::Rel(r, args) => {
            FOFormula::Rel(r.clone(), args.iter().map(|a| subst_term(a, map)).collect())
        }
        FOFormula::Eq(a, b) => FOFormula::Eq(subst_term(a, map), subst_term(b, map)),
        _ => unreachable!("atoms only"),
    }
}

impl Skolem {
    fn go(
        &mut self,
        f: &FOFormula,
        pos: bool,
        univ: &mut Vec<String>,
        map: &mut BTreeMap<String, Term>,
    ) -> Nnf {
        match f {
            FOFormula::Rel(..) | FOFormula::Eq(..) => Nnf::Lit(pos, subst_atom(f, map)),
            FOFormula::Not(g) => self.go(g, !pos, univ, map),
            FOFormula::And(gs) | FOFormula::Or(gs) => {
                let kids = gs.iter().map(|g| self.go(g, pos, univ, map)).collect();
                if matches!(f, FOFormula::And(_)) == pos {
                    Nnf::And(kids)
                } else {
                    Nnf::Or(kids)
                }
            }
            FOFormula::Exists(vs, body) | FOFormula::Forall(vs, body) => {
                let universal = matches!(f, FOFormula::Forall(..)) == pos;
                let saved = map.clone();
                let mark = univ.len();
                for v in vs {
                    self.fresh += 1;
                    let t = if universal {
                        let name = format!("u{}", self.fresh);
                        univ.push(name.clone());
                        Term::Var(name)
                    } else if univ.is_empty() {
                        Term::Const(format!("sk{}", self.fresh))
                    } else {
                        Term::App(
                            format!("sk{}", self.fresh),
                            univ.iter().map(|u| Term::Var(u.clone())).collect(),
                        )
                    };
                    map.insert(v.clone(), t);
                }
                let r = self.go(body, pos, univ, map);
                univ.truncate(mark);
                *map = saved;
                r
            }
        }
    }
}

type Clause = BTreeSet<(usize, bool)>;

#[derive(Default)]
struct Atoms(BTreeMap<FOFormula, usize>);

impl Atoms {
    fn id(&mut self, a: &FOFormula) -> usize {
        let n = self.0.len();
        *self.0.entry(a.clone()).or_insert(n)
    }
}

fn cnf(n: &Nnf, atoms: &mut Atoms) -> Vec<Clause> {
    match n {
        Nnf::Lit(pos, a) => vec![Clause::from([(atoms.id(a), *pos)])],
        Nnf::And(ks) => ks.iter().flat_map(|k| cnf(k, atoms)).collect(),
        Nnf::Or(ks) => {
            let mut acc = vec![Clause::new()];
            for k in ks {
                let part = cnf(k, atoms);
                acc = acc
                    .iter()
                    .flat_map(|a| part.iter().map(move |b| a.union(b).copied().collect()))
                    .collect();
            }
            acc
        }
    }
}

fn atom_vars(n: &Nnf, out: &mut BTreeSet<String>) {
    fn tv(t: &Term, out: &mut BTreeSet<String>) {
        match t {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| tv(a, out)),
            _ => {}
        }
    }
    match n {
        Nnf::Lit(_, FOFormula::Rel(_, args)) => args.iter().for_each(|a| tv(a, out)),
        Nnf::Lit(_, FOFormula::Eq(a, b)) => {
            tv(a, out);
            tv(b, out);
        }
        Nnf::Lit(..) => {}
        Nnf::And(ks) | Nnf::Or(ks) => ks.iter().for_each(|k| atom_vars(k, out)),
    }
}

fn ground(n: &Nnf, map: &BTreeMap<String, Term>) -> Nnf {
    match n {
        Nnf::Lit(p, a) => Nnf::Lit(*p, subst_atom(a, map)),
        Nnf::And(ks) => Nnf::And(ks.iter().map(|k| ground(k, map)).collect()),
        Nnf::Or(ks) => Nnf::Or(ks.iter().map(|k| ground(k, map)).collect()),
    }
}

fn ground_constants(n: &Nnf, out: &mut BTreeSet<Term>) {
    fn tc(t: &Term, out: &mut BTreeSet<Term>) {
        match t {
            Term::Const(_) => {
                out.insert(t.clone());
            }
            Term::App(_, args) if args.iter().all(Term::is_ground) => {
                out.insert(t.clone());
                args.iter().for_each(|a| tc(a, out));
            }
            Term::App(_, args) => args.iter().for_each(|a| tc(a, out)),
            _ => {}
        }
    }
    match n {
        Nnf::Lit(_, FOFormula::Rel(_, args)) => args.iter().for_each(|a| tc(a, out)),
        Nnf::Lit(_, FOFormula::Eq(a, b)) => {
            tc(a, out);
            tc(b, out);
        }
        Nnf::Lit(..) => {}
        Nnf::And(ks) | Nnf::Or(ks) => ks.iter().for_each(|k| ground_constants(k, out)),
    }
}

/// Unit resolution to a fixpoint, then Davis–Putnam elimination of the
/// cheapest atom; true iff the empty clause is derived.
fn refutes(mut clauses: Vec<Clause>, cap: usize) -> bool {
    // Resolving on an atom that occurs both ways in one clause is unsound.
    clauses.retain(|c| !c.iter().any(|&(a, s)| s && c.contains(&(a, false))));
    loop {
        // Resolve every clause against the unit clauses.
        loop {
            let units: BTreeSet<(usize, bool)> = clauses
                .iter()
                .filter(|c| c.len() == 1)
                .flat_map(|c| c.iter().copied())
                .collect();
            if units.iter().any(|&(a, s)| units.contains(&(a, !s))) {
                return true;
            }
            let before = clauses.iter().map(Clause::len).sum::<usize>() + clauses.len();
            clauses = clauses
                .into_iter()
                .filter(|c| c.len() == 1 || !c.iter().any(|l| units.contains(l)))
                .map(|c| {
                    c.into_iter()
                        .filter(|&(a, s)| !units.contains(&(a, !s)))
                        .collect()
                })
                .collect();
            if clauses.iter().map(Clause::len).sum::<usize>() + clauses.len() == before {
                break;
            }
        }
        clauses.sort();
        clauses.dedup();
        if clauses.iter().any(Clause::is_empty) {
            return true;
        }
        let atoms: BTreeSet<usize> = clauses
            .iter()
            .filter(|c| c.len() > 1)
            .flat_map(|c| c.iter().map(|&(a, _)| a))
            .collect();
        let Some(&pivot) = atoms.iter().min_by_key(|&&a| {
            let pos = clauses.iter().filter(|c| c.contains(&(a, true))).count();
            let neg = clauses.iter().filter(|c| c.contains(&(a, false))).count();
            pos * neg
        }) else {
            return false;
        };
        let (with, rest): (Vec<Clause>, Vec<Clause>) = clauses
            .into_iter()
            .partition(|c| c.contains(&(pivot, true)) || c.contains(&(pivot, false)));
        let (pos, neg): (Vec<&Clause>, Vec<&Clause>) =
            with.iter().partition(|c| c.contains(&(pivot, true)));
        let mut next = rest;
        for p in &pos {
            for n in &neg {
                let r: Clause = p.union(n).copied().filter(|&(a, _)| a != pivot).collect();
                if !r.iter().any(|&(a, s)| s && r.contains(&(a, false))) {
                    next.push(r);
                }
            }
        }
        if next.len() > cap {
            return false;
        }
        clauses = next;
    }
}

fn ground_refutation(theory: &[FOFormula]) -> bool {
    let mut sk = Skolem { fresh: 0 };
    let matrices: Vec<Nnf> = theory
        .iter()
        .map(|f| sk.go(f, true, &mut Vec::new(), &mut BTreeMap::new()))
        .collect();
    let mut universe = BTreeSet::new();
    matrices
        .iter()
        .for_each(|m| ground_constants(m, &mut universe));
    if universe.is_empty() {
        universe.insert(Term::Const("k0".into()));
    }
    let universe: Vec<Term> = universe.into_iter().collect();

    let mut atoms = Atoms::default();
    let mut clauses = Vec::new();
    for m in &matrices {
        let mut vars = BTreeSet::new();
        atom_vars(m, &mut vars);
        let vars: Vec<String> = vars.into_iter().collect();
        for digits in odometer(&vec![universe.len(); vars.len()]) {
            let map = vars
                .iter()
                .cloned()
                .zip(digits.iter().map(|&d| universe[d].clone()))
                .collect();
            clauses.extend(cnf(&ground(m, &map), &mut atoms));
        }
    }

    // Equality axioms over every ground term that occurs.
    let mut terms = BTreeSet::new();
    let atom_list: Vec<FOFormula> = atoms.0.keys().cloned().collect();
    for a in &atom_list {
        ground_constants(&Nnf::Lit(true, a.clone()), &mut terms);
    }
    let terms: Vec<Term> = terms.into_iter().collect();
    let eq = |a: &Term, b: &Term| FOFormula::Eq(a.clone(), b.clone());
    for t in &terms {
        clauses.push(Clause::from([(atoms.id(&eq(t, t)), true)]));
        for u in &terms {
            clauses.push(Clause::from([
                (atoms.id(&eq(t, u)), false),
                (atoms.id(&eq(u, t)), true),
            ]));
            for w in &terms {
                clauses.push(Clause::from([
                    (atoms.id(&eq(t, u)), false),
                    (atoms.id(&eq(u, w)), false),
                    (atoms.id(&eq(t, w)), true),
                ]));
            }
        }
    }
    let args_differ = |xs: &[Term], ys: &[Term], atoms: &mut Atoms| -> Clause {
        xs.iter()
            .zip(ys)
            .filter(|(x, y)| x != y)
            .map(|(x, y)| (atoms.id(&eq(x, y)), false))
            .collect()
    };
    for t in &terms {
        for u in &terms {
            if let (Term::App(f, xs), Term::App(g, ys)) = (t, u) {
                if f == g && t != u {
                    let mut c = args_differ(xs, ys, &mut atoms);
                    c.insert((atoms.id(&eq(t, u)), true));
                    clauses.push(c);
                }
            }
        }
    }
    for a in &atom_list {
        for b in &atom_list {
            if let (FOFormula::Rel(r, xs), FOFormula::Rel(q, ys)) = (a, b) {
                if r == q && a != b {
                    let mut c = args_differ(xs, ys, &mut atoms);
                    c.insert((atoms.id(a), false));
                    c.insert((atoms.id(b), true));
                    clauses.push(c);
                }
            }
        }
    }
    refutes(clauses, 200_000)
}
