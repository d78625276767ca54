//! First-order terms and formulas, canonical alpha form, and substitution.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::HenkinError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(String),
    /// Witness constant `index` of witness family `family`.
    Witness {
        family: usize,
        index: usize,
    },
    App(String, Vec<Term>),
}

impl Term {
    pub fn app(f: &str, args: Vec<Term>) -> Self {
        Term::App(f.to_string(), args)
    }

    pub fn constant(c: &str) -> Self {
        Term::Const(c.to_string())
    }

    pub fn var(v: &str) -> Self {
        Term::Var(v.to_string())
    }

    pub fn size(&self) -> usize {
        match self {
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            _ => 1,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
            _ => true,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Term::Var(_) => 0,
            Term::Const(_) => 1,
            Term::Witness { .. } => 2,
            Term::App(..) => 3,
        }
    }

    /// Every subterm, `self` included.
    pub fn subterms(&self, out: &mut BTreeSet<Term>) {
        if let Term::App(_, args) = self {
            args.iter().for_each(|a| a.subterms(out));
        }
        out.insert(self.clone());
    }

    fn subst(&self, map: &BTreeMap<&str, &Term>) -> Term {
        match self {
            Term::Var(v) => map
                .get(v.as_str())
                .map_or_else(|| self.clone(), |&t| t.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.subst(map)).collect()),
            _ => self.clone(),
        }
    }

    fn rename(&self, scope: &[(String, String)]) -> Term {
        match self {
            Term::Var(v) => match scope.iter().rev().find(|(from, _)| from == v) {
                Some((_, to)) => Term::Var(to.clone()),
                None => self.clone(),
            },
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.rename(scope)).collect())
            }
            _ => self.clone(),
        }
    }
}

/// Smaller terms first, then by kind, then structurally.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.rank().cmp(&other.rank()))
            .then_with(|| match (self, other) {
                (Term::Var(a), Term::Var(b)) | (Term::Const(a), Term::Const(b)) => a.cmp(b),
                (
                    Term::Witness {
                        family: f,
                        index: i,
                    },
                    Term::Witness {
                        family: g,
                        index: j,
                    },
                ) => (f, i).cmp(&(g, j)),
                (Term::App(f, xs), Term::App(g, ys)) => f.cmp(g).then_with(|| xs.cmp(ys)),
                _ => Ordering::Equal,
            })
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => write!(f, "{v}"),
            Term::Witness { family, index } => write!(f, "c#{family}.{index}"),
            Term::App(name, args) => {
                write!(f, "({name}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// `and()` is true and `or()` is false.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FOFormula {
    Rel(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<FOFormula>),
    And(Vec<FOFormula>),
    Or(Vec<FOFormula>),
    Exists(Vec<String>, Box<FOFormula>),
    Forall(Vec<String>, Box<FOFormula>),
}

impl FOFormula {
    pub fn rel(r: &str, args: Vec<Term>) -> Self {
        FOFormula::Rel(r.to_string(), args)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: FOFormula) -> Self {
        FOFormula::Not(Box::new(f))
    }

    pub fn implies(a: FOFormula, b: FOFormula) -> Self {
        FOFormula::Or(vec![FOFormula::not(a), b])
    }

    pub fn exists(vars: &[&str], body: FOFormula) -> Self {
        FOFormula::Exists(vars.iter().map(|v| v.to_string()).collect(), Box::new(body))
    }

    pub fn forall(vars: &[&str], body: FOFormula) -> Self {
        FOFormula::Forall(vars.iter().map(|v| v.to_string()).collect(), Box::new(body))
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            FOFormula::Rel(..) | FOFormula::Eq(..) => true,
            FOFormula::Not(f) => f.is_quantifier_free(),
            FOFormula::And(fs) | FOFormula::Or(fs) => fs.iter().all(FOFormula::is_quantifier_free),
            FOFormula::Exists(..) | FOFormula::Forall(..) => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        fn term_vars(t: &Term, bound: &[&str], out: &mut BTreeSet<String>) {
            match t {
                Term::Var(v) if !bound.contains(&v.as_str()) => {
                    out.insert(v.clone());
                }
                Term::App(_, args) => args.iter().for_each(|a| term_vars(a, bound, out)),
                _ => {}
            }
        }
        fn go<'a>(f: &'a FOFormula, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
            match f {
                FOFormula::Rel(_, args) => args.iter().for_each(|a| term_vars(a, bound, out)),
                FOFormula::Eq(a, b) => {
                    term_vars(a, bound, out);
                    term_vars(b, bound, out);
                }
                FOFormula::Not(g) => go(g, bound, out),
                FOFormula::And(gs) | FOFormula::Or(gs) => gs.iter().for_each(|g| go(g, bound, out)),
                FOFormula::Exists(vs, g) | FOFormula::Forall(vs, g) => {
                    let mark = bound.len();
                    bound.extend(vs.iter().map(String::as_str));
                    go(g, bound, out);
                    bound.truncate(mark);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Largest connective arity, relation/function arity or quantifier block.
    pub fn max_arity(&self) -> usize {
        fn term_arity(t: &Term) -> usize {
            match t {
                Term::App(_, args) => args
                    .iter()
                    .map(term_arity)
                    .max()
                    .unwrap_or(0)
                    .max(args.len()),
                _ => 0,
            }
        }
        match self {
            FOFormula::Rel(_, args) => args
                .iter()
                .map(term_arity)
                .max()
                .unwrap_or(0)
                .max(args.len()),
            FOFormula::Eq(a, b) => term_arity(a).max(term_arity(b)),
            FOFormula::Not(f) => f.max_arity(),
            FOFormula::And(fs) | FOFormula::Or(fs) => fs
                .iter()
                .map(FOFormula::max_arity)
                .max()
                .unwrap_or(0)
                .max(fs.len()),
            FOFormula::Exists(vs, f) | FOFormula::Forall(vs, f) => f.max_arity().max(vs.len()),
        }
    }

    pub fn check_width(&self, width: usize) -> Result<(), HenkinError> {
        match self.max_arity() {
            a if a >= width => Err(HenkinError::ArityExceeded { arity: a, width }),
            _ => Ok(()),
        }
    }

    /// Ground terms occurring in the formula, closed under subterms.
    pub fn ground_terms(&self, out: &mut BTreeSet<Term>) {
        fn add(t: &Term, out: &mut BTreeSet<Term>) {
            if t.is_ground() {
                t.subterms(out)
            } else if let Term::App(_, args) = t {
                args.iter().for_each(|a| add(a, out));
            }
        }
        match self {
            FOFormula::Rel(_, args) => args.iter().for_each(|a| add(a, out)),
            FOFormula::Eq(a, b) => {
                add(a, out);
                add(b, out);
            }
            FOFormula::Not(f) => f.ground_terms(out),
            FOFormula::And(fs) | FOFormula::Or(fs) => fs.iter().for_each(|f| f.ground_terms(out)),
            FOFormula::Exists(_, f) | FOFormula::Forall(_, f) => f.ground_terms(out),
        }
    }

    /// Replaces free occurrences of `vars[i]` by `terms[i]`. The terms must be
    /// ground, so no capture can occur.
    pub fn instantiate(&self, vars: &[String], terms: &[Term]) -> FOFormula {
        debug_assert!(terms.iter().all(Term::is_ground));
        let map: BTreeMap<&str, &Term> = vars.iter().map(String::as_str).zip(terms).collect();
        self.subst(&map)
    }

    fn subst(&self, map: &BTreeMap<&str, &Term>) -> FOFormula {
        match self {
            FOFormula::Rel(r, args) => {
                FOFormula::Rel(r.clone(), args.iter().map(|a| a.subst(map)).collect())
            }
            FOFormula::Eq(a, b) => FOFormula::Eq(a.subst(map), b.subst(map)),
            FOFormula::Not(f) => FOFormula::not(f.subst(map)),
            FOFormula::And(fs) => FOFormula::And(fs.iter().map(|f| f.subst(map)).collect()),
            FOFormula::Or(fs) => FOFormula::Or(fs.iter().map(|f| f.subst(map)).collect()),
            FOFormula::Exists(vs, f) | FOFormula::Forall(vs, f) => {
                let inner: BTreeMap<&str, &Term> = map
                    .iter()
                    .filter(|(k, _)| !vs.iter().any(|v| v == *k))
                    .map(|(k, v)| (*k, *v))
                    .collect();
                let body = Box::new(f.subst(&inner));
                match self {
                    FOFormula::Exists(..) => FOFormula::Exists(vs.clone(), body),
                    _ => FOFormula::Forall(vs.clone(), body),
                }
            }
        }
    }

    /// Alpha normal form: bound variables become `_0, _1, …` numbered by
    /// binding level, so alpha-equivalent formulas are syntactically equal.
    pub fn canonical(&self) -> FOFormula {
        self.canon(&mut Vec::new())
    }

    fn canon(&self, scope: &mut Vec<(String, String)>) -> FOFormula {
        match self {
            FOFormula::Rel(r, args) => {
                FOFormula::Rel(r.clone(), args.iter().map(|a| a.rename(scope)).collect())
            }
            FOFormula::Eq(a, b) => FOFormula::Eq(a.rename(scope), b.rename(scope)),
            FOFormula::Not(f) => FOFormula::not(f.canon(scope)),
            FOFormula::And(fs) => FOFormula::And(fs.iter().map(|f| f.canon(scope)).collect()),
            FOFormula::Or(fs) => FOFormula::Or(fs.iter().map(|f| f.canon(scope)).collect()),
            FOFormula::Exists(vs, f) | FOFormula::Forall(vs, f) => {
                let mark = scope.len();
                let fresh: Vec<String> = (mark..mark + vs.len()).map(|i| format!("_{i}")).collect();
                scope.extend(vs.iter().cloned().zip(fresh.iter().cloned()));
                let body = Box::new(f.canon(scope));
                scope.truncate(mark);
                match self {
                    FOFormula::Exists(..) => FOFormula::Exists(fresh, body),
                    _ => FOFormula::Forall(fresh, body),
                }
            }
        }
    }
}

impl fmt::Display for FOFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn seq<T: fmt::Display>(f: &mut fmt::Formatter<'_>, head: &str, xs: &[T]) -> fmt::Result {
            write!(f, "({head}")?;
            for x in xs {
                write!(f, " {x}")?;
            }
            write!(f, ")")
        }
        match self {
            FOFormula::Rel(r, args) => seq(f, r, args),
            FOFormula::Eq(a, b) => write!(f, "(= {a} {b})"),
            FOFormula::Not(x) => write!(f, "(not {x})"),
            FOFormula::And(xs) => seq(f, "and", xs),
            FOFormula::Or(xs) => seq(f, "or", xs),
            FOFormula::Exists(vs, body) | FOFormula::Forall(vs, body) => {
                let q = if matches!(self, FOFormula::Exists(..)) {
                    "exists"
                } else {
                    "forall"
                };
                write!(f, "({q} ({}) {body})", vs.join(" "))
            }
        }
    }
}

/// Symbols of a theory. Equality is always present and never listed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub constants: BTreeSet<String>,
    pub functions: BTreeMap<String, usize>,
    pub relations: BTreeMap<String, usize>,
}

impl Signature {
    /// Collects the symbols of `theory`, rejecting a name used with two
    /// arities or in two roles.
    pub fn of_theory(theory: &[FOFormula]) -> Result<Signature, HenkinError> {
        let mut sig = Signature::default();
        for f in theory {
            sig.add_formula(f)?;
        }
        Ok(sig)
    }

    fn clash(&self, name: &str) -> HenkinError {
        HenkinError::SymbolClash(name.to_string())
    }

    fn add_term(&mut self, t: &Term) -> Result<(), HenkinError> {
        match t {
            Term::Const(c) => {
                if self.functions.contains_key(c) || self.relations.contains_key(c) {
                    return Err(self.clash(c));
                }
                self.constants.insert(c.clone());
            }
            Term::App(fun, args) => {
                if self.constants.contains(fun) || self.relations.contains_key(fun) {
                    return Err(self.clash(fun));
                }
                if *self.functions.entry(fun.clone()).or_insert(args.len()) != args.len() {
                    return Err(self.clash(fun));
                }
                for a in args {
                    self.add_term(a)?;
                }
            }
            Term::Var(_) | Term::Witness { .. } => {}
        }
        Ok(())
    }

    fn add_formula(&mut self, f: &FOFormula) -> Result<(), HenkinError> {
        match f {
            FOFormula::Rel(r, args) => {
                if self.constants.contains(r) || self.functions.contains_key(r) {
                    return Err(self.clash(r));
                }
                if *self.relations.entry(r.clone()).or_insert(args.len()) != args.len() {
                    return Err(self.clash(r));
                }
                args.iter().try_for_each(|a| self.add_term(a))
            }
            FOFormula::Eq(a, b) => {
                self.add_term(a)?;
                self.add_term(b)
            }
            FOFormula::Not(g) | FOFormula::Exists(_, g) | FOFormula::Forall(_, g) => {
                self.add_formula(g)
            }
            FOFormula::And(gs) | FOFormula::Or(gs) => {
                gs.iter().try_for_each(|g| self.add_formula(g))
            }
        }
    }

    /// Whether every symbol of `other` occurs here with the same arity.
    pub fn covers(&self, other: &Signature) -> Result<(), HenkinError> {
        let missing = |name: &str| Err(HenkinError::SignatureMismatch(name.to_string()));
        for c in &other.constants {
            if !self.constants.contains(c) {
                return missing(c);
            }
        }
        for (name, arity) in &other.functions {
            if self.functions.get(name) != Some(arity) {
                return missing(name);
            }
        }
        for (name, arity) in &other.relations {
            if self.relations.get(name) != Some(arity) {
                return missing(name);
            }
        }
        Ok(())
    }
}
