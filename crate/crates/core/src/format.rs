//! Text formats: set literals, ground points, family and cell files,
//! propositional and first-order theories, filters and assignments.
//!
//! Every parser reports errors as `line:col: message`.

use std::collections::{BTreeMap, BTreeSet};

use crate::filters::{FilterPresentation, FiniteFilter, Subset, SymbolicFilter};
use crate::henkin::{FOFormula, FunctionTable, RelationTable, Structure, Term};
use crate::proplogic::{Assignment, Formula};
use crate::setcore::{
    BaseDomain, BaseSet, Builtin, CellSpec, DomainKind, FamilySpec, GroundPoint, SetExpr,
    MAX_SEARCH_BOUND,
};
use crate::sexpr::{parse_all, parse_one, ParseError, Sexp};

fn lift<E: std::fmt::Display>(at: &Sexp) -> impl Fn(E) -> ParseError + '_ {
    move |e| at.err(e.to_string())
}

fn elems(s: &Sexp) -> Result<Vec<u64>, ParseError> {
    let items = s.braces().ok_or_else(|| s.err("expected a `{...}` set"))?;
    let mut v = items
        .iter()
        .map(|e| e.expect_nat("an element"))
        .collect::<Result<Vec<_>, _>>()?;
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

fn arity(args: &[Sexp], n: usize, at: &Sexp, what: &str) -> Result<(), ParseError> {
    if args.len() == n {
        Ok(())
    } else {
        Err(at.err(format!(
            "`{what}` takes {n} argument(s), found {}",
            args.len()
        )))
    }
}

/// `{0 1 3}`, `(co {0 1})`, `(builtin evens)`, `(builtin odds)`,
/// `(builtin (mult k))`, `(builtin (interval a b))`.
pub fn set_from_sexp(s: &Sexp) -> Result<BaseSet, ParseError> {
    if s.braces().is_some() {
        return Ok(BaseSet::finite(elems(s)?));
    }
    match s.form() {
        Some(("co", args)) => {
            arity(args, 1, s, "co")?;
            Ok(BaseSet::cofinite(elems(&args[0])?))
        }
        Some(("builtin", args)) => {
            arity(args, 1, s, "builtin")?;
            let b = match (args[0].atom(), args[0].form()) {
                (Some("evens"), _) => Builtin::Evens,
                (Some("odds"), _) => Builtin::Odds,
                (_, Some(("mult", k))) => {
                    arity(k, 1, &args[0], "mult")?;
                    Builtin::Mult(k[0].expect_nat("a modulus")?)
                }
                (_, Some(("interval", ab))) => {
                    arity(ab, 2, &args[0], "interval")?;
                    Builtin::Interval(ab[0].expect_nat("a bound")?, ab[1].expect_nat("a bound")?)
                }
                _ => return Err(args[0].err("unknown builtin set")),
            };
            BaseSet::builtin(b).map_err(lift(s))
        }
        _ => Err(s.err("expected a set literal")),
    }
}

pub fn parse_set(src: &str) -> Result<BaseSet, ParseError> {
    set_from_sexp(&parse_one(src)?)
}

/// `(pt {0 1} ({0} {0 1}))`
pub fn point_from_sexp(s: &Sexp) -> Result<GroundPoint, ParseError> {
    match s.form() {
        Some(("pt", args)) => {
            arity(args, 2, s, "pt")?;
            let support = elems(&args[0])?;
            let trace = args[1]
                .expect_list("a list of traces")?
                .iter()
                .map(elems)
                .collect::<Result<Vec<_>, _>>()?;
            GroundPoint::new(support, trace).map_err(lift(s))
        }
        _ => Err(s.err("expected `(pt support (traces...))`")),
    }
}

pub fn parse_point(src: &str) -> Result<GroundPoint, ParseError> {
    point_from_sexp(&parse_one(src)?)
}

/// A family together with the search bound it was validated under.
#[derive(Debug, Clone)]
pub struct FamilyFile {
    pub family: FamilySpec,
    pub bound: u64,
}

/// `(family (domain finite 3) (width 4) (bound 64) (gen {0 1}) … )`, with
/// `(domain omega)` for the naturals and `(all-subsets)` as shorthand for
/// every subset of a finite domain. Width and bound default to the values
/// given.
pub fn family_from_sexp(
    s: &Sexp,
    default_width: usize,
    default_bound: u64,
) -> Result<FamilyFile, ParseError> {
    let Some(("family", items)) = s.form() else {
        return Err(s.err("expected `(family ...)`"));
    };
    let (mut kind, mut width, mut bound) = (None, default_width, default_bound);
    let mut gens = Vec::new();
    let mut all_subsets = false;
    for it in items {
        match it.form() {
            Some(("domain", args)) => {
                kind = Some(match args {
                    [k, n] if k.atom() == Some("finite") => {
                        DomainKind::Finite(n.expect_nat("a domain size")?)
                    }
                    [k] if k.atom() == Some("omega") => DomainKind::Omega,
                    _ => return Err(it.err("expected `(domain finite n)` or `(domain omega)`")),
                });
            }
            Some(("width", args)) => {
                arity(args, 1, it, "width")?;
                width = args[0].expect_nat("a width")? as usize;
            }
            Some(("bound", args)) => {
                arity(args, 1, it, "bound")?;
                bound = args[0].expect_nat("a bound")?;
                if bound == 0 || bound > MAX_SEARCH_BOUND {
                    return Err(args[0].err(format!("bound must lie in 1..={MAX_SEARCH_BOUND}")));
                }
            }
            Some(("gen", args)) => {
                arity(args, 1, it, "gen")?;
                gens.push(set_from_sexp(&args[0])?);
            }
            Some(("all-subsets", [])) => all_subsets = true,
            _ => return Err(it.err("unknown family clause")),
        }
    }
    let kind = kind.ok_or_else(|| s.err("missing `(domain ...)`"))?;
    if all_subsets {
        match kind {
            DomainKind::Finite(n) if n <= 6 => {
                gens.extend(
                    (0u64..1 << n).map(|m| BaseSet::finite((0..n).filter(|i| m >> i & 1 == 1))),
                );
            }
            _ => return Err(s.err("`(all-subsets)` needs a finite domain of size at most 6")),
        }
    }
    let domain = BaseDomain::new(kind, width).map_err(lift(s))?;
    let family = FamilySpec::new(domain, gens, bound).map_err(lift(s))?;
    Ok(FamilyFile { family, bound })
}

pub fn parse_family(
    src: &str,
    default_width: usize,
    default_bound: u64,
) -> Result<FamilyFile, ParseError> {
    family_from_sexp(&parse_one(src)?, default_width, default_bound)
}

pub fn print_family(file: &FamilyFile) -> String {
    let fam = &file.family;
    let domain = match fam.domain().kind() {
        DomainKind::Finite(n) => format!("finite {n}"),
        DomainKind::Omega => "omega".to_string(),
    };
    let mut out = format!(
        "(family (domain {domain}) (width {}) (bound {})",
        fam.domain().width(),
        file.bound
    );
    for g in fam.generators() {
        out.push_str(&format!("\n  (gen {g})"));
    }
    out.push_str(")\n");
    out
}

/// `(cell (pos 0 2) (neg 1))`; either clause may be absent.
pub fn cell_from_sexp(s: &Sexp) -> Result<CellSpec, ParseError> {
    let Some(("cell", items)) = s.form() else {
        return Err(s.err("expected `(cell (pos ...) (neg ...))`"));
    };
    let mut pairs = Vec::new();
    let mut seen = BTreeSet::new();
    for it in items {
        let (sign, gs) = match it.form() {
            Some(("pos", gs)) => (true, gs),
            Some(("neg", gs)) => (false, gs),
            _ => return Err(it.err("expected `(pos ...)` or `(neg ...)`")),
        };
        for g in gs {
            let i = g.expect_nat("a generator index")? as usize;
            if !seen.insert(i) {
                return Err(g.err(format!("generator {i} is signed twice")));
            }
            pairs.push((i, sign));
        }
    }
    Ok(CellSpec::from_pairs(pairs))
}

pub fn parse_cell(src: &str) -> Result<CellSpec, ParseError> {
    cell_from_sexp(&parse_one(src)?)
}

pub fn print_cell(c: &CellSpec) -> String {
    let join =
        |it: &mut dyn Iterator<Item = usize>| it.map(|g| format!(" {g}")).collect::<String>();
    format!(
        "(cell (pos{}) (neg{}))",
        join(&mut c.positives()),
        join(&mut c.negatives())
    )
}

fn atom_index(s: &Sexp) -> Result<Option<usize>, ParseError> {
    let Some(a) = s.atom() else { return Ok(None) };
    match a.strip_prefix('a') {
        Some(digits) if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) => digits
            .parse()
            .map(Some)
            .map_err(|_| s.err(format!("atom index `{a}` is too large"))),
        _ => Ok(None),
    }
}

/// `a<γ>` | `(not f)` | `(and f*)` | `(or f*)`, plus `(implies f g)` and
/// `(iff f g)` as abbreviations.
pub fn formula_from_sexp(s: &Sexp) -> Result<Formula, ParseError> {
    if let Some(g) = atom_index(s)? {
        return Ok(Formula::Atom(g));
    }
    let Some((head, args)) = s.form() else {
        return Err(s.err("expected a propositional formula"));
    };
    let kids = || {
        args.iter()
            .map(formula_from_sexp)
            .collect::<Result<Vec<_>, _>>()
    };
    match head {
        "not" => {
            arity(args, 1, s, "not")?;
            Ok(Formula::not(formula_from_sexp(&args[0])?))
        }
        "and" => Ok(Formula::And(kids()?)),
        "or" => Ok(Formula::Or(kids()?)),
        "implies" => {
            arity(args, 2, s, "implies")?;
            let mut k = kids()?;
            let b = k.pop().expect("two children");
            Ok(Formula::implies(k.pop().expect("two children"), b))
        }
        "iff" => {
            arity(args, 2, s, "iff")?;
            let k = kids()?;
            Ok(Formula::And(vec![
                Formula::implies(k[0].clone(), k[1].clone()),
                Formula::implies(k[1].clone(), k[0].clone()),
            ]))
        }
        other => Err(s.err(format!("unknown connective `{other}`"))),
    }
}

fn theory_items<'a>(exprs: &'a [Sexp], src_pos: &Sexp) -> Result<Vec<&'a Sexp>, ParseError> {
    let [top] = exprs else {
        return Err(src_pos.err("expected exactly one `(theory ...)` form"));
    };
    let Some(("theory", items)) = top.form() else {
        return Err(top.err("expected `(theory (assert f)*)`"));
    };
    items
        .iter()
        .map(|it| match it.form() {
            Some(("assert", [f])) => Ok(f),
            _ => Err(it.err("expected `(assert f)`")),
        })
        .collect()
}

fn top_level(src: &str) -> Result<Vec<Sexp>, ParseError> {
    let exprs = parse_all(src)?;
    if exprs.is_empty() {
        return Err(ParseError::new(Default::default(), "empty input"));
    }
    Ok(exprs)
}

/// `(theory (assert f)*)`
pub fn parse_theory(src: &str) -> Result<Vec<Formula>, ParseError> {
    let exprs = top_level(src)?;
    theory_items(&exprs, &exprs[0])?
        .into_iter()
        .map(formula_from_sexp)
        .collect()
}

/// A theory file, one assertion per line, each optionally followed by a
/// comment.
pub fn print_theory(formulas: &[Formula], comments: Option<&[String]>) -> String {
    let mut out = String::from("(theory\n");
    for (i, f) in formulas.iter().enumerate() {
        out.push_str(&format!("  (assert {f})"));
        if let Some(c) = comments.and_then(|cs| cs.get(i)) {
            out.push_str(&format!(" ; {c}"));
        }
        out.push('\n');
    }
    out.push_str(")\n");
    out
}

const RESERVED: &[&str] = &[
    "not", "and", "or", "implies", "iff", "exists", "forall", "=", "theory", "assert",
];

fn symbol<'a>(s: &'a Sexp, what: &str) -> Result<&'a str, ParseError> {
    let a = s.expect_atom(what)?;
    if RESERVED.contains(&a) || a.contains('#') || a.parse::<u64>().is_ok() {
        return Err(s.err(format!("`{a}` cannot be used as {what}")));
    }
    Ok(a)
}

fn term_from_sexp(s: &Sexp, bound: &[String]) -> Result<Term, ParseError> {
    if s.atom().is_some() {
        let name = symbol(s, "a term")?;
        return Ok(if bound.iter().any(|b| b == name) {
            Term::var(name)
        } else {
            Term::constant(name)
        });
    }
    match s.list() {
        Some([head, args @ ..]) if !args.is_empty() => {
            let f = symbol(head, "a function symbol")?;
            if bound.iter().any(|b| b == f) {
                return Err(head.err(format!("variable `{f}` used as a function")));
            }
            let args = args
                .iter()
                .map(|a| term_from_sexp(a, bound))
                .collect::<Result<_, _>>()?;
            Ok(Term::app(f, args))
        }
        _ => Err(s.err("expected a term: a name or `(f t ...)`")),
    }
}

fn fo_from_sexp(s: &Sexp, bound: &mut Vec<String>) -> Result<FOFormula, ParseError> {
    if s.atom().is_some() {
        let r = symbol(s, "a relation symbol")?;
        if bound.iter().any(|b| b == r) {
            return Err(s.err(format!("variable `{r}` used as a relation")));
        }
        return Ok(FOFormula::rel(r, vec![]));
    }
    let Some((head, args)) = s.form() else {
        return Err(s.err("expected a formula"));
    };
    let kids = |args: &[Sexp], bound: &mut Vec<String>| {
        args.iter()
            .map(|a| fo_from_sexp(a, bound))
            .collect::<Result<Vec<_>, _>>()
    };
    match head {
        "not" => {
            arity(args, 1, s, "not")?;
            Ok(FOFormula::not(fo_from_sexp(&args[0], bound)?))
        }
        "and" => Ok(FOFormula::And(kids(args, bound)?)),
        "or" => Ok(FOFormula::Or(kids(args, bound)?)),
        "implies" => {
            arity(args, 2, s, "implies")?;
            let k = kids(args, bound)?;
            Ok(FOFormula::implies(k[0].clone(), k[1].clone()))
        }
        "iff" => {
            arity(args, 2, s, "iff")?;
            let k = kids(args, bound)?;
            Ok(FOFormula::And(vec![
                FOFormula::implies(k[0].clone(), k[1].clone()),
                FOFormula::implies(k[1].clone(), k[0].clone()),
            ]))
        }
        "=" => {
            arity(args, 2, s, "=")?;
            Ok(FOFormula::Eq(
                term_from_sexp(&args[0], bound)?,
                term_from_sexp(&args[1], bound)?,
            ))
        }
        "exists" | "forall" => {
            arity(args, 2, s, head)?;
            let block = args[0].expect_list("a variable block")?;
            if block.is_empty() {
                return Err(args[0].err("empty variable block"));
            }
            let mut vars = Vec::new();
            for v in block {
                let name = symbol(v, "a variable")?.to_string();
                if vars.contains(&name) {
                    return Err(v.err(format!("variable `{name}` bound twice in one block")));
                }
                vars.push(name);
            }
            let mark = bound.len();
            bound.extend(vars.iter().cloned());
            let body = fo_from_sexp(&args[1], bound);
            bound.truncate(mark);
            let body = Box::new(body?);
            Ok(if head == "exists" {
                FOFormula::Exists(vars, body)
            } else {
                FOFormula::Forall(vars, body)
            })
        }
        r => {
            if bound.iter().any(|b| b == r) {
                return Err(s.err(format!("variable `{r}` used as a relation")));
            }
            let args = args
                .iter()
                .map(|a| term_from_sexp(a, bound))
                .collect::<Result<_, _>>()?;
            Ok(FOFormula::rel(
                symbol(&s.list().expect("form")[0], "a relation symbol")?,
                args,
            ))
        }
    }
}

pub fn fo_formula_from_sexp(s: &Sexp) -> Result<FOFormula, ParseError> {
    fo_from_sexp(s, &mut Vec::new())
}

/// A first-order theory: `(theory (assert f)*)` over the grammar
/// `(exists (x y) f)`, `(forall (x) f)`, `(= t u)`, `(R t*)`, `(f t*)`. A
/// name is a variable where a quantifier binds it and a constant elsewhere.
pub fn parse_fo_theory(src: &str) -> Result<Vec<FOFormula>, ParseError> {
    let exprs = top_level(src)?;
    theory_items(&exprs, &exprs[0])?
        .into_iter()
        .map(fo_formula_from_sexp)
        .collect()
}

pub fn print_fo_theory(formulas: &[FOFormula]) -> String {
    let mut out = String::from("(theory\n");
    for f in formulas {
        out.push_str(&format!("  (assert {f})\n"));
    }
    out.push_str(")\n");
    out
}

/// `g<i>` | `(complement e)` | `(intersect e*)` | `(union e*)`
pub fn setexpr_from_sexp(s: &Sexp) -> Result<SetExpr, ParseError> {
    if let Some(a) = s.atom() {
        return match a.strip_prefix('g').map(str::parse::<usize>) {
            Some(Ok(g)) => Ok(SetExpr::Generator(g)),
            _ => Err(s.err(format!("expected a generator `g<i>`, found `{a}`"))),
        };
    }
    let Some((head, args)) = s.form() else {
        return Err(s.err("expected a set expression"));
    };
    let kids = || {
        args.iter()
            .map(setexpr_from_sexp)
            .collect::<Result<Vec<_>, _>>()
    };
    match head {
        "complement" => {
            arity(args, 1, s, "complement")?;
            Ok(SetExpr::complement(setexpr_from_sexp(&args[0])?))
        }
        "intersect" => Ok(SetExpr::Intersect(kids()?)),
        "union" => Ok(SetExpr::Union(kids()?)),
        other => Err(s.err(format!("unknown set operation `{other}`"))),
    }
}

/// `(filter (carrier finite 3) (width 3) (gen {0 1}) (gen {1 2}))` or
/// `(filter (carrier symbolic (family ...)) (gen <set expression>) ...)`.
/// Width defaults to `default_width`; a symbolic carrier takes its width from
/// the family.
pub fn parse_filter(
    src: &str,
    default_width: usize,
    default_bound: u64,
) -> Result<FilterPresentation, ParseError> {
    let s = parse_one(src)?;
    let Some(("filter", items)) = s.form() else {
        return Err(s.err("expected `(filter ...)`"));
    };
    let mut carrier = None;
    let mut width = default_width;
    let mut gens = Vec::new();
    for it in items {
        match it.form() {
            Some(("carrier", args)) => carrier = Some((it, args)),
            Some(("width", args)) => {
                arity(args, 1, it, "width")?;
                width = args[0].expect_nat("a width")? as usize;
            }
            Some(("gen", args)) => {
                arity(args, 1, it, "gen")?;
                gens.push(&args[0]);
            }
            _ => return Err(it.err("unknown filter clause")),
        }
    }
    let (at, args) = carrier.ok_or_else(|| s.err("missing `(carrier ...)`"))?;
    match args {
        [k, n] if k.atom() == Some("finite") => {
            let n = n.expect_nat("a carrier size")?;
            let n = u32::try_from(n).map_err(|_| at.err("carrier too large"))?;
            let mut subsets = Vec::new();
            for g in &gens {
                let BaseSet::Finite(v) = set_from_sexp(g)? else {
                    return Err(g.err("finite carriers take `{...}` generators"));
                };
                if let Some(x) = v.iter().find(|&&x| x >= u64::from(n)) {
                    return Err(g.err(format!("element {x} is outside the carrier {n}")));
                }
                subsets.push(Subset::from_elems(v));
            }
            FiniteFilter::new(n, width, subsets)
                .map(FilterPresentation::Finite)
                .map_err(lift(at))
        }
        [k, fam] if k.atom() == Some("symbolic") => {
            let file = family_from_sexp(fam, width, default_bound)?;
            let exprs = gens
                .iter()
                .map(|g| setexpr_from_sexp(g))
                .collect::<Result<Vec<_>, _>>()?;
            SymbolicFilter::new(file.family, exprs)
                .map(FilterPresentation::Symbolic)
                .map_err(lift(at))
        }
        _ => Err(at.err("expected `(carrier finite n)` or `(carrier symbolic (family ...))`")),
    }
}

pub fn print_filter(f: &FiniteFilter) -> String {
    let mut out = format!("(filter (carrier finite {}) (width {})", f.n(), f.width());
    for g in f.generators() {
        out.push_str(&format!(" (gen {g})"));
    }
    out.push_str(")\n");
    out
}

/// `(assignment (a0 1) (a3 0) …)`; `true`/`false` are accepted for `1`/`0`.
pub fn parse_assignment(src: &str) -> Result<Assignment, ParseError> {
    let s = parse_one(src)?;
    let Some(("assignment", items)) = s.form() else {
        return Err(s.err("expected `(assignment (a<i> 0|1)*)`"));
    };
    let mut out = Assignment::new();
    for it in items {
        let pair = it.expect_list("`(a<i> 0|1)`")?;
        let [atom, val] = pair else {
            return Err(it.err("expected `(a<i> 0|1)`"));
        };
        let g = atom_index(atom)?.ok_or_else(|| atom.err("expected an atom `a<i>`"))?;
        let v = match val.atom() {
            Some("1" | "true") => true,
            Some("0" | "false") => false,
            _ => return Err(val.err("expected 0 or 1")),
        };
        if out.get(g).is_some() {
            return Err(atom.err(format!("a{g} assigned twice")));
        }
        out.set(g, v);
    }
    Ok(out)
}

pub fn print_assignment(s: &Assignment) -> String {
    let mut out = String::from("(assignment");
    for (g, v) in s.values() {
        out.push_str(&format!(" (a{g} {})", u8::from(*v)));
    }
    out.push_str(")\n");
    out
}

/// `(model (domain e*) (const c e)* (fun f k (e* e))* (rel R k (e*))*)`, as
/// printed by [`Structure`]'s `Display`. Elements are named by any
/// s-expression; constants `c#f.i` denote witnesses.
pub fn parse_model(src: &str) -> Result<Structure, ParseError> {
    let s = parse_one(src)?;
    let Some(("model", items)) = s.form() else {
        return Err(s.err("expected `(model ...)`"));
    };
    let mut m = Structure::default();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let elem = |e: &Sexp, index: &BTreeMap<String, usize>| {
        index
            .get(&e.to_string())
            .copied()
            .ok_or_else(|| e.err(format!("`{e}` is not in the domain")))
    };
    for (i, it) in items.iter().enumerate() {
        let is_domain = matches!(it.form(), Some(("domain", _)));
        if is_domain != (i == 0) {
            return Err(it.err("`(domain ...)` must come first, exactly once"));
        }
        match it.form() {
            Some(("domain", args)) => {
                for e in args {
                    let name = e.to_string();
                    if index.insert(name.clone(), m.domain.len()).is_some() {
                        return Err(e.err(format!("`{name}` listed twice")));
                    }
                    m.domain.push(name);
                }
            }
            Some(("const", [name, e])) => {
                let c = name.expect_atom("a constant")?;
                let v = elem(e, &index)?;
                let witness = c.strip_prefix("c#").and_then(|w| w.split_once('.'));
                let fresh = match witness {
                    Some((f, i)) => {
                        let key = (
                            f.parse().map_err(|_| name.err("bad witness family"))?,
                            i.parse().map_err(|_| name.err("bad witness index"))?,
                        );
                        m.witnesses.insert(key, v).is_none()
                    }
                    None => m.constants.insert(c.to_string(), v).is_none(),
                };
                if !fresh {
                    return Err(name.err(format!("`{c}` interpreted twice")));
                }
            }
            Some((kind @ ("fun" | "rel"), [name, k, entries @ ..])) => {
                let name = name.expect_atom("a symbol")?.to_string();
                let k = k.expect_nat("an arity")? as usize;
                let width = if kind == "fun" { k + 1 } else { k };
                let mut rows = Vec::new();
                for e in entries {
                    let row = e.expect_list("a tuple")?;
                    if row.len() != width {
                        return Err(e.err(format!("expected {width} element(s)")));
                    }
                    rows.push(
                        row.iter()
                            .map(|x| elem(x, &index))
                            .collect::<Result<Vec<_>, _>>()?,
                    );
                }
                let clash = if kind == "fun" {
                    let mut table = BTreeMap::new();
                    for mut row in rows {
                        let v = row.pop().expect("arity + 1 entries");
                        if table.insert(row, v).is_some() {
                            return Err(it.err(format!("`{name}` defined twice on one tuple")));
                        }
                    }
                    let cells = u32::try_from(k)
                        .ok()
                        .and_then(|k| m.domain.len().checked_pow(k));
                    if cells != Some(table.len()) {
                        return Err(it.err(format!("`{name}` is not total")));
                    }
                    m.functions
                        .insert(name.clone(), FunctionTable { arity: k, table })
                        .is_some()
                } else {
                    let tuples = rows.into_iter().collect();
                    m.relations
                        .insert(name.clone(), RelationTable { arity: k, tuples })
                        .is_some()
                };
                if clash {
                    return Err(it.err(format!("`{name}` interpreted twice")));
                }
            }
            _ => return Err(it.err("unknown model clause")),
        }
    }
    if m.domain.is_empty() {
        return Err(s.err("a model needs a nonempty domain"));
    }
    Ok(m)
}
