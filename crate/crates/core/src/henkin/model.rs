//! Finite structures: extraction by term quotient, and model checking.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::closure::tuples;
use super::image::PropImage;
use super::syntax::{FOFormula, Term};
use super::HenkinError;
use crate::proplogic::Assignment;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    pub arity: usize,
    /// Total over `domain^arity`.
    pub table: BTreeMap<Vec<usize>, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationTable {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

/// A finite structure whose elements are `0..domain.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Structure {
    /// A name for each element; for extracted structures, the least term of
    /// its class.
    pub domain: Vec<String>,
    pub constants: BTreeMap<String, usize>,
    pub witnesses: BTreeMap<(usize, usize), usize>,
    pub functions: BTreeMap<String, FunctionTable>,
    pub relations: BTreeMap<String, RelationTable>,
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tuple = |t: &[usize]| {
            t.iter()
                .map(|&i| self.domain[i].as_str())
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(f, "(model")?;
        writeln!(f, "  (domain {})", self.domain.join(" "))?;
        for (c, &i) in &self.constants {
            writeln!(f, "  (const {c} {})", self.domain[i])?;
        }
        for (&(fam, idx), &i) in &self.witnesses {
            writeln!(
                f,
                "  (const {} {})",
                Term::Witness {
                    family: fam,
                    index: idx
                },
                self.domain[i]
            )?;
        }
        for (name, ft) in &self.functions {
            write!(f, "  (fun {name} {}", ft.arity)?;
            for (args, &v) in &ft.table {
                write!(f, " ({} {})", tuple(args), self.domain[v])?;
            }
            writeln!(f, ")")?;
        }
        for (name, rt) in &self.relations {
            write!(f, "  (rel {name} {}", rt.arity)?;
            for t in &rt.tuples {
                write!(f, " ({})", tuple(t))?;
            }
            writeln!(f, ")")?;
        }
        write!(f, ")")
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Quotients the closure terms by the true equality variables and reads the
/// interpretation off `s`, after checking every axiom of the image.
pub fn extract_structure(image: &PropImage, s: &Assignment) -> Result<Structure, HenkinError> {
    if let Some((i, ax)) = image.first_violation(s)? {
        return Err(HenkinError::InconsistentAssignment {
            axiom: i,
            scheme: ax.scheme,
            text: ax.formula.to_string(),
        });
    }
    let terms = &image.terms;
    let mut parent: Vec<usize> = (0..terms.len()).collect();
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            if image.eq_var(&terms[i], &terms[j]).and_then(|v| s.get(v)) == Some(true) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                // Terms are sorted, so the smaller root is the least member.
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let roots: Vec<usize> = (0..terms.len()).map(|i| find(&mut parent, i)).collect();
    let mut class_of_root = BTreeMap::new();
    let mut domain = Vec::new();
    for (i, &r) in roots.iter().enumerate() {
        if r == i {
            class_of_root.insert(r, domain.len());
            domain.push(terms[i].to_string());
        }
    }
    let class: BTreeMap<&Term, usize> = terms
        .iter()
        .zip(&roots)
        .map(|(t, r)| (t, class_of_root[r]))
        .collect();

    let mut m = Structure {
        domain,
        ..Structure::default()
    };
    for t in terms {
        match t {
            Term::Const(c) => {
                m.constants.insert(c.clone(), class[t]);
            }
            Term::Witness { family, index } => {
                m.witnesses.insert((*family, *index), class[t]);
            }
            _ => {}
        }
    }
    let sig = &image.closure.signature;
    for (name, &arity) in &sig.functions {
        let mut witnessed: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for t in terms {
            if let Term::App(g, args) = t {
                if g == name {
                    let key: Vec<usize> = args.iter().map(|a| class[a]).collect();
                    witnessed.entry(key).or_insert(class[t]);
                }
            }
        }
        // Unwitnessed arguments map to the class of the least term.
        let table = tuples(m.domain.len(), arity)
            .map(|k| (k.clone(), witnessed.get(&k).copied().unwrap_or(0)))
            .collect();
        m.functions
            .insert(name.clone(), FunctionTable { arity, table });
    }
    for (name, &arity) in &sig.relations {
        m.relations.insert(
            name.clone(),
            RelationTable {
                arity,
                tuples: BTreeSet::new(),
            },
        );
    }
    for (i, f) in image.variables.iter().enumerate() {
        if let FOFormula::Rel(r, args) = f {
            if s.get(i) == Some(true) {
                let key = args.iter().map(|a| class[a]).collect();
                m.relations
                    .get_mut(r)
                    .expect("signature covers closure")
                    .tuples
                    .insert(key);
            }
        }
    }
    Ok(m)
}

/// Standard satisfaction of the sentence `phi`, quantifiers ranging over the
/// domain.
pub fn model_check(m: &Structure, phi: &FOFormula) -> Result<bool, HenkinError> {
    holds(m, phi, &mut Vec::new())
}

fn value(m: &Structure, t: &Term, env: &[(String, usize)]) -> Result<usize, HenkinError> {
    let missing = |name: String| HenkinError::SignatureMismatch(name);
    match t {
        Term::Var(v) => env
            .iter()
            .rev()
            .find(|(name, _)| name == v)
            .map(|&(_, e)| e)
            .ok_or_else(|| HenkinError::FreeVariable(v.clone())),
        Term::Const(c) => m
            .constants
            .get(c)
            .copied()
            .ok_or_else(|| missing(c.clone())),
        Term::Witness { family, index } => m
            .witnesses
            .get(&(*family, *index))
            .copied()
            .ok_or_else(|| missing(t.to_string())),
        Term::App(f, args) => {
            let ft = m
                .functions
                .get(f)
                .filter(|ft| ft.arity == args.len())
                .ok_or_else(|| missing(f.clone()))?;
            let key = args
                .iter()
                .map(|a| value(m, a, env))
                .collect::<Result<Vec<_>, _>>()?;
            ft.table
                .get(&key)
                .copied()
                .ok_or_else(|| missing(format!("{f} on {key:?}")))
        }
    }
}

fn holds(
    m: &Structure,
    phi: &FOFormula,
    env: &mut Vec<(String, usize)>,
) -> Result<bool, HenkinError> {
    match phi {
        FOFormula::Rel(r, args) => {
            let rt = m.relations.get(r).filter(|rt| rt.arity == args.len());
            let rt = rt.ok_or_else(|| HenkinError::SignatureMismatch(r.clone()))?;
            let key = args
                .iter()
                .map(|a| value(m, a, env))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(rt.tuples.contains(&key))
        }
        FOFormula::Eq(a, b) => Ok(value(m, a, env)? == value(m, b, env)?),
        FOFormula::Not(g) => Ok(!holds(m, g, env)?),
        FOFormula::And(gs) => {
            for g in gs {
                if !holds(m, g, env)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        FOFormula::Or(gs) => {
            for g in gs {
                if holds(m, g, env)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        FOFormula::Exists(vs, body) | FOFormula::Forall(vs, body) => {
            let want = matches!(phi, FOFormula::Exists(..));
            for tuple in tuples(m.domain.len(), vs.len()) {
                let mark = env.len();
                env.extend(vs.iter().cloned().zip(tuple));
                let r = holds(m, body, env);
                env.truncate(mark);
                if r? == want {
                    return Ok(want);
                }
            }
            Ok(!want)
        }
    }
}
