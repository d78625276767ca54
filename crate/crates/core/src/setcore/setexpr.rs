use std::collections::BTreeSet;
use std::fmt;

use super::{indep_member, FamilySpec, GroundPoint, SetError};

/// A symbolic Boolean combination of family generators. `Intersect([])` is
/// the whole ground space and `Union([])` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SetExpr {
    Generator(usize),
    Complement(Box<SetExpr>),
    Intersect(Vec<SetExpr>),
    Union(Vec<SetExpr>),
}

impl SetExpr {
    pub fn full() -> Self {
        SetExpr::Intersect(Vec::new())
    }

    pub fn empty() -> Self {
        SetExpr::Union(Vec::new())
    }

    pub fn complement(e: SetExpr) -> Self {
        SetExpr::Complement(Box::new(e))
    }

    /// Generator indices mentioned anywhere in the expression.
    pub fn generators(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_generators(&mut out);
        out
    }

    fn collect_generators(&self, out: &mut BTreeSet<usize>) {
        match self {
            SetExpr::Generator(g) => {
                out.insert(*g);
            }
            SetExpr::Complement(e) => e.collect_generators(out),
            SetExpr::Intersect(es) | SetExpr::Union(es) => {
                es.iter().for_each(|e| e.collect_generators(out))
            }
        }
    }

    pub fn max_arity(&self) -> usize {
        match self {
            SetExpr::Generator(_) => 0,
            SetExpr::Complement(e) => e.max_arity(),
            SetExpr::Intersect(es) | SetExpr::Union(es) => es
                .iter()
                .map(SetExpr::max_arity)
                .max()
                .unwrap_or(0)
                .max(es.len()),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            SetExpr::Generator(_) => 0,
            SetExpr::Complement(e) => 1 + e.depth(),
            SetExpr::Intersect(es) | SetExpr::Union(es) => {
                1 + es.iter().map(SetExpr::depth).max().unwrap_or(0)
            }
        }
    }

    /// Pointwise evaluation given a generator-membership oracle.
    pub fn eval_with<E>(
        &self,
        member: &mut impl FnMut(usize) -> Result<bool, E>,
    ) -> Result<bool, E> {
        Ok(match self {
            SetExpr::Generator(g) => member(*g)?,
            SetExpr::Complement(e) => !e.eval_with(member)?,
            SetExpr::Intersect(es) => {
                for e in es {
                    if !e.eval_with(member)? {
                        return Ok(false);
                    }
                }
                true
            }
            SetExpr::Union(es) => {
                for e in es {
                    if e.eval_with(member)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }
}

/// Whether `p` lies in the set denoted by `e` over `family`.
pub fn eval_setexpr(e: &SetExpr, p: &GroundPoint, family: &FamilySpec) -> Result<bool, SetError> {
    e.eval_with(&mut |g| {
        family
            .generator(g)
            .map(|a| indep_member(p, a))
            .ok_or(SetError::UnknownGenerator(g))
    })
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seq = |f: &mut fmt::Formatter<'_>, head: &str, es: &[SetExpr]| {
            write!(f, "({head}")?;
            for e in es {
                write!(f, " {e}")?;
            }
            write!(f, ")")
        };
        match self {
            SetExpr::Generator(g) => write!(f, "g{g}"),
            SetExpr::Complement(e) => write!(f, "(complement {e})"),
            SetExpr::Intersect(es) => seq(f, "intersect", es),
            SetExpr::Union(es) => seq(f, "union", es),
        }
    }
}
