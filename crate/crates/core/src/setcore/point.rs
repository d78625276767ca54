use std::cmp::Ordering;
use std::fmt;

use super::{fmt_elems, BaseDomain, Elem, SetError};

/// Default cap on the number of points [`enumerate_ground`] will produce.
pub const DEFAULT_ENUM_CAP: usize = 1 << 20;

/// A point `⟨X, Z⟩` of the ground space: a finite support `X` and a trace
/// `Z` of subsets of `X`.
///
/// Supports and trace members are sorted ascending; the trace itself is
/// sorted lexicographically and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundPoint {
    support: Vec<Elem>,
    trace: Vec<Vec<Elem>>,
}

impl GroundPoint {
    pub fn new(support: Vec<Elem>, trace: Vec<Vec<Elem>>) -> Result<Self, SetError> {
        let mut support = support;
        support.sort_unstable();
        support.dedup();
        let mut norm = Vec::with_capacity(trace.len());
        for mut z in trace {
            z.sort_unstable();
            z.dedup();
            if let Some(x) = z.iter().find(|x| support.binary_search(x).is_err()) {
                return Err(SetError::InvalidPoint(format!(
                    "trace member {} has {x} outside the support {}",
                    fmt_elems(&z),
                    fmt_elems(&support)
                )));
            }
            norm.push(z);
        }
        norm.sort();
        norm.dedup();
        Ok(GroundPoint {
            support,
            trace: norm,
        })
    }

    /// Builds a point whose trace is already known to be normalized.
    pub(crate) fn from_parts(support: Vec<Elem>, mut trace: Vec<Vec<Elem>>) -> Self {
        trace.sort();
        trace.dedup();
        GroundPoint { support, trace }
    }

    /// `⟨{γ}, {{γ}}⟩`
    pub fn singleton_witness(g: Elem) -> Self {
        GroundPoint {
            support: vec![g],
            trace: vec![vec![g]],
        }
    }

    pub fn support(&self) -> &[Elem] {
        &self.support
    }

    pub fn trace(&self) -> &[Vec<Elem>] {
        &self.trace
    }

    pub fn trace_contains(&self, z: &[Elem]) -> bool {
        self.trace.binary_search_by(|m| m.as_slice().cmp(z)).is_ok()
    }

    /// Checks the support against the domain and its width.
    pub fn validate(&self, domain: &BaseDomain) -> Result<(), SetError> {
        if let Some(x) = self.support.iter().find(|&&x| !domain.contains(x)) {
            return Err(SetError::InvalidPoint(format!(
                "support element {x} outside {domain}"
            )));
        }
        if self.support.len() >= domain.width() {
            return Err(SetError::WidthExceeded {
                size: self.support.len(),
                width: domain.width(),
            });
        }
        Ok(())
    }
}

impl Ord for GroundPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.support
            .len()
            .cmp(&other.support.len())
            .then_with(|| self.support.cmp(&other.support))
            .then_with(|| self.trace.cmp(&other.trace))
    }
}

impl PartialOrd for GroundPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GroundPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let zs: Vec<String> = self.trace.iter().map(|z| fmt_elems(z)).collect();
        write!(f, "(pt {} ({}))", fmt_elems(&self.support), zs.join(" "))
    }
}

fn binom(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn usable_elements(domain: &BaseDomain, truncation: u64) -> u64 {
    domain.clamp(truncation)
}

/// Number of ground points with support inside `{0, …, truncation-1}`,
/// saturating at `u128::MAX`.
pub fn ground_size(domain: &BaseDomain, truncation: u64) -> u128 {
    let m = usable_elements(domain, truncation) as u128;
    let max_k = m.min(domain.width() as u128 - 1);
    (0..=max_k)
        .map(|k| {
            let traces = if k >= 7 {
                u128::MAX
            } else {
                1u128 << (1u32 << k)
            };
            binom(m, k).saturating_mul(traces)
        })
        .fold(0u128, |a, b| a.saturating_add(b))
}

/// All ground points with support inside `{0, …, truncation-1}`, in canonical
/// order.
pub fn enumerate_ground(
    domain: &BaseDomain,
    truncation: u64,
) -> Result<Vec<GroundPoint>, SetError> {
    enumerate_ground_capped(domain, truncation, DEFAULT_ENUM_CAP)
}

pub fn enumerate_ground_capped(
    domain: &BaseDomain,
    truncation: u64,
    cap: usize,
) -> Result<Vec<GroundPoint>, SetError> {
    let needed = ground_size(domain, truncation);
    if needed > cap as u128 {
        return Err(SetError::SizeOverflow { needed, cap });
    }
    let m = usable_elements(domain, truncation);
    let mut out = Vec::with_capacity(needed as usize);
    let mut supports = Vec::new();
    subsets_up_to(m, domain.width() - 1, &mut supports);
    for x in supports {
        let k = x.len();
        let members: Vec<Vec<Elem>> = (0u32..1 << k)
            .map(|mask| {
                x.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect()
            })
            .collect();
        for z in 0u64..1u64 << members.len() {
            let trace = (0..members.len())
                .filter(|i| z >> i & 1 == 1)
                .map(|i| members[i].clone())
                .collect();
            out.push(GroundPoint::from_parts(x.clone(), trace));
        }
    }
    out.sort();
    Ok(out)
}

fn subsets_up_to(m: u64, max_size: usize, out: &mut Vec<Vec<Elem>>) {
    fn go(next: u64, m: u64, max_size: usize, cur: &mut Vec<Elem>, out: &mut Vec<Vec<Elem>>) {
        out.push(cur.clone());
        if cur.len() == max_size {
            return;
        }
        for e in next..m {
            cur.push(e);
            go(e + 1, m, max_size, cur, out);
            cur.pop();
        }
    }
    go(0, m, max_size, &mut Vec::new(), out);
}
