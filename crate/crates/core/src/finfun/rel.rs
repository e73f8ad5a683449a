//! Finite sets and relations, tensor as disjoint union.

use std::collections::BTreeSet;

use rand::Rng;

use super::pfn::PfnTable;
use crate::category::{check_composable, trace_split, Morphism, SampleRng, TracedCategory};
use crate::error::{Error, Result};
use crate::object::ObjectExpr;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelTable {
    dom: ObjectExpr,
    cod: ObjectExpr,
    /// `rows[x]` is the image of `x`.
    rows: Vec<BTreeSet<usize>>,
}

impl Morphism for RelTable {
    fn dom(&self) -> &ObjectExpr {
        &self.dom
    }
    fn cod(&self) -> &ObjectExpr {
        &self.cod
    }
}

impl RelTable {
    pub fn from_pairs(
        dom: ObjectExpr,
        cod: ObjectExpr,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let (n, m) = (dom.union_size(), cod.union_size());
        let mut rows = vec![BTreeSet::new(); n];
        for (x, y) in pairs {
            if x >= n || y >= m {
                return Err(Error::Validation(format!("pair ({x}, {y}) outside dom × cod")));
            }
            rows[x].insert(y);
        }
        Ok(RelTable { dom, cod, rows })
    }

    pub fn empty(dom: ObjectExpr, cod: ObjectExpr) -> Self {
        let rows = vec![BTreeSet::new(); dom.union_size()];
        RelTable { dom, cod, rows }
    }

    /// The graph of a partial function.
    pub fn graph(f: &PfnTable) -> Self {
        let mut r = Self::empty(f.dom().clone(), f.cod().clone());
        for (x, y) in f.pairs() {
            r.rows[x].insert(y);
        }
        r
    }

    pub fn image(&self, x: usize) -> &BTreeSet<usize> {
        &self.rows[x]
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(&y)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(x, r)| r.iter().map(move |&y| (x, y)))
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn rel_compose(f: &RelTable, g: &RelTable) -> Result<RelTable> {
    check_composable(f, g)?;
    let rows = f
        .rows
        .iter()
        .map(|r| r.iter().flat_map(|&y| g.rows[y].iter().copied()).collect())
        .collect();
    Ok(RelTable {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        rows,
    })
}

pub fn rel_tensor(f: &RelTable, g: &RelTable) -> RelTable {
    let shift = f.cod.union_size();
    let rows = f
        .rows
        .iter()
        .cloned()
        .chain(g.rows.iter().map(|r| r.iter().map(|y| y + shift).collect()))
        .collect();
    RelTable {
        dom: f.dom.tensor(&g.dom),
        cod: f.cod.tensor(&g.cod),
        rows,
    }
}

/// Feedback over the suffix `u`: `(x, y)` is related iff some finite path
/// `x → u₀ → … → u_{k-1} → y` runs through `f`. Computed as reachability
/// over the feedback elements.
pub fn rel_trace(f: &RelTable, u: &ObjectExpr) -> Result<RelTable> {
    let (a, b) = trace_split(f, u)?;
    let (na, nb) = (a.union_size(), b.union_size());
    let nu = u.union_size();
    let rows = (0..na)
        .map(|x| {
            let mut out = BTreeSet::new();
            let mut seen = vec![false; nu];
            let mut stack = Vec::new();
            let mut visit = |targets: &BTreeSet<usize>, out: &mut BTreeSet<usize>, stack: &mut Vec<usize>| {
                for &y in targets {
                    if y < nb {
                        out.insert(y);
                    } else if !seen[y - nb] {
                        seen[y - nb] = true;
                        stack.push(y - nb);
                    }
                }
            };
            visit(&f.rows[x], &mut out, &mut stack);
            while let Some(w) = stack.pop() {
                visit(&f.rows[na + w], &mut out, &mut stack);
            }
            out
        })
        .collect();
    Ok(RelTable { dom: a, cod: b, rows })
}

/// The category of finite sets and relations.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rel;

impl TracedCategory for Rel {
    type Mor = RelTable;

    fn name(&self) -> &'static str {
        "rel"
    }

    fn compose(&self, f: &RelTable, g: &RelTable) -> Result<RelTable> {
        rel_compose(f, g)
    }

    fn tensor(&self, f: &RelTable, g: &RelTable) -> Result<RelTable> {
        Ok(rel_tensor(f, g))
    }

    fn permutation(&self, a: &ObjectExpr, perm: &[usize]) -> Result<RelTable> {
        let map = a.union_permutation(perm)?;
        RelTable::from_pairs(a.clone(), a.permuted(perm)?, map.into_iter().enumerate())
    }

    fn trace(&self, f: &RelTable, u: &ObjectExpr) -> Result<RelTable> {
        rel_trace(f, u)
    }

    fn equal(&self, f: &RelTable, g: &RelTable) -> bool {
        f == g
    }

    /// Each pair is included independently with probability 1/5.
    fn sample(&self, a: &ObjectExpr, b: &ObjectExpr, rng: &mut SampleRng) -> RelTable {
        let m = b.union_size();
        let rows = (0..a.union_size())
            .map(|_| (0..m).filter(|_| rng.gen_bool(0.2)).collect())
            .collect();
        RelTable {
            dom: a.clone(),
            cod: b.clone(),
            rows,
        }
    }

    fn describe(&self, f: &RelTable) -> String {
        let body: Vec<String> = f
            .pairs()
            .map(|(x, y)| format!("({},{})", f.dom.union_label(x), f.cod.union_label(y)))
            .collect();
        format!("{} -> {} {{{}}}", f.dom, f.cod, body.join(", "))
    }
}
