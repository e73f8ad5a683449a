//! Finite sets and partial functions, tensor as disjoint union.

use rand::Rng;

use crate::category::{check_composable, trace_split, Morphism, SampleRng, TracedCategory};
use crate::error::{Error, Result};
use crate::object::ObjectExpr;

/// A partial function between the disjoint-union carriers of two objects.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PfnTable {
    dom: ObjectExpr,
    cod: ObjectExpr,
    map: Vec<Option<usize>>,
}

impl Morphism for PfnTable {
    fn dom(&self) -> &ObjectExpr {
        &self.dom
    }
    fn cod(&self) -> &ObjectExpr {
        &self.cod
    }
}

impl PfnTable {
    pub fn new(dom: ObjectExpr, cod: ObjectExpr, map: Vec<Option<usize>>) -> Result<Self> {
        if map.len() != dom.union_size() {
            return Err(Error::Validation(format!(
                "table has {} entries but the domain has {} elements",
                map.len(),
                dom.union_size()
            )));
        }
        let n = cod.union_size();
        if let Some(bad) = map.iter().flatten().find(|&&y| y >= n) {
            return Err(Error::Validation(format!("image {bad} outside the codomain")));
        }
        Ok(PfnTable { dom, cod, map })
    }

    /// The everywhere-undefined map.
    pub fn empty(dom: ObjectExpr, cod: ObjectExpr) -> Self {
        let map = vec![None; dom.union_size()];
        PfnTable { dom, cod, map }
    }

    pub fn from_pairs(
        dom: ObjectExpr,
        cod: ObjectExpr,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut map = vec![None; dom.union_size()];
        for (x, y) in pairs {
            let slot = map
                .get_mut(x)
                .ok_or_else(|| Error::Validation(format!("point {x} outside the domain")))?;
            if slot.is_some_and(|old| old != y) {
                return Err(Error::Validation(format!("point {x} mapped twice")));
            }
            *slot = Some(y);
        }
        Self::new(dom, cod, map)
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.map[x]
    }

    pub fn table(&self) -> &[Option<usize>] {
        &self.map
    }

    /// Defined points as `(x, f(x))` in domain order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.map.iter().enumerate().filter_map(|(x, y)| y.map(|y| (x, y)))
    }
}

/// Where a token entering a feedback loop ends up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenExit {
    /// Left through the output wire at this element.
    Exit(usize),
    /// Hit a point where the map is undefined.
    Stuck,
    /// Revisited a feedback element; determinism means it loops forever.
    Cycle,
}

/// The route of one token through `f : A ⊗ U → B ⊗ U`: the feedback
/// elements (indices into `U`) visited in order, and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenPath {
    pub input: usize,
    pub loop_elems: Vec<usize>,
    pub exit: TokenExit,
}

/// Follows the token for input `x ∈ A` through `f`. Each feedback element is
/// visited at most once, so the walk takes at most `|U|` loop steps.
pub fn token_path(f: &PfnTable, a_size: usize, b_size: usize, x: usize) -> TokenPath {
    let u_size = f.cod.union_size() - b_size;
    let mut visited = vec![false; u_size];
    let mut loop_elems = Vec::new();
    let mut out = f.map[x];
    let exit = loop {
        match out {
            None => break TokenExit::Stuck,
            Some(y) if y < b_size => break TokenExit::Exit(y),
            Some(y) => {
                let u = y - b_size;
                if visited[u] {
                    break TokenExit::Cycle;
                }
                visited[u] = true;
                loop_elems.push(u);
                out = f.map[a_size + u];
            }
        }
    };
    TokenPath {
        input: x,
        loop_elems,
        exit,
    }
}

pub fn pfn_compose(f: &PfnTable, g: &PfnTable) -> Result<PfnTable> {
    check_composable(f, g)?;
    let map = f.map.iter().map(|y| y.and_then(|y| g.map[y])).collect();
    Ok(PfnTable {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        map,
    })
}

pub fn pfn_tensor(f: &PfnTable, g: &PfnTable) -> PfnTable {
    let shift = f.cod.union_size();
    let map = f
        .map
        .iter()
        .copied()
        .chain(g.map.iter().map(|y| y.map(|y| y + shift)))
        .collect();
    PfnTable {
        dom: f.dom.tensor(&g.dom),
        cod: f.cod.tensor(&g.cod),
        map,
    }
}

pub fn pfn_permutation(a: &ObjectExpr, perm: &[usize]) -> Result<PfnTable> {
    let map = a.union_permutation(perm)?.into_iter().map(Some).collect();
    Ok(PfnTable {
        dom: a.clone(),
        cod: a.permuted(perm)?,
        map,
    })
}

/// Feedback over the suffix `u`: a token entering at `x` circulates through
/// `U` until it exits into `B`; if it gets stuck or cycles the result is
/// undefined at `x`.
pub fn pfn_trace(f: &PfnTable, u: &ObjectExpr) -> Result<PfnTable> {
    let (a, b) = trace_split(f, u)?;
    let (na, nb) = (a.union_size(), b.union_size());
    let map = (0..na)
        .map(|x| match token_path(f, na, nb, x).exit {
            TokenExit::Exit(y) => Some(y),
            _ => None,
        })
        .collect();
    Ok(PfnTable { dom: a, cod: b, map })
}

/// Samples each point as undefined with probability 1/4, uniform otherwise.
pub fn sample_pfn(a: &ObjectExpr, b: &ObjectExpr, rng: &mut SampleRng) -> PfnTable {
    let n = b.union_size();
    let map = (0..a.union_size())
        .map(|_| {
            if n == 0 || rng.gen_bool(0.25) {
                None
            } else {
                Some(rng.gen_range(0..n))
            }
        })
        .collect();
    PfnTable {
        dom: a.clone(),
        cod: b.clone(),
        map,
    }
}

/// The category of finite sets and partial functions.
#[derive(Debug, Clone, Copy, Default)]
pub struct Pfn;

impl TracedCategory for Pfn {
    type Mor = PfnTable;

    fn name(&self) -> &'static str {
        "pfn"
    }

    fn compose(&self, f: &PfnTable, g: &PfnTable) -> Result<PfnTable> {
        pfn_compose(f, g)
    }

    fn tensor(&self, f: &PfnTable, g: &PfnTable) -> Result<PfnTable> {
        Ok(pfn_tensor(f, g))
    }

    fn permutation(&self, a: &ObjectExpr, perm: &[usize]) -> Result<PfnTable> {
        pfn_permutation(a, perm)
    }

    fn trace(&self, f: &PfnTable, u: &ObjectExpr) -> Result<PfnTable> {
        pfn_trace(f, u)
    }

    fn equal(&self, f: &PfnTable, g: &PfnTable) -> bool {
        f == g
    }

    fn sample(&self, a: &ObjectExpr, b: &ObjectExpr, rng: &mut SampleRng) -> PfnTable {
        sample_pfn(a, b, rng)
    }

    fn describe(&self, f: &PfnTable) -> String {
        describe_pairs(f)
    }
}

pub(crate) fn describe_pairs(f: &PfnTable) -> String {
    let body: Vec<String> = f
        .pairs()
        .map(|(x, y)| format!("{}↦{}", f.dom.union_label(x), f.cod.union_label(y)))
        .collect();
    format!("{} -> {} {{{}}}", f.dom, f.cod, body.join(", "))
}
