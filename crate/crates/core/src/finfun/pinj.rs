//! Partial injections: the Pfn operations restricted to injective tables.

use rand::seq::SliceRandom;
use rand::Rng;

use super::pfn::{self, PfnTable};
use crate::category::{Morphism, SampleRng, TracedCategory};
use crate::error::{Error, Result};
use crate::object::ObjectExpr;

/// A partial function certified injective on its domain of definition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PInjTable(PfnTable);

impl Morphism for PInjTable {
    fn dom(&self) -> &ObjectExpr {
        self.0.dom()
    }
    fn cod(&self) -> &ObjectExpr {
        self.0.cod()
    }
}

impl PInjTable {
    pub fn as_pfn(&self) -> &PfnTable {
        &self.0
    }

    pub fn into_pfn(self) -> PfnTable {
        self.0
    }
}

/// Certifies `f` injective, or names two points with the same image.
pub fn pinj_validate(f: PfnTable) -> Result<PInjTable> {
    let mut seen: Vec<Option<usize>> = vec![None; f.cod().union_size()];
    for (x, y) in f.pairs() {
        if let Some(prev) = seen[y] {
            return Err(Error::Validation(format!(
                "not injective: {} and {} both map to {}",
                f.dom().union_label(prev),
                f.dom().union_label(x),
                f.cod().union_label(y)
            )));
        }
        seen[y] = Some(x);
    }
    Ok(PInjTable(f))
}

/// Wraps a table the caller knows to be injective.
fn certified(f: PfnTable) -> PInjTable {
    debug_assert!(pinj_validate(f.clone()).is_ok());
    PInjTable(f)
}

pub fn pinj_trace(f: &PInjTable, u: &ObjectExpr) -> Result<PInjTable> {
    pfn::pfn_trace(&f.0, u).map(certified)
}

/// Random partial injection: a shuffled codomain is dealt to domain points,
/// each point left undefined with probability 1/4.
pub fn sample_pinj(a: &ObjectExpr, b: &ObjectExpr, rng: &mut SampleRng) -> PInjTable {
    let mut free: Vec<usize> = (0..b.union_size()).collect();
    free.shuffle(rng);
    let map = (0..a.union_size())
        .map(|_| if rng.gen_bool(0.25) { None } else { free.pop() })
        .collect();
    certified(PfnTable::new(a.clone(), b.clone(), map).expect("sampled table is well typed"))
}

/// The category of finite sets and partial injective maps.
#[derive(Debug, Clone, Copy, Default)]
pub struct PInj;

impl TracedCategory for PInj {
    type Mor = PInjTable;

    fn name(&self) -> &'static str {
        "pinj"
    }

    fn compose(&self, f: &PInjTable, g: &PInjTable) -> Result<PInjTable> {
        pfn::pfn_compose(&f.0, &g.0).map(certified)
    }

    fn tensor(&self, f: &PInjTable, g: &PInjTable) -> Result<PInjTable> {
        Ok(certified(pfn::pfn_tensor(&f.0, &g.0)))
    }

    fn permutation(&self, a: &ObjectExpr, perm: &[usize]) -> Result<PInjTable> {
        pfn::pfn_permutation(a, perm).map(certified)
    }

    fn trace(&self, f: &PInjTable, u: &ObjectExpr) -> Result<PInjTable> {
        pinj_trace(f, u)
    }

    fn equal(&self, f: &PInjTable, g: &PInjTable) -> bool {
        f == g
    }

    fn sample(&self, a: &ObjectExpr, b: &ObjectExpr, rng: &mut SampleRng) -> PInjTable {
        sample_pinj(a, b, rng)
    }

    fn describe(&self, f: &PInjTable) -> String {
        pfn::describe_pairs(&f.0)
    }
}
