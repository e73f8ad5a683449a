//! The traced symmetric monoidal interface every instance implements.

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::object::{ObjectExpr, Wire};

/// Generator used for all sampling. Seeded runs are reproducible.
pub type SampleRng = ChaCha8Rng;

pub trait Morphism: Clone + fmt::Debug + Send + Sync {
    fn dom(&self) -> &ObjectExpr;
    fn cod(&self) -> &ObjectExpr;
}

/// A strict traced symmetric monoidal category over flat wire lists.
///
/// `trace(f, u)` feeds the suffix `u` of the codomain back into the suffix
/// `u` of the domain: for `f : A ⊗ U → B ⊗ U` it returns `A → B`.
pub trait TracedCategory: Sync {
    type Mor: Morphism;

    fn name(&self) -> &'static str;

    fn identity(&self, a: &ObjectExpr) -> Result<Self::Mor> {
        let perm: Vec<usize> = (0..a.num_wires()).collect();
        self.permutation(a, &perm)
    }

    fn compose(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;

    fn tensor(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;

    /// The structural isomorphism `a → a.permuted(perm)`.
    fn permutation(&self, a: &ObjectExpr, perm: &[usize]) -> Result<Self::Mor>;

    /// `sym_{A,B} : A ⊗ B → B ⊗ A`.
    fn symmetry(&self, a: &ObjectExpr, b: &ObjectExpr) -> Result<Self::Mor> {
        let n = a.num_wires();
        let m = b.num_wires();
        let perm: Vec<usize> = (n..n + m).chain(0..n).collect();
        self.permutation(&a.tensor(b), &perm)
    }

    fn trace(&self, f: &Self::Mor, u: &ObjectExpr) -> Result<Self::Mor>;

    /// Instance notion of sameness; must be an equivalence relation.
    fn equal(&self, f: &Self::Mor, g: &Self::Mor) -> bool;

    /// Number of elements of an object under this instance's reading of ⊗.
    fn size(&self, a: &ObjectExpr) -> usize {
        a.union_size()
    }

    /// Largest object size the sampler should be asked to handle.
    fn sample_budget(&self) -> usize {
        usize::MAX
    }

    fn sample_wire(&self, rng: &mut SampleRng, name: String, max_elems: usize) -> Wire {
        let n = rng.gen_range(1..=max_elems.max(1));
        Wire::set(&name, (0..n).map(|i| format!("e{i}"))).expect("generated labels are valid")
    }

    /// A random morphism `a → b`.
    fn sample(&self, a: &ObjectExpr, b: &ObjectExpr, rng: &mut SampleRng) -> Self::Mor;

    fn describe(&self, f: &Self::Mor) -> String {
        format!("{f:?}")
    }
}

impl<C: TracedCategory> TracedCategory for &C {
    type Mor = C::Mor;

    fn name(&self) -> &'static str {
        (**self).name()
    }
    fn identity(&self, a: &ObjectExpr) -> Result<Self::Mor> {
        (**self).identity(a)
    }
    fn compose(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor> {
        (**self).compose(f, g)
    }
    fn tensor(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor> {
        (**self).tensor(f, g)
    }
    fn permutation(&self, a: &ObjectExpr, perm: &[usize]) -> Result<Self::Mor> {
        (**self).permutation(a, perm)
    }
    fn symmetry(&self, a: &ObjectExpr, b: &ObjectExpr) -> Result<Self::Mor> {
        (**self).symmetry(a, b)
    }
    fn trace(&self, f: &Self::Mor, u: &ObjectExpr) -> Result<Self::Mor> {
        (**self).trace(f, u)
    }
    fn equal(&self, f: &Self::Mor, g: &Self::Mor) -> bool {
        (**self).equal(f, g)
    }
    fn size(&self, a: &ObjectExpr) -> usize {
        (**self).size(a)
    }
    fn sample_budget(&self) -> usize {
        (**self).sample_budget()
    }
    fn sample_wire(&self, rng: &mut SampleRng, name: String, max_elems: usize) -> Wire {
        (**self).sample_wire(rng, name, max_elems)
    }
    fn sample(&self, a: &ObjectExpr, b: &ObjectExpr, rng: &mut SampleRng) -> Self::Mor {
        (**self).sample(a, b, rng)
    }
    fn describe(&self, f: &Self::Mor) -> String {
        (**self).describe(f)
    }
}

/// Checks that `f : A ⊗ U → B ⊗ U` and returns `(A, B)`.
pub fn trace_split<M: Morphism>(f: &M, u: &ObjectExpr) -> Result<(ObjectExpr, ObjectExpr)> {
    let a = f.dom().strip_suffix(u);
    let b = f.cod().strip_suffix(u);
    match (a, b) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::Shape(format!(
            "cannot trace over {u}: morphism is {} -> {}",
            f.dom(),
            f.cod()
        ))),
    }
}

pub fn check_composable<M: Morphism>(f: &M, g: &M) -> Result<()> {
    if f.cod() != g.dom() {
        return Err(Error::Shape(format!(
            "cannot compose {} -> {} with {} -> {}",
            f.dom(),
            f.cod(),
            g.dom(),
            g.cod()
        )));
    }
    Ok(())
}

/// Composes a non-empty chain of morphisms left to right.
pub fn compose_all<C: TracedCategory>(cat: &C, fs: &[&C::Mor]) -> Result<C::Mor> {
    let (first, rest) = fs
        .split_first()
        .ok_or_else(|| Error::Shape("empty composition".into()))?;
    rest.iter()
        .try_fold((*first).clone(), |acc, g| cat.compose(&acc, g))
}
