//! The G (Int) construction over any traced category.
//!
//! An object is a pair `(A⁺, A⁻)` of base objects; a morphism
//! `(A⁺, A⁻) → (B⁺, B⁻)` is a base morphism `A⁺ ⊗ B⁻ → A⁻ ⊗ B⁺`.
//! Composition plugs the shared `B` wires of two morphisms into each other
//! and traces them out. Because objects are flat wire lists, the reordering
//! isomorphisms around the trace are plain wire permutations.

use std::fmt;

use crate::axioms::{run_check, sample_objects, AxiomReport, Case, SampleLimits};
use crate::category::{compose_all, Morphism, SampleRng, TracedCategory};
use crate::error::{Error, Result};
use crate::finfun::{pinj_validate, PInj, PInjTable, PfnTable};
use crate::object::{block_permutation, ObjectExpr};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GObject {
    /// Player moves.
    pub pos: ObjectExpr,
    /// Opponent moves.
    pub neg: ObjectExpr,
}

impl GObject {
    pub fn new(pos: ObjectExpr, neg: ObjectExpr) -> Self {
        GObject { pos, neg }
    }

    /// `(I, I)`.
    pub fn unit() -> Self {
        GObject::default()
    }

    /// `(A⁺, A⁻)* = (A⁻, A⁺)`.
    pub fn dual(&self) -> GObject {
        GObject {
            pos: self.neg.clone(),
            neg: self.pos.clone(),
        }
    }

    /// `(A⁺ ⊗ B⁺, A⁻ ⊗ B⁻)`.
    pub fn tensor(&self, other: &GObject) -> GObject {
        GObject {
            pos: self.pos.tensor(&other.pos),
            neg: self.neg.tensor(&other.neg),
        }
    }

    /// Internal hom `(A⁻ ⊗ B⁺, A⁺ ⊗ B⁻)`, i.e. `A* ⊗ B`.
    pub fn hom(&self, other: &GObject) -> GObject {
        self.dual().tensor(other)
    }
}

impl fmt::Display for GObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.pos, self.neg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GMorphism<M> {
    src: GObject,
    dst: GObject,
    core: M,
}

impl<M: Morphism> GMorphism<M> {
    /// Wraps `core`, which must be typed `src⁺ ⊗ dst⁻ → src⁻ ⊗ dst⁺`.
    pub fn new(src: GObject, dst: GObject, core: M) -> Result<Self> {
        let dom = src.pos.tensor(&dst.neg);
        let cod = src.neg.tensor(&dst.pos);
        if core.dom() != &dom || core.cod() != &cod {
            return Err(Error::Shape(format!(
                "core {} -> {} does not match {src} -> {dst} (expected {dom} -> {cod})",
                core.dom(),
                core.cod()
            )));
        }
        Ok(GMorphism { src, dst, core })
    }

    pub fn src(&self) -> &GObject {
        &self.src
    }

    pub fn dst(&self) -> &GObject {
        &self.dst
    }

    pub fn core(&self) -> &M {
        &self.core
    }

    pub fn into_core(self) -> M {
        self.core
    }
}

/// `G(C)` for a base traced category `C`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Int<C> {
    pub base: C,
}

impl<C: TracedCategory> Int<C> {
    pub fn new(base: C) -> Self {
        Int { base }
    }

    fn block_perm(&self, blocks: &[&ObjectExpr], order: &[usize]) -> Result<C::Mor> {
        let all = ObjectExpr::tensor_all(blocks.iter().copied());
        self.base.permutation(&all, &block_permutation(blocks, order))
    }

    /// The identity is the symmetry `A⁺ ⊗ A⁻ → A⁻ ⊗ A⁺` (the copycat).
    pub fn identity(&self, a: &GObject) -> Result<GMorphism<C::Mor>> {
        let core = self.base.symmetry(&a.pos, &a.neg)?;
        GMorphism::new(a.clone(), a.clone(), core)
    }

    /// `f;g = Tr^{B⁻⊗B⁺}(α; (f ⊗ g); γ)` with
    /// `α : A⁺ C⁻ B⁻ B⁺ → A⁺ B⁻ B⁺ C⁻` and `γ : A⁻ B⁺ B⁻ C⁺ → A⁻ C⁺ B⁻ B⁺`.
    pub fn compose(&self, f: &GMorphism<C::Mor>, g: &GMorphism<C::Mor>) -> Result<GMorphism<C::Mor>> {
        if f.dst != g.src {
            return Err(Error::Shape(format!(
                "cannot compose {} -> {} with {} -> {}",
                f.src, f.dst, g.src, g.dst
            )));
        }
        let (a, b, c) = (&f.src, &f.dst, &g.dst);
        let alpha = self.block_perm(&[&a.pos, &c.neg, &b.neg, &b.pos], &[0, 2, 3, 1])?;
        let gamma = self.block_perm(&[&a.neg, &b.pos, &b.neg, &c.pos], &[0, 3, 2, 1])?;
        let body = compose_all(
            &self.base,
            &[&alpha, &self.base.tensor(&f.core, &g.core)?, &gamma],
        )?;
        let core = self.base.trace(&body, &b.neg.tensor(&b.pos))?;
        GMorphism::new(a.clone(), c.clone(), core)
    }

    /// `f* : B* → A*` with core `sym; f; sym : B⁻ ⊗ A⁺ → B⁺ ⊗ A⁻`.
    pub fn dual(&self, f: &GMorphism<C::Mor>) -> Result<GMorphism<C::Mor>> {
        let (a, b) = (&f.src, &f.dst);
        let pre = self.base.symmetry(&b.neg, &a.pos)?;
        let post = self.base.symmetry(&a.neg, &b.pos)?;
        let core = compose_all(&self.base, &[&pre, &f.core, &post])?;
        GMorphism::new(b.dual(), a.dual(), core)
    }

    /// `f ⊗ g : A ⊗ C → B ⊗ D`, regrouping `A⁺ C⁺ B⁻ D⁻` as `A⁺ B⁻ C⁺ D⁻`
    /// before and `A⁻ B⁺ C⁻ D⁺` as `A⁻ C⁻ B⁺ D⁺` after.
    pub fn tensor(&self, f: &GMorphism<C::Mor>, g: &GMorphism<C::Mor>) -> Result<GMorphism<C::Mor>> {
        let (a, b, c, d) = (&f.src, &f.dst, &g.src, &g.dst);
        let pre = self.block_perm(&[&a.pos, &c.pos, &b.neg, &d.neg], &[0, 2, 1, 3])?;
        let post = self.block_perm(&[&a.neg, &b.pos, &c.neg, &d.pos], &[0, 2, 1, 3])?;
        let core = compose_all(&self.base, &[&pre, &self.base.tensor(&f.core, &g.core)?, &post])?;
        GMorphism::new(a.tensor(c), b.tensor(d), core)
    }

    /// `η_A : I → A ⊗ A*`, core `sym : A⁻ ⊗ A⁺ → A⁺ ⊗ A⁻`.
    pub fn unit(&self, a: &GObject) -> Result<GMorphism<C::Mor>> {
        let core = self.base.symmetry(&a.neg, &a.pos)?;
        GMorphism::new(GObject::unit(), a.tensor(&a.dual()), core)
    }

    /// `ε_A : A* ⊗ A → I`, core `sym : A⁻ ⊗ A⁺ → A⁺ ⊗ A⁻`.
    pub fn counit(&self, a: &GObject) -> Result<GMorphism<C::Mor>> {
        let core = self.base.symmetry(&a.neg, &a.pos)?;
        GMorphism::new(a.dual().tensor(a), GObject::unit(), core)
    }

    /// The full embedding `f : X → Y` ↦ `(X, I) → (Y, I)` with core `f`.
    pub fn embed(&self, f: &C::Mor) -> Result<GMorphism<C::Mor>> {
        GMorphism::new(
            GObject::new(f.dom().clone(), ObjectExpr::unit()),
            GObject::new(f.cod().clone(), ObjectExpr::unit()),
            f.clone(),
        )
    }

    /// Inherited equality: same endpoints, base-equal cores.
    pub fn equal(&self, f: &GMorphism<C::Mor>, g: &GMorphism<C::Mor>) -> bool {
        f.src == g.src && f.dst == g.dst && self.base.equal(&f.core, &g.core)
    }

    pub fn sample(&self, src: &GObject, dst: &GObject, rng: &mut SampleRng) -> GMorphism<C::Mor> {
        let core = self
            .base
            .sample(&src.pos.tensor(&dst.neg), &src.neg.tensor(&dst.pos), rng);
        GMorphism {
            src: src.clone(),
            dst: dst.clone(),
            core,
        }
    }

    pub fn describe(&self, f: &GMorphism<C::Mor>) -> String {
        format!("{} -> {}: {}", f.src, f.dst, self.base.describe(&f.core))
    }
}

/// Laws of `G(C)` checked by [`check_g_law`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GLaw {
    Assoc,
    LeftUnit,
    RightUnit,
    DualInvolution,
    DualFunctor,
    DualIdentity,
    HomIsDualTensor,
    TensorIdentity,
    TensorInterchange,
    SnakeLeft,
    SnakeRight,
    EmbedFunctor,
    EmbedFaithful,
}

impl GLaw {
    pub const ALL: [GLaw; 13] = [
        GLaw::Assoc,
        GLaw::LeftUnit,
        GLaw::RightUnit,
        GLaw::DualInvolution,
        GLaw::DualFunctor,
        GLaw::DualIdentity,
        GLaw::HomIsDualTensor,
        GLaw::TensorIdentity,
        GLaw::TensorInterchange,
        GLaw::SnakeLeft,
        GLaw::SnakeRight,
        GLaw::EmbedFunctor,
        GLaw::EmbedFaithful,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GLaw::Assoc => "g-assoc",
            GLaw::LeftUnit => "g-left-unit",
            GLaw::RightUnit => "g-right-unit",
            GLaw::DualInvolution => "g-dual-involution",
            GLaw::DualFunctor => "g-dual-functor",
            GLaw::DualIdentity => "g-dual-identity",
            GLaw::HomIsDualTensor => "g-hom-dual-tensor",
            GLaw::TensorIdentity => "g-tensor-identity",
            GLaw::TensorInterchange => "g-tensor-interchange",
            GLaw::SnakeLeft => "g-snake-left",
            GLaw::SnakeRight => "g-snake-right",
            GLaw::EmbedFunctor => "g-embed-functor",
            GLaw::EmbedFaithful => "g-embed-faithful",
        }
    }
}

impl fmt::Display for GLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Smaller than the trace-axiom limits: a G-composite traces over four
/// sampled objects at once.
const G_LIMITS: SampleLimits = SampleLimits {
    max_wires: 2,
    max_elems: 3,
};

/// Domain and codomain of the traced body when composing across `y`.
fn body(x: &GObject, y: &GObject, z: &GObject) -> [ObjectExpr; 2] {
    let u = y.neg.tensor(&y.pos);
    [
        ObjectExpr::tensor_all([&x.pos, &z.neg, &u]),
        ObjectExpr::tensor_all([&x.neg, &z.pos, &u]),
    ]
}

fn pairs(base: &[ObjectExpr]) -> Vec<GObject> {
    base.chunks(2)
        .map(|c| GObject::new(c[0].clone(), c[1].clone()))
        .collect()
}

/// Base objects whose sizes bound the work done by a `law` case on `o`.
fn law_composites(law: GLaw, o: &[GObject]) -> Vec<ObjectExpr> {
    match law {
        GLaw::Assoc => [[0, 1, 2], [1, 2, 3], [0, 2, 3], [0, 1, 3]]
            .iter()
            .flat_map(|&[i, j, k]| body(&o[i], &o[j], &o[k]))
            .collect(),
        GLaw::LeftUnit => body(&o[0], &o[0], &o[1]).to_vec(),
        GLaw::RightUnit => body(&o[0], &o[1], &o[1]).to_vec(),
        GLaw::DualFunctor => body(&o[0], &o[1], &o[2]).to_vec(),
        GLaw::DualInvolution | GLaw::DualIdentity | GLaw::HomIsDualTensor => {
            vec![o[0].pos.tensor(&o[1].neg), o[0].neg.tensor(&o[1].pos)]
        }
        GLaw::TensorIdentity => vec![o[0].tensor(&o[1]).pos.tensor(&o[0].tensor(&o[1]).neg)],
        GLaw::TensorInterchange => {
            let (ad, be, cf) = (o[0].tensor(&o[3]), o[1].tensor(&o[4]), o[2].tensor(&o[5]));
            body(&ad, &be, &cf).to_vec()
        }
        GLaw::SnakeLeft | GLaw::SnakeRight => {
            let a = &o[0];
            let three = a.tensor(&a.dual()).tensor(a);
            body(a, &three, a).to_vec()
        }
        // embedded objects carry everything on the positive side
        GLaw::EmbedFunctor | GLaw::EmbedFaithful => vec![ObjectExpr::tensor_all(o.iter().map(|g| &g.pos))],
    }
}

fn law_arity(law: GLaw) -> usize {
    match law {
        GLaw::Assoc => 4,
        GLaw::LeftUnit | GLaw::RightUnit | GLaw::TensorIdentity => 2,
        GLaw::DualInvolution | GLaw::DualIdentity | GLaw::HomIsDualTensor => 2,
        GLaw::DualFunctor | GLaw::EmbedFunctor | GLaw::EmbedFaithful => 3,
        GLaw::TensorInterchange => 6,
        GLaw::SnakeLeft | GLaw::SnakeRight => 1,
    }
}

/// A G-level verdict phrased as a base [`Case`] on the cores.
fn g_case<M: Clone>(inputs: Vec<&GMorphism<M>>, lhs: GMorphism<M>, rhs: GMorphism<M>, ok: bool) -> Case<M> {
    Case {
        inputs: inputs.into_iter().map(|m| m.core.clone()).collect(),
        lhs: lhs.core,
        rhs: rhs.core,
        verdict: Some(ok),
    }
}

impl<C: TracedCategory> Int<C> {
    fn law_case(&self, law: GLaw, rng: &mut SampleRng) -> std::result::Result<Result<Case<C::Mor>>, String> {
        let b = &self.base;
        let skip = || format!("{} cannot fit objects for {law} in its sampling budget", b.name());
        let embed_only = matches!(law, GLaw::EmbedFunctor | GLaw::EmbedFaithful);
        let base_objs = sample_objects(b, rng, 2 * law_arity(law), G_LIMITS, |o| {
            let mut g = pairs(o);
            if embed_only {
                g.iter_mut().for_each(|x| x.neg = ObjectExpr::unit());
            }
            law_composites(law, &g)
        })
        .ok_or_else(skip)?;
        let mut o = pairs(&base_objs);
        if embed_only {
            o.iter_mut().for_each(|x| x.neg = ObjectExpr::unit());
        }
        let eq = |p: &GMorphism<C::Mor>, q: &GMorphism<C::Mor>| self.equal(p, q);
        Ok((|| -> Result<Case<C::Mor>> {
            Ok(match law {
                GLaw::Assoc => {
                    let f = self.sample(&o[0], &o[1], rng);
                    let g = self.sample(&o[1], &o[2], rng);
                    let h = self.sample(&o[2], &o[3], rng);
                    let lhs = self.compose(&self.compose(&f, &g)?, &h)?;
                    let rhs = self.compose(&f, &self.compose(&g, &h)?)?;
                    let ok = eq(&lhs, &rhs);
                    g_case(vec![&f, &g, &h], lhs, rhs, ok)
                }
                GLaw::LeftUnit | GLaw::RightUnit => {
                    let f = self.sample(&o[0], &o[1], rng);
                    let lhs = if law == GLaw::LeftUnit {
                        self.compose(&self.identity(&o[0])?, &f)?
                    } else {
                        self.compose(&f, &self.identity(&o[1])?)?
                    };
                    let ok = eq(&lhs, &f);
                    g_case(vec![&f], lhs, f.clone(), ok)
                }
                GLaw::DualInvolution => {
                    let f = self.sample(&o[0], &o[1], rng);
                    let lhs = self.dual(&self.dual(&f)?)?;
                    let ok = o[0].dual().dual() == o[0] && eq(&lhs, &f);
                    g_case(vec![&f], lhs, f.clone(), ok)
                }
                GLaw::DualFunctor => {
                    let f = self.sample(&o[0], &o[1], rng);
                    let g = self.sample(&o[1], &o[2], rng);
                    let lhs = self.dual(&self.compose(&f, &g)?)?;
                    let rhs = self.compose(&self.dual(&g)?, &self.dual(&f)?)?;
                    let ok = eq(&lhs, &rhs);
                    g_case(vec![&f, &g], lhs, rhs, ok)
                }
                GLaw::DualIdentity => {
                    let lhs = self.dual(&self.identity(&o[0])?)?;
                    let rhs = self.identity(&o[0].dual())?;
                    let ok = eq(&lhs, &rhs);
                    g_case(vec![], lhs, rhs, ok)
                }
                GLaw::HomIsDualTensor => {
                    let (a, c) = (&o[0], &o[1]);
                    let ok = a.hom(c) == a.dual().tensor(c)
                        && a.hom(c) == GObject::new(a.neg.tensor(&c.pos), a.pos.tensor(&c.neg));
                    let id = self.identity(&a.hom(c))?;
                    g_case(vec![], id.clone(), id, ok)
                }
                GLaw::TensorIdentity => {
                    let lhs = self.tensor(&self.identity(&o[0])?, &self.identity(&o[1])?)?;
                    let rhs = self.identity(&o[0].tensor(&o[1]))?;
                    let ok = eq(&lhs, &rhs);
                    g_case(vec![], lhs, rhs, ok)
                }
                GLaw::TensorInterchange => {
                    let f1 = self.sample(&o[0], &o[1], rng);
                    let f2 = self.sample(&o[1], &o[2], rng);
                    let g1 = self.sample(&o[3], &o[4], rng);
                    let g2 = self.sample(&o[4], &o[5], rng);
                    let lhs = self.compose(&self.tensor(&f1, &g1)?, &self.tensor(&f2, &g2)?)?;
                    let rhs = self.tensor(&self.compose(&f1, &f2)?, &self.compose(&g1, &g2)?)?;
                    let ok = eq(&lhs, &rhs);
                    g_case(vec![&f1, &f2, &g1, &g2], lhs, rhs, ok)
                }
                GLaw::SnakeLeft => {
                    // (unit ⊗ id_A) ; (id_A ⊗ counit) = id_A
                    let a = &o[0];
                    let id = self.identity(a)?;
                    let lhs = self.compose(
                        &self.tensor(&self.unit(a)?, &id)?,
                        &self.tensor(&id, &self.counit(a)?)?,
                    )?;
                    let ok = eq(&lhs, &id);
                    g_case(vec![], lhs, id, ok)
                }
                GLaw::SnakeRight => {
                    // (id_A* ⊗ unit) ; (counit ⊗ id_A*) = id_A*
                    let a = &o[0];
                    let id = self.identity(&a.dual())?;
                    let lhs = self.compose(
                        &self.tensor(&id, &self.unit(a)?)?,
                        &self.tensor(&self.counit(a)?, &id)?,
                    )?;
                    let ok = eq(&lhs, &id);
                    g_case(vec![], lhs, id, ok)
                }
                GLaw::EmbedFunctor => {
                    let (x, y, z) = (&o[0].pos, &o[1].pos, &o[2].pos);
                    let p = b.sample(x, y, rng);
                    let q = b.sample(y, z, rng);
                    let (ep, eq_) = (self.embed(&p)?, self.embed(&q)?);
                    let lhs = self.compose(&ep, &eq_)?;
                    let rhs = self.embed(&b.compose(&p, &q)?)?;
                    let ident = self.embed(&b.identity(x)?)?;
                    let tensored = self.tensor(&ep, &eq_)?;
                    let ok = eq(&lhs, &rhs)
                        && eq(&ident, &self.identity(&o[0])?)
                        && eq(&tensored, &self.embed(&b.tensor(&p, &q)?)?);
                    g_case(vec![&ep, &eq_], lhs, rhs, ok)
                }
                GLaw::EmbedFaithful => {
                    let (x, y) = (&o[0].pos, &o[1].pos);
                    let p = b.sample(x, y, rng);
                    let q = b.sample(x, y, rng);
                    let (ep, eq_) = (self.embed(&p)?, self.embed(&q)?);
                    let ok = b.equal(&p, &q) == eq(&ep, &eq_);
                    g_case(vec![], ep, eq_, ok)
                }
            })
        })())
    }
}

/// Checks one law of `G(C)` on `samples` random instances. Objects are
/// pairs of base objects with up to 2 wires of up to 3 elements each, shrunk
/// to the base instance's sampling budget.
pub fn check_g_law<C: TracedCategory>(int: &Int<C>, law: GLaw, samples: usize, seed: u64) -> AxiomReport {
    let tag = 200 + GLaw::ALL.iter().position(|l| *l == law).unwrap() as u64;
    run_check(&int.base, law.as_str(), samples, seed, tag, |rng| {
        int.law_case(law, rng)
    })
}

pub fn check_all_g_laws<C: TracedCategory>(int: &Int<C>, samples: usize, seed: u64) -> Vec<AxiomReport> {
    GLaw::ALL
        .into_iter()
        .map(|l| check_g_law(int, l, samples, seed))
        .collect()
}

/// Girard's execution formula for `f ; g` over partial injections, by
/// walking each token directly through the two cores: a token entering at
/// `A⁺` or `C⁻` bounces between `f` and `g` across the `B` wires until it
/// leaves at `A⁻` or `C⁺`. A revisited position never exits.
///
/// Independent of [`Int::compose`]: no permutations and no trace.
pub fn execution_formula(f: &GMorphism<PInjTable>, g: &GMorphism<PInjTable>) -> Result<PInjTable> {
    if f.dst != g.src {
        return Err(Error::Shape(format!(
            "cannot compose {} -> {} with {} -> {}",
            f.src, f.dst, g.src, g.dst
        )));
    }
    let (a, b, c) = (&f.src, &f.dst, &g.dst);
    let (ap, am, bp, bm) = (
        a.pos.union_size(),
        a.neg.union_size(),
        b.pos.union_size(),
        b.neg.union_size(),
    );
    let (fc, gc) = (f.core.as_pfn(), g.core.as_pfn());
    let walk = |x: usize| -> Option<usize> {
        // (in_g, index into that core's domain)
        let mut at = if x < ap { (false, x) } else { (true, bp + x - ap) };
        let mut seen = std::collections::HashSet::new();
        while seen.insert(at) {
            at = match at {
                (false, i) => {
                    let y = fc.apply(i)?;
                    if y < am {
                        return Some(y);
                    }
                    (true, y - am)
                }
                (true, i) => {
                    let y = gc.apply(i)?;
                    if y >= bm {
                        return Some(am + y - bm);
                    }
                    (false, ap + y)
                }
            };
        }
        None
    };
    let dom = a.pos.tensor(&c.neg);
    let table = (0..dom.union_size()).map(walk).collect();
    pinj_validate(PfnTable::new(dom, a.neg.tensor(&c.pos), table)?)
}

/// Compares [`Int::compose`] over `PInj` with [`execution_formula`] on
/// `samples` random composable pairs.
pub fn check_execution_formula(samples: usize, seed: u64) -> AxiomReport {
    let int = Int::new(PInj);
    run_check(&PInj, "g-execution-formula", samples, seed, 300, |rng| {
        let base = sample_objects(&PInj, rng, 6, G_LIMITS, |o| {
            let g = pairs(o);
            body(&g[0], &g[1], &g[2]).to_vec()
        })
        .ok_or("pinj cannot fit objects in its sampling budget")?;
        let o = pairs(&base);
        let f = int.sample(&o[0], &o[1], rng);
        let g = int.sample(&o[1], &o[2], rng);
        Ok((|| {
            Ok(Case {
                lhs: int.compose(&f, &g)?.core,
                rhs: execution_formula(&f, &g)?,
                inputs: vec![f.core, g.core],
                verdict: None,
            })
        })())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finfun::{Pfn, PfnTable};
    use crate::object::Wire;
    use crate::stoch::Stoch;
    use crate::transducer::{bisim_equiv, Resumptions, Transducer};

    fn w(name: &str, labels: &[&str]) -> ObjectExpr {
        Wire::set(name, labels.iter().copied()).unwrap().into()
    }

    #[test]
    fn composition_permutations_on_single_wires() {
        let blocks = [
            &w("A", &["a"]),
            &w("C", &["c"]),
            &w("Bm", &["m"]),
            &w("Bp", &["p"]),
        ];
        // α: A⁺ C⁻ B⁻ B⁺ → A⁺ B⁻ B⁺ C⁻
        assert_eq!(block_permutation(&blocks, &[0, 2, 3, 1]), vec![0, 2, 3, 1]);
        // γ: A⁻ B⁺ B⁻ C⁺ → A⁻ C⁺ B⁻ B⁺
        assert_eq!(block_permutation(&blocks, &[0, 3, 2, 1]), vec![0, 3, 2, 1]);
        let alpha = Pfn
            .permutation(&ObjectExpr::tensor_all(blocks), &[0, 2, 3, 1])
            .unwrap();
        // element c (index 1) lands in the last slot
        assert_eq!(alpha.apply(1), Some(3));
        assert_eq!(alpha.apply(2), Some(1));
    }

    #[test]
    fn identity_laws_over_pfn() {
        let g = Int::new(Pfn);
        let a = GObject::new(w("P", &["p", "q"]), w("N", &["n"]));
        let b = GObject::new(w("Q", &["x"]), w("M", &["y", "z"]));
        let f = GMorphism::new(
            a.clone(),
            b.clone(),
            PfnTable::from_pairs(
                a.pos.tensor(&b.neg),
                a.neg.tensor(&b.pos),
                [(0, 1), (2, 0), (3, 1)],
            )
            .unwrap(),
        )
        .unwrap();
        let ida = g.identity(&a).unwrap();
        let idb = g.identity(&b).unwrap();
        assert!(g.equal(&g.compose(&ida, &f).unwrap(), &f));
        assert!(g.equal(&g.compose(&f, &idb).unwrap(), &f));
        assert!(g.equal(&g.compose(&ida, &ida).unwrap(), &ida));
    }

    #[test]
    fn compose_rejects_mismatch() {
        let g = Int::new(Pfn);
        let a = GObject::new(w("P", &["p"]), ObjectExpr::unit());
        let b = GObject::new(w("Q", &["q"]), ObjectExpr::unit());
        let ida = g.identity(&a).unwrap();
        let idb = g.identity(&b).unwrap();
        assert!(matches!(g.compose(&ida, &idb), Err(Error::Shape(_))));
    }

    #[test]
    fn embedding_preserves_composition() {
        let g = Int::new(Pfn);
        let (x, y, z) = (w("X", &["a", "b"]), w("Y", &["c"]), w("Z", &["d", "e"]));
        let p = PfnTable::from_pairs(x.clone(), y.clone(), [(0, 0)]).unwrap();
        let q = PfnTable::from_pairs(y, z, [(0, 1)]).unwrap();
        let lhs = g.compose(&g.embed(&p).unwrap(), &g.embed(&q).unwrap()).unwrap();
        let rhs = g.embed(&Pfn.compose(&p, &q).unwrap()).unwrap();
        assert!(g.equal(&lhs, &rhs));
        let idx = g.identity(&GObject::new(x.clone(), ObjectExpr::unit())).unwrap();
        assert!(g.equal(&g.embed(&Pfn.identity(&x).unwrap()).unwrap(), &idx));
    }

    #[test]
    fn objects() {
        let a = GObject::new(w("P", &["p"]), w("N", &["n"]));
        let b = GObject::new(w("Q", &["q"]), w("M", &["m"]));
        assert_eq!(a.dual().dual(), a);
        assert_eq!(a.hom(&b), a.dual().tensor(&b));
        assert_eq!(
            a.hom(&b),
            GObject::new(a.neg.tensor(&b.pos), a.pos.tensor(&b.neg))
        );
        assert_eq!(GObject::unit().tensor(&a), a);
        assert_eq!(a.tensor(&GObject::unit()), a);
    }

    #[test]
    fn dual_of_identity() {
        let g = Int::new(Pfn);
        let a = GObject::new(w("P", &["p", "q"]), w("N", &["n"]));
        let lhs = g.dual(&g.identity(&a).unwrap()).unwrap();
        assert!(g.equal(&lhs, &g.identity(&a.dual()).unwrap()));
    }

    #[test]
    fn stoch_identity_is_permutation_matrix() {
        let g = Int::new(Stoch::default());
        let a = GObject::new(w("P", &["p", "q"]), w("N", &["n"]));
        let id = g.identity(&a).unwrap();
        let m = id.core();
        for i in 0..m.nrows() {
            let row = m.row(i);
            assert_eq!(row.iter().filter(|&&v| v == 1.0).count(), 1);
            assert_eq!(row.iter().filter(|&&v| v == 0.0).count(), row.len() - 1);
        }
    }

    #[test]
    fn transducer_identity_is_copycat() {
        let g = Int::new(Resumptions::default());
        let a = GObject::new(w("P", &["p"]), w("N", &["n"]));
        let id = g.identity(&a).unwrap();
        let core: &Transducer = id.core();
        assert_eq!(core.num_states(), 1);
        // Opponent's p (input 0) is echoed on the p wire of the output, and vice versa.
        assert_eq!(core.step(0, 0), Some((1, 0)));
        assert_eq!(core.step(0, 1), Some((0, 0)));
        let twice = g.compose(&id, &id).unwrap();
        assert!(bisim_equiv(twice.core(), core).unwrap().equivalent);
    }

    #[test]
    fn snake_over_pfn() {
        let g = Int::new(Pfn);
        let a = GObject::new(w("P", &["p", "q"]), w("N", &["n"]));
        let ida = g.identity(&a).unwrap();
        let lhs = g
            .compose(
                &g.tensor(&g.unit(&a).unwrap(), &ida).unwrap(),
                &g.tensor(&ida, &g.counit(&a).unwrap()).unwrap(),
            )
            .unwrap();
        assert!(g.equal(&lhs, &ida));
    }

    #[test]
    fn bad_core_rejected() {
        let a = GObject::new(w("P", &["p"]), w("N", &["n"]));
        let core = Pfn.identity(&a.pos).unwrap();
        assert!(GMorphism::new(a.clone(), a, core).is_err());
    }

    #[test]
    fn execution_formula_agrees_with_composition() {
        let r = check_execution_formula(100, 5);
        assert!(r.passed() && r.skipped.is_none(), "{r}");
    }
}
