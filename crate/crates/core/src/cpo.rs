//! Finite pointed posets and monotone maps, with cartesian tensor and trace
//! by least fixpoints.
//!
//! On finite posets every monotone map is continuous and Kleene iteration
//! from the bottom reaches the least fixpoint in finitely many steps.

use rand::Rng;

use crate::category::{check_composable, trace_split, Morphism, SampleRng, TracedCategory};
use crate::error::{Error, Result};
use crate::object::{Carrier, FinPoset, ObjectExpr, Wire};

/// A total monotone map between product posets, stored as a table over
/// flat product indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonotoneMap {
    dom: ObjectExpr,
    cod: ObjectExpr,
    table: Vec<usize>,
}

impl Morphism for MonotoneMap {
    fn dom(&self) -> &ObjectExpr {
        &self.dom
    }
    fn cod(&self) -> &ObjectExpr {
        &self.cod
    }
}

fn require_posets(obj: &ObjectExpr) -> Result<()> {
    match obj.wires().iter().find(|w| w.carrier().as_poset().is_none()) {
        Some(w) => Err(Error::Validation(format!(
            "wire {} carries a plain set; this instance needs posets",
            w.name()
        ))),
        None => Ok(()),
    }
}

/// Dense componentwise order on the product carrier of `obj`.
pub fn product_order(obj: &ObjectExpr) -> Vec<bool> {
    let n = obj.product_size();
    let tuples: Vec<Vec<usize>> = (0..n).map(|i| obj.product_decode(i)).collect();
    let posets: Vec<&FinPoset> = obj
        .wires()
        .iter()
        .map(|w| w.carrier().as_poset().expect("poset wires"))
        .collect();
    let mut leq = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            leq[i * n + j] = tuples[i]
                .iter()
                .zip(&tuples[j])
                .zip(&posets)
                .all(|((&a, &b), p)| p.leq(a, b));
        }
    }
    leq
}

impl MonotoneMap {
    /// Validates totality, range and monotonicity.
    pub fn new(dom: ObjectExpr, cod: ObjectExpr, table: Vec<usize>) -> Result<Self> {
        require_posets(&dom)?;
        require_posets(&cod)?;
        let (n, m) = (dom.product_size(), cod.product_size());
        if table.len() != n {
            return Err(Error::Validation(format!(
                "table has {} entries but the domain has {n} elements",
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|&&y| y >= m) {
            return Err(Error::Validation(format!("image {bad} outside the codomain")));
        }
        let f = MonotoneMap { dom, cod, table };
        f.check_monotone()?;
        Ok(f)
    }

    pub fn check_monotone(&self) -> Result<()> {
        let n = self.dom.product_size();
        let m = self.cod.product_size();
        let dl = product_order(&self.dom);
        let cl = product_order(&self.cod);
        for x in 0..n {
            for y in 0..n {
                if dl[x * n + y] && !cl[self.table[x] * m + self.table[y]] {
                    return Err(Error::Validation(format!(
                        "not monotone: {} ≤ {} but {} ≰ {}",
                        self.dom.product_label(x),
                        self.dom.product_label(y),
                        self.cod.product_label(self.table[x]),
                        self.cod.product_label(self.table[y])
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    fn raw(dom: ObjectExpr, cod: ObjectExpr, table: Vec<usize>) -> Self {
        MonotoneMap { dom, cod, table }
    }
}

/// Least fixpoint of an endomap by Kleene iteration from the bottom.
pub fn lfp(f: &MonotoneMap) -> Result<usize> {
    if f.dom != f.cod {
        return Err(Error::Shape(format!(
            "least fixpoint needs an endomap, got {} -> {}",
            f.dom, f.cod
        )));
    }
    let mut x = f.dom.product_bottom();
    loop {
        let next = f.table[x];
        if next == x {
            return Ok(x);
        }
        x = next;
    }
}

pub fn cpo_compose(f: &MonotoneMap, g: &MonotoneMap) -> Result<MonotoneMap> {
    check_composable(f, g)?;
    let table = f.table.iter().map(|&y| g.table[y]).collect();
    Ok(MonotoneMap::raw(f.dom.clone(), g.cod.clone(), table))
}

/// `f × g` on product carriers.
pub fn cpo_tensor(f: &MonotoneMap, g: &MonotoneMap) -> MonotoneMap {
    let (gn, gm) = (g.dom.product_size(), g.cod.product_size());
    let table = (0..f.dom.product_size() * gn)
        .map(|i| f.table[i / gn] * gm + g.table[i % gn])
        .collect();
    MonotoneMap::raw(f.dom.tensor(&g.dom), f.cod.tensor(&g.cod), table)
}

/// Feedback over the suffix `u`: for each `d`, `a*` is the least fixpoint of
/// `a ↦ snd f(d, a)` and the result is `fst f(d, a*)`.
pub fn cpo_trace(f: &MonotoneMap, u: &ObjectExpr) -> Result<MonotoneMap> {
    let (d, e) = trace_split(f, u)?;
    let nu = u.product_size();
    let bottom = u.product_bottom();
    let table = (0..d.product_size())
        .map(|x| {
            let mut a = bottom;
            loop {
                let next = f.table[x * nu + a] % nu;
                if next == a {
                    break;
                }
                a = next;
            }
            f.table[x * nu + a] / nu
        })
        .collect();
    Ok(MonotoneMap::raw(d, e, table))
}

/// A random pointed poset: `e0` is bottom, the last element is top, and the
/// elements in between carry a random order.
pub fn sample_poset(rng: &mut SampleRng, n: usize) -> FinPoset {
    let labels: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let mut pairs = Vec::new();
    for i in 1..n {
        pairs.push((0, i));
        if i + 1 < n {
            pairs.push((i, n - 1));
        }
        for j in i + 1..n.saturating_sub(1) {
            if rng.gen_bool(0.4) {
                pairs.push((i, j));
            }
        }
    }
    FinPoset::new(labels, &pairs).expect("generated order is a pointed poset")
}

/// Samples a monotone map by assigning images along a linear extension of
/// the domain, each image chosen among the upper bounds of the images
/// already fixed below it.
pub fn sample_monotone(a: &ObjectExpr, b: &ObjectExpr, rng: &mut SampleRng) -> MonotoneMap {
    let (n, m) = (a.product_size(), b.product_size());
    let dl = product_order(a);
    let cl = product_order(b);
    let mut order: Vec<usize> = (0..n).collect();
    let down = |x: usize| (0..n).filter(|&y| dl[y * n + x]).count();
    order.sort_by_key(|&x| down(x));
    let mut table = vec![usize::MAX; n];
    for &x in &order {
        let below: Vec<usize> = (0..n)
            .filter(|&y| y != x && dl[y * n + x])
            .map(|y| table[y])
            .collect();
        let cands: Vec<usize> = (0..m).filter(|&c| below.iter().all(|&v| cl[v * m + c])).collect();
        if cands.is_empty() {
            // no upper bound: fall back to the constant bottom map
            let bot = b.product_bottom();
            return MonotoneMap::raw(a.clone(), b.clone(), vec![bot; n]);
        }
        let pick = if rng.gen_bool(0.5) {
            let minimal: Vec<usize> = cands
                .iter()
                .copied()
                .filter(|&c| !cands.iter().any(|&d| d != c && cl[d * m + c]))
                .collect();
            minimal[rng.gen_range(0..minimal.len())]
        } else {
            cands[rng.gen_range(0..cands.len())]
        };
        table[x] = pick;
    }
    MonotoneMap::raw(a.clone(), b.clone(), table)
}

/// Finite pointed posets with cartesian tensor and least-fixpoint trace.
#[derive(Debug, Clone, Copy)]
pub struct Cpo {
    pub budget: usize,
}

impl Default for Cpo {
    fn default() -> Self {
        Cpo { budget: 512 }
    }
}

impl TracedCategory for Cpo {
    type Mor = MonotoneMap;

    fn name(&self) -> &'static str {
        "cpo"
    }

    fn compose(&self, f: &MonotoneMap, g: &MonotoneMap) -> Result<MonotoneMap> {
        cpo_compose(f, g)
    }

    fn tensor(&self, f: &MonotoneMap, g: &MonotoneMap) -> Result<MonotoneMap> {
        Ok(cpo_tensor(f, g))
    }

    fn permutation(&self, a: &ObjectExpr, perm: &[usize]) -> Result<MonotoneMap> {
        require_posets(a)?;
        let table = a.product_permutation(perm)?;
        Ok(MonotoneMap::raw(a.clone(), a.permuted(perm)?, table))
    }

    fn trace(&self, f: &MonotoneMap, u: &ObjectExpr) -> Result<MonotoneMap> {
        cpo_trace(f, u)
    }

    fn equal(&self, f: &MonotoneMap, g: &MonotoneMap) -> bool {
        f == g
    }

    fn size(&self, a: &ObjectExpr) -> usize {
        a.product_size()
    }

    fn sample_budget(&self) -> usize {
        self.budget
    }

    fn sample_wire(&self, rng: &mut SampleRng, name: String, max_elems: usize) -> Wire {
        let n = rng.gen_range(1..=max_elems.max(1));
        Wire::new(name, Carrier::Poset(sample_poset(rng, n))).expect("valid wire")
    }

    fn sample(&self, a: &ObjectExpr, b: &ObjectExpr, rng: &mut SampleRng) -> MonotoneMap {
        sample_monotone(a, b, rng)
    }

    fn describe(&self, f: &MonotoneMap) -> String {
        let body: Vec<String> = f
            .table
            .iter()
            .enumerate()
            .map(|(x, &y)| format!("{}↦{}", f.dom.product_label(x), f.cod.product_label(y)))
            .collect();
        format!("{} -> {} {{{}}}", f.dom, f.cod, body.join(", "))
    }
}
