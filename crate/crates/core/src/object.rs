//! Objects as flat lists of atomic wires.
//!
//! Tensor is list concatenation and the empty list is the unit, so the
//! monoidal structure is strict and associators never appear. Two readings
//! of a wire list are used by the instances:
//!
//! * **additive** (disjoint union): an element is a pair `(wire, label)`,
//!   flattened to `offset(wire) + label_index`. Used by Pfn, PInj, Rel, Stoch
//!   and transducers.
//! * **multiplicative** (cartesian product): an element is a tuple with one
//!   label per wire, flattened in mixed radix with wire 0 most significant.
//!   Used by the finite-poset instance.
//!
//! The additive flattening corresponds to binary `inl`/`inr` tags by reading
//! `A ⊗ B` as `inl` for wires of `A` and `inr` for wires of `B`; nested tags
//! collapse because concatenation is associative.

use std::fmt;

use crate::error::{Error, Result};

/// Characters allowed in wire names and element labels besides ASCII alphanumerics.
const LABEL_PUNCT: &[char] = &['_', '\'', '-', '+', '#', '!', '^', '~'];

pub fn valid_label(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || LABEL_PUNCT.contains(&c))
}

/// A finite pointed poset, stored as a dense order table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinPoset {
    labels: Vec<String>,
    leq: Vec<bool>,
    bottom: usize,
}

impl FinPoset {
    /// Builds a poset from generating pairs `(a, b)` meaning `a ≤ b`.
    /// Reflexive and transitive closure is taken; antisymmetry and the
    /// existence of a least element are checked.
    pub fn new(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::Validation(format!(
                    "order pair ({a}, {b}) out of range for {n} elements"
                )));
            }
            leq[a * n + b] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        Self::from_table(labels, leq)
    }

    /// Builds a poset from a full order table, validating every poset law.
    pub fn from_table(labels: Vec<String>, leq: Vec<bool>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Validation(
                "a pointed poset needs at least one element".into(),
            ));
        }
        if leq.len() != n * n {
            return Err(Error::Validation("order table has the wrong size".into()));
        }
        check_labels(&labels)?;
        for i in 0..n {
            if !leq[i * n + i] {
                return Err(Error::Validation(format!("order not reflexive at {}", labels[i])));
            }
            for j in 0..n {
                if i != j && leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::Validation(format!(
                        "order not antisymmetric: {} and {}",
                        labels[i], labels[j]
                    )));
                }
                if leq[i * n + j] {
                    for k in 0..n {
                        if leq[j * n + k] && !leq[i * n + k] {
                            return Err(Error::Validation(format!(
                                "order not transitive: {} ≤ {} ≤ {}",
                                labels[i], labels[j], labels[k]
                            )));
                        }
                    }
                }
            }
        }
        let bottom = (0..n)
            .find(|&b| (0..n).all(|j| leq[b * n + j]))
            .ok_or_else(|| Error::Validation("poset has no least element".into()))?;
        Ok(FinPoset { labels, leq, bottom })
    }

    /// The chain `0 < 1 < … < n-1` with the given labels.
    pub fn chain(labels: Vec<String>) -> Result<Self> {
        let pairs: Vec<_> = (1..labels.len()).map(|i| (i - 1, i)).collect();
        Self::new(labels, &pairs)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.labels.len() + b]
    }

    /// All pairs `(a, b)` with `a < b`, in index order.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

fn check_labels(labels: &[String]) -> Result<()> {
    for (i, l) in labels.iter().enumerate() {
        if !valid_label(l) {
            return Err(Error::Validation(format!("invalid element label {l:?}")));
        }
        if labels[..i].contains(l) {
            return Err(Error::Validation(format!("duplicate element label {l:?}")));
        }
    }
    Ok(())
}

/// The carrier a wire ranges over.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Carrier {
    Set(Vec<String>),
    Poset(FinPoset),
}

impl Carrier {
    pub fn labels(&self) -> &[String] {
        match self {
            Carrier::Set(l) => l,
            Carrier::Poset(p) => p.labels(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels().iter().position(|l| l == label)
    }

    pub fn as_poset(&self) -> Option<&FinPoset> {
        match self {
            Carrier::Poset(p) => Some(p),
            Carrier::Set(_) => None,
        }
    }
}

/// An atomic tensor factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Wire {
    name: String,
    carrier: Carrier,
}

impl Wire {
    pub fn new(name: impl Into<String>, carrier: Carrier) -> Result<Self> {
        let name = name.into();
        if !valid_label(&name) {
            return Err(Error::Validation(format!("invalid wire name {name:?}")));
        }
        if let Carrier::Set(labels) = &carrier {
            check_labels(labels)?;
        }
        Ok(Wire { name, carrier })
    }

    /// A set-carrier wire with the given element labels.
    pub fn set<S: Into<String>>(name: &str, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::new(name, Carrier::Set(labels.into_iter().map(Into::into).collect()))
    }

    pub fn poset(name: &str, poset: FinPoset) -> Result<Self> {
        Self::new(name, Carrier::Poset(poset))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }
}

/// A strictified tensor of atomic wires. The empty list is the unit `I`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ObjectExpr {
    wires: Vec<Wire>,
}

impl From<Wire> for ObjectExpr {
    fn from(w: Wire) -> Self {
        ObjectExpr { wires: vec![w] }
    }
}

impl FromIterator<Wire> for ObjectExpr {
    fn from_iter<T: IntoIterator<Item = Wire>>(iter: T) -> Self {
        ObjectExpr {
            wires: iter.into_iter().collect(),
        }
    }
}

impl ObjectExpr {
    pub fn unit() -> Self {
        ObjectExpr::default()
    }

    pub fn new(wires: Vec<Wire>) -> Self {
        ObjectExpr { wires }
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn is_unit(&self) -> bool {
        self.wires.is_empty()
    }

    pub fn num_wires(&self) -> usize {
        self.wires.len()
    }

    pub fn tensor(&self, other: &ObjectExpr) -> ObjectExpr {
        let mut wires = self.wires.clone();
        wires.extend(other.wires.iter().cloned());
        ObjectExpr { wires }
    }

    /// Tensor of a list of objects, in order.
    pub fn tensor_all<'a>(objs: impl IntoIterator<Item = &'a ObjectExpr>) -> ObjectExpr {
        objs.into_iter().flat_map(|o| o.wires.iter().cloned()).collect()
    }

    pub fn ends_with(&self, suffix: &ObjectExpr) -> bool {
        self.wires.ends_with(&suffix.wires)
    }

    /// Strips `suffix` from the end, returning the remaining prefix.
    pub fn strip_suffix(&self, suffix: &ObjectExpr) -> Option<ObjectExpr> {
        self.wires
            .strip_suffix(suffix.wires.as_slice())
            .map(|w| ObjectExpr { wires: w.to_vec() })
    }

    /// Wires reordered so that wire `i` of the result is wire `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<ObjectExpr> {
        check_permutation(perm, self.wires.len())?;
        Ok(ObjectExpr {
            wires: perm.iter().map(|&i| self.wires[i].clone()).collect(),
        })
    }

    // ---- additive reading ----

    /// Number of elements of the disjoint union of the wire carriers.
    pub fn union_size(&self) -> usize {
        self.wires.iter().map(Wire::len).sum()
    }

    /// Start offset of each wire in the flattened disjoint union.
    pub fn union_offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.wires
            .iter()
            .map(|w| {
                let o = acc;
                acc += w.len();
                o
            })
            .collect()
    }

    /// `(wire, label index)` for a flat disjoint-union index.
    pub fn union_locate(&self, mut idx: usize) -> (usize, usize) {
        for (w, wire) in self.wires.iter().enumerate() {
            if idx < wire.len() {
                return (w, idx);
            }
            idx -= wire.len();
        }
        panic!("element index out of range")
    }

    /// Canonical text for a disjoint-union element: the bare label when the
    /// object has a single wire, `wire.label` otherwise.
    pub fn union_label(&self, idx: usize) -> String {
        let (w, e) = self.union_locate(idx);
        let label = &self.wires[w].carrier.labels()[e];
        if self.wires.len() == 1 {
            label.clone()
        } else {
            format!("{w}.{label}")
        }
    }

    /// Parses an element reference: `wire.label`, or a bare label when it is
    /// unambiguous across wires.
    pub fn union_index(&self, text: &str) -> Result<usize> {
        let offsets = self.union_offsets();
        if let Some((w, label)) = text.split_once('.') {
            let w: usize = w
                .parse()
                .map_err(|_| Error::Validation(format!("bad element reference {text:?}")))?;
            let wire = self
                .wires
                .get(w)
                .ok_or_else(|| Error::Validation(format!("no wire {w} in element {text:?}")))?;
            let e = wire
                .carrier
                .index_of(label)
                .ok_or_else(|| Error::Validation(format!("no element {label:?} on wire {w}")))?;
            return Ok(offsets[w] + e);
        }
        let mut found = None;
        for (w, wire) in self.wires.iter().enumerate() {
            if let Some(e) = wire.carrier.index_of(text) {
                if found.is_some() {
                    return Err(Error::Validation(format!(
                        "element {text:?} is ambiguous; write it as wire.label"
                    )));
                }
                found = Some(offsets[w] + e);
            }
        }
        found.ok_or_else(|| Error::Validation(format!("unknown element {text:?}")))
    }

    /// For the wire permutation `perm`, where each flat element of `self` lands
    /// in `self.permuted(perm)`.
    pub fn union_permutation(&self, perm: &[usize]) -> Result<Vec<usize>> {
        let target = self.permuted(perm)?;
        let src_off = self.union_offsets();
        let dst_off = target.union_offsets();
        let mut map = vec![0; self.union_size()];
        for (j, &w) in perm.iter().enumerate() {
            for e in 0..self.wires[w].len() {
                map[src_off[w] + e] = dst_off[j] + e;
            }
        }
        Ok(map)
    }

    // ---- multiplicative reading ----

    /// Number of tuples in the cartesian product of the wire carriers.
    pub fn product_size(&self) -> usize {
        self.wires.iter().map(Wire::len).product()
    }

    /// Label indices of a flat product index (wire 0 most significant).
    pub fn product_decode(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.wires.len()];
        for (slot, w) in out.iter_mut().zip(&self.wires).rev() {
            *slot = idx % w.len();
            idx /= w.len();
        }
        out
    }

    pub fn product_encode(&self, tuple: &[usize]) -> usize {
        tuple
            .iter()
            .zip(&self.wires)
            .fold(0, |acc, (&e, w)| acc * w.len() + e)
    }

    /// Canonical text for a product element: `()` for the unit, the bare label
    /// for one wire, `(a,b,…)` otherwise.
    pub fn product_label(&self, idx: usize) -> String {
        let tuple = self.product_decode(idx);
        let labels: Vec<&str> = tuple
            .iter()
            .zip(&self.wires)
            .map(|(&e, w)| w.carrier.labels()[e].as_str())
            .collect();
        if labels.len() == 1 {
            labels[0].to_string()
        } else {
            format!("({})", labels.join(","))
        }
    }

    pub fn product_index(&self, text: &str) -> Result<usize> {
        let bad = || Error::Validation(format!("bad tuple reference {text:?}"));
        let parts: Vec<&str> = if self.wires.len() == 1 {
            vec![text]
        } else {
            let inner = text
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(bad)?;
            if inner.is_empty() {
                vec![]
            } else {
                inner.split(',').collect()
            }
        };
        if parts.len() != self.wires.len() {
            return Err(bad());
        }
        let tuple = parts
            .iter()
            .zip(&self.wires)
            .map(|(p, w)| w.carrier.index_of(p.trim()).ok_or_else(bad))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.product_encode(&tuple))
    }

    /// Componentwise order on product tuples. Every wire must carry a poset.
    pub fn product_leq(&self, a: usize, b: usize) -> bool {
        let (ta, tb) = (self.product_decode(a), self.product_decode(b));
        ta.iter()
            .zip(&tb)
            .zip(&self.wires)
            .all(|((&x, &y), w)| w.carrier.as_poset().map(|p| p.leq(x, y)).unwrap_or(x == y))
    }

    /// The least tuple of the product order.
    pub fn product_bottom(&self) -> usize {
        let tuple: Vec<usize> = self
            .wires
            .iter()
            .map(|w| w.carrier.as_poset().map(FinPoset::bottom).unwrap_or(0))
            .collect();
        self.product_encode(&tuple)
    }

    /// For the wire permutation `perm`, where each product tuple of `self`
    /// lands in `self.permuted(perm)`.
    pub fn product_permutation(&self, perm: &[usize]) -> Result<Vec<usize>> {
        let target = self.permuted(perm)?;
        Ok((0..self.product_size())
            .map(|i| {
                let t = self.product_decode(i);
                let moved: Vec<usize> = perm.iter().map(|&w| t[w]).collect();
                target.product_encode(&moved)
            })
            .collect())
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::Shape(format!(
            "permutation of length {} applied to {n} wires",
            perm.len()
        )));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::Shape(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Wire permutation that reorders consecutive blocks of wires.
/// `order[i]` names the source block placed at position `i`.
pub fn block_permutation(blocks: &[&ObjectExpr], order: &[usize]) -> Vec<usize> {
    let mut starts = Vec::with_capacity(blocks.len());
    let mut acc = 0;
    for b in blocks {
        starts.push(acc);
        acc += b.num_wires();
    }
    order
        .iter()
        .flat_map(|&b| starts[b]..starts[b] + blocks[b].num_wires())
        .collect()
}

impl fmt::Display for ObjectExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.wires.is_empty() {
            return write!(f, "I");
        }
        let names: Vec<&str> = self.wires.iter().map(Wire::name).collect();
        write!(f, "{}", names.join(" * "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obj() -> ObjectExpr {
        ObjectExpr::new(vec![
            Wire::set("X", ["a", "b"]).unwrap(),
            Wire::set("U", ["u"]).unwrap(),
            Wire::set("Y", ["a", "c", "d"]).unwrap(),
        ])
    }

    #[test]
    fn union_addressing() {
        let o = obj();
        assert_eq!(o.union_size(), 6);
        assert_eq!(o.union_offsets(), vec![0, 2, 3]);
        assert_eq!(o.union_label(3), "2.a");
        assert_eq!(o.union_index("2.a").unwrap(), 3);
        assert_eq!(o.union_index("u").unwrap(), 2);
        assert!(o.union_index("a").is_err());
        assert!(o.union_index("zz").is_err());
    }

    #[test]
    fn union_permutation_moves_blocks() {
        let o = obj();
        // result wires: Y, X, U
        let m = o.union_permutation(&[2, 0, 1]).unwrap();
        assert_eq!(m, vec![3, 4, 5, 0, 1, 2]);
    }

    #[test]
    fn product_roundtrip() {
        let o = obj();
        assert_eq!(o.product_size(), 6);
        for i in 0..6 {
            assert_eq!(o.product_encode(&o.product_decode(i)), i);
            assert_eq!(o.product_index(&o.product_label(i)).unwrap(), i);
        }
        assert_eq!(o.product_label(4), "(b,u,c)");
        assert_eq!(ObjectExpr::unit().product_size(), 1);
        assert_eq!(ObjectExpr::unit().product_label(0), "()");
        assert_eq!(ObjectExpr::unit().product_index("()").unwrap(), 0);
    }

    #[test]
    fn poset_closure_and_validation() {
        let labels = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let p = FinPoset::new(labels(&["bot", "m", "top"]), &[(0, 1), (1, 2)]).unwrap();
        assert!(p.leq(0, 2));
        assert_eq!(p.bottom(), 0);
        assert!(FinPoset::new(labels(&["a", "b"]), &[(0, 1), (1, 0)]).is_err());
        assert!(FinPoset::new(labels(&["a", "b"]), &[]).is_err());
    }

    #[test]
    fn block_permutation_indices() {
        let o = obj();
        let one = ObjectExpr::from(o.wires()[0].clone());
        let two = ObjectExpr::new(o.wires()[1..].to_vec());
        assert_eq!(block_permutation(&[&one, &two], &[1, 0]), vec![1, 2, 0]);
    }

    #[test]
    fn rejects_bad_labels() {
        assert!(Wire::set("X", ["a.b"]).is_err());
        assert!(Wire::set("", ["a"]).is_err());
        assert!(Wire::set("X", ["a", "a"]).is_err());
    }
}
