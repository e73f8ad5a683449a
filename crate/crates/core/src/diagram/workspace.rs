//! Workspaces: named wires and generator morphisms for one instance, read
//! from and written to JSON.
//!
//! ```json
//! {
//!   "instance": "pfn",
//!   "objects": { "X": ["a", "b"], "D": { "elements": ["bot", "top"], "leq": [["bot", "top"]] } },
//!   "generators": { "f": { "dom": ["X"], "cod": ["X"], "map": { "a": "b" } } }
//! }
//! ```
//!
//! An object in a payload is a list of wires, each either the name of a
//! workspace object or an inline `{"name", "elements", "leq"?}` wire.
//! Element references use the disjoint-union syntax (`label` or
//! `wire.label`), except for `cpo`, whose elements are tuples (`label` or
//! `(a,b)`).

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Value};

use crate::category::Morphism;
use crate::cpo::MonotoneMap;
use crate::error::{Error, Result};
use crate::finfun::{pinj_validate, PInjTable, PfnTable, RelTable};
use crate::object::{FinPoset, ObjectExpr, Wire};
use crate::stoch::SubstochMatrix;
use crate::transducer::Transducer;

use super::term::ObjRef;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InstanceKind {
    Pfn,
    PInj,
    Rel,
    Stoch,
    Cpo,
    Transducer,
}

impl InstanceKind {
    pub const ALL: [InstanceKind; 6] = [
        InstanceKind::Pfn,
        InstanceKind::PInj,
        InstanceKind::Rel,
        InstanceKind::Stoch,
        InstanceKind::Cpo,
        InstanceKind::Transducer,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InstanceKind::Pfn => "pfn",
            InstanceKind::PInj => "pinj",
            InstanceKind::Rel => "rel",
            InstanceKind::Stoch => "stoch",
            InstanceKind::Cpo => "cpo",
            InstanceKind::Transducer => "transducer",
        }
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        InstanceKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                Error::Validation(format!(
                    "unknown instance {s:?}; expected one of pfn, pinj, rel, stoch, cpo, transducer"
                ))
            })
    }
}

/// A morphism of any instance.
#[derive(Debug, Clone, PartialEq)]
pub enum Morph {
    Pfn(PfnTable),
    PInj(PInjTable),
    Rel(RelTable),
    Stoch(SubstochMatrix),
    Cpo(MonotoneMap),
    Transducer(Transducer),
}

/// Conversion between an instance's morphism type and [`Morph`].
pub trait IntoMorph: Sized {
    fn into_morph(self) -> Morph;
    fn from_morph(m: &Morph) -> Option<&Self>;
}

macro_rules! into_morph {
    ($ty:ty, $variant:ident) => {
        impl IntoMorph for $ty {
            fn into_morph(self) -> Morph {
                Morph::$variant(self)
            }
            fn from_morph(m: &Morph) -> Option<&Self> {
                match m {
                    Morph::$variant(x) => Some(x),
                    _ => None,
                }
            }
        }
    };
}

into_morph!(PfnTable, Pfn);
into_morph!(PInjTable, PInj);
into_morph!(RelTable, Rel);
into_morph!(SubstochMatrix, Stoch);
into_morph!(MonotoneMap, Cpo);
into_morph!(Transducer, Transducer);

impl Morph {
    pub fn kind(&self) -> InstanceKind {
        match self {
            Morph::Pfn(_) => InstanceKind::Pfn,
            Morph::PInj(_) => InstanceKind::PInj,
            Morph::Rel(_) => InstanceKind::Rel,
            Morph::Stoch(_) => InstanceKind::Stoch,
            Morph::Cpo(_) => InstanceKind::Cpo,
            Morph::Transducer(_) => InstanceKind::Transducer,
        }
    }

    pub fn dom(&self) -> &ObjectExpr {
        match self {
            Morph::Pfn(m) => m.dom(),
            Morph::PInj(m) => m.dom(),
            Morph::Rel(m) => m.dom(),
            Morph::Stoch(m) => m.dom(),
            Morph::Cpo(m) => m.dom(),
            Morph::Transducer(m) => m.dom(),
        }
    }

    pub fn cod(&self) -> &ObjectExpr {
        match self {
            Morph::Pfn(m) => m.cod(),
            Morph::PInj(m) => m.cod(),
            Morph::Rel(m) => m.cod(),
            Morph::Stoch(m) => m.cod(),
            Morph::Cpo(m) => m.cod(),
            Morph::Transducer(m) => m.cod(),
        }
    }

    /// The underlying function table of a `pfn` or `pinj` morphism.
    pub fn as_pfn(&self) -> Option<&PfnTable> {
        match self {
            Morph::Pfn(t) => Some(t),
            Morph::PInj(t) => Some(t.as_pfn()),
            _ => None,
        }
    }

    /// Decodes a generator payload for `kind`, resolving wire names in `objects`.
    pub fn from_json(kind: InstanceKind, v: &Value, objects: &BTreeMap<String, Wire>) -> Result<Morph> {
        let obj = |o: &ObjJson| decode_object(o, kind, objects);
        Ok(match kind {
            InstanceKind::Pfn | InstanceKind::PInj => {
                let p: MapJson = serde_json::from_value(v.clone())?;
                let (dom, cod) = (obj(&p.dom)?, obj(&p.cod)?);
                let pairs = p
                    .map
                    .iter()
                    .map(|(x, y)| Ok((dom.union_index(x)?, cod.union_index(y)?)))
                    .collect::<Result<Vec<_>>>()?;
                let t = PfnTable::from_pairs(dom, cod, pairs)?;
                if kind == InstanceKind::Pfn {
                    Morph::Pfn(t)
                } else {
                    Morph::PInj(pinj_validate(t)?)
                }
            }
            InstanceKind::Rel => {
                let p: PairsJson = serde_json::from_value(v.clone())?;
                let (dom, cod) = (obj(&p.dom)?, obj(&p.cod)?);
                let pairs = p
                    .pairs
                    .iter()
                    .map(|(x, y)| Ok((dom.union_index(x)?, cod.union_index(y)?)))
                    .collect::<Result<Vec<_>>>()?;
                Morph::Rel(RelTable::from_pairs(dom, cod, pairs)?)
            }
            InstanceKind::Stoch => {
                let p: MatrixJson = serde_json::from_value(v.clone())?;
                Morph::Stoch(SubstochMatrix::from_rows(obj(&p.dom)?, obj(&p.cod)?, &p.matrix)?)
            }
            InstanceKind::Cpo => {
                let p: MapJson = serde_json::from_value(v.clone())?;
                let (dom, cod) = (obj(&p.dom)?, obj(&p.cod)?);
                let mut table = vec![None; dom.product_size()];
                for (x, y) in &p.map {
                    table[dom.product_index(x)?] = Some(cod.product_index(y)?);
                }
                let table = table
                    .into_iter()
                    .enumerate()
                    .map(|(i, y)| {
                        y.ok_or_else(|| {
                            Error::Validation(format!(
                                "monotone map is not total: no image for {}",
                                dom.product_label(i)
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Morph::Cpo(MonotoneMap::new(dom, cod, table)?)
            }
            InstanceKind::Transducer => {
                let p: TransducerJson = serde_json::from_value(v.clone())?;
                let (input, output) = (obj(&p.input)?, obj(&p.output)?);
                let state = |s: &str| {
                    p.states
                        .iter()
                        .position(|q| q == s)
                        .ok_or_else(|| Error::Validation(format!("unknown state {s:?}")))
                };
                let transitions = p
                    .delta
                    .iter()
                    .map(|(q, x, y, q2)| {
                        Ok((
                            state(q)?,
                            input.union_index(x)?,
                            output.union_index(y)?,
                            state(q2)?,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Morph::Transducer(Transducer::from_transitions(
                    input,
                    output,
                    p.states.clone(),
                    state(&p.initial)?,
                    transitions,
                )?)
            }
        })
    }

    /// Self-contained JSON in the payload schema, with inline wires.
    pub fn to_json(&self) -> Value {
        let (dom, cod) = (encode_object(self.dom()), encode_object(self.cod()));
        match self {
            Morph::Pfn(_) | Morph::PInj(_) => {
                let t = self.as_pfn().expect("function table");
                let map: serde_json::Map<String, Value> = t
                    .pairs()
                    .map(|(x, y)| (t.dom().union_label(x), Value::String(t.cod().union_label(y))))
                    .collect();
                json!({ "dom": dom, "cod": cod, "map": map })
            }
            Morph::Rel(r) => {
                let pairs: Vec<[String; 2]> = r
                    .pairs()
                    .map(|(x, y)| [r.dom().union_label(x), r.cod().union_label(y)])
                    .collect();
                json!({ "dom": dom, "cod": cod, "pairs": pairs })
            }
            Morph::Stoch(m) => {
                let rows: Vec<&[f64]> = (0..m.nrows()).map(|i| m.row(i)).collect();
                json!({ "dom": dom, "cod": cod, "matrix": rows })
            }
            Morph::Cpo(m) => {
                let map: serde_json::Map<String, Value> = m
                    .table()
                    .iter()
                    .enumerate()
                    .map(|(x, &y)| (m.dom().product_label(x), Value::String(m.cod().product_label(y))))
                    .collect();
                json!({ "dom": dom, "cod": cod, "map": map })
            }
            Morph::Transducer(t) => {
                let delta: Vec<[String; 4]> = t
                    .transitions()
                    .map(|(q, x, y, q2)| {
                        [
                            t.states()[q].clone(),
                            t.dom().union_label(x),
                            t.cod().union_label(y),
                            t.states()[q2].clone(),
                        ]
                    })
                    .collect();
                json!({
                    "states": t.states(),
                    "initial": t.states()[t.initial()],
                    "input": dom,
                    "output": cod,
                    "delta": delta,
                })
            }
        }
    }

    /// Canonical text rendering: a header line `kind: dom -> cod`, then one
    /// line per entry in domain order.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {} -> {}\n", self.kind(), self.dom(), self.cod());
        match self {
            Morph::Pfn(_) | Morph::PInj(_) => {
                let t = self.as_pfn().expect("function table");
                for (x, y) in t.pairs() {
                    out += &format!("{} -> {}\n", t.dom().union_label(x), t.cod().union_label(y));
                }
            }
            Morph::Rel(r) => {
                for (x, y) in r.pairs() {
                    out += &format!("{} -> {}\n", r.dom().union_label(x), r.cod().union_label(y));
                }
            }
            Morph::Stoch(m) => {
                for i in 0..m.nrows() {
                    out += &format!("{}: {}\n", m.dom().union_label(i), stoch_row_text(m, i));
                }
            }
            Morph::Cpo(m) => {
                for (x, &y) in m.table().iter().enumerate() {
                    out += &format!("{} -> {}\n", m.dom().product_label(x), m.cod().product_label(y));
                }
            }
            Morph::Transducer(t) => {
                out += &format!("states: {}\n", t.states().join(" "));
                out += &format!("initial: {}\n", t.states()[t.initial()]);
                for (q, x, y, q2) in t.transitions() {
                    out += &format!(
                        "{} {}/{} {}\n",
                        t.states()[q],
                        t.dom().union_label(x),
                        t.cod().union_label(y),
                        t.states()[q2]
                    );
                }
            }
        }
        out
    }
}

/// Nonzero entries of row `i` as `label=weight`, or `0` for an empty row.
pub(crate) fn stoch_row_text(m: &SubstochMatrix, i: usize) -> String {
    let entries: Vec<String> = m
        .row(i)
        .iter()
        .enumerate()
        .filter(|(_, &w)| w != 0.0)
        .map(|(j, &w)| format!("{}={}", m.cod().union_label(j), short_number(w)))
        .collect();
    if entries.is_empty() {
        "0".to_string()
    } else {
        entries.join(" ")
    }
}

/// Rounds to 12 decimals and drops trailing zeros, so text output does not
/// depend on last-bit differences between solvers.
pub fn short_number(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Decimal text with 17 significant digits; scientific notation outside
/// `1e-6 ..= 1e20`.
pub fn decimal17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 {
            "0.0".to_string()
        } else {
            x.to_string()
        };
    }
    let sci = format!("{:.16e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-6..=20).contains(&exp) {
        return format!("{:.16e}", x);
    }
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let sign = if x < 0.0 { "-" } else { "" };
    if exp < 0 {
        return format!("{sign}0.{}{digits}", "0".repeat((-exp - 1) as usize));
    }
    let split = exp as usize + 1;
    if split >= digits.len() {
        format!("{sign}{digits}{}.0", "0".repeat(split - digits.len()))
    } else {
        format!("{sign}{}.{}", &digits[..split], &digits[split..])
    }
}

/// Pretty JSON whose floats carry 17 significant digits.
struct Decimal17Formatter<'a>(PrettyFormatter<'a>);

impl Formatter for Decimal17Formatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(decimal17(value).as_bytes())
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes with sorted keys, two-space indentation and 17-digit floats.
pub fn to_json_string(v: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut buf, Decimal17Formatter(PrettyFormatter::new()));
    v.serialize(&mut ser)
        .expect("serializing a JSON value cannot fail");
    String::from_utf8(buf).expect("JSON output is UTF-8")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireJson {
    name: String,
    elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    leq: Option<Vec<(String, String)>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum WireRefJson {
    Name(String),
    Inline(WireJson),
}

type ObjJson = Vec<WireRefJson>;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ObjectDefJson {
    Labels(Vec<String>),
    Full {
        elements: Vec<String>,
        #[serde(default)]
        leq: Option<Vec<(String, String)>>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapJson {
    dom: ObjJson,
    cod: ObjJson,
    map: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairsJson {
    dom: ObjJson,
    cod: ObjJson,
    pairs: Vec<(String, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    dom: ObjJson,
    cod: ObjJson,
    matrix: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TransducerJson {
    states: Vec<String>,
    initial: String,
    input: ObjJson,
    output: ObjJson,
    delta: Vec<(String, String, String, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WorkspaceJson {
    instance: String,
    #[serde(default)]
    objects: BTreeMap<String, ObjectDefJson>,
    #[serde(default)]
    generators: BTreeMap<String, Value>,
}

/// Builds a wire; `cpo` wires and wires with an order are posets.
fn build_wire(
    name: &str,
    elements: Vec<String>,
    leq: Option<&[(String, String)]>,
    kind: InstanceKind,
) -> Result<Wire> {
    if leq.is_none() && kind != InstanceKind::Cpo {
        return Wire::set(name, elements);
    }
    let index = |l: &str| {
        elements
            .iter()
            .position(|e| e == l)
            .ok_or_else(|| Error::Validation(format!("order on {name} mentions unknown element {l:?}")))
    };
    let pairs = leq
        .unwrap_or_default()
        .iter()
        .map(|(a, b)| Ok((index(a)?, index(b)?)))
        .collect::<Result<Vec<_>>>()?;
    Wire::poset(name, FinPoset::new(elements, &pairs)?)
}

fn decode_object(o: &ObjJson, kind: InstanceKind, objects: &BTreeMap<String, Wire>) -> Result<ObjectExpr> {
    o.iter()
        .map(|w| match w {
            WireRefJson::Name(n) => objects.get(n).cloned().ok_or_else(|| Error::Unbound(n.clone())),
            WireRefJson::Inline(w) => build_wire(&w.name, w.elements.clone(), w.leq.as_deref(), kind),
        })
        .collect()
}

fn encode_object(o: &ObjectExpr) -> Value {
    let wires: Vec<WireJson> = o
        .wires()
        .iter()
        .map(|w| WireJson {
            name: w.name().to_string(),
            elements: w.carrier().labels().to_vec(),
            leq: w.carrier().as_poset().map(|p| {
                p.strict_pairs()
                    .into_iter()
                    .map(|(a, b)| (p.labels()[a].clone(), p.labels()[b].clone()))
                    .collect()
            }),
        })
        .collect();
    serde_json::to_value(wires).expect("wires serialize")
}

/// Named wires and generators for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Workspace {
    pub instance: InstanceKind,
    objects: BTreeMap<String, Wire>,
    generators: BTreeMap<String, Morph>,
}

impl Workspace {
    pub fn new(instance: InstanceKind) -> Self {
        Workspace {
            instance,
            objects: BTreeMap::new(),
            generators: BTreeMap::new(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let ws: WorkspaceJson = serde_json::from_str(text)?;
        let mut out = Workspace::new(ws.instance.parse()?);
        for (name, def) in ws.objects {
            let wire = match def {
                ObjectDefJson::Labels(elements) => build_wire(&name, elements, None, out.instance)?,
                ObjectDefJson::Full { elements, leq } => {
                    build_wire(&name, elements, leq.as_deref(), out.instance)?
                }
            };
            out.objects.insert(name, wire);
        }
        for (name, payload) in ws.generators {
            let m = Morph::from_json(out.instance, &payload, &out.objects)
                .map_err(|e| Error::Validation(format!("generator {name}: {e}")))?;
            out.generators.insert(name, m);
        }
        Ok(out)
    }

    pub fn add_object(&mut self, wire: Wire) {
        self.objects.insert(wire.name().to_string(), wire);
    }

    pub fn add_generator(&mut self, name: impl Into<String>, m: Morph) -> Result<()> {
        if m.kind() != self.instance {
            return Err(Error::Validation(format!(
                "a {} morphism cannot live in a {} workspace",
                m.kind(),
                self.instance
            )));
        }
        self.generators.insert(name.into(), m);
        Ok(())
    }

    pub fn objects(&self) -> &BTreeMap<String, Wire> {
        &self.objects
    }

    pub fn generators(&self) -> &BTreeMap<String, Morph> {
        &self.generators
    }

    pub fn object(&self, r: &ObjRef) -> Result<ObjectExpr> {
        r.0.iter()
            .map(|n| {
                self.objects
                    .get(n)
                    .cloned()
                    .ok_or_else(|| Error::Unbound(n.clone()))
            })
            .collect()
    }

    pub fn generator(&self, name: &str) -> Result<&Morph> {
        self.generators
            .get(name)
            .ok_or_else(|| Error::Unbound(name.to_string()))
    }
}

/// Decodes one standalone transducer (`{"states", "initial", "input",
/// "output", "delta"}` with inline wires).
pub fn transducer_from_json(text: &str) -> Result<Transducer> {
    let v: Value = serde_json::from_str(text)?;
    match Morph::from_json(InstanceKind::Transducer, &v, &BTreeMap::new())? {
        Morph::Transducer(t) => Ok(t),
        _ => unreachable!(),
    }
}
