//! Plays of transducer strategies, and composition as parallel composition
//! plus hiding.
//!
//! A strategy answers each Opponent move with at most one Player move.
//! Strategies for a morphism `A → B` of `G(R)` have two components: moves in
//! `A` are tagged `1`, moves in `B` are tagged `2`. Opponent plays `A⁺` and
//! `B⁻`, Player answers in `A⁻` or `B⁺`. After Player moves in one
//! component, Opponent continues in that component; only the first move is
//! free. This is exactly what the interleaving language permits when two
//! strategies talk over a shared middle game, since an `X` move can never be
//! adjacent to a `Z` move.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use crate::category::Morphism;
use crate::error::{Error, Result};
use crate::int::GMorphism;
use crate::object::ObjectExpr;
use crate::transducer::Transducer;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Opponent,
    Player,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Opponent => Polarity::Player,
            Polarity::Player => Polarity::Opponent,
        }
    }

    fn symbol(self) -> char {
        match self {
            Polarity::Opponent => '-',
            Polarity::Player => '+',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Move {
    pub component: u8,
    pub polarity: Polarity,
    pub label: String,
}

impl Move {
    pub fn new(component: u8, polarity: Polarity, label: impl Into<String>) -> Self {
        Move {
            component,
            polarity,
            label: label.into(),
        }
    }

    pub fn opponent(component: u8, label: impl Into<String>) -> Self {
        Move::new(component, Polarity::Opponent, label)
    }

    pub fn player(component: u8, label: impl Into<String>) -> Self {
        Move::new(component, Polarity::Player, label)
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.component, self.polarity.symbol(), self.label)
    }
}

impl FromStr for Move {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Validation(format!("bad move {s:?}; expected component:polarity:label"));
        let mut parts = s.splitn(3, ':');
        let (c, p, l) = match (parts.next(), parts.next(), parts.next()) {
            (Some(c), Some(p), Some(l)) if !l.is_empty() => (c, p, l),
            _ => return Err(bad()),
        };
        let component = c.parse().map_err(|_| bad())?;
        let polarity = match p {
            "-" => Polarity::Opponent,
            "+" => Polarity::Player,
            _ => return Err(bad()),
        };
        Ok(Move::new(component, polarity, l))
    }
}

pub type Play = Vec<Move>;

pub fn format_play(p: &[Move]) -> String {
    if p.is_empty() {
        "ε".to_string()
    } else {
        p.iter().map(Move::to_string).collect::<Vec<_>>().join(" ")
    }
}

/// True iff adjacent moves lie in components at most one apart.
pub fn interleaving_ok(s: &[Move]) -> bool {
    s.windows(2).all(|w| w[0].component.abs_diff(w[1].component) <= 1)
}

/// A prefix-closed set of alternating plays, each of at most `depth`
/// Opponent/Player pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaySet {
    plays: BTreeSet<Play>,
    depth: usize,
}

impl PlaySet {
    /// Validates alternation (Opponent first), the depth bound and closure
    /// under even-length prefixes.
    pub fn new(plays: impl IntoIterator<Item = Play>, depth: usize) -> Result<Self> {
        let plays: BTreeSet<Play> = plays.into_iter().collect();
        for p in &plays {
            if p.len() % 2 != 0 {
                return Err(Error::Validation(format!(
                    "play {} has odd length",
                    format_play(p)
                )));
            }
            if p.len() > 2 * depth {
                return Err(Error::Validation(format!(
                    "play {} is deeper than {depth}",
                    format_play(p)
                )));
            }
            for (i, m) in p.iter().enumerate() {
                let want = if i % 2 == 0 {
                    Polarity::Opponent
                } else {
                    Polarity::Player
                };
                if m.polarity != want {
                    return Err(Error::Validation(format!(
                        "play {} does not alternate at move {}",
                        format_play(p),
                        i + 1
                    )));
                }
            }
            if !p.is_empty() && !plays.contains(&p[..p.len() - 2]) {
                return Err(Error::Validation(format!(
                    "play {} is missing its prefix",
                    format_play(p)
                )));
            }
        }
        if !plays.is_empty() && !plays.contains(&Vec::new()) {
            return Err(Error::Validation("the empty play is missing".into()));
        }
        Ok(PlaySet { plays, depth })
    }

    pub fn plays(&self) -> &BTreeSet<Play> {
        &self.plays
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.plays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plays.is_empty()
    }

    pub fn contains(&self, p: &[Move]) -> bool {
        self.plays.contains(p)
    }

    /// Plays of at most `depth` pairs.
    pub fn truncate(&self, depth: usize) -> PlaySet {
        PlaySet {
            plays: self
                .plays
                .iter()
                .filter(|p| p.len() <= 2 * depth)
                .cloned()
                .collect(),
            depth: depth.min(self.depth),
        }
    }

    /// At most one Player answer to every Opponent move.
    pub fn is_deterministic(&self) -> bool {
        let mut seen = HashSet::new();
        self.plays
            .iter()
            .filter(|p| !p.is_empty())
            .all(|p| seen.insert(&p[..p.len() - 1]))
    }

    /// Plays extending `prefix` by exactly `n` moves.
    fn extensions<'a>(&'a self, prefix: &'a [Move], n: usize) -> impl Iterator<Item = &'a Play> + 'a {
        self.plays
            .range(prefix.to_vec()..)
            .take_while(move |p| p.starts_with(prefix))
            .filter(move |p| p.len() == prefix.len() + n)
    }
}

impl fmt::Display for PlaySet {
    /// One play per line, `ε` for the empty play.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.plays {
            writeln!(f, "{}", format_play(p))?;
        }
        Ok(())
    }
}

impl FromStr for PlaySet {
    type Err = Error;

    /// Parses the [`Display`](fmt::Display) format. Blank lines and lines
    /// starting with `#` are ignored; the depth is that of the longest play.
    fn from_str(s: &str) -> Result<Self> {
        let mut plays = Vec::new();
        for line in s.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line == "ε" {
                plays.push(Vec::new());
                continue;
            }
            plays.push(
                line.split_whitespace()
                    .map(str::parse)
                    .collect::<Result<Play>>()?,
            );
        }
        let depth = plays.iter().map(|p| p.len() / 2).max().unwrap_or(0);
        PlaySet::new(plays, depth)
    }
}

/// `Ok(())` iff every play of `s` is allowed by `property`; otherwise the
/// shortest offending play (least in move order among those).
pub fn safety_check(s: &PlaySet, property: &PlaySet) -> std::result::Result<(), Play> {
    match s
        .plays
        .iter()
        .filter(|p| !property.contains(p))
        .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
    {
        None => Ok(()),
        Some(p) => Err(p.clone()),
    }
}

/// A strategy's answer to an Opponent move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Response<P> {
    Reply(Move, P),
    Undefined,
    /// Beyond what a truncated play set knows.
    Unknown,
}

/// A deterministic strategy, explored lazily from its start position.
pub trait Strategy {
    type Pos: Clone + Eq + Hash;

    fn start(&self) -> Self::Pos;

    /// Opponent moves worth trying at `pos`. Moves left out are unanswered.
    fn opponent_moves(&self, pos: &Self::Pos) -> Vec<Move>;

    fn respond(&self, pos: &Self::Pos, m: &Move) -> Response<Self::Pos>;
}

/// All plays of at most `depth` pairs. Unanswered (or unknown) Opponent
/// moves end a branch.
pub fn unfold<S: Strategy>(s: &S, depth: usize) -> PlaySet {
    fn go<S: Strategy>(s: &S, pos: &S::Pos, prefix: &mut Play, left: usize, out: &mut BTreeSet<Play>) {
        out.insert(prefix.clone());
        if left == 0 {
            return;
        }
        for o in s.opponent_moves(pos) {
            if let Response::Reply(p, next) = s.respond(pos, &o) {
                prefix.push(o);
                prefix.push(p);
                go(s, &next, prefix, left - 1, out);
                prefix.truncate(prefix.len() - 2);
            }
        }
    }
    let mut plays = BTreeSet::new();
    go(s, &s.start(), &mut Vec::new(), depth, &mut plays);
    PlaySet { plays, depth }
}

/// Whether `play` is one of the strategy's plays, checked by replaying it.
pub fn accepts<S: Strategy>(s: &S, play: &[Move]) -> bool {
    if !play.len().is_multiple_of(2) {
        return false;
    }
    let mut pos = s.start();
    for pair in play.chunks(2) {
        match s.respond(&pos, &pair[0]) {
            Response::Reply(p, next) if p == pair[1] => pos = next,
            _ => return false,
        }
    }
    true
}

impl Strategy for PlaySet {
    type Pos = Play;

    fn start(&self) -> Play {
        Vec::new()
    }

    fn opponent_moves(&self, pos: &Play) -> Vec<Move> {
        let moves: BTreeSet<Move> = self.extensions(pos, 2).map(|p| p[pos.len()].clone()).collect();
        moves.into_iter().collect()
    }

    fn respond(&self, pos: &Play, m: &Move) -> Response<Play> {
        let mut probe = pos.clone();
        probe.push(m.clone());
        let reply = self.extensions(&probe, 1).next().cloned();
        match reply {
            Some(p) => Response::Reply(p[p.len() - 1].clone(), p),
            None if pos.len() >= 2 * self.depth => Response::Unknown,
            None => Response::Undefined,
        }
    }
}

/// A transducer `X → Y` as a single-component strategy: Opponent plays
/// `1:-:x`, Player answers `1:+:y`.
#[derive(Debug, Clone, Copy)]
pub struct TransducerStrategy<'a>(pub &'a Transducer);

impl Strategy for TransducerStrategy<'_> {
    type Pos = usize;

    fn start(&self) -> usize {
        self.0.initial()
    }

    fn opponent_moves(&self, _: &usize) -> Vec<Move> {
        let x = self.0.dom();
        (0..x.union_size())
            .map(|i| Move::opponent(1, x.union_label(i)))
            .collect()
    }

    fn respond(&self, q: &usize, m: &Move) -> Response<usize> {
        if m.component != 1 || m.polarity != Polarity::Opponent {
            return Response::Undefined;
        }
        let Ok(x) = self.0.dom().union_index(&m.label) else {
            return Response::Undefined;
        };
        match self.0.step(*q, x) {
            Some((y, q2)) => Response::Reply(Move::player(1, self.0.cod().union_label(y)), q2),
            None => Response::Undefined,
        }
    }
}

/// `P(t)` for a transducer: its alternating input/output plays.
pub fn unfold_plays(t: &Transducer, depth: usize) -> PlaySet {
    unfold(&TransducerStrategy(t), depth)
}

/// Copycat on `x`: every Opponent move echoed back.
pub fn copycat_plays(x: &ObjectExpr, depth: usize) -> PlaySet {
    let moves: Vec<String> = (0..x.union_size()).map(|i| x.union_label(i)).collect();
    let mut plays = BTreeSet::new();
    let mut layer = vec![Vec::new()];
    for _ in 0..=depth {
        let mut next = Vec::new();
        for p in layer {
            if p.len() < 2 * depth {
                for m in &moves {
                    let mut q: Play = p.clone();
                    q.push(Move::opponent(1, m.clone()));
                    q.push(Move::player(1, m.clone()));
                    next.push(q);
                }
            }
            plays.insert(p);
        }
        layer = next;
    }
    PlaySet { plays, depth }
}

/// A transducer `G`-morphism `f : A → B` as a two-component strategy.
/// Positions carry the component of Player's last move.
#[derive(Debug, Clone, Copy)]
pub struct GStrategy<'a>(pub &'a GMorphism<Transducer>);

impl GStrategy<'_> {
    fn input_halves(&self) -> [(u8, &ObjectExpr); 2] {
        [(1, &self.0.src().pos), (2, &self.0.dst().neg)]
    }

    fn output_halves(&self) -> [(u8, &ObjectExpr); 2] {
        [(1, &self.0.src().neg), (2, &self.0.dst().pos)]
    }
}

impl Strategy for GStrategy<'_> {
    type Pos = (usize, Option<u8>);

    fn start(&self) -> Self::Pos {
        (self.0.core().initial(), None)
    }

    fn opponent_moves(&self, (_, last): &Self::Pos) -> Vec<Move> {
        self.input_halves()
            .into_iter()
            .filter(|(c, _)| last.is_none_or(|l| l == *c))
            .flat_map(|(c, half)| (0..half.union_size()).map(move |i| Move::opponent(c, half.union_label(i))))
            .collect()
    }

    fn respond(&self, (q, _): &Self::Pos, m: &Move) -> Response<Self::Pos> {
        if m.polarity != Polarity::Opponent {
            return Response::Undefined;
        }
        let [(_, a_pos), (_, b_neg)] = self.input_halves();
        let x = match m.component {
            1 => a_pos.union_index(&m.label),
            2 => b_neg.union_index(&m.label).map(|i| a_pos.union_size() + i),
            _ => return Response::Undefined,
        };
        let Ok(x) = x else {
            return Response::Undefined;
        };
        let Some((y, q2)) = self.0.core().step(*q, x) else {
            return Response::Undefined;
        };
        let [(_, a_neg), (_, b_pos)] = self.output_halves();
        let reply = if y < a_neg.union_size() {
            Move::player(1, a_neg.union_label(y))
        } else {
            Move::player(2, b_pos.union_label(y - a_neg.union_size()))
        };
        let comp = reply.component;
        Response::Reply(reply, (q2, Some(comp)))
    }
}

/// `P(f)` for a `G(R)` morphism.
pub fn unfold_g_plays(f: &GMorphism<Transducer>, depth: usize) -> PlaySet {
    unfold(&GStrategy(f), depth)
}

/// Copycat on the `G`-object of `f`'s source: the plays of the identity.
pub fn g_copycat_plays(a: &crate::int::GObject, depth: usize) -> Result<PlaySet> {
    let id = crate::int::Int::new(crate::transducer::Resumptions::default()).identity(a)?;
    Ok(unfold_g_plays(&id, depth))
}

/// Where a move travels during the chatter between two strategies.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Leg {
    ToS(Move),
    ToT(Move),
}

/// The parallel composition of `s : X → Y` and `t : Y → Z` with the `Y`
/// moves hidden, itself a strategy `X → Z`.
///
/// `X` moves are `s`'s component 1; `Z` moves are `t`'s component 2 and
/// keep that tag. A `Y` move is Player's for one side and Opponent's for the
/// other, so it changes polarity as it crosses over.
#[derive(Debug, Clone, Copy)]
pub struct ParHide<'a, S, T> {
    pub s: &'a S,
    pub t: &'a T,
}

enum Halt {
    Undefined,
    Unknown,
}

/// Result of running the chatter that follows one external Opponent move.
struct Chatter<PS, PT> {
    visible: Move,
    ps: PS,
    pt: PT,
    hidden: Vec<Move>,
}

impl<'a, S: Strategy, T: Strategy> ParHide<'a, S, T> {
    pub fn new(s: &'a S, t: &'a T) -> Self {
        ParHide { s, t }
    }

    fn chatter(
        &self,
        mut ps: S::Pos,
        mut pt: T::Pos,
        m: &Move,
        record: bool,
    ) -> std::result::Result<Chatter<S::Pos, T::Pos>, Halt> {
        let mut leg = match m.component {
            1 => Leg::ToS(m.clone()),
            2 => Leg::ToT(m.clone()),
            _ => return Err(Halt::Undefined),
        };
        let mut hidden = Vec::new();
        let mut seen = HashSet::new();
        loop {
            // Same positions and same message in flight: the loop never exits.
            if !seen.insert((ps.clone(), pt.clone(), leg.clone())) {
                return Err(Halt::Undefined);
            }
            leg = match leg {
                Leg::ToS(o) => match self.s.respond(&ps, &o) {
                    Response::Reply(p, next) => {
                        ps = next;
                        if p.component == 1 {
                            return Ok(Chatter {
                                visible: p,
                                ps,
                                pt,
                                hidden,
                            });
                        }
                        if record {
                            hidden.push(Move::new(2, p.polarity, p.label.clone()));
                        }
                        Leg::ToT(Move::new(1, p.polarity.flip(), p.label))
                    }
                    Response::Undefined => return Err(Halt::Undefined),
                    Response::Unknown => return Err(Halt::Unknown),
                },
                Leg::ToT(o) => match self.t.respond(&pt, &o) {
                    Response::Reply(p, next) => {
                        pt = next;
                        if p.component == 2 {
                            return Ok(Chatter {
                                visible: p,
                                ps,
                                pt,
                                hidden,
                            });
                        }
                        if record {
                            // tagged with `s`'s polarity
                            hidden.push(Move::new(2, p.polarity.flip(), p.label.clone()));
                        }
                        Leg::ToS(Move::new(2, p.polarity.flip(), p.label))
                    }
                    Response::Undefined => return Err(Halt::Undefined),
                    Response::Unknown => return Err(Halt::Unknown),
                },
            };
        }
    }

    /// The full interaction behind a visible play, as a three-component play:
    /// `X` moves tagged 1, hidden `Y` moves 2 (with `s`'s polarity), `Z`
    /// moves 3. `None` if the play is not one of the composite's.
    pub fn interaction(&self, visible: &[Move]) -> Option<Play> {
        let (mut ps, mut pt) = (self.s.start(), self.t.start());
        let mut out = Vec::new();
        for pair in visible.chunks(2) {
            let [o, p] = pair else { return None };
            let Ok(c) = self.chatter(ps, pt, o, true) else {
                return None;
            };
            if &c.visible != p {
                return None;
            }
            let lift =
                |m: &Move| Move::new(if m.component == 1 { 1 } else { 3 }, m.polarity, m.label.clone());
            out.push(lift(o));
            out.extend(c.hidden);
            out.push(lift(p));
            (ps, pt) = (c.ps, c.pt);
        }
        Some(out)
    }
}

impl<S: Strategy, T: Strategy> Strategy for ParHide<'_, S, T> {
    type Pos = (S::Pos, T::Pos, Option<u8>);

    fn start(&self) -> Self::Pos {
        (self.s.start(), self.t.start(), None)
    }

    fn opponent_moves(&self, (ps, pt, last): &Self::Pos) -> Vec<Move> {
        let mut moves = Vec::new();
        if *last != Some(2) {
            moves.extend(self.s.opponent_moves(ps).into_iter().filter(|m| m.component == 1));
        }
        if *last != Some(1) {
            moves.extend(self.t.opponent_moves(pt).into_iter().filter(|m| m.component == 2));
        }
        moves
    }

    fn respond(&self, (ps, pt, _): &Self::Pos, m: &Move) -> Response<Self::Pos> {
        match self.chatter(ps.clone(), pt.clone(), m, false) {
            Ok(c) => {
                let comp = c.visible.component;
                Response::Reply(c.visible, (c.ps, c.pt, Some(comp)))
            }
            Err(Halt::Undefined) => Response::Undefined,
            Err(Halt::Unknown) => Response::Unknown,
        }
    }
}

/// `{ s↾X,Z | s ∈ S ∥ T }` truncated to `depth` visible pairs. Both play
/// sets must be deterministic.
pub fn par_hide(s: &PlaySet, t: &PlaySet, depth: usize) -> Result<PlaySet> {
    for (name, p) in [("left", s), ("right", t)] {
        if !p.is_deterministic() {
            return Err(Error::Validation(format!("{name} play set is not deterministic")));
        }
    }
    Ok(unfold(&ParHide::new(s, t), depth))
}

/// [`par_hide`] on transducer strategies, exact at any depth.
pub fn par_hide_g(f: &GMorphism<Transducer>, g: &GMorphism<Transducer>, depth: usize) -> Result<PlaySet> {
    if f.dst() != g.src() {
        return Err(Error::Shape(format!(
            "cannot compose {} -> {} with {} -> {}",
            f.src(),
            f.dst(),
            g.src(),
            g.dst()
        )));
    }
    Ok(unfold(&ParHide::new(&GStrategy(f), &GStrategy(g)), depth))
}

/// `s↾X,Y` of a three-component play, in the left strategy's tags.
pub fn restrict_left(s: &[Move]) -> Play {
    s.iter().filter(|m| m.component <= 2).cloned().collect()
}

/// `s↾Y,Z` of a three-component play, in the right strategy's tags.
pub fn restrict_right(s: &[Move]) -> Play {
    s.iter()
        .filter(|m| m.component >= 2)
        .map(|m| match m.component {
            2 => Move::new(1, m.polarity.flip(), m.label.clone()),
            _ => Move::new(2, m.polarity, m.label.clone()),
        })
        .collect()
}

/// `s↾X,Z` of a three-component play, in the composite's tags.
pub fn hide(s: &[Move]) -> Play {
    s.iter()
        .filter(|m| m.component != 2)
        .map(|m| Move::new(if m.component == 1 { 1 } else { 2 }, m.polarity, m.label.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::TracedCategory;
    use crate::int::{GObject, Int};
    use crate::object::Wire;
    use crate::transducer::Resumptions;

    fn xa() -> ObjectExpr {
        Wire::set("X", ["a"]).unwrap().into()
    }

    fn alternator() -> Transducer {
        let bits: ObjectExpr = Wire::set("B", ["0", "1"]).unwrap().into();
        Transducer::from_transitions(
            xa(),
            bits,
            vec!["q0".into(), "q1".into()],
            0,
            [(0, 0, 0, 1), (1, 0, 1, 0)],
        )
        .unwrap()
    }

    fn ps(text: &str) -> PlaySet {
        text.parse().unwrap()
    }

    #[test]
    fn interleaving_examples() {
        let tag = |cs: &[u8]| -> Play { cs.iter().map(|&c| Move::opponent(c, "m")).collect() };
        assert!(interleaving_ok(&tag(&[1, 2, 3, 2, 1])));
        assert!(!interleaving_ok(&tag(&[1, 3])));
        assert!(interleaving_ok(&[]));
    }

    #[test]
    fn unfold_examples() {
        let cc = Resumptions::default().identity(&xa()).unwrap();
        assert_eq!(
            unfold_plays(&cc, 2),
            ps("ε\n1:-:a 1:+:a\n1:-:a 1:+:a 1:-:a 1:+:a")
        );
        let dead = Transducer::stateless(xa(), xa(), [None]).unwrap();
        assert_eq!(unfold_plays(&dead, 3).plays().len(), 1);
        assert_eq!(
            unfold_plays(&alternator(), 2),
            ps("ε\n1:-:a 1:+:0\n1:-:a 1:+:0 1:-:a 1:+:1")
        );
    }

    #[test]
    fn copycat_depth_one() {
        let cc = copycat_plays(&xa(), 1);
        assert_eq!(cc, ps("ε\n1:-:a 1:+:a"));
        let id = Resumptions::default().identity(&xa()).unwrap();
        assert_eq!(copycat_plays(&xa(), 4), unfold_plays(&id, 4));
    }

    #[test]
    fn text_roundtrip() {
        let p = unfold_plays(&alternator(), 3);
        let text = p.to_string();
        assert_eq!(text.lines().next(), Some("ε"));
        assert_eq!(text.parse::<PlaySet>().unwrap(), p);
    }

    #[test]
    fn validation() {
        assert!("1:-:a 1:+:a 1:-:a 1:+:a".parse::<PlaySet>().is_err());
        assert!("ε\n1:+:a 1:-:a".parse::<PlaySet>().is_err());
        assert!("ε\n1:-:a".parse::<PlaySet>().is_err());
        assert!("ε\n1:a".parse::<PlaySet>().is_err());
        let nd = ps("ε\n1:-:a 1:+:a\n1:-:a 1:+:b");
        assert!(!nd.is_deterministic());
        assert!(par_hide(&nd, &nd, 1).is_err());
    }

    #[test]
    fn safety() {
        let cc = copycat_plays(&xa(), 2);
        let full = copycat_plays(&xa(), 3);
        assert_eq!(safety_check(&cc, &full), Ok(()));
        assert_eq!(safety_check(&cc, &cc), Ok(()));
        let only_empty = ps("ε");
        assert_eq!(
            safety_check(&cc, &only_empty),
            Err(vec![Move::opponent(1, "a"), Move::player(1, "a")])
        );
    }

    fn g_copycat(a: &GObject) -> GMorphism<Transducer> {
        Int::new(Resumptions::default()).identity(a).unwrap()
    }

    #[test]
    fn g_copycat_switches_components() {
        let a = GObject::new(xa(), xa());
        let p = unfold_g_plays(&g_copycat(&a), 2);
        // Opponent opens in either component; the answer lands in the other
        // one, where Opponent must continue.
        assert_eq!(
            p,
            ps("ε\n\
                1:-:a 2:+:a\n\
                1:-:a 2:+:a 2:-:a 1:+:a\n\
                2:-:a 1:+:a\n\
                2:-:a 1:+:a 1:-:a 2:+:a")
        );
        assert_eq!(g_copycat_plays(&a, 2).unwrap(), p);
    }

    #[test]
    fn par_hide_copycat_is_identity() {
        let a = GObject::new(xa(), xa());
        let cc = g_copycat(&a);
        let s = unfold_g_plays(&cc, 6);
        let composite = par_hide(&s, &s, 3).unwrap();
        assert_eq!(composite, unfold_g_plays(&cc, 3));
        assert_eq!(par_hide_g(&cc, &cc, 3).unwrap(), composite);
    }

    #[test]
    fn par_hide_with_silent_left_is_empty() {
        let a = GObject::new(xa(), xa());
        let t = unfold_g_plays(&g_copycat(&a), 2);
        let silent = PlaySet::new([Vec::new()], 2).unwrap();
        let hidden = par_hide(&silent, &t, 2).unwrap();
        // Opponent can still open on the right, but copycat forwards to the
        // silent left strategy, which never answers.
        assert_eq!(hidden.plays(), ps("ε").plays());
    }

    #[test]
    fn interaction_restricts_back() {
        let a = GObject::new(xa(), xa());
        let cc = g_copycat(&a);
        let (s, t) = (GStrategy(&cc), GStrategy(&cc));
        let ph = ParHide::new(&s, &t);
        let visible = vec![Move::opponent(1, "a"), Move::player(2, "a")];
        let full = ph.interaction(&visible).unwrap();
        // x, the forwarded middle move, z
        assert_eq!(full.len(), 3);
        assert!(interleaving_ok(&full));
        assert_eq!(hide(&full), visible);
        let p = unfold_g_plays(&cc, 2);
        assert!(p.contains(&restrict_left(&full)));
        assert!(p.contains(&restrict_right(&full)));
    }
}
