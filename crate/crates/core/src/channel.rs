//! Discrete channels as bipartite graphs.
//!
//! A channel maps each input symbol to the set of outputs it may produce.
//! Symbols are plain integers `0..q`; the extra node of the extended channel
//! built by [`ChannelGraph::gamma_star`] is the label [`STAR`], which lies
//! outside every ordinary alphabet.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Symbol = u16;

/// The distinguished extra node of the extended channel.
pub const STAR: Symbol = Symbol::MAX;

/// Largest alphabet accepted by the constructors.
pub const MAX_ALPHABET: usize = 1 << 12;

/// A q-ary alphabet `{0, .., q-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Alphabet(usize);

impl Alphabet {
    pub fn new(q: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::AlphabetTooSmall(q));
        }
        if q > MAX_ALPHABET {
            return Err(Error::InvalidParameters(format!(
                "alphabet size {q} exceeds {MAX_ALPHABET}"
            )));
        }
        Ok(Alphabet(q))
    }

    pub fn size(self) -> usize {
        self.0
    }

    /// The largest ordinary symbol, `q - 1`.
    pub fn top(self) -> Symbol {
        (self.0 - 1) as Symbol
    }

    pub fn contains(self, s: Symbol) -> bool {
        (s as usize) < self.0
    }

    pub fn symbols(self) -> impl Iterator<Item = Symbol> {
        (0..self.0).map(|s| s as Symbol)
    }
}

impl TryFrom<usize> for Alphabet {
    type Error = Error;
    fn try_from(q: usize) -> Result<Self> {
        Alphabet::new(q)
    }
}

impl From<Alphabet> for usize {
    fn from(a: Alphabet) -> usize {
        a.0
    }
}

/// Bipartite input/output graph of a discrete channel.
///
/// Immutable once built. Every input has at least one outgoing edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChannelGraph {
    alphabet: Alphabet,
    inputs: Vec<Symbol>,
    outputs: Vec<Symbol>,
    edges: BTreeSet<(Symbol, Symbol)>,
    adjacency: BTreeMap<Symbol, Vec<Symbol>>,
}

impl ChannelGraph {
    /// Builds a graph from explicit node sets and edges.
    pub fn new(
        alphabet: Alphabet,
        inputs: impl IntoIterator<Item = Symbol>,
        outputs: impl IntoIterator<Item = Symbol>,
        edges: impl IntoIterator<Item = (Symbol, Symbol)>,
    ) -> Result<Self> {
        let inputs: BTreeSet<Symbol> = inputs.into_iter().collect();
        let outputs: BTreeSet<Symbol> = outputs.into_iter().collect();
        let edges: BTreeSet<(Symbol, Symbol)> = edges.into_iter().collect();
        for &s in inputs.iter().chain(outputs.iter()) {
            if s != STAR && !alphabet.contains(s) {
                return Err(Error::InvalidChannel(format!(
                    "node {s} outside alphabet of size {}",
                    alphabet.size()
                )));
            }
        }
        let mut adjacency: BTreeMap<Symbol, Vec<Symbol>> =
            inputs.iter().map(|&i| (i, Vec::new())).collect();
        for &(i, j) in &edges {
            if !outputs.contains(&j) {
                return Err(Error::InvalidChannel(format!(
                    "edge ({}, {}) leaves the output set",
                    label(i),
                    label(j)
                )));
            }
            match adjacency.get_mut(&i) {
                Some(out) => out.push(j),
                None => {
                    return Err(Error::InvalidChannel(format!(
                        "edge ({}, {}) starts outside the input set",
                        label(i),
                        label(j)
                    )))
                }
            }
        }
        if let Some((&i, _)) = adjacency.iter().find(|(_, out)| out.is_empty()) {
            return Err(Error::InvalidChannel(format!(
                "input {} has no outgoing edge",
                label(i)
            )));
        }
        Ok(ChannelGraph {
            alphabet,
            inputs: inputs.into_iter().collect(),
            outputs: outputs.into_iter().collect(),
            edges,
            adjacency,
        })
    }

    /// Generalized Z-channel: each symbol may be decremented by one.
    pub fn z(q: usize) -> Result<Self> {
        let a = Alphabet::new(q)?;
        let edges = a
            .symbols()
            .map(|i| (i, i))
            .chain(a.symbols().skip(1).map(|i| (i, i - 1)));
        Self::new(a, a.symbols(), a.symbols(), edges)
    }

    /// Generalized inverse Z-channel: each symbol may be incremented by one.
    pub fn inverse_z(q: usize) -> Result<Self> {
        let a = Alphabet::new(q)?;
        let edges = a
            .symbols()
            .map(|i| (i, i))
            .chain(a.symbols().take(q - 1).map(|i| (i, i + 1)));
        Self::new(a, a.symbols(), a.symbols(), edges)
    }

    /// The extended channel used for the sphere-packing upper bound: the
    /// inverse Z graph plus a node `*` with edges `(*,*)`, `(*,q-1)`, `(0,*)`.
    pub fn gamma_star(q: usize) -> Result<Self> {
        let a = Alphabet::new(q)?;
        let nodes: Vec<Symbol> = std::iter::once(STAR).chain(a.symbols()).collect();
        let edges = a
            .symbols()
            .map(|i| (i, i))
            .chain(a.symbols().take(q - 1).map(|i| (i, i + 1)))
            .chain([(STAR, STAR), (STAR, a.top()), (0, STAR)]);
        Self::new(a, nodes.clone(), nodes, edges)
    }

    /// Complete bipartite graph: every input may become every output.
    pub fn symmetric(q: usize) -> Result<Self> {
        let a = Alphabet::new(q)?;
        let edges = a.symbols().flat_map(|i| a.symbols().map(move |j| (i, j)));
        Self::new(a, a.symbols(), a.symbols(), edges)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn inputs(&self) -> &[Symbol] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Symbol] {
        &self.outputs
    }

    pub fn edges(&self) -> impl Iterator<Item = (Symbol, Symbol)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, i: Symbol, j: Symbol) -> bool {
        self.edges.contains(&(i, j))
    }

    /// Outputs reachable from `x`, in ascending order. Never empty.
    pub fn admissible_outputs(&self, x: Symbol) -> Result<&[Symbol]> {
        self.adjacency
            .get(&x)
            .map(Vec::as_slice)
            .ok_or(Error::UnknownSymbol(x))
    }

    /// Inputs adjacent to output `j` (the confusability set of `j`).
    pub fn inputs_reaching(&self, j: Symbol) -> Vec<Symbol> {
        self.edges
            .iter()
            .filter(|&&(_, o)| o == j)
            .map(|&(i, _)| i)
            .collect()
    }

    /// Applies a bijective relabeling to both node sets.
    pub fn relabel(&self, f: impl Fn(Symbol) -> Symbol) -> Result<Self> {
        Self::new(
            self.alphabet,
            self.inputs.iter().map(|&s| f(s)),
            self.outputs.iter().map(|&s| f(s)),
            self.edges.iter().map(|&(i, j)| (f(i), f(j))),
        )
    }

    /// Reverses ordinary symbols, `i -> q-1-i`; `*` is left alone.
    pub fn reversed(&self) -> Result<Self> {
        let top = self.alphabet.top();
        self.relabel(|s| if s == STAR { STAR } else { top - s })
    }

    pub fn to_description(&self) -> ChannelDescription {
        ChannelDescription {
            q: self.alphabet.size(),
            edges: self
                .edges
                .iter()
                .map(|&(i, j)| [Label::from(i), Label::from(j)])
                .collect(),
        }
    }

    pub fn from_description(desc: &ChannelDescription) -> Result<Self> {
        let a = Alphabet::new(desc.q)?;
        let edges: Vec<(Symbol, Symbol)> = desc
            .edges
            .iter()
            .map(|[i, j]| Ok((i.to_symbol(a)?, j.to_symbol(a)?)))
            .collect::<Result<_>>()?;
        let has_star = edges.iter().any(|&(i, j)| i == STAR || j == STAR);
        let nodes: Vec<Symbol> = a.symbols().chain(has_star.then_some(STAR)).collect();
        Self::new(a, nodes.clone(), nodes, edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_description()).expect("channel description serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let desc: ChannelDescription =
            serde_json::from_str(s).map_err(|e| Error::InvalidChannel(e.to_string()))?;
        Self::from_description(&desc)
    }
}

fn label(s: Symbol) -> String {
    if s == STAR {
        "*".to_string()
    } else {
        s.to_string()
    }
}

/// Serialized form of a channel: `{"q": 3, "edges": [[0,0],[1,0],...]}`.
/// The extra node of the extended channel is written as `"*"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelDescription {
    pub q: usize,
    pub edges: Vec<[Label; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Symbol(Symbol),
    Star(StarTag),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StarTag {
    #[serde(rename = "*")]
    Star,
}

impl From<Symbol> for Label {
    fn from(s: Symbol) -> Self {
        if s == STAR {
            Label::Star(StarTag::Star)
        } else {
            Label::Symbol(s)
        }
    }
}

impl Label {
    fn to_symbol(self, a: Alphabet) -> Result<Symbol> {
        match self {
            Label::Star(_) => Ok(STAR),
            Label::Symbol(s) if a.contains(s) => Ok(s),
            Label::Symbol(s) => Err(Error::InvalidChannel(format!(
                "symbol {s} outside alphabet of size {}",
                a.size()
            ))),
        }
    }
}

/// Which asymmetric half of a unidirectional channel is active.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DirectionState {
    #[default]
    Undecided,
    CommittedPositive,
    CommittedNegative,
}

impl fmt::Display for DirectionState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DirectionState::Undecided => "undecided",
            DirectionState::CommittedPositive => "committed-positive",
            DirectionState::CommittedNegative => "committed-negative",
        })
    }
}

impl DirectionState {
    /// State after observing the error `e = y - x`; `None` if `e` has the
    /// opposite sign of an already committed direction.
    pub fn after(self, e: i64) -> Option<DirectionState> {
        use DirectionState::*;
        match (self, e.signum()) {
            (s, 0) => Some(s),
            (Undecided, 1) | (CommittedPositive, 1) => Some(CommittedPositive),
            (Undecided, -1) | (CommittedNegative, -1) => Some(CommittedNegative),
            _ => None,
        }
    }
}

/// A pair of asymmetric channels over the same alphabet, one allowing only
/// nonnegative errors and one only nonpositive errors. Within one codeword
/// all errors come from the same half.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnidirectionalChannel {
    positive: ChannelGraph,
    negative: ChannelGraph,
}

impl UnidirectionalChannel {
    pub fn new(positive: ChannelGraph, negative: ChannelGraph) -> Result<Self> {
        if positive.inputs != negative.inputs || positive.outputs != negative.outputs {
            return Err(Error::InvalidChannel(
                "halves of a unidirectional channel must share node sets".into(),
            ));
        }
        if positive.inputs.contains(&STAR) || positive.outputs.contains(&STAR) {
            return Err(Error::InvalidChannel(
                "unidirectional channels need integer labels".into(),
            ));
        }
        if let Some((i, j)) = positive.edges().find(|&(i, j)| j < i) {
            return Err(Error::InvalidChannel(format!(
                "positive half has decreasing edge ({i}, {j})"
            )));
        }
        if let Some((i, j)) = negative.edges().find(|&(i, j)| j > i) {
            return Err(Error::InvalidChannel(format!(
                "negative half has increasing edge ({i}, {j})"
            )));
        }
        Ok(UnidirectionalChannel { positive, negative })
    }

    /// The pair (inverse Z, Z).
    pub fn z_pair(q: usize) -> Result<Self> {
        Self::new(ChannelGraph::inverse_z(q)?, ChannelGraph::z(q)?)
    }

    pub fn positive(&self) -> &ChannelGraph {
        &self.positive
    }

    pub fn negative(&self) -> &ChannelGraph {
        &self.negative
    }

    pub fn alphabet(&self) -> Alphabet {
        self.positive.alphabet
    }

    /// Accepts iff all entries of `e` share one sign (zeros are neutral).
    pub fn check_error_vector(&self, e: &[i64]) -> bool {
        e.iter()
            .try_fold(DirectionState::Undecided, |d, &ei| d.after(ei))
            .is_some()
    }

    /// Outputs admissible for `x` under the given direction, ascending.
    pub fn admissible_outputs(&self, x: Symbol, dir: DirectionState) -> Result<Vec<Symbol>> {
        let mut out: BTreeSet<Symbol> = BTreeSet::new();
        if dir != DirectionState::CommittedNegative {
            out.extend(self.positive.admissible_outputs(x)?);
        }
        if dir != DirectionState::CommittedPositive {
            out.extend(self.negative.admissible_outputs(x)?);
        }
        Ok(out.into_iter().collect())
    }
}

/// Either a single graph or a unidirectional pair; what sessions and the
/// verifier run against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Channel {
    Graph(ChannelGraph),
    Unidirectional(UnidirectionalChannel),
}

impl Channel {
    pub fn alphabet(&self) -> Alphabet {
        match self {
            Channel::Graph(g) => g.alphabet(),
            Channel::Unidirectional(u) => u.alphabet(),
        }
    }

    pub fn admissible_outputs(&self, x: Symbol, dir: DirectionState) -> Result<Vec<Symbol>> {
        match self {
            Channel::Graph(g) => Ok(g.admissible_outputs(x)?.to_vec()),
            Channel::Unidirectional(u) => u.admissible_outputs(x, dir),
        }
    }

    /// Direction after the transition `x -> y`, or `None` if the transition
    /// is not admissible in the current direction.
    pub fn step(&self, dir: DirectionState, x: Symbol, y: Symbol) -> Option<DirectionState> {
        match self {
            Channel::Graph(g) => g.has_edge(x, y).then_some(dir),
            Channel::Unidirectional(u) => {
                let next = dir.after(y as i64 - x as i64)?;
                let ok = match next {
                    DirectionState::Undecided => x == y,
                    DirectionState::CommittedPositive => u.positive.has_edge(x, y),
                    DirectionState::CommittedNegative => u.negative.has_edge(x, y),
                };
                ok.then_some(next)
            }
        }
    }
}

impl From<ChannelGraph> for Channel {
    fn from(g: ChannelGraph) -> Self {
        Channel::Graph(g)
    }
}

impl From<UnidirectionalChannel> for Channel {
    fn from(u: UnidirectionalChannel) -> Self {
        Channel::Unidirectional(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outs(g: &ChannelGraph, x: Symbol) -> Vec<Symbol> {
        g.admissible_outputs(x).unwrap().to_vec()
    }

    #[test]
    fn z_channel_edges() {
        let g = ChannelGraph::z(3).unwrap();
        assert_eq!(outs(&g, 1), vec![0, 1]);
        assert_eq!(outs(&g, 0), vec![0]);
        let b = ChannelGraph::z(2).unwrap();
        assert_eq!(b.edges().collect::<Vec<_>>(), vec![(0, 0), (1, 0), (1, 1)]);
        let g5 = ChannelGraph::z(5).unwrap();
        assert_eq!(outs(&g5, 4), vec![3, 4]);
    }

    #[test]
    fn inverse_z_edges() {
        let g = ChannelGraph::inverse_z(3).unwrap();
        assert_eq!(outs(&g, 0), vec![0, 1]);
        assert_eq!(outs(&g, 2), vec![2]);
    }

    #[test]
    fn z_and_inverse_z_are_reversals() {
        for q in 2..9 {
            let z = ChannelGraph::z(q).unwrap();
            let inv = ChannelGraph::inverse_z(q).unwrap();
            assert_eq!(z.reversed().unwrap(), inv);
            assert_eq!(inv.reversed().unwrap(), z);
        }
    }

    #[test]
    fn gamma_star_edges() {
        let g = ChannelGraph::gamma_star(3).unwrap();
        assert_eq!(outs(&g, STAR), vec![2, STAR]);
        assert_eq!(outs(&g, 0), vec![0, 1, STAR]);
        assert_eq!(outs(&g, 2), vec![2]);
    }

    #[test]
    fn symmetric_binary() {
        let g = ChannelGraph::symmetric(2).unwrap();
        assert_eq!(outs(&g, 0), vec![0, 1]);
    }

    #[test]
    fn structural_invariants() {
        for q in 2..10 {
            let z = ChannelGraph::z(q).unwrap();
            let inv = ChannelGraph::inverse_z(q).unwrap();
            let star = ChannelGraph::gamma_star(q).unwrap();
            for g in [&z, &inv, &star] {
                for &x in g.inputs() {
                    assert!(outs(g, x).contains(&x));
                }
            }
            for &x in z.inputs() {
                assert!(outs(&z, x).len() <= 2);
            }
            let common: Vec<_> = z.edges().filter(|&(i, j)| inv.has_edge(i, j)).collect();
            assert!(common.iter().all(|&(i, j)| i == j));
            assert_eq!(common.len(), q);
        }
    }

    #[test]
    fn rejects_small_alphabets() {
        assert_eq!(ChannelGraph::z(1), Err(Error::AlphabetTooSmall(1)));
        assert!(ChannelGraph::inverse_z(0).is_err());
        assert!(ChannelGraph::gamma_star(1).is_err());
    }

    #[test]
    fn rejects_unknown_symbol_and_non_total_graphs() {
        let g = ChannelGraph::z(3).unwrap();
        assert_eq!(g.admissible_outputs(7), Err(Error::UnknownSymbol(7)));
        let a = Alphabet::new(2).unwrap();
        assert!(ChannelGraph::new(a, [0, 1], [0, 1], [(0, 0)]).is_err());
    }

    #[test]
    fn error_vectors() {
        let u = UnidirectionalChannel::z_pair(3).unwrap();
        assert!(u.check_error_vector(&[0, 1, 0, 2]));
        assert!(!u.check_error_vector(&[1, -1]));
        assert!(u.check_error_vector(&[0, 0, 0]));
        assert!(u.check_error_vector(&[-1, 0, -2]));
    }

    #[test]
    fn unidirectional_validation() {
        let z = ChannelGraph::z(3).unwrap();
        assert!(UnidirectionalChannel::new(z.clone(), z.clone()).is_err());
        let inv4 = ChannelGraph::inverse_z(4).unwrap();
        assert!(UnidirectionalChannel::new(inv4, z).is_err());
    }

    #[test]
    fn direction_commits_once() {
        let ch: Channel = UnidirectionalChannel::z_pair(3).unwrap().into();
        let d = ch.step(DirectionState::Undecided, 1, 1).unwrap();
        assert_eq!(d, DirectionState::Undecided);
        let d = ch.step(d, 1, 2).unwrap();
        assert_eq!(d, DirectionState::CommittedPositive);
        assert_eq!(ch.step(d, 1, 0), None);
        assert_eq!(ch.admissible_outputs(1, d).unwrap(), vec![1, 2]);
        assert_eq!(
            ch.admissible_outputs(1, DirectionState::Undecided).unwrap(),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn json_round_trip() {
        for g in [
            ChannelGraph::z(4).unwrap(),
            ChannelGraph::inverse_z(3).unwrap(),
            ChannelGraph::gamma_star(3).unwrap(),
        ] {
            let s = g.to_json();
            assert_eq!(ChannelGraph::from_json(&s).unwrap(), g);
        }
        let s = ChannelGraph::z(2).unwrap().to_json();
        assert_eq!(s, r#"{"q":2,"edges":[[0,0],[1,0],[1,1]]}"#);
        assert!(ChannelGraph::from_json(r#"{"q":2,"edges":[[0,0],[1,5]]}"#).is_err());
        let star = ChannelGraph::gamma_star(2).unwrap().to_json();
        assert!(star.contains(r#"["*","*"]"#));
    }
}
