//! Finite two-player perfect-information game trees.
//!
//! A [`RawTree`] is the unchecked description (it is also the on-disk game
//! format); [`validate_tree`] turns it into a [`GameTree`]. Validated trees
//! store their nodes in breadth-first order from the root, children visited
//! in declared action order, so every traversal over a tree is deterministic.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result, TreeError};
use crate::rational::Rational;

/// A player position. Serialized as the integer 1 or 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Seat {
    One,
    Two,
}

impl Seat {
    pub const BOTH: [Seat; 2] = [Seat::One, Seat::Two];

    /// 0 for seat 1, 1 for seat 2; indexes payoff pairs.
    pub fn index(self) -> usize {
        match self {
            Seat::One => 0,
            Seat::Two => 1,
        }
    }

    pub fn other(self) -> Seat {
        match self {
            Seat::One => Seat::Two,
            Seat::Two => Seat::One,
        }
    }

    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }

    pub fn from_number(n: u32) -> Result<Seat> {
        match n {
            1 => Ok(Seat::One),
            2 => Ok(Seat::Two),
            _ => Err(Error::InvalidSeat(n)),
        }
    }
}

impl fmt::Display for Seat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl Serialize for Seat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.number())
    }
}

impl<'de> Deserialize<'de> for Seat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let n = u32::deserialize(deserializer)?;
        Seat::from_number(n).map_err(serde::de::Error::custom)
    }
}

/// Exact payoffs indexed by [`Seat::index`].
pub type PayoffPair = [Rational; 2];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAction {
    pub label: String,
    pub child: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RawNode {
    Decision { owner: u8, actions: Vec<RawAction> },
    Terminal { payoffs: Vec<Rational> },
}

/// Unvalidated tree description, keyed by node id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTree {
    pub players: u32,
    pub root: String,
    pub nodes: BTreeMap<String, RawNode>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    pub label: String,
    pub child: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    Decision { owner: Seat, actions: Vec<Action> },
    Terminal { payoffs: PayoffPair },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: String,
    pub parent: Option<usize>,
    pub kind: NodeKind,
}

/// A validated game tree. Node 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameTree {
    nodes: Vec<Node>,
    index: HashMap<String, usize>,
}

impl GameTree {
    pub fn root(&self) -> usize {
        0
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, ix: usize) -> &Node {
        &self.nodes[ix]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn id(&self, ix: usize) -> &str {
        &self.nodes[ix].id
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn owner(&self, ix: usize) -> Option<Seat> {
        match &self.nodes[ix].kind {
            NodeKind::Decision { owner, .. } => Some(*owner),
            NodeKind::Terminal { .. } => None,
        }
    }

    /// Actions at a decision node; empty for terminals.
    pub fn actions(&self, ix: usize) -> &[Action] {
        match &self.nodes[ix].kind {
            NodeKind::Decision { actions, .. } => actions,
            NodeKind::Terminal { .. } => &[],
        }
    }

    pub fn payoffs(&self, ix: usize) -> Option<&PayoffPair> {
        match &self.nodes[ix].kind {
            NodeKind::Terminal { payoffs } => Some(payoffs),
            NodeKind::Decision { .. } => None,
        }
    }

    pub fn is_terminal(&self, ix: usize) -> bool {
        matches!(self.nodes[ix].kind, NodeKind::Terminal { .. })
    }

    pub fn decision_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&ix| !self.is_terminal(ix))
    }

    /// Decision nodes owned by `seat`, in canonical order.
    pub fn owned_nodes(&self, seat: Seat) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&ix| self.owner(ix) == Some(seat))
            .collect()
    }

    pub fn terminals(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&ix| self.is_terminal(ix))
    }

    /// Path of `(node, action index)` steps from the root down to `ix`.
    pub fn path_to(&self, ix: usize) -> Vec<(usize, usize)> {
        let mut path = Vec::new();
        let mut cur = ix;
        while let Some(parent) = self.nodes[cur].parent {
            let a = self
                .actions(parent)
                .iter()
                .position(|act| act.child == cur)
                .expect("parent lists child");
            path.push((parent, a));
            cur = parent;
        }
        path.reverse();
        path
    }

    pub fn to_raw(&self) -> RawTree {
        let nodes = self
            .nodes
            .iter()
            .map(|n| {
                let raw = match &n.kind {
                    NodeKind::Decision { owner, actions } => RawNode::Decision {
                        owner: owner.number(),
                        actions: actions
                            .iter()
                            .map(|a| RawAction {
                                label: a.label.clone(),
                                child: self.nodes[a.child].id.clone(),
                            })
                            .collect(),
                    },
                    NodeKind::Terminal { payoffs } => RawNode::Terminal {
                        payoffs: payoffs.to_vec(),
                    },
                };
                (n.id.clone(), raw)
            })
            .collect();
        RawTree {
            players: 2,
            root: self.nodes[0].id.clone(),
            nodes,
        }
    }

    /// Builds the canonical node table by breadth-first traversal from
    /// `root`. The caller guarantees the region below `root` is a tree.
    fn from_checked(raw: &RawTree, root: &str) -> GameTree {
        let mut nodes: Vec<Node> = Vec::new();
        let mut index = HashMap::new();
        let mut queue = VecDeque::from([(root.to_string(), None::<usize>)]);
        while let Some((id, parent)) = queue.pop_front() {
            let ix = nodes.len();
            index.insert(id.clone(), ix);
            let kind = match &raw.nodes[&id] {
                RawNode::Decision { owner, actions } => {
                    for a in actions {
                        queue.push_back((a.child.clone(), Some(ix)));
                    }
                    NodeKind::Decision {
                        owner: if *owner == 1 { Seat::One } else { Seat::Two },
                        // children are patched below once their indices are known
                        actions: actions
                            .iter()
                            .map(|a| Action { label: a.label.clone(), child: usize::MAX })
                            .collect(),
                    }
                }
                RawNode::Terminal { payoffs } => NodeKind::Terminal {
                    payoffs: [payoffs[0].clone(), payoffs[1].clone()],
                },
            };
            nodes.push(Node { id, parent, kind });
        }
        for node in nodes.iter_mut() {
            if let RawNode::Decision { actions: raw_actions, .. } = &raw.nodes[&node.id] {
                let children: Vec<usize> = raw_actions.iter().map(|a| index[&a.child]).collect();
                if let NodeKind::Decision { actions, .. } = &mut node.kind {
                    for (a, c) in actions.iter_mut().zip(children) {
                        a.child = c;
                    }
                }
            }
        }
        GameTree { nodes, index }
    }
}

/// Checks every structural invariant of `raw` and returns the tree in
/// canonical order.
pub fn validate_tree(raw: &RawTree) -> Result<GameTree, TreeError> {
    if raw.players != 2 {
        return Err(TreeError::PlayerCount(raw.players));
    }
    if raw.nodes.is_empty() {
        return Err(TreeError::Empty);
    }
    if !raw.nodes.contains_key(&raw.root) {
        return Err(TreeError::UnknownRoot(raw.root.clone()));
    }

    let mut parents: BTreeMap<&str, usize> = BTreeMap::new();
    for (id, node) in &raw.nodes {
        match node {
            RawNode::Decision { owner, actions } => {
                if *owner != 1 && *owner != 2 {
                    return Err(TreeError::InvalidOwner { node: id.clone(), owner: *owner });
                }
                if actions.is_empty() {
                    return Err(TreeError::NoActions(id.clone()));
                }
                for (i, a) in actions.iter().enumerate() {
                    if actions[..i].iter().any(|b| b.label == a.label) {
                        return Err(TreeError::DuplicateLabel {
                            node: id.clone(),
                            label: a.label.clone(),
                        });
                    }
                    if !raw.nodes.contains_key(&a.child) {
                        return Err(TreeError::UnknownChild {
                            node: id.clone(),
                            child: a.child.clone(),
                        });
                    }
                    *parents.entry(a.child.as_str()).or_default() += 1;
                }
            }
            RawNode::Terminal { payoffs } => {
                if payoffs.len() != 2 {
                    return Err(TreeError::PayoffCount {
                        node: id.clone(),
                        found: payoffs.len(),
                    });
                }
            }
        }
    }

    // Depth-first walk from the root; meeting a node already on the stack is
    // a cycle, meeting a finished node means it has a second parent.
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    let mut marks: HashMap<&str, Mark> = HashMap::new();
    let mut stack: Vec<(&str, usize)> = vec![(raw.root.as_str(), 0)];
    marks.insert(raw.root.as_str(), Mark::Open);
    while let Some((id, next)) = stack.pop() {
        let children: &[RawAction] = match &raw.nodes[id] {
            RawNode::Decision { actions, .. } => actions,
            RawNode::Terminal { .. } => &[],
        };
        if next == children.len() {
            marks.insert(id, Mark::Done);
            continue;
        }
        stack.push((id, next + 1));
        let child = children[next].child.as_str();
        match marks.get(child) {
            Some(Mark::Open) => return Err(TreeError::Cycle(child.to_string())),
            Some(Mark::Done) => return Err(TreeError::MultipleParents(child.to_string())),
            None => {
                marks.insert(child, Mark::Open);
                stack.push((child, 0));
            }
        }
    }

    for id in raw.nodes.keys() {
        if parents.get(id.as_str()).copied().unwrap_or(0) > 1 {
            return Err(TreeError::MultipleParents(id.clone()));
        }
    }
    for id in raw.nodes.keys() {
        if !marks.contains_key(id.as_str()) {
            return Err(if parents.contains_key(id.as_str()) {
                TreeError::Unreachable(id.clone())
            } else {
                TreeError::Orphan(id.clone())
            });
        }
    }

    Ok(GameTree::from_checked(raw, &raw.root))
}

impl TryFrom<RawTree> for GameTree {
    type Error = TreeError;

    fn try_from(raw: RawTree) -> Result<Self, TreeError> {
        validate_tree(&raw)
    }
}

impl Serialize for GameTree {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_raw().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GameTree {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawTree::deserialize(deserializer)?;
        validate_tree(&raw).map_err(serde::de::Error::custom)
    }
}

/// The subgame rooted at decision node `id`, with ids and payoffs unchanged.
pub fn subgame(tree: &GameTree, id: &str) -> Result<GameTree> {
    let ix = tree
        .index_of(id)
        .ok_or_else(|| Error::UnknownNode(id.to_string()))?;
    if tree.is_terminal(ix) {
        return Err(Error::TerminalNode(id.to_string()));
    }
    let mut raw = RawTree {
        players: 2,
        root: id.to_string(),
        nodes: BTreeMap::new(),
    };
    let full = tree.to_raw();
    let mut queue = VecDeque::from([ix]);
    while let Some(n) = queue.pop_front() {
        let nid = tree.id(n);
        raw.nodes.insert(nid.to_string(), full.nodes[nid].clone());
        queue.extend(tree.actions(n).iter().map(|a| a.child));
    }
    Ok(GameTree::from_checked(&raw, id))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decision(owner: u8, actions: &[(&str, &str)]) -> RawNode {
        RawNode::Decision {
            owner,
            actions: actions
                .iter()
                .map(|(l, c)| RawAction { label: l.to_string(), child: c.to_string() })
                .collect(),
        }
    }

    fn terminal(a: i64, b: i64) -> RawNode {
        RawNode::Terminal { payoffs: vec![a.into(), b.into()] }
    }

    fn raw(root: &str, nodes: Vec<(&str, RawNode)>) -> RawTree {
        RawTree {
            players: 2,
            root: root.to_string(),
            nodes: nodes.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        }
    }

    #[test]
    fn minimal_tree() {
        let t = validate_tree(&raw(
            "d1",
            vec![("d1", decision(1, &[("S", "t1")])), ("t1", terminal(2, 1))],
        ))
        .unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.decision_nodes().count(), 1);
        assert_eq!(t.payoffs(1).unwrap(), &[Rational::from(2), Rational::from(1)]);
    }

    #[test]
    fn self_loop_is_a_cycle() {
        let err = validate_tree(&raw("d1", vec![("d1", decision(1, &[("S", "d1")]))])).unwrap_err();
        assert_eq!(err, TreeError::Cycle("d1".into()));
    }

    #[test]
    fn longer_cycle() {
        let err = validate_tree(&raw(
            "a",
            vec![
                ("a", decision(1, &[("x", "b")])),
                ("b", decision(2, &[("y", "a")])),
            ],
        ))
        .unwrap_err();
        assert_eq!(err, TreeError::Cycle("a".into()));
    }

    #[test]
    fn structural_errors() {
        let shared = raw(
            "a",
            vec![
                ("a", decision(1, &[("x", "b"), ("y", "c")])),
                ("b", decision(2, &[("l", "t"), ("r", "t")])),
                ("c", terminal(0, 0)),
                ("t", terminal(0, 0)),
            ],
        );
        assert_eq!(validate_tree(&shared).unwrap_err(), TreeError::MultipleParents("t".into()));

        let orphan = raw(
            "a",
            vec![("a", decision(1, &[("x", "t")])), ("t", terminal(0, 0)), ("z", terminal(1, 1))],
        );
        assert_eq!(validate_tree(&orphan).unwrap_err(), TreeError::Orphan("z".into()));

        let island = raw(
            "a",
            vec![
                ("a", decision(1, &[("x", "t")])),
                ("t", terminal(0, 0)),
                ("p", decision(2, &[("x", "q")])),
                ("q", decision(1, &[("x", "p")])),
            ],
        );
        assert_eq!(validate_tree(&island).unwrap_err(), TreeError::Unreachable("p".into()));

        let empty_actions = raw("a", vec![("a", decision(1, &[]))]);
        assert_eq!(validate_tree(&empty_actions).unwrap_err(), TreeError::NoActions("a".into()));

        let dup = raw(
            "a",
            vec![
                ("a", decision(1, &[("x", "t"), ("x", "u")])),
                ("t", terminal(0, 0)),
                ("u", terminal(0, 0)),
            ],
        );
        assert!(matches!(validate_tree(&dup).unwrap_err(), TreeError::DuplicateLabel { .. }));

        let payoffs = raw(
            "a",
            vec![
                ("a", decision(1, &[("x", "t")])),
                ("t", RawNode::Terminal { payoffs: vec![1.into(), 2.into(), 3.into()] }),
            ],
        );
        assert_eq!(
            validate_tree(&payoffs).unwrap_err(),
            TreeError::PayoffCount { node: "t".into(), found: 3 }
        );

        let dangling = raw("a", vec![("a", decision(1, &[("x", "nowhere")]))]);
        assert!(matches!(validate_tree(&dangling).unwrap_err(), TreeError::UnknownChild { .. }));

        let owner = raw("a", vec![("a", decision(3, &[("x", "t")])), ("t", terminal(0, 0))]);
        assert!(matches!(validate_tree(&owner).unwrap_err(), TreeError::InvalidOwner { .. }));

        let mut three = raw("t", vec![("t", terminal(0, 0))]);
        three.players = 3;
        assert_eq!(validate_tree(&three).unwrap_err(), TreeError::PlayerCount(3));
    }

    #[test]
    fn canonical_order_is_breadth_first() {
        let t = validate_tree(&raw(
            "r",
            vec![
                ("r", decision(1, &[("a", "x"), ("b", "y")])),
                ("x", decision(2, &[("a", "x1"), ("b", "x2")])),
                ("y", terminal(0, 0)),
                ("x1", terminal(1, 0)),
                ("x2", terminal(0, 1)),
            ],
        ))
        .unwrap();
        let ids: Vec<&str> = t.nodes().iter().map(|n| n.id.as_str()).collect();
        assert_eq!(ids, ["r", "x", "y", "x1", "x2"]);
        assert_eq!(t.path_to(4), vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn subgame_errors() {
        let t = validate_tree(&raw(
            "d1",
            vec![("d1", decision(1, &[("S", "t1")])), ("t1", terminal(2, 1))],
        ))
        .unwrap();
        assert_eq!(subgame(&t, "t1").unwrap_err(), Error::TerminalNode("t1".into()));
        assert_eq!(subgame(&t, "zz").unwrap_err(), Error::UnknownNode("zz".into()));
        assert_eq!(subgame(&t, "d1").unwrap(), t);
    }
}
