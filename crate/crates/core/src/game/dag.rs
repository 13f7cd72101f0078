//! Games defined by an explicit position graph.
//!
//! Text format, one directive per line (`#` starts a comment):
//!
//! ```text
//! dag-game v1
//! node root
//! node win alice_wins
//! node loss bob_wins
//! edge root alice take win
//! edge root bob take loss
//! ```
//!
//! The first declared node is the initial position. A node without an
//! outcome is `ongoing`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{Game, GameError, Move, Outcome, Player};

const HEADER: &str = "dag-game v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

#[derive(Clone, Copy, Debug, Default)]
pub struct DagOptions {
    /// Accept non-terminal nodes where a player has no move. The stuck
    /// player loses if they win the bid.
    pub allow_stuck: bool,
}

#[derive(Clone, Debug)]
struct Node {
    id: String,
    outcome: Outcome,
    /// Per player, sorted by label.
    edges: [Vec<(String, NodeId)>; 2],
}

#[derive(Clone, Debug)]
pub struct DagGame {
    name: String,
    nodes: Vec<Node>,
    index: HashMap<String, NodeId>,
}

fn slot(p: Player) -> usize {
    match p {
        Player::Alice => 0,
        Player::Bob => 1,
    }
}

impl DagGame {
    pub fn parse(text: &str, options: DagOptions) -> Result<Self, GameError> {
        Self::parse_named("dag", text, options)
    }

    pub fn load(path: &Path, options: DagOptions) -> Result<Self, GameError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GameError::Io(format!("{}: {e}", path.display())))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dag".to_string());
        Self::parse_named(&name, &text, options)
    }

    pub fn parse_named(name: &str, text: &str, options: DagOptions) -> Result<Self, GameError> {
        let mut nodes: Vec<Node> = Vec::new();
        let mut index: HashMap<String, NodeId> = HashMap::new();
        let mut raw_edges: Vec<(usize, String, Player, String, String)> = Vec::new();
        let mut seen_header = false;

        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let err = |msg: String| GameError::Definition { line: line_no, msg };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if !seen_header {
                if line != HEADER {
                    return Err(err(format!("expected header `{HEADER}`")));
                }
                seen_header = true;
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens.as_slice() {
                ["node", id, rest @ ..] => {
                    let outcome = match rest {
                        [] => Outcome::Ongoing,
                        [o] => o.parse().map_err(|_| err(format!("unknown outcome `{o}`")))?,
                        _ => return Err(err("too many fields for node".into())),
                    };
                    if index.contains_key(*id) {
                        return Err(err(format!("duplicate node `{id}`")));
                    }
                    index.insert(id.to_string(), NodeId(nodes.len() as u32));
                    nodes.push(Node {
                        id: id.to_string(),
                        outcome,
                        edges: [Vec::new(), Vec::new()],
                    });
                }
                ["edge", from, player, label, to] => {
                    let player: Player = match *player {
                        "alice" => Player::Alice,
                        "bob" => Player::Bob,
                        other => return Err(err(format!("unknown player `{other}`"))),
                    };
                    if *label == "-" {
                        return Err(err("`-` is reserved and cannot be a move label".into()));
                    }
                    raw_edges.push((line_no, from.to_string(), player, label.to_string(), to.to_string()));
                }
                ["edge", ..] => return Err(err("edge needs: edge <from> <player> <label> <to>".into())),
                [directive, ..] => return Err(err(format!("unknown directive `{directive}`"))),
                [] => unreachable!(),
            }
        }
        if !seen_header {
            return Err(GameError::Invalid(format!("missing header `{HEADER}`")));
        }
        if nodes.is_empty() {
            return Err(GameError::Invalid("no nodes declared".into()));
        }

        for (line, from, player, label, to) in raw_edges {
            let err = |msg: String| GameError::Definition { line, msg };
            let from_id = *index
                .get(&from)
                .ok_or_else(|| err(format!("unknown node `{from}`")))?;
            let to_id = *index
                .get(&to)
                .ok_or_else(|| err(format!("unknown node `{to}`")))?;
            let node = &mut nodes[from_id.0 as usize];
            if node.outcome.is_terminal() {
                return Err(err(format!("terminal node `{from}` cannot have moves")));
            }
            let list = &mut node.edges[slot(player)];
            if list.iter().any(|(l, _)| l == &label) {
                return Err(err(format!("duplicate {player} move `{label}` at `{from}`")));
            }
            list.push((label, to_id));
        }

        for node in &mut nodes {
            for list in &mut node.edges {
                list.sort_by(|a, b| a.0.cmp(&b.0));
            }
            if node.outcome == Outcome::Ongoing && !options.allow_stuck {
                for p in Player::BOTH {
                    if node.edges[slot(p)].is_empty() {
                        return Err(GameError::Invalid(format!(
                            "non-terminal node `{}` has no move for {p}",
                            node.id
                        )));
                    }
                }
            }
        }

        let game = DagGame {
            name: name.to_string(),
            nodes,
            index,
        };
        game.check_acyclic()?;
        Ok(game)
    }

    /// Rejects any cycle in the whole graph, reachable or not.
    fn check_acyclic(&self) -> Result<(), GameError> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.nodes.len()];
        for start in 0..self.nodes.len() {
            if state[start] != 0 {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
            state[start] = 1;
            while let Some((node, next)) = stack.last_mut() {
                let n = &self.nodes[*node];
                let total = n.edges[0].len() + n.edges[1].len();
                if *next == total {
                    state[*node] = 2;
                    stack.pop();
                    continue;
                }
                let k = *next;
                *next += 1;
                let child = if k < n.edges[0].len() {
                    n.edges[0][k].1
                } else {
                    n.edges[1][k - n.edges[0].len()].1
                }
                .0 as usize;
                match state[child] {
                    1 => return Err(GameError::Cycle(self.nodes[child].id.clone())),
                    0 => {
                        state[child] = 1;
                        stack.push((child, 0));
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: &str) -> Option<NodeId> {
        self.index.get(id).copied()
    }

    pub fn node_name(&self, id: NodeId) -> &str {
        &self.nodes[id.0 as usize].id
    }

    /// The same graph with the players' roles exchanged: move lists swap
    /// owners and Alice/Bob wins swap.
    pub fn mirrored(&self) -> DagGame {
        let mut out = self.clone();
        for node in &mut out.nodes {
            node.edges.swap(0, 1);
            node.outcome = match node.outcome {
                Outcome::AliceWins => Outcome::BobWins,
                Outcome::BobWins => Outcome::AliceWins,
                o => o,
            };
        }
        out.name = format!("{}-mirrored", self.name);
        out
    }

    /// Serializes back to the text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("{HEADER}\n");
        for node in &self.nodes {
            match node.outcome {
                Outcome::Ongoing => writeln!(out, "node {}", node.id),
                o => writeln!(out, "node {} {o}", node.id),
            }
            .expect("write to string");
        }
        for node in &self.nodes {
            for p in Player::BOTH {
                for (label, to) in &node.edges[slot(p)] {
                    writeln!(out, "edge {} {p} {label} {}", node.id, self.node_name(*to))
                        .expect("write to string");
                }
            }
        }
        out
    }
}

impl Game for DagGame {
    type Position = NodeId;

    fn id(&self) -> String {
        format!("dag:{}", self.name)
    }

    fn initial(&self) -> NodeId {
        NodeId(0)
    }

    fn outcome(&self, pos: &NodeId) -> Outcome {
        self.nodes[pos.0 as usize].outcome
    }

    fn legal_moves(&self, pos: &NodeId, player: Player) -> Vec<Move<NodeId>> {
        self.nodes[pos.0 as usize].edges[slot(player)]
            .iter()
            .map(|(label, to)| Move {
                label: label.clone(),
                to: *to,
            })
            .collect()
    }

    fn successors(&self, pos: &NodeId, player: Player) -> Vec<NodeId> {
        self.nodes[pos.0 as usize].edges[slot(player)]
            .iter()
            .map(|(_, to)| *to)
            .collect()
    }

    fn encode(&self, pos: &NodeId) -> String {
        format!("dag:{}", self.node_name(*pos))
    }

    fn decode(&self, s: &str) -> Result<NodeId, GameError> {
        s.strip_prefix("dag:")
            .and_then(|id| self.node(id))
            .ok_or_else(|| GameError::Encoding(s.to_string()))
    }
}
