use std::fmt;

use serde::{Deserialize, Serialize};

use crate::mesh::{EdgeId, IntrinsicMesh, VertexId};

/// One letter of a crossing word: a vertex passed through, an edge crossed
/// transversally, or an edge travelled along.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "id")]
pub enum Letter {
    V(VertexId),
    Cross(EdgeId),
    Follow(EdgeId),
}

impl Letter {
    pub fn vertex(&self) -> Option<VertexId> {
        match *self {
            Letter::V(v) => Some(v),
            _ => None,
        }
    }

    pub fn edge(&self) -> Option<EdgeId> {
        match *self {
            Letter::Cross(e) | Letter::Follow(e) => Some(e),
            Letter::V(_) => None,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::V(v) => write!(f, "V{v}"),
            Letter::Cross(e) => write!(f, "X{e}"),
            Letter::Follow(e) => write!(f, "F{e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("bad letter `{0}`")]
    BadLetter(String),
    #[error("no edge joins vertices {0} and {1}")]
    NoSuchEdge(usize, usize),
    #[error("edge between {0} and {1} is not unique")]
    AmbiguousEdge(usize, usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("edge {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("empty word")]
    Empty,
}

/// Parses a word such as `V0 X1-2 F5`. Letters are `V<vertex>`, `X<edge>`
/// for a crossing and `F<edge>` for a followed edge; an edge may also be
/// written as `<a>-<b>` by its endpoints. Separators are whitespace or commas.
pub fn parse_word(mesh: &IntrinsicMesh, text: &str) -> Result<Vec<Letter>, WordError> {
    let mut out = Vec::new();
    for tok in text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
        let bad = || WordError::BadLetter(tok.to_string());
        let (kind, rest) = tok.split_at(1);
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
        let edge = |s: &str| -> Result<EdgeId, WordError> {
            if let Some((a, b)) = s.split_once('-') {
                let (a, b) = (num(a)?, num(b)?);
                if a >= mesh.num_vertices() {
                    return Err(WordError::VertexOutOfRange(a));
                }
                if b >= mesh.num_vertices() {
                    return Err(WordError::VertexOutOfRange(b));
                }
                let count = mesh
                    .edges()
                    .iter()
                    .filter(|e| (e.v[0] == a && e.v[1] == b) || (e.v[0] == b && e.v[1] == a))
                    .count();
                match count {
                    0 => Err(WordError::NoSuchEdge(a, b)),
                    1 => Ok(mesh.edge_between(a, b).unwrap()),
                    _ => Err(WordError::AmbiguousEdge(a, b)),
                }
            } else {
                let e = num(s)?;
                if e >= mesh.num_edges() {
                    return Err(WordError::EdgeOutOfRange(e));
                }
                Ok(e)
            }
        };
        let letter = match kind.to_ascii_uppercase().as_str() {
            "V" => {
                let v = num(rest)?;
                if v >= mesh.num_vertices() {
                    return Err(WordError::VertexOutOfRange(v));
                }
                Letter::V(v)
            }
            "X" => Letter::Cross(edge(rest)?),
            "F" => Letter::Follow(edge(rest)?),
            _ => return Err(bad()),
        };
        out.push(letter);
    }
    if out.is_empty() {
        return Err(WordError::Empty);
    }
    Ok(out)
}

pub fn format_word(word: &[Letter]) -> String {
    word.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

/// Least rotation of the word or of its reversal.
pub fn canonical_word(word: &[Letter]) -> Vec<Letter> {
    let n = word.len();
    let mut best: Option<Vec<Letter>> = None;
    let mut rev = word.to_vec();
    rev.reverse();
    for w in [word.to_vec(), rev] {
        for r in 0..n {
            let mut c = w.clone();
            c.rotate_left(r);
            if best.as_ref().map_or(true, |b| c < *b) {
                best = Some(c);
            }
        }
    }
    best.unwrap_or_default()
}
