//! Infinite locally-finite graphs with vertices packed into 64-bit ids.
//!
//! Neighbor order is fixed per kind and is part of the reproducibility
//! contract, since jump instructions store a neighbor *index*:
//!
//! | kind          | order                                              |
//! |---------------|----------------------------------------------------|
//! | `line`        | `x-1, x+1`                                         |
//! | `grid2d`      | `(x-1,y), (x+1,y), (x,y-1), (x,y+1)`               |
//! | `tree r=R`    | root: children `0..R`; others: parent, then children `0..R-1` |
//! | `cycle n=N`   | `x-1 mod N, x+1 mod N`                             |
//! | `path n=N`    | `x-1, x+1`, dropping whichever is off the end       |
//!
//! Encodings: `line` stores the `i64` coordinate's two's-complement bits,
//! `grid2d` packs `(x as u32) << 32 | (y as u32)`, trees number vertices
//! breadth-first (root 0, then level by level, children in order), and the
//! finite test graphs use the index `0..N`. The origin is id 0 everywhere.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ArwError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Topology {
    Line,
    Grid2d,
    Tree { arity: u32 },
    Cycle { len: u64 },
    Path { len: u64 },
}

impl Topology {
    pub fn tree(arity: u32) -> Result<Self> {
        if arity < 2 {
            return Err(ArwError::InvalidTopology(format!(
                "tree arity must be at least 2, got {arity}"
            )));
        }
        Ok(Topology::Tree { arity })
    }

    pub fn cycle(len: u64) -> Result<Self> {
        if len < 3 {
            return Err(ArwError::InvalidTopology(format!(
                "cycle needs at least 3 vertices, got {len}"
            )));
        }
        Ok(Topology::Cycle { len })
    }

    pub fn path(len: u64) -> Result<Self> {
        if len < 2 {
            return Err(ArwError::InvalidTopology(format!(
                "path needs at least 2 vertices, got {len}"
            )));
        }
        Ok(Topology::Path { len })
    }

    pub fn origin(&self) -> VertexId {
        VertexId(0)
    }

    /// Vertex-transitive kinds have constant degree.
    pub fn is_vertex_transitive(&self) -> bool {
        !matches!(self, Topology::Path { .. })
    }

    pub fn line_vertex(x: i64) -> VertexId {
        VertexId(x as u64)
    }

    pub fn grid_vertex(x: i32, y: i32) -> VertexId {
        VertexId(((x as u32 as u64) << 32) | (y as u32 as u64))
    }

    pub fn line_coord(v: VertexId) -> i64 {
        v.0 as i64
    }

    pub fn grid_coords(v: VertexId) -> (i32, i32) {
        ((v.0 >> 32) as u32 as i32, v.0 as u32 as i32)
    }

    fn invalid(&self, v: VertexId) -> ArwError {
        ArwError::InvalidVertex {
            topology: self.to_string(),
            vertex: v,
        }
    }

    pub fn validate(&self, v: VertexId) -> Result<()> {
        match *self {
            Topology::Line | Topology::Grid2d => Ok(()),
            Topology::Tree { arity } => TreeIndex::decode(arity, v).map(|_| ()).ok_or_else(|| self.invalid(v)),
            Topology::Cycle { len } | Topology::Path { len } => {
                if v.0 < len {
                    Ok(())
                } else {
                    Err(self.invalid(v))
                }
            }
        }
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        match *self {
            Topology::Line | Topology::Cycle { .. } => {
                self.validate(v)?;
                Ok(2)
            }
            Topology::Grid2d => Ok(4),
            Topology::Tree { arity } => {
                self.validate(v)?;
                Ok(arity as usize)
            }
            Topology::Path { len } => {
                self.validate(v)?;
                Ok(if v.0 == 0 || v.0 == len - 1 { 1 } else { 2 })
            }
        }
    }

    /// The `index`-th neighbor of `v` in the documented order.
    pub fn neighbor(&self, v: VertexId, index: usize) -> Result<VertexId> {
        let d = self.degree(v)?;
        if index >= d {
            return Err(ArwError::InvalidArgument(format!(
                "neighbor index {index} out of range for degree {d}"
            )));
        }
        let overflow = || ArwError::OutOfRange(self.to_string());
        match *self {
            Topology::Line => {
                let x = Self::line_coord(v);
                let y = if index == 0 { x.checked_sub(1) } else { x.checked_add(1) };
                y.map(Self::line_vertex).ok_or_else(overflow)
            }
            Topology::Grid2d => {
                let (x, y) = Self::grid_coords(v);
                let (nx, ny) = match index {
                    0 => (x.checked_sub(1), Some(y)),
                    1 => (x.checked_add(1), Some(y)),
                    2 => (Some(x), y.checked_sub(1)),
                    _ => (Some(x), y.checked_add(1)),
                };
                match (nx, ny) {
                    (Some(a), Some(b)) => Ok(Self::grid_vertex(a, b)),
                    _ => Err(overflow()),
                }
            }
            Topology::Tree { arity } => {
                let t = TreeIndex::decode(arity, v).ok_or_else(|| self.invalid(v))?;
                let n = if t.depth == 0 {
                    t.child(arity, index as u64)
                } else if index == 0 {
                    t.parent(arity)
                } else {
                    t.child(arity, index as u64 - 1)
                };
                n.and_then(|n| n.encode(arity)).ok_or_else(overflow)
            }
            Topology::Cycle { len } => {
                let x = v.0;
                Ok(VertexId(if index == 0 { (x + len - 1) % len } else { (x + 1) % len }))
            }
            Topology::Path { len } => {
                let x = v.0;
                if x == 0 {
                    Ok(VertexId(1))
                } else if x == len - 1 {
                    Ok(VertexId(x - 1))
                } else {
                    Ok(VertexId(if index == 0 { x - 1 } else { x + 1 }))
                }
            }
        }
    }

    pub fn neighbors(&self, v: VertexId) -> Result<Vec<VertexId>> {
        let d = self.degree(v)?;
        (0..d).map(|i| self.neighbor(v, i)).collect()
    }

    pub fn distance(&self, a: VertexId, b: VertexId) -> Result<u64> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(match *self {
            Topology::Line => Self::line_coord(a).abs_diff(Self::line_coord(b)),
            Topology::Grid2d => {
                let (ax, ay) = Self::grid_coords(a);
                let (bx, by) = Self::grid_coords(b);
                ax.abs_diff(bx) as u64 + ay.abs_diff(by) as u64
            }
            Topology::Tree { arity } => {
                let mut s = TreeIndex::decode(arity, a).ok_or_else(|| self.invalid(a))?;
                let mut t = TreeIndex::decode(arity, b).ok_or_else(|| self.invalid(b))?;
                let mut d = 0;
                while s.depth > t.depth {
                    s = s.parent(arity).expect("non-root has a parent");
                    d += 1;
                }
                while t.depth > s.depth {
                    t = t.parent(arity).expect("non-root has a parent");
                    d += 1;
                }
                while s != t {
                    s = s.parent(arity).expect("non-root has a parent");
                    t = t.parent(arity).expect("non-root has a parent");
                    d += 2;
                }
                d
            }
            Topology::Cycle { len } => {
                let diff = a.0.abs_diff(b.0);
                diff.min(len - diff)
            }
            Topology::Path { .. } => a.0.abs_diff(b.0),
        })
    }

    /// Vertices within graph distance `radius` of `center`, in breadth-first
    /// order (neighbor order breaks ties).
    pub fn ball(&self, center: VertexId, radius: u32) -> Result<Vec<VertexId>> {
        self.validate(center)?;
        let mut seen = HashSet::from([center]);
        let mut out = vec![center];
        let mut queue = VecDeque::from([(center, 0u32)]);
        while let Some((v, d)) = queue.pop_front() {
            if d == radius {
                continue;
            }
            for w in self.neighbors(v)? {
                if seen.insert(w) {
                    out.push(w);
                    queue.push_back((w, d + 1));
                }
            }
        }
        Ok(out)
    }

    /// Human-readable vertex label used by the text formats and CLI output.
    pub fn format_vertex(&self, v: VertexId) -> String {
        match self {
            Topology::Line => Self::line_coord(v).to_string(),
            Topology::Grid2d => {
                let (x, y) = Self::grid_coords(v);
                format!("{x},{y}")
            }
            _ => v.0.to_string(),
        }
    }

    pub fn parse_vertex(&self, s: &str) -> Result<VertexId> {
        let bad = || ArwError::InvalidArgument(format!("cannot parse vertex `{s}` for {self}"));
        let v = match self {
            Topology::Line => Self::line_vertex(s.trim().parse().map_err(|_| bad())?),
            Topology::Grid2d => {
                let (x, y) = s.split_once(',').ok_or_else(bad)?;
                Self::grid_vertex(
                    x.trim().parse().map_err(|_| bad())?,
                    y.trim().parse().map_err(|_| bad())?,
                )
            }
            _ => VertexId(s.trim().parse().map_err(|_| bad())?),
        };
        self.validate(v)?;
        Ok(v)
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::Line => write!(f, "line"),
            Topology::Grid2d => write!(f, "grid2d"),
            Topology::Tree { arity } => write!(f, "tree r={arity}"),
            Topology::Cycle { len } => write!(f, "cycle n={len}"),
            Topology::Path { len } => write!(f, "path n={len}"),
        }
    }
}

impl FromStr for Topology {
    type Err = ArwError;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let kind = parts.next().unwrap_or("");
        let param = |key: &str, parts: &mut std::str::SplitWhitespace<'_>| -> Result<u64> {
            let p = parts
                .next()
                .ok_or_else(|| ArwError::InvalidTopology(format!("`{kind}` needs `{key}=<n>`")))?;
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| ArwError::InvalidTopology(format!("malformed parameter `{p}`")))?;
            if k != key {
                return Err(ArwError::InvalidTopology(format!("unknown parameter `{k}` for `{kind}`")));
            }
            v.parse()
                .map_err(|_| ArwError::InvalidTopology(format!("`{v}` is not an integer")))
        };
        let t = match kind {
            "line" => Topology::Line,
            "grid2d" => Topology::Grid2d,
            "tree" => Topology::tree(u32::try_from(param("r", &mut parts)?).map_err(|_| {
                ArwError::InvalidTopology("tree arity too large".into())
            })?)?,
            "cycle" => Topology::cycle(param("n", &mut parts)?)?,
            "path" => Topology::path(param("n", &mut parts)?)?,
            other => return Err(ArwError::InvalidTopology(format!("unknown kind `{other}`"))),
        };
        if let Some(extra) = parts.next() {
            return Err(ArwError::InvalidTopology(format!("unexpected `{extra}`")));
        }
        Ok(t)
    }
}

impl TryFrom<String> for Topology {
    type Error = ArwError;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Topology> for String {
    fn from(t: Topology) -> String {
        t.to_string()
    }
}

/// Breadth-first coordinates of a regular-tree vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct TreeIndex {
    depth: u32,
    index: u64,
}

impl TreeIndex {
    fn level_size(arity: u32, depth: u32) -> Option<u64> {
        if depth == 0 {
            return Some(1);
        }
        (arity as u64).checked_mul((arity as u64 - 1).checked_pow(depth - 1)?)
    }

    fn decode(arity: u32, v: VertexId) -> Option<TreeIndex> {
        let mut rest = v.0;
        let mut depth = 0;
        loop {
            match Self::level_size(arity, depth) {
                Some(size) if rest >= size => {
                    rest -= size;
                    depth += 1;
                }
                // The last level that fits in u64 is only partially addressable.
                _ => return Some(TreeIndex { depth, index: rest }),
            }
        }
    }

    fn encode(&self, arity: u32) -> Option<VertexId> {
        let mut offset = 0u64;
        for d in 0..self.depth {
            offset = offset.checked_add(Self::level_size(arity, d)?)?;
        }
        if self.index >= Self::level_size(arity, self.depth)? {
            return None;
        }
        offset.checked_add(self.index).map(VertexId)
    }

    fn parent(&self, arity: u32) -> Option<TreeIndex> {
        match self.depth {
            0 => None,
            1 => Some(TreeIndex { depth: 0, index: 0 }),
            d => Some(TreeIndex {
                depth: d - 1,
                index: self.index / (arity as u64 - 1),
            }),
        }
    }

    fn child(&self, arity: u32, c: u64) -> Option<TreeIndex> {
        let index = if self.depth == 0 {
            c
        } else {
            self.index.checked_mul(arity as u64 - 1)?.checked_add(c)?
        };
        Some(TreeIndex {
            depth: self.depth + 1,
            index,
        })
    }
}
