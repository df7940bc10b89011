//! The interlacement graph of a colored representative, plus its per-graph
//! statistics: components, isolated vertices binned by half-length, degree
//! histogram, and arc span counts.
//!
//! Vertices are numbered per side in left-endpoint order (all top arcs
//! first, then all bottom arcs), which makes worked examples line up with
//! their figures. Vertex ids are 0-based in the API and 1-based in JSON.

use crate::sampler::ColoredRepresentative;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("span bounds must satisfy 1 <= alpha <= beta (got {alpha}..={beta})")]
    BadSpanRange { alpha: usize, beta: usize },
    #[error("arcs must cover each of the points 1..=2n exactly once (point {point})")]
    BadArcCover { point: usize },
    #[error("arcs {first:?} and {second:?} on the same side cross")]
    SameSideCrossing {
        first: (usize, usize),
        second: (usize, usize),
    },
    #[error("stored edge list disagrees with the interlacement of the arcs")]
    EdgeListMismatch,
}

/// Which matching an arc-vertex came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Top,
    Bottom,
}

/// Edge-detection algorithm choice. The quadratic scan is the reference;
/// the sweep is an optimization that must produce the identical edge set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeAlgorithm {
    Quadratic,
    Sweep,
}

/// An interlacement graph on `n` arc-vertices. Two arcs are adjacent iff
/// their endpoints alternate, which can only happen across sides, so the
/// graph is bipartite by construction of the representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalanPairGraph {
    sides: Vec<Side>,
    arcs: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl CatalanPairGraph {
    /// Vertex count `n`.
    pub fn n(&self) -> usize {
        self.sides.len()
    }

    pub fn side(&self, v: usize) -> Side {
        self.sides[v]
    }

    /// Endpoint pair `(a, b)`, `a < b`, of vertex `v`'s arc.
    pub fn arc(&self, v: usize) -> (usize, usize) {
        self.arcs[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// All edges as vertex pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n() {
            for &v in &self.adjacency[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Vertex whose arc is exactly `(a, b)`, if present.
    pub fn vertex_by_arc(&self, arc: (usize, usize)) -> Option<usize> {
        self.arcs.iter().position(|&x| x == arc)
    }

    /// Builds a graph from explicit sides and arcs, recomputing adjacency.
    /// The arcs must partition `1..=2n` and each side must be non-crossing.
    pub fn from_parts(sides: Vec<Side>, arcs: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        assert_eq!(sides.len(), arcs.len());
        let n = sides.len();
        let mut seen = vec![false; 2 * n + 1];
        for &(a, b) in &arcs {
            for p in [a, b] {
                if p < 1 || p > 2 * n || seen[p] {
                    return Err(GraphError::BadArcCover { point: p });
                }
                seen[p] = true;
            }
            if a >= b {
                return Err(GraphError::BadArcCover { point: a });
            }
        }
        for side in [Side::Top, Side::Bottom] {
            let mine: Vec<(usize, usize)> = (0..n)
                .filter(|&v| sides[v] == side)
                .map(|v| arcs[v])
                .collect();
            for (i, &(a1, b1)) in mine.iter().enumerate() {
                for &(a2, b2) in &mine[i + 1..] {
                    if interlaces((a1, b1), (a2, b2)) {
                        return Err(GraphError::SameSideCrossing {
                            first: (a1, b1),
                            second: (a2, b2),
                        });
                    }
                }
            }
        }
        let adjacency = adjacency_quadratic(&sides, &arcs);
        Ok(Self {
            sides,
            arcs,
            adjacency,
        })
    }
}

/// Arcs `(a, b)` and `(c, d)` alternate: `a < c < b < d` or `c < a < d < b`.
pub fn interlaces(x: (usize, usize), y: (usize, usize)) -> bool {
    let (a, b) = x;
    let (c, d) = y;
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

/// Builds the interlacement graph of a representative with the reference
/// (quadratic) edge detection.
pub fn build_graph(rep: &ColoredRepresentative) -> CatalanPairGraph {
    build_graph_with(rep, EdgeAlgorithm::Quadratic)
}

pub fn build_graph_with(rep: &ColoredRepresentative, algo: EdgeAlgorithm) -> CatalanPairGraph {
    let top_arcs = rep.top_point_arcs();
    let bottom_arcs = rep.bottom_point_arcs();
    let mut sides = vec![Side::Top; top_arcs.len()];
    sides.extend(vec![Side::Bottom; bottom_arcs.len()]);
    let mut arcs = top_arcs;
    arcs.extend(bottom_arcs);
    let adjacency = match algo {
        EdgeAlgorithm::Quadratic => adjacency_quadratic(&sides, &arcs),
        EdgeAlgorithm::Sweep => adjacency_sweep(&sides, &arcs),
    };
    CatalanPairGraph {
        sides,
        arcs,
        adjacency,
    }
}

/// Checks every top x bottom pair. Same-side pairs never alternate, so they
/// are skipped outright.
fn adjacency_quadratic(sides: &[Side], arcs: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let n = sides.len();
    let mut adjacency = vec![Vec::new(); n];
    for u in 0..n {
        if sides[u] != Side::Top {
            continue;
        }
        for v in 0..n {
            if sides[v] != Side::Bottom {
                continue;
            }
            if interlaces(arcs[u], arcs[v]) {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    adjacency
}

/// Sweep over the points; when an arc closes, every arc still open that
/// opened strictly inside it interlaces with it. Each interlacing pair is
/// reported exactly once, at the earlier of the two close events.
fn adjacency_sweep(sides: &[Side], arcs: &[(usize, usize)]) -> Vec<Vec<usize>> {
    use std::collections::BTreeSet;
    let n = sides.len();
    let mut events = vec![usize::MAX; 2 * n + 1]; // point -> vertex
    for (v, &(a, b)) in arcs.iter().enumerate() {
        events[a] = v;
        events[b] = v;
    }
    let mut open: BTreeSet<(usize, usize)> = BTreeSet::new(); // (left endpoint, vertex)
    let mut adjacency = vec![Vec::new(); n];
    for p in 1..=2 * n {
        let v = events[p];
        debug_assert_ne!(v, usize::MAX, "every point is an arc endpoint");
        let (a, b) = arcs[v];
        if p == a {
            open.insert((a, v));
        } else {
            open.remove(&(a, v));
            // Open arcs with left endpoint in (a, b) are still running at b,
            // so they alternate with (a, b).
            for &(_, w) in open.range((a + 1, 0)..(b, 0)) {
                debug_assert_ne!(sides[v], sides[w], "same-side arcs never interlace");
                adjacency[v].push(w);
                adjacency[w].push(v);
            }
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    adjacency
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            self.parent[root] = self.parent[self.parent[root]];
            root = self.parent[root];
        }
        root
    }

    fn union(&mut self, x: usize, y: usize) {
        let (mut a, mut b) = (self.find(x), self.find(y));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// Connected component sizes, largest first. They sum to `n`.
pub fn components(g: &CatalanPairGraph) -> Vec<usize> {
    let mut uf = UnionFind::new(g.n());
    for (u, v) in g.edges() {
        uf.union(u, v);
    }
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for v in 0..g.n() {
        let root = uf.find(v);
        *sizes.entry(root).or_insert(0) += 1;
    }
    let mut out: Vec<usize> = sizes.into_values().collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    debug_assert_eq!(out.iter().sum::<usize>(), g.n());
    out
}

/// Isolated-vertex count together with its breakdown by arc half-length:
/// an isolated vertex with endpoints `(a, b)` lands in bin `m = (b-a+1)/2`.
pub fn isolated_stats(g: &CatalanPairGraph) -> (usize, BTreeMap<usize, usize>) {
    let mut by_half_length = BTreeMap::new();
    let mut total = 0;
    for v in 0..g.n() {
        if g.degree(v) == 0 {
            let (a, b) = g.arc(v);
            debug_assert_eq!((b - a + 1) % 2, 0, "isolated arcs enclose even gaps");
            *by_half_length.entry((b - a + 1) / 2).or_insert(0) += 1;
            total += 1;
        }
    }
    debug_assert_eq!(by_half_length.values().sum::<usize>(), total);
    (total, by_half_length)
}

/// Number of arcs (either side) whose span `b - a` lies in `alpha..=beta`.
pub fn arc_span_counts(
    g: &CatalanPairGraph,
    alpha: usize,
    beta: usize,
) -> Result<usize, GraphError> {
    if alpha < 1 || alpha > beta {
        return Err(GraphError::BadSpanRange { alpha, beta });
    }
    Ok((0..g.n())
        .filter(|&v| {
            let (a, b) = g.arc(v);
            (alpha..=beta).contains(&(b - a))
        })
        .count())
}

/// Map degree -> number of vertices with that degree.
pub fn degree_histogram(g: &CatalanPairGraph) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for v in 0..g.n() {
        *hist.entry(g.degree(v)).or_insert(0) += 1;
    }
    debug_assert_eq!(hist.values().sum::<usize>(), g.n());
    debug_assert_eq!(
        hist.iter().map(|(d, c)| d * c).sum::<usize>(),
        2 * g.edge_count()
    );
    hist
}

/// Serialized graph form: sides as a `T`/`B` string, arcs as point pairs,
/// edges as 1-based vertex pairs.
#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    sides: String,
    arcs: Vec<(usize, usize)>,
    edges: Vec<(usize, usize)>,
}

impl Serialize for CatalanPairGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let json = GraphJson {
            n: self.n(),
            sides: self
                .sides
                .iter()
                .map(|s| if *s == Side::Top { 'T' } else { 'B' })
                .collect(),
            arcs: self.arcs.clone(),
            edges: self.edges().iter().map(|&(u, v)| (u + 1, v + 1)).collect(),
        };
        json.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CatalanPairGraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let json = GraphJson::deserialize(deserializer)?;
        if json.sides.len() != json.n || json.arcs.len() != json.n {
            return Err(D::Error::custom("sides/arcs do not match n"));
        }
        let sides: Vec<Side> = json
            .sides
            .chars()
            .map(|c| match c {
                'T' => Ok(Side::Top),
                'B' => Ok(Side::Bottom),
                _ => Err(D::Error::custom("sides must be a string of T/B")),
            })
            .collect::<Result<_, _>>()?;
        let graph = CatalanPairGraph::from_parts(sides, json.arcs).map_err(D::Error::custom)?;
        let stored: Vec<(usize, usize)> = json
            .edges
            .iter()
            .map(|&(u, v)| (u.min(v) - 1, u.max(v) - 1))
            .collect();
        let mut stored_sorted = stored;
        stored_sorted.sort_unstable();
        if stored_sorted != graph.edges() {
            return Err(D::Error::custom(GraphError::EdgeListMismatch));
        }
        Ok(graph)
    }
}
