//! Conflict graphs whose colorings merge primary classes.
//!
//! Primary classes of one word are keyed by a restricted vector `t` (binary)
//! or an agreement set `T` (ternary). Two classes may share a merged class
//! when their keys are far apart: binary keys need `d(t1, t2) > ω`, ternary
//! keys need `|T1 ∩ T2| < m - 3ω/2`. Joining every too-close pair by an edge
//! turns the merge into vertex coloring. Vertex ids equal primary class ids.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::combinatorics::binomial;
use crate::construct::{
    partition_primary_q2, partition_primary_q3, BaseArray, SymbolClassMap,
};
use crate::error::{Error, Result};
use crate::qvec::{subsets_colex, CellCap, IndexSet, QVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    /// Vertices are `[0,2)^(m-ω)` in enumeration order.
    Binary,
    /// Vertices are the `(m-ω)`-subsets of `[0,m)` in colex order.
    Ternary,
}

#[derive(Clone, Debug)]
pub struct ConflictGraph {
    kind: GraphKind,
    m: usize,
    omega: usize,
    adjacency: Vec<Vec<u32>>,
}

fn adjacency_of(n: usize, edge: impl Fn(usize, usize) -> bool + Sync) -> Vec<Vec<u32>> {
    (0..n)
        .into_par_iter()
        .map(|u| {
            (0..n)
                .filter(|&v| v != u && edge(u, v))
                .map(|v| v as u32)
                .collect()
        })
        .collect()
}

/// Binary conflict graph: `t1 ~ t2` iff `d(t1, t2) ≤ ω`. Needs `m ≥ 2ω+1`.
pub fn build_graph_q2(m: usize, omega: usize, cap: CellCap) -> Result<ConflictGraph> {
    if omega == 0 || m < 2 * omega + 1 {
        return Err(Error::Parameter(format!(
            "binary conflict graph needs 1 <= omega and m >= 2*omega+1, got m={m}, omega={omega}"
        )));
    }
    let width = m - omega;
    if width >= 32 {
        return Err(Error::SizeCap { needed: 1u128 << (2 * width).min(127), cap: cap.0 });
    }
    let n = 1usize << width;
    cap.check((n as u128) * (n as u128))?;
    let adjacency = adjacency_of(n, |u, v| ((u ^ v).count_ones() as usize) <= omega);
    Ok(ConflictGraph {
        kind: GraphKind::Binary,
        m,
        omega,
        adjacency,
    })
}

/// Ternary conflict graph: `T1 ~ T2` iff `|T1 ∩ T2| ≥ m - 3ω/2`. Needs `2m > 3ω`.
pub fn build_graph_q3(m: usize, omega: usize, cap: CellCap) -> Result<ConflictGraph> {
    if omega == 0 || omega >= m || 2 * m <= 3 * omega {
        return Err(Error::Parameter(format!(
            "ternary conflict graph needs 1 <= omega < m and 2m > 3*omega, got m={m}, omega={omega}"
        )));
    }
    let n128 = binomial(m as u64, (m - omega) as u64);
    let n = usize::try_from(&n128).map_err(|_| Error::SizeCap { needed: u128::MAX, cap: cap.0 })?;
    cap.check((n as u128) * (n as u128))?;
    let subsets = subsets_colex(m, m - omega)?;
    let threshold = 2 * m - 3 * omega;
    let adjacency = adjacency_of(n, |u, v| 2 * subsets[u].intersection_len(&subsets[v]) >= threshold);
    Ok(ConflictGraph {
        kind: GraphKind::Ternary,
        m,
        omega,
        adjacency,
    })
}

impl ConflictGraph {
    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn omega(&self) -> usize {
        self.omega
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// The word or subset behind vertex `v`, rendered for messages.
    pub fn vertex_name(&self, v: usize) -> String {
        match self.kind {
            GraphKind::Binary => QVec::from_index(2, self.m - self.omega, v as u64)
                .map(|t| t.to_string())
                .unwrap_or_else(|_| v.to_string()),
            GraphKind::Ternary => subsets_colex(self.m, self.m - self.omega)
                .ok()
                .and_then(|s| s.get(v).map(IndexSet::to_string))
                .unwrap_or_else(|| v.to_string()),
        }
    }

    /// The closed-form degree bound for this graph.
    pub fn degree_bound(&self) -> BigUint {
        match self.kind {
            GraphKind::Binary => degree_bound_q2(self.m, self.omega),
            GraphKind::Ternary => degree_bound_q3(self.m, self.omega),
        }
    }
}

/// A vertex coloring; colors are dense ids starting at 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<u32>,
    color_count: usize,
}

impl Coloring {
    /// Builds a coloring from explicit vertex classes; class `i` gets color `i`.
    pub fn from_classes(vertex_count: usize, classes: &[Vec<usize>]) -> Result<Self> {
        let mut colors = vec![u32::MAX; vertex_count];
        for (c, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::Partition(format!("class {c} is empty")));
            }
            for &v in class {
                match colors.get_mut(v) {
                    Some(slot) if *slot == u32::MAX => *slot = c as u32,
                    Some(_) => return Err(Error::Partition(format!("vertex {v} is in two classes"))),
                    None => return Err(Error::Partition(format!("vertex {v} out of range"))),
                }
            }
        }
        if let Some(v) = colors.iter().position(|&c| c == u32::MAX) {
            return Err(Error::Partition(format!("vertex {v} has no class")));
        }
        Ok(Self {
            colors,
            color_count: classes.len(),
        })
    }

    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn color_count(&self) -> usize {
        self.color_count
    }

    /// Vertices of each color.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.color_count];
        for (v, &c) in self.colors.iter().enumerate() {
            out[c as usize].push(v);
        }
        out
    }

    /// First edge whose ends share a color, if any.
    pub fn conflict(&self, g: &ConflictGraph) -> Option<(usize, usize)> {
        if self.colors.len() != g.vertex_count() {
            return Some((0, 0));
        }
        (0..g.vertex_count()).find_map(|u| {
            g.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .find(|&v| self.colors[u] == self.colors[v])
                .map(|v| (u, v))
        })
    }

    pub fn is_proper(&self, g: &ConflictGraph) -> bool {
        self.conflict(g).is_none()
    }
}

/// Colors vertices in id order, each with the smallest color not used by an
/// already colored neighbor.
pub fn greedy_color(g: &ConflictGraph) -> Coloring {
    greedy_color_adjacency(&g.adjacency)
}

fn greedy_color_adjacency(adjacency: &[Vec<u32>]) -> Coloring {
    let n = adjacency.len();
    let mut colors = vec![u32::MAX; n];
    let mut count = 0usize;
    let mut taken = Vec::new();
    for v in 0..n {
        taken.clear();
        taken.resize(count + 1, false);
        for &u in &adjacency[v] {
            let c = colors[u as usize];
            if c != u32::MAX {
                taken[c as usize] = true;
            }
        }
        let c = taken.iter().position(|&t| !t).unwrap();
        colors[v] = c as u32;
        count = count.max(c + 1);
    }
    Coloring {
        colors,
        color_count: count,
    }
}

/// Pairs every `t ∈ [0,2)^width` with its complement, numbering pairs in
/// order of first appearance. Proper for the binary graph whenever
/// `m ≥ 2ω+1`, since complements differ in all `m-ω > ω` places.
pub fn pair_complements(width: usize) -> Result<Coloring> {
    if width == 0 || width >= 32 {
        return Err(Error::Parameter(format!("complement pairing needs 1 <= width < 32, got {width}")));
    }
    let n = 1usize << width;
    let all = n - 1;
    let mut colors = vec![u32::MAX; n];
    let mut next = 0u32;
    for t in 0..n {
        if colors[t] == u32::MAX {
            colors[t] = next;
            colors[t ^ all] = next;
            next += 1;
        }
    }
    Ok(Coloring {
        colors,
        color_count: next as usize,
    })
}

/// The exact pairing for `m = 2ω+1`: `2^(m-ω-1)` classes.
pub fn complement_pairing(m: usize, omega: usize) -> Result<Coloring> {
    if omega == 0 || m != 2 * omega + 1 {
        return Err(Error::Parameter(format!(
            "complement pairing needs m = 2*omega+1, got m={m}, omega={omega}"
        )));
    }
    pair_complements(m - omega)
}

/// How the conflict graph is colored.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ColoringStrategy {
    /// Complement pairing for binary `m = 2ω+1`, greedy otherwise.
    #[default]
    Auto,
    Greedy,
    /// Complement pairing; binary only, any `m ≥ 2ω+1`.
    Complement,
}

impl ColoringStrategy {
    /// Builds the conflict graph for `(q, m, ω)` and colors it.
    pub fn color(self, q: u8, m: usize, omega: usize, cap: CellCap) -> Result<(ConflictGraph, Coloring)> {
        let graph = match q {
            2 => build_graph_q2(m, omega, cap)?,
            3 => build_graph_q3(m, omega, cap)?,
            _ => return Err(Error::UnsupportedAlphabet { q }),
        };
        let coloring = match (self, q) {
            (ColoringStrategy::Greedy, _) | (ColoringStrategy::Auto, 3) => greedy_color(&graph),
            (ColoringStrategy::Auto, _) if m != 2 * omega + 1 => greedy_color(&graph),
            (ColoringStrategy::Auto, _) => complement_pairing(m, omega)?,
            (ColoringStrategy::Complement, 2) => pair_complements(m - omega)?,
            (ColoringStrategy::Complement, _) => {
                return Err(Error::Parameter("complement pairing applies to q=2 only".into()))
            }
        };
        Ok((graph, coloring))
    }
}

/// Merges the primary classes of `base` by `coloring`. The graph must match
/// the base array's alphabet and parameters, and the coloring must be proper.
pub fn partition_improved(
    base: &BaseArray,
    graph: &ConflictGraph,
    coloring: &Coloring,
) -> Result<SymbolClassMap> {
    let primary = match (graph.kind(), base.q()) {
        (GraphKind::Binary, 2) => partition_primary_q2(base)?,
        (GraphKind::Ternary, 3) => partition_primary_q3(base)?,
        (_, q) => return Err(Error::UnsupportedAlphabet { q }),
    };
    if (graph.m(), graph.omega()) != (base.m(), base.omega()) {
        return Err(Error::Partition(format!(
            "graph built for (m,omega)=({},{}) but the array has ({},{})",
            graph.m(),
            graph.omega(),
            base.m(),
            base.omega()
        )));
    }
    if let Some((u, v)) = coloring.conflict(graph) {
        if coloring.colors().len() != graph.vertex_count() {
            return Err(Error::Partition(format!(
                "coloring covers {} vertices but the graph has {}",
                coloring.colors().len(),
                graph.vertex_count()
            )));
        }
        return Err(Error::Partition(format!(
            "coloring is not proper: adjacent vertices {} and {} share color {}",
            graph.vertex_name(u),
            graph.vertex_name(v),
            coloring.color(u)
        )));
    }
    Ok(primary.merge_classes(|c| coloring.color(c as usize)))
}

/// `Σ_{i=1}^{ω} C(m-ω, i)`.
pub fn degree_bound_q2(m: usize, omega: usize) -> BigUint {
    (1..=omega as u64).map(|i| binomial((m - omega) as u64, i)).sum()
}

/// `Σ_{i=⌈m-3ω/2⌉}^{m-ω-1} C(m-ω, i)·C(ω, m-ω-i)`.
pub fn degree_bound_q3(m: usize, omega: usize) -> BigUint {
    let lo = (m as i64 - (3 * omega as i64) / 2).max(0) as u64;
    let w = (m - omega) as u64;
    (lo..w)
        .map(|i| binomial(w, i) * binomial(omega as u64, w - i))
        .sum()
}

/// Upper bound on the symbol count of the improved binary array:
/// `C(m,ω)·Σ_{i=0}^{ω} C(m-ω, i)`.
pub fn improved_bound_q2(m: usize, omega: usize) -> BigUint {
    let sum: BigUint = (0..=omega as u64).map(|i| binomial((m - omega) as u64, i)).sum();
    binomial(m as u64, omega as u64) * sum
}

/// Upper bound on the symbol count of the improved ternary array:
/// `3^m·(1 + Σ_{i=⌈m-3ω/2⌉}^{m-ω-1} C(m-ω, i)·C(ω, m-ω-i))`.
pub fn improved_bound_q3(m: usize, omega: usize) -> BigUint {
    BigUint::from(3u8).pow(m as u32) * (BigUint::from(1u8) + degree_bound_q3(m, omega))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Smallest `k` admitting a proper coloring, by exhaustive search.
    fn chromatic_number(adjacency: &[Vec<u32>]) -> usize {
        let n = adjacency.len();
        assert!(n <= 12);
        fn extend(adj: &[Vec<u32>], colors: &mut Vec<usize>, k: usize) -> bool {
            let v = colors.len();
            if v == adj.len() {
                return true;
            }
            for c in 0..k {
                if adj[v].iter().all(|&u| (u as usize) >= v || colors[u as usize] != c) {
                    colors.push(c);
                    if extend(adj, colors, k) {
                        return true;
                    }
                    colors.pop();
                }
            }
            false
        }
        (1..=n.max(1)).find(|&k| extend(adjacency, &mut Vec::new(), k)).unwrap()
    }

    #[test]
    fn binary_graph_shapes() {
        let g = build_graph_q2(4, 1, CellCap::DEFAULT).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.max_degree(), 3);
        assert_eq!(g.degree_bound(), BigUint::from(3u8));

        let g = build_graph_q2(3, 1, CellCap::DEFAULT).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert!((0..4).all(|v| g.degree(v) == 2));

        assert!(matches!(build_graph_q2(4, 2, CellCap::DEFAULT), Err(Error::Parameter(_))));
    }

    #[test]
    fn ternary_graph_shapes() {
        let g = build_graph_q3(4, 2, CellCap::DEFAULT).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.max_degree(), 4);
        assert_eq!(g.degree_bound(), BigUint::from(4u8));
        assert_eq!(chromatic_number(&g.adjacency), 3);
        let greedy = greedy_color(&g);
        assert!(greedy.is_proper(&g));
        assert_eq!(greedy.color_count(), 3);
        assert!(matches!(build_graph_q3(4, 3, CellCap::DEFAULT), Err(Error::Parameter(_))));
    }

    #[test]
    fn degree_bounds_hold() {
        for m in 3..=10 {
            for omega in 1..=(m - 1) / 2 {
                let g = build_graph_q2(m, omega, CellCap::DEFAULT).unwrap();
                assert!(BigUint::from(g.max_degree()) <= g.degree_bound());
                let c = greedy_color(&g);
                assert!(c.is_proper(&g));
                assert!(c.color_count() <= 1 + g.max_degree());
            }
        }
        for m in 2..=8 {
            for omega in 1..m {
                if 2 * m > 3 * omega {
                    let g = build_graph_q3(m, omega, CellCap::DEFAULT).unwrap();
                    assert!(BigUint::from(g.max_degree()) <= g.degree_bound(), "({m},{omega})");
                    let c = greedy_color(&g);
                    assert!(c.is_proper(&g));
                    assert!(c.color_count() <= 1 + g.max_degree());
                }
            }
        }
    }

    #[test]
    fn greedy_on_extremes() {
        let empty = vec![Vec::new(); 5];
        assert_eq!(greedy_color_adjacency(&empty).color_count(), 1);
        let complete: Vec<Vec<u32>> = (0..5u32)
            .map(|u| (0..5).filter(|&v| v != u).collect())
            .collect();
        assert_eq!(greedy_color_adjacency(&complete).color_count(), 5);
        assert_eq!(chromatic_number(&complete), 5);
    }

    #[test]
    fn greedy_against_exhaustive_on_small_graphs() {
        let g = build_graph_q2(4, 1, CellCap::DEFAULT).unwrap();
        // The graph is a 3-cube: bipartite.
        assert_eq!(chromatic_number(&g.adjacency), 2);
        assert_eq!(greedy_color(&g).color_count(), 2);
    }

    #[test]
    fn complement_pairs() {
        let c = complement_pairing(3, 1).unwrap();
        assert_eq!(c.classes(), vec![vec![0, 3], vec![1, 2]]);
        assert_eq!(complement_pairing(5, 2).unwrap().color_count(), 4);
        assert!(matches!(complement_pairing(4, 1), Err(Error::Parameter(_))));
        let g = build_graph_q2(7, 3, CellCap::DEFAULT).unwrap();
        let c = complement_pairing(7, 3).unwrap();
        assert!(c.is_proper(&g));
        for class in c.classes() {
            assert_eq!((class[0] ^ class[1]).count_ones(), 4);
        }
        // Four pairs on [0,2)^3, in first-appearance order.
        let d = pair_complements(3).unwrap();
        assert_eq!(d.classes(), vec![vec![0, 7], vec![1, 6], vec![2, 5], vec![3, 4]]);
    }

    #[test]
    fn from_classes_validates() {
        assert!(Coloring::from_classes(3, &[vec![0, 1], vec![2]]).is_ok());
        assert!(Coloring::from_classes(3, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(Coloring::from_classes(3, &[vec![0, 1]]).is_err());
        assert!(Coloring::from_classes(2, &[vec![0, 5]]).is_err());
    }

    #[test]
    fn bounds_values() {
        // C(4,1)·(C(3,0)+C(3,1)) = 16
        assert_eq!(improved_bound_q2(4, 1), BigUint::from(16u8));
        // 81·(1+4)
        assert_eq!(improved_bound_q3(4, 2), BigUint::from(405u16));
    }
}
