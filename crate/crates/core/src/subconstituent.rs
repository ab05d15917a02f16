//! The subgraph induced on `Γ_i(x)`, its product structure
//! `J(D,i) × J(N−D,i)`, and its components after removing one edge type.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::bases::BasisFamily;
use crate::combinatorics::{binomial_u64, distance, ElementSet, GroundParams, Vertex, VertexOrder};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EdgeKind {
    /// `y∖x = z∖x`: the edge moves inside `x`, as in `J(D,i)`.
    FromLeft,
    /// `x∖y = x∖z`: the edge moves outside `x`, as in `J(N−D,i)`.
    FromRight,
}

#[derive(Debug, Clone)]
pub struct SubconstituentGraph {
    pub params: GroundParams,
    pub base: Vertex,
    pub i: usize,
    pub vertices: Vec<Vertex>,
    /// Position of each vertex in the global vertex order.
    pub positions: Vec<usize>,
    /// `(a, b, kind)` with `a < b` indexing `vertices`.
    pub edges: Vec<(usize, usize, EdgeKind)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    /// Indices into the graph's vertex list, one block per component, in
    /// discovery order.
    pub blocks: Vec<Vec<usize>>,
    /// The common value of `y ∩ x` (or `y∖x` for the swapped variant) on
    /// each block.
    pub labels: Vec<ElementSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentSummary {
    pub i: usize,
    pub num_components: usize,
    pub component_size: usize,
    pub alpha_labels: Vec<String>,
}

pub fn subconstituent_graph(
    p: &GroundParams,
    order: &VertexOrder,
    x: &Vertex,
    i: usize,
) -> Result<SubconstituentGraph> {
    if i > p.d() {
        return Err(Error::Index(format!("Γ_{i}(x) with D = {}", p.d())));
    }
    let (positions, vertices): (Vec<usize>, Vec<Vertex>) = order
        .iter()
        .enumerate()
        .filter(|(_, y)| distance(x, y) == i)
        .map(|(k, y)| (k, y.clone()))
        .unzip();
    let mut edges = Vec::new();
    for a in 0..vertices.len() {
        for b in a + 1..vertices.len() {
            let (y, z) = (&vertices[a], &vertices[b]);
            if distance(y, z) != 1 {
                continue;
            }
            let inside = x.set().difference(y.set()) == x.set().difference(z.set());
            let outside = y.set().difference(x.set()) == z.set().difference(x.set());
            let kind = match (inside, outside) {
                (true, false) => EdgeKind::FromRight,
                (false, true) => EdgeKind::FromLeft,
                _ => {
                    return Err(Error::Verification(format!(
                        "edge {y}~{z} in Γ_{i}(x) is not exactly one of the two types"
                    )))
                }
            };
            edges.push((a, b, kind));
        }
    }
    Ok(SubconstituentGraph {
        params: *p,
        base: x.clone(),
        i,
        vertices,
        positions,
        edges,
    })
}

impl SubconstituentGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.len()];
        for &(a, b, _) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    fn adjacency_without(&self, removed: Option<EdgeKind>) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for &(a, b, k) in &self.edges {
            if Some(k) != removed {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        adj
    }
}

/// `y ↦ (x∖y, y∖x)`, checked to be a bijection onto
/// `(x choose i) × ((Ω∖x) choose i)` that preserves adjacency both ways.
pub fn product_isomorphism(g: &SubconstituentGraph) -> Result<Vec<(ElementSet, ElementSet)>> {
    let (n, d, i) = (g.params.n() as u64, g.params.d() as u64, g.i);
    let x = g.base.set();
    let image: Vec<(ElementSet, ElementSet)> = g
        .vertices
        .iter()
        .map(|y| (x.difference(y.set()), y.set().difference(x)))
        .collect();
    let fail = |m: String| Err(Error::Verification(m));
    let target = binomial_u64(d, i as i64) * binomial_u64(n - d, i as i64);
    let distinct: HashSet<&(ElementSet, ElementSet)> = image.iter().collect();
    if distinct.len() != image.len() || image.len() as u64 != target {
        return fail(format!(
            "y ↦ (x∖y, y∖x) hits {} of {target} pairs from {} vertices",
            distinct.len(),
            image.len()
        ));
    }
    if image.iter().any(|(l, r)| l.len() != i || r.len() != i || !l.is_subset(x) || r.intersection_len(x) != 0) {
        return fail("image pair outside (x choose i) × ((Ω∖x) choose i)".into());
    }
    let edges: HashSet<(usize, usize)> = g.edges.iter().map(|&(a, b, _)| (a, b)).collect();
    for a in 0..image.len() {
        for b in a + 1..image.len() {
            let (la, ra) = &image[a];
            let (lb, rb) = &image[b];
            let product_adjacent = (la == lb && ra.intersection_len(rb) + 1 == i)
                || (ra == rb && la.intersection_len(lb) + 1 == i);
            if product_adjacent != edges.contains(&(a, b)) {
                return fail(format!(
                    "adjacency of {} and {} not preserved by the product map",
                    g.vertices[a], g.vertices[b]
                ));
            }
        }
    }
    Ok(image)
}

fn bfs_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; adj.len()];
    let mut blocks = Vec::new();
    for start in 0..adj.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut block = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    block.push(v);
                    queue.push_back(v);
                }
            }
        }
        block.sort_unstable();
        blocks.push(block);
    }
    blocks
}

/// Components after deleting edges of `removed`, certified against the
/// product structure: with `FromLeft` removed each block is
/// `{y : y ∩ x = α}` with `|α| = D−i` and `y ↦ y∖x` is an isomorphism onto
/// `J(N−D,i)`; with `FromRight` removed the roles of `x` and `Ω∖x` swap.
pub fn components_without(g: &SubconstituentGraph, removed: EdgeKind) -> Result<ComponentPartition> {
    let (n, d, i) = (g.params.n(), g.params.d(), g.i);
    let x = g.base.set();
    let adj = g.adjacency_without(Some(removed));
    let blocks = bfs_components(&adj);
    let fail = |m: String| Err(Error::Verification(m));

    // label: what stays fixed on a block; coord: the coordinate that varies
    let label = |y: &Vertex| match removed {
        EdgeKind::FromLeft => y.set().intersection(x),
        EdgeKind::FromRight => y.set().difference(x),
    };
    let coord = |y: &Vertex| match removed {
        EdgeKind::FromLeft => y.set().difference(x),
        EdgeKind::FromRight => x.difference(y.set()),
    };
    let (outer, inner) = match removed {
        EdgeKind::FromLeft => (d, n - d),
        EdgeKind::FromRight => (n - d, d),
    };
    let count = binomial_u64(outer as u64, i as i64) as usize;
    let size = binomial_u64(inner as u64, i as i64) as usize;
    let label_size = match removed {
        EdgeKind::FromLeft => d - i,
        EdgeKind::FromRight => i,
    };
    if blocks.len() != count {
        return fail(format!("{} components in Γ_{i}(x), expected {count}", blocks.len()));
    }

    let mut labels = Vec::with_capacity(blocks.len());
    let mut seen_labels = HashSet::new();
    for block in &blocks {
        if block.len() != size {
            return fail(format!("component of size {} in Γ_{i}(x), expected {size}", block.len()));
        }
        let l = label(&g.vertices[block[0]]);
        if l.len() != label_size || block.iter().any(|&u| label(&g.vertices[u]) != l) {
            return fail(format!("component of Γ_{i}(x) has no common label of size {label_size}"));
        }
        if !seen_labels.insert(l.clone()) {
            return fail(format!("label {l} appears on two components"));
        }
        let local: HashMap<usize, usize> = block.iter().enumerate().map(|(k, &u)| (u, k)).collect();
        let coords: Vec<ElementSet> = block.iter().map(|&u| coord(&g.vertices[u])).collect();
        let distinct: HashSet<&ElementSet> = coords.iter().collect();
        if distinct.len() != size || coords.iter().any(|c| c.len() != i) {
            return fail(format!("restricted map on component {l} is not a bijection onto i-sets"));
        }
        let valency = i * (inner - i);
        for &u in block {
            if adj[u].len() != valency {
                return fail(format!("vertex {} has degree {} in its component, expected {valency}", g.vertices[u], adj[u].len()));
            }
            let nbrs: HashSet<usize> = adj[u].iter().copied().collect();
            for &v in block {
                let want = coords[local[&u]].intersection_len(&coords[local[&v]]) + 1 == i;
                if u != v && want != nbrs.contains(&v) {
                    return fail(format!(
                        "restricted map does not preserve adjacency of {} and {}",
                        g.vertices[u], g.vertices[v]
                    ));
                }
            }
        }
        labels.push(l);
    }
    Ok(ComponentPartition { blocks, labels })
}

/// Components after removing the edges that come from `J(D,i)`.
pub fn components_after_removal(g: &SubconstituentGraph) -> Result<ComponentPartition> {
    components_without(g, EdgeKind::FromLeft)
}

/// Components after removing the edges that come from `J(N−D,i)`.
pub fn components_after_swapped_removal(g: &SubconstituentGraph) -> Result<ComponentPartition> {
    components_without(g, EdgeKind::FromRight)
}

/// The characteristic vectors of the components are exactly the
/// `α^𝒩` with `|α| = D−i`, as multisets.
pub fn components_match_alpha_nuc(
    cp: &ComponentPartition,
    g: &SubconstituentGraph,
    bf: &BasisFamily,
) -> bool {
    let n = bf.nuc_vectors.first().map_or(0, Vec::len);
    let mut from_components: Vec<Vec<Rational>> = cp
        .blocks
        .iter()
        .map(|block| {
            let mut v = vec![Rational::zero(); n];
            for &u in block {
                v[g.positions[u]] = Rational::one();
            }
            v
        })
        .collect();
    let mut from_alpha: Vec<Vec<Rational>> = bf
        .of_size(g.params.d() - g.i)
        .into_iter()
        .map(|k| bf.nuc_vectors[k].clone())
        .collect();
    from_components.sort();
    from_alpha.sort();
    from_components == from_alpha
}

impl ComponentPartition {
    pub fn summary(&self, i: usize) -> ComponentSummary {
        ComponentSummary {
            i,
            num_components: self.blocks.len(),
            component_size: self.blocks.first().map_or(0, Vec::len),
            alpha_labels: self.labels.iter().map(ToString::to_string).collect(),
        }
    }
}
