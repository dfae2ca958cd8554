//! Iterated relations on finite discrete spaces.
//!
//! On a finite set with the discrete topology every subset is closed and
//! open, and the smallest closed neighbourhood of a relation is the relation
//! itself. The neighbourhood-based notions then reduce to graph notions:
//!
//! * chain recurrent nodes are the nodes on directed cycles (self-loops
//!   included);
//! * transitive components are the strongly connected components that
//!   contain a cycle;
//! * `ω(C)` is the limit of the decreasing sequence `F(n) = ⋃_{m≥n} rᵐ(C)`.

mod symbolic;

use std::collections::BTreeSet;
use std::fmt::Display;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::error::RelationError;

pub use symbolic::{
    build_embedded_relation, build_itinerary_relation, core_attractor, middle_words, ItineraryConley,
};

pub type NodeSet = BTreeSet<usize>;

/// A relation `r ⊆ X × X` on a finite labelled node set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRelation<L> {
    labels: Vec<L>,
    succ: Vec<Vec<usize>>,
}

fn to_mask(n: usize, set: &NodeSet) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &i in set {
        mask[i] = true;
    }
    mask
}

fn from_mask(mask: &[bool]) -> NodeSet {
    mask.iter()
        .enumerate()
        .filter_map(|(i, m)| m.then_some(i))
        .collect()
}

impl<L: Clone> FiniteRelation<L> {
    pub fn new(
        labels: Vec<L>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, RelationError> {
        let n = labels.len();
        let mut succ = vec![Vec::new(); n];
        for (x, y) in edges {
            if x >= n || y >= n {
                return Err(RelationError::InvalidNode(x, y, n));
            }
            succ[x].push(y);
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        Ok(FiniteRelation { labels, succ })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn successors(&self, x: usize) -> &[usize] {
        &self.succ[x]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().map(move |&y| (x, y)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn all_nodes(&self) -> NodeSet {
        (0..self.len()).collect()
    }

    /// The relabelled copy with the same edges.
    pub fn map_labels<M: Clone>(&self, f: impl Fn(usize, &L) -> M) -> FiniteRelation<M> {
        FiniteRelation {
            labels: self.labels.iter().enumerate().map(|(i, l)| f(i, l)).collect(),
            succ: self.succ.clone(),
        }
    }

    fn image_mask(&self, mask: &[bool]) -> Vec<bool> {
        let mut out = vec![false; self.len()];
        for (x, _) in mask.iter().enumerate().filter(|(_, m)| **m) {
            for &y in &self.succ[x] {
                out[y] = true;
            }
        }
        out
    }

    /// `r(C) = {y : (x, y) ∈ r for some x ∈ C}`.
    pub fn image(&self, set: &NodeSet) -> NodeSet {
        from_mask(&self.image_mask(&to_mask(self.len(), set)))
    }

    /// `{(x, z) : (x, y) ∈ self, (y, z) ∈ other}`.
    pub fn compose(&self, other: &FiniteRelation<L>) -> Result<FiniteRelation<L>, RelationError> {
        if self.len() != other.len() {
            return Err(RelationError::SizeMismatch(self.len(), other.len()));
        }
        let edges = self.edges().into_iter().flat_map(|(x, y)| {
            other.succ[y].iter().map(move |&z| (x, z))
        });
        let edges: Vec<_> = edges.collect();
        FiniteRelation::new(self.labels.clone(), edges)
    }

    /// `r⁰ = X × X`, `r¹ = r`, `r^{k+1} = r ∘ rᵏ`.
    ///
    /// Composition follows `r ∘ s = {(x, z) : (x, y) ∈ r, (y, z) ∈ s}`; the
    /// recursion starts from `r¹ = r` since `r ∘ (X × X)` is `dom(r) × X`.
    pub fn iterate(&self, k: usize) -> FiniteRelation<L> {
        if k == 0 {
            let n = self.len();
            return FiniteRelation::new(
                self.labels.clone(),
                (0..n).flat_map(|x| (0..n).map(move |y| (x, y))),
            )
            .expect("complete relation is valid");
        }
        let mut power = self.clone();
        for _ in 1..k {
            power = self.compose(&power).expect("same node set");
        }
        power
    }

    /// `r* = {(y, x) : (x, y) ∈ r}`.
    pub fn transpose(&self) -> FiniteRelation<L> {
        FiniteRelation::new(
            self.labels.clone(),
            self.edges().into_iter().map(|(x, y)| (y, x)),
        )
        .expect("transpose of a valid relation")
    }

    fn hull_mask(&self, mut mask: Vec<bool>) -> Vec<bool> {
        let mut stack: Vec<usize> = from_mask(&mask).into_iter().collect();
        while let Some(x) = stack.pop() {
            for &y in &self.succ[x] {
                if !mask[y] {
                    mask[y] = true;
                    stack.push(y);
                }
            }
        }
        mask
    }

    /// Smallest superset of `C` closed under the image.
    pub fn forward_hull(&self, set: &NodeSet) -> NodeSet {
        from_mask(&self.hull_mask(to_mask(self.len(), set)))
    }

    /// `ω(C)`: start from the forward hull of `C` and apply the image until
    /// the (decreasing) sequence stabilises.
    pub fn omega_limit(&self, set: &NodeSet) -> NodeSet {
        let mut current = self.hull_mask(to_mask(self.len(), set));
        loop {
            let next = self.image_mask(&current);
            if next == current {
                return from_mask(&current);
            }
            current = next;
        }
    }

    /// `ω(X)`.
    pub fn maximal_attractor(&self) -> NodeSet {
        self.omega_limit(&self.all_nodes())
    }

    fn sccs(&self) -> Vec<Vec<usize>> {
        let mut graph = DiGraph::<(), ()>::with_capacity(self.len(), self.edge_count());
        let nodes: Vec<_> = (0..self.len()).map(|_| graph.add_node(())).collect();
        for (x, y) in self.edges() {
            graph.add_edge(nodes[x], nodes[y], ());
        }
        tarjan_scc(&graph)
            .into_iter()
            .map(|c| c.into_iter().map(|n| n.index()).collect())
            .collect()
    }

    fn is_cyclic(&self, component: &[usize]) -> bool {
        component.len() > 1 || self.succ[component[0]].binary_search(&component[0]).is_ok()
    }

    /// Strongly connected components that carry a cycle, ordered by their
    /// smallest node.
    pub fn transitive_components(&self) -> Vec<NodeSet> {
        let mut out: Vec<NodeSet> = self
            .sccs()
            .into_iter()
            .filter(|c| self.is_cyclic(c))
            .map(|c| c.into_iter().collect())
            .collect();
        out.sort_by_key(|c: &NodeSet| c.iter().next().copied());
        out
    }

    /// Nodes on directed cycles.
    pub fn chain_recurrent(&self) -> NodeSet {
        self.transitive_components().into_iter().flatten().collect()
    }

    /// Basin `{x : ω({x}) ⊆ A}` and dual repeller `X \ basin` of an
    /// invariant set `A`.
    ///
    /// Because `r(A) = A`, `ω({x}) ⊆ A` exactly when every cycle node
    /// reachable from `x` lies in `A`. The dual repeller is checked to be
    /// its own `ω`-limit under the transpose relation.
    pub fn basin_and_dual(&self, attractor: &NodeSet) -> Result<(NodeSet, NodeSet), RelationError> {
        if self.image(attractor) != *attractor {
            return Err(RelationError::NotInvariant);
        }
        let n = self.len();
        let outside_cycles: NodeSet = self
            .chain_recurrent()
            .difference(attractor)
            .copied()
            .collect();
        let transpose = self.transpose();
        let dual_mask = transpose.hull_mask(to_mask(n, &outside_cycles));
        let dual = from_mask(&dual_mask);
        let basin: NodeSet = (0..n).filter(|i| !dual_mask[*i]).collect();
        if transpose.omega_limit(&dual) != dual {
            return Err(RelationError::DualMismatch);
        }
        Ok((basin, dual))
    }

    /// Attractor / repeller decomposition relative to `attractor`.
    pub fn conley_report(&self, attractor: &NodeSet) -> Result<ConleyReport, RelationError> {
        let (basin, dual_repeller) = self.basin_and_dual(attractor)?;
        let transitive_components = self.transitive_components();
        let chain_recurrent = transitive_components.iter().flatten().copied().collect();
        let connecting = (0..self.len())
            .filter(|i| !attractor.contains(i) && !dual_repeller.contains(i))
            .collect();
        Ok(ConleyReport {
            maximal_attractor: self.maximal_attractor(),
            chain_recurrent,
            transitive_components,
            attractor: attractor.clone(),
            basin,
            dual_repeller,
            connecting,
        })
    }
}

impl<L: Clone + Display> FiniteRelation<L> {
    /// `{"nodes": [...], "edges": [[i, j], ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "nodes": self.labels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            "edges": self.edges().into_iter().map(|(x, y)| [x, y]).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConleyReport {
    pub maximal_attractor: NodeSet,
    pub chain_recurrent: NodeSet,
    pub transitive_components: Vec<NodeSet>,
    pub attractor: NodeSet,
    pub basin: NodeSet,
    pub dual_repeller: NodeSet,
    /// `X \ (A ∪ A*)`.
    pub connecting: NodeSet,
}

impl ConleyReport {
    /// Same report with node indices replaced by labels.
    pub fn labeled<L: Clone + Display>(&self, relation: &FiniteRelation<L>) -> serde_json::Value {
        let names = |set: &NodeSet| -> Vec<String> {
            set.iter().map(|&i| relation.labels()[i].to_string()).collect()
        };
        serde_json::json!({
            "maximal_attractor": names(&self.maximal_attractor),
            "chain_recurrent": names(&self.chain_recurrent),
            "transitive_components": self.transitive_components.iter().map(names).collect::<Vec<_>>(),
            "attractor": names(&self.attractor),
            "basin": names(&self.basin),
            "dual_repeller": names(&self.dual_repeller),
            "connecting": names(&self.connecting),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[usize]) -> NodeSet {
        items.iter().copied().collect()
    }

    // nodes a = 0, b = 1, c = 2
    fn path() -> FiniteRelation<char> {
        FiniteRelation::new(vec!['a', 'b', 'c'], [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn image_and_iterate_on_a_path() {
        let r = path();
        assert_eq!(r.image(&set(&[0])), set(&[1]));
        assert_eq!(r.iterate(2).edges(), vec![(0, 2)]);
        assert_eq!(r.image(&set(&[2])), set(&[]));
        assert_eq!(r.iterate(0).edge_count(), 9);
        assert_eq!(r.iterate(1), r);
    }

    #[test]
    fn omega_limits() {
        let cycle = FiniteRelation::new(vec![0, 1, 2], [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(cycle.omega_limit(&set(&[1])), set(&[0, 1, 2]));
        let single = FiniteRelation::new(vec!['a', 'b'], [(0, 1)]).unwrap();
        assert_eq!(single.omega_limit(&set(&[0])), set(&[]));
        assert_eq!(path().maximal_attractor(), set(&[]));
    }

    #[test]
    fn chain_recurrence_and_components() {
        let r = FiniteRelation::new(vec!['a', 'b', 'c'], [(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(r.chain_recurrent(), set(&[0, 1]));
        assert_eq!(r.transitive_components(), vec![set(&[0, 1])]);
        let two = FiniteRelation::new(vec![0; 4], [(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap();
        assert_eq!(two.transitive_components(), vec![set(&[0, 1]), set(&[2, 3])]);
        let looped = FiniteRelation::new(vec![0; 2], [(0, 0), (0, 1)]).unwrap();
        assert_eq!(looped.chain_recurrent(), set(&[0]));
    }

    #[test]
    fn basin_of_whole_cycle() {
        let cycle = FiniteRelation::new(vec![0, 1, 2], [(0, 1), (1, 2), (2, 0)]).unwrap();
        let (basin, dual) = cycle.basin_and_dual(&cycle.all_nodes()).unwrap();
        assert_eq!(basin, cycle.all_nodes());
        assert!(dual.is_empty());
    }

    #[test]
    fn basin_rejects_non_invariant_set() {
        assert_eq!(
            path().basin_and_dual(&set(&[0])).unwrap_err(),
            RelationError::NotInvariant
        );
    }

    #[test]
    fn invalid_edges_are_rejected() {
        assert!(FiniteRelation::new(vec![(); 2], [(0, 2)]).is_err());
    }

    #[test]
    fn json_shape() {
        let json = path().to_json();
        assert_eq!(json["nodes"], serde_json::json!(["a", "b", "c"]));
        assert_eq!(json["edges"], serde_json::json!([[0, 1], [1, 2]]));
    }
}
