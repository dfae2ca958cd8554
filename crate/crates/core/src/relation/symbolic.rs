//! Depth-k truncations of the itinerary relation.
//!
//! Nodes are the `2ᵏ` words of length `k` in lexicographic order, so node
//! `i` is `Word::from_bits(i, k)`. The edge `u → d·u|ₖ₋₁` is present when
//! `u ⪯ α|ₖ` (for `d = 0`) or `u ⪰ β|ₖ` (for `d = 1`); an edge is thus a
//! window `d·u` of length `k + 1` whose tail passes the test at its first
//! digit. Every infinite sequence of the relation passes, so this is an
//! outer approximation. Testing only `u|ₖ₋₁` would also be outer, but it
//! lets periodic words just outside `[β, α]` close into cycles.
//!
//! With this orientation the image of a set of words is one step of the
//! prepend operator, and the maximal attractor is the depth-k prefix set.
//!
//! The transpose (shift direction) is where the fixed words `0ᵏ`, `1ᵏ`
//! repel and the middle words form an attractor.

use std::collections::BTreeSet;

use crate::address_space::CriticalPair;
use crate::error::ReliabilityError;
use crate::projection::{coding_pi, DyadicInterval};
use crate::symbolic::Word;

use super::{ConleyReport, FiniteRelation, NodeSet};

/// Truncation depth above which node sets no longer fit comfortably.
const MAX_DEPTH: usize = 20;

fn edges(crit: &CriticalPair, k: usize) -> Vec<(usize, usize)> {
    let alpha = crit.alpha_prefix(k);
    let beta = crit.beta_prefix(k);
    let mut out = Vec::with_capacity(2 << k);
    for u in 0..(1usize << k) {
        let word = Word::from_bits(u as u64, k);
        if word.lex_compare(&alpha).at_most() {
            out.push((u, u >> 1));
        }
        if word.lex_compare(&beta).at_least() {
            out.push((u, (1 << (k - 1)) | (u >> 1)));
        }
    }
    out
}

/// Outer depth-`k` truncation of the itinerary relation.
pub fn build_itinerary_relation(
    crit: &CriticalPair,
    k: usize,
) -> Result<FiniteRelation<Word>, ReliabilityError> {
    assert!((1..=MAX_DEPTH).contains(&k), "relation depth {k} out of 1..={MAX_DEPTH}");
    crit.require(k)?;
    let labels = (0..1u64 << k).map(|i| Word::from_bits(i, k)).collect();
    Ok(FiniteRelation::new(labels, edges(crit, k)).expect("edges stay inside the node set"))
}

/// The same relation with nodes labelled by their dyadic cylinders in `[0, 1]`.
pub fn build_embedded_relation(
    crit: &CriticalPair,
    k: usize,
) -> Result<FiniteRelation<DyadicInterval>, ReliabilityError> {
    Ok(build_itinerary_relation(crit, k)?.map_labels(|_, w| coding_pi(w)))
}

/// Words `w` of the node set with `β|ₖ ⪯ w ⪯ α|ₖ` (prefix comparisons).
pub fn middle_words(relation: &FiniteRelation<Word>, crit: &CriticalPair) -> NodeSet {
    let k = relation.labels().first().map_or(0, Word::len);
    let alpha = crit.alpha_prefix(k);
    let beta = crit.beta_prefix(k);
    relation
        .labels()
        .iter()
        .enumerate()
        .filter(|(_, w)| w.lex_compare(&alpha).at_most() && w.lex_compare(&beta).at_least())
        .map(|(i, _)| i)
        .collect()
}

/// `ω` of the middle words under the transpose, restricted to the
/// maximal attractor.
pub fn core_attractor(relation: &FiniteRelation<Word>, crit: &CriticalPair) -> NodeSet {
    let maximal = relation.maximal_attractor();
    let seeds: NodeSet = middle_words(relation, crit)
        .intersection(&maximal)
        .copied()
        .collect();
    relation.transpose().omega_limit(&seeds)
}

/// Attractor/repeller analysis of the shift-direction relation at depth `k`.
#[derive(Debug, Clone)]
pub struct ItineraryConley {
    pub relation: FiniteRelation<Word>,
    /// Report for the transpose relative to [`core_attractor`].
    pub report: ConleyReport,
}

impl ItineraryConley {
    pub fn new(crit: &CriticalPair, k: usize) -> Result<Self, ReliabilityError> {
        let relation = build_itinerary_relation(crit, k)?;
        let core = core_attractor(&relation, crit);
        let report = relation
            .transpose()
            .conley_report(&core)
            .expect("an omega-limit set is invariant");
        Ok(ItineraryConley { relation, report })
    }

    pub fn words(&self, set: &NodeSet) -> BTreeSet<Word> {
        set.iter().map(|&i| self.relation.labels()[i].clone()).collect()
    }

    pub fn endpoint_nodes(&self) -> NodeSet {
        let k = self.relation.labels()[0].len();
        [0, (1usize << k) - 1].into_iter().collect()
    }

    /// Chain recurrent nodes other than `0ᵏ` and `1ᵏ`.
    pub fn middle_recurrent(&self) -> NodeSet {
        self.report
            .chain_recurrent
            .difference(&self.endpoint_nodes())
            .copied()
            .collect()
    }
}
