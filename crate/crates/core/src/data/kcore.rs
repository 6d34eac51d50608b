//! Iterative k-core filtering of interactions and KG triplets.

use std::collections::HashMap;

use crate::data::graphs::{Pair, Triplet};
use crate::error::{Error, Result};

/// Removes users and items with fewer than `k` interactions and entities
/// appearing in fewer than `k` triplets, iterating each side to its
/// fixpoint. Idempotent: re-applying the filter changes nothing.
///
/// The two criteria are independent: an item dropped from the interaction
/// graph may survive in the KG as a plain entity, and an entity dropped
/// from the KG keeps its interactions.
pub fn k_core_filter(
    pairs: &[Pair],
    triplets: &[Triplet],
    k: usize,
) -> Result<(Vec<Pair>, Vec<Triplet>)> {
    if k < 1 {
        return Err(Error::config("k-core filter requires k >= 1"));
    }
    let pairs = interaction_core(pairs.to_vec(), k);
    if pairs.is_empty() {
        return Err(Error::EmptyDataset(format!(
            "no interactions survive the {k}-core filter"
        )));
    }
    let triplets = kg_core(triplets.to_vec(), k);
    Ok((pairs, triplets))
}

fn interaction_core(mut pairs: Vec<Pair>, k: usize) -> Vec<Pair> {
    loop {
        let mut user_deg: HashMap<usize, usize> = HashMap::new();
        let mut item_deg: HashMap<usize, usize> = HashMap::new();
        for &(u, i) in &pairs {
            *user_deg.entry(u).or_default() += 1;
            *item_deg.entry(i).or_default() += 1;
        }
        let before = pairs.len();
        pairs.retain(|&(u, i)| user_deg[&u] >= k && item_deg[&i] >= k);
        if pairs.len() == before {
            return pairs;
        }
    }
}

fn kg_core(mut triplets: Vec<Triplet>, k: usize) -> Vec<Triplet> {
    loop {
        let mut deg: HashMap<usize, usize> = HashMap::new();
        for &(h, _, t) in &triplets {
            *deg.entry(h).or_default() += 1;
            if t != h {
                *deg.entry(t).or_default() += 1;
            }
        }
        let before = triplets.len();
        triplets.retain(|&(h, _, t)| deg[&h] >= k && deg[&t] >= k);
        if triplets.len() == before {
            return triplets;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn removes_thin_user_and_cascades() {
        // User 0 has a single interaction; users 1 and 2 share three items.
        let pairs = vec![(0, 0), (1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)];
        let (filtered, _) = k_core_filter(&pairs, &[], 2).unwrap();
        assert_eq!(filtered, vec![(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)]);
    }

    #[test]
    fn k1_is_identity() {
        let pairs = vec![(0, 0), (1, 1)];
        let triplets = vec![(0, 0, 9)];
        let (p, t) = k_core_filter(&pairs, &triplets, 1).unwrap();
        assert_eq!(p, pairs);
        assert_eq!(t, triplets);
    }

    #[test]
    fn idempotent() {
        let pairs: Vec<Pair> = (0..6)
            .flat_map(|u| (0..4).map(move |i| (u, i)))
            .collect();
        let triplets = vec![(0, 0, 10), (1, 0, 10), (2, 0, 10), (3, 0, 11)];
        let (p1, t1) = k_core_filter(&pairs, &triplets, 3).unwrap();
        let (p2, t2) = k_core_filter(&p1, &t1, 3).unwrap();
        assert_eq!(p1, p2);
        assert_eq!(t1, t2);
    }

    #[test]
    fn empty_result_is_an_error() {
        let pairs = vec![(0, 0), (1, 1)];
        assert!(matches!(
            k_core_filter(&pairs, &[], 5),
            Err(Error::EmptyDataset(_))
        ));
    }

    #[test]
    fn kg_entity_degree_cascades() {
        // Entity 20 appears twice, entity 21 once; dropping 21's triplet
        // pushes entity 22 below threshold as well.
        let triplets = vec![(0, 0, 20), (1, 0, 20), (2, 0, 21), (21, 1, 22)];
        let (_, t) = k_core_filter(&[(0, 0), (0, 1)], &triplets, 2).unwrap();
        assert_eq!(t, vec![(0, 0, 20), (1, 0, 20)]);
    }
}
