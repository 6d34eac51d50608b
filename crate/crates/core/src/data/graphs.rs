//! Indexed interaction and knowledge graphs.

use std::collections::HashSet;

use crate::error::{Error, Result};

pub type Pair = (usize, usize);
pub type Triplet = (usize, usize, usize);

/// User–item bipartite graph with train/validation/test splits and the
/// train-only adjacency lists used by the aggregators.
#[derive(Debug, Clone)]
pub struct InteractionGraph {
    pub num_users: usize,
    pub num_items: usize,
    pub train: Vec<Pair>,
    pub valid: Vec<Pair>,
    pub test: Vec<Pair>,
    /// N_u: per-user sorted train item ids.
    pub user_neighbors: Vec<Vec<usize>>,
    /// Ñ_i: per-item sorted train user ids. Exact transpose of
    /// `user_neighbors`.
    pub item_neighbors: Vec<Vec<usize>>,
}

impl InteractionGraph {
    pub fn build(
        num_users: usize,
        num_items: usize,
        train: Vec<Pair>,
        valid: Vec<Pair>,
        test: Vec<Pair>,
    ) -> Result<Self> {
        let mut seen: HashSet<Pair> = HashSet::new();
        for (name, split) in [("train", &train), ("valid", &valid), ("test", &test)] {
            for &(u, i) in split {
                if u >= num_users || i >= num_items {
                    return Err(Error::contract(format!(
                        "{name} pair ({u}, {i}) outside id space {num_users}x{num_items}"
                    )));
                }
                if !seen.insert((u, i)) {
                    return Err(Error::contract(format!(
                        "pair ({u}, {i}) duplicated within or across splits"
                    )));
                }
            }
        }

        let mut user_neighbors = vec![Vec::new(); num_users];
        let mut item_neighbors = vec![Vec::new(); num_items];
        for &(u, i) in &train {
            user_neighbors[u].push(i);
            item_neighbors[i].push(u);
        }
        for list in user_neighbors.iter_mut().chain(item_neighbors.iter_mut()) {
            list.sort_unstable();
        }

        Ok(InteractionGraph {
            num_users,
            num_items,
            train,
            valid,
            test,
            user_neighbors,
            item_neighbors,
        })
    }

    pub fn num_interactions(&self) -> usize {
        self.train.len() + self.valid.len() + self.test.len()
    }

    /// Train-interaction degree per item.
    pub fn item_popularity(&self) -> Vec<usize> {
        self.item_neighbors.iter().map(Vec::len).collect()
    }

    /// Train-interaction degree per user.
    pub fn user_popularity(&self) -> Vec<usize> {
        self.user_neighbors.iter().map(Vec::len).collect()
    }
}

/// Knowledge graph over a dense entity id space in which items occupy ids
/// `[0, num_items)`, with triplets stored in both canonical and inverse
/// directions (inverse of relation `r` is `r + num_relations_canonical`).
#[derive(Debug, Clone)]
pub struct KnowledgeGraph {
    pub num_items: usize,
    pub num_entities: usize,
    pub num_relations_canonical: usize,
    /// Canonical + inverse triplets.
    pub triplets: Vec<Triplet>,
    /// N_i: per-entity sorted (relation, tail) lists over `triplets`.
    pub kg_neighbors: Vec<Vec<(usize, usize)>>,
    /// Canonical relation ids tagged as hierarchical.
    pub hierarchical_relations: Vec<usize>,
    /// H: deduplicated (item, tail) pairs from canonical hierarchical
    /// triplets with an item head.
    pub hierarchical_pairs: Vec<Pair>,
}

impl KnowledgeGraph {
    pub fn build(
        num_items: usize,
        num_entities: usize,
        num_relations_canonical: usize,
        triplets_with_inverse: Vec<Triplet>,
        hierarchical_relations: Vec<usize>,
        hierarchical_pairs: Vec<Pair>,
    ) -> Result<Self> {
        if num_items > num_entities {
            return Err(Error::contract(format!(
                "num_items {num_items} exceeds num_entities {num_entities}"
            )));
        }
        let mut kg_neighbors = vec![Vec::new(); num_entities];
        for &(h, r, t) in &triplets_with_inverse {
            if h >= num_entities || t >= num_entities {
                return Err(Error::contract(format!(
                    "triplet ({h}, {r}, {t}) outside entity space {num_entities}"
                )));
            }
            if r >= 2 * num_relations_canonical {
                return Err(Error::contract(format!(
                    "relation {r} outside id space {}",
                    2 * num_relations_canonical
                )));
            }
            kg_neighbors[h].push((r, t));
        }
        for list in kg_neighbors.iter_mut() {
            list.sort_unstable();
        }
        Ok(KnowledgeGraph {
            num_items,
            num_entities,
            num_relations_canonical,
            triplets: triplets_with_inverse,
            kg_neighbors,
            hierarchical_relations,
            hierarchical_pairs,
        })
    }

    pub fn num_relations_with_inverse(&self) -> usize {
        2 * self.num_relations_canonical
    }

    /// Canonical triplet count (half of the stored directed list).
    pub fn num_triplets_canonical(&self) -> usize {
        self.triplets.len() / 2
    }
}

/// Aggregate counts plus the per-item train popularity.
#[derive(Debug, Clone)]
pub struct DatasetStats {
    pub num_users: usize,
    pub num_items: usize,
    pub num_interactions: usize,
    pub num_train: usize,
    pub num_valid: usize,
    pub num_test: usize,
    pub num_entities: usize,
    pub num_relations_canonical: usize,
    pub num_triplets_canonical: usize,
    pub num_hierarchical_pairs: usize,
    pub item_popularity: Vec<usize>,
}

/// A fully indexed dataset ready for training.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub interactions: InteractionGraph,
    pub kg: KnowledgeGraph,
    pub stats: DatasetStats,
}

impl Dataset {
    pub fn new(interactions: InteractionGraph, kg: KnowledgeGraph) -> Result<Self> {
        if interactions.num_items != kg.num_items {
            return Err(Error::contract(format!(
                "interaction graph has {} items but knowledge graph has {}",
                interactions.num_items, kg.num_items
            )));
        }
        let stats = DatasetStats {
            num_users: interactions.num_users,
            num_items: interactions.num_items,
            num_interactions: interactions.num_interactions(),
            num_train: interactions.train.len(),
            num_valid: interactions.valid.len(),
            num_test: interactions.test.len(),
            num_entities: kg.num_entities,
            num_relations_canonical: kg.num_relations_canonical,
            num_triplets_canonical: kg.num_triplets_canonical(),
            num_hierarchical_pairs: kg.hierarchical_pairs.len(),
            item_popularity: interactions.item_popularity(),
        };
        Ok(Dataset {
            interactions,
            kg,
            stats,
        })
    }
}
