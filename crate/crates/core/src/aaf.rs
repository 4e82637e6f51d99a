//! Abstract argumentation frameworks and grounded semantics.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

/// Largest framework [`brute_force_grounded`] will enumerate.
pub const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AafError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("{0} nodes exceeds the brute-force limit of {BRUTE_FORCE_LIMIT}")]
    TooLarge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Semantics {
    ConflictFree,
    Admissible,
    Complete,
    Grounded,
}

/// A set of node ids under a named semantics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Extension {
    pub members: BTreeSet<String>,
    pub semantics: Semantics,
}

impl Extension {
    pub fn contains(&self, id: &str) -> bool {
        self.members.contains(id)
    }
}

/// Nodes with a directed attack relation. Nodes are kept in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Aaf {
    nodes: Vec<String>,
    index: BTreeMap<String, usize>,
    attacks: BTreeSet<(usize, usize)>,
}

impl Aaf {
    pub fn new() -> Self {
        Aaf::default()
    }

    /// Builds a framework, rejecting duplicate nodes and dangling edges.
    pub fn from_edges<N, E, S>(nodes: N, edges: E) -> Result<Self, AafError>
    where
        N: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        let mut aaf = Aaf::new();
        for node in nodes {
            aaf.add_node(node)?;
        }
        for (from, to) in edges {
            aaf.add_attack(&from.into(), &to.into())?;
        }
        Ok(aaf)
    }

    pub fn add_node(&mut self, id: impl Into<String>) -> Result<usize, AafError> {
        let id = id.into();
        if self.index.contains_key(&id) {
            return Err(AafError::DuplicateNode(id));
        }
        let i = self.nodes.len();
        self.index.insert(id.clone(), i);
        self.nodes.push(id);
        Ok(i)
    }

    pub fn add_attack(&mut self, from: &str, to: &str) -> Result<(), AafError> {
        let (a, b) = (self.lookup(from)?, self.lookup(to)?);
        self.attacks.insert((a, b));
        Ok(())
    }

    fn lookup(&self, id: &str) -> Result<usize, AafError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| AafError::UnknownNode(id.to_string()))
    }

    fn lookup_set<'a>(&self, set: impl IntoIterator<Item = &'a String>) -> Result<Vec<bool>, AafError> {
        let mut mask = vec![false; self.nodes.len()];
        for id in set {
            mask[self.lookup(id)?] = true;
        }
        Ok(mask)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    /// Attack pairs `(attacker, attacked)`.
    pub fn attacks(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.attacks
            .iter()
            .map(|&(a, b)| (self.nodes[a].as_str(), self.nodes[b].as_str()))
    }

    pub fn attack_count(&self) -> usize {
        self.attacks.len()
    }

    pub fn attacks_node(&self, from: &str, to: &str) -> bool {
        match (self.index.get(from), self.index.get(to)) {
            (Some(&a), Some(&b)) => self.attacks.contains(&(a, b)),
            _ => false,
        }
    }

    pub fn attackers(&self, id: &str) -> BTreeSet<&str> {
        let Some(&b) = self.index.get(id) else {
            return BTreeSet::new();
        };
        self.attacks
            .iter()
            .filter(|&&(_, t)| t == b)
            .map(|&(a, _)| self.nodes[a].as_str())
            .collect()
    }

    fn attacker_lists(&self) -> Vec<Vec<usize>> {
        let mut lists = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.attacks {
            lists[b].push(a);
        }
        lists
    }

    fn to_ids(&self, mask: &[bool]) -> BTreeSet<String> {
        mask.iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| self.nodes[i].clone())
            .collect()
    }

    fn mask_defends(&self, attackers: &[Vec<usize>], mask: &[bool], node: usize) -> bool {
        attackers[node].iter().all(|&b| attackers[b].iter().any(|&c| mask[c]))
    }

    fn mask_conflict_free(&self, mask: &[bool]) -> bool {
        !self.attacks.iter().any(|&(a, b)| mask[a] && mask[b])
    }

    /// The characteristic function: every node the set defends.
    pub fn characteristic(&self, set: &BTreeSet<String>) -> Result<BTreeSet<String>, AafError> {
        let mask = self.lookup_set(set)?;
        let attackers = self.attacker_lists();
        let out: Vec<bool> = (0..self.nodes.len())
            .map(|n| self.mask_defends(&attackers, &mask, n))
            .collect();
        Ok(self.to_ids(&out))
    }

    /// Grounded extension by labelling: a node is IN once every attacker is
    /// OUT, and OUT once some attacker is IN. Unlabelled nodes are UNDEC.
    pub fn grounded(&self) -> Extension {
        let n = self.nodes.len();
        let mut targets = vec![Vec::new(); n];
        let mut live_attackers = vec![0usize; n];
        for &(a, b) in &self.attacks {
            targets[a].push(b);
            live_attackers[b] += 1;
        }
        let mut is_in = vec![false; n];
        let mut is_out = vec![false; n];
        let mut queue: Vec<usize> = (0..n).filter(|&i| live_attackers[i] == 0).collect();
        while let Some(a) = queue.pop() {
            if is_in[a] || is_out[a] {
                continue;
            }
            is_in[a] = true;
            for &b in &targets[a] {
                if is_out[b] {
                    continue;
                }
                is_out[b] = true;
                for &c in &targets[b] {
                    live_attackers[c] -= 1;
                    if live_attackers[c] == 0 && !is_out[c] {
                        queue.push(c);
                    }
                }
            }
        }
        Extension {
            members: self.to_ids(&is_in),
            semantics: Semantics::Grounded,
        }
    }

    pub fn is_conflict_free(&self, set: &BTreeSet<String>) -> Result<bool, AafError> {
        Ok(self.mask_conflict_free(&self.lookup_set(set)?))
    }

    /// Whether `set` attacks every attacker of `node`.
    pub fn defends(&self, set: &BTreeSet<String>, node: &str) -> Result<bool, AafError> {
        let mask = self.lookup_set(set)?;
        let node = self.lookup(node)?;
        Ok(self.mask_defends(&self.attacker_lists(), &mask, node))
    }

    pub fn is_admissible(&self, set: &BTreeSet<String>) -> Result<bool, AafError> {
        let mask = self.lookup_set(set)?;
        let attackers = self.attacker_lists();
        Ok(self.mask_conflict_free(&mask)
            && (0..self.nodes.len()).all(|n| !mask[n] || self.mask_defends(&attackers, &mask, n)))
    }

    /// Admissible and containing every node it defends.
    pub fn is_complete(&self, set: &BTreeSet<String>) -> Result<bool, AafError> {
        let mask = self.lookup_set(set)?;
        Ok(self.mask_complete(&self.attacker_lists(), &mask))
    }

    fn mask_complete(&self, attackers: &[Vec<usize>], mask: &[bool]) -> bool {
        self.mask_conflict_free(mask) && (0..self.nodes.len()).all(|n| mask[n] == self.mask_defends(attackers, mask, n))
    }
}

/// Grounded extension by enumerating every subset and taking the
/// ⊆-minimal complete one.
pub fn brute_force_grounded(aaf: &Aaf) -> Result<Extension, AafError> {
    let n = aaf.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(AafError::TooLarge(n));
    }
    let attackers = aaf.attacker_lists();
    let mut complete: Vec<u32> = Vec::new();
    let mut mask = vec![false; n];
    for bits in 0u32..(1u32 << n) {
        for (i, m) in mask.iter_mut().enumerate() {
            *m = bits & (1 << i) != 0;
        }
        if aaf.mask_complete(&attackers, &mask) {
            complete.push(bits);
        }
    }
    // Complete extensions always exist and the grounded one is contained in
    // all of them.
    let least = complete
        .iter()
        .copied()
        .find(|&c| complete.iter().all(|&d| c & d == c))
        .expect("a least complete extension exists");
    for (i, m) in mask.iter_mut().enumerate() {
        *m = least & (1 << i) != 0;
    }
    Ok(Extension {
        members: aaf.to_ids(&mask),
        semantics: Semantics::Grounded,
    })
}
