//! Topic ontology: nodes, child→parent edges, and undirected hop distance.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::ResourceError;

#[derive(Debug, Clone, PartialEq)]
pub struct TopicNode {
    pub id: String,
    pub readable: String,
    pub display: String,
}

#[derive(Debug, Clone, Default)]
pub struct TopicOntology {
    nodes: Vec<TopicNode>,
    index: BTreeMap<String, usize>,
    parents: Vec<Vec<usize>>,
    adjacency: Vec<Vec<usize>>,
}

impl TopicOntology {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or replaces a node.
    pub fn add_node(&mut self, id: &str, readable: &str, display: &str) -> usize {
        let node = TopicNode {
            id: id.to_string(),
            readable: readable.to_string(),
            display: display.to_string(),
        };
        if let Some(&i) = self.index.get(id) {
            self.nodes[i] = node;
            return i;
        }
        let i = self.nodes.len();
        self.nodes.push(node);
        self.index.insert(id.to_string(), i);
        self.parents.push(Vec::new());
        self.adjacency.push(Vec::new());
        i
    }

    /// Records that `parent` is a parent of `child`. Both must already exist.
    pub fn add_edge(&mut self, child: &str, parent: &str) -> Result<(), ResourceError> {
        let c = self.require(child)?;
        let p = self.require(parent)?;
        if c == p {
            return Err(ResourceError::InvariantViolation(alloc::format!(
                "self-loop on topic {child}"
            )));
        }
        if !self.parents[c].contains(&p) {
            self.parents[c].push(p);
            self.adjacency[c].push(p);
            self.adjacency[p].push(c);
        }
        Ok(())
    }

    fn require(&self, id: &str) -> Result<usize, ResourceError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| ResourceError::UnknownTopic(id.to_string()))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.parents.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn node(&self, id: &str) -> Option<&TopicNode> {
        self.index.get(id).map(|&i| &self.nodes[i])
    }

    pub fn nodes(&self) -> impl Iterator<Item = &TopicNode> {
        self.nodes.iter()
    }

    /// `(child, parent)` pairs in insertion order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.parents.iter().enumerate().flat_map(move |(c, ps)| {
            ps.iter()
                .map(move |&p| (self.nodes[c].id.as_str(), self.nodes[p].id.as_str()))
        })
    }

    /// Direct parents of a topic; empty when the topic is unknown.
    pub fn parents_of(&self, id: &str) -> Vec<&str> {
        match self.index.get(id) {
            Some(&i) => self.parents[i]
                .iter()
                .map(|&p| self.nodes[p].id.as_str())
                .collect(),
            None => Vec::new(),
        }
    }

    /// Shortest path length between two topics with parent edges taken as
    /// undirected. `Ok(None)` means the topics are disconnected.
    pub fn distance(&self, a: &str, b: &str) -> Result<Option<u32>, ResourceError> {
        let a = self.require(a)?;
        let b = self.require(b)?;
        Ok(self.bfs(&[a], &[b]))
    }

    /// Minimum distance from any topic in `from` to any topic in `to`.
    /// Unknown ids are ignored; `None` when no pair is connected.
    pub fn min_distance<'a, I, J>(&self, from: I, to: J) -> Option<u32>
    where
        I: IntoIterator<Item = &'a str>,
        J: IntoIterator<Item = &'a str>,
    {
        let sources: Vec<usize> = from
            .into_iter()
            .filter_map(|t| self.index.get(t).copied())
            .collect();
        let targets: Vec<usize> = to
            .into_iter()
            .filter_map(|t| self.index.get(t).copied())
            .collect();
        if sources.is_empty() || targets.is_empty() {
            return None;
        }
        self.bfs(&sources, &targets)
    }

    fn bfs(&self, sources: &[usize], targets: &[usize]) -> Option<u32> {
        let mut is_target = vec![false; self.nodes.len()];
        for &t in targets {
            is_target[t] = true;
        }
        let mut dist = vec![u32::MAX; self.nodes.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if is_target[s] {
                return Some(0);
            }
            if dist[s] == u32::MAX {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let next = dist[u] + 1;
            for &v in &self.adjacency[u] {
                if dist[v] != u32::MAX {
                    continue;
                }
                if is_target[v] {
                    return Some(next);
                }
                dist[v] = next;
                queue.push_back(v);
            }
        }
        None
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    /// Fragment around the Apple / Google / Food topics. Distances:
    /// apple→google 4, food→google 5.
    pub(crate) fn figure_fixture() -> TopicOntology {
        let mut o = TopicOntology::new();
        for id in [
            "root",
            "technology",
            "computer-hardware",
            "internet",
            "apple",
            "google",
            "lifestyle",
            "food",
        ] {
            o.add_node(id, id, id);
        }
        for (c, p) in [
            ("technology", "root"),
            ("computer-hardware", "technology"),
            ("internet", "technology"),
            ("apple", "computer-hardware"),
            ("google", "internet"),
            ("lifestyle", "root"),
            ("food", "lifestyle"),
        ] {
            o.add_edge(c, p).unwrap();
        }
        o
    }

    #[test]
    fn figure_distances() {
        let o = figure_fixture();
        assert_eq!(o.distance("apple", "google").unwrap(), Some(4));
        assert_eq!(o.distance("food", "google").unwrap(), Some(5));
        assert_eq!(o.distance("google", "google").unwrap(), Some(0));
        assert_eq!(o.distance("google", "apple").unwrap(), Some(4));
    }

    #[test]
    fn unknown_and_disconnected() {
        let mut o = figure_fixture();
        assert_eq!(
            o.distance("nope", "google"),
            Err(ResourceError::UnknownTopic("nope".into()))
        );
        o.add_node("island", "island", "Island");
        assert_eq!(o.distance("island", "google").unwrap(), None);
        assert!(o.add_edge("food", "food").is_err());
    }

    #[test]
    fn parents_lookup() {
        let o = figure_fixture();
        assert_eq!(o.parents_of("apple"), ["computer-hardware"]);
        assert!(o.parents_of("root").is_empty());
        assert!(o.parents_of("missing").is_empty());
        assert_eq!(o.edge_count(), 7);
    }

    #[test]
    fn min_distance_over_sets() {
        let o = figure_fixture();
        assert_eq!(o.min_distance(["food", "apple"], ["google"]), Some(4));
        assert_eq!(o.min_distance(["apple"], ["apple", "google"]), Some(0));
        assert_eq!(o.min_distance(["missing"], ["google"]), None);
    }

    /// Floyd–Warshall over the undirected edge list.
    fn all_pairs_oracle(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<Option<u32>>> {
        let mut d = vec![vec![None; n]; n];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = Some(0);
        }
        for &(a, b) in edges {
            if a != b {
                d[a][b] = Some(1);
                d[b][a] = Some(1);
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if let (Some(x), Some(y)) = (d[i][k], d[k][j]) {
                        if d[i][j].is_none_or(|cur| x + y < cur) {
                            d[i][j] = Some(x + y);
                        }
                    }
                }
            }
        }
        d
    }

    fn random_dag() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
        (2usize..12).prop_flat_map(|n| {
            // child index > parent index keeps it acyclic
            let edges = proptest::collection::vec((1..n, 0..n), 0..(2 * n))
                .prop_map(|es| {
                    es.into_iter()
                        .map(|(c, p)| (c, p % c))
                        .collect::<Vec<_>>()
                });
            (Just(n), edges)
        })
    }

    proptest! {
        #[test]
        fn distance_matches_oracle_and_is_metric((n, edges) in random_dag()) {
            let mut o = TopicOntology::new();
            let names: Vec<String> = (0..n).map(|i| alloc::format!("t{i}")).collect();
            for name in &names {
                o.add_node(name, name, name);
            }
            for &(c, p) in &edges {
                o.add_edge(&names[c], &names[p]).unwrap();
            }
            let oracle = all_pairs_oracle(n, &edges);
            for i in 0..n {
                for j in 0..n {
                    let d = o.distance(&names[i], &names[j]).unwrap();
                    prop_assert_eq!(d, oracle[i][j]);
                    prop_assert_eq!(d, o.distance(&names[j], &names[i]).unwrap());
                    prop_assert_eq!(d == Some(0), i == j);
                    for k in 0..n {
                        let (Some(ij), Some(jk)) = (d, oracle[j][k]) else { continue };
                        let ik = oracle[i][k].expect("connected through j");
                        prop_assert!(ik <= ij + jk);
                    }
                }
            }
        }
    }
}
