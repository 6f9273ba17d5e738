//! Undirected multigraphs with edge IDs `0..m`: girth, shortest cycles and
//! cycle enumeration. Loops are cycles of length 1 and a parallel pair is a
//! cycle of length 2.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl UGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n) {
            return Err(Error::DimensionMismatch(format!(
                "edge ({u}, {v}) leaves a graph on {n} vertices"
            )));
        }
        Ok(UGraph { n, edges })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let g: UGraph = serde_json::from_str(s)?;
        UGraph::new(g.n, g.edges)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn average_degree(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            2.0 * self.edges.len() as f64 / self.n as f64
        }
    }

    /// Degrees with loops counted twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// `adj[v]` lists `(neighbour, edge)` pairs in edge order.
    fn adjacency(&self, active: Option<&[bool]>) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if active.is_some_and(|a| !a[e]) {
                continue;
            }
            adj[u].push((v, e));
            if u != v {
                adj[v].push((u, e));
            }
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.adjacency(None);
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut stack = vec![0];
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// Girth of the subgraph on `active` edges (all edges when `None`), or
    /// `None` for a forest.
    ///
    /// BFS from every vertex; a non-tree edge `uv` met during the search from
    /// `s` closes a closed walk of length `d(u) + d(v) + 1` through a cycle no
    /// longer than that, and the search from a vertex on a shortest cycle
    /// attains it.
    pub fn girth_of(&self, active: Option<&[bool]>) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if active.is_some_and(|a| !a[e]) {
                continue;
            }
            if u == v {
                return Some(1);
            }
        }
        let adj = self.adjacency(active);
        let mut dist = vec![usize::MAX; self.n];
        let mut via = vec![usize::MAX; self.n];
        for s in 0..self.n {
            dist.fill(usize::MAX);
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if best.is_some_and(|b| 2 * dist[u] + 1 >= b) {
                    break;
                }
                for &(w, e) in &adj[u] {
                    if e == via[u] && u != s {
                        continue;
                    }
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        via[w] = e;
                        queue.push_back(w);
                    } else {
                        let len = dist[u] + dist[w] + 1;
                        if best.is_none_or(|b| len < b) {
                            best = Some(len);
                        }
                    }
                }
            }
        }
        best
    }

    pub fn girth(&self) -> Option<usize> {
        self.girth_of(None)
    }

    /// Among the shortest cycles of the `active` subgraph, the one whose
    /// sorted edge list is lexicographically smallest.
    pub fn shortest_cycle_lex(&self, active: &[bool]) -> Option<Vec<usize>> {
        let g = self.girth_of(Some(active))?;
        for s in 0..self.edges.len() {
            if !active[s] {
                continue;
            }
            let mut allowed = active.to_vec();
            for a in allowed.iter_mut().take(s + 1) {
                *a = false;
            }
            let mut best: Option<Vec<usize>> = None;
            self.paths_closing(s, &allowed, Some(g - 1), &mut |path| {
                let mut c = path.to_vec();
                c.push(s);
                c.sort_unstable();
                if best.as_ref().is_none_or(|b| c < *b) {
                    best = Some(c);
                }
            });
            if best.is_some() {
                return best;
            }
        }
        None
    }

    /// All cycles of the `active` subgraph as sorted edge lists. Exponential;
    /// meant for small graphs.
    pub fn enumerate_cycles(&self, active: Option<&[bool]>) -> Vec<Vec<usize>> {
        let m = self.edges.len();
        let act = |e: usize| active.is_none_or(|a| a[e]);
        let mut out = Vec::new();
        for s in 0..m {
            if !act(s) {
                continue;
            }
            let allowed: Vec<bool> = (0..m).map(|e| e > s && act(e)).collect();
            self.paths_closing(s, &allowed, None, &mut |path| {
                let mut c = path.to_vec();
                c.push(s);
                c.sort_unstable();
                out.push(c);
            });
        }
        out.sort();
        out
    }

    /// Calls `visit` with the edge list of every simple path from the second
    /// endpoint of edge `s` back to its first endpoint over `allowed` edges,
    /// optionally of exactly `len` edges.
    fn paths_closing(
        &self,
        s: usize,
        allowed: &[bool],
        len: Option<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        let (target, start) = self.edges[s];
        if start == target {
            if len.is_none_or(|l| l == 0) {
                visit(&[]);
            }
            return;
        }
        let adj = self.adjacency(Some(allowed));
        // distances to the target prune the fixed-length search
        let mut to_target = vec![usize::MAX; self.n];
        to_target[target] = 0;
        let mut queue = VecDeque::from([target]);
        while let Some(u) = queue.pop_front() {
            for &(w, _) in &adj[u] {
                if to_target[w] == usize::MAX {
                    to_target[w] = to_target[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if to_target[start] == usize::MAX {
            return;
        }
        let mut on_path = vec![false; self.n];
        on_path[start] = true;
        let mut path = Vec::new();
        let mut st = Search {
            adj: &adj,
            to_target: &to_target,
            target,
            len,
            on_path: &mut on_path,
            path: &mut path,
            visit,
        };
        st.dfs(start);
    }

    /// Whether `edges` (IDs) form a single cycle: connected and 2-regular on
    /// the vertices they touch, loops counting twice.
    pub fn is_cycle(&self, edges: &[usize]) -> bool {
        if edges.is_empty() {
            return false;
        }
        let mut deg = vec![0usize; self.n];
        for &e in edges {
            let (u, v) = self.edges[e];
            deg[u] += 1;
            deg[v] += 1;
        }
        if deg.iter().any(|&d| d != 0 && d != 2) {
            return false;
        }
        let sub = UGraph {
            n: self.n,
            edges: edges.iter().map(|&e| self.edges[e]).collect(),
        };
        sub.touched_connected()
    }

    /// Connectivity of the subgraph spanned by the edges (isolated vertices
    /// ignored).
    pub fn touched_connected(&self) -> bool {
        let Some(&(first, _)) = self.edges.first() else {
            return true;
        };
        let adj = self.adjacency(None);
        let mut seen = vec![false; self.n];
        seen[first] = true;
        let mut stack = vec![first];
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        self.edges.iter().all(|&(u, _)| seen[u])
    }
}

struct Search<'a> {
    adj: &'a [Vec<(usize, usize)>],
    to_target: &'a [usize],
    target: usize,
    len: Option<usize>,
    on_path: &'a mut [bool],
    path: &'a mut Vec<usize>,
    visit: &'a mut dyn FnMut(&[usize]),
}

impl Search<'_> {
    fn dfs(&mut self, u: usize) {
        for &(w, e) in &self.adj[u] {
            if w == u || self.on_path[w] || self.to_target[w] == usize::MAX {
                continue;
            }
            if let Some(l) = self.len {
                if self.path.len() + 1 + self.to_target[w] > l {
                    continue;
                }
            }
            self.path.push(e);
            if w == self.target {
                if self.len.is_none_or(|l| l == self.path.len()) {
                    (self.visit)(self.path);
                }
            } else {
                self.on_path[w] = true;
                self.dfs(w);
                self.on_path[w] = false;
            }
            self.path.pop();
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn petersen() -> UGraph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        UGraph::new(10, edges).unwrap()
    }

    pub(crate) fn complete(n: usize) -> UGraph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        UGraph::new(n, edges).unwrap()
    }

    fn cycle(n: usize) -> UGraph {
        UGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap()
    }

    // every edge subset, tested directly
    fn cycles_brute(g: &UGraph) -> Vec<Vec<usize>> {
        let m = g.edges.len();
        let mut out = Vec::new();
        for mask in 1u32..(1 << m) {
            let s: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
            if g.is_cycle(&s) {
                out.push(s);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn girths() {
        assert_eq!(petersen().girth(), Some(5));
        assert_eq!(complete(4).girth(), Some(3));
        assert_eq!(cycle(7).girth(), Some(7));
        assert_eq!(UGraph::new(3, vec![(0, 1), (1, 2)]).unwrap().girth(), None);
        assert_eq!(
            UGraph::new(2, vec![(0, 1), (1, 0)]).unwrap().girth(),
            Some(2)
        );
        assert_eq!(
            UGraph::new(2, vec![(0, 1), (1, 1)]).unwrap().girth(),
            Some(1)
        );
        let mut cube = Vec::new();
        for v in 0..8usize {
            for b in 0..3 {
                if v >> b & 1 == 0 {
                    cube.push((v, v | 1 << b));
                }
            }
        }
        assert_eq!(UGraph::new(8, cube).unwrap().girth(), Some(4));
    }

    #[test]
    fn shortest_cycle_is_lex_first() {
        let k4 = complete(4);
        // edges: 0=01 1=02 2=03 3=12 4=13 5=23
        assert_eq!(k4.shortest_cycle_lex(&[true; 6]), Some(vec![0, 1, 3]));
        let mut act = [true; 6];
        act[0] = false;
        assert_eq!(k4.shortest_cycle_lex(&act), Some(vec![1, 2, 5]));
        assert_eq!(
            cycle(5).shortest_cycle_lex(&[true; 5]),
            Some(vec![0, 1, 2, 3, 4])
        );
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let mut graphs = vec![complete(4), complete(5), petersen(), cycle(4)];
        graphs.push(UGraph::new(3, vec![(0, 1), (1, 0), (1, 2), (2, 2), (2, 0), (0, 1)]).unwrap());
        for g in &graphs {
            if g.edges.len() <= 15 {
                assert_eq!(g.enumerate_cycles(None), cycles_brute(g));
            }
        }
        assert_eq!(complete(4).enumerate_cycles(None).len(), 7);
        assert_eq!(complete(5).enumerate_cycles(None).len(), 37);
    }

    #[test]
    fn connectivity_and_validation() {
        assert!(UGraph::new(1, vec![]).unwrap().is_connected());
        assert!(!UGraph::new(2, vec![]).unwrap().is_connected());
        assert!(UGraph::new(2, vec![(0, 2)]).is_err());
        assert!(
            UGraph::from_json(r#"{"n":3,"edges":[[0,1],[1,2],[2,0]]}"#)
                .unwrap()
                .girth()
                == Some(3)
        );
        assert!(UGraph::from_json(r#"{"n":3,"edges":[],"x":1}"#).is_err());
    }
}
