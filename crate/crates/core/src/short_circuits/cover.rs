use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;
use crate::field::Elem;
use crate::frame::FrameRep;
use crate::graph::UGraph;

/// An edge of `G+` between `(vertex, level)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverEdge {
    pub from: (usize, Elem),
    pub to: (usize, Elem),
    /// Arc index in the base graph.
    pub arc: usize,
    /// Element ID of that arc.
    pub provenance: String,
}

/// The cover `G+` of a tree-normalized representation: one copy of the
/// spanning tree `T` per unit of the field, and each arc `e` outside `T`
/// joining `(tail, 1)` to `(head, label(e))`.
#[derive(Clone, Debug)]
pub struct CoverGraph {
    base: FrameRep,
    levels: Vec<Elem>,
    tree: Vec<usize>,
    edges: Vec<CoverEdge>,
}

/// Builds `G+`, tree-normalizing `rep` first (which also rejects a
/// disconnected graph).
pub fn build_cover(rep: &FrameRep) -> Result<CoverGraph> {
    let base = rep.tree_normalize()?;
    let tree = base.graph().bfs_spanning_tree()?;
    let levels: Vec<Elem> = base.field().units().collect();
    let arcs = base.graph().arcs();
    let mut in_tree = vec![false; arcs.len()];
    for &i in &tree {
        in_tree[i] = true;
    }
    let mut edges = Vec::with_capacity(levels.len() * tree.len() + arcs.len() - tree.len());
    for &gamma in &levels {
        for &i in &tree {
            edges.push(CoverEdge {
                from: (arcs[i].tail, gamma),
                to: (arcs[i].head, gamma),
                arc: i,
                provenance: arcs[i].id.clone(),
            });
        }
    }
    for (i, a) in arcs.iter().enumerate() {
        if !in_tree[i] {
            edges.push(CoverEdge {
                from: (a.tail, Elem::ONE),
                to: (a.head, a.label),
                arc: i,
                provenance: a.id.clone(),
            });
        }
    }
    Ok(CoverGraph {
        base,
        levels,
        tree,
        edges,
    })
}

impl CoverGraph {
    /// The tree-normalized representation the cover was built from.
    pub fn base(&self) -> &FrameRep {
        &self.base
    }

    pub fn levels(&self) -> &[Elem] {
        &self.levels
    }

    pub fn tree(&self) -> &[usize] {
        &self.tree
    }

    pub fn edges(&self) -> &[CoverEdge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.base.graph().vertices().len() * self.levels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Index of `(v, level)`: level-major, levels in field encoding order.
    pub fn vertex_index(&self, v: usize, level: Elem) -> usize {
        let li = self
            .levels
            .iter()
            .position(|&g| g == level)
            .expect("level is a unit");
        li * self.base.graph().vertices().len() + v
    }

    /// The undirected graph on `vertex_index` numbering; edge `i` is
    /// `edges()[i]`.
    pub fn to_ugraph(&self) -> UGraph {
        UGraph {
            n: self.vertex_count(),
            edges: self
                .edges
                .iter()
                .map(|e| {
                    (
                        self.vertex_index(e.from.0, e.from.1),
                        self.vertex_index(e.to.0, e.to.1),
                    )
                })
                .collect(),
        }
    }

    /// Base arc indices under a set of cover edges, sorted and deduplicated.
    pub fn project(&self, cover_edges: &[usize]) -> Vec<usize> {
        let mut arcs: Vec<usize> = cover_edges.iter().map(|&e| self.edges[e].arc).collect();
        arcs.sort_unstable();
        arcs.dedup();
        arcs
    }

    pub fn to_dot(&self, name: &str) -> String {
        let vertices = self.base.graph().vertices();
        let node = |v: usize, l: Elem| format!("\"{}@{}\"", vertices[v].replace('"', "\\\""), l.0);
        let mut s = format!("graph \"{}\" {{\n", name.replace('"', "\\\""));
        for &l in &self.levels {
            for v in 0..vertices.len() {
                let _ = writeln!(s, "  {};", node(v, l));
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            let _ = writeln!(
                s,
                "  {} -- {} [id=\"c{i}\", label=\"{}\"];",
                node(e.from.0, e.from.1),
                node(e.to.0, e.to.1),
                e.provenance.replace('"', "\\\"")
            );
        }
        s.push_str("}\n");
        s
    }
}
