//! Frame matrices (at most two nonzeros per column) and their
//! `F^x`-labelled digraph representations.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::graph::UGraph;
use crate::linalg::{projective_count, Limits, Mat};
use crate::matroid::ReprMatroid;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub id: String,
    pub tail: usize,
    pub head: usize,
    pub label: Elem,
}

impl Arc {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabelledDigraph {
    #[serde(skip)]
    field: FieldSpec,
    vertices: Vec<String>,
    arcs: Vec<Arc>,
}

impl LabelledDigraph {
    pub fn new(field: FieldSpec, vertices: Vec<String>, arcs: Vec<Arc>) -> Result<Self> {
        let mut ids = HashSet::new();
        for a in &arcs {
            if !ids.insert(a.id.as_str()) {
                return Err(Error::DuplicateElement(a.id.clone()));
            }
            if a.tail >= vertices.len() || a.head >= vertices.len() {
                return Err(Error::DimensionMismatch(format!(
                    "arc {} has an endpoint outside V",
                    a.id
                )));
            }
            if a.label.is_zero() {
                return Err(Error::Precondition(format!("arc {} has label 0", a.id)));
            }
            field.elem(a.label.0)?;
        }
        Ok(LabelledDigraph {
            field,
            vertices,
            arcs,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc_index(&self, id: &str) -> Result<usize> {
        self.arcs
            .iter()
            .position(|a| a.id == id)
            .ok_or_else(|| Error::UnknownElement(id.to_string()))
    }

    pub fn underlying(&self) -> UGraph {
        UGraph {
            n: self.vertices.len(),
            edges: self.arcs.iter().map(|a| (a.tail, a.head)).collect(),
        }
    }

    pub fn is_connected(&self) -> bool {
        self.underlying().is_connected()
    }

    /// Sign of the closed walk `v0, a0, v1, a1, ..., v_k = v0`: labels of arcs
    /// traversed forwards, inverses of those traversed backwards.
    pub fn cycle_sign(&self, walk_vertices: &[usize], walk_arcs: &[usize]) -> Result<Elem> {
        let k = walk_arcs.len();
        if k == 0 || walk_vertices.len() != k + 1 || walk_vertices[0] != walk_vertices[k] {
            return Err(Error::NotACycle(
                "walk must be closed and alternate vertices and arcs".into(),
            ));
        }
        let mut sorted = walk_arcs.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != k
            || sorted.iter().any(|&a| a >= self.arcs.len())
            || !self.underlying().is_cycle(&sorted)
        {
            return Err(Error::NotACycle(format!("{walk_arcs:?} is not a cycle")));
        }
        let f = &self.field;
        let mut sign = Elem::ONE;
        for i in 0..k {
            let a = &self.arcs[walk_arcs[i]];
            let (x, y) = (walk_vertices[i], walk_vertices[i + 1]);
            if a.tail == x && a.head == y {
                sign = f.mul(sign, a.label);
            } else if a.head == x && a.tail == y {
                sign = f.mul(sign, f.inv(a.label)?);
            } else {
                return Err(Error::NotACycle(format!(
                    "arc {} does not join {x} and {y}",
                    a.id
                )));
            }
        }
        Ok(sign)
    }

    /// A traversal of the cycle with arc set `cycle`, starting at the tail of
    /// its first arc.
    pub fn cycle_walk(&self, cycle: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
        let mut set = cycle.to_vec();
        set.sort_unstable();
        set.dedup();
        if set.iter().any(|&a| a >= self.arcs.len()) || !self.underlying().is_cycle(&set) {
            return Err(Error::NotACycle(format!("{cycle:?} is not a cycle")));
        }
        let first = &self.arcs[set[0]];
        let mut verts = vec![first.tail, first.head];
        let mut arcs = vec![set[0]];
        let mut used = vec![false; set.len()];
        used[0] = true;
        while arcs.len() < set.len() {
            let cur = *verts.last().expect("walk is nonempty");
            let (i, &a) = set
                .iter()
                .enumerate()
                .find(|&(i, &a)| !used[i] && (self.arcs[a].tail == cur || self.arcs[a].head == cur))
                .expect("a 2-regular connected arc set continues");
            used[i] = true;
            let arc = &self.arcs[a];
            verts.push(if arc.tail == cur { arc.head } else { arc.tail });
            arcs.push(a);
        }
        Ok((verts, arcs))
    }

    pub fn is_balanced(&self, cycle: &[usize]) -> Result<bool> {
        let (v, a) = self.cycle_walk(cycle)?;
        Ok(self.cycle_sign(&v, &a)? == Elem::ONE)
    }

    /// Multiplies labels of arcs from `U = V - W` into `W` by `gamma` and of
    /// arcs from `W` into `U` by `gamma^-1`.
    pub fn resign(&self, gamma: Elem, w: &[usize]) -> Result<LabelledDigraph> {
        let f = &self.field;
        let ginv = f.inv(gamma)?;
        let mut in_w = vec![false; self.vertices.len()];
        for &v in w {
            *in_w
                .get_mut(v)
                .ok_or_else(|| Error::InvalidPartition(format!("vertex {v} not in V")))? = true;
        }
        let mut g = self.clone();
        for a in &mut g.arcs {
            match (in_w[a.tail], in_w[a.head]) {
                (false, true) => a.label = f.mul(a.label, gamma),
                (true, false) => a.label = f.mul(a.label, ginv),
                _ => {}
            }
        }
        Ok(g)
    }

    /// The same labelled graph with every non-loop arc running from its
    /// lower to its higher vertex; reversed arcs take the inverse label.
    pub fn canonically_oriented(&self) -> LabelledDigraph {
        let mut g = self.clone();
        for a in &mut g.arcs {
            if a.tail > a.head {
                std::mem::swap(&mut a.tail, &mut a.head);
                a.label = self.field.inv(a.label).expect("labels are nonzero");
            }
        }
        g
    }

    /// Arc indices of the BFS spanning tree from vertex 0, neighbours taken
    /// in arc order. Loops are never tree arcs.
    pub fn bfs_spanning_tree(&self) -> Result<Vec<usize>> {
        let n = self.vertices.len();
        if n == 0 {
            return Ok(Vec::new());
        }
        let mut adj = vec![Vec::new(); n];
        for (i, a) in self.arcs.iter().enumerate() {
            if !a.is_loop() {
                adj[a.tail].push((a.head, i));
                adj[a.head].push((a.tail, i));
            }
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut tree = Vec::with_capacity(n - 1);
        while let Some(u) = queue.pop_front() {
            for &(v, i) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    tree.push(i);
                    queue.push_back(v);
                }
            }
        }
        if tree.len() + 1 != n {
            return Err(Error::Disconnected);
        }
        Ok(tree)
    }

    /// DOT digraph with one edge per arc, named by its ID and labelled by the
    /// packed encoding of its label.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph \"{}\" {{\n", escape(name));
        for v in &self.vertices {
            let _ = writeln!(s, "  \"{}\";", escape(v));
        }
        for a in &self.arcs {
            let _ = writeln!(
                s,
                "  \"{}\" -> \"{}\" [id=\"{}\", label=\"{}\"];",
                escape(&self.vertices[a.tail]),
                escape(&self.vertices[a.head]),
                escape(&a.id),
                a.label.0
            );
        }
        s.push_str("}\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn is_frame_matrix(a: &Mat) -> bool {
    (0..a.cols()).all(|j| a.nonzeros_in_column(j) <= 2)
}

pub fn graph_connected(g: &LabelledDigraph) -> bool {
    g.is_connected()
}

/// The canonical graph representation of a frame matrix. Vertices are the
/// rows (`v0`, `v1`, ...); arcs carry the column IDs.
///
/// A two-nonzero column is an arc from its lower row `x` to its higher row
/// `y` labelled `-A[x] / A[y]`. A one-nonzero column is a loop at its row
/// labelled with the smallest unit other than 1. A zero column is a loop at
/// vertex 0 labelled 1.
pub fn graph_representation(a: &Mat) -> Result<LabelledDigraph> {
    let f = a.field();
    let ids = a.labels_or_default();
    let mut arcs = Vec::with_capacity(a.cols());
    for (j, id) in ids.into_iter().enumerate() {
        let nz: Vec<usize> = (0..a.rows()).filter(|&i| !a.get(i, j).is_zero()).collect();
        let arc = match nz[..] {
            [] => {
                if a.rows() == 0 {
                    return Err(Error::NoGraphRepresentation(
                        "matrix has no rows to host loops".into(),
                    ));
                }
                Arc {
                    id,
                    tail: 0,
                    head: 0,
                    label: Elem::ONE,
                }
            }
            [x] => {
                let label = f.smallest_non_identity_unit().ok_or_else(|| {
                    Error::NoGraphRepresentation(format!(
                        "column {id} has one nonzero entry over GF(2); append a parity row first"
                    ))
                })?;
                Arc {
                    id,
                    tail: x,
                    head: x,
                    label,
                }
            }
            [x, y] => {
                let label = f.neg(f.div(a.get(x, j), a.get(y, j))?);
                Arc {
                    id,
                    tail: x,
                    head: y,
                    label,
                }
            }
            _ => {
                return Err(Error::NotFrame(format!(
                    "column {id} has {} nonzero entries",
                    nz.len()
                )))
            }
        };
        arcs.push(arc);
    }
    LabelledDigraph::new(
        f.clone(),
        (0..a.rows()).map(|i| format!("v{i}")).collect(),
        arcs,
    )
}

/// A frame matrix paired with a graph representation of it; column `j` of
/// the matrix is arc `j` of the graph.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameRep {
    matrix: Mat,
    graph: LabelledDigraph,
}

impl FrameRep {
    pub fn from_matrix(a: Mat) -> Result<FrameRep> {
        let graph = graph_representation(&a)?;
        let matrix = a.with_labels(graph.arcs.iter().map(|x| x.id.clone()).collect())?;
        Ok(FrameRep { matrix, graph })
    }

    /// Rebuilds a frame matrix from a graph: arc `x -> y` with label `l`
    /// becomes the column with `l` in row `x` and `-1` in row `y`; a loop
    /// becomes a zero column when `l = 1` and a unit vector otherwise.
    pub fn from_graph(graph: LabelledDigraph) -> Result<FrameRep> {
        let f = graph.field().clone();
        let mut a = Mat::zeros(&f, graph.vertices.len(), graph.arcs.len());
        for (j, arc) in graph.arcs.iter().enumerate() {
            if arc.is_loop() {
                if arc.label != Elem::ONE {
                    a.set(arc.tail, j, Elem::ONE);
                }
            } else {
                a.set(arc.tail, j, arc.label);
                a.set(arc.head, j, f.neg(Elem::ONE));
            }
        }
        let matrix = a.with_labels(graph.arcs.iter().map(|x| x.id.clone()).collect())?;
        Ok(FrameRep { matrix, graph })
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn graph(&self) -> &LabelledDigraph {
        &self.graph
    }

    pub fn field(&self) -> &FieldSpec {
        self.matrix.field()
    }

    pub fn matroid(&self) -> ReprMatroid {
        ReprMatroid::new(self.matrix.clone()).expect("arc IDs are unique")
    }

    /// Resigning together with the matching row scaling: the label rule
    /// `-A[x] / A[y]` turns scaling the rows of `W` by `gamma^-1` into the
    /// resigning by `gamma`.
    pub fn resign(&self, gamma: Elem, w: &[usize]) -> Result<FrameRep> {
        let graph = self.graph.resign(gamma, w)?;
        let ginv = self.field().inv(gamma)?;
        let mut matrix = self.matrix.clone();
        for &v in w {
            matrix.scale_row(v, ginv);
        }
        Ok(FrameRep { matrix, graph })
    }

    /// Resigns so that every arc of the BFS spanning tree from vertex 0 has
    /// label 1. Vertex potentials `s` start at `s(v0) = 1`; labels become
    /// `s(tail) * label / s(head)` and row `v` of the matrix is scaled by
    /// `s(v)`.
    pub fn tree_normalize(&self) -> Result<FrameRep> {
        let f = self.field().clone();
        let tree = self.graph.bfs_spanning_tree()?;
        let n = self.graph.vertices.len();
        let mut s: Vec<Option<Elem>> = vec![None; n];
        if n > 0 {
            s[0] = Some(Elem::ONE);
        }
        // BFS order guarantees one endpoint is known when an arc is reached
        for &i in &tree {
            let a = &self.graph.arcs[i];
            match (s[a.tail], s[a.head]) {
                (Some(st), None) => s[a.head] = Some(f.mul(st, a.label)),
                (None, Some(sh)) => s[a.tail] = Some(f.div(sh, a.label)?),
                _ => unreachable!("tree arcs join a known and an unknown vertex"),
            }
        }
        let s: Vec<Elem> = s.into_iter().map(|x| x.expect("tree spans")).collect();
        let mut graph = self.graph.clone();
        for a in &mut graph.arcs {
            if !a.is_loop() {
                a.label = f.div(f.mul(s[a.tail], a.label), s[a.head])?;
            }
        }
        let mut matrix = self.matrix.clone();
        for (v, &sv) in s.iter().enumerate() {
            matrix.scale_row(v, sv);
        }
        Ok(FrameRep { matrix, graph })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureClass {
    BalancedCycle,
    UnbalancedCycle,
    /// Connected, minimum degree at least 2, not a cycle.
    Bicycle,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DependenceEvidence {
    pub class: StructureClass,
    pub rank: usize,
    pub size: usize,
}

impl DependenceEvidence {
    pub fn dependent(&self) -> bool {
        self.rank < self.size
    }
}

pub fn classify_arc_set(g: &LabelledDigraph, s: &[usize]) -> Result<StructureClass> {
    if s.is_empty() {
        return Ok(StructureClass::Other);
    }
    let u = g.underlying();
    if u.is_cycle(s) {
        return Ok(if g.is_balanced(s)? {
            StructureClass::BalancedCycle
        } else {
            StructureClass::UnbalancedCycle
        });
    }
    let sub = UGraph {
        n: u.n,
        edges: s.iter().map(|&e| u.edges[e]).collect(),
    };
    let degree_ok = sub.degrees().iter().all(|&d| d == 0 || d >= 2);
    Ok(if degree_ok && sub.touched_connected() {
        StructureClass::Bicycle
    } else {
        StructureClass::Other
    })
}

/// Classifies the arc set `s` and compares its rank with its size. Balanced
/// cycles and bicycles must be dependent; an independent one is reported as
/// a violation.
pub fn check_dependent_structure(rep: &FrameRep, s: &[usize]) -> Result<DependenceEvidence> {
    let mut set = s.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.iter().any(|&e| e >= rep.matrix.cols()) {
        return Err(Error::UnknownElement(format!("arc index in {s:?}")));
    }
    let class = classify_arc_set(&rep.graph, &set)?;
    let ev = DependenceEvidence {
        class,
        rank: rep.matrix.rank_of_columns(&set),
        size: set.len(),
    };
    if matches!(
        class,
        StructureClass::BalancedCycle | StructureClass::Bicycle
    ) && !ev.dependent()
    {
        return Err(Error::Violation {
            lemma: "balanced cycles and bicycles are dependent",
            detail: serde_json::json!({
                "matrix": rep.matrix.to_packed_rows(),
                "arcs": set,
                "evidence": ev,
            }),
        });
    }
    Ok(ev)
}

/// A frame generator of `m` with at most `r(M) + 1` rows.
///
/// The stored generator is used when it is already a frame matrix;
/// otherwise, for small ground sets, a frame basis of the row space is
/// searched for. Redundant rows are dropped, except that a rank-0 matroid
/// keeps one zero row. Over GF(2) the sum of all rows
/// is appended when nonzero so that every column has even support.
pub fn frame_normalize(m: &ReprMatroid, limits: &Limits) -> Result<Mat> {
    let f = m.field().clone();
    let gen = m.gen();
    let mut rows: Vec<Vec<Elem>> = if is_frame_matrix(gen) {
        independent_rows(gen)
    } else {
        search_frame_basis(m, limits)?
    };
    if rows.is_empty() && !m.is_empty() {
        // a vertex to carry the loops of a rank-0 matroid
        rows.push(vec![Elem::ZERO; m.len()]);
    }
    if f.q() == 2 {
        let mut parity = vec![Elem::ZERO; m.len()];
        for r in &rows {
            for (p, &x) in parity.iter_mut().zip(r) {
                *p = f.add(*p, x);
            }
        }
        if parity.iter().any(|x| !x.is_zero()) {
            rows.push(parity);
        }
    }
    Mat::from_elem_rows(&f, m.len(), &rows)?.with_labels(m.ground().to_vec())
}

fn independent_rows(a: &Mat) -> Vec<Vec<Elem>> {
    let mut kept: Vec<Vec<Elem>> = Vec::new();
    for i in 0..a.rows() {
        let mut trial = kept.clone();
        trial.push(a.row(i).to_vec());
        let t = Mat::from_elem_rows(a.field(), a.cols(), &trial).expect("rows have equal length");
        if t.rank() == trial.len() {
            kept = trial;
        }
    }
    kept
}

fn search_frame_basis(m: &ReprMatroid, limits: &Limits) -> Result<Vec<Vec<Elem>>> {
    let n = m.len();
    if n > limits.frame_search_elements {
        return Err(Error::LimitExceeded {
            what: "frame generator search",
            size: n,
            limit: limits.frame_search_elements,
        });
    }
    let f = m.field();
    let r = m.rank();
    let needed = projective_count(f.q(), r);
    if needed > limits.enumeration as u128 {
        return Err(Error::BudgetExceeded {
            needed,
            limit: limits.enumeration,
        });
    }
    // one representative per 1-dimensional subspace of the row space
    let basis = m.basis();
    let mut candidates = Vec::new();
    let mut coeffs = vec![Elem::ZERO; r];
    projective_vectors(f, &mut coeffs, 0, false, &mut |c| {
        let v = basis.combine_rows(c).expect("one coefficient per row");
        candidates.push(v);
    });
    let mut chosen: Vec<usize> = Vec::new();
    let mut counts = vec![0u8; n];
    if backtrack(f, &candidates, r, 0, &mut chosen, &mut counts) {
        Ok(chosen.into_iter().map(|i| candidates[i].clone()).collect())
    } else {
        Err(Error::NotFrame("row space has no frame basis".into()))
    }
}

fn projective_vectors(
    f: &FieldSpec,
    c: &mut Vec<Elem>,
    i: usize,
    led: bool,
    visit: &mut dyn FnMut(&[Elem]),
) {
    if i == c.len() {
        if led {
            visit(c);
        }
        return;
    }
    if led {
        for x in f.elements() {
            c[i] = x;
            projective_vectors(f, c, i + 1, true, visit);
        }
    } else {
        c[i] = Elem::ZERO;
        projective_vectors(f, c, i + 1, false, visit);
        c[i] = Elem::ONE;
        projective_vectors(f, c, i + 1, true, visit);
    }
    c[i] = Elem::ZERO;
}

fn backtrack(
    f: &FieldSpec,
    cand: &[Vec<Elem>],
    r: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    counts: &mut [u8],
) -> bool {
    if chosen.len() == r {
        return true;
    }
    for i in from..cand.len() {
        let v = &cand[i];
        if v.iter()
            .zip(counts.iter())
            .any(|(x, &c)| !x.is_zero() && c >= 2)
        {
            continue;
        }
        chosen.push(i);
        let rows: Vec<Vec<Elem>> = chosen.iter().map(|&j| cand[j].clone()).collect();
        let independent = Mat::from_elem_rows(f, v.len(), &rows)
            .expect("equal lengths")
            .rank()
            == rows.len();
        if independent {
            for (x, c) in v.iter().zip(counts.iter_mut()) {
                if !x.is_zero() {
                    *c += 1;
                }
            }
            if backtrack(f, cand, r, i + 1, chosen, counts) {
                return true;
            }
            for (x, c) in v.iter().zip(counts.iter_mut()) {
                if !x.is_zero() {
                    *c -= 1;
                }
            }
        }
        chosen.pop();
    }
    false
}
