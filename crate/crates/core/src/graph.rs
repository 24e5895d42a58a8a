//! Graph representation, ingestion and preprocessing utilities.
//!
//! A [`Graph`] is a dense weighted adjacency matrix. Entry `(i, j)` holds the
//! weight of the edge `i -> j`; zero means absent. Undirected graphs store a
//! symmetric matrix.

use std::collections::{BTreeSet, HashMap};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: DMatrix<f64>,
    directed: bool,
    node_names: Option<Vec<String>>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph, checking squareness, finiteness, nonnegativity and,
    /// for undirected graphs, exact symmetry.
    pub fn new(adjacency: DMatrix<f64>, directed: bool) -> Result<Self> {
        if adjacency.nrows() != adjacency.ncols() {
            return Err(Error::ShapeMismatch(format!(
                "adjacency is {}x{}, expected square",
                adjacency.nrows(),
                adjacency.ncols()
            )));
        }
        if let Some(v) = adjacency.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(invalid(format!(
                "adjacency entries must be finite and nonnegative, found {v}"
            )));
        }
        if !directed && !is_symmetric(&adjacency) {
            return Err(invalid(
                "undirected graph requires a symmetric adjacency matrix",
            ));
        }
        Ok(Self {
            adjacency,
            directed,
            node_names: None,
            labels: None,
        })
    }

    /// Graph with no nodes.
    pub fn empty(directed: bool) -> Self {
        Self {
            adjacency: DMatrix::zeros(0, 0),
            directed,
            node_names: None,
            labels: None,
        }
    }

    pub fn with_node_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n() {
            return Err(Error::ShapeMismatch(format!(
                "{} node names for {} nodes",
                names.len(),
                self.n()
            )));
        }
        self.node_names = Some(names);
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::ShapeMismatch(format!(
                "{} labels for {} nodes",
                labels.len(),
                self.n()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.adjacency.nrows()
    }

    pub fn adjacency(&self) -> &DMatrix<f64> {
        &self.adjacency
    }

    pub fn into_adjacency(self) -> DMatrix<f64> {
        self.adjacency
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn node_names(&self) -> Option<&[String]> {
        self.node_names.as_deref()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Name of node `i`, falling back to its index.
    pub fn node_name(&self, i: usize) -> String {
        match &self.node_names {
            Some(names) => names[i].clone(),
            None => i.to_string(),
        }
    }

    /// True when every entry is 0 or 1.
    pub fn is_binary(&self) -> bool {
        self.adjacency.iter().all(|&v| v == 0.0 || v == 1.0)
    }

    pub fn has_loops(&self) -> bool {
        (0..self.n()).any(|i| self.adjacency[(i, i)] != 0.0)
    }

    /// Off-diagonal weighted out-degree (row sums).
    pub fn out_degrees(&self) -> Vec<f64> {
        let n = self.n();
        (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i)
                    .map(|j| self.adjacency[(i, j)])
                    .sum()
            })
            .collect()
    }

    /// Off-diagonal weighted in-degree (column sums).
    pub fn in_degrees(&self) -> Vec<f64> {
        let n = self.n();
        (0..n)
            .map(|j| {
                (0..n)
                    .filter(|&i| i != j)
                    .map(|i| self.adjacency[(i, j)])
                    .sum()
            })
            .collect()
    }

    /// Out-degree plus in-degree for directed graphs, plain degree otherwise.
    pub fn total_degrees(&self) -> Vec<f64> {
        let out = self.out_degrees();
        if !self.directed {
            return out;
        }
        out.iter()
            .zip(self.in_degrees())
            .map(|(o, i)| o + i)
            .collect()
    }

    /// Number of nonzero entries, counting each undirected edge once.
    pub fn edge_count(&self) -> usize {
        let n = self.n();
        let mut count = 0;
        for j in 0..n {
            for i in 0..n {
                if self.adjacency[(i, j)] != 0.0 && (self.directed || i <= j) {
                    count += 1;
                }
            }
        }
        count
    }

    /// Subgraph induced on `indices` (in the given order), carrying names and
    /// labels along.
    pub fn induced_subgraph(&self, indices: &[usize]) -> Graph {
        let k = indices.len();
        let adjacency = DMatrix::from_fn(k, k, |a, b| self.adjacency[(indices[a], indices[b])]);
        let pick = |v: &Option<Vec<String>>| {
            v.as_ref()
                .map(|v| indices.iter().map(|&i| v[i].clone()).collect())
        };
        Graph {
            adjacency,
            directed: self.directed,
            node_names: pick(&self.node_names),
            labels: pick(&self.labels),
        }
    }

    pub(crate) fn replace_adjacency(&self, adjacency: DMatrix<f64>, directed: bool) -> Graph {
        Graph {
            adjacency,
            directed,
            node_names: self.node_names.clone(),
            labels: self.labels.clone(),
        }
    }
}

pub(crate) fn is_symmetric(m: &DMatrix<f64>) -> bool {
    let n = m.nrows();
    m.ncols() == n && (0..n).all(|j| (0..j).all(|i| m[(i, j)] == m[(j, i)]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphProperties {
    pub is_symmetric: bool,
    pub is_loopless: bool,
    pub is_weighted: bool,
    pub is_fully_connected: bool,
}

pub fn graph_properties(g: &Graph) -> GraphProperties {
    GraphProperties {
        is_symmetric: is_symmetric(g.adjacency()),
        is_loopless: !g.has_loops(),
        is_weighted: !g.is_binary(),
        is_fully_connected: g.n() > 0 && connected_components(g).len() == 1,
    }
}

/// Weakly connected components, each sorted ascending, ordered by their
/// smallest member.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let a = g.adjacency();
    let mut component = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![start];
        component[start] = id;
        let mut head = 0;
        while head < members.len() {
            let u = members[head];
            head += 1;
            for v in 0..n {
                if component[v] == usize::MAX && (a[(u, v)] != 0.0 || a[(v, u)] != 0.0) {
                    component[v] = id;
                    members.push(v);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

fn lcc_indices(g: &Graph) -> Result<Vec<usize>> {
    let mut best: Option<Vec<usize>> = None;
    for c in connected_components(g) {
        if best.as_ref().map_or(true, |b| c.len() > b.len()) {
            best = Some(c);
        }
    }
    best.ok_or(Error::EmptyGraph)
}

/// Induced subgraph on the largest weakly connected component, with the
/// original indices of the kept nodes. Ties go to the component holding the
/// smallest node index.
pub fn largest_connected_component(g: &Graph) -> Result<(Graph, Vec<usize>)> {
    let kept = lcc_indices(g)?;
    Ok((g.induced_subgraph(&kept), kept))
}

/// Restricts every graph to the intersection of their largest connected
/// components.
pub fn multigraph_lcc_intersection(gs: &[Graph]) -> Result<(Vec<Graph>, Vec<usize>)> {
    let first = gs.first().ok_or(Error::EmptyGraph)?;
    if let Some(g) = gs.iter().find(|g| g.n() != first.n()) {
        return Err(Error::ShapeMismatch(format!(
            "graphs have {} and {} nodes",
            first.n(),
            g.n()
        )));
    }
    let mut kept: BTreeSet<usize> = lcc_indices(first)?.into_iter().collect();
    for g in &gs[1..] {
        let other: BTreeSet<usize> = lcc_indices(g)?.into_iter().collect();
        kept = kept.intersection(&other).copied().collect();
    }
    if kept.is_empty() {
        return Err(Error::Degenerate(
            "largest connected components do not intersect".into(),
        ));
    }
    let kept: Vec<usize> = kept.into_iter().collect();
    Ok((gs.iter().map(|g| g.induced_subgraph(&kept)).collect(), kept))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetrizeMethod {
    Average,
    Triu,
    Tril,
}

impl std::str::FromStr for SymmetrizeMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "average" | "avg" => Ok(Self::Average),
            "triu" => Ok(Self::Triu),
            "tril" => Ok(Self::Tril),
            other => Err(invalid(format!("unknown symmetrize method `{other}`"))),
        }
    }
}

pub fn symmetrize(g: &Graph, method: SymmetrizeMethod) -> Graph {
    let a = g.adjacency();
    let n = g.n();
    let out = DMatrix::from_fn(n, n, |i, j| match method {
        SymmetrizeMethod::Average => {
            let (lo, hi) = (i.min(j), i.max(j));
            (a[(lo, hi)] + a[(hi, lo)]) / 2.0
        }
        SymmetrizeMethod::Triu => a[(i.min(j), i.max(j))],
        SymmetrizeMethod::Tril => a[(i.max(j), i.min(j))],
    });
    g.replace_adjacency(out, false)
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Prefix of the optional header line that fixes node order and keeps
/// isolated nodes: `# nodes: a,b,c`.
pub const NODES_HEADER: &str = "# nodes:";

/// Reads a `source,target[,weight]` edge list. Blank lines and lines starting
/// with `#` are skipped; node names are assigned in order of first appearance
/// unless a leading `# nodes:` header lists them.
pub fn import_edge_list(text: &str, directed: bool) -> Result<Graph> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let header = text
        .lines()
        .enumerate()
        .find(|(_, l)| !l.trim().is_empty())
        .and_then(|(k, l)| {
            l.trim()
                .strip_prefix(NODES_HEADER)
                .map(|rest| (k + 1, rest))
        });
    if let Some((lineno, rest)) = header {
        for name in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if index.insert(name.to_string(), names.len()).is_some() {
                return Err(parse_error(lineno, format!("node `{name}` listed twice")));
            }
            names.push(name.to_string());
        }
    }
    let mut id_of = |name: &str| -> usize {
        if let Some(&i) = index.get(name) {
            return i;
        }
        names.push(name.to_string());
        index.insert(name.to_string(), names.len() - 1);
        names.len() - 1
    };

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(parse_error(
                lineno,
                format!("expected 2 or 3 fields, found {}", fields.len()),
            ));
        }
        if fields[0].is_empty() || fields[1].is_empty() {
            return Err(parse_error(lineno, "empty node name"));
        }
        let weight = match fields.get(2) {
            None => 1.0,
            Some(w) => {
                let w: f64 = w
                    .parse()
                    .map_err(|_| parse_error(lineno, format!("non-numeric weight `{w}`")))?;
                if !w.is_finite() {
                    return Err(parse_error(lineno, "weight must be finite"));
                }
                if w < 0.0 {
                    return Err(parse_error(lineno, format!("negative weight {w}")));
                }
                w
            }
        };
        let s = id_of(fields[0]);
        let t = id_of(fields[1]);
        edges.push((s, t, weight));
    }

    let n = names.len();
    let mut a = DMatrix::zeros(n, n);
    for (s, t, w) in edges {
        a[(s, t)] = w;
        if !directed {
            a[(t, s)] = w;
        }
    }
    Graph::new(a, directed)?.with_node_names(names)
}

/// Reads a square grid of comma-separated numbers. When `directed` is `None`
/// the graph is undirected exactly when the matrix is symmetric.
pub fn import_adjacency_csv(text: &str, directed: Option<bool>) -> Result<Graph> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .map(|f| {
                f.trim().parse::<f64>().map_err(|_| {
                    parse_error(lineno + 1, format!("non-numeric entry `{}`", f.trim()))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::ShapeMismatch(format!(
            "row {} has {} entries, expected {n}",
            i + 1,
            r.len()
        )));
    }
    let a = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let directed = directed.unwrap_or_else(|| !is_symmetric(&a));
    Graph::new(a, directed)
}

/// Writes the graph as an edge list, one line per nonzero entry (upper
/// triangle only for undirected graphs). Unit weights are omitted.
pub fn export_edge_list(g: &Graph) -> Result<String> {
    let n = g.n();
    let names: Vec<String> = (0..n).map(|i| g.node_name(i)).collect();
    if let Some(bad) = names.iter().find(|s| {
        s.contains(',') || s.contains('\n') || s.starts_with('#') || s.trim() != s.as_str()
    }) {
        return Err(invalid(format!(
            "node name `{bad}` cannot be written to an edge list"
        )));
    }
    let a = g.adjacency();
    let mut out = String::new();
    for i in 0..n {
        let start = if g.is_directed() { 0 } else { i };
        for j in start..n {
            let w = a[(i, j)];
            if w == 0.0 {
                continue;
            }
            if w == 1.0 {
                out.push_str(&format!("{},{}\n", names[i], names[j]));
            } else {
                out.push_str(&format!("{},{},{}\n", names[i], names[j], w));
            }
        }
    }
    Ok(out)
}

/// [`export_edge_list`] preceded by a `# nodes:` header, so that reading the
/// file back restores node order and isolated nodes.
pub fn export_edge_list_with_nodes(g: &Graph) -> Result<String> {
    let body = export_edge_list(g)?;
    let names: Vec<String> = (0..g.n()).map(|i| g.node_name(i)).collect();
    Ok(format!("{NODES_HEADER} {}\n{body}", names.join(",")))
}

/// Adjacency matrix as CSV (also used for probability matrices).
pub fn matrix_to_csv(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{}", m[(i, j)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Serialized form of a graph: `{"n","directed","node_names","edges"}` with
/// edges `[i, j, w]` sorted by `(i, j)`. Undirected graphs list `i <= j` only.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub directed: bool,
    pub node_names: Option<Vec<String>>,
    pub edges: Vec<(usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        let n = g.n();
        let a = g.adjacency();
        let mut edges = Vec::new();
        for i in 0..n {
            let start = if g.is_directed() { 0 } else { i };
            for j in start..n {
                if a[(i, j)] != 0.0 {
                    edges.push((i, j, a[(i, j)]));
                }
            }
        }
        GraphJson {
            n,
            directed: g.is_directed(),
            node_names: g.node_names.clone(),
            edges,
            labels: g.labels.clone(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Graph> {
        let mut a = DMatrix::zeros(j.n, j.n);
        for &(s, t, w) in &j.edges {
            if s >= j.n || t >= j.n {
                return Err(invalid(format!(
                    "edge ({s},{t}) out of range for n={}",
                    j.n
                )));
            }
            a[(s, t)] = w;
            if !j.directed {
                a[(t, s)] = w;
            }
        }
        let mut g = Graph::new(a, j.directed)?;
        if let Some(names) = j.node_names {
            g = g.with_node_names(names)?;
        }
        if let Some(labels) = j.labels {
            g = g.with_labels(labels)?;
        }
        Ok(g)
    }
}

pub fn graph_to_json(g: &Graph) -> Result<String> {
    crate::json::to_canonical_string(&GraphJson::from(g))
}

pub fn graph_from_json(text: &str) -> Result<Graph> {
    let j: GraphJson = serde_json::from_str(text)?;
    Graph::try_from(j)
}
