//! Exact discrete models: invariant measures of a finite cost graph.
//!
//! Stationary (flow-conserving) probability measures on the edges of a
//! directed graph form a polytope whose extreme points are uniform cycle
//! measures, so action minimization is a linear program and minimum mean
//! cycle (Karp's algorithm) is an independent oracle for its value. Edges
//! carry integer homology labels; pairing them against a cohomology vector
//! tilts the cost without changing the dynamics.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::convex::{AffinePiece, PiecewiseConvexFunction};
use crate::export;
use crate::lp::{self, Constraint, LinearProgram, LpError, OptimalFace};
use crate::measure::{BasePoint, DiscreteMeasure, MeasurePolytope, PhasePoint, StateSpace};
use crate::rng;
use rand::Rng;

/// A directed edge with a real cost and an integer homology label.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub cost: f64,
    #[serde(rename = "h", default)]
    pub homology: Vec<i64>,
}

/// A finite directed graph with edge costs and homology labels.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CostGraph {
    #[serde(rename = "nodes")]
    pub node_count: usize,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, Error)]
pub enum GraphError {
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("graph has no directed cycle")]
    NoCycle,
    #[error("cohomology vector has length {got}, homology labels have length {expected}")]
    CohomologyLength { expected: usize, got: usize },
    #[error("measure has length {got}, graph has {expected} edges")]
    SupportMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl CostGraph {
    pub fn new(node_count: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let g = CostGraph { node_count, edges };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        if self.node_count == 0 || self.edges.is_empty() {
            return Err(GraphError::Invalid("empty graph".into()));
        }
        let b = self.homology_dim();
        for (i, e) in self.edges.iter().enumerate() {
            if e.tail >= self.node_count || e.head >= self.node_count {
                return Err(GraphError::Invalid(format!(
                    "edge {i} endpoints ({}, {}) out of range",
                    e.tail, e.head
                )));
            }
            if !e.cost.is_finite() {
                return Err(GraphError::Invalid(format!("edge {i} has non-finite cost")));
            }
            if e.homology.len() != b {
                return Err(GraphError::Invalid(format!(
                    "edge {i} homology length {} != {}",
                    e.homology.len(),
                    b
                )));
            }
        }
        Ok(())
    }

    /// Dimension of the homology labels (0 when untilted).
    pub fn homology_dim(&self) -> usize {
        self.edges.first().map_or(0, |e| e.homology.len())
    }

    /// Edge costs tilted by a cohomology vector: `cost - c . h`.
    pub fn tilted_costs(&self, c: &[f64]) -> Result<Vec<f64>, GraphError> {
        let b = self.homology_dim();
        if c.len() != b {
            return Err(GraphError::CohomologyLength { expected: b, got: c.len() });
        }
        Ok(self
            .edges
            .iter()
            .map(|e| {
                e.cost
                    - c.iter()
                        .zip(&e.homology)
                        .map(|(ci, &hi)| ci * hi as f64)
                        .sum::<f64>()
            })
            .collect())
    }

    /// Parse the text edge-list format: one edge per line,
    /// `tail head cost h1 h2 ...`; blank lines and `#` comments are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        let mut node_count = 0usize;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() < 3 {
                return Err(GraphError::Parse {
                    line: lineno + 1,
                    message: "expected at least `tail head cost`".into(),
                });
            }
            let parse_usize = |s: &str, what: &str| {
                s.parse::<usize>().map_err(|_| GraphError::Parse {
                    line: lineno + 1,
                    message: format!("invalid {what} '{s}'"),
                })
            };
            let tail = parse_usize(fields[0], "tail")?;
            let head = parse_usize(fields[1], "head")?;
            let cost = fields[2].parse::<f64>().map_err(|_| GraphError::Parse {
                line: lineno + 1,
                message: format!("invalid cost '{}'", fields[2]),
            })?;
            let homology = fields[3..]
                .iter()
                .map(|s| {
                    s.parse::<i64>().map_err(|_| GraphError::Parse {
                        line: lineno + 1,
                        message: format!("invalid homology label '{s}'"),
                    })
                })
                .collect::<Result<Vec<i64>, _>>()?;
            node_count = node_count.max(tail + 1).max(head + 1);
            edges.push(Edge { tail, head, cost, homology });
        }
        CostGraph::new(node_count, edges)
    }

    /// Phase points are edges (fibered over their tail node), base points are
    /// nodes.
    pub fn state_space(&self) -> StateSpace {
        let base_points = (0..self.node_count)
            .map(|i| BasePoint { label: format!("n{i}"), coords: vec![i as f64] })
            .collect();
        let phase_points = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| PhasePoint {
                label: format!("e{i}:{}->{}", e.tail, e.head),
                base_index: e.tail,
                coords: vec![e.head as f64],
            })
            .collect();
        StateSpace { base_points, phase_points }
    }
}

/// A simple directed cycle carrying the uniform measure `1/length` per edge.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CycleMeasure {
    /// Edge indices in traversal order; consecutive edges chain and the last
    /// edge returns to the first tail.
    pub edges: Vec<usize>,
}

impl CycleMeasure {
    pub fn new(g: &CostGraph, edges: Vec<usize>) -> Result<Self, GraphError> {
        if edges.is_empty() {
            return Err(GraphError::Invalid("empty cycle".into()));
        }
        for w in edges.windows(2) {
            if g.edges[w[0]].head != g.edges[w[1]].tail {
                return Err(GraphError::Invalid("cycle edges do not chain".into()));
            }
        }
        let first = edges[0];
        let last = *edges.last().unwrap();
        if g.edges[last].head != g.edges[first].tail {
            return Err(GraphError::Invalid("cycle does not close".into()));
        }
        Ok(CycleMeasure { edges })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Mean cost of the cycle under the given edge costs.
    pub fn mean_cost(&self, costs: &[f64]) -> f64 {
        self.edges.iter().map(|&e| costs[e]).sum::<f64>() / self.len() as f64
    }

    /// The uniform edge measure supported on this cycle.
    pub fn measure(&self, g: &CostGraph) -> DiscreteMeasure {
        DiscreteMeasure::uniform(&self.edges, g.edges.len())
    }
}

// ---------------------------------------------------------------------------
// Karp's minimum mean cycle
// ---------------------------------------------------------------------------

/// Minimum mean cycle via Karp's recurrence, run per strongly connected
/// component: `mean = min_v max_k (D_n(v) - D_k(v)) / (n - k)` over walk
/// lengths `k < n`. The attaining cycle is traced through the tight subgraph
/// of the shifted costs, where every parent step preserves optimality.
pub fn karp_min_mean_cycle(g: &CostGraph) -> Result<(f64, CycleMeasure), GraphError> {
    karp_with_costs(g, &g.edges.iter().map(|e| e.cost).collect::<Vec<f64>>())
}

/// Karp's algorithm on tilted costs `cost - c . h`.
pub fn karp_with_tilt(g: &CostGraph, c: &[f64]) -> Result<(f64, CycleMeasure), GraphError> {
    karp_with_costs(g, &g.tilted_costs(c)?)
}

fn karp_with_costs(g: &CostGraph, costs: &[f64]) -> Result<(f64, CycleMeasure), GraphError> {
    g.validate()?;
    let comps = strongly_connected_components(g);
    let mut best: Option<(f64, usize)> = None; // (mean, component id)
    for (cid, comp) in comps.iter().enumerate() {
        if let Some(mean) = karp_mean_in_component(g, costs, comp) {
            if best.map_or(true, |(m, _)| mean < m) {
                best = Some((mean, cid));
            }
        }
    }
    let Some((mean, cid)) = best else {
        return Err(GraphError::NoCycle);
    };
    let cycle = extract_tight_cycle(g, costs, &comps[cid], mean)?;
    Ok((mean, cycle))
}

/// Karp's table restricted to one component; `None` if it has no cycle.
fn karp_mean_in_component(g: &CostGraph, costs: &[f64], comp: &[usize]) -> Option<f64> {
    let s = comp.len();
    let local: Vec<Option<usize>> = {
        let mut map = vec![None; g.node_count];
        for (i, &v) in comp.iter().enumerate() {
            map[v] = Some(i);
        }
        map
    };
    let internal: Vec<(usize, usize, f64)> = g
        .edges
        .iter()
        .enumerate()
        .filter_map(|(i, e)| match (local[e.tail], local[e.head]) {
            (Some(t), Some(h)) => Some((t, h, costs[i])),
            _ => None,
        })
        .collect();
    if internal.is_empty() {
        return None;
    }

    // D[k][v]: minimum cost of a k-edge walk from the component source.
    let source = 0usize;
    let mut d = vec![vec![f64::INFINITY; s]; s + 1];
    d[0][source] = 0.0;
    for k in 1..=s {
        for &(t, h, w) in &internal {
            if d[k - 1][t].is_finite() && d[k - 1][t] + w < d[k][h] {
                d[k][h] = d[k - 1][t] + w;
            }
        }
    }
    let mut mean = f64::INFINITY;
    for v in 0..s {
        if !d[s][v].is_finite() {
            continue;
        }
        let mut worst = f64::NEG_INFINITY;
        for k in 0..s {
            if d[k][v].is_finite() {
                worst = worst.max((d[s][v] - d[k][v]) / (s - k) as f64);
            }
        }
        if worst.is_finite() {
            mean = mean.min(worst);
        }
    }
    mean.is_finite().then_some(mean)
}

/// After subtracting the optimal mean, shortest-path potentials make every
/// minimum-mean cycle tight; any cycle of tight edges attains the mean.
fn extract_tight_cycle(
    g: &CostGraph,
    costs: &[f64],
    comp: &[usize],
    mean: f64,
) -> Result<CycleMeasure, GraphError> {
    let mut local = vec![None; g.node_count];
    for (i, &v) in comp.iter().enumerate() {
        local[v] = Some(i);
    }
    let s = comp.len();
    let internal: Vec<(usize, usize, usize)> = g
        .edges
        .iter()
        .enumerate()
        .filter_map(|(i, e)| match (local[e.tail], local[e.head]) {
            (Some(t), Some(h)) => Some((i, t, h)),
            _ => None,
        })
        .collect();

    // Bellman-Ford on shifted costs (no negative cycles remain).
    let mut dist = vec![0.0_f64; s];
    for _ in 0..s {
        let mut changed = false;
        for &(i, t, h) in &internal {
            let w = costs[i] - mean;
            if dist[t] + w < dist[h] - 1e-12 {
                dist[h] = dist[t] + w;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let scale = 1e-9 * (1.0 + costs.iter().fold(0.0_f64, |m, c| m.max(c.abs())));
    let tight: Vec<Vec<(usize, usize)>> = {
        let mut adj = vec![Vec::new(); s];
        for &(i, t, h) in &internal {
            if (dist[t] + costs[i] - mean - dist[h]).abs() <= scale {
                adj[t].push((h, i));
            }
        }
        adj
    };

    // DFS for a cycle in the tight subgraph.
    let mut color = vec![0u8; s]; // 0 white, 1 gray, 2 black
    for start in 0..s {
        if color[start] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        let mut path_edges: Vec<usize> = Vec::new();
        let mut path_nodes: Vec<usize> = vec![start];
        color[start] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < tight[v].len() {
                let (h, eidx) = tight[v][*next];
                *next += 1;
                if color[h] == 1 {
                    // Found a cycle: cut the path at the repeated node.
                    let pos = path_nodes.iter().position(|&n| n == h).unwrap();
                    let mut cycle_edges = path_edges[pos..].to_vec();
                    cycle_edges.push(eidx);
                    let cycle = CycleMeasure::new(g, cycle_edges)?;
                    debug_assert!(
                        (cycle.mean_cost(costs) - mean).abs() <= 1e-6 * (1.0 + mean.abs())
                    );
                    return Ok(cycle);
                }
                if color[h] == 0 {
                    color[h] = 1;
                    stack.push((h, 0));
                    path_edges.push(eidx);
                    path_nodes.push(h);
                }
            } else {
                color[v] = 2;
                stack.pop();
                path_nodes.pop();
                path_edges.pop();
            }
        }
    }
    Err(GraphError::NoCycle)
}

/// Tarjan's strongly connected components (iterative).
fn strongly_connected_components(g: &CostGraph) -> Vec<Vec<usize>> {
    let n = g.node_count;
    let mut adj = vec![Vec::new(); n];
    for e in &g.edges {
        adj[e.tail].push(e.head);
    }
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0usize;

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if *next < adj[v].len() {
                let w = adj[v][*next];
                *next += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

// ---------------------------------------------------------------------------
// invariant polytope and minimizing measures
// ---------------------------------------------------------------------------

/// Flow-conservation polytope: per-node inflow equals outflow, total mass 1.
/// Its extreme points are uniform cycle measures.
pub fn invariant_polytope(g: &CostGraph) -> MeasurePolytope {
    let ne = g.edges.len();
    let mut rows = Vec::with_capacity(g.node_count);
    for v in 0..g.node_count {
        let mut coeffs = vec![0.0; ne];
        for (i, e) in g.edges.iter().enumerate() {
            if e.head == v {
                coeffs[i] += 1.0;
            }
            if e.tail == v {
                coeffs[i] -= 1.0;
            }
        }
        rows.push(Constraint::eq(coeffs, 0.0));
    }
    MeasurePolytope::with_mass(g.state_space(), rows)
}

/// Minimize the tilted action `sum (cost(e) - c . h(e)) mu(e)` over the
/// invariant polytope and extract the optimal face.
pub fn minimizing_measures_lp(
    g: &CostGraph,
    c: &[f64],
    face_tol: Option<f64>,
    budget: usize,
    seed: u64,
) -> Result<OptimalFace, GraphError> {
    let costs = g.tilted_costs(c)?;
    let poly = invariant_polytope(g);
    Ok(lp::optimal_face(&poly.lp(costs), face_tol, budget, seed)?)
}

/// Homology average `rho(mu) = sum_e mu(e) h(e)`; affine in the measure.
pub fn rotation_vector(mu: &DiscreteMeasure, g: &CostGraph) -> Result<Vec<f64>, GraphError> {
    if mu.len() != g.edges.len() {
        return Err(GraphError::SupportMismatch { expected: g.edges.len(), got: mu.len() });
    }
    let b = g.homology_dim();
    let mut rho = vec![0.0; b];
    for (e, &w) in g.edges.iter().zip(&mu.weights) {
        for (r, &h) in rho.iter_mut().zip(&e.homology) {
            *r += w * h as f64;
        }
    }
    Ok(rho)
}

/// Peel an edge measure into weighted cycles; every invariant measure
/// decomposes this way in at most `|E|` rounds.
pub fn decompose_into_cycles(
    g: &CostGraph,
    mu: &DiscreteMeasure,
    tol: f64,
) -> Result<Vec<(CycleMeasure, f64)>, GraphError> {
    if mu.len() != g.edges.len() {
        return Err(GraphError::SupportMismatch { expected: g.edges.len(), got: mu.len() });
    }
    let mut remaining = mu.weights.clone();
    let mut out = Vec::new();
    for _ in 0..=g.edges.len() {
        // Follow positive-weight edges until a node repeats.
        let Some(start_edge) = remaining.iter().position(|&w| w > tol) else {
            return Ok(out);
        };
        let mut node = g.edges[start_edge].tail;
        let mut seen: Vec<(usize, usize)> = Vec::new(); // (node, outgoing edge)
        loop {
            if let Some(pos) = seen.iter().position(|&(n, _)| n == node) {
                let cycle_edges: Vec<usize> = seen[pos..].iter().map(|&(_, e)| e).collect();
                let w = cycle_edges
                    .iter()
                    .map(|&e| remaining[e])
                    .fold(f64::INFINITY, f64::min);
                for &e in &cycle_edges {
                    remaining[e] -= w;
                }
                out.push((CycleMeasure::new(g, cycle_edges)?, w));
                break;
            }
            let Some((eidx, e)) = g
                .edges
                .iter()
                .enumerate()
                .find(|(i, e)| e.tail == node && remaining[*i] > tol)
            else {
                // Conservation violated beyond tolerance.
                return Err(GraphError::Invalid(format!(
                    "measure is not flow-conserving at node {node}"
                )));
            };
            seen.push((node, eidx));
            node = e.head;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// alpha function
// ---------------------------------------------------------------------------

/// One sample of the alpha function.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphaSample {
    pub c: Vec<f64>,
    pub alpha: f64,
    /// Rotation vector of a minimizing measure at this tilt.
    pub rotation: Vec<f64>,
}

/// Sampled alpha function with its supporting-piece envelope.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphaCurve {
    pub samples: Vec<AlphaSample>,
    /// `alpha(c) = max over minimizers of (rho . c - cost)`: convex and
    /// piecewise linear; pieces collected from the sampled minimizers.
    /// `None` when the graph carries no homology labels (alpha is a number).
    pub envelope: Option<PiecewiseConvexFunction>,
}

impl AlphaCurve {
    /// CSV rows `c..., alpha`.
    pub fn to_csv(&self) -> String {
        let b = self.samples.first().map_or(0, |s| s.c.len());
        let mut out = String::new();
        let mut header: Vec<String> = (0..b).map(|i| format!("c_{i}")).collect();
        header.push("alpha".into());
        out.push_str(&export::csv_record(header));
        for s in &self.samples {
            let mut fields: Vec<String> = s.c.iter().map(|&x| export::fmt_f64(x)).collect();
            fields.push(export::fmt_f64(s.alpha));
            out.push_str(&export::csv_record(fields));
        }
        out
    }
}

/// Sample `alpha(c) = -min` of the tilted action over a grid of cohomology
/// vectors. The subdifferential of alpha at `c` contains the rotation vectors
/// of the minimizing measures, which furnish supporting affine pieces.
pub fn alpha_function(g: &CostGraph, c_grid: &[Vec<f64>]) -> Result<AlphaCurve, GraphError> {
    if c_grid.is_empty() {
        return Err(GraphError::Invalid("empty cohomology grid".into()));
    }
    let poly = invariant_polytope(g);
    let mut samples = Vec::with_capacity(c_grid.len());
    let mut pieces: Vec<AffinePiece> = Vec::new();
    for c in c_grid {
        let costs = g.tilted_costs(c)?;
        let sol = lp::solve(&poly.lp(costs))?;
        let mu = DiscreteMeasure::from_lp_point(&sol.point)
            .map_err(|e| GraphError::Invalid(e.to_string()))?;
        let rho = rotation_vector(&mu, g)?;
        let alpha = -sol.value;
        // untilted action of the minimizer = value + c . rho
        let untilted: f64 = sol.value + crate::linalg::dot(c, &rho);
        let piece = AffinePiece::new(rho.clone(), -untilted);
        let is_new = pieces.iter().all(|p| {
            (p.offset - piece.offset).abs() > 1e-10
                || p.gradient
                    .iter()
                    .zip(&piece.gradient)
                    .any(|(a, b)| (a - b).abs() > 1e-10)
        });
        if is_new {
            pieces.push(piece);
        }
        samples.push(AlphaSample { c: c.clone(), alpha, rotation: rho });
    }
    let envelope = if g.homology_dim() == 0 {
        None
    } else {
        Some(
            PiecewiseConvexFunction::new(pieces, 0.0)
                .map_err(|e| GraphError::Invalid(e.to_string()))?,
        )
    };
    Ok(AlphaCurve { samples, envelope })
}

// ---------------------------------------------------------------------------
// seeded random graphs
// ---------------------------------------------------------------------------

/// Seeded random graph with a Hamiltonian backbone cycle (so a cycle always
/// exists), extra uniform edges, costs uniform in [-1, 1], and homology
/// labels in {-1, 0, 1}.
pub fn random_cost_graph(
    seed: u64,
    max_nodes: usize,
    max_edges: usize,
    homology_dim: usize,
) -> CostGraph {
    let mut rng = rng::stream(seed, 0);
    let n = rng.random_range(2..=max_nodes.max(2));
    let order = rng::shuffled_indices(&mut rng, n);
    let mut edges = Vec::new();
    let mut rand_edge = |rng: &mut rand_chacha::ChaCha12Rng, tail: usize, head: usize| Edge {
        tail,
        head,
        cost: rng.random_range(-1.0..1.0),
        homology: (0..homology_dim).map(|_| rng.random_range(-1..=1i64)).collect(),
    };
    for i in 0..n {
        let tail = order[i];
        let head = order[(i + 1) % n];
        let e = rand_edge(&mut rng, tail, head);
        edges.push(e);
    }
    let extra = rng.random_range(0..=max_edges.saturating_sub(n));
    for _ in 0..extra {
        let tail = rng.random_range(0..n);
        let head = rng.random_range(0..n);
        let e = rand_edge(&mut rng, tail, head);
        edges.push(e);
    }
    CostGraph { node_count: n, edges }
}

/// Enumerate all simple cycles (test oracle scale only).
pub fn enumerate_simple_cycles(g: &CostGraph) -> Vec<CycleMeasure> {
    let mut out: Vec<CycleMeasure> = Vec::new();
    // DFS over edge paths starting at each minimal start node.
    fn extend(
        g: &CostGraph,
        start: usize,
        node: usize,
        used_nodes: &mut Vec<usize>,
        path: &mut Vec<usize>,
        out: &mut Vec<CycleMeasure>,
    ) {
        for (i, e) in g.edges.iter().enumerate() {
            if e.tail != node {
                continue;
            }
            if e.head == start {
                let mut edges = path.clone();
                edges.push(i);
                if let Ok(c) = CycleMeasure::new(g, edges) {
                    let is_new = out.iter().all(|u| {
                        u.edges.len() != c.edges.len()
                            || !same_cycle(&u.edges, &c.edges)
                    });
                    if is_new {
                        out.push(c);
                    }
                }
            } else if e.head > start && !used_nodes.contains(&e.head) {
                used_nodes.push(e.head);
                path.push(i);
                extend(g, start, e.head, used_nodes, path, out);
                path.pop();
                used_nodes.pop();
            }
        }
    }
    fn same_cycle(a: &[usize], b: &[usize]) -> bool {
        let k = a.len();
        (0..k).any(|shift| (0..k).all(|i| a[i] == b[(i + shift) % k]))
    }
    for start in 0..g.node_count {
        let mut used = vec![start];
        let mut path = Vec::new();
        extend(g, start, start, &mut used, &mut path, &mut out);
    }
    out
}
