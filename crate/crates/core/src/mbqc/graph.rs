use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::OutcomeRecord;
use crate::quantum::Octant;
use crate::{Error, Result};

/// Open graph `(V, E, I, O)` with a flow and a layered partial order.
///
/// Vertices are `0..n`. `layers` lists the measured vertices `V ∖ O` in
/// measurement order; vertices in the same layer are unordered. Output
/// vertices come after every layer.
///
/// The flow may be partial on `V ∖ O`: a measured vertex without a flow
/// successor is a terminal classical output (the last vertex of a fully
/// measured chain). Inputs are `|+⟩` states carrying `Z^x`, which the
/// protocol folds into measurement angles, so flow targets may be inputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphSpec", into = "GraphSpec")]
pub struct MeasurementGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    flow: BTreeMap<usize, usize>,
    layers: Vec<Vec<usize>>,
    rank: Vec<usize>,
    neighbors: Vec<Vec<usize>>,
}

/// Plain serialized form of a [`MeasurementGraph`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub inputs: Vec<usize>,
    #[serde(default)]
    pub outputs: Vec<usize>,
    #[serde(default)]
    pub flow: Vec<(usize, usize)>,
    pub layers: Vec<Vec<usize>>,
}

impl TryFrom<GraphSpec> for MeasurementGraph {
    type Error = Error;

    fn try_from(s: GraphSpec) -> Result<Self> {
        MeasurementGraph::new(s.vertices, s.edges, s.inputs, s.outputs, s.flow, s.layers)
    }
}

impl From<MeasurementGraph> for GraphSpec {
    fn from(g: MeasurementGraph) -> Self {
        GraphSpec {
            vertices: g.n,
            edges: g.edges,
            inputs: g.inputs,
            outputs: g.outputs,
            flow: g.flow.into_iter().collect(),
            layers: g.layers,
        }
    }
}

fn invalid(msg: String) -> Error {
    Error::InvalidGraph(msg)
}

impl MeasurementGraph {
    pub fn new(
        n: usize,
        edges: Vec<(usize, usize)>,
        inputs: Vec<usize>,
        outputs: Vec<usize>,
        flow: Vec<(usize, usize)>,
        layers: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(invalid("graph has no vertices".into()));
        }
        let in_range = |v: usize, what: &str| {
            if v < n {
                Ok(())
            } else {
                Err(invalid(format!("{what} vertex {v} not in 0..{n}")))
            }
        };

        let mut edge_set = BTreeSet::new();
        for &(a, b) in &edges {
            in_range(a, "edge")?;
            in_range(b, "edge")?;
            if a == b {
                return Err(invalid(format!("self-loop on vertex {a}")));
            }
            edge_set.insert((a.min(b), a.max(b)));
        }
        let edges: Vec<_> = edge_set.into_iter().collect();
        let mut neighbors = vec![Vec::new(); n];
        for &(a, b) in &edges {
            neighbors[a].push(b);
            neighbors[b].push(a);
        }

        let unique = |vs: &[usize], what: &str| -> Result<Vec<usize>> {
            let mut seen = BTreeSet::new();
            for &v in vs {
                in_range(v, what)?;
                if !seen.insert(v) {
                    return Err(invalid(format!("{what} vertex {v} listed twice")));
                }
            }
            Ok(seen.into_iter().collect())
        };
        let inputs = unique(&inputs, "input")?;
        let outputs = unique(&outputs, "output")?;

        let mut rank = vec![usize::MAX; n];
        for (i, layer) in layers.iter().enumerate() {
            if layer.is_empty() {
                return Err(invalid(format!("layer {i} is empty")));
            }
            for &v in layer {
                in_range(v, "layer")?;
                if outputs.contains(&v) {
                    return Err(invalid(format!("output vertex {v} appears in a measurement layer")));
                }
                if rank[v] != usize::MAX {
                    return Err(invalid(format!("vertex {v} appears in two layers")));
                }
                rank[v] = i;
            }
        }
        if let Some(v) = (0..n).find(|&v| rank[v] == usize::MAX && !outputs.contains(&v)) {
            return Err(invalid(format!("non-output vertex {v} is never measured")));
        }

        let mut flow_map = BTreeMap::new();
        let mut targets = BTreeSet::new();
        for &(v, fv) in &flow {
            in_range(v, "flow")?;
            in_range(fv, "flow")?;
            if outputs.contains(&v) {
                return Err(invalid(format!("flow defined on output vertex {v}")));
            }
            if flow_map.insert(v, fv).is_some() {
                return Err(invalid(format!("flow defined twice on vertex {v}")));
            }
            if !targets.insert(fv) {
                return Err(invalid(format!("flow is not injective at target {fv}")));
            }
            if !neighbors[v].contains(&fv) {
                return Err(invalid(format!("flow {v} → {fv} does not follow an edge")));
            }
            // Outputs have rank usize::MAX and are after everything.
            if rank[fv] <= rank[v] {
                return Err(invalid(format!("flow {v} → {fv} does not go forward in time")));
            }
            for &w in &neighbors[fv] {
                if w != v && rank[w] <= rank[v] {
                    return Err(invalid(format!(
                        "neighbour {w} of f({v}) = {fv} is measured no later than {v}"
                    )));
                }
            }
        }

        Ok(MeasurementGraph {
            n,
            edges,
            inputs,
            outputs,
            flow: flow_map,
            layers,
            rank,
            neighbors,
        })
    }

    /// Linear cluster `0 - 1 - … - n−1` with flow `i → i+1` and input 0.
    /// With `quantum_output` the last vertex is kept as an output qubit,
    /// otherwise every vertex is measured.
    pub fn chain(n: usize, quantum_output: bool) -> Result<Self> {
        if n == 0 {
            return Err(invalid("chain needs at least one vertex".into()));
        }
        let measured = if quantum_output { n - 1 } else { n };
        MeasurementGraph::new(
            n,
            (1..n).map(|i| (i - 1, i)).collect(),
            vec![0],
            if quantum_output { vec![n - 1] } else { vec![] },
            (1..n).map(|i| (i - 1, i)).collect(),
            (0..measured).map(|v| vec![v]).collect(),
        )
    }

    /// The two-qubit cluster of the two-client experiment. Both vertices are
    /// inputs; with `quantum_output` vertex 1 is returned instead of measured.
    pub fn two_chain(quantum_output: bool) -> Self {
        MeasurementGraph::new(
            2,
            vec![(0, 1)],
            vec![0, 1],
            if quantum_output { vec![1] } else { vec![] },
            vec![(0, 1)],
            if quantum_output {
                vec![vec![0]]
            } else {
                vec![vec![0], vec![1]]
            },
        )
        .expect("two-chain is a valid open graph")
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn is_input(&self, v: usize) -> bool {
        self.inputs.binary_search(&v).is_ok()
    }

    pub fn is_output(&self, v: usize) -> bool {
        self.outputs.binary_search(&v).is_ok()
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    /// Measured vertices in protocol order.
    pub fn measurement_order(&self) -> impl Iterator<Item = usize> + '_ {
        self.layers.iter().flatten().copied()
    }

    pub fn num_measured(&self) -> usize {
        self.n - self.outputs.len()
    }

    /// Layer index of a measured vertex; `None` for outputs.
    pub fn layer_of(&self, v: usize) -> Option<usize> {
        self.rank.get(v).copied().filter(|&r| r != usize::MAX)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn flow(&self, v: usize) -> Option<usize> {
        self.flow.get(&v).copied()
    }

    pub fn flow_inverse(&self, v: usize) -> Option<usize> {
        self.flow.iter().find(|(_, &fv)| fv == v).map(|(&w, _)| w)
    }

    /// Vertices whose corrected outcomes enter the `X` byproduct of `v`.
    pub fn x_dependencies(&self, v: usize) -> Vec<usize> {
        self.flow_inverse(v).into_iter().collect()
    }

    /// Vertices whose corrected outcomes enter the `Z` byproduct of `v`:
    /// every `w ≠ v` with `v ∈ N(f(w))`.
    pub fn z_dependencies(&self, v: usize) -> Vec<usize> {
        self.flow
            .iter()
            .filter(|&(&w, &fw)| w != v && self.neighbors[fw].contains(&v))
            .map(|(&w, _)| w)
            .collect()
    }

    /// Union of the `X` and `Z` dependencies, sorted.
    pub fn dependencies(&self, v: usize) -> Vec<usize> {
        let mut d = self.x_dependencies(v);
        d.extend(self.z_dependencies(v));
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Byproduct exponents `(s_X, s_Z)` for vertex `v` from corrected
    /// outcomes.
    pub fn byproduct(&self, v: usize, outcomes: &OutcomeRecord) -> Result<(bool, bool)> {
        let get = |w: usize| outcomes.corrected(w).ok_or(Error::MissingOutcome(w));
        let mut sx = false;
        for w in self.x_dependencies(v) {
            sx ^= get(w)?;
        }
        let mut sz = false;
        for w in self.z_dependencies(v) {
            sz ^= get(w)?;
        }
        Ok((sx, sz))
    }

    /// Corrected angle `φ′(v) = (−1)^{s_X} φ(v) + s_Z π`.
    pub fn corrected_phi(&self, v: usize, phi: Octant, outcomes: &OutcomeRecord) -> Result<Octant> {
        let (sx, sz) = self.byproduct(v, outcomes)?;
        Ok(phi.negate_if(sx).plus_pi_if(sz))
    }
}
