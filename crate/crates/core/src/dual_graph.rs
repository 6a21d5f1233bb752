//! Weighted dual graphs of curve configurations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::lattice::{LatticeError, SurfaceModel};
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("self-loop on `{0}`")]
    SelfLoop(String),
    #[error("edge multiplicity must be positive")]
    NonPositiveMultiplicity,
    #[error("`{name}` is not a smooth rational (-1)-vertex")]
    NotMinusOne { name: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    pub self_intersection: BigInt,
    pub genus: BigRational,
}

impl Vertex {
    /// `K·E` by adjunction.
    pub fn canonical_degree(&self) -> BigRational {
        let two = BigRational::from_integer(BigInt::from(2));
        &two * &self.genus - two - BigRational::from_integer(self.self_intersection.clone())
    }
}

/// Vertices are kept in name order; edges are keyed by vertex indices
/// `(i, j)` with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightedDualGraph {
    vertices: Vec<Vertex>,
    edges: BTreeMap<(usize, usize), BigInt>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphShape {
    Chain,
    Fork(usize),
    Tree,
    HasCycle,
    Disconnected,
}

impl fmt::Display for GraphShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphShape::Chain => write!(f, "chain"),
            GraphShape::Fork(k) => write!(f, "{k}-fork"),
            GraphShape::Tree => write!(f, "tree"),
            GraphShape::HasCycle => write!(f, "has-cycle"),
            GraphShape::Disconnected => write!(f, "disconnected"),
        }
    }
}

impl WeightedDualGraph {
    /// Builds a graph of genus-0 vertices from `(name, self²)` pairs and
    /// `(a, b, multiplicity)` edges.
    pub fn from_parts(
        vertices: &[(&str, i64)],
        edges: &[(&str, &str, i64)],
    ) -> Result<Self, GraphError> {
        let mut g = WeightedDualGraph::default();
        for (name, w) in vertices {
            g.add_vertex(name, BigInt::from(*w), BigRational::zero())?;
        }
        for (a, b, m) in edges {
            g.add_edge(a, b, BigInt::from(*m))?;
        }
        Ok(g)
    }

    pub fn add_vertex(
        &mut self,
        name: &str,
        self_intersection: BigInt,
        genus: BigRational,
    ) -> Result<(), GraphError> {
        let pos = match self.vertices.binary_search_by(|v| v.name.as_str().cmp(name)) {
            Ok(_) => return Err(GraphError::DuplicateVertex(name.to_string())),
            Err(p) => p,
        };
        // shift edge indices at or above the insertion point
        self.edges = std::mem::take(&mut self.edges)
            .into_iter()
            .map(|((i, j), m)| {
                let bump = |k: usize| if k >= pos { k + 1 } else { k };
                ((bump(i), bump(j)), m)
            })
            .collect();
        self.vertices.insert(pos, Vertex { name: name.to_string(), self_intersection, genus });
        Ok(())
    }

    /// Adds `multiplicity` to the edge between `a` and `b`.
    pub fn add_edge(&mut self, a: &str, b: &str, multiplicity: BigInt) -> Result<(), GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a.to_string()));
        }
        if multiplicity <= BigInt::zero() {
            return Err(GraphError::NonPositiveMultiplicity);
        }
        let i = self.index(a)?;
        let j = self.index(b)?;
        let key = (i.min(j), i.max(j));
        *self.edges.entry(key).or_insert_with(BigInt::zero) += multiplicity;
        Ok(())
    }

    pub fn index(&self, name: &str) -> Result<usize, GraphError> {
        self.vertices
            .binary_search_by(|v| v.name.as_str().cmp(name))
            .map_err(|_| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges as `(name, name, multiplicity)` in index order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, &BigInt)> {
        self.edges
            .iter()
            .map(|(&(i, j), m)| (self.vertices[i].name.as_str(), self.vertices[j].name.as_str(), m))
    }

    pub fn multiplicity(&self, a: usize, b: usize) -> BigInt {
        self.edges.get(&(a.min(b), a.max(b))).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn has_multi_edge(&self) -> bool {
        self.edges.values().any(|m| *m > BigInt::one())
    }

    /// Number of incident edges, counted with multiplicity.
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|((i, j), _)| *i == v || *j == v)
            .map(|(_, m)| usize::try_from(m).unwrap_or(usize::MAX))
            .sum()
    }

    pub fn intersection_matrix(&self) -> linalg::Matrix {
        let n = self.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            self.vertices[i].self_intersection.clone()
                        } else {
                            self.multiplicity(i, j)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Induced subgraph on the named vertices.
    pub fn induced(&self, names: &BTreeSet<String>) -> Result<WeightedDualGraph, GraphError> {
        let mut g = WeightedDualGraph::default();
        for n in names {
            let v = &self.vertices[self.index(n)?];
            g.add_vertex(n, v.self_intersection.clone(), v.genus.clone())?;
        }
        for (a, b, m) in self.edges() {
            if names.contains(a) && names.contains(b) {
                g.add_edge(a, b, m.clone())?;
            }
        }
        Ok(g)
    }

    /// Contracts a smooth rational (-1)-vertex: every neighbour gains
    /// `m²` in self-intersection and `m(m-1)/2` in arithmetic genus, and
    /// neighbours `a`, `b` gain `m_a·m_b` in mutual multiplicity.
    pub fn blow_down_vertex(&self, name: &str) -> Result<WeightedDualGraph, GraphError> {
        let v = self.index(name)?;
        let vert = &self.vertices[v];
        if vert.self_intersection != -BigInt::one() || !vert.genus.is_zero() {
            return Err(GraphError::NotMinusOne { name: name.to_string() });
        }
        let neighbours: Vec<(usize, BigInt)> = (0..self.len())
            .filter(|&u| u != v)
            .map(|u| (u, self.multiplicity(u, v)))
            .filter(|(_, m)| !m.is_zero())
            .collect();
        let mut g = WeightedDualGraph::default();
        for (u, vx) in self.vertices.iter().enumerate() {
            if u == v {
                continue;
            }
            let m = neighbours.iter().find(|(w, _)| *w == u).map(|(_, m)| m.clone());
            let (s, genus) = match m {
                Some(m) => {
                    let extra = BigRational::new(&m * (&m - BigInt::one()), BigInt::from(2));
                    (&vx.self_intersection + &m * &m, &vx.genus + extra)
                }
                None => (vx.self_intersection.clone(), vx.genus.clone()),
            };
            g.add_vertex(&vx.name, s, genus)?;
        }
        for (a, b, m) in self.edges() {
            if a != name && b != name {
                g.add_edge(a, b, m.clone())?;
            }
        }
        for (x, (a, ma)) in neighbours.iter().enumerate() {
            for (b, mb) in &neighbours[x + 1..] {
                g.add_edge(&self.vertices[*a].name, &self.vertices[*b].name, ma * mb)?;
            }
        }
        Ok(g)
    }

    /// Repeatedly blows down smooth rational (-1)-vertices in name order.
    pub fn minimal_resolution(&self) -> WeightedDualGraph {
        let mut g = self.clone();
        loop {
            let next = g
                .vertices
                .iter()
                .find(|v| v.self_intersection == -BigInt::one() && v.genus.is_zero())
                .map(|v| v.name.clone());
            match next {
                Some(n) => g = g.blow_down_vertex(&n).expect("vertex is a (-1)-vertex"),
                None => return g,
            }
        }
    }
}

/// Dual graph of the named tracked curves of a model.
pub fn build_dual_graph<'a, I>(model: &SurfaceModel, names: I) -> Result<WeightedDualGraph, LatticeError>
where
    I: IntoIterator<Item = &'a str>,
{
    let names: BTreeSet<&str> = names.into_iter().collect();
    let mut g = WeightedDualGraph::default();
    for n in &names {
        let c = model.curve(n)?;
        let genus = model.arithmetic_genus(c)?;
        g.add_vertex(n, model.self_intersection(n)?, genus)
            .expect("names are distinct");
    }
    let list: Vec<&str> = names.into_iter().collect();
    for (i, a) in list.iter().enumerate() {
        for b in &list[i + 1..] {
            let m = model.intersection(a, b)?;
            if m > BigInt::zero() {
                g.add_edge(a, b, m).expect("vertices exist");
            }
        }
    }
    Ok(g)
}

/// Dual graph of the contracted set of a model.
pub fn contracted_graph(model: &SurfaceModel) -> WeightedDualGraph {
    build_dual_graph(model, model.contracted().iter().map(String::as_str))
        .expect("contracted curves are tracked")
}

pub fn is_negative_definite(g: &WeightedDualGraph) -> bool {
    linalg::is_negative_definite(&g.intersection_matrix())
}

pub fn graph_shape(g: &WeightedDualGraph) -> GraphShape {
    let n = g.len();
    if n == 0 {
        return GraphShape::Chain;
    }
    // connectivity
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for u in 0..n {
            if !seen[u] && !g.multiplicity(u, v).is_zero() {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return GraphShape::Disconnected;
    }
    let edge_count: usize = (0..n).map(|v| g.degree(v)).sum::<usize>() / 2;
    if edge_count != n - 1 {
        return GraphShape::HasCycle;
    }
    let branch: Vec<usize> = (0..n).map(|v| g.degree(v)).filter(|&d| d >= 3).collect();
    match branch.as_slice() {
        [] => GraphShape::Chain,
        [k] => GraphShape::Fork(*k),
        _ => GraphShape::Tree,
    }
}
