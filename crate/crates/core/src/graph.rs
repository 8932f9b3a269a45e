//! Metric graphs and the canonical directed-bond indexing.
//!
//! Undirected bonds are sorted by `(min label, max label)`. Directed bond
//! `i < B` runs from the lexicographically smaller endpoint to the larger
//! one and `i + B` is its reversal, so `reverse(b) = (b + B) mod 2B`.

use petgraph::unionfind::UnionFind;
use rand::Rng;
use rand_xoshiro::rand_core::SeedableRng;
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod file;

/// Length assigned to a single edge of a [`GraphSpec`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeLength {
    Explicit(f64),
    /// Drawn from the spec's random length mode.
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSpec {
    pub from: String,
    pub to: String,
    pub length: EdgeLength,
}

/// How `Random` edge lengths are produced.
///
/// `RandomUniform` draws from SplitMix64 (state increment
/// `0x9E3779B97F4A7C15`, output mix multipliers `0xBF58476D1CE4E5B9` and
/// `0x94D049BB133111EB`) seeded with `seed`. Each draw `u` is mapped to
/// `(u >> 11) * 2^-53` and then affinely onto `[min, max)`. Random bonds
/// consume draws in canonical bond order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub enum LengthMode {
    #[default]
    Explicit,
    RandomUniform { seed: u64, min: f64, max: f64 },
}

/// User-facing description of a graph, before validation.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GraphSpec {
    pub vertex_labels: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    pub length_mode: LengthMode,
}

impl GraphSpec {
    pub fn new<S: Into<String>>(vertices: impl IntoIterator<Item = S>) -> Self {
        Self {
            vertex_labels: vertices.into_iter().map(Into::into).collect(),
            edges: Vec::new(),
            length_mode: LengthMode::Explicit,
        }
    }

    pub fn edge(mut self, from: &str, to: &str, length: f64) -> Self {
        self.edges.push(EdgeSpec {
            from: from.to_owned(),
            to: to.to_owned(),
            length: EdgeLength::Explicit(length),
        });
        self
    }

    pub fn random_edge(mut self, from: &str, to: &str) -> Self {
        self.edges.push(EdgeSpec {
            from: from.to_owned(),
            to: to.to_owned(),
            length: EdgeLength::Random,
        });
        self
    }

    pub fn with_length_mode(mut self, mode: LengthMode) -> Self {
        self.length_mode = mode;
        self
    }
}

/// A validated, connected metric graph without loops or multi-edges.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    labels: Vec<String>,
    /// Undirected bonds as (origin, terminus) of the forward arc.
    bonds: Vec<(usize, usize)>,
    lengths: Vec<f64>,
    degrees: Vec<usize>,
    /// Arcs leaving each vertex, ascending.
    out_arcs: Vec<Vec<usize>>,
}

/// Validate `spec` and assign the canonical bond indexing.
pub fn build_graph(spec: &GraphSpec) -> Result<MetricGraph> {
    let labels = spec.vertex_labels.clone();
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::DuplicateVertex(l.clone()));
        }
    }
    let index_of = |label: &str| {
        labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownVertex(label.to_owned()))
    };

    let mut bonds: Vec<(usize, usize, EdgeLength)> = Vec::with_capacity(spec.edges.len());
    for e in &spec.edges {
        let (u, v) = (index_of(&e.from)?, index_of(&e.to)?);
        if u == v {
            return Err(Error::Loop(e.from.clone()));
        }
        if let EdgeLength::Explicit(l) = e.length {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::NonPositiveLength {
                    from: e.from.clone(),
                    to: e.to.clone(),
                    length: l,
                });
            }
        }
        let (lo, hi) = if labels[u] < labels[v] { (u, v) } else { (v, u) };
        if bonds.iter().any(|&(a, b, _)| (a, b) == (lo, hi)) {
            return Err(Error::MultiEdge(labels[lo].clone(), labels[hi].clone()));
        }
        bonds.push((lo, hi, e.length));
    }
    if bonds.is_empty() {
        return Err(Error::Empty);
    }
    bonds.sort_by(|a, b| (&labels[a.0], &labels[a.1]).cmp(&(&labels[b.0], &labels[b.1])));

    let mut sampler = match spec.length_mode {
        LengthMode::Explicit => None,
        LengthMode::RandomUniform { seed, min, max } => {
            if !(min.is_finite() && max.is_finite() && min >= 0.0 && max > min) {
                return Err(Error::LengthMode(format!(
                    "random_uniform needs 0 <= min < max, got [{min}, {max})"
                )));
            }
            Some((SplitMix64::seed_from_u64(seed), min, max))
        }
    };
    let mut lengths = Vec::with_capacity(bonds.len());
    for &(u, v, len) in &bonds {
        let l = match len {
            EdgeLength::Explicit(l) => l,
            EdgeLength::Random => {
                let (rng, min, max) = sampler.as_mut().ok_or_else(|| {
                    Error::LengthMode("random edge lengths need mode random_uniform".into())
                })?;
                let u01: f64 = rng.random();
                *min + (*max - *min) * u01
            }
        };
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::NonPositiveLength {
                from: labels[u].clone(),
                to: labels[v].clone(),
                length: l,
            });
        }
        lengths.push(l);
    }

    let mut uf = UnionFind::<usize>::new(labels.len());
    for &(u, v, _) in &bonds {
        uf.union(u, v);
    }
    if (1..labels.len()).any(|v| !uf.equiv(0, v)) {
        return Err(Error::Disconnected);
    }

    Ok(MetricGraph::assemble(
        labels,
        bonds.into_iter().map(|(u, v, _)| (u, v)).collect(),
        lengths,
    ))
}

impl MetricGraph {
    fn assemble(labels: Vec<String>, bonds: Vec<(usize, usize)>, lengths: Vec<f64>) -> Self {
        let nb = bonds.len();
        let mut out_arcs = vec![Vec::new(); labels.len()];
        for (i, &(u, v)) in bonds.iter().enumerate() {
            out_arcs[u].push(i);
            out_arcs[v].push(i + nb);
        }
        for arcs in &mut out_arcs {
            arcs.sort_unstable();
        }
        let degrees = out_arcs.iter().map(Vec::len).collect();
        Self {
            labels,
            bonds,
            lengths,
            degrees,
            out_arcs,
        }
    }

    /// V
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// B, the number of undirected bonds.
    pub fn bond_count(&self) -> usize {
        self.bonds.len()
    }

    /// 2B
    pub fn arc_count(&self) -> usize {
        2 * self.bonds.len()
    }

    /// B − V + 2, the dimension of ker(I − U(0)) for connected Neumann graphs.
    pub fn zero_mode_order(&self) -> usize {
        self.bond_count() + 2 - self.vertex_count()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn origin(&self, arc: usize) -> usize {
        let b = self.bond_count();
        if arc < b {
            self.bonds[arc].0
        } else {
            self.bonds[arc - b].1
        }
    }

    pub fn terminus(&self, arc: usize) -> usize {
        self.origin(self.reverse(arc))
    }

    pub fn reverse(&self, arc: usize) -> usize {
        let b = self.bond_count();
        if arc < b {
            arc + b
        } else {
            arc - b
        }
    }

    /// Undirected bond carrying `arc`.
    pub fn bond_of(&self, arc: usize) -> usize {
        arc % self.bond_count()
    }

    pub fn bond_length(&self, bond: usize) -> f64 {
        self.lengths[bond]
    }

    pub fn bond_lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn arc_length(&self, arc: usize) -> f64 {
        self.lengths[self.bond_of(arc)]
    }

    /// Lengths of all 2B arcs, the diagonal of L.
    pub fn arc_lengths(&self) -> Vec<f64> {
        (0..self.arc_count()).map(|a| self.arc_length(a)).collect()
    }

    /// ℒ, the sum of the B bond lengths.
    pub fn total_length(&self) -> f64 {
        self.lengths.iter().sum()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn out_arcs(&self, v: usize) -> &[usize] {
        &self.out_arcs[v]
    }

    /// Arcs `b'` with `o(b') = t(arc)`.
    pub fn successors(&self, arc: usize) -> &[usize] {
        &self.out_arcs[self.terminus(arc)]
    }

    /// Endpoint labels of an undirected bond, in canonical orientation.
    pub fn bond_labels(&self, bond: usize) -> (&str, &str) {
        let (u, v) = self.bonds[bond];
        (&self.labels[u], &self.labels[v])
    }

    /// Short arc name such as `a>b`.
    pub fn arc_name(&self, arc: usize) -> String {
        format!(
            "{}>{}",
            self.labels[self.origin(arc)],
            self.labels[self.terminus(arc)]
        )
    }

    /// The same topology with one bond length replaced.
    pub fn with_bond_length(&self, bond: usize, length: f64) -> Result<Self> {
        if bond >= self.bond_count() {
            return Err(Error::BondIndex {
                index: bond,
                bonds: self.bond_count(),
            });
        }
        if !(length.is_finite() && length > 0.0) {
            let (u, v) = self.bond_labels(bond);
            return Err(Error::NonPositiveLength {
                from: u.to_owned(),
                to: v.to_owned(),
                length,
            });
        }
        let mut g = self.clone();
        g.lengths[bond] = length;
        Ok(g)
    }

    /// Explicit-length spec that rebuilds this graph.
    pub fn to_spec(&self) -> GraphSpec {
        let mut spec = GraphSpec::new(self.labels.iter().cloned());
        for (i, &(u, v)) in self.bonds.iter().enumerate() {
            spec = spec.edge(&self.labels[u], &self.labels[v], self.lengths[i]);
        }
        spec
    }
}

/// Split `bond` at `fraction` of its length (measured from the canonical
/// origin) by inserting a new degree-2 vertex.
pub fn subdivide_bond(g: &MetricGraph, bond: usize, fraction: f64) -> Result<MetricGraph> {
    if bond >= g.bond_count() {
        return Err(Error::BondIndex {
            index: bond,
            bonds: g.bond_count(),
        });
    }
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Fraction(fraction));
    }
    let (u, v) = g.bond_labels(bond);
    let mut label = format!("{u}~{v}");
    while g.vertex_index(&label).is_some() {
        label.push('\'');
    }
    let l = g.bond_length(bond);
    let mut spec = GraphSpec::new(g.labels.iter().cloned().chain([label.clone()]));
    for (i, &(a, b)) in g.bonds.iter().enumerate() {
        if i == bond {
            spec = spec
                .edge(u, &label, fraction * l)
                .edge(&label, v, (1.0 - fraction) * l);
        } else {
            spec = spec.edge(&g.labels[a], &g.labels[b], g.lengths[i]);
        }
    }
    build_graph(&spec)
}

/// Complete graph on the given labels with explicit lengths in canonical bond order.
pub fn complete_graph(labels: &[&str], lengths: &[f64]) -> Result<MetricGraph> {
    let mut sorted: Vec<&str> = labels.to_vec();
    sorted.sort_unstable();
    let mut spec = GraphSpec::new(labels.iter().copied());
    let mut it = lengths.iter();
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            let l = *it.next().ok_or_else(|| {
                Error::LengthMode("not enough lengths for complete graph".into())
            })?;
            spec = spec.edge(sorted[i], sorted[j], l);
        }
    }
    build_graph(&spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path() -> MetricGraph {
        build_graph(&GraphSpec::new(["a", "b", "c"]).edge("a", "b", 0.4).edge("b", "c", 0.6)).unwrap()
    }

    fn k4_random(seed: u64) -> MetricGraph {
        let mut spec = GraphSpec::new(["a", "b", "c", "d"]).with_length_mode(LengthMode::RandomUniform {
            seed,
            min: 0.0,
            max: 1.0,
        });
        for (u, v) in [("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")] {
            spec = spec.random_edge(u, v);
        }
        build_graph(&spec).unwrap()
    }

    #[test]
    fn path_counts() {
        let g = path();
        assert_eq!((g.vertex_count(), g.bond_count()), (3, 2));
        assert!((g.total_length() - 1.0).abs() < 1e-15);
        assert_eq!(g.degrees(), &[1, 2, 1]);
    }

    #[test]
    fn k4_counts() {
        let g = k4_random(1);
        assert_eq!((g.vertex_count(), g.bond_count(), g.arc_count()), (4, 6, 12));
        assert_eq!(g.degrees().iter().sum::<usize>(), 12);
    }

    #[test]
    fn rejects_invalid_specs() {
        let loop_spec = GraphSpec::new(["a"]).edge("a", "a", 1.0);
        assert!(matches!(build_graph(&loop_spec), Err(Error::Loop(_))));
        assert!(build_graph(&loop_spec).unwrap_err().to_string().contains("loops forbidden"));

        let multi = GraphSpec::new(["a", "b"]).edge("a", "b", 1.0).edge("b", "a", 2.0);
        assert!(build_graph(&multi).unwrap_err().to_string().contains("multi-edges forbidden"));

        let neg = GraphSpec::new(["a", "b"]).edge("a", "b", -1.0);
        assert!(build_graph(&neg).unwrap_err().to_string().contains("length must be positive"));
        let zero = GraphSpec::new(["a", "b"]).edge("a", "b", 0.0);
        assert!(matches!(build_graph(&zero), Err(Error::NonPositiveLength { .. })));

        let disc = GraphSpec::new(["a", "b", "c", "d"]).edge("a", "b", 1.0).edge("c", "d", 1.0);
        assert!(build_graph(&disc).unwrap_err().to_string().contains("graph must be connected"));

        let random_without_mode = GraphSpec::new(["a", "b"]).random_edge("a", "b");
        assert!(matches!(build_graph(&random_without_mode), Err(Error::LengthMode(_))));
    }

    #[test]
    fn canonical_indexing() {
        // Labels given out of order still sort bonds by label.
        let g = build_graph(
            &GraphSpec::new(["c", "b", "a"]).edge("c", "b", 0.6).edge("b", "a", 0.4),
        )
        .unwrap();
        assert_eq!(g.bond_labels(0), ("a", "b"));
        assert_eq!(g.bond_labels(1), ("b", "c"));
        assert_eq!(g.arc_name(0), "a>b");
        assert_eq!(g.arc_name(2), "b>a");
        assert_eq!(g.bond_length(0), 0.4);
    }

    #[test]
    fn reversal_and_adjacency_exhaustive() {
        for g in [path(), k4_random(3)] {
            let n = g.arc_count();
            let mut in_deg = vec![0; g.vertex_count()];
            for b in 0..n {
                let r = g.reverse(b);
                assert_eq!(g.reverse(r), b);
                assert_eq!(g.origin(r), g.terminus(b));
                assert_eq!(g.terminus(r), g.origin(b));
                assert_eq!(g.arc_length(r), g.arc_length(b));
                in_deg[g.terminus(b)] += 1;
                for c in 0..n {
                    let adjacent = g.successors(b).contains(&c);
                    assert_eq!(adjacent, g.terminus(b) == g.origin(c));
                }
            }
            assert_eq!(in_deg, g.degrees());
        }
    }

    #[test]
    fn seeded_lengths_are_reproducible() {
        let a = k4_random(42);
        let b = k4_random(42);
        let c = k4_random(43);
        assert_eq!(
            a.bond_lengths().iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
            b.bond_lengths().iter().map(|x| x.to_bits()).collect::<Vec<_>>()
        );
        assert_ne!(a.bond_lengths(), c.bond_lengths());
        assert!(a.bond_lengths().iter().all(|&l| l > 0.0 && l < 1.0));
    }

    #[test]
    fn splitmix_reference_stream() {
        // First outputs of SplitMix64 seeded with 0 (published reference values).
        use rand::RngCore;
        let mut rng = SplitMix64::seed_from_u64(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn subdivision_counts() {
        let interval = build_graph(&GraphSpec::new(["a", "b"]).edge("a", "b", 1.0)).unwrap();
        let split = subdivide_bond(&interval, 0, 0.5).unwrap();
        assert_eq!((split.vertex_count(), split.bond_count()), (3, 2));
        assert_eq!(split.bond_lengths(), &[0.5, 0.5]);
        assert_eq!(split.total_length(), 1.0);

        let k4 = k4_random(5);
        for b in 0..6 {
            let s = subdivide_bond(&k4, b, 0.3).unwrap();
            assert_eq!((s.vertex_count(), s.bond_count()), (5, 7));
            assert!((s.total_length() - k4.total_length()).abs() < 1e-14);
        }
        assert!(matches!(subdivide_bond(&k4, 0, 0.0), Err(Error::Fraction(_))));
        assert!(matches!(subdivide_bond(&k4, 0, 1.0), Err(Error::Fraction(_))));
        assert!(matches!(subdivide_bond(&k4, 6, 0.5), Err(Error::BondIndex { .. })));
    }

    #[test]
    fn with_bond_length_replaces_one_bond() {
        let g = path();
        let h = g.with_bond_length(1, 2.0).unwrap();
        assert_eq!(h.bond_lengths(), &[0.4, 2.0]);
        assert!(g.with_bond_length(0, 0.0).is_err());
    }
}
