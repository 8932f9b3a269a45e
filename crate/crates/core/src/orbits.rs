//! Periodic orbits and pseudo orbits.
//!
//! Orbits are closed arc sequences up to rotation, stored in their least
//! rotation. Arc-simple orbits (no repeated arc) are the building blocks of
//! irreducible pseudo orbits; arc sets are tracked as 64-bit masks, which
//! caps graphs at 2B ≤ 64.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::scattering::EvolutionOperator;

/// Hard limit on the number of arcs.
pub const MAX_ARCS: usize = 64;
/// Default cap on the total length for the primitive pseudo-orbit oracle.
pub const PRIMITIVE_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOrbit {
    arcs: Vec<usize>,
    metric_length: f64,
    repetition: usize,
}

impl PeriodicOrbit {
    /// Build an orbit from a closed arc sequence, rotating it into canonical
    /// form. Returns `None` if consecutive arcs are not adjacent.
    pub fn from_arcs(g: &MetricGraph, arcs: &[usize]) -> Option<Self> {
        if arcs.is_empty() || arcs.iter().any(|&a| a >= g.arc_count()) {
            return None;
        }
        let n = arcs.len();
        if (0..n).any(|i| g.terminus(arcs[i]) != g.origin(arcs[(i + 1) % n])) {
            return None;
        }
        let canon = least_rotation(arcs);
        let period = smallest_period(&canon);
        Some(Self {
            metric_length: canon.iter().map(|&a| g.arc_length(a)).sum(),
            repetition: n / period,
            arcs: canon,
        })
    }

    pub fn arcs(&self) -> &[usize] {
        &self.arcs
    }

    /// B_γ
    pub fn topological_length(&self) -> usize {
        self.arcs.len()
    }

    /// l_γ
    pub fn metric_length(&self) -> f64 {
        self.metric_length
    }

    /// r_γ
    pub fn repetition(&self) -> usize {
        self.repetition
    }

    pub fn is_arc_simple(&self) -> bool {
        arc_mask(&self.arcs).count_ones() as usize == self.arcs.len()
    }

    /// Arc occupancy mask; only meaningful for arc-simple orbits.
    pub fn mask(&self) -> u64 {
        arc_mask(&self.arcs)
    }

    /// Visit count per directed bond.
    pub fn arc_multiset(&self, g: &MetricGraph) -> Vec<u32> {
        let mut counts = vec![0; g.arc_count()];
        for &a in &self.arcs {
            counts[a] += 1;
        }
        counts
    }

    /// Visit count per undirected bond.
    pub fn undirected_profile(&self, g: &MetricGraph) -> Vec<u32> {
        let mut counts = vec![0; g.bond_count()];
        for &a in &self.arcs {
            counts[g.bond_of(a)] += 1;
        }
        counts
    }

    /// The orbit traversed backwards, in canonical form.
    pub fn reversed(&self, g: &MetricGraph) -> Self {
        let rev: Vec<usize> = self.arcs.iter().rev().map(|&a| g.reverse(a)).collect();
        Self {
            arcs: least_rotation(&rev),
            metric_length: self.metric_length,
            repetition: self.repetition,
        }
    }

    pub fn is_self_retracing(&self, g: &MetricGraph) -> bool {
        self.reversed(g).arcs == self.arcs
    }

    pub fn display(&self, g: &MetricGraph) -> String {
        self.arcs.iter().map(|&a| g.arc_name(a)).collect::<Vec<_>>().join(" ")
    }
}

/// A_γ = S_{b2 b1} S_{b3 b2} … S_{b1 bn}.
pub fn orbit_amplitude(op: &EvolutionOperator, orbit: &PeriodicOrbit) -> Complex64 {
    let arcs = orbit.arcs();
    let n = arcs.len();
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, i| {
        acc * op.s()[(arcs[(i + 1) % n], arcs[i])]
    })
}

fn arc_mask(arcs: &[usize]) -> u64 {
    arcs.iter().fold(0u64, |m, &a| m | (1u64 << a))
}

fn least_rotation(arcs: &[usize]) -> Vec<usize> {
    let n = arcs.len();
    (0..n)
        .map(|r| arcs[r..].iter().chain(&arcs[..r]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

fn smallest_period(arcs: &[usize]) -> usize {
    let n = arcs.len();
    (1..=n)
        .find(|&p| n % p == 0 && (0..n).all(|i| arcs[i] == arcs[i % p]))
        .unwrap_or(n)
}

fn check_size(g: &MetricGraph) -> Result<()> {
    if g.arc_count() > MAX_ARCS {
        Err(Error::TooManyArcs(g.arc_count()))
    } else {
        Ok(())
    }
}

/// Every closed arc sequence of length ≤ `max_len` with no repeated arc,
/// once each, in canonical rotation. Ordered by first arc, then
/// lexicographically by depth-first discovery.
pub fn enumerate_arc_simple_orbits(g: &MetricGraph, max_len: usize) -> Result<Vec<PeriodicOrbit>> {
    check_size(g)?;
    let mut out = Vec::new();
    let mut path = Vec::new();
    for start in 0..g.arc_count() {
        path.clear();
        path.push(start);
        simple_cycles_from(g, start, 1u64 << start, max_len, &mut path, &mut out);
    }
    Ok(out)
}

fn simple_cycles_from(
    g: &MetricGraph,
    start: usize,
    used: u64,
    max_len: usize,
    path: &mut Vec<usize>,
    out: &mut Vec<PeriodicOrbit>,
) {
    let last = *path.last().expect("path starts non-empty");
    for &next in g.successors(last) {
        if next == start {
            out.push(PeriodicOrbit {
                metric_length: path.iter().map(|&a| g.arc_length(a)).sum(),
                arcs: path.clone(),
                repetition: 1,
            });
        } else if next > start && used & (1u64 << next) == 0 && path.len() < max_len {
            path.push(next);
            simple_cycles_from(g, start, used | (1u64 << next), max_len, path, out);
            path.pop();
        }
    }
}

/// A set of arc-disjoint arc-simple orbits, referenced by index into the
/// orbit list it was enumerated from.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoOrbit {
    pub orbits: Vec<usize>,
    /// B_γ̄
    pub topological_length: usize,
    /// l_γ̄
    pub metric_length: f64,
    pub mask: u64,
}

impl PseudoOrbit {
    /// m_γ̄
    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }

    /// (−1)^m
    pub fn sign(&self) -> f64 {
        if self.orbits.len() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn is_null(&self) -> bool {
        self.orbits.is_empty()
    }

    /// Visit count per undirected bond.
    pub fn undirected_profile(&self, g: &MetricGraph) -> Vec<u32> {
        let mut counts = vec![0; g.bond_count()];
        for a in 0..g.arc_count() {
            if self.mask & (1u64 << a) != 0 {
                counts[g.bond_of(a)] += 1;
            }
        }
        counts
    }
}

/// All irreducible pseudo orbits with B_γ̄ ≤ `max_total`, together with the
/// arc-simple orbits they are built from.
#[derive(Debug, Clone)]
pub struct IrreducibleSet {
    pub orbits: Vec<PeriodicOrbit>,
    pub pseudo: Vec<PseudoOrbit>,
    pub max_total: usize,
}

impl IrreducibleSet {
    /// A_γ̄ for each pseudo orbit, in order.
    pub fn amplitudes(&self, op: &EvolutionOperator) -> Vec<Complex64> {
        let orbit_amps: Vec<Complex64> = self.orbits.iter().map(|o| orbit_amplitude(op, o)).collect();
        self.pseudo
            .iter()
            .map(|p| p.orbits.iter().map(|&i| orbit_amps[i]).product())
            .collect()
    }

    /// Number of pseudo orbits with each total length 0..=max_total.
    pub fn counts_by_length(&self) -> Vec<usize> {
        let mut counts = vec![0; self.max_total + 1];
        for p in &self.pseudo {
            counts[p.topological_length] += 1;
        }
        counts
    }

    pub fn arc_list(&self, g: &MetricGraph, p: &PseudoOrbit) -> String {
        p.orbits
            .iter()
            .map(|&i| format!("({})", self.orbits[i].display(g)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Every set of pairwise arc-disjoint arc-simple orbits with total length
/// ≤ `max_total`, including the null pseudo orbit (always first).
pub fn enumerate_irreducible_pseudo_orbits(g: &MetricGraph, max_total: usize) -> Result<IrreducibleSet> {
    check_size(g)?;
    let max_total = max_total.min(g.arc_count());
    let orbits = enumerate_arc_simple_orbits(g, max_total)?;
    let masks: Vec<u64> = orbits.iter().map(PeriodicOrbit::mask).collect();
    let lens: Vec<usize> = orbits.iter().map(PeriodicOrbit::topological_length).collect();
    let lengths: Vec<f64> = orbits.iter().map(PeriodicOrbit::metric_length).collect();

    let mut pseudo = Vec::new();
    let mut chosen = Vec::new();
    extend_pseudo(
        &masks, &lens, &lengths, max_total, 0, 0, 0, 0.0, &mut chosen, &mut pseudo,
    );
    Ok(IrreducibleSet {
        orbits,
        pseudo,
        max_total,
    })
}

#[allow(clippy::too_many_arguments)]
fn extend_pseudo(
    masks: &[u64],
    lens: &[usize],
    lengths: &[f64],
    max_total: usize,
    from: usize,
    mask: u64,
    total: usize,
    metric: f64,
    chosen: &mut Vec<usize>,
    out: &mut Vec<PseudoOrbit>,
) {
    out.push(PseudoOrbit {
        orbits: chosen.clone(),
        topological_length: total,
        metric_length: metric,
        mask,
    });
    for i in from..masks.len() {
        if masks[i] & mask == 0 && total + lens[i] <= max_total {
            chosen.push(i);
            extend_pseudo(
                masks,
                lens,
                lengths,
                max_total,
                i + 1,
                mask | masks[i],
                total + lens[i],
                metric + lengths[i],
                chosen,
                out,
            );
            chosen.pop();
        }
    }
}

/// Primitive periodic orbits (arc repetition allowed, r_γ = 1) with length
/// ≤ `max_len`, found by depth-first search over closed walks and keeping the
/// walks that are strictly smaller than all their proper rotations.
pub fn enumerate_primitive_orbits(g: &MetricGraph, max_len: usize) -> Result<Vec<PeriodicOrbit>> {
    if max_len > PRIMITIVE_CAP {
        return Err(Error::PrimitiveCap {
            cap: PRIMITIVE_CAP,
            requested: max_len,
        });
    }
    let mut out = Vec::new();
    let mut walk = Vec::new();
    for start in 0..g.arc_count() {
        walk.clear();
        walk.push(start);
        closed_walks_from(g, start, max_len, &mut walk, &mut out);
    }
    Ok(out)
}

fn closed_walks_from(
    g: &MetricGraph,
    start: usize,
    max_len: usize,
    walk: &mut Vec<usize>,
    out: &mut Vec<PeriodicOrbit>,
) {
    let last = *walk.last().expect("walk starts non-empty");
    let succ = g.successors(last);
    if succ.contains(&start) && is_lyndon(walk) {
        out.push(PeriodicOrbit {
            metric_length: walk.iter().map(|&a| g.arc_length(a)).sum(),
            arcs: walk.clone(),
            repetition: 1,
        });
    }
    if walk.len() == max_len {
        return;
    }
    for &next in succ {
        if next >= start {
            walk.push(next);
            closed_walks_from(g, start, max_len, walk, out);
            walk.pop();
        }
    }
}

/// Strictly less than every proper rotation: canonical and primitive.
fn is_lyndon(w: &[usize]) -> bool {
    let n = w.len();
    (1..n).all(|r| {
        let rot = w[r..].iter().chain(&w[..r]);
        w.iter().lt(rot)
    })
}

/// A set of distinct primitive orbits.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimitivePseudoOrbit {
    pub orbits: Vec<usize>,
    pub topological_length: usize,
    pub metric_length: f64,
    pub amplitude: Complex64,
}

impl PrimitivePseudoOrbit {
    pub fn sign(&self) -> f64 {
        if self.orbits.len() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// All sets of distinct primitive orbits with total length exactly `n`,
/// together with the primitive orbit list they index into.
pub fn enumerate_primitive_pseudo_orbits(
    op: &EvolutionOperator,
    n: usize,
) -> Result<(Vec<PeriodicOrbit>, Vec<PrimitivePseudoOrbit>)> {
    let g = op.graph();
    let prims = enumerate_primitive_orbits(g, n)?;
    let amps: Vec<Complex64> = prims.iter().map(|o| orbit_amplitude(op, o)).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    primitive_sets(&prims, &amps, n, 0, 0, &mut chosen, &mut out);
    Ok((prims, out))
}

fn primitive_sets(
    prims: &[PeriodicOrbit],
    amps: &[Complex64],
    target: usize,
    from: usize,
    total: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<PrimitivePseudoOrbit>,
) {
    if total == target {
        out.push(PrimitivePseudoOrbit {
            orbits: chosen.clone(),
            topological_length: total,
            metric_length: chosen.iter().map(|&i| prims[i].metric_length()).sum(),
            amplitude: chosen.iter().map(|&i| amps[i]).product(),
        });
        return;
    }
    for i in from..prims.len() {
        if total + prims[i].topological_length() <= target {
            chosen.push(i);
            primitive_sets(prims, amps, target, i + 1, total + prims[i].topological_length(), chosen, out);
            chosen.pop();
        }
    }
}

/// Number of arc-simple orbits equal to their own reversal.
pub fn count_self_retracing(g: &MetricGraph, orbits: &[PeriodicOrbit]) -> usize {
    orbits.iter().filter(|o| o.is_self_retracing(g)).count()
}
