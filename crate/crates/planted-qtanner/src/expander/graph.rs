use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{CongruenceGroup, GeneratorMultiset};
use crate::{par, Error, Result};

/// A `Δ`-regular multigraph whose `i`-th edge at `v` leads to `neighbor(v, i)`.
pub trait RegularGraph: Sync {
    fn num_vertices(&self) -> usize;
    fn degree(&self) -> usize;
    fn neighbor(&self, v: usize, i: usize) -> usize;
}

/// A materialized neighbor table.
#[derive(Clone, Debug)]
pub struct NeighborTable {
    n: usize,
    degree: usize,
    table: Vec<u32>,
}

impl NeighborTable {
    pub fn of(g: &impl RegularGraph) -> Self {
        let (n, d) = (g.num_vertices(), g.degree());
        let mut table = vec![0u32; n * d];
        par::fill(&mut table, |k| g.neighbor(k / d, k % d) as u32);
        NeighborTable { n, degree: d, table }
    }

    /// Number of vertices reachable from vertex 0.
    pub fn closure_from_zero(&self) -> usize {
        if self.n == 0 {
            return 0;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for i in 0..self.degree {
                let w = self.table[v * self.degree + i] as usize;
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count
    }
}

impl RegularGraph for NeighborTable {
    fn num_vertices(&self) -> usize {
        self.n
    }
    fn degree(&self) -> usize {
        self.degree
    }
    fn neighbor(&self, v: usize, i: usize) -> usize {
        self.table[v * self.degree + i] as usize
    }
}

/// The Cayley graph of `Z/nZ` with the given shifts.
#[derive(Clone, Debug)]
pub struct Circulant {
    n: usize,
    shifts: Vec<i64>,
}

impl Circulant {
    pub fn new(n: usize, shifts: Vec<i64>) -> Self {
        Circulant { n, shifts }
    }

    pub fn cycle(n: usize) -> Self {
        Self::new(n, vec![1, -1])
    }

    /// `K_n` as the Cayley graph of `Z/nZ` with every nonzero shift.
    pub fn complete(n: usize) -> Self {
        Self::new(n, (1..n as i64).collect())
    }
}

impl RegularGraph for Circulant {
    fn num_vertices(&self) -> usize {
        self.n
    }
    fn degree(&self) -> usize {
        self.shifts.len()
    }
    fn neighbor(&self, v: usize, i: usize) -> usize {
        (v as i64 + self.shifts[i]).rem_euclid(self.n as i64) as usize
    }
}

/// `Cay(G_m, S)` with edges `g -> s g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyMultigraph {
    generators: GeneratorMultiset,
}

/// Exchange format `{p, m, degree, generators: [[a, b, c], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub p: u64,
    pub m: u32,
    pub degree: usize,
    pub generators: Vec<[u64; 3]>,
}

impl CayleyMultigraph {
    pub fn new(generators: GeneratorMultiset) -> Self {
        CayleyMultigraph { generators }
    }

    pub fn group(&self) -> CongruenceGroup {
        self.generators.group()
    }

    pub fn generators(&self) -> &GeneratorMultiset {
        &self.generators
    }

    pub fn degree(&self) -> usize {
        self.generators.degree()
    }

    /// Neighbor query on `u128` indices; requires `p^{3m} < 2^128`.
    pub fn neighbor_index(&self, vertex: u128, gen: usize) -> Result<u128> {
        let g = self.group();
        if gen >= self.degree() {
            return Err(Error::DomainError(format!("generator index {gen} outside 0..{}", self.degree())));
        }
        let order = g.order().ok_or_else(|| Error::DomainError("group order exceeds u128; use neighbor_big".into()))?;
        if vertex >= order {
            return Err(Error::DomainError(format!("vertex {vertex} outside 0..{order}")));
        }
        let x = g.element(vertex)?;
        let y = g.mul(&self.generators.elements()[gen], &x);
        Ok(g.index(&y).expect("order fits u128"))
    }

    /// Neighbor query on arbitrary-size indices.
    pub fn neighbor_big(&self, vertex: &BigUint, gen: usize) -> Result<BigUint> {
        let g = self.group();
        if gen >= self.degree() {
            return Err(Error::DomainError(format!("generator index {gen} outside 0..{}", self.degree())));
        }
        let x = g.element_big(vertex)?;
        Ok(g.index_big(&g.mul(&self.generators.elements()[gen], &x)))
    }

    /// Materializes the graph if `p^{3m} <= budget`.
    pub fn table(&self, budget: u64) -> Result<NeighborTable> {
        let n = self.group().order().filter(|&o| o <= budget as u128).ok_or_else(|| {
            Error::budget("neighbor table", self.group().order_big(), budget)
        })? as usize;
        Ok(NeighborTable::of(&MaterializedCayley { graph: self, n }))
    }

    /// Size of the subgroup generated by the multiset, by BFS from the
    /// identity, if `p^{3m} <= budget`.
    pub fn bfs_closure(&self, budget: u64) -> Result<usize> {
        Ok(self.table(budget)?.closure_from_zero())
    }

    pub fn to_json(&self) -> GraphJson {
        let g = self.group();
        GraphJson {
            p: g.p(),
            m: g.m(),
            degree: self.degree(),
            generators: self.generators.coords(),
        }
    }

    pub fn from_json(j: &GraphJson) -> Result<Self> {
        let g = CongruenceGroup::new(j.p, j.m)?;
        if j.generators.len() != j.degree {
            return Err(Error::Parse(format!("degree {} but {} generators", j.degree, j.generators.len())));
        }
        let elems = j
            .generators
            .iter()
            .map(|&[a, b, c]| g.encode(a, b, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(GeneratorMultiset::new(g, elems)?))
    }
}

struct MaterializedCayley<'a> {
    graph: &'a CayleyMultigraph,
    n: usize,
}

impl RegularGraph for MaterializedCayley<'_> {
    fn num_vertices(&self) -> usize {
        self.n
    }
    fn degree(&self) -> usize {
        self.graph.degree()
    }
    fn neighbor(&self, v: usize, i: usize) -> usize {
        self.graph.neighbor_index(v as u128, i).expect("materialized indices are in range") as usize
    }
}

/// Index of `s_gen * g` where `g` has index `vertex`.
pub fn neighbor(graph: &CayleyMultigraph, vertex: &BigUint, gen: usize) -> Result<BigUint> {
    graph.neighbor_big(vertex, gen)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_graph() -> CayleyMultigraph {
        let g = CongruenceGroup::new(3, 1).unwrap();
        let gens = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
            .iter()
            .flat_map(|&(a, b, c)| {
                let x = g.encode(a, b, c).unwrap();
                [x, g.inv(&x)]
            })
            .collect();
        CayleyMultigraph::new(GeneratorMultiset::new(g, gens).unwrap())
    }

    #[test]
    fn neighbor_table_matches_multiplication_table() {
        let graph = sample_graph();
        let g = graph.group();
        let table = graph.table(1 << 20).unwrap();
        for v in 0..27u128 {
            for (i, s) in graph.generators().elements().iter().enumerate() {
                let direct = g.index(&g.mul(s, &g.element(v).unwrap())).unwrap();
                assert_eq!(table.neighbor(v as usize, i) as u128, direct);
                assert_eq!(graph.neighbor_index(v, i).unwrap(), direct);
                let back = graph.neighbor_index(direct, graph.generators().pairing()[i]).unwrap();
                assert_eq!(back, v);
            }
        }
        assert_eq!(graph.bfs_closure(1 << 20).unwrap(), 27);
    }

    #[test]
    fn identity_generator_fixes_vertices() {
        let graph = CayleyMultigraph::new(sample_graph().generators().with_identity());
        let last = graph.degree() - 1;
        for v in 0..27u128 {
            assert_eq!(graph.neighbor_index(v, last).unwrap(), v);
        }
        assert_eq!(graph.bfs_closure(1 << 20).unwrap(), 27);
    }

    #[test]
    fn json_round_trip() {
        let graph = sample_graph();
        let j = serde_json::to_string(&graph.to_json()).unwrap();
        let back = CayleyMultigraph::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, graph);
    }

    #[test]
    fn big_level_neighbor_queries_are_fast() {
        let g = CongruenceGroup::new(3, 30).unwrap();
        let x = g.encode(1, 0, 0).unwrap();
        let graph = CayleyMultigraph::new(GeneratorMultiset::new(g, vec![x, g.inv(&x)]).unwrap());
        let v = g.order_big() - 12345u32;
        let start = std::time::Instant::now();
        let w = neighbor(&graph, &v, 0).unwrap();
        assert!(start.elapsed().as_millis() < 10);
        assert_eq!(neighbor(&graph, &w, 1).unwrap(), v);
    }

    #[test]
    fn circulant_neighbors() {
        let c = Circulant::cycle(5);
        assert_eq!(c.neighbor(0, 1), 4);
        assert_eq!(Circulant::complete(4).degree(), 3);
    }
}
