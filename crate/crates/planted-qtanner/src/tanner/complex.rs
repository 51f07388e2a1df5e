use serde::{Deserialize, Serialize};

use crate::expander::{CongruenceGroup, GeneratorMultiset};
use crate::gf::enumeration_budget;
use crate::{par, Error, Result};

/// How a face `(g, i, j)` is placed in the `Δ x Δ` local view of each corner.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridConvention {
    /// Corner 00 at `(i, j)`, 01 at `(inv i, j)`, 10 at `(i, inv j)`, 11 at
    /// `(inv i, inv j)`: each label is the generator leading from the corner
    /// back towards the face's base point.
    #[default]
    NeighborMove,
    /// `(i, j)` at every corner.
    Direct,
}

/// The four vertex classes `V = G x {0,1}^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Corner {
    C00,
    C01,
    C10,
    C11,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::C00, Corner::C01, Corner::C10, Corner::C11];
}

/// Faces `(g, a_i, b_j)` with corners `g`, `a_i g`, `g b_j`, `a_i g b_j`,
/// numbered `(g Δ + i) Δ + j`.
#[derive(Clone, Debug)]
pub struct SquareCayleyComplex {
    group: CongruenceGroup,
    a: GeneratorMultiset,
    b: GeneratorMultiset,
    convention: GridConvention,
    order: usize,
    delta: usize,
    /// `left[g Δ + i] = a_i g`.
    left: Vec<u32>,
    /// `right[g Δ + j] = g b_j`.
    right: Vec<u32>,
}

/// Builds the complex; `A` acts on the left and `B` on the right.
pub fn build_complex(a: &GeneratorMultiset, b: &GeneratorMultiset, convention: GridConvention) -> Result<SquareCayleyComplex> {
    SquareCayleyComplex::new(a.clone(), b.clone(), convention)
}

impl SquareCayleyComplex {
    pub fn new(a: GeneratorMultiset, b: GeneratorMultiset, convention: GridConvention) -> Result<Self> {
        let group = a.group();
        if b.group() != group {
            return Err(Error::GroupMismatch(format!(
                "A over G_{} (p={}), B over G_{} (p={})",
                group.m(),
                group.p(),
                b.group().m(),
                b.group().p()
            )));
        }
        if a.degree() != b.degree() {
            return Err(Error::DimensionMismatch(format!("|A| = {} but |B| = {}", a.degree(), b.degree())));
        }
        let delta = a.degree();
        let budget = enumeration_budget();
        let order = group
            .order()
            .filter(|&o| o.saturating_mul((delta * delta).max(1) as u128) <= budget as u128 && o < u32::MAX as u128)
            .ok_or_else(|| Error::budget("square complex faces", format!("{} * {}", group.order_big(), delta * delta), budget))?
            as usize;
        let elements: Vec<_> = (0..order).map(|g| group.element(g as u128).expect("index below order")).collect();
        let table = |left: bool| {
            let gens = if left { a.elements() } else { b.elements() };
            let mut t = vec![0u32; order * delta];
            par::fill(&mut t, |k| {
                let (g, s) = (&elements[k / delta], &gens[k % delta]);
                let prod = if left { group.mul(s, g) } else { group.mul(g, s) };
                group.index(&prod).expect("order fits u128") as u32
            });
            t
        };
        let (left, right) = (table(true), table(false));
        Ok(SquareCayleyComplex {
            group,
            a,
            b,
            convention,
            order,
            delta,
            left,
            right,
        })
    }

    pub fn group(&self) -> CongruenceGroup {
        self.group
    }

    pub fn generators_a(&self) -> &GeneratorMultiset {
        &self.a
    }

    pub fn generators_b(&self) -> &GeneratorMultiset {
        &self.b
    }

    pub fn convention(&self) -> GridConvention {
        self.convention
    }

    /// `|G|`, the size of each vertex class.
    pub fn group_order(&self) -> usize {
        self.order
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// `|Q| = |G| Δ^2`.
    pub fn num_faces(&self) -> usize {
        self.order * self.delta * self.delta
    }

    pub fn face(&self, g: usize, i: usize, j: usize) -> usize {
        (g * self.delta + i) * self.delta + j
    }

    pub fn face_coords(&self, f: usize) -> (usize, usize, usize) {
        let d = self.delta;
        (f / (d * d), (f / d) % d, f % d)
    }

    fn a_times(&self, i: usize, g: usize) -> usize {
        self.left[g * self.delta + i] as usize
    }

    fn times_b(&self, g: usize, j: usize) -> usize {
        self.right[g * self.delta + j] as usize
    }

    /// Group element of the `corner` vertex of face `f`.
    pub fn vertex_of(&self, corner: Corner, f: usize) -> usize {
        let (g, i, j) = self.face_coords(f);
        match corner {
            Corner::C00 => g,
            Corner::C01 => self.a_times(i, g),
            Corner::C10 => self.times_b(g, j),
            Corner::C11 => self.times_b(self.a_times(i, g), j),
        }
    }

    /// Grid position `(r, c)` of face `f` in the local view of its `corner` vertex.
    pub fn position_in_view(&self, corner: Corner, f: usize) -> (usize, usize) {
        let (_, i, j) = self.face_coords(f);
        let (ia, jb) = (self.a.pairing()[i], self.b.pairing()[j]);
        match (self.convention, corner) {
            (GridConvention::Direct, _) | (_, Corner::C00) => (i, j),
            (GridConvention::NeighborMove, Corner::C01) => (ia, j),
            (GridConvention::NeighborMove, Corner::C10) => (i, jb),
            (GridConvention::NeighborMove, Corner::C11) => (ia, jb),
        }
    }

    /// Face at grid position `(r, c)` of the local view `Q(v)` of vertex `(v, corner)`.
    pub fn view_face(&self, corner: Corner, v: usize, r: usize, c: usize) -> usize {
        let (ir, jc) = (self.a.pairing()[r], self.b.pairing()[c]);
        match (self.convention, corner) {
            (_, Corner::C00) => self.face(v, r, c),
            (GridConvention::NeighborMove, Corner::C01) => self.face(self.a_times(r, v), ir, c),
            (GridConvention::NeighborMove, Corner::C10) => self.face(self.times_b(v, c), r, jc),
            (GridConvention::NeighborMove, Corner::C11) => self.face(self.times_b(self.a_times(r, v), c), ir, jc),
            (GridConvention::Direct, Corner::C01) => self.face(self.a_times(ir, v), r, c),
            (GridConvention::Direct, Corner::C10) => self.face(self.times_b(v, jc), r, c),
            (GridConvention::Direct, Corner::C11) => self.face(self.times_b(self.a_times(ir, v), jc), r, c),
        }
    }

    /// `Q(v)` as a row-major `Δ x Δ` grid of face indices.
    pub fn local_view(&self, corner: Corner, v: usize) -> Vec<usize> {
        let d = self.delta;
        (0..d * d).map(|k| self.view_face(corner, v, k / d, k % d)).collect()
    }

    /// The `Γ₀` edge `((g,00), (a_i g b_j, 11))` of face `f`.
    pub fn gamma0_edge(&self, f: usize) -> (usize, usize) {
        (self.vertex_of(Corner::C00, f), self.vertex_of(Corner::C11, f))
    }

    /// The `Γ₁` edge `((a_i g, 01), (g b_j, 10))` of face `f`.
    pub fn gamma1_edge(&self, f: usize) -> (usize, usize) {
        (self.vertex_of(Corner::C01, f), self.vertex_of(Corner::C10, f))
    }
}
