//! Internal machinery for the two univariate sides of an `R`-complex:
//! `C/U` (coefficients `F2[V]`, graded by `gr_u`) and `C/V` (coefficients
//! `F2[U]`, graded by `gr_v`). On either side the differential drops the
//! degree by exactly 1, so the complex splits into graded pieces connected
//! by matrices over a univariate polynomial ring, where Smith normal form
//! gives exact answers: free ranks of the homology for the knot-like test,
//! and the coefficient of a cycle on the degree-zero free tower for the
//! local-map test.

use crate::complex::BigradedComplex;
use crate::linalg::{Poly, PolyMatrix, Snf};
use crate::ring::{Bigrading, Monomial, RingElem};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Which variable survives: `Side::V` is `C/U`, `Side::U` is `C/V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    U,
    V,
}

impl Side {
    pub(crate) fn degree(self, g: &Bigrading) -> i64 {
        match self {
            Side::V => g.gr_u,
            Side::U => g.gr_v,
        }
    }

    /// The surviving power of a monomial, if the other variable is absent.
    fn keep(self, m: &Monomial) -> Option<u32> {
        match self {
            Side::V => (m.u == 0).then_some(m.v),
            Side::U => (m.v == 0).then_some(m.u),
        }
    }

    fn poly_of(self, e: Option<&RingElem>) -> Poly {
        let mut p = Poly::zero();
        if let Some(e) = e {
            for m in e.terms() {
                if let Some(k) = self.keep(m) {
                    p = p.add(&Poly::monomial(k as usize));
                }
            }
        }
        p
    }
}

/// Generator indices grouped by side degree.
fn groups(c: &BigradedComplex, side: Side) -> BTreeMap<i64, Vec<usize>> {
    let mut out: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, g) in c.gens().iter().enumerate() {
        out.entry(side.degree(&g.grading)).or_default().push(i);
    }
    out
}

/// The matrix of the side differential from the span of `from` to the span
/// of `to` (rows indexed by `to`, columns by `from`).
fn boundary_matrix(c: &BigradedComplex, side: Side, from: &[usize], to: &[usize]) -> PolyMatrix {
    PolyMatrix::from_fn(to.len(), from.len(), |r, col| side.poly_of(c.entry(from[col], to[r])))
}

/// Free rank of the side homology in each occupied degree.
pub(crate) fn free_ranks(c: &BigradedComplex, side: Side) -> BTreeMap<i64, usize> {
    let groups = groups(c, side);
    let mut rank_out: BTreeMap<i64, usize> = BTreeMap::new();
    for (&d, gens_d) in &groups {
        let r = match groups.get(&(d - 1)) {
            Some(tgt) => boundary_matrix(c, side, gens_d, tgt).snf().rank(),
            None => 0,
        };
        rank_out.insert(d, r);
    }
    groups
        .iter()
        .map(|(&d, gens_d)| {
            let r_out = rank_out[&d];
            let r_in = rank_out.get(&(d + 1)).copied().unwrap_or(0);
            (d, gens_d.len().saturating_sub(r_out).saturating_sub(r_in))
        })
        .collect()
}

/// The degree-zero homology of one side, presented so that the coefficient
/// of a cycle on the unique free tower can be read off exactly.
pub(crate) struct SideTower {
    /// Generator indices (into the complex) at side degree 0.
    pub(crate) deg0: Vec<usize>,
    /// SNF of the matrix whose columns are a kernel basis of the outgoing
    /// differential, used to express cycles in that basis.
    ksnf: Snf,
    /// Change of basis diagonalizing the incoming boundaries.
    sy: PolyMatrix,
    free_idx: usize,
    /// A cycle generating the free tower, in coordinates over `deg0`.
    pub(crate) tower_gen: Vec<Poly>,
}

pub(crate) fn side_tower(c: &BigradedComplex, side: Side) -> Result<SideTower> {
    let groups = groups(c, side);
    let deg0 = groups.get(&0).cloned().unwrap_or_default();
    if deg0.is_empty() {
        return Err(Error::NotKnotLike("no generators at side degree 0".into()));
    }
    let n0 = deg0.len();
    let kvecs: Vec<Vec<Poly>> = match groups.get(&-1) {
        Some(tgt) => {
            let m0 = boundary_matrix(c, side, &deg0, tgt);
            m0.snf().kernel_basis(m0.ncols())
        }
        None => (0..n0)
            .map(|i| (0..n0).map(|j| if i == j { Poly::one() } else { Poly::zero() }).collect())
            .collect(),
    };
    let k = kvecs.len();
    if k == 0 {
        return Err(Error::NotKnotLike("no cycles at side degree 0".into()));
    }
    let kmat = PolyMatrix::from_fn(n0, k, |r, col| kvecs[col][r].clone());
    let ksnf = kmat.snf();
    let (n1, mat1) = match groups.get(&1) {
        Some(src) => (src.len(), boundary_matrix(c, side, src, &deg0)),
        None => (0, PolyMatrix::zero(n0, 0)),
    };
    let mut y = PolyMatrix::zero(k, n1);
    for j in 0..n1 {
        let w = ksnf
            .solve(&mat1.column(j))
            .ok_or_else(|| Error::Invalid("a boundary from degree 1 is not a cycle".into()))?;
        for i in 0..k {
            *y.at_mut(i, j) = w[i].clone();
        }
    }
    let ysnf = y.snf();
    let free: Vec<usize> =
        (0..k).filter(|&i| i >= ysnf.d.len() || ysnf.d[i].is_zero()).collect();
    if free.len() != 1 {
        return Err(Error::NotKnotLike(format!(
            "side homology has {} free towers at degree 0, expected 1",
            free.len()
        )));
    }
    let free_idx = free[0];
    let mut e = vec![Poly::zero(); k];
    e[free_idx] = Poly::one();
    let tower_gen = kmat.apply(&ysnf.sinv.apply(&e));
    Ok(SideTower { deg0, ksnf, sy: ysnf.s, free_idx, tower_gen })
}

impl SideTower {
    /// The coefficient of a degree-zero cycle (coordinates over `deg0`) on
    /// the free tower; `None` if the vector is not a cycle.
    pub(crate) fn class_coeff(&self, cycle: &[Poly]) -> Option<Poly> {
        let w = self.ksnf.solve(cycle)?;
        Some(self.sy.apply(&w).swap_remove(self.free_idx))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingTag;

    fn trefoil() -> BigradedComplex {
        BigradedComplex::parse(
            "ring R\ngen x0 0 -2\ngen x1 -1 -1\ngen x2 -2 0\ndif x1 x0 U\ndif x1 x2 V\n",
        )
        .unwrap()
    }

    #[test]
    fn trefoil_free_ranks() {
        let c = trefoil();
        let v = free_ranks(&c, Side::V);
        assert_eq!(v, [(0, 1), (-1, 0), (-2, 0)].into_iter().collect());
        let u = free_ranks(&c, Side::U);
        assert_eq!(u, [(0, 1), (-1, 0), (-2, 0)].into_iter().collect());
    }

    #[test]
    fn trefoil_tower_and_coefficients() {
        let c = trefoil();
        let t = side_tower(&c, Side::V).unwrap();
        assert_eq!(t.deg0, vec![0]);
        assert_eq!(t.tower_gen, vec![Poly::one()]);
        assert_eq!(t.class_coeff(&[Poly::one()]), Some(Poly::one()));
        // V * x0 lies V deep in the tower.
        assert_eq!(t.class_coeff(&[Poly::monomial(1)]), Some(Poly::monomial(1)));
    }

    #[test]
    fn single_generator_tower() {
        let mut c = BigradedComplex::new(RingTag::R);
        c.add_generator("e", Bigrading::new(0, 0)).unwrap();
        for side in [Side::U, Side::V] {
            let t = side_tower(&c, side).unwrap();
            assert_eq!(t.tower_gen, vec![Poly::one()]);
        }
    }

    #[test]
    fn acyclic_pair_has_no_tower() {
        let c = BigradedComplex::parse("ring R\ngen a 0 0\ngen b -1 -1\ndif a b 1\n").unwrap();
        assert!(matches!(side_tower(&c, Side::V), Err(Error::NotKnotLike(_))));
    }

    #[test]
    fn pure_torsion_has_no_tower() {
        // ∂x = Vy: the degree-0 side homology is F2[V]/V, all torsion.
        let c = BigradedComplex::parse("ring R\ngen y 0 0\ngen x 1 -1\ndif x y V\n").unwrap();
        assert!(c.validate().is_valid());
        assert!(matches!(side_tower(&c, Side::V), Err(Error::NotKnotLike(_))));
    }

    #[test]
    fn figure_eight_tower() {
        let c = BigradedComplex::parse(
            "ring R\n\
             gen x0 0 0\n\
             gen x1 -1 1\n\
             gen x2 -2 2\n\
             gen x3 -1 1\n\
             gen x4 0 0\n\
             dif x1 x0 U\n\
             dif x1 x2 V\n\
             dif x2 x3 U\n\
             dif x4 x3 V\n",
        )
        .unwrap();
        assert!(c.validate().is_valid());
        assert!(c.is_knot_like().unwrap());
        let t = side_tower(&c, Side::V).unwrap();
        // Degree-0 generators are x0 and x4; the tower is generated by x0.
        assert_eq!(t.deg0, vec![0, 4]);
        assert_eq!(t.class_coeff(&[Poly::one(), Poly::zero()]), Some(Poly::one()));
        // x4 is not a cycle on this side.
        assert_eq!(t.class_coeff(&[Poly::zero(), Poly::one()]), None);
    }
}
