//! The subspaces `𝒩_i = (E*_0V + ⋯ + E*_iV) ∩ (E_0V + ⋯ + E_{D−i}V)` and
//! their direct sum `𝒩`.

use serde::Serialize;

use crate::bose_mesner::SpectralData;
use crate::combinatorics::{binomial_u64, GroundParams};
use crate::dual::DualData;
use crate::error::{Error, Result};
use crate::linalg::{is_direct_sum, sum_all, ExactMatrix, Subspace};

#[derive(Debug, Clone)]
pub struct NucleusData {
    /// `𝒩_0..𝒩_D`
    pub parts: Vec<Subspace>,
    pub total: Subspace,
    /// `E*_0𝒩..E*_D𝒩`
    pub estar_slices: Vec<Subspace>,
    pub dims_parts: Vec<usize>,
    pub dims_estar: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicityTable {
    /// `mult_0..mult_{⌊D/2⌋}`
    pub mult: Vec<u64>,
}

/// Cumulative sums `E_0V + ⋯ + E_jV` for `j = 0..D`, each `E_jV` taken as
/// the column space of `E_j`.
pub fn eigenspace_sums(sd: &SpectralData) -> Result<Vec<Subspace>> {
    let mut out: Vec<Subspace> = Vec::with_capacity(sd.idempotents.len());
    for e in &sd.idempotents {
        let col = Subspace::column_space(e);
        let next = match out.last() {
            Some(prev) => prev.sum(&col)?,
            None => col,
        };
        out.push(next);
    }
    Ok(out)
}

/// Cumulative sums `E*_0V + ⋯ + E*_iV` for `i = 0..D`.
pub fn dual_eigenspace_sums(dd: &DualData) -> Result<Vec<Subspace>> {
    let n = dd.dual_adjacency.rows();
    let mut out: Vec<Subspace> = Vec::with_capacity(dd.layers.len());
    for layer in &dd.layers {
        let col = Subspace::coordinate(n, layer.iter().copied())?;
        let next = match out.last() {
            Some(prev) => prev.sum(&col)?,
            None => col,
        };
        out.push(next);
    }
    Ok(out)
}

fn part_from_sums(estar_sums: &[Subspace], e_sums: &[Subspace], i: usize) -> Result<Subspace> {
    let d = e_sums.len() - 1;
    if i > d {
        return Err(Error::Index(format!("𝒩_{i} with D = {d}")));
    }
    estar_sums[i].intersect(&e_sums[d - i])
}

/// `𝒩_i` from scratch.
pub fn nucleus_part(p: &GroundParams, sd: &SpectralData, dd: &DualData, i: usize) -> Result<Subspace> {
    if i > p.d() {
        return Err(Error::Index(format!("𝒩_{i} with D = {}", p.d())));
    }
    part_from_sums(&dual_eigenspace_sums(dd)?, &eigenspace_sums(sd)?, i)
}

/// All `𝒩_i`, their sum, and the slices `E*_i𝒩`. Fails if the `𝒩_i` are
/// not independent.
pub fn nucleus(p: &GroundParams, sd: &SpectralData, dd: &DualData) -> Result<NucleusData> {
    let e_sums = eigenspace_sums(sd)?;
    let estar_sums = dual_eigenspace_sums(dd)?;
    nucleus_from_sums(p, dd, &estar_sums, &e_sums)
}

pub fn nucleus_from_sums(
    p: &GroundParams,
    dd: &DualData,
    estar_sums: &[Subspace],
    e_sums: &[Subspace],
) -> Result<NucleusData> {
    let parts = (0..=p.d())
        .map(|i| part_from_sums(estar_sums, e_sums, i))
        .collect::<Result<Vec<_>>>()?;
    if !is_direct_sum(&parts)? {
        return Err(Error::Verification(format!(
            "𝒩_0 + … + 𝒩_D is not direct: dims {:?}",
            parts.iter().map(Subspace::dim).collect::<Vec<_>>()
        )));
    }
    let n = dd.dual_adjacency.rows();
    let total = sum_all(n, &parts)?;
    let estar_slices = dd
        .dual_idempotents
        .iter()
        .map(|e| total.image(e))
        .collect::<Result<Vec<_>>>()?;
    Ok(NucleusData {
        dims_parts: parts.iter().map(Subspace::dim).collect(),
        dims_estar: estar_slices.iter().map(Subspace::dim).collect(),
        parts,
        total,
        estar_slices,
    })
}

impl NucleusData {
    pub fn dim(&self) -> usize {
        self.total.dim()
    }

    /// `𝒩 = Σ E*_i𝒩` with the sum direct.
    pub fn estar_decomposition_holds(&self) -> Result<bool> {
        let n = self.total.ambient_dim();
        Ok(is_direct_sum(&self.estar_slices)? && sum_all(n, &self.estar_slices)? == self.total)
    }

    /// `dim 𝒩_i = dim E*_{D−i}𝒩 = C(D,i)` and `dim 𝒩 = 2^D`; returns the
    /// first mismatch.
    pub fn dimension_mismatch(&self) -> Option<String> {
        let d = self.parts.len() - 1;
        if self.dim() != 1 << d {
            return Some(format!("dim 𝒩 = {} ≠ 2^{d}", self.dim()));
        }
        for i in 0..=d {
            let expected = binomial_u64(d as u64, i as i64) as usize;
            if self.dims_parts[i] != expected {
                return Some(format!("dim 𝒩_{i} = {} ≠ C({d},{i}) = {expected}", self.dims_parts[i]));
            }
            if self.dims_estar[d - i] != expected {
                return Some(format!(
                    "dim E*_{}𝒩 = {} ≠ C({d},{i}) = {expected}",
                    d - i,
                    self.dims_estar[d - i]
                ));
            }
        }
        None
    }
}

/// `A·𝒩 ⊆ 𝒩` and `A*·𝒩 ⊆ 𝒩`.
pub fn verify_t_module(nd: &NucleusData, a: &ExactMatrix, astar: &ExactMatrix) -> Result<bool> {
    Ok(nd.total.is_invariant_under(a)? && nd.total.is_invariant_under(astar)?)
}

/// `mult_0 = 1`, `mult_r = C(D,r) − C(D,r−1)` for `1 ≤ r ≤ D/2`, checked
/// against `Σ_{r≤i} mult_r = C(D,i)`.
pub fn multiplicities(p: &GroundParams) -> Result<MultiplicityTable> {
    let d = p.d() as u64;
    let mult: Vec<u64> = (0..=d / 2)
        .map(|r| {
            if r == 0 {
                1
            } else {
                binomial_u64(d, r as i64) - binomial_u64(d, r as i64 - 1)
            }
        })
        .collect();
    let mut running = 0;
    for (i, m) in mult.iter().enumerate() {
        if *m == 0 {
            return Err(Error::Verification(format!("mult_{i} = 0")));
        }
        running += m;
        let expected = binomial_u64(d, i as i64);
        if running != expected {
            return Err(Error::Verification(format!(
                "Σ_{{r≤{i}}} mult_r = {running} ≠ C({d},{i}) = {expected}"
            )));
        }
    }
    Ok(MultiplicityTable { mult })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bose_mesner::{adjacency_matrix, primitive_idempotents};
    use crate::combinatorics::{enumerate_vertices, Vertex, VertexOrder};
    use crate::rational::Rational;

    struct Inst {
        p: GroundParams,
        o: VertexOrder,
        a: ExactMatrix,
        sd: SpectralData,
        dd: DualData,
    }

    fn inst(n: usize, d: usize, x: &[usize]) -> Inst {
        let p = GroundParams::new(n, d).unwrap();
        let o = enumerate_vertices(p);
        let a = adjacency_matrix(&p, &o);
        let sd = primitive_idempotents(&p, &a).unwrap();
        let x = Vertex::from_elements(n, x.iter().copied()).unwrap();
        let dd = DualData::build(&p, &o, &x, &sd).unwrap();
        Inst { p, o, a, sd, dd }
    }

    #[test]
    fn endpoints_of_the_nucleus() {
        let t = inst(5, 2, &[1, 2]);
        let n0 = nucleus_part(&t.p, &t.sd, &t.dd, 0).unwrap();
        assert_eq!(n0, Subspace::coordinate(10, [t.dd.base_index]).unwrap());
        let n2 = nucleus_part(&t.p, &t.sd, &t.dd, 2).unwrap();
        assert_eq!(n2, Subspace::span(10, vec![vec![Rational::one(); 10]]).unwrap());
        assert_eq!(nucleus_part(&t.p, &t.sd, &t.dd, 1).unwrap().dim(), 2);
        assert!(matches!(nucleus_part(&t.p, &t.sd, &t.dd, 3), Err(Error::Index(_))));
        assert_eq!(t.o.len(), 10);
    }

    #[test]
    fn nucleus_dimensions() {
        let t = inst(5, 2, &[1, 2]);
        let nd = nucleus(&t.p, &t.sd, &t.dd).unwrap();
        assert_eq!(nd.dims_parts, vec![1, 2, 1]);
        assert_eq!(nd.dim(), 4);
        assert!(is_direct_sum(&nd.parts).unwrap());

        let t = inst(7, 3, &[1, 2, 3]);
        let nd = nucleus(&t.p, &t.sd, &t.dd).unwrap();
        assert_eq!(nd.dim(), 8);
        assert_eq!(nd.dims_estar, vec![1, 3, 3, 1]);
        assert!(nd.estar_decomposition_holds().unwrap());
        assert_eq!(nd.dimension_mismatch(), None);

        let t = inst(9, 4, &[1, 2, 3, 4]);
        assert_eq!(nucleus(&t.p, &t.sd, &t.dd).unwrap().dim(), 16);
    }

    #[test]
    fn nucleus_is_a_t_module() {
        for (n, d) in [(5, 2), (7, 3)] {
            let x: Vec<usize> = (1..=d).collect();
            let t = inst(n, d, &x);
            let nd = nucleus(&t.p, &t.sd, &t.dd).unwrap();
            assert!(verify_t_module(&nd, &t.a, &t.dd.dual_adjacency).unwrap());
        }
    }

    #[test]
    fn t_module_check_rejects_a_non_invariant_space() {
        let t = inst(5, 2, &[1, 2]);
        let mut nd = nucleus(&t.p, &t.sd, &t.dd).unwrap();
        // span{x̂} is A*-invariant but not A-invariant
        nd.total = nd.parts[0].clone();
        assert!(!verify_t_module(&nd, &t.a, &t.dd.dual_adjacency).unwrap());
    }

    #[test]
    fn dimensions_do_not_depend_on_base_vertex() {
        let a = inst(7, 3, &[1, 2, 3]);
        let b = inst(7, 3, &[2, 4, 7]);
        let na = nucleus(&a.p, &a.sd, &a.dd).unwrap();
        let nb = nucleus(&b.p, &b.sd, &b.dd).unwrap();
        assert_eq!(na.dims_parts, nb.dims_parts);
        assert_eq!(na.dims_estar, nb.dims_estar);
        assert_ne!(na.total, nb.total);
    }

    #[test]
    fn multiplicity_examples() {
        let m = |d: usize| multiplicities(&GroundParams::new(2 * d + 1, d).unwrap()).unwrap().mult;
        assert_eq!(m(2), vec![1, 1]);
        assert_eq!(m(3), vec![1, 2]);
        assert_eq!(m(5), vec![1, 4, 5]);
        assert_eq!(m(0), vec![1]);
    }
}
