//! The vectors `α^∨` and `α^𝒩` for `α ⊆ x`, their transition matrices, and
//! the actions of `A` and `A*` on them.

use std::collections::HashMap;

use serde::Serialize;

use crate::bose_mesner::{eigenvalues, SpectralData};
use crate::combinatorics::{binomial_u64, subsets_of_base, GroundParams, SubsetOfX, Vertex, VertexOrder};
use crate::dual::DualData;
use crate::error::{Error, Result};
use crate::linalg::{linear_combination, ExactMatrix, Subspace, Vector};
use crate::nucleus::NucleusData;
use crate::rational::Rational;

#[derive(Debug, Clone)]
pub struct BasisFamily {
    pub params: GroundParams,
    pub base: Vertex,
    /// Subsets of `x`, size-then-colex.
    pub order: Vec<SubsetOfX>,
    pub vee_vectors: Vec<Vector>,
    pub nuc_vectors: Vec<Vector>,
    /// Row `α` expresses `α^∨` in the `β^𝒩` basis.
    pub zeta: ExactMatrix,
    /// Row `α` expresses `α^𝒩` in the `β^∨` basis.
    pub moebius: ExactMatrix,
    index: HashMap<SubsetOfX, usize>,
}

fn check_subset(x: &Vertex, alpha: &SubsetOfX) -> Result<()> {
    if alpha.set().is_subset(x.set()) {
        Ok(())
    } else {
        Err(Error::InvalidSubset(format!("{alpha} is not a subset of {x}")))
    }
}

fn indicator(order: &VertexOrder, f: impl Fn(&Vertex) -> bool) -> Vector {
    order
        .iter()
        .map(|y| if f(y) { Rational::one() } else { Rational::zero() })
        .collect()
}

/// Characteristic vector of `{y : α ⊆ y}`.
pub fn alpha_vee(order: &VertexOrder, x: &Vertex, alpha: &SubsetOfX) -> Result<Vector> {
    check_subset(x, alpha)?;
    Ok(indicator(order, |y| alpha.set().is_subset(y.set())))
}

/// Characteristic vector of `{y : y ∩ x = α}`.
pub fn alpha_nuc(order: &VertexOrder, x: &Vertex, alpha: &SubsetOfX) -> Result<Vector> {
    check_subset(x, alpha)?;
    Ok(indicator(order, |y| y.set().intersection(x.set()) == *alpha.set()))
}

/// Zeta and Möbius matrices of the boolean lattice on `order`.
pub fn transition_matrices(order: &[SubsetOfX]) -> (ExactMatrix, ExactMatrix) {
    let m = order.len();
    let zeta = ExactMatrix::from_fn(m, m, |a, b| {
        if order[a].is_subset(&order[b]) {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    let moebius = ExactMatrix::from_fn(m, m, |a, b| {
        if !order[a].is_subset(&order[b]) {
            Rational::zero()
        } else if (order[b].len() - order[a].len()) % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        }
    });
    (zeta, moebius)
}

impl BasisFamily {
    pub fn build(p: &GroundParams, order: &VertexOrder, x: &Vertex) -> Result<Self> {
        let subsets = subsets_of_base(x);
        let vee_vectors = subsets
            .iter()
            .map(|a| alpha_vee(order, x, a))
            .collect::<Result<Vec<_>>>()?;
        let nuc_vectors = subsets
            .iter()
            .map(|a| alpha_nuc(order, x, a))
            .collect::<Result<Vec<_>>>()?;
        let (zeta, moebius) = transition_matrices(&subsets);
        let index = subsets.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        Ok(BasisFamily {
            params: *p,
            base: x.clone(),
            order: subsets,
            vee_vectors,
            nuc_vectors,
            zeta,
            moebius,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn index_of(&self, alpha: &SubsetOfX) -> Result<usize> {
        self.index
            .get(alpha)
            .copied()
            .ok_or_else(|| Error::InvalidSubset(format!("{alpha} is not a subset of {}", self.base)))
    }

    pub fn vee(&self, alpha: &SubsetOfX) -> Result<&Vector> {
        Ok(&self.vee_vectors[self.index_of(alpha)?])
    }

    pub fn nuc(&self, alpha: &SubsetOfX) -> Result<&Vector> {
        Ok(&self.nuc_vectors[self.index_of(alpha)?])
    }

    /// Indices of the subsets of size `s`.
    pub fn of_size(&self, s: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.order[i].len() == s).collect()
    }

    fn ambient(&self) -> usize {
        self.vee_vectors.first().map_or(0, Vec::len)
    }

    /// `zeta·moebius = moebius·zeta = I` and both change-of-basis identities
    /// hold entrywise.
    pub fn transition_violation(&self) -> Result<Option<String>> {
        let m = self.len();
        let id = ExactMatrix::identity(m);
        if self.zeta.mul(&self.moebius)? != id || self.moebius.mul(&self.zeta)? != id {
            return Ok(Some("zeta and moebius are not inverse".into()));
        }
        let n = self.ambient();
        for (a, alpha) in self.order.iter().enumerate() {
            let from_nuc = linear_combination(
                (0..m).map(|b| (self.zeta.get(a, b).clone(), self.nuc_vectors[b].as_slice())),
                n,
            );
            if from_nuc != self.vee_vectors[a] {
                return Ok(Some(format!("{alpha}^∨ ≠ Σ_{{β ⊇ {alpha}}} β^𝒩")));
            }
            let from_vee = linear_combination(
                (0..m).map(|b| (self.moebius.get(a, b).clone(), self.vee_vectors[b].as_slice())),
                n,
            );
            if from_vee != self.nuc_vectors[a] {
                return Ok(Some(format!("{alpha}^𝒩 ≠ Σ (−1)^{{|β|−|α|}} β^∨ for α = {alpha}")));
            }
        }
        Ok(None)
    }

    /// The supports of the `α^𝒩` partition the vertex set.
    pub fn supports_partition(&self) -> bool {
        (0..self.ambient()).all(|y| {
            self.nuc_vectors.iter().filter(|v| !v[y].is_zero()).count() == 1
        })
    }

    /// Support sizes `(|α^∨|, |α^𝒩|)` per subset.
    pub fn support_sizes(&self) -> Vec<(usize, usize)> {
        let count = |v: &Vector| v.iter().filter(|e| !e.is_zero()).count();
        self.vee_vectors
            .iter()
            .zip(&self.nuc_vectors)
            .map(|(v, u)| (count(v), count(u)))
            .collect()
    }

    /// Support sizes against `C(N−|α|, D−|α|)` and `C(N−D, D−|α|)`.
    pub fn support_size_violation(&self) -> Option<String> {
        let (n, d) = (self.params.n() as u64, self.params.d() as i64);
        for (alpha, (sv, sn)) in self.order.iter().zip(self.support_sizes()) {
            let a = alpha.len() as u64;
            let ev = binomial_u64(n - a, d - a as i64) as usize;
            let en = binomial_u64(n - d as u64, d - a as i64) as usize;
            if sv != ev {
                return Some(format!("|supp {alpha}^∨| = {sv} ≠ {ev}"));
            }
            if sn != en {
                return Some(format!("|supp {alpha}^𝒩| = {sn} ≠ {en}"));
            }
        }
        None
    }
}

fn mismatch(what: &str, alpha: &SubsetOfX, lhs: &Vector, rhs: &Vector) -> Error {
    let y = lhs.iter().zip(rhs).position(|(l, r)| l != r).unwrap_or(0);
    Error::Verification(format!(
        "{what} fails for α = {alpha}: entry {y} is {} but the expansion gives {}",
        lhs[y], rhs[y]
    ))
}

fn sum_over<'a>(bf: &'a BasisFamily, vectors: &'a [Vector], pick: impl Fn(&SubsetOfX) -> bool) -> Vec<&'a [Rational]> {
    bf.order
        .iter()
        .zip(vectors)
        .filter(|(b, _)| pick(b))
        .map(|(_, v)| v.as_slice())
        .collect()
}

fn assemble(n: usize, terms: Vec<(Rational, Vec<&[Rational]>)>) -> Vector {
    linear_combination(
        terms
            .iter()
            .flat_map(|(c, vs)| vs.iter().map(move |v| (c.clone(), *v))),
        n,
    )
}

/// `E*_{D−|α|}·α^∨`, checked against `α^𝒩`.
pub fn project_vee(dd: &DualData, bf: &BasisFamily, alpha: &SubsetOfX) -> Result<Vector> {
    let i = bf.params.d() - alpha.len();
    let out = dd.dual_idempotents[i].mul_vec(bf.vee(alpha)?)?;
    let expected = bf.nuc(alpha)?;
    if out != *expected {
        return Err(mismatch("E*_{D−|α|}α^∨ = α^𝒩", alpha, &out, expected));
    }
    Ok(out)
}

/// `A·α^∨ = θ_{|α|}α^∨ + (D−|α|+1) Σ_{β ⊂ α, |β| = |α|−1} β^∨`.
pub fn apply_a_vee(a: &ExactMatrix, bf: &BasisFamily, alpha: &SubsetOfX) -> Result<Vector> {
    let p = &bf.params;
    let (d, s) = (p.d() as i64, alpha.len());
    let lhs = a.mul_vec(bf.vee(alpha)?)?;
    let theta = eigenvalues(p)[s];
    let below = sum_over(bf, &bf.vee_vectors, |b| b.len() + 1 == s && b.is_subset(alpha));
    let rhs = assemble(
        lhs.len(),
        vec![
            (Rational::from_int(theta), vec![bf.vee(alpha)?.as_slice()]),
            (Rational::from_int(d - s as i64 + 1), below),
        ],
    );
    if lhs != rhs {
        return Err(mismatch("A·α^∨ expansion", alpha, &lhs, &rhs));
    }
    Ok(lhs)
}

/// `A·α^𝒩` as the four-term expansion over `β` of sizes `|α|`, `|α|±1`.
pub fn apply_a_nuc(a: &ExactMatrix, bf: &BasisFamily, alpha: &SubsetOfX) -> Result<Vector> {
    let p = &bf.params;
    let (n, d, s) = (p.n() as i64, p.d() as i64, alpha.len() as i64);
    let lhs = a.mul_vec(bf.nuc(alpha)?)?;
    let su = alpha.len();
    let above = sum_over(bf, &bf.nuc_vectors, |b| b.len() == su + 1 && alpha.is_subset(b));
    let beside = sum_over(bf, &bf.nuc_vectors, |b| {
        b.len() == su && su > 0 && b.intersection_len(alpha) + 1 == su
    });
    let below = sum_over(bf, &bf.nuc_vectors, |b| b.len() + 1 == su && b.is_subset(alpha));
    let rhs = assemble(
        lhs.len(),
        vec![
            (Rational::from_int((d - s) * (n - 2 * d + s)), vec![bf.nuc(alpha)?.as_slice()]),
            (Rational::from_int(n - 2 * d + s + 1), above),
            (Rational::one(), beside),
            (Rational::from_int(d - s + 1), below),
        ],
    );
    if lhs != rhs {
        return Err(mismatch("A·α^𝒩 expansion", alpha, &lhs, &rhs));
    }
    Ok(lhs)
}

/// `A*·α^𝒩 = θ*_{D−|α|}α^𝒩`.
pub fn apply_astar_nuc(dd: &DualData, bf: &BasisFamily, alpha: &SubsetOfX) -> Result<Vector> {
    let v = bf.nuc(alpha)?;
    let lhs = dd.dual_adjacency.mul_vec(v)?;
    let theta = &dd.theta_star[bf.params.d() - alpha.len()];
    let rhs: Vector = v.iter().map(|e| e * theta).collect();
    if lhs != rhs {
        return Err(mismatch("A*·α^𝒩 = θ*_{D−|α|}α^𝒩", alpha, &lhs, &rhs));
    }
    Ok(lhs)
}

/// `A*·α^∨ = θ*_{D−|α|}α^∨ + N(N−1)/(D(N−D)) Σ_{α ⊆ γ ⊆ x, |γ| = |α|+1} γ^∨`.
pub fn apply_astar_vee(dd: &DualData, bf: &BasisFamily, alpha: &SubsetOfX) -> Result<Vector> {
    let p = &bf.params;
    let v = bf.vee(alpha)?;
    let lhs = dd.dual_adjacency.mul_vec(v)?;
    let theta = dd.theta_star[p.d() - alpha.len()].clone();
    let above = sum_over(bf, &bf.vee_vectors, |g| g.len() == alpha.len() + 1 && alpha.is_subset(g));
    let (n, d) = (p.n() as i64, p.d() as i64);
    let mut terms = vec![(theta, vec![v.as_slice()])];
    if !above.is_empty() {
        terms.push((Rational::new(n * (n - 1), d * (n - d)), above));
    }
    let rhs = assemble(lhs.len(), terms);
    if lhs != rhs {
        return Err(mismatch("A*·α^∨ expansion", alpha, &lhs, &rhs));
    }
    Ok(lhs)
}

/// The four memberships for `α`, each `None` when it holds:
/// `E_rα^∨ = 0` for `r > |α|`, `E*_jα^∨ = 0` for `j > D−|α|`,
/// `α^∨ ∈ 𝒩_{D−|α|}`, `α^𝒩 ∈ E*_{D−|α|}𝒩`.
pub fn membership_violations(
    sd: &SpectralData,
    dd: &DualData,
    nd: &NucleusData,
    bf: &BasisFamily,
    alpha: &SubsetOfX,
) -> Result<[Option<String>; 4]> {
    let d = bf.params.d();
    let s = alpha.len();
    let vee = bf.vee(alpha)?;
    let mut out: [Option<String>; 4] = Default::default();
    for r in s + 1..=d {
        if !sd.idempotents[r].mul_vec(vee)?.iter().all(Rational::is_zero) {
            out[0] = Some(format!("E_{r}·{alpha}^∨ ≠ 0"));
            break;
        }
    }
    for j in d - s + 1..=d {
        if !dd.dual_idempotents[j].mul_vec(vee)?.iter().all(Rational::is_zero) {
            out[1] = Some(format!("E*_{j}·{alpha}^∨ ≠ 0"));
            break;
        }
    }
    if !nd.parts[d - s].contains(vee) {
        out[2] = Some(format!("{alpha}^∨ ∉ 𝒩_{}", d - s));
    }
    if !nd.estar_slices[d - s].contains(bf.nuc(alpha)?) {
        out[3] = Some(format!("{alpha}^𝒩 ∉ E*_{}𝒩", d - s));
    }
    Ok(out)
}

/// First failing membership for `α`, if any.
pub fn membership_violation(
    sd: &SpectralData,
    dd: &DualData,
    nd: &NucleusData,
    bf: &BasisFamily,
    alpha: &SubsetOfX,
) -> Result<Option<String>> {
    Ok(membership_violations(sd, dd, nd, bf, alpha)?.into_iter().flatten().next())
}

pub fn verify_membership(
    sd: &SpectralData,
    dd: &DualData,
    nd: &NucleusData,
    bf: &BasisFamily,
    alpha: &SubsetOfX,
) -> Result<bool> {
    Ok(membership_violation(sd, dd, nd, bf, alpha)?.is_none())
}

/// Outcome of the four basis statements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisVerdict {
    /// `{α^𝒩}` is a basis of `𝒩`.
    pub nuc_spans_nucleus: bool,
    /// `{α^∨}` is a basis of `𝒩`.
    pub vee_spans_nucleus: bool,
    /// `{α^𝒩 : |α| = D−i}` is a basis of `E*_i𝒩`, per `i`.
    pub nuc_spans_estar_slice: Vec<bool>,
    /// `{α^∨ : |α| = D−i}` is a basis of `𝒩_i`, per `i`.
    pub vee_spans_part: Vec<bool>,
    pub dims: Vec<usize>,
}

impl BasisVerdict {
    pub fn all_hold(&self) -> bool {
        self.nuc_spans_nucleus
            && self.vee_spans_nucleus
            && self.nuc_spans_estar_slice.iter().all(|&b| b)
            && self.vee_spans_part.iter().all(|&b| b)
    }
}

fn is_basis_of(vectors: Vec<Vector>, target: &Subspace) -> Result<bool> {
    let count = vectors.len();
    let span = Subspace::span(target.ambient_dim(), vectors)?;
    Ok(span.dim() == count && span == *target)
}

pub fn verify_bases(nd: &NucleusData, bf: &BasisFamily) -> Result<BasisVerdict> {
    let d = bf.params.d();
    let nuc_spans_nucleus = is_basis_of(bf.nuc_vectors.clone(), &nd.total)?;
    let vee_spans_nucleus = is_basis_of(bf.vee_vectors.clone(), &nd.total)?;
    let mut nuc_spans_estar_slice = Vec::with_capacity(d + 1);
    let mut vee_spans_part = Vec::with_capacity(d + 1);
    let mut dims = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let idx = bf.of_size(d - i);
        dims.push(idx.len());
        let pick = |vs: &[Vector]| idx.iter().map(|&k| vs[k].clone()).collect::<Vec<_>>();
        nuc_spans_estar_slice.push(is_basis_of(pick(&bf.nuc_vectors), &nd.estar_slices[i])?);
        vee_spans_part.push(is_basis_of(pick(&bf.vee_vectors), &nd.parts[i])?);
    }
    Ok(BasisVerdict {
        nuc_spans_nucleus,
        vee_spans_nucleus,
        nuc_spans_estar_slice,
        vee_spans_part,
        dims,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bose_mesner::{adjacency_matrix, primitive_idempotents};
    use crate::combinatorics::enumerate_vertices;
    use crate::nucleus::nucleus;

    struct Inst {
        o: VertexOrder,
        x: Vertex,
        a: ExactMatrix,
        sd: SpectralData,
        dd: DualData,
        bf: BasisFamily,
    }

    fn inst(n: usize, d: usize) -> Inst {
        let p = GroundParams::new(n, d).unwrap();
        let o = enumerate_vertices(p);
        let a = adjacency_matrix(&p, &o);
        let sd = primitive_idempotents(&p, &a).unwrap();
        let x = p.default_base();
        let dd = DualData::build(&p, &o, &x, &sd).unwrap();
        let bf = BasisFamily::build(&p, &o, &x).unwrap();
        Inst { o, x, a, sd, dd, bf }
    }

    fn sub(t: &Inst, s: &str) -> SubsetOfX {
        SubsetOfX::parse(&t.x, t.o.params().n(), s).unwrap()
    }

    fn support(o: &VertexOrder, v: &[Rational]) -> Vec<String> {
        (0..v.len()).filter(|&i| !v[i].is_zero()).map(|i| o.get(i).to_string()).collect()
    }

    #[test]
    fn alpha_vector_examples() {
        let t = inst(5, 2);
        assert!(t.bf.vee(&sub(&t, "[]")).unwrap().iter().all(Rational::is_one));
        let xhat = t.bf.vee(&sub(&t, "[1,2]")).unwrap();
        assert_eq!(support(&t.o, xhat), vec!["[1,2]"]);
        assert_eq!(t.bf.nuc(&sub(&t, "[1,2]")).unwrap(), xhat);
        assert_eq!(support(&t.o, t.bf.vee(&sub(&t, "[1]")).unwrap()).len(), 4);
        let mut far = support(&t.o, t.bf.nuc(&sub(&t, "[]")).unwrap());
        far.sort();
        assert_eq!(far, vec!["[3,4]", "[3,5]", "[4,5]"]);
        assert_eq!(support(&t.o, t.bf.nuc(&sub(&t, "[1]")).unwrap()).len(), 3);
        assert_eq!(t.bf.support_size_violation(), None);
        assert!(t.bf.supports_partition());
    }

    #[test]
    fn foreign_subset_is_rejected() {
        let t = inst(5, 2);
        let y = Vertex::from_elements(5, [3, 4]).unwrap();
        let alpha = SubsetOfX::parse(&y, 5, "[3]").unwrap();
        assert!(matches!(alpha_vee(&t.o, &t.x, &alpha), Err(Error::InvalidSubset(_))));
        assert!(matches!(alpha_nuc(&t.o, &t.x, &alpha), Err(Error::InvalidSubset(_))));
        assert!(matches!(t.bf.index_of(&alpha), Err(Error::InvalidSubset(_))));
    }

    #[test]
    fn transition_matrices_invert() {
        for (n, d) in [(5, 2), (7, 3), (9, 4)] {
            let t = inst(n, d);
            assert_eq!(t.bf.transition_violation().unwrap(), None);
        }
        let t = inst(5, 2);
        let z: Vec<Vec<i64>> = (0..4)
            .map(|a| (0..4).map(|b| t.bf.zeta.get(a, b).to_i64().unwrap()).collect())
            .collect();
        assert_eq!(z, vec![vec![1, 1, 1, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 1], vec![0, 0, 0, 1]]);
    }

    #[test]
    fn projection_of_vee_is_nuc() {
        for (n, d) in [(5, 2), (7, 3)] {
            let t = inst(n, d);
            for alpha in &t.bf.order {
                project_vee(&t.dd, &t.bf, alpha).unwrap();
            }
        }
    }

    #[test]
    fn a_on_vee_examples() {
        let t = inst(5, 2);
        let one = apply_a_vee(&t.a, &t.bf, &sub(&t, "[]")).unwrap();
        assert!(one.iter().all(|e| *e == Rational::from(6usize)));
        // A·x̂ = −2x̂ + {1}^∨ + {2}^∨
        let lhs = apply_a_vee(&t.a, &t.bf, &sub(&t, "[1,2]")).unwrap();
        let v = |s: &str| t.bf.vee(&sub(&t, s)).unwrap().clone();
        let (x, v1, v2) = (v("[1,2]"), v("[1]"), v("[2]"));
        let expected: Vector = (0..10).map(|k| &(&v1[k] + &v2[k]) - &(&x[k] * &Rational::from_int(2))).collect();
        assert_eq!(lhs, expected);
        let t = inst(7, 3);
        apply_a_vee(&t.a, &t.bf, &sub(&t, "[1,2]")).unwrap();
    }

    #[test]
    fn a_on_nuc_examples() {
        let t = inst(5, 2);
        let lhs = apply_a_nuc(&t.a, &t.bf, &sub(&t, "[]")).unwrap();
        let v = |s: &str| t.bf.nuc(&sub(&t, s)).unwrap().clone();
        let (e, v1, v2) = (v("[]"), v("[1]"), v("[2]"));
        let two = Rational::from_int(2);
        let expected: Vector = (0..10).map(|k| &two * &(&(&e[k] + &v1[k]) + &v2[k])).collect();
        assert_eq!(lhs, expected);
        let lhs = apply_a_nuc(&t.a, &t.bf, &sub(&t, "[1,2]")).unwrap();
        let expected: Vector = (0..10).map(|k| &v1[k] + &v2[k]).collect();
        assert_eq!(lhs, expected);
        let t = inst(7, 3);
        apply_a_nuc(&t.a, &t.bf, &sub(&t, "[1]")).unwrap();
    }

    #[test]
    fn astar_examples() {
        let t = inst(5, 2);
        let lhs = apply_astar_nuc(&t.dd, &t.bf, &sub(&t, "[1]")).unwrap();
        let v = t.bf.nuc(&sub(&t, "[1]")).unwrap();
        assert!(lhs.iter().zip(v).all(|(l, e)| *l == e * &Rational::new(2, 3)));
        let lhs = apply_astar_nuc(&t.dd, &t.bf, &sub(&t, "[]")).unwrap();
        let v = t.bf.nuc(&sub(&t, "[]")).unwrap();
        assert!(lhs.iter().zip(v).all(|(l, e)| *l == e * &Rational::new(-8, 3)));

        let lhs = apply_astar_vee(&t.dd, &t.bf, &sub(&t, "[]")).unwrap();
        let w = |s: &str| t.bf.vee(&sub(&t, s)).unwrap().clone();
        let (one, v1, v2) = (w("[]"), w("[1]"), w("[2]"));
        let expected: Vector = (0..10)
            .map(|k| &(&one[k] * &Rational::new(-8, 3)) + &(&(&v1[k] + &v2[k]) * &Rational::new(10, 3)))
            .collect();
        assert_eq!(lhs, expected);
        let t = inst(7, 3);
        apply_astar_vee(&t.dd, &t.bf, &sub(&t, "[1,2]")).unwrap();
    }

    #[test]
    fn every_action_identity_holds() {
        for (n, d) in [(5, 2), (7, 3), (9, 4), (8, 2)] {
            let t = inst(n, d);
            for alpha in &t.bf.order {
                apply_a_vee(&t.a, &t.bf, alpha).unwrap();
                apply_a_nuc(&t.a, &t.bf, alpha).unwrap();
                apply_astar_nuc(&t.dd, &t.bf, alpha).unwrap();
                apply_astar_vee(&t.dd, &t.bf, alpha).unwrap();
            }
        }
    }

    #[test]
    fn wrong_coefficients_are_detected() {
        let t = inst(5, 2);
        let mut bad = t.bf.clone();
        bad.params = GroundParams::new(6, 2).unwrap();
        assert!(matches!(
            apply_a_nuc(&t.a, &bad, &sub(&t, "[]")),
            Err(Error::Verification(_))
        ));
        let mut dd = t.dd.clone();
        dd.theta_star[1] = Rational::one();
        assert!(apply_astar_nuc(&dd, &t.bf, &sub(&t, "[1]")).is_err());
    }

    #[test]
    fn memberships_and_bases() {
        for (n, d, dims) in [(5, 2, vec![1, 2, 1]), (7, 3, vec![1, 3, 3, 1]), (9, 4, vec![1, 4, 6, 4, 1])] {
            let t = inst(n, d);
            let p = t.o.params();
            let nd = nucleus(&p, &t.sd, &t.dd).unwrap();
            for alpha in &t.bf.order {
                assert_eq!(membership_violation(&t.sd, &t.dd, &nd, &t.bf, alpha).unwrap(), None);
            }
            let verdict = verify_bases(&nd, &t.bf).unwrap();
            assert!(verdict.all_hold(), "J({n},{d})");
            assert_eq!(verdict.dims, dims);
        }
    }

    #[test]
    fn basis_check_rejects_a_wrong_family() {
        let t = inst(5, 2);
        let p = t.o.params();
        let nd = nucleus(&p, &t.sd, &t.dd).unwrap();
        let mut bf = t.bf.clone();
        bf.vee_vectors.swap(1, 3);
        let verdict = verify_bases(&nd, &bf).unwrap();
        assert!(verdict.vee_spans_nucleus);
        assert!(!verdict.all_hold());
    }
}
