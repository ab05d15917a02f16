//! Distance matrices, intersection numbers, eigenvalues, primitive
//! idempotents and Krein parameters of J(N,D).

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{binomial_u64, distance, GroundParams, VertexOrder};
use crate::error::{Error, Result};
use crate::linalg::{kernel, ExactMatrix, Subspace};
use crate::rational::Rational;

pub fn adjacency_matrix(p: &GroundParams, order: &VertexOrder) -> ExactMatrix {
    distance_class_matrix(p, order, 1)
}

fn distance_class_matrix(p: &GroundParams, order: &VertexOrder, i: usize) -> ExactMatrix {
    debug_assert_eq!(order.params(), *p);
    let vs = order.vertices();
    ExactMatrix::from_fn(vs.len(), vs.len(), |a, b| {
        if distance(&vs[a], &vs[b]) == i {
            Rational::one()
        } else {
            Rational::zero()
        }
    })
}

/// `A_0, …, A_D` with `(A_i)_{xy} = 1` iff `∂(x,y) = i`.
pub fn distance_matrices(p: &GroundParams, order: &VertexOrder) -> Vec<ExactMatrix> {
    (0..=p.d()).map(|i| distance_class_matrix(p, order, i)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionArray {
    /// `c_1..c_D`
    pub c: Vec<u64>,
    /// `a_0..a_D`
    pub a: Vec<u64>,
    /// `b_0..b_{D-1}`
    pub b: Vec<u64>,
    /// `k_0..k_D`
    pub k_i: Vec<u64>,
    pub valency: u64,
}

impl IntersectionArray {
    /// `c_i` with the convention `c_0 = 0`.
    pub fn c_at(&self, i: usize) -> u64 {
        if i == 0 {
            0
        } else {
            self.c[i - 1]
        }
    }

    /// `b_i` with the convention `b_D = 0`.
    pub fn b_at(&self, i: usize) -> u64 {
        self.b.get(i).copied().unwrap_or(0)
    }
}

pub fn intersection_array(p: &GroundParams) -> IntersectionArray {
    let (n, d) = (p.n() as u64, p.d() as u64);
    let c: Vec<u64> = (1..=d).map(|i| i * i).collect();
    let b: Vec<u64> = (0..d).map(|i| (d - i) * (n - d - i)).collect();
    let valency = d * (n - d);
    let k_i = (0..=d)
        .map(|i| binomial_u64(d, i as i64) * binomial_u64(n - d, i as i64))
        .collect();
    let mut ia = IntersectionArray {
        c,
        a: Vec::new(),
        b,
        k_i,
        valency,
    };
    ia.a = (0..=p.d())
        .map(|i| valency - ia.c_at(i) - ia.b_at(i))
        .collect();
    ia
}

/// `θ_i = (D−i)(N−D−i) − i`.
pub fn eigenvalues(p: &GroundParams) -> Vec<i64> {
    let (n, d) = (p.n() as i64, p.d() as i64);
    (0..=d).map(|i| (d - i) * (n - d - i) - i).collect()
}

/// Eigenvalues and primitive idempotents in the ordering `θ_0 > … > θ_D`.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub theta: Vec<i64>,
    pub idempotents: Vec<ExactMatrix>,
    /// `m_i = trace(E_i)`
    pub mults: Vec<u64>,
}

impl SpectralData {
    pub fn diameter(&self) -> usize {
        self.theta.len() - 1
    }
}

/// Roots of `τ_i(λ) = (λ−θ_0)⋯(λ−θ_{i−1})`.
fn tau_roots(theta: &[i64], i: usize) -> &[i64] {
    &theta[..i]
}

/// Roots of `η_i(λ) = (λ−θ_D)(λ−θ_{D−1})⋯(λ−θ_{D−i+1})`.
fn eta_roots(theta: &[i64], i: usize) -> Vec<i64> {
    let d = theta.len() - 1;
    (0..i).map(|t| theta[d - t]).collect()
}

fn poly_at_scalar(roots: &[i64], lambda: i64) -> Rational {
    roots
        .iter()
        .fold(Rational::one(), |acc, &r| acc * Rational::from_int(lambda - r))
}

/// `Π (A − θ I)` over the given roots, applied right to left; the shifted
/// factor is always on the left so its sparsity is used.
fn poly_at_matrix(roots: &[i64], a: &ExactMatrix) -> Result<ExactMatrix> {
    let mut acc: Option<ExactMatrix> = None;
    for &r in roots {
        let shifted = a.add_scalar_identity(&Rational::from_int(-r))?;
        acc = Some(match acc {
            None => shifted,
            Some(m) => shifted.mul(&m)?,
        });
    }
    Ok(acc.unwrap_or_else(|| ExactMatrix::identity(a.rows())))
}

/// `E_r = τ_r(A) η_{D−r}(A) / (τ_r(θ_r) η_{D−r}(θ_r))`.
pub fn idempotent_by_formula(theta: &[i64], a: &ExactMatrix, r: usize) -> Result<ExactMatrix> {
    let d = theta.len() - 1;
    if r > d {
        return Err(Error::Index(format!("idempotent E_{r} with D = {d}")));
    }
    let tau = tau_roots(theta, r);
    let eta = eta_roots(theta, d - r);
    let denom = poly_at_scalar(tau, theta[r]) * poly_at_scalar(&eta, theta[r]);
    if denom.is_zero() {
        return Err(Error::Internal(format!("eigenvalues not distinct at θ_{r}")));
    }
    let mut roots = tau.to_vec();
    roots.extend(eta);
    Ok(poly_at_matrix(&roots, a)?.scale(&denom.recip()))
}

/// Builds `E_0..E_D` from the polynomial formula and reads off the
/// multiplicities as traces.
pub fn primitive_idempotents(p: &GroundParams, a: &ExactMatrix) -> Result<SpectralData> {
    let theta = eigenvalues(p);
    let idempotents = (0..theta.len())
        .map(|r| idempotent_by_formula(&theta, a, r))
        .collect::<Result<Vec<_>>>()?;
    let mults = idempotents
        .iter()
        .enumerate()
        .map(|(r, e)| {
            e.trace()
                .to_i64()
                .filter(|&m| m > 0)
                .map(|m| m as u64)
                .ok_or_else(|| {
                    Error::Verification(format!("trace(E_{r}) = {} is not a positive integer", e.trace()))
                })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralData {
        theta,
        idempotents,
        mults,
    })
}

/// `ker(A − θ I)`.
pub fn eigenspace(a: &ExactMatrix, theta: i64) -> Result<Subspace> {
    Ok(kernel(&a.add_scalar_identity(&Rational::from_int(-theta))?))
}

/// Checks `ΣE_i = I`, `E_iE_j = δ_ij E_i`, `A E_i = θ_i E_i`, `A = Σθ_iE_i`,
/// `E_0 = J/|X|`, symmetry, and that `θ` is strictly decreasing from `k`.
pub fn verify_spectral(sd: &SpectralData, a: &ExactMatrix, valency: u64) -> Result<()> {
    let n = a.rows();
    let fail = |m: String| Err(Error::Verification(m));
    if sd.theta.first() != Some(&(valency as i64)) {
        return fail(format!("θ_0 = {:?}, expected k = {valency}", sd.theta.first()));
    }
    if let Some(w) = sd.theta.windows(2).find(|w| w[0] <= w[1]) {
        return fail(format!("eigenvalues not strictly decreasing at {w:?}"));
    }
    let mut sum = ExactMatrix::zeros(n, n);
    let mut spectral = ExactMatrix::zeros(n, n);
    for (i, e) in sd.idempotents.iter().enumerate() {
        if !e.is_symmetric() {
            return fail(format!("E_{i} is not symmetric"));
        }
        sum = sum.add(e)?;
        spectral = spectral.add(&e.scale(&Rational::from_int(sd.theta[i])))?;
        let ae = a.mul(e)?;
        if ae != e.scale(&Rational::from_int(sd.theta[i])) {
            return fail(format!("A·E_{i} ≠ θ_{i}·E_{i}"));
        }
    }
    if sum != ExactMatrix::identity(n) {
        return fail("Σ E_i ≠ I".into());
    }
    if spectral != *a {
        return fail("A ≠ Σ θ_i E_i".into());
    }
    let j_over_x = ExactMatrix::ones(n, n).scale(&Rational::new(1, n as i64));
    if sd.idempotents[0] != j_over_x {
        return fail("E_0 ≠ J/|X|".into());
    }
    for i in 0..sd.idempotents.len() {
        for j in i..sd.idempotents.len() {
            let prod = sd.idempotents[i].mul(&sd.idempotents[j])?;
            let ok = if i == j {
                prod == sd.idempotents[i]
            } else {
                prod.is_zero()
            };
            if !ok {
                return fail(format!("E_{i}·E_{j} ≠ δ_{{{i}{j}}}·E_{i}"));
            }
        }
    }
    if sd.mults.iter().sum::<u64>() != n as u64 {
        return fail(format!("Σ m_i = {} ≠ |X| = {n}", sd.mults.iter().sum::<u64>()));
    }
    Ok(())
}

/// Orthogonal projector onto `ker(A − θ_r I)`, built from an RREF basis of
/// the kernel. This route shares nothing with the polynomial formula.
pub fn eigenprojector(a: &ExactMatrix, theta: i64) -> Result<ExactMatrix> {
    eigenspace(a, theta)?.orthogonal_projector()
}

/// `q^h_{i,j}` from `E_i ∘ E_j = |X|^{-1} Σ_h q^h_{i,j} E_h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KreinTable {
    size: usize,
    q: Vec<Rational>,
}

impl KreinTable {
    /// `q^h_{i,j}`.
    pub fn get(&self, h: usize, i: usize, j: usize) -> &Rational {
        &self.q[(h * self.size + i) * self.size + j]
    }

    pub fn size(&self) -> usize {
        self.size
    }
}

/// Coefficients are extracted with trace inner products,
/// `q^h_{i,j} = |X| · tr((E_i∘E_j) E_h) / m_h`, and the expansion is then
/// verified entrywise.
pub fn krein_parameters(sd: &SpectralData) -> Result<KreinTable> {
    let size = sd.idempotents.len();
    let nv = sd.idempotents[0].rows();
    let x_size = Rational::from(nv);
    let pairs: Vec<(usize, usize)> = (0..size).flat_map(|i| (i..size).map(move |j| (i, j))).collect();
    let rows = pairs
        .par_iter()
        .map(|&(i, j)| -> Result<Vec<Rational>> {
            let had = sd.idempotents[i].hadamard(&sd.idempotents[j])?;
            let coeffs: Vec<Rational> = (0..size)
                .map(|h| {
                    // tr(M E_h) = Σ M_yz (E_h)_zy = Σ M_yz (E_h)_yz by symmetry
                    let eh = &sd.idempotents[h];
                    let mut tr = Rational::zero();
                    for y in 0..nv {
                        for (m, e) in had.row(y).iter().zip(eh.row(y)) {
                            if !m.is_zero() && !e.is_zero() {
                                tr = tr.add_mul(m, e);
                            }
                        }
                    }
                    &x_size * &tr / Rational::from(sd.mults[h] as usize)
                })
                .collect();
            let mut expansion = ExactMatrix::zeros(nv, nv);
            for (h, c) in coeffs.iter().enumerate() {
                if !c.is_zero() {
                    expansion = expansion.add(&sd.idempotents[h].scale(&(c / &x_size)))?;
                }
            }
            if expansion != had {
                return Err(Error::Internal(format!(
                    "E_{i}∘E_{j} is not in the span of the primitive idempotents"
                )));
            }
            Ok(coeffs)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut q = vec![Rational::zero(); size * size * size];
    for (&(i, j), coeffs) in pairs.iter().zip(rows) {
        for (h, c) in coeffs.into_iter().enumerate() {
            q[(h * size + i) * size + j] = c.clone();
            q[(h * size + j) * size + i] = c;
        }
    }
    Ok(KreinTable { size, q })
}

/// Both triangle conditions: `q^h_{i,j} = 0` when one index exceeds the sum
/// of the other two, `q^h_{i,j} ≠ 0` when one index equals that sum.
pub fn verify_q_polynomial(kt: &KreinTable) -> bool {
    q_polynomial_violation(kt).is_none()
}

/// First `(h,i,j)` breaking a triangle condition.
pub fn q_polynomial_violation(kt: &KreinTable) -> Option<(usize, usize, usize)> {
    let s = kt.size();
    for h in 0..s {
        for i in 0..s {
            for j in 0..s {
                let v = kt.get(h, i, j);
                let exceeds = h > i + j || i > h + j || j > h + i;
                let equals = h == i + j || i == h + j || j == h + i;
                if (exceeds && !v.is_zero()) || (equals && v.is_zero()) {
                    return Some((h, i, j));
                }
            }
        }
    }
    None
}

/// Closed-form multiplicity `C(N,i) − C(N,i−1)`, used only as a cross-check.
pub fn multiplicity_closed_form(p: &GroundParams, i: usize) -> u64 {
    let n = p.n() as u64;
    binomial_u64(n, i as i64) - binomial_u64(n, i as i64 - 1)
}

/// Row sums of each `A_i` (all rows must agree).
pub fn distance_matrix_row_sums(ais: &[ExactMatrix]) -> Result<Vec<u64>> {
    ais.iter()
        .enumerate()
        .map(|(i, m)| {
            let sums: Vec<Rational> = (0..m.rows()).map(|r| m.row(r).iter().sum()).collect();
            let first = sums[0].clone();
            if sums.iter().any(|s| *s != first) {
                return Err(Error::Verification(format!("A_{i} has unequal row sums")));
            }
            first
                .to_i64()
                .and_then(|v| v.to_u64())
                .ok_or_else(|| Error::Internal(format!("row sum of A_{i} is not a count")))
        })
        .collect()
}
