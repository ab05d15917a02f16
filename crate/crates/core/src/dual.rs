//! Dual idempotents `E*_i`, dual adjacency matrix `A*` and dual eigenvalues
//! `θ*_i` with respect to a base vertex.

use crate::bose_mesner::SpectralData;
use crate::combinatorics::{distance, GroundParams, Vertex, VertexOrder};
use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::rational::Rational;

#[derive(Debug, Clone)]
pub struct DualData {
    pub base: Vertex,
    pub base_index: usize,
    /// `E*_0..E*_D`
    pub dual_idempotents: Vec<ExactMatrix>,
    pub dual_adjacency: ExactMatrix,
    /// `θ*_0..θ*_D` from the closed form.
    pub theta_star: Vec<Rational>,
    /// Positions of `Γ_i(x)` in the vertex order, `i = 0..D`.
    pub layers: Vec<Vec<usize>>,
}

/// Positions of the subconstituents `Γ_0(x), …, Γ_D(x)`.
pub fn subconstituent_layers(p: &GroundParams, order: &VertexOrder, x: &Vertex) -> Vec<Vec<usize>> {
    let mut layers = vec![Vec::new(); p.d() + 1];
    for (idx, y) in order.iter().enumerate() {
        layers[distance(x, y)].push(idx);
    }
    layers
}

pub fn dual_idempotents(p: &GroundParams, order: &VertexOrder, x: &Vertex) -> Vec<ExactMatrix> {
    (0..=p.d())
        .map(|i| {
            ExactMatrix::diagonal(
                order
                    .iter()
                    .map(|y| if distance(x, y) == i { Rational::one() } else { Rational::zero() })
                    .collect(),
            )
        })
        .collect()
}

/// `(A*)_{yy} = |X| (E_1)_{xy}`.
pub fn dual_adjacency(p: &GroundParams, order: &VertexOrder, x: &Vertex, sd: &SpectralData) -> Result<ExactMatrix> {
    if p.d() == 0 {
        return Err(Error::InvalidParams("A* needs E_1, which requires D ≥ 1".into()));
    }
    let xi = order
        .position(x)
        .ok_or_else(|| Error::InvalidVertex(format!("{x} is not a vertex of {p}")))?;
    let size = Rational::from(order.len());
    let e1 = &sd.idempotents[1];
    Ok(ExactMatrix::diagonal(
        e1.row(xi).iter().map(|v| &size * v).collect(),
    ))
}

/// `θ*_i = N − 1 − iN(N−1)/(D(N−D))`; `[0]` when `D = 0`.
pub fn dual_eigenvalues(p: &GroundParams) -> Vec<Rational> {
    let (n, d) = (p.n() as i64, p.d() as i64);
    if d == 0 {
        return vec![Rational::zero()];
    }
    let step = Rational::new(n * (n - 1), d * (n - d));
    (0..=d)
        .map(|i| Rational::from_int(n - 1) - Rational::from_int(i) * &step)
        .collect()
}

impl DualData {
    pub fn build(p: &GroundParams, order: &VertexOrder, x: &Vertex, sd: &SpectralData) -> Result<Self> {
        let base_index = order
            .position(x)
            .ok_or_else(|| Error::InvalidVertex(format!("{x} is not a vertex of {p}")))?;
        let dual_adjacency = if p.d() == 0 {
            ExactMatrix::zeros(1, 1)
        } else {
            dual_adjacency(p, order, x, sd)?
        };
        Ok(DualData {
            base: x.clone(),
            base_index,
            dual_idempotents: dual_idempotents(p, order, x),
            dual_adjacency,
            theta_star: dual_eigenvalues(p),
            layers: subconstituent_layers(p, order, x),
        })
    }

    pub fn diameter(&self) -> usize {
        self.dual_idempotents.len() - 1
    }

    /// Sum of the column spaces `E*_0 V + … + E*_i V` as coordinate indices.
    pub fn coordinates_up_to(&self, i: usize) -> Vec<usize> {
        let mut c: Vec<usize> = self.layers[..=i].iter().flatten().copied().collect();
        c.sort_unstable();
        c
    }
}

/// Checks `ΣE*_i = I`, `E*_iE*_j = δ_ij E*_i` and `trace(E*_i) = k_i`.
pub fn verify_dual_idempotents(dd: &DualData, k_i: &[u64]) -> Result<()> {
    let n = dd.dual_adjacency.rows();
    let fail = |m: String| Err(Error::Verification(m));
    let mut sum = ExactMatrix::zeros(n, n);
    for (i, ei) in dd.dual_idempotents.iter().enumerate() {
        if !ei.is_diagonal() {
            return fail(format!("E*_{i} is not diagonal"));
        }
        if ei.trace() != Rational::from(k_i[i] as usize) {
            return fail(format!("trace(E*_{i}) = {} ≠ k_{i} = {}", ei.trace(), k_i[i]));
        }
        sum = sum.add(ei)?;
        for (j, ej) in dd.dual_idempotents.iter().enumerate() {
            let prod = ei.mul(ej)?;
            let ok = if i == j { prod == *ei } else { prod.is_zero() };
            if !ok {
                return fail(format!("E*_{i}·E*_{j} ≠ δ_{{{i}{j}}}·E*_{i}"));
            }
        }
    }
    if sum != ExactMatrix::identity(n) {
        return fail("Σ E*_i ≠ I".into());
    }
    Ok(())
}

/// `A* = Σ θ*_i E*_i` entrywise with pairwise distinct `θ*_i`.
pub fn verify_dual_spectral(dd: &DualData) -> bool {
    dual_spectral_violation(dd).is_none()
}

pub fn dual_spectral_violation(dd: &DualData) -> Option<String> {
    let n = dd.dual_adjacency.rows();
    let mut expected = ExactMatrix::zeros(n, n);
    for (t, e) in dd.theta_star.iter().zip(&dd.dual_idempotents) {
        expected = expected.add(&e.scale(t)).ok()?;
    }
    if expected != dd.dual_adjacency {
        let y = (0..n).find(|&y| expected.get(y, y) != dd.dual_adjacency.get(y, y));
        return Some(match y {
            Some(y) => format!(
                "(A*)_{{{y},{y}}} = {}, Σθ*_iE*_i gives {}",
                dd.dual_adjacency.get(y, y),
                expected.get(y, y)
            ),
            None => "A* has off-diagonal entries".into(),
        });
    }
    for i in 0..dd.theta_star.len() {
        for j in 0..i {
            if dd.theta_star[i] == dd.theta_star[j] {
                return Some(format!("θ*_{j} = θ*_{i} = {}", dd.theta_star[i]));
            }
        }
    }
    for (i, e) in dd.dual_idempotents.iter().enumerate() {
        match dd.dual_adjacency.mul(e) {
            Ok(prod) if prod == e.scale(&dd.theta_star[i]) => {}
            _ => return Some(format!("A*·E*_{i} ≠ θ*_{i}·E*_{i}")),
        }
    }
    None
}
