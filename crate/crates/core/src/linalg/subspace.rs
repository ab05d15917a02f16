use rayon::prelude::*;

use super::matrix::{linear_combination, ExactMatrix, Vector};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Canonical reduced row echelon form of a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    /// Nonzero rows only, so `matrix.rows() == rank`.
    pub matrix: ExactMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

pub fn rref(m: &ExactMatrix) -> Rref {
    let cols = m.cols();
    let (rows, pivots) = rref_rows(m.to_rows(), cols);
    let rank = pivots.len();
    Rref {
        matrix: ExactMatrix::from_rows(rows, cols).expect("row lengths preserved"),
        pivots,
        rank,
    }
}

/// Scales a row to coprime integers (content 1), preserving its span.
fn make_primitive(row: &mut [Rational]) {
    let mut l = Rational::one();
    for v in row.iter() {
        if !v.is_integer() {
            l = Rational::int_lcm(&l, &v.denom_rational());
        }
    }
    if !l.is_one() {
        for v in row.iter_mut() {
            if !v.is_zero() {
                *v = &*v * &l;
            }
        }
    }
    divide_content(row);
}

/// Divides an integer row by the gcd of its entries.
fn divide_content(row: &mut [Rational]) {
    let mut g = Rational::zero();
    for v in row.iter() {
        if !v.is_zero() {
            g = Rational::int_gcd(&g, v);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() {
        return;
    }
    let inv = g.recip();
    for v in row.iter_mut() {
        if !v.is_zero() {
            *v = &*v * &inv;
        }
    }
}

/// Inputs at least this large go through the prime field first.
const MODULAR_MIN_ENTRIES: usize = 1 << 10;

/// Nonzero rows of the canonical RREF and the pivot columns. Large inputs
/// try the certified prime-field route and fall back to exact elimination.
pub(crate) fn rref_rows(rows: Vec<Vector>, cols: usize) -> (Vec<Vector>, Vec<usize>) {
    if rows.len() * cols >= MODULAR_MIN_ENTRIES {
        if let Some(out) = super::modular::rref_rows(&rows, cols) {
            return out;
        }
    }
    rref_rows_fraction_free(rows, cols)
}

/// Gauss–Jordan elimination. Returns the nonzero rows of the canonical RREF
/// and the pivot columns. The pivot for each column is the first remaining
/// row with a nonzero entry there.
///
/// Rows are kept as primitive integer vectors while eliminating
/// (`R ← (p/g)·R − (f/g)·P`, then divide out the content) and divided by
/// their pivots only at the end; every intermediate entry stays an integer.
pub(crate) fn rref_rows_fraction_free(mut rows: Vec<Vector>, cols: usize) -> (Vec<Vector>, Vec<usize>) {
    rows.retain(|r| r.iter().any(|v| !v.is_zero()));
    rows.par_iter_mut().with_min_len(16).for_each(|r| make_primitive(r));
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, found);

        let pivot_row = std::mem::take(&mut rows[rank]);
        let p = pivot_row[col].clone();
        let support: Vec<usize> = (col + 1..cols).filter(|&j| !pivot_row[j].is_zero()).collect();

        let eliminate = |row: &mut Vector| {
            if row.is_empty() || row[col].is_zero() {
                return;
            }
            let f = std::mem::take(&mut row[col]);
            let g = Rational::int_gcd(&p, &f);
            let a = &p / &g;
            let neg_b = -(&f / &g);
            if !a.is_one() {
                for v in row.iter_mut() {
                    if !v.is_zero() {
                        *v = &*v * &a;
                    }
                }
            }
            for &j in &support {
                row[j] = row[j].add_mul(&neg_b, &pivot_row[j]);
            }
            divide_content(row);
        };
        if rows.len() * cols >= 1 << 14 {
            rows.par_iter_mut().with_min_len(8).for_each(eliminate);
        } else {
            rows.iter_mut().for_each(eliminate);
        }
        rows[rank] = pivot_row;
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    rows.par_iter_mut().zip(pivots.par_iter()).for_each(|(row, &pc)| {
        let inv = row[pc].recip();
        if !inv.is_one() {
            for v in row.iter_mut().skip(pc) {
                if !v.is_zero() {
                    *v = &*v * &inv;
                }
            }
        }
    });
    (rows, pivots)
}

/// Basis of `{v : R v = 0}` read off an RREF, one vector per free column.
/// Not canonicalized; each vector is stored sparsely as `(index, value)`.
fn kernel_from_rref(rows: &[Vector], pivots: &[usize], cols: usize) -> Vec<Vec<(usize, Rational)>> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![(f, Rational::one())];
            for (row, &p) in rows.iter().zip(pivots) {
                if !row[f].is_zero() {
                    v.push((p, -&row[f]));
                }
            }
            v
        })
        .collect()
}

fn densify(sparse: &[(usize, Rational)], len: usize) -> Vector {
    let mut v = vec![Rational::zero(); len];
    for (i, x) in sparse {
        v[*i] = x.clone();
    }
    v
}

/// `{v : m·v = 0}` as a canonical subspace of ℚ^cols.
pub fn kernel(m: &ExactMatrix) -> Subspace {
    let cols = m.cols();
    let (rows, pivots) = rref_rows(m.to_rows(), cols);
    let basis: Vec<Vector> = kernel_from_rref(&rows, &pivots, cols)
        .iter()
        .map(|s| densify(s, cols))
        .collect();
    Subspace::span(cols, basis).expect("kernel vectors have ambient length")
}

/// A subspace of ℚ^n held as the canonical RREF of a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: ExactMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: ExactMatrix::zeros(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: ExactMatrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the given vectors.
    pub fn span(ambient: usize, vectors: Vec<Vector>) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {ambient}",
                v.len()
            )));
        }
        let (rows, pivots) = rref_rows(vectors, ambient);
        Ok(Subspace {
            ambient,
            basis: ExactMatrix::from_rows(rows, ambient)?,
            pivots,
        })
    }

    pub fn row_space(m: &ExactMatrix) -> Self {
        let r = rref(m);
        Subspace {
            ambient: m.cols(),
            basis: r.matrix,
            pivots: r.pivots,
        }
    }

    pub fn column_space(m: &ExactMatrix) -> Self {
        Self::row_space(&m.transpose())
    }

    /// `span{e_i : i ∈ coords}`; already canonical, no elimination needed.
    pub fn coordinate(ambient: usize, coords: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut coords: Vec<usize> = coords.into_iter().collect();
        coords.sort_unstable();
        coords.dedup();
        if coords.last().is_some_and(|&c| c >= ambient) {
            return Err(Error::DimensionMismatch(format!(
                "coordinate outside ambient dimension {ambient}"
            )));
        }
        let mut basis = ExactMatrix::zeros(coords.len(), ambient);
        for (r, &c) in coords.iter().enumerate() {
            basis.set(r, c, Rational::one());
        }
        Ok(Subspace {
            ambient,
            basis,
            pivots: coords,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &ExactMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.to_rows()
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of ℚ^{} and ℚ^{}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    /// Membership: the residual of `v` after eliminating against the basis
    /// is zero. Panics if `v` has the wrong length.
    pub fn contains(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length vs ambient dimension");
        let mut residual = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            let c = residual[p].clone();
            if c.is_zero() {
                continue;
            }
            let neg = -c;
            for (r, b) in residual.iter_mut().zip(self.basis.row(i)) {
                if !b.is_zero() {
                    *r = r.add_mul(&neg, b);
                }
            }
        }
        residual.iter().all(Rational::is_zero)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient
            && self.dim() <= other.dim()
            && (0..self.dim()).all(|i| other.contains(self.basis.row(i)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if other.dim() == 0 || self == other {
            return Ok(self.clone());
        }
        if self.dim() == 0 {
            return Ok(other.clone());
        }
        let mut rows = self.basis.to_rows();
        rows.extend(other.basis.to_rows());
        Subspace::span(self.ambient, rows)
    }

    /// The orthogonal complement under the standard bilinear form, i.e. the
    /// kernel of the basis matrix, in sparse non-canonical form.
    fn annihilator_sparse(&self) -> Vec<Vec<(usize, Rational)>> {
        let rows = self.basis.to_rows();
        kernel_from_rref(&rows, &self.pivots, self.ambient)
    }

    pub fn annihilator(&self) -> Subspace {
        let vecs = self
            .annihilator_sparse()
            .iter()
            .map(|s| densify(s, self.ambient))
            .collect();
        Subspace::span(self.ambient, vecs).expect("ambient length")
    }

    /// `u ∩ w` as `{c·U : (c·U)·k = 0 for all k ⊥ w}`: the coefficient
    /// vectors `c` form the left kernel of `U·Kᵀ`. The roles of `u` and `w`
    /// are chosen to make `U·Kᵀ` cheap.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.ambient));
        }
        if self == other {
            return Ok(self.clone());
        }
        let ann_self = self.annihilator_sparse();
        let ann_other = other.annihilator_sparse();
        let nnz = |a: &[Vec<(usize, Rational)>]| a.iter().map(Vec::len).sum::<usize>();
        let (u, ann) = if self.dim() * nnz(&ann_other) <= other.dim() * nnz(&ann_self) {
            (self, ann_other)
        } else {
            (other, ann_self)
        };
        if ann.is_empty() {
            // w is the whole space
            return Ok(u.clone());
        }
        // Mᵀ[b][a] = Σ_y U[a][y] K[b][y]
        let mt_rows: Vec<Vector> = ann
            .par_iter()
            .map(|k| {
                (0..u.dim())
                    .map(|a| {
                        let row = u.basis.row(a);
                        let mut acc = Rational::zero();
                        for (y, kv) in k {
                            if !row[*y].is_zero() {
                                acc = acc.add_mul(&row[*y], kv);
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let coeffs = kernel(&ExactMatrix::from_rows(mt_rows, u.dim())?);
        let vecs: Vec<Vector> = (0..coeffs.dim())
            .map(|c| {
                let row = coeffs.basis.row(c);
                linear_combination(
                    row.iter()
                        .enumerate()
                        .map(|(a, coef)| (coef.clone(), u.basis.row(a))),
                    self.ambient,
                )
            })
            .collect();
        Subspace::span(self.ambient, vecs)
    }

    /// Orthogonal projector onto the subspace under the standard inner
    /// product, `Yᵀ(YYᵀ)⁻¹Y` for a basis `Y`. Whichever of the subspace and
    /// its complement has the smaller dimension gets the Gram inverse.
    pub fn orthogonal_projector(&self) -> Result<ExactMatrix> {
        let n = self.ambient;
        let m = self.dim();
        if m == 0 {
            return Ok(ExactMatrix::zeros(n, n));
        }
        if m == n {
            return Ok(ExactMatrix::identity(n));
        }
        if m <= n - m {
            gram_projector(&self.basis)
        } else {
            let comp: Vec<Vector> = self
                .annihilator_sparse()
                .iter()
                .map(|s| densify(s, n))
                .collect();
            let comp = ExactMatrix::from_rows(comp, n)?;
            ExactMatrix::identity(n).sub(&gram_projector(&comp)?)
        }
    }

    /// Image of the subspace under `m` (as `m·v` for each basis vector).
    pub fn image(&self, m: &ExactMatrix) -> Result<Subspace> {
        if m.cols() != self.ambient {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to a subspace of ℚ^{}",
                m.rows(),
                m.cols(),
                self.ambient
            )));
        }
        let vecs = (0..self.dim())
            .map(|i| m.mul_vec(self.basis.row(i)))
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(m.rows(), vecs)
    }

    /// Whether `m·u ⊆ u`.
    pub fn is_invariant_under(&self, m: &ExactMatrix) -> Result<bool> {
        for i in 0..self.dim() {
            if !self.contains(&m.mul_vec(self.basis.row(i))?) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn gram_projector(y: &ExactMatrix) -> Result<ExactMatrix> {
    let yt = y.transpose();
    let gram = y.mul(&yt)?;
    yt.mul(&inverse(&gram)?.mul(y)?)
}

/// Inverse of a square matrix via the RREF of `[M | I]`.
pub fn inverse(m: &ExactMatrix) -> Result<ExactMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("inverse of a {}x{} matrix", m.rows(), m.cols())));
    }
    let n = m.rows();
    let rows: Vec<Vector> = (0..n)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let (rows, pivots) = rref_rows(rows, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Verification("matrix is singular".into()));
    }
    let inv: Vec<Vector> = rows.into_iter().map(|r| r[n..].to_vec()).collect();
    ExactMatrix::from_rows(inv, n)
}

/// `Σ parts` as one subspace.
pub fn sum_all(ambient: usize, parts: &[Subspace]) -> Result<Subspace> {
    let mut rows = Vec::new();
    for p in parts {
        if p.ambient_dim() != ambient {
            return Err(Error::DimensionMismatch(format!(
                "part in ℚ^{} summed in ℚ^{ambient}",
                p.ambient_dim()
            )));
        }
        rows.extend(p.basis().to_rows());
    }
    Subspace::span(ambient, rows)
}

/// Directness by dimension additivity: `dim Σ parts = Σ dim parts`.
pub fn is_direct_sum(parts: &[Subspace]) -> Result<bool> {
    let Some(first) = parts.first() else {
        return Ok(true);
    };
    let total = sum_all(first.ambient_dim(), parts)?;
    Ok(total.dim() == parts.iter().map(Subspace::dim).sum::<usize>())
}
