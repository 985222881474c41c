//! Subspaces of `F^n` in canonical RREF form, with enumeration and sampling
//! over finite fields.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::{Field, FiniteField};
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Retry cap for drawing a full-rank random basis.
pub const MAX_SAMPLE_RETRIES: usize = 1000;

/// A subspace of `F^ambient_dim`, stored as its RREF basis with no zero rows.
/// Two subspaces are equal as sets iff their bases are identical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace<F: Field> {
    ambient_dim: usize,
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: &F, ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::zeros(field, 0, ambient_dim), pivots: Vec::new() }
    }

    pub fn full(field: &F, ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::identity(field, ambient_dim), pivots: (0..ambient_dim).collect() }
    }

    /// Row space of `m`.
    pub fn from_matrix(m: &Matrix<F>) -> Self {
        let red = m.rref();
        let keep: Vec<usize> = (0..red.rank).collect();
        Subspace { ambient_dim: m.cols(), basis: red.reduced.select_rows(&keep), pivots: red.pivots }
    }

    pub fn from_spanning(field: &F, ambient_dim: usize, vectors: Vec<Vec<F::Elem>>) -> Self {
        Self::from_matrix(&Matrix::from_rows(field, ambient_dim, vectors))
    }

    /// Wraps a matrix already known to be in RREF with no zero rows.
    fn from_rref_unchecked(basis: Matrix<F>, pivots: Vec<usize>) -> Self {
        Subspace { ambient_dim: basis.cols(), basis, pivots }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn field(&self) -> &F {
        self.basis.field()
    }

    /// Coordinates not used as pivots; they index a basis of the quotient `F^n / self`.
    pub fn complement_coordinates(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient_dim];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient_dim).filter(|&c| !is_pivot[c]).collect()
    }

    /// Matrix of the natural projection `F^n -> F^n / self`, with the quotient
    /// coordinatized by the complement coordinates.
    pub fn quotient_projection(&self) -> Matrix<F> {
        let f = self.field().clone();
        let free = self.complement_coordinates();
        let mut proj = Matrix::zeros(&f, free.len(), self.ambient_dim);
        for (qi, &c) in free.iter().enumerate() {
            proj.set(qi, c, f.one());
            for (row, &p) in self.pivots.iter().enumerate() {
                // e_p is congruent to e_p - basis_row, which is supported off the pivots.
                let v = f.neg(self.basis.get(row, c));
                proj.set(qi, p, v);
            }
        }
        proj
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        assert_eq!(v.len(), self.ambient_dim);
        let f = self.field();
        let mut r = v.to_vec();
        for (row, &p) in self.pivots.iter().enumerate() {
            if f.is_zero(&r[p]) {
                continue;
            }
            let c = r[p].clone();
            for (j, x) in r.iter_mut().enumerate() {
                *x = f.sub(x, &f.mul(&c, self.basis.get(row, j)));
            }
        }
        r.iter().all(|x| f.is_zero(x))
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        (0..other.dim()).all(|i| self.contains(other.basis.row(i)))
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let m = Matrix::vstack(self.field(), self.ambient_dim, &[&self.basis, &other.basis]);
        Self::from_matrix(&m)
    }
}

/// Number of `k`-dimensional subspaces of `F_q^n`, saturating at `u128::MAX`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    // Row recurrence [n, k] = [n-1, k-1] + q^k [n-1, k].
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for m in 1..=n {
        for j in (1..=k.min(m)).rev() {
            let qj = (q as u128).checked_pow(j as u32).unwrap_or(u128::MAX);
            let term = qj.saturating_mul(row[j]);
            row[j] = row[j - 1].saturating_add(term);
        }
    }
    row[k]
}

/// Total number of subspaces of `F_q^n` of any dimension.
pub fn count_all_subspaces(n: usize, q: u64) -> u128 {
    (0..=n).fold(0u128, |acc, k| acc.saturating_add(gaussian_binomial(n, k, q)))
}

/// Streams every `dim`-dimensional subspace of `F_q^ambient` exactly once.
pub fn enumerate_subspaces<F: FiniteField>(
    ambient: usize,
    dim: usize,
    field: &F,
    budget: u128,
) -> Result<SubspaceIter<F>> {
    if dim > ambient {
        return Err(Error::InvalidInput(format!("subspace dimension {dim} exceeds ambient {ambient}")));
    }
    let count = gaussian_binomial(ambient, dim, field.order());
    if count > budget {
        return Err(Error::BudgetExceeded { count, budget });
    }
    Ok(SubspaceIter::new(field, ambient, dim))
}

/// Streams every subspace of `F_q^ambient`, in increasing dimension.
pub fn enumerate_all_subspaces<F: FiniteField>(
    ambient: usize,
    field: &F,
    budget: u128,
) -> Result<impl Iterator<Item = Subspace<F>>> {
    let count = count_all_subspaces(ambient, field.order());
    if count > budget {
        return Err(Error::BudgetExceeded { count, budget });
    }
    let field = field.clone();
    Ok((0..=ambient).flat_map(move |k| SubspaceIter::new(&field, ambient, k)))
}

/// Iterator over RREF matrices with a given shape: every pivot set, every
/// assignment of the free entries.
pub struct SubspaceIter<F: FiniteField> {
    field: F,
    ambient: usize,
    dim: usize,
    pivots: Option<Vec<usize>>,
    free: Vec<(usize, usize)>,
    digits: Vec<u64>,
}

impl<F: FiniteField> SubspaceIter<F> {
    fn new(field: &F, ambient: usize, dim: usize) -> Self {
        let pivots = (dim <= ambient).then(|| (0..dim).collect::<Vec<_>>());
        let mut it = SubspaceIter { field: field.clone(), ambient, dim, pivots, free: Vec::new(), digits: Vec::new() };
        it.reset_free();
        it
    }

    fn reset_free(&mut self) {
        self.free.clear();
        if let Some(piv) = &self.pivots {
            for (r, &p) in piv.iter().enumerate() {
                for c in p + 1..self.ambient {
                    if !piv.contains(&c) {
                        self.free.push((r, c));
                    }
                }
            }
        }
        self.digits = vec![0; self.free.len()];
    }

    fn advance_pivots(&mut self) {
        let Some(piv) = self.pivots.as_mut() else { return };
        let (n, k) = (self.ambient, self.dim);
        let mut i = k;
        while i > 0 {
            i -= 1;
            if piv[i] < n - k + i {
                piv[i] += 1;
                for j in i + 1..k {
                    piv[j] = piv[j - 1] + 1;
                }
                self.reset_free();
                return;
            }
        }
        self.pivots = None;
    }
}

impl<F: FiniteField> Iterator for SubspaceIter<F> {
    type Item = Subspace<F>;

    fn next(&mut self) -> Option<Subspace<F>> {
        let piv = self.pivots.clone()?;
        let f = &self.field;
        let mut m = Matrix::zeros(f, self.dim, self.ambient);
        for (r, &p) in piv.iter().enumerate() {
            m.set(r, p, f.one());
        }
        for (&(r, c), &d) in self.free.iter().zip(&self.digits) {
            m.set(r, c, f.element(d));
        }
        let out = Subspace::from_rref_unchecked(m, piv);

        // Odometer over the free entries, then the next pivot set.
        let q = f.order();
        let mut carry = true;
        for d in self.digits.iter_mut() {
            *d += 1;
            if *d < q {
                carry = false;
                break;
            }
            *d = 0;
        }
        if carry {
            self.advance_pivots();
        }
        Some(out)
    }
}

/// Draws a uniformly random `dim`-dimensional subspace using `rng`.
pub fn random_subspace_with<F: FiniteField, R: Rng + ?Sized>(
    ambient: usize,
    dim: usize,
    field: &F,
    rng: &mut R,
) -> Result<Subspace<F>> {
    if dim > ambient {
        return Err(Error::InvalidInput(format!("subspace dimension {dim} exceeds ambient {ambient}")));
    }
    if dim == ambient {
        return Ok(Subspace::full(field, ambient));
    }
    for _ in 0..MAX_SAMPLE_RETRIES {
        let m = Matrix::from_fn(field, dim, ambient, |_, _| field.random(rng));
        let s = Subspace::from_matrix(&m);
        if s.dim() == dim {
            return Ok(s);
        }
    }
    Err(Error::RetryLimit(MAX_SAMPLE_RETRIES))
}

/// Deterministic function of `(ambient, dim, field, seed)`.
pub fn random_subspace<F: FiniteField>(ambient: usize, dim: usize, field: &F, seed: u64) -> Result<Subspace<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_subspace_with(ambient, dim, field, &mut rng)
}
