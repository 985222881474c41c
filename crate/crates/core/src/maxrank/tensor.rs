//! Tensor-sum maps `T: ⊕(V_i⊗W_i) -> U` and `S: Q -> ⊕(V_i⊗W_i)` in flat coordinates.
//!
//! Block `i` occupies a contiguous range of the tensor side; within it the vector
//! `v_a ⊗ w_b` sits at position `a·dim W_i + b`. A tensor `x ∈ V⊗W` is therefore the
//! row-major flattening of its `dim V × dim W` coordinate matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::{Field, Matrix, Subspace};
use crate::preproj::{MapKind, MultiplicationMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `T: ⊕(V_i⊗W_i) -> U`; the tensor side is the column space.
    IntoU,
    /// `S: Q -> ⊕(V_i⊗W_i)`; the tensor side is the row space.
    FromQ,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::IntoU => Direction::FromQ,
            Direction::FromQ => Direction::IntoU,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Block {
    pub dim_v: usize,
    pub dim_w: usize,
}

impl Block {
    pub fn new(dim_v: usize, dim_w: usize) -> Self {
        Block { dim_v, dim_w }
    }
    pub fn dim(&self) -> usize {
        self.dim_v * self.dim_w
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorSumMap<F: Field> {
    blocks: Vec<Block>,
    direction: Direction,
    matrix: Matrix<F>,
}

impl<F: Field> TensorSumMap<F> {
    pub fn new(blocks: Vec<Block>, direction: Direction, matrix: Matrix<F>) -> Result<Self> {
        let tensor_dim: usize = blocks.iter().map(Block::dim).sum();
        let side = match direction {
            Direction::IntoU => matrix.cols(),
            Direction::FromQ => matrix.rows(),
        };
        if side != tensor_dim {
            return Err(Error::DimensionMismatch(format!(
                "tensor side has {side} coordinates, blocks need {tensor_dim}"
            )));
        }
        Ok(TensorSumMap { blocks, direction, matrix })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }
    pub fn direction(&self) -> Direction {
        self.direction
    }
    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }
    pub fn field(&self) -> &F {
        self.matrix.field()
    }

    pub fn tensor_dim(&self) -> usize {
        self.blocks.iter().map(Block::dim).sum()
    }

    /// `dim U` for `T`, `dim Q` for `S`.
    pub fn other_dim(&self) -> usize {
        match self.direction {
            Direction::IntoU => self.matrix.rows(),
            Direction::FromQ => self.matrix.cols(),
        }
    }

    pub fn block_offsets(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.blocks.len());
        let mut at = 0;
        for b in &self.blocks {
            offsets.push(at);
            at += b.dim();
        }
        offsets
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.is_injective()
    }
    pub fn is_surjective(&self) -> bool {
        self.matrix.is_surjective()
    }
    pub fn has_max_rank(&self) -> bool {
        self.matrix.has_max_rank()
    }

    /// `Σ (dim V_i)²`.
    pub fn quadratic_sum(&self) -> usize {
        self.blocks.iter().map(|b| b.dim_v * b.dim_v).sum()
    }

    /// The transposed map between dual spaces with the same block profile.
    pub fn dual(&self) -> Self {
        TensorSumMap {
            blocks: self.blocks.clone(),
            direction: self.direction.flipped(),
            matrix: self.matrix.transpose(),
        }
    }
}

/// Which tensor factor a subspace tuple lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Subspaces `V'_i ⊆ V_i`.
    Left,
    /// Subspaces `W'_i ⊆ W_i`.
    Right,
}

impl Side {
    pub fn factor_dim(self, b: &Block) -> usize {
        match self {
            Side::Left => b.dim_v,
            Side::Right => b.dim_w,
        }
    }
}

/// `A ⊗ B` for `A: p×q`, `B: r×s`, acting on row-major flattened tensors.
pub fn kronecker<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let f = a.field();
    Matrix::from_fn(f, a.rows() * b.rows(), a.cols() * b.cols(), |i, j| {
        f.mul(a.get(i / b.rows(), j / b.cols()), b.get(i % b.rows(), j % b.cols()))
    })
}

impl<F: Field> TensorSumMap<F> {
    /// The block-diagonal operator `⊕ (X_i ⊗ 1)` (left) or `⊕ (1 ⊗ X_i)` (right),
    /// where `X_i` is given per block.
    fn side_operator(&self, side: Side, per_block: &[Matrix<F>]) -> Matrix<F> {
        let f = self.field();
        let parts: Vec<Matrix<F>> = self
            .blocks
            .iter()
            .zip(per_block)
            .map(|(b, x)| match side {
                Side::Left => kronecker(x, &Matrix::identity(f, b.dim_w)),
                Side::Right => kronecker(&Matrix::identity(f, b.dim_v), x),
            })
            .collect();
        let refs: Vec<&Matrix<F>> = parts.iter().collect();
        Matrix::block_diagonal(f, &refs)
    }

    /// For `T`: the restriction to `⊕(V'_i⊗W_i)` or `⊕(V_i⊗W'_i)`.
    /// For `S`: the composition with the projection onto `⊕((V_i/V'_i)⊗W_i)` or `⊕(V_i⊗(W_i/W'_i))`.
    pub fn restrict(&self, side: Side, subspaces: &[Subspace<F>]) -> Result<Matrix<F>> {
        if subspaces.len() != self.blocks.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} subspaces for {} blocks",
                subspaces.len(),
                self.blocks.len()
            )));
        }
        for (b, s) in self.blocks.iter().zip(subspaces) {
            if s.ambient_dim() != side.factor_dim(b) {
                return Err(Error::DimensionMismatch(format!(
                    "subspace of a {}-dimensional space in a {}-dimensional factor",
                    s.ambient_dim(),
                    side.factor_dim(b)
                )));
            }
        }
        Ok(match self.direction {
            Direction::IntoU => {
                // Columns of the inclusion are the basis vectors: the transposed RREF basis.
                let incl: Vec<Matrix<F>> = subspaces.iter().map(|s| s.basis().transpose()).collect();
                self.matrix.mul(&self.side_operator(side, &incl))
            }
            Direction::FromQ => {
                let proj: Vec<Matrix<F>> = subspaces.iter().map(Subspace::quotient_projection).collect();
                self.side_operator(side, &proj).mul(&self.matrix)
            }
        })
    }

    /// Surjective `T` ↦ the inclusion `Ker T -> ⊕(V_i⊗W_i)`.
    pub fn transfer_via_kernel(&self) -> Result<Self> {
        if self.direction != Direction::IntoU {
            return Err(Error::InvalidInput("kernel transfer needs a map into U".into()));
        }
        if !self.is_surjective() {
            return Err(Error::NotSurjective);
        }
        let kernel = self.matrix.kernel_basis();
        TensorSumMap::new(self.blocks.clone(), Direction::FromQ, kernel.basis().transpose())
    }

    /// Injective `S` ↦ the projection `⊕(V_i⊗W_i) -> Coker S`, in the coordinates
    /// complementary to the pivots of `Im S`.
    pub fn transfer_via_cokernel(&self) -> Result<Self> {
        if self.direction != Direction::FromQ {
            return Err(Error::InvalidInput("cokernel transfer needs a map from Q".into()));
        }
        if !self.is_injective() {
            return Err(Error::NotInjective);
        }
        let image = self.matrix.column_space();
        TensorSumMap::new(self.blocks.clone(), Direction::IntoU, image.quotient_projection())
    }

    /// Tensor form of a multiplication map: `T = g·h⁻¹` for `g`, `S = h·f` for `f`, where
    /// `h` regroups the middle term `⊕ V_i^{n_i}` as `⊕ V_i ⊗ k^{n_i}` (copy `j` of `V_i`
    /// goes to `V_i ⊗ e_j`). Returns the map together with the permutation matrix `h`.
    pub fn from_multiplication_map(m: &MultiplicationMap<F>) -> Result<(Self, Matrix<F>)> {
        let f = m.matrix().field();
        let classes = m.classes();
        let middle = m.middle_dim();
        let blocks: Vec<Block> = classes.iter().map(|c| Block::new(c.dim, c.multiplicity())).collect();
        let mut h = Matrix::zeros(f, middle, middle);
        let mut block_offset = 0;
        for c in &classes {
            for (j, &member) in c.members.iter().enumerate() {
                let s = &m.summands[member];
                for v in 0..c.dim {
                    h.set(block_offset + v * c.multiplicity() + j, s.offset + v, f.one());
                }
            }
            block_offset += c.dim * c.multiplicity();
        }
        let (matrix, direction) = match m.kind {
            MapKind::G => {
                if m.matrix().cols() != middle {
                    return Err(Error::DimensionMismatch("g does not start at the middle term".into()));
                }
                (m.matrix().mul(&h.transpose()), Direction::IntoU)
            }
            MapKind::F => {
                if m.matrix().rows() != middle {
                    return Err(Error::DimensionMismatch("f does not end at the middle term".into()));
                }
                (h.mul(m.matrix()), Direction::FromQ)
            }
        };
        Ok((TensorSumMap::new(blocks, direction, matrix)?, h))
    }
}

/// `dim Im α(x)` for `x ∈ V⊗W` given as its `dim V × dim W` coordinate matrix, together
/// with `Im α(x) ⊆ W` (the row space).
pub fn alpha_rank<F: Field>(x: &Matrix<F>) -> (usize, Subspace<F>) {
    let image = x.row_space();
    (image.dim(), image)
}

/// `End(V)·x = V ⊗ Im α(x)` as a subspace of the flattened `V⊗W`.
pub fn cyclic_submodule<F: Field>(x: &Matrix<F>) -> Subspace<F> {
    let f = x.field();
    let (dim_v, dim_w) = (x.rows(), x.cols());
    let (_, image) = alpha_rank(x);
    let mut vectors = Vec::new();
    for v in 0..dim_v {
        for r in 0..image.dim() {
            let mut flat = vec![f.zero(); dim_v * dim_w];
            flat[v * dim_w..(v + 1) * dim_w].clone_from_slice(image.basis().row(r));
            vectors.push(flat);
        }
    }
    Subspace::from_spanning(f, dim_v * dim_w, vectors)
}

/// Flattens a `dim V × dim W` coordinate matrix.
pub fn flatten<F: Field>(x: &Matrix<F>) -> Vec<F::Elem> {
    x.entries().to_vec()
}

/// The map `V⊗W → (V⊗W)/span{v_1⊗w_1, v_2⊗w_1}` with `dim V = 3`, `dim W = 2`: surjective,
/// right general but not right omnipresent (`W' = span{w_1}` kills `v_1⊗w_1, v_2⊗w_1`),
/// and no 2-dimensional `V' ⊆ V` gives a restriction of maximal rank.
pub fn quotient_tensor_map<F: Field>(field: &F) -> TensorSumMap<F> {
    let killed = Subspace::from_spanning(
        field,
        6,
        [[1, 0, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]]
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect(),
    );
    TensorSumMap::new(vec![Block::new(3, 2)], Direction::IntoU, killed.quotient_projection())
        .expect("shape matches the single block")
}

/// Both sides of the inequality `dim U < Σ (dim V_i)²` (or `dim Q` for `S`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub lhs: usize,
    pub rhs: usize,
    /// `T` surjective but not injective, or `S` injective but not surjective.
    pub hypothesis: bool,
    pub holds: bool,
}

impl BoundReport {
    /// Only a map satisfying the hypothesis and the right omnipresent property is bound
    /// by the inequality.
    pub fn violated_given(&self, right_omnipresent: bool) -> bool {
        self.hypothesis && right_omnipresent && !self.holds
    }
}

pub fn dimension_bound<F: Field>(map: &TensorSumMap<F>) -> BoundReport {
    let (inj, surj) = (map.is_injective(), map.is_surjective());
    let hypothesis = match map.direction() {
        Direction::IntoU => surj && !inj,
        Direction::FromQ => inj && !surj,
    };
    let (lhs, rhs) = (map.other_dim(), map.quadratic_sum());
    BoundReport { lhs, rhs, hypothesis, holds: lhs < rhs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::PrimeField;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn alpha_rank_examples() {
        let f = f5();
        assert_eq!(alpha_rank(&Matrix::from_i64(&f, &[&[1, 0], &[0, 0]])).0, 1);
        assert_eq!(alpha_rank(&Matrix::zeros(&f, 2, 2)).0, 0);
        assert_eq!(alpha_rank(&Matrix::identity(&f, 2)).0, 2);
    }

    #[test]
    fn cyclic_submodule_examples() {
        let f = f5();
        assert_eq!(cyclic_submodule(&Matrix::from_i64(&f, &[&[1, 2], &[0, 0], &[3, 1]])).dim(), 3);
        assert_eq!(cyclic_submodule(&Matrix::from_i64(&f, &[&[1, 2], &[2, 4], &[3, 1]])).dim(), 3);
        assert_eq!(cyclic_submodule(&Matrix::from_i64(&f, &[&[1, 2], &[0, 1], &[3, 1]])).dim(), 6);
        assert_eq!(cyclic_submodule(&Matrix::zeros(&f, 3, 2)).dim(), 0);
    }

    #[test]
    fn kronecker_product_layout() {
        let f = f5();
        let a = Matrix::from_i64(&f, &[&[1, 2]]);
        let b = Matrix::from_i64(&f, &[&[1], &[3]]);
        assert_eq!(kronecker(&a, &b), Matrix::from_i64(&f, &[&[1, 2], &[3, 6]]));
    }

    #[test]
    fn dual_is_an_involution() {
        let f = f5();
        let t = TensorSumMap::new(vec![Block::new(2, 1)], Direction::IntoU, Matrix::from_i64(&f, &[&[4, 0]])).unwrap();
        assert_eq!(t.dual().dual(), t);
        assert_eq!(t.dual().direction(), Direction::FromQ);
        assert!(TensorSumMap::new(vec![Block::new(2, 2)], Direction::IntoU, Matrix::zeros(&f, 1, 3)).is_err());
    }

    #[test]
    fn transfers() {
        let f = f5();
        let t = TensorSumMap::new(vec![Block::new(2, 1)], Direction::IntoU, Matrix::from_i64(&f, &[&[1, 0]])).unwrap();
        let k = t.transfer_via_kernel().unwrap();
        assert_eq!(k.matrix(), &Matrix::from_i64(&f, &[&[0], &[1]]));
        let back = k.transfer_via_cokernel().unwrap();
        assert_eq!(back.matrix(), &Matrix::from_i64(&f, &[&[1, 0]]));
        let id = TensorSumMap::new(vec![Block::new(1, 1)], Direction::IntoU, Matrix::identity(&f, 1)).unwrap();
        assert_eq!(id.transfer_via_kernel().unwrap().other_dim(), 0);
        let zero = TensorSumMap::new(vec![Block::new(1, 1)], Direction::IntoU, Matrix::zeros(&f, 1, 1)).unwrap();
        assert_eq!(zero.transfer_via_kernel(), Err(Error::NotSurjective));
    }

    #[test]
    fn restriction_on_each_side() {
        let f = f5();
        // T: V⊗W -> k with dim V = 2, dim W = 1, T(v1⊗w) = 1, T(v2⊗w) = 0.
        let t = TensorSumMap::new(vec![Block::new(2, 1)], Direction::IntoU, Matrix::from_i64(&f, &[&[1, 0]])).unwrap();
        let span_v2 = Subspace::from_spanning(&f, 2, vec![vec![0, 1]]);
        assert!(t.restrict(Side::Left, &[span_v2]).unwrap().is_zero());
        let full_w = Subspace::full(&f, 1);
        assert_eq!(t.restrict(Side::Right, &[full_w]).unwrap(), *t.matrix());
    }

    #[test]
    fn bound_report() {
        let f = f5();
        let t = TensorSumMap::new(vec![Block::new(2, 1)], Direction::IntoU, Matrix::from_i64(&f, &[&[1, 0]])).unwrap();
        let r = dimension_bound(&t);
        assert_eq!((r.lhs, r.rhs, r.hypothesis, r.holds), (1, 4, true, true));
        let inj = TensorSumMap::new(vec![Block::new(1, 1)], Direction::IntoU, Matrix::identity(&f, 1)).unwrap();
        assert!(!dimension_bound(&inj).hypothesis);
    }
}
