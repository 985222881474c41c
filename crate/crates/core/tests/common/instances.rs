//! Random tensor-sum maps with small integer entries, reducible into any prime field.

use preproj::exactlinalg::{Field, Matrix, PrimeField};
use preproj::maxrank::{Block, Direction, TensorSumMap};
use rand::Rng;

#[derive(Debug, Clone)]
pub struct Instance {
    pub blocks: Vec<Block>,
    pub direction: Direction,
    /// Row-major integer entries of the matrix.
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<i64>,
}

impl Instance {
    /// `l` blocks with `1 <= dim V_i, dim W_i <= max_dim`, the other side of dimension at
    /// most the tensor dimension, and entries in `-2..=2`.
    pub fn random<R: Rng>(rng: &mut R, direction: Direction, max_blocks: usize, max_dim: usize) -> Self {
        let l = rng.gen_range(1..=max_blocks);
        let blocks: Vec<Block> =
            (0..l).map(|_| Block::new(rng.gen_range(1..=max_dim), rng.gen_range(1..=max_dim))).collect();
        let tensor: usize = blocks.iter().map(Block::dim).sum();
        let other = rng.gen_range(1..=tensor);
        let (rows, cols) = match direction {
            Direction::IntoU => (other, tensor),
            Direction::FromQ => (tensor, other),
        };
        let entries = (0..rows * cols).map(|_| rng.gen_range(-2..=2)).collect();
        Instance { blocks, direction, rows, cols, entries }
    }

    pub fn matrix<F: Field>(&self, field: &F) -> Matrix<F> {
        Matrix::from_fn(field, self.rows, self.cols, |i, j| field.from_i64(self.entries[i * self.cols + j]))
    }

    pub fn map(&self, p: u64) -> TensorSumMap<PrimeField> {
        let f = PrimeField::new(p).unwrap();
        TensorSumMap::new(self.blocks.clone(), self.direction, self.matrix(&f)).unwrap()
    }
}
