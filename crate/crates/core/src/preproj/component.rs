//! Graded components `V^t_d` of the (a,b)-preprojective algebra.
//!
//! Every path of degree `d` from `t` factors uniquely as `q·δ` with `δ` the arrow
//! traversed first. Hence `V^t_d` is a quotient of the pre-space
//!
//! ```text
//! X^t_d = (k·e_t if d = 0) ⊕ ⊕_{s(γ)=t} V^{e(γ)}_d · γ  ⊕  ⊕_{e(γ)=t} V^{s(γ)}_{d-1} · γ*
//! ```
//!
//! and the only relations not already accounted for inside the summands are the
//! products `x · m_t` for `x` in `V^t_{d-1}`. Components are built from sinks
//! upward within a degree, and degree by degree.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::Result;
use crate::exactlinalg::{Field, Matrix};
use crate::quiver::{double, DoubledQuiver, Path, Quiver, Weights};

use super::rep::Representation;

/// Identifies `V^t_d`. Degree `-1` denotes the zero component.
pub type ComponentKey = (usize, i64);

/// One summand of the pre-space: `V^{source} · δ`, or `k·e_t` when `arrow` is `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreBlock {
    pub arrow: Option<usize>,
    pub source: ComponentKey,
    pub offset: usize,
    pub len: usize,
}

#[derive(Debug, Clone)]
pub struct GradedComponent<F: Field> {
    vertex: usize,
    degree: i64,
    basis: Vec<Path>,
    vertex_offsets: Vec<usize>,
    /// Left multiplication by each base arrow, on the whole component.
    actions: Vec<Matrix<F>>,
    blocks: Vec<PreBlock>,
    pre_paths: Vec<Path>,
    /// Normal form map from pre-space coordinates to basis coordinates.
    reduction: Matrix<F>,
}

impl<F: Field> GradedComponent<F> {
    fn zero(field: &F, vertex: usize, degree: i64, vertex_count: usize, arrow_count: usize) -> Self {
        GradedComponent {
            vertex,
            degree,
            basis: Vec::new(),
            vertex_offsets: vec![0; vertex_count + 1],
            actions: vec![Matrix::zeros(field, 0, 0); arrow_count],
            blocks: Vec::new(),
            pre_paths: Vec::new(),
            reduction: Matrix::zeros(field, 0, 0),
        }
    }

    pub fn vertex(&self) -> usize {
        self.vertex
    }
    pub fn degree(&self) -> i64 {
        self.degree
    }
    pub fn key(&self) -> ComponentKey {
        (self.vertex, self.degree)
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Basis paths, grouped by end vertex and in canonical order within each vertex.
    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn vertex_dims(&self) -> Vec<usize> {
        self.vertex_offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Coordinate range of the basis paths ending at `v`.
    pub fn vertex_range(&self, v: usize) -> std::ops::Range<usize> {
        self.vertex_offsets[v]..self.vertex_offsets[v + 1]
    }

    pub fn basis_paths_at(&self, v: usize) -> &[Path] {
        &self.basis[self.vertex_range(v)]
    }

    /// Left multiplication by base arrow `γ: u -> v` as a `dim_v × dim_u` matrix.
    pub fn arrow_action(&self, arrow: usize, quiver: &Quiver) -> Matrix<F> {
        let a = &quiver.arrows()[arrow];
        let (rv, ru) = (self.vertex_range(a.target), self.vertex_range(a.source));
        self.actions[arrow].block(rv.start, ru.start, rv.len(), ru.len())
    }

    pub fn total_actions(&self) -> &[Matrix<F>] {
        &self.actions
    }

    /// The pre-space paths `q·δ` before reduction, in block order.
    pub fn pre_paths(&self) -> &[Path] {
        &self.pre_paths
    }

    pub fn blocks(&self) -> &[PreBlock] {
        &self.blocks
    }

    pub fn block_for(&self, arrow: Option<usize>) -> Option<&PreBlock> {
        self.blocks.iter().find(|b| b.arrow == arrow)
    }

    pub fn reduction(&self) -> &Matrix<F> {
        &self.reduction
    }

    /// Columns of the reduction map belonging to the block for `arrow`: the matrix of
    /// right multiplication by that arrow from the block's source component.
    pub fn right_multiplication(&self, arrow: usize) -> Option<Matrix<F>> {
        let b = self.block_for(Some(arrow))?;
        Some(self.reduction.block(0, b.offset, self.dim(), b.len))
    }

    pub fn index_of(&self, p: &Path) -> Option<usize> {
        self.basis.iter().position(|q| q == p)
    }

    pub fn representation(&self) -> Representation<F> {
        let mut vertex_of = Vec::with_capacity(self.dim());
        for v in 0..self.vertex_offsets.len() - 1 {
            vertex_of.extend(std::iter::repeat_n(v, self.vertex_range(v).len()));
        }
        Representation::new(self.vertex_offsets.len() - 1, vertex_of, self.actions.clone())
    }
}

/// The (a,b)-preprojective algebra of an acyclic quiver with a cache of graded components.
pub struct PreprojAlgebra<F: Field> {
    dq: DoubledQuiver,
    field: F,
    weight_a: Vec<F::Elem>,
    weight_b: Vec<F::Elem>,
    cache: Mutex<HashMap<ComponentKey, Arc<GradedComponent<F>>>>,
}

impl<F: Field> PreprojAlgebra<F> {
    pub fn new(quiver: &Quiver, weights: &Weights, field: F) -> Result<Self> {
        let (weight_a, weight_b) = weights.in_field(&field, quiver)?;
        Ok(PreprojAlgebra { dq: double(quiver), field, weight_a, weight_b, cache: Mutex::new(HashMap::new()) })
    }

    pub fn quiver(&self) -> &Quiver {
        self.dq.base()
    }
    pub fn doubled(&self) -> &DoubledQuiver {
        &self.dq
    }
    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn weight_a(&self, arrow: usize) -> &F::Elem {
        &self.weight_a[arrow]
    }
    pub fn weight_b(&self, arrow: usize) -> &F::Elem {
        &self.weight_b[arrow]
    }

    pub fn dim(&self, t: usize, d: i64) -> usize {
        self.component(t, d).dim()
    }

    /// `V^t_d`; the zero component for `d < 0`.
    pub fn component(&self, t: usize, d: i64) -> Arc<GradedComponent<F>> {
        let key = (t, d.max(-1));
        if let Some(c) = self.cache.lock().unwrap().get(&key) {
            return Arc::clone(c);
        }
        let built = Arc::new(self.build(key.0, key.1));
        let mut cache = self.cache.lock().unwrap();
        Arc::clone(cache.entry(key).or_insert(built))
    }

    fn build(&self, t: usize, d: i64) -> GradedComponent<F> {
        let f = &self.field;
        let q = self.dq.base();
        let n = q.vertex_count();
        let m = q.arrows().len();
        if d < 0 {
            return GradedComponent::zero(f, t, d, n, m);
        }

        // Pre-space blocks.
        let mut blocks = Vec::new();
        let mut pre_paths = Vec::new();
        let mut offset = 0;
        if d == 0 {
            blocks.push(PreBlock { arrow: None, source: (t, 0), offset, len: 1 });
            pre_paths.push(Path::trivial(t));
            offset += 1;
        }
        for delta in self.dq.arrows_from(t) {
            let arrow = self.dq.arrow(delta);
            let source = (arrow.target, d - arrow.degree() as i64);
            let comp = self.component(source.0, source.1);
            let step = Path::arrow(&self.dq, delta);
            for p in comp.basis() {
                pre_paths.push(Path::compose(p, &step).expect("basis path starts at the arrow target"));
            }
            blocks.push(PreBlock { arrow: Some(delta), source, offset, len: comp.dim() });
            offset += comp.dim();
        }
        let pre_dim = offset;

        // Relations x·m_t for x in V^t_{d-1}.
        let lower = self.component(t, d - 1);
        let mut relations = Matrix::zeros(f, lower.dim(), pre_dim);
        for block in &blocks {
            let Some(delta) = block.arrow else { continue };
            let arrow = self.dq.arrow(delta);
            let gamma = arrow.base;
            // Block γ (s(γ) = t) receives a(γ)·(x γ*) in V^{e(γ)}_d;
            // block γ* (e(γ) = t) receives -b(γ)·(x γ) in V^{s(γ)}_{d-1}.
            let (partner, scalar) = if arrow.starred {
                (gamma, f.neg(&self.weight_b[gamma]))
            } else {
                (self.dq.star(gamma), self.weight_a[gamma].clone())
            };
            let target = self.component(block.source.0, block.source.1);
            let Some(mult) = target.right_multiplication(partner) else { continue };
            for x in 0..lower.dim() {
                for r in 0..target.dim() {
                    let v = f.mul(&scalar, mult.get(r, x));
                    relations.set(x, block.offset + r, v);
                }
            }
        }

        // Eliminate the largest paths: reduce with columns in descending canonical order.
        let mut order: Vec<usize> = (0..pre_dim).collect();
        order.sort_by(|&i, &j| pre_paths[j].cmp(&pre_paths[i]));
        let red = relations.select_columns(&order).rref();
        let mut pivot_row_of = vec![None; pre_dim];
        for (row, &pc) in red.pivots.iter().enumerate() {
            pivot_row_of[order[pc]] = Some(row);
        }
        let mut position_in_order = vec![0; pre_dim];
        for (pos, &j) in order.iter().enumerate() {
            position_in_order[j] = pos;
        }

        let mut survivors: Vec<usize> = (0..pre_dim).filter(|&j| pivot_row_of[j].is_none()).collect();
        survivors.sort_by(|&i, &j| {
            let (p, q) = (&pre_paths[i], &pre_paths[j]);
            p.end.cmp(&q.end).then_with(|| p.cmp(q))
        });
        let dim = survivors.len();
        let basis: Vec<Path> = survivors.iter().map(|&j| pre_paths[j].clone()).collect();
        let mut vertex_offsets = vec![0; n + 1];
        for p in &basis {
            vertex_offsets[p.end + 1] += 1;
        }
        for v in 0..n {
            vertex_offsets[v + 1] += vertex_offsets[v];
        }

        let mut reduction = Matrix::zeros(f, dim, pre_dim);
        for (k, &j) in survivors.iter().enumerate() {
            reduction.set(k, j, f.one());
        }
        for (j, &pivot) in pivot_row_of.iter().enumerate() {
            let Some(row) = pivot else { continue };
            // e_j ≡ -Σ_{free n} rref[row][n]·e_n
            for (k, &nj) in survivors.iter().enumerate() {
                let c = red.reduced.get(row, position_in_order[nj]);
                if !f.is_zero(c) {
                    reduction.set(k, j, f.neg(c));
                }
            }
        }

        // Left multiplication by base arrows, computed blockwise: γ·(q·δ) = (γ·q)·δ.
        let mut actions = Vec::with_capacity(m);
        for gamma in 0..m {
            let mut pre_image = Matrix::zeros(f, pre_dim, dim);
            for (k, &j) in survivors.iter().enumerate() {
                let block = blocks.iter().find(|b| b.offset <= j && j < b.offset + b.len).unwrap();
                match block.arrow {
                    None => {
                        // γ·e_t = γ, which lives in the block of γ itself.
                        if q.arrows()[gamma].source == t {
                            let target_block = blocks.iter().find(|b| b.arrow == Some(gamma)).unwrap();
                            let comp = self.component(target_block.source.0, 0);
                            let e = comp.index_of(&Path::trivial(target_block.source.0)).unwrap();
                            pre_image.set(target_block.offset + e, k, f.one());
                        }
                    }
                    Some(_) => {
                        let comp = self.component(block.source.0, block.source.1);
                        let local = j - block.offset;
                        for r in 0..comp.dim() {
                            let c = comp.actions[gamma].get(r, local);
                            if !f.is_zero(c) {
                                pre_image.set(block.offset + r, k, c.clone());
                            }
                        }
                    }
                }
            }
            actions.push(reduction.mul(&pre_image));
        }

        GradedComponent { vertex: t, degree: d, basis, vertex_offsets, actions, blocks, pre_paths, reduction }
    }

    /// `dim V^t_d` for every vertex `t` and `0 <= d <= max_d`, indexed `[t][d]`.
    pub fn dims_table(&self, max_d: usize) -> Vec<Vec<usize>> {
        (0..self.quiver().vertex_count()).map(|t| (0..=max_d as i64).map(|d| self.dim(t, d)).collect()).collect()
    }

    pub fn path_names(&self, paths: &[Path]) -> Vec<String> {
        paths.iter().map(|p| self.dq.path_name(p)).collect()
    }
}
