//! Direct expansion of the relations inside the free path slice `W^t_d`. Exponential in
//! `d`, so it serves only as an independent cross-check of the recursive construction.

use std::collections::HashMap;

use crate::exactlinalg::{Field, Matrix};
use crate::quiver::{paths_of_degree, DoubledQuiver, Path};

use super::component::PreprojAlgebra;

/// The free slice `W^t_d` and the expanded elements `x·m_s·y` spanning its relation space.
#[derive(Debug, Clone)]
pub struct RelationSet<F: Field> {
    pub paths: Vec<Path>,
    /// One row per `(x, s, y)` triple, in path coordinates.
    pub relations: Matrix<F>,
}

impl<F: Field> RelationSet<F> {
    /// `dim W^t_d − rank(relations)`.
    pub fn quotient_dim(&self) -> usize {
        self.paths.len() - self.relations.rank()
    }

    /// Paths surviving reduction with the largest paths eliminated first.
    pub fn standard_paths(&self) -> Vec<Path> {
        let n = self.paths.len();
        // `paths` is ascending, so reversing the columns puts the largest first.
        let order: Vec<usize> = (0..n).rev().collect();
        let red = self.relations.select_columns(&order).rref();
        let mut eliminated = vec![false; n];
        for &p in &red.pivots {
            eliminated[order[p]] = true;
        }
        (0..n).filter(|&j| !eliminated[j]).map(|j| self.paths[j].clone()).collect()
    }
}

/// Expands every `x·m_s·y` with `y` a path from `t` to `s`, `x` a path from `s`, and
/// `deg x + deg y + 1 = d`, in the path basis of `W^t_d`.
pub fn relation_spanning_set<F: Field>(
    field: &F,
    dq: &DoubledQuiver,
    a: &[F::Elem],
    b: &[F::Elem],
    t: usize,
    d: usize,
) -> RelationSet<F> {
    let paths = paths_of_degree(dq, t, d);
    let index: HashMap<&Path, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let q = dq.base();
    let mut rows = Vec::new();
    if d == 0 {
        return RelationSet { relations: Matrix::zeros(field, 0, paths.len()), paths };
    }
    for deg_y in 0..d {
        for y in paths_of_degree(dq, t, deg_y) {
            let s = y.end;
            // m_s = Σ_{s(γ)=s} a(γ) γ*γ − Σ_{e(γ)=s} b(γ) γγ*.
            let mut m_terms: Vec<(Path, F::Elem)> = Vec::new();
            for g in q.arrows_from(s) {
                let loop_path = Path::compose(&Path::arrow(dq, dq.star(g)), &Path::arrow(dq, g)).unwrap();
                m_terms.push((loop_path, a[g].clone()));
            }
            for g in q.arrows_into(s) {
                let loop_path = Path::compose(&Path::arrow(dq, g), &Path::arrow(dq, dq.star(g))).unwrap();
                m_terms.push((loop_path, field.neg(&b[g])));
            }
            for x in paths_of_degree(dq, s, d - 1 - deg_y) {
                let mut row = vec![field.zero(); paths.len()];
                for (m, c) in &m_terms {
                    let Some(xm) = Path::compose(&x, m) else { continue };
                    let Some(p) = Path::compose(&xm, &y) else { continue };
                    let i = index[&p];
                    row[i] = field.add(&row[i], c);
                }
                rows.push(row);
            }
        }
    }
    RelationSet { relations: Matrix::from_rows(field, paths.len(), rows), paths }
}

impl<F: Field> PreprojAlgebra<F> {
    pub fn relation_spanning_set(&self, t: usize, d: usize) -> RelationSet<F> {
        let m = self.quiver().arrows().len();
        let a: Vec<F::Elem> = (0..m).map(|i| self.weight_a(i).clone()).collect();
        let b: Vec<F::Elem> = (0..m).map(|i| self.weight_b(i).clone()).collect();
        relation_spanning_set(self.field(), self.doubled(), &a, &b, t, d)
    }
}
