//! Finite-dimensional representations of the base quiver in total coordinates.

use crate::error::{Error, Result};
use crate::exactlinalg::{Field, FiniteField, Matrix};

/// A representation in which every basis vector lives at one vertex; each base
/// arrow acts on the whole space and maps vertex `source` vectors to vertex `target` vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation<F: Field> {
    vertex_count: usize,
    vertex_of: Vec<usize>,
    actions: Vec<Matrix<F>>,
}

impl<F: Field> Representation<F> {
    pub fn new(vertex_count: usize, vertex_of: Vec<usize>, actions: Vec<Matrix<F>>) -> Self {
        let n = vertex_of.len();
        for a in &actions {
            assert_eq!((a.rows(), a.cols()), (n, n), "arrow action has the wrong shape");
        }
        Representation { vertex_count, vertex_of, actions }
    }

    pub fn zero(field: &F, vertex_count: usize, arrow_count: usize) -> Self {
        Representation { vertex_count, vertex_of: Vec::new(), actions: vec![Matrix::zeros(field, 0, 0); arrow_count] }
    }

    pub fn dim(&self) -> usize {
        self.vertex_of.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn vertex_of(&self) -> &[usize] {
        &self.vertex_of
    }

    pub fn actions(&self) -> &[Matrix<F>] {
        &self.actions
    }

    pub fn dimension_vector(&self) -> Vec<usize> {
        let mut dims = vec![0; self.vertex_count];
        for &v in &self.vertex_of {
            dims[v] += 1;
        }
        dims
    }

    /// Coordinates (in total order) of the basis vectors at vertex `v`.
    pub fn coordinates_at(&self, v: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.vertex_of[i] == v).collect()
    }

    /// Block direct sum, coordinates concatenated in the given order.
    pub fn direct_sum(field: &F, vertex_count: usize, arrow_count: usize, parts: &[&Self]) -> Self {
        let mut vertex_of = Vec::new();
        for p in parts {
            vertex_of.extend_from_slice(&p.vertex_of);
        }
        let actions = (0..arrow_count)
            .map(|a| {
                let blocks: Vec<&Matrix<F>> = parts.iter().map(|p| &p.actions[a]).collect();
                Matrix::block_diagonal(field, &blocks)
            })
            .collect();
        Representation { vertex_count, vertex_of, actions }
    }
}

/// A linear map between representations, as one `target.dim × source.dim` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepMorphism<F: Field> {
    pub source: Representation<F>,
    pub target: Representation<F>,
    pub matrix: Matrix<F>,
}

impl<F: Field> RepMorphism<F> {
    pub fn new(source: Representation<F>, target: Representation<F>, matrix: Matrix<F>) -> Self {
        assert_eq!((matrix.rows(), matrix.cols()), (target.dim(), source.dim()));
        RepMorphism { source, target, matrix }
    }

    /// Respects vertices: no entry connects vectors at different vertices.
    pub fn is_vertexwise(&self) -> bool {
        let f = self.matrix.field();
        (0..self.matrix.rows()).all(|i| {
            (0..self.matrix.cols())
                .all(|j| self.source.vertex_of[j] == self.target.vertex_of[i] || f.is_zero(self.matrix.get(i, j)))
        })
    }

    /// Vertexwise and commuting with every arrow action.
    pub fn is_homomorphism(&self) -> bool {
        self.is_vertexwise()
            && self
                .source
                .actions
                .iter()
                .zip(&self.target.actions)
                .all(|(ms, mt)| mt.mul(&self.matrix) == self.matrix.mul(ms))
    }

    /// The component at vertex `v` as a `target_v × source_v` matrix.
    pub fn at_vertex(&self, v: usize) -> Matrix<F> {
        let rows = self.target.coordinates_at(v);
        let cols = self.source.coordinates_at(v);
        self.matrix.select_rows(&rows).select_columns(&cols)
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.is_injective()
    }

    pub fn is_surjective(&self) -> bool {
        self.matrix.is_surjective()
    }
}

/// A basis of `Hom(m, n)` as `n.dim × m.dim` matrices.
#[allow(clippy::needless_range_loop)]
pub fn hom_space<F: Field>(field: &F, m: &Representation<F>, n: &Representation<F>) -> Vec<Matrix<F>> {
    assert_eq!(m.actions.len(), n.actions.len());
    // Unknown entries X[i][j] with matching vertices.
    let mut vars = Vec::new();
    let mut var_index = vec![vec![None; m.dim()]; n.dim()];
    for i in 0..n.dim() {
        for j in 0..m.dim() {
            if n.vertex_of[i] == m.vertex_of[j] {
                var_index[i][j] = Some(vars.len());
                vars.push((i, j));
            }
        }
    }
    // N_γ X - X M_γ = 0, one equation per entry (r, c).
    let mut equations = Vec::new();
    for (mg, ng) in m.actions.iter().zip(&n.actions) {
        for r in 0..n.dim() {
            for c in 0..m.dim() {
                let mut eq = vec![field.zero(); vars.len()];
                let mut nonzero = false;
                for k in 0..n.dim() {
                    if let Some(v) = var_index[k][c] {
                        let coeff = ng.get(r, k);
                        if !field.is_zero(coeff) {
                            eq[v] = field.add(&eq[v], coeff);
                            nonzero = true;
                        }
                    }
                }
                for k in 0..m.dim() {
                    if let Some(v) = var_index[r][k] {
                        let coeff = mg.get(k, c);
                        if !field.is_zero(coeff) {
                            eq[v] = field.sub(&eq[v], coeff);
                            nonzero = true;
                        }
                    }
                }
                if nonzero {
                    equations.push(eq);
                }
            }
        }
    }
    let system = Matrix::from_rows(field, vars.len(), equations);
    let kernel = system.kernel_basis();
    (0..kernel.dim())
        .map(|b| {
            let coeffs = kernel.basis().row(b);
            let mut x = Matrix::zeros(field, n.dim(), m.dim());
            for (v, &(i, j)) in vars.iter().enumerate() {
                x.set(i, j, coeffs[v].clone());
            }
            x
        })
        .collect()
}

/// A nonzero representation is indecomposable iff its endomorphism ring is local, i.e.
/// every endomorphism is nilpotent or invertible (Fitting). Cheap candidates are tested
/// first; a full certificate enumerates `End(m)` and so needs `q^{dim End} <= budget`.
pub fn is_indecomposable<F: FiniteField>(field: &F, m: &Representation<F>, budget: u128) -> Result<bool> {
    if m.dim() == 0 {
        return Ok(false);
    }
    let end = hom_space(field, m, m);
    if end.len() == 1 {
        return Ok(true);
    }
    let is_local_element = |x: &Matrix<F>| x.is_nilpotent() || x.is_invertible();
    for (i, x) in end.iter().enumerate() {
        if !is_local_element(x) {
            return Ok(false);
        }
        for y in &end[i + 1..] {
            if !is_local_element(&x.add(y)) || !is_local_element(&x.sub(y)) {
                return Ok(false);
            }
        }
    }
    let q = field.order() as u128;
    let count = (0..end.len()).try_fold(1u128, |acc, _| acc.checked_mul(q)).unwrap_or(u128::MAX);
    if count > budget {
        return Err(Error::BudgetExceeded { count, budget });
    }
    let mut digits = vec![0u64; end.len()];
    loop {
        let mut x = Matrix::zeros(field, m.dim(), m.dim());
        for (c, b) in digits.iter().zip(&end) {
            if *c != 0 {
                x = x.add(&b.scale(&field.element(*c)));
            }
        }
        if !is_local_element(&x) {
            return Ok(false);
        }
        let Some(pos) = digits.iter().position(|&c| c + 1 < field.order()) else { break };
        digits[pos] += 1;
        for c in &mut digits[..pos] {
            *c = 0;
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::PrimeField;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    /// `k -> k` along one arrow with the given scalar.
    fn a2_rep(f: &PrimeField, c: i64) -> Representation<PrimeField> {
        Representation::new(2, vec![0, 1], vec![Matrix::from_i64(f, &[&[0, 0], &[c, 0]])])
    }

    #[test]
    fn hom_dimensions_for_a2() {
        let f = f3();
        let p1 = a2_rep(&f, 1);
        let s2 = Representation::new(2, vec![1], vec![Matrix::zeros(&f, 1, 1)]);
        let s1 = Representation::new(2, vec![0], vec![Matrix::zeros(&f, 1, 1)]);
        assert_eq!(hom_space(&f, &p1, &p1).len(), 1);
        assert_eq!(hom_space(&f, &s2, &p1).len(), 1);
        assert_eq!(hom_space(&f, &p1, &s2).len(), 0);
        assert_eq!(hom_space(&f, &p1, &s1).len(), 1);
        for x in hom_space(&f, &s2, &p1) {
            assert!(RepMorphism::new(s2.clone(), p1.clone(), x).is_homomorphism());
        }
    }

    #[test]
    fn indecomposability() {
        let f = f3();
        assert!(is_indecomposable(&f, &a2_rep(&f, 1), 1000).unwrap());
        assert!(!is_indecomposable(&f, &a2_rep(&f, 0), 1000).unwrap());
        assert!(!is_indecomposable(&f, &Representation::zero(&f, 2, 1), 1000).unwrap());
        let p = a2_rep(&f, 1);
        let sum = Representation::direct_sum(&f, 2, 1, &[&p, &p]);
        assert_eq!(sum.dimension_vector(), vec![2, 2]);
        assert!(!is_indecomposable(&f, &sum, 1_000_000).unwrap());
    }
}
