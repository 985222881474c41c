//! Multiplication-by-arrow maps between graded components and the almost split
//! sequences they form.

use crate::error::{Error, Result};
use crate::exactlinalg::{Field, Matrix};

use super::component::{ComponentKey, PreprojAlgebra};
use super::rep::{RepMorphism, Representation};

/// One summand `V^{key}` of the middle term, attached to the doubled arrow that produces it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summand {
    pub arrow: usize,
    pub key: ComponentKey,
    pub offset: usize,
    pub dim: usize,
}

/// Summands grouped by isomorphism class; `members` index into the summand list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummandClass {
    pub key: ComponentKey,
    pub dim: usize,
    pub members: Vec<usize>,
}

impl SummandClass {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }
}

/// Whether the middle term is the source (`g`) or the target (`f`) of the map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    G,
    F,
}

/// `g^t_d` (into `V^t_d`) or `f^t_d` (out of `V^t_d`) with its constructed middle-term decomposition.
#[derive(Debug, Clone)]
pub struct MultiplicationMap<F: Field> {
    pub kind: MapKind,
    pub vertex: usize,
    pub degree: i64,
    pub morphism: RepMorphism<F>,
    pub summands: Vec<Summand>,
}

impl<F: Field> MultiplicationMap<F> {
    pub fn matrix(&self) -> &Matrix<F> {
        &self.morphism.matrix
    }

    pub fn middle_dim(&self) -> usize {
        self.summands.iter().map(|s| s.dim).sum()
    }

    /// Nonzero summands grouped by `(vertex, degree)`, in order of first appearance.
    pub fn classes(&self) -> Vec<SummandClass> {
        let mut classes: Vec<SummandClass> = Vec::new();
        for (i, s) in self.summands.iter().enumerate() {
            if s.dim == 0 {
                continue;
            }
            match classes.iter_mut().find(|c| c.key == s.key) {
                Some(c) => c.members.push(i),
                None => classes.push(SummandClass { key: s.key, dim: s.dim, members: vec![i] }),
            }
        }
        classes
    }

    /// `Σ (dim V_i)²` over distinct summand classes.
    pub fn quadratic_sum(&self) -> usize {
        self.classes().iter().map(|c| c.dim * c.dim).sum()
    }
}

impl<F: Field> PreprojAlgebra<F> {
    /// The middle term attached to `V^t_d` seen from degree `d`: one summand per doubled arrow
    /// `δ` leaving `t`, namely `V^{e(δ)}_{d - deg δ}`.
    fn middle(&self, t: usize, d: i64) -> (Vec<Summand>, Representation<F>) {
        let q = self.quiver();
        let mut summands = Vec::new();
        let mut parts = Vec::new();
        let mut offset = 0;
        for delta in self.doubled().arrows_from(t) {
            let arrow = self.doubled().arrow(delta);
            let key = (arrow.target, d - arrow.degree() as i64);
            let comp = self.component(key.0, key.1);
            summands.push(Summand { arrow: delta, key, offset, dim: comp.dim() });
            offset += comp.dim();
            parts.push(comp.representation());
        }
        let refs: Vec<&Representation<F>> = parts.iter().collect();
        let rep = Representation::direct_sum(self.field(), q.vertex_count(), q.arrows().len(), &refs);
        (summands, rep)
    }

    /// `g^t_d`: right multiplication by `a(γ)β` on `V^{e(γ)}_d` (for `s(γ) = t`) and by
    /// `-b(γ)β*` on `V^{s(γ)}_{d-1}` (for `e(γ) = t`), summed into `V^t_d`.
    pub fn right_mult_g(&self, t: usize, d: i64) -> Result<MultiplicationMap<F>> {
        let target = self.component(t, d);
        if target.is_zero() {
            return Err(Error::ZeroComponent { t: t + 1, d });
        }
        let f = self.field();
        let (summands, source) = self.middle(t, d);
        let mut matrix = Matrix::zeros(f, target.dim(), source.dim());
        for s in &summands {
            let arrow = self.doubled().arrow(s.arrow);
            let scalar =
                if arrow.starred { f.neg(self.weight_b(arrow.base)) } else { self.weight_a(arrow.base).clone() };
            let block = target.right_multiplication(s.arrow).expect("every arrow from t has a block");
            matrix.set_block(0, s.offset, &block.scale(&scalar));
        }
        let morphism = RepMorphism::new(source, target.representation(), matrix);
        Ok(MultiplicationMap { kind: MapKind::G, vertex: t, degree: d, morphism, summands })
    }

    /// `f^t_d`: right multiplication by `β*` into `V^{e(γ)}_{d+1}` (for `s(γ) = t`) and by
    /// `β` into `V^{s(γ)}_d` (for `e(γ) = t`). The codomain is the middle term of `g^t_{d+1}`.
    pub fn left_mult_f(&self, t: usize, d: i64) -> Result<MultiplicationMap<F>> {
        let source = self.component(t, d);
        if source.is_zero() {
            return Err(Error::ZeroComponent { t: t + 1, d });
        }
        let f = self.field();
        let (summands, target) = self.middle(t, d + 1);
        let mut matrix = Matrix::zeros(f, target.dim(), source.dim());
        for s in &summands {
            let arrow = self.doubled().arrow(s.arrow);
            // The summand for δ = γ receives x·γ*, the summand for δ = γ* receives x·γ.
            let partner = if arrow.starred { arrow.base } else { self.doubled().star(arrow.base) };
            let comp = self.component(s.key.0, s.key.1);
            if let Some(block) = comp.right_multiplication(partner) {
                matrix.set_block(s.offset, 0, &block);
            }
        }
        let morphism = RepMorphism::new(source.representation(), target, matrix);
        Ok(MultiplicationMap { kind: MapKind::F, vertex: t, degree: d, morphism, summands })
    }

    /// `0 -> V^t_d -> middle -> V^t_{d+1} -> 0`.
    pub fn ar_sequence(&self, t: usize, d: i64) -> Result<ArSequence<F>> {
        let f = self.left_mult_f(t, d)?;
        let g = self.right_mult_g(t, d + 1)?;
        Ok(ArSequence { vertex: t, degree: d, f, g })
    }

    /// Every `(t, d)` with `d <= max_d` for which both end terms are nonzero.
    pub fn ar_cells(&self, max_d: i64) -> Vec<(usize, i64)> {
        let n = self.quiver().vertex_count();
        (0..n)
            .flat_map(|t| (0..=max_d).map(move |d| (t, d)))
            .filter(|&(t, d)| self.dim(t, d) > 0 && self.dim(t, d + 1) > 0)
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct ArSequence<F: Field> {
    pub vertex: usize,
    pub degree: i64,
    pub f: MultiplicationMap<F>,
    pub g: MultiplicationMap<F>,
}

/// Exactness diagnostics of an [`ArSequence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exactness {
    pub composition_zero: bool,
    pub f_injective: bool,
    pub g_surjective: bool,
    pub image_is_kernel: bool,
    pub dims_additive: bool,
}

impl Exactness {
    pub fn holds(&self) -> bool {
        self.composition_zero && self.f_injective && self.g_surjective && self.image_is_kernel && self.dims_additive
    }
}

impl<F: Field> ArSequence<F> {
    pub fn start_dim(&self) -> usize {
        self.f.matrix().cols()
    }
    pub fn middle_dim(&self) -> usize {
        self.f.middle_dim()
    }
    pub fn end_dim(&self) -> usize {
        self.g.matrix().rows()
    }

    pub fn exactness(&self) -> Exactness {
        let (fm, gm) = (self.f.matrix(), self.g.matrix());
        let composition_zero = gm.mul(fm).is_zero();
        let image_is_kernel = fm.column_space() == gm.kernel_basis();
        Exactness {
            composition_zero,
            f_injective: fm.is_injective(),
            g_surjective: gm.is_surjective(),
            image_is_kernel,
            dims_additive: self.middle_dim() == self.start_dim() + self.end_dim(),
        }
    }

    /// `Σ (dim V_i)²` over distinct classes of the middle term.
    pub fn quadratic_sum(&self) -> usize {
        self.g.quadratic_sum()
    }
}
