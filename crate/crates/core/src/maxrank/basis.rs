//! Randomized certificates that generically chosen elements form a basis.

use rand::Rng;
use serde_json::{json, Value};

use super::tensor::{flatten, Direction, TensorSumMap};
use crate::error::{Error, Result};
use crate::exactlinalg::{matrix_json, trial_rng, Field, FiniteField, Matrix};
use crate::preproj::PreprojAlgebra;

/// Outcome of repeated "do these sampled elements form a basis?" trials.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub kind: String,
    pub field: String,
    pub trials: u64,
    pub seed: u64,
    pub passes: u64,
    /// Indices of failing trials, in increasing order.
    pub failing_trials: Vec<u64>,
    /// Sizes and other fixed parameters of the instance.
    pub parameters: Value,
    /// The sampled data of the first passing trial.
    pub first_pass: Option<Value>,
}

impl Certificate {
    pub fn new(kind: &str, field: String, trials: u64, seed: u64, parameters: Value) -> Self {
        Certificate {
            kind: kind.into(),
            field,
            trials,
            seed,
            passes: 0,
            failing_trials: Vec::new(),
            parameters,
            first_pass: None,
        }
    }

    pub fn pass_fraction(&self) -> f64 {
        if self.trials == 0 {
            1.0
        } else {
            self.passes as f64 / self.trials as f64
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failing_trials.is_empty()
    }

    pub fn record(&mut self, trial: u64, passed: bool, data: impl FnOnce() -> Value) {
        if passed {
            self.passes += 1;
            if self.first_pass.is_none() {
                self.first_pass = Some(json!({ "trial": trial, "data": data() }));
            }
        } else {
            self.failing_trials.push(trial);
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind,
            "field": self.field,
            "trials": self.trials,
            "seed": self.seed,
            "passes": self.passes,
            "failures": self.failing_trials.len(),
            "pass_fraction": self.pass_fraction(),
            "result": if self.all_passed() { "PASS" } else { "FAIL" },
            "failing_trials": self.failing_trials,
            "parameters": self.parameters,
            "first_pass": self.first_pass,
        })
    }
}

fn random_matrix<F: FiniteField, R: Rng + ?Sized>(field: &F, rows: usize, cols: usize, rng: &mut R) -> Matrix<F> {
    Matrix::from_fn(field, rows, cols, |_, _| field.random(rng))
}

/// For surjective `T`, counts `a_i` with `Σ a_i = dim U` and independent elements `m(i, j)` of
/// `V_i⊗W_i` (as `dim V_i × dim W_i` matrices): samples `φ_i ∈ End(V_i)` and tests whether
/// the `T((φ_i⊗1)·m(i, j))` form a basis of `U`.
pub fn generic_basis<F: FiniteField>(
    map: &TensorSumMap<F>,
    elements: &[Vec<Matrix<F>>],
    trials: u64,
    seed: u64,
) -> Result<Certificate> {
    let field = map.field();
    if map.direction() != Direction::IntoU {
        return Err(Error::InvalidInput("generic bases are taken for maps into U".into()));
    }
    if elements.len() != map.blocks().len() {
        return Err(Error::Profile(format!("{} element lists for {} blocks", elements.len(), map.blocks().len())));
    }
    let dim_u = map.other_dim();
    let total: usize = elements.iter().map(Vec::len).sum();
    if total != dim_u {
        return Err(Error::Profile(format!("the counts a_i sum to {total}, dim U is {dim_u}")));
    }
    for (i, (block, ms)) in map.blocks().iter().zip(elements).enumerate() {
        if ms.iter().any(|m| (m.rows(), m.cols()) != (block.dim_v, block.dim_w)) {
            return Err(Error::DimensionMismatch(format!("element of block {} has the wrong shape", i + 1)));
        }
        let flat: Vec<Vec<F::Elem>> = ms.iter().map(flatten).collect();
        if Matrix::from_rows(field, block.dim(), flat).rank() != ms.len() {
            return Err(Error::Profile(format!("elements of block {} are linearly dependent", i + 1)));
        }
    }
    let offsets = map.block_offsets();
    let parameters = json!({
        "blocks": map.blocks().iter().map(|b| [b.dim_v, b.dim_w]).collect::<Vec<_>>(),
        "a": elements.iter().map(Vec::len).collect::<Vec<_>>(),
        "dim_u": dim_u,
    });
    let mut cert = Certificate::new("generic_basis", field.spec().to_string(), trials, seed, parameters);
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial, 0);
        let phis: Vec<Matrix<F>> =
            map.blocks().iter().map(|b| random_matrix(field, b.dim_v, b.dim_v, &mut rng)).collect();
        let mut columns = Matrix::zeros(field, map.tensor_dim(), dim_u);
        let mut col = 0;
        for (i, ms) in elements.iter().enumerate() {
            for m in ms {
                for (k, x) in flatten(&phis[i].mul(m)).into_iter().enumerate() {
                    columns.set(offsets[i] + k, col, x);
                }
                col += 1;
            }
        }
        let basis = map.matrix().mul(&columns);
        let passed = basis.is_invertible();
        cert.record(trial, passed, || json!(phis.iter().map(matrix_json).collect::<Vec<_>>()));
    }
    Ok(cert)
}

/// One block of the preprojective basis statement: the arrows between `t` and one
/// neighbouring vertex, with the component their products are taken from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HlBlock {
    /// Neighbouring vertex (`s_i` for incoming arrows, `u_i` for outgoing ones).
    pub vertex: usize,
    /// Doubled-quiver arrows `β*_{i,j}` (incoming case) or `β_{i,j}` (outgoing case) leaving `t`.
    pub arrows: Vec<usize>,
    /// Degree of the component the factors `F_{i,k}` are drawn from.
    pub degree: i64,
    pub dim_v: usize,
    pub n: usize,
    pub c: usize,
}

impl HlBlock {
    pub fn dim_w(&self) -> usize {
        self.arrows.len()
    }
}

/// The products `F_{i,k}·β*_{i,j}` and `F_{i,k}·β_{i,j}` that should form a basis of `V^t_d`.
#[derive(Clone)]
pub struct HlAnalog<'a, F: FiniteField> {
    pub algebra: &'a PreprojAlgebra<F>,
    pub vertex: usize,
    pub degree: i64,
    pub dim_u: usize,
    pub blocks: Vec<HlBlock>,
}

impl<'a, F: FiniteField> HlAnalog<'a, F> {
    /// Groups arrows by neighbour (incoming arrows first), chooses the `n_i` when not given
    /// and splits `c` greedily from the left when not given. Blocks whose component
    /// vanishes contribute no products and are dropped.
    pub fn new(
        algebra: &'a PreprojAlgebra<F>,
        t: usize,
        d: i64,
        n: Option<&[usize]>,
        c: Option<&[usize]>,
    ) -> Result<Self> {
        if d <= 0 {
            return Err(Error::Profile("the degree must be positive".into()));
        }
        let dim_u = algebra.dim(t, d);
        if dim_u == 0 {
            return Err(Error::ZeroComponent { t: t + 1, d });
        }
        let q = algebra.quiver();
        let dq = algebra.doubled();
        let mut blocks: Vec<HlBlock> = Vec::new();
        let push = |vertex: usize, arrow: usize, degree: i64, blocks: &mut Vec<HlBlock>| match blocks
            .iter_mut()
            .find(|b| b.vertex == vertex && b.degree == degree)
        {
            Some(b) => b.arrows.push(arrow),
            None => blocks.push(HlBlock {
                vertex,
                arrows: vec![arrow],
                degree,
                dim_v: algebra.dim(vertex, degree),
                n: 0,
                c: 0,
            }),
        };
        for g in q.arrows_into(t) {
            push(q.arrows()[g].source, dq.star(g), d - 1, &mut blocks);
        }
        for g in q.arrows_from(t) {
            push(q.arrows()[g].target, g, d, &mut blocks);
        }
        blocks.retain(|b| b.dim_v > 0);

        let ns: Vec<usize> = match n {
            Some(n) => {
                if n.len() != blocks.len() {
                    return Err(Error::Profile(format!("{} values of n for {} blocks", n.len(), blocks.len())));
                }
                n.to_vec()
            }
            None => default_multiplicities(&blocks, dim_u)?,
        };
        for (b, &ni) in blocks.iter_mut().zip(&ns) {
            if ni < 1 || ni > b.dim_v {
                return Err(Error::Profile(format!("n = {ni} outside 1..={}", b.dim_v)));
            }
            b.n = ni;
        }
        let lower: usize = blocks.iter().map(|b| (b.n - 1) * b.dim_w()).sum();
        let upper: usize = blocks.iter().map(|b| b.n * b.dim_w()).sum();
        if !(lower < dim_u && dim_u <= upper) {
            return Err(Error::Profile(format!("need {lower} < {dim_u} <= {upper}")));
        }
        let total_c = dim_u - lower;
        match c {
            Some(c) => {
                if c.len() != blocks.len() || c.iter().sum::<usize>() != total_c {
                    return Err(Error::Profile(format!(
                        "the c_i must be {} values summing to {total_c}",
                        blocks.len()
                    )));
                }
                for (b, &ci) in blocks.iter_mut().zip(c) {
                    if ci > b.dim_w() {
                        return Err(Error::Profile(format!("c = {ci} exceeds {}", b.dim_w())));
                    }
                    b.c = ci;
                }
            }
            None => {
                let mut left = total_c;
                for b in &mut blocks {
                    b.c = left.min(b.dim_w());
                    left -= b.c;
                }
            }
        }
        Ok(HlAnalog { algebra, vertex: t, degree: d, dim_u, blocks })
    }

    /// Draws the `F_{i,k}` as coordinate vectors in the bases of their components.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Vec<Vec<F::Elem>>> {
        let f = self.algebra.field();
        self.blocks.iter().map(|b| (0..b.n).map(|_| (0..b.dim_v).map(|_| f.random(rng)).collect()).collect()).collect()
    }

    /// The listed products as columns of a `dim V^t_d × dim V^t_d` matrix.
    pub fn products(&self, factors: &[Vec<Vec<F::Elem>>]) -> Matrix<F> {
        let f = self.algebra.field();
        let target = self.algebra.component(self.vertex, self.degree);
        let mut out = Matrix::zeros(f, self.dim_u, self.dim_u);
        let mut col = 0;
        for (b, fs) in self.blocks.iter().zip(factors) {
            for (k, factor) in fs.iter().enumerate() {
                let js = if k + 1 < b.n { b.dim_w() } else { b.c };
                for &arrow in &b.arrows[..js] {
                    let mult = target.right_multiplication(arrow).expect("arrow leaves t");
                    for (r, x) in mult.mul_vec(factor).into_iter().enumerate() {
                        out.set(r, col, x);
                    }
                    col += 1;
                }
            }
        }
        debug_assert_eq!(col, self.dim_u);
        out
    }

    pub fn certify(&self, trials: u64, seed: u64) -> Certificate {
        let f = self.algebra.field();
        let parameters = json!({
            "t": self.vertex + 1,
            "d": self.degree,
            "dim": self.dim_u,
            "blocks": self.blocks.iter().map(|b| json!({
                "vertex": b.vertex + 1,
                "degree": b.degree,
                "dim_v": b.dim_v,
                "dim_w": b.dim_w(),
                "n": b.n,
                "c": b.c,
            })).collect::<Vec<_>>(),
        });
        let mut cert = Certificate::new("hl_analog", f.spec().to_string(), trials, seed, parameters);
        for trial in 0..trials {
            let mut rng = trial_rng(seed, trial, 0);
            let factors = self.sample(&mut rng);
            let passed = self.products(&factors).is_invertible();
            cert.record(trial, passed, || {
                json!(factors
                    .iter()
                    .map(|fs| fs.iter().map(|v| v.iter().map(|x| f.to_json(x)).collect::<Vec<_>>()).collect::<Vec<_>>())
                    .collect::<Vec<_>>())
            });
        }
        cert
    }
}

/// Raises the `n_i` round-robin from 1 until `Σ n_i dim W_i >= dim U`; the last increment
/// keeps `Σ (n_i − 1) dim W_i < dim U`.
fn default_multiplicities(blocks: &[HlBlock], dim_u: usize) -> Result<Vec<usize>> {
    let mut n = vec![1usize; blocks.len()];
    let mut upper: usize = blocks.iter().map(HlBlock::dim_w).sum();
    while upper < dim_u {
        let mut grew = false;
        for (i, b) in blocks.iter().enumerate() {
            if upper >= dim_u {
                break;
            }
            if n[i] < b.dim_v {
                n[i] += 1;
                upper += b.dim_w();
                grew = true;
            }
        }
        if !grew {
            return Err(Error::Profile(format!("no admissible n: at most {upper} products for dimension {dim_u}")));
        }
    }
    Ok(n)
}

pub fn hl_analog_basis<F: FiniteField>(
    algebra: &PreprojAlgebra<F>,
    t: usize,
    d: i64,
    n: Option<&[usize]>,
    c: Option<&[usize]>,
    trials: u64,
    seed: u64,
) -> Result<Certificate> {
    Ok(HlAnalog::new(algebra, t, d, n, c)?.certify(trials, seed))
}

/// Elements `m(i, j)` with a single 1: all positions of the first `n_i − 1` rows, then the
/// first `c_i` positions of row `n_i`.
pub fn unit_elements<F: Field>(field: &F, dim_v: usize, dim_w: usize, n: usize, c: usize) -> Vec<Matrix<F>> {
    let mut out = Vec::new();
    let unit = |r: usize, s: usize| {
        let mut m = Matrix::zeros(field, dim_v, dim_w);
        m.set(r, s, field.one());
        m
    };
    for r in 0..n.saturating_sub(1) {
        for s in 0..dim_w {
            out.push(unit(r, s));
        }
    }
    if n >= 1 {
        for s in 0..c {
            out.push(unit(n - 1, s));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::PrimeField;
    use crate::maxrank::tensor::Block;
    use crate::quiver::parse_quiver;

    #[test]
    fn zero_target_is_an_empty_basis() {
        let f = PrimeField::new(7).unwrap();
        let t = TensorSumMap::new(vec![Block::new(1, 1)], Direction::IntoU, Matrix::zeros(&f, 0, 1)).unwrap();
        let cert = generic_basis(&t, &[vec![]], 5, 1).unwrap();
        assert_eq!(cert.passes, 5);
    }

    #[test]
    fn a2_generic_basis_fails_only_when_phi_lands_in_span_b() {
        let f = PrimeField::new(3).unwrap();
        let t = TensorSumMap::new(vec![Block::new(2, 1)], Direction::IntoU, Matrix::from_i64(&f, &[&[-1, 0]])).unwrap();
        let m = Matrix::from_i64(&f, &[&[1], &[0]]);
        let cert = generic_basis(&t, &[vec![m]], 200, 9).unwrap();
        for trial in 0..200 {
            let mut rng = trial_rng(9, trial, 0);
            let phi = random_matrix(&f, 2, 2, &mut rng);
            // φ(e_1) lies in span{b} iff its first coordinate vanishes.
            let fails = *phi.get(0, 0) == 0;
            assert_eq!(cert.failing_trials.contains(&trial), fails);
        }
        assert!(generic_basis(&t, &[vec![]], 1, 1).is_err());
    }

    #[test]
    fn unit_element_layout() {
        let f = PrimeField::new(5).unwrap();
        let ms = unit_elements(&f, 3, 2, 2, 1);
        assert_eq!(ms.len(), 3);
        assert_eq!(*ms[2].get(1, 0), 1);
        assert!(unit_elements(&f, 3, 2, 1, 0).is_empty());
    }

    #[test]
    fn a2_hl_analog() {
        let (q, w) = parse_quiver("vertices 2\narrow b: 1 -> 2\n").unwrap();
        let f = PrimeField::new(3).unwrap();
        let alg = PreprojAlgebra::new(&q, &w, f).unwrap();
        let setup = HlAnalog::new(&alg, 1, 1, None, None).unwrap();
        assert_eq!(setup.blocks.len(), 1);
        assert_eq!((setup.blocks[0].n, setup.blocks[0].c, setup.blocks[0].dim_v), (1, 1, 2));
        // F = x·e_1 + y·b gives F·b* = x·b*.
        for x in 0..3u64 {
            for y in 0..3u64 {
                let m = setup.products(&[vec![vec![x, y]]]);
                assert_eq!(m.is_invertible(), x != 0);
            }
        }
        assert!(HlAnalog::new(&alg, 1, 1, Some(&[3]), None).is_err());
        assert!(HlAnalog::new(&alg, 0, 1, None, None).is_err());
    }
}
