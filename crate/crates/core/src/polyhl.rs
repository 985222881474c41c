//! The commutative baseline: generic forms of degree `d` in `k[x_1, …, x_r]` times the
//! variables span `R_{d+1}` in the expected pattern.

use std::collections::HashMap;

use rand::Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactlinalg::{trial_rng, Field, FiniteField, Matrix};
use crate::maxrank::Certificate;

/// `N(r, d) = C(r + d − 1, d)`, the number of monomials of degree `d` in `r` variables.
pub fn n_of(r: usize, d: usize) -> usize {
    assert!(r >= 1, "at least one variable");
    let mut acc: u128 = 1;
    for i in 1..=d as u128 {
        acc = acc * (r as u128 - 1 + i) / i;
    }
    usize::try_from(acc).expect("monomial count fits in usize")
}

/// Exponent vectors of degree `d` in `r` variables, lexicographically descending
/// (`x_1^d` first).
pub fn monomials(r: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(r: usize, d: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == r {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(r, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(r, d, &mut Vec::new(), &mut out);
    out
}

/// `k[x_1, …, x_r]` with dense coefficient vectors per degree.
#[derive(Debug, Clone)]
pub struct GradedPolyRing<F: Field> {
    field: F,
    r: usize,
    index: Vec<Vec<Vec<usize>>>,
    lookup: Vec<HashMap<Vec<usize>, usize>>,
}

/// A homogeneous polynomial: coefficients over the monomials of its degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<F: Field> {
    pub degree: usize,
    pub coeffs: Vec<F::Elem>,
}

impl<F: Field> GradedPolyRing<F> {
    pub fn new(field: F, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidInput("the ring needs at least one variable".into()));
        }
        Ok(GradedPolyRing { field, r, index: Vec::new(), lookup: Vec::new() })
    }

    pub fn variables(&self) -> usize {
        self.r
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    fn ensure(&mut self, d: usize) {
        while self.index.len() <= d {
            let ms = monomials(self.r, self.index.len());
            self.lookup.push(ms.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect());
            self.index.push(ms);
        }
    }

    pub fn monomials(&mut self, d: usize) -> &[Vec<usize>] {
        self.ensure(d);
        &self.index[d]
    }

    pub fn dim(&self, d: usize) -> usize {
        n_of(self.r, d)
    }

    pub fn zero(&self, d: usize) -> Poly<F> {
        Poly { degree: d, coeffs: vec![self.field.zero(); self.dim(d)] }
    }

    /// The variable `x_{j+1}`.
    pub fn variable(&mut self, j: usize) -> Poly<F> {
        let mut e = vec![0; self.r];
        e[j] = 1;
        self.ensure(1);
        let mut p = self.zero(1);
        p.coeffs[self.lookup[1][&e]] = self.field.one();
        p
    }

    pub fn random<R: Rng + ?Sized>(&self, d: usize, rng: &mut R) -> Poly<F>
    where
        F: FiniteField,
    {
        Poly { degree: d, coeffs: (0..self.dim(d)).map(|_| self.field.random(rng)).collect() }
    }

    /// Product by adding exponent vectors.
    pub fn mul(&mut self, p: &Poly<F>, q: &Poly<F>) -> Poly<F> {
        let d = p.degree + q.degree;
        self.ensure(d);
        let mut out = self.zero(d);
        for (i, a) in p.coeffs.iter().enumerate() {
            if self.field.is_zero(a) {
                continue;
            }
            for (j, b) in q.coeffs.iter().enumerate() {
                if self.field.is_zero(b) {
                    continue;
                }
                let e: Vec<usize> =
                    self.index[p.degree][i].iter().zip(&self.index[q.degree][j]).map(|(x, y)| x + y).collect();
                let k = self.lookup[d][&e];
                out.coeffs[k] = self.field.add(&out.coeffs[k], &self.field.mul(a, b));
            }
        }
        out
    }
}

/// The unique `(n, s)` with `(n − 1)r < N(r, d+1) <= nr` and `s = N(r, d+1) − (n − 1)r`.
pub fn hl_parameters(r: usize, d: usize) -> (usize, usize) {
    let big_n = n_of(r, d + 1);
    let n = big_n.div_ceil(r);
    (n, big_n - (n - 1) * r)
}

/// The products `x_j F_i` (`i < n`, all `j`) and `x_j F_n` (`j <= s`) as columns.
pub fn hl_products<F: Field>(ring: &mut GradedPolyRing<F>, forms: &[Poly<F>], s: usize) -> Matrix<F> {
    let r = ring.variables();
    let d = forms.first().map_or(0, |f| f.degree);
    let size = ring.dim(d + 1);
    let vars: Vec<Poly<F>> = (0..r).map(|j| ring.variable(j)).collect();
    let mut cols = Vec::new();
    for (i, form) in forms.iter().enumerate() {
        let js = if i + 1 < forms.len() { r } else { s };
        for x in &vars[..js] {
            cols.push(ring.mul(x, form).coeffs);
        }
    }
    Matrix::from_rows(ring.field(), size, cols).transpose()
}

pub fn check_hl<F: FiniteField>(field: &F, r: usize, d: usize, trials: u64, seed: u64) -> Result<Certificate> {
    if d < 2 {
        return Err(Error::InvalidInput("the form degree must be at least 2".into()));
    }
    let mut ring = GradedPolyRing::new(field.clone(), r)?;
    let (n, s) = hl_parameters(r, d);
    let parameters = json!({ "r": r, "d": d, "N": n_of(r, d + 1), "n": n, "s": s });
    let mut cert = Certificate::new("hl_poly", field.spec().to_string(), trials, seed, parameters);
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial, 0);
        let forms: Vec<Poly<F>> = (0..n).map(|_| ring.random(d, &mut rng)).collect();
        let passed = hl_products(&mut ring, &forms, s).is_invertible();
        cert.record(trial, passed, || {
            json!(forms
                .iter()
                .map(|p| p.coeffs.iter().map(|c| field.to_json(c)).collect::<Vec<_>>())
                .collect::<Vec<_>>())
        });
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::PrimeField;
    use proptest::prelude::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(n_of(1, 7), 1);
        assert_eq!(n_of(2, 2), 3);
        assert_eq!(n_of(3, 3), 10);
        assert_eq!(n_of(4, 0), 1);
        assert_eq!(monomials(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        for (r, d) in [(1, 3), (3, 4), (4, 2)] {
            assert_eq!(monomials(r, d).len(), n_of(r, d));
        }
    }

    #[test]
    fn parameters() {
        assert_eq!(hl_parameters(2, 2), (2, 2));
        assert_eq!(hl_parameters(3, 2), (4, 1));
        assert_eq!(hl_parameters(1, 5), (1, 1));
    }

    #[test]
    fn single_variable_needs_nonzero_form() {
        let f = PrimeField::new(5).unwrap();
        let mut ring = GradedPolyRing::new(f, 1).unwrap();
        for c in 0..5u64 {
            let m = hl_products(&mut ring, &[Poly { degree: 2, coeffs: vec![c] }], 1);
            assert_eq!(m.is_invertible(), c != 0);
        }
    }

    #[test]
    fn multiplication_adds_exponents() {
        let f = PrimeField::new(7).unwrap();
        let mut ring = GradedPolyRing::new(f, 2).unwrap();
        let x = ring.variable(0);
        let y = ring.variable(1);
        let xy = ring.mul(&x, &y);
        assert_eq!(xy.coeffs, vec![0, 1, 0]);
    }

    #[test]
    fn certificates_pass_for_small_cases() {
        let f = PrimeField::new(65521).unwrap();
        let c = check_hl(&f, 2, 2, 20, 7).unwrap();
        assert_eq!(c.passes, 20);
        assert!(check_hl(&f, 2, 1, 1, 1).is_err());
    }

    proptest! {
        #[test]
        fn parameters_satisfy_inequalities(r in 1usize..6, d in 2usize..6) {
            let (n, s) = hl_parameters(r, d);
            let big_n = n_of(r, d + 1);
            prop_assert!((n - 1) * r < big_n && big_n <= n * r);
            prop_assert!((1..=r).contains(&s));
            prop_assert_eq!((n - 1) * r + s, big_n);
        }

        #[test]
        fn multiplication_commutes(r in 1usize..4, d1 in 0usize..3, d2 in 0usize..3, seed in any::<u64>()) {
            let f = PrimeField::new(101).unwrap();
            let mut ring = GradedPolyRing::new(f, r).unwrap();
            let mut rng = trial_rng(seed, 0, 0);
            let p = ring.random(d1, &mut rng);
            let q = ring.random(d2, &mut rng);
            prop_assert_eq!(ring.mul(&p, &q), ring.mul(&q, &p));
        }
    }
}
