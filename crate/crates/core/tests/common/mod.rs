//! Shared helpers for the integration tests, including an independent dimension oracle.
//!
//! The oracle deliberately does not use the library: it reads the quiver file with its own
//! minimal reader and predicts `dim V^t_d` from integer Cartan and Coxeter matrices.

#![allow(dead_code)]

use std::path::PathBuf;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture_path(name: &str) -> PathBuf {
    fixtures_dir().join(format!("{name}.quiver"))
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).expect("fixture exists")
}

pub const A3: [&str; 4] = ["a3_rr", "a3_rl", "a3_lr", "a3_ll"];
pub const D4: [&str; 8] = ["d4_iii", "d4_iio", "d4_ioi", "d4_ioo", "d4_oii", "d4_oio", "d4_ooi", "d4_ooo"];

/// Every shipped fixture except the single vertex.
pub fn all_fixtures() -> Vec<&'static str> {
    let mut v = vec!["a2"];
    v.extend(A3);
    v.extend(D4);
    v.push("kronecker");
    v
}

pub fn dynkin_fixtures() -> Vec<&'static str> {
    let mut v = vec!["a2"];
    v.extend(A3);
    v.extend(D4);
    v
}

/// Vertex count and arrows `(source, target)` (0-based) read from a quiver file.
pub fn read_edges(text: &str) -> (usize, Vec<(usize, usize)>) {
    let mut n = 0;
    let mut edges = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap().trim();
        if let Some(rest) = line.strip_prefix("vertices") {
            n = rest.trim().parse().unwrap();
        } else if let Some(rest) = line.strip_prefix("arrow") {
            let ends = rest.split(':').nth(1).unwrap();
            let mut it = ends.split("->").map(|v| v.trim().parse::<usize>().unwrap() - 1);
            edges.push((it.next().unwrap(), it.next().unwrap()));
        }
    }
    (n, edges)
}

type IMat = Vec<Vec<i64>>;

fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn matmul(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    let m = b[0].len();
    (0..n).map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn transpose(a: &IMat) -> IMat {
    (0..a[0].len()).map(|j| (0..a.len()).map(|i| a[i][j]).collect()).collect()
}

fn add(a: &IMat, b: &IMat) -> IMat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

fn scale(a: &IMat, c: i64) -> IMat {
    a.iter().map(|r| r.iter().map(|x| c * x).collect()).collect()
}

/// `Σ_{k<n} N^k` for nilpotent `N`.
fn geometric(nil: &IMat) -> IMat {
    let n = nil.len();
    let mut acc = identity(n);
    let mut power = identity(n);
    for _ in 1..n.max(1) {
        power = matmul(&power, nil);
        acc = add(&acc, &power);
    }
    acc
}

/// Cartan matrix: entry `(i, j)` counts paths from `i` to `j` (row `i` is `dim P(i)`).
pub fn cartan(n: usize, edges: &[(usize, usize)]) -> IMat {
    let mut adj = vec![vec![0i64; n]; n];
    for &(s, t) in edges {
        adj[s][t] += 1;
    }
    geometric(&adj)
}

/// Dimension vectors of `τ^{-d} P(t)` for `d = 0..=max_d`, via `x ↦ x·Φ^{-1}` with
/// `Φ^{-1} = −C^{-T} C`, stopping (zeros afterwards) once a vector is not positive.
pub fn coxeter_dim_vectors(n: usize, edges: &[(usize, usize)], max_d: usize) -> Vec<Vec<Vec<i64>>> {
    let c = cartan(n, edges);
    // C = 1 + N with N nilpotent, so C^{-1} = Σ (−N)^k.
    let minus_nil = add(&scale(&c, -1), &identity(n));
    let c_inv = geometric(&minus_nil);
    let phi_inv = scale(&matmul(&transpose(&c_inv), &c), -1);
    (0..n)
        .map(|t| {
            let mut out = Vec::new();
            let mut x = c[t].clone();
            let mut alive = true;
            for _ in 0..=max_d {
                if alive && x.iter().all(|&v| v >= 0) && x.iter().any(|&v| v > 0) {
                    out.push(x.clone());
                } else {
                    alive = false;
                    out.push(vec![0; n]);
                }
                x = matmul(&vec![x], &phi_inv).remove(0);
            }
            out
        })
        .collect()
}

/// `dims[t][d]` predicted by the Coxeter oracle.
pub fn coxeter_dims(text: &str, max_d: usize) -> Vec<Vec<usize>> {
    let (n, edges) = read_edges(text);
    coxeter_dim_vectors(n, &edges, max_d)
        .into_iter()
        .map(|row| row.into_iter().map(|v| v.iter().sum::<i64>() as usize).collect())
        .collect()
}

pub mod instances;
