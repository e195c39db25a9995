#![allow(dead_code)]

use fastcons_core::rng::SeededRng;
use fastcons_core::{Graph, GainVector, Matrix, SystemConfig};
use proptest::prelude::*;

pub fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 128,
        ..ProptestConfig::default()
    }
}

/// Random connected graph with `2..=max_nodes` nodes.
pub fn connected_graph(max_nodes: usize) -> impl Strategy<Value = Graph> {
    (2..=max_nodes, 0.0..0.6f64, any::<bool>(), any::<u64>()).prop_map(|(n, p, weighted, seed)| {
        Graph::random_connected(n, p, weighted, &mut SeededRng::new(seed, 0)).unwrap()
    })
}

pub fn system(max_order: usize) -> impl Strategy<Value = SystemConfig> {
    (1..=max_order, 0.05..1.0f64).prop_map(|(n, tau)| SystemConfig::new(n, tau).unwrap())
}

pub fn gains(n: usize, mag: f64) -> impl Strategy<Value = GainVector> {
    prop::collection::vec(-mag..mag, n).prop_map(GainVector::new)
}

pub fn state(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0..5.0f64, len)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// `A` built entry by entry, without the library's constructors.
pub fn plain_a(cfg: &SystemConfig) -> Matrix {
    let n = cfg.order();
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            1.0
        } else if j == i + 1 {
            cfg.tau()
        } else {
            0.0
        }
    })
}

/// `BK` as an `n × n` matrix: only the last row is nonzero.
pub fn plain_bk(cfg: &SystemConfig, k: &GainVector) -> Matrix {
    let n = cfg.order();
    Matrix::from_fn(n, n, |i, j| if i == n - 1 { cfg.tau() * k[j] } else { 0.0 })
}

/// Dense Laplacian straight from the edge list: `D − W`.
pub fn plain_laplacian(g: &Graph) -> Matrix {
    let n = g.node_count();
    let mut l = Matrix::zeros(n, n);
    for e in g.edges() {
        l[(e.i, e.j)] -= e.weight;
        l[(e.j, e.i)] -= e.weight;
        l[(e.i, e.i)] += e.weight;
        l[(e.j, e.j)] += e.weight;
    }
    l
}

/// Characteristic polynomial `det(zI − M)` by Faddeev–LeVerrier, leading 1.
pub fn faddeev_leverrier(m: &Matrix) -> Vec<f64> {
    let n = m.rows();
    let mut coeffs = vec![1.0];
    let mut mk = Matrix::zeros(n, n);
    for k in 1..=n {
        let prev_c = *coeffs.last().unwrap();
        let mut next = m.matmul(&mk);
        for i in 0..n {
            next[(i, i)] += prev_c;
        }
        let am = m.matmul(&next);
        let trace: f64 = (0..n).map(|i| am[(i, i)]).sum();
        coeffs.push(-trace / k as f64);
        mk = next;
    }
    coeffs
}

pub fn pascal(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let mut row = vec![1.0f64];
    for _ in 0..n {
        let mut next = vec![1.0; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row[k]
}

/// `det(zI − M)` by the Leibniz expansion over permutations, with polynomial
/// entries (coefficients highest degree first).
pub fn leibniz_char_poly(m: &Matrix) -> Vec<f64> {
    let n = m.rows();
    let entry = |i: usize, j: usize| -> Vec<f64> {
        if i == j {
            vec![1.0, -m[(i, j)]]
        } else {
            vec![-m[(i, j)]]
        }
    };
    let mut total = vec![0.0; n + 1];
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        if (0..n).any(|i| i != p[i] && m[(i, p[i])] == 0.0) {
            return;
        }
        let sign = inversion_sign(p);
        let term = (0..n).fold(vec![1.0], |acc, i| fastcons_core::stability::poly_mul(&acc, &entry(i, p[i])));
        let offset = n + 1 - term.len();
        for (t, c) in total[offset..].iter_mut().zip(&term) {
            *t += sign * c;
        }
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

fn inversion_sign(p: &[usize]) -> f64 {
    let inversions = (0..p.len())
        .flat_map(|i| ((i + 1)..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}
