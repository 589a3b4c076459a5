//! Dense symmetric eigenvalues in floating point: Householder
//! tridiagonalization followed by implicit-shift QL, eigenvalues only.
//! Used by the Monte Carlo instruments (Kolmogorov-Smirnov comparisons and
//! the float counting mode); every certified path in this crate is exact and
//! does not come through here.

use crate::graph::Graph;

/// Eigenvalues of a real symmetric matrix (lower triangle read), ascending.
pub fn symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    if n == 0 {
        return Vec::new();
    }
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n];
    tred(&mut a, &mut d, &mut e);
    tql(&mut d, &mut e);
    d.sort_by(|x, y| x.partial_cmp(y).unwrap());
    d
}

/// Adjacency eigenvalues of a graph, ascending.
pub fn adjacency_eigenvalues_f64(g: &Graph) -> Vec<f64> {
    let n = g.vertex_count();
    let mut a = vec![vec![0.0f64; n]; n];
    for u in 0..n {
        for v in g.neighbors(u) {
            a[u][v] = 1.0;
        }
    }
    symmetric_eigenvalues(a)
}

/// Householder reduction to tridiagonal form (diagonal `d`, subdiagonal `e`),
/// no eigenvector accumulation.
fn tred(a: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) {
    let n = a.len();
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += a[i][k].abs();
            }
            if scale == 0.0 {
                e[i] = a[i][l];
            } else {
                for k in 0..=l {
                    a[i][k] /= scale;
                    h += a[i][k] * a[i][k];
                }
                let f = a[i][l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i][l] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    let mut g_acc = 0.0;
                    for k in 0..=j {
                        g_acc += a[j][k] * a[i][k];
                    }
                    for k in j + 1..=l {
                        g_acc += a[k][j] * a[i][k];
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * a[i][j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[i][j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j][k] -= f * e[k] + g * a[i][k];
                    }
                }
            }
        } else {
            e[i] = a[i][l];
        }
        d[i] = h;
    }
    e[0] = 0.0;
    for i in 0..n {
        d[i] = a[i][i];
    }
}

/// Implicit-shift QL on a tridiagonal (d, e); eigenvalues land in `d`.
fn tql(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    if n <= 1 {
        return;
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 64, "QL iteration did not converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let denom = g + if g >= 0.0 { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / denom;
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                let t = (d[i] - g) * s + 2.0 * c * b;
                p = s * t;
                d[i + 1] = g + p;
                g = c * t - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn path_eigenvalues_are_cosines() {
        let n = 12;
        let got = adjacency_eigenvalues_f64(&Graph::path(n));
        let mut want: Vec<f64> = (1..=n)
            .map(|k| 2.0 * (PI * k as f64 / (n as f64 + 1.0)).cos())
            .collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-10, "{g} vs {w}");
        }
    }

    #[test]
    fn cycle_eigenvalues() {
        let n = 9;
        let got = adjacency_eigenvalues_f64(&Graph::cycle(n));
        let mut want: Vec<f64> = (0..n)
            .map(|k| 2.0 * (2.0 * PI * k as f64 / n as f64).cos())
            .collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-10);
        }
    }

    #[test]
    fn traces_match_on_a_fixed_matrix() {
        // symmetric 5x5 with known trace identities
        let a = vec![
            vec![2.0, 1.0, 0.0, 3.0, -1.0],
            vec![1.0, 0.0, 2.0, 0.0, 1.0],
            vec![0.0, 2.0, -2.0, 1.0, 0.0],
            vec![3.0, 0.0, 1.0, 1.0, 2.0],
            vec![-1.0, 1.0, 0.0, 2.0, 4.0],
        ];
        let trace: f64 = (0..5).map(|i| a[i][i]).sum();
        let frob: f64 = (0..5)
            .flat_map(|i| (0..5).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let ev = symmetric_eigenvalues(a);
        let s1: f64 = ev.iter().sum();
        let s2: f64 = ev.iter().map(|x| x * x).sum();
        assert!((s1 - trace).abs() < 1e-9);
        assert!((s2 - frob).abs() < 1e-8);
    }

    #[test]
    fn star_spectrum() {
        // K_{1,3}: eigenvalues -sqrt3, 0, 0, sqrt3
        let ev = adjacency_eigenvalues_f64(&Graph::star(3));
        assert!((ev[0] + 3f64.sqrt()).abs() < 1e-12);
        assert!(ev[1].abs() < 1e-12 && ev[2].abs() < 1e-12);
        assert!((ev[3] - 3f64.sqrt()).abs() < 1e-12);
    }
}
