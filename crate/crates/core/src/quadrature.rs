//! Hermite functions and Gauss-Hermite quadrature in the scaled form
//! `∫ g(x) dx ≈ (1/N) Σ_k g(x_k) / ψ_{N-1}(x_k)^2`, exact for `g = poly · e^{-x²}`
//! of degree up to `2N - 1`.

use nalgebra::DMatrix;

const RESCALE: f64 = 1e100;

/// Normalized Hermite functions `ψ_n(x_k)`, `n < count`, as a `nodes x count` matrix.
pub fn hermite_functions(nodes: &[f64], count: usize) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(nodes.len(), count);
    for (k, &x) in nodes.iter().enumerate() {
        let (vals, logs) = scaled_recurrence(x, count);
        for n in 0..count {
            out[(k, n)] = vals[n] * logs[n].exp();
        }
    }
    out
}

/// Values `p_n` and log-scales `s_n` with `ψ_n(x) = p_n e^{s_n}`, so that no
/// intermediate quantity over- or underflows far out on the real line.
fn scaled_recurrence(x: f64, count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut vals = Vec::with_capacity(count);
    let mut logs = Vec::with_capacity(count);
    if count == 0 {
        return (vals, logs);
    }
    let mut log_scale = -0.5 * x * x - 0.25 * std::f64::consts::PI.ln();
    let mut prev = 0.0;
    let mut cur = 1.0;
    vals.push(cur);
    logs.push(log_scale);
    for n in 0..count - 1 {
        let nf = n as f64;
        let next = x * (2.0 / (nf + 1.0)).sqrt() * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += RESCALE.ln();
        }
        vals.push(cur);
        logs.push(log_scale);
    }
    (vals, logs)
}

/// Number of eigenvalues of the Hermite Jacobi matrix below `x`
/// (zero diagonal, off-diagonal `sqrt(k/2)`), by Sturm sequence.
fn count_below(x: f64, n: usize) -> usize {
    let mut count = 0;
    let mut q = -x;
    if q < 0.0 {
        count += 1;
    }
    for k in 1..n {
        let b2 = k as f64 / 2.0;
        let denom = if q == 0.0 { f64::EPSILON } else { q };
        q = -x - b2 / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gauss-Hermite nodes (ascending, exactly symmetric) together with the
/// ratios `ψ_n(x_k) / ψ_{N-1}(x_k)` for `n < count`, stored `count x N`.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    ratios: DMatrix<f64>,
}

impl GaussHermite {
    pub fn new(n_nodes: usize, count: usize) -> Self {
        assert!(n_nodes >= 1, "at least one node");
        let n = n_nodes;
        let bound = (2.0 * n as f64 + 1.0).sqrt() + 1.0;
        let first_positive = n / 2 + n % 2; // index of the first root > 0 (or = 0 for odd n)
        let mut positive = Vec::with_capacity(n / 2);
        for idx in first_positive..n {
            if n % 2 == 1 && idx == n / 2 {
                continue;
            }
            // root number `idx` (0-based) lies where count_below jumps from idx to idx + 1
            let (mut lo, mut hi) = (0.0, bound);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if count_below(mid, n) > idx {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= 4.0 * f64::EPSILON * hi {
                    break;
                }
            }
            positive.push(newton_polish(0.5 * (lo + hi), n));
        }
        let mut nodes: Vec<f64> = positive.iter().rev().map(|x| -x).collect();
        if n % 2 == 1 {
            nodes.push(0.0);
        }
        nodes.extend(&positive);

        let mut ratios = DMatrix::zeros(count, n);
        for (k, &x) in nodes.iter().enumerate() {
            let (vals, logs) = scaled_recurrence(x, count.max(n));
            let (pl, sl) = (vals[n - 1], logs[n - 1]);
            for m in 0..count {
                ratios[(m, k)] = vals[m] / pl * (logs[m] - sl).exp();
            }
        }
        GaussHermite { nodes, ratios }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫ ψ_m f ψ_n dx` for all `m, n < count`. Mirror-image nodes are summed
    /// in pairs, so entries whose integrand is odd vanish exactly.
    pub fn matrix_elements(&self, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let count = self.ratios.nrows();
        let n = self.len();
        let fx: Vec<f64> = self.nodes.iter().map(|&x| f(x)).collect();
        let mut out = DMatrix::zeros(count, count);
        let half = n / 2;
        for m in 0..count {
            for q in m..count {
                let term = |k: usize| self.ratios[(m, k)] * self.ratios[(q, k)] * fx[k];
                let mut s = if n % 2 == 1 { term(half) } else { 0.0 };
                // nodes[n-1-j] = -nodes[j]; add small-magnitude pairs first
                for j in (0..half).rev() {
                    s += term(j) + term(n - 1 - j);
                }
                let v = s / n as f64;
                out[(m, q)] = v;
                out[(q, m)] = v;
            }
        }
        out
    }
}

fn newton_polish(mut x: f64, n: usize) -> f64 {
    for _ in 0..3 {
        let (vals, logs) = scaled_recurrence(x, n + 1);
        // ψ_N' = sqrt(2N) ψ_{N-1} - x ψ_N = sqrt(2N) ψ_{N-1} at a root
        let ratio = vals[n] / vals[n - 1] * (logs[n] - logs[n - 1]).exp();
        let step = ratio / (2.0 * n as f64).sqrt();
        if !step.is_finite() {
            break;
        }
        x -= step;
        if step.abs() <= f64::EPSILON * x.abs() {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_values_at_origin() {
        let v = hermite_functions(&[0.0], 3);
        assert!((v[(0, 0)] - 0.7511255445).abs() < 1e-10);
        assert_eq!(v[(0, 1)], 0.0);
        // ψ_2(0) = -π^{-1/4} / sqrt(2)
        assert!((v[(0, 2)] + 0.7511255444649425 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn nodes_match_small_closed_forms() {
        // H_2 roots ±1/sqrt2; H_3 roots 0, ±sqrt(3/2)
        let g2 = GaussHermite::new(2, 2);
        assert!((g2.nodes[1] - 0.5f64.sqrt()).abs() < 1e-15);
        let g3 = GaussHermite::new(3, 3);
        assert_eq!(g3.nodes[1], 0.0);
        assert!((g3.nodes[2] - 1.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gram_matrix_is_identity() {
        let m = 32;
        let g = GaussHermite::new(4 * m + 50, m);
        let gram = g.matrix_elements(|_| 1.0);
        let err = (gram - DMatrix::<f64>::identity(m, m)).amax();
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn sine_matrix_element() {
        let g = GaussHermite::new(100, 8);
        let s = g.matrix_elements(f64::sin);
        let exact = (-0.25f64).exp() / 2f64.sqrt();
        assert!((s[(0, 1)] - exact).abs() < 1e-13);
        for i in 0..8 {
            for j in 0..8 {
                if (i + j) % 2 == 0 {
                    assert_eq!(s[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn many_nodes_do_not_underflow() {
        let g = GaussHermite::new(1200, 4);
        assert!(g.nodes.iter().all(|x| x.is_finite()));
        let gram = g.matrix_elements(|_| 1.0);
        assert!((gram - DMatrix::<f64>::identity(4, 4)).amax() < 1e-12);
    }
}
