//! Shared numerical routines: Gauss-Hermite quadrature, adaptive Simpson
//! integration, and bounded one-dimensional minimization.

use std::sync::OnceLock;

const LN_2PI: f64 = 1.8378770664093453;
pub(crate) const SQRT_PI: f64 = 1.7724538509055159;

/// Log density of N(mean, var) at x. `var` must be strictly positive.
pub(crate) fn gaussian_log_pdf(x: f64, mean: f64, var: f64) -> f64 {
    let d = x - mean;
    -0.5 * (LN_2PI + var.ln() + d * d / var)
}

/// Log density of a finite Gaussian mixture at x. Zero-weight components are
/// skipped; evaluation is a log-sum-exp over component log densities.
pub(crate) fn mixture_log_pdf(weights: &[f64], means: &[f64], vars: &[f64], x: f64) -> f64 {
    let mut max_term = f64::NEG_INFINITY;
    for i in 0..weights.len() {
        if weights[i] > 0.0 {
            let t = weights[i].ln() + gaussian_log_pdf(x, means[i], vars[i]);
            if t > max_term {
                max_term = t;
            }
        }
    }
    if max_term == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut sum = 0.0;
    for i in 0..weights.len() {
        if weights[i] > 0.0 {
            let t = weights[i].ln() + gaussian_log_pdf(x, means[i], vars[i]);
            sum += (t - max_term).exp();
        }
    }
    max_term + sum.ln()
}

/// A quadrature rule for integrals of the form `∫ f(z) exp(-z^2) dz`.
pub(crate) struct HermiteRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Nodes and weights of the n-point Gauss-Hermite rule (physicists'
/// convention, weights sum to sqrt(pi)), by the Golub-Welsch method: the
/// nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix of
/// the Hermite recurrence (zero diagonal, off-diagonal sqrt(i/2)), and each
/// weight is sqrt(pi) times the squared first component of the associated
/// eigenvector. The eigenproblem is solved with the implicit-shift QL
/// algorithm, carrying only the first row of the eigenvector matrix.
fn hermite_rule(n: usize) -> HermiteRule {
    assert!(n >= 2);
    let mut diag = vec![0.0_f64; n];
    let mut off = vec![0.0_f64; n];
    for i in 1..n {
        off[i - 1] = (i as f64 / 2.0).sqrt();
    }
    let mut first_row = vec![0.0_f64; n];
    first_row[0] = 1.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 50, "QL iteration failed to converge");
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                f = first_row[i + 1];
                first_row[i + 1] = s * first_row[i] + c * f;
                first_row[i] = c * first_row[i] - s * f;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| diag[a].partial_cmp(&diag[b]).unwrap());
    let nodes: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let weights: Vec<f64> = order
        .iter()
        .map(|&i| SQRT_PI * first_row[i] * first_row[i])
        .collect();
    HermiteRule { nodes, weights }
}

pub(crate) fn hermite_128() -> &'static HermiteRule {
    static RULE: OnceLock<HermiteRule> = OnceLock::new();
    RULE.get_or_init(|| hermite_rule(128))
}

pub(crate) fn hermite_256() -> &'static HermiteRule {
    static RULE: OnceLock<HermiteRule> = OnceLock::new();
    RULE.get_or_init(|| hermite_rule(256))
}

/// `∫ N(mean, var)(x) f(x) dx` by the given Gauss-Hermite rule.
pub(crate) fn gauss_hermite_expect<F: Fn(f64) -> f64>(
    rule: &HermiteRule,
    mean: f64,
    var: f64,
    f: &F,
) -> f64 {
    let scale = (2.0 * var).sqrt();
    let mut acc = 0.0;
    for (&z, &w) in rule.nodes.iter().zip(rule.weights.iter()) {
        acc += w * f(mean + scale * z);
    }
    acc / SQRT_PI
}

fn simpson_segment(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_segment(fa, flm, fm, a, m);
    let right = simpson_segment(fm, frm, fb, m, b);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance `tol`.
pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson_segment(fa, fm, fb, a, b);
    adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 52)
}

/// Golden-section minimization of a unimodal f on [a, b]. Returns (x, f(x)).
pub(crate) fn golden_section_min<F: Fn(f64) -> f64>(
    f: &F,
    mut a: f64,
    mut b: f64,
    xtol: f64,
) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    if b < a {
        std::mem::swap(&mut a, &mut b);
    }
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..300 {
        if b - a <= xtol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Bounded line minimization: a coarse scan brackets the minimum, golden
/// section polishes it. Robust to mild multimodality, unlike bare golden
/// section.
pub(crate) fn line_min<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, xtol: f64) -> (f64, f64) {
    if hi <= lo {
        return (lo, f(lo));
    }
    const SCAN: usize = 17;
    let step = (hi - lo) / (SCAN - 1) as f64;
    let mut best_i = 0;
    let mut best = f64::INFINITY;
    for i in 0..SCAN {
        let v = f(lo + step * i as f64);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let a = lo + step * best_i.saturating_sub(1) as f64;
    let b = (lo + step * (best_i + 1) as f64).min(hi);
    let (x, fx) = golden_section_min(f, a, b, xtol);
    if fx <= best {
        (x, fx)
    } else {
        (lo + step * best_i as f64, best)
    }
}

/// Bounded line maximization via `line_min` on the negated function.
pub(crate) fn line_max<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, xtol: f64) -> (f64, f64) {
    let (x, neg) = line_min(&|t| -f(t), lo, hi, xtol);
    (x, -neg)
}
