//! Gauss–Legendre and Gauss–Laguerre rules, cached per node count.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and weights of an `n`-point rule.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss–Legendre rule on `[-1, 1]`, exact for polynomials of degree `2n - 1`.
pub fn legendre_rule(n: usize) -> Arc<Rule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Rule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.lock().unwrap().get(&n) {
        return rule.clone();
    }
    let rule = Arc::new(build_legendre(n));
    cache.lock().unwrap().insert(n, rule.clone());
    rule
}

/// Legendre value and derivative by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn build_legendre(n: usize) -> Rule {
    assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for k in 0..n.div_ceil(2) {
        let mut x = (PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_pair(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_pair(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[k] = -x;
        nodes[n - 1 - k] = x;
        weights[k] = w;
        weights[n - 1 - k] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

/// Gauss–Laguerre rule for `∫_0^∞ F(x) dx`.
///
/// The stored weights are `w_k e^{x_k}`, so the rule is applied to `F`
/// directly rather than to `F e^{x}`; this keeps large nodes from overflowing.
pub fn laguerre_rule(n: usize) -> Arc<Rule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Rule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.lock().unwrap().get(&n) {
        return rule.clone();
    }
    let rule = Arc::new(build_laguerre(n));
    cache.lock().unwrap().insert(n, rule.clone());
    rule
}

/// Double-double value `hi + lo`, enough to keep the Laguerre recurrence at full precision.
#[derive(Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        Dd { hi: s, lo: lo - (s - hi) }
    }

    fn sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        Dd { hi: s, lo: (a - (s - bb)) + (b - bb) }
    }

    fn add(self, other: Dd) -> Self {
        let s = Dd::sum(self.hi, other.hi);
        Dd::renorm(s.hi, s.lo + self.lo + other.lo)
    }

    fn mul(self, other: Dd) -> Self {
        let p = self.hi * other.hi;
        let e = self.hi.mul_add(other.hi, -p);
        Dd::renorm(p, e + self.hi * other.lo + self.lo * other.hi)
    }

    fn scale(self, c: f64) -> Self {
        self.mul(Dd::new(c))
    }

    fn div(self, c: f64) -> Self {
        let q1 = self.hi / c;
        let r = self.add(Dd::new(q1).scale(-c));
        Dd::renorm(q1, r.hi / c)
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// `(L_n(x), L_{n-1}(x), log scale)` with periodic rescaling of the recurrence.
fn laguerre_scaled(n: usize, x: f64) -> (f64, f64, f64) {
    if n == 0 {
        return (1.0, 0.0, 0.0);
    }
    let (mut p0, mut p1) = (Dd::new(1.0), Dd::sum(1.0, -x));
    let mut log_scale = 0.0;
    for k in 1..n {
        let a = Dd::sum((2 * k + 1) as f64, -x).mul(p1);
        let p2 = a.add(p0.scale(-(k as f64))).div((k + 1) as f64);
        p0 = p1;
        p1 = p2;
        if p1.hi.abs() > 1e100 {
            p0 = p0.scale(1e-100);
            p1 = p1.scale(1e-100);
            log_scale += 100.0 * std::f64::consts::LN_10;
        }
    }
    (p1.value(), p0.value(), log_scale)
}

fn build_laguerre(n: usize) -> Rule {
    assert!(n >= 1, "Gauss–Laguerre rule needs at least one node");
    // Golub–Welsch for starting values, Newton to polish.
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            (2 * i + 1) as f64
        } else if i + 1 == j || j + 1 == i {
            i.max(j) as f64
        } else {
            0.0
        }
    });
    let mut guesses: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    guesses.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for mut x in guesses {
        for _ in 0..20 {
            let (p, q, _) = laguerre_scaled(n, x);
            let dp = n as f64 * (p - q) / x;
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, q, log_scale) = laguerre_scaled(n, x);
        // w = x / (n L_{n-1}(x))²
        let weight = if log_scale == 0.0 {
            x / (n as f64 * q).powi(2) * x.exp()
        } else {
            let log_w = x.ln() - 2.0 * (n as f64).ln() - 2.0 * (q.abs().ln() + log_scale);
            (log_w + x).exp()
        };
        nodes.push(x);
        weights.push(weight);
    }
    // Guard against the last few ulps so Σ w e^{-x} = 1.
    let total: f64 = nodes.iter().zip(&weights).map(|(x, w)| w * (-x).exp()).sum();
    weights.iter_mut().for_each(|w| *w /= total);
    Rule { nodes, weights }
}
