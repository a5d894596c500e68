//! Analytic primitives: heat kernel, increment covariance triples, and the
//! `G` covariance function.
//!
//! For a d-dimensional fBm with Hurst index H, two path increments
//! `X = B_s - B_r` and `Y = B_s' - B_r'` have per-component variances
//! `lambda = |s-r|^{2H}`, `rho = |s'-r'|^{2H}` and covariance
//!
//! ```text
//! E(X_i Y_i) = (|s'-r|^{2H} + |s-r'|^{2H} - |s'-s|^{2H} - |r-r'|^{2H}) / 2.
//! ```
//!
//! The integration domain `{r < s, r' < s', r < r'}` splits into three
//! interleaving cases, each with its own gap coordinates `(a, b, c)` and a
//! closed form for the triple. `mu` denotes the magnitude of the covariance;
//! the signed value is kept alongside because odd powers of it enter every
//! variance integral.

use crate::error::{Error, Result};

/// Covariance of a one-dimensional fBm: `(s^{2H} + u^{2H} - |s-u|^{2H}) / 2`.
///
/// Symmetric in `(s, u)`; total for `s, u >= 0`.
pub fn exact_covariance(s: f64, u: f64, hurst: f64) -> f64 {
    let h2 = 2.0 * hurst;
    0.5 * (s.powf(h2) + u.powf(h2) - (s - u).abs().powf(h2))
}

/// Autocovariance of unit-spacing fractional Gaussian noise at lag `k`:
/// `gamma(k) = (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) / 2`, with `gamma(0) = 1`.
pub fn fgn_autocovariance(k: usize, hurst: f64) -> f64 {
    let h2 = 2.0 * hurst;
    if k == 0 {
        return 1.0;
    }
    let k = k as f64;
    0.5 * ((k + 1.0).powf(h2) - 2.0 * k.powf(h2) + (k - 1.0).powf(h2))
}

/// Centered Gaussian density with covariance `eps I` on R^d, evaluated at `x`:
/// `(2 pi eps)^{-d/2} exp(-|x|^2 / (2 eps))`. The dimension is `x.len()`.
pub fn heat_kernel(x: &[f64], eps: f64) -> f64 {
    debug_assert!(eps > 0.0);
    let d = x.len() as f64;
    let q: f64 = x.iter().map(|v| v * v).sum();
    (2.0 * std::f64::consts::PI * eps).powf(-0.5 * d) * (-q / (2.0 * eps)).exp()
}

/// Partial derivative of the heat kernel in the first coordinate:
/// `-(x_1 / eps) p_eps(x)`. Odd in `x_1`, zero at `x_1 = 0`.
pub fn heat_kernel_d1(x: &[f64], eps: f64) -> f64 {
    -(x[0] / eps) * heat_kernel(x, eps)
}

/// The three interleavings of `(r, s, r', s')` with `r < s`, `r' < s'`, `r < r'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainCase {
    /// `r < r' < s < s'`, gaps `a = r'-r`, `b = s-r'`, `c = s'-s`.
    D1,
    /// `r < r' < s' < s`, gaps `a = r'-r`, `b = s'-r'`, `c = s-s'`.
    D2,
    /// `r < s < r' < s'`, gaps `a = s-r`, `b = r'-s`, `c = s'-r'`.
    D3,
}

impl DomainCase {
    pub const ALL: [DomainCase; 3] = [DomainCase::D1, DomainCase::D2, DomainCase::D3];

    /// Reconstruct the quadruple `(r, s, r', s')` at offset `r` from gaps.
    pub fn quadruple(self, r: f64, p: SimplexPoint) -> (f64, f64, f64, f64) {
        let SimplexPoint { a, b, c } = p;
        match self {
            DomainCase::D1 => (r, r + a + b, r + a, r + a + b + c),
            DomainCase::D2 => (r, r + a + b + c, r + a, r + a + b),
            DomainCase::D3 => (r, r + a, r + a + b, r + a + b + c),
        }
    }
}

/// Gap coordinates `(a, b, c)` of one interleaving case; componentwise `>= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexPoint {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl SimplexPoint {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        debug_assert!(a >= 0.0 && b >= 0.0 && c >= 0.0);
        SimplexPoint { a, b, c }
    }
}

/// Variances and covariance of the two increments of one interleaving case.
///
/// `mu` is the covariance magnitude, so `mu <= sqrt(lambda rho)` always
/// (Cauchy-Schwarz); `mu_signed` keeps the sign, which matters for H < 1/2
/// where disjoint increments are negatively correlated.
#[derive(Debug, Clone, Copy)]
pub struct CovarianceTriple {
    pub lambda: f64,
    pub rho: f64,
    pub mu: f64,
    pub mu_signed: f64,
    pub case_tag: DomainCase,
}

/// Closed-form covariance triple of `case` at gaps `p`.
///
/// Case D1: `lambda = (a+b)^{2H}`, `rho = (b+c)^{2H}`,
///          `mu = ((a+b+c)^{2H} + b^{2H} - a^{2H} - c^{2H}) / 2`;
/// case D2: `lambda = (a+b+c)^{2H}`, `rho = b^{2H}`,
///          `mu = ((a+b)^{2H} + (b+c)^{2H} - a^{2H} - c^{2H}) / 2`;
/// case D3: `lambda = a^{2H}`, `rho = c^{2H}`, `mu = G(a+b, a, c)` signed.
pub fn covariance_triple(case: DomainCase, p: SimplexPoint, hurst: f64) -> CovarianceTriple {
    let h2 = 2.0 * hurst;
    let SimplexPoint { a, b, c } = p;
    let (lambda, rho, mu_signed) = match case {
        DomainCase::D1 => (
            (a + b).powf(h2),
            (b + c).powf(h2),
            0.5 * ((a + b + c).powf(h2) + b.powf(h2) - a.powf(h2) - c.powf(h2)),
        ),
        DomainCase::D2 => (
            (a + b + c).powf(h2),
            b.powf(h2),
            0.5 * ((a + b).powf(h2) + (b + c).powf(h2) - a.powf(h2) - c.powf(h2)),
        ),
        DomainCase::D3 => (
            a.powf(h2),
            c.powf(h2),
            0.5 * ((a + b + c).powf(h2) + b.powf(h2) - (a + b).powf(h2) - (b + c).powf(h2)),
        ),
    };
    CovarianceTriple {
        lambda,
        rho,
        mu: mu_signed.abs(),
        mu_signed,
        case_tag: case,
    }
}

/// `G(v, u1, u2) = |E(B_{u1} (B_{v+u2} - B_v))|`, evaluated in closed form as
/// `((v+u2)^{2H} - v^{2H} - |v+u2-u1|^{2H} + |v-u1|^{2H}| / 2|`.
pub fn g_function(v: f64, u1: f64, u2: f64, hurst: f64) -> f64 {
    g_signed(v, u1, u2, hurst).abs()
}

/// Signed version of [`g_function`]; negative for disjoint increments when
/// H < 1/2.
pub fn g_signed(v: f64, u1: f64, u2: f64, hurst: f64) -> f64 {
    let h2 = 2.0 * hurst;
    0.5 * ((v + u2).powf(h2) - v.powf(h2) - (v + u2 - u1).abs().powf(h2)
        + (v - u1).abs().powf(h2))
}

/// `det(eps I + Sigma) = (eps + lambda)(eps + rho) - mu^2`.
///
/// Signals `DegenerateGeometry` when the result is non-positive at eps > 0,
/// which indicates an invalid triple upstream.
pub fn det_sigma(eps: f64, triple: &CovarianceTriple) -> Result<f64> {
    let det = (eps + triple.lambda) * (eps + triple.rho) - triple.mu * triple.mu;
    if det <= 0.0 && eps > 0.0 {
        return Err(Error::DegenerateGeometry { eps, det });
    }
    Ok(det)
}
