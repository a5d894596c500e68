//! Exact synthesis of d-dimensional fractional Brownian motion on uniform
//! grids.
//!
//! Components are independent one-dimensional fBms. Increments on a grid of
//! spacing `dt` have covariance `dt^{2H} gamma(|i-j|)` with `gamma` the
//! unit-spacing fGn autocovariance, so synthesis reduces to stationary
//! Gaussian sampling: circulant embedding (Davies-Harte) when the embedding
//! spectrum is nonnegative, exact Cholesky factorization otherwise. Both
//! routes are exact in distribution; the covariance tests compare sampled
//! paths against [`kernel::exact_covariance`] directly.

use std::collections::HashMap;
use std::io::Write;
use std::sync::{Arc, OnceLock, RwLock};

use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::kernel::{self, fgn_autocovariance};
use crate::rng::stream_rng;

/// Default memory cap for the Cholesky fallback factor (bytes).
pub const DEFAULT_CHOLESKY_CAP_BYTES: u64 = 1 << 30;

/// Parameters of one fBm ensemble.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FbmConfig {
    /// Hurst index, in (0, 1).
    pub hurst: f64,
    /// Number of independent components.
    pub dim: usize,
    /// Time horizon t > 0.
    pub horizon: f64,
    /// Number of grid cells n >= 2; the grid has n + 1 points.
    pub steps: usize,
    /// Master seed; combined with a stream index per sampled path.
    pub seed: u64,
}

impl FbmConfig {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.hurst > 0.0 && self.hurst < 1.0) {
            problems.push(format!("hurst must lie in (0,1), got {}", self.hurst));
        }
        if self.dim < 1 {
            problems.push("dim must be >= 1".into());
        }
        if !(self.horizon > 0.0) {
            problems.push(format!("horizon must be > 0, got {}", self.horizon));
        }
        if self.steps < 2 {
            problems.push(format!("steps must be >= 2, got {}", self.steps));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::ConfigInvalid(problems))
        }
    }

    /// Grid spacing t / n.
    pub fn dt(&self) -> f64 {
        self.horizon / self.steps as f64
    }
}

/// How a path was synthesized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthesisMethod {
    CirculantEmbedding,
    /// Informational: the embedding spectrum had negative entries and the
    /// exact Cholesky route was used instead.
    CholeskyFallback,
}

/// One sampled path. `values(i, j)` is component j at grid point i; component
/// data is stored contiguously per component for the O(n^2) estimator pass.
#[derive(Debug, Clone)]
pub struct FbmPath {
    pub config: FbmConfig,
    /// n + 1 uniform times, `times[0] = 0`, `times[n] = horizon`.
    pub times: Vec<f64>,
    /// One vector of n + 1 values per component; `components[j][0] = 0`.
    pub components: Vec<Vec<f64>>,
    pub method: SynthesisMethod,
}

impl FbmPath {
    pub fn value(&self, grid_index: usize, component: usize) -> f64 {
        self.components[component][grid_index]
    }

    /// CSV dump: header `time,comp_0,...,comp_{d-1}`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "time")?;
        for j in 0..self.config.dim {
            write!(w, ",comp_{j}")?;
        }
        writeln!(w)?;
        for i in 0..self.times.len() {
            write!(w, "{:.16e}", self.times[i])?;
            for j in 0..self.config.dim {
                write!(w, ",{:.16e}", self.components[j][i])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

enum Factorization {
    /// sqrt(eigenvalue / (2 * 2n)) table of the size-2n circulant embedding.
    Spectrum(Vec<f64>),
    /// Lower-triangular Cholesky factor of the unit-spacing fGn covariance,
    /// row-major packed.
    Cholesky(Vec<f64>),
}

struct Synthesizer {
    factorization: Factorization,
}

type CacheKey = (u64, usize);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<Synthesizer>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<Synthesizer>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn fft_forward(len: usize) -> Arc<dyn rustfft::Fft<f64>> {
    static PLANS: OnceLock<RwLock<HashMap<usize, Arc<dyn rustfft::Fft<f64>>>>> = OnceLock::new();
    let plans = PLANS.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(p) = plans.read().unwrap().get(&len) {
        return p.clone();
    }
    let p = FftPlanner::new().plan_fft_forward(len);
    plans.write().unwrap().insert(len, p.clone());
    p
}

/// Eigenvalues of the circulant embedding of `gamma(0..=n)`, size 2n.
fn embedding_spectrum(hurst: f64, n: usize) -> Vec<f64> {
    let m = 2 * n;
    let mut row: Vec<Complex<f64>> = Vec::with_capacity(m);
    for k in 0..=n {
        row.push(Complex::new(fgn_autocovariance(k, hurst), 0.0));
    }
    for k in (1..n).rev() {
        row.push(Complex::new(fgn_autocovariance(k, hurst), 0.0));
    }
    fft_forward(m).process(&mut row);
    row.iter().map(|z| z.re).collect()
}

/// Cholesky factor of the n x n unit-spacing fGn covariance matrix.
fn fgn_cholesky(hurst: f64, n: usize, cap_bytes: u64) -> Result<Vec<f64>> {
    let needed = (n as u64) * (n as u64) * 8;
    if needed > cap_bytes {
        return Err(Error::GridTooLarge {
            steps: n,
            needed,
            cap: cap_bytes,
        });
    }
    let mut l = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = fgn_autocovariance(i - j, hurst);
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= 0.0 {
                    return Err(Error::DegenerateGeometry { eps: 0.0, det: sum });
                }
                l[i * n + i] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    Ok(l)
}

fn synthesizer(hurst: f64, steps: usize, cap_bytes: u64) -> Result<Arc<Synthesizer>> {
    let key = (hurst.to_bits(), steps);
    if let Some(s) = cache().read().unwrap().get(&key) {
        return Ok(s.clone());
    }
    let spectrum = embedding_spectrum(hurst, steps);
    let max_eig = spectrum.iter().cloned().fold(0.0f64, f64::max);
    // entries within rounding noise of zero are clamped; genuine negatives
    // invalidate the embedding
    let tol = -1e-11 * max_eig;
    let factorization = if spectrum.iter().all(|&e| e >= tol) {
        let m = 2 * steps;
        Factorization::Spectrum(
            spectrum
                .iter()
                .map(|&e| (e.max(0.0) / (2.0 * m as f64)).sqrt())
                .collect(),
        )
    } else {
        Factorization::Cholesky(fgn_cholesky(hurst, steps, cap_bytes)?)
    };
    let s = Arc::new(Synthesizer { factorization });
    cache().write().unwrap().insert(key, s.clone());
    Ok(s)
}

/// Sample one path. Deterministic in `(config.seed, stream_index)`; safe to
/// call concurrently (the factorization cache is read-mostly).
pub fn sample_path(config: &FbmConfig, stream_index: u64) -> Result<FbmPath> {
    sample_path_capped(config, stream_index, DEFAULT_CHOLESKY_CAP_BYTES)
}

/// [`sample_path`] with an explicit memory cap for the Cholesky fallback.
pub fn sample_path_capped(
    config: &FbmConfig,
    stream_index: u64,
    cap_bytes: u64,
) -> Result<FbmPath> {
    config.validate()?;
    let n = config.steps;
    let synth = synthesizer(config.hurst, n, cap_bytes)?;
    let dt = config.dt();
    let scale = dt.powf(config.hurst);

    let times: Vec<f64> = (0..=n).map(|i| i as f64 * dt).collect();
    let mut components = Vec::with_capacity(config.dim);
    for component in 0..config.dim {
        let mut rng = stream_rng(config.seed, "fbm-path", &[stream_index, component as u64]);
        let fgn = match &synth.factorization {
            Factorization::Spectrum(sqrt_eig) => sample_fgn_spectral(sqrt_eig, n, &mut rng),
            Factorization::Cholesky(l) => sample_fgn_cholesky(l, n, &mut rng),
        };
        let mut path = Vec::with_capacity(n + 1);
        path.push(0.0);
        let mut acc = 0.0;
        for g in fgn {
            acc += g * scale;
            path.push(acc);
        }
        components.push(path);
    }

    let method = match &synth.factorization {
        Factorization::Spectrum(_) => SynthesisMethod::CirculantEmbedding,
        Factorization::Cholesky(_) => SynthesisMethod::CholeskyFallback,
    };
    Ok(FbmPath {
        config: *config,
        times,
        components,
        method,
    })
}

/// Davies-Harte synthesis from the precomputed sqrt-eigenvalue table.
fn sample_fgn_spectral(sqrt_eig: &[f64], n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let m = 2 * n;
    debug_assert_eq!(sqrt_eig.len(), m);
    let mut w = vec![Complex::new(0.0, 0.0); m];
    let g0: f64 = rng.sample(StandardNormal);
    let gn: f64 = rng.sample(StandardNormal);
    w[0] = Complex::new(2f64.sqrt() * sqrt_eig[0] * g0, 0.0);
    w[n] = Complex::new(2f64.sqrt() * sqrt_eig[n] * gn, 0.0);
    for k in 1..n {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        w[k] = Complex::new(sqrt_eig[k] * re, sqrt_eig[k] * im);
        w[m - k] = w[k].conj();
    }
    fft_forward(m).process(&mut w);
    w[..n].iter().map(|z| z.re).collect()
}

fn sample_fgn_cholesky(l: &[f64], n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let mut out = vec![0.0f64; n];
    for i in 0..n {
        let row = &l[i * n..i * n + i + 1];
        out[i] = row.iter().zip(&z).map(|(a, b)| a * b).sum();
    }
    out
}

/// Sample covariance of `paths_count` draws against the exact covariance,
/// returned as the maximum deviation in units of per-entry standard error.
/// Test helper shared by unit and acceptance tests.
pub fn covariance_deviation_in_se(config: &FbmConfig, paths_count: usize) -> Result<f64> {
    let n = config.steps;
    let d = config.dim;
    let npts = n + 1;
    let mut sums = vec![0.0f64; npts * npts];
    let mut cross = 0.0f64;
    for rep in 0..paths_count {
        let path = sample_path(config, rep as u64)?;
        for j in 0..d {
            let comp = &path.components[j];
            for i in 0..npts {
                for k in 0..=i {
                    sums[i * npts + k] += comp[i] * comp[k];
                }
            }
        }
        if d >= 2 {
            cross += path.components[0][n] * path.components[1][n];
        }
    }
    let nsamples = (paths_count * d) as f64;
    let mut worst: f64 = 0.0;
    for i in 1..npts {
        for k in 1..=i {
            let exact = kernel::exact_covariance(path_time(config, i), path_time(config, k), config.hurst);
            let cii = kernel::exact_covariance(path_time(config, i), path_time(config, i), config.hurst);
            let ckk = kernel::exact_covariance(path_time(config, k), path_time(config, k), config.hurst);
            // Var of a sample covariance entry of centered Gaussians
            let se = ((cii * ckk + exact * exact) / nsamples).sqrt();
            let emp = sums[i * npts + k] / nsamples;
            worst = worst.max((emp - exact).abs() / se);
        }
    }
    if d >= 2 {
        let var_t = kernel::exact_covariance(config.horizon, config.horizon, config.hurst);
        let se = var_t / (paths_count as f64).sqrt();
        worst = worst.max((cross / paths_count as f64).abs() / se);
    }
    Ok(worst)
}

fn path_time(config: &FbmConfig, i: usize) -> f64 {
    i as f64 * config.dt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn config(hurst: f64, dim: usize, steps: usize) -> FbmConfig {
        FbmConfig {
            hurst,
            dim,
            horizon: 1.0,
            steps,
            seed: 0xD51,
        }
    }

    #[test]
    fn validation_catches_bad_fields() {
        assert!(config(0.5, 2, 8).validate().is_ok());
        assert!(config(0.0, 2, 8).validate().is_err());
        assert!(config(1.0, 2, 8).validate().is_err());
        assert!(config(0.5, 2, 1).validate().is_err());
        let mut c = config(0.5, 2, 8);
        c.horizon = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn paths_start_at_zero_with_uniform_times() {
        let c = config(0.7, 3, 16);
        let p = sample_path(&c, 0).unwrap();
        assert_eq!(p.times.len(), 17);
        assert_eq!(p.times[0], 0.0);
        assert_relative_eq!(p.times[16], 1.0);
        for j in 0..3 {
            assert_eq!(p.value(0, j), 0.0);
        }
        let dt = p.times[1] - p.times[0];
        for i in 1..17 {
            assert_relative_eq!(p.times[i] - p.times[i - 1], dt, epsilon = 1e-15);
        }
    }

    #[test]
    fn identical_seed_and_stream_is_bit_identical() {
        let c = config(0.45, 2, 32);
        let a = sample_path(&c, 5).unwrap();
        let b = sample_path(&c, 5).unwrap();
        assert_eq!(a.components, b.components);
        let other = sample_path(&c, 6).unwrap();
        assert_ne!(a.components, other.components);
    }

    #[test]
    fn two_step_variance_matches_definition() {
        // steps = 2, Var(values[1][j]) = (t/2)^{2H} empirically
        let c = config(0.6, 1, 2);
        let n = 20000;
        let mut sum_sq = 0.0;
        for rep in 0..n {
            let p = sample_path(&c, rep as u64).unwrap();
            sum_sq += p.value(1, 0) * p.value(1, 0);
        }
        let emp = sum_sq / n as f64;
        let exact = 0.5f64.powf(1.2);
        let se = exact * (2.0 / n as f64).sqrt();
        assert!(
            (emp - exact).abs() < 4.0 * se,
            "empirical {emp} vs exact {exact} (se {se})"
        );
    }

    #[test]
    fn brownian_lag_one_increment_correlation_vanishes() {
        let c = config(0.5, 1, 8);
        let n = 20000;
        let mut s01 = 0.0;
        let mut s0 = 0.0;
        let mut s1 = 0.0;
        for rep in 0..n {
            let p = sample_path(&c, rep as u64).unwrap();
            let x = &p.components[0];
            let d0 = x[1] - x[0];
            let d1 = x[2] - x[1];
            s01 += d0 * d1;
            s0 += d0 * d0;
            s1 += d1 * d1;
        }
        let corr = s01 / (s0.sqrt() * s1.sqrt());
        assert!(corr.abs() < 4.0 / (n as f64).sqrt(), "corr = {corr}");
    }

    #[test]
    fn empirical_covariance_matches_exact_h075() {
        let c = config(0.75, 2, 8);
        let worst = covariance_deviation_in_se(&c, 8000).unwrap();
        assert!(worst < 4.0, "worst deviation {worst} se");
    }

    #[test]
    fn empirical_covariance_matches_exact_h03() {
        let c = config(0.3, 2, 8);
        let worst = covariance_deviation_in_se(&c, 8000).unwrap();
        assert!(worst < 4.0, "worst deviation {worst} se");
    }

    #[test]
    fn components_are_uncorrelated() {
        let c = config(0.7, 2, 4);
        let n = 20000usize;
        let mut cross = 0.0;
        let mut v0 = 0.0;
        let mut v1 = 0.0;
        for rep in 0..n {
            let p = sample_path(&c, rep as u64).unwrap();
            let a = p.value(4, 0);
            let b = p.value(4, 1);
            cross += a * b;
            v0 += a * a;
            v1 += b * b;
        }
        let r = cross / (v0.sqrt() * v1.sqrt());
        assert!(r.abs() < 4.0 / (n as f64).sqrt(), "cross-correlation {r}");
    }

    #[test]
    fn cholesky_route_matches_spectral_distribution() {
        // force the fallback by sampling with a tiny cap... the cap guards the
        // factor allocation, so instead call the internal routine directly and
        // compare second moments of both routes on a small grid.
        let n = 8;
        let h = 0.75;
        let l = fgn_cholesky(h, n, u64::MAX).unwrap();
        let sqrt_eig = {
            let spec = embedding_spectrum(h, n);
            spec.iter().map(|&e| (e.max(0.0) / (4.0 * n as f64)).sqrt()).collect::<Vec<_>>()
        };
        let reps = 30000;
        let mut var_spec = 0.0;
        let mut var_chol = 0.0;
        for rep in 0..reps {
            let mut r1 = stream_rng(1, "a", &[rep]);
            let mut r2 = stream_rng(2, "b", &[rep]);
            let s = sample_fgn_spectral(&sqrt_eig, n, &mut r1);
            let c = sample_fgn_cholesky(&l, n, &mut r2);
            let ss: f64 = s.iter().sum();
            let cs: f64 = c.iter().sum();
            var_spec += ss * ss;
            var_chol += cs * cs;
        }
        var_spec /= reps as f64;
        var_chol /= reps as f64;
        // both must estimate Var(B_n) = n^{2H}
        let exact = (n as f64).powf(2.0 * h);
        let se = exact * (2.0 / reps as f64).sqrt();
        assert!((var_spec - exact).abs() < 4.0 * se, "spectral {var_spec} vs {exact}");
        assert!((var_chol - exact).abs() < 4.0 * se, "cholesky {var_chol} vs {exact}");
    }

    #[test]
    fn grid_too_large_signal() {
        let err = fgn_cholesky(0.75, 1024, 1024).unwrap_err();
        assert!(matches!(err, Error::GridTooLarge { .. }));
    }

    #[test]
    fn csv_dump_shape() {
        let c = config(0.5, 2, 4);
        let p = sample_path(&c, 0).unwrap();
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "time,comp_0,comp_1");
        assert_eq!(lines.count(), 5);
    }
}
