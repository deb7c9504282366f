//! Perron value and vector of a connected graph, plus the Rayleigh quotient
//! toolkit used to bound how far `ϱ(y)` can sit from an eigenvalue.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("graph is not connected")]
    NotConnected,
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("zero vector")]
    ZeroVector,
    #[error("vector length {got} does not match graph order {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("probe is orthogonal to the eigenvector; tangent undefined")]
    OrthogonalProbe,
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Stop once `‖Av − ϱ(v)v‖₂` falls to this value.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Added to the diagonal while iterating.
    pub shift: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 100_000,
            shift: 1.0,
        }
    }
}

impl SolverConfig {
    pub fn new(tolerance: f64, max_iterations: usize, shift: f64) -> Result<Self, SpectralError> {
        let cfg = Self {
            tolerance,
            max_iterations,
            shift,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), SpectralError> {
        if !(self.tolerance > 0.0) {
            return Err(SpectralError::InvalidConfig("tolerance must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(SpectralError::InvalidConfig(
                "max_iterations must be at least 1",
            ));
        }
        if !(self.shift >= 0.0) {
            return Err(SpectralError::InvalidConfig("shift must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub rho: f64,
    /// Unit Perron vector, entrywise positive.
    pub v: Vec<f64>,
    /// `‖v‖₁`.
    pub entry_sum: f64,
    pub iterations: usize,
    pub residual_norm: f64,
}

impl SpectralResult {
    pub fn s_squared(&self) -> f64 {
        self.entry_sum * self.entry_sum
    }
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

fn check_len(g: &Graph, y: &[f64]) -> Result<(), SpectralError> {
    if y.len() != g.n() {
        return Err(SpectralError::LengthMismatch {
            expected: g.n(),
            got: y.len(),
        });
    }
    Ok(())
}

/// Power iteration on `A + shift·I` from the all-ones direction.
pub fn perron(g: &Graph, cfg: &SolverConfig) -> Result<SpectralResult, SpectralError> {
    cfg.validate()?;
    if !g.is_connected() {
        return Err(SpectralError::NotConnected);
    }
    let n = g.n();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut ax = vec![0.0; n];
    let mut residual = vec![0.0; n];
    let mut iterations = 0;
    loop {
        g.adjacency_apply(&x, &mut ax);
        let rho = dot(&x, &ax);
        for ((r, &a), &xi) in residual.iter_mut().zip(&ax).zip(&x) {
            *r = a - rho * xi;
        }
        let residual_norm = norm(&residual);
        if residual_norm <= cfg.tolerance {
            let entry_sum = x.iter().sum();
            return Ok(SpectralResult {
                rho,
                v: x,
                entry_sum,
                iterations,
                residual_norm,
            });
        }
        if iterations == cfg.max_iterations {
            return Err(SpectralError::NoConvergence {
                iterations,
                residual: residual_norm,
            });
        }
        for (xi, &a) in x.iter_mut().zip(&ax) {
            *xi = a + cfg.shift * *xi;
        }
        let scale = norm(&x);
        x.iter_mut().for_each(|xi| *xi /= scale);
        iterations += 1;
    }
}

/// Largest adjacency eigenvalue of a graph that may be disconnected: the
/// maximum Perron value over its components.
pub fn spectral_radius(g: &Graph, cfg: &SolverConfig) -> Result<f64, SpectralError> {
    if g.m() == 0 {
        return Ok(0.0);
    }
    let mut best: f64 = 0.0;
    for comp in g.components() {
        if comp.len() < 2 {
            continue;
        }
        let h = g
            .induced_subgraph(&comp)
            .expect("component vertices are in range");
        best = best.max(perron(&h, cfg)?.rho);
    }
    Ok(best)
}

/// Deterministic start vectors for the `λ_min` iteration. Sign patterns
/// vary with `seed` so a restart lands on a different subspace.
fn probe_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut state = 0x9e37_79b9_7f4a_7c15u64 ^ seed.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    (0..n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect()
}

fn deflate(x: &mut [f64], v: &[f64]) {
    let c = dot(x, v);
    x.iter_mut().zip(v).for_each(|(xi, vi)| *xi -= c * vi);
}

/// Smallest adjacency eigenvalue via power iteration on `ρI − A`, with the
/// Perron direction projected out at every step.
pub fn lambda_min(
    g: &Graph,
    reference: &SpectralResult,
    cfg: &SolverConfig,
) -> Result<f64, SpectralError> {
    cfg.validate()?;
    check_len(g, &reference.v)?;
    let n = g.n();
    if n == 1 {
        return Ok(0.0);
    }
    let rho = reference.rho;
    let v = &reference.v;
    let mut ax = vec![0.0; n];
    let mut seed = 0;
    let mut x = loop {
        let mut x = probe_vector(n, seed);
        deflate(&mut x, v);
        let len = norm(&x);
        if len > 1e-3 {
            x.iter_mut().for_each(|xi| *xi /= len);
            break x;
        }
        seed += 1;
    };
    let mut iterations = 0;
    loop {
        // y = (ρI − A) x
        g.adjacency_apply(&x, &mut ax);
        let mut y: Vec<f64> = x.iter().zip(&ax).map(|(xi, a)| rho * xi - a).collect();
        deflate(&mut y, v);
        let mu = dot(&x, &y);
        let residual: f64 = y
            .iter()
            .zip(&x)
            .map(|(yi, xi)| (yi - mu * xi).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= cfg.tolerance {
            return Ok(rho - mu);
        }
        if iterations == cfg.max_iterations {
            return Err(SpectralError::NoConvergence {
                iterations,
                residual,
            });
        }
        let len = norm(&y);
        if len < 1e-300 {
            // x lay in the kernel of ρI − A off the Perron direction: restart
            seed += 1;
            y = probe_vector(n, seed);
            deflate(&mut y, v);
            let len = norm(&y);
            y.iter_mut().for_each(|yi| *yi /= len);
        } else {
            y.iter_mut().for_each(|yi| *yi /= len);
        }
        x = y;
        iterations += 1;
    }
}

/// `yᵀAy / yᵀy`.
pub fn rayleigh_quotient(g: &Graph, y: &[f64]) -> Result<f64, SpectralError> {
    check_len(g, y)?;
    let yy = dot(y, y);
    if yy == 0.0 {
        return Err(SpectralError::ZeroVector);
    }
    let mut ay = vec![0.0; y.len()];
    g.adjacency_apply(y, &mut ay);
    Ok(dot(y, &ay) / yy)
}

/// `r(y) = Ay − ϱ(y)y`.
pub fn residual(g: &Graph, y: &[f64]) -> Result<Vec<f64>, SpectralError> {
    let q = rayleigh_quotient(g, y)?;
    let mut ay = vec![0.0; y.len()];
    g.adjacency_apply(y, &mut ay);
    Ok(ay.iter().zip(y).map(|(a, yi)| a - q * yi).collect())
}

/// `|⟨x,y⟩| / (‖x‖₂‖y‖₂)`, clamped to `[0, 1]`.
pub fn angle_cos(x: &[f64], y: &[f64]) -> Result<f64, SpectralError> {
    if x.len() != y.len() {
        return Err(SpectralError::LengthMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let (nx, ny) = (norm(x), norm(y));
    if nx == 0.0 || ny == 0.0 {
        return Err(SpectralError::ZeroVector);
    }
    Ok((dot(x, y).abs() / (nx * ny)).min(1.0))
}

/// `(λ_max − λ_min)·sin²∠`.
pub fn a_priori_bound(lambda_max: f64, lambda_min: f64, angle_cos: f64) -> f64 {
    (lambda_max - lambda_min) * (1.0 - angle_cos * angle_cos).max(0.0)
}

/// `(‖r(y)‖/‖y‖)·tan∠`.
pub fn a_posteriori_bound(residual_ratio: f64, angle_cos: f64) -> Result<f64, SpectralError> {
    if angle_cos <= 0.0 {
        return Err(SpectralError::OrthogonalProbe);
    }
    let sin = (1.0 - angle_cos * angle_cos).max(0.0).sqrt();
    Ok(residual_ratio * sin / angle_cos)
}

/// Everything the eigenvalue error bounds need about a probe `y` measured
/// against an eigenvector `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayleighData {
    pub quotient: f64,
    pub residual: Vec<f64>,
    pub angle_cos: f64,
    pub lambda_max: f64,
    pub lambda_min: f64,
}

impl RayleighData {
    pub fn new(
        g: &Graph,
        eigenvector: &[f64],
        probe: &[f64],
        lambda_max: f64,
        lambda_min: f64,
    ) -> Result<Self, SpectralError> {
        Ok(Self {
            quotient: rayleigh_quotient(g, probe)?,
            residual: residual(g, probe)?,
            angle_cos: angle_cos(eigenvector, probe)?,
            lambda_max,
            lambda_min,
        })
    }

    /// `‖r(y)‖ / ‖y‖` for the probe this was built from.
    pub fn residual_ratio(&self, probe: &[f64]) -> f64 {
        norm(&self.residual) / norm(probe)
    }

    pub fn a_priori(&self) -> f64 {
        a_priori_bound(self.lambda_max, self.lambda_min, self.angle_cos)
    }

    pub fn a_posteriori(&self, probe: &[f64]) -> Result<f64, SpectralError> {
        a_posteriori_bound(self.residual_ratio(probe), self.angle_cos)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(g: &Graph) -> SpectralResult {
        perron(g, &SolverConfig::default()).unwrap()
    }

    #[test]
    fn biclique_perron_value() {
        for (p, q) in [(2, 3), (1, 4), (3, 7)] {
            let sr = solve(&Graph::complete_bipartite(p, q).unwrap());
            assert!((sr.rho - ((p * q) as f64).sqrt()).abs() < 1e-9);
        }
        let sr = solve(&Graph::complete_bipartite(2, 3).unwrap());
        assert!((sr.rho - 2.449490).abs() < 1e-6);
    }

    #[test]
    fn harmonic_family_has_rho_three() {
        for k in 3..=12 {
            let sr = solve(&Graph::harmonic_tk(k).unwrap());
            assert!((sr.rho - 3.0).abs() < 1e-9, "k={k}: {}", sr.rho);
        }
    }

    #[test]
    fn regular_graphs() {
        for g in [Graph::cycle(7).unwrap(), Graph::complete(5).unwrap()] {
            let sr = solve(&g);
            let n = g.n() as f64;
            assert!((sr.rho - g.max_degree() as f64).abs() < 1e-12);
            assert!(sr.v.iter().all(|&x| (x - 1.0 / n.sqrt()).abs() < 1e-12));
            assert!((sr.s_squared() - n).abs() < 1e-9);
        }
    }

    #[test]
    fn result_invariants() {
        let g = Graph::pineapple(9, 4).unwrap();
        let sr = solve(&g);
        assert!((norm(&sr.v) - 1.0).abs() < 1e-12);
        assert!(sr.v.iter().all(|&x| x > 0.0));
        assert!(sr.residual_norm <= 1e-12);
        let s2 = sr.s_squared();
        assert!(s2 >= 1.0 && s2 <= g.n() as f64);
    }

    #[test]
    fn single_vertex() {
        let sr = solve(&Graph::empty(1).unwrap());
        assert_eq!((sr.rho, sr.v.clone(), sr.entry_sum), (0.0, vec![1.0], 1.0));
        let lm = lambda_min(&Graph::empty(1).unwrap(), &sr, &SolverConfig::default()).unwrap();
        assert_eq!(lm, 0.0);
    }

    #[test]
    fn errors() {
        let g = Graph::from_edge_list("4\n0 1\n2 3").unwrap();
        assert_eq!(
            perron(&g, &SolverConfig::default()),
            Err(SpectralError::NotConnected)
        );
        let tight = SolverConfig {
            max_iterations: 2,
            ..Default::default()
        };
        assert!(matches!(
            perron(&Graph::path(30).unwrap(), &tight),
            Err(SpectralError::NoConvergence { iterations: 2, .. })
        ));
        assert!(SolverConfig::new(0.0, 10, 1.0).is_err());
        assert!(SolverConfig::new(1e-9, 0, 1.0).is_err());
        assert!(SolverConfig::new(1e-9, 10, -1.0).is_err());
    }

    #[test]
    fn unshifted_iteration_stalls_on_bipartite_graphs() {
        let cfg = SolverConfig {
            shift: 0.0,
            max_iterations: 500,
            ..Default::default()
        };
        assert!(perron(&Graph::path(3).unwrap(), &cfg).is_err());
        assert!(perron(&Graph::path(3).unwrap(), &SolverConfig::default()).is_ok());
    }

    #[test]
    fn deterministic() {
        let g = Graph::cone(&Graph::path(20).unwrap());
        assert_eq!(solve(&g), solve(&g));
    }

    #[test]
    fn spectral_radius_of_disconnected_graph() {
        let g = Graph::path(3)
            .unwrap()
            .disjoint_union(&Graph::complete(4).unwrap());
        let r = spectral_radius(&g, &SolverConfig::default()).unwrap();
        assert!((r - 3.0).abs() < 1e-10);
        assert_eq!(
            spectral_radius(&Graph::empty(5).unwrap(), &SolverConfig::default()),
            Ok(0.0)
        );
    }

    #[test]
    fn smallest_eigenvalue() {
        let cfg = SolverConfig::default();
        for (p, q) in [(2, 3), (3, 3), (1, 5)] {
            let g = Graph::complete_bipartite(p, q).unwrap();
            let lm = lambda_min(&g, &solve(&g), &cfg).unwrap();
            assert!(
                (lm + ((p * q) as f64).sqrt()).abs() < 1e-8,
                "K{p},{q}: {lm}"
            );
        }
        for n in 2..8 {
            let g = Graph::complete(n).unwrap();
            let lm = lambda_min(&g, &solve(&g), &cfg).unwrap();
            assert!((lm + 1.0).abs() < 1e-8, "K{n}: {lm}");
        }
    }

    #[test]
    fn rayleigh_quotient_basics() {
        let g = Graph::complete_bipartite(2, 3).unwrap();
        let ones = vec![1.0; 5];
        assert!((rayleigh_quotient(&g, &ones).unwrap() - 2.4).abs() < 1e-15);
        let sr = solve(&g);
        assert!((rayleigh_quotient(&g, &sr.v).unwrap() - sr.rho).abs() < 1e-12);
        let y = [0.3, -1.2, 2.0, 0.7, 0.1];
        let y2: Vec<f64> = y.iter().map(|x| 2.0 * x).collect();
        assert!(
            (rayleigh_quotient(&g, &y).unwrap() - rayleigh_quotient(&g, &y2).unwrap()).abs()
                < 1e-14
        );
        assert_eq!(
            rayleigh_quotient(&g, &[0.0; 5]),
            Err(SpectralError::ZeroVector)
        );
        assert!(matches!(
            rayleigh_quotient(&g, &[1.0; 4]),
            Err(SpectralError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn residual_of_ones_is_centered_degrees() {
        let g = Graph::complete_bipartite(2, 3).unwrap();
        let r = residual(&g, &[1.0; 5]).unwrap();
        for (got, want) in r.iter().zip([0.6, 0.6, -0.4, -0.4, -0.4]) {
            assert!((got - want).abs() < 1e-14);
        }
        let sr = solve(&g);
        assert!(norm(&residual(&g, &sr.v).unwrap()) < 1e-11);
        let y = [0.3, -1.2, 2.0, 0.7, 0.1];
        assert!(dot(&residual(&g, &y).unwrap(), &y).abs() < 1e-13);
    }

    #[test]
    fn angles() {
        let g = Graph::pineapple(7, 3).unwrap();
        let sr = solve(&g);
        let c = angle_cos(&sr.v, &[1.0; 7]).unwrap();
        assert!((c - sr.entry_sum / 7f64.sqrt()).abs() < 1e-14);
        assert!((angle_cos(&[1.0, 2.0], &[1.0, 2.0]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(angle_cos(&[1.0, 0.0], &[0.0, 3.0]).unwrap(), 0.0);
        assert_eq!(
            angle_cos(&[0.0, 0.0], &[0.0, 3.0]),
            Err(SpectralError::ZeroVector)
        );
    }

    #[test]
    fn eigenvalue_error_bounds() {
        assert_eq!(a_priori_bound(3.0, -2.0, 1.0), 0.0);
        assert_eq!(a_priori_bound(2.0, 2.0, 0.3), 0.0);
        assert_eq!(a_posteriori_bound(0.0, 0.5).unwrap(), 0.0);
        assert_eq!(a_posteriori_bound(1.7, 1.0).unwrap(), 0.0);
        assert_eq!(
            a_posteriori_bound(1.0, 0.0),
            Err(SpectralError::OrthogonalProbe)
        );

        let g = Graph::complete_bipartite(2, 3).unwrap();
        let sr = solve(&g);
        let lm = lambda_min(&g, &sr, &SolverConfig::default()).unwrap();
        let ones = vec![1.0; 5];
        let data = RayleighData::new(&g, &sr.v, &ones, sr.rho, lm).unwrap();
        let gap = (sr.rho - data.quotient).abs();
        assert!((gap - 0.049490).abs() < 1e-6);
        // both bounds are attained on bicliques
        assert!(data.a_priori() >= gap - 1e-12);
        assert!((data.a_priori() - gap).abs() < 1e-9);
        assert!(data.a_posteriori(&ones).unwrap() >= gap - 1e-12);
    }
}
