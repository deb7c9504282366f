//! Lower bounds on `S² = ‖v‖₁²` for the unit Perron vector `v`.
//!
//! Three routes are available: the clique-number bound, the exact value for
//! harmonic graphs, and the entry bound at a universal vertex of a cone.
//! Each is sound only when fed consistent inputs, e.g. a lower bound on `ρ`
//! and an upper bound on `ρ_H`.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::spectral::{self, SolverConfig, SpectralError, SpectralResult};

/// Largest order accepted by [`clique_number`].
pub const MAX_CLIQUE_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum S2Error {
    #[error("clique bound needs omega >= 2, got {omega}")]
    WilfInapplicable { omega: usize },
    #[error("spectral radius must be positive, got {0}")]
    NonPositiveRho(f64),
    #[error("graph is not harmonic")]
    NotHarmonic,
    #[error("need rho > rho_H, got rho = {rho}, rho_H = {rho_h}")]
    InconsistentRadii { rho: f64, rho_h: f64 },
    #[error("vertex {vertex} is not universal")]
    NotUniversal { vertex: usize },
    #[error("vertex {vertex} has degree zero")]
    IsolatedVertex { vertex: usize },
    #[error("need at least {min} vertices, got {n}")]
    TooSmall { n: usize, min: usize },
    #[error("clique search is limited to {MAX_CLIQUE_ORDER} vertices, got {n}")]
    TooLarge { n: usize },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum S2Method {
    Wilf,
    HarmonicExact,
    Cone,
    ConeParametric,
    TrivialOne,
}

impl S2Method {
    pub fn label(self) -> &'static str {
        match self {
            Self::Wilf => "wilf",
            Self::HarmonicExact => "harmonic_exact",
            Self::Cone => "cone",
            Self::ConeParametric => "cone_parametric",
            Self::TrivialOne => "trivial_one",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum S2Inputs {
    Wilf { omega: usize, rho: f64 },
    Harmonic { zagreb: u64, m: usize },
    Cone { rho: f64, rho_h: f64, n: usize },
    ConeParametric { a: f64, b: f64, n: usize },
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct S2Estimate {
    pub value: f64,
    pub method: S2Method,
    pub inputs: S2Inputs,
}

/// Exact maximum clique size by branch and bound, pruning with greedy
/// colouring of the candidate set.
pub fn clique_number(g: &Graph) -> Result<usize, S2Error> {
    let n = g.n();
    if n > MAX_CLIQUE_ORDER {
        return Err(S2Error::TooLarge { n });
    }
    let adj: Vec<u64> = (0..n).map(|v| g.row(v)[0]).collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = 0;
    expand(&adj, all, 0, &mut best);
    Ok(best)
}

/// Candidates ordered by greedy colour class; `colors[k]` bounds the clique
/// size reachable within `order[..=k]`.
fn color_sort(adj: &[u64], candidates: u64) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::with_capacity(candidates.count_ones() as usize);
    let mut colors = Vec::with_capacity(order.capacity());
    let mut uncolored = candidates;
    let mut color = 0;
    while uncolored != 0 {
        color += 1;
        let mut available = uncolored;
        while available != 0 {
            let v = available.trailing_zeros() as usize;
            available &= !(1 << v) & !adj[v];
            uncolored &= !(1 << v);
            order.push(v);
            colors.push(color);
        }
    }
    (order, colors)
}

fn expand(adj: &[u64], mut candidates: u64, size: usize, best: &mut usize) {
    let (order, colors) = color_sort(adj, candidates);
    for k in (0..order.len()).rev() {
        if size + colors[k] <= *best {
            return;
        }
        let v = order[k];
        let next = candidates & adj[v];
        if next == 0 {
            *best = (*best).max(size + 1);
        } else {
            expand(adj, next, size + 1, best);
        }
        candidates &= !(1 << v);
    }
}

/// `S² ≥ ω/(ω−1)·ρ`. `rho` may be any lower bound on the spectral radius.
pub fn wilf_s2(omega: usize, rho: f64) -> Result<S2Estimate, S2Error> {
    if omega < 2 {
        return Err(S2Error::WilfInapplicable { omega });
    }
    if !(rho > 0.0) {
        return Err(S2Error::NonPositiveRho(rho));
    }
    let w = omega as f64;
    Ok(S2Estimate {
        value: w / (w - 1.0) * rho,
        method: S2Method::Wilf,
        inputs: S2Inputs::Wilf { omega, rho },
    })
}

/// First Zagreb index `Σ d_v²`.
pub fn zagreb_first(g: &Graph) -> u64 {
    g.degrees().iter().map(|&d| (d * d) as u64).sum()
}

/// Returns `λ` when the degree vector satisfies `A·d = λ·d`.
///
/// The check runs in integers. A rational eigenvalue of an integer matrix is
/// an integer, so `λ` is returned as one. Edgeless graphs are not harmonic.
pub fn is_harmonic(g: &Graph) -> Option<usize> {
    let d = g.degrees();
    let mut lambda: Option<Ratio<usize>> = None;
    for v in 0..g.n() {
        let neighbor_sum: usize = g.neighbors(v).map(|u| d[u]).sum();
        if d[v] == 0 {
            continue;
        }
        let here = Ratio::new(neighbor_sum, d[v]);
        match lambda {
            None => lambda = Some(here),
            Some(l) if l != here => return None,
            Some(_) => {}
        }
    }
    lambda.filter(|l| l.is_integer()).map(|l| l.to_integer())
}

/// `S² = 4m²/Z_G`, exact for harmonic graphs.
pub fn harmonic_s2(g: &Graph) -> Result<S2Estimate, S2Error> {
    if is_harmonic(g).is_none() {
        return Err(S2Error::NotHarmonic);
    }
    let zagreb = zagreb_first(g);
    let m = g.m();
    let two_m = 2.0 * m as f64;
    Ok(S2Estimate {
        value: two_m * two_m / zagreb as f64,
        method: S2Method::HarmonicExact,
        inputs: S2Inputs::Harmonic { zagreb, m },
    })
}

/// `√(Z_G/n)`, a lower bound on `ρ`.
pub fn hofmeister_lower(g: &Graph) -> f64 {
    (zagreb_first(g) as f64 / g.n() as f64).sqrt()
}

pub fn universal_vertices(g: &Graph) -> Vec<usize> {
    g.universal_vertices()
}

/// Lower bound on `v_i²`: `1 / (1 + d_i/(ρ − ρ_{H_i})²)` where `H_i` is
/// `g` with vertex `i` deleted.
pub fn golberg_entry_bound(g: &Graph, i: usize, rho: f64, rho_hi: f64) -> Result<f64, S2Error> {
    if !(rho > rho_hi) {
        return Err(S2Error::InconsistentRadii { rho, rho_h: rho_hi });
    }
    let d = g.degree(i);
    if d == 0 {
        return Err(S2Error::IsolatedVertex { vertex: i });
    }
    let gap = rho - rho_hi;
    Ok(1.0 / (1.0 + d as f64 / (gap * gap)))
}

/// `S = (ρ + 1)·v_apex`, valid when `apex` is universal.
pub fn cone_entry_sum(g: &Graph, sr: &SpectralResult, apex: usize) -> Result<f64, S2Error> {
    if apex >= g.n() || g.degree(apex) != g.n() - 1 {
        return Err(S2Error::NotUniversal { vertex: apex });
    }
    Ok((sr.rho + 1.0) * sr.v[apex])
}

fn cone_formula(rho: f64, rho_h: f64, n: usize) -> f64 {
    let gap2 = (rho - rho_h).powi(2);
    (rho + 1.0).powi(2) * gap2 / (gap2 + (n - 1) as f64)
}

/// `S² ≥ (ρ+1)²(ρ−ρ_H)² / ((ρ−ρ_H)² + n − 1)` for `G = H ∨ K₁`.
pub fn cone_s2_bound(rho: f64, rho_h: f64, n: usize) -> Result<S2Estimate, S2Error> {
    if !(rho > rho_h) {
        return Err(S2Error::InconsistentRadii { rho, rho_h });
    }
    if n < 2 {
        return Err(S2Error::TooSmall { n, min: 2 });
    }
    Ok(S2Estimate {
        value: cone_formula(rho, rho_h, n),
        method: S2Method::Cone,
        inputs: S2Inputs::Cone { rho, rho_h, n },
    })
}

/// The cone bound with `a ≤ ρ` and `b ≥ ρ_H` in place of the true radii.
/// The formula increases with `ρ − ρ_H`, so the substitution stays sound.
pub fn cone_s2_parametric(a: f64, b: f64, n: usize) -> Result<S2Estimate, S2Error> {
    if !(a > b) {
        return Err(S2Error::InconsistentRadii { rho: a, rho_h: b });
    }
    if n < 2 {
        return Err(S2Error::TooSmall { n, min: 2 });
    }
    Ok(S2Estimate {
        value: cone_formula(a, b, n),
        method: S2Method::ConeParametric,
        inputs: S2Inputs::ConeParametric { a, b, n },
    })
}

/// Parametric cone bound from degrees alone: `a` is the Hofmeister bound on
/// `ρ`, `b = Δ(H)` for `H = G − apex`.
pub fn cone_s2_from_degrees(g: &Graph, apex: usize) -> Result<S2Estimate, S2Error> {
    if apex >= g.n() || g.degree(apex) != g.n() - 1 {
        return Err(S2Error::NotUniversal { vertex: apex });
    }
    let h = g
        .delete_vertex(apex)
        .map_err(|_| S2Error::TooSmall { n: g.n(), min: 2 })?;
    cone_s2_parametric(hofmeister_lower(g), h.max_degree() as f64, g.n())
}

/// Cone bound with `ρ_H` from a fresh solve on `G − apex`.
pub fn cone_s2_exact_radii(
    g: &Graph,
    sr: &SpectralResult,
    apex: usize,
    cfg: &SolverConfig,
) -> Result<S2Estimate, S2Error> {
    if apex >= g.n() || g.degree(apex) != g.n() - 1 {
        return Err(S2Error::NotUniversal { vertex: apex });
    }
    let h = g
        .delete_vertex(apex)
        .map_err(|_| S2Error::TooSmall { n: g.n(), min: 2 })?;
    let rho_h = spectral::spectral_radius(&h, cfg)?;
    cone_s2_bound(sr.rho, rho_h, g.n())
}

/// Every applicable lower bound on `S²`, instantiated with the true `ρ`
/// (and true `ρ_H` for the cone route), plus the degree-only parametric
/// cone bound.
pub fn all_s2_estimates(
    g: &Graph,
    sr: &SpectralResult,
    cfg: &SolverConfig,
) -> Result<Vec<S2Estimate>, S2Error> {
    let mut out = Vec::new();
    if let Ok(omega) = clique_number(g) {
        if omega >= 2 {
            out.push(wilf_s2(omega, sr.rho)?);
        }
    }
    if let Ok(est) = harmonic_s2(g) {
        out.push(est);
    }
    if g.n() >= 2 {
        if let Some(&apex) = g.universal_vertices().first() {
            out.push(cone_s2_exact_radii(g, sr, apex, cfg)?);
            if let Ok(est) = cone_s2_from_degrees(g, apex) {
                out.push(est);
            }
        }
    }
    Ok(out)
}

/// The largest of [`all_s2_estimates`]; `S² ≥ 1` when no route applies.
pub fn best_s2_lower(
    g: &Graph,
    sr: &SpectralResult,
    cfg: &SolverConfig,
) -> Result<S2Estimate, S2Error> {
    Ok(pick_best(&all_s2_estimates(g, sr, cfg)?))
}

pub(crate) fn pick_best(estimates: &[S2Estimate]) -> S2Estimate {
    let trivial = S2Estimate {
        value: 1.0,
        method: S2Method::TrivialOne,
        inputs: S2Inputs::Trivial,
    };
    estimates
        .iter()
        .copied()
        .fold(None, |best: Option<S2Estimate>, e| match best {
            Some(b) if b.value >= e.value => Some(b),
            _ => Some(e),
        })
        .unwrap_or(trivial)
}
