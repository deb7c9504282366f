//! Degree-moment irregularity measures and the ladder of bounds on
//! `ε(G) = ρ − 2m/n`.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::spectral::{self, SpectralResult};

/// Slack allowed when checking a proven inequality in floating point.
pub const BOUND_SLACK: f64 = 1e-9;
/// Slack for inequalities between exactly computed degree moments.
pub const MOMENT_SLACK: f64 = 1e-12;
/// `n/S² − 1` below this magnitude is treated as zero.
pub const RADICAND_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReportError {
    #[error("spectral result has {got} entries, graph has {expected} vertices")]
    Mismatch { expected: usize, got: usize },
}

/// Identifies a proven inequality checked during analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Inequality {
    /// `ρ ≥ 2m/n`
    CollatzSinogowitz,
    /// `var/(2√(2m)) ≤ ε`
    NikiforovLower,
    /// `ε ≤ √s`
    NikiforovUpper,
    /// `ε ≤ √var·√(n/S² − 1)`
    RayleighResidual,
    /// The Rayleigh residual bound agrees with the chained a posteriori
    /// computation.
    RayleighTwoPaths,
    /// `s²/n² ≤ var`
    MomentLower,
    /// `var ≤ s`
    MomentUpper,
    /// `var ≤ (Δ − δ)²/4`
    Popoviciu,
    /// `S² ≤ n`
    S2Ceiling,
    /// An `S²` lower bound exceeded the true `S²`.
    S2Soundness,
    /// `S = (ρ + 1)·v_u` for a universal vertex `u`.
    ConeEntrySum,
    /// `ω ≥ n/2` implies `ε ≤ √var`.
    CliqueHalfOrder,
}

impl Inequality {
    pub fn label(self) -> &'static str {
        match self {
            Self::CollatzSinogowitz => "collatz_sinogowitz",
            Self::NikiforovLower => "nikiforov_lower",
            Self::NikiforovUpper => "nikiforov_upper",
            Self::RayleighResidual => "rayleigh_residual",
            Self::RayleighTwoPaths => "rayleigh_two_paths",
            Self::MomentLower => "moment_lower",
            Self::MomentUpper => "moment_upper",
            Self::Popoviciu => "popoviciu",
            Self::S2Ceiling => "s2_ceiling",
            Self::S2Soundness => "s2_soundness",
            Self::ConeEntrySum => "cone_entry_sum",
            Self::CliqueHalfOrder => "clique_half_order",
        }
    }
}

/// A failed check `lhs ≤ rhs` (or `lhs = rhs` for identities).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundViolation {
    pub inequality: Inequality,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrregularityReport {
    pub n: usize,
    pub m: usize,
    pub avg_degree: f64,
    pub rho: f64,
    pub epsilon: f64,
    pub s_moment: f64,
    pub variance: f64,
    pub s_squared: f64,
    pub nikiforov_lower: f64,
    pub nikiforov_upper: f64,
    pub main_bound: f64,
    /// The same bound computed through the Rayleigh quotient residual and
    /// angle of the all-ones probe.
    pub main_bound_rayleigh: f64,
    pub popoviciu: f64,
    pub sqrt_variance: f64,
    pub violations: Vec<BoundViolation>,
}

/// `s(G) = Σ|d_u − 2m/n|`.
pub fn s_moment(g: &Graph) -> f64 {
    let mean = g.average_degree();
    g.degrees().iter().map(|&d| (d as f64 - mean).abs()).sum()
}

/// `s(G)` as an exact fraction: `Σ|n·d_u − 2m| / n`.
pub fn s_moment_exact(g: &Graph) -> Ratio<i64> {
    let (n, two_m) = (g.n() as i64, 2 * g.m() as i64);
    let total: i64 = g
        .degrees()
        .iter()
        .map(|&d| (n * d as i64 - two_m).abs())
        .sum();
    Ratio::new(total, n)
}

/// `var(G) = (1/n)·Σ(d_u − 2m/n)²`.
pub fn variance(g: &Graph) -> f64 {
    let mean = g.average_degree();
    let sum: f64 = g.degrees().iter().map(|&d| (d as f64 - mean).powi(2)).sum();
    sum / g.n() as f64
}

/// `var(G)` as an exact fraction: `Σ(n·d_u − 2m)² / n³`.
pub fn variance_exact(g: &Graph) -> Ratio<i64> {
    let (n, two_m) = (g.n() as i64, 2 * g.m() as i64);
    let total: i64 = g
        .degrees()
        .iter()
        .map(|&d| (n * d as i64 - two_m).pow(2))
        .sum();
    Ratio::new(total, n * n * n)
}

fn check_len(g: &Graph, sr: &SpectralResult) -> Result<(), ReportError> {
    if sr.v.len() != g.n() {
        return Err(ReportError::Mismatch {
            expected: g.n(),
            got: sr.v.len(),
        });
    }
    Ok(())
}

/// `ε(G) = ρ − 2m/n`.
pub fn epsilon(g: &Graph, sr: &SpectralResult) -> Result<f64, ReportError> {
    check_len(g, sr)?;
    Ok(sr.rho - g.average_degree())
}

/// `(var/(2√(2m)), √s)`; both zero for an edgeless graph.
pub fn nikiforov_bounds(g: &Graph) -> (f64, f64) {
    if g.m() == 0 {
        return (0.0, 0.0);
    }
    let lower = variance(g) / (2.0 * (2.0 * g.m() as f64).sqrt());
    (lower, s_moment(g).sqrt())
}

fn irregularity_radicand(n: usize, s_squared: f64) -> f64 {
    let r = n as f64 / s_squared - 1.0;
    if r.abs() < RADICAND_FLOOR {
        0.0
    } else {
        r.max(0.0)
    }
}

/// `√var · √(n/S² − 1)`.
pub fn main_bound(g: &Graph, sr: &SpectralResult) -> Result<f64, ReportError> {
    check_len(g, sr)?;
    Ok(variance(g).sqrt() * irregularity_radicand(g.n(), sr.s_squared()).sqrt())
}

/// The main bound reached through the a posteriori Rayleigh bound with
/// probe `1`: residual ratio `‖d − 2m/n‖/√n`, angle cosine `S/√n`.
pub fn main_bound_via_rayleigh(g: &Graph, sr: &SpectralResult) -> Result<f64, ReportError> {
    check_len(g, sr)?;
    let ones = vec![1.0; g.n()];
    let r = spectral::residual(g, &ones).expect("all-ones probe is non-zero");
    let ratio = spectral::norm(&r) / spectral::norm(&ones);
    let cos = spectral::angle_cos(&sr.v, &ones).expect("non-zero vectors");
    Ok(spectral::a_posteriori_bound(ratio, cos).expect("Perron vector is positive"))
}

/// `(Δ − δ)²/4`.
pub fn popoviciu_bound(g: &Graph) -> f64 {
    let spread = (g.max_degree() - g.min_degree()) as f64;
    spread * spread / 4.0
}

/// Evaluates every measure and bound, recording any proven inequality that
/// fails beyond tolerance.
pub fn build_report(g: &Graph, sr: &SpectralResult) -> Result<IrregularityReport, ReportError> {
    check_len(g, sr)?;
    let n = g.n();
    let s_moment = s_moment(g);
    let variance = variance(g);
    let (nikiforov_lower, nikiforov_upper) = nikiforov_bounds(g);
    let mut report = IrregularityReport {
        n,
        m: g.m(),
        avg_degree: g.average_degree(),
        rho: sr.rho,
        epsilon: epsilon(g, sr)?,
        s_moment,
        variance,
        s_squared: sr.s_squared(),
        nikiforov_lower,
        nikiforov_upper,
        main_bound: main_bound(g, sr)?,
        main_bound_rayleigh: main_bound_via_rayleigh(g, sr)?,
        popoviciu: popoviciu_bound(g),
        sqrt_variance: variance.sqrt(),
        violations: Vec::new(),
    };
    report.violations = report.check();
    Ok(report)
}

impl IrregularityReport {
    /// All proven relations between the fields that fail beyond tolerance.
    pub fn check(&self) -> Vec<BoundViolation> {
        use Inequality::*;
        let n = self.n as f64;
        let checks = [
            (CollatzSinogowitz, self.avg_degree, self.rho, BOUND_SLACK),
            (
                NikiforovLower,
                self.nikiforov_lower,
                self.epsilon,
                BOUND_SLACK,
            ),
            (
                NikiforovUpper,
                self.epsilon,
                self.nikiforov_upper,
                BOUND_SLACK,
            ),
            (RayleighResidual, self.epsilon, self.main_bound, BOUND_SLACK),
            (
                MomentLower,
                self.s_moment * self.s_moment / (n * n),
                self.variance,
                MOMENT_SLACK,
            ),
            (MomentUpper, self.variance, self.s_moment, MOMENT_SLACK),
            (Popoviciu, self.variance, self.popoviciu, MOMENT_SLACK),
            (S2Ceiling, self.s_squared, n, BOUND_SLACK),
        ];
        let mut out: Vec<BoundViolation> = checks
            .into_iter()
            .filter(|&(_, lhs, rhs, slack)| !(lhs <= rhs + slack))
            .map(|(inequality, lhs, rhs, _)| BoundViolation {
                inequality,
                lhs,
                rhs,
            })
            .collect();
        if !((self.main_bound - self.main_bound_rayleigh).abs() <= MOMENT_SLACK) {
            out.push(BoundViolation {
                inequality: RayleighTwoPaths,
                lhs: self.main_bound,
                rhs: self.main_bound_rayleigh,
            });
        }
        out
    }

    /// `ε / main_bound`, defined as 1 when both vanish.
    pub fn tightness(&self) -> f64 {
        if self.epsilon.abs() < 1e-12 && self.main_bound < 1e-12 {
            1.0
        } else {
            self.epsilon / self.main_bound
        }
    }
}
