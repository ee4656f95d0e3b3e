//! Pressure, Gibbs chains, and the spectrum of Birkhoff averages on the
//! weighted de Bruijn graph.
//!
//! The transfer operator at parameter `t` acts along graph edges with entry
//! `exp(t·f(u))` on both edges leaving `u`. Its spectral radius gives the
//! pressure `P(t)`; the Perron pair gives a stationary Markov chain whose
//! average sweeps the open support interval as `t` runs over the reals; and
//! the spectrum value at an interior average `α` is the conjugate value
//! `(P(t) − t·α)/log 2` at the parameter matching that average. The support
//! endpoints are handled separately through the tight subgraph, whose
//! topological entropy is the dimension available there.
//!
//! All spectral work happens in log scale: operator entries are kept as
//! exponents, combined with log-sum-exp, and anchored by the extreme cycle
//! mean of `t·f` so the scaled radius stays inside [1, 2] for every
//! parameter the bracketing search can reach.

use std::f64::consts::LN_2;

use crate::debruijn::{
    build_graph, endpoints, subgraph_entropy, tight_subgraph, Side, WeightedDeBruijn,
};
use crate::error::{Error, Result};
use crate::shift::PccFunction;

/// Raw operator entries are exp(t·f(u)); the public entry points refuse
/// parameters for which those entries would overflow f64.
const PARAMETER_GUARD: f64 = 700.0;

/// Collatz-Wielandt growth spread (log scale) at which the power iteration
/// stops; this is the relative accuracy of the spectral radius.
const POWER_TOL: f64 = 1e-14;

/// Iteration cap for the power method.
const MAX_POWER_ITERS: usize = 1_000_000;

/// Widest stalled growth bracket the power method will accept. Contraction
/// slows to a crawl exactly when two leading structures tie for the radius
/// while barely interacting; the bounds still bracket the radius, so a
/// stalled-but-tight bracket is usable.
const PLATEAU_TOL: f64 = 1e-7;

/// Iterations per stall check.
const PLATEAU_WINDOW: usize = 1024;

/// Support width, relative to max(1, sup-norm), below which the potential
/// averages to a single value and the spectrum is a point mass.
const DEGENERATE_WIDTH: f64 = 1e-12;

/// Relative half-width within which a requested average hits the point
/// mass of a degenerate potential.
const POINT_TOL: f64 = 1e-9;

/// Relative half-width within which a requested average counts as a
/// support endpoint.
const ENDPOINT_TOL: f64 = 1e-13;

/// The parameter bisection stops once its bracket is this tight.
const BISECT_TOL: f64 = 1e-11;

/// The bracketing search gives up once |t|·sup-norm exceeds this bound and
/// declares the target average endpoint-adjacent.
const BRACKET_CAP: f64 = (1u64 << 20) as f64;

/// A stationary Markov chain supported on the edges of a weighted de
/// Bruijn graph.
#[derive(Debug, Clone)]
pub struct MarkovMeasure {
    graph: WeightedDeBruijn,
    /// Row-stochastic kernel: `transitions[u][b]` is the probability of
    /// leaving `u` along the edge that appends symbol `b`.
    transitions: Vec<[f64; 2]>,
    /// Stationary distribution over nodes.
    stationary: Vec<f64>,
}

impl MarkovMeasure {
    pub fn graph(&self) -> &WeightedDeBruijn {
        &self.graph
    }

    pub fn transitions(&self) -> &[[f64; 2]] {
        &self.transitions
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    /// Transition probability from `u` to `v`; zero off edges.
    pub fn transition(&self, u: usize, v: usize) -> f64 {
        let [s0, s1] = self.graph.successors(u);
        if v == s0 {
            self.transitions[u][0]
        } else if v == s1 {
            self.transitions[u][1]
        } else {
            0.0
        }
    }

    /// The chain's average of the potential.
    pub fn mean(&self) -> f64 {
        self.stationary.iter().zip(self.graph.weights()).map(|(p, w)| p * w).sum()
    }

    /// Metric entropy (natural log) of the chain.
    pub fn entropy(&self) -> f64 {
        let mut h = 0.0;
        for (u, row) in self.transitions.iter().enumerate() {
            for &p in row {
                if p > 0.0 {
                    h -= self.stationary[u] * p * p.ln();
                }
            }
        }
        h
    }
}

/// A sampled spectrum: support endpoints, ordered `(α, S)` samples, the
/// average at which `S` reaches 1, and the potential itself so that later
/// probes (endpoint slopes, stability sweeps) re-evaluate the curve exactly
/// instead of interpolating the samples.
#[derive(Debug, Clone)]
pub struct SpectrumCurve {
    pub alpha_star_min: f64,
    pub alpha_star_max: f64,
    pub samples: Vec<(f64, f64)>,
    pub integral_alpha: f64,
    pub potential: PccFunction,
}

/// Outcome of the sup-norm stability check: `worst_gap` is the largest
/// amount by which a reference spectrum value exceeded the best perturbed
/// value found in its window.
#[derive(Debug, Clone, Copy)]
pub struct ContinuityReport {
    pub pass: bool,
    pub worst_gap: f64,
}

/// log(e^a + e^b) without leaving log scale.
fn lse2(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

/// Power iteration on I + M in log scale: `apply` must write
/// log((I + M)·exp(cur)) into its second argument. Returns the log spectral
/// radius of M and the log Perron vector. The +I shift keeps the iteration
/// aperiodic no matter how M's support cycles align, and the
/// Collatz-Wielandt growth bounds bracket 1 + ρ at every step.
fn log_power(
    n: usize,
    mut apply: impl FnMut(&[f64], &mut [f64]),
    what: &str,
) -> Result<(f64, Vec<f64>)> {
    let mut cur = vec![0.0f64; n];
    let mut nxt = vec![0.0f64; n];
    let mut prev_best = f64::INFINITY;
    let mut window_best = f64::INFINITY;
    let mut spread = f64::INFINITY;
    let mut mid = f64::NAN;
    for iter in 0..MAX_POWER_ITERS {
        apply(&cur, &mut nxt);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (c, x) in cur.iter().zip(nxt.iter()) {
            let g = x - c;
            lo = lo.min(g);
            hi = hi.max(g);
        }
        let peak = nxt.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for v in nxt.iter_mut() {
            *v -= peak;
        }
        std::mem::swap(&mut cur, &mut nxt);
        spread = hi - lo;
        mid = 0.5 * (lo + hi);
        // the growth spread cannot shrink below the rounding noise of the
        // largest log component, so the target scales with vector depth
        let reach = cur.iter().cloned().fold(1.0f64, |m, v| m.max(-v));
        let tol = POWER_TOL.max(16.0 * f64::EPSILON * reach);
        if spread <= tol {
            return finish_power(mid, cur, what);
        }
        window_best = window_best.min(spread);
        if (iter + 1) % PLATEAU_WINDOW == 0 {
            // less than a 2x gain over a whole window: the contraction has
            // stalled on nearly tied leading structures; the bracket is
            // still rigorous, so take it once it is tight enough
            if window_best > 0.5 * prev_best && spread <= PLATEAU_TOL {
                return finish_power(mid, cur, what);
            }
            prev_best = window_best;
            window_best = f64::INFINITY;
        }
    }
    if spread <= PLATEAU_TOL {
        return finish_power(mid, cur, what);
    }
    Err(Error::NoConvergence(format!(
        "{what}: growth bounds still {spread:.3e} wide after {MAX_POWER_ITERS} rounds"
    )))
}

fn finish_power(mid: f64, vector: Vec<f64>, what: &str) -> Result<(f64, Vec<f64>)> {
    let rho = mid.exp_m1();
    if rho <= 0.0 {
        return Err(Error::NoConvergence(format!(
            "{what}: spectral radius collapsed to {rho:e}"
        )));
    }
    Ok((rho.ln(), vector))
}

/// Shared state for evaluating the transfer operator at many parameters.
struct TransferSolver {
    graph: WeightedDeBruijn,
    alpha_min: f64,
    alpha_max: f64,
    sup: f64,
}

impl TransferSolver {
    fn new(f: &PccFunction) -> Result<Self> {
        let e = endpoints(f)?;
        Ok(TransferSolver {
            graph: build_graph(f),
            alpha_min: e.alpha_star_min,
            alpha_max: e.alpha_star_max,
            sup: f.sup_norm(),
        })
    }

    fn scale(&self) -> f64 {
        self.sup.max(1.0)
    }

    fn width(&self) -> f64 {
        self.alpha_max - self.alpha_min
    }

    fn is_degenerate(&self) -> bool {
        self.width() <= DEGENERATE_WIDTH * self.scale()
    }

    /// Per-step exponent shift: the extreme cycle mean of `t·f`, which pins
    /// the scaled spectral radius inside [1, 2] for every `t`.
    fn anchor(&self, t: f64) -> f64 {
        if t >= 0.0 {
            t * self.alpha_max
        } else {
            t * self.alpha_min
        }
    }

    fn log_edge_weights(&self, t: f64) -> Vec<f64> {
        let s = self.anchor(t);
        self.graph.weights().iter().map(|w| t * w - s).collect()
    }

    /// Log radius and log right Perron vector of the anchored operator.
    fn perron_right(&self, t: f64) -> Result<(f64, Vec<f64>)> {
        let ell = self.log_edge_weights(t);
        let g = &self.graph;
        let n = g.node_count();
        log_power(
            n,
            |cur, nxt| {
                for (u, slot) in nxt.iter_mut().enumerate() {
                    let [s0, s1] = g.successors(u);
                    *slot = lse2(cur[u], ell[u] + lse2(cur[s0], cur[s1]));
                }
            },
            "transfer operator (right)",
        )
    }

    fn perron_left(&self, t: f64) -> Result<(f64, Vec<f64>)> {
        let ell = self.log_edge_weights(t);
        let g = &self.graph;
        let n = g.node_count();
        log_power(
            n,
            |cur, nxt| {
                for (v, slot) in nxt.iter_mut().enumerate() {
                    let [p0, p1] = g.predecessors(v);
                    *slot = lse2(cur[v], lse2(ell[p0] + cur[p0], ell[p1] + cur[p1]));
                }
            },
            "transfer operator (left)",
        )
    }

    fn pressure_value(&self, t: f64) -> Result<f64> {
        let (log_rho, _) = self.perron_right(t)?;
        Ok(self.anchor(t) + log_rho)
    }

    fn gibbs(&self, t: f64) -> Result<MarkovMeasure> {
        let (_, log_r) = self.perron_right(t)?;
        let (_, log_l) = self.perron_left(t)?;
        let g = &self.graph;
        let n = g.node_count();

        // Both edges out of u carry the same factor exp(t·f(u)), so row
        // normalization cancels it and only the right-vector ratio is left;
        // computing the smaller probability directly keeps the pair summing
        // to exactly 1.
        let mut transitions = vec![[0.0f64; 2]; n];
        for (u, row) in transitions.iter_mut().enumerate() {
            let [s0, s1] = g.successors(u);
            let d = log_r[s0] - log_r[s1];
            *row = if d >= 0.0 {
                let e = (-d).exp();
                let p1 = e / (1.0 + e);
                [1.0 - p1, p1]
            } else {
                let e = d.exp();
                let p0 = e / (1.0 + e);
                [p0, 1.0 - p0]
            };
        }

        // pi ∝ l·r, normalized in log scale before exponentiating
        let log_pi: Vec<f64> = log_l.iter().zip(&log_r).map(|(a, b)| a + b).collect();
        let peak = log_pi.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let z = peak + log_pi.iter().map(|x| (x - peak).exp()).sum::<f64>().ln();
        let mut stationary: Vec<f64> = log_pi.iter().map(|x| (x - z).exp()).collect();
        let total: f64 = stationary.iter().sum();
        for p in stationary.iter_mut() {
            *p /= total;
        }

        Ok(MarkovMeasure { graph: g.clone(), transitions, stationary })
    }

    fn mean(&self, t: f64) -> Result<f64> {
        Ok(self.gibbs(t)?.mean())
    }

    fn endpoint_dimension(&self, side: Side) -> Result<f64> {
        let tight = tight_subgraph(&self.graph, side)?;
        Ok(subgraph_entropy(&tight.subgraph)? / LN_2)
    }

    fn spectrum_at(&self, alpha: f64) -> Result<f64> {
        let scale = self.scale();
        if self.is_degenerate() {
            let center = 0.5 * (self.alpha_min + self.alpha_max);
            return Ok(if (alpha - center).abs() <= POINT_TOL * scale { 1.0 } else { 0.0 });
        }
        let edge = ENDPOINT_TOL * scale;
        if alpha < self.alpha_min - edge || alpha > self.alpha_max + edge {
            return Ok(0.0); // level sets beyond the support are empty
        }
        if (alpha - self.alpha_min).abs() <= edge {
            return self.endpoint_dimension(Side::Min);
        }
        if (alpha - self.alpha_max).abs() <= edge {
            return self.endpoint_dimension(Side::Max);
        }
        self.interior_value(alpha)
    }

    /// Solves mean(t) = α by monotone bisection and evaluates the conjugate
    /// value (P(t) − t·α)/log 2 there.
    fn interior_value(&self, alpha: f64) -> Result<f64> {
        // sup > 0 here: a zero-width potential was handled as degenerate
        let cap = BRACKET_CAP / self.sup;
        let mut t_hi = 64.0f64.min(cap);
        while self.mean(t_hi)? < alpha {
            if t_hi >= cap {
                // no reachable parameter pushes the chain's average this
                // close to the top: treat the target as the endpoint
                return self.endpoint_dimension(Side::Max);
            }
            t_hi = (2.0 * t_hi).min(cap);
        }
        let mut t_lo = (-64.0f64).max(-cap);
        while self.mean(t_lo)? > alpha {
            if t_lo <= -cap {
                return self.endpoint_dimension(Side::Min);
            }
            t_lo = (2.0 * t_lo).max(-cap);
        }
        while t_hi - t_lo > BISECT_TOL * (1.0 + t_lo.abs().max(t_hi.abs())) {
            let mid = 0.5 * (t_lo + t_hi);
            if mid <= t_lo || mid >= t_hi {
                break; // bracket already at f64 resolution
            }
            if self.mean(mid)? >= alpha {
                t_hi = mid;
            } else {
                t_lo = mid;
            }
        }
        let t = 0.5 * (t_lo + t_hi);
        let s = (self.pressure_value(t)? - t * alpha) / LN_2;
        Ok(s.clamp(0.0, 1.0))
    }
}

fn parameter_guard(f: &PccFunction, t: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!("parameter {t} is not finite")));
    }
    let sup = f.sup_norm();
    if sup > 0.0 && t.abs() * sup > PARAMETER_GUARD {
        return Err(Error::InvalidParameter(format!(
            "parameter {t} exceeds the overflow guard {:.6e} for this potential",
            PARAMETER_GUARD / sup
        )));
    }
    Ok(())
}

/// Topological pressure P(t): the log spectral radius of the transfer
/// operator with entries exp(t·f(u)) on the edges of the potential's graph.
pub fn pressure(f: &PccFunction, t: f64) -> Result<f64> {
    parameter_guard(f, t)?;
    TransferSolver::new(f)?.pressure_value(t)
}

/// The Gibbs chain at parameter t: transitions `M_t[u][v]·r_v/(ρ·r_u)` from
/// the right Perron vector `r`, stationary distribution `π ∝ l·r` with `l`
/// the left Perron vector. Its entropy and average tie back to the pressure
/// through `h + t·mean = P(t)`.
pub fn gibbs_measure(f: &PccFunction, t: f64) -> Result<MarkovMeasure> {
    parameter_guard(f, t)?;
    TransferSolver::new(f)?.gibbs(t)
}

/// Spectrum value at one average: 0 beyond the support, the tight-subgraph
/// dimension at the endpoints, the conjugate pressure value in the
/// interior, and a point mass when the support is a single average.
pub fn spectrum_at(f: &PccFunction, alpha: f64) -> Result<f64> {
    TransferSolver::new(f)?.spectrum_at(alpha)
}

/// Dimension of the level set at the extreme average: the tight subgraph's
/// topological entropy in base 2.
pub fn endpoint_dimension(f: &PccFunction, side: Side) -> Result<f64> {
    let g = build_graph(f);
    let tight = tight_subgraph(&g, side)?;
    Ok(subgraph_entropy(&tight.subgraph)? / LN_2)
}

/// Samples the whole curve: the exact support endpoints plus a uniform
/// interior grid, `grid_points` samples in total. A degenerate potential
/// collapses to the single sample at its average.
pub fn spectrum_curve(f: &PccFunction, grid_points: usize) -> Result<SpectrumCurve> {
    if grid_points < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 grid points, got {grid_points}"
        )));
    }
    let solver = TransferSolver::new(f)?;
    let integral_alpha = f.integrate();
    if solver.is_degenerate() {
        let center = 0.5 * (solver.alpha_min + solver.alpha_max);
        return Ok(SpectrumCurve {
            alpha_star_min: solver.alpha_min,
            alpha_star_max: solver.alpha_max,
            samples: vec![(center, 1.0)],
            integral_alpha,
            potential: f.clone(),
        });
    }
    let mut samples = Vec::with_capacity(grid_points);
    samples.push((solver.alpha_min, solver.endpoint_dimension(Side::Min)?));
    for i in 1..grid_points - 1 {
        let alpha = solver.alpha_min + solver.width() * i as f64 / (grid_points - 1) as f64;
        samples.push((alpha, solver.spectrum_at(alpha)?));
    }
    samples.push((solver.alpha_max, solver.endpoint_dimension(Side::Max)?));
    Ok(SpectrumCurve {
        alpha_star_min: solver.alpha_min,
        alpha_star_max: solver.alpha_max,
        samples,
        integral_alpha,
        potential: f.clone(),
    })
}

/// True when the spectrum vanishes at both support endpoints, i.e. both
/// endpoint dimensions fall below the tolerance.
pub fn is_spectrum_continuous(f: &PccFunction, tol: f64) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(endpoint_dimension(f, Side::Min)? < tol && endpoint_dimension(f, Side::Max)? < tol)
}

/// Difference quotients of the spectrum into a support endpoint, one per
/// offset. Offsets must be positive, strictly decreasing, and smaller than
/// the support width. The curve's own potential is re-evaluated at the
/// exact offset points, so the quotients track the true curve rather than
/// its stored samples.
pub fn one_sided_slopes(curve: &SpectrumCurve, side: Side, deltas: &[f64]) -> Result<Vec<f64>> {
    let scale = curve.potential.sup_norm().max(1.0);
    let width = curve.alpha_star_max - curve.alpha_star_min;
    if width <= DEGENERATE_WIDTH * scale {
        return Err(Error::Degenerate("point support has no endpoint slopes".into()));
    }
    if deltas.is_empty() {
        return Err(Error::InvalidParameter("need at least one offset".into()));
    }
    for pair in deltas.windows(2) {
        if pair[1] >= pair[0] {
            return Err(Error::InvalidParameter(
                "offsets must be strictly decreasing".into(),
            ));
        }
    }
    for &d in deltas {
        if !(d > 0.0 && d < width) {
            return Err(Error::InvalidParameter(format!(
                "offset {d} is outside (0, {width})"
            )));
        }
    }
    let solver = TransferSolver::new(&curve.potential)?;
    let (alpha_end, step) = match side {
        Side::Max => (solver.alpha_max, -1.0),
        Side::Min => (solver.alpha_min, 1.0),
    };
    let s_end = solver.endpoint_dimension(side)?;
    deltas
        .iter()
        .map(|&d| {
            let s = solver.spectrum_at(alpha_end + step * d)?;
            Ok((s - s_end) / (step * d))
        })
        .collect()
}

/// Verifies sup-norm stability of the spectrum: every reference value
/// S_f(α) on a grid over f's support must be matched, up to 1e−6, by the
/// perturbed spectrum somewhere in the window [α−ε, α+ε]. The window is
/// swept at 64 points (63 uniform across it plus its center) and the best
/// sample is then sharpened by a local hill climb — the window max of a
/// concave curve sits between neighboring samples, and crude sampling alone
/// would miss it by up to a quadratic-in-spacing error.
pub fn norm_continuity_check(
    f: &PccFunction,
    g: &PccFunction,
    eps: f64,
    grid_points: usize,
) -> Result<ContinuityReport> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "window radius must be positive, got {eps}"
        )));
    }
    if grid_points < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 grid points, got {grid_points}"
        )));
    }
    let dist = f.sup_distance(g)?;
    if dist >= eps {
        return Err(Error::InvalidParameter(format!(
            "sup distance {dist:.6e} is not below the window radius {eps:.6e}"
        )));
    }
    let sf = TransferSolver::new(f)?;
    let sg = TransferSolver::new(g)?;
    let spacing = 2.0 * eps / 62.0;
    let mut worst_gap = f64::NEG_INFINITY;
    for i in 0..grid_points {
        let alpha = sf.alpha_min + sf.width() * i as f64 / (grid_points - 1) as f64;
        let reference = sf.spectrum_at(alpha)?;

        let mut best_at = alpha;
        let mut best = sg.spectrum_at(alpha)?;
        for j in 0..63 {
            let shifted = alpha - eps + spacing * j as f64;
            let value = sg.spectrum_at(shifted)?;
            if value > best {
                best = value;
                best_at = shifted;
            }
        }
        // sharpen around the best sample, never leaving the window
        let mut radius = spacing;
        for _ in 0..25 {
            for candidate in [best_at - radius, best_at + radius] {
                let candidate = candidate.clamp(alpha - eps, alpha + eps);
                let value = sg.spectrum_at(candidate)?;
                if value > best {
                    best = value;
                    best_at = candidate;
                }
            }
            radius *= 0.5;
        }

        worst_gap = worst_gap.max(reference - best);
    }
    Ok(ContinuityReport { pass: worst_gap <= 1e-6, worst_gap })
}
