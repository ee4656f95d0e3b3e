//! Brute-force ground truth.
//!
//! Everything here recomputes, by exhaustive enumeration or direct
//! sampling, quantities that the rest of the crate obtains through faster
//! structure: cycle means (vs. the dynamic program), level-set sizes
//! (vs. the Legendre transform), the combinatorial cylinder-cover bound,
//! and the uniform-convergence constant for finite Birkhoff averages.
//! Caps are deliberately tight — an oracle must be unarguably correct,
//! not fast.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::debruijn;
use crate::error::{Error, Result};
use crate::shift::{
    finite_birkhoff_average, periodic_birkhoff_average, PccFunction, PeriodicPoint,
    SymbolFunction,
};

/// Depth cap for exhaustive cycle enumeration.
pub const CYCLE_DEPTH_CAP: usize = 4;
/// Symbol cap for exhaustive word counting.
pub const COUNT_SYMBOL_CAP: usize = 24;

/// Every rotation-distinct periodic word of period at most `max_period`,
/// with its exact orbit average. Periods are represented by their
/// primitive canonical words, so each orbit appears exactly once; the
/// maximum of the means is the spectrum's upper support endpoint.
pub fn enumerate_cycle_means(
    f: &PccFunction,
    max_period: usize,
) -> Result<Vec<(PeriodicPoint, f64)>> {
    if f.depth() > CYCLE_DEPTH_CAP {
        return Err(Error::DepthTooLarge { depth: f.depth(), cap: CYCLE_DEPTH_CAP });
    }
    if max_period == 0 || max_period > (1 << f.depth()) {
        return Err(Error::InvalidParameter(format!(
            "max_period {max_period} outside 1..=2^depth = {}",
            1 << f.depth()
        )));
    }
    let sf: SymbolFunction = f.clone().into();
    let mut out = Vec::new();
    for p in 1..=max_period {
        for code in 0..(1usize << p) {
            let bits: Vec<u8> = (0..p).map(|j| ((code >> (p - 1 - j)) & 1) as u8).collect();
            let point = PeriodicPoint::new(bits.clone())?;
            // keep only primitive canonical representatives: one per orbit
            if point.canonical().period_word() != bits.as_slice() {
                continue;
            }
            let mean = periodic_birkhoff_average(&sf, &point)?;
            out.push((point, mean));
        }
    }
    Ok(out)
}

/// Birkhoff sums over all words of length `n + depth − 1`, indexed by the
/// word's binary code (most significant bit = first symbol).
fn window_sums(f: &PccFunction, n: usize) -> Result<Vec<f64>> {
    let k = f.depth();
    if n == 0 {
        return Err(Error::InvalidParameter("window count must be positive".into()));
    }
    let m = n + k - 1;
    if m > COUNT_SYMBOL_CAP {
        return Err(Error::DepthTooLarge { depth: m, cap: COUNT_SYMBOL_CAP });
    }
    let mask = (1usize << k) - 1;
    let mut sums = vec![0.0f64; 1 << m];
    for (w, slot) in sums.iter_mut().enumerate() {
        let mut s = 0.0;
        for i in 0..n {
            s += f.value((w >> (m - k - i)) & mask);
        }
        *slot = s;
    }
    Ok(sums)
}

/// FFW counting estimate of the spectrum: (1/N)·log₂ of the number of
/// length-(N+depth−1) words whose N-window Birkhoff average lies within δ
/// of α. Returns −∞ when no word qualifies.
pub fn counting_lambda(f: &PccFunction, alpha: f64, delta: f64, n: usize) -> Result<f64> {
    Ok(counting_lambda_many(f, &[alpha], delta, n)?[0])
}

/// Same estimate across many α values with one shared enumeration pass.
pub fn counting_lambda_many(
    f: &PccFunction,
    alphas: &[f64],
    delta: f64,
    n: usize,
) -> Result<Vec<f64>> {
    if delta < 0.0 {
        return Err(Error::InvalidParameter(format!("negative window radius {delta}")));
    }
    let sums = window_sums(f, n)?;
    let nf = n as f64;
    // widen the closed interval by an ulp-scale margin so exact boundary
    // averages (e.g. 11/20 vs 0.55) are not dropped by rounding
    let slack = 1e-12 * delta.max(1.0);
    Ok(alphas
        .iter()
        .map(|&alpha| {
            let count = sums.iter().filter(|&&s| (s / nf - alpha).abs() <= delta + slack).count();
            if count == 0 {
                f64::NEG_INFINITY
            } else {
                (count as f64).log2() / nf
            }
        })
        .collect())
}

/// Cylinder-cover audit for the single-raised-cylinder family: compares
/// the combinatorial bound
/// `(N+L−1)·C(N+L−1, 2(N+L−1)/L)·2^{β*N+L−1}`
/// against the exact number of length-(N+L−1) words whose N-window average
/// of the depth-L function (value `b` on the all-ones cylinder, `a`
/// elsewhere) reaches t* = β*·a + (1−β*)·b.
#[derive(Debug, Clone, Copy)]
pub struct CoverReport {
    pub bound: f64,
    pub exact_count: u64,
    pub pass: bool,
}

pub fn lemma53_cover_check(
    a: f64,
    b: f64,
    l: usize,
    beta_star: f64,
    n: usize,
) -> Result<CoverReport> {
    if b <= a {
        return Err(Error::InvalidParameter(format!("need b > a, got a={a}, b={b}")));
    }
    if l < 6 {
        return Err(Error::InvalidParameter(format!("run length {l} below the minimum 6")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("window count must be positive".into()));
    }
    let m = n + l - 1;
    if m > COUNT_SYMBOL_CAP {
        return Err(Error::DepthTooLarge { depth: m, cap: COUNT_SYMBOL_CAP });
    }
    if m % l != 0 {
        return Err(Error::InvalidParameter(format!(
            "divisibility L | N+L−1 required: {l} does not divide {m}"
        )));
    }

    let t_star = beta_star * a + (1.0 - beta_star) * b;
    let mask = (1usize << l) - 1;
    let nf = n as f64;
    let mut exact_count = 0u64;
    for w in 0..(1usize << m) {
        let mut ones_windows = 0usize;
        for i in 0..n {
            if (w >> (m - l - i)) & mask == mask {
                ones_windows += 1;
            }
        }
        let avg = a + (b - a) * ones_windows as f64 / nf;
        if avg >= t_star {
            exact_count += 1;
        }
    }

    let bound = (m as f64)
        * binomial(m as u64, (2 * m / l) as u64)
        * (beta_star * nf + (l - 1) as f64).exp2();
    Ok(CoverReport { bound, exact_count, pass: exact_count as f64 <= bound })
}

fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Uniformity threshold for finite Birkhoff averages: the closed-form
/// N₀ = ⌈2k(α*_max + ε/2 + ‖f‖)/ε⌉ beyond which every N-window average is
/// at most α*_max + ε. A sampled companion check exercises the guarantee
/// on random words just past the threshold.
pub fn uniform_n0(f: &PccFunction, eps: f64) -> Result<usize> {
    if eps <= 0.0 {
        return Err(Error::InvalidParameter(format!("nonpositive margin {eps}")));
    }
    let k = f.depth() as f64;
    let alpha_star_max = debruijn::endpoints(f)?.alpha_star_max;
    let raw = 2.0 * k * (alpha_star_max + eps / 2.0 + f.sup_norm()) / eps;
    // snap values that are integers up to rounding noise before ceiling
    let n0 = if (raw - raw.round()).abs() < 1e-9 { raw.round() } else { raw.ceil() } as usize;

    let sf: SymbolFunction = f.clone().into();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e30);
    let len = n0 + 32 + f.depth() - 1;
    for _ in 0..1000 {
        let word: Vec<u8> = (0..len).map(|_| (rng.next_u32() & 1) as u8).collect();
        for n in (n0 + 1)..=(n0 + 32) {
            let avg = finite_birkhoff_average(&sf, &word, n)?;
            // the bound is a theorem; failure would mean a defect here
            assert!(
                avg <= alpha_star_max + eps + 1e-9,
                "window average {avg} exceeded the uniform bound"
            );
        }
    }
    Ok(n0)
}

/// Running Birkhoff averages along a fair-coin trajectory drawn from a
/// seeded ChaCha8 stream (one symbol per generator word, low bit).
/// Identical seeds give identical sequences on every platform.
pub fn sample_trajectory(f: &SymbolFunction, seed: u64, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParameter("trajectory length must be positive".into()));
    }
    let depth = f.effective_depth();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let word: Vec<u8> = (0..n + depth - 1).map(|_| (rng.next_u32() & 1) as u8).collect();
    let mut out = Vec::with_capacity(n);
    let mut acc = 0.0f64;
    for i in 0..n {
        acc += f.evaluate(&word[i..i + depth])?;
        out.push(acc / (i + 1) as f64);
    }
    Ok(out)
}
