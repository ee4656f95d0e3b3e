//! Hausdorff dimensions of block-generated self-similar subsets of the
//! shift, via the Moran equation, and the binary-entropy dimension of
//! digit-frequency level sets.
//!
//! A set of binary blocks `w_1..w_m` generates the set of all infinite
//! concatenations; under the shift metric each block acts as a contraction
//! by 2^{−|w_i|}, so the dimension solves Σ 2^{−|w_i| s} = 1.

use crate::error::{Error, Result};
use crate::shift::validate_word;

/// Generator blocks for a self-similar subset. Separation is syntactic:
/// either all blocks share one length, or the set is prefix-free; both
/// make distinct concatenations produce distinct sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockAlphabet {
    blocks: Vec<Vec<u8>>,
}

impl BlockAlphabet {
    pub fn new(blocks: Vec<Vec<u8>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Empty("block alphabet".into()));
        }
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::Empty("generator block".into()));
            }
            validate_word(b)?;
        }
        for (i, x) in blocks.iter().enumerate() {
            for y in blocks.iter().skip(i + 1) {
                if x == y {
                    return Err(Error::InvalidParameter(format!(
                        "duplicate block {}",
                        crate::shift::word_to_string(x)
                    )));
                }
            }
        }
        let same_length = blocks.iter().all(|b| b.len() == blocks[0].len());
        if !same_length {
            for (i, x) in blocks.iter().enumerate() {
                for (j, y) in blocks.iter().enumerate() {
                    if i != j && y.len() >= x.len() && &y[..x.len()] == x.as_slice() {
                        return Err(Error::InvalidParameter(format!(
                            "block {} is a prefix of {}; separation fails",
                            crate::shift::word_to_string(x),
                            crate::shift::word_to_string(y)
                        )));
                    }
                }
            }
        }
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[Vec<u8>] {
        &self.blocks
    }
}

/// Unique s ≥ 0 with Σ_i 2^{−|w_i|·s} = 1, by bisection on
/// [0, 1 + log₂ m] to residual below 1e−14. For m blocks of one common
/// length L this is log m / (L log 2).
pub fn moran_dimension(alphabet: &BlockAlphabet) -> Result<f64> {
    let lengths: Vec<f64> = alphabet.blocks().iter().map(|b| b.len() as f64).collect();
    let value = |s: f64| -> f64 { lengths.iter().map(|&l| (-l * s).exp2()).sum::<f64>() };

    let mut lo = 0.0f64;
    let mut hi = 1.0 + (lengths.len() as f64).log2();
    let root = 'found: {
        if (value(lo) - 1.0).abs() < 1e-14 {
            break 'found lo;
        }
        debug_assert!(value(lo) > 1.0 && value(hi) < 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let v = value(mid);
            if (v - 1.0).abs() < 1e-14 {
                break 'found mid;
            }
            if v > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    // Kraft: separated binary blocks satisfy Σ2^{−L_i} ≤ 1, so the true
    // root never exceeds 1; stray ulps from bisection are clipped
    Ok(root.clamp(0.0, 1.0))
}

/// Dimension of the set of sequences whose digit-1 frequency is α: the
/// binary entropy −(α log α + (1−α) log(1−α))/log 2, with 0·log 0 = 0.
pub fn eggleston_dimension(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("frequency {alpha} outside [0,1]")));
    }
    let xlx = |x: f64| if x == 0.0 { 0.0 } else { x * x.ln() };
    Ok(-(xlx(alpha) + xlx(1.0 - alpha)) / std::f64::consts::LN_2)
}
