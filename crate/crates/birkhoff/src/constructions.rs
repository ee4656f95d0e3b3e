//! Generators for explicit potentials with prescribed spectral behaviour:
//! indicator and signed reference tables, block-pattern perturbations whose
//! upper endpoint keeps positive dimension, orbit-distance perturbations
//! that collapse it to zero, single-peak tables, leading-run staircases,
//! majority and biased windows, and single-cylinder bumps that strictly
//! separate the essential maximum from every orbit average.
//!
//! Every generator is a pure function of its arguments: same inputs, bit
//! identical outputs.

use crate::debruijn::endpoints;
use crate::error::{Error, Result};
use crate::shift::{index_to_word, PccFunction, SymbolFunction, ENUMERATION_CAP};

/// Depth-1 indicator of the cylinder `[1]`: the running average of a point
/// is its density of `1` symbols.
pub fn example_indicator() -> PccFunction {
    PccFunction::new(1, vec![0.0, 1.0]).expect("fixed table is valid")
}

/// Depth-3 signed table with values -2, -3, -2, 1, -1, 2, 3, 2 in index
/// order; antisymmetric under symbol-wise complement, with a spectrum whose
/// support is strictly inside the value range.
pub fn example23() -> PccFunction {
    PccFunction::new(3, vec![-2.0, -3.0, -2.0, 1.0, -1.0, 2.0, 3.0, 2.0])
        .expect("fixed table is valid")
}

/// A potential `h = f + bump` built from two block patterns `X` and `Y`:
/// every point assembled from those blocks holds a window average `b*`
/// strictly above the largest cycle mean of the base `f`, while the set of
/// such points keeps Hausdorff dimension `1/|X|`.
#[derive(Debug, Clone)]
pub struct ConstructionT41 {
    /// Base potential the construction perturbs.
    pub base: PccFunction,
    /// Perturbation budget; the bump itself has height `eps/4`.
    pub eps: f64,
    /// Period word of a maximizing cycle of the base, padded so its length
    /// is a multiple of the base depth.
    pub a_word: Vec<u8>,
    /// Constant block of the same length as `a_word`, opposite in symbol
    /// to an all-constant `a_word`.
    pub b_word: Vec<u8>,
    /// Number of leading `a_word` repetitions shared by both patterns.
    pub ell: usize,
    /// Chain length used by the bump's membership test; `ell + 7`.
    pub m: usize,
    /// First block pattern: `a_word^(2*ell+2) b_word a_word^2`.
    pub x_word: Vec<u8>,
    /// Second block pattern: `a_word^(2*ell+1) b_word a_word^3`.
    pub y_word: Vec<u8>,
    /// Common window average of `h` along points assembled from the block
    /// patterns, for any assembly that never repeats a single pattern `m`
    /// times in a row (such a run lets the dropped-`a_word` re-parse add
    /// one extra bump to the window).
    pub b_star: f64,
    /// Largest cycle mean of the base potential.
    pub alpha_star_max_base: f64,
    /// The perturbed potential; procedural because its effective depth is
    /// `m * |X|` symbols.
    pub h: SymbolFunction,
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Whether some left extension of `w` by at most `ell - 1` copies of `a`
/// starts with `m` consecutive blocks, each equal to `x` or `y`.
///
/// Prepending copies of `a` is equivalent to asking for an arbitrary left
/// extension of that length: both patterns open with a run of more than
/// `ell` copies of `a`, so any extension completing a block chain is
/// forced to consist of `a`s.
fn block_pattern_hit(a: &[u8], x: &[u8], y: &[u8], ell: usize, m: usize, w: &[u8]) -> bool {
    let ka = a.len();
    let bl = x.len();
    'shifts: for i in 0..ell {
        let pre = i * ka;
        let sym = |q: usize| if q < pre { a[q % ka] } else { w[q - pre] };
        let mut q = 0;
        for _ in 0..m {
            let mut alive_x = true;
            let mut alive_y = true;
            for o in 0..bl {
                let s = sym(q);
                alive_x &= s == x[o];
                alive_y &= s == y[o];
                if !alive_x && !alive_y {
                    continue 'shifts;
                }
                q += 1;
            }
        }
        return true;
    }
    false
}

/// Perturbs a non-degenerate potential `f` by a bump of height `eps/4` on
/// the shifts of a block-pattern set, so that the points assembled from
/// the patterns average strictly more than any cycle mean of `f` while
/// `sup |h - f| = eps/4 < eps`.
///
/// The pattern scale `ell` is the smallest admissible value unless
/// overridden; an override must itself be admissible.
pub fn theorem41(
    f: &PccFunction,
    eps: f64,
    ell_override: Option<usize>,
) -> Result<ConstructionT41> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "perturbation size must be positive, got {eps}"
        )));
    }
    let ep = endpoints(f)?;
    if !(ep.alpha_star_max > ep.alpha_star_min) {
        return Err(Error::Degenerate(
            "all cycle means coincide, so no pattern can beat them".into(),
        ));
    }
    let witness = ep.witness_max.canonical();
    let reps = f.depth() / gcd(witness.period_len(), f.depth());
    let a_word = witness.period_word().repeat(reps);
    let ka = a_word.len();
    let b_word = if a_word.iter().all(|&s| s == 0) {
        vec![1u8; ka]
    } else {
        vec![0u8; ka]
    };
    let delta = ep.alpha_star_max - f.alpha_min();
    // two admissibility inequalities: the bump must outweigh the worst
    // block deficit, and occupy more than 1/32 of each window after the
    // 1/8 discount
    let admissible =
        |ell: usize| (ell as f64) * eps / 8.0 > 5.0 * ka as f64 * delta && 16 * ell > 40;
    let ell = match ell_override {
        Some(l) => {
            if !admissible(l) {
                return Err(Error::InvalidParameter(format!(
                    "pattern scale {l} violates the admissibility inequalities"
                )));
            }
            l
        }
        None => {
            let mut l = ((40.0 * ka as f64 * delta / eps).floor() as usize).saturating_add(1).max(3);
            while !admissible(l) {
                l += 1;
            }
            l
        }
    };
    let block_len_wide = (2 * ell as u128 + 5) * ka as u128;
    if (ell as u128 + 8) * block_len_wide > 1 << 31 {
        return Err(Error::InvalidParameter(format!(
            "pattern scale {ell} needs evaluation windows beyond 2^31 symbols; enlarge eps"
        )));
    }
    let m = ell + 7;
    let block_len = block_len_wide as usize;
    let mut x_word = a_word.repeat(2 * ell + 2);
    x_word.extend_from_slice(&b_word);
    x_word.extend_from_slice(&a_word.repeat(2));
    let mut y_word = a_word.repeat(2 * ell + 1);
    y_word.extend_from_slice(&b_word);
    y_word.extend_from_slice(&a_word.repeat(3));
    debug_assert_eq!(x_word.len(), block_len);
    debug_assert_eq!(y_word.len(), block_len);

    let h = {
        let base = f.clone();
        let (a, x, y) = (a_word.clone(), x_word.clone(), y_word.clone());
        let bump = eps / 4.0;
        SymbolFunction::from_rule(m * block_len, move |w| match base.evaluate(w) {
            Ok(v) if block_pattern_hit(&a, &x, &y, ell, m, w) => v + bump,
            Ok(v) => v,
            Err(_) => f64::NAN,
        })
    };

    // one window of the base along a block plus the leading-run lookahead
    // (identical for both patterns), plus the ell bump positions every
    // window carries
    let mut lookahead = x_word.clone();
    lookahead.extend_from_slice(&a_word);
    let mut sum = 0.0;
    for j in 0..block_len {
        sum += f.evaluate(&lookahead[j..])?;
    }
    let b_star = (sum + ell as f64 * (eps / 4.0)) / block_len as f64;

    Ok(ConstructionT41 {
        base: f.clone(),
        eps,
        a_word,
        b_word,
        ell,
        m,
        x_word,
        y_word,
        b_star,
        alpha_star_max_base: ep.alpha_star_max,
        h,
    })
}

/// Block choice for assembling test points of a [`ConstructionT41`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XyBlock {
    X,
    Y,
}

/// Window averages of `c.h` along the point assembled from `u_choices`,
/// one average per block-aligned window `t = 0..=t_max`.
///
/// Each window must start inside an explicitly chosen block, so at least
/// `t_max + 1` choices are required. Past the supplied choices the point
/// continues with alternating blocks (starting opposite the final choice),
/// so the continuation never forms the long single-pattern runs that add
/// an extra bump; supplying such a run explicitly does surface it.
pub fn sp7a_window_averages(
    c: &ConstructionT41,
    u_choices: &[XyBlock],
    t_max: usize,
) -> Result<Vec<f64>> {
    if u_choices.len() < t_max + 1 {
        return Err(Error::InvalidParameter(format!(
            "only {} blocks supplied; windows through shift {t_max} need at least {}",
            u_choices.len(),
            t_max + 1
        )));
    }
    let bl = c.x_word.len();
    let blocks = t_max + 1 + c.m;
    let mut seq = Vec::with_capacity(blocks);
    for b in 0..blocks {
        let choice = u_choices.get(b).copied().unwrap_or_else(|| match seq[b - 1] {
            XyBlock::X => XyBlock::Y,
            XyBlock::Y => XyBlock::X,
        });
        seq.push(choice);
    }
    let mut text = Vec::with_capacity(blocks * bl);
    for &choice in &seq {
        match choice {
            XyBlock::X => text.extend_from_slice(&c.x_word),
            XyBlock::Y => text.extend_from_slice(&c.y_word),
        }
    }
    let mut averages = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        let mut sum = 0.0;
        for j in 0..bl {
            sum += c.h.evaluate(&text[t * bl + j..])?;
        }
        averages.push(sum / bl as f64);
    }
    Ok(averages)
}

/// Checks the defining guarantee of a [`ConstructionT41`] on the point
/// assembled from `u_choices`: every block-aligned window average through
/// shift `t_max` exceeds `alpha_star_max_base + eps / (32 |a_word|)` and
/// agrees with `b_star` to within 1e-12.
pub fn verify_sp7a(c: &ConstructionT41, u_choices: &[XyBlock], t_max: usize) -> Result<bool> {
    let averages = sp7a_window_averages(c, u_choices, t_max)?;
    let threshold = c.alpha_star_max_base + c.eps / (32.0 * c.a_word.len() as f64);
    Ok(averages
        .iter()
        .all(|&v| v > threshold && (v - c.b_star).abs() <= 1e-12))
}

/// Cap on the truncation depth of [`lemma45`]; the output table has
/// `2^m` entries.
const ORBIT_TRUNCATION_CAP: usize = 24;

/// Perturbs `f` by `-eps * g0 + c`, where `g0` is the metric distance to
/// the orbit of a maximizing periodic point (truncated to depth `m`, which
/// discards at most `2^-m`) and `c = eps * integral(g0)` recenters the
/// perturbation to integral zero.
///
/// The result keeps the same maximizing orbit but pulls every other cycle
/// strictly below it, so the dimension at the upper endpoint collapses.
pub fn lemma45(f: &PccFunction, eps: f64, m: usize) -> Result<PccFunction> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "perturbation size must be positive, got {eps}"
        )));
    }
    if m > ORBIT_TRUNCATION_CAP {
        return Err(Error::DepthTooLarge { depth: m, cap: ORBIT_TRUNCATION_CAP });
    }
    let witness = endpoints(f)?.witness_max.canonical();
    let p = witness.period_len();
    let required = f.depth() + p;
    if m < required {
        return Err(Error::InvalidParameter(format!(
            "truncation depth {m} cannot separate depth {} cylinders along a period-{p} orbit \
             (need at least {required})",
            f.depth()
        )));
    }
    let pattern = witness.period_word();
    let size = 1usize << m;
    let mut g0 = Vec::with_capacity(size);
    for idx in 0..size {
        let mut best = f64::INFINITY;
        for rot in 1..=p {
            let mut d = 0.0;
            let mut weight = 0.5;
            for n in 0..m {
                let w_n = ((idx >> (m - 1 - n)) & 1) as u8;
                if w_n != pattern[(rot + n) % p] {
                    d += weight;
                }
                if d >= best {
                    break;
                }
                weight *= 0.5;
            }
            best = best.min(d);
        }
        g0.push(best);
    }
    let g0 = PccFunction::new(m, g0)?;
    let c = eps * g0.integrate();
    let pert = PccFunction::new(m, g0.table().iter().map(|&v| c - eps * v).collect())?;
    f.refine(m)?.add(&pert)
}

/// Depth-`run_len` table equal to `b` on the all-ones word and `a`
/// everywhere else. Its spectrum is supported on all of `[a, b]`, yet only
/// the all-ones loop attains `b`, so the upper endpoint has dimension 0.
pub fn lemma53(a: f64, b: f64, run_len: usize) -> Result<PccFunction> {
    if !a.is_finite() || !b.is_finite() || !(b > a) {
        return Err(Error::InvalidParameter(format!(
            "peak must exceed the floor, got floor {a}, peak {b}"
        )));
    }
    if run_len < 6 {
        return Err(Error::InvalidParameter(format!(
            "run length {run_len} is below the minimum of 6"
        )));
    }
    if run_len > ENUMERATION_CAP {
        return Err(Error::DepthTooLarge { depth: run_len, cap: ENUMERATION_CAP });
    }
    let mut table = vec![a; 1 << run_len];
    *table.last_mut().expect("table is nonempty") = b;
    PccFunction::new(run_len, table)
}

/// Validated parameters for the leading-run staircase: strictly increasing
/// run lengths `L_1 < ... < L_J` (all above 5) with dyadic plateau values
/// `t_j = 1 - 2^-j`.
#[derive(Debug, Clone)]
pub struct StaircaseParams {
    run_lengths: Vec<u64>,
    thresholds: Vec<f64>,
    tau: Option<f64>,
}

impl StaircaseParams {
    pub fn new(run_lengths: Vec<u64>, tau: Option<f64>) -> Result<Self> {
        if run_lengths.is_empty() {
            return Err(Error::Empty("staircase needs at least one run length".into()));
        }
        if run_lengths[0] <= 5 {
            return Err(Error::InvalidParameter(format!(
                "first run length must exceed 5, got {}",
                run_lengths[0]
            )));
        }
        if run_lengths.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "run lengths must be strictly increasing".into(),
            ));
        }
        if let Some(t) = tau {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "tau must be positive, got {t}"
                )));
            }
        }
        let thresholds = (1..=run_lengths.len())
            .map(|j| 1.0 - 0.5f64.powi(j as i32))
            .collect();
        Ok(Self { run_lengths, thresholds, tau })
    }

    /// Builds the run lengths from [`lchoice_selector`], bumping any
    /// repeats upward to keep the sequence strictly increasing (a larger
    /// run length still satisfies its level's inequality).
    pub fn from_selector(levels: usize, tau: f64) -> Result<Self> {
        if levels == 0 {
            return Err(Error::Empty("staircase needs at least one level".into()));
        }
        let mut run_lengths: Vec<u64> = Vec::with_capacity(levels);
        for n in 1..=levels {
            let picked = lchoice_selector(n as u32, tau)?;
            let floor = run_lengths.last().map_or(5, |&prev| prev) + 1;
            run_lengths.push(picked.max(floor));
        }
        Self::new(run_lengths, Some(tau))
    }

    pub fn levels(&self) -> usize {
        self.run_lengths.len()
    }

    pub fn run_lengths(&self) -> &[u64] {
        &self.run_lengths
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn tau(&self) -> Option<f64> {
        self.tau
    }
}

/// Staircase potential classifying the leading symbol run: a leading block
/// of 1s with length in `[L_j, L_{j+1})` maps to `t_j` (length at least
/// `L_J` maps to `t_J`), a leading block of 0s maps to `-t_j` symmetrically,
/// and runs shorter than `L_1` map to 0.
///
/// The value depends only on the first `L_J` symbols; the output is
/// procedural so the run lengths may exceed any table size.
pub fn theorem52(params: &StaircaseParams) -> SymbolFunction {
    let run_lengths = params.run_lengths.clone();
    let thresholds = params.thresholds.clone();
    let depth = usize::try_from(*run_lengths.last().expect("validated nonempty"))
        .unwrap_or(usize::MAX);
    SymbolFunction::from_rule(depth, move |w| {
        let leading = w[0];
        let run = w[..depth].iter().take_while(|&&s| s == leading).count() as u64;
        let mut value = 0.0;
        for (j, &lj) in run_lengths.iter().enumerate() {
            if run >= lj {
                value = thresholds[j];
            } else {
                break;
            }
        }
        if leading == 0 {
            -value
        } else {
            value
        }
    })
}

/// Table cap for [`theorem52_table`].
const STAIRCASE_TABLE_CAP: u64 = 16;

/// Materializes a staircase potential as a depth-`L_J` table; refuses run
/// lengths past 16, where only lazy rule evaluation stays feasible.
pub fn theorem52_table(params: &StaircaseParams) -> Result<PccFunction> {
    let deepest = *params.run_lengths().last().expect("validated nonempty");
    if deepest > STAIRCASE_TABLE_CAP {
        return Err(Error::InvalidParameter(format!(
            "staircase depth {deepest} exceeds the table cap {STAIRCASE_TABLE_CAP}; \
             evaluate lazily through the rule form"
        )));
    }
    theorem52(params).to_table()
}

/// Smallest run length `L > 5` with `(e L / 2)^(2/L) < 2^(tau / 2^(2 n))`.
///
/// The left side decreases strictly in `L`, so a doubling bracket plus
/// bisection finds the minimum; levels whose solution exceeds `u64` range
/// are reported as unreachable.
pub fn lchoice_selector(level: u32, tau: f64) -> Result<u64> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::InvalidParameter(format!("tau must be positive, got {tau}")));
    }
    let rhs = tau * f64::exp2(-2.0 * f64::from(level)) * std::f64::consts::LN_2;
    let holds = |l: u64| {
        let lf = l as f64;
        (2.0 / lf) * (1.0 + (lf / 2.0).ln()) < rhs
    };
    if holds(6) {
        return Ok(6);
    }
    let mut lo = 6u64;
    let mut hi = 12u64;
    while !holds(hi) {
        lo = hi;
        hi = hi.checked_mul(2).ok_or_else(|| {
            Error::NoConvergence(format!(
                "no representable run length reaches level {level} at tau {tau}"
            ))
        })?;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Depth `2k+1` window majority vote: +1 when the window holds more 1s
/// than 0s, otherwise -1. The window length is odd, so there are no ties.
pub fn remark55_majority(k: usize) -> Result<PccFunction> {
    if k == 0 {
        return Err(Error::InvalidParameter("majority window needs k >= 1".into()));
    }
    let depth = 2 * k + 1;
    if depth > ENUMERATION_CAP {
        return Err(Error::DepthTooLarge { depth, cap: ENUMERATION_CAP });
    }
    let table = (0..1usize << depth)
        .map(|idx| if idx.count_ones() as usize > k { 1.0 } else { -1.0 })
        .collect();
    PccFunction::new(depth, table)
}

/// Depth-`k` table equal to -1 on the all-zeros word and `1/(2^k - 1)`
/// elsewhere; the masses balance so the integral vanishes.
pub fn remark55_biased(k: usize) -> Result<PccFunction> {
    if k == 0 {
        return Err(Error::InvalidParameter("biased window needs k >= 1".into()));
    }
    if k > ENUMERATION_CAP {
        return Err(Error::DepthTooLarge { depth: k, cap: ENUMERATION_CAP });
    }
    let reward = 1.0 / ((1u64 << k) - 1) as f64;
    let mut table = vec![reward; 1 << k];
    table[0] = -1.0;
    PccFunction::new(k, table)
}

/// [`derevealize`] plus the word of the bumped cylinder.
pub fn derevealize_with_info(f: &PccFunction, eps: f64) -> Result<(PccFunction, Vec<u8>)> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "perturbation size must be positive, got {eps}"
        )));
    }
    let k = f.depth();
    let top = f.alpha_max();
    let full = (1usize << k) - 1;
    let mixed = (0..=full).find(|&i| f.value(i) == top && i != 0 && i != full);
    let (depth, bump_index, word) = match mixed {
        // a mixed maximal word cannot tile any orbit, so its visit
        // frequency stays below 1 on every cycle
        Some(idx) => (k, idx, index_to_word(k, idx)),
        // otherwise extend an all-constant maximal word by the opposite
        // symbol; occurrences are then at least k+1 steps apart
        None if f.value(full) == top => {
            let mut w = vec![1u8; k];
            w.push(0);
            (k + 1, (1usize << (k + 1)) - 2, w)
        }
        None => {
            let mut w = vec![0u8; k];
            w.push(1);
            (k + 1, 1, w)
        }
    };
    let mut table = f.refine(depth)?.table().to_vec();
    table[bump_index] += eps;
    Ok((PccFunction::new(depth, table)?, word))
}

/// Raises one maximal cylinder of `f` by `eps` so the perturbed table's
/// maximum exceeds every cycle mean: the bumped word is chosen so that no
/// orbit can sit inside its cylinder at every shift.
pub fn derevealize(f: &PccFunction, eps: f64) -> Result<PccFunction> {
    derevealize_with_info(f, eps).map(|(g, _)| g)
}
