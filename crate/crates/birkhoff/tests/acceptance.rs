//! The release gate: twelve numbered end-to-end checks covering the curve
//! machinery, the graph endpoints, the brute-force oracles, the explicit
//! constructions, and the dimension formulas. Each check prints a single
//! `criterion N: PASS — …` line (visible under `--nocapture`) or fails its
//! assertion with a matching FAIL message.

use std::f64::consts::LN_2;
use std::time::Instant;

use birkhoff::constructions::{
    derevealize_with_info, example23, example_indicator, lemma53, theorem41, verify_sp7a,
    sp7a_window_averages, XyBlock,
};
use birkhoff::debruijn::{build_graph, endpoints, endpoints_exact, max_mean_cycle, Side};
use birkhoff::dimension::{moran_dimension, BlockAlphabet};
use birkhoff::oracle::{
    counting_lambda_many, enumerate_cycle_means, lemma53_cover_check, uniform_n0,
};
use birkhoff::shift::PccFunction;
use birkhoff::thermo::{
    endpoint_dimension, gibbs_measure, norm_continuity_check, one_sided_slopes, pressure,
    spectrum_at, spectrum_curve,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn binary_entropy(alpha: f64) -> f64 {
    if alpha <= 0.0 || alpha >= 1.0 {
        return 0.0;
    }
    -(alpha * alpha.ln() + (1.0 - alpha) * (1.0 - alpha).ln()) / LN_2
}

/// Random table whose entries are multiples of `1/denom` in [-range, range];
/// dyadic denominators keep every Birkhoff sum exactly representable.
fn random_dyadic_table(rng: &mut ChaCha8Rng, depth: usize, range: i32, denom: i32) -> PccFunction {
    let table: Vec<f64> = (0..1usize << depth)
        .map(|_| f64::from(rng.gen_range(-range * denom..=range * denom)) / f64::from(denom))
        .collect();
    PccFunction::new(depth, table).unwrap()
}

#[test]
fn criterion_01_frequency_curve_matches_binary_entropy() {
    let start = Instant::now();
    let f = example_indicator();
    let curve = spectrum_curve(&f, 101).unwrap();
    let elapsed = start.elapsed();

    let mut max_err = 0.0f64;
    for &(alpha, s) in &curve.samples {
        max_err = max_err.max((s - binary_entropy(alpha)).abs());
    }
    assert!(
        max_err < 1e-8,
        "criterion 1: FAIL — curve deviates from binary entropy by {max_err}"
    );
    assert!(
        curve.alpha_star_min.abs() <= 1e-12 && (curve.alpha_star_max - 1.0).abs() <= 1e-12,
        "criterion 1: FAIL — endpoints ({}, {}) are not (0, 1)",
        curve.alpha_star_min,
        curve.alpha_star_max
    );
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "criterion 1: FAIL — curve took {elapsed:?}, budget 1 s"
    );
    println!(
        "criterion 1: PASS — 101-point curve within {max_err:.2e} of binary entropy, \
         endpoints (0, 1), {} ms",
        elapsed.as_millis()
    );
}

#[test]
fn criterion_02_antisymmetric_example_endpoints_and_dimensions() {
    let start = Instant::now();
    let f = example23();
    let (lo, hi) = endpoints_exact(&f).unwrap();
    let dim_min = endpoint_dimension(&f, Side::Min).unwrap();
    let dim_max = endpoint_dimension(&f, Side::Max).unwrap();
    let elapsed = start.elapsed();

    assert!(
        lo == BigRational::from_integer(BigInt::from(-2))
            && hi == BigRational::from_integer(BigInt::from(2)),
        "criterion 2: FAIL — exact endpoints ({lo}, {hi}) are not (-2, 2)"
    );
    assert!(
        dim_min >= 1.0 / 3.0 - 1e-9 && dim_max >= 1.0 / 3.0 - 1e-9,
        "criterion 2: FAIL — endpoint dimensions ({dim_min}, {dim_max}) below 1/3"
    );
    assert!(
        (dim_min - dim_max).abs() <= 1e-10,
        "criterion 2: FAIL — sides disagree: {dim_min} vs {dim_max}"
    );
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "criterion 2: FAIL — took {elapsed:?}, budget 1 s"
    );
    println!(
        "criterion 2: PASS — exact endpoints (-2, 2), symmetric endpoint dimension \
         {dim_min:.6} ≥ 1/3, sides agree within {:.1e}, {} ms",
        (dim_min - dim_max).abs(),
        elapsed.as_millis()
    );
}

#[test]
fn criterion_03_cycle_dp_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC3);
    let mut worst = 0.0f64;
    let mut failures = 0usize;
    for depth in 1..=4usize {
        for _ in 0..25 {
            let f = random_dyadic_table(&mut rng, depth, 4, 8);
            let dp = max_mean_cycle(&build_graph(&f)).unwrap().mean;
            let enumerated = enumerate_cycle_means(&f, 1 << depth)
                .unwrap()
                .into_iter()
                .map(|(_, m)| m)
                .fold(f64::NEG_INFINITY, f64::max);
            let err = (dp - enumerated).abs();
            worst = worst.max(err);
            if err > 1e-12 {
                failures += 1;
            }
        }
    }
    assert!(
        failures == 0,
        "criterion 3: FAIL — {failures}/100 mismatches, worst {worst:.2e}"
    );
    println!(
        "criterion 3: PASS — 100 random tables (depths 1–4), DP max-mean equals \
         enumeration, worst gap {worst:.2e}"
    );
}

#[test]
fn criterion_04_thermodynamic_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC4);
    let mut worst_p0 = 0.0f64;
    let mut worst_gibbs = 0.0f64;
    let mut worst_sandwich: (f64, f64) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..25 {
        let depth = rng.gen_range(1..=3usize);
        let table: Vec<f64> = (0..1usize << depth).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = PccFunction::new(depth, table).unwrap();

        worst_p0 = worst_p0.max((pressure(&f, 0.0).unwrap() - LN_2).abs());

        for t in -8..=8 {
            let t = f64::from(t);
            let p = pressure(&f, t).unwrap();
            let mu = gibbs_measure(&f, t).unwrap();
            worst_gibbs = worst_gibbs.max((mu.entropy() + t * mu.mean() - p).abs());
        }

        let alpha_max = endpoints(&f).unwrap().alpha_star_max;
        for t in [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0] {
            let gap = pressure(&f, t).unwrap() - t * alpha_max;
            worst_sandwich.0 = worst_sandwich.0.min(gap);
            worst_sandwich.1 = worst_sandwich.1.max(gap);
        }
    }
    assert!(
        worst_p0 <= 1e-12,
        "criterion 4: FAIL — P(0) off log 2 by {worst_p0:.2e}"
    );
    assert!(
        worst_gibbs <= 1e-8,
        "criterion 4: FAIL — Gibbs identity off by {worst_gibbs:.2e}"
    );
    assert!(
        worst_sandwich.0 >= -1e-10 && worst_sandwich.1 <= LN_2 + 1e-10,
        "criterion 4: FAIL — P(t) − t·α*_max left the [0, log 2] band: {worst_sandwich:?}"
    );
    println!(
        "criterion 4: PASS — 25 random tables: |P(0) − log 2| ≤ {worst_p0:.1e}, \
         Gibbs identity within {worst_gibbs:.1e}, pressure sandwich range \
         [{:.3e}, {:.4}] ⊂ [0, log 2]",
        worst_sandwich.0, worst_sandwich.1
    );
}

#[test]
fn criterion_05_legendre_vs_window_counting() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC5);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let v0: f64 = rng.gen_range(-0.5..0.5);
        let width: f64 = rng.gen_range(0.26..0.30);
        let f = PccFunction::new(1, vec![v0, v0 + width]).unwrap();
        let alphas: Vec<f64> = (1..=9).map(|i| v0 + width * f64::from(i) / 10.0).collect();
        let counted = counting_lambda_many(&f, &alphas, 0.02, 22).unwrap();
        for (&alpha, &c) in alphas.iter().zip(&counted) {
            let gap = (spectrum_at(&f, alpha).unwrap() - c).abs();
            worst = worst.max(gap);
            assert!(
                gap <= 0.05,
                "criterion 5: FAIL — gap {gap} at alpha {alpha} for table [{v0}, {}]",
                v0 + width
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 120.0,
        "criterion 5: FAIL — took {elapsed:?}, budget 2 min"
    );
    println!(
        "criterion 5: PASS — 10 random depth-1 tables × 9 interior points, analytic vs \
         22-window counting within {worst:.4} ≤ 0.05, {} ms",
        elapsed.as_millis()
    );
}

#[test]
fn criterion_06_hutchinson_dimensions() {
    let b_alphabet = BlockAlphabet::new(vec![vec![0, 0, 0], vec![0, 0, 1]]).unwrap();
    let b_dim = moran_dimension(&b_alphabet).unwrap();
    assert!(
        (b_dim - 1.0 / 3.0).abs() <= 1e-12,
        "criterion 6: FAIL — two-block alphabet dimension {b_dim} is not 1/3"
    );

    let c = theorem41(&example_indicator(), 0.5, None).unwrap();
    let block_len = c.x_word.len();
    let xy = BlockAlphabet::new(vec![c.x_word.clone(), c.y_word.clone()]).unwrap();
    let xy_dim = moran_dimension(&xy).unwrap();
    let predicted = 1.0 / block_len as f64;
    assert!(
        (xy_dim - predicted).abs() <= 1e-12,
        "criterion 6: FAIL — {{X, Y}} dimension {xy_dim} is not 1/{block_len}"
    );
    println!(
        "criterion 6: PASS — {{000, 001}} alphabet dimension 1/3 within 1e-12; \
         {{X, Y}} (|X| = {block_len}) dimension 1/{block_len} within 1e-12"
    );
}

#[test]
fn criterion_07_block_construction_verifier() {
    let c = theorem41(&example_indicator(), 0.5, None).unwrap();
    let ka = c.a_word.len() as f64;
    let threshold = c.alpha_star_max_base + c.eps / (32.0 * ka);
    let margin = c.b_star - threshold;
    assert!(
        margin > 0.0,
        "criterion 7: FAIL — b* {} does not clear the threshold {threshold}",
        c.b_star
    );

    use XyBlock::{X, Y};
    let choices: [&[XyBlock]; 3] = [&[X, X, X, X], &[X, Y, X, Y], &[Y, Y, X, X]];
    let mut all_averages: Vec<f64> = Vec::new();
    for u in choices {
        assert!(
            verify_sp7a(&c, u, 3).unwrap(),
            "criterion 7: FAIL — verifier rejected {u:?}"
        );
        all_averages.extend(sp7a_window_averages(&c, u, 3).unwrap());
    }
    let spread = all_averages.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
        - all_averages.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    assert!(
        spread <= 1e-12,
        "criterion 7: FAIL — window averages spread {spread:.2e} across block choices"
    );
    println!(
        "criterion 7: PASS — XXXX/XYXY/YYXX all verified at t_max = 3; b* = {:.6} clears \
         α*_max + ε/(32·k_A) = {threshold} by margin {margin:.6}; {} window averages \
         agree within {spread:.1e}",
        c.b_star,
        all_averages.len()
    );
}

#[test]
fn criterion_08_raised_cylinder_bound() {
    let start = Instant::now();
    let mut values = Vec::new();
    for l in [6usize, 9, 12] {
        let f = lemma53(-1.0, 1.0, l).unwrap();
        values.push(spectrum_at(&f, 0.5).unwrap());
    }
    assert!(
        values[0] > values[1] && values[1] > values[2],
        "criterion 8: FAIL — S(1/2) not decreasing across L ∈ {{6, 9, 12}}: {values:?}"
    );
    assert!(
        values[2] <= 0.25 + 0.2,
        "criterion 8: FAIL — S(1/2) = {} at L = 12 exceeds β + 0.2 = 0.45",
        values[2]
    );

    let mut checked = 0usize;
    for l in 6..=24usize {
        for n in 1..=(24 - l + 1) {
            if (n + l - 1) % l != 0 {
                continue;
            }
            let report = lemma53_cover_check(-1.0, 1.0, l, 0.25, n).unwrap();
            assert!(
                report.pass,
                "criterion 8: FAIL — cover bound violated at (L, N) = ({l}, {n}): \
                 {} words vs bound {}",
                report.exact_count, report.bound
            );
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 120.0,
        "criterion 8: FAIL — took {elapsed:?}, budget 2 min"
    );
    println!(
        "criterion 8: PASS — S(1/2) decreasing {:.4} > {:.4} > {:.4} ≤ 0.45; cover bound \
         holds on all {checked} admissible (L, N) with N+L−1 ≤ 24; {} ms",
        values[0],
        values[1],
        values[2],
        elapsed.as_millis()
    );
}

#[test]
fn criterion_09_endpoint_slope_dichotomy() {
    let f = example_indicator();
    let curve = spectrum_curve(&f, 101).unwrap();
    let deltas = [1e-1, 1e-2, 1e-3, 1e-4];
    let mut steepest = f64::INFINITY;
    for side in [Side::Min, Side::Max] {
        let slopes = one_sided_slopes(&curve, side, &deltas).unwrap();
        let mags: Vec<f64> = slopes.iter().map(|s| s.abs()).collect();
        assert!(
            mags.windows(2).all(|w| w[1] > w[0]),
            "criterion 9: FAIL — {side:?} chord magnitudes not increasing: {mags:?}"
        );
        assert!(
            mags[3] > 10.0,
            "criterion 9: FAIL — {side:?} chord magnitude {} at δ = 1e-4 below 10",
            mags[3]
        );
        steepest = steepest.min(mags[3]);
    }

    let g = lemma53(-1.0, 1.0, 12).unwrap();
    let top = endpoints(&g).unwrap().alpha_star_max;
    let s_half = spectrum_at(&g, 0.5).unwrap();
    let s_top = endpoint_dimension(&g, Side::Max).unwrap();
    let chord = (s_top - s_half) / (top - 0.5);
    let reference = -s_half / (1.0 - 0.5);
    let ratio = chord / reference;
    assert!(
        (0.5..=2.0).contains(&ratio),
        "criterion 9: FAIL — chord slope {chord} vs reference {reference}: ratio {ratio}"
    );
    println!(
        "criterion 9: PASS — both one-sided chord magnitudes increase and reach ≥ {steepest:.2} \
         at δ = 1e-4; raised-cylinder chord/reference ratio {ratio:.3} ∈ [1/2, 2]"
    );
}

#[test]
fn criterion_10_derevealing() {
    let eps = 0.5;
    let mut rng = ChaCha8Rng::seed_from_u64(0xC10);
    let mut cases: Vec<PccFunction> = (0..20)
        .map(|_| {
            let depth = rng.gen_range(1..=3usize);
            random_dyadic_table(&mut rng, depth, 1, 16)
        })
        .collect();
    cases.push(example_indicator());

    let mut refined_cases = 0usize;
    for f in &cases {
        let k = f.depth();
        let f_max = f.table().iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
        let (g, word) = derevealize_with_info(f, eps).unwrap();
        let g_max = g.table().iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
        let g_star = endpoints(&g).unwrap().alpha_star_max;

        assert!(
            g_star < g_max,
            "criterion 10: FAIL — output still revealed: α* = {g_star}, max = {g_max}"
        );
        assert!(
            g_max - f_max == eps,
            "criterion 10: FAIL — max moved by {} instead of ε = {eps}",
            g_max - f_max
        );
        if word.len() == k + 1 && word[..k].iter().all(|&b| b == 1) {
            refined_cases += 1;
            let f_star = endpoints(f).unwrap().alpha_star_max;
            let bound = f_star + eps / (k as f64 + 1.0) + 1e-12;
            assert!(
                g_star <= bound,
                "criterion 10: FAIL — 1^k0 case: α*_g = {g_star} exceeds {bound}"
            );
        }
    }
    println!(
        "criterion 10: PASS — 21 potentials de-revealed: α*_g < α_g,max and \
         α_g,max − α_f,max = ε exactly; 1^k0 refinement bound checked on {refined_cases} case(s)"
    );
}

#[test]
fn criterion_11_norm_continuity() {
    let eps = 0.05;
    let mut rng = ChaCha8Rng::seed_from_u64(0xC11);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let depth = rng.gen_range(1..=3usize);
        let table: Vec<f64> = (0..1usize << depth).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = PccFunction::new(depth, table).unwrap();

        let h_depth = rng.gen_range(1..=3usize);
        let h_table: Vec<f64> =
            (0..1usize << h_depth).map(|_| rng.gen_range(-0.045..0.045)).collect();
        let g = f.add(&PccFunction::new(h_depth, h_table).unwrap()).unwrap();

        let report = norm_continuity_check(&f, &g, eps, 17).unwrap();
        assert!(
            report.pass,
            "criterion 11: FAIL — stability violated, worst gap {}",
            report.worst_gap
        );
        worst = worst.max(report.worst_gap);
    }
    println!(
        "criterion 11: PASS — 50 random perturbed pairs (‖δh‖ < {eps}) all stable, \
         worst spectrum gap {worst:.2e}"
    );
}

#[test]
fn criterion_12_uniformity_constant() {
    let f = example23();
    let eps = 1.0;
    let n0 = uniform_n0(&f, eps).unwrap();
    assert!(n0 == 33, "criterion 12: FAIL — closed form returned {n0}, expected 33");

    let alpha_star_max = endpoints(&f).unwrap().alpha_star_max;
    let k = f.depth();
    let horizon = n0 + 32;
    let mut rng = ChaCha8Rng::seed_from_u64(0xC12);
    let mut worst_avg = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let word: Vec<u8> = (0..horizon + k).map(|_| rng.gen_range(0..=1u8)).collect();
        let mut running = 0.0;
        for n in 1..=horizon {
            running += f.evaluate(&word[n - 1..]).unwrap();
            if n > n0 {
                worst_avg = worst_avg.max(running / n as f64);
            }
        }
    }
    assert!(
        worst_avg <= alpha_star_max + eps,
        "criterion 12: FAIL — window average {worst_avg} exceeded α*_max + ε = {}",
        alpha_star_max + eps
    );
    println!(
        "criterion 12: PASS — N₀ = 33; 1000 random words at N = 34..=65 stay ≤ α*_max + ε \
         (worst average {worst_avg:.4} vs bound {})",
        alpha_star_max + eps
    );
}
