//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status
//! if any criterion fails. `SNAKE_SEED` overrides the default seed of the
//! randomized parts.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snake_core::linalg::eigenvalues;
use snake_core::*;

const DEFAULT_SEED: u64 = 0x5eed_2024;

type Check = std::result::Result<String, String>;

fn seed() -> u64 {
    std::env::var("SNAKE_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

fn rng_for(criterion: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed().wrapping_mul(31).wrapping_add(criterion))
}

fn random_alpha(rng: &mut ChaCha8Rng, rmax: f64) -> C64 {
    let r = rmax * rng.gen::<f64>().sqrt();
    C64::from_polar(
        r,
        rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
    )
}

fn random_schur(rng: &mut ChaCha8Rng, len: usize, rmax: f64) -> SchurSequence64 {
    SchurSequence::new((0..len).map(|_| random_alpha(rng, rmax)).collect()).unwrap()
}

fn random_gen(rng: &mut ChaCha8Rng, len: usize) -> GeneratingSequence {
    GeneratingSequence::from_bools((0..len).map(|_| rng.gen()).collect())
}

/// Mixed snake; factor order 7 6 3 1 0 2 4 5 8 9.
fn mixed_bits() -> Vec<i64> {
    vec![1, 0, 1, 0, 0, 1, 1, 0, 0]
}

/// Mixed snake continued with alternating bits up to `len`.
fn mixed_gen(len: usize) -> GeneratingSequence {
    let mut bits = mixed_bits();
    while bits.len() < len {
        bits.push((bits.len() as i64 + 1) % 2);
    }
    bits.truncate(len);
    GeneratingSequence::new(&bits).unwrap()
}

fn named_shapes(len: usize) -> Vec<(String, GeneratingSequence)> {
    vec![
        ("hessenberg".into(), GeneratingSequence::hessenberg(len)),
        ("cmv".into(), GeneratingSequence::cmv(len)),
        ("mixed".into(), mixed_gen(len)),
    ]
}

fn shapes_with_random(
    rng: &mut ChaCha8Rng,
    len: usize,
    random: usize,
) -> Vec<(String, GeneratingSequence)> {
    let mut out = named_shapes(len);
    for k in 0..random {
        out.push((format!("random{k}"), random_gen(rng, len)));
    }
    out
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn test_measures() -> Vec<(&'static str, MeasureSpec64)> {
    vec![
        ("lebesgue", MeasureSpec::Lebesgue),
        (
            "bs[0.6]",
            MeasureSpec::bernstein_szego(SchurSequence::new(vec![c(0.6, 0.0)]).unwrap()),
        ),
        (
            "bs[0.5,-0.4i,0.2]",
            MeasureSpec::bernstein_szego(
                SchurSequence::new(vec![c(0.5, 0.0), c(0.0, -0.4), c(0.2, 0.0)]).unwrap(),
            ),
        ),
    ]
}

/// Symbolic entry: `0`, or an optional `-` followed by factors `cK`
/// (conj alpha_K), `aK` (alpha_K), `pK` (rho_K).
fn symbolic(token: &str, schur: &SchurSequence64) -> C64 {
    if token == "0" {
        return c(0.0, 0.0);
    }
    let (mut value, rest) = match token.strip_prefix('-') {
        Some(rest) => (c(-1.0, 0.0), rest),
        None => (c(1.0, 0.0), token),
    };
    let bytes = rest.as_bytes();
    let mut pos = 0;
    while pos < bytes.len() {
        let kind = bytes[pos];
        let start = pos + 1;
        pos = start;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let k: usize = rest[start..pos].parse().expect("factor index");
        value *= match kind {
            b'c' => schur.alpha(k).conj(),
            b'a' => schur.alpha(k),
            b'p' => c(schur.rho(k), 0.0),
            _ => panic!("bad token {token}"),
        };
    }
    value
}

fn table(rows: &[&str]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| r.split_whitespace().map(str::to_owned).collect())
        .collect()
}

fn mixed_table() -> Vec<Vec<String>> {
    table(&[
        "c0     p0      0       0       0       0       0       0",
        "p0c1   -a0c1   p1c2    p1p2    0       0       0       0",
        "p0p1   -a0p1   -a1c2   -a1p2   0       0       0       0",
        "0      0       p2c3    -a2c3   p3c4    p3p4c5  p3p4p5  0",
        "0      0       p2p3    -a2p3   -a3c4   -a3p4c5 -a3p4p5 0",
        "0      0       0       0       p4      -a4c5   -a4p5   0",
        "0      0       0       0       0       p5c6    -a5c6   p6",
        "0      0       0       0       0       p5p6c7  -a5p6c7 -a6c7",
        "0      0       0       0       0       p5p6p7  -a5p6p7 -a6p7",
    ])
}

fn cmv_table() -> Vec<Vec<String>> {
    table(&[
        "c0  p0c1   p0p1   0      0      0      0",
        "p0  -a0c1  -a0p1  0      0      0      0",
        "0   p1c2   -a1c2  p2c3   p2p3   0      0",
        "0   p1p2   -a1p2  -a2c3  -a2p3  0      0",
        "0   0      0      p3c4   -a3c4  p4c5   p4p5",
        "0   0      0      p3p4   -a3p4  -a4c5  -a4p5",
        "0   0      0      0      0      p5c6   -a5c6",
    ])
}

fn hessenberg_table() -> Vec<Vec<String>> {
    table(&[
        "c0  p0c1   p0p1c2   p0p1p2c3   p0p1p2p3c4",
        "p0  -a0c1  -a0p1c2  -a0p1p2c3  -a0p1p2p3c4",
        "0   p1     -a1c2    -a1p2c3    -a1p2p3c4",
        "0   0      p2       -a2c3      -a2p3c4",
        "0   0      0        p3         -a3c4",
    ])
}

/// Largest deviation of `entry` from a symbolic table; also checks that
/// symbolic zeros are exact zeros.
fn compare_table(
    snake: &SnakeFactorization64,
    tab: &[Vec<String>],
) -> std::result::Result<f64, String> {
    let mut worst: f64 = 0.0;
    for (i, row) in tab.iter().enumerate() {
        for (j, tok) in row.iter().enumerate() {
            let got = entry(snake, i, j).map_err(|e| e.to_string())?;
            if tok == "0" && got != c(0.0, 0.0) {
                return Err(format!("entry ({i},{j}) should vanish, got {got}"));
            }
            worst = worst.max((got - symbolic(tok, snake.schur())).norm());
        }
    }
    Ok(worst)
}

fn criterion_1() -> Check {
    let alphas = (0..10)
        .map(|k| {
            let r: f64 = (0.3 + 0.05 * k as f64).min(0.9);
            C64::from_polar(r, k as f64)
        })
        .collect();
    let schur = SchurSequence::new(alphas).unwrap();
    let gen = GeneratingSequence::new(&mixed_bits()).unwrap();
    let snake = build_snake(&schur, &gen).map_err(|e| e.to_string())?;
    let dense = expand_dense(&snake, 8).map_err(|e| e.to_string())?;
    let window = snake
        .materialize_window(9)
        .map_err(|e| e.to_string())?
        .leading_block(8);
    let diff = dense.max_abs_diff(&window);
    let tab = mixed_table();
    for i in 0..8 {
        for j in 0..8 {
            let zero = tab[i][j] == "0";
            if zero != (dense[(i, j)] == c(0.0, 0.0)) || zero != (window[(i, j)] == c(0.0, 0.0)) {
                return Err(format!("zero pattern differs at ({i},{j})"));
            }
        }
    }
    let symbolic_dev = compare_table(&snake, &tab)?;
    let e75 = (dense[(7, 5)] - c(schur.rho(5) * schur.rho(6), 0.0) * schur.alpha(7).conj()).norm();
    let ok = diff <= 1e-13 && e75 <= 1e-14 && symbolic_dev <= 1e-13;
    let msg = format!(
        "expansion vs window {diff:.1e} (<= 1e-13), (7,5) vs rho5 rho6 conj(alpha7) {e75:.1e} (<= 1e-14), 9x8 symbolic table {symbolic_dev:.1e}, zero pattern exact"
    );
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_2() -> Check {
    let mut rng = rng_for(2);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let schur = random_schur(&mut rng, 8, 0.9);
        let cmv = build_snake(&schur, &GeneratingSequence::cmv(7)).map_err(|e| e.to_string())?;
        worst = worst.max(compare_table(&cmv, &cmv_table())?);
        let hess = build_snake(&schur.resized(6), &GeneratingSequence::hessenberg(5))
            .map_err(|e| e.to_string())?;
        worst = worst.max(compare_table(&hess, &hessenberg_table())?);
    }
    let msg = format!("CMV 7x7 and Hessenberg 5x5 symbolic entries, 5 random sequences: max deviation {worst:.1e} (<= 1e-13)");
    if worst <= 1e-13 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_3() -> Check {
    let mut rng = rng_for(3);
    let shapes = shapes_with_random(&mut rng, 10, 3);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (_, measure) in test_measures() {
        for (name, gen) in &shapes {
            let (lo, hi) = gen.span(10);
            let table = moments(&measure, (hi - lo) as usize + 2).map_err(|e| e.to_string())?;
            let oracle = LaurentOracle::new(table, gen, 10).map_err(|e| format!("{name}: {e}"))?;
            let schur = measure.schur_parameters(11).map_err(|e| e.to_string())?;
            let snake = build_snake(&schur, gen).map_err(|e| e.to_string())?;
            for i in 0..=10 {
                for j in 0..=10 {
                    let o = oracle.entry(i, j).map_err(|e| e.to_string())?;
                    let e = entry(&snake, i, j).map_err(|e| e.to_string())?;
                    worst = worst.max((o - e).norm());
                    count += 1;
                }
            }
        }
    }
    let msg = format!(
        "Gram-Schmidt oracle vs path rule, 3 measures x 6 shapes, {count} entries: max deviation {worst:.1e} (<= 1e-9)"
    );
    if worst <= 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_4() -> Check {
    let mut rng = rng_for(4);
    let mut mismatches = Vec::new();
    for mask in 0u32..1 << 10 {
        let bits: Vec<bool> = (0..10).map(|k| mask >> k & 1 == 1).collect();
        let gen = GeneratingSequence::from_bools(bits);
        // One extra bit lets runs ending at s_10 reach their full width.
        let extended = gen.extended(rng.gen());
        let alphas = (0..12)
            .map(|_| C64::from_polar(rng.gen_range(0.1..0.9), rng.gen_range(-3.0..3.0)))
            .collect();
        let snake = build_snake(&SchurSequence::new(alphas).unwrap(), &extended)
            .map_err(|e| e.to_string())?;
        let dense = expand_dense(&snake, 12).map_err(|e| e.to_string())?;
        let window = snake
            .materialize_window(11)
            .map_err(|e| e.to_string())?
            .leading_block(12);
        let expected = bandwidths(&gen);
        let got_dense = measured_bandwidths(&dense, 0.0);
        let got_window = measured_bandwidths(&window, 0.0);
        if got_dense != expected || got_window != expected {
            mismatches.push(format!(
                "{mask:010b}: {expected:?} vs {got_dense:?}/{got_window:?}"
            ));
        }
    }
    if mismatches.is_empty() {
        Ok("all 1024 shapes of length 10: measured (lower, upper) bandwidths of expansion and window product equal 1 + longest runs".into())
    } else {
        Err(format!(
            "{} mismatches, first: {}",
            mismatches.len(),
            mismatches[0]
        ))
    }
}

fn criterion_5() -> Check {
    let mut rng = rng_for(5);
    let shapes = shapes_with_random(&mut rng, 15, 3);
    let mut exact: f64 = 0.0;
    let mut modulus: f64 = 0.0;
    let mut mass: f64 = 0.0;
    let mut min_weight = f64::INFINITY;
    let mut rules = 0;
    for (_, measure) in test_measures() {
        let table = moments(&measure, 16).map_err(|e| e.to_string())?;
        for (_, full) in &shapes {
            for n in [4usize, 8, 16] {
                let gen = full.prefix(n - 1);
                let schur = measure.schur_parameters(n).map_err(|e| e.to_string())?;
                let snake = build_snake(&schur, &gen).map_err(|e| e.to_string())?;
                for theta in [0.0, 0.7] {
                    let rule = szego_quadrature(&snake, n, theta).map_err(|e| e.to_string())?;
                    for j in -(n as i64 - 1)..=(n as i64 - 1) {
                        let want = table.get(-j).map_err(|e| e.to_string())?;
                        exact = exact.max((rule.monomial(j) - want).norm());
                    }
                    modulus = modulus.max(rule.max_modulus_defect());
                    mass = mass.max((rule.weight_sum() - 1.0).abs());
                    min_weight = rule.weights.iter().copied().fold(min_weight, f64::min);
                    rules += 1;
                }
            }
        }
    }
    let ok = exact <= 1e-9 && modulus <= 1e-10 && mass <= 1e-10 && min_weight > 0.0;
    let msg = format!(
        "{rules} rules (n = 4, 8, 16; theta = 0, 0.7; 3 measures x 6 shapes): exactness {exact:.1e} (<= 1e-9), |z|-1 {modulus:.1e}, weight sum {mass:.1e} (<= 1e-10), min weight {min_weight:.2e} (> 0)"
    );
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_6() -> Check {
    let mut rng = rng_for(6);
    let n = 12;
    let mut shapes = vec![
        GeneratingSequence::hessenberg(n - 1),
        GeneratingSequence::cmv(n - 1),
    ];
    for _ in 0..5 {
        shapes.push(random_gen(&mut rng, n - 1));
    }
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for _ in 0..3 {
        let schur = random_schur(&mut rng, n, 0.9);
        for base_theta in [0.0, 0.7] {
            // Regenerate theta if the reference rule has clustered nodes.
            let mut theta = base_theta;
            let mut reference;
            loop {
                let hess = build_snake(&schur, &shapes[0]).map_err(|e| e.to_string())?;
                reference = szego_quadrature(&hess, n, theta).map_err(|e| e.to_string())?;
                if reference.min_node_gap() > 1e-8 {
                    break;
                }
                theta += 0.1;
            }
            for gen in &shapes[1..] {
                let snake = build_snake(&schur, gen).map_err(|e| e.to_string())?;
                let rule = szego_quadrature(&snake, n, theta).map_err(|e| e.to_string())?;
                worst = worst.max(rule.max_deviation(&reference));
                cases += 1;
            }
        }
    }
    let msg = format!("n = 12, {cases} shape pairs (CMV + 5 random vs Hessenberg, 3 sequences, 2 phases): max node/weight deviation {worst:.1e} (<= 1e-10)");
    if worst <= 1e-10 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_7() -> Check {
    let mut rng = rng_for(7);
    let mut worst_phi: f64 = 0.0;
    let mut max_modulus: f64 = 0.0;
    let mut count = 0;
    for _ in 0..5 {
        let schur = random_schur(&mut rng, 10, 0.9);
        for (_, gen) in named_shapes(9) {
            let snake = build_snake(&schur, &gen).map_err(|e| e.to_string())?;
            for n in [4usize, 8] {
                let p = principal_truncation(&snake, n).map_err(|e| e.to_string())?;
                for lambda in eigenvalues(&p).map_err(|e| e.to_string())? {
                    let (phi, _) = evaluate_phi(&schur, n, lambda).map_err(|e| e.to_string())?;
                    worst_phi = worst_phi.max(phi.norm());
                    max_modulus = max_modulus.max(lambda.norm());
                    count += 1;
                }
            }
        }
    }
    let msg = format!(
        "{count} eigenvalues (n = 4, 8; 5 sequences x 3 shapes): max |phi_n(lambda)| {worst_phi:.1e} (<= 1e-8), max |lambda| {max_modulus:.6} (< 1)"
    );
    if worst_phi <= 1e-8 && max_modulus < 1.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_8() -> Check {
    let mut rng = rng_for(8);
    let mut prefixes = vec![
        SchurSequence::new(vec![c(0.6, 0.0), c(0.0, -0.3)]).unwrap(),
        SchurSequence::new(vec![c(0.5, 0.0), c(0.0, -0.4), c(0.2, 0.0)]).unwrap(),
    ];
    for _ in 0..200 {
        let len = rng.gen_range(1..=12);
        prefixes.push(random_schur(&mut rng, len, 0.9));
    }
    let mut worst: f64 = 0.0;
    let mut on_grid = 0;
    for prefix in &prefixes {
        let len = prefix.len();
        let measure = MeasureSpec::bernstein_szego(prefix.clone());
        if moments_on_grid(&measure, len + 1).is_ok() {
            on_grid += 1;
        }
        let table = moments(&measure, len + 1).map_err(|e| e.to_string())?;
        let back = schur_from_moments(&table, len).map_err(|e| e.to_string())?;
        for k in 0..len {
            worst = worst.max((back.alpha(k) - prefix.alpha(k)).norm());
        }
    }
    let msg = format!(
        "{} prefixes (length 1..12, alpha uniform in |alpha| <= 0.9; {on_grid} certified on the grid, rest by exact recursion): max error {worst:.1e} (<= 1e-8)",
        prefixes.len()
    );
    if worst <= 1e-8 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_9() -> Check {
    let mut worst: f64 = 0.0;
    for (_, gen) in named_shapes(7) {
        let snake = build_snake(&SchurSequence::zeros(8), &gen).map_err(|e| e.to_string())?;
        let rule = szego_quadrature(&snake, 8, 0.0).map_err(|e| e.to_string())?;
        for (k, (z, w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
            let want = C64::from_polar(
                1.0,
                -std::f64::consts::PI + std::f64::consts::FRAC_PI_4 * k as f64,
            );
            worst = worst.max((z - want).norm()).max((w - 0.125).abs());
        }
    }
    let msg = format!("n = 8, theta = 0, three named shapes: max deviation from 8th roots of unity / weights 1/8 {worst:.1e} (<= 1e-12)");
    if worst <= 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Number, title, runtime limit in seconds, check.
type Criterion = (u32, &'static str, u64, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "mixed snake expansion", 1, criterion_1),
        (2, "CMV / Hessenberg entries", 1, criterion_2),
        (3, "oracle equivalence", 30, criterion_3),
        (4, "bandwidth law", 60, criterion_4),
        (5, "quadrature exactness", 30, criterion_5),
        (6, "shape invariance", 10, criterion_6),
        (7, "zeros of phi_n", 10, criterion_7),
        (8, "Schur round trip", 20, criterion_8),
        (9, "Lebesgue closed form", 1, criterion_9),
    ];
    println!("acceptance suite (seed {})", seed());
    let mut failed = 0;
    for (id, title, limit, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let (pass, detail) = match outcome {
            Ok(d) => (in_time, d),
            Err(d) => (false, d),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {id}: {title}: {detail} [{:.3} s, limit {limit} s]",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failed == 0 {
        println!("all 9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("{failed} of 9 criteria failed");
        ExitCode::FAILURE
    }
}
