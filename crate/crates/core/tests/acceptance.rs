//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p stinespring-core --test acceptance`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;

use stinespring_core::channels::{kraus_from_choi, kraus_from_stinespring, stinespring_from_kraus};
use stinespring_core::diagnostics::{
    p_divisibility_scan, recurrence_detect, refine_bijectivity_failures, refine_change_points,
    remainder_grid, remainder_order, semigroup_deviation, uniform_grid, DivisibilityOptions,
};
use stinespring_core::dilation::{build_curve_from_lindblad, negative_dissipator_sum};
use stinespring_core::gksl::{commutator_superop, dissipator, generator, semigroup_evolve};
use stinespring_core::numerics::random::{random_kraus, random_matrix, rng_from_seed};
use stinespring_core::{
    AncillaState, ComplexMatrix, CurveTrace, Generator, KrausSet, LindbladData, StinespringCurve,
    TraceSource, C64,
};

/// Criterion 4 asks for `D₂ = −Σ Γ_{V_j}` with a nonzero `H₀`, which no
/// type-I curve with `D₁ = −i ad_{H₀}` can satisfy; its failure is expected.
const EXPECTED_FAILURES: &[u32] = &[4];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn dephasing_v() -> ComplexMatrix {
    ComplexMatrix::real_diag(&[0.0, 1.0])
}

fn block_curve(a: f64, b: C64, c: f64) -> StinespringCurve {
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    let z = C64::new(0.0, 0.0);
    let r = |x: f64| C64::new(x, 0.0);
    let h = ComplexMatrix::from_rows(&[
        &[z, z, z, z],
        &[z, r(a), z, b],
        &[z, z, z, s],
        &[z, b.conj(), s, r(c)],
    ]);
    StinespringCurve::new(2, h, AncillaState::pure(2, 0), 1e-9).unwrap()
}

/// Random data with `‖H₀‖, ‖V_j‖ ≤ 1` (Frobenius, hence also operator norm),
/// norms drawn from `[min_norm, 1]`.
fn random_lindblad<R: Rng>(
    rng: &mut R,
    n: usize,
    jumps: usize,
    min_norm: f64,
    with_h0: bool,
) -> LindbladData {
    let draw = |rng: &mut R, herm: bool| {
        let mut x = random_matrix(n, n, rng);
        if herm {
            x = x.hermitian_part();
        }
        x.scale_real(rng.gen_range(min_norm..=1.0) / x.frobenius_norm())
    };
    let h0 = if with_h0 {
        draw(rng, true)
    } else {
        ComplexMatrix::zeros(n, n)
    };
    let jumps = (0..jumps).map(|_| draw(rng, false)).collect();
    LindbladData::new(h0, jumps, 1e-9).unwrap()
}

fn c1_dephasing_semigroup() -> Outcome {
    let start = Instant::now();
    let gen = generator(
        &LindbladData::new(ComplexMatrix::zeros(2, 2), vec![dephasing_v()], 1e-9).unwrap(),
    );
    let mut err: f64 = 0.0;
    for t in [0.1, 0.5, 1.0, 2.0, 5.0] {
        let out = semigroup_evolve(&gen, t)
            .unwrap()
            .apply(&ComplexMatrix::unit(2, 2, 0, 1))
            .unwrap();
        err = err.max((out[(0, 1)] - C64::new((-t / 2.0).exp(), 0.0)).norm());
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        err <= 1e-10 && secs < 1.0,
        format!("max |factor - e^(-t/2)| = {err:.2e}, runtime {secs:.3} s"),
    )
}

fn c2_unitary_phases() -> Outcome {
    let curve = StinespringCurve::new(
        2,
        dephasing_v().scale_real(FRAC_1_SQRT_2),
        AncillaState::pure(1, 0),
        1e-9,
    )
    .unwrap();
    let mut err: f64 = 0.0;
    for t in uniform_grid(0.0, 20.0, 99).unwrap() {
        let phi = curve.evaluate(t).unwrap();
        let up = phi.apply(&ComplexMatrix::unit(2, 2, 0, 1)).unwrap()[(0, 1)];
        let down = phi.apply(&ComplexMatrix::unit(2, 2, 1, 0)).unwrap()[(1, 0)];
        err = err
            .max((up - C64::from_polar(1.0, -t / SQRT_2)).norm())
            .max((down - C64::from_polar(1.0, t / SQRT_2)).norm());
    }
    outcome(
        err <= 1e-10,
        format!("100 grid points, max phase error {err:.2e}"),
    )
}

fn c3_cosine_curve() -> Outcome {
    let curve = block_curve(0.0, C64::new(0.0, 0.0), 0.0);
    let mut err: f64 = 0.0;
    for t in uniform_grid(0.0, 20.0, 99).unwrap() {
        let out = curve
            .evaluate(t)
            .unwrap()
            .apply(&ComplexMatrix::unit(2, 2, 0, 1))
            .unwrap();
        err = err.max((out[(0, 1)] - C64::new((t / SQRT_2).cos(), 0.0)).norm());
    }
    let d2 = curve.derivative_at_zero(2).unwrap();
    let d2_err = d2.distance(&dissipator(&dephasing_v()).scale(C64::new(-1.0, 0.0)));
    outcome(
        err <= 1e-10 && d2_err <= 1e-10,
        format!("max |factor - cos(t/sqrt2)| = {err:.2e}, |D2 + Gamma_V| = {d2_err:.2e}"),
    )
}

fn c4_construction() -> Outcome {
    let start = Instant::now();
    let mut rng = rng_from_seed(0xc4);
    let (mut d1_res, mut d2_res, mut d2_res_no_h0, mut identity_res) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..50 {
        let n = 1 + i % 4;
        let jumps = rng.gen_range(0..=3);
        let data = random_lindblad(&mut rng, n, jumps, 0.0, true);
        let curve = build_curve_from_lindblad(&data);
        let d1 = curve.derivative_at_zero(1).unwrap();
        let d2 = curve.derivative_at_zero(2).unwrap();
        let expect_d1 =
            Generator::from_superop(n, commutator_superop(data.h0()).scale(C64::new(0.0, -1.0)))
                .unwrap();
        let dissipative = negative_dissipator_sum(n, data.jumps());
        d1_res = d1_res.max(d1.distance(&expect_d1));
        d2_res = d2_res.max(d2.distance(&dissipative));
        let d1_sq = Generator::from_superop(n, d1.superop().matmul(d1.superop())).unwrap();
        identity_res = identity_res.max(d2.distance(&d1_sq.add(&dissipative)));

        let no_h0 =
            LindbladData::new(ComplexMatrix::zeros(n, n), data.jumps().to_vec(), 1e-9).unwrap();
        let d2 = build_curve_from_lindblad(&no_h0)
            .derivative_at_zero(2)
            .unwrap();
        d2_res_no_h0 = d2_res_no_h0.max(d2.distance(&dissipative));
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        d1_res <= 1e-9 && d2_res <= 1e-9 && secs < 30.0,
        format!(
            "D1 residual {d1_res:.2e}, D2 residual {d2_res:.2e} (with H0 = 0: {d2_res_no_h0:.2e}; \
             D2 - D1^2 residual {identity_res:.2e}), runtime {secs:.2} s"
        ),
    )
}

fn c5_extraction() -> Outcome {
    let mut rng = rng_from_seed(0xc5);
    let mut res: f64 = 0.0;
    let mut bounds = true;
    for _ in 0..50 {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(1..=4);
        let rank = rng.gen_range(1..=m);
        let curve = StinespringCurve::random(n, m, rank, &mut rng);
        let d2 = curve.derivative_at_zero(2).unwrap();
        let jumps = curve.extract_jump_operators().unwrap();
        res = res.max(negative_dissipator_sum(n, &jumps.full).distance(&d2));
        bounds &= curve.ancilla().rank() == rank
            && jumps.full.len() <= rank * m
            && jumps.reduced.len() <= n * n;
    }
    outcome(
        res <= 1e-9 && bounds,
        format!(
            "max residual {res:.2e}, count bounds {}",
            if bounds { "hold" } else { "violated" }
        ),
    )
}

fn c6_third_derivative() -> Outcome {
    let sigma_y = ComplexMatrix::from_rows(&[
        &[C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
        &[C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
    ]);
    let mut err: f64 = 0.0;
    let mut coeff_err = f64::NAN;
    for b in [0.3, FRAC_1_SQRT_2, 1.0] {
        let d3 = block_curve(0.0, C64::new(b, 0.0), 0.0)
            .derivative_at_zero(3)
            .unwrap();
        for j in 0..2 {
            for k in 0..2 {
                let a = ComplexMatrix::unit(2, 2, j, k);
                let expect = sigma_y.scale_real(-1.5 * b * a[(1, 1)].re);
                err = err.max(d3.apply(&a).unwrap().distance(&expect));
            }
        }
        if b == FRAC_1_SQRT_2 {
            let out = d3.apply(&ComplexMatrix::unit(2, 2, 1, 1)).unwrap();
            coeff_err = (out[(0, 1)] - C64::new(0.0, 3.0 / (2.0 * SQRT_2))).norm();
        }
    }
    outcome(
        err <= 1e-8 && coeff_err <= 1e-8,
        format!("max map error {err:.2e}, (1,2) coefficient error at b = 1/sqrt2 {coeff_err:.2e}"),
    )
}

fn c7_remainder() -> Outcome {
    let mut rng = rng_from_seed(0xc7);
    let grid = remainder_grid(21);
    let mut cubic = Vec::new();
    for _ in 0..10 {
        let n = rng.gen_range(2..=4);
        let m = rng.gen_range(2..=4);
        let rank = rng.gen_range(1..=m);
        let curve = StinespringCurve::random(n, m, rank, &mut rng);
        let trace = CurveTrace::sample(&curve, &grid, TraceSource::StinespringCurve).unwrap();
        let d1 = curve.derivative_at_zero(1).unwrap();
        let d2 = curve.derivative_at_zero(2).unwrap();
        cubic.push(
            remainder_order(&trace, &d1, &d2)
                .unwrap()
                .slope()
                .unwrap_or(f64::NAN),
        );
    }
    let mut quadratic = Vec::new();
    for _ in 0..10 {
        let n = rng.gen_range(2..=4);
        let jumps = rng.gen_range(1..=3);
        let curve = build_curve_from_lindblad(&random_lindblad(&mut rng, n, jumps, 0.25, false));
        let trace = CurveTrace::sample(&curve, &grid, TraceSource::StinespringCurve).unwrap();
        let d1 = curve.derivative_at_zero(1).unwrap();
        quadratic.push(
            remainder_order(&trace, &d1, &Generator::zero(n))
                .unwrap()
                .slope()
                .unwrap_or(f64::NAN),
        );
    }
    let range = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    };
    let (c_lo, c_hi) = range(&cubic);
    let (q_lo, q_hi) = range(&quadratic);
    outcome(
        c_lo >= 2.8 && c_hi <= 3.2 && q_lo >= 1.9 && q_hi <= 2.1,
        format!("full remainder slopes in [{c_lo:.4}, {c_hi:.4}], D2 zeroed slopes in [{q_lo:.4}, {q_hi:.4}]"),
    )
}

fn c8_roundtrips() -> Outcome {
    let mut rng = rng_from_seed(0xc8);
    let dims: [(usize, usize); 4] = [(2, 2), (2, 3), (3, 2), (4, 4)];
    let (mut choi_res, mut via_u_res, mut unitarity) = (0.0f64, 0.0f64, 0.0f64);
    let mut lcm_ok = true;
    for i in 0..50 {
        let (n, m) = dims[i % dims.len()];
        let count = rng.gen_range(n.div_ceil(m)..=n * m);
        let kraus = KrausSet::new(random_kraus(n, m, count, &mut rng)).unwrap();
        let choi = kraus.channel().choi();
        let back = kraus_from_choi(&choi, n, m, 1e-9).unwrap();
        choi_res = choi_res.max(back.channel().choi().distance(&choi));
        let dil = stinespring_from_kraus(&kraus, 1e-9).unwrap();
        unitarity = unitarity.max(dil.unitary().unitarity_deviation());
        via_u_res = via_u_res.max(
            kraus_from_stinespring(&dil, 1e-9)
                .unwrap()
                .channel()
                .choi()
                .distance(&choi),
        );
        if (n, m) == (2, 3) {
            lcm_ok &= dil.d() == 6;
        }
    }
    outcome(
        choi_res <= 1e-9 && via_u_res <= 1e-9 && unitarity <= 1e-10 && lcm_ok,
        format!(
            "Choi roundtrip {choi_res:.2e}, Stinespring roundtrip {via_u_res:.2e}, \
             max |U*U - I| {unitarity:.2e}, d = 6 for (2,3): {lcm_ok}"
        ),
    )
}

fn c9_diagnostics() -> Outcome {
    let start = Instant::now();
    let curve = block_curve(0.0, C64::new(0.0, 0.0), 0.0);
    let grid = uniform_grid(0.0, 10.0, 10_000).unwrap();
    let trace = CurveTrace::sample(&curve, &grid, TraceSource::StinespringCurve).unwrap();

    let fails = refine_bijectivity_failures(&trace, &curve, 1e-6).unwrap();
    let bij_expect = [PI / SQRT_2, PI / SQRT_2 + SQRT_2 * PI];
    let bij_err = if fails.len() == 2 {
        fails
            .iter()
            .zip(bij_expect)
            .map(|(f, e)| (f - e).abs())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };

    let scan_grid = uniform_grid(0.0, 3.0, 3000).unwrap();
    let scan_trace = CurveTrace::sample(&curve, &scan_grid, TraceSource::StinespringCurve).unwrap();
    let opts = DivisibilityOptions::default();
    let mut report = p_divisibility_scan(&scan_trace, &opts);
    refine_change_points(&mut report, &scan_trace, &curve, &opts).unwrap();
    let cp_err = match report.refined_change_points.as_slice() {
        [cp] => (cp - PI / SQRT_2).abs(),
        _ => f64::INFINITY,
    };
    let grid_cp_err = match report.change_points.as_slice() {
        [cp] => (cp - PI / SQRT_2).abs(),
        _ => f64::INFINITY,
    };

    let rec = recurrence_detect(&trace, &curve, 1e-6).unwrap();
    let rec_err = rec.map_or(f64::INFINITY, |t| (t - 2.0 * SQRT_2 * PI).abs());
    let secs = start.elapsed().as_secs_f64();
    outcome(
        bij_err <= 1e-4 && cp_err <= 1e-3 && rec_err <= 1e-3,
        format!(
            "bijectivity error {bij_err:.2e}, change point error {cp_err:.2e} (grid {grid_cp_err:.2e}), \
             recurrence error {rec_err:.2e}, runtime {secs:.2} s"
        ),
    )
}

fn c10_semigroup_witness() -> Outcome {
    let mut rng = rng_from_seed(0xc10);
    let grid = uniform_grid(0.0, 5.0, 50).unwrap();
    let mut min_dissipative = f64::INFINITY;
    let mut max_semigroup: f64 = 0.0;
    let mut max_unitary: f64 = 0.0;
    for i in 0..20 {
        let n = 1 + i % 3;
        let jumps = rng.gen_range(1..=3);
        let data = random_lindblad(&mut rng, n, jumps, 0.25, true);

        let curve = build_curve_from_lindblad(&data);
        let trace = CurveTrace::sample(&curve, &grid, TraceSource::StinespringCurve).unwrap();
        if n > 1 {
            // on a single level every channel is the identity
            min_dissipative = min_dissipative.min(semigroup_deviation(&trace).unwrap().max);
        }

        let gen = generator(&data);
        let trace = CurveTrace::sample(&gen, &grid, TraceSource::Semigroup).unwrap();
        max_semigroup = max_semigroup.max(semigroup_deviation(&trace).unwrap().max);

        let unitary = LindbladData::new(data.h0().clone(), vec![], 1e-9).unwrap();
        let curve = build_curve_from_lindblad(&unitary);
        let trace = CurveTrace::sample(&curve, &grid, TraceSource::StinespringCurve).unwrap();
        max_unitary = max_unitary.max(semigroup_deviation(&trace).unwrap().max);
    }
    outcome(
        min_dissipative > 1e-3 && max_semigroup <= 1e-9 && max_unitary <= 1e-9,
        format!(
            "min deviation of dissipative curves {min_dissipative:.3e}, max for GKSL traces {max_semigroup:.2e}, \
             max for jumps-empty curves {max_unitary:.2e}"
        ),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "dephasing semigroup factor", c1_dephasing_semigroup),
        (2, "unitary curve phases", c2_unitary_phases),
        (3, "cosine curve and its second derivative", c3_cosine_curve),
        (4, "construction derivatives", c4_construction),
        (5, "jump extraction", c5_extraction),
        (6, "third derivative", c6_third_derivative),
        (7, "Taylor remainder order", c7_remainder),
        (8, "representation roundtrips", c8_roundtrips),
        (9, "cosine curve diagnostics", c9_diagnostics),
        (10, "semigroup-law witness", c10_semigroup_witness),
    ];
    let mut unexpected = 0;
    for (id, name, run) in criteria {
        let o = run();
        let expected_failure = EXPECTED_FAILURES.contains(&id);
        let note = if !o.pass && expected_failure {
            " [expected: see README]"
        } else {
            ""
        };
        println!(
            "criterion {id:>2} {}: {name}: {}{note}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if o.pass == expected_failure {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criterion outcome(s) differ from the documented expectation");
        ExitCode::FAILURE
    }
}
