use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::str::FromStr;

use serde_json::{json, Map, Value};

use stinespring_core::channels::{
    isometry_from_kraus, kraus_from_choi, stinespring_from_kraus_seeded, IsometricDilation,
};
use stinespring_core::diagnostics::{
    bijectivity_failures, p_divisibility_scan, recurrence_detect, recurrence_on_grid,
    refine_bijectivity_failures, refine_change_points, remainder_grid, remainder_order,
    semigroup_deviation, uniform_grid, ChannelFamily, DivisibilityOptions, RemainderFit,
    WindowStatus,
};
use stinespring_core::dilation::{build_curve_from_lindblad, negative_dissipator_sum};
use stinespring_core::gksl::{commutator_superop, dissipator, generator, semigroup_evolve};
use stinespring_core::{
    AncillaState, Channel, ComplexMatrix, CurveTrace, Error, Generator, KrausSet, LindbladData,
    StinespringCurve, StinespringDilation, TraceSource, C64,
};

use crate::error::CliError;
use crate::format::{
    canonical_json, matrices, matrix_list, parse_json, read_trace_csv, to_value, write_trace_csv,
    ChannelFile, CurveFile, LindbladFile, MatrixJson,
};

/// Text to write plus any verification failures.
#[derive(Clone, Debug, Default)]
pub struct Output {
    pub body: String,
    pub failures: Vec<String>,
    /// Optional secondary artifact (a trace CSV).
    pub trace_csv: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        uniform_grid(self.start, self.stop, self.steps).expect("validated on parse")
    }

    fn to_json(self) -> Value {
        json!({ "start": self.start, "stop": self.stop, "steps": self.steps })
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, steps] = parts.as_slice() else {
            return Err(format!("grid must be start:stop:steps, got {s:?}"));
        };
        let start: f64 = start
            .parse()
            .map_err(|_| format!("bad grid start {start:?}"))?;
        let stop: f64 = stop
            .parse()
            .map_err(|_| format!("bad grid stop {stop:?}"))?;
        let steps: usize = steps
            .parse()
            .map_err(|_| format!("bad grid steps {steps:?}"))?;
        if steps < 1
            || start.is_nan()
            || start < 0.0
            || stop.is_nan()
            || stop <= start
            || !stop.is_finite()
        {
            return Err(format!(
                "grid needs steps >= 1 and stop > start >= 0, got {s:?}"
            ));
        }
        Ok(Self { start, stop, steps })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Representation {
    Choi,
    Kraus,
    Stinespring,
}

/// Shared settings for every command.
#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub tol: f64,
    pub seed: u64,
    pub verify: bool,
}

fn load_channel(file: &ChannelFile, tol: f64) -> Result<(Channel, Option<KrausSet>), CliError> {
    Ok(match file {
        ChannelFile::Choi {
            in_dim,
            out_dim,
            choi,
        } => (
            Channel::from_choi(&ComplexMatrix::try_from(choi)?, *in_dim, *out_dim)?,
            None,
        ),
        ChannelFile::Kraus { operators } => {
            let k = KrausSet::new(matrices(operators)?)?;
            (k.channel(), Some(k))
        }
        ChannelFile::Stinespring {
            in_dim,
            out_dim,
            unitary,
        } => {
            let s = StinespringDilation::new(
                *in_dim,
                *out_dim,
                ComplexMatrix::try_from(unitary)?,
                tol,
            )?;
            let k = s.kraus();
            (k.channel(), Some(k))
        }
        ChannelFile::Isometry {
            in_dim,
            out_dim,
            isometry,
        } => {
            let v = ComplexMatrix::try_from(isometry)?;
            if v.cols() != *in_dim || *out_dim == 0 || v.rows() % out_dim != 0 {
                return Err(CliError::Validation(format!(
                    "isometry of shape {}x{} does not fit in_dim={in_dim}, out_dim={out_dim}",
                    v.rows(),
                    v.cols()
                )));
            }
            let iso = IsometricDilation {
                in_dim: *in_dim,
                out_dim: *out_dim,
                ell: v.rows() / out_dim,
                isometry: v,
            };
            let k = iso.kraus();
            (k.channel(), Some(k))
        }
    })
}

/// Converts between Choi, Kraus and Stinespring representations.
pub fn convert(input: &str, to: Representation, s: &Settings) -> Result<Output, CliError> {
    let file: ChannelFile = parse_json(input, "channel")?;
    let (channel, kraus) = load_channel(&file, s.tol)?;
    let (n, m) = (channel.in_dim(), channel.out_dim());
    let choi_in = channel.choi();
    let scale = choi_in.max_abs().max(1.0);
    let minimal = || kraus_from_choi(&choi_in, n, m, s.tol * scale);

    let mut meta = Map::new();
    let (out_file, out_channel) = match to {
        Representation::Choi => (
            ChannelFile::Choi {
                in_dim: n,
                out_dim: m,
                choi: MatrixJson::from(&choi_in),
            },
            channel.clone(),
        ),
        Representation::Kraus => {
            let k = minimal()?;
            meta.insert("kraus_count".into(), json!(k.len()));
            let ch = k.channel();
            (
                ChannelFile::Kraus {
                    operators: matrix_list(k.operators()),
                },
                ch,
            )
        }
        Representation::Stinespring => {
            let k = match kraus {
                Some(k) => k,
                None => minimal()?,
            };
            match stinespring_from_kraus_seeded(&k, s.tol, s.seed) {
                Ok(dil) => {
                    meta.insert("d".into(), json!(dil.d()));
                    meta.insert("ell".into(), json!(dil.ell()));
                    meta.insert(
                        "unitarity_deviation".into(),
                        json!(dil.unitary().unitarity_deviation()),
                    );
                    meta.insert("fallback_isometry".into(), json!(false));
                    let ch = dil.channel();
                    (
                        ChannelFile::Stinespring {
                            in_dim: n,
                            out_dim: m,
                            unitary: MatrixJson::from(dil.unitary()),
                        },
                        ch,
                    )
                }
                Err(Error::NotTracePreserving { deviation }) => {
                    let iso = isometry_from_kraus(&k);
                    meta.insert("ell".into(), json!(iso.ell));
                    meta.insert("fallback_isometry".into(), json!(true));
                    meta.insert(
                        "warning".into(),
                        json!(format!(
                            "channel is not trace preserving (deviation {deviation:e}); emitted the isometry V = sum_i K_i (x) |i> instead of a unitary"
                        )),
                    );
                    let ch = iso.channel();
                    (
                        ChannelFile::Isometry {
                            in_dim: n,
                            out_dim: m,
                            isometry: MatrixJson::from(&iso.isometry),
                        },
                        ch,
                    )
                }
                Err(e) => return Err(e.into()),
            }
        }
    };
    let choi_distance = out_channel.choi().distance(&choi_in);
    meta.insert("choi_distance".into(), json!(choi_distance));

    let mut failures = Vec::new();
    if s.verify && choi_distance > s.tol * scale {
        failures.push(format!(
            "converted channel differs from input by {choi_distance:e} (Choi, Frobenius)"
        ));
    }
    let mut value = to_value(&out_file);
    value
        .as_object_mut()
        .expect("tagged enum is an object")
        .insert("metadata".into(), Value::Object(meta));
    Ok(Output {
        body: canonical_json(&value),
        failures,
        trace_csv: None,
    })
}

fn load_lindblad(input: &str, tol: f64) -> Result<LindbladData, CliError> {
    let file: LindbladFile = parse_json(input, "Lindblad")?;
    Ok(LindbladData::new(
        ComplexMatrix::try_from(&file.h0)?,
        matrices(&file.jumps)?,
        tol,
    )?)
}

fn load_curve(input: &str, tol: f64) -> Result<StinespringCurve, CliError> {
    let file: CurveFile = parse_json(input, "curve")?;
    let ancilla = AncillaState::new(ComplexMatrix::try_from(&file.omega)?, tol)?;
    Ok(StinespringCurve::new(
        file.n,
        ComplexMatrix::try_from(&file.h)?,
        ancilla,
        tol,
    )?)
}

fn curve_file(curve: &StinespringCurve) -> CurveFile {
    CurveFile {
        n: curve.n(),
        h: MatrixJson::from(curve.hamiltonian()),
        omega: MatrixJson::from(curve.ancilla().omega()),
    }
}

/// Samples `e^{tL}` on the grid and writes the trace CSV.
pub fn evolve(input: &str, grid: &GridSpec, s: &Settings) -> Result<Output, CliError> {
    let gen = generator(&load_lindblad(input, s.tol)?);
    let trace = CurveTrace::sample(&gen, &grid.points(), TraceSource::Semigroup)?;
    let mut failures = Vec::new();
    if s.verify {
        let worst = trace
            .channels()
            .iter()
            .map(|c| c.trace_preservation_deviation())
            .fold(0.0, f64::max);
        if worst > s.tol.max(1e-10) {
            failures.push(format!("trace preservation residual {worst:e}"));
        }
    }
    Ok(Output {
        body: write_trace_csv(&trace)?,
        failures,
        trace_csv: None,
    })
}

/// Builds the type-I curve whose low derivatives match the generator and
/// reports how well they match.
pub fn dilate(input: &str, s: &Settings) -> Result<Output, CliError> {
    let data = load_lindblad(input, s.tol)?;
    let n = data.dim();
    let curve = build_curve_from_lindblad(&data);
    let d1 = curve.derivative_at_zero(1)?;
    let d2 = curve.derivative_at_zero(2)?;
    let expect_d1 =
        Generator::from_superop(n, commutator_superop(data.h0()).scale(C64::new(0.0, -1.0)))?;
    let dissipative = negative_dissipator_sum(n, data.jumps());
    let d1_sq = Generator::from_superop(n, d1.superop().matmul(d1.superop()))?;
    let d1_residual = d1.distance(&expect_d1);
    let d2_residual = d2.distance(&dissipative);
    let verification = json!({
        "d1_residual": d1_residual,
        "d2_residual": d2_residual,
        "d2_residual_with_hamiltonian_term": d2.distance(&d1_sq.add(&dissipative)),
        "tol": s.tol,
    });
    let mut failures = Vec::new();
    if s.verify {
        if d1_residual > s.tol {
            failures.push(format!("first derivative residual {d1_residual:e}"));
        }
        if d2_residual > s.tol {
            failures.push(format!("second derivative residual {d2_residual:e}"));
        }
    }
    let mut value = to_value(&curve_file(&curve));
    value
        .as_object_mut()
        .expect("struct")
        .insert("verification".into(), verification);
    Ok(Output {
        body: canonical_json(&value),
        failures,
        trace_csv: None,
    })
}

/// Exact derivative of a curve at zero; order 2 also lists jump operators.
pub fn derivatives(input: &str, order: usize, s: &Settings) -> Result<Output, CliError> {
    let curve = load_curve(input, s.tol)?;
    let d = curve.derivative_at_zero(order)?;
    let mut value = json!({
        "order": order,
        "n": curve.n(),
        "m": curve.m(),
        "superop": MatrixJson::from(d.superop()),
    });
    let obj = value.as_object_mut().expect("object");
    if order == 1 {
        obj.insert(
            "effective_hamiltonian".into(),
            to_value(&MatrixJson::from(&curve.effective_hamiltonian())),
        );
    }
    let mut failures = Vec::new();
    if order == 2 {
        let jumps = curve.extract_jump_operators()?;
        let residual = negative_dissipator_sum(curve.n(), &jumps.full).distance(&d);
        let reduced_residual = negative_dissipator_sum(curve.n(), &jumps.reduced).distance(&d);
        obj.insert(
            "jumps".into(),
            json!({
                "full": matrix_list(&jumps.full),
                "reduced": matrix_list(&jumps.reduced),
                "residual": residual,
                "reduced_residual": reduced_residual,
            }),
        );
        if s.verify && residual.max(reduced_residual) > s.tol {
            failures.push(format!(
                "jump extraction residual {:e}",
                residual.max(reduced_residual)
            ));
        }
    }
    Ok(Output {
        body: canonical_json(&value),
        failures,
        trace_csv: None,
    })
}

/// Options of the `diagnose` command.
#[derive(Clone, Copy, Debug)]
pub struct DiagnoseOptions {
    pub grid: GridSpec,
    pub epsilon: f64,
    pub det_tol: f64,
    /// Source tag for CSV input.
    pub csv_source: TraceSource,
}

enum Subject {
    Curve(StinespringCurve),
    Semigroup(Generator),
    Trace(CurveTrace),
}

fn detect_subject(input: &str, opts: &DiagnoseOptions, tol: f64) -> Result<Subject, CliError> {
    if !input.trim_start().starts_with('{') {
        return Ok(Subject::Trace(read_trace_csv(input, opts.csv_source)?));
    }
    let value: Value = parse_json(input, "input")?;
    if value.get("h0").is_some() {
        Ok(Subject::Semigroup(generator(&load_lindblad(input, tol)?)))
    } else if value.get("h").is_some() && value.get("omega").is_some() {
        Ok(Subject::Curve(load_curve(input, tol)?))
    } else {
        Err(CliError::Validation(
            "input is neither a Lindblad file, a curve file nor a trace CSV".into(),
        ))
    }
}

/// Runs every diagnostic on a curve, a semigroup or a stored trace.
pub fn diagnose(input: &str, opts: &DiagnoseOptions, s: &Settings) -> Result<Output, CliError> {
    let subject = detect_subject(input, opts, s.tol)?;
    let grid = opts.grid.points();
    let (trace, family, derivs): (
        CurveTrace,
        Option<&dyn ChannelFamily>,
        Option<(Generator, Generator)>,
    ) = match &subject {
        Subject::Curve(c) => (
            CurveTrace::sample(c, &grid, TraceSource::StinespringCurve)?,
            Some(c),
            Some((c.derivative_at_zero(1)?, c.derivative_at_zero(2)?)),
        ),
        Subject::Semigroup(g) => {
            let l2 = Generator::from_superop(g.dim(), g.superop().matmul(g.superop()))?;
            (
                CurveTrace::sample(g, &grid, TraceSource::Semigroup)?,
                Some(g),
                Some((g.clone(), l2)),
            )
        }
        Subject::Trace(t) => (t.clone(), None, None),
    };
    let mut report = diagnostics_report(&trace, family, opts, s)?;
    let obj = report.as_object_mut().expect("object");
    if let Subject::Trace(_) = subject {
        obj.insert("grid".into(), json!({ "points": trace.len() }));
    } else {
        obj.insert("grid".into(), opts.grid.to_json());
    }
    let remainder = match (family, derivs) {
        (Some(f), Some((d1, d2))) => {
            let rt = CurveTrace::sample(f, &remainder_grid(21), trace.source())?;
            remainder_json(&remainder_order(&rt, &d1, &d2)?)
        }
        _ => Value::Null,
    };
    obj.insert("remainder".into(), remainder);
    let trace_csv = match subject {
        Subject::Trace(_) => None,
        _ => Some(write_trace_csv(&trace)?),
    };
    Ok(Output {
        body: canonical_json(&report),
        failures: Vec::new(),
        trace_csv,
    })
}

fn remainder_json(fit: &RemainderFit) -> Value {
    match fit {
        RemainderFit::Slope {
            slope,
            intercept,
            points,
        } => {
            json!({ "exact_match": false, "slope": slope, "intercept": intercept, "points": points })
        }
        RemainderFit::ExactMatch => json!({ "exact_match": true }),
    }
}

fn diagnostics_report(
    trace: &CurveTrace,
    family: Option<&dyn ChannelFamily>,
    opts: &DiagnoseOptions,
    s: &Settings,
) -> Result<Value, CliError> {
    let semigroup = match semigroup_deviation(trace) {
        Ok(d) => json!({ "max": d.max, "s": d.s, "t": d.t }),
        Err(e @ Error::GridNotSumClosed { .. }) => json!({ "error": e.to_string() }),
        Err(e) => return Err(e.into()),
    };

    let div_opts = DivisibilityOptions {
        tol: s.tol,
        seed: s.seed,
        ..DivisibilityOptions::default()
    };
    let mut div = p_divisibility_scan(trace, &div_opts);
    if let Some(f) = family {
        refine_change_points(&mut div, trace, f, &div_opts)?;
    }
    let mut runs: Vec<Value> = Vec::new();
    let mut current: Option<(f64, f64, WindowStatus)> = None;
    for w in &div.windows {
        current = match current {
            Some((from, _, st)) if st == w.status => Some((from, w.t, st)),
            Some((from, to, st)) => {
                runs.push(json!({ "from": from, "to": to, "status": st.name() }));
                Some((w.t, w.t, w.status))
            }
            None => Some((w.t, w.t, w.status)),
        };
    }
    if let Some((from, to, st)) = current {
        runs.push(json!({ "from": from, "to": to, "status": st.name() }));
    }

    let refined_bij = match family {
        Some(f) => json!(refine_bijectivity_failures(trace, f, opts.det_tol)?),
        None => Value::Null,
    };
    let refined_rec = match family {
        Some(f) => json!(recurrence_detect(trace, f, opts.epsilon)?),
        None => Value::Null,
    };
    Ok(json!({
        "source": trace.source().name(),
        "dim": trace.dim(),
        "semigroup_deviation": semigroup,
        "p_divisibility": {
            "windows": runs,
            "change_points": div.change_points,
            "refined_change_points": if family.is_some() { json!(div.refined_change_points) } else { Value::Null },
            "divisible_until": div.divisible_until(),
        },
        "bijectivity": {
            "tol": opts.det_tol,
            "grid_failures": bijectivity_failures(trace, opts.det_tol),
            "refined_failures": refined_bij,
        },
        "recurrence": {
            "epsilon": opts.epsilon,
            "grid": recurrence_on_grid(trace, opts.epsilon),
            "refined": refined_rec,
        },
    }))
}

fn check(name: &str, value: f64, tol: f64) -> Value {
    json!({ "name": name, "error": value, "tolerance": tol, "pass": value <= tol })
}

fn block_curve(a: f64, b: C64, c: f64) -> StinespringCurve {
    let z = C64::new(0.0, 0.0);
    let r = |x: f64| C64::new(x, 0.0);
    let s = r(FRAC_1_SQRT_2);
    let h = ComplexMatrix::from_rows(&[
        &[z, z, z, z],
        &[z, r(a), z, b],
        &[z, z, z, s],
        &[z, b.conj(), s, r(c)],
    ]);
    StinespringCurve::new(2, h, AncillaState::pure(2, 0), 1e-9).expect("Hermitian by construction")
}

/// Reproduces the qubit dephasing example: closed-form factors, the third
/// derivative family and the diagnostics of the cosine curve.
pub fn example_qubit(s: &Settings) -> Result<Output, CliError> {
    let v = ComplexMatrix::real_diag(&[0.0, 1.0]);
    let data = LindbladData::new(ComplexMatrix::zeros(2, 2), vec![v.clone()], s.tol)?;
    let e01 = ComplexMatrix::unit(2, 2, 0, 1);
    let mut checks = Vec::new();

    let gen = generator(&data);
    let mut err: f64 = 0.0;
    for t in [0.1, 0.5, 1.0, 2.0, 5.0] {
        let out = semigroup_evolve(&gen, t)?.apply(&e01)?;
        err = err.max((out[(0, 1)] - C64::new((-t / 2.0).exp(), 0.0)).norm());
    }
    checks.push(check("semigroup coherence factor exp(-t/2)", err, 1e-10));

    let unitary = StinespringCurve::new(
        2,
        v.scale_real(FRAC_1_SQRT_2),
        AncillaState::pure(1, 0),
        s.tol,
    )?;
    let cosine = build_curve_from_lindblad(&data);
    let (mut phase_err, mut cos_err) = (0.0f64, 0.0f64);
    for t in uniform_grid(0.0, 20.0, 99)? {
        let out = unitary.evaluate(t)?.apply(&e01)?;
        phase_err = phase_err.max((out[(0, 1)] - C64::from_polar(1.0, -t / SQRT_2)).norm());
        let out = cosine.evaluate(t)?.apply(&e01)?;
        cos_err = cos_err.max((out[(0, 1)] - C64::new((t / SQRT_2).cos(), 0.0)).norm());
    }
    checks.push(check(
        "unitary curve phase exp(-it/sqrt2)",
        phase_err,
        1e-10,
    ));
    checks.push(check("dilated curve factor cos(t/sqrt2)", cos_err, 1e-10));
    let d2_err = cosine
        .derivative_at_zero(2)?
        .distance(&dissipator(&v).scale(C64::new(-1.0, 0.0)));
    checks.push(check("second derivative equals -Gamma_V", d2_err, 1e-10));
    let h_err = cosine
        .hamiltonian()
        .distance(block_curve(0.0, C64::new(0.0, 0.0), 0.0).hamiltonian());
    checks.push(check(
        "constructed Hamiltonian matches a = b = c = 0 form",
        h_err,
        1e-15,
    ));

    let sigma_y = ComplexMatrix::from_rows(&[
        &[C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
        &[C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
    ]);
    let mut third = Vec::new();
    for b in [0.3, FRAC_1_SQRT_2, 1.0] {
        let d3 = block_curve(0.0, C64::new(b, 0.0), 0.0).derivative_at_zero(3)?;
        let mut e: f64 = 0.0;
        for j in 0..2 {
            for k in 0..2 {
                let a = ComplexMatrix::unit(2, 2, j, k);
                e = e.max(
                    d3.apply(&a)?
                        .distance(&sigma_y.scale_real(-1.5 * b * a[(1, 1)].re)),
                );
            }
        }
        let coeff = d3.apply(&ComplexMatrix::unit(2, 2, 1, 1))?[(0, 1)];
        third.push(json!({ "b": b, "coefficient_12": [coeff.re, coeff.im] }));
        checks.push(check(
            &format!("third derivative -(3/2) b sigma_y a22 at b = {b}"),
            e,
            1e-8,
        ));
    }

    let opts = DiagnoseOptions {
        grid: GridSpec {
            start: 0.0,
            stop: 10.0,
            steps: 10_000,
        },
        epsilon: 1e-6,
        det_tol: 1e-6,
        csv_source: TraceSource::StinespringCurve,
    };
    let trace = CurveTrace::sample(&cosine, &opts.grid.points(), TraceSource::StinespringCurve)?;
    let bij = refine_bijectivity_failures(&trace, &cosine, opts.det_tol)?;
    let bij_expect = [PI / SQRT_2, PI / SQRT_2 + SQRT_2 * PI];
    let bij_err = if bij.len() == 2 {
        bij.iter()
            .zip(bij_expect)
            .map(|(f, e)| (f - e).abs())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    checks.push(check(
        "bijectivity failures at pi/sqrt2 + sqrt2 pi k",
        bij_err,
        1e-4,
    ));

    let scan = GridSpec {
        start: 0.0,
        stop: 2.5,
        steps: 1250,
    };
    let scan_trace = CurveTrace::sample(&cosine, &scan.points(), TraceSource::StinespringCurve)?;
    let div_opts = DivisibilityOptions {
        tol: s.tol,
        seed: s.seed,
        ..DivisibilityOptions::default()
    };
    let mut div = p_divisibility_scan(&scan_trace, &div_opts);
    refine_change_points(&mut div, &scan_trace, &cosine, &div_opts)?;
    let cp_err = match div.refined_change_points.as_slice() {
        [cp] => (cp - PI / SQRT_2).abs(),
        _ => f64::INFINITY,
    };
    checks.push(check(
        "P-divisibility change point at pi/sqrt2",
        cp_err,
        1e-3,
    ));

    let rec = recurrence_detect(&trace, &cosine, opts.epsilon)?;
    let rec_err = rec.map_or(f64::INFINITY, |t| (t - 2.0 * SQRT_2 * PI).abs());
    checks.push(check("recurrence at 2 sqrt2 pi", rec_err, 1e-3));

    let failures = checks
        .iter()
        .filter(|c| c["pass"] == json!(false))
        .map(|c| {
            format!(
                "{} failed (error {})",
                c["name"].as_str().unwrap_or(""),
                c["error"]
            )
        })
        .collect();
    let value = json!({
        "checks": checks,
        "curve": to_value(&curve_file(&cosine)),
        "third_derivative": third,
        "diagnostics": {
            "bijectivity_failures": bij,
            "change_points": div.change_points,
            "refined_change_points": div.refined_change_points,
            "recurrence": rec,
        },
    });
    Ok(Output {
        body: canonical_json(&value),
        failures,
        trace_csv: None,
    })
}
