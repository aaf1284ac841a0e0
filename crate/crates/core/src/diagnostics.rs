//! Numerical witnesses on sampled channel curves: semigroup-law deviation,
//! P-divisibility, loss of bijectivity, recurrences and the order of the
//! Taylor remainder.
//!
//! Scans work on a precomputed [`CurveTrace`]. Refinement between grid points
//! needs to evaluate the curve off the grid and takes a [`ChannelFamily`].

use alloc::format;
use alloc::vec::Vec;

use crate::channels::Channel;
use crate::dilation::{taylor_remainder, StinespringCurve};
use crate::gksl::{semigroup_evolve, Generator};
use crate::numerics::random::{complex_gaussian, rng_from_seed};
use crate::numerics::{hermitian_eig, lu, ComplexMatrix, C64};
use crate::{Error, Result};

/// Relative tolerance for matching `s + t` against a grid point.
const GRID_MATCH_TOL: f64 = 1e-9;

/// Deviations below this count as an exact match in [`remainder_order`].
pub const EXACT_MATCH_FLOOR: f64 = 1e-14;

/// Anything that yields a channel for each time.
pub trait ChannelFamily {
    fn dim(&self) -> usize;
    fn channel_at(&self, t: f64) -> Result<Channel>;
}

impl ChannelFamily for StinespringCurve {
    fn dim(&self) -> usize {
        self.n()
    }

    fn channel_at(&self, t: f64) -> Result<Channel> {
        self.evaluate(t)
    }
}

impl ChannelFamily for Generator {
    fn dim(&self) -> usize {
        Generator::dim(self)
    }

    fn channel_at(&self, t: f64) -> Result<Channel> {
        semigroup_evolve(self, t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceSource {
    Semigroup,
    StinespringCurve,
}

impl TraceSource {
    pub fn name(self) -> &'static str {
        match self {
            TraceSource::Semigroup => "semigroup",
            TraceSource::StinespringCurve => "stinespring-curve",
        }
    }
}

/// Channels sampled on a strictly increasing grid of non-negative times.
#[derive(Clone, Debug)]
pub struct CurveTrace {
    grid: Vec<f64>,
    channels: Vec<Channel>,
    source: TraceSource,
}

impl CurveTrace {
    pub fn new(grid: Vec<f64>, channels: Vec<Channel>, source: TraceSource) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::InvalidArgument("time grid is empty".into()));
        }
        if grid.len() != channels.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} grid points but {} channels",
                grid.len(),
                channels.len()
            )));
        }
        if !grid.iter().all(|t| t.is_finite() && *t >= 0.0) {
            return Err(Error::InvalidArgument(
                "grid times must be finite and non-negative".into(),
            ));
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "grid must be strictly increasing".into(),
            ));
        }
        let n = channels[0].in_dim();
        if channels.iter().any(|c| c.in_dim() != n || c.out_dim() != n) {
            return Err(Error::DimensionMismatch(
                "channels on a trace must share one dimension".into(),
            ));
        }
        Ok(Self {
            grid,
            channels,
            source,
        })
    }

    /// Evaluates `family` at every grid point.
    pub fn sample<F: ChannelFamily + ?Sized>(
        family: &F,
        grid: &[f64],
        source: TraceSource,
    ) -> Result<Self> {
        let channels = grid
            .iter()
            .map(|&t| family.channel_at(t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(grid.to_vec(), channels, source)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn source(&self) -> TraceSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.channels[0].in_dim()
    }

    fn index_of(&self, t: f64) -> Option<usize> {
        let tol = GRID_MATCH_TOL * t.abs().max(1.0);
        let k = self.grid.partition_point(|&g| g < t - tol);
        (k < self.grid.len() && (self.grid[k] - t).abs() <= tol).then_some(k)
    }
}

/// `steps + 1` equally spaced points from `start` to `stop`.
pub fn uniform_grid(start: f64, stop: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0
        || start.is_nan()
        || start < 0.0
        || stop.is_nan()
        || stop <= start
        || !stop.is_finite()
    {
        return Err(Error::InvalidArgument(format!(
            "grid needs steps >= 1 and stop > start >= 0, got {start}:{stop}:{steps}"
        )));
    }
    let h = (stop - start) / steps as f64;
    Ok((0..=steps)
        .map(|i| {
            if i == steps {
                stop
            } else {
                start + h * i as f64
            }
        })
        .collect())
}

/// Largest semigroup-law violation found on a trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SemigroupDeviation {
    pub max: f64,
    pub s: f64,
    pub t: f64,
}

/// `max ‖Φ_{s+t} − Φ_s∘Φ_t‖_F` over grid pairs with `s + t` inside the grid
/// range. Every such sum must itself be a grid point.
pub fn semigroup_deviation(trace: &CurveTrace) -> Result<SemigroupDeviation> {
    let last = *trace.grid.last().expect("nonempty");
    let mut worst = SemigroupDeviation {
        max: 0.0,
        s: trace.grid[0],
        t: trace.grid[0],
    };
    for (i, &s) in trace.grid.iter().enumerate() {
        for (j, &t) in trace.grid.iter().enumerate().skip(i) {
            let u = s + t;
            if u > last + GRID_MATCH_TOL * last.max(1.0) {
                break;
            }
            let k = trace.index_of(u).ok_or(Error::GridNotSumClosed { s, t })?;
            let composed = trace.channels[i].compose(&trace.channels[j])?;
            let dev = trace.channels[k].distance(&composed);
            if dev > worst.max {
                worst = SemigroupDeviation { max: dev, s, t };
            }
        }
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowStatus {
    PDivisible,
    NotPDivisible,
    /// Every intermediate map that could be formed was positive, but some
    /// `Φ_s` were too close to singular to invert.
    Indeterminate,
}

impl WindowStatus {
    pub fn name(self) -> &'static str {
        match self {
            WindowStatus::PDivisible => "p-divisible",
            WindowStatus::NotPDivisible => "not-p-divisible",
            WindowStatus::Indeterminate => "indeterminate",
        }
    }
}

/// Outcome of the intermediate-map tests `Φ_t∘Φ_s^{−1}` for all grid `s < t`.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisibilityWindow {
    pub t: f64,
    pub status: WindowStatus,
    /// `s` of the first non-positive intermediate map found.
    pub witness_s: Option<f64>,
    /// Most negative output eigenvalue seen over all tested `s`.
    pub min_eigenvalue: f64,
    pub singular_s: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivisibilityReport {
    pub windows: Vec<DivisibilityWindow>,
    /// Grid points where the status switches between divisible and not.
    pub change_points: Vec<f64>,
    /// Change points located between grid points, if refined.
    pub refined_change_points: Vec<f64>,
}

impl DivisibilityReport {
    /// Largest `t` such that every window up to it is P-divisible.
    pub fn divisible_until(&self) -> Option<f64> {
        self.windows
            .iter()
            .take_while(|w| w.status == WindowStatus::PDivisible)
            .last()
            .map(|w| w.t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DivisibilityOptions {
    /// Output eigenvalues below `−tol` count as a positivity violation.
    pub tol: f64,
    /// `Φ_s` with `|det| <= det_tol` is not inverted.
    pub det_tol: f64,
    /// Fibonacci-sphere points per pair of basis vectors.
    pub sphere_points: usize,
    /// Extra Gaussian pure states.
    pub random_states: usize,
    pub seed: u64,
    /// Spacing of the local pair `(t − δ, t)` used while refining.
    pub local_step: f64,
    /// Width of the bracket at which refinement stops.
    pub refine_tol: f64,
}

impl Default for DivisibilityOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            det_tol: 1e-12,
            sphere_points: 256,
            random_states: 64,
            seed: 0xd1f_5eed,
            local_step: 1e-7,
            refine_tol: 1e-6,
        }
    }
}

/// Deterministic pure-state probes for positivity of maps on `n × n`
/// matrices.
#[derive(Clone, Debug)]
pub struct PositivityProbe {
    n: usize,
    /// `vec(|ψ⟩⟨ψ|)` for every probe state.
    inputs: Vec<ComplexMatrix>,
    tol: f64,
}

/// Result of a positivity test on one map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Positivity {
    pub positive: bool,
    pub min_eigenvalue: f64,
    /// Decided exactly through the Schur-multiplier rule.
    pub exact: bool,
}

impl PositivityProbe {
    pub fn new(n: usize, opts: &DivisibilityOptions) -> Self {
        let mut inputs = Vec::new();
        let mut push = |psi: ComplexMatrix| inputs.push(ComplexMatrix::outer(&psi, &psi).vec());
        for a in 0..n {
            push(ComplexMatrix::basis_ket(n, a));
        }
        let golden = core::f64::consts::PI * (3.0 - 5f64.sqrt());
        let k = opts.sphere_points.max(1);
        for a in 0..n {
            for b in a + 1..n {
                for i in 0..k {
                    let z = 1.0 - (2 * i + 1) as f64 / k as f64;
                    let theta = z.clamp(-1.0, 1.0).acos();
                    let phi = golden * i as f64;
                    let mut psi = ComplexMatrix::zeros(n, 1);
                    psi[(a, 0)] = C64::new((theta / 2.0).cos(), 0.0);
                    psi[(b, 0)] = C64::from_polar((theta / 2.0).sin(), phi);
                    push(psi);
                }
            }
        }
        let mut rng = rng_from_seed(opts.seed);
        for _ in 0..opts.random_states {
            let psi = ComplexMatrix::from_fn(n, 1, |_, _| complex_gaussian(&mut rng));
            let norm = psi.frobenius_norm();
            push(psi.scale_real(1.0 / norm));
        }
        Self {
            n,
            inputs,
            tol: opts.tol,
        }
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    /// Tests a superoperator on `n × n` matrices for positivity.
    ///
    /// Diagonal superoperators act as Schur multipliers `X ↦ M ∘ X`, which
    /// are positive exactly when `M` is positive semidefinite. Other maps are
    /// probed on the sampled pure states, which can only certify failure.
    pub fn test(&self, superop: &ComplexMatrix) -> Positivity {
        let n = self.n;
        let scale = superop.max_abs().max(1.0);
        let off_diagonal = (0..n * n)
            .flat_map(|i| (0..n * n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| superop[(i, j)].norm())
            .fold(0.0, f64::max);
        if off_diagonal <= self.tol * scale {
            let m = ComplexMatrix::from_fn(n, n, |a, b| superop[(b * n + a, b * n + a)]);
            let herm_dev = m.hermiticity_deviation();
            let min_eigenvalue = min_eigenvalue(&m.hermitian_part());
            return Positivity {
                positive: herm_dev <= self.tol * scale && min_eigenvalue >= -self.tol,
                min_eigenvalue,
                exact: true,
            };
        }
        let mut worst = f64::INFINITY;
        for input in &self.inputs {
            let out = ComplexMatrix::unvec(&superop.matmul(input), n, n).expect("n² entries");
            let lmin = min_eigenvalue(&out.hermitian_part());
            let lmin = if out.hermiticity_deviation() > self.tol * scale {
                lmin.min(-out.hermiticity_deviation())
            } else {
                lmin
            };
            worst = worst.min(lmin);
        }
        Positivity {
            positive: worst >= -self.tol,
            min_eigenvalue: worst,
            exact: false,
        }
    }
}

fn min_eigenvalue(h: &ComplexMatrix) -> f64 {
    match h.rows() {
        1 => h[(0, 0)].re,
        2 => {
            let (a, d) = (h[(0, 0)].re, h[(1, 1)].re);
            let b = h[(0, 1)].norm();
            0.5 * (a + d) - (0.25 * (a - d) * (a - d) + b * b).sqrt()
        }
        _ => hermitian_eig(h, f64::INFINITY)
            .map(|e| e.min_eigenvalue())
            .unwrap_or(f64::NEG_INFINITY),
    }
}

/// Intermediate map `Φ_t∘Φ_s^{−1}` or `None` if `Φ_s` is numerically singular.
fn intermediate(phi_t: &ComplexMatrix, phi_s_inv: Option<&ComplexMatrix>) -> Option<ComplexMatrix> {
    phi_s_inv.map(|inv| phi_t.matmul(inv))
}

fn invert_if_regular(superop: &ComplexMatrix, det_tol: f64) -> Option<ComplexMatrix> {
    let lu = lu::Lu::new(superop).ok()?;
    if lu.determinant().norm() <= det_tol {
        return None;
    }
    lu.inverse().ok()
}

/// For every grid `t`, tests positivity of `Φ_t∘Φ_s^{−1}` for all grid
/// `s < t` and classifies the window `[0, t]`.
pub fn p_divisibility_scan(trace: &CurveTrace, opts: &DivisibilityOptions) -> DivisibilityReport {
    let probe = PositivityProbe::new(trace.dim(), opts);
    let inverses: Vec<Option<ComplexMatrix>> = trace
        .channels
        .iter()
        .map(|c| invert_if_regular(c.superop(), opts.det_tol))
        .collect();

    let mut windows = Vec::with_capacity(trace.len());
    for (k, &t) in trace.grid.iter().enumerate() {
        let phi_t = trace.channels[k].superop();
        let mut window = DivisibilityWindow {
            t,
            status: WindowStatus::PDivisible,
            witness_s: None,
            min_eigenvalue: 0.0,
            singular_s: 0,
        };
        // nearest s first: failures usually show up there
        for i in (0..k).rev() {
            match intermediate(phi_t, inverses[i].as_ref()) {
                None => window.singular_s += 1,
                Some(map) => {
                    let p = probe.test(&map);
                    window.min_eigenvalue = window.min_eigenvalue.min(p.min_eigenvalue);
                    if !p.positive {
                        window.status = WindowStatus::NotPDivisible;
                        window.witness_s = Some(trace.grid[i]);
                        break;
                    }
                }
            }
        }
        if window.status == WindowStatus::PDivisible && window.singular_s > 0 {
            window.status = WindowStatus::Indeterminate;
        }
        windows.push(window);
    }

    let mut change_points = Vec::new();
    let mut last: Option<WindowStatus> = None;
    for w in &windows {
        if w.status == WindowStatus::Indeterminate {
            continue;
        }
        if last.is_some_and(|s| s != w.status) {
            change_points.push(w.t);
        }
        last = Some(w.status);
    }

    DivisibilityReport {
        windows,
        change_points,
        refined_change_points: Vec::new(),
    }
}

/// Locates each change point between grid points by bisection. A time `t`
/// counts as failing when some grid `s < t`, or the nearby `t − δ`, gives a
/// non-positive intermediate map.
pub fn refine_change_points<F: ChannelFamily + ?Sized>(
    report: &mut DivisibilityReport,
    trace: &CurveTrace,
    family: &F,
    opts: &DivisibilityOptions,
) -> Result<()> {
    let probe = PositivityProbe::new(trace.dim(), opts);
    let fails = |t: f64| -> Result<bool> {
        let phi_t = family.channel_at(t)?.into_superop();
        let mut candidates: Vec<Channel> = Vec::new();
        if t - opts.local_step >= 0.0 {
            candidates.push(family.channel_at(t - opts.local_step)?);
        }
        for (i, &s) in trace.grid.iter().enumerate() {
            if s < t {
                candidates.push(trace.channels[i].clone());
            }
        }
        for c in &candidates {
            if let Some(map) = intermediate(
                &phi_t,
                invert_if_regular(c.superop(), opts.det_tol).as_ref(),
            ) {
                if !probe.test(&map).positive {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    };

    let mut refined = Vec::with_capacity(report.change_points.len());
    let mut floor = 0;
    for &cp in &report.change_points {
        let k = trace.index_of(cp).expect("change points lie on the grid");
        let hi_fails = fails(cp)?;
        // the local test can flip earlier than the grid scan sees it
        let mut j = k;
        while j > floor && fails(trace.grid[j - 1])? == hi_fails {
            j -= 1;
        }
        floor = k;
        if j == 0 || fails(trace.grid[j - 1])? == hi_fails {
            refined.push(cp);
            continue;
        }
        let (mut lo, mut hi) = (trace.grid[j - 1], trace.grid[j]);
        while hi - lo > opts.refine_tol {
            let mid = 0.5 * (lo + hi);
            if fails(mid)? == hi_fails {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        refined.push(0.5 * (lo + hi));
    }
    report.refined_change_points = refined;
    Ok(())
}

/// `|det|` of each channel's superoperator on the trace.
pub fn determinant_magnitudes(trace: &CurveTrace) -> Vec<f64> {
    trace
        .channels
        .iter()
        .map(|c| c.determinant().map(|d| d.norm()).unwrap_or(0.0))
        .collect()
}

/// Grid points where `|det|` drops below `tol`; each run of consecutive
/// points contributes its smallest-`|det|` member.
pub fn bijectivity_failures(trace: &CurveTrace, tol: f64) -> Vec<f64> {
    let dets = determinant_magnitudes(trace);
    let mut out = Vec::new();
    let mut best: Option<usize> = None;
    for (i, &d) in dets.iter().enumerate() {
        if d < tol {
            best = match best {
                Some(b) if dets[b] <= d => Some(b),
                _ => Some(i),
            };
        } else if let Some(b) = best.take() {
            out.push(trace.grid[b]);
        }
    }
    if let Some(b) = best {
        out.push(trace.grid[b]);
    }
    out
}

/// Bijectivity failures located between grid points: every interior local
/// minimum of `|det|` is refined by golden-section search and kept if the
/// refined value is below `tol`.
pub fn refine_bijectivity_failures<F: ChannelFamily + ?Sized>(
    trace: &CurveTrace,
    family: &F,
    tol: f64,
) -> Result<Vec<f64>> {
    let dets = determinant_magnitudes(trace);
    let f = |t: f64| -> Result<f64> { Ok(family.channel_at(t)?.determinant()?.norm()) };
    let mut out = Vec::new();
    for i in local_minima(&dets) {
        let (t, v) = golden_section(&f, trace.grid[i - 1], trace.grid[i + 1])?;
        if v < tol {
            out.push(t);
        }
    }
    Ok(out)
}

/// First time after the initial approach away from `t = 0` at which
/// `‖Φ_t − id‖_F < epsilon`, on grid resolution.
pub fn recurrence_on_grid(trace: &CurveTrace, epsilon: f64) -> Option<f64> {
    let dist = identity_distances(trace);
    let start = dist.iter().position(|&d| d >= epsilon)?;
    dist.iter()
        .enumerate()
        .skip(start)
        .find(|(_, &d)| d < epsilon)
        .map(|(i, _)| trace.grid[i])
}

/// First return of the curve to the identity: interior local minima of
/// `‖Φ_t − id‖_F` after the initial departure are refined by golden-section
/// search, and the first one below `epsilon` is reported.
pub fn recurrence_detect<F: ChannelFamily + ?Sized>(
    trace: &CurveTrace,
    family: &F,
    epsilon: f64,
) -> Result<Option<f64>> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let dist = identity_distances(trace);
    let Some(start) = dist.iter().position(|&d| d >= epsilon) else {
        return Ok(None);
    };
    let id = Channel::identity(trace.dim());
    let f = |t: f64| -> Result<f64> { Ok(family.channel_at(t)?.distance(&id)) };
    for i in local_minima(&dist).into_iter().filter(|&i| i > start) {
        let (t, v) = golden_section(&f, trace.grid[i - 1], trace.grid[i + 1])?;
        if v < epsilon {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

fn identity_distances(trace: &CurveTrace) -> Vec<f64> {
    let id = Channel::identity(trace.dim());
    trace.channels.iter().map(|c| c.distance(&id)).collect()
}

/// Interior indices `i` with `v[i−1] > v[i] <= v[i+1]`.
fn local_minima(v: &[f64]) -> Vec<usize> {
    (1..v.len().saturating_sub(1))
        .filter(|&i| v[i] < v[i - 1] && v[i] <= v[i + 1])
        .collect()
}

fn golden_section(f: &impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..200 {
        if b - a <= 1e-13 * b.abs().max(1.0) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let t = 0.5 * (a + b);
    Ok((t, f(t)?))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RemainderFit {
    /// Least-squares slope of `log‖R(t)‖` against `log t`.
    Slope {
        slope: f64,
        intercept: f64,
        points: usize,
    },
    /// All remainders below the exact-match floor.
    ExactMatch,
}

impl RemainderFit {
    pub fn slope(&self) -> Option<f64> {
        match self {
            RemainderFit::Slope { slope, .. } => Some(*slope),
            RemainderFit::ExactMatch => None,
        }
    }
}

/// Fits the decay order of `Φ_t − id − t D₁ − t²/2 D₂` over the grid points
/// of `trace` in `[1e−3, 1e−1]`.
pub fn remainder_order(trace: &CurveTrace, d1: &Generator, d2: &Generator) -> Result<RemainderFit> {
    let mut points = Vec::new();
    for (t, phi) in trace.grid.iter().zip(&trace.channels) {
        if (1e-3 * (1.0 - 1e-12)..=1e-1 * (1.0 + 1e-12)).contains(t) {
            points.push((*t, taylor_remainder(phi, d1, d2, *t)?));
        }
    }
    if points.len() < 2 {
        return Err(Error::InvalidArgument(
            "remainder fit needs at least two grid points in [1e-3, 1e-1]".into(),
        ));
    }
    if points.iter().all(|&(_, r)| r < EXACT_MATCH_FLOOR) {
        return Ok(RemainderFit::ExactMatch);
    }
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(_, r)| r >= EXACT_MATCH_FLOOR)
        .map(|&(t, r)| (t.ln(), r.ln()))
        .collect();
    if logs.len() < 2 {
        return Ok(RemainderFit::ExactMatch);
    }
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    Ok(RemainderFit::Slope {
        slope,
        intercept: my - slope * mx,
        points: logs.len(),
    })
}

/// Log-spaced grid on `[1e−3, 1e−1]`.
pub fn remainder_grid(points: usize) -> Vec<f64> {
    let points = points.max(2);
    (0..points)
        .map(|i| 10f64.powf(-3.0 + 2.0 * i as f64 / (points - 1) as f64))
        .collect()
}
