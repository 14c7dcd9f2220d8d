//! Adaptive Gauss-Kronrod integration on finite and semi-infinite ranges, and
//! an Abel-regularized principal-value integrator for integrands with simple
//! poles on the positive real axis.

// Gauss-Kronrod tables carry more digits than f64 holds, as published.
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default cap on integrand evaluations per integral.
pub const MAX_EVALUATIONS: usize = 1_000_000;

/// Damping values (in units of the integrand's oscillation frequency scale)
/// used by the regularized principal-value oracle.
pub const DEFAULT_DAMPING: [f64; 6] = [0.4, 0.2, 0.1, 0.05, 0.025, 0.0125];

/// Excision radii for principal-value windows, as fractions of the window width.
const EXCISION_FRACTIONS: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Values the integrators can accumulate: real or complex scalars.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_floor: f64,
    pub max_evaluations: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_floor: 0.0,
            max_evaluations: MAX_EVALUATIONS,
        }
    }
}

impl QuadOptions {
    pub fn new(rel_tol: f64, abs_floor: f64) -> Self {
        Self {
            rel_tol,
            abs_floor,
            ..Default::default()
        }
    }

    pub fn with_max_evaluations(mut self, n: usize) -> Self {
        self.max_evaluations = n;
        self
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_059,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_114,
    0.562_757_134_668_604_683_339_000_099_272,
    0.433_395_394_129_247_190_799_265_943_165,
    0.294_392_862_701_460_198_131_126_603_103,
    0.148_874_338_981_631_210_884_826_001_129,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_244,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_325,
    0.123_491_976_262_065_851_077_208_745_109,
    0.134_709_217_311_473_325_928_054_001_771,
    0.142_775_938_577_060_080_797_094_273_138,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_389,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_657,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gauss_kronrod<T, F>(f: &mut F, a: f64, b: f64) -> Result<(T, f64)>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv = [T::zero(); 21];
    let mut eval = |x: f64| -> Result<T> {
        let v = f(x)?;
        if !v.magnitude().is_finite() {
            return Err(Error::NonFiniteIntegrand { at: x });
        }
        Ok(v)
    };
    fv[10] = eval(center)?;
    for i in 0..10 {
        fv[i] = eval(center - half * XGK[i])?;
        fv[20 - i] = eval(center + half * XGK[i])?;
    }
    let mut kron = fv[10] * WGK[10];
    let mut gauss = T::zero();
    let mut resabs = fv[10].magnitude() * WGK[10];
    for i in 0..10 {
        let pair = fv[i] + fv[20 - i];
        kron = kron + pair * WGK[i];
        resabs += WGK[i] * (fv[i].magnitude() + fv[20 - i].magnitude());
        if i % 2 == 1 {
            gauss = gauss + pair * WG[i / 2];
        }
    }
    let mean = kron * 0.5;
    let mut resasc = WGK[10] * (fv[10] - mean).magnitude();
    for i in 0..10 {
        resasc += WGK[i] * ((fv[i] - mean).magnitude() + (fv[20 - i] - mean).magnitude());
    }
    let diff = (kron - gauss).magnitude() * half.abs();
    let resasc = resasc * half.abs();
    let resabs = resabs * half.abs();
    let mut err = if resasc > 0.0 && diff > 0.0 {
        resasc * (200.0 * diff / resasc).powf(1.5).min(1.0)
    } else {
        diff
    };
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok((kron * half, err))
}

fn adaptive<T, F>(
    mut f: F,
    a: f64,
    b: f64,
    panels: usize,
    opts: &QuadOptions,
) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    let panels = panels.max(1);
    let mut heap = BinaryHeap::with_capacity(panels * 4);
    let mut evaluations = 0usize;
    let width = (b - a) / panels as f64;
    for i in 0..panels {
        let lo = a + width * i as f64;
        let hi = if i + 1 == panels {
            b
        } else {
            a + width * (i + 1) as f64
        };
        let (value, error) = gauss_kronrod(&mut f, lo, hi)?;
        evaluations += 21;
        heap.push(Panel {
            a: lo,
            b: hi,
            value,
            error,
        });
    }
    let total = |heap: &BinaryHeap<Panel<T>>| {
        let mut v = T::zero();
        let mut e = 0.0;
        for p in heap.iter() {
            v = v + p.value;
            e += p.error;
        }
        (v, e)
    };
    let (mut value, mut error) = total(&heap);
    let mut best = (value, error);
    let tol = |v: &T| (opts.rel_tol * v.magnitude()).max(opts.abs_floor);
    while error > tol(&value) {
        if evaluations + 42 > opts.max_evaluations {
            return Ok(QuadratureResult {
                value: best.0,
                error_estimate: best.1,
                evaluations,
                converged: false,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval can no longer be split in floating point
            heap.push(worst);
            return Ok(QuadratureResult {
                value: best.0,
                error_estimate: best.1,
                evaluations,
                converged: false,
            });
        }
        let (v1, e1) = gauss_kronrod(&mut f, worst.a, mid)?;
        let (v2, e2) = gauss_kronrod(&mut f, mid, worst.b)?;
        evaluations += 42;
        value = value - worst.value + v1 + v2;
        error = error - worst.error + e1 + e2;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        if evaluations.is_multiple_of(4200) {
            // resum to stop drift from the running updates
            let t = total(&heap);
            value = t.0;
            error = t.1;
        }
        if error < best.1 {
            best = (value, error);
        }
    }
    let (value, error) = total(&heap);
    Ok(QuadratureResult {
        value,
        error_estimate: error,
        evaluations,
        converged: true,
    })
}

/// Integrates a fallible integrand over `[a, b]`, starting from `panels` equal pieces.
pub fn try_integrate_interval<T, F>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
    opts: &QuadOptions,
) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    if a == b {
        return Ok(QuadratureResult {
            value: T::zero(),
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        });
    }
    adaptive(f, a, b, panels, opts)
}

pub fn integrate_interval<T, F>(
    mut f: F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    try_integrate_interval(|x| Ok(f(x)), a, b, 1, opts)
}

/// Integrates over `[start, inf)` through `u = start + L t/(1-t)`.
pub fn try_integrate_semi_infinite_from<T, F>(
    mut f: F,
    start: f64,
    decay_scale: f64,
    opts: &QuadOptions,
) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    assert!(decay_scale > 0.0, "decay scale must be positive");
    let mapped = |t: f64| -> Result<T> {
        let one_minus = 1.0 - t;
        let u = start + decay_scale * t / one_minus;
        if !u.is_finite() {
            return Ok(T::zero());
        }
        let v = f(u)?;
        if v.magnitude() == 0.0 {
            return Ok(T::zero());
        }
        Ok(v * (decay_scale / (one_minus * one_minus)))
    };
    adaptive(mapped, 0.0, 1.0, 8, opts)
}

pub fn try_integrate_semi_infinite<T, F>(
    f: F,
    decay_scale: f64,
    opts: &QuadOptions,
) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    try_integrate_semi_infinite_from(f, 0.0, decay_scale, opts)
}

/// Integral of `f` over `(0, inf)`; `f` must decay at least exponentially on the
/// scale `decay_scale`.
pub fn integrate_semi_infinite<T, F>(
    mut f: F,
    decay_scale: f64,
    rel_tol: f64,
    abs_floor: f64,
) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    try_integrate_semi_infinite(
        |x| Ok(f(x)),
        decay_scale,
        &QuadOptions::new(rel_tol, abs_floor),
    )
}

/// Polynomial through `(x_i, y_i)` evaluated at zero (Neville).
pub fn extrapolate_to_zero(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    assert_eq!(xs.len(), ys.len());
    let mut p = ys.to_vec();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (xs[i], xs[i + m]);
            p[i] = (p[i + 1] * xi - p[i] * xj) / (xi - xj);
        }
    }
    p[0]
}

fn check_poles(poles: &[f64], min_relative_gap: f64) -> Result<Vec<f64>> {
    let mut sorted = poles.to_vec();
    sorted.sort_by(f64::total_cmp);
    for &p in &sorted {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::PoleSpacingTooSmall { a: 0.0, b: p });
        }
    }
    for w in sorted.windows(2) {
        if (w[1] - w[0]) <= min_relative_gap * w[1] {
            return Err(Error::PoleSpacingTooSmall { a: w[0], b: w[1] });
        }
    }
    Ok(sorted)
}

struct Accum {
    value: Complex64,
    error: f64,
    evaluations: usize,
    converged: bool,
}

impl Accum {
    fn new() -> Self {
        Self {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            evaluations: 0,
            converged: true,
        }
    }
    fn add(&mut self, r: QuadratureResult<Complex64>) {
        self.value += r.value;
        self.error += r.error_estimate;
        self.evaluations += r.evaluations;
        self.converged &= r.converged;
    }
}

/// PV integral of `f(w) exp(-s w)` over `[lo, hi]` (`hi = None` for infinity).
fn damped_pv<F>(
    f: &F,
    lo: f64,
    hi: Option<f64>,
    poles: &[f64],
    s: f64,
    scale: f64,
    opts: &QuadOptions,
) -> Result<Accum>
where
    F: Fn(f64) -> Complex64,
{
    let g = |w: f64| -> Result<Complex64> {
        let damp = if s > 0.0 { (-s * w).exp() } else { 1.0 };
        if damp == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(f(w) * damp)
    };
    let mut acc = Accum::new();
    let mut cursor = lo;
    for (i, &p) in poles.iter().enumerate() {
        let left = if i == 0 { p - lo } else { p - poles[i - 1] };
        let right = match (poles.get(i + 1), hi) {
            (Some(&q), _) => q - p,
            (None, Some(h)) => h - p,
            (None, None) => left,
        };
        let half_width = 0.5 * left.min(right);
        let start = p - half_width;
        if start > cursor {
            let panels = ((start - cursor) / scale).ceil().clamp(1.0, 50_000.0) as usize;
            acc.add(try_integrate_interval(g, cursor, start, panels, opts)?);
        }
        let folded = |x: f64| -> Result<Complex64> { Ok(g(p + x)? + g(p - x)?) };
        let deltas: Vec<f64> = EXCISION_FRACTIONS.iter().map(|f| f * half_width).collect();
        let mut partial = Vec::with_capacity(deltas.len());
        let mut upper = half_width;
        let mut running = Complex64::new(0.0, 0.0);
        let mut werr = 0.0;
        for &d in &deltas {
            let r = try_integrate_interval(folded, d, upper, 1, opts)?;
            running += r.value;
            werr += r.error_estimate;
            acc.evaluations += r.evaluations;
            acc.converged &= r.converged;
            partial.push(running);
            upper = d;
        }
        acc.value += extrapolate_to_zero(&deltas, &partial);
        acc.error += werr;
        cursor = p + half_width;
    }
    match hi {
        Some(h) => {
            if h > cursor {
                let panels = ((h - cursor) / scale).ceil().clamp(1.0, 50_000.0) as usize;
                acc.add(try_integrate_interval(g, cursor, h, panels, opts)?);
            }
        }
        None => {
            if s > 0.0 {
                let span = 60.0 / s;
                let panels = (span / scale).ceil().clamp(1.0, 50_000.0) as usize;
                acc.add(try_integrate_interval(
                    g,
                    cursor,
                    cursor + span,
                    panels,
                    opts,
                )?);
                acc.add(try_integrate_semi_infinite_from(
                    g,
                    cursor + span,
                    1.0 / s,
                    opts,
                )?);
            } else {
                acc.add(try_integrate_semi_infinite_from(g, cursor, scale, opts)?);
            }
        }
    }
    Ok(acc)
}

/// Principal value of `∫_a^b f`, with simple poles strictly inside `(a, b)`.
pub fn integrate_pv<F>(
    f: F,
    a: f64,
    b: f64,
    poles: &[f64],
    rel_tol: f64,
) -> Result<QuadratureResult<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    let poles = check_poles(poles, 1e-6)?;
    if poles.iter().any(|&p| p <= a || p >= b) {
        return Err(Error::PoleSpacingTooSmall { a, b });
    }
    let opts = QuadOptions::new(rel_tol * 1e-2, 0.0);
    let acc = damped_pv(&f, a, Some(b), &poles, 0.0, b - a, &opts)?;
    Ok(QuadratureResult {
        value: acc.value,
        error_estimate: acc.error,
        evaluations: acc.evaluations,
        converged: acc.converged && acc.error <= rel_tol * acc.value.norm(),
    })
}

/// `lim_{s->0+} PV ∫_0^∞ f(w) e^{-s w} dw`.
///
/// For each damping value the PV integral is taken with symmetric excision
/// around every pole (excision radius extrapolated to zero); the damped values
/// are then extrapolated polynomially to `s = 0`. `omega_max_scale` is the
/// frequency scale on which `f` varies (oscillation or decay) and sets the
/// panel width.
pub fn integrate_abel_pv<F>(
    f: F,
    poles: &[f64],
    omega_max_scale: f64,
    damping_sequence: &[f64],
    rel_tol: f64,
) -> Result<QuadratureResult<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    assert!(
        !damping_sequence.is_empty(),
        "need at least one damping value"
    );
    let poles = check_poles(poles, 1e-6)?;
    let opts = QuadOptions::new(1e-12, 0.0);
    let mut values = Vec::with_capacity(damping_sequence.len());
    let mut quad_err = 0.0f64;
    let mut evaluations = 0;
    let mut converged = true;
    let mut order: Vec<f64> = damping_sequence.to_vec();
    order.sort_by(|a, b| b.total_cmp(a));
    for &s in &order {
        let acc = damped_pv(&f, 0.0, None, &poles, s, omega_max_scale, &opts)?;
        quad_err = quad_err.max(acc.error);
        evaluations += acc.evaluations;
        converged &= acc.converged;
        values.push(acc.value);
    }
    let (value, extrap_err) = if order.len() == 1 {
        (values[0], 0.0)
    } else {
        let full = extrapolate_to_zero(&order, &values);
        let reduced = extrapolate_to_zero(&order[1..], &values[1..]);
        (full, (full - reduced).norm())
    };
    let error_estimate = extrap_err + quad_err;
    if !value.norm().is_finite() || !error_estimate.is_finite() || error_estimate > value.norm() {
        return Err(Error::ExtrapolationDiverged);
    }
    Ok(QuadratureResult {
        value,
        error_estimate,
        evaluations,
        converged: converged && error_estimate <= rel_tol * value.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn semi_infinite_table() {
        let r = integrate_semi_infinite(|u: f64| (-u).exp(), 1.0, 1e-12, 0.0).unwrap();
        assert!(r.converged && (r.value - 1.0).abs() < 1e-10);
        let r = integrate_semi_infinite(|u: f64| u.powi(4) * (-2.0 * u).exp(), 0.5, 1e-12, 0.0)
            .unwrap();
        assert!((r.value - 0.75).abs() < 1e-10);
        let r =
            integrate_semi_infinite(|u: f64| 1.0 / (1.0 + u * u).powi(2), 1.0, 1e-12, 0.0).unwrap();
        assert!((r.value - PI / 4.0).abs() < 1e-10);
    }

    #[test]
    fn complex_integrand() {
        // ∫ e^{-(1-i)u} du = 1/(1-i)
        let r = integrate_semi_infinite(
            |u: f64| (Complex64::new(-1.0, 1.0) * u).exp(),
            1.0,
            1e-12,
            0.0,
        )
        .unwrap();
        assert!((r.value - 1.0 / Complex64::new(1.0, -1.0)).norm() < 1e-11);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let opts = QuadOptions::new(1e-14, 0.0).with_max_evaluations(200);
        let r = try_integrate_semi_infinite(
            |u: f64| Ok((u * 40.0).sin().abs() * (-u).exp()),
            1.0,
            &opts,
        )
        .unwrap();
        assert!(!r.converged);
        assert!(r.value.is_finite());
    }

    #[test]
    fn non_finite_integrand() {
        let r = integrate_semi_infinite(
            |u: f64| if u > 1.0 { f64::NAN } else { 0.0 },
            1.0,
            1e-9,
            0.0,
        );
        assert!(matches!(r, Err(Error::NonFiniteIntegrand { .. })));
    }

    #[test]
    fn pv_log_identity() {
        let r = integrate_pv(
            |w| Complex64::new(1.0 / (w - 1.0), 0.0),
            0.0,
            10.0,
            &[1.0],
            1e-10,
        )
        .unwrap();
        assert!((r.value.re - 9f64.ln()).abs() < 1e-6);
        // non-trivial numerator: PV ∫_0^3 w^2/(w-1) = 3^2/2 + 3 + ln 2
        let r = integrate_pv(
            |w| Complex64::new(w * w / (w - 1.0), 0.0),
            0.0,
            3.0,
            &[1.0],
            1e-10,
        )
        .unwrap();
        assert!((r.value.re - (4.5 + 3.0 + 2f64.ln())).abs() < 1e-8);
    }

    #[test]
    fn abel_without_poles_matches_plain() {
        let r =
            integrate_abel_pv(|w| Complex64::new((-w).exp(), 0.0), &[], 1.0, &[0.0], 1e-9).unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-8);
    }

    #[test]
    fn abel_half_residue() {
        // PV ∫ e^{iw}/(w-2) minus the rotated contour ∫ i f(iu) du equals i pi e^{2i}
        let f = |w: f64| Complex64::new(0.0, w).exp() / (w - 2.0);
        let damping: Vec<f64> = DEFAULT_DAMPING.to_vec();
        let pv = integrate_abel_pv(f, &[2.0], 1.0, &damping, 1e-6).unwrap();
        let rot = integrate_semi_infinite(
            |u: f64| Complex64::new(0.0, 1.0) * (-u).exp() / Complex64::new(-2.0, u),
            1.0,
            1e-13,
            0.0,
        )
        .unwrap();
        let want = Complex64::new(0.0, PI) * Complex64::new(0.0, 2.0).exp();
        assert!(
            (pv.value - rot.value - want).norm() < 1e-4,
            "{}",
            (pv.value - rot.value - want).norm()
        );
    }

    #[test]
    fn pole_spacing_guard() {
        let r = integrate_abel_pv(
            |_| Complex64::new(0.0, 0.0),
            &[1.0, 1.0 + 1e-9],
            1.0,
            &[0.1],
            1e-6,
        );
        assert!(matches!(r, Err(Error::PoleSpacingTooSmall { .. })));
    }

    #[test]
    fn neville_is_exact_for_polynomials() {
        let xs = [0.4, 0.2, 0.1];
        let ys: Vec<Complex64> = xs
            .iter()
            .map(|&x| Complex64::new(2.0 - x + 3.0 * x * x, x))
            .collect();
        assert!((extrapolate_to_zero(&xs, &ys) - Complex64::new(2.0, 0.0)).norm() < 1e-14);
    }
}
