//! Asymptotic and finite-size secret key rates.
//!
//! Rates are in bits per quadrature coordinate:
//!
//! ```text
//! K      = β·I − χ/2
//! K_fin  = (n/N)·(β·I − χ_worst/2 − Δ(n))
//! Δ(n)   = a·sqrt(log₂(2/ε̄)/n) + (b/n)·log₂(1/ε_PA)
//! ```
//!
//! with `I = C(s)` the BI-AWGN capacity of one coordinate and `χ` the Holevo
//! bound per coherent state, charged half to each of its two quadratures.
//! `N` counts all quadrature coordinates, `n` those kept for the key.

use serde::{Deserialize, Serialize};

use crate::channel::{distance_to_transmission, DEFAULT_LOSS_DB_PER_KM};
use crate::estimation::{confidence_bounds, EstimationResult, SampleEstimate};
use crate::gaussian::{holevo_bound, DetectorModel};
use crate::modulation::{gaussian_equivalent_channel, ZSeries};
use crate::par::Execution;
use crate::reconciliation::biawgn_capacity;
use crate::{Error, Result};

/// Coordinates per 8-dimensional block.
pub const COORDINATES_PER_BLOCK: f64 = 8.0;
/// Coordinates per coherent state.
pub const COORDINATES_PER_STATE: f64 = 2.0;
/// Default security parameters.
pub const DEFAULT_EPSILON: f64 = 1e-10;

/// Constants of the finite-size correction `Δ(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaConstants {
    pub sqrt_coefficient: f64,
    pub pa_coefficient: f64,
}

impl Default for DeltaConstants {
    fn default() -> Self {
        DeltaConstants { sqrt_coefficient: 7.0, pa_coefficient: 2.0 }
    }
}

/// `Δ(n)`.
pub fn delta_n(n: f64, epsilon_bar: f64, epsilon_pa: f64, c: &DeltaConstants) -> f64 {
    c.sqrt_coefficient * ((2.0 / epsilon_bar).log2() / n).sqrt() + c.pa_coefficient / n * (1.0 / epsilon_pa).log2()
}

/// Finite-size settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiniteSize {
    /// Total quadrature coordinates `N`.
    pub n_total: u64,
    /// Fraction of coordinates kept for the key; the rest is disclosed.
    pub key_fraction: f64,
    pub epsilon_pe: f64,
    pub epsilon_bar: f64,
    pub epsilon_pa: f64,
    pub constants: DeltaConstants,
}

impl FiniteSize {
    pub fn new(n_total: u64) -> Self {
        FiniteSize {
            n_total,
            key_fraction: 0.5,
            epsilon_pe: DEFAULT_EPSILON,
            epsilon_bar: DEFAULT_EPSILON,
            epsilon_pa: DEFAULT_EPSILON,
            constants: DeltaConstants::default(),
        }
    }

    pub fn n_key(&self) -> u64 {
        (self.n_total as f64 * self.key_fraction).round() as u64
    }
}

/// Inputs shared by every rate evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateInputs {
    pub v_a: f64,
    pub transmission: f64,
    pub excess_noise: f64,
    pub detector: DetectorModel,
    pub beta: f64,
    pub series: ZSeries,
    pub loss_db_per_km: f64,
    pub finite: Option<FiniteSize>,
}

impl RateInputs {
    pub fn asymptotic(v_a: f64, transmission: f64, excess_noise: f64, detector: DetectorModel, beta: f64) -> Self {
        RateInputs {
            v_a,
            transmission,
            excess_noise,
            detector,
            beta,
            series: ZSeries::default(),
            loss_db_per_km: DEFAULT_LOSS_DB_PER_KM,
            finite: None,
        }
    }

    pub fn at_distance(mut self, distance_km: f64) -> Self {
        self.transmission = distance_to_transmission(distance_km, self.loss_db_per_km);
        self
    }

    pub fn with_finite(mut self, finite: FiniteSize) -> Self {
        self.finite = Some(finite);
        self
    }
}

/// Every quantity entering a key-rate evaluation. Field names are part of the
/// JSON schema.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeyRateReport {
    // Inputs.
    pub v_a: f64,
    pub transmission: f64,
    pub distance_km: f64,
    pub excess_noise: f64,
    pub eta: f64,
    pub v_el: f64,
    pub trusted_detector: bool,
    pub beta: f64,
    pub n_total: Option<u64>,
    pub n_key: Option<u64>,
    pub epsilon_pe: Option<f64>,
    pub epsilon_pa: Option<f64>,
    pub epsilon_bar: Option<f64>,
    // Intermediates.
    pub snr: f64,
    /// `I(x;y)` per coordinate.
    pub mutual_information: f64,
    /// `I(x;y)` per 8-dimensional block.
    pub mutual_information_per_block: f64,
    pub z: f64,
    pub f: f64,
    pub delta_xi: f64,
    pub t_g: f64,
    pub xi_g: f64,
    /// `χ(y;E)` per coherent state at the point estimates.
    pub chi: f64,
    /// `χ(y;E)` per coherent state at the worst-case channel.
    pub chi_worst: Option<f64>,
    pub delta_n: Option<f64>,
    pub t_min: Option<f64>,
    pub xi_max: Option<f64>,
    // Outputs.
    pub k_asymptotic_unclamped: f64,
    pub k_asymptotic: f64,
    pub k_asymptotic_per_state: f64,
    pub k_asymptotic_per_block: f64,
    pub k_finite_unclamped: Option<f64>,
    pub k_finite: Option<f64>,
    pub finite_size: bool,
    pub inconclusive: bool,
}

impl KeyRateReport {
    /// The headline rate: finite-size when available, else asymptotic.
    pub fn key_rate(&self) -> f64 {
        self.k_finite.unwrap_or(self.k_asymptotic)
    }
}

struct Point {
    snr: f64,
    info: f64,
    z: f64,
    f: f64,
    delta_xi: f64,
    t_g: f64,
    xi_g: f64,
    chi: f64,
}

fn evaluate_point(v_a: f64, t: f64, xi: f64, det: &DetectorModel, series: ZSeries) -> Result<Point> {
    let eff = det.eta * t;
    let snr = (eff * v_a / 2.0) / (1.0 + eff * xi / 2.0 + det.v_el);
    let eq = gaussian_equivalent_channel(v_a, t, xi, series)?;
    let chi = holevo_bound(v_a, eq.t_g, eq.xi_g, det)?;
    Ok(Point {
        snr,
        info: biawgn_capacity(snr),
        z: eq.summary.z,
        f: eq.summary.f,
        delta_xi: eq.summary.delta_xi,
        t_g: eq.t_g,
        xi_g: eq.xi_g,
        chi,
    })
}

fn validate_beta(beta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::domain(format!("reconciliation efficiency {beta} not in [0, 1]")));
    }
    Ok(())
}

/// `K = β·I − χ/2` for a physical channel `(T, ξ)`.
pub fn asymptotic_rate(inputs: &RateInputs) -> Result<KeyRateReport> {
    validate_beta(inputs.beta)?;
    inputs.detector.validate()?;
    let det = &inputs.detector;
    let p = evaluate_point(inputs.v_a, inputs.transmission, inputs.excess_noise, det, inputs.series)?;
    let k = inputs.beta * p.info - p.chi / COORDINATES_PER_STATE;
    let per_block = p.info * COORDINATES_PER_BLOCK;
    assert_eq!(per_block, 8.0 * p.info, "per-block information must be 8x the per-coordinate value");
    Ok(KeyRateReport {
        v_a: inputs.v_a,
        transmission: inputs.transmission,
        distance_km: crate::channel::transmission_to_distance(inputs.transmission, inputs.loss_db_per_km).max(0.0),
        excess_noise: inputs.excess_noise,
        eta: det.eta,
        v_el: det.v_el,
        trusted_detector: det.trusted,
        beta: inputs.beta,
        n_total: None,
        n_key: None,
        epsilon_pe: None,
        epsilon_pa: None,
        epsilon_bar: None,
        snr: p.snr,
        mutual_information: p.info,
        mutual_information_per_block: per_block,
        z: p.z,
        f: p.f,
        delta_xi: p.delta_xi,
        t_g: p.t_g,
        xi_g: p.xi_g,
        chi: p.chi,
        chi_worst: None,
        delta_n: None,
        t_min: None,
        xi_max: None,
        k_asymptotic_unclamped: k,
        k_asymptotic: k.max(0.0),
        k_asymptotic_per_state: k.max(0.0) * COORDINATES_PER_STATE,
        k_asymptotic_per_block: k.max(0.0) * COORDINATES_PER_BLOCK,
        k_finite_unclamped: None,
        k_finite: None,
        finite_size: false,
        inconclusive: false,
    })
}

/// Finite-size rate from an estimation outcome.
///
/// `β·I` and the asymptotic fields use the point estimates; `χ_worst` uses
/// `(T_min, ξ_max)`.
pub fn finite_rate(
    v_a: f64,
    est: &EstimationResult,
    det: &DetectorModel,
    beta: f64,
    finite: &FiniteSize,
    series: ZSeries,
) -> Result<KeyRateReport> {
    validate_beta(beta)?;
    let n_key = finite.n_key();
    if n_key == 0 || n_key > finite.n_total {
        return Err(Error::usage(format!("key length {n_key} must be in 1..={}", finite.n_total)));
    }
    for (name, e) in [("epsilon_bar", finite.epsilon_bar), ("epsilon_PA", finite.epsilon_pa)] {
        if !(e > 0.0 && e < 1.0) {
            return Err(Error::domain(format!("{name} = {e} not in (0, 1)")));
        }
    }
    let t_hat = est.transmission_hat.clamp(f64::MIN_POSITIVE, 1.0);
    let xi_hat = if est.xi_hat.is_finite() { est.xi_hat.max(0.0) } else { 0.0 };
    let base = RateInputs { series, ..RateInputs::asymptotic(v_a, t_hat, xi_hat, *det, beta) };
    let mut report = asymptotic_rate(&base)?;
    // The information term comes straight from the estimates.
    report.snr = est.t_hat * est.t_hat * v_a / est.sigma2_hat;
    report.mutual_information = biawgn_capacity(report.snr);
    report.mutual_information_per_block = COORDINATES_PER_BLOCK * report.mutual_information;
    let k = beta * report.mutual_information - report.chi / COORDINATES_PER_STATE;
    report.k_asymptotic_unclamped = k;
    report.k_asymptotic = k.max(0.0);
    report.k_asymptotic_per_state = report.k_asymptotic * COORDINATES_PER_STATE;
    report.k_asymptotic_per_block = report.k_asymptotic * COORDINATES_PER_BLOCK;

    let delta = delta_n(n_key as f64, finite.epsilon_bar, finite.epsilon_pa, &finite.constants);
    report.finite_size = true;
    report.n_total = Some(finite.n_total);
    report.n_key = Some(n_key);
    report.epsilon_pe = Some(est.epsilon_pe);
    report.epsilon_pa = Some(finite.epsilon_pa);
    report.epsilon_bar = Some(finite.epsilon_bar);
    report.delta_n = Some(delta);

    if est.inconclusive || !(est.t_min > 0.0) || !est.xi_max.is_finite() {
        report.inconclusive = true;
        report.k_finite = Some(0.0);
        return Ok(report);
    }
    report.t_min = Some(est.t_min);
    report.xi_max = Some(est.xi_max);
    let worst = evaluate_point(v_a, est.t_min, est.xi_max, det, series)?;
    let chi_worst = worst.chi.max(report.chi);
    report.chi_worst = Some(chi_worst);
    let ratio = n_key as f64 / finite.n_total as f64;
    let k_fin = ratio * (beta * report.mutual_information - chi_worst / COORDINATES_PER_STATE - delta);
    report.k_finite_unclamped = Some(k_fin);
    report.k_finite = Some(k_fin.max(0.0));
    Ok(report)
}

/// Rate at `inputs`: asymptotic, or finite-size with the disclosed
/// statistics landing on their expectations.
pub fn evaluate(inputs: &RateInputs) -> Result<KeyRateReport> {
    let Some(finite) = inputs.finite else {
        return asymptotic_rate(inputs);
    };
    let n_pe = finite.n_total - finite.n_key();
    if n_pe < 2 {
        return Err(Error::usage("finite-size analysis needs disclosed samples"));
    }
    let det = &inputs.detector;
    let est = SampleEstimate::expected(inputs.v_a, inputs.transmission, inputs.excess_noise, det, n_pe);
    let bounds = confidence_bounds(&est, finite.epsilon_pe, det)?;
    let mut report = finite_rate(inputs.v_a, &bounds, det, inputs.beta, &finite, inputs.series)?;
    report.transmission = inputs.transmission;
    report.excess_noise = inputs.excess_noise;
    report.distance_km = crate::channel::transmission_to_distance(inputs.transmission, inputs.loss_db_per_km).max(0.0);
    Ok(report)
}

/// Bracket of the modulation-variance search.
pub const V_A_SEARCH_RANGE: (f64, f64) = (0.05, 20.0);
const V_A_GRID_POINTS: usize = 48;
const GOLDEN_TOL: f64 = 1e-4;

/// Maximises `f` over `[lo, hi]`: log-spaced grid bracketing, then
/// golden-section refinement. Returns `(argmax, max)`.
pub fn golden_section_max(lo: f64, hi: f64, grid: usize, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    let grid = grid.max(3);
    let xs: Vec<f64> = (0..grid)
        .map(|i| lo * (hi / lo).powf(i as f64 / (grid - 1) as f64))
        .collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let best = (0..grid).max_by(|&a, &b| ys[a].total_cmp(&ys[b])).unwrap_or(0);
    let (mut a, mut b) = (xs[best.saturating_sub(1)], xs[(best + 1).min(grid - 1)]);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a) > GOLDEN_TOL * (a + b) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    let (x, y) = if fc > fd { (c, fc) } else { (d, fd) };
    if y >= ys[best] {
        (x, y)
    } else {
        (xs[best], ys[best])
    }
}

fn unclamped(r: &KeyRateReport) -> f64 {
    r.k_finite_unclamped.unwrap_or(if r.inconclusive { f64::NEG_INFINITY } else { r.k_asymptotic_unclamped })
}

/// Evaluates `inputs` at the modulation variance maximising the rate.
pub fn optimize_modulation(inputs: &RateInputs) -> Result<KeyRateReport> {
    let mut failure = None;
    let (v_a, _) = golden_section_max(V_A_SEARCH_RANGE.0, V_A_SEARCH_RANGE.1, V_A_GRID_POINTS, |v| {
        match evaluate(&RateInputs { v_a: v, ..*inputs }) {
            Ok(r) => unclamped(&r),
            Err(e) => {
                failure.get_or_insert(e);
                f64::NEG_INFINITY
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    evaluate(&RateInputs { v_a, ..*inputs })
}

/// Sweep axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    ModulationVariance,
    Distance,
    BlockLength,
}

/// One report per grid point, in grid order. With `optimize` the modulation
/// variance is re-optimised at each point (ignored on the `V_A` axis).
pub fn sweep(axis: SweepAxis, grid: &[f64], base: &RateInputs, optimize: bool, exec: Execution) -> Result<Vec<KeyRateReport>> {
    if grid.is_empty() {
        return Err(Error::usage("sweep grid is empty"));
    }
    exec.map_slice(grid, |&x| {
        let inputs = match axis {
            SweepAxis::ModulationVariance => return evaluate(&RateInputs { v_a: x, ..*base }),
            SweepAxis::Distance => base.at_distance(x),
            SweepAxis::BlockLength => {
                let mut finite = base.finite.unwrap_or_else(|| FiniteSize::new(0));
                finite.n_total = x.round() as u64;
                base.with_finite(finite)
            }
        };
        if optimize {
            optimize_modulation(&inputs)
        } else {
            evaluate(&inputs)
        }
    })
    .into_iter()
    .collect()
}

/// Largest distance (to `tol_km`) with a positive optimised rate, searched
/// on `[0, max_km]`.
pub fn achievable_distance(base: &RateInputs, max_km: f64, tol_km: f64) -> Result<f64> {
    let positive = |d: f64| -> Result<bool> { Ok(optimize_modulation(&base.at_distance(d))?.key_rate() > 0.0) };
    if !positive(0.0)? {
        return Ok(0.0);
    }
    if positive(max_km)? {
        return Ok(max_km);
    }
    let (mut lo, mut hi) = (0.0, max_km);
    while hi - lo > tol_km {
        let mid = 0.5 * (lo + hi);
        if positive(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::confidence_bounds;

    fn fig2(beta: f64) -> RateInputs {
        RateInputs::asymptotic(1.0, 0.1, 0.01, DetectorModel::new(0.6, 0.0, true).unwrap(), beta)
    }

    #[test]
    fn delta_matches_hand_value() {
        let d = delta_n(1e10, 1e-10, 1e-10, &DeltaConstants::default());
        let expected = 7.0 * ((2e10f64).log2() / 1e10).sqrt() + 2.0 / 1e10 * (1e10f64).log2();
        assert_eq!(d, expected);
        assert!(delta_n(1e14, 1e-10, 1e-10, &DeltaConstants::default()) < 1e-5);
    }

    #[test]
    fn no_reconciliation_means_no_key() {
        for v_a in [0.5, 1.0, 3.0] {
            let r = asymptotic_rate(&RateInputs { v_a, ..fig2(0.0) }).unwrap();
            assert!(r.k_asymptotic_unclamped <= 0.0);
            assert_eq!(r.k_asymptotic, 0.0);
        }
    }

    #[test]
    fn entanglement_breaking_noise_gives_zero() {
        for xi in [1.0, 1.5] {
            for t in [1.0, 0.5, 0.1] {
                for k in 1..=40 {
                    let v_a = 0.125 * k as f64;
                    let det = DetectorModel::new(0.6, 0.0, true).unwrap();
                    let r = asymptotic_rate(&RateInputs::asymptotic(v_a, t, xi, det, 1.0)).unwrap();
                    assert_eq!(r.k_asymptotic, 0.0, "V_A={v_a} T={t} xi={xi}");
                }
            }
        }
    }

    #[test]
    fn fig2_curve_is_positive_and_unimodal() {
        let grid: Vec<f64> = (0..=60).map(|i| 0.25 + i as f64 * 3.75 / 60.0).collect();
        let lo = sweep(SweepAxis::ModulationVariance, &grid, &fig2(0.8), false, Execution::Parallel).unwrap();
        let hi = sweep(SweepAxis::ModulationVariance, &grid, &fig2(0.9), false, Execution::Parallel).unwrap();
        let ks: Vec<f64> = lo.iter().map(|r| r.k_asymptotic_unclamped).collect();
        assert!(ks.iter().any(|&k| k > 0.0));
        let peak = (0..ks.len()).max_by(|&a, &b| ks[a].total_cmp(&ks[b])).unwrap();
        assert!(peak > 0 && peak < ks.len() - 1);
        assert!(ks[..=peak].windows(2).all(|w| w[1] > w[0]));
        assert!(ks[peak..].windows(2).all(|w| w[1] < w[0]));
        for (a, b) in lo.iter().zip(&hi) {
            assert!(b.k_asymptotic_unclamped > a.k_asymptotic_unclamped);
        }
    }

    #[test]
    fn rate_monotone_in_noise_and_efficiency() {
        let mut prev = f64::INFINITY;
        for i in 0..10 {
            let r = asymptotic_rate(&RateInputs { excess_noise: 0.005 * i as f64, ..fig2(0.8) }).unwrap();
            assert!(r.k_asymptotic_unclamped < prev);
            prev = r.k_asymptotic_unclamped;
        }
        let mut prev = f64::NEG_INFINITY;
        for i in 0..10 {
            let r = asymptotic_rate(&fig2(0.55 + 0.05 * i as f64)).unwrap();
            assert!(r.k_asymptotic_unclamped > prev);
            prev = r.k_asymptotic_unclamped;
        }
    }

    #[test]
    fn finite_rate_approaches_asymptotic_limit() {
        let det = DetectorModel::new(0.6, 0.0, true).unwrap();
        let base = RateInputs::asymptotic(1.0, 0.1, 0.01, det, 0.8);
        let asym = asymptotic_rate(&base).unwrap();
        let finite = FiniteSize::new(200_000_000_000_000);
        let r = evaluate(&base.with_finite(finite)).unwrap();
        assert_eq!(r.n_key, Some(100_000_000_000_000));
        let k = r.k_finite.unwrap();
        assert!(k <= 0.5 * asym.k_asymptotic);
        assert!((k - 0.5 * asym.k_asymptotic).abs() < 1e-3);
        assert!(r.chi_worst.unwrap() >= r.chi);
    }

    #[test]
    fn block_length_ordering() {
        let det = DetectorModel::new(0.6, 0.0, true).unwrap();
        let base = RateInputs::asymptotic(1.0, 0.1, 0.005, det, 0.8)
            .at_distance(20.0)
            .with_finite(FiniteSize::new(1));
        let grid = [1e8, 1e10, 1e12, 1e14];
        let rows = sweep(SweepAxis::BlockLength, &grid, &base, true, Execution::Parallel).unwrap();
        let ks: Vec<f64> = rows.iter().map(|r| r.key_rate()).collect();
        assert!(ks[0] > 0.0);
        assert!(ks.windows(2).all(|w| w[1] > w[0]), "{ks:?}");
    }

    #[test]
    fn inconclusive_estimation_yields_zero() {
        let det = DetectorModel::ideal();
        let est = SampleEstimate { t_hat: 0.01, sigma2_hat: 1.0, n_samples: 100, sum_x2: 100.0 };
        let bounds = confidence_bounds(&est, 1e-10, &det).unwrap();
        assert!(bounds.inconclusive);
        let r = finite_rate(1.0, &bounds, &det, 0.9, &FiniteSize::new(200), ZSeries::default()).unwrap();
        assert!(r.inconclusive);
        assert_eq!(r.k_finite, Some(0.0));
    }

    #[test]
    fn single_point_sweep_equals_direct_call() {
        let rows = sweep(SweepAxis::ModulationVariance, &[1.3], &fig2(0.8), false, Execution::Sequential).unwrap();
        assert_eq!(rows, vec![asymptotic_rate(&RateInputs { v_a: 1.3, ..fig2(0.8) }).unwrap()]);
        assert!(matches!(
            sweep(SweepAxis::Distance, &[], &fig2(0.8), false, Execution::Sequential),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn report_round_trips_through_json() {
        let det = DetectorModel::new(0.6, 0.0, true).unwrap();
        let base = RateInputs::asymptotic(1.0, 0.1, 0.005, det, 0.8).with_finite(FiniteSize::new(10_000_000_000));
        for r in [asymptotic_rate(&fig2(0.8)).unwrap(), evaluate(&base).unwrap()] {
            let text = serde_json::to_string(&r).unwrap();
            let back: KeyRateReport = serde_json::from_str(&text).unwrap();
            assert_eq!(back, r);
        }
    }

    #[test]
    fn units_are_consistent() {
        let r = asymptotic_rate(&fig2(0.8)).unwrap();
        assert_eq!(r.mutual_information_per_block, 8.0 * r.mutual_information);
        assert_eq!(r.k_asymptotic_per_state, 2.0 * r.k_asymptotic);
        assert_eq!(r.k_asymptotic_per_block, 8.0 * r.k_asymptotic);
    }

    #[test]
    fn golden_section_finds_interior_maximum() {
        let (x, y) = golden_section_max(0.1, 10.0, 10, |v| -(v - 2.345f64).powi(2));
        assert!((x - 2.345).abs() < 1e-3);
        assert!(y <= 0.0 && y > -1e-6);
    }
}
