//! Orbits `t_n = f^(n)(t0)`, candidate sequences `c_n = |L − t_n|/mⁿ`, and
//! their limit estimates.
//!
//! `c_n` is built by the ratio recursion
//! `c_{n+1} = c_n · |L − t_{n+1}| / (m |L − t_n|)`, so `mⁿ` is never formed.
//! A sequence stops once `|L − t_n| < 10³ ulp(L)` in the active precision;
//! past that point the residual is rounding noise.

use rayon::prelude::*;

use crate::catalog::{fixed_point, FunctionSpec, IterMap};
use crate::error::{Error, Result};
use crate::numeric::{Ext, Precision};

const MAX_ORBIT: usize = 1_000_000;
/// Cancellation stop threshold, in ulps of `L`.
const STOP_ULPS: f64 = 1e3;
/// Default orbit cap for limit estimation; the stop rule normally ends the
/// sequence long before.
pub const DEFAULT_TERMS: usize = 4000;

#[derive(Clone, Debug)]
pub struct Orbit<M = FunctionSpec> {
    pub map: M,
    pub t0: Ext,
    pub values: Vec<Ext>,
    pub precision: Precision,
}

#[derive(Clone, Debug)]
pub struct CandidateSequence<M = FunctionSpec> {
    pub orbit: Orbit<M>,
    pub l: Ext,
    pub m: f64,
    pub c: Vec<Ext>,
    /// Set when the cancellation stop rule ended the sequence early.
    pub truncated: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitMethod {
    ClosedForm,
    Aitken,
    DirectTail,
}

impl LimitMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            LimitMethod::ClosedForm => "closed_form",
            LimitMethod::Aitken => "aitken",
            LimitMethod::DirectTail => "direct_tail",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitEstimate {
    pub value: f64,
    pub value_ext: Ext,
    pub abs_error_bound: f64,
    pub method: LimitMethod,
    pub n_used: usize,
}

impl LimitEstimate {
    pub fn closed_form(value: f64) -> LimitEstimate {
        LimitEstimate {
            value,
            value_ext: Ext::from_f64(value),
            abs_error_bound: 0.0,
            method: LimitMethod::ClosedForm,
            n_used: 0,
        }
    }
}

fn step<M: IterMap + ?Sized>(map: &M, t: Ext, index: usize, precision: Precision) -> Result<Ext> {
    map.eval_in(precision, t).map_err(|e| match e {
        Error::Domain { what, t } => Error::OrbitExit { what, index, t },
        other => other,
    })
}

fn round_to(precision: Precision, t: Ext) -> Ext {
    match precision {
        Precision::Double => Ext::from_f64(t.to_f64()),
        Precision::Extended => t,
    }
}

pub fn orbit_in<M: IterMap + Clone>(
    map: &M,
    t0: Ext,
    n: usize,
    precision: Precision,
) -> Result<Orbit<M>> {
    if n > MAX_ORBIT {
        return Err(Error::InvalidParameter(format!(
            "orbit length {n} exceeds {MAX_ORBIT}"
        )));
    }
    let t0 = round_to(precision, t0);
    let mut values = Vec::with_capacity(n + 1);
    values.push(t0);
    for i in 1..=n {
        let next = step(map, values[i - 1], i, precision)?;
        values.push(next);
    }
    Ok(Orbit {
        map: map.clone(),
        t0,
        values,
        precision,
    })
}

/// Extended-precision orbit of `n` steps from `t0`.
pub fn orbit<M: IterMap + Clone>(map: &M, t0: f64, n: usize) -> Result<Orbit<M>> {
    orbit_in(map, Ext::from_f64(t0), n, Precision::Extended)
}

fn stop_threshold(precision: Precision, l: Ext) -> f64 {
    STOP_ULPS * precision.ulp(l.to_f64())
}

/// Candidate sequence of `map` at the fixed point `l` with multiplier `m`.
/// At most `n + 1` terms; fewer when the stop rule fires.
pub fn candidate_sequence<M: IterMap + Clone>(
    map: &M,
    l: Ext,
    m: f64,
    t0: Ext,
    n: usize,
    precision: Precision,
) -> Result<CandidateSequence<M>> {
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::ZeroMultiplier(m));
    }
    if n > MAX_ORBIT {
        return Err(Error::InvalidParameter(format!(
            "sequence length {n} exceeds {MAX_ORBIT}"
        )));
    }
    let l = round_to(precision, l);
    let t0 = round_to(precision, t0);
    map.eval_in(precision, t0)?;
    let mut values = vec![t0];
    let mut c = vec![(l - t0).abs()];
    let mut truncated = false;
    if c[0].is_zero() {
        let orb = orbit_in(map, t0, n, precision)?;
        return Ok(CandidateSequence {
            orbit: orb,
            l,
            m,
            c: vec![Ext::ZERO; n + 1],
            truncated,
        });
    }
    let threshold = stop_threshold(precision, l);
    if c[0].to_f64() < threshold {
        truncated = true;
    } else {
        let mut prev_dist = c[0];
        for i in 1..=n {
            let t = step(map, values[i - 1], i, precision)?;
            let dist = (l - t).abs();
            if dist.to_f64() < threshold {
                truncated = true;
                break;
            }
            let next = c[i - 1] * (dist / prev_dist) / m;
            values.push(t);
            c.push(next);
            prev_dist = dist;
        }
    }
    Ok(CandidateSequence {
        orbit: Orbit {
            map: map.clone(),
            t0,
            values,
            precision,
        },
        l,
        m,
        c,
        truncated,
    })
}

impl<M> CandidateSequence<M> {
    pub fn precision(&self) -> Precision {
        self.orbit.precision
    }

    /// Rounding noise carried by `c_n`: `c_n · u |L| / (|L − t_n| (1 − m))`.
    fn noise(&self, n: usize) -> f64 {
        let u = 4.0 * self.precision().eps();
        let dist = (self.l - self.orbit.values[n]).abs().to_f64();
        if dist == 0.0 {
            return 0.0;
        }
        self.c[n].to_f64() * u * self.l.to_f64().abs().max(dist) / (dist * (1.0 - self.m))
    }
}

/// Limit of a candidate sequence by Aitken Δ² or the direct tail, whichever
/// carries the smaller error estimate.
///
/// Each candidate's error is the gap to its predecessor plus the rounding
/// noise at that index. Aitken steps whose denominator falls below ten
/// rounding units are skipped.
pub fn estimate_limit<M>(cs: &CandidateSequence<M>, rel_tol: f64) -> Result<LimitEstimate> {
    if cs.c.iter().all(|x| x.is_zero()) {
        return Err(Error::Degenerate);
    }
    let c = &cs.c;
    if c.len() < 6 {
        return Err(Error::NotConverged(format!(
            "only {} usable terms (need 6)",
            c.len()
        )));
    }
    let eps = cs.precision().eps();
    let mut best: Option<LimitEstimate> = None;
    let mut offer = |value: Ext, err: f64, method: LimitMethod, n: usize| {
        if !err.is_finite() || !value.is_finite() {
            return;
        }
        if best.is_none_or(|b| err < b.abs_error_bound) {
            best = Some(LimitEstimate {
                value: value.to_f64(),
                value_ext: value,
                abs_error_bound: err,
                method,
                n_used: n + 1,
            });
        }
    };
    for n in 1..c.len() {
        let err = (c[n] - c[n - 1]).abs().to_f64() + cs.noise(n);
        offer(c[n], err, LimitMethod::DirectTail, n);
    }
    let mut prev_a: Option<Ext> = None;
    for n in 2..c.len() {
        let d1 = c[n] - c[n - 1];
        let den = d1 - (c[n - 1] - c[n - 2]);
        let scale = c[n].abs().to_f64();
        if den.abs().to_f64() < 10.0 * eps * scale || den.is_zero() {
            prev_a = None;
            continue;
        }
        let a = c[n] - d1.sqr() / den;
        if let Some(p) = prev_a {
            let err = (a - p).abs().to_f64() + 3.0 * (cs.noise(n) + cs.noise(n - 1));
            offer(a, err, LimitMethod::Aitken, n);
        }
        prev_a = Some(a);
    }
    let est = best.ok_or_else(|| Error::NotConverged("no usable estimate".into()))?;
    if est.abs_error_bound > rel_tol * est.value.abs() {
        return Err(Error::NotConverged(format!(
            "best estimate {} has error bound {:.3e} above rel_tol {rel_tol:e}",
            est.value, est.abs_error_bound
        )));
    }
    Ok(est)
}

/// Candidate-sequence limit for a catalog map from `t0`, using the catalog
/// fixed point and `|f'(L)|` as the multiplier.
pub fn limit_for(
    spec: &FunctionSpec,
    t0: f64,
    precision: Precision,
    rel_tol: f64,
) -> Result<LimitEstimate> {
    let fp = fixed_point(spec)?;
    let cs = candidate_sequence(
        spec,
        fp.l_ext,
        fp.m.abs(),
        Ext::from_f64(t0),
        DEFAULT_TERMS,
        precision,
    )?;
    estimate_limit(&cs, rel_tol)
}

/// Same as [`limit_for`] from an extended-precision start.
pub fn limit_for_ext(
    spec: &FunctionSpec,
    t0: Ext,
    precision: Precision,
    rel_tol: f64,
) -> Result<LimitEstimate> {
    let fp = fixed_point(spec)?;
    let cs = candidate_sequence(spec, fp.l_ext, fp.m.abs(), t0, DEFAULT_TERMS, precision)?;
    estimate_limit(&cs, rel_tol)
}

/// `f^(k)(t0)` in extended precision, the start of the delayed sequence.
pub fn delayed_start<M: IterMap + Clone>(map: &M, t0: f64, k: usize) -> Result<Ext> {
    Ok(*orbit(map, t0, k)?.values.last().unwrap())
}

/// True iff the orbit moves monotonically toward `L`: strictly decreasing and
/// bounded below by `L` from above, strictly increasing and bounded above
/// from below. Terms within the cancellation threshold of `L` only need to
/// stay on their side.
pub fn check_monotone_orbit<M>(o: &Orbit<M>, l: Ext) -> bool {
    let l = round_to(o.precision, l);
    let threshold = stop_threshold(o.precision, l);
    let t0 = o.values[0];
    if t0 == l {
        return o.values.iter().all(|&t| t == l);
    }
    let above = t0 > l;
    for w in o.values.windows(2) {
        let (prev, next) = (w[0], w[1]);
        let side_ok = if above { next >= l } else { next <= l };
        if !side_ok {
            return false;
        }
        if (l - prev).abs().to_f64() < threshold {
            continue;
        }
        let moves = if above { next < prev } else { next > prev };
        if !moves {
            return false;
        }
    }
    true
}

/// True iff `c_n` is non-increasing for starts above `L` and non-decreasing
/// below, up to a slack of `4 ulp(L)/mⁿ + 4u·c_n` per step.
pub fn check_monotone_candidate<M>(cs: &CandidateSequence<M>) -> bool {
    let above = cs.orbit.t0 > cs.l;
    let u = cs.precision().eps();
    let ulp_l = cs.precision().ulp(cs.l.to_f64());
    for n in 1..cs.c.len() {
        let dist = (cs.l - cs.orbit.values[n]).abs().to_f64();
        let cn = cs.c[n].to_f64();
        let amplification = if dist > 0.0 { cn / dist } else { 0.0 };
        let slack = 4.0 * ulp_l * amplification / (1.0 - cs.m) + 4.0 * u * cn;
        let delta = (cs.c[n] - cs.c[n - 1]).to_f64();
        let ok = if above {
            delta <= slack
        } else {
            delta >= -slack
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Termwise comparison of the candidate sequences of `f` from `t0` and `g`
/// from `u0`, given `g < f` pointwise.
///
/// Below `L` (`u0 ≤ t0 < L`) the conclusion is `c_f,k < c_g,k`; above `L`
/// (`t0 ≥ u0 > L`) it is `c_f,k > c_g,k`, for `1 ≤ k ≤ n`. The ordering
/// `g < f` is checked at every orbit point visited by either map.
#[allow(clippy::too_many_arguments)]
pub fn compare_candidates(
    f: &FunctionSpec,
    g: &FunctionSpec,
    l: Ext,
    m: f64,
    t0: f64,
    u0: f64,
    n: usize,
) -> Result<bool> {
    let (t0e, u0e) = (Ext::from_f64(t0), Ext::from_f64(u0));
    let below = if u0e <= t0e && t0e < l {
        true
    } else if t0e >= u0e && u0e > l {
        false
    } else {
        return Err(Error::InvalidParameter(format!(
            "starts must satisfy u0 ≤ t0 < L or t0 ≥ u0 > L, got t0={t0}, u0={u0}"
        )));
    };
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::ZeroMultiplier(m));
    }
    let of = orbit(f, t0, n)?;
    let og = orbit(g, u0, n)?;
    // Near L, f − g shrinks like (t − L)² and drops below double-double
    // resolution, so there `g ≤ f` only has to hold up to rounding.
    let near = 1e-12 * l.abs().to_f64().max(1.0);
    let u = Precision::Extended.eps();
    for (k, &t) in of.values[..n]
        .iter()
        .chain(og.values[..n].iter())
        .enumerate()
    {
        if t == l {
            continue;
        }
        let (fv, gv) = (f.eval_ext(t)?, g.eval_ext(t)?);
        let ordered = if (t - l).abs().to_f64() > near {
            gv < fv
        } else {
            (gv - fv).to_f64() <= 8.0 * u * fv.abs().to_f64()
        };
        if !ordered {
            return Err(Error::HypothesisViolated(format!(
                "g({}) = {} is not below f = {} (visit {k})",
                t.to_f64(),
                gv.to_f64(),
                fv.to_f64()
            )));
        }
    }
    for k in 1..=n {
        let df = (l - of.values[k]).abs();
        let dg = (l - og.values[k]).abs();
        let holds = if below { df < dg } else { df > dg };
        if !holds {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Limits for independent `(spec, t0)` pairs, evaluated in parallel.
pub fn sweep_limits(
    jobs: &[(FunctionSpec, f64)],
    precision: Precision,
    rel_tol: f64,
) -> Vec<Result<LimitEstimate>> {
    jobs.par_iter()
        .map(|(spec, t0)| limit_for(spec, *t0, precision, rel_tol))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mobius::{associated_q, candidate_limit_exact, MobiusCoeffs};
    use crate::repro::{root_like_specs, root_like_starts};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    const SQRT2: FunctionSpec = FunctionSpec::SqrtAffine { c: 2.0 };

    #[test]
    fn orbit_examples() {
        let o = orbit(&SQRT2, 0.0, 3).unwrap();
        let v: Vec<f64> = o.values.iter().map(|x| x.to_f64()).collect();
        assert_eq!(v[0], 0.0);
        assert!((v[1] - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!((v[2] - 1.8477590650225735).abs() < 1e-15);
        assert!((v[3] - 1.9615705608064609).abs() < 1e-15);
        let o = orbit(&SQRT2, 2.0, 5).unwrap();
        assert!(o.values.iter().all(|&t| t == Ext::TWO));
        let cf = FunctionSpec::ContinuedFraction { a: 2.0, b: 15.0 };
        assert_eq!(orbit(&cf, 2.0, 1).unwrap().values[1].to_f64(), 9.5);
    }

    #[test]
    fn orbit_reports_failing_index() {
        // 3 + 1/(t − 1): t0 = 2 → 4 → 10/3 ... stays away; start at the pole preimage instead.
        let m = FunctionSpec::Mobius {
            a: 1.0,
            b: 1.0,
            d: -1.0,
        };
        // f(t) = (t + 1)/(t − 1) has pole 1 and f(3) = 2, f(2) = 3; f(0) = −1, f(−1) = 0.
        assert!(orbit(&m, 0.0, 4).is_ok());
        let err = orbit(&m, 1.0, 3).unwrap_err();
        assert!(matches!(err, Error::OrbitExit { index: 1, .. }), "{err:?}");
        let err = orbit(&FunctionSpec::LogShift { l: 1.0 }, -10.0, 3).unwrap_err();
        assert!(matches!(err, Error::OrbitExit { index: 1, .. }));
    }

    #[test]
    fn candidate_at_fixed_point_is_degenerate() {
        let cs =
            candidate_sequence(&SQRT2, Ext::TWO, 0.25, Ext::TWO, 10, Precision::Extended).unwrap();
        assert!(cs.c.iter().all(|x| x.is_zero()));
        assert_eq!(estimate_limit(&cs, 1e-8), Err(Error::Degenerate));
    }

    #[test]
    fn candidate_rejects_bad_multiplier() {
        for m in [0.0, 1.0, -0.5, 1.5] {
            assert!(matches!(
                candidate_sequence(&SQRT2, Ext::TWO, m, Ext::ZERO, 10, Precision::Extended),
                Err(Error::ZeroMultiplier(_))
            ));
        }
    }

    #[test]
    fn mysterious_pattern_limit() {
        let est = limit_for(&SQRT2, 0.0, Precision::Extended, 1e-8).unwrap();
        let want = PI * PI / 4.0;
        assert!((est.value - want).abs() < 1e-12 * want, "{est:?}");
        assert!(est.abs_error_bound < 1e-12);
    }

    #[test]
    fn stop_rule_caps_double_precision() {
        let fp = fixed_point(&SQRT2).unwrap();
        let cs =
            candidate_sequence(&SQRT2, fp.l_ext, 0.25, Ext::ZERO, 200, Precision::Double).unwrap();
        assert!(cs.truncated);
        assert!((15..=25).contains(&cs.c.len()), "{}", cs.c.len());
        let cs = candidate_sequence(&SQRT2, fp.l_ext, 0.25, Ext::ZERO, 200, Precision::Extended)
            .unwrap();
        assert!(cs.truncated && cs.c.len() > 40);
    }

    #[test]
    fn incremental_matches_definition() {
        for spec in FunctionSpec::examples() {
            let fp = fixed_point(&spec).unwrap();
            let m = fp.m.abs();
            let (lo, _) = spec.sample_interval().unwrap();
            let t0 = 0.5 * (lo + fp.l);
            for precision in [Precision::Double, Precision::Extended] {
                let cs = candidate_sequence(&spec, fp.l_ext, m, Ext::from_f64(t0), 20, precision)
                    .unwrap();
                let tol = match precision {
                    Precision::Double => 1e-8,
                    Precision::Extended => 1e-20,
                };
                for (n, c) in cs.c.iter().enumerate() {
                    let direct =
                        (cs.l - cs.orbit.values[n]).abs() / Ext::from_f64(m).powi(n as i32);
                    let rel = ((*c - direct) / direct).abs().to_f64();
                    assert!(rel < tol, "{spec} {precision:?} n={n}: rel {rel:e}");
                }
            }
        }
    }

    #[test]
    fn known_limits() {
        let m = FunctionSpec::Mobius {
            a: 3.0,
            b: 6.0,
            d: 4.0,
        };
        let est = limit_for(&m, 0.0, Precision::Extended, 1e-8).unwrap();
        assert!((est.value - 10.0 / 3.0).abs() < 1e-12);
        // mpmath at 300 digits: 3.123152153852597288605152041278628
        let k = FunctionSpec::KthRoot { l: 3.0, k: 3 };
        let est = limit_for(&k, 0.0, Precision::Extended, 1e-8).unwrap();
        assert!((est.value - 3.123152153852597).abs() < 1e-14, "{est:?}");
        // mpmath: 1.443881231553311230979386211366
        let est = limit_for(
            &FunctionSpec::LogShift { l: 1.0 },
            0.0,
            Precision::Extended,
            1e-8,
        )
        .unwrap();
        assert!((est.value - 1.443881231553311).abs() < 1e-13, "{est:?}");
    }

    #[test]
    fn not_converged_on_too_few_terms() {
        let cs =
            candidate_sequence(&SQRT2, Ext::TWO, 0.25, Ext::ZERO, 4, Precision::Extended).unwrap();
        assert!(matches!(
            estimate_limit(&cs, 1e-8),
            Err(Error::NotConverged(_))
        ));
        let cs =
            candidate_sequence(&SQRT2, Ext::TWO, 0.25, Ext::ZERO, 8, Precision::Extended).unwrap();
        assert!(matches!(
            estimate_limit(&cs, 1e-14),
            Err(Error::NotConverged(_))
        ));
    }

    #[test]
    fn monotone_orbit_examples() {
        for t0 in [0.0, 7.0] {
            assert!(check_monotone_orbit(
                &orbit(&SQRT2, t0, 60).unwrap(),
                Ext::TWO
            ));
        }
        assert!(check_monotone_orbit(
            &orbit(&FunctionSpec::NonSmoothDemo, 0.5, 60).unwrap(),
            Ext::ONE
        ));
        // The continued fraction oscillates around its fixed point.
        let cf = FunctionSpec::ContinuedFraction { a: 2.0, b: 15.0 };
        assert!(!check_monotone_orbit(
            &orbit(&cf, 2.0, 10).unwrap(),
            Ext::from_f64(5.0)
        ));
    }

    #[test]
    fn monotone_candidate_examples() {
        for t0 in [0.0, 7.0] {
            let cs = candidate_sequence(
                &SQRT2,
                Ext::TWO,
                0.25,
                Ext::from_f64(t0),
                200,
                Precision::Extended,
            )
            .unwrap();
            assert!(check_monotone_candidate(&cs));
        }
        let m = FunctionSpec::Mobius {
            a: 3.0,
            b: 6.0,
            d: 4.0,
        };
        let cs = candidate_sequence(&m, Ext::TWO, 1.0 / 6.0, Ext::ONE, 200, Precision::Extended)
            .unwrap();
        assert!(check_monotone_candidate(&cs));
    }

    #[test]
    fn lemma_monotonicity_on_catalog() {
        let specs = root_like_specs();
        assert!(specs.len() >= 10, "{specs:?}");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for spec in specs {
            let fp = fixed_point(&spec).unwrap();
            for t0 in root_like_starts(&spec, 20, &mut rng).unwrap() {
                let o = orbit(&spec, t0, 40).unwrap();
                assert!(check_monotone_orbit(&o, fp.l_ext), "{spec} t0={t0}");
                let cs = candidate_sequence(
                    &spec,
                    fp.l_ext,
                    fp.m,
                    Ext::from_f64(t0),
                    400,
                    Precision::Extended,
                )
                .unwrap();
                assert!(check_monotone_candidate(&cs), "{spec} t0={t0}");
            }
        }
    }

    #[test]
    fn limit_grows_with_distance_from_fixed_point() {
        // Closer starts give smaller limits on each side of L.
        for spec in [
            SQRT2,
            FunctionSpec::KthRoot { l: 3.0, k: 3 },
            FunctionSpec::LogShift { l: 1.0 },
        ] {
            let fp = fixed_point(&spec).unwrap();
            let (lo, hi) = spec.sample_interval().unwrap();
            for (a, b) in [(lo, fp.l), (fp.l, hi)] {
                let mut prev: Option<(f64, f64)> = None;
                for i in 1..10 {
                    let t0 = a + (b - a) * i as f64 / 10.0;
                    let v = limit_for(&spec, t0, Precision::Extended, 1e-8)
                        .unwrap()
                        .value;
                    let dist = (t0 - fp.l).abs();
                    if let Some((pd, pv)) = prev {
                        assert_eq!(dist < pd, v < pv, "{spec}: t0={t0}");
                    }
                    prev = Some((dist, v));
                }
            }
        }
    }

    #[test]
    fn comparison_with_associated_q() {
        // Gap 1/32 gives Q(t) = (4t + 8)/(t + 6), pole well left of the orbits.
        let q = associated_q(&SQRT2, 1.0 / 32.0).unwrap().spec();
        assert!(compare_candidates(&SQRT2, &q, Ext::TWO, 0.25, 0.0, 0.0, 20).unwrap());
        assert!(compare_candidates(&SQRT2, &q, Ext::TWO, 0.25, 3.0, 3.0, 20).unwrap());
        assert!(compare_candidates(&SQRT2, &q, Ext::TWO, 0.25, 1.0, 0.0, 20).unwrap());
        assert!(matches!(
            compare_candidates(&SQRT2, &SQRT2, Ext::TWO, 0.25, 0.0, 0.0, 20),
            Err(Error::HypothesisViolated(_))
        ));
        assert!(compare_candidates(&SQRT2, &q, Ext::TWO, 0.25, 0.0, 1.0, 20).is_err());
    }

    #[test]
    fn delay_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for spec in [
            SQRT2,
            FunctionSpec::KthRoot { l: 3.0, k: 3 },
            FunctionSpec::Mobius {
                a: 3.0,
                b: 6.0,
                d: 4.0,
            },
        ] {
            let fp = fixed_point(&spec).unwrap();
            let base = limit_for(&spec, 0.0, Precision::Extended, 1e-8).unwrap();
            for _ in 0..5 {
                let k = rng.gen_range(1..=10usize);
                let start = delayed_start(&spec, 0.0, k).unwrap();
                let cs = candidate_sequence(
                    &spec,
                    fp.l_ext,
                    fp.m,
                    start,
                    DEFAULT_TERMS,
                    Precision::Extended,
                );
                let Ok(cs) = cs else { continue };
                if cs.c.len() < 6 {
                    continue;
                }
                let est = estimate_limit(&cs, 1e-6).unwrap();
                let want = fp.m.powi(k as i32) * base.value;
                let tol =
                    est.abs_error_bound + fp.m.powi(k as i32) * base.abs_error_bound + 1e-14 * want;
                assert!(
                    (est.value - want).abs() <= tol.max(1e-10 * want),
                    "{spec} k={k}"
                );
            }
        }
    }

    #[test]
    fn sweep_matches_sequential() {
        let jobs: Vec<_> = [-1.0, 0.0, 1.0, 3.0].iter().map(|&t| (SQRT2, t)).collect();
        let par = sweep_limits(&jobs, Precision::Extended, 1e-8);
        for ((spec, t0), r) in jobs.iter().zip(par) {
            assert_eq!(
                r.unwrap(),
                limit_for(spec, *t0, Precision::Extended, 1e-8).unwrap()
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn q_function_numeric_matches_closed_form(
            l in -3.0f64..3.0, m in 0.05f64..0.8, s in -3.0f64..-0.05, frac in -0.45f64..0.45
        ) {
            let c = crate::mobius::q_from_lms(crate::mobius::QParams { l, m, s }).unwrap();
            let e = c.eigen().unwrap();
            prop_assume!((e.m - m).abs() < 1e-9);
            let r = 0.5 * (e.l + c.d).abs().min((e.l - e.l1).abs());
            let t0 = l + frac * 2.0 * r;
            prop_assume!((t0 - l).abs() > 1e-3 * r);
            let exact = candidate_limit_exact(&MobiusCoeffs::new(c.a, c.b, c.d).unwrap(), t0).unwrap();
            let est = limit_for(&c.spec(), t0, Precision::Extended, 1e-8).unwrap();
            prop_assert!((est.value - exact).abs() <= 1e-8 * exact, "{} vs {exact}", est.value);
        }
    }
}
