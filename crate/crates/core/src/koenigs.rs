//! Complex-plane checks for `f(z) = √(L² − L + z)` on the disk `D_L(L)`
//! (radius `L`, center `L`), Koenigs approximants, and the function
//! `C(L) = √(4L² · lim c_n)` with `c_n` started at `f(0)`.
//!
//! Shifting by `ψ(w) = L + Lw` moves `D_L(L)` to the unit disk, where
//! `g = ψ⁻¹ ∘ f ∘ ψ` is `g(w) = w / (√(L² + Lw) + L)` (no cancellation near
//! `w = 0`) and `g'(0) = λ = 1/(2L)`.

use std::f64::consts::PI;

use crate::catalog::FunctionSpec;
use crate::error::{Error, Result};
use crate::iteration::{candidate_sequence, estimate_limit, DEFAULT_TERMS};
use crate::numeric::{Complex, Ext, Precision};

fn check_l(l: f64) -> Result<()> {
    if l > 1.0 && l.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("L must exceed 1, got {l}")))
    }
}

/// Points of the open disk `D_L(L)` on a polar grid about its center:
/// Chebyshev-spaced radii in `(0, L)`, uniform angles.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskSample {
    pub l: f64,
    pub points: Vec<Complex>,
}

impl DiskSample {
    pub fn new(l: f64, n_samples: usize) -> Result<DiskSample> {
        check_l(l)?;
        let n_r = ((n_samples as f64).sqrt().ceil() as usize).max(1);
        let n_theta = n_samples.div_ceil(n_r);
        let mut points = Vec::with_capacity(n_r * n_theta + 1);
        points.push(Complex::new(l, 0.0));
        for i in 0..n_r {
            let x = ((2 * i + 1) as f64 * PI / (2 * n_r) as f64).cos();
            let r = 0.5 * l * (1.0 - x);
            for j in 0..n_theta {
                let th = 2.0 * PI * j as f64 / n_theta as f64;
                points.push(Complex::new(l + r * th.cos(), r * th.sin()));
            }
        }
        points.retain(|z| (z - l).norm() < l);
        Ok(DiskSample { l, points })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskCheck {
    pub ok: bool,
    /// `min L − |f(z) − L|` over the samples.
    pub margin: f64,
    pub worst: Complex,
}

/// Falsification check that `f` maps `D_L(L)` into itself.
pub fn disk_self_map_check(l: f64, n_samples: usize) -> Result<DiskCheck> {
    if n_samples < 100 {
        return Err(Error::InvalidParameter(format!(
            "need at least 100 samples, got {n_samples}"
        )));
    }
    let sample = DiskSample::new(l, n_samples)?;
    let shift = l * l - l;
    let mut out = DiskCheck {
        ok: true,
        margin: f64::INFINITY,
        worst: Complex::new(l, 0.0),
    };
    for z in sample.points {
        let fz = (z + shift).sqrt();
        let margin = l - (fz - l).norm();
        if margin < out.margin {
            out.margin = margin;
            out.worst = z;
        }
    }
    out.ok = out.margin > 0.0;
    Ok(out)
}

/// The witness `z = L + 2/3`: inside `D_L(L)`, while `z²` lies outside the
/// translated disk `D_L(L²)`. Returns `(z ∈ A, z² ∈ B)`.
pub fn non_surjectivity_witness(l: f64) -> Result<(bool, bool)> {
    check_l(l)?;
    let z = l + 2.0 / 3.0;
    let in_a = (z - l).abs() < l;
    let in_b = (z * z - l * l).abs() < l;
    Ok((in_a, in_b))
}

/// Checks that the disk `C = D_{L²}(L²)` lies inside the cardioid
/// `r ≤ 2L²(1 + cos θ)` bounding `S(A)`, `A = D_L(L)`, `S(z) = z²`:
/// pointwise on the boundary angles, by squaring polar samples of `A`, and
/// by taking principal roots of polar samples of `C`.
pub fn cardioid_containment_check(l: f64, n_theta: usize) -> Result<bool> {
    check_l(l)?;
    if n_theta < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 angles, got {n_theta}"
        )));
    }
    let l2 = l * l;
    let slack = 1e-12;
    let cardioid = |th: f64| 2.0 * l2 * (1.0 + th.cos());
    let n_r = 16;
    for i in 0..n_theta {
        // Open angle range: at ±π/2 the disks touch the origin.
        let th = -PI / 2.0 + PI * (i as f64 + 0.5) / n_theta as f64;
        if 2.0 * l2 * th.cos() > cardioid(th) {
            return Ok(false);
        }
        for j in 1..=n_r {
            let frac = j as f64 / (n_r + 1) as f64;
            // (r, θ) ∈ A squares to (r², 2θ).
            let r = frac * 2.0 * l * th.cos();
            if r * r > cardioid(2.0 * th) * (1.0 + slack) {
                return Ok(false);
            }
            // A point of C has a principal root in A.
            let rc = frac * 2.0 * l2 * th.cos();
            let w = Complex::from_polar(rc, th).sqrt();
            if (w - l).norm() >= l {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `λ⁻ⁿ g⁽ⁿ⁾(ψ⁻¹(z))` with `λ = 1/(2L)`.
pub fn koenigs_approximant(l: f64, z: Complex, n: usize) -> Result<Complex> {
    check_l(l)?;
    let mut w = (z - l) / l;
    for i in 1..=n {
        let rad = Complex::new(l * l, 0.0) + w * l;
        if rad.re <= 0.0 {
            return Err(Error::DomainExit(i));
        }
        w /= rad.sqrt() + l;
        if !(w.re.is_finite() && w.im.is_finite()) {
            return Err(Error::DomainExit(i));
        }
    }
    Ok(w * (2.0 * l).powi(n as i32))
}

/// `C(L) = √(4L² · lim c_n)` for `f_L(t) = √(L² − L + t)` from `t0 = f_L(0)`,
/// with `m = 1/(2L)`.
pub fn currie_c(l: f64) -> Result<f64> {
    check_l(l)?;
    let (c, l_ext) = currie_parts(l);
    let spec = FunctionSpec::SqrtAffine { c: c.to_f64() };
    let t0 = c.sqrt();
    let cs = candidate_sequence(
        &spec,
        l_ext,
        1.0 / (2.0 * l),
        t0,
        DEFAULT_TERMS,
        Precision::Extended,
    )?;
    let est = estimate_limit(&cs, 1e-9)?;
    Ok((4.0 * l * l * est.value).sqrt())
}

/// `(L² − L, L)` in extended precision. The radicand constant is rounded to
/// binary64 for the catalog spec, so `L` is recomputed from it.
fn currie_parts(l: f64) -> (Ext, Ext) {
    let c = Ext::from_f64(l) * (Ext::from_f64(l) - 1.0);
    let c64 = Ext::from_f64(c.to_f64());
    let fixed = ((c64 * 4.0 + 1.0).sqrt() + 1.0) / 2.0;
    (c64, fixed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_maps_into_itself() {
        for l in [1.25, 2.0, 3.0, 10.0] {
            let r = disk_self_map_check(l, 10_000).unwrap();
            assert!(r.ok && r.margin > 0.0, "L={l}: {r:?}");
        }
        assert!(disk_self_map_check(2.0, 50).is_err());
        assert!(disk_self_map_check(1.0, 500).is_err());
    }

    #[test]
    fn sample_is_inside_disk() {
        let s = DiskSample::new(2.0, 1000).unwrap();
        assert!(s.points.len() >= 1000);
        assert!(s.points.iter().all(|z| (z - 2.0).norm() < 2.0));
        assert_eq!(s.points[0], Complex::new(2.0, 0.0));
    }

    #[test]
    fn center_has_full_margin() {
        let l = 2.0;
        let fz = (Complex::new(l, 0.0) + (l * l - l)).sqrt();
        assert_eq!(fz, Complex::new(l, 0.0));
    }

    #[test]
    fn witness() {
        for l in [1.25, 2.0, 3.0] {
            assert_eq!(non_surjectivity_witness(l).unwrap(), (true, false));
        }
    }

    #[test]
    fn cardioid() {
        for l in [1.25, 2.0, 3.0, 10.0] {
            assert!(cardioid_containment_check(l, 1000).unwrap());
        }
        // θ = 0: circle reaches 2L², cardioid 4L².
        let l: f64 = 2.0;
        assert!(2.0 * l * l < 4.0 * l * l);
    }

    #[test]
    fn approximant_at_center_is_zero() {
        for n in 0..10 {
            assert_eq!(
                koenigs_approximant(2.0, Complex::new(2.0, 0.0), n).unwrap(),
                Complex::new(0.0, 0.0)
            );
        }
    }

    #[test]
    fn approximant_on_real_axis_is_candidate_sequence() {
        for (l, t0) in [(2.0, 1.0), (2.0, 3.5), (3.0, 0.5), (1.25, 2.0)] {
            let spec = FunctionSpec::SqrtAffine { c: l * l - l };
            let (_, l_ext) = currie_parts(l);
            let cs = candidate_sequence(
                &spec,
                l_ext,
                1.0 / (2.0 * l),
                Ext::from_f64(t0),
                20,
                Precision::Extended,
            )
            .unwrap();
            for n in 0..=20 {
                let phi = koenigs_approximant(l, Complex::new(t0, 0.0), n).unwrap();
                let c = cs.c[n].to_f64();
                assert!(
                    (l * phi.norm() - c).abs() <= 1e-12 * c,
                    "L={l} t0={t0} n={n}"
                );
            }
        }
    }

    #[test]
    fn approximants_converge() {
        let z = Complex::new(1.0, 0.0);
        let vals: Vec<Complex> = (1..=20)
            .map(|n| koenigs_approximant(2.0, z, n).unwrap())
            .collect();
        for w in vals.windows(3) {
            assert!((w[2] - w[1]).norm() < (w[1] - w[0]).norm());
        }
        assert!(vals[19].norm() > 0.1);
        let z = Complex::new(2.5, 1.0);
        let a = koenigs_approximant(2.0, z, 30).unwrap();
        let b = koenigs_approximant(2.0, z, 31).unwrap();
        assert!((a - b).norm() < 1e-8 * a.norm());
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn currie_values() {
        // mpmath at 300 digits.
        let cases = [
            (2.0, std::f64::consts::PI),
            (1.5, 2.535104563891508721993159235136),
            (1.25, 2.328165697118332612876913157879),
            (3.0, 4.493767376985934468406116975897),
            (10.0, 14.33683101449125107790361425378),
        ];
        for (l, want) in cases {
            let got = currie_c(l).unwrap();
            assert!(
                (got - want).abs() < 1e-12 * want,
                "C({l}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn currie_positive_on_grid() {
        // C is not monotone: mpmath puts a minimum near L = 1.2.
        for i in 1..=30 {
            let l = 1.0 + 3.0 * i as f64 / 30.0;
            let v = currie_c(l).unwrap();
            assert!(v.is_finite() && v > 2.3, "C({l}) = {v}");
        }
        let v = currie_c(1.2).unwrap();
        assert!((v - 2.31430046768511).abs() < 1e-12);
    }
}
