//! Gauss and Eisenstein sums by direct enumeration, their closed-form
//! predictions, and sweeps comparing the two.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::{ChainRing, Extension, Subset};
use crate::units::{AdditiveCharacters, MultChar, Roots, UnitGroup};

pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// `|a - b| ≤ tol · max(1, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

fn close_c(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

/// Everything needed to evaluate sums attached to an extension `S/R`.
pub struct SumContext {
    ext: Extension,
    base_units: UnitGroup,
    top_units: UnitGroup,
    base_add: AdditiveCharacters,
    top_add: AdditiveCharacters,
    roots: Roots,
    /// Positions (in `top_units`) of the units with each trace value.
    fibers: Vec<Vec<usize>>,
}

impl SumContext {
    pub fn new(ext: &Extension) -> Result<SumContext> {
        let base_units = UnitGroup::new(ext.base())?;
        let top_units = UnitGroup::new(ext.top())?;
        let mut fibers = vec![Vec::new(); ext.base().size() as usize];
        for (pos, &y) in top_units.units().iter().enumerate() {
            fibers[ext.trace(y) as usize].push(pos);
        }
        let ones = (0..ext.top().size()).filter(|&s| ext.trace(s) == 1).count();
        if ones != fibers[1].len() {
            return Err(Error::Structure(
                "an element of trace 1 is not a unit".into(),
            ));
        }
        Ok(SumContext {
            roots: Roots::new(top_units.exponent()),
            base_add: AdditiveCharacters::new(ext.base())?,
            top_add: AdditiveCharacters::new(ext.top())?,
            ext: ext.clone(),
            base_units,
            top_units,
            fibers,
        })
    }

    pub fn extension(&self) -> &Extension {
        &self.ext
    }
    pub fn base_units(&self) -> &UnitGroup {
        &self.base_units
    }
    pub fn top_units(&self) -> &UnitGroup {
        &self.top_units
    }
    pub fn base_additive(&self) -> &AdditiveCharacters {
        &self.base_add
    }
    pub fn top_additive(&self) -> &AdditiveCharacters {
        &self.top_add
    }

    /// Values of `χ` at every unit of `S`, in unit order.
    pub fn values(&self, chi: &MultChar) -> Vec<Complex64> {
        self.top_units
            .phases(chi)
            .into_iter()
            .map(|k| self.roots.get(k))
            .collect()
    }

    fn fiber_sum(&self, values: &[Complex64], t: u64) -> Complex64 {
        self.fibers[t as usize].iter().map(|&pos| values[pos]).sum()
    }

    /// `E(χ) = Σ_{Tr y = 1} χ(y)`.
    pub fn eisenstein(&self, chi: &MultChar) -> Complex64 {
        self.fiber_sum(&self.values(chi), 1)
    }

    /// `E₀(χ) = Σ_{Tr y = 0, y unit} χ(y)`.
    pub fn eisenstein_singular(&self, chi: &MultChar) -> Complex64 {
        self.fiber_sum(&self.values(chi), 0)
    }

    /// `E(χ, π^i) = Σ_{Tr y = π^i, y unit} χ(y)` for `0 ≤ i < ℓ`.
    pub fn eisenstein_higher(&self, chi: &MultChar, i: u32) -> Result<Complex64> {
        let r = self.ext.base();
        if i >= r.ell() {
            return Err(Error::Parameter(format!(
                "higher sum index {i} must be below ℓ = {}",
                r.ell()
            )));
        }
        let t = r.pow(r.uniformizer(), i as u64);
        Ok(self.fiber_sum(&self.values(chi), t))
    }

    pub fn restrict(&self, chi: &MultChar) -> MultChar {
        self.top_units
            .restrict(chi, &self.ext, &self.base_units)
            .expect("restriction along the context's own extension")
    }
}

/// `G(ψ_a, χ) = Σ_{u ∈ R^×} ψ_a(u) χ(u)`.
pub fn gauss(units: &UnitGroup, add: &AdditiveCharacters, a: u64, chi: &MultChar) -> Complex64 {
    let l = units.exponent() as f64;
    let m = add.modulus() as f64;
    let phases = units.phases(chi);
    units
        .units()
        .iter()
        .zip(phases)
        .map(|(&u, k)| {
            let t = k as f64 / l + add.phase(a, u) as f64 / m;
            Complex64::from_polar(1.0, std::f64::consts::TAU * t)
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum Prediction {
    /// The sum equals this real number.
    Exact(f64),
    /// Only the absolute value is determined.
    Magnitude(f64),
}

impl Prediction {
    pub fn magnitude(&self) -> f64 {
        match *self {
            Prediction::Exact(v) => v.abs(),
            Prediction::Magnitude(v) => v,
        }
    }

    pub fn matches(&self, value: Complex64, tol: f64) -> bool {
        match *self {
            Prediction::Exact(v) => close_c(value, Complex64::new(v, 0.0), tol),
            Prediction::Magnitude(v) => close(value.norm(), v, tol),
        }
    }
}

/// Value of `G(ψ, χ)` over a chain ring with parameters `(q, ℓ)`, from the
/// valuations of the two characters (valuation 0 meaning trivial).
pub fn predict_gauss(q: u64, ell: u32, nu_psi: u32, nu_chi: u32) -> Prediction {
    let q = q as f64;
    let ell_f = ell as f64;
    match (nu_psi, nu_chi) {
        (0, 0) => Prediction::Exact((q - 1.0) * q.powf(ell_f - 1.0)),
        (0, _) => Prediction::Exact(0.0),
        (1, 0) => Prediction::Exact(-q.powf(ell_f - 1.0)),
        (_, 0) => Prediction::Exact(0.0),
        (a, b) if a == b => Prediction::Magnitude(q.powf(ell_f - a as f64 / 2.0)),
        _ => Prediction::Exact(0.0),
    }
}

/// Predicted `E(χ)` and `E₀(χ)` for a character of `S^×`, `[S:R] = n`, with
/// `ν(χ) = k` and `ν(χ_res) = k_res`; `q` and `ℓ` are those of `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EisensteinPrediction {
    pub e: Prediction,
    pub e0: Prediction,
    /// Whether `E₀(χ) = −(q − 1) E(χ)` is predicted.
    pub e0_is_scaled_e: bool,
}

pub fn predict_eisenstein(q: u64, ell: u32, n: usize, k: u32, k_res: u32) -> EisensteinPrediction {
    let qf = q as f64;
    let l = ell as f64;
    let nf = n as f64;
    let kf = k as f64;
    if k == 0 {
        let e = qf.powf((nf - 1.0) * l);
        let e0 = e - qf.powf((nf - 1.0) * (l - 1.0));
        return EisensteinPrediction {
            e: Prediction::Exact(e),
            e0: Prediction::Exact(e0),
            e0_is_scaled_e: false,
        };
    }
    if k_res > 0 {
        let e = if k_res == k {
            qf.powf((nf - 1.0) * (l - kf / 2.0))
        } else {
            0.0
        };
        return EisensteinPrediction {
            e: Prediction::Magnitude(e),
            e0: Prediction::Exact(0.0),
            e0_is_scaled_e: false,
        };
    }
    let e = if k == 1 {
        qf.powf((nf - 1.0) * l - nf / 2.0)
    } else {
        0.0
    };
    let e0 = (1.0 - 1.0 / qf) * qf.powf((nf - 1.0) * l - (nf / 2.0 - 1.0) * kf);
    EisensteinPrediction {
        e: Prediction::Magnitude(e),
        e0: Prediction::Magnitude(e0),
        e0_is_scaled_e: k == 1,
    }
}

/// One character's line in an Eisenstein sweep.
#[derive(Debug, Clone, Serialize)]
pub struct CharRecord {
    pub exponents: Vec<u64>,
    pub nu: u32,
    pub nu_res: u32,
    pub e_abs: f64,
    pub e_predicted: f64,
    pub e_phase: f64,
    pub e0_abs: f64,
    pub e0_predicted: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SumsReport {
    pub base: String,
    pub degree: usize,
    pub characters: usize,
    pub records: Vec<CharRecord>,
    /// Characters whose `|E|`, `|E₀|`, or the `E₀ = −(q−1)E` identity disagree with the prediction.
    pub eisenstein_failures: usize,
    /// `(ψ, χ)` pairs over `S` where `G(ψ^ind, χ)` disagrees with the Gauss-sum prediction.
    pub gauss_failures: usize,
    /// Largest residual of the decomposition of `G(ψ^ind, χ)` over trace fibers.
    pub relation_max_residual: f64,
    pub relation_failures: usize,
    /// Failures among the higher-sum identities for characters trivial on `R^×`.
    pub higher_failures: usize,
    pub zero_pattern_ok: bool,
    pub conjugation_ok: bool,
    pub parseval_ok: bool,
    pub pass: bool,
}

/// Checks every character of `S^×` against the predictions, and every
/// `(ψ, χ)` pair against the fiber decomposition of `G(ψ^ind, χ)`.
pub fn verify_character_sums(ext: &Extension, tol: f64) -> Result<SumsReport> {
    let ctx = SumContext::new(ext)?;
    let r = ext.base();
    let (q, ell, n) = (r.q(), r.ell(), ext.degree());
    let qf = q as f64;
    let top = &ctx.top_units;
    let base = &ctx.base_units;
    let base_elems = r.enumerate(Subset::All)?;
    let pis: Vec<u64> = (0..ell).map(|i| r.pow(r.uniformizer(), i as u64)).collect();
    let nu_psi: Vec<u32> = base_elems
        .iter()
        .map(|&a| ctx.base_add.valuation(a))
        .collect();
    let top_m = ctx.top_add.modulus();
    let psi_top: Vec<Vec<Complex64>> = base_elems
        .iter()
        .map(|&a| {
            let b = ctx.base_add.induce(ext, a);
            let roots = Roots::new(top_m);
            top.units()
                .iter()
                .map(|&y| roots.get(ctx.top_add.phase(b, y)))
                .collect()
        })
        .collect();
    let unit_count_r = base.order() as f64;

    let mut records = Vec::new();
    let mut e_values = std::collections::HashMap::new();
    let (mut eis_fail, mut gauss_fail, mut rel_fail, mut higher_fail) = (0, 0, 0, 0);
    let mut max_residual: f64 = 0.0;
    let mut zero_pattern_ok = true;
    let mut parseval = 0.0;

    for chi in top.characters() {
        let values = ctx.values(&chi);
        let e = ctx.fiber_sum(&values, 1);
        let e0 = ctx.fiber_sum(&values, 0);
        let higher: Vec<Complex64> = pis.iter().map(|&t| ctx.fiber_sum(&values, t)).collect();
        let res = ctx.restrict(&chi);
        let k = top.valuation(&chi);
        let k_res = base.valuation(&res);
        let pred = predict_eisenstein(q, ell, n, k, k_res);

        let mut pass = pred.e.matches(e, tol) && pred.e0.matches(e0, tol);
        if pred.e0_is_scaled_e {
            pass &= close_c(e0, -(qf - 1.0) * e, tol);
        }
        if !pass {
            eis_fail += 1;
        }
        let predicted_nonzero = k_res == k || (k_res == 0 && k <= 1);
        zero_pattern_ok &= predicted_nonzero == (e.norm() > tol);
        parseval += e.norm_sqr();

        // Gauss sums over R for ψ_(i) and χ_res, indexed by ψ then i.
        let g_res: Vec<Vec<Complex64>> = base_elems
            .iter()
            .map(|&a| {
                (0..ell)
                    .map(|i| gauss(base, &ctx.base_add, ctx.base_add.shift(a, i), &res))
                    .collect()
            })
            .collect();

        // e_i = −|R^×| q^{−i} E(χ, π^i), used when χ is trivial on R^×.
        let es: Vec<Complex64> = higher
            .iter()
            .enumerate()
            .map(|(i, &h)| -unit_count_r * qf.powi(-(i as i32)) * h)
            .collect();
        if k >= 1 && k_res == 0 {
            let mut ok = close_c(e0, es.iter().sum(), tol);
            ok &= es[..(k as usize).saturating_sub(1)]
                .iter()
                .all(|z| z.norm() <= tol);
            let top_mag = (1.0 - 1.0 / qf) * qf.powf(n as f64 * (ell as f64 - k as f64 / 2.0));
            ok &= close(es[k as usize - 1].norm(), top_mag, tol);
            for s in 0..(ell - k) as usize {
                let want = -(1.0 - 1.0 / qf) * qf.powi(-(s as i32)) * es[k as usize - 1];
                ok &= close_c(es[k as usize + s], want, tol);
            }
            if !ok {
                higher_fail += 1;
            }
        }

        for (ai, &nu) in nu_psi.iter().enumerate() {
            let g_top: Complex64 = psi_top[ai].iter().zip(&values).map(|(a, b)| a * b).sum();
            if !predict_gauss(q.pow(n as u32), ell, nu, k).matches(g_top, tol) {
                gauss_fail += 1;
            }
            let rhs = e0
                + (0..ell as usize)
                    .map(|i| g_res[ai][i] * qf.powi(-(i as i32)) * higher[i])
                    .sum::<Complex64>();
            let resid = (g_top - rhs).norm() / g_top.norm().max(1.0);
            max_residual = max_residual.max(resid);
            let mut ok = resid <= tol;
            if k >= 1 && k_res == 0 && nu >= 1 {
                let j = (nu - 1) as usize;
                let valued = es[..j].iter().sum::<Complex64>() + es[j] * (qf / (qf - 1.0));
                ok &= close_c(g_top, valued, tol);
            }
            if !ok {
                rel_fail += 1;
            }
        }

        e_values.insert(chi.exponents.clone(), e);
        records.push(CharRecord {
            exponents: chi.exponents.clone(),
            nu: k,
            nu_res: k_res,
            e_abs: e.norm(),
            e_predicted: pred.e.magnitude(),
            e_phase: e.arg(),
            e0_abs: e0.norm(),
            e0_predicted: pred.e0.magnitude(),
            pass,
        });
    }

    let conjugation_ok = top.characters().all(|chi| {
        let e = e_values[&chi.exponents];
        let eb = e_values[&top.conjugate(&chi).exponents];
        close_c(eb, e.conj(), tol)
    });
    let fiber = qf.powi(((n - 1) as u32 * ell) as i32);
    let parseval_ok = close(parseval, top.order() as f64 * fiber, tol);
    let pass = eis_fail == 0
        && gauss_fail == 0
        && rel_fail == 0
        && higher_fail == 0
        && zero_pattern_ok
        && conjugation_ok
        && parseval_ok;
    Ok(SumsReport {
        base: r.label().to_string(),
        degree: n,
        characters: records.len(),
        records,
        eisenstein_failures: eis_fail,
        gauss_failures: gauss_fail,
        relation_max_residual: max_residual,
        relation_failures: rel_fail,
        higher_failures: higher_fail,
        zero_pattern_ok,
        conjugation_ok,
        parseval_ok,
        pass,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GaussReport {
    pub ring: String,
    pub pairs: usize,
    pub exact_failures: usize,
    pub magnitude_failures: usize,
    pub conjugation_ok: bool,
    pub max_error: f64,
    pub pass: bool,
}

/// Compares `G(ψ, χ)` with its prediction for every pair of characters of `R`.
pub fn verify_gauss_sums(ring: &ChainRing, tol: f64) -> Result<GaussReport> {
    let units = UnitGroup::new(ring)?;
    let add = AdditiveCharacters::new(ring)?;
    let elems = ring.enumerate(Subset::All)?;
    let (mut exact_fail, mut mag_fail, mut pairs) = (0, 0, 0);
    let mut max_error: f64 = 0.0;
    let mut conjugation_ok = true;
    for chi in units.characters() {
        let nu_chi = units.valuation(&chi);
        let chi_bar = units.conjugate(&chi);
        for &a in &elems {
            pairs += 1;
            let g = gauss(&units, &add, a, &chi);
            let pred = predict_gauss(ring.q(), ring.ell(), add.valuation(a), nu_chi);
            let err = match pred {
                Prediction::Exact(v) => (g - Complex64::new(v, 0.0)).norm(),
                Prediction::Magnitude(v) => (g.norm() - v).abs(),
            };
            max_error = max_error.max(err / pred.magnitude().max(1.0));
            if !pred.matches(g, tol) {
                match pred {
                    Prediction::Exact(_) => exact_fail += 1,
                    Prediction::Magnitude(_) => mag_fail += 1,
                }
            }
            let gb = gauss(&units, &add, ring.neg(a), &chi_bar);
            conjugation_ok &= close_c(gb, g.conj(), tol);
        }
    }
    Ok(GaussReport {
        ring: ring.label().to_string(),
        pairs,
        exact_failures: exact_fail,
        magnitude_failures: mag_fail,
        conjugation_ok,
        max_error,
        pass: exact_fail == 0 && mag_fail == 0 && conjugation_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_chain;

    fn ctx(base: &str, n: usize) -> SumContext {
        SumContext::new(&Extension::new(&parse_chain(base).unwrap(), n).unwrap()).unwrap()
    }

    #[test]
    fn trivial_character_sums() {
        let c = ctx("GF(3)", 2);
        let t = c.top_units().trivial();
        assert!((c.eisenstein(&t) - Complex64::new(3.0, 0.0)).norm() < 1e-9);
        assert!((c.eisenstein_singular(&t) - Complex64::new(2.0, 0.0)).norm() < 1e-9);
        let c = ctx("Zmod(9)", 2);
        let t = c.top_units().trivial();
        assert!((c.eisenstein(&t).re - 9.0).abs() < 1e-9);
        assert!((c.eisenstein_higher(&t, 0).unwrap() - c.eisenstein(&t)).norm() < 1e-12);
        assert!(c.eisenstein_higher(&t, 2).is_err());
    }

    #[test]
    fn quadratic_character_examples() {
        let c = ctx("GF(3)", 3);
        let eps = c.top_units().quadratic();
        assert!((c.eisenstein(&eps).norm() - 3.0).abs() < 1e-9);
        let c = ctx("Zmod(9)", 2);
        let eps = c.top_units().quadratic();
        assert!((c.eisenstein_singular(&eps).norm() - 6.0).abs() < 1e-9);
    }

    #[test]
    fn field_case_singular_sums_vanish_off_the_subfield_kernel() {
        let c = ctx("GF(3)", 2);
        for chi in c.top_units().characters() {
            let res = c.restrict(&chi);
            if !c.base_units().is_trivial(&res) {
                assert!(c.eisenstein_singular(&chi).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn gauss_examples() {
        let z9 = parse_chain("Zmod(9)").unwrap();
        let u = UnitGroup::new(&z9).unwrap();
        let add = AdditiveCharacters::new(&z9).unwrap();
        let t = u.trivial();
        assert!((gauss(&u, &add, 0, &t).re - 6.0).abs() < 1e-9);
        assert!((gauss(&u, &add, 3, &t).re + 3.0).abs() < 1e-9);
        let f3 = parse_chain("GF(3)").unwrap();
        let u = UnitGroup::new(&f3).unwrap();
        let add = AdditiveCharacters::new(&f3).unwrap();
        assert!((gauss(&u, &add, 1, &u.quadratic()).norm() - 3f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn prediction_examples() {
        assert_eq!(predict_gauss(3, 2, 0, 1), Prediction::Exact(0.0));
        assert_eq!(predict_gauss(3, 2, 2, 1), Prediction::Exact(0.0));
        assert_eq!(predict_gauss(3, 2, 2, 2), Prediction::Magnitude(3.0));
        assert_eq!(predict_gauss(3, 2, 1, 0), Prediction::Exact(-3.0));
        let p = predict_eisenstein(3, 1, 2, 1, 0);
        assert!((p.e.magnitude() - 1.0).abs() < 1e-12 && (p.e0.magnitude() - 2.0).abs() < 1e-12);
        assert!(p.e0_is_scaled_e);
        assert!((predict_eisenstein(3, 2, 2, 2, 2).e.magnitude() - 3.0).abs() < 1e-12);
        let p = predict_eisenstein(3, 2, 2, 2, 0);
        assert_eq!(p.e.magnitude(), 0.0);
        assert!((p.e0.magnitude() - 6.0).abs() < 1e-12);
        assert_eq!(predict_eisenstein(3, 2, 2, 0, 0).e, Prediction::Exact(9.0));
    }

    #[test]
    fn sweeps_pass_on_small_extensions() {
        for (base, n) in [
            ("GF(3)", 2usize),
            ("GF(3)", 3),
            ("Zmod(9)", 2),
            ("EC(3,2,1)", 2),
        ] {
            let ext = Extension::new(&parse_chain(base).unwrap(), n).unwrap();
            let report = verify_character_sums(&ext, DEFAULT_TOLERANCE).unwrap();
            assert!(
                report.pass,
                "{base} deg {n}: {:?}",
                (
                    report.eisenstein_failures,
                    report.gauss_failures,
                    report.relation_failures,
                    report.higher_failures,
                    report.zero_pattern_ok,
                    report.conjugation_ok,
                    report.parseval_ok,
                )
            );
            assert_eq!(report.characters as u64, ext.top().unit_count());
        }
    }

    #[test]
    fn sums_do_not_depend_on_the_defining_polynomial() {
        // X^2 + 1 is the default over GF(3); X^2 + X + 2, lifted as X^2 + 4X + 5, is another basic irreducible.
        let z9 = parse_chain("Zmod(9)").unwrap();
        let std = Extension::new(&z9, 2).unwrap();
        let alt = Extension::from_top(z9.extend_with(vec![5, 4]).unwrap()).unwrap();
        let magnitudes = |ext: &Extension| {
            let c = SumContext::new(ext).unwrap();
            let mut v: Vec<(i64, i64)> = c
                .top_units()
                .characters()
                .map(|chi| {
                    (
                        (c.eisenstein(&chi).norm() * 1e6).round() as i64,
                        (c.eisenstein_singular(&chi).norm() * 1e6).round() as i64,
                    )
                })
                .collect();
            v.sort_unstable();
            v
        };
        assert_eq!(magnitudes(&std), magnitudes(&alt));
        assert!(verify_character_sums(&alt, DEFAULT_TOLERANCE).unwrap().pass);
    }

    #[test]
    fn gauss_sweeps_pass() {
        for s in ["GF(3)", "GF(5)", "Zmod(9)", "EC(3,2,1)"] {
            let report = verify_gauss_sums(&parse_chain(s).unwrap(), DEFAULT_TOLERANCE).unwrap();
            assert!(report.pass, "{s}: {report:?}");
        }
    }

    #[test]
    fn a_wrong_prediction_is_caught() {
        let p = predict_eisenstein(3, 2, 2, 2, 2);
        assert!(!p.e.matches(Complex64::new(2.9, 0.0), DEFAULT_TOLERANCE));
    }
}
