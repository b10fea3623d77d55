//! Named verification checks grouped into suites.
//!
//! Every check draws its randomness from a ChaCha stream seeded by the run
//! seed and the check name, so reports depend only on the configuration.
//! Checks run in parallel; results are returned sorted by name.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::brackets::rc_bracket_normalized;
use crate::contour::DomainDesc;
use crate::covariance::{cocycle_defect, covariance_residual, covariance_residuals, random_mobius, MobiusElem};
use crate::error::{Error, Result};
use crate::genop::{
    injectivity_certificate, monomial_coeff, t_coeffs_quadrature, t_eval_quadrature_with, t_series, QuadOptions,
};
use crate::hardy::{
    b_ell, b_ell_double_factorial, diagram_check, gram_matrix, hardy_norm_ratio, hermitian_defect, laguerre_profiles,
    legendre_norm, off_diagonal_defect, p_matrix, phase_oracle, ptilde_check, rg_legendre_check, HalfLineProfile,
    LegendreTable, SeparableElement, LEGENDRE_TABLE_MAX,
};
use crate::holo::{ExpFn, Holo2, UniFn};
use crate::holography::{inversion_check, inversion_check_quadrature, inversion_constant, psi_eigen_check};
use crate::numerics::{binomial, c, rel_err, BiPoly, UniPoly, C, I};
use crate::pde::{eigen_residual, euler_identity_residual, series_support, EigenFamily};
use crate::residues::{
    algebraic_defect, h_closed_form_defect, i_identity_gaps, verify_hab_lemma, verify_hab_lemma_mirror,
};

/// Knobs shared by every check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    /// Quadrature convergence tolerance.
    pub tolerance: f64,
    pub max_nodes: usize,
    /// Largest jet or series order a check may request.
    pub jet_cap: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            max_nodes: 4096,
            jet_cap: 16,
            seed: 0,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Usage(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.max_nodes < 8 || self.jet_cap == 0 {
            return Err(Error::Usage("node and jet caps must be positive (at least 8 nodes)".into()));
        }
        Ok(())
    }

    pub fn quad(&self) -> QuadOptions {
        QuadOptions {
            tol: self.tolerance,
            max_nodes: self.max_nodes,
            ..QuadOptions::default()
        }
    }

    fn require_order(&self, order: usize) -> Result<()> {
        if order > self.jet_cap {
            return Err(Error::Usage(format!("check needs jet order {order} above the cap {}", self.jet_cap)));
        }
        Ok(())
    }
}

/// Suite selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    /// Checks tied to an acceptance criterion, from every module.
    Gate,
    Genop,
    Pde,
    Holography,
    Hardy,
    Covariance,
    Residues,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 8] = ["gate", "genop", "pde", "holography", "hardy", "covariance", "residues", "all"];

    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Gate => "gate",
            Suite::Genop => "genop",
            Suite::Pde => "pde",
            Suite::Holography => "holography",
            Suite::Hardy => "hardy",
            Suite::Covariance => "covariance",
            Suite::Residues => "residues",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "gate" => Suite::Gate,
            "genop" => Suite::Genop,
            "pde" => Suite::Pde,
            "holography" => Suite::Holography,
            "hardy" => Suite::Hardy,
            "covariance" => Suite::Covariance,
            "residues" => Suite::Residues,
            "all" => Suite::All,
            other => {
                return Err(Error::Usage(format!(
                    "unknown suite {other:?}; expected one of {}",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}

/// One line of a verification report. A check passes when `residual ≤ tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub criterion: Option<u8>,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

struct Outcome {
    residual: f64,
    detail: String,
}

impl Outcome {
    fn new(residual: f64, detail: impl Into<String>) -> Result<Self> {
        Ok(Self {
            residual,
            detail: detail.into(),
        })
    }
}

type Runner = fn(&SuiteConfig, &mut ChaCha8Rng) -> Result<Outcome>;

struct CheckDef {
    name: &'static str,
    module: Suite,
    criterion: Option<u8>,
    tolerance: f64,
    run: Runner,
}

const fn entry(name: &'static str, module: Suite, criterion: Option<u8>, tolerance: f64, run: Runner) -> CheckDef {
    CheckDef {
        name,
        module,
        criterion,
        tolerance,
        run,
    }
}

const REGISTRY: &[CheckDef] = &[
    entry("genop.series_matches_brackets", Suite::Genop, Some(1), 1e-9, series_matches_brackets),
    entry("genop.f_ell_closed_form", Suite::Genop, Some(2), 1e-8, f_ell_closed_form),
    entry("genop.injectivity_certificate", Suite::Genop, Some(5), 0.0, injectivity),
    entry("genop.homotopy_invariance", Suite::Genop, None, 1e-9, homotopy_invariance),
    entry("genop.product_monomial_series", Suite::Genop, None, 1e-13, product_monomial_series),
    entry("pde.euler_identity", Suite::Pde, Some(3), 1e-9, euler_identity),
    entry("pde.eigen_support", Suite::Pde, Some(3), 0.0, eigen_support),
    entry("pde.f_ell_eigenfunctions", Suite::Pde, None, 1e-10, f_ell_eigenfunctions),
    entry("holography.inversion_constants", Suite::Holography, Some(4), 1e-10, inversion_constants),
    entry("holography.psi_eigen", Suite::Holography, Some(4), 1e-9, psi_eigen),
    entry("holography.inversion_quadrature", Suite::Holography, None, 1e-8, inversion_quadrature),
    entry("hardy.legendre_at_one", Suite::Hardy, Some(6), 0.0, legendre_at_one),
    entry("hardy.legendre_orthogonality", Suite::Hardy, Some(6), 1e-12, legendre_orthogonality),
    entry("hardy.ptilde", Suite::Hardy, Some(6), 1e-10, ptilde),
    entry("hardy.norm_ratio", Suite::Hardy, Some(7), 1e-6, norm_ratio),
    entry("hardy.b_ell_closed_forms", Suite::Hardy, Some(7), 1e-14, b_ell_closed_forms),
    entry("hardy.phase_oracle", Suite::Hardy, Some(8), 1e-13, phase),
    entry("hardy.diagram", Suite::Hardy, Some(8), 1e-6, diagram),
    entry("hardy.gram_orthogonality", Suite::Hardy, None, 1e-12, gram_orthogonality),
    entry("hardy.p_hermitian", Suite::Hardy, None, 1e-12, p_hermitian),
    entry("covariance.random_elements", Suite::Covariance, Some(9), 1e-7, covariance_random),
    entry("covariance.cocycle", Suite::Covariance, None, 1e-12, cocycle),
    entry("covariance.closed_forms", Suite::Covariance, None, 1e-7, covariance_closed_forms),
    entry("residues.hab_lemma", Suite::Residues, Some(10), 1e-8, hab_lemma),
    entry("residues.hab_mirror", Suite::Residues, None, 1e-8, hab_mirror),
    entry("residues.i_identities", Suite::Residues, Some(10), 1e-8, i_identities),
    entry("residues.h_closed_forms", Suite::Residues, Some(10), 1e-12, h_closed_forms),
    entry("residues.algebraic_identities", Suite::Residues, None, 1e-12, algebraic_identities),
];

fn selected(suite: Suite) -> impl Iterator<Item = &'static CheckDef> {
    REGISTRY.iter().filter(move |s| match suite {
        Suite::All => true,
        Suite::Gate => s.criterion.is_some(),
        module => s.module == module,
    })
}

/// Names of the checks in `suite`, sorted.
pub fn check_names(suite: Suite) -> Vec<&'static str> {
    let mut names: Vec<_> = selected(suite).map(|s| s.name).collect();
    names.sort_unstable();
    names
}

/// 64-bit FNV-1a, used to derive a per-check seed.
fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn run_one(def: &CheckDef, cfg: &SuiteConfig) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ fnv1a(def.name));
    let (residual, detail) = match (def.run)(cfg, &mut rng) {
        Ok(o) => (o.residual, o.detail),
        Err(e) => (f64::NAN, e.to_string()),
    };
    Check {
        name: def.name.to_string(),
        criterion: def.criterion,
        residual,
        tolerance: def.tolerance,
        passed: residual <= def.tolerance,
        detail,
    }
}

/// Runs every check of `suite`; the output is sorted by check name.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    cfg.validate()?;
    let defs: Vec<&CheckDef> = selected(suite).collect();
    let mut checks: Vec<Check> = defs.par_iter().map(|d| run_one(d, cfg)).collect();
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(checks)
}

/// Runs a single check by name.
pub fn run_check(name: &str, cfg: &SuiteConfig) -> Result<Check> {
    cfg.validate()?;
    let def = REGISTRY
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::Usage(format!("unknown check {name:?}")))?;
    Ok(run_one(def, cfg))
}

fn unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen_range(-1.0..=1.0)
}

fn random_complex<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> C {
    C::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Polynomial of total degree `degree` with coefficients uniform in the unit square.
pub fn random_bipoly<R: Rng + ?Sized>(rng: &mut R, degree: usize) -> BiPoly {
    let mut terms = Vec::new();
    for k in 0..=degree {
        for j in 0..=k {
            terms.push((k - j, j, c(unit(rng), unit(rng))));
        }
    }
    BiPoly::from_terms(terms)
}

/// One-variable polynomial of degree `degree` with coefficients in the unit square.
pub fn random_unipoly<R: Rng + ?Sized>(rng: &mut R, degree: usize) -> UniPoly {
    UniPoly::new((0..=degree).map(|_| c(unit(rng), unit(rng))).collect())
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |acc, v| if v.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(v) })
}

/// Fraction of the largest coefficient used as the relative-error floor, so
/// that brackets vanishing identically (ℓ above the degree) remain comparable.
pub const SERIES_FLOOR: f64 = 1e-3;

fn series_gap(got: &[C], want: &[C]) -> f64 {
    let largest = want.iter().map(|w| w.norm()).fold(0.0, f64::max);
    let scale = (SERIES_FLOOR * largest).max(f64::MIN_POSITIVE);
    worst(got.iter().zip(want).map(|(g, w)| rel_err(*g, *w, scale)))
}

fn series_matches_brackets(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    const MAX_L: usize = 8;
    cfg.require_order(MAX_L)?;
    let domain = DomainDesc::disk(C::default(), 2.0)?;
    let mut gap: f64 = 0.0;
    for _ in 0..10 {
        let degree = rng.gen_range(0..=6);
        let f = Holo2::polynomial(domain, random_bipoly(rng, degree));
        for _ in 0..3 {
            let z = random_complex(rng, 0.5);
            let quad: Vec<C> = t_coeffs_quadrature(&f, z, MAX_L, &cfg.quad())?.iter().map(|q| q.value).collect();
            let exact = (0..=MAX_L).map(|l| rc_bracket_normalized(&f, l, z)).collect::<Result<Vec<_>>>()?;
            gap = worst([gap, series_gap(&quad, &exact)]);
        }
    }
    Outcome::new(gap, "10 polynomials of degree ≤ 6 on |ζ| < 2, ℓ ≤ 8, 3 points each")
}

fn f_ell_closed_form(cfg: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut gap: f64 = 0.0;
    for l in 0..=6 {
        let family = EigenFamily::new(l);
        let f = family.holo();
        for z in [c(0.0, 2.0), c(1.0, 3.0)] {
            for angle in [0.0, 0.7, 2.5] {
                let t = C::from_polar(0.2 * z.im, angle);
                let got = t_eval_quadrature_with(&f, z, t, &cfg.quad())?.value;
                gap = worst([gap, rel_err(got, family.t_closed_form(z, t), f64::MIN_POSITIVE)]);
            }
        }
    }
    Outcome::new(gap, "f_ℓ, ℓ ≤ 6, z ∈ {2i, 1+3i}, |t| = 0.2 Im z")
}

const SIGMA_FLOOR: f64 = 1e-8;

fn injectivity(_: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut deficiency = 0usize;
    let mut sigmas = Vec::new();
    for d in 0..=6 {
        let cert = injectivity_certificate(d)?;
        let expected = (d + 1) * (d + 2) / 2;
        deficiency += expected.saturating_sub(cert.rank);
        if cert.sigma_min <= SIGMA_FLOOR {
            deficiency += 1;
        }
        sigmas.push(format!("d={d}: σ_min={:.3e}", cert.sigma_min));
    }
    Outcome::new(deficiency as f64, sigmas.join(", "))
}

fn homotopy_invariance(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let f = EigenFamily::new(2).holo();
    let mut gap: f64 = 0.0;
    for _ in 0..4 {
        let z = c(unit(rng), 2.0);
        let t = C::from_polar(0.3, rng.gen_range(0.0..std::f64::consts::TAU));
        let values = [0.8, 1.2, 1.7]
            .iter()
            .map(|&r| {
                let opts = QuadOptions {
                    radius: Some(r),
                    ..cfg.quad()
                };
                t_eval_quadrature_with(&f, z, t, &opts).map(|e| e.value)
            })
            .collect::<Result<Vec<_>>>()?;
        gap = worst(values.iter().map(|v| rel_err(*v, values[0], f64::MIN_POSITIVE)).chain([gap]));
    }
    Outcome::new(gap, "T f_2 on three radii between 2|t| and Im z")
}

fn product_monomial_series(cfg: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<Outcome> {
    cfg.require_order(3)?;
    let f = Holo2::polynomial(DomainDesc::EntirePlane, BiPoly::monomial(1, 1, c(1.0, 0.0)));
    let series = t_series(&f, C::default(), 3)?;
    let want = [C::default(), C::default(), c(-2.0, 0.0), C::default()];
    let oracle: Vec<C> = (0..=3).map(|l| monomial_coeff(1, 1, l, C::default())).collect();
    let gap = worst(series.coeffs.iter().zip(&want).chain(oracle.iter().zip(&want)).map(|(a, b)| (a - b).norm()));
    Outcome::new(gap, "ζ1ζ2 at z = 0 has series (0, 0, −2, 0)")
}

fn euler_identity(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    const L: usize = 8;
    cfg.require_order(L)?;
    let mut gap: f64 = 0.0;
    for _ in 0..5 {
        let f = Holo2::polynomial(DomainDesc::EntirePlane, random_bipoly(rng, 5));
        gap = worst([gap, euler_identity_residual(&f, random_complex(rng, 1.0), L)?]);
    }
    Outcome::new(gap, "5 polynomials of degree 5, L = 8")
}

const SUPPORT_THRESHOLD: f64 = 1e-10;

fn eigen_support(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    const L: usize = 8;
    cfg.require_order(L)?;
    let z = c(0.0, 2.0);
    let mut mismatches = 0usize;
    for _ in 0..6 {
        let mut chosen: Vec<usize> = (0..=4).filter(|_| rng.gen_bool(0.5)).collect();
        if chosen.is_empty() {
            chosen.push(rng.gen_range(0..=4));
        }
        let terms = chosen
            .iter()
            .map(|&k| (c(1.0 + rng.gen::<f64>(), unit(rng)), EigenFamily::new(k).holo()))
            .collect();
        let f = Holo2::linear_combination(DomainDesc::UpperHalfPlane, terms);
        let support = series_support(&f, z, L, SUPPORT_THRESHOLD)?;
        mismatches += support.len().abs_diff(chosen.len())
            + chosen.iter().filter(|k| !support.contains(k)).count();
    }
    Outcome::new(mismatches as f64, "series support of mixtures of f_0..f_4 at z = 2i")
}

fn f_ell_eigenfunctions(_: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let samples = [c(0.0, 1.0), c(0.5, 2.0), c(-1.0, 0.7)];
    let gap = (0..=6)
        .map(|l| eigen_residual(&EigenFamily::new(l).holo(), l, &samples))
        .collect::<Result<Vec<_>>>()?;
    Outcome::new(worst(gap), "P f_ℓ = −ℓ(ℓ+1) f_ℓ, ℓ ≤ 6")
}

fn inversion_constants(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    const MAX_L: usize = 8;
    cfg.require_order(MAX_L)?;
    let mut gap: f64 = 0.0;
    for _ in 0..3 {
        let degree = rng.gen_range(0..=5);
        let g = random_unipoly(rng, degree);
        let z = random_complex(rng, 1.0);
        for l in 0..=MAX_L {
            let want = inversion_constant(l);
            gap = worst([gap, rel_err(inversion_check(&g, l, z)?, C::from(want), f64::MIN_POSITIVE)]);
        }
    }
    Outcome::new(gap, "c_ℓ(T Ψ_ℓ g)/g = 2^{2ℓ+1}/(2ℓ+1), ℓ ≤ 8, deg g ≤ 5")
}

fn psi_eigen(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    const MAX_L: usize = 6;
    cfg.require_order(crate::pde::eigen_jet_order(MAX_L))?;
    let samples = [c(0.2, 0.1), c(-0.5, 0.4)];
    let mut gap: f64 = 0.0;
    for l in 0..=MAX_L {
        let poly: Arc<dyn UniFn> = Arc::new(random_unipoly(rng, 5));
        let exp: Arc<dyn UniFn> = Arc::new(ExpFn {
            amplitude: c(1.0, 0.0),
            rate: c(0.3 * unit(rng), 0.5),
        });
        for g in [poly, exp] {
            gap = worst([gap, psi_eigen_check(g, l, &samples, DomainDesc::EntirePlane)?]);
        }
    }
    Outcome::new(gap, "P Ψ_ℓ g = −ℓ(ℓ+1) Ψ_ℓ g for polynomial and exponential g, ℓ ≤ 6")
}

fn inversion_quadrature(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = random_unipoly(rng, 3);
    let z = random_complex(rng, 0.5);
    let mut gap: f64 = 0.0;
    let mut constants = Vec::new();
    for l in 0..=4 {
        let got = inversion_check_quadrature(&g, l, z, &cfg.quad())?;
        constants.push(format!("{:.12}", got.re));
        gap = worst([gap, rel_err(got, C::from(inversion_constant(l)), f64::MIN_POSITIVE)]);
    }
    Outcome::new(gap, format!("quadrature constants {}", constants.join(", ")))
}

fn legendre_at_one(_: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let table = LegendreTable::new(LEGENDRE_TABLE_MAX)?;
    let failures = (0..=LEGENDRE_TABLE_MAX).filter(|&l| !table.normalised_at_one(l)).count();
    Outcome::new(failures as f64, format!("integer numerators sum to 2^ℓ for ℓ ≤ {LEGENDRE_TABLE_MAX}"))
}

fn legendre_orthogonality(_: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let gap = (0..=12).flat_map(|l| (0..=12).map(move |lp| (l, lp))).map(|(l, lp)| {
        let want = if l == lp { 2.0 / (2 * l + 1) as f64 } else { 0.0 };
        (legendre_norm(l, lp) - want).abs()
    });
    Outcome::new(worst(gap), "∫ P_ℓ P_ℓ′ = 2δ/(2ℓ+1), ℓ, ℓ′ ≤ 12")
}

fn ptilde(_: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let samples: Vec<f64> = (0..16).map(|_| unit(rng)).chain([-1.0, 1.0]).collect();
    Outcome::new(worst((0..=12).map(|l| ptilde_check(l, &samples))), "(P̃ + ℓ(ℓ+1)) P_ℓ = 0, ℓ ≤ 12")
}

fn norm_ratio(_: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let profiles = [HalfLineProfile::exp_monomial(0, 1.0)?, HalfLineProfile::exp_monomial(1, 1.0)?];
    let mut gap: f64 = 0.0;
    for h in &profiles {
        for l in 0..=3 {
            let b = b_ell(l)?;
            gap = worst([gap, (hardy_norm_ratio(h, l)? - b).abs() / b]);
        }
    }
    Outcome::new(gap, "‖t^{−ℓ} T F̃(h P_ℓ)‖² / ‖F̃(h P_ℓ)‖² = b_ℓ for h = e^{−s}, s e^{−s}, ℓ ≤ 3")
}

fn b_ell_closed_forms(_: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let gap = (0..=20)
        .map(|l| {
            let exact = binomial(2 * l, l) / (4f64.powi(l as i32 + 1) * std::f64::consts::PI * (2 * l + 1) as f64);
            (b_ell_double_factorial(l) - exact).abs() / exact
        })
        .collect::<Vec<_>>();
    Outcome::new(worst(gap), "central-binomial and double-factorial forms, ℓ ≤ 20")
}

fn phase(_: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut gap: f64 = 0.0;
    for _ in 0..8 {
        let (s, v, z) = (rng.gen_range(0.1..3.0), unit(rng), c(unit(rng), rng.gen_range(0.5..2.0)));
        let (brute, closed) = phase_oracle(s, v, z);
        let (jet, formula) = rg_legendre_check(1, s, v, z)?;
        let scale = closed.norm().max(f64::MIN_POSITIVE);
        gap = worst([gap, (brute - closed).norm() / scale, (jet - formula).norm() / scale]);
    }
    Outcome::new(gap, "R_1 of e^{is(aζ1+bζ2)} against −isv e^{isz}")
}

fn diagram(_: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let z = c(0.0, 2.0);
    let profiles = [HalfLineProfile::exp_monomial(0, 1.0)?, HalfLineProfile::exp_monomial(1, 1.0)?];
    let mut gap: f64 = 0.0;
    for h in &profiles {
        for l in 0..=3 {
            let (lhs, rhs) = diagram_check(h, l, z)?;
            gap = worst([gap, rel_err(lhs, rhs, f64::MIN_POSITIVE)]);
        }
    }
    Outcome::new(gap, "c_ℓ(T F̃(h P_ℓ))(2i) = (−i)^ℓ ℱ(h s^{ℓ+1})(2i)/((2ℓ+1) ℓ!), ℓ ≤ 3")
}

fn gram_orthogonality(_: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let g = gram_matrix(&HalfLineProfile::exp_monomial(0, 1.0)?, 6)?;
    Outcome::new(off_diagonal_defect(&g), "F̃(h P_ℓ) pairwise orthogonal, ℓ ≤ 6")
}

fn p_hermitian(_: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let basis: Vec<SeparableElement> = laguerre_profiles(3)?
        .into_iter()
        .flat_map(|h| {
            (0..5).map(move |k| SeparableElement {
                h: h.clone(),
                q: UniPoly::monomial(k, c(1.0, 0.0)),
            })
        })
        .collect();
    Outcome::new(hermitian_defect(&p_matrix(&basis)?), "⟨b_i, P b_j⟩ Hermitian on a non-eigen basis")
}

fn covariance_random(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    const MAX_L: usize = 4;
    let opts = QuadOptions {
        tol: cfg.tolerance.min(1e-11),
        ..cfg.quad()
    };
    let mut gap: f64 = 0.0;
    for _ in 0..20 {
        let g = random_mobius(rng);
        let f = Holo2::polynomial(DomainDesc::UpperHalfPlane, random_bipoly(rng, 4));
        let z = c(unit(rng), 2.0);
        gap = worst(covariance_residuals(&f, &g, MAX_L, z, &opts)?.into_iter().chain([gap]));
    }
    Outcome::new(gap, "20 random g, degree-4 polynomials, ℓ ≤ 4, z = x + 2i")
}

fn cocycle(_: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let f = Holo2::polynomial(DomainDesc::UpperHalfPlane, random_bipoly(rng, 4));
    let samples: Vec<(C, C)> = (0..6).map(|_| (c(unit(rng), 1.0 + rng.gen::<f64>()), c(unit(rng), 0.5 + rng.gen::<f64>()))).collect();
    let mut gap: f64 = 0.0;
    for _ in 0..10 {
        let (g1, g2) = (random_mobius(rng), random_mobius(rng));
        gap = worst([gap, cocycle_defect(&f, &g1, &g2, &samples)?]);
    }
    Outcome::new(gap, "twist(twist(f, g1), g2) = twist(f, g1 g2)")
}

fn covariance_closed_forms(cfg: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let opts = QuadOptions {
        tol: cfg.tolerance.min(1e-11),
        ..cfg.quad()
    };
    let z = c(0.0, 2.0);
    let b = 0.6;
    let shifted = covariance_residual(&EigenFamily::new(1).holo(), &MobiusElem::translation(b), 1, z, &opts)?;
    // both sides equal 2 (z + b + i)^{-4}
    let direct = t_coeffs_quadrature(&EigenFamily::new(1).holo(), z + b, 1, &opts)?[1].value;
    let closed = rel_err(direct, 2.0 * (z + b + I).powi(-4), f64::MIN_POSITIVE);
    let scaled = covariance_residual(&EigenFamily::new(2).holo(), &MobiusElem::scaling(1.3)?, 2, z, &opts)?;
    Outcome::new(worst([shifted, closed, scaled]), "translation of f_1 and scaling of f_2")
}

fn residue_sample<R: Rng + ?Sized>(rng: &mut R) -> (C, C, C, C) {
    let z = random_complex(rng, 0.5);
    let z1 = z + C::from_polar(rng.gen_range(0.5..1.0), rng.gen_range(0.0..std::f64::consts::TAU));
    let z2 = z + C::from_polar(rng.gen_range(0.5..1.0), rng.gen_range(0.0..std::f64::consts::TAU));
    let t = C::from_polar(rng.gen_range(0.05..0.2), rng.gen_range(0.0..std::f64::consts::TAU));
    (z1, z2, z, t)
}

fn random_exp<R: Rng + ?Sized>(rng: &mut R) -> ExpFn {
    ExpFn {
        amplitude: c(1.0, 0.0),
        rate: c(unit(rng), unit(rng)),
    }
}

fn hab_lemma(_: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (_, z2, z, t) = residue_sample(rng);
    let f = random_exp(rng);
    let gaps = (0..=3)
        .flat_map(|a| (0..=3).map(move |b| (a, b)))
        .map(|(a, b)| verify_hab_lemma(a, b, &f, z, t, z2))
        .collect::<Result<Vec<_>>>()?;
    Outcome::new(worst(gaps), "∮ (ζ1−z)^a Q^{−b} ∂F = ∮ H_{a,b} Q^{−b−1} F, a, b ≤ 3")
}

fn hab_mirror(_: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (z1, _, z, t) = residue_sample(rng);
    let f = random_exp(rng);
    let gaps = (0..=3)
        .flat_map(|a| (0..=3).map(move |b| (a, b)))
        .map(|(a, b)| verify_hab_lemma_mirror(a, b, &f, z, t, z1))
        .collect::<Result<Vec<_>>>()?;
    Outcome::new(worst(gaps), "ζ2 analogue with t ↦ −t, a, b ≤ 3")
}

fn i_identities(_: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let plane = DomainDesc::EntirePlane;
    let cases = [
        (Holo2::constant(plane, c(1.0, 0.0)), c(0.3, 0.1), c(0.1, 0.0)),
        (Holo2::polynomial(plane, BiPoly::monomial(1, 1, c(1.0, 0.0))), C::default(), c(0.1, 0.0)),
        (EigenFamily::new(1).holo(), c(0.0, 2.0), c(0.2, 0.0)),
    ];
    let gaps = cases
        .iter()
        .map(|(f, z, t)| i_identity_gaps(f, *z, *t).map(|g| g.max()))
        .collect::<Result<Vec<_>>>()?;
    Outcome::new(worst(gaps), "I_1 + I_2 + I_3 = T(P f) = −ϑ(ϑ+1) T f on 1, ζ1ζ2, f_1")
}

fn h_closed_forms(_: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let gaps = (0..8)
        .map(|_| {
            let (z1, z2, z, t) = residue_sample(rng);
            h_closed_form_defect(5, z1, z2, z, t)
        })
        .collect::<Result<Vec<_>>>()?;
    Outcome::new(worst(gaps), "H_{a,1}, H_{a,2} recurrence against closed forms, a ≤ 5")
}

fn algebraic_identities(_: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let gaps = (0..16)
        .map(|_| {
            let (z1, z2, z, t) = residue_sample(rng);
            algebraic_defect(z1, z2, z, t)
        })
        .collect::<Result<Vec<_>>>()?;
    Outcome::new(worst(gaps), "Q = ζ̃1ζ̃2 + t² = ζ̃2(ζ1 − ξ1) = ζ̃1(ζ2 − ξ2) and relatives")
}
