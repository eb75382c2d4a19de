use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::PointRecord;
use crate::error::{Error, Result};
use crate::params::{Cx, Params};

/// Parameter ranges and selection for a seeded suite run.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub points: usize,
    pub seed: u64,
    pub p_range: (f64, f64),
    pub q_half_range: (f64, f64),
    pub s_re_range: (f64, f64),
    pub s_im_max: f64,
    pub z_modulus_range: (f64, f64),
    /// Dynamical samples per check; the first one is the reported `s`.
    pub s_samples: usize,
    pub checks: Vec<String>,
    /// Overrides the sampled nome.
    pub p: Option<Cx>,
    /// Overrides the sampled `q^{1/2}`.
    pub q_half: Option<Cx>,
    /// `None` selects the order automatically per point.
    pub truncation_order: Option<usize>,
    pub tolerance: f64,
    pub singular_guard: f64,
    /// `δ` in `αβ = q⁻⁴·e^δ` for the `magic` check; zero is critical.
    pub alpha_beta_offset: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            points: 25,
            seed: 7,
            p_range: (0.05, 0.5),
            q_half_range: (0.4, 0.8),
            s_re_range: (-1.0, 1.0),
            s_im_max: 0.5,
            z_modulus_range: (0.5, 2.0),
            s_samples: 8,
            checks: super::CHECK_NAMES.iter().map(|s| s.to_string()).collect(),
            p: None,
            q_half: None,
            truncation_order: None,
            tolerance: Params::DEFAULT_TOLERANCE,
            singular_guard: Params::DEFAULT_SINGULAR_GUARD,
            alpha_beta_offset: 0.0,
        }
    }
}

fn ordered(name: &str, (a, b): (f64, f64)) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::InvalidParams(format!("{name} range must satisfy lo <= hi")));
    }
    Ok(())
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        ordered("p", self.p_range)?;
        ordered("q_half", self.q_half_range)?;
        ordered("s real part", self.s_re_range)?;
        ordered("z modulus", self.z_modulus_range)?;
        if self.z_modulus_range.0 <= 0.0 {
            return Err(Error::InvalidParams("z modulus range must be positive".into()));
        }
        if !(self.s_im_max >= 0.0 && self.s_im_max.is_finite()) {
            return Err(Error::InvalidParams("s imaginary bound must be >= 0".into()));
        }
        if self.s_samples == 0 {
            return Err(Error::InvalidParams("at least one s sample is required".into()));
        }
        if !self.alpha_beta_offset.is_finite() {
            return Err(Error::InvalidParams("alpha-beta offset must be finite".into()));
        }
        for name in &self.checks {
            if !super::CHECK_NAMES.contains(&name.as_str()) {
                return Err(Error::InvalidParams(format!("unknown check: {name}")));
            }
        }
        // Endpoints of the ranges (or the fixed values) must give valid params.
        for &p in &self.p_candidates() {
            for &q_half in &self.q_half_candidates() {
                self.params_for(q_half, p)?;
            }
        }
        Ok(())
    }

    fn p_candidates(&self) -> Vec<Cx> {
        match self.p {
            Some(p) => vec![p],
            None => vec![Cx::new(self.p_range.0, 0.0), Cx::new(self.p_range.1, 0.0)],
        }
    }

    fn q_half_candidates(&self) -> Vec<Cx> {
        match self.q_half {
            Some(q) => vec![q],
            None => vec![Cx::new(self.q_half_range.0, 0.0), Cx::new(self.q_half_range.1, 0.0)],
        }
    }

    fn params_for(&self, q_half: Cx, p: Cx) -> Result<Params> {
        let order = self
            .truncation_order
            .unwrap_or_else(|| Params::auto_truncation_order(q_half, p));
        Params::with_settings(q_half, p, order, self.tolerance, self.singular_guard)
    }

    /// Configuration echo for reports.
    pub fn echo(&self) -> Value {
        let cx = |c: Option<Cx>| c.map(|c| json!([c.re, c.im]));
        json!({
            "points": self.points,
            "seed": self.seed,
            "p_range": [self.p_range.0, self.p_range.1],
            "q_half_range": [self.q_half_range.0, self.q_half_range.1],
            "s_re_range": [self.s_re_range.0, self.s_re_range.1],
            "s_im_max": self.s_im_max,
            "z_modulus_range": [self.z_modulus_range.0, self.z_modulus_range.1],
            "s_samples": self.s_samples,
            "checks": self.checks,
            "p": cx(self.p),
            "q_half": cx(self.q_half),
            "truncation_order": self.truncation_order,
            "tolerance": self.tolerance,
            "singular_guard": self.singular_guard,
            "alpha_beta_offset": self.alpha_beta_offset,
        })
    }
}

/// One seeded grid point: parameters, dynamical samples, three spectral
/// values and the auxiliary draws used by individual checks.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePoint {
    pub index: usize,
    pub params: Params,
    /// Dynamical samples; `s[0]` is the reported one.
    pub s: Vec<Cx>,
    pub z: [Cx; 3],
    /// Free factor of the split `α = q⁻⁴t`, `β = 1/t`.
    pub t: Cx,
    /// Third spectral value of the evaluation model.
    pub u: Cx,
    /// Seed for randomly generated matrices.
    pub seed: u64,
}

impl SamplePoint {
    /// A point with explicit values; `seed` drives random matrices.
    pub fn new(index: usize, params: Params, s: Vec<Cx>, z: [Cx; 3], seed: u64) -> Self {
        assert!(!s.is_empty(), "need at least one s sample");
        SamplePoint {
            index,
            params,
            s,
            z,
            t: Cx::new(1.3, 0.4),
            u: Cx::new(0.9, -0.7),
            seed,
        }
    }

    pub fn record(&self) -> PointRecord {
        PointRecord::new(self.index, &self.params, self.s[0], &self.z)
    }

    pub fn with_params(&self, params: Params) -> Self {
        SamplePoint {
            params,
            ..self.clone()
        }
    }
}

fn uniform(rng: &mut ChaCha8Rng, (a, b): (f64, f64)) -> f64 {
    if a == b {
        a
    } else {
        rng.random_range(a..b)
    }
}

fn spectral(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> Cx {
    let modulus = uniform(rng, (lo.ln(), hi.ln())).exp();
    let phase = uniform(rng, (0.0, std::f64::consts::TAU));
    Cx::from_polar(modulus, phase)
}

/// Deterministic points for `grid`.
pub fn sample_points(grid: &GridSpec) -> Result<Vec<SamplePoint>> {
    grid.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
    let mut out = Vec::with_capacity(grid.points);
    for index in 0..grid.points {
        let p = grid.p.unwrap_or_else(|| Cx::new(uniform(&mut rng, grid.p_range), 0.0));
        let q_half = grid
            .q_half
            .unwrap_or_else(|| Cx::new(uniform(&mut rng, grid.q_half_range), 0.0));
        let params = grid.params_for(q_half, p)?;
        let s = (0..grid.s_samples)
            .map(|_| {
                Cx::new(
                    uniform(&mut rng, grid.s_re_range),
                    uniform(&mut rng, (-grid.s_im_max, grid.s_im_max)),
                )
            })
            .collect();
        let z = [
            spectral(&mut rng, grid.z_modulus_range),
            spectral(&mut rng, grid.z_modulus_range),
            spectral(&mut rng, grid.z_modulus_range),
        ];
        let t = spectral(&mut rng, grid.z_modulus_range);
        let u = spectral(&mut rng, grid.z_modulus_range);
        let seed = rng.random::<u64>();
        out.push(SamplePoint {
            index,
            params,
            s,
            z,
            t,
            u,
            seed,
        });
    }
    Ok(out)
}
