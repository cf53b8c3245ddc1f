//! The correlated source: a single-letter joint distribution P_XYZ, i.i.d.
//! vector sampling, and the entropy functionals the parameter formulas
//! consume.
//!
//! A [`JointSpec`] is immutable after validation and can be shared across
//! threads; sampling takes an explicit randomness stream per call.

pub mod rational;

use crate::rng;
use serde::{Deserialize, Serialize};

pub const DEFAULT_ENUM_BUDGET: u128 = 1 << 24;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SourceError {
    #[error("invalid pmf: {0}")]
    InvalidPmf(String),
    #[error("vector length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("conditioning on symbol {0} with zero probability")]
    ImpossibleCondition(usize),
    #[error("enumeration needs {needed} states, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("symbol {0} out of alphabet range {1}")]
    SymbolRange(usize, usize),
}

/// Joint distribution of (X, Y, Z) over finite alphabets, stored flat as
/// P[(x*ny + y)*nz + z].
#[derive(Debug, Clone)]
pub struct JointSpec {
    nx: usize,
    ny: usize,
    nz: usize,
    pmf: Vec<f64>,
    cdf: Vec<f64>,
    p_y: Vec<f64>,
    p_z: Vec<f64>,
    p_xy: Vec<f64>,
    p_xz: Vec<f64>,
    p_yz: Vec<f64>,
    /// -log2 P(x|y) per (x, y); +inf where the transition has no mass.
    cost_xy: Vec<f64>,
}

/// One i.i.d. draw of n symbols for each party.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleTriple {
    pub x: Vec<u8>,
    pub y: Vec<u8>,
    pub z: Vec<u8>,
}

impl JointSpec {
    pub fn new(nx: usize, ny: usize, nz: usize, pmf: Vec<f64>) -> Result<Self, SourceError> {
        if nx < 2 || ny < 2 || nz < 2 {
            return Err(SourceError::InvalidPmf(
                "alphabet sizes must be at least 2".into(),
            ));
        }
        if pmf.len() != nx * ny * nz {
            return Err(SourceError::InvalidPmf(format!(
                "expected {} entries, got {}",
                nx * ny * nz,
                pmf.len()
            )));
        }
        if pmf.iter().any(|&p| !(p >= 0.0) || p > 1.0) {
            return Err(SourceError::InvalidPmf("entries must lie in [0, 1]".into()));
        }
        let total: f64 = pmf.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(SourceError::InvalidPmf(format!("total mass {total}")));
        }

        let mut p_y = vec![0.0; ny];
        let mut p_z = vec![0.0; nz];
        let mut p_xy = vec![0.0; nx * ny];
        let mut p_xz = vec![0.0; nx * nz];
        let mut p_yz = vec![0.0; ny * nz];
        for x in 0..nx {
            for y in 0..ny {
                for z in 0..nz {
                    let p = pmf[(x * ny + y) * nz + z];
                    p_y[y] += p;
                    p_z[z] += p;
                    p_xy[x * ny + y] += p;
                    p_xz[x * nz + z] += p;
                    p_yz[y * nz + z] += p;
                }
            }
        }
        let mut cost_xy = vec![f64::INFINITY; nx * ny];
        for x in 0..nx {
            for y in 0..ny {
                if p_y[y] > 0.0 && p_xy[x * ny + y] > 0.0 {
                    cost_xy[x * ny + y] = -(p_xy[x * ny + y] / p_y[y]).log2();
                }
            }
        }
        let mut cdf = Vec::with_capacity(pmf.len());
        let mut acc = 0.0;
        for &p in &pmf {
            acc += p;
            cdf.push(acc);
        }
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        Ok(JointSpec {
            nx,
            ny,
            nz,
            pmf,
            cdf,
            p_y,
            p_z,
            p_xy,
            p_xz,
            p_yz,
            cost_xy,
        })
    }

    /// Satellite-style binary source: X is a uniform bit, Y flips it with
    /// probability `p`, Z flips it independently with probability `q`.
    pub fn bsc(p: f64, q: f64) -> Result<Self, SourceError> {
        if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
            return Err(SourceError::InvalidPmf("flip probabilities in [0,1]".into()));
        }
        let mut pmf = vec![0.0; 8];
        for x in 0..2usize {
            for y in 0..2usize {
                for z in 0..2usize {
                    let py = if y == x { 1.0 - p } else { p };
                    let pz = if z == x { 1.0 - q } else { q };
                    pmf[(x * 2 + y) * 2 + z] = 0.5 * py * pz;
                }
            }
        }
        JointSpec::new(2, 2, 2, pmf)
    }

    pub fn alphabet_sizes(&self) -> (usize, usize, usize) {
        (self.nx, self.ny, self.nz)
    }

    pub fn pmf(&self, x: usize, y: usize, z: usize) -> f64 {
        self.pmf[(x * self.ny + y) * self.nz + z]
    }

    pub fn p_y(&self, y: usize) -> f64 {
        self.p_y[y]
    }

    pub fn p_z(&self, z: usize) -> f64 {
        self.p_z[z]
    }

    pub fn p_xy(&self, x: usize, y: usize) -> f64 {
        self.p_xy[x * self.ny + y]
    }

    pub fn p_xz(&self, x: usize, z: usize) -> f64 {
        self.p_xz[x * self.nz + z]
    }

    pub fn p_yz(&self, y: usize, z: usize) -> f64 {
        self.p_yz[y * self.nz + z]
    }

    /// Per-symbol cost -log2 P(x|y); +inf for zero-probability transitions,
    /// so downstream set enumeration naturally excludes them.
    pub fn symbol_cost(&self, x: usize, y: usize) -> f64 {
        self.cost_xy[x * self.ny + y]
    }

    pub fn sample_iid<R: rand::Rng>(&self, n: usize, rng: &mut R) -> SampleTriple {
        assert!(n >= 1);
        let mut out = SampleTriple {
            x: Vec::with_capacity(n),
            y: Vec::with_capacity(n),
            z: Vec::with_capacity(n),
        };
        for _ in 0..n {
            let u: f64 = rng.gen();
            let idx = self.cdf.partition_point(|&c| c <= u).min(self.pmf.len() - 1);
            let z = idx % self.nz;
            let y = (idx / self.nz) % self.ny;
            let x = idx / (self.nz * self.ny);
            out.x.push(x as u8);
            out.y.push(y as u8);
            out.z.push(z as u8);
        }
        out
    }

    /// H(X|Y) in bits per symbol.
    pub fn shannon_cond_entropy(&self) -> f64 {
        let mut h = 0.0;
        for x in 0..self.nx {
            for y in 0..self.ny {
                let pxy = self.p_xy[x * self.ny + y];
                if pxy > 0.0 && self.p_y[y] > 0.0 {
                    h -= pxy * (pxy / self.p_y[y]).log2();
                }
            }
        }
        h
    }

    /// Average conditional min-entropy of X given Z, bits per symbol.
    pub fn avg_min_entropy(&self) -> f64 {
        let mut mass = 0.0;
        for z in 0..self.nz {
            let best = (0..self.nx)
                .map(|x| self.p_xz[x * self.nz + z])
                .fold(0.0, f64::max);
            mass += best;
        }
        -mass.log2()
    }

    /// Vector min-entropy over n i.i.d. repetitions (the product rule).
    pub fn vector_min_entropy(&self, n: usize) -> f64 {
        assert!(n >= 1);
        n as f64 * self.avg_min_entropy()
    }

    /// Total cost -log2 P(x|y) of a vector pair; +inf if any coordinate
    /// transition has zero probability.
    pub fn cond_logprob(&self, x: &[u8], y: &[u8]) -> Result<f64, SourceError> {
        if x.len() != y.len() {
            return Err(SourceError::LengthMismatch(x.len(), y.len()));
        }
        let mut total = 0.0;
        for (&xi, &yi) in x.iter().zip(y.iter()) {
            let (xi, yi) = (xi as usize, yi as usize);
            if xi >= self.nx {
                return Err(SourceError::SymbolRange(xi, self.nx));
            }
            if yi >= self.ny {
                return Err(SourceError::SymbolRange(yi, self.ny));
            }
            if self.p_y[yi] == 0.0 {
                return Err(SourceError::ImpossibleCondition(yi));
            }
            total += self.cost_xy[xi * self.ny + yi];
        }
        Ok(total)
    }

    /// Exact fuzzy min-entropy at threshold nu over length-n vectors, by full
    /// enumeration: the conditional variant averages over Z, the
    /// unconditional variant ignores it. +inf means no y qualifies anywhere.
    pub fn fuzzy_min_entropy_exact(
        &self,
        n: usize,
        nu: f64,
        budget: u128,
    ) -> Result<FuzzyEntropy, SourceError> {
        assert!(nu >= 0.0);
        let states = (self.nx as u128 * self.ny as u128 * self.nz as u128).pow(n as u32);
        if states > budget {
            return Err(SourceError::BudgetExceeded {
                needed: states,
                budget,
            });
        }
        let xs = count(self.nx, n);
        let ys = count(self.ny, n);
        let zs = count(self.nz, n);
        let mut xv = vec![0u8; n];
        let mut yv = vec![0u8; n];

        // qualification of (x, y) does not depend on z; cache it
        let mut qual = vec![false; (xs * ys) as usize];
        let mut p_yvec = vec![0.0; ys as usize];
        for yi in 0..ys {
            decode(yi, self.ny, &mut yv);
            p_yvec[yi as usize] = yv.iter().map(|&s| self.p_y[s as usize]).product();
            for xi in 0..xs {
                decode(xi, self.nx, &mut xv);
                let mut cost = 0.0;
                for (&a, &b) in xv.iter().zip(yv.iter()) {
                    cost += self.cost_xy[a as usize * self.ny + b as usize];
                }
                qual[(xi * ys + yi) as usize] = cost <= nu;
            }
        }

        let mut uncond_best = 0.0f64;
        for xi in 0..xs {
            let mass: f64 = (0..ys)
                .filter(|&yi| qual[(xi * ys + yi) as usize])
                .map(|yi| p_yvec[yi as usize])
                .sum();
            uncond_best = uncond_best.max(mass);
        }

        let mut zv = vec![0u8; n];
        let mut cond_mass = 0.0f64;
        for zi in 0..zs {
            decode(zi, self.nz, &mut zv);
            let pz: f64 = zv.iter().map(|&s| self.p_z[s as usize]).product();
            if pz == 0.0 {
                continue;
            }
            let mut best = 0.0f64;
            for xi in 0..xs {
                let mut mass = 0.0;
                for yi in 0..ys {
                    if qual[(xi * ys + yi) as usize] {
                        decode(yi, self.ny, &mut yv);
                        let pyz: f64 = yv
                            .iter()
                            .zip(zv.iter())
                            .map(|(&a, &b)| self.p_yz[a as usize * self.nz + b as usize])
                            .product();
                        mass += pyz / pz;
                    }
                }
                best = best.max(mass);
            }
            cond_mass += pz * best;
        }

        Ok(FuzzyEntropy {
            conditional: -cond_mass.log2(),
            unconditional: -uncond_best.log2(),
        })
    }

    /// Conservative lower bound on the conditional fuzzy min-entropy:
    /// vector min-entropy minus nu. May be negative; callers clamp.
    pub fn fuzzy_min_entropy_lower_bound(&self, n: usize, nu: f64) -> f64 {
        self.vector_min_entropy(n) - nu
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FuzzyEntropy {
    pub conditional: f64,
    pub unconditional: f64,
}

fn count(alpha: usize, n: usize) -> u64 {
    (alpha as u64).pow(n as u32)
}

/// Mixed-radix decode of `idx` into `out` (most significant digit first).
pub(crate) fn decode(idx: u64, alpha: usize, out: &mut [u8]) {
    let mut v = idx;
    for slot in out.iter_mut().rev() {
        *slot = (v % alpha as u64) as u8;
        v /= alpha as u64;
    }
}

/// Source description as it appears in config files: either the satellite
/// preset or an explicit pmf table.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SourceConfig {
    Bsc { bsc: BscParams },
    Table { alphabet_sizes: (usize, usize, usize), rows: Vec<(u8, u8, u8, f64)> },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BscParams {
    pub p: f64,
    pub q: f64,
}

impl SourceConfig {
    pub fn build(&self) -> Result<JointSpec, SourceError> {
        match self {
            SourceConfig::Bsc { bsc } => JointSpec::bsc(bsc.p, bsc.q),
            SourceConfig::Table {
                alphabet_sizes: (nx, ny, nz),
                rows,
            } => {
                let mut pmf = vec![0.0; nx * ny * nz];
                for &(x, y, z, p) in rows {
                    let (x, y, z) = (x as usize, y as usize, z as usize);
                    if x >= *nx || y >= *ny || z >= *nz {
                        return Err(SourceError::InvalidPmf(format!(
                            "row ({x},{y},{z}) outside alphabets"
                        )));
                    }
                    pmf[(x * ny + y) * nz + z] += p;
                }
                JointSpec::new(*nx, *ny, *nz, pmf)
            }
        }
    }
}

/// Random tiny spec for property tests: binary alphabets, masses drawn from
/// a seeded stream and normalized.
pub fn random_binary_spec(seed: u64) -> JointSpec {
    use rand::Rng;
    let mut r = rng::stream(seed, 0);
    loop {
        let mut pmf: Vec<f64> = (0..8).map(|_| r.gen::<f64>()).collect();
        // sprinkle zeros so degenerate transitions get exercised
        for p in pmf.iter_mut() {
            if r.gen::<f64>() < 0.2 {
                *p = 0.0;
            }
        }
        let total: f64 = pmf.iter().sum();
        if total < 1e-6 {
            continue;
        }
        for p in pmf.iter_mut() {
            *p /= total;
        }
        let total: f64 = pmf.iter().sum();
        let adjust = 1.0 - total;
        if let Some(m) = pmf.iter_mut().find(|p| **p > 0.0) {
            *m += adjust;
        }
        if let Ok(s) = JointSpec::new(2, 2, 2, pmf) {
            return s;
        }
    }
}
