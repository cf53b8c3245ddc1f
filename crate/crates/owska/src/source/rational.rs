//! Exact-rational mirror of the entropy functionals.
//!
//! Entropies are logs and rarely rational, so everything here works in the
//! probability-mass domain: an inequality H_a <= H_b becomes mass_a >= mass_b
//! and is decided exactly. Thresholds enter as theta = 2^(-nu), kept
//! rational by choosing nu = -log2(theta).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Joint distribution with exact rational masses, flat as
/// P[(x*ny + y)*nz + z]. Alphabets may encode vectors (see [`Self::product`]).
#[derive(Debug, Clone)]
pub struct RationalJoint {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pmf: Vec<Q>,
}

impl RationalJoint {
    pub fn new(nx: usize, ny: usize, nz: usize, pmf: Vec<Q>) -> Self {
        assert_eq!(pmf.len(), nx * ny * nz);
        let total: Q = pmf.iter().cloned().sum();
        assert!(total.is_one(), "mass must be exactly 1, got {total}");
        RationalJoint { nx, ny, nz, pmf }
    }

    /// Random tiny instance with small-denominator masses summing to 1.
    pub fn random<R: Rng>(nx: usize, ny: usize, nz: usize, rng: &mut R) -> Self {
        let cells = nx * ny * nz;
        loop {
            let weights: Vec<u64> = (0..cells)
                .map(|_| if rng.gen::<f64>() < 0.25 { 0 } else { rng.gen_range(1..=8) })
                .collect();
            let total: u64 = weights.iter().sum();
            if total == 0 {
                continue;
            }
            let pmf = weights
                .iter()
                .map(|&w| BigRational::new(BigInt::from(w), BigInt::from(total)))
                .collect();
            return RationalJoint::new(nx, ny, nz, pmf);
        }
    }

    pub fn pmf(&self, x: usize, y: usize, z: usize) -> &Q {
        &self.pmf[(x * self.ny + y) * self.nz + z]
    }

    /// The n-fold i.i.d. product, with vectors encoded as mixed-radix digits.
    pub fn product(&self, n: usize) -> RationalJoint {
        let (nx, ny, nz) = (self.nx.pow(n as u32), self.ny.pow(n as u32), self.nz.pow(n as u32));
        let mut pmf = vec![Q::zero(); nx * ny * nz];
        let mut xv = vec![0u8; n];
        let mut yv = vec![0u8; n];
        let mut zv = vec![0u8; n];
        for xi in 0..nx {
            super::decode(xi as u64, self.nx, &mut xv);
            for yi in 0..ny {
                super::decode(yi as u64, self.ny, &mut yv);
                for zi in 0..nz {
                    super::decode(zi as u64, self.nz, &mut zv);
                    let mut p = Q::one();
                    for k in 0..n {
                        p *= self.pmf(xv[k] as usize, yv[k] as usize, zv[k] as usize);
                    }
                    pmf[(xi * ny + yi) * nz + zi] = p;
                }
            }
        }
        RationalJoint::new(nx, ny, nz, pmf)
    }

    pub fn p_x(&self, x: usize) -> Q {
        let mut s = Q::zero();
        for y in 0..self.ny {
            for z in 0..self.nz {
                s += self.pmf(x, y, z);
            }
        }
        s
    }

    pub fn p_y(&self, y: usize) -> Q {
        let mut s = Q::zero();
        for x in 0..self.nx {
            for z in 0..self.nz {
                s += self.pmf(x, y, z);
            }
        }
        s
    }

    pub fn p_xy(&self, x: usize, y: usize) -> Q {
        (0..self.nz).map(|z| self.pmf(x, y, z).clone()).sum()
    }

    pub fn p_xz(&self, x: usize, z: usize) -> Q {
        (0..self.ny).map(|y| self.pmf(x, y, z).clone()).sum()
    }

    pub fn p_yz(&self, y: usize, z: usize) -> Q {
        (0..self.nx).map(|x| self.pmf(x, y, z).clone()).sum()
    }

    pub fn p_z(&self, z: usize) -> Q {
        let mut s = Q::zero();
        for x in 0..self.nx {
            for y in 0..self.ny {
                s += self.pmf(x, y, z);
            }
        }
        s
    }

    /// 2^(-H_inf(X)): the best single-guess mass.
    pub fn guess_mass_x(&self) -> Q {
        (0..self.nx).map(|x| self.p_x(x)).max().unwrap()
    }

    pub fn guess_mass_y(&self) -> Q {
        (0..self.ny).map(|y| self.p_y(y)).max().unwrap()
    }

    /// 2^(-H~_inf(X|Z)) = sum_z max_x P(x, z).
    pub fn avg_guess_mass_x_given_z(&self) -> Q {
        let mut s = Q::zero();
        for z in 0..self.nz {
            s += (0..self.nx).map(|x| self.p_xz(x, z)).max().unwrap();
        }
        s
    }

    pub fn avg_guess_mass_y_given_z(&self) -> Q {
        let mut s = Q::zero();
        for z in 0..self.nz {
            s += (0..self.ny).map(|y| self.p_yz(y, z)).max().unwrap();
        }
        s
    }

    /// Does y qualify for x at threshold theta, i.e. P(x|y) >= theta?
    /// Zero-probability y never qualifies (the cost is +inf).
    pub fn qualifies(&self, x: usize, y: usize, theta: &Q) -> bool {
        let py = self.p_y(y);
        if py.is_zero() {
            return false;
        }
        self.p_xy(x, y) >= theta * py
    }

    /// 2^(-H^fuzz_inf(X)) at threshold theta: the heaviest qualifying-y mass
    /// any single x captures.
    pub fn fuzzy_mass_x(&self, theta: &Q) -> Q {
        (0..self.nx)
            .map(|x| {
                (0..self.ny)
                    .filter(|&y| self.qualifies(x, y, theta))
                    .map(|y| self.p_y(y))
                    .sum()
            })
            .max()
            .unwrap()
    }

    /// 2^(-H~^fuzz_inf(X|Z)) at threshold theta.
    pub fn cond_fuzzy_mass_x_given_z(&self, theta: &Q) -> Q {
        let mut s = Q::zero();
        for z in 0..self.nz {
            let best = (0..self.nx)
                .map(|x| {
                    (0..self.ny)
                        .filter(|&y| self.qualifies(x, y, theta))
                        .map(|y| self.p_yz(y, z))
                        .sum()
                })
                .max()
                .unwrap();
            s += best;
        }
        s
    }

    /// Hypothesis of the upper sandwich bound: some modal y has a qualifying x.
    pub fn modal_y_has_qualifying_x(&self, theta: &Q) -> bool {
        let top = self.guess_mass_y();
        (0..self.ny)
            .filter(|&y| self.p_y(y) == top)
            .any(|y| (0..self.nx).any(|x| self.qualifies(x, y, theta)))
    }

    /// Per-z form of the hypothesis: for every z in the support, some
    /// y maximizing P(y, z) has a qualifying x.
    pub fn per_z_modal_y_has_qualifying_x(&self, theta: &Q) -> bool {
        (0..self.nz).all(|z| {
            if self.p_z(z).is_zero() {
                return true;
            }
            let top = (0..self.ny).map(|y| self.p_yz(y, z)).max().unwrap();
            (0..self.ny)
                .filter(|&y| self.p_yz(y, z) == top)
                .any(|y| (0..self.nx).any(|x| self.qualifies(x, y, theta)))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn masses_sum_and_marginals() {
        let mut r = rng::stream(3, 0);
        let j = RationalJoint::random(2, 2, 2, &mut r);
        let mut total = Q::zero();
        for x in 0..2 {
            total += j.p_x(x);
        }
        assert!(total.is_one());
    }

    #[test]
    fn product_rule_exact() {
        // Lemma-style product check in the mass domain:
        // sum_z max_x P(x,z) over vectors == (single-letter value)^n.
        let mut r = rng::stream(5, 0);
        for _ in 0..20 {
            let j = RationalJoint::random(2, 2, 2, &mut r);
            let single = j.avg_guess_mass_x_given_z();
            for n in 1..=3usize {
                let vec = j.product(n);
                let lhs = vec.avg_guess_mass_x_given_z();
                let mut rhs = Q::one();
                for _ in 0..n {
                    rhs *= &single;
                }
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn fuzzy_mass_monotone_in_theta() {
        let mut r = rng::stream(9, 0);
        let j = RationalJoint::random(2, 3, 2, &mut r);
        // smaller theta (larger nu) qualifies more y's
        let loose = j.fuzzy_mass_x(&q(1, 8));
        let tight = j.fuzzy_mass_x(&q(3, 4));
        assert!(loose >= tight);
    }
}
