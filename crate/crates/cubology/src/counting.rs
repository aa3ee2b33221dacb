//! Exact counting: configuration-space sizes, orbit counts, group orders and
//! solvability probabilities. All arithmetic is arbitrary precision; nothing
//! here is floating point.
//!
//! The configuration space |S_Conf| treats each circle's center edges as one
//! interchangeable class of z_k pieces (that is what physical reassembly
//! allows). The move group is finer: center edges decompose into 24-slot
//! sub-orbits — the axis cells on the middle cross (odd n) and two chirality
//! classes per oblique depth pair — because slab rotations act on each face
//! grid by proper rotations only. Counting one independent sign factor per
//! reachable-sign constraint and one 24-point class per sub-orbit gives
//!
//! ```text
//! |G_odd|  = 8!·3^7 · 12!·2^11 · (24!)^(K²+2K) / 2^(K²+K+1)
//! |G_even| = 8!·3^7 ·            (24!)^(K²+K)  / 2^(K²)
//! ```
//!
//! which the stabilizer-chain oracle reproduces exactly (the acceptance
//! suite certifies n = 3..7). The orbit count is |S_Conf| / |G_n|; for
//! n ≥ 6 it carries multinomial factors from the sub-orbit partition on top
//! of the per-condition powers of two.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::One;
use thiserror::Error;

use crate::codec::AssemblyModel;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CountingError {
    #[error("cube size {0} is too small: the smallest supported cube is 3x3x3")]
    SizeTooSmall(u32),
}

pub type ExactInt = BigUint;
pub type ExactRational = Ratio<BigUint>;

pub fn factorial(n: u64) -> BigUint {
    (2..=n).map(BigUint::from).product()
}

/// A product of factorials and prime powers, with signed exponents so exact
/// quotients keep their factored shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factored {
    /// factorial argument -> exponent
    factorials: BTreeMap<u64, i64>,
    /// prime -> exponent
    primes: BTreeMap<u64, i64>,
}

impl Factored {
    pub fn one() -> Factored {
        Factored {
            factorials: BTreeMap::new(),
            primes: BTreeMap::new(),
        }
    }

    pub fn factorial_term(mut self, arg: u64, exp: i64) -> Factored {
        if arg > 1 && exp != 0 {
            let e = self.factorials.entry(arg).or_insert(0);
            *e += exp;
            if *e == 0 {
                self.factorials.remove(&arg);
            }
        }
        self
    }

    pub fn prime_term(mut self, p: u64, exp: i64) -> Factored {
        if exp != 0 {
            let e = self.primes.entry(p).or_insert(0);
            *e += exp;
            if *e == 0 {
                self.primes.remove(&p);
            }
        }
        self
    }

    pub fn divided_by(mut self, other: &Factored) -> Factored {
        for (&arg, &e) in &other.factorials {
            self = self.factorial_term(arg, -e);
        }
        for (&p, &e) in &other.primes {
            self = self.prime_term(p, -e);
        }
        self
    }

    /// Exact integer value. Panics if the denominator does not divide the
    /// numerator, which would mean the factored form is not an integer.
    pub fn value(&self) -> BigUint {
        let (num, den) = self.split();
        let (q, r) = num.div_rem(&den);
        assert!(r == BigUint::ZERO, "factored form is not an integer");
        q
    }

    /// Numerator and denominator as exact integers.
    pub fn split(&self) -> (BigUint, BigUint) {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (&arg, &e) in &self.factorials {
            let f = factorial(arg);
            let target = if e > 0 { &mut num } else { &mut den };
            *target *= f.pow(e.unsigned_abs() as u32);
        }
        for (&p, &e) in &self.primes {
            let b = BigUint::from(p);
            let target = if e > 0 { &mut num } else { &mut den };
            *target *= b.pow(e.unsigned_abs() as u32);
        }
        (num, den)
    }

    /// Factored rendering: factorials by descending argument, then prime
    /// powers; negative exponents join a trailing divisor.
    pub fn render(&self) -> String {
        let fmt_factorial = |arg: u64, e: u64| {
            if e == 1 {
                format!("{arg}!")
            } else {
                format!("({arg}!)^{e}")
            }
        };
        let fmt_prime = |p: u64, e: u64| {
            if e == 1 {
                format!("{p}")
            } else {
                format!("{p}^{e}")
            }
        };
        let mut num = Vec::new();
        let mut den = Vec::new();
        for (&arg, &e) in self.factorials.iter().rev() {
            let side = if e > 0 { &mut num } else { &mut den };
            side.push(fmt_factorial(arg, e.unsigned_abs()));
        }
        for (&p, &e) in &self.primes {
            let side = if e > 0 { &mut num } else { &mut den };
            side.push(fmt_prime(p, e.unsigned_abs()));
        }
        let mut out = if num.is_empty() {
            "1".to_string()
        } else {
            num.join("·")
        };
        if !den.is_empty() {
            out.push('/');
            out.push_str(&den.join("·"));
        }
        out
    }
}

/// (c, e, g, z_k, K) for a given size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceCounts {
    pub n: u32,
    pub circles: u32,
    /// number of center cubies, 6(n-2)^2
    pub centers: u64,
    /// number of edge cubies, 12(n-2)
    pub edges: u64,
    /// number of facets, 6n^2
    pub facets: u64,
    /// center edges per circle: 24(2k-1) for odd n, 48(k-1) for even n
    pub center_edges_per_circle: Vec<u64>,
}

fn check_size(n: u32) -> Result<(u32, bool), CountingError> {
    if n < 3 {
        return Err(CountingError::SizeTooSmall(n));
    }
    let odd = n % 2 == 1;
    let circles = if odd { (n - 3) / 2 } else { n / 2 - 1 };
    Ok((circles, odd))
}

fn center_edges_in_circle(odd: bool, k: u32) -> u64 {
    if odd {
        24 * (2 * u64::from(k) - 1)
    } else {
        48 * (u64::from(k) - 1)
    }
}

pub fn piece_counts(n: u32) -> Result<PieceCounts, CountingError> {
    let (circles, odd) = check_size(n)?;
    let n64 = u64::from(n);
    Ok(PieceCounts {
        n,
        circles,
        centers: 6 * (n64 - 2) * (n64 - 2),
        edges: 12 * (n64 - 2),
        facets: 6 * n64 * n64,
        center_edges_per_circle: (1..=circles)
            .map(|k| center_edges_in_circle(odd, k))
            .collect(),
    })
}

/// |S_Conf| in factored form: positions and orientations of every piece
/// class, center edges interchangeable within their circle.
pub fn conf_cardinality_factored(n: u32) -> Result<Factored, CountingError> {
    let (circles, odd) = check_size(n)?;
    let k64 = i64::from(circles);
    let mut f = Factored::one()
        .factorial_term(8, 1)
        .prime_term(3, 8)
        .prime_term(2, 24 * k64);
    if odd {
        f = f.factorial_term(12, 1).prime_term(2, 12);
    }
    for k in 1..=circles {
        f = f
            .factorial_term(24, 2)
            .factorial_term(center_edges_in_circle(odd, k), 1);
    }
    Ok(f)
}

pub fn conf_cardinality(n: u32) -> Result<ExactInt, CountingError> {
    Ok(conf_cardinality_factored(n)?.value())
}

/// |G_n| in factored form; the stabilizer-chain oracle must reproduce the
/// value exactly.
pub fn group_order_factored(n: u32) -> Result<Factored, CountingError> {
    let (circles, odd) = check_size(n)?;
    let k = i64::from(circles);
    let f = if odd {
        // corners 8!·3^7, single edges 12!·2^11, one 24! per 24-slot class
        // (K wing, K center-corner, K²+K center-edge sub-orbits... in total
        // K²+2K), divided by one 2 per sign constraint (K²+K+1 of them)
        Factored::one()
            .factorial_term(8, 1)
            .prime_term(3, 7)
            .factorial_term(12, 1)
            .factorial_term(24, k * k + 2 * k)
            .prime_term(2, 11 - (k * k + k + 1))
    } else {
        Factored::one()
            .factorial_term(8, 1)
            .prime_term(3, 7)
            .factorial_term(24, k * k + k)
            .prime_term(2, -(k * k))
    };
    Ok(f)
}

pub fn group_order(n: u32) -> Result<ExactInt, CountingError> {
    Ok(group_order_factored(n)?.value())
}

/// Number of orbits of the move group on the configuration space:
/// N = |S_Conf| / |G_n| by freeness of the action. Exact divisibility is
/// asserted. Beyond the per-condition powers of two, for n ≥ 6 the quotient
/// carries the multinomial factors of the center-edge sub-orbit partition.
pub fn orbit_count_factored(n: u32) -> Result<Factored, CountingError> {
    let conf = conf_cardinality_factored(n)?;
    let order = group_order_factored(n)?;
    Ok(conf.divided_by(&order))
}

pub fn orbit_count(n: u32) -> Result<ExactInt, CountingError> {
    let n_orbits = orbit_count_factored(n)?.value();
    let (q, r) = conf_cardinality(n)?.div_rem(&group_order(n)?);
    debug_assert!(r == BigUint::ZERO);
    debug_assert_eq!(q, n_orbits);
    Ok(n_orbits)
}

/// Probability that each colour is split four-and-four (and so on) across a
/// circle's center-edge sub-orbits by a uniform placement: moves cannot
/// re-balance colours across sub-orbits, so an unbalanced assembly is
/// unsolvable no matter what else holds.
fn balance_factor(odd: bool, k: u32) -> ExactRational {
    let z = center_edges_in_circle(odd, k);
    if z == 0 {
        return Ratio::one();
    }
    let sub_orbits = (z / 24) as u32;
    let per_face = z / 6;
    let patterns = (factorial(per_face) / factorial(4).pow(sub_orbits)).pow(6)
        * factorial(24).pow(sub_orbits);
    Ratio::new(patterns, factorial(z))
}

/// Probability that a random assembly under the model is solvable.
pub fn solvability_probability(
    n: u32,
    model: AssemblyModel,
) -> Result<ExactRational, CountingError> {
    let (circles, odd) = check_size(n)?;
    let base = BigUint::from(if odd { 12u32 } else { 3u32 });
    let denom = match model {
        AssemblyModel::Mechanical => base,
        AssemblyModel::Sticker => base * BigUint::from(2u32).pow(12 * circles),
    };
    let mut p = Ratio::new(BigUint::one(), denom);
    for k in 1..=circles {
        p *= balance_factor(odd, k);
    }
    Ok(p)
}
