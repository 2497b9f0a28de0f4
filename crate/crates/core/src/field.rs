//! Arithmetic in GF(p^e) and cyclotomic classes of the multiplicative group.
//!
//! Elements are stored by their canonical encoding: the coefficient vector
//! `(c_0, .., c_{e-1})` of the polynomial representative maps to
//! `c_0 + c_1 p + .. + c_{e-1} p^{e-1}`. The same encoding orders elements
//! whenever a "smallest" element is requested, and it is what gets written to
//! files and manifests.
//!
//! Multiplication goes through discrete-log tables built from a primitive
//! element `g`: `antilog[k] = g^k` and `log[g^k] = k`.
//!
//! ```
//! use skewhad::field::{FieldConfig, FieldTables};
//!
//! let f = FieldTables::build(&FieldConfig::new(7, 1).with_generator(3)).unwrap();
//! assert_eq!(f.log(3), Some(1));
//! assert_eq!(f.log(2), Some(2));
//! assert_eq!(f.mul(3, 5), 1);
//! ```

use crate::error::{Error, Result};

/// Largest field order the tables are built for.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Requested field parameters. `None` for the modulus or generator means
/// "select automatically" (smallest valid choice by canonical encoding).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldConfig {
    pub p: u32,
    pub e: u32,
    /// Coefficients `c_0..c_e` of a monic polynomial (so `c_e == 1`).
    pub modulus: Option<Vec<u32>>,
    pub generator: Option<u32>,
}

impl FieldConfig {
    pub fn new(p: u32, e: u32) -> Self {
        FieldConfig {
            p,
            e,
            modulus: None,
            generator: None,
        }
    }

    pub fn with_modulus(mut self, coeffs: Vec<u32>) -> Self {
        self.modulus = Some(coeffs);
        self
    }

    pub fn with_generator(mut self, generator: u32) -> Self {
        self.generator = Some(generator);
        self
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.e)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Polynomials over GF(p) as little-endian coefficient vectors.
#[derive(Debug, Clone)]
struct PolyRing {
    p: u32,
    e: usize,
    modulus: Vec<u32>,
}

impl PolyRing {
    fn decode(&self, mut x: u32) -> Vec<u32> {
        let mut c = vec![0; self.e];
        for slot in c.iter_mut() {
            *slot = x % self.p;
            x /= self.p;
        }
        c
    }

    fn encode(&self, c: &[u32]) -> u32 {
        c.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    /// Schoolbook product followed by reduction modulo the (monic) modulus.
    fn mul(&self, a: u32, b: u32) -> u32 {
        let (a, b) = (self.decode(a), self.decode(b));
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * self.e - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for deg in (self.e..prod.len()).rev() {
            let lead = prod[deg];
            if lead == 0 {
                continue;
            }
            for (k, &m) in self.modulus.iter().enumerate() {
                let slot = deg - self.e + k;
                prod[slot] = (prod[slot] + (p - lead) * m as u64) % p;
            }
        }
        let c: Vec<u32> = prod[..self.e].iter().map(|&x| x as u32).collect();
        self.encode(&c)
    }

    fn pow(&self, base: u32, mut exp: u64) -> u32 {
        let mut acc = 1;
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }
}

/// Remainder of `num` divided by the monic `den` over GF(p).
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let p = p as u64;
    let mut r: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let dd = den.len() - 1;
    for deg in (dd..r.len()).rev() {
        let lead = r[deg];
        if lead == 0 {
            continue;
        }
        for (k, &c) in den.iter().enumerate() {
            let slot = deg - dd + k;
            r[slot] = (r[slot] + (p - lead) * c as u64) % p;
        }
    }
    r.truncate(dd);
    r.into_iter().map(|c| c as u32).collect()
}

/// Irreducibility by trial division with every monic polynomial of degree
/// `1..=e/2`.
pub fn is_irreducible(coeffs: &[u32], p: u32) -> bool {
    let e = coeffs.len().saturating_sub(1);
    if e == 0 || coeffs[e] != 1 || coeffs.iter().any(|&c| c >= p) {
        return false;
    }
    for d in 1..=e / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut den = Vec::with_capacity(d + 1);
            let mut x = low;
            for _ in 0..d {
                den.push((x % p as u64) as u32);
                x /= p as u64;
            }
            den.push(1);
            if poly_rem(coeffs, &den, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible of degree `e` whose lower coefficients have the
/// smallest canonical encoding.
pub fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    (0..count)
        .map(|low| {
            let mut c = Vec::with_capacity(e as usize + 1);
            let mut x = low;
            for _ in 0..e {
                c.push((x % p as u64) as u32);
                x /= p as u64;
            }
            c.push(1);
            c
        })
        .find(|c| is_irreducible(c, p))
        .expect("an irreducible polynomial of every degree exists")
}

/// Log/antilog tables of GF(p^e) for a fixed modulus and primitive element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldTables {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: u32,
    antilog: Vec<u32>,
    // log[0] is unused (u32::MAX).
    log: Vec<u32>,
}

impl FieldTables {
    pub fn build(config: &FieldConfig) -> Result<Self> {
        let (p, e) = (config.p, config.e);
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e == 0 {
            return Err(Error::InvalidField("degree must be at least 1".into()));
        }
        let q = (p as u64)
            .checked_pow(e)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or_else(|| {
                Error::InvalidField(format!("p^e = {p}^{e} exceeds {MAX_FIELD_ORDER}"))
            })?;

        let modulus = match &config.modulus {
            Some(c) => {
                if c.len() != e as usize + 1 || !is_irreducible(c, p) {
                    return Err(Error::ReducibleModulus {
                        coeffs: c.clone(),
                        degree: e,
                    });
                }
                c.clone()
            }
            None => smallest_irreducible(p, e),
        };
        let ring = PolyRing {
            p,
            e: e as usize,
            modulus: modulus.clone(),
        };

        let factors = distinct_prime_factors(q - 1);
        let primitive = |g: u32| -> bool {
            g != 0 && (g as u64) < q && factors.iter().all(|&r| ring.pow(g, (q - 1) / r) != 1)
        };
        let generator = match config.generator {
            Some(g) if primitive(g) => g,
            Some(g) => return Err(Error::NotPrimitive(g)),
            None => (1..q as u32)
                .find(|&g| primitive(g))
                .expect("the multiplicative group of a field is cyclic"),
        };

        let mut antilog = Vec::with_capacity(q as usize - 1);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = 1u32;
        for k in 0..(q - 1) as u32 {
            antilog.push(cur);
            log[cur as usize] = k;
            cur = ring.mul(cur, generator);
        }
        debug_assert_eq!(cur, 1);

        Ok(FieldTables {
            p,
            e,
            q: q as u32,
            modulus,
            generator,
            antilog,
            log,
        })
    }

    /// Same field (same modulus) with a different primitive element.
    pub fn with_generator(&self, generator: u32) -> Result<Self> {
        FieldTables::build(
            &FieldConfig::new(self.p, self.e)
                .with_modulus(self.modulus.clone())
                .with_generator(generator),
        )
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn antilog(&self) -> &[u32] {
        &self.antilog
    }

    /// `g^k`, with `k` reduced modulo `q - 1`.
    pub fn pow_g(&self, k: u64) -> u32 {
        self.antilog[(k % (self.q as u64 - 1)) as usize]
    }

    pub fn log(&self, x: u32) -> Option<u32> {
        match self.log.get(x as usize) {
            Some(&l) if l != u32::MAX => Some(l),
            _ => None,
        }
    }

    pub fn coefficients(&self, x: u32) -> Vec<u32> {
        let mut c = vec![0; self.e as usize];
        let mut x = x;
        for slot in c.iter_mut() {
            *slot = x % self.p;
            x /= self.p;
        }
        c
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        if self.e == 1 {
            return (a + b) % p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let p = self.p;
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.pow_g(k)
    }

    pub fn is_primitive(&self, x: u32) -> bool {
        self.log(x)
            .is_some_and(|l| gcd(l as u64, self.q as u64 - 1) == 1)
    }

    /// Primitive elements in ascending canonical encoding.
    pub fn primitive_elements(&self) -> impl Iterator<Item = u32> + '_ {
        (1..self.q).filter(|&x| self.is_primitive(x))
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The `n` cyclotomic classes `C_i = g^i <g^n>` of the multiplicative group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicPartition {
    n: usize,
    class_size: usize,
    // Indexed by encoding; u32::MAX marks zero.
    class_of: Vec<u32>,
    members: Vec<Vec<u32>>,
}

impl CyclotomicPartition {
    pub fn new(tables: &FieldTables, n: usize) -> Result<Self> {
        let order = tables.q() as usize - 1;
        if n == 0 || !order.is_multiple_of(n) {
            return Err(Error::ClassCountMismatch { n, order });
        }
        let mut class_of = vec![u32::MAX; tables.q() as usize];
        let mut members = vec![Vec::with_capacity(order / n); n];
        for (k, &x) in tables.antilog().iter().enumerate() {
            class_of[x as usize] = (k % n) as u32;
            members[k % n].push(x);
        }
        Ok(CyclotomicPartition {
            n,
            class_size: order / n,
            class_of,
            members,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn class_size(&self) -> usize {
        self.class_size
    }

    /// Class index of a nonzero element; `None` for zero or out of range.
    pub fn class_of(&self, x: u32) -> Option<usize> {
        match self.class_of.get(x as usize) {
            Some(&c) if c != u32::MAX => Some(c as usize),
            _ => None,
        }
    }

    /// Members of `C_i` in the order `g^i, g^{n+i}, g^{2n+i}, ..`.
    pub fn class(&self, i: usize) -> Option<&[u32]> {
        self.members.get(i).map(Vec::as_slice)
    }
}

/// The class containing `-1`, i.e. `((q-1)/2) mod n`.
pub fn negation_class_shift(tables: &FieldTables, n: usize) -> Result<usize> {
    if tables.q().is_multiple_of(2) {
        return Err(Error::EvenCharacteristic);
    }
    let order = tables.q() as usize - 1;
    if n == 0 || !order.is_multiple_of(n) {
        return Err(Error::ClassCountMismatch { n, order });
    }
    Ok((order / 2) % n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn gf(p: u32, e: u32) -> FieldTables {
        FieldTables::build(&FieldConfig::new(p, e)).unwrap()
    }

    #[test]
    fn gf625_has_624_units() {
        let f = gf(5, 4);
        assert_eq!(f.q(), 625);
        assert_eq!(f.antilog().len(), 624);
        let distinct: BTreeSet<_> = f.antilog().iter().collect();
        assert_eq!(distinct.len(), 624);
        assert!(!distinct.contains(&0));
    }

    #[test]
    fn auto_modulus_for_gf625_is_x4_plus_2() {
        assert_eq!(smallest_irreducible(5, 4), vec![2, 0, 0, 0, 1]);
        assert!(!is_irreducible(&[0, 0, 0, 0, 1], 5));
        // x^4 + 1 = (x^2 + 2)(x^2 + 3) over GF(5)
        assert!(!is_irreducible(&[1, 0, 0, 0, 1], 5));
    }

    #[test]
    fn prime_field_enumerates_primitive_root_powers() {
        let f = gf(5, 1);
        assert_eq!(f.generator(), 2);
        assert_eq!(f.antilog(), &[1, 2, 4, 3]);
    }

    #[test]
    fn gf7_generator_3() {
        let f = FieldTables::build(&FieldConfig::new(7, 1).with_generator(3)).unwrap();
        assert_eq!(f.antilog(), &[1, 3, 2, 6, 4, 5]);
        assert_eq!(f.log(3), Some(1));
        assert_eq!(f.log(2), Some(2));
        assert_eq!(f.log(0), None);
    }

    #[test]
    fn rejects_bad_configs() {
        assert_eq!(
            FieldTables::build(&FieldConfig::new(6, 1)),
            Err(Error::NotPrime(6))
        );
        assert!(matches!(
            FieldTables::build(&FieldConfig::new(5, 4).with_modulus(vec![1, 0, 0, 0, 1])),
            Err(Error::ReducibleModulus { .. })
        ));
        // 2 has order 3 mod 7
        assert_eq!(
            FieldTables::build(&FieldConfig::new(7, 1).with_generator(2)),
            Err(Error::NotPrimitive(2))
        );
        assert!(FieldTables::build(&FieldConfig::new(2, 21)).is_err());
        assert!(FieldTables::build(&FieldConfig::new(5, 0)).is_err());
    }

    #[test]
    fn antilog_is_multiplicative() {
        let f = gf(5, 4);
        let ring = PolyRing {
            p: 5,
            e: 4,
            modulus: f.modulus().to_vec(),
        };
        for a in (0..624).step_by(7) {
            for b in (0..624).step_by(11) {
                let lhs = ring.mul(f.antilog()[a], f.antilog()[b]);
                assert_eq!(lhs, f.antilog()[(a + b) % 624]);
            }
        }
        assert_eq!(f.mul(f.antilog()[0], f.antilog()[17]), f.antilog()[17]);
    }

    #[test]
    fn gf7_partition_of_order_3() {
        let f = FieldTables::build(&FieldConfig::new(7, 1).with_generator(3)).unwrap();
        let part = CyclotomicPartition::new(&f, 3).unwrap();
        let sets: Vec<BTreeSet<u32>> = (0..3)
            .map(|i| part.class(i).unwrap().iter().copied().collect())
            .collect();
        assert_eq!(sets[0], BTreeSet::from([1, 6]));
        assert_eq!(sets[1], BTreeSet::from([3, 4]));
        assert_eq!(sets[2], BTreeSet::from([2, 5]));
        assert_eq!(negation_class_shift(&f, 3).unwrap(), 0);
        assert_eq!(part.class_of(6), Some(0));
    }

    #[test]
    fn gf625_sixteen_classes_of_39() {
        let f = gf(5, 4);
        let part = CyclotomicPartition::new(&f, 16).unwrap();
        assert_eq!(part.n(), 16);
        assert!((0..16).all(|i| part.class(i).unwrap().len() == 39));
        assert_eq!(negation_class_shift(&f, 16).unwrap(), 8);
        assert_eq!(part.class_of(f.neg(1)), Some(8));
        assert_eq!(negation_class_shift(&f, 1).unwrap(), 0);
        assert!(matches!(
            CyclotomicPartition::new(&f, 7),
            Err(Error::ClassCountMismatch { n: 7, order: 624 })
        ));
        let single = CyclotomicPartition::new(&f, 1).unwrap();
        assert_eq!(single.class(0).unwrap().len(), 624);
    }

    #[test]
    fn negation_shift_needs_odd_q() {
        let f = gf(2, 3);
        assert_eq!(negation_class_shift(&f, 7), Err(Error::EvenCharacteristic));
    }

    #[test]
    fn class_multiplication_exhaustive_small() {
        for (p, e, n) in [(7, 1, 3), (3, 2, 4), (13, 1, 4), (5, 2, 8)] {
            let f = gf(p, e);
            let part = CyclotomicPartition::new(&f, n).unwrap();
            for i in 0..n {
                for j in 0..n {
                    for &y in part.class(j).unwrap() {
                        let image: BTreeSet<u32> =
                            part.class(i).unwrap().iter().map(|&x| f.mul(x, y)).collect();
                        let target: BTreeSet<u32> =
                            part.class((i + j) % n).unwrap().iter().copied().collect();
                        assert_eq!(image, target);
                    }
                }
            }
            let shift = negation_class_shift(&f, n).unwrap();
            for x in 1..f.q() {
                assert_eq!(
                    part.class_of(f.neg(x)).unwrap(),
                    (part.class_of(x).unwrap() + shift) % n
                );
            }
        }
    }

    #[test]
    fn class_multiplication_sampled_gf625() {
        let f = gf(5, 4);
        let part = CyclotomicPartition::new(&f, 16).unwrap();
        for (i, j, k) in [(0, 3, 5), (7, 9, 38), (15, 15, 1), (4, 12, 20)] {
            let y = part.class(j).unwrap()[k];
            let image: BTreeSet<u32> = part.class(i).unwrap().iter().map(|&x| f.mul(x, y)).collect();
            let target: BTreeSet<u32> = part.class((i + j) % 16).unwrap().iter().copied().collect();
            assert_eq!(image, target);
        }
        for x in 1..625 {
            assert_eq!(
                part.class_of(f.neg(x)).unwrap(),
                (part.class_of(x).unwrap() + 8) % 16
            );
        }
    }

    #[test]
    fn primitive_elements_are_exactly_order_q_minus_1() {
        let f = gf(3, 2);
        let ring = PolyRing {
            p: 3,
            e: 2,
            modulus: f.modulus().to_vec(),
        };
        for x in 1..9 {
            let order = (1..=8u64).find(|&k| ring.pow(x, k) == 1).unwrap();
            assert_eq!(f.is_primitive(x), order == 8, "x = {x}");
        }
        assert_eq!(f.primitive_elements().count(), 4);
    }

    #[test]
    fn addition_is_digitwise() {
        let f = gf(5, 4);
        assert_eq!(f.add(f.antilog()[0], f.neg(f.antilog()[0])), 0);
        assert_eq!(f.coefficients(f.add(4 + 3 * 5, 2 + 2 * 5)), vec![1, 0, 0, 0]);
        assert_eq!(f.sub(7, 7), 0);
    }
}
