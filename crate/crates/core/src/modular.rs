//! Residue arithmetic, explicit unit groups and the quotient orders
//! `O(m, n) = |(Z/m)* / {±l^n}|` that every count in this crate reduces to.
//!
//! Unit groups are stored as sorted element lists. All moduli handled here
//! stay well below 2^32 in practice; products go through `u128`, so any
//! modulus below 2^63 is exact.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn totient(m: u64) -> u64 {
    factorize(m)
        .into_iter()
        .fold(m, |acc, (p, _)| acc / p * (p - 1))
}

/// Multiplicative order of `u` modulo `m`; `None` when `u` is not a unit.
pub fn multiplicative_order(u: u64, m: u64) -> Option<u64> {
    if m == 0 || gcd(u % m, m) != 1 {
        return None;
    }
    if m == 1 {
        return Some(1);
    }
    // The order divides phi(m); strip prime factors while the power stays 1.
    let phi = totient(m);
    let mut order = phi;
    for (p, _) in factorize(phi) {
        while order % p == 0 && pow_mod(u, order / p, m) == 1 {
            order /= p;
        }
    }
    Some(order)
}

/// Exponent of `p` in `m`.
pub fn valuation(mut m: u64, p: u64) -> u32 {
    let mut e = 0;
    while m > 0 && m % p == 0 {
        m /= p;
        e += 1;
    }
    e
}

/// An element of `Z/m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: u64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(Self {
            value: value % modulus,
            modulus,
        })
    }

    pub fn from_signed(value: i64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(Self {
            value: value.rem_euclid(modulus as i64) as u64,
            modulus,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_unit(&self) -> bool {
        gcd(self.value, self.modulus) == 1
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let s = (self.value as u128 + other.value as u128) % self.modulus as u128;
        Ok(Self {
            value: s as u64,
            modulus: self.modulus,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            value: mul_mod(self.value, other.value, self.modulus),
            modulus: self.modulus,
        })
    }

    pub fn pow(&self, exp: u64) -> Self {
        Self {
            value: pow_mod(self.value, exp, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        inv_mod(self.value, self.modulus).map(|value| Self {
            value,
            modulus: self.modulus,
        })
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

/// Membership structure for residues mod m: a bitmap for moderate moduli,
/// a hash set otherwise.
enum Members {
    Bits(Vec<bool>),
    Hashed(HashSet<u64>),
}

impl Members {
    fn new(m: u64) -> Self {
        if m <= 1 << 26 {
            Members::Bits(vec![false; m as usize])
        } else {
            Members::Hashed(HashSet::new())
        }
    }

    fn contains(&self, x: u64) -> bool {
        match self {
            Members::Bits(b) => b[x as usize],
            Members::Hashed(h) => h.contains(&x),
        }
    }

    fn insert(&mut self, x: u64) {
        match self {
            Members::Bits(b) => b[x as usize] = true,
            Members::Hashed(h) => {
                h.insert(x);
            }
        }
    }
}

/// A multiplicatively closed set of units modulo `modulus`, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitSubgroup {
    modulus: u64,
    elements: Vec<u64>,
}

impl UnitSubgroup {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&(x % self.modulus)).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &UnitSubgroup) -> bool {
        self.modulus == other.modulus && self.elements.iter().all(|&x| other.contains(x))
    }

    /// The image `{x^e : x in self}`, itself a subgroup.
    pub fn power_image(&self, e: u64) -> UnitSubgroup {
        let mut elements: Vec<u64> = self
            .elements
            .iter()
            .map(|&x| pow_mod(x, e, self.modulus))
            .collect();
        elements.sort_unstable();
        elements.dedup();
        UnitSubgroup {
            modulus: self.modulus,
            elements,
        }
    }
}

/// All residues coprime to `m`. For `m = 1` this is `{0}`, the residue 0
/// acting as the identity.
pub fn unit_group(m: u64) -> Result<UnitSubgroup> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    let elements = (0..m).filter(|&x| gcd(x, m) == 1).collect();
    Ok(UnitSubgroup {
        modulus: m,
        elements,
    })
}

/// Smallest multiplicatively closed subset of `(Z/m)*` containing `gens`
/// and 1.
pub fn subgroup_closure(m: u64, gens: &[u64]) -> Result<UnitSubgroup> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    for &g in gens {
        if gcd(g % m, m) != 1 {
            return Err(Error::NonUnit {
                value: g,
                modulus: m,
            });
        }
    }
    let mut members = Members::new(m);
    let one = 1 % m;
    let mut elements = vec![one];
    members.insert(one);
    // Abelian group: adjoining g to H gives the union of the cosets H*g^i
    // for i below the order of g modulo H.
    for &g in gens {
        let g = g % m;
        if members.contains(g) {
            continue;
        }
        let base_len = elements.len();
        let mut power = g;
        while !members.contains(power) {
            for idx in 0..base_len {
                let x = mul_mod(elements[idx], power, m);
                members.insert(x);
                elements.push(x);
            }
            power = mul_mod(power, g, m);
        }
    }
    elements.sort_unstable();
    Ok(UnitSubgroup {
        modulus: m,
        elements,
    })
}

/// Order of `(Z/m)* / {±l^n : l a unit}`.
pub fn big_o(m: u64, n: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    if n == 0 {
        return Err(Error::OutOfRange("exponent must be at least 1".into()));
    }
    let units = unit_group(m)?;
    let mut gens = vec![m - 1];
    gens.extend(units.elements().iter().map(|&l| pow_mod(l, n, m)));
    let closure = subgroup_closure(m, &gens)?;
    Ok(units.len() as u64 / closure.len() as u64)
}

/// Order of `(Z/m)* / <-1, image>`.
pub fn relative_o(m: u64, image: &UnitSubgroup) -> Result<u64> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    if image.modulus != m {
        return Err(Error::InvalidAction(format!(
            "image lives modulo {}, expected {}",
            image.modulus, m
        )));
    }
    let mut gens = vec![m - 1];
    gens.extend_from_slice(image.elements());
    let closure = subgroup_closure(m, &gens)?;
    Ok(totient(m) / closure.len() as u64)
}

/// Prime-power moduli of `m`, primes ascending. `crt_split(1)` is empty.
pub fn crt_split(m: u64) -> Result<Vec<u64>> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    Ok(factorize(m)
        .into_iter()
        .map(|(p, e)| p.pow(e))
        .collect())
}

/// The unique residue modulo the product of pairwise coprime moduli.
pub fn crt_combine(components: &[Residue]) -> Result<Residue> {
    let mut acc = Residue::new(0, 1)?;
    for c in components {
        let (m1, m2) = (acc.modulus, c.modulus);
        if gcd(m1, m2) != 1 {
            return Err(Error::NotCoprime(m1, m2));
        }
        let m = m1
            .checked_mul(m2)
            .ok_or_else(|| Error::OutOfRange("CRT modulus overflows u64".into()))?;
        // x = r1 + m1 * ((r2 - r1) * m1^{-1} mod m2)
        let inv = inv_mod(m1 % m2, m2).expect("coprime moduli");
        let diff = (c.value as i128 - acc.value as i128).rem_euclid(m2 as i128) as u64;
        let t = mul_mod(diff, inv, m2);
        let value = ((acc.value as u128 + m1 as u128 * t as u128) % m as u128) as u64;
        acc = Residue { value, modulus: m };
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unit_group_examples() {
        assert_eq!(unit_group(1).unwrap().elements(), &[0]);
        assert_eq!(unit_group(8).unwrap().elements(), &[1, 3, 5, 7]);
        assert_eq!(unit_group(9).unwrap().elements(), &[1, 2, 4, 5, 7, 8]);
        assert_eq!(unit_group(0), Err(Error::ZeroModulus));
    }

    #[test]
    fn closure_examples() {
        assert_eq!(subgroup_closure(24, &[23]).unwrap().elements(), &[1, 23]);
        assert_eq!(subgroup_closure(5, &[2]).unwrap().elements(), &[1, 2, 3, 4]);
        assert_eq!(subgroup_closure(7, &[]).unwrap().elements(), &[1]);
        assert!(matches!(
            subgroup_closure(12, &[4]),
            Err(Error::NonUnit { .. })
        ));
    }

    #[test]
    fn big_o_examples() {
        for n in 1..8 {
            assert_eq!(big_o(1, n).unwrap(), 1);
            assert_eq!(big_o(2, n).unwrap(), 1);
        }
        // l^2 = 1 mod 8, so even exponents leave only {1, 7}; odd ones reach every unit.
        for n in [2, 4, 6] {
            assert_eq!(big_o(8, n).unwrap(), 2);
        }
        assert_eq!(big_o(8, 1).unwrap(), 1);
        assert_eq!(big_o(9, 3).unwrap(), 3);
        assert_eq!(big_o(5, 1).unwrap(), 1);
        assert_eq!(big_o(5, 2).unwrap(), 2);
    }

    #[test]
    fn relative_o_examples() {
        let full = unit_group(16).unwrap();
        assert_eq!(relative_o(16, &full).unwrap(), 1);
        let img = subgroup_closure(16, &[9]).unwrap();
        assert_eq!(relative_o(16, &img).unwrap(), 2);
        let trivial = subgroup_closure(7, &[]).unwrap();
        assert_eq!(relative_o(7, &trivial).unwrap(), 3);
        assert!(relative_o(8, &img).is_err());
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_split(45).unwrap(), vec![9, 5]);
        assert_eq!(crt_split(49).unwrap(), vec![49]);
        assert!(crt_split(1).unwrap().is_empty());
        let r = crt_combine(&[Residue::new(9, 16).unwrap(), Residue::new(1, 3).unwrap()]).unwrap();
        assert_eq!((r.value(), r.modulus()), (25, 48));
        let bad = crt_combine(&[Residue::new(1, 4).unwrap(), Residue::new(1, 6).unwrap()]);
        assert_eq!(bad, Err(Error::NotCoprime(4, 6)));
    }

    #[test]
    fn wide_moduli_do_not_overflow() {
        let m = (1u64 << 48) + 21;
        let x = Residue::new(m - 1, m).unwrap();
        assert_eq!(x.mul(&x).unwrap().value(), 1);
        assert_eq!(x.pow(3).value(), m - 1);
    }

    #[test]
    fn orders_and_inverses() {
        assert_eq!(multiplicative_order(3, 11), Some(5));
        assert_eq!(multiplicative_order(2, 7), Some(3));
        assert_eq!(multiplicative_order(0, 1), Some(1));
        assert_eq!(multiplicative_order(3, 9), None);
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
    }

    fn brute_closure_size(m: u64, gens: &[u64]) -> usize {
        let mut set = std::collections::BTreeSet::from([1 % m]);
        loop {
            let next: Vec<u64> = set
                .iter()
                .flat_map(|&x| gens.iter().map(move |&g| mul_mod(x, g, m)))
                .collect();
            let before = set.len();
            set.extend(next);
            if set.len() == before {
                return set.len();
            }
        }
    }

    proptest! {
        #[test]
        fn big_o_times_closure_is_phi(m in 1u64..200, n in 1u64..8) {
            let units = unit_group(m).unwrap();
            let mut gens = vec![m - 1];
            gens.extend(units.elements().iter().map(|&l| pow_mod(l, n, m)));
            let size = brute_closure_size(m, &gens) as u64;
            prop_assert_eq!(big_o(m, n).unwrap() * size, totient(m));
        }

        #[test]
        fn big_o_factors_over_crt(m in 1u64..200, n in 1u64..6) {
            // The quotient computed mod m equals the quotient of the product of
            // component unit groups by the diagonal images.
            let comps = crt_split(m).unwrap();
            let units = unit_group(m).unwrap();
            let mut gens: Vec<Vec<u64>> = vec![comps.iter().map(|&q| q - 1).collect()];
            for &l in units.elements() {
                gens.push(comps.iter().map(|&q| pow_mod(l, n, q)).collect());
            }
            // Closure of tuples, brute force.
            let one: Vec<u64> = comps.iter().map(|&q| 1 % q).collect();
            let mut set = std::collections::BTreeSet::from([one]);
            loop {
                let next: Vec<Vec<u64>> = set.iter().flat_map(|x| {
                    gens.iter().map(|g| x.iter().zip(g).zip(&comps).map(|((a, b), &q)| mul_mod(*a, *b, q)).collect::<Vec<_>>()).collect::<Vec<_>>()
                }).collect();
                let before = set.len();
                set.extend(next);
                if set.len() == before { break; }
            }
            let phi: u64 = comps.iter().map(|&q| totient(q)).product();
            prop_assert_eq!(phi / set.len() as u64, big_o(m, n).unwrap());
        }

        #[test]
        fn closure_idempotent_and_monotone(m in 2u64..150, raw in proptest::collection::vec(1u64..1000, 0..4), extra in 1u64..1000) {
            let gens: Vec<u64> = raw.into_iter().filter(|g| gcd(g % m, m) == 1).collect();
            let h = subgroup_closure(m, &gens).unwrap();
            prop_assert_eq!(subgroup_closure(m, h.elements()).unwrap(), h.clone());
            prop_assert_eq!(h.len(), brute_closure_size(m, &gens));
            if gcd(extra % m, m) == 1 {
                let mut more = gens.clone();
                more.push(extra);
                prop_assert!(h.is_subgroup_of(&subgroup_closure(m, &more).unwrap()));
            }
        }

        #[test]
        fn relative_o_boundaries(m in 1u64..200) {
            let units = unit_group(m).unwrap();
            prop_assert_eq!(relative_o(m, &units).unwrap(), 1);
            let trivial = subgroup_closure(m, &[]).unwrap();
            let pm = subgroup_closure(m, &[m - 1]).unwrap();
            prop_assert_eq!(relative_o(m, &trivial).unwrap(), totient(m) / pm.len() as u64);
        }

        #[test]
        fn crt_round_trip(x in 0u64..100_000, m in 1u64..5000) {
            let comps: Vec<Residue> = crt_split(m).unwrap().into_iter().map(|q| Residue::new(x, q).unwrap()).collect();
            let r = crt_combine(&comps).unwrap();
            prop_assert_eq!(r, Residue::new(x, m).unwrap());
        }
    }
}
