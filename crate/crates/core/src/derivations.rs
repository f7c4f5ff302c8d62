//! Crossed homomorphisms `f(h1 h2) = f(h1) + chi(h1) f(h2)` into `Z/a`.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{Action, Character, FiniteGroup, GroupSpec};
use crate::modular::{crt_split, gcd, mul_mod, multiplicative_order, valuation};

/// Largest number of generator-value assignments the brute force will try.
pub const CANDIDATE_BOUND: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Derivation {
    generator_values: Vec<u64>,
    #[serde(skip)]
    values: Vec<u64>,
}

impl Derivation {
    pub fn generator_values(&self) -> &[u64] {
        &self.generator_values
    }

    /// Value on every element of the group.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn value(&self, h: usize) -> u64 {
        self.values[h]
    }

    pub fn add(&self, other: &Derivation, modulus: u64) -> Derivation {
        let add = |x: &u64, y: &u64| (x + y) % modulus;
        Derivation {
            generator_values: self
                .generator_values
                .iter()
                .zip(&other.generator_values)
                .map(|(x, y)| add(x, y))
                .collect(),
            values: self.values.iter().zip(&other.values).map(|(x, y)| add(x, y)).collect(),
        }
    }
}

/// Value of the cocycle on a word, given its values on the generators.
fn word_value(group: &FiniteGroup, chi: &Character, gen_values: &[u64], word: &[(usize, i64)]) -> u64 {
    let a = chi.modulus();
    let gens = group.generators();
    let mut x = 0usize;
    let mut acc = 0u64;
    for &(g, e) in word {
        let (letter, f) = if e >= 0 {
            (gens[g], gen_values[g])
        } else {
            let gi = group.inv(gens[g]);
            (gi, (a - mul_mod(chi.value(gi), gen_values[g], a)) % a)
        };
        for _ in 0..e.unsigned_abs() {
            acc = (acc + mul_mod(chi.value(x), f, a)) % a;
            x = group.mul(x, letter);
        }
    }
    acc
}

fn relations_hold(group: &FiniteGroup, chi: &Character, rels: &[usize], values: &[u64]) -> bool {
    rels.iter().all(|&i| {
        let rel = &group.relations()[i];
        let first = word_value(group, chi, values, &rel.sides[0]);
        rel.sides[1..]
            .iter()
            .all(|w| word_value(group, chi, values, w) == first)
    })
}

/// Completes generator values to the whole group, checking the cocycle rule
/// on every edge of the Cayley graph.
fn complete(group: &FiniteGroup, chi: &Character, gen_values: &[u64]) -> Option<Vec<u64>> {
    let a = chi.modulus();
    let mut values = vec![u64::MAX; group.order()];
    values[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (j, &g) in group.generators().iter().enumerate() {
            let y = group.mul(x, g);
            let v = (values[x] + mul_mod(chi.value(x), gen_values[j], a)) % a;
            if values[y] == u64::MAX {
                values[y] = v;
                queue.push_back(y);
            } else if values[y] != v {
                return None;
            }
        }
    }
    Some(values)
}

/// Every crossed homomorphism `H -> Z/a` for the character `chi`, sorted.
pub fn enumerate_derivations(group: &FiniteGroup, chi: &Character) -> Result<Vec<Derivation>> {
    if chi.values().len() != group.order() {
        return Err(Error::MixedParents);
    }
    let r = group.generators().len();
    let mut by_level: Vec<Vec<usize>> = vec![Vec::new(); r];
    for (i, rel) in group.relations().iter().enumerate() {
        by_level[rel.max_generator()].push(i);
    }
    let mut out = Vec::new();
    let mut values = vec![0u64; r];
    let mut budget = CANDIDATE_BOUND;
    search(group, chi, &by_level, &mut values, 0, &mut budget, &mut out)?;
    out.sort();
    Ok(out)
}

pub fn enumerate_derivations_for_action(group: &FiniteGroup, action: &Action) -> Result<Vec<Derivation>> {
    let chi = Character::from_action(group, action)?;
    enumerate_derivations(group, &chi)
}

fn search(
    group: &FiniteGroup,
    chi: &Character,
    by_level: &[Vec<usize>],
    values: &mut Vec<u64>,
    depth: usize,
    budget: &mut u64,
    out: &mut Vec<Derivation>,
) -> Result<()> {
    if depth == values.len() {
        let full = complete(group, chi, values).ok_or_else(|| {
            Error::Presentation(format!(
                "cocycle values {:?} satisfy the relations of {} but do not extend",
                values,
                group.spec()
            ))
        })?;
        out.push(Derivation {
            generator_values: values.clone(),
            values: full,
        });
        return Ok(());
    }
    for f in 0..chi.modulus() {
        if *budget == 0 {
            return Err(Error::OutOfRange(format!(
                "derivation search for {} exceeded {CANDIDATE_BOUND} candidates",
                group.spec()
            )));
        }
        *budget -= 1;
        values[depth] = f;
        if relations_hold(group, chi, &by_level[depth], values) {
            search(group, chi, by_level, values, depth + 1, budget, out)?;
        }
    }
    Ok(())
}

/// `{x in Z/a : u x = x}` for every generator image `u`.
pub fn fixed_subgroup(chi: &Character) -> Vec<u64> {
    fixed_by_units(chi.modulus(), chi.images())
}

pub fn fixed_by_units(a: u64, units: &[u64]) -> Vec<u64> {
    // (u - 1) x = 0 mod a for all u  <=>  x is a multiple of a / gcd(a, all u - 1).
    let d = units
        .iter()
        .fold(a, |acc, &u| gcd(acc, (u + a - 1 % a) % a));
    let step = a / d.max(1);
    (0..a).step_by(step.max(1) as usize).collect()
}

/// `|A / A^H|`, valid when `|H|` and `a` are coprime.
pub fn derivation_count_closed_form(group: &FiniteGroup, chi: &Character) -> Result<u64> {
    let a = chi.modulus();
    let h = group.order() as u64;
    if gcd(h, a) != 1 {
        return Err(Error::NotCoprime(h, a));
    }
    Ok(a / fixed_subgroup(chi).len() as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    T,
    O,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::T => write!(f, "T"),
            Family::O => write!(f, "O"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlanComponent {
    pub modulus: u64,
    pub unit: u64,
    pub count: u64,
}

/// Reduction of `Der(Z/b x T*(n) or Z/b x O*(n), Z/a)` to a cyclic quotient
/// acting on the prime-power parts of `Z/a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivationPlan {
    pub family: Family,
    /// Height of the kernel `Q8 x| Z/3^n0` (tetrahedral case).
    pub n0: Option<u32>,
    pub kernel_order: u64,
    pub quotient_order: u64,
    pub quotient_unit: u64,
    pub components: Vec<PlanComponent>,
    pub count: u64,
}

/// `n0` with `ord(v) = 3^(n - n0)`.
pub fn tower_n0(n: u32, a: u64, v: u64) -> Result<u32> {
    let ord = multiplicative_order(v, a).ok_or(Error::NonUnit { value: v, modulus: a })?;
    let k = valuation(ord, 3);
    if 3u64.pow(k) != ord || k > n {
        return Err(Error::InvalidAction(format!(
            "v={v} has order {ord} modulo {a}, not a divisor of 3^{n}"
        )));
    }
    Ok(n - k)
}

pub fn decompose_derivations(family: Family, a: u64, b: u64, n: u32, action: &Action) -> Result<DerivationPlan> {
    if gcd(a, b) != 1 || gcd(a * b, 6) != 1 {
        return Err(Error::Hypothesis(format!(
            "need (a,b) = (ab,6) = 1, got a={a}, b={b}"
        )));
    }
    if action.modulus != a {
        return Err(Error::InvalidAction("action modulus differs from a".into()));
    }
    let ord_u = multiplicative_order(action.u, a).ok_or(Error::NonUnit {
        value: action.u,
        modulus: a,
    })?;
    if b % ord_u != 0 {
        return Err(Error::InvalidAction(format!("u={} has order {ord_u}, not dividing b={b}", action.u)));
    }
    let three_n = 3u64.pow(n);
    let (n0, kernel_order, extra, unit) = match family {
        Family::T => {
            if action.w != 1 % a {
                return Err(Error::InvalidAction("w is not used by the tetrahedral family".into()));
            }
            let n0 = tower_n0(n, a, action.v)?;
            (Some(n0), 8 * 3u64.pow(n0), 3u64.pow(n - n0), mul_mod(action.u, action.v, a))
        }
        Family::O => {
            if action.v != 1 % a {
                return Err(Error::InvalidAction("v is not used by the octahedral family".into()));
            }
            if mul_mod(action.w, action.w, a) != 1 % a {
                return Err(Error::InvalidAction(format!("w={} does not square to 1", action.w)));
            }
            if action.w == 1 % a {
                (None, 16 * three_n, 1, action.u)
            } else {
                (None, 8 * three_n, 2, mul_mod(action.u, action.w, a))
            }
        }
    };
    let c = b * extra;
    let quotient = FiniteGroup::build(&GroupSpec::Cyclic(c))?;
    let mut components = Vec::new();
    for q in crt_split(a)? {
        let chi = Character::new(&quotient, q, &[unit % q])?;
        let count = enumerate_derivations(&quotient, &chi)?.len() as u64;
        components.push(PlanComponent {
            modulus: q,
            unit: unit % q,
            count,
        });
    }
    let count = components.iter().map(|c| c.count).product();
    Ok(DerivationPlan {
        family,
        n0,
        kernel_order,
        quotient_order: c,
        quotient_unit: unit,
        components,
        count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(spec: GroupSpec) -> FiniteGroup {
        FiniteGroup::build(&spec).unwrap()
    }

    #[test]
    fn examples() {
        let c5 = build(GroupSpec::Cyclic(5));
        let chi = Character::new(&c5, 11, &[3]).unwrap();
        assert_eq!(enumerate_derivations(&c5, &chi).unwrap().len(), 11);
        assert_eq!(derivation_count_closed_form(&c5, &chi).unwrap(), 11);
        let trivial = Character::trivial(&c5, 11).unwrap();
        let der = enumerate_derivations(&c5, &trivial).unwrap();
        assert_eq!(der.len(), 1);
        assert!(der[0].values().iter().all(|&x| x == 0));
        let c1 = build(GroupSpec::Cyclic(1));
        let chi = Character::trivial(&c1, 7).unwrap();
        assert_eq!(enumerate_derivations(&c1, &chi).unwrap().len(), 1);
    }

    #[test]
    fn fixed_examples() {
        assert_eq!(fixed_by_units(11, &[1]).len(), 11);
        assert_eq!(fixed_by_units(11, &[3]), vec![0]);
        assert_eq!(fixed_by_units(9, &[4]), vec![0, 3, 6]);
    }

    #[test]
    fn closed_form_needs_coprime_orders() {
        let c5 = build(GroupSpec::Cyclic(5));
        let chi = Character::trivial(&c5, 5).unwrap();
        assert_eq!(derivation_count_closed_form(&c5, &chi), Err(Error::NotCoprime(5, 5)));
        // Not coprime: Hom(Z/5, Z/5) has five elements.
        assert_eq!(enumerate_derivations(&c5, &chi).unwrap().len(), 5);
    }

    #[test]
    fn tetrahedral_closed_form() {
        let h = build(GroupSpec::direct(GroupSpec::Cyclic(1), GroupSpec::TStar(1)));
        let chi = Character::from_action(&h, &Action::new(7, 1, 2, 1)).unwrap();
        assert_eq!(derivation_count_closed_form(&h, &chi).unwrap(), 7);
        assert_eq!(enumerate_derivations(&h, &chi).unwrap().len(), 7);
    }

    #[test]
    fn plans() {
        let plan = decompose_derivations(Family::T, 7, 5, 2, &Action::new(7, 1, 1, 1)).unwrap();
        assert_eq!((plan.quotient_order, plan.count), (5, 1));
        let plan = decompose_derivations(Family::T, 7, 1, 2, &Action::new(7, 1, 2, 1)).unwrap();
        assert_eq!(plan.n0, Some(1));
        assert_eq!(plan.kernel_order, 24);
        assert_eq!((plan.quotient_order, plan.count), (3, 7));
        let plan = decompose_derivations(Family::O, 55, 1, 1, &Action::new(55, 1, 1, 54)).unwrap();
        let moduli: Vec<u64> = plan.components.iter().map(|c| c.modulus).collect();
        assert_eq!(moduli, vec![5, 11]);
        assert_eq!(plan.count, 55);
        assert!(matches!(
            decompose_derivations(Family::T, 9, 1, 1, &Action::trivial(9)),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn derivations_form_a_group() {
        let c4 = build(GroupSpec::Cyclic(4));
        let chi = Character::new(&c4, 5, &[2]).unwrap();
        let der = enumerate_derivations(&c4, &chi).unwrap();
        for f in &der {
            for g in &der {
                assert!(der.binary_search(&f.add(g, 5)).is_ok());
            }
        }
    }
}
