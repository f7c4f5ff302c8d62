//! Concrete finite groups with exact normal-form arithmetic.
//!
//! Every group is realised as a dense index set `0..order` with index 0 the
//! identity. The binary tetrahedral and octahedral towers, the quaternion
//! groups and cyclic groups have hand-derived multiplication rules; direct and
//! semidirect products are tuple engines on top of them. Groups up to
//! [`TABLE_LIMIT`] elements cache a full multiplication table.

use std::collections::VecDeque;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modular::{factorize, gcd, mul_mod, pow_mod};

pub const TABLE_LIMIT: usize = 1024;

static NEXT_GROUP_ID: AtomicU64 = AtomicU64::new(1);

/// Generator images of an action into `(Z/modulus)*`.
///
/// `u` acts through every cyclic factor of the complement, `v` through the
/// abelianization of a `T*(n)` factor (image of `X`), `w` through the
/// abelianization of an `O*(n)` factor (image of `R`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Action {
    pub modulus: u64,
    pub u: u64,
    pub v: u64,
    pub w: u64,
}

impl Action {
    pub fn new(modulus: u64, u: u64, v: u64, w: u64) -> Self {
        let m = modulus.max(1);
        Self {
            modulus,
            u: u % m,
            v: v % m,
            w: w % m,
        }
    }

    pub fn trivial(modulus: u64) -> Self {
        Self::new(modulus, 1, 1, 1)
    }

    pub fn is_trivial(&self) -> bool {
        let one = 1 % self.modulus.max(1);
        self.u == one && self.v == one && self.w == one
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GroupSpec {
    Cyclic(u64),
    Q8,
    Q16,
    TStar(u32),
    OStar(u32),
    Direct(Box<GroupSpec>, Box<GroupSpec>),
    Semidirect {
        a: u64,
        complement: Box<GroupSpec>,
        action: Action,
    },
}

impl GroupSpec {
    pub fn direct(left: GroupSpec, right: GroupSpec) -> Self {
        GroupSpec::Direct(Box::new(left), Box::new(right))
    }

    pub fn semidirect(complement: GroupSpec, action: Action) -> Self {
        GroupSpec::Semidirect {
            a: action.modulus,
            complement: Box::new(complement),
            action,
        }
    }

    /// Order predicted by the product formula, without building anything.
    pub fn order(&self) -> Result<u64> {
        let checked = |x: u64, y: u64| {
            x.checked_mul(y)
                .ok_or_else(|| Error::OutOfRange("group order overflows u64".into()))
        };
        match self {
            GroupSpec::Cyclic(m) => {
                if *m == 0 {
                    Err(Error::InvalidSpec("C(0) is not a finite group".into()))
                } else {
                    Ok(*m)
                }
            }
            GroupSpec::Q8 => Ok(8),
            GroupSpec::Q16 => Ok(16),
            GroupSpec::TStar(n) => checked(8, three_pow(*n)?),
            GroupSpec::OStar(n) => checked(16, three_pow(*n)?),
            GroupSpec::Direct(l, r) => checked(l.order()?, r.order()?),
            GroupSpec::Semidirect { a, complement, .. } => {
                if *a == 0 {
                    return Err(Error::ZeroModulus);
                }
                checked(*a, complement.order()?)
            }
        }
    }

    pub(crate) fn uses_u(&self) -> bool {
        match self {
            GroupSpec::Cyclic(_) => true,
            GroupSpec::Direct(l, r) => l.uses_u() || r.uses_u(),
            GroupSpec::Semidirect { complement, .. } => complement.uses_u(),
            _ => false,
        }
    }

    pub(crate) fn uses_v(&self) -> bool {
        match self {
            GroupSpec::TStar(_) => true,
            GroupSpec::Direct(l, r) => l.uses_v() || r.uses_v(),
            GroupSpec::Semidirect { complement, .. } => complement.uses_v(),
            _ => false,
        }
    }

    pub(crate) fn uses_w(&self) -> bool {
        match self {
            GroupSpec::OStar(_) => true,
            GroupSpec::Direct(l, r) => l.uses_w() || r.uses_w(),
            GroupSpec::Semidirect { complement, .. } => complement.uses_w(),
            _ => false,
        }
    }

    /// Checks orders, coprimality and that action images are units, without
    /// building the group. Compatibility of the images with the relations is
    /// left to [`GroupSpec::check_action_orders`].
    pub fn validate(&self) -> Result<()> {
        self.order()?;
        match self {
            GroupSpec::Direct(l, r) => {
                l.validate()?;
                r.validate()
            }
            GroupSpec::Semidirect {
                a,
                complement,
                action,
            } => {
                complement.validate()?;
                if *a != action.modulus {
                    return Err(Error::InvalidAction(format!(
                        "action targets modulus {} but the normal factor is C({a})",
                        action.modulus
                    )));
                }
                let h = complement.order()?;
                if gcd(*a, h) != 1 {
                    return Err(Error::NotCoprime(*a, h));
                }
                complement.action_images(action)?;
                for x in [action.u, action.v, action.w] {
                    if gcd(x, *a) != 1 {
                        return Err(Error::NonUnit { value: x, modulus: *a });
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Checks that every action image has an order the complement allows.
    pub fn check_action_orders(&self) -> Result<()> {
        match self {
            GroupSpec::Direct(l, r) => {
                l.check_action_orders()?;
                r.check_action_orders()
            }
            GroupSpec::Semidirect {
                complement, action, ..
            } => {
                complement.check_action_orders()?;
                complement.check_image_orders(action)
            }
            _ => Ok(()),
        }
    }

    fn check_image_orders(&self, action: &Action) -> Result<()> {
        let a = action.modulus;
        let need = |name: &str, x: u64, e: u64| {
            if pow_mod(x, e, a) == 1 % a {
                Ok(())
            } else {
                Err(Error::InvalidAction(format!(
                    "{name}={x} does not satisfy {name}^{e} = 1 mod {a} as required by {self}"
                )))
            }
        };
        match self {
            GroupSpec::Cyclic(m) => need("u", action.u, *m),
            GroupSpec::TStar(n) => need("v", action.v, three_pow(*n)?),
            GroupSpec::OStar(_) => need("w", action.w, 2),
            GroupSpec::Direct(l, r) => {
                l.check_image_orders(action)?;
                r.check_image_orders(action)
            }
            GroupSpec::Semidirect { complement, .. } => complement.check_image_orders(action),
            GroupSpec::Q8 | GroupSpec::Q16 => Ok(()),
        }
    }

    /// Unit images of the canonical generators under `action`.
    pub fn action_images(&self, action: &Action) -> Result<Vec<u64>> {
        let m = action.modulus.max(1);
        let one = 1 % m;
        for (name, value, used) in [
            ("u", action.u, self.uses_u()),
            ("v", action.v, self.uses_v()),
            ("w", action.w, self.uses_w()),
        ] {
            if !used && value != one {
                return Err(Error::InvalidAction(format!(
                    "{name}={value} given but {self} has no factor it acts through"
                )));
            }
        }
        let mut out = Vec::new();
        self.push_images(action, one, &mut out);
        Ok(out)
    }

    fn push_images(&self, action: &Action, one: u64, out: &mut Vec<u64>) {
        match self {
            GroupSpec::Cyclic(_) => out.push(action.u),
            GroupSpec::Q8 => out.extend([one; 2]),
            GroupSpec::Q16 => out.extend([one; 3]),
            GroupSpec::TStar(_) => out.extend([action.v, one, one]),
            GroupSpec::OStar(_) => out.extend([one, one, one, action.w]),
            GroupSpec::Direct(l, r) => {
                l.push_images(action, one, out);
                r.push_images(action, one, out);
            }
            GroupSpec::Semidirect { complement, .. } => {
                out.push(one);
                complement.push_images(action, one, out);
            }
        }
    }

    /// Whether the canonical printed form needs parentheses as an operand.
    fn is_product(&self) -> bool {
        matches!(self, GroupSpec::Direct(..) | GroupSpec::Semidirect { .. })
    }
}

fn three_pow(n: u32) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidSpec("tower height n must be at least 1".into()));
    }
    3u64.checked_pow(n)
        .ok_or_else(|| Error::OutOfRange(format!("3^{n} overflows u64")))
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(m) => write!(f, "C({m})"),
            GroupSpec::Q8 => write!(f, "Q8"),
            GroupSpec::Q16 => write!(f, "Q16"),
            GroupSpec::TStar(n) => write!(f, "T*({n})"),
            GroupSpec::OStar(n) => write!(f, "O*({n})"),
            GroupSpec::Direct(l, r) => {
                if l.is_product() {
                    write!(f, "({l})")?;
                } else {
                    write!(f, "{l}")?;
                }
                write!(f, "x")?;
                if matches!(**r, GroupSpec::Semidirect { .. }) {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
            GroupSpec::Semidirect {
                a,
                complement,
                action,
            } => {
                if complement.is_product() {
                    write!(f, "C({a})x({complement})")?;
                } else {
                    write!(f, "C({a})x{complement}")?;
                }
                let mut parts = Vec::new();
                if complement.uses_u() {
                    parts.push(format!("u={}", action.u));
                }
                if complement.uses_v() {
                    parts.push(format!("v={}", action.v));
                }
                if complement.uses_w() {
                    parts.push(format!("w={}", action.w));
                }
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

/// A finite abelian group as invariant factors `d1 | d2 | ...`, each at
/// least 2. A leading 0 stands for a free summand `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct AbelianInvariants(Vec<u64>);

impl AbelianInvariants {
    pub fn trivial() -> Self {
        Self(Vec::new())
    }

    pub fn integers() -> Self {
        Self(vec![0])
    }

    pub fn cyclic(m: u64) -> Self {
        if m <= 1 {
            Self::trivial()
        } else {
            Self(vec![m])
        }
    }

    /// Invariant factors of the direct sum of the given cyclic groups.
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let mut free = 0;
        let mut primary: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
        for &d in orders {
            if d == 0 {
                free += 1;
                continue;
            }
            for (p, e) in factorize(d) {
                primary.entry(p).or_default().push(p.pow(e));
            }
        }
        let len = primary.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for mut powers in primary.into_values() {
            powers.sort_unstable_by(|x, y| y.cmp(x));
            for (slot, q) in powers.into_iter().enumerate() {
                factors[len - 1 - slot] *= q;
            }
        }
        let mut out = vec![0; free];
        out.extend(factors.into_iter().filter(|&d| d > 1));
        Self(out)
    }

    pub fn factors(&self) -> &[u64] {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    /// Cardinality, or `None` for an infinite group.
    pub fn order(&self) -> Option<u64> {
        if self.0.contains(&0) {
            None
        } else {
            Some(self.0.iter().product())
        }
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&d| if d == 0 { "Z".to_string() } else { format!("Z/{d}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A word in the canonical generators: `(generator index, exponent)` pairs.
pub type Word = Vec<(usize, i64)>;

/// A named relation asserting that all listed words are equal; the empty
/// word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub name: String,
    pub sides: Vec<Word>,
}

impl Relation {
    fn new(name: impl Into<String>, sides: Vec<Word>) -> Self {
        Self {
            name: name.into(),
            sides,
        }
    }

    /// Largest generator index mentioned.
    pub fn max_generator(&self) -> usize {
        self.sides
            .iter()
            .flatten()
            .map(|&(g, _)| g)
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupElement {
    group: u64,
    index: usize,
}

impl GroupElement {
    pub fn index(&self) -> usize {
        self.index
    }
}

/// Human-readable normal form of an element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum NormalForm {
    Cyclic { k: u64, m: u64 },
    Quaternionic { x: u64, i: u8, j: u8, d: u8 },
    Pair(Box<NormalForm>, Box<NormalForm>),
    Semidirect { t: u64, h: Box<NormalForm> },
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalForm::Cyclic { k, .. } => write!(f, "g^{k}"),
            NormalForm::Quaternionic { x, i, j, d } => {
                let mut parts = Vec::new();
                for (sym, e) in [("X", *x), ("P", *i as u64), ("Q", *j as u64), ("R", *d as u64)] {
                    match e {
                        0 => {}
                        1 => parts.push(sym.to_string()),
                        _ => parts.push(format!("{sym}^{e}")),
                    }
                }
                if parts.is_empty() {
                    write!(f, "1")
                } else {
                    write!(f, "{}", parts.join(""))
                }
            }
            NormalForm::Pair(l, r) => write!(f, "({l}, {r})"),
            NormalForm::Semidirect { t, h } => write!(f, "(t^{t}, {h})"),
        }
    }
}

/// Q8 elements `P^i Q^j` are indexed `2i + j`.
fn q8_mul(a: usize, b: usize) -> usize {
    let (i1, j1) = (a >> 1, a & 1);
    let (i2, j2) = (b >> 1, b & 1);
    let mut i = if j1 == 1 { i1 + 4 - i2 } else { i1 + i2 };
    let mut j = j1 + j2;
    if j == 2 {
        i += 2;
        j = 0;
    }
    ((i % 4) << 1) | j
}

const Q8_P: usize = 2;
const Q8_Q: usize = 1;
const Q8_P2: usize = 4;

fn q8_apply(images: [usize; 2], q: usize) -> usize {
    let (i, j) = (q >> 1, q & 1);
    let mut out = 0;
    for _ in 0..i {
        out = q8_mul(out, images[0]);
    }
    if j == 1 {
        out = q8_mul(out, images[1]);
    }
    out
}

/// Elements `X^x P^i Q^j R^d` of `T*(n)` (no `R`) or `O*(n)`.
#[derive(Debug, Clone)]
struct Quaternionic {
    three_pow: u64,
    with_r: bool,
    /// `theta[e][q]` is `X^e q X^-e`.
    theta: [[usize; 8]; 3],
    /// `sigma[q]` is `R q R^-1`.
    sigma: [usize; 8],
}

impl Quaternionic {
    fn new(three_pow: u64, with_r: bool) -> Self {
        let theta1: [usize; 8] = std::array::from_fn(|q| q8_apply([Q8_Q, q8_mul(Q8_P, Q8_Q)], q));
        let theta2: [usize; 8] = std::array::from_fn(|q| theta1[theta1[q]]);
        let sigma: [usize; 8] =
            std::array::from_fn(|q| q8_apply([q8_mul(Q8_Q, Q8_P), q8_mul(Q8_P2, Q8_Q)], q));
        Self {
            three_pow,
            with_r,
            theta: [std::array::from_fn(|q| q), theta1, theta2],
            sigma,
        }
    }

    fn r_count(&self) -> usize {
        if self.with_r {
            2
        } else {
            1
        }
    }

    fn split(&self, idx: usize) -> (u64, usize, usize) {
        let rc = self.r_count();
        let d = idx % rc;
        let rest = idx / rc;
        ((rest / 8) as u64, rest % 8, d)
    }

    fn join(&self, x: u64, q: usize, d: usize) -> usize {
        ((x as usize) * 8 + q) * self.r_count() + d
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        let (x1, q1, d1) = self.split(a);
        let (x2, q2, d2) = self.split(b);
        let n = self.three_pow;
        let (y, r) = if d1 == 1 {
            ((n - x2) % n, self.sigma[q2])
        } else {
            (x2, q2)
        };
        let e = ((3 - y % 3) % 3) as usize;
        let mut q = q8_mul(self.theta[e][q1], r);
        let x = (x1 + y) % n;
        let mut d = d1 + d2;
        if d == 2 {
            q = q8_mul(q, Q8_P2);
            d = 0;
        }
        self.join(x, q, d)
    }

    fn inv(&self, a: usize) -> usize {
        let (x, _, d) = self.split(a);
        let n = self.three_pow;
        let xi = if d == 1 { x } else { (n - x) % n };
        (0..8)
            .map(|q| self.join(xi, q, d))
            .find(|&b| self.mul(a, b) == 0)
            .expect("every element has an inverse")
    }

    fn normal_form(&self, idx: usize) -> NormalForm {
        let (x, q, d) = self.split(idx);
        NormalForm::Quaternionic {
            x,
            i: (q >> 1) as u8,
            j: (q & 1) as u8,
            d: d as u8,
        }
    }
}

#[derive(Debug, Clone)]
enum Engine {
    Cyclic(u64),
    Quaternionic(Quaternionic),
    Direct(Box<FiniteGroup>, Box<FiniteGroup>),
    /// `(t, h)` indexed `t * |H| + h`; `chi[h]` is the unit by which `h` acts.
    Semidirect {
        a: u64,
        complement: Box<FiniteGroup>,
        chi: Vec<u64>,
    },
}

/// A finite group with elements `0..order`, identity 0.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    id: u64,
    spec: GroupSpec,
    order: usize,
    engine: Engine,
    table: Option<Vec<u32>>,
    generators: Vec<usize>,
    generator_names: Vec<String>,
    relations: Vec<Relation>,
}

/// Upper bound on orders `build` will accept.
pub const BUILD_LIMIT: u64 = 1 << 26;

impl FiniteGroup {
    pub fn build(spec: &GroupSpec) -> Result<Self> {
        let order = spec.order()?;
        if order > BUILD_LIMIT {
            return Err(Error::TooLarge {
                order,
                bound: BUILD_LIMIT,
            });
        }
        if let GroupSpec::Semidirect {
            complement, action, ..
        } = spec
        {
            complement.check_image_orders(action)?;
        }
        let (engine, generators, names, relations) = match spec {
            GroupSpec::Cyclic(m) => (
                Engine::Cyclic(*m),
                if *m == 1 { vec![0] } else { vec![1] },
                vec!["g".to_string()],
                vec![Relation::new(
                    format!("g^{m}=1"),
                    vec![vec![(0, *m as i64)], vec![]],
                )],
            ),
            GroupSpec::Q8 => quaternionic_parts(1, false, 0),
            GroupSpec::Q16 => quaternionic_parts(1, true, 0),
            GroupSpec::TStar(n) => quaternionic_parts(three_pow(*n)?, false, *n),
            GroupSpec::OStar(n) => quaternionic_parts(three_pow(*n)?, true, *n),
            GroupSpec::Direct(l, r) => {
                let left = FiniteGroup::build(l)?;
                let right = FiniteGroup::build(r)?;
                direct_parts(left, right)
            }
            GroupSpec::Semidirect {
                a,
                complement,
                action,
            } => {
                if *a != action.modulus {
                    return Err(Error::InvalidAction(format!(
                        "action targets modulus {} but the normal factor is C({a})",
                        action.modulus
                    )));
                }
                let h = FiniteGroup::build(complement)?;
                if gcd(*a, h.order() as u64) != 1 {
                    return Err(Error::NotCoprime(*a, h.order() as u64));
                }
                let images = complement.action_images(action)?;
                let chi = Character::new(&h, *a, &images)?;
                semidirect_parts(*a, h, chi)
            }
        };
        let mut group = FiniteGroup {
            id: NEXT_GROUP_ID.fetch_add(1, Ordering::Relaxed),
            spec: spec.clone(),
            order: order as usize,
            engine,
            table: None,
            generators,
            generator_names: names,
            relations,
        };
        if group.order <= TABLE_LIMIT {
            let n = group.order;
            let table: Vec<u32> = (0..n * n)
                .into_par_iter()
                .map(|k| group.engine_mul(k / n, k % n) as u32)
                .collect();
            group.table = Some(table);
        }
        Ok(group)
    }

    /// `A x| H` for a character `chi` of `H` that need not come from an
    /// [`Action`].
    pub fn semidirect_from_character(h: &FiniteGroup, chi: &Character) -> Result<Self> {
        let a = chi.modulus();
        if gcd(a, h.order() as u64) != 1 {
            return Err(Error::NotCoprime(a, h.order() as u64));
        }
        if chi.values.len() != h.order() {
            return Err(Error::MixedParents);
        }
        let spec = GroupSpec::Semidirect {
            a,
            complement: Box::new(h.spec.clone()),
            action: Action::trivial(a),
        };
        let (engine, generators, names, relations) = semidirect_parts(a, h.clone(), chi.clone());
        let order = a as usize * h.order();
        let mut group = FiniteGroup {
            id: NEXT_GROUP_ID.fetch_add(1, Ordering::Relaxed),
            spec,
            order,
            engine,
            table: None,
            generators,
            generator_names: names,
            relations,
        };
        if order <= TABLE_LIMIT {
            let table: Vec<u32> = (0..order * order)
                .into_par_iter()
                .map(|k| group.engine_mul(k / order, k % order) as u32)
                .collect();
            group.table = Some(table);
        }
        Ok(group)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn generator(&self, name: &str) -> Option<usize> {
        self.generator_names
            .iter()
            .position(|n| n == name)
            .map(|i| self.generators[i])
    }

    fn engine_mul(&self, a: usize, b: usize) -> usize {
        match &self.engine {
            Engine::Cyclic(m) => ((a as u64 + b as u64) % m) as usize,
            Engine::Quaternionic(q) => q.mul(a, b),
            Engine::Direct(l, r) => {
                let rn = r.order;
                l.mul(a / rn, b / rn) * rn + r.mul(a % rn, b % rn)
            }
            Engine::Semidirect { a: m, complement, chi } => {
                let hn = complement.order;
                let (t1, h1) = ((a / hn) as u64, a % hn);
                let (t2, h2) = ((b / hn) as u64, b % hn);
                let t = (t1 + mul_mod(chi[h1], t2, *m)) % m;
                t as usize * hn + complement.mul(h1, h2)
            }
        }
    }

    /// Product of element indices.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order + b] as usize,
            None => self.engine_mul(a, b),
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        match &self.engine {
            Engine::Cyclic(m) => ((m - a as u64) % m) as usize,
            Engine::Quaternionic(q) => q.inv(a),
            Engine::Direct(l, r) => {
                let rn = r.order;
                l.inv(a / rn) * rn + r.inv(a % rn)
            }
            Engine::Semidirect { a: m, complement, chi } => {
                let hn = complement.order;
                let (t, h) = ((a / hn) as u64, a % hn);
                let hi = complement.inv(h);
                let ti = (m - mul_mod(chi[hi], t, *m)) % m;
                ti as usize * hn + hi
            }
        }
    }

    pub fn pow(&self, a: usize, e: i64) -> usize {
        let mut base = if e < 0 { self.inv(a) } else { a };
        let mut e = e.unsigned_abs();
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn order_of(&self, a: usize) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Value of `word` with generator `i` replaced by `images[i]`.
    pub fn eval_word(&self, word: &[(usize, i64)], images: &[usize]) -> usize {
        word.iter()
            .fold(0, |acc, &(g, e)| self.mul(acc, self.pow(images[g], e)))
    }

    /// Whether the assignment `images` satisfies every relation.
    pub fn satisfies_relations(&self, images: &[usize]) -> bool {
        self.relations
            .iter()
            .all(|rel| relation_holds(rel, |w| self.eval_word(w, images)))
    }

    /// Elements of the subgroup generated by `gens`, sorted.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut out = vec![0usize];
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter()
            .all(|&x| g.iter().all(|&y| self.mul(x, y) == self.mul(y, x)))
    }

    fn commutes_with_generators(&self, x: usize) -> bool {
        self.generators
            .iter()
            .all(|&g| self.mul(x, g) == self.mul(g, x))
    }

    /// Central elements (commuting with every generator, hence with every
    /// element) and their invariant factors.
    pub fn center(&self) -> (Vec<usize>, AbelianInvariants) {
        let elements: Vec<usize> = (0..self.order)
            .into_par_iter()
            .filter(|&x| self.commutes_with_generators(x))
            .collect();
        let inv = self.quotient_invariants(&elements, &[0]);
        (elements, inv)
    }

    /// Normal closure of the commutators of the generators.
    pub fn derived_subgroup(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        for &x in &self.generators {
            for &y in &self.generators {
                let c = self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)));
                if c != 0 {
                    gens.push(c);
                }
            }
        }
        self.normal_closure(gens)
    }

    pub fn normal_closure(&self, mut gens: Vec<usize>) -> Vec<usize> {
        loop {
            let sub = self.generated_subgroup(&gens);
            let mut member = vec![false; self.order];
            for &s in &sub {
                member[s] = true;
            }
            let extra: Vec<usize> = gens
                .iter()
                .flat_map(|&n| self.generators.iter().map(move |&g| (g, n)))
                .map(|(g, n)| self.conj(g, n))
                .filter(|&c| !member[c])
                .collect();
            if extra.is_empty() {
                return sub;
            }
            gens.extend(extra);
            gens.sort_unstable();
            gens.dedup();
        }
    }

    /// Invariant factors of the abelianization `G / [G, G]`.
    pub fn abelianization(&self) -> AbelianInvariants {
        let derived = self.derived_subgroup();
        let all: Vec<usize> = (0..self.order).collect();
        self.quotient_invariants(&all, &derived)
    }

    /// Invariant factors of `A / N` for an abelian quotient of subgroups
    /// `N <= A`, from the counts `|{x in A : x^(p^k) in N}| / |N|`.
    fn quotient_invariants(&self, a: &[usize], n: &[usize]) -> AbelianInvariants {
        let index = (a.len() / n.len()) as u64;
        let mut in_n = vec![false; self.order];
        for &x in n {
            in_n[x] = true;
        }
        let mut cyclic = Vec::new();
        for (p, _) in factorize(index) {
            let mut prev_log = 0u32;
            let mut ranks = Vec::new();
            let mut power = 1u64;
            loop {
                power *= p;
                let count = a
                    .par_iter()
                    .filter(|&&x| in_n[self.pow(x, power as i64)])
                    .count() as u64
                    / n.len() as u64;
                let log = count.ilog(p);
                if log == prev_log {
                    break;
                }
                ranks.push(log - prev_log);
                prev_log = log;
            }
            // ranks[k] = number of cyclic p-factors of order at least p^(k+1).
            for (k, &r) in ranks.iter().enumerate() {
                let next = ranks.get(k + 1).copied().unwrap_or(0);
                for _ in 0..(r - next) {
                    cyclic.push(p.pow(k as u32 + 1));
                }
            }
        }
        AbelianInvariants::from_cyclic_orders(&cyclic)
    }

    pub fn identity(&self) -> GroupElement {
        self.element(0)
    }

    /// Element handle for an index; panics when out of range.
    pub fn element(&self, index: usize) -> GroupElement {
        assert!(index < self.order, "element index out of range");
        GroupElement {
            group: self.id,
            index,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|i| self.element(i))
    }

    fn own(&self, g: &GroupElement) -> Result<usize> {
        if g.group == self.id {
            Ok(g.index)
        } else {
            Err(Error::MixedParents)
        }
    }

    pub fn compose(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        Ok(self.element(self.mul(self.own(g)?, self.own(h)?)))
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement> {
        Ok(self.element(self.inv(self.own(g)?)))
    }

    pub fn element_order(&self, g: &GroupElement) -> Result<u64> {
        Ok(self.order_of(self.own(g)?))
    }

    pub fn normal_form(&self, g: &GroupElement) -> Result<NormalForm> {
        Ok(self.normal_form_of(self.own(g)?))
    }

    pub fn normal_form_of(&self, idx: usize) -> NormalForm {
        match &self.engine {
            Engine::Cyclic(m) => NormalForm::Cyclic {
                k: idx as u64,
                m: *m,
            },
            Engine::Quaternionic(q) => q.normal_form(idx),
            Engine::Direct(l, r) => {
                let rn = r.order;
                NormalForm::Pair(
                    Box::new(l.normal_form_of(idx / rn)),
                    Box::new(r.normal_form_of(idx % rn)),
                )
            }
            Engine::Semidirect { complement, .. } => {
                let hn = complement.order;
                NormalForm::Semidirect {
                    t: (idx / hn) as u64,
                    h: Box::new(complement.normal_form_of(idx % hn)),
                }
            }
        }
    }

    /// Factors of a direct product.
    pub fn direct_factors(&self) -> Option<(&FiniteGroup, &FiniteGroup)> {
        match &self.engine {
            Engine::Direct(l, r) => Some((l, r)),
            _ => None,
        }
    }

    /// Modulus, complement and character of a semidirect product.
    pub fn semidirect_parts(&self) -> Option<(u64, &FiniteGroup, &[u64])> {
        match &self.engine {
            Engine::Semidirect { a, complement, chi } => Some((*a, complement, chi)),
            _ => None,
        }
    }

    /// Index of `(l, r)` in a direct product.
    pub fn pair(&self, l: usize, r: usize) -> usize {
        match &self.engine {
            Engine::Direct(_, right) => l * right.order + r,
            _ => panic!("not a direct product"),
        }
    }

    /// Checks every relation and that the generators produce exactly the
    /// predicted number of elements.
    pub fn verify_presentation(&self) -> PresentationReport {
        self.verify_presentation_with(|a, b| self.mul(a, b))
    }

    /// As [`verify_presentation`](Self::verify_presentation) with a supplied
    /// multiplication, e.g. a deliberately damaged table.
    pub fn verify_presentation_with(&self, mul: impl Fn(usize, usize) -> usize) -> PresentationReport {
        let inverse = |a: usize| (0..self.order).find(|&b| mul(a, b) == 0);
        let eval = |word: &[(usize, i64)]| -> Option<usize> {
            let mut acc = 0;
            for &(g, e) in word {
                let mut base = self.generators[g];
                if e < 0 {
                    base = inverse(base)?;
                }
                for _ in 0..e.unsigned_abs() {
                    acc = mul(acc, base);
                }
            }
            Some(acc)
        };
        let relations: Vec<RelationCheck> = self
            .relations
            .iter()
            .map(|rel| {
                let values: Vec<Option<usize>> = rel.sides.iter().map(|w| eval(w)).collect();
                let holds = values[0].is_some() && values.iter().all(|v| *v == values[0]);
                RelationCheck {
                    relation: rel.name.clone(),
                    holds,
                }
            })
            .collect();
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut stack = vec![0usize];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &g in &self.generators {
                let y = mul(x, g);
                if y < self.order && !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        let first_failure = relations
            .iter()
            .find(|r| !r.holds)
            .map(|r| r.relation.clone());
        PresentationReport {
            group: self.spec.to_string(),
            relations,
            expected_order: self.spec.order().unwrap_or(0),
            enumerated_order: count as u64,
            first_failure,
        }
    }

    /// Exhaustive check of associativity, identity and inverses.
    pub fn check_group_axioms(&self) -> Result<()> {
        let n = self.order;
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(Error::Presentation(format!("identity law fails at {a}")));
            }
            let ai = self.inv(a);
            if self.mul(a, ai) != 0 || self.mul(ai, a) != 0 {
                return Err(Error::Presentation(format!("inverse law fails at {a}")));
            }
        }
        let bad = (0..n * n).into_par_iter().find_any(|&k| {
            let (a, b) = (k / n, k % n);
            let ab = self.mul(a, b);
            (0..n).any(|c| self.mul(ab, c) != self.mul(a, self.mul(b, c)))
        });
        match bad {
            Some(k) => Err(Error::Presentation(format!(
                "associativity fails for ({}, {}, _)",
                k / n,
                k % n
            ))),
            None => Ok(()),
        }
    }

    /// Associativity on the given triples.
    pub fn check_associativity_on(&self, triples: &[(usize, usize, usize)]) -> Result<()> {
        for &(a, b, c) in triples {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(Error::Presentation(format!(
                    "associativity fails for ({a}, {b}, {c})"
                )));
            }
        }
        Ok(())
    }

    /// The multiplication table as a flat row-major vector.
    pub fn table(&self) -> Vec<usize> {
        let n = self.order;
        (0..n * n).map(|k| self.mul(k / n, k % n)).collect()
    }
}

fn relation_holds(rel: &Relation, mut eval: impl FnMut(&[(usize, i64)]) -> usize) -> bool {
    let first = eval(&rel.sides[0]);
    rel.sides[1..].iter().all(|w| eval(w) == first)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PresentationReport {
    pub group: String,
    pub relations: Vec<RelationCheck>,
    pub expected_order: u64,
    pub enumerated_order: u64,
    pub first_failure: Option<String>,
}

impl PresentationReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none() && self.expected_order == self.enumerated_order
    }
}

type Parts = (Engine, Vec<usize>, Vec<String>, Vec<Relation>);

fn quaternionic_parts(three_pow: u64, with_r: bool, n: u32) -> Parts {
    let engine = Quaternionic::new(three_pow, with_r);
    let p = engine.join(0, Q8_P, 0);
    let q = engine.join(0, Q8_Q, 0);
    // Generator slots: X (tower only), P, Q, R (octahedral only).
    let tower = n > 0;
    let mut gens = Vec::new();
    let mut names = Vec::new();
    if tower {
        gens.push(engine.join(1 % three_pow, 0, 0));
        names.push("X".to_string());
    }
    gens.push(p);
    names.push("P".to_string());
    gens.push(q);
    names.push("Q".to_string());
    if with_r {
        gens.push(engine.join(0, 0, 1));
        names.push("R".to_string());
    }
    let idx = |name: &str| names.iter().position(|n| n == name).unwrap();
    let (pi, qi) = (idx("P"), idx("Q"));
    let mut rels = Vec::new();
    if tower {
        let xi = idx("X");
        rels.push(Relation::new(
            format!("X^{{3^{n}}}=P^4=1"),
            vec![vec![(xi, three_pow as i64)], vec![(pi, 4)], vec![]],
        ));
    } else {
        rels.push(Relation::new("P^4=1", vec![vec![(pi, 4)], vec![]]));
    }
    if with_r {
        let ri = idx("R");
        rels.push(Relation::new(
            "P^2=Q^2=R^2",
            vec![vec![(pi, 2)], vec![(qi, 2)], vec![(ri, 2)]],
        ));
    } else {
        rels.push(Relation::new("P^2=Q^2", vec![vec![(pi, 2)], vec![(qi, 2)]]));
    }
    rels.push(Relation::new(
        "PQP^{-1}=Q^{-1}",
        vec![vec![(pi, 1), (qi, 1), (pi, -1)], vec![(qi, -1)]],
    ));
    if tower {
        let xi = idx("X");
        rels.push(Relation::new(
            "XPX^{-1}=Q",
            vec![vec![(xi, 1), (pi, 1), (xi, -1)], vec![(qi, 1)]],
        ));
        rels.push(Relation::new(
            "XQX^{-1}=PQ",
            vec![vec![(xi, 1), (qi, 1), (xi, -1)], vec![(pi, 1), (qi, 1)]],
        ));
    }
    if with_r {
        let ri = idx("R");
        if tower {
            let xi = idx("X");
            rels.push(Relation::new(
                "RXR^{-1}=X^{-1}",
                vec![vec![(ri, 1), (xi, 1), (ri, -1)], vec![(xi, -1)]],
            ));
        }
        rels.push(Relation::new(
            "RPR^{-1}=QP",
            vec![vec![(ri, 1), (pi, 1), (ri, -1)], vec![(qi, 1), (pi, 1)]],
        ));
        rels.push(Relation::new(
            "RQR^{-1}=Q^{-1}",
            vec![vec![(ri, 1), (qi, 1), (ri, -1)], vec![(qi, -1)]],
        ));
    }
    (Engine::Quaternionic(engine), gens, names, rels)
}

fn fresh_name(name: &str, taken: &[String]) -> String {
    let mut candidate = name.to_string();
    while taken.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

fn shift_relation(rel: &Relation, offset: usize, rename: &[(String, String)]) -> Relation {
    let mut name = rel.name.clone();
    for (old, new) in rename {
        if old != new {
            name = name.replace(old.as_str(), new.as_str());
        }
    }
    Relation {
        name,
        sides: rel
            .sides
            .iter()
            .map(|w| w.iter().map(|&(g, e)| (g + offset, e)).collect())
            .collect(),
    }
}

fn direct_parts(left: FiniteGroup, right: FiniteGroup) -> Parts {
    let rn = right.order;
    let mut gens: Vec<usize> = left.generators.iter().map(|&g| g * rn).collect();
    gens.extend(right.generators.iter().copied());
    let mut names = left.generator_names.clone();
    let mut rename = Vec::new();
    for n in &right.generator_names {
        let fresh = fresh_name(n, &names);
        rename.push((n.clone(), fresh.clone()));
        names.push(fresh);
    }
    let offset = left.generators.len();
    let mut rels = left.relations.clone();
    rels.extend(right.relations.iter().map(|r| shift_relation(r, offset, &rename)));
    for i in 0..offset {
        for j in 0..right.generators.len() {
            let (x, y) = (&names[i], &names[offset + j]);
            rels.push(Relation::new(
                format!("{x}{y}={y}{x}"),
                vec![
                    vec![(i, 1), (offset + j, 1)],
                    vec![(offset + j, 1), (i, 1)],
                ],
            ));
        }
    }
    (
        Engine::Direct(Box::new(left), Box::new(right)),
        gens,
        names,
        rels,
    )
}

fn semidirect_parts(a: u64, h: FiniteGroup, chi: Character) -> Parts {
    let hn = h.order;
    let mut gens = vec![if a == 1 { 0 } else { hn }];
    gens.extend(h.generators.iter().copied());
    let mut names = vec![fresh_name("t", &h.generator_names)];
    names.extend(h.generator_names.iter().cloned());
    let t = names[0].clone();
    let mut rels = vec![Relation::new(
        format!("{t}^{a}=1"),
        vec![vec![(0, a as i64)], vec![]],
    )];
    rels.extend(h.relations.iter().map(|r| shift_relation(r, 1, &[])));
    for (i, &img) in chi.images.iter().enumerate() {
        let g = &names[i + 1];
        rels.push(Relation::new(
            format!("{g}{t}{g}^{{-1}}={t}^{img}"),
            vec![vec![(i + 1, 1), (0, 1), (i + 1, -1)], vec![(0, img as i64)]],
        ));
    }
    (
        Engine::Semidirect {
            a,
            complement: Box::new(h),
            chi: chi.values,
        },
        gens,
        names,
        rels,
    )
}

/// A homomorphism `H -> (Z/modulus)*`, stored as its value on every element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Character {
    modulus: u64,
    images: Vec<u64>,
    values: Vec<u64>,
}

impl Character {
    /// Extends unit images of the canonical generators to all of `group`,
    /// rejecting images that do not define a homomorphism.
    pub fn new(group: &FiniteGroup, modulus: u64, images: &[u64]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        if images.len() != group.generators.len() {
            return Err(Error::InvalidAction(format!(
                "{} generator images for {} generators",
                images.len(),
                group.generators.len()
            )));
        }
        let images: Vec<u64> = images.iter().map(|&u| u % modulus).collect();
        for &u in &images {
            if gcd(u, modulus) != 1 {
                return Err(Error::NonUnit { value: u, modulus });
            }
        }
        let mut values = vec![u64::MAX; group.order];
        values[0] = 1 % modulus;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (gi, &g) in group.generators.iter().enumerate() {
                let y = group.mul(x, g);
                let val = mul_mod(values[x], images[gi], modulus);
                if values[y] == u64::MAX {
                    values[y] = val;
                    queue.push_back(y);
                } else if values[y] != val {
                    let name = &group.generator_names[gi];
                    return Err(Error::InvalidAction(format!(
                        "images {:?} violate a relation of {} (through generator {name})",
                        images, group.spec
                    )));
                }
            }
        }
        Ok(Self {
            modulus,
            images,
            values,
        })
    }

    pub fn from_action(group: &FiniteGroup, action: &Action) -> Result<Self> {
        let images = group.spec.action_images(action)?;
        Self::new(group, action.modulus, &images)
    }

    pub fn trivial(group: &FiniteGroup, modulus: u64) -> Result<Self> {
        Self::new(group, modulus, &vec![1; group.generators.len()])
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn images(&self) -> &[u64] {
        &self.images
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn value(&self, h: usize) -> u64 {
        self.values[h]
    }

    pub fn is_trivial(&self) -> bool {
        let one = 1 % self.modulus;
        self.images.iter().all(|&u| u == one)
    }

    /// The character `chi(phi(h))` for an element map `phi`.
    pub fn compose_map(&self, map: &[usize]) -> Vec<u64> {
        map.iter().map(|&x| self.values[x]).collect()
    }

    /// Lcm of the multiplicative orders of the generator images.
    pub fn ell(&self) -> u64 {
        self.images
            .iter()
            .map(|&u| crate::modular::multiplicative_order(u, self.modulus).unwrap_or(1))
            .fold(1, crate::modular::lcm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(g: &FiniteGroup, name: &str) -> usize {
        g.generator(name).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(FiniteGroup::build(&GroupSpec::TStar(1)).unwrap().order(), 24);
        assert_eq!(FiniteGroup::build(&GroupSpec::OStar(2)).unwrap().order(), 144);
        assert_eq!(FiniteGroup::build(&GroupSpec::Cyclic(1)).unwrap().order(), 1);
        assert!(FiniteGroup::build(&GroupSpec::TStar(0)).is_err());
    }

    #[test]
    fn tower_relations_by_hand() {
        let t = FiniteGroup::build(&GroupSpec::TStar(2)).unwrap();
        let (x, p, q) = (gen(&t, "X"), gen(&t, "P"), gen(&t, "Q"));
        assert_eq!(t.mul(x, p), t.mul(q, x));
        assert_eq!(t.order_of(x), 9);
        assert_eq!(t.order_of(0), 1);
        let o = FiniteGroup::build(&GroupSpec::OStar(2)).unwrap();
        let r = gen(&o, "R");
        assert_eq!(o.mul(r, r), o.pow(gen(&o, "P"), 2));
        assert_eq!(o.order_of(r), 4);
        assert_eq!(o.inv(0), 0);
    }

    #[test]
    fn normal_form_display() {
        let o = FiniteGroup::build(&GroupSpec::OStar(1)).unwrap();
        let e = o.element(gen(&o, "R"));
        assert_eq!(o.normal_form(&e).unwrap().to_string(), "R");
        let xp = o.mul(gen(&o, "X"), gen(&o, "P"));
        assert_eq!(o.normal_form_of(xp).to_string(), "XP");
        assert_eq!(o.normal_form_of(0).to_string(), "1");
    }

    #[test]
    fn mixed_parents_rejected() {
        let a = FiniteGroup::build(&GroupSpec::Q8).unwrap();
        let b = FiniteGroup::build(&GroupSpec::Q8).unwrap();
        assert_eq!(
            a.compose(&a.identity(), &b.identity()),
            Err(Error::MixedParents)
        );
    }

    #[test]
    fn invariant_factor_normalisation() {
        assert_eq!(
            AbelianInvariants::from_cyclic_orders(&[2, 3]).factors(),
            &[6]
        );
        assert_eq!(
            AbelianInvariants::from_cyclic_orders(&[4, 2, 3, 9]).factors(),
            &[6, 36]
        );
        assert_eq!(AbelianInvariants::from_cyclic_orders(&[1]).factors(), &[] as &[u64]);
        assert_eq!(AbelianInvariants::from_cyclic_orders(&[0, 2]).to_string(), "Z + Z/2");
    }

    #[test]
    fn structure_examples() {
        let t2 = FiniteGroup::build(&GroupSpec::TStar(2)).unwrap();
        assert_eq!(t2.center().1.factors(), &[6]);
        let o1 = FiniteGroup::build(&GroupSpec::OStar(1)).unwrap();
        assert_eq!(o1.abelianization().factors(), &[2]);
        let c = FiniteGroup::build(&GroupSpec::Cyclic(12)).unwrap();
        assert_eq!(c.abelianization().factors(), &[12]);
        let q8 = FiniteGroup::build(&GroupSpec::Q8).unwrap();
        assert_eq!(q8.abelianization().factors(), &[2, 2]);
    }

    #[test]
    fn action_images_and_validation() {
        let spec = GroupSpec::direct(GroupSpec::Cyclic(7), GroupSpec::TStar(3));
        let act = Action::new(5, 1, 1, 1);
        assert_eq!(spec.action_images(&act).unwrap(), vec![1, 1, 1, 1]);
        assert!(GroupSpec::Q8.action_images(&Action::new(5, 2, 1, 1)).is_err());
        // 2 has order 4 mod 5, which does not divide 3.
        let bad = GroupSpec::semidirect(GroupSpec::Cyclic(3), Action::new(5, 2, 1, 1));
        assert!(matches!(FiniteGroup::build(&bad), Err(Error::InvalidAction(_))));
        let good = GroupSpec::semidirect(GroupSpec::Cyclic(4), Action::new(5, 2, 1, 1));
        assert_eq!(FiniteGroup::build(&good).unwrap().order(), 20);
        let not_coprime = GroupSpec::semidirect(GroupSpec::Cyclic(5), Action::new(5, 1, 1, 1));
        assert!(matches!(FiniteGroup::build(&not_coprime), Err(Error::NotCoprime(5, 5))));
    }

    #[test]
    fn spec_display() {
        let spec = GroupSpec::semidirect(
            GroupSpec::direct(GroupSpec::Cyclic(7), GroupSpec::TStar(3)),
            Action::new(5, 2, 1, 1),
        );
        assert_eq!(spec.to_string(), "C(5)x(C(7)xT*(3))[u=2,v=1]");
        let nested = GroupSpec::direct(spec.clone(), GroupSpec::Q8);
        assert_eq!(nested.to_string(), "(C(5)x(C(7)xT*(3))[u=2,v=1])xQ8");
    }

    #[test]
    fn corrupted_table_is_caught() {
        let q8 = FiniteGroup::build(&GroupSpec::Q8).unwrap();
        let (p, q) = (gen(&q8, "P"), gen(&q8, "Q"));
        let report = q8.verify_presentation_with(|a, b| {
            if (a, b) == (p, q) {
                q8.mul(q, p)
            } else {
                q8.mul(a, b)
            }
        });
        assert_eq!(report.first_failure.as_deref(), Some("PQP^{-1}=Q^{-1}"));
    }
}
