//! Automorphism enumeration by generator images, action-fixing subgroups,
//! inner automorphisms and the unit by which an automorphism acts on the top
//! cohomology of each periodic factor.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{Character, FiniteGroup, GroupSpec};
use crate::modular::{multiplicative_order, pow_mod};

pub const DEFAULT_BOUND: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Automorphism {
    images: Vec<usize>,
    #[serde(skip)]
    map: Vec<usize>,
}

impl Automorphism {
    /// Builds an automorphism from generator images, checking every relation
    /// and that the completed map is a bijective homomorphism.
    pub fn from_images(group: &FiniteGroup, images: Vec<usize>) -> Result<Self> {
        if images.len() != group.generators().len() || images.iter().any(|&x| x >= group.order()) {
            return Err(Error::Presentation("wrong number of generator images".into()));
        }
        if !group.satisfies_relations(&images) {
            return Err(Error::Presentation(
                "generator images violate a relation".into(),
            ));
        }
        let map = complete_map(group, &images).ok_or_else(|| {
            Error::Presentation(format!(
                "images satisfy every relation of {} but do not extend to an automorphism",
                group.spec()
            ))
        })?;
        Ok(Self { images, map })
    }

    pub fn identity(group: &FiniteGroup) -> Self {
        Self {
            images: group.generators().to_vec(),
            map: (0..group.order()).collect(),
        }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Automorphism, group: &FiniteGroup) -> Automorphism {
        let map: Vec<usize> = other.map.iter().map(|&x| self.map[x]).collect();
        let images = group.generators().iter().map(|&g| map[g]).collect();
        Automorphism { images, map }
    }

    pub fn inverse(&self, group: &FiniteGroup) -> Automorphism {
        let mut map = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            map[y] = x;
        }
        let images = group.generators().iter().map(|&g| map[g]).collect();
        Automorphism { images, map }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }
}

/// Extends generator images along the Cayley graph; `None` unless the result
/// is a well-defined bijective homomorphism.
fn complete_map(group: &FiniteGroup, images: &[usize]) -> Option<Vec<usize>> {
    let n = group.order();
    let gens = group.generators();
    let mut map = vec![usize::MAX; n];
    let mut hit = vec![false; n];
    map[0] = 0;
    hit[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (j, &g) in gens.iter().enumerate() {
            let y = group.mul(x, g);
            let v = group.mul(map[x], images[j]);
            if map[y] == usize::MAX {
                if hit[v] {
                    return None;
                }
                hit[v] = true;
                map[y] = v;
                queue.push_back(y);
            } else if map[y] != v {
                return None;
            }
        }
    }
    Some(map)
}

fn check_bound(group: &FiniteGroup, bound: u64) -> Result<()> {
    let order = group.order() as u64;
    if order > bound {
        return Err(Error::TooLarge { order, bound });
    }
    Ok(())
}

/// All automorphisms of `group`, sorted by generator images.
pub fn enumerate_automorphisms(group: &FiniteGroup) -> Result<Vec<Automorphism>> {
    enumerate_automorphisms_bounded(group, DEFAULT_BOUND)
}

pub fn enumerate_automorphisms_bounded(group: &FiniteGroup, bound: u64) -> Result<Vec<Automorphism>> {
    check_bound(group, bound)?;
    if let GroupSpec::Cyclic(m) = group.spec() {
        let m = *m;
        let mut out: Vec<Automorphism> = crate::modular::unit_group(m)?
            .elements()
            .iter()
            .map(|&w| {
                let map = (0..m).map(|x| ((x * w) % m) as usize).collect::<Vec<_>>();
                let images = group.generators().iter().map(|&g| map[g]).collect();
                Automorphism { images, map }
            })
            .collect();
        out.sort();
        return Ok(out);
    }
    let n = group.order();
    let gens = group.generators();
    let r = gens.len();
    let orders: Vec<u64> = (0..n).into_par_iter().map(|x| group.order_of(x)).collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| (0..n).filter(|&x| orders[x] == orders[g]).collect())
        .collect();
    let mut by_level: Vec<Vec<usize>> = vec![Vec::new(); r];
    for (i, rel) in group.relations().iter().enumerate() {
        by_level[rel.max_generator()].push(i);
    }
    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let mut found: Vec<Automorphism> = candidates[0]
        .par_iter()
        .flat_map_iter(|&first| {
            let mut out = Vec::new();
            let mut images = vec![0usize; r];
            images[0] = first;
            search(group, &candidates, &by_level, &mut images, 1, &mut out, &failure);
            out
        })
        .collect();
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    found.sort();
    Ok(found)
}

fn level_ok(group: &FiniteGroup, rels: &[usize], images: &[usize]) -> bool {
    rels.iter().all(|&i| {
        let rel = &group.relations()[i];
        let first = group.eval_word(&rel.sides[0], images);
        rel.sides[1..]
            .iter()
            .all(|w| group.eval_word(w, images) == first)
    })
}

fn search(
    group: &FiniteGroup,
    candidates: &[Vec<usize>],
    by_level: &[Vec<usize>],
    images: &mut Vec<usize>,
    depth: usize,
    out: &mut Vec<Automorphism>,
    failure: &Mutex<Option<Error>>,
) {
    if depth == 1 && !level_ok(group, &by_level[0], images) {
        return;
    }
    if depth == images.len() {
        if group.generated_subgroup(images).len() != group.order() {
            return;
        }
        match complete_map(group, images) {
            Some(map) => out.push(Automorphism {
                images: images.clone(),
                map,
            }),
            None => {
                *failure.lock().unwrap() = Some(Error::Presentation(format!(
                    "relations of {} admit the non-extendable assignment {:?}",
                    group.spec(),
                    images
                )));
            }
        }
        return;
    }
    for &c in &candidates[depth] {
        images[depth] = c;
        if level_ok(group, &by_level[depth], images) {
            search(group, candidates, by_level, images, depth + 1, out, failure);
        }
    }
}

/// Automorphisms `phi` with `chi(phi(g)) = chi(g)` on every generator.
pub fn fixing_character(
    group: &FiniteGroup,
    auts: &[Automorphism],
    chi: &Character,
) -> Vec<Automorphism> {
    auts.iter()
        .filter(|phi| {
            group
                .generators()
                .iter()
                .zip(&phi.images)
                .all(|(&g, &img)| chi.value(img) == chi.value(g))
        })
        .cloned()
        .collect()
}

pub fn aut_fixing_action(group: &FiniteGroup, action: &crate::groups::Action) -> Result<Vec<Automorphism>> {
    let chi = Character::from_action(group, action)?;
    let auts = enumerate_automorphisms(group)?;
    Ok(fixing_character(group, &auts, &chi))
}

/// `{w in (Z/b)* : u^w = u}` for the action of `Z/b` on `Z/a` by `u`, i.e.
/// the units congruent to 1 modulo the order of `u`.
pub fn cyclic_aut_fixing(b: u64, a: u64, u: u64) -> Result<Vec<u64>> {
    let ord = multiplicative_order(u, a).ok_or(Error::NonUnit { value: u, modulus: a })?;
    Ok(crate::modular::unit_group(b)?
        .elements()
        .iter()
        .copied()
        .filter(|&w| w % ord == 1 % ord)
        .collect())
}

/// Conjugation maps, one per coset of the center, sorted.
pub fn inner_automorphisms(group: &FiniteGroup) -> Result<Vec<Automorphism>> {
    check_bound(group, DEFAULT_BOUND)?;
    let mut by_images: HashMap<Vec<usize>, usize> = HashMap::new();
    for g in 0..group.order() {
        let images: Vec<usize> = group.generators().iter().map(|&x| group.conj(g, x)).collect();
        by_images.entry(images).or_insert(g);
    }
    let mut out: Vec<Automorphism> = by_images
        .into_iter()
        .map(|(images, g)| Automorphism {
            images,
            map: (0..group.order()).map(|x| group.conj(g, x)).collect(),
        })
        .collect();
    out.sort();
    Ok(out)
}

/// One component of an induced action: multiplication by `unit` on the
/// cyclic group `Z/modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitComponent {
    pub label: String,
    pub modulus: u64,
    pub unit: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedUnitAction {
    pub degree: u64,
    pub components: Vec<UnitComponent>,
}

/// Unit by which `phi` multiplies the prime-power components of
/// `H^degree(G)` for the periodic families.
pub fn induced_unit_action(
    group: &FiniteGroup,
    phi: &Automorphism,
    degree: u64,
) -> Result<InducedUnitAction> {
    let mut components = Vec::new();
    induced_components(group, &phi.map, degree, &mut components)?;
    Ok(InducedUnitAction { degree, components })
}

fn require_period(degree: u64, period: u64, component: &GroupSpec) -> Result<()> {
    if degree == 0 || degree % period != 0 {
        return Err(Error::Degree {
            degree,
            period,
            component: component.to_string(),
        });
    }
    Ok(())
}

fn induced_components(
    group: &FiniteGroup,
    map: &[usize],
    degree: u64,
    out: &mut Vec<UnitComponent>,
) -> Result<()> {
    let spec = group.spec().clone();
    let j = degree / 2;
    match &spec {
        GroupSpec::Cyclic(m) => {
            require_period(degree, 2, &spec)?;
            if *m > 1 {
                let l = map[1] as u64;
                out.push(UnitComponent {
                    label: spec.to_string(),
                    modulus: *m,
                    unit: pow_mod(l, j, *m),
                });
            }
        }
        GroupSpec::Q8 | GroupSpec::TStar(_) => {
            require_period(degree, 4, &spec)?;
            out.push(UnitComponent {
                label: "Q8".into(),
                modulus: 8,
                unit: 1,
            });
            if let GroupSpec::TStar(n) = spec {
                out.push(three_part(group, map, n, j));
            }
        }
        GroupSpec::Q16 | GroupSpec::OStar(_) => {
            require_period(degree, 4, &spec)?;
            let r = q16_exponent(group, map)?;
            out.push(UnitComponent {
                label: "Q16".into(),
                modulus: 16,
                unit: pow_mod(r * r, degree / 4, 16),
            });
            if let GroupSpec::OStar(n) = spec {
                out.push(three_part(group, map, n, j));
            }
        }
        GroupSpec::Direct(..) => {
            let (l, r) = group.direct_factors().expect("direct engine");
            let rn = r.order();
            let mut lmap = vec![0; l.order()];
            for (x, slot) in lmap.iter_mut().enumerate() {
                let y = map[x * rn];
                if y % rn != 0 {
                    return Err(Error::Unsupported(format!(
                        "automorphism does not preserve the factor {}",
                        l.spec()
                    )));
                }
                *slot = y / rn;
            }
            let mut rmap = vec![0; rn];
            for (x, slot) in rmap.iter_mut().enumerate() {
                let y = map[x];
                if y / rn != 0 {
                    return Err(Error::Unsupported(format!(
                        "automorphism does not preserve the factor {}",
                        r.spec()
                    )));
                }
                *slot = y;
            }
            induced_components(l, &lmap, degree, out)?;
            induced_components(r, &rmap, degree, out)?;
        }
        GroupSpec::Semidirect { a, .. } => {
            let (_, h, _) = group.semidirect_parts().expect("semidirect engine");
            let hn = h.order();
            require_period(degree, 2, &GroupSpec::Cyclic(*a))?;
            if *a > 1 {
                let img = map[hn];
                if img % hn != 0 {
                    return Err(Error::Unsupported("normal factor not invariant".into()));
                }
                out.push(UnitComponent {
                    label: format!("C({a})"),
                    modulus: *a,
                    unit: pow_mod((img / hn) as u64, j, *a),
                });
            }
            let hmap: Vec<usize> = (0..hn).map(|x| map[x] % hn).collect();
            induced_components(h, &hmap, degree, out)?;
        }
    }
    Ok(())
}

fn x_coordinate(group: &FiniteGroup, idx: usize) -> u64 {
    match group.normal_form_of(idx) {
        crate::groups::NormalForm::Quaternionic { x, .. } => x,
        _ => unreachable!("quaternionic engine"),
    }
}

fn three_part(group: &FiniteGroup, map: &[usize], n: u32, j: u64) -> UnitComponent {
    let m = 3u64.pow(n);
    let x = group.generator("X").expect("tower generator");
    let s = x_coordinate(group, map[x]);
    UnitComponent {
        label: format!("C({m})"),
        modulus: m,
        unit: pow_mod(s, j, m),
    }
}

/// Odd `r` with `psi(RP) = (RP)^r`, where `psi` is `phi` followed by an inner
/// automorphism returning the image of `<P, Q, R>` to itself.
fn q16_exponent(group: &FiniteGroup, map: &[usize]) -> Result<u64> {
    let p = group.generator("P").expect("P");
    let r = group.generator("R").expect("R");
    let sylow: Vec<usize> = group.generated_subgroup(&[p, group.generator("Q").expect("Q"), r]);
    let mut member = vec![false; group.order()];
    for &s in &sylow {
        member[s] = true;
    }
    let image: Vec<usize> = sylow.iter().map(|&s| map[s]).collect();
    let g = (0..group.order())
        .find(|&g| image.iter().all(|&y| member[group.conj(g, y)]))
        .ok_or_else(|| Error::Presentation("no conjugate of the image is the 2-Sylow".into()))?;
    let rp = group.mul(r, p);
    let target = group.conj(g, map[rp]);
    [1u64, 3, 5, 7]
        .into_iter()
        .find(|&e| group.pow(rp, e as i64) == target)
        .ok_or_else(|| Error::Presentation("image of RP is not a power of RP".into()))
}

/// `x -> phi(x)` restricted to the normal factor `Z/a` (as a unit) and the
/// induced map on the complement, for an automorphism of `Z/a x| H`.
pub fn splitting_image(group: &FiniteGroup, phi: &Automorphism) -> Result<(u64, Vec<usize>)> {
    let (a, h, _) = group
        .semidirect_parts()
        .ok_or_else(|| Error::NotApplicable("not a semidirect product".into()))?;
    let hn = h.order();
    let l = if a == 1 { 0 } else { (phi.map[hn] / hn) as u64 };
    for t in 0..a as usize {
        if phi.map[t * hn] % hn != 0 {
            return Err(Error::Unsupported("normal factor not invariant".into()));
        }
    }
    let images = h.generators().iter().map(|&g| phi.map[g] % hn).collect();
    Ok((l, images))
}

/// Source of automorphism sets, allowing callers to cache by group.
pub trait AutSource: Send + Sync {
    fn automorphisms(&self, group: &FiniteGroup) -> Result<Arc<Vec<Automorphism>>>;
}

/// Direct enumeration without caching.
#[derive(Debug, Clone, Copy)]
pub struct Enumerate {
    pub bound: u64,
}

impl Default for Enumerate {
    fn default() -> Self {
        Self {
            bound: DEFAULT_BOUND,
        }
    }
}

impl AutSource for Enumerate {
    fn automorphisms(&self, group: &FiniteGroup) -> Result<Arc<Vec<Automorphism>>> {
        enumerate_automorphisms_bounded(group, self.bound).map(Arc::new)
    }
}

/// In-memory cache keyed by the printed group spec.
#[derive(Debug, Default)]
pub struct MemoryAutCache {
    bound: u64,
    entries: Mutex<HashMap<String, Arc<Vec<Automorphism>>>>,
}

impl MemoryAutCache {
    pub fn new(bound: u64) -> Self {
        Self {
            bound,
            entries: Mutex::new(HashMap::new()),
        }
    }
}

impl AutSource for MemoryAutCache {
    fn automorphisms(&self, group: &FiniteGroup) -> Result<Arc<Vec<Automorphism>>> {
        let key = group.spec().to_string();
        if let Some(hit) = self.entries.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let auts = Arc::new(enumerate_automorphisms_bounded(group, self.bound)?);
        self.entries
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| auts.clone());
        Ok(auts)
    }
}

/// A finite group given only by its multiplication table, identity 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTable {
    n: usize,
    table: Vec<usize>,
}

impl CayleyTable {
    /// Table for `elements` under `mul`; the identity must come first.
    pub fn from_elements<T: PartialEq>(elements: &[T], mul: impl Fn(&T, &T) -> T) -> Self {
        let n = elements.len();
        let mut table = vec![0; n * n];
        for (i, x) in elements.iter().enumerate() {
            for (j, y) in elements.iter().enumerate() {
                let z = mul(x, y);
                table[i * n + j] = elements
                    .iter()
                    .position(|e| *e == z)
                    .expect("elements closed under mul");
            }
        }
        Self { n, table }
    }

    pub fn of_group(group: &FiniteGroup) -> Self {
        Self {
            n: group.order(),
            table: group.table(),
        }
    }

    /// The automorphism group under composition, identity first.
    pub fn of_automorphisms(group: &FiniteGroup, auts: &[Automorphism]) -> Self {
        let mut elements = auts.to_vec();
        if let Some(pos) = elements.iter().position(Automorphism::is_identity) {
            elements.swap(0, pos);
        }
        Self::from_elements(&elements, |x, y| x.compose(y, group))
    }

    pub fn order(&self) -> usize {
        self.n
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    fn order_of(&self, a: usize) -> usize {
        let (mut x, mut k) = (a, 1);
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    fn closure(&self, gens: &[usize]) -> usize {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut stack = vec![0];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count
    }
}

/// An isomorphism `self -> other` as an element map, found by mapping a
/// greedy generating set to elements of equal order.
pub fn find_isomorphism(a: &CayleyTable, b: &CayleyTable) -> Option<Vec<usize>> {
    if a.n != b.n {
        return None;
    }
    let mut gens = Vec::new();
    let mut size = 1;
    for x in 0..a.n {
        if size == a.n {
            break;
        }
        let mut trial = gens.clone();
        trial.push(x);
        let s = a.closure(&trial);
        if s > size {
            gens = trial;
            size = s;
        }
    }
    let b_orders: Vec<usize> = (0..b.n).map(|y| b.order_of(y)).collect();
    let cands: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let o = a.order_of(g);
            (0..b.n).filter(|&y| b_orders[y] == o).collect()
        })
        .collect();
    let mut images = vec![0; gens.len()];
    try_images(a, b, &gens, &cands, &mut images, 0)
}

fn try_images(
    a: &CayleyTable,
    b: &CayleyTable,
    gens: &[usize],
    cands: &[Vec<usize>],
    images: &mut Vec<usize>,
    depth: usize,
) -> Option<Vec<usize>> {
    if depth == gens.len() {
        let mut map = vec![usize::MAX; a.n];
        let mut hit = vec![false; b.n];
        map[0] = 0;
        hit[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for (j, &g) in gens.iter().enumerate() {
                let y = a.mul(x, g);
                let v = b.mul(map[x], images[j]);
                if map[y] == usize::MAX {
                    if hit[v] {
                        return None;
                    }
                    hit[v] = true;
                    map[y] = v;
                    queue.push_back(y);
                } else if map[y] != v {
                    return None;
                }
            }
        }
        return Some(map);
    }
    for &c in &cands[depth] {
        images[depth] = c;
        if let Some(m) = try_images(a, b, gens, cands, images, depth + 1) {
            return Some(m);
        }
    }
    None
}

/// The symmetric group on `k` letters as a Cayley table.
pub fn symmetric_group(k: usize) -> CayleyTable {
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    permutations(&mut current, 0, &mut perms);
    perms.sort();
    CayleyTable::from_elements(&perms, |p, q| q.iter().map(|&i| p[i]).collect())
}

fn permutations(current: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
    if start == current.len() {
        out.push(current.clone());
        return;
    }
    for i in start..current.len() {
        current.swap(start, i);
        permutations(current, start + 1, out);
        current.swap(start, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Action;

    fn build(spec: GroupSpec) -> FiniteGroup {
        FiniteGroup::build(&spec).unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_automorphisms(&build(GroupSpec::Q8)).unwrap().len(), 24);
        assert_eq!(enumerate_automorphisms(&build(GroupSpec::Cyclic(9))).unwrap().len(), 6);
        assert_eq!(enumerate_automorphisms(&build(GroupSpec::OStar(1))).unwrap().len(), 48);
    }

    #[test]
    fn inner_counts() {
        assert_eq!(inner_automorphisms(&build(GroupSpec::OStar(1))).unwrap().len(), 24);
        assert_eq!(inner_automorphisms(&build(GroupSpec::Q8)).unwrap().len(), 4);
        assert_eq!(inner_automorphisms(&build(GroupSpec::Cyclic(12))).unwrap().len(), 1);
    }

    #[test]
    fn fixing_examples() {
        assert_eq!(cyclic_aut_fixing(7, 7, 2).unwrap(), vec![1, 4]);
        // 7 has order 3 modulo 19.
        let c9 = build(GroupSpec::Cyclic(9));
        let fixed = aut_fixing_action(&c9, &Action::new(19, 7, 1, 1)).unwrap();
        let images: Vec<u64> = fixed.iter().map(|a| a.images()[0] as u64).collect();
        assert_eq!(images, cyclic_aut_fixing(9, 19, 7).unwrap());
        assert_eq!(images, vec![1, 4, 7]);
        let t1 = build(GroupSpec::TStar(1));
        let all = enumerate_automorphisms(&t1).unwrap();
        let trivial = aut_fixing_action(&t1, &Action::trivial(7)).unwrap();
        assert_eq!(trivial, all);
        let fixed = aut_fixing_action(&t1, &Action::new(7, 1, 2, 1)).unwrap();
        assert_eq!(fixed.len(), 12);
    }

    #[test]
    fn too_large() {
        let g = build(GroupSpec::Cyclic(20_000));
        assert!(matches!(
            enumerate_automorphisms(&g),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn induced_examples() {
        let c5 = build(GroupSpec::Cyclic(5));
        let auts = enumerate_automorphisms(&c5).unwrap();
        let two = auts.iter().find(|a| a.images()[0] == 2).unwrap();
        let act = induced_unit_action(&c5, two, 4).unwrap();
        assert_eq!(act.components[0].unit, 4);

        let o = build(GroupSpec::OStar(1));
        let r = o.generator("R").unwrap();
        let p2 = o.pow(o.generator("P").unwrap(), 2);
        let mut images = o.generators().to_vec();
        images[3] = o.mul(p2, r);
        let phi = Automorphism::from_images(&o, images).unwrap();
        let act = induced_unit_action(&o, &phi, 4).unwrap();
        assert_eq!((act.components[0].modulus, act.components[0].unit), (16, 9));
        assert!(induced_unit_action(&o, &phi, 6).is_err());

        let t = build(GroupSpec::TStar(2));
        for phi in enumerate_automorphisms(&t).unwrap() {
            let act = induced_unit_action(&t, &phi, 4).unwrap();
            assert_eq!(act.components[0].unit, 1);
        }
    }

    #[test]
    fn s4_isomorphism() {
        let q8 = build(GroupSpec::Q8);
        let auts = enumerate_automorphisms(&q8).unwrap();
        let table = CayleyTable::of_automorphisms(&q8, &auts);
        assert!(find_isomorphism(&table, &symmetric_group(4)).is_some());
        let c24 = CayleyTable::of_group(&build(GroupSpec::Cyclic(24)));
        assert!(find_isomorphism(&c24, &symmetric_group(4)).is_none());
    }
}
