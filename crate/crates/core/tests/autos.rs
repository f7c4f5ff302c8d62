use spaceform_core::autos::{
    cyclic_aut_fixing, enumerate_automorphisms, fixing_character, induced_unit_action,
    inner_automorphisms, splitting_image, Automorphism,
};
use spaceform_core::derivations::enumerate_derivations;
use spaceform_core::groups::{Action, Character, FiniteGroup, GroupSpec, NormalForm};
use spaceform_core::modular::unit_group;

fn build(spec: GroupSpec) -> FiniteGroup {
    FiniteGroup::build(&spec).unwrap()
}

#[test]
fn octahedral_aut_orders_match_inner_times_outer() {
    for n in 1..=3u32 {
        let o = build(GroupSpec::OStar(n));
        let auts = enumerate_automorphisms(&o).unwrap();
        let inn = inner_automorphisms(&o).unwrap();
        assert_eq!(inn.len(), o.order() / 2);
        assert_eq!(auts.len(), inn.len() * 2 * 3usize.pow(n - 1), "O*({n})");
    }
}

#[test]
fn aut_sets_are_groups() {
    for spec in [GroupSpec::Q8, GroupSpec::TStar(1), GroupSpec::OStar(1), GroupSpec::Q16] {
        let g = build(spec);
        let auts = enumerate_automorphisms(&g).unwrap();
        assert!(auts.iter().any(Automorphism::is_identity));
        for a in &auts {
            assert!(auts.binary_search(&a.inverse(&g)).is_ok());
            for b in auts.iter().step_by(3) {
                assert!(auts.binary_search(&a.compose(b, &g)).is_ok());
            }
        }
    }
}

#[test]
fn tetrahedral_aut_exhausts_three_part_units() {
    for n in 1..=3u32 {
        let t = build(GroupSpec::TStar(n));
        let m = 3u64.pow(n);
        let x = t.generator("X").unwrap();
        let auts = enumerate_automorphisms(&t).unwrap();
        let mut s: Vec<u64> = auts
            .iter()
            .map(|phi| match t.normal_form_of(phi.apply(x)) {
                NormalForm::Quaternionic { x, .. } => x,
                _ => unreachable!(),
            })
            .collect();
        s.sort_unstable();
        s.dedup();
        assert_eq!(s, unit_group(m).unwrap().elements());
        // On H^8 the 3-part is multiplied by s^4.
        let mut units: Vec<u64> = auts
            .iter()
            .map(|phi| induced_unit_action(&t, phi, 8).unwrap().components[1].unit)
            .collect();
        units.sort_unstable();
        units.dedup();
        assert_eq!(units, unit_group(m).unwrap().power_image(4).elements());
    }
}

#[test]
fn induced_actions_are_multiplicative_and_inner_trivial() {
    for spec in [GroupSpec::TStar(2), GroupSpec::OStar(1), GroupSpec::OStar(2)] {
        let g = build(spec);
        let auts = enumerate_automorphisms(&g).unwrap();
        for degree in [4u64, 8, 12] {
            let unit = |phi: &Automorphism| -> Vec<(u64, u64)> {
                induced_unit_action(&g, phi, degree)
                    .unwrap()
                    .components
                    .iter()
                    .map(|c| (c.modulus, c.unit))
                    .collect()
            };
            for a in auts.iter().step_by(7) {
                for b in auts.iter().step_by(11) {
                    let ab = unit(&a.compose(b, &g));
                    let (ua, ub) = (unit(a), unit(b));
                    for ((m, x), ((_, y), (_, z))) in ab.iter().zip(ua.iter().zip(&ub)) {
                        assert_eq!(*x, y * z % m);
                    }
                }
            }
            for inner in inner_automorphisms(&g).unwrap() {
                assert!(unit(&inner).iter().all(|&(m, u)| u == 1 % m));
            }
        }
    }
}

#[test]
fn q16_component_takes_only_plus_minus_one_and_nine() {
    for n in 1..=2 {
        let o = build(GroupSpec::OStar(n));
        for phi in enumerate_automorphisms(&o).unwrap() {
            let u = induced_unit_action(&o, &phi, 4).unwrap().components[0].unit;
            assert!([1, 9, 15, 7].contains(&u));
        }
    }
}

#[test]
fn cyclic_fixing_closed_form_agrees() {
    for (b, a) in [(5u64, 11u64), (7, 29), (9, 19), (3, 7), (4, 5), (6, 7)] {
        let c = build(GroupSpec::Cyclic(b));
        for u in unit_group(a).unwrap().elements() {
            let action = Action::new(a, *u, 1, 1);
            let Ok(chi) = Character::from_action(&c, &action) else {
                continue;
            };
            let auts = enumerate_automorphisms(&c).unwrap();
            let brute: Vec<u64> = fixing_character(&c, &auts, &chi)
                .iter()
                .map(|phi| phi.images()[0] as u64)
                .collect();
            assert_eq!(brute, cyclic_aut_fixing(b, a, *u).unwrap(), "b={b} a={a} u={u}");
        }
    }
}

#[test]
fn direct_factors_of_coprime_orders_are_invariant() {
    let g = build(GroupSpec::direct(GroupSpec::Cyclic(5), GroupSpec::Q8));
    let (l, r) = g.direct_factors().unwrap();
    let rn = r.order();
    let left: Vec<usize> = (0..l.order()).map(|x| x * rn).collect();
    for phi in enumerate_automorphisms(&g).unwrap() {
        for &x in &left {
            assert_eq!(phi.apply(x) % rn, 0);
        }
    }
}

#[test]
fn splitting_sequence_small_instances() {
    for (h, action) in [
        (GroupSpec::Cyclic(4), Action::new(5, 2, 1, 1)),
        (GroupSpec::Cyclic(3), Action::new(7, 2, 1, 1)),
        (GroupSpec::Cyclic(4), Action::new(5, 4, 1, 1)),
        (GroupSpec::Q8, Action::trivial(3)),
    ] {
        let spec = GroupSpec::semidirect(h.clone(), action);
        let g = build(spec.clone());
        let hg = build(h);
        let a = action.modulus;
        let chi = Character::from_action(&hg, &action).unwrap();
        let aut_h = enumerate_automorphisms(&hg).unwrap();
        let fixed = fixing_character(&hg, &aut_h, &chi);
        let der = enumerate_derivations(&hg, &chi).unwrap().len();
        let auts = enumerate_automorphisms(&g).unwrap();
        let units = unit_group(a).unwrap();
        assert_eq!(auts.len(), der * units.len() * fixed.len(), "{spec}");
        let mut image: Vec<(u64, Vec<usize>)> =
            auts.iter().map(|phi| splitting_image(&g, phi).unwrap()).collect();
        image.sort();
        image.dedup();
        let mut expected: Vec<(u64, Vec<usize>)> = units
            .elements()
            .iter()
            .flat_map(|&l| fixed.iter().map(move |f| (l, f.images().to_vec())))
            .collect();
        expected.sort();
        assert_eq!(image, expected, "{spec}");
    }
}
