use std::sync::Arc;

use proptest::prelude::*;
use spaceform_core::autos::Enumerate;
use spaceform_core::derivations::Family;
use spaceform_core::modular::{big_o, pow_mod, totient};
use spaceform_core::spaceforms::{
    admissible_actions, corollary_count, lens_count, lens_kernel, lens_orbit_count,
    orbit_count_oracle, reconcile, selfeq_lens, selfeq_structure, FamilyParams, GridCell,
    OracleContext, CONSISTENT, MISMATCH,
};
use spaceform_core::Action;

proptest! {
    #[test]
    fn lens_counts_match_orbits(m in 1u64..80, k in 1u64..8) {
        prop_assert_eq!(lens_count(m, k).unwrap(), lens_orbit_count(m, k).unwrap());
    }

    #[test]
    fn kernel_times_image_is_totient(m in 1u64..120, k in 1u64..8) {
        let kernel = lens_kernel(m, k).unwrap().len() as u64;
        let mut image: Vec<u64> = (0..m)
            .filter(|&l| spaceform_core::modular::gcd(l, m) == 1)
            .map(|l| {
                let p = pow_mod(l, k, m);
                p.min((m - p) % m)
            })
            .collect();
        image.sort_unstable();
        image.dedup();
        prop_assert_eq!(kernel * image.len() as u64, totient(m));
    }
}

#[test]
fn degenerate_lens_spaces() {
    assert_eq!(selfeq_lens(1, 3).unwrap().order, 2);
    assert_eq!(selfeq_lens(2, 3).unwrap().order, 2);
    assert_eq!(selfeq_lens(5, 2).unwrap().order, 4);
    assert_eq!(big_o(5, 2).unwrap(), 2);
}

fn params(family: Family, a: u64, b: u64, n: u32, k: u64) -> Vec<FamilyParams> {
    admissible_actions(family, a, b, n)
        .into_iter()
        .map(|act| FamilyParams::new(family, a, b, n, act, k).unwrap())
        .collect()
}

#[test]
fn oracle_accounts_for_every_unit() {
    let ctx = OracleContext::default();
    for family in [Family::T, Family::O] {
        for (a, b) in [(1, 1), (5, 1), (1, 7), (7, 5)] {
            for p in params(family, a, b, 1, 2) {
                let r = orbit_count_oracle(&p, &ctx).unwrap();
                assert_eq!(r.modulus, p.big_n());
                assert_eq!(r.units, totient(r.modulus));
                assert_eq!(r.count * r.subgroup_order, r.units, "{p}");
            }
        }
    }
}

#[test]
fn oracle_does_not_depend_on_the_source() {
    let cached = OracleContext::default();
    let direct = OracleContext::new(Arc::new(Enumerate::default()));
    for p in params(Family::T, 7, 1, 2, 1).into_iter().chain(params(Family::O, 5, 1, 2, 1)) {
        assert_eq!(
            orbit_count_oracle(&p, &cached).unwrap(),
            orbit_count_oracle(&p, &direct).unwrap()
        );
    }
}

#[test]
fn spot_values() {
    let ctx = OracleContext::default();
    let t = FamilyParams::new(Family::T, 1, 1, 1, Action::trivial(1), 1).unwrap();
    assert_eq!(orbit_count_oracle(&t, &ctx).unwrap().count, 4);
    assert_eq!(corollary_count(&t).unwrap(), 6);
    let o = FamilyParams::new(Family::O, 1, 1, 1, Action::trivial(1), 1).unwrap();
    assert_eq!(orbit_count_oracle(&o, &ctx).unwrap().count, 4);
}

#[test]
fn selfeq_total_is_the_product_of_components() {
    let ctx = OracleContext::default();
    for p in params(Family::T, 7, 1, 1, 1).into_iter().chain(params(Family::O, 5, 7, 1, 1)) {
        let r = selfeq_structure(&p, &ctx).unwrap();
        assert_eq!(r.total, r.components.iter().product::<u64>(), "{p}");
        assert_eq!(r.total, r.structure.order());
    }
}

#[test]
fn reconcile_is_sorted_and_deterministic() {
    let mut grid: Vec<GridCell> = params(Family::T, 5, 1, 1, 1)
        .into_iter()
        .map(GridCell::Family)
        .collect();
    grid.push(GridCell::Lens { m: 5, k: 2 });
    grid.reverse();
    let a = reconcile(&grid, &OracleContext::default());
    let b = reconcile(&grid, &OracleContext::default());
    assert_eq!(format!("{a:?}"), format!("{b:?}"));
    assert!(a.cells.windows(2).all(|w| w[0].cell <= w[1].cell));
    assert!(a.cells.iter().all(|c| c.verdict == CONSISTENT || c.verdict == MISMATCH));
    assert!(reconcile(&[], &OracleContext::default()).cells.is_empty());
}
