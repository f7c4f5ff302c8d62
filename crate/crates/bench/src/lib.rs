//! Fixtures shared by the benchmarks.

use spaceform_core::derivations::Family;
use spaceform_core::spaceforms::{admissible_actions, FamilyParams};
use spaceform_core::{Action, Character, FiniteGroup, GroupSpec};

pub fn octahedral(n: u32) -> FiniteGroup {
    FiniteGroup::build(&GroupSpec::OStar(n)).expect("O*(n) builds")
}

/// The T family with `a = 7`, `b = 5` and a nontrivial action on the tower.
pub fn tetrahedral_cell(n: u32, k: u64) -> FamilyParams {
    let action = admissible_actions(Family::T, 7, 5, n)
        .into_iter()
        .find(|act| act.v != 1)
        .expect("7 has cube roots of unity");
    FamilyParams::new(Family::T, 7, 5, n, action, k).expect("admissible")
}

/// `C(5) x T*(1)` with `Z/13` twisted through the tower.
pub fn derivation_instance() -> (FiniteGroup, Character) {
    let h = FiniteGroup::build(&GroupSpec::direct(GroupSpec::Cyclic(5), GroupSpec::TStar(1)))
        .expect("builds");
    let chi = Character::from_action(&h, &Action::new(13, 1, 3, 1)).expect("3 has order 3 mod 13");
    (h, chi)
}
