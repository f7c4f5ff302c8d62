//! Integral cohomology of the periodic families, least periods and an
//! abelianization-based check in degree 2.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{AbelianInvariants, Action, FiniteGroup, GroupSpec};
use crate::modular::{lcm, multiplicative_order};

/// Largest order for which [`h2_oracle`] enumerates.
pub const ORACLE_BOUND: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
enum Shape {
    /// `Z/m` in even positive degrees.
    Cyclic(u64),
    /// Values in degrees `2 mod 4` and `0 mod 4`.
    FourPeriodic { twice_odd: Vec<u64>, top: u64 },
    /// Only the top degrees (multiples of the period) are tabulated.
    TopOnly { top: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyTable {
    pub group: String,
    pub period: u64,
    shape: Shape,
}

impl CohomologyTable {
    /// `H^k(G; Z)`.
    pub fn at(&self, k: u64) -> Result<AbelianInvariants> {
        if k == 0 {
            return Ok(AbelianInvariants::integers());
        }
        match &self.shape {
            Shape::Cyclic(m) => Ok(if k % 2 == 1 {
                AbelianInvariants::trivial()
            } else {
                AbelianInvariants::cyclic(*m)
            }),
            Shape::FourPeriodic { twice_odd, top } => Ok(match k % 4 {
                1 | 3 => AbelianInvariants::trivial(),
                2 => AbelianInvariants::from_cyclic_orders(twice_odd),
                _ => AbelianInvariants::cyclic(*top),
            }),
            Shape::TopOnly { top } => {
                if k % self.period == 0 {
                    Ok(AbelianInvariants::cyclic(*top))
                } else {
                    Err(Error::Unsupported(format!(
                        "only degrees divisible by {} are tabulated for {}",
                        self.period, self.group
                    )))
                }
            }
        }
    }
}

pub fn cohomology_table(spec: &GroupSpec) -> Result<CohomologyTable> {
    let period = least_period(spec)?;
    let shape = match spec {
        GroupSpec::Cyclic(m) => Shape::Cyclic(*m),
        GroupSpec::Q8 => Shape::FourPeriodic {
            twice_odd: vec![2, 2],
            top: 8,
        },
        // Printed as Z + Z/2 in degrees 2 mod 4; a finite group has torsion
        // cohomology in positive degrees and H^2 = Hom(Q16_ab, Q/Z) = Z/2 + Z/2.
        GroupSpec::Q16 => Shape::FourPeriodic {
            twice_odd: vec![2, 2],
            top: 16,
        },
        GroupSpec::TStar(n) => {
            let t = 3u64.pow(*n);
            Shape::FourPeriodic {
                twice_odd: vec![t],
                top: 8 * t,
            }
        }
        GroupSpec::OStar(n) => Shape::FourPeriodic {
            twice_odd: vec![2],
            top: 16 * 3u64.pow(*n),
        },
        GroupSpec::Semidirect { .. } => Shape::TopOnly { top: spec.order()? },
        GroupSpec::Direct(..) => {
            return Err(Error::Unsupported(format!("no cohomology table for {spec}")))
        }
    };
    Ok(CohomologyTable {
        group: spec.to_string(),
        period,
        shape,
    })
}

/// Lcm of the multiplicative orders of the action's generator images.
pub fn ell(action: &Action) -> Result<u64> {
    let a = action.modulus;
    if a == 0 {
        return Err(Error::ZeroModulus);
    }
    [action.u, action.v, action.w].iter().try_fold(1, |acc, &x| {
        multiplicative_order(x, a)
            .map(|o| lcm(acc, o))
            .ok_or(Error::NonUnit { value: x, modulus: a })
    })
}

/// Least period of the cohomology of the periodic families.
pub fn least_period(spec: &GroupSpec) -> Result<u64> {
    match spec {
        GroupSpec::Cyclic(_) => Ok(2),
        GroupSpec::Q8 | GroupSpec::Q16 | GroupSpec::TStar(_) | GroupSpec::OStar(_) => Ok(4),
        GroupSpec::Direct(l, r) => {
            let (lo, ro) = (l.order()?, r.order()?);
            if crate::modular::gcd(lo, ro) != 1 {
                return Err(Error::Unsupported(format!(
                    "{spec} has factors of non-coprime orders"
                )));
            }
            Ok(lcm(least_period(l)?, least_period(r)?))
        }
        GroupSpec::Semidirect {
            complement, action, ..
        } => {
            let d = least_period(complement)? / 2;
            Ok(2 * lcm(ell(action)?, d))
        }
    }
}

/// `H^2(G; Z)`, computed as the abelianization of `G`.
pub fn h2_oracle(group: &FiniteGroup) -> Result<AbelianInvariants> {
    if group.order() > ORACLE_BOUND {
        return Err(Error::TooLarge {
            order: group.order() as u64,
            bound: ORACLE_BOUND as u64,
        });
    }
    Ok(group.abelianization())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables() {
        assert_eq!(cohomology_table(&GroupSpec::Q8).unwrap().at(2).unwrap().factors(), &[2, 2]);
        assert_eq!(cohomology_table(&GroupSpec::TStar(2)).unwrap().at(4).unwrap().factors(), &[72]);
        assert!(cohomology_table(&GroupSpec::OStar(2)).unwrap().at(3).unwrap().is_trivial());
        assert_eq!(
            cohomology_table(&GroupSpec::Cyclic(6)).unwrap().at(0).unwrap(),
            AbelianInvariants::integers()
        );
    }

    #[test]
    fn periods() {
        assert_eq!(least_period(&GroupSpec::TStar(3)).unwrap(), 4);
        assert_eq!(least_period(&GroupSpec::OStar(1)).unwrap(), 4);
        let spec = GroupSpec::semidirect(
            GroupSpec::direct(GroupSpec::Cyclic(5), GroupSpec::TStar(1)),
            Action::new(11, 3, 1, 1),
        );
        assert_eq!(least_period(&spec).unwrap(), 20);
        let table = cohomology_table(&spec).unwrap();
        assert_eq!(table.at(20).unwrap().factors(), &[11 * 5 * 24]);
        assert!(table.at(4).is_err());
    }

    #[test]
    fn ell_examples() {
        assert_eq!(ell(&Action::trivial(11)).unwrap(), 1);
        assert_eq!(ell(&Action::new(11, 3, 1, 1)).unwrap(), 5);
        assert_eq!(ell(&Action::new(7, 1, 2, 1)).unwrap(), 3);
        assert_eq!(ell(&Action::trivial(1)).unwrap(), 1);
    }
}
