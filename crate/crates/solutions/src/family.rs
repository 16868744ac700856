use std::fmt;
use std::str::FromStr;

use crate::params::ParamSpec::{self, Function, Number, Required, SameAs};
use crate::SolutionError;

/// The exact-solution families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Constant stresses with a rigid rotation.
    Rigid,
    /// Constant-speed flow with implicitly defined velocities.
    B1Implicit,
    /// Partially invariant solution: source/vortex flow in a log-pressure field.
    KPis,
    SimC1nzAddA,
    SimC1nzAddB,
    SimC1nzMulA,
    SimC1nzMulB,
    SimC1zAddA,
    SimC1zAddB,
    SimC1zMulA,
    SimC1zMulB,
    SimC1zMulC,
}

const CN_BUMP: &str = "cn_bump(4pi,0.5)";

impl Family {
    pub const ALL: [Family; 12] = [
        Family::Rigid,
        Family::B1Implicit,
        Family::KPis,
        Family::SimC1nzAddA,
        Family::SimC1nzAddB,
        Family::SimC1nzMulA,
        Family::SimC1nzMulB,
        Family::SimC1zAddA,
        Family::SimC1zAddB,
        Family::SimC1zMulA,
        Family::SimC1zMulB,
        Family::SimC1zMulC,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Family::Rigid => "RIGID",
            Family::B1Implicit => "B1_IMPLICIT",
            Family::KPis => "K_PIS",
            Family::SimC1nzAddA => "SIM_C1NZ_ADD_A",
            Family::SimC1nzAddB => "SIM_C1NZ_ADD_B",
            Family::SimC1nzMulA => "SIM_C1NZ_MUL_A",
            Family::SimC1nzMulB => "SIM_C1NZ_MUL_B",
            Family::SimC1zAddA => "SIM_C1Z_ADD_A",
            Family::SimC1zAddB => "SIM_C1Z_ADD_B",
            Family::SimC1zMulA => "SIM_C1Z_MUL_A",
            Family::SimC1zMulB => "SIM_C1Z_MUL_B",
            Family::SimC1zMulC => "SIM_C1Z_MUL_C",
        }
    }

    /// Families whose fields involve numerical quadrature of the angle
    /// profile; their residual tolerance is 1e-6 instead of 1e-8.
    pub fn quadrature_grade(self) -> bool {
        matches!(
            self,
            Family::SimC1nzAddA | Family::SimC1nzAddB | Family::SimC1nzMulA | Family::SimC1nzMulB
        )
    }

    /// Residual tolerance for the solution gate.
    pub fn residual_tolerance(self) -> f64 {
        if self.quadrature_grade() {
            1e-6
        } else {
            1e-8
        }
    }

    pub fn schema(self) -> &'static [ParamSpec] {
        match self {
            Family::Rigid => &[
                Required("b1"),
                Number("b2", 0.0),
                Number("b3", 0.0),
                Number("sigma0", 0.0),
                Number("theta0", 0.0),
            ],
            Family::B1Implicit => &[Number("c1", 5.0), Number("c2", 0.0), Function("T", "arcsin_half")],
            Family::KPis => &[
                Number("c1", 0.0),
                Required("c2"),
                Required("c3"),
                Number("c4", 0.0),
                Number("c5", 0.0),
            ],
            Family::SimC1nzAddA => &[
                Number("c1", -0.5),
                Number("c2", 0.0),
                Number("c3", 0.0),
                Number("c4", 1.0),
                Number("c5", 1.0),
                Number("c6", 1.0),
                Number("c7", 0.0),
                Number("c8", 0.0),
            ],
            Family::SimC1nzAddB | Family::SimC1nzMulB => &[
                Number("c1", -0.5),
                Number("c2", 0.0),
                Number("c3", 0.0),
                Number("c4", 1.0),
                Number("c5", 0.0),
                Number("c6", 0.0),
            ],
            Family::SimC1nzMulA => &[
                Number("c1", -0.5),
                Number("c2", 0.0),
                Number("c3", 0.0),
                Number("c4", 1.0),
                Number("c5", 1.0),
                Number("c6", 0.0),
                Number("c7", 0.0),
            ],
            Family::SimC1zAddA => &[
                Number("c2", 0.0),
                Number("omega", 0.0),
                Number("u0", 0.0),
                Number("v0", 0.0),
                Function("F", CN_BUMP),
            ],
            Family::SimC1zAddB => &[
                Number("c2", 0.0),
                Number("u0", 0.0),
                Number("v0", 0.0),
                Function("H", "exp_decay(2,0.1)"),
                Function("K", "identity"),
            ],
            Family::SimC1zMulA => &[
                Number("c2", 0.0),
                Number("u0", 0.0),
                Number("v0", 0.0),
                Function("P", "exp_decay(1,0.5)"),
                Function("Q", "poly(0,1,0.5)"),
            ],
            Family::SimC1zMulB => &[Number("c2", 0.0), Number("v0", 0.0), Function("F", CN_BUMP)],
            Family::SimC1zMulC => &[
                Number("c2", 0.0),
                Required("c3"),
                SameAs("c4", "c3"),
                Number("omega2", 0.0),
            ],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Family {
    type Err = SolutionError;

    fn from_str(s: &str) -> Result<Self, SolutionError> {
        let wanted = s.trim().to_ascii_uppercase();
        Family::ALL
            .into_iter()
            .find(|f| f.id() == wanted)
            .ok_or_else(|| SolutionError::UnknownFamily(s.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.id().parse::<Family>().unwrap(), f);
        }
        assert_eq!("k_pis".parse::<Family>().unwrap(), Family::KPis);
        assert!("NOPE".parse::<Family>().is_err());
    }

    #[test]
    fn schemas_have_unique_names_and_valid_function_defaults() {
        for f in Family::ALL {
            let names: Vec<_> = f.schema().iter().map(|s| s.name()).collect();
            let mut dedup = names.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(names.len(), dedup.len(), "{f}");
            for spec in f.schema() {
                if let Function(_, d) = spec {
                    d.parse::<crate::ArbFn>().unwrap();
                }
            }
        }
    }
}
