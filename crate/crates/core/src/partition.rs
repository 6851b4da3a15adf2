//! One entry point for every route to the partition function.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::boundary::BoundaryConfig;
use crate::error::{Error, Result};
use crate::izergin::{closed_form_z, IzerginMethod};
use crate::lattice::{partition_expectation, partition_trace, LatticeSpec};
use crate::linsys::cramer_z;
use crate::scalar::{Field, ParamSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZMethod {
    ContractionTrace,
    ContractionExpectation,
    DetV,
    DetU,
    SumV,
    SumU,
    Cramer,
}

impl ZMethod {
    pub const ALL: [ZMethod; 7] = [
        Self::ContractionTrace,
        Self::ContractionExpectation,
        Self::DetV,
        Self::DetU,
        Self::SumV,
        Self::SumU,
        Self::Cramer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::ContractionTrace => "contraction-trace",
            Self::ContractionExpectation => "contraction-expectation",
            Self::DetV => "det-v",
            Self::DetU => "det-u",
            Self::SumV => "sum-v",
            Self::SumU => "sum-u",
            Self::Cramer => "cramer",
        }
    }

    /// Cost grows exponentially in the lattice size.
    pub fn is_contraction(self) -> bool {
        matches!(self, Self::ContractionTrace | Self::ContractionExpectation)
    }

    pub fn is_partition_sum(self) -> bool {
        matches!(self, Self::SumV | Self::SumU)
    }

    fn izergin(self) -> Option<IzerginMethod> {
        match self {
            Self::DetV => Some(IzerginMethod::DetV),
            Self::DetU => Some(IzerginMethod::DetU),
            Self::SumV => Some(IzerginMethod::SumV),
            Self::SumU => Some(IzerginMethod::SumU),
            _ => None,
        }
    }
}

impl fmt::Display for ZMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ZMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown method '{s}'")))
    }
}

/// `Z_mn(ū|v̄|B|B̂)` for the rank-1 twists `B = |e⟩⟨w|`, `B̂ = |n⟩⟨s|`.
pub fn compute_z<F: Field>(method: ZMethod, params: &ParamSet<F>, cfg: &BoundaryConfig<F>) -> Result<F> {
    if let Some(im) = method.izergin() {
        return closed_form_z(params, cfg, im);
    }
    match method {
        ZMethod::ContractionTrace => partition_trace(&LatticeSpec::from_boundary(params.clone(), cfg)),
        ZMethod::ContractionExpectation => partition_expectation(&LatticeSpec::from_boundary(params.clone(), cfg), cfg),
        ZMethod::Cramer => cramer_z(params, cfg),
        _ => unreachable!("Izergin methods handled above"),
    }
}

/// Every method, in declaration order.
pub fn compute_all<F: Field>(params: &ParamSet<F>, cfg: &BoundaryConfig<F>) -> Vec<(ZMethod, Result<F>)> {
    ZMethod::ALL.iter().map(|&m| (m, compute_z(m, params, cfg))).collect()
}

/// Whether a method applies to this lattice shape at all (as opposed to
/// failing on degenerate data).
pub fn applies_to(method: ZMethod, m: usize, n: usize) -> bool {
    method != ZMethod::Cramer || m == n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::build_boundary;
    use crate::scalar::Scalar;

    #[test]
    fn names_round_trip() {
        for m in ZMethod::ALL {
            assert_eq!(m.name().parse::<ZMethod>().unwrap(), m);
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{}\"", m.name()));
        }
        assert!("fast".parse::<ZMethod>().is_err());
    }

    #[test]
    fn worked_example_all_methods() {
        let z = Scalar::from_i64;
        let p = ParamSet::new(vec![z(2)], vec![z(0)], z(1)).unwrap();
        let cfg = build_boundary([z(1), z(1)], [z(1), z(0)], [z(1), z(3)], [z(1), z(2)], None, None).unwrap();
        for (m, v) in compute_all(&p, &cfg) {
            assert_eq!(v.unwrap(), z(18), "{m}");
        }
    }
}
