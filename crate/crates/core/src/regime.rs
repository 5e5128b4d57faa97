use std::fmt;
use std::str::FromStr;

use crate::Error;

/// The two training regimes under comparison.
///
/// Differences are always taken as `TransferLearned - MedicalOnly`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Regime {
    /// ImageNet-initialised, fine-tuned on medical images (`T_II`).
    TransferLearned,
    /// Randomly initialised, trained on medical images only (`L_MI`).
    MedicalOnly,
}

impl Regime {
    pub const ALL: [Regime; 2] = [Regime::TransferLearned, Regime::MedicalOnly];

    pub fn label(self) -> &'static str {
        match self {
            Regime::TransferLearned => "T_II",
            Regime::MedicalOnly => "L_MI",
        }
    }

    pub fn other(self) -> Regime {
        match self {
            Regime::TransferLearned => Regime::MedicalOnly,
            Regime::MedicalOnly => Regime::TransferLearned,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "T_II" => Ok(Regime::TransferLearned),
            "L_MI" => Ok(Regime::MedicalOnly),
            other => Err(Error::InvalidArgument(format!("unknown model {other:?}"))),
        }
    }
}
