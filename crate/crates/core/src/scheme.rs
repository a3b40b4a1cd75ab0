use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Excitation configuration. The probe always drives |1⟩↔|3⟩ and the
/// coupling field drives |2⟩↔|3⟩; the schemes differ in which level is the
/// shared (transit) state |3⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    Xi,
    V,
    Lambda,
    /// V configuration with probe and coupling transitions interchanged.
    AltV,
    FssXi,
    FssV,
    FssLambda,
}

/// Which closed-form susceptibility kernel a scheme evaluates with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelFamily {
    Xi,
    V,
    Lambda,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 7] = [
        SchemeKind::Xi,
        SchemeKind::V,
        SchemeKind::Lambda,
        SchemeKind::AltV,
        SchemeKind::FssXi,
        SchemeKind::FssV,
        SchemeKind::FssLambda,
    ];

    pub fn family(self) -> KernelFamily {
        match self {
            SchemeKind::Xi | SchemeKind::FssXi => KernelFamily::Xi,
            SchemeKind::V | SchemeKind::AltV | SchemeKind::FssV => KernelFamily::V,
            SchemeKind::Lambda | SchemeKind::FssLambda => KernelFamily::Lambda,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Xi => "xi",
            SchemeKind::V => "v",
            SchemeKind::Lambda => "lambda",
            SchemeKind::AltV => "alt_v",
            SchemeKind::FssXi => "fss_xi",
            SchemeKind::FssV => "fss_v",
            SchemeKind::FssLambda => "fss_lambda",
        }
    }
}

impl KernelFamily {
    /// Energy rank of levels |1⟩, |2⟩, |3⟩ (0 = lowest).
    ///
    /// Ξ: ground |1⟩, transit |3⟩ in the middle, |2⟩ on top.
    /// V: transit |3⟩ is the ground state, |1⟩ below |2⟩.
    /// Λ: |1⟩ below |2⟩, transit |3⟩ on top.
    pub fn level_rank(self) -> [u8; 3] {
        match self {
            KernelFamily::Xi => [0, 2, 1],
            KernelFamily::V => [1, 2, 0],
            KernelFamily::Lambda => [0, 1, 2],
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid("scheme", format!("unknown scheme `{s}`")))
    }
}
