use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

/// Outcome of an exhaustive check. Failures always carry a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Pass,
    Fail(W),
}

impl<W> Verdict<W> {
    pub fn from_witness(witness: Option<W>) -> Self {
        match witness {
            None => Verdict::Pass,
            Some(w) => Verdict::Fail(w),
        }
    }

    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(w) => Some(w),
        }
    }
}

// Serialized as {"pass": bool, "witness": W | null}.
impl<W: Serialize> Serialize for Verdict<W> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Verdict", 2)?;
        s.serialize_field("pass", &self.passed())?;
        s.serialize_field("witness", &self.witness())?;
        s.end()
    }
}

impl<'de, W: Deserialize<'de>> Deserialize<'de> for Verdict<W> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw<W> {
            pass: bool,
            witness: Option<W>,
        }
        let raw = Raw::<W>::deserialize(deserializer)?;
        match (raw.pass, raw.witness) {
            (true, None) => Ok(Verdict::Pass),
            (false, Some(w)) => Ok(Verdict::Fail(w)),
            (true, Some(_)) => Err(de::Error::custom("passing verdict carries a witness")),
            (false, None) => Err(de::Error::custom("failing verdict without a witness")),
        }
    }
}
