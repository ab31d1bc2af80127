//! Single- and two-qubit Pauli operators in the binary symplectic encoding.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A single-qubit Pauli, stored as `x | z << 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Z,
    Y,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    #[inline]
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (false, true) => Pauli::Z,
            (true, true) => Pauli::Y,
        }
    }

    #[inline]
    pub fn from_code(code: u8) -> Self {
        Self::from_bits(code & 1 != 0, code & 2 != 0)
    }

    #[inline]
    pub fn code(self) -> u8 {
        self as u8
    }

    #[inline]
    pub fn has_x(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    #[inline]
    pub fn has_z(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    /// True when the two operators anticommute.
    #[inline]
    pub fn anticommutes(self, other: Pauli) -> bool {
        (self.has_x() & other.has_z()) ^ (self.has_z() & other.has_x())
    }

    #[inline]
    pub fn is_dephasing(self) -> bool {
        matches!(self, Pauli::I | Pauli::Z)
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// Two-qubit Pauli `first ⊗ second`. For a gate, `first` acts on the control
/// (the ancilla) and `second` on the target (the data qubit).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PauliPair {
    pub first: Pauli,
    pub second: Pauli,
}

impl PauliPair {
    pub const IDENTITY: PauliPair = PauliPair { first: Pauli::I, second: Pauli::I };

    pub fn new(first: Pauli, second: Pauli) -> Self {
        Self { first, second }
    }

    /// Packed code in `0..16`; `0` is the identity.
    #[inline]
    pub fn code(self) -> u8 {
        self.first.code() | (self.second.code() << 2)
    }

    #[inline]
    pub fn from_code(code: u8) -> Self {
        debug_assert!(code < 16);
        Self { first: Pauli::from_code(code & 3), second: Pauli::from_code(code >> 2) }
    }

    pub fn is_identity(self) -> bool {
        self.code() == 0
    }

    /// The 15 non-identity two-qubit Paulis, ordered by code.
    pub fn non_identity() -> impl Iterator<Item = PauliPair> {
        (1u8..16).map(PauliPair::from_code)
    }

    /// Both factors are `I` or `Z`.
    pub fn is_pure_dephasing(self) -> bool {
        self.first.is_dephasing() && self.second.is_dephasing()
    }
}

impl fmt::Display for PauliPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.first, self.second)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_round_trip() {
        for code in 0u8..16 {
            assert_eq!(PauliPair::from_code(code).code(), code);
        }
        assert_eq!(PauliPair::non_identity().count(), 15);
    }

    #[test]
    fn anticommutation_table() {
        use Pauli::*;
        assert!(X.anticommutes(Z));
        assert!(X.anticommutes(Y));
        assert!(Y.anticommutes(Z));
        assert!(!X.anticommutes(X));
        assert!(!I.anticommutes(Y));
    }

    #[test]
    fn dephasing_pairs() {
        let n = PauliPair::non_identity().filter(|p| p.is_pure_dephasing()).count();
        assert_eq!(n, 3); // ZI, IZ, ZZ
    }
}
