//! The fixed variable alphabet and its global term-order precedence.

use std::fmt;

/// Number of variables in the fixed alphabet.
pub const NVARS: usize = 11;

/// A variable from the fixed alphabet.
///
/// Declaration order is the global precedence used by the graded
/// lexicographic term order: `z0 < z1 < x1 < x2 < x3 < z < t < u < v < w < beta`,
/// with earlier variables more significant when comparing monomials.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    Z0 = 0,
    Z1 = 1,
    X1 = 2,
    X2 = 3,
    X3 = 4,
    Z = 5,
    T = 6,
    U = 7,
    V = 8,
    W = 9,
    Beta = 10,
}

pub const ALL_VARS: [Var; NVARS] = [
    Var::Z0,
    Var::Z1,
    Var::X1,
    Var::X2,
    Var::X3,
    Var::Z,
    Var::T,
    Var::U,
    Var::V,
    Var::W,
    Var::Beta,
];

impl Var {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Var {
        ALL_VARS[i]
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Z0 => "z0",
            Var::Z1 => "z1",
            Var::X1 => "x1",
            Var::X2 => "x2",
            Var::X3 => "x3",
            Var::Z => "z",
            Var::T => "t",
            Var::U => "u",
            Var::V => "v",
            Var::W => "w",
            Var::Beta => "beta",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        ALL_VARS.iter().copied().find(|v| v.name() == s)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn name_round_trip() {
        for v in ALL_VARS {
            assert_eq!(Var::from_name(v.name()), Some(v));
            assert_eq!(Var::from_index(v.index()), v);
        }
        assert_eq!(Var::from_name("q"), None);
    }

    #[test]
    fn precedence_matches_declaration() {
        assert!(Var::Z0 < Var::Z1);
        assert!(Var::X3 < Var::Z);
        assert!(Var::Z < Var::T);
        assert!(Var::W < Var::Beta);
    }
}
