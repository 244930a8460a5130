//! Closed-form cohomology for split bundles on P^1 and for line bundles on
//! the projectivization P(E) over P^1, via pushforwards, relative Serre
//! duality, and the degenerate Leray composition; hypersurface cohomology
//! through the defining long exact sequence.

use std::fmt;

/// Grothendieck splitting type: a nonempty multiset of integers, stored
/// sorted ascending.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SplitBundle {
    degrees: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CohomologyError {
    EmptySplitting,
    RankNotThree(usize),
    NontrivialDeterminant(i64),
    AmbiguousLongExactSequence,
}

impl fmt::Display for CohomologyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CohomologyError::EmptySplitting => write!(f, "splitting type must be nonempty"),
            CohomologyError::RankNotThree(r) => {
                write!(f, "operation requires a rank-3 bundle, got rank {r}")
            }
            CohomologyError::NontrivialDeterminant(d) => {
                write!(f, "determinant degree must vanish, got {d}")
            }
            CohomologyError::AmbiguousLongExactSequence => {
                write!(
                    f,
                    "ambiguous long exact sequence: a required vanishing fails"
                )
            }
        }
    }
}

impl std::error::Error for CohomologyError {}

impl SplitBundle {
    pub fn new(mut degrees: Vec<i64>) -> Result<SplitBundle, CohomologyError> {
        if degrees.is_empty() {
            return Err(CohomologyError::EmptySplitting);
        }
        degrees.sort_unstable();
        Ok(SplitBundle { degrees })
    }

    pub fn of(degrees: &[i64]) -> SplitBundle {
        SplitBundle::new(degrees.to_vec()).expect("nonempty splitting type")
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn det_degree(&self) -> i64 {
        self.degrees.iter().sum()
    }

    pub fn dual(&self) -> SplitBundle {
        SplitBundle::of(&self.degrees.iter().map(|d| -d).collect::<Vec<_>>())
    }

    pub fn twist(&self, d: i64) -> SplitBundle {
        SplitBundle::of(&self.degrees.iter().map(|e| e + d).collect::<Vec<_>>())
    }

    /// Degrees of Sym^k: all k-fold sums with multiplicity.
    pub fn sym_power(&self, k: u32) -> SplitBundle {
        let mut sums = Vec::new();
        fn rec(degrees: &[i64], start: usize, left: u32, acc: i64, out: &mut Vec<i64>) {
            if left == 0 {
                out.push(acc);
                return;
            }
            for i in start..degrees.len() {
                rec(degrees, i, left - 1, acc + degrees[i], out);
            }
        }
        rec(&self.degrees, 0, k, 0, &mut sums);
        SplitBundle::of(&sums)
    }

    /// (h^0, h^1) on P^1, summed over the summands.
    pub fn h(&self) -> (u64, u64) {
        self.degrees
            .iter()
            .map(|&d| h_p1_line(d))
            .fold((0, 0), |(a0, a1), (b0, b1)| (a0 + b0, a1 + b1))
    }
}

impl fmt::Display for SplitBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.degrees.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// Cohomology of O(d) on P^1: (max(d+1,0), max(-d-1,0)).
pub fn h_p1_line(d: i64) -> (u64, u64) {
    ((d + 1).max(0) as u64, (-d - 1).max(0) as u64)
}

/// O_P(a) ⊗ p^* O_B(b) on P(E) for a rank-3 split bundle E over P^1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LineBundleOnPE {
    pub e: SplitBundle,
    pub a: i64,
    pub b: i64,
}

impl LineBundleOnPE {
    pub fn new(e: SplitBundle, a: i64, b: i64) -> Result<LineBundleOnPE, CohomologyError> {
        if e.rank() != 3 {
            return Err(CohomologyError::RankNotThree(e.rank()));
        }
        Ok(LineBundleOnPE { e, a, b })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct CohomologyVector {
    pub h0: u64,
    pub h1: u64,
    pub h2: u64,
    pub h3: u64,
}

impl CohomologyVector {
    pub fn as_array(&self) -> [u64; 4] {
        [self.h0, self.h1, self.h2, self.h3]
    }
}

impl fmt::Display for CohomologyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.h0, self.h1, self.h2, self.h3)
    }
}

/// (R^0 p_*, R^2 p_*) of the line bundle, as split bundles on the base;
/// None encodes the zero sheaf. R^1 vanishes for line bundles on a
/// P^2-bundle. For a <= -3 relative Serre duality gives
/// R^2 = Sym^(-a-3)(E)^v ⊗ det(E)^v ⊗ O(b).
pub fn pushforwards(l: &LineBundleOnPE) -> (Option<SplitBundle>, Option<SplitBundle>) {
    let r0 = if l.a >= 0 {
        Some(l.e.sym_power(l.a as u32).twist(l.b))
    } else {
        None
    };
    let r2 = if l.a <= -3 {
        Some(
            l.e.sym_power((-l.a - 3) as u32)
                .dual()
                .twist(l.b - l.e.det_degree()),
        )
    } else {
        None
    };
    (r0, r2)
}

/// Cohomology of the line bundle on the total space. With R^1 = 0 the Leray
/// composition over a curve degenerates:
/// (h^0(R0), h^1(R0), h^0(R2), h^1(R2)).
pub fn cohomology_pe(l: &LineBundleOnPE) -> CohomologyVector {
    let (r0, r2) = pushforwards(l);
    let (h0, h1) = r0.map(|s| s.h()).unwrap_or((0, 0));
    let (h2, h3) = r2.map(|s| s.h()).unwrap_or((0, 0));
    CohomologyVector { h0, h1, h2, h3 }
}

/// (h^0, h^1, h^2) of O_X for the hypersurface X ⊂ P(E) cut out by a
/// nonzero section of O_P(a) ⊗ p^* O_B(b) with a >= 1.
///
/// Requires the vanishings that isolate the connecting isomorphisms of the
/// defining sequence: H^0(F) = H^1(F) = 0 for F = O_P(-a) ⊗ p^* O_B(-b) and
/// H^1 = H^2 = H^3 = 0 for O_P. Refuses rather than guesses otherwise.
pub fn hypersurface_h(e: &SplitBundle, a: i64, b: i64) -> Result<(u64, u64, u64), CohomologyError> {
    assert!(a >= 1, "hypersurface degree must be at least 1");
    let f = LineBundleOnPE::new(e.clone(), -a, -b)?;
    let hf = cohomology_pe(&f);
    let ho = cohomology_pe(&LineBundleOnPE::new(e.clone(), 0, 0)?);
    if hf.h0 != 0 || hf.h1 != 0 || ho.h1 != 0 || ho.h2 != 0 || ho.h3 != 0 {
        return Err(CohomologyError::AmbiguousLongExactSequence);
    }
    Ok((ho.h0, hf.h2, hf.h3))
}

/// h^1(X, O_X) = h^0(B, E^v ⊗ O(-1)) = Σ max(-e_i, 0) for det E trivial
/// and the (4,1)-hypersurface.
pub fn h1_closed_form(e: &SplitBundle) -> Result<u64, CohomologyError> {
    let det = e.det_degree();
    if det != 0 {
        return Err(CohomologyError::NontrivialDeterminant(det));
    }
    Ok(e.degrees().iter().map(|&d| (-d).max(0) as u64).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_bundle_cohomology_on_p1() {
        assert_eq!(h_p1_line(-2), (0, 1));
        assert_eq!(h_p1_line(0), (1, 0));
        assert_eq!(h_p1_line(-1), (0, 0));
    }

    #[test]
    fn dual_twist_and_h() {
        let e = SplitBundle::of(&[-1, 0, 1]);
        let d = e.dual().twist(-1);
        assert_eq!(d.degrees(), &[-2, -1, 0]);
        assert_eq!(d.h(), (1, 1));
    }

    #[test]
    fn sym_power_degrees() {
        let e = SplitBundle::of(&[-1, 0, 1]);
        let s = e.sym_power(4);
        assert_eq!(s.rank(), 15);
        // multiplicities of degrees -4..4: 1,1,2,2,3,2,2,1,1
        let mut mult = std::collections::BTreeMap::new();
        for &d in s.degrees() {
            *mult.entry(d).or_insert(0u32) += 1;
        }
        let expect: Vec<(i64, u32)> = vec![
            (-4, 1),
            (-3, 1),
            (-2, 2),
            (-1, 2),
            (0, 3),
            (1, 2),
            (2, 2),
            (3, 1),
            (4, 1),
        ];
        assert_eq!(mult.into_iter().collect::<Vec<_>>(), expect);
        let trivial = SplitBundle::of(&[0, 0, 0]).sym_power(4);
        assert_eq!(trivial.degrees(), &[0i64; 15][..]);
    }

    #[test]
    fn pushforward_examples() {
        let l = LineBundleOnPE::new(SplitBundle::of(&[-1, 0, 1]), -4, -1).unwrap();
        let (r0, r2) = pushforwards(&l);
        assert!(r0.is_none());
        assert_eq!(r2.unwrap().degrees(), &[-2, -1, 0]);

        for a in [-1, -2] {
            let l = LineBundleOnPE::new(SplitBundle::of(&[1, 2, -2]), a, 3).unwrap();
            let (r0, r2) = pushforwards(&l);
            assert!(r0.is_none() && r2.is_none());
        }

        let l = LineBundleOnPE::new(SplitBundle::of(&[0, 0, 0]), 4, 1).unwrap();
        let (r0, r2) = pushforwards(&l);
        assert_eq!(r0.unwrap().degrees(), &[1i64; 15][..]);
        assert!(r2.is_none());
    }

    #[test]
    fn total_space_cohomology() {
        let e = SplitBundle::of(&[-1, 0, 1]);
        let v = cohomology_pe(&LineBundleOnPE::new(e.clone(), -4, -1).unwrap());
        assert_eq!(v.as_array(), [0, 0, 1, 1]);
        let v = cohomology_pe(&LineBundleOnPE::new(SplitBundle::of(&[0, 0, 0]), -4, -1).unwrap());
        assert_eq!(v.as_array(), [0, 0, 0, 0]);
        let v = cohomology_pe(&LineBundleOnPE::new(e, 0, 0).unwrap());
        assert_eq!(v.as_array(), [1, 0, 0, 0]);
    }

    #[test]
    fn hypersurface_cohomology() {
        assert_eq!(
            hypersurface_h(&SplitBundle::of(&[0, 0, 0]), 4, 1).unwrap(),
            (1, 0, 0)
        );
        assert_eq!(
            hypersurface_h(&SplitBundle::of(&[-1, 0, 1]), 4, 1).unwrap(),
            (1, 1, 1)
        );
        assert_eq!(
            hypersurface_h(&SplitBundle::of(&[-2, 0, 2]), 4, 1).unwrap(),
            (1, 2, 2)
        );
    }

    #[test]
    fn closed_form() {
        assert_eq!(h1_closed_form(&SplitBundle::of(&[0, 0, 0])).unwrap(), 0);
        assert_eq!(h1_closed_form(&SplitBundle::of(&[-1, 0, 1])).unwrap(), 1);
        assert_eq!(h1_closed_form(&SplitBundle::of(&[-2, 1, 1])).unwrap(), 2);
        assert!(h1_closed_form(&SplitBundle::of(&[1, 0, 0])).is_err());
    }

    #[test]
    fn closed_form_matches_hypersurface_h() {
        assert_eq!(
            hypersurface_h(&SplitBundle::of(&[-2, 1, 1]), 4, 1)
                .unwrap()
                .1,
            2
        );
    }
}
