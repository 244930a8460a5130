//! Vector bundles on P^1 presented by Laurent transition matrices on the
//! standard two-chart cover.
//!
//! Conventions, fixed throughout: a global section of E ⊗ O(d) is a pair
//! (f0(z), f1(w)) of polynomial vectors with f0(z) = T(z) * z^d * f1(1/z) on
//! the overlap; the line bundle O(d) has transition z^d; in an extension the
//! sub-bundle is the first basis vector and the quotient the second.
//! Transition entries live in Q[z, z^-1] or Q[t][z, z^-1].

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::gcd::det_poly_matrix;
use crate::algebra::laurent::LaurentPoly;
use crate::algebra::linalg;
use crate::algebra::poly::{MPoly, Mono, PolyError, Rat};
use crate::algebra::var::Var;
use crate::cohomology::SplitBundle;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BundleError {
    EmptyMatrix,
    NotSquare,
    ForeignVariables(String),
    NotInvertible { det: String },
    DeterminantVanishesAt { c: Rat },
    ParameterPresent,
    DegreeBoundNotCertified { detail: String },
    ObstructionNonzero,
    OwnerMismatch,
    NotTrivialSplittingType { actual: Vec<i64> },
    ChartMismatch,
    InvalidSection(String),
    Poly(PolyError),
}

impl fmt::Display for BundleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BundleError::EmptyMatrix => write!(f, "transition matrix is empty"),
            BundleError::NotSquare => write!(f, "transition matrix is not square"),
            BundleError::ForeignVariables(s) => {
                write!(f, "transition entries may only involve z and t: {s}")
            }
            BundleError::NotInvertible { det } => write!(
                f,
                "determinant is not a unit times a power of z (got {det}): not an everywhere-invertible transition"
            ),
            BundleError::DeterminantVanishesAt { c } => {
                write!(f, "determinant scalar vanishes at t = {c}")
            }
            BundleError::ParameterPresent => {
                write!(f, "operation requires a bundle over Q; specialize t first")
            }
            BundleError::DegreeBoundNotCertified { detail } => {
                write!(f, "degree bound not certified: {detail}")
            }
            BundleError::ObstructionNonzero => write!(f, "obstruction nonzero: no lift exists"),
            BundleError::OwnerMismatch => write!(f, "sections belong to different bundles"),
            BundleError::NotTrivialSplittingType { actual } => {
                write!(f, "splitting type is not trivial: {actual:?}")
            }
            BundleError::ChartMismatch => {
                write!(f, "chart data disagree: internal consistency failure")
            }
            BundleError::InvalidSection(s) => write!(f, "invalid section data: {s}"),
            BundleError::Poly(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for BundleError {}

impl From<PolyError> for BundleError {
    fn from(e: PolyError) -> Self {
        BundleError::Poly(e)
    }
}

fn entry_vars_ok(p: &MPoly, allowed: &[Var]) -> bool {
    p.vars_used().iter().all(|v| allowed.contains(v))
}

/// A vector bundle on P^1 given by an invertible Laurent transition matrix,
/// possibly with a polynomial parameter t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionBundle {
    rank: usize,
    matrix: Vec<Vec<LaurentPoly>>,
    det_shift: i64,
    det_scalar: MPoly,
}

impl TransitionBundle {
    /// Validates that det(T) = γ * z^k with γ a nonzero scalar (or a nonzero
    /// polynomial in t for parameterized bundles).
    pub fn new(matrix: Vec<Vec<LaurentPoly>>) -> Result<TransitionBundle, BundleError> {
        let rank = matrix.len();
        if rank == 0 {
            return Err(BundleError::EmptyMatrix);
        }
        if matrix.iter().any(|row| row.len() != rank) {
            return Err(BundleError::NotSquare);
        }
        for row in &matrix {
            for e in row {
                if e.var() != Var::Z || !entry_vars_ok(e.body(), &[Var::Z, Var::T]) {
                    return Err(BundleError::ForeignVariables(e.to_string()));
                }
            }
        }
        // factor the minimal shift out of each row, take a polynomial determinant
        let mut shift_sum = 0i64;
        let mut rows: Vec<Vec<MPoly>> = Vec::with_capacity(rank);
        for row in &matrix {
            let row_shift = row
                .iter()
                .filter(|e| !e.is_zero())
                .map(|e| e.shift())
                .min()
                .unwrap_or(0);
            shift_sum += row_shift;
            rows.push(
                row.iter()
                    .map(|e| {
                        e.shifted(-row_shift)
                            .to_poly()
                            .expect("row shift clears negative powers")
                    })
                    .collect(),
            );
        }
        let det = det_poly_matrix(rows);
        if det.is_zero() {
            return Err(BundleError::NotInvertible {
                det: "0".to_string(),
            });
        }
        let coeffs = det.coeffs_in(Var::Z);
        let nonzero: Vec<usize> = (0..coeffs.len())
            .filter(|&i| !coeffs[i].is_zero())
            .collect();
        if nonzero.len() != 1 {
            return Err(BundleError::NotInvertible {
                det: LaurentPoly::new(Var::Z, shift_sum, det).to_string(),
            });
        }
        let scalar = coeffs[nonzero[0]].clone();
        if !entry_vars_ok(&scalar, &[Var::T]) {
            return Err(BundleError::NotInvertible {
                det: LaurentPoly::new(Var::Z, shift_sum, det).to_string(),
            });
        }
        Ok(TransitionBundle {
            rank,
            matrix,
            det_shift: shift_sum + nonzero[0] as i64,
            det_scalar: scalar,
        })
    }

    /// Rank-1 bundle O(d).
    pub fn line(d: i64) -> TransitionBundle {
        TransitionBundle::new(vec![vec![LaurentPoly::var_power(Var::Z, d)]]).expect("line bundle")
    }

    /// Trivial bundle of the given rank.
    pub fn trivial(rank: usize) -> TransitionBundle {
        let mut m = vec![vec![LaurentPoly::zero(Var::Z); rank]; rank];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = LaurentPoly::one(Var::Z);
        }
        TransitionBundle::new(m).expect("trivial bundle")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &[Vec<LaurentPoly>] {
        &self.matrix
    }

    /// Exponent k in det(T) = γ * z^k.
    pub fn det_degree(&self) -> i64 {
        self.det_shift
    }

    pub fn det_scalar(&self) -> &MPoly {
        &self.det_scalar
    }

    /// True when entries involve the parameter t.
    pub fn has_param(&self) -> bool {
        self.matrix
            .iter()
            .flatten()
            .any(|e| e.body().contains_var(Var::T))
    }

    /// Largest |z-exponent| over all entries.
    pub fn max_abs_exponent(&self) -> i64 {
        self.matrix
            .iter()
            .flatten()
            .filter_map(|e| e.exponent_range())
            .map(|(lo, hi)| lo.abs().max(hi.abs()))
            .max()
            .unwrap_or(0)
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &TransitionBundle) -> TransitionBundle {
        let n = self.rank + other.rank;
        let mut m = vec![vec![LaurentPoly::zero(Var::Z); n]; n];
        for i in 0..self.rank {
            for j in 0..self.rank {
                m[i][j] = self.matrix[i][j].clone();
            }
        }
        for i in 0..other.rank {
            for j in 0..other.rank {
                m[self.rank + i][self.rank + j] = other.matrix[i][j].clone();
            }
        }
        TransitionBundle::new(m).expect("direct sum of valid bundles")
    }

    /// Tensor by O(d): multiply the transition by z^d.
    pub fn twist(&self, d: i64) -> TransitionBundle {
        let m = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|e| e.shifted(d)).collect())
            .collect();
        TransitionBundle::new(m).expect("twist of a valid bundle")
    }

    /// Entrywise substitution t -> c; rejects parameters where the
    /// determinant scalar vanishes.
    pub fn specialize_parameter(&self, c: &Rat) -> Result<TransitionBundle, BundleError> {
        let gamma_c = self.det_scalar.specialize(&[(Var::T, c.clone())]);
        if gamma_c.is_zero() {
            return Err(BundleError::DeterminantVanishesAt { c: c.clone() });
        }
        let mut m = Vec::with_capacity(self.rank);
        for row in &self.matrix {
            let mut out = Vec::with_capacity(self.rank);
            for e in row {
                out.push(e.specialize(&[(Var::T, c.clone())])?);
            }
            m.push(out);
        }
        TransitionBundle::new(m)
    }
}

/// Extension data: T = [[z^m, c(z)], [0, z^n]] with class [c(z) * z^(-n)]
/// in H^1(O(m-n)). The sub-bundle O(m) is the first basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtClassSpec {
    pub sub_degree: i64,
    pub quot_degree: i64,
    pub cocycle: LaurentPoly,
}

impl ExtClassSpec {
    pub fn new(sub_degree: i64, quot_degree: i64, cocycle: LaurentPoly) -> ExtClassSpec {
        assert_eq!(cocycle.var(), Var::Z);
        ExtClassSpec {
            sub_degree,
            quot_degree,
            cocycle,
        }
    }
}

/// Upper-triangular bundle realizing the extension class.
pub fn make_extension(spec: &ExtClassSpec) -> TransitionBundle {
    let m = vec![
        vec![
            LaurentPoly::var_power(Var::Z, spec.sub_degree),
            spec.cocycle.clone(),
        ],
        vec![
            LaurentPoly::zero(Var::Z),
            LaurentPoly::var_power(Var::Z, spec.quot_degree),
        ],
    ];
    TransitionBundle::new(m).expect("triangular transitions are invertible")
}

/// The family G: extension of O(1) by O(-1) with class t * [z^-1], the
/// parameter multiple of the generator of H^1(O(-2)).
pub fn jumping_family() -> ExtClassSpec {
    ExtClassSpec::new(-1, 1, LaurentPoly::from_poly(Var::Z, MPoly::var(Var::T)))
}

/// Chart data of a degree-d form in (z0, z1): (f(1,z), f(w,1)).
pub fn form_charts(form: &MPoly) -> Result<(MPoly, MPoly), BundleError> {
    if !entry_vars_ok(form, &[Var::Z0, Var::Z1]) {
        return Err(BundleError::InvalidSection(format!(
            "expected a form in z0, z1, got {form}"
        )));
    }
    let d = form.total_degree();
    if !form.is_zero() && form.terms().iter().any(|(m, _)| m.total_degree() != d) {
        return Err(BundleError::InvalidSection(format!(
            "expected a homogeneous form, got {form}"
        )));
    }
    let chart0 = form
        .specialize(&[(Var::Z0, Rat::one())])
        .substitute(Var::Z1, &MPoly::var(Var::Z));
    let chart1 = form
        .specialize(&[(Var::Z1, Rat::one())])
        .substitute(Var::Z0, &MPoly::var(Var::W));
    Ok((chart0, chart1))
}

/// A global section of bundle ⊗ O(twist), stored as chart data
/// (f0 in z, f1 in w, both possibly in t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalSection {
    bundle: TransitionBundle,
    twist: i64,
    f0: Vec<MPoly>,
    f1: Vec<MPoly>,
}

/// T(z) * z^d * f1(1/z) as a Laurent vector.
fn apply_transition(bundle: &TransitionBundle, d: i64, f1: &[MPoly]) -> Vec<LaurentPoly> {
    let mut out = vec![LaurentPoly::zero(Var::Z); bundle.rank()];
    for (i, entry) in f1.iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let inverted = LaurentPoly::from_inverted_poly(Var::Z, Var::W, entry).shifted(d);
        for (k, out_k) in out.iter_mut().enumerate() {
            let term = bundle.matrix[k][i].mul(&inverted);
            *out_k = out_k.add(&term);
        }
    }
    out
}

impl GlobalSection {
    /// Validates the transition identity f0(z) = T(z) * z^d * f1(1/z).
    pub fn new(
        bundle: TransitionBundle,
        twist: i64,
        f0: Vec<MPoly>,
        f1: Vec<MPoly>,
    ) -> Result<GlobalSection, BundleError> {
        if f0.len() != bundle.rank() || f1.len() != bundle.rank() {
            return Err(BundleError::InvalidSection(
                "chart vectors must have length equal to the rank".to_string(),
            ));
        }
        for p in &f0 {
            if !entry_vars_ok(p, &[Var::Z, Var::T]) {
                return Err(BundleError::InvalidSection(format!(
                    "chart-0 entries must involve only z and t, got {p}"
                )));
            }
        }
        for p in &f1 {
            if !entry_vars_ok(p, &[Var::W, Var::T]) {
                return Err(BundleError::InvalidSection(format!(
                    "chart-1 entries must involve only w and t, got {p}"
                )));
            }
        }
        let image = apply_transition(&bundle, twist, &f1);
        for (k, img) in image.iter().enumerate() {
            let lhs = LaurentPoly::from_poly(Var::Z, f0[k].clone());
            if &lhs != img {
                return Err(BundleError::InvalidSection(format!(
                    "transition identity fails in coordinate {k}: {} != {}",
                    f0[k], img
                )));
            }
        }
        Ok(GlobalSection {
            bundle,
            twist,
            f0,
            f1,
        })
    }

    pub fn bundle(&self) -> &TransitionBundle {
        &self.bundle
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn f0(&self) -> &[MPoly] {
        &self.f0
    }

    pub fn f1(&self) -> &[MPoly] {
        &self.f1
    }

    pub fn is_zero(&self) -> bool {
        self.f0.iter().all(|p| p.is_zero())
    }

    pub fn add(&self, other: &GlobalSection) -> Result<GlobalSection, BundleError> {
        if self.bundle != other.bundle || self.twist != other.twist {
            return Err(BundleError::OwnerMismatch);
        }
        Ok(GlobalSection {
            bundle: self.bundle.clone(),
            twist: self.twist,
            f0: self
                .f0
                .iter()
                .zip(&other.f0)
                .map(|(a, b)| a.add(b))
                .collect(),
            f1: self
                .f1
                .iter()
                .zip(&other.f1)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn scale(&self, c: &Rat) -> GlobalSection {
        GlobalSection {
            bundle: self.bundle.clone(),
            twist: self.twist,
            f0: self.f0.iter().map(|p| p.scale(c)).collect(),
            f1: self.f1.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Multiply by a polynomial in the parameter t (a global function on the
    /// family base).
    pub fn scale_param(&self, p: &MPoly) -> GlobalSection {
        assert!(entry_vars_ok(p, &[Var::T]));
        GlobalSection {
            bundle: self.bundle.clone(),
            twist: self.twist,
            f0: self.f0.iter().map(|q| q.mul(p)).collect(),
            f1: self.f1.iter().map(|q| q.mul(p)).collect(),
        }
    }

    /// Multiply by a homogeneous form in (z0, z1); the twist grows by its
    /// degree.
    pub fn mul_form(&self, form: &MPoly) -> Result<GlobalSection, BundleError> {
        let (c0, c1) = form_charts(form)?;
        Ok(GlobalSection {
            bundle: self.bundle.clone(),
            twist: self.twist + form.total_degree() as i64,
            f0: self.f0.iter().map(|p| p.mul(&c0)).collect(),
            f1: self.f1.iter().map(|p| p.mul(&c1)).collect(),
        })
    }

    /// Substitute t -> c in the section and its owner.
    pub fn specialize_parameter(&self, c: &Rat) -> Result<GlobalSection, BundleError> {
        let bundle = self.bundle.specialize_parameter(c)?;
        let bind = [(Var::T, c.clone())];
        GlobalSection::new(
            bundle,
            self.twist,
            self.f0.iter().map(|p| p.specialize(&bind)).collect(),
            self.f1.iter().map(|p| p.specialize(&bind)).collect(),
        )
    }
}

/// Ansatz degree for section computations, per the certificate-backed
/// enlargement policy.
fn ansatz_degree(bundle: &TransitionBundle, d: i64, enlargement: u32) -> u32 {
    let base = d + bundle.rank() as i64 * bundle.max_abs_exponent() + 6;
    base.max(0) as u32 + 4 * enlargement
}

/// Unknown index layout for the section ansatz.
fn unknown_count(rank: usize, w_deg: u32, t_deg: u32) -> usize {
    rank * (w_deg as usize + 1) * (t_deg as usize + 1)
}

/// Constraint matrix for sections of bundle ⊗ O(d) with f1 of w-degree <= D
/// and coefficients of t-degree <= Dt. Rows are indexed by (coordinate,
/// negative z-exponent, t-exponent), in sorted order.
fn section_constraints(
    bundle: &TransitionBundle,
    d: i64,
    w_deg: u32,
    t_deg: u32,
) -> (Vec<Vec<Rat>>, usize) {
    let rank = bundle.rank();
    let cols = unknown_count(rank, w_deg, t_deg);
    // base image of e_i * w^j under the transition: column i shifted by d - j
    // unknown (i, j, l) has image = base(i, j) * t^l
    let mut entries: HashMap<(usize, i64, u32), Vec<(usize, Rat)>> = HashMap::new();
    for i in 0..rank {
        for j in 0..=w_deg {
            for k in 0..rank {
                let img = bundle.matrix[k][i].shifted(d - j as i64);
                let Some((lo, hi)) = img.exponent_range() else {
                    continue;
                };
                for h in lo..hi.min(-1) + 1 {
                    let coeff = img.coeff_at(h);
                    if coeff.is_zero() {
                        continue;
                    }
                    for (mono, c) in coeff.terms() {
                        let m = mono.exp(Var::T);
                        for l in 0..=t_deg {
                            let col = (i * (w_deg as usize + 1) + j as usize)
                                * (t_deg as usize + 1)
                                + l as usize;
                            entries
                                .entry((k, h, m + l))
                                .or_default()
                                .push((col, c.clone()));
                        }
                    }
                }
            }
        }
    }
    let mut keys: Vec<(usize, i64, u32)> = entries.keys().copied().collect();
    keys.sort();
    let mut matrix = Vec::with_capacity(keys.len());
    for key in keys {
        let mut row = vec![Rat::zero(); cols];
        for (col, c) in &entries[&key] {
            row[*col] += c;
        }
        matrix.push(row);
    }
    (matrix, cols)
}

fn unknowns_to_section(
    bundle: &TransitionBundle,
    d: i64,
    w_deg: u32,
    t_deg: u32,
    solution: &[Rat],
) -> GlobalSection {
    let rank = bundle.rank();
    let mut f1 = vec![MPoly::zero(); rank];
    for i in 0..rank {
        for j in 0..=w_deg {
            for l in 0..=t_deg {
                let col =
                    (i * (w_deg as usize + 1) + j as usize) * (t_deg as usize + 1) + l as usize;
                let c = &solution[col];
                if c.is_zero() {
                    continue;
                }
                let mono = Mono::of_var(Var::W, j).mul(&Mono::of_var(Var::T, l));
                f1[i] = f1[i].add(&MPoly::monomial(c.clone(), mono));
            }
        }
    }
    let image = apply_transition(bundle, d, &f1);
    let f0: Vec<MPoly> = image
        .iter()
        .map(|l| l.to_poly().expect("constraints cleared negative powers"))
        .collect();
    GlobalSection::new(bundle.clone(), d, f0, f1).expect("constructed section satisfies identity")
}

/// Basis of the space of sections with bounded ansatz degrees. Used directly
/// for parameterized bundles; [`global_sections`] wraps the Q case.
pub fn sections_with_bounds(
    bundle: &TransitionBundle,
    d: i64,
    w_deg: u32,
    t_deg: u32,
) -> Vec<GlobalSection> {
    let (matrix, cols) = section_constraints(bundle, d, w_deg, t_deg);
    let basis = linalg::nullspace(matrix, cols);
    basis
        .iter()
        .map(|sol| unknowns_to_section(bundle, d, w_deg, t_deg, sol))
        .collect()
}

fn h0_dim(bundle: &TransitionBundle, d: i64, enlargement: u32) -> usize {
    let w_deg = ansatz_degree(bundle, d, enlargement);
    let (matrix, cols) = section_constraints(bundle, d, w_deg, 0);
    cols - linalg::rank(matrix)
}

/// Basis of H^0(bundle ⊗ O(d)) for a bundle over Q, by exact linear algebra.
pub fn global_sections(
    bundle: &TransitionBundle,
    d: i64,
) -> Result<Vec<GlobalSection>, BundleError> {
    if bundle.has_param() {
        return Err(BundleError::ParameterPresent);
    }
    Ok(sections_with_bounds(
        bundle,
        d,
        ansatz_degree(bundle, d, 0),
        0,
    ))
}

const SPLITTING_RETRIES: u32 = 5;

/// Grothendieck splitting type of a bundle over Q, computed from section
/// counts of twists: Δ(d) = h^0(E(d)) - h^0(E(d-1)) counts the summands
/// with a_i >= -d. Certified by Σ a_i = det-degree, with ansatz enlargement
/// on failure.
pub fn splitting_type(bundle: &TransitionBundle) -> Result<SplitBundle, BundleError> {
    if bundle.has_param() {
        return Err(BundleError::ParameterPresent);
    }
    let rank = bundle.rank();
    let window = bundle.det_degree().abs() + rank as i64 * bundle.max_abs_exponent() + 6;
    let mut detail = String::new();
    for attempt in 0..=SPLITTING_RETRIES {
        let h: Vec<usize> = (-window - 1..=window)
            .map(|d| h0_dim(bundle, d, attempt))
            .collect();
        let delta: Vec<i64> = h.windows(2).map(|p| p[1] as i64 - p[0] as i64).collect();
        // delta[idx] corresponds to d = -window + idx
        if delta.first() != Some(&0) || delta.last() != Some(&(rank as i64)) {
            detail = format!(
                "Δ did not stabilize at the window ends (Δ(-{window}) = {:?}, Δ({window}) = {:?})",
                delta.first(),
                delta.last()
            );
            continue;
        }
        let mut degrees = Vec::with_capacity(rank);
        let mut ok = true;
        for idx in 1..delta.len() {
            let mult = delta[idx] - delta[idx - 1];
            if mult < 0 {
                ok = false;
                detail = "non-monotone section counts".to_string();
                break;
            }
            let a = -(-window + idx as i64);
            for _ in 0..mult {
                degrees.push(a);
            }
        }
        if !ok {
            continue;
        }
        if degrees.len() != rank {
            detail = format!("recovered {} summands for rank {rank}", degrees.len());
            continue;
        }
        let sum: i64 = degrees.iter().sum();
        if sum != bundle.det_degree() {
            detail = format!(
                "Σ a_i = {sum} disagrees with det-degree {}",
                bundle.det_degree()
            );
            continue;
        }
        degrees.sort_unstable();
        return Ok(SplitBundle::of(&degrees));
    }
    Err(BundleError::DegreeBoundNotCertified { detail })
}

/// Lift a section s of the quotient O(n) through the extension
/// [[z^m, c], [0, z^n]]: solves for the first coordinate, polynomially in t.
/// `s` is a homogeneous degree-n form in (z0, z1).
pub fn lift_section(spec: &ExtClassSpec, s: &MPoly) -> Result<GlobalSection, BundleError> {
    let bundle = make_extension(spec);
    if s.total_degree() as i64 != spec.quot_degree && !s.is_zero() {
        return Err(BundleError::InvalidSection(format!(
            "quotient section must have degree {}, got {s}",
            spec.quot_degree
        )));
    }
    let (s0, s1) = form_charts(s)?;
    // constraints: negative z-coefficients of z^m * A1(1/z) + c(z) * s1(1/z)
    // vanish, with A1 of bounded w- and t-degree
    let m = spec.sub_degree;
    let w_deg = (spec.sub_degree.abs() + spec.quot_degree.abs() + bundle.max_abs_exponent() + 6)
        .max(0) as u32;
    let t_deg = spec
        .cocycle
        .body()
        .degree_in(Var::T)
        .max(s.degree_in(Var::T))
        + 2;
    let rhs_laurent = spec
        .cocycle
        .mul(&LaurentPoly::from_inverted_poly(Var::Z, Var::W, &s1));
    let lo_unknown = m - w_deg as i64;
    let lo = rhs_laurent
        .exponent_range()
        .map(|(l, _)| l.min(lo_unknown))
        .unwrap_or(lo_unknown)
        .min(-1);
    let cols = (w_deg as usize + 1) * (t_deg as usize + 1);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for h in lo..0 {
        for me in 0..=(t_deg + spec.cocycle.body().degree_in(Var::T)) {
            let mut row = vec![Rat::zero(); cols];
            let mut any = false;
            // z^m * A1(1/z): unknown a_{j,l} contributes at exponent m - j
            for j in 0..=w_deg {
                if m - j as i64 != h {
                    continue;
                }
                if me <= t_deg {
                    row[j as usize * (t_deg as usize + 1) + me as usize] = Rat::one();
                    any = true;
                }
            }
            let b = rhs_laurent.coeff_at(h).coeff_of(Var::T, me);
            let b = b.constant_value().expect("coefficient is a scalar");
            if any || !b.is_zero() {
                rows.push(row);
                rhs.push(-b);
            }
        }
    }
    let solution = linalg::solve(&rows, &rhs).ok_or(BundleError::ObstructionNonzero)?;
    let mut a1 = MPoly::zero();
    for j in 0..=w_deg {
        for l in 0..=t_deg {
            let c = &solution[j as usize * (t_deg as usize + 1) + l as usize];
            if c.is_zero() {
                continue;
            }
            let mono = Mono::of_var(Var::W, j).mul(&Mono::of_var(Var::T, l));
            a1 = a1.add(&MPoly::monomial(c.clone(), mono));
        }
    }
    let a0_laurent = LaurentPoly::from_inverted_poly(Var::Z, Var::W, &a1)
        .shifted(m)
        .add(&rhs_laurent);
    let a0 = a0_laurent
        .to_poly()
        .expect("solved constraints clear negative powers");
    GlobalSection::new(bundle, 0, vec![a0, s0], vec![a1, s1])
}

/// Degree-k exponent multisets over `rank` slots, in descending
/// lexicographic order. This is the coordinate order of Sym^k.
pub fn sym_basis(rank: usize, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; rank];
    fn rec(rank: usize, slot: usize, left: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slot + 1 == rank {
            current[slot] = left;
            out.push(current.clone());
            return;
        }
        for e in (0..=left).rev() {
            current[slot] = e;
            rec(rank, slot + 1, left - e, current, out);
        }
    }
    if rank == 0 {
        return out;
    }
    rec(rank, 0, k, &mut current, &mut out);
    out
}

type FiberPoly = HashMap<Vec<u32>, LaurentPoly>;

fn fiber_mul(a: &FiberPoly, b: &FiberPoly) -> FiberPoly {
    let mut out: FiberPoly = HashMap::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            let prod = ca.mul(cb);
            match out.get_mut(&m) {
                Some(e) => *e = e.add(&prod),
                None => {
                    out.insert(m, prod);
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn fiber_pow(a: &FiberPoly, e: u32, rank: usize) -> FiberPoly {
    let mut acc: FiberPoly = HashMap::new();
    acc.insert(vec![0; rank], LaurentPoly::one(Var::Z));
    for _ in 0..e {
        acc = fiber_mul(&acc, a);
    }
    acc
}

/// Matrix of the substitution X_j -> Σ_l M[l][j] X_l on degree-k monomials:
/// entry [α][β] is the coefficient of X^α in Π_j (column j)^(β_j). This is
/// the coordinate action induced by v0 = M v1 on symmetric powers, and it
/// is multiplicative in M.
fn sym_matrix_of(
    entry: impl Fn(usize, usize) -> LaurentPoly,
    rank: usize,
    k: u32,
) -> Vec<Vec<LaurentPoly>> {
    let basis = sym_basis(rank, k);
    let mut column_expansions: Vec<FiberPoly> = Vec::with_capacity(basis.len());
    for beta in &basis {
        let mut acc: FiberPoly = HashMap::new();
        acc.insert(vec![0; rank], LaurentPoly::one(Var::Z));
        for (j, &e) in beta.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let mut linear: FiberPoly = HashMap::new();
            for l in 0..rank {
                let m_lj = entry(l, j);
                if m_lj.is_zero() {
                    continue;
                }
                let mut unit = vec![0u32; rank];
                unit[l] = 1;
                linear.insert(unit, m_lj);
            }
            acc = fiber_mul(&acc, &fiber_pow(&linear, e, rank));
        }
        column_expansions.push(acc);
    }
    basis
        .iter()
        .map(|alpha| {
            column_expansions
                .iter()
                .map(|col| {
                    col.get(alpha)
                        .cloned()
                        .unwrap_or_else(|| LaurentPoly::zero(Var::Z))
                })
                .collect()
        })
        .collect()
}

/// Transition of Sym^k on the descending-lex monomial basis.
pub fn sym_power_transition(bundle: &TransitionBundle, k: u32) -> TransitionBundle {
    let rank = bundle.rank();
    let rows = sym_matrix_of(|l, j| bundle.matrix[l][j].clone(), rank, k);
    TransitionBundle::new(rows).expect("symmetric power of a valid bundle")
}

/// Product of k sections of the same bundle as a section of Sym^k, twists
/// adding.
pub fn section_sym_product(sections: &[GlobalSection]) -> Result<GlobalSection, BundleError> {
    assert!(!sections.is_empty(), "empty symmetric product");
    let owner = sections[0].bundle.clone();
    if sections.iter().any(|s| s.bundle != owner) {
        return Err(BundleError::OwnerMismatch);
    }
    let rank = owner.rank();
    let k = sections.len() as u32;
    let twist: i64 = sections.iter().map(|s| s.twist).sum();
    let basis = sym_basis(rank, k);
    let index: HashMap<Vec<u32>, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, b)| (b.clone(), i))
        .collect();

    let expand = |charts: Vec<&[MPoly]>| -> Vec<MPoly> {
        let mut acc: HashMap<Vec<u32>, MPoly> = HashMap::new();
        acc.insert(vec![0; rank], MPoly::one());
        for f in charts {
            let mut next: HashMap<Vec<u32>, MPoly> = HashMap::new();
            for (m, c) in &acc {
                for (j, fj) in f.iter().enumerate() {
                    if fj.is_zero() {
                        continue;
                    }
                    let mut mm = m.clone();
                    mm[j] += 1;
                    let prod = c.mul(fj);
                    match next.get_mut(&mm) {
                        Some(e) => *e = e.add(&prod),
                        None => {
                            next.insert(mm, prod);
                        }
                    }
                }
            }
            acc = next;
        }
        let mut out = vec![MPoly::zero(); basis.len()];
        for (m, c) in acc {
            out[index[&m]] = c;
        }
        out
    };

    let f0 = expand(sections.iter().map(|s| s.f0.as_slice()).collect());
    let f1 = expand(sections.iter().map(|s| s.f1.as_slice()).collect());
    GlobalSection::new(sym_power_transition(&owner, k), twist, f0, f1)
}

/// Sections realizing an isomorphism with the trivial bundle; requires
/// splitting type (0,...,0). The chart-0 coordinate matrix of the result has
/// constant nonzero determinant.
pub fn trivialization_frame(bundle: &TransitionBundle) -> Result<Vec<GlobalSection>, BundleError> {
    let st = splitting_type(bundle)?;
    if st.degrees().iter().any(|&d| d != 0) {
        return Err(BundleError::NotTrivialSplittingType {
            actual: st.degrees().to_vec(),
        });
    }
    let sections = global_sections(bundle, 0)?;
    if sections.len() != bundle.rank() {
        return Err(BundleError::DegreeBoundNotCertified {
            detail: format!(
                "trivial type but {} sections for rank {}",
                sections.len(),
                bundle.rank()
            ),
        });
    }
    let det = det_poly_matrix(frame_matrix_chart0(&sections));
    if det.is_zero() || !det.is_constant() {
        return Err(BundleError::ChartMismatch);
    }
    Ok(sections)
}

/// Columns are the chart-0 coordinates of the frame sections.
fn frame_matrix_chart0(frame: &[GlobalSection]) -> Vec<Vec<MPoly>> {
    let rank = frame.len();
    (0..rank)
        .map(|i| (0..rank).map(|j| frame[j].f0[i].clone()).collect())
        .collect()
}

fn frame_matrix_chart1(frame: &[GlobalSection]) -> Vec<Vec<MPoly>> {
    let rank = frame.len();
    (0..rank)
        .map(|i| (0..rank).map(|j| frame[j].f1[i].clone()).collect())
        .collect()
}

fn adjugate(m: &[Vec<MPoly>]) -> Vec<Vec<MPoly>> {
    let n = m.len();
    let mut adj = vec![vec![MPoly::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<MPoly>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != i)
                        .map(|c| m[r][c].clone())
                        .collect()
                })
                .collect();
            let cof = det_poly_matrix(minor);
            adj[i][j] = if (i + j) % 2 == 0 { cof } else { cof.neg() };
        }
    }
    adj
}

fn poly_inverse_of_unimodular(m: &[Vec<MPoly>]) -> Option<Vec<Vec<MPoly>>> {
    let det = det_poly_matrix(m.to_vec());
    let c = det.constant_value()?;
    if c.is_zero() {
        return None;
    }
    let inv = c.recip();
    Some(
        adjugate(m)
            .into_iter()
            .map(|row| row.into_iter().map(|p| p.scale(&inv)).collect())
            .collect(),
    )
}

/// Sym^k of a polynomial matrix whose entries live in the chart variable
/// `var`. The fiber-expansion helpers run over Laurent polynomials in z, so
/// chart-1 data (polynomials in w) pass through a temporary renaming.
fn sym_poly_matrix(m: &[Vec<MPoly>], k: u32, var: Var) -> Vec<Vec<MPoly>> {
    let rank = m.len();
    let embed = |p: &MPoly| {
        if var == Var::Z {
            p.clone()
        } else {
            p.substitute(var, &MPoly::var(Var::Z))
        }
    };
    let restore = |p: MPoly| {
        if var == Var::Z {
            p
        } else {
            p.substitute(Var::Z, &MPoly::var(var))
        }
    };
    let rows = sym_matrix_of(
        |l, j| LaurentPoly::from_poly(Var::Z, embed(&m[l][j])),
        rank,
        k,
    );
    rows.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|l| restore(l.to_poly().expect("polynomial entries")))
                .collect()
        })
        .collect()
}

fn mat_vec(m: &[Vec<MPoly>], v: &[MPoly]) -> Vec<MPoly> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(MPoly::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
        })
        .collect()
}

/// Express a section of Sym^k(E) ⊗ O(b) as a bihomogeneous Cox form of
/// bidegree (b, k) in (z0, z1; x1..x_r), where x_i corresponds to the i-th
/// frame section. The frame must trivialize E (constant-determinant chart
/// matrices); chart data are checked to agree.
pub fn change_frame(
    section: &GlobalSection,
    frame: &[GlobalSection],
) -> Result<MPoly, BundleError> {
    let rank = frame.len();
    if rank == 0 || rank > 3 {
        return Err(BundleError::InvalidSection(
            "frames of rank 1..=3 are supported".to_string(),
        ));
    }
    let owner = frame[0].bundle.clone();
    if frame.iter().any(|s| s.bundle != owner || s.twist != 0) {
        return Err(BundleError::OwnerMismatch);
    }
    // infer the symmetric degree from the section's rank
    let n = section.bundle.rank();
    let k = (0u32..=16)
        .find(|&k| sym_basis(rank, k).len() == n)
        .ok_or(BundleError::OwnerMismatch)?;
    if section.bundle != sym_power_transition(&owner, k) {
        return Err(BundleError::OwnerMismatch);
    }
    let b = section.twist;
    if b < 0 {
        return Err(BundleError::InvalidSection(
            "negative twist has no bihomogeneous form".to_string(),
        ));
    }

    let inv0 = poly_inverse_of_unimodular(&frame_matrix_chart0(frame))
        .ok_or(BundleError::ChartMismatch)?;
    let inv1 = poly_inverse_of_unimodular(&frame_matrix_chart1(frame))
        .ok_or(BundleError::ChartMismatch)?;
    let c0 = mat_vec(&sym_poly_matrix(&inv0, k, Var::Z), &section.f0);
    let c1 = mat_vec(&sym_poly_matrix(&inv1, k, Var::W), &section.f1);

    // frame coordinates must behave as sections of O(b) in the trivial
    // bundle: c0(z) = z^b * c1(1/z)
    for (p0, p1) in c0.iter().zip(&c1) {
        if p0.degree_in(Var::Z) as i64 > b {
            return Err(BundleError::ChartMismatch);
        }
        let expected = LaurentPoly::from_inverted_poly(Var::Z, Var::W, p1).shifted(b);
        if LaurentPoly::from_poly(Var::Z, p0.clone()) != expected {
            return Err(BundleError::ChartMismatch);
        }
    }

    // homogenize: z^e -> z0^(b-e) z1^e, attach the frame monomial in x
    let basis = sym_basis(rank, k);
    let xs = [Var::X1, Var::X2, Var::X3];
    let mut out = MPoly::zero();
    for (beta, coord) in basis.iter().zip(&c0) {
        if coord.is_zero() {
            continue;
        }
        let mut xmono = Mono::unit();
        for (i, &e) in beta.iter().enumerate() {
            xmono = xmono.mul(&Mono::of_var(xs[i], e));
        }
        for (m, c) in coord.terms() {
            let e = m.exp(Var::Z);
            debug_assert_eq!(m.total_degree(), e, "coordinates are polynomials in z");
            let zmono = Mono::of_var(Var::Z0, b as u32 - e).mul(&Mono::of_var(Var::Z1, e));
            out = out.add(&MPoly::monomial(c.clone(), zmono.mul(&xmono)));
        }
    }
    Ok(out)
}

/// g0(z) * T(z) * g1(1/z) for polynomial gauge matrices g0 (in z) and g1
/// (in w). With unimodular gauges this presents an isomorphic bundle.
pub fn gauge_transform(
    bundle: &TransitionBundle,
    g0: &[Vec<MPoly>],
    g1: &[Vec<MPoly>],
) -> Result<TransitionBundle, BundleError> {
    let rank = bundle.rank();
    let zero = LaurentPoly::zero(Var::Z);
    let mut left = vec![vec![zero.clone(); rank]; rank];
    for i in 0..rank {
        for j in 0..rank {
            let mut acc = zero.clone();
            for (l, g_il) in g0[i].iter().enumerate() {
                acc = acc.add(&bundle.matrix[l][j].mul_poly(g_il));
            }
            left[i][j] = acc;
        }
    }
    let mut out = vec![vec![zero.clone(); rank]; rank];
    for i in 0..rank {
        for j in 0..rank {
            let mut acc = zero.clone();
            for (l, g_lj) in g1.iter().map(|row| &row[j]).enumerate() {
                let inv = LaurentPoly::from_inverted_poly(Var::Z, Var::W, g_lj);
                acc = acc.add(&left[i][l].mul(&inv));
            }
            out[i][j] = acc;
        }
    }
    TransitionBundle::new(out)
}
