//! The family data: the extension bundle G, E = G ⊕ O, the lift q, the unit
//! section y, the special section σ0, the τ-basis, and the τ-search.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use super::config::{FamilyConfig, TauMode, TauSearchConfig};
use super::PipelineError;
use crate::algebra::poly::{MPoly, Rat};
use crate::algebra::var::Var;
use crate::bundle::{
    change_frame, global_sections, jumping_family, lift_section, make_extension,
    section_sym_product, sections_with_bounds, sym_basis, sym_power_transition,
    trivialization_frame, GlobalSection, TransitionBundle,
};
use crate::smooth::{singular_locus_empty, Bidegree14Form};

pub const BASIS_ORDER_VERSION: &str = "1";

#[derive(Clone, Debug)]
pub struct FamilyData {
    /// The rank-2 extension family over Q[t].
    pub g: TransitionBundle,
    /// E = G ⊕ O over Q[t].
    pub e: TransitionBundle,
    /// Lift of s through G ↠ O(1), as a section of G.
    pub q: GlobalSection,
    /// The lift padded into E.
    pub q_e: GlobalSection,
    /// Unit section of the trivial summand of E.
    pub y: GlobalSection,
    /// a·y^4 + b·q^4 over Q[t], a section of Sym^4(E) ⊗ O(1).
    pub ay4_bq4: GlobalSection,
    /// The special section σ0 = a·y0^4 + b·q0^4, built in the fiber at t = 0.
    pub sigma0: GlobalSection,
}

impl FamilyData {
    /// σ = a·y^4 + b·q^4 + t·τ.
    pub fn sigma(&self, tau: &GlobalSection) -> Result<GlobalSection, PipelineError> {
        Ok(self.ay4_bq4.add(&tau.scale_param(&MPoly::var(Var::T)))?)
    }
}

/// G = extension with class t·[z^-1]; E = G ⊕ O; q lifts s; σ0 from the
/// t = 0 fiber.
pub fn build_family(config: &FamilyConfig) -> Result<FamilyData, PipelineError> {
    let spec = jumping_family();
    let g = make_extension(&spec);
    let e = g.direct_sum(&TransitionBundle::trivial(1));
    let q = lift_section(&spec, &config.s.to_form())?;
    let q_e = GlobalSection::new(
        e.clone(),
        0,
        vec![q.f0()[0].clone(), q.f0()[1].clone(), MPoly::zero()],
        vec![q.f1()[0].clone(), q.f1()[1].clone(), MPoly::zero()],
    )?;
    let y = GlobalSection::new(
        e.clone(),
        0,
        vec![MPoly::zero(), MPoly::zero(), MPoly::one()],
        vec![MPoly::zero(), MPoly::zero(), MPoly::one()],
    )?;
    let y4 = section_sym_product(&vec![y.clone(); 4])?;
    let q4 = section_sym_product(&vec![q_e.clone(); 4])?;
    let ay4_bq4 = y4
        .mul_form(&config.a.to_form())?
        .add(&q4.mul_form(&config.b.to_form())?)?;

    // σ0 built independently in the fiber at t = 0
    let zero = Rat::zero();
    let q0 = q_e.specialize_parameter(&zero)?;
    let y0 = y.specialize_parameter(&zero)?;
    let y0_4 = section_sym_product(&vec![y0; 4])?;
    let q0_4 = section_sym_product(&vec![q0; 4])?;
    let sigma0 = y0_4
        .mul_form(&config.a.to_form())?
        .add(&q0_4.mul_form(&config.b.to_form())?)?;

    Ok(FamilyData {
        g,
        e,
        q,
        q_e,
        y,
        ay4_bq4,
        sigma0,
    })
}

/// A deterministic spanning set of H^0(Sym^4(E) ⊗ O(1)) over Q[t], one graded
/// piece Sym^k(G)·y^(4-k) at a time, certified to span the fiber space at
/// the reference parameter.
#[derive(Clone, Debug)]
pub struct TauBasis {
    pub sections: Vec<GlobalSection>,
    /// Graded piece k of each element.
    pub piece: Vec<u32>,
}

const TAU_BASIS_RETRIES: u32 = 4;

/// Flatten the specialized chart data of a section into a Q-vector for rank
/// bookkeeping, in a fixed coordinate order.
fn flatten(section: &GlobalSection) -> Vec<(u64, Rat)> {
    let mut out = Vec::new();
    for (ci, p) in section.f0().iter().enumerate() {
        for (m, c) in p.terms() {
            let key = (ci as u64) << 32 | m.exp(Var::Z) as u64;
            out.push((key, c.clone()));
        }
    }
    for (ci, p) in section.f1().iter().enumerate() {
        let base = 1u64 << 48;
        for (m, c) in p.terms() {
            let key = base | (ci as u64) << 32 | m.exp(Var::W) as u64;
            out.push((key, c.clone()));
        }
    }
    out.sort_by_key(|(k, _)| *k);
    out
}

/// Incremental echelon structure over sparse Q-vectors.
struct Echelon {
    rows: Vec<Vec<(u64, Rat)>>,
}

impl Echelon {
    fn new() -> Echelon {
        Echelon { rows: Vec::new() }
    }

    fn try_insert(&mut self, mut v: Vec<(u64, Rat)>) -> bool {
        for row in &self.rows {
            if v.is_empty() {
                return false;
            }
            let lead = v[0].0;
            if row[0].0 == lead {
                let factor = &v[0].1 / &row[0].1;
                v = sparse_sub(&v, row, &factor);
            }
        }
        if v.is_empty() {
            return false;
        }
        self.rows.push(v);
        self.rows.sort_by_key(|r| r[0].0);
        true
    }
}

fn sparse_sub(a: &[(u64, Rat)], b: &[(u64, Rat)], factor: &Rat) -> Vec<(u64, Rat)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((b[j].0, -(&b[j].1 * factor)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = &a[i].1 - &(&b[j].1 * factor);
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for (k, c) in &b[j..] {
        out.push((*k, -(c * factor)));
    }
    out
}

/// Embed a section of Sym^k(G) ⊗ O(1) into Sym^4(E) ⊗ O(1) by multiplying
/// with y^(4-k): coordinates land at the Sym^4 monomials with y-exponent 4-k.
fn embed_graded_piece(
    sym4e: &TransitionBundle,
    k: u32,
    section: &GlobalSection,
) -> Result<GlobalSection, PipelineError> {
    let basis_g = sym_basis(2, k);
    let basis_e = sym_basis(3, 4);
    let mut f0 = vec![MPoly::zero(); basis_e.len()];
    let mut f1 = vec![MPoly::zero(); basis_e.len()];
    for (src, beta) in basis_g.iter().enumerate() {
        let target = vec![beta[0], beta[1], 4 - k];
        let dst = basis_e
            .iter()
            .position(|b| *b == target)
            .expect("embedded monomial exists");
        f0[dst] = section.f0()[src].clone();
        f1[dst] = section.f1()[src].clone();
    }
    Ok(GlobalSection::new(sym4e.clone(), 1, f0, f1)?)
}

/// Expected fiber dimension of the graded piece at the reference parameter,
/// computed by the independent over-Q section count.
fn expected_piece_dim(
    g: &TransitionBundle,
    k: u32,
    reference: &Rat,
) -> Result<usize, PipelineError> {
    let gc = g.specialize_parameter(reference)?;
    let piece = sym_power_transition(&gc, k);
    Ok(global_sections(&piece, 1)?.len())
}

/// Spanning set of H^0(P, Sym^4(E) ⊗ O(1)) over Q[t], pruned to a basis of
/// the fiber at `reference` (deterministic order: graded piece ascending,
/// then canonical nullspace order).
pub fn tau_basis(family: &FamilyData, reference: &Rat) -> Result<TauBasis, PipelineError> {
    let sym4e = sym_power_transition(&family.e, 4);
    let mut sections = Vec::new();
    let mut piece = Vec::new();
    let mut echelon = Echelon::new();
    for k in 0..=4u32 {
        let expected = expected_piece_dim(&family.g, k, reference)?;
        let bundle_k = sym_power_transition(&family.g, k);
        let t_deg_entries = bundle_k
            .matrix()
            .iter()
            .flatten()
            .map(|e| e.body().degree_in(Var::T))
            .max()
            .unwrap_or(0);
        let mut found: Option<Vec<GlobalSection>> = None;
        for retry in 0..=TAU_BASIS_RETRIES {
            let w_deg = k + 3 + 2 * retry;
            let t_deg = t_deg_entries + 2 + retry;
            let candidates = sections_with_bounds(&bundle_k, 1, w_deg, t_deg);
            // prune to fiber rank at the reference parameter
            let mut kept = Vec::new();
            let mut ech = Echelon::new();
            for c in &candidates {
                let specialized = c.specialize_parameter(reference)?;
                if ech.try_insert(flatten(&specialized)) {
                    kept.push(c.clone());
                }
            }
            if kept.len() == expected {
                found = Some(kept);
                break;
            }
        }
        let kept = found.ok_or_else(|| {
            PipelineError::Bundle(crate::bundle::BundleError::DegreeBoundNotCertified {
                detail: format!("graded piece k = {k} did not reach fiber dimension"),
            })
        })?;
        for section in kept {
            let embedded = embed_graded_piece(&sym4e, k, &section)?;
            let specialized = embedded.specialize_parameter(reference)?;
            // the embeddings of distinct pieces are independent; track anyway
            if echelon.try_insert(flatten(&specialized)) {
                sections.push(embedded);
                piece.push(k);
            }
        }
    }
    Ok(TauBasis { sections, piece })
}

/// Lockfile contents: everything needed to reproduce a searched τ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauLock {
    pub seed: u64,
    pub attempt: u32,
    pub coeffs: Vec<String>,
    pub basis_order_version: String,
}

impl TauLock {
    pub fn coeff_map(&self) -> Result<BTreeMap<usize, Rat>, PipelineError> {
        let mut out = BTreeMap::new();
        for (i, s) in self.coeffs.iter().enumerate() {
            let c = super::config::parse_rat(s)?;
            if !c.is_zero() {
                out.insert(i, c);
            }
        }
        Ok(out)
    }
}

fn draw_i64(rng: &mut impl RngCore, lo: i64, hi: i64) -> i64 {
    let span = (hi - lo + 1) as u64;
    lo + (rng.next_u64() % span) as i64
}

/// Assemble τ from coefficients against the basis.
pub fn tau_from_coeffs(
    basis: &TauBasis,
    coeffs: &BTreeMap<usize, Rat>,
) -> Result<GlobalSection, PipelineError> {
    let mut tau = basis.sections[0].scale(&Rat::zero());
    for (&i, c) in coeffs {
        let section = basis
            .sections
            .get(i)
            .ok_or(PipelineError::TauBasisIndexOutOfRange {
                index: i,
                size: basis.sections.len(),
            })?;
        tau = tau.add(&section.scale(c))?;
    }
    Ok(tau)
}

/// The Cox form of σ_c in the trivialization frame at c, split into the
/// quartic pair (g0, g1) of z0·g0 + z1·g1.
pub fn sigma_frame_form(
    family: &FamilyData,
    sigma: &GlobalSection,
    c: &Rat,
) -> Result<Bidegree14Form, PipelineError> {
    let e_c = family.e.specialize_parameter(c)?;
    let frame = trivialization_frame(&e_c)?;
    let sigma_c = sigma.specialize_parameter(c)?;
    let form = change_frame(&sigma_c, &frame)?;
    for (m, _) in form.terms() {
        if m.exp(Var::Z0) + m.exp(Var::Z1) != 1 {
            return Err(PipelineError::UnexpectedShape(format!(
                "frame form is not bidegree (1,4): {form}"
            )));
        }
    }
    let g0 = form.coeff_of(Var::Z0, 1);
    let g1 = form.coeff_of(Var::Z1, 1);
    Ok(Bidegree14Form::new(g0, g1)?)
}

/// Search for τ: draw integer coefficient vectors from the seeded stream,
/// accept the first candidate whose σ at the primary sample cuts a smooth
/// divisor. Returns the section and the lock record.
pub fn find_tau(
    config: &FamilyConfig,
    family: &FamilyData,
    basis: &TauBasis,
    search: &TauSearchConfig,
) -> Result<(GlobalSection, TauLock), PipelineError> {
    let c0 = &config.samples[0];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(search.seed);
    let n = basis.sections.len();
    for attempt in 0..search.max_attempts {
        let coeffs: Vec<i64> = (0..n)
            .map(|_| draw_i64(&mut rng, search.coeff_range.0, search.coeff_range.1))
            .collect();
        let map: BTreeMap<usize, Rat> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, crate::algebra::poly::rat_i(c)))
            .collect();
        let tau = tau_from_coeffs(basis, &map)?;
        let sigma = family.sigma(&tau)?;
        let form = sigma_frame_form(family, &sigma, c0)?;
        if singular_locus_empty(&form, search.seed)? {
            let lock = TauLock {
                seed: search.seed,
                attempt,
                coeffs: coeffs.iter().map(|c| c.to_string()).collect(),
                basis_order_version: BASIS_ORDER_VERSION.to_string(),
            };
            return Ok((tau, lock));
        }
    }
    Err(PipelineError::TauSearchExhausted {
        attempts: search.max_attempts,
    })
}

/// Resolve τ per the configured mode.
pub fn resolve_tau(
    config: &FamilyConfig,
    family: &FamilyData,
    basis: &TauBasis,
) -> Result<(GlobalSection, Option<TauLock>), PipelineError> {
    match &config.tau {
        TauMode::Search(search) => {
            let (tau, lock) = find_tau(config, family, basis, search)?;
            Ok((tau, Some(lock)))
        }
        TauMode::Fixed(coeffs) => {
            let tau = tau_from_coeffs(basis, coeffs)?;
            Ok((tau, None))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_mpoly;
    use crate::algebra::poly::rat_i;

    fn p(s: &str) -> MPoly {
        parse_mpoly(s).unwrap()
    }

    #[test]
    fn family_shape() {
        let config = FamilyConfig::default();
        let fam = build_family(&config).unwrap();
        // q in E-coordinates: (t, z + 1, 0)
        assert_eq!(fam.q_e.f0(), &[p("t"), p("z + 1"), p("0")]);
        // σ|_{t=0} equals σ0 exactly
        let sigma_at_0 = fam.ay4_bq4.specialize_parameter(&rat_i(0)).unwrap();
        assert_eq!(sigma_at_0, fam.sigma0);
    }

    #[test]
    fn tau_basis_counts() {
        let config = FamilyConfig::default();
        let fam = build_family(&config).unwrap();
        let basis = tau_basis(&fam, &rat_i(1)).unwrap();
        // h^0(P^1, Sym^4 O^3 ⊗ O(1)) = 30 at a generic parameter
        assert_eq!(basis.sections.len(), 30);
        // k = 0 piece: the two sections z0*y^4, z1*y^4
        let k0: Vec<_> = basis
            .sections
            .iter()
            .zip(&basis.piece)
            .filter(|(_, &k)| k == 0)
            .map(|(s, _)| s)
            .collect();
        assert_eq!(k0.len(), 2);
        for s in k0 {
            // supported on the pure y^4 coordinate
            let idx = sym_basis(3, 4)
                .iter()
                .position(|b| b == &vec![0, 0, 4])
                .unwrap();
            for (i, c) in s.f0().iter().enumerate() {
                assert_eq!(!c.is_zero(), i == idx);
            }
        }
    }

    #[test]
    fn zero_tau_candidate_is_rejected_by_search_predicate() {
        let config = FamilyConfig::default();
        let fam = build_family(&config).unwrap();
        let basis = tau_basis(&fam, &rat_i(1)).unwrap();
        let tau = tau_from_coeffs(&basis, &BTreeMap::new()).unwrap();
        let sigma = fam.sigma(&tau).unwrap();
        let form = sigma_frame_form(&fam, &sigma, &rat_i(1)).unwrap();
        // σ1 without τ is z0*x3^4 + z1*(x1+x2)^4 up to the frame; singular
        assert!(!singular_locus_empty(&form, 0).unwrap());
    }
}
