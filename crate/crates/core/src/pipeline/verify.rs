//! The end-to-end verification: oracle grid, splitting types, lift and slice
//! identities, reducedness witnesses, τ resolution, flatness witness,
//! sampled smoothness, and the h^1 jump.

use super::config::FamilyConfig;
use super::family::{build_family, resolve_tau, sigma_frame_form, tau_basis, BASIS_ORDER_VERSION};
use super::report::*;
use super::PipelineError;
use crate::algebra::gcd::poly_gcd;
use crate::algebra::poly::{rat_i, MPoly, Rat};
use crate::algebra::roots::rational_roots;
use crate::algebra::var::Var;
use crate::bundle::{splitting_type, GlobalSection};
use crate::cohomology::{
    cohomology_pe, h1_closed_form, hypersurface_h, LineBundleOnPE, SplitBundle,
};
use crate::cox::cox_cohomology;
use crate::smooth::{fiberwise_nonvanishing, generic_fiber_squarefree, singular_locus_empty};

/// The full pushforward-vs-Cox equivalence grid:
/// e_i in [-2,2], a in [-7,4], b in [-4,4].
pub fn oracle_grid(jobs: usize) -> OracleGridRecord {
    let mut triples = Vec::new();
    for e1 in -2i64..=2 {
        for e2 in -2i64..=2 {
            for e3 in -2i64..=2 {
                triples.push([e1, e2, e3]);
            }
        }
    }
    let count_one = |e: &[i64; 3]| -> (u64, u64) {
        let split = SplitBundle::of(e);
        let mut cases = 0;
        let mut disagreements = 0;
        for a in -7i64..=4 {
            for b in -4i64..=4 {
                cases += 1;
                let pe = cohomology_pe(&LineBundleOnPE::new(split.clone(), a, b).unwrap());
                let cox = cox_cohomology(&split, a, b).unwrap();
                if pe != cox {
                    disagreements += 1;
                }
            }
        }
        (cases, disagreements)
    };
    let results: Vec<(u64, u64)> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| {
            use rayon::prelude::*;
            triples.par_iter().map(count_one).collect()
        })
    } else {
        triples.iter().map(count_one).collect()
    };
    let (cases, disagreements) = results
        .into_iter()
        .fold((0, 0), |(c, d), (cc, dd)| (c + cc, d + dd));
    OracleGridRecord {
        cases,
        disagreements,
        pass: disagreements == 0,
    }
}

/// Flatness witness data for σ over Q[t].
pub struct BadParameterRoots {
    pub roots: Vec<Rat>,
    pub complete: bool,
    /// gcd of all Q[t]-coefficients of the chart-0 coordinate vector; a
    /// parameter c makes σ_c vanish identically iff it is a root.
    pub coefficient_gcd: MPoly,
}

/// Rational parameters at which σ specializes to the zero section: the
/// rational roots of the gcd of all chart-0 coefficient polynomials.
pub fn bad_parameter_roots(sigma: &GlobalSection) -> Result<BadParameterRoots, PipelineError> {
    let mut g = MPoly::zero();
    'outer: for coord in sigma.f0() {
        for c in coord.coeffs_in(Var::Z) {
            if c.is_zero() {
                continue;
            }
            g = poly_gcd(&g, &c);
            if g.is_one() {
                break 'outer;
            }
        }
    }
    if g.is_zero() {
        return Err(PipelineError::SigmaIdenticallyZero);
    }
    if g.is_constant() {
        return Ok(BadParameterRoots {
            roots: Vec::new(),
            complete: true,
            coefficient_gcd: g,
        });
    }
    let rr = rational_roots(&g, Var::T);
    Ok(BadParameterRoots {
        roots: rr.roots,
        complete: rr.complete,
        coefficient_gcd: g,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SmoothVerdict {
    VerifiedSmooth,
    Singular,
    Skipped,
}

impl SmoothVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            SmoothVerdict::VerifiedSmooth => "verified_smooth",
            SmoothVerdict::Singular => "singular",
            SmoothVerdict::Skipped => "skipped",
        }
    }
}

/// Run every check and emit the report. Config errors are returned to the
/// caller; any mathematical sub-failure is recorded in the report instead,
/// with a partial report emitted.
pub fn verify(config: &FamilyConfig) -> Result<VerificationReport, super::ConfigError> {
    config.validate()?;
    let mut report = VerificationReport {
        version: REPORT_VERSION.to_string(),
        config: ConfigEcho::of(config),
        normalization: Normalization::default(),
        oracle_grid: None,
        lift: None,
        t0: None,
        samples: Vec::new(),
        tau: None,
        bad_parameter_roots: Vec::new(),
        bad_parameter_roots_complete: true,
        candidate_bad_set: Vec::new(),
        failures: Vec::new(),
        pass: false,
    };
    if let Err(e) = run_checks(config, &mut report) {
        report.failures.push(format!("aborted: {e}"));
    }
    report.pass = overall_pass(&report, config);
    Ok(report)
}

fn expect(report: &mut VerificationReport, ok: bool, what: &str) {
    if !ok {
        report.failures.push(what.to_string());
    }
}

fn fiber_h(
    report: &mut VerificationReport,
    split: &SplitBundle,
    label: &str,
) -> Result<(u64, u64), PipelineError> {
    let (h0, h1, h2) = hypersurface_h(split, 4, 1)?;
    expect(report, h0 == 1, &format!("h0 at {label} is not 1"));
    // the two derivation routes must agree, and χ must be constant
    let closed = h1_closed_form(split)?;
    expect(
        report,
        closed == h1,
        &format!("closed-form h1 disagrees with the long exact sequence at {label}"),
    );
    expect(report, h1 == h2, &format!("χ(O_X) is not 1 at {label}"));
    Ok((h1, h2))
}

fn run_checks(config: &FamilyConfig, report: &mut VerificationReport) -> Result<(), PipelineError> {
    // (i) oracle-equivalence grid
    let grid = oracle_grid(config.jobs);
    expect(report, grid.pass, "oracle grid disagreement");
    report.oracle_grid = Some(grid);

    // (ii) splitting types
    let family = build_family(config)?;
    let zero = rat_i(0);
    let g0 = family.g.specialize_parameter(&zero)?;
    let e0 = family.e.specialize_parameter(&zero)?;
    let st_g0 = splitting_type(&g0)?;
    let st_e0 = splitting_type(&e0)?;
    expect(
        report,
        st_g0.degrees() == [-1, 1],
        "splitting type of G at 0",
    );
    expect(
        report,
        st_e0.degrees() == [-1, 0, 1],
        "splitting type of E at 0",
    );
    expect(report, e0.det_degree() == 0, "det degree of E at 0");
    let mut sample_types = Vec::new();
    for c in &config.samples {
        let st_g = splitting_type(&family.g.specialize_parameter(c)?)?;
        let e_c = family.e.specialize_parameter(c)?;
        let st_e = splitting_type(&e_c)?;
        expect(
            report,
            st_g.degrees() == [0, 0],
            &format!("splitting type of G at {c}"),
        );
        expect(
            report,
            st_e.degrees() == [0, 0, 0],
            &format!("splitting type of E at {c}"),
        );
        expect(
            report,
            e_c.det_degree() == 0,
            &format!("det degree of E at {c}"),
        );
        sample_types.push((st_g, st_e));
    }

    // (iii) lift identity and the t = 0 slice of q
    // (the transition identity over Q[t] is validated on construction)
    let q0 = family.q.specialize_parameter(&zero)?;
    let s_charts = crate::bundle::form_charts(&config.s.to_form())?;
    let q_at_zero_ok = q0.f0()[0].is_zero()
        && q0.f1()[0].is_zero()
        && q0.f0()[1] == s_charts.0
        && q0.f1()[1] == s_charts.1;
    expect(report, q_at_zero_ok, "q at t = 0 is not (0, s)");

    // (iv) reducedness witnesses
    let nonvanishing = fiberwise_nonvanishing(&config.a, &config.b, &config.s)?;
    let squarefree = generic_fiber_squarefree(&config.a, &config.b, &config.s)?;
    expect(report, nonvanishing, "σ0 vanishes along a fiber");
    expect(
        report,
        squarefree,
        "generic fiber polynomial is not square-free",
    );

    // (v) τ resolution
    let basis = tau_basis(&family, &config.samples[0])?;
    let (tau, lock) = resolve_tau(config, &family, &basis)?;
    report.tau = Some(TauRecord {
        mode: match &config.tau {
            super::TauMode::Search(_) => "search".to_string(),
            super::TauMode::Fixed(_) => "fixed".to_string(),
        },
        seed: config.seed(),
        attempt: lock.as_ref().map(|l| l.attempt),
        coeffs: match &lock {
            Some(l) => l.coeffs.clone(),
            None => match &config.tau {
                super::TauMode::Fixed(m) => {
                    let n = basis.sections.len();
                    (0..n)
                        .map(|i| {
                            m.get(&i)
                                .map(|c| c.to_string())
                                .unwrap_or_else(|| "0".into())
                        })
                        .collect()
                }
                _ => Vec::new(),
            },
        },
        basis_size: basis.sections.len(),
        basis_order_version: BASIS_ORDER_VERSION.to_string(),
    });

    let sigma = family.sigma(&tau)?;
    let sigma_slice_ok = sigma.specialize_parameter(&zero)? == family.sigma0;
    expect(
        report,
        sigma_slice_ok,
        "σ restricted to t = 0 differs from σ0",
    );
    report.lift = Some(LiftRecord {
        transition_identity_over_qt: true,
        q_at_zero_is_quotient_section: q_at_zero_ok,
        sigma_slice_equals_sigma0: sigma_slice_ok,
    });

    // (vi) flatness witness: σ_c is nonzero for every c
    let bad = bad_parameter_roots(&sigma)?;
    report.bad_parameter_roots = bad.roots.iter().map(|r| r.to_string()).collect();
    report.bad_parameter_roots_complete = bad.complete;
    for c in config.samples.iter().chain([&zero]) {
        let value = bad.coefficient_gcd.specialize(&[(Var::T, c.clone())]);
        expect(
            report,
            !value.is_zero(),
            &format!("σ vanishes identically at the mandatory parameter {c}"),
        );
    }

    // (vii) per-sample records with sampled smoothness
    let mut candidate_bad = Vec::new();
    for (c, (st_g, st_e)) in config.samples.iter().zip(&sample_types) {
        let sigma_c = sigma.specialize_parameter(c)?;
        let sigma_nonzero = !sigma_c.is_zero();
        expect(
            report,
            sigma_nonzero,
            &format!("σ at {c} is the zero section"),
        );
        let verdict = if !config.smooth_check {
            SmoothVerdict::Skipped
        } else {
            let form = sigma_frame_form(&family, &sigma, c)?;
            if singular_locus_empty(&form, config.seed())? {
                SmoothVerdict::VerifiedSmooth
            } else {
                candidate_bad.push(c.to_string());
                SmoothVerdict::Singular
            }
        };
        // (viii) the h^1 jump, from the computed splitting type
        let (h1, h2) = fiber_h(report, st_e, &format!("c = {c}"))?;
        expect(
            report,
            h1 == 0,
            &format!("h1 at c = {c} is {h1}, expected 0"),
        );
        report.samples.push(SampleRecord {
            c: c.to_string(),
            splitting_type_g: st_g.degrees().to_vec(),
            splitting_type_e: st_e.degrees().to_vec(),
            sigma_nonzero,
            h1,
            h2,
            smooth: verdict.as_str().to_string(),
        });
    }
    report.candidate_bad_set = candidate_bad;

    // the special fiber record
    let sigma0_nonzero = !family.sigma0.is_zero();
    expect(report, sigma0_nonzero, "σ0 is the zero section");
    let (h1_0, h2_0) = fiber_h(report, &st_e0, "c = 0")?;
    expect(report, h1_0 == 1, "h1 at c = 0 is not 1");
    report.t0 = Some(SpecialFiberRecord {
        splitting_type_g: st_g0.degrees().to_vec(),
        splitting_type_e: st_e0.degrees().to_vec(),
        sigma_nonzero: sigma0_nonzero,
        fiberwise_nonvanishing: nonvanishing,
        generic_squarefree: squarefree,
        h1: h1_0,
        h2: h2_0,
    });
    Ok(())
}

/// The pass verdict from an assembled report: every mandatory check holds.
/// Sampled smoothness is mandatory only in aggregate: at least one sample
/// must be verified smooth when the check is enabled; singular samples land
/// in the candidate bad set without failing the run.
pub fn overall_pass(report: &VerificationReport, config: &FamilyConfig) -> bool {
    if !report.failures.is_empty() {
        return false;
    }
    let Some(grid) = &report.oracle_grid else {
        return false;
    };
    let (Some(lift), Some(t0), Some(_tau)) = (&report.lift, &report.t0, &report.tau) else {
        return false;
    };
    if !grid.pass
        || !lift.transition_identity_over_qt
        || !lift.q_at_zero_is_quotient_section
        || !lift.sigma_slice_equals_sigma0
    {
        return false;
    }
    if t0.splitting_type_g != [-1, 1]
        || t0.splitting_type_e != [-1, 0, 1]
        || !t0.sigma_nonzero
        || !t0.fiberwise_nonvanishing
        || !t0.generic_squarefree
        || t0.h1 != 1
        || t0.h2 != 1
    {
        return false;
    }
    if report.samples.len() != config.samples.len() {
        return false;
    }
    for s in &report.samples {
        if s.splitting_type_g != [0, 0]
            || s.splitting_type_e != [0, 0, 0]
            || !s.sigma_nonzero
            || s.h1 != 0
            || s.h2 != 0
        {
            return false;
        }
    }
    if config.smooth_check && !report.samples.iter().any(|s| s.smooth == "verified_smooth") {
        return false;
    }
    // the σ-vanishing parameters must avoid 0 and the samples
    let zero = rat_i(0);
    let mandatory: Vec<String> = config
        .samples
        .iter()
        .chain([&zero])
        .map(|c| c.to_string())
        .collect();
    if report
        .bad_parameter_roots
        .iter()
        .any(|r| mandatory.contains(r))
    {
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rat_i;
    use crate::bundle::{section_sym_product, TransitionBundle};
    use crate::pipeline::FamilyConfig;

    #[test]
    fn oracle_grid_is_clean() {
        let record = oracle_grid(1);
        assert_eq!(record.cases, 13_500);
        assert_eq!(record.disagreements, 0);
        assert!(record.pass);
    }

    #[test]
    fn verify_with_smoothness_skipped() {
        let mut config = FamilyConfig::default();
        config.smooth_check = false;
        let report = verify(&config).unwrap();
        assert!(report.pass, "failures: {:?}", report.failures);
        assert!(report.samples.iter().all(|s| s.smooth == "skipped"));
        assert!(report.candidate_bad_set.is_empty());
    }

    fn artificial_sigma(scale: &MPoly) -> GlobalSection {
        let e = crate::bundle::make_extension(&crate::bundle::jumping_family())
            .direct_sum(&TransitionBundle::trivial(1));
        let y = GlobalSection::new(
            e.clone(),
            0,
            vec![MPoly::zero(), MPoly::zero(), MPoly::one()],
            vec![MPoly::zero(), MPoly::zero(), MPoly::one()],
        )
        .unwrap();
        let y4 = section_sym_product(&vec![y; 4]).unwrap();
        y4.scale_param(scale)
    }

    #[test]
    fn bad_roots_of_artificial_sections() {
        use crate::algebra::parse::parse_mpoly;
        let t_y4 = artificial_sigma(&parse_mpoly("t").unwrap());
        let r = bad_parameter_roots(&t_y4).unwrap();
        assert_eq!(r.roots, vec![rat_i(0)]);
        let tm1_y4 = artificial_sigma(&parse_mpoly("t - 1").unwrap());
        let r = bad_parameter_roots(&tm1_y4).unwrap();
        assert_eq!(r.roots, vec![rat_i(1)]);
        let zero = artificial_sigma(&MPoly::zero());
        assert!(matches!(
            bad_parameter_roots(&zero),
            Err(PipelineError::SigmaIdenticallyZero)
        ));
    }

    /// A singular verdict at a non-primary sample keeps the run passing as
    /// long as one sample is verified smooth; the parameter lands in the
    /// candidate bad set.
    #[test]
    fn pass_logic_tolerates_singular_samples() {
        let config = FamilyConfig::default();
        let mut report = VerificationReport {
            version: REPORT_VERSION.to_string(),
            config: ConfigEcho::of(&config),
            normalization: Normalization::default(),
            oracle_grid: Some(OracleGridRecord {
                cases: 13_500,
                disagreements: 0,
                pass: true,
            }),
            lift: Some(LiftRecord {
                transition_identity_over_qt: true,
                q_at_zero_is_quotient_section: true,
                sigma_slice_equals_sigma0: true,
            }),
            t0: Some(SpecialFiberRecord {
                splitting_type_g: vec![-1, 1],
                splitting_type_e: vec![-1, 0, 1],
                sigma_nonzero: true,
                fiberwise_nonvanishing: true,
                generic_squarefree: true,
                h1: 1,
                h2: 1,
            }),
            samples: config
                .samples
                .iter()
                .enumerate()
                .map(|(i, c)| SampleRecord {
                    c: c.to_string(),
                    splitting_type_g: vec![0, 0],
                    splitting_type_e: vec![0, 0, 0],
                    sigma_nonzero: true,
                    h1: 0,
                    h2: 0,
                    smooth: if i == 1 {
                        "singular"
                    } else {
                        "verified_smooth"
                    }
                    .to_string(),
                })
                .collect(),
            tau: Some(TauRecord {
                mode: "search".to_string(),
                seed: 0,
                attempt: Some(0),
                coeffs: vec![],
                basis_size: 30,
                basis_order_version: BASIS_ORDER_VERSION.to_string(),
            }),
            bad_parameter_roots: vec![],
            bad_parameter_roots_complete: true,
            candidate_bad_set: vec![config.samples[1].to_string()],
            failures: vec![],
            pass: false,
        };
        assert!(overall_pass(&report, &config));
        // but with no smooth sample at all, the run fails
        for s in &mut report.samples {
            s.smooth = "singular".to_string();
        }
        assert!(!overall_pass(&report, &config));
        // and a bad-parameter collision with a sample fails
        for s in &mut report.samples {
            s.smooth = "verified_smooth".to_string();
        }
        report.bad_parameter_roots = vec!["1".to_string()];
        assert!(!overall_pass(&report, &config));
    }
}
