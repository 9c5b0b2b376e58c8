//! Per-module identity checks, one family per command, and the coverage
//! manifest that maps every check id to the command that runs it.

use rand::Rng;
use serde::Serialize;
use serde_json::json;

use crate::dp::{format_monomial, DpPoly};
use crate::error::Result;
use crate::galois::{
    exp_nilpotent, integral_scaling, roundtrip_from_higgs, sen_operator, GaloisModule, LAMBDA_BOUND,
};
use crate::higgs::EnhancedHiggsModule;
use crate::homology::{
    cech_alexander, cohomology, default_guard, koszul_group_cohomology, rho_check, ChainComplex, CohomologyProfile,
};
use crate::matrix::Matrix;
use crate::report::Check;
use crate::ring::{adjoin_zeta, make_base_ring, Ring, Scalar};
use crate::scalar::Coefficient;
use crate::stratification::{verify_technique_equivalence, MatrixText, Stratification};

/// `(check id, command, description)` for every identity the tool verifies.
pub const COVERAGE: &[(&str, &str, &str)] = &[
    ("higgs.theta_commute", "verify", "[θi, θj] = 0"),
    ("higgs.phi_theta", "verify", "[φ, θi] = -E′(π)θi"),
    ("higgs.theta_nilpotent", "verify", "θi^rank = 0"),
    ("higgs.phi_nilpotence", "verify", "∏_{i<n}(φ + iE′(π)) = 0 for some n"),
    ("higgs.twist_tensor", "verify", "M ⊗ O{n} = M{n} and O{m} ⊗ O{n} = O{m+n}"),
    ("stratification.product_orders", "stratify", "both product orders of φ_{k,n} agree"),
    ("stratification.technique", "stratify", "coefficient recursion of the cocycle condition"),
    ("stratification.extract_build", "stratify", "extract(build(θ, φ)) = (θ, φ)"),
    ("stratification.build_extract", "stratify", "build(extract(ε)) = ε up to the degree bound"),
    ("stratification.cocycle", "cocycle", "p2*(ε)·p0*(ε) = p1*(ε)"),
    ("stratification.unit", "cocycle", "σ0*(ε) = 1"),
    ("cohomology.complex", "cohomology", "the requested complex squares to zero"),
    ("cech.square_zero", "cech", "Čech–Alexander differentials square to zero"),
    ("cech.rho_series", "cech", "1 + F(X, φ+qa)(φ+qa) = (1-aX)^{-(φ+qa)/a}, q = 0, 1, 2"),
    ("cech.rho_square", "cech", "F(X1, φ+qa)(φ+qa) is the first Čech–Alexander differential"),
    ("cech.d0_comparison", "cech", "rational Čech–Alexander cohomology of (H, φ) equals that of [H → H]"),
    ("sen.strictly_increasing", "sen", "v(D_n + π(ζ-1)λφ) strictly increases"),
    ("sen.linear_term", "sen", "λ-linear term of D_n is -π(ζ-1)φ"),
    ("sen.operator", "sen", "Sen operator -φ/E′(π) is integral and a·(-φ/a) = -φ"),
    ("galois.cocycle", "galois", "F(g1)·g1(F(g2)) = F(g1 g2)"),
    ("galois.semidirect", "galois", "g γi g⁻¹ = γi^χ(g)"),
    ("galois.equivariance", "galois", "F(g)θ = θF(g)(1 + sλ)"),
    ("simpson.exp_log", "roundtrip", "exp(log γ) = γ"),
    ("simpson.log_exp", "roundtrip", "log(exp θ) = θ"),
    ("simpson.translation", "roundtrip", "γj·Q(Y + ej) = Q(Y) for Q = ∏ γi^{-Yi}"),
    ("simpson.dp_form", "roundtrip", "Σ (γ-1)^n binom(Y, n) = Σ θ^k Y^[k]"),
    ("simpson.koszul_comparison", "roundtrip", "Koszul cohomology of γi - 1 equals that of θi, rationally"),
    ("stratification.bk_table", "selftest", "φ_{1,0} = -nE′(π) for O{n}, n = -3..3"),
    ("stratification.mutation_detected", "selftest", "single-relation mutations fail the cocycle check"),
    ("galois.mutation_detected", "selftest", "the [φ, θ] mutation fails the Galois checks"),
    ("infra.snf_reconstruction", "selftest", "U·A·V = D on random matrices"),
    ("infra.simplicial_identities", "selftest", "face and degeneracy identities of the dp-rings"),
    ("infra.determinism", "selftest", "identical seeds give identical reports"),
];

pub fn matrix_floor(m: &Matrix<Scalar>) -> u32 {
    m.entries().iter().map(Scalar::prec).min().unwrap_or(0)
}

fn poly_floor(p: &DpPoly<Matrix<Scalar>>) -> u32 {
    p.terms().values().map(matrix_floor).min().unwrap_or(0)
}

fn module_floor(m: &EnhancedHiggsModule<Scalar>) -> u32 {
    m.theta.iter().map(matrix_floor).chain([matrix_floor(&m.phi)]).min().unwrap_or(0)
}

/// Re-embeds a module into another ring over the same `E(u)`.
pub fn reduce_module(m: &EnhancedHiggsModule<Scalar>, ring: &Ring) -> EnhancedHiggsModule<Scalar> {
    let z = Scalar::zero(ring);
    let f = |x: &Matrix<Scalar>| x.map(&z, |s| s.lift_exact(ring));
    EnhancedHiggsModule {
        a: Scalar::e_prime_at_pi(ring),
        theta: m.theta.iter().map(f).collect(),
        phi: f(&m.phi),
    }
}

/// The same module over `O_K/p^N` with no guard digits.
pub fn at_target_precision(m: &EnhancedHiggsModule<Scalar>) -> Result<EnhancedHiggsModule<Scalar>> {
    let ctx = m.proto().ctx();
    let base = make_base_ring(&ctx.cfg)?;
    let ring = if ctx.zdeg > 1 { adjoin_zeta(&base)? } else { base };
    Ok(reduce_module(m, &ring))
}

pub fn verify_checks(m: &EnhancedHiggsModule<Scalar>) -> Result<Vec<Check>> {
    let ctx = m.proto().ctx().clone();
    let bound = (ctx.exp as usize + 2) * (ctx.cfg.p as usize) * ctx.e + m.rank();
    let rep = m.check_enhanced(bound);
    let floor = module_floor(m);
    let ids = ["higgs.theta_commute", "higgs.phi_theta", "higgs.theta_nilpotent"];
    let mut out: Vec<Check> = ids
        .iter()
        .zip(&rep.checks)
        .map(|(id, c)| Check::new(id, c.passed).floor(floor).witness(c.witness.clone()))
        .collect();
    out.push(
        Check::new("higgs.phi_nilpotence", rep.nilpotence_index.is_some())
            .floor(floor)
            .witness(Some(format!("no vanishing product below n = {bound}")))
            .detail(json!({ "index": rep.nilpotence_index })),
    );
    let mut twist_ok = true;
    let mut witness = None;
    for n in [-2i64, -1, 1, 2] {
        let o = EnhancedHiggsModule::bk_twist_unit(n, &m.a, m.dim());
        if m.tensor(&o)? != m.twist(n) {
            twist_ok = false;
            witness.get_or_insert(format!("M ⊗ O{{{n}}}"));
        }
        let o2 = EnhancedHiggsModule::bk_twist_unit(1 - n, &m.a, m.dim());
        if o.tensor(&o2)? != EnhancedHiggsModule::bk_twist_unit(1, &m.a, m.dim()) {
            twist_ok = false;
            witness.get_or_insert(format!("O{{{n}}} ⊗ O{{{}}}", 1 - n));
        }
    }
    out.push(Check::new("higgs.twist_tensor", twist_ok).floor(floor).witness(witness));
    Ok(out)
}

/// Builds the stratification of an enhanced module and checks both round trips.
pub fn stratify_checks(m: &EnhancedHiggsModule<Scalar>, degree: u32) -> Result<(Vec<Check>, Stratification<Scalar>)> {
    let s = Stratification::build(m, degree)?;
    let floor = poly_floor(&s.eps);
    let mut out = vec![Check::new("stratification.product_orders", true).floor(floor)];
    let t = verify_technique_equivalence(m, degree);
    out.push(
        Check::new("stratification.technique", t.passed())
            .floor(floor)
            .witness(t.failure.as_ref().map(|(k, n, mono, c)| format!("k = {k}, n = {n:?} at {mono}: {}", MatrixText(c))))
            .detail(json!({ "checked": t.checked })),
    );
    let back = s.extract()?;
    out.push(Check::new("stratification.extract_build", back == *m).floor(floor));
    let again = Stratification::build(&back, degree)?;
    let first = again.eps.first_difference(&s.eps);
    out.push(
        Check::new("stratification.build_extract", first.is_none())
            .floor(floor)
            .witness(first.map(|(e, _)| format_monomial(&s.shape(), &e))),
    );
    Ok((out, s))
}

pub fn cocycle_checks(s: &Stratification<Scalar>) -> Vec<Check> {
    let rep = s.check_cocycle();
    let floor = poly_floor(&s.eps);
    let witness = rep.witness.as_ref().map(|(mono, c)| format!("{mono} : {}", MatrixText(c)));
    let mixed: Vec<String> = if rep.witness.is_some() {
        (1..=s.dim()).map(|t| format!("X1*Y{t},1 : {}", MatrixText(&s.mixed_defect(t)))).collect()
    } else {
        Vec::new()
    };
    vec![
        Check::new("stratification.cocycle", rep.witness.is_none())
            .floor(floor)
            .witness(witness)
            .detail(json!({ "degree": rep.degree, "per_degree": rep.per_degree, "mixed": mixed })),
        Check::new("stratification.unit", rep.degeneracy_ok).floor(floor),
    ]
}

/// Forgets θ.
fn arithmetic_part(m: &EnhancedHiggsModule<Scalar>) -> EnhancedHiggsModule<Scalar> {
    EnhancedHiggsModule {
        a: m.a.clone(),
        theta: Vec::new(),
        phi: m.phi.clone(),
    }
}

/// Runs on `O_K/p^N`; `guard` defaults to `e·N/2`.
pub fn cech_checks(m: &EnhancedHiggsModule<Scalar>, degree: u32, guard: Option<u32>) -> Result<Vec<Check>> {
    let m = at_target_precision(m)?;
    let guard = guard.unwrap_or_else(|| default_guard(&m.a));
    let s = Stratification::from_family(&m, degree)?;
    let c = cech_alexander(&s, 2)?;
    let square = c.complex.check_square_zero();
    let mut out = vec![Check::new("cech.square_zero", square.is_ok())
        .floor(poly_floor(&s.eps))
        .witness(square.err().map(|e| e.to_string()))];
    let mut series_ok = true;
    let mut square_ok = true;
    let mut witness = None;
    for q in 0..=2 {
        let rep = rho_check(&m, q, degree)?;
        series_ok &= rep.series_ok;
        square_ok &= rep.square_ok;
        if !rep.passed() {
            witness.get_or_insert(format!("q = {q}: {}", rep.witness.unwrap_or_default()));
        }
    }
    out.push(Check::new("cech.rho_series", series_ok).witness(witness.clone()));
    out.push(Check::new("cech.rho_square", square_ok).witness(witness));
    let m0 = arithmetic_part(&m);
    let s0 = Stratification::build(&m0, degree)?;
    let c0 = cech_alexander(&s0, 2)?;
    let cech = cohomology(&c0.complex, guard)?;
    let r = m.rank();
    let two = ChainComplex::new(vec![r, r], vec![m.phi.clone()], &m.a.zero_like())?;
    let two_term = cohomology(&two, guard)?;
    let ok = cech.rational_ranks()[..2] == two_term.rational_ranks()[..];
    out.push(
        Check::new("cech.d0_comparison", ok)
            .witness(Some(format!(
                "ranks {:?} vs {:?}",
                &cech.rational_ranks()[..2],
                two_term.rational_ranks()
            )))
            .detail(json!({ "guard": guard, "cech": cech.rational_ranks()[..2], "two_term": two_term.rational_ranks() })),
    );
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexKind {
    Higgs,
    Enhanced,
    Cech,
}

/// The requested complex over `O_K/p^N` and its profile.
pub fn cohomology_report(
    m: &EnhancedHiggsModule<Scalar>,
    kind: ComplexKind,
    degree: u32,
    guard: Option<u32>,
) -> Result<(Vec<Check>, CohomologyProfile)> {
    let m = at_target_precision(m)?;
    let guard = guard.unwrap_or_else(|| default_guard(&m.a));
    let c = match kind {
        ComplexKind::Higgs => m.higgs_complex(),
        ComplexKind::Enhanced => m.enhanced_higgs_complex()?,
        ComplexKind::Cech => cech_alexander(&Stratification::from_family(&m, degree)?, 2)?.complex,
    };
    let square = c.check_square_zero();
    let check = Check::new("cohomology.complex", square.is_ok()).witness(square.as_ref().err().map(|e| e.to_string()));
    if square.is_err() {
        return Ok((vec![check], CohomologyProfile { guard, top: 0, degrees: Vec::new() }));
    }
    Ok((vec![check], cohomology(&c, guard)?))
}

pub fn sen_checks(m: &EnhancedHiggsModule<Scalar>, n_max: u32) -> Result<Vec<Check>> {
    let g = GaloisModule::new(m, LAMBDA_BOUND)?;
    let rep = sen_operator(&g, &m.phi, &m.a, n_max)?;
    let floor = rep.steps.iter().map(|s| s.precision_floor).min().unwrap_or(0);
    let vals: Vec<Option<u32>> = rep.steps.iter().map(|s| s.residual_valuation).collect();
    let op_ok = match &rep.operator {
        Some(_) => {
            let z = m.a.zero_like();
            let op = m.phi.try_map(&z, |x| crate::galois::divide_by(&-x.clone(), &m.a))?;
            op.scale(&m.a) == -m.phi.clone()
        }
        None => false,
    };
    Ok(vec![
        Check::new("sen.strictly_increasing", rep.strictly_increasing)
            .floor(floor)
            .witness(Some(format!("valuations {vals:?}")))
            .detail(json!({ "valuations": vals, "offset": rep.offset })),
        Check::new("sen.linear_term", rep.linear_term_ok).floor(floor),
        Check::new("sen.operator", op_ok)
            .witness(Some("φ is not divisible by E′(π)".into()))
            .detail(json!({ "operator": rep.operator, "convention": rep.convention })),
    ])
}

pub fn galois_checks<R: Rng>(m: &EnhancedHiggsModule<Scalar>, trials: usize, rng: &mut R, checked: bool) -> Result<Vec<Check>> {
    let g = if checked {
        GaloisModule::new(m, LAMBDA_BOUND)?
    } else {
        GaloisModule::new_unchecked(m, LAMBDA_BOUND)?
    };
    let rep = g.verify_cocycle(rng, trials)?;
    let w = rep.witness.clone();
    Ok(vec![
        Check::new("galois.cocycle", rep.cocycle_failures == 0)
            .floor(rep.precision_floor)
            .witness(w.clone())
            .detail(json!({ "trials": trials, "failures": rep.cocycle_failures })),
        Check::new("galois.semidirect", rep.semidirect_failures == 0)
            .floor(rep.precision_floor)
            .witness(w.clone())
            .detail(json!({ "trials": trials, "failures": rep.semidirect_failures })),
        Check::new("galois.equivariance", rep.equivariance_failures == 0)
            .floor(rep.precision_floor)
            .witness(w)
            .detail(json!({ "trials": trials, "failures": rep.equivariance_failures })),
    ])
}

/// Runs on `p^s·θ` with `s` the least integral scaling, over `O_K/p^N`.
pub fn roundtrip_checks(m: &EnhancedHiggsModule<Scalar>, guard: Option<u32>) -> Result<Vec<Check>> {
    let m = at_target_precision(m)?;
    let ctx = m.proto().ctx().clone();
    let s = integral_scaling(ctx.cfg.p, m.rank() + 1);
    let scale = Scalar::from_int(&ctx, ctx.cfg.p as i64).pow(s);
    let thetas: Vec<Matrix<Scalar>> = m.theta.iter().map(|t| t.scale(&scale)).collect();
    let rep = roundtrip_from_higgs(&thetas)?;
    let floor = thetas.iter().map(matrix_floor).min().unwrap_or(ctx.exp);
    let detail = json!({ "scaling": s });
    let mut out = vec![
        Check::new("simpson.exp_log", rep.exp_log_ok).floor(floor).detail(detail.clone()),
        Check::new("simpson.log_exp", rep.log_exp_ok).floor(floor).detail(detail),
        Check::new("simpson.translation", rep.translation_ok).floor(floor),
        match rep.dp_form_ok {
            Some(ok) => Check::new("simpson.dp_form", ok).floor(floor),
            None => Check::skipped("simpson.dp_form", "basis change needs division"),
        },
    ];
    let guard = guard.unwrap_or_else(|| default_guard(&m.a));
    let gammas: Vec<Matrix<Scalar>> = thetas.iter().map(exp_nilpotent).collect::<Result<_>>()?;
    let zero = m.a.zero_like();
    let higgs = cohomology(&ChainComplex::koszul(&thetas, m.rank(), &zero), guard)?;
    let group = cohomology(&koszul_group_cohomology(&gammas, m.rank(), &zero)?, guard)?;
    let hr = higgs.rational_ranks();
    let gr = group.rational_ranks();
    out.push(
        Check::new("simpson.koszul_comparison", hr == gr)
            .witness(Some(format!("ranks {gr:?} vs {hr:?}")))
            .detail(json!({ "guard": guard, "group": gr, "higgs": hr })),
    );
    Ok(out)
}

/// `φ_{1,0}` and `φ_{0,1}` of the stratification of `O{n}`.
pub fn bk_phi10(a: &Scalar, n: i64, d: usize, degree: u32) -> Result<(Matrix<Scalar>, Matrix<Scalar>)> {
    let s = Stratification::build(&EnhancedHiggsModule::bk_twist_unit(n, a, d), degree)?;
    let mut y = vec![0; d];
    if d > 0 {
        y[0] = 1;
    }
    Ok((s.coefficient(1, &vec![0; d]), s.coefficient(0, &y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn coverage_ids_are_unique() {
        let ids: HashSet<&str> = COVERAGE.iter().map(|c| c.0).collect();
        assert_eq!(ids.len(), COVERAGE.len());
    }
}
