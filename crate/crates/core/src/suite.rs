//! Seeded randomized suites, run in parallel and reported in instance order.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::checks::{
    bk_phi10, cech_checks, cocycle_checks, galois_checks, roundtrip_checks, sen_checks, stratify_checks,
    verify_checks,
};
use crate::dp::{verify_simplicial_identities, Shape};
use crate::error::Result;
use crate::higgs::EnhancedHiggsModule;
use crate::homology::snf;
use crate::input::working_digits;
use crate::matrix::Matrix;
use crate::random::{instance_rng, mutate_commutator, mutate_phi, random_enhanced, standard_configs, MutationKind};
use crate::report::{Check, Report, Status};
use crate::ring::{make_base_ring, make_base_ring_with_guard, PrimeConfig, Ring, Scalar};
use crate::scalar::Coefficient;
use crate::stratification::{MatrixText, Stratification};

pub fn config_label(cfg: &PrimeConfig) -> String {
    format!("p={} E={:?}", cfg.p, cfg.e_coeffs)
}

/// Instance ids are `config_index·10^6 + k`; each draws from its own stream.
pub fn instance_id(config_index: usize, k: usize) -> u64 {
    config_index as u64 * 1_000_000 + k as u64
}

/// Runs `f` on `per_config` instances of every configuration in parallel; the
/// result is ordered by `(configuration, instance)`.
pub fn run_instances<T, F>(configs: &[PrimeConfig], per_config: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&PrimeConfig, u64, &mut ChaCha8Rng) -> T + Sync,
{
    let jobs: Vec<(usize, usize)> = (0..configs.len())
        .flat_map(|c| (0..per_config).map(move |k| (c, k)))
        .collect();
    jobs.par_iter()
        .map(|&(c, k)| {
            let id = instance_id(c, k);
            let mut rng = instance_rng(seed, id);
            f(&configs[c], id, &mut rng)
        })
        .collect()
}

/// The ring used for random instances: `N` plus the digits a degree-`degree`
/// run divides away.
pub fn working_ring(cfg: &PrimeConfig, degree: u32) -> Result<Ring> {
    make_base_ring_with_guard(cfg, working_digits(cfg.p, degree))
}

/// `d ∈ {1, 2}`, `rank ∈ {1, 2, 3}`.
pub fn random_shape<R: Rng>(rng: &mut R) -> (usize, usize) {
    (rng.gen_range(1..=2), rng.gen_range(1..=3))
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceResult {
    pub config: String,
    pub id: u64,
    pub d: usize,
    pub rank: usize,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestOptions {
    pub seed: u64,
    /// Random modules per prime configuration.
    pub trials: usize,
    pub precision: u32,
    pub degree: u32,
    pub n_max: u32,
    /// Random group pairs per module in the Galois checks.
    pub galois_pairs: usize,
    /// Restricts the configurations to these primes.
    pub primes: Option<Vec<u64>>,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions {
            seed: 0,
            trials: 10,
            precision: 6,
            degree: 4,
            n_max: 3,
            galois_pairs: 4,
            primes: None,
        }
    }
}

impl SelftestOptions {
    pub fn configs(&self) -> Vec<PrimeConfig> {
        standard_configs(self.precision)
            .into_iter()
            .filter(|c| self.primes.as_ref().is_none_or(|ps| ps.contains(&c.p)))
            .collect()
    }
}

fn error_check(id: &str, e: &crate::error::Error) -> Check {
    Check::new(id, false).witness(Some(e.to_string()))
}

/// Every per-module check on one random enhanced module.
pub fn module_checks(m: &EnhancedHiggsModule<Scalar>, opts: &SelftestOptions, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut out = Vec::new();
    let mut run = |id: &str, r: Result<Vec<Check>>| match r {
        Ok(cs) => out.extend(cs),
        Err(e) => out.push(error_check(id, &e)),
    };
    run("higgs", verify_checks(m));
    match stratify_checks(m, opts.degree) {
        Ok((cs, s)) => {
            run("stratification", Ok(cs));
            run("stratification.cocycle", Ok(cocycle_checks(&s)));
        }
        Err(e) => run("stratification", Err(e)),
    }
    run("cech", cech_checks(m, opts.degree, None));
    run("sen", sen_checks(m, opts.n_max));
    run("galois", galois_checks(m, opts.galois_pairs, rng, true));
    run("simpson", roundtrip_checks(m, None));
    out
}

pub fn random_instances(opts: &SelftestOptions) -> Vec<InstanceResult> {
    run_instances(&opts.configs(), opts.trials, opts.seed, |cfg, id, rng| {
        let (d, r) = random_shape(rng);
        let checks = match working_ring(cfg, opts.degree) {
            Ok(ring) => {
                let m = random_enhanced(&ring, d, r, rng).module;
                module_checks(&m, opts, rng)
            }
            Err(e) => vec![error_check("ring", &e)],
        };
        InstanceResult {
            config: config_label(cfg),
            id,
            d,
            rank: r,
            checks,
        }
    })
}

/// Outcome of a single-relation mutation.
#[derive(Debug, Clone, Serialize)]
pub struct MutationResult {
    pub config: String,
    pub id: u64,
    pub kind: MutationKind,
    /// The cocycle check failed.
    pub detected: bool,
    /// For the `[φ, θ]` mutation: the `X1*Y1,1` coefficient of the defect
    /// equals `-([φ, θ1] + aθ1)`.
    pub mixed_matches: Option<bool>,
    /// For the `[φ, θ]` mutation: some Galois check failed.
    pub galois_detected: Option<bool>,
    pub witness: Option<String>,
}

pub fn mutation_instances(opts: &SelftestOptions) -> Vec<MutationResult> {
    run_instances(&opts.configs(), opts.trials, opts.seed ^ 0x6d75_7461_7465, |cfg, id, rng| {
        let ring = working_ring(cfg, opts.degree).expect("standard configuration");
        let rm = if id % 2 == 0 {
            mutate_commutator(&ring, rng)
        } else {
            let d = rng.gen_range(1..=2);
            let r = rng.gen_range(2..=3);
            mutate_phi(&ring, d, r, rng)
        };
        let mutation = rm.mutation.expect("mutated");
        let s = Stratification::from_family(&rm.module, opts.degree).expect("degree within bound");
        let rep = s.check_cocycle();
        let (mixed_matches, galois_detected) = if mutation.kind == MutationKind::PhiTheta {
            let mixed = s.mixed_defect(1) == -mutation.defect.clone();
            let galois = galois_checks(&rm.module, opts.galois_pairs.max(2), rng, false)
                .map(|cs| cs.iter().any(|c| c.status == Status::Fail))
                .unwrap_or(true);
            (Some(mixed), Some(galois))
        } else {
            (None, None)
        };
        MutationResult {
            config: config_label(cfg),
            id,
            kind: mutation.kind,
            detected: !rep.passed(),
            mixed_matches,
            galois_detected,
            witness: rep.witness.map(|(m, c)| format!("{m} : {}", MatrixText(&c))),
        }
    })
}

/// `φ_{1,0} = -n·a` and `φ_{0,1_1} = 0` for `O{n}`, `n = -3..3`, and additivity
/// of the twist under tensor products.
pub fn bk_table(cfg: &PrimeConfig, degree: u32) -> Result<Vec<(i64, bool)>> {
    let ring = working_ring(cfg, degree)?;
    let a = Scalar::e_prime_at_pi(&ring);
    let mut out = Vec::new();
    for n in -3i64..=3 {
        let (phi10, theta) = bk_phi10(&a, n, 1, degree)?;
        let mut ok = phi10 == Matrix::scalar(1, &a.scale_int(-n)) && theta.is_zero_matrix();
        for m in -3i64..=3 {
            let lhs = EnhancedHiggsModule::bk_twist_unit(n, &a, 1).tensor(&EnhancedHiggsModule::bk_twist_unit(m, &a, 1))?;
            let s1 = Stratification::build(&lhs, degree)?;
            let s2 = Stratification::build(&EnhancedHiggsModule::bk_twist_unit(n + m, &a, 1), degree)?;
            ok &= s1.eps == s2.eps;
        }
        out.push((n, ok));
    }
    Ok(out)
}

/// `U·A·V = D` with invertible `U`, `V` on `count` random matrices.
pub fn snf_trials(seed: u64, count: usize, precision: u32) -> usize {
    let configs = standard_configs(precision);
    let per = count.div_ceil(configs.len());
    run_instances(&configs, per, seed ^ 0x0073_6e66, |cfg, _, rng| {
        let ring = make_base_ring(cfg).expect("standard configuration");
        let z = Scalar::zero(&ring);
        let rows = rng.gen_range(1..=5);
        let cols = rng.gen_range(1..=5);
        let shift = rng.gen_range(0..3u32);
        let pi = Scalar::pi(&ring).pow(shift);
        let m = Matrix::from_fn(rows, cols, &z, |_, _| Scalar::random(&ring, rng) * pi.clone());
        match snf(&m) {
            Ok(s) => {
                s.u.clone() * m.clone() * s.v.clone() == s.d
                    && s.u.clone() * s.u_inv.clone() == Matrix::identity(rows, &z)
                    && s.v.clone() * s.v_inv.clone() == Matrix::identity(cols, &z)
            }
            Err(_) => false,
        }
    })
    .into_iter()
    .take(count)
    .filter(|ok| !ok)
    .count()
}

/// Failures of the simplicial identities for arithmetic and geometric shapes.
pub fn simplicial_failures(degree: u32) -> Result<Vec<String>> {
    let ring = make_base_ring(&PrimeConfig::quadratic(3, 6)?)?;
    let a = Scalar::e_prime_at_pi(&ring);
    let mut out = Vec::new();
    for (name, shape) in [("arith", Shape::arith(0, 1, degree)), ("geo", Shape::geo(0, 1, degree))] {
        let rep = verify_simplicial_identities(shape, 2, &a, false);
        out.extend(rep.failures.iter().map(|f| format!("{name}: {f:?}")));
    }
    Ok(out)
}

fn aggregate(instances: &[InstanceResult]) -> Vec<Check> {
    let mut by_id: BTreeMap<String, (usize, usize, usize, Option<String>, Option<u32>)> = BTreeMap::new();
    for inst in instances {
        for c in &inst.checks {
            let e = by_id.entry(c.id.clone()).or_default();
            e.0 += 1;
            match c.status {
                Status::Fail => {
                    e.1 += 1;
                    e.3.get_or_insert_with(|| {
                        format!("{} #{}: {}", inst.config, inst.id, c.witness.clone().unwrap_or_default())
                    });
                }
                Status::Skipped => e.2 += 1,
                Status::Pass => {}
            }
            if let Some(p) = c.precision_floor {
                e.4 = Some(e.4.map_or(p, |q| q.min(p)));
            }
        }
    }
    by_id
        .into_iter()
        .map(|(id, (n, fail, skip, witness, floor))| {
            let mut c = Check::new(&id, fail == 0)
                .witness(witness)
                .detail(json!({ "instances": n, "failures": fail, "skipped": skip }));
            c.precision_floor = floor;
            c
        })
        .collect()
}

/// The full randomized property suite.
pub fn selftest(opts: &SelftestOptions) -> Report {
    let mut report = Report::new("selftest", None, opts);
    let instances = random_instances(opts);
    report.extend(aggregate(&instances));

    let muts = mutation_instances(opts);
    let undetected: Vec<&MutationResult> = muts.iter().filter(|m| !m.detected || m.mixed_matches == Some(false)).collect();
    report.push(
        Check::new("stratification.mutation_detected", undetected.is_empty())
            .witness(undetected.first().map(|m| format!("{} #{} ({:?})", m.config, m.id, m.kind)))
            .detail(json!({ "mutations": muts.len(), "undetected": undetected.len() })),
    );
    let galois: Vec<&MutationResult> = muts.iter().filter(|m| m.galois_detected.is_some()).collect();
    let missed = galois.iter().filter(|m| m.galois_detected == Some(false)).count();
    report.push(
        Check::new("galois.mutation_detected", missed == 0)
            .detail(json!({ "mutations": galois.len(), "undetected": missed })),
    );

    let mut bk_ok = true;
    let mut bk_witness = None;
    for cfg in opts.configs() {
        match bk_table(&cfg, opts.degree) {
            Ok(rows) => {
                for (n, ok) in rows {
                    if !ok {
                        bk_ok = false;
                        bk_witness.get_or_insert(format!("{} n = {n}", config_label(&cfg)));
                    }
                }
            }
            Err(e) => {
                bk_ok = false;
                bk_witness.get_or_insert(e.to_string());
            }
        }
    }
    report.push(Check::new("stratification.bk_table", bk_ok).witness(bk_witness));

    let snf_fail = snf_trials(opts.seed, 200, opts.precision);
    report.push(
        Check::new("infra.snf_reconstruction", snf_fail == 0).detail(json!({ "matrices": 200, "failures": snf_fail })),
    );
    match simplicial_failures(4) {
        Ok(f) => report.push(Check::new("infra.simplicial_identities", f.is_empty()).witness(f.first().cloned())),
        Err(e) => report.push(error_check("infra.simplicial_identities", &e)),
    }

    let small = SelftestOptions {
        trials: 1,
        primes: Some(vec![opts.configs().first().map_or(3, |c| c.p)]),
        ..opts.clone()
    };
    let once = serde_json::to_string(&random_instances(&small)).unwrap_or_default();
    let twice = serde_json::to_string(&random_instances(&small)).unwrap_or_default();
    report.push(Check::new("infra.determinism", once == twice));
    report.set_data(json!({ "instances": instances.len(), "mutations": muts.len() }));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_selftest_passes() {
        let opts = SelftestOptions {
            trials: 2,
            ..SelftestOptions::default()
        };
        let rep = selftest(&opts);
        assert_eq!(rep.exit_code(), 0, "{}", rep.render_text());
    }
}
