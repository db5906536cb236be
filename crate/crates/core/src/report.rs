//! Per-claim certificates and the full run.
//!
//! Every certificate is a plain record with a fixed field order; evidence is
//! JSON with sorted keys. Apart from `timing_ms`, a certificate depends only
//! on the configuration, not on thread count or cache state.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{CoeffText, Ring};
use crate::geometry::{
    branch_of_surface, equation_field_of_definition, field_of_definition_check, geiser_image, is_bitangent,
    normalize_equation, small_common_zeros, smooth_via_good_reduction, sqrt_minus7_mod, verify_automorphism,
    verify_line_on_surface, visible_symmetry_group, FieldOfDefinition, LiftSign, ProjectiveAutomorphism,
    ReductionVerdict, TangencyKind,
};
use crate::groups::{
    cache, centralizer, companion_x3_x_1, conjugacy_class_size, element_order, embed_psl32,
    generate_group, is_simple, psl32_generators, weyl_from_sp6, GF2Mat, GroupElement, SubgroupHandle, WeylElem,
    ENUMERATION_GUARD, SP6_ORDER,
};
use crate::local_search::{
    enumerate_residue_solutions, q2_insolubility_certificate, residue_profile, InsolubilityVerdict, Primitivity,
    ResidueSearchSpec, TupleClass,
};
use crate::padic::{
    embed_theta, hensel_sqrt, is_square_q2, sqrt_pair, val2, EmbeddingChoice, PadicApprox, Valuation,
    MAX_PRECISION,
};
use crate::surface::{
    beta, branch_quartic, cross_coefficient, local_form, sum_line, sum_line_lift, sum_line_quadratic,
    surface_form,
};
use crate::{QuadExtElem, Rational, TowerElem, TOOLKIT_VERSION};

/// Extra bits carried by the embedding to absorb cancellation.
pub const EMBEDDING_MARGIN: u32 = 16;
pub const MIN_PRECISION: u32 = 8;
pub const MAX_CONFIG_PRECISION: u32 = MAX_PRECISION - EMBEDDING_MARGIN;
pub const DEFAULT_PRECISION: u32 = 64;
/// Odd primes at which `-7` is a square.
pub const DEFAULT_PRIMES: [u64; 5] = [11, 23, 29, 37, 43];
/// Environment variable overriding the group cache directory.
pub const CACHE_DIR_ENV: &str = "DP2CERT_CACHE_DIR";

/// Registered claims, in dependency order.
pub const CLAIM_IDS: [&str; 10] = [
    "lemma-2.1-spotcheck",
    "lemma-2.2",
    "lemma-2.3",
    "lemma-2.4",
    "corollary-2.5",
    "lemma-2.6",
    "thm-1.4-i",
    "thm-1.4-ii-partial",
    "thm-1.4-iii-ingredients",
    "thm-1.4-iv",
];

fn claim_title(id: &str) -> &'static str {
    match id {
        "lemma-2.1-spotcheck" => "square criterion in Q2*, spot checks against brute force",
        "lemma-2.2" => "-7 is a square in Q2; its roots mod 128",
        "lemma-2.3" => "embeddings of Q(sqrt-7) into Q2 and the image of the cross coefficient",
        "lemma-2.4" => "no primitive solution of f = 0 mod 64",
        "corollary-2.5" => "f has no nonzero solution in Q2",
        "lemma-2.6" => "centralizer and class size of PSL3(F2) inside W(E7) = Z/2 x Sp6(F2)",
        "thm-1.4-i" => "smoothness of the branch quartic by good reduction",
        "thm-1.4-ii-partial" => "Geiser involution and visible symmetries",
        "thm-1.4-iii-ingredients" => "bitangent x+y+z, its lifted lines and their field of definition",
        "thm-1.4-iv" => "no Q(sqrt-7)-point: the 2-adic image of the surface is insoluble",
        _ => "",
    }
}

fn claim_dependencies(id: &str) -> &'static [&'static str] {
    match id {
        "thm-1.4-iii-ingredients" => &["lemma-2.6"],
        "thm-1.4-iv" => &["lemma-2.3", "corollary-2.5"],
        _ => &[],
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("precision must be between {MIN_PRECISION} and {MAX_CONFIG_PRECISION}, got {0}")]
    Precision(u32),
    #[error("jobs must be positive")]
    Jobs,
    #[error("unknown claim `{0}`")]
    UnknownClaim(String),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    /// Claims to run; empty means all.
    pub claims: Vec<String>,
    pub precision: u32,
    pub primes: Vec<u64>,
    /// Overrides [`CACHE_DIR_ENV`] and the default location.
    pub cache_dir: Option<PathBuf>,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            claims: Vec::new(),
            precision: DEFAULT_PRECISION,
            primes: DEFAULT_PRIMES.to_vec(),
            cache_dir: None,
            jobs: None,
            out: None,
        }
    }
}

impl RunConfig {
    /// The prime list may be empty here; that only fails the smoothness claim.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(MIN_PRECISION..=MAX_CONFIG_PRECISION).contains(&self.precision) {
            return Err(ConfigError::Precision(self.precision));
        }
        if self.jobs == Some(0) {
            return Err(ConfigError::Jobs);
        }
        if let Some(bad) = self.claims.iter().find(|c| !CLAIM_IDS.contains(&c.as_str())) {
            return Err(ConfigError::UnknownClaim(bad.clone()));
        }
        Ok(())
    }

    pub fn resolved_cache_dir(&self) -> PathBuf {
        if let Some(d) = &self.cache_dir {
            return d.clone();
        }
        if let Some(d) = std::env::var_os(CACHE_DIR_ENV).filter(|d| !d.is_empty()) {
            return PathBuf::from(d);
        }
        let base = std::env::var_os("XDG_CACHE_HOME")
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
            .unwrap_or_else(std::env::temp_dir);
        base.join("dp2cert")
    }

    fn selected(&self) -> Vec<&'static str> {
        CLAIM_IDS
            .iter()
            .copied()
            .filter(|id| self.claims.is_empty() || self.claims.iter().any(|c| c == id))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Verified,
    Refuted,
    Inconclusive,
    Error,
}

/// One named sub-check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

fn check(name: &str, passed: bool, detail: Value) -> Check {
    Check { name: name.to_string(), passed, detail }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Parameters {
    pub precision: u32,
    pub primes: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub claim_id: String,
    pub title: String,
    pub toolkit_version: String,
    pub parameters: Parameters,
    pub inputs: BTreeMap<String, String>,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    pub evidence: Value,
    pub diagnostics: Vec<String>,
    pub timing_ms: u64,
}

impl Certificate {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Copy with `timing_ms` zeroed, for comparisons.
    pub fn without_timing(&self) -> Self {
        Self { timing_ms: 0, ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub verified: usize,
    pub refuted: usize,
    pub inconclusive: usize,
    pub error: usize,
    pub all_verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub toolkit_version: String,
    pub parameters: Parameters,
    pub certificates: Vec<Certificate>,
    pub summary: Summary,
}

impl Report {
    pub fn certificate(&self, id: &str) -> Option<&Certificate> {
        self.certificates.iter().find(|c| c.claim_id == id)
    }

    /// 0 if everything verified, 2 if any claim errored, else 1.
    pub fn exit_code(&self) -> i32 {
        exit_code_for(self.certificates.iter().map(|c| c.verdict))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// JSON with every `timing_ms` zeroed.
    pub fn to_json_without_timing(&self) -> String {
        let r = Report {
            certificates: self.certificates.iter().map(Certificate::without_timing).collect(),
            ..self.clone()
        };
        r.to_json()
    }
}

pub fn exit_code_for(verdicts: impl IntoIterator<Item = Verdict>) -> i32 {
    let mut code = 0;
    for v in verdicts {
        match v {
            Verdict::Verified => {}
            Verdict::Error => return 2,
            Verdict::Refuted | Verdict::Inconclusive => code = 1,
        }
    }
    code
}

// ---------------------------------------------------------------------------
// Shared state for one run

/// Group enumerations and finished certificates shared by the claims of one
/// run.
pub struct RunContext {
    config: RunConfig,
    sp6: OnceLock<Result<SubgroupHandle<GF2Mat>, String>>,
    done: BTreeMap<String, Certificate>,
}

impl RunContext {
    pub fn new(config: RunConfig) -> Self {
        Self { config, sp6: OnceLock::new(), done: BTreeMap::new() }
    }

    fn sp6(&self) -> Result<&SubgroupHandle<GF2Mat>, String> {
        self.sp6
            .get_or_init(|| {
                cache::load_or_build(&self.config.resolved_cache_dir())
                    .map(|(g, _)| g)
                    .map_err(|e| e.to_string())
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Runs `id`, reusing an earlier certificate from this context.
    pub fn claim(&mut self, id: &str) -> Certificate {
        if let Some(c) = self.done.get(id) {
            return c.clone();
        }
        for dep in claim_dependencies(id) {
            if !self.done.contains_key(*dep) {
                let c = self.claim(dep);
                self.done.insert(dep.to_string(), c);
            }
        }
        let cert = run_one(id, self);
        self.done.insert(id.to_string(), cert.clone());
        cert
    }
}

/// What a claim runner produces before the verdict is assigned.
struct Outcome {
    inputs: BTreeMap<String, String>,
    checks: Vec<Check>,
    evidence: Value,
    /// Set when the checks could not decide the claim either way.
    inconclusive: Option<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { inputs: BTreeMap::new(), checks: Vec::new(), evidence: json!({}), inconclusive: None }
    }

    fn input(&mut self, k: &str, v: impl Into<String>) {
        self.inputs.insert(k.to_string(), v.into());
    }
}

fn run_one(id: &str, ctx: &RunContext) -> Certificate {
    let start = Instant::now();
    let config = &ctx.config;
    let result = match id {
        "lemma-2.1-spotcheck" => claim_square_criterion(config),
        "lemma-2.2" => claim_sqrt_minus7(config),
        "lemma-2.3" => claim_embedding(config),
        "lemma-2.4" => claim_residue_search(),
        "corollary-2.5" => claim_insolubility(),
        "lemma-2.6" => claim_groups(ctx),
        "thm-1.4-i" => claim_smoothness(config),
        "thm-1.4-ii-partial" => claim_symmetries(),
        "thm-1.4-iii-ingredients" => claim_lines(ctx),
        "thm-1.4-iv" => claim_no_points(ctx),
        other => Err(format!("unknown claim `{other}`")),
    };
    let (inputs, checks, evidence, verdict, diagnostics) = match result {
        Ok(o) => {
            let all_passed = !o.checks.is_empty() && o.checks.iter().all(|c| c.passed);
            let (verdict, diag) = match (&o.inconclusive, all_passed) {
                (Some(why), _) => (Verdict::Inconclusive, vec![why.clone()]),
                (None, true) => (Verdict::Verified, vec![]),
                (None, false) => {
                    let failed = o.checks.iter().filter(|c| !c.passed).map(|c| format!("failed: {}", c.name));
                    (Verdict::Refuted, failed.collect())
                }
            };
            (o.inputs, o.checks, o.evidence, verdict, diag)
        }
        Err(msg) => (BTreeMap::new(), Vec::new(), json!({}), Verdict::Error, vec![msg]),
    };
    Certificate {
        claim_id: id.to_string(),
        title: claim_title(id).to_string(),
        toolkit_version: TOOLKIT_VERSION.to_string(),
        parameters: Parameters { precision: config.precision, primes: config.primes.clone() },
        inputs,
        verdict,
        checks,
        evidence,
        diagnostics,
        timing_ms: start.elapsed().as_millis() as u64,
    }
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, ConfigError> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| ConfigError::ThreadPool(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Runs one claim (and the claims it consumes).
pub fn run_claim(id: &str, config: &RunConfig) -> Result<Certificate, ConfigError> {
    if !CLAIM_IDS.contains(&id) {
        return Err(ConfigError::UnknownClaim(id.to_string()));
    }
    config.validate()?;
    with_pool(config.jobs, || RunContext::new(config.clone()).claim(id))
}

/// Runs the selected claims (all by default) in dependency order.
pub fn run_all(config: &RunConfig) -> Result<Report, ConfigError> {
    config.validate()?;
    with_pool(config.jobs, || {
        let mut ctx = RunContext::new(config.clone());
        let certificates: Vec<Certificate> = config.selected().into_iter().map(|id| ctx.claim(id)).collect();
        let count = |v: Verdict| certificates.iter().filter(|c| c.verdict == v).count();
        let summary = Summary {
            total: certificates.len(),
            verified: count(Verdict::Verified),
            refuted: count(Verdict::Refuted),
            inconclusive: count(Verdict::Inconclusive),
            error: count(Verdict::Error),
            all_verified: certificates.iter().all(|c| c.verdict == Verdict::Verified),
        };
        Report {
            toolkit_version: TOOLKIT_VERSION.to_string(),
            parameters: Parameters { precision: config.precision, primes: config.primes.clone() },
            certificates,
            summary,
        }
    })
}

/// Writes the report to `path` (creating parent directories).
pub fn write_report(report: &Report, path: &Path) -> std::io::Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, report.to_json() + "\n")
}

// ---------------------------------------------------------------------------
// Claims

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn claim_square_criterion(config: &RunConfig) -> Result<Outcome, String> {
    let k = config.precision;
    let mut o = Outcome::new();
    o.input("values", "-7, 2, 17, 2^n*u for n in 0..4 and odd u < 2^10");
    let sq = |n: i64| -> Result<bool, String> {
        is_square_q2(&PadicApprox::from_int(n, k).map_err(err)?).map_err(err)
    };
    o.checks.push(check("-7 is a square", sq(-7)?, json!(PadicApprox::from_int(-7, k).map_err(err)?)));
    o.checks.push(check("2 is not a square", !sq(2)?, json!("odd valuation")));
    let roots17: Vec<u32> = (1..128u32).step_by(2).filter(|t| t * t % 128 == 17).collect();
    o.checks.push(check(
        "17 is a square with a root mod 2^7",
        sq(17)? && !roots17.is_empty(),
        json!({ "roots_mod_128": roots17 }),
    ));

    // criterion against exhaustive search of t² ≡ 2^n u mod 2^(n+10)
    let mut mismatches = Vec::new();
    for n in 0..4u32 {
        let m = 1u64 << (n + 10);
        let squares: std::collections::HashSet<u64> = (0..m).map(|t| t * t % m).collect();
        for u in (1..1u64 << 10).step_by(2) {
            let x = (u << n) % m;
            let brute = squares.contains(&x);
            let crit = is_square_q2(&PadicApprox::new(i64::from(n), u128::from(u), 10).map_err(err)?).map_err(err)?;
            if brute != crit {
                mismatches.push(json!([n, u]));
            }
        }
    }
    o.checks.push(check(
        "criterion agrees with exhaustive squares",
        mismatches.is_empty(),
        json!({ "cases": 4 * 512, "mismatches": mismatches }),
    ));
    o.evidence = json!({ "criterion": "2^n*u is a square iff n is even and u = 1 mod 8" });
    Ok(o)
}

fn claim_sqrt_minus7(config: &RunConfig) -> Result<Outcome, String> {
    let m7 = BigInt::from(-7);
    let mut o = Outcome::new();
    o.input("a", "-7");
    let pair = sqrt_pair(&m7, 7).map_err(err)?;
    o.checks.push(check("roots mod 128 are {53, 75}", pair == [53, 75], json!(pair.map(|t| t as u64))));
    o.checks.push(check(
        "{53, 75} = {181, -181} mod 128",
        [181u64 % 128, (128 - 181 % 128) % 128].iter().all(|r| pair.contains(&u128::from(*r))),
        json!({ "181 mod 128": 181 % 128 }),
    ));
    o.checks.push(check(
        "181^2 + 7 = 2^15",
        val2(&int(181 * 181 + 7)) == Valuation::Finite(15) && 181 * 181 + 7 == 1 << 15,
        json!(181 * 181 + 7),
    ));
    let mut roots = BTreeMap::new();
    for k in [7, 20, config.precision] {
        let t = hensel_sqrt(&m7, k).map_err(err)?;
        let ok = (BigInt::from(t) * BigInt::from(t) + 7) % (BigInt::from(1) << k) == BigInt::from(0);
        o.checks.push(check(&format!("t^2 = -7 mod 2^{k}"), ok && t % 4 == 1, json!(t.to_string())));
        roots.insert(k.to_string(), t.to_string());
    }
    o.evidence = json!({ "canonical_root_by_precision": roots, "branch": "root = 1 mod 4; the other root is its negative" });
    Ok(o)
}

fn claim_embedding(config: &RunConfig) -> Result<Outcome, String> {
    let k = config.precision;
    let work = k + EMBEDDING_MARGIN;
    let t1 = EmbeddingChoice::theta1(work).map_err(err)?;
    let t2 = EmbeddingChoice::theta2(work).map_err(err)?;
    let rt = QuadExtElem::generator();
    let x = QuadExtElem::new(crate::arith::rat(3, 2), crate::arith::rat(-3, 2));
    let mut o = Outcome::new();
    o.input("x", x.to_text());
    o.input("working_precision", work.to_string());

    let residue = |v: &PadicApprox, m: u32| v.residue_mod_pow2(m).map_err(err).map(|r| r as u64);
    let t1_rt = embed_theta(&rt, &t1, k).map_err(err)?;
    let t2_rt = embed_theta(&rt, &t2, k).map_err(err)?;
    o.checks.push(check("theta1(sqrt-7) = 181 mod 128", residue(&t1_rt, 7)? == 181 % 128, json!(t1_rt)));
    o.checks.push(check("theta2(sqrt-7) = -181 mod 128", residue(&t2_rt, 7)? == 128 - 181 % 128, json!(t2_rt)));
    let sum = t1_rt.add(&t2_rt).map(|s| s.residue_mod_pow2(k).unwrap_or(1)).unwrap_or(0);
    o.checks.push(check(
        &format!("theta1(sqrt-7) + theta2(sqrt-7) = 0 mod 2^{k}"),
        sum == 0,
        json!(null),
    ));
    let m7 = PadicApprox::from_int(-7, k).map_err(err)?;
    o.checks.push(check(
        "T^2 + 7 splits over Q2",
        is_square_q2(&m7).map_err(err)?,
        json!("-7 = 1 mod 8"),
    ));
    let img = embed_theta(&x, &t1, k).map_err(err)?;
    let r64 = residue(&img, 6)?;
    o.checks.push(check("theta1((3/2)(1 - sqrt-7)) = -14 mod 64", r64 == 50, json!({ "value": img, "mod_64": r64 })));
    let c = embed_theta(&cross_coefficient(), &t1, k).map_err(err)?;
    o.checks.push(check(
        "theta1(cross coefficient) = 14 mod 64",
        residue(&c, 6)? == 14,
        json!(c),
    ));
    let img2 = embed_theta(&x, &t2, k).map_err(err)?;
    o.evidence = json!({
        "theta1": { "sqrt-7": t1_rt, "x": img, "cross_coefficient": c },
        "theta2": { "sqrt-7": t2_rt, "x": img2 },
        "theta1_cross_coefficient_mod_64": residue(&c, 6)?,
    });
    Ok(o)
}

fn claim_residue_search() -> Result<Outcome, String> {
    let f = local_form();
    let mut o = Outcome::new();
    o.input("form", f.to_text());
    o.input("modulus", "64");
    o.input("predicate", Primitivity::AtLeastOneOdd.as_str());
    let spec = ResidueSearchSpec::new(f.clone(), 6, Primitivity::AtLeastOneOdd).map_err(err)?;
    let r = enumerate_residue_solutions(&spec);
    o.checks.push(check("no primitive solution mod 64", r.solutions == 0, json!(r.witnesses)));
    o.checks.push(check(
        "tuple count is 64^4 - 32^4",
        r.tuples_enumerated == 64u64.pow(4) - 32u64.pow(4),
        json!(r.tuples_enumerated),
    ));
    let mut profiles = BTreeMap::new();
    for class in [TupleClass::AllOdd, TupleClass::WOddOneOdd] {
        let p = residue_profile(&f, 3, &class).map_err(err)?;
        let ok = p.keys().all(|r| *r == 2 || *r == 6);
        o.checks.push(check(&format!("class {} has f = +-2 mod 8", class.name()), ok, json!(p)));
        profiles.insert(class.name(), p);
    }
    o.evidence = json!({
        "tuples_enumerated": r.tuples_enumerated,
        "solutions": r.solutions,
        "profiles_mod_8": profiles,
    });
    Ok(o)
}

fn insolubility_evidence() -> Result<(Value, bool), String> {
    let cert = q2_insolubility_certificate(&local_form()).map_err(err)?;
    let ok = cert.verdict == InsolubilityVerdict::NoNonzeroQ2Solution;
    let mut v = serde_json::to_value(&cert).map_err(err)?;
    if let Value::Object(m) = &mut v {
        m.remove("wall_time_ms");
    }
    Ok((v, ok))
}

fn claim_insolubility() -> Result<Outcome, String> {
    let mut o = Outcome::new();
    o.input("form", local_form().to_text());
    let (v, ok) = insolubility_evidence()?;
    o.checks.push(check("descent identities hold", !v["descent_trace"].is_null(), json!(null)));
    o.checks.push(check("no nonzero Q2 solution", ok, v["verdict"].clone()));
    o.evidence = v;
    Ok(o)
}

fn claim_groups(ctx: &RunContext) -> Result<Outcome, String> {
    let mut o = Outcome::new();
    o.input("sp6_generators", "transvections along vectors pairing like the E7 Dynkin diagram");
    o.input("order_7_element", format!("{:?}", companion_x3_x_1()));
    let sp6 = ctx.sp6()?;
    let sp_order = sp6.order().ok_or("Sp6 not enumerated")?;
    o.checks.push(check(
        "|Sp6(F2)| = 2^9 * 3 * 15 * 63 = 1451520",
        sp_order == SP6_ORDER && SP6_ORDER == (1 << 9) * 3 * 15 * 63,
        json!(sp_order),
    ));
    let all_symplectic = sp6.elements().unwrap_or(&[]).iter().all(|m| m.is_symplectic());
    o.checks.push(check("every element preserves J", all_symplectic, json!(null)));

    let w = weyl_from_sp6(sp6).map_err(err)?;
    let w_order = w.order().unwrap_or(0);
    o.checks.push(check(
        "|W(E7)| = 2 * |Sp6(F2)| = 2^10 * 3^4 * 5 * 7",
        w_order == 2 * sp_order && w_order == (1 << 10) * 81 * 5 * 7,
        json!(w_order),
    ));

    let gens3 = psl32_generators();
    let gens6: Vec<GF2Mat> = gens3.iter().map(|&m| embed_psl32(m)).collect::<Result<_, _>>().map_err(err)?;
    let hom = gens3.iter().zip(&gens6).all(|(a, ea)| {
        gens3.iter().zip(&gens6).all(|(b, eb)| embed_psl32(a.mul(*b)).ok() == Some(ea.mul(*eb)))
    });
    o.checks.push(check("embedding is a homomorphism on generator pairs", hom, json!(null)));
    let psl = generate_group(&gens6, ENUMERATION_GUARD).map_err(err)?;
    let psl_order = psl.order().unwrap_or(0);
    o.checks.push(check("embedded PSL3(F2) has order 168", psl_order == 168, json!(psl_order)));
    o.checks.push(check(
        "embedded PSL3(F2) lies in Sp6(F2)",
        psl.elements().unwrap_or(&[]).iter().all(|m| sp6.contains(m) == Some(true)),
        json!(null),
    ));
    o.checks.push(check("embedded PSL3(F2) is simple", is_simple(&psl).map_err(err)?, json!(null)));

    let wgens: Vec<WeylElem> = gens6.iter().map(|&m| WeylElem::positive(m)).collect();
    let c = centralizer(&wgens, &w).map_err(err)?;
    let c_elems: Vec<String> = c.elements().unwrap_or(&[]).iter().map(|e| format!("{e:?}")).collect();
    o.checks.push(check(
        "centralizer of PSL3(F2) in W(E7) is {(+1, I), (-1, I)}",
        c.elements() == Some(&[WeylElem::positive(GF2Mat::identity(6)), WeylElem::minus_identity()][..]),
        json!(c_elems),
    ));

    let g7 = WeylElem::positive(embed_psl32(companion_x3_x_1()).map_err(err)?);
    let ord = element_order(g7);
    o.checks.push(check("representative has order 7", ord == 7, json!(ord)));
    let c7 = centralizer(&[g7], &w).map_err(err)?.order().unwrap_or(0);
    o.checks.push(check("its centralizer has order 14", c7 == 14, json!(c7)));
    let class = conjugacy_class_size(g7, &w).map_err(err)?;
    o.checks.push(check(
        "its class has 2^9 * 3^4 * 5 = 207360 elements",
        class == 207_360 && class == (1 << 9) * 81 * 5,
        json!(class),
    ));
    o.checks.push(check("class size * centralizer order = |W(E7)|", class * c7 == w_order, json!(class * c7)));
    let twisted = conjugacy_class_size(WeylElem::new(true, g7.sp()), &w).map_err(err)?;
    let id_class = conjugacy_class_size(g7.identity_like(), &w).map_err(err)?;
    o.checks.push(check(
        "computed classes are disjoint and fit in W(E7)",
        id_class == 1 && id_class + class + twisted <= w_order,
        json!({ "identity": id_class, "order_7": class, "sign_twisted": twisted }),
    ));
    o.checks.push(check(
        "Lagrange: 168, 14 and 2 divide the ambient orders",
        sp_order % psl_order == 0 && w_order % c7 == 0 && w_order % c.order().unwrap_or(1) == 0,
        json!(null),
    ));
    o.evidence = json!({
        "sp6_order": sp_order,
        "weyl_order": w_order,
        "psl32_order": psl_order,
        "psl32_centralizer_order": c.order(),
        "order_7_centralizer_order": c7,
        "order_7_class_size": class,
        "generator_fingerprint": cache::fingerprint(sp6.generators()).iter().map(|b| format!("{b:02x}")).collect::<String>(),
        "symplectic_form": "[[0, I], [I, 0]]",
    });
    Ok(o)
}

const GOOD_REDUCTION_NOTE: &str = "a smooth reduction at a prime of Q(sqrt-7) of good reduction implies \
     the quartic is smooth over Q(sqrt-7), since a singular point would specialize to one mod p; \
     the double cover w^2 + C = 0 is then smooth because C is (characteristic not 2)";

fn claim_smoothness(config: &RunConfig) -> Result<Outcome, String> {
    let c = branch_quartic();
    let mut o = Outcome::new();
    o.input("quartic", c.to_text());
    if config.primes.is_empty() {
        return Err("the prime list is empty".into());
    }
    let mut per_prime = Vec::new();
    let mut smooth_at = Vec::new();
    for &p in &config.primes {
        let Some(s) = sqrt_minus7_mod(p) else {
            per_prime.push(json!({ "prime": p, "skipped": "-7 is not a square mod p (or p is not an odd prime)" }));
            continue;
        };
        let r = smooth_via_good_reduction(&c, p, Some(s)).map_err(err)?;
        let scans: Vec<Value> = r
            .scans
            .iter()
            .map(|sc| {
                let verdict = match &sc.verdict {
                    ReductionVerdict::Smooth => json!("smooth"),
                    ReductionVerdict::Singular { point } => json!({ "singular_at": point }),
                };
                json!({ "root": sc.root, "points": sc.points_scanned, "verdict": verdict })
            })
            .collect();
        if r.is_smooth() {
            smooth_at.push(p);
        }
        per_prime.push(json!({ "prime": p, "scans": scans }));
    }
    let zeros = small_common_zeros(&c).map_err(err)?;
    o.checks.push(check(
        "no common zero of C and its partials with coordinates in {0, +-1}",
        zeros.is_empty(),
        json!(zeros),
    ));
    let s = surface_form();
    let dw = s.partial(0).map_err(err)?;
    o.checks.push(check("dS/dw = 2w", dw.to_text() == "2 * w^1", json!(dw.to_text())));
    o.evidence = json!({ "primes": per_prime, "smooth_at": smooth_at, "justification": GOOD_REDUCTION_NOTE });
    if smooth_at.is_empty() {
        o.inconclusive = Some("no configured prime gave a smooth reduction".into());
    } else {
        o.checks.push(check("smooth reduction found", true, json!(smooth_at[0])));
    }
    Ok(o)
}

fn claim_symmetries() -> Result<Outcome, String> {
    let s = surface_form();
    let c = branch_quartic();
    let mut o = Outcome::new();
    o.input("surface", s.to_text());
    o.checks.push(check(
        "surface is w^2 + C",
        branch_of_surface(&s).map_err(err)? == c,
        json!(null),
    ));
    let g = verify_automorphism(&ProjectiveAutomorphism::geiser(), &s).map_err(err)?;
    o.checks.push(check(
        "Geiser (w,x,y,z) -> (-w,x,y,z) preserves S with c = 1",
        g.holds && g.scalar == Some(QuadExtElem::one()),
        json!(g.scalar.map(|c| c.to_text())),
    ));
    let group = visible_symmetry_group(&c).map_err(err)?;
    o.checks.push(check(
        "signed permutations preserving C: 48, projectively 24, closed",
        group.linear.len() == 48 && group.projective_order() == 24 && group.closed,
        json!({ "linear": group.linear.len(), "projective": group.projective_order() }),
    ));
    // each plane symmetry lifts to S (acting trivially on w) and commutes with Geiser
    let geiser = ProjectiveAutomorphism::geiser();
    let mut lifts_ok = true;
    for m in &group.linear {
        let mut rows = vec![vec![QuadExtElem::one(), QuadExtElem::zero(), QuadExtElem::zero(), QuadExtElem::zero()]];
        for r in m.matrix() {
            let mut row = vec![QuadExtElem::zero()];
            row.extend(r.iter().cloned());
            rows.push(row);
        }
        let lifted = ProjectiveAutomorphism::new(rows).map_err(err)?;
        let ok = verify_automorphism(&lifted, &s).map_err(err)?.holds
            && lifted.compose(&geiser) == geiser.compose(&lifted);
        lifts_ok &= ok;
    }
    o.checks.push(check("plane symmetries lift to S and commute with Geiser", lifts_ok, json!(null)));
    let shear = ProjectiveAutomorphism::new(vec![
        vec![QuadExtElem::one(), QuadExtElem::one(), QuadExtElem::zero()],
        vec![QuadExtElem::zero(), QuadExtElem::one(), QuadExtElem::zero()],
        vec![QuadExtElem::zero(), QuadExtElem::zero(), QuadExtElem::one()],
    ])
    .map_err(err)?;
    o.checks.push(check(
        "control: x -> x + y is not a symmetry",
        !verify_automorphism(&shear, &c).map_err(err)?.holds,
        json!(null),
    ));
    o.evidence = json!({
        "scope": "certifies the Geiser involution and the order-24 signed-permutation symmetries only; \
                  the full automorphism group rests on an external identification of C",
        "projective_symmetries": group.projective.iter().map(|m| format!("{:?}", m.matrix().iter().map(|r| r.iter().map(|x| x.to_text()).collect::<Vec<_>>()).collect::<Vec<_>>())).collect::<Vec<_>>(),
    });
    Ok(o)
}

fn claim_lines(ctx: &RunContext) -> Result<Outcome, String> {
    let s = surface_form();
    let c = branch_quartic();
    let lift = sum_line_lift();
    let mut o = Outcome::new();
    o.input("line", "x + y + z");
    o.input("mu", lift.mu().to_text());
    o.input("q", lift.q().to_text());

    let r = is_bitangent(&sum_line(), &c).map_err(err)?;
    let (q, alpha) = r.square_root.clone().ok_or("restriction is not a square")?;
    o.checks.push(check(
        "x + y + z is a bitangent",
        r.kind == TangencyKind::Bitangent,
        json!({ "restriction": r.restriction.to_text() }),
    ));
    let q_plane = sum_line_quadratic();
    let q_matches = q.terms().all(|(e, cf)| q_plane.coeff_or_zero(&[e[0], e[1], 0]) == *cf)
        && q.num_terms() == q_plane.num_terms();
    o.checks.push(check("q = x^2 + xy + y^2", q_matches, json!(q.to_text())));
    o.checks.push(check(
        "alpha = ((1 - sqrt-7)/2)^4",
        alpha == beta().power(4),
        json!(alpha.to_text()),
    ));
    let mu = lift.mu().clone();
    o.checks.push(check(
        "mu^2 = -alpha",
        mu.clone() * mu == TowerElem::from_base(-alpha.clone()),
        json!(null),
    ));
    o.checks.push(check(
        "both lines w = +-i beta^2 q lie on S",
        verify_line_on_surface(&lift, &s).map_err(err)?,
        json!(null),
    ));
    let plus = lift.equation(LiftSign::Plus, s.vars()).map_err(err)?;
    let minus = lift.equation(LiftSign::Minus, s.vars()).map_err(err)?;
    let swapped = normalize_equation(&geiser_image(&plus).map_err(err)?) == Some(minus.clone());
    o.checks.push(check("Geiser swaps the two lines", swapped && plus != minus, json!([plus.to_text(), minus.to_text()])));
    let fod = field_of_definition_check(&lift, &s).map_err(err)?;
    let rescaled = equation_field_of_definition(&plus.scale(&TowerElem::generator())).map_err(err)?;
    let needs_i = |f: &FieldOfDefinition| matches!(f, FieldOfDefinition::NeedsI { .. });
    let witness = match &fod {
        FieldOfDefinition::NeedsI { witness } => json!(witness.to_text()),
        FieldOfDefinition::BaseField => json!(null),
    };
    o.checks.push(check(
        "lines are not defined over Q(sqrt-7), also after rescaling by i",
        needs_i(&fod) && needs_i(&rescaled),
        witness,
    ));
    let groups_cert = ctx.done.get("lemma-2.6").ok_or("group claim missing")?;
    let central = groups_cert.evidence["psl32_centralizer_order"].as_u64();
    o.checks.push(check(
        "group claim: centralizer of PSL3(F2) in W(E7) has order 2",
        groups_cert.verdict == Verdict::Verified && central == Some(2),
        json!({ "verdict": groups_cert.verdict, "centralizer_order": central }),
    ));
    o.evidence = json!({
        "scope": "ingredients only: bitangent, its two lines, their field of definition, the Geiser swap \
                  and the centralizer order; the Picard rank argument itself is not mechanized",
        "depends_on": ["lemma-2.6"],
    });
    Ok(o)
}

fn claim_no_points(ctx: &RunContext) -> Result<Outcome, String> {
    let mut o = Outcome::new();
    let s = surface_form();
    let f = local_form();
    o.input("surface", s.to_text());
    o.input("local_form", f.to_text());
    let emb = ctx.done.get("lemma-2.3").ok_or("embedding claim missing")?;
    let ins = ctx.done.get("corollary-2.5").ok_or("insolubility claim missing")?;
    o.checks.push(check("embedding claim verified", emb.verdict == Verdict::Verified, json!(emb.verdict)));
    o.checks.push(check("insolubility claim verified", ins.verdict == Verdict::Verified, json!(ins.verdict)));

    // θ₁ applied to S, coefficient by coefficient
    let k = ctx.config.precision;
    let t1 = EmbeddingChoice::theta1(k + EMBEDDING_MARGIN).map_err(err)?;
    let mut agree = true;
    let mut integral = true;
    let mut rows = Vec::new();
    for (e, c) in s.terms() {
        let img = embed_theta(c, &t1, k).map_err(err)?;
        integral &= img.valuation() >= Valuation::Finite(0);
        let mine = if img.valuation() >= Valuation::Finite(0) {
            img.residue_mod_pow2(6).map_err(err)? as u64
        } else {
            u64::MAX
        };
        let target = f.coeff_or_zero(e);
        let theirs = target.to_integer().rem_euclid_u64(64);
        agree &= mine == theirs;
        rows.push(json!({ "monomial": format!("{e:?}"), "theta1": img, "mod_64": mine, "f_mod_64": theirs }));
    }
    agree &= f.terms().all(|(e, _)| s.coeff(e).is_some());
    o.checks.push(check("theta1 maps every coefficient of S into Z2", integral, json!(null)));
    o.checks.push(check("theta1(S) = f coefficientwise mod 64", agree, json!(rows)));
    o.evidence = json!({
        "argument": [
            "a Q(sqrt-7)-point of S gives a Q2-point of theta1(S) through the embedding theta1",
            "theta1(S) has 2-adic integer coefficients, w^2-coefficient 1, and agrees with f mod 64",
            "the descent and the mod-64 search depend only on these facts, so theta1(S) has no nonzero Q2-point",
            "hence S has no Q(sqrt-7)-point",
        ],
        "chained": {
            "lemma-2.3": {
                "verdict": emb.verdict,
                "theta1_cross_coefficient_mod_64": emb.evidence["theta1_cross_coefficient_mod_64"],
            },
            "corollary-2.5": {
                "verdict": ins.verdict,
                "modulus": ins.evidence["modulus"],
                "tuples_enumerated": ins.evidence["tuples_enumerated"],
                "solutions_found": ins.evidence["solutions_found"],
                "insolubility_verdict": ins.evidence["verdict"],
            },
        },
    });
    Ok(o)
}

trait RemU64 {
    fn rem_euclid_u64(&self, m: u64) -> u64;
}

impl RemU64 for BigInt {
    fn rem_euclid_u64(&self, m: u64) -> u64 {
        use num_integer::Integer;
        use num_traits::ToPrimitive;
        self.mod_floor(&BigInt::from(m)).to_u64().expect("reduced")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cheap() -> RunConfig {
        RunConfig { precision: 16, ..RunConfig::default() }
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::default().validate().is_ok());
        let bad = RunConfig { precision: 7, ..RunConfig::default() };
        assert_eq!(bad.validate(), Err(ConfigError::Precision(7)));
        let bad = RunConfig { precision: MAX_CONFIG_PRECISION + 1, ..RunConfig::default() };
        assert!(bad.validate().is_err());
        let bad = RunConfig { jobs: Some(0), ..RunConfig::default() };
        assert_eq!(bad.validate(), Err(ConfigError::Jobs));
        let bad = RunConfig { claims: vec!["nope".into()], ..RunConfig::default() };
        assert_eq!(bad.validate(), Err(ConfigError::UnknownClaim("nope".into())));
    }

    #[test]
    fn unknown_claim() {
        assert_eq!(run_claim("unknown", &cheap()), Err(ConfigError::UnknownClaim("unknown".into())));
        let mut ctx = RunContext::new(cheap());
        let c = ctx.claim("unknown");
        assert_eq!(c.verdict, Verdict::Error);
    }

    #[test]
    fn arithmetic_claims_verify() {
        for id in ["lemma-2.1-spotcheck", "lemma-2.2", "lemma-2.3"] {
            let c = run_claim(id, &cheap()).unwrap();
            assert_eq!(c.verdict, Verdict::Verified, "{id}: {:?}", c.diagnostics);
        }
    }

    #[test]
    fn sqrt_claim_evidence() {
        let c = run_claim("lemma-2.2", &cheap()).unwrap();
        assert_eq!(c.check("roots mod 128 are {53, 75}").unwrap().detail, json!([53, 75]));
    }

    #[test]
    fn geometry_claims_verify() {
        for id in ["thm-1.4-i", "thm-1.4-ii-partial"] {
            let c = run_claim(id, &cheap()).unwrap();
            assert_eq!(c.verdict, Verdict::Verified, "{id}: {:?}", c.diagnostics);
        }
    }

    #[test]
    fn smoothness_needs_primes() {
        let cfg = RunConfig { primes: vec![], ..cheap() };
        assert_eq!(run_claim("thm-1.4-i", &cfg).unwrap().verdict, Verdict::Error);
        let cfg = RunConfig { primes: vec![5, 13], ..cheap() };
        assert_eq!(run_claim("thm-1.4-i", &cfg).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code_for([Verdict::Verified, Verdict::Verified]), 0);
        assert_eq!(exit_code_for([Verdict::Verified, Verdict::Inconclusive]), 1);
        assert_eq!(exit_code_for([Verdict::Refuted, Verdict::Error]), 2);
        assert_eq!(exit_code_for([]), 0);
    }

    #[test]
    fn certificate_key_order() {
        let c = run_claim("lemma-2.2", &cheap()).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        let keys = ["\"claim_id\"", "\"title\"", "\"toolkit_version\"", "\"parameters\"", "\"inputs\"", "\"verdict\"", "\"checks\"", "\"evidence\"", "\"diagnostics\"", "\"timing_ms\""];
        let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }
}
