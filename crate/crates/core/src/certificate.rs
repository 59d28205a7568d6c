//! Density certificates and orchestration: hypothesis checking, witness
//! search, machine verification of emitted certificates, the full
//! point-generation pipeline, parallel parameter scans, and torsion
//! reports.
//!
//! A certificate asserts that the surface is valid and carries a witness
//! point with nonzero `z, w` coordinates on a smooth fiber whose fiber
//! point is non-torsion; that is exactly the density criterion this tool
//! certifies. "No witness found up to the bound" is explicitly
//! inconclusive and is reported as such, never as a proof of non-density.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::poly::Poly;
use crate::algebra::rat::Rat;
use crate::error::Error;
use crate::fiber::{
    fiber_curve, is_nontorsion, search_points, torsion_locus, torsion_points, CurvePoint,
    FiberCurve, FiberPoint, LutzNagellReport, TorsionEvidence,
};
use crate::jacobian::{
    certify_d, degeneracy_check, generate_points, weierstrass_model, GeneratedPoints,
};
use crate::multisection::{classify, Classification};
use crate::surface::{fiber_param, on_surface, FiberId, Surface, SurfaceSection, WeightedPoint};

pub const SCHEMA: &str = "dp1cert/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Toolchain {
    pub name: String,
    pub version: String,
}

impl Toolchain {
    pub fn current() -> Self {
        Toolchain {
            name: "dp1cert".into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

/// The four hypothesis checks of the density criterion, plus surface
/// validity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisChecks {
    pub surface_valid: bool,
    pub on_surface: bool,
    pub zw_nonzero: bool,
    pub smooth_fiber: bool,
    pub nontorsion: bool,
}

impl HypothesisChecks {
    pub fn all(&self) -> bool {
        self.surface_valid && self.on_surface && self.zw_nonzero && self.smooth_fiber && self.nontorsion
    }
}

/// Witness evidence, fully recomputable from the surface and the point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessEvidence {
    pub point: WeightedPoint,
    pub fiber_t: FiberId,
    pub minimal_k: String,
    pub scale: Rat,
    /// The fiber point in the chart `w = 1`.
    pub fiber_point: String,
    /// `m * P` on the minimal model for `m = 1..=6`.
    pub multiples: Vec<String>,
    pub lutz_nagell: LutzNagellReport,
}

/// Optional attachments from the point-generation pipeline.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Attachments {
    pub base_point: WeightedPoint,
    pub classification: String,
    pub model: Option<serde_json::Value>,
    pub points: Option<Vec<WeightedPoint>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensityCertificate {
    pub schema: String,
    pub surface: Surface,
    pub checks: HypothesisChecks,
    pub witness: WitnessEvidence,
    /// Present only when every hypothesis check passed.
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attachments: Option<Attachments>,
    pub toolchain: Toolchain,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

pub const VERDICT: &str = "zariski-dense";

/// Structured failure: every violated hypothesis is listed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FailureReport {
    pub surface: Surface,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<WeightedPoint>,
    pub reasons: Vec<String>,
    /// For searches: the grid that was exhausted. Inconclusive by nature.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub searched: Option<SearchSummary>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchSummary {
    pub height_bound: u32,
    pub point_bound: u32,
    pub fibers_scanned: usize,
    pub note: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum CertifyOutcome {
    Certified(Box<DensityCertificate>),
    Failed(FailureReport),
}

impl CertifyOutcome {
    pub fn certificate(&self) -> Option<&DensityCertificate> {
        match self {
            CertifyOutcome::Certified(c) => Some(c),
            CertifyOutcome::Failed(_) => None,
        }
    }
}

/// Builds the evidence block for a point already known to sit on a smooth
/// fiber with nonzero `z, w`.
fn witness_evidence(
    point: &WeightedPoint,
    e: &FiberCurve,
    fiber_point: &FiberPoint,
    ev: &TorsionEvidence,
) -> WitnessEvidence {
    WitnessEvidence {
        point: point.clone(),
        fiber_t: e.t.clone().expect("fiber curve is attached"),
        minimal_k: e.minimal_k.to_string(),
        scale: e.scale.clone(),
        fiber_point: fiber_point.to_string(),
        multiples: ev.multiples.clone(),
        lutz_nagell: ev.lutz_nagell.clone(),
    }
}

/// Certifies density for a given witness point: checks membership,
/// nonzero `z, w`, smooth fiber, and non-torsion, reporting every failed
/// hypothesis.
pub fn certify_with_point(s: &Surface, point: &WeightedPoint) -> Result<CertifyOutcome, Error> {
    let validation = s.validate();
    let mut reasons: Vec<String> = validation
        .violations()
        .iter()
        .map(|v| format!("invalid surface: {v}"))
        .collect();
    let surface_valid = validation.is_valid();

    let member = on_surface(s, point);
    if !member {
        reasons.push("point not on surface".into());
    }
    let z_zero = point.z.is_zero();
    let w_zero = point.w.is_zero();
    if z_zero {
        reasons.push("zero z-coordinate".into());
    }
    if w_zero {
        reasons.push("zero w-coordinate".into());
    }

    let mut checks = HypothesisChecks {
        surface_valid,
        on_surface: member,
        zw_nonzero: !z_zero && !w_zero,
        smooth_fiber: false,
        nontorsion: false,
    };

    // The fiber data is still computable when only one of z, w vanishes;
    // evaluate it so torsion failures are reported alongside.
    let mut evidence: Option<WitnessEvidence> = None;
    if member && surface_valid && !point.is_base_point() {
        let t = fiber_param(point)?;
        match fiber_curve(s, &t) {
            Err(_) => reasons.push("singular fiber".into()),
            Ok(e) => {
                checks.smooth_fiber = true;
                let norm = point.normalize();
                let fp = if norm.w.is_one() {
                    CurvePoint::Affine(norm.x.clone(), norm.y.clone())
                } else {
                    // fiber at (1:0): chart z = 1
                    CurvePoint::Affine(norm.x.clone(), norm.y.clone())
                };
                match is_nontorsion(&e, &fp)? {
                    (true, ev) => {
                        checks.nontorsion = true;
                        evidence = Some(witness_evidence(point, &e, &fp, &ev));
                    }
                    (false, ev) => {
                        let ord = ev.torsion_order.unwrap_or(0);
                        reasons.push(format!("torsion (order {ord})"));
                        evidence = Some(witness_evidence(point, &e, &fp, &ev));
                    }
                }
            }
        }
    }

    if checks.all() {
        let cert = DensityCertificate {
            schema: SCHEMA.into(),
            surface: s.clone(),
            checks,
            witness: evidence.expect("evidence exists when all checks pass"),
            verdict: VERDICT.into(),
            attachments: None,
            toolchain: Toolchain::current(),
            timestamp: None,
        };
        Ok(CertifyOutcome::Certified(Box::new(cert)))
    } else {
        Ok(CertifyOutcome::Failed(FailureReport {
            surface: s.clone(),
            point: Some(point.clone()),
            reasons,
            searched: None,
        }))
    }
}

/// Coprime fiber parameters `t = u/v` with `0 < max(|u|, v) <= bound`,
/// `t != 0`, in the canonical search order.
pub fn fiber_grid(bound: u32) -> Vec<Rat> {
    let b = bound as i64;
    let mut pairs: Vec<(i64, i64)> = Vec::new();
    for u in -b..=b {
        if u == 0 {
            continue;
        }
        for v in 1..=b {
            if u.gcd(&v) == 1 {
                pairs.push((u, v));
            }
        }
    }
    pairs.sort_by_key(|&(u, v)| (u.abs().max(v), u, v));
    pairs.into_iter().map(|(u, v)| Rat::ratio(u, v)).collect()
}

/// Searches fibers `t = u/v` with `|u|, v <= height` (excluding the two
/// degenerate fibers) for a non-torsion point; each fiber is scanned with
/// the amplified point bound `height^2`, deep enough to reproduce the
/// worked examples. Returns the first witness in the deterministic order.
pub fn certify_search(s: &Surface, height: u32) -> Result<CertifyOutcome, Error> {
    let validation = s.validate();
    if !validation.is_valid() {
        return Ok(CertifyOutcome::Failed(FailureReport {
            surface: s.clone(),
            point: None,
            reasons: validation
                .violations()
                .iter()
                .map(|v| format!("invalid surface: {v}"))
                .collect(),
            searched: None,
        }));
    }
    let point_bound = height.saturating_mul(height).max(1);
    let grid = fiber_grid(height);
    let mut fibers_scanned = 0usize;
    for t in &grid {
        let Ok(e) = fiber_curve(s, &FiberId::Finite(t.clone())) else {
            continue;
        };
        fibers_scanned += 1;
        for p in search_points(&e, point_bound) {
            let CurvePoint::Affine(x, y) = &p else { continue };
            if y.is_zero() {
                continue; // 2-torsion
            }
            let (nontor, ev) = is_nontorsion(&e, &p)?;
            if !nontor {
                continue;
            }
            let point = WeightedPoint::new(x.clone(), y.clone(), t.clone(), Rat::one())?;
            debug_assert!(on_surface(s, &point));
            let checks = HypothesisChecks {
                surface_valid: true,
                on_surface: true,
                zw_nonzero: true,
                smooth_fiber: true,
                nontorsion: true,
            };
            let cert = DensityCertificate {
                schema: SCHEMA.into(),
                surface: s.clone(),
                checks,
                witness: witness_evidence(&point, &e, &p, &ev),
                verdict: VERDICT.into(),
                attachments: None,
                toolchain: Toolchain::current(),
                timestamp: None,
            };
            return Ok(CertifyOutcome::Certified(Box::new(cert)));
        }
    }
    Ok(CertifyOutcome::Failed(FailureReport {
        surface: s.clone(),
        point: None,
        reasons: vec![format!(
            "no witness found up to height bound {height} (not a proof of non-density)"
        )],
        searched: Some(SearchSummary {
            height_bound: height,
            point_bound,
            fibers_scanned,
            note: "the searched region is finite; a witness of larger height may exist".into(),
        }),
    }))
}

/// Entry point used by the CLI: point given or searched.
pub fn certify(
    s: &Surface,
    point: Option<&WeightedPoint>,
    height: u32,
) -> Result<CertifyOutcome, Error> {
    match point {
        Some(p) => certify_with_point(s, p),
        None => certify_search(s, height),
    }
}

/// Result of independently recomputing every evidence item of a
/// certificate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub ok: bool,
    pub mismatches: Vec<String>,
}

/// Recomputes all evidence from scratch and compares bit-identically
/// (envelope metadata — toolchain, timestamp — is not evidence).
pub fn verify_certificate(cert: &DensityCertificate) -> Result<VerifyOutcome, Error> {
    let mut mismatches = Vec::new();
    if cert.schema != SCHEMA {
        mismatches.push(format!("schema: {} != {}", cert.schema, SCHEMA));
    }
    let recomputed = certify_with_point(&cert.surface, &cert.witness.point)?;
    match recomputed {
        CertifyOutcome::Failed(f) => {
            mismatches.push(format!(
                "hypothesis checks fail on recomputation: {}",
                f.reasons.join("; ")
            ));
        }
        CertifyOutcome::Certified(fresh) => {
            if fresh.checks != cert.checks {
                mismatches.push("checks differ from recomputation".into());
            }
            if cert.verdict != VERDICT {
                mismatches.push(format!("verdict: {:?} != {:?}", cert.verdict, VERDICT));
            }
            let a = serde_json::to_value(&fresh.witness)?;
            let b = serde_json::to_value(&cert.witness)?;
            diff_json("witness", &a, &b, &mut mismatches);
        }
    }
    if let Some(att) = &cert.attachments {
        verify_attachments(&cert.surface, att, &mut mismatches)?;
    }
    Ok(VerifyOutcome {
        ok: mismatches.is_empty(),
        mismatches,
    })
}

fn verify_attachments(
    s: &Surface,
    att: &Attachments,
    mismatches: &mut Vec<String>,
) -> Result<(), Error> {
    let m = match classify(s, &att.base_point) {
        Ok(m) => m,
        Err(e) => {
            mismatches.push(format!("attachments: classification fails: {e}"));
            return Ok(());
        }
    };
    if m.classification.tag() != att.classification {
        mismatches.push(format!(
            "attachments.classification: {} != {}",
            att.classification,
            m.classification.tag()
        ));
        return Ok(());
    }
    if let Some(model_summary) = &att.model {
        match weierstrass_model(&m) {
            Ok(model) => {
                let fresh = model.summary();
                if &fresh != model_summary {
                    mismatches.push("attachments.model differs from recomputation".into());
                }
            }
            Err(e) => mismatches.push(format!("attachments.model: rebuild fails: {e}")),
        }
    }
    if let Some(points) = &att.points {
        for (i, p) in points.iter().enumerate() {
            if !on_surface(s, p) {
                mismatches.push(format!("attachments.points[{i}] not on surface"));
            }
            let norm = p.normalize();
            if !m.plane.eval(&norm.x, &norm.z).is_zero() {
                mismatches.push(format!("attachments.points[{i}] not on the 3-section"));
            }
        }
    }
    Ok(())
}

fn diff_json(path: &str, a: &serde_json::Value, b: &serde_json::Value, out: &mut Vec<String>) {
    use serde_json::Value;
    match (a, b) {
        (Value::Object(ma), Value::Object(mb)) => {
            for (k, va) in ma {
                match mb.get(k) {
                    Some(vb) => diff_json(&format!("{path}.{k}"), va, vb, out),
                    None => out.push(format!("{path}.{k}: missing")),
                }
            }
            for k in mb.keys() {
                if !ma.contains_key(k) {
                    out.push(format!("{path}.{k}: unexpected"));
                }
            }
        }
        (Value::Array(va), Value::Array(vb)) => {
            if va.len() != vb.len() {
                out.push(format!("{path}: length {} != {}", va.len(), vb.len()));
            } else {
                for (i, (x, y)) in va.iter().zip(vb).enumerate() {
                    diff_json(&format!("{path}[{i}]"), x, y, out);
                }
            }
        }
        _ => {
            if a != b {
                out.push(format!("{path}: {a} != {b}"));
            }
        }
    }
}

/// Outcome of the point-generation pipeline.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum PipelineOutcome {
    /// The 3-section contains a section over the rationals.
    SectionFound {
        multiple: u32,
        base_point: WeightedPoint,
        section_x: String,
        section_y: String,
        sample_points: Vec<WeightedPoint>,
    },
    /// Geometrically integral of genus 0 (reported prominently; point
    /// generation for this case is out of scope).
    GenusZeroFound {
        multiple: u32,
        base_point: WeightedPoint,
    },
    /// Integral of genus 1 with a certified non-torsion point on its
    /// Jacobian; carries the generated surface points.
    GenusOne {
        multiple: u32,
        base_point: WeightedPoint,
        delta: String,
        d_point: String,
        d_evidence: TorsionEvidence,
        generated: GeneratedPoints,
    },
    /// Every multiple up to the cap failed; reasons are in `attempts`.
    Exhausted,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineReport {
    pub surface: Surface,
    pub seed: WeightedPoint,
    pub certificate: Box<DensityCertificate>,
    /// `(multiple, disposition)` for every attempted multiple.
    pub attempts: Vec<(u32, String)>,
    pub outcome: PipelineOutcome,
}

pub const DEFAULT_RETRY_CAP: u32 = 25;

/// Iterates over multiples of the seed on its fiber, classifying the
/// 3-section through each, until one of the three productive cases
/// succeeds or the retry cap is exhausted.
pub fn pipeline(
    s: &Surface,
    seed: &WeightedPoint,
    count: u32,
    retry_cap: u32,
) -> Result<PipelineReport, Error> {
    let outcome = certify_with_point(s, seed)?;
    let cert = match outcome {
        CertifyOutcome::Certified(c) => c,
        CertifyOutcome::Failed(f) => {
            return Err(Error::Certificate(format!(
                "seed fails the density hypothesis: {}",
                f.reasons.join("; ")
            )))
        }
    };
    let t = cert.witness.fiber_t.clone();
    let e = fiber_curve(s, &t)?;
    let norm = seed.normalize();
    let seed_fiber: FiberPoint = CurvePoint::Affine(norm.x.clone(), norm.y.clone());
    let z0 = match &t {
        FiberId::Finite(t) => t.clone(),
        FiberId::Infinity => unreachable!("witness fibers are finite"),
    };

    let mut attempts: Vec<(u32, String)> = Vec::new();
    let mut acc = CurvePoint::Infinity;
    for m in 1..=retry_cap {
        acc = e.curve().add(&acc, &seed_fiber);
        let CurvePoint::Affine(xr, yr) = &acc else {
            attempts.push((m, "multiple is the identity".into()));
            continue;
        };
        if yr.is_zero() {
            attempts.push((m, "zero y-coordinate".into()));
            continue;
        }
        let r = WeightedPoint::new(xr.clone(), yr.clone(), z0.clone(), Rat::one())?;
        if !degeneracy_check(s, &r)? {
            attempts.push((m, "degeneracy polynomial vanishes".into()));
            continue;
        }
        let curve = classify(s, &r)?;
        match &curve.classification {
            Classification::Degenerate { reason } => {
                attempts.push((m, format!("degenerate: {reason}")));
                continue;
            }
            Classification::SectionOverK {
                section_p,
                section_q,
                ..
            } => {
                attempts.push((m, "section over the rationals".into()));
                let section = SurfaceSection::new(s, section_p.clone(), section_q.clone())?;
                let ts: Vec<Rat> = (1..=20).map(Rat::from_int).collect();
                let sample_points = crate::surface::section_points(s, &section, &ts);
                return Ok(PipelineReport {
                    surface: s.clone(),
                    seed: seed.clone(),
                    certificate: cert,
                    attempts,
                    outcome: PipelineOutcome::SectionFound {
                        multiple: m,
                        base_point: curve.base_point.clone(),
                        section_x: poly_string(section_p),
                        section_y: poly_string(section_q),
                        sample_points,
                    },
                });
            }
            Classification::GenusZero => {
                attempts.push((m, "geometrically integral of genus 0".into()));
                return Ok(PipelineReport {
                    surface: s.clone(),
                    seed: seed.clone(),
                    certificate: cert,
                    attempts,
                    outcome: PipelineOutcome::GenusZeroFound {
                        multiple: m,
                        base_point: curve.base_point.clone(),
                    },
                });
            }
            Classification::IntegralGenusOne => {
                let model = match weierstrass_model(&curve) {
                    Ok(model) => model,
                    Err(err) => {
                        attempts.push((m, format!("model construction failed: {err}")));
                        continue;
                    }
                };
                match certify_d(&model) {
                    Ok((true, ev)) => {
                        let generated = generate_points(s, &curve, &model, count)?;
                        attempts.push((m, "integral genus one with non-torsion point".into()));
                        return Ok(PipelineReport {
                            surface: s.clone(),
                            seed: seed.clone(),
                            certificate: cert,
                            attempts,
                            outcome: PipelineOutcome::GenusOne {
                                multiple: m,
                                base_point: curve.base_point.clone(),
                                delta: model.delta.to_string(),
                                d_point: model.d_point.to_string(),
                                d_evidence: ev,
                                generated,
                            },
                        });
                    }
                    Ok((false, _)) => {
                        attempts.push((m, "distinguished point is torsion".into()));
                        continue;
                    }
                    Err(err) => {
                        attempts.push((m, format!("distinguished point: {err}")));
                        continue;
                    }
                }
            }
        }
    }
    Ok(PipelineReport {
        surface: s.clone(),
        seed: seed.clone(),
        certificate: cert,
        attempts,
        outcome: PipelineOutcome::Exhausted,
    })
}

fn poly_string(p: &Poly<Rat>) -> String {
    p.to_string()
}

/// One scan record per surface.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanRecord {
    pub surface: Surface,
    pub result: CertifyOutcome,
}

/// Inclusive integer range specification.
#[derive(Clone, Copy, Debug)]
pub struct RangeSpec {
    pub lo: i64,
    pub hi: i64,
}

impl RangeSpec {
    pub fn values(&self) -> Vec<i64> {
        (self.lo..=self.hi).collect()
    }
}

/// Runs the witness search over a coefficient grid in parallel and returns
/// records sorted by `(a, b, c)`; the output is identical for any thread
/// count.
pub fn scan(
    a_range: RangeSpec,
    b_range: RangeSpec,
    c_range: RangeSpec,
    height: u32,
    threads: usize,
) -> Result<Vec<ScanRecord>, Error> {
    let mut grid: Vec<(i64, i64, i64)> = Vec::new();
    for a in a_range.values() {
        for b in b_range.values() {
            for c in c_range.values() {
                grid.push((a, b, c));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Certificate(format!("thread pool: {e}")))?;
    let mut records: Vec<((i64, i64, i64), ScanRecord)> = pool.install(|| {
        grid.par_iter()
            .map(|&(a, b, c)| {
                let s = Surface::from_ints(a, b, c);
                let result = certify_search(&s, height).unwrap_or_else(|e| {
                    CertifyOutcome::Failed(FailureReport {
                        surface: s.clone(),
                        point: None,
                        reasons: vec![format!("internal error: {e}")],
                        searched: None,
                    })
                });
                ((a, b, c), ScanRecord { surface: s, result })
            })
            .collect()
    });
    records.sort_by_key(|(key, _)| *key);
    Ok(records.into_iter().map(|(_, r)| r).collect())
}

/// Serializes scan records as JSON lines.
pub fn scan_to_jsonl(records: &[ScanRecord]) -> Result<String, Error> {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

/// Rational torsion found on one sampled fiber.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiberTorsion {
    pub t: FiberId,
    pub minimal_k: String,
    /// `(point, order)` pairs; empty when the fiber has trivial torsion.
    pub points: Vec<(String, u32)>,
}

/// The torsion multisection polynomials and a per-fiber torsion sample,
/// tooling for exploring the converse direction of the density criterion.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TorsionReport {
    pub surface: Surface,
    pub mmax: u32,
    /// `m ->` monomial list of the defining polynomial of the m-torsion
    /// multisection in `(x, t)`.
    pub multisections: Vec<(u32, Vec<(u32, u32, String)>)>,
    pub fibers: Vec<FiberTorsion>,
}

/// Emits the torsion multisection polynomials for `2 <= m <= mmax` and the
/// rational torsion points on a sample of smooth fibers.
pub fn torsion_report(s: &Surface, mmax: u32) -> Result<TorsionReport, Error> {
    if !(2..=12).contains(&mmax) {
        return Err(Error::Parse(format!("mmax {mmax} out of range 2..=12")));
    }
    let validation = s.validate();
    if !validation.is_valid() {
        return Err(Error::InvalidSurface(validation.violations().join(", ")));
    }
    let mut multisections = Vec::new();
    for m in 2..=mmax {
        multisections.push((m, torsion_locus(s, m)?.monomial_list()));
    }
    // Sample fibers: t = 0 first (it often carries the interesting torsion),
    // then the canonical grid order, first 10 smooth ones.
    let mut ts = vec![Rat::zero()];
    ts.extend(fiber_grid(4));
    let mut fibers = Vec::new();
    for t in ts {
        if fibers.len() >= 10 {
            break;
        }
        let Ok(e) = fiber_curve(s, &FiberId::Finite(t.clone())) else {
            continue;
        };
        let points = torsion_points(&e)
            .into_iter()
            .map(|(p, ord)| (p.to_string(), ord))
            .collect();
        fibers.push(FiberTorsion {
            t: FiberId::Finite(t),
            minimal_k: e.minimal_k.to_string(),
            points,
        });
    }
    Ok(TorsionReport {
        surface: s.clone(),
        mmax,
        multisections,
        fibers,
    })
}

/// Attaches pipeline results to a certificate (used by the CLI).
pub fn attach_pipeline(cert: &mut DensityCertificate, report: &PipelineReport) {
    let att = match &report.outcome {
        PipelineOutcome::SectionFound {
            base_point,
            sample_points,
            ..
        } => Attachments {
            base_point: base_point.clone(),
            classification: "section-over-k".into(),
            model: None,
            points: Some(sample_points.clone()),
        },
        PipelineOutcome::GenusZeroFound { base_point, .. } => Attachments {
            base_point: base_point.clone(),
            classification: "genus-zero".into(),
            model: None,
            points: None,
        },
        PipelineOutcome::GenusOne {
            base_point,
            generated,
            ..
        } => Attachments {
            base_point: base_point.clone(),
            classification: "integral-genus-one".into(),
            model: None,
            points: Some(generated.points.clone()),
        },
        PipelineOutcome::Exhausted => return,
    };
    cert.attachments = Some(att);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certify_first_example() {
        let s = Surface::from_ints(162, 0, 6);
        let p = WeightedPoint::from_ints(1, 13, 1, 1);
        let out = certify(&s, Some(&p), 10).unwrap();
        let cert = out.certificate().expect("certified");
        assert_eq!(cert.verdict, VERDICT);
        assert!(cert.checks.all());
        let v = verify_certificate(cert).unwrap();
        assert!(v.ok, "{:?}", v.mismatches);
    }

    #[test]
    fn certify_rejects_torsion_base_point() {
        let s = Surface::from_ints(243, 0, 16);
        let p = WeightedPoint::from_ints(0, 4, 0, 1);
        let out = certify(&s, Some(&p), 10).unwrap();
        let CertifyOutcome::Failed(f) = out else {
            panic!("expected failure")
        };
        assert!(f.reasons.iter().any(|r| r == "zero z-coordinate"));
        assert!(f.reasons.iter().any(|r| r == "torsion (order 3)"));
    }

    #[test]
    fn certify_rejects_invalid_surface() {
        let s = Surface::from_ints(0, 1, 1);
        let out = certify(&s, None, 5).unwrap();
        let CertifyOutcome::Failed(f) = out else {
            panic!("expected failure")
        };
        assert!(f.reasons[0].contains("invalid surface"));
    }

    #[test]
    fn tampered_certificate_fails_verification() {
        let s = Surface::from_ints(162, 0, 6);
        let p = WeightedPoint::from_ints(1, 13, 1, 1);
        let out = certify(&s, Some(&p), 10).unwrap();
        let cert = out.certificate().unwrap();

        // tampered y-coordinate -> membership mismatch
        let mut bad = cert.clone();
        bad.witness.point = WeightedPoint::from_ints(1, 14, 1, 1);
        let v = verify_certificate(&bad).unwrap();
        assert!(!v.ok);

        // forged multiple line -> group-law mismatch
        let mut bad = cert.clone();
        bad.witness.multiples[5] = "O".into();
        let v = verify_certificate(&bad).unwrap();
        assert!(!v.ok);
        assert!(v.mismatches.iter().any(|m| m.contains("multiples")));
    }

    #[test]
    fn search_certifies_second_example() {
        let s = Surface::from_ints(243, 0, 16);
        let out = certify(&s, None, 10).unwrap();
        let cert = out.certificate().expect("witness search succeeds");
        assert!(cert.checks.all());
        let v = verify_certificate(cert).unwrap();
        assert!(v.ok, "{:?}", v.mismatches);
    }

    #[test]
    fn fiber_grid_order() {
        let g = fiber_grid(2);
        assert_eq!(g[0], Rat::from_int(-1));
        assert_eq!(g[1], Rat::from_int(1));
        assert!(g.contains(&Rat::ratio(1, 2)));
        assert!(!g.contains(&Rat::zero()));
    }

    #[test]
    fn torsion_report_examples() {
        let s = Surface::from_ints(243, 0, 16);
        let rep = torsion_report(&s, 3).unwrap();
        // T_2 = x^3 + g(t)
        let t2 = &rep.multisections[0];
        assert_eq!(t2.0, 2);
        assert!(t2.1.iter().any(|(i, j, c)| (*i, *j, c.as_str()) == (3, 0, "1")));
        // the 3-torsion point (0, 4) appears on the fiber above 0
        let f0 = &rep.fibers[0];
        assert_eq!(f0.t, FiberId::Finite(Rat::zero()));
        assert!(f0.points.iter().any(|(p, o)| p == "(0,4)" && *o == 3));
    }
}
