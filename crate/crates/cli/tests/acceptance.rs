//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use kazlab::{load, read_spec, run, Command, LoadOptions, Loaded};
use kazlab_core::kazhdan::betti::betti_over_chain;
use kazlab_core::kazhdan::bounds::UpperBoundConfig;
use kazlab_core::kazhdan::{
    euler_class_trace, ghost_diagnostic, higher_kazhdan_projection, hodge_count, l2_betti_upper_bounds,
    lambda_ring_membership, luck_approximation, ProjectionKind,
};
use kazlab_core::ring::{ratio, GroupRingElement};
use kazlab_core::sos::{certificate_gap_claim, soundness_check, verify_certificate, Certificate, ClaimKind};
use kazlab_core::{fox_derivative, Word};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

const ZERO_TOL: f64 = 1e-8;
const IDEMPOTENCY_TOL: f64 = 1e-8;
const RESIDUAL_FACTOR: f64 = 1e-6;
const PRODUCT_TOL: f64 = 1e-6;
const HEAT_TOL: f64 = 1e-6;
const SOUNDNESS_SLACK: f64 = 1e-6;
const GHOST_SLACK: f64 = 1e-12;
const BOUND_TARGET_TOL: f64 = 1e-3;
const BOUND_FLOOR_TOL: f64 = 1e-12;

type Check = Result<String, String>;

fn specs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

fn options() -> LoadOptions {
    LoadOptions { zero_tolerance: Some(ZERO_TOL), max_cosets: 100_000, ball_radius: 4 }
}

fn load_spec(name: &str) -> Result<Loaded, String> {
    let spec = read_spec(&specs_dir().join(name)).map_err(|e| e.to_string())?;
    load(spec, &options()).map_err(|e| e.to_string())
}

fn corpus() -> Result<Vec<(String, Loaded)>, String> {
    let mut names: Vec<String> = std::fs::read_dir(specs_dir())
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    names.into_iter().map(|n| Ok((n.clone(), load_spec(&n)?))).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn free_group_betti() -> Check {
    let start = Instant::now();
    let l = load_spec("free_f2.json")?;
    let chain = l.chain.as_ref().ok_or("no chain")?;
    let rows = betti_over_chain(&l.complex, 1, chain, &l.tolerances).map_err(|e| e.to_string())?;
    let luck = luck_approximation(&l.complex, 1, chain, &l.tolerances).map_err(|e| e.to_string())?;
    let rank = 2i64;
    for (row, m) in rows.iter().zip(2i64..) {
        // Nielsen–Schreier: a subgroup of index N in F_r is free of rank N(r − 1) + 1
        let index = m * m;
        let oracle = index * (rank - 1) + 1;
        ensure(row.index as i64 == index, || format!("index {} for m = {m}", row.index))?;
        ensure(row.kernel_dim as i64 == oracle, || format!("betti {} != {oracle} for m = {m}", row.kernel_dim))?;
    }
    let expected = [ratio(5, 4), ratio(10, 9), ratio(17, 16), ratio(26, 25)];
    let ratios: Vec<BigRational> = luck.rows.iter().map(|r| r.ratio.clone()).collect();
    ensure(ratios == expected, || format!("ratios {ratios:?}"))?;
    let one = ratio(1, 1);
    ensure(ratios.windows(2).all(|w| w[1] < w[0] && (&w[1] - &one).abs() < (&w[0] - &one).abs()), || {
        "ratios do not approach 1 monotonically".into()
    })?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("betti 5,10,17,26; ratios 5/4,10/9,17/16,26/25 ({elapsed:.2?})"))
}

fn trace_identity_shadow() -> Check {
    let start = Instant::now();
    let l = load_spec("free_f2.json")?;
    let chain = l.chain.as_ref().ok_or("no chain")?;
    let report = run(Command::Obstruct, &l).map_err(|e| e.to_string())?;
    let degree_one = report.json["results"]
        .as_array()
        .and_then(|a| a.iter().find(|r| r["degree"] == 1))
        .ok_or("no degree-1 report")?;
    let rows = degree_one["rows"].as_array().ok_or("no rows")?;
    ensure(rows.len() == chain.members.len(), || "row count".into())?;
    for (row, member) in rows.iter().zip(&chain.members) {
        let betti = row["d_star_value"].as_i64().ok_or("d_star_value")?;
        let closed_form = betti - member.index() as i64;
        ensure(row["discrepancy"] == "1", || format!("discrepancy {}", row["discrepancy"]))?;
        ensure(closed_form == 1, || format!("closed form {closed_form}"))?;
    }
    ensure(degree_one["verdict"] == "persistent-discrepancy", || format!("verdict {}", degree_one["verdict"]))?;
    ensure(degree_one["gap_decay"]["decaying"] == true, || "gap decay not flagged".into())?;
    ensure(degree_one["obstruction_evidence"] == false, || "obstruction claimed".into())?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("discrepancy 1 on all {} quotients, gap decay flagged, no claim ({elapsed:.2?})", rows.len()))
}

fn surface_group() -> Check {
    let start = Instant::now();
    let l = load_spec("surface_genus2.json")?;
    let chain = l.chain.as_ref().ok_or("no chain")?;
    let tol = &l.tolerances;
    let indices = chain.indices();
    ensure(indices == [16, 81], || format!("indices {indices:?}"))?;
    let b1 = betti_over_chain(&l.complex, 1, chain, tol).map_err(|e| e.to_string())?;
    let b2 = betti_over_chain(&l.complex, 2, chain, tol).map_err(|e| e.to_string())?;
    for (r, &index) in b1.iter().zip(&indices) {
        // closed orientable cover of Euler characteristic −2·index
        ensure(r.kernel_dim == 2 + 2 * index, || format!("b1 {} at index {index}", r.kernel_dim))?;
    }
    ensure(b2.iter().all(|r| r.kernel_dim == 1), || "b2 != 1".into())?;
    let euler = euler_class_trace(&l.complex, chain, tol).map_err(|e| e.to_string())?;
    for row in &euler.rows {
        let trace = BigRational::new(row.alternating_sum.into(), (row.index as i64).into());
        ensure(trace == ratio(-2, 1), || format!("euler trace {trace} at index {}", row.index))?;
    }
    let report = run(Command::Obstruct, &l).map_err(|e| e.to_string())?;
    let degree_two = report.json["results"]
        .as_array()
        .and_then(|a| a.iter().find(|r| r["degree"] == 2))
        .ok_or("no degree-2 report")?;
    ensure(degree_two["beta_ref"]["value"] == "0", || "beta_ref".into())?;
    ensure(degree_two["verdict"] == "persistent-discrepancy", || format!("verdict {}", degree_two["verdict"]))?;
    ensure(degree_two["rows"].as_array().is_some_and(|rows| rows.iter().all(|r| r["discrepancy"] == "1")), || {
        "discrepancy != 1".into()
    })?;
    let ghost = ghost_diagnostic(&l.complex, 2, chain, ProjectionKind::Full, tol).map_err(|e| e.to_string())?;
    for row in &ghost.rows {
        let bound = 1.0 / row.index as f64;
        ensure(row.max_entry <= bound + GHOST_SLACK, || format!("ghost entry {} > 1/{}", row.max_entry, row.index))?;
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(120))?;
    Ok(format!(
        "b1 34,164; b2 1,1; euler -2,-2; discrepancy 1; ghost {:.3e},{:.3e} ({elapsed:.2?})",
        ghost.rows[0].max_entry, ghost.rows[1].max_entry
    ))
}

fn hodge_counts(corpus: &[(String, Loaded)]) -> Check {
    let mut checked = 0;
    let mut failures = Vec::new();
    for (name, l) in corpus {
        let Some(chain) = &l.chain else { continue };
        for member in &chain.members {
            for n in 0..=l.complex.top_degree() {
                let h = hodge_count(&l.complex, n, &member.representation, &l.tolerances).map_err(|e| e.to_string())?;
                checked += 1;
                if !h.holds() {
                    failures.push(format!("{name} index {} degree {n}: {h:?}", member.index()));
                }
            }
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok(format!("{checked} (presentation, quotient, degree) triples, 0 failures"))
}

fn projection_algebra(corpus: &[(String, Loaded)]) -> Check {
    let mut checked = 0;
    let (mut idem, mut res, mut prod, mut heat) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (name, l) in corpus {
        let Some(chain) = &l.chain else { continue };
        for member in &chain.members {
            for n in 0..=l.complex.top_degree() {
                let k = higher_kazhdan_projection(&l.complex, n, &member.representation, &l.tolerances)
                    .map_err(|e| format!("{name} index {} degree {n}: {e}", member.index()))?;
                let where_ = || format!("{name} index {} degree {n}", member.index());
                let d = k.full.idempotency_defect().max(k.plus.idempotency_defect()).max(k.minus.idempotency_defect());
                ensure(d <= IDEMPOTENCY_TOL, || format!("{}: idempotency {d:e}", where_()))?;
                // with no nonzero spectrum π(Δ) = 0 and the residual vanishes identically
                let gap = k.full_gap.gap.unwrap_or(1.0);
                ensure(k.residual <= RESIDUAL_FACTOR * gap, || format!("{}: residual {:e}", where_(), k.residual))?;
                ensure(k.product_defect <= PRODUCT_TOL, || format!("{}: product {:e}", where_(), k.product_defect))?;
                ensure(k.heat_distance <= HEAT_TOL, || format!("{}: heat {:e}", where_(), k.heat_distance))?;
                idem = idem.max(d);
                res = res.max(k.residual / gap);
                prod = prod.max(k.product_defect);
                heat = heat.max(k.heat_distance);
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} cases; max idempotency {idem:.1e}, residual/gap {res:.1e}, product {prod:.1e}, heat {heat:.1e}"
    ))
}

fn chain_and_fox_identities(corpus: &[(String, Loaded)]) -> Check {
    let (mut quotients, mut relators) = (0, 0);
    for (name, l) in corpus {
        if let Some(chain) = &l.chain {
            for member in &chain.members {
                l.complex.validate_against(&member.representation).map_err(|e| format!("{name}: {e}"))?;
                let rep = &member.representation;
                if let (Some(d0), Some(d1)) = (l.complex.differential(0), l.complex.differential(1)) {
                    let product = rep
                        .evaluate(d1)
                        .and_then(|a| a.mul(&rep.evaluate(d0)?))
                        .map_err(|e| e.to_string())?;
                    ensure(product.is_zero(), || format!("{name}: d1 d0 != 0 at index {}", member.index()))?;
                }
                quotients += 1;
            }
        }
        let p = &l.presentation;
        for r in p.relators() {
            let mut sum = GroupRingElement::zero();
            for g in 0..p.generator_count() {
                let d = fox_derivative(r, g, p.generator_count()).map_err(|e| e.to_string())?;
                let g_minus_one = &GroupRingElement::from_word(Word::generator(g)) - &GroupRingElement::one();
                sum = &sum + &(&d * &g_minus_one);
            }
            let expected = &GroupRingElement::from_word(r.clone()) - &GroupRingElement::one();
            ensure(sum == expected, || format!("{name}: fundamental formula fails"))?;
            relators += 1;
        }
    }
    Ok(format!("{quotients} quotients with exact chain identities, {relators} relators satisfy the Fox identity"))
}

fn certificates(corpus: &[(String, Loaded)]) -> Check {
    let start = Instant::now();
    let l = load_spec("cyclic_z3_certificate.json")?;
    let certs = l.certificates().map_err(|e| e.to_string())?;
    let find = |label: &str| certs.iter().find(|c| c.label == label).ok_or(format!("missing {label}"));
    let good = find("z3-gap-6")?;
    let v = verify_certificate(&l.presentation, good).map_err(|e| e.to_string())?;
    ensure(v.verified, || "z3 certificate rejected".into())?;
    let claim = certificate_gap_claim(good, &v).map_err(|e| e.to_string())?;
    ensure(claim.kind == ClaimKind::UniformGap && claim.epsilon == Some(ratio(6, 1)), || format!("{claim:?}"))?;
    let tampered = verify_certificate(&l.presentation, find("z3-gap-5-tampered")?).map_err(|e| e.to_string())?;
    ensure(!tampered.verified && !tampered.residual.is_zero(), || "tampered certificate accepted".into())?;

    let mut sound_checks = 0;
    let reps = l.chain.as_ref().map(|c| c.representations()).unwrap_or_default();
    for row in soundness_check(good, &claim, &reps, SOUNDNESS_SLACK).map_err(|e| e.to_string())? {
        ensure(row.holds, || format!("soundness fails on {}", row.representation))?;
        sound_checks += 1;
    }
    for (name, l) in corpus {
        let mut certs = l.certificates().map_err(|e| e.to_string())?;
        certs.push(Certificate::degree_zero_sos(&l.presentation));
        let reps = l.chain.as_ref().map(|c| c.representations()).unwrap_or_default();
        for cert in &certs {
            let v = verify_certificate(&l.presentation, cert).map_err(|e| e.to_string())?;
            if cert.label.contains("sos") {
                ensure(v.verified, || format!("{name}: {} rejected", cert.label))?;
            }
            if !v.verified {
                continue;
            }
            let claim = certificate_gap_claim(cert, &v).map_err(|e| e.to_string())?;
            for row in soundness_check(cert, &claim, &reps, SOUNDNESS_SLACK).map_err(|e| e.to_string())? {
                ensure(row.holds, || format!("{name}: {} unsound on {}", cert.label, row.representation))?;
                sound_checks += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("eps=6 true, eps=5 false, SOS form true, {sound_checks} soundness checks ({elapsed:.2?})"))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn lambda_ring(corpus: &[(String, Loaded)]) -> Check {
    let order_sets: Vec<Vec<u64>> = std::iter::once(vec![])
        .chain((1..=24).map(|a| vec![a]))
        .chain((2..=12).flat_map(|a| (a + 1..=12).map(move |b| vec![a, b])))
        .collect();
    let mut cases = 0;
    for den in 1..=100i64 {
        for num in [1i64, 3, 10] {
            let q = ratio(num, den);
            let reduced = q.denom().to_string().parse::<u64>().map_err(|e| e.to_string())?;
            for orders in &order_sets {
                let oracle = prime_factors(reduced).iter().all(|p| orders.iter().any(|o| o % p == 0));
                ensure(lambda_ring_membership(&q, orders) == oracle, || format!("{q} over {orders:?}"))?;
                cases += 1;
            }
        }
    }
    let mut candidates = 0;
    for (name, l) in corpus {
        if !l.spec.finite_subgroup_orders.is_empty() {
            continue;
        }
        let Some(chain) = &l.chain else { continue };
        for n in 0..=l.complex.top_degree() {
            let luck = luck_approximation(&l.complex, n, chain, &l.tolerances).map_err(|e| e.to_string())?;
            if let Some(limit) = luck.extrapolated {
                ensure(limit.is_integer(), || format!("{name} degree {n}: limit candidate {limit}"))?;
                ensure(lambda_ring_membership(&limit, &[]), || format!("{name}: {limit} outside Z"))?;
                candidates += 1;
            }
        }
    }
    Ok(format!("{cases} oracle cases; {candidates} torsion-free limit candidates, all integers"))
}

fn upper_bounds() -> Check {
    let start = Instant::now();
    let z5 = load_spec("cyclic_z5_bounds.json")?;
    let chain = z5.chain.as_ref().ok_or("no chain")?;
    let gap = betti_over_chain(&z5.complex, 0, chain, &z5.tolerances).map_err(|e| e.to_string())?[0]
        .gap
        .ok_or("no gap")?;
    let s = l2_betti_upper_bounds(&z5.complex, 0, &UpperBoundConfig::new(gap, 20)).map_err(|e| e.to_string())?;
    let target = 0.2;
    let reached = s
        .terms
        .iter()
        .find(|t| (t.upper_f64 - target).abs() <= BOUND_TARGET_TOL)
        .ok_or_else(|| format!("Z/5 bounds end at {}", s.terms.last().map_or(f64::NAN, |t| t.upper_f64)))?;

    let f2 = load_spec("free_f2.json")?;
    let s = l2_betti_upper_bounds(&f2.complex, 1, &UpperBoundConfig::new(0.5, 12)).map_err(|e| e.to_string())?;
    ensure(!s.cutoff && s.terms.len() == 12, || format!("F2 sequence cut off: {:?}", s.cutoff_reason))?;
    ensure(s.norm_bound == f2_l1_bound(&f2), || "norm bound is not the l1 bound".into())?;
    ensure(s.terms.windows(2).all(|w| w[1].upper <= w[0].upper), || "F2 sequence increases".into())?;
    let floor = ratio(1, 1);
    for t in &s.terms {
        ensure(t.upper >= floor || t.upper_f64 >= 1.0 - BOUND_FLOOR_TOL, || format!("u_{} = {}", t.power, t.upper))?;
    }
    ensure(s.terms.iter().all(|t| !t.upper.is_zero()), || "zero term".into())?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!(
        "Z/5 within 1e-3 of 1/5 at M = {}; F2 u_1..u_12 from {} to {:.6} ({elapsed:.2?})",
        reached.power,
        s.terms[0].upper,
        s.terms[11].upper_f64
    ))
}

fn f2_l1_bound(l: &Loaded) -> BigRational {
    kazlab_core::kazhdan::build_laplacian(&l.complex, 1).map(|b| b.full.l1_bound()).unwrap_or_else(|_| ratio(0, 1))
}

fn main() {
    let total = Instant::now();
    let corpus = corpus();
    let with_corpus = |f: fn(&[(String, Loaded)]) -> Check| match &corpus {
        Ok(c) => f(c),
        Err(e) => Err(format!("corpus failed to load: {e}")),
    };
    let results: Vec<(&str, Check)> = vec![
        ("AC1 free-group l2-Betti via Luck ratios", free_group_betti()),
        ("AC2 trace identity shadow on F2", trace_identity_shadow()),
        ("AC3 genus-2 surface group full complex", surface_group()),
        ("AC4 Hodge dimension count", with_corpus(hodge_counts)),
        ("AC5 projection algebra", with_corpus(projection_algebra)),
        ("AC6 chain-complex and Fox identities", with_corpus(chain_and_fox_identities)),
        ("AC7 certificate verifier", with_corpus(certificates)),
        ("AC8 Lambda^G membership", with_corpus(lambda_ring)),
        ("AC9 upper-bound sequences", upper_bounds()),
    ];
    let mut failed = 0;
    for (name, result) in &results {
        match result {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} passed, {failed} failed ({:.2?})", results.len() - failed, total.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
