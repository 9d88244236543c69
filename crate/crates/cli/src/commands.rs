use kazlab_core::kazhdan::betti::{betti_over_chain, BettiRow};
use kazlab_core::kazhdan::bounds::UpperBoundConfig;
use kazlab_core::kazhdan::{
    box_obstruction_report, build_laplacian, euler_class_trace, ghost_diagnostic, higher_kazhdan_projection,
    l2_betti_upper_bounds, lambda_ring_membership, luck_approximation, BetaProvenance, BetaRef, ProjectionKind,
};
use kazlab_core::ring::parse_rational;
use kazlab_core::sos::{certificate_gap_claim, soundness_check, verify_certificate, ClaimKind, GapClaim};
use kazlab_core::spectral::{evaluate, spectral_gap, GapReport};
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::spec::Loaded;
use crate::{opt_f64, real, to_value, CliError, Csv, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Spectrum,
    Betti,
    Luck,
    Project,
    Obstruct,
    Euler,
    Ghost,
    VerifyCert,
    Bounds,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Betti => "betti",
            Command::Luck => "luck",
            Command::Project => "project",
            Command::Obstruct => "obstruct",
            Command::Euler => "euler",
            Command::Ghost => "ghost",
            Command::VerifyCert => "verify-cert",
            Command::Bounds => "bounds",
        }
    }
}

pub fn run(command: Command, l: &Loaded) -> Result<Report, CliError> {
    let (results, csv, summary) = match command {
        Command::Spectrum => spectrum(l)?,
        Command::Betti => betti(l)?,
        Command::Luck => luck(l)?,
        Command::Project => project(l)?,
        Command::Obstruct => obstruct(l)?,
        Command::Euler => euler(l)?,
        Command::Ghost => ghost(l)?,
        Command::VerifyCert => verify_cert(l)?,
        Command::Bounds => bounds(l)?,
    };
    let chain = l.chain.as_ref().map(|c| {
        json!({
            "indices": c.indices(),
            "separation": to_value(&c.separation),
            "warnings": c.warnings,
        })
    });
    let json = json!({
        "command": command.name(),
        "name": l.spec.name,
        "cell_counts": l.complex.cell_counts(),
        "complex_source": to_value(&l.complex.source()),
        "complete": l.complex.is_complete(),
        "tolerances": to_value(&l.tolerances),
        "chain": chain,
        "results": results,
    });
    Ok(Report { command, json, csv, summary })
}

type Output = (Value, String, String);

const BETTI_HEADER: &[&str] = &["quotient_index", "group_index", "degree", "kernel_dim", "gap", "ratio_num", "ratio_den"];

fn betti_csv(csv: &mut Csv, rows: &[BettiRow]) {
    for r in rows {
        csv.row(&[
            r.quotient.to_string(),
            r.index.to_string(),
            r.degree.to_string(),
            r.kernel_dim.to_string(),
            opt_f64(r.gap),
            r.ratio.numer().to_string(),
            r.ratio.denom().to_string(),
        ]);
    }
}

#[derive(Serialize)]
struct SpectrumRow {
    quotient: usize,
    index: usize,
    degree: usize,
    operator: &'static str,
    report: GapReport,
}

fn spectrum(l: &Loaded) -> Result<Output, CliError> {
    let chain = l.require_chain()?;
    let mut rows = Vec::new();
    for n in l.degrees()? {
        let bundle = build_laplacian(&l.complex, n)?;
        let ops = [("full", &bundle.full), ("plus", &bundle.plus), ("minus", &bundle.minus)];
        let per_quotient: Vec<Vec<SpectrumRow>> = chain
            .members
            .par_iter()
            .enumerate()
            .map(|(i, m)| {
                ops.iter()
                    .map(|(name, a)| {
                        let op = evaluate(a, &m.representation, format!("{name}_{n}"))?;
                        let report = spectral_gap(&op, l.tolerances.zero)?;
                        Ok(SpectrumRow { quotient: i + 1, index: m.index(), degree: n, operator: name, report })
                    })
                    .collect::<Result<Vec<_>, kazlab_core::Error>>()
            })
            .collect::<Result<_, _>>()?;
        rows.extend(per_quotient.into_iter().flatten());
    }
    let mut csv = Csv::new(&[
        "quotient_index",
        "group_index",
        "degree",
        "operator",
        "dimension",
        "kernel_dim",
        "gap",
        "min_eigenvalue",
        "threshold",
        "resolved",
        "lowest",
    ]);
    for r in &rows {
        csv.row(&[
            r.quotient.to_string(),
            r.index.to_string(),
            r.degree.to_string(),
            r.operator.to_string(),
            r.report.dimension.to_string(),
            r.report.kernel_dim.to_string(),
            opt_f64(r.report.gap),
            opt_f64(r.report.min_eigenvalue),
            real(r.report.threshold),
            r.report.resolved.to_string(),
            r.report.lowest.iter().map(|&v| real(v)).collect::<Vec<_>>().join(";"),
        ]);
    }
    let csv = csv.finish();
    Ok((to_value(&rows), csv.clone(), csv))
}

fn betti(l: &Loaded) -> Result<Output, CliError> {
    let chain = l.require_chain()?;
    let mut csv = Csv::new(BETTI_HEADER);
    let mut all = Vec::new();
    for n in l.degrees()? {
        let rows = betti_over_chain(&l.complex, n, chain, &l.tolerances)?;
        betti_csv(&mut csv, &rows);
        all.extend(rows);
    }
    let csv = csv.finish();
    Ok((to_value(&all), csv.clone(), csv))
}

fn luck(l: &Loaded) -> Result<Output, CliError> {
    let chain = l.require_chain()?;
    let mut csv = Csv::new(BETTI_HEADER);
    let mut reports = Vec::new();
    let mut summary = String::new();
    for n in l.degrees()? {
        let r = luck_approximation(&l.complex, n, chain, &l.tolerances)?;
        betti_csv(&mut csv, &r.rows);
        let in_lambda = r.extrapolated.as_ref().map(|q| lambda_ring_membership(q, &l.spec.finite_subgroup_orders));
        summary.push_str(&format!(
            "degree {n}: ratios {} -> extrapolated {}\n",
            r.rows.iter().map(|x| x.ratio.to_string()).collect::<Vec<_>>().join(", "),
            r.extrapolated.as_ref().map(|q| q.to_string()).unwrap_or_else(|| "n/a".into()),
        ));
        let mut v = to_value(&r);
        v["extrapolated_in_lambda_ring"] = json!(in_lambda);
        v["finite_subgroup_orders"] = json!(l.spec.finite_subgroup_orders);
        reports.push(v);
    }
    Ok((Value::Array(reports), csv.finish(), summary))
}

#[derive(Serialize)]
struct ProjectRow {
    quotient: usize,
    index: usize,
    degree: usize,
    trace_full: f64,
    trace_plus: f64,
    trace_minus: f64,
    idempotency_defect: f64,
    self_adjointness_defect: f64,
    product_defect: f64,
    heat_distance: f64,
    residual: f64,
    gap: Option<f64>,
    rank_d: usize,
    rank_d_prev: usize,
}

fn project(l: &Loaded) -> Result<Output, CliError> {
    let chain = l.require_chain()?;
    let mut rows = Vec::new();
    for n in l.degrees()? {
        let per: Vec<ProjectRow> = chain
            .members
            .par_iter()
            .enumerate()
            .map(|(i, m)| {
                let k = higher_kazhdan_projection(&l.complex, n, &m.representation, &l.tolerances)?;
                let defect = |p: &kazlab_core::ProjectionMatrix| p.idempotency_defect();
                Ok(ProjectRow {
                    quotient: i + 1,
                    index: m.index(),
                    degree: n,
                    trace_full: k.full.trace(),
                    trace_plus: k.plus.trace(),
                    trace_minus: k.minus.trace(),
                    idempotency_defect: defect(&k.full).max(defect(&k.plus)).max(defect(&k.minus)),
                    self_adjointness_defect: k.full.self_adjointness_defect(),
                    product_defect: k.product_defect,
                    heat_distance: k.heat_distance,
                    residual: k.residual,
                    gap: k.full_gap.gap,
                    rank_d: k.rank_d,
                    rank_d_prev: k.rank_d_prev,
                })
            })
            .collect::<Result<_, kazlab_core::Error>>()?;
        rows.extend(per);
    }
    let mut csv = Csv::new(&[
        "quotient_index",
        "group_index",
        "degree",
        "trace_full",
        "trace_plus",
        "trace_minus",
        "idempotency_defect",
        "self_adjointness_defect",
        "product_defect",
        "heat_distance",
        "residual",
        "gap",
        "rank_d",
        "rank_d_prev",
    ]);
    for r in &rows {
        csv.row(&[
            r.quotient.to_string(),
            r.index.to_string(),
            r.degree.to_string(),
            real(r.trace_full),
            real(r.trace_plus),
            real(r.trace_minus),
            real(r.idempotency_defect),
            real(r.self_adjointness_defect),
            real(r.product_defect),
            real(r.heat_distance),
            real(r.residual),
            opt_f64(r.gap),
            r.rank_d.to_string(),
            r.rank_d_prev.to_string(),
        ]);
    }
    let csv = csv.finish();
    Ok((to_value(&rows), csv.clone(), csv))
}

fn beta_ref_for(l: &Loaded, n: usize) -> Result<Option<BetaRef>, CliError> {
    let refs = l.spec.beta_refs.as_slice();
    let chosen = refs.iter().find(|b| b.degree == Some(n)).or_else(|| refs.iter().find(|b| b.degree.is_none()));
    chosen
        .map(|b| {
            Ok(BetaRef { value: parse_rational(&b.value)?, provenance: b.provenance, citation: b.citation.clone() })
        })
        .transpose()
}

/// Gap claims from every certificate in the spec that verifies.
fn verified_claims(l: &Loaded) -> Result<Vec<GapClaim>, CliError> {
    let mut claims = Vec::new();
    for cert in l.certificates()? {
        let v = verify_certificate(&l.presentation, &cert)?;
        if v.verified {
            claims.push(certificate_gap_claim(&cert, &v)?);
        }
    }
    Ok(claims)
}

fn obstruct(l: &Loaded) -> Result<Output, CliError> {
    let chain = l.require_chain()?;
    let claims = verified_claims(l)?;
    let mut csv = Csv::new(&[
        "quotient_index",
        "group_index",
        "degree",
        "d_star_value",
        "lifted_num",
        "lifted_den",
        "discrepancy_num",
        "discrepancy_den",
        "gap",
        "euler_prediction",
    ]);
    let mut reports = Vec::new();
    let mut summary = String::new();
    for n in l.degrees()? {
        let beta = match beta_ref_for(l, n)? {
            Some(b) => b,
            None => {
                let luck = luck_approximation(&l.complex, n, chain, &l.tolerances)?;
                let value = luck.extrapolated.ok_or_else(|| {
                    CliError::Input(format!("degree {n}: no beta_ref and fewer than two quotients to extrapolate"))
                })?;
                BetaRef { value, provenance: BetaProvenance::LuckExtrapolated, citation: None }
            }
        };
        let claim = claims.iter().find(|c| c.kind == ClaimKind::UniformGap && c.degree == Some(n));
        let r = box_obstruction_report(&l.complex, n, chain, beta, claim, &l.tolerances)?;
        for row in &r.rows {
            csv.row(&[
                row.quotient.to_string(),
                row.index.to_string(),
                n.to_string(),
                row.d_star_value.to_string(),
                row.lifted_value.numer().to_string(),
                row.lifted_value.denom().to_string(),
                row.discrepancy.numer().to_string(),
                row.discrepancy.denom().to_string(),
                opt_f64(row.gap),
                row.euler_prediction.map(|v| v.to_string()).unwrap_or_default(),
            ]);
        }
        summary.push_str(&format!(
            "degree {n}: verdict {} (beta_ref {} {}), gap decay {}\n",
            to_value(&r.verdict).as_str().unwrap_or(""),
            r.beta_ref.value,
            to_value(&r.beta_ref.provenance).as_str().unwrap_or(""),
            r.gap_decay.decaying
        ));
        reports.push(to_value(&r));
    }
    Ok((Value::Array(reports), csv.finish(), summary))
}

fn euler(l: &Loaded) -> Result<Output, CliError> {
    let chain = l.require_chain()?;
    let r = euler_class_trace(&l.complex, chain, &l.tolerances)?;
    let mut csv = Csv::new(&[
        "quotient_index",
        "group_index",
        "kernel_dims",
        "alternating_sum",
        "expected",
        "trace_num",
        "trace_den",
    ]);
    for row in &r.rows {
        let trace = BigRational::new(row.alternating_sum.into(), (row.index as i64).into());
        csv.row(&[
            row.quotient.to_string(),
            row.index.to_string(),
            row.kernel_dims.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(";"),
            row.alternating_sum.to_string(),
            row.expected.to_string(),
            trace.numer().to_string(),
            trace.denom().to_string(),
        ]);
    }
    let csv = csv.finish();
    Ok((to_value(&r), csv.clone(), csv))
}

fn ghost(l: &Loaded) -> Result<Output, CliError> {
    let chain = l.require_chain()?;
    let kind = l.spec.ghost_kind.unwrap_or(ProjectionKind::Full);
    let mut csv = Csv::new(&["quotient_index", "group_index", "degree", "kind", "max_entry", "trace"]);
    let mut reports = Vec::new();
    let mut summary = String::new();
    for n in l.degrees()? {
        let r = ghost_diagnostic(&l.complex, n, chain, kind, &l.tolerances)?;
        let kind_name = to_value(&r.kind).as_str().unwrap_or("").to_string();
        for row in &r.rows {
            csv.row(&[
                row.quotient.to_string(),
                row.index.to_string(),
                n.to_string(),
                kind_name.clone(),
                real(row.max_entry),
                real(row.trace),
            ]);
        }
        summary.push_str(&format!(
            "degree {n}: max entries {} ghost-like {}\n",
            r.rows.iter().map(|x| real(x.max_entry)).collect::<Vec<_>>().join(", "),
            r.ghost_like
        ));
        reports.push(to_value(&r));
    }
    Ok((Value::Array(reports), csv.finish(), summary))
}

fn verify_cert(l: &Loaded) -> Result<Output, CliError> {
    let certs = l.certificates()?;
    if certs.is_empty() {
        return Err(CliError::Input("spec has no certificates".into()));
    }
    let reps = l.chain.as_ref().map(|c| c.representations()).unwrap_or_default();
    let names = l.names();
    let mut csv = Csv::new(&["label", "verified", "residual_support", "claim_kind", "epsilon", "soundness"]);
    let mut reports = Vec::new();
    let mut summary = String::new();
    for cert in &certs {
        let v = verify_certificate(&l.presentation, cert)?;
        let claim = if v.verified { Some(certificate_gap_claim(cert, &v)?) } else { None };
        let soundness = match &claim {
            Some(c) if !reps.is_empty() => Some(soundness_check(cert, c, &reps, 1e-6)?),
            _ => None,
        };
        let sound = soundness.as_ref().map(|rows| rows.iter().all(|r| r.holds));
        csv.row(&[
            cert.label.clone(),
            v.verified.to_string(),
            v.residual_support().to_string(),
            claim.as_ref().map(|c| to_value(&c.kind).as_str().unwrap_or("").to_string()).unwrap_or_default(),
            claim.as_ref().and_then(|c| c.epsilon.as_ref()).map(|e| e.to_string()).unwrap_or_default(),
            sound.map(|s| s.to_string()).unwrap_or_default(),
        ]);
        summary.push_str(&format!("{}: {}\n", cert.label, v.verified));
        reports.push(json!({
            "label": cert.label,
            "verified": v.verified,
            "residual": v.residual.to_text_rows(names),
            "claim": claim.as_ref().map(to_value),
            "soundness": soundness.as_ref().map(to_value),
        }));
    }
    Ok((Value::Array(reports), csv.finish(), summary))
}

fn bounds(l: &Loaded) -> Result<Output, CliError> {
    let spec = l
        .spec
        .upper_bounds
        .as_ref()
        .ok_or_else(|| CliError::Input("spec has no `upper_bounds` section".into()))?;
    let gap_hint = match spec.gap_hint {
        Some(g) => g,
        None => {
            let chain = l.require_chain()?;
            betti_over_chain(&l.complex, spec.degree, chain, &l.tolerances)?
                .iter()
                .filter_map(|r| r.gap)
                .reduce(f64::min)
                .ok_or_else(|| CliError::Input("no chain gap available for `gap_hint`".into()))?
        }
    };
    let mut config = UpperBoundConfig::new(gap_hint, spec.max_power);
    config.norm_bound = spec.norm_bound.as_deref().map(parse_rational).transpose()?;
    if let Some(b) = spec.term_budget {
        config.term_budget = b;
    }
    let s = l2_betti_upper_bounds(&l.complex, spec.degree, &config)?;
    let mut csv = Csv::new(&["degree", "power", "upper_num", "upper_den", "upper", "lower"]);
    for t in &s.terms {
        csv.row(&[
            s.degree.to_string(),
            t.power.to_string(),
            t.upper.numer().to_string(),
            t.upper.denom().to_string(),
            real(t.upper_f64),
            real(t.lower),
        ]);
    }
    let csv = csv.finish();
    Ok((to_value(&s), csv.clone(), csv))
}
