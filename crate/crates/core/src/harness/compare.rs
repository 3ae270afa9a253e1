use std::io::Write;

use rayon::prelude::*;

use super::stats::{ecdf, quantile};
use super::{decode_with, MethodOptions};
use crate::charging::ChargingMatrix;
use crate::io::{fmt_sig, Method, ResultRow};
use crate::model::Instance;
use crate::permgen::{generate, PermGenConfig};

/// Relative gap at or below which a method counts as matching the exact decoder.
pub const ZERO_GAP_RTOL: f64 = 1e-9;

/// Statistics of one method on one instance. Percentages are in `[0, 100]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    pub instance: String,
    pub method: Method,
    pub permutations: usize,
    /// Permutations the exact decoder solved; the denominator of `solved_pct`.
    pub feasible: usize,
    /// Permutations this method solved among the feasible ones.
    pub solved: usize,
    pub solved_pct: f64,
    /// Share of this method's solved permutations with zero gap.
    pub zero_gap_pct: f64,
    pub p90: Option<f64>,
    pub p95: Option<f64>,
    /// Gap of every solved permutation, in permutation order.
    pub gaps: Vec<f64>,
    pub ecdf: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GapReport {
    pub summaries: Vec<MethodSummary>,
    /// Broken hierarchy, nesting or sign conditions, one message each. Empty on a healthy run.
    pub violations: Vec<String>,
}

impl GapReport {
    pub const SUMMARY_HEADER: &'static str =
        "instance,method,permutations,feasible,solved,solved_pct,zero_gap_pct,p90,p95";
    pub const ECDF_HEADER: &'static str = "instance,method,gap_pct,fraction";

    pub fn summary(&self, instance: &str, method: Method) -> Option<&MethodSummary> {
        self.summaries
            .iter()
            .find(|s| s.instance == instance && s.method == method)
    }

    pub fn write_summary_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", Self::SUMMARY_HEADER)?;
        let opt = |v: Option<f64>| v.map(|x| fmt_sig(x, 12)).unwrap_or_default();
        for s in &self.summaries {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                s.instance,
                s.method,
                s.permutations,
                s.feasible,
                s.solved,
                fmt_sig(s.solved_pct, 12),
                fmt_sig(s.zero_gap_pct, 12),
                opt(s.p90),
                opt(s.p95),
            )?;
        }
        Ok(())
    }

    pub fn write_ecdf_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", Self::ECDF_HEADER)?;
        for s in &self.summaries {
            for &(x, f) in &s.ecdf {
                writeln!(
                    out,
                    "{},{},{},{}",
                    s.instance,
                    s.method,
                    fmt_sig(x, 12),
                    fmt_sig(f, 12)
                )?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Comparison {
    /// Sorted by instance, method and permutation id.
    pub rows: Vec<ResultRow>,
    pub report: GapReport,
}

fn gap_pct(distance: f64, exact: f64) -> f64 {
    if exact == 0.0 {
        return if distance == 0.0 { 0.0 } else { f64::INFINITY };
    }
    100.0 * (distance - exact) / exact
}

fn pct(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        100.0 * part as f64 / whole as f64
    }
}

/// Decodes `perms.count` permutations of every instance with the exact decoder
/// and each of `methods`. The same permutation seeds are used for every instance.
///
/// The exact decoder always runs, whether or not it is listed, since every gap
/// is measured against it.
pub fn run_comparison(
    instances: &[Instance],
    perms: &PermGenConfig,
    methods: &[Method],
    options: &MethodOptions,
) -> Comparison {
    let mut order = vec![Method::Joint];
    for &m in Method::ALL.iter().skip(1) {
        if methods.contains(&m) {
            order.push(m);
        }
    }
    let mut comparison = Comparison::default();
    for instance in instances {
        let matrix = ChargingMatrix::build(instance);
        let permutations = generate(instance, perms);
        let per_perm: Vec<Vec<ResultRow>> = permutations
            .par_iter()
            .enumerate()
            .map(|(id, perm)| {
                let mut exact = None;
                order
                    .iter()
                    .map(|&method| {
                        let r = decode_with(method, instance, &matrix, perm, options);
                        let distance = r.distance();
                        if method == Method::Joint {
                            exact = distance;
                        }
                        ResultRow {
                            instance: instance.name().to_string(),
                            method,
                            perm_id: id,
                            distance,
                            gap_pct: distance.zip(exact).map(|(d, e)| gap_pct(d, e)),
                            time_s: r.stats.elapsed.as_secs_f64(),
                            max_front: r.stats.max_front,
                        }
                    })
                    .collect()
            })
            .collect();

        check_consistency(&per_perm, &mut comparison.report.violations);
        let listed: Vec<Method> = order.iter().copied().filter(|m| methods.contains(m)).collect();
        for &method in &listed {
            comparison
                .report
                .summaries
                .push(summarize(instance.name(), method, &order, &per_perm));
        }
        comparison.rows.extend(
            per_perm
                .into_iter()
                .flatten()
                .filter(|r| listed.contains(&r.method)),
        );
    }
    comparison.rows.sort_by(|a, b| {
        (a.instance.as_str(), a.method.id(), a.perm_id).cmp(&(b.instance.as_str(), b.method.id(), b.perm_id))
    });
    comparison
}

fn summarize(instance: &str, method: Method, order: &[Method], per_perm: &[Vec<ResultRow>]) -> MethodSummary {
    let col = order.iter().position(|&m| m == method).expect("method was run");
    let feasible = per_perm.iter().filter(|rows| rows[0].solved()).count();
    let solved = per_perm
        .iter()
        .filter(|rows| rows[0].solved() && rows[col].solved())
        .count();
    let gaps: Vec<f64> = per_perm.iter().filter_map(|rows| rows[col].gap_pct).collect();
    let zero = gaps.iter().filter(|&&g| g / 100.0 <= ZERO_GAP_RTOL).count();
    let mut sorted = gaps.clone();
    sorted.sort_by(f64::total_cmp);
    MethodSummary {
        instance: instance.to_string(),
        method,
        permutations: per_perm.len(),
        feasible,
        solved,
        solved_pct: pct(solved, feasible),
        zero_gap_pct: pct(zero, gaps.len()),
        p90: quantile(&sorted, 0.90),
        p95: quantile(&sorted, 0.95),
        ecdf: ecdf(&gaps),
        gaps,
    }
}

/// Exact ≤ fixed-route ≤ single-stop on distances, and single-stop solved ⇒
/// fixed-route solved ⇒ exact solved.
fn check_consistency(per_perm: &[Vec<ResultRow>], violations: &mut Vec<String>) {
    for rows in per_perm {
        for row in rows {
            if let Some(g) = row.gap_pct {
                if g / 100.0 < -ZERO_GAP_RTOL {
                    violations.push(format!(
                        "{} perm {}: {} beats the exact decoder (gap {g}%)",
                        row.instance, row.perm_id, row.method
                    ));
                }
            }
        }
        for pair in rows.windows(2) {
            let (outer, inner) = (&pair[0], &pair[1]);
            match (outer.distance, inner.distance) {
                (None, Some(_)) => violations.push(format!(
                    "{} perm {}: {} solved but {} did not",
                    inner.instance, inner.perm_id, inner.method, outer.method
                )),
                (Some(a), Some(b)) if b < a - ZERO_GAP_RTOL * a.abs().max(1.0) => violations.push(format!(
                    "{} perm {}: {} distance {b} below {} distance {a}",
                    inner.instance, inner.perm_id, inner.method, outer.method
                )),
                _ => {}
            }
        }
    }
}
