//! Batch oracle checks over a cube of lattice points.

use rayon::prelude::*;
use serde::Serialize;

use aztec_core::castle::{build_castle, Castle};
use aztec_core::contour::tuple_for_point;
use aztec_core::matchings::{
    minimal_matching_bruteforce, weight, weighted_sum, weighted_sum_framed, Matching,
};
use aztec_core::minmatch::{check_lemmas, construct_minimal};
use aztec_core::poly::LaurentPoly;
use aztec_core::prism::ClusterOracle;
use aztec_core::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// The contour crosses itself; the matching formula does not apply.
    Skipped,
    /// More matchings than the cap allows.
    Capped,
}

#[derive(Debug, Serialize)]
pub struct PointResult {
    pub point: [i64; 3],
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unframed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub framed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemmas: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub max: i64,
    pub framed: bool,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub capped: usize,
    pub points: Vec<PointResult>,
}

impl Report {
    pub fn failed(&self) -> usize {
        self.failed
    }
}

pub fn run(max: i64, framed: bool, cap: usize) -> Report {
    let mut points = Vec::new();
    for i in -max..=max {
        for j in -max..=max {
            for k in -max..=max {
                points.push([i, j, k]);
            }
        }
    }
    let results: Vec<PointResult> = points
        .into_par_iter()
        .map_init(
            || (ClusterOracle::new(false), ClusterOracle::new(true)),
            |(plain, principal), p| check_point(p, framed.then_some(principal), plain, cap),
        )
        .collect();
    let tally = |s: Status| results.iter().filter(|r| r.status == s).count();
    Report {
        max,
        framed,
        passed: tally(Status::Pass),
        failed: tally(Status::Fail),
        skipped: tally(Status::Skipped),
        capped: tally(Status::Capped),
        points: results,
    }
}

fn check_point(
    p: [i64; 3],
    principal: Option<&mut ClusterOracle>,
    plain: &mut ClusterOracle,
    cap: usize,
) -> PointResult {
    let mut r = PointResult {
        point: p,
        status: Status::Pass,
        unframed: None,
        framed: None,
        minimal: None,
        lemmas: None,
        error: None,
    };
    if tuple_for_point(p[0], p[1], p[2]).is_self_intersecting() {
        r.status = Status::Skipped;
        return r;
    }
    match checks(p, principal, plain, cap, &mut r) {
        Ok(()) => {
            let all = [r.unframed, r.framed, r.minimal, r.lemmas];
            if all.iter().flatten().any(|ok| !ok) {
                r.status = Status::Fail;
            }
        }
        Err(Error::TooLarge { .. }) => r.status = Status::Capped,
        Err(e) => {
            r.status = Status::Fail;
            r.error = Some(e.to_string());
        }
    }
    r
}

fn checks(
    p: [i64; 3],
    principal: Option<&mut ClusterOracle>,
    plain: &mut ClusterOracle,
    cap: usize,
    r: &mut PointResult,
) -> aztec_core::Result<()> {
    let c = build_castle(p[0], p[1], p[2])?.trim_dangling();
    r.unframed = Some(weighted_sum(&c, cap)? == plain.at(p)?);
    if let Some(oracle) = principal {
        let z = weighted_sum_framed(&c, cap)?;
        let min = minimum(&c, cap)?;
        let y_free = z.y_free_part() == LaurentPoly::from(weight(&c, &min));
        r.framed = Some(z == oracle.at(p)? && y_free);
    }
    if !c.vertices.is_empty() {
        let built = construct_minimal(&c)?;
        r.minimal = Some(built.matching == minimal_matching_bruteforce(&c, cap)?);
        r.lemmas = Some(check_lemmas(&c, &built).all_hold());
    }
    Ok(())
}

fn minimum(c: &Castle, cap: usize) -> aztec_core::Result<Matching> {
    if c.vertices.is_empty() {
        return Ok(Matching::new(Vec::new()));
    }
    minimal_matching_bruteforce(c, cap)
}
