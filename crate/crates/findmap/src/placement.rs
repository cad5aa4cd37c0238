//! Safety analysis of a fixed set of trusted verifier stations.
//!
//! A faking node near `k` stations goes undetected only if every station sits
//! on the blind locus of its attack — a circle under RSS ranging, a hyperbola
//! branch under time of flight. A placement is therefore certified `Safe`
//! when some subset of stations is immune to any single locus: four stations
//! with no collinear triple and not concyclic (RSS), or six with no collinear
//! triple and not on a common conic (ToF). When no such subset exists the
//! verdict is `Unsafe`, and an explicit attack is constructed as the witness:
//! a circle inversion for concyclic stations, a mirror fake for collinear
//! ones, and the focus/shift pair read off the common conic for stations on a
//! hyperbola.
//!
//! `Safe` is a sufficient condition, not an exhaustive proof; the
//! complementary [`grid_refutation`] oracle sweeps a bounded grid of
//! candidate attacks and reports any that would blind every station.

use serde::Serialize;
use thiserror::Error;

use crate::adversary::{rss_blind_residual, tof_blind_residual};
use crate::geometry::{
    circle_circle_intersections, circle_through_three, collinear, concyclic_four,
    conic_through_five, distance, six_on_common_conic, GeometryError,
};
use crate::protocol::Model;
use crate::{Circle, Conic, Line, Point2D, Tolerances};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlacementError {
    #[error("the {model} model needs at least {needed} stations, got {got}")]
    TooFewStations {
        model: Model,
        needed: usize,
        got: usize,
    },
    #[error("placement analysis applies to the rss and tof models only")]
    UnsupportedModel,
    #[error("station {index} has non-finite coordinates")]
    NonFiniteStation { index: usize },
    #[error("stations {i} and {j} coincide")]
    DuplicateStations { i: usize, j: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlacementVerdict {
    Safe,
    Unsafe,
}

/// A concrete attack a faker could mount against the stations. `lambda`
/// names a power-scale attack, `b` a time-shift attack; both `None` means a
/// plain coordinate lie.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlacementWitness {
    pub attack_true: Point2D,
    pub claimed: Point2D,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    /// Indices of the stations the attack blinds.
    pub blind: Vec<usize>,
    /// True when every station is blinded — the placement verifiably fails.
    /// A partial witness only exhibits the degeneracy that blocks the safety
    /// certificate.
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlacementResult {
    pub verdict: PlacementVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<PlacementWitness>,
}

fn required_stations(model: Model) -> Result<usize, PlacementError> {
    match model {
        Model::Rss => Ok(4),
        Model::Tof => Ok(6),
        Model::Basic => Err(PlacementError::UnsupportedModel),
    }
}

fn validate(stations: &[Point2D], model: Model, tol: &Tolerances) -> Result<usize, PlacementError> {
    let needed = required_stations(model)?;
    if stations.len() < needed {
        return Err(PlacementError::TooFewStations {
            model,
            needed,
            got: stations.len(),
        });
    }
    for (index, p) in stations.iter().enumerate() {
        if !p.is_finite() {
            return Err(PlacementError::NonFiniteStation { index });
        }
    }
    for i in 0..stations.len() {
        for j in (i + 1)..stations.len() {
            if distance(stations[i], stations[j]) <= tol.eps_distance {
                return Err(PlacementError::DuplicateStations { i, j });
            }
        }
    }
    Ok(needed)
}

/// Bounding-box diagonal of the stations; the scale for witness tolerances.
fn span(stations: &[Point2D]) -> f64 {
    let (mut xmin, mut xmax) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in stations {
        xmin = xmin.min(p.x);
        xmax = xmax.max(p.x);
        ymin = ymin.min(p.y);
        ymax = ymax.max(p.y);
    }
    (xmax - xmin).hypot(ymax - ymin)
}

/// Residual below which a station counts as blinded by a witness: far above
/// float noise on hand-authored degenerate layouts, far below any honest
/// geometric margin.
fn witness_eps(stations: &[Point2D]) -> f64 {
    1e-6 * span(stations).max(1e-6)
}

fn has_collinear_triple(points: &[Point2D], tol: &Tolerances) -> bool {
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            for k in (j + 1)..points.len() {
                if collinear(points[i], points[j], points[k], tol) {
                    return true;
                }
            }
        }
    }
    false
}

/// Verdict plus witness for a station layout under `model` ranging.
pub fn check_placement(
    stations: &[Point2D],
    model: Model,
    tol: &Tolerances,
) -> Result<PlacementResult, PlacementError> {
    validate(stations, model, tol)?;
    let safe = match model {
        Model::Rss => has_good_quad(stations, tol),
        Model::Tof => has_good_sextuple(stations, tol),
        Model::Basic => unreachable!("rejected by validate"),
    };
    if safe {
        return Ok(PlacementResult {
            verdict: PlacementVerdict::Safe,
            witness: None,
        });
    }
    let witness = match model {
        Model::Rss => rss_witness(stations, tol),
        Model::Tof => tof_witness(stations, tol),
        Model::Basic => unreachable!(),
    };
    Ok(PlacementResult {
        verdict: PlacementVerdict::Unsafe,
        witness: Some(witness),
    })
}

/// Some four stations immune to any single blind circle?
fn has_good_quad(stations: &[Point2D], tol: &Tolerances) -> bool {
    let k = stations.len();
    for a in 0..k {
        for b in (a + 1)..k {
            for c in (b + 1)..k {
                for d in (c + 1)..k {
                    let quad = [stations[a], stations[b], stations[c], stations[d]];
                    if !has_collinear_triple(&quad, tol)
                        && !concyclic_four(quad[0], quad[1], quad[2], quad[3], tol)
                    {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Some six stations immune to any single blind hyperbola? The conic test
/// runs in coordinates scaled to the stations' bounding box, where the
/// determinant is a dimensionless degeneracy measure.
fn has_good_sextuple(stations: &[Point2D], tol: &Tolerances) -> bool {
    let unit = to_unit_frame(stations).1;
    let k = stations.len();
    for a in 0..k {
        for b in (a + 1)..k {
            for c in (b + 1)..k {
                for d in (c + 1)..k {
                    for e in (d + 1)..k {
                        for g in (e + 1)..k {
                            let world = [
                                stations[a],
                                stations[b],
                                stations[c],
                                stations[d],
                                stations[e],
                                stations[g],
                            ];
                            let scaled = [unit[a], unit[b], unit[c], unit[d], unit[e], unit[g]];
                            if !has_collinear_triple(&world, tol)
                                && !six_on_common_conic(&scaled, tol)
                            {
                                return true;
                            }
                        }
                    }
                }
            }
        }
    }
    false
}

/// Uniform map of the stations into a unit-scale frame: `(origin, scaled
/// points, scale)`. Conic fitting and classification are done here and
/// mapped back, keeping the numerics scale-free.
fn to_unit_frame(stations: &[Point2D]) -> (Point2D, Vec<Point2D>, f64) {
    let (mut xmin, mut ymin) = (f64::INFINITY, f64::INFINITY);
    let (mut xmax, mut ymax) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in stations {
        xmin = xmin.min(p.x);
        xmax = xmax.max(p.x);
        ymin = ymin.min(p.y);
        ymax = ymax.max(p.y);
    }
    let scale = (xmax - xmin).max(ymax - ymin).max(1e-12);
    let origin = Point2D::new(xmin, ymin);
    let scaled = stations
        .iter()
        .map(|p| Point2D::new((p.x - origin.x) / scale, (p.y - origin.y) / scale))
        .collect();
    (origin, scaled, scale)
}

/// The line through two stations covering the most stations, as (member
/// indices, line).
fn best_line(stations: &[Point2D], tol: &Tolerances) -> (Vec<usize>, Line) {
    let mut best: (Vec<usize>, Option<Line>) = (Vec::new(), None);
    for i in 0..stations.len() {
        for j in (i + 1)..stations.len() {
            let members: Vec<usize> = (0..stations.len())
                .filter(|&m| {
                    m == i || m == j || collinear(stations[i], stations[j], stations[m], tol)
                })
                .collect();
            if members.len() > best.0.len() {
                let direction = stations[j].sub(stations[i]).normalized();
                best = (
                    members,
                    Some(Line {
                        point: stations[i],
                        direction,
                    }),
                );
            }
        }
    }
    let line = best.1.unwrap_or(Line {
        point: stations[0],
        direction: Point2D::new(1.0, 0.0),
    });
    (best.0, line)
}

/// The circle through three stations covering the most stations, as (member
/// indices, circle).
fn best_circle(stations: &[Point2D], tol: &Tolerances) -> (Vec<usize>, Option<Circle>) {
    let mut best: (Vec<usize>, Option<Circle>) = (Vec::new(), None);
    let on = |c: &Circle, p: Point2D| (distance(p, c.center) - c.radius).abs() <= witness_eps(stations);
    for i in 0..stations.len() {
        for j in (i + 1)..stations.len() {
            for k in (j + 1)..stations.len() {
                let Ok(circle) = circle_through_three(stations[i], stations[j], stations[k], tol)
                else {
                    continue;
                };
                let members: Vec<usize> = (0..stations.len())
                    .filter(|&m| on(&circle, stations[m]))
                    .collect();
                if members.len() > best.0.len() {
                    best = (members, Some(circle));
                }
            }
        }
    }
    best
}

/// Mirror fake across a line of stations: every station on the line is
/// equidistant from the true and claimed positions and stays blind with no
/// ranging corruption at all.
fn reflection_witness(stations: &[Point2D], members: &[usize], line: &Line) -> PlacementWitness {
    let s = span(stations).max(1.0);
    let mut centroid = Point2D::new(0.0, 0.0);
    for &m in members {
        centroid = centroid.add(stations[m]);
    }
    centroid = centroid.scale(1.0 / members.len() as f64);
    let attack_true = centroid.add(line.direction.perp().scale(0.37 * s));
    let claimed = line.reflect(attack_true);
    let eps = witness_eps(stations);
    let blind: Vec<usize> = (0..stations.len())
        .filter(|&i| {
            (distance(stations[i], claimed) - distance(stations[i], attack_true)).abs() <= eps
        })
        .collect();
    let complete = blind.len() == stations.len();
    PlacementWitness {
        attack_true,
        claimed,
        lambda: None,
        b: None,
        blind,
        complete,
    }
}

/// Power-scale fake against concyclic stations, via circle inversion: for a
/// true position at distance R/2 from the center, the inverse point at 2R
/// satisfies |P F'| = 2 |P F| for every P on the circle, so claiming F' at a
/// quarter of the power blinds them all.
fn inversion_witness(stations: &[Point2D], circle: &Circle) -> PlacementWitness {
    let radial = stations[0].sub(circle.center).normalized();
    // Any interior direction works; rotating off the station keeps the
    // geometry unsymmetric.
    let (sin, cos) = (0.37_f64.sin(), 0.37_f64.cos());
    let dir = Point2D::new(
        radial.x * cos - radial.y * sin,
        radial.x * sin + radial.y * cos,
    );
    let attack_true = circle.center.add(dir.scale(circle.radius / 2.0));
    let claimed = circle.center.add(dir.scale(2.0 * circle.radius));
    let lambda = 2.0;
    let eps = witness_eps(stations);
    let blind: Vec<usize> = (0..stations.len())
        .filter(|&i| rss_blind_residual(stations[i], attack_true, claimed, lambda) <= eps)
        .collect();
    let complete = blind.len() == stations.len();
    PlacementWitness {
        attack_true,
        claimed,
        lambda: Some(lambda),
        b: None,
        blind,
        complete,
    }
}

fn rss_witness(stations: &[Point2D], tol: &Tolerances) -> PlacementWitness {
    let (circle_members, circle) = best_circle(stations, tol);
    let (line_members, line) = best_line(stations, tol);
    match circle {
        Some(ref c) if circle_members.len() >= stations.len() => inversion_witness(stations, c),
        _ if line_members.len() >= stations.len() => {
            reflection_witness(stations, &line_members, &line)
        }
        Some(ref c) if circle_members.len() >= line_members.len() => inversion_witness(stations, c),
        _ => reflection_witness(stations, &line_members, &line),
    }
}

/// Center, focus pair, and range shift `2a` of a hyperbola given by a general
/// conic. `None` when the conic is not a proper hyperbola.
fn hyperbola_foci(conic: &Conic) -> Option<(Point2D, Point2D, f64)> {
    let (a, b, c, d, e) = (conic.a, conic.b, conic.c, conic.d, conic.e);
    let den = 4.0 * a * c - b * b;
    if den == 0.0 {
        return None;
    }
    let center = Point2D::new((b * e - 2.0 * c * d) / den, (b * d - 2.0 * a * e) / den);
    let f_c = conic.eval(center);
    // Eigenvalues of the quadratic part [[A, B/2], [B/2, C]].
    let half_trace = (a + c) / 2.0;
    let rad = ((a - c) / 2.0).hypot(b / 2.0);
    let (l1, l2) = (half_trace - rad, half_trace + rad);
    if l1 == 0.0 || l2 == 0.0 || f_c == 0.0 {
        return None;
    }
    // In centered coordinates the conic is l·u² + l'·v² + F_c = 0; the
    // transverse axis is the eigendirection whose squared semi-axis
    // -F_c/l is positive.
    let (l_t, l_o) = if -f_c / l1 > 0.0 { (l1, l2) } else { (l2, l1) };
    let a_sq = -f_c / l_t;
    let b_sq = f_c / l_o;
    if !(a_sq > 0.0) || !(b_sq > 0.0) {
        return None; // ellipse or degenerate
    }
    let dir = eigenvector(a, b, c, l_t);
    let c_focal = (a_sq + b_sq).sqrt();
    let f1 = center.add(dir.scale(c_focal));
    let f2 = center.sub(dir.scale(c_focal));
    Some((f1, f2, 2.0 * a_sq.sqrt()))
}

/// Unit eigenvector of [[A, B/2], [B/2, C]] for eigenvalue `l`.
fn eigenvector(a: f64, b: f64, c: f64, l: f64) -> Point2D {
    let v1 = Point2D::new(b / 2.0, l - a);
    let v2 = Point2D::new(l - c, b / 2.0);
    if v1.norm() >= v2.norm() && v1.norm() > 0.0 {
        v1.normalized()
    } else if v2.norm() > 0.0 {
        v2.normalized()
    } else {
        // The quadratic part is already diagonal with equal eigenvalues;
        // direction is arbitrary.
        Point2D::new(1.0, 0.0)
    }
}

/// Time-shift witness from a hyperbola all stations lie on: the blind branch
/// condition |P F'| = |P F| + b holds with F the focus on the stations' side
/// and b twice the semi-major axis.
fn hyperbola_witness(
    stations: &[Point2D],
    f1: Point2D,
    f2: Point2D,
    b: f64,
) -> PlacementWitness {
    let eps = witness_eps(stations);
    let blind_from = |near: Point2D, far: Point2D| -> Vec<usize> {
        (0..stations.len())
            .filter(|&i| tof_blind_residual(stations[i], near, far, b) <= eps)
            .collect()
    };
    let b1 = blind_from(f1, f2);
    let b2 = blind_from(f2, f1);
    let (attack_true, claimed, blind) = if b1.len() >= b2.len() {
        (f1, f2, b1)
    } else {
        (f2, f1, b2)
    };
    let complete = blind.len() == stations.len();
    PlacementWitness {
        attack_true,
        claimed,
        lambda: None,
        b: Some(b),
        blind,
        complete,
    }
}

/// Fallback partial witness: a time shift consistent with the first two
/// stations. It only demonstrates that two stations can be blinded at once —
/// the degeneracy blocking the certificate need not be attackable in full.
fn anchored_tof_witness(stations: &[Point2D], tol: &Tolerances) -> PlacementWitness {
    let s = span(stations).max(1.0);
    let eps = witness_eps(stations);
    let (p1, p2) = (stations[0], stations[1]);
    let mid = p1.add(p2).scale(0.5);
    let attack_true = mid.add(p2.sub(p1).perp().normalized().scale(0.31 * s));
    for frac in [0.05, 0.1, 0.2, 0.3] {
        let b = frac * s;
        let c1 = Circle {
            center: p1,
            radius: distance(p1, attack_true) + b,
        };
        let c2 = Circle {
            center: p2,
            radius: distance(p2, attack_true) + b,
        };
        let candidates = circle_circle_intersections(&c1, &c2);
        for claimed in candidates {
            if distance(claimed, attack_true) <= b {
                continue;
            }
            let blind: Vec<usize> = (0..stations.len())
                .filter(|&i| tof_blind_residual(stations[i], attack_true, claimed, b) <= eps)
                .collect();
            if blind.len() >= 2 {
                return PlacementWitness {
                    attack_true,
                    claimed,
                    lambda: None,
                    b: Some(b),
                    blind,
                    complete: false,
                };
            }
        }
    }
    // Unreachable for distinct stations, but stay total: mirror the two
    // anchors instead.
    let line = Line {
        point: p1,
        direction: p2.sub(p1).normalized(),
    };
    reflection_witness(stations, &[0, 1], &line)
}

/// The conic through five stations covering the most stations, fitted in the
/// unit frame. Returns (member indices, conic in unit coordinates).
fn best_conic(
    stations: &[Point2D],
    unit: &[Point2D],
    tol: &Tolerances,
) -> (Vec<usize>, Option<Conic>) {
    let k = stations.len();
    let mut best: (Vec<usize>, Option<Conic>) = (Vec::new(), None);
    for a in 0..k {
        for b in (a + 1)..k {
            for c in (b + 1)..k {
                for d in (c + 1)..k {
                    for e in (d + 1)..k {
                        let five = [unit[a], unit[b], unit[c], unit[d], unit[e]];
                        let Ok(conic) = conic_through_five(&five) else {
                            continue;
                        };
                        let members: Vec<usize> = (0..k)
                            .filter(|&m| conic.residual(unit[m]) <= 1e-7)
                            .collect();
                        if members.len() > best.0.len() {
                            best = (members, Some(conic));
                        }
                    }
                }
            }
        }
    }
    let _ = tol;
    best
}

fn tof_witness(stations: &[Point2D], tol: &Tolerances) -> PlacementWitness {
    let (line_members, line) = best_line(stations, tol);
    if line_members.len() >= stations.len() {
        return reflection_witness(stations, &line_members, &line);
    }
    let (origin, unit, scale) = to_unit_frame(stations);
    let (conic_members, conic) = best_conic(stations, &unit, tol);
    if let Some(conic) = conic {
        if let Some((u1, u2, ub)) = hyperbola_foci(&conic) {
            let back = |p: Point2D| origin.add(p.scale(scale));
            let witness = hyperbola_witness(stations, back(u1), back(u2), ub * scale);
            // Keep the focus witness whenever it blinds at least as much as
            // the degenerate-line one.
            if witness.blind.len() >= line_members.len() || conic_members.len() == stations.len() {
                return witness;
            }
        }
    }
    let mirror = reflection_witness(stations, &line_members, &line);
    let anchored = anchored_tof_witness(stations, tol);
    if mirror.blind.len() >= anchored.blind.len() {
        mirror
    } else {
        anchored
    }
}

/// Bounded search for an attack blinding every station: a 200×200 grid of
/// true positions over the half-again-expanded bounding box, times 32
/// corruption parameters (power ratios for RSS, range shifts for ToF), with
/// the claim completed from the first two stations. Returns the first fully
/// blinding attack found, or `None` when the whole grid is clean. A bounded
/// oracle, not a proof of safety.
pub fn grid_refutation(
    stations: &[Point2D],
    model: Model,
    tol: &Tolerances,
) -> Result<Option<PlacementWitness>, PlacementError> {
    validate(stations, model, tol)?;
    let (mut xmin, mut ymin) = (f64::INFINITY, f64::INFINITY);
    let (mut xmax, mut ymax) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in stations {
        xmin = xmin.min(p.x);
        xmax = xmax.max(p.x);
        ymin = ymin.min(p.y);
        ymax = ymax.max(p.y);
    }
    let (w, h) = ((xmax - xmin).max(1e-6), (ymax - ymin).max(1e-6));
    let (x0, y0) = (xmin - 0.5 * w, ymin - 0.5 * h);
    let (gw, gh) = (2.0 * w, 2.0 * h);
    let s = span(stations);
    let slack = 1e-3 * s;

    const STEPS: usize = 200;
    const PARAMS: usize = 32;
    let params: Vec<f64> = match model {
        Model::Rss => (0..PARAMS)
            .map(|i| 3.0_f64.powf(2.0 * (i as f64 / (PARAMS - 1) as f64) - 1.0))
            .filter(|l| (l - 1.0).abs() >= 0.05)
            .collect(),
        Model::Tof => {
            let mut v: Vec<f64> = (0..PARAMS / 2)
                .map(|i| (0.02 + (0.5 - 0.02) * i as f64 / (PARAMS / 2 - 1) as f64) * s)
                .collect();
            let negs: Vec<f64> = v.iter().map(|b| -b).collect();
            v.extend(negs);
            v
        }
        Model::Basic => unreachable!("rejected by validate"),
    };

    let (p1, p2) = (stations[0], stations[1]);
    for iy in 0..STEPS {
        for ix in 0..STEPS {
            let fake = Point2D::new(
                x0 + gw * (ix as f64 + 0.5) / STEPS as f64,
                y0 + gh * (iy as f64 + 0.5) / STEPS as f64,
            );
            let (d1, d2) = (distance(p1, fake), distance(p2, fake));
            if d1 <= slack || d2 <= slack {
                continue;
            }
            for &param in &params {
                let (r1, r2) = match model {
                    Model::Rss => (param * d1, param * d2),
                    Model::Tof => (d1 + param, d2 + param),
                    Model::Basic => unreachable!(),
                };
                if r1 <= 0.0 || r2 <= 0.0 {
                    continue;
                }
                let c1 = Circle { center: p1, radius: r1 };
                let c2 = Circle { center: p2, radius: r2 };
                for claimed in circle_circle_intersections(&c1, &c2) {
                    let all_blind = (0..stations.len()).all(|i| match model {
                        Model::Rss => {
                            rss_blind_residual(stations[i], fake, claimed, param) <= slack
                        }
                        Model::Tof => {
                            tof_blind_residual(stations[i], fake, claimed, param) <= slack
                        }
                        Model::Basic => unreachable!(),
                    });
                    if all_blind {
                        let (lambda, b) = match model {
                            Model::Rss => (Some(param), None),
                            Model::Tof => (None, Some(param)),
                            Model::Basic => unreachable!(),
                        };
                        return Ok(Some(PlacementWitness {
                            attack_true: fake,
                            claimed,
                            lambda,
                            b,
                            blind: (0..stations.len()).collect(),
                            complete: true,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}
