//! Planar geometry for position verification: distances, collinearity,
//! concyclicity, Apollonius circles, enlargement hyperbolas, and general-conic
//! membership, all with explicit tolerances.
//!
//! Everything here is pure and generic over the [`Scalar`] type; the rest of
//! the crate uses the `f64` aliases exported from the crate root.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{cast, Scalar};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum GeometryError {
    #[error("the three input points are collinear")]
    CollinearInput,
    #[error("the two foci coincide")]
    CoincidentFoci,
    #[error("ratio must be positive")]
    NonPositiveRatio,
    #[error("ratio 1 has no finite solution point")]
    DegenerateRatio,
    #[error("point configuration does not determine a unique conic")]
    DegenerateConfiguration,
}

/// A planar coordinate pair in meters. Also serves as vector arithmetic
/// shorthand where a displacement is meant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point<S> {
    pub fn new(x: S, y: S) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn sub(self, other: Self) -> Self {
        Self::new(self.x - other.x, self.y - other.y)
    }

    pub fn add(self, other: Self) -> Self {
        Self::new(self.x + other.x, self.y + other.y)
    }

    pub fn scale(self, k: S) -> Self {
        Self::new(self.x * k, self.y * k)
    }

    pub fn dot(self, other: Self) -> S {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product, treating both points as vectors.
    pub fn cross(self, other: Self) -> S {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> S {
        self.x.hypot(self.y)
    }

    /// Counterclockwise perpendicular.
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        Self::new(self.x / n, self.y / n)
    }
}

/// Euclidean distance between two points.
pub fn distance<S: Scalar>(a: Point<S>, b: Point<S>) -> S {
    (a.x - b.x).hypot(a.y - b.y)
}

/// Numeric thresholds for the geometric predicates. All strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances<S> {
    /// Dimensionless area threshold for the collinearity test.
    pub eps_collinear: S,
    /// Distance threshold in meters for on-circle / on-locus membership.
    pub eps_distance: S,
    /// Dimensionless residual threshold for conic membership.
    pub eps_conic: S,
}

impl<S: Scalar> Default for Tolerances<S> {
    fn default() -> Self {
        Self {
            eps_collinear: cast(1e-9),
            eps_distance: cast(1e-9),
            eps_conic: cast(1e-9),
        }
    }
}

impl<S: Scalar> Tolerances<S> {
    pub fn is_valid(&self) -> bool {
        self.eps_collinear > S::zero() && self.eps_distance > S::zero() && self.eps_conic > S::zero()
    }
}

/// True iff `a`, `b`, `c` lie on one line within the area tolerance.
pub fn collinear<S: Scalar>(a: Point<S>, b: Point<S>, c: Point<S>, tol: &Tolerances<S>) -> bool {
    let ab = b.sub(a);
    let ac = c.sub(a);
    let area = ab.cross(ac).abs();
    area <= tol.eps_collinear * S::one().max(ab.norm() * ac.norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle<S> {
    pub center: Point<S>,
    pub radius: S,
}

impl<S: Scalar> Circle<S> {
    /// Signed-free distance from `p` to the circle itself (not its disk).
    pub fn boundary_distance(&self, p: Point<S>) -> S {
        (distance(p, self.center) - self.radius).abs()
    }
}

/// The unique circle through three non-collinear points.
pub fn circle_through_three<S: Scalar>(
    a: Point<S>,
    b: Point<S>,
    c: Point<S>,
    tol: &Tolerances<S>,
) -> Result<Circle<S>, GeometryError> {
    if collinear(a, b, c, tol) {
        return Err(GeometryError::CollinearInput);
    }
    let two = cast::<S>(2.0);
    let d = two * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    let a2 = a.x * a.x + a.y * a.y;
    let b2 = b.x * b.x + b.y * b.y;
    let c2 = c.x * c.x + c.y * c.y;
    let ux = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d;
    let uy = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d;
    let center = Point::new(ux, uy);
    Ok(Circle {
        center,
        radius: distance(center, a),
    })
}

/// True iff all four points lie on one circle within tolerance. A collinear
/// first triple falls back to a line-membership test so the predicate stays
/// total for rejection sampling.
pub fn concyclic_four<S: Scalar>(
    a: Point<S>,
    b: Point<S>,
    c: Point<S>,
    d: Point<S>,
    tol: &Tolerances<S>,
) -> bool {
    match circle_through_three(a, b, c, tol) {
        Ok(circle) => circle.boundary_distance(d) <= tol.eps_distance,
        Err(_) => {
            // Degenerate "circle": the triple's line.
            if distance(a, b) >= distance(a, c) {
                collinear(a, b, d, tol)
            } else {
                collinear(a, c, d, tol)
            }
        }
    }
}

/// Locus of positions with a fixed distance ratio to two foci: an Apollonius
/// circle for ratio != 1, the perpendicular bisector for ratio 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LocusRss<S> {
    ApollonianCircle(Circle<S>),
    PerpendicularBisector {
        point: Point<S>,
        /// Unit direction along the bisector line.
        direction: Point<S>,
    },
}

impl<S: Scalar> LocusRss<S> {
    /// Distance from `p` to the locus curve.
    pub fn distance_to(&self, p: Point<S>) -> S {
        match self {
            LocusRss::ApollonianCircle(c) => c.boundary_distance(p),
            LocusRss::PerpendicularBisector { point, direction } => {
                p.sub(*point).cross(*direction).abs()
            }
        }
    }

    pub fn contains(&self, p: Point<S>, eps: S) -> bool {
        self.distance_to(p) <= eps
    }

    /// Sample a point of the locus at parameter `t` (angle for the circle,
    /// arc length for the bisector).
    pub fn point_at(&self, t: S) -> Point<S> {
        match self {
            LocusRss::ApollonianCircle(c) => Point::new(
                c.center.x + c.radius * t.cos(),
                c.center.y + c.radius * t.sin(),
            ),
            LocusRss::PerpendicularBisector { point, direction } => point.add(direction.scale(t)),
        }
    }
}

/// Locus of points `P` with |P - p1| / |P - p2| = delta.
pub fn apollonius_locus<S: Scalar>(
    p1: Point<S>,
    p2: Point<S>,
    delta: S,
) -> Result<LocusRss<S>, GeometryError> {
    if p1.x == p2.x && p1.y == p2.y {
        return Err(GeometryError::CoincidentFoci);
    }
    if !(delta > S::zero()) || !delta.is_finite() {
        return Err(GeometryError::NonPositiveRatio);
    }
    let half = cast::<S>(0.5);
    if delta == S::one() {
        let mid = Point::new((p1.x + p2.x) * half, (p1.y + p2.y) * half);
        let dir = p2.sub(p1).perp().normalized();
        return Ok(LocusRss::PerpendicularBisector {
            point: mid,
            direction: dir,
        });
    }
    // Expanding |P-p1|^2 = delta^2 |P-p2|^2 gives
    //   x^2 + y^2 - 2 cx x - 2 cy y + f0 = 0
    let d2 = delta * delta;
    let denom = S::one() - d2;
    let cx = (p1.x - d2 * p2.x) / denom;
    let cy = (p1.y - d2 * p2.y) / denom;
    let f0 = (p1.x * p1.x + p1.y * p1.y - d2 * (p2.x * p2.x + p2.y * p2.y)) / denom;
    let r2 = (cx * cx + cy * cy - f0).max(S::zero());
    Ok(LocusRss::ApollonianCircle(Circle {
        center: Point::new(cx, cy),
        radius: r2.sqrt(),
    }))
}

/// Locus of verifiers that observe a power-scaling faker at true position `f`
/// claiming `f_fake` as consistent: points `P` with |P - f_fake| = lambda |P - f|.
pub fn consistent_verifier_circle<S: Scalar>(
    f: Point<S>,
    f_fake: Point<S>,
    lambda: S,
) -> Result<LocusRss<S>, GeometryError> {
    apollonius_locus(f_fake, f, lambda)
}

/// The third consistent verifier position implied by a power-scaling fake,
/// (f_fake - lambda * f) / (1 - lambda). Lies on the consistent-verifier circle.
pub fn third_blind_sensor<S: Scalar>(
    f: Point<S>,
    f_fake: Point<S>,
    lambda: S,
) -> Result<Point<S>, GeometryError> {
    if !(lambda > S::zero()) || !lambda.is_finite() {
        return Err(GeometryError::NonPositiveRatio);
    }
    if lambda == S::one() {
        return Err(GeometryError::DegenerateRatio);
    }
    let denom = S::one() - lambda;
    Ok(Point::new(
        (f_fake.x - lambda * f.x) / denom,
        (f_fake.y - lambda * f.y) / denom,
    ))
}

/// True iff |p - f_fake| - |p - f| = b within the distance tolerance: membership
/// on the blind branch of the enlargement hyperbola with foci `f`, `f_fake`.
pub fn on_enlargement_locus<S: Scalar>(
    p: Point<S>,
    f: Point<S>,
    f_fake: Point<S>,
    b: S,
    tol: &Tolerances<S>,
) -> bool {
    (distance(p, f_fake) - distance(p, f) - b).abs() <= tol.eps_distance
}

/// Point of the enlargement locus { P : |P - f_fake| - |P - f| = b } at branch
/// parameter `t` (t = 0 is the vertex). Requires 0 < |b| < |f_fake - f|.
pub fn enlargement_branch_point<S: Scalar>(
    f: Point<S>,
    f_fake: Point<S>,
    b: S,
    t: S,
) -> Result<Point<S>, GeometryError> {
    let c = distance(f, f_fake);
    if c == S::zero() {
        return Err(GeometryError::CoincidentFoci);
    }
    if b == S::zero() || b.abs() >= c {
        return Err(GeometryError::DegenerateConfiguration);
    }
    let half = cast::<S>(0.5);
    let axis = f_fake.sub(f).scale(S::one() / c);
    let normal = axis.perp();
    let a = b.abs() * half;
    let semi_conj = (c * c - b * b).sqrt() * half;
    // Branch closer to f for an enlargement (b > 0), closer to f_fake for a
    // shrink (b < 0); both have |P-f_fake| - |P-f| = b.
    let along = if b > S::zero() {
        c * half - a * t.cosh()
    } else {
        c * half + a * t.cosh()
    };
    let across = semi_conj * t.sinh();
    Ok(f.add(axis.scale(along)).add(normal.scale(across)))
}

/// General conic A x^2 + B xy + C y^2 + D x + E y + F = 0, normalized so the
/// first largest-magnitude coefficient equals one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conic<S> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
    pub e: S,
    pub f: S,
}

impl<S: Scalar> Conic<S> {
    pub fn coefficients(&self) -> [S; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.f]
    }

    fn from_coefficients(k: [S; 6]) -> Self {
        Self {
            a: k[0],
            b: k[1],
            c: k[2],
            d: k[3],
            e: k[4],
            f: k[5],
        }
    }

    /// Rescale so the first coefficient of largest magnitude equals +1.
    pub fn normalized(&self) -> Self {
        let k = self.coefficients();
        let mut best = 0;
        for (i, v) in k.iter().enumerate() {
            if v.abs() > k[best].abs() {
                best = i;
            }
        }
        let pivot = k[best];
        Self::from_coefficients(k.map(|v| v / pivot))
    }

    pub fn eval(&self, p: Point<S>) -> S {
        self.a * p.x * p.x
            + self.b * p.x * p.y
            + self.c * p.y * p.y
            + self.d * p.x
            + self.e * p.y
            + self.f
    }

    /// Dimensionless membership residual: |eval| scaled by the design-row
    /// magnitude at `p`.
    pub fn residual(&self, p: Point<S>) -> S {
        let row = design_row(p);
        let mut m = S::zero();
        for v in row {
            m = m.max(v.abs());
        }
        self.eval(p).abs() / m
    }

    /// B^2 - 4AC; positive for a hyperbola, zero for a parabola, negative for
    /// an ellipse.
    pub fn discriminant(&self) -> S {
        self.b * self.b - cast::<S>(4.0) * self.a * self.c
    }

    pub fn is_hyperbola(&self) -> bool {
        self.discriminant() > S::zero()
    }
}

fn design_row<S: Scalar>(p: Point<S>) -> [S; 6] {
    [p.x * p.x, p.x * p.y, p.y * p.y, p.x, p.y, S::one()]
}

fn scale_row_to_unit<S: Scalar>(row: &mut [S; 6]) {
    let mut m = S::zero();
    for v in row.iter() {
        m = m.max(v.abs());
    }
    if m > S::zero() {
        for v in row.iter_mut() {
            *v = *v / m;
        }
    }
}

// Pivot magnitude below which a row-scaled design matrix is treated as rank
// deficient.
fn rank_pivot_floor<S: Scalar>() -> S {
    cast(1e-10)
}

/// The conic through five points in general position (design matrix rank 5).
pub fn conic_through_five<S: Scalar>(points: &[Point<S>; 5]) -> Result<Conic<S>, GeometryError> {
    let mut m: [[S; 6]; 5] = [[S::zero(); 6]; 5];
    for (i, p) in points.iter().enumerate() {
        m[i] = design_row(*p);
        scale_row_to_unit(&mut m[i]);
    }
    // Gaussian elimination with partial pivoting; the single free column spans
    // the nullspace.
    let floor = rank_pivot_floor::<S>();
    let mut pivot_cols: Vec<usize> = Vec::with_capacity(5);
    let mut row = 0usize;
    for col in 0..6 {
        if row == 5 {
            break;
        }
        let mut best = row;
        for r in row..5 {
            if m[r][col].abs() > m[best][col].abs() {
                best = r;
            }
        }
        if m[best][col].abs() <= floor {
            continue;
        }
        m.swap(row, best);
        for r in (row + 1)..5 {
            let factor = m[r][col] / m[row][col];
            for c in col..6 {
                m[r][c] = m[r][c] - factor * m[row][c];
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    if pivot_cols.len() < 5 {
        return Err(GeometryError::DegenerateConfiguration);
    }
    let free_col = (0..6)
        .find(|c| !pivot_cols.contains(c))
        .expect("exactly one free column when rank is 5");
    let mut coef = [S::zero(); 6];
    coef[free_col] = S::one();
    for (r, &pc) in pivot_cols.iter().enumerate().rev() {
        let mut acc = S::zero();
        for c in (pc + 1)..6 {
            acc = acc + m[r][c] * coef[c];
        }
        coef[pc] = -acc / m[r][pc];
    }
    Ok(Conic::from_coefficients(coef).normalized())
}

/// Determinant of the row-normalized 6x6 design matrix of six points: zero
/// exactly when the points share a conic. Exposed so callers can demand a
/// margin rather than just the membership verdict.
pub fn six_point_conic_determinant<S: Scalar>(points: &[Point<S>; 6]) -> S {
    let mut m: [[S; 6]; 6] = [[S::zero(); 6]; 6];
    for (i, p) in points.iter().enumerate() {
        m[i] = design_row(*p);
        scale_row_to_unit(&mut m[i]);
    }
    det6(&mut m)
}

/// True iff six points lie on one conic: the row-normalized 6x6 design
/// determinant vanishes within the conic tolerance.
pub fn six_on_common_conic<S: Scalar>(points: &[Point<S>; 6], tol: &Tolerances<S>) -> bool {
    six_point_conic_determinant(points).abs() <= tol.eps_conic
}

fn det6<S: Scalar>(m: &mut [[S; 6]; 6]) -> S {
    let mut det = S::one();
    for col in 0..6 {
        let mut best = col;
        for r in col..6 {
            if m[r][col].abs() > m[best][col].abs() {
                best = r;
            }
        }
        if m[best][col] == S::zero() {
            return S::zero();
        }
        if best != col {
            m.swap(col, best);
            det = -det;
        }
        det = det * m[col][col];
        for r in (col + 1)..6 {
            let factor = m[r][col] / m[col][col];
            for c in col..6 {
                m[r][c] = m[r][c] - factor * m[col][c];
            }
        }
    }
    det
}

/// Intersection points of two circle boundaries (0, 1, or 2 points).
pub fn circle_circle_intersections<S: Scalar>(c1: &Circle<S>, c2: &Circle<S>) -> Vec<Point<S>> {
    let d = distance(c1.center, c2.center);
    if d == S::zero() {
        return Vec::new();
    }
    if d > c1.radius + c2.radius || d < (c1.radius - c2.radius).abs() {
        return Vec::new();
    }
    let two = cast::<S>(2.0);
    let a = (d * d + c1.radius * c1.radius - c2.radius * c2.radius) / (two * d);
    let h2 = c1.radius * c1.radius - a * a;
    let h = h2.max(S::zero()).sqrt();
    let u = c2.center.sub(c1.center).scale(S::one() / d);
    let base = c1.center.add(u.scale(a));
    if h == S::zero() {
        return vec![base];
    }
    let off = u.perp().scale(h);
    vec![base.add(off), base.sub(off)]
}

/// An oriented line, used as the reflection axis of the indistinguishability
/// construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line<S> {
    pub point: Point<S>,
    /// Unit direction.
    pub direction: Point<S>,
}

impl<S: Scalar> Line<S> {
    pub fn new(point: Point<S>, direction: Point<S>) -> Self {
        Self {
            point,
            direction: direction.normalized(),
        }
    }

    /// The horizontal axis y = 0. Reflections across it are exact in floating
    /// point, which the transcript-equality tests rely on.
    pub fn horizontal() -> Self {
        Self {
            point: Point::new(S::zero(), S::zero()),
            direction: Point::new(S::one(), S::zero()),
        }
    }

    pub fn is_horizontal(&self) -> bool {
        self.direction.y == S::zero()
    }

    pub fn reflect(&self, p: Point<S>) -> Point<S> {
        if self.is_horizontal() {
            let two = cast::<S>(2.0);
            return Point::new(p.x, two * self.point.y - p.y);
        }
        let w = p.sub(self.point);
        let along = self.direction.scale(w.dot(self.direction));
        let across = w.sub(along);
        self.point.add(along).sub(across)
    }

    pub fn signed_offset(&self, p: Point<S>) -> S {
        self.direction.cross(p.sub(self.point))
    }

    pub fn contains(&self, p: Point<S>, eps: S) -> bool {
        self.signed_offset(p).abs() <= eps
    }
}
