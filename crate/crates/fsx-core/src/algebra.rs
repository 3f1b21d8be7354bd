//! Symbolic algebra over function spaces: descriptors, rewrite rules for
//! duals/products/multipliers/symmetrizations, condition classification, the
//! power-family involution, and a bottom-up simplifier with rule logs.
//!
//! Rules fire only when their hypotheses are decidable from the closed-form
//! catalog (power weights); everything else stays symbolic with the blocking
//! condition named. Unknown is a value, not an error.

use crate::norms::{NumericSpace, Weight};
use std::fmt;

const INF: f64 = f64::INFINITY;

/// Underlying measure-space interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// (0,1)
    Unit,
    /// (0,∞)
    HalfLine,
}

impl Domain {
    pub fn length(self) -> f64 {
        match self {
            Domain::Unit => 1.0,
            Domain::HalfLine => INF,
        }
    }
}

/// Resolved space family at the symbolic layer. Weights are powers of t and
/// the stored exponent is the one that appears in print: `Lebesgue` weights
/// multiply the function before the p-th power, `Lambda` weights sit inside
/// the integral as written.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceDescriptor {
    /// {0}
    Zero,
    /// all measurable functions (no norm constraint)
    MeasurableAll,
    /// L^p(t^alpha): (∫ |x(t)·t^alpha|^p dt)^{1/p}
    Lebesgue { p: f64, alpha: f64 },
    /// L^p(w) with a named non-power weight from the registry ("exp",
    /// "boundary"); opaque to the rewrite rules, evaluable numerically
    LebesgueNamed { p: f64, name: String },
    /// L^{p,q}
    Lorentz { p: f64, q: f64 },
    /// Λ_{p, t^alpha}: (∫ x*(t)^p t^alpha dt)^{1/p}
    Lambda { p: f64, alpha: f64 },
    /// M_{t^alpha}
    Marcinkiewicz { alpha: f64 },
    /// CE
    Cesaro(Box<SpaceDescriptor>),
    /// Ẽ
    Tandori(Box<SpaceDescriptor>),
}

use SpaceDescriptor::*;

impl SpaceDescriptor {
    pub fn lebesgue(p: f64) -> Self {
        Lebesgue { p, alpha: 0.0 }
    }

    pub fn lebesgue_power(p: f64, alpha: f64) -> Self {
        Lebesgue { p, alpha }
    }

    pub fn lorentz(p: f64, q: f64) -> Self {
        Lorentz { p, q }
    }

    pub fn ces(inner: SpaceDescriptor) -> Self {
        Cesaro(Box::new(inner))
    }

    pub fn tand(inner: SpaceDescriptor) -> Self {
        Tandori(Box::new(inner))
    }

    /// Structural equality with tolerance on the numeric parameters.
    pub fn approx_eq(&self, other: &SpaceDescriptor, tol: f64) -> bool {
        fn num_eq(a: f64, b: f64, tol: f64) -> bool {
            a == b || (a - b).abs() <= tol * (1.0 + a.abs().min(b.abs()))
        }
        // L^p and L^{p,p} name the same space: compare through the classical
        // pair when both sides have one
        if let (Some((p1, q1)), Some((p2, q2))) = (self.as_lorentz(), other.as_lorentz()) {
            return num_eq(p1, p2, tol) && num_eq(q1, q2, tol);
        }
        match (self, other) {
            (Zero, Zero) | (MeasurableAll, MeasurableAll) => true,
            (Lebesgue { p: p1, alpha: a1 }, Lebesgue { p: p2, alpha: a2 })
            | (Lambda { p: p1, alpha: a1 }, Lambda { p: p2, alpha: a2 }) => {
                num_eq(*p1, *p2, tol) && num_eq(*a1, *a2, tol)
            }
            (LebesgueNamed { p: p1, name: n1 }, LebesgueNamed { p: p2, name: n2 }) => {
                num_eq(*p1, *p2, tol) && n1 == n2
            }
            (Lorentz { p: p1, q: q1 }, Lorentz { p: p2, q: q2 }) => {
                num_eq(*p1, *p2, tol) && num_eq(*q1, *q2, tol)
            }
            (Marcinkiewicz { alpha: a1 }, Marcinkiewicz { alpha: a2 }) => num_eq(*a1, *a2, tol),
            (Cesaro(a), Cesaro(b)) | (Tandori(a), Tandori(b)) => a.approx_eq(b, tol),
            _ => false,
        }
    }

    /// View as a classical Lorentz pair (p, q): L^p = L^{p,p}.
    /// Only unweighted Lebesgue and Lorentz qualify.
    fn as_lorentz(&self) -> Option<(f64, f64)> {
        match self {
            Lebesgue { p, alpha } if *alpha == 0.0 => Some((*p, *p)),
            Lorentz { p, q } => Some((*p, *q)),
            _ => None,
        }
    }

    /// View as a (power-weight) symmetrization parameter pair (p, a), where
    /// the space is Λ_{p,t^{ap}} for finite p and M_{t^a} at p = ∞: the
    /// shape consumed by the gated multiplier rules for Λ/M pairs.
    fn as_symmetrized_power(&self) -> Option<(f64, f64)> {
        match self {
            Lambda { p, alpha } => Some((*p, alpha / p)),
            Marcinkiewicz { alpha } => Some((INF, *alpha)),
            _ => None,
        }
    }

    /// Canonical form: L^{p,p} → L^p, L^{∞,q<∞} → {0}, M_{t^α} with α < 0 →
    /// {0}. Does not touch Λ (see [`normalize_symmetrized`]).
    pub fn canon(self) -> SpaceDescriptor {
        match self {
            Lorentz { p, q } if p == q => Lebesgue { p, alpha: 0.0 },
            Lorentz { p, q } if p.is_infinite() && q.is_finite() => Zero,
            Marcinkiewicz { alpha } if alpha < 0.0 => Zero,
            Cesaro(inner) => Cesaro(Box::new(inner.canon())),
            Tandori(inner) => match inner.canon() {
                // decreasing majorants of bounded functions are bounded
                Lebesgue { p, alpha } if p.is_infinite() && alpha == 0.0 => {
                    Lebesgue { p, alpha }
                }
                c => Tandori(Box::new(c)),
            },
            other => other,
        }
    }

    /// Rewrite power-weight Λ and M through the classical-Lorentz
    /// identification: Λ_{p,t^α} = L^{p̃,p} with 1/p̃ = (α+1)/p (exactly
    /// the same functional) when non-trivial, {0} otherwise; M_{t^a} = L^{1/a,∞}
    /// for a > 0, L^∞ for a = 0, {0} for a < 0. Returns None when no rewrite
    /// applies.
    pub fn normalize_symmetrized(&self) -> Option<SpaceDescriptor> {
        match self {
            Lambda { p, alpha } => {
                if *alpha <= -1.0 {
                    Some(Zero)
                } else {
                    Some(Lorentz { p: p / (alpha + 1.0), q: *p }.canon())
                }
            }
            Marcinkiewicz { alpha } => {
                if *alpha < 0.0 {
                    Some(Zero)
                } else if *alpha == 0.0 {
                    Some(Lebesgue { p: INF, alpha: 0.0 })
                } else {
                    Some(Lorentz { p: 1.0 / alpha, q: INF }.canon())
                }
            }
            _ => None,
        }
    }

    /// Bridge to the numeric kernel; None for Zero/MeasurableAll.
    pub fn to_numeric(&self) -> Option<NumericSpace> {
        match self {
            Zero | MeasurableAll => None,
            Lebesgue { p, alpha } => {
                Some(NumericSpace::WeightedLebesgue { p: *p, weight: Weight::power(*alpha) })
            }
            LebesgueNamed { p, name } => {
                crate::norms::named_weight(name)
                    .map(|weight| NumericSpace::WeightedLebesgue { p: *p, weight })
            }
            Lorentz { p, q } => Some(NumericSpace::LorentzPQ { p: *p, q: *q }),
            Lambda { p, alpha } => {
                // the numeric kernel stores Λ weights pre-power
                Some(NumericSpace::Lambda { p: *p, weight: Weight::power(alpha / p) })
            }
            Marcinkiewicz { alpha } => {
                Some(NumericSpace::Marcinkiewicz { weight: Weight::power(*alpha) })
            }
            Cesaro(inner) => inner.to_numeric().map(NumericSpace::cesaro),
            Tandori(inner) => inner.to_numeric().map(NumericSpace::tandori),
        }
    }
}

/// Compact numeral: "inf" for infinities, no trailing ".0" on integers.
pub fn fmt_num(x: f64) -> String {
    if x.is_infinite() {
        "inf".to_string()
    } else if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Zero => write!(f, "{{0}}"),
            MeasurableAll => write!(f, "L0"),
            Lebesgue { p, alpha } if *alpha == 0.0 => write!(f, "L({})", fmt_num(*p)),
            Lebesgue { p, alpha } => write!(f, "L({}, t^{})", fmt_num(*p), fmt_num(*alpha)),
            LebesgueNamed { p, name } => write!(f, "L({}, {name})", fmt_num(*p)),
            Lorentz { p, q } => write!(f, "L({}, {})", fmt_num(*p), fmt_num(*q)),
            Lambda { p, alpha } => write!(f, "Lambda({}, t^{})", fmt_num(*p), fmt_num(*alpha)),
            Marcinkiewicz { alpha } => write!(f, "Marc(t^{})", fmt_num(*alpha)),
            Cesaro(inner) => write!(f, "Ces({inner})"),
            Tandori(inner) => write!(f, "Tand({inner})"),
        }
    }
}

/// Outcome of a rewrite rule: either a resolved descriptor or the name of
/// the blocking condition.
#[derive(Debug, Clone, PartialEq)]
pub enum Resolution {
    Resolved(SpaceDescriptor),
    Unknown(String),
}

impl Resolution {
    pub fn resolved(self) -> Option<SpaceDescriptor> {
        match self {
            Resolution::Resolved(d) => Some(d),
            Resolution::Unknown(_) => None,
        }
    }

    pub fn is_resolved(&self) -> bool {
        matches!(self, Resolution::Resolved(_))
    }
}

/// Conjugate exponent: 1 if p = ∞, p/(p−1) if 1 < p < ∞, ∞ if 0 < p ≤ 1.
pub fn conjugate(p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else if p > 1.0 {
        p / (p - 1.0)
    } else {
        INF
    }
}

/// Collapse float wobble from reciprocal-index arithmetic onto nearby
/// integers so that derived indices print and compare cleanly.
fn snap(x: f64) -> f64 {
    if x.is_finite() && (x - x.round()).abs() <= 1e-9 * x.abs().max(1.0) {
        x.round()
    } else {
        x
    }
}

/// 1/p₃ = 1/p₂ − 1/p₁ solved for p₃, kept exact on small rationals via
/// p₁p₂/(p₁−p₂); requires p₂ ≤ p₁ (callers check), p₁ = p₂ gives ∞.
fn recip_sub(p2: f64, p1: f64) -> f64 {
    if p1.is_infinite() {
        return p2;
    }
    if p1 == p2 {
        return INF;
    }
    if p2.is_infinite() {
        return f64::NAN; // negative reciprocal: callers exclude
    }
    snap(p1 * p2 / (p1 - p2))
}

/// 1/p = 1/p₀ + 1/p₁ solved for p.
fn recip_add(p0: f64, p1: f64) -> f64 {
    if p0.is_infinite() {
        return p1;
    }
    if p1.is_infinite() {
        return p0;
    }
    snap(p0 * p1 / (p0 + p1))
}

/// r-convexification S^{(r)}: exponent scaling for the power catalog.
pub fn convexify(s: &SpaceDescriptor, r: f64) -> Resolution {
    if !(r > 0.0) {
        return Resolution::Unknown("convexification exponent must be positive".into());
    }
    if r == 1.0 {
        return Resolution::Resolved(s.clone());
    }
    match s {
        Zero => Resolution::Resolved(Zero),
        MeasurableAll => Resolution::Resolved(MeasurableAll),
        Lebesgue { p, alpha } => {
            Resolution::Resolved(Lebesgue { p: p * r, alpha: alpha / r })
        }
        Lorentz { p, q } => Resolution::Resolved(Lorentz { p: p * r, q: q * r }.canon()),
        Lambda { p, alpha } => {
            // ∫ (x*^r)^p t^α = ∫ x*^{pr} t^α: the weight is untouched
            Resolution::Resolved(Lambda { p: p * r, alpha: *alpha })
        }
        _ => Resolution::Unknown(format!("no convexification rule for {s}")),
    }
}

/// Köthe dual. Power-catalog closed forms:
/// Lorentz table, weighted Lebesgue reflection, and the Cesàro–Tandori
/// duality on (0,∞).
pub fn kothe_dual(s: &SpaceDescriptor, domain: Domain) -> Resolution {
    let s = s.clone().canon();
    match &s {
        Zero => Resolution::Resolved(MeasurableAll),
        MeasurableAll => Resolution::Resolved(Zero),
        Lebesgue { p, alpha } => {
            if *p < 1.0 {
                Resolution::Resolved(Zero)
            } else {
                Resolution::Resolved(Lebesgue { p: conjugate(*p), alpha: -alpha })
            }
        }
        LebesgueNamed { .. } => {
            Resolution::Unknown(format!("no closed-form dual rule for {s}"))
        }
        Lorentz { p, q } => Resolution::Resolved(lorentz_dual(*p, *q)),
        Lambda { .. } | Marcinkiewicz { .. } => match s.normalize_symmetrized() {
            Some(n) => kothe_dual(&n, domain),
            None => Resolution::Unknown(format!("no dual rule for {s}")),
        },
        Cesaro(inner) => {
            if domain != Domain::HalfLine {
                return Resolution::Unknown(
                    "Cesaro duality rule is stated on the half-line domain".into(),
                );
            }
            match inner.as_ref() {
                Lebesgue { p, alpha } if *alpha == 0.0 && *p > 1.0 => Resolution::Resolved(
                    Tandori(Box::new(Lebesgue { p: conjugate(*p), alpha: 0.0 })),
                ),
                _ => Resolution::Unknown(format!(
                    "Cesaro duality needs a symmetric inner space with a bounded \
                     prefix-average transform; no closed form for {inner}"
                )),
            }
        }
        Tandori(_) => Resolution::Unknown(format!("no dual rule for {s}")),
    }
}

/// (L^{p,q})′ per the closed-form table.
fn lorentz_dual(p: f64, q: f64) -> SpaceDescriptor {
    if p < 1.0 {
        // both q < ∞ and q = ∞ give the zero dual
        Zero
    } else if p == 1.0 {
        if q > 1.0 {
            Zero
        } else {
            Lebesgue { p: INF, alpha: 0.0 }
        }
    } else if p.is_infinite() {
        // L^{∞,∞} = L^∞ (smaller q already canonicalized to {0} upstream)
        if q.is_infinite() {
            Lebesgue { p: 1.0, alpha: 0.0 }
        } else {
            MeasurableAll
        }
    } else if q >= 1.0 {
        Lorentz { p: conjugate(p), q: conjugate(q) }.canon()
    } else {
        Lorentz { p: conjugate(p), q: INF }.canon()
    }
}

/// Pointwise product space E⊙F (reciprocal index addition).
pub fn product(s1: &SpaceDescriptor, s2: &SpaceDescriptor) -> Resolution {
    let a = s1.clone().canon();
    let b = s2.clone().canon();
    if a == Zero || b == Zero {
        return Resolution::Resolved(Zero);
    }
    if a == MeasurableAll || b == MeasurableAll {
        return Resolution::Resolved(MeasurableAll);
    }
    // multiplication by bounded functions is neutral
    if a == (Lebesgue { p: INF, alpha: 0.0 }) {
        return Resolution::Resolved(b);
    }
    if b == (Lebesgue { p: INF, alpha: 0.0 }) {
        return Resolution::Resolved(a);
    }
    if let (Lebesgue { p: p0, alpha: a0 }, Lebesgue { p: p1, alpha: a1 }) = (&a, &b) {
        return Resolution::Resolved(Lebesgue { p: recip_add(*p0, *p1), alpha: a0 + a1 });
    }
    // Λ/M rewrite to classical Lorentz, then reciprocal addition in both
    // indices
    let la = a.normalize_symmetrized().unwrap_or_else(|| a.clone());
    let lb = b.normalize_symmetrized().unwrap_or_else(|| b.clone());
    if la == Zero || lb == Zero {
        return Resolution::Resolved(Zero);
    }
    if let (Some((p1, q1)), Some((p2, q2))) = (la.as_lorentz(), lb.as_lorentz()) {
        return Resolution::Resolved(
            Lorentz { p: recip_add(p1, p2), q: recip_add(q1, q2) }.canon(),
        );
    }
    Resolution::Unknown(format!("no product rule for {s1} ⊙ {s2}"))
}

/// Pointwise multiplier space M(E,F) = {x : xy ∈ F for every y ∈ E}.
///
/// Dispatch: classical Lorentz pairs take the full case analysis; power Λ/M
/// pairs take the gated symmetrized rules (out-of-region points return
/// Unknown naming the violated condition); Cesàro pairs with Lebesgue inner
/// spaces take the Tandori rule.
pub fn multiplier(s1: &SpaceDescriptor, s2: &SpaceDescriptor, domain: Domain) -> Resolution {
    let a = s1.clone().canon();
    let b = s2.clone().canon();
    // degenerate sources/targets
    if a == Zero || (a == MeasurableAll && b == MeasurableAll) {
        return Resolution::Resolved(MeasurableAll);
    }
    if a == MeasurableAll {
        return Resolution::Resolved(Zero);
    }
    if b == MeasurableAll {
        return Resolution::Resolved(MeasurableAll);
    }
    if b == Zero {
        return Resolution::Resolved(Zero);
    }
    if let (Cesaro(e), Cesaro(f)) = (&a, &b) {
        return cesaro_multiplier(e, f, domain);
    }
    if let (Some(src), Some(tgt)) = (a.as_symmetrized_power(), b.as_symmetrized_power()) {
        return symmetrized_power_multiplier(src, tgt);
    }
    // bounded multipliers: M(L^∞, F) = F
    if a == (Lebesgue { p: INF, alpha: 0.0 }) {
        return Resolution::Resolved(b);
    }
    // M(E, L^∞) = {0} for every quasi-Banach E with p₁ < ∞ (any nonzero x
    // meets an unbounded y on its support)
    if b == (Lebesgue { p: INF, alpha: 0.0 }) {
        return Resolution::Resolved(Zero);
    }
    if let (Some((p1, q1)), Some((p2, q2))) = (a.as_lorentz(), b.as_lorentz()) {
        return Resolution::Resolved(lorentz_multiplier(p1, q1, p2, q2));
    }
    if let (Lebesgue { p: ps, alpha: als }, Lebesgue { p: pt, alpha: alt }) = (&a, &b) {
        // weighted reflection: M(L^p(t^a), L^q(t^b)) = L^s(t^{b−a}),
        // 1/s = 1/q − 1/p, valid for q ≤ p
        if pt <= ps {
            return Resolution::Resolved(Lebesgue { p: recip_sub(*pt, *ps), alpha: alt - als });
        }
        return Resolution::Unknown(format!(
            "weighted multiplier rule needs source index ≥ target index, got {ps} < {pt}"
        ));
    }
    Resolution::Unknown(format!("no multiplier rule for M({s1}, {s2})"))
}

/// Full classical-Lorentz case analysis, 0 < p₁, p₂ < ∞ (the ∞ endpoints
/// are handled by the caller's L^∞ shortcuts and canonicalization).
fn lorentz_multiplier(p1: f64, q1: f64, p2: f64, q2: f64) -> SpaceDescriptor {
    if p1.is_infinite() {
        // L^{∞,∞} source (q₁ < ∞ canonicalized away): multipliers are the
        // target itself
        return Lorentz { p: p2, q: q2 }.canon();
    }
    if p2.is_infinite() {
        return Zero;
    }
    if p1 < p2 || (p1 == p2 && q1 > q2) {
        return Zero;
    }
    let p3 = recip_sub(p2, p1);
    let q3 = if q1 > q2 { recip_sub(q2, q1) } else { INF };
    Lorentz { p: p3, q: q3 }.canon()
}

/// Gated multiplier rules for power-weight symmetrized pairs, source
/// (p, a) ↦ Λ_{p,t^{ap}} (or M_{t^a} at p = ∞), target (q, b) likewise.
/// Out-of-region points name the violated condition instead of resolving.
fn symmetrized_power_multiplier(src: (f64, f64), tgt: (f64, f64)) -> Resolution {
    let (p, a) = src;
    let (q, b) = tgt;
    let fail = |what: &str, formula: String| Resolution::Unknown(format!("{what}: {formula}"));
    let source_range = -1.0 / p < a && a < 1.0 - 1.0 / p; // vacuous bounds at p = ∞ treated below
    let target_range = -1.0 / q < b && b < 1.0 - 1.0 / q;
    if p.is_finite() && q.is_finite() && 1.0 < q && q < p {
        if !source_range {
            return fail(
                "source symmetrization not a nontrivial normable space",
                format!("needs -1/p < a < 1-1/p, got a = {a}, p = {p}"),
            );
        }
        if !target_range {
            return fail(
                "target symmetrization not a nontrivial normable space",
                format!("needs -1/q < b < 1-1/q, got b = {b}, q = {q}"),
            );
        }
        if (b - a) * p * q / (p - q) <= -1.0 {
            return fail(
                "composite dual symmetrization trivial",
                format!("needs (b-a)pq/(p-q) > -1, got {}", (b - a) * p * q / (p - q)),
            );
        }
        let s = recip_sub(q, p); // 1/s = 1/q − 1/p
        return Resolution::Resolved(Lambda { p: s, alpha: (b - a) * s });
    }
    if q == 1.0 && p.is_finite() && p > 1.0 {
        if !source_range {
            return fail(
                "source symmetrization not a nontrivial normable space",
                format!("needs -1/p < a < 1-1/p, got a = {a}, p = {p}"),
            );
        }
        if !(-1.0 < b && b < 0.0) {
            return fail(
                "target symmetrization not a nontrivial normable space",
                format!("needs -1 < b < 0, got b = {b}"),
            );
        }
        if (b - a) * p / (p - 1.0) <= -1.0 {
            return fail(
                "composite dual symmetrization trivial",
                format!("needs (b-a)p/(p-1) > -1, got {}", (b - a) * p / (p - 1.0)),
            );
        }
        let s = conjugate(p);
        return Resolution::Resolved(Lambda { p: s, alpha: (b - a) * s });
    }
    if q == 1.0 && p.is_infinite() {
        if !(-1.0 < b && b <= 0.0 && 0.0 <= a && a < 1.0) {
            return fail(
                "exponents outside the bounded-transform region",
                format!("needs -1 < b <= 0 <= a < 1, got a = {a}, b = {b}"),
            );
        }
        if b - a <= -1.0 {
            return fail(
                "composite dual symmetrization trivial",
                format!("needs b-a > -1, got {}", b - a),
            );
        }
        return Resolution::Resolved(Lambda { p: 1.0, alpha: b - a });
    }
    if p == q && p.is_finite() && p >= 1.0 {
        if !source_range || !target_range {
            return fail(
                "symmetrizations not nontrivial normable spaces",
                format!("needs -1/p < a,b < 1-1/p, got a = {a}, b = {b}, p = {p}"),
            );
        }
        if !(0.0 <= b - a && b - a < 1.0 / p) {
            return fail(
                "suffix transform unbounded on the composite",
                format!("needs 0 <= b-a < 1/p, got {}", b - a),
            );
        }
        return Resolution::Resolved(Marcinkiewicz { alpha: b - a });
    }
    if p.is_infinite() && q.is_infinite() {
        if !(0.0 < a && a < 1.0 && 0.0 < b && b < 1.0) {
            return fail(
                "exponents outside the bounded-transform region",
                format!("needs a,b in (0,1), got a = {a}, b = {b}"),
            );
        }
        // b < a gives the zero space directly
        return Resolution::Resolved(if b >= a { Marcinkiewicz { alpha: b - a } } else { Zero });
    }
    Resolution::Unknown(format!(
        "symmetrized multiplier rules cover 1 <= q <= p only, got p = {p}, q = {q}"
    ))
}

/// M(CE, CF) = Tandori(M(E,F)) for Lebesgue inner spaces with
/// 1 < q ≤ p ≤ ∞ on the half-line.
fn cesaro_multiplier(e: &SpaceDescriptor, f: &SpaceDescriptor, domain: Domain) -> Resolution {
    if domain != Domain::HalfLine {
        return Resolution::Unknown(
            "Cesaro multiplier rule is stated on the half-line domain".into(),
        );
    }
    match (e, f) {
        (Lebesgue { p, alpha: a1 }, Lebesgue { p: q, alpha: a2 })
            if *a1 == 0.0 && *a2 == 0.0 =>
        {
            if !(1.0 < *q && q <= p) {
                return Resolution::Unknown(format!(
                    "Cesaro multiplier rule needs 1 < q <= p <= inf, got p = {p}, q = {q}"
                ));
            }
            let r = recip_sub(*q, *p);
            Resolution::Resolved(Tandori(Box::new(Lebesgue { p: r, alpha: 0.0 })))
        }
        _ => Resolution::Unknown(format!(
            "Cesaro multiplier rule needs unweighted Lebesgue inner spaces, got {e}, {f}"
        )),
    }
}

/// Symmetrization E^(*) at the symbolic layer.
pub fn symmetrize(s: &SpaceDescriptor) -> Resolution {
    match s {
        Zero => Resolution::Resolved(Zero),
        MeasurableAll => Resolution::Resolved(MeasurableAll),
        Lebesgue { p, alpha } if p.is_infinite() => {
            Resolution::Resolved(Marcinkiewicz { alpha: *alpha })
        }
        // ∫ |x t^α|^p = ∫ x^p t^{αp}, so the Λ weight exponent is αp
        Lebesgue { p, alpha } => Resolution::Resolved(Lambda { p: *p, alpha: alpha * p }),
        // already symmetric: the functional depends only on x*
        Lorentz { .. } | Lambda { .. } | Marcinkiewicz { .. } => Resolution::Resolved(s.clone()),
        _ => Resolution::Unknown(format!("no symmetrization rule for {s}")),
    }
}

/// Three-valued verdict for classification criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Yes => write!(f, "yes"),
            Verdict::No => write!(f, "no"),
            Verdict::Unknown => write!(f, "unknown"),
        }
    }
}

/// Nontriviality / quasi-normability / normability report with the applied
/// parameter-region criteria noted.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub nontrivial: Verdict,
    pub quasi_normed: Verdict,
    pub normable: Verdict,
    pub notes: Vec<String>,
}

impl ConditionReport {
    fn new(nontrivial: Verdict, quasi_normed: Verdict, normable: Verdict) -> Self {
        ConditionReport { nontrivial, quasi_normed, normable, notes: Vec::new() }
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }
}

/// Closed-form classification of a descriptor (power weights only).
pub fn classify(s: &SpaceDescriptor) -> ConditionReport {
    match s {
        Zero => ConditionReport::new(Verdict::No, Verdict::Yes, Verdict::Yes)
            .note("the zero space is trivially complete"),
        MeasurableAll => {
            ConditionReport::new(Verdict::Yes, Verdict::No, Verdict::No)
                .note("no norm structure on the space of all measurable functions")
        }
        Lebesgue { p, .. } => {
            let normable = if *p >= 1.0 { Verdict::Yes } else { Verdict::No };
            ConditionReport::new(Verdict::Yes, Verdict::Yes, normable)
                .note("weighted Lebesgue with positive weight")
        }
        LebesgueNamed { p, .. } => {
            let normable = if *p >= 1.0 { Verdict::Yes } else { Verdict::No };
            ConditionReport::new(Verdict::Yes, Verdict::Yes, normable)
                .note("weighted Lebesgue with a named positive weight")
        }
        Lorentz { p, q } => {
            // L^{p,q} = Λ_{q, t^{q/p−1}}: route through the Λ criteria
            if p.is_infinite() && q.is_finite() {
                return ConditionReport::new(Verdict::No, Verdict::Yes, Verdict::Yes)
                    .note("sup-index infinite with finite integral index gives the zero space");
            }
            if p.is_infinite() {
                return ConditionReport::new(Verdict::Yes, Verdict::Yes, Verdict::Yes)
                    .note("essentially bounded functions");
            }
            if q.is_infinite() {
                // weak space: normable iff p > 1 (running-max criterion at α = 1/p)
                let normable = if *p > 1.0 { Verdict::Yes } else { Verdict::No };
                return ConditionReport::new(Verdict::Yes, Verdict::Yes, normable)
                    .note("weak Lorentz space via the running-max criterion");
            }
            // L^{p,q} = Λ_{q, t^{q/p − 1}}
            classify_lambda(*q, q / p - 1.0)
        }
        Lambda { p, alpha } => classify_lambda(*p, *alpha),
        Marcinkiewicz { alpha } => {
            if *alpha < 0.0 {
                ConditionReport::new(Verdict::No, Verdict::Yes, Verdict::Yes)
                    .note("running max of a decaying power weight is infinite everywhere")
            } else {
                let normable = if *alpha < 1.0 { Verdict::Yes } else { Verdict::No };
                ConditionReport::new(Verdict::Yes, Verdict::Yes, normable).note(
                    "power fundamental function doubles; reciprocal-integral criterion \
                     holds exactly when the exponent is below one",
                )
            }
        }
        Cesaro(_) | Tandori(_) => {
            ConditionReport::new(Verdict::Unknown, Verdict::Unknown, Verdict::Unknown)
                .note("no closed-form classification for transform-defined spaces")
        }
    }
}

/// Criteria for Λ_{p, t^alpha} in the literal weight exponent: the
/// nontriviality and normability bands −1 < α and −1 < α < p−1.
fn classify_lambda(p: f64, alpha: f64) -> ConditionReport {
    let nontrivial = alpha > -1.0;
    if !nontrivial {
        return ConditionReport::new(Verdict::No, Verdict::Yes, Verdict::Yes)
            .note("weight power integral diverges at the origin");
    }
    let normable = if p < 1.0 {
        Verdict::No // contains a copy of ℓ^p
    } else if p == 1.0 {
        if -1.0 < alpha && alpha <= 0.0 {
            Verdict::Yes
        } else {
            Verdict::No
        }
    } else if -1.0 < alpha && alpha < p - 1.0 {
        Verdict::Yes
    } else {
        Verdict::No
    };
    let mut rep = ConditionReport::new(Verdict::Yes, Verdict::Yes, normable)
        .note("power weight satisfies the doubling condition on its integral");
    if p < 1.0 {
        rep = rep.note("integral index below one embeds a non-normable sequence space");
    }
    rep
}

/// Power-family concave functional ρ(u,v) = c·u^θ·v^{1−θ}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerRho {
    pub theta: f64,
    pub constant: f64,
}

impl PowerRho {
    pub fn new(theta: f64) -> Self {
        PowerRho { theta, constant: 1.0 }
    }

    pub fn eval(&self, u: f64, v: f64) -> f64 {
        self.constant * u.powf(self.theta) * v.powf(1.0 - self.theta)
    }

    /// Lower conjugate ρ̂(a,b) = inf_{u,v>0} (au+bv)/ρ(u,v): for the power
    /// family this is again a power functional with the same θ and constant
    /// K(θ)/c, K(θ) = θ^{−θ}(1−θ)^{−(1−θ)}. Applying it twice restores ρ.
    pub fn hat(&self) -> PowerRho {
        PowerRho { theta: self.theta, constant: rho_hat_constant(self.theta) / self.constant }
    }
}

/// K(θ) = θ^{−θ}(1−θ)^{−(1−θ)} in ρ̂(a,b) = K·a^θ·b^{1−θ} for ρ = u^θv^{1−θ}.
pub fn rho_hat_constant(theta: f64) -> f64 {
    theta.powf(-theta) * (1.0 - theta).powf(-(1.0 - theta))
}

/// Aoki–Rolewicz exponent from the quasi-triangle constant: p = 1/(1+log₂C).
/// Pre: C ≥ 1.
pub fn aoki_exponent(c: f64) -> f64 {
    1.0 / (1.0 + c.log2())
}

/// Symbolic expression over spaces.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceExpr {
    Leaf(SpaceDescriptor),
    Dual(Box<SpaceExpr>),
    Product(Box<SpaceExpr>, Box<SpaceExpr>),
    Multiplier(Box<SpaceExpr>, Box<SpaceExpr>),
    Symmetrize(Box<SpaceExpr>),
    Convexify(Box<SpaceExpr>, f64),
    Cesaro(Box<SpaceExpr>),
    Tandori(Box<SpaceExpr>),
    Sum(Box<SpaceExpr>, Box<SpaceExpr>),
    Intersect(Box<SpaceExpr>, Box<SpaceExpr>),
}

impl SpaceExpr {
    pub fn leaf(d: SpaceDescriptor) -> Self {
        SpaceExpr::Leaf(d)
    }

    /// The resolved descriptor if the expression is a bare leaf.
    pub fn as_leaf(&self) -> Option<&SpaceDescriptor> {
        match self {
            SpaceExpr::Leaf(d) => Some(d),
            _ => None,
        }
    }
}

/// One applied rewrite, with a human-readable statement of the rule.
#[derive(Debug, Clone)]
pub struct RuleLog {
    pub rule: String,
    pub statement: String,
}

/// Rewriting context: domain and the Fatou flag enabling E′′ = E.
#[derive(Debug, Clone, Copy)]
pub struct RuleCtx {
    pub domain: Domain,
    pub fatou: bool,
}

impl Default for RuleCtx {
    fn default() -> Self {
        RuleCtx { domain: Domain::HalfLine, fatou: true }
    }
}

/// Bottom-up fixed-point simplification. Unresolved nodes stay symbolic;
/// every applied rule is logged.
pub fn simplify(expr: &SpaceExpr, ctx: RuleCtx) -> (SpaceExpr, Vec<RuleLog>) {
    let mut log = Vec::new();
    let mut current = expr.clone();
    for _ in 0..64 {
        let (next, changed) = rewrite(&current, ctx, &mut log);
        current = next;
        if !changed {
            break;
        }
    }
    (current, log)
}

fn rewrite(expr: &SpaceExpr, ctx: RuleCtx, log: &mut Vec<RuleLog>) -> (SpaceExpr, bool) {
    use SpaceExpr as E;
    // children first
    let (expr, mut changed) = match expr {
        E::Leaf(_) => (expr.clone(), false),
        E::Dual(e) => {
            let (c, ch) = rewrite(e, ctx, log);
            (E::Dual(Box::new(c)), ch)
        }
        E::Symmetrize(e) => {
            let (c, ch) = rewrite(e, ctx, log);
            (E::Symmetrize(Box::new(c)), ch)
        }
        E::Convexify(e, r) => {
            let (c, ch) = rewrite(e, ctx, log);
            (E::Convexify(Box::new(c), *r), ch)
        }
        E::Cesaro(e) => {
            let (c, ch) = rewrite(e, ctx, log);
            (E::Cesaro(Box::new(c)), ch)
        }
        E::Tandori(e) => {
            let (c, ch) = rewrite(e, ctx, log);
            (E::Tandori(Box::new(c)), ch)
        }
        E::Product(a, b) => {
            let (ca, c1) = rewrite(a, ctx, log);
            let (cb, c2) = rewrite(b, ctx, log);
            (E::Product(Box::new(ca), Box::new(cb)), c1 || c2)
        }
        E::Multiplier(a, b) => {
            let (ca, c1) = rewrite(a, ctx, log);
            let (cb, c2) = rewrite(b, ctx, log);
            (E::Multiplier(Box::new(ca), Box::new(cb)), c1 || c2)
        }
        E::Sum(a, b) => {
            let (ca, c1) = rewrite(a, ctx, log);
            let (cb, c2) = rewrite(b, ctx, log);
            (E::Sum(Box::new(ca), Box::new(cb)), c1 || c2)
        }
        E::Intersect(a, b) => {
            let (ca, c1) = rewrite(a, ctx, log);
            let (cb, c2) = rewrite(b, ctx, log);
            (E::Intersect(Box::new(ca), Box::new(cb)), c1 || c2)
        }
    };
    // node rules
    let rewritten = match &expr {
        E::Leaf(d) => {
            let canon = d.clone().canon();
            if canon != *d {
                log.push(RuleLog {
                    rule: "leaf-canonicalization".into(),
                    statement: format!("{d} = {canon}"),
                });
                Some(E::Leaf(canon))
            } else if let Some(n) = d.normalize_symmetrized() {
                log.push(RuleLog {
                    rule: "power-symmetrization-identification".into(),
                    statement: format!("{d} = {n}"),
                });
                Some(E::Leaf(n))
            } else {
                None
            }
        }
        E::Dual(inner) => match inner.as_ref() {
            E::Leaf(d) => resolution_step("kothe-dual", kothe_dual(d, ctx.domain), d, log),
            E::Dual(e2) if ctx.fatou => {
                log.push(RuleLog {
                    rule: "double-dual-identity".into(),
                    statement: "E'' = E under the Fatou property".into(),
                });
                Some(e2.as_ref().clone())
            }
            _ => None,
        },
        E::Product(a, b) => match (a.as_leaf(), b.as_leaf()) {
            (Some(da), Some(db)) => {
                binary_resolution_step("product", product(da, db), da, db, "⊙", log)
            }
            _ => None,
        },
        E::Multiplier(a, b) => match (a.as_leaf(), b.as_leaf()) {
            (Some(da), Some(db)) => binary_resolution_step(
                "multiplier",
                multiplier(da, db, ctx.domain),
                da,
                db,
                ", ",
                log,
            ),
            _ => None,
        },
        E::Symmetrize(inner) => match inner.as_ref() {
            E::Leaf(d) => resolution_step("symmetrize", symmetrize(d), d, log),
            E::Symmetrize(_) => {
                log.push(RuleLog {
                    rule: "symmetrize-idempotent".into(),
                    statement: "(E^(*))^(*) = E^(*)".into(),
                });
                Some(inner.as_ref().clone())
            }
            E::Intersect(x, y) => {
                log.push(RuleLog {
                    rule: "symmetrize-intersection".into(),
                    statement: "(E ∩ F)^(*) = E^(*) ∩ F^(*)".into(),
                });
                Some(E::Intersect(
                    Box::new(E::Symmetrize(x.clone())),
                    Box::new(E::Symmetrize(y.clone())),
                ))
            }
            _ => None,
        },
        E::Convexify(inner, r) => match inner.as_ref() {
            E::Leaf(d) => match convexify(d, *r) {
                Resolution::Resolved(out) => {
                    log.push(RuleLog {
                        rule: "convexify".into(),
                        statement: format!("({d})^({}) = {out}", fmt_num(*r)),
                    });
                    Some(E::Leaf(out))
                }
                Resolution::Unknown(_) => None,
            },
            _ if *r == 1.0 => {
                log.push(RuleLog {
                    rule: "convexify-identity".into(),
                    statement: "E^(1) = E".into(),
                });
                Some(inner.as_ref().clone())
            }
            _ => None,
        },
        E::Cesaro(inner) => inner.as_leaf().map(|d| {
            log.push(RuleLog {
                rule: "fold-transform-space".into(),
                statement: format!("Ces({d}) as a resolved space"),
            });
            E::Leaf(Cesaro(Box::new(d.clone())))
        }),
        E::Tandori(inner) => inner.as_leaf().map(|d| {
            if *d == (Lebesgue { p: INF, alpha: 0.0 }) {
                log.push(RuleLog {
                    rule: "tandori-bounded-identity".into(),
                    statement: "Tand(L(inf)) = L(inf)".into(),
                });
                E::Leaf(d.clone())
            } else {
                log.push(RuleLog {
                    rule: "fold-transform-space".into(),
                    statement: format!("Tand({d}) as a resolved space"),
                });
                E::Leaf(Tandori(Box::new(d.clone())))
            }
        }),
        E::Sum(_, _) | E::Intersect(_, _) => None,
    };
    if let Some(r) = rewritten {
        if r != expr {
            return (r, true);
        }
        changed = true;
    }
    (expr, changed)
}

fn resolution_step(
    rule: &str,
    res: Resolution,
    input: &SpaceDescriptor,
    log: &mut Vec<RuleLog>,
) -> Option<SpaceExpr> {
    match res {
        Resolution::Resolved(out) => {
            log.push(RuleLog {
                rule: rule.into(),
                statement: format!("{rule}({input}) = {out}"),
            });
            Some(SpaceExpr::Leaf(out))
        }
        Resolution::Unknown(_) => None,
    }
}

fn binary_resolution_step(
    rule: &str,
    res: Resolution,
    a: &SpaceDescriptor,
    b: &SpaceDescriptor,
    sep: &str,
    log: &mut Vec<RuleLog>,
) -> Option<SpaceExpr> {
    match res {
        Resolution::Resolved(out) => {
            log.push(RuleLog {
                rule: rule.into(),
                statement: format!("{rule}({a}{sep}{b}) = {out}"),
            });
            Some(SpaceExpr::Leaf(out))
        }
        Resolution::Unknown(_) => None,
    }
}
