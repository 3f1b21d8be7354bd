//! Exact step functions on (0, L) and measure-preserving piece maps.
//!
//! A [`StepFunction`] is finitely many constant pieces with strictly
//! increasing right endpoints; it is identically zero beyond its last
//! breakpoint, so every function here has bounded support even when L = ∞.
//! All kernel operations (distribution, rearrangement, rank maps, dilation,
//! monotone majorants) are computed exactly on the piece data — no quadrature.
//!
//! Convention: pieces are right-open, so point evaluation is right-continuous
//! at breakpoints, matching `x*(t) = inf { λ : d_x(λ) ≤ t }` for the
//! decreasing rearrangement.

use crate::closedform::Evaluable;
use crate::error::Error;
use crate::Result;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Signed piecewise-constant function on (0, L).
///
/// Values are stored as non-negative magnitudes plus a sign mask; the signed
/// value of piece `i` is `mags[i]` negated when `neg[i]`. The canonical form
/// has no adjacent pieces with equal signed values and no trailing zero
/// pieces; the zero function has no pieces at all.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    length: f64,
    breaks: Vec<f64>,
    mags: Vec<f64>,
    neg: Vec<bool>,
}

/// Validated constructor: `vals` are signed piece values, `breaks` their right
/// endpoints. Canonicalizes by merging equal adjacent values and dropping
/// trailing zeros.
pub fn make_step(length: f64, breaks: &[f64], vals: &[f64]) -> Result<StepFunction> {
    StepFunction::new(length, breaks.to_vec(), vals.to_vec())
}

impl StepFunction {
    /// See [`make_step`].
    pub fn new(length: f64, breaks: Vec<f64>, vals: Vec<f64>) -> Result<Self> {
        if !(length > 0.0) || length.is_nan() {
            return Err(Error::NegativeLength(length));
        }
        if breaks.len() != vals.len() {
            return Err(Error::LengthMismatch { breaks: breaks.len(), vals: vals.len() });
        }
        let mut prev = 0.0;
        for &b in &breaks {
            if !(b > prev) || !b.is_finite() {
                return Err(Error::NonMonotoneBreakpoints(format!(
                    ": {b} follows {prev}"
                )));
            }
            prev = b;
        }
        if let Some(&last) = breaks.last() {
            if last > length {
                return Err(Error::NonMonotoneBreakpoints(format!(
                    ": breakpoint {last} exceeds domain length {length}"
                )));
            }
        }
        for &v in &vals {
            if !v.is_finite() {
                return Err(Error::NonMonotoneBreakpoints(format!(
                    ": piece value {v} is not finite"
                )));
            }
        }

        // Canonicalize: merge equal adjacent signed values, drop trailing zeros.
        let mut cb: Vec<f64> = Vec::with_capacity(breaks.len());
        let mut cm: Vec<f64> = Vec::with_capacity(breaks.len());
        let mut cn: Vec<bool> = Vec::with_capacity(breaks.len());
        for (&b, &v) in breaks.iter().zip(&vals) {
            let mag = v.abs();
            let neg = v < 0.0;
            if let (Some(pm), Some(pn)) = (cm.last().copied(), cn.last().copied()) {
                if pm == mag && (pn == neg || mag == 0.0) {
                    *cb.last_mut().unwrap() = b; // extend previous piece
                    continue;
                }
            }
            cb.push(b);
            cm.push(mag);
            cn.push(neg);
        }
        while cm.last() == Some(&0.0) {
            cb.pop();
            cm.pop();
            cn.pop();
        }
        Ok(StepFunction { length, breaks: cb, mags: cm, neg: cn })
    }

    /// The zero function on (0, L).
    pub fn zero(length: f64) -> Self {
        StepFunction { length, breaks: vec![], mags: vec![], neg: vec![] }
    }

    /// Characteristic function of (a, b) ⊂ (0, L).
    pub fn indicator(length: f64, a: f64, b: f64) -> Result<Self> {
        if a == 0.0 {
            Self::new(length, vec![b], vec![1.0])
        } else {
            Self::new(length, vec![a, b], vec![0.0, 1.0])
        }
    }

    /// Domain length L (finite or +∞).
    pub fn domain_length(&self) -> f64 {
        self.length
    }

    /// Right endpoint of the last piece (0 for the zero function); the
    /// function vanishes beyond it.
    pub fn support_bound(&self) -> f64 {
        self.breaks.last().copied().unwrap_or(0.0)
    }

    /// Measure of { |f| > 0 }.
    pub fn support_measure(&self) -> f64 {
        self.pieces()
            .filter(|p| p.mag > 0.0)
            .map(|p| p.end - p.start)
            .sum()
    }

    /// True if there are no pieces (f ≡ 0).
    pub fn is_zero(&self) -> bool {
        self.breaks.is_empty()
    }

    /// Number of stored pieces.
    pub fn piece_count(&self) -> usize {
        self.breaks.len()
    }

    /// Iterator over stored pieces (the implicit zero tail is not included).
    pub fn pieces(&self) -> impl Iterator<Item = Piece> + '_ {
        (0..self.breaks.len()).map(move |i| Piece {
            start: if i == 0 { 0.0 } else { self.breaks[i - 1] },
            end: self.breaks[i],
            mag: self.mags[i],
            neg: self.neg[i],
        })
    }

    /// Signed value at `t`; right-continuous at breakpoints, zero outside
    /// (0, support bound].
    pub fn value_at(&self, t: f64) -> f64 {
        if t < 0.0 || t >= self.support_bound() {
            return 0.0;
        }
        let i = self.breaks.partition_point(|&b| b <= t);
        let v = self.mags[i];
        if self.neg[i] {
            -v
        } else {
            v
        }
    }

    /// |f| at `t`.
    pub fn abs_at(&self, t: f64) -> f64 {
        self.value_at(t).abs()
    }

    /// Largest magnitude (the essential supremum of |f|).
    pub fn sup_abs(&self) -> f64 {
        self.mags.iter().cloned().fold(0.0, f64::max)
    }

    /// |f| as a step function.
    pub fn abs(&self) -> StepFunction {
        let mut out = self.clone();
        out.neg.iter_mut().for_each(|n| *n = false);
        // adjacent pieces may now coincide; re-canonicalize
        let vals: Vec<f64> = out.mags.clone();
        StepFunction::new(out.length, out.breaks, vals).expect("abs preserves validity")
    }

    /// c·f (c may be negative).
    pub fn scale(&self, c: f64) -> StepFunction {
        let vals: Vec<f64> = self
            .pieces()
            .map(|p| c * if p.neg { -p.mag } else { p.mag })
            .collect();
        StepFunction::new(self.length, self.breaks.clone(), vals).expect("scaling preserves validity")
    }

    /// |f|^e as a step function (signs are dropped); e > 0.
    pub fn abs_pow(&self, e: f64) -> StepFunction {
        let vals: Vec<f64> = self.mags.iter().map(|&m| m.powf(e)).collect();
        StepFunction::new(self.length, self.breaks.clone(), vals).expect("powers preserve validity")
    }

    /// Exact ∫ |f| dt.
    pub fn integral_abs(&self) -> f64 {
        self.pieces().map(|p| p.mag * (p.end - p.start)).sum()
    }

    /// Walk `self` and `other` on their common refinement; yields
    /// (start, end, value_self, value_other) with signed values.
    pub fn zip_pieces<'a>(&'a self, other: &'a StepFunction) -> Vec<(f64, f64, f64, f64)> {
        let t_max = self.support_bound().max(other.support_bound());
        let mut cuts: Vec<f64> = self
            .breaks
            .iter()
            .chain(other.breaks.iter())
            .cloned()
            .filter(|&b| b <= t_max)
            .collect();
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup();
        let mut out = Vec::with_capacity(cuts.len());
        let mut prev = 0.0;
        for &c in &cuts {
            let mid_probe = 0.5 * (prev + c);
            out.push((prev, c, self.value_at(mid_probe), other.value_at(mid_probe)));
            prev = c;
        }
        out
    }

    fn from_zipped(length: f64, zipped: &[(f64, f64, f64)]) -> StepFunction {
        let breaks: Vec<f64> = zipped.iter().map(|z| z.1).collect();
        let vals: Vec<f64> = zipped.iter().map(|z| z.2).collect();
        StepFunction::new(length, breaks, vals).expect("zipped grids are valid")
    }

    /// Pointwise sum on the common refinement.
    pub fn add(&self, other: &StepFunction) -> Result<StepFunction> {
        self.check_same_domain(other)?;
        let z: Vec<_> = self
            .zip_pieces(other)
            .into_iter()
            .map(|(s, e, a, b)| (s, e, a + b))
            .collect();
        Ok(Self::from_zipped(self.length, &z))
    }

    /// Pointwise product on the common refinement.
    pub fn mul(&self, other: &StepFunction) -> Result<StepFunction> {
        self.check_same_domain(other)?;
        let z: Vec<_> = self
            .zip_pieces(other)
            .into_iter()
            .map(|(s, e, a, b)| (s, e, a * b))
            .collect();
        Ok(Self::from_zipped(self.length, &z))
    }

    /// Pointwise quotient with the convention 0/anything = 0; errors if a
    /// nonzero value is divided by zero.
    pub fn div(&self, other: &StepFunction) -> Result<StepFunction> {
        self.check_same_domain(other)?;
        let mut z = Vec::new();
        for (s, e, a, b) in self.zip_pieces(other) {
            let v = if a == 0.0 {
                0.0
            } else if b == 0.0 {
                return Err(Error::ZeroNorm(format!(
                    "division by zero piece on ({s}, {e})"
                )));
            } else {
                a / b
            };
            z.push((s, e, v));
        }
        Ok(Self::from_zipped(self.length, &z))
    }

    /// Truncate the support to (0, t_max]; the domain length is unchanged.
    pub fn truncate_support(&self, t_max: f64) -> StepFunction {
        let mut breaks = Vec::new();
        let mut vals = Vec::new();
        for p in self.pieces() {
            if p.start >= t_max {
                break;
            }
            breaks.push(p.end.min(t_max));
            vals.push(p.signed());
        }
        StepFunction::new(self.length, breaks, vals).expect("truncation preserves validity")
    }

    fn check_same_domain(&self, other: &StepFunction) -> Result<()> {
        if self.length != other.length {
            return Err(Error::DomainMismatch(format!(
                "domain lengths {} and {} differ",
                self.length, other.length
            )));
        }
        Ok(())
    }

    fn piece_len(&self, i: usize) -> f64 {
        self.breaks[i] - if i == 0 { 0.0 } else { self.breaks[i - 1] }
    }

    /// Indices of pieces in stable decreasing-magnitude order (ties keep the
    /// original order). Shared by `distribution`, `rearrange` and
    /// `rank_function` so the three agree bit-for-bit.
    fn desc_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.breaks.len()).collect();
        idx.sort_by(|&i, &j| self.mags[j].partial_cmp(&self.mags[i]).unwrap());
        idx
    }

    fn mags_nonincreasing_positive(&self) -> bool {
        !self.mags.is_empty()
            && self.neg.iter().all(|&n| !n)
            && self.mags.windows(2).all(|w| w[0] >= w[1])
            && *self.mags.last().unwrap() > 0.0
    }

    /// Distribution function d_f(λ) = m({ |f| > λ }), exact.
    ///
    /// For λ < 0 the superlevel set is the whole domain, so L is returned.
    pub fn distribution(&self, lambda: f64) -> f64 {
        if lambda < 0.0 {
            return self.length;
        }
        if self.mags_nonincreasing_positive() {
            // Non-increasing profile: the superlevel set is a prefix of
            // pieces, so its measure is a stored breakpoint.
            let k = self.mags.partition_point(|&m| m > lambda);
            return if k == 0 { 0.0 } else { self.breaks[k - 1] };
        }
        let mut total = 0.0;
        for &i in &self.desc_order() {
            if self.mags[i] > lambda {
                total += self.piece_len(i);
            } else {
                break;
            }
        }
        total
    }

    /// Decreasing rearrangement f* as a step function on the same domain.
    ///
    /// Breakpoints of f* are prefix sums of piece lengths taken in stable
    /// decreasing-magnitude order, so `distribution` values are preserved
    /// bit-for-bit, not merely up to rounding.
    pub fn rearrange(&self) -> StepFunction {
        if self.is_zero() || self.mags_nonincreasing_positive() {
            return self.abs();
        }
        let mut breaks = Vec::with_capacity(self.breaks.len());
        let mut vals = Vec::with_capacity(self.breaks.len());
        let mut acc = 0.0;
        for &i in &self.desc_order() {
            if self.mags[i] == 0.0 {
                break;
            }
            acc += self.piece_len(i);
            breaks.push(acc);
            vals.push(self.mags[i]);
        }
        StepFunction::new(self.length, breaks, vals).expect("rearrangement is valid")
    }

    /// Rank map ω(t) = m({ s : |f(s)| > |f(t)|, or |f(s)| = |f(t)| and s ≤ t })
    /// restricted to the support of f. ω is a measure-preserving piecewise
    /// translation with |f| = f*∘ω on supp f (step functions always have
    /// f*(t) → 0 as t → ∞, so no correction term is needed).
    pub fn rank_function(&self) -> PieceMap {
        let mut entries = Vec::new();
        let mut base = vec![0.0; self.breaks.len()];
        let mut acc = 0.0;
        for &i in &self.desc_order() {
            if self.mags[i] == 0.0 {
                break;
            }
            base[i] = acc;
            acc += self.piece_len(i);
        }
        for (i, p) in self.pieces().enumerate() {
            if p.mag == 0.0 {
                continue;
            }
            entries.push(MapEntry { src_start: p.start, src_end: p.end, dst_start: base[i] });
        }
        PieceMap { domain_length: self.length, entries }
    }

    /// Dilation D_s f(t) = f(t/s): breakpoints scale by s and are clipped at
    /// the domain boundary (on a finite domain, D_s f vanishes on (sL, L)
    /// when s < 1 and loses the overflow when s > 1).
    pub fn dilate(&self, s: f64) -> Result<StepFunction> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::NegativeLength(s));
        }
        let mut breaks = Vec::new();
        let mut vals = Vec::new();
        for p in self.pieces() {
            let start = p.start * s;
            if start >= self.length {
                break;
            }
            breaks.push((p.end * s).min(self.length));
            vals.push(p.signed());
        }
        Ok(StepFunction::new(self.length, breaks, vals).expect("dilation preserves validity"))
    }

    /// Least non-increasing majorant of |f| from the right:
    /// f̃(t) = ess sup_{s ≥ t} |f(s)|.
    pub fn tandori_majorant(&self) -> StepFunction {
        let mut vals = vec![0.0; self.mags.len()];
        let mut running = 0.0_f64;
        for i in (0..self.mags.len()).rev() {
            running = running.max(self.mags[i]);
            vals[i] = running;
        }
        StepFunction::new(self.length, self.breaks.clone(), vals)
            .expect("majorant preserves validity")
    }

    // ------------------------------------------------------------------
    // Serialization
    // ------------------------------------------------------------------

    /// JSON form `{"L": number|"inf", "breaks": [...], "vals": [...]}` with
    /// signed values; round-trips bit-exactly.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("step functions are serializable")
    }

    /// Parse and validate the JSON form.
    pub fn from_json(s: &str) -> Result<StepFunction> {
        Ok(serde_json::from_str(s)?)
    }

    /// Two-column CSV `right_endpoint,value` with full-precision decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("right_endpoint,value\n");
        for p in self.pieces() {
            out.push_str(&format!("{},{}\n", p.end, p.signed()));
        }
        out
    }
}

/// One constant piece (start, end) with magnitude and sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub start: f64,
    pub end: f64,
    pub mag: f64,
    pub neg: bool,
}

impl Piece {
    /// Signed piece value.
    pub fn signed(&self) -> f64 {
        if self.neg {
            -self.mag
        } else {
            self.mag
        }
    }
}

#[derive(Serialize, Deserialize)]
struct StepJson {
    #[serde(rename = "L", serialize_with = "ser_len", deserialize_with = "de_len")]
    length: f64,
    breaks: Vec<f64>,
    vals: Vec<f64>,
}

fn ser_len<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str("inf")
    }
}

fn de_len<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum LenRepr {
        Num(f64),
        Tag(String),
    }
    match LenRepr::deserialize(d)? {
        LenRepr::Num(x) => Ok(x),
        LenRepr::Tag(t) if t == "inf" => Ok(f64::INFINITY),
        LenRepr::Tag(t) => Err(D::Error::custom(format!("bad domain length {t:?}"))),
    }
}

impl Serialize for StepFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StepJson {
            length: self.length,
            breaks: self.breaks.clone(),
            vals: self.pieces().map(|p| p.signed()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StepFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = StepJson::deserialize(d)?;
        StepFunction::new(raw.length, raw.breaks, raw.vals).map_err(D::Error::custom)
    }
}

/// Measure-preserving piecewise translation between subsets of (0, L):
/// finitely many source intervals, each shifted onto a target interval of the
/// same length. Targets of distinct entries are pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceMap {
    domain_length: f64,
    entries: Vec<MapEntry>,
}

/// Source interval (src_start, src_end) mapped onto
/// (dst_start, dst_start + (src_end − src_start)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapEntry {
    pub src_start: f64,
    pub src_end: f64,
    pub dst_start: f64,
}

impl PieceMap {
    /// Entries ordered by source start.
    pub fn entries(&self) -> &[MapEntry] {
        &self.entries
    }

    /// ω(t), or None outside the source set.
    pub fn apply(&self, t: f64) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| t > e.src_start && t <= e.src_end)
            .map(|e| e.dst_start + (t - e.src_start))
    }

    /// Total measure of the source (= target) set.
    pub fn measure(&self) -> f64 {
        self.entries.iter().map(|e| e.src_end - e.src_start).sum()
    }

    /// Pull a step function back through the map: (g∘ω)(t) = g(ω(t)) on the
    /// source set, 0 elsewhere. Cuts are made in source coordinates so the
    /// stored interval endpoints are preserved exactly; values are probed at
    /// destination midpoints.
    pub fn transport(&self, g: &StepFunction) -> Result<StepFunction> {
        let mut pieces: Vec<(f64, f64, f64)> = Vec::new();
        for e in &self.entries {
            let len = e.src_end - e.src_start;
            let mut cuts: Vec<f64> = vec![e.src_start, e.src_end];
            for b in g.pieces().map(|p| p.end) {
                if b > e.dst_start && b < e.dst_start + len {
                    let s = e.src_start + (b - e.dst_start);
                    if s > e.src_start && s < e.src_end {
                        cuts.push(s);
                    }
                }
            }
            cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            cuts.dedup();
            for w in cuts.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                if hi <= lo {
                    continue;
                }
                let v = g.value_at(e.dst_start + (0.5 * (lo + hi) - e.src_start));
                pieces.push((lo, hi, v));
            }
        }
        pieces.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        // Fill source gaps with zero pieces.
        let mut breaks = Vec::new();
        let mut vals = Vec::new();
        let mut cursor = 0.0;
        for (s, e, v) in pieces {
            if s > cursor {
                breaks.push(s);
                vals.push(0.0);
            }
            breaks.push(e);
            vals.push(v);
            cursor = e;
        }
        StepFunction::new(self.domain_length, breaks, vals)
    }
}

/// Refined resampling grid: each interval between consecutive breakpoints is
/// split into `per_piece` equal parts, and the first interval (0, b₁] is
/// additionally refined geometrically toward 0 with `geometric_levels`
/// halvings, so slowly diverging profiles near the origin are resolved.
pub fn refine_grid(breaks: &[f64], per_piece: usize, geometric_levels: usize) -> Vec<f64> {
    let mut grid = Vec::new();
    let mut prev = 0.0;
    for (i, &b) in breaks.iter().enumerate() {
        if i == 0 {
            let mut g = b;
            for _ in 0..geometric_levels {
                g *= 0.5;
            }
            let mut geo = Vec::new();
            let mut t = g;
            while t < b {
                geo.push(t);
                t *= 2.0;
            }
            grid.extend(geo);
        }
        for k in 1..=per_piece {
            let t = prev + (b - prev) * (k as f64) / (per_piece as f64);
            grid.push(t);
        }
        prev = b;
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();
    grid
}

/// Midpoint resampling of a closed-form expression onto a step grid.
///
/// `grid` lists ascending positive right endpoints; piece `i` covers
/// (grid[i−1], grid[i]] and takes the value of `g` at the midpoint. Returns
/// the step function together with the resampling error
/// max over pieces of |g(mid) − g(endpoint)| (endpoints probed slightly
/// inside the piece at 0 where g may be singular).
pub fn resample(g: &Evaluable, grid: &[f64]) -> Result<(StepFunction, f64)> {
    if grid.is_empty() {
        return Err(Error::NonMonotoneBreakpoints(": resampling grid is empty".into()));
    }
    let mut vals = Vec::with_capacity(grid.len());
    let mut err = 0.0_f64;
    let mut prev = 0.0;
    for &b in grid {
        if !(b > prev) {
            return Err(Error::NonMonotoneBreakpoints(format!(": grid point {b} after {prev}")));
        }
        let mid = 0.5 * (prev + b);
        let v = g.eval(mid);
        if !v.is_finite() {
            return Err(Error::EvaluableUndefinedAt(mid));
        }
        let left_probe = if prev == 0.0 { mid * 1e-3 } else { prev };
        for probe in [left_probe, b] {
            let pv = g.eval(probe);
            if pv.is_finite() {
                err = err.max((v - pv).abs());
            } else {
                return Err(Error::EvaluableUndefinedAt(probe));
            }
        }
        vals.push(v);
        prev = b;
    }
    let f = StepFunction::new(g.domain_length(), grid.to_vec(), vals)?;
    Ok((f, err))
}
