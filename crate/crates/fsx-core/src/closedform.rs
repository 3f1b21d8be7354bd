//! Piecewise closed forms: finite sums of c·t^γ·lnᵏt on each piece.
//!
//! This family is closed under antidifferentiation, under the prefix average
//! (1/t)∫₀ᵗ and under the suffix log-integral ∫ₜ f(s)/s ds, which is what
//! makes the averaging operators of the crate exact instead of quadrature
//! based. A [`ClosedForm`] may carry an explicit tail piece out to an
//! infinite domain (e.g. the c/t tail of a prefix average), unlike a
//! [`StepFunction`] whose tail is always zero.

use crate::error::Error;
use crate::stepfn::StepFunction;
use crate::Result;
use std::collections::BTreeMap;

/// One monomial c·t^γ·lnᵏt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coef: f64,
    pub gamma: f64,
    pub logk: u32,
}

impl Term {
    fn eval(&self, t: f64) -> f64 {
        let mut v = self.coef * t.powf(self.gamma);
        if self.logk > 0 {
            v *= t.ln().powi(self.logk as i32);
        }
        v
    }
}

fn eval_terms(terms: &[Term], t: f64) -> f64 {
    terms.iter().map(|term| term.eval(t)).sum()
}

/// Combine duplicate (γ, k) monomials and drop zero coefficients.
fn combine(terms: Vec<Term>) -> Vec<Term> {
    let mut acc: BTreeMap<(u64, u32), Term> = BTreeMap::new();
    for t in terms {
        let key = (t.gamma.to_bits(), t.logk);
        acc.entry(key)
            .and_modify(|e| e.coef += t.coef)
            .or_insert(t);
    }
    acc.into_values().filter(|t| t.coef != 0.0).collect()
}

/// Antiderivative of a monomial sum, normalized so only powers and logs
/// appear (no integration constant):
///   ∫ c·t^γ·lnᵏt dt = c·t^{γ+1}/(γ+1)·lnᵏt − k/(γ+1)·∫ c·t^γ·ln^{k−1}t dt
/// for γ ≠ −1, and c·ln^{k+1}t/(k+1) for γ = −1.
fn antiderivative(terms: &[Term]) -> Vec<Term> {
    let mut out = Vec::new();
    for t in terms {
        if t.gamma == -1.0 {
            out.push(Term { coef: t.coef / (t.logk as f64 + 1.0), gamma: 0.0, logk: t.logk + 1 });
        } else {
            let g1 = t.gamma + 1.0;
            let mut c = t.coef / g1;
            let mut k = t.logk;
            loop {
                out.push(Term { coef: c, gamma: g1, logk: k });
                if k == 0 {
                    break;
                }
                c *= -(k as f64) / g1;
                k -= 1;
            }
        }
    }
    combine(out)
}

/// Evaluate an antiderivative at 0⁺ (limit), used when integrating from the
/// origin. Converges to 0 when every term has γ > 0, or γ = 0 with k = 0;
/// returns None when the limit is not 0 and finite.
fn antiderivative_at_origin(terms: &[Term]) -> Option<f64> {
    for t in terms {
        if t.gamma < 0.0 || (t.gamma == 0.0 && t.logk > 0 && t.coef != 0.0) {
            return None;
        }
    }
    Some(0.0)
}

/// Piecewise closed form on (0, L): strictly increasing right endpoints, one
/// monomial sum per piece, zero beyond the last endpoint. The last endpoint
/// may equal L (including L = ∞) to carry an explicit tail.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    length: f64,
    breaks: Vec<f64>,
    pieces: Vec<Vec<Term>>,
}

impl ClosedForm {
    /// Build from raw pieces; validates monotonicity and finiteness of
    /// coefficients (an infinite *endpoint* is allowed only as the last one
    /// on an infinite domain).
    pub fn new(length: f64, breaks: Vec<f64>, pieces: Vec<Vec<Term>>) -> Result<Self> {
        if !(length > 0.0) || length.is_nan() {
            return Err(Error::NegativeLength(length));
        }
        if breaks.len() != pieces.len() {
            return Err(Error::LengthMismatch { breaks: breaks.len(), vals: pieces.len() });
        }
        let mut prev = 0.0;
        for &b in &breaks {
            if !(b > prev) || b.is_nan() || b > length {
                return Err(Error::NonMonotoneBreakpoints(format!(": bad endpoint {b}")));
            }
            prev = b;
        }
        for terms in &pieces {
            for t in terms {
                if !t.coef.is_finite() || !t.gamma.is_finite() {
                    return Err(Error::NonMonotoneBreakpoints(format!(
                        ": non-finite term {} t^{}",
                        t.coef, t.gamma
                    )));
                }
            }
        }
        let pieces = pieces.into_iter().map(combine).collect();
        Ok(ClosedForm { length, breaks, pieces })
    }

    /// Constant pieces from a signed step function.
    pub fn from_step(f: &StepFunction) -> ClosedForm {
        let mut breaks = Vec::new();
        let mut pieces = Vec::new();
        for p in f.pieces() {
            breaks.push(p.end);
            let v = p.signed();
            pieces.push(if v == 0.0 {
                vec![]
            } else {
                vec![Term { coef: v, gamma: 0.0, logk: 0 }]
            });
        }
        ClosedForm { length: f.domain_length(), breaks, pieces }
    }

    /// Power-step constructor: piece i is coefs[i]·t^exps[i].
    pub fn power_step(length: f64, breaks: &[f64], coefs: &[f64], exps: &[f64]) -> Result<ClosedForm> {
        if coefs.len() != exps.len() {
            return Err(Error::LengthMismatch { breaks: coefs.len(), vals: exps.len() });
        }
        let pieces = coefs
            .iter()
            .zip(exps)
            .map(|(&c, &g)| {
                if c == 0.0 {
                    vec![]
                } else {
                    vec![Term { coef: c, gamma: g, logk: 0 }]
                }
            })
            .collect();
        ClosedForm::new(length, breaks.to_vec(), pieces)
    }

    pub fn domain_length(&self) -> f64 {
        self.length
    }

    /// Right endpoint of the last piece (0 if there are none).
    pub fn support_bound(&self) -> f64 {
        self.breaks.last().copied().unwrap_or(0.0)
    }

    /// (start, end, terms) triples in order.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, &[Term])> + '_ {
        (0..self.breaks.len()).map(move |i| {
            (
                if i == 0 { 0.0 } else { self.breaks[i - 1] },
                self.breaks[i],
                self.pieces[i].as_slice(),
            )
        })
    }

    /// Value at t (right-continuous at endpoints, zero beyond the support).
    pub fn eval(&self, t: f64) -> f64 {
        if t < 0.0 || t >= self.support_bound() {
            return 0.0;
        }
        let i = self.breaks.partition_point(|&b| b <= t);
        eval_terms(&self.pieces[i], t)
    }

    /// True if every piece is a single pure power (or zero); such forms are
    /// closed under products and real powers.
    pub fn is_power_step(&self) -> bool {
        self.pieces.iter().all(|p| p.len() <= 1 && p.iter().all(|t| t.logk == 0))
    }

    /// Exact conversion to a step function when every piece is constant.
    pub fn to_step_exact(&self) -> Option<StepFunction> {
        let mut vals = Vec::new();
        for p in &self.pieces {
            match p.as_slice() {
                [] => vals.push(0.0),
                [t] if t.gamma == 0.0 && t.logk == 0 => vals.push(t.coef),
                _ => return None,
            }
        }
        StepFunction::new(self.length, self.breaks.clone(), vals).ok()
    }

    /// Multiply every piece by c·t^γ (exact).
    pub fn mul_power(&self, c: f64, gamma: f64) -> ClosedForm {
        let pieces = self
            .pieces
            .iter()
            .map(|terms| {
                combine(
                    terms
                        .iter()
                        .map(|t| Term { coef: t.coef * c, gamma: t.gamma + gamma, logk: t.logk })
                        .collect(),
                )
            })
            .collect();
        ClosedForm { length: self.length, breaks: self.breaks.clone(), pieces }
    }

    /// Exact pointwise product of two closed forms on the common refinement:
    /// term lists multiply term-by-term (coefficients multiply, power and log
    /// exponents add), so the family is closed under products.
    pub fn mul_form(&self, other: &ClosedForm) -> Result<ClosedForm> {
        if self.length != other.length {
            return Err(Error::DomainMismatch(format!(
                "domain lengths {} and {} differ",
                self.length, other.length
            )));
        }
        let mut cuts: Vec<f64> = self.breaks.iter().chain(other.breaks.iter()).cloned().collect();
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup();
        let mut pieces = Vec::with_capacity(cuts.len());
        let mut prev = 0.0;
        for &c in &cuts {
            let probe = if c.is_finite() { 0.5 * (prev + c) } else { prev.max(0.5) * 2.0 };
            let a = self.terms_at(probe);
            let b = other.terms_at(probe);
            let mut prod = Vec::with_capacity(a.len() * b.len());
            for x in a {
                for y in b {
                    prod.push(Term {
                        coef: x.coef * y.coef,
                        gamma: x.gamma + y.gamma,
                        logk: x.logk + y.logk,
                    });
                }
            }
            pieces.push(combine(prod));
            prev = c;
        }
        ClosedForm::new(self.length, cuts, pieces)
    }

    /// Exact k-th pointwise power (k ≥ 1) by repeated products.
    pub fn pow_int(&self, k: u32) -> Result<ClosedForm> {
        if k == 0 {
            return Err(Error::UnsupportedFamily("power must be at least 1".into()));
        }
        let mut out = self.clone();
        for _ in 1..k {
            out = out.mul_form(self)?;
        }
        Ok(out)
    }

    fn terms_at(&self, t: f64) -> &[Term] {
        let idx = self.breaks.partition_point(|&b| b <= t);
        if idx < self.pieces.len() {
            &self.pieces[idx]
        } else {
            &[]
        }
    }

    /// Exact pointwise product of two power-steps on the common refinement.
    pub fn mul_power_step(&self, other: &ClosedForm) -> Result<ClosedForm> {
        if !self.is_power_step() || !other.is_power_step() {
            return Err(Error::UnsupportedFamily(
                "exact products need pure power pieces".into(),
            ));
        }
        if self.length != other.length {
            return Err(Error::DomainMismatch(format!(
                "domain lengths {} and {} differ",
                self.length, other.length
            )));
        }
        let t_max = self.support_bound().min(other.support_bound());
        let mut cuts: Vec<f64> = self
            .breaks
            .iter()
            .chain(other.breaks.iter())
            .cloned()
            .filter(|&b| b <= t_max)
            .collect();
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup();
        let mut pieces = Vec::with_capacity(cuts.len());
        let mut prev = 0.0;
        for &c in &cuts {
            let probe = 0.5 * (prev + c);
            let a = self.term_at(probe);
            let b = other.term_at(probe);
            pieces.push(match (a, b) {
                (Some(x), Some(y)) => vec![Term {
                    coef: x.coef * y.coef,
                    gamma: x.gamma + y.gamma,
                    logk: 0,
                }],
                _ => vec![],
            });
            prev = c;
        }
        ClosedForm::new(self.length, cuts, pieces)
    }

    /// Exact |f|^e for a power-step (signs are dropped; e ≠ 0).
    pub fn abs_pow_power_step(&self, e: f64) -> Result<ClosedForm> {
        if !self.is_power_step() {
            return Err(Error::UnsupportedFamily(
                "exact powers need pure power pieces".into(),
            ));
        }
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                p.iter()
                    .map(|t| Term { coef: t.coef.abs().powf(e), gamma: t.gamma * e, logk: 0 })
                    .collect()
            })
            .collect();
        ClosedForm::new(self.length, self.breaks.clone(), pieces)
    }

    fn term_at(&self, t: f64) -> Option<Term> {
        if t < 0.0 || t >= self.support_bound() {
            return None;
        }
        let i = self.breaks.partition_point(|&b| b <= t);
        self.pieces[i].first().copied()
    }

    /// Exact ∫ₐᵇ f dt within one validated call; +∞ if the integral diverges
    /// (divergence can only occur at the endpoints 0 or ∞).
    pub fn integral_on(&self, a: f64, b: f64) -> f64 {
        let b = b.min(self.support_bound());
        if b <= a {
            return 0.0;
        }
        let mut total = 0.0;
        for (s, e, terms) in self.pieces() {
            let lo = s.max(a);
            let hi = e.min(b);
            if hi <= lo || terms.is_empty() {
                continue;
            }
            let anti = antiderivative(terms);
            let upper = if hi.is_infinite() {
                // converges iff every antiderivative term decays
                if anti.iter().all(|t| t.gamma < 0.0 || t.coef == 0.0) {
                    0.0
                } else {
                    return f64::INFINITY;
                }
            } else {
                eval_terms(&anti, hi)
            };
            let lower = if lo == 0.0 {
                match antiderivative_at_origin(&anti) {
                    Some(v) => v,
                    None => return f64::INFINITY,
                }
            } else {
                eval_terms(&anti, lo)
            };
            total += upper - lower;
        }
        total
    }

    /// Exact ∫₀ᴸ f dt (+∞ if divergent).
    pub fn integral(&self) -> f64 {
        self.integral_on(0.0, self.length)
    }

    /// Prefix average (Hf)(t) = (1/t)∫₀ᵗ f(s) ds, exact within the family.
    ///
    /// Requires f integrable at the origin (every first-piece term with
    /// γ > −1); the result carries an explicit M/t tail out to the domain
    /// boundary once f's support ends (M = ∫f).
    pub fn prefix_average(&self) -> Result<ClosedForm> {
        if let Some(first) = self.pieces.first() {
            if first.iter().any(|t| t.gamma <= -1.0) {
                return Err(Error::EvaluableUndefinedAt(0.0));
            }
        }
        let mut breaks = Vec::new();
        let mut pieces: Vec<Vec<Term>> = Vec::new();
        let mut carried = 0.0; // ∫₀^piece-start f
        for (s, e, terms) in self.pieces() {
            let anti = antiderivative(terms);
            let at_start = if s == 0.0 {
                antiderivative_at_origin(&anti).ok_or(Error::EvaluableUndefinedAt(0.0))?
            } else {
                eval_terms(&anti, s)
            };
            // (1/t)(carried − A(s) + A(t)): divide A's terms by t, fold the
            // constant into a t^{-1} monomial.
            let mut out: Vec<Term> = anti
                .iter()
                .map(|t| Term { coef: t.coef, gamma: t.gamma - 1.0, logk: t.logk })
                .collect();
            out.push(Term { coef: carried - at_start, gamma: -1.0, logk: 0 });
            breaks.push(e);
            pieces.push(combine(out));
            if e.is_finite() {
                carried += eval_terms(&anti, e) - at_start;
            } else if anti.iter().all(|t| t.gamma < 0.0 || t.coef == 0.0) {
                carried += 0.0 - at_start;
            } else {
                return Err(Error::EvaluableUndefinedAt(f64::INFINITY));
            }
        }
        // Tail M/t between the support end and the domain boundary.
        let support = self.support_bound();
        if support < self.length && carried != 0.0 {
            breaks.push(self.length);
            pieces.push(vec![Term { coef: carried, gamma: -1.0, logk: 0 }]);
        }
        ClosedForm::new(self.length, breaks, pieces)
    }

    /// Suffix log-integral (H✻f)(t) = ∫ₜᴸ f(s)/s ds, exact within the family.
    ///
    /// Requires convergence at the upper limit (automatic for bounded
    /// support; an explicit infinite tail needs every term with γ < 0).
    /// The result vanishes beyond the support of f — exactly, not merely to
    /// rounding.
    pub fn suffix_log_integral(&self) -> Result<ClosedForm> {
        // Integrand per piece: terms with γ shifted down by one.
        let shifted: Vec<Vec<Term>> = self
            .pieces
            .iter()
            .map(|terms| {
                terms
                    .iter()
                    .map(|t| Term { coef: t.coef, gamma: t.gamma - 1.0, logk: t.logk })
                    .collect::<Vec<_>>()
            })
            .collect();
        // Accumulate piece integrals from the right.
        let n = self.breaks.len();
        let mut suffix = vec![0.0; n + 1]; // ∫_{b_i}^L f/s ds
        for i in (0..n).rev() {
            let s = if i == 0 { 0.0 } else { self.breaks[i - 1] };
            let e = self.breaks[i];
            let anti = antiderivative(&shifted[i]);
            let upper = if e.is_infinite() {
                if anti.iter().all(|t| t.gamma < 0.0 || t.coef == 0.0) {
                    0.0
                } else {
                    return Err(Error::EvaluableUndefinedAt(f64::INFINITY));
                }
            } else {
                eval_terms(&anti, e)
            };
            let lower = if s == 0.0 {
                // value unused below except through per-piece formula; the
                // piece formula handles t > 0, so only finiteness matters here
                0.0
            } else {
                eval_terms(&anti, s)
            };
            suffix[i] = suffix[i + 1] + (upper - lower);
        }
        let mut pieces = Vec::with_capacity(n);
        for i in 0..n {
            let e = self.breaks[i];
            let anti = antiderivative(&shifted[i]);
            // On (s,e): H✻f(t) = suffix[i+1] + A(e) − A(t)
            let upper = if e.is_infinite() { 0.0 } else { eval_terms(&anti, e) };
            let mut out: Vec<Term> =
                anti.iter().map(|t| Term { coef: -t.coef, gamma: t.gamma, logk: t.logk }).collect();
            out.push(Term { coef: suffix[i + 1] + upper, gamma: 0.0, logk: 0 });
            pieces.push(combine(out));
        }
        ClosedForm::new(self.length, self.breaks.clone(), pieces)
    }
}

/// A closed form together with an outer root: g(t) = form(t)^{1/root}.
///
/// This is the natural output of the power-twisted averaging operators
/// (root = 1 means no root is taken). The inner form must be non-negative on
/// its support whenever root ≠ 1.
#[derive(Debug, Clone)]
pub struct Evaluable {
    form: ClosedForm,
    root: f64,
}

impl Evaluable {
    pub fn new(form: ClosedForm, root: f64) -> Self {
        Evaluable { form, root }
    }

    pub fn from_step(f: &StepFunction) -> Self {
        Evaluable { form: ClosedForm::from_step(f), root: 1.0 }
    }

    pub fn form(&self) -> &ClosedForm {
        &self.form
    }

    pub fn root(&self) -> f64 {
        self.root
    }

    pub fn domain_length(&self) -> f64 {
        self.form.length
    }

    pub fn support_bound(&self) -> f64 {
        self.form.support_bound()
    }

    pub fn eval(&self, t: f64) -> f64 {
        let v = self.form.eval(t);
        if self.root == 1.0 {
            v
        } else {
            v.powf(1.0 / self.root)
        }
    }
}
