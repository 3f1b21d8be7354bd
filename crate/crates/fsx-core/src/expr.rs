//! Expression grammar for space formulas: a recursive-descent parser, the
//! matching printer, and a JSON form of the AST.
//!
//! ```text
//! expr   := leaf | op "(" expr { "," expr } ")"
//! op     := "M" | "dual" | "prod" | "sym" | "conv" | "Ces" | "Tand" | "sum" | "cap"
//! leaf   := "L" "(" num [ "," num ] [ "," weight ] ")"
//!         | "Lambda" "(" num "," weight ")"
//!         | "Marc" "(" weight ")"
//!         | "L0" | "{0}"
//! weight := "t^" num | named-weight id
//! num    := decimal | "inf"
//! ```
//!
//! `Ces`/`Tand` accept the aliases `Cesaro`/`Tandori` and the sugar
//! `Ces(2)` for `Ces(L(2))`. `conv` takes an expression and a number.
//! Printing a parsed tree reproduces a string that parses to the same tree.

use crate::algebra::{fmt_num, SpaceDescriptor, SpaceExpr};
use crate::error::Error;
use crate::norms::named_weight;
use crate::Result;
use serde_json::{json, Value};
use std::fmt;

impl fmt::Display for SpaceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceExpr::Leaf(d) => write!(f, "{d}"),
            SpaceExpr::Dual(e) => write!(f, "dual({e})"),
            SpaceExpr::Product(a, b) => write!(f, "prod({a}, {b})"),
            SpaceExpr::Multiplier(a, b) => write!(f, "M({a}, {b})"),
            SpaceExpr::Symmetrize(e) => write!(f, "sym({e})"),
            SpaceExpr::Convexify(e, r) => write!(f, "conv({e}, {})", fmt_num(*r)),
            SpaceExpr::Cesaro(e) => write!(f, "Ces({e})"),
            SpaceExpr::Tandori(e) => write!(f, "Tand({e})"),
            SpaceExpr::Sum(a, b) => write!(f, "sum({a}, {b})"),
            SpaceExpr::Intersect(a, b) => write!(f, "cap({a}, {b})"),
        }
    }
}

/// Render an expression in the grammar.
pub fn print_expr(e: &SpaceExpr) -> String {
    e.to_string()
}

/// Parse a space formula. Errors carry the byte offset of the failure.
pub fn parse_expr(input: &str) -> Result<SpaceExpr> {
    let mut p = Parser { src: input.as_bytes(), pos: 0, input };
    let e = p.expr()?;
    p.ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input after a complete expression"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    input: &'a str,
}

/// Power or named weight, as parsed.
enum ParsedWeight {
    Power(f64),
    Named(String),
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { at: self.pos, msg: msg.into() }
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        self.ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", b as char)))
        }
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        &self.input[start..self.pos]
    }

    /// Decimal or "inf".
    fn number(&mut self) -> Result<f64> {
        self.ws();
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => {
                let at = self.pos;
                let id = self.ident();
                if id == "inf" {
                    Ok(f64::INFINITY)
                } else {
                    Err(Error::Parse {
                        at,
                        msg: format!("expected a number or 'inf', found '{id}'"),
                    })
                }
            }
            Some(c) if c.is_ascii_digit() || c == b'-' || c == b'.' => {
                let start = self.pos;
                if c == b'-' {
                    self.pos += 1;
                }
                let mut seen_dot = false;
                let mut seen_exp = false;
                while let Some(d) = self.peek() {
                    match d {
                        b'0'..=b'9' => self.pos += 1,
                        b'.' if !seen_dot && !seen_exp => {
                            seen_dot = true;
                            self.pos += 1;
                        }
                        b'e' | b'E' if !seen_exp => {
                            seen_exp = true;
                            self.pos += 1;
                            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                                self.pos += 1;
                            }
                        }
                        _ => break,
                    }
                }
                let text = &self.input[start..self.pos];
                text.parse::<f64>().map_err(|_| Error::Parse {
                    at: start,
                    msg: format!("malformed number '{text}'"),
                })
            }
            _ => Err(self.err("expected a number")),
        }
    }

    /// "t^" num or a registered named weight.
    fn weight(&mut self) -> Result<ParsedWeight> {
        self.ws();
        let at = self.pos;
        if !matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
            return Err(self.err("expected a weight: t^<num> or a named weight"));
        }
        let id = self.ident();
        if id == "t" {
            if self.peek() == Some(b'^') {
                self.pos += 1;
                Ok(ParsedWeight::Power(self.number()?))
            } else {
                Err(self.err("expected '^' after 't' in a power weight"))
            }
        } else if named_weight(id).is_some() {
            Ok(ParsedWeight::Named(id.to_string()))
        } else {
            Err(Error::Parse {
                at,
                msg: format!("unknown named weight '{id}' (known: exp, boundary)"),
            })
        }
    }

    fn expr(&mut self) -> Result<SpaceExpr> {
        self.ws();
        match self.peek() {
            Some(b'{') => {
                let at = self.pos;
                if self.input[self.pos..].starts_with("{0}") {
                    self.pos += 3;
                    Ok(SpaceExpr::Leaf(SpaceDescriptor::Zero))
                } else {
                    Err(Error::Parse { at, msg: "expected the zero space '{0}'".into() })
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let at = self.pos;
                let id = self.ident().to_string();
                match id.as_str() {
                    "L0" => Ok(SpaceExpr::Leaf(SpaceDescriptor::MeasurableAll)),
                    "L" => self.l_leaf(),
                    "Lambda" => self.lambda_leaf(),
                    "Marc" => self.marc_leaf(),
                    "dual" => Ok(SpaceExpr::Dual(Box::new(self.unary()?))),
                    "sym" => Ok(SpaceExpr::Symmetrize(Box::new(self.unary()?))),
                    "prod" => {
                        let (a, b) = self.binary()?;
                        Ok(SpaceExpr::Product(Box::new(a), Box::new(b)))
                    }
                    "M" => {
                        let (a, b) = self.binary()?;
                        Ok(SpaceExpr::Multiplier(Box::new(a), Box::new(b)))
                    }
                    "sum" => {
                        let (a, b) = self.binary()?;
                        Ok(SpaceExpr::Sum(Box::new(a), Box::new(b)))
                    }
                    "cap" => {
                        let (a, b) = self.binary()?;
                        Ok(SpaceExpr::Intersect(Box::new(a), Box::new(b)))
                    }
                    "conv" => {
                        self.expect(b'(')?;
                        let e = self.expr()?;
                        self.expect(b',')?;
                        let r = self.number()?;
                        self.expect(b')')?;
                        Ok(SpaceExpr::Convexify(Box::new(e), r))
                    }
                    "Ces" | "Cesaro" => Ok(SpaceExpr::Cesaro(Box::new(self.transform_arg()?))),
                    "Tand" | "Tandori" => {
                        Ok(SpaceExpr::Tandori(Box::new(self.transform_arg()?)))
                    }
                    _ => Err(Error::Parse {
                        at,
                        msg: format!(
                            "unknown operator or leaf '{id}' (expected one of: L, Lambda, \
                             Marc, L0, {{0}}, M, dual, prod, sym, conv, Ces, Tand, sum, cap)"
                        ),
                    }),
                }
            }
            Some(c) => Err(self.err(format!("unexpected character '{}'", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn unary(&mut self) -> Result<SpaceExpr> {
        self.expect(b'(')?;
        let e = self.expr()?;
        self.expect(b')')?;
        Ok(e)
    }

    fn binary(&mut self) -> Result<(SpaceExpr, SpaceExpr)> {
        self.expect(b'(')?;
        let a = self.expr()?;
        self.expect(b',')?;
        let b = self.expr()?;
        self.expect(b')')?;
        Ok((a, b))
    }

    /// Ces/Tand argument: a full expression, or the numeric sugar
    /// Ces(2) = Ces(L(2)).
    fn transform_arg(&mut self) -> Result<SpaceExpr> {
        self.expect(b'(')?;
        self.ws();
        let e = match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let p = self.number()?;
                SpaceExpr::Leaf(SpaceDescriptor::lebesgue(p))
            }
            _ => self.expr()?,
        };
        self.expect(b')')?;
        Ok(e)
    }

    fn l_leaf(&mut self) -> Result<SpaceExpr> {
        self.expect(b'(')?;
        let p = self.number()?;
        self.ws();
        let leaf = match self.peek() {
            Some(b')') => SpaceDescriptor::lebesgue(p),
            Some(b',') => {
                self.pos += 1;
                self.ws();
                match self.peek() {
                    // second number: a classical Lorentz pair
                    Some(c) if c.is_ascii_digit() || c == b'-' || c == b'.' => {
                        SpaceDescriptor::Lorentz { p, q: self.number()? }
                    }
                    Some(c) if c.is_ascii_alphabetic() => {
                        // "inf" is a number, anything else parses as a weight
                        let save = self.pos;
                        let id = self.ident();
                        if id == "inf" {
                            SpaceDescriptor::Lorentz { p, q: f64::INFINITY }
                        } else {
                            self.pos = save;
                            match self.weight()? {
                                ParsedWeight::Power(alpha) => {
                                    SpaceDescriptor::Lebesgue { p, alpha }
                                }
                                ParsedWeight::Named(name) => {
                                    SpaceDescriptor::LebesgueNamed { p, name }
                                }
                            }
                        }
                    }
                    _ => return Err(self.err("expected a second index or a weight")),
                }
            }
            _ => return Err(self.err("expected ',' or ')' in an L(...) leaf")),
        };
        self.expect(b')')?;
        Ok(SpaceExpr::Leaf(leaf))
    }

    fn lambda_leaf(&mut self) -> Result<SpaceExpr> {
        self.expect(b'(')?;
        let p = self.number()?;
        self.expect(b',')?;
        let at = self.pos;
        let alpha = match self.weight()? {
            ParsedWeight::Power(alpha) => alpha,
            ParsedWeight::Named(name) => {
                return Err(Error::Parse {
                    at,
                    msg: format!("Lambda supports power weights only, got '{name}'"),
                })
            }
        };
        self.expect(b')')?;
        Ok(SpaceExpr::Leaf(SpaceDescriptor::Lambda { p, alpha }))
    }

    fn marc_leaf(&mut self) -> Result<SpaceExpr> {
        self.expect(b'(')?;
        let at = self.pos;
        let alpha = match self.weight()? {
            ParsedWeight::Power(alpha) => alpha,
            ParsedWeight::Named(name) => {
                return Err(Error::Parse {
                    at,
                    msg: format!("Marc supports power weights only, got '{name}'"),
                })
            }
        };
        self.expect(b')')?;
        Ok(SpaceExpr::Leaf(SpaceDescriptor::Marcinkiewicz { alpha }))
    }
}

fn json_num(x: f64) -> Value {
    if x.is_infinite() {
        json!("inf")
    } else {
        json!(x)
    }
}

/// Structured JSON form of a descriptor (infinite indices encode as "inf").
pub fn descriptor_to_json(d: &SpaceDescriptor) -> Value {
    match d {
        SpaceDescriptor::Zero => json!({ "family": "zero" }),
        SpaceDescriptor::MeasurableAll => json!({ "family": "measurable" }),
        SpaceDescriptor::Lebesgue { p, alpha } => {
            json!({ "family": "lebesgue", "p": json_num(*p), "alpha": json_num(*alpha) })
        }
        SpaceDescriptor::LebesgueNamed { p, name } => {
            json!({ "family": "lebesgue", "p": json_num(*p), "weight": name })
        }
        SpaceDescriptor::Lorentz { p, q } => {
            json!({ "family": "lorentz", "p": json_num(*p), "q": json_num(*q) })
        }
        SpaceDescriptor::Lambda { p, alpha } => {
            json!({ "family": "lambda", "p": json_num(*p), "alpha": json_num(*alpha) })
        }
        SpaceDescriptor::Marcinkiewicz { alpha } => {
            json!({ "family": "marcinkiewicz", "alpha": json_num(*alpha) })
        }
        SpaceDescriptor::Cesaro(inner) => {
            json!({ "family": "cesaro", "inner": descriptor_to_json(inner) })
        }
        SpaceDescriptor::Tandori(inner) => {
            json!({ "family": "tandori", "inner": descriptor_to_json(inner) })
        }
    }
}

/// Structured JSON form of an expression tree.
pub fn expr_to_json(e: &SpaceExpr) -> Value {
    let op = |name: &str, args: Vec<Value>| json!({ "op": name, "args": args });
    match e {
        SpaceExpr::Leaf(d) => json!({ "leaf": descriptor_to_json(d), "text": d.to_string() }),
        SpaceExpr::Dual(a) => op("dual", vec![expr_to_json(a)]),
        SpaceExpr::Product(a, b) => op("prod", vec![expr_to_json(a), expr_to_json(b)]),
        SpaceExpr::Multiplier(a, b) => op("M", vec![expr_to_json(a), expr_to_json(b)]),
        SpaceExpr::Symmetrize(a) => op("sym", vec![expr_to_json(a)]),
        SpaceExpr::Convexify(a, r) => {
            json!({ "op": "conv", "args": [expr_to_json(a)], "r": json_num(*r) })
        }
        SpaceExpr::Cesaro(a) => op("Ces", vec![expr_to_json(a)]),
        SpaceExpr::Tandori(a) => op("Tand", vec![expr_to_json(a)]),
        SpaceExpr::Sum(a, b) => op("sum", vec![expr_to_json(a), expr_to_json(b)]),
        SpaceExpr::Intersect(a, b) => op("cap", vec![expr_to_json(a), expr_to_json(b)]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const INF: f64 = f64::INFINITY;

    fn parse_ok(s: &str) -> SpaceExpr {
        parse_expr(s).unwrap_or_else(|e| panic!("parse of '{s}' failed: {e}"))
    }

    #[test]
    fn leaves_parse_to_descriptors() {
        assert_eq!(
            parse_ok("L(2)").as_leaf().unwrap(),
            &SpaceDescriptor::lebesgue(2.0)
        );
        assert_eq!(
            parse_ok("L(inf)").as_leaf().unwrap(),
            &SpaceDescriptor::lebesgue(INF)
        );
        assert_eq!(
            parse_ok("L(2, 1)").as_leaf().unwrap(),
            &SpaceDescriptor::lorentz(2.0, 1.0)
        );
        assert_eq!(
            parse_ok("L(2, inf)").as_leaf().unwrap(),
            &SpaceDescriptor::lorentz(2.0, INF)
        );
        assert_eq!(
            parse_ok("L(2, t^-0.25)").as_leaf().unwrap(),
            &SpaceDescriptor::lebesgue_power(2.0, -0.25)
        );
        assert_eq!(
            parse_ok("L(1, exp)").as_leaf().unwrap(),
            &SpaceDescriptor::LebesgueNamed { p: 1.0, name: "exp".into() }
        );
        assert_eq!(
            parse_ok("Lambda(2, t^0.5)").as_leaf().unwrap(),
            &SpaceDescriptor::Lambda { p: 2.0, alpha: 0.5 }
        );
        assert_eq!(
            parse_ok("Marc(t^0.5)").as_leaf().unwrap(),
            &SpaceDescriptor::Marcinkiewicz { alpha: 0.5 }
        );
        assert_eq!(parse_ok("{0}").as_leaf().unwrap(), &SpaceDescriptor::Zero);
        assert_eq!(parse_ok("L0").as_leaf().unwrap(), &SpaceDescriptor::MeasurableAll);
    }

    #[test]
    fn operators_and_sugar() {
        let e = parse_ok("M(Ces(3), Ces(2))");
        assert_eq!(
            e,
            SpaceExpr::Multiplier(
                Box::new(SpaceExpr::Cesaro(Box::new(SpaceExpr::leaf(
                    SpaceDescriptor::lebesgue(3.0)
                )))),
                Box::new(SpaceExpr::Cesaro(Box::new(SpaceExpr::leaf(
                    SpaceDescriptor::lebesgue(2.0)
                )))),
            )
        );
        // aliases and the full form agree with the sugar
        assert_eq!(parse_ok("Cesaro(L(3))"), parse_ok("Ces(3)"));
        assert_eq!(parse_ok("Tandori(L(6))"), parse_ok("Tand(6)"));
        let e = parse_ok("conv(L(2, 1), 2)");
        assert_eq!(
            e,
            SpaceExpr::Convexify(
                Box::new(SpaceExpr::leaf(SpaceDescriptor::lorentz(2.0, 1.0))),
                2.0
            )
        );
        assert!(matches!(parse_ok("dual(sym(L(4, t^0.1)))"), SpaceExpr::Dual(_)));
        assert!(matches!(parse_ok("sum(L(1), L(2))"), SpaceExpr::Sum(_, _)));
        assert!(matches!(parse_ok("cap(L(1), L(2))"), SpaceExpr::Intersect(_, _)));
        assert!(matches!(parse_ok("prod(L(4), L(4))"), SpaceExpr::Product(_, _)));
        // whitespace is free
        assert_eq!(parse_ok(" M( L(2,1) ,L( 2 ) ) "), parse_ok("M(L(2, 1), L(2))"));
    }

    #[test]
    fn print_round_trips_spec_examples() {
        for s in [
            "M(Ces(L(3)), Ces(L(2)))",
            "dual(L(3, 2))",
            "prod(L(4), L(4))",
            "sym(L(2, t^0.5))",
            "conv(L(2, 1), 2)",
            "Tand(L(6))",
            "cap(L(1), L(inf))",
            "sum(Lambda(2, t^0.5), Marc(t^0.5))",
            "M(L(2, 1), L(2))",
            "L(1, exp)",
            "{0}",
            "L0",
        ] {
            let e = parse_ok(s);
            let printed = print_expr(&e);
            let e2 = parse_ok(&printed);
            assert_eq!(e, e2, "round trip of '{s}' via '{printed}'");
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let cases: &[(&str, &str)] = &[
            ("", "end of input"),
            ("L(2", "expected"),
            ("bogus(3)", "unknown operator"),
            ("L(2, w^3)", "unknown named weight"),
            ("Marc(exp)", "power weights only"),
            ("L(2) L(3)", "trailing input"),
            ("M(L(2))", "expected ','"),
            ("L(two)", "expected a number"),
            ("{1}", "zero space"),
        ];
        for (input, needle) in cases {
            match parse_expr(input) {
                Err(Error::Parse { at, msg }) => {
                    assert!(
                        msg.contains(needle),
                        "'{input}': message '{msg}' missing '{needle}'"
                    );
                    assert!(at <= input.len());
                }
                Err(other) => panic!("'{input}': wrong error kind {other}"),
                Ok(e) => panic!("'{input}' unexpectedly parsed to {e}"),
            }
        }
    }

    #[test]
    fn json_ast_shape() {
        let e = parse_ok("M(L(2, 1), L(inf))");
        let v = expr_to_json(&e);
        assert_eq!(v["op"], "M");
        assert_eq!(v["args"][0]["leaf"]["family"], "lorentz");
        assert_eq!(v["args"][1]["leaf"]["p"], "inf");
        let d = descriptor_to_json(&SpaceDescriptor::ces(SpaceDescriptor::lebesgue(2.0)));
        assert_eq!(d["family"], "cesaro");
        assert_eq!(d["inner"]["family"], "lebesgue");
    }

    fn arb_index() -> impl Strategy<Value = f64> {
        prop_oneof![
            Just(0.5),
            Just(1.0),
            Just(1.5),
            Just(2.0),
            Just(3.0),
            Just(6.0),
            Just(INF)
        ]
    }

    fn arb_alpha() -> impl Strategy<Value = f64> {
        prop_oneof![Just(-0.75), Just(-0.5), Just(-0.25), Just(0.25), Just(0.5), Just(1.5)]
    }

    fn arb_leaf() -> impl Strategy<Value = SpaceExpr> {
        prop_oneof![
            Just(SpaceExpr::Leaf(SpaceDescriptor::Zero)),
            Just(SpaceExpr::Leaf(SpaceDescriptor::MeasurableAll)),
            arb_index().prop_map(|p| SpaceExpr::Leaf(SpaceDescriptor::lebesgue(p))),
            (arb_index(), arb_alpha())
                .prop_map(|(p, a)| SpaceExpr::Leaf(SpaceDescriptor::Lebesgue { p, alpha: a })),
            (arb_index(), arb_index())
                .prop_map(|(p, q)| SpaceExpr::Leaf(SpaceDescriptor::Lorentz { p, q })),
            (arb_index(), arb_alpha())
                .prop_map(|(p, a)| SpaceExpr::Leaf(SpaceDescriptor::Lambda { p, alpha: a })),
            arb_alpha()
                .prop_map(|a| SpaceExpr::Leaf(SpaceDescriptor::Marcinkiewicz { alpha: a })),
            (arb_index(), prop_oneof![Just("exp"), Just("boundary")]).prop_map(|(p, n)| {
                SpaceExpr::Leaf(SpaceDescriptor::LebesgueNamed { p, name: n.into() })
            }),
        ]
    }

    fn arb_expr() -> impl Strategy<Value = SpaceExpr> {
        arb_leaf().prop_recursive(4, 32, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| SpaceExpr::Dual(Box::new(e))),
                inner.clone().prop_map(|e| SpaceExpr::Symmetrize(Box::new(e))),
                (inner.clone(), prop_oneof![Just(0.5), Just(2.0), Just(3.0)])
                    .prop_map(|(e, r)| SpaceExpr::Convexify(Box::new(e), r)),
                inner.clone().prop_map(|e| SpaceExpr::Cesaro(Box::new(e))),
                inner.clone().prop_map(|e| SpaceExpr::Tandori(Box::new(e))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| SpaceExpr::Product(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| SpaceExpr::Multiplier(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| SpaceExpr::Sum(Box::new(a), Box::new(b))),
                (inner.clone(), inner)
                    .prop_map(|(a, b)| SpaceExpr::Intersect(Box::new(a), Box::new(b))),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_identity(e in arb_expr()) {
            let printed = print_expr(&e);
            let parsed = parse_expr(&printed)
                .unwrap_or_else(|err| panic!("'{printed}' failed: {err}"));
            prop_assert_eq!(&parsed, &e, "printed form: {}", printed);
            // printing is a fixed point after one round
            prop_assert_eq!(print_expr(&parsed), printed);
        }
    }
}
