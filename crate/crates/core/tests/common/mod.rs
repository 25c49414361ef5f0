//! Shared test support: a tiny arithmetic interpreter for re-evaluating
//! echoed report formulas, and brute-force oracles kept independent of the
//! implementation paths they check.

#![allow(dead_code)]

use rt_core::BitGraph;
use std::collections::BTreeMap;

// ---------------------------------------------------------------------------
// Formula interpreter: + - * / ^, parentheses, variables, exp/ln/sqrt.
// ---------------------------------------------------------------------------

pub fn eval_formula(src: &str, vars: &BTreeMap<String, f64>) -> Result<f64, String> {
    let tokens = tokenize(src)?;
    let mut parser = Parser { tokens, pos: 0, vars };
    let value = parser.expression()?;
    if parser.pos != parser.tokens.len() {
        return Err(format!("trailing input at token {}", parser.pos));
    }
    Ok(value)
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
}

fn tokenize(src: &str) -> Result<Vec<Token>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '(' => {
                out.push(Token::Open);
                i += 1;
            }
            ')' => {
                out.push(Token::Close);
                i += 1;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Token::Number(
                    text.parse().map_err(|e| format!("bad number {text}: {e}"))?,
                ));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(format!("unexpected character {other:?}")),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a BTreeMap<String, f64>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, tok: &Token) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expression(&mut self) -> Result<f64, String> {
        let mut value = self.term()?;
        loop {
            if self.eat(&Token::Plus) {
                value += self.term()?;
            } else if self.eat(&Token::Minus) {
                value -= self.term()?;
            } else {
                return Ok(value);
            }
        }
    }

    fn term(&mut self) -> Result<f64, String> {
        let mut value = self.unary()?;
        loop {
            if self.eat(&Token::Star) {
                value *= self.unary()?;
            } else if self.eat(&Token::Slash) {
                value /= self.unary()?;
            } else {
                return Ok(value);
            }
        }
    }

    fn unary(&mut self) -> Result<f64, String> {
        if self.eat(&Token::Minus) {
            Ok(-self.unary()?)
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<f64, String> {
        let base = self.atom()?;
        if self.eat(&Token::Caret) {
            let exponent = self.unary()?;
            Ok(base.powf(exponent))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<f64, String> {
        match self.peek().cloned() {
            Some(Token::Number(x)) => {
                self.pos += 1;
                Ok(x)
            }
            Some(Token::Open) => {
                self.pos += 1;
                let value = self.expression()?;
                if !self.eat(&Token::Close) {
                    return Err("missing closing parenthesis".into());
                }
                Ok(value)
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                if self.eat(&Token::Open) {
                    let arg = self.expression()?;
                    if !self.eat(&Token::Close) {
                        return Err(format!("missing closing parenthesis after {name}"));
                    }
                    match name.as_str() {
                        "exp" => Ok(arg.exp()),
                        "ln" => Ok(arg.ln()),
                        "sqrt" => Ok(arg.sqrt()),
                        other => Err(format!("unknown function {other}")),
                    }
                } else {
                    self.vars
                        .get(&name)
                        .copied()
                        .ok_or_else(|| format!("unbound variable {name}"))
                }
            }
            other => Err(format!("unexpected token {other:?}")),
        }
    }
}

/// Re-evaluates every item of a report with the interpreter and checks the
/// echoed value to 1e-12 relative accuracy.
pub fn assert_report_reevaluates(report: &rt_core::report::BoundReport, label: &str) {
    for item in &report.items {
        let reevaluated = eval_formula(&item.formula, &item.inputs)
            .unwrap_or_else(|e| panic!("{label}/{}: {e}", item.name));
        let scale = item.value.abs().max(1e-300);
        assert!(
            (reevaluated - item.value).abs() <= 1e-12 * scale,
            "{label}/{}: formula gives {reevaluated}, report says {}",
            item.name,
            item.value
        );
    }
}

// ---------------------------------------------------------------------------
// Brute-force oracles
// ---------------------------------------------------------------------------

/// Maximum independent set by exhaustive enumeration of all 2^n subsets
/// (DP over masks: a set is independent iff its lowest vertex has no
/// neighbor in the rest and the rest is independent).
pub fn brute_mis(g: &BitGraph) -> usize {
    let n = g.n();
    assert!(n <= 22, "exhaustive enumeration is for small n");
    if n == 0 {
        return 0;
    }
    let adj_masks: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, w| m | 1 << w))
        .collect();
    let mut independent = vec![false; 1usize << n];
    independent[0] = true;
    let mut best = 0;
    for mask in 1u32..(1u32 << n) {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let ok = independent[rest as usize] && (adj_masks[v] & rest) == 0;
        independent[mask as usize] = ok;
        if ok {
            best = best.max(mask.count_ones() as usize);
        }
    }
    best
}

#[cfg(test)]
mod self_tests {
    use super::*;

    #[test]
    fn interpreter_handles_the_report_vocabulary() {
        let vars: BTreeMap<String, f64> =
            [("n".to_string(), 100.0), ("delta".to_string(), 0.25)].into();
        let v = eval_formula("(n^2/8)*(1 + 48*delta^2 - 8/n - 128*delta^3)", &vars).unwrap();
        assert!((v - 100.0 * 100.0 / 8.0 * 1.92).abs() < 1e-9);
        let v = eval_formula("2*n*exp(-sqrt(n)/4)", &vars).unwrap();
        assert!((v - 200.0 * (-2.5f64).exp()).abs() < 1e-12);
        let v = eval_formula("ln(ln(n))/ln(n)", &vars).unwrap();
        assert!((v - (100.0f64).ln().ln() / (100.0f64).ln()).abs() < 1e-15);
        assert!(eval_formula("q + 1", &vars).is_err());
        assert!(eval_formula("(n", &vars).is_err());
    }
}
