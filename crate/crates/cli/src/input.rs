//! Complex literals and the textual descriptors of built-in test functions.

use std::str::FromStr;
use std::sync::Arc;

use rcgen_core::contour::DomainDesc;
use rcgen_core::hardy::ExpLift;
use rcgen_core::holo::{Holo2, UniFn};
use rcgen_core::numerics::{BiPoly, UniPoly, C};
use rcgen_core::pde::EigenFamily;

use crate::CliError;

/// Parses `a+bi`, `a-bi`, `a`, `bi`, `i` and `-i`, with optional signs and exponents.
pub fn parse_complex(text: &str) -> Result<C, CliError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CliError::Parse(format!("invalid complex literal {text:?}; expected a+bi"));
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return s.parse::<f64>().map(|re| C::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not the leading one or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag_of = |part: &str| -> Result<f64, CliError> {
        match part {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            p => p.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(C::new(re, imag_of(&body[k..])?))
        }
        None => Ok(C::new(0.0, imag_of(body)?)),
    }
}

/// Built-in test function named on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    /// `const c`
    Const(C),
    /// `poly i,j:c ...`, whitespace-separated monomials `c ζ1^i ζ2^j`.
    Poly(Vec<(usize, usize, C)>),
    /// `f_ell l`
    FEll(usize),
    /// `separable p1;p2`, each a comma-separated coefficient list in ascending degree.
    Separable(Vec<C>, Vec<C>),
    /// `exp-profile rate [l]`: `F̃(e^{−rate·s} P_l)` on the upper half-plane.
    ExpProfile { rate: f64, l: usize },
}

impl FromStr for FunctionSpec {
    type Err = CliError;

    fn from_str(text: &str) -> Result<Self, CliError> {
        let text = text.trim();
        let (kind, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let rest = rest.trim();
        let parse_int = |s: &str, what: &str| {
            s.parse::<usize>()
                .map_err(|_| CliError::Parse(format!("{what} expects a non-negative integer, got {s:?}")))
        };
        match kind {
            "const" => Ok(Self::Const(parse_complex(rest)?)),
            "poly" => {
                if rest.is_empty() {
                    return Err(CliError::Parse("poly needs at least one term i,j:c".into()));
                }
                rest.split_whitespace().map(parse_term).collect::<Result<_, _>>().map(Self::Poly)
            }
            "f_ell" => Ok(Self::FEll(parse_int(rest, "f_ell")?)),
            "separable" => {
                let (a, b) = rest
                    .split_once(';')
                    .ok_or_else(|| CliError::Parse("separable expects two coefficient lists p1;p2".into()))?;
                Ok(Self::Separable(parse_list(a)?, parse_list(b)?))
            }
            "exp-profile" => {
                let mut parts = rest.split_whitespace();
                let rate = parts
                    .next()
                    .and_then(|r| r.parse::<f64>().ok())
                    .filter(|r| *r > 0.0)
                    .ok_or_else(|| CliError::Parse("exp-profile expects a positive rate".into()))?;
                let l = parts.next().map(|s| parse_int(s, "exp-profile")).transpose()?.unwrap_or(0);
                if parts.next().is_some() {
                    return Err(CliError::Parse("exp-profile takes at most a rate and a degree".into()));
                }
                Ok(Self::ExpProfile { rate, l })
            }
            other => Err(CliError::Parse(format!(
                "unknown function kind {other:?}; expected const, poly, f_ell, separable or exp-profile"
            ))),
        }
    }
}

fn parse_term(term: &str) -> Result<(usize, usize, C), CliError> {
    let bad = || CliError::Parse(format!("invalid poly term {term:?}; expected i,j:c"));
    let (idx, coeff) = term.split_once(':').ok_or_else(bad)?;
    let (i, j) = idx.split_once(',').ok_or_else(bad)?;
    Ok((i.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?, parse_complex(coeff)?))
}

fn parse_list(list: &str) -> Result<Vec<C>, CliError> {
    let coeffs = list.split(',').map(parse_complex).collect::<Result<Vec<_>, _>>()?;
    Ok(coeffs)
}

impl FunctionSpec {
    pub fn build(&self) -> Result<Holo2, CliError> {
        let plane = DomainDesc::EntirePlane;
        Ok(match self {
            Self::Const(c) => Holo2::constant(plane, *c),
            Self::Poly(terms) => Holo2::polynomial(plane, BiPoly::from_terms(terms.iter().copied())),
            Self::FEll(l) => EigenFamily::new(*l).holo(),
            Self::Separable(a, b) => {
                let f1: Arc<dyn UniFn> = Arc::new(UniPoly::new(a.clone()));
                let f2: Arc<dyn UniFn> = Arc::new(UniPoly::new(b.clone()));
                Holo2::separable(plane, f1, f2)
            }
            Self::ExpProfile { rate, l } => ExpLift::legendre(*rate, *l)?.holo(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        let cases = [
            ("0+2i", C::new(0.0, 2.0)),
            ("1-1i", C::new(1.0, -1.0)),
            ("-0.5", C::new(-0.5, 0.0)),
            ("i", C::new(0.0, 1.0)),
            ("-i", C::new(0.0, -1.0)),
            ("+3i", C::new(0.0, 3.0)),
            ("1e-3+2.5E2i", C::new(1e-3, 250.0)),
            ("-1e+2-1e-2i", C::new(-100.0, -0.01)),
            (" 1 + 2i ", C::new(1.0, 2.0)),
        ];
        for (text, want) in cases {
            assert_eq!(parse_complex(text).unwrap(), want, "{text}");
        }
        for bad in ["", "1+", "2ii", "abc", "1+2i+3i"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn function_descriptors() {
        assert_eq!("const 1".parse::<FunctionSpec>().unwrap(), FunctionSpec::Const(C::new(1.0, 0.0)));
        assert_eq!("f_ell 3".parse::<FunctionSpec>().unwrap(), FunctionSpec::FEll(3));
        assert_eq!(
            "poly 1,1:1 0,2:-0.5+1i".parse::<FunctionSpec>().unwrap(),
            FunctionSpec::Poly(vec![(1, 1, C::new(1.0, 0.0)), (0, 2, C::new(-0.5, 1.0))])
        );
        assert_eq!(
            "separable 1,0,2;0,1".parse::<FunctionSpec>().unwrap(),
            FunctionSpec::Separable(
                vec![C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(2.0, 0.0)],
                vec![C::new(0.0, 0.0), C::new(1.0, 0.0)]
            )
        );
        assert_eq!(
            "exp-profile 1.5 2".parse::<FunctionSpec>().unwrap(),
            FunctionSpec::ExpProfile { rate: 1.5, l: 2 }
        );
        for bad in ["", "poly", "poly 1:1", "f_ell -1", "separable 1,2", "exp-profile -1", "sine 2"] {
            assert!(bad.parse::<FunctionSpec>().is_err(), "{bad}");
        }
    }
}
