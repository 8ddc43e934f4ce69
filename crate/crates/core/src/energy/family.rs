use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use super::sample::ComplexMap;
use crate::error::{Error, Result};
use crate::qfield::{parse_rational, Rational};

/// Parses a coefficient `a + b·t`: `"3"`, `"t"`, `"-t"`, `"1/2+3t"`, `"2*t"`.
///
/// ```
/// use adelic::energy::parse_family_coefficient;
/// use adelic::qfield::rat;
///
/// assert_eq!(parse_family_coefficient("1/2-3t").unwrap(), (rat(1, 2), rat(-3, 1)));
/// assert_eq!(parse_family_coefficient("t").unwrap(), (rat(0, 1), rat(1, 1)));
/// ```
pub fn parse_family_coefficient(s: &str) -> Result<(Rational, Rational)> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = s.strip_suffix('t') else {
        return Ok((parse_rational(&s)?, Rational::zero()));
    };
    if body.contains('t') {
        return Err(Error::parse(s.clone(), "the parameter t may appear once"));
    }
    let split = body
        .char_indices()
        .filter(|&(i, c)| i > 0 && (c == '+' || c == '-') && !body[..i].ends_with(['/', 'e', 'E']))
        .map(|(i, _)| i)
        .last()
        .unwrap_or(0);
    let (head, tail) = body.split_at(split);
    let a = if head.is_empty() {
        Rational::zero()
    } else {
        parse_rational(head)?
    };
    let tail = tail.strip_suffix('*').unwrap_or(tail);
    let b = match tail {
        "" | "+" => Rational::one(),
        "-" => -Rational::one(),
        _ => parse_rational(tail)?,
    };
    Ok((a, b))
}

fn to_c(q: &Rational) -> Complex64 {
    Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
}

/// A binary form whose coefficients are affine in one complex parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct FormFamily {
    f0: Vec<(Rational, Rational)>,
    f1: Vec<(Rational, Rational)>,
}

impl FormFamily {
    pub fn parse<S: AsRef<str>>(d: usize, f0: &[S], f1: &[S]) -> Result<Self> {
        if d < 2 || f0.len() != d + 1 || f1.len() != d + 1 {
            return Err(Error::invalid(format!("a degree {d} family needs {} coefficients per form", d + 1)));
        }
        let p = |v: &[S]| {
            v.iter()
                .map(|s| parse_family_coefficient(s.as_ref()))
                .collect::<Result<Vec<_>>>()
        };
        Ok(FormFamily { f0: p(f0)?, f1: p(f1)? })
    }

    pub fn degree(&self) -> usize {
        self.f0.len() - 1
    }

    /// The map at parameter `t`; fails when it is degenerate.
    pub fn at(&self, t: Complex64) -> Result<ComplexMap> {
        let ev = |v: &[(Rational, Rational)]| v.iter().map(|(a, b)| to_c(a) + to_c(b) * t).collect();
        ComplexMap::new(ev(&self.f0), ev(&self.f1))
    }
}

/// A pair of one-parameter families `(f_t, g_t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MapFamily {
    pub f: FormFamily,
    pub g: FormFamily,
}
