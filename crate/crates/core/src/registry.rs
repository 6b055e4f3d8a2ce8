//! Built-in function registry used by the CLI and the property suite.
//!
//! Scalar selectors:
//! - `sin`, `cos`, `exp`, `ln`
//! - `poly:c0,c1,...` for `c0 + c1 t + c2 t² + ...`
//! - `expsum:a` for `e^{a t}`
//! - `outer@inner` for composition, applied right to left
//!
//! Field selectors on `ℝⁿ`:
//! - `sum`, `prod` of all coordinates
//! - `expsum:a` for `e^{a (x1 + ... + xn)}`
//! - `sincos` for `sin(x1) cos(x2)`
//! - `poly2:terms` with terms joined by `+`, e.g. `xy`, `x2`, `-3x2y3`, `0.5`
//! - `x1:<scalar>`, `x2:<scalar>`, ... (`x:` and `y:` for the first two)
//! - `const:c`
//!
//! A vector map is a list of field selectors separated by `;`.

use std::fmt;

use crate::multivariable::VectorMap;
use crate::vector_field::Field2;

/// Error from an unresolvable selector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectorError(pub String);

impl fmt::Display for SelectorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SelectorError {}

fn bad(sel: &str, why: &str) -> SelectorError {
    SelectorError(format!("unknown function selector '{sel}': {why}"))
}

fn number(s: &str, sel: &str) -> Result<f64, SelectorError> {
    let v: f64 = s.trim().parse().map_err(|_| bad(sel, &format!("'{s}' is not a number")))?;
    if !v.is_finite() {
        return Err(bad(sel, "coefficients must be finite"));
    }
    Ok(v)
}

/// One-variable built-in with its exact derivative.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarFn {
    Sin,
    Cos,
    Exp,
    Ln,
    Poly(Vec<f64>),
    ExpSum(f64),
    Compose(Box<ScalarFn>, Box<ScalarFn>),
}

impl ScalarFn {
    pub fn parse(sel: &str) -> Result<Self, SelectorError> {
        let parts: Vec<&str> = sel.split('@').collect();
        let mut parsed = parts.iter().map(|p| ScalarFn::parse_atom(p.trim(), sel));
        let first = parsed.next().expect("split yields at least one piece")?;
        parsed.try_fold(first, |outer, inner| Ok(ScalarFn::Compose(Box::new(outer), Box::new(inner?))))
    }

    fn parse_atom(atom: &str, sel: &str) -> Result<Self, SelectorError> {
        match atom {
            "sin" => return Ok(ScalarFn::Sin),
            "cos" => return Ok(ScalarFn::Cos),
            "exp" => return Ok(ScalarFn::Exp),
            "ln" => return Ok(ScalarFn::Ln),
            _ => {}
        }
        if let Some(rest) = atom.strip_prefix("poly:") {
            let coeffs = rest.split(',').map(|c| number(c, sel)).collect::<Result<Vec<_>, _>>()?;
            return Ok(ScalarFn::Poly(coeffs));
        }
        if let Some(rest) = atom.strip_prefix("expsum:") {
            return Ok(ScalarFn::ExpSum(number(rest, sel)?));
        }
        Err(bad(sel, &format!("'{atom}' is not a registered function")))
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            ScalarFn::Sin => t.sin(),
            ScalarFn::Cos => t.cos(),
            ScalarFn::Exp => t.exp(),
            ScalarFn::Ln => t.ln(),
            ScalarFn::Poly(c) => c.iter().rev().fold(0.0, |acc, &ck| acc * t + ck),
            ScalarFn::ExpSum(a) => (a * t).exp(),
            ScalarFn::Compose(outer, inner) => outer.value(inner.value(t)),
        }
    }

    pub fn deriv(&self, t: f64) -> f64 {
        match self {
            ScalarFn::Sin => t.cos(),
            ScalarFn::Cos => -t.sin(),
            ScalarFn::Exp => t.exp(),
            ScalarFn::Ln => t.recip(),
            ScalarFn::Poly(c) => c
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, &ck)| acc * t + k as f64 * ck),
            ScalarFn::ExpSum(a) => a * (a * t).exp(),
            ScalarFn::Compose(outer, inner) => outer.deriv(inner.value(t)) * inner.deriv(t),
        }
    }
}

/// Monomial `coeff · x^i · y^j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    pub x_pow: i32,
    pub y_pow: i32,
}

fn parse_monomial(term: &str, sel: &str) -> Result<Monomial, SelectorError> {
    let split = term.find(['x', 'y']).unwrap_or(term.len());
    let (head, vars) = term.split_at(split);
    let coeff = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => number(h, sel)?,
    };
    let (mut x_pow, mut y_pow) = (0, 0);
    let mut chars = vars.chars().peekable();
    while let Some(v) = chars.next() {
        let mut digits = String::new();
        while let Some(d) = chars.peek().filter(|c| c.is_ascii_digit()) {
            digits.push(*d);
            chars.next();
        }
        let p: i32 = if digits.is_empty() {
            1
        } else {
            digits.parse().map_err(|_| bad(sel, "bad exponent"))?
        };
        match v {
            'x' => x_pow += p,
            'y' => y_pow += p,
            _ => return Err(bad(sel, &format!("unexpected '{v}' in monomial '{term}'"))),
        }
    }
    Ok(Monomial { coeff, x_pow, y_pow })
}

fn powi_deriv(x: f64, n: i32) -> f64 {
    if n == 0 {
        0.0
    } else {
        n as f64 * x.powi(n - 1)
    }
}

/// Scalar field built-in with its exact gradient.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldFn {
    Sum,
    Prod,
    ExpSum(f64),
    SinCos,
    Poly2(Vec<Monomial>),
    /// Scalar built-in of one coordinate (0-based).
    Coord(usize, ScalarFn),
    Const(f64),
}

impl FieldFn {
    pub fn parse(sel: &str) -> Result<Self, SelectorError> {
        let sel = sel.trim();
        match sel {
            "sum" => return Ok(FieldFn::Sum),
            "prod" => return Ok(FieldFn::Prod),
            "sincos" => return Ok(FieldFn::SinCos),
            _ => {}
        }
        if let Some(rest) = sel.strip_prefix("expsum:") {
            return Ok(FieldFn::ExpSum(number(rest, sel)?));
        }
        if let Some(rest) = sel.strip_prefix("const:") {
            return Ok(FieldFn::Const(number(rest, sel)?));
        }
        if let Some(rest) = sel.strip_prefix("poly2:") {
            let terms = rest
                .split('+')
                .filter(|t| !t.trim().is_empty())
                .map(|t| parse_monomial(t.trim(), sel))
                .collect::<Result<Vec<_>, _>>()?;
            if terms.is_empty() {
                return Err(bad(sel, "poly2 needs at least one term"));
            }
            return Ok(FieldFn::Poly2(terms));
        }
        if let Some((head, inner)) = sel.split_once(':') {
            let axis = match head {
                "x" => Some(0),
                "y" => Some(1),
                h => h
                    .strip_prefix('x')
                    .and_then(|k| k.parse::<usize>().ok())
                    .filter(|&k| k >= 1)
                    .map(|k| k - 1),
            };
            if let Some(axis) = axis {
                return Ok(FieldFn::Coord(axis, ScalarFn::parse(inner)?));
            }
        }
        Err(bad(sel, "not a registered field"))
    }

    /// Smallest input dimension the field is defined on.
    pub fn min_dim(&self) -> usize {
        match self {
            FieldFn::Sum | FieldFn::Prod | FieldFn::ExpSum(_) | FieldFn::Const(_) => 1,
            FieldFn::SinCos => 2,
            FieldFn::Poly2(terms) => {
                if terms.iter().any(|m| m.y_pow != 0) {
                    2
                } else {
                    1
                }
            }
            FieldFn::Coord(axis, _) => axis + 1,
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            FieldFn::Sum => x.iter().sum(),
            FieldFn::Prod => x.iter().product(),
            FieldFn::ExpSum(a) => (a * x.iter().sum::<f64>()).exp(),
            FieldFn::SinCos => x[0].sin() * x[1].cos(),
            FieldFn::Poly2(terms) => {
                let y = x.get(1).copied().unwrap_or(0.0);
                terms.iter().map(|m| m.coeff * x[0].powi(m.x_pow) * y.powi(m.y_pow)).sum()
            }
            FieldFn::Coord(axis, f) => f.value(x[*axis]),
            FieldFn::Const(c) => *c,
        }
    }

    pub fn partial(&self, x: &[f64], axis: usize) -> f64 {
        match self {
            FieldFn::Sum => 1.0,
            FieldFn::Prod => x.iter().enumerate().filter(|(k, _)| *k != axis).map(|(_, v)| v).product(),
            FieldFn::ExpSum(a) => a * (a * x.iter().sum::<f64>()).exp(),
            FieldFn::SinCos => match axis {
                0 => x[0].cos() * x[1].cos(),
                1 => -x[0].sin() * x[1].sin(),
                _ => 0.0,
            },
            FieldFn::Poly2(terms) => {
                let y = x.get(1).copied().unwrap_or(0.0);
                terms
                    .iter()
                    .map(|m| match axis {
                        0 => m.coeff * powi_deriv(x[0], m.x_pow) * y.powi(m.y_pow),
                        1 => m.coeff * x[0].powi(m.x_pow) * powi_deriv(y, m.y_pow),
                        _ => 0.0,
                    })
                    .sum()
            }
            FieldFn::Coord(k, f) => {
                if *k == axis {
                    f.deriv(x[*k])
                } else {
                    0.0
                }
            }
            FieldFn::Const(_) => 0.0,
        }
    }
}

/// A field on the plane with exact first partials.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarField(pub FieldFn);

impl PlanarField {
    pub fn parse(sel: &str) -> Result<Self, SelectorError> {
        let f = FieldFn::parse(sel)?;
        if f.min_dim() > 2 {
            return Err(bad(sel, "field needs more than two coordinates"));
        }
        Ok(PlanarField(f))
    }
}

impl Field2 for PlanarField {
    fn eval(&self, x: f64, y: f64) -> f64 {
        self.0.value(&[x, y])
    }

    fn dx(&self, x: f64, y: f64) -> f64 {
        self.0.partial(&[x, y], 0)
    }

    fn dy(&self, x: f64, y: f64) -> f64 {
        self.0.partial(&[x, y], 1)
    }
}

/// Vector map `ℝⁿ → ℝᵐ` assembled from field selectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MapSelector {
    components: Vec<FieldFn>,
    dim: usize,
}

impl MapSelector {
    /// Components separated by `;`, evaluated on `ℝ^dim`.
    pub fn parse(sel: &str, dim: usize) -> Result<Self, SelectorError> {
        let components = sel.split(';').map(FieldFn::parse).collect::<Result<Vec<_>, _>>()?;
        if let Some(c) = components.iter().find(|c| c.min_dim() > dim) {
            return Err(bad(sel, &format!("component needs {} coordinates, point has {dim}", c.min_dim())));
        }
        Ok(MapSelector { components, dim })
    }

    pub fn components(&self) -> &[FieldFn] {
        &self.components
    }
}

impl VectorMap for MapSelector {
    fn input_dim(&self) -> usize {
        self.dim
    }
    fn output_dim(&self) -> usize {
        self.components.len()
    }
    fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| c.value(x)).collect()
    }
}
