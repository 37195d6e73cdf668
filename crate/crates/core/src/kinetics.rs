//! Mass-action kinetics: potentials `p(r) = Π X(s)^A(r,s)`, fluxes
//! `J(r) = K(r)·p(r)` and the vector field `Ẋ = N·J`.
//!
//! Evaluation is generic over [`Scalar`]: rational inputs give exact
//! rational outputs, floating inputs give floating outputs. Units are
//! whatever the caller uses consistently.

use std::fmt::{self, Debug};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::network::ReactionNetwork;
use crate::zmodule::IntegerMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KineticsError {
    #[error("expected {expected} {what}, got {found}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("concentration of `{0}` is negative")]
    NegativeConcentration(String),
    #[error("rate constant of `{0}` must be positive")]
    NonPositiveRate(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: `{name}` is neither a species nor a reaction")]
    UnknownName { line: usize, name: String },
    #[error("line {line}: `{name}` names both a species and a reaction")]
    AmbiguousName { line: usize, name: String },
    #[error("line {line}: `{name}` assigned twice")]
    Reassigned { line: usize, name: String },
    #[error("no value given for {kind} `{name}`")]
    Missing { kind: &'static str, name: String },
}

/// Field-like numbers the kinetics can be evaluated in.
pub trait Scalar: Clone + Debug + PartialOrd + Signed {
    fn from_int(v: i64) -> Self;
}

impl Scalar for f64 {
    fn from_int(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

fn pow<T: Scalar>(x: &T, e: u64) -> T {
    (0..e).fold(T::one(), |acc, _| acc * x.clone())
}

/// Concentrations per species and rate constants per reaction.
#[derive(Debug, Clone, PartialEq)]
pub struct KineticState<T> {
    concentrations: Vec<T>,
    rates: Vec<T>,
}

impl<T: Scalar> KineticState<T> {
    pub fn new(net: &ReactionNetwork, concentrations: Vec<T>, rates: Vec<T>) -> Result<Self, KineticsError> {
        if concentrations.len() != net.num_species() {
            return Err(KineticsError::Dimension {
                what: "concentrations",
                expected: net.num_species(),
                found: concentrations.len(),
            });
        }
        if rates.len() != net.num_reactions() {
            return Err(KineticsError::Dimension {
                what: "rate constants",
                expected: net.num_reactions(),
                found: rates.len(),
            });
        }
        if let Some(i) = concentrations.iter().position(|x| *x < T::zero()) {
            return Err(KineticsError::NegativeConcentration(net.species()[i].clone()));
        }
        if let Some(i) = rates
            .iter()
            .position(|k| k.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater))
        {
            return Err(KineticsError::NonPositiveRate(net.reaction_ids()[i].clone()));
        }
        Ok(Self { concentrations, rates })
    }

    pub fn concentrations(&self) -> &[T] {
        &self.concentrations
    }

    pub fn rates(&self) -> &[T] {
        &self.rates
    }
}

/// `p(r) = Π_s X(s)^A(r,s)` with `0⁰ = 1`.
pub fn potential<T: Scalar>(net: &ReactionNetwork, x: &[T], r: usize) -> T {
    net.reactant_row(r)
        .iter()
        .zip(x)
        .filter(|(&a, _)| a > 0)
        .fold(T::one(), |acc, (&a, xs)| acc * pow(xs, a))
}

pub fn flux<T: Scalar>(net: &ReactionNetwork, state: &KineticState<T>) -> Vec<T> {
    (0..net.num_reactions())
        .map(|r| state.rates[r].clone() * potential(net, &state.concentrations, r))
        .collect()
}

/// `Ẋ = N·J`.
pub fn ode_rhs<T: Scalar>(net: &ReactionNetwork, state: &KineticState<T>) -> Vec<T> {
    let j = flux(net, state);
    (0..net.num_species())
        .map(|s| {
            (0..net.num_reactions()).fold(T::zero(), |acc, r| match net.net_change(s, r) {
                0 => acc,
                n => acc + T::from_int(n) * j[r].clone(),
            })
        })
        .collect()
}

/// `∂Ẋ(s)/∂X(t)`, row `s`, column `t`.
pub fn jacobian<T: Scalar>(net: &ReactionNetwork, state: &KineticState<T>) -> Vec<Vec<T>> {
    let (ns, nr) = (net.num_species(), net.num_reactions());
    let x = &state.concentrations;
    // dflux[r][t] = K(r) · ∂p(r)/∂X(t)
    let dflux: Vec<Vec<T>> = (0..nr)
        .map(|r| {
            let a = net.reactant_row(r);
            (0..ns)
                .map(|t| {
                    if a[t] == 0 {
                        return T::zero();
                    }
                    let mut d = T::from_int(a[t] as i64) * pow(&x[t], a[t] - 1);
                    for (u, &au) in a.iter().enumerate() {
                        if u != t && au > 0 {
                            d = d * pow(&x[u], au);
                        }
                    }
                    state.rates[r].clone() * d
                })
                .collect()
        })
        .collect();
    (0..ns)
        .map(|s| {
            (0..ns)
                .map(|t| {
                    (0..nr).fold(T::zero(), |acc, r| match net.net_change(s, r) {
                        0 => acc,
                        n => acc + T::from_int(n) * dflux[r][t].clone(),
                    })
                })
                .collect()
        })
        .collect()
}

/// `‖N·J‖∞ ≤ tolerance`.
pub fn is_steady_flux<T: Scalar>(n: &IntegerMatrix, j: &[T], tolerance: &T) -> Result<bool, KineticsError> {
    if j.len() != n.ncols() {
        return Err(KineticsError::Dimension {
            what: "flux entries",
            expected: n.ncols(),
            found: j.len(),
        });
    }
    let small_int = |v: &BigInt| -> T {
        use num_traits::ToPrimitive;
        T::from_int(v.to_i64().expect("stoichiometric entries fit in i64"))
    };
    for row in n.rows() {
        let v = row
            .iter()
            .zip(j)
            .filter(|(c, _)| !c.is_zero())
            .fold(T::zero(), |acc, (c, x)| acc + small_int(c) * x.clone());
        if v.abs() > *tolerance {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Human-readable mass-action equations, one per species:
/// `d[c]/dt = k_r1*[s]*[e] - k_r2*[c] - k_r3*[c]`.
pub fn ode_symbolic(net: &ReactionNetwork) -> Vec<String> {
    let monomial = |r: usize| {
        let mut m = format!("k_{}", net.reaction_ids()[r]);
        for (s, &a) in net.reactant_row(r).iter().enumerate() {
            match a {
                0 => {}
                1 => m.push_str(&format!("*[{}]", net.species()[s])),
                _ => m.push_str(&format!("*[{}]^{a}", net.species()[s])),
            }
        }
        m
    };
    (0..net.num_species())
        .map(|s| {
            let mut line = format!("d[{}]/dt =", net.species()[s]);
            let mut first = true;
            for r in 0..net.num_reactions() {
                let n = net.net_change(s, r);
                if n == 0 {
                    continue;
                }
                let sign = match (first, n < 0) {
                    (true, true) => " -",
                    (true, false) => "",
                    (false, true) => " -",
                    (false, false) => " +",
                };
                let mag = n.unsigned_abs();
                let coef = if mag == 1 { String::new() } else { format!("{mag}*") };
                line.push_str(&format!("{sign} {coef}{}", monomial(r)));
                first = false;
            }
            if first {
                line.push_str(" 0");
            }
            line
        })
        .collect()
}

/// Concentrations and rates read from a `name = value` file.
#[derive(Debug, Clone, PartialEq)]
pub enum Parameters {
    /// Every value was a fraction or a plain decimal.
    Exact(KineticState<BigRational>),
    /// At least one value used exponent notation.
    Floating(KineticState<f64>),
}

#[derive(Debug, Clone)]
enum Value {
    Exact(BigRational),
    Float(f64),
}

impl Value {
    fn to_f64(&self) -> f64 {
        match self {
            Value::Float(f) => *f,
            Value::Exact(q) => rational_to_f64(q),
        }
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let q = BigRational::new(num, den);
    Some(if neg { -q } else { q })
}

fn parse_value(s: &str) -> Option<Value> {
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Value::Exact(BigRational::new(p, q)));
    }
    if let Some(q) = parse_decimal(s) {
        return Some(Value::Exact(q));
    }
    let f = f64::from_str(s).ok().filter(|f| f.is_finite())?;
    Some(Value::Float(f))
}

/// Parse `name = value` lines; `#` starts a comment. Names are species
/// labels or reaction ids. Values are integers, decimals, fractions `p/q`,
/// or floats in exponent notation.
pub fn parse_parameters(text: &str, net: &ReactionNetwork) -> Result<Parameters, KineticsError> {
    let mut conc: Vec<Option<Value>> = vec![None; net.num_species()];
    let mut rates: Vec<Option<Value>> = vec![None; net.num_reactions()];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((name, value)) = body.split_once('=') else {
            return Err(KineticsError::Syntax {
                line,
                message: "expected `name = value`".into(),
            });
        };
        let (name, value) = (name.trim(), value.trim());
        let v = parse_value(value).ok_or_else(|| KineticsError::Syntax {
            line,
            message: format!("invalid number `{value}`"),
        })?;
        let slot = match (net.species_position(name), net.reaction_position(name)) {
            (Some(_), Some(_)) => {
                return Err(KineticsError::AmbiguousName {
                    line,
                    name: name.into(),
                })
            }
            (Some(s), None) => &mut conc[s],
            (None, Some(r)) => &mut rates[r],
            (None, None) => {
                return Err(KineticsError::UnknownName {
                    line,
                    name: name.into(),
                })
            }
        };
        if slot.is_some() {
            return Err(KineticsError::Reassigned {
                line,
                name: name.into(),
            });
        }
        *slot = Some(v);
    }
    let take = |vals: Vec<Option<Value>>, labels: &[String], kind: &'static str| {
        vals.into_iter()
            .zip(labels)
            .map(|(v, l)| v.ok_or_else(|| KineticsError::Missing { kind, name: l.clone() }))
            .collect::<Result<Vec<Value>, _>>()
    };
    let conc = take(conc, net.species(), "species")?;
    let rates = take(rates, net.reaction_ids(), "reaction")?;
    let exact = conc.iter().chain(&rates).all(|v| matches!(v, Value::Exact(_)));
    if exact {
        let unwrap = |v: Vec<Value>| {
            v.into_iter()
                .map(|v| match v {
                    Value::Exact(q) => q,
                    Value::Float(_) => unreachable!("checked exact"),
                })
                .collect()
        };
        Ok(Parameters::Exact(KineticState::new(net, unwrap(conc), unwrap(rates))?))
    } else {
        let f = |v: Vec<Value>| v.iter().map(Value::to_f64).collect();
        Ok(Parameters::Floating(KineticState::new(net, f(conc), f(rates))?))
    }
}

/// Display helper: rationals as `p/q` (or `p`), floats via `{}`.
pub struct Num<'a, T>(pub &'a T);

impl fmt::Display for Num<'_, BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Display for Num<'_, f64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::stoichiometric_matrix;
    use crate::parser::parse_network;

    fn q(n: i64) -> BigRational {
        BigRational::from_int(n)
    }

    fn mm() -> ReactionNetwork {
        parse_network("s + e <-> c\nc -> p + e").unwrap()
    }

    #[test]
    fn potentials_and_fluxes() {
        let net = mm();
        let x = vec![q(2), q(3), q(5), q(7)];
        assert_eq!(potential(&net, &x, 0), q(6));
        let state = KineticState::new(&net, x, vec![q(1), q(1), q(1)]).unwrap();
        assert_eq!(flux(&net, &state), vec![q(6), q(5), q(5)]);

        let ones = KineticState::new(&net, vec![1.0; 4], vec![2.0, 3.0, 4.0]).unwrap();
        assert_eq!(flux(&net, &ones), vec![2.0, 3.0, 4.0]);

        let zero_s = vec![0.0, 3.0, 5.0, 7.0];
        assert_eq!(potential(&net, &zero_s, 0), 0.0);
        assert_eq!(potential(&net, &zero_s, 1), 5.0);
    }

    #[test]
    fn mm_vector_field_at_unit_state() {
        let net = mm();
        let (k1, k2, k3) = (q(2), q(5), q(11));
        let state = KineticState::new(&net, vec![q(1); 4], vec![k1.clone(), k2.clone(), k3.clone()]).unwrap();
        let expected = vec![
            -k1.clone() + k2.clone(),
            -k1.clone() + k2.clone() + k3.clone(),
            k1.clone() - k2.clone() - k3.clone(),
            k3,
        ];
        assert_eq!(ode_rhs(&net, &state), expected);

        let balanced = KineticState::new(
            &net,
            vec![q(1); 4],
            vec![q(3), q(3), BigRational::new(1.into(), 10_000.into())],
        )
        .unwrap();
        let rhs = ode_rhs(&net, &balanced);
        assert_eq!(rhs[0], q(0));

        let empty = KineticState::new(&net, vec![q(0); 4], vec![q(1); 3]).unwrap();
        assert!(ode_rhs(&net, &empty).iter().all(Zero::is_zero));
    }

    #[test]
    fn state_validation() {
        let net = mm();
        assert!(matches!(
            KineticState::new(&net, vec![1.0; 3], vec![1.0; 3]),
            Err(KineticsError::Dimension { .. })
        ));
        assert_eq!(
            KineticState::new(&net, vec![1.0, -1.0, 1.0, 1.0], vec![1.0; 3]),
            Err(KineticsError::NegativeConcentration("e".into()))
        );
        assert_eq!(
            KineticState::new(&net, vec![1.0; 4], vec![1.0, 0.0, 1.0]),
            Err(KineticsError::NonPositiveRate("r2".into()))
        );
    }

    #[test]
    fn steady_flux() {
        let fig = parse_network("v5 -> v1\nv1 + v2 -> v5\nv3 -> v2\nv2 + v5 -> v3 + v4\nv4 -> v5").unwrap();
        let n = stoichiometric_matrix(&fig);
        let j: Vec<BigRational> = [0, 0, 1, 1, 1].map(q).to_vec();
        assert!(is_steady_flux(&n, &j, &q(0)).unwrap());

        let n = stoichiometric_matrix(&mm());
        assert!(is_steady_flux(&n, &[q(3), q(3), q(0)], &q(0)).unwrap());
        assert!(!is_steady_flux(&n, &[q(1), q(0), q(0)], &q(0)).unwrap());
        assert!(is_steady_flux(&n, &[1.0, 1.0 + 1e-12, 0.0], &1e-9).unwrap());
        assert!(is_steady_flux(&n, &[q(1)], &q(0)).is_err());
    }

    #[test]
    fn symbolic_equations() {
        let lines = ode_symbolic(&mm());
        assert_eq!(
            lines,
            vec![
                "d[s]/dt = - k_r1*[s]*[e] + k_r2*[c]",
                "d[e]/dt = - k_r1*[s]*[e] + k_r2*[c] + k_r3*[c]",
                "d[c]/dt = k_r1*[s]*[e] - k_r2*[c] - k_r3*[c]",
                "d[p]/dt = k_r3*[c]",
            ]
        );
        let dimer = parse_network("2 A -> B").unwrap();
        assert_eq!(ode_symbolic(&dimer)[0], "d[A]/dt = - 2*k_r1*[A]^2");
        let cat = parse_network("S + E -> P + E").unwrap();
        assert_eq!(ode_symbolic(&cat)[1], "d[E]/dt = 0");
    }

    #[test]
    fn parameter_files() {
        let net = mm();
        let text = "# rates\nr1 = 1\nr2 = 1/2\nr3 = 0.25\ns = 2\ne = 3\nc = 5\np = 7 # product\n";
        let Parameters::Exact(state) = parse_parameters(text, &net).unwrap() else {
            panic!("expected exact parameters");
        };
        assert_eq!(state.rates()[1], BigRational::new(1.into(), 2.into()));
        assert_eq!(state.rates()[2], BigRational::new(1.into(), 4.into()));

        let text = "r1 = 1e-3\nr2 = 1\nr3 = 1\ns = 1\ne = 1\nc = 1\np = 1\n";
        assert!(matches!(parse_parameters(text, &net).unwrap(), Parameters::Floating(_)));

        let missing = "r1 = 1\nr2 = 1\ns = 1\ne = 1\nc = 1\np = 1\n";
        assert_eq!(
            parse_parameters(missing, &net),
            Err(KineticsError::Missing {
                kind: "reaction",
                name: "r3".into()
            })
        );
        assert!(matches!(
            parse_parameters("zz = 1", &net),
            Err(KineticsError::UnknownName { .. })
        ));
        assert!(matches!(
            parse_parameters("s = x", &net),
            Err(KineticsError::Syntax { .. })
        ));
        assert!(matches!(
            parse_parameters("s = 1/0", &net),
            Err(KineticsError::Syntax { .. })
        ));
        assert!(matches!(
            parse_parameters("s 1", &net),
            Err(KineticsError::Syntax { .. })
        ));
        assert!(matches!(
            parse_parameters("s = 1\ns = 2", &net),
            Err(KineticsError::Reassigned { .. })
        ));
        let clash = parse_network("r1 -> A").unwrap();
        assert!(matches!(
            parse_parameters("r1 = 1", &clash),
            Err(KineticsError::AmbiguousName { .. })
        ));
    }

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_decimal("0.1"), Some(BigRational::new(1.into(), 10.into())));
        assert_eq!(parse_decimal("-2.50"), Some(BigRational::new((-5).into(), 2.into())));
        assert_eq!(parse_decimal(".5"), Some(BigRational::new(1.into(), 2.into())));
        assert_eq!(parse_decimal("."), None);
        assert_eq!(parse_decimal("1e3"), None);
    }

    #[test]
    fn jacobian_of_dimerisation() {
        let net = parse_network("2 A -> B").unwrap();
        let state = KineticState::new(&net, vec![q(3), q(1)], vec![q(2)]).unwrap();
        // Ẋ_A = -2·k·A², ∂/∂A = -4·k·A = -24
        assert_eq!(jacobian(&net, &state), vec![vec![q(-24), q(0)], vec![q(12), q(0)]]);
    }
}
