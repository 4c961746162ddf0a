//! Sparse multivariate polynomial arithmetic over the canonical amplitude
//! variables, with graded-lexicographic term ordering.

use crate::fock::ExcitationIndex;
use crate::scalar::Scalar;
use num::complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Exponent vector over the frozen variable ordering.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn constant(nvars: usize) -> Self {
        Self { exponents: vec![0; nvars] }
    }

    pub fn variable(i: usize, nvars: usize) -> Self {
        let mut exponents = vec![0; nvars];
        exponents[i] = 1;
        Self { exponents }
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exponents.cmp(&other.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<S> {
    pub nvars: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::constant(nvars), c);
        p
    }

    pub fn variable(i: usize, nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::variable(i, nvars), S::one());
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: S) {
        debug_assert_eq!(m.exponents.len(), self.nvars);
        let entry = self.terms.entry(m).or_insert_with(S::zero);
        *entry = entry.clone() + c;
        self.terms.retain(|_, v| !v.prune());
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Exponent vectors of the nonzero terms (the Newton-polytope generators).
    pub fn support(&self) -> Vec<Vec<u32>> {
        self.terms.keys().map(|m| m.exponents.clone()).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone() * s.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Partial derivative with respect to variable i.
    pub fn diff(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponents[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents.clone();
            exps[i] -= 1;
            out.add_term(Monomial { exponents: exps }, c.clone() * S::from_ratio(e as i64, 1));
        }
        out
    }

    pub fn eval(&self, x: &[S]) -> S {
        assert_eq!(x.len(), self.nvars);
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.exponents.iter().enumerate() {
                for _ in 0..e {
                    term = term * x[i].clone();
                }
            }
            acc = acc + term;
        }
        acc
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn to_complex(&self) -> Poly<Complex64> {
        self.map(|c| c.to_c64())
    }
}

/// Square polynomial system f_mu(t) = 0 over the canonical variables.
#[derive(Debug, Clone)]
pub struct PolynomialSystem<S> {
    /// (N, K, scheme name) provenance.
    pub n: usize,
    pub k: usize,
    pub scheme_name: String,
    pub variables: Vec<ExcitationIndex>,
    /// One equation per variable, same ordering.
    pub equations: Vec<Poly<S>>,
}

impl<S: Scalar> PolynomialSystem<S> {
    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn eval(&self, x: &[S]) -> Vec<S> {
        self.equations.iter().map(|f| f.eval(x)).collect()
    }

    /// Analytic Jacobian, row-major: J[i][j] = d f_i / d x_j.
    pub fn jacobian(&self) -> Vec<Vec<Poly<S>>> {
        self.equations
            .iter()
            .map(|f| (0..self.nvars()).map(|j| f.diff(j)).collect())
            .collect()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.equations.iter().map(Poly::degree).collect()
    }

    pub fn to_complex(&self) -> PolynomialSystem<Complex64> {
        PolynomialSystem {
            n: self.n,
            k: self.k,
            scheme_name: self.scheme_name.clone(),
            variables: self.variables.clone(),
            equations: self.equations.iter().map(Poly::to_complex).collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// JSON serialization

#[derive(Serialize, Deserialize)]
struct IndexJson {
    occupied: Vec<usize>,
    #[serde(rename = "virtual")]
    virtuals: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exponents: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct EquationJson {
    mu: IndexJson,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "K")]
    k: usize,
    scheme: String,
    variables: Vec<IndexJson>,
    equations: Vec<EquationJson>,
}

impl<S: Scalar> PolynomialSystem<S> {
    pub fn to_json(&self) -> String {
        let variables = self
            .variables
            .iter()
            .map(|mu| IndexJson {
                occupied: mu.occupied().to_vec(),
                virtuals: mu.virtuals().to_vec(),
            })
            .collect();
        let equations = self
            .variables
            .iter()
            .zip(&self.equations)
            .map(|(mu, f)| EquationJson {
                mu: IndexJson {
                    occupied: mu.occupied().to_vec(),
                    virtuals: mu.virtuals().to_vec(),
                },
                terms: f
                    .terms()
                    .map(|(m, c)| {
                        let z = c.to_c64();
                        TermJson { exponents: m.exponents.clone(), re: z.re, im: z.im }
                    })
                    .collect(),
            })
            .collect();
        let json = SystemJson {
            n: self.n,
            k: self.k,
            scheme: self.scheme_name.clone(),
            variables,
            equations,
        };
        serde_json::to_string_pretty(&json).expect("serializable")
    }
}

impl PolynomialSystem<Complex64> {
    pub fn from_json(text: &str) -> Result<Self, Box<dyn std::error::Error>> {
        let json: SystemJson = serde_json::from_str(text)?;
        let variables: Result<Vec<ExcitationIndex>, _> = json
            .variables
            .iter()
            .map(|v| ExcitationIndex::new(v.occupied.clone(), v.virtuals.clone()))
            .collect();
        let variables = variables?;
        let nvars = variables.len();
        let equations = json
            .equations
            .iter()
            .map(|eq| {
                let mut p = Poly::zero(nvars);
                for term in &eq.terms {
                    p.add_term(
                        Monomial { exponents: term.exponents.clone() },
                        Complex64::new(term.re, term.im),
                    );
                }
                p
            })
            .collect();
        Ok(PolynomialSystem {
            n: json.n,
            k: json.k,
            scheme_name: json.scheme,
            variables,
            equations,
        })
    }
}
