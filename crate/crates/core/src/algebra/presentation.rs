//! Graded presentations and their line-oriented text format.
//!
//! ```text
//! gen a 1
//! gen b 1
//! rel a^4
//! rel b^5 + ab^4 + a^2b^3 + a^3b^2
//! top 7
//! ```
//!
//! Monomials are juxtaposed generator names with optional `^` powers; `1` is
//! the unit. Blank lines and `#` comments are ignored. The optional `top`
//! line records the expected top nonzero degree.

use std::collections::HashSet;
use std::fmt::Write as _;

use super::poly::{Monomial, Polynomial};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: usize,
}

impl GeneratorSpec {
    pub fn new(name: impl Into<String>, degree: usize) -> Self {
        Self {
            name: name.into(),
            degree,
        }
    }
}

/// Generators with positive degrees and homogeneous relations over F₂.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPresentation {
    generators: Vec<GeneratorSpec>,
    relations: Vec<Polynomial>,
    top_hint: Option<usize>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphabetic() || c == '_')
}

impl GradedPresentation {
    pub fn new(
        generators: Vec<GeneratorSpec>,
        relations: Vec<Polynomial>,
        top_hint: Option<usize>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        for g in &generators {
            if !valid_name(&g.name) {
                return Err(Error::InvalidPresentation(format!(
                    "generator name `{}` must consist of ASCII letters or `_`",
                    g.name
                )));
            }
            if g.degree == 0 {
                return Err(Error::InvalidPresentation(format!(
                    "generator `{}` has degree 0",
                    g.name
                )));
            }
            if !seen.insert(g.name.as_str()) {
                return Err(Error::InvalidPresentation(format!(
                    "duplicate generator `{}`",
                    g.name
                )));
            }
        }
        let degrees: Vec<usize> = generators.iter().map(|g| g.degree).collect();
        for (i, rel) in relations.iter().enumerate() {
            if rel.terms().any(|t| t.0.len() != generators.len()) {
                return Err(Error::InvalidPresentation(format!(
                    "relation {i} has the wrong number of exponents"
                )));
            }
            if rel.is_zero() {
                return Err(Error::InvalidPresentation(format!("relation {i} is zero")));
            }
            if rel.homogeneous_degree(&degrees).is_none() {
                return Err(Error::NotHomogeneous);
            }
        }
        Ok(Self {
            generators,
            relations,
            top_hint,
        })
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn top_hint(&self) -> Option<usize> {
        self.top_hint
    }

    pub fn with_top_hint(mut self, top: Option<usize>) -> Self {
        self.top_hint = top;
        self
    }

    pub fn n_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    pub fn max_generator_degree(&self) -> usize {
        self.generators.iter().map(|g| g.degree).max().unwrap_or(1)
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn relation_degree(&self, index: usize) -> usize {
        self.relations[index]
            .homogeneous_degree(&self.degrees())
            .expect("relations are homogeneous and nonzero")
    }

    pub fn monomial(&self, factors: &[(&str, u32)]) -> Result<Monomial> {
        let mut m = Monomial::one(self.n_generators());
        for &(name, e) in factors {
            let i = self
                .generator_index(name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            m.0[i] += e;
        }
        Ok(m)
    }

    fn juxtapose(&self) -> &'static str {
        if self.generators.iter().all(|g| g.name.len() == 1) {
            ""
        } else {
            " "
        }
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        let parts: Vec<String> = m
            .0
            .iter()
            .zip(&self.generators)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, g)| {
                if e == 1 {
                    g.name.clone()
                } else {
                    format!("{}^{}", g.name, e)
                }
            })
            .collect();
        parts.join(self.juxtapose())
    }

    pub fn format_polynomial(&self, p: &Polynomial) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let degrees = self.degrees();
        p.sorted_terms(&degrees)
            .into_iter()
            .map(|m| self.format_monomial(m))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn parse_monomial(&self, text: &str) -> Result<Monomial> {
        let parse_err = |message: String| Error::Parse { line: 0, message };
        let text = text.trim();
        let mut m = Monomial::one(self.n_generators());
        if text == "1" {
            return Ok(m);
        }
        if text.is_empty() {
            return Err(parse_err("empty monomial".into()));
        }
        let bytes = text.as_bytes();
        let mut pos = 0;
        while pos < bytes.len() {
            let c = bytes[pos];
            if c == b' ' || c == b'*' || c == b'\t' {
                pos += 1;
                continue;
            }
            let rest = &text[pos..];
            let best = self
                .generators
                .iter()
                .enumerate()
                .filter(|(_, g)| rest.starts_with(g.name.as_str()))
                .max_by_key(|(_, g)| g.name.len());
            let Some((gi, g)) = best else {
                return Err(parse_err(format!("unknown factor at `{rest}`")));
            };
            pos += g.name.len();
            let mut exp = 1u32;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                exp = text[start..pos]
                    .parse()
                    .map_err(|_| parse_err(format!("bad exponent in `{text}`")))?;
            }
            m.0[gi] += exp;
        }
        Ok(m)
    }

    pub fn parse_polynomial(&self, text: &str) -> Result<Polynomial> {
        let text = text.trim();
        if text == "0" {
            return Ok(Polynomial::zero());
        }
        let mut p = Polynomial::zero();
        for term in text.split('+') {
            p.add_term(self.parse_monomial(term)?);
        }
        Ok(p)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.generators {
            let _ = writeln!(out, "gen {} {}", g.name, g.degree);
        }
        for r in &self.relations {
            let _ = writeln!(out, "rel {}", self.format_polynomial(r));
        }
        if let Some(t) = self.top_hint {
            let _ = writeln!(out, "top {t}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut generators = Vec::new();
        let mut rel_lines = Vec::new();
        let mut top_hint = None;
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            match keyword {
                "gen" => {
                    if !rel_lines.is_empty() {
                        return Err(err("generators must precede relations".into()));
                    }
                    let mut parts = rest.split_whitespace();
                    let (Some(name), Some(deg), None) = (parts.next(), parts.next(), parts.next())
                    else {
                        return Err(err("expected `gen <name> <degree>`".into()));
                    };
                    let degree = deg
                        .parse()
                        .map_err(|_| err(format!("bad degree `{deg}`")))?;
                    generators.push(GeneratorSpec::new(name, degree));
                }
                "rel" => rel_lines.push((line_no, rest.to_string())),
                "top" => {
                    top_hint = Some(
                        rest.parse()
                            .map_err(|_| err(format!("bad top degree `{rest}`")))?,
                    );
                }
                other => return Err(err(format!("unknown keyword `{other}`"))),
            }
        }
        let skeleton = Self::new(generators, Vec::new(), top_hint)?;
        let relations = rel_lines
            .iter()
            .map(|(line, text)| {
                skeleton.parse_polynomial(text).map_err(|e| match e {
                    Error::Parse { message, .. } => Error::Parse {
                        line: *line,
                        message,
                    },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(skeleton.generators, relations, top_hint)
    }
}
