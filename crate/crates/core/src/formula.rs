//! Symbolic identification formulas: products of conditional densities with an
//! optional integral, and their text, LaTeX and JSON renderings.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, NodeSet};

/// The conditional density `f(targets | conditioners)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub targets: NodeSet,
    pub conditioners: NodeSet,
}

impl Factor {
    pub fn new(targets: NodeSet, conditioners: NodeSet) -> Result<Factor> {
        if targets.is_empty() {
            return Err(Error::Formula("a factor needs at least one target".into()));
        }
        if let Some(n) = targets.intersection(&conditioners).next() {
            return Err(Error::Formula(format!("{n} is both a target and a conditioner")));
        }
        Ok(Factor { targets, conditioners })
    }
}

/// `f(response | do(intervened)) = ∫ ∏ factors d(integrate_over)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdFormula {
    factors: Vec<Factor>,
    integrate_over: NodeSet,
    intervened: NodeSet,
    response: NodeSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Text,
    Latex,
    Json,
}

impl std::str::FromStr for Style {
    type Err = Error;
    fn from_str(s: &str) -> Result<Style> {
        match s {
            "text" => Ok(Style::Text),
            "latex" => Ok(Style::Latex),
            "json" => Ok(Style::Json),
            other => Err(Error::Formula(format!("unknown style {other:?}"))),
        }
    }
}

impl IdFormula {
    /// Builds a formula, integrating over every target outside `response`.
    pub fn new(factors: Vec<Factor>, intervened: NodeSet, response: NodeSet) -> Result<IdFormula> {
        let targets: NodeSet = factors.iter().flat_map(|f| f.targets.iter().cloned()).collect();
        let integrate_over = targets.difference(&response).cloned().collect();
        let f = IdFormula { factors, integrate_over, intervened, response };
        f.validate()?;
        Ok(f)
    }

    /// `∫ f(z) f(y | x, z) dz`; with empty `Z` just `f(y | x)`.
    pub fn adjustment(xs: &NodeSet, ys: &NodeSet, zs: &NodeSet) -> Result<IdFormula> {
        let mut factors = Vec::new();
        if !zs.is_empty() {
            factors.push(Factor::new(zs.clone(), NodeSet::new())?);
        }
        let given: NodeSet = xs.union(zs).cloned().collect();
        factors.push(Factor::new(ys.clone(), given)?);
        IdFormula::new(factors, xs.clone(), ys.clone())
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Formula(m));
        if let Some(n) = self.response.intersection(&self.intervened).next() {
            return bad(format!("{n} is both intervened on and a response"));
        }
        let mut seen = NodeSet::new();
        for f in &self.factors {
            if f.targets.is_empty() {
                return bad("a factor needs at least one target".into());
            }
            for c in &f.conditioners {
                if !self.intervened.contains(c) && !seen.contains(c) {
                    return bad(format!("conditioner {c} is neither intervened on nor an earlier target"));
                }
            }
            for t in &f.targets {
                if f.conditioners.contains(t) {
                    return bad(format!("{t} is both a target and a conditioner"));
                }
                if self.intervened.contains(t) {
                    return bad(format!("intervened node {t} appears as a target"));
                }
                if !seen.insert(t.clone()) {
                    return bad(format!("{t} is a target of more than one factor"));
                }
            }
        }
        if let Some(r) = self.response.iter().find(|r| !seen.contains(*r)) {
            return bad(format!("response {r} is not a target of any factor"));
        }
        let expected: NodeSet = seen.difference(&self.response).cloned().collect();
        if expected != self.integrate_over {
            return bad("integration set must be the targets outside the response".into());
        }
        Ok(())
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn integrate_over(&self) -> &NodeSet {
        &self.integrate_over
    }

    pub fn intervened(&self) -> &NodeSet {
        &self.intervened
    }

    pub fn response(&self) -> &NodeSet {
        &self.response
    }

    /// Equality up to the order of the factors.
    pub fn structurally_equal(&self, other: &IdFormula) -> bool {
        let sorted = |f: &IdFormula| {
            let mut v = f.factors.clone();
            v.sort();
            v
        };
        self.integrate_over == other.integrate_over
            && self.intervened == other.intervened
            && self.response == other.response
            && sorted(self) == sorted(other)
    }

    pub fn render(&self, style: Style) -> String {
        match style {
            Style::Text => self.render_with(&TEXT),
            Style::Latex => self.render_with(&LATEX),
            Style::Json => self.to_json(),
        }
    }

    fn render_with(&self, s: &Notation) -> String {
        let list =
            |names: &mut dyn Iterator<Item = &NodeId>| names.map(|n| (s.var)(n)).collect::<Vec<_>>().join(s.comma);
        let density = |targets: &NodeSet, given: &str| {
            let t = list(&mut targets.iter());
            if given.is_empty() {
                format!("f({t})")
            } else {
                format!("f({t}{}{given})", s.bar)
            }
        };
        let lhs_given = if self.intervened.is_empty() {
            String::new()
        } else {
            format!("{}({})", s.do_op, list(&mut self.intervened.iter()))
        };
        let lhs = density(&self.response, &lhs_given);
        let mut rhs: Vec<String> = self
            .factors
            .iter()
            .map(|f| {
                let mut given = f.conditioners.iter().filter(|c| self.intervened.contains(*c));
                let mut rest = f.conditioners.iter().filter(|c| !self.intervened.contains(*c));
                let parts: Vec<String> =
                    [list(&mut given), list(&mut rest)].into_iter().filter(|p| !p.is_empty()).collect();
                density(&f.targets, &parts.join(s.comma))
            })
            .collect();
        if rhs.is_empty() {
            rhs.push("1".into());
        }
        let product = rhs.join(s.times);
        if self.integrate_over.is_empty() {
            format!("{lhs} = {product}")
        } else {
            let d = list(&mut self.integrate_over.iter());
            format!("{lhs} = {}{product}{}({d})", s.integral, s.differential)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&Wire::from(self)).expect("formula serializes")
    }

    pub fn from_json(text: &str) -> Result<IdFormula> {
        let w: Wire = serde_json::from_str(text).map_err(|e| Error::Formula(e.to_string()))?;
        let factors = w
            .factors
            .into_iter()
            .map(|f| Factor::new(f.targets.into_iter().collect(), f.given.into_iter().collect()))
            .collect::<Result<Vec<_>>>()?;
        let f = IdFormula {
            factors,
            integrate_over: w.integrate_over.into_iter().collect(),
            intervened: w.intervened.into_iter().collect(),
            response: w.response.into_iter().collect(),
        };
        f.validate()?;
        Ok(f)
    }
}

impl fmt::Display for IdFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Style::Text))
    }
}

struct Notation {
    var: fn(&NodeId) -> String,
    comma: &'static str,
    bar: &'static str,
    do_op: &'static str,
    times: &'static str,
    integral: &'static str,
    differential: &'static str,
}

const TEXT: Notation = Notation {
    var: |n| n.as_str().to_lowercase(),
    comma: ",",
    bar: "|",
    do_op: "do",
    times: " ",
    integral: "∫ ",
    differential: " d",
};

const LATEX: Notation = Notation {
    var: latex_var,
    comma: ", ",
    bar: " \\mid ",
    do_op: "\\mathrm{do}",
    times: " \\, ",
    integral: "\\int ",
    differential: " \\, \\mathrm{d}",
};

/// `V12` becomes `v_{12}`; other names are set upright with escaped underscores.
fn latex_var(n: &NodeId) -> String {
    let s = n.as_str().to_lowercase();
    let split = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
    let (head, tail) = s.split_at(split);
    let simple = head.chars().all(|c| c.is_ascii_alphabetic()) && tail.chars().all(|c| c.is_ascii_digit());
    if simple && !head.is_empty() && !tail.is_empty() {
        format!("{head}_{{{tail}}}")
    } else if simple && head.len() == 1 {
        head.to_string()
    } else {
        format!("\\mathit{{{}}}", s.replace('_', "\\_"))
    }
}

#[derive(Serialize, Deserialize)]
struct WireFactor {
    targets: Vec<NodeId>,
    given: Vec<NodeId>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Wire {
    factors: Vec<WireFactor>,
    integrate_over: Vec<NodeId>,
    #[serde(rename = "do")]
    intervened: Vec<NodeId>,
    response: Vec<NodeId>,
}

impl From<&IdFormula> for Wire {
    fn from(f: &IdFormula) -> Wire {
        let v = |s: &NodeSet| s.iter().cloned().collect::<Vec<_>>();
        Wire {
            factors: f
                .factors
                .iter()
                .map(|x| WireFactor { targets: v(&x.targets), given: v(&x.conditioners) })
                .collect(),
            integrate_over: v(&f.integrate_over),
            intervened: v(&f.intervened),
            response: v(&f.response),
        }
    }
}
