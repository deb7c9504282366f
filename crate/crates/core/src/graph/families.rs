use std::fmt;
use std::str::FromStr;

use super::{Graph, GraphError};

/// A parametric graph family member, parsed from text such as
/// `"biclique 2 3"`, `"pineapple 10 6"` or `"cone path 20"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Biclique { p: usize, q: usize },
    Pineapple { n: usize, q: usize },
    Cone(Box<FamilySpec>),
    Path(usize),
    Cycle(usize),
    Complete(usize),
    Empty(usize),
    HarmonicTk(usize),
}

impl FamilySpec {
    pub fn build(&self) -> Result<Graph, GraphError> {
        match *self {
            Self::Biclique { p, q } => Graph::complete_bipartite(p, q),
            Self::Pineapple { n, q } => Graph::pineapple(n, q),
            Self::Cone(ref inner) => Ok(Graph::cone(&inner.build()?)),
            Self::Path(n) => Graph::path(n),
            Self::Cycle(n) => Graph::cycle(n),
            Self::Complete(n) => Graph::complete(n),
            Self::Empty(n) => Graph::empty(n),
            Self::HarmonicTk(k) => Graph::harmonic_tk(k),
        }
    }

    fn parse_tokens(spec: &str, tokens: &[&str]) -> Result<Self, GraphError> {
        let fail = |message: String| GraphError::FamilySpec {
            spec: spec.to_owned(),
            message,
        };
        let (&kind, args) = tokens
            .split_first()
            .ok_or_else(|| fail("empty spec".into()))?;
        if kind == "cone" {
            if args.is_empty() {
                return Err(fail("cone needs an inner family".into()));
            }
            return Ok(Self::Cone(Box::new(Self::parse_tokens(spec, args)?)));
        }
        let arity = match kind {
            "biclique" | "pineapple" => 2,
            "path" | "cycle" | "complete" | "empty" | "tk" => 1,
            other => return Err(fail(format!("unknown family {other:?}"))),
        };
        if args.len() != arity {
            return Err(fail(format!(
                "{kind} takes {arity} integer argument(s), got {}",
                args.len()
            )));
        }
        let nums = args
            .iter()
            .map(|a| {
                a.parse::<usize>()
                    .map_err(|_| fail(format!("not a non-negative integer: {a:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(match kind {
            "biclique" => Self::Biclique {
                p: nums[0],
                q: nums[1],
            },
            "pineapple" => Self::Pineapple {
                n: nums[0],
                q: nums[1],
            },
            "path" => Self::Path(nums[0]),
            "cycle" => Self::Cycle(nums[0]),
            "complete" => Self::Complete(nums[0]),
            "empty" => Self::Empty(nums[0]),
            _ => Self::HarmonicTk(nums[0]),
        })
    }
}

impl FromStr for FamilySpec {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        Self::parse_tokens(s, &tokens)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Biclique { p, q } => write!(f, "biclique {p} {q}"),
            Self::Pineapple { n, q } => write!(f, "pineapple {n} {q}"),
            Self::Cone(inner) => write!(f, "cone {inner}"),
            Self::Path(n) => write!(f, "path {n}"),
            Self::Cycle(n) => write!(f, "cycle {n}"),
            Self::Complete(n) => write!(f, "complete {n}"),
            Self::Empty(n) => write!(f, "empty {n}"),
            Self::HarmonicTk(k) => write!(f, "tk {k}"),
        }
    }
}
