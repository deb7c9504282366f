use std::io::Read;
use std::path::PathBuf;

use anyhow::{anyhow, Context};
use clap::{ArgGroup, Args};
use specirr::graph::{from_graph6, FamilySpec, Graph};

use crate::{exit, Failure};

/// Where a single graph comes from. Exactly one must be given.
#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["graph6", "file", "stdin", "family"])))]
pub struct Source {
    #[arg(long, value_name = "STR")]
    pub graph6: Option<String>,
    /// File holding one graph6 line or an edge list (`n`, then `u v` per line).
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,
    /// Read one graph, graph6 or edge list, from standard input.
    #[arg(long)]
    pub stdin: bool,
    /// Named family member such as "biclique 2 3" or "cone path 20".
    #[arg(long, value_name = "SPEC")]
    pub family: Option<String>,
}

impl Source {
    pub fn load(&self) -> Result<Graph, Failure> {
        if let Some(text) = &self.graph6 {
            return Ok(graph6_line(text)?);
        }
        if let Some(spec) = &self.family {
            return Ok(spec.parse::<FamilySpec>()?.build()?);
        }
        let text = match &self.file {
            Some(path) => std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?,
            None => {
                let mut buf = String::new();
                std::io::stdin()
                    .read_to_string(&mut buf)
                    .context("reading standard input")?;
                buf
            }
        };
        Ok(single_graph(&text)?)
    }

    pub fn load_connected(&self) -> Result<Graph, Failure> {
        let g = self.load()?;
        if !g.is_connected() {
            return Err(Failure::new(
                exit::DISCONNECTED,
                anyhow!("graph {} is not connected", g.to_graph6()),
            ));
        }
        Ok(g)
    }
}

fn graph6_line(line: &str) -> anyhow::Result<Graph> {
    let text = line.trim();
    let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
    Ok(from_graph6(text)?)
}

/// One graph from free text: a single graph6 line, or an edge list whose
/// first line is the vertex count. A digit-only first line is never valid
/// graph6, which tells the two apart.
fn single_graph(text: &str) -> anyhow::Result<Graph> {
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect();
    match lines.as_slice() {
        [] => Err(anyhow!("input holds no graph")),
        [first, ..] if first.bytes().all(|b| b.is_ascii_digit()) => {
            Ok(Graph::from_edge_list(text)?)
        }
        [only] => graph6_line(only),
        more => Err(anyhow!(
            "expected one graph, found {} graph6 lines",
            more.len()
        )),
    }
}
