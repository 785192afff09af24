//! Plain-text file formats.
//!
//! Edge lists are one `u v` pair per line with `u < v`, sorted, ASCII
//! decimal, newline-terminated. Tables are comma-separated with a fixed
//! header line.

use std::fmt::Write as _;

use crate::analytics::{ClassifiedVertex, DegreeCensus, ThresholdStats, VertexClass};
use crate::graph::{Edge, GraphError, NetworkModel, VertexId, VertexProvenance};
use crate::growth::{StepTrace, TraceRow};

pub const TRACE_HEADER: &str = "step,n_v,n_e,n_be,removed,added,x_size,y_size";
pub const PROVENANCE_HEADER: &str = "vertex,birth_step,is_bound_end,seed_degree";
pub const CENSUS_HEADER: &str = "degree,count";
pub const VERTEX_HEADER: &str = "vertex,degree,class,birth_step";
pub const ECUM_HEADER: &str = "delta,value";
pub const THRESHOLD_HEADER: &str = "k,s_leq,s_gt,q_leq,q_gt";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("missing or wrong header, expected `{0}`")]
    Header(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn line_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Line {
        line,
        message: message.into(),
    }
}

pub fn edge_list(edges: &[Edge]) -> String {
    let mut out = String::with_capacity(edges.len() * 12);
    for e in edges {
        let _ = writeln!(out, "{} {}", e.lo(), e.hi());
    }
    out
}

pub fn model_edge_list(model: &NetworkModel) -> String {
    edge_list(&model.sorted_edges())
}

pub fn bound_edge_list(model: &NetworkModel) -> String {
    edge_list(&model.sorted_bound_edges())
}

pub fn parse_edge_list(text: &str) -> Result<Vec<(u32, u32)>, FormatError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let mut parts = raw.split_whitespace();
        let mut next = || -> Result<u32, FormatError> {
            parts
                .next()
                .ok_or_else(|| line_err(line, "expected two vertex ids"))?
                .parse()
                .map_err(|_| line_err(line, format!("bad vertex id in `{raw}`")))
        };
        let (u, v) = (next()?, next()?);
        if parts.next().is_some() {
            return Err(line_err(line, "trailing fields"));
        }
        out.push((u, v));
    }
    Ok(out)
}

fn check_header<'a>(text: &'a str, header: &'static str) -> Result<impl Iterator<Item = (usize, &'a str)>, FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, h)) if h.trim() == header => Ok(lines.filter(|(_, l)| !l.trim().is_empty())),
        _ => Err(FormatError::Header(header)),
    }
}

fn fields<const N: usize>(line: usize, raw: &str) -> Result<[&str; N], FormatError> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    parts
        .try_into()
        .map_err(|_| line_err(line, format!("expected {N} fields")))
}

fn num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T, FormatError> {
    s.parse().map_err(|_| line_err(line, format!("bad number `{s}`")))
}

pub fn trace_csv(trace: &StepTrace) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for r in trace.rows() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.step, r.n_v, r.n_e, r.n_be, r.removed, r.added, r.x_size, r.y_size
        );
    }
    out
}

pub fn parse_trace_csv(text: &str) -> Result<StepTrace, FormatError> {
    let mut rows = Vec::new();
    for (line, raw) in check_header(text, TRACE_HEADER)? {
        let f: [&str; 8] = fields(line, raw)?;
        let row = TraceRow {
            step: num(line, f[0])?,
            n_v: num(line, f[1])?,
            n_e: num(line, f[2])?,
            n_be: num(line, f[3])?,
            removed: num(line, f[4])?,
            added: num(line, f[5])?,
            x_size: num(line, f[6])?,
            y_size: num(line, f[7])?,
        };
        if row.step as usize != rows.len() {
            return Err(line_err(line, format!("expected step {}", rows.len())));
        }
        rows.push(row);
    }
    Ok(StepTrace::from_rows(rows))
}

pub fn provenance_csv(model: &NetworkModel) -> String {
    let mut out = String::from(PROVENANCE_HEADER);
    out.push('\n');
    for (v, p) in model.provenances().iter().enumerate() {
        let _ = writeln!(out, "{v},{},{},{}", p.birth_step, p.is_bound_end as u8, p.seed_degree);
    }
    out
}

pub fn parse_provenance_csv(text: &str) -> Result<Vec<VertexProvenance>, FormatError> {
    let mut out = Vec::new();
    for (line, raw) in check_header(text, PROVENANCE_HEADER)? {
        let f: [&str; 4] = fields(line, raw)?;
        let v: usize = num(line, f[0])?;
        if v != out.len() {
            return Err(line_err(line, format!("expected vertex {}", out.len())));
        }
        let is_bound_end = match f[2] {
            "0" => false,
            "1" => true,
            other => return Err(line_err(line, format!("is_bound_end must be 0 or 1, got `{other}`"))),
        };
        let birth_step = num(line, f[1])?;
        out.push(VertexProvenance {
            birth_step,
            is_bound_end,
            seed_degree: num(line, f[3])?,
            seed_index: None,
        });
    }
    Ok(out)
}

/// Rebuilds a model from exported files. `bound` may be empty.
pub fn model_from_parts(
    provenance: Vec<VertexProvenance>,
    edges: &[(u32, u32)],
    bound: &[(u32, u32)],
    step: u32,
) -> Result<NetworkModel, FormatError> {
    let mut model = NetworkModel::with_capacity(provenance.len(), edges.len());
    for p in provenance {
        model.add_vertex(p)?;
    }
    let bound: std::collections::HashSet<(u32, u32)> = bound.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    for (i, &(u, v)) in edges.iter().enumerate() {
        let is_bound = bound.contains(&(u.min(v), u.max(v)));
        model
            .add_edge(VertexId(u), VertexId(v), is_bound)
            .map_err(|e| line_err(i + 1, e.to_string()))?;
    }
    model.set_step(step);
    Ok(model)
}

pub fn census_csv(census: &DegreeCensus) -> String {
    let mut out = String::from(CENSUS_HEADER);
    out.push('\n');
    for (d, c) in &census.histogram {
        let _ = writeln!(out, "{d},{c}");
    }
    out
}

pub fn vertex_csv(census: &DegreeCensus) -> String {
    let mut out = String::from(VERTEX_HEADER);
    out.push('\n');
    for (v, c) in census.vertices.iter().enumerate() {
        let _ = writeln!(out, "{v},{},{},{}", c.degree, c.class, c.birth_step);
    }
    out
}

pub fn parse_vertex_csv(text: &str) -> Result<Vec<ClassifiedVertex>, FormatError> {
    let mut out = Vec::new();
    for (line, raw) in check_header(text, VERTEX_HEADER)? {
        let f: [&str; 4] = fields(line, raw)?;
        let class: VertexClass = f[2].parse().map_err(|e: String| line_err(line, e))?;
        out.push(ClassifiedVertex {
            degree: num(line, f[1])?,
            class,
            birth_step: num(line, f[3])?,
        });
    }
    Ok(out)
}

pub fn ecum_csv(values: &[(u32, f64)]) -> String {
    let mut out = String::from(ECUM_HEADER);
    out.push('\n');
    for (d, v) in values {
        let _ = writeln!(out, "{d},{v}");
    }
    out
}

pub fn threshold_csv(rows: &[(u32, ThresholdStats)]) -> String {
    let mut out = String::from(THRESHOLD_HEADER);
    out.push('\n');
    for (k, s) in rows {
        let _ = writeln!(out, "{k},{},{},{},{}", s.s_leq, s.s_gt, s.q_leq, s.q_gt);
    }
    out
}
