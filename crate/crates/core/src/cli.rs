//! Workspace files and the command-line front end.
//!
//! A workspace is a line-oriented text file:
//!
//! ```text
//! tiltlab-format 1
//! [algebra]
//! field = 2
//! vertices = 1 2 3
//! a: 1 -> 2
//! b: 2 -> 3
//! relation = a*b
//!
//! [options]
//! tilting = T
//! degree = 2
//!
//! [module 1/2]
//! dims = 1 1 0
//! a = [[1]]
//!
//! [module T]
//! sum = 2/3 1/2 1
//!
//! [complex C]
//! term -1 = 2/3
//! term 0 = 1/2
//! d -1 2 = [[1]]
//! ```
//!
//! Paths compose left to right: `a*b` traverses `a` first. A matrix for an
//! arrow `x → y` has `dim y` rows and `dim x` columns; omitted arrows act by
//! zero. `d K V = M` gives the block at vertex `V` of the differential leaving
//! degree `K`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{AlgebraError, BoundQuiverAlgebra, Quiver};
use crate::derived::{Complex, DerivedError};
use crate::homology::{BSide, HomologyError};
use crate::linalg::{is_prime, Matrix};
use crate::options::Options;
use crate::par::Strategy;
use crate::rep::{Module, ModuleMap, RepError};
use crate::tilting::{check_classical_tilting, miyashita_class, Filtration, TiltingContext, TiltingError};
use crate::tstructures::{DerivedPicture, TStructureError};

pub const FORMAT_HEADER: &str = "tiltlab-format 1";

/// The bundled running example.
pub const RUNNING_EXAMPLE: &str = include_str!("../examples/running.tilt");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid workspace (line {line}): {message}")]
    Validation { line: usize, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("no {kind} named `{name}` in the workspace")]
    UnknownName { kind: &'static str, name: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Tilting(#[from] TiltingError),
    #[error(transparent)]
    TStructure(#[from] TStructureError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Derived(#[from] DerivedError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

fn homology_refuses(e: &HomologyError) -> bool {
    match e {
        HomologyError::LengthExceeded { .. } | HomologyError::NotBasic { .. } | HomologyError::NonSplitEndomorphisms(_) => true,
        HomologyError::Rep(r) => rep_refuses(r),
        _ => false,
    }
}

fn rep_refuses(e: &RepError) -> bool {
    matches!(e, RepError::SearchExhausted { .. })
}

fn derived_refuses(e: &DerivedError) -> bool {
    match e {
        DerivedError::InfiniteGlobalDimension { .. } | DerivedError::SearchExhausted { .. } => true,
        DerivedError::Rep(r) => rep_refuses(r),
        _ => false,
    }
}

fn tilting_refuses(e: &TiltingError) -> bool {
    match e {
        TiltingError::NotTilting { .. }
        | TiltingError::NotSequentiallyStatic { .. }
        | TiltingError::WitnessSearchExhausted { .. }
        | TiltingError::ModeUnsupported(_) => true,
        TiltingError::Homology(h) => homology_refuses(h),
        TiltingError::Rep(r) => rep_refuses(r),
        TiltingError::Derived(d) => derived_refuses(d),
        TiltingError::InternalInconsistency(_) => false,
    }
}

impl CliError {
    /// 2 when the mathematics refuses (or a search cap fired), 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        let refusal = match self {
            CliError::Tilting(e) => tilting_refuses(e),
            CliError::TStructure(e) => match e {
                TStructureError::ModeUnsupported(_) | TStructureError::SearchExhausted { .. } => true,
                TStructureError::Derived(d) => derived_refuses(d),
                TStructureError::Tilting(t) => tilting_refuses(t),
                TStructureError::InternalInconsistency(_) => false,
            },
            CliError::Homology(e) => homology_refuses(e),
            CliError::Derived(e) => derived_refuses(e),
            CliError::Rep(e) => rep_refuses(e),
            _ => false,
        };
        if refusal {
            2
        } else {
            1
        }
    }
}

/// A validated workspace.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub algebra: Arc<BoundQuiverAlgebra>,
    pub modules: Vec<(String, Module)>,
    pub complexes: Vec<(String, Complex)>,
    pub options: Options,
    /// Name of the tilting module and its projective dimension bound.
    pub tilting: Option<(String, usize)>,
}

impl Workspace {
    /// Looks up a module; `0` names the zero module unless defined.
    pub fn module(&self, name: &str) -> Result<Module, CliError> {
        if let Some((_, m)) = self.modules.iter().find(|(n, _)| n == name) {
            return Ok(m.clone());
        }
        if name == "0" {
            return Ok(Module::zero(&self.algebra));
        }
        Err(CliError::UnknownName { kind: "module", name: name.into() })
    }

    pub fn complex(&self, name: &str) -> Result<Complex, CliError> {
        self.complexes
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.clone())
            .ok_or_else(|| CliError::UnknownName { kind: "complex", name: name.into() })
    }

    /// The tilting module and its degree, from the workspace or an override.
    pub fn tilting_module(&self, name: Option<&str>, n: Option<usize>) -> Result<(Module, usize), CliError> {
        let (default_name, default_n) = match &self.tilting {
            Some((t, n)) => (Some(t.as_str()), Some(*n)),
            None => (None, None),
        };
        let name = name.or(default_name).ok_or_else(|| CliError::Usage("no tilting module: pass --tilting or set `tilting` in [options]".into()))?;
        let t = self.module(name)?;
        let n = match n.or(default_n) {
            Some(n) => n,
            None => crate::homology::minimal_projective_resolution(&t, self.options.resolution_cap)?.length(),
        };
        Ok((t, n))
    }

    /// Serializes the workspace; parsing the result reproduces it.
    pub fn to_text(&self) -> String {
        let mut out = format!("{FORMAT_HEADER}\n");
        out.push_str(&algebra_block(&self.algebra));
        if let Some((t, n)) = &self.tilting {
            let _ = write!(out, "\n[options]\ntilting = {t}\ndegree = {n}\n");
        }
        for (name, m) in &self.modules {
            out.push('\n');
            out.push_str(&module_block(name, m));
        }
        for (name, c) in &self.complexes {
            out.push('\n');
            out.push_str(&complex_block(name, c));
        }
        out
    }
}

fn matrix_text(m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|r| format!("[{}]", m.row(r).iter().map(u32::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

pub fn algebra_block(a: &BoundQuiverAlgebra) -> String {
    let q = a.quiver();
    let mut out = format!("[algebra]\nfield = {}\nvertices = {}\n", a.p(), q.vertices.join(" "));
    for arrow in &q.arrows {
        let _ = writeln!(out, "{}: {} -> {}", arrow.name, q.vertices[arrow.source], q.vertices[arrow.target]);
    }
    for r in a.relation_strings() {
        let _ = writeln!(out, "relation = {r}");
    }
    out
}

/// Canonical text of a module: dimensions in vertex order, then every arrow
/// with a nonempty matrix.
pub fn module_block(name: &str, m: &Module) -> String {
    let q = m.algebra().quiver();
    let dims: Vec<String> = m.dims().iter().map(usize::to_string).collect();
    let mut out = format!("[module {name}]\ndims = {}\n", dims.join(" "));
    for (k, arrow) in q.arrows.iter().enumerate() {
        let a = m.action(k);
        if a.rows() * a.cols() > 0 {
            let _ = writeln!(out, "{} = {}", arrow.name, matrix_text(a));
        }
    }
    out
}

/// A complex together with one module block per term, named `NAME@degree`.
pub fn complex_block(name: &str, c: &Complex) -> String {
    let q = c.algebra().quiver();
    let mut out = String::new();
    let mut body = format!("[complex {name}]\n");
    if !c.is_zero() {
        for i in c.lo()..=c.hi() {
            let term = format!("{name}@{i}");
            out.push_str(&module_block(&term, &c.term(i)));
            out.push('\n');
            let _ = writeln!(body, "term {i} = {term}");
        }
        for i in c.lo()..c.hi() {
            let d = c.diff(i);
            for (v, b) in d.blocks().iter().enumerate() {
                if b.rows() * b.cols() > 0 && !b.is_zero() {
                    let _ = writeln!(body, "d {i} {} = {}", q.vertices[v], matrix_text(b));
                }
            }
        }
    }
    out.push_str(&body);
    out
}

/// Workspace-level settings that the command line may override.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub field: Option<u32>,
    pub dim_bound: Option<usize>,
    pub width_bound: Option<usize>,
    pub search_cap: Option<u64>,
    pub sequential: bool,
}

pub fn parse_workspace(path: &std::path::Path, overrides: &Overrides) -> Result<Workspace, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_workspace_str(&text, overrides)
}

/// A line with its 1-based number and the column where `text` starts.
#[derive(Clone, Copy)]
struct Line<'a> {
    no: usize,
    col: usize,
    text: &'a str,
}

impl<'a> Line<'a> {
    fn error(&self, offset: usize, message: impl Into<String>) -> CliError {
        CliError::Parse { line: self.no, column: self.col + offset, message: message.into() }
    }

    fn invalid(&self, message: impl Into<String>) -> CliError {
        CliError::Validation { line: self.no, message: message.into() }
    }

    /// `key = value`, with the column of the value.
    fn key_value(&self) -> Option<(&'a str, Line<'a>)> {
        let eq = self.text.find('=')?;
        let key = self.text[..eq].trim();
        let rest = &self.text[eq + 1..];
        let lead = rest.len() - rest.trim_start().len();
        Some((key, Line { no: self.no, col: self.col + eq + 1 + lead, text: rest.trim() }))
    }
}

enum Block<'a> {
    Algebra,
    Options,
    Module(&'a str, Line<'a>),
    Complex(&'a str, Line<'a>),
}

/// Parses a bracketed row list such as `[[1, 0], [0, 1]]`.
fn parse_matrix(line: &Line, p: u32) -> Result<Vec<Vec<u32>>, CliError> {
    let s = line.text;
    let bytes: Vec<(usize, char)> = s.char_indices().collect();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && (bytes[*i].1.is_whitespace() || bytes[*i].1 == ',') {
            *i += 1;
        }
    };
    let pos = |i: usize| bytes.get(i).map_or(s.len(), |b| b.0);
    skip_ws(&mut i);
    if bytes.get(i).map(|b| b.1) != Some('[') {
        return Err(line.error(pos(i), "expected `[` to open a matrix"));
    }
    i += 1;
    let mut rows = Vec::new();
    loop {
        skip_ws(&mut i);
        match bytes.get(i).map(|b| b.1) {
            Some(']') => {
                i += 1;
                break;
            }
            Some('[') => {
                i += 1;
                let mut row = Vec::new();
                loop {
                    skip_ws(&mut i);
                    match bytes.get(i).map(|b| b.1) {
                        Some(']') => {
                            i += 1;
                            break;
                        }
                        Some(c) if c == '-' || c.is_ascii_digit() => {
                            let start = i;
                            i += 1;
                            while i < bytes.len() && bytes[i].1.is_ascii_digit() {
                                i += 1;
                            }
                            let tok = &s[pos(start)..pos(i)];
                            let v: i64 = tok.parse().map_err(|_| line.error(pos(start), format!("bad entry `{tok}`")))?;
                            row.push(crate::linalg::reduce_i64(v, p));
                        }
                        Some(c) => return Err(line.error(pos(i), format!("unexpected `{c}` in a matrix row"))),
                        None => return Err(line.error(pos(i), "unterminated matrix row")),
                    }
                }
                rows.push(row);
            }
            Some(c) => return Err(line.error(pos(i), format!("unexpected `{c}` in a matrix"))),
            None => return Err(line.error(pos(i), "unterminated matrix")),
        }
    }
    skip_ws(&mut i);
    if i < bytes.len() {
        return Err(line.error(pos(i), "trailing text after matrix"));
    }
    Ok(rows)
}

fn shaped(rows: Vec<Vec<u32>>, shape: (usize, usize), what: &str, line: &Line, p: u32) -> Result<Matrix, CliError> {
    let (r, c) = shape;
    if rows.is_empty() && r * c == 0 {
        return Ok(Matrix::zeros(p, r, c));
    }
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        let found_cols = rows.first().map_or(0, Vec::len);
        return Err(line.invalid(format!("{what} needs a {r}x{c} matrix, found {}x{found_cols}", rows.len())));
    }
    Ok(Matrix::from_vec(p, r, c, rows.into_iter().flatten().collect()))
}

/// A parsed matrix with the line it came from.
type Entry<'a> = (Vec<Vec<u32>>, Line<'a>);

#[derive(Default)]
struct AlgebraDraft<'a> {
    field: Option<(u32, Line<'a>)>,
    vertices: Option<(Vec<&'a str>, Line<'a>)>,
    arrows: Vec<(&'a str, &'a str, &'a str, Line<'a>)>,
    relations: Vec<Line<'a>>,
}

impl<'a> AlgebraDraft<'a> {
    fn line(&mut self, line: Line<'a>) -> Result<(), CliError> {
        if let Some((key, value)) = line.key_value() {
            match key {
                "field" => {
                    let p = value.text.parse::<u32>().map_err(|_| value.error(0, "field must be a prime number"))?;
                    self.field = Some((p, value));
                }
                "vertices" => self.vertices = Some((value.text.split_whitespace().collect(), value)),
                "relation" => self.relations.push(value),
                _ => return Err(line.error(0, format!("unknown algebra key `{key}`"))),
            }
            return Ok(());
        }
        let colon = line.text.find(':').ok_or_else(|| line.error(0, "expected `key = value` or `arrow: source -> target`"))?;
        let name = line.text[..colon].trim();
        let rest = &line.text[colon + 1..];
        let (src, tgt) = rest.split_once("->").ok_or_else(|| line.error(colon + 1, "expected `source -> target`"))?;
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(line.error(0, "arrow names are single words"));
        }
        self.arrows.push((name, src.trim(), tgt.trim(), line));
        Ok(())
    }

    fn build(self, header: &Line, field: Option<u32>) -> Result<Arc<BoundQuiverAlgebra>, CliError> {
        let p = field.or(self.field.map(|f| f.0)).unwrap_or(2);
        if !is_prime(p) {
            let line = self.field.map_or(*header, |f| f.1);
            return Err(line.invalid(format!("field size {p} is not prime")));
        }
        let (vertices, _) = self.vertices.ok_or_else(|| header.invalid("[algebra] lists no vertices"))?;
        let arrows: Vec<(&str, &str, &str)> = self.arrows.iter().map(|&(n, s, t, _)| (n, s, t)).collect();
        let quiver = Quiver::new(&vertices, &arrows).map_err(|e| {
            let line = match &e {
                AlgebraError::UnknownVertex(v) => self.arrows.iter().find(|a| a.1 == v || a.2 == v).map_or(*header, |a| a.3),
                AlgebraError::DuplicateId(d) => self.arrows.iter().find(|a| a.0 == d).map_or(*header, |a| a.3),
                _ => *header,
            };
            line.invalid(e.to_string())
        })?;
        let mut relations = Vec::new();
        for line in &self.relations {
            let r = BoundQuiverAlgebra::parse_relation(&quiver, line.text, p)
                .map_err(|e| line.invalid(format!("relation `{}`: {e}", line.text)))?;
            if let Some((_, short)) = r.terms.iter().find(|(_, path)| path.len() < 2) {
                return Err(line.invalid(format!(
                    "relation `{}` is not admissible: it involves `{}`, a path of length {}",
                    line.text,
                    short.display(&quiver),
                    short.len()
                )));
            }
            relations.push(r);
        }
        BoundQuiverAlgebra::new(quiver, relations, p).map_err(|e| {
            let names: Vec<&str> = self.relations.iter().map(|l| l.text).collect();
            let line = self.relations.first().copied().unwrap_or(*header);
            line.invalid(format!("relations [{}]: {e}", names.join(", ")))
        })
    }
}

fn module_from_lines(alg: &Arc<BoundQuiverAlgebra>, name: &str, head: &Line, lines: &[Line], ws: &[(String, Module)]) -> Result<Module, CliError> {
    let q = alg.quiver();
    let p = alg.p();
    let mut dims: Option<Vec<usize>> = None;
    let mut sum: Option<Vec<Module>> = None;
    let mut actions: BTreeMap<usize, Entry> = BTreeMap::new();
    for line in lines {
        let (key, value) = line.key_value().ok_or_else(|| line.error(0, "expected `key = value`"))?;
        match key {
            "dims" => {
                let d = value
                    .text
                    .split_whitespace()
                    .map(|t| t.parse::<usize>().map_err(|_| value.error(0, format!("bad dimension `{t}`"))))
                    .collect::<Result<Vec<_>, _>>()?;
                if d.len() != q.num_vertices() {
                    return Err(line.invalid(format!("module `{name}` lists {} dimensions for {} vertices", d.len(), q.num_vertices())));
                }
                dims = Some(d);
            }
            "sum" => {
                let parts = value
                    .text
                    .split_whitespace()
                    .map(|part| {
                        ws.iter()
                            .find(|(n, _)| n == part)
                            .map(|(_, m)| m.clone())
                            .ok_or_else(|| line.invalid(format!("module `{name}` sums `{part}`, which is not defined above")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                sum = Some(parts);
            }
            arrow => {
                let a = q.arrow_index(arrow).ok_or_else(|| line.error(0, format!("unknown arrow `{arrow}`")))?;
                actions.insert(a, (parse_matrix(&value, p)?, value));
            }
        }
    }
    match (dims, sum) {
        (Some(_), Some(_)) => Err(head.invalid(format!("module `{name}` has both `dims` and `sum`"))),
        (None, Some(parts)) => {
            if !actions.is_empty() {
                return Err(head.invalid(format!("module `{name}` is a sum and cannot list matrices")));
            }
            Ok(Module::sum(alg, &parts))
        }
        (None, None) => Err(head.invalid(format!("module `{name}` needs `dims` or `sum`"))),
        (Some(dims), None) => {
            let mut action = Vec::new();
            for (k, arrow) in q.arrows.iter().enumerate() {
                let shape = (dims[arrow.target], dims[arrow.source]);
                action.push(match actions.remove(&k) {
                    Some((rows, line)) => shaped(rows, shape, &format!("arrow `{}`", arrow.name), &line, p)?,
                    None => Matrix::zeros(p, shape.0, shape.1),
                });
            }
            Module::new(alg.clone(), dims, action).map_err(|e| head.invalid(format!("module `{name}`: {e}")))
        }
    }
}

fn complex_from_lines(alg: &Arc<BoundQuiverAlgebra>, name: &str, head: &Line, lines: &[Line], ws: &[(String, Module)]) -> Result<Complex, CliError> {
    let q = alg.quiver();
    let p = alg.p();
    let mut terms: BTreeMap<i32, Module> = BTreeMap::new();
    let mut blocks: BTreeMap<(i32, usize), Entry> = BTreeMap::new();
    for line in lines {
        let (key, value) = line.key_value().ok_or_else(|| line.error(0, "expected `key = value`"))?;
        let words: Vec<&str> = key.split_whitespace().collect();
        let degree = |w: &str| w.parse::<i32>().map_err(|_| line.error(0, format!("bad degree `{w}`")));
        match words.as_slice() {
            ["term", k] => {
                let m = ws
                    .iter()
                    .find(|(n, _)| n == value.text)
                    .map(|(_, m)| m.clone())
                    .ok_or_else(|| line.invalid(format!("complex `{name}` uses `{}`, which is not defined above", value.text)))?;
                if terms.insert(degree(k)?, m).is_some() {
                    return Err(line.invalid(format!("complex `{name}` repeats degree {k}")));
                }
            }
            ["d", k, v] => {
                let vi = q.vertex_index(v).ok_or_else(|| line.error(0, format!("unknown vertex `{v}`")))?;
                blocks.insert((degree(k)?, vi), (parse_matrix(&value, p)?, value));
            }
            _ => return Err(line.error(0, "expected `term K = MODULE` or `d K VERTEX = MATRIX`")),
        }
    }
    if terms.is_empty() {
        if blocks.is_empty() {
            return Ok(Complex::zero(alg));
        }
        return Err(head.invalid(format!("complex `{name}` has differentials but no terms")));
    }
    let lo = *terms.keys().next().unwrap();
    let hi = *terms.keys().next_back().unwrap();
    let all: Vec<Module> = (lo..=hi).map(|k| terms.get(&k).cloned().unwrap_or_else(|| Module::zero(alg))).collect();
    let mut diffs = Vec::new();
    for k in lo..hi {
        let (s, t) = (&all[(k - lo) as usize], &all[(k - lo + 1) as usize]);
        let mut bs = Vec::new();
        for v in 0..q.num_vertices() {
            let shape = (t.dim_at(v), s.dim_at(v));
            bs.push(match blocks.remove(&(k, v)) {
                Some((rows, line)) => shaped(rows, shape, &format!("differential {k} at vertex `{}`", q.vertices[v]), &line, p)?,
                None => Matrix::zeros(p, shape.0, shape.1),
            });
        }
        diffs.push(ModuleMap::new(s.clone(), t.clone(), bs).map_err(|e| head.invalid(format!("complex `{name}`, differential {k}: {e}")))?);
    }
    if let Some(((k, _), (_, line))) = blocks.into_iter().next() {
        return Err(line.invalid(format!("complex `{name}` has no differential leaving degree {k}")));
    }
    Complex::new(alg, lo, all, diffs).map_err(|e| head.invalid(format!("complex `{name}`: {e}")))
}

pub fn parse_workspace_str(text: &str, overrides: &Overrides) -> Result<Workspace, CliError> {
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .map(|(k, raw)| {
            let raw = raw.split('#').next().unwrap_or("");
            let lead = raw.len() - raw.trim_start().len();
            Line { no: k + 1, col: 1 + lead, text: raw.trim() }
        })
        .filter(|l| !l.text.is_empty())
        .collect();
    let first = lines.first().ok_or(CliError::Parse { line: 1, column: 1, message: "empty workspace".into() })?;
    if first.text != FORMAT_HEADER {
        return Err(first.error(0, format!("expected the header `{FORMAT_HEADER}`")));
    }
    let mut blocks: Vec<(Block, Line, Vec<Line>)> = Vec::new();
    for line in &lines[1..] {
        if let Some(inner) = line.text.strip_prefix('[').filter(|_| !line.text.starts_with("[[")) {
            let inner = inner.strip_suffix(']').ok_or_else(|| line.error(line.text.len(), "expected `]`"))?;
            let (kind, name) = match inner.split_once(char::is_whitespace) {
                Some((k, n)) => (k, n.trim()),
                None => (inner, ""),
            };
            let block = match (kind, name.is_empty()) {
                ("algebra", true) => Block::Algebra,
                ("options", true) => Block::Options,
                ("module", false) => Block::Module(name, *line),
                ("complex", false) => Block::Complex(name, *line),
                ("module" | "complex", true) => return Err(line.error(1, format!("[{kind}] needs a name"))),
                _ => return Err(line.error(1, format!("unknown block `{inner}`"))),
            };
            blocks.push((block, *line, Vec::new()));
        } else {
            match blocks.last_mut() {
                Some(b) => b.2.push(*line),
                None => return Err(line.error(0, "expected a block header such as `[algebra]`")),
            }
        }
    }
    let (algebra_lines, algebra_head) = match blocks.first() {
        Some((Block::Algebra, head, body)) => (body.clone(), *head),
        Some((_, head, _)) => return Err(head.error(0, "the first block must be [algebra]")),
        None => return Err(first.error(0, "missing [algebra] block")),
    };
    let mut draft = AlgebraDraft::default();
    for line in algebra_lines {
        draft.line(line)?;
    }
    let algebra = draft.build(&algebra_head, overrides.field)?;

    let mut options = Options::default();
    let mut tilting_name: Option<String> = None;
    let mut degree: Option<usize> = None;
    let mut modules: Vec<(String, Module)> = Vec::new();
    let mut complexes: Vec<(String, Complex)> = Vec::new();
    for (block, head, body) in &blocks[1..] {
        match block {
            Block::Algebra => return Err(head.error(0, "duplicate [algebra] block")),
            Block::Options => {
                for line in body {
                    let (key, value) = line.key_value().ok_or_else(|| line.error(0, "expected `key = value`"))?;
                    let number = || value.text.parse::<u64>().map_err(|_| value.error(0, format!("`{key}` takes a number")));
                    match key {
                        "tilting" => tilting_name = Some(value.text.to_string()),
                        "degree" => degree = Some(number()? as usize),
                        "dim-bound" => options.dim_bound = number()? as usize,
                        "width-bound" => options.width_bound = number()? as usize,
                        "complex-dim-bound" => options.complex_dim_bound = number()? as usize,
                        "search-cap" => options.search_cap = number()?,
                        "end-cap" => options.end_cap = number()?,
                        "resolution-cap" => options.resolution_cap = number()? as usize,
                        "slack" => options.slack = number()? as usize,
                        _ => return Err(line.error(0, format!("unknown option `{key}`"))),
                    }
                }
            }
            Block::Module(name, line) => {
                if modules.iter().any(|(n, _)| n == name) {
                    return Err(line.invalid(format!("module `{name}` is defined twice")));
                }
                let m = module_from_lines(&algebra, name, head, body, &modules)?;
                modules.push((name.to_string(), m));
            }
            Block::Complex(name, line) => {
                if complexes.iter().any(|(n, _)| n == name) {
                    return Err(line.invalid(format!("complex `{name}` is defined twice")));
                }
                let c = complex_from_lines(&algebra, name, head, body, &modules)?;
                complexes.push((name.to_string(), c));
            }
        }
    }
    if let Some(d) = overrides.dim_bound {
        options.dim_bound = d;
    }
    if let Some(w) = overrides.width_bound {
        options.width_bound = w;
    }
    if let Some(c) = overrides.search_cap {
        options.search_cap = c;
    }
    if overrides.sequential {
        options.strategy = Strategy::Sequential;
    }
    let tilting = match (tilting_name, degree) {
        (Some(t), Some(n)) => Some((t, n)),
        (Some(t), None) => {
            let m = modules.iter().find(|(n, _)| *n == t).map(|(_, m)| m.clone());
            let m = m.ok_or_else(|| CliError::Validation { line: 0, message: format!("tilting module `{t}` is not defined") })?;
            let n = crate::homology::minimal_projective_resolution(&m, options.resolution_cap)?.length();
            Some((t, n))
        }
        (None, Some(_)) => return Err(CliError::Validation { line: 0, message: "`degree` given without `tilting`".into() }),
        (None, None) => None,
    };
    if let Some((t, _)) = &tilting {
        if !modules.iter().any(|(n, _)| n == t) {
            return Err(CliError::Validation { line: 0, message: format!("tilting module `{t}` is not defined") });
        }
    }
    Ok(Workspace { algebra, modules, complexes, options, tilting })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Static,
    Jms,
    Lo,
}

#[derive(Debug, Parser)]
#[command(name = "tiltlab", version, about = "Tilting modules, Miyashita classes and t-trees over bound quiver algebras")]
pub struct Cli {
    /// Workspace file; the bundled running example when omitted.
    #[arg(long, global = true)]
    pub workspace: Option<std::path::PathBuf>,
    /// Prime field size, overriding the workspace.
    #[arg(long, global = true)]
    pub field: Option<u32>,
    /// Total dimension bound for the module catalog.
    #[arg(long, global = true)]
    pub dim_bound: Option<usize>,
    /// Number of nonzero terms allowed in enumerated complexes.
    #[arg(long, global = true)]
    pub width_bound: Option<usize>,
    /// Cap on candidates tried by the witness searches.
    #[arg(long, global = true)]
    pub search_cap: Option<u64>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Tilting module name, overriding the workspace.
    #[arg(long, global = true)]
    pub tilting: Option<String>,
    /// Projective dimension bound `n` of the tilting module.
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    /// Run without the thread pool.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            field: self.field,
            dim_bound: self.dim_bound,
            width_bound: self.width_bound,
            search_cap: self.search_cap,
            sequential: self.sequential,
        }
    }

    pub fn load(&self) -> Result<Workspace, CliError> {
        match &self.workspace {
            Some(path) => parse_workspace(path, &self.overrides()),
            None => parse_workspace_str(RUNNING_EXAMPLE, &self.overrides()),
        }
    }
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Certify the classical tilting axioms.
    CheckTilting,
    /// Miyashita class of a module, or of every workspace module.
    Miyashita {
        #[arg(long)]
        module: Option<String>,
    },
    /// Filtration of a module by static, JMS or Lo's method.
    Filtration {
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        module: String,
    },
    /// `dim Ext^i(T, X)` for the workspace modules.
    ExtTable,
    /// `Tor_i(T, Ext^j(T, X))` for a module.
    TorTable {
        #[arg(long)]
        module: Option<String>,
    },
    /// `End(T)`, `T_B` and the `B`-modules `Ext^j(T, X)`.
    Bside,
    /// Indecomposable objects of `D^b(A)` up to shift.
    DerivedIndec,
    /// Hearts `H_0, ..., H_n` and the tilted heart.
    Hearts,
    /// Torsion pairs `(X_i, Y_i)` in the hearts.
    TorsionPairs,
    /// The t-tree of a module with its leaf weights.
    Ttree {
        #[arg(long)]
        module: String,
    },
    /// Structural claims on the enumerated universe.
    Verify,
}

/// A rendered report and the exit status it carries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub status: i32,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, status: 0 }
    }
}

fn emit(format: Format, text: String, machine: Value) -> String {
    match format {
        Format::Text => text,
        Format::Machine => format!("{}\n", serde_json::to_string_pretty(&machine).expect("json values serialize")),
    }
}

fn rows_json(m: &Matrix) -> Value {
    json!((0..m.rows()).map(|r| m.row(r).to_vec()).collect::<Vec<_>>())
}

fn filtration_json(f: &Filtration, opts: &Options) -> Value {
    json!({
        "chain": f.steps.iter().map(Module::loewy_label).collect::<Vec<_>>(),
        "labels": f.labels,
        "dims": f.step_dims(),
        "factors": f.factors.iter().map(|m| m.describe(opts)).collect::<Vec<_>>(),
        "inclusions": f.inclusions.iter().map(|i| i.blocks().iter().map(rows_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn b_side(ws: &Workspace, cli: &Cli) -> Result<(BSide, Module, usize), CliError> {
    let (t, n) = ws.tilting_module(cli.tilting.as_deref(), cli.degree)?;
    let side = BSide::new(&t, &ws.options)?;
    Ok((side, t, n))
}

fn context(ws: &Workspace, cli: &Cli) -> Result<TiltingContext, CliError> {
    let (t, n) = ws.tilting_module(cli.tilting.as_deref(), cli.degree)?;
    Ok(TiltingContext::new(&t, n, &ws.options)?)
}

/// Modules a table is built over: the named one, or every workspace module.
fn selection(ws: &Workspace, name: &Option<String>) -> Result<Vec<(String, Module)>, CliError> {
    match name {
        Some(n) => Ok(vec![(n.clone(), ws.module(n)?)]),
        None => Ok(ws.modules.clone()),
    }
}

pub fn run(cli: &Cli, ws: &Workspace) -> Result<Outcome, CliError> {
    let opts = &ws.options;
    let fmt = cli.format;
    match &cli.command {
        Command::CheckTilting => {
            let (t, n) = ws.tilting_module(cli.tilting.as_deref(), cli.degree)?;
            let cert = check_classical_tilting(&t, n, opts)?;
            let res: Vec<String> = cert.resolution.terms.iter().map(|m| m.describe(opts)).collect();
            let cores: Vec<String> = cert.coresolution.iter().map(|m| m.describe(opts)).collect();
            let mut text = format!("T = {} is classical {n}-tilting\n", t.describe(opts));
            let _ = writeln!(text, "p_{n}: projective resolution");
            for (k, r) in res.iter().enumerate() {
                let _ = writeln!(text, "  P_{k} = {r}");
            }
            let _ = writeln!(text, "e_{n}: dim Ext^i(T, T) for i = 1..{n}: {:?}", cert.rigidity);
            let _ = writeln!(text, "g_{n}: coresolution of A");
            for (k, c) in cores.iter().enumerate() {
                let _ = writeln!(text, "  T_{k} = {c}");
            }
            let machine = json!({
                "tilting": true,
                "module": t.describe(opts),
                "n": n,
                "resolution": res,
                "rigidity": cert.rigidity,
                "coresolution": cores,
                "summands": cert.summands.iter().map(Module::loewy_label).collect::<Vec<_>>(),
            });
            Ok(Outcome::ok(emit(fmt, text, machine)))
        }
        Command::Miyashita { module } => {
            let (t, n) = ws.tilting_module(cli.tilting.as_deref(), cli.degree)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for (name, m) in selection(ws, module)? {
                let c = miyashita_class(&t, n, &m)?;
                let class = match c.class {
                    Some(e) if c.zero => format!("class {e} (zero)"),
                    Some(e) => format!("class {e}"),
                    None => "no class".to_string(),
                };
                let _ = writeln!(text, "{name}: {class}  ext {:?}", c.ext);
                rows.push(json!({"module": name, "class": c.class, "zero": c.zero, "ext": c.ext}));
            }
            Ok(Outcome::ok(emit(fmt, text, json!(rows))))
        }
        Command::Filtration { method, module } => {
            let ctx = context(ws, cli)?;
            let x = ws.module(module)?;
            let (f, witnesses) = match method {
                Method::Static => (ctx.static_filtration(&x)?, None),
                Method::Lo => (ctx.lo_filtration(&x)?, None),
                Method::Jms => {
                    let (f, w) = ctx.jms_filtration(&x)?;
                    (f, Some(w))
                }
            };
            let mut text = format!("{}\n", f.render());
            let factors: Vec<String> = f.factors.iter().map(|m| m.describe(opts)).collect();
            let _ = writeln!(text, "factors: {}", factors.join(", "));
            let mut machine = filtration_json(&f, opts);
            machine["method"] = json!(format!("{method:?}").to_lowercase());
            machine["module"] = json!(module);
            if let Some(w) = witnesses {
                for (k, step) in w.iter().enumerate() {
                    for (label, witness) in step {
                        let _ = writeln!(text, "E_{k} ∋ {label}: {witness}");
                    }
                }
                machine["witnesses"] = json!(w
                    .iter()
                    .map(|step| step.iter().map(|(l, wi)| json!({"module": l, "witness": wi.to_string()})).collect::<Vec<_>>())
                    .collect::<Vec<_>>());
            }
            Ok(Outcome::ok(emit(fmt, text, machine)))
        }
        Command::ExtTable => {
            let (t, n) = ws.tilting_module(cli.tilting.as_deref(), cli.degree)?;
            let width = ws.modules.iter().map(|(name, _)| name.chars().count()).max().unwrap_or(1).max(6);
            let mut text = format!("{:<width$}", "module");
            for i in 0..=n {
                let _ = write!(text, "  Ext^{i}");
            }
            text.push('\n');
            let mut rows = Vec::new();
            for (name, m) in &ws.modules {
                let dims = crate::homology::ext_dims(&t, m, n)?;
                let _ = write!(text, "{name:<width$}");
                for d in &dims {
                    let _ = write!(text, "  {d:>5}");
                }
                text.push('\n');
                rows.push(json!({"module": name, "ext": dims}));
            }
            Ok(Outcome::ok(emit(fmt, text, json!(rows))))
        }
        Command::TorTable { module } => {
            let (side, _, n) = b_side(ws, cli)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for (name, m) in selection(ws, module)? {
                let _ = writeln!(text, "{name}: rows j, columns Tor_i(T, Ext^j(T, {name}))");
                let mut table = Vec::new();
                for j in 0..=n {
                    let e = side.ext_module(&m, j)?;
                    let mut row = Vec::new();
                    for i in 0..=n {
                        row.push(side.tor(&e, i)?.describe(opts));
                    }
                    let _ = writeln!(text, "  j={j}: {}", row.join(" | "));
                    table.push(row);
                }
                rows.push(json!({"module": name, "tor": table}));
            }
            Ok(Outcome::ok(emit(fmt, text, json!(rows))))
        }
        Command::Bside => {
            let (side, t, n) = b_side(ws, cli)?;
            let q = side.b.quiver();
            let mut text = format!("B = End({})\nvertices {}\n", t.describe(opts), q.vertices.join(" "));
            for a in &q.arrows {
                let _ = writeln!(text, "  {}: {} -> {}", a.name, q.vertices[a.source], q.vertices[a.target]);
            }
            let rels = side.b.relation_strings();
            let _ = writeln!(text, "relations: {}", if rels.is_empty() { "none".to_string() } else { rels.join(", ") });
            let tb = side.right.describe(opts);
            let _ = writeln!(text, "T_B = {tb}");
            let mut modules = Vec::new();
            for (name, m) in &ws.modules {
                let exts = (0..=n).map(|j| Ok(side.ext_module(m, j)?.describe(opts))).collect::<Result<Vec<_>, CliError>>()?;
                let parts: Vec<String> = exts.iter().enumerate().map(|(j, e)| format!("Ext^{j} = {e}")).collect();
                let _ = writeln!(text, "{name}: {}", parts.join(", "));
                modules.push(json!({"module": name, "ext": exts}));
            }
            let machine = json!({
                "vertices": q.vertices,
                "arrows": q.arrows.iter().map(|a| json!([a.name, q.vertices[a.source], q.vertices[a.target]])).collect::<Vec<_>>(),
                "relations": rels,
                "t_b": tb,
                "modules": modules,
            });
            Ok(Outcome::ok(emit(fmt, text, machine)))
        }
        Command::DerivedIndec => {
            let pic = DerivedPicture::new(context(ws, cli)?)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for o in &pic.universe {
                let c = &o.complex;
                let terms: Vec<String> = (c.lo()..=c.hi()).map(|i| format!("{i}: {}", c.term(i).describe(opts))).collect();
                let _ = writeln!(text, "{:<12} {}", o.label, terms.join(", "));
                rows.push(json!({"label": o.label, "complex": crate::tstructures::complex_json(c)}));
            }
            Ok(Outcome::ok(emit(fmt, text, json!(rows))))
        }
        Command::Hearts => {
            let pic = DerivedPicture::new(context(ws, cli)?)?;
            let mut text = String::new();
            let mut machine = serde_json::Map::new();
            for (i, s) in pic.intermediate.iter().enumerate() {
                let h = pic.heart(s)?;
                let _ = writeln!(text, "H_{i} = {}", DerivedPicture::render_list(&h));
                machine.insert(format!("H_{i}"), json!(crate::tstructures::labels(&h)));
            }
            let ht = pic.heart(&pic.tilting)?;
            let _ = writeln!(text, "H_T = {}", DerivedPicture::render_list(&ht));
            machine.insert("H_T".into(), json!(crate::tstructures::labels(&ht)));
            Ok(Outcome::ok(emit(fmt, text, Value::Object(machine))))
        }
        Command::TorsionPairs => {
            let pic = DerivedPicture::new(context(ws, cli)?)?;
            let mut text = String::new();
            let mut machine = Vec::new();
            for i in 0..pic.n() {
                let (xs, ys) = pic.heart_torsion_pair(i)?;
                let _ = writeln!(text, "X_{i} = {}", DerivedPicture::render_list(&xs));
                let _ = writeln!(text, "Y_{i} = {}", DerivedPicture::render_list(&ys));
                machine.push(json!({"i": i, "torsion": crate::tstructures::labels(&xs), "torsion_free": crate::tstructures::labels(&ys)}));
            }
            Ok(Outcome::ok(emit(fmt, text, json!(machine))))
        }
        Command::Ttree { module } => {
            let pic = DerivedPicture::new(context(ws, cli)?)?;
            let tree = pic.t_tree(&ws.module(module)?)?;
            let mut text = tree.render();
            for node in &tree.nodes {
                if let Some(t) = &node.triangle {
                    let _ = writeln!(text, "{}: {} → {} → {} →", node.name(), t.torsion_label, node.label, t.free_label);
                }
            }
            Ok(Outcome::ok(emit(fmt, text, tree.to_json())))
        }
        Command::Verify => {
            let pic = DerivedPicture::new(context(ws, cli)?)?;
            let report = pic.verify_structural_claims()?;
            let machine = json!(report
                .checks
                .iter()
                .map(|c| json!({"name": c.name, "checked": c.checked, "violations": c.violations}))
                .collect::<Vec<_>>());
            let status = if report.passed() { 0 } else { 2 };
            Ok(Outcome { output: emit(fmt, report.render(), machine), status })
        }
    }
}

/// Parses arguments, loads the workspace and runs the command.
pub fn main_with_args<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { 1 } else { 0 };
            return Outcome { output: e.to_string(), status };
        }
    };
    match cli.load().and_then(|ws| run(&cli, &ws)) {
        Ok(o) => o,
        Err(e) => {
            let status = e.exit_code();
            let prefix = if status == 2 { "refused" } else { "error" };
            Outcome { output: format!("{prefix}: {e}\n"), status }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws() -> Workspace {
        parse_workspace_str(RUNNING_EXAMPLE, &Overrides::default()).unwrap()
    }

    fn run_args(args: &[&str]) -> Outcome {
        main_with_args(std::iter::once("tiltlab").chain(args.iter().copied()))
    }

    #[test]
    fn bundled_workspace_loads() {
        let w = ws();
        assert_eq!(w.algebra.dim(), 5);
        let names: Vec<&str> = w.modules.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["1", "2", "3", "1/2", "2/3", "T"]);
        for (name, m) in &w.modules[..5] {
            assert_eq!(&m.loewy_label(), name);
        }
        assert_eq!(w.tilting, Some(("T".into(), 2)));
    }

    #[test]
    fn empty_file_is_a_parse_error() {
        let e = parse_workspace_str("", &Overrides::default()).unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 1, column: 1, .. }));
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn trivial_path_relation_is_named() {
        let text = "tiltlab-format 1\n[algebra]\nvertices = 1 2\na: 1 -> 2\nrelation = e1\n";
        match parse_workspace_str(text, &Overrides::default()).unwrap_err() {
            CliError::Validation { line, message } => {
                assert_eq!(line, 5);
                assert!(message.contains("`e1`"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let text = "tiltlab-format 1\n[algebra]\nvertices = 1 2\na: 1 -> 2\n[module M]\ndims = 1 1\na = [[1 x]]\n";
        match parse_workspace_str(text, &Overrides::default()).unwrap_err() {
            CliError::Parse { line, column, .. } => assert_eq!((line, column), (7, 9)),
            other => panic!("{other:?}"),
        }
        let bad_shape = "tiltlab-format 1\n[algebra]\nvertices = 1 2\na: 1 -> 2\n[module M]\ndims = 1 1\na = [[1, 0]]\n";
        assert!(matches!(parse_workspace_str(bad_shape, &Overrides::default()), Err(CliError::Validation { line: 7, .. })));
        let no_header = "[algebra]\n";
        assert!(matches!(parse_workspace_str(no_header, &Overrides::default()), Err(CliError::Parse { line: 1, .. })));
    }

    #[test]
    fn relation_violations_are_validation_errors() {
        let text = "tiltlab-format 1\n[algebra]\nvertices = 1 2 3\na: 1 -> 2\nb: 2 -> 3\nrelation = a*b\n[module M]\ndims = 1 1 1\na = [[1]]\nb = [[1]]\n";
        match parse_workspace_str(text, &Overrides::default()).unwrap_err() {
            CliError::Validation { line: 7, message } => assert!(message.contains("a*b"), "{message}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn serialization_round_trips() {
        let w = ws();
        let again = parse_workspace_str(&w.to_text(), &Overrides::default()).unwrap();
        assert_eq!(again.modules.len(), w.modules.len());
        for ((n1, m1), (n2, m2)) in w.modules.iter().zip(&again.modules) {
            assert_eq!(n1, n2);
            assert_eq!(m1.dims(), m2.dims());
            assert_eq!(m1.actions(), m2.actions());
        }
        assert_eq!(again.to_text(), w.to_text());
    }

    #[test]
    fn complexes_parse_and_round_trip() {
        let text = format!("{RUNNING_EXAMPLE}\n[complex C]\nterm -1 = 2/3\nterm 0 = 1/2\nd -1 2 = [[1]]\n");
        let w = parse_workspace_str(&text, &Overrides::default()).unwrap();
        let c = w.complex("C").unwrap();
        assert_eq!((c.lo(), c.hi()), (-1, 0));
        assert_eq!(c.cohomology(0).loewy_label(), "1");
        assert_eq!(c.cohomology(-1).loewy_label(), "3");
        let again = parse_workspace_str(&w.to_text(), &Overrides::default()).unwrap();
        let d = again.complex("C").unwrap();
        assert_eq!(d.diff(-1).blocks(), c.diff(-1).blocks());
        let bad = format!("{RUNNING_EXAMPLE}\n[complex C]\nterm -1 = 1/2\nterm 0 = 1/2\nd -1 1 = [[1]]\n");
        assert!(matches!(parse_workspace_str(&bad, &Overrides::default()), Err(CliError::Validation { .. })));
    }

    #[test]
    fn zero_module_reports_the_zero_flag() {
        let o = run_args(&["miyashita", "--module", "0"]);
        assert_eq!(o.status, 0);
        assert_eq!(o.output, "0: class 0 (zero)  ext [0, 0, 0]\n");
    }

    #[test]
    fn lo_filtration_of_two() {
        let o = run_args(&["filtration", "--method", "lo", "--module", "2"]);
        assert_eq!(o.status, 0, "{}", o.output);
        assert_eq!(o.output.lines().next(), Some("0 ⊆ 2 ⊆ 2 ⊆ 2"));
    }

    #[test]
    fn static_filtration_of_two_is_refused() {
        let o = run_args(&["filtration", "--method", "static", "--module", "2"]);
        assert_eq!(o.status, 2, "{}", o.output);
        assert!(o.output.starts_with("refused: not sequentially static"), "{}", o.output);
    }

    #[test]
    fn unknown_module_is_an_error() {
        let o = run_args(&["miyashita", "--module", "nope"]);
        assert_eq!(o.status, 1);
    }

    #[test]
    fn non_tilting_is_refused() {
        let o = run_args(&["check-tilting", "--tilting", "3", "--degree", "2"]);
        assert_eq!(o.status, 2, "{}", o.output);
    }

    #[test]
    fn machine_output_is_json() {
        let o = run_args(&["--format", "machine", "miyashita"]);
        let v: Value = serde_json::from_str(&o.output).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 6);
        assert_eq!(v[1]["class"], Value::Null);
    }
}
