//! Finite-dimensional bound quiver algebras `kQ/I` over a prime field.
//!
//! Paths compose left to right: `a*b` traverses `a` and then `b`. A relation
//! written functionally as `b∘a = 0` is therefore entered as `a*b`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{is_prime, SpanBuilder};

/// Default search length for the nilpotency of the arrow ideal.
pub const DEFAULT_LENGTH_CAP: usize = 64;
/// Guard against path explosion on quivers with many cycles.
const PATH_COUNT_CAP: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("characteristic {0} is not a prime")]
    NotPrime(u32),
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("malformed relation `{relation}`: {reason}")]
    MalformedRelation { relation: String, reason: String },
    #[error("arrow ideal does not vanish modulo the relations up to length {cap}{detail}")]
    NonAdmissible { cap: usize, detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    /// Builds a quiver from vertex ids and `(name, source id, target id)` triples.
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Self, AlgebraError> {
        let mut names: Vec<String> = Vec::new();
        for v in vertices {
            let v = v.as_ref().to_string();
            if names.contains(&v) {
                return Err(AlgebraError::DuplicateId(v));
            }
            names.push(v);
        }
        let mut q = Quiver { vertices: names, arrows: Vec::new() };
        for (name, s, t) in arrows {
            let name = name.as_ref().to_string();
            if q.arrows.iter().any(|a| a.name == name) || q.vertices.contains(&name) {
                return Err(AlgebraError::DuplicateId(name));
            }
            let source = q.vertex_index(s.as_ref()).ok_or_else(|| AlgebraError::UnknownVertex(s.as_ref().into()))?;
            let target = q.vertex_index(t.as_ref()).ok_or_else(|| AlgebraError::UnknownVertex(t.as_ref().into()))?;
            q.arrows.push(Arrow { name, source, target });
        }
        Ok(q)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow { name: a.name.clone(), source: a.target, target: a.source })
                .collect(),
        }
    }
}

/// A path in a quiver: a start vertex and a sequence of composable arrows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Path {
    pub start: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path { start: v, arrows: Vec::new() }
    }

    pub fn arrow(q: &Quiver, a: usize) -> Self {
        Path { start: q.arrows[a].source, arrows: vec![a] }
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn end(&self, q: &Quiver) -> usize {
        self.arrows.last().map_or(self.start, |&a| q.arrows[a].target)
    }

    /// `self` followed by `other`, if composable.
    pub fn then(&self, q: &Quiver, other: &Path) -> Option<Path> {
        if self.end(q) != other.start {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(Path { start: self.start, arrows })
    }

    pub fn reversed(&self, q: &Quiver) -> Path {
        Path { start: self.end(q), arrows: self.arrows.iter().rev().copied().collect() }
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e{}", q.vertices[self.start])
        } else {
            self.arrows.iter().map(|&a| q.arrows[a].name.as_str()).collect::<Vec<_>>().join("*")
        }
    }
}

/// A linear combination of parallel paths, each of length at least two.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Relation {
    pub terms: Vec<(u32, Path)>,
}

impl Relation {
    pub fn monomial(path: Path) -> Self {
        Relation { terms: vec![(1, path)] }
    }

    pub fn display(&self, q: &Quiver, p: u32) -> String {
        let mut s = String::new();
        for (i, (c, path)) in self.terms.iter().enumerate() {
            let (sign, mag) = if *c > p / 2 && p > 2 { ("-", p - c) } else { ("+", *c) };
            if i == 0 {
                if sign == "-" {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {sign} "));
            }
            if mag != 1 {
                s.push_str(&format!("{mag} "));
            }
            s.push_str(&path.display(q));
        }
        s
    }

    fn normalized(&self, p: u32) -> Relation {
        let mut acc: Vec<(u32, Path)> = Vec::new();
        for (c, path) in &self.terms {
            let c = c % p;
            if let Some(e) = acc.iter_mut().find(|(_, q)| q == path) {
                e.0 = (e.0 + c) % p;
            } else {
                acc.push((c, path.clone()));
            }
        }
        acc.retain(|(c, _)| *c != 0);
        Relation { terms: acc }
    }

    fn reversed(&self, q: &Quiver) -> Relation {
        Relation { terms: self.terms.iter().map(|(c, path)| (*c, path.reversed(q))).collect() }
    }
}

/// Bound quiver algebra with an explicit basis of residue paths.
#[derive(Clone)]
pub struct BoundQuiverAlgebra {
    quiver: Quiver,
    p: u32,
    relations: Vec<Relation>,
    /// `J^nilpotency ⊆ I`.
    nilpotency: usize,
    basis: Vec<Path>,
    basis_index: HashMap<Path, usize>,
    /// Paths of length below `nilpotency`, longest first; columns of `ideal`.
    columns: Vec<Path>,
    column_index: HashMap<Path, usize>,
    ideal: SpanBuilder,
    opposite: OnceLock<Arc<BoundQuiverAlgebra>>,
}

impl fmt::Debug for BoundQuiverAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundQuiverAlgebra")
            .field("vertices", &self.quiver.vertices)
            .field("arrows", &self.quiver.arrows.iter().map(|a| &a.name).collect::<Vec<_>>())
            .field("relations", &self.relation_strings())
            .field("p", &self.p)
            .field("dim", &self.basis.len())
            .finish()
    }
}

impl PartialEq for BoundQuiverAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.quiver == other.quiver && self.relations == other.relations
    }
}
impl Eq for BoundQuiverAlgebra {}

fn path_order_key(p: &Path) -> (std::cmp::Reverse<usize>, usize, Vec<usize>) {
    (std::cmp::Reverse(p.len()), p.start, p.arrows.clone())
}

fn enumerate_paths(q: &Quiver, max_len: usize) -> Option<Vec<Path>> {
    let mut out: Vec<Path> = (0..q.num_vertices()).map(Path::trivial).collect();
    let mut frontier = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for path in &frontier {
            let end = path.end(q);
            for (ai, a) in q.arrows.iter().enumerate() {
                if a.source == end {
                    let mut arrows = path.arrows.clone();
                    arrows.push(ai);
                    next.push(Path { start: path.start, arrows });
                }
            }
        }
        if next.is_empty() {
            break;
        }
        out.extend(next.iter().cloned());
        if out.len() > PATH_COUNT_CAP {
            return None;
        }
        frontier = next;
    }
    Some(out)
}

/// All elements `u * r * v` for paths `u`, `v`, filtered by a predicate on the
/// (min, max) term lengths of the product.
fn ideal_products(
    q: &Quiver,
    relations: &[Relation],
    paths: &[Path],
    keep: impl Fn(usize, usize) -> bool,
) -> Vec<Vec<(u32, Path)>> {
    let mut out = Vec::new();
    for r in relations {
        let rs = r.terms[0].1.start;
        let rt = r.terms[0].1.end(q);
        let lmin = r.terms.iter().map(|t| t.1.len()).min().unwrap_or(0);
        let lmax = r.terms.iter().map(|t| t.1.len()).max().unwrap_or(0);
        for u in paths.iter().filter(|u| u.end(q) == rs) {
            for v in paths.iter().filter(|v| v.start == rt) {
                let extra = u.len() + v.len();
                if keep(lmin + extra, lmax + extra) {
                    out.push(
                        r.terms
                            .iter()
                            .map(|(c, t)| (*c, u.then(q, t).unwrap().then(q, v).unwrap()))
                            .collect(),
                    );
                }
            }
        }
    }
    out
}

impl BoundQuiverAlgebra {
    /// Builds `kQ/I` with the default nilpotency search cap.
    pub fn new(quiver: Quiver, relations: Vec<Relation>, p: u32) -> Result<Arc<Self>, AlgebraError> {
        Self::with_length_cap(quiver, relations, p, DEFAULT_LENGTH_CAP)
    }

    pub fn with_length_cap(
        quiver: Quiver,
        relations: Vec<Relation>,
        p: u32,
        length_cap: usize,
    ) -> Result<Arc<Self>, AlgebraError> {
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        let mut rels = Vec::new();
        for r in &relations {
            let shown = r.display(&quiver, p);
            let r = r.normalized(p);
            if r.terms.is_empty() {
                return Err(AlgebraError::MalformedRelation { relation: shown, reason: "relation is zero".into() });
            }
            let s = r.terms[0].1.start;
            let t = r.terms[0].1.end(&quiver);
            for (_, path) in &r.terms {
                if path.start != s || path.end(&quiver) != t {
                    return Err(AlgebraError::MalformedRelation {
                        relation: shown,
                        reason: "terms are not parallel paths".into(),
                    });
                }
                if path.len() < 2 {
                    return Err(AlgebraError::MalformedRelation {
                        relation: shown,
                        reason: format!("term `{}` has length below 2", path.display(&quiver)),
                    });
                }
            }
            rels.push(r);
        }

        // Smallest L such that every path of length L lies in the span of the
        // products u*r*v whose terms all have length at most L.
        let mut nilpotency = None;
        for len in 1..=length_cap.max(1) {
            let Some(paths) = enumerate_paths(&quiver, len) else {
                return Err(AlgebraError::NonAdmissible {
                    cap: length_cap,
                    detail: format!(" (more than {PATH_COUNT_CAP} paths of length <= {len})"),
                });
            };
            let index: HashMap<&Path, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
            let longest: Vec<&Path> = paths.iter().filter(|p| p.len() == len).collect();
            if longest.is_empty() {
                nilpotency = Some(len);
                break;
            }
            let mut span = SpanBuilder::new(p, paths.len());
            for element in ideal_products(&quiver, &rels, &paths, |_, hi| hi <= len) {
                let mut v = vec![0u32; paths.len()];
                for (c, path) in element {
                    let i = index[&path];
                    v[i] = (v[i] + c) % p;
                }
                span.insert(&v);
            }
            let all_in = longest.iter().all(|path| {
                let mut v = vec![0u32; paths.len()];
                v[index[path]] = 1;
                span.contains(&v)
            });
            if all_in {
                nilpotency = Some(len);
                break;
            }
        }
        let Some(nilpotency) = nilpotency else {
            return Err(AlgebraError::NonAdmissible { cap: length_cap, detail: String::new() });
        };

        let mut columns: Vec<Path> = enumerate_paths(&quiver, nilpotency.saturating_sub(1)).unwrap_or_default();
        columns.retain(|path| path.len() < nilpotency);
        columns.sort_by_key(path_order_key);
        let column_index: HashMap<Path, usize> = columns.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut ideal = SpanBuilder::new(p, columns.len());
        for element in ideal_products(&quiver, &rels, &columns, |lo, _| lo < nilpotency) {
            let mut v = vec![0u32; columns.len()];
            for (c, path) in element {
                if let Some(&i) = column_index.get(&path) {
                    v[i] = (v[i] + c) % p;
                }
            }
            ideal.insert(&v);
        }
        // Non-pivot columns form the residue basis.
        let mut basis: Vec<Path> = columns
            .iter()
            .filter(|path| {
                let mut v = vec![0u32; columns.len()];
                v[column_index[*path]] = 1;
                let r = ideal.reduce(&v);
                r[column_index[*path]] != 0
            })
            .cloned()
            .collect();
        basis.sort_by_key(|path| (path.len(), path.start, path.arrows.clone()));
        let basis_index = basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Ok(Arc::new(BoundQuiverAlgebra {
            quiver,
            p,
            relations: rels,
            nilpotency,
            basis,
            basis_index,
            columns,
            column_index,
            ideal,
            opposite: OnceLock::new(),
        }))
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }
    pub fn basis(&self) -> &[Path] {
        &self.basis
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn num_vertices(&self) -> usize {
        self.quiver.num_vertices()
    }
    /// Smallest `L` with `J^L ⊆ I`.
    pub fn nilpotency(&self) -> usize {
        self.nilpotency
    }

    pub fn relation_strings(&self) -> Vec<String> {
        self.relations.iter().map(|r| r.display(&self.quiver, self.p)).collect()
    }

    pub fn basis_index(&self, path: &Path) -> Option<usize> {
        self.basis_index.get(path).copied()
    }

    /// Normal form of a path as sparse coordinates on the residue basis.
    pub fn reduce_path(&self, path: &Path) -> Vec<(usize, u32)> {
        if path.len() >= self.nilpotency {
            return Vec::new();
        }
        let Some(&col) = self.column_index.get(path) else { return Vec::new() };
        let mut v = vec![0u32; self.columns.len()];
        v[col] = 1;
        let r = self.ideal.reduce(&v);
        r.iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (self.basis_index[&self.columns[i]], c))
            .collect()
    }

    /// Product of two basis elements (left to right), expanded on the basis.
    pub fn multiply(&self, i: usize, j: usize) -> Vec<(usize, u32)> {
        match self.basis[i].then(&self.quiver, &self.basis[j]) {
            Some(path) => self.reduce_path(&path),
            None => Vec::new(),
        }
    }

    /// Dense structure constants: `table[i][j]` holds the coordinates of `b_i b_j`.
    pub fn structure_constants(&self) -> Vec<Vec<Vec<u32>>> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut v = vec![0u32; n];
                        for (k, c) in self.multiply(i, j) {
                            v[k] = c;
                        }
                        v
                    })
                    .collect()
            })
            .collect()
    }

    /// Basis paths starting at `v`.
    pub fn basis_from(&self, v: usize) -> Vec<usize> {
        (0..self.basis.len()).filter(|&i| self.basis[i].start == v).collect()
    }

    /// Arrows reversed, relations transported.
    pub fn opposite(&self) -> Arc<BoundQuiverAlgebra> {
        self.opposite
            .get_or_init(|| {
                let q = self.quiver.opposite();
                let rels = self.relations.iter().map(|r| r.reversed(&self.quiver)).collect();
                BoundQuiverAlgebra::with_length_cap(q, rels, self.p, self.nilpotency.max(1) + 1)
                    .expect("opposite of an admissible algebra is admissible")
            })
            .clone()
    }

    /// Same algebra, either by pointer or structurally.
    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }

    /// Builds the relation `Σ c·path` from textual paths such as `a*b`.
    pub fn parse_path(q: &Quiver, text: &str) -> Result<Path, AlgebraError> {
        let text = text.trim();
        if let Some(v) = text.strip_prefix('e') {
            if let Some(vi) = q.vertex_index(v) {
                return Ok(Path::trivial(vi));
            }
        }
        let mut arrows = Vec::new();
        for name in text.split('*') {
            let name = name.trim();
            let a = q.arrow_index(name).ok_or_else(|| AlgebraError::UnknownArrow(name.to_string()))?;
            arrows.push(a);
        }
        let path = Path { start: q.arrows[arrows[0]].source, arrows };
        for w in path.arrows.windows(2) {
            if q.arrows[w[0]].target != q.arrows[w[1]].source {
                return Err(AlgebraError::MalformedRelation {
                    relation: text.to_string(),
                    reason: "arrows are not composable".into(),
                });
            }
        }
        Ok(path)
    }

    /// Parses `path (± [coeff] path)*` with `*` composition.
    pub fn parse_relation(q: &Quiver, text: &str, p: u32) -> Result<Relation, AlgebraError> {
        let mut terms = Vec::new();
        let mut sign = 1i64;
        let mut pending = String::new();
        let flush = |pending: &mut String, sign: i64, terms: &mut Vec<(u32, Path)>| -> Result<(), AlgebraError> {
            let t = pending.trim().to_string();
            pending.clear();
            if t.is_empty() {
                return Ok(());
            }
            let mut coeff = 1i64;
            let mut body = t.as_str();
            if let Some((head, rest)) = t.split_once(char::is_whitespace) {
                if let Ok(c) = head.parse::<i64>() {
                    coeff = c;
                    body = rest;
                }
            }
            let path = Self::parse_path(q, body).map_err(|e| match e {
                AlgebraError::UnknownArrow(a) => AlgebraError::MalformedRelation {
                    relation: text.to_string(),
                    reason: format!("unknown arrow `{a}`"),
                },
                other => other,
            })?;
            let c = crate::linalg::reduce_i64(sign * coeff, p);
            terms.push((c, path));
            Ok(())
        };
        for ch in text.chars() {
            match ch {
                '+' | '-' => {
                    flush(&mut pending, sign, &mut terms)?;
                    sign = if ch == '-' { -1 } else { 1 };
                }
                _ => pending.push(ch),
            }
        }
        flush(&mut pending, sign, &mut terms)?;
        if terms.is_empty() {
            return Err(AlgebraError::MalformedRelation { relation: text.into(), reason: "empty relation".into() });
        }
        Ok(Relation { terms })
    }

    /// Convenience constructor from textual data.
    pub fn from_text(
        vertices: &[&str],
        arrows: &[(&str, &str, &str)],
        relations: &[&str],
        p: u32,
    ) -> Result<Arc<Self>, AlgebraError> {
        let q = Quiver::new(vertices, arrows)?;
        let rels = relations
            .iter()
            .map(|r| Self::parse_relation(&q, r, p))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(q, rels, p)
    }
}

/// The running example: `1 -a-> 2 -b-> 3` with `a*b = 0`.
pub fn running_example(p: u32) -> Arc<BoundQuiverAlgebra> {
    BoundQuiverAlgebra::from_text(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")], &["a*b"], p)
        .expect("running example is admissible")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force oracle: enumerate all paths, quotient by the monomial ideal
    /// generated by the zero relations, count survivors.
    fn monomial_dim(q: &Quiver, zero_paths: &[Vec<usize>], max_len: usize) -> usize {
        enumerate_paths(q, max_len)
            .unwrap()
            .iter()
            .filter(|p| !zero_paths.iter().any(|z| p.arrows.windows(z.len()).any(|w| w == z.as_slice())))
            .count()
    }

    #[test]
    fn running_example_has_dimension_five() {
        let a = running_example(2);
        assert_eq!(a.dim(), 5);
        let q = a.quiver().clone();
        assert_eq!(monomial_dim(&q, &[vec![0, 1]], 6), 5);
        let names: Vec<String> = a.basis().iter().map(|p| p.display(a.quiver())).collect();
        assert_eq!(names, ["e1", "e2", "e3", "a", "b"]);
        assert_eq!(a.nilpotency(), 2);
    }

    #[test]
    fn field_as_path_algebra() {
        let k = BoundQuiverAlgebra::from_text(&["1"], &[], &[], 2).unwrap();
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis()[0], Path::trivial(0));
    }

    #[test]
    fn the_endomorphism_side_algebra() {
        let b = BoundQuiverAlgebra::from_text(&["4", "5", "6"], &[("c", "4", "5"), ("d", "5", "6")], &["c*d"], 2)
            .unwrap();
        assert_eq!(b.dim(), 5);
    }

    #[test]
    fn path_algebra_without_relations() {
        let a = BoundQuiverAlgebra::from_text(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")], &[], 3).unwrap();
        assert_eq!(a.dim(), 6);
    }

    #[test]
    fn commutative_square() {
        let a = BoundQuiverAlgebra::from_text(
            &["1", "2", "3", "4"],
            &[("a", "1", "2"), ("b", "2", "4"), ("c", "1", "3"), ("d", "3", "4")],
            &["a*b - c*d"],
            3,
        )
        .unwrap();
        // 4 idempotents, 4 arrows, one surviving length-two path
        assert_eq!(a.dim(), 9);
        let ab = a.reduce_path(&BoundQuiverAlgebra::parse_path(a.quiver(), "a*b").unwrap());
        let cd = a.reduce_path(&BoundQuiverAlgebra::parse_path(a.quiver(), "c*d").unwrap());
        assert_eq!(ab, cd);
    }

    #[test]
    fn loop_with_nilpotent_relation() {
        let a = BoundQuiverAlgebra::from_text(&["1"], &[("x", "1", "1")], &["x*x*x"], 5).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.nilpotency(), 3);
    }

    #[test]
    fn non_admissible_loop() {
        let err = BoundQuiverAlgebra::with_length_cap(
            Quiver::new(&["1"], &[("x", "1", "1")]).unwrap(),
            vec![],
            2,
            8,
        )
        .unwrap_err();
        assert!(matches!(err, AlgebraError::NonAdmissible { cap: 8, .. }));
        // x^2 - x^3 generates an ideal not containing any power of x
        let q = Quiver::new(&["1"], &[("x", "1", "1")]).unwrap();
        let r = BoundQuiverAlgebra::parse_relation(&q, "x*x - x*x*x", 2).unwrap();
        let err = BoundQuiverAlgebra::with_length_cap(q, vec![r], 2, 10).unwrap_err();
        assert!(matches!(err, AlgebraError::NonAdmissible { .. }));
    }

    #[test]
    fn malformed_relations() {
        let q = Quiver::new(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap();
        let r = BoundQuiverAlgebra::parse_relation(&q, "e1", 2).unwrap();
        let err = BoundQuiverAlgebra::new(q.clone(), vec![r], 2).unwrap_err();
        assert!(matches!(err, AlgebraError::MalformedRelation { ref relation, .. } if relation == "e1"));
        let r = BoundQuiverAlgebra::parse_relation(&q, "a*b + a", 2).unwrap();
        assert!(matches!(BoundQuiverAlgebra::new(q.clone(), vec![r], 2), Err(AlgebraError::MalformedRelation { .. })));
        assert!(BoundQuiverAlgebra::parse_relation(&q, "b*a", 2).is_err());
    }

    #[test]
    fn associativity_and_idempotents() {
        for a in [running_example(2), running_example(3)] {
            let t = a.structure_constants();
            let n = a.dim();
            let p = a.p();
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        // (b_i b_j) b_k
                        let mut left = vec![0u32; n];
                        for (m, &c) in t[i][j].iter().enumerate() {
                            for (r, &d) in t[m][k].iter().enumerate() {
                                left[r] = (left[r] + c * d) % p;
                            }
                        }
                        let mut right = vec![0u32; n];
                        for (m, &c) in t[j][k].iter().enumerate() {
                            for (r, &d) in t[i][m].iter().enumerate() {
                                right[r] = (right[r] + c * d) % p;
                            }
                        }
                        assert_eq!(left, right);
                    }
                }
            }
            for v in 0..a.num_vertices() {
                for w in 0..a.num_vertices() {
                    let ev = a.basis_index(&Path::trivial(v)).unwrap();
                    let ew = a.basis_index(&Path::trivial(w)).unwrap();
                    let expect = if v == w { vec![(ev, 1)] } else { vec![] };
                    assert_eq!(a.multiply(ev, ew), expect);
                }
            }
        }
    }

    #[test]
    fn opposite_reverses_arrows_and_is_involutive() {
        let a = running_example(2);
        let op = a.opposite();
        assert_eq!(op.quiver().arrows[0].source, 1);
        assert_eq!(op.quiver().arrows[0].target, 0);
        assert_eq!(op.relation_strings(), vec!["b*a"]);
        assert_eq!(op.dim(), 5);
        assert_eq!(*op.opposite(), *a);
        let k = BoundQuiverAlgebra::from_text(&["1"], &[], &[], 2).unwrap();
        assert_eq!(*k.opposite(), *k);
    }
}
