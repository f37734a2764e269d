//! Finite-dimensional modules as quiver representations.
//!
//! A module assigns a vector space `F_p^{d_v}` to each vertex and a matrix of
//! shape `d_target × d_source` to each arrow. The path `x*y` acts by
//! `M_y · M_x`.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{BoundQuiverAlgebra, Path};
use crate::linalg::{neg_mod, Matrix, SpanBuilder};
use crate::options::Options;
use crate::par;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("expected {expected} vertex dimensions, found {found}")]
    DimsLength { expected: usize, found: usize },
    #[error("arrow `{arrow}` acts by a {found:?} matrix, expected {expected:?}")]
    ShapeMismatch { arrow: String, expected: (usize, usize), found: (usize, usize) },
    #[error("relation `{0}` does not vanish on the representation")]
    RelationViolated(String),
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("block at vertex `{vertex}` is {found:?}, expected {expected:?}")]
    BlockShape { vertex: String, expected: (usize, usize), found: (usize, usize) },
    #[error("blocks do not commute with the action of arrow `{0}`")]
    NotIntertwining(String),
    #[error("{what}: search cap {cap} exhausted")]
    SearchExhausted { what: String, cap: u64 },
}

/// A representation of a bound quiver.
#[derive(Clone)]
pub struct Module {
    algebra: Arc<BoundQuiverAlgebra>,
    dims: Vec<usize>,
    action: Vec<Matrix>,
}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Module({}; dims {:?}", self.loewy_label(), self.dims)?;
        for (a, m) in self.algebra.quiver().arrows.iter().zip(&self.action) {
            if m.rows() > 0 && m.cols() > 0 {
                write!(f, "; {}={}", a.name, m)?;
            }
        }
        write!(f, ")")
    }
}

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.same_as(&other.algebra) && self.dims == other.dims && self.action == other.action
    }
}
impl Eq for Module {}

impl Module {
    /// Validates shapes and relations.
    pub fn new(algebra: Arc<BoundQuiverAlgebra>, dims: Vec<usize>, action: Vec<Matrix>) -> Result<Self, RepError> {
        let q = algebra.quiver();
        if dims.len() != q.num_vertices() {
            return Err(RepError::DimsLength { expected: q.num_vertices(), found: dims.len() });
        }
        if action.len() != q.arrows.len() {
            return Err(RepError::ShapeMismatch {
                arrow: format!("<{} arrows>", q.arrows.len()),
                expected: (q.arrows.len(), 0),
                found: (action.len(), 0),
            });
        }
        for (a, m) in q.arrows.iter().zip(&action) {
            let expected = (dims[a.target], dims[a.source]);
            if m.shape() != expected || m.p() != algebra.p() {
                return Err(RepError::ShapeMismatch { arrow: a.name.clone(), expected, found: m.shape() });
            }
        }
        let m = Module { algebra, dims, action };
        let p = m.p();
        for (rel, text) in m.algebra.relations().iter().zip(m.algebra.relation_strings()) {
            let first = &rel.terms[0].1;
            let mut acc = Matrix::zeros(p, m.dims[first.end(m.algebra.quiver())], m.dims[first.start]);
            for (c, path) in &rel.terms {
                acc = acc.add(&m.path_matrix(path).scale(*c));
            }
            if !acc.is_zero() {
                return Err(RepError::RelationViolated(text));
            }
        }
        Ok(m)
    }

    /// Internal constructor for representations known to satisfy the relations.
    pub(crate) fn from_parts(algebra: Arc<BoundQuiverAlgebra>, dims: Vec<usize>, action: Vec<Matrix>) -> Self {
        debug_assert!(Module::new(algebra.clone(), dims.clone(), action.clone()).is_ok());
        Module { algebra, dims, action }
    }

    pub fn zero(algebra: &Arc<BoundQuiverAlgebra>) -> Self {
        let dims = vec![0; algebra.num_vertices()];
        Self::with_zero_action(algebra, dims)
    }

    fn with_zero_action(algebra: &Arc<BoundQuiverAlgebra>, dims: Vec<usize>) -> Self {
        let p = algebra.p();
        let action = algebra.quiver().arrows.iter().map(|a| Matrix::zeros(p, dims[a.target], dims[a.source])).collect();
        Module { algebra: algebra.clone(), dims, action }
    }

    pub fn simple(algebra: &Arc<BoundQuiverAlgebra>, v: usize) -> Self {
        let mut dims = vec![0; algebra.num_vertices()];
        dims[v] = 1;
        Self::with_zero_action(algebra, dims)
    }

    /// `P(v)`: the span of residue paths starting at `v`, graded by their end vertex.
    pub fn projective(algebra: &Arc<BoundQuiverAlgebra>, v: usize) -> Self {
        let q = algebra.quiver();
        let p = algebra.p();
        let paths = algebra.basis_from(v);
        let mut dims = vec![0; q.num_vertices()];
        // position of each basis path inside its end vertex
        let mut slot = vec![usize::MAX; algebra.dim()];
        for &i in &paths {
            let end = algebra.basis()[i].end(q);
            slot[i] = dims[end];
            dims[end] += 1;
        }
        let mut action: Vec<Matrix> =
            q.arrows.iter().map(|a| Matrix::zeros(p, dims[a.target], dims[a.source])).collect();
        for &i in &paths {
            let path = &algebra.basis()[i];
            for (ai, a) in q.arrows.iter().enumerate() {
                if a.source != path.end(q) {
                    continue;
                }
                let ext = path.then(q, &Path::arrow(q, ai)).expect("composable");
                for (j, c) in algebra.reduce_path(&ext) {
                    action[ai].add_at(slot[j], slot[i], c);
                }
            }
        }
        Module { algebra: algebra.clone(), dims, action }
    }

    /// `I(v) = D(P^op(v))`.
    pub fn injective(algebra: &Arc<BoundQuiverAlgebra>, v: usize) -> Self {
        let op = algebra.opposite();
        Module::projective(&op, v).dual_over(algebra)
    }

    /// The projective `A = ⊕ P(v)`.
    pub fn regular(algebra: &Arc<BoundQuiverAlgebra>) -> Self {
        let parts: Vec<Module> = (0..algebra.num_vertices()).map(|v| Module::projective(algebra, v)).collect();
        Module::sum(algebra, &parts)
    }

    /// The dual `Hom_k(M, k)` as a module over the opposite algebra.
    pub fn dual(&self) -> Module {
        self.dual_over(&self.algebra.opposite())
    }

    /// The dual, hosted on a given algebra whose quiver is the opposite of ours.
    pub fn dual_over(&self, host: &Arc<BoundQuiverAlgebra>) -> Module {
        debug_assert_eq!(*host.quiver(), self.algebra.quiver().opposite());
        Module::from_parts(host.clone(), self.dims.clone(), self.action.iter().map(Matrix::transpose).collect())
    }

    pub fn algebra(&self) -> &Arc<BoundQuiverAlgebra> {
        &self.algebra
    }
    pub fn p(&self) -> u32 {
        self.algebra.p()
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn dim_at(&self, v: usize) -> usize {
        self.dims[v]
    }
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }
    pub fn action(&self, arrow: usize) -> &Matrix {
        &self.action[arrow]
    }
    pub fn actions(&self) -> &[Matrix] {
        &self.action
    }

    /// Matrix of a path, `M_{a_m} ⋯ M_{a_1}`.
    pub fn path_matrix(&self, path: &Path) -> Matrix {
        let mut m = Matrix::identity(self.p(), self.dims[path.start]);
        for &a in &path.arrows {
            m = self.action[a].mul(&m);
        }
        m
    }

    pub fn same_algebra(&self, other: &Module) -> Result<(), RepError> {
        if self.algebra.same_as(&other.algebra) {
            Ok(())
        } else {
            Err(RepError::AlgebraMismatch)
        }
    }

    /// Direct sum with the canonical inclusions and projections.
    pub fn direct_sum(algebra: &Arc<BoundQuiverAlgebra>, parts: &[Module]) -> DirectSum {
        let p = algebra.p();
        let n = algebra.num_vertices();
        let mut dims = vec![0; n];
        for m in parts {
            for v in 0..n {
                dims[v] += m.dims[v];
            }
        }
        let action = algebra
            .quiver()
            .arrows
            .iter()
            .enumerate()
            .map(|(ai, _)| Matrix::block_diag(p, &parts.iter().map(|m| &m.action[ai]).collect::<Vec<_>>()))
            .collect();
        let module = Module { algebra: algebra.clone(), dims: dims.clone(), action };
        let mut offsets = vec![0; n];
        let mut inclusions = Vec::new();
        let mut projections = Vec::new();
        for m in parts {
            let mut inc = Vec::with_capacity(n);
            let mut proj = Vec::with_capacity(n);
            for v in 0..n {
                let mut b = Matrix::zeros(p, dims[v], m.dims[v]);
                for k in 0..m.dims[v] {
                    b.set(offsets[v] + k, k, 1);
                }
                proj.push(b.transpose());
                inc.push(b);
                offsets[v] += m.dims[v];
            }
            inclusions.push(ModuleMap { source: m.clone(), target: module.clone(), blocks: inc });
            projections.push(ModuleMap { source: module.clone(), target: m.clone(), blocks: proj });
        }
        DirectSum { module, inclusions, projections }
    }

    pub fn sum(algebra: &Arc<BoundQuiverAlgebra>, parts: &[Module]) -> Module {
        Module::direct_sum(algebra, parts).module
    }

    pub fn power(&self, k: usize) -> Module {
        Module::sum(&self.algebra, &vec![self.clone(); k])
    }

    /// Subspaces `rad^k M` per vertex, as column bases, until zero.
    pub fn radical_series(&self) -> Vec<Vec<Matrix>> {
        let p = self.p();
        let q = self.algebra.quiver();
        let mut current: Vec<Matrix> = self.dims.iter().map(|&d| Matrix::identity(p, d)).collect();
        let mut series = vec![current.clone()];
        loop {
            let next: Vec<Matrix> = (0..q.num_vertices())
                .map(|v| {
                    let images: Vec<Matrix> = q
                        .arrows
                        .iter()
                        .enumerate()
                        .filter(|(_, a)| a.target == v)
                        .map(|(ai, a)| self.action[ai].mul(&current[a.source]))
                        .collect();
                    let refs: Vec<&Matrix> = images.iter().collect();
                    Matrix::hstack(p, self.dims[v], &refs).column_space()
                })
                .collect();
            if next.iter().all(|b| b.cols() == 0) {
                break;
            }
            series.push(next.clone());
            current = next;
        }
        series
    }

    /// Dimension vectors of the radical layers `rad^k M / rad^{k+1} M`.
    pub fn radical_layers(&self) -> Vec<Vec<usize>> {
        if self.is_zero() {
            return Vec::new();
        }
        let s = self.radical_series();
        (0..s.len())
            .map(|k| {
                (0..self.dims.len())
                    .map(|v| s[k][v].cols() - s.get(k + 1).map_or(0, |n| n[v].cols()))
                    .collect()
            })
            .collect()
    }

    /// Loewy diagram such as `1/2`; simples in one layer are separated by `,`.
    pub fn loewy_label(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let names = &self.algebra.quiver().vertices;
        self.radical_layers()
            .iter()
            .map(|layer| {
                let mut parts = Vec::new();
                for (v, &d) in layer.iter().enumerate() {
                    for _ in 0..d {
                        parts.push(names[v].as_str());
                    }
                }
                parts.join(",")
            })
            .collect::<Vec<_>>()
            .join("/")
    }

    /// Labels of the indecomposable summands joined by `⊕`.
    pub fn describe(&self, opts: &Options) -> String {
        match decompose_with(self, opts) {
            Ok(parts) if !parts.is_empty() => parts
                .iter()
                .flat_map(|(m, k)| std::iter::repeat_n(m.loewy_label(), *k))
                .collect::<Vec<_>>()
                .join(" ⊕ "),
            _ => self.loewy_label(),
        }
    }

    /// The submodule spanned by per-vertex column bases, which must be closed
    /// under the action, with its inclusion.
    pub fn submodule(&self, bases: Vec<Matrix>) -> (Module, ModuleMap) {
        let p = self.p();
        let q = self.algebra.quiver();
        let dims: Vec<usize> = bases.iter().map(Matrix::cols).collect();
        let action = q
            .arrows
            .iter()
            .enumerate()
            .map(|(ai, a)| solve_in(&bases[a.target], &self.action[ai].mul(&bases[a.source]), p))
            .collect();
        let sub = Module::from_parts(self.algebra.clone(), dims, action);
        let inc = ModuleMap { source: sub.clone(), target: self.clone(), blocks: bases };
        (sub, inc)
    }

    /// Quotient by a submodule given by column bases, with the projection.
    pub fn quotient(&self, bases: &[Matrix]) -> (Module, ModuleMap) {
        let blocks: Vec<Matrix> = bases.to_vec();
        let (sub, _) = self.submodule(blocks.clone());
        let inc = ModuleMap { source: sub, target: self.clone(), blocks };
        cokernel(&inc)
    }
}

/// `X` with `base * X = rhs`; the columns of `rhs` must lie in the column span of `base`.
pub(crate) fn solve_in(base: &Matrix, rhs: &Matrix, p: u32) -> Matrix {
    if base.cols() == 0 || rhs.cols() == 0 {
        debug_assert!(rhs.is_zero());
        return Matrix::zeros(p, base.cols(), rhs.cols());
    }
    base.solve(rhs).expect("image lies in the subspace")
}

/// A direct sum with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: Module,
    pub inclusions: Vec<ModuleMap>,
    pub projections: Vec<ModuleMap>,
}

/// A homomorphism of representations.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleMap {
    source: Module,
    target: Module,
    blocks: Vec<Matrix>,
}

impl fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleMap({} -> {}; {:?})", self.source.loewy_label(), self.target.loewy_label(), self.blocks)
    }
}

impl ModuleMap {
    /// Validates shapes and the intertwining condition.
    pub fn new(source: Module, target: Module, blocks: Vec<Matrix>) -> Result<Self, RepError> {
        source.same_algebra(&target)?;
        let q = source.algebra.quiver();
        if blocks.len() != q.num_vertices() {
            return Err(RepError::DimsLength { expected: q.num_vertices(), found: blocks.len() });
        }
        for (v, b) in blocks.iter().enumerate() {
            let expected = (target.dims[v], source.dims[v]);
            if b.shape() != expected {
                return Err(RepError::BlockShape { vertex: q.vertices[v].clone(), expected, found: b.shape() });
            }
        }
        for (ai, a) in q.arrows.iter().enumerate() {
            let lhs = target.action[ai].mul(&blocks[a.source]);
            let rhs = blocks[a.target].mul(&source.action[ai]);
            if lhs != rhs {
                return Err(RepError::NotIntertwining(a.name.clone()));
            }
        }
        Ok(ModuleMap { source, target, blocks })
    }

    pub(crate) fn from_parts(source: Module, target: Module, blocks: Vec<Matrix>) -> Self {
        debug_assert!(ModuleMap::new(source.clone(), target.clone(), blocks.clone()).is_ok());
        ModuleMap { source, target, blocks }
    }

    pub fn identity(m: &Module) -> Self {
        let blocks = m.dims.iter().map(|&d| Matrix::identity(m.p(), d)).collect();
        ModuleMap { source: m.clone(), target: m.clone(), blocks }
    }

    pub fn zero(source: &Module, target: &Module) -> Self {
        let p = source.p();
        let blocks = source.dims.iter().zip(&target.dims).map(|(&s, &t)| Matrix::zeros(p, t, s)).collect();
        ModuleMap { source: source.clone(), target: target.clone(), blocks }
    }

    pub fn source(&self) -> &Module {
        &self.source
    }
    pub fn target(&self) -> &Module {
        &self.target
    }
    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }
    pub fn block(&self, v: usize) -> &Matrix {
        &self.blocks[v]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ModuleMap) -> ModuleMap {
        debug_assert_eq!(first.target.dims, self.source.dims);
        let blocks = self.blocks.iter().zip(&first.blocks).map(|(g, f)| g.mul(f)).collect();
        ModuleMap { source: first.source.clone(), target: self.target.clone(), blocks }
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.add(b)).collect();
        ModuleMap { source: self.source.clone(), target: self.target.clone(), blocks }
    }

    pub fn sub(&self, other: &ModuleMap) -> ModuleMap {
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.sub(b)).collect();
        ModuleMap { source: self.source.clone(), target: self.target.clone(), blocks }
    }

    pub fn scale(&self, c: u32) -> ModuleMap {
        let blocks = self.blocks.iter().map(|a| a.scale(c)).collect();
        ModuleMap { source: self.source.clone(), target: self.target.clone(), blocks }
    }

    /// Same blocks, reinterpreted between modules with identical representations.
    pub fn retarget(&self, source: &Module, target: &Module) -> ModuleMap {
        ModuleMap::from_parts(source.clone(), target.clone(), self.blocks.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().map(Matrix::rank).sum()
    }

    pub fn is_mono(&self) -> bool {
        self.rank() == self.source.total_dim()
    }

    pub fn is_epi(&self) -> bool {
        self.rank() == self.target.total_dim()
    }

    pub fn is_iso(&self) -> bool {
        self.source.dims == self.target.dims && self.is_mono()
    }

    pub fn inverse(&self) -> Option<ModuleMap> {
        let blocks = self.blocks.iter().map(Matrix::inverse).collect::<Option<Vec<_>>>()?;
        Some(ModuleMap { source: self.target.clone(), target: self.source.clone(), blocks })
    }

    /// `φ^k` for an endomorphism.
    pub fn pow(&self, k: u64) -> ModuleMap {
        let blocks = self.blocks.iter().map(|b| b.pow(k)).collect();
        ModuleMap { source: self.source.clone(), target: self.target.clone(), blocks }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.pow(self.source.total_dim().max(1) as u64).is_zero()
    }

    fn vectorize(&self) -> Vec<u32> {
        self.blocks.iter().flat_map(|b| b.data().iter().copied()).collect()
    }
}

/// `ker f` with its inclusion into the source.
pub fn kernel(f: &ModuleMap) -> (Module, ModuleMap) {
    let bases = f.blocks.iter().map(Matrix::nullspace).collect();
    f.source.submodule(bases)
}

/// `coker f` with the projection from the target.
pub fn cokernel(f: &ModuleMap) -> (Module, ModuleMap) {
    let p = f.source.p();
    let n = &f.target;
    let q = n.algebra.quiver();
    let projs: Vec<Matrix> = f.blocks.iter().map(Matrix::cokernel_projection).collect();
    let sections: Vec<Matrix> = projs
        .iter()
        .map(|m| if m.rows() == 0 { Matrix::zeros(p, m.cols(), 0) } else { m.right_inverse().expect("full row rank") })
        .collect();
    let dims: Vec<usize> = projs.iter().map(Matrix::rows).collect();
    let action = q
        .arrows
        .iter()
        .enumerate()
        .map(|(ai, a)| projs[a.target].mul(&n.action[ai]).mul(&sections[a.source]))
        .collect();
    let c = Module::from_parts(n.algebra.clone(), dims, action);
    let proj = ModuleMap::from_parts(n.clone(), c.clone(), projs);
    (c, proj)
}

/// `im f` with the corestriction `source → im` and the inclusion `im → target`.
pub fn image(f: &ModuleMap) -> (Module, ModuleMap, ModuleMap) {
    let p = f.source.p();
    let bases: Vec<Matrix> = f.blocks.iter().map(Matrix::column_space).collect();
    let (im, inc) = f.target.submodule(bases.clone());
    let factor = bases.iter().zip(&f.blocks).map(|(b, fb)| solve_in(b, fb, p)).collect();
    let epi = ModuleMap::from_parts(f.source.clone(), im.clone(), factor);
    (im, epi, inc)
}

/// A basis of `Hom(M, N)` with coordinate solving.
#[derive(Clone, Debug)]
pub struct HomSpace {
    source: Module,
    target: Module,
    /// Basis maps as columns, each vectorized block by block in row-major order.
    basis: Matrix,
    coords: Matrix,
}

impl HomSpace {
    pub fn new(source: &Module, target: &Module) -> Result<Self, RepError> {
        source.same_algebra(target)?;
        let p = source.p();
        let q = source.algebra.quiver();
        let nv = q.num_vertices();
        let mut offsets = vec![0usize; nv + 1];
        for v in 0..nv {
            offsets[v + 1] = offsets[v] + target.dims[v] * source.dims[v];
        }
        let unknowns = offsets[nv];
        let eq_rows: usize = q.arrows.iter().map(|a| target.dims[a.target] * source.dims[a.source]).sum();
        let mut eqs = Matrix::zeros(p, eq_rows, unknowns);
        let mut row0 = 0;
        for (ai, a) in q.arrows.iter().enumerate() {
            let (i, j) = (a.source, a.target);
            let (mi, nj, ni, mj) = (source.dims[i], target.dims[j], target.dims[i], source.dims[j]);
            let na = &target.action[ai];
            let ma = &source.action[ai];
            // N_a f_i - f_j M_a = 0, entry (x, y) with x < nj, y < mi
            for x in 0..nj {
                for y in 0..mi {
                    let r = row0 + x * mi + y;
                    for k in 0..ni {
                        let c = na.get(x, k);
                        if c != 0 {
                            eqs.add_at(r, offsets[i] + k * mi + y, c);
                        }
                    }
                    for k in 0..mj {
                        let c = ma.get(k, y);
                        if c != 0 {
                            eqs.add_at(r, offsets[j] + x * mj + k, neg_mod(c, p));
                        }
                    }
                }
            }
            row0 += nj * mi;
        }
        let basis = eqs.nullspace();
        let coords = if basis.cols() == 0 {
            Matrix::zeros(p, 0, unknowns)
        } else {
            basis.left_inverse().expect("basis has full column rank")
        };
        Ok(HomSpace { source: source.clone(), target: target.clone(), basis, coords })
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    fn blocks_of(&self, v: &[u32]) -> Vec<Matrix> {
        let p = self.source.p();
        let mut off = 0;
        (0..self.source.dims.len())
            .map(|u| {
                let (r, c) = (self.target.dims[u], self.source.dims[u]);
                let m = Matrix::from_vec(p, r, c, v[off..off + r * c].to_vec());
                off += r * c;
                m
            })
            .collect()
    }

    pub fn element(&self, i: usize) -> ModuleMap {
        let v = self.basis.column(i);
        ModuleMap { source: self.source.clone(), target: self.target.clone(), blocks: self.blocks_of(&v) }
    }

    pub fn maps(&self) -> Vec<ModuleMap> {
        (0..self.dim()).map(|i| self.element(i)).collect()
    }

    /// `Σ c_i b_i`.
    pub fn combine(&self, coeffs: &[u32]) -> ModuleMap {
        let v = self.basis.mul(&Matrix::column_vector(self.source.p(), coeffs)).to_vec();
        ModuleMap { source: self.source.clone(), target: self.target.clone(), blocks: self.blocks_of(&v) }
    }

    /// Coordinates of a map in this basis.
    pub fn coordinates(&self, f: &ModuleMap) -> Vec<u32> {
        let v = Matrix::column_vector(self.source.p(), &f.vectorize());
        self.coords.mul(&v).to_vec()
    }
}

pub fn hom_space(m: &Module, n: &Module) -> Result<Vec<ModuleMap>, RepError> {
    Ok(HomSpace::new(m, n)?.maps())
}

pub fn hom_dim(m: &Module, n: &Module) -> usize {
    HomSpace::new(m, n).map_or(0, |h| h.dim())
}

/// An indecomposable summand with its structure maps into and out of the whole.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: Module,
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
}

/// Splits along `M = im φ^N ⊕ ker φ^N` for an endomorphism neither nilpotent nor invertible.
fn fitting_split(m: &Module, phi: &ModuleMap) -> [Summand; 2] {
    let p = m.p();
    let psi = phi.pow(m.total_dim() as u64);
    let im_bases: Vec<Matrix> = psi.blocks.iter().map(Matrix::column_space).collect();
    let ker_bases: Vec<Matrix> = psi.blocks.iter().map(Matrix::nullspace).collect();
    let (im, im_inc) = m.submodule(im_bases.clone());
    let (ker, ker_inc) = m.submodule(ker_bases.clone());
    let mut im_proj = Vec::new();
    let mut ker_proj = Vec::new();
    for v in 0..m.dims.len() {
        let d = m.dims[v];
        let k = im_bases[v].cols();
        let change = Matrix::hstack(p, d, &[&im_bases[v], &ker_bases[v]]);
        let inv = change.inverse().expect("Fitting decomposition is direct");
        im_proj.push(inv.submatrix(0, k, 0, d));
        ker_proj.push(inv.submatrix(k, d - k, 0, d));
    }
    [
        Summand { projection: ModuleMap::from_parts(m.clone(), im.clone(), im_proj), module: im, inclusion: im_inc },
        Summand { projection: ModuleMap::from_parts(m.clone(), ker.clone(), ker_proj), module: ker, inclusion: ker_inc },
    ]
}

fn splits(phi: &ModuleMap) -> bool {
    let n = phi.source.total_dim() as u64;
    let psi = phi.pow(n);
    !psi.is_zero() && psi.rank() < phi.source.total_dim()
}

/// An endomorphism that is neither nilpotent nor invertible, or `None` when
/// `End(M)` is certified local.
pub fn find_splitting(m: &Module, opts: &Options) -> Result<Option<ModuleMap>, RepError> {
    if m.total_dim() <= 1 {
        return Ok(None);
    }
    let end = HomSpace::new(m, m)?;
    let d = end.dim();
    if d == 1 {
        return Ok(None);
    }
    let p = m.p();
    let id = ModuleMap::identity(m);
    let basis = end.maps();
    let shift = |f: &ModuleMap, l: u32| f.sub(&id.scale(l));

    // Each basis element should be a scalar plus a nilpotent; any shift that is
    // singular without being nilpotent splits the module.
    let lambda_candidates: Vec<u32> = if p <= 1 << 12 { (0..p).collect() } else { Vec::new() };
    let mut radical_part = Vec::new();
    let mut certified = true;
    for b in &basis {
        let mut found = None;
        for &l in &lambda_candidates {
            let s = shift(b, l);
            if s.is_nilpotent() {
                found = Some(s);
                break;
            }
            if splits(&s) {
                return Ok(Some(s));
            }
        }
        match found {
            Some(s) => radical_part.push(s),
            None => certified = false,
        }
    }
    if certified {
        let mut span = SpanBuilder::new(p, end.basis.rows());
        for s in &radical_part {
            span.insert(&s.vectorize());
        }
        let closed = radical_part
            .iter()
            .all(|x| radical_part.iter().all(|y| span.contains(&x.after(y).vectorize())));
        if closed {
            return Ok(None);
        }
        for x in &radical_part {
            for y in &radical_part {
                for cand in [x.after(y), x.add(y)] {
                    for &l in &lambda_candidates {
                        let s = shift(&cand, l);
                        if splits(&s) {
                            return Ok(Some(s));
                        }
                    }
                }
            }
        }
    }
    // Exhaustive search over End(M) when small enough.
    if (p as f64).powi(d as i32) <= opts.end_cap as f64 {
        let total = (p as u64).pow(d as u32);
        let mut coeffs = vec![0u32; d];
        for _ in 0..total {
            let f = end.combine(&coeffs);
            if splits(&f) {
                return Ok(Some(f));
            }
            for c in coeffs.iter_mut() {
                *c += 1;
                if *c < p {
                    break;
                }
                *c = 0;
            }
        }
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..4096 {
        let coeffs: Vec<u32> = (0..d).map(|_| rng.gen_range(0..p)).collect();
        let f = end.combine(&coeffs);
        if splits(&f) {
            return Ok(Some(f));
        }
    }
    Err(RepError::SearchExhausted { what: format!("idempotent search in a {d}-dimensional endomorphism ring"), cap: opts.end_cap })
}

pub fn is_indecomposable(m: &Module, opts: &Options) -> Result<bool, RepError> {
    Ok(!m.is_zero() && find_splitting(m, opts)?.is_none())
}

/// Krull–Schmidt decomposition into indecomposable summands with structure maps.
pub fn split_summands(m: &Module, opts: &Options) -> Result<Vec<Summand>, RepError> {
    if m.is_zero() {
        return Ok(Vec::new());
    }
    match find_splitting(m, opts)? {
        None => Ok(vec![Summand {
            module: m.clone(),
            inclusion: ModuleMap::identity(m),
            projection: ModuleMap::identity(m),
        }]),
        Some(phi) => {
            let mut out = Vec::new();
            for part in fitting_split(m, &phi) {
                for sub in split_summands(&part.module, opts)? {
                    out.push(Summand {
                        inclusion: part.inclusion.after(&sub.inclusion),
                        projection: sub.projection.after(&part.projection),
                        module: sub.module,
                    });
                }
            }
            Ok(out)
        }
    }
}

/// Isomorphism of indecomposables: some basis element of `Hom(M, N)` is
/// invertible as soon as one isomorphism exists.
pub fn indecomposable_iso(m: &Module, n: &Module) -> Option<ModuleMap> {
    if m.dims != n.dims || !m.algebra.same_as(&n.algebra) {
        return None;
    }
    let h = HomSpace::new(m, n).ok()?;
    h.maps().into_iter().find(ModuleMap::is_iso)
}

/// Summands grouped by isomorphism class, in order of first appearance.
pub fn group_summands(summands: Vec<Summand>) -> Vec<(Vec<Summand>, Vec<ModuleMap>)> {
    // each group carries the isomorphisms from its first member to each member
    let mut groups: Vec<(Vec<Summand>, Vec<ModuleMap>)> = Vec::new();
    for s in summands {
        let hit = groups.iter().position(|(g, _)| indecomposable_iso(&g[0].module, &s.module).is_some());
        match hit {
            Some(k) => {
                let iso = indecomposable_iso(&groups[k].0[0].module, &s.module).expect("checked");
                groups[k].0.push(s);
                groups[k].1.push(iso);
            }
            None => {
                let id = ModuleMap::identity(&s.module);
                groups.push((vec![s], vec![id]));
            }
        }
    }
    groups
}

pub fn decompose_with(m: &Module, opts: &Options) -> Result<Vec<(Module, usize)>, RepError> {
    let groups = group_summands(split_summands(m, opts)?);
    Ok(groups.into_iter().map(|(g, _)| (g[0].module.clone(), g.len())).collect())
}

pub fn decompose(m: &Module) -> Result<Vec<(Module, usize)>, RepError> {
    decompose_with(m, &Options::default())
}

/// Isomorphism test with an explicit invertible witness.
pub fn is_isomorphic_with(m: &Module, n: &Module, opts: &Options) -> Result<Option<ModuleMap>, RepError> {
    m.same_algebra(n)?;
    if m.dims != n.dims {
        return Ok(None);
    }
    if m.is_zero() {
        return Ok(Some(ModuleMap::zero(m, n)));
    }
    let sm = split_summands(m, opts)?;
    let mut sn: Vec<Option<Summand>> = split_summands(n, opts)?.into_iter().map(Some).collect();
    if sm.len() != sn.len() {
        return Ok(None);
    }
    let mut witness = ModuleMap::zero(m, n);
    for a in &sm {
        let mut matched = false;
        for slot in sn.iter_mut() {
            let Some(b) = slot else { continue };
            if let Some(iso) = indecomposable_iso(&a.module, &b.module) {
                witness = witness.add(&b.inclusion.after(&iso).after(&a.projection));
                *slot = None;
                matched = true;
                break;
            }
        }
        if !matched {
            return Ok(None);
        }
    }
    debug_assert!(witness.is_iso());
    Ok(Some(witness))
}

pub fn is_isomorphic(m: &Module, n: &Module) -> Result<Option<ModuleMap>, RepError> {
    is_isomorphic_with(m, n, &Options::default())
}

/// Dimension vectors with total dimension in `1..=bound`, ordered by total
/// dimension and then lexicographically with earlier vertices first.
pub fn dimension_vectors(vertices: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for total in 1..=bound {
        let mut cur = vec![0; vertices];
        compositions(total, 0, &mut cur, &mut out);
    }
    out
}

fn compositions(rest: usize, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if i + 1 == cur.len() {
        cur[i] = rest;
        out.push(cur.clone());
        return;
    }
    if cur.is_empty() {
        return;
    }
    for k in (0..=rest).rev() {
        cur[i] = k;
        compositions(rest - k, i + 1, cur, out);
    }
}

fn support_connected(algebra: &BoundQuiverAlgebra, dims: &[usize]) -> bool {
    let support: Vec<usize> = (0..dims.len()).filter(|&v| dims[v] > 0).collect();
    let Some(&first) = support.first() else { return false };
    let mut seen = vec![false; dims.len()];
    seen[first] = true;
    let mut stack = vec![first];
    while let Some(v) = stack.pop() {
        for a in &algebra.quiver().arrows {
            for (x, y) in [(a.source, a.target), (a.target, a.source)] {
                if x == v && dims[y] > 0 && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    support.iter().all(|&v| seen[v])
}

/// All representations with a given dimension vector, by index in
/// lexicographic order of their concatenated matrix entries.
fn representation_at(algebra: &Arc<BoundQuiverAlgebra>, dims: &[usize], mut index: u64) -> Option<Module> {
    let p = algebra.p() as u64;
    let arrows = &algebra.quiver().arrows;
    let sizes: Vec<usize> = arrows.iter().map(|a| dims[a.target] * dims[a.source]).collect();
    let total: usize = sizes.iter().sum();
    let mut digits = vec![0u32; total];
    for d in digits.iter_mut().rev() {
        *d = (index % p) as u32;
        index /= p;
    }
    let mut off = 0;
    let action = arrows
        .iter()
        .zip(&sizes)
        .map(|(a, &s)| {
            let m = Matrix::from_vec(p as u32, dims[a.target], dims[a.source], digits[off..off + s].to_vec());
            off += s;
            m
        })
        .collect();
    Module::new(algebra.clone(), dims.to_vec(), action).ok()
}

/// Indecomposables up to isomorphism with total dimension at most `dim_bound`.
pub fn enumerate_indecomposable_modules(
    algebra: &Arc<BoundQuiverAlgebra>,
    dim_bound: usize,
    opts: &Options,
) -> Result<Vec<Module>, RepError> {
    let p = algebra.p() as u64;
    let mut budget = opts.search_cap;
    let mut found: Vec<Module> = Vec::new();
    for dims in dimension_vectors(algebra.num_vertices(), dim_bound) {
        if !support_connected(algebra, &dims) {
            continue;
        }
        let entries: u32 = algebra.quiver().arrows.iter().map(|a| (dims[a.target] * dims[a.source]) as u32).sum();
        let count = p.checked_pow(entries).filter(|&c| c <= budget).ok_or_else(|| RepError::SearchExhausted {
            what: format!("enumerating representations of dimension vector {dims:?}"),
            cap: opts.search_cap,
        })?;
        budget -= count;
        let candidates = par::map_range(opts.strategy, count as usize, |k| {
            let m = representation_at(algebra, &dims, k as u64)?;
            match is_indecomposable(&m, opts) {
                Ok(true) => Some(Ok(m)),
                Ok(false) => None,
                Err(e) => Some(Err(e)),
            }
        });
        let mut reps: Vec<Module> = Vec::new();
        for c in candidates.into_iter().flatten() {
            let m = c?;
            if !reps.iter().any(|r| indecomposable_iso(r, &m).is_some()) {
                reps.push(m);
            }
        }
        found.extend(reps);
    }
    Ok(found)
}

/// Enumerated indecomposables together with a finiteness verdict.
#[derive(Clone, Debug)]
pub struct Catalog {
    pub modules: Vec<Module>,
    pub bound: usize,
    pub max_dim: usize,
    /// The bound covers twice the largest indecomposable found and nothing
    /// larger appeared.
    pub representation_finite: bool,
}

pub fn catalog(algebra: &Arc<BoundQuiverAlgebra>, dim_bound: usize, opts: &Options) -> Result<Catalog, RepError> {
    let modules = enumerate_indecomposable_modules(algebra, dim_bound, opts)?;
    let max_dim = modules.iter().map(Module::total_dim).max().unwrap_or(0);
    Ok(Catalog { representation_finite: max_dim > 0 && dim_bound >= 2 * max_dim, modules, bound: dim_bound, max_dim })
}

impl Catalog {
    /// Index of the catalog entry isomorphic to an indecomposable `m`.
    pub fn identify(&self, m: &Module) -> Option<usize> {
        self.modules.iter().position(|x| indecomposable_iso(x, m).is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::running_example;

    fn a() -> Arc<BoundQuiverAlgebra> {
        running_example(2)
    }

    fn m23(alg: &Arc<BoundQuiverAlgebra>, c: i64) -> Module {
        let p = alg.p();
        Module::new(
            alg.clone(),
            vec![0, 1, 1],
            vec![Matrix::zeros(p, 1, 0), Matrix::from_rows(p, 1, 1, &[vec![c]])],
        )
        .unwrap()
    }

    #[test]
    fn check_module_examples() {
        let alg = a();
        assert_eq!(m23(&alg, 1).loewy_label(), "2/3");
        assert!(Module::new(alg.clone(), vec![0, 0, 0], vec![Matrix::zeros(2, 0, 0), Matrix::zeros(2, 0, 0)])
            .unwrap()
            .is_zero());
        let one = Matrix::from_rows(2, 1, 1, &[vec![1]]);
        let err = Module::new(alg, vec![1, 1, 1], vec![one.clone(), one]).unwrap_err();
        assert_eq!(err, RepError::RelationViolated("a*b".into()));
    }

    #[test]
    fn projectives_and_injectives() {
        let alg = a();
        let labels: Vec<String> = (0..3).map(|v| Module::projective(&alg, v).loewy_label()).collect();
        assert_eq!(labels, ["1/2", "2/3", "3"]);
        let labels: Vec<String> = (0..3).map(|v| Module::injective(&alg, v).loewy_label()).collect();
        assert_eq!(labels, ["1", "1/2", "2/3"]);
        assert_eq!(Module::simple(&alg, 2), Module::projective(&alg, 2));
    }

    #[test]
    fn hom_dimensions() {
        let alg = a();
        let s = |v| Module::simple(&alg, v);
        assert_eq!(hom_dim(&m23(&alg, 1), &s(1)), 1);
        assert_eq!(hom_dim(&s(0), &s(1)), 0);
        for v in 0..3 {
            for m in [m23(&alg, 1), s(0), Module::regular(&alg)] {
                assert_eq!(hom_dim(&Module::projective(&alg, v), &m), m.dim_at(v));
            }
        }
    }

    #[test]
    fn kernel_cokernel_image() {
        let alg = a();
        let p23 = m23(&alg, 1);
        let s3 = Module::simple(&alg, 2);
        let inc = hom_space(&s3, &p23).unwrap().remove(0);
        let (c, _) = cokernel(&inc);
        assert_eq!(c.dims(), &[0, 1, 0]);
        let (k, _) = kernel(&ModuleMap::identity(&p23));
        assert!(k.is_zero());
        let onto = hom_space(&p23, &Module::simple(&alg, 1)).unwrap().remove(0);
        let (im, epi, emb) = image(&onto);
        assert_eq!(im.dims(), &[0, 1, 0]);
        assert_eq!(emb.after(&epi), onto);
    }

    #[test]
    fn decomposition_examples() {
        let alg = a();
        let t = Module::sum(&alg, &[m23(&alg, 1), Module::projective(&alg, 0), Module::simple(&alg, 0)]);
        let parts = decompose(&t).unwrap();
        assert_eq!(parts.len(), 3);
        assert!(parts.iter().all(|(_, k)| *k == 1));
        let p1 = Module::projective(&alg, 0);
        let parts = decompose(&p1.power(2)).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].1, 2);
        assert_eq!(parts[0].0.loewy_label(), "1/2");
    }

    #[test]
    fn isomorphism_examples() {
        let alg = running_example(5);
        for c in 1..5 {
            assert!(is_isomorphic(&m23(&alg, 1), &m23(&alg, c)).unwrap().is_some());
        }
        assert!(is_isomorphic(&m23(&alg, 1), &m23(&alg, 0)).unwrap().is_none());
        assert!(is_isomorphic(&Module::simple(&alg, 1), &Module::simple(&alg, 2)).unwrap().is_none());
    }

    #[test]
    fn enumeration_of_the_running_example() {
        let alg = a();
        let opts = Options::default();
        let found = enumerate_indecomposable_modules(&alg, 3, &opts).unwrap();
        let labels: Vec<String> = found.iter().map(Module::loewy_label).collect();
        assert_eq!(labels, ["1", "2", "3", "1/2", "2/3"]);
        assert!(enumerate_indecomposable_modules(&alg, 0, &opts).unwrap().is_empty());
        let k = BoundQuiverAlgebra::from_text(&["1"], &[], &[], 2).unwrap();
        assert_eq!(enumerate_indecomposable_modules(&k, 5, &opts).unwrap().len(), 1);
        let cat = catalog(&alg, 4, &opts).unwrap();
        assert!(cat.representation_finite);
        assert_eq!(cat.modules.len(), 5);
    }

    #[test]
    fn kronecker_regular_modules_are_found() {
        // dimension vector (1,1) carries p+1 indecomposables: the projective line
        let kr = BoundQuiverAlgebra::from_text(&["1", "2"], &[("x", "1", "2"), ("y", "1", "2")], &[], 3).unwrap();
        let found = enumerate_indecomposable_modules(&kr, 2, &Options::default()).unwrap();
        assert_eq!(found.iter().filter(|m| m.dims() == [1, 1]).count(), 4);
    }

    #[test]
    fn sequential_and_parallel_enumeration_agree() {
        let alg = running_example(3);
        let a = enumerate_indecomposable_modules(&alg, 4, &Options::default()).unwrap();
        let b = enumerate_indecomposable_modules(&alg, 4, &Options::default().sequential()).unwrap();
        assert_eq!(a, b);
    }
}
