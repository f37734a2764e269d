//! Bounded cochain complexes, the homotopy category and Hom-spaces in the
//! bounded derived category.
//!
//! Complexes occupying `w` consecutive degrees are encoded as modules over the
//! algebra of `A`-complexes of width `w` (the tensor product of `A` with the
//! linear quiver on `w` vertices modulo squares), which gives decomposition and
//! isomorphism tests of complexes for free.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::algebra::{AlgebraError, BoundQuiverAlgebra, Path, Quiver, Relation};
use crate::homology::{generator_map, projective_cover, top_generators};
use crate::linalg::{Matrix, SpanBuilder};
use crate::options::Options;
use crate::par;
use crate::rep::{
    cokernel, decompose_with, enumerate_indecomposable_modules, indecomposable_iso, kernel, solve_in, HomSpace, Module,
    ModuleMap, RepError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerivedError {
    #[error("not a complex: {0}")]
    NotAComplex(String),
    #[error("not a chain map: {0}")]
    NotAChainMap(String),
    #[error("projective replacement did not terminate within {cap} steps (infinite global dimension?)")]
    InfiniteGlobalDimension { cap: usize },
    #[error("search exhausted while {what} (cap {cap})")]
    SearchExhausted { what: String, cap: u64 },
    #[error(transparent)]
    Rep(RepError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl From<RepError> for DerivedError {
    fn from(e: RepError) -> Self {
        match e {
            RepError::SearchExhausted { what, cap } => DerivedError::SearchExhausted { what, cap },
            e => DerivedError::Rep(e),
        }
    }
}

type Alg = Arc<BoundQuiverAlgebra>;

/// A bounded cochain complex `X^lo → … → X^hi`, trimmed of zero end terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    algebra: Alg,
    lo: i32,
    terms: Vec<Module>,
    /// `diffs[k] : terms[k] → terms[k+1]`.
    diffs: Vec<ModuleMap>,
}

fn sign(k: i32) -> bool {
    k.rem_euclid(2) == 1
}

impl Complex {
    pub fn new(algebra: &Alg, lo: i32, terms: Vec<Module>, diffs: Vec<ModuleMap>) -> Result<Self, DerivedError> {
        if diffs.len() + 1 != terms.len().max(1) {
            return Err(DerivedError::NotAComplex(format!("{} terms but {} differentials", terms.len(), diffs.len())));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.source() != &terms[k] || d.target() != &terms[k + 1] {
                return Err(DerivedError::NotAComplex(format!("differential in degree {} has the wrong shape", lo + k as i32)));
            }
        }
        for k in 1..diffs.len() {
            if !diffs[k].after(&diffs[k - 1]).is_zero() {
                return Err(DerivedError::NotAComplex(format!("d∘d ≠ 0 in degree {}", lo + k as i32 - 1)));
            }
        }
        Ok(Self::from_parts(algebra, lo, terms, diffs))
    }

    pub(crate) fn from_parts(algebra: &Alg, mut lo: i32, mut terms: Vec<Module>, mut diffs: Vec<ModuleMap>) -> Self {
        while terms.last().is_some_and(Module::is_zero) {
            terms.pop();
            diffs.pop();
        }
        while terms.first().is_some_and(Module::is_zero) {
            terms.remove(0);
            if !diffs.is_empty() {
                diffs.remove(0);
            }
            lo += 1;
        }
        if terms.is_empty() {
            lo = 0;
            diffs.clear();
        }
        Complex { algebra: algebra.clone(), lo, terms, diffs }
    }

    pub fn zero(algebra: &Alg) -> Self {
        Complex { algebra: algebra.clone(), lo: 0, terms: Vec::new(), diffs: Vec::new() }
    }

    /// `M` concentrated in one degree.
    pub fn stalk(m: &Module, degree: i32) -> Self {
        Self::from_parts(m.algebra(), degree, vec![m.clone()], Vec::new())
    }

    /// `f : M → N` as a complex in degrees `lo`, `lo + 1`.
    pub fn two_term(f: &ModuleMap, lo: i32) -> Self {
        Self::from_parts(f.source().algebra(), lo, vec![f.source().clone(), f.target().clone()], vec![f.clone()])
    }

    pub fn algebra(&self) -> &Alg {
        &self.algebra
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.terms.len() as i32 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn width(&self) -> usize {
        self.terms.len()
    }

    pub fn total_dim(&self) -> usize {
        self.terms.iter().map(Module::total_dim).sum()
    }

    pub fn term(&self, i: i32) -> Module {
        let k = i - self.lo;
        if k >= 0 && (k as usize) < self.terms.len() {
            self.terms[k as usize].clone()
        } else {
            Module::zero(&self.algebra)
        }
    }

    /// `d^i : X^i → X^{i+1}`.
    pub fn diff(&self, i: i32) -> ModuleMap {
        let k = i - self.lo;
        if k >= 0 && (k as usize) < self.diffs.len() {
            self.diffs[k as usize].clone()
        } else {
            ModuleMap::zero(&self.term(i), &self.term(i + 1))
        }
    }

    /// `X[k]`: `(X[k])^i = X^{i+k}` with differential `(-1)^k d`.
    pub fn shift(&self, k: i32) -> Complex {
        let p = self.algebra.p();
        let diffs = if sign(k) { self.diffs.iter().map(|d| d.scale(p - 1)).collect() } else { self.diffs.clone() };
        Complex { algebra: self.algebra.clone(), lo: self.lo - k, terms: self.terms.clone(), diffs }
    }

    pub fn direct_sum(algebra: &Alg, parts: &[Complex]) -> Complex {
        let live: Vec<&Complex> = parts.iter().filter(|c| !c.is_zero()).collect();
        if live.is_empty() {
            return Complex::zero(algebra);
        }
        let lo = live.iter().map(|c| c.lo).min().unwrap();
        let hi = live.iter().map(|c| c.hi()).max().unwrap();
        let sums: Vec<_> =
            (lo..=hi).map(|i| Module::direct_sum(algebra, &live.iter().map(|c| c.term(i)).collect::<Vec<_>>())).collect();
        let mut diffs = Vec::new();
        for i in lo..hi {
            let (s, t) = (&sums[(i - lo) as usize], &sums[(i - lo + 1) as usize]);
            let mut d = ModuleMap::zero(&s.module, &t.module);
            for (j, c) in live.iter().enumerate() {
                d = d.add(&t.inclusions[j].after(&c.diff(i).after(&s.projections[j])));
            }
            diffs.push(d);
        }
        Self::from_parts(algebra, lo, sums.into_iter().map(|s| s.module).collect(), diffs)
    }

    pub fn cohomology(&self, i: i32) -> Module {
        crate::homology::homology_at(&self.diff(i - 1), &self.diff(i))
    }

    /// Degrees with nonzero cohomology.
    pub fn cohomology_support(&self) -> Vec<i32> {
        if self.is_zero() {
            return Vec::new();
        }
        (self.lo..=self.hi()).filter(|&i| !self.cohomology(i).is_zero()).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.cohomology_support().is_empty()
    }

    /// Zero in the derived category.
    pub fn is_zero_in_d(&self) -> bool {
        self.is_acyclic()
    }

    pub fn is_projective_termed(&self) -> bool {
        self.terms.iter().all(|m| projective_cover(m).module.total_dim() == m.total_dim())
    }

    pub fn terms(&self) -> &[Module] {
        &self.terms
    }
}

/// A degreewise map of complexes commuting with the differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: Complex,
    target: Complex,
    maps: BTreeMap<i32, ModuleMap>,
}

fn common_degrees(x: &Complex, y: &Complex) -> Vec<i32> {
    if x.is_zero() || y.is_zero() {
        return Vec::new();
    }
    (x.lo.max(y.lo)..=x.hi().min(y.hi())).collect()
}

impl ChainMap {
    pub fn new(source: &Complex, target: &Complex, maps: BTreeMap<i32, ModuleMap>) -> Result<Self, DerivedError> {
        let f = Self::from_parts(source, target, maps);
        for (&i, m) in &f.maps {
            if m.source() != &source.term(i) || m.target() != &target.term(i) {
                return Err(DerivedError::NotAChainMap(format!("component in degree {i} has the wrong shape")));
            }
        }
        let lo = source.lo.min(target.lo) - 1;
        let hi = source.hi().max(target.hi()) + 1;
        for i in lo..=hi {
            let left = target.diff(i).after(&f.component(i));
            let right = f.component(i + 1).after(&source.diff(i));
            if left != right {
                return Err(DerivedError::NotAChainMap(format!("square in degree {i} does not commute")));
            }
        }
        Ok(f)
    }

    pub(crate) fn from_parts(source: &Complex, target: &Complex, maps: BTreeMap<i32, ModuleMap>) -> Self {
        let maps = maps.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        ChainMap { source: source.clone(), target: target.clone(), maps }
    }

    pub fn identity(x: &Complex) -> Self {
        let maps = (x.lo..=x.hi()).filter(|_| !x.is_zero()).map(|i| (i, ModuleMap::identity(&x.term(i)))).collect();
        Self::from_parts(x, x, maps)
    }

    pub fn zero(x: &Complex, y: &Complex) -> Self {
        Self::from_parts(x, y, BTreeMap::new())
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    pub fn component(&self, i: i32) -> ModuleMap {
        self.maps.get(&i).cloned().unwrap_or_else(|| ModuleMap::zero(&self.source.term(i), &self.target.term(i)))
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        let maps = common_degrees(&self.source, &self.target)
            .into_iter()
            .map(|i| (i, self.component(i).add(&other.component(i))))
            .collect();
        Self::from_parts(&self.source, &self.target, maps)
    }

    pub fn scale(&self, c: u32) -> ChainMap {
        let maps = self.maps.iter().map(|(&i, m)| (i, m.scale(c))).collect();
        Self::from_parts(&self.source, &self.target, maps)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ChainMap) -> ChainMap {
        let maps = common_degrees(&first.source, &self.target)
            .into_iter()
            .map(|i| (i, self.component(i).after(&first.component(i))))
            .collect();
        Self::from_parts(&first.source, &self.target, maps)
    }

    pub fn is_zero(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn is_nullhomotopic(&self) -> Result<bool, DerivedError> {
        let sys = HomSystem::new(&self.source, &self.target)?;
        Ok(sys.homotopies.contains(&sys.coordinates(self)))
    }

    /// Rank of the induced map `H^i(X) → H^i(Y)`.
    pub fn cohomology_rank(&self, i: i32) -> usize {
        let p = self.source.algebra.p();
        let x = &self.source;
        let y = &self.target;
        let (_, zx) = kernel(&x.diff(i));
        let fz = self.component(i).after(&zx);
        let by = y.diff(i - 1);
        let mut rank = 0;
        for v in 0..x.algebra.num_vertices() {
            let rows = y.term(i).dim_at(v);
            let both = Matrix::hstack(p, rows, &[fz.block(v), by.block(v)]).rank();
            rank += both - by.block(v).rank();
        }
        rank
    }

    /// The mapping cone with `d^i = [[-d_X^{i+1}, 0], [f^{i+1}, d_Y^i]]` on `X^{i+1} ⊕ Y^i`.
    pub fn cone(&self) -> Complex {
        self.triangle().0
    }

    /// The cone with its maps `Y → cone(f)` and `cone(f) → X[1]`.
    pub fn triangle(&self) -> (Complex, ChainMap, ChainMap) {
        let x = &self.source;
        let y = &self.target;
        let alg = &x.algebra;
        let p = alg.p();
        if x.is_zero() && y.is_zero() {
            let z = Complex::zero(alg);
            return (z.clone(), ChainMap::zero(y, &z), ChainMap::zero(&z, &x.shift(1)));
        }
        let degs: Vec<i32> = [x.lo - 1, y.lo, x.hi() - 1, y.hi()]
            .iter()
            .zip([!x.is_zero(), !y.is_zero(), !x.is_zero(), !y.is_zero()])
            .filter(|(_, live)| *live)
            .map(|(d, _)| *d)
            .collect();
        let lo = *degs.iter().min().unwrap();
        let hi = *degs.iter().max().unwrap();
        let sums: Vec<_> = (lo..=hi).map(|i| Module::direct_sum(alg, &[x.term(i + 1), y.term(i)])).collect();
        let at = |i: i32| &sums[(i - lo) as usize];
        let mut diffs = Vec::new();
        for i in lo..hi {
            let (s, t) = (at(i), at(i + 1));
            let dx = x.diff(i + 1).scale(p - 1);
            let d = t.inclusions[0]
                .after(&dx.after(&s.projections[0]))
                .add(&t.inclusions[1].after(&self.component(i + 1).after(&s.projections[0])))
                .add(&t.inclusions[1].after(&y.diff(i).after(&s.projections[1])));
            diffs.push(d);
        }
        let raw = Complex { algebra: alg.clone(), lo, terms: sums.iter().map(|s| s.module.clone()).collect(), diffs };
        let cone = Complex::from_parts(alg, raw.lo, raw.terms.clone(), raw.diffs.clone());
        let x1 = x.shift(1);
        let mut into = BTreeMap::new();
        let mut out = BTreeMap::new();
        for i in lo..=hi {
            if !cone.term(i).is_zero() {
                into.insert(i, at(i).inclusions[1].clone());
                out.insert(i, at(i).projections[0].clone());
            }
        }
        let g = ChainMap::from_parts(y, &cone, into);
        let h = ChainMap::from_parts(&cone, &x1, out);
        (cone, g, h)
    }
}

/// Linear-algebra data for chain maps `X → Y` modulo homotopy.
struct HomSystem {
    source: Complex,
    target: Complex,
    degrees: Vec<i32>,
    spaces: Vec<HomSpace>,
    offsets: Vec<usize>,
    /// Chain maps, as coordinate vectors.
    cycles: Vec<Vec<u32>>,
    homotopies: SpanBuilder,
}

fn flatten(f: &ModuleMap) -> Vec<u32> {
    f.blocks().iter().flat_map(|b| b.data().iter().copied()).collect()
}

impl HomSystem {
    fn new(x: &Complex, y: &Complex) -> Result<Self, DerivedError> {
        let p = x.algebra.p();
        let degrees = common_degrees(x, y);
        let spaces: Vec<HomSpace> =
            degrees.iter().map(|&i| HomSpace::new(&x.term(i), &y.term(i))).collect::<Result<_, _>>()?;
        let mut offsets = vec![0];
        for s in &spaces {
            offsets.push(offsets.last().unwrap() + s.dim());
        }
        let n = *offsets.last().unwrap();
        let index = |i: i32| degrees.iter().position(|&d| d == i);

        // Constraint rows: d_Y^i f^i - f^{i+1} d_X^i for every degree touching the support.
        let lo = x.lo.min(y.lo) - 1;
        let hi = x.hi().max(y.hi()) + 1;
        let mut rows: Vec<(i32, usize)> = Vec::new();
        let mut total = 0;
        for i in lo..=hi {
            let size: usize = (0..x.algebra.num_vertices()).map(|v| x.term(i).dim_at(v) * y.term(i + 1).dim_at(v)).sum();
            rows.push((i, total));
            total += size;
        }
        let row_of = |i: i32| rows.iter().find(|(d, _)| *d == i).map(|(_, o)| *o).unwrap();
        let mut system = Matrix::zeros(p, total, n);
        for (k, &i) in degrees.iter().enumerate() {
            for (j, e) in spaces[k].maps().iter().enumerate() {
                let col = offsets[k] + j;
                let up = flatten(&y.diff(i).after(e));
                for (r, v) in up.into_iter().enumerate() {
                    system.add_at(row_of(i) + r, col, v);
                }
                let down = flatten(&e.after(&x.diff(i - 1)));
                for (r, v) in down.into_iter().enumerate() {
                    system.add_at(row_of(i - 1) + r, col, (p - v) % p);
                }
            }
        }
        let null = system.nullspace();
        let cycles = (0..null.cols()).map(|c| null.column(c)).collect();

        let mut homotopies = SpanBuilder::new(p, n);
        for i in lo..=hi + 1 {
            let h_space = HomSpace::new(&x.term(i), &y.term(i - 1))?;
            for h in h_space.maps() {
                let mut v = vec![0u32; n];
                // h contributes d_Y^{i-1} h to degree i and h d_X^{i-1} to degree i-1
                if let Some(k) = index(i) {
                    let c = spaces[k].coordinates(&y.diff(i - 1).after(&h));
                    v[offsets[k]..offsets[k + 1]].copy_from_slice(&c);
                }
                if let Some(k) = index(i - 1) {
                    let c = spaces[k].coordinates(&h.after(&x.diff(i - 1)));
                    v[offsets[k]..offsets[k + 1]].copy_from_slice(&c);
                }
                homotopies.insert(&v);
            }
        }
        Ok(HomSystem { source: x.clone(), target: y.clone(), degrees, spaces, offsets, cycles, homotopies })
    }

    fn coordinates(&self, f: &ChainMap) -> Vec<u32> {
        let mut v = Vec::new();
        for (k, &i) in self.degrees.iter().enumerate() {
            v.extend(self.spaces[k].coordinates(&f.component(i)));
        }
        v
    }

    fn chain_map(&self, v: &[u32]) -> ChainMap {
        let maps = self
            .degrees
            .iter()
            .enumerate()
            .map(|(k, &i)| (i, self.spaces[k].combine(&v[self.offsets[k]..self.offsets[k + 1]])))
            .collect();
        ChainMap::from_parts(&self.source, &self.target, maps)
    }
}

/// A basis of `Hom_K(X, Y)`: chain maps modulo nullhomotopic ones.
#[derive(Clone, Debug)]
pub struct HomK {
    pub source: Complex,
    pub target: Complex,
    pub basis: Vec<ChainMap>,
}

impl HomK {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn combine(&self, coeffs: &[u32]) -> ChainMap {
        let mut f = ChainMap::zero(&self.source, &self.target);
        for (b, &c) in self.basis.iter().zip(coeffs) {
            if c != 0 {
                f = f.add(&b.scale(c));
            }
        }
        f
    }
}

pub fn hom_homotopy(x: &Complex, y: &Complex) -> Result<HomK, DerivedError> {
    let sys = HomSystem::new(x, y)?;
    let mut span = sys.homotopies.clone();
    let basis = sys.cycles.iter().filter(|c| span.insert(c)).map(|c| sys.chain_map(c)).collect();
    Ok(HomK { source: x.clone(), target: y.clone(), basis })
}

/// `Hom_D(X, Y)`, computed as `Hom_K(P, Y)` for a projective replacement `P → X`.
pub fn hom_derived(x: &Complex, y: &Complex, opts: &Options) -> Result<HomK, DerivedError> {
    hom_homotopy(&projective_replacement(x, opts)?.complex, y)
}

pub fn hom_derived_dim(x: &Complex, y: &Complex, opts: &Options) -> Result<usize, DerivedError> {
    Ok(hom_derived(x, y, opts)?.dim())
}

/// A complex of projectives with a quasi-isomorphism onto the input.
#[derive(Clone, Debug)]
pub struct Replacement {
    pub complex: Complex,
    pub quasi: ChainMap,
}

/// Builds `P → X` from the top degree down, covering the cycles of the cone
/// that are not already boundaries coming from `X`.
pub fn projective_replacement(x: &Complex, opts: &Options) -> Result<Replacement, DerivedError> {
    if x.is_zero() || x.is_projective_termed() {
        return Ok(Replacement { complex: x.clone(), quasi: ChainMap::identity(x) });
    }
    let alg = x.algebra();
    let p = alg.p();
    let (a, b) = (x.lo, x.hi());
    let mut terms: BTreeMap<i32, Module> = BTreeMap::new();
    let mut diffs: BTreeMap<i32, ModuleMap> = BTreeMap::new();
    let mut phi: BTreeMap<i32, ModuleMap> = BTreeMap::new();
    let zero = Module::zero(alg);
    let term = |t: &BTreeMap<i32, Module>, i: i32| t.get(&i).cloned().unwrap_or_else(|| zero.clone());
    let mut k = b;
    loop {
        if k < a && (a - k) as usize > opts.resolution_cap {
            return Err(DerivedError::InfiniteGlobalDimension { cap: opts.resolution_cap });
        }
        let pk1 = term(&terms, k + 1);
        let c = Module::direct_sum(alg, &[pk1.clone(), x.term(k)]);
        let cn = Module::direct_sum(alg, &[term(&terms, k + 2), x.term(k + 1)]);
        let dp = diffs.get(&(k + 1)).cloned().unwrap_or_else(|| ModuleMap::zero(&pk1, &term(&terms, k + 2)));
        let ph = phi.get(&(k + 1)).cloned().unwrap_or_else(|| ModuleMap::zero(&pk1, &x.term(k + 1)));
        let dc = cn.inclusions[0]
            .after(&dp.scale(p - 1).after(&c.projections[0]))
            .add(&cn.inclusions[1].after(&ph.after(&c.projections[0])))
            .add(&cn.inclusions[1].after(&x.diff(k).after(&c.projections[1])));
        let (z, zinc) = kernel(&dc);
        let from_x = c.inclusions[1].after(&x.diff(k - 1));
        let blocks = zinc.blocks().iter().zip(from_x.blocks()).map(|(zb, fb)| solve_in(zb, fb, p)).collect();
        let (q, qproj) = cokernel(&ModuleMap::from_parts(from_x.source().clone(), z, blocks));
        let gens = top_generators(&q);
        if gens.is_empty() {
            if k < a {
                break;
            }
            k -= 1;
            continue;
        }
        let parts: Vec<ModuleMap> = gens
            .iter()
            .map(|(v, vec)| {
                let lift = qproj.block(*v).right_inverse().expect("projection is onto").mul(&Matrix::column_vector(p, vec));
                let c_vec = zinc.block(*v).mul(&lift);
                generator_map(&c.module, *v, &c_vec.to_vec())
            })
            .collect();
        let pk = Module::sum(alg, &parts.iter().map(|f| f.source().clone()).collect::<Vec<_>>());
        let g_blocks = (0..alg.num_vertices())
            .map(|u| Matrix::hstack(p, c.module.dim_at(u), &parts.iter().map(|f| f.block(u)).collect::<Vec<_>>()))
            .collect();
        let g = ModuleMap::from_parts(pk.clone(), c.module.clone(), g_blocks);
        diffs.insert(k, c.projections[0].after(&g).scale(p - 1).retarget(&pk, &pk1));
        phi.insert(k, c.projections[1].after(&g));
        terms.insert(k, pk);
        k -= 1;
    }
    let lo = *terms.keys().next().unwrap_or(&0);
    let hi = *terms.keys().last().unwrap_or(&0);
    let ts: Vec<Module> = (lo..=hi).map(|i| term(&terms, i)).collect();
    let ds: Vec<ModuleMap> = (lo..hi)
        .map(|i| diffs.get(&i).cloned().unwrap_or_else(|| ModuleMap::zero(&term(&terms, i), &term(&terms, i + 1))))
        .collect();
    let complex = Complex::from_parts(alg, lo, ts, ds);
    let maps = phi.into_iter().map(|(i, f)| (i, f.retarget(&complex.term(i), &x.term(i)))).collect();
    Ok(Replacement { quasi: ChainMap::from_parts(&complex, x, maps), complex })
}

/// The algebra whose modules are `A`-complexes in `width` consecutive degrees.
pub fn complex_algebra(base: &Alg, width: usize) -> Result<Alg, DerivedError> {
    static CACHE: OnceLock<Mutex<Vec<(Alg, usize, Alg)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    if let Some((_, _, a)) = cache.lock().unwrap().iter().find(|(b, w, _)| *w == width && b.same_as(base)) {
        return Ok(a.clone());
    }
    let q = base.quiver();
    let nv = q.num_vertices();
    let na = q.arrows.len();
    let vname = |v: usize, k: usize| format!("{}@{k}", q.vertices[v]);
    let vertices: Vec<String> = (0..width).flat_map(|k| (0..nv).map(move |v| (v, k))).map(|(v, k)| vname(v, k)).collect();
    let mut arrows: Vec<(String, String, String)> = Vec::new();
    for k in 0..width {
        for a in &q.arrows {
            arrows.push((format!("{}@{k}", a.name), vname(a.source, k), vname(a.target, k)));
        }
    }
    for k in 0..width.saturating_sub(1) {
        for v in 0..nv {
            arrows.push((format!("∂{}@{k}", q.vertices[v]), vname(v, k), vname(v, k + 1)));
        }
    }
    let quiver = Quiver::new(&vertices, &arrows)?;
    let layer_arrow = |a: usize, k: usize| k * na + a;
    let diff_arrow = |v: usize, k: usize| width * na + k * nv + v;
    let p = base.p();
    let mut relations = Vec::new();
    for k in 0..width {
        for r in base.relations() {
            let terms = r
                .terms
                .iter()
                .map(|(c, path)| {
                    (*c, Path { start: k * nv + path.start, arrows: path.arrows.iter().map(|&a| layer_arrow(a, k)).collect() })
                })
                .collect();
            relations.push(Relation { terms });
        }
    }
    for k in 0..width.saturating_sub(1) {
        for (ai, a) in q.arrows.iter().enumerate() {
            let start = k * nv + a.source;
            relations.push(Relation {
                terms: vec![
                    (1, Path { start, arrows: vec![layer_arrow(ai, k), diff_arrow(a.target, k)] }),
                    (p - 1, Path { start, arrows: vec![diff_arrow(a.source, k), layer_arrow(ai, k + 1)] }),
                ],
            });
        }
    }
    for k in 0..width.saturating_sub(2) {
        for v in 0..nv {
            relations.push(Relation::monomial(Path { start: k * nv + v, arrows: vec![diff_arrow(v, k), diff_arrow(v, k + 1)] }));
        }
    }
    let alg = BoundQuiverAlgebra::new(quiver, relations, p)?;
    cache.lock().unwrap().push((base.clone(), width, alg.clone()));
    Ok(alg)
}

/// Encodes the degrees `lo .. lo + width` of `x` as a module.
pub fn to_representation(x: &Complex, lo: i32, width: usize) -> Result<Module, DerivedError> {
    let base = x.algebra();
    let lambda = complex_algebra(base, width)?;
    let nv = base.num_vertices();
    let mut dims = Vec::new();
    for k in 0..width {
        dims.extend_from_slice(x.term(lo + k as i32).dims());
    }
    let mut action = Vec::new();
    for k in 0..width {
        action.extend(x.term(lo + k as i32).actions().iter().cloned());
    }
    for k in 0..width.saturating_sub(1) {
        let d = x.diff(lo + k as i32);
        for v in 0..nv {
            action.push(d.block(v).clone());
        }
    }
    Ok(Module::new(lambda, dims, action)?)
}

pub fn from_representation(m: &Module, base: &Alg, lo: i32, width: usize) -> Complex {
    let nv = base.num_vertices();
    let na = base.quiver().arrows.len();
    let terms: Vec<Module> = (0..width)
        .map(|k| {
            Module::from_parts(
                base.clone(),
                m.dims()[k * nv..(k + 1) * nv].to_vec(),
                m.actions()[k * na..(k + 1) * na].to_vec(),
            )
        })
        .collect();
    let diffs = (0..width.saturating_sub(1))
        .map(|k| {
            let blocks = (0..nv).map(|v| m.action(width * na + k * nv + v).clone()).collect();
            ModuleMap::from_parts(terms[k].clone(), terms[k + 1].clone(), blocks)
        })
        .collect();
    Complex::from_parts(base, lo, terms, diffs)
}

/// Indecomposable summands in `K^b(proj)` of a projective replacement, each a
/// minimal complex, with multiplicities.
pub fn decompose_complex(x: &Complex, opts: &Options) -> Result<Vec<(Complex, usize)>, DerivedError> {
    let pc = projective_replacement(x, opts)?.complex;
    if pc.is_zero() {
        return Ok(Vec::new());
    }
    let rep = to_representation(&pc, pc.lo, pc.width())?;
    let mut out: Vec<(Complex, usize)> = Vec::new();
    for (m, k) in decompose_with(&rep, opts)? {
        let c = from_representation(&m, x.algebra(), pc.lo, pc.width());
        if c.is_acyclic() {
            continue;
        }
        match out.iter_mut().find(|(d, _)| same_indecomposable(d, &c)) {
            Some(entry) => entry.1 += k,
            None => out.push((c, k)),
        }
    }
    Ok(out)
}

/// The minimal complex of projectives isomorphic to `x` in the derived category.
pub fn minimal_complex(x: &Complex, opts: &Options) -> Result<Complex, DerivedError> {
    let parts: Vec<Complex> = decompose_complex(x, opts)?
        .into_iter()
        .flat_map(|(c, k)| std::iter::repeat_n(c, k))
        .collect();
    Ok(Complex::direct_sum(x.algebra(), &parts))
}

/// Isomorphism of indecomposable minimal complexes of projectives.
pub fn same_indecomposable(a: &Complex, b: &Complex) -> bool {
    if a.lo != b.lo || a.hi() != b.hi() {
        return false;
    }
    if a.is_zero() {
        return true;
    }
    match (to_representation(a, a.lo, a.width()), to_representation(b, b.lo, b.width())) {
        (Ok(x), Ok(y)) => indecomposable_iso(&x, &y).is_some(),
        _ => false,
    }
}

/// Isomorphism in the derived category.
pub fn is_isomorphic_in_d(x: &Complex, y: &Complex, opts: &Options) -> Result<bool, DerivedError> {
    let dx = decompose_complex(x, opts)?;
    let dy = decompose_complex(y, opts)?;
    Ok(dx.len() == dy.len()
        && dx.iter().all(|(c, k)| dy.iter().any(|(d, l)| k == l && same_indecomposable(c, d))))
}

/// An indecomposable object of the derived category, stored as a minimal
/// complex of projectives whose top cohomology sits in degree 0.
#[derive(Clone, Debug)]
pub struct DObject {
    pub complex: Complex,
    pub label: String,
}

impl DObject {
    /// Normalizes an indecomposable minimal complex, returning the shift `k`
    /// with `c ≅ object[k]`.
    pub fn normalize(c: &Complex, opts: &Options) -> (DObject, i32) {
        let k = c.hi();
        let complex = c.shift(k);
        let label = base_label(&complex, opts);
        (DObject { complex, label }, -k)
    }

    /// `self[k]`.
    pub fn shifted(&self, k: i32) -> Complex {
        self.complex.shift(k)
    }

    pub fn label_at(&self, k: i32) -> String {
        shifted_label(&self.label, k)
    }
}

pub fn shifted_label(label: &str, k: i32) -> String {
    if k == 0 {
        label.to_string()
    } else {
        format!("{label}[{k}]")
    }
}

fn base_label(c: &Complex, opts: &Options) -> String {
    let support = c.cohomology_support();
    if support.len() == 1 {
        c.cohomology(support[0]).describe(opts)
    } else {
        let parts: Vec<String> = c.terms().iter().map(|m| m.describe(opts)).collect();
        format!("({})", parts.join("→"))
    }
}

/// Human-readable description of an object of the derived category.
pub fn describe_object(x: &Complex, opts: &Options) -> Result<String, DerivedError> {
    let parts = decompose_complex(x, opts)?;
    if parts.is_empty() {
        return Ok("0".into());
    }
    let mut labels = Vec::new();
    for (c, k) in parts {
        let (obj, shift) = DObject::normalize(&c, opts);
        for _ in 0..k {
            labels.push(obj.label_at(shift));
        }
    }
    Ok(labels.join(" ⊕ "))
}

/// Indecomposable objects of `D^b(A)` up to shift that occur as summands of
/// complexes of modules with at most `width_bound` nonzero terms and total
/// dimension at most `dim_bound`, in order of first appearance.
pub fn enumerate_indecomposable_complexes(
    base: &Alg,
    width_bound: usize,
    dim_bound: usize,
    opts: &Options,
) -> Result<Vec<DObject>, DerivedError> {
    let lambda = complex_algebra(base, width_bound.max(1))?;
    let reps = enumerate_indecomposable_modules(&lambda, dim_bound, opts)?;
    let summands = par::map(opts.strategy, &reps, |m| {
        decompose_complex(&from_representation(m, base, 0, width_bound.max(1)), opts)
    });
    let mut found: Vec<DObject> = Vec::new();
    for parts in summands {
        for (c, _) in parts? {
            let (obj, _) = DObject::normalize(&c, opts);
            if !found.iter().any(|o| same_indecomposable(&o.complex, &obj.complex)) {
                found.push(obj);
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::running_example;
    use crate::homology::ext_dim;

    fn opts() -> Options {
        Options::default()
    }

    fn surjection_23_to_2(a: &Alg) -> ModuleMap {
        let p23 = Module::projective(a, 1);
        let two = Module::simple(a, 1);
        HomSpace::new(&p23, &two).unwrap().element(0)
    }

    fn map_23_to_12(a: &Alg) -> ModuleMap {
        HomSpace::new(&Module::projective(a, 1), &Module::projective(a, 0)).unwrap().element(0)
    }

    #[test]
    fn shifts() {
        let a = running_example(3);
        let x = Complex::two_term(&map_23_to_12(&a), -1);
        assert_eq!(x.shift(1).shift(-1), x);
        let m = Complex::stalk(&Module::simple(&a, 0), 0);
        assert_eq!(m.shift(2).lo(), -2);
        for k in -2..=2 {
            for i in -3..=3 {
                assert_eq!(x.shift(k).cohomology(i).dims(), x.cohomology(i + k).dims());
            }
        }
        let d = x.shift(1).diff(-2);
        assert_eq!(d, x.diff(-1).scale(2));
    }

    #[test]
    fn cohomology_of_the_two_term_complex() {
        let a = running_example(2);
        let x = Complex::two_term(&map_23_to_12(&a), -1);
        assert_eq!(x.cohomology(0).loewy_label(), "1");
        assert_eq!(x.cohomology(-1).loewy_label(), "3");
        assert_eq!(Complex::stalk(&Module::simple(&a, 1), 0).cohomology(0).loewy_label(), "2");
    }

    #[test]
    fn cones() {
        let a = running_example(2);
        let o = opts();
        let x = Complex::two_term(&map_23_to_12(&a), -1);
        let c = ChainMap::identity(&x).cone();
        assert!(c.is_zero_in_d());
        assert_eq!(hom_homotopy(&c, &c).unwrap().dim(), 0);
        let y = Complex::stalk(&Module::simple(&a, 1), 0);
        let z = ChainMap::zero(&x, &y).cone();
        assert!(is_isomorphic_in_d(&z, &Complex::direct_sum(&a, &[x.shift(1), y.clone()]), &o).unwrap());
        let f = surjection_23_to_2(&a);
        let src = Complex::stalk(f.source(), 0);
        let tgt = Complex::stalk(f.target(), 0);
        let mut maps = BTreeMap::new();
        maps.insert(0, f.clone());
        let cf = ChainMap::new(&src, &tgt, maps).unwrap().cone();
        let three = Complex::stalk(&Module::simple(&a, 2), 0).shift(1);
        assert!(is_isomorphic_in_d(&cf, &three, &o).unwrap());
        assert_eq!(describe_object(&cf, &o).unwrap(), "3[1]");
    }

    #[test]
    fn replacements() {
        let a = running_example(2);
        let o = opts();
        let two = Complex::stalk(&Module::simple(&a, 1), 0);
        let r = projective_replacement(&two, &o).unwrap();
        assert!(r.complex.is_projective_termed());
        assert_eq!(r.complex.lo(), -1);
        assert_eq!(r.complex.term(-1).loewy_label(), "3");
        assert_eq!(r.complex.term(0).loewy_label(), "2/3");
        assert_eq!(r.complex.cohomology(0).loewy_label(), "2");
        assert!(r.complex.cohomology(-1).is_zero());
        let p = Complex::stalk(&Module::projective(&a, 0), 0);
        assert_eq!(projective_replacement(&p, &o).unwrap().complex, p);
        let one = Complex::stalk(&Module::simple(&a, 0), 0);
        let r = projective_replacement(&one, &o).unwrap();
        assert_eq!(r.complex.width(), 3);
        let cone = r.quasi.cone();
        assert!(cone.is_zero_in_d());
    }

    #[test]
    fn derived_homs_match_ext() {
        let a = running_example(2);
        let o = opts();
        let mods: Vec<Module> = (0..3).map(|v| Module::simple(&a, v)).chain((0..2).map(|v| Module::projective(&a, v))).collect();
        for m in &mods {
            for n in &mods {
                for i in 0..=3 {
                    let d = hom_derived_dim(&Complex::stalk(m, 0), &Complex::stalk(n, 0).shift(i), &o).unwrap();
                    assert_eq!(d, ext_dim(m, n, i as usize).unwrap(), "{} {} {i}", m.loewy_label(), n.loewy_label());
                }
            }
        }
    }

    #[test]
    fn decomposition_of_complexes() {
        let a = running_example(2);
        let o = opts();
        let x = Complex::two_term(&map_23_to_12(&a), -1);
        let both = Complex::direct_sum(&a, &[x.clone(), x.shift(1)]);
        assert_eq!(decompose_complex(&both, &o).unwrap().len(), 2);
        assert!(!ChainMap::identity(&x).is_nullhomotopic().unwrap());
    }

    #[test]
    fn running_example_has_six_indecomposable_complexes() {
        let a = running_example(2);
        let o = opts();
        let list = enumerate_indecomposable_complexes(&a, 2, 4, &o).unwrap();
        let labels: Vec<&str> = list.iter().map(|d| d.label.as_str()).collect();
        assert_eq!(labels, ["1", "2", "3", "1/2", "2/3", "(2/3→1/2)"]);
    }

    #[test]
    fn one_vertex_algebra_has_only_the_simple() {
        let a = BoundQuiverAlgebra::from_text(&["1"], &[], &[], 2).unwrap();
        let list = enumerate_indecomposable_complexes(&a, 2, 4, &opts()).unwrap();
        assert_eq!(list.len(), 1);
        assert_eq!(list[0].label, "1");
    }

    #[test]
    fn long_exact_sequence_of_a_cone() {
        let a = running_example(2);
        let f = surjection_23_to_2(&a);
        let mut maps = BTreeMap::new();
        maps.insert(0, f.clone());
        let fx = ChainMap::new(&Complex::stalk(f.source(), 0), &Complex::stalk(f.target(), 0), maps).unwrap();
        let (_, g, h) = fx.triangle();
        for i in -2..=2 {
            let hy = g.source().cohomology(i).total_dim();
            assert_eq!(hy, fx.cohomology_rank(i) + g.cohomology_rank(i));
            let hc = g.target().cohomology(i).total_dim();
            assert_eq!(hc, g.cohomology_rank(i) + h.cohomology_rank(i));
        }
    }
}
