#![allow(dead_code)]

use std::sync::{Arc, OnceLock};

use tiltlab::algebra::{running_example, BoundQuiverAlgebra};
use tiltlab::options::Options;
use tiltlab::rep::Module;
use tiltlab::tilting::TiltingContext;
use tiltlab::tstructures::DerivedPicture;

pub fn algebra() -> Arc<BoundQuiverAlgebra> {
    running_example(2)
}

/// `2/3 ⊕ 1/2 ⊕ 1`, classical 2-tilting.
pub fn tilting_module(a: &Arc<BoundQuiverAlgebra>) -> Module {
    Module::sum(a, &[Module::projective(a, 1), Module::projective(a, 0), Module::simple(a, 0)])
}

/// `1/2 ⊕ 2/3 ⊕ 2`, classical 1-tilting.
pub fn one_tilting_module(a: &Arc<BoundQuiverAlgebra>) -> Module {
    Module::sum(a, &[Module::projective(a, 0), Module::projective(a, 1), Module::simple(a, 1)])
}

pub fn context() -> &'static TiltingContext {
    static CTX: OnceLock<TiltingContext> = OnceLock::new();
    CTX.get_or_init(|| {
        let a = algebra();
        TiltingContext::new(&tilting_module(&a), 2, &Options::default()).expect("T is 2-tilting")
    })
}

pub fn one_tilting_context() -> &'static TiltingContext {
    static CTX: OnceLock<TiltingContext> = OnceLock::new();
    CTX.get_or_init(|| {
        let a = algebra();
        TiltingContext::new(&one_tilting_module(&a), 1, &Options::default()).expect("T1 is 1-tilting")
    })
}

pub fn picture() -> &'static DerivedPicture {
    static PIC: OnceLock<DerivedPicture> = OnceLock::new();
    PIC.get_or_init(|| DerivedPicture::new(context().clone()).expect("running example is representation-finite"))
}

use tiltlab::derived::{hom_derived_dim, Complex};
use tiltlab::homology::ext_dim;
use tiltlab::rep::{hom_dim, is_isomorphic};
use tiltlab::tilting::torsion_radical;

/// Violations of the torsion pair axioms for `(𝒯, ℱ)` over the indecomposables
/// `corpus`: `Hom(𝒯, ℱ) = 0`, and each corpus module `X` has `t(X) ∈ 𝒯` and
/// `X / t(X) ∈ ℱ`, where `t(X)` is the torsion radical of `torsion`.
pub fn torsion_pair_violations(
    corpus: &[Module],
    torsion: &[Module],
    in_torsion: impl Fn(&Module) -> bool,
    in_free: impl Fn(&Module) -> bool,
) -> Vec<String> {
    let mut out = Vec::new();
    let frees: Vec<&Module> = corpus.iter().filter(|m| in_free(m)).collect();
    for t in corpus.iter().filter(|m| in_torsion(m)) {
        for f in &frees {
            if hom_dim(t, f) != 0 {
                out.push(format!("Hom({}, {}) ≠ 0", t.loewy_label(), f.loewy_label()));
            }
        }
    }
    for x in corpus {
        let bases = torsion_radical(torsion, x).expect("torsion radical");
        let (sub, _) = x.submodule(bases.clone());
        let (quot, _) = x.quotient(&bases);
        if !in_torsion(&sub) {
            out.push(format!("t({}) = {} is not torsion", x.loewy_label(), sub.loewy_label()));
        }
        if !in_free(&quot) {
            out.push(format!("{} / t = {} is not torsion-free", x.loewy_label(), quot.loewy_label()));
        }
    }
    out
}

/// `(𝒯_i, ℱ_i)` with `𝒯_i` generated by the modules in `∩_{j ≥ i} Ker Ext^j(T, −)`.
/// Torsion membership is tested as `Hom(X, F) = 0` for all indecomposable `F ∈ ℱ_i`.
pub fn lo_pair_violations(ctx: &TiltingContext, i: usize) -> Vec<String> {
    let gens = ctx.lo_generators(i);
    let in_free = |m: &Module| gens.iter().all(|g| hom_dim(g, m) == 0);
    let frees: Vec<Module> = ctx.catalog.modules.iter().filter(|m| in_free(m)).cloned().collect();
    let mut out = torsion_pair_violations(&ctx.catalog.modules, &gens, |m| frees.iter().all(|f| hom_dim(m, f) == 0), in_free);
    let t = ctx.t();
    for m in &ctx.catalog.modules {
        let vanishing = (i..=ctx.n()).all(|j| ext_dim(t, m, j).unwrap() == 0);
        if vanishing && !gens.iter().any(|g| is_isomorphic(g, m).unwrap().is_some()) {
            out.push(format!("{} has Ext^j(T, −) = 0 for j ≥ {i} but is not a generator", m.loewy_label()));
        }
    }
    out
}

/// `(KE_0, KE_1)` for a 1-tilting context.
pub fn ke_pair_violations(ctx: &TiltingContext) -> Vec<String> {
    let t = ctx.t().clone();
    torsion_pair_violations(
        &ctx.catalog.modules,
        &ctx.ke_members(0),
        |m| ext_dim(&t, m, 1).unwrap() == 0,
        |m| hom_dim(&t, m) == 0,
    )
}

/// `Tor_e(T, Ext^e(T, X)) ≅ X` for every corpus member of `KE_e`.
pub fn round_trip_violations(ctx: &TiltingContext) -> (usize, Vec<String>) {
    let mut checked = 0;
    let mut out = Vec::new();
    for e in 0..=ctx.n() {
        for x in ctx.ke_members(e) {
            checked += 1;
            let back = ctx.side.tor(&ctx.side.ext_module(&x, e).unwrap(), e).unwrap();
            if is_isomorphic(&back, &x).unwrap().is_none() {
                out.push(format!("Tor_{e}(T, Ext^{e}(T, {})) = {}", x.loewy_label(), back.loewy_label()));
            }
        }
    }
    (checked, out)
}

/// Ext-vanishing above `e` against `Hom_D(T, X[j]) = 0` for `j > e`, computed
/// separately, over every corpus module and every `e`.
pub fn aisle_route_violations(ctx: &TiltingContext) -> (usize, Vec<String>) {
    let t = ctx.t();
    let n = ctx.n();
    let tc = Complex::stalk(t, 0);
    let mut checked = 0;
    let mut out = Vec::new();
    for x in &ctx.catalog.modules {
        let xc = Complex::stalk(x, 0);
        for e in 0..=n {
            checked += 1;
            let by_ext = (e + 1..=n + 2).all(|i| ext_dim(t, x, i).unwrap() == 0);
            let by_aisle = (e as i32 + 1..=n as i32 + 2).all(|j| hom_derived_dim(&tc, &xc.shift(j), &ctx.opts).unwrap() == 0);
            let library = ctx.ke_membership_via_aisle(x, e);
            if by_ext != by_aisle || library != Ok(by_ext) {
                out.push(format!("{} at e = {e}: ext {by_ext}, aisle {by_aisle}, library {library:?}", x.loewy_label()));
            }
        }
    }
    (checked, out)
}

/// Every t-tree leaf lies in the expected shifted heart.
pub fn leaf_violations(pic: &DerivedPicture) -> (usize, Vec<String>) {
    let mut checked = 0;
    let mut out = Vec::new();
    for x in &pic.tilt.catalog.modules {
        match pic.t_tree(x) {
            Ok(tree) => {
                for leaf in tree.leaves() {
                    checked += 1;
                    if let Some(v) = pic.leaf_violation(leaf).unwrap() {
                        out.push(format!("{}: {v}", x.loewy_label()));
                    }
                }
            }
            Err(e) => out.push(format!("{}: {e}", x.loewy_label())),
        }
    }
    (checked, out)
}
