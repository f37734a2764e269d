mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tiltlab::cli::{main_with_args, parse_workspace_str, Overrides, Workspace};
use tiltlab::derived::{hom_derived_dim, Complex};
use tiltlab::homology::ext_dim;
use tiltlab::linalg::Matrix;
use tiltlab::options::Options;
use tiltlab::rep::{hom_dim, is_isomorphic, Module};
use tiltlab::tilting::{miyashita_class, torsion_radical};

use common::*;

fn random_invertible(rng: &mut ChaCha8Rng, p: u32, n: usize) -> Matrix {
    loop {
        let data = (0..n * n).map(|_| rng.gen_range(0..p)).collect();
        let m = Matrix::from_vec(p, n, n, data);
        if m.is_invertible() {
            return m;
        }
    }
}

/// `m` transported along a random change of basis at every vertex.
fn scrambled(m: &Module, seed: u64) -> Module {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = m.p();
    let g: Vec<Matrix> = m.dims().iter().map(|&d| random_invertible(&mut rng, p, d)).collect();
    let q = m.algebra().quiver();
    let action = q
        .arrows
        .iter()
        .enumerate()
        .map(|(k, a)| g[a.target].mul(m.action(k)).mul(&g[a.source].inverse().unwrap()))
        .collect();
    Module::new(m.algebra().clone(), m.dims().to_vec(), action).unwrap()
}

/// A direct sum of catalog indecomposables selected by `picks`.
fn sum_of(picks: &[usize]) -> Module {
    let ctx = context();
    let parts: Vec<Module> = picks.iter().map(|&i| ctx.catalog.modules[i % ctx.catalog.modules.len()].clone()).collect();
    Module::sum(&algebra(), &parts)
}

fn workspace_with(name: &str, m: &Module) -> Workspace {
    let mut ws = parse_workspace_str(tiltlab::cli::RUNNING_EXAMPLE, &Overrides::default()).unwrap();
    ws.modules.push((name.into(), m.clone()));
    ws
}

fn run(args: &[&str]) -> tiltlab::cli::Outcome {
    main_with_args(std::iter::once("tiltlab").chain(args.iter().copied()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn serialized_modules_parse_back_isomorphic(picks in prop::collection::vec(0usize..5, 1..4), seed in any::<u64>()) {
        let m = scrambled(&sum_of(&picks), seed);
        let text = workspace_with("X", &m).to_text();
        let back = parse_workspace_str(&text, &Overrides::default()).unwrap().module("X").unwrap();
        prop_assert_eq!(back.actions(), m.actions());
        prop_assert!(is_isomorphic(&back, &sum_of(&picks)).unwrap().is_some());
    }

    #[test]
    fn serialized_complexes_parse_back(index in 0usize..6, shift in -2i32..3) {
        let pic = picture();
        let c = pic.object(index, shift);
        let mut ws = parse_workspace_str(tiltlab::cli::RUNNING_EXAMPLE, &Overrides::default()).unwrap();
        ws.complexes.push(("C".into(), c.clone()));
        let back = parse_workspace_str(&ws.to_text(), &Overrides::default()).unwrap().complex("C").unwrap();
        prop_assert_eq!(back.lo(), c.lo());
        prop_assert_eq!(back.hi(), c.hi());
        for i in c.lo()..c.hi() {
            let (d1, d2) = (back.diff(i), c.diff(i));
            prop_assert_eq!(d1.blocks(), d2.blocks());
        }
    }

    #[test]
    fn parser_never_panics(text in "tiltlab-format 1\n(\\[(algebra|module M|complex C)\\]\n)?([a-z0-9 =:\\[\\],>*+-]{0,20}\n){0,6}") {
        let _ = parse_workspace_str(&text, &Overrides::default());
    }

    #[test]
    fn ext_is_additive_and_classes_follow(picks in prop::collection::vec(0usize..5, 1..4)) {
        let ctx = context();
        let m = sum_of(&picks);
        let c = miyashita_class(ctx.t(), 2, &m).unwrap();
        for i in 0..=2 {
            let parts: usize = picks.iter().map(|&k| ext_dim(ctx.t(), &ctx.catalog.modules[k], i).unwrap()).sum();
            prop_assert_eq!(c.ext[i], parts);
        }
        let classes: Vec<Option<usize>> = picks.iter().map(|&k| ctx.classes[k].class).collect();
        if classes.iter().all(|x| *x == classes[0]) {
            prop_assert_eq!(c.class, classes[0]);
        }
    }

    #[test]
    fn basis_change_preserves_invariants(pick in 0usize..5, seed in any::<u64>()) {
        let ctx = context();
        let m = &ctx.catalog.modules[pick];
        let s = scrambled(m, seed);
        prop_assert_eq!(ctx.class_of(&s).unwrap(), ctx.class_of(m).unwrap());
        prop_assert_eq!(s.loewy_label(), m.loewy_label());
        prop_assert_eq!(hom_dim(&s, m), hom_dim(m, m));
    }

    #[test]
    fn torsion_radical_is_idempotent(picks in prop::collection::vec(0usize..5, 1..4), i in 1usize..3) {
        let ctx = context();
        let gens = ctx.lo_generators(i);
        let x = sum_of(&picks);
        let bases = torsion_radical(&gens, &x).unwrap();
        let (t, _) = x.submodule(bases.clone());
        let again = torsion_radical(&gens, &t).unwrap();
        let full: usize = again.iter().map(Matrix::cols).sum();
        prop_assert_eq!(full, t.total_dim());
        let (quot, _) = x.quotient(&bases);
        let rest: usize = torsion_radical(&gens, &quot).unwrap().iter().map(Matrix::cols).sum();
        prop_assert_eq!(rest, 0);
    }

    #[test]
    fn jms_and_lo_agree_on_sums(picks in prop::collection::vec(0usize..5, 1..3)) {
        let ctx = context();
        let x = sum_of(&picks);
        let lo = ctx.lo_filtration(&x).unwrap();
        let (jms, _) = ctx.jms_filtration(&x).unwrap();
        prop_assert!(jms.same_chain(&lo), "{} vs {}", jms.render(), lo.render());
    }

    #[test]
    fn derived_hom_is_shift_invariant(a in 0usize..6, b in 0usize..6, s in -2i32..3, k in -2i32..3) {
        let pic = picture();
        let x = pic.object(a, 0);
        let y = pic.object(b, s);
        let opts = &pic.opts;
        prop_assert_eq!(hom_derived_dim(&x, &y, opts).unwrap(), hom_derived_dim(&x.shift(k), &y.shift(k), opts).unwrap());
    }

    #[test]
    fn derived_hom_between_stalks_is_ext(a in 0usize..5, b in 0usize..5, i in 0i32..3) {
        let ctx = context();
        let (x, y) = (&ctx.catalog.modules[a], &ctx.catalog.modules[b]);
        let d = hom_derived_dim(&Complex::stalk(x, 0), &Complex::stalk(y, -i), &Options::default()).unwrap();
        prop_assert_eq!(d, ext_dim(x, y, i as usize).unwrap());
    }
}

#[test]
fn torsion_pairs_in_module_categories() {
    let ctx = context();
    for i in 1..=ctx.n() {
        let v = lo_pair_violations(ctx, i);
        assert!(v.is_empty(), "(T_{i}, F_{i}): {v:?}");
    }
    let v = ke_pair_violations(one_tilting_context());
    assert!(v.is_empty(), "(KE_0, KE_1): {v:?}");
}

#[test]
fn one_tilting_classes() {
    let one = one_tilting_context();
    let labels = |e| one.ke_members(e).iter().map(Module::loewy_label).collect::<Vec<_>>();
    // every module lies in exactly one class when n = 1
    assert_eq!(labels(0).len() + labels(1).len(), one.catalog.modules.len());
    assert_eq!(labels(1), ["3"]);
}

#[test]
fn miyashita_round_trips() {
    let (checked, v) = round_trip_violations(context());
    assert!(checked >= 4);
    assert!(v.is_empty(), "{v:?}");
    let (_, v) = round_trip_violations(one_tilting_context());
    assert!(v.is_empty(), "{v:?}");
}

#[test]
fn ext_vanishing_matches_aisle_membership() {
    let (checked, v) = aisle_route_violations(context());
    assert_eq!(checked, 15);
    assert!(v.is_empty(), "{v:?}");
}

#[test]
fn t_tree_leaves_are_placed() {
    let (checked, v) = leaf_violations(picture());
    assert_eq!(checked, 20);
    assert!(v.is_empty(), "{v:?}");
}

#[test]
fn structural_claims_hold() {
    let report = picture().verify_structural_claims().unwrap();
    assert!(report.passed(), "{}", report.render());
}

#[test]
fn reports_are_deterministic_across_strategies() {
    for cmd in [&["hearts"][..], &["ttree", "--module", "2"], &["--format", "machine", "torsion-pairs"], &["bside"]] {
        let first = run(cmd);
        assert_eq!(first.status, 0, "{}", first.output);
        assert_eq!(run(cmd), first);
        let mut seq = vec!["--sequential"];
        seq.extend_from_slice(cmd);
        assert_eq!(run(&seq), first);
    }
}

#[test]
fn ttree_report_matches_the_worked_tree() {
    let o = run(&["ttree", "--module", "2"]);
    let lines: Vec<String> = o.output.lines().map(|l| l.split_whitespace().collect::<Vec<_>>().join(" ")).collect();
    assert_eq!(
        lines[..7],
        [
            "X = 2",
            "X_0 = 2",
            "X_1 = 0",
            "X_00 = 2/3 (weight 0)",
            "X_01 = 3[1] (weight 1)",
            "X_10 = 0 (weight 1)",
            "X_11 = 0 (weight 2)"
        ]
    );
    assert!(o.output.contains("X_0: 2/3 → 2 → 3[1] →"));
}

#[test]
fn field_override_is_honoured() {
    let o = run(&["--field", "3", "miyashita"]);
    assert_eq!(o.status, 0, "{}", o.output);
    assert_eq!(o.output, run(&["miyashita"]).output);
    assert_eq!(run(&["--field", "4", "miyashita"]).status, 1);
}

#[test]
fn workspace_files_load_from_disk() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/running.tilt");
    let o = run(&["--workspace", path.to_str().unwrap(), "ext-table"]);
    assert_eq!(o.status, 0);
    assert!(o.output.contains("2           1      1      0"), "{}", o.output);
    assert_eq!(run(&["--workspace", "/nonexistent.tilt", "ext-table"]).status, 1);
}
