//! One PASS/FAIL line per acceptance criterion on the running example.
//!
//! The process fails when a criterion fails that is not listed in
//! `KNOWN_FAILURES`; known failures still print FAIL.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use tiltlab::derived::{is_isomorphic_in_d, Complex};
use tiltlab::homology::{ext_dims, BSide};
use tiltlab::options::Options;
use tiltlab::rep::{decompose, hom_dim, is_isomorphic, Module};
use tiltlab::tilting::{check_classical_tilting, miyashita_class, EWitness};
use tiltlab::tstructures::labels;

use common::*;

/// Criteria whose statement disagrees with an exact computation.
const KNOWN_FAILURES: &[u32] = &[4];

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn iso(a: &Module, b: &Module) -> bool {
    is_isomorphic(a, b).expect("isomorphism test").is_some()
}

fn sorted(mut v: Vec<String>) -> Vec<String> {
    v.sort();
    v
}

fn strings(xs: &[&str]) -> Vec<String> {
    sorted(xs.iter().map(|s| s.to_string()).collect())
}

fn ext_table() -> Outcome {
    let a = algebra();
    let t = tilting_module(&a);
    let two = Module::simple(&a, 1);
    let dims = ext_dims(&t, &two, 2).map_err(|e| e.to_string())?;
    ensure(dims == [1, 1, 0], || format!("dim Ext^i(T, 2) = {dims:?}"))?;
    let via = hom_dim(&Module::projective(&a, 1), &two);
    ensure(via == 1, || format!("dim Hom(2/3, 2) = {via}"))?;
    Ok(format!("dim Ext^i(T, 2) = {dims:?}"))
}

fn miyashita() -> Outcome {
    let a = algebra();
    let t = tilting_module(&a);
    let cases = [
        (Module::projective(&a, 1), Some(0)),
        (Module::projective(&a, 0), Some(0)),
        (Module::simple(&a, 0), Some(0)),
        (Module::simple(&a, 2), Some(2)),
        (Module::simple(&a, 1), None),
    ];
    let mut seen = Vec::new();
    for (m, want) in cases {
        let c = miyashita_class(&t, 2, &m).map_err(|e| e.to_string())?;
        ensure(c.class == want && !c.zero, || format!("{} ↦ {:?}, expected {want:?}", m.loewy_label(), c.class))?;
        seen.push(format!("{}↦{}", m.loewy_label(), c.class.map_or("None".into(), |e| e.to_string())));
    }
    Ok(seen.join(" "))
}

fn b_side() -> Outcome {
    let a = algebra();
    let t = tilting_module(&a);
    let side = BSide::new(&t, &Options::default()).map_err(|e| e.to_string())?;
    let b = side.b.clone();
    let q = b.quiver();
    ensure(q.vertices == ["4", "5", "6"], || format!("vertices {:?}", q.vertices))?;
    let arrows: Vec<(String, String, String)> =
        q.arrows.iter().map(|x| (x.name.clone(), q.vertices[x.source].clone(), q.vertices[x.target].clone())).collect();
    ensure(arrows.len() == 2 && arrows[0].1 == "4" && arrows[0].2 == "5" && arrows[1].1 == "5" && arrows[1].2 == "6", || {
        format!("arrows {arrows:?}")
    })?;
    let rel = format!("{}*{}", arrows[0].0, arrows[1].0);
    ensure(b.relation_strings() == [rel.clone()], || format!("relations {:?}", b.relation_strings()))?;
    ensure(b.dim() == 5, || format!("dim B = {}", b.dim()))?;

    // right B-modules are representations of B^op, where 5/4 = P(5) and 6/5 = P(6)
    let bop = side.right.algebra().clone();
    let expected_tb = Module::sum(&bop, &[Module::projective(&bop, 1), Module::projective(&bop, 2), Module::simple(&bop, 2)]);
    ensure(iso(&side.right, &expected_tb), || format!("T_B = {}", side.right.describe(&Options::default())))?;

    let hom = |m: &Module| side.hom_module(m).map_err(|e| e.to_string());
    let h12 = hom(&Module::projective(&a, 0))?;
    ensure(iso(&h12, &Module::projective(&b, 1)), || format!("Hom(T, 1/2) = {}", h12.loewy_label()))?;
    let h1 = hom(&Module::simple(&a, 0))?;
    ensure(iso(&h1, &Module::projective(&b, 0)), || format!("Hom(T, 1) = {}", h1.loewy_label()))?;
    let e2 = side.ext_module(&Module::simple(&a, 1), 1).map_err(|e| e.to_string())?;
    ensure(iso(&e2, &Module::simple(&b, 0)), || format!("Ext^1(T, 2) = {}", e2.loewy_label()))?;
    Ok(format!(
        "B: 4→5→6 with {rel} = 0; T_B = {}; Hom(T,1/2) = {}; Hom(T,1) = {}; Ext^1(T,2) = {}",
        side.right.describe(&Options::default()),
        h12.loewy_label(),
        h1.loewy_label(),
        e2.loewy_label()
    ))
}

fn static_witness() -> Outcome {
    let a = algebra();
    let t = tilting_module(&a);
    let side = BSide::new(&t, &Options::default()).map_err(|e| e.to_string())?;
    let hom = side.hom_module(&Module::simple(&a, 1)).map_err(|e| e.to_string())?;
    let tor = side.tor(&hom, 2).map_err(|e| e.to_string())?;
    let three = Module::simple(&a, 2);
    ensure(tor.dims() == [0, 0, 1] && iso(&tor, &three), || {
        let ext1 = side.ext_module(&Module::simple(&a, 1), 1).ok();
        let via_ext = ext1.and_then(|e| side.tor(&e, 2).ok()).map_or("?".into(), |m| m.loewy_label());
        format!(
            "Hom(T, 2) = {}, Tor_2(T, Hom(T, 2)) has dims {:?}; Tor_2(T, Ext^1(T, 2)) = {via_ext}",
            hom.loewy_label(),
            tor.dims()
        )
    })?;
    Ok("Tor_2(T, Hom(T, 2)) ≅ 3".into())
}

fn resolution_terms() -> Outcome {
    let a = algebra();
    let t = tilting_module(&a);
    let cert = check_classical_tilting(&t, 2, &Options::default()).map_err(|e| e.to_string())?;
    let expected = [
        Module::sum(&a, &[Module::projective(&a, 1), Module::projective(&a, 0), Module::projective(&a, 0)]),
        Module::projective(&a, 1),
        Module::projective(&a, 2),
    ];
    let terms = &cert.resolution.terms;
    ensure(terms.len() == expected.len(), || format!("{} terms", terms.len()))?;
    let mut shown = Vec::new();
    for (k, (got, want)) in terms.iter().zip(&expected).enumerate() {
        let parts = decompose(got).map_err(|e| e.to_string())?;
        let want_parts = decompose(want).map_err(|e| e.to_string())?;
        let same = parts.len() == want_parts.len()
            && want_parts.iter().all(|(w, k)| parts.iter().any(|(g, j)| j == k && iso(g, w)));
        ensure(same, || format!("P_{k} = {}", got.describe(&Options::default())))?;
        shown.push(got.describe(&Options::default()));
    }
    ensure(cert.rigidity.iter().all(|&d| d == 0), || format!("rigidity {:?}", cert.rigidity))?;
    Ok(format!("P = {}", shown.join(" → ")))
}

fn derived_objects() -> Outcome {
    let pic = picture();
    let got: Vec<String> = pic.universe.iter().map(|o| o.label.clone()).collect();
    let want = strings(&["1", "2", "3", "1/2", "2/3", "(2/3→1/2)"]);
    ensure(sorted(got.clone()) == want, || format!("objects {got:?}"))?;
    for (i, x) in pic.universe.iter().enumerate() {
        for y in &pic.universe[i + 1..] {
            for s in -3..=3 {
                let same = is_isomorphic_in_d(&x.complex, &y.complex.shift(s), &pic.opts).map_err(|e| e.to_string())?;
                ensure(!same, || format!("{} ≅ {}[{s}]", x.label, y.label))?;
            }
        }
    }
    Ok(format!("{} objects: {}", got.len(), got.join(", ")))
}

fn hearts_and_pairs() -> Outcome {
    let pic = picture();
    let err = |e: tiltlab::tstructures::TStructureError| e.to_string();
    let check = |name: &str, got: Vec<String>, want: &[&str]| -> Result<(), String> {
        ensure(sorted(got.clone()) == strings(want), || format!("{name} = {got:?}"))
    };
    check("H_0", labels(&pic.heart(&pic.intermediate[0]).map_err(err)?), &["1", "2", "3", "1/2", "2/3"])?;
    check("H_1", labels(&pic.heart(&pic.intermediate[1]).map_err(err)?), &["1", "2", "3[1]", "1/2", "2/3", "(2/3→1/2)"])?;
    let h2 = ["1", "3[2]", "1/2", "2/3", "(2/3→1/2)"];
    check("H_2", labels(&pic.heart(&pic.intermediate[2]).map_err(err)?), &h2)?;
    check("H_T", labels(&pic.heart(&pic.tilting).map_err(err)?), &h2)?;
    let (x0, y0) = pic.heart_torsion_pair(0).map_err(err)?;
    check("X_0", labels(&x0), &["1", "2", "1/2", "2/3"])?;
    check("Y_0", labels(&y0), &["3"])?;
    let (x1, y1) = pic.heart_torsion_pair(1).map_err(err)?;
    check("X_1", labels(&x1), &["1", "1/2", "2/3", "(2/3→1/2)"])?;
    check("Y_1", labels(&y1), &["3[1]"])?;
    Ok("H_0, H_1, H_2 = H_T, (X_0, Y_0), (X_1, Y_1) as displayed".into())
}

fn t_tree_of_two() -> Outcome {
    let pic = picture();
    let a = algebra();
    let tree = pic.t_tree(&Module::simple(&a, 1)).map_err(|e| e.to_string())?;
    for (path, want) in [("", "2"), ("0", "2"), ("1", "0"), ("00", "2/3"), ("01", "3[1]"), ("10", "0"), ("11", "0")] {
        let node = tree.node(path).ok_or_else(|| format!("no node {path}"))?;
        ensure(node.label == want, || format!("{} = {}, expected {want}", node.name(), node.label))?;
    }
    let x0 = tree.node("0").unwrap();
    let tri = x0.triangle.as_ref().ok_or("X_0 has no triangle")?;
    ensure(tri.torsion_label == "2/3" && tri.free_label == "3[1]", || {
        format!("triangle {} → 2 → {}", tri.torsion_label, tri.free_label)
    })?;
    ensure(!tri.f.is_nullhomotopic().map_err(|e| e.to_string())?, || "2/3 → 2 is zero".into())?;
    ensure(!tri.g.is_nullhomotopic().map_err(|e| e.to_string())?, || "2 → 3[1] is zero".into())?;
    let cone = tri.f.cone();
    let three = Complex::stalk(&Module::simple(&a, 2), -1);
    ensure(is_isomorphic_in_d(&cone, &three, &pic.opts).map_err(|e| e.to_string())?, || "cone(2/3 → 2) ≇ 3[1]".into())?;
    Ok(tree.render().lines().map(|l| l.split_whitespace().collect::<Vec<_>>().join(" ")).collect::<Vec<_>>().join("; "))
}

fn jms_agreement() -> Outcome {
    let ctx = context();
    let a = algebra();
    let (_, witnesses) = ctx.jms_filtration(&Module::simple(&a, 1)).map_err(|e| e.to_string())?;
    let want = EWitness::Cokernel { source: "2/3".into(), kernel: "3".into() };
    ensure(witnesses.iter().flatten().any(|(l, w)| l == "2" && *w == want), || format!("witnesses {witnesses:?}"))?;
    let mut count = 0;
    for x in &ctx.catalog.modules {
        let (jms, _) = ctx.jms_filtration(x).map_err(|e| e.to_string())?;
        let lo = ctx.lo_filtration(x).map_err(|e| e.to_string())?;
        ensure(jms.same_chain(&lo), || format!("{}: jms {} vs lo {}", x.loewy_label(), jms.render(), lo.render()))?;
        count += 1;
    }
    Ok(format!("2 ∈ E_0 via {want}; chains agree on {count} modules"))
}

fn property_suites() -> Outcome {
    let ctx = context();
    let mut report = Vec::new();
    let mut fail = Vec::new();
    let mut tally = |name: &str, checked: usize, v: Vec<String>| {
        report.push(format!("{name} {checked}/{}", v.len()));
        fail.extend(v.into_iter().map(|x| format!("{name}: {x}")));
    };
    let one = one_tilting_context();
    tally("(KE_0,KE_1) on 1-tilting", one.catalog.modules.len(), ke_pair_violations(one));
    for i in 1..=ctx.n() {
        tally(&format!("(T_{i},F_{i})"), ctx.catalog.modules.len(), lo_pair_violations(ctx, i));
    }
    let (c, v) = round_trip_violations(ctx);
    tally("round trips", c, v);
    let (c, v) = aisle_route_violations(ctx);
    tally("Ext vs aisle", c, v);
    let claims = picture().verify_structural_claims().map_err(|e| e.to_string())?;
    for check in claims.checks {
        tally(&check.name, check.checked, check.violations);
    }
    let (c, v) = leaf_violations(picture());
    tally("t-tree leaves", c, v);
    ensure(fail.is_empty(), || fail.join("; "))?;
    Ok(format!("checked/violations: {}", report.join(", ")))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "Ext table of T against 2", ext_table),
        (2, "Miyashita classification", miyashita),
        (3, "endomorphism side", b_side),
        (4, "sequentially static failure witness", static_witness),
        (5, "tilting certificate and resolution", resolution_terms),
        (6, "derived indecomposables", derived_objects),
        (7, "hearts and heart torsion pairs", hearts_and_pairs),
        (8, "t-tree of 2", t_tree_of_two),
        (9, "JMS agreement", jms_agreement),
        (10, "property suites", property_suites),
    ];
    let mut unexpected = 0;
    for (id, name, f) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let ms = start.elapsed().as_millis();
        match result {
            Ok(detail) => println!("PASS {id:>2} {name} ({ms} ms): {detail}"),
            Err(detail) => {
                let known = KNOWN_FAILURES.contains(&id);
                if !known {
                    unexpected += 1;
                }
                let tag = if known { " [known]" } else { "" };
                println!("FAIL {id:>2} {name}{tag} ({ms} ms): {detail}");
            }
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
