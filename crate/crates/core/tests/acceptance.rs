//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Built with `harness = false` so the lines are never captured.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use hypertrop::catalog::enumerate_trivalent_graphs;
use hypertrop::chains::{build_chain, chain_count, chain_forms, is_hyperelliptic_chain, ChainLength, ChainLengths};
use hypertrop::embedding::{biedge_surgery, is_crowded, surgery_cuts, Crowdedness};
use hypertrop::graph::MetricGraph;
use hypertrop::hyperelliptic::is_hyperelliptic;
use hypertrop::iso::canonical_form;
use hypertrop::lattice::{
    enumerate_hyperelliptic_polygons, enumerate_maximal_hyperelliptic, maximal_polygons, AffineMap, LatticePoint,
    LatticePolygon,
};
use hypertrop::moduli::{cone_dim, length_functionals, sample_heights, verify_theorem, TheoremOptions, TheoremReport};
use hypertrop::rational::int;
use hypertrop::triangulation::{enumerate_triangulations, regular_height, EnumerationOptions, UnimodularTriangulation};
use hypertrop::tropical::{dual_curve, skeleton};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Wall-clock budgets per criterion.
const BUDGETS: [Duration; 8] = [
    Duration::from_secs(1),
    Duration::from_secs(60),
    Duration::from_secs(600),
    Duration::from_secs(1800),
    Duration::from_secs(3600),
    Duration::from_secs(3600),
    Duration::from_secs(1800),
    Duration::from_secs(600),
];

const THEOREM_SEED: u64 = 7;
const THEOREM_SAMPLES: usize = 3;
const PROPERTY_SEED: u64 = 2024;
const RANDOM_CHAINS: usize = 500;
const HEIGHTS_PER_TRIANGULATION: usize = 10;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn regular(p: &LatticePolygon) -> Vec<UnimodularTriangulation> {
    let opts = EnumerationOptions { regular_only: true, modulo_symmetry: false, max_genus: 3 };
    enumerate_triangulations(p, opts).unwrap()
}

fn criterion_1() -> Outcome {
    for g in 2..=8 {
        let forms = chain_forms(g).map_err(|e| e.to_string())?;
        let formula = (1u64 << (g - 2)) + (1u64 << ((g - 2) / 2));
        check(chain_count(g) == formula, || format!("chain_count({g}) = {}, formula {formula}", chain_count(g)))?;
        check(forms.len() as u64 == formula, || format!("genus {g}: {} distinct chains, expected {formula}", forms.len()))?;
    }
    let g4 = chain_forms(4).unwrap().len();
    check(g4 == 6, || format!("genus 4 has {g4} chain types"))?;
    Ok("chain types for g=2..8 match 2^(g-2)+2^floor((g-2)/2); g=4 gives 6".into())
}

/// Trapezoids with bottom edge k and top edge 2g+2-k over the interior
/// segment y = 1; flipping y swaps k and 2g+2-k.
fn trapezoid(g: usize, k: usize) -> LatticePolygon {
    let (g, k) = (g as i64, k as i64);
    let mut pts = vec![LatticePoint::new(0, 0), LatticePoint::new(0, 2), LatticePoint::new(2 * g + 2 - k, 2)];
    if k > 0 {
        pts.push(LatticePoint::new(k, 0));
    }
    LatticePolygon::hull_of(&pts).unwrap()
}

fn criterion_2() -> Outcome {
    for g in 2..=6 {
        let found = enumerate_maximal_hyperelliptic(g).map_err(|e| e.to_string())?;
        check(found.len() == g + 2, || format!("genus {g}: {} maximal hyperelliptic polygons", found.len()))?;
        let oracle: Vec<LatticePolygon> = (0..=g + 1).map(|k| trapezoid(g, k)).collect();
        for t in &oracle {
            check(t.genus() == g && t.is_hyperelliptic() && t.is_maximal(), || format!("oracle polygon {t:?} is not maximal hyperelliptic"))?;
        }
        let a: BTreeSet<LatticePolygon> = found.iter().map(LatticePolygon::normal_form).collect();
        let b: BTreeSet<LatticePolygon> = oracle.iter().map(LatticePolygon::normal_form).collect();
        check(b.len() == g + 2, || format!("genus {g}: oracle trapezoids collapse to {} classes", b.len()))?;
        check(a == b, || format!("genus {g}: enumeration differs from the trapezoid family"))?;
    }
    Ok("g+2 maximal hyperelliptic polygons for g=2..6, equal to the trapezoid family".into())
}

fn criterion_3() -> Outcome {
    let mut counts = Vec::new();
    for (g, expect) in [(2usize, 45usize), (3, 79)] {
        let formula = (g + 3) * (2 * g * g + 15 * g + 16) / 6;
        check(formula == expect, || format!("formula at {g} is {formula}"))?;
        let n = enumerate_hyperelliptic_polygons(g).map_err(|e| e.to_string())?.len();
        check(n == expect, || format!("genus {g}: {n} hyperelliptic polygons, expected {expect}"))?;
        counts.push(n);
    }
    Ok(format!("hyperelliptic polygons: g=2 -> {}, g=3 -> {}", counts[0], counts[1]))
}

fn criterion_4() -> Outcome {
    let mut sizes = Vec::new();
    let mut sprawling = 0;
    let mut crowded = [0usize; 6];
    for g in 2..=5 {
        let catalog = enumerate_trivalent_graphs(g).map_err(|e| e.to_string())?;
        let ours: BTreeSet<_> = catalog.iter().map(canonical_form).collect();
        let oracle: BTreeSet<_> = common::trivalent_classes(g)
            .iter()
            .map(|m| canonical_form(&MetricGraph::combinatorial(m.len(), &common::to_pairs(m)).unwrap()))
            .collect();
        check(ours.len() == catalog.len() && ours == oracle, || {
            format!("genus {g}: catalog {} vs oracle {} classes", ours.len(), oracle.len())
        })?;
        sizes.push(catalog.len());
        for x in &catalog {
            if g <= 4 && x.is_sprawling().is_some() {
                sprawling += 1;
            }
            if is_crowded(x).map_err(|e| e.to_string())? == Crowdedness::Crowded {
                crowded[g] += 1;
            }
        }
    }
    check(sprawling == 4, || format!("{sprawling} sprawling graphs of genus <= 4"))?;
    check(crowded[2] + crowded[3] + crowded[4] == 0, || format!("crowded graphs below genus 5: {:?}", &crowded[2..5]))?;
    check(crowded[5] == 7, || format!("{} crowded graphs of genus 5", crowded[5]))?;
    Ok(format!("catalog sizes {sizes:?} confirmed by oracle; sprawling(g<=4) = 4; crowded = 0 below genus 5, 7 at genus 5"))
}

fn theorem_reports() -> Result<Vec<TheoremReport>, String> {
    let opts = TheoremOptions { samples: THEOREM_SAMPLES, seed: THEOREM_SEED, ..Default::default() };
    let mut out = Vec::new();
    for g in 2..=3 {
        for p in maximal_polygons(g).map_err(|e| e.to_string())? {
            out.push(verify_theorem(&p, &opts).map_err(|e| format!("polygon {:?}: {e}", p.vertices()))?);
        }
    }
    Ok(out)
}

fn criterion_5(reports: &Result<Vec<TheoremReport>, String>) -> Outcome {
    let reports = reports.as_ref().map_err(Clone::clone)?;
    let mut instances = 0;
    let mut triangulations = 0;
    for r in reports {
        check(r.instances == (1 + THEOREM_SAMPLES) * r.regular_triangulations, || {
            format!("{:?}: {} instances for {} triangulations", r.polygon.vertices(), r.instances, r.regular_triangulations)
        })?;
        check(r.crowded_or_sprawling == 0, || "a skeleton was crowded or sprawling".into())?;
        if r.hyperelliptic_polygon {
            check(r.nonhyperelliptic_metrics == 0, || "hyperelliptic polygon gave a nonhyperelliptic metric".into())?;
            check(r.skeleton_types.keys().all(|k| k.starts_with("chain:")), || "non-chain skeleton".into())?;
            check(r.cones_with_hyperelliptic_metrics == Some(r.regular_triangulations), || "cone without hyperelliptic metric".into())?;
        } else {
            check(r.hyperelliptic_metrics == 0, || "counterexample: hyperelliptic metric from nonhyperelliptic polygon".into())?;
            check(r.cones_with_hyperelliptic_metrics == Some(0), || "hyperelliptic metric inside a nonhyperelliptic cone".into())?;
        }
        instances += r.instances;
        triangulations += r.regular_triangulations;
    }
    let polygons = reports.len();
    Ok(format!(
        "{polygons} maximal polygons, {triangulations} regular triangulations, {instances} instances (seed {THEOREM_SEED}), 0 counterexamples"
    ))
}

fn criterion_6(reports: &Result<Vec<TheoremReport>, String>) -> Outcome {
    let reports = reports.as_ref().map_err(Clone::clone)?;
    let mut total = 0;
    let mut bridges = 0;
    for r in reports.iter().filter(|r| r.genus == 3 && !r.hyperelliptic_polygon) {
        let chains: usize = r.skeleton_types.iter().filter(|(k, _)| k.starts_with("chain:")).map(|(_, n)| n).sum();
        check(r.obstructions.reports == chains, || format!("{} reports for {chains} chain instances", r.obstructions.reports))?;
        if let Some(m) = &r.obstructions.min_margin {
            check(m.0 >= int(0), || format!("negative margin {}", m.0))?;
        }
        total += chains;
        bridges += r.obstructions.with_bridges;
    }
    check(total > 0, || "no nonhyperelliptic chain instances were seen".into())?;
    Ok(format!("{total} chain instances on nonhyperelliptic genus-3 polygons ({bridges} with bridges), all with l_2 >= l_1 + l_h and l_1 != l_2"))
}

fn random_map(rng: &mut ChaCha8Rng) -> AffineMap {
    let mut m = AffineMap::IDENTITY;
    for _ in 0..rng.gen_range(0..6) {
        let k = rng.gen_range(-2..=2);
        let e = match rng.gen_range(0..4) {
            0 => [[1, k], [0, 1]],
            1 => [[1, 0], [k, 1]],
            2 => [[0, -1], [1, 0]],
            _ => [[0, 1], [1, 0]],
        };
        m = AffineMap::new(e, [0, 0]).unwrap().compose(&m);
    }
    AffineMap::new(m.m, [rng.gen_range(-5..=5), rng.gen_range(-5..=5)]).unwrap()
}

fn polygon_properties(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut polygons = Vec::new();
    for g in 2..=3 {
        polygons.extend(enumerate_hyperelliptic_polygons(g).map_err(|e| e.to_string())?);
        polygons.extend(maximal_polygons(g).map_err(|e| e.to_string())?);
    }
    for p in &polygons {
        let twice = p.twice_area() as usize;
        check(twice + 2 == 2 * p.genus() + p.boundary_count(), || format!("Pick fails on {:?}", p.vertices()))?;
        check(p.lattice_points().len() == p.genus() + p.boundary_count(), || format!("point count on {:?}", p.vertices()))?;
        for _ in 0..4 {
            let q = p.transform(&random_map(rng));
            check(q.classify() == p.classify(), || format!("classification moved on {:?}", p.vertices()))?;
            check(q.normal_form() == p.normal_form() && q.is_equivalent(p), || format!("normal form moved on {:?}", p.vertices()))?;
            check(q.symmetries().len() == p.symmetries().len(), || format!("symmetry count moved on {:?}", p.vertices()))?;
        }
    }
    Ok(polygons.len())
}

/// Balancing, genus, face bijection and the cycle adjacency correspondence
/// at the canonical height; symbolic lengths at sampled heights.
fn curve_properties(rng: &mut ChaCha8Rng) -> Result<(usize, usize), String> {
    let mut checked = 0;
    let mut heights = 0;
    for g in 2..=3 {
        for p in maximal_polygons(g).map_err(|e| e.to_string())? {
            let interior: BTreeSet<LatticePoint> = p.interior_points().into_iter().collect();
            // genus 3 is thinned; criterion 5 already covers every triangulation there
            let step = if g == 2 { 1 } else { 10 };
            for tri in regular(&p).iter().step_by(step) {
                let h0 = regular_height(tri).map_err(|e| e.to_string())?.ok_or("nonregular triangulation")?;
                let curve = dual_curve(&p, tri, &h0).map_err(|e| e.to_string())?;
                check(curve.is_balanced() && curve.is_trivalent(), || "unbalanced or non-trivalent curve".into())?;
                check(curve.genus() == g, || "curve genus differs".into())?;
                let faces: BTreeSet<LatticePoint> = curve.faces.iter().map(|f| tri.points[f.point]).collect();
                check(faces == interior, || "faces differ from interior points".into())?;
                let sk = skeleton(&curve).map_err(|e| e.to_string())?;
                check(sk.graph.genus() == g && sk.graph.is_trivalent(), || "skeleton genus or valence".into())?;
                let emap = tri.edge_map();
                let cycles = sk.cycle_map();
                for (i, (a, ea)) in cycles.iter().enumerate() {
                    for (b, eb) in &cycles[i + 1..] {
                        let share = ea.iter().any(|e| eb.contains(e));
                        check(share == emap.contains_key(&(*a.min(b), *a.max(b))), || "cycle adjacency mismatch".into())?;
                    }
                }
                let f = length_functionals(&p, tri).map_err(|e| e.to_string())?;
                for h in sample_heights(tri, &h0, HEIGHTS_PER_TRIANGULATION, rng) {
                    let measured = skeleton(&dual_curve(&p, tri, &h).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                    check(f.evaluate(&h) == measured.graph.lengths(), || "symbolic lengths differ from measured".into())?;
                    heights += 1;
                }
                checked += 1;
            }
        }
    }
    Ok((checked, heights))
}

fn random_chain(rng: &mut ChaCha8Rng) -> MetricGraph {
    let g = rng.gen_range(2..=7);
    let bits: Vec<bool> = (0..g - 1).map(|_| rng.gen()).collect();
    let mut next = || int(rng.gen_range(1..=3));
    let lengths = ChainLengths {
        loops: vec![next(), next()],
        pairs: (0..g - 2).map(|_| [ChainLength(next()), ChainLength(next())]).collect(),
        splits: (0..g - 1).map(|_| next()).collect(),
    };
    build_chain(g, &bits, &lengths).unwrap()
}

fn chain_properties(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut hyperelliptic = 0;
    for _ in 0..RANDOM_CHAINS {
        let c = random_chain(rng);
        let a = is_hyperelliptic(&c).map_err(|e| e.to_string())?.verdict;
        let b = is_hyperelliptic_chain(&c).map_err(|e| e.to_string())?;
        check(a == b, || format!("verdicts differ on {c:?}"))?;
        hyperelliptic += a as usize;
    }
    Ok(hyperelliptic)
}

/// Surgery and component implications over the catalog; returns how often
/// each premise held.
fn crowded_implications() -> Result<(usize, usize), String> {
    let crowded = |x: &MetricGraph| is_crowded(x).map(|c| c == Crowdedness::Crowded).map_err(|e| e.to_string());
    let mut surgery_premises = 0;
    let mut component_premises = 0;
    for g in 2..=5 {
        for x in enumerate_trivalent_graphs(g).map_err(|e| e.to_string())? {
            let whole = crowded(&x)?;
            for ((e, f), sides) in surgery_cuts(&x) {
                for keep in sides {
                    let s = biedge_surgery(&x, (e, f), keep).map_err(|e| e.to_string())?;
                    if crowded(&s)? {
                        surgery_premises += 1;
                        check(whole, || format!("surgery on a crowded-free graph gave a crowded graph: {x:?}"))?;
                    }
                }
            }
            let bridges = x.bridges();
            for comp in x.two_edge_connected_components() {
                let part = x.induced(&comp, |i| bridges.contains(&i)).smoothed();
                if part.genus() >= 2 && part.is_trivalent() && crowded(&part)? {
                    component_premises += 1;
                    check(whole, || format!("crowded component inside an uncrowded graph: {x:?}"))?;
                }
            }
        }
    }
    Ok((surgery_premises, component_premises))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(PROPERTY_SEED);
    let polygons = polygon_properties(&mut rng)?;
    let (tris, heights) = curve_properties(&mut rng)?;
    let hyp = chain_properties(&mut rng)?;
    let (surgery, components) = crowded_implications()?;
    Ok(format!(
        "{polygons} polygons (Pick, invariance); {tris} triangulations, {heights} sampled heights; \
         {RANDOM_CHAINS} chains ({hyp} hyperelliptic); surgery premises {surgery}, component premises {components} (seed {PROPERTY_SEED})"
    ))
}

fn criterion_8(reports: &Result<Vec<TheoremReport>, String>) -> Outcome {
    let reports = reports.as_ref().map_err(Clone::clone)?;
    let mut max = [0usize; 4];
    // every hyperelliptic polygon of genus 2, not only the maximal ones
    for p in enumerate_hyperelliptic_polygons(2).map_err(|e| e.to_string())? {
        for tri in regular(&p) {
            let d = cone_dim(&p, &tri).map_err(|e| e.to_string())?;
            check(d <= 3, || format!("cone_dim {d} > 3 on {:?}", p.vertices()))?;
            max[2] = max[2].max(d);
        }
    }
    for r in reports.iter().filter(|r| r.hyperelliptic_polygon) {
        let bound = 2 * r.genus - 1;
        check(r.max_cone_dim <= bound, || format!("cone dimension {} > {bound} on {:?}", r.max_cone_dim, r.polygon.vertices()))?;
        max[r.genus] = max[r.genus].max(r.max_cone_dim);
    }
    Ok(format!("cone dimensions within 2g-1; achieved maximum {} at g=2, {} at g=3", max[2], max[3]))
}

fn run(n: usize, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    });
    let took = start.elapsed();
    let budget = BUDGETS[n - 1];
    let (ok, detail) = match outcome {
        Ok(d) if took <= budget => (true, d),
        Ok(d) => (false, format!("{d}; over budget {budget:?}")),
        Err(e) => (false, e),
    };
    println!("criterion {n}: {} ({:.1}s) {detail}", if ok { "PASS" } else { "FAIL" }, took.as_secs_f64());
    ok
}

fn main() {
    let mut ok = true;
    ok &= run(1, criterion_1);
    ok &= run(2, criterion_2);
    ok &= run(3, criterion_3);
    ok &= run(4, criterion_4);
    // the theorem sweep is timed under criterion 5 and reused by 6 and 8
    let mut reports: Result<Vec<TheoremReport>, String> = Err("theorem sweep did not run".into());
    ok &= run(5, || {
        reports = theorem_reports();
        criterion_5(&reports)
    });
    ok &= run(6, || criterion_6(&reports));
    ok &= run(7, criterion_7);
    ok &= run(8, || criterion_8(&reports));
    if !ok {
        std::process::exit(1);
    }
}
