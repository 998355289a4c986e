//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::time::{Duration, Instant};

use hdta::batch::{
    conversion_agreement, engine_agreement, run_batch, ConversionVerdicts, EngineVerdicts,
    Execution,
};
use hdta::clocks::{time, Bound, ClockId, ClockSet, Valuation, Zone};
use hdta::compose::{iso_check, tensor, ClockPolicy};
use hdta::fixtures;
use hdta::hdta::{
    enumerate_regions, region_bound, region_reach, zone_graph_export, zone_reach, RegionOptions,
    SuccessorRule, ZoneOptions,
};
use hdta::milner::{measure, BenchSpec};
use hdta::random::{HdtaShape, TaShape};
use hdta::HdtaModel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, budget: Duration) -> Result<(), String> {
    if elapsed <= budget {
        Ok(())
    } else {
        Err(format!("took {elapsed:.2?}, budget {budget:.0?}"))
    }
}

fn fixture_verdicts() -> Outcome {
    let mut problems = Vec::new();
    let cases: [(&str, HdtaModel, bool); 4] = [
        ("fig3", fixtures::fig3(), true),
        ("fig4", fixtures::fig4(), true),
        ("fig5", fixtures::fig5(), true),
        ("fig5-no-square", fixtures::fig5_no_square(), false),
    ];
    for (name, m, expect) in cases {
        let t = Instant::now();
        let z = zone_reach(&m, ZoneOptions::default());
        let r = region_reach(&m, RegionOptions::default()).expect("small constants");
        if let Err(e) = within(t.elapsed(), Duration::from_secs(1)) {
            problems.push(format!("{name}: {e}"));
        }
        if z.reachable != expect || r.reachable != expect {
            problems.push(format!(
                "{name}: zone={} region={} expected {expect}",
                z.reachable, r.reachable
            ));
        }
        if expect && !z.witness.as_ref().is_some_and(|w| w.accepts(&m)) {
            problems.push(format!("{name}: no replayable witness"));
        }
    }
    let m = fixtures::fig4();
    let left = m.space().lookup("e2").expect("fig4 has e2");
    let g = zone_graph_export(&m, ZoneOptions::default());
    let at_left = g.zones_at(left).count();
    if at_left != 0 {
        problems.push(format!("fig4: {at_left} states at the left b-edge"));
    }
    outcome(
        problems.is_empty(),
        if problems.is_empty() {
            "fig3/fig4/fig5 reachable, fig5 without the square unreachable, zone = region, fig4 left b-edge has 0 states".to_string()
        } else {
            problems.join("; ")
        },
    )
}

/// Boxes drawn in the zone-graph figure for fig3, per location. Each box is
/// intersected with the location invariant before comparison.
const FIGURE_BOXES: &[(&str, &[&str])] = &[
    ("l0", &["x-y<=0 & y-x<=0"]),
    ("e1", &["x-y<=0 & y-x<=0 & x<=4"]),
    ("e2", &["x-y<=0 & y-x<=0 & x<=3"]),
    ("l1", &["x>=2 & x-y>=0 & x-y<=4"]),
    ("l2", &["y>=1 & y-x>=0 & y-x<=3"]),
    ("u", &["y-x<=0 & x<=4 & y<=3", "x-y<=0 & y<=3"]),
    ("e3", &["x-y>=2", "x>=2 & x<=4 & y<=3"]),
    ("e4", &["y-x>=1", "y>=1 & y<=3 & x<=4"]),
    ("lf", &["x>=2 & y>=1 & y-x<=1", "x>=2 & y>=1 & x-y<=3"]),
];

fn quarter_grid(limit: i64) -> Vec<Valuation> {
    let steps = 4 * limit;
    let mut out = Vec::new();
    for i in 0..=steps {
        for j in 0..=steps {
            out.push(Valuation::new(vec![time(i, 4), time(j, 4)]).expect("non-negative"));
        }
    }
    out
}

fn union_contains(zones: &[Zone], v: &Valuation) -> bool {
    zones.iter().any(|z| z.contains(v))
}

fn union_mismatches(model: &HdtaModel, rule: SuccessorRule, grid: &[Valuation]) -> Vec<String> {
    let clocks = model.clocks();
    let g = zone_graph_export(
        model,
        ZoneOptions {
            rule,
            ..Default::default()
        },
    );
    let mut out = Vec::new();
    for (loc, boxes) in FIGURE_BOXES {
        let cube = model.space().lookup(loc).expect("fig3 location");
        let inv = Zone::from_atoms(clocks.len(), model.inv(cube).atoms());
        let drawn: Vec<Zone> = boxes
            .iter()
            .map(|b| {
                let c = clocks.parse_constraint(b).expect("figure box parses");
                Zone::from_atoms(clocks.len(), c.atoms()).intersect(&inv)
            })
            .collect();
        let ours: Vec<Zone> = g.zones_at(cube).cloned().collect();
        let diff: Vec<&Valuation> = grid
            .iter()
            .filter(|v| union_contains(&ours, v) != union_contains(&drawn, v))
            .collect();
        if let Some(v) = diff.first() {
            out.push(format!(
                "{loc}: {} grid points differ, e.g. {}",
                diff.len(),
                v.display(clocks)
            ));
        }
    }
    out
}

fn zone_graph_figure() -> Outcome {
    let t = Instant::now();
    let m = fixtures::fig3();
    let clocks = m.clocks();
    let grid = quarter_grid(6);
    let mut problems = Vec::new();

    // named zones from the criterion text, with the engine's default rule
    let g = zone_graph_export(&m, ZoneOptions::default());
    let named = [("l0", "x-y<=0 & y-x<=0"), ("l1", "x>=2 & y>=0 & x-y<=4")];
    for (loc, text) in named {
        let cube = m.space().lookup(loc).expect("fig3 location");
        let want = Zone::from_atoms(
            clocks.len(),
            clocks.parse_constraint(text).expect("parses").atoms(),
        );
        let ours: Vec<Zone> = g.zones_at(cube).cloned().collect();
        if ours.len() != 1 || ours[0] != want {
            problems.push(format!(
                "{loc}: engine gives [{}], criterion states {text}",
                ours.iter()
                    .map(|z| z.render(clocks))
                    .collect::<Vec<_>>()
                    .join(" | ")
            ));
        }
    }
    for rule in [SuccessorRule::Exact, SuccessorRule::OverApprox] {
        for p in union_mismatches(&m, rule, &grid) {
            problems.push(format!("{rule:?} {p}"));
        }
    }
    if let Err(e) = within(t.elapsed(), Duration::from_secs(1)) {
        problems.push(e);
    }
    let boxes: usize = FIGURE_BOXES.iter().map(|(_, b)| b.len()).sum();
    outcome(
        problems.is_empty(),
        format!(
            "{} symbolic states vs {boxes} drawn boxes; {}",
            g.nodes.len(),
            if problems.is_empty() {
                "all per-location unions match".to_string()
            } else {
                problems.join("; ")
            }
        ),
    )
}

fn tensor_of_factors() -> Outcome {
    let t = Instant::now();
    let p = tensor(
        &fixtures::fig9_a(),
        &fixtures::fig9_b(),
        ClockPolicy::Reject,
    )
    .expect("disjoint clocks");
    let iso = iso_check(&p, &fixtures::fig3());
    let time_ok = within(t.elapsed(), Duration::from_secs(1));
    let mut detail = match &iso {
        Some(map) => {
            let sq = p.space().lookup("ea*eb").expect("product square");
            format!(
                "isomorphism found, ea*eb -> {}",
                fixtures::fig3().name(map[sq.index()])
            )
        }
        None => "no isomorphism between fig9-a (x) fig9-b and fig3".to_string(),
    };
    if let Err(e) = &time_ok {
        detail.push_str(&format!("; {e}"));
    }
    outcome(iso.is_some() && time_ok.is_ok(), detail)
}

fn conversion_equivalence() -> Outcome {
    let t = Instant::now();
    let out = run_batch(0..100, Execution::Parallel, |s| {
        conversion_agreement(s, TaShape::default())
    });
    let agree = out.iter().filter(|v| v.agree()).count();
    let reachable = out.iter().filter(|v| v.ta).count();
    let bad: Vec<u64> = out
        .iter()
        .filter(|v| !ConversionVerdicts::agree(v))
        .map(|v| v.seed)
        .collect();
    let time_ok = within(t.elapsed(), Duration::from_secs(30));
    outcome(
        agree == 100 && time_ok.is_ok(),
        format!(
            "{agree}/100 agree ({reachable} reachable){}{}",
            if bad.is_empty() {
                String::new()
            } else {
                format!(", disagreeing seeds {bad:?}")
            },
            time_ok.err().map(|e| format!("; {e}")).unwrap_or_default()
        ),
    )
}

fn engine_agreement_suite() -> Outcome {
    let t = Instant::now();
    let out = run_batch(0..200, Execution::Parallel, |s| {
        engine_agreement(s, HdtaShape::default())
    });
    let agree = out.iter().filter(|v| v.agree()).count();
    let reachable = out.iter().filter(|v| v.zone).count();
    let concrete = out.iter().filter(|v| v.concrete).count();
    let bad: Vec<u64> = out
        .iter()
        .filter(|v| !EngineVerdicts::agree(v))
        .map(|v| v.seed)
        .collect();
    let time_ok = within(t.elapsed(), Duration::from_secs(120));
    outcome(
        agree == 200 && time_ok.is_ok(),
        format!(
            "{agree}/200 agree ({reachable} reachable, {concrete} confirmed by bounded search){}{}",
            if bad.is_empty() {
                String::new()
            } else {
                format!(", disagreeing seeds {bad:?}")
            },
            time_ok.err().map(|e| format!("; {e}")).unwrap_or_default()
        ),
    )
}

const SAMPLES: usize = 1000;

fn random_zone(rng: &mut ChaCha8Rng, clocks: &ClockSet) -> Zone {
    let n = clocks.len();
    let mut z = Zone::universe(n);
    for _ in 0..rng.gen_range(1..=4) {
        let i = rng.gen_range(0..=n);
        let mut j = rng.gen_range(0..=n);
        if i == j {
            j = (j + 1) % (n + 1);
        }
        let k = rng.gen_range(-6..=6);
        let b = if rng.gen_bool(0.5) {
            Bound::le(k)
        } else {
            Bound::lt(k)
        };
        z.and_entry(i, j, b);
    }
    z
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Valuation {
    Valuation::new((0..n).map(|_| time(rng.gen_range(0..=32), 4)).collect()).expect("non-negative")
}

fn random_nonempty(rng: &mut ChaCha8Rng, clocks: &ClockSet) -> (Zone, Valuation) {
    loop {
        let z = random_zone(rng, clocks);
        if let Some(v) = z.pick_point() {
            return (z, v);
        }
    }
}

fn zone_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let clocks = ClockSet::new(["x", "y", "z"]).expect("names");
    let n = clocks.len();
    let k = vec![0, 4, 3, 5];
    let mut failures: Vec<String> = Vec::new();
    let mut counts = [0usize; 8];
    let fail = |law: &str, failures: &mut Vec<String>| {
        if failures.len() < 5 {
            failures.push(law.to_string());
        }
    };
    for _ in 0..SAMPLES {
        let z = random_zone(&mut rng, &clocks);
        let w = random_zone(&mut rng, &clocks);
        let u = random_zone(&mut rng, &clocks);

        let mut c = z.clone();
        c.canonicalize();
        if c != z {
            fail("canonicalize idempotent", &mut failures);
        }
        counts[0] += 1;
        if z.up().up() != z.up() {
            fail("delay idempotent", &mut failures);
        }
        counts[1] += 1;
        if z.normalize(&k).normalize(&k) != z.normalize(&k) {
            fail("normalize idempotent", &mut failures);
        }
        counts[2] += 1;

        // inclusion is a partial order
        let ok = z.includes(&z)
            && (!(z.includes(&w) && w.includes(&z)) || z == w)
            && (!(z.includes(&w) && w.includes(&u)) || z.includes(&u))
            && z.includes(&z.intersect(&w));
        if !ok {
            fail("inclusion partial order", &mut failures);
        }
        counts[3] += 1;

        // membership soundness, on points drawn from the zone and off-grid
        let (nz, v) = random_nonempty(&mut rng, &clocks);
        let d = time(rng.gen_range(0..=20), 4);
        if !nz.up().contains(&v.delay(&d).expect("non-negative")) {
            fail("delay soundness", &mut failures);
        }
        counts[4] += 1;
        let r: Vec<ClockId> = clocks.ids().filter(|_| rng.gen_bool(0.5)).collect();
        if !nz.reset(&r).contains(&v.reset(&r).expect("declared")) {
            fail("reset soundness", &mut failures);
        }
        counts[5] += 1;
        let p = random_point(&mut rng, n);
        if z.intersect(&w).contains(&p) != (z.contains(&p) && w.contains(&p)) {
            fail("intersection soundness", &mut failures);
        }
        counts[6] += 1;
        // the delay closure contains the zone itself
        let q = random_point(&mut rng, n);
        if nz.contains(&q) && !nz.up().contains(&q) {
            fail("delay extensive", &mut failures);
        }
        counts[7] += 1;
    }
    let min = counts.iter().min().copied().unwrap_or(0);
    outcome(
        failures.is_empty() && min >= SAMPLES,
        if failures.is_empty() {
            format!("8 laws x {min} samples, 0 counterexamples")
        } else {
            format!("counterexamples: {}", failures.join(", "))
        },
    )
}

fn region_finiteness() -> Outcome {
    let count = enumerate_regions(2, 4).len();
    let bound = region_bound(2, 4);
    let mut problems = Vec::new();
    if count as u128 > bound || bound != 800 {
        problems.push(format!("enumerated {count}, bound {bound}"));
    }
    let mut visits = Vec::new();
    for (name, text) in fixtures::ALL {
        let m = hdta::format::parse_hdta(text).expect("fixture parses");
        let r = region_reach(&m, RegionOptions::default()).expect("small constants");
        let limit = m.len() as u128 * region_bound(m.clocks().len(), m.cmax());
        visits.push(format!("{name} {}/{limit}", r.stats.stored));
        if r.stats.stored as u128 > limit {
            problems.push(format!("{name}: {} visited > {limit}", r.stats.stored));
        }
    }
    outcome(
        problems.is_empty(),
        format!(
            "{count} regions <= 800 for |C|=2, cmax=4; visited/limit: {}{}",
            visits.join(", "),
            if problems.is_empty() {
                String::new()
            } else {
                format!("; {}", problems.join("; "))
            }
        ),
    )
}

fn milner_savings() -> Outcome {
    let t = Instant::now();
    let mut rows = Vec::new();
    let mut problems = Vec::new();
    let mut last_ratio = f64::INFINITY;
    for n in 2..=5 {
        let row = measure(BenchSpec { n, d: 4, big_d: 30 }).expect("valid spec");
        let ratio = row.ratio();
        if row.hdta.explored >= row.interleaved.explored {
            problems.push(format!("N={n}: HDTA not smaller"));
        }
        if ratio > last_ratio {
            problems.push(format!("N={n}: ratio increased"));
        }
        last_ratio = ratio;
        rows.push(format!(
            "N={n} {}/{}={ratio:.3}",
            row.hdta.explored, row.interleaved.explored
        ));
    }
    if let Err(e) = within(t.elapsed(), Duration::from_secs(120)) {
        problems.push(e);
    }
    outcome(
        problems.is_empty(),
        format!(
            "explored HDTA/interleaved: {}{}",
            rows.join(", "),
            if problems.is_empty() {
                String::new()
            } else {
                format!("; {}", problems.join("; "))
            }
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("fixture reachability verdicts", fixture_verdicts),
        (
            "zone graph of fig3 against the drawn boxes",
            zone_graph_figure,
        ),
        ("tensor of the two 1DTA factors is fig3", tensor_of_factors),
        (
            "conversion equivalence on 100 random TAs",
            conversion_equivalence,
        ),
        (
            "engine agreement on 200 random HDTA",
            engine_agreement_suite,
        ),
        ("zone-engine laws", zone_laws),
        ("region finiteness bound", region_finiteness),
        ("Milner state-space savings", milner_savings),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "{tag} criterion {} ({name}) [{:.2?}]: {}",
            i + 1,
            t.elapsed(),
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {}/{} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
