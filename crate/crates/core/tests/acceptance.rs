//! One PASS/FAIL line per acceptance criterion.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{ord, subsets, SchreierOracle};
use num::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ssindex::gallery::{self, GalleryRun};
use ssindex::operators::{node_admitted, BasicSequence, Operator};
use ssindex::rational::{int, ratio};
use ssindex::spaces::{self, Magnitude};
use ssindex::trees::restricted_schreier_tree;
use ssindex::{schreier, FiniteSet, NormDescriptor, RationalVector, Q};

const ORACLE_LIMIT: Duration = Duration::from_secs(60);
const GALLERY_LIMIT: Duration = Duration::from_secs(300);
const RANDOM_VECTORS: usize = 1_000;
const SEED: u64 = 0;

const GRID: [&str; 7] = ["1", "2", "3", "w", "w+1", "w*2", "w^2"];

type Check = Result<String, String>;

fn fs(v: &[u32]) -> FiniteSet {
    FiniteSet::new(v.to_vec()).unwrap()
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let mut oracle = SchreierOracle::default();
    let all = subsets(10);
    let mut mismatches = 0;
    for xi in GRID.map(ord) {
        for f in &all {
            if schreier::member(&xi, &fs(f)) != oracle.member(&xi, f) {
                mismatches += 1;
            }
        }
    }
    let took = start.elapsed();
    let detail = format!(
        "{} pairs, {mismatches} mismatches, {took:.2?}",
        all.len() * GRID.len()
    );
    if mismatches == 0 && took < ORACLE_LIMIT {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_2() -> Check {
    let one = ord("1");
    let bad = subsets(12)
        .iter()
        .filter(|f| {
            schreier::member(&one, &fs(f)) != f.first().map_or(true, |&m| f.len() <= m as usize)
        })
        .count();
    let detail = format!("4096 sets, {bad} mismatches");
    if bad == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_3() -> Check {
    let mut violations = 0;
    let mut checks = 0;
    for xi in GRID.map(ord) {
        for f in subsets(10) {
            if !schreier::member(&xi, &fs(&f)) {
                continue;
            }
            for i in 0..f.len() {
                let mut g = f.clone();
                g.remove(i);
                checks += 1;
                violations += usize::from(!schreier::member(&xi, &fs(&g)));
                let mut s = f.clone();
                s[i] += 1;
                if i + 1 == f.len() || s[i] < s[i + 1] {
                    checks += 1;
                    violations += usize::from(!schreier::member(&xi, &fs(&s)));
                }
            }
        }
    }
    let detail = format!("{checks} removal/increment checks, {violations} violations");
    if violations == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_4() -> Check {
    let mut violations = 0;
    for z in ["0", "1", "2", "w"].map(ord) {
        let next = z.successor();
        for f in subsets(10) {
            if schreier::member(&z, &fs(&f)) && !schreier::member(&next, &fs(&f)) {
                violations += 1;
            }
        }
    }
    let detail = format!("zeta in {{0,1,2,w}} over subsets of 1..10, {violations} violations");
    if violations == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_5() -> Check {
    let base = restricted_schreier_tree(&ord("1"), 4).rank();
    let mut mismatches = Vec::new();
    let mut ranks = Vec::new();
    for xi in ["1", "2"] {
        for n in 1..=8 {
            let t = restricted_schreier_tree(&ord(xi), n);
            let nodes: BTreeSet<Vec<u32>> = t.nodes().cloned().collect();
            let want = common::rank_by_leaf_removal(&nodes);
            if t.rank() != want {
                mismatches.push(format!("xi={xi} N={n}: {} vs {want}", t.rank()));
            }
            ranks.push(t.rank());
        }
    }
    let (r1, r2) = (ranks[7], ranks[15]);
    let detail = format!(
        "rank(S_1,4)={base}, 16 ranks vs oracle, rank(S_1,8)={r1} rank(S_2,8)={r2} {}",
        mismatches.join("; ")
    );
    if base == 3 && mismatches.is_empty() && r2 > r1 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_6() -> Check {
    let mut problems = Vec::new();
    let s1: NormDescriptor = "schreier(1)".parse().unwrap();
    let ones = RationalVector::from_dense(1, &vec![int(1); 6]);
    let v = spaces::norm_exact(&s1, &ones).unwrap();
    if v != int(3) {
        problems.push(format!("schreier(1) of six ones = {v}"));
    }

    let mut oracle = SchreierOracle::default();
    let half = ratio(1, 2);
    let t1 = NormDescriptor::tsirelson(ord("1"), half.clone()).unwrap();
    for f in subsets(6) {
        let dense: Vec<Q> = (1..=6).map(|i| int(i64::from(f.contains(&i)))).collect();
        let got = spaces::norm_exact(&t1, &RationalVector::from_dense(1, &dense)).unwrap();
        let want = common::tsirelson_naive(&mut oracle, &ord("1"), &half, &dense);
        if got != want {
            problems.push(format!("tsirelson on {f:?}: {got} vs {want}"));
        }
    }

    let descriptors: Vec<NormDescriptor> = [
        "l1",
        "l2",
        "linf",
        "schreier(1)",
        "schreier(w)",
        "tsirelson(1,1/2)",
        "tsirelson(w,1/2)",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let random = |rng: &mut ChaCha8Rng| {
        let k = rng.gen_range(0..=8);
        let pairs: Vec<(u32, Q)> = (0..k)
            .map(|_| (rng.gen_range(1..=16), int(rng.gen_range(-10..=10))))
            .collect();
        let mut x = RationalVector::zero();
        for (i, q) in pairs {
            x.add_at(i, &q);
        }
        x
    };
    let mut failures = 0;
    for _ in 0..RANDOM_VECTORS {
        let x = random(&mut rng);
        let y = random(&mut rng);
        let c = ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        for d in &descriptors {
            let (nx, ny, nxy) = (
                spaces::norm(d, &x),
                spaces::norm(d, &y),
                spaces::norm(d, &x.add(&y)),
            );
            let positive = nx.is_zero() == x.is_zero();
            let homogeneous = spaces::norm(d, &x.scale(&c)).square() == &c * &c * nx.square();
            let triangle = match (&nx, &ny, &nxy) {
                (Magnitude::Exact(a), Magnitude::Exact(b), Magnitude::Exact(s)) => *s <= a + b,
                _ => {
                    let slack = nxy.square() - nx.square() - ny.square();
                    !slack.is_positive() || &slack * &slack <= int(4) * nx.square() * ny.square()
                }
            };
            failures += usize::from(!(positive && homogeneous && triangle));
        }
    }
    if failures > 0 {
        problems.push(format!("{failures} norm-axiom failures"));
    }
    let detail = format!(
        "six-ones schreier(1) = {v}, 64 tsirelson 0/1 vectors, {RANDOM_VECTORS} random pairs x {} norms; {}",
        descriptors.len(),
        if problems.is_empty() { "no problems".to_string() } else { problems.join("; ") }
    );
    if problems.is_empty() {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_7(runs: &[(GalleryRun, Duration)]) -> Check {
    let mut problems = Vec::new();
    let mut certificates = 0;
    for (run, _) in runs {
        let p = &run.preset;
        for e in &run.report.entries {
            if let Some(c) = &e.outcome.certificate {
                certificates += 1;
                let sound = c.verify(&p.operator, &run.sequence).unwrap_or(false)
                    && c.ratio.lt(&e.epsilon)
                    && schreier::member(&e.xi, &c.f);
                if !sound {
                    problems.push(format!("{} xi={} eps={}", p.name, e.xi, e.epsilon));
                }
            }
        }
    }

    let diag = gallery::preset("diagonal-compact", SEED).unwrap();
    let op: &Operator = &diag.operator;
    let seq = BasicSequence::unit_vectors(&op.domain, 8).unwrap();
    let d = |l: u32| ratio(1, i64::from(l));
    let mut nodes: Vec<Vec<u32>> = Vec::new();
    for a in 1..=8u32 {
        nodes.push(vec![a]);
        for b in a + 1..=8 {
            nodes.push(vec![a, b]);
            for c in b + 1..=8 {
                nodes.push(vec![a, b, c]);
            }
        }
    }
    let mut mismatches = 0;
    let mut monotone = 0;
    for m in 1..=6u32 {
        for node in &nodes {
            let closed = node.iter().map(|&l| d(l)).min().unwrap() >= ratio(1, i64::from(m));
            let got = node_admitted(op, m, &seq, node).unwrap();
            mismatches += usize::from(got != closed);
            if got && !node_admitted(op, m + 1, &seq, node).unwrap() {
                monotone += 1;
            }
        }
    }
    if mismatches + monotone > 0 {
        problems.push(format!(
            "{mismatches} closed-form mismatches, {monotone} monotonicity violations"
        ));
    }

    let settings = diag.tree.clone().expect("diagonal tree settings");
    let mut previous: Option<BTreeSet<Vec<u32>>> = None;
    for m in 1..=4u32 {
        let tree = ssindex::operators::build_witness_tree(&ssindex::operators::WitnessTreeSpec {
            operator: op.clone(),
            m,
            sequence: BasicSequence::unit_vectors(&op.domain, diag.sequence_length).unwrap(),
            depth_bound: settings.depth_bound,
            width_bound: settings.width_bound,
            arbitrary_tuples: false,
        })
        .unwrap();
        let set: BTreeSet<Vec<u32>> = tree.truncation.nodes().cloned().collect();
        let closed = set
            .iter()
            .all(|n| n.is_empty() || set.contains(&n[..n.len() - 1]));
        if !closed {
            problems.push(format!("truncation at m={m} is not prefix closed"));
        }
        if let Some(p) = &previous {
            if !p.is_subset(&set) {
                problems.push(format!("truncation at m={} not contained in m={m}", m - 1));
            }
        }
        previous = Some(set);
    }
    for (run, _) in runs {
        if let Some(t) = &run.tree {
            let set: BTreeSet<Vec<u32>> = t.truncation.nodes().cloned().collect();
            if !set
                .iter()
                .all(|n| n.is_empty() || set.contains(&n[..n.len() - 1]))
            {
                problems.push(format!(
                    "{} witness tree not prefix closed",
                    run.preset.name
                ));
            }
        }
    }
    let detail = format!(
        "{certificates} certificates re-evaluated, {} diagonal nodes x 6 thresholds; {}",
        nodes.len(),
        if problems.is_empty() {
            "no problems".to_string()
        } else {
            problems.join("; ")
        }
    );
    if problems.is_empty() && certificates > 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_8(runs: &[(GalleryRun, Duration)]) -> Check {
    let mut problems = Vec::new();
    let mut times = Vec::new();
    for (run, took) in runs {
        times.push(format!("{} {took:.1?}", run.preset.name));
        if *took >= GALLERY_LIMIT {
            problems.push(format!("{} took {took:.1?}", run.preset.name));
        }
        let entries = &run.report.entries;
        match run.preset.name {
            "diagonal-compact" => {
                let eps: BTreeSet<String> = entries
                    .iter()
                    .filter(|e| e.xi == ord("1") && e.outcome.success())
                    .map(|e| e.epsilon.to_string())
                    .collect();
                let want: BTreeSet<String> = ["1/2", "1/4", "1/8"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                if run.report.bracket != Some(ord("1")) || eps != want {
                    problems.push("diagonal-compact lacks the xi=1 bracket".into());
                }
            }
            "l1-identity" => {
                let bad = entries
                    .iter()
                    .filter(|e| {
                        e.outcome.success() || e.outcome.best.ratio != Magnitude::Exact(int(1))
                    })
                    .count();
                if bad > 0 || entries.is_empty() {
                    problems.push(format!(
                        "l1-identity: {bad} grid points differ from failure at ratio 1"
                    ));
                }
            }
            "schreier-into-sup" => {
                let sixth = ratio(1, 6);
                let ok = run.sequence.len() == 12
                    && entries
                        .iter()
                        .any(|e| e.xi == ord("1") && e.outcome.success())
                    && entries.iter().all(|e| {
                        e.outcome
                            .certificate
                            .as_ref()
                            .map_or(true, |c| c.ratio.square() <= &sixth * &sixth)
                    })
                    && entries
                        .iter()
                        .all(|e| e.outcome.best.ratio.square() <= &sixth * &sixth);
                if !ok {
                    problems.push("schreier-into-sup certificates exceed 1/6".into());
                }
            }
            _ => {}
        }
    }
    let detail = format!(
        "{}; {}",
        times.join(", "),
        if problems.is_empty() {
            "outcomes as expected".to_string()
        } else {
            problems.join("; ")
        }
    );
    if problems.is_empty() {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_9(runs: &[(GalleryRun, Duration)]) -> Check {
    let mut differing = Vec::new();
    for (run, _) in runs {
        let again = gallery::run(run.preset.name, SEED).map_err(|e| e.to_string())?;
        let a = serde_json::to_string(&run.to_json()).unwrap();
        let b = serde_json::to_string(&again.to_json()).unwrap();
        if a != b {
            differing.push(run.preset.name);
        }
    }
    let detail = format!(
        "{} presets run twice, {} differ {:?}",
        runs.len(),
        differing.len(),
        differing
    );
    if differing.is_empty() {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn report(n: usize, took: Duration, check: Check) -> bool {
    match check {
        Ok(d) => {
            println!("PASS criterion {n}: {d} [{took:.2?}]");
            true
        }
        Err(d) => {
            println!("FAIL criterion {n}: {d} [{took:.2?}]");
            false
        }
    }
}

fn main() {
    let mut ok = true;
    let simple: [fn() -> Check; 6] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
    ];
    for (i, f) in simple.iter().enumerate() {
        let t = Instant::now();
        let check = f();
        ok &= report(i + 1, t.elapsed(), check);
    }

    let t = Instant::now();
    let mut runs = Vec::new();
    for name in gallery::NAMES {
        let s = Instant::now();
        match gallery::run(name, SEED) {
            Ok(r) => runs.push((r, s.elapsed())),
            Err(e) => {
                println!("FAIL gallery {name}: {e}");
                ok = false;
            }
        }
    }
    let gallery_time = t.elapsed();
    let t = Instant::now();
    let check = criterion_7(&runs);
    ok &= report(7, t.elapsed(), check);
    ok &= report(8, gallery_time, criterion_8(&runs));
    let t = Instant::now();
    let check = criterion_9(&runs);
    ok &= report(9, t.elapsed(), check);

    if !ok {
        std::process::exit(1);
    }
}
