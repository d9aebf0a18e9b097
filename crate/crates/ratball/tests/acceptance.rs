//! One line per acceptance criterion. Exits non-zero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_integer::Integer;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use ratball::sweep::parallel_sweep;
use ratball_core::cabling::*;
use ratball_core::classify::*;
use ratball_core::hjcf::*;
use ratball_core::lattice::*;
use ratball_core::plumbing::*;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn frac(p: u64, q: u64) -> PositiveRational {
    PositiveRational::new(p, q).unwrap()
}

fn c1_continued_fractions() -> Check {
    let mut n = 0;
    for p in 2..=200u64 {
        for q in (1..p).filter(|q| q.gcd(&p) == 1) {
            let x = frac(p, q);
            let s = expand_neg_cf(&x).map_err(|e| e.to_string())?;
            ensure!(eval_neg_cf(&s) == x, "round trip {}/{}", p, q);
            let d = dual_point_rule(&s);
            ensure!(eval_neg_cf(&d) == frac(p, p - q), "dual value {}/{}", p, q);
            ensure!(dual_point_rule(&d) == s, "dual involution {}/{}", p, q);
            let qs = star_inverse_i64(q as i64, p as i64).map_err(|e| e.to_string())? as u64;
            ensure!(eval_neg_cf(&s.reversed()) == frac(p, qs), "reversal {}/{}", p, q);
            n += 1;
        }
    }
    Ok(format!("{} fractions", n))
}

fn c2_corner() -> Check {
    let mut n = 0;
    for alpha in 3..=100u64 {
        for p in (2..alpha).filter(|p| p.gcd(&alpha) == 1) {
            ensure!(corner_weight(p, alpha) == Ok(1), "corner({},{}) = {:?}", p, alpha, corner_weight(p, alpha));
            n += 1;
        }
    }
    Ok(format!("{} pairs", n))
}

fn random_tree(rng: &mut StdRng, max: usize, lo: i64, hi: i64) -> WeightedTree {
    let n = rng.gen_range(1..=max);
    let vs: Vec<_> = (0..n).map(|i| (VertexId(i as u32), rng.gen_range(lo..=hi))).collect();
    let es: Vec<_> = (1..n).map(|i| (VertexId(rng.gen_range(0..i) as u32), VertexId(i as u32))).collect();
    WeightedTree::new(vs, es).unwrap()
}

fn abs_det(t: &WeightedTree) -> num_bigint::BigUint {
    det_exact(&gram_matrix(t)).magnitude().clone()
}

fn c3_calculus() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut moves = 0;
    for _ in 0..1000 {
        let t = random_tree(&mut rng, 12, -4, 2);
        let d = abs_det(&t);
        for m in applicable_moves(&t) {
            let u = m.apply(&t).map_err(|e| e.to_string())?;
            ensure!(abs_det(&u) == d, "{:?} changed |det| of {}", m, t);
            moves += 1;
        }
        let r = normalize(&t);
        ensure!(normalize(&r) == r, "normalize not idempotent on {}", t);
        ensure!(abs_det(&r) == d, "normalize changed |det| of {}", t);
    }
    // order independence: blown-up negative definite minimal trees
    let mut confluent = 0;
    while confluent < 1000 {
        let t = random_tree(&mut rng, 10, -5, -2);
        if !is_negative_definite(&gram_matrix(&t)) {
            continue;
        }
        let mut b = t.clone();
        for _ in 0..rng.gen_range(1..=4) {
            let sites: Vec<BlowUpSite> = b
                .ids()
                .map(BlowUpSite::Vertex)
                .chain(b.edges().map(|(x, y)| BlowUpSite::Edge(x, y)))
                .collect();
            b = blow_up(&b, *sites.choose(&mut rng).unwrap()).map_err(|e| e.to_string())?;
        }
        let fixed = reduce(&b).map_err(|e| e.to_string())?;
        ensure!(reduce(&fixed).as_ref() == Ok(&fixed), "reduce not idempotent on {}", b);
        for _ in 0..3 {
            let (r, _) = normalize_with(&b, |ms| rng.gen_range(0..ms.len()));
            ensure!(is_isomorphic(&r, &fixed), "order dependence on {}", b);
        }
        ensure!(is_isomorphic(&fixed, &t), "{} did not reduce back to {}", b, t);
        confluent += 1;
    }
    Ok(format!("1000 random trees, {} moves, {} shuffled reductions", moves, confluent * 3))
}

fn c4_construction() -> Check {
    let specs = SweepRange::default().specs();
    for s in &specs {
        let red = reduced_plumbing(s).map_err(|e| format!("{}: {}", s, e))?.plumbing;
        let g = gram_matrix(&red.tree);
        ensure!(is_negative_definite(&g), "{} not negative definite", s);
        ensure!(red.tree.vertices().all(|(_, w)| w <= -2), "{} has a weight above -2", s);
        ensure!(det_exact(&g).magnitude() == &num_bigint::BigUint::from(s.n() as u64), "{} |det| != n", s);
        let closed = closed_form_two_iter(s).map_err(|e| format!("{}: {}", s, e))?;
        ensure!(is_isomorphic(&closed.tree, &red.tree), "{} closed form differs", s);
    }
    Ok(format!("{} specs", specs.len()))
}

fn block_chains(lengths: &[usize]) -> GramMatrix {
    let n: usize = lengths.iter().sum();
    let mut rows = vec![vec![0; n]; n];
    let mut at = 0;
    for &k in lengths {
        for i in at..at + k {
            rows[i][i] = -2;
            if i + 1 < at + k {
                rows[i][i + 1] = 1;
                rows[i + 1][i] = 1;
            }
        }
        at += k;
    }
    GramMatrix::from_rows(&rows).unwrap()
}

fn partitions(total: usize, max: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![vec![]];
    }
    (1..=max.min(total))
        .rev()
        .flat_map(|first| {
            partitions(total - first, first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn catalogue_count(lengths: &[usize], r: usize) -> usize {
    let singles = lengths.iter().filter(|&&k| k == 1).count();
    let threes = lengths.iter().filter(|&&k| k == 3).count();
    let base: usize = lengths.iter().map(|k| k + 1).sum();
    let choose = |n: usize, k: usize| (0..k).fold(1, |a, i| a * (n - i) / (i + 1));
    let mut count = 0;
    for shared in 0..=singles / 2 {
        let pairings = (0..shared).fold(1, |a, i| a * choose(singles - 2 * i, 2)) / (1..=shared).product::<usize>();
        for special in 0..=threes {
            if base - 2 * shared - special == r {
                count += pairings * choose(threes, special);
            }
        }
    }
    count
}

fn c5_chains() -> Check {
    let classes = |g: &GramMatrix, r: usize| enumerate_embeddings(g, r, true).map(|v| v.len()).map_err(|e| e.to_string());
    for k in 1..=6 {
        let g = block_chains(&[k]);
        ensure!(classes(&g, k + 1)? == 1, "chain {} into rank {}", k, k + 1);
        ensure!(classes(&g, k)? == usize::from(k == 3), "chain {} into rank {}", k, k);
    }
    let mut unions = 0;
    for total in 1..=7 {
        for lengths in partitions(total, total) {
            for r in total..=7 {
                let got = classes(&block_chains(&lengths), r)?;
                let want = catalogue_count(&lengths, r);
                ensure!(got == want, "{:?} into rank {}: {} classes, catalogue says {}", lengths, r, got, want);
                unions += 1;
            }
        }
    }
    Ok(format!("chains k<=6, {} union/rank pairs", unions))
}

fn c6_completeness() -> Check {
    let shapes: [&[usize]; 5] = [&[], &[0], &[0, 1], &[0, 1, 2], &[0, 0, 0]];
    let mut checked = 0;
    for parents in shapes {
        let n = parents.len() + 1;
        for code in 0..4usize.pow(n as u32) {
            let vs = (0..n).map(|i| (VertexId(i as u32), -1 - ((code / 4usize.pow(i as u32)) % 4) as i64));
            let es = parents.iter().enumerate().map(|(i, &p)| (VertexId(p as u32), VertexId(i as u32 + 1)));
            let t = WeightedTree::new(vs, es).unwrap();
            let g = gram_matrix(&t);
            if !is_negative_definite(&g) {
                continue;
            }
            for r in n..=n + 1 {
                let want = naive_embedding_exists(&g, r);
                let got = match find_embedding(&g, r, SearchBudget::unlimited()).map_err(|e| e.to_string())? {
                    SearchOutcome::Found(m) => {
                        ensure!(verify_embedding(&g, &m) == Ok(true), "bad witness for {}", t);
                        true
                    }
                    SearchOutcome::None => false,
                    SearchOutcome::Indeterminate => return Err(format!("indeterminate on {}", t)),
                };
                ensure!(got == want, "{} rank {}: engine {} oracle {}", t, r, got, want);
                checked += 1;
            }
        }
    }
    Ok(format!("{} (graph, rank) pairs", checked))
}

fn c7_audit() -> Check {
    let range = SweepRange::default();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let rows = parallel_sweep(&range, &ClassifyOptions::default(), workers).map_err(|e| e.to_string())?;
    let rows: Vec<SweepRow> = rows.into_iter().map(|t| t.row).collect();
    let report = theorem_audit(&rows, FamilyPredicate::new(FamilyForm::Derived));
    ensure!(report.indeterminate.is_empty(), "indeterminate rows: {:?}", report.indeterminate);
    ensure!(report.is_perfect(), "disagreements: {:?}", report.disagreements);
    let passes: BTreeSet<_> = rows.iter().filter(|r| r.verdict.passes()).map(SweepRow::key).collect();
    for must in [(2, 3, 2, 17, 36), (2, 7, 2, 31, 64)] {
        ensure!(passes.contains(&must), "{:?} does not pass", must);
    }
    let max_rank = rows.iter().filter_map(|r| r.rank).max().unwrap_or(0);
    for r in rows.iter().filter(|r| r.verdict.passes()) {
        let s = SurgerySpec::new(CableTower::new(vec![(r.p1, r.a1), (r.p2, r.a2)]).unwrap(), r.n).unwrap();
        let w = known_witness(&s).ok_or(format!("no known witness for {}", s))?;
        let g = gram_matrix(&reduced_plumbing(&s).map_err(|e| e.to_string())?.plumbing.tree);
        ensure!(verify_embedding(&g, &w) == Ok(true), "known witness for {} fails", s);
        if let Verdict::ObstructionPasses(m) = &r.verdict {
            ensure!(verify_embedding(&g, m) == Ok(true), "engine witness for {} fails", s);
        }
    }
    Ok(format!("{} rows, {} passes, max rank {}", rows.len(), passes.len(), max_rank))
}

fn c8_algebraic_only() -> Check {
    let s = SurgerySpec::new(CableTower::new(vec![(2, 3), (2, 13)]).unwrap(), 28).unwrap();
    ensure!(classify_one(&s, SearchBudget::unlimited()) == Ok(Verdict::ObstructionFails), "(2,3;2,13;28) does not fail");
    let mut n = 0;
    for s in SweepRange::default().specs() {
        if classify_tower(s.knot()) != TowerClass::AlgebraicOnly {
            continue;
        }
        let v = classify_one(&s, SearchBudget::unlimited()).map_err(|e| e.to_string())?;
        ensure!(v == Verdict::ObstructionFails, "{} gave {}", s, v);
        n += 1;
    }
    Ok(format!("{} algebraic-only tuples fail", n))
}

fn c9_negative_n() -> Check {
    let mut n = 0;
    let range = SweepRange { big_n: (-6..=-1).collect(), ..SweepRange::default() };
    for s in range.specs() {
        let c = classify_with(&s, &ClassifyOptions::default()).map_err(|e| e.to_string())?;
        ensure!(c.verdict == Verdict::NoNegativeDefiniteForm, "{} gave {}", s, c.verdict);
        ensure!(c.nodes == 0 && c.rank.is_none(), "{} searched", s);
        n += 1;
    }
    Ok(format!("{} specs", n))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("continued fractions", c1_continued_fractions, Duration::from_secs(1)),
        ("corner formula", c2_corner, Duration::from_secs(1)),
        ("calculus invariance", c3_calculus, Duration::from_secs(10)),
        ("construction oracle", c4_construction, Duration::from_secs(60)),
        ("-2 chain enumeration", c5_chains, Duration::from_secs(60)),
        ("engine completeness", c6_completeness, Duration::from_secs(300)),
        ("classification audit", c7_audit, Duration::from_secs(1800)),
        ("algebraic-only tuples", c8_algebraic_only, Duration::from_secs(60)),
        ("negative N", c9_negative_n, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = check();
        let took = t.elapsed();
        let line = match result {
            Ok(detail) if took <= *limit => format!("PASS  {} ({}; {:.2?})", name, detail, took),
            Ok(detail) => format!("FAIL  {} ({}; {:.2?} over the {:?} limit)", name, detail, took, limit),
            Err(why) => format!("FAIL  {} ({}; {:.2?})", name, why, took),
        };
        if line.starts_with("FAIL") {
            failed += 1;
        }
        println!("criterion {}: {}", i + 1, line);
    }
    println!("{} of 9 criteria pass", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
