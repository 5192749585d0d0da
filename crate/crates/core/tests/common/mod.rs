#![allow(dead_code)]

use braid_growth::dynnikov::{apply_sigma, braids_equal, dynnikov};
use braid_growth::symmetry::{group, map_template, map_word, orbit, Symmetry};
use braid_growth::template::template_of_word;
use braid_growth::words::{Alphabet, Kind, Word};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const INV_A: Symmetry = Symmetry::Artin { inv: true, theta: false, flip: false };
pub const THETA: Symmetry = Symmetry::Artin { inv: false, theta: true, flip: false };
pub const FLIP: Symmetry = Symmetry::Artin { inv: false, theta: false, flip: true };
pub const INV_D: Symmetry = Symmetry::Dual { inv: true, rotation: 0 };
pub const ROT: Symmetry = Symmetry::Dual { inv: false, rotation: 1 };

pub fn alphabet(kind: Kind, n: usize) -> Alphabet {
    Alphabet::new(n, kind).unwrap()
}

pub fn word_over(a: Alphabet, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..a.size() as u8, 0..=max_len).prop_map(move |l| Word::new(a, l).unwrap())
}

pub fn any_word(kind: Kind, strands: std::ops::RangeInclusive<usize>, max_len: usize) -> BoxedStrategy<Word> {
    strands.prop_flat_map(move |n| word_over(alphabet(kind, n), max_len)).boxed()
}

/// Runs `test` over `cases` samples of `strategy` with a fixed seed.
pub fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(
        config,
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

/// Defining relations of one family, as (lhs, rhs) letter strings.
pub fn relation_family(a: Alphabet, family: Relation) -> Vec<(Vec<u8>, Vec<u8>)> {
    let n = a.strands();
    let mut out = Vec::new();
    match (a.kind(), family) {
        (_, Relation::Cancel) => {
            for x in a.letters() {
                out.push((vec![x, a.inverse(x)], vec![]));
            }
        }
        (Kind::Artin, Relation::Far) => {
            for i in 1..n {
                for j in i + 2..n {
                    for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                        let (x, y) = (a.sigma(i, si), a.sigma(j, sj));
                        out.push((vec![x, y], vec![y, x]));
                    }
                }
            }
        }
        (Kind::Artin, Relation::Braid) => {
            for i in 1..n - 1 {
                let (x, y) = (a.sigma(i, 1), a.sigma(i + 1, 1));
                out.push((vec![x, y, x], vec![y, x, y]));
            }
        }
        (Kind::Dual, Relation::Braid) => {
            for p in 1..=n {
                for q in p + 1..=n {
                    for r in q + 1..=n {
                        let (pq, qr, pr) = (a.band(p, q, 1), a.band(q, r, 1), a.band(p, r, 1));
                        out.push((vec![pq, qr], vec![qr, pr]));
                        out.push((vec![qr, pr], vec![pr, pq]));
                    }
                }
            }
        }
        (Kind::Dual, Relation::Far) => {
            for p in 1..=n {
                for q in p + 1..=n {
                    for r in 1..=n {
                        for s in r + 1..=n {
                            let disjoint = q < r;
                            let nested = p < r && s < q;
                            if disjoint || nested {
                                let (x, y) = (a.band(p, q, 1), a.band(r, s, 1));
                                out.push((vec![x, y], vec![y, x]));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// Commutation of generators acting on disjoint or nested strand sets.
    Far,
    /// Braid relations (Artin) or triangle relations (dual).
    Braid,
    /// x·x⁻¹ = e.
    Cancel,
}

/// u·lhs·v and u·rhs·v have equal coordinates for random contexts u, v.
pub fn relation_invariance(kind: Kind, family: Relation, cases: u32) -> Result<(), String> {
    let min_n = if family == Relation::Far { 4 } else { 3 };
    let strategy = (min_n..=6usize).prop_flat_map(move |n| {
        let a = alphabet(kind, n);
        let rels = relation_family(a, family);
        (0..rels.len(), word_over(a, 12), word_over(a, 12)).prop_map(move |(k, u, v)| {
            let (l, r) = rels[k].clone();
            let lhs = u.concat(&Word::new(a, l).unwrap()).concat(&v);
            let rhs = u.concat(&Word::new(a, r).unwrap()).concat(&v);
            (lhs, rhs)
        })
    });
    run(cases, strategy, |(lhs, rhs)| {
        prop_assert!(braids_equal(&lhs, &rhs).unwrap(), "{lhs} vs {rhs}");
        Ok(())
    })
}

/// σ⁻¹ undoes σ on random blocks.
pub fn sigma_round_trip(cases: u32) -> Result<(), String> {
    let coord = -1_000_000i64..=1_000_000;
    let strategy = ([coord.clone(), coord.clone(), coord.clone(), coord], prop::bool::ANY);
    run(cases, strategy, |(q, positive)| {
        let sign = if positive { 1 } else { -1 };
        let there = apply_sigma(q, sign).unwrap();
        prop_assert_eq!(apply_sigma(there, -sign).unwrap(), q);
        Ok(())
    })
}

fn apply(g: Symmetry, w: &Word) -> Word {
    map_word(g, w).unwrap()
}

/// The generators commute and have the expected orders, letter for letter.
pub fn order_and_commutation(cases: u32) -> Result<(), String> {
    run(cases, any_word(Kind::Artin, 2..=7, 16), |w| {
        for (g, h) in [(INV_A, THETA), (INV_A, FLIP), (THETA, FLIP)] {
            prop_assert_eq!(apply(g, &apply(h, &w)), apply(h, &apply(g, &w)));
        }
        for g in [INV_A, THETA, FLIP] {
            prop_assert_eq!(&apply(g, &apply(g, &w)), &w);
        }
        Ok(())
    })?;
    run(cases, any_word(Kind::Dual, 2..=7, 16), |w| {
        let n = w.alphabet().strands();
        prop_assert_eq!(apply(INV_D, &apply(ROT, &w)), apply(ROT, &apply(INV_D, &w)));
        prop_assert_eq!(&apply(INV_D, &apply(INV_D, &w)), &w);
        let mut r = w.clone();
        for _ in 0..n {
            r = apply(ROT, &r);
        }
        prop_assert_eq!(&r, &w);
        Ok(())
    })
}

/// Template of the image word equals the template map applied to the template.
pub fn coherence(kind: Kind, generator: Option<Symmetry>, cases: u32) -> Result<(), String> {
    run(cases, any_word(kind, 2..=6, 20), |w| {
        let a = w.alphabet();
        let t = template_of_word(&w);
        let elements = match generator {
            Some(g) => vec![g],
            None => group(a),
        };
        for g in elements {
            let via_word = template_of_word(&apply(g, &w));
            let via_template = map_template(g, kind, &t).unwrap();
            prop_assert_eq!(&via_template, &via_word, "{} on {}", g, w);
        }
        Ok(())
    })
}

/// Orbit sizes divide the group order.
pub fn orbit_sizes(kind: Kind, cases: u32) -> Result<(), String> {
    run(cases, any_word(kind, 3..=6, 20), |w| {
        let a = w.alphabet();
        let size = orbit(a, &template_of_word(&w)).len();
        let order = match kind {
            Kind::Artin => 8,
            Kind::Dual => 2 * a.strands(),
        };
        prop_assert_eq!(order % size, 0, "orbit of size {} for {}", size, w);
        Ok(())
    })
}

/// θ is not a dual-stable map: a₁₂⁻¹a₂₃⁻¹ and a₂₃⁻¹a₁₃⁻¹ differ.
pub fn theta_not_dual_stable() -> Result<(), String> {
    let d = Alphabet::dual(3).unwrap();
    let u = Word::new(d, vec![d.band(1, 2, -1), d.band(2, 3, -1)]).unwrap();
    let v = Word::new(d, vec![d.band(2, 3, -1), d.band(1, 3, -1)]).unwrap();
    let forward = braids_equal(
        &Word::new(d, vec![d.band(1, 2, 1), d.band(2, 3, 1)]).unwrap(),
        &Word::new(d, vec![d.band(2, 3, 1), d.band(1, 3, 1)]).unwrap(),
    )
    .unwrap();
    if !forward {
        return Err("a12·a23 = a23·a13 should hold".into());
    }
    if braids_equal(&u, &v).unwrap() {
        return Err(format!("{u} and {v} should be distinct braids"));
    }
    let (tu, tv) = (template_of_word(&u), template_of_word(&v));
    if tu.link(1, 3) != -1 || tv.link(1, 3) != 1 {
        return Err(format!("unexpected linking numbers {tu} / {tv}"));
    }
    if dynnikov(&u).unwrap() == dynnikov(&v).unwrap() {
        return Err("coordinates coincide".into());
    }
    Ok(())
}

/// Every representative file under `root`, keyed by relative path.
pub fn rep_files(root: &std::path::Path) -> std::collections::BTreeMap<std::path::PathBuf, Vec<u8>> {
    fn walk(
        root: &std::path::Path,
        dir: &std::path::Path,
        out: &mut std::collections::BTreeMap<std::path::PathBuf, Vec<u8>>,
    ) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else if path.extension().is_some_and(|e| e == "rep") {
                out.insert(path.strip_prefix(root).unwrap().to_path_buf(), std::fs::read(&path).unwrap());
            }
        }
    }
    let mut out = std::collections::BTreeMap::new();
    walk(root, root, &mut out);
    out
}

/// Two runs with different worker counts write identical files.
pub fn store_determinism(a: Alphabet, max_len: usize) -> Result<(), String> {
    use braid_growth::engine::{red_combi, EngineConfig};
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let c1 = EngineConfig { workers: 1, ..EngineConfig::default() };
    let c2 = EngineConfig { workers: 4, ..EngineConfig::default() };
    let t1 = red_combi(d1.path(), a, max_len, c1).map_err(|e| e.to_string())?;
    let t2 = red_combi(d2.path(), a, max_len, c2).map_err(|e| e.to_string())?;
    if t1 != t2 {
        return Err("tables differ between worker counts".into());
    }
    let (f1, f2) = (rep_files(d1.path()), rep_files(d2.path()));
    if f1.is_empty() || f1 != f2 {
        return Err(format!("{} vs {} files, or contents differ", f1.len(), f2.len()));
    }
    Ok(())
}

/// Repeatedly killing a run after `every` tasks and resuming reproduces the uninterrupted run.
pub fn resume_after_kill(a: Alphabet, max_len: usize, every: usize) -> Result<usize, String> {
    use braid_growth::engine::{red_combi, EngineConfig, Enumerator};
    use braid_growth::store::Mode;
    use braid_growth::Error;
    let clean_dir = tempfile::tempdir().unwrap();
    let clean = red_combi(clean_dir.path(), a, max_len, EngineConfig { workers: 2, ..EngineConfig::default() })
        .map_err(|e| e.to_string())?;
    let dir = tempfile::tempdir().unwrap();
    let config = EngineConfig { workers: 2, interrupt_after: Some(every), ..EngineConfig::default() };
    let mut kills = 0;
    let table = loop {
        let mut e = Enumerator::resume(dir.path(), a, Mode::RedCombi, config.clone()).map_err(|e| e.to_string())?;
        match e.run(max_len) {
            Ok(t) => break t,
            Err(Error::Interrupted(_)) => kills += 1,
            Err(other) => return Err(other.to_string()),
        }
        if kills > 10_000 {
            return Err("no progress across restarts".into());
        }
    };
    if table != clean {
        return Err(format!("resumed table differs after {kills} kills"));
    }
    if rep_files(dir.path()) != rep_files(clean_dir.path()) {
        return Err("resumed files differ".into());
    }
    Ok(kills)
}
