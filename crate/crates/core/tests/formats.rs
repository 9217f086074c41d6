mod common;

use quartets::io::{
    parse_newick, parse_quartet_file, serialize_newick, serialize_quartet_file, ReportJson,
};
use quartets::{
    caterpillar, construct_qn, enumerate_trees, minimality_report, DecideMode, Quartet, Split,
    TreeMode,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{leaves, random_set};

#[test]
fn newick_round_trips_every_small_tree() {
    for n in 3..=6 {
        for mode in [TreeMode::Binary, TreeMode::All] {
            for t in enumerate_trees(leaves(n), mode).unwrap() {
                let text = serialize_newick(&t).unwrap();
                let back = parse_newick(&text).unwrap();
                assert_eq!(back, t, "{text}");
                assert_eq!(serialize_newick(&back).unwrap(), text);
            }
        }
    }
}

#[test]
fn newick_reads_other_rootings() {
    // the same caterpillar written from three different roots
    for text in [
        "((1,2),3,(4,(5,6)));",
        "(((((1,2),3),4),5),6);",
        "(5,6,(4,(3,(1,2))));",
        "((6:0.1,5:2):1,(4,((2,1),3)));",
    ] {
        assert_eq!(
            serialize_newick(&parse_newick(text).unwrap()).unwrap(),
            "(1,2,(3,(4,(5,6))));"
        );
    }
}

#[test]
fn quartet_files_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    for _ in 0..500 {
        let n = rng.gen_range(4..=12);
        let max = 3 * n * (n - 1) * (n - 2) * (n - 3) / 24;
        let q = random_set(n, rng.gen_range(1..=max.min(20)), &mut rng);
        let text = serialize_quartet_file(&q);
        let parsed = parse_quartet_file(&text).unwrap();
        assert!(parsed.duplicate_lines.is_empty());
        assert_eq!(parsed.quartets.render(), q.render());
        assert_eq!(serialize_quartet_file(&parsed.quartets), text);
    }
}

#[test]
fn quartet_files_normalize_messy_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let q6 = construct_qn(6).unwrap();
    let canonical = serialize_quartet_file(&q6);
    for _ in 0..50 {
        let mut text = String::from("# Q_6, scrambled\n\n");
        for line in q6.render() {
            let (l, r) = line.split_once('|').unwrap();
            let mut flip = |p: &str| {
                let (a, b) = p.split_once(',').unwrap();
                if rng.gen_bool(0.5) {
                    format!("{b},{a}")
                } else {
                    p.to_string()
                }
            };
            let (l, r) = (flip(l), flip(r));
            let (l, r) = if rng.gen_bool(0.5) { (r, l) } else { (l, r) };
            text.push_str(&format!("  {l}|{r}   # note\n"));
        }
        text.push_str("2,1|5,3\n");
        let parsed = parse_quartet_file(&text).unwrap();
        assert_eq!(parsed.duplicate_lines, [7]);
        assert_eq!(serialize_quartet_file(&parsed.quartets), canonical);
    }
}

#[test]
fn json_reports_revalidate() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in 6..=8 {
        let t = caterpillar(n).unwrap();
        let mut q = construct_qn(n).unwrap();
        // any a<b<c<d quartet is displayed by T_n, so the set still defines it
        let mut extra: Vec<_> = (0..n).collect();
        extra.shuffle(&mut rng);
        extra[..4].sort();
        q.insert(Quartet::new(extra[0], extra[1], extra[2], extra[3]).unwrap())
            .unwrap();
        for mode in [DecideMode::Fast, DecideMode::Oracle] {
            if mode == DecideMode::Oracle && n > 7 {
                continue;
            }
            let report = minimality_report(&q, mode).unwrap();
            let json = serde_json::to_string(&ReportJson::from_report(&report).unwrap()).unwrap();
            let back: ReportJson = serde_json::from_str(&json).unwrap();
            assert_eq!(back.mode, mode.as_str());
            assert!(back.defines);
            assert_eq!(back.lower_bound, n as i64 - 3);
            assert_eq!(parse_newick(back.tree.as_deref().unwrap()).unwrap(), t);
            for e in &back.entries {
                let x = t.leaves().parse_quartet(&e.quartet).unwrap();
                let rest = q.without(&x);
                match (e.witness_kind.as_str(), &e.witness) {
                    ("alternative_tree", Some(w)) => {
                        let w = parse_newick(w).unwrap();
                        assert_ne!(w, t);
                        assert!(w.displays_all(&rest));
                    }
                    ("undistinguished_edge", Some(s)) => {
                        let s = Split::parse(s, t.leaves()).unwrap();
                        assert!(t.contract(s).unwrap().displays_all(&rest));
                    }
                    ("redundant", None) => {}
                    other => panic!("unexpected entry {other:?}"),
                }
            }
        }
    }
}
