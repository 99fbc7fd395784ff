mod common;

use std::collections::BTreeSet;

use coocnet::corpus::{tokenize, TokenSequence};
use coocnet::embed::{cosine_similarity, rank_candidate_pairs, EmbeddingTable, PairSet};
use coocnet::learn::{cross_validate, fold_assignment, ClassifierSpec, CvMode, FeatureMatrix, Model};
use coocnet::netbuild::{
    build_cooccurrence, edge_budget, enrich_global, enrich_local, EdgeKind, EnrichmentLevel, TextNetwork,
};
use coocnet::netmetrics::{measure_nodes, pagerank, MeasurementSpec, PageRankConfig};
use proptest::prelude::*;

fn words() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d", "e", "f", "g", "h"]), 2..60)
        .prop_map(|v| v.into_iter().map(String::from).collect())
}

fn edge_list(max_nodes: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2..=max_nodes).prop_flat_map(|n| {
        let pairs = prop::collection::vec((0..n, 0..n), 1..3 * n)
            .prop_map(|v| {
                v.into_iter()
                    .filter(|(a, b)| a != b)
                    .map(|(a, b)| (a.min(b), a.max(b)))
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect::<Vec<_>>()
            });
        (Just(n), pairs)
    })
}

fn table(dim: usize, n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-1.0f64..1.0, dim), n)
}

proptest! {
    #[test]
    fn tokenize_is_idempotent(text in "[A-Za-z '’.,;!\\-\n]{0,80}") {
        let once = tokenize(&text);
        let again = tokenize(&once.join(" "));
        prop_assert_eq!(once, again);
    }

    #[test]
    fn cosine_symmetric_and_scale_invariant(
        u in prop::collection::vec(-5.0f64..5.0, 6),
        v in prop::collection::vec(-5.0f64..5.0, 6),
        s in 0.01f64..100.0,
    ) {
        prop_assume!(u.iter().any(|x| x.abs() > 1e-3) && v.iter().any(|x| x.abs() > 1e-3));
        let uv = cosine_similarity(&u, &v).unwrap();
        let vu = cosine_similarity(&v, &u).unwrap();
        let scaled: Vec<f64> = u.iter().map(|x| x * s).collect();
        prop_assert!((uv - vu).abs() <= 1e-12);
        prop_assert!((cosine_similarity(&scaled, &v).unwrap() - uv).abs() <= 1e-12);
        prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&uv));
    }

    #[test]
    fn budget_law_and_subgraph(tokens in words(), vectors in table(4, 8), p in 0u32..=100) {
        let seq = TokenSequence::new(tokens);
        let net: TextNetwork<f64> = build_cooccurrence(&seq).unwrap();
        let mut emb = EmbeddingTable::new(4).unwrap();
        for (w, v) in ["a", "b", "c", "d", "e", "f", "g", "h"].iter().zip(vectors) {
            emb.insert(*w, v).unwrap();
        }
        let vocab: BTreeSet<String> = net.words().iter().map(|w| w.to_string()).collect();
        let exclude: PairSet = net.edges().iter().map(|e| (net.word(e.a), net.word(e.b))).collect();
        let cands = rank_candidate_pairs(&vocab, &emb, &exclude);
        let level = EnrichmentLevel::new(p as f64).unwrap();
        let e = net.count_edges(EdgeKind::Cooccurrence);
        let budget = p as usize * e / 100;
        prop_assert_eq!(edge_budget(&net, level), budget);
        for r in [enrich_global(&net, &cands, level).unwrap(), enrich_local(&net, &cands, level, &emb).unwrap()] {
            prop_assert_eq!(r.requested, budget);
            prop_assert_eq!(r.added, budget.min(cands.len()));
            prop_assert_eq!(r.network.count_edges(EdgeKind::Virtual), r.added);
            prop_assert!(r.network.cooccurrence_subgraph() == net);
        }
    }

    #[test]
    fn measurements_ignore_labels_and_edge_order((n, edges) in edge_list(9), seed in any::<u64>()) {
        let original = common::network_from_edges(n, &edges);
        // Rename every word and insert edges in a shuffled order.
        let mut order = edges.clone();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
        let mut renamed: TextNetwork<f64> = TextNetwork::new();
        for &(a, b) in &order {
            renamed.add_word_edge(&format!("w{b}"), &format!("w{a}"), EdgeKind::Cooccurrence, 1, 1.0).unwrap();
        }
        for i in 0..n {
            renamed.add_node(&format!("w{i}"));
        }
        let spec = MeasurementSpec::full();
        let pr = PageRankConfig::default();
        let old_words: Vec<String> = (0..n).map(common::node_name).collect();
        let new_words: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
        let a = measure_nodes(&original, &old_words, &spec, &pr).unwrap();
        let b = measure_nodes(&renamed, &new_words, &spec, &pr).unwrap();
        for (x, y) in a.iter().zip(&b) {
            for (u, v) in x.values.iter().zip(&y.values) {
                prop_assert!((u - v).abs() <= 1e-8, "{} vs {}", u, v);
            }
        }
    }

    #[test]
    fn pagerank_is_a_distribution((n, edges) in edge_list(12)) {
        let net = common::network_from_edges(n, &edges);
        let pr = pagerank(&net, &PageRankConfig::default()).unwrap();
        let sum: f64 = pr.scores.iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-8);
        prop_assert!(pr.scores.iter().all(|&s| s > 0.0));
        let dense = common::pagerank_dense(n, &edges, 0.85, 500);
        for (s, d) in pr.scores.iter().zip(&dense) {
            prop_assert!((s - d).abs() <= 1e-8, "{} vs {}", s, d);
        }
    }

    #[test]
    fn stratified_folds_partition_rows(
        counts in prop::collection::vec(3usize..9, 2..5),
        k in 2usize..=3,
        seed in any::<u64>(),
    ) {
        let labels: Vec<String> = counts.iter().enumerate()
            .flat_map(|(c, &m)| std::iter::repeat_n(format!("c{c}"), m))
            .collect();
        let folds = fold_assignment(&labels, CvMode::StratifiedKFold(k), seed).unwrap();
        prop_assert_eq!(folds.len(), labels.len());
        let sizes: Vec<usize> = (0..k).map(|f| folds.iter().filter(|&&x| x == f).count()).collect();
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        for (c, &m) in counts.iter().enumerate() {
            let name = format!("c{c}");
            for f in 0..k {
                let in_fold = labels.iter().zip(&folds).filter(|(l, &x)| **l == name && x == f).count();
                prop_assert!(in_fold == m / k || in_fold == m / k + 1);
            }
        }
        prop_assert_eq!(folds, fold_assignment(&labels, CvMode::StratifiedKFold(k), seed).unwrap());
    }

    #[test]
    fn knn_ignores_global_scale(rows in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 3), 12), s in 0.1f64..50.0) {
        let labels: Vec<String> = (0..12).map(|i| format!("c{}", i % 3)).collect();
        let names = vec!["x".into(), "y".into(), "z".into()];
        let m = FeatureMatrix::new(names, rows, labels).unwrap();
        let model = Model::Fixed(ClassifierSpec::Knn { k: 3 });
        let a = cross_validate(&m, &model, CvMode::LeaveOneOut, 0).unwrap();
        let b = cross_validate(&m.scaled(s), &model, CvMode::LeaveOneOut, 0).unwrap();
        prop_assert_eq!(a.predictions, b.predictions);
    }
}
