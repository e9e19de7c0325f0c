use proptest::collection::vec;
use proptest::prelude::*;

use vlgscan::block_filter::BlockFilter;
use vlgscan::match_engine::{
    filter_pair, intersect_gapped, intersect_gapped_predecessors, kmp_search, oracle_search, radix_sort, search,
    text_check_backward, text_check_forward, Direction, SearchOptions, StrategyKind,
};
use vlgscan::pattern::{parse_pattern, GapConstraint, GapMode, VlgPattern};
use vlgscan::text_index::{build_index, find_interval, Text};
use vlgscan::Index;

fn text_over(sigma: u8, max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    vec(0..sigma, 0..max_len).prop_map(|v| v.into_iter().map(|c| b'a' + c).collect())
}

fn sorted_set(max_val: u64, max_len: usize) -> impl Strategy<Value = Vec<u64>> {
    vec(0..max_val, 0..max_len).prop_map(|mut v| {
        v.sort_unstable();
        v.dedup();
        v
    })
}

fn naive_positions(text: &[u8], needle: &[u8]) -> Vec<u64> {
    if needle.len() > text.len() {
        return Vec::new();
    }
    (0..=text.len() - needle.len())
        .filter(|&i| &text[i..i + needle.len()] == needle)
        .map(|i| i as u64)
        .collect()
}

fn naive_gapped(a: &[u64], b: &[u64], min: u64, max: u64) -> Vec<u64> {
    b.iter()
        .copied()
        .filter(|&j| a.iter().any(|&i| j >= i && (min..=max).contains(&(j - i))))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn suffix_array_sorts_suffixes(text in text_over(4, 300)) {
        let t = Text::new(text.clone());
        let sa = build_index(&t).unwrap();
        let v = sa.to_vec();
        let mut perm = v.clone();
        perm.sort_unstable();
        prop_assert_eq!(perm, (0..text.len() as u64).collect::<Vec<_>>());
        for w in v.windows(2) {
            prop_assert!(text[w[0] as usize..] < text[w[1] as usize..]);
        }
    }

    #[test]
    fn interval_matches_scan(text in text_over(3, 200), needle in text_over(3, 5)) {
        prop_assume!(!needle.is_empty());
        let idx = Index::build(text.clone()).unwrap();
        let iv = idx.find_interval(&needle).unwrap();
        let mut got = idx.extract_positions(iv);
        got.sort_unstable();
        prop_assert_eq!(got, naive_positions(&text, &needle));
        let t = Text::new(text);
        prop_assert_eq!(find_interval(idx.suffix_array(), &t, &needle).unwrap(), iv);
    }

    #[test]
    fn forward_mark_never_loses_a_partner(
        a in sorted_set(2000, 40),
        b in sorted_set(2000, 200),
        min in 0u64..100,
        width in 0u64..100,
        shift in 0u32..13,
    ) {
        let (n, max, bs) = (2000u64, min + width, 1u64 << shift);
        let mut f = BlockFilter::new(n, bs).unwrap();
        f.mark_forward(&a, min, max);
        let kept = f.prune(&b);
        for j in naive_gapped(&a, &b, min, max) {
            prop_assert!(kept.contains(&j));
        }
        if bs == 1 {
            prop_assert_eq!(kept, naive_gapped(&a, &b, min, max));
        }
    }

    #[test]
    fn backward_mark_never_loses_a_partner(
        a in sorted_set(2000, 200),
        b in sorted_set(2000, 40),
        min in 0u64..100,
        width in 0u64..100,
        shift in 0u32..13,
    ) {
        let (n, max) = (2000u64, min + width);
        let mut f = BlockFilter::new(n, 1 << shift).unwrap();
        f.mark_backward(&b, min, max);
        let kept = f.prune(&a);
        let needed = intersect_gapped_predecessors(&a, &b, min, max);
        for i in needed {
            prop_assert!(kept.contains(&i));
        }
    }

    #[test]
    fn filter_pair_is_sound(
        a in sorted_set(3000, 100),
        b in sorted_set(3000, 100),
        min in 0u64..200,
        width in 0u64..200,
        shift in 0u32..13,
    ) {
        let max = min + width;
        let exact = intersect_gapped(&a, &b, min, max);
        let out = filter_pair(&a, &b, Direction::Forward, min, max, 3000, 1 << shift).unwrap();
        prop_assert_eq!(intersect_gapped(&out.small, &out.large, min, max), exact.clone());
        let out = filter_pair(&b, &a, Direction::Backward, min, max, 3000, 1 << shift).unwrap();
        prop_assert_eq!(intersect_gapped(&out.large, &out.small, min, max), exact);
    }

    #[test]
    fn intersect_matches_definition(a in sorted_set(500, 60), b in sorted_set(500, 60), min in 0u64..50, width in 0u64..50) {
        let max = min + width;
        prop_assert_eq!(intersect_gapped(&a, &b, min, max), naive_gapped(&a, &b, min, max));
        let preds: Vec<u64> = a
            .iter()
            .copied()
            .filter(|&i| b.iter().any(|&j| j >= i && (min..=max).contains(&(j - i))))
            .collect();
        prop_assert_eq!(intersect_gapped_predecessors(&a, &b, min, max), preds);
    }

    #[test]
    fn text_check_matches_intersection(
        text in text_over(3, 400),
        first in text_over(3, 3),
        second in text_over(3, 3),
        min in 0u64..20,
        width in 0u64..20,
    ) {
        prop_assume!(!first.is_empty() && !second.is_empty());
        let max = min + width;
        let a = naive_positions(&text, &first);
        let b = naive_positions(&text, &second);
        prop_assert_eq!(text_check_forward(&a, &text, &second, min, max), intersect_gapped(&a, &b, min, max));
        prop_assert_eq!(text_check_backward(&b, &text, &first, min, max), intersect_gapped(&a, &b, min, max));
    }

    #[test]
    fn kmp_matches_scan(text in text_over(2, 300), needle in text_over(2, 6)) {
        prop_assume!(!needle.is_empty());
        let got: Vec<u64> = kmp_search(&text, &needle).unwrap().into_iter().map(|p| p as u64).collect();
        prop_assert_eq!(got, naive_positions(&text, &needle));
    }

    #[test]
    fn radix_sort_sorts(v in vec(any::<u64>(), 0..500)) {
        let mut expected = v.clone();
        expected.sort_unstable();
        prop_assert_eq!(radix_sort(&v), expected);
    }

    #[test]
    fn render_then_parse_round_trips(
        subs in vec(vec(any::<u8>(), 1..5), 1..5),
        gaps in vec((0u64..1000, 0u64..1000), 4),
    ) {
        let gaps: Vec<GapConstraint> = gaps
            .into_iter()
            .take(subs.len() - 1)
            .map(|(a, w)| GapConstraint::new(a, a + w).unwrap())
            .collect();
        let p = VlgPattern::new(subs, gaps).unwrap();
        prop_assert_eq!(parse_pattern(&p.render(), GapMode::Start).unwrap(), p);
    }

    #[test]
    fn every_strategy_agrees_with_oracle(
        text in text_over(2, 300),
        subs in vec(text_over(2, 3), 1..4),
        gaps in vec((0u64..30, 0u64..30), 3),
        shift in 0u32..8,
    ) {
        prop_assume!(subs.iter().all(|s| !s.is_empty()) && text.len() > 60);
        let gaps: Vec<GapConstraint> = gaps
            .into_iter()
            .take(subs.len() - 1)
            .map(|(a, w)| GapConstraint::new(a, a + w).unwrap())
            .collect();
        let p = VlgPattern::new(subs, gaps).unwrap();
        let idx = Index::build(text.clone()).unwrap();
        let truth = oracle_search(&text, &p);
        for s in StrategyKind::ALL {
            let r = search(&idx, &p, &SearchOptions::with_strategy(s).block_size(1 << shift).tuples(None)).unwrap();
            prop_assert_eq!(&r.endpoints, &truth.endpoints, "strategy {}", s);
            prop_assert_eq!(&r.tuples, &truth.tuples, "strategy {}", s);
            let [s0, s1, s2] = r.stats.candidate_stages();
            prop_assert!(s0 >= s1 && s1 >= s2);
        }
    }
}
