use std::collections::BTreeMap;

use num_bigint::BigUint;
use proptest::prelude::*;
use rhomboid_core::graph::{build_sr, enumerate_paths, induced_subgraph, path_count, EdgeLabel, Letter, Terminal};
use rhomboid_core::{Expr, Node, PrimeField};

fn label() -> impl Strategy<Value = EdgeLabel> {
    (0..5usize, 1..6u32).prop_map(|(l, i)| {
        let letter = [Letter::A, Letter::B, Letter::C, Letter::D, Letter::E][l];
        EdgeLabel::new(letter, i)
    })
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![1 => Just(Expr::one()), 6 => label().prop_map(Expr::lit)];
    leaf.prop_recursive(4, 40, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::sum),
            prop::collection::vec(inner, 2..4).prop_map(Expr::prod),
        ]
    })
}

fn terminal_in(n: u32) -> impl Strategy<Value = Terminal> {
    prop_oneof![
        (1..=n).prop_map(Terminal::basic),
        (1..n.max(2)).prop_map(Terminal::upper),
        (1..n.max(2)).prop_map(Terminal::lower),
    ]
}

fn assignment_for(e: &Expr, seed: u64) -> BTreeMap<EdgeLabel, u64> {
    let mut labels = Vec::new();
    collect(e, &mut labels);
    labels
        .into_iter()
        .map(|l| {
            let h = seed
                .wrapping_mul(0x9e37_79b9_7f4a_7c15)
                .wrapping_add(u64::from(l.index) * 31 + l.letter as u64);
            (l, h % 1_000_003 + 1)
        })
        .collect()
}

fn collect(e: &Expr, out: &mut Vec<EdgeLabel>) {
    match e.node() {
        Node::One => {}
        Node::Lit(l) => out.push(*l),
        Node::Sum(cs) | Node::Prod(cs) => cs.iter().for_each(|c| collect(c, out)),
    }
}

fn normalized(e: &Expr) -> bool {
    match e.node() {
        Node::One | Node::Lit(_) => true,
        Node::Sum(cs) => cs.len() >= 2 && cs.iter().all(|c| !matches!(c.node(), Node::Sum(_)) && normalized(c)),
        Node::Prod(cs) => {
            cs.len() >= 2
                && cs
                    .iter()
                    .all(|c| !matches!(c.node(), Node::Prod(_) | Node::One) && normalized(c))
        }
    }
}

proptest! {
    #[test]
    fn evaluation_agrees_with_expansion(e in expr(), seed in any::<u64>()) {
        let field = PrimeField::default();
        let sigma = assignment_for(&e, seed);
        let expanded = e.expand(10_000).unwrap();
        let mut total = 0;
        for m in &expanded {
            let term = m.labels().iter().fold(1, |acc, l| field.mul(acc, sigma[l]));
            total = field.add(total, term);
        }
        prop_assert_eq!(e.eval(&sigma, field).unwrap(), total);
    }

    #[test]
    fn expansion_is_additive_and_multiplicative(x in expr(), y in expr()) {
        let (nx, ny) = (x.expand(10_000).unwrap().len(), y.expand(10_000).unwrap().len());
        let p = Expr::prod([x.clone(), y.clone()]);
        prop_assert_eq!(p.expand(100_000_000).unwrap().len(), nx * ny);
        let s = Expr::sum([x, y]);
        prop_assert_eq!(s.expand(100_000).unwrap().len(), nx + ny);
    }

    #[test]
    fn constructors_normalize(e in expr()) {
        prop_assert!(normalized(&e));
    }

    #[test]
    fn literal_count_is_compositional(x in expr(), y in expr()) {
        let total = x.literal_count() + y.literal_count();
        prop_assert_eq!(Expr::prod([x.clone(), y.clone()]).literal_count(), total);
        prop_assert_eq!(Expr::sum([x, y]).literal_count(), total);
    }

    #[test]
    fn printing_is_injective(x in expr(), y in expr()) {
        prop_assert_eq!(x == y, x.to_string() == y.to_string());
    }

    #[test]
    fn json_round_trips(e in expr()) {
        let json = serde_json::to_string(&e).unwrap();
        let back: Expr = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn induced_subgraphs_are_path_induced(
        (n, src, dst) in (2..10u32).prop_flat_map(|n| (Just(n), terminal_in(n), terminal_in(n)))
    ) {
        let g = build_sr(n).unwrap();
        let reachable = src == dst || src.position() < dst.position();
        let result = induced_subgraph(&g, src, dst);
        prop_assert_eq!(result.is_ok(), reachable);
        if let Ok(sub) = result {
            prop_assert!(sub.is_st_dag());
            prop_assert_eq!(sub.source(), src);
            prop_assert_eq!(sub.sink(), dst);
            // every edge of g between kept vertices is kept
            for e in g.edges() {
                let inside = sub.vertices().contains(&e.tail) && sub.vertices().contains(&e.head);
                prop_assert_eq!(inside, sub.edges().contains(e));
            }
            let paths = enumerate_paths(&sub, 1 << 20).unwrap();
            prop_assert_eq!(BigUint::from(paths.len()), path_count(&sub));
        }
    }
}

#[test]
fn whole_rhomboid_is_its_own_induced_subgraph() {
    for n in 1..=20 {
        let g = build_sr(n).unwrap();
        let sub = induced_subgraph(&g, Terminal::basic(1), Terminal::basic(n)).unwrap();
        assert_eq!(sub, g);
        assert!(g.is_st_dag());
    }
}

#[test]
fn enumeration_matches_counting() {
    for n in 1..=9 {
        let g = build_sr(n).unwrap();
        let mut paths = enumerate_paths(&g, 1 << 20).unwrap();
        assert_eq!(BigUint::from(paths.len()), path_count(&g));
        assert!(paths.iter().all(|m| m.is_squarefree()));
        paths.sort();
        paths.dedup();
        assert_eq!(BigUint::from(paths.len()), path_count(&g));
        let (lo, hi) = g.path_length_bounds();
        assert!(paths.iter().all(|m| (lo..=hi).contains(&(m.degree() as u64))));
    }
}
