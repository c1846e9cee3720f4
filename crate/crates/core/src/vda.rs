//! One-vertex decomposition.
//!
//! A subgraph between terminals `src` and `dst` with at least three basic
//! vertices is split at a basic vertex `i` strictly inside it. Every
//! `src -> dst` path passes through exactly one of: vertex `i`, edge
//! `c_{i-1}`, edge `a_{i-1}`. So
//!
//! ```text
//! E(src,dst) = E(src,i) E(i,dst)
//!            + E(src,u(i-1)) c_{i-1} E(u(i),dst)
//!            + E(src,l(i-1)) a_{i-1} E(l(i),dst)
//! ```
//!
//! Subgraphs with one or two basic vertices use the fixed base relations
//! 1 to 18 of [`base_relation`].

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::graph::{classify, EdgeLabel as L, Family, SubgraphKind, Terminal, TerminalKind};

/// Rounding of the split vertex for even spans where the relations leave
/// it open: whole rhomboids and dipterous subgraphs. Single-leaf subgraphs
/// always round up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitRounding {
    #[default]
    Ceil,
    Floor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    pub rounding: SplitRounding,
    pub memoize: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            rounding: SplitRounding::Ceil,
            memoize: true,
        }
    }
}

/// Identifies a subexpression by its terminals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SubExprKey {
    pub src: Terminal,
    pub dst: Terminal,
}

impl SubExprKey {
    pub fn new(src: Terminal, dst: Terminal) -> Self {
        SubExprKey { src, dst }
    }
}

/// Whether relations 15 and 18 are taken as printed or with the
/// letter swap that makes them agree with their path sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Corrected,
    Printed,
}

fn terminal_kinds(family: Family) -> (TerminalKind, TerminalKind) {
    use TerminalKind::*;
    match family {
        Family::Sr => (Basic, Basic),
        Family::SlBasicUpper => (Basic, Upper),
        Family::SlUpperBasic => (Upper, Basic),
        Family::SlBasicLower => (Basic, Lower),
        Family::SlLowerBasic => (Lower, Basic),
        Family::TrapUpperUpper => (Upper, Upper),
        Family::TrapLowerLower => (Lower, Lower),
        Family::ParaLowerUpper => (Lower, Upper),
        Family::ParaUpperLower => (Upper, Lower),
    }
}

/// Picks the decomposition vertex for the subgraph of `kind` between
/// indices `p` and `q`: the middle of `(p, q)` when a terminal is basic,
/// the middle of `(p + 1, q)` when both are upper/lower.
pub fn choose_split(kind: SubgraphKind, p: u32, q: u32, rounding: SplitRounding) -> Result<u32> {
    let (sk, dk) = terminal_kinds(kind.family);
    let src = Terminal { index: p, kind: sk };
    let dst = Terminal { index: q, kind: dk };
    if kind.size < 3 || classify(src, dst)? != kind {
        return Err(Error::BaseCaseExpected { src, dst });
    }
    let twice_middle = if kind.family.is_dipterous() { q + p + 1 } else { q + p };
    let round_up = kind.family.is_single_leaf() || rounding == SplitRounding::Ceil;
    let i = if round_up {
        twice_middle.div_ceil(2)
    } else {
        twice_middle / 2
    };
    debug_assert!(p < i && i < q);
    Ok(i)
}

/// The relation number (1 to 27) that produces the expression for `kind`.
pub fn relation_number(kind: SubgraphKind) -> u8 {
    use Family::*;
    match (kind.family, kind.size) {
        (Sr, 1) => 1,
        (SlBasicUpper, 1) => 2,
        (SlBasicLower, 1) => 3,
        (SlUpperBasic, 1) => 4,
        (SlLowerBasic, 1) => 5,
        (TrapUpperUpper, 1) => 6,
        (ParaUpperLower, 1) => 7,
        (ParaLowerUpper, 1) => 8,
        (TrapLowerLower, 1) => 9,
        (Sr, 2) => 10,
        (SlBasicUpper, 2) => 11,
        (SlBasicLower, 2) => 12,
        (SlUpperBasic, 2) => 13,
        (SlLowerBasic, 2) => 14,
        (TrapUpperUpper, 2) => 15,
        (ParaUpperLower, 2) => 16,
        (ParaLowerUpper, 2) => 17,
        (TrapLowerLower, 2) => 18,
        (SlBasicUpper, _) => 19,
        (SlBasicLower, _) => 20,
        (SlUpperBasic, _) => 21,
        (SlLowerBasic, _) => 22,
        (TrapUpperUpper, _) => 23,
        (ParaUpperLower, _) => 24,
        (ParaLowerUpper, _) => 25,
        (TrapLowerLower, _) => 26,
        (Sr, _) => 27,
    }
}

/// The terminals of base relation `number` anchored at index `p`.
pub fn relation_key(number: u8, p: u32) -> Option<SubExprKey> {
    use Terminal as T;
    let (src, dst) = match number {
        1 => (T::basic(p), T::basic(p)),
        2 => (T::basic(p), T::upper(p)),
        3 => (T::basic(p), T::lower(p)),
        4 => (T::upper(p), T::basic(p + 1)),
        5 => (T::lower(p), T::basic(p + 1)),
        6 => (T::upper(p), T::upper(p + 1)),
        7 => (T::upper(p), T::lower(p + 1)),
        8 => (T::lower(p), T::upper(p + 1)),
        9 => (T::lower(p), T::lower(p + 1)),
        10 => (T::basic(p), T::basic(p + 1)),
        11 => (T::basic(p), T::upper(p + 1)),
        12 => (T::basic(p), T::lower(p + 1)),
        13 => (T::upper(p), T::basic(p + 2)),
        14 => (T::lower(p), T::basic(p + 2)),
        15 => (T::upper(p), T::upper(p + 2)),
        16 => (T::upper(p), T::lower(p + 2)),
        17 => (T::lower(p), T::upper(p + 2)),
        18 => (T::lower(p), T::lower(p + 2)),
        _ => return None,
    };
    Some(SubExprKey { src, dst })
}

fn lit(l: L) -> Expr {
    Expr::lit(l)
}

fn sum<const N: usize>(terms: [Expr; N]) -> Expr {
    Expr::sum(terms)
}

fn prod<const N: usize>(factors: [Expr; N]) -> Expr {
    Expr::prod(factors)
}

/// `x + y z`
fn alt(x: L, y: L, z: L) -> Expr {
    sum([lit(x), prod([lit(y), lit(z)])])
}

/// Base relation `number` (1 to 18) anchored at index `p`.
pub fn base_relation(number: u8, p: u32, variant: Variant) -> Option<Expr> {
    if p == 0 {
        return None;
    }
    let (e, d) = (|k: u32| L::e(2 * p + k - 1), |k: u32| L::d(2 * p + k - 1));
    // e(k) = e_{2p-1+k}, so e(0) = e_{2p-1}, e(1) = e_{2p}, ...
    let (b, c, a) = (L::b, L::c, L::a);
    Some(match number {
        1 => Expr::one(),
        2 => lit(e(0)),
        3 => lit(d(0)),
        4 => lit(e(1)),
        5 => lit(d(1)),
        6 => alt(c(p), e(1), e(2)),
        7 => prod([lit(e(1)), lit(d(2))]),
        8 => prod([lit(d(1)), lit(e(2))]),
        9 => alt(a(p), d(1), d(2)),
        10 => sum([lit(b(p)), prod([lit(e(0)), lit(e(1))]), prod([lit(d(0)), lit(d(1))])]),
        11 => sum([
            prod([alt(b(p), d(0), d(1)), lit(e(2))]),
            prod([lit(e(0)), alt(c(p), e(1), e(2))]),
        ]),
        12 => sum([
            prod([alt(b(p), e(0), e(1)), lit(d(2))]),
            prod([lit(d(0)), alt(a(p), d(1), d(2))]),
        ]),
        13 => sum([
            prod([alt(c(p), e(1), e(2)), lit(e(3))]),
            prod([lit(e(1)), alt(b(p + 1), d(2), d(3))]),
        ]),
        14 => sum([
            prod([alt(a(p), d(1), d(2)), lit(d(3))]),
            prod([lit(d(1)), alt(b(p + 1), e(2), e(3))]),
        ]),
        15 => {
            let bridge = match variant {
                Variant::Corrected => prod([alt(c(p), e(1), e(2)), alt(c(p + 1), e(3), e(4))]),
                Variant::Printed => prod([alt(a(p), d(1), d(2)), alt(a(p + 1), d(3), d(4))]),
            };
            sum([prod([lit(e(1)), alt(b(p + 1), d(2), d(3)), lit(e(4))]), bridge])
        }
        16 => sum([
            prod([
                lit(e(1)),
                sum([
                    prod([lit(b(p + 1)), lit(d(4))]),
                    prod([lit(d(2)), alt(a(p + 1), d(3), d(4))]),
                ]),
            ]),
            prod([alt(c(p), e(1), e(2)), lit(e(3)), lit(d(4))]),
        ]),
        17 => sum([
            prod([
                lit(d(1)),
                sum([
                    prod([lit(b(p + 1)), lit(e(4))]),
                    prod([lit(e(2)), alt(c(p + 1), e(3), e(4))]),
                ]),
            ]),
            prod([alt(a(p), d(1), d(2)), lit(d(3)), lit(e(4))]),
        ]),
        18 => {
            let bridge = match variant {
                Variant::Corrected => prod([alt(a(p), d(1), d(2)), alt(a(p + 1), d(3), d(4))]),
                Variant::Printed => prod([alt(c(p), e(1), e(2)), alt(c(p + 1), e(3), e(4))]),
            };
            sum([prod([lit(d(1)), alt(b(p + 1), e(2), e(3)), lit(d(4))]), bridge])
        }
        _ => return None,
    })
}

/// Generates subexpressions of `SR(n)`.
///
/// The memo table lives as long as the generator, so one generator can
/// answer many keys cheaply.
pub struct Generator {
    n: u32,
    config: Config,
    memo: HashMap<SubExprKey, Expr>,
}

impl Generator {
    pub fn new(n: u32, config: Config) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize(n));
        }
        Ok(Generator {
            n,
            config,
            memo: HashMap::new(),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of distinct subexpressions built so far.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn expression(&mut self, key: SubExprKey) -> Result<Expr> {
        for terminal in [key.src, key.dst] {
            if !terminal.in_sr(self.n) {
                return Err(Error::Range { terminal, n: self.n });
            }
        }
        classify(key.src, key.dst)?;
        Ok(self.build(key))
    }

    pub fn whole(&mut self) -> Expr {
        self.build(SubExprKey::new(Terminal::basic(1), Terminal::basic(self.n)))
    }

    fn build(&mut self, key: SubExprKey) -> Expr {
        if let Some(e) = self.memo.get(&key) {
            return e.clone();
        }
        let kind = classify(key.src, key.dst).expect("keys are validated before recursion");
        let expr = if kind.size <= 2 {
            base_relation(relation_number(kind), key.src.index, Variant::Corrected)
                .expect("every size-1 and size-2 family has a relation")
        } else {
            let i = choose_split(kind, key.src.index, key.dst.index, self.config.rounding)
                .expect("size >= 3 always splits");
            let mut part = |src, dst| self.build(SubExprKey::new(src, dst));
            let through_vertex = prod([part(key.src, Terminal::basic(i)), part(Terminal::basic(i), key.dst)]);
            let through_upper = prod([
                part(key.src, Terminal::upper(i - 1)),
                lit(L::c(i - 1)),
                part(Terminal::upper(i), key.dst),
            ]);
            let through_lower = prod([
                part(key.src, Terminal::lower(i - 1)),
                lit(L::a(i - 1)),
                part(Terminal::lower(i), key.dst),
            ]);
            sum([through_vertex, through_upper, through_lower])
        };
        if self.config.memoize {
            self.memo.insert(key, expr.clone());
        }
        expr
    }
}

/// The factored expression of `SR(n)` with the default configuration.
pub fn generate(n: u32) -> Result<Expr> {
    generate_with(n, Config::default())
}

pub fn generate_with(n: u32, config: Config) -> Result<Expr> {
    Ok(Generator::new(n, config)?.whole())
}

/// Literal count of the subexpression for `kind`, generated in a rhomboid
/// just large enough to contain it.
pub fn family_literal_count(family: Family, size: u32, config: Config) -> Result<u64> {
    if size == 0 {
        return Err(Error::InvalidSize(size));
    }
    let (sk, dk) = terminal_kinds(family);
    let src = Terminal { index: 1, kind: sk };
    let last = if src.is_basic() { size } else { size + 1 };
    let dst = Terminal { index: last, kind: dk };
    let mut generator = Generator::new(last + 1, config)?;
    Ok(generator.expression(SubExprKey::new(src, dst))?.literal_count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(src: Terminal, dst: Terminal) -> SubgraphKind {
        classify(src, dst).unwrap()
    }

    #[test]
    fn split_vertices() {
        let sr = kind(Terminal::basic(1), Terminal::basic(7));
        assert_eq!(choose_split(sr, 1, 7, SplitRounding::Ceil), Ok(4));
        let sr = kind(Terminal::basic(1), Terminal::basic(3));
        assert_eq!(choose_split(sr, 1, 3, SplitRounding::Ceil), Ok(2));
        let trap = kind(Terminal::upper(5), Terminal::upper(9));
        assert_eq!(choose_split(trap, 5, 9, SplitRounding::Ceil), Ok(8));
        // single-leaf cases: b1..u3 at 2, b1..u4 at 3
        let sl = kind(Terminal::basic(1), Terminal::upper(3));
        assert_eq!(choose_split(sl, 1, 3, SplitRounding::Ceil), Ok(2));
        let sl = kind(Terminal::basic(1), Terminal::upper(4));
        assert_eq!(choose_split(sl, 1, 4, SplitRounding::Ceil), Ok(3));
        // dipterous panel: l4..u7 at 6
        let para = kind(Terminal::lower(4), Terminal::upper(7));
        assert_eq!(choose_split(para, 4, 7, SplitRounding::Ceil), Ok(6));
    }

    #[test]
    fn floor_split() {
        let sr = kind(Terminal::basic(1), Terminal::basic(4));
        assert_eq!(choose_split(sr, 1, 4, SplitRounding::Floor), Ok(2));
        let sr = kind(Terminal::basic(1), Terminal::basic(7));
        assert_eq!(choose_split(sr, 1, 7, SplitRounding::Floor), Ok(4));
        let sl = kind(Terminal::basic(1), Terminal::upper(4));
        assert_eq!(choose_split(sl, 1, 4, SplitRounding::Floor), Ok(3));
        let trap = kind(Terminal::upper(5), Terminal::upper(9));
        assert_eq!(choose_split(trap, 5, 9, SplitRounding::Floor), Ok(7));
    }

    #[test]
    fn split_guards() {
        let sr = kind(Terminal::basic(1), Terminal::basic(2));
        assert!(matches!(
            choose_split(sr, 1, 2, SplitRounding::Ceil),
            Err(Error::BaseCaseExpected { .. })
        ));
        let trap = kind(Terminal::upper(1), Terminal::upper(3));
        assert!(choose_split(trap, 1, 3, SplitRounding::Ceil).is_err());
        let sl = kind(Terminal::upper(1), Terminal::basic(3));
        assert!(choose_split(sl, 1, 3, SplitRounding::Ceil).is_err());
    }

    #[test]
    fn base_expressions() {
        let mut g = Generator::new(8, Config::default()).unwrap();
        let mut text = |src, dst| g.expression(SubExprKey::new(src, dst)).unwrap().to_string();
        assert_eq!(text(Terminal::basic(3), Terminal::basic(3)), "1");
        assert_eq!(text(Terminal::basic(1), Terminal::basic(2)), "b1+e1*e2+d1*d2");
        assert_eq!(text(Terminal::upper(3), Terminal::upper(4)), "c3+e6*e7");
        assert_eq!(
            text(Terminal::lower(3), Terminal::lower(5)),
            "d6*(b4+e7*e8)*d9+(a3+d6*d7)*(a4+d8*d9)"
        );
        assert_eq!(
            text(Terminal::upper(3), Terminal::upper(5)),
            "e6*(b4+d7*d8)*e9+(c3+e6*e7)*(c4+e8*e9)"
        );
    }

    #[test]
    fn printed_relations_differ_only_in_bridge() {
        let printed = base_relation(15, 1, Variant::Printed).unwrap();
        assert_eq!(printed.to_string(), "e2*(b2+d3*d4)*e5+(a1+d2*d3)*(a2+d4*d5)");
        assert_eq!(printed.literal_count(), 11);
        let printed = base_relation(18, 1, Variant::Printed).unwrap();
        assert_eq!(printed.to_string(), "d2*(b2+e3*e4)*d5+(c1+e2*e3)*(c2+e4*e5)");
        for r in 1..=18 {
            if r != 15 && r != 18 {
                assert_eq!(
                    base_relation(r, 2, Variant::Printed),
                    base_relation(r, 2, Variant::Corrected)
                );
            }
        }
        assert!(base_relation(19, 1, Variant::Corrected).is_none());
        assert!(base_relation(1, 0, Variant::Corrected).is_none());
    }

    #[test]
    fn relation_numbers_match_keys() {
        for r in 1..=18u8 {
            let key = relation_key(r, 3).unwrap();
            assert_eq!(relation_number(classify(key.src, key.dst).unwrap()), r);
        }
    }

    #[test]
    fn golden_sr3() {
        assert_eq!(
            generate(3).unwrap().to_string(),
            "(b1+e1*e2+d1*d2)*(b2+e3*e4+d3*d4)+e1*c1*e4+d1*a1*d4"
        );
        assert!(generate(1).unwrap().is_one());
        assert_eq!(generate(4).unwrap().literal_count(), 41);
    }

    #[test]
    fn out_of_range_keys() {
        let mut g = Generator::new(7, Config::default()).unwrap();
        let err = g
            .expression(SubExprKey::new(Terminal::upper(5), Terminal::upper(7)))
            .unwrap_err();
        assert_eq!(
            err,
            Error::Range {
                terminal: Terminal::upper(7),
                n: 7
            }
        );
        assert!(g
            .expression(SubExprKey::new(Terminal::basic(5), Terminal::basic(2)))
            .is_err());
        assert!(generate(0).is_err());
    }

    #[test]
    fn memoization_is_transparent() {
        for n in 1..=24 {
            let memo = generate(n).unwrap();
            let plain = generate_with(
                n,
                Config {
                    memoize: false,
                    ..Config::default()
                },
            )
            .unwrap();
            assert_eq!(memo, plain, "n = {n}");
        }
    }

    #[test]
    fn memo_table_stays_small() {
        let mut g = Generator::new(256, Config::default()).unwrap();
        g.whole();
        assert!(g.memo_len() < 256 * 16, "{} keys", g.memo_len());
    }
}
