//! Expression trees over edge-label literals.
//!
//! Nodes are reference counted so memoized generation can share
//! subexpressions. Every count reported here is by tree occurrence, i.e. the
//! number of literals one would write down, regardless of sharing.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::graph::EdgeLabel;

/// The product of the labels along one path. Labels are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct Monomial(Vec<EdgeLabel>);

impl Monomial {
    pub fn new(mut labels: Vec<EdgeLabel>) -> Self {
        labels.sort_unstable();
        Monomial(labels)
    }

    pub fn labels(&self) -> &[EdgeLabel] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// True when no label repeats, which holds for every path monomial.
    pub fn is_squarefree(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1])
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        let mut merged = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] <= other.0[j] {
                merged.push(self.0[i]);
                i += 1;
            } else {
                merged.push(other.0[j]);
                j += 1;
            }
        }
        merged.extend_from_slice(&self.0[i..]);
        merged.extend_from_slice(&other.0[j..]);
        Monomial(merged)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Debug, PartialEq, Eq)]
pub enum Node {
    One,
    Lit(EdgeLabel),
    Sum(Vec<Expr>),
    Prod(Vec<Expr>),
}

#[derive(PartialEq, Eq)]
struct Inner {
    node: Node,
    literals: u64,
}

/// A normalized expression: sums and products have at least two children,
/// never nest directly inside a node of the same kind, and products never
/// hold `One`.
#[derive(Clone, PartialEq, Eq)]
pub struct Expr(Arc<Inner>);

/// How products are printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProductStyle {
    #[default]
    Star,
    Juxtapose,
}

impl Expr {
    fn from_node(node: Node) -> Expr {
        let literals = match &node {
            Node::One => 0,
            Node::Lit(_) => 1,
            Node::Sum(cs) | Node::Prod(cs) => cs.iter().map(Expr::literal_count).sum(),
        };
        Expr(Arc::new(Inner { node, literals }))
    }

    pub fn one() -> Expr {
        Expr::from_node(Node::One)
    }

    pub fn lit(label: EdgeLabel) -> Expr {
        Expr::from_node(Node::Lit(label))
    }

    /// Flattens nested sums. Panics on an empty iterator: there is no zero.
    pub fn sum(terms: impl IntoIterator<Item = Expr>) -> Expr {
        let mut children = Vec::new();
        for t in terms {
            match t.node() {
                Node::Sum(cs) => children.extend(cs.iter().cloned()),
                _ => children.push(t),
            }
        }
        match children.len() {
            0 => panic!("empty sum has no representation"),
            1 => children.pop().unwrap(),
            _ => Expr::from_node(Node::Sum(children)),
        }
    }

    /// Flattens nested products and drops unit factors.
    pub fn prod(factors: impl IntoIterator<Item = Expr>) -> Expr {
        let mut children = Vec::new();
        for f in factors {
            match f.node() {
                Node::One => {}
                Node::Prod(cs) => children.extend(cs.iter().cloned()),
                _ => children.push(f),
            }
        }
        match children.len() {
            0 => Expr::one(),
            1 => children.pop().unwrap(),
            _ => Expr::from_node(Node::Prod(children)),
        }
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    pub fn is_one(&self) -> bool {
        matches!(self.node(), Node::One)
    }

    /// Literal occurrences in the written expression.
    pub fn literal_count(&self) -> u64 {
        self.0.literals
    }

    /// Number of monomials in the full expansion, counted with multiplicity.
    pub fn term_count(&self) -> BigUint {
        match self.node() {
            Node::One | Node::Lit(_) => BigUint::one(),
            Node::Sum(cs) => cs.iter().map(Expr::term_count).sum(),
            Node::Prod(cs) => cs.iter().map(Expr::term_count).product(),
        }
    }

    /// Distributes every product over every sum.
    pub fn expand(&self, limit: u64) -> Result<Vec<Monomial>> {
        let count = self.term_count();
        if count > BigUint::from(limit) {
            return Err(Error::Capacity {
                count: count.to_string(),
                limit,
            });
        }
        Ok(self.expand_unchecked())
    }

    fn expand_unchecked(&self) -> Vec<Monomial> {
        match self.node() {
            Node::One => vec![Monomial::default()],
            Node::Lit(l) => vec![Monomial(vec![*l])],
            Node::Sum(cs) => cs.iter().flat_map(Expr::expand_unchecked).collect(),
            Node::Prod(cs) => cs.iter().fold(vec![Monomial::default()], |acc, c| {
                let rhs = c.expand_unchecked();
                acc.iter().flat_map(|m| rhs.iter().map(move |r| m.times(r))).collect()
            }),
        }
    }

    /// Evaluates over the prime field with `+` and `*` read arithmetically.
    pub fn eval(&self, assignment: &BTreeMap<EdgeLabel, u64>, field: PrimeField) -> Result<u64> {
        Ok(match self.node() {
            Node::One => field.reduce(1),
            Node::Lit(l) => field.reduce(*assignment.get(l).ok_or(Error::UnboundLabel(*l))?),
            Node::Sum(cs) => cs
                .iter()
                .try_fold(0, |acc, c| Ok::<_, Error>(field.add(acc, c.eval(assignment, field)?)))?,
            Node::Prod(cs) => cs.iter().try_fold(field.reduce(1), |acc, c| {
                Ok::<_, Error>(field.mul(acc, c.eval(assignment, field)?))
            })?,
        })
    }

    pub fn to_text(&self, style: ProductStyle) -> String {
        let mut out = String::new();
        self.write_text(&mut out, style);
        out
    }

    fn write_text(&self, out: &mut String, style: ProductStyle) {
        use std::fmt::Write;
        match self.node() {
            Node::One => out.push('1'),
            Node::Lit(l) => write!(out, "{l}").unwrap(),
            Node::Sum(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        out.push('+');
                    }
                    c.write_text(out, style);
                }
            }
            Node::Prod(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 && style == ProductStyle::Star {
                        out.push('*');
                    }
                    let wrap = matches!(c.node(), Node::Sum(_));
                    if wrap {
                        out.push('(');
                    }
                    c.write_text(out, style);
                    if wrap {
                        out.push(')');
                    }
                }
            }
        }
    }

    /// Drops every occurrence of `label`. `None` when nothing is left.
    pub fn remove_literal(&self, label: EdgeLabel) -> Option<Expr> {
        match self.node() {
            Node::One => Some(self.clone()),
            Node::Lit(l) if *l == label => None,
            Node::Lit(_) => Some(self.clone()),
            Node::Sum(cs) => {
                let kept: Vec<Expr> = cs.iter().filter_map(|c| c.remove_literal(label)).collect();
                (!kept.is_empty()).then(|| Expr::sum(kept))
            }
            Node::Prod(cs) => {
                let kept: Vec<Expr> = cs.iter().filter_map(|c| c.remove_literal(label)).collect();
                Some(Expr::prod(kept))
            }
        }
    }

    /// Substitutes `to` for every occurrence of `from`.
    pub fn replace_literal(&self, from: EdgeLabel, to: EdgeLabel) -> Expr {
        match self.node() {
            Node::One => self.clone(),
            Node::Lit(l) if *l == from => Expr::lit(to),
            Node::Lit(_) => self.clone(),
            Node::Sum(cs) => Expr::sum(cs.iter().map(|c| c.replace_literal(from, to))),
            Node::Prod(cs) => Expr::prod(cs.iter().map(|c| c.replace_literal(from, to))),
        }
    }
}

impl From<EdgeLabel> for Expr {
    fn from(label: EdgeLabel) -> Expr {
        Expr::lit(label)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(ProductStyle::Star))
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

impl Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(1))?;
        match self.node() {
            Node::One => map.serialize_entry("one", &true)?,
            Node::Lit(l) => map.serialize_entry("lit", l)?,
            Node::Sum(cs) => map.serialize_entry("sum", cs)?,
            Node::Prod(cs) => map.serialize_entry("prod", cs)?,
        }
        map.end()
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum Repr {
    One(bool),
    Lit(EdgeLabel),
    Sum(Vec<Expr>),
    Prod(Vec<Expr>),
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        Ok(match Repr::deserialize(deserializer)? {
            Repr::One(true) => Expr::one(),
            Repr::One(false) => return Err(D::Error::custom("\"one\" must be true")),
            Repr::Lit(l) => Expr::lit(l),
            Repr::Sum(cs) if cs.is_empty() => return Err(D::Error::custom("empty sum")),
            Repr::Sum(cs) => Expr::sum(cs),
            Repr::Prod(cs) => Expr::prod(cs),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeLabel as L;

    fn sr2() -> Expr {
        Expr::sum([
            Expr::lit(L::b(1)),
            Expr::prod([L::e(1).into(), L::e(2).into()]),
            Expr::prod([L::d(1).into(), L::d(2).into()]),
        ])
    }

    // (b1+e1e2+d1d2)(b2+e3e4+d3d4)+e1c1e4+d1a1d4
    fn sr3_printed() -> Expr {
        let step = |p: u32| {
            Expr::sum([
                Expr::lit(L::b(p)),
                Expr::prod([L::e(2 * p - 1).into(), L::e(2 * p).into()]),
                Expr::prod([L::d(2 * p - 1).into(), L::d(2 * p).into()]),
            ])
        };
        Expr::sum([
            Expr::prod([step(1), step(2)]),
            Expr::prod([L::e(1).into(), L::c(1).into(), L::e(4).into()]),
            Expr::prod([L::d(1).into(), L::a(1).into(), L::d(4).into()]),
        ])
    }

    #[test]
    fn literal_counts() {
        assert_eq!(Expr::one().literal_count(), 0);
        assert_eq!(sr2().literal_count(), 5);
        assert_eq!(sr3_printed().literal_count(), 16);
    }

    #[test]
    fn printing() {
        assert_eq!(sr2().to_string(), "b1+e1*e2+d1*d2");
        assert_eq!(sr2().to_text(ProductStyle::Juxtapose), "b1+e1e2+d1d2");
        assert_eq!(
            sr3_printed().to_string(),
            "(b1+e1*e2+d1*d2)*(b2+e3*e4+d3*d4)+e1*c1*e4+d1*a1*d4"
        );
        assert_eq!(Expr::one().to_string(), "1");
    }

    #[test]
    fn normalization() {
        let e = Expr::prod([Expr::one(), Expr::lit(L::b(1)), Expr::one()]);
        assert_eq!(e, Expr::lit(L::b(1)));
        assert!(Expr::prod([Expr::one(), Expr::one()]).is_one());
        let nested = Expr::prod([Expr::prod([L::a(1).into(), L::a(2).into()]), L::a(3).into()]);
        assert!(matches!(nested.node(), Node::Prod(cs) if cs.len() == 3));
        let nested = Expr::sum([sr2(), Expr::lit(L::c(1))]);
        assert!(matches!(nested.node(), Node::Sum(cs) if cs.len() == 4));
    }

    #[test]
    fn expansion() {
        let mut ms: Vec<String> = sr2().expand(100).unwrap().iter().map(|m| m.to_string()).collect();
        ms.sort();
        assert_eq!(ms, ["b1", "d1*d2", "e1*e2"]);
        assert_eq!(Expr::one().expand(1).unwrap(), vec![Monomial::default()]);

        let ms = sr3_printed().expand(100).unwrap();
        assert_eq!(ms.len(), 11);
        let mut distinct = ms.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), 11);
        for expected in [
            Monomial::new(vec![L::b(1), L::b(2)]),
            Monomial::new(vec![L::c(1), L::e(1), L::e(4)]),
            Monomial::new(vec![L::a(1), L::d(1), L::d(4)]),
        ] {
            assert!(ms.contains(&expected), "{expected} missing");
        }
    }

    #[test]
    fn expansion_respects_capacity() {
        let err = sr3_printed().expand(10).unwrap_err();
        assert_eq!(
            err,
            Error::Capacity {
                count: "11".into(),
                limit: 10
            }
        );
    }

    #[test]
    fn evaluation() {
        let field = PrimeField::default();
        let sigma: BTreeMap<_, _> = [(L::b(1), 2), (L::e(1), 3), (L::e(2), 5), (L::d(1), 7), (L::d(2), 11)]
            .into_iter()
            .collect();
        assert_eq!(sr2().eval(&sigma, field), Ok(94));
        assert_eq!(Expr::one().eval(&BTreeMap::new(), field), Ok(1));
        assert_eq!(sr3_printed().eval(&sigma, field), Err(Error::UnboundLabel(L::b(2))));
    }

    #[test]
    fn json_shape() {
        let json = serde_json::to_string(&sr2()).unwrap();
        assert_eq!(
            json,
            r#"{"sum":[{"lit":"b1"},{"prod":[{"lit":"e1"},{"lit":"e2"}]},{"prod":[{"lit":"d1"},{"lit":"d2"}]}]}"#
        );
        let back: Expr = serde_json::from_str(&json).unwrap();
        assert_eq!(back, sr2());
        assert_eq!(serde_json::to_string(&Expr::one()).unwrap(), r#"{"one":true}"#);
        assert!(serde_json::from_str::<Expr>(r#"{"sum":[]}"#).is_err());
        assert!(serde_json::from_str::<Expr>(r#"{"lit":"z1"}"#).is_err());
    }

    #[test]
    fn literal_surgery() {
        let without_b1 = sr2().remove_literal(L::b(1)).unwrap();
        assert_eq!(without_b1.to_string(), "e1*e2+d1*d2");
        let swapped = sr2().replace_literal(L::e(2), L::d(2));
        assert_eq!(swapped.to_string(), "b1+e1*d2+d1*d2");
        assert!(Expr::lit(L::a(1)).remove_literal(L::a(1)).is_none());
    }
}
