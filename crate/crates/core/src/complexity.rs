//! Literal counts of the decomposition: recurrences, closed forms for
//! powers of two, and published reference figures.
//!
//! Three families are tracked: `T` for square rhomboids, `T̂` for
//! single-leaf ones and `T̂̂` for dipterous ones. Below size 3 the
//! dipterous counts differ between the trapezoidal (`tr`) and parallelogram
//! (`pr`) shapes; from size 3 on they coincide.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{build_sr, induced_subgraph, Family};
use crate::oracle::check_exact;
use crate::vda::{self, base_relation, family_literal_count, relation_key, Config, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexityRow {
    pub n: u32,
    pub t: u64,
    pub t_hat: u64,
    pub t_hathat_tr: u64,
    pub t_hathat_pr: u64,
}

impl ComplexityRow {
    /// The shared dipterous count, once trapezoidal and parallelogram agree.
    pub fn t_hathat(&self) -> Option<u64> {
        (self.t_hathat_tr == self.t_hathat_pr).then_some(self.t_hathat_tr)
    }
}

impl Serialize for ComplexityRow {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("ComplexityRow", 6)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("t", &self.t)?;
        s.serialize_field("t_hat", &self.t_hat)?;
        s.serialize_field("t_hathat", &self.t_hathat())?;
        s.serialize_field("t_hathat_tr", &self.t_hathat_tr)?;
        s.serialize_field("t_hathat_pr", &self.t_hathat_pr)?;
        s.end()
    }
}

/// Base values as published, indexed by statement number 1 to 16.
pub const PRINTED_BASES: [(u8, &str, u32, u64); 16] = [
    (1, "T", 1, 0),
    (2, "T_hat", 1, 1),
    (3, "T_hathat_pr", 1, 2),
    (4, "T_hathat_tr", 1, 3),
    (5, "T", 2, 5),
    (6, "T_hat", 2, 8),
    (7, "T_hathat_pr", 2, 12),
    (8, "T_hathat_tr", 2, 11),
    (9, "T_hat", 3, 22),
    (10, "T_hathat", 3, 28),
    (11, "T_hat", 4, 47),
    (12, "T_hathat", 4, 60),
    (13, "T_hat", 5, 79),
    (14, "T_hathat", 5, 92),
    (15, "T_hat", 6, 132),
    (16, "T_hathat", 6, 50),
];

fn printed(statement: u8) -> u64 {
    PRINTED_BASES[usize::from(statement) - 1].3
}

/// `T̂̂(6)` taken from the generated size-6 trapezoidal expression.
pub fn generated_dipterous_six() -> Result<u64> {
    family_literal_count(Family::TrapUpperUpper, 6, Config::default())
}

struct Tables {
    t: Vec<u64>,
    t_hat: Vec<u64>,
    tr: Vec<u64>,
    pr: Vec<u64>,
}

impl Tables {
    fn with_len(len: usize) -> Self {
        Tables {
            t: vec![0; len],
            t_hat: vec![0; len],
            tr: vec![0; len],
            pr: vec![0; len],
        }
    }

    /// Two dipterous subgraphs of size `m` revealed by one split: one
    /// trapezoidal, one parallelogram.
    fn dipterous_pair(&self, m: usize) -> u64 {
        self.tr[m] + self.pr[m]
    }

    fn rows(&self, n_max: u32) -> Vec<ComplexityRow> {
        (1..=n_max)
            .map(|n| {
                let i = n as usize;
                ComplexityRow {
                    n,
                    t: self.t[i],
                    t_hat: self.t_hat[i],
                    t_hathat_tr: self.tr[i],
                    t_hathat_pr: self.pr[i],
                }
            })
            .collect()
    }
}

fn halves(n: usize) -> (usize, usize) {
    (n.div_ceil(2), n / 2)
}

/// `T(n)` for `n > 2`.
fn square_step(tb: &Tables, n: usize) -> u64 {
    let (hi, lo) = halves(n);
    tb.t[hi] + tb.t[lo + 1] + 2 * tb.t_hat[hi - 1] + 2 * tb.t_hat[lo] + 2
}

fn single_leaf_step(tb: &Tables, n: usize) -> u64 {
    let (hi, lo) = halves(n);
    tb.t[lo + 1] + tb.t_hat[hi] + 2 * tb.t_hat[lo] + tb.dipterous_pair(hi - 1) + 2
}

fn dipterous_step(tb: &Tables, n: usize) -> u64 {
    let (hi, lo) = halves(n);
    tb.t_hat[hi] + tb.t_hat[lo + 1] + tb.dipterous_pair(hi - 1) + tb.dipterous_pair(lo) + 2
}

/// Rows `1..=n_max` from the published base values and the three
/// recurrences, with `T̂̂(6)` replaced by its generated value.
pub fn recurrence_table(n_max: u32) -> Result<Vec<ComplexityRow>> {
    if n_max < 2 {
        return Err(Error::Domain(format!("n_max must be at least 2, got {n_max}")));
    }
    let len = n_max.max(6) as usize + 1;
    let mut tb = Tables::with_len(len);
    tb.t[1] = printed(1);
    tb.t_hat[1] = printed(2);
    tb.pr[1] = printed(3);
    tb.tr[1] = printed(4);
    tb.t[2] = printed(5);
    tb.t_hat[2] = printed(6);
    tb.pr[2] = printed(7);
    tb.tr[2] = printed(8);
    let six = generated_dipterous_six()?;
    for (m, hat, hathat) in [(3, 9, 10), (4, 11, 12), (5, 13, 14), (6, 15, 16)] {
        tb.t_hat[m] = printed(hat);
        let d = if hathat == 16 { six } else { printed(hathat) };
        tb.tr[m] = d;
        tb.pr[m] = d;
    }
    for n in 3..len {
        tb.t[n] = square_step(&tb, n);
        if n > 6 {
            tb.t_hat[n] = single_leaf_step(&tb, n);
            let d = dipterous_step(&tb, n);
            tb.tr[n] = d;
            tb.pr[n] = d;
        }
    }
    Ok(tb.rows(n_max))
}

/// Rows `1..=n_max` using only the size-1 and size-2 bases; every larger
/// value, including the published bases for sizes 3 to 6, is recomputed by
/// the split geometry.
pub fn split_recurrence_table(n_max: u32) -> Vec<ComplexityRow> {
    let len = n_max.max(2) as usize + 1;
    let mut tb = Tables::with_len(len);
    tb.t[1] = printed(1);
    tb.t_hat[1] = printed(2);
    tb.pr[1] = printed(3);
    tb.tr[1] = printed(4);
    tb.t[2] = printed(5);
    tb.t_hat[2] = printed(6);
    tb.pr[2] = printed(7);
    tb.tr[2] = printed(8);
    for n in 3..len {
        tb.t[n] = square_step(&tb, n);
        tb.t_hat[n] = single_leaf_step(&tb, n);
        let d = dipterous_step(&tb, n);
        tb.tr[n] = d;
        tb.pr[n] = d;
    }
    tb.rows(n_max.max(1))
}

/// Literal counts of generated expressions, one row per size.
pub fn generated_row(n: u32, config: Config) -> Result<ComplexityRow> {
    Ok(ComplexityRow {
        n,
        t: vda::generate_with(n, config)?.literal_count(),
        t_hat: family_literal_count(Family::SlBasicUpper, n, config)?,
        t_hathat_tr: family_literal_count(Family::TrapUpperUpper, n, config)?,
        t_hathat_pr: family_literal_count(Family::ParaLowerUpper, n, config)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedForm {
    pub n: u64,
    pub t: u64,
    pub t_hat: u64,
    pub t_hathat: u64,
}

/// Evaluates `154/135 n^{log2 6} + c/27 n^{log2 3} - 2/5` with `c` = 1, 19
/// and 58, exactly, for `n = 2^k`, `k >= 2`.
pub fn closed_form(n: u64) -> Result<ClosedForm> {
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::Domain(format!("{n} is not a power of two >= 4")));
    }
    let k = n.trailing_zeros();
    let six_k = BigInt::from(6).pow(k);
    let three_k = BigInt::from(3).pow(k);
    let eval = |c: i64| -> Result<u64> {
        let value = BigRational::new(BigInt::from(154) * &six_k, BigInt::from(135))
            + BigRational::new(BigInt::from(c) * &three_k, BigInt::from(27))
            - BigRational::new(BigInt::from(2), BigInt::from(5));
        if !value.is_integer() {
            return Err(Error::Integrity {
                n,
                value: value.to_string(),
            });
        }
        value.to_integer().to_u64().ok_or_else(|| Error::Integrity {
            n,
            value: value.to_string(),
        })
    };
    Ok(ClosedForm {
        n,
        t: eval(1)?,
        t_hat: eval(19)?,
        t_hathat: eval(58)?,
    })
}

/// Leading coefficient of the `n^{log2 6}` term.
pub const LEADING_COEFFICIENT: (i64, i64) = (154, 135);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticFit {
    /// `(n, T(n) / n^{log2 6})` per sample.
    pub ratios: Vec<(u32, f64)>,
    pub limit: f64,
    /// Distance to `limit` never grows from one sample to the next.
    /// `None` for fewer than two samples.
    pub converging: Option<bool>,
}

pub fn asymptotic_check(samples: &[u32]) -> Result<AsymptoticFit> {
    let Some(&max) = samples.iter().max() else {
        return Err(Error::Domain("no samples".into()));
    };
    if samples.iter().any(|&n| n < 2) {
        return Err(Error::Domain("samples must be at least 2".into()));
    }
    let table = recurrence_table(max)?;
    let limit = LEADING_COEFFICIENT.0 as f64 / LEADING_COEFFICIENT.1 as f64;
    let ratios: Vec<(u32, f64)> = samples
        .iter()
        .map(|&n| {
            let scale = if n.is_power_of_two() {
                6f64.powi(n.trailing_zeros() as i32)
            } else {
                f64::from(n).powf(6f64.log2())
            };
            (n, table[n as usize - 1].t as f64 / scale)
        })
        .collect();
    let converging = (ratios.len() >= 2).then(|| {
        ratios
            .windows(2)
            .all(|w| (w[1].1 - limit).abs() <= (w[0].1 - limit).abs())
    });
    Ok(AsymptoticFit {
        ratios,
        limit,
        converging,
    })
}

/// Published literal counts for sizes 4 to 10 alongside the two-vertex
/// decomposition algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReferenceRow {
    pub n: u32,
    pub fda: u64,
    pub cda: u64,
    pub ifda: u64,
    pub one_vda: u64,
}

pub const REFERENCE_TABLE: [ReferenceRow; 7] = [
    ReferenceRow {
        n: 4,
        fda: 47,
        cda: 43,
        ifda: 43,
        one_vda: 41,
    },
    ReferenceRow {
        n: 5,
        fda: 110,
        cda: 102,
        ifda: 100,
        one_vda: 66,
    },
    ReferenceRow {
        n: 6,
        fda: 173,
        cda: 161,
        ifda: 157,
        one_vda: 119,
    },
    ReferenceRow {
        n: 7,
        fda: 252,
        cda: 236,
        ifda: 228,
        one_vda: 172,
    },
    ReferenceRow {
        n: 8,
        fda: 331,
        cda: 311,
        ifda: 299,
        one_vda: 247,
    },
    ReferenceRow {
        n: 9,
        fda: 520,
        cda: 488,
        ifda: 470,
        one_vda: 322,
    },
    ReferenceRow {
        n: 10,
        fda: 709,
        cda: 665,
        ifda: 641,
        one_vda: 439,
    },
];

pub fn reference_row(n: u32) -> Option<&'static ReferenceRow> {
    REFERENCE_TABLE.iter().find(|r| r.n == n)
}

/// Published leading coefficients of `n^{log2 6}`.
pub fn reference_coefficients() -> [(&'static str, Ratio<i64>); 4] {
    [
        ("FDA", Ratio::new(79, 45)),
        ("CDA", Ratio::new(227, 135)),
        ("IFDA", Ratio::new(212, 135)),
        ("1-VDA", Ratio::new(LEADING_COEFFICIENT.0, LEADING_COEFFICIENT.1)),
    ]
}

/// A published figure next to what this crate derives for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub item: String,
    pub printed: String,
    pub derived: String,
    pub consistent: bool,
}

/// Checks every published base value and both letter-swapped relations.
///
/// Base values are compared with [`split_recurrence_table`] and with
/// generation; relations 15 and 18 are run through the exact oracle on
/// `SR(8)` as printed.
pub fn discrepancy_report() -> Result<Vec<Discrepancy>> {
    let derived = split_recurrence_table(6);
    let mut out = Vec::new();
    for &(statement, family, size, value) in &PRINTED_BASES {
        let row = &derived[size as usize - 1];
        let generated = match family {
            "T" => vda::generate(size)?.literal_count(),
            "T_hat" => family_literal_count(Family::SlBasicUpper, size, Config::default())?,
            "T_hathat_pr" => family_literal_count(Family::ParaLowerUpper, size, Config::default())?,
            _ => family_literal_count(Family::TrapUpperUpper, size, Config::default())?,
        };
        let recurrence = match family {
            "T" => row.t,
            "T_hat" => row.t_hat,
            "T_hathat_pr" => row.t_hathat_pr,
            _ => row.t_hathat_tr,
        };
        debug_assert_eq!(recurrence, generated);
        out.push(Discrepancy {
            item: format!("statement {statement}: {family}({size})"),
            printed: value.to_string(),
            derived: generated.to_string(),
            consistent: value == generated && value == recurrence,
        });
    }

    let g = build_sr(8)?;
    for relation in [15u8, 18] {
        let key = relation_key(relation, 1).expect("base relation");
        let sub = induced_subgraph(&g, key.src, key.dst)?;
        let printed = base_relation(relation, 1, Variant::Printed).expect("base relation");
        let corrected = base_relation(relation, 1, Variant::Corrected).expect("base relation");
        let printed_ok = check_exact(&printed, &sub, 1 << 20)?.passed();
        let corrected_ok = check_exact(&corrected, &sub, 1 << 20)?.passed();
        out.push(Discrepancy {
            item: format!("relation {relation}: E({},{}) at p = 1", key.src, key.dst),
            printed: format!("{printed} (oracle: {})", verdict(printed_ok)),
            derived: format!("{corrected} (oracle: {})", verdict(corrected_ok)),
            consistent: printed_ok,
        });
    }
    Ok(out)
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_three_from_statements() {
        let rows = recurrence_table(3).unwrap();
        assert_eq!(rows[2].t, 5 + 5 + 2 + 2 + 2);
        assert_eq!(rows[2].t, 16);
    }

    #[test]
    fn table_one_column() {
        let rows = recurrence_table(10).unwrap();
        let col: Vec<u64> = rows[3..].iter().map(|r| r.t).collect();
        assert_eq!(col, [41, 66, 119, 172, 247, 322, 439]);
        for r in &REFERENCE_TABLE {
            assert_eq!(rows[r.n as usize - 1].t, r.one_vda);
        }
    }

    #[test]
    fn dipterous_six_is_not_fifty() {
        let six = generated_dipterous_six().unwrap();
        assert_ne!(six, 50);
        // T̂(3) + T̂(4) + (tr+pr)(2) + 2 T̂̂(3) + 2, all from published bases
        assert_eq!(six, 22 + 47 + (11 + 12) + 2 * 28 + 2);
        let rows = recurrence_table(6).unwrap();
        assert_eq!(rows[5].t_hathat(), Some(six));
    }

    #[test]
    fn split_recurrence_reproduces_published_bases() {
        let rows = split_recurrence_table(6);
        assert_eq!(
            rows.iter().map(|r| r.t_hat).collect::<Vec<_>>(),
            [1, 8, 22, 47, 79, 132]
        );
        assert_eq!(
            rows[2..].iter().map(|r| r.t_hathat().unwrap()).collect::<Vec<_>>(),
            [28, 60, 92, 150]
        );
        assert_eq!((rows[0].t_hathat_tr, rows[0].t_hathat_pr), (3, 2));
        assert_eq!((rows[1].t_hathat_tr, rows[1].t_hathat_pr), (11, 12));
        assert_eq!(rows[1].t_hathat(), None);
    }

    #[test]
    fn recurrence_tables_agree_beyond_bases() {
        let a = recurrence_table(200).unwrap();
        let b = split_recurrence_table(200);
        assert_eq!(a, b);
    }

    #[test]
    fn closed_forms() {
        let c = closed_form(4).unwrap();
        assert_eq!((c.t, c.t_hat, c.t_hathat), (41, 47, 60));
        let c = closed_form(8).unwrap();
        assert_eq!((c.t, c.t_hathat), (247, 304));
        assert!(closed_form(12).is_err());
        assert!(closed_form(2).is_err());
        let rows = recurrence_table(1 << 10).unwrap();
        for k in 2..=10 {
            let n = 1u64 << k;
            let c = closed_form(n).unwrap();
            let r = &rows[n as usize - 1];
            assert_eq!(
                (c.t, c.t_hat, Some(c.t_hathat)),
                (r.t, r.t_hat, r.t_hathat()),
                "n = {n}"
            );
        }
    }

    #[test]
    fn closed_form_rejects_overflow() {
        assert!(matches!(closed_form(1 << 40), Err(Error::Integrity { .. })));
    }

    #[test]
    fn asymptotics() {
        let fit = asymptotic_check(&[16, 32, 64]).unwrap();
        for &(n, r) in &fit.ratios {
            assert!((r - fit.limit).abs() / fit.limit < 0.05, "n = {n}: {r}");
        }
        assert_eq!(fit.converging, Some(true));
        let fit = asymptotic_check(&[4]).unwrap();
        assert!((fit.ratios[0].1 - 41.0 / 36.0).abs() < 1e-12);
        assert_eq!(fit.converging, None);
        assert!(asymptotic_check(&[]).is_err());
    }

    #[test]
    fn report_flags_known_misprints() {
        let report = discrepancy_report().unwrap();
        let bad: Vec<&str> = report
            .iter()
            .filter(|d| !d.consistent)
            .map(|d| d.item.as_str())
            .collect();
        assert_eq!(
            bad,
            [
                "statement 16: T_hathat(6)",
                "relation 15: E(u1,u3) at p = 1",
                "relation 18: E(l1,l3) at p = 1"
            ]
        );
    }

    #[test]
    fn coefficients() {
        let coeffs = reference_coefficients();
        assert_eq!(coeffs[0].1, Ratio::new(79, 45));
        assert!(coeffs.windows(2).all(|w| w[0].1 > w[1].1));
    }
}
