use std::collections::HashSet;
use std::f64::consts::SQRT_2;

use super::*;
use crate::ensembles::{draw, example_matrix, EnsembleSpec, Family};
use crate::matcore::{CMatrix, C0, CI};
use crate::test_util::{ginibre, rng};

fn cfg() -> EvalConfig {
    EvalConfig::default()
}

fn one(id: &str, inputs: &[CMatrix]) -> BoundReport {
    let mut r = evaluate(id, inputs, &cfg()).unwrap();
    assert_eq!(r.len(), 1, "{id} produced {} rows", r.len());
    r.remove(0)
}

fn assert_invariants(r: &BoundReport) {
    if r.applicable {
        let (lhs, rhs, slack) = (r.lhs.unwrap(), r.rhs.unwrap(), r.slack.unwrap());
        assert_eq!(slack, rhs - lhs);
        assert_eq!(r.holds, slack >= -TOL_CMP * rhs.abs().max(1.0), "{r}");
    } else {
        assert!(r.lhs.is_none() && r.rhs.is_none() && r.slack.is_none());
    }
    assert_eq!(r.inputs_digest.len(), 16);
}

#[test]
fn catalog_shape() {
    let list = catalog_list();
    assert!(list.len() >= 22);
    let ids: HashSet<_> = list.iter().map(|e| e.id).collect();
    assert_eq!(ids.len(), list.len());
    assert_eq!(find_entry("I-MAIN").unwrap().arity, 1);
    assert_eq!(find_entry("I-MUXY").unwrap().arity, 4);
    assert_eq!(find_entry("I-HD-BLOCK").unwrap().arity, 4);
    for e in list {
        assert!(!e.anchor.is_empty());
        assert!(!(e.signed && e.parametrized));
    }
}

#[test]
fn id_parsing() {
    assert_eq!(parse_id("I-COMM-MU+").unwrap().1, Some(Sign::Plus));
    assert_eq!(parse_id("I-COMM-MU-").unwrap().1, Some(Sign::Minus));
    assert_eq!(parse_id("I-COMM-MU±").unwrap().1, None);
    assert_eq!(parse_id("I-COMM-MU").unwrap().0.id, "I-COMM-MU");
    assert!(matches!(parse_id("I-NOPE"), Err(Error::UnknownInequality(_))));
    assert!(parse_id("I-MAIN+").is_err());
}

#[test]
fn arity_mismatch() {
    let a = CMatrix::identity(2);
    assert!(matches!(
        evaluate("I-MU", &[a], &cfg()),
        Err(Error::Arity { expected: 2, got: 1, .. })
    ));
}

#[test]
fn main_on_worked_example() {
    let a = example_matrix("remark22").unwrap();
    let main = one("I-MAIN", std::slice::from_ref(&a));
    let kit = one("I-KIT03", &[a]);
    let norm = ((19.0 + 325f64.sqrt()) / 2.0).sqrt();
    assert!((main.lhs.unwrap() - 3.5).abs() < 1e-9);
    assert!((main.rhs.unwrap() - 0.5 * (norm + 3.0)).abs() < 1e-9);
    assert!((main.detail("r_abs").unwrap() - 9.0).abs() < 1e-9);
    let sq = (59.0 + 10.0 * 34f64.sqrt()).sqrt();
    assert!((kit.rhs.unwrap() - 0.5 * (norm + sq.sqrt())).abs() < 1e-9);
    assert!(main.rhs.unwrap() < kit.rhs.unwrap());
    assert!(main.holds && kit.holds);
    assert_invariants(&main);
}

#[test]
fn comm_mu_equality_on_nilpotent_pair() {
    let a = CMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
    let b = CMatrix::from_real_rows(&[[0.0, 0.0], [1.0, 0.0]]);
    let rows = evaluate("I-COMM-MU", &[a, b], &cfg()).unwrap();
    assert_eq!(rows.len(), 2);
    for r in &rows {
        // AB + BA = I and AB - BA = diag(1, -1): both have radius 1.
        assert!((r.lhs.unwrap() - 1.0).abs() < 1e-12, "{r}");
        assert!((r.rhs.unwrap() - 1.0).abs() < 1e-12, "{r}");
        assert!(r.holds);
    }
    assert_eq!(rows[0].sign, "+");
    assert_eq!(rows[1].sign, "-");
}

#[test]
fn identity_everything_holds() {
    let i = CMatrix::identity(3);
    for e in catalog_list() {
        let inputs = vec![i.clone(); e.arity];
        for r in evaluate(e.id, &inputs, &cfg()).unwrap() {
            assert_invariants(&r);
            assert!(r.holds, "{r}");
        }
    }
    let eqv = one("I-EQV", &[i]);
    // w(I) = ||I|| makes the upper link tight.
    assert!(eqv.slack.unwrap().abs() < 1e-12);
}

#[test]
fn mu_examples() {
    let i = CMatrix::identity(2);
    assert!((mu(&i, &i).unwrap() - 2.0).abs() < 1e-14);
    let a = example_matrix("remark22").unwrap();
    let norm2 = (19.0 + 325f64.sqrt()) / 2.0;
    let expected = norm2 + (59.0 + 10.0 * 34f64.sqrt()).sqrt();
    assert!((mu(&a, &a).unwrap() - expected).abs() < 1e-10);
    assert!((mu(&a, &CMatrix::zeros(2)).unwrap() - norm2).abs() < 1e-10);
    assert!(mu(&a, &CMatrix::identity(3)).is_err());
}

#[test]
fn non_intertwined_pair_is_not_applicable() {
    let mut g = rng(3);
    let (a, b) = (ginibre(&mut g, 3), ginibre(&mut g, 3));
    for id in ["I-GEN-FG", "I-PROD", "I-ALOMARI"] {
        for r in evaluate(id, &[a.clone(), b.clone()], &cfg()).unwrap() {
            assert!(!r.applicable);
            assert!(r.detail("intertwining_residual").unwrap() > 1e-3);
            assert!(r.details["reason"].as_str().unwrap().contains("|A|B"));
            assert_invariants(&r);
        }
    }
    let r = one("I-KSUM", &[a, b]);
    assert!(!r.applicable);
}

#[test]
fn gen_fg_half_matches_prod_first_link() {
    let spec = EnsembleSpec::new(Family::IntertwinedPair, 4, 11);
    for t in 0..10 {
        let inputs = draw(&spec, t).unwrap();
        let fg = evaluate_variant("I-GEN-FG", Variant::Power(0.5), &inputs, &cfg()).unwrap();
        let prod = one("I-PROD", &inputs);
        let (_, mid) = prod.links()[0];
        assert!(fg.applicable && prod.applicable);
        assert!((fg.rhs.unwrap() - mid).abs() <= 1e-8 * mid.max(1.0), "{fg} vs {mid}");
    }
}

#[test]
fn chains_report_worst_link() {
    let mut g = rng(8);
    for _ in 0..5 {
        let a = ginibre(&mut g, 4);
        for id in ["I-EQV", "I-KIT05", "I-BP-CHAIN", "I-MAIN-DOM"] {
            let r = one(id, std::slice::from_ref(&a));
            let links = r.links();
            assert_eq!(links.len(), find_entry(id).unwrap().links);
            for w in links.windows(2) {
                assert_eq!(w[0].1, w[1].0, "{id} links must compose");
            }
            let worst = links
                .iter()
                .map(|(l, h)| (h - l) / h.abs().max(1.0))
                .fold(f64::INFINITY, f64::min);
            assert!((r.normalized_slack().unwrap() - worst).abs() < 1e-15);
            assert!(r.holds, "{r}");
        }
    }
}

#[test]
fn block_norm_bound() {
    let z = CMatrix::zeros(2);
    let a = CMatrix::diag(&[CI, C0]);
    let r = one("I-HD-BLOCK", &[a.clone(), z.clone(), z, a]);
    assert!((r.lhs.unwrap() - 1.0).abs() < 1e-12);
    assert!((r.rhs.unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn ksum_on_psd_pair() {
    let p = CMatrix::diag_real(&[1.0, 0.0]);
    let q = CMatrix::diag_real(&[0.0, 1.0]);
    // Orthogonal supports: ||P + Q|| = 1 = max + 0.
    let r = one("I-KSUM", &[p.clone(), q]);
    assert!(r.applicable && r.holds);
    assert!(r.slack.unwrap().abs() < 1e-12);
    let r = one("I-KSUM", &[p.clone(), p.scale_real(-1.0)]);
    assert!(!r.applicable);
    assert!(r.details["reason"].as_str().unwrap().contains("not PSD"));
}

#[test]
fn fh_commutator_gap_on_nilpotents() {
    let a = CMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
    let b = CMatrix::from_real_rows(&[[0.0, 0.0], [1.0, 0.0]]);
    for r in evaluate("I-FH", &[a, b], &cfg()).unwrap() {
        // 2 sqrt2 ||B|| w(A) = sqrt2 against w = 1.
        assert!((r.rhs.unwrap() - SQRT_2).abs() < 1e-12);
    }
}

#[test]
fn implication_examples() {
    let nil = CMatrix::from_real_rows(&[[0.0, 2.0], [0.0, 0.0]]);
    let r = check_implication(ImplicationId::RankZeroHalfNorm, &[nil], &cfg()).unwrap();
    assert!(r.hypothesis_holds && r.conclusion_holds);

    let ex = example_matrix("remark_ex").unwrap();
    let r = check_implication(ImplicationId::RankZeroHalfNorm, std::slice::from_ref(&ex), &cfg()).unwrap();
    assert!(!r.hypothesis_holds && r.conclusion_holds);
    let r = check_implication(ImplicationId::SquareNormEquality, &[ex], &cfg()).unwrap();
    assert!(!r.hypothesis_holds && r.conclusion_holds);
    assert!(r.consistent());

    let spec = EnsembleSpec::new(Family::AlphaOplusB, 4, 5);
    for t in 0..5 {
        let a = draw(&spec, t).unwrap();
        let r = check_implication(ImplicationId::MainEquality, &a, &cfg()).unwrap();
        assert!(r.hypothesis_holds && r.conclusion_holds, "{r:?}");
    }

    assert_eq!("c3.4".parse::<ImplicationId>().unwrap(), ImplicationId::CommutatorEquality);
    assert!("C9.9".parse::<ImplicationId>().is_err());
}

#[test]
fn commutator_equality_surrogate() {
    // A = diag(1, -1) has 0 inside both W(Re A) = [-1, 1] and W(Im A) = {0}.
    let a = CMatrix::diag_real(&[1.0, -1.0]);
    let b = CMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
    let r = check_implication(ImplicationId::CommutatorEquality, &[a, b], &cfg()).unwrap();
    assert!(r.conclusion_holds);
    assert!(r.consistent());
}

#[test]
fn digest_is_order_sensitive() {
    let a = CMatrix::identity(2);
    let b = CMatrix::zeros(2);
    assert_ne!(
        inputs_digest(&[a.clone(), b.clone()]),
        inputs_digest(&[b, a.clone()])
    );
    assert_eq!(inputs_digest(std::slice::from_ref(&a)), inputs_digest(&[a]));
}

#[test]
fn report_json_shape() {
    let a = example_matrix("remark22").unwrap();
    let r = one("I-MAIN", &[a]);
    let v = serde_json::to_value(&r).unwrap();
    for key in ["id", "sign", "lhs", "rhs", "slack", "holds", "applicable", "details", "inputs_digest"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["sign"], "n/a");
    let back: BoundReport = serde_json::from_value(v).unwrap();
    assert_eq!(back, r);
}
