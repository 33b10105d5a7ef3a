use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use serde::Serialize;
use serde_json::{json, Value};

use super::facts::{hermitian_norm, link, Evaluator, Outcome};
use super::{mu_from_norms, Sign, Variant};
use crate::matcore::{block2, op_norm, power_psd, sqrt_psd, CMatrix};
use crate::quantities::alpha_min_bound_with;

type EvalFn = fn(&Evaluator<'_>, Variant) -> Outcome;

/// A catalog row: one displayed inequality, identity or chain.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub arity: usize,
    /// Input names in positional order.
    pub inputs: &'static str,
    pub statement: &'static str,
    pub precondition: &'static str,
    /// Verbatim fragment of the displayed formula.
    pub anchor: &'static str,
    /// Evaluated for both `+` and `-`.
    pub signed: bool,
    /// Evaluated once per power exponent `s`.
    pub parametrized: bool,
    /// Number of links (1 for a plain inequality).
    pub links: usize,
    #[serde(skip)]
    pub(crate) eval: EvalFn,
}

macro_rules! entry {
    ($id:literal, $arity:literal, $inputs:literal, $stmt:literal, $pre:literal, $anchor:literal,
     signed: $signed:literal, param: $param:literal, links: $links:literal, $eval:expr) => {
        CatalogEntry {
            id: $id,
            arity: $arity,
            inputs: $inputs,
            statement: $stmt,
            precondition: $pre,
            anchor: $anchor,
            signed: $signed,
            parametrized: $param,
            links: $links,
            eval: $eval,
        }
    };
}

static CATALOG: [CatalogEntry; 24] = [
    entry!("I-EQV", 1, "A", "||A||/2 <= w(A) <= ||A||", "none",
        r"$\frac{1}{2}\|A\|\leq w(A)\leq \|A\|$",
        signed: false, param: false, links: 2, eqv),
    entry!("I-KIT05", 1, "A", "||A*A + AA*||/4 <= w^2(A) <= ||A*A + AA*||/2", "none",
        r"$\frac{1}{4}\left \|A^*A+AA^*\right \|$",
        signed: false, param: false, links: 2, kit05),
    entry!("I-KIT03", 1, "A", "w(A) <= (||A|| + sqrt||A^2||)/2", "none",
        r"$\frac{1}{2}\left(\|A\|+\sqrt{\|A^2\|}\right)$",
        signed: false, param: false, links: 1, kit03),
    entry!("I-BP-ALPHA", 1, "A", "w^2(A) <= min_{0<=a<=1} ||a|A|^2 + (1-a)|A*|^2||", "none",
        r"$\min_{0\leq \alpha \leq 1}$",
        signed: false, param: false, links: 1, bp_alpha),
    entry!("I-BP-CHAIN", 1, "A",
        "||A*A + AA*||/4 <= (||A+A*||^2 + ||A-A*||^2)/8 <= ... + (c^2(A+A*) + c^2(A-A*))/8 <= w^2(A)",
        "none", r"$\frac{1}{8}c^2\big(A+A^*\big)$",
        signed: false, param: false, links: 3, bp_chain),
    entry!("I-MAIN", 1, "A", "w(A) <= (||A|| + sqrt r(|A||A*|))/2", "none",
        r"$\|A\|+\sqrt{r\left(|A||A^*|\right)}$",
        signed: false, param: false, links: 1, main_bound),
    entry!("I-MAIN-DOM", 1, "A", "r(|A||A*|) <= w(|A||A*|) <= ||A^2||", "none",
        r"$r\left(|A||A^*|\right)\leq w\left(|A||A^*|\right)$",
        signed: false, param: false, links: 2, main_dom),
    entry!("I-KSUM", 2, "A, B", "||A + B|| <= max(||A||, ||B||) + ||A^(1/2) B^(1/2)||",
        "A and B positive semidefinite",
        r"$\max\{\|A\|, \|B\|  \}+\left\|A^{1/2}B^{1/2}\right\|$",
        signed: false, param: false, links: 1, ksum),
    entry!("I-GEN-FG", 2, "A, B",
        "w(AB) <= r(B)/2 (max(||f(|A|)||^2, ||g(|A*|)||^2) + ||f(|A|) g(|A*|)||), f = t^s, g = t^(1-s)",
        "|A|B = B*|A|",
        r"$\max \left\{ \|f(|A|)\|^2, \|g(|A^*|)\|^2 \right\}$",
        signed: false, param: true, links: 1, gen_fg),
    entry!("I-PROD", 2, "A, B",
        "w(AB) <= r(B)/2 (||A|| + sqrt r(|A||A*|)) <= (||B|| + sqrt r(|B||B*|))(||A|| + sqrt r(|A||A*|))/4",
        "|A|B = B*|A|",
        r"$\frac{r(B)}{2}\left( \|A\|+ \sqrt{r\left(|A||A^*|\right)} \right)$",
        signed: false, param: false, links: 2, prod),
    entry!("I-ALOMARI", 2, "A, B", "w(AB) <= (||B|| + sqrt||B^2||)(||A|| + sqrt||A^2||)/4",
        "|A|B = B*|A|",
        r"$\frac{1}{4}\left(\|B\|+\sqrt{\|B^2\|} \right)$",
        signed: false, param: false, links: 1, alomari),
    entry!("I-BP-SELF", 1, "A", "||AA* + A*A|| <= 4 (w^2(A) - (c^2(Re A) + c^2(Im A))/2)", "none",
        r"$\frac{c^2(\Re (A))+c^2(\Im (A))}{2}$",
        signed: false, param: false, links: 1, bp_self),
    entry!("I-AXB", 4, "A, B, X, Y",
        "w(AXB +- BYA) <= 2 sqrt2 ||B|| max(||X||, ||Y||) sqrt(w^2(A) - (c^2(Re A) + c^2(Im A))/2)",
        "none", r"$w(AXB \pm BYA)$",
        signed: true, param: false, links: 1, axb),
    entry!("I-FH", 2, "A, B", "w(AB +- BA) <= 2 sqrt2 ||B|| w(A)", "none",
        r"$2\sqrt{2} \|B\| w(A)$",
        signed: true, param: false, links: 1, fh),
    entry!("I-HK", 2, "A, B",
        "w(AB +- BA) <= 2 sqrt2 ||B|| sqrt(w^2(A) - | ||Re A||^2 - ||Im A||^2 |/2)", "none",
        r"$\|\Re (A)\|^2-\|\Im (A)\|^2$",
        signed: true, param: false, links: 1, hk),
    entry!("I-COMM-A", 2, "A, B",
        "w(AB +- BA) <= 2 sqrt2 ||B|| sqrt(w^2(A) - (c^2(Re A) + c^2(Im A))/2)", "none",
        r"$2\sqrt{2} \|B\| \sqrt{ w^2(A)-\frac{c^2(\Re (A))+c^2(\Im (A))}{2} }$",
        signed: true, param: false, links: 1, comm_a),
    entry!("I-COMM-B", 2, "A, B",
        "w(AB +- BA) <= 2 sqrt2 ||A|| sqrt(w^2(B) - (c^2(Re B) + c^2(Im B))/2)", "none",
        r"$2\sqrt{2} \|A\| \sqrt{ w^2(B)-\frac{c^2(\Re (B))+c^2(\Im (B))}{2} }$",
        signed: true, param: false, links: 1, comm_b),
    entry!("I-OK", 4, "A, B, X, Y", "w^2(AX +- BY) <= ||AA* + Y*Y|| ||X*X + BB*||", "none",
        r"$\|AA^*+Y^*Y\| ~~\|X^*X+BB^*\|$",
        signed: true, param: false, links: 1, ok),
    entry!("I-HD-BLOCK", 4, "A, X, Y, B", "||[[A, X], [Y, B]]|| <= ||[[||A||, ||X||], [||Y||, ||B||]]||",
        "none", r"$\left\| \left(\begin{array}{cc} \|A\| & \|X\|",
        signed: false, param: false, links: 1, hd_block),
    entry!("I-MU", 2, "A, B", "||AA* + B*B|| <= mu(A, B)", "none",
        r"$\|AA^*+B^*B\|\leq \mu(A,B)$",
        signed: false, param: false, links: 1, mu_entry),
    entry!("I-MU-MAX", 2, "A, B", "mu(A, B) <= max(||A||^2, ||B||^2) + ||BA||", "none",
        r"$\mu(A,B)\leq \max\{ \|A\|^2, \|B\|^2\}+\|BA\|$",
        signed: false, param: false, links: 1, mu_max),
    entry!("I-SELFMU", 1, "A", "||AA* + A*A|| <= ||A||^2 + ||A^2||", "none",
        r"$\|AA^*+A^*A\|\leq \|A\|^2+\|A^2\|$",
        signed: false, param: false, links: 1, selfmu),
    entry!("I-MUXY", 4, "A, B, X, Y", "w(AX +- BY) <= sqrt(mu(A, Y) mu(B, X))", "none",
        r"$\sqrt{\mu(A,Y)~~\mu(B,X)}$",
        signed: true, param: false, links: 1, muxy),
    entry!("I-COMM-MU", 2, "A, B", "w(AB +- BA) <= sqrt((||A||^2 + ||A^2||)(||B||^2 + ||B^2||))",
        "none", r"$\left(\|A\|^2+\|A^2\|\right) \left(\|B\|^2+\|B^2\|\right)$",
        signed: true, param: false, links: 1, comm_mu),
];

/// All entries in a stable order.
pub fn catalog_list() -> &'static [CatalogEntry] {
    &CATALOG
}

pub fn find_entry(id: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.id.eq_ignore_ascii_case(id))
}

const TWO_SQRT2: f64 = 2.0 * SQRT_2;

fn no_details() -> BTreeMap<String, Value> {
    BTreeMap::new()
}

fn single(lhs: f64, rhs: f64) -> Outcome {
    Outcome::Links(vec![link(lhs, rhs)], no_details())
}

fn sign_of(v: Variant) -> Sign {
    match v {
        Variant::Signed(s) => s,
        _ => Sign::Plus,
    }
}

/// `AB +- BA`.
pub(crate) fn anticommutator(a: &CMatrix, b: &CMatrix, sign: Sign) -> CMatrix {
    sign.apply(&(a * b), &(b * a))
}

fn eqv(ev: &Evaluator<'_>, _: Variant) -> Outcome {
    let (n, w) = (ev.norm(0), ev.w(0));
    let mut d = no_details();
    d.insert("theta_star".into(), json!(ev.w_result(0).theta_star));
    Outcome::Links(vec![link(0.5 * n, w), link(w, n)], d)
}

fn kit05(ev: &Evaluator<'_>, _: Variant) -> Outcome {
    let s = ev.gram_sum_norm(0);
    let w2 = ev.w(0).powi(2);
    Outcome::Links(vec![link(0.25 * s, w2), link(w2, 0.5 * s)], no_details())
}

fn kit03(ev: &Evaluator<'_>, _: Variant) -> Outcome {
    single(ev.w(0), 0.5 * (ev.norm(0) + ev.sq_norm(0).sqrt()))
}

fn bp_alpha(ev: &Evaluator<'_>, _: Variant) -> Outcome {
    let bound = alpha_min_bound_with(ev.input(0), &ev.cfg.search);
    let mut d = no_details();
    d.insert("alpha_star".into(), json!(bound.alpha_star));
    Outcome::Links(vec![link(ev.w(0).powi(2), bound.value)], d)
}

fn bp_chain(ev: &Evaluator<'_>, _: Variant) -> Outcome {
    let c = ev.cartesian(0);
    // A + A* = 2 Re A and A - A* = 2i Im A.
    let (n_plus, n_minus) = (2.0 * c.norm_re, 2.0 * c.norm_im);
    let (c_plus, c_minus) = (2.0 * c.c_re, 2.0 * c.c_im);
    let t1 = 0.25 * ev.gram_sum_norm(0);
    let t2 = (n_plus * n_plus + n_minus * n_minus) / 8.0;
    let t3 = t2 + (c_plus * c_plus + c_minus * c_minus) / 8.0;
    let t4 = ev.w(0).powi(2);
    let mut d = no_details();
    d.insert("c_re".into(), json!(c.c_re));
    d.insert("c_im".into(), json!(c.c_im));
    Outcome::Links(vec![link(t1, t2), link(t2, t3), link(t3, t4)], d)
}

fn main_bound(ev: &Evaluator<'_>, _: Variant) -> Outcome {
    let routes = ev.r_abs_routes(0);
    let mut d = no_details();
    d.insert("r_abs".into(), json!(routes.value));
    d.insert("r_abs_route_discrepancy".into(), json!(routes.discrepancy()));
    d.insert("theta_star".into(), json!(ev.w_result(0).theta_star));
    let rhs = 0.5 * (ev.norm(0) + routes.value.sqrt());
    Outcome::Links(vec![link(ev.w(0), rhs)], d)
}

fn main_dom(ev: &Evaluator<'_>, _: Variant) -> Outcome {
    let (p, q) = ev.abs(0);
    let wp = ev.w_of(&(p * q));
    Outcome::Links(
        vec![link(ev.r_abs(0), wp), link(wp, ev.sq_norm(0))],
        no_details(),
    )
}

fn ksum(ev: &Evaluator<'_>, _: Variant) -> Outcome {
    for i in 0..2 {
        if let Err(reason) = ev.psd(i) {
            return Outcome::NotApplicable(reason, no_details());
        }
    }
    let (a, b) = (ev.input(0).symmetrized(), ev.input(1).symmetrized());
    let lhs = hermitian_norm(&(&a + &b));
    let ha = sqrt_psd(&a).expect("checked PSD");
    let hb = sqrt_psd(&b).expect("checked PSD");
    let rhs = ev.norm(0).max(ev.norm(1)) + op_norm(&(&ha * &hb));
    single(lhs, rhs)
}

/// Checks `|A|B = B*|A|` on inputs 0 and 1.
fn intertwined(ev: &Evaluator<'_>) -> Result<BTreeMap<String, Value>, Outcome> {
    let b = ev.input(1);
    let (abs_a, _) = ev.abs(0);
    let residual = (&(abs_a * b) - &(&b.adjoint() * abs_a)).frobenius_norm();
    let limit = ev.cfg.intertwine_tol * (1.0 + ev.norm(0) * ev.norm(1));
    let mut d = no_details();
    d.insert("intertwining_residual".into(), json!(residual));
    if residual <= limit {
        Ok(d)
    } else {
        let reason = format!("|A|B != B*|A|: residual {residual:e} exceeds {limit:e}");
        Err(Outcome::NotApplicable(reason, d))
    }
}

fn gen_fg(ev: &Evaluator<'_>, v: Variant) -> Outcome {
    let s = match v {
        Variant::Power(s) => s,
        _ => 0.5,
    };
    let mut d = match intertwined(ev) {
        Ok(d) => d,
        Err(o) => return o,
    };
    let (abs_a, abs_astar) = ev.abs(0);
    let f = match power_psd(abs_a, s) {
        Ok(f) => f,
        Err(e) => return Outcome::NotApplicable(e.to_string(), d),
    };
    let g = match power_psd(abs_astar, 1.0 - s) {
        Ok(g) => g,
        Err(e) => return Outcome::NotApplicable(e.to_string(), d),
    };
    let nf = hermitian_norm(&f);
    let ng = hermitian_norm(&g);
    let r_b = ev.spectral(1);
    let rhs = 0.5 * r_b * ((nf * nf).max(ng * ng) + op_norm(&(&f * &g)));
    let lhs = ev.w_of(&(ev.input(0) * ev.input(1)));
    d.insert("r_b".into(), json!(r_b));
    Outcome::Links(vec![link(lhs, rhs)], d)
}

fn prod(ev: &Evaluator<'_>, _: Variant) -> Outcome {
    let mut d = match intertwined(ev) {
        Ok(d) => d,
        Err(o) => return o,
    };
    let lhs = ev.w_of(&(ev.input(0) * ev.input(1)));
    let fa = ev.norm(0) + ev.r_abs(0).sqrt();
    let fb = ev.norm(1) + ev.r_abs(1).sqrt();
    let r_b = ev.spectral(1);
    let mid = 0.5 * r_b * fa;
    d.insert("r_b".into(), json!(r_b));
    Outcome::Links(vec![link(lhs, mid), link(mid, 0.25 * fb * fa)], d)
}

fn alomari(ev: &Evaluator<'_>, _: Variant) -> Outcome {
    let d = match intertwined(ev) {
        Ok(d) => d,
        Err(o) => return o,
    };
    let lhs = ev.w_of(&(ev.input(0) * ev.input(1)));
    let rhs = 0.25 * (ev.norm(1) + ev.sq_norm(1).sqrt()) * (ev.norm(0) + ev.sq_norm(0).sqrt());
    Outcome::Links(vec![link(lhs, rhs)], d)
}

fn bp_self(ev: &Evaluator<'_>, _: Variant) -> Outcome {
    single(ev.gram_sum_norm(0), 4.0 * ev.refined_w2(0))
}

fn axb(ev: &Evaluator<'_>, v: Variant) -> Outcome {
    let (a, b, x, y) = (ev.input(0), ev.input(1), ev.input(2), ev.input(3));
    let m = sign_of(v).apply(&(&(a * x) * b), &(&(b * y) * a));
    let rhs = TWO_SQRT2 * ev.norm(1) * ev.norm(2).max(ev.norm(3)) * ev.refined_w2(0).sqrt();
    single(ev.w_of(&m), rhs)
}

fn fh(ev: &Evaluator<'_>, v: Variant) -> Outcome {
    let lhs = ev.w_of(&anticommutator(ev.input(0), ev.input(1), sign_of(v)));
    single(lhs, TWO_SQRT2 * ev.norm(1) * ev.w(0))
}

fn hk(ev: &Evaluator<'_>, v: Variant) -> Outcome {
    let lhs = ev.w_of(&anticommutator(ev.input(0), ev.input(1), sign_of(v)));
    let c = ev.cartesian(0);
    let gap = (c.norm_re * c.norm_re - c.norm_im * c.norm_im).abs();
    let inner = (ev.w(0).powi(2) - 0.5 * gap).max(0.0);
    single(lhs, TWO_SQRT2 * ev.norm(1) * inner.sqrt())
}

fn comm_a(ev: &Evaluator<'_>, v: Variant) -> Outcome {
    let lhs = ev.w_of(&anticommutator(ev.input(0), ev.input(1), sign_of(v)));
    single(lhs, TWO_SQRT2 * ev.norm(1) * ev.refined_w2(0).sqrt())
}

fn comm_b(ev: &Evaluator<'_>, v: Variant) -> Outcome {
    let lhs = ev.w_of(&anticommutator(ev.input(0), ev.input(1), sign_of(v)));
    single(lhs, TWO_SQRT2 * ev.norm(0) * ev.refined_w2(1).sqrt())
}

fn ok(ev: &Evaluator<'_>, v: Variant) -> Outcome {
    let (a, b, x, y) = (ev.input(0), ev.input(1), ev.input(2), ev.input(3));
    let m = sign_of(v).apply(&(a * x), &(b * y));
    let left = hermitian_norm(&(&(a * &a.adjoint()) + &(&y.adjoint() * y)));
    let right = hermitian_norm(&(&(&x.adjoint() * x) + &(b * &b.adjoint())));
    single(ev.w_of(&m).powi(2), left * right)
}

fn hd_block(ev: &Evaluator<'_>, _: Variant) -> Outcome {
    let (a, x, y, b) = (ev.input(0), ev.input(1), ev.input(2), ev.input(3));
    let block = block2(a, x, y, b).expect("equal dimensions");
    let norms = CMatrix::from_real_rows(&[[ev.norm(0), ev.norm(1)], [ev.norm(2), ev.norm(3)]]);
    single(op_norm(&block), op_norm(&norms))
}

fn mu_of(ev: &Evaluator<'_>, i: usize, j: usize) -> f64 {
    let ba = ev.input(j) * ev.input(i);
    mu_from_norms(ev.norm(i), ev.norm(j), ev.norm_of(&ba))
}

fn mu_entry(ev: &Evaluator<'_>, _: Variant) -> Outcome {
    let (a, b) = (ev.input(0), ev.input(1));
    let lhs = hermitian_norm(&(&(a * &a.adjoint()) + &(&b.adjoint() * b)));
    single(lhs, mu_of(ev, 0, 1))
}

fn mu_max(ev: &Evaluator<'_>, _: Variant) -> Outcome {
    let nba = ev.norm_of(&(ev.input(1) * ev.input(0)));
    let rhs = ev.norm(0).powi(2).max(ev.norm(1).powi(2)) + nba;
    single(mu_of(ev, 0, 1), rhs)
}

fn selfmu(ev: &Evaluator<'_>, _: Variant) -> Outcome {
    single(ev.gram_sum_norm(0), ev.norm(0).powi(2) + ev.sq_norm(0))
}

fn muxy(ev: &Evaluator<'_>, v: Variant) -> Outcome {
    let (a, b, x, y) = (ev.input(0), ev.input(1), ev.input(2), ev.input(3));
    let m = sign_of(v).apply(&(a * x), &(b * y));
    let (mu_ay, mu_bx) = (mu_of(ev, 0, 3), mu_of(ev, 1, 2));
    let mut d = no_details();
    d.insert("mu_ay".into(), json!(mu_ay));
    d.insert("mu_bx".into(), json!(mu_bx));
    Outcome::Links(vec![link(ev.w_of(&m), (mu_ay * mu_bx).sqrt())], d)
}

fn comm_mu(ev: &Evaluator<'_>, v: Variant) -> Outcome {
    let lhs = ev.w_of(&anticommutator(ev.input(0), ev.input(1), sign_of(v)));
    let fa = ev.norm(0).powi(2) + ev.sq_norm(0);
    let fb = ev.norm(1).powi(2) + ev.sq_norm(1);
    single(lhs, (fa * fb).sqrt())
}
