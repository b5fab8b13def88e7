//! Vertex operator coefficients `v_n` as operators on the vacuum module.
//!
//! Evaluation is always against a concrete state: `field_coeff` recurses on
//! the first PBW factor of `v` through the normal-ordered iterate formula.
//! All mode sums are truncated by explicit degree arithmetic (a coefficient
//! `v_n w` of degree `deg v + deg w - n - 1 < 0` vanishes), and the bounds are
//! asserted where they are used. A second evaluation route rewrites deeper
//! modes through the translation operator; the two routes agreeing exactly is
//! this module's self-oracle.

use num::bigint::BigInt;
use num::One;

use crate::exact::{rat, Rational};
use crate::vacuum::{ModuleCtx, State, VACUUM};

/// Generalized binomial coefficient `binom(m, j)` for any integer `m`.
pub fn binomial(m: i64, j: u64) -> Rational {
    let mut num = BigInt::one();
    for t in 0..j as i64 {
        num *= BigInt::from(m - t);
    }
    let mut den = BigInt::one();
    for t in 1..=j as i64 {
        den *= BigInt::from(t);
    }
    Rational::new(num, den)
}

fn max_degree(ctx: &ModuleCtx, v: &State) -> i64 {
    v.terms()
        .iter()
        .map(|(id, _)| ctx.degree(*id) as i64)
        .max()
        .unwrap_or(0)
}

/// `v_n w` for states `v, w`; linear in both arguments.
pub fn field_coeff(ctx: &ModuleCtx, v: &State, n: i32, w: &State) -> State {
    let mut raw = Vec::new();
    for (id, c) in v.terms() {
        for (j, q) in coeff_mono(ctx, *id, n, w).terms() {
            raw.push((*j, q * c));
        }
    }
    State::from_terms(raw)
}

fn coeff_mono(ctx: &ModuleCtx, v_id: u32, n: i32, w: &State) -> State {
    if v_id == VACUUM {
        return if n == -1 { w.clone() } else { State::zero() };
    }
    if w.is_zero() {
        return State::zero();
    }
    let fs = ctx.factors(v_id);
    let (g, mode) = fs[0];
    let m = -(mode as i64); // m >= 1
    let tail = ctx.intern(&fs[1..]);
    let deg_t = ctx.degree(tail) as i64;
    let deg_w = max_degree(ctx, w);

    let mut raw = Vec::new();
    // Creation half: sum_j binom(m+j-1, j) x(-m-j) (tail_{n+j} w); terms with
    // n + j past deg(tail) + deg(w) - 1 have negative degree and vanish.
    let j_max = deg_t + deg_w - (n as i64) - 1;
    for j in 0..=j_max.max(-1) {
        let inner = coeff_mono(ctx, tail, n + j as i32, w);
        if inner.is_zero() {
            continue;
        }
        let c = binomial(m + j - 1, j as u64);
        for (key, q) in ctx.act(g as usize, (mode as i64 - j) as i32, &inner).terms() {
            raw.push((*key, q * &c));
        }
    }
    debug_assert!(deg_t + deg_w - (j_max + 1 + n as i64) - 1 < 0);
    // Annihilation half: -(-1)^m sum_j binom(m+j-1, j) tail_{n-m-j} (x(j) w);
    // x(j) w = 0 once j exceeds deg(w).
    let sign = if m % 2 == 0 { rat(-1) } else { Rational::one() };
    for j in 0..=deg_w {
        let moved = ctx.act(g as usize, j as i32, w);
        if moved.is_zero() {
            continue;
        }
        let inner = coeff_mono_state(ctx, tail, (n as i64 - m - j) as i32, &moved);
        if inner.is_zero() {
            continue;
        }
        let c = binomial(m + j - 1, j as u64) * &sign;
        for (key, q) in inner.terms() {
            raw.push((*key, q * &c));
        }
    }
    State::from_terms(raw)
}

fn coeff_mono_state(ctx: &ModuleCtx, v_id: u32, n: i32, w: &State) -> State {
    coeff_mono(ctx, v_id, n, w)
}

/// `v_n w` where monomials with first mode below -1 are rewritten through the
/// translation operator: `x(-m) u = (D(x(-m+1) u) - x(-m+1) Du) / (m-1)` and
/// `(D u)_n = -n u_{n-1}`. Inner coefficients use the iterate route, so
/// agreement with `field_coeff` checks the two paths against each other.
pub fn field_coeff_dshift(ctx: &ModuleCtx, v: &State, n: i32, w: &State) -> State {
    let mut acc = State::zero();
    for (id, c) in v.terms() {
        let fs = ctx.factors(*id);
        let part = match fs.first() {
            Some(&(g, mode)) if mode <= -2 => {
                let m = -(mode as i64);
                let tail = ctx.intern(&fs[1..]);
                let tail_state = State::single(tail, Rational::one());
                let shifted = ctx.act(g as usize, mode + 1, &tail_state);
                let shifted_d = ctx.act(g as usize, mode + 1, &ctx.apply_d(&tail_state));
                let t1 = field_coeff(ctx, &shifted, n - 1, w).scaled(&rat(-(n as i64)));
                let t2 = field_coeff(ctx, &shifted_d, n, w);
                t1.add_scaled(&rat(-1), &t2)
                    .scaled(&(Rational::one() / rat(m - 1)))
            }
            _ => coeff_mono(ctx, *id, n, w),
        };
        acc = acc.add_scaled(c, &part);
    }
    acc
}

/// The bracket `[u,v] = sum_{t>=0} (-1)^t D^{(t+1)} (u_t v)`; the sum stops at
/// `deg u + deg v - 1` because later coefficients land in negative degree.
pub fn adjoint_bracket(ctx: &ModuleCtx, u: &State, v: &State) -> State {
    let bound = max_degree(ctx, u) + max_degree(ctx, v);
    let mut raw = Vec::new();
    for t in 0..bound.max(0) {
        let inner = field_coeff(ctx, u, t as i32, v);
        if inner.is_zero() {
            continue;
        }
        let shifted = ctx.apply_d_power_scaled(&inner, t as usize + 1);
        let sign = if t % 2 == 0 { Rational::one() } else { rat(-1) };
        for (key, q) in shifted.terms() {
            raw.push((*key, q * &sign));
        }
    }
    State::from_terms(raw)
}

/// The same bracket computed as `u_{-1} v - v_{-1} u`, an independent route.
pub fn bracket_via_products(ctx: &ModuleCtx, u: &State, v: &State) -> State {
    field_coeff(ctx, u, -1, v).add_scaled(&rat(-1), &field_coeff(ctx, v, -1, u))
}

/// Checks `[x(m), r_n] = sum_i binom(m, i) (x(i) r)_{m+n-i}` as operators on
/// every basis state of degree at most `cutoff`.
pub fn commutator_formula_check(
    ctx: &ModuleCtx,
    x: usize,
    m: i32,
    r: &State,
    n: i32,
    cutoff: usize,
) -> bool {
    let deg_r = max_degree(ctx, r);
    for d in 0..=cutoff {
        let slice = ctx.slice(d);
        for id in &slice.monos {
            let w = State::single(*id, Rational::one());
            let lhs = ctx
                .act(x, m, &field_coeff(ctx, r, n, &w))
                .add_scaled(&rat(-1), &field_coeff(ctx, r, n, &ctx.act(x, m, &w)));
            let mut rhs = State::zero();
            for i in 0..=deg_r {
                let xi_r = ctx.act(x, i as i32, r);
                if xi_r.is_zero() {
                    continue;
                }
                let c = binomial(m as i64, i as u64);
                rhs = rhs.add_scaled(&c, &field_coeff(ctx, &xi_r, m + n - i as i32, &w));
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_algebra, SignConvention};
    use std::sync::Arc;

    fn ctx(name: &str, level: i64) -> ModuleCtx {
        let alg = build_algebra(name.parse().unwrap(), SignConvention::Standard).unwrap();
        ModuleCtx::new(Arc::new(alg), level)
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), rat(6));
        assert_eq!(binomial(0, 0), rat(1));
        assert_eq!(binomial(-1, 3), rat(-1));
        assert_eq!(binomial(-2, 2), rat(3));
    }

    #[test]
    fn vacuum_field_is_identity() {
        let m = ctx("A1", 1);
        let w = m.act(m.alg.e_theta(), -2, &m.vacuum());
        assert_eq!(field_coeff(&m, &m.vacuum(), -1, &w), w);
        assert!(field_coeff(&m, &m.vacuum(), 0, &w).is_zero());
        assert!(field_coeff(&m, &m.vacuum(), -3, &w).is_zero());
    }

    #[test]
    fn generator_states_give_current_modes() {
        // (x(-1) 1)_n w = x(n) w for every n.
        for name in ["A1", "A2"] {
            let m = ctx(name, 1);
            for g in 0..m.alg.dim().min(5) {
                let v = m.act(g, -1, &m.vacuum());
                for d in 0..=2usize {
                    let slice = m.slice(d);
                    for id in slice.monos.iter().take(6) {
                        let w = State::single(*id, Rational::one());
                        for n in -3..=3 {
                            assert_eq!(
                                field_coeff(&m, &v, n, &w),
                                m.act(g, n, &w),
                                "{name} gen {g} mode {n}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn translation_axiom_on_squared_current() {
        // (Dv)_n = -n v_{n-1} for v = x_theta(-1)^2 1, n in -3..=2, all w of
        // degree <= 3.
        let m = ctx("A1", 1);
        let e = m.alg.e_theta();
        let v = m.act(e, -1, &m.act(e, -1, &m.vacuum()));
        let dv = m.apply_d(&v);
        for n in -3..=2 {
            for d in 0..=3usize {
                let slice = m.slice(d);
                for id in &slice.monos {
                    let w = State::single(*id, Rational::one());
                    let lhs = field_coeff(&m, &dv, n, &w);
                    let rhs = field_coeff(&m, &v, n - 1, &w).scaled(&rat(-(n as i64)));
                    assert_eq!(lhs, rhs, "n = {n}, degree {d}");
                }
            }
        }
    }

    #[test]
    fn iterate_and_dshift_paths_agree() {
        // Both evaluation routes on every monomial of degree <= 4 whose head
        // mode is deeper than -1, against targets of degree <= 2.
        for name in ["A1", "A2"] {
            let m = ctx(name, 1);
            let max_v = if name == "A1" { 4 } else { 3 };
            for dv in 2..=max_v {
                let vslice = m.slice(dv);
                for vid in &vslice.monos {
                    if m.factors(*vid)[0].1 >= -1 {
                        continue;
                    }
                    let v = State::single(*vid, Rational::one());
                    for dw in 0..=2usize {
                        let wslice = m.slice(dw);
                        for wid in wslice.monos.iter().step_by(3) {
                            let w = State::single(*wid, Rational::one());
                            for n in -2..=2 {
                                assert_eq!(
                                    field_coeff(&m, &v, n, &w),
                                    field_coeff_dshift(&m, &v, n, &w),
                                    "{name}: v {vid} n {n} w {wid}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bracket_of_generator_states() {
        // [x(-1)1, y(-1)1] = [x,y](-2) 1.
        for name in ["A1", "A2"] {
            let m = ctx(name, 1);
            let dim = m.alg.dim();
            for x in 0..dim.min(4) {
                for y in 0..dim.min(4) {
                    let u = m.act(x, -1, &m.vacuum());
                    let v = m.act(y, -1, &m.vacuum());
                    let got = adjoint_bracket(&m, &u, &v);
                    let bracket = m.alg.chev.bracket_indices(x, y).clone();
                    let expect = m.act_gvec(&bracket, -2, &m.vacuum());
                    assert_eq!(got, expect, "{name} [{x},{y}]");
                }
            }
        }
    }

    #[test]
    fn bracket_antisymmetry_and_self() {
        let m = ctx("A1", 2);
        let e = m.alg.e_theta();
        let f = m.alg.f_theta();
        let u = m.act(e, -1, &m.act(f, -2, &m.vacuum()));
        assert!(adjoint_bracket(&m, &u, &u).is_zero());
        let v = m.act(f, -1, &m.vacuum());
        let ab = adjoint_bracket(&m, &u, &v);
        let ba = adjoint_bracket(&m, &v, &u);
        assert!(ab.add(&ba).is_zero());
    }

    #[test]
    fn bracket_mixed_modes_both_routes() {
        // u = e(-1)1, v = f(-2)1: both expressions evaluate to h(-3)1.
        let m = ctx("A1", 1);
        let e = m.alg.e_theta();
        let f = m.alg.f_theta();
        let h = 0usize;
        let u = m.act(e, -1, &m.vacuum());
        let v = m.act(f, -2, &m.vacuum());
        let got = adjoint_bracket(&m, &u, &v);
        let via_products = bracket_via_products(&m, &u, &v);
        assert_eq!(got, via_products);
        assert_eq!(got, m.act(h, -3, &m.vacuum()));
    }

    #[test]
    fn bracket_two_expressions_agree_on_samples() {
        for name in ["A1", "A2"] {
            let m = ctx(name, 1);
            let mut states = Vec::new();
            for d in 1..=3usize {
                let slice = m.slice(d);
                for id in slice.monos.iter().step_by(5) {
                    states.push(State::single(*id, Rational::one()));
                }
            }
            for u in states.iter().step_by(2) {
                for v in states.iter().step_by(3) {
                    assert_eq!(
                        adjoint_bracket(&m, u, v),
                        bracket_via_products(&m, u, v),
                        "{name}"
                    );
                }
            }
        }
    }

    #[test]
    fn translation_degree_and_zero_modes_are_derivations() {
        // op(u_{-1} v) = (op u)_{-1} v + u_{-1} (op v) for op in {D, L0, y(0)}.
        let m = ctx("A2", 1);
        let mut states = Vec::new();
        for d in 1..=2usize {
            let slice = m.slice(d);
            for id in slice.monos.iter().step_by(7) {
                states.push(State::single(*id, Rational::one()));
            }
        }
        for u in &states {
            for v in &states {
                let prod = field_coeff(&m, u, -1, v);
                let d_lhs = m.apply_d(&prod);
                let d_rhs = field_coeff(&m, &m.apply_d(u), -1, v)
                    .add(&field_coeff(&m, u, -1, &m.apply_d(v)));
                assert_eq!(d_lhs, d_rhs, "D fails");
                let l0_lhs = m.apply_l0(&prod);
                let l0_rhs = field_coeff(&m, &m.apply_l0(u), -1, v)
                    .add(&field_coeff(&m, u, -1, &m.apply_l0(v)));
                assert_eq!(l0_lhs, l0_rhs, "L0 fails");
                for y in [0usize, 3] {
                    let y_lhs = m.act(y, 0, &prod);
                    let y_rhs = field_coeff(&m, &m.act(y, 0, u), -1, v)
                        .add(&field_coeff(&m, u, -1, &m.act(y, 0, v)));
                    assert_eq!(y_lhs, y_rhs, "y(0) fails");
                }
            }
        }
    }

    #[test]
    fn commutator_formula_zero_mode_reduces() {
        // m = 0: [x(0), r_n] = (x(0) r)_n.
        let m = ctx("A1", 1);
        let e = m.alg.e_theta();
        let r = m.act(e, -1, &m.act(e, -1, &m.vacuum()));
        assert!(commutator_formula_check(&m, m.alg.f_theta(), 0, &r, 1, 2));
        assert!(commutator_formula_check(&m, 0, 0, &r, -1, 2));
    }
}
