//! The maps between `W (x) V`, the induced module and `V`, the induced-module
//! operator actions, and the diagram-automorphism transport.

use num::{One, Zero};
use std::sync::Arc;

use crate::exact::{rat, Rational};
use crate::lie::BasisAutomorphism;
use crate::vacuum::{MonoId, State, VACUUM};
use crate::vertex::{adjoint_bracket, field_coeff};

use super::{InducedVec, RelCtx, TensorVec};

impl RelCtx {
    /// The induction map: `u (x) w -> u w`, acting factor by factor.
    pub fn psi(&self, v: &InducedVec) -> State {
        let mut raw = Vec::new();
        for ((u, wf), c) in v.items() {
            for (j, q) in self.psi_key_arc(*u, *wf).terms() {
                raw.push((*j, q * c));
            }
        }
        State::from_terms(raw)
    }

    /// The normal-order product map: `w (x) v -> w_{-1} v`.
    pub fn phi(&self, t: &TensorVec) -> State {
        let mut raw = Vec::new();
        for ((wf, u), c) in t.items() {
            let w = self.w_state(*wf);
            let v = State::single(*u, Rational::one());
            for (j, q) in field_coeff(&self.module, &w, -1, &v).terms() {
                raw.push((*j, q * c));
            }
        }
        State::from_terms(raw)
    }

    /// `[g(n) 1, w]` under the state bracket, expressed in the W basis.
    /// Requires `n < 0`; W is stable because it is invariant under the
    /// nonnegative modes and the translation operator.
    pub(crate) fn bracket_w(&self, g: u16, n: i32, wf: u32) -> Arc<Vec<(u32, Rational)>> {
        assert!(n < 0);
        if let Some(hit) = self.bracket_w_memo.read().unwrap().get(&(g, n, wf)) {
            return hit.clone();
        }
        let u = self.module.act(g as usize, n, &self.module.vacuum());
        let w = self.w_state(wf);
        let b = adjoint_bracket(&self.module, &u, &w);
        let coords = self.w_coords(&b).unwrap_or_else(|| {
            panic!(
                "bracket must stay inside W: g={} n={} wf={} deg(b)={:?} b={}",
                g, n, wf, self.module.state_degree(&b), self.module.format_state(&b)
            )
        });
        self.bracket_w_memo
            .write()
            .unwrap()
            .entry((g, n, wf))
            .or_insert_with(|| Arc::new(coords))
            .clone()
    }

    /// `x(m) w` for `m >= 0`, expressed in the W basis.
    pub(crate) fn w_act(&self, g: u16, m: i32, wf: u32) -> Arc<Vec<(u32, Rational)>> {
        assert!(m >= 0);
        if let Some(hit) = self.w_act_memo.read().unwrap().get(&(g, m, wf)) {
            return hit.clone();
        }
        let moved = self.module.act(g as usize, m, &self.w_state(wf));
        let (height, _) = self.w_split(wf);
        let coords = if moved.is_zero() {
            Vec::new()
        } else {
            assert!(height >= m as usize, "positive mode dropped below the R degree");
            self.w_coords(&moved).expect("W is stable under nonnegative modes")
        };
        self.w_act_memo
            .write()
            .unwrap()
            .entry((g, m, wf))
            .or_insert_with(|| Arc::new(coords))
            .clone()
    }

    /// The intertwiner `W_ad (x) V -> induced module`: peels the leading PBW
    /// factor of the V side through
    /// `Xi(w (x) x_{-1} u) = x_{-1} Xi(w (x) u) - Xi([x,w] (x) u)`.
    pub fn xi(&self, t: &TensorVec) -> InducedVec {
        let mut raw = Vec::new();
        for ((wf, u), c) in t.items() {
            for (key, q) in self.xi_basis(*wf, *u).items() {
                raw.push((*key, q * c));
            }
        }
        InducedVec::from_raw(raw)
    }

    fn xi_basis(&self, wf: u32, v: MonoId) -> Arc<InducedVec> {
        if v == VACUUM {
            return Arc::new(InducedVec::single((VACUUM, wf), Rational::one()));
        }
        if let Some(hit) = self.xi_memo.read().unwrap().get(&(wf, v)) {
            return hit.clone();
        }
        let fs = self.module.factors(v);
        let (g, n) = fs[0];
        let tail = self.module.intern(&fs[1..]);
        let term1 = self.left_mul_u(g, n, &self.xi_basis(wf, tail));
        let mut out = term1;
        for (wf2, c) in self.bracket_w(g, n, wf).iter() {
            out = out.add_scaled(&(-c.clone()), &self.xi_basis(*wf2, tail));
        }
        self.xi_memo
            .write()
            .unwrap()
            .entry((wf, v))
            .or_insert_with(|| Arc::new(out))
            .clone()
    }

    /// Left multiplication by `g(n)`, `n < 0`, on the PBW side of the induced
    /// module. Straightening inside the negative-mode algebra coincides with
    /// the vacuum-module action, so it is reused term by term.
    pub(crate) fn left_mul_u(&self, g: u16, n: i32, v: &InducedVec) -> InducedVec {
        assert!(n < 0);
        let mut raw = Vec::new();
        for ((u, wf), c) in v.items() {
            let moved = self
                .module
                .act(g as usize, n, &State::single(*u, Rational::one()));
            for (u2, c2) in moved.terms() {
                raw.push(((*u2, *wf), c * c2));
            }
        }
        InducedVec::from_raw(raw)
    }

    /// Inverse of the intertwiner, peeling the leading factor of the induced
    /// side: `Xi^{-1}(x_{-1} N) = (1 (x) x_{-1}) Xi^{-1}(N) + ([x,.] (x) 1) Xi^{-1}(N)`.
    pub fn xi_inverse(&self, v: &InducedVec) -> TensorVec {
        let mut raw = Vec::new();
        for ((u, wf), c) in v.items() {
            for (key, q) in self.xi_inverse_basis(*u, *wf).items() {
                raw.push((*key, q * c));
            }
        }
        TensorVec::from_raw(raw)
    }

    fn xi_inverse_basis(&self, u: MonoId, wf: u32) -> Arc<TensorVec> {
        if u == VACUUM {
            return Arc::new(TensorVec::single((wf, VACUUM), Rational::one()));
        }
        if let Some(hit) = self.xi_inv_memo.read().unwrap().get(&(u, wf)) {
            return hit.clone();
        }
        let fs = self.module.factors(u);
        let (g, n) = fs[0];
        let tail = self.module.intern(&fs[1..]);
        let base = self.xi_inverse_basis(tail, wf);
        let mut raw = Vec::new();
        for ((wf2, v), c) in base.items() {
            // 1 (x) left multiplication on V.
            let moved = self
                .module
                .act(g as usize, n, &State::single(*v, Rational::one()));
            for (v2, c2) in moved.terms() {
                raw.push(((*wf2, *v2), c * c2));
            }
            // [x, .] (x) 1 on W.
            for (wf3, c3) in self.bracket_w(g, n, *wf2).iter() {
                raw.push(((*wf3, *v), c * c3));
            }
        }
        let out = TensorVec::from_raw(raw);
        self.xi_inv_memo
            .write()
            .unwrap()
            .entry((u, wf))
            .or_insert_with(|| Arc::new(out))
            .clone()
    }

    // -- induced-module operators ------------------------------------------

    /// Action of the mode `g(n)` on the induced module.
    pub fn ind_act(&self, g: usize, n: i32, v: &InducedVec) -> InducedVec {
        let mut raw = Vec::new();
        for ((u, wf), c) in v.items() {
            let sym = self.symbolic(g as u16, n, *u);
            for (u2, c2) in &sym.stay {
                raw.push(((*u2, *wf), c * c2));
            }
            for (u2, g2, m2, c2) in &sym.fall {
                for (wf2, c3) in self.w_act(*g2, *m2, *wf).iter() {
                    raw.push(((*u2, *wf2), c * c2 * c3));
                }
            }
        }
        InducedVec::from_raw(raw)
    }

    pub fn ind_act_gvec(&self, x: &crate::lie::GVec, n: i32, v: &InducedVec) -> InducedVec {
        let mut raw = Vec::new();
        for (g, c) in x.entries() {
            for (key, q) in self.ind_act(*g, n, v).items() {
                raw.push((*key, q * c));
            }
        }
        InducedVec::from_raw(raw)
    }

    /// Translation operator on the induced module: derivation on the PBW side
    /// plus the height shift `w_{i,j} -> w_{i+1,j}` on the W side.
    pub fn ind_apply_d(&self, v: &InducedVec) -> InducedVec {
        let mut raw = Vec::new();
        for ((u, wf), c) in v.items() {
            let du = self
                .module
                .apply_d(&State::single(*u, Rational::one()));
            for (u2, c2) in du.terms() {
                raw.push(((*u2, *wf), c * c2));
            }
            let (height, j) = self.w_split(*wf);
            self.w_level(height + 1); // ensure the tower is built
            raw.push(((*u, self.w_flat(height + 1, j)), c.clone()));
        }
        InducedVec::from_raw(raw)
    }

    /// Degree operator on the induced module.
    pub fn ind_apply_l0(&self, v: &InducedVec) -> InducedVec {
        let mut raw = Vec::new();
        for ((u, wf), c) in v.items() {
            let d = (self.module.degree(*u) + self.w_degree(*wf)) as i64;
            raw.push(((*u, *wf), c * rat(d)));
        }
        InducedVec::from_raw(raw)
    }

    /// The Casimir operator through the zero-mode action.
    pub fn ind_casimir(&self, v: &InducedVec) -> InducedVec {
        let mut raw = Vec::new();
        let pairs = self.alg().chev.dual_pairs.clone();
        for (x, y) in &pairs {
            let inner = self.ind_act_gvec(y, 0, v);
            for (key, q) in self.ind_act_gvec(x, 0, &inner).items() {
                raw.push((*key, q.clone()));
            }
        }
        InducedVec::from_raw(raw)
    }

    fn symbolic(&self, g: u16, n: i32, u: MonoId) -> Arc<SymbolicAction> {
        let fs = self.module.factors(u);
        if n < 0 && (fs.is_empty() || (n, g) <= (fs[0].1, fs[0].0)) {
            let mut out = Vec::with_capacity(fs.len() + 1);
            out.push((g, n));
            out.extend_from_slice(&fs);
            return Arc::new(SymbolicAction {
                stay: vec![(self.module.intern(&out), Rational::one())],
                fall: Vec::new(),
            });
        }
        if fs.is_empty() {
            return Arc::new(SymbolicAction {
                stay: Vec::new(),
                fall: vec![(VACUUM, g, n, Rational::one())],
            });
        }
        if let Some(hit) = self.symbolic_memo.read().unwrap().get(&(g, n, u)) {
            return hit.clone();
        }
        let (hg, hn) = fs[0];
        let tail = self.module.intern(&fs[1..]);
        let inner = self.symbolic(g, n, tail);
        let mut stay: Vec<(MonoId, Rational)> = Vec::new();
        let mut fall: Vec<(MonoId, u16, i32, Rational)> = Vec::new();
        // Commute the head back over the inner result.
        for (u2, c2) in &inner.stay {
            let moved = self
                .module
                .act(hg as usize, hn, &State::single(*u2, Rational::one()));
            for (u3, c3) in moved.terms() {
                stay.push((*u3, c2 * c3));
            }
        }
        for (u2, g2, m2, c2) in &inner.fall {
            let moved = self
                .module
                .act(hg as usize, hn, &State::single(*u2, Rational::one()));
            for (u3, c3) in moved.terms() {
                fall.push((*u3, *g2, *m2, c2 * c3));
            }
        }
        // Bracket and central contributions against the head factor.
        let bracket = self.alg().chev.bracket_indices(g as usize, hg as usize).clone();
        for (b, cb) in bracket.entries() {
            let sub = self.symbolic(*b as u16, n + hn, tail);
            for (u2, c2) in &sub.stay {
                stay.push((*u2, cb * c2));
            }
            for (u2, g2, m2, c2) in &sub.fall {
                fall.push((*u2, *g2, *m2, cb * c2));
            }
        }
        if n + hn == 0 {
            let pairing = self.alg().chev.form_indices(g as usize, hg as usize);
            if !pairing.is_zero() {
                stay.push((tail, rat(n as i64) * pairing * rat(self.level)));
            }
        }
        let out = SymbolicAction {
            stay: merge_pairs(stay),
            fall: merge_quads(fall),
        };
        self.symbolic_memo
            .write()
            .unwrap()
            .entry((g, n, u))
            .or_insert_with(|| Arc::new(out))
            .clone()
    }

    // -- diagram automorphism transport --------------------------------------

    /// Applies an algebra automorphism to a vacuum-module state.
    pub fn sigma_state(&self, sigma: &BasisAutomorphism, v: &State) -> State {
        let mut raw = Vec::new();
        for (id, c) in v.terms() {
            let mut state = self.module.vacuum();
            for &(g, n) in self.module.factors(*id).iter().rev() {
                state = self.module.act_gvec(&sigma.images[g as usize], n, &state);
            }
            for (j, q) in state.terms() {
                raw.push((*j, q * c));
            }
        }
        State::from_terms(raw)
    }

    /// Automorphism image of a W basis vector, in W coordinates.
    pub fn sigma_w(&self, sigma: &BasisAutomorphism, wf: u32) -> Vec<(u32, Rational)> {
        let moved = self.sigma_state(sigma, &self.w_state(wf));
        self.w_coords(&moved).expect("W must be sigma-stable")
    }

    /// Automorphism action `sigma(u (x) w) = sigma(u) (x) sigma(w)`.
    pub fn sigma_induced(&self, sigma: &BasisAutomorphism, v: &InducedVec) -> InducedVec {
        let mut raw = Vec::new();
        for ((u, wf), c) in v.items() {
            let mut u_img = State::single(VACUUM, Rational::one());
            for &(g, n) in self.module.factors(*u).iter().rev() {
                u_img = self.module.act_gvec(&sigma.images[g as usize], n, &u_img);
            }
            for (u2, c2) in u_img.terms() {
                for (wf2, c3) in self.sigma_w(sigma, *wf) {
                    raw.push(((*u2, wf2), c * c2 * &c3));
                }
            }
        }
        InducedVec::from_raw(raw)
    }
}

#[derive(Clone, Debug, Default)]
pub(crate) struct SymbolicAction {
    /// `(u', coeff)`: terms staying on the PBW side, `w` untouched.
    pub stay: Vec<(MonoId, Rational)>,
    /// `(u', g, m, coeff)`: terms where the nonnegative mode `g(m)` reached W.
    pub fall: Vec<(MonoId, u16, i32, Rational)>,
}

fn merge_pairs(mut raw: Vec<(MonoId, Rational)>) -> Vec<(MonoId, Rational)> {
    raw.sort_by_key(|(k, _)| *k);
    let mut out: Vec<(MonoId, Rational)> = Vec::with_capacity(raw.len());
    for (k, v) in raw {
        match out.last_mut() {
            Some((j, acc)) if *j == k => *acc += v,
            _ => out.push((k, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

fn merge_quads(
    mut raw: Vec<(MonoId, u16, i32, Rational)>,
) -> Vec<(MonoId, u16, i32, Rational)> {
    raw.sort_by_key(|(u, g, m, _)| (*u, *g, *m));
    let mut out: Vec<(MonoId, u16, i32, Rational)> = Vec::with_capacity(raw.len());
    for (u, g, m, v) in raw {
        match out.last_mut() {
            Some((u2, g2, m2, acc)) if *u2 == u && *g2 == g && *m2 == m => *acc += v,
            _ => out.push((u, g, m, v)),
        }
    }
    out.retain(|(_, _, _, v)| !v.is_zero());
    out
}
