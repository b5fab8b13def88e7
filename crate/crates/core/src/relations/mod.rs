//! The annihilating-field relation spaces and maps.
//!
//! `RSpace` is the finite-dimensional module generated from the power of the
//! maximal-root current acting on the vacuum; `W` stacks its translates under
//! the translation operator, height by height. On top of these the submodule
//! `maps` realize the induction map, the normal-order product map and the
//! intertwiner between them; `special` builds the distinguished kernel
//! vectors; `kernel` computes graded kernels and operator closures.

mod kernel;
mod maps;
mod special;

pub use kernel::{Ambient, Closure, ClosureOptions, KernelDims, ModeSet, NBasis, TBasis};
pub use special::Sl2Identity;

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num::{One, Zero};
use thiserror::Error;

use crate::exact::{rat, Rational, SpanSolver, SparseVec};
use crate::lie::{Algebra, Root};
use crate::vacuum::{ModuleCtx, MonoId, State};

#[derive(Debug, Error)]
pub enum RelError {
    #[error("level must be a positive integer, got {0}")]
    BadLevel(i64),
    #[error("operation requires type A1")]
    RequiresA1,
    #[error("operation excludes type A1")]
    ExcludesA1,
    #[error("closure generators must be degree- and weight-homogeneous")]
    InhomogeneousGenerator,
    #[error("cutoff {cutoff} is below the minimum degree {min} for this computation")]
    CutoffTooSmall { cutoff: usize, min: usize },
}

/// Sparse rational combination over an ordered key type.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Terms<K: Ord + Copy> {
    items: Vec<(K, Rational)>,
}

impl<K: Ord + Copy> Terms<K> {
    pub fn zero() -> Self {
        Terms { items: Vec::new() }
    }

    pub fn single(key: K, coeff: Rational) -> Self {
        if coeff.is_zero() {
            Terms::zero()
        } else {
            Terms { items: vec![(key, coeff)] }
        }
    }

    pub fn from_raw(mut raw: Vec<(K, Rational)>) -> Self {
        raw.sort_by(|(a, _), (b, _)| a.cmp(b));
        let mut items: Vec<(K, Rational)> = Vec::with_capacity(raw.len());
        for (k, v) in raw {
            match items.last_mut() {
                Some((j, acc)) if *j == k => *acc += v,
                _ => items.push((k, v)),
            }
        }
        items.retain(|(_, v)| !v.is_zero());
        Terms { items }
    }

    pub fn items(&self) -> &[(K, Rational)] {
        &self.items
    }

    pub fn is_zero(&self) -> bool {
        self.items.is_empty()
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Terms::zero();
        }
        Terms { items: self.items.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    pub fn add_scaled(&self, c: &Rational, other: &Self) -> Self {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut items = Vec::with_capacity(self.items.len() + other.items.len());
        let (mut ia, mut ib) = (0, 0);
        while ia < self.items.len() || ib < other.items.len() {
            let ka = self.items.get(ia).map(|(k, _)| *k);
            let kb = other.items.get(ib).map(|(k, _)| *k);
            match (ka, kb) {
                (Some(i), Some(j)) if i == j => {
                    let v = &self.items[ia].1 + &other.items[ib].1 * c;
                    if !v.is_zero() {
                        items.push((i, v));
                    }
                    ia += 1;
                    ib += 1;
                }
                (Some(i), Some(j)) if i < j => {
                    items.push((i, self.items[ia].1.clone()));
                    ia += 1;
                }
                (Some(_), Some(j)) => {
                    items.push((j, &other.items[ib].1 * c));
                    ib += 1;
                }
                (Some(i), None) => {
                    items.push((i, self.items[ia].1.clone()));
                    ia += 1;
                }
                (None, Some(j)) => {
                    items.push((j, &other.items[ib].1 * c));
                    ib += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Terms { items }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(&Rational::one(), other)
    }
}

/// Element of the induced module: combination of `u (x) w` with `u` a PBW
/// monomial of negative modes and `w` a flat index into the W basis.
pub type InducedVec = Terms<(MonoId, u32)>;

/// Element of `W (x) V`: combination of `w (x) v`.
pub type TensorVec = Terms<(u32, MonoId)>;

/// The finite-dimensional space generated from the top annihilating-field
/// state under the zero-mode action, with its per-generator action matrices.
pub struct RSpace {
    pub level: i64,
    pub dim: usize,
    /// Common degree of every basis vector (level + 1).
    pub degree: usize,
    /// Deterministic basis: breadth-first closure starting at the top vector.
    pub basis: Vec<State>,
    pub weights: Vec<Root>,
    pub solver: SpanSolver,
    /// `action[g][j]` = coordinates of `g(0) basis[j]` in this basis.
    pub action: Vec<Vec<Vec<(usize, Rational)>>>,
}

/// One height of the W space: the translates `D^height r_j`.
pub struct WLevel {
    pub height: usize,
    pub degree: usize,
    pub basis: Vec<State>,
    pub solver: SpanSolver,
}

/// Context bundling the algebra, the level-`k` vacuum module, the relation
/// spaces and all memo tables.
pub struct RelCtx {
    pub module: ModuleCtx,
    pub level: i64,
    pub r_space: RSpace,
    w_levels: RwLock<Vec<Arc<WLevel>>>,
    // memo tables, all keyed by interned handles
    pub(crate) xi_memo: RwLock<HashMap<(u32, MonoId), Arc<InducedVec>>>,
    pub(crate) xi_inv_memo: RwLock<HashMap<(MonoId, u32), Arc<TensorVec>>>,
    pub(crate) bracket_w_memo: RwLock<HashMap<(u16, i32, u32), Arc<Vec<(u32, Rational)>>>>,
    pub(crate) w_act_memo: RwLock<HashMap<(u16, i32, u32), Arc<Vec<(u32, Rational)>>>>,
    pub(crate) symbolic_memo: RwLock<HashMap<(u16, i32, MonoId), Arc<maps::SymbolicAction>>>,
    pub(crate) psi_key_memo: RwLock<HashMap<(MonoId, u32), Arc<State>>>,
    pub(crate) n_basis_cache: RwLock<HashMap<(usize, kernel::Ambient), Arc<kernel::NBasis>>>,
    pub(crate) t_basis_cache: RwLock<HashMap<usize, Arc<kernel::TBasis>>>,
}

impl RelCtx {
    pub fn new(alg: Arc<Algebra>, level: i64) -> Result<Self, RelError> {
        if level < 1 {
            return Err(RelError::BadLevel(level));
        }
        let module = ModuleCtx::new(alg, level);
        let r_space = build_r_space(&module, level);
        let w0 = Arc::new(WLevel {
            height: 0,
            degree: r_space.degree,
            basis: r_space.basis.clone(),
            solver: SpanSolver::new(
                module.slice(r_space.degree).dim(),
                &r_space
                    .basis
                    .iter()
                    .map(|b| module.slice(r_space.degree).coords(b))
                    .collect::<Vec<_>>(),
            ),
        });
        Ok(RelCtx {
            module,
            level,
            r_space,
            w_levels: RwLock::new(vec![w0]),
            xi_memo: RwLock::new(HashMap::new()),
            xi_inv_memo: RwLock::new(HashMap::new()),
            bracket_w_memo: RwLock::new(HashMap::new()),
            w_act_memo: RwLock::new(HashMap::new()),
            symbolic_memo: RwLock::new(HashMap::new()),
            psi_key_memo: RwLock::new(HashMap::new()),
            n_basis_cache: RwLock::new(HashMap::new()),
            t_basis_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn alg(&self) -> &Algebra {
        &self.module.alg
    }

    pub fn dim_r(&self) -> usize {
        self.r_space.dim
    }

    /// Degree of the R space, `level + 1`.
    pub fn r_degree(&self) -> usize {
        self.r_space.degree
    }

    pub fn w_flat(&self, height: usize, j: usize) -> u32 {
        (height * self.dim_r() + j) as u32
    }

    pub fn w_split(&self, flat: u32) -> (usize, usize) {
        let flat = flat as usize;
        (flat / self.dim_r(), flat % self.dim_r())
    }

    pub fn w_degree(&self, flat: u32) -> usize {
        self.r_degree() + self.w_split(flat).0
    }

    pub fn w_weight(&self, flat: u32) -> &Root {
        &self.r_space.weights[self.w_split(flat).1]
    }

    /// Lazily extends the W tower and returns the requested height.
    pub fn w_level(&self, height: usize) -> Arc<WLevel> {
        {
            let guard = self.w_levels.read().unwrap();
            if height < guard.len() {
                return guard[height].clone();
            }
        }
        let mut guard = self.w_levels.write().unwrap();
        while guard.len() <= height {
            let prev = guard.last().unwrap().clone();
            let basis: Vec<State> = prev.basis.iter().map(|b| self.module.apply_d(b)).collect();
            let degree = prev.degree + 1;
            let slice = self.module.slice(degree);
            let coords: Vec<SparseVec> = basis.iter().map(|b| slice.coords(b)).collect();
            let solver = SpanSolver::new(slice.dim(), &coords);
            // D stays injective on each height: the translates remain a basis.
            let mut span = crate::exact::EchelonSpan::new(slice.dim());
            for c in &coords {
                assert!(span.insert(c), "translation operator dropped rank in W");
            }
            let next_height = guard.len();
            guard.push(Arc::new(WLevel { height: next_height, degree, basis, solver }));
        }
        guard[height].clone()
    }

    pub fn w_state(&self, flat: u32) -> State {
        let (height, j) = self.w_split(flat);
        self.w_level(height).basis[j].clone()
    }

    /// Expresses a degree-homogeneous state lying in `W` in the W basis.
    pub fn w_coords(&self, v: &State) -> Option<Vec<(u32, Rational)>> {
        if v.is_zero() {
            return Some(Vec::new());
        }
        let degree = self.module.state_degree(v)?;
        if degree < self.r_degree() {
            return if v.is_zero() { Some(Vec::new()) } else { None };
        }
        let height = degree - self.r_degree();
        let level = self.w_level(height);
        let coords = self.module.slice(degree).coords(v);
        let sol = level.solver.solve(&coords)?;
        Some(
            sol.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (self.w_flat(height, j), c))
                .collect(),
        )
    }

    /// Total degree of a homogeneous induced vector.
    pub fn ind_degree(&self, v: &InducedVec) -> Option<usize> {
        let mut deg = None;
        for ((u, wf), _) in v.items() {
            let d = self.module.degree(*u) + self.w_degree(*wf);
            match deg {
                None => deg = Some(d),
                Some(e) if e == d => {}
                _ => return None,
            }
        }
        deg
    }

    /// Finite weight of a homogeneous induced vector.
    pub fn ind_weight(&self, v: &InducedVec) -> Option<Root> {
        let mut weight: Option<Root> = None;
        for ((u, wf), _) in v.items() {
            let mut w = self.module.weight(*u);
            for (a, b) in w.iter_mut().zip(self.w_weight(*wf)) {
                *a += b;
            }
            match &weight {
                None => weight = Some(w),
                Some(e) if *e == w => {}
                _ => return None,
            }
        }
        weight
    }

    pub fn tensor_degree(&self, v: &TensorVec) -> Option<usize> {
        let mut deg = None;
        for ((wf, u), _) in v.items() {
            let d = self.module.degree(*u) + self.w_degree(*wf);
            match deg {
                None => deg = Some(d),
                Some(e) if e == d => {}
                _ => return None,
            }
        }
        deg
    }

    /// Renders an induced vector for reports and diagnostics.
    pub fn format_induced(&self, v: &InducedVec) -> String {
        if v.is_zero() {
            return "0".to_string();
        }
        let names = self.alg().chev.basis_names(&self.alg().roots);
        let mut parts = Vec::new();
        for ((u, wf), c) in v.items() {
            let fs = self.module.factors(*u);
            let u_str = if fs.is_empty() {
                "1".to_string()
            } else {
                fs.iter()
                    .map(|(g, n)| format!("{}({})", names[*g as usize], n))
                    .collect::<Vec<_>>()
                    .join("")
            };
            let (height, j) = self.w_split(*wf);
            parts.push(format!("({c})*{u_str}(x)D^{height}r{j}"));
        }
        parts.join(" + ")
    }
}

/// Closure of the top state under all zero modes, with action matrices; the
/// dimension is checked against the Weyl dimension formula at build time.
fn build_r_space(module: &ModuleCtx, level: i64) -> RSpace {
    let alg = module.alg.clone();
    let degree = (level + 1) as usize;
    let slice = module.slice(degree);
    let dim_g = alg.dim();

    let mut top = module.vacuum();
    for _ in 0..=level {
        top = module.act(alg.e_theta(), -1, &top);
    }

    let mut basis = vec![top];
    let mut span = crate::exact::EchelonSpan::new(slice.dim());
    span.insert(&slice.coords(&basis[0]));
    let mut head = 0;
    while head < basis.len() {
        let current = basis[head].clone();
        head += 1;
        for g in 0..dim_g {
            let moved = module.act(g, 0, &current);
            if moved.is_zero() {
                continue;
            }
            if span.insert(&slice.coords(&moved)) {
                basis.push(moved);
            }
        }
    }

    // Dimension must match the Weyl dimension at highest weight (k+1) theta.
    let theta_q: Vec<Rational> = alg.roots.theta().iter().map(|&c| rat(c * (level + 1))).collect();
    let expected = alg.roots.weyl_dim(&theta_q);
    assert_eq!(rat(basis.len() as i64), expected, "R dimension mismatch");

    let weights: Vec<Root> = basis
        .iter()
        .map(|b| {
            let w = module.weight(b.terms()[0].0);
            debug_assert!(b.terms().iter().all(|(id, _)| module.weight(*id) == w));
            w
        })
        .collect();

    let coords: Vec<SparseVec> = basis.iter().map(|b| slice.coords(b)).collect();
    let solver = SpanSolver::new(slice.dim(), &coords);

    let mut action = Vec::with_capacity(dim_g);
    for g in 0..dim_g {
        let mut cols = Vec::with_capacity(basis.len());
        for b in &basis {
            let moved = module.act(g, 0, b);
            let col = if moved.is_zero() {
                Vec::new()
            } else {
                solver
                    .solve(&slice.coords(&moved))
                    .expect("R is closed under the zero modes")
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect()
            };
            cols.push(col);
        }
        action.push(cols);
    }

    RSpace { level, dim: basis.len(), degree, basis, weights, solver, action }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_algebra, SignConvention};

    pub(crate) fn rel(name: &str, level: i64) -> RelCtx {
        let alg = build_algebra(name.parse().unwrap(), SignConvention::Standard).unwrap();
        RelCtx::new(Arc::new(alg), level).unwrap()
    }

    #[test]
    fn r_space_dimensions() {
        assert_eq!(rel("A1", 1).dim_r(), 5);
        assert_eq!(rel("A1", 2).dim_r(), 7);
        assert_eq!(rel("A2", 1).dim_r(), 27);
    }

    #[test]
    fn r_space_is_annihilated_by_positive_modes() {
        for (name, k) in [("A1", 1i64), ("A1", 2), ("A2", 1)] {
            let ctx = rel(name, k);
            for r in &ctx.r_space.basis {
                for g in 0..ctx.alg().dim() {
                    assert!(ctx.module.act(g, 1, r).is_zero(), "{name} k={k} g={g} mode 1");
                    assert!(ctx.module.act(g, 2, r).is_zero(), "{name} k={k} g={g} mode 2");
                }
            }
        }
    }

    #[test]
    fn r_action_matrices_match_direct_action() {
        let ctx = rel("A1", 1);
        for g in 0..ctx.alg().dim() {
            for (j, b) in ctx.r_space.basis.iter().enumerate() {
                let direct = ctx.module.act(g, 0, b);
                let mut via_matrix = State::zero();
                for (i, c) in &ctx.r_space.action[g][j] {
                    via_matrix = via_matrix.add_scaled(c, &ctx.r_space.basis[*i]);
                }
                assert_eq!(direct, via_matrix);
            }
        }
    }

    #[test]
    fn casimir_acts_as_scalar_on_r() {
        // Omega = sum_i x^i(0) y^i(0) acts on R as ((k+1)theta + 2rho, (k+1)theta).
        for (name, k) in [("A1", 1i64), ("A1", 2), ("A2", 1)] {
            let ctx = rel(name, k);
            let alg = ctx.alg();
            let la: Vec<Rational> = alg
                .roots
                .theta()
                .iter()
                .map(|&c| rat(c * (k + 1)))
                .collect();
            let scalar = alg.roots.casimir_eigenvalue(&la);
            for r in ctx.r_space.basis.iter() {
                let mut omega = State::zero();
                for (x, y) in &alg.chev.dual_pairs {
                    let inner = ctx.module.act_gvec(y, 0, r);
                    omega = omega.add(&ctx.module.act_gvec(x, 0, &inner));
                }
                assert_eq!(omega, r.scaled(&scalar), "{name} k={k}");
            }
        }
    }

    #[test]
    fn w_levels_are_translates() {
        let ctx = rel("A1", 1);
        let l2 = ctx.w_level(2);
        assert_eq!(l2.degree, 4);
        assert_eq!(l2.basis.len(), 5);
        let dd = ctx
            .module
            .apply_d(&ctx.module.apply_d(&ctx.r_space.basis[3]));
        assert_eq!(l2.basis[3], dd);
        // Membership solving against W.
        let coords = ctx.w_coords(&dd).unwrap();
        assert_eq!(coords, vec![(ctx.w_flat(2, 3), Rational::one())]);
    }

    #[test]
    fn sugawara_translation_identity_on_r() {
        // L_{-1} r = (1/(k+g)) sum_i x^i(-1) y^i(0) r for r in R.
        for (name, k) in [("A1", 1i64), ("A1", 2), ("A2", 1)] {
            let ctx = rel(name, k);
            let alg = ctx.alg();
            let denom = rat(k + alg.roots.dual_coxeter);
            for r in &ctx.r_space.basis {
                let mut sum = State::zero();
                for (x, y) in &alg.chev.dual_pairs {
                    let inner = ctx.module.act_gvec(y, 0, r);
                    sum = sum.add(&ctx.module.act_gvec(x, -1, &inner));
                }
                let lhs = ctx.module.apply_d(r);
                assert_eq!(lhs, sum.scaled(&(Rational::one() / &denom)), "{name} k={k}");
            }
        }
    }
}
