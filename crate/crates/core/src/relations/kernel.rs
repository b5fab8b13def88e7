//! Graded bases, per-degree kernels and operator closures.
//!
//! Kernel dimensions are computed per (degree, weight) block from exact ranks
//! of the map matrices; closures saturate an echelon span per block, degree
//! by degree, until a full sweep adds nothing. The two computations are
//! independent routes onto the same spaces: closure bases are checked to lie
//! in the kernel pointwise, and equality of dimensions is the theorem-level
//! pass condition.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num::One;

use crate::exact::{EchelonSpan, Rational, SparseMat, SparseVec};
use crate::lie::Root;
use crate::vacuum::{MonoId, State};
use crate::vertex::field_coeff;

use super::{InducedVec, RelCtx, RelError};

/// Which W tower the induced module is built over: the full truncated tower
/// or only the bottom (R) level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ambient {
    Full,
    RZero,
}

/// Deterministic basis of one degree of the induced module: heights
/// ascending, then the monomial enumeration order, then the R index.
pub struct NBasis {
    pub degree: usize,
    pub keys: Vec<(MonoId, u32)>,
    pub index: HashMap<(MonoId, u32), usize>,
    pub weights: Vec<Root>,
    pub weight_blocks: BTreeMap<Root, Vec<usize>>,
    /// PBW length of the monomial side, for filtration cuts.
    pub lengths: Vec<usize>,
}

impl NBasis {
    pub fn dim(&self) -> usize {
        self.keys.len()
    }

    pub fn coords(&self, ctx: &RelCtx, v: &InducedVec) -> SparseVec {
        let entries = v
            .items()
            .iter()
            .map(|(key, c)| {
                let pos = *self
                    .index
                    .get(key)
                    .unwrap_or_else(|| panic!("key outside basis: {:?}", ctx.format_induced(v)));
                (pos, c.clone())
            })
            .collect();
        SparseVec::from_entries(self.dim(), entries)
    }
}

/// Deterministic basis of one degree of `W (x) V`.
pub struct TBasis {
    pub degree: usize,
    pub keys: Vec<(u32, MonoId)>,
    pub index: HashMap<(u32, MonoId), usize>,
    pub weight_blocks: BTreeMap<Root, Vec<usize>>,
}

impl TBasis {
    pub fn dim(&self) -> usize {
        self.keys.len()
    }
}

/// Total and per-weight kernel dimensions of one graded block, along with the
/// rank (the image dimension) for cross-checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelDims {
    pub total: usize,
    pub rank: usize,
    pub by_weight: BTreeMap<Root, usize>,
}

/// Operator families for closures: affine modes filtered by sign, optionally
/// with the translation operator adjoined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeSet {
    All,
    NonPositive,
    NonNegative,
    ZeroOnly,
}

#[derive(Clone, Debug)]
pub struct ClosureOptions {
    pub modes: ModeSet,
    pub with_translation: bool,
    pub ambient: Ambient,
    pub min_degree: usize,
    pub cutoff: usize,
    /// Target dimensions per (degree, weight); saturated blocks are skipped.
    pub known_dims: Option<BTreeMap<(usize, Root), usize>>,
    /// Assert that every accepted vector maps to zero, so the closure is
    /// certified to stay inside the kernel.
    pub verify_kernel_membership: bool,
}

pub struct Closure {
    pub dims: BTreeMap<usize, usize>,
    pub bases: BTreeMap<usize, Vec<InducedVec>>,
}

impl RelCtx {
    /// The induction map on a single basis key.
    pub fn psi_key(&self, u: MonoId, wf: u32) -> State {
        (*self.psi_key_arc(u, wf)).clone()
    }

    pub(crate) fn psi_key_arc(&self, u: MonoId, wf: u32) -> std::sync::Arc<State> {
        if let Some(hit) = self.psi_key_memo.read().unwrap().get(&(u, wf)) {
            return hit.clone();
        }
        let mut state = self.w_state(wf);
        for &(g, n) in self.module.factors(u).iter().rev() {
            state = self.module.act(g as usize, n, &state);
        }
        self.psi_key_memo
            .write()
            .unwrap()
            .entry((u, wf))
            .or_insert_with(|| std::sync::Arc::new(state))
            .clone()
    }

    /// The normal-order product map on a single basis key.
    pub fn phi_key(&self, wf: u32, v: MonoId) -> State {
        field_coeff(
            &self.module,
            &self.w_state(wf),
            -1,
            &State::single(v, Rational::one()),
        )
    }

    pub fn n_basis(&self, degree: usize, ambient: Ambient) -> std::sync::Arc<NBasis> {
        let key = (degree, ambient);
        if let Some(hit) = self.n_basis_cache.read().unwrap().get(&key) {
            return hit.clone();
        }
        let r_deg = self.r_degree();
        let mut keys: Vec<(MonoId, u32)> = Vec::new();
        let mut lengths: Vec<usize> = Vec::new();
        if degree >= r_deg {
            let max_height = match ambient {
                Ambient::Full => degree - r_deg,
                Ambient::RZero => 0,
            };
            for height in 0..=max_height {
                self.w_level(height);
                let u_degree = degree - r_deg - height;
                let slice = self.module.slice(u_degree);
                for u in &slice.monos {
                    let len = self.module.factors(*u).len();
                    for j in 0..self.dim_r() {
                        keys.push((*u, self.w_flat(height, j)));
                        lengths.push(len);
                    }
                }
            }
        }
        let index: HashMap<(MonoId, u32), usize> =
            keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let weights: Vec<Root> = keys
            .iter()
            .map(|(u, wf)| {
                let mut w = self.module.weight(*u);
                for (a, b) in w.iter_mut().zip(self.w_weight(*wf)) {
                    *a += b;
                }
                w
            })
            .collect();
        let mut weight_blocks: BTreeMap<Root, Vec<usize>> = BTreeMap::new();
        for (i, w) in weights.iter().enumerate() {
            weight_blocks.entry(w.clone()).or_default().push(i);
        }
        let nb = std::sync::Arc::new(NBasis { degree, keys, index, weights, weight_blocks, lengths });
        self.n_basis_cache
            .write()
            .unwrap()
            .entry(key)
            .or_insert_with(|| nb.clone())
            .clone()
    }

    pub fn t_basis(&self, degree: usize) -> std::sync::Arc<TBasis> {
        if let Some(hit) = self.t_basis_cache.read().unwrap().get(&degree) {
            return hit.clone();
        }
        let r_deg = self.r_degree();
        let mut keys: Vec<(u32, MonoId)> = Vec::new();
        let mut weights: Vec<Root> = Vec::new();
        if degree >= r_deg {
            for height in 0..=(degree - r_deg) {
                self.w_level(height);
                let v_degree = degree - r_deg - height;
                let slice = self.module.slice(v_degree);
                for j in 0..self.dim_r() {
                    let wf = self.w_flat(height, j);
                    for v in &slice.monos {
                        keys.push((wf, *v));
                        let mut w = self.module.weight(*v);
                        for (a, b) in w.iter_mut().zip(self.w_weight(wf)) {
                            *a += b;
                        }
                        weights.push(w);
                    }
                }
            }
        }
        let index: HashMap<(u32, MonoId), usize> =
            keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let mut weight_blocks: BTreeMap<Root, Vec<usize>> = BTreeMap::new();
        for (i, w) in weights.iter().enumerate() {
            weight_blocks.entry(w.clone()).or_default().push(i);
        }
        let tb = std::sync::Arc::new(TBasis { degree, keys, index, weight_blocks });
        self.t_basis_cache
            .write()
            .unwrap()
            .entry(degree)
            .or_insert_with(|| tb.clone())
            .clone()
    }

    /// Kernel dimensions of the induction map at one degree, per weight
    /// block, by exact rank. `max_len` restricts the domain to basis elements
    /// of bounded PBW length (the filtration cut used by the experiment).
    pub fn kernel_dims(
        &self,
        degree: usize,
        ambient: Ambient,
        max_len: Option<usize>,
    ) -> KernelDims {
        let nb = self.n_basis(degree, ambient);
        let slice = self.module.slice(degree);
        let mut total = 0;
        let mut rank_total = 0;
        let mut by_weight = BTreeMap::new();
        for (weight, cols) in &nb.weight_blocks {
            let cols: Vec<usize> = cols
                .iter()
                .copied()
                .filter(|&c| max_len.map_or(true, |m| nb.lengths[c] <= m))
                .collect();
            if cols.is_empty() {
                continue;
            }
            let vpos = slice.weight_blocks.get(weight);
            let rank = match vpos {
                None => 0,
                Some(vpos) => {
                    let mut span = EchelonSpan::new(vpos.len());
                    let mut rank = 0;
                    for &c in &cols {
                        let (u, wf) = nb.keys[c];
                        let img = self.psi_key(u, wf);
                        if img.is_zero() {
                            continue;
                        }
                        let coords = restrict_coords(&slice.coords(&img), vpos);
                        if span.insert(&coords) {
                            rank += 1;
                        }
                    }
                    rank
                }
            };
            let ker = cols.len() - rank;
            rank_total += rank;
            total += ker;
            if ker > 0 {
                by_weight.insert(weight.clone(), ker);
            }
        }
        KernelDims { total, rank: rank_total, by_weight }
    }

    /// Kernel dimensions of the normal-order product map at one degree.
    pub fn kernel_phi_dims(&self, degree: usize) -> KernelDims {
        let tb = self.t_basis(degree);
        let slice = self.module.slice(degree);
        let mut total = 0;
        let mut rank_total = 0;
        let mut by_weight = BTreeMap::new();
        for (weight, cols) in &tb.weight_blocks {
            let vpos = slice.weight_blocks.get(weight);
            let rank = match vpos {
                None => 0,
                Some(vpos) => {
                    let mut span = EchelonSpan::new(vpos.len());
                    let mut rank = 0;
                    for &c in cols {
                        let (wf, v) = tb.keys[c];
                        let img = self.phi_key(wf, v);
                        if img.is_zero() {
                            continue;
                        }
                        let coords = restrict_coords(&slice.coords(&img), vpos);
                        if span.insert(&coords) {
                            rank += 1;
                        }
                    }
                    rank
                }
            };
            let ker = cols.len() - rank;
            rank_total += rank;
            total += ker;
            if ker > 0 {
                by_weight.insert(weight.clone(), ker);
            }
        }
        KernelDims { total, rank: rank_total, by_weight }
    }

    /// Reduced-echelon kernel basis of the induction map at one degree,
    /// optionally restricted to one weight block. Deterministic.
    pub fn kernel_psi_block(
        &self,
        degree: usize,
        ambient: Ambient,
        weight: Option<&Root>,
    ) -> Vec<InducedVec> {
        let nb = self.n_basis(degree, ambient);
        let slice = self.module.slice(degree);
        let cols: Vec<usize> = match weight {
            Some(w) => nb.weight_blocks.get(w).cloned().unwrap_or_default(),
            None => (0..nb.dim()).collect(),
        };
        if cols.is_empty() {
            return Vec::new();
        }
        // Rows indexed by the target slice, columns by the selection.
        let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); slice.dim()];
        for (local, &c) in cols.iter().enumerate() {
            let (u, wf) = nb.keys[c];
            let img = self.psi_key(u, wf);
            for (pos, val) in slice.coords(&img).entries() {
                rows[*pos].push((local, val.clone()));
            }
        }
        let mat = SparseMat::new(
            cols.len(),
            rows.into_iter()
                .map(|r| SparseVec::from_entries(cols.len(), r))
                .collect(),
        );
        crate::exact::kernel_basis(&mat)
            .into_iter()
            .map(|kv| {
                InducedVec::from_raw(
                    kv.entries()
                        .iter()
                        .map(|(local, c)| (nb.keys[cols[*local]], c.clone()))
                        .collect(),
                )
            })
            .collect()
    }

    /// Least graded subspace containing the generators and stable under the
    /// chosen operator family, saturated degree by degree up to the cutoff.
    pub fn submodule_closure(
        &self,
        generators: &[InducedVec],
        opts: &ClosureOptions,
    ) -> Result<Closure, RelError> {
        struct Block {
            span: EchelonSpan,
            positions: Vec<usize>,
        }
        let mut blocks: HashMap<(usize, Root), Block> = HashMap::new();
        let mut bases: BTreeMap<usize, Vec<InducedVec>> = BTreeMap::new();
        let mut queue: VecDeque<InducedVec> = VecDeque::new();

        let min_degree = opts.min_degree;
        let cutoff = opts.cutoff;
        for g in generators {
            let deg = self.ind_degree(g).ok_or(RelError::InhomogeneousGenerator)?;
            self.ind_weight(g).ok_or(RelError::InhomogeneousGenerator)?;
            if deg > cutoff {
                return Err(RelError::CutoffTooSmall { cutoff, min: deg });
            }
        }

        let try_insert = |ctx: &RelCtx,
                              v: InducedVec,
                              blocks: &mut HashMap<(usize, Root), Block>,
                              bases: &mut BTreeMap<usize, Vec<InducedVec>>,
                              queue: &mut VecDeque<InducedVec>| {
            if v.is_zero() {
                return;
            }
            let deg = ctx.ind_degree(&v).expect("operators preserve degree");
            if deg < min_degree || deg > cutoff {
                return;
            }
            let weight = ctx.ind_weight(&v).expect("operators preserve weight");
            if let Some(known) = &opts.known_dims {
                let target = known.get(&(deg, weight.clone())).copied().unwrap_or(0);
                let have = blocks
                    .get(&(deg, weight.clone()))
                    .map_or(0, |b| b.span.dim());
                if have >= target {
                    return;
                }
            }
            STATS_CANDIDATES.with(|c| c.set(c.get() + 1));
            let block = blocks.entry((deg, weight.clone())).or_insert_with(|| {
                let nb = ctx.n_basis(deg, opts.ambient);
                let positions = nb.weight_blocks.get(&weight).cloned().unwrap_or_default();
                Block { span: EchelonSpan::new(positions.len()), positions }
            });
            let nb = ctx.n_basis(deg, opts.ambient);
            let global = nb.coords(ctx, &v);
            let t0 = std::time::Instant::now();
            let local = restrict_coords(&global, &block.positions);
            let inserted = block.span.insert(&local);
            STATS_INSERT.with(|c| c.set(c.get() + t0.elapsed().as_nanos() as u64));
            if inserted {
                if opts.verify_kernel_membership {
                    assert!(
                        ctx.psi(&v).is_zero(),
                        "closure left the kernel at degree {deg}"
                    );
                }
                bases.entry(deg).or_default().push(v.clone());
                queue.push_back(v);
            }
        };

        for g in generators {
            try_insert(self, g.clone(), &mut blocks, &mut bases, &mut queue);
        }

        // A subspace stable under Lie algebra generators is stable under the
        // whole algebra, so the sweep only needs the simple zero modes plus
        // one mode-shifting generator per direction; the fixpoint equals the
        // closure under every mode in the window.
        let alg = self.alg();
        let mut mode_ops: Vec<(usize, i32)> = Vec::new();
        for i in 0..alg.roots.rank {
            let mut r = vec![0; alg.roots.rank];
            r[i] = 1;
            let p = alg.roots.positive_index(&r).unwrap();
            mode_ops.push((alg.chev.e_index(p), 0));
            mode_ops.push((alg.chev.f_index(p), 0));
        }
        match opts.modes {
            ModeSet::All => {
                mode_ops.push((alg.e_theta(), -1));
                mode_ops.push((alg.f_theta(), 1));
            }
            ModeSet::NonPositive => mode_ops.push((alg.e_theta(), -1)),
            ModeSet::NonNegative => mode_ops.push((alg.f_theta(), 1)),
            ModeSet::ZeroOnly => {}
        }
        // When target dimensions are known, skip computing images whose
        // destination block is already full (the weight shift of every
        // operator is known in advance).
        let saturated = |blocks: &HashMap<(usize, Root), Block>, deg: usize, w: &Root| -> bool {
            let Some(known) = &opts.known_dims else { return false };
            let target = known.get(&(deg, w.clone())).copied().unwrap_or(0);
            blocks.get(&(deg, w.clone())).map_or(0, |b| b.span.dim()) >= target
        };
        while let Some(v) = queue.pop_front() {
            let deg = self.ind_degree(&v).unwrap();
            let weight_v = self.ind_weight(&v).unwrap();
            if opts.with_translation
                && deg + 1 <= cutoff
                && !saturated(&blocks, deg + 1, &weight_v)
            {
                let img = self.ind_apply_d(&v);
                try_insert(self, img, &mut blocks, &mut bases, &mut queue);
            }
            for &(g, n) in &mode_ops {
                let target_deg = deg as i64 - n as i64;
                if target_deg < min_degree as i64 || target_deg > cutoff as i64 {
                    continue;
                }
                let target_weight: Root = weight_v
                    .iter()
                    .zip(&self.alg().chev.weights[g])
                    .map(|(a, b)| a + b)
                    .collect();
                if saturated(&blocks, target_deg as usize, &target_weight) {
                    continue;
                }
                let t0 = std::time::Instant::now();
                let img = self.ind_act(g, n, &v);
                STATS_ACT.with(|c| c.set(c.get() + t0.elapsed().as_nanos() as u64));
                try_insert(self, img, &mut blocks, &mut bases, &mut queue);
            }
        }

        if std::env::var("ANNREL_CLOSURE_STATS").is_ok() {
            eprintln!(
                "closure stats: candidates={} accepted={} act={:.1}s insert={:.1}s",
                STATS_CANDIDATES.with(|c| c.get()),
                bases.values().map(|b| b.len()).sum::<usize>(),
                STATS_ACT.with(|c| c.get()) as f64 / 1e9,
                STATS_INSERT.with(|c| c.get()) as f64 / 1e9,
            );
        }
        let mut dims: BTreeMap<usize, usize> = BTreeMap::new();
        for d in min_degree..=cutoff {
            dims.insert(d, bases.get(&d).map_or(0, |b| b.len()));
        }
        Ok(Closure { dims, bases })
    }

    /// Per-degree dimensions of the submodule of the vacuum module generated
    /// by `gens` under the negative modes and the zero modes; the independent
    /// route onto the image of the induction map.
    pub fn v_submodule_dims(&self, gens: &[State], cutoff: usize) -> BTreeMap<usize, usize> {
        let mut spans: HashMap<(usize, Root), EchelonSpan> = HashMap::new();
        let mut dims: BTreeMap<usize, usize> = BTreeMap::new();
        let mut queue: VecDeque<State> = VecDeque::new();
        let try_insert = |ctx: &RelCtx,
                              v: State,
                              spans: &mut HashMap<(usize, Root), EchelonSpan>,
                              dims: &mut BTreeMap<usize, usize>,
                              queue: &mut VecDeque<State>| {
            if v.is_zero() {
                return;
            }
            let deg = ctx.module.state_degree(&v).expect("homogeneous");
            if deg > cutoff {
                return;
            }
            let weight = ctx.module.weight(v.terms()[0].0);
            let slice = ctx.module.slice(deg);
            let positions = slice.weight_blocks.get(&weight).cloned().unwrap_or_default();
            let span = spans
                .entry((deg, weight))
                .or_insert_with(|| EchelonSpan::new(positions.len()));
            let local = restrict_coords(&slice.coords(&v), &positions);
            if span.insert(&local) {
                *dims.entry(deg).or_default() += 1;
                queue.push_back(v);
            }
        };
        for g in gens {
            try_insert(self, g.clone(), &mut spans, &mut dims, &mut queue);
        }
        let dim_g = self.alg().dim();
        while let Some(v) = queue.pop_front() {
            let deg = self.module.state_degree(&v).unwrap();
            for n in -((cutoff - deg) as i64)..=0 {
                for g in 0..dim_g {
                    let img = self.module.act(g, n as i32, &v);
                    try_insert(self, img, &mut spans, &mut dims, &mut queue);
                }
            }
        }
        dims
    }
}

thread_local! {
    static STATS_CANDIDATES: std::cell::Cell<u64> = const { std::cell::Cell::new(0) };
    static STATS_ACT: std::cell::Cell<u64> = const { std::cell::Cell::new(0) };
    static STATS_INSERT: std::cell::Cell<u64> = const { std::cell::Cell::new(0) };
}

fn restrict_coords(global: &SparseVec, positions: &[usize]) -> SparseVec {
    let entries = global
        .entries()
        .iter()
        .map(|(pos, c)| {
            let local = positions
                .binary_search(pos)
                .expect("coordinate outside the weight block");
            (local, c.clone())
        })
        .collect();
    SparseVec::from_entries(positions.len(), entries)
}

#[cfg(test)]
mod tests {
    use super::super::tests::rel;
    use super::*;

    #[test]
    fn kernel_empty_at_the_bottom_degree() {
        // Psi is injective on 1 (x) R.
        let ctx = rel("A1", 1);
        let dims = ctx.kernel_dims(2, Ambient::Full, None);
        assert_eq!(dims.total, 0);
        assert_eq!(dims.rank, 5);
        assert!(ctx.kernel_psi_block(2, Ambient::Full, None).is_empty());
    }

    #[test]
    fn kernel_at_degree_three_is_spanned_by_sugawara_vectors() {
        let ctx = rel("A1", 1);
        let dims = ctx.kernel_dims(3, Ambient::Full, None);
        assert_eq!(dims.total, 5);
        let basis = ctx.kernel_psi_block(3, Ambient::Full, None);
        assert_eq!(basis.len(), 5);
        for v in &basis {
            assert!(ctx.psi(&v).is_zero());
        }
        // Each q_r reduces to zero against the kernel basis span.
        let nb = ctx.n_basis(3, Ambient::Full);
        let mut span = EchelonSpan::new(nb.dim());
        for v in &basis {
            assert!(span.insert(&nb.coords(&ctx, v)));
        }
        for j in 0..ctx.dim_r() {
            let q = ctx.sugawara_q_basis(j);
            assert!(span.contains(&nb.coords(&ctx, &q)));
        }
    }

    #[test]
    fn degree_four_kernel_contains_the_obvious_relation() {
        let ctx = rel("A1", 1);
        let nb = ctx.n_basis(4, Ambient::Full);
        let basis = ctx.kernel_psi_block(4, Ambient::Full, None);
        assert_eq!(basis.len(), ctx.kernel_dims(4, Ambient::Full, None).total);
        let mut span = EchelonSpan::new(nb.dim());
        for v in &basis {
            assert!(span.insert(&nb.coords(&ctx, v)));
        }
        assert!(span.contains(&nb.coords(&ctx, &ctx.q_obvious())));
        let dq = ctx.ind_apply_d(&ctx.sugawara_q_basis(0));
        assert!(span.contains(&nb.coords(&ctx, &dq)));
    }

    /// Graded dimensions of the level-1 vacuum module's maximal submodule,
    /// from the theta-series character of the irreducible quotient: an
    /// independent counting oracle.
    fn maximal_submodule_dims(name: &str, cutoff: usize) -> Vec<usize> {
        let (rank, dim_g): (usize, usize) = match name {
            "A1" => (1, 3),
            "A2" => (2, 8),
            _ => unreachable!(),
        };
        // Lattice theta series: count root-lattice vectors by half norm.
        let mut theta = vec![0usize; cutoff + 1];
        let bound = 3 * cutoff as i64 + 3;
        let norms: Box<dyn Fn(i64, i64) -> i64> = match name {
            "A1" => Box::new(|m, _| 2 * m * m),
            _ => Box::new(|m, n| 2 * m * m + 2 * n * n - 2 * m * n),
        };
        for m in -bound..=bound {
            let ns: Vec<i64> = if rank == 1 { vec![0] } else { (-bound..=bound).collect() };
            for n in ns {
                let nn = norms(m, n);
                assert!(nn % 2 == 0);
                let half = (nn / 2) as usize;
                if half <= cutoff {
                    theta[half] += 1;
                }
            }
        }
        // 1 / phi(q)^rank.
        let mut phi_inv = vec![0usize; cutoff + 1];
        phi_inv[0] = 1;
        for n in 1..=cutoff {
            for _ in 0..rank {
                for i in n..=cutoff {
                    phi_inv[i] += phi_inv[i - n];
                }
            }
        }
        // Irreducible character = theta * phi_inv; submodule = V - irreducible.
        let mut v_dims = vec![0usize; cutoff + 1];
        v_dims[0] = 1;
        for n in 1..=cutoff {
            for _ in 0..dim_g {
                for i in n..=cutoff {
                    v_dims[i] += v_dims[i - n];
                }
            }
        }
        (0..=cutoff)
            .map(|d| {
                let irr: usize = (0..=d).map(|j| theta[j] * phi_inv[d - j]).sum();
                v_dims[d] - irr
            })
            .collect()
    }

    #[test]
    fn kernel_dims_match_the_character_oracle_a1() {
        // dim ker at degree d = dim N_d - (dim V_d - dim L_d) at level 1.
        let ctx = rel("A1", 1);
        let n1 = maximal_submodule_dims("A1", 6);
        for d in 2..=6usize {
            let dims = ctx.kernel_dims(d, Ambient::Full, None);
            let nb_dim = ctx.n_basis(d, Ambient::Full).dim();
            assert_eq!(dims.total, nb_dim - n1[d], "degree {d}");
            assert_eq!(dims.rank, n1[d], "rank at degree {d}");
        }
    }

    #[test]
    fn image_equals_the_submodule_generated_by_the_top_vector() {
        // The rank of the R-level induction map equals the graded dimension
        // of the submodule generated by the top vector.
        let ctx = rel("A1", 1);
        let sub = ctx.v_submodule_dims(&[ctx.r_space.basis[0].clone()], 5);
        for d in 2..=5usize {
            let dims = ctx.kernel_dims(d, Ambient::RZero, None);
            assert_eq!(dims.rank, sub.get(&d).copied().unwrap_or(0), "degree {d}");
        }
    }

    #[test]
    fn closure_of_nothing_is_zero() {
        let ctx = rel("A1", 1);
        let opts = ClosureOptions {
            modes: ModeSet::All,
            with_translation: true,
            ambient: Ambient::Full,
            min_degree: 3,
            cutoff: 5,
            known_dims: None,
            verify_kernel_membership: false,
        };
        let closure = ctx.submodule_closure(&[], &opts).unwrap();
        assert!(closure.dims.values().all(|&d| d == 0));
    }

    #[test]
    fn closure_rejects_inhomogeneous_generators() {
        let ctx = rel("A1", 1);
        let bad = ctx
            .q_obvious()
            .add(&ctx.ind_apply_d(&ctx.q_obvious()));
        let opts = ClosureOptions {
            modes: ModeSet::All,
            with_translation: true,
            ambient: Ambient::Full,
            min_degree: 3,
            cutoff: 6,
            known_dims: None,
            verify_kernel_membership: false,
        };
        assert!(matches!(
            ctx.submodule_closure(&[bad], &opts),
            Err(RelError::InhomogeneousGenerator)
        ));
    }

    #[test]
    fn zero_mode_closure_misses_the_shifted_vector_until_raising_is_added() {
        // Targeted operator-set ablation: at its own degree, the closure of
        // the obvious relation under zero modes alone does not contain the
        // shifted singular vector; admitting positive modes produces it.
        let ctx = rel("A2", 1);
        let q = ctx.q_obvious();
        let deg = ctx.ind_degree(&q).unwrap();
        let star = ctx.alg().roots.distinguished[0];
        let q_star = ctx.q_star(star).unwrap();
        let star_deg = ctx.ind_degree(&q_star).unwrap();
        assert_eq!(star_deg + 1, deg);

        let zero_only = ClosureOptions {
            modes: ModeSet::ZeroOnly,
            with_translation: false,
            ambient: Ambient::Full,
            min_degree: 3,
            cutoff: deg,
            known_dims: None,
            verify_kernel_membership: false,
        };
        let closure = ctx.submodule_closure(&[q.clone()], &zero_only).unwrap();
        // Nothing lands at the singular degree at all.
        assert_eq!(closure.dims.get(&star_deg), Some(&0));

        let with_raising = ClosureOptions {
            modes: ModeSet::All,
            with_translation: false,
            ambient: Ambient::Full,
            min_degree: 3,
            cutoff: deg,
            known_dims: None,
            verify_kernel_membership: true,
        };
        let closure = ctx.submodule_closure(&[q], &with_raising).unwrap();
        let nb = ctx.n_basis(star_deg, Ambient::Full);
        let mut span = EchelonSpan::new(nb.dim());
        for v in closure.bases.get(&star_deg).unwrap() {
            span.insert(&nb.coords(&ctx, v));
        }
        assert!(span.contains(&nb.coords(&ctx, &q_star)));
    }

    #[test]
    fn closure_matches_kernel_at_small_degree_a1() {
        // The full-operator closure of the obvious relation fills the kernel
        // through degree 5, matching the matrix-rank oracle per degree.
        let ctx = rel("A1", 1);
        let mut known = BTreeMap::new();
        for d in 3..=5usize {
            let dims = ctx.kernel_dims(d, Ambient::Full, None);
            for (w, n) in dims.by_weight {
                known.insert((d, w), n);
            }
        }
        let opts = ClosureOptions {
            modes: ModeSet::All,
            with_translation: true,
            ambient: Ambient::Full,
            min_degree: 3,
            cutoff: 5,
            known_dims: Some(known),
            verify_kernel_membership: true,
        };
        let closure = ctx.submodule_closure(&[ctx.q_obvious()], &opts).unwrap();
        for d in 3..=5usize {
            let expect = ctx.kernel_dims(d, Ambient::Full, None).total;
            assert_eq!(closure.dims.get(&d), Some(&expect), "degree {d}");
        }
    }

    #[test]
    fn phi_kernel_dims_agree_with_psi_kernel_dims() {
        // The intertwiner is an isomorphism, so the graded kernels match.
        let ctx = rel("A1", 1);
        for d in 2..=5usize {
            let psi_dims = ctx.kernel_dims(d, Ambient::Full, None);
            let phi_dims = ctx.kernel_phi_dims(d);
            assert_eq!(psi_dims.total, phi_dims.total, "degree {d}");
        }
    }
}
