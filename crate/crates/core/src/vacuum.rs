//! The graded vacuum module of level `k`.
//!
//! States are rational combinations of PBW monomials in negative modes acting
//! on the vacuum. Monomial factors are kept sorted by (mode ascending, then a
//! fixed enumeration of the Chevalley basis); left multiplication by any mode
//! re-straightens into this canonical form with the affine commutator
//! `[x(i), y(j)] = [x,y](i+j) + i delta_{i+j,0} <x,y> c`, where the central
//! element acts as the level. Straightening results are memoized per context.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num::{One, Zero};

use crate::exact::{rat, Rational, SparseVec};
use crate::lie::{Algebra, GVec, Root};

/// Interned PBW monomial handle; 0 is the vacuum.
pub type MonoId = u32;

pub const VACUUM: MonoId = 0;

/// One PBW factor: (Chevalley basis index, mode).
pub type Factor = (u16, i32);

#[inline]
fn factor_key(f: &Factor) -> (i32, u16) {
    (f.1, f.0)
}

/// Rational combination of PBW monomials, sorted by monomial id.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct State {
    terms: Vec<(MonoId, Rational)>,
}

impl State {
    pub fn zero() -> Self {
        State { terms: Vec::new() }
    }

    pub fn single(id: MonoId, coeff: Rational) -> Self {
        if coeff.is_zero() {
            State::zero()
        } else {
            State { terms: vec![(id, coeff)] }
        }
    }

    pub fn from_terms(mut raw: Vec<(MonoId, Rational)>) -> Self {
        raw.sort_by_key(|(i, _)| *i);
        let mut terms: Vec<(MonoId, Rational)> = Vec::with_capacity(raw.len());
        for (i, v) in raw {
            match terms.last_mut() {
                Some((j, acc)) if *j == i => *acc += v,
                _ => terms.push((i, v)),
            }
        }
        terms.retain(|(_, v)| !v.is_zero());
        State { terms }
    }

    pub fn terms(&self) -> &[(MonoId, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, id: MonoId) -> Rational {
        match self.terms.binary_search_by_key(&id, |(i, _)| *i) {
            Ok(p) => self.terms[p].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return State::zero();
        }
        State {
            terms: self.terms.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Rational, other: &Self) -> Self {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut ia, mut ib) = (0, 0);
        while ia < self.terms.len() || ib < other.terms.len() {
            let ka = self.terms.get(ia).map(|(i, _)| *i);
            let kb = other.terms.get(ib).map(|(i, _)| *i);
            match (ka, kb) {
                (Some(i), Some(j)) if i == j => {
                    let v = &self.terms[ia].1 + &other.terms[ib].1 * c;
                    if !v.is_zero() {
                        terms.push((i, v));
                    }
                    ia += 1;
                    ib += 1;
                }
                (Some(i), Some(j)) if i < j => {
                    terms.push((i, self.terms[ia].1.clone()));
                    ia += 1;
                }
                (Some(_), Some(j)) => {
                    terms.push((j, &other.terms[ib].1 * c));
                    ib += 1;
                }
                (Some(i), None) => {
                    terms.push((i, self.terms[ia].1.clone()));
                    ia += 1;
                }
                (None, Some(j)) => {
                    terms.push((j, &other.terms[ib].1 * c));
                    ib += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        State { terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(&Rational::one(), other)
    }
}

#[derive(Default)]
struct Interner {
    map: HashMap<Vec<Factor>, MonoId>,
    monos: Vec<Vec<Factor>>,
}

/// Ordered basis of one degree-homogeneous component, with weight blocking.
#[derive(Debug)]
pub struct GradedSlice {
    pub degree: usize,
    pub monos: Vec<MonoId>,
    index: HashMap<MonoId, usize>,
    pub weights: Vec<Root>,
    pub weight_blocks: BTreeMap<Root, Vec<usize>>,
}

impl GradedSlice {
    pub fn dim(&self) -> usize {
        self.monos.len()
    }

    pub fn position(&self, id: MonoId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    /// Coordinates of a (degree-homogeneous) state in this slice.
    pub fn coords(&self, v: &State) -> SparseVec {
        let entries = v
            .terms()
            .iter()
            .map(|(id, c)| {
                let pos = self
                    .position(*id)
                    .expect("state contains a monomial outside the slice");
                (pos, c.clone())
            })
            .collect();
        SparseVec::from_entries(self.dim(), entries)
    }
}

/// Version tag for the monomial enumeration order, recorded in cache files.
pub const PBW_ORDER_VERSION: &str = "pbw-v1:mode-asc,gen-asc";

/// The level-`k` vacuum module context: straightening, grading, slices.
pub struct ModuleCtx {
    pub alg: Arc<Algebra>,
    pub level: i64,
    level_q: Rational,
    interner: RwLock<Interner>,
    act_memo: RwLock<HashMap<(u16, i32, MonoId), Arc<State>>>,
    slices: RwLock<HashMap<usize, Arc<GradedSlice>>>,
    cache_dir: RwLock<Option<std::path::PathBuf>>,
}

impl ModuleCtx {
    pub fn new(alg: Arc<Algebra>, level: i64) -> Self {
        let mut interner = Interner::default();
        interner.map.insert(Vec::new(), VACUUM);
        interner.monos.push(Vec::new());
        ModuleCtx {
            alg,
            level,
            level_q: rat(level),
            interner: RwLock::new(interner),
            act_memo: RwLock::new(HashMap::new()),
            slices: RwLock::new(HashMap::new()),
            cache_dir: RwLock::new(None),
        }
    }

    /// Directs slice enumerations through an advisory on-disk cache.
    pub fn set_cache_dir(&self, dir: Option<std::path::PathBuf>) {
        *self.cache_dir.write().unwrap() = dir;
    }

    pub fn vacuum(&self) -> State {
        State::single(VACUUM, Rational::one())
    }

    pub fn intern(&self, factors: &[Factor]) -> MonoId {
        debug_assert!(
            factors.windows(2).all(|w| factor_key(&w[0]) <= factor_key(&w[1])),
            "monomial factors must be sorted"
        );
        debug_assert!(factors.iter().all(|f| f.1 < 0), "modes must be negative");
        if let Some(&id) = self.interner.read().unwrap().map.get(factors) {
            return id;
        }
        let mut guard = self.interner.write().unwrap();
        if let Some(&id) = guard.map.get(factors) {
            return id;
        }
        let id = guard.monos.len() as MonoId;
        guard.map.insert(factors.to_vec(), id);
        guard.monos.push(factors.to_vec());
        id
    }

    pub fn factors(&self, id: MonoId) -> Vec<Factor> {
        self.interner.read().unwrap().monos[id as usize].clone()
    }

    pub fn degree(&self, id: MonoId) -> usize {
        self.factors(id).iter().map(|f| (-f.1) as usize).sum()
    }

    pub fn state_degree(&self, v: &State) -> Option<usize> {
        let mut deg = None;
        for (id, _) in v.terms() {
            let d = self.degree(*id);
            match deg {
                None => deg = Some(d),
                Some(e) if e == d => {}
                _ => return None,
            }
        }
        deg
    }

    pub fn weight(&self, id: MonoId) -> Root {
        let rank = self.alg.roots.rank;
        let mut w = vec![0i64; rank];
        for (g, _) in self.factors(id) {
            for (i, c) in self.alg.chev.weights[g as usize].iter().enumerate() {
                w[i] += c;
            }
        }
        w
    }

    /// Left action of the mode `x(n)` for a Chevalley basis element `x`.
    pub fn act(&self, gen: usize, n: i32, v: &State) -> State {
        let mut raw = Vec::new();
        for (id, c) in v.terms() {
            for (j, q) in self.act_mono(gen as u16, n, *id).terms() {
                raw.push((*j, q * c));
            }
        }
        State::from_terms(raw)
    }

    /// Shared-handle variant of the single-monomial action.
    pub fn act_mono_arc(&self, gen: u16, n: i32, id: MonoId) -> Arc<State> {
        self.act_mono(gen, n, id)
    }

    /// Left action of a general algebra element's mode.
    pub fn act_gvec(&self, x: &GVec, n: i32, v: &State) -> State {
        let mut raw = Vec::new();
        for (g, c) in x.entries() {
            for (j, q) in self.act(*g, n, v).terms() {
                raw.push((*j, q * c));
            }
        }
        State::from_terms(raw)
    }

    /// The central element acts as multiplication by the level.
    pub fn act_central(&self, v: &State) -> State {
        v.scaled(&self.level_q)
    }

    /// The degree derivation `d` (eigenvalue `-degree` on homogeneous states).
    pub fn act_d_element(&self, v: &State) -> State {
        let mut acc = State::zero();
        for (id, c) in v.terms() {
            let d = self.degree(*id) as i64;
            acc = acc.add_scaled(&(c * rat(-d)), &State::single(*id, Rational::one()));
        }
        acc
    }

    fn act_mono(&self, g: u16, n: i32, id: MonoId) -> Arc<State> {
        let fs = self.factors(id);
        // Annihilation base case and cheap sorted prepend.
        if n < 0 && (fs.is_empty() || (n, g) <= factor_key(&fs[0])) {
            let mut out = Vec::with_capacity(fs.len() + 1);
            out.push((g, n));
            out.extend_from_slice(&fs);
            return Arc::new(State::single(self.intern(&out), Rational::one()));
        }
        if n >= 0 && fs.is_empty() {
            return Arc::new(State::zero());
        }
        if let Some(hit) = self.act_memo.read().unwrap().get(&(g, n, id)) {
            return hit.clone();
        }
        // Swap past the head factor.
        let (hg, hn) = fs[0];
        let tail = self.intern(&fs[1..]);
        let tail_state = State::single(tail, Rational::one());
        let inner = self.act_mono(g, n, tail);
        let mut acc = self.act(hg as usize, hn, &inner);
        let bracket = self.alg.chev.bracket_indices(g as usize, hg as usize);
        for (b, c) in bracket.entries() {
            acc = acc.add_scaled(c, &self.act(*b, n + hn, &tail_state));
        }
        if n + hn == 0 {
            let pairing = self.alg.chev.form_indices(g as usize, hg as usize);
            if !pairing.is_zero() {
                let c = rat(n as i64) * pairing * &self.level_q;
                acc = acc.add_scaled(&c, &tail_state);
            }
        }
        self.act_memo
            .write()
            .unwrap()
            .entry((g, n, id))
            .or_insert_with(|| Arc::new(acc))
            .clone()
    }

    /// Canonicalizes an arbitrary factor sequence into a state by acting
    /// right-to-left on the vacuum.
    pub fn product(&self, factors: &[Factor]) -> State {
        let mut state = self.vacuum();
        for &(g, n) in factors.iter().rev() {
            state = self.act(g as usize, n, &state);
        }
        state
    }

    /// The translation operator `D`: `D 1 = 0`, `D(x(-n) u) = n x(-n-1) u +
    /// x(-n) D u`, degree +1.
    pub fn apply_d(&self, v: &State) -> State {
        let mut raw = Vec::new();
        for (id, coeff) in v.terms() {
            let fs = self.factors(*id);
            for i in 0..fs.len() {
                let (g, n) = fs[i];
                // Suffix after i is still sorted; rebuild leftward.
                let mut state = State::single(self.intern(&fs[i + 1..]), Rational::one());
                state = self.act(g as usize, n - 1, &state);
                for &(pg, pn) in fs[..i].iter().rev() {
                    state = self.act(pg as usize, pn, &state);
                }
                let c = coeff * rat(-(n as i64));
                for (j, q) in state.terms() {
                    raw.push((*j, q * &c));
                }
            }
        }
        State::from_terms(raw)
    }

    /// `D^m / m!`.
    pub fn apply_d_power_scaled(&self, v: &State, m: usize) -> State {
        let mut out = v.clone();
        let mut factorial = Rational::one();
        for j in 1..=m {
            out = self.apply_d(&out);
            factorial *= rat(j as i64);
        }
        out.scaled(&(Rational::one() / factorial))
    }

    /// The degree operator: multiplies each homogeneous component by its degree.
    pub fn apply_l0(&self, v: &State) -> State {
        let mut acc = State::zero();
        for (id, c) in v.terms() {
            let d = self.degree(*id) as i64;
            if d != 0 {
                acc = acc.add_scaled(&(c * rat(d)), &State::single(*id, Rational::one()));
            }
        }
        acc
    }

    /// Complete deterministically ordered basis of the degree-`d` component.
    pub fn slice(&self, d: usize) -> Arc<GradedSlice> {
        if let Some(s) = self.slices.read().unwrap().get(&d) {
            return s.clone();
        }
        let cache_dir = self.cache_dir.read().unwrap().clone();
        let algebra = self.alg.cartan_type.to_string();
        let monos = cache_dir
            .as_deref()
            .and_then(|dir| crate::cache::load_slice(dir, &algebra, d, self.alg.dim()))
            .unwrap_or_else(|| {
                let computed = self.enumerate_monomials(d);
                if let Some(dir) = cache_dir.as_deref() {
                    crate::cache::store_slice(dir, &algebra, d, &computed);
                }
                computed
            });
        let ids: Vec<MonoId> = monos.iter().map(|f| self.intern(f)).collect();
        let index = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
        let weights: Vec<Root> = ids.iter().map(|id| self.weight(*id)).collect();
        let mut weight_blocks: BTreeMap<Root, Vec<usize>> = BTreeMap::new();
        for (i, w) in weights.iter().enumerate() {
            weight_blocks.entry(w.clone()).or_default().push(i);
        }
        let slice = Arc::new(GradedSlice { degree: d, monos: ids, index, weights, weight_blocks });
        self.slices
            .write()
            .unwrap()
            .entry(d)
            .or_insert_with(|| slice.clone())
            .clone()
    }

    /// All monomials of degree `d` as sorted factor sequences, in the
    /// canonical enumeration order.
    pub fn enumerate_monomials(&self, d: usize) -> Vec<Vec<Factor>> {
        let dim = self.alg.dim() as u16;
        let mut out = Vec::new();
        let mut cur: Vec<Factor> = Vec::new();
        fn rec(
            dim: u16,
            remaining: i64,
            min: Option<Factor>,
            cur: &mut Vec<Factor>,
            out: &mut Vec<Vec<Factor>>,
        ) {
            if remaining == 0 {
                out.push(cur.clone());
                return;
            }
            for n in -remaining..=-1 {
                let n = n as i32;
                for g in 0..dim {
                    if let Some(m) = min {
                        if (n, g) < factor_key(&m) {
                            continue;
                        }
                    }
                    cur.push((g, n));
                    rec(dim, remaining + n as i64, Some((g, n)), cur, out);
                    cur.pop();
                }
            }
        }
        rec(dim, d as i64, None, &mut cur, &mut out);
        out
    }

    /// Renders a state for reports and diagnostics.
    pub fn format_state(&self, v: &State) -> String {
        if v.is_zero() {
            return "0".to_string();
        }
        let names = self.alg.chev.basis_names(&self.alg.roots);
        let mut parts = Vec::new();
        for (id, c) in v.terms() {
            let fs = self.factors(*id);
            let mono = if fs.is_empty() {
                "|0>".to_string()
            } else {
                let body: String = fs
                    .iter()
                    .map(|(g, n)| format!("{}({})", names[*g as usize], n))
                    .collect::<Vec<_>>()
                    .join("");
                format!("{body}|0>")
            };
            parts.push(format!("({c})*{mono}"));
        }
        parts.join(" + ")
    }
}
