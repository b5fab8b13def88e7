//! Finite simple Lie algebras from Cartan data.
//!
//! Root systems are generated from the Cartan matrix by root strings, the
//! invariant form is normalized so the maximal root `theta` has squared
//! length 2, and the Chevalley basis is built with the extraspecial-pair sign
//! convention, giving integer structure constants. Weights live in
//! simple-root coordinates throughout; fundamental-weight coordinates are a
//! conversion, not storage.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{rat, Rational, SparseMat, SparseVec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LieError {
    #[error("rank {rank} is not admissible for family {family:?}")]
    InadmissibleRank { family: Family, rank: usize },
    #[error("cannot parse Cartan type from {0:?}; expected e.g. A1, A2, C2, G2")]
    Parse(String),
    #[error("operation excludes type A1")]
    Sl2Excluded,
    #[error("diagram automorphism is only built for family A with rank >= 2")]
    NoDiagramAutomorphism,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// Which sign is assigned to extraspecial pairs; identities verified by the
/// suite are insensitive to this choice, which one test confirms directly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SignConvention {
    #[default]
    Standard,
    Flipped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self, LieError> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(LieError::InadmissibleRank { family, rank })
        }
    }

    pub fn is_a1(&self) -> bool {
        self.family == Family::A && self.rank == 1
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = LieError;

    fn from_str(s: &str) -> Result<Self, LieError> {
        let s = s.trim();
        let mut chars = s.chars();
        let fam = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(LieError::Parse(s.to_string())),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| LieError::Parse(s.to_string()))?;
        CartanType::new(fam, rank)
    }
}

/// Root in simple-root coordinates.
pub type Root = Vec<i64>;

fn height(r: &[i64]) -> i64 {
    r.iter().sum()
}

fn cartan_matrix(t: CartanType) -> Vec<Vec<i64>> {
    let l = t.rank;
    let mut a = vec![vec![0i64; l]; l];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    // (i, j, a_ij, a_ji) with a[i][j] = <alpha_j, alpha_i^vee>.
    let edge = |a: &mut Vec<Vec<i64>>, i: usize, j: usize, aij: i64, aji: i64| {
        a[i][j] = aij;
        a[j][i] = aji;
    };
    match t.family {
        Family::A => {
            for i in 0..l - 1 {
                edge(&mut a, i, i + 1, -1, -1);
            }
        }
        Family::B => {
            for i in 0..l.saturating_sub(2) {
                edge(&mut a, i, i + 1, -1, -1);
            }
            edge(&mut a, l - 2, l - 1, -1, -2); // last simple root short
        }
        Family::C => {
            for i in 0..l.saturating_sub(2) {
                edge(&mut a, i, i + 1, -1, -1);
            }
            edge(&mut a, l - 2, l - 1, -2, -1); // last simple root long
        }
        Family::D => {
            for i in 0..l - 2 {
                edge(&mut a, i, i + 1, -1, -1);
            }
            edge(&mut a, l - 3, l - 1, -1, -1);
        }
        Family::E => {
            // Chain 1-3-4-5-...-l with node 2 hanging off node 4 (Bourbaki),
            // zero-based: chain 0,2,3,...,l-1 plus edge (1,3).
            edge(&mut a, 0, 2, -1, -1);
            for i in 2..l - 1 {
                edge(&mut a, i, i + 1, -1, -1);
            }
            edge(&mut a, 1, 3, -1, -1);
        }
        Family::F => {
            edge(&mut a, 0, 1, -1, -1);
            edge(&mut a, 1, 2, -1, -2); // alpha3 short
            edge(&mut a, 2, 3, -1, -1);
        }
        Family::G => {
            edge(&mut a, 0, 1, -3, -1); // alpha1 short, alpha2 long
        }
    }
    a
}

/// Root system with the theta-normalized symmetric invariant form.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub cartan_type: CartanType,
    pub rank: usize,
    /// `cartan[i][j] = <alpha_j, alpha_i^vee>`.
    pub cartan: Vec<Vec<i64>>,
    /// `form[i][j] = <alpha_i, alpha_j>`, normalized so `<theta,theta> = 2`.
    pub form: Vec<Vec<Rational>>,
    /// `<alpha_i, alpha_i> / 2`.
    pub half_norms: Vec<Rational>,
    /// Positive roots sorted by (height, lexicographic coordinates).
    pub positive_roots: Vec<Root>,
    pos_index: HashMap<Root, usize>,
    /// Squared lengths of the positive roots under the normalized form.
    pub root_norms: Vec<Rational>,
    pub theta_index: usize,
    /// Weyl vector in simple-root coordinates.
    pub rho: Vec<Rational>,
    pub dual_coxeter: i64,
    /// Simple-root indices i with `<alpha_0, alpha_i^vee> != 0`.
    pub distinguished: Vec<usize>,
}

impl RootSystem {
    pub fn build(t: CartanType) -> Result<Self, LieError> {
        let l = t.rank;
        let cartan = cartan_matrix(t);

        // Symmetrize: d_i * a[i][j] = d_j * a[j][i]; connected diagram, so
        // ratios propagate from node 0.
        let mut d = vec![Rational::zero(); l];
        d[0] = Rational::one();
        let mut todo = vec![0usize];
        while let Some(i) = todo.pop() {
            for j in 0..l {
                if i != j && cartan[i][j] != 0 && d[j].is_zero() {
                    d[j] = &d[i] * rat(cartan[i][j]) / rat(cartan[j][i]);
                    todo.push(j);
                }
            }
        }

        // Positive roots by closing root strings upward in height.
        let pairing = |beta: &[i64], i: usize| -> i64 {
            beta.iter().zip(&cartan[i]).map(|(b, a)| b * a).sum()
        };
        let mut roots: Vec<Root> = (0..l)
            .map(|i| {
                let mut r = vec![0i64; l];
                r[i] = 1;
                r
            })
            .collect();
        let mut seen: HashMap<Root, ()> = roots.iter().cloned().map(|r| (r, ())).collect();
        let mut head = 0;
        while head < roots.len() {
            let beta = roots[head].clone();
            head += 1;
            for i in 0..l {
                let mut p = 0i64;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if down.iter().all(|&c| c == 0) || seen.contains_key(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pairing(&beta, i) > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !seen.contains_key(&up) {
                        seen.insert(up.clone(), ());
                        roots.push(up);
                    }
                }
            }
        }
        roots.sort_by(|a, b| (height(a), a.clone()).cmp(&(height(b), b.clone())));
        let pos_index: HashMap<Root, usize> =
            roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();

        // The maximal root is the unique root of maximal height.
        let theta_index = roots.len() - 1;
        let max_h = height(&roots[theta_index]);
        assert!(
            roots.len() < 2 || height(&roots[roots.len() - 2]) < max_h,
            "maximal root is not unique"
        );

        // Normalize the form so <theta,theta> = 2.
        let raw_norm = |r: &[i64], d: &[Rational]| -> Rational {
            let mut acc = Rational::zero();
            for (i, &ri) in r.iter().enumerate() {
                if ri == 0 {
                    continue;
                }
                for (j, &aij) in cartan[i].iter().enumerate() {
                    if aij != 0 && r[j] != 0 {
                        acc += rat(ri) * rat(r[j]) * &d[i] * rat(aij);
                    }
                }
            }
            acc
        };
        let theta_norm = raw_norm(&roots[theta_index], &d);
        let scale = rat(2) / theta_norm;
        for di in &mut d {
            *di *= &scale;
        }
        let form: Vec<Vec<Rational>> = (0..l)
            .map(|i| (0..l).map(|j| &d[i] * rat(cartan[i][j])).collect())
            .collect();
        let root_norms: Vec<Rational> = roots.iter().map(|r| raw_norm(r, &d)).collect();

        let rho: Vec<Rational> = (0..l)
            .map(|i| {
                let s: i64 = roots.iter().map(|r| r[i]).sum();
                rat(s) / rat(2)
            })
            .collect();

        let mut rs = RootSystem {
            cartan_type: t,
            rank: l,
            cartan,
            form,
            half_norms: d,
            positive_roots: roots,
            pos_index,
            root_norms,
            theta_index,
            rho,
            dual_coxeter: 0,
            distinguished: Vec::new(),
        };

        // g^vee = 1 + <rho, theta^vee> = 1 + <rho, theta> under the
        // normalization <theta,theta> = 2.
        let theta_q: Vec<Rational> = rs.theta().iter().map(|&c| rat(c)).collect();
        let gv = Rational::one() + rs.form_weights(&rs.rho, &theta_q);
        assert!(gv.is_integer(), "dual Coxeter number must be an integer");
        rs.dual_coxeter = i64::try_from(gv.to_integer()).expect("dual Coxeter fits i64");

        rs.distinguished = (0..l)
            .filter(|&i| !rs.pair_coroot(&theta_q, i).is_zero())
            .collect();
        if t.family == Family::A && l >= 2 {
            assert_eq!(rs.distinguished.len(), 2);
        } else {
            assert_eq!(rs.distinguished.len(), 1);
        }

        Ok(rs)
    }

    pub fn theta(&self) -> &Root {
        &self.positive_roots[self.theta_index]
    }

    pub fn n_positive(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn positive_index(&self, coords: &[i64]) -> Option<usize> {
        self.pos_index.get(coords).copied()
    }

    /// Index of a positive root, with the sign stripped off.
    pub fn signed_index(&self, coords: &[i64]) -> Option<(usize, i64)> {
        if let Some(&i) = self.pos_index.get(coords) {
            return Some((i, 1));
        }
        let neg: Root = coords.iter().map(|&c| -c).collect();
        self.pos_index.get(&neg).map(|&i| (i, -1))
    }

    pub fn is_root(&self, coords: &[i64]) -> bool {
        self.signed_index(coords).is_some()
    }

    /// `<la, mu>` for weights in simple-root coordinates.
    pub fn form_weights(&self, la: &[Rational], mu: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, a) in la.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in mu.iter().enumerate() {
                if !b.is_zero() {
                    acc += a * b * &self.form[i][j];
                }
            }
        }
        acc
    }

    /// `<la, alpha_i^vee>`.
    pub fn pair_coroot(&self, la: &[Rational], i: usize) -> Rational {
        la.iter()
            .zip(&self.cartan[i])
            .map(|(c, &a)| c * rat(a))
            .sum()
    }

    /// Casimir scalar `(la + 2 rho, la)` on the highest-weight module of
    /// weight `la` (simple-root coordinates).
    pub fn casimir_eigenvalue(&self, la: &[Rational]) -> Rational {
        let shifted: Vec<Rational> = la
            .iter()
            .zip(&self.rho)
            .map(|(a, r)| a + r * rat(2))
            .collect();
        self.form_weights(&shifted, la)
    }

    /// Weyl dimension of the irreducible module with highest weight `la`.
    pub fn weyl_dim(&self, la: &[Rational]) -> Rational {
        let mut num = Rational::one();
        let mut den = Rational::one();
        let shifted: Vec<Rational> = la.iter().zip(&self.rho).map(|(a, r)| a + r).collect();
        for alpha in &self.positive_roots {
            let aq: Vec<Rational> = alpha.iter().map(|&c| rat(c)).collect();
            num *= self.form_weights(&shifted, &aq);
            den *= self.form_weights(&self.rho, &aq);
        }
        num / den
    }

    /// `<alpha_*, alpha_0^vee> = -<alpha_*, theta^vee>` for a distinguished
    /// index; -2 for A1 and -1 otherwise.
    pub fn star_alpha0_pairing(&self, star: usize) -> i64 {
        let aq: Vec<Rational> = (0..self.rank)
            .map(|j| if j == star { Rational::one() } else { Rational::zero() })
            .collect();
        let theta_q: Vec<Rational> = self.theta().iter().map(|&c| rat(c)).collect();
        // theta^vee = theta under the normalization <theta,theta> = 2.
        let v = -self.form_weights(&aq, &theta_q);
        assert!(v.is_integer());
        let got = i64::try_from(v.to_integer()).unwrap();
        if self.cartan_type.is_a1() {
            assert_eq!(got, -2);
        } else {
            assert_eq!(got, -1);
        }
        got
    }

    /// Weights `r_0 r_* . (k Lambda_0) = k Lambda_0 - alpha_* - (k + 1 -
    /// <alpha_*, alpha_0^vee>) alpha_0`, one per distinguished index.
    pub fn dot_action_weight(&self, level: i64) -> Vec<(usize, AffineWeight)> {
        assert!(level >= 0);
        self.distinguished
            .iter()
            .map(|&star| {
                let pairing = self.star_alpha0_pairing(star);
                let mut finite = vec![Rational::zero(); self.rank];
                finite[star] = -Rational::one();
                let w = AffineWeight {
                    level,
                    alpha0: rat(-(level + 1 - pairing)),
                    finite,
                };
                (star, w)
            })
            .collect()
    }

    /// True iff `theta - alpha_*` is a root and `2 theta - alpha_*` is not,
    /// for every distinguished index. Not defined for A1.
    pub fn check_lemma_5_2(&self) -> Result<bool, LieError> {
        if self.cartan_type.is_a1() {
            return Err(LieError::Sl2Excluded);
        }
        let theta = self.theta().clone();
        Ok(self.distinguished.iter().all(|&star| {
            let mut shifted = theta.clone();
            shifted[star] -= 1;
            let mut doubled: Root = theta.iter().map(|&c| 2 * c).collect();
            doubled[star] -= 1;
            self.is_root(&shifted) && !self.is_root(&doubled)
        }))
    }
}

/// Weight of the affine algebra: coefficients of `Lambda_0`, `alpha_0`, and
/// the finite simple roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineWeight {
    pub level: i64,
    pub alpha0: Rational,
    pub finite: Vec<Rational>,
}

impl AffineWeight {
    /// Weight of a degree-`d` vector of finite weight `mu` in a level-`k`
    /// vacuum-type module: `k Lambda_0 + mu - d (alpha_0 + theta)`.
    pub fn from_degree_weight(rs: &RootSystem, level: i64, degree: i64, mu: &[i64]) -> Self {
        let theta = rs.theta();
        AffineWeight {
            level,
            alpha0: rat(-degree),
            finite: mu
                .iter()
                .zip(theta)
                .map(|(&m, &t)| rat(m - degree * t))
                .collect(),
        }
    }
}

impl fmt::Display for AffineWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*L0 + ({})*a0", self.level, self.alpha0)?;
        for (i, c) in self.finite.iter().enumerate() {
            write!(f, " + ({})*a{}", c, i + 1)?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Chevalley basis
// ---------------------------------------------------------------------------

/// Element of the algebra as a sparse vector over the Chevalley basis.
pub type GVec = SparseVec;

/// Chevalley basis with integer structure constants. Basis enumeration:
/// `h_1..h_l`, then `e_beta` for the positive roots in order, then `e_{-beta}`.
#[derive(Clone, Debug)]
pub struct ChevalleyBasis {
    pub dim: usize,
    pub rank: usize,
    n_pos: usize,
    pub sign_convention: SignConvention,
    bracket_table: Vec<Vec<GVec>>,
    form_table: Vec<Vec<Rational>>,
    /// Finite weight (simple-root coordinates) of each basis element.
    pub weights: Vec<Root>,
    /// Dual bases `{x^i}, {y^i}` with `<x^i, y^j> = delta_ij`.
    pub dual_pairs: Vec<(GVec, GVec)>,
    /// For each non-simple positive root, the (simple index, remainder index)
    /// decomposition used to transport automorphisms.
    decompositions: Vec<Option<(usize, usize)>>,
}

impl ChevalleyBasis {
    pub fn h_index(&self, i: usize) -> usize {
        assert!(i < self.rank);
        i
    }

    pub fn e_index(&self, pos_root: usize) -> usize {
        assert!(pos_root < self.n_pos);
        self.rank + pos_root
    }

    pub fn f_index(&self, pos_root: usize) -> usize {
        assert!(pos_root < self.n_pos);
        self.rank + self.n_pos + pos_root
    }

    /// (positive root index, sign) for a root-vector basis index.
    pub fn root_of_index(&self, idx: usize) -> Option<(usize, i64)> {
        if idx < self.rank {
            None
        } else if idx < self.rank + self.n_pos {
            Some((idx - self.rank, 1))
        } else {
            Some((idx - self.rank - self.n_pos, -1))
        }
    }

    pub fn bracket_indices(&self, i: usize, j: usize) -> &GVec {
        &self.bracket_table[i][j]
    }

    pub fn bracket(&self, a: &GVec, b: &GVec) -> GVec {
        let mut acc = SparseVec::zero(self.dim);
        for (i, ca) in a.entries() {
            for (j, cb) in b.entries() {
                let c = ca * cb;
                acc = acc.add_scaled(&c, &self.bracket_table[*i][*j]);
            }
        }
        acc
    }

    pub fn form_indices(&self, i: usize, j: usize) -> &Rational {
        &self.form_table[i][j]
    }

    pub fn form(&self, a: &GVec, b: &GVec) -> Rational {
        let mut acc = Rational::zero();
        for (i, ca) in a.entries() {
            for (j, cb) in b.entries() {
                let f = &self.form_table[*i][*j];
                if !f.is_zero() {
                    acc += ca * cb * f;
                }
            }
        }
        acc
    }

    pub fn basis_names(&self, rs: &RootSystem) -> Vec<String> {
        let coords = |r: &Root| {
            r.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut names: Vec<String> = (0..self.rank).map(|i| format!("h{}", i + 1)).collect();
        for r in &rs.positive_roots {
            names.push(format!("e[{}]", coords(r)));
        }
        for r in &rs.positive_roots {
            names.push(format!("f[{}]", coords(r)));
        }
        names
    }
}

/// The algebra bundle: root system plus Chevalley basis.
#[derive(Debug)]
pub struct Algebra {
    pub cartan_type: CartanType,
    pub roots: RootSystem,
    pub chev: ChevalleyBasis,
}

impl Algebra {
    pub fn dim(&self) -> usize {
        self.chev.dim
    }

    pub fn e_theta(&self) -> usize {
        self.chev.e_index(self.roots.theta_index)
    }

    pub fn f_theta(&self) -> usize {
        self.chev.f_index(self.roots.theta_index)
    }

    /// `alpha^vee` for a positive root, expressed in the `h_i`.
    pub fn coroot(&self, pos_root: usize) -> GVec {
        let alpha = &self.roots.positive_roots[pos_root];
        let norm = &self.roots.root_norms[pos_root];
        let entries: Vec<(usize, Rational)> = alpha
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let coef = rat(c) * &self.roots.half_norms[i] * rat(2) / norm;
                (i, coef)
            })
            .collect();
        SparseVec::from_entries(self.chev.dim, entries)
    }

    /// `theta^vee` as a combination of the `h_i`.
    pub fn theta_coroot(&self) -> GVec {
        self.coroot(self.roots.theta_index)
    }

    pub fn generator_weight(&self, idx: usize) -> &Root {
        &self.chev.weights[idx]
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct SignedRoot {
    idx: usize,
    sign: i64,
}

struct ConstantsBuilder<'a> {
    rs: &'a RootSystem,
    /// Structure constants on special pairs (i < j, both positive).
    special: HashMap<(usize, usize), Rational>,
}

impl<'a> ConstantsBuilder<'a> {
    fn coords(&self, r: SignedRoot) -> Root {
        self.rs.positive_roots[r.idx]
            .iter()
            .map(|&c| c * r.sign)
            .collect()
    }

    fn sum(&self, a: SignedRoot, b: SignedRoot) -> Option<SignedRoot> {
        let ca = self.coords(a);
        let cb = self.coords(b);
        let s: Root = ca.iter().zip(&cb).map(|(x, y)| x + y).collect();
        if s.iter().all(|&c| c == 0) {
            return None;
        }
        self.rs
            .signed_index(&s)
            .map(|(idx, sign)| SignedRoot { idx, sign })
    }

    /// Longest m >= 0 with beta - m*alpha a root.
    fn string_down(&self, alpha: SignedRoot, beta: SignedRoot) -> i64 {
        let ca = self.coords(alpha);
        let mut cb = self.coords(beta);
        let mut m = 0;
        loop {
            for (b, a) in cb.iter_mut().zip(&ca) {
                *b -= a;
            }
            if cb.iter().all(|&c| c == 0) || !self.rs.is_root(&cb) {
                return m;
            }
            m += 1;
        }
    }

    fn norm(&self, r: SignedRoot) -> Rational {
        self.rs.root_norms[r.idx].clone()
    }

    /// `N_{x,y}` for arbitrary signed roots whose sum is a root, reduced to
    /// the special-pair table.
    fn n_const(&self, x: SignedRoot, y: SignedRoot) -> Rational {
        let s = self.sum(x, y).expect("sum must be a root");
        match (x.sign > 0, y.sign > 0) {
            (true, true) => {
                if x.idx < y.idx {
                    self.special[&(x.idx, y.idx)].clone()
                } else {
                    -self.special[&(y.idx, x.idx)].clone()
                }
            }
            (false, false) => {
                -self.n_const(SignedRoot { sign: 1, ..x }, SignedRoot { sign: 1, ..y })
            }
            (true, false) => {
                if s.sign > 0 {
                    // x = alpha + beta with alpha = -y:
                    // N_{x,-alpha} = -N_{alpha,beta} <beta,beta>/<x,x>.
                    let alpha = SignedRoot { sign: 1, ..y };
                    let beta = s;
                    -self.n_const(alpha, beta) * self.norm(beta) / self.norm(x)
                } else {
                    -self.n_const(
                        SignedRoot { sign: -1, ..x },
                        SignedRoot { sign: 1, ..y },
                    )
                }
            }
            (false, true) => -self.n_const(y, x),
        }
    }
}

fn build_constants(rs: &RootSystem, convention: SignConvention) -> ConstantsBuilder<'_> {
    let mut builder = ConstantsBuilder { rs, special: HashMap::new() };
    let extra_sign = match convention {
        SignConvention::Standard => Rational::one(),
        SignConvention::Flipped => -Rational::one(),
    };
    for g_idx in 0..rs.positive_roots.len() {
        let gamma = &rs.positive_roots[g_idx];
        if height(gamma) == 1 {
            continue;
        }
        // Special pairs (a < b) with sum gamma, ascending in a: the first is
        // the extraspecial pair.
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for a_idx in 0..g_idx {
            let alpha = &rs.positive_roots[a_idx];
            let beta: Root = gamma.iter().zip(alpha).map(|(g, a)| g - a).collect();
            if beta.iter().any(|&c| c < 0) {
                continue;
            }
            if let Some(b_idx) = rs.positive_index(&beta) {
                if a_idx < b_idx {
                    pairs.push((a_idx, b_idx));
                }
            }
        }
        assert!(!pairs.is_empty(), "non-simple root admits a special pair");
        let (e_idx, h_idx) = pairs[0];
        let eps = SignedRoot { idx: e_idx, sign: 1 };
        let eta = SignedRoot { idx: h_idx, sign: 1 };
        let p = builder.string_down(eps, eta);
        builder
            .special
            .insert((e_idx, h_idx), rat(p + 1) * &extra_sign);

        for &(a_idx, b_idx) in &pairs[1..] {
            let alpha = SignedRoot { idx: a_idx, sign: 1 };
            let beta = SignedRoot { idx: b_idx, sign: 1 };
            let minus_alpha = SignedRoot { idx: a_idx, sign: -1 };
            let gamma_s = SignedRoot { idx: g_idx, sign: 1 };
            let mut acc = Rational::zero();
            if let Some(ema) = builder.sum(eta, minus_alpha) {
                acc += builder.n_const(eta, minus_alpha) * builder.n_const(ema, eps);
            }
            if let Some(epa) = builder.sum(eps, minus_alpha) {
                acc += builder.n_const(minus_alpha, eps) * builder.n_const(epa, eta);
            }
            let n_eps_eta = builder.special[&(e_idx, h_idx)].clone();
            let value = builder.norm(gamma_s) / builder.norm(beta) / n_eps_eta * acc;
            assert!(value.is_integer(), "structure constant must be integral");
            let expect = builder.string_down(alpha, beta) + 1;
            assert_eq!(
                value.clone().abs(),
                rat(expect),
                "structure constant magnitude must be p+1"
            );
            builder.special.insert((a_idx, b_idx), value);
        }
    }
    builder
}

/// Builds the root system and Chevalley basis for a Cartan type. Structure
/// constants are integers; the form satisfies `<theta,theta> = 2`.
pub fn build_algebra(t: CartanType, convention: SignConvention) -> Result<Algebra, LieError> {
    let rs = RootSystem::build(t)?;
    let l = rs.rank;
    let m = rs.n_positive();
    let dim = l + 2 * m;
    let consts = build_constants(&rs, convention);

    let signed = |idx: usize, sign: i64| SignedRoot { idx, sign };
    let basis_index = |r: SignedRoot| -> usize {
        if r.sign > 0 {
            l + r.idx
        } else {
            l + m + r.idx
        }
    };

    // Coroot coefficients: alpha^vee = sum_i c_i alpha_i^vee.
    let coroot_entries = |idx: usize| -> Vec<(usize, Rational)> {
        let alpha = &rs.positive_roots[idx];
        alpha
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let coef = rat(c) * &rs.half_norms[i] * rat(2) / &rs.root_norms[idx];
                assert!(coef.is_integer());
                (i, coef)
            })
            .collect()
    };

    let mut bracket_table = vec![vec![SparseVec::zero(dim); dim]; dim];
    // [h_i, e_{s beta}] = s <beta, alpha_i^vee> e_{s beta}
    for i in 0..l {
        for p in 0..m {
            let pairing: i64 = rs.positive_roots[p]
                .iter()
                .zip(&rs.cartan[i])
                .map(|(b, a)| b * a)
                .sum();
            for sign in [1i64, -1] {
                let col = basis_index(signed(p, sign));
                let v = SparseVec::from_entries(dim, vec![(col, rat(sign * pairing))]);
                bracket_table[col][i] = v.scaled(&rat(-1));
                bracket_table[i][col] = v;
            }
        }
    }
    // Root-vector pairs.
    for p in 0..m {
        for q in 0..m {
            for sp in [1i64, -1] {
                for sq in [1i64, -1] {
                    let x = signed(p, sp);
                    let y = signed(q, sq);
                    let (bi, bj) = (basis_index(x), basis_index(y));
                    if p == q && sp != sq {
                        // [e_beta, e_{-beta}] = beta^vee.
                        let h = SparseVec::from_entries(dim, coroot_entries(p));
                        bracket_table[bi][bj] =
                            if sp > 0 { h } else { h.scaled(&rat(-1)) };
                    } else if p == q {
                        // [e, e] = 0.
                    } else if let Some(s) = consts.sum(x, y) {
                        let n = consts.n_const(x, y);
                        bracket_table[bi][bj] =
                            SparseVec::from_entries(dim, vec![(basis_index(s), n)]);
                    }
                }
            }
        }
    }

    // Invariant form: <h_i,h_j> = a[i][j]/d_j; <e_beta, e_{-beta}> = 2/<beta,beta>.
    let mut form_table = vec![vec![Rational::zero(); dim]; dim];
    for i in 0..l {
        for j in 0..l {
            form_table[i][j] = rat(rs.cartan[i][j]) / &rs.half_norms[j];
        }
    }
    for p in 0..m {
        let v = rat(2) / &rs.root_norms[p];
        form_table[l + p][l + m + p] = v.clone();
        form_table[l + m + p][l + p] = v;
    }

    // Weights.
    let mut weights: Vec<Root> = vec![vec![0; l]; dim];
    for p in 0..m {
        weights[l + p] = rs.positive_roots[p].clone();
        weights[l + m + p] = rs.positive_roots[p].iter().map(|&c| -c).collect();
    }

    // Dual pairs: invert the Cartan block of the form, pair e with scaled f.
    let gram_rows: Vec<SparseVec> = (0..l)
        .map(|i| {
            let mut entries: Vec<(usize, Rational)> =
                (0..l).map(|j| (j, form_table[i][j].clone())).collect();
            entries.push((l + i, Rational::one()));
            SparseVec::from_entries(2 * l, entries)
        })
        .collect();
    let rref = crate::exact::rref(&SparseMat::new(2 * l, gram_rows));
    assert_eq!(rref.len(), l, "Cartan Gram block must be invertible");
    let mut gram_inv = vec![vec![Rational::zero(); l]; l];
    for row in &rref {
        let pivot = row.entries()[0].0;
        assert!(pivot < l);
        for (c, v) in row.entries() {
            if *c >= l {
                gram_inv[pivot][*c - l] = v.clone();
            }
        }
    }
    let mut dual_pairs: Vec<(GVec, GVec)> = Vec::with_capacity(dim);
    for j in 0..l {
        let x = SparseVec::unit(dim, j);
        let y = SparseVec::from_entries(
            dim,
            (0..l)
                .filter(|&i| !gram_inv[i][j].is_zero())
                .map(|i| (i, gram_inv[i][j].clone()))
                .collect(),
        );
        dual_pairs.push((x, y));
    }
    for p in 0..m {
        let scale = &rs.root_norms[p] / rat(2);
        dual_pairs.push((
            SparseVec::unit(dim, l + p),
            SparseVec::from_entries(dim, vec![(l + m + p, scale.clone())]),
        ));
        dual_pairs.push((
            SparseVec::unit(dim, l + m + p),
            SparseVec::from_entries(dim, vec![(l + p, scale)]),
        ));
    }

    // Decomposition of non-simple positive roots for automorphism transport.
    let decompositions: Vec<Option<(usize, usize)>> = rs
        .positive_roots
        .iter()
        .map(|gamma| {
            if height(gamma) == 1 {
                return None;
            }
            for i in 0..l {
                if gamma[i] == 0 {
                    continue;
                }
                let mut beta = gamma.clone();
                beta[i] -= 1;
                if let Some(b_idx) = rs.positive_index(&beta) {
                    return Some((i, b_idx));
                }
            }
            unreachable!("positive root without simple summand")
        })
        .collect();

    let chev = ChevalleyBasis {
        dim,
        rank: l,
        n_pos: m,
        sign_convention: convention,
        bracket_table,
        form_table,
        weights,
        dual_pairs,
        decompositions,
    };
    Ok(Algebra { cartan_type: t, roots: rs, chev })
}

/// An algebra automorphism given by the images of the basis elements.
#[derive(Clone, Debug)]
pub struct BasisAutomorphism {
    pub images: Vec<GVec>,
}

impl BasisAutomorphism {
    pub fn apply(&self, v: &GVec) -> GVec {
        let dim = self.images.len();
        let mut acc = SparseVec::zero(dim);
        for (i, c) in v.entries() {
            acc = acc.add_scaled(c, &self.images[*i]);
        }
        acc
    }
}

/// The order-two Dynkin diagram automorphism of type A (rank >= 2), fixed by
/// `e_i -> e_{l+1-i}` on the Chevalley generators and transported to every
/// root vector through the bracket.
pub fn diagram_automorphism(alg: &Algebra) -> Result<BasisAutomorphism, LieError> {
    let t = alg.cartan_type;
    if t.family != Family::A || t.rank < 2 {
        return Err(LieError::NoDiagramAutomorphism);
    }
    let l = t.rank;
    let dim = alg.chev.dim;
    let perm = |i: usize| l - 1 - i;

    let mut images: Vec<Option<GVec>> = vec![None; dim];
    for i in 0..l {
        images[i] = Some(SparseVec::unit(dim, perm(i)));
    }
    let sigma_root = |r: &Root| -> Root {
        let mut out = vec![0; l];
        for (i, &c) in r.iter().enumerate() {
            out[perm(i)] = c;
        }
        out
    };
    let simple_index = |i: usize| -> usize {
        let mut r = vec![0; l];
        r[i] = 1;
        alg.roots.positive_index(&r).unwrap()
    };
    // Simple root vectors map with sign +1, both signs.
    for (p, root) in alg.roots.positive_roots.iter().enumerate() {
        if height(root) != 1 {
            continue;
        }
        let target = alg.roots.positive_index(&sigma_root(root)).unwrap();
        images[alg.chev.e_index(p)] = Some(SparseVec::unit(dim, alg.chev.e_index(target)));
        images[alg.chev.f_index(p)] = Some(SparseVec::unit(dim, alg.chev.f_index(target)));
    }
    // Non-simple roots by height ascending, via the recorded decomposition.
    for (p, root) in alg.roots.positive_roots.iter().enumerate() {
        let Some((i, b_idx)) = alg.chev.decompositions[p] else { continue };
        let sp = simple_index(i);
        // [e_{alpha_i}, e_beta] = N e_gamma.
        let n = alg
            .chev
            .bracket_indices(alg.chev.e_index(sp), alg.chev.e_index(b_idx))
            .get(alg.chev.e_index(p));
        assert!(!n.is_zero());
        let a_img = images[alg.chev.e_index(sp)].clone().unwrap();
        let b_img = images[alg.chev.e_index(b_idx)].clone().unwrap();
        let img = alg
            .chev
            .bracket(&a_img, &b_img)
            .scaled(&(Rational::one() / &n));
        let target = alg.roots.positive_index(&sigma_root(root)).unwrap();
        let e_t = alg.chev.e_index(target);
        assert!(img.entries().len() == 1 && img.entries()[0].0 == e_t);
        let c = img.entries()[0].1.clone();
        images[alg.chev.e_index(p)] = Some(img);
        // f_gamma -> (1/c) f_{sigma gamma} so that coroots map to coroots.
        images[alg.chev.f_index(p)] = Some(SparseVec::from_entries(
            dim,
            vec![(alg.chev.f_index(target), Rational::one() / c)],
        ));
    }
    Ok(BasisAutomorphism {
        images: images.into_iter().map(Option::unwrap).collect(),
    })
}
