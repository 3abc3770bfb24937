//! The small quantum group for sl(2), seen through its category of
//! weight-graded modules.  A module is a Z-graded vector space with blocks
//! E: V_λ → V_{λ+2} and F: V_λ → V_{λ−2}; K acts on V_λ by q^λ (left) or
//! q^{−λ} (right), where q is ζ or ζ⁻¹ according to the twist tag.
//!
//! Right modules are stored as the linear maps x ↦ x·E and x ↦ x·F.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use serde_json::{Value, json};

use crate::cyclo::CycloNum;
use crate::linalg::{Mat, Quotient, SparseRref};
use crate::rootdata::{Convention, RootDatum, Weight};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
    fn sign(self) -> i64 {
        match self {
            Side::Left => 1,
            Side::Right => -1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Twist {
    #[serde(rename = "zeta")]
    Zeta,
    #[serde(rename = "zeta^-1")]
    ZetaInv,
}

impl Twist {
    pub fn flip(self) -> Twist {
        match self {
            Twist::Zeta => Twist::ZetaInv,
            Twist::ZetaInv => Twist::Zeta,
        }
    }
    fn sign(self) -> i64 {
        match self {
            Twist::Zeta => 1,
            Twist::ZetaInv => -1,
        }
    }
}

/// ζ^k for ζ = ζ_M^{M/l}.
pub fn zeta_int(order: u32, l: u32, k: i64) -> CycloNum {
    CycloNum::root_pow(order, k * (order / l) as i64)
}

thread_local! {
    static QINT: RefCell<HashMap<(u32, u32, i64), CycloNum>> = RefCell::new(HashMap::new());
}

/// The balanced quantum integer [m] = (ζ^m − ζ^{−m})/(ζ − ζ^{−1}).  It is
/// invariant under ζ ↦ ζ⁻¹.
pub fn qint(order: u32, l: u32, m: i64) -> CycloNum {
    if let Some(v) = QINT.with(|c| c.borrow().get(&(order, l, m)).cloned()) {
        return v;
    }
    let v = if m < 0 {
        -qint(order, l, -m)
    } else {
        let mut s = CycloNum::zero(order);
        for k in 0..m {
            s += &zeta_int(order, l, m - 1 - 2 * k);
        }
        s
    };
    QINT.with(|c| c.borrow_mut().insert((order, l, m), v.clone()));
    v
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    order: u32,
    l: u32,
    side: Side,
    twist: Twist,
    dims: BTreeMap<i64, usize>,
    /// Keyed by source weight.
    e: BTreeMap<i64, Mat>,
    f: BTreeMap<i64, Mat>,
}

impl GradedModule {
    /// Builds a module from blocks; zero-dimensional weights are dropped and
    /// blocks touching them are ignored.
    pub fn from_blocks(
        order: u32,
        l: u32,
        side: Side,
        twist: Twist,
        dims: BTreeMap<i64, usize>,
        e: BTreeMap<i64, Mat>,
        f: BTreeMap<i64, Mat>,
    ) -> Result<GradedModule> {
        let dims: BTreeMap<i64, usize> = dims.into_iter().filter(|(_, d)| *d > 0).collect();
        let mut m = GradedModule { order, l, side, twist, dims, e: BTreeMap::new(), f: BTreeMap::new() };
        for (shift, src) in [(2, e), (-2, f)] {
            for (w, b) in src {
                let (ds, dt) = (m.dim_at(w), m.dim_at(w + shift));
                if ds == 0 || dt == 0 {
                    continue;
                }
                if b.shape() != (dt, ds) {
                    return Err(Error::Shape(format!("block at weight {w}: {:?} vs ({dt}, {ds})", b.shape())));
                }
                if b.order() != order {
                    return Err(Error::OrderMismatch(b.order(), order));
                }
                if !b.is_zero() {
                    if shift == 2 { m.e.insert(w, b) } else { m.f.insert(w, b) };
                }
            }
        }
        Ok(m)
    }

    pub fn zero_module(order: u32, l: u32, side: Side, twist: Twist) -> GradedModule {
        GradedModule { order, l, side, twist, dims: BTreeMap::new(), e: BTreeMap::new(), f: BTreeMap::new() }
    }

    pub fn order(&self) -> u32 {
        self.order
    }
    pub fn l(&self) -> u32 {
        self.l
    }
    pub fn ell(&self) -> i64 {
        if self.l % 2 == 1 { self.l as i64 } else { self.l as i64 / 2 }
    }
    pub fn side(&self) -> Side {
        self.side
    }
    pub fn twist(&self) -> Twist {
        self.twist
    }
    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }
    pub fn dim(&self) -> usize {
        self.dims.values().sum()
    }
    pub fn dim_at(&self, w: i64) -> usize {
        self.dims.get(&w).copied().unwrap_or(0)
    }
    /// Weights with nonzero dimension, ascending.
    pub fn weights(&self) -> Vec<i64> {
        self.dims.keys().copied().collect()
    }
    pub fn highest_weight(&self) -> Option<i64> {
        self.dims.keys().next_back().copied()
    }
    pub fn lowest_weight(&self) -> Option<i64> {
        self.dims.keys().next().copied()
    }
    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn same_kind(&self, o: &GradedModule) -> bool {
        self.order == o.order && self.l == o.l && self.side == o.side && self.twist == o.twist
    }

    /// E: V_w → V_{w+2}.
    pub fn e_block(&self, w: i64) -> Mat {
        self.e.get(&w).cloned().unwrap_or_else(|| Mat::zeros(self.order, self.dim_at(w + 2), self.dim_at(w)))
    }

    /// F: V_w → V_{w−2}.
    pub fn f_block(&self, w: i64) -> Mat {
        self.f.get(&w).cloned().unwrap_or_else(|| Mat::zeros(self.order, self.dim_at(w - 2), self.dim_at(w)))
    }

    pub fn e_ref(&self, w: i64) -> Option<&Mat> {
        self.e.get(&w)
    }
    pub fn f_ref(&self, w: i64) -> Option<&Mat> {
        self.f.get(&w)
    }

    /// q = ζ or ζ⁻¹.
    pub fn q_pow(&self, k: i64) -> CycloNum {
        zeta_int(self.order, self.l, self.twist.sign() * k)
    }

    /// The scalar by which K acts on V_w.
    pub fn k_scalar(&self, w: i64) -> CycloNum {
        self.q_pow(self.side.sign() * w)
    }

    pub fn qint(&self, m: i64) -> CycloNum {
        qint(self.order, self.l, m)
    }

    /// E applied `k` times starting at weight w.
    pub fn e_power(&self, w: i64, k: usize) -> Mat {
        let mut acc = Mat::identity(self.order, self.dim_at(w));
        for j in 0..k {
            acc = self.e_block(w + 2 * j as i64).matmul(&acc);
        }
        acc
    }

    pub fn f_power(&self, w: i64, k: usize) -> Mat {
        let mut acc = Mat::identity(self.order, self.dim_at(w));
        for j in 0..k {
            acc = self.f_block(w - 2 * j as i64).matmul(&acc);
        }
        acc
    }

    /// Checks E^ℓ = F^ℓ = 0 and EF − FE = [λ] on every weight space.
    pub fn check(&self) -> Result<()> {
        let ell = self.ell() as usize;
        for &w in self.dims.keys() {
            let d = self.dim_at(w);
            let ef = self.e_block(w - 2).matmul(&self.f_block(w));
            let fe = self.f_block(w + 2).matmul(&self.e_block(w));
            let want = Mat::scalar(self.order, d, &self.qint(w));
            if &ef - &fe != want {
                return Err(Error::Invalid(format!("commutator relation fails at weight {w}")));
            }
            if !self.e_power(w, ell).is_zero() || !self.f_power(w, ell).is_zero() {
                return Err(Error::Invalid(format!("nilpotency fails at weight {w}")));
            }
        }
        Ok(())
    }

    /// The Casimir FE + (q^{λ+1} + q^{−λ−1})/(q − q⁻¹)² on V_λ.
    pub fn casimir_block(&self, w: i64) -> Mat {
        let fe = self.f_block(w + 2).matmul(&self.e_block(w));
        let c = casimir_value(self.order, self.l, self.twist, w);
        &fe + &Mat::scalar(self.order, self.dim_at(w), &c)
    }

    pub fn direct_sum(parts: &[&GradedModule]) -> Result<GradedModule> {
        let first = parts.first().ok_or_else(|| Error::Invalid("empty direct sum".into()))?;
        if parts.iter().any(|p| !p.same_kind(first)) {
            return Err(Error::Invalid("direct sum of modules of different kinds".into()));
        }
        let mut dims = BTreeMap::new();
        for p in parts {
            for (&w, &d) in &p.dims {
                *dims.entry(w).or_insert(0) += d;
            }
        }
        let mut e = BTreeMap::new();
        let mut f = BTreeMap::new();
        for &w in dims.keys() {
            let eb: Vec<Mat> = parts.iter().map(|p| p.e_block(w)).collect();
            let fb: Vec<Mat> = parts.iter().map(|p| p.f_block(w)).collect();
            e.insert(w, Mat::block_diag(first.order, &eb.iter().collect::<Vec<_>>()));
            f.insert(w, Mat::block_diag(first.order, &fb.iter().collect::<Vec<_>>()));
        }
        GradedModule::from_blocks(first.order, first.l, first.side, first.twist, dims, e, f)
    }

    /// The submodule spanned per weight by the columns of `sub` (assumed
    /// stable), with its inclusion.
    pub fn restrict(&self, sub: &BTreeMap<i64, Mat>) -> Result<(GradedModule, ModuleMap)> {
        let dims: BTreeMap<i64, usize> = sub.iter().map(|(&w, b)| (w, b.cols())).filter(|x| x.1 > 0).collect();
        let mut e = BTreeMap::new();
        let mut f = BTreeMap::new();
        for (&w, b) in sub {
            if b.cols() == 0 {
                continue;
            }
            for (shift, target) in [(2i64, &mut e), (-2i64, &mut f)] {
                let Some(t) = sub.get(&(w + shift)).filter(|t| t.cols() > 0) else {
                    let img = if shift == 2 { self.e_block(w) } else { self.f_block(w) }.matmul(b);
                    if !img.is_zero() {
                        return Err(Error::Invalid(format!("subspace not stable at weight {w}")));
                    }
                    continue;
                };
                let img = if shift == 2 { self.e_block(w) } else { self.f_block(w) }.matmul(b);
                let x = t.solve(&img).ok_or_else(|| Error::Invalid(format!("subspace not stable at weight {w}")))?;
                target.insert(w, x);
            }
        }
        let m = GradedModule::from_blocks(self.order, self.l, self.side, self.twist, dims, e, f)?;
        let incl = ModuleMap::from_blocks(&m, self, sub.iter().filter(|(_, b)| b.cols() > 0).map(|(&w, b)| (w, b.clone())).collect());
        Ok((m, incl))
    }

    /// The quotient by a stable subspace, with the projection and a
    /// (non-equivariant) section.
    pub fn quotient(&self, sub: &BTreeMap<i64, Mat>) -> Result<(GradedModule, ModuleMap, BTreeMap<i64, Mat>)> {
        let mut qs: BTreeMap<i64, Quotient> = BTreeMap::new();
        for (&w, &d) in &self.dims {
            let s = sub.get(&w).cloned().unwrap_or_else(|| Mat::zeros(self.order, d, 0));
            qs.insert(w, Quotient::new(self.order, d, &s));
        }
        let dims: BTreeMap<i64, usize> = qs.iter().map(|(&w, q)| (w, q.dim())).collect();
        let mut e = BTreeMap::new();
        let mut f = BTreeMap::new();
        for (&w, q) in &qs {
            if let Some(t) = qs.get(&(w + 2)) {
                e.insert(w, t.proj.matmul(&self.e_block(w)).matmul(&q.lift));
            }
            if let Some(t) = qs.get(&(w - 2)) {
                f.insert(w, t.proj.matmul(&self.f_block(w)).matmul(&q.lift));
            }
        }
        let m = GradedModule::from_blocks(self.order, self.l, self.side, self.twist, dims, e, f)?;
        let proj = ModuleMap::from_blocks(self, &m, qs.iter().map(|(&w, q)| (w, q.proj.clone())).collect());
        let lift = qs.into_iter().map(|(w, q)| (w, q.lift)).collect();
        Ok((m, proj, lift))
    }

    /// The submodule generated by the given vectors (columns, per weight).
    pub fn generate(&self, gens: &BTreeMap<i64, Mat>) -> BTreeMap<i64, Mat> {
        let mut span: BTreeMap<i64, Mat> = BTreeMap::new();
        let mut queue: Vec<(i64, Mat)> = gens.iter().map(|(&w, m)| (w, m.clone())).collect();
        while let Some((w, vecs)) = queue.pop() {
            let d = self.dim_at(w);
            if d == 0 || vecs.cols() == 0 {
                continue;
            }
            let cur = span.remove(&w).unwrap_or_else(|| Mat::zeros(self.order, d, 0));
            let old = cur.cols();
            let joined = Mat::hstack(self.order, d, &[&cur, &vecs]).col_space();
            let grew = joined.cols() > old;
            if grew {
                let new = joined.block(0, old, d, joined.cols() - old);
                queue.push((w + 2, self.e_block(w).matmul(&new)));
                queue.push((w - 2, self.f_block(w).matmul(&new)));
            }
            span.insert(w, joined);
        }
        span
    }

    /// Simplicity test: E has a one-dimensional kernel and its generator
    /// spans the module.
    pub fn is_simple(&self) -> bool {
        let mut kers = BTreeMap::new();
        let mut total = 0;
        for &w in self.dims.keys() {
            let k = self.e_block(w).nullspace();
            total += k.cols();
            if k.cols() > 0 {
                kers.insert(w, k);
            }
        }
        if total != 1 {
            return false;
        }
        let span = self.generate(&kers);
        span.values().map(|m| m.cols()).sum::<usize>() == self.dim()
    }

    /// ∨: (M^∨)_λ = (M_{−λ})*, switching sides.
    pub fn dual_vee(&self) -> GradedModule {
        let dims: BTreeMap<i64, usize> = self.dims.iter().map(|(&w, &d)| (-w, d)).collect();
        let e: BTreeMap<i64, Mat> = self.dims.keys().map(|&w| (-w, self.e_block(w - 2).transpose())).collect();
        let f: BTreeMap<i64, Mat> = self.dims.keys().map(|&w| (-w, self.f_block(w + 2).transpose())).collect();
        GradedModule::from_blocks(self.order, self.l, self.side.flip(), self.twist, dims, e, f).expect("dual blocks")
    }

    /// s: the antipode twist, switching sides and keeping weights.
    pub fn twist_s(&self) -> GradedModule {
        let mut e = BTreeMap::new();
        let mut f = BTreeMap::new();
        for &w in self.dims.keys() {
            let (ce, cf) = match self.side {
                Side::Left => (-self.q_pow(-w - 2), -self.q_pow(w)),
                Side::Right => (-self.q_pow(w), -self.q_pow(-(w - 2))),
            };
            e.insert(w, self.e_block(w).scale(&ce));
            f.insert(w, self.f_block(w).scale(&cf));
        }
        GradedModule::from_blocks(self.order, self.l, self.side.flip(), self.twist, self.dims.clone(), e, f)
            .expect("twist blocks")
    }

    /// The rigid dual *, equal to s∘∨.
    pub fn star(&self) -> GradedModule {
        self.dual_vee().twist_s()
    }

    /// Applies ζ_M ↦ ζ_M⁻¹ to every entry and flips the twist tag.
    pub fn galois_twist(&self) -> GradedModule {
        let g = |m: &BTreeMap<i64, Mat>| m.iter().map(|(&w, b)| (w, b.galois(-1))).collect();
        GradedModule {
            order: self.order,
            l: self.l,
            side: self.side,
            twist: self.twist.flip(),
            dims: self.dims.clone(),
            e: g(&self.e),
            f: g(&self.f),
        }
    }

    /// The duality D: the Galois twist followed by the weight-preserving dual
    /// with E and F exchanged by transposition.
    pub fn duality_d(&self) -> GradedModule {
        let g = self.galois_twist();
        let e = g.dims.keys().map(|&w| (w, g.f_block(w + 2).transpose())).collect();
        let f = g.dims.keys().map(|&w| (w, g.e_block(w - 2).transpose())).collect();
        GradedModule::from_blocks(g.order, g.l, g.side, g.twist, g.dims.clone(), e, f).expect("dual blocks")
    }

    /// JSON dump `{weights, E, F, twist, side}`.
    pub fn to_json(&self) -> Value {
        let blocks = |m: &BTreeMap<i64, Mat>| -> Value {
            m.iter()
                .map(|(w, b)| {
                    let rows: Vec<Vec<Value>> = (0..b.rows())
                        .map(|i| (0..b.cols()).map(|j| serde_json::to_value(b.get(i, j)).unwrap()).collect())
                        .collect();
                    json!({"weight": w, "matrix": rows})
                })
                .collect()
        };
        json!({
            "weights": self.dims.iter().rev().map(|(w, d)| json!({"weight": w, "dim": d})).collect::<Vec<_>>(),
            "E": blocks(&self.e),
            "F": blocks(&self.f),
            "twist": self.twist,
            "side": self.side,
        })
    }
}

/// Eigenvalue of the Casimir on a highest-weight module of highest weight μ.
pub fn casimir_value(order: u32, l: u32, twist: Twist, mu: i64) -> CycloNum {
    let s = twist.sign();
    let q = |k: i64| zeta_int(order, l, s * k);
    let d = &q(1) - &q(-1);
    let num = &q(mu + 1) + &q(-mu - 1);
    num.checked_div(&(&d * &d)).expect("q is not ±1")
}

/// A weight-preserving linear map between graded spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    order: u32,
    src: BTreeMap<i64, usize>,
    tgt: BTreeMap<i64, usize>,
    blocks: BTreeMap<i64, Mat>,
}

impl ModuleMap {
    pub fn from_blocks(src: &GradedModule, tgt: &GradedModule, blocks: BTreeMap<i64, Mat>) -> ModuleMap {
        ModuleMap::from_dims(src.order, src.dims.clone(), tgt.dims.clone(), blocks)
    }

    pub fn from_dims(
        order: u32,
        src: BTreeMap<i64, usize>,
        tgt: BTreeMap<i64, usize>,
        blocks: BTreeMap<i64, Mat>,
    ) -> ModuleMap {
        let blocks = blocks
            .into_iter()
            .filter(|(w, b)| {
                let ok = src.get(w).copied().unwrap_or(0) > 0 && tgt.get(w).copied().unwrap_or(0) > 0;
                if ok {
                    assert_eq!(b.shape(), (tgt[w], src[w]), "map block shape at weight {w}");
                }
                ok
            })
            .collect();
        ModuleMap { order, src, tgt, blocks }
    }

    pub fn zero(src: &GradedModule, tgt: &GradedModule) -> ModuleMap {
        ModuleMap::from_blocks(src, tgt, BTreeMap::new())
    }

    pub fn identity(m: &GradedModule) -> ModuleMap {
        let blocks = m.dims.iter().map(|(&w, &d)| (w, Mat::identity(m.order, d))).collect();
        ModuleMap::from_blocks(m, m, blocks)
    }

    pub fn scalar(m: &GradedModule, c: &CycloNum) -> ModuleMap {
        let blocks = m.dims.iter().map(|(&w, &d)| (w, Mat::scalar(m.order, d, c))).collect();
        ModuleMap::from_blocks(m, m, blocks)
    }

    pub fn order(&self) -> u32 {
        self.order
    }
    pub fn src_dims(&self) -> &BTreeMap<i64, usize> {
        &self.src
    }
    pub fn tgt_dims(&self) -> &BTreeMap<i64, usize> {
        &self.tgt
    }

    pub fn block(&self, w: i64) -> Mat {
        self.blocks.get(&w).cloned().unwrap_or_else(|| {
            Mat::zeros(self.order, self.tgt.get(&w).copied().unwrap_or(0), self.src.get(&w).copied().unwrap_or(0))
        })
    }

    pub fn block_ref(&self, w: i64) -> Option<&Mat> {
        self.blocks.get(&w)
    }

    /// self ∘ other.
    pub fn compose(&self, other: &ModuleMap) -> ModuleMap {
        assert_eq!(other.tgt, self.src, "composition of incompatible maps");
        let blocks = other
            .blocks
            .iter()
            .filter_map(|(w, b)| self.blocks.get(w).map(|a| (*w, a.matmul(b))))
            .collect();
        ModuleMap::from_dims(self.order, other.src.clone(), self.tgt.clone(), blocks)
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        assert!(self.src == other.src && self.tgt == other.tgt, "sum of incompatible maps");
        let mut blocks = self.blocks.clone();
        for (w, b) in &other.blocks {
            let nb = match blocks.get(w) {
                Some(a) => a + b,
                None => b.clone(),
            };
            blocks.insert(*w, nb);
        }
        ModuleMap { order: self.order, src: self.src.clone(), tgt: self.tgt.clone(), blocks }
    }

    pub fn scale(&self, c: &CycloNum) -> ModuleMap {
        let blocks = self.blocks.iter().map(|(&w, b)| (w, b.scale(c))).collect();
        ModuleMap { order: self.order, src: self.src.clone(), tgt: self.tgt.clone(), blocks }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(|b| b.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.tgt && self.src.iter().all(|(w, _)| self.block(*w).is_identity())
    }

    pub fn rank(&self) -> usize {
        self.blocks.values().map(|b| b.rank()).sum()
    }

    pub fn is_iso(&self) -> bool {
        self.src == self.tgt && self.src.keys().all(|&w| self.block(w).is_invertible())
    }

    pub fn inverse(&self) -> Option<ModuleMap> {
        if self.src != self.tgt {
            return None;
        }
        let mut blocks = BTreeMap::new();
        for &w in self.src.keys() {
            blocks.insert(w, self.block(w).inverse()?);
        }
        Some(ModuleMap { order: self.order, src: self.tgt.clone(), tgt: self.src.clone(), blocks })
    }

    /// Whether the map commutes with E and F.
    pub fn is_intertwiner(&self, src: &GradedModule, tgt: &GradedModule) -> bool {
        if src.dims != self.src || tgt.dims != self.tgt {
            return false;
        }
        src.dims.keys().all(|&w| {
            let e1 = self.block(w + 2).matmul(&src.e_block(w));
            let e2 = tgt.e_block(w).matmul(&self.block(w));
            let f1 = self.block(w - 2).matmul(&src.f_block(w));
            let f2 = tgt.f_block(w).matmul(&self.block(w));
            e1 == e2 && f1 == f2
        })
    }

    /// Kernel, per weight (columns).
    pub fn kernel(&self) -> BTreeMap<i64, Mat> {
        self.src.keys().map(|&w| (w, self.block(w).nullspace())).collect()
    }

    /// Image, per weight (columns).
    pub fn image(&self) -> BTreeMap<i64, Mat> {
        self.tgt.keys().map(|&w| (w, self.block(w).col_space())).collect()
    }

    /// The transpose, as a map between the ∨-duals.
    pub fn dual_vee(&self) -> ModuleMap {
        let neg = |d: &BTreeMap<i64, usize>| d.iter().map(|(&w, &n)| (-w, n)).collect();
        let blocks = self.blocks.iter().map(|(&w, b)| (-w, b.transpose())).collect();
        ModuleMap::from_dims(self.order, neg(&self.tgt), neg(&self.src), blocks)
    }

    /// The same map between the D-duals (Galois twist then transpose).
    pub fn duality_d(&self) -> ModuleMap {
        let blocks = self.blocks.iter().map(|(&w, b)| (w, b.galois(-1).transpose())).collect();
        ModuleMap::from_dims(self.order, self.tgt.clone(), self.src.clone(), blocks)
    }
}

/// Accumulates linear equations Σ A·X·B = 0 in unknown blocks X.
pub(crate) struct EqBuilder {
    pub order: u32,
    pub rows: Vec<BTreeMap<usize, CycloNum>>,
}

impl EqBuilder {
    pub fn new(order: u32) -> EqBuilder {
        EqBuilder { order, rows: Vec::new() }
    }

    /// Reserves an r×c block of equations; returns its base index.
    pub fn alloc(&mut self, r: usize, c: usize) -> usize {
        let base = self.rows.len();
        self.rows.resize_with(base + r * c, BTreeMap::new);
        base
    }

    /// Adds sign·(A X B) to the equation block at `base` with `cols` columns,
    /// where X is the unknown block at `var` of shape `vr`×`vc`; `None`
    /// stands for an identity.
    #[allow(clippy::too_many_arguments)]
    pub fn add(&mut self, base: usize, cols: usize, a: Option<&Mat>, var: usize, vr: usize, vc: usize, b: Option<&Mat>, sign: i64) {
        let out_r = a.map_or(vr, |a| a.rows());
        let out_c = b.map_or(vc, |b| b.cols());
        debug_assert_eq!(out_c, cols);
        let one = CycloNum::one(self.order);
        for i in 0..vr {
            for j in 0..vc {
                let ar: Vec<(usize, &CycloNum)> = match a {
                    None => vec![(i, &one)],
                    Some(a) => (0..out_r).filter(|&r| !a.get(r, i).is_zero()).map(|r| (r, a.get(r, i))).collect(),
                };
                if ar.is_empty() {
                    continue;
                }
                let bc: Vec<(usize, &CycloNum)> = match b {
                    None => vec![(j, &one)],
                    Some(b) => (0..out_c).filter(|&c| !b.get(j, c).is_zero()).map(|c| (c, b.get(j, c))).collect(),
                };
                for &(r, x) in &ar {
                    for &(c, y) in &bc {
                        let v = (x * y).scale_int(sign);
                        let row = &mut self.rows[base + r * cols + c];
                        let k = var + i * vc + j;
                        let nv = match row.get(&k) {
                            Some(o) => o + &v,
                            None => v,
                        };
                        if nv.is_zero() {
                            row.remove(&k);
                        } else {
                            row.insert(k, nv);
                        }
                    }
                }
            }
        }
    }

    pub fn solver(self, nvars: usize) -> SparseRref {
        let mut s = SparseRref::new(self.order, nvars);
        for r in self.rows {
            if !r.is_empty() {
                s.push(r.into_iter().collect());
            }
        }
        s
    }
}

/// Offsets of per-weight unknown blocks Hom(M_w, N_w).
fn hom_layout(m: &GradedModule, n: &GradedModule) -> (BTreeMap<i64, usize>, usize) {
    let mut off = BTreeMap::new();
    let mut k = 0;
    for (&w, &d) in &m.dims {
        let dn = n.dim_at(w);
        if dn > 0 {
            off.insert(w, k);
            k += d * dn;
        }
    }
    (off, k)
}

/// Equations for X to commute with E and F.
fn hom_equations(m: &GradedModule, n: &GradedModule, off: &BTreeMap<i64, usize>) -> EqBuilder {
    let mut eq = EqBuilder::new(m.order);
    for (&w, &dm) in &m.dims {
        for shift in [2i64, -2] {
            let dt = n.dim_at(w + shift);
            if dt == 0 {
                continue;
            }
            let base = eq.alloc(dt, dm);
            // X_{w+s} · op_M(w)
            if let (Some(&o), Some(op)) =
                (off.get(&(w + shift)), if shift == 2 { m.e_ref(w) } else { m.f_ref(w) })
            {
                eq.add(base, dm, None, o, dt, m.dim_at(w + shift), Some(op), 1);
            }
            // − op_N(w) · X_w
            if let (Some(&o), Some(op)) = (off.get(&w), if shift == 2 { n.e_ref(w) } else { n.f_ref(w) }) {
                eq.add(base, dm, Some(op), o, n.dim_at(w), dm, None, -1);
            }
        }
    }
    eq
}

fn unpack_map(m: &GradedModule, n: &GradedModule, off: &BTreeMap<i64, usize>, v: &[CycloNum]) -> ModuleMap {
    let blocks = off
        .iter()
        .map(|(&w, &o)| {
            let (r, c) = (n.dim_at(w), m.dim_at(w));
            (w, Mat::from_fn(m.order, r, c, |i, j| v[o + i * c + j].clone()))
        })
        .collect();
    ModuleMap::from_blocks(m, n, blocks)
}

/// A basis of Hom(M, N).
pub fn hom_basis(m: &GradedModule, n: &GradedModule) -> Vec<ModuleMap> {
    assert!(m.same_kind(n), "Hom between modules of different kinds");
    let (off, nv) = hom_layout(m, n);
    if nv == 0 {
        return Vec::new();
    }
    let solver = hom_equations(m, n, &off).solver(nv);
    solver.nullspace().iter().map(|v| unpack_map(m, n, &off, v)).collect()
}

pub fn hom_dim(m: &GradedModule, n: &GradedModule) -> usize {
    let (off, nv) = hom_layout(m, n);
    if nv == 0 {
        return 0;
    }
    nv - hom_equations(m, n, &off).solver(nv).rank()
}

/// Some intertwiner X: M → N with X∘ι = g for a given ι: U → M and
/// g: U → N, if one exists.
pub fn extend_map(m: &GradedModule, n: &GradedModule, iota: &ModuleMap, g: &ModuleMap) -> Option<ModuleMap> {
    let (off, nv) = hom_layout(m, n);
    let mut eq = hom_equations(m, n, &off);
    // inhomogeneous part: extra unknown t with X ι − t g = 0, t = 1
    let t = nv;
    for (&w, &o) in &off {
        let Some(ib) = iota.block_ref(w) else { continue };
        let du = ib.cols();
        let base = eq.alloc(n.dim_at(w), du);
        eq.add(base, du, None, o, n.dim_at(w), m.dim_at(w), Some(ib), 1);
        let gb = g.block(w);
        for r in 0..gb.rows() {
            for c in 0..gb.cols() {
                let v = -gb.get(r, c);
                if !v.is_zero() {
                    eq.rows[base + r * du + c].insert(t, v);
                }
            }
        }
    }
    for (&w, gb) in &g.blocks {
        if !off.contains_key(&w) && !gb.is_zero() {
            return None;
        }
    }
    let solver = eq.solver(nv + 1);
    let ns = solver.nullspace();
    let v = ns.into_iter().find(|v| !v[t].is_zero())?;
    let s = v[t].inv().ok()?;
    let v: Vec<CycloNum> = v.iter().map(|x| x * &s).collect();
    Some(unpack_map(m, n, &off, &v))
}

/// dim Ext¹_C(M, N) from first-order deformations of the action on N ⊕ M.
pub fn ext1(m: &GradedModule, n: &GradedModule) -> usize {
    assert!(m.same_kind(n), "Ext between modules of different kinds");
    let order = m.order;
    let ell = m.ell() as usize;
    // unknowns: e_w: M_w → N_{w+2}, f_w: M_w → N_{w−2}
    let mut eoff = BTreeMap::new();
    let mut foff = BTreeMap::new();
    let mut nv = 0;
    for (&w, &d) in &m.dims {
        let de = n.dim_at(w + 2);
        if de > 0 {
            eoff.insert(w, nv);
            nv += de * d;
        }
        let df = n.dim_at(w - 2);
        if df > 0 {
            foff.insert(w, nv);
            nv += df * d;
        }
    }
    let mut eq = EqBuilder::new(order);
    for (&w, &dm) in &m.dims {
        let dn = n.dim_at(w);
        if dn == 0 {
            continue;
        }
        // E_N f_w + e_{w−2} F_M − F_N e_w − f_{w+2} E_M = 0 on M_w → N_w
        let base = eq.alloc(dn, dm);
        if let (Some(&o), Some(a)) = (foff.get(&w), n.e_ref(w - 2)) {
            eq.add(base, dm, Some(a), o, n.dim_at(w - 2), dm, None, 1);
        }
        if let (Some(&o), Some(b)) = (eoff.get(&(w - 2)), m.f_ref(w)) {
            eq.add(base, dm, None, o, dn, m.dim_at(w - 2), Some(b), 1);
        }
        if let (Some(&o), Some(a)) = (eoff.get(&w), n.f_ref(w + 2)) {
            eq.add(base, dm, Some(a), o, n.dim_at(w + 2), dm, None, -1);
        }
        if let (Some(&o), Some(b)) = (foff.get(&(w + 2)), m.e_ref(w)) {
            eq.add(base, dm, None, o, dn, m.dim_at(w + 2), Some(b), -1);
        }
    }
    // nilpotency: Σ_k op_N^k x op_M^{ℓ−1−k} = 0
    for (&w, &dm) in &m.dims {
        for shift in [2i64, -2] {
            let top = w + shift * ell as i64;
            let dt = n.dim_at(top);
            if dt == 0 {
                continue;
            }
            let base = eq.alloc(dt, dm);
            for k in 0..ell {
                let j = ell - 1 - k;
                let mid = w + shift * j as i64;
                let offs = if shift == 2 { &eoff } else { &foff };
                let Some(&o) = offs.get(&mid) else { continue };
                let b = if shift == 2 { m.e_power(w, j) } else { m.f_power(w, j) };
                let a = if shift == 2 { n.e_power(mid + 2, k) } else { n.f_power(mid - 2, k) };
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                eq.add(base, dm, Some(&a), o, n.dim_at(mid + shift), m.dim_at(mid), Some(&b), 1);
            }
        }
    }
    let z = nv - eq.solver(nv).rank();
    let (_, hv) = hom_layout(m, n);
    let b = hv - hom_dim(m, n);
    z - b
}

/// Shared data for computations at one root of unity.
pub struct Engine {
    rd: RootDatum,
    order: u32,
    conv: Convention,
    pub(crate) negate_braiding: bool,
    pub(crate) cache: Mutex<crate::tensorcat::Cache>,
}

impl Engine {
    pub fn new(rd: RootDatum, order: Option<u32>, conv: Option<Convention>) -> Result<Engine> {
        let order = order.unwrap_or_else(|| rd.default_order());
        let base = rd.default_order();
        if order % base != 0 {
            return Err(Error::Invalid(format!("order {order} must be a multiple of 2·det(A)·l = {base}")));
        }
        let conv = conv.unwrap_or_else(|| Convention::default_for(rd.l()));
        Ok(Engine { rd, order, conv, negate_braiding: false, cache: Mutex::new(Default::default()) })
    }

    pub fn sl2(l: u32) -> Engine {
        Engine::new(RootDatum::sl2(l), None, None).expect("sl2 engine")
    }

    /// Flips the sign of every braiding. Only useful for testing checks.
    #[doc(hidden)]
    pub fn with_negated_braiding(mut self) -> Engine {
        self.negate_braiding = true;
        self
    }

    pub fn rd(&self) -> &RootDatum {
        &self.rd
    }
    pub fn order(&self) -> u32 {
        self.order
    }
    pub fn l(&self) -> u32 {
        self.rd.l()
    }
    pub fn ell(&self) -> i64 {
        self.rd.ell()
    }
    pub fn convention(&self) -> Convention {
        self.conv
    }

    /// ζ^k.
    pub fn zeta(&self, k: i64) -> CycloNum {
        zeta_int(self.order, self.l(), k)
    }

    /// ζ^e for rational e.
    pub fn zeta_frac(&self, num: i64, den: i64) -> Result<CycloNum> {
        CycloNum::zeta_pow(self.order, self.l(), num, den)
    }

    pub fn qint(&self, m: i64) -> CycloNum {
        qint(self.order, self.l(), m)
    }

    fn rank1(&self) -> Result<()> {
        if self.rd.rank() != 1 {
            return Err(Error::Unsupported(format!("module computations need rank 1, datum has rank {}", self.rd.rank())));
        }
        Ok(())
    }

    fn chain(&self, twist: Twist, weights: Vec<i64>, e: Vec<CycloNum>, f: Vec<CycloNum>) -> GradedModule {
        // weights ascending by 2; e[k]: weights[k] → weights[k+1]; f[k]: weights[k+1] → weights[k]
        let o = self.order;
        let dims = weights.iter().map(|&w| (w, 1)).collect();
        let em = weights.iter().zip(&e).map(|(&w, c)| (w, Mat::scalar(o, 1, c))).collect();
        let fm = weights.iter().skip(1).zip(&f).map(|(&w, c)| (w, Mat::scalar(o, 1, c))).collect();
        GradedModule::from_blocks(o, self.l(), Side::Left, twist, dims, em, fm).expect("chain blocks")
    }

    /// The Verma module M(λ): basis F^a v, a < ℓ, with E F^a v = [a][λ−a+1] F^{a−1} v.
    pub fn verma_tw(&self, lam: i64, twist: Twist) -> Result<GradedModule> {
        self.rank1()?;
        let ell = self.ell();
        let weights: Vec<i64> = (0..ell).rev().map(|a| lam - 2 * a).collect();
        // weights[k] = λ − 2a with a = ℓ−1−k
        let e = (0..ell - 1).map(|k| {
            let a = ell - 1 - k;
            qint(self.order, self.l(), a) * qint(self.order, self.l(), lam - a + 1)
        });
        let f = (0..ell - 1).map(|_| CycloNum::one(self.order));
        Ok(self.chain(twist, weights, e.collect(), f.collect()))
    }

    pub fn verma(&self, lam: i64) -> Result<GradedModule> {
        self.verma_tw(lam, Twist::Zeta)
    }

    /// The co-Verma module M⁺(λ) of lowest weight λ: basis E^a w with
    /// F E^a w = −[a][λ+a−1] E^{a−1} w.
    pub fn coverma_tw(&self, lam: i64, twist: Twist) -> Result<GradedModule> {
        self.rank1()?;
        let ell = self.ell();
        let weights: Vec<i64> = (0..ell).map(|a| lam + 2 * a).collect();
        let e = (0..ell - 1).map(|_| CycloNum::one(self.order));
        let f = (1..ell).map(|a| -(qint(self.order, self.l(), a) * qint(self.order, self.l(), lam + a - 1)));
        Ok(self.chain(twist, weights, e.collect(), f.collect()))
    }

    pub fn coverma(&self, lam: i64) -> Result<GradedModule> {
        self.coverma_tw(lam, Twist::Zeta)
    }

    /// L(λ): M(λ) modulo the kernel of its contravariant form, whose value on
    /// F^a v is Π_{k≤a} [k][λ−k+1].
    pub fn simple_tw(&self, lam: i64, twist: Twist) -> Result<GradedModule> {
        let m = self.verma_tw(lam, twist)?;
        let mut form = CycloNum::one(self.order);
        let mut kernel = BTreeMap::new();
        for a in 0..self.ell() {
            if a > 0 {
                form = &form * &(self.qint(a) * self.qint(lam - a + 1));
            }
            if form.is_zero() {
                kernel.insert(lam - 2 * a, Mat::identity(self.order, 1));
            }
        }
        Ok(m.quotient(&kernel)?.0)
    }

    pub fn simple(&self, lam: i64) -> Result<GradedModule> {
        self.simple_tw(lam, Twist::Zeta)
    }

    /// The unit object B.
    pub fn unit(&self) -> GradedModule {
        self.one_dim(0).expect("unit")
    }

    /// The one-dimensional module of weight k; exists iff [k] = 0.
    pub fn one_dim(&self, k: i64) -> Result<GradedModule> {
        if !self.qint(k).is_zero() {
            return Err(Error::Invalid(format!("no one-dimensional module of weight {k}")));
        }
        GradedModule::from_blocks(
            self.order,
            self.l(),
            Side::Left,
            Twist::Zeta,
            [(k, 1)].into_iter().collect(),
            BTreeMap::new(),
            BTreeMap::new(),
        )
    }

    pub fn steinberg(&self) -> Result<GradedModule> {
        self.simple(self.rd.steinberg_weight().0[0])
    }

    /// n(λ) for the engine's convention.
    pub fn balance_n(&self, lam: i64) -> num_rational::Rational64 {
        self.rd.balance_n(&Weight::sl2(lam), self.conv)
    }

    /// ζ^{λ·μ}.
    pub fn zeta_dot(&self, a: i64, b: i64) -> CycloNum {
        let d = self.rd.dot(&Weight::sl2(a), &Weight::sl2(b));
        self.zeta_frac(*d.numer(), *d.denom()).expect("order holds all ζ^{λ·μ}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn engine_is_shareable() {
        fn sync<T: Sync + Send>() {}
        sync::<Engine>();
    }

    fn eng() -> Engine {
        Engine::sl2(5)
    }

    #[test]
    fn verma_shape() {
        let e = eng();
        let m = e.verma(0).unwrap();
        assert_eq!(m.weights(), vec![-8, -6, -4, -2, 0]);
        assert!(m.dims().values().all(|&d| d == 1));
        assert!(m.e_block(-2).is_zero());
        m.check().unwrap();
    }

    #[test]
    fn coverma_shape() {
        let e = eng();
        let m = e.coverma(0).unwrap();
        assert_eq!(m.weights(), vec![0, 2, 4, 6, 8]);
        assert_eq!(m.dim(), 5);
        m.check().unwrap();
        let m = e.coverma(-3).unwrap();
        assert_eq!(m.highest_weight(), Some(-3 + 2 * 4));
    }

    #[test]
    fn simple_dims() {
        let e = eng();
        assert_eq!(e.simple(2).unwrap().dim(), 3);
        assert_eq!(e.simple(3).unwrap().dim(), 4);
        assert_eq!(e.simple(4).unwrap().dim(), 5);
        assert_eq!(e.simple(0).unwrap().dim(), 1);
        assert_eq!(e.simple(8).unwrap().dim(), 4);
        assert_eq!(e.simple(0).unwrap(), e.unit());
        for l in 0..10 {
            let s = e.simple(l).unwrap();
            s.check().unwrap();
            assert!(s.is_simple(), "L({l})");
        }
        assert!(!e.verma(0).unwrap().is_simple());
    }

    #[test]
    fn even_root_of_unity() {
        let e = Engine::sl2(6);
        assert_eq!(e.order(), 24);
        let st = e.steinberg().unwrap();
        assert_eq!(st.dim(), 3);
        st.check().unwrap();
        e.verma(1).unwrap().check().unwrap();
    }

    #[test]
    fn dualities() {
        let e = eng();
        let b = e.unit();
        let bv = b.dual_vee();
        assert_eq!(bv.side(), Side::Right);
        assert_eq!(bv.weights(), vec![0]);
        assert_eq!(b.twist_s().side(), Side::Right);
        let m = e.verma(0).unwrap();
        let mv = m.dual_vee();
        mv.check().unwrap();
        assert_eq!(mv.weights(), vec![0, 2, 4, 6, 8]);
        assert_eq!(mv.dual_vee(), m);
        let ms = m.twist_s();
        ms.check().unwrap();
        m.twist_s().twist_s().check().unwrap();
        for l in 0..5 {
            let s = e.simple(l).unwrap().star();
            s.check().unwrap();
            assert!(s.is_simple());
            assert_eq!(s.dim() as i64, l + 1);
        }
    }

    #[test]
    fn duality_d_of_verma() {
        let e = eng();
        let m = e.verma_tw(0, Twist::ZetaInv).unwrap();
        let d = m.duality_d();
        assert_eq!(d.twist(), Twist::Zeta);
        d.check().unwrap();
        assert_eq!(d.weights(), vec![-8, -6, -4, -2, 0]);
        assert_eq!(d.lowest_weight(), Some(-8));
        let l0 = e.simple_tw(0, Twist::ZetaInv).unwrap().duality_d();
        assert_eq!(l0, e.unit());
        let g = m.galois_twist().galois_twist();
        assert_eq!(g, m);
    }

    #[test]
    fn homs() {
        let e = eng();
        let m = e.verma(0).unwrap();
        let l0 = e.unit();
        assert_eq!(hom_dim(&m, &l0), 1);
        assert_eq!(hom_dim(&l0, &m), 0);
        assert_eq!(hom_dim(&m, &m), 1);
        let s3 = e.simple(-2).unwrap();
        assert_eq!(hom_dim(&s3, &m), 1);
        for h in hom_basis(&s3, &m) {
            assert!(h.is_intertwiner(&s3, &m));
        }
    }

    #[test]
    fn ext_groups() {
        let e = eng();
        let b = e.unit();
        assert_eq!(ext1(&b, &b), 0);
        let l3 = e.simple(-2).unwrap();
        // M(0) is a nonsplit extension of L(0) by L(−2)
        assert_eq!(ext1(&b, &l3), 1);
        let st = e.steinberg().unwrap();
        for k in -6..=6 {
            let s = e.simple(k).unwrap();
            assert_eq!(ext1(&st, &s), 0);
            assert_eq!(ext1(&s, &st), 0);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(21))]
            #[test]
            fn constructors_satisfy_relations(lam in -10i64..=10) {
                let e = Engine::sl2(5);
                e.verma(lam).unwrap().check().unwrap();
                e.coverma(lam).unwrap().check().unwrap();
                e.simple(lam).unwrap().check().unwrap();
                e.verma(lam).unwrap().dual_vee().check().unwrap();
                e.verma(lam).unwrap().star().check().unwrap();
                e.coverma_tw(lam, Twist::ZetaInv).unwrap().duality_d().check().unwrap();
            }

            #[test]
            fn simple_dimension_rule(lam in -15i64..=15) {
                let e = Engine::sl2(5);
                prop_assert_eq!(e.simple(lam).unwrap().dim() as i64, lam.rem_euclid(5) + 1);
            }
        }
    }
}
