//! Monoidal and braided structure: tensor words, decomposition into
//! indecomposables, the maximal trivial summand, the braiding and the balance.
//!
//! Tensor products use Δ(E) = E⊗1 + K⊗E and Δ(F) = F⊗K⁻¹ + 1⊗F.  A tensor
//! word is always built left-nested, so the basis of V_1⊗…⊗V_n at weight ν is
//! ordered by the partial sums (s_{n−1}, …, s_1) and then by the factor
//! indices; re-bracketing a word is the identity on this basis.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::cyclo::CycloNum;
use crate::linalg::Mat;
use crate::uq::{Engine, GradedModule, ModuleMap, Side, Twist, casimir_value, hom_basis, hom_dim};
use crate::{Error, Result};

/// Block layout of a binary tensor product: for each total weight, the
/// pairs (λ, μ) in ascending λ with their offsets.
#[derive(Clone, Debug)]
pub struct Layout {
    pub blocks: BTreeMap<i64, Vec<(i64, i64, usize)>>,
    pub dims: BTreeMap<i64, usize>,
}

impl Layout {
    pub fn new(a: &BTreeMap<i64, usize>, b: &BTreeMap<i64, usize>, window: Option<(i64, i64)>) -> Layout {
        let mut blocks: BTreeMap<i64, Vec<(i64, i64, usize)>> = BTreeMap::new();
        let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
        for (&la, &da) in a {
            for (&mu, &db) in b {
                let nu = la + mu;
                if let Some((lo, hi)) = window {
                    if nu < lo || nu > hi {
                        continue;
                    }
                }
                let d = dims.entry(nu).or_insert(0);
                blocks.entry(nu).or_default().push((la, mu, *d));
                *d += da * db;
            }
        }
        Layout { blocks, dims }
    }

    /// Offset of the block (λ, μ) inside weight λ+μ.
    pub fn offset(&self, la: i64, mu: i64) -> Option<usize> {
        self.blocks.get(&(la + mu))?.iter().find(|x| x.0 == la).map(|x| x.2)
    }
}

/// M ⊗ N, optionally keeping only the weights in `window`.
pub fn tensor_window(m: &GradedModule, n: &GradedModule, window: Option<(i64, i64)>) -> Result<GradedModule> {
    if !m.same_kind(n) {
        return Err(Error::Invalid("tensor product of modules of different kinds".into()));
    }
    let order = m.order();
    let lay = Layout::new(m.dims(), n.dims(), window);
    let mut e: BTreeMap<i64, Mat> = BTreeMap::new();
    let mut f: BTreeMap<i64, Mat> = BTreeMap::new();
    for (&nu, blocks) in &lay.blocks {
        let d = lay.dims[&nu];
        if let Some(&dt) = lay.dims.get(&(nu + 2)) {
            let mut x = Mat::zeros(order, dt, d);
            for &(la, mu, off) in blocks {
                let (da, db) = (m.dim_at(la), n.dim_at(mu));
                if let (Some(em), Some(t)) = (m.e_ref(la), lay.offset(la + 2, mu)) {
                    x.add_block(t, off, &em.kron(&Mat::identity(order, db)));
                }
                if let (Some(en), Some(t)) = (n.e_ref(mu), lay.offset(la, mu + 2)) {
                    let k = m.k_scalar(la);
                    x.add_block(t, off, &Mat::scalar(order, da, &k).kron(en));
                }
            }
            e.insert(nu, x);
        }
        if let Some(&dt) = lay.dims.get(&(nu - 2)) {
            let mut x = Mat::zeros(order, dt, d);
            for &(la, mu, off) in blocks {
                let (da, db) = (m.dim_at(la), n.dim_at(mu));
                if let (Some(fm), Some(t)) = (m.f_ref(la), lay.offset(la - 2, mu)) {
                    let kinv = n.k_scalar(-mu);
                    x.add_block(t, off, &fm.kron(&Mat::scalar(order, db, &kinv)));
                }
                if let (Some(fn_), Some(t)) = (n.f_ref(mu), lay.offset(la, mu - 2)) {
                    x.add_block(t, off, &Mat::identity(order, da).kron(fn_));
                }
            }
            f.insert(nu, x);
        }
    }
    GradedModule::from_blocks(order, m.l(), m.side(), m.twist(), lay.dims.clone(), e, f)
}

pub fn tensor(m: &GradedModule, n: &GradedModule) -> Result<GradedModule> {
    tensor_window(m, n, None)
}

/// f ⊗ g between binary tensor products (with the same window).
pub fn tensor_maps(f: &ModuleMap, g: &ModuleMap, window: Option<(i64, i64)>) -> ModuleMap {
    let src = Layout::new(f.src_dims(), g.src_dims(), window);
    let tgt = Layout::new(f.tgt_dims(), g.tgt_dims(), window);
    let order = f.order();
    let mut blocks = BTreeMap::new();
    for (&nu, bl) in &src.blocks {
        let Some(&dt) = tgt.dims.get(&nu) else { continue };
        let mut x = Mat::zeros(order, dt, src.dims[&nu]);
        for &(la, mu, off) in bl {
            let (Some(a), Some(b)) = (f.block_ref(la), g.block_ref(mu)) else { continue };
            if let Some(t) = tgt.offset(la, mu) {
                x.set_block(t, off, &a.kron(b));
            }
        }
        blocks.insert(nu, x);
    }
    ModuleMap::from_dims(order, src.dims, tgt.dims, blocks)
}

/// An ordered tensor product V_1 ⊗ … ⊗ V_n with its basis bookkeeping.
#[derive(Clone, Debug)]
pub struct TensorWord {
    pub factors: Vec<GradedModule>,
    pub module: GradedModule,
    pub window: Option<(i64, i64)>,
    /// Per weight, the basis as tuples of (factor weight, factor index).
    index: BTreeMap<i64, Vec<Vec<(i64, usize)>>>,
}

impl TensorWord {
    pub fn new(factors: Vec<GradedModule>) -> Result<TensorWord> {
        TensorWord::with_window(factors, None)
    }

    /// Keeps only total weights in `window`; intermediate products are cut
    /// to the weights that can still reach it.
    pub fn with_window(factors: Vec<GradedModule>, window: Option<(i64, i64)>) -> Result<TensorWord> {
        let first = factors.first().ok_or_else(|| Error::Invalid("empty tensor word".into()))?;
        let n = factors.len();
        // reachable ranges of the suffix weights
        let mut suffix_lo = vec![0i64; n + 1];
        let mut suffix_hi = vec![0i64; n + 1];
        for k in (0..n).rev() {
            suffix_lo[k] = suffix_lo[k + 1] + factors[k].lowest_weight().unwrap_or(0);
            suffix_hi[k] = suffix_hi[k + 1] + factors[k].highest_weight().unwrap_or(0);
        }
        let win_at = |k: usize| window.map(|(lo, hi)| (lo - suffix_hi[k + 1], hi - suffix_lo[k + 1]));
        let mut module = restrict_window(first, win_at(0))?;
        let mut index: BTreeMap<i64, Vec<Vec<(i64, usize)>>> = module
            .dims()
            .iter()
            .map(|(&w, &d)| (w, (0..d).map(|i| vec![(w, i)]).collect()))
            .collect();
        for (k, fac) in factors.iter().enumerate().skip(1) {
            let win = win_at(k);
            let lay = Layout::new(module.dims(), fac.dims(), win);
            let mut next: BTreeMap<i64, Vec<Vec<(i64, usize)>>> = BTreeMap::new();
            for (&nu, bl) in &lay.blocks {
                let v = next.entry(nu).or_default();
                for &(la, mu, _) in bl {
                    for t in &index[&la] {
                        for j in 0..fac.dim_at(mu) {
                            let mut t2 = t.clone();
                            t2.push((mu, j));
                            v.push(t2);
                        }
                    }
                }
            }
            module = tensor_window(&module, fac, win)?;
            index = next;
        }
        Ok(TensorWord { factors, module, window, index })
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn basis(&self, w: i64) -> &[Vec<(i64, usize)>] {
        self.index.get(&w).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub(crate) fn lookup(&self) -> HashMap<&[(i64, usize)], usize> {
        let mut h = HashMap::new();
        for v in self.index.values() {
            for (i, t) in v.iter().enumerate() {
                h.insert(t.as_slice(), i);
            }
        }
        h
    }

    /// The word with factors k and k+1 exchanged.
    pub fn swapped(&self, k: usize) -> Result<TensorWord> {
        let mut f = self.factors.clone();
        f.swap(k, k + 1);
        TensorWord::with_window(f, self.window)
    }

    /// Extends a map op: V_k ⊗ V_{k+1} → target pair (binary layout) by the
    /// identity on the other factors.  `target` must be this word with the
    /// pair replaced by op's target factors.
    pub fn local_op(&self, k: usize, op: &ModuleMap, target: &TensorWord) -> ModuleMap {
        let (a, b) = (&self.factors[k], &self.factors[k + 1]);
        let (ta, tb) = (&target.factors[k], &target.factors[k + 1]);
        let src_lay = Layout::new(a.dims(), b.dims(), None);
        let tgt_lay = Layout::new(ta.dims(), tb.dims(), None);
        // decode target pair indices
        let mut decode: HashMap<(i64, usize), (i64, usize, i64, usize)> = HashMap::new();
        for (&nu, bl) in &tgt_lay.blocks {
            for &(la, mu, off) in bl {
                let db = tb.dim_at(mu);
                for i in 0..ta.dim_at(la) {
                    for j in 0..db {
                        decode.insert((nu, off + i * db + j), (la, i, mu, j));
                    }
                }
            }
        }
        let look = target.lookup();
        let order = self.module.order();
        let mut blocks = BTreeMap::new();
        for (&w, basis) in &self.index {
            let Some(tb_) = target.index.get(&w) else { continue };
            let mut x = Mat::zeros(order, tb_.len(), basis.len());
            for (c, t) in basis.iter().enumerate() {
                let ((la, i), (mu, j)) = (t[k], t[k + 1]);
                let nu = la + mu;
                let Some(blk) = op.block_ref(nu) else { continue };
                let col = src_lay.offset(la, mu).unwrap() + i * b.dim_at(mu) + j;
                for r in 0..blk.rows() {
                    let v = blk.get(r, col);
                    if v.is_zero() {
                        continue;
                    }
                    let (la2, i2, mu2, j2) = decode[&(nu, r)];
                    let mut t2 = t.clone();
                    t2[k] = (la2, i2);
                    t2[k + 1] = (mu2, j2);
                    if let Some(&row) = look.get(t2.as_slice()) {
                        x.set(row, c, v.clone());
                    }
                }
            }
            blocks.insert(w, x);
        }
        ModuleMap::from_dims(order, self.module.dims().clone(), target.module.dims().clone(), blocks)
    }

    /// Applies factorwise scalars c_k(w) (depending on the factor weight).
    pub fn diagonal(&self, scalar: impl Fn(usize, i64) -> CycloNum) -> ModuleMap {
        let order = self.module.order();
        let blocks = self
            .index
            .iter()
            .map(|(&w, basis)| {
                let mut x = Mat::zeros(order, basis.len(), basis.len());
                for (i, t) in basis.iter().enumerate() {
                    let mut c = CycloNum::one(order);
                    for (k, &(wk, _)) in t.iter().enumerate() {
                        c = &c * &scalar(k, wk);
                    }
                    x.set(i, i, c);
                }
                (w, x)
            })
            .collect();
        ModuleMap::from_dims(order, self.module.dims().clone(), self.module.dims().clone(), blocks)
    }
}

fn restrict_window(m: &GradedModule, window: Option<(i64, i64)>) -> Result<GradedModule> {
    let Some((lo, hi)) = window else { return Ok(m.clone()) };
    let dims = m.dims().iter().filter(|(w, _)| **w >= lo && **w <= hi).map(|(&w, &d)| (w, d)).collect();
    // blocks leaving the window are dropped by from_blocks
    let e: BTreeMap<i64, Mat> = m.weights().into_iter().map(|w| (w, m.e_block(w))).collect();
    let f: BTreeMap<i64, Mat> = m.weights().into_iter().map(|w| (w, m.f_block(w))).collect();
    GradedModule::from_blocks(m.order(), m.l(), m.side(), m.twist(), dims, e, f)
}

// ---------------------------------------------------------------------------
// Decomposition

/// An isomorphism class of indecomposables met so far.
#[derive(Clone, Debug)]
pub struct ClassInfo {
    pub id: usize,
    pub rep: GradedModule,
    /// Highest weight of the simple head, when the class is local with a
    /// simple head that could be identified.
    pub head: Option<i64>,
    pub label: String,
}

#[derive(Clone, Debug)]
pub struct Summand {
    pub class: usize,
    /// Representative → M.
    pub incl: ModuleMap,
    /// M → representative.
    pub proj: ModuleMap,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub parts: Vec<Summand>,
}

impl Decomposition {
    /// (class, multiplicity), in order of first appearance.
    pub fn multiset(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for p in &self.parts {
            match out.iter_mut().find(|x| x.0 == p.class) {
                Some(x) => x.1 += 1,
                None => out.push((p.class, 1)),
            }
        }
        out
    }

    pub fn contains(&self, class: usize) -> bool {
        self.parts.iter().any(|p| p.class == class)
    }

    /// Checks Σ ι_i π_i = id and π_i ι_j = δ_ij.
    pub fn verify(&self, m: &GradedModule, reps: &dyn Fn(usize) -> GradedModule) -> bool {
        let mut sum = ModuleMap::zero(m, m);
        for (i, p) in self.parts.iter().enumerate() {
            let r = reps(p.class);
            if !p.incl.is_intertwiner(&r, m) || !p.proj.is_intertwiner(m, &r) {
                return false;
            }
            for (j, q) in self.parts.iter().enumerate() {
                let c = p.proj.compose(&q.incl);
                let ok = if i == j { c.is_identity() } else { c.is_zero() };
                if !ok {
                    return false;
                }
            }
            sum = sum.add(&p.incl.compose(&p.proj));
        }
        sum.is_identity()
    }
}

#[derive(Default)]
pub struct Cache {
    classes: Vec<Arc<ClassInfo>>,
    steps: HashMap<(usize, usize), Arc<Decomposition>>,
    proj_cover: HashMap<i64, usize>,
    projective: HashMap<usize, bool>,
    r_coeffs: Option<Vec<CycloNum>>,
}

type Piece = (GradedModule, ModuleMap, ModuleMap);

/// Splits M along submodules whose bases together form a basis per weight.
fn split_along(m: &GradedModule, subs: &[BTreeMap<i64, Mat>]) -> Result<Vec<Piece>> {
    let order = m.order();
    let mut inv: BTreeMap<i64, Mat> = BTreeMap::new();
    for (&w, &d) in m.dims() {
        let cols: Vec<Mat> = subs.iter().map(|s| s.get(&w).cloned().unwrap_or_else(|| Mat::zeros(order, d, 0))).collect();
        let full = Mat::hstack(order, d, &cols.iter().collect::<Vec<_>>());
        let i = full.inverse().ok_or_else(|| Error::Internal("summands do not span".into()))?;
        inv.insert(w, i);
    }
    let mut out = Vec::new();
    let mut offs: BTreeMap<i64, usize> = BTreeMap::new();
    for s in subs {
        let (sm, incl) = m.restrict(s)?;
        let mut blocks = BTreeMap::new();
        for (&w, b) in s {
            if b.cols() == 0 {
                continue;
            }
            let o = offs.entry(w).or_insert(0);
            blocks.insert(w, inv[&w].block(*o, 0, b.cols(), m.dim_at(w)));
            *o += b.cols();
        }
        let proj = ModuleMap::from_blocks(m, &sm, blocks);
        if !sm.is_zero() {
            out.push((sm, incl, proj));
        }
    }
    Ok(out)
}

/// Generalized eigenspaces of the Casimir.
fn casimir_split(m: &GradedModule) -> Result<Vec<Piece>> {
    if m.side() != Side::Left || m.dim() <= 1 {
        return Ok(vec![(m.clone(), ModuleMap::identity(m), ModuleMap::identity(m))]);
    }
    let mut values: Vec<CycloNum> = Vec::new();
    for w in m.weights() {
        let c = casimir_value(m.order(), m.l(), m.twist(), w);
        if !values.contains(&c) {
            values.push(c);
        }
    }
    let mut subs = Vec::new();
    let mut total = 0;
    for c in &values {
        let mut s = BTreeMap::new();
        for (&w, &d) in m.dims() {
            let a = &m.casimir_block(w) - &Mat::scalar(m.order(), d, c);
            let k = a.mat_pow(d).nullspace();
            total += k.cols();
            s.insert(w, k);
        }
        if s.values().any(|b| b.cols() > 0) {
            subs.push(s);
        }
    }
    if total != m.dim() {
        return Err(Error::Internal("Casimir eigenspaces do not exhaust the module".into()));
    }
    split_along(m, &subs)
}

fn end_trace_rank(m: &GradedModule, basis: &[ModuleMap]) -> usize {
    let n = basis.len();
    let mut t = Mat::zeros(m.order(), n, n);
    for i in 0..n {
        for j in i..n {
            let mut s = CycloNum::zero(m.order());
            for w in m.weights() {
                s += &basis[i].block(w).matmul(&basis[j].block(w)).trace();
            }
            t.set(i, j, s.clone());
            t.set(j, i, s);
        }
    }
    t.rank()
}

/// Fitting decomposition along φ: M = ker φ^N ⊕ im φ^N.
fn fitting(m: &GradedModule, phi: &ModuleMap) -> Option<[BTreeMap<i64, Mat>; 2]> {
    let mut ker = BTreeMap::new();
    let mut img = BTreeMap::new();
    let mut kd = 0;
    for (&w, &d) in m.dims() {
        let p = phi.block(w).mat_pow(d);
        let k = p.nullspace();
        kd += k.cols();
        ker.insert(w, k);
        img.insert(w, p.col_space());
    }
    if kd == 0 || kd == m.dim() { None } else { Some([ker, img]) }
}

/// Candidate eigenvalues of φ: its scalars on one-dimensional weight spaces
/// and on eigenlines found among basis vectors.
fn eigen_candidates(m: &GradedModule, phi: &ModuleMap) -> Vec<CycloNum> {
    let mut out: Vec<CycloNum> = Vec::new();
    for (&w, &d) in m.dims() {
        let b = phi.block(w);
        for j in 0..d {
            let v = b.col(j);
            // v = c e_j exactly?
            if v.iter().enumerate().all(|(i, x)| i == j || x.is_zero()) {
                let c = v[j].clone();
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
    }
    out
}

fn split_end(m: &GradedModule) -> Result<Vec<Piece>> {
    let id = || (m.clone(), ModuleMap::identity(m), ModuleMap::identity(m));
    if m.dim() <= 1 {
        return Ok(vec![id()]);
    }
    let basis = hom_basis(m, m);
    if basis.len() <= 1 || end_trace_rank(m, &basis) <= 1 {
        return Ok(vec![id()]);
    }
    let mut candidates: Vec<ModuleMap> = Vec::new();
    for b in &basis {
        candidates.push(b.clone());
        for c in eigen_candidates(m, b) {
            candidates.push(b.add(&ModuleMap::scalar(m, &-c)));
        }
    }
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            candidates.push(basis[i].add(&basis[j]));
            candidates.push(basis[i].compose(&basis[j]));
            candidates.push(basis[j].compose(&basis[i]));
        }
    }
    for phi in candidates {
        if let Some(subs) = fitting(m, &phi) {
            let pieces = split_along(m, &subs)?;
            let mut out = Vec::new();
            for (s, i, p) in pieces {
                for (t, i2, p2) in split_end(&s)? {
                    out.push((t, i.compose(&i2), p2.compose(&p)));
                }
            }
            return Ok(out);
        }
    }
    Err(Error::Splitting(format!("no splitting endomorphism found for a module of dimension {}", m.dim())))
}

/// Decomposition into indecomposables, without identifying classes.
pub fn decompose_raw(m: &GradedModule) -> Result<Vec<Piece>> {
    let mut out = Vec::new();
    for (s, i, p) in casimir_split(m)? {
        for (t, i2, p2) in split_end(&s)? {
            out.push((t, i.compose(&i2), p2.compose(&p)));
        }
    }
    Ok(out)
}

/// An isomorphism S → R between local modules, if one exists.
pub fn local_iso(s: &GradedModule, r: &GradedModule) -> Option<ModuleMap> {
    if s.dims() != r.dims() || !s.same_kind(r) {
        return None;
    }
    let hb = hom_basis(s, r);
    for h in &hb {
        if h.is_iso() {
            return Some(h.clone());
        }
    }
    for i in 0..hb.len() {
        for j in i + 1..hb.len() {
            let h = hb[i].add(&hb[j]);
            if h.is_iso() {
                return Some(h);
            }
        }
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct SummandReport {
    pub label: String,
    pub head_weight: Option<i64>,
    pub dim: usize,
    pub projective: bool,
    pub multiplicity: usize,
}

impl Engine {
    fn lock(&self) -> std::sync::MutexGuard<'_, Cache> {
        self.cache.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn class_info(&self, id: usize) -> Arc<ClassInfo> {
        self.lock().classes[id].clone()
    }

    pub fn class_rep(&self, id: usize) -> GradedModule {
        self.class_info(id).rep.clone()
    }

    fn head_of(&self, s: &GradedModule) -> Option<i64> {
        if s.side() != Side::Left {
            return None;
        }
        let mut heads = Vec::new();
        for w in s.weights() {
            let l = self.simple_tw(w, s.twist()).ok()?;
            let d = hom_dim(s, &l);
            if d > 0 {
                heads.push((w, d));
            }
        }
        if heads.len() == 1 && heads[0].1 == 1 { Some(heads[0].0) } else { None }
    }

    /// Identifies the class of an indecomposable S; returns the class id and
    /// an isomorphism S → representative.
    pub fn canonicalize(&self, s: &GradedModule) -> (usize, ModuleMap) {
        let candidates: Vec<Arc<ClassInfo>> =
            self.lock().classes.iter().filter(|c| c.rep.dims() == s.dims() && c.rep.same_kind(s)).cloned().collect();
        for c in candidates {
            if let Some(g) = local_iso(s, &c.rep) {
                return (c.id, g);
            }
        }
        let head = self.head_of(s);
        let label = match head {
            Some(h) if s.is_simple() => format!("L({h})"),
            Some(h) => format!("I[{h};{}]", s.dim()),
            None => format!("I[?;{}]", s.dim()),
        };
        let mut cache = self.lock();
        // another thread may have registered it meanwhile
        for c in cache.classes.iter() {
            if c.rep.dims() == s.dims() && c.rep.same_kind(s) {
                if let Some(g) = local_iso(s, &c.rep) {
                    return (c.id, g);
                }
            }
        }
        let id = cache.classes.len();
        cache.classes.push(Arc::new(ClassInfo { id, rep: s.clone(), head, label }));
        (id, ModuleMap::identity(s))
    }

    /// Complete decomposition of M into indecomposables, with witnesses.
    pub fn decompose(&self, m: &GradedModule) -> Result<Decomposition> {
        let mut parts = Vec::new();
        for (s, i, p) in decompose_raw(m)? {
            let (class, g) = self.canonicalize(&s);
            let ginv = g.inverse().ok_or_else(|| Error::Internal("class isomorphism not invertible".into()))?;
            parts.push(Summand { class, incl: i.compose(&ginv), proj: g.compose(&p) });
        }
        Ok(Decomposition { parts })
    }

    fn step(&self, c: usize, d: usize) -> Result<Arc<Decomposition>> {
        if let Some(x) = self.lock().steps.get(&(c, d)) {
            return Ok(x.clone());
        }
        let t = tensor(&self.class_rep(c), &self.class_rep(d))?;
        let dec = Arc::new(self.decompose(&t)?);
        self.lock().steps.insert((c, d), dec.clone());
        Ok(dec)
    }

    /// Decomposes a tensor word one factor at a time, reusing the
    /// decompositions of R_c ⊗ R_d for class representatives.
    pub fn decompose_word(&self, word: &TensorWord) -> Result<Decomposition> {
        if word.window.is_some() {
            return Err(Error::Invalid("cannot decompose a truncated tensor word".into()));
        }
        let mut cur = self.decompose(&word.factors[0])?;
        let mut acc = word.factors[0].clone();
        for fac in &word.factors[1..] {
            let fdec = self.decompose(fac)?;
            let next = tensor(&acc, fac)?;
            let mut parts = Vec::new();
            for p in &cur.parts {
                for x in &fdec.parts {
                    let st = self.step(p.class, x.class)?;
                    let up_i = tensor_maps(&p.incl, &x.incl, None);
                    let up_p = tensor_maps(&p.proj, &x.proj, None);
                    for q in &st.parts {
                        parts.push(Summand { class: q.class, incl: up_i.compose(&q.incl), proj: q.proj.compose(&up_p) });
                    }
                }
            }
            cur = Decomposition { parts };
            acc = next;
        }
        Ok(cur)
    }

    /// The indecomposable projective cover P(λ), found as the summand of
    /// L(ρ_ℓ) ⊗ L(ρ_ℓ)* ⊗ L(λ) with head L(λ).
    pub fn projective_cover_class(&self, lam: i64) -> Result<usize> {
        if let Some(&c) = self.lock().proj_cover.get(&lam) {
            return Ok(c);
        }
        let st = self.steinberg()?;
        let word = TensorWord::new(vec![st.clone(), st.star(), self.simple(lam)?])?;
        let dec = self.decompose_word(&word)?;
        let mut found = None;
        for (c, _) in dec.multiset() {
            if self.class_info(c).head == Some(lam) {
                found = Some(c);
                break;
            }
        }
        let c = found.ok_or_else(|| Error::Internal(format!("no summand with head L({lam})")))?;
        {
            let mut cache = self.lock();
            cache.proj_cover.insert(lam, c);
            cache.projective.insert(c, true);
            let info = &mut cache.classes[c];
            if !info.label.starts_with('L') {
                let mut i = (**info).clone();
                i.label = format!("P({lam})");
                *info = Arc::new(i);
            }
        }
        Ok(c)
    }

    pub fn projective_cover(&self, lam: i64) -> Result<GradedModule> {
        Ok(self.class_rep(self.projective_cover_class(lam)?))
    }

    pub fn class_is_projective(&self, c: usize) -> Result<bool> {
        if let Some(&p) = self.lock().projective.get(&c) {
            return Ok(p);
        }
        let info = self.class_info(c);
        let p = match info.head {
            Some(h) => self.projective_cover_class(h)? == c,
            None => false,
        };
        self.lock().projective.insert(c, p);
        Ok(p)
    }

    /// Whether every indecomposable summand of M is the projective cover of
    /// its head.
    pub fn is_projective(&self, m: &GradedModule) -> Result<bool> {
        let d = self.decompose(m)?;
        for (c, _) in d.multiset() {
            if !self.class_is_projective(c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn report(&self, d: &Decomposition) -> Result<Vec<SummandReport>> {
        d.multiset()
            .into_iter()
            .map(|(c, k)| {
                let projective = self.class_is_projective(c)?;
                let info = self.class_info(c);
                Ok(SummandReport {
                    label: info.label.clone(),
                    head_weight: info.head,
                    dim: info.rep.dim(),
                    projective,
                    multiplicity: k,
                })
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Trivial summands

/// ⟨M⟩ with witnesses: ι: B^r → M and π: M → B^r with π∘ι = id.
#[derive(Clone, Debug)]
pub struct TrivialSummand {
    pub dim: usize,
    /// Columns in M_0.
    pub incl: Mat,
    /// Rows on M_0.
    pub proj: Mat,
}

/// Rank of the pairing between Hom(B, M) and Hom(M, B).
pub fn max_trivial_summand(m: &GradedModule) -> TrivialSummand {
    let order = m.order();
    let d0 = m.dim_at(0);
    if d0 == 0 {
        return TrivialSummand { dim: 0, incl: Mat::zeros(order, 0, 0), proj: Mat::zeros(order, 0, 0) };
    }
    let stacked = Mat::vstack(order, d0, &[&m.e_block(0), &m.f_block(0)]);
    let inv = stacked.nullspace();
    let img = Mat::hstack(order, d0, &[&m.e_block(-2), &m.f_block(2)]);
    let coinv = img.left_nullspace();
    let g = coinv.matmul(&inv);
    let (_, piv_c) = g.rref();
    let (_, piv_r) = g.transpose().rref();
    let r = piv_c.len();
    let incl = inv.select_cols(&piv_c);
    let phis = coinv.select_rows(&piv_r);
    let gs = phis.matmul(&incl);
    let proj = gs.inverse().expect("nondegenerate block").matmul(&phis);
    TrivialSummand { dim: r, incl, proj }
}

// ---------------------------------------------------------------------------
// Braiding and balance

impl Engine {
    /// Coefficients c_n of Θ = Σ c_n F^n ⊗ E^n, c_0 = 1, determined by
    /// requiring flip∘Π∘Θ to intertwine on M(0)⊗M⁺(0) and M(0)⊗M(0).
    pub fn quasi_r_matrix(&self) -> Result<Vec<CycloNum>> {
        if let Some(c) = self.lock().r_coeffs.clone() {
            return Ok(c);
        }
        let ell = self.ell() as usize;
        let order = self.order();
        let pairs = [(self.verma(0)?, self.coverma(0)?), (self.verma(0)?, self.verma(0)?), (self.coverma(0)?, self.verma(0)?)];
        let mut solver = crate::linalg::SparseRref::new(order, ell);
        for (v, w) in &pairs {
            let src = tensor(v, w)?;
            let tgt = tensor(w, v)?;
            let terms: Vec<ModuleMap> = (0..ell).map(|n| self.r_term(v, w, n)).collect();
            for nu in src.weights() {
                for (shift, is_e) in [(2i64, true), (-2, false)] {
                    if tgt.dim_at(nu + shift) == 0 {
                        continue;
                    }
                    let xs = if is_e { src.e_block(nu) } else { src.f_block(nu) };
                    let xt = if is_e { tgt.e_block(nu) } else { tgt.f_block(nu) };
                    let mats: Vec<Mat> = terms
                        .iter()
                        .map(|t| &t.block(nu + shift).matmul(&xs) - &xt.matmul(&t.block(nu)))
                        .collect();
                    let (r, c) = mats[0].shape();
                    for i in 0..r {
                        for j in 0..c {
                            let row: Vec<(usize, CycloNum)> = mats
                                .iter()
                                .enumerate()
                                .filter(|(_, m)| !m.get(i, j).is_zero())
                                .map(|(n, m)| (n, m.get(i, j).clone()))
                                .collect();
                            if !row.is_empty() {
                                solver.push(row);
                            }
                        }
                    }
                }
            }
        }
        let ns = solver.nullspace();
        if ns.len() != 1 || ns[0][0].is_zero() {
            return Err(Error::Internal(format!("quasi-R-matrix system has a {}-dimensional solution space", ns.len())));
        }
        let s = ns[0][0].inv()?;
        let c: Vec<CycloNum> = ns[0].iter().map(|x| x * &s).collect();
        self.lock().r_coeffs = Some(c.clone());
        Ok(c)
    }

    /// flip∘Π∘(F^n ⊗ E^n): V⊗W → W⊗V.
    fn r_term(&self, v: &GradedModule, w: &GradedModule, n: usize) -> ModuleMap {
        let order = self.order();
        let src = Layout::new(v.dims(), w.dims(), None);
        let tgt = Layout::new(w.dims(), v.dims(), None);
        let sign = if v.twist() == Twist::Zeta { 1 } else { -1 };
        let mut blocks = BTreeMap::new();
        for (&nu, bl) in &src.blocks {
            let mut x = Mat::zeros(order, tgt.dims[&nu], src.dims[&nu]);
            for &(la, mu, off) in bl {
                let (la2, mu2) = (la - 2 * n as i64, mu + 2 * n as i64);
                let (fa, eb) = (v.f_power(la, n), w.e_power(mu, n));
                if fa.rows() == 0 || eb.rows() == 0 || fa.is_zero() || eb.is_zero() {
                    continue;
                }
                // Π on (λ−2n, μ+2n), then flip
                let p = self.zeta_dot_signed(la2, mu2, sign);
                let k = fa.kron(&eb).scale(&p);
                let t = tgt.offset(mu2, la2).unwrap();
                let (da, db) = (v.dim_at(la2), w.dim_at(mu2));
                for i in 0..da {
                    for j in 0..db {
                        let row = i * db + j;
                        let trow = t + j * da + i;
                        for c in 0..k.cols() {
                            let val = k.get(row, c);
                            if !val.is_zero() {
                                x.set(trow, off + c, val.clone());
                            }
                        }
                    }
                }
            }
            blocks.insert(nu, x);
        }
        ModuleMap::from_dims(order, src.dims, tgt.dims, blocks)
    }

    fn zeta_dot_signed(&self, a: i64, b: i64, sign: i64) -> CycloNum {
        let z = self.zeta_dot(a, b);
        if sign == 1 { z } else { z.conj() }
    }

    /// R_{V,W}: V⊗W → W⊗V.
    pub fn braiding(&self, v: &GradedModule, w: &GradedModule) -> Result<ModuleMap> {
        if !v.same_kind(w) {
            return Err(Error::Invalid("braiding of modules of different kinds".into()));
        }
        let c = self.quasi_r_matrix()?;
        let mut r = self.r_term(v, w, 0);
        for (n, cn) in c.iter().enumerate().skip(1) {
            if !cn.is_zero() {
                r = r.add(&self.r_term(v, w, n).scale(cn));
            }
        }
        if self.negate_braiding {
            r = r.scale(&-CycloNum::one(self.order()));
        }
        Ok(r)
    }

    /// θ on L(λ): ζ^{n(λ)}.
    pub fn theta_simple(&self, lam: i64) -> Result<CycloNum> {
        let n = self.balance_n(lam);
        self.zeta_frac(*n.numer(), *n.denom())
    }

    /// θ on a tensor word of simples, by θ_{A⊗V} = R_{V,A} R_{A,V} (θ_A ⊗ θ_V).
    pub fn balance(&self, weights: &[i64]) -> Result<(GradedModule, ModuleMap)> {
        let first = *weights.first().ok_or_else(|| Error::Invalid("empty tensor word".into()))?;
        let mut acc = self.simple(first)?;
        let mut theta = ModuleMap::scalar(&acc, &self.theta_simple(first)?);
        for &lam in &weights[1..] {
            let v = self.simple(lam)?;
            let tv = ModuleMap::scalar(&v, &self.theta_simple(lam)?);
            let r1 = self.braiding(&acc, &v)?;
            let r2 = self.braiding(&v, &acc)?;
            theta = r2.compose(&r1).compose(&tensor_maps(&theta, &tv, None));
            acc = tensor(&acc, &v)?;
        }
        Ok((acc, theta))
    }
}

/// Matrices for braid generators acting on a space.
#[derive(Clone, Debug)]
pub struct BraidRep {
    pub strands: usize,
    /// Full loops of strand k+1 around strand k.
    pub sigma: Vec<Mat>,
    /// Half-twists, where adjacent colors agree.
    pub half: Vec<Option<Mat>>,
    /// Tangent rotations.
    pub theta: Vec<Mat>,
}

fn commutes(a: &Mat, b: &Mat) -> bool {
    a.matmul(b) == b.matmul(a)
}

impl BraidRep {
    pub fn all_invertible(&self) -> bool {
        self.sigma.iter().chain(self.theta.iter()).chain(self.half.iter().flatten()).all(|m| m.is_invertible())
    }

    /// Checks the relations available for the given colors: the braid
    /// relation for consecutive half-twists, far commutativity, and the
    /// mixed relation ŘAŘA = AŘAŘ between a half-twist and a neighbouring
    /// full loop.
    pub fn relations_hold(&self) -> bool {
        let n = self.sigma.len();
        for j in 0..n {
            for k in j + 2..n {
                if !commutes(&self.sigma[j], &self.sigma[k]) {
                    return false;
                }
                if let (Some(a), Some(b)) = (&self.half[j], &self.half[k]) {
                    if !commutes(a, b) {
                        return false;
                    }
                }
            }
        }
        for k in 0..n.saturating_sub(1) {
            if let (Some(a), Some(b)) = (&self.half[k], &self.half[k + 1]) {
                if a.matmul(b).matmul(a) != b.matmul(a).matmul(b) {
                    return false;
                }
            }
            for (h, s) in [(&self.half[k], &self.sigma[k + 1]), (&self.half[k + 1], &self.sigma[k])] {
                if let Some(h) = h {
                    let l = h.matmul(s).matmul(h).matmul(s);
                    let r = s.matmul(h).matmul(s).matmul(h);
                    if l != r {
                        return false;
                    }
                }
            }
        }
        for (k, h) in self.half.iter().enumerate() {
            if let Some(h) = h {
                if h.matmul(h) != self.sigma[k] {
                    return false;
                }
            }
        }
        true
    }

    /// Conjugates/compresses every generator by proj·X·incl.
    pub fn compress(&self, proj: &Mat, incl: &Mat) -> BraidRep {
        let c = |m: &Mat| proj.matmul(m).matmul(incl);
        BraidRep {
            strands: self.strands,
            sigma: self.sigma.iter().map(c).collect(),
            half: self.half.iter().map(|h| h.as_ref().map(c)).collect(),
            theta: self.theta.iter().map(c).collect(),
        }
    }
}

impl Engine {
    /// Braid generators on L(λ_1)⊗…⊗L(λ_n) as module maps.
    pub fn braid_maps(&self, lams: &[i64]) -> Result<(TensorWord, Vec<ModuleMap>, Vec<Option<ModuleMap>>, Vec<ModuleMap>)> {
        let mods: Vec<GradedModule> = lams.iter().map(|&l| self.simple(l)).collect::<Result<_>>()?;
        let word = TensorWord::new(mods.clone())?;
        let mut sigma = Vec::new();
        let mut half = Vec::new();
        for k in 0..lams.len().saturating_sub(1) {
            let (a, b) = (&mods[k], &mods[k + 1]);
            let r1 = self.braiding(a, b)?;
            let r2 = self.braiding(b, a)?;
            sigma.push(word.local_op(k, &r2.compose(&r1), &word));
            half.push(if lams[k] == lams[k + 1] { Some(word.local_op(k, &r1, &word)) } else { None });
        }
        let thetas: Vec<CycloNum> = lams.iter().map(|&l| self.theta_simple(l)).collect::<Result<_>>()?;
        let theta = (0..lams.len())
            .map(|j| word.diagonal(|k, _| if k == j { thetas[j].clone() } else { CycloNum::one(self.order()) }))
            .collect();
        Ok((word, sigma, half, theta))
    }

    /// The braid representation on the conformal block ⟨L(λ_1),…,L(λ_n)⟩.
    pub fn braid_rep_blocks(&self, lams: &[i64]) -> Result<BraidRep> {
        let (word, sigma, half, theta) = self.braid_maps(lams)?;
        let t = max_trivial_summand(&word.module);
        let c = |m: &ModuleMap| t.proj.matmul(&m.block(0)).matmul(&t.incl);
        Ok(BraidRep {
            strands: lams.len(),
            sigma: sigma.iter().map(c).collect(),
            half: half.iter().map(|h| h.as_ref().map(c)).collect(),
            theta: theta.iter().map(c).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eng() -> Engine {
        Engine::sl2(5)
    }

    #[test]
    fn tensor_with_unit() {
        let e = eng();
        let m = e.simple(3).unwrap();
        assert_eq!(tensor(&e.unit(), &m).unwrap(), m);
        assert_eq!(tensor(&m, &e.unit()).unwrap(), m);
    }

    #[test]
    fn tensor_is_a_module() {
        let e = eng();
        let t = tensor(&e.simple(2).unwrap(), &e.simple(3).unwrap()).unwrap();
        t.check().unwrap();
        let t = tensor(&e.verma(1).unwrap(), &e.coverma(2).unwrap()).unwrap();
        t.check().unwrap();
        let r = tensor(&e.verma(1).unwrap().dual_vee(), &e.coverma(0).unwrap().dual_vee()).unwrap();
        r.check().unwrap();
    }

    #[test]
    fn strict_associativity() {
        let e = eng();
        let (a, b, c) = (e.simple(2).unwrap(), e.simple(2).unwrap(), e.simple(3).unwrap());
        let left = tensor(&tensor(&a, &b).unwrap(), &c).unwrap();
        let w = TensorWord::new(vec![a, b, c]).unwrap();
        assert_eq!(left, w.module);
    }

    #[test]
    fn l1_l1() {
        let e = eng();
        let t = tensor(&e.simple(1).unwrap(), &e.simple(1).unwrap()).unwrap();
        let d = e.decompose(&t).unwrap();
        let labels: Vec<String> = d.multiset().iter().map(|(c, _)| e.class_info(*c).label.clone()).collect();
        assert_eq!(d.parts.len(), 2);
        assert!(labels.contains(&"L(0)".to_string()) && labels.contains(&"L(2)".to_string()));
        assert!(d.verify(&t, &|c| e.class_rep(c)));
        assert_eq!(max_trivial_summand(&t).dim, 1);
    }

    #[test]
    fn unit_sum() {
        let e = eng();
        let bb = GradedModule::direct_sum(&[&e.unit(), &e.unit()]).unwrap();
        let d = e.decompose(&bb).unwrap();
        assert_eq!(d.multiset().len(), 1);
        assert_eq!(d.multiset()[0].1, 2);
    }

    #[test]
    fn projective_cover_zero() {
        let e = eng();
        let p = e.projective_cover(0).unwrap();
        assert_eq!(p.dim(), 10);
        assert_eq!(p.highest_weight(), Some(8));
        assert_eq!(max_trivial_summand(&p).dim, 0);
        p.check().unwrap();
        let st = e.steinberg().unwrap();
        assert_eq!(e.projective_cover(4).unwrap().dim(), st.dim());
        assert!(e.is_projective(&p).unwrap());
        assert!(!e.is_projective(&e.verma(0).unwrap()).unwrap());
    }

    #[test]
    fn quasi_r() {
        let e = eng();
        let c = e.quasi_r_matrix().unwrap();
        assert!(c[0].is_one());
        for (a, b) in [(e.verma(0).unwrap(), e.verma(0).unwrap()), (e.verma(1).unwrap(), e.coverma(-3).unwrap())] {
            let r = e.braiding(&a, &b).unwrap();
            assert!(r.is_intertwiner(&tensor(&a, &b).unwrap(), &tensor(&b, &a).unwrap()));
        }
    }

    #[test]
    fn braiding_on_highest_vectors() {
        let e = eng();
        let (v, w) = (e.simple(2).unwrap(), e.simple(3).unwrap());
        let r = e.braiding(&v, &w).unwrap();
        let blk = r.block(5);
        assert_eq!(blk.shape(), (1, 1));
        assert_eq!(blk.get(0, 0), &e.zeta(3));
        let b = e.braiding(&e.unit(), &v).unwrap();
        assert!(b.is_identity());
    }

    #[test]
    fn balance_axiom_l2_l3() {
        let e = eng();
        let (t, th) = e.balance(&[2, 3]).unwrap();
        let (v, w) = (e.simple(2).unwrap(), e.simple(3).unwrap());
        let rr = e.braiding(&w, &v).unwrap().compose(&e.braiding(&v, &w).unwrap());
        let tv = ModuleMap::scalar(&v, &e.theta_simple(2).unwrap());
        let tw = ModuleMap::scalar(&w, &e.theta_simple(3).unwrap());
        let rhs = th.compose(&tensor_maps(&tv, &tw, None).inverse().unwrap());
        assert_eq!(rr, rhs);
        assert_eq!(t.dim(), 12);
    }

    #[test]
    fn braid_rep_small() {
        let e = eng();
        let br = e.braid_rep_blocks(&[0, 0]).unwrap();
        assert!(br.sigma[0].is_identity());
        let br = e.braid_rep_blocks(&[1, 1, 1, 1]).unwrap();
        assert_eq!(br.sigma[0].rows(), 2);
        assert!(br.relations_hold());
        assert!(br.all_invertible());
    }
}
