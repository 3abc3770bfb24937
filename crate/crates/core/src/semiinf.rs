//! Homological algebra in C: complexes of graded modules, ordinary Tor via
//! projective resolutions, u⁻-homology, the K-tower and semiinfinite Tor/Ext.
//!
//! Tensor products over C are computed in the zeroth weight component:
//! V ⊗_C X = ⊕_a V_a ⊗ X_{−a} modulo (vE)⊗x − v⊗(Ex) and (vF)⊗x − v⊗(Fx).

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use serde_json::Value;

use crate::cyclo::CycloNum;
use crate::linalg::{Mat, SparseRref};
use crate::tensorcat::{TensorWord, tensor, tensor_maps};
use crate::tensorcat::Decomposition;
use crate::uq::{Engine, GradedModule, ModuleMap, Side, Twist, hom_basis};
use crate::{Error, Result};

type SVec = Vec<(usize, CycloNum)>;

fn sparse_col(m: &Mat, j: usize) -> SVec {
    (0..m.rows()).filter(|&i| !m.get(i, j).is_zero()).map(|i| (i, m.get(i, j).clone())).collect()
}

fn sorted(mut v: SVec) -> SVec {
    v.sort_by_key(|x| x.0);
    let mut out: SVec = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y += &x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

/// Σ v_c · cols[c].
fn apply_cols(order: u32, cols: &[SVec], v: &SVec) -> SVec {
    let mut acc: HashMap<usize, CycloNum> = HashMap::new();
    for (c, x) in v {
        for (r, y) in &cols[*c] {
            let e = acc.entry(*r).or_insert_with(|| CycloNum::zero(order));
            *e += &(x * y);
        }
    }
    sorted(acc.into_iter().collect())
}

/// A quotient A/S with coordinates on the non-pivot columns of the echelon
/// form of S.
#[derive(Clone, Debug)]
struct QuotSpace {
    sub: SparseRref,
    free: Vec<usize>,
    pos: Vec<usize>,
}

impl QuotSpace {
    fn new(order: u32, amb: usize, gens: impl IntoIterator<Item = SVec>) -> QuotSpace {
        let mut sub = SparseRref::new(order, amb);
        for g in gens {
            sub.push(g);
        }
        let piv: std::collections::BTreeSet<usize> = sub.pivots().into_iter().collect();
        let free: Vec<usize> = (0..amb).filter(|c| !piv.contains(c)).collect();
        let mut pos = vec![usize::MAX; amb];
        for (k, &f) in free.iter().enumerate() {
            pos[f] = k;
        }
        QuotSpace { sub, free, pos }
    }

    fn dim(&self) -> usize {
        self.free.len()
    }

    fn project(&self, v: SVec) -> SVec {
        self.sub.reduce(sorted(v)).into_iter().map(|(c, x)| (self.pos[c], x)).collect()
    }
}

// ---------------------------------------------------------------------------
// Complexes of vector spaces

/// A cochain complex of finite-dimensional spaces with sparse differentials
/// d^t: C^t → C^{t+1}, stored by columns.
#[derive(Clone, Debug)]
pub struct LinComplex {
    order: u32,
    dims: BTreeMap<i64, usize>,
    d: BTreeMap<i64, Vec<SVec>>,
}

/// H^t with a basis of representatives in normal form.
#[derive(Clone, Debug)]
pub struct Homology {
    order: u32,
    boundaries: SparseRref,
    basis: SparseRref,
}

impl Homology {
    pub fn dim(&self) -> usize {
        self.basis.rank()
    }

    fn reps(&self) -> Vec<SVec> {
        self.basis.rows().map(|(_, r)| r.clone()).collect()
    }

    /// Coordinates of the class of a cycle.
    fn coords(&self, z: SVec) -> Vec<CycloNum> {
        let order = self.order;
        let nf = self.boundaries.reduce(sorted(z));
        let look: HashMap<usize, &CycloNum> = nf.iter().map(|(c, x)| (*c, x)).collect();
        self.basis.pivots().iter().map(|p| look.get(p).map(|x| (*x).clone()).unwrap_or_else(|| CycloNum::zero(order))).collect()
    }
}

impl LinComplex {
    fn dim_at(&self, t: i64) -> usize {
        self.dims.get(&t).copied().unwrap_or(0)
    }

    fn diff(&self, t: i64) -> Vec<SVec> {
        self.d.get(&t).cloned().unwrap_or_else(|| vec![Vec::new(); self.dim_at(t)])
    }

    pub fn homology(&self, t: i64) -> Homology {
        let n = self.dim_at(t);
        // kernel of d^t
        let cols = self.diff(t);
        let mut rows: BTreeMap<usize, SVec> = BTreeMap::new();
        for (c, col) in cols.iter().enumerate() {
            for (r, x) in col {
                rows.entry(*r).or_default().push((c, x.clone()));
            }
        }
        let mut ker = SparseRref::new(self.order, n);
        for (_, r) in rows {
            ker.push(r);
        }
        let mut boundaries = SparseRref::new(self.order, n);
        for col in self.diff(t - 1) {
            boundaries.push(col);
        }
        let mut basis = SparseRref::new(self.order, n);
        for z in ker.nullspace_sparse() {
            basis.push(boundaries.reduce(z));
        }
        Homology { boundaries, basis, order: self.order }
    }

    pub fn check(&self) -> bool {
        self.d.iter().all(|(&t, cols)| {
            let next = self.diff(t + 1);
            cols.iter().all(|c| apply_cols(self.order, &next, c).is_empty())
        })
    }
}

/// The map on H^t induced by a chain map given by its columns in degree t.
fn induced(order: u32, f: &[SVec], src: &Homology, tgt: &Homology) -> Mat {
    let reps = src.reps();
    let mut m = Mat::zeros(order, tgt.dim(), reps.len());
    for (j, h) in reps.iter().enumerate() {
        for (i, x) in tgt.coords(apply_cols(order, f, h)).into_iter().enumerate() {
            m.set(i, j, x);
        }
    }
    m
}

// ---------------------------------------------------------------------------
// Double complexes

/// Blocks of a double complex, each with a key, a total degree and a
/// dimension, and the components of the total differential between blocks.
#[derive(Clone, Debug, Default)]
struct Bicomplex {
    blocks: Vec<((usize, u64), i64, usize)>,
    edges: Vec<(usize, usize, Vec<SVec>)>,
}

/// Where each block sits in the total complex.
struct Totalized {
    tot: LinComplex,
    place: Vec<Option<(i64, usize)>>,
    by_key: HashMap<(usize, u64), usize>,
}

fn totalize(order: u32, bc: &Bicomplex, lo: i64, hi: i64) -> Totalized {
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    let mut place = Vec::with_capacity(bc.blocks.len());
    let mut by_key = HashMap::new();
    for (b, &(key, deg, dim)) in bc.blocks.iter().enumerate() {
        by_key.insert(key, b);
        if deg < lo || deg > hi || dim == 0 {
            place.push(None);
            continue;
        }
        let d = dims.entry(deg).or_insert(0);
        place.push(Some((deg, *d)));
        *d += dim;
    }
    let mut d: BTreeMap<i64, Vec<SVec>> = dims.iter().map(|(&t, &n)| (t, vec![Vec::new(); n])).collect();
    for (s, t, cols) in &bc.edges {
        let (Some((ds, os)), Some((dt, ot))) = (place[*s], place[*t]) else { continue };
        debug_assert_eq!(ds + 1, dt);
        let target = d.get_mut(&ds).unwrap();
        for (c, col) in cols.iter().enumerate() {
            target[os + c].extend(col.iter().map(|(r, x)| (ot + r, x.clone())));
        }
    }
    for cols in d.values_mut() {
        for c in cols.iter_mut() {
            *c = sorted(std::mem::take(c));
        }
    }
    Totalized { tot: LinComplex { order, dims, d }, place, by_key }
}

/// A chain map between totalized double complexes given blockwise.
fn totalize_map(src: &Totalized, tgt: &Totalized, parts: &[(usize, usize, Vec<SVec>)]) -> BTreeMap<i64, Vec<SVec>> {
    let mut out: BTreeMap<i64, Vec<SVec>> = src.tot.dims.iter().map(|(&t, &n)| (t, vec![Vec::new(); n])).collect();
    for (s, t, cols) in parts {
        let (Some((ds, os)), Some((dt, ot))) = (src.place[*s], tgt.place[*t]) else { continue };
        debug_assert_eq!(ds, dt);
        let target = out.get_mut(&ds).unwrap();
        for (c, col) in cols.iter().enumerate() {
            target[os + c].extend(col.iter().map(|(r, x)| (ot + r, x.clone())));
        }
    }
    for cols in out.values_mut() {
        for c in cols.iter_mut() {
            *c = sorted(std::mem::take(c));
        }
    }
    out
}

/// A complex of modules presented by blocks (tag, degree, module id) and
/// signed components (source block, target block, map id, sign).
#[derive(Clone, Debug, Default)]
struct ModComplex {
    mods: Vec<GradedModule>,
    maps: Vec<ModuleMap>,
    blocks: Vec<(u64, i64, usize)>,
    edges: Vec<(usize, usize, usize, i64)>,
}

impl ModComplex {
    fn single(m: GradedModule) -> ModComplex {
        ModComplex { mods: vec![m], maps: Vec::new(), blocks: vec![(0, 0, 0)], edges: Vec::new() }
    }

    fn from_complex(c: &ComplexC) -> ModComplex {
        let n = c.terms.len();
        ModComplex {
            mods: c.terms.clone(),
            maps: c.diffs.clone(),
            blocks: (0..n).map(|k| (k as u64, c.lo + k as i64, k)).collect(),
            edges: (0..c.diffs.len()).map(|k| (k, k + 1, k, 1)).collect(),
        }
    }

    /// The Koszul-type complex ⊕_{S ⊆ [n], S ≠ ∅} P_{|S|} in degree |S| − 1
    /// (or 1 − |S| when `down`), where `ins[k−1][p]` maps P_k → P_{k+1} by
    /// inserting a new factor at slot p.
    fn subsets(n: usize, pieces: Vec<GradedModule>, ins: &[Vec<ModuleMap>], down: bool) -> ModComplex {
        let mut mc = ModComplex { mods: pieces, ..Default::default() };
        let mut map_id: HashMap<(usize, usize), usize> = HashMap::new();
        for (k, row) in ins.iter().enumerate() {
            for (p, m) in row.iter().enumerate() {
                map_id.insert((k + 1, p), mc.maps.len());
                mc.maps.push(m.clone());
            }
        }
        let mut index: HashMap<u64, usize> = HashMap::new();
        for mask in 1u64..(1 << n) {
            let k = mask.count_ones() as usize;
            if k > mc.mods.len() {
                continue;
            }
            let deg = if down { 1 - k as i64 } else { k as i64 - 1 };
            index.insert(mask, mc.blocks.len());
            mc.blocks.push((mask, deg, k - 1));
        }
        for (&mask, &b) in &index {
            let k = mask.count_ones() as usize;
            for t in 0..n {
                if mask & (1 << t) != 0 {
                    continue;
                }
                let Some(&tb) = index.get(&(mask | (1 << t))) else { continue };
                let p = (mask & ((1 << t) - 1)).count_ones() as usize;
                let Some(&m) = map_id.get(&(k, p)) else { continue };
                let sign = if p % 2 == 0 { 1 } else { -1 };
                if down { mc.edges.push((tb, b, m, sign)) } else { mc.edges.push((b, tb, m, sign)) }
            }
        }
        mc.edges.sort_by_key(|e| (e.0, e.1));
        mc
    }
}

/// The pairing space V ⊗_C X for a right module V and a left module X.
#[derive(Clone, Debug)]
struct Pairing {
    blocks: BTreeMap<i64, (usize, usize, usize)>,
    decode: Vec<(i64, usize, usize)>,
    quot: QuotSpace,
}

fn pairing(v: &GradedModule, x: &GradedModule) -> Pairing {
    let order = v.order();
    let mut blocks = BTreeMap::new();
    let mut decode = Vec::new();
    let mut amb = 0;
    for (&a, &dv) in v.dims() {
        let dx = x.dim_at(-a);
        if dx == 0 {
            continue;
        }
        blocks.insert(a, (amb, dv, dx));
        for i in 0..dv {
            for j in 0..dx {
                decode.push((a, i, j));
            }
        }
        amb += dv * dx;
    }
    let mut rels: Vec<SVec> = Vec::new();
    for (&a, &dv) in v.dims() {
        // (vE)⊗x − v⊗(Ex) for x ∈ X_{−a−2}, and the F analogue for x ∈ X_{−a+2}
        for (shift, vb, xb) in [(2i64, v.e_ref(a), x.e_ref(-a - 2)), (-2, v.f_ref(a), x.f_ref(-a + 2))] {
            let dx = x.dim_at(-a - shift);
            if dx == 0 {
                continue;
            }
            for i in 0..dv {
                for j in 0..dx {
                    let mut r: SVec = Vec::new();
                    if let (Some(m), Some(&(off, _, dxt))) = (vb, blocks.get(&(a + shift))) {
                        for k in 0..m.rows() {
                            let c = m.get(k, i);
                            if !c.is_zero() {
                                r.push((off + k * dxt + j, c.clone()));
                            }
                        }
                    }
                    if let (Some(m), Some(&(off, _, dxt))) = (xb, blocks.get(&a)) {
                        for k in 0..m.rows() {
                            let c = m.get(k, j);
                            if !c.is_zero() {
                                r.push((off + i * dxt + k, -c));
                            }
                        }
                    }
                    if !r.is_empty() {
                        rels.push(sorted(r));
                    }
                }
            }
        }
    }
    Pairing { blocks, decode, quot: QuotSpace::new(order, amb, rels) }
}

/// Columns of φ ⊗ ψ: V ⊗_C X → V′ ⊗_C X′ (None stands for an identity).
fn pairing_map(p: &Pairing, q: &Pairing, phi: Option<&ModuleMap>, psi: Option<&ModuleMap>) -> Vec<SVec> {
    p.quot
        .free
        .iter()
        .map(|&c| {
            let (a, i, j) = p.decode[c];
            let Some(&(off, _, dxt)) = q.blocks.get(&a) else { return Vec::new() };
            let left: SVec = match phi {
                None => vec![(i, CycloNum::one(q.quot.sub.order()))],
                Some(f) => f.block_ref(a).map(|m| sparse_col(m, i)).unwrap_or_default(),
            };
            let right: SVec = match psi {
                None => vec![(j, CycloNum::one(q.quot.sub.order()))],
                Some(g) => g.block_ref(-a).map(|m| sparse_col(m, j)).unwrap_or_default(),
            };
            let mut v = Vec::with_capacity(left.len() * right.len());
            for (r, x) in &left {
                for (s, y) in &right {
                    v.push((off + r * dxt + s, x * y));
                }
            }
            q.quot.project(v)
        })
        .collect()
}

fn identity_cols(order: u32, n: usize) -> Vec<SVec> {
    (0..n).map(|i| vec![(i, CycloNum::one(order))]).collect()
}

/// R ⊗_C C for a complex R of right modules and C of left modules, with
/// d = d_R + (−1)^{deg R} d_C.
fn generic_bicomplex(r: &ModComplex, c: &ModComplex) -> (Bicomplex, HashMap<(usize, usize), Pairing>) {
    let mut cache: HashMap<(usize, usize), Pairing> = HashMap::new();
    let mut bc = Bicomplex::default();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    for (rb, &(_, rdeg, rm)) in r.blocks.iter().enumerate() {
        for (cb, &(ctag, cdeg, cm)) in c.blocks.iter().enumerate() {
            let p = cache.entry((rm, cm)).or_insert_with(|| pairing(&r.mods[rm], &c.mods[cm]));
            index.insert((rb, cb), bc.blocks.len());
            bc.blocks.push(((rb, ctag), rdeg + cdeg, p.quot.dim()));
        }
    }
    for &(s, t, m, sign) in &r.edges {
        for (cb, &(_, _, cm)) in c.blocks.iter().enumerate() {
            let (p, q) = (&cache[&(r.blocks[s].2, cm)], &cache[&(r.blocks[t].2, cm)]);
            if p.quot.dim() == 0 || q.quot.dim() == 0 {
                continue;
            }
            let cols = scale_cols(pairing_map(p, q, Some(&r.maps[m]), None), sign);
            bc.edges.push((index[&(s, cb)], index[&(t, cb)], cols));
        }
    }
    for (rb, &(_, rdeg, rm)) in r.blocks.iter().enumerate() {
        let rs = if rdeg.rem_euclid(2) == 0 { 1 } else { -1 };
        for &(s, t, m, sign) in &c.edges {
            let (p, q) = (&cache[&(rm, c.blocks[s].2)], &cache[&(rm, c.blocks[t].2)]);
            if p.quot.dim() == 0 || q.quot.dim() == 0 {
                continue;
            }
            let cols = scale_cols(pairing_map(p, q, None, Some(&c.maps[m])), sign * rs);
            bc.edges.push((index[&(rb, s)], index[&(rb, t)], cols));
        }
    }
    (bc, cache)
}

fn scale_cols(mut cols: Vec<SVec>, sign: i64) -> Vec<SVec> {
    if sign < 0 {
        for c in cols.iter_mut() {
            for (_, x) in c.iter_mut() {
                *x = -&*x;
            }
        }
    }
    cols
}

/// Weights pairing with the generators of the Verma resolution of B, and the
/// F-powers linking consecutive columns.
fn verma_columns(ell: i64, top: i64) -> (Vec<i64>, Vec<usize>) {
    let mut w = Vec::new();
    let mut j = 0i64;
    loop {
        let x = (j / 2) * 2 * ell + if j % 2 == 1 { 2 } else { 0 };
        if x > top {
            break;
        }
        w.push(x);
        j += 1;
    }
    let p = (0..w.len()).map(|j| if j % 2 == 0 { 1 } else { ell as usize - 1 }).collect();
    (w, p)
}

/// B ⊗_C C computed with the Verma resolution of B: the column j is
/// (C/EC)_{w_j} and the horizontal maps are F or F^{ℓ−1}.
struct FastBicomplex {
    bc: Bicomplex,
    cols: Vec<i64>,
    quots: HashMap<(usize, usize), QuotSpace>,
}

fn coinv_e(m: &GradedModule, w: i64) -> QuotSpace {
    let e = m.e_block(w - 2);
    QuotSpace::new(m.order(), m.dim_at(w), (0..e.cols()).map(|j| sparse_col(&e, j)))
}

fn fast_bicomplex(order: u32, ell: i64, c: &ModComplex, top: i64) -> FastBicomplex {
    let (cols, pows) = verma_columns(ell, top);
    let mut quots: HashMap<(usize, usize), QuotSpace> = HashMap::new();
    let mut bc = Bicomplex::default();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    for (j, &w) in cols.iter().enumerate() {
        for (cb, &(ctag, cdeg, cm)) in c.blocks.iter().enumerate() {
            let q = quots.entry((cm, j)).or_insert_with(|| coinv_e(&c.mods[cm], w));
            index.insert((j, cb), bc.blocks.len());
            bc.blocks.push(((j, ctag), cdeg - j as i64, q.dim()));
        }
    }
    for j in 0..cols.len().saturating_sub(1) {
        for (cb, &(_, _, cm)) in c.blocks.iter().enumerate() {
            let (p, q) = (&quots[&(cm, j + 1)], &quots[&(cm, j)]);
            if p.dim() == 0 || q.dim() == 0 {
                continue;
            }
            let f = c.mods[cm].f_power(cols[j + 1], pows[j]);
            let m: Vec<SVec> = p.free.iter().map(|&x| q.project(sparse_col(&f, x))).collect();
            bc.edges.push((index[&(j + 1, cb)], index[&(j, cb)], m));
        }
    }
    for (j, &w) in cols.iter().enumerate() {
        let rs = if j % 2 == 0 { 1 } else { -1 };
        for &(s, t, m, sign) in &c.edges {
            let (p, q) = (&quots[&(c.blocks[s].2, j)], &quots[&(c.blocks[t].2, j)]);
            if p.dim() == 0 || q.dim() == 0 {
                continue;
            }
            let blk = c.maps[m].block_ref(w);
            let m: Vec<SVec> =
                p.free.iter().map(|&x| blk.map(|b| q.project(sparse_col(b, x))).unwrap_or_default()).collect();
            bc.edges.push((index[&(j, s)], index[&(j, t)], scale_cols(m, sign * rs)));
        }
    }
    let _ = order;
    FastBicomplex { bc, cols, quots }
}

// ---------------------------------------------------------------------------
// Complexes of modules

/// A bounded complex of graded modules C^lo → … with d^k: C^k → C^{k+1}.
#[derive(Clone, Debug)]
pub struct ComplexC {
    pub lo: i64,
    pub terms: Vec<GradedModule>,
    pub diffs: Vec<ModuleMap>,
}

/// A resolution together with its augmentation (P^0 → V for left
/// resolutions, V → P^0 for right ones).
#[derive(Clone, Debug)]
pub struct Resolution {
    pub complex: ComplexC,
    pub augmentation: ModuleMap,
}

/// A chain map given degreewise, starting at degree `lo`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub lo: i64,
    pub maps: Vec<ModuleMap>,
}

impl ComplexC {
    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn term(&self, k: i64) -> Option<&GradedModule> {
        if k < self.lo { None } else { self.terms.get((k - self.lo) as usize) }
    }

    /// d ∘ d = 0 and every differential is an intertwiner.
    pub fn check(&self) -> bool {
        let ok_maps = self.diffs.iter().enumerate().all(|(k, d)| d.is_intertwiner(&self.terms[k], &self.terms[k + 1]));
        let ok_sq = self.diffs.windows(2).all(|w| w[1].compose(&w[0]).is_zero());
        ok_maps && ok_sq
    }

    fn diff_block(&self, k: i64, w: i64) -> Option<Mat> {
        if k < self.lo || k >= self.hi() {
            return None;
        }
        Some(self.diffs[(k - self.lo) as usize].block(w))
    }

    /// dim H^k per weight.
    pub fn homology(&self, k: i64) -> BTreeMap<i64, usize> {
        let Some(t) = self.term(k) else { return BTreeMap::new() };
        let mut out = BTreeMap::new();
        for (&w, &d) in t.dims() {
            let out_rank = self.diff_block(k, w).map(|m| m.rank()).unwrap_or(0);
            let in_rank = self.diff_block(k - 1, w).map(|m| m.rank()).unwrap_or(0);
            let h = d - out_rank - in_rank;
            if h > 0 {
                out.insert(w, h);
            }
        }
        out
    }

    pub fn is_exact_at(&self, k: i64) -> bool {
        self.homology(k).is_empty()
    }

    /// Weights bounded above, with finitely many weights below any bound:
    /// for a bounded complex of finite-dimensional modules this reduces to
    /// finiteness of the support, reported as (min, max).
    pub fn weight_range(&self) -> Option<(i64, i64)> {
        let lo = self.terms.iter().filter_map(|t| t.lowest_weight()).min()?;
        let hi = self.terms.iter().filter_map(|t| t.highest_weight()).max()?;
        Some((lo, hi))
    }

    /// Applies a functor termwise: covariant ones keep the direction.
    fn map_terms(&self, fm: impl Fn(&GradedModule) -> GradedModule, fd: impl Fn(&ModuleMap) -> ModuleMap) -> ComplexC {
        ComplexC { lo: self.lo, terms: self.terms.iter().map(&fm).collect(), diffs: self.diffs.iter().map(fd).collect() }
    }

    /// The rigid dual, with degrees negated.
    pub fn star(&self) -> ComplexC {
        let terms: Vec<GradedModule> = self.terms.iter().rev().map(|t| t.star()).collect();
        let diffs: Vec<ModuleMap> = self.diffs.iter().rev().map(|d| d.dual_vee()).collect();
        ComplexC { lo: -self.hi(), terms, diffs }
    }

    /// The antipode twist s, termwise.
    pub fn twist_s(&self) -> ComplexC {
        self.map_terms(|t| t.twist_s(), |d| d.clone())
    }

    /// C ⊗ M termwise.
    pub fn tensor_right(&self, m: &GradedModule) -> Result<ComplexC> {
        let id = ModuleMap::identity(m);
        Ok(ComplexC {
            lo: self.lo,
            terms: self.terms.iter().map(|t| tensor(t, m)).collect::<Result<_>>()?,
            diffs: self.diffs.iter().map(|d| tensor_maps(d, &id, None)).collect(),
        })
    }
}

/// Freeness over k[E]/(E^ℓ) (u⁺-induced) or over k[F]/(F^ℓ) (u⁻-induced).
pub fn is_induced(m: &GradedModule, plus: bool) -> bool {
    let ell = m.ell() as usize;
    if m.dim() % ell != 0 {
        return false;
    }
    let r: usize = m
        .weights()
        .into_iter()
        .map(|w| if plus { m.e_power(w, ell - 1) } else { m.f_power(w, ell - 1) }.rank())
        .sum();
    r * ell == m.dim()
}

/// Flattens a block-presented complex of modules into a ComplexC.
fn flatten(mc: &ModComplex) -> Result<(ComplexC, Vec<(i64, usize)>)> {
    let degs: std::collections::BTreeSet<i64> = mc.blocks.iter().map(|b| b.1).collect();
    let (Some(&lo), Some(&hi)) = (degs.first(), degs.last()) else {
        return Err(Error::Invalid("empty complex".into()));
    };
    let mut members: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (b, blk) in mc.blocks.iter().enumerate() {
        members.entry(blk.1).or_default().push(b);
    }
    // offsets of each block inside its degree, per weight
    let mut pos: Vec<(i64, usize)> = vec![(0, 0); mc.blocks.len()];
    let mut offs: Vec<BTreeMap<i64, usize>> = vec![BTreeMap::new(); mc.blocks.len()];
    let mut terms = Vec::new();
    for k in lo..=hi {
        let bs = members.get(&k).cloned().unwrap_or_default();
        let mut acc: BTreeMap<i64, usize> = BTreeMap::new();
        for (i, &b) in bs.iter().enumerate() {
            pos[b] = (k, i);
            for (&w, &d) in mc.mods[mc.blocks[b].2].dims() {
                let a = acc.entry(w).or_insert(0);
                offs[b].insert(w, *a);
                *a += d;
            }
        }
        let parts: Vec<&GradedModule> = bs.iter().map(|&b| &mc.mods[mc.blocks[b].2]).collect();
        let t = if parts.is_empty() {
            let m0 = &mc.mods[0];
            GradedModule::zero_module(m0.order(), m0.l(), m0.side(), m0.twist())
        } else {
            GradedModule::direct_sum(&parts)?
        };
        terms.push(t);
    }
    let order = terms[0].order();
    let mut diffs = Vec::new();
    for k in lo..hi {
        let (src, tgt) = (&terms[(k - lo) as usize], &terms[(k + 1 - lo) as usize]);
        let mut blocks: BTreeMap<i64, Mat> =
            src.dims().iter().map(|(&w, &d)| (w, Mat::zeros(order, tgt.dim_at(w), d))).collect();
        for &(s, t, m, sign) in &mc.edges {
            if mc.blocks[s].1 != k {
                continue;
            }
            let map = &mc.maps[m];
            for (&w, x) in blocks.iter_mut() {
                if let (Some(b), Some(&os), Some(&ot)) = (map.block_ref(w), offs[s].get(&w), offs[t].get(&w)) {
                    let b = if sign < 0 { -b } else { b.clone() };
                    x.add_block(ot, os, &b);
                }
            }
        }
        diffs.push(ModuleMap::from_blocks(src, tgt, blocks));
    }
    Ok((ComplexC { lo, terms, diffs }, pos))
}

/// The module Ind W = u∓ ⊗ W induced from a u^{≥0}-module W (`plus` false)
/// or a u^{≤0}-module W (`plus` true), given by its dims and the blocks of
/// the operator it carries (E for u^{≥0}, F for u^{≤0}).  Returns the module
/// and, per weight, the list of (k, μ, offset) describing the basis X^k ⊗ W_μ.
fn induce(
    order: u32,
    l: u32,
    twist: Twist,
    wdims: &BTreeMap<i64, usize>,
    wop: &BTreeMap<i64, Mat>,
    plus: bool,
) -> Result<(GradedModule, BTreeMap<i64, Vec<(usize, i64, usize)>>)> {
    let ell = if l % 2 == 1 { l as i64 } else { l as i64 / 2 };
    let sgn = if plus { 2 } else { -2 };
    let mut lay: BTreeMap<i64, Vec<(usize, i64, usize)>> = BTreeMap::new();
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    for k in 0..ell as usize {
        for (&mu, &d) in wdims {
            let nu = mu + sgn * k as i64;
            let a = dims.entry(nu).or_insert(0);
            lay.entry(nu).or_default().push((k, mu, *a));
            *a += d;
        }
    }
    let find = |nu: i64, k: usize, mu: i64| lay.get(&nu).and_then(|v| v.iter().find(|x| x.0 == k && x.1 == mu)).map(|x| x.2);
    let q = |m: i64| crate::uq::qint(order, l, m);
    let mut up: BTreeMap<i64, Mat> = BTreeMap::new(); // the free generator direction
    let mut down: BTreeMap<i64, Mat> = BTreeMap::new(); // the other one
    for (&nu, v) in &lay {
        let d = dims[&nu];
        let tn = nu + sgn;
        if let Some(&dt) = dims.get(&tn) {
            let mut x = Mat::zeros(order, dt, d);
            for &(k, mu, off) in v {
                if let Some(t) = find(tn, k + 1, mu) {
                    x.set_block(t, off, &Mat::identity(order, wdims[&mu]));
                }
            }
            up.insert(nu, x);
        }
        let tn = nu - sgn;
        if let Some(&dt) = dims.get(&tn) {
            let mut x = Mat::zeros(order, dt, d);
            for &(k, mu, off) in v {
                let dm = wdims[&mu];
                // X^k ⊗ (op w)
                if let (Some(b), Some(t)) = (wop.get(&mu), find(tn, k, mu - sgn)) {
                    x.add_block(t, off, b);
                }
                if k >= 1 {
                    // ∓[k][μ ± (k − 1)] X^{k−1} ⊗ w
                    let c = if plus { -(q(k as i64) * q(mu + k as i64 - 1)) } else { q(k as i64) * q(mu - k as i64 + 1) };
                    if let Some(t) = find(tn, k - 1, mu) {
                        x.add_block(t, off, &Mat::scalar(order, dm, &c));
                    }
                }
            }
            down.insert(nu, x);
        }
    }
    let (e, f) = if plus { (up, down) } else { (down, up) };
    let m = GradedModule::from_blocks(order, l, Side::Left, twist, dims, e, f)?;
    Ok((m, lay))
}

/// A minimal surjection Ind W → Z from a u∓-induced module, where W is
/// generated by lifts of a basis of Z/FZ (or Z/EZ when `plus`).
fn induced_cover(z: &GradedModule, plus: bool) -> Result<(GradedModule, ModuleMap)> {
    let order = z.order();
    let sgn = if plus { 2 } else { -2 };
    let gen_op = |w: i64| if plus { z.e_block(w) } else { z.f_block(w) };
    let stab_op = |w: i64| if plus { z.f_block(w) } else { z.e_block(w) };
    // complements of the image of the generating operator
    let mut gens: BTreeMap<i64, Mat> = BTreeMap::new();
    for (&w, &d) in z.dims() {
        let img = gen_op(w - sgn);
        let mut r = SparseRref::new(order, d);
        for j in 0..img.cols() {
            r.push(sparse_col(&img, j));
        }
        let piv: Vec<usize> = r.pivots();
        let comp: Vec<usize> = (0..d).filter(|c| !piv.contains(c)).collect();
        if !comp.is_empty() {
            let mut m = Mat::zeros(order, d, comp.len());
            for (k, &c) in comp.iter().enumerate() {
                m.set(c, k, CycloNum::one(order));
            }
            gens.insert(w, m);
        }
    }
    // closure under the stabilizing operator
    let mut span: BTreeMap<i64, Mat> = BTreeMap::new();
    let mut ws: Vec<i64> = z.weights();
    // W is closed under the stabilizing operator, so sweep in its direction
    ws.sort_by_key(|&w| if plus { -w } else { w });
    for &w in &ws {
        let d = z.dim_at(w);
        let mut parts: Vec<Mat> = Vec::new();
        if let Some(g) = gens.get(&w) {
            parts.push(g.clone());
        }
        if let Some(prev) = span.get(&(w + sgn)) {
            parts.push(stab_op(w + sgn).matmul(prev));
        }
        if parts.is_empty() {
            continue;
        }
        let refs: Vec<&Mat> = parts.iter().collect();
        let s = Mat::hstack(order, d, &refs).col_space();
        if s.cols() > 0 {
            span.insert(w, s);
        }
    }
    let wdims: BTreeMap<i64, usize> = span.iter().map(|(&w, m)| (w, m.cols())).collect();
    let mut wop: BTreeMap<i64, Mat> = BTreeMap::new();
    for (&w, b) in &span {
        if let Some(t) = span.get(&(w - sgn)) {
            let img = stab_op(w).matmul(b);
            let x = t.solve(&img).ok_or_else(|| Error::Internal("generated subspace not stable".into()))?;
            wop.insert(w, x);
        }
    }
    let (ind, lay) = induce(order, z.l(), z.twist(), &wdims, &wop, plus)?;
    let mut blocks = BTreeMap::new();
    for (&nu, v) in &lay {
        let mut x = Mat::zeros(order, z.dim_at(nu), ind.dim_at(nu));
        for &(k, mu, off) in v {
            let pw = if plus { z.e_power(mu, k) } else { z.f_power(mu, k) };
            x.set_block(0, off, &pw.matmul(&span[&mu]));
        }
        blocks.insert(nu, x);
    }
    let phi = ModuleMap::from_blocks(&ind, z, blocks);
    Ok((ind, phi))
}

/// Iterates `cover` on successive kernels, starting from a given first step
/// P0 → V.  Produces P_depth → … → P_0 in degrees −depth..0.
fn iterate_covers(
    first: (GradedModule, ModuleMap),
    depth: usize,
    stop_below: Option<i64>,
    mut cover: impl FnMut(&GradedModule, usize) -> Result<(GradedModule, ModuleMap)>,
) -> Result<Resolution> {
    let (p0, aug) = first;
    let mut terms = vec![p0];
    let mut diffs: Vec<ModuleMap> = Vec::new();
    let mut prev = aug.clone();
    for step in 1..=depth {
        let (z, incl) = terms.last().unwrap().restrict(&prev.kernel())?;
        if z.is_zero() {
            break;
        }
        if let (Some(b), Some(h)) = (stop_below, z.highest_weight()) {
            if h < b {
                break;
            }
        }
        let (p, phi) = cover(&z, step)?;
        let d = incl.compose(&phi);
        terms.push(p);
        prev = d.clone();
        diffs.push(d);
    }
    terms.reverse();
    diffs.reverse();
    let lo = 1 - terms.len() as i64;
    Ok(Resolution { complex: ComplexC { lo, terms, diffs }, augmentation: aug })
}

/// Which of the four resolutions of a module to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    /// u⁻-induced convex left resolution.
    DownLeft,
    /// Its dual: u⁺-induced, concave, by right modules.
    DownRight,
    /// u⁺-induced left resolution.
    UpLeft,
    /// The dual of the u⁻-induced one, by right modules.
    UpRight,
}

impl Direction {
    pub fn arrow(self) -> &'static str {
        match self {
            Direction::DownLeft => "↙",
            Direction::DownRight => "↘",
            Direction::UpLeft => "↖",
            Direction::UpRight => "↗",
        }
    }
}

// ---------------------------------------------------------------------------
// The K-tower

/// Inserts the weight-0 vector of factor `slot_mod` at position p.
fn insert_map(src: &TensorWord, tgt: &TensorWord, p: usize) -> ModuleMap {
    let order = src.module.order();
    let look = tgt.lookup();
    let mut blocks = BTreeMap::new();
    for &w in src.module.dims().keys() {
        let basis = src.basis(w);
        let mut x = Mat::zeros(order, tgt.module.dim_at(w), basis.len());
        for (c, t) in basis.iter().enumerate() {
            let mut t2 = t.clone();
            t2.insert(p, (0, 0));
            if let Some(&r) = look.get(t2.as_slice()) {
                x.set(r, c, CycloNum::one(order));
            }
        }
        blocks.insert(w, x);
    }
    ModuleMap::from_dims(order, src.module.dims().clone(), tgt.module.dims().clone(), blocks)
}

/// id ⊗ f on the last factor of a word.
fn last_factor_map(src: &TensorWord, tgt: &TensorWord, f: &ModuleMap) -> ModuleMap {
    let order = src.module.order();
    let look = tgt.lookup();
    let last = src.len() - 1;
    let mut blocks = BTreeMap::new();
    for &w in src.module.dims().keys() {
        let basis = src.basis(w);
        let mut x = Mat::zeros(order, tgt.module.dim_at(w), basis.len());
        for (c, t) in basis.iter().enumerate() {
            let (mu, j) = t[last];
            let Some(b) = f.block_ref(mu) else { continue };
            for r in 0..b.rows() {
                let v = b.get(r, j);
                if v.is_zero() {
                    continue;
                }
                let mut t2 = t.clone();
                t2[last] = (mu, r);
                if let Some(&row) = look.get(t2.as_slice()) {
                    x.add_at(row, c, v);
                }
            }
        }
        blocks.insert(w, x);
    }
    ModuleMap::from_dims(order, src.module.dims().clone(), tgt.module.dims().clone(), blocks)
}

/// The pieces D^{⊗k} ⊗ N of K_n ⊗ N and the insertion maps between them,
/// grown on demand.
struct Tower {
    d: GradedModule,
    base: Option<GradedModule>,
    window: Option<(i64, i64)>,
    words: Vec<TensorWord>,
    ins: Vec<Vec<ModuleMap>>,
}

impl Tower {
    fn new(d: GradedModule, base: Option<GradedModule>, window: Option<(i64, i64)>) -> Tower {
        Tower { d, base, window, words: Vec::new(), ins: Vec::new() }
    }

    fn grow(&mut self, n: usize) -> Result<()> {
        while self.words.len() < n {
            let k = self.words.len() + 1;
            let mut f = vec![self.d.clone(); k];
            f.extend(self.base.iter().cloned());
            let w = TensorWord::with_window(f, self.window)?;
            if let Some(prev) = self.words.last() {
                let row = (0..k).map(|p| insert_map(prev, &w, p)).collect();
                self.ins.push(row);
            }
            self.words.push(w);
        }
        Ok(())
    }

    fn complex(&mut self, n: usize) -> Result<ModComplex> {
        self.grow(n)?;
        let pieces = self.words[..n].iter().map(|w| w.module.clone()).collect();
        Ok(ModComplex::subsets(n, pieces, &self.ins[..n - 1], false))
    }

    /// id ⊗ f: the tower over N to the tower over N′, piecewise.
    fn piece_maps(&self, tgt: &Tower, n: usize, f: &ModuleMap) -> Vec<ModuleMap> {
        (0..n).map(|k| last_factor_map(&self.words[k], &tgt.words[k], f)).collect()
    }
}

impl Engine {
    /// DM(0)_{ζ⁻¹} together with the embedding ι: B → DM(0)_{ζ⁻¹}.
    pub fn dm_zero(&self) -> Result<(GradedModule, ModuleMap)> {
        let d = self.verma_tw(0, Twist::ZetaInv)?.duality_d();
        let b = self.unit();
        let iota = ModuleMap::from_blocks(&b, &d, [(0, Mat::identity(self.order(), 1))].into_iter().collect());
        Ok((d, iota))
    }

    /// The complex K_n: D^{⊗|S|} over nonempty S ⊆ {1..n} in degree |S| − 1.
    pub fn k_complex(&self, n: usize) -> Result<ComplexC> {
        if n == 0 {
            return Err(Error::Invalid("the K-tower starts at n = 1".into()));
        }
        let mut t = Tower::new(self.dm_zero()?.0, None, None);
        Ok(flatten(&t.complex(n)?)?.0)
    }

    /// The chain map K_{n+1} → K_n killing the summands that involve the
    /// last index.
    pub fn k_projection(&self, n: usize) -> Result<ChainMap> {
        let mut t = Tower::new(self.dm_zero()?.0, None, None);
        let (src, spos) = flatten(&t.complex(n + 1)?)?;
        let (tgt, tpos) = flatten(&t.complex(n)?)?;
        let small = t.complex(n)?;
        let big = t.complex(n + 1)?;
        let mut maps = Vec::new();
        for k in src.lo..=src.hi() {
            let s = src.term(k).unwrap();
            let Some(tt) = tgt.term(k) else {
                maps.push(ModuleMap::zero(s, &GradedModule::zero_module(s.order(), s.l(), s.side(), s.twist())));
                continue;
            };
            let mut blocks: BTreeMap<i64, Mat> =
                s.dims().iter().map(|(&w, &d)| (w, Mat::zeros(self.order(), tt.dim_at(w), d))).collect();
            for (b, &(mask, _, m)) in big.blocks.iter().enumerate() {
                if spos[b].0 != k || mask & (1 << n) != 0 {
                    continue;
                }
                let tb = small.blocks.iter().position(|x| x.0 == mask).unwrap();
                let (ks, is) = spos[b];
                let (_, it) = tpos[tb];
                let _ = ks;
                let module = &big.mods[m];
                for (&w, x) in blocks.iter_mut() {
                    let d = module.dim_at(w);
                    if d == 0 {
                        continue;
                    }
                    let os = block_offset(&big, &spos, k, is, w);
                    let ot = block_offset(&small, &tpos, k, it, w);
                    x.set_block(ot, os, &Mat::identity(self.order(), d));
                }
            }
            maps.push(ModuleMap::from_blocks(s, tt, blocks));
        }
        Ok(ChainMap { lo: src.lo, maps })
    }

    /// Checks the three tower properties for K_n: every term is u⁺-induced;
    /// the complex is exact off degrees 0 and n − 1 with H⁰ = B (n ≥ 2);
    /// and H^{n−1} lives in weights ≤ −2n apart from the unit line at n = 1.
    pub fn k_tower_check(&self, n: usize) -> Result<KTowerCheck> {
        let k = self.k_complex(n)?;
        let induced = k.terms.iter().all(|t| is_induced(t, true));
        let mut exact_off = true;
        for deg in k.lo..=k.hi() {
            if deg != 0 && deg != n as i64 - 1 && !k.is_exact_at(deg) {
                exact_off = false;
            }
        }
        let h0 = k.homology(0);
        let unit_h0 = n == 1 || h0 == [(0, 1)].into_iter().collect::<BTreeMap<_, _>>();
        let top = k.homology(n as i64 - 1);
        let bound = -2 * n as i64;
        let truncation = top.iter().all(|(&w, &d)| w <= bound || (n == 1 && w == 0 && d == 1));
        Ok(KTowerCheck { n, induced, exact_off, unit_h0, truncation, chain: k.check() })
    }
}

fn block_offset(mc: &ModComplex, pos: &[(i64, usize)], k: i64, idx: usize, w: i64) -> usize {
    mc.blocks
        .iter()
        .enumerate()
        .filter(|(b, _)| pos[*b].0 == k && pos[*b].1 < idx)
        .map(|(_, blk)| mc.mods[blk.2].dim_at(w))
        .sum()
}

/// Outcome of the tower checks for one n.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct KTowerCheck {
    pub n: usize,
    pub chain: bool,
    pub induced: bool,
    pub exact_off: bool,
    pub unit_h0: bool,
    pub truncation: bool,
}

impl KTowerCheck {
    pub fn holds(&self) -> bool {
        self.chain && self.induced && self.exact_off && self.unit_h0 && self.truncation
    }
}

// ---------------------------------------------------------------------------
// Tor over the tower

/// The right-hand resolution side of V ⊗_C (K_n ⊗ N).
#[derive(Clone, Debug)]
enum RightSide {
    /// V = B, through the Verma resolution directly on coinvariants.
    Unit,
    /// An explicit complex of right modules.
    Complex(ModComplex),
}

enum Pair {
    Fast { cols: Vec<i64>, quots: HashMap<(usize, usize), QuotSpace> },
    Generic { r: ModComplex, cache: HashMap<(usize, usize), Pairing> },
}

/// Tor(V, K_n ⊗ N) for one n, with the data needed to map it.
struct Level {
    n: usize,
    blocks: Vec<((usize, u64), i64, usize)>,
    tot: Totalized,
    homs: BTreeMap<i64, Homology>,
    pair: Pair,
}

impl Level {
    fn build(order: u32, ell: i64, side: &RightSide, c: &ModComplex, n: usize, top: i64, degs: (i64, i64)) -> Level {
        let (bc, pair) = match side {
            RightSide::Unit => {
                let fb = fast_bicomplex(order, ell, c, top);
                (fb.bc, Pair::Fast { cols: fb.cols, quots: fb.quots })
            }
            RightSide::Complex(r) => {
                let (bc, cache) = generic_bicomplex(r, c);
                (bc, Pair::Generic { r: r.clone(), cache })
            }
        };
        // Tor_k sits in total degree −k
        let (lo, hi) = (-degs.1 - 1, -degs.0 + 1);
        let tot = totalize(order, &bc, lo, hi);
        let homs = (-degs.1..=-degs.0).map(|t| (t, tot.tot.homology(t))).collect();
        Level { n, blocks: bc.blocks, tot, homs, pair }
    }

    fn dims(&self) -> BTreeMap<i64, usize> {
        self.homs.iter().map(|(&t, h)| (-t, h.dim())).collect()
    }

    /// Blockwise components of a map of towers given by piece maps.
    fn map_parts(&self, tgt: &Level, pieces: &[ModuleMap]) -> Vec<(usize, usize, Vec<SVec>)> {
        let mut parts = Vec::new();
        for (b, &(key, _, dim)) in self.blocks.iter().enumerate() {
            if dim == 0 {
                continue;
            }
            let Some(&tb) = tgt.tot.by_key.get(&key) else { continue };
            let k = key.1.count_ones() as usize - 1;
            let cols = match (&self.pair, &tgt.pair) {
                (Pair::Fast { cols, quots }, Pair::Fast { quots: tq, .. }) => {
                    let (p, q) = (&quots[&(k, key.0)], &tq[&(k, key.0)]);
                    let blk = pieces[k].block(cols[key.0]);
                    p.free.iter().map(|&x| q.project(sparse_col(&blk, x))).collect()
                }
                (Pair::Generic { r, cache }, Pair::Generic { cache: tc, .. }) => {
                    let rm = r.blocks[key.0].2;
                    pairing_map(&cache[&(rm, k)], &tc[&(rm, k)], None, Some(&pieces[k]))
                }
                _ => continue,
            };
            parts.push((b, tb, cols));
        }
        parts
    }

    /// The projection to the previous level (the tower over the same N).
    fn projection_parts(&self, tgt: &Level) -> Vec<(usize, usize, Vec<SVec>)> {
        let order = self.tot.tot.order;
        let mut parts = Vec::new();
        for (b, &(key, _, dim)) in self.blocks.iter().enumerate() {
            if dim == 0 || key.1 & (1 << tgt.n) != 0 {
                continue;
            }
            if let Some(&tb) = tgt.tot.by_key.get(&key) {
                parts.push((b, tb, identity_cols(order, dim)));
            }
        }
        parts
    }

    /// Matrices of a blockwise chain map on each Tor degree.
    fn induced_on(&self, tgt: &Level, parts: &[(usize, usize, Vec<SVec>)]) -> BTreeMap<i64, Mat> {
        let order = self.tot.tot.order;
        let cols = totalize_map(&self.tot, &tgt.tot, parts);
        self.homs
            .iter()
            .map(|(&t, h)| {
                let f = cols.get(&t).cloned().unwrap_or_default();
                (-t, induced(order, &f, h, &tgt.homs[&t]))
            })
            .collect()
    }
}

/// Semiinfinite Tor dimensions per degree, with the index at which the
/// tower was found to stabilize.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TorProfile {
    pub degrees: BTreeMap<i64, usize>,
    pub stabilized_at: usize,
    pub method: String,
}

impl TorProfile {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("profile serializes")
    }

    pub fn dim(&self, k: i64) -> usize {
        self.degrees.get(&k).copied().unwrap_or(0)
    }

    pub fn support(&self) -> BTreeMap<i64, usize> {
        self.degrees.iter().filter(|x| *x.1 > 0).map(|(&k, &d)| (k, d)).collect()
    }
}

/// How the left factor of Tor is resolved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ResolutionChoice {
    /// The Verma shortcut for V = B, the canonical resolution otherwise.
    #[default]
    Auto,
    Canonical,
    /// The canonical one with a good surjection M(0) ⊗ Z → Z spliced in.
    Perturbed,
}

#[derive(Clone, Copy, Debug)]
pub struct TorOptions {
    pub cap: usize,
    pub resolution: ResolutionChoice,
    /// Above this dimension N is split into indecomposables first.
    pub split_above: usize,
}

impl Default for TorOptions {
    fn default() -> Self {
        TorOptions { cap: 6, resolution: ResolutionChoice::Auto, split_above: 150 }
    }
}

/// Tor(V, K_n ⊗ N) at a fixed n, ready to receive maps.
pub struct TorAt {
    level: Level,
    tower: Tower,
    pub n: usize,
}

impl TorAt {
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.level.dims()
    }
}

fn is_right_unit(v: &GradedModule) -> bool {
    v.side() == Side::Right && v.dims().len() == 1 && v.dim_at(0) == 1
}

fn top_of(m: &GradedModule) -> i64 {
    m.highest_weight().unwrap_or(0)
}

/// A good surjection P = M(0) ⊗ V → V with its kernel.
#[derive(Clone, Debug)]
pub struct GoodSurjection {
    pub p: GradedModule,
    pub phi: ModuleMap,
    pub kernel: GradedModule,
}

impl GoodSurjection {
    /// The top weight of P is not a weight of the kernel.
    pub fn extremal_ok(&self) -> bool {
        match (self.kernel.highest_weight(), self.p.highest_weight()) {
            (Some(k), Some(p)) => k < p,
            _ => true,
        }
    }

    pub fn is_surjective(&self, v: &GradedModule) -> bool {
        self.phi.rank() == v.dim()
    }
}

impl Engine {
    /// B as a right module.
    pub fn unit_right(&self) -> GradedModule {
        self.unit().twist_s()
    }

    fn unit_tw(&self, twist: Twist) -> Result<GradedModule> {
        self.simple_tw(0, twist)
    }

    pub fn good_surjection(&self, v: &GradedModule) -> Result<GoodSurjection> {
        if v.side() != Side::Left {
            return Err(Error::Invalid("good surjections are built for left modules".into()));
        }
        let m0 = self.verma_tw(0, v.twist())?;
        let b = self.unit_tw(v.twist())?;
        let top = ModuleMap::from_blocks(&m0, &b, [(0, Mat::identity(self.order(), 1))].into_iter().collect());
        let p = tensor(&m0, v)?;
        // B ⊗ V = V on the nose
        let phi = tensor_maps(&top, &ModuleMap::identity(v), None);
        let phi = ModuleMap::from_dims(self.order(), p.dims().clone(), v.dims().clone(), phi_blocks(&phi, p.dims()));
        let (kernel, _) = p.restrict(&phi.kernel())?;
        Ok(GoodSurjection { p, phi, kernel })
    }

    /// Resolutions of V to the given depth.  Left directions take a left
    /// module and return P_depth → … → P_0 → V; right directions take a
    /// right module and return V → P^0 → … → P^depth.
    pub fn induced_resolution(&self, v: &GradedModule, dir: Direction, depth: usize) -> Result<Resolution> {
        match dir {
            Direction::DownLeft | Direction::UpLeft => {
                if v.side() != Side::Left {
                    return Err(Error::Invalid("left resolutions need a left module".into()));
                }
                let plus = dir == Direction::UpLeft;
                iterate_covers(induced_cover(v, plus)?, depth, None, |z, _| induced_cover(z, plus))
            }
            Direction::DownRight | Direction::UpRight => {
                if v.side() != Side::Right {
                    return Err(Error::Invalid("right resolutions need a right module".into()));
                }
                let left = if dir == Direction::UpRight { Direction::UpLeft } else { Direction::DownLeft };
                let r = self.induced_resolution(&v.twist_s(), left, depth)?;
                let complex = r.complex.twist_s();
                let aug = r.augmentation;
                Ok(Resolution { complex, augmentation: aug })
            }
        }
    }

    /// The u⁻-induced right resolution of V used for Tor: s(P ⊗ sV) with P a
    /// resolution of B, cut once its terms can no longer pair with weights
    /// up to `reach`.
    fn right_resolution(&self, v: &GradedModule, choice: ResolutionChoice, reach: i64) -> Result<ComplexC> {
        let b = self.unit_tw(v.twist())?;
        let sv = v.twist_s();
        let stop = -reach - top_of(&sv) - 2;
        let depth = 4 * (reach.max(0) as usize + top_of(&sv).max(0) as usize) + 8;
        let first = induced_cover(&b, false)?;
        let res = match choice {
            ResolutionChoice::Perturbed => iterate_covers(first, depth, Some(stop), |z, step| {
                if step == 1 {
                    let g = self.good_surjection(z)?;
                    Ok((g.p, g.phi))
                } else {
                    induced_cover(z, false)
                }
            })?,
            _ => iterate_covers(first, depth, Some(stop), |z, _| induced_cover(z, false))?,
        };
        Ok(res.complex.tensor_right(&sv)?.twist_s())
    }

    fn tor_side(&self, v: &GradedModule, n: &GradedModule, opts: &TorOptions) -> Result<(RightSide, i64)> {
        if v.side() != Side::Right || n.side() != Side::Left || v.twist() != n.twist() {
            return Err(Error::Invalid("Tor needs a right module and a left module of the same twist".into()));
        }
        let fast = is_right_unit(v) && opts.resolution == ResolutionChoice::Auto;
        if fast {
            return Ok((RightSide::Unit, -2));
        }
        let r = self.right_resolution(v, opts.resolution, top_of(n))?;
        let max_r = r.terms.iter().filter_map(|t| t.highest_weight()).max().unwrap_or(0);
        Ok((RightSide::Complex(ModComplex::from_complex(&r)), -max_r - 2))
    }

    fn tower_for(&self, n: &GradedModule, lo: i64, top: i64) -> Result<Tower> {
        Ok(Tower::new(self.dm_zero()?.0, Some(n.clone()), Some((lo, top))))
    }

    fn level(&self, side: &RightSide, tower: &mut Tower, n: usize, top: i64, degs: (i64, i64)) -> Result<Level> {
        let c = tower.complex(n)?;
        Ok(Level::build(self.order(), self.ell(), side, &c, n, top, degs))
    }

    /// Runs the tower until two consecutive levels agree through the
    /// projection, returning the profile and the first stable n.
    fn stabilize(&self, v: &GradedModule, n: &GradedModule, degs: (i64, i64), opts: &TorOptions) -> Result<TorProfile> {
        let (side, lo) = self.tor_side(v, n, opts)?;
        let top = top_of(n);
        let mut tower = self.tower_for(n, lo, top)?;
        let mut prev = self.level(&side, &mut tower, 1, top, degs)?;
        for k in 1..=opts.cap {
            let next = self.level(&side, &mut tower, k + 1, top, degs)?;
            if prev.dims() == next.dims() {
                let maps = next.induced_on(&prev, &next.projection_parts(&prev));
                if maps.values().all(|m| m.rows() == m.cols() && m.is_invertible()) {
                    return Ok(TorProfile { degrees: prev.dims(), stabilized_at: k, method: "one-sided".into() });
                }
            }
            prev = next;
        }
        Err(Error::NoStabilization(opts.cap))
    }

    /// Tor^C_{∞/2+k}(V, N) for k in the window.
    pub fn tor_semiinf(&self, v: &GradedModule, n: &GradedModule, window: (i64, i64)) -> Result<TorProfile> {
        self.tor_semiinf_with(v, n, window, &TorOptions::default())
    }

    pub fn tor_semiinf_with(
        &self,
        v: &GradedModule,
        n: &GradedModule,
        window: (i64, i64),
        opts: &TorOptions,
    ) -> Result<TorProfile> {
        if window.0 > window.1 {
            return Err(Error::Invalid(format!("empty degree window {window:?}")));
        }
        if n.dim() > opts.split_above {
            let dec = self.decompose(n)?;
            return self.tor_semiinf_split(v, &dec, window, opts);
        }
        self.stabilize(v, n, window, opts)
    }

    /// Tor of a direct sum, one indecomposable class at a time.
    pub fn tor_semiinf_split(
        &self,
        v: &GradedModule,
        dec: &Decomposition,
        window: (i64, i64),
        opts: &TorOptions,
    ) -> Result<TorProfile> {
        let mut degrees: BTreeMap<i64, usize> = (window.0..=window.1).map(|k| (k, 0)).collect();
        let mut stab = 1;
        for (c, mult) in dec.multiset() {
            let rep = self.class_rep(c);
            let p = if is_induced(&rep, true) { self.tor_direct(v, &rep, window)? } else { self.stabilize(v, &rep, window, opts)? };
            for (k, d) in p.degrees {
                *degrees.entry(k).or_insert(0) += d * mult;
            }
            stab = stab.max(p.stabilized_at);
        }
        Ok(TorProfile { degrees, stabilized_at: stab, method: "one-sided".into() })
    }

    /// Tor for a u⁺-induced N, which is its own concave resolution: the
    /// homology of R ⊗_C N with no tower.
    pub fn tor_direct(&self, v: &GradedModule, n: &GradedModule, window: (i64, i64)) -> Result<TorProfile> {
        if !is_induced(n, true) {
            return Err(Error::Invalid("direct Tor needs a u⁺-induced module".into()));
        }
        let (side, _) = self.tor_side(v, n, &TorOptions::default())?;
        let lv = Level::build(self.order(), self.ell(), &side, &ModComplex::single(n.clone()), 0, top_of(n), window);
        Ok(TorProfile { degrees: lv.dims(), stabilized_at: 0, method: "direct".into() })
    }

    /// Ext^{∞/2+k}(M, N), through Tor_{∞/2+k}(N^∨, M).
    pub fn ext_semiinf(&self, m: &GradedModule, n: &GradedModule, window: (i64, i64)) -> Result<BTreeMap<i64, usize>> {
        Ok(self.tor_semiinf(&n.dual_vee(), m, window)?.degrees)
    }

    /// Tor(V, K_n ⊗ N) at a fixed n, computed on coinvariants up to `top`.
    pub fn tor_at(&self, v: &GradedModule, n: &GradedModule, level: usize, top: i64, window: (i64, i64)) -> Result<TorAt> {
        let opts = TorOptions::default();
        let (side, lo) = self.tor_side(v, n, &opts)?;
        let mut tower = self.tower_for(n, lo, top)?;
        let lv = self.level(&side, &mut tower, level, top, window)?;
        Ok(TorAt { level: lv, tower, n: level })
    }

    /// The map on each Tor degree induced by f: N → N′ at a common level.
    pub fn tor_at_map(&self, src: &TorAt, tgt: &TorAt, f: &ModuleMap) -> Result<BTreeMap<i64, Mat>> {
        if src.n != tgt.n {
            return Err(Error::Invalid("Tor contexts at different levels".into()));
        }
        let pieces = src.tower.piece_maps(&tgt.tower, src.n, f);
        let parts = src.level.map_parts(&tgt.level, &pieces);
        Ok(src.level.induced_on(&tgt.level, &parts))
    }

    /// The map Tor_{∞/2+•}(V, N) → Tor_{∞/2+•}(V, N′) induced by f, taken at
    /// the larger of the two stabilization indices.
    pub fn induced_map_on_tor(
        &self,
        v: &GradedModule,
        f: &ModuleMap,
        n: &GradedModule,
        n2: &GradedModule,
        window: (i64, i64),
    ) -> Result<BTreeMap<i64, Mat>> {
        let a = self.tor_semiinf(v, n, window)?;
        let b = self.tor_semiinf(v, n2, window)?;
        let level = a.stabilized_at.max(b.stabilized_at);
        let top = top_of(n).max(top_of(n2));
        let s = self.tor_at(v, n, level, top, window)?;
        let t = self.tor_at(v, n2, level, top, window)?;
        self.tor_at_map(&s, &t, f)
    }
}

fn phi_blocks(m: &ModuleMap, dims: &BTreeMap<i64, usize>) -> BTreeMap<i64, Mat> {
    dims.keys().map(|&w| (w, m.block(w))).collect()
}

// ---------------------------------------------------------------------------
// The two-sided formula

/// V ⊗ sD(K′_m) where K′ is the tower of the opposite twist.
struct DualSide {
    tower: Tower,
    v: Option<GradedModule>,
}

impl DualSide {
    fn complex(&mut self, m: usize) -> Result<ModComplex> {
        self.tower.grow(m)?;
        let mut pieces = Vec::with_capacity(m);
        for w in &self.tower.words[..m] {
            let p = w.module.duality_d().twist_s();
            pieces.push(match &self.v {
                Some(v) => tensor(v, &p)?,
                None => p,
            });
        }
        let mut ins = Vec::with_capacity(m.saturating_sub(1));
        for row in &self.tower.ins[..m - 1] {
            let mut out = Vec::with_capacity(row.len());
            for x in row {
                let d = x.duality_d();
                out.push(match &self.v {
                    Some(v) => tensor_maps(&ModuleMap::identity(v), &d, None),
                    None => d,
                });
            }
            ins.push(out);
        }
        Ok(ModComplex::subsets(m, pieces, &ins, true))
    }
}

impl Engine {
    /// Tor via invlim_m dirlim_n of (V ⊗ sDK′_m) ⊗_C (K_n ⊗ N), declared
    /// stable at s when the four corners (s|s+1, s|s+1) agree.
    pub fn tor_semiinf_twosided(&self, v: &GradedModule, n: &GradedModule, window: (i64, i64)) -> Result<TorProfile> {
        self.tor_semiinf_twosided_with(v, n, window, TorOptions::default().cap)
    }

    pub fn tor_semiinf_twosided_with(
        &self,
        v: &GradedModule,
        n: &GradedModule,
        window: (i64, i64),
        cap: usize,
    ) -> Result<TorProfile> {
        if v.side() != Side::Right || n.side() != Side::Left || v.twist() != n.twist() {
            return Err(Error::Invalid("Tor needs a right module and a left module of the same twist".into()));
        }
        let top_v = top_of(v).max(0);
        let dprime = self.verma_tw(0, n.twist())?.duality_d();
        let lo = -top_of(n) - top_v - 4;
        let mut dual = DualSide {
            tower: Tower::new(dprime, None, Some((lo, 0))),
            v: if is_right_unit(v) { None } else { Some(v.clone()) },
        };
        let mut tower = self.tower_for(n, -top_v - 2, top_of(n))?;
        let mut rs: HashMap<usize, RightSide> = HashMap::new();
        let mut memo: HashMap<(usize, usize), BTreeMap<i64, usize>> = HashMap::new();
        let mut at = |m: usize, k: usize| -> Result<BTreeMap<i64, usize>> {
            if let Some(d) = memo.get(&(m, k)) {
                return Ok(d.clone());
            }
            if !rs.contains_key(&m) {
                rs.insert(m, RightSide::Complex(dual.complex(m)?));
            }
            let c = tower.complex(k)?;
            let lv = Level::build(self.order(), self.ell(), &rs[&m], &c, k, top_of(n), window);
            let d = lv.dims();
            memo.insert((m, k), d.clone());
            Ok(d)
        };
        for s in 1..=cap {
            let a = at(s, s)?;
            if at(s + 1, s)? == a && at(s, s + 1)? == a && at(s + 1, s + 1)? == a {
                return Ok(TorProfile { degrees: a, stabilized_at: s, method: "two-sided".into() });
            }
        }
        Err(Error::NoStabilization(cap))
    }
}

// ---------------------------------------------------------------------------
// Ordinary Tor and u⁻-homology

impl Engine {
    /// A projective cover ⊕ P(λ)^{m_λ} → Z, one copy per simple in the head.
    pub fn projective_cover_map(&self, z: &GradedModule) -> Result<(GradedModule, ModuleMap)> {
        if z.side() != Side::Left || z.twist() != Twist::Zeta {
            return Err(Error::Unsupported("projective covers are built for left modules in C".into()));
        }
        let order = self.order();
        let heads: Vec<(i64, usize, Vec<ModuleMap>)> = z
            .weights()
            .into_iter()
            .filter_map(|w| {
                let l = self.simple(w).ok()?;
                let hb = hom_basis(z, &l);
                (!hb.is_empty()).then_some((w, hb.len(), hb))
            })
            .collect();
        // the radical: common kernel of all maps to simples
        let mut rad: BTreeMap<i64, SparseRref> = BTreeMap::new();
        for &w in z.dims().keys() {
            let mut rows = SparseRref::new(order, z.dim_at(w));
            for (_, _, hb) in &heads {
                for psi in hb {
                    if let Some(b) = psi.block_ref(w) {
                        for r in 0..b.rows() {
                            rows.push((0..b.cols()).filter(|&c| !b.get(r, c).is_zero()).map(|c| (c, b.get(r, c).clone())).collect());
                        }
                    }
                }
            }
            let mut r = SparseRref::new(order, z.dim_at(w));
            for v in rows.nullspace_sparse() {
                r.push(v);
            }
            rad.insert(w, r);
        }
        let mut pieces: Vec<GradedModule> = Vec::new();
        let mut maps: Vec<ModuleMap> = Vec::new();
        for (lam, m, _) in &heads {
            let p = self.projective_cover(*lam)?;
            let top = hom_basis(&p, &self.simple(*lam)?);
            let tb = top.first().and_then(|t| t.block_ref(*lam)).ok_or_else(|| Error::Internal("no head map".into()))?;
            let g = (0..tb.cols()).find(|&c| !tb.get(0, c).is_zero()).ok_or_else(|| Error::Internal("zero head map".into()))?;
            let mut seen = rad[lam].clone();
            let mut got = 0;
            for phi in hom_basis(&p, z) {
                if got == *m {
                    break;
                }
                let v = phi.block_ref(*lam).map(|b| sparse_col(b, g)).unwrap_or_default();
                if seen.push(v) {
                    pieces.push(p.clone());
                    maps.push(phi);
                    got += 1;
                }
            }
            if got < *m {
                return Err(Error::Internal(format!("head L({lam}) not covered")));
            }
        }
        let refs: Vec<&GradedModule> = pieces.iter().collect();
        let cover = GradedModule::direct_sum(&refs)?;
        let mut blocks = BTreeMap::new();
        for &w in cover.dims().keys() {
            let parts: Vec<Mat> = maps.iter().map(|f| f.block(w)).collect();
            let refs: Vec<&Mat> = parts.iter().collect();
            blocks.insert(w, Mat::hstack(order, z.dim_at(w), &refs));
        }
        let phi = ModuleMap::from_blocks(&cover, z, blocks);
        Ok((cover, phi))
    }

    /// The minimal projective resolution of N to the given length.
    pub fn projective_resolution(&self, n: &GradedModule, len: usize) -> Result<Resolution> {
        let first = self.projective_cover_map(n)?;
        iterate_covers(first, len, None, |z, _| self.projective_cover_map(z))
    }

    /// Tor^C_k(V, N) for k ≤ max_degree: the zeroth weight component of
    /// the homology of V ⊗ P_• for a projective resolution P_• of N.
    pub fn tor_c(&self, v: &GradedModule, n: &GradedModule, max_degree: usize) -> Result<BTreeMap<usize, usize>> {
        if v.side() != Side::Right {
            return Err(Error::Invalid("the left argument of Tor must be a right module".into()));
        }
        let res = self.projective_resolution(n, max_degree + 1)?;
        let c = ModComplex::from_complex(&res.complex);
        let (bc, _) = generic_bicomplex(&ModComplex::single(v.clone()), &c);
        let tot = totalize(self.order(), &bc, -(max_degree as i64) - 1, 1);
        Ok((0..=max_degree).map(|k| (k, tot.tot.homology(-(k as i64)).dim())).collect())
    }

    /// H_k(u⁻, M)_λ from the 2-periodic resolution of B over u⁻, with
    /// generators in weights 0, −2, −2ℓ, −2ℓ−2, … and maps F, F^{ℓ−1}.
    pub fn uminus_homology(&self, m: &GradedModule, lam: i64) -> BTreeMap<usize, usize> {
        let ell = self.ell();
        let top = top_of(m);
        let (cols, pows) = verma_columns(ell, (top - lam).max(0));
        let w = |k: usize| lam + cols.get(k).copied().unwrap_or(i64::MAX / 4);
        // d_k: C_k = M_{λ+w_k} → C_{k−1}
        let rank = |k: usize| -> usize {
            if k == 0 || k >= cols.len() {
                return 0;
            }
            m.f_power(w(k), pows[k - 1]).rank()
        };
        (0..cols.len().max(1)).map(|k| (k, m.dim_at(w(k)) - rank(k) - rank(k + 1))).collect()
    }

    /// Compares H_•(u⁻, M)_λ with Tor_•(B, M ⊗ M⁺), M⁺ the u⁺-induced module
    /// with lowest weight −λ.
    pub fn shapiro_check(&self, m: &GradedModule, lam: i64) -> Result<bool> {
        let h = self.uminus_homology(m, lam);
        let x = tensor(m, &self.coverma(-lam)?)?;
        let kmax = *h.keys().last().unwrap_or(&0) as i64;
        let t = self.tor_direct(&self.unit_right(), &x, (0, kmax + 1))?;
        Ok((0..=kmax + 1).all(|k| h.get(&(k as usize)).copied().unwrap_or(0) == t.dim(k)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eng() -> Engine {
        Engine::sl2(5)
    }

    #[test]
    fn verma_resolution_of_unit() {
        let e = eng();
        let r = e.induced_resolution(&e.unit(), Direction::DownLeft, 3).unwrap();
        let c = &r.complex;
        assert!(c.check());
        let tops: Vec<i64> = c.terms.iter().rev().map(|t| t.highest_weight().unwrap()).collect();
        assert_eq!(tops, vec![0, -2, -10, -12]);
        for k in c.lo + 1..c.hi() {
            assert!(c.is_exact_at(k), "degree {k}");
        }
        assert!(c.terms.iter().all(|t| is_induced(t, false)));
    }

    #[test]
    fn depth_zero() {
        let e = eng();
        let r = e.induced_resolution(&e.unit(), Direction::DownLeft, 0).unwrap();
        assert_eq!(r.complex.terms, vec![e.verma(0).unwrap()]);
    }

    #[test]
    fn mirrored_resolutions() {
        let e = eng();
        let up = e.induced_resolution(&e.simple(2).unwrap(), Direction::UpLeft, 2).unwrap();
        assert!(up.complex.check());
        assert!(up.complex.terms.iter().all(|t| is_induced(t, true)));
        let b = e.unit_right();
        for dir in [Direction::UpRight, Direction::DownRight] {
            let r = e.induced_resolution(&b, dir, 2).unwrap();
            assert!(r.complex.check());
            let c = &r.complex;
            assert_eq!(c.hi(), 0);
            assert!(c.terms.iter().all(|t| t.side() == Side::Right));
            assert!(r.augmentation.is_intertwiner(c.term(0).unwrap(), &b));
            assert!(c.is_exact_at(-1));
        }
    }

    #[test]
    fn good_surjections() {
        let e = eng();
        let g = e.good_surjection(&e.unit()).unwrap();
        assert_eq!(g.p, e.verma(0).unwrap());
        for lam in [2, 3, 8] {
            let v = e.simple(lam).unwrap();
            let g = e.good_surjection(&v).unwrap();
            assert!(g.is_surjective(&v));
            assert!(g.phi.is_intertwiner(&g.p, &v));
            assert!(g.extremal_ok());
            assert!(is_induced(&g.p, false));
        }
    }

    #[test]
    fn ordinary_tor() {
        let e = eng();
        let b = e.unit_right();
        assert_eq!(e.tor_c(&b, &e.unit(), 0).unwrap()[&0], 1);
        let p = e.tor_c(&b, &e.projective_cover(0).unwrap(), 2).unwrap();
        assert_eq!(p, [(0, 1), (1, 0), (2, 0)].into_iter().collect());
        // degree 0 is the weight-0 part of the coinvariants
        let l8 = e.simple(8).unwrap();
        let t = e.tor_c(&b, &l8, 1).unwrap();
        assert_eq!(t[&0], 0);
    }

    #[test]
    fn uminus() {
        let e = eng();
        let b = e.unit();
        assert_eq!(e.uminus_homology(&b, 0)[&0], 1);
        assert_eq!(e.uminus_homology(&b, -2)[&1], 1);
        for (m, lam) in [(e.unit(), 0), (e.unit(), -2), (e.simple(2).unwrap(), 0), (e.simple(3).unwrap(), -1), (e.simple(8).unwrap(), 2)] {
            assert!(e.shapiro_check(&m, lam).unwrap());
        }
    }

    #[test]
    fn k_tower_small() {
        let e = eng();
        let (d, iota) = e.dm_zero().unwrap();
        assert_eq!(d, e.coverma(-8).unwrap());
        assert!(iota.is_intertwiner(&e.unit(), &d));
        for n in 1..=3 {
            let c = e.k_tower_check(n).unwrap();
            assert!(c.holds(), "{c:?}");
        }
        let pi = e.k_projection(2).unwrap();
        let (big, small) = (e.k_complex(3).unwrap(), e.k_complex(2).unwrap());
        for (k, f) in pi.maps.iter().enumerate().take(small.diffs.len()) {
            let d_small = &small.diffs[k];
            let d_big = &big.diffs[k];
            assert_eq!(d_small.compose(f), pi.maps[k + 1].compose(d_big));
        }
    }

    #[test]
    fn semiinfinite_tor_basics() {
        let e = eng();
        let b = e.unit_right();
        let p = e.tor_semiinf(&b, &e.simple(8).unwrap(), (-3, 3)).unwrap();
        assert_eq!(p.support(), [(0, 1)].into_iter().collect());
        assert_eq!(p.degrees.len(), 7);
        let t = e.tor_semiinf_twosided(&b, &e.simple(8).unwrap(), (-3, 3)).unwrap();
        assert_eq!(t.degrees, p.degrees);
        let j = p.to_json();
        assert_eq!(j["degrees"]["0"], 1);
        assert_eq!(j["method"], "one-sided");
    }

    #[test]
    fn identity_induces_identity() {
        let e = eng();
        let b = e.unit_right();
        let n = e.projective_cover(0).unwrap();
        let m = e.induced_map_on_tor(&b, &ModuleMap::identity(&n), &n, &n, (0, 0)).unwrap();
        assert!(m[&0].is_identity());
    }

    #[test]
    fn bad_inputs() {
        let e = eng();
        assert!(e.tor_semiinf(&e.unit(), &e.unit(), (0, 0)).is_err());
        assert!(e.tor_semiinf(&e.unit_right(), &e.unit(), (1, 0)).is_err());
        assert!(e.k_complex(0).is_err());
    }
}
