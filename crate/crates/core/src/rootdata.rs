//! Cartan data, weight lattices and the combinatorics attached to a root of
//! unity: the form on X, the balance function, ρ and ρ_ℓ, alcoves and
//! admissibility congruences.
//!
//! X is the weight lattice written in fundamental-weight coordinates, so that
//! ⟨i, λ⟩ = λ_i, and the embedding Y → X sends i to column i of the Cartan
//! matrix.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Convention {
    /// ν₀ = ρ, n(μ) = ½μ·μ + μ·ρ.
    #[serde(rename = "ch1")]
    OddChapter1,
    /// ν₀ = −ρ_ℓ, n(μ) = ½μ·μ − μ·ρ_ℓ.
    #[serde(rename = "ch4")]
    GeneralChapter4,
}

impl Convention {
    pub fn default_for(l: u32) -> Convention {
        if l % 2 == 1 { Convention::OddChapter1 } else { Convention::GeneralChapter4 }
    }

    pub fn parse(s: &str) -> Result<Convention> {
        match s {
            "ch1" | "odd" | "odd-chapter1" => Ok(Convention::OddChapter1),
            "ch4" | "general" | "general-chapter4" => Ok(Convention::GeneralChapter4),
            _ => Err(Error::Parse(format!("unknown convention {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Weight {
        Weight(vec![0; rank])
    }
    pub fn sl2(x: i64) -> Weight {
        Weight(vec![x])
    }
    pub fn rank(&self) -> usize {
        self.0.len()
    }
    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|x| x * k).collect())
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", s.join(","))
        }
    }
}

/// A finite formal sum Σ a_μ μ in N[X], optionally with an unfolding J → X.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightBag {
    pub terms: Vec<(Weight, u32)>,
    pub unfolding: Option<Vec<Weight>>,
}

impl WeightBag {
    pub fn new(terms: Vec<(Weight, u32)>) -> WeightBag {
        let terms = terms.into_iter().filter(|(_, a)| *a > 0).collect();
        WeightBag { terms, unfolding: None }
    }

    /// A bag given by its unfolding: the colors of the points of J.
    pub fn from_unfolding(colors: Vec<Weight>) -> WeightBag {
        let mut terms: Vec<(Weight, u32)> = Vec::new();
        for c in &colors {
            match terms.iter_mut().find(|(w, _)| w == c) {
                Some(t) => t.1 += 1,
                None => terms.push((c.clone(), 1)),
            }
        }
        WeightBag { terms, unfolding: Some(colors) }
    }

    pub fn support(&self) -> Vec<Weight> {
        self.terms.iter().map(|(w, _)| w.clone()).collect()
    }

    /// |α| = Σ a_μ.
    pub fn size(&self) -> u32 {
        self.terms.iter().map(|(_, a)| a).sum()
    }

    /// The collapse α~ = Σ a_μ μ ∈ X.
    pub fn collapse(&self, rank: usize) -> Weight {
        let mut w = Weight::zero(rank);
        for (mu, a) in &self.terms {
            w = &w + &mu.scale(*a as i64);
        }
        w
    }

    /// Whether the unfolding has |π⁻¹(μ)| = a_μ for every μ.
    pub fn unfolding_consistent(&self) -> bool {
        match &self.unfolding {
            None => true,
            Some(cols) => {
                self.terms.iter().all(|(w, a)| cols.iter().filter(|c| *c == w).count() as u32 == *a)
                    && cols.iter().all(|c| self.terms.iter().any(|(w, _)| w == c))
            }
        }
    }
}

/// Serialized root datum: `{"type":"sl2","l":5}` or `{"cartan":[[2]],"d":[1],"l":5}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DatumSpec {
    Named {
        #[serde(rename = "type")]
        kind: String,
        l: u32,
    },
    Cartan {
        cartan: Vec<Vec<i64>>,
        d: Vec<i64>,
        l: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    /// a_ij = ⟨i, j′⟩.
    cartan: Vec<Vec<i64>>,
    d: Vec<i64>,
    l: u32,
    /// A⁻¹, for expressing weights in the basis {i′}.
    cartan_inv: Vec<Vec<Rational64>>,
    det: i64,
    pos_roots: Vec<Vec<i64>>,
    pos_coroots: Vec<Vec<i64>>,
}

fn rational_inverse(a: &[Vec<i64>]) -> Option<(Vec<Vec<Rational64>>, Rational64)> {
    let n = a.len();
    let mut m: Vec<Vec<Rational64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<Rational64> = r.iter().map(|&x| Rational64::from_integer(x)).collect();
            row.extend((0..n).map(|j| if i == j { Rational64::one() } else { Rational64::zero() }));
            row
        })
        .collect();
    let mut det = Rational64::one();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let piv = m[c][c];
        det *= piv;
        for x in m[c].iter_mut() {
            *x /= piv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c];
                let rowc = m[c].clone();
                for (x, y) in m[i].iter_mut().zip(rowc) {
                    *x -= f * y;
                }
            }
        }
    }
    Some((m.into_iter().map(|r| r[n..].to_vec()).collect(), det))
}

/// Positive roots in simple-root coordinates, for a Cartan matrix with
/// a_ij = ⟨α_i^∨, α_j⟩.
fn positive_roots(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut roots: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    let mut k = 0;
    while k < roots.len() {
        let beta = roots[k].clone();
        for i in 0..n {
            // p = how far the i-string extends downward from beta
            let mut p = 0;
            let mut down = beta.clone();
            loop {
                down[i] -= 1;
                if down.iter().all(|&x| x == 0) || !roots.contains(&down) {
                    break;
                }
                p += 1;
            }
            let pair: i64 = (0..n).map(|j| a[i][j] * beta[j]).sum();
            let q = p - pair;
            if q > 0 {
                let mut up = beta.clone();
                up[i] += 1;
                if !roots.contains(&up) {
                    roots.push(up);
                }
            }
        }
        k += 1;
    }
    roots
}

fn highest(roots: &[Vec<i64>]) -> Vec<i64> {
    roots.iter().max_by_key(|r| r.iter().sum::<i64>()).cloned().unwrap_or_default()
}

impl RootDatum {
    pub fn new(cartan: Vec<Vec<i64>>, d: Vec<i64>, l: u32) -> Result<RootDatum> {
        let n = cartan.len();
        if n == 0 || d.len() != n || cartan.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("cartan matrix must be square and match d".into()));
        }
        if l < 2 {
            return Err(Error::Invalid("l must be at least 2".into()));
        }
        for i in 0..n {
            if cartan[i][i] != 2 || d[i] <= 0 {
                return Err(Error::Invalid("a_ii must be 2 and d_i positive".into()));
            }
            for j in 0..n {
                if d[i] * cartan[i][j] != d[j] * cartan[j][i] {
                    return Err(Error::Invalid("d_i a_ij must be symmetric".into()));
                }
                if i != j && cartan[i][j] > 0 {
                    return Err(Error::Invalid("off-diagonal entries must be nonpositive".into()));
                }
            }
        }
        let (cartan_inv, det) =
            rational_inverse(&cartan).ok_or_else(|| Error::Invalid("singular cartan matrix".into()))?;
        if !det.is_integer() || !det.is_positive() {
            return Err(Error::Invalid("cartan matrix must have positive determinant".into()));
        }
        let pos_roots = positive_roots(&cartan);
        let transpose: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| cartan[j][i]).collect()).collect();
        let pos_coroots = positive_roots(&transpose);
        Ok(RootDatum { cartan, d, l, cartan_inv, det: det.to_integer(), pos_roots, pos_coroots })
    }

    pub fn sl2(l: u32) -> RootDatum {
        RootDatum::new(vec![vec![2]], vec![1], l).expect("sl2 datum")
    }

    pub fn from_spec(spec: &DatumSpec) -> Result<RootDatum> {
        match spec {
            DatumSpec::Named { kind, l } => match kind.as_str() {
                "sl2" | "A1" => Ok(RootDatum::sl2(*l)),
                "sl3" | "A2" => RootDatum::new(vec![vec![2, -1], vec![-1, 2]], vec![1, 1], *l),
                "B2" => RootDatum::new(vec![vec![2, -2], vec![-1, 2]], vec![1, 2], *l),
                "G2" => RootDatum::new(vec![vec![2, -1], vec![-3, 2]], vec![3, 1], *l),
                _ => Err(Error::Unsupported(format!("datum type {kind:?}"))),
            },
            DatumSpec::Cartan { cartan, d, l } => RootDatum::new(cartan.clone(), d.clone(), *l),
        }
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }
    pub fn l(&self) -> u32 {
        self.l
    }
    pub fn d(&self) -> &[i64] {
        &self.d
    }
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }
    pub fn det(&self) -> i64 {
        self.det
    }

    /// The cyclotomic order 2·det(A)·l in which all needed powers of ζ live.
    pub fn default_order(&self) -> u32 {
        2 * self.det as u32 * self.l
    }

    /// ℓ: l for odd l, l/2 for even l.
    pub fn ell(&self) -> i64 {
        let l = self.l as i64;
        if l % 2 == 1 { l } else { l / 2 }
    }

    pub fn ell_i(&self, i: usize) -> i64 {
        let e = self.ell();
        e / e.gcd(&self.d[i])
    }

    /// Cartan pairing i·j = d_i a_ij.
    pub fn dot_ij(&self, i: usize, j: usize) -> i64 {
        self.d[i] * self.cartan[i][j]
    }

    /// ⟨i, λ⟩.
    pub fn pair(&self, i: usize, lam: &Weight) -> i64 {
        lam.0[i]
    }

    /// The image of i under Y → X.
    pub fn simple_root(&self, i: usize) -> Weight {
        Weight((0..self.rank()).map(|k| self.cartan[k][i]).collect())
    }

    /// Coordinates of λ in the basis {i′} of X ⊗ Q.
    pub fn root_coords(&self, lam: &Weight) -> Vec<Rational64> {
        self.cartan_inv
            .iter()
            .map(|row| row.iter().zip(&lam.0).map(|(a, &x)| a * Rational64::from_integer(x)).sum())
            .collect()
    }

    /// The Q-valued form λ·μ on X.
    pub fn dot(&self, lam: &Weight, mu: &Weight) -> Rational64 {
        self.root_coords(lam)
            .iter()
            .enumerate()
            .map(|(i, c)| c * Rational64::from_integer(self.d[i] * mu.0[i]))
            .sum()
    }

    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank()])
    }

    pub fn rho_ell(&self) -> Weight {
        Weight((0..self.rank()).map(|i| self.ell_i(i) - 1).collect())
    }

    pub fn steinberg_weight(&self) -> Weight {
        self.rho_ell()
    }

    pub fn nu0(&self, conv: Convention) -> Weight {
        match conv {
            Convention::OddChapter1 => self.rho(),
            Convention::GeneralChapter4 => -&self.rho_ell(),
        }
    }

    /// n(μ) = ½μ·μ + μ·ν₀.
    pub fn balance_n(&self, mu: &Weight, conv: Convention) -> Rational64 {
        self.dot(mu, mu) / Rational64::from_integer(2) + self.dot(mu, &self.nu0(conv))
    }

    pub fn cocycle_check(&self, mu: &Weight, nu: &Weight, conv: Convention) -> bool {
        self.balance_n(&(mu + nu), conv) == self.balance_n(mu, conv) + self.balance_n(nu, conv) + self.dot(mu, nu)
    }

    /// Whether λ lies in the image of lY.
    pub fn in_l_y(&self, lam: &Weight) -> bool {
        let l = Rational64::from_integer(self.l as i64);
        self.root_coords(lam).iter().all(|c| (c / l).is_integer())
    }

    /// Whether λ ∈ Y*_ℓ, i.e. λ·μ ∈ ℓZ for all μ ∈ X.
    pub fn in_y_star_ell(&self, lam: &Weight) -> bool {
        let e = Rational64::from_integer(self.ell());
        self.root_coords(lam)
            .iter()
            .enumerate()
            .all(|(i, c)| (c * Rational64::from_integer(self.d[i]) / e).is_integer())
    }

    fn congruent(&self, a: &Weight, target: &Weight, conv: Convention) -> bool {
        let diff = a - target;
        match conv {
            Convention::OddChapter1 => self.in_l_y(&diff),
            Convention::GeneralChapter4 => self.in_y_star_ell(&diff),
        }
    }

    /// −2ν₀: the admissibility target.
    fn admissible_target(&self, conv: Convention) -> Weight {
        self.nu0(conv).scale(-2)
    }

    pub fn is_admissible_bag(&self, bag: &WeightBag, conv: Convention) -> bool {
        self.congruent(&bag.collapse(self.rank()), &self.admissible_target(conv), conv)
    }

    /// Collapse of an element of N[I] to X via i ↦ i′.
    pub fn collapse_alpha(&self, alpha: &[i64]) -> Weight {
        let mut w = Weight::zero(self.rank());
        for (i, &a) in alpha.iter().enumerate() {
            w = &w + &self.simple_root(i).scale(a);
        }
        w
    }

    pub fn is_admissible_pair(&self, mus: &[Weight], alpha: &[i64], conv: Convention) -> bool {
        let mut s = Weight::zero(self.rank());
        for m in mus {
            s = &s + m;
        }
        let lhs = &s - &self.collapse_alpha(alpha);
        self.congruent(&lhs, &self.admissible_target(conv), conv)
    }

    /// The weight 2(l−1)ρ (odd convention) or 2ρ_ℓ (general convention).
    pub fn shift_weight(&self, conv: Convention) -> Weight {
        match conv {
            Convention::OddChapter1 => self.rho().scale(2 * (self.l as i64 - 1)),
            Convention::GeneralChapter4 => self.rho_ell().scale(2),
        }
    }

    /// α(μ⃗) ∈ N[I] with collapse Σμ_j − shift, or `None` if not positive.
    pub fn alpha_of_mu(&self, mus: &[Weight], conv: Convention) -> Option<Vec<i64>> {
        let mut s = Weight::zero(self.rank());
        for m in mus {
            s = &s + m;
        }
        let t = &s - &self.shift_weight(conv);
        let c = self.root_coords(&t);
        if c.iter().all(|x| x.is_integer() && !x.is_negative()) {
            Some(c.iter().map(|x| x.to_integer()).collect())
        } else {
            None
        }
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.pos_roots
    }

    /// Highest coroot γ₀ in the basis I of Y.
    pub fn highest_coroot(&self) -> Vec<i64> {
        highest(&self.pos_coroots)
    }

    /// Highest root θ in the basis {i′}.
    pub fn highest_root(&self) -> Vec<i64> {
        highest(&self.pos_roots)
    }

    /// d_θ = (θ·θ)/2.
    fn d_theta(&self) -> i64 {
        let t = self.highest_root();
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            for j in 0..n {
                s += t[i] * t[j] * self.dot_ij(i, j);
            }
        }
        s / 2
    }

    /// β₀ = θ^∨ in the basis I of Y, and ℓ_{β₀}.
    pub fn beta0(&self) -> (Vec<i64>, i64) {
        let t = self.highest_root();
        let dt = self.d_theta();
        let b = t.iter().enumerate().map(|(j, &x)| x * self.d[j] / dt).collect();
        let e = self.ell();
        (b, e / e.gcd(&dt))
    }

    fn pair_coroot(&self, g: &[i64], lam: &Weight) -> i64 {
        g.iter().zip(&lam.0).map(|(a, b)| a * b).sum()
    }

    pub fn in_first_alcove(&self, lam: &Weight) -> bool {
        let shifted = lam + &self.rho();
        if shifted.0.iter().any(|&x| x <= 0) {
            return false;
        }
        let g0 = self.highest_coroot();
        if self.l % 2 == 1 {
            return self.pair_coroot(&g0, &shifted) < self.l as i64;
        }
        let e = self.ell();
        if (0..self.rank()).all(|i| self.ell_i(i) == e) {
            self.pair_coroot(&g0, &shifted) < e
        } else {
            let (b0, lb) = self.beta0();
            self.pair_coroot(&b0, &shifted) < lb
        }
    }

    /// All weights of the first alcove, in lexicographic order.
    pub fn alcove_weights(&self) -> Vec<Weight> {
        let n = self.rank();
        let bound = self.l as i64;
        let mut out = Vec::new();
        let mut cur = vec![0i64; n];
        loop {
            let w = Weight(cur.clone());
            if self.in_first_alcove(&w) {
                out.push(w);
            }
            let mut k = n;
            loop {
                if k == 0 {
                    out.sort();
                    return out;
                }
                k -= 1;
                cur[k] += 1;
                if cur[k] < bound {
                    break;
                }
                cur[k] = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(x: i64) -> Weight {
        Weight::sl2(x)
    }

    fn r(p: i64, q: i64) -> Rational64 {
        Rational64::new(p, q)
    }

    #[test]
    fn sl2_basics() {
        let rd = RootDatum::sl2(5);
        assert_eq!(rd.det(), 2);
        assert_eq!(rd.default_order(), 20);
        assert_eq!(rd.simple_root(0), w(2));
        assert_eq!(rd.dot(&w(3), &w(5)), r(15, 2));
        assert_eq!(rd.rho(), w(1));
        assert_eq!(rd.ell(), 5);
    }

    #[test]
    fn balance_values() {
        let rd = RootDatum::sl2(5);
        let c = Convention::OddChapter1;
        assert_eq!(rd.balance_n(&w(-2), c), r(0, 1));
        assert_eq!(rd.balance_n(&w(0), c), r(0, 1));
        assert_eq!(rd.balance_n(&w(2), c), r(2, 1));
        assert_eq!(rd.balance_n(&w(1), c), r(3, 4));
        assert!(rd.cocycle_check(&w(2), &w(3), c));
        assert_eq!(rd.balance_n(&w(5), c), rd.balance_n(&w(2), c) + rd.balance_n(&w(3), c) + r(3, 1));
        let g = Convention::GeneralChapter4;
        let n = rd.balance_n(&w(-2), g);
        assert!(n.is_integer() && n.to_integer() % rd.ell() == 0);
    }

    #[test]
    fn admissibility() {
        let rd = RootDatum::sl2(5);
        let c = Convention::OddChapter1;
        assert!(rd.is_admissible_bag(&WeightBag::new(vec![(w(-2), 1)]), c));
        assert!(rd.is_admissible_bag(&WeightBag::new(vec![(w(8), 1)]), c));
        assert!(!rd.is_admissible_bag(&WeightBag::new(vec![(w(7), 1)]), c));
        let mus = [w(2), w(2), w(3), w(3), w(8)];
        assert!(rd.is_admissible_pair(&mus, &[5], c));
        assert!(!rd.is_admissible_pair(&mus, &[4], c));
        assert!(rd.is_admissible_pair(&[w(-2)], &[0], c));
    }

    #[test]
    fn positivity() {
        let rd = RootDatum::sl2(5);
        let c = Convention::OddChapter1;
        assert_eq!(rd.alpha_of_mu(&[w(2), w(2), w(3), w(3), w(8)], c), Some(vec![5]));
        assert_eq!(rd.alpha_of_mu(&[w(8)], c), Some(vec![0]));
        assert_eq!(rd.alpha_of_mu(&[w(1), w(2)], c), None);
    }

    #[test]
    fn alcoves() {
        let rd = RootDatum::sl2(5);
        assert!(rd.in_first_alcove(&w(2)) && rd.in_first_alcove(&w(3)));
        assert!(!rd.in_first_alcove(&w(-1)));
        assert_eq!(rd.alcove_weights(), vec![w(0), w(1), w(2), w(3)]);
        assert_eq!(RootDatum::sl2(6).alcove_weights(), vec![w(0), w(1)]);
    }

    #[test]
    fn steinberg() {
        assert_eq!(RootDatum::sl2(5).steinberg_weight(), w(4));
        assert_eq!(RootDatum::sl2(6).steinberg_weight(), w(2));
        let b2 = RootDatum::from_spec(&DatumSpec::Named { kind: "B2".into(), l: 8 }).unwrap();
        let st = b2.steinberg_weight();
        for i in 0..2 {
            assert_eq!(b2.pair(i, &st), b2.ell_i(i) - 1);
        }
    }

    #[test]
    fn higher_rank_root_systems() {
        let a2 = RootDatum::from_spec(&DatumSpec::Named { kind: "sl3".into(), l: 5 }).unwrap();
        assert_eq!(a2.positive_roots().len(), 3);
        assert_eq!(a2.highest_coroot(), vec![1, 1]);
        assert_eq!(a2.det(), 3);
        let b2 = RootDatum::from_spec(&DatumSpec::Named { kind: "B2".into(), l: 5 }).unwrap();
        assert_eq!(b2.positive_roots().len(), 4);
        let g2 = RootDatum::from_spec(&DatumSpec::Named { kind: "G2".into(), l: 7 }).unwrap();
        assert_eq!(g2.positive_roots().len(), 6);
        for rd in [&a2, &b2, &g2] {
            for i in 0..rd.rank() {
                for j in 0..rd.rank() {
                    let lhs = rd.pair(i, &rd.simple_root(j));
                    let rhs = r(2 * rd.dot_ij(i, j), rd.dot_ij(i, i));
                    assert_eq!(Rational64::from_integer(lhs), rhs);
                }
            }
        }
        assert!(a2.in_first_alcove(&Weight(vec![1, 1])));
        assert!(!a2.in_first_alcove(&Weight(vec![1, 2])));
    }

    #[test]
    fn spec_json() {
        let s: DatumSpec = serde_json::from_str(r#"{"type":"sl2","l":5}"#).unwrap();
        assert_eq!(RootDatum::from_spec(&s).unwrap(), RootDatum::sl2(5));
        let s: DatumSpec = serde_json::from_str(r#"{"cartan":[[2]],"d":[1],"l":6}"#).unwrap();
        assert_eq!(RootDatum::from_spec(&s).unwrap(), RootDatum::sl2(6));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn cocycle(a in -20i64..=20, b in -20i64..=20, l in 3u32..9) {
                let rd = RootDatum::sl2(l);
                for c in [Convention::OddChapter1, Convention::GeneralChapter4] {
                    prop_assert!(rd.cocycle_check(&w(a), &w(b), c));
                }
            }

            #[test]
            fn cocycle_rank2(a in prop::collection::vec(-6i64..6, 2), b in prop::collection::vec(-6i64..6, 2)) {
                let rd = RootDatum::from_spec(&DatumSpec::Named { kind: "B2".into(), l: 6 }).unwrap();
                prop_assert!(rd.cocycle_check(&Weight(a), &Weight(b), Convention::GeneralChapter4));
            }

            #[test]
            fn positive_implies_admissible(mus in prop::collection::vec(-4i64..12, 1..6), l in prop::sample::select(vec![3u32, 5, 7])) {
                let rd = RootDatum::sl2(l);
                let mus: Vec<Weight> = mus.into_iter().map(w).collect();
                for c in [Convention::OddChapter1, Convention::GeneralChapter4] {
                    if let Some(alpha) = rd.alpha_of_mu(&mus, c) {
                        prop_assert!(rd.is_admissible_pair(&mus, &alpha, c));
                    }
                }
            }

            #[test]
            fn y_star_is_subgroup(a in -40i64..40, b in -40i64..40, l in 2u32..10) {
                let rd = RootDatum::sl2(l);
                if rd.in_y_star_ell(&w(a)) && rd.in_y_star_ell(&w(b)) {
                    prop_assert!(rd.in_y_star_ell(&w(a + b)));
                    prop_assert!(rd.in_y_star_ell(&w(-a)));
                }
            }

            #[test]
            fn n_of_negative_simple_root(l in 2u32..12) {
                let rd = RootDatum::sl2(l);
                if l % 2 == 1 {
                    prop_assert!(rd.balance_n(&w(-2), Convention::OddChapter1).is_zero());
                }
                let g = rd.balance_n(&w(-2), Convention::GeneralChapter4);
                prop_assert!(g.is_integer() && g.to_integer() % rd.ell() == 0);
            }
        }
    }
}
