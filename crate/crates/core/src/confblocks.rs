//! Conformal blocks ⟨L(λ_1),…,L(λ_n)⟩: dimensions, the sl(2) fusion
//! oracle, monodromy, and the comparison with semiinfinite Tor.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Value, json};

use crate::linalg::Mat;
use crate::rootdata::Weight;
use crate::semiinf::{TorAt, TorOptions};
use crate::tensorcat::{BraidRep, TensorWord, max_trivial_summand};
use crate::uq::{Engine, ModuleMap};
use crate::{Error, Result};

/// Level-k fusion multiplicity of the trivial weight in λ_1 ⊗ … ⊗ λ_n.
pub fn fusion_dim_sl2(level: i64, lams: &[i64]) -> Result<usize> {
    let bad: Vec<i64> = lams.iter().copied().filter(|&l| l < 0 || l > level).collect();
    if level < 0 || !bad.is_empty() {
        return Err(Error::Invalid(format!("weights {bad:?} outside 0..={level}")));
    }
    let mut cur: BTreeMap<i64, usize> = [(0, 1)].into_iter().collect();
    for &mu in lams {
        let mut next = BTreeMap::new();
        for (&la, &m) in &cur {
            let hi = (la + mu).min(2 * level - la - mu);
            let mut nu = (la - mu).abs();
            while nu <= hi {
                *next.entry(nu).or_insert(0) += m;
                nu += 2;
            }
        }
        cur = next;
    }
    Ok(cur.get(&0).copied().unwrap_or(0))
}

/// Comparison of a block space with Tor_{∞/2+0}(B, ⊗L(λ_k) ⊗ L(2(ℓ−1))).
#[derive(Clone, Debug, Serialize)]
pub struct BlocksReport {
    pub lambdas: Vec<i64>,
    pub block: usize,
    pub tor0: usize,
    pub subquotient: bool,
    pub strict: bool,
    pub stabilized_at: usize,
    #[serde(skip)]
    pub monodromy: Option<(BraidRep, BraidRep)>,
}

impl BlocksReport {
    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some((b, t)) = &self.monodromy {
            v["monodromy"] = json!({"block": braid_json(b), "tor0": braid_json(t)});
        }
        v
    }
}

fn mat_json(m: &Mat) -> Value {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| serde_json::to_value(m.get(i, j)).unwrap()).collect::<Vec<Value>>())
        .collect()
}

pub fn braid_json(b: &BraidRep) -> Value {
    json!({
        "strands": b.strands,
        "sigma": b.sigma.iter().map(mat_json).collect::<Vec<_>>(),
        "half": b.half.iter().map(|h| h.as_ref().map(mat_json)).collect::<Vec<_>>(),
        "theta": b.theta.iter().map(mat_json).collect::<Vec<_>>(),
        "relations_hold": b.relations_hold(),
    })
}

impl Engine {
    pub fn check_alcove(&self, lams: &[i64]) -> Result<()> {
        let bad: Vec<i64> = lams.iter().copied().filter(|&l| !self.rd().in_first_alcove(&Weight::sl2(l))).collect();
        if bad.is_empty() { Ok(()) } else { Err(Error::Alcove(bad)) }
    }

    /// The fusion level matching ℓ: k = ℓ − 2.
    pub fn fusion_level(&self) -> i64 {
        self.ell() - 2
    }

    pub fn conformal_block_dim(&self, lams: &[i64]) -> Result<usize> {
        self.check_alcove(lams)?;
        if lams.is_empty() {
            return Ok(1);
        }
        let mods = lams.iter().map(|&l| self.simple(l)).collect::<Result<Vec<_>>>()?;
        let word = TensorWord::new(mods)?;
        Ok(max_trivial_summand(&word.module).dim)
    }

    pub fn blocks_monodromy(&self, lams: &[i64]) -> Result<BraidRep> {
        self.check_alcove(lams)?;
        self.braid_rep_blocks(lams)
    }

    /// The weight 2(ℓ−1) appended on the Tor side.
    pub fn tor_shift_weight(&self) -> i64 {
        2 * (self.ell() - 1)
    }

    /// Braid generators on Tor_{∞/2+0}(B, L(λ_1) ⊗ … ⊗ L(λ_n) ⊗ L(2(ℓ−1))),
    /// computed summand by summand.
    pub fn braid_rep_tor(&self, lams: &[i64]) -> Result<BraidRep> {
        let mut all = lams.to_vec();
        all.push(self.tor_shift_weight());
        let (word, sigma, half, theta) = self.braid_maps(&all)?;
        let n = lams.len();
        let sigma = &sigma[..n.saturating_sub(1)];
        let half = &half[..n.saturating_sub(1)];
        let theta = &theta[..n];
        let v = self.unit_right();
        let win = (0, 0);
        let dec = self.decompose_word(&word)?;
        // classes contributing to degree 0
        let mut profiles = BTreeMap::new();
        for (c, _) in dec.multiset() {
            let p = self.tor_semiinf(&v, &self.class_rep(c), win)?;
            profiles.insert(c, p);
        }
        let used: Vec<usize> = (0..dec.parts.len()).filter(|&i| profiles[&dec.parts[i].class].dim(0) > 0).collect();
        let level = used.iter().map(|&i| profiles[&dec.parts[i].class].stabilized_at).max().unwrap_or(1);
        let top = used.iter().filter_map(|&i| self.class_rep(dec.parts[i].class).highest_weight()).max().unwrap_or(0);
        let mut ctx: BTreeMap<usize, TorAt> = BTreeMap::new();
        for &i in &used {
            let c = dec.parts[i].class;
            if !ctx.contains_key(&c) {
                ctx.insert(c, self.tor_at(&v, &self.class_rep(c), level, top, win)?);
            }
        }
        let mut offs = Vec::new();
        let mut total = 0;
        for &i in &used {
            offs.push(total);
            total += profiles[&dec.parts[i].class].dim(0);
        }
        let on_tor = |f: &ModuleMap| -> Result<Mat> {
            let mut m = Mat::zeros(self.order(), total, total);
            for (ai, &a) in used.iter().enumerate() {
                for (bi, &b) in used.iter().enumerate() {
                    let (pa, pb) = (&dec.parts[a], &dec.parts[b]);
                    let g = pa.proj.compose(&f.compose(&pb.incl));
                    if g.is_zero() {
                        continue;
                    }
                    let blk = self.tor_at_map(&ctx[&pb.class], &ctx[&pa.class], &g)?;
                    m.set_block(offs[ai], offs[bi], &blk[&0]);
                }
            }
            Ok(m)
        };
        Ok(BraidRep {
            strands: n,
            sigma: sigma.iter().map(&on_tor).collect::<Result<_>>()?,
            half: half.iter().map(|h| h.as_ref().map(&on_tor).transpose()).collect::<Result<_>>()?,
            theta: theta.iter().map(&on_tor).collect::<Result<_>>()?,
        })
    }

    /// Block dimension against the degree-0 Tor it is a subquotient of.
    pub fn blocks_vs_tor(&self, lams: &[i64]) -> Result<BlocksReport> {
        self.blocks_vs_tor_with(lams, false)
    }

    pub fn blocks_vs_tor_with(&self, lams: &[i64], monodromy: bool) -> Result<BlocksReport> {
        let block = self.conformal_block_dim(lams)?;
        let mut all = lams.to_vec();
        all.push(self.tor_shift_weight());
        let mods = all.iter().map(|&l| self.simple(l)).collect::<Result<Vec<_>>>()?;
        let word = TensorWord::new(mods)?;
        let v = self.unit_right();
        let opts = TorOptions::default();
        let p = if word.module.dim() > opts.split_above {
            let dec = self.decompose_word(&word)?;
            self.tor_semiinf_split(&v, &dec, (0, 0), &opts)?
        } else {
            self.tor_semiinf_with(&v, &word.module, (0, 0), &opts)?
        };
        let tor0 = p.dim(0);
        let monodromy = if monodromy && !lams.is_empty() {
            Some((self.blocks_monodromy(lams)?, self.braid_rep_tor(lams)?))
        } else {
            None
        };
        Ok(BlocksReport {
            lambdas: lams.to_vec(),
            block,
            tor0,
            subquotient: block <= tor0,
            strict: block < tor0,
            stabilized_at: p.stabilized_at,
            monodromy,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fusion_examples() {
        assert_eq!(fusion_dim_sl2(3, &[2, 2, 3, 3]).unwrap(), 1);
        assert_eq!(fusion_dim_sl2(3, &[0]).unwrap(), 1);
        assert_eq!(fusion_dim_sl2(3, &[3, 3]).unwrap(), 1);
        assert_eq!(fusion_dim_sl2(3, &[1, 1, 1, 1]).unwrap(), 2);
        assert!(fusion_dim_sl2(3, &[4]).is_err());
    }

    #[test]
    fn small_blocks() {
        let e = Engine::sl2(5);
        assert_eq!(e.conformal_block_dim(&[0]).unwrap(), 1);
        assert_eq!(e.conformal_block_dim(&[1, 2]).unwrap(), 0);
        assert_eq!(e.conformal_block_dim(&[1, 1]).unwrap(), 1);
        assert_eq!(e.check_alcove(&[1, 4, 5]), Err(Error::Alcove(vec![4, 5])));
    }
}
