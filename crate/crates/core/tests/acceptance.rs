use std::panic::{AssertUnwindSafe, catch_unwind};
use std::process::ExitCode;
use std::time::Instant;

use smallq::CycloNum;
use smallq::confblocks::fusion_dim_sl2;
use smallq::confspace::{LoopGenerator, generator_table};
use smallq::linalg::Mat;
use smallq::rootdata::{Convention, Weight, WeightBag};
use smallq::semiinf::{ResolutionChoice, TorOptions};
use smallq::tensorcat::{TensorWord, local_iso, tensor};
use smallq::uq::{Engine, ModuleMap, Twist};

type Outcome = Result<String, String>;

const L: u32 = 5;
const M: u32 = 20;

fn zeta(num: i64, den: i64) -> CycloNum {
    CycloNum::zeta_pow(M, L, num, den).unwrap()
}

// n(λ) = ½(λ·λ) + λ·ρ with λ·μ = λμ/2, as a fraction over 4
fn n_quarters(lam: i64) -> i64 {
    lam * lam + 2 * lam
}

fn ensure(ok: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if ok { Ok(()) } else { Err(msg.into()) }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> std::result::Result<T, String> {
    r.map_err(|x| x.to_string())
}

fn tor_of_unit_against_l8(en: &Engine) -> Outcome {
    let b = en.unit_right();
    let l8 = e(en.simple(8))?;
    let p = e(en.tor_semiinf(&b, &l8, (-3, 3)))?;
    let expect: std::collections::BTreeMap<i64, usize> = (-3..=3).map(|k| (k, usize::from(k == 0))).collect();
    ensure(p.degrees == expect, format!("one-sided {:?}", p.degrees))?;
    let t = e(en.tor_semiinf_twosided(&b, &l8, (-3, 3)))?;
    ensure(t.degrees == expect, format!("two-sided {:?}", t.degrees))?;
    Ok(format!("{{0:1}}, stabilized at n={}, two-sided at n={}", p.stabilized_at, t.stabilized_at))
}

fn tor_of_unit_against_p0(en: &Engine) -> Outcome {
    let p = e(en.tor_semiinf(&en.unit_right(), &e(en.projective_cover(0))?, (0, 0)))?;
    ensure(p.dim(0) == 1, format!("degree 0 has dim {}", p.dim(0)))?;
    Ok("dim 1".into())
}

fn example_chain(en: &Engine) -> Outcome {
    let word = |ws: &[i64]| -> std::result::Result<TensorWord, String> {
        e(TensorWord::new(ws.iter().map(|&w| en.simple(w).unwrap()).collect()))
    };
    let w4 = word(&[2, 2, 3, 3])?;
    let d4 = e(en.decompose_word(&w4))?;
    let mut top_zero = false;
    for (c, _) in d4.multiset() {
        let r = en.class_rep(c);
        if e(en.class_is_projective(c))? && r.highest_weight() == Some(0) && !r.is_simple() {
            top_zero = true;
        }
    }
    ensure(top_zero, "no projective summand with highest weight 0")?;
    let w5 = word(&[2, 2, 3, 3, 8])?;
    // dim L(8) = 4 at l = 5, so the word has 3·3·4·4·4 = 576 dimensions
    ensure(w5.module.dim() == 576, format!("word has dim {}", w5.module.dim()))?;
    let d5 = e(en.decompose_word(&w5))?;
    let p0 = e(en.projective_cover_class(0))?;
    ensure(d5.contains(p0), "P(0) missing")?;
    let r = e(en.blocks_vs_tor(&[2, 2, 3, 3]))?;
    ensure(r.block == 1 && r.block == fusion_dim_sl2(3, &[2, 2, 3, 3]).unwrap(), format!("block {}", r.block))?;
    ensure(r.strict && r.tor0 > r.block, format!("tor0 {} block {}", r.tor0, r.block))?;
    Ok(format!("block 1 < tor0 {}", r.tor0))
}

fn braiding_on_highest_vectors(en: &Engine) -> Outcome {
    for a in 0..=3 {
        for b in 0..=3 {
            let (va, vb) = (e(en.simple(a))?, e(en.simple(b))?);
            let r = e(en.braiding(&va, &vb))?;
            let blk = r.block(a + b);
            ensure(blk.rows() == 1 && blk.cols() == 1, "top weight space is not a line")?;
            ensure(*blk.get(0, 0) == zeta(a * b, 2), format!("R on v{a}⊗v{b} is {}", blk.get(0, 0)))?;
        }
    }
    Ok("16 pairs".into())
}

fn balance_suite(en: &Engine) -> Outcome {
    for lam in 0..=3 {
        ensure(e(en.theta_simple(lam))? == zeta(n_quarters(lam), 4), format!("θ on L({lam})"))?;
        let (m, th) = e(en.balance(&[lam]))?;
        ensure(th == ModuleMap::scalar(&m, &zeta(n_quarters(lam), 4)), format!("θ map on L({lam})"))?;
    }
    let mut checked = 0;
    for a in 0..=3 {
        for b in 0..=3 {
            let (m, th) = e(en.balance(&[a, b]))?;
            let (va, vb) = (e(en.simple(a))?, e(en.simple(b))?);
            let rr = e(en.braiding(&vb, &va))?.compose(&e(en.braiding(&va, &vb))?);
            let tt = ModuleMap::scalar(&m, &zeta(n_quarters(a) + n_quarters(b), 4));
            ensure(rr.compose(&tt) == th, format!("axiom residual on L({a})⊗L({b})"))?;
            ensure(th.is_intertwiner(&m, &m), format!("θ on L({a})⊗L({b}) is not a module map"))?;
            // R² is ζ^{2(n(ν)−n(a)−n(b))} on the channel ν
            let dec = e(en.decompose(&m))?;
            for part in &dec.parts {
                let rep = en.class_rep(part.class);
                let nu = rep.highest_weight().unwrap();
                let c = zeta(2 * n_quarters(nu) - n_quarters(a) - n_quarters(b), 4);
                let local = part.proj.compose(&th).compose(&part.incl);
                let shifted = local.add(&ModuleMap::scalar(&rep, &-c));
                let mut pow = shifted.clone();
                for _ in 0..rep.dim() {
                    pow = pow.compose(&shifted);
                }
                ensure(pow.is_zero(), format!("θ on the ν={nu} summand of L({a})⊗L({b})"))?;
                if rep.is_simple() {
                    ensure(shifted.is_zero(), format!("θ not scalar on L({nu}) in L({a})⊗L({b})"))?;
                }
                checked += 1;
            }
            // θ on three-factor words commutes with the braid generators
            for c in 0..=3 {
                let (_, th3) = e(en.balance(&[a, b, c]))?;
                let (_, sigma, half, _) = e(en.braid_maps(&[a, b, c]))?;
                for s in sigma.iter().chain(half.iter().flatten()) {
                    ensure(s.compose(&th3) == th3.compose(s), format!("θ not natural on ({a},{b},{c})"))?;
                }
            }
        }
    }
    Ok(format!("{checked} summands"))
}

fn dual_verma_is_coverma(en: &Engine) -> Outcome {
    for lam in [0, 2, 4] {
        let dm = e(en.verma_tw(lam, Twist::ZetaInv))?.duality_d();
        let target = e(en.coverma(lam - 8))?;
        let iso = local_iso(&dm, &target).ok_or(format!("no isomorphism for λ={lam}"))?;
        ensure(iso.is_iso() && iso.is_intertwiner(&dm, &target), format!("bad isomorphism for λ={lam}"))?;
    }
    Ok("λ ∈ {0,2,4}".into())
}

fn mixed_tensors_projective(en: &Engine) -> Outcome {
    for lam in 0..=3 {
        for mu in 0..=3 {
            let t = e(tensor(&e(en.verma(lam))?, &e(en.coverma(mu))?))?;
            ensure(e(en.is_projective(&t))?, format!("M({lam})⊗M⁺({mu})"))?;
        }
    }
    Ok("16 products".into())
}

fn verlinde(level: i64, lams: &[i64]) -> usize {
    let k2 = (level + 2) as f64;
    let s = |i: i64, j: i64| (2.0 / k2).sqrt() * (std::f64::consts::PI * (i + 1) as f64 * (j + 1) as f64 / k2).sin();
    let mut total = 0.0;
    for j in 0..=level {
        let mut t = s(0, j).powi(2 - lams.len() as i32);
        for &l in lams {
            t *= s(l, j);
        }
        total += t;
    }
    total.round() as usize
}

fn fusion_oracle(en: &Engine) -> Outcome {
    let mut count = 0;
    for n in 1..=4u32 {
        for code in 0..4usize.pow(n) {
            let lams: Vec<i64> = (0..n).map(|k| ((code / 4usize.pow(k)) % 4) as i64).collect();
            let got = e(en.conformal_block_dim(&lams))?;
            let want = verlinde(3, &lams);
            ensure(got == want && want == fusion_dim_sl2(3, &lams).unwrap(), format!("{lams:?}: {got} vs {want}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} tuples"))
}

fn resolution_independence(en: &Engine) -> Outcome {
    let b = en.unit_right();
    for (name, n) in [("B", en.unit()), ("L(8)", e(en.simple(8))?), ("P(0)", e(en.projective_cover(0))?)] {
        let opts = |r| TorOptions { resolution: r, ..TorOptions::default() };
        let c = e(en.tor_semiinf_with(&b, &n, (-2, 2), &opts(ResolutionChoice::Canonical)))?;
        let p = e(en.tor_semiinf_with(&b, &n, (-2, 2), &opts(ResolutionChoice::Perturbed)))?;
        ensure(c.degrees == p.degrees, format!("{name}: {:?} vs {:?}", c.degrees, p.degrees))?;
    }
    Ok("(B,B), (B,L(8)), (B,P(0))".into())
}

fn k_tower_axioms(en: &Engine) -> Outcome {
    for n in 1..=4 {
        let c = e(en.k_tower_check(n))?;
        ensure(c.holds(), format!("{c:?}"))?;
    }
    Ok("n ≤ 4".into())
}

fn steinberg_projective(_: &Engine) -> Outcome {
    for l in [5, 6] {
        let en = Engine::sl2(l);
        let st = e(en.steinberg())?;
        ensure(st.is_simple() && e(en.is_projective(&st))?, format!("l={l}"))?;
    }
    Ok("l = 5, 6".into())
}

fn is_zero_poly(x: &Mat, roots: &[CycloNum]) -> bool {
    let n = x.rows();
    let mut acc = Mat::identity(M, n);
    for r in roots {
        acc = acc.matmul(&(x - &Mat::scalar(M, n, r)));
    }
    acc.is_zero()
}

fn braid_representations(en: &Engine) -> Outcome {
    for lams in [vec![2, 2, 3, 3], vec![1, 1, 1, 1]] {
        let blocks = e(en.blocks_monodromy(&lams))?;
        ensure(blocks.relations_hold() && blocks.all_invertible(), format!("blocks {lams:?}"))?;
        let tor = e(en.braid_rep_tor(&lams))?;
        ensure(tor.relations_hold() && tor.all_invertible(), format!("tor {lams:?}"))?;
        // the loop of strand k+1 around strand k acts on the fusion channel ν
        // of the pair by ζ^{2(n(ν)−n(a)−n(b))}
        for k in 0..lams.len() - 1 {
            let (a, b) = (lams[k], lams[k + 1]);
            let roots: Vec<CycloNum> = (0..=3)
                .filter(|&nu| fusion_dim_sl2(3, &[a, b, nu]).unwrap() > 0)
                .map(|nu| zeta(2 * (n_quarters(nu) - n_quarters(a) - n_quarters(b)), 4))
                .collect();
            ensure(is_zero_poly(&blocks.sigma[k], &roots), format!("σ_{k} on blocks {lams:?}"))?;
        }
    }
    Ok("(2,2,3,3), (1,1,1,1)".into())
}

fn configuration_scalars(en: &Engine) -> Outcome {
    let colors = [-2i64, -2, 3];
    let bag = WeightBag::from_unfolding(colors.iter().map(|&c| Weight::sl2(c)).collect());
    let table = e(generator_table(en.rd(), M, &bag, Convention::OddChapter1))?;
    ensure(table.len() == 6 + 3 + 1, format!("{} generators", table.len()))?;
    let mut loop01 = None;
    let mut half01 = None;
    for g in &table {
        let want = match g.generator {
            LoopGenerator::PointAroundPoint { i, j } => zeta(-colors[i] * colors[j], 1),
            LoopGenerator::TangentRotation { j } => zeta(-2 * n_quarters(colors[j]), 4),
            LoopGenerator::HalfTwist { i, j } => -zeta(-colors[i] * colors[j], 2),
        };
        ensure(g.scalar == want, format!("{:?}: {}", g.generator, g.scalar))?;
        match g.generator {
            LoopGenerator::PointAroundPoint { i: 0, j: 1 } => loop01 = Some(g.scalar.clone()),
            LoopGenerator::HalfTwist { i: 0, j: 1 } => half01 = Some(g.scalar.clone()),
            _ => {}
        }
    }
    let (lp, hf) = (loop01.unwrap(), half01.unwrap());
    ensure(&hf * &hf == lp, "half-twist squared is not the loop")?;
    ensure(lp == zeta(-4, 1), "loop of two −2 points")?;
    Ok("colors (−2,−2,3)".into())
}

fn admissibility(en: &Engine) -> Outcome {
    let rd = en.rd();
    let mus: Vec<Weight> = [2, 2, 3, 3, 8].iter().map(|&m| Weight::sl2(m)).collect();
    let a = rd.alpha_of_mu(&mus, Convention::OddChapter1);
    ensure(a == Some(vec![5]), format!("alpha {a:?}"))?;
    ensure(rd.is_admissible_pair(&mus, &[5], Convention::OddChapter1), "pair not admissible")?;
    ensure(!rd.is_admissible_pair(&mus, &[4], Convention::OddChapter1), "α = 4 accepted")?;
    Ok("α = 5i".into())
}

fn main() -> ExitCode {
    let en = Engine::sl2(L);
    let checks: [(&str, fn(&Engine) -> Outcome); 14] = [
        ("tor of B against L(8) is B in degree 0", tor_of_unit_against_l8),
        ("tor of B against P(0) is B", tor_of_unit_against_p0),
        ("decompositions of the (2,2,3,3) example", example_chain),
        ("braiding on highest weight vectors", braiding_on_highest_vectors),
        ("balance scalars and axiom", balance_suite),
        ("dual Verma is a co-Verma", dual_verma_is_coverma),
        ("Verma ⊗ co-Verma is projective", mixed_tensors_projective),
        ("block dimensions match fusion rules", fusion_oracle),
        ("independence of the resolution", resolution_independence),
        ("K-tower properties", k_tower_axioms),
        ("Steinberg module is projective", steinberg_projective),
        ("braid representations", braid_representations),
        ("configuration space scalars", configuration_scalars),
        ("admissibility arithmetic", admissibility),
    ];
    let mut failed = 0;
    for (i, (name, f)) in checks.iter().enumerate() {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(|| f(&en))).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(d) => println!("PASS {:>2} {name}: {d} ({secs:.1}s)", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {d} ({secs:.1}s)", i + 1)
            }
        }
    }
    println!("{} of {} criteria pass", checks.len() - failed, checks.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
