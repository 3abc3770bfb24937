//! Command-line front end: engine configuration, one subcommand per
//! computation, JSON or table output, and the paper verification suite.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Value, json};

use crate::confspace::{LoopGenerator, generator_table, monodromy_scalar};
use crate::linalg::Mat;
use crate::rootdata::{Convention, DatumSpec, RootDatum, Weight, WeightBag};
use crate::semiinf::{ResolutionChoice, TorOptions, TorProfile};
use crate::tensorcat::{BraidRep, TensorWord, local_iso, tensor};
use crate::uq::{Engine, GradedModule, ModuleMap, Twist};
use crate::{CycloNum, Error};

#[derive(Parser, Debug)]
#[command(name = "smallq", version, about = "Exact computations for the small quantum group of sl(2)")]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ConfigArgs {
    /// Order of the root of unity ζ.
    #[arg(long, global = true, default_value_t = 5)]
    pub l: u32,
    /// Root datum: a name (sl2, sl3, B2, G2) or a JSON object {"cartan":…,"d":…}.
    #[arg(long, global = true, default_value = "sl2")]
    pub datum: String,
    /// Balance convention; defaults to ch1 for odd l and ch4 for even l.
    #[arg(long, global = true, value_parser = parse_convention)]
    pub convention: Option<Convention>,
    /// Cyclotomic order M, a multiple of 2·det(A)·l.
    #[arg(long, global = true)]
    pub order: Option<u32>,
    /// Degree window a..b for Tor.
    #[arg(long, global = true, value_parser = parse_window, allow_hyphen_values = true)]
    pub window: Option<(i64, i64)>,
    /// Largest K-tower index tried before giving up.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    #[arg(long, global = true, conflicts_with = "table")]
    pub json: bool,
    #[arg(long, global = true)]
    pub table: bool,
    /// Add floating point renderings of cyclotomic numbers (not exact).
    #[arg(long, global = true)]
    pub approx: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decompose a tensor product of module tokens (L2, M0, M+-8, P0, B).
    Decompose {
        #[arg(required = true)]
        tokens: Vec<String>,
    },
    /// Compare a conformal block with degree-0 semiinfinite Tor.
    Blocks {
        #[arg(required = true, allow_negative_numbers = true)]
        weights: Vec<i64>,
        /// Also compute both braid representations.
        #[arg(long)]
        monodromy: bool,
    },
    /// Semiinfinite Tor(V, N) with N the tensor product of the remaining tokens.
    Tor {
        v: String,
        #[arg(required = true)]
        n: Vec<String>,
        #[arg(long, value_enum, default_value_t = TorMethod::OneSided)]
        method: TorMethod,
    },
    /// Braid generators acting on a block or on degree-0 Tor.
    Monodromy {
        #[arg(required = true, allow_negative_numbers = true)]
        weights: Vec<i64>,
        #[arg(long, value_enum, default_value_t = MonodromyOn::Blocks)]
        on: MonodromyOn,
    },
    /// Monodromy scalars of the rank-one local system of a colored configuration.
    Confspace {
        /// Colors of the points, comma separated.
        #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
        colors: Vec<i64>,
        #[command(subcommand)]
        action: Option<ConfAction>,
    },
    /// Re-run every paper check and report PASS/FAIL per check.
    VerifyPaper {
        #[arg(long, hide = true)]
        negate_braiding: bool,
    },
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum ConfAction {
    /// Point i loops counterclockwise around point j.
    Loop { i: usize, j: usize },
    /// Full turn of the tangent vector at point j.
    Rotate { j: usize },
    /// Counterclockwise swap of two points of equal color.
    Half { i: usize, j: usize },
    /// Every generator.
    Table,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorMethod {
    OneSided,
    TwoSided,
    Perturbed,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonodromyOn {
    Blocks,
    Tor,
}

fn parse_convention(s: &str) -> Result<Convention, String> {
    Convention::parse(s).map_err(|e| e.to_string())
}

pub fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad window start {a:?}"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad window end {b:?}"))?;
    if a > b {
        return Err(format!("empty window {a}..{b}"));
    }
    Ok((a, b))
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Check(String),
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Check(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::Invalid(_)
            | Error::Parse(_)
            | Error::Alcove(_)
            | Error::Unsupported(_)
            | Error::Unrepresentable { .. }
            | Error::OrderMismatch(..) => CliError::Usage(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Validated engine settings.
#[derive(Clone, Debug)]
pub struct EngineConfig {
    pub datum: RootDatum,
    pub convention: Option<Convention>,
    pub order: Option<u32>,
    pub window: Option<(i64, i64)>,
    pub cap: usize,
}

impl EngineConfig {
    pub fn from_args(a: &ConfigArgs) -> CliResult<EngineConfig> {
        let spec = if a.datum.trim_start().starts_with('{') {
            let mut v: Value = serde_json::from_str(&a.datum).map_err(|e| CliError::Usage(format!("datum: {e}")))?;
            if v.get("l").is_none() {
                v["l"] = json!(a.l);
            }
            serde_json::from_value::<DatumSpec>(v).map_err(|e| CliError::Usage(format!("datum: {e}")))?
        } else {
            DatumSpec::Named { kind: a.datum.clone(), l: a.l }
        };
        let datum = RootDatum::from_spec(&spec)?;
        let cap = a.cap.unwrap_or(TorOptions::default().cap);
        if cap == 0 {
            return Err(CliError::Usage("--cap must be positive".into()));
        }
        Ok(EngineConfig { datum, convention: a.convention, order: a.order, window: a.window, cap })
    }

    pub fn engine(&self) -> CliResult<Engine> {
        Ok(Engine::new(self.datum.clone(), self.order, self.convention)?)
    }
}

/// Parses `L<w>`, `M<w>`, `M+<w>`, `P<w>` or `B` into a left module.
pub fn parse_module(e: &Engine, tok: &str) -> CliResult<GradedModule> {
    let bad = || CliError::Usage(format!("bad module token {tok:?}"));
    if tok == "B" {
        return Ok(e.unit());
    }
    let (kind, rest) = if let Some(r) = tok.strip_prefix("M+") {
        ("M+", r)
    } else if tok.len() > 1 && tok.is_char_boundary(1) {
        tok.split_at(1)
    } else {
        return Err(bad());
    };
    let w: i64 = rest.parse().map_err(|_| bad())?;
    Ok(match kind {
        "L" => e.simple(w)?,
        "M" => e.verma(w)?,
        "M+" => e.coverma(w)?,
        "P" => e.projective_cover(w)?,
        _ => return Err(bad()),
    })
}

fn parse_word(e: &Engine, toks: &[String]) -> CliResult<TensorWord> {
    let mods = toks.iter().map(|t| parse_module(e, t)).collect::<CliResult<Vec<_>>>()?;
    Ok(TensorWord::new(mods)?)
}

/// Output of a subcommand in both renderings.
pub struct Report {
    pub json: Value,
    pub table: String,
}

fn cyclo_value(c: &CycloNum, approx: bool) -> Value {
    let mut v = serde_json::to_value(c).expect("cyclotomic numbers serialize");
    if approx {
        let (re, im) = c.approx();
        v["approx"] = json!({"re": re, "im": im, "note": "floating point, not authoritative"});
    }
    v
}

/// The exponent e with c = ζ^e, as a reduced fraction in [0, l), if c is a
/// power of ζ^{1/k} inside the field.
fn zeta_exponent(c: &CycloNum, l: u32) -> Option<String> {
    let m = c.order() as i64;
    let k = (0..m).find(|&k| CycloNum::root_pow(c.order(), k) == *c)?;
    let (num, den) = (k * l as i64, m);
    let g = num_integer::gcd(num, den);
    Some(if den / g == 1 { format!("{}", num / g) } else { format!("{}/{}", num / g, den / g) })
}

fn mat_table(out: &mut String, name: &str, m: &Mat) {
    let _ = writeln!(out, "{name}:");
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).to_string()).collect();
        let _ = writeln!(out, "  [{}]", row.join(", "));
    }
}

fn braid_table(out: &mut String, b: &BraidRep) {
    let _ = writeln!(out, "strands {}, relations hold: {}", b.strands, b.relations_hold());
    for (k, s) in b.sigma.iter().enumerate() {
        mat_table(out, &format!("sigma[{k}]"), s);
    }
    for (k, h) in b.half.iter().enumerate() {
        if let Some(h) = h {
            mat_table(out, &format!("half[{k}]"), h);
        }
    }
    for (k, t) in b.theta.iter().enumerate() {
        mat_table(out, &format!("theta[{k}]"), t);
    }
}

fn tor_table(p: &TorProfile) -> String {
    let mut s = String::from("degree  dim\n");
    for (k, d) in &p.degrees {
        let _ = writeln!(s, "{k:>6}  {d}");
    }
    let _ = writeln!(s, "stabilized at n = {} ({})", p.stabilized_at, p.method);
    s
}

pub fn cmd_decompose(e: &Engine, toks: &[String]) -> CliResult<Report> {
    let word = parse_word(e, toks)?;
    let dec = e.decompose_word(&word)?;
    let rows = e.report(&dec)?;
    let mut table = format!("dim {}\n", word.module.dim());
    for r in &rows {
        let head = r.head_weight.map(|h| h.to_string()).unwrap_or_else(|| "-".into());
        let proj = if r.projective { "projective" } else { "" };
        let _ = writeln!(table, "{:>3} x {:<10} dim {:<4} head {:<4} {proj}", r.multiplicity, r.label, r.dim, head);
    }
    let json = json!({"factors": toks, "dim": word.module.dim(), "summands": rows});
    Ok(Report { json, table })
}

pub fn cmd_blocks(e: &Engine, weights: &[i64], monodromy: bool) -> CliResult<Report> {
    let r = e.blocks_vs_tor_with(weights, monodromy)?;
    let mut table = format!(
        "block {}\ntor0  {}\nsubquotient {}\nstrict {}\nstabilized at n = {}\n",
        r.block, r.tor0, r.subquotient, r.strict, r.stabilized_at
    );
    if let Some((b, t)) = &r.monodromy {
        table.push_str("monodromy on the block\n");
        braid_table(&mut table, b);
        table.push_str("monodromy on tor0\n");
        braid_table(&mut table, t);
    }
    Ok(Report { json: r.to_json(), table })
}

pub fn cmd_tor(e: &Engine, cfg: &EngineConfig, v: &str, n: &[String], method: TorMethod) -> CliResult<Report> {
    let v = parse_module(e, v)?.twist_s();
    let word = parse_word(e, n)?;
    let window = cfg.window.unwrap_or((-3, 3));
    let opts = TorOptions {
        cap: cfg.cap,
        resolution: if method == TorMethod::Perturbed { ResolutionChoice::Perturbed } else { ResolutionChoice::Auto },
        ..TorOptions::default()
    };
    let p = match method {
        TorMethod::TwoSided => e.tor_semiinf_twosided_with(&v, &word.module, window, opts.cap)?,
        _ if word.module.dim() > opts.split_above => {
            let dec = e.decompose_word(&word)?;
            e.tor_semiinf_split(&v, &dec, window, &opts)?
        }
        _ => e.tor_semiinf_with(&v, &word.module, window, &opts)?,
    };
    Ok(Report { json: p.to_json(), table: tor_table(&p) })
}

pub fn cmd_monodromy(e: &Engine, weights: &[i64], on: MonodromyOn) -> CliResult<Report> {
    let b = match on {
        MonodromyOn::Blocks => e.blocks_monodromy(weights)?,
        MonodromyOn::Tor => {
            e.check_alcove(weights)?;
            e.braid_rep_tor(weights)?
        }
    };
    let mut table = String::new();
    braid_table(&mut table, &b);
    Ok(Report { json: crate::confblocks::braid_json(&b), table })
}

pub fn cmd_confspace(e: &Engine, colors: &[i64], action: ConfAction, approx: bool) -> CliResult<Report> {
    let rd = e.rd();
    let bag = WeightBag::from_unfolding(colors.iter().map(|&c| Weight::sl2(c)).collect());
    let conv = e.convention();
    let entries: Vec<(LoopGenerator, CycloNum)> = match action {
        ConfAction::Table => {
            generator_table(rd, e.order(), &bag, conv)?.into_iter().map(|g| (g.generator, g.scalar)).collect()
        }
        a => {
            let g = match a {
                ConfAction::Loop { i, j } => LoopGenerator::PointAroundPoint { i, j },
                ConfAction::Rotate { j } => LoopGenerator::TangentRotation { j },
                ConfAction::Half { i, j } => LoopGenerator::HalfTwist { i, j },
                ConfAction::Table => unreachable!(),
            };
            vec![(g, monodromy_scalar(rd, e.order(), &bag, g, conv)?)]
        }
    };
    let mut table = String::new();
    let mut rows = Vec::new();
    for (g, c) in &entries {
        let ex = zeta_exponent(c, e.l());
        let shown = ex.as_ref().map(|x| format!("zeta^({x})")).unwrap_or_else(|| c.to_string());
        let _ = writeln!(table, "{:<32} {shown}", serde_json::to_string(g).expect("generator serializes"));
        rows.push(json!({"generator": g, "scalar": cyclo_value(c, approx), "zeta_exponent": ex}));
    }
    let json = if rows.len() == 1 && !matches!(action, ConfAction::Table) { rows.remove(0) } else { Value::Array(rows) };
    Ok(Report { json, table })
}

// ---------------------------------------------------------------------------
// Paper checks

/// One verification check and its outcome.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub claim: &'static str,
    pub pass: bool,
    pub detail: String,
}

type Check = (&'static str, &'static str, fn(&Engine) -> crate::Result<Option<String>>);

fn fail(msg: impl Into<String>) -> crate::Result<Option<String>> {
    Ok(Some(msg.into()))
}

fn chk_tor_l8(e: &Engine) -> crate::Result<Option<String>> {
    let b = e.unit_right();
    let l8 = e.simple(e.tor_shift_weight())?;
    let p = e.tor_semiinf(&b, &l8, (-3, 3))?;
    let t = e.tor_semiinf_twosided(&b, &l8, (-3, 3))?;
    let want: BTreeMap<i64, usize> = (-3..=3).map(|k| (k, usize::from(k == 0))).collect();
    if p.degrees != want || t.degrees != want {
        return fail(format!("one-sided {:?}, two-sided {:?}", p.support(), t.support()));
    }
    Ok(None)
}

fn chk_tor_p0(e: &Engine) -> crate::Result<Option<String>> {
    let p = e.tor_semiinf(&e.unit_right(), &e.projective_cover(0)?, (0, 0))?;
    if p.dim(0) != 1 { fail(format!("dim {}", p.dim(0))) } else { Ok(None) }
}

fn chk_example(e: &Engine) -> crate::Result<Option<String>> {
    let word = |ws: &[i64]| TensorWord::new(ws.iter().map(|&w| e.simple(w)).collect::<crate::Result<_>>()?);
    let d4 = e.decompose_word(&word(&[2, 2, 3, 3])?)?;
    let top0 = d4.multiset().iter().any(|&(c, _)| {
        let r = e.class_rep(c);
        r.highest_weight() == Some(0) && !r.is_simple() && e.class_is_projective(c).unwrap_or(false)
    });
    if !top0 {
        return fail("no projective summand with highest weight 0");
    }
    let mut ws = vec![2, 2, 3, 3];
    ws.push(e.tor_shift_weight());
    if !e.decompose_word(&word(&ws)?)?.contains(e.projective_cover_class(0)?) {
        return fail("P(0) is not a summand");
    }
    let r = e.blocks_vs_tor(&[2, 2, 3, 3])?;
    if r.block != 1 || !r.strict { fail(format!("block {} tor0 {}", r.block, r.tor0)) } else { Ok(None) }
}

fn chk_braiding(e: &Engine) -> crate::Result<Option<String>> {
    for a in e.alcove() {
        for b in e.alcove() {
            let r = e.braiding(&e.simple(a)?, &e.simple(b)?)?;
            if r.block(a + b) != Mat::scalar(e.order(), 1, &e.zeta_dot(a, b)) {
                return fail(format!("R on the highest vectors of L({a})⊗L({b})"));
            }
        }
    }
    Ok(None)
}

fn chk_balance(e: &Engine) -> crate::Result<Option<String>> {
    for a in e.alcove() {
        for b in e.alcove() {
            let (m, th) = e.balance(&[a, b])?;
            let (va, vb) = (e.simple(a)?, e.simple(b)?);
            let rr = e.braiding(&vb, &va)?.compose(&e.braiding(&va, &vb)?);
            let tt = ModuleMap::scalar(&m, &(e.theta_simple(a)? * e.theta_simple(b)?));
            if rr.compose(&tt) != th || !th.is_intertwiner(&m, &m) {
                return fail(format!("θ on L({a})⊗L({b})"));
            }
            for part in &e.decompose(&m)?.parts {
                let rep = e.class_rep(part.class);
                if rep.is_simple() {
                    let t = |w: i64| e.theta_simple(w);
                    let c = (t(rep.highest_weight().unwrap_or(0))?.pow(2)? * t(a)?.inv()?) * t(b)?.inv()?;
                    if part.proj.compose(&th).compose(&part.incl) != ModuleMap::scalar(&rep, &c) {
                        return fail(format!("θ on a summand of L({a})⊗L({b})"));
                    }
                }
            }
        }
    }
    Ok(None)
}

fn chk_dm(e: &Engine) -> crate::Result<Option<String>> {
    let shift = 2 * (e.ell() - 1);
    for lam in [0, 2, 4] {
        let dm = e.verma_tw(lam, Twist::ZetaInv)?.duality_d();
        if local_iso(&dm, &e.coverma(lam - shift)?).is_none() {
            return fail(format!("λ = {lam}"));
        }
    }
    Ok(None)
}

fn chk_mixed(e: &Engine) -> crate::Result<Option<String>> {
    for lam in 0..=3 {
        for mu in 0..=3 {
            if !e.is_projective(&tensor(&e.verma(lam)?, &e.coverma(mu)?)?)? {
                return fail(format!("M({lam})⊗M⁺({mu})"));
            }
        }
    }
    Ok(None)
}

fn chk_fusion(e: &Engine) -> crate::Result<Option<String>> {
    let al = e.alcove();
    let k = al.len();
    for n in 1..=4u32 {
        for code in 0..k.pow(n) {
            let lams: Vec<i64> = (0..n).map(|j| al[(code / k.pow(j)) % k]).collect();
            let want = crate::confblocks::fusion_dim_sl2(e.fusion_level(), &lams)?;
            if e.conformal_block_dim(&lams)? != want {
                return fail(format!("{lams:?}"));
            }
        }
    }
    Ok(None)
}

fn chk_resolutions(e: &Engine) -> crate::Result<Option<String>> {
    let b = e.unit_right();
    for n in [e.unit(), e.simple(e.tor_shift_weight())?, e.projective_cover(0)?] {
        let o = |r| TorOptions { resolution: r, ..TorOptions::default() };
        let c = e.tor_semiinf_with(&b, &n, (-2, 2), &o(ResolutionChoice::Canonical))?;
        let p = e.tor_semiinf_with(&b, &n, (-2, 2), &o(ResolutionChoice::Perturbed))?;
        if c.degrees != p.degrees {
            return fail(format!("{:?} vs {:?}", c.support(), p.support()));
        }
    }
    Ok(None)
}

fn chk_tower(e: &Engine) -> crate::Result<Option<String>> {
    for n in 1..=4 {
        let c = e.k_tower_check(n)?;
        if !c.holds() {
            return fail(format!("{c:?}"));
        }
    }
    Ok(None)
}

fn chk_steinberg(e: &Engine) -> crate::Result<Option<String>> {
    let st = e.steinberg()?;
    if st.is_simple() && e.is_projective(&st)? { Ok(None) } else { fail("not a projective simple") }
}

fn chk_braid_reps(e: &Engine) -> crate::Result<Option<String>> {
    for lams in [[2, 2, 3, 3], [1, 1, 1, 1]] {
        let b = e.blocks_monodromy(&lams)?;
        let t = e.braid_rep_tor(&lams)?;
        if !(b.relations_hold() && t.relations_hold() && b.all_invertible() && t.all_invertible()) {
            return fail(format!("{lams:?}"));
        }
    }
    Ok(None)
}

fn chk_confspace(e: &Engine) -> crate::Result<Option<String>> {
    let colors = [-2, -2, 3];
    let bag = WeightBag::from_unfolding(colors.iter().map(|&c| Weight::sl2(c)).collect());
    let conv = e.convention();
    for g in generator_table(e.rd(), e.order(), &bag, conv)? {
        let want = match g.generator {
            LoopGenerator::PointAroundPoint { i, j } => e.zeta_dot(colors[i], colors[j]).pow(-2)?,
            LoopGenerator::TangentRotation { j } => e.theta_simple(colors[j])?.pow(-2)?,
            LoopGenerator::HalfTwist { i, j } => {
                let h = -e.zeta_dot(colors[i], colors[j]).inv()?;
                let full = monodromy_scalar(e.rd(), e.order(), &bag, LoopGenerator::PointAroundPoint { i, j }, conv)?;
                if &h * &h != full {
                    return fail("half-twist squared");
                }
                h
            }
        };
        if g.scalar != want {
            return fail(format!("{:?}", g.generator));
        }
    }
    Ok(None)
}

fn chk_alcove(e: &Engine) -> crate::Result<Option<String>> {
    let al = e.alcove();
    let want: Vec<i64> = (0..=e.fusion_level()).collect();
    if al != want { fail(format!("alcove {al:?}")) } else { Ok(None) }
}

fn chk_admissible(e: &Engine) -> crate::Result<Option<String>> {
    let rd = e.rd();
    let conv = e.convention();
    let mut ws: Vec<Weight> = [2, 2, 3, 3].iter().map(|&m| Weight::sl2(m)).collect();
    ws.push(rd.shift_weight(conv));
    let Some(alpha) = rd.alpha_of_mu(&ws, conv) else { return fail("no α") };
    if e.l() == 5 && alpha != vec![5] {
        return fail(format!("α = {alpha:?}"));
    }
    if !rd.is_admissible_pair(&ws, &alpha, conv) { fail("not admissible") } else { Ok(None) }
}

pub fn paper_checks(l: u32) -> Vec<Check> {
    let mut v: Vec<Check> = vec![];
    if l == 5 {
        v.extend([
            ("tor-b-l8", "Tor(B, L(2(ℓ−1))) is B in degree 0", chk_tor_l8 as fn(&Engine) -> _),
            ("tor-b-p0", "Tor(B, P(0)) = B", chk_tor_p0),
            ("example-2233", "L2⊗L2⊗L3⊗L3 has a projective summand of highest weight 0", chk_example),
            ("braiding", "R(x⊗y) = ζ^{λ·μ} y⊗x on highest vectors", chk_braiding),
            ("balance", "θ acts on L(λ) by ζ^{n(λ)}", chk_balance),
            ("dual-verma", "DM(λ)_{ζ⁻¹} ≅ M⁺(λ − 2(ℓ−1))", chk_dm),
            ("mixed-tensor", "M(λ)⊗M⁺(μ) is projective", chk_mixed),
            ("fusion", "block dimensions equal fusion multiplicities", chk_fusion),
            ("resolutions", "Tor does not depend on the resolution", chk_resolutions),
            ("k-tower", "the K-tower is u⁺-induced and exact off its ends", chk_tower),
        ]);
    }
    v.push(("steinberg", "L(ℓ−1) is an irreducible projective", chk_steinberg));
    if l == 5 {
        v.push(("braid-reps", "braid relations on blocks and on Tor", chk_braid_reps));
        v.push(("confspace", "loop monodromy ζ^{−2λ·μ}", chk_confspace));
    }
    v.push(("alcove", "first alcove is 0..=ℓ−2", chk_alcove));
    v.push(("admissible", "Σμ − 2(l−1)ρ lies in N[I]", chk_admissible));
    v
}

pub fn cmd_verify_paper(e: &Engine) -> Vec<CheckOutcome> {
    paper_checks(e.l())
        .into_iter()
        .map(|(name, claim, f)| {
            let r = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| f(e)));
            let (pass, detail) = match r {
                Ok(Ok(None)) => (true, String::new()),
                Ok(Ok(Some(d))) => (false, d),
                Ok(Err(err)) => (false, err.to_string()),
                Err(_) => (false, "panicked".into()),
            };
            CheckOutcome { name, claim, pass, detail }
        })
        .collect()
}

impl Engine {
    /// Weights of the first alcove, in increasing order.
    pub fn alcove(&self) -> Vec<i64> {
        (-1..=2 * self.ell()).filter(|&w| self.rd().in_first_alcove(&Weight::sl2(w))).collect()
    }
}

/// Runs a parsed command line; returns the text to print on success.
pub fn run(cli: &Cli) -> CliResult<String> {
    let cfg = EngineConfig::from_args(&cli.config)?;
    let mut e = cfg.engine()?;
    let approx = cli.config.approx;
    if !matches!(cli.command, Command::Confspace { .. }) && cfg.datum.rank() != 1 {
        return Err(CliError::Usage("module computations need a rank-one datum".into()));
    }
    let report = match &cli.command {
        Command::Decompose { tokens } => cmd_decompose(&e, tokens)?,
        Command::Blocks { weights, monodromy } => cmd_blocks(&e, weights, *monodromy)?,
        Command::Tor { v, n, method } => cmd_tor(&e, &cfg, v, n, *method)?,
        Command::Monodromy { weights, on } => cmd_monodromy(&e, weights, *on)?,
        Command::Confspace { colors, action } => {
            if cfg.datum.rank() != 1 {
                return Err(CliError::Usage("colors are integers only for rank one".into()));
            }
            cmd_confspace(&e, colors, action.unwrap_or(ConfAction::Table), approx)?
        }
        Command::VerifyPaper { negate_braiding } => {
            if *negate_braiding {
                e = e.with_negated_braiding();
            }
            let out = cmd_verify_paper(&e);
            let mut table = String::new();
            for c in &out {
                let tag = if c.pass { "PASS" } else { "FAIL" };
                let _ = write!(table, "{tag} {:<14} {}", c.name, c.claim);
                if !c.detail.is_empty() {
                    let _ = write!(table, " ({})", c.detail);
                }
                table.push('\n');
            }
            let failed = out.iter().filter(|c| !c.pass).count();
            let json = json!({"l": e.l(), "checks": out, "failed": failed});
            let text = if cli.config.table { table } else { pretty(&json) };
            if failed > 0 {
                return Err(CliError::Check(text));
            }
            return Ok(text);
        }
    };
    Ok(if cli.config.table { report.table } else { pretty(&report.json) })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json renders");
    s.push('\n');
    s
}
