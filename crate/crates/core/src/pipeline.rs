//! The staged construction of two dense diagonal products: involution lifts,
//! alternating encodings, Ore commutator enlargement, Hall/absorption
//! markings of Alt(G_m) ≀ Z/p_m, and density of the diagonal products at a
//! finite prefix. Also the dihedral-top stage with markings of fixed order.

use crate::cayley::{agreement_radius, AgreementRadius};
use crate::constructions::hall::{hall_wreath_marking_mod, CommutatorWitness};
use crate::constructions::{
    absorption::limit_cyclic_order, alt_encode, check_sidon, check_sidon_mod, dihedral,
    ore_commutator, wreath, wreath_element, Amalgam, OreOutcome,
};
use crate::diagonal::{density_check, DensityVerdict};
use crate::error::{Error, Result};
use crate::groups::matrix::is_prime;
use crate::groups::order::alternating_order;
use crate::groups::std_groups::cyclic;
use crate::groups::{BigOrder, Caps, Element, Family, Group, MarkedGroup};
use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::time::Instant;

/// Marks of a Golomb ruler of length 151 with 15 marks: pairwise differences
/// are distinct, so it serves as a placement for 15 generators.
pub const RULER_15: [i64; 15] = [
    0, 4, 20, 30, 57, 59, 62, 76, 100, 111, 123, 136, 144, 145, 151,
];

/// Placement of the generators together with (p', p) for each stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeSchedule {
    pub sidon: Vec<i64>,
    /// (p', p) per stage.
    pub pairs: Vec<(u64, u64)>,
}

impl PrimeSchedule {
    pub fn span(&self) -> i64 {
        let max = self.sidon.iter().max().copied().unwrap_or(0);
        let min = self.sidon.iter().min().copied().unwrap_or(0);
        max - min
    }

    /// Checks the schedule for a marking of `k` generators.
    pub fn validate(&self, k: usize) -> Result<()> {
        if self.sidon.len() != k {
            return Err(Error::InvalidInput(format!(
                "placement has {} points for {k} generators",
                self.sidon.len()
            )));
        }
        check_sidon(&self.sidon)?;
        let span = self.span() as u64;
        let mut last = 0u64;
        for (m, &(pp, p)) in self.pairs.iter().enumerate() {
            let bad = |reason: String| Err(Error::Stage { stage: m, reason });
            if !is_prime(p) {
                return bad(format!("{p} is not prime"));
            }
            if p <= last {
                return bad(format!("primes must strictly increase ({last} then {p})"));
            }
            if !(span < pp && pp < p) {
                return bad(format!("need span {span} < p' = {pp} < p = {p}"));
            }
            if pp.gcd(&p) != 1 {
                return bad(format!("p' = {pp} and p = {p} are not coprime"));
            }
            check_sidon_mod(&self.sidon, p).map_err(|e| Error::Stage {
                stage: m,
                reason: e.to_string(),
            })?;
            last = p;
        }
        Ok(())
    }

    /// The 15-mark ruler with (157, 293) and (163, 307).
    pub fn default_two_stage() -> Self {
        PrimeSchedule {
            sidon: RULER_15.to_vec(),
            pairs: vec![(157, 293), (163, 307)],
        }
    }
}

// ---------------------------------------------------------------------------
// involution lift

#[derive(Clone, Debug)]
pub struct InvolutionLift {
    pub stages: Vec<MarkedGroup>,
    /// Number of generators replaced by a dihedral pair (0 or 1).
    pub iterations: usize,
    /// Agreement of each lifted stage with the lifted limit, or with the next
    /// stage when no limit is given.
    pub agreement: Vec<AgreementRadius>,
}

fn is_involution(mg: &MarkedGroup, s: &Element) -> Result<bool> {
    Ok(mg.group.element_order(s)? == BigOrder::finite(2u32))
}

/// D_n *_{Z/n} G with the generator of order n replaced by (c, d).
fn lift_stage(mg: &MarkedGroup, caps: &Caps) -> Result<Option<MarkedGroup>> {
    let mut odd = Vec::new();
    for (j, s) in mg.marking.iter().enumerate() {
        if !is_involution(mg, s)? {
            odd.push(j);
        }
    }
    let j = match odd.as_slice() {
        [] => return Ok(None),
        [j] => *j,
        _ => {
            return Err(Error::Unsupported(format!(
                "{} has {} generators that are not involutions; only one can be lifted",
                mg.name,
                odd.len()
            )))
        }
    };
    let n = match mg.group.element_order(&mg.marking[j])? {
        BigOrder::Finite(o) => o
            .to_string()
            .parse::<u64>()
            .map_err(|_| Error::Unsupported("generator order".into()))?,
        _ => {
            return Err(Error::Internal(format!(
                "generator {} of a finite stage has infinite order",
                j + 1
            )))
        }
    };
    if n < 2 {
        return Err(Error::IdentityGenerator { index: j + 1 });
    }
    let dn = dihedral(Some(n))?;
    let zn = cyclic(Some(n))?;
    let rotation = dn.group.mul(&dn.marking[0], &dn.marking[1])?;
    let am = Amalgam::new(&dn, mg, &zn, &[rotation], &[mg.marking[j].clone()], caps)?;
    let mut marking = Vec::with_capacity(mg.k() + 1);
    for (i, s) in mg.marking.iter().enumerate() {
        if i == j {
            marking.push(am.factor_element(0, &dn.marking[0])?);
            marking.push(am.factor_element(0, &dn.marking[1])?);
        } else {
            marking.push(am.factor_element(1, s)?);
        }
    }
    let name = format!("{} *_Z/{n} {}", dn.name, mg.name);
    Ok(Some(MarkedGroup::new(Group::Amalgam(am), marking, name)?))
}

/// Replaces the non-involution generator of every stage by a dihedral pair.
pub fn involution_lift(
    stages: &[MarkedGroup],
    limit: Option<&MarkedGroup>,
    rmax: u32,
    caps: &Caps,
) -> Result<InvolutionLift> {
    let mut lifted = Vec::with_capacity(stages.len());
    let mut iterations = 0;
    for (m, s) in stages.iter().enumerate() {
        let l = lift_stage(s, caps).map_err(|e| Error::Stage {
            stage: m,
            reason: e.to_string(),
        })?;
        if l.is_some() {
            iterations = 1;
        }
        lifted.push(l.unwrap_or_else(|| s.clone()));
    }
    let mut agreement = Vec::new();
    match limit {
        Some(lim) => {
            let lim = lift_stage(lim, caps)?.unwrap_or_else(|| lim.clone());
            for s in &lifted {
                agreement.push(agreement_radius(s, &lim, rmax, caps)?);
            }
        }
        None => {
            for w in lifted.windows(2) {
                agreement.push(agreement_radius(&w[0], &w[1], rmax, caps)?);
            }
        }
    }
    Ok(InvolutionLift {
        stages: lifted,
        iterations,
        agreement,
    })
}

// ---------------------------------------------------------------------------
// key proposition

#[derive(Clone, Debug)]
pub struct KeyPropositionStage {
    pub m: usize,
    /// (L; w, t).
    pub with_t: MarkedGroup,
    /// (L; w, u).
    pub with_u: MarkedGroup,
    pub order_wt: BigOrder,
    pub order_wu: BigOrder,
    pub t_is_u_power: bool,
    /// Order of the cyclic group C of the absorption limit.
    pub c_order: BigOrder,
    pub agreement_wt: Option<AgreementRadius>,
    pub agreement_wu: Option<AgreementRadius>,
    pub commutators: Vec<CommutatorWitness>,
}

impl KeyPropositionStage {
    pub fn generation_equal(&self) -> bool {
        self.order_wt == self.order_wu && self.order_wt.is_finite()
    }

    pub fn commutators_exact(&self) -> bool {
        self.commutators.iter().all(|c| c.exact)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct KeyPropositionOptions {
    /// Radius bound for the agreement computations; `None` skips them.
    pub rmax: Option<u32>,
}

/// Upper bound |⟨S⟩|^p · p for a subgroup of ⟨S⟩ ≀ Z/p.
fn wreath_bound(base: &MarkedGroup, p: u64, caps: &Caps) -> Result<Option<BigUint>> {
    let o = match base.family.order() {
        Some(o) => o,
        None => match base.order(caps)? {
            BigOrder::Finite(o) => o,
            _ => return Ok(None),
        },
    };
    Ok(Some(o.pow(p as u32) * BigUint::from(p)))
}

/// Γ₂ = ⟨w, u⟩ ≤ G ≀ Z² with w supported on {0} × placement and u = (𝐞, e₂).
pub fn gamma2(base: &MarkedGroup, placement: &[i64]) -> Result<MarkedGroup> {
    let top = Group::FreeAbelian { rank: 2 };
    let group = Group::Wreath {
        base: Box::new(base.group.clone()),
        top: Box::new(top),
    };
    let w = wreath_element(
        &base.group,
        placement
            .iter()
            .zip(&base.marking)
            .map(|(&a, s)| (Element::Vector(vec![0, a]), s.clone())),
        Element::Vector(vec![0, 0]),
    );
    let u = wreath_element(&base.group, [], Element::Vector(vec![0, 1]));
    MarkedGroup::new(group, vec![w, u], format!("Gamma2({})", base.name))
}

/// (C ≀ Z; c δ_0, shift) with C cyclic of order `c`.
pub fn cyclic_wreath_z(c: u64) -> Result<MarkedGroup> {
    wreath(&cyclic(Some(c))?, &cyclic(None)?)
}

/// For each stage, ⟨w, t⟩ and ⟨w, u⟩ in G_m ≀ Z/p_m with w placed on the
/// Sidon set, u the unit shift and t = u^{p'}.
pub fn key_proposition(
    stages: &[MarkedGroup],
    schedule: &PrimeSchedule,
    opts: KeyPropositionOptions,
    caps: &Caps,
) -> Result<Vec<KeyPropositionStage>> {
    if stages.len() > schedule.pairs.len() {
        return Err(Error::InvalidInput(format!(
            "{} stages but {} prime pairs",
            stages.len(),
            schedule.pairs.len()
        )));
    }
    let k = stages.first().map_or(0, MarkedGroup::k);
    schedule.validate(k)?;
    let mut out = Vec::with_capacity(stages.len());
    for (m, (g, &(pp, p))) in stages.iter().zip(&schedule.pairs).enumerate() {
        let stage_err = |e: Error| Error::Stage {
            stage: m,
            reason: e.to_string(),
        };
        out.push(key_stage(m, g, &schedule.sidon, pp, p, opts, caps).map_err(stage_err)?);
    }
    Ok(out)
}

fn key_stage(
    m: usize,
    g: &MarkedGroup,
    sidon: &[i64],
    pp: u64,
    p: u64,
    opts: KeyPropositionOptions,
    caps: &Caps,
) -> Result<KeyPropositionStage> {
    let hall = hall_wreath_marking_mod(g, sidon, p)?;
    let lg = &hall.marked.group;
    let t = lg.pow(&hall.u, pp as i64)?;
    // u^{p'} computed by repeated multiplication against the closed form (𝐞, p' mod p)
    let mut acc = lg.identity();
    for _ in 0..pp {
        acc = lg.mul(&acc, &hall.u)?;
    }
    let shift = wreath_element(&g.group, [], Element::Int((pp % p) as i64));
    let t_is_u_power = acc == t && t == shift && !lg.is_identity(&t);
    let family = match g.family {
        Family::Alternating { n } if g.family.order().is_some() => {
            Family::AltWreathCyclic { degree: n, p }
        }
        _ => Family::Unknown,
    };
    let bound = wreath_bound(g, p, caps)?;
    let finish = |mg: MarkedGroup| match (&family, &bound) {
        (Family::AltWreathCyclic { .. }, _) => mg.with_family(family.clone()),
        (_, Some(b)) => mg.with_order_bound(b.clone()),
        _ => mg,
    };
    let with_u = finish(MarkedGroup::new(
        lg.clone(),
        vec![hall.w.clone(), hall.u.clone()],
        format!("L{m}; w, u"),
    )?);
    let with_t = finish(MarkedGroup::new(
        lg.clone(),
        vec![hall.w.clone(), t],
        format!("L{m}; w, t"),
    )?);
    let order_wu = with_u.order(caps)?;
    let order_wt = with_t.order(caps)?;
    let with_u = with_u.with_exact_order(order_wu.clone());
    let with_t = with_t.with_exact_order(order_wt.clone());
    let c_order = limit_cyclic_order(g)?;
    let (agreement_wt, agreement_wu) = match opts.rmax {
        Some(r) => {
            let wt = match c_order.to_u64() {
                Some(c) => Some(agreement_radius(&with_t, &cyclic_wreath_z(c)?, r, caps)?),
                None => None,
            };
            let wu = agreement_radius(&with_u, &gamma2(g, sidon)?, r, caps)?;
            (wt, Some(wu))
        }
        None => (None, None),
    };
    Ok(KeyPropositionStage {
        m,
        with_t,
        with_u,
        order_wt,
        order_wu,
        t_is_u_power,
        c_order,
        agreement_wt,
        agreement_wu,
        commutators: hall.commutator_table()?,
    })
}

// ---------------------------------------------------------------------------
// dihedral-top stage

#[derive(Clone, Debug)]
pub struct DihedralStage {
    /// (J; y, a, b) with J = Alt(G) ≀ D_p.
    pub marked: MarkedGroup,
    pub order: BigOrder,
    pub expected: BigOrder,
}

impl DihedralStage {
    pub fn generates(&self) -> bool {
        self.order == self.expected
    }
}

/// y = (g, e) with g(((cd)²)^{a_j}) = ξ_j, a = (𝐞, c), b = (𝐞, d).
pub fn dihedral_stage(
    mg: &MarkedGroup,
    p: u64,
    placement: &[i64],
    caps: &Caps,
) -> Result<DihedralStage> {
    if !is_prime(p) || p == 2 {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    if placement.len() != mg.k() {
        return Err(Error::InvalidInput(format!(
            "placement has {} points for {} generators",
            placement.len(),
            mg.k()
        )));
    }
    let positions: Vec<i64> = placement
        .iter()
        .map(|a| (2 * a).rem_euclid(p as i64))
        .collect();
    for i in 0..positions.len() {
        if positions[..i].contains(&positions[i]) {
            return Err(Error::InvalidInput(format!(
                "placement overflow: rotation by 2*{} coincides with an earlier point mod {p}",
                placement[i]
            )));
        }
    }
    let dp = dihedral(Some(p))?;
    let group = Group::Wreath {
        base: Box::new(mg.group.clone()),
        top: Box::new(dp.group.clone()),
    };
    let rot = |s: i64| Element::Dihedral {
        flip: false,
        shift: s,
    };
    let y = wreath_element(
        &mg.group,
        positions
            .iter()
            .zip(&mg.marking)
            .map(|(&s, x)| (rot(s), x.clone())),
        dp.group.identity(),
    );
    let a = wreath_element(&mg.group, [], dp.marking[0].clone());
    let b = wreath_element(&mg.group, [], dp.marking[1].clone());
    let base_order = match mg.family {
        Family::Alternating { n } => alternating_order(n as u64),
        _ => match mg.order(caps)? {
            BigOrder::Finite(o) => o,
            other => return Err(Error::Unsupported(format!("base of order {other}"))),
        },
    };
    let expected = base_order.pow(2 * p as u32) * BigUint::from(2 * p);
    let marked = MarkedGroup::new(
        group,
        vec![y, a, b],
        format!("{} wr D[{p}]; y, a, b", mg.name),
    )?
    .with_order_bound(expected.clone());
    let order = marked.order(caps)?;
    Ok(DihedralStage {
        marked,
        order,
        expected: BigOrder::Finite(expected),
    })
}

// ---------------------------------------------------------------------------
// two-system assembly

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseChain {
    /// G_m = D_{2(m+2)}, of order 4(m+2), marked by its two reflections.
    Dihedral,
}

fn default_prefix() -> usize {
    2
}

fn default_rmax() -> u32 {
    3
}

/// Configuration of a run of the assembly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructionConfig {
    #[serde(default = "default_base_chain")]
    pub base_chain: BaseChain,
    #[serde(default = "default_prefix")]
    pub prefix_n: usize,
    #[serde(default = "default_sidon")]
    pub sidon: Vec<i64>,
    /// (p', p) per stage.
    #[serde(default = "default_primes")]
    pub primes: Vec<(u64, u64)>,
    #[serde(default)]
    pub caps: Caps,
    /// Radius bound for the agreement columns; 0 skips them.
    #[serde(default = "default_rmax")]
    pub agreement_rmax: u32,
    #[serde(default)]
    pub record_timings: bool,
}

fn default_base_chain() -> BaseChain {
    BaseChain::Dihedral
}

fn default_sidon() -> Vec<i64> {
    RULER_15.to_vec()
}

fn default_primes() -> Vec<(u64, u64)> {
    PrimeSchedule::default_two_stage().pairs
}

impl Default for ConstructionConfig {
    fn default() -> Self {
        ConstructionConfig {
            base_chain: BaseChain::Dihedral,
            prefix_n: default_prefix(),
            sidon: default_sidon(),
            primes: default_primes(),
            caps: Caps::default(),
            agreement_rmax: default_rmax(),
            record_timings: false,
        }
    }
}

impl ConstructionConfig {
    pub fn schedule(&self) -> PrimeSchedule {
        PrimeSchedule {
            sidon: self.sidon.clone(),
            pairs: self.primes.clone(),
        }
    }

    pub fn base_stage(&self, m: usize) -> Result<MarkedGroup> {
        match self.base_chain {
            BaseChain::Dihedral => dihedral(Some(2 * (m as u64 + 2))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StageSummary {
    pub m: usize,
    pub l: usize,
    pub p: u64,
    pub p_prime: u64,
    /// Length of the enlarged marking (encoding plus Ore witnesses).
    pub marking_length: usize,
    pub ore_witnesses: usize,
    /// Each ξ_j is recovered exactly at coordinate 0 from [w_η, w_ζ].
    pub hall_recovery_exact: bool,
    pub order_wt: BigOrder,
    pub order_wu: BigOrder,
    pub full_wreath_order: BigOrder,
    pub full_wreath: bool,
    pub t_is_u_power: bool,
    pub c_order: BigOrder,
    pub agreement_wt: Option<AgreementRadius>,
    pub agreement_wu: Option<AgreementRadius>,
    pub commutators_exact: usize,
    pub commutators_total: usize,
    pub runtime_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrefixDensity {
    pub n: usize,
    pub k_order: BigOrder,
    pub lambda1_order: BigOrder,
    pub lambda2_order: BigOrder,
    pub with_t: DensityVerdict,
    pub with_u: DensityVerdict,
    pub runtime_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstructionReport {
    pub l_sequence: Vec<usize>,
    pub p_sequence: Vec<u64>,
    pub p_prime_sequence: Vec<u64>,
    pub sidon: Vec<i64>,
    pub prefix_n: usize,
    pub stages: Vec<StageSummary>,
    pub prefixes: Vec<PrefixDensity>,
    /// Largest prefix whose density verdicts were completed.
    pub completed_prefix: usize,
    /// Set when a resource cap stopped the run early.
    pub exhausted: Option<String>,
    /// Commutator witnesses of the first stage.
    pub commutator_table: Vec<CommutatorWitness>,
}

impl ConstructionReport {
    pub fn dense_everywhere(&self) -> bool {
        self.exhausted.is_none()
            && self.completed_prefix == self.prefix_n
            && self
                .prefixes
                .iter()
                .all(|p| p.with_t.dense && p.with_u.dense)
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# Two dense diagonal products\n");
        let _ = writeln!(s, "- l: {:?}", self.l_sequence);
        let _ = writeln!(s, "- p: {:?}", self.p_sequence);
        let _ = writeln!(s, "- p': {:?}", self.p_prime_sequence);
        let _ = writeln!(s, "- placement: {:?}", self.sidon);
        let _ = writeln!(
            s,
            "- completed prefix: {} of {}",
            self.completed_prefix, self.prefix_n
        );
        if let Some(e) = &self.exhausted {
            let _ = writeln!(s, "- stopped: {e}");
        }
        let _ = writeln!(s, "\n## Stages\n");
        let _ = writeln!(s, "| m | l | p | p' | full wreath | <w,t> = <w,u> | t = u^p' | recovery | agree (w,t) | agree (w,u) |");
        let _ = writeln!(s, "|---|---|---|----|-------------|---------------|----------|----------|-------------|-------------|");
        for st in &self.stages {
            let fmt = |a: &Option<AgreementRadius>| a.map_or("-".to_string(), |a| a.to_string());
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |",
                st.m,
                st.l,
                st.p,
                st.p_prime,
                st.full_wreath,
                st.order_wt == st.order_wu,
                st.t_is_u_power,
                st.hall_recovery_exact,
                fmt(&st.agreement_wt),
                fmt(&st.agreement_wu)
            );
        }
        let _ = writeln!(s, "\n## Prefix density\n");
        let _ = writeln!(s, "| n | dense (w,t) | dense (w,u) | order |");
        let _ = writeln!(s, "|---|-------------|-------------|-------|");
        for p in &self.prefixes {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} |",
                p.n, p.with_t.dense, p.with_u.dense, p.k_order
            );
        }
        s
    }
}

fn elapsed(start: Instant, on: bool) -> Option<u64> {
    on.then(|| start.elapsed().as_millis() as u64)
}

/// Encodes one base stage into Alt(G_m), enlarges the marking by Ore
/// witnesses, and builds the two markings of L_m.
fn assemble_stage(
    cfg: &ConstructionConfig,
    m: usize,
    pp: u64,
    p: u64,
) -> Result<(StageSummary, KeyPropositionStage)> {
    let started = Instant::now();
    let caps = &cfg.caps;
    let base = cfg.base_stage(m)?;
    let alt = alt_encode(&base, caps)?;
    let l = match alt.family {
        Family::Alternating { n } => n,
        _ => {
            return Err(Error::Internal(
                "alternating encoding without a degree".into(),
            ))
        }
    };
    let mut etas = Vec::new();
    let mut zetas = Vec::new();
    for (j, xi) in alt.marking.iter().enumerate() {
        let x = xi
            .as_perm()
            .ok_or_else(|| Error::Internal("permutation marking".into()))?;
        match ore_commutator(x, None)? {
            OreOutcome::Found { eta, zeta } => {
                etas.push(Element::Perm(eta));
                zetas.push(Element::Perm(zeta));
            }
            OreOutcome::Exhausted { searched } => {
                return Err(Error::Internal(format!(
                    "no commutator witness for generator {} after {searched} tries",
                    j + 1
                )))
            }
        }
    }
    let k0 = alt.k();
    let mut marking = alt.marking.clone();
    marking.extend(etas);
    marking.extend(zetas);
    let enlarged = MarkedGroup::new(
        alt.group.clone(),
        marking,
        format!("{}; xi, eta, zeta", alt.name),
    )?
    .with_family(alt.family.clone());
    let opts = KeyPropositionOptions {
        rmax: (cfg.agreement_rmax > 0).then_some(cfg.agreement_rmax),
    };
    let ks = key_stage(m, &enlarged, &cfg.sidon, pp, p, opts, caps)?;
    // [w_{η_j}, w_{ζ_j}] sits at coordinate 0 with value ξ_j
    let recovery = (0..k0).all(|j| {
        let i = k0 + j + 1;
        let jj = 2 * k0 + j + 1;
        ks.commutators
            .iter()
            .any(|c| c.i == i && c.j == jj && c.exact && c.expected == alt.marking[j].to_string())
    });
    let full = BigOrder::Finite(alternating_order(l as u64).pow(p as u32) * BigUint::from(p));
    let summary = StageSummary {
        m,
        l,
        p,
        p_prime: pp,
        marking_length: enlarged.k(),
        ore_witnesses: k0,
        hall_recovery_exact: recovery,
        order_wt: ks.order_wt.clone(),
        order_wu: ks.order_wu.clone(),
        full_wreath: ks.order_wu == full && ks.order_wt == full,
        full_wreath_order: full,
        t_is_u_power: ks.t_is_u_power,
        c_order: ks.c_order.clone(),
        agreement_wt: ks.agreement_wt,
        agreement_wu: ks.agreement_wu,
        commutators_exact: ks.commutators.iter().filter(|c| c.exact).count(),
        commutators_total: ks.commutators.len(),
        runtime_ms: elapsed(started, cfg.record_timings),
    };
    Ok((summary, ks))
}

/// Runs every stage of the prefix and checks density of both diagonal
/// products at each prefix length.
pub fn assemble_construction(cfg: &ConstructionConfig) -> Result<ConstructionReport> {
    cfg.caps.validate()?;
    if cfg.prefix_n == 0 {
        return Err(Error::InvalidInput("prefix_n must be at least 1".into()));
    }
    if cfg.primes.len() < cfg.prefix_n {
        return Err(Error::InvalidInput(format!(
            "{} prime pairs for a prefix of {}",
            cfg.primes.len(),
            cfg.prefix_n
        )));
    }
    let schedule = PrimeSchedule {
        sidon: cfg.sidon.clone(),
        pairs: cfg.primes[..cfg.prefix_n].to_vec(),
    };
    let k = 3 * (3 * cfg.base_stage(0)?.k() - 1);
    schedule.validate(k)?;
    let mut report = ConstructionReport {
        l_sequence: Vec::new(),
        p_sequence: Vec::new(),
        p_prime_sequence: Vec::new(),
        sidon: cfg.sidon.clone(),
        prefix_n: cfg.prefix_n,
        stages: Vec::new(),
        prefixes: Vec::new(),
        completed_prefix: 0,
        exhausted: None,
        commutator_table: Vec::new(),
    };
    let mut wt = Vec::new();
    let mut wu = Vec::new();
    for (m, &(pp, p)) in schedule.pairs.iter().enumerate() {
        let (summary, ks) = match assemble_stage(cfg, m, pp, p) {
            Ok(x) => x,
            Err(e) if e.is_resource() => {
                report.exhausted = Some(format!("stage {m}: {e}"));
                return Ok(report);
            }
            Err(e) => {
                return Err(Error::Stage {
                    stage: m,
                    reason: e.to_string(),
                })
            }
        };
        report.l_sequence.push(summary.l);
        report.p_sequence.push(p);
        report.p_prime_sequence.push(pp);
        if m == 0 {
            report.commutator_table = ks.commutators.clone();
        }
        report.stages.push(summary);
        wt.push(ks.with_t);
        wu.push(ks.with_u);
        let started = Instant::now();
        let verdicts =
            density_check(&wt, &cfg.caps).and_then(|a| Ok((a, density_check(&wu, &cfg.caps)?)));
        match verdicts {
            Ok((a, b)) => {
                report.prefixes.push(PrefixDensity {
                    n: m + 1,
                    k_order: a.full_order.clone(),
                    lambda1_order: a.achieved.clone(),
                    lambda2_order: b.achieved.clone(),
                    with_t: a,
                    with_u: b,
                    runtime_ms: elapsed(started, cfg.record_timings),
                });
                report.completed_prefix = m + 1;
            }
            Err(e) if e.is_resource() => {
                report.exhausted = Some(format!("prefix {}: {e}", m + 1));
                return Ok(report);
            }
            Err(e) => {
                return Err(Error::Stage {
                    stage: m,
                    reason: e.to_string(),
                })
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::std_groups::symmetric;

    #[test]
    fn ruler_is_sidon_and_default_schedule_validates() {
        check_sidon(&RULER_15).unwrap();
        PrimeSchedule::default_two_stage().validate(15).unwrap();
        let bad = PrimeSchedule {
            sidon: vec![2, 4],
            pairs: vec![(5, 31), (7, 29)],
        };
        assert!(matches!(
            bad.validate(2),
            Err(Error::Stage { stage: 1, .. })
        ));
    }

    #[test]
    fn key_proposition_on_sym3() {
        let caps = Caps::default();
        let sched = PrimeSchedule {
            sidon: vec![2, 4],
            pairs: vec![(5, 31)],
        };
        let st = key_proposition(
            &[symmetric(3).unwrap()],
            &sched,
            KeyPropositionOptions { rmax: Some(2) },
            &caps,
        )
        .unwrap();
        let s = &st[0];
        assert!(s.generation_equal());
        assert!(s.t_is_u_power);
        assert!(s.commutators_exact());
        assert_eq!(s.c_order, BigOrder::finite(6u32));
        assert!(s.agreement_wt.unwrap().at_least(2));
    }

    #[test]
    fn involution_input_is_unchanged() {
        let d8 = dihedral(Some(8)).unwrap();
        let r = involution_lift(&[d8], None, 2, &Caps::default()).unwrap();
        assert_eq!(r.iterations, 0);
    }
}
