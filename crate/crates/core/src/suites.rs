//! Verification suites: small, exact checks of each construction, grouped by
//! topic and reported as pass/fail records.

use crate::cayley::{agreement_radius, ball, balls_isomorphic, AgreementRadius};
use crate::constructions::{
    absorption_limit, absorption_marking, alt_encode, encode::verify_certificate,
    hall_wreath_marking, ore::is_witness, ore_commutator, ore_table, powers_of_two, sl_encode,
    sym_encode, OreOutcome,
};
use crate::diagonal::{
    density_check, fp_recovery_check, goursat_full_check, prefix_quotient_consistency, FpRecovery,
    GoursatVerdict, Presentation,
};
use crate::error::{Error, Result};
use crate::groups::perm::{alternating_elements, Perm};
use crate::groups::std_groups::{
    alternating, cyclic, cyclic_product, free_abelian, sl2, symmetric,
};
use crate::groups::{BigOrder, Caps, Element, Group, MarkedGroup};
use crate::pipeline::{
    dihedral_stage, involution_lift, key_proposition, KeyPropositionOptions, PrimeSchedule,
};
use crate::spectral::elementary_block_marking;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// The result this check exercises, or "plumbing".
    pub anchor: String,
    pub status: CheckStatus,
    pub witness: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
    /// A resource cap stopped the check.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub exhausted: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub caps: Caps,
    pub seed: u64,
    pub record_timings: bool,
    /// Random generator pairs drawn for the Goursat suite.
    pub goursat_samples: usize,
    /// Radius bound for the absorption agreement sequence.
    pub absorption_rmax: u32,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            caps: Caps::default(),
            seed: 0x5eed,
            record_timings: false,
            goursat_samples: 200,
            absorption_rmax: 6,
        }
    }
}

/// Suite name, then (check name, anchor) for every check it runs.
pub const CATALOG: &[(&str, &[(&str, &str)])] = &[
    (
        "absorption",
        &[
            (
                "sym3-agreement-nondecreasing",
                "absorption marking converges to an abelian wreath limit",
            ),
            (
                "sym3-ball-oracle",
                "absorption marking converges to an abelian wreath limit",
            ),
        ],
    ),
    (
        "amalgam",
        &[
            (
                "sym3-involution-lift",
                "dihedral amalgam replaces a generator by two involutions",
            ),
            (
                "involutions-unchanged",
                "dihedral amalgam replaces a generator by two involutions",
            ),
        ],
    ),
    (
        "diagonal",
        &[
            (
                "coprime-cyclic-dense",
                "diagonal product density by exact order",
            ),
            (
                "cyclic-chain-not-dense",
                "diagonal product density by exact order",
            ),
            (
                "chain-prefix-consistency",
                "prefix quotients of a diagonal product",
            ),
            (
                "key-proposition-sym3",
                "two markings of a finite wreath generate the same group",
            ),
            (
                "dihedral-top-stage",
                "wreath over a dihedral top with a marking of fixed size",
            ),
        ],
    ),
    (
        "encoding",
        &[
            ("sym-encoding-z3", "symmetric encoding of a marked group"),
            (
                "alt-encoding-klein",
                "alternating encoding of a marked group",
            ),
            (
                "sl-encoding-z3-p2",
                "special linear encoding with elimination certificate",
            ),
            (
                "block-marking-sl4-2",
                "block elementary marking generates SL",
            ),
        ],
    ),
    (
        "fp-recovery",
        &[
            (
                "z8-chain",
                "finitely presented limit recovered from a diagonal product",
            ),
            (
                "z16-tail",
                "finitely presented limit recovered from a diagonal product",
            ),
        ],
    ),
    (
        "goursat",
        &[
            (
                "alt5-z7-random-pairs",
                "subdirect product with disjoint simple quotients is full",
            ),
            (
                "alt5-diagonal",
                "subdirect product with disjoint simple quotients is full",
            ),
        ],
    ),
    (
        "hall",
        &[
            (
                "sym3-commutator-table",
                "Hall embedding recovers commutators at one coordinate",
            ),
            (
                "shift-convention",
                "Hall embedding recovers commutators at one coordinate",
            ),
        ],
    ),
    (
        "ore",
        &[
            (
                "alt5-exhaustive",
                "every element of an alternating group is a commutator",
            ),
            (
                "alt6-exhaustive",
                "every element of an alternating group is a commutator",
            ),
            (
                "alt10-conjugacy",
                "every element of an alternating group is a commutator",
            ),
        ],
    ),
];

pub fn suite_names() -> Vec<&'static str> {
    CATALOG.iter().map(|(n, _)| *n).collect()
}

fn anchor_of(suite: &str, check: &str) -> String {
    CATALOG
        .iter()
        .find(|(s, _)| *s == suite)
        .and_then(|(_, cs)| cs.iter().find(|(c, _)| *c == check))
        .map_or("plumbing", |(_, a)| *a)
        .to_string()
}

struct Runner<'a> {
    suite: &'a str,
    opts: &'a SuiteOptions,
    out: Vec<CheckRecord>,
}

impl Runner<'_> {
    fn check(&mut self, name: &str, f: impl FnOnce() -> Result<(CheckStatus, Value)>) {
        let started = Instant::now();
        let (status, witness, exhausted) = match f() {
            Ok((s, w)) => (s, w, false),
            Err(e) if e.is_resource() => (
                CheckStatus::Inconclusive,
                json!({ "error": e.to_string() }),
                true,
            ),
            Err(e) => (CheckStatus::Fail, json!({ "error": e.to_string() }), false),
        };
        self.out.push(CheckRecord {
            name: format!("{}/{name}", self.suite),
            anchor: anchor_of(self.suite, name),
            status,
            witness,
            runtime_ms: self
                .opts
                .record_timings
                .then(|| started.elapsed().as_millis() as u64),
            exhausted,
        });
    }
}

fn verdict(ok: bool) -> CheckStatus {
    if ok {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    }
}

fn perm(n: usize, cycles: &[&[u32]]) -> Result<Element> {
    Perm::from_cycles(n, cycles)
        .map(Element::Perm)
        .ok_or_else(|| Error::Internal("bad cycle literal".into()))
}

/// Runs one suite by name.
pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<Vec<CheckRecord>> {
    opts.caps.validate()?;
    let mut r = Runner {
        suite: name,
        opts,
        out: Vec::new(),
    };
    match name {
        "goursat" => goursat(&mut r),
        "ore" => ore(&mut r),
        "hall" => hall(&mut r),
        "absorption" => absorption(&mut r),
        "encoding" => encoding(&mut r),
        "amalgam" => amalgam(&mut r),
        "diagonal" => diagonal(&mut r),
        "fp-recovery" => fp_recovery(&mut r),
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown suite {other:?}; known: {}",
                suite_names().join(", ")
            )))
        }
    }
    Ok(r.out)
}

fn goursat(r: &mut Runner) {
    let caps = r.opts.caps;
    let samples = r.opts.goursat_samples;
    let seed = r.opts.seed;
    r.check("alt5-z7-random-pairs", || {
        let a5 = alternating(5)?;
        let z7 = cyclic(Some(7))?;
        let elems = alternating_elements(5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut full, mut drawn) = (0usize, 0usize);
        let mut first_failure = None;
        while full + first_failure.iter().count() < samples {
            drawn += 1;
            let a: Vec<Element> = (0..2).map(|_| Element::Perm(elems[rng.gen_range(0..elems.len())].clone())).collect();
            let b: Vec<i64> = (0..2).map(|_| rng.gen_range(0..7)).collect();
            if b.iter().all(|&x| x == 0) {
                continue;
            }
            let proj = MarkedGroup::new(a5.group.clone(), a.clone(), "proj".to_string())?;
            if proj.order(&caps)? != BigOrder::finite(60u32) {
                continue;
            }
            let gens: Vec<Element> =
                a.into_iter().zip(&b).map(|(x, &y)| Element::Tuple(vec![x, Element::Int(y)])).collect();
            let rep = goursat_full_check(&a5, &z7, &gens, &caps)?;
            if rep.verdict == GoursatVerdict::Full && rep.achieved == BigOrder::finite(420u32) {
                full += 1;
            } else if first_failure.is_none() {
                first_failure = Some(format!("{gens:?}"));
            }
        }
        Ok((verdict(full == samples), json!({ "full": full, "samples": samples, "drawn": drawn, "order": 420, "first_failure": first_failure })))
    });
    r.check("alt5-diagonal", || {
        let a5 = alternating(5)?;
        let gens: Vec<Element> = a5
            .marking
            .iter()
            .map(|s| Element::Tuple(vec![s.clone(), s.clone()]))
            .collect();
        let rep = goursat_full_check(&a5, &a5, &gens, &caps)?;
        let ok = rep.verdict == GoursatVerdict::HypothesisViolated
            && rep.achieved == BigOrder::finite(60u32);
        Ok((
            verdict(ok),
            serde_json::to_value(&rep).unwrap_or(Value::Null),
        ))
    });
}

fn ore_exhaustive(n: usize) -> Result<(CheckStatus, Value)> {
    let table = ore_table(n)?;
    let alt = alternating_elements(n);
    let covered = alt
        .iter()
        .filter(|x| table.get(*x).is_some_and(|(e, z)| is_witness(x, e, z)))
        .count();
    Ok((
        verdict(covered == alt.len()),
        json!({ "degree": n, "covered": covered, "order": alt.len() }),
    ))
}

fn ore(r: &mut Runner) {
    r.check("alt5-exhaustive", || ore_exhaustive(5));
    r.check("alt6-exhaustive", || ore_exhaustive(6));
    r.check("alt10-conjugacy", || {
        let targets = [
            Perm::from_cycles(10, &[&[0, 1, 2, 3, 4, 5, 6, 7, 8]]),
            Perm::from_cycles(10, &[&[0, 1], &[2, 3]]),
            Perm::from_cycles(10, &[&[0, 1, 2, 3, 4], &[5, 6, 7]]),
        ];
        let mut rows = Vec::new();
        let mut ok = true;
        for t in targets.into_iter().flatten() {
            let found = match ore_commutator(&t, None)? {
                OreOutcome::Found { eta, zeta } => {
                    let good = is_witness(&t, &eta, &zeta);
                    rows.push(json!({ "target": t.to_string(), "eta": eta.to_string(), "zeta": zeta.to_string() }));
                    good
                }
                OreOutcome::Exhausted { .. } => false,
            };
            ok &= found;
        }
        Ok((verdict(ok && rows.len() == 3), Value::Array(rows)))
    });
}

fn hall(r: &mut Runner) {
    r.check("sym3-commutator-table", || {
        let hm = hall_wreath_marking(&symmetric(3)?, &[2, 4])?;
        let table = hm.commutator_table()?;
        let ok = !table.is_empty() && table.iter().all(|c| c.exact);
        Ok((
            verdict(ok),
            serde_json::to_value(&table).unwrap_or(Value::Null),
        ))
    });
    r.check("shift-convention", || {
        let g = MarkedGroup::new(
            Group::Perm { degree: 3 },
            vec![
                perm(3, &[&[0, 1]])?,
                perm(3, &[&[1, 2]])?,
                perm(3, &[&[0, 1, 2]])?,
            ],
            "Sym(3); three".to_string(),
        )?;
        let placement = powers_of_two(3);
        let hm = hall_wreath_marking(&g, &placement)?;
        let mut ok = true;
        let mut rows = Vec::new();
        for (i, w) in hm.conjugates()?.iter().enumerate() {
            let Element::Wreath { support, .. } = w else {
                return Err(Error::Internal("wreath element".into()));
            };
            let got: Vec<i64> = support.keys().filter_map(Element::as_int).collect();
            let mut want: Vec<i64> = placement.iter().map(|a| a - placement[i]).collect();
            want.sort_unstable();
            ok &= got == want;
            rows.push(json!({ "i": i + 1, "support": got, "expected": want }));
        }
        Ok((verdict(ok), Value::Array(rows)))
    });
}

fn absorption(r: &mut Runner) {
    let caps = r.opts.caps;
    let rmax = r.opts.absorption_rmax;
    r.check("sym3-agreement-nondecreasing", || {
        let s3 = symmetric(3)?;
        let limit = absorption_limit(&s3)?;
        let mut radii = Vec::new();
        for m in 1..=4 {
            radii.push(agreement_radius(
                &absorption_marking(&s3, m)?,
                &limit,
                rmax,
                &caps,
            )?);
        }
        let monotone = radii
            .windows(2)
            .all(|w| w[0].lower_bound() <= w[1].lower_bound());
        let ok = monotone && radii[2].at_least(2);
        let shown: Vec<String> = radii.iter().map(AgreementRadius::to_string).collect();
        Ok((
            verdict(ok),
            json!({ "m": [1, 2, 3, 4], "radius": shown, "rmax": rmax }),
        ))
    });
    r.check("sym3-ball-oracle", || {
        let s3 = symmetric(3)?;
        let a = ball(&absorption_marking(&s3, 3)?, 2, &caps)?;
        let b = ball(&absorption_limit(&s3)?, 2, &caps)?;
        let iso = balls_isomorphic(&a, &b)?.is_isomorphic();
        Ok((
            verdict(iso),
            json!({ "radius": 2, "vertices": a.vertices.len(), "isomorphic": iso }),
        ))
    });
}

fn encoding(r: &mut Runner) {
    let caps = r.opts.caps;
    r.check("sym-encoding-z3", || {
        let s = sym_encode(&cyclic(Some(3))?, &caps)?;
        let o = s.order(&caps)?;
        Ok((
            verdict(o == BigOrder::finite(6u32)),
            json!({ "order": o.to_string(), "generators": s.k() }),
        ))
    });
    r.check("alt-encoding-klein", || {
        let a = alt_encode(&cyclic_product(&[2, 2])?, &caps)?;
        let o = a.order(&caps)?;
        Ok((
            verdict(o == BigOrder::finite(12u32) && a.k() == 5),
            json!({ "order": o.to_string(), "generators": a.k() }),
        ))
    });
    r.check("sl-encoding-z3-p2", || {
        let (m, cert) = sl_encode(&cyclic(Some(3))?, 2, &caps)?;
        let o = m.order(&caps)?;
        let cert_ok = match &cert {
            Some(c) => verify_certificate(&m, c)?,
            None => false,
        };
        let ok = o == BigOrder::finite(168u32) && cert_ok;
        Ok((verdict(ok), json!({ "order": o.to_string(), "certificate_entries": cert.map_or(0, |c| c.len()), "certificate_exact": cert_ok })))
    });
    r.check("block-marking-sl4-2", || {
        let (m, cert) = elementary_block_marking(1, 2)?;
        let o = m.order(&caps)?;
        let cert_ok = verify_certificate(&m, &cert)?;
        let ok = o == BigOrder::finite(20160u32) && cert_ok;
        Ok((verdict(ok), json!({ "order": o.to_string(), "certificate_entries": cert.len(), "certificate_exact": cert_ok })))
    });
}

fn amalgam(r: &mut Runner) {
    let caps = r.opts.caps;
    r.check("sym3-involution-lift", || {
        let s3 = symmetric(3)?;
        let lift = involution_lift(std::slice::from_ref(&s3), None, 2, &caps)?;
        let g = &lift.stages[0];
        let mut involutions = true;
        for s in &g.marking {
            involutions &= g.group.element_order(s)? == BigOrder::finite(2u32);
        }
        // c·d is the image of the replaced generator
        let Group::Amalgam(am) = &g.group else { return Err(Error::Internal("amalgam expected".into())) };
        let cd = g.group.mul(&g.marking[1], &g.marking[2])?;
        let rotation_matches = cd == am.factor_element(1, &s3.marking[1])?;
        let infinite = g.group.element_order(&g.group.mul(&g.marking[0], &g.marking[1])?)? == BigOrder::Infinite;
        let ok = lift.iterations == 1 && g.k() == 3 && involutions && rotation_matches && infinite;
        Ok((verdict(ok), json!({ "generators": g.k(), "all_involutions": involutions, "cd_is_rotation": rotation_matches, "infinite": infinite })))
    });
    r.check("involutions-unchanged", || {
        let d = crate::constructions::dihedral(Some(5))?;
        let lift = involution_lift(std::slice::from_ref(&d), None, 2, &caps)?;
        let ok = lift.iterations == 0 && lift.stages[0].marking == d.marking;
        Ok((verdict(ok), json!({ "iterations": lift.iterations })))
    });
}

fn diagonal(r: &mut Runner) {
    let caps = r.opts.caps;
    r.check("coprime-cyclic-dense", || {
        let v = density_check(&[cyclic(Some(4))?, cyclic(Some(9))?], &caps)?;
        Ok((
            verdict(v.dense),
            serde_json::to_value(&v).unwrap_or(Value::Null),
        ))
    });
    r.check("cyclic-chain-not-dense", || {
        let v = density_check(&[cyclic(Some(2))?, cyclic(Some(4))?], &caps)?;
        Ok((
            verdict(!v.dense),
            serde_json::to_value(&v).unwrap_or(Value::Null),
        ))
    });
    r.check("chain-prefix-consistency", || {
        let c = prefix_quotient_consistency(
            &[cyclic(Some(2))?, cyclic(Some(4))?, cyclic(Some(8))?],
            &caps,
        )?;
        Ok((
            verdict(c.consistent),
            serde_json::to_value(&c).unwrap_or(Value::Null),
        ))
    });
    r.check("key-proposition-sym3", || {
        let sched = PrimeSchedule {
            sidon: vec![2, 4],
            pairs: vec![(5, 31)],
        };
        let st = key_proposition(
            &[symmetric(3)?],
            &sched,
            KeyPropositionOptions { rmax: Some(2) },
            &caps,
        )?;
        let s = &st[0];
        let agree = s.agreement_wt.is_some_and(|a| a.at_least(2));
        let ok = s.generation_equal() && s.t_is_u_power && s.commutators_exact() && agree;
        Ok((
            verdict(ok),
            json!({
                "order_wt": s.order_wt.to_string(),
                "order_wu": s.order_wu.to_string(),
                "t_is_u_power": s.t_is_u_power,
                "c_order": s.c_order.to_string(),
                "agreement_wt": s.agreement_wt.map(|a| a.to_string()),
                "commutators_exact": s.commutators_exact(),
            }),
        ))
    });
    r.check("dihedral-top-stage", || {
        let st = dihedral_stage(&alternating(5)?, 7, &[1, 2], &caps)?;
        Ok((
            verdict(st.generates()),
            json!({ "order": st.order.to_string(), "expected": st.expected.to_string() }),
        ))
    });
}

fn fp_recovery(r: &mut Runner) {
    let caps = r.opts.caps;
    let z8 = || -> Result<Presentation> {
        Ok(Presentation {
            group: cyclic(Some(8))?,
            relators: vec![vec![1; 8]],
        })
    };
    let run = |orders: &[u64]| -> Result<FpRecovery> {
        let approx = orders
            .iter()
            .map(|&n| cyclic(Some(n)))
            .collect::<Result<Vec<_>>>()?;
        fp_recovery_check(&z8()?, &approx, &caps)
    };
    r.check("z8-chain", || {
        let out = run(&[2, 4, 8, 8, 8])?;
        let ok = out == FpRecovery::Recovered { deleted: 2 };
        Ok((
            verdict(ok),
            serde_json::to_value(&out).unwrap_or(Value::Null),
        ))
    });
    r.check("z16-tail", || {
        let out = run(&[2, 4, 16, 16, 16])?;
        let ok = out.holds() == Some(false);
        Ok((
            verdict(ok),
            serde_json::to_value(&out).unwrap_or(Value::Null),
        ))
    });
}

/// Parses names such as `Z`, `Z/6`, `Z^2`, `D[6]`, `D[inf]`, `Sym(4)`,
/// `Alt(5)`, `SL(2,7)` into their standard markings.
pub fn named_group(name: &str) -> Result<MarkedGroup> {
    let s = name.replace(' ', "");
    let bad = || Error::InvalidInput(format!("unknown group name {name:?}"));
    let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
    let inner = |pre: &str, post: &str| s.strip_prefix(pre).and_then(|t| t.strip_suffix(post));
    if s == "Z" {
        return cyclic(None);
    }
    if let Some(n) = s.strip_prefix("Z/") {
        return cyclic(Some(num(n)?));
    }
    if let Some(d) = s.strip_prefix("Z^") {
        return free_abelian(num(d)? as usize);
    }
    if let Some(n) = inner("D[", "]") {
        return crate::constructions::dihedral(if n == "inf" { None } else { Some(num(n)?) });
    }
    if let Some(n) = inner("Sym(", ")") {
        return symmetric(num(n)? as usize);
    }
    if let Some(n) = inner("Alt(", ")") {
        return alternating(num(n)? as usize);
    }
    if let Some(p) = inner("SL(2,", ")") {
        return sl2(num(p)? as u32);
    }
    Err(bad())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_sorted_and_every_suite_has_checks() {
        let names = suite_names();
        let mut sorted = names.clone();
        sorted.sort_unstable();
        assert_eq!(names, sorted);
        assert!(CATALOG.iter().all(|(_, c)| !c.is_empty()));
    }

    #[test]
    fn names_parse() {
        assert_eq!(named_group("Z/6").unwrap().name, "Z/6");
        assert!(named_group("D[inf]").is_ok());
        assert!(named_group("Q8").is_err());
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("nope", &SuiteOptions::default()).is_err());
    }
}
