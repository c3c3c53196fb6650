//! One test per acceptance criterion. Each prints a single PASS/FAIL line
//! (visible with `--nocapture`) and fails the test on FAIL.

use mgk_core::cayley::{agreement_radius, ball, balls_isomorphic, AgreementRadius};
use mgk_core::constructions::dihedral;
use mgk_core::diagonal::diagonal_product;
use mgk_core::groups::std_groups::{cyclic, sl2};
use mgk_core::groups::{Caps, Element, Group, MarkedGroup};
use mgk_core::pipeline::{assemble_construction, ConstructionConfig};
use mgk_core::spectral::{cayley_graph, elementary_block_marking, spectral_gap};
use mgk_core::suites::{run_suite, CheckRecord, CheckStatus, SuiteOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

fn report(n: u32, title: &str, ok: bool, started: Instant, limit: Duration, detail: &str) {
    let elapsed = started.elapsed();
    let pass = ok && elapsed <= limit;
    println!(
        "{} criterion {n:>2} {title}: {detail} ({:.2?}, limit {:?})",
        if pass { "PASS" } else { "FAIL" },
        elapsed,
        limit
    );
    assert!(ok, "criterion {n} ({title}) failed: {detail}");
    assert!(elapsed <= limit, "criterion {n} ({title}) took {elapsed:?}");
}

fn suite(name: &str) -> Vec<CheckRecord> {
    run_suite(name, &SuiteOptions::default()).expect("suite runs")
}

fn passed(records: &[CheckRecord], check: &str) -> bool {
    records
        .iter()
        .any(|r| r.name.ends_with(check) && r.status == CheckStatus::Pass)
}

fn summary(records: &[CheckRecord]) -> String {
    let ok = records
        .iter()
        .filter(|r| r.status == CheckStatus::Pass)
        .count();
    format!("{ok}/{} checks", records.len())
}

#[test]
fn criterion_01_goursat_suite() {
    let t = Instant::now();
    let r = suite("goursat");
    let ok = passed(&r, "alt5-z7-random-pairs") && passed(&r, "alt5-diagonal");
    report(1, "goursat", ok, t, Duration::from_secs(10), &summary(&r));
}

#[test]
fn criterion_02_ore_suite() {
    let t = Instant::now();
    let r = suite("ore");
    let ok = passed(&r, "alt5-exhaustive") && passed(&r, "alt6-exhaustive");
    report(2, "ore", ok, t, Duration::from_secs(60), &summary(&r));
}

#[test]
fn criterion_03_hall_suite() {
    let t = Instant::now();
    let r = suite("hall");
    let ok = passed(&r, "sym3-commutator-table") && passed(&r, "shift-convention");
    report(3, "hall", ok, t, Duration::from_secs(60), &summary(&r));
}

#[test]
fn criterion_04_absorption_suite() {
    let t = Instant::now();
    let r = suite("absorption");
    let ok = passed(&r, "sym3-agreement-nondecreasing") && passed(&r, "sym3-ball-oracle");
    let radii = r[0].witness["radius"].to_string();
    report(
        4,
        "absorption",
        ok,
        t,
        Duration::from_secs(120),
        &format!("{} radii {radii}", summary(&r)),
    );
}

#[test]
fn criterion_05_key_proposition_suite() {
    let t = Instant::now();
    let r = suite("diagonal");
    let ok = passed(&r, "key-proposition-sym3");
    report(
        5,
        "key proposition",
        ok,
        t,
        Duration::from_secs(120),
        &summary(&r),
    );
}

#[test]
fn criterion_06_two_stage_prefix() {
    let t = Instant::now();
    let cfg = ConstructionConfig::default();
    let rep = assemble_construction(&cfg).expect("assembly runs");
    let distinct = rep.p_sequence.windows(2).all(|w| w[0] < w[1]);
    let ok = rep.l_sequence == [8, 12]
        && distinct
        && rep.dense_everywhere()
        && rep
            .stages
            .iter()
            .all(|s| s.t_is_u_power && s.full_wreath && s.hall_recovery_exact);
    let orders: Vec<String> = rep.prefixes.iter().map(|p| p.k_order.to_string()).collect();
    let detail = format!(
        "l {:?}, p {:?}, prefix orders {:?}",
        rep.l_sequence, rep.p_sequence, orders
    );
    report(
        6,
        "two-stage prefix",
        ok,
        t,
        Duration::from_secs(30 * 60),
        &detail,
    );
}

#[test]
fn criterion_07_sl_suite() {
    let t = Instant::now();
    let r = suite("encoding");
    let ok = passed(&r, "sl-encoding-z3-p2") && passed(&r, "block-marking-sl4-2");
    report(
        7,
        "special linear",
        ok,
        t,
        Duration::from_secs(5 * 60),
        &summary(&r),
    );
}

#[test]
fn criterion_08_spectral_suite() {
    let t = Instant::now();
    let caps = Caps::default();
    let mut worst: f64 = 0.0;
    for n in 4..=64u64 {
        let g = cayley_graph(&cyclic(Some(n)).unwrap(), &caps).unwrap();
        let rep = spectral_gap(&g, caps.seed).unwrap();
        worst = worst.max((rep.lambda2 - (2.0 * std::f64::consts::PI / n as f64).cos()).abs());
    }
    let (sl4, _) = elementary_block_marking(1, 2).unwrap();
    let big = spectral_gap(&cayley_graph(&sl4, &caps).unwrap(), caps.seed).unwrap();
    let factors = [sl2(5).unwrap(), sl2(7).unwrap()];
    let delta = diagonal_product(&factors).unwrap();
    let dl = spectral_gap(&cayley_graph(&delta, &caps).unwrap(), caps.seed).unwrap();
    let mut interlace = dl.residual < 1e-9;
    for f in &factors {
        let fl = spectral_gap(&cayley_graph(f, &caps).unwrap(), caps.seed).unwrap();
        interlace &= fl.lambda2 <= dl.lambda2 + 1e-9;
    }
    let ok = worst < 1e-9 && big.gap > 0.0 && big.residual < 1e-9 && interlace;
    let detail = format!(
        "cycle error {worst:.1e}, SL(4,2) gap {:.4} residual {:.1e}, interlacing {interlace} on {} vertices",
        big.gap, big.residual, dl.n_vertices
    );
    report(8, "spectral", ok, t, Duration::from_secs(10 * 60), &detail);
}

/// Balls agree at every radius up to the agreement radius and, when it is
/// exact, differ one step later.
fn downward_closed(a: &MarkedGroup, b: &MarkedGroup, rmax: u32, caps: &Caps) -> bool {
    let r = agreement_radius(a, b, rmax, caps).unwrap();
    let iso = |k: u32| {
        balls_isomorphic(&ball(a, k, caps).unwrap(), &ball(b, k, caps).unwrap())
            .unwrap()
            .is_isomorphic()
    };
    match r {
        AgreementRadius::Never => !iso(0),
        AgreementRadius::Exact(k) => (0..=k).all(iso) && !iso(k + 1),
        AgreementRadius::AtLeast(k) => (0..=k).all(iso),
    }
}

fn random_small(rng: &mut ChaCha8Rng) -> MarkedGroup {
    match rng.gen_range(0..3) {
        0 => dihedral(Some(rng.gen_range(2..12))).unwrap(),
        1 => dihedral(None).unwrap(),
        _ => {
            let n = rng.gen_range(2..16);
            let marking = vec![Element::Int(1), Element::Int(rng.gen_range(1..n))];
            MarkedGroup::new(
                Group::Cyclic {
                    order: Some(n as u64),
                },
                marking,
                format!("Z/{n}"),
            )
            .unwrap()
        }
    }
}

#[test]
fn criterion_09_convergence_infrastructure() {
    let t = Instant::now();
    let caps = Caps::default();
    let z6 =
        agreement_radius(&cyclic(Some(6)).unwrap(), &cyclic(None).unwrap(), 10, &caps).unwrap();
    let d12 = agreement_radius(
        &dihedral(Some(6)).unwrap(),
        &dihedral(None).unwrap(),
        20,
        &caps,
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut closed = 0;
    for _ in 0..100 {
        let (a, b) = (random_small(&mut rng), random_small(&mut rng));
        if downward_closed(&a, &b, 8, &caps) {
            closed += 1;
        }
    }
    let ok = z6 == AgreementRadius::Exact(2) && d12 == AgreementRadius::Exact(5) && closed == 100;
    let detail = format!("Z/6 vs Z {z6}, D12 vs Dinf {d12}, downward closed {closed}/100");
    report(9, "convergence", ok, t, Duration::from_secs(120), &detail);
}

#[test]
fn criterion_10_fp_recovery() {
    let t = Instant::now();
    let r = suite("fp-recovery");
    let ok = passed(&r, "z8-chain") && passed(&r, "z16-tail");
    let detail = format!(
        "{} chain {} tail {}",
        summary(&r),
        r[0].witness,
        r[1].witness
    );
    report(10, "fp-recovery", ok, t, Duration::from_secs(60), &detail);
}
