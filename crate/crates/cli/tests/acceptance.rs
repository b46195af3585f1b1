//! Acceptance checks, one test per criterion. Each test prints a single
//! `criterion N: PASS|FAIL ...` line and asserts on it.

use std::path::{Path, PathBuf};
use std::time::Instant;

use twogroup::finite_core::Internal2Group;
use twogroup_cli::fixture::FixtureBody;
use twogroup_cli::report::{Mode, Outcome};
use twogroup_cli::{load_fixture, run_suite, Fixture, LawResult, Suite, SuiteReport, Tolerances};

fn fixture(name: &str) -> Fixture {
    let path: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    load_fixture(&path).unwrap()
}

fn report(name: &str, suite: Suite) -> SuiteReport {
    run_suite(&fixture(name), suite).unwrap().report
}

fn law<'a>(r: &'a SuiteReport, id: &str) -> &'a LawResult {
    r.law(id).unwrap_or_else(|| panic!("{} has no law {id}", r.fixture))
}

fn residual(l: &LawResult) -> f64 {
    match l.outcome {
        Outcome::AtMost { residual, .. } | Outcome::AtLeast { residual, .. } => residual,
        _ => panic!("{} is not a residual law: {:?}", l.id, l.outcome),
    }
}

fn violations(l: &LawResult) -> usize {
    match l.outcome {
        Outcome::Count { violations } => violations,
        _ => panic!("{} is not a counting law: {:?}", l.id, l.outcome),
    }
}

fn verdict(n: u32, ok: bool, what: String) {
    println!("criterion {n}: {} {what}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {what}");
}

fn two_group(f: &Fixture) -> &Internal2Group {
    match &f.body {
        FixtureBody::Finite { two_group, .. } => two_group,
        FixtureBody::Matrix(_) => panic!("finite fixture expected"),
    }
}

#[test]
fn tolerances_are_pinned() {
    let t = Tolerances::default();
    assert_eq!(t.lie_functor, 1e-5);
    assert_eq!(t.functoriality, 1e-6);
    assert_eq!(t.field_brackets, 1e-4);
    assert_eq!(t.abelian_brackets, 1e-8);
    assert_eq!(t.j_inverse, 1e-6);
    assert_eq!(t.invariance, 1e-6);
    assert_eq!(t.control_min, 1e-2);
    assert_eq!(t.reconstruction, 1e-5);
    assert_eq!(t.limit_reconstruction, 1e-6);
    assert_eq!(twogroup::matrix_lie::FD_STEP, 1e-5);
    assert_eq!(twogroup::matrix_lie::RICHARDSON_TOL, 1e-5);
    assert_eq!(twogroup::multvf::DEFAULT_PAIR_SAMPLES, 64);
    for name in ["f1_z2.cm", "f2_z3_z2.cm", "f3_affine.m2g", "f4_so2.m2g"] {
        assert_eq!(fixture(name).tolerances, t, "{name} overrides a tolerance");
    }
}

#[test]
fn criterion_01_interchange() {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, h, g) in [("f1_z2.cm", 2usize, 2usize), ("f2_z3_z2.cm", 3, 2)] {
        let start = Instant::now();
        let r = report(name, Suite::Finite);
        let elapsed = start.elapsed().as_secs_f64();
        let l = law(&r, "finite.interchange");
        // Composable pairs (sigma, gamma) with s(sigma) = t(gamma): one per
        // gamma in H x| G and per h of sigma, so |H|^2 |G| of them.
        let pairs = h * h * g;
        let n1 = h * g;
        ok &= violations(l) == 0 && l.mode == Mode::Exhaustive && l.checked == pairs * pairs;
        ok &= l.checked <= n1.pow(4) && elapsed < 1.0;
        notes.push(format!("{name}: {} pairs, 0 violations, {elapsed:.3} s", l.checked));
    }
    verdict(1, ok, notes.join("; "));
}

/// `(h, g)` as the index `h |G| + g`.
fn arrow(h: usize, g: usize, order_g: usize) -> usize {
    h * order_g + g
}

#[test]
fn criterion_02_composition_formula() {
    let mut ok = true;
    for name in ["f1_z2.cm", "f2_z3_z2.cm"] {
        let r = report(name, Suite::Finite);
        let l = law(&r, "finite.composition-formula");
        ok &= violations(l) == 0 && l.mode == Mode::Exhaustive;
    }

    // Independent oracle on F2: H = Z/3 written additively, G = Z/2 acting by
    // negation, trivial boundary. (h, g)(h', g') = (h + (-1)^g h', g + g').
    let f2 = fixture("f2_z3_z2.cm");
    let g = two_group(&f2);
    let mul = |(h1, g1): (usize, usize), (h2, g2): (usize, usize)| {
        let acted = if g1 == 1 { (3 - h2) % 3 } else { h2 };
        ((h1 + acted) % 3, (g1 + g2) % 2)
    };
    let inv = |(h, gg): (usize, usize)| {
        let acted = if gg == 1 { h } else { (3 - h) % 3 };
        (acted, gg)
    };
    let mut checked = 0;
    for (hs, gs) in (0..3).flat_map(|h| (0..2).map(move |g| (h, g))) {
        for (hg, gg) in (0..3).flat_map(|h| (0..2).map(move |g| (h, g))) {
            // Trivial boundary: source and target of (h, g) are both g.
            if gs != gg {
                continue;
            }
            checked += 1;
            let expected = mul(mul((hg, gg), inv((0, gs))), (hs, gs));
            let got = g.compose(arrow(hs, gs, 2), arrow(hg, gg, 2));
            ok &= got == Some(arrow(expected.0, expected.1, 2));
            // Composition is also (h_s + h_g, g).
            ok &= expected == ((hs + hg) % 3, gg);
        }
    }
    ok &= checked == 18;
    verdict(
        2,
        ok,
        format!("exhaustive on F1 and F2, F2 oracle over {checked} pairs"),
    );
}

#[test]
fn criterion_03_action_groupoid() {
    let f2 = fixture("f2_z3_z2.cm");
    let r = run_suite(&f2, Suite::Finite).unwrap().report;
    let iso = law(&r, "finite.action-groupoid");
    let kernel = law(&r, "finite.source-kernel");
    let order = two_group(&f2).g1().order();
    let ok = violations(iso) == 0 && violations(kernel) == 0 && order == 6 && iso.mode == Mode::Exhaustive;
    verdict(
        3,
        ok,
        format!(
            "|G1| = {order}, bijective functor over {} composable pairs, ker s = H",
            iso.checked
        ),
    );
}

#[test]
fn criterion_04_left_regular_action() {
    let r = report("f2_z3_z2.cm", Suite::Finite);
    let ids = [
        "finite.left-regular.naturality",
        "finite.left-regular.horizontal",
        "finite.left-regular.units",
        "finite.left-regular.objects",
    ];
    let ok = ids.iter().all(|id| violations(law(&r, id)) == 0)
        && law(&r, "finite.left-regular.horizontal").checked == 36
        && law(&r, "finite.left-regular.naturality").checked == 6 * 6;
    verdict(
        4,
        ok,
        "naturality, horizontal products and units exhaustive on F2".into(),
    );
}

#[test]
fn criterion_05_adjoint_oracle() {
    let r = report("f3_affine.m2g", Suite::Lie);
    let l = law(&r, "lie.adjoint-oracle");
    let dims = 2 + 4;
    let ok = l.passed && residual(l) <= 1e-5 && l.checked == 4 * dims;
    verdict(
        5,
        ok,
        format!("relative residual {:.2e} over {} directions", residual(l), l.checked),
    );
}

#[test]
fn criterion_06_object_functoriality() {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, g0_dim) in [("f3_affine.m2g", 2), ("f4_so2.m2g", 1)] {
        let r = report(name, Suite::Lie);
        let l = law(&r, "fields.object-functoriality");
        ok &= residual(l) <= 1e-6 && l.checked == 64 * g0_dim;
        notes.push(format!("{name}: {:.2e}", residual(l)));
    }
    verdict(6, ok, notes.join("; "));
}

#[test]
fn criterion_07_bracket_preservation() {
    let f3 = fixture("f3_affine.m2g");
    let x = f3.field_category().unwrap();
    // Oracle: with b1 = E11 and b2 = E12, [b1, b2] = E12 = b2.
    let constants_ok = (x.l.bracket0[1][(0, 1)] - 1.0).abs() <= 1e-9 && x.l.bracket0[0][(0, 1)].abs() <= 1e-9;
    let r3 = run_suite(&f3, Suite::Lie).unwrap().report;
    let (o3, a3) = (law(&r3, "fields.object-brackets"), law(&r3, "fields.arrow-brackets"));
    let r4 = report("f4_so2.m2g", Suite::Lie);
    let (o4, a4) = (law(&r4, "fields.object-brackets"), law(&r4, "fields.arrow-brackets"));
    let ok = constants_ok
        && residual(o3) <= 1e-4
        && residual(a3) <= 1e-4
        && o3.checked == 4
        && a3.checked == 16
        && residual(o4) <= 1e-8
        && residual(a4) <= 1e-8;
    verdict(
        7,
        ok,
        format!(
            "F3 {:.2e}/{:.2e}, F4 {:.2e}/{:.2e}",
            residual(o3),
            residual(a3),
            residual(o4),
            residual(a4)
        ),
    );
}

#[test]
fn criterion_08_j_inverts_q() {
    let r = report("f3_affine.m2g", Suite::Lie);
    let l = law(&r, "fields.j-inverts-q");
    let ok = residual(l) <= 1e-6 && l.checked == 4 * 64;
    verdict(
        8,
        ok,
        format!("pointwise residual {:.2e} over {} evaluations", residual(l), l.checked),
    );
}

#[test]
fn criterion_09_fixed_points_both_directions() {
    let r = report("f3_affine.m2g", Suite::Invariance);
    let forward = law(&r, "invariance.forward");
    let converse = law(&r, "invariance.converse");
    let moved = law(&r, "invariance.control-not-invariant");
    let unrebuilt = law(&r, "invariance.control-not-reconstructed");
    let control = law(&r, "invariance.control-multiplicative");
    let ok = residual(forward) <= 1e-6
        && residual(converse) <= 1e-5
        && residual(moved) >= 1e-2
        && residual(unrebuilt) > 1e-5
        && control.passed;
    verdict(
        9,
        ok,
        format!(
            "p(a) residual {:.2e}; control moved by {:.2e}, reconstruction gap {:.2e}",
            residual(forward),
            residual(moved),
            residual(unrebuilt)
        ),
    );
}

#[test]
fn criterion_10_limit_factorization() {
    let r = report("f3_affine.m2g", Suite::Limit);
    let rec = law(&r, "limit.reconstruction");
    let map = law(&r, "limit.recovered-map");
    let unique = law(&r, "limit.uniqueness");
    let rejects = law(&r, "limit.rejects-control");
    // Two basis vectors in each degree of the source.
    let ok = residual(rec) <= 1e-6
        && rec.checked == 4
        && residual(map) <= 1e-6
        && violations(unique) == 0
        && violations(rejects) == 0;
    verdict(
        10,
        ok,
        format!(
            "reconstruction {:.2e}, {}, control refused",
            residual(rec),
            unique.detail.as_deref().unwrap_or("")
        ),
    );
}

#[test]
fn criterion_11_numerical_hygiene() {
    let start = Instant::now();
    let mut evaluations = 0;
    let mut ok = true;
    for name in ["f1_z2.cm", "f2_z3_z2.cm", "f3_affine.m2g", "f4_so2.m2g"] {
        let r = report(name, Suite::All);
        ok &= r.passed;
        if let Some(l) = r.law("numerics.richardson") {
            ok &= violations(l) == 0;
            evaluations += l.checked;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    ok &= evaluations > 0 && elapsed < 30.0;
    verdict(
        11,
        ok,
        format!("{evaluations} step-halving checks without failure, all suites in {elapsed:.2} s"),
    );
}
