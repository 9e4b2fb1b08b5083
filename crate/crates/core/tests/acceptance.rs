//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test -p divdiv --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use divdiv::biharmonic::{report_rates, run_case, CaseOptions, ErrorReport, SinSquared};
use divdiv::complexes::{
    check_commuting_diagram, check_euler_identity, check_global_fem_complex, check_poly_complexes,
    check_rotrot_identities, ComplexReport,
};
use divdiv::{structured_unit_square, DivDivElement, Point, Result, Triangle};

const DUALITY_TOL: f64 = 1e-8;
const UNISOLVENCE_SECONDS: f64 = 30.0;
const COMMUTING_TOL: f64 = 1e-9;
const HYBRID_TOL: f64 = 1e-8;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn failures(r: &ComplexReport) -> String {
    r.failures()
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Random triangle with all angles at least 20 degrees and diameter
/// between 1e-2 and 3.
fn shape_regular_triangle(rng: &mut ChaCha8Rng) -> Triangle {
    loop {
        let scale = 10f64.powf(rng.gen_range(-2.0..0.5));
        let shift = Point::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let mut p = [Point::zeros(); 3];
        for q in &mut p {
            *q = shift + Point::new(rng.gen_range(0.0..scale), rng.gen_range(0.0..scale));
        }
        let mut t = Triangle::new(p[0], p[1], p[2]);
        if t.signed_area() < 0.0 {
            t = Triangle::new(p[0], p[2], p[1]);
        }
        if t.min_angle() >= 20f64.to_radians() {
            return t;
        }
    }
}

fn unisolvence() -> Result<Outcome> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let tris: Vec<Triangle> = (0..20).map(|_| shape_regular_triangle(&mut rng)).collect();
    let mut worst: f64 = 0.0;
    for (l, k) in [(2, 3), (3, 3), (3, 4), (4, 4)] {
        for t in &tris {
            worst = worst.max(DivDivElement::new(*t, l, k)?.duality_error());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(outcome(
        worst <= DUALITY_TOL && secs < UNISOLVENCE_SECONDS,
        format!("worst duality error {worst:.2e} (≤ {DUALITY_TOL:.0e}), {secs:.1} s (< {UNISOLVENCE_SECONDS} s)"),
    ))
}

fn poly_complexes() -> Result<Outcome> {
    let mut bad = Vec::new();
    let mut checks = 0;
    for k in 3..=6 {
        let r = check_poly_complexes(k)?;
        checks += r.checks.len();
        if !r.passed() {
            bad.push(failures(&r));
        }
    }
    let e = check_euler_identity(4, 7);
    checks += e.checks.len();
    if !e.passed() {
        bad.push(failures(&e));
    }
    Ok(outcome(
        bad.is_empty(),
        if bad.is_empty() {
            format!("{checks} rank, dimension and identity checks for k = 3..6")
        } else {
            bad.join(" | ")
        },
    ))
}

fn commuting() -> Result<Outcome> {
    let mesh = structured_unit_square(4)?;
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for (l, k) in [(3, 3), (2, 3), (3, 4)] {
        let (r, res) = check_commuting_diagram(&mesh, l, k, 17)?;
        worst = worst.max(res.divdiv_max_cell).max(res.symcurl_max_cell);
        if !r.passed() {
            bad.push(failures(&r));
        }
    }
    Ok(outcome(
        bad.is_empty() && worst <= COMMUTING_TOL,
        format!("square:4, worst relative residual {worst:.2e} (≤ {COMMUTING_TOL:.0e}) {}", bad.join(" | ")),
    ))
}

fn global_complex() -> Result<Outcome> {
    let r = check_global_fem_complex(&structured_unit_square(2)?, 3, 3)?;
    let dd = r
        .arrows
        .iter()
        .find(|a| a.name.starts_with("div div"))
        .expect("div div arrow");
    let sc = r
        .arrows
        .iter()
        .find(|a| a.name.starts_with("sym curl"))
        .expect("sym curl arrow");
    let ok = r.passed() && dd.domain_dim == 155 && dd.rank == 24 && dd.kernel_dim == sc.rank;
    Ok(outcome(
        ok,
        format!(
            "dim Σ_h = {}, rank div div = {}, kernel = {}, rank sym curl = {} {}",
            dd.domain_dim,
            dd.rank,
            dd.kernel_dim,
            sc.rank,
            failures(&r)
        ),
    ))
}

type Rates = Vec<[Option<f64>; 6]>;

fn study(l: usize, k: usize, postprocess: bool) -> Result<(Vec<ErrorReport>, Rates)> {
    let mut rows = Vec::new();
    for n in [4, 8, 16] {
        let mesh = structured_unit_square(n)?;
        let opts = CaseOptions {
            l,
            k,
            hybrid: false,
            postprocess,
            compare_hybrid: false,
        };
        rows.push(run_case(&mesh, &SinSquared, opts)?.report);
    }
    let rates = report_rates(&rows);
    Ok((rows, rates))
}

fn in_band(rate: Option<f64>, lo: f64, hi: f64) -> bool {
    rate.is_some_and(|r| (lo..=hi).contains(&r))
}

fn fmt_rate(r: Option<f64>) -> String {
    r.map_or("n/a".into(), |r| format!("{r:.2}"))
}

fn hybrid() -> Result<Outcome> {
    let mesh = structured_unit_square(4)?;
    let opts = CaseOptions {
        l: 3,
        k: 3,
        hybrid: true,
        postprocess: false,
        compare_hybrid: true,
    };
    let res = run_case(&mesh, &SinSquared, opts)?;
    let dev = res.hybrid_deviation.expect("comparison requested");
    let disc = divdiv::assembly::Discretization::new(&mesh, 3, 3)?;
    let zero = divdiv::fields::FnScalar(|_| 0.0);
    let sol = divdiv::biharmonic::solve_hybrid(&disc, &zero, divdiv::assembly::default_quad_degree(3))?;
    let lambda_zero = !sol.lambda.is_empty() && sol.lambda.iter().all(|v| *v == 0.0);
    Ok(outcome(
        dev.sigma_l2 <= HYBRID_TOL && dev.u_l2 <= HYBRID_TOL && lambda_zero,
        format!(
            "square:4, relative σ deviation {:.2e}, u deviation {:.2e} (≤ {HYBRID_TOL:.0e}), λ_h = 0 for f = 0: {lambda_zero}",
            dev.sigma_l2, dev.u_l2
        ),
    ))
}

fn rotrot() -> Result<Outcome> {
    let mut bad = Vec::new();
    let mut checks = 0;
    for (l, k) in [(2, 3), (3, 3), (3, 4), (4, 4)] {
        let r = check_rotrot_identities(l, k, 23)?;
        checks += r.checks.len();
        if !r.passed() {
            bad.push(failures(&r));
        }
    }
    Ok(outcome(
        bad.is_empty(),
        if bad.is_empty() {
            format!("{checks} identities at tolerance 1e-10 (basis duality 1e-8)")
        } else {
            bad.join(" | ")
        },
    ))
}

fn report(n: usize, name: &str, r: Result<Outcome>, all: &mut bool) {
    let o = r.unwrap_or_else(|e| outcome(false, format!("error: {e}")));
    *all &= o.passed;
    let tag = if o.passed { "PASS" } else { "FAIL" };
    println!("[{tag}] {n:>2} {name}: {}", o.detail);
}

fn main() -> ExitCode {
    let mut all = true;
    report(1, "unisolvence on 20 random triangles", unisolvence(), &mut all);
    report(2, "polynomial complexes", poly_complexes(), &mut all);
    report(3, "commuting diagram", commuting(), &mut all);
    report(4, "global complex", global_complex(), &mut all);

    let start = Instant::now();
    match study(3, 3, true) {
        Ok((_, rates)) => {
            let last = rates.last().copied().unwrap_or([None; 6]);
            let secs = start.elapsed().as_secs_f64();
            let ok5 = in_band(last[0], 3.8, 4.2)
                && in_band(last[3], 3.8, 4.2)
                && in_band(last[2], 1.8, 2.2)
                && in_band(last[1], 1.8, 2.2);
            report(
                5,
                "convergence rates, l = k = 3",
                Ok(outcome(
                    ok5,
                    format!(
                        "square:8→16 rates σ {} Q_h u {} (in [3.8, 4.2]), u {} div div {} (in [1.8, 2.2]), {secs:.1} s",
                        fmt_rate(last[0]),
                        fmt_rate(last[3]),
                        fmt_rate(last[2]),
                        fmt_rate(last[1])
                    ),
                )),
                &mut all,
            );
            report(
                6,
                "superconvergence",
                Ok(outcome(
                    in_band(last[4], 3.8, 4.2),
                    format!("|Q_h u - u_h|_2,h rate {} (in [3.8, 4.2])", fmt_rate(last[4])),
                )),
                &mut all,
            );
            report(
                7,
                "postprocessing",
                Ok(outcome(
                    in_band(last[5], 3.8, 4.2),
                    format!("|u - u*_h|_2,h rate {} (in [3.8, 4.2])", fmt_rate(last[5])),
                )),
                &mut all,
            );
        }
        Err(e) => {
            for (n, name) in [(5, "convergence rates"), (6, "superconvergence"), (7, "postprocessing")] {
                report(n, name, Ok(outcome(false, format!("error: {e}"))), &mut all);
            }
        }
    }
    let rt = study(2, 3, false).map(|(_, rates)| {
        let r = rates.last().copied().unwrap_or([None; 6])[0];
        outcome(
            in_band(r, 2.8, 3.2),
            format!("l = 2, k = 3, square:8→16 σ rate {} (in [2.8, 3.2])", fmt_rate(r)),
        )
    });
    report(8, "reduced element stress rate", rt, &mut all);
    report(9, "hybridization equivalence", hybrid(), &mut all);
    report(10, "rot-rot conjugation", rotrot(), &mut all);

    if all {
        println!("all acceptance criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("some acceptance criteria failed");
        ExitCode::FAILURE
    }
}
