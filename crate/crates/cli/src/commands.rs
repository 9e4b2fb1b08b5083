//! The subcommands. Each returns `Ok(true)` when all of its checks pass.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use divdiv::assembly::{assemble_hybrid, assemble_mixed, default_quad_degree, Discretization};
use divdiv::biharmonic::{run_case, CaseOptions, ErrorReport, ExactLoad, SinSquared};
use divdiv::complexes::{
    check_commuting_diagram, check_euler_identity, check_global_fem_complex,
    check_local_fem_complexes, check_poly_complexes, check_rotrot_identities, ComplexReport,
};
use divdiv::{mesh_from_spec, DivDivElement, HermiteElement, Point, Triangle, TriMesh};

use crate::config::StudyConfig;
use crate::output::{errors_csv, rates_csv};

/// Largest accepted relative hybrid/mixed deviation.
pub const HYBRID_TOL: f64 = 1e-8;

/// Random triangle with all angles at least 20 degrees.
fn random_triangle(rng: &mut ChaCha8Rng) -> Triangle {
    loop {
        let p: Vec<Point> = (0..3)
            .map(|_| Point::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)))
            .collect();
        let mut t = Triangle::new(p[0], p[1], p[2]);
        if t.signed_area() < 0.0 {
            t = Triangle::new(p[0], p[2], p[1]);
        }
        if t.min_angle() >= 20f64.to_radians() {
            return t;
        }
    }
}

fn stats(mut v: Vec<f64>) -> (f64, f64, f64) {
    v.sort_by(f64::total_cmp);
    (v[0], v[v.len() / 2], v[v.len() - 1])
}

pub fn describe_element(l: usize, k: usize, samples: usize, seed: u64) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tris: Vec<Triangle> = (0..samples.max(1)).map(|_| random_triangle(&mut rng)).collect();
    let mut conds = Vec::new();
    let mut hconds = Vec::new();
    let mut duality: f64 = 0.0;
    let mut first = None;
    for t in &tris {
        let el = DivDivElement::new(*t, l, k)?;
        let herm = HermiteElement::new(*t, l)?;
        conds.push(el.condition_number());
        hconds.push(herm.condition_number());
        duality = duality.max(el.duality_error());
        first.get_or_insert(el);
    }
    let el = first.expect("at least one sample");
    let c = DivDivElement::entity_counts(l, k);
    let hc = HermiteElement::entity_counts(l);
    let mut s = String::new();
    writeln!(s, "div-div element, l = {l}, k = {k}")?;
    writeln!(s, "  shape space: sym curl P_{}(K; R²) ⊕ x xᵀ P_{}(K)", l + 1, k - 2)?;
    writeln!(s, "  dimension: {}", DivDivElement::dimension(l, k))?;
    writeln!(s, "  DOFs per vertex: {} (tensor values)", c.per_vertex)?;
    writeln!(
        s,
        "  DOFs per edge: {} ({} normal-normal moments, {} shear moments)",
        c.per_edge,
        l - 1,
        l
    )?;
    writeln!(
        s,
        "  DOFs per cell: {} ({} against ∇²P_{}, {} against sym(x⊥ ⊗ P_{}))",
        c.per_cell,
        el.num_interior_hess(),
        k - 2,
        c.per_cell - el.num_interior_hess(),
        l - 2
    )?;
    writeln!(s, "  total: 3·{} + 3·{} + {} = {}", c.per_vertex, c.per_edge, c.per_cell, c.total())?;
    writeln!(s, "vector Hermite element V_{}(K)", l + 1)?;
    writeln!(s, "  dimension: {}", HermiteElement::dimension(l))?;
    writeln!(
        s,
        "  DOFs per vertex / edge / cell: {} / {} / {}",
        hc.per_vertex, hc.per_edge, hc.per_cell
    )?;
    let (lo, med, hi) = stats(conds);
    let (hlo, hmed, hhi) = stats(hconds);
    writeln!(s, "conditioning over {} random triangles (seed {seed}, angles ≥ 20°)", tris.len())?;
    writeln!(s, "  div-div DOF matrix: min {lo:.3e}, median {med:.3e}, max {hi:.3e}")?;
    writeln!(s, "  Hermite DOF matrix: min {hlo:.3e}, median {hmed:.3e}, max {hhi:.3e}")?;
    writeln!(s, "  worst duality error: {duality:.3e}")?;
    writeln!(s, "DOF list")?;
    for (i, d) in el.dofs().iter().enumerate() {
        writeln!(s, "  {i:>3}  {d}")?;
    }
    Ok(s)
}

/// Runs every complex check for each `k` in `ks`; with `l = None` both
/// `ℓ = k` and `ℓ = k - 1` are checked.
pub fn verify_complexes(
    ks: &[usize],
    l: Option<usize>,
    mesh: &TriMesh,
    seed: u64,
) -> Result<(String, bool)> {
    let mut out = String::new();
    let mut ok = true;
    let mut emit = |r: ComplexReport| {
        ok &= r.passed();
        out.push_str(&r.to_string());
    };
    emit(check_euler_identity(4, seed));
    for &k in ks {
        if k <= 6 {
            emit(check_poly_complexes(k)?);
        }
        let ls: Vec<usize> = match l {
            Some(l) => vec![l],
            None if k >= 4 => vec![k, k - 1],
            None => vec![k],
        };
        for l in ls {
            emit(check_local_fem_complexes(l, k)?);
            emit(check_global_fem_complex(mesh, l, k)?);
            emit(check_commuting_diagram(mesh, l, k, seed)?.0);
            emit(check_rotrot_identities(l, k, seed)?);
        }
    }
    let verdict = if ok { "all checks passed" } else { "some checks FAILED" };
    writeln!(out, "{verdict}")?;
    Ok((out, ok))
}

/// Writes the assembled system of one mesh in coordinate format.
fn dump_system(mesh: &TriMesh, l: usize, k: usize, hybrid: bool, path: &Path) -> Result<()> {
    let disc = Discretization::new(mesh, l, k)?;
    let f = ExactLoad(&SinSquared);
    let qd = default_quad_degree(l);
    if hybrid {
        assemble_hybrid(&disc, &f, qd)?.write_system(path)?;
    } else {
        assemble_mixed(&disc, &f, qd)?.write_system(path)?;
    }
    Ok(())
}

/// Output of a sequence of solves.
pub struct Runs {
    pub rows: Vec<ErrorReport>,
    pub deviations: Option<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub seconds: Vec<f64>,
}

impl Runs {
    pub fn hybrid_ok(&self) -> bool {
        self.deviations
            .as_ref()
            .is_none_or(|d| d.iter().all(|x| *x <= HYBRID_TOL))
    }
}

pub fn run_meshes(meshes: &[TriMesh], opts: CaseOptions) -> Result<Runs> {
    let mut runs = Runs {
        rows: Vec::new(),
        deviations: opts.compare_hybrid.then(Vec::new),
        residuals: Vec::new(),
        seconds: Vec::new(),
    };
    for mesh in meshes {
        let start = Instant::now();
        let res = run_case(mesh, &SinSquared, opts)?;
        runs.seconds.push(start.elapsed().as_secs_f64());
        runs.residuals.push(res.residual);
        if let (Some(d), Some(dev)) = (runs.deviations.as_mut(), res.hybrid_deviation) {
            d.push(dev.max());
        }
        runs.rows.push(res.report);
    }
    Ok(runs)
}

pub struct SolveArgs {
    pub meshes: Vec<String>,
    pub opts: CaseOptions,
    pub dump_system: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

/// Returns the text for stdout and whether the hybrid comparison passed.
pub fn solve(args: &SolveArgs) -> Result<(String, bool)> {
    let meshes: Vec<TriMesh> = args
        .meshes
        .iter()
        .map(|m| mesh_from_spec(m).with_context(|| format!("loading mesh `{m}`")))
        .collect::<Result<_>>()?;
    if let Some(path) = &args.dump_system {
        for (i, mesh) in meshes.iter().enumerate() {
            let p = if meshes.len() == 1 {
                path.clone()
            } else {
                PathBuf::from(format!("{}.{i}", path.display()))
            };
            dump_system(mesh, args.opts.l, args.opts.k, args.opts.hybrid, &p)?;
        }
    }
    let runs = run_meshes(&meshes, args.opts)?;
    let errors = errors_csv(&runs.rows, runs.deviations.as_deref());
    let rates = rates_csv(&runs.rows);
    let text = match &args.output {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join("errors.csv"), &errors)?;
            fs::write(dir.join("rates.csv"), &rates)?;
            format!("wrote {} and {}\n", dir.join("errors.csv").display(), dir.join("rates.csv").display())
        }
        None if runs.rows.len() > 1 => format!("{errors}\n{rates}"),
        None => errors,
    };
    Ok((text, runs.hybrid_ok()))
}

/// Runs a study and writes `errors.csv`, `rates.csv`, `manifest.txt` and,
/// when enabled, `complexes.txt` into the output directory.
pub fn study(cfg: &StudyConfig) -> Result<(String, bool)> {
    cfg.validate()?;
    let meshes: Vec<TriMesh> = cfg.levels.iter().map(|&n| cfg.mesh.mesh(n)).collect::<Result<_>>()?;
    let opts = CaseOptions {
        l: cfg.l,
        k: cfg.k,
        hybrid: cfg.hybrid,
        postprocess: cfg.postprocess,
        compare_hybrid: cfg.compare_hybrid,
    };
    let runs = run_meshes(&meshes, opts)?;
    let dir = &cfg.output;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    fs::write(dir.join("errors.csv"), errors_csv(&runs.rows, runs.deviations.as_deref()))?;
    fs::write(dir.join("rates.csv"), rates_csv(&runs.rows))?;

    let mut failures = Vec::new();
    if !runs.hybrid_ok() {
        failures.push(format!("hybrid/mixed deviation above {HYBRID_TOL:e}"));
    }
    if cfg.complexes {
        let small = divdiv::structured_unit_square(2)?;
        let (report, ok) = verify_complexes(&[cfg.k], Some(cfg.l), &small, cfg.seed)?;
        fs::write(dir.join("complexes.txt"), report)?;
        if !ok {
            failures.push("complex verification".to_string());
        }
    }

    let mut m = String::new();
    writeln!(m, "divdiv {}", divdiv::VERSION)?;
    writeln!(m, "seed = {}", cfg.seed)?;
    writeln!(m, "[config]")?;
    writeln!(m, "{cfg}")?;
    writeln!(m, "[levels]")?;
    for (i, &n) in cfg.levels.iter().enumerate() {
        writeln!(
            m,
            "{}: {} triangles, {} unknowns, solve residual {:.3e}, {:.2} s",
            cfg.mesh.label(n),
            meshes[i].num_cells(),
            runs.rows[i].dofs,
            runs.residuals[i],
            runs.seconds[i]
        )?;
    }
    writeln!(m, "[checks]")?;
    if failures.is_empty() {
        writeln!(m, "all enabled checks passed")?;
    } else {
        for f in &failures {
            writeln!(m, "FAILED: {f}")?;
        }
    }
    fs::write(dir.join("manifest.txt"), &m)?;

    let mut text = format!("wrote errors.csv, rates.csv and manifest.txt to {}\n", dir.display());
    text.push_str(&rates_csv(&runs.rows));
    for f in &failures {
        writeln!(text, "check failed: {f}")?;
    }
    Ok((text, failures.is_empty()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_card_lists_counts() {
        let card = describe_element(3, 3, 3, 1).unwrap();
        assert!(card.contains("dimension: 30"));
        assert!(card.contains("DOFs per edge: 5 (2 normal-normal moments, 3 shear moments)"));
        assert!(card.contains("DOFs per cell: 6"));
    }

    #[test]
    fn verify_small_case_passes() {
        let mesh = divdiv::structured_unit_square(1).unwrap();
        let (text, ok) = verify_complexes(&[3], None, &mesh, 2).unwrap();
        assert!(ok, "{text}");
        assert!(text.ends_with("all checks passed\n"));
    }
}
