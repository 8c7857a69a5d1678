use anyhow::{anyhow, Context};
use isopair_core::dilation::{reconstruct_and_certify, reconstruct_from_measure, Certification, ReconstructOptions};
use isopair_core::instance::{samples_sampler, GRID_SIZES};
use isopair_core::iso::{build_theta, godic_lucenko_factor, svu_membership, IsoUnitaryPair, IsoUnitaryResolvent};
use isopair_core::linalg::conjugation::symmetry_residual;
use isopair_core::linalg::matrix::basis_vector;
use isopair_core::linalg::unitary::unitarity_residual;
use isopair_core::linalg::{identity, orthonormalize, CMatrix, CVector, UnitaryOperator, C64};
use isopair_core::moments::MeasureResolvent;
use isopair_core::pair::h2::{check_h2_table, PairTable, H2_TOL};
use isopair_core::pair::{extended_eval, verify_theorem_3_1, verify_theorem_3_2, PairSampler};
use isopair_core::single::{
    verify_theorem_1_2, verify_theorem_1_3, ChumakinSampler, FnSampler, PartialIsometry, SchurParameter,
};
use isopair_core::{generate, tol, Error, Instance, InstanceSpec, SampleGrid};
use serde_json::json;

use crate::io::{emit, parse_entry, parse_point, read_instance, read_matrix, read_phi, to_json};
use crate::report::{input, run_err, CmdResult, ReportBuilder};
use crate::{Cli, Command, Theorem};

const DEFAULT_GRID: usize = 4;
const DEFAULT_SEED: u64 = 0;

/// Returns whether every check passed.
pub fn run(cli: &Cli) -> CmdResult<bool> {
    match &cli.command {
        Command::Generate { kind, dim, big_dim } => {
            let spec = InstanceSpec {
                seed: cli.seed.unwrap_or(DEFAULT_SEED),
                dim: *dim,
                big_dim: *big_dim,
                grid_n: cli.grid.unwrap_or(DEFAULT_GRID),
                kind: (*kind).into(),
            };
            let inst = generate(&spec).map_err(|e| match e {
                Error::InvalidSpec(_) => input(e),
                other => run_err(other),
            })?;
            // Tabulated samples run to megabytes; keep them compact.
            let text = match inst {
                Instance::ResolventSamples { .. } => serde_json::to_string(&inst).map_err(run_err)? + "\n",
                _ => to_json(&inst).map_err(run_err)?,
            };
            write(cli, &text)?;
            Ok(true)
        }
        Command::Verify { file, theorem, phi_file } => {
            let inst = read_instance(file)?;
            let phi = read_phi(phi_file.as_deref())?;
            verify(cli, &inst, *theorem, phi)
        }
        Command::Reconstruct { file, dilation_out } => {
            let inst = read_instance(file)?;
            reconstruct(cli, &inst, dilation_out.as_deref())
        }
        Command::Factor { file } => factor(cli, read_matrix(file)?),
        Command::Sample { file, entry, phi_file } => {
            let inst = read_instance(file)?;
            let phi = read_phi(phi_file.as_deref())?;
            let entry = parse_entry(entry).map_err(input)?;
            sample(cli, &inst, phi, entry)
        }
        Command::Frame { file } => frame(cli, &read_instance(file)?),
        Command::Resolvent { file, z1, z2, phi_file } => {
            let inst = read_instance(file)?;
            let phi = read_phi(phi_file.as_deref())?;
            let z1 = parse_point(z1).map_err(input)?;
            let z2 = parse_point(z2).map_err(input)?;
            let s = pair_sampler(&inst, phi)?;
            let value = extended_eval(s.as_ref(), z1, z2).map_err(|e| match e {
                Error::UnitModulusArgument(_) => input(e),
                other => run_err(other),
            })?;
            let rows = isopair_core::linalg::json::matrix_to_rows(&value);
            write(cli, &to_json(&rows).map_err(run_err)?)?;
            Ok(true)
        }
    }
}

fn write(cli: &Cli, text: &str) -> CmdResult<()> {
    emit(cli.out.as_deref(), text).map_err(run_err)
}

fn finish(cli: &Cli, b: ReportBuilder) -> CmdResult<bool> {
    let report = b.finish();
    write(cli, &to_json(&report).map_err(run_err)?)?;
    Ok(report.overall_pass)
}

fn zero_parameter(pair: &IsoUnitaryPair) -> SchurParameter {
    SchurParameter::zero(pair.v().defect_domain(), pair.v().defect_range())
}

fn iso_resolvent(pair: &IsoUnitaryPair, phi: Option<SchurParameter>) -> CmdResult<IsoUnitaryResolvent> {
    let phi = phi.unwrap_or_else(|| zero_parameter(pair));
    IsoUnitaryResolvent::new(pair.clone(), phi, &SampleGrid::default()).map_err(|e| match e {
        Error::Shape(_) => input(e),
        other => run_err(other),
    })
}

/// The two-variable function an instance stands for. Iso-unitary instances
/// use `--phi-file`, or the zero parameter.
fn pair_sampler(inst: &Instance, phi: Option<SchurParameter>) -> CmdResult<Box<dyn PairSampler>> {
    if phi.is_some() && !matches!(inst, Instance::IsoUnitary { .. }) {
        return Err(input(anyhow!("--phi-file applies to iso-unitary instances only")));
    }
    Ok(match inst {
        Instance::Pair { pair, .. } => Box::new(pair.clone()),
        Instance::IsoUnitary { pair, .. } => Box::new(iso_resolvent(pair, phi)?),
        Instance::Measure { measure, .. } => Box::new(MeasureResolvent(measure.clone())),
        Instance::ResolventSamples { dim, samples, .. } => Box::new(samples_sampler(*dim, samples).map_err(input)?),
    })
}

type BoxedSingle = FnSampler<Box<dyn Fn(C64) -> isopair_core::Result<CMatrix> + Sync>>;

/// A one-variable resolvent and the isometry it belongs to. For pair-type
/// instances this is `½(I + R_{ζ,0})`, a generalized resolvent of the trivial
/// isometry; for iso-unitary instances it is the Chumakin resolvent of `V`.
fn single_sampler(inst: &Instance, phi: Option<SchurParameter>) -> CmdResult<(BoxedSingle, PartialIsometry)> {
    match inst {
        Instance::ResolventSamples { .. } => Err(input(anyhow!(
            "tabulated samples do not cover the single-variable verification points"
        ))),
        Instance::IsoUnitary { pair, .. } => {
            let phi = phi.unwrap_or_else(|| zero_parameter(pair));
            let s = ChumakinSampler::new(pair.v().clone(), phi).map_err(input)?;
            let n = pair.dim();
            let f: Box<dyn Fn(C64) -> isopair_core::Result<CMatrix> + Sync> =
                Box::new(move |z| isopair_core::single::ResolventSampler::resolvent(&s, z));
            Ok((FnSampler::new(n, f), pair.v().clone()))
        }
        _ => {
            let s = pair_sampler(inst, phi)?;
            let n = s.dim();
            let f: Box<dyn Fn(C64) -> isopair_core::Result<CMatrix> + Sync> =
                Box::new(move |z| Ok((identity(n) + s.eval(z, C64::new(0.0, 0.0))?).scale(0.5)));
            Ok((FnSampler::new(n, f), PartialIsometry::trivial(n)))
        }
    }
}

fn verify(cli: &Cli, inst: &Instance, theorem: Theorem, phi: Option<SchurParameter>) -> CmdResult<bool> {
    let grid = SampleGrid::default();
    let mut b = ReportBuilder::new(&format!("verify-{theorem:?}").to_lowercase(), cli.tol);
    b.instance(inst.spec());
    match theorem {
        Theorem::T12 => {
            let (r, v) = single_sampler(inst, phi)?;
            let zeta0 = C64::new(0.5, 0.0);
            let l = orthonormalize(&(v.domain().basis() - v.action() * zeta0));
            b.report("", &verify_theorem_1_2(&r, zeta0, &l, &grid));
        }
        Theorem::T13 => {
            let (r, v) = single_sampler(inst, phi)?;
            b.report("", &verify_theorem_1_3(&v, &r, &grid));
        }
        Theorem::T31 => {
            let s = pair_sampler(inst, phi)?;
            b.report("", &verify_theorem_3_1(s.as_ref(), &grid));
        }
        Theorem::T32 => {
            let s = pair_sampler(inst, phi)?;
            let (v1, v2) = match inst {
                Instance::IsoUnitary { pair, .. } => (pair.v().clone(), PartialIsometry::from_unitary(pair.u())),
                _ => (PartialIsometry::trivial(s.dim()), PartialIsometry::trivial(s.dim())),
            };
            let rep = verify_theorem_3_2(&v1, &v2, s.as_ref(), &grid).map_err(input)?;
            b.report("", &rep);
        }
        Theorem::H2 => {
            let s = pair_sampler(inst, phi)?;
            match PairTable::build(s.as_ref(), &grid) {
                Ok(table) => {
                    for (name, h) in h2_vectors(s.dim()) {
                        let rep = check_h2_table(&table.quadratic(&h), &table.points, &grid);
                        b.check(format!("{name}-a"), rep.condition_a_residual, H2_TOL);
                        b.check(format!("{name}-b"), (-rep.condition_b_min).max(0.0), H2_TOL);
                        b.check(format!("{name}-c"), rep.condition_c_residual, H2_TOL);
                    }
                }
                Err(e) => {
                    b.check("table", f64::INFINITY, H2_TOL);
                    b.message(e.to_string());
                }
            }
        }
    }
    finish(cli, b)
}

/// The standard basis and the normalized sum of all basis vectors.
fn h2_vectors(n: usize) -> Vec<(String, CVector)> {
    let mut out: Vec<(String, CVector)> = (0..n).map(|i| (format!("e{i}"), basis_vector(n, i))).collect();
    if n > 1 {
        let s = CVector::from_element(n, C64::new(1.0 / (n as f64).sqrt(), 0.0));
        out.push(("sum".into(), s));
    }
    out
}

fn reconstruct(cli: &Cli, inst: &Instance, dilation_out: Option<&std::path::Path>) -> CmdResult<bool> {
    let n = cli
        .grid
        .or_else(|| inst.spec().map(|s| s.grid_n))
        .unwrap_or(DEFAULT_GRID);
    if !GRID_SIZES.contains(&n) {
        return Err(input(anyhow!("grid size must be one of {GRID_SIZES:?}, got {n}")));
    }
    let opts = ReconstructOptions {
        minimal: cli.minimal,
        tolerance: cli.tol.unwrap_or(tol::CERTIFY),
        ..Default::default()
    };
    let mut b = ReportBuilder::new("reconstruct", None);
    b.instance(inst.spec());
    let outcome = match inst {
        Instance::Measure { measure, .. } => {
            if cli.grid.is_some_and(|g| g != measure.n1() || g != measure.n2()) {
                return Err(input(anyhow!(
                    "measure lives on a {}×{} grid",
                    measure.n1(),
                    measure.n2()
                )));
            }
            reconstruct_from_measure(measure, &opts)
        }
        _ => {
            let s = pair_sampler(inst, None)?;
            reconstruct_and_certify(s.as_ref(), n, n, &opts)
        }
    };
    match outcome {
        Ok(cert) => {
            record_certification(&mut b, &cert);
            if let Some(path) = dilation_out {
                emit(Some(path), &to_json(&cert.dilation).map_err(run_err)?).map_err(run_err)?;
            }
            b.output(json!({
                "certification": cert,
                "pair": cert.pair,
            }));
        }
        Err(e @ (Error::NegativeAtom { .. } | Error::NotNormalized(_) | Error::NotAResolvent(_))) => {
            b.check("reproduction", f64::INFINITY, opts.tolerance);
            b.message(e.to_string());
            b.output(json!({ "refinement_hint": 2 * n }));
        }
        Err(e) => return Err(run_err(e)),
    }
    finish(cli, b)
}

fn record_certification(b: &mut ReportBuilder, cert: &Certification) {
    b.check("reproduction", cert.residual, cert.tolerance);
    b.check("commutator", cert.commutator, tol::COMMUTE);
    if let Some(h) = cert.refinement_hint {
        b.message(format!("reproduction residual too large; try --grid {h}"));
    }
}

fn factor(cli: &Cli, m: CMatrix) -> CmdResult<bool> {
    if !m.is_square() {
        return Err(input(anyhow!("matrix is {}×{}, not square", m.nrows(), m.ncols())));
    }
    let u = UnitaryOperator::new(m).context("input is not unitary").map_err(input)?;
    let (k, l) = godic_lucenko_factor(&u);
    let mut b = ReportBuilder::new("factor", cli.tol);
    b.check("factor", isopair_core::iso::factor_residual(&u, &k, &l), tol::ORTHO);
    for (name, c) in [("K", &k), ("L", &l)] {
        b.check(format!("{name}-symmetric"), symmetry_residual(c.matrix()), tol::ORTHO);
        b.check(format!("{name}-unitary"), unitarity_residual(c.matrix()), tol::ORTHO);
        b.check(format!("{name}-involution"), c.involution_residual(), tol::ORTHO);
    }
    b.output(json!({ "K": k, "L": l }));
    finish(cli, b)
}

fn frame(cli: &Cli, inst: &Instance) -> CmdResult<bool> {
    let Instance::IsoUnitary { pair, j, .. } = inst else {
        return Err(input(anyhow!("the frame needs an iso-unitary instance")));
    };
    let mut b = ReportBuilder::new("frame", cli.tol);
    b.instance(inst.spec());
    match build_theta(pair, j) {
        Ok(f) => {
            b.check("factor", f.factor_residual(), tol::ORTHO);
            b.check("intertwining", f.intertwining_residual(), tol::ORTHO);
            b.check("inverse", f.inverse_residual(), tol::ORTHO);
            let zero = zero_parameter(pair);
            match svu_membership(pair, &zero, &SampleGrid::default()) {
                Ok(r) => b.check("zero-parameter", r, tol::SVU),
                Err(e) => {
                    b.check("zero-parameter", f64::INFINITY, tol::SVU);
                    b.message(e.to_string());
                }
            }
            b.output(serde_json::to_value(&f).map_err(run_err)?);
        }
        Err(e @ Error::FrameMismatch(_)) => {
            b.check("frame", f64::INFINITY, tol::ORTHO);
            b.message(e.to_string());
        }
        Err(e) => return Err(run_err(e)),
    }
    finish(cli, b)
}

fn sample(cli: &Cli, inst: &Instance, phi: Option<SchurParameter>, (i, j): (usize, usize)) -> CmdResult<bool> {
    let s = pair_sampler(inst, phi)?;
    if i >= s.dim() || j >= s.dim() {
        return Err(input(anyhow!("entry ({i}, {j}) outside a {0}×{0} matrix", s.dim())));
    }
    let pts = SampleGrid::default().pair_points().points;
    let mut csv = String::from("re_z1,im_z1,re_z2,im_z2,re_f,im_f\n");
    let coords = |z: isopair_core::linalg::ExtPoint| match z.finite() {
        Some(w) => (w.re, w.im),
        None => (f64::INFINITY, 0.0),
    };
    for &a in &pts {
        for &c in &pts {
            let v = extended_eval(s.as_ref(), a, c)
                .with_context(|| format!("evaluating at ({a:?}, {c:?})"))
                .map_err(run_err)?[(i, j)];
            let (x1, y1) = coords(a);
            let (x2, y2) = coords(c);
            csv.push_str(&format!("{x1:e},{y1:e},{x2:e},{y2:e},{:e},{:e}\n", v.re, v.im));
        }
    }
    write(cli, &csv)?;
    Ok(true)
}
