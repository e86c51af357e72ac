use std::fs;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use parc_core::BrasResult;
use parc_polytope::{project, tolerances, vertex_enumeration, AffineMap, HPolytope, PolytopeError};

use super::sample::PlanFile;
use super::system::{build_system, load_scenario};
use crate::cli::PlotArgs;
use crate::error::{CliError, Result};
use crate::io::read_json;

/// Projection of `p` onto coordinates `(i, j)`, clipped to the world box.
pub fn project_pair(p: &HPolytope, i: usize, j: usize) -> Result<HPolytope> {
    let n = p.dim();
    let mut order = vec![i, j];
    order.extend((0..n).filter(|&c| c != i && c != j));
    let mut pi = DMatrix::zeros(n, n);
    for (col, &row) in order.iter().enumerate() {
        pi[(row, col)] = 1.0;
    }
    let permuted = p.clip(tolerances().world).inverse_affine_map(&AffineMap::new(pi, DVector::zeros(n))?)?;
    Ok(project(&permuted, 0..2)?)
}

/// Vertices of a 2-D polytope in counterclockwise order, first vertex
/// repeated at the end. Empty for an empty set.
pub fn ring(p: &HPolytope) -> Result<Vec<[f64; 2]>> {
    let verts = match vertex_enumeration(p) {
        Ok(v) => v.into_vertices(),
        Err(PolytopeError::Empty) => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let m = verts.len() as f64;
    let cx = verts.iter().map(|v| v[0]).sum::<f64>() / m;
    let cy = verts.iter().map(|v| v[1]).sum::<f64>() / m;
    let mut pts: Vec<[f64; 2]> = verts.iter().map(|v| [v[0], v[1]]).collect();
    pts.sort_by(|a, b| {
        let ta = (a[1] - cy).atan2(a[0] - cx);
        let tb = (b[1] - cy).atan2(b[0] - cx);
        ta.total_cmp(&tb)
    });
    pts.push(pts[0]);
    Ok(pts)
}

fn write_ring(path: &Path, p: &HPolytope, dims: (usize, usize)) -> Result<usize> {
    let pts = ring(&project_pair(p, dims.0, dims.1)?)?;
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["x", "y"])?;
    for [x, y] in &pts {
        w.write_record([x.to_string(), y.to_string()])?;
    }
    w.flush().map_err(|source| CliError::Write { path: path.into(), source })?;
    Ok(pts.len())
}

fn write_plans(args: &PlotArgs, n: usize, dims: (usize, usize)) -> Result<()> {
    let (Some(plans), Some(scenario)) = (&args.plans, &args.scenario) else {
        return Ok(());
    };
    let scenario = load_scenario(scenario, None)?;
    let system = build_system(&scenario, &args.model, args.dt, args.grid.as_deref())?;
    if system.layout().total() != n {
        return Err(CliError::Usage("plans and result dimensions differ".into()));
    }
    let file: PlanFile = read_json(plans)?;
    for (k, plan) in file.plans.iter().enumerate() {
        let x0 = DVector::from_column_slice(&plan.x0);
        if x0.len() != n {
            return Err(CliError::Usage(format!("plan {k} has {} entries, expected {n}", x0.len())));
        }
        let rollout = system.rollout(&x0, args.substeps)?;
        let path = args.out.join(format!("plan_{k}.csv"));
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(["t", "x", "y"])?;
        for (t, x) in &rollout.samples {
            w.write_record([t.to_string(), x[dims.0].to_string(), x[dims.1].to_string()])?;
        }
        w.flush().map_err(|source| CliError::Write { path: path.clone(), source })?;
    }
    println!("wrote {} plan trajectories", file.plans.len());
    Ok(())
}

pub fn plotdata(args: PlotArgs) -> Result<()> {
    let result: BrasResult = read_json(&args.result)?;
    let n = result.reach.dim();
    let dims = match args.dims.as_slice() {
        &[i, j] if i != j && i < n && j < n => (i, j),
        _ => {
            return Err(CliError::Usage(format!(
                "--dims needs two distinct coordinates below {n}, got {:?}",
                args.dims
            )))
        }
    };
    fs::create_dir_all(&args.out).map_err(|source| CliError::Write { path: args.out.clone(), source })?;
    let reach = if result.empty { HPolytope::empty(n) } else { result.reach.clone() };
    write_ring(&args.out.join("reach.csv"), &reach, dims)?;
    for (t, set) in result.reach_chain.iter().enumerate() {
        write_ring(&args.out.join(format!("chain_{t}.csv")), set, dims)?;
    }
    for a in &result.avoid {
        write_ring(&args.out.join(format!("avoid_{}_{}.csv", a.obstacle, a.t)), &a.set, dims)?;
    }
    println!(
        "wrote {} set projections to {}",
        1 + result.reach_chain.len() + result.avoid.len(),
        args.out.display()
    );
    write_plans(&args, n, dims)
}
