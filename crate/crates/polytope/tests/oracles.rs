mod common;

use common::*;
use nalgebra::{dmatrix, dvector, DMatrix, DVector};
use parc_polytope::*;
use rand::Rng;

fn bx(lo: &[f64], hi: &[f64]) -> HPolytope {
    HPolytope::from_bounds(lo, hi).unwrap()
}

fn triangle() -> HPolytope {
    HPolytope::from_rows(
        2,
        &[(vec![-1.0, 0.0], 0.0), (vec![0.0, -1.0], 0.0), (vec![1.0, 1.0], 1.0)],
    )
    .unwrap()
}

#[test]
fn minkowski_triangle_box_matches_grid_lp_oracle() {
    let tri = triangle();
    let q = bx(&[-0.1, -0.1], &[0.1, 0.1]);
    let sum = minkowski_sum(&tri, &q).unwrap();
    let mut checked = 0;
    for i in 0..100 {
        for j in 0..100 {
            let x = dvector![-0.3 + 1.6 * i as f64 / 99.0, -0.3 + 1.6 * j as f64 / 99.0];
            let viol = sum.max_violation(&x).unwrap();
            if viol.abs() <= 1e-7 {
                continue;
            }
            // p ∈ tri and x - p ∈ q
            let m = DMatrix::from_fn(tri.num_constraints() + q.num_constraints(), 2, |r, c| {
                if r < tri.num_constraints() {
                    tri.a()[(r, c)]
                } else {
                    -q.a()[(r - tri.num_constraints(), c)]
                }
            });
            let mut rhs = DVector::zeros(m.nrows());
            rhs.rows_mut(0, tri.num_constraints()).copy_from(tri.b());
            let qr = q.b() - q.a() * &x;
            rhs.rows_mut(tri.num_constraints(), q.num_constraints()).copy_from(&qr);
            assert_eq!(viol < 0.0, feasible(m, rhs), "grid point {x}");
            checked += 1;
        }
    }
    assert!(checked > 9000);
}

#[test]
fn pontryagin_octagon_vertex_shift() {
    let p = bx(&[-1.0, -1.0], &[1.0, 1.0]);
    let verts: Vec<DVector<f64>> = (0..8)
        .map(|k| {
            let a = std::f64::consts::PI * k as f64 / 4.0;
            dvector![0.5 * a.cos(), 0.5 * a.sin()]
        })
        .collect();
    let oct = hull_from_points(&verts).unwrap();
    let d = pontryagin_diff(&p, &oct).unwrap();
    for x in sample_interior(&d, 500, 1).unwrap() {
        for q in &verts {
            assert!(p.contains(&(&x + q), 1e-9).unwrap());
        }
    }
    let (_, r) = d.chebyshev_center().unwrap().unwrap();
    assert!((r - 0.5).abs() < 1e-9);
}

#[test]
fn product_examples() {
    let p = bx(&[0.0], &[1.0]).cartesian_product(&bx(&[2.0], &[3.0]));
    assert_eq!(p.as_box().unwrap(), (vec![0.0, 2.0], vec![1.0, 3.0]));
    let t = triangle();
    assert_eq!(t.cartesian_product(&HPolytope::universe(0)), t);
    let prism = t.cartesian_product(&bx(&[-1.0], &[1.0]));
    assert_eq!(vertex_enumeration(&prism).unwrap().len(), 6);
}

#[test]
fn hull_of_shifted_squares_matches_combination_lp() {
    let p = bx(&[0.0, 0.0], &[1.0, 1.0]);
    let q = bx(&[3.0, 3.0], &[4.0, 4.0]);
    let h = convex_hull_pair(&p, &q).unwrap();
    let mut pts = vertex_enumeration(&p).unwrap().into_vertices();
    pts.extend(vertex_enumeration(&q).unwrap().into_vertices());
    for x in [dvector![2.0, 2.0], dvector![0.0, 3.0]] {
        assert_eq!(h.contains_point(&x).unwrap(), in_convex_combination(&pts, &x));
    }
    assert!(h.contains_point(&dvector![2.0, 2.0]).unwrap());
    assert!(!h.contains_point(&dvector![0.0, 3.0]).unwrap());
    // every hull vertex is a vertex of an operand
    for v in vertex_enumeration(&h).unwrap().vertices() {
        assert!(pts.iter().any(|w| (w - v).amax() < 1e-9));
    }
}

#[test]
fn random_4d_projection_matches_projected_vertices() {
    let mut r = rng(11);
    for _ in 0..5 {
        let p = random_polytope(&mut r, 4, 6);
        let proj = project(&p, 0..2).unwrap();
        let verts = vertex_enumeration(&p).unwrap();
        let shadow: Vec<DVector<f64>> = verts.vertices().iter().map(|v| v.rows(0, 2).into_owned()).collect();
        let pv = vertex_enumeration(&proj).unwrap();
        for v in pv.vertices() {
            assert!(shadow.iter().any(|s| (s - v).amax() < 1e-7), "vertex {v} not a shadow");
        }
        for s in &shadow {
            assert!(proj.contains(s, 1e-7).unwrap());
        }
    }
}

#[test]
fn projection_axis_examples() {
    let r = project(&bx(&[-1.0; 3], &[1.0; 3]), 0..2).unwrap();
    assert_eq!(r.as_box().unwrap(), (vec![-1.0, -1.0], vec![1.0, 1.0]));
    let diamond = hull_from_points(&[
        dvector![1.0, 0.0],
        dvector![0.0, 1.0],
        dvector![-1.0, 0.0],
        dvector![0.0, -1.0],
    ])
    .unwrap();
    let r = project(&diamond, 0..1).unwrap();
    assert!((r.support(&dvector![1.0]).unwrap() - 1.0).abs() < 1e-9);
    assert!((r.support(&dvector![-1.0]).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn inverse_affine_grid_oracles() {
    let i = bx(&[-1.0], &[1.0]);
    let m = AffineMap::new(dmatrix![2.0], dvector![0.0]).unwrap();
    let pre = i.inverse_affine_map(&m).unwrap();
    for k in 0..1000 {
        let x = -1.0 + 2.0 * k as f64 / 999.0;
        if (x.abs() - 0.5).abs() < 1e-9 {
            continue;
        }
        let v = dvector![x];
        assert_eq!(pre.contains_point(&v).unwrap(), i.contains_point(&m.apply(&v)).unwrap());
    }
    let sq = bx(&[-1.0, -1.0], &[1.0, 1.0]);
    let sing = AffineMap::new(dmatrix![0.0, 1.0; 0.0, 0.0], dvector![0.0, 0.0]).unwrap();
    let slab = sq.inverse_affine_map(&sing).unwrap();
    for a in 0..41 {
        for b in 0..41 {
            let x = dvector![-5.0 + a as f64 * 0.25, -5.0 + b as f64 * 0.25];
            assert_eq!(
                slab.contains_point(&x).unwrap(),
                sq.contains_point(&sing.apply(&x)).unwrap()
            );
        }
    }
    assert!(!slab.is_bounded().unwrap());
    assert_eq!(pre.inverse_affine_map(&AffineMap::identity(1)).unwrap(), pre);
}

#[test]
fn random_3d_polytope_has_positive_chebyshev_radius() {
    let mut r = rng(5);
    let p = random_polytope(&mut r, 3, 8);
    assert!(!p.is_empty().unwrap());
    let (c, rad) = p.chebyshev_center().unwrap().unwrap();
    assert!(rad >= 0.3 - 1e-9);
    assert!(p.contains_point(&c).unwrap());
}

#[test]
fn support_of_triangle_is_max_over_vertices() {
    let t = triangle();
    let dir = dvector![1.0, 2.0];
    let oracle = vertex_enumeration(&t)
        .unwrap()
        .vertices()
        .iter()
        .map(|v| v.dot(&dir))
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((t.support(&dir).unwrap() - oracle).abs() < 1e-12);
    assert!((oracle - 2.0).abs() < 1e-12);
}

fn brute_force_vertices(p: &HPolytope) -> Vec<DVector<f64>> {
    let n = p.dim();
    let m = p.num_constraints();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let a = DMatrix::from_fn(n, n, |r, c| p.a()[(idx[r], c)]);
        let b = DVector::from_fn(n, |r, _| p.b()[idx[r]]);
        if let Some(x) = a.lu().solve(&b) {
            if p.contains(&x, 1e-9).unwrap() {
                out.push(x);
            }
        }
        // next combination
        let mut i = n;
        loop {
            if i == 0 {
                return dedup_sorted(out, 1e-7);
            }
            i -= 1;
            if idx[i] < m - n + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..n {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[test]
fn random_4d_vertex_enumeration_matches_subset_oracle() {
    let mut r = rng(21);
    for _ in 0..5 {
        let p = random_polytope(&mut r, 4, 4);
        let dd = vertex_enumeration(&p).unwrap();
        let bf = brute_force_vertices(&p);
        assert_eq!(dd.len(), bf.len());
        for a in dd.vertices() {
            assert!(bf.iter().any(|b| (a - b).amax() < 1e-7));
        }
    }
}

#[test]
fn segment_grazing_matches_gamma_sweep() {
    let b = bx(&[-1.0, -1.0], &[1.0, 1.0]);
    let mut r = rng(3);
    for _ in 0..200 {
        let x = uniform_in_box(&mut r, &[-3.0, -3.0], &[3.0, 3.0]);
        let y = uniform_in_box(&mut r, &[-3.0, -3.0], &[3.0, 3.0]);
        let s = Segment::new(x, y).unwrap();
        let sweep = (0..=10_000).any(|k| b.contains(&s.at(k as f64 / 1e4), 0.0).unwrap());
        let fast = segment_intersects(&b, &s).unwrap();
        if sweep {
            assert!(fast);
        } else if fast {
            // only a near-graze may disagree with the sweep
            let near = (0..=10_000).any(|k| b.contains(&s.at(k as f64 / 1e4), 1e-3).unwrap());
            assert!(near);
        }
    }
    let graze = Segment::new(dvector![-2.0, 1.0], dvector![2.0, 1.0]).unwrap();
    assert!(segment_intersects(&b, &graze).unwrap());
}

#[test]
fn redundant_hexagon_rows_are_removed() {
    let hex: Vec<(Vec<f64>, f64)> = (0..6)
        .map(|k| {
            let a = std::f64::consts::PI * k as f64 / 3.0;
            (vec![a.cos(), a.sin()], 1.0)
        })
        .collect();
    let mut rows = hex.clone();
    let mut r = rng(8);
    for _ in 0..10 {
        let a = unit_vector(&mut r, 2);
        rows.insert(r.random_range(0..=rows.len()), (vec![a[0], a[1]], r.random_range(1.2..3.0)));
    }
    let p = HPolytope::from_rows(2, &rows).unwrap();
    let red = p.remove_redundancy().unwrap();
    assert_eq!(red.num_constraints(), 6);
    // per-row oracle: each survivor is a hexagon row, and dropping it enlarges the set
    for i in 0..6 {
        let row: Vec<f64> = red.a().row(i).iter().copied().collect();
        assert!(hex.iter().any(|(h, b)| (h[0] - row[0]).abs() < 1e-12
            && (h[1] - row[1]).abs() < 1e-12
            && (b - red.b()[i]).abs() < 1e-12));
        let others: Vec<(Vec<f64>, f64)> = (0..6)
            .filter(|&j| j != i)
            .map(|j| (red.a().row(j).iter().copied().collect(), red.b()[j]))
            .collect();
        let dropped = HPolytope::from_rows(2, &others).unwrap();
        let a = DVector::from_vec(row);
        assert!(dropped.support(&a).unwrap() > red.b()[i] + 1e-6);
    }
    let pts = sample_interior(&bx(&[-1.5, -1.5], &[1.5, 1.5]), 1000, 4).unwrap();
    for x in pts {
        assert_eq!(p.contains_point(&x).unwrap(), red.contains_point(&x).unwrap());
    }
    let dup = bx(&[-1.0, -1.0], &[1.0, 1.0]).intersect(&bx(&[-1.0, -1.0], &[1.0, 1.0])).unwrap();
    assert_eq!(dup.remove_redundancy().unwrap().num_constraints(), 4);
}

#[test]
fn sampling_examples() {
    let i = bx(&[-1.0], &[1.0]);
    let s = sample_interior(&i, 3, 0).unwrap();
    assert!(s.iter().all(|x| i.contains_point(x).unwrap()));
    let single = bx(&[0.25, 0.25], &[0.25, 0.25]);
    assert!(sample_interior(&single, 4, 0)
        .unwrap()
        .iter()
        .all(|x| (x - dvector![0.25, 0.25]).amax() < 1e-12));
}

#[test]
fn operations_are_bit_reproducible() {
    let mut r = rng(99);
    let p = random_polytope(&mut r, 3, 5);
    let q = random_polytope(&mut r, 3, 5);
    assert_eq!(convex_hull_pair(&p, &q).unwrap(), convex_hull_pair(&p, &q).unwrap());
    assert_eq!(minkowski_sum(&p, &q).unwrap(), minkowski_sum(&p, &q).unwrap());
    assert_eq!(project(&p, 0..2).unwrap(), project(&p, 0..2).unwrap());
    assert_eq!(
        sample_interior(&p, 10, 7).unwrap(),
        sample_interior(&p, 10, 7).unwrap()
    );
}
