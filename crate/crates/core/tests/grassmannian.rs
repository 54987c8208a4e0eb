//! Quiver Grassmannian enumeration checked against a brute-force oracle that
//! tests every tuple of subspaces for arrow stability.

use qdesing::ar::{IndecTable, IsoType};
use qdesing::grassmannian::{all_topological_orders, count_points, list_points, stratify, tangent_dim, GrassOptions};
use qdesing::hq::QHat;
use qdesing::par::Exec;
use qdesing::poly::CountPolynomial;
use qdesing::subspace::SubspaceIter;
use qdesing::{Matrix, PrimeField, Quiver, Representation};
use std::sync::Arc;

fn brute_count(m: &Representation, e: &[usize]) -> u128 {
    let n = e.len();
    let all: Vec<Vec<Matrix>> = (0..n).map(|v| SubspaceIter::new(m.field(), m.dim(v), e[v]).collect()).collect();
    let mut idx = vec![0usize; n];
    if all.iter().any(|a| a.is_empty()) {
        return 0;
    }
    let mut count = 0;
    loop {
        let pick: Vec<Matrix> = (0..n).map(|v| all[v][idx[v]].clone()).collect();
        if m.is_subrep(&pick) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == n {
                return count;
            }
            idx[k] += 1;
            if idx[k] < all[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn a2_blowup(p: u32) -> Representation {
    let q = Arc::new(Quiver::parse("1->2").unwrap());
    let f = PrimeField::new(p).unwrap();
    Representation::new(q, f, vec![3, 2], vec![Matrix::from_rows(f, &[vec![1, 0, 0], vec![0, 1, 0]])]).unwrap()
}

fn table(spec: &str, p: u32) -> IndecTable {
    IndecTable::new(Arc::new(Quiver::parse(spec).unwrap()), PrimeField::new(p).unwrap()).unwrap()
}

#[test]
fn blowup_grassmannian_is_a_projective_plane() {
    let poly = qdesing::poly::count_polynomial(&[2, 3, 5, 7], |p| count_points(&a2_blowup(p as u32), &[1, 2], &GrassOptions::default())).unwrap();
    assert_eq!(poly.coeffs, vec![1, 1, 1]);
    assert_eq!(count_points(&a2_blowup(2), &[1, 2], &GrassOptions::default()).unwrap(), 7);
}

#[test]
fn blowup_strata_and_dims() {
    for p in [2u32, 3] {
        let t = table("1->2", p);
        let m = a2_blowup(p);
        let s = stratify(&t, &m, &[1, 2], &GrassOptions::default()).unwrap();
        let coarse = s.coarse_strata();
        assert_eq!(coarse.len(), 2);
        let q = p as u128;
        let generic = coarse.iter().find(|x| x.iso_type == t.parse_iso("P1, S2").unwrap()).unwrap();
        let special = coarse.iter().find(|x| x.iso_type == t.parse_iso("S1, S2:2").unwrap()).unwrap();
        assert_eq!((generic.count, generic.dim), (q * q + q, 2));
        assert_eq!((special.count, special.dim), (1, 0));
        assert_eq!(coarse.iter().map(|x| x.count).sum::<u128>(), s.total);
        for u in list_points(&m, &[1, 2], &GrassOptions::default()).unwrap() {
            assert_eq!(tangent_dim(&m, &u).unwrap(), 2);
        }
    }
}

#[test]
fn degenerate_flag_has_four_pieces() {
    for p in [2u32, 3] {
        let t = table("1->2", p);
        let m = t.realize(&t.parse_iso("P1:2, S1, S2").unwrap());
        let s = stratify(&t, &m, &[1, 2], &GrassOptions::default()).unwrap();
        assert_eq!(s.pieces.len(), 4);
        assert_eq!(s.pieces.iter().map(|x| x.count).sum::<u128>(), s.total);
        assert_eq!(s.total, brute_count(&m, &[1, 2]));
    }
}

#[test]
fn zero_dimension_vector_gives_one_point_stratum() {
    let t = table("1->2, 2->3", 3);
    let m = Representation::random(t.quiver().clone(), t.field(), vec![2, 2, 2], 4).unwrap();
    let s = stratify(&t, &m, &[0, 0, 0], &GrassOptions::default()).unwrap();
    assert_eq!(s.total, 1);
    assert_eq!(s.pieces.len(), 1);
    assert_eq!(s.pieces[0].coarse_dim, 0);
    assert_eq!(tangent_dim(&m, &s.pieces[0].sample).unwrap(), 0);
}

#[test]
fn guided_enumeration_matches_brute_force() {
    let cases: [(&str, Vec<usize>); 5] = [
        ("1->2", vec![2, 2]),
        ("1->2, 2->3", vec![2, 1, 2]),
        ("1->2, 3->2", vec![1, 2, 1]),
        ("2->1, 2->3", vec![1, 2, 1]),
        ("1->4, 2->4, 3->4", vec![1, 1, 1, 2]),
    ];
    for (spec, dims) in cases {
        for p in [2u32, 3] {
            let t = table(spec, p);
            for seed in 0..4 {
                let m = Representation::random(t.quiver().clone(), t.field(), dims.clone(), seed).unwrap();
                let mut es = vec![vec![]];
                for &d in &dims {
                    es = es.into_iter().flat_map(|e: Vec<usize>| (0..=d).map(move |x| [e.clone(), vec![x]].concat())).collect();
                }
                for e in es {
                    let want = brute_count(&m, &e);
                    assert_eq!(count_points(&m, &e, &GrassOptions::sequential()).unwrap(), want, "{spec} p={p} e={e:?}");
                    assert_eq!(count_points(&m, &e, &GrassOptions::default()).unwrap(), want);
                    let s = stratify(&t, &m, &e, &GrassOptions::default()).unwrap();
                    assert_eq!(s.total, want);
                    assert_eq!(s.pieces.iter().map(|x| x.count).sum::<u128>(), want);
                }
            }
        }
    }
}

#[test]
fn enumeration_order_independence() {
    for (spec, dims, e) in [("1->4, 2->4, 3->4", vec![2, 1, 2, 3], vec![1, 1, 1, 2]), ("2->1, 2->3", vec![2, 3, 2], vec![1, 2, 1])] {
        let t = table(spec, 3);
        let m = Representation::random(t.quiver().clone(), t.field(), dims, 11).unwrap();
        let base = count_points(&m, &e, &GrassOptions::default()).unwrap();
        for order in all_topological_orders(t.quiver()) {
            let opts = GrassOptions { order: Some(order), ..GrassOptions::sequential() };
            assert_eq!(count_points(&m, &e, &opts).unwrap(), base);
            assert_eq!(list_points(&m, &e, &opts).unwrap().len() as u128, base);
        }
    }
}

#[test]
fn parallel_and_sequential_agree_exactly() {
    let t = table("1->2, 3->2", 3);
    let m = t.realize(&t.parse_iso("P1, S2, P3, S1, I2, S3").unwrap());
    let e = [1, 3, 1];
    let a = list_points(&m, &e, &GrassOptions { exec: Exec::Sequential, ..Default::default() }).unwrap();
    let b = list_points(&m, &e, &GrassOptions { exec: Exec::Parallel, ..Default::default() }).unwrap();
    assert_eq!(a, b);
}

#[test]
fn qhat_grassmannian_of_the_blowup() {
    let mut samples = vec![];
    for p in [2u32, 3, 5, 7] {
        let t = Arc::new(table("1->2", p));
        let qh = QHat::new(t.clone()).unwrap();
        let mh = qh.mhat_explicit(&a2_blowup(p)).unwrap();
        let n_hat = [1, 1, 2];
        let points = list_points(&mh.rep, &n_hat, &GrassOptions::default()).unwrap();
        samples.push((p as u64, points.len() as u128));
        let euler = qh.euler_form(&[1, 1, 2], &[2, 1, 0]);
        for u in points.iter().take(20) {
            assert_eq!(tangent_dim(&mh.rep, u).unwrap() as i64, euler);
        }
    }
    let poly = CountPolynomial::interpolate(&samples).unwrap();
    assert_eq!(poly.coeffs, vec![1, 2, 1]);
    assert_eq!(poly.degree(), 2);
}

#[test]
fn counts_grow_with_q() {
    let mut prev = 0;
    for p in [2u32, 3, 5, 7] {
        let t = table("1->2, 2->3", p);
        let m = t.realize(&IsoType::from_pairs(t.len(), &(0..t.len()).map(|i| (i, 1)).collect::<Vec<_>>()));
        let c = count_points(&m, &[1, 2, 1], &GrassOptions::default()).unwrap();
        assert!(c >= prev);
        prev = c;
    }
}
