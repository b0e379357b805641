use sagbi_core::minors::{diagonal_order, minor_polynomials, MatrixRing};
use sagbi_core::relations::{elimination_kernel, minimize_relations, same_ideal, sagbi_with_relations, verify_relations};
use sagbi_core::sagbi::{is_sagbi_up_to, sagbi_by_degree, sagbi_general, tete_a_tetes, GeneratorFamily, SagbiOptions, SagbiStatus, Stop};
use sagbi_core::Exponent;

fn grassmann(m: usize, n: usize) -> (MatrixRing, Vec<sagbi_core::Polynomial>) {
    let mr = MatrixRing::new(m, n).unwrap();
    let gens = minor_polynomials(m, &mr).unwrap();
    (mr, gens)
}

#[test]
fn a233_diagonal_adds_two() {
    let mr = MatrixRing::new(3, 3).unwrap();
    let gens = minor_polynomials(2, &mr).unwrap();
    let order = diagonal_order(&mr);
    let r = sagbi_general(&gens, &order, Stop::Rounds(10)).unwrap();
    assert!(r.status.is_complete());
    assert_eq!(r.basis.len(), 11);
    let diag = [mr.var(0, 0), mr.var(1, 1), mr.var(2, 2)];
    let mut expected: Vec<Exponent> = [mr.var(0, 2), mr.var(2, 0)]
        .iter()
        .map(|&x| {
            let mut e = Exponent::zero(9);
            for &d in &diag {
                e.set(d, 1);
            }
            e.set(x, 1);
            e
        })
        .collect();
    let mut got: Vec<Exponent> = r.basis.initials()[9..].to_vec();
    expected.sort();
    got.sort();
    assert_eq!(got, expected);
    let d = sagbi_by_degree(&gens, &order, 6).unwrap();
    assert!(d.status.is_complete());
    let mut got: Vec<Exponent> = d.basis.initials()[9..].to_vec();
    got.sort();
    assert_eq!(got, expected);
}

#[test]
fn grassmannians_need_no_additions() {
    let (mr, gens) = grassmann(3, 6);
    let r = sagbi_general(&gens, &diagonal_order(&mr), Stop::Rounds(3)).unwrap();
    assert!(r.status.is_complete());
    assert_eq!(r.basis.len(), 20);

    let (mr, gens) = grassmann(2, 4);
    let fam = GeneratorFamily::new(&gens, &diagonal_order(&mr)).unwrap();
    assert_eq!(tete_a_tetes(&fam).unwrap().len(), 1);
    let r = sagbi_by_degree(&gens, &diagonal_order(&mr), 6).unwrap();
    assert_eq!(r.status, SagbiStatus::Complete { at: 3 });
    assert_eq!(r.basis.len(), 6);
}

#[test]
fn idempotence() {
    let mr = MatrixRing::new(3, 3).unwrap();
    let gens = minor_polynomials(2, &mr).unwrap();
    let order = diagonal_order(&mr);
    let r = sagbi_general(&gens, &order, Stop::Rounds(10)).unwrap();
    let again = sagbi_general(r.basis.members(), &order, Stop::Rounds(10)).unwrap();
    assert!(again.status.is_complete());
    assert_eq!(again.basis.len(), r.basis.len());
}

#[test]
fn sagbi_detection_by_hilbert() {
    let (mr, gens) = grassmann(2, 4);
    assert_eq!(is_sagbi_up_to(&gens, &diagonal_order(&mr), 3).unwrap(), None);
    let mr = MatrixRing::new(3, 3).unwrap();
    let gens = minor_polynomials(2, &mr).unwrap();
    assert_eq!(is_sagbi_up_to(&gens, &diagonal_order(&mr), 3).unwrap(), Some(2));
}

#[test]
fn plucker_relations() {
    for (n, count) in [(4, 1), (5, 5)] {
        let (mr, gens) = grassmann(2, n);
        let order = diagonal_order(&mr);
        let (res, _, rels) = sagbi_with_relations(&gens, &order, &SagbiOptions::general(Stop::Rounds(4))).unwrap();
        assert!(res.status.is_complete());
        assert_eq!(verify_relations(&gens, &rels).unwrap(), Ok(()));
        let min = minimize_relations(&rels).unwrap();
        assert_eq!(min.len(), count, "G(2,{n})");
        assert!(min.generators.iter().all(|g| g.homogeneous_degree() == Some(4)));
        assert!(same_ideal(&min, &elimination_kernel(&gens).unwrap()).unwrap());
    }
}

#[test]
fn a233_relations_vanish() {
    let mr = MatrixRing::new(3, 3).unwrap();
    let gens = minor_polynomials(2, &mr).unwrap();
    let (res, rho, rels) =
        sagbi_with_relations(&gens, &diagonal_order(&mr), &SagbiOptions::by_degree(6)).unwrap();
    assert!(res.status.is_complete());
    assert!(minimize_relations(&rels).unwrap().is_empty());
    for (u, img) in rho.images().iter().enumerate() {
        assert_eq!(&img.substitute(&gens, mr.ring()).unwrap(), &res.basis.members()[u]);
    }
}
