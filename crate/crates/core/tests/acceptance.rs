//! Acceptance criteria 1 to 12, one PASS/FAIL line each.

mod support;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sagbi_core::hilbert::{expand_series, subalgebra_hilbert, Grading};
use sagbi_core::linalg::rank_i64;
use sagbi_core::matchings::{enumerate_vertices, is_coherent, matching_from_exponent, random_coherent_matching, Mode};
use sagbi_core::minors::{
    b_sets, diagonal_order, minor_polynomial, minor_polynomials, q_matrix, submax_lex_order, ExponentMatrix, Group,
    MatrixRing,
};
use sagbi_core::relations::{
    elimination_kernel, minimize_relations, original_presentation, same_ideal, sagbi_with_relations, verify_relations,
    RelationSet,
};
use sagbi_core::sagbi::{sagbi_general, SagbiOptions, Stop};
use sagbi_core::universal::{grassmann_reference, reference_hilbert, verify_a233, verify_g36, verify_g37, TYPES};
use sagbi_core::poly::parse_polynomial;
use sagbi_core::{Exponent, Field, MonomialOrder, Polynomial, RingContext};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn mat(rows: &[&[u32]]) -> ExponentMatrix {
    ExponentMatrix::from_rows(rows)
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

const TABLE_3X3: [[[u32; 3]; 3]; 5] = [
    [[4, 2, 0], [2, 2, 2], [0, 2, 4]],
    [[4, 2, 0], [2, 1, 3], [0, 3, 3]],
    [[3, 2, 1], [2, 0, 4], [1, 4, 1]],
    [[4, 1, 1], [1, 4, 1], [1, 1, 4]],
    [[0, 3, 3], [3, 0, 3], [3, 3, 0]],
];

const TABLE_3X3_DELTA: [[[u32; 3]; 3]; 5] = [
    [[5, 2, 0], [2, 3, 2], [0, 2, 5]],
    [[5, 2, 0], [2, 1, 4], [0, 4, 3]],
    [[4, 2, 1], [2, 0, 5], [1, 5, 1]],
    [[5, 1, 1], [1, 5, 1], [1, 1, 5]],
    [[0, 4, 3], [3, 0, 4], [4, 3, 0]],
];

fn table(t: &[[[u32; 3]; 3]]) -> Vec<ExponentMatrix> {
    t.iter().map(|r| mat(&[&r[0], &r[1], &r[2]])).collect()
}

fn m2_3x3() -> (MatrixRing, Vec<Polynomial>) {
    let mr = MatrixRing::new(3, 3).unwrap();
    let f = minor_polynomials(2, &mr).unwrap();
    (mr, f)
}

/// Every tabulated representative lies in a computed orbit, and the orbits are all hit.
fn conjugate(catalog: &sagbi_core::matchings::VertexCatalog, group: &Group, reps: &[ExponentMatrix]) -> Result<(), String> {
    let mut hit = BTreeSet::new();
    for (i, r) in reps.iter().enumerate() {
        let c = group.canonical_form(r).0;
        let pos = catalog.orbits.iter().position(|o| o.canonical == c);
        ensure!(pos.is_some(), "representative ({}) {} is not a computed vertex", i + 1, r.compact());
        hit.insert(pos);
    }
    ensure!(hit.len() == catalog.orbit_count(), "representatives cover {} of {} orbits", hit.len(), catalog.orbit_count());
    Ok(())
}

fn criterion_1() -> Outcome {
    let (_, f) = m2_3x3();
    let group = Group::full(3, 3);
    let start = Instant::now();
    let c = enumerate_vertices(&f, 3, 3, &group, &Mode::exhaustive()).map_err(e)?;
    let elapsed = start.elapsed();
    ensure!(c.total == 102 && c.orbit_count() == 5, "{} vertices in {} orbits", c.total, c.orbit_count());
    conjugate(&c, &group, &table(&TABLE_3X3))?;
    ensure!(elapsed < Duration::from_secs(60), "enumeration took {elapsed:?}");
    Ok(format!("102 vertices, 5 orbits, tabulated representatives conjugate, {:.2}s", elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let (mr, f) = m2_3x3();
    let group = Group::full(3, 3);
    let plain = enumerate_vertices(&f, 3, 3, &group, &Mode::exhaustive()).map_err(e)?;
    let mut g = f.clone();
    g.push(minor_polynomial(&mr, &[0, 1, 2], &[0, 1, 2]).map_err(e)?);
    let c = enumerate_vertices(&g, 3, 3, &group, &Mode::exhaustive()).map_err(e)?;
    ensure!(c.total == 108 && c.orbit_count() == 5, "{} vertices in {} orbits", c.total, c.orbit_count());
    let delta = table(&TABLE_3X3_DELTA);
    conjugate(&c, &group, &delta)?;
    let five = plain.find(&table(&TABLE_3X3)[4], &group).ok_or("case (5) missing without Delta")?.orbit_size;
    let five_delta = c.find(&delta[4], &group).ok_or("case (5) missing with Delta")?.orbit_size;
    ensure!((five, five_delta) == (6, 12), "case (5) orbit sizes {five} and {five_delta}");
    let other = mat(&[&[0, 3, 4], &[4, 0, 3], &[3, 4, 0]]);
    ensure!(group.canonical_form(&other).0 == group.canonical_form(&delta[4]).0, "the second choice of in(Delta) is in another orbit");
    Ok("108 vertices, 5 orbits, case (5) orbit sizes 6 and 12".into())
}

fn criterion_3() -> Outcome {
    let mr = MatrixRing::new(3, 4).map_err(e)?;
    let f = minor_polynomials(2, &mr).map_err(e)?;
    let start = Instant::now();
    let mut c = enumerate_vertices(&f, 3, 4, &Group::full(3, 4), &Mode::exhaustive()).map_err(e)?;
    let elapsed = start.elapsed();
    let reference = reference_hilbert(&f, &diagonal_order(&mr), 6).map_err(e)?;
    ensure!(reference.numerator.as_deref() == Some(&[1, 6, 15, 10][..]), "reference h-vector {:?}", reference.numerator);
    c.annotate(&[1; 12], &reference);
    let full: Vec<_> = c.orbits.iter().filter(|o| o.full_support).collect();
    ensure!(c.total == 3624 && c.orbit_count() == 29, "{} vertices in {} orbits", c.total, c.orbit_count());
    ensure!(full.len() == 5, "{} full-support orbits", full.len());
    let got: BTreeSet<Vec<i64>> = full.iter().filter_map(|o| o.h_vector.clone()).collect();
    let want: BTreeSet<Vec<i64>> =
        [[1, 6, 11, 5], [1, 6, 10, 3], [1, 6, 10, 4], [1, 6, 12, 7], [1, 6, 9, 4]].iter().map(|h| h.to_vec()).collect();
    ensure!(got == want, "full-support h-vectors {got:?}");
    ensure!(elapsed < Duration::from_secs(30 * 60), "enumeration took {elapsed:?}");
    Ok(format!("3624 vertices, 29 orbits, 5 full-support with the expected h-vectors, {:.2}s", elapsed.as_secs_f64()))
}

fn criterion_4() -> Outcome {
    let (_, f) = m2_3x3();
    let group = Group::full(3, 3);
    let c = enumerate_vertices(&f, 3, 3, &group, &Mode::exhaustive()).map_err(e)?;
    let full: Vec<_> = c.orbits.iter().filter(|o| o.full_support).collect();
    ensure!(full.len() == 1, "{} full-support orbits in 3x3", full.len());
    let q3 = q_matrix(3).map_err(e)?;
    ensure!(full[0].canonical == group.canonical_form(&q3).0, "the full-support orbit is not that of Q_3");
    let mr = MatrixRing::new(4, 4).map_err(e)?;
    let f4 = minor_polynomials(3, &mr).map_err(e)?;
    let q4 = q_matrix(4).map_err(e)?;
    let eight_i_plus_e: Vec<u32> = (0..16).map(|k| if k / 4 == k % 4 { 9 } else { 1 }).collect();
    ensure!(q4 == ExponentMatrix::new(4, 4, eight_i_plus_e).map_err(e)?, "Q_4 is not 8I + E");
    let mt = matching_from_exponent(&f4, &q4.to_exponent()).ok_or("no matching of M_3 has exponent Q_4")?;
    let w = is_coherent(&f4, &mt.selection).map_err(e)?.ok_or("Q_4 matching is not coherent")?;
    Ok(format!("unique full-support 3x3 orbit is Q_3; Q_4 coherent with witness {w:?}"))
}

fn criterion_5() -> Outcome {
    let mut out = Vec::new();
    for m in 3..=5 {
        let mr = MatrixRing::new(m, m).map_err(e)?;
        let f = minor_polynomials(m - 1, &mr).map_err(e)?;
        let order = submax_lex_order(&mr).map_err(e)?;
        let rows: Vec<Vec<i64>> =
            f.iter().map(|p| p.leading_exponent(&order).unwrap().iter().map(|x| x as i64).collect()).collect();
        let rank = rank_i64(&rows);
        ensure!(rank == m * m, "m = {m}: rank {rank}");
        let r = sagbi_general(&f, &order, Stop::Rounds(3)).map_err(e)?;
        ensure!(r.status.is_complete(), "m = {m}: engine status {:?}", r.status);
        ensure!(r.basis.len() == f.len(), "m = {m}: {} additions", r.basis.len() - f.len());
        out.push(format!("m={m} rank {rank}"));
    }
    Ok(format!("{}; complete with 0 additions", out.join(", ")))
}

fn x(mr: &MatrixRing, cells: &[(usize, usize)]) -> Exponent {
    let mut e = Exponent::zero(mr.rows() * mr.cols());
    for &(i, j) in cells {
        e.set(mr.var(i - 1, j - 1), e.get(mr.var(i - 1, j - 1)) + 1);
    }
    e
}

fn criterion_6() -> Outcome {
    let reference = grassmann_reference(3, 6, 5).map_err(e)?;
    let series: Vec<u64> = expand_series(&[1, 10, 20, 10, 1], 10, 5).iter().map(|&v| v as u64).collect();
    ensure!(reference.values == series, "diagonal values {:?}, series {:?}", reference.values, series);
    let mr = MatrixRing::new(3, 6).map_err(e)?;
    let f = minor_polynomials(3, &mr).map_err(e)?;
    let oracle = subalgebra_hilbert(&f, 2, &diagonal_order(&mr), Grading::Normalized).map_err(e)?;
    ensure!(oracle.values[..] == series[..3], "linear-algebra oracle {:?}", oracle.values);
    let t1 = &TYPES[0];
    let pattern = t1.pattern();
    let g: Vec<Polynomial> =
        f.iter().map(|p| mr.restrict_to_pattern(p, &pattern)).filter(|p| !p.is_zero()).collect();
    let mt = matching_from_exponent(&g, &t1.even_matrix().to_exponent()).ok_or("Type 1 vertex (5) has no matching")?;
    let printed_t: BTreeSet<Exponent> = [
        [(1, 1), (2, 2), (3, 3)], [(1, 1), (2, 2), (3, 4)], [(1, 1), (2, 2), (3, 5)], [(1, 1), (2, 2), (3, 6)],
        [(1, 1), (2, 4), (3, 3)], [(1, 1), (2, 5), (3, 3)], [(1, 1), (2, 6), (3, 3)], [(1, 1), (2, 5), (3, 4)],
        [(1, 1), (2, 4), (3, 6)], [(1, 1), (2, 5), (3, 6)], [(1, 4), (2, 2), (3, 3)], [(1, 5), (2, 2), (3, 3)],
        [(1, 6), (2, 2), (3, 3)], [(1, 4), (2, 2), (3, 5)], [(1, 4), (2, 2), (3, 6)], [(1, 5), (2, 2), (3, 6)],
        [(1, 4), (2, 5), (3, 3)], [(1, 4), (2, 6), (3, 3)], [(1, 6), (2, 5), (3, 3)], [(1, 4), (2, 5), (3, 6)],
    ]
    .iter()
    .map(|c| x(&mr, c))
    .collect();
    let ours: BTreeSet<Exponent> = mt.monomials.iter().cloned().collect();
    ensure!(ours == printed_t, "Type 1 matching differs from the printed T");
    let values = sagbi_core::hilbert::semigroup_hilbert(&mt.monomials, &[1; 18], 5, Grading::Normalized).values;
    let bad: Vec<u64> = expand_series(&[1, 10, 19, 8], 10, 5).iter().map(|&v| v as u64).collect();
    ensure!(values == bad, "Type 1 vertex (5) values {values:?}, series {bad:?}");
    Ok(format!(
        "values {:?} equal the series; k<=2 confirmed by linear algebra; Type 1 (5) gives {:?}",
        reference.values, values
    ))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let reports = verify_g36().map_err(e)?;
    let elapsed = start.elapsed();
    let expected = [(108, 5), (80, 22), (92, 24), (160, 6)];
    let reference = grassmann_reference(3, 6, 5).map_err(e)?;
    let mut parts = Vec::new();
    for (r, (v, o)) in reports.iter().zip(expected) {
        ensure!((r.vertices, r.orbits.len()) == (v, o), "{}: {}/{}", r.name, r.vertices, r.orbits.len());
        let bad: Vec<_> = r.orbits.iter().filter(|o| !o.sagbi).collect();
        ensure!(bad.len() == 1 && bad[0].all_even, "{}: non-SAGBI orbits {}", r.name, bad.len());
        ensure!(r.extensions > 0 && r.repaired_values == reference.values, "{}: not repaired", r.name);
        parts.push(format!("{} {}/{}", r.name, r.vertices, r.orbits.len()));
    }
    ensure!(elapsed < Duration::from_secs(2 * 3600), "took {elapsed:?}");
    Ok(format!("{}; one even non-SAGBI orbit each, repaired by G; {:.2}s", parts.join(", "), elapsed.as_secs_f64()))
}

fn criterion_8() -> Outcome {
    let r = verify_a233().map_err(e)?;
    ensure!(r.vertices == 108 && r.cases.len() == 5, "{} vertices, {} orbits", r.vertices, r.cases.len());
    ensure!(r.cases.iter().all(|c| c.additions.len() <= 3), "more than three additions");
    let d = &r.cases[r.diagonal];
    ensure!(d.additions == [(0, 2), (2, 0)], "diagonal additions {:?}", d.additions);
    ensure!(r.diagonal_t_h_vector.as_deref() == Some(&[1, 2, 1][..]), "diagonal K[T] h-vector {:?}", r.diagonal_t_h_vector);
    let adds: Vec<usize> = r.cases.iter().map(|c| c.additions.len()).collect();
    Ok(format!("additions per orbit {adds:?}; diagonal adds X13*Delta, X31*Delta; K[T] h-vector (1,2,1)"))
}

const G37_SEED: u64 = 20_240_607;

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let samples = verify_g37(200, G37_SEED).map_err(e)?;
    let elapsed = start.elapsed();
    ensure!(samples.len() == 200, "{} samples", samples.len());
    let mut hist = [0usize; 4];
    for s in &samples {
        ensure!(s.defect <= 3 && s.w_t.len() as u64 == s.defect, "sample {} has h = {}", s.matrix.compact(), s.defect);
        hist[s.defect as usize] += 1;
    }
    ensure!(elapsed < Duration::from_secs(3600), "took {elapsed:?}");
    Ok(format!("200 samples (seed {G37_SEED}), h histogram {hist:?}, all repaired in degree 2, {:.2}s", elapsed.as_secs_f64()))
}

fn criterion_10() -> Outcome {
    let mr = MatrixRing::new(3, 6).map_err(e)?;
    let f = minor_polynomials(3, &mr).map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let mt = random_coherent_matching(&f, &mut rng, 10);
        let rows: Vec<Vec<i64>> = mt.monomials.iter().map(|e| e.iter().map(|x| x as i64).collect()).collect();
        let rank = rank_i64(&rows);
        ensure!(rank == 10, "matching {} has exponent rank {rank}", mt.matrix(3, 6).compact());
    }
    let (_, b0) = b_sets(3, 6).map_err(e)?;
    let rows: Vec<Vec<i64>> = b0.iter().map(|e| e.iter().map(|x| x as i64).collect()).collect();
    ensure!(b0.len() == 10 && rank_i64(&rows) == 10, "B0 has {} elements of rank {}", b0.len(), rank_i64(&rows));
    Ok("100 seeded matchings of rank 10; B0_{3,6} has 10 independent elements".into())
}

fn relations(f: &[Polynomial], order: &MonomialOrder) -> Result<RelationSet, String> {
    let (res, _, rels) = sagbi_with_relations(f, order, &SagbiOptions::general(Stop::Rounds(6))).map_err(e)?;
    ensure!(res.status.is_complete(), "engine did not finish");
    ensure!(verify_relations(f, &rels).map_err(e)? == Ok(()), "a relation does not vanish");
    minimize_relations(&rels).map_err(e)
}

fn criterion_11() -> Outcome {
    let ring = RingContext::new(["y1", "y2", "z1", "z2"].map(String::from).to_vec(), Field::Rational).map_err(e)?;
    let v = |i| Polynomial::variable(&ring, i);
    let f: Vec<Polynomial> = [(0, 2), (0, 3), (1, 2), (1, 3)].iter().map(|&(a, b)| &v(a) * &v(b)).collect();
    let rels = relations(&f, &MonomialOrder::lex(4))?;
    let p0 = original_presentation(&f).map_err(e)?;
    let expected = RelationSet { ring: p0.clone(), generators: vec![parse_polynomial(&p0, "Y1*Y4 - Y2*Y3").map_err(e)?], minimized: true };
    ensure!(rels.len() == 1 && same_ideal(&rels, &expected).map_err(e)?, "y_i z_j relations {:?}", rels.generators);
    for (n, count) in [(4, 1), (5, 5)] {
        let mr = MatrixRing::new(2, n).map_err(e)?;
        let f = minor_polynomials(2, &mr).map_err(e)?;
        let rels = relations(&f, &diagonal_order(&mr))?;
        ensure!(rels.len() == count, "G(2,{n}): {} relations", rels.len());
        ensure!(same_ideal(&rels, &elimination_kernel(&f).map_err(e)?).map_err(e)?, "G(2,{n}) differs from elimination");
    }
    let (mr, f) = m2_3x3();
    let rels = relations(&f, &diagonal_order(&mr))?;
    ensure!(rels.is_empty(), "A_2(3,3): {} relations", rels.len());
    ensure!(elimination_kernel(&f).map_err(e)?.is_empty(), "A_2(3,3): elimination finds relations");
    Ok("(Y1Y4 - Y2Y3); G(2,4): 1; G(2,5): 5; both equal elimination; A_2(3,3): 0".into())
}

fn criterion_12() -> Outcome {
    let mut failed = Vec::new();
    for (name, f) in support::ALL {
        if let Err(msg) = f() {
            failed.push(format!("{name}: {msg}"));
        }
    }
    ensure!(failed.is_empty(), "{}", failed.join("; "));
    Ok(format!("{} properties hold", support::ALL.len()))
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 12] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
        (12, criterion_12),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failures = 0;
    for (n, f) in criteria {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {n}: PASS ({secs:.1}s) {msg}"),
            Err(msg) => {
                failures += 1;
                println!("criterion {n}: FAIL ({secs:.1}s) {msg}");
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
