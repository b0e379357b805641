//! Universal SAGBI basis checks for `A_2(3,3)`, `G(3,6)` and sampled `G(3,7)`.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{expand_series, h_vector, krull_dim_monomial, semigroup_hilbert, Grading, HilbertData};
use crate::matchings::{
    enumerate_vertices, extend_matching, matching_from_exponent, matching_from_weight, random_coherent_matching,
    restrict_matching, sagbi_defect, Matching, Mode, VertexCatalog,
};
use crate::minors::{
    diagonal_order, minor_polynomial, minor_polynomials, minors, of_element, ExponentMatrix, Group, MatrixRing, Pattern,
};
use crate::poly::{Exponent, MonomialOrder, Polynomial};
use crate::sagbi::sagbi_by_degree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UniversalCase {
    A233,
    G36,
    G37Sampled { count: usize, seed: u64 },
}

impl fmt::Display for UniversalCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UniversalCase::A233 => f.write_str("A233"),
            UniversalCase::G36 => f.write_str("G36"),
            UniversalCase::G37Sampled { count, seed } => write!(f, "G37_sampled({count}, {seed})"),
        }
    }
}

/// Normalized Hilbert values of `K[gens]` up to `k_max`, read off the
/// initial algebra of a degree-truncated SAGBI computation.
pub fn reference_hilbert(gens: &[Polynomial], order: &MonomialOrder, k_max: usize) -> Result<HilbertData> {
    let r = sagbi_by_degree(gens, order, k_max as u64)?;
    let init = r.basis.initials();
    let h = semigroup_hilbert(init, r.basis.ring().degrees(), k_max, Grading::Normalized);
    Ok(h.with_dim(krull_dim_monomial(init)))
}

/// Hilbert values of `G(m,n)` from the diagonal matching of the maximal minors.
pub fn grassmann_reference(m: usize, n: usize, k_max: usize) -> Result<HilbertData> {
    let mr = MatrixRing::new(m, n)?;
    let order = diagonal_order(&mr);
    let init: Vec<Exponent> = minor_polynomials(m, &mr)?
        .iter()
        .map(|f| f.leading_exponent(&order).cloned())
        .collect::<Result<_>>()?;
    let h = semigroup_hilbert(&init, mr.ring().degrees(), k_max, Grading::Normalized);
    Ok(h.with_dim(krull_dim_monomial(&init)))
}

fn values_of(monomials: &[Exponent], k_max: usize) -> Vec<u64> {
    let ones = vec![1; monomials[0].len()];
    semigroup_hilbert(monomials, &ones, k_max, Grading::Normalized).values
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn fail(what: &str, witness: &ExponentMatrix) -> Error {
    Error::Verification(format!("{what}; counterexample {}", witness.compact()))
}

#[derive(Debug, Clone, Serialize)]
pub struct A233Case {
    pub vertex: ExponentMatrix,
    pub orbit_size: usize,
    pub additions: Vec<(usize, usize)>,
    pub values: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct A233Report {
    pub vertices: usize,
    pub cases: Vec<A233Case>,
    /// Index into `cases` of the diagonal orbit.
    pub diagonal: usize,
    /// Hilbert values of `K[T]` for the diagonal matching without `Delta`.
    pub diagonal_t_values: Vec<u64>,
    pub diagonal_t_h_vector: Option<Vec<i64>>,
}

/// Every vertex of `N(M_2 + Delta)` in `3 x 3` becomes SAGBI after adding
/// `X_ij Delta` for the zero cells of the vertex.
pub fn verify_a233() -> Result<A233Report> {
    const K_MAX: usize = 6;
    let mr = MatrixRing::new(3, 3)?;
    let mut gens = minor_polynomials(2, &mr)?;
    gens.push(minor_polynomial(&mr, &[0, 1, 2], &[0, 1, 2])?);
    let group = Group::full(3, 3);
    let catalog = enumerate_vertices(&gens, 3, 3, &group, &Mode::exhaustive())?;
    let target: Vec<u64> = (0..=K_MAX as u64).map(|k| binomial(k + 8, 8)).collect();
    let mut cases = Vec::new();
    for o in &catalog.orbits {
        let rep = &o.representative;
        let vertex = rep.matrix(3, 3);
        let d = &rep.monomials[9];
        let mut monomials = rep.monomials[..9].to_vec();
        let mut additions = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                if vertex.get(i, j) == 0 {
                    additions.push((i, j));
                    monomials.push(d.add(&Exponent::unit(9, mr.var(i, j))));
                }
            }
        }
        if additions.len() > 3 {
            return Err(fail("more than three additions", &vertex));
        }
        let values = values_of(&monomials, K_MAX);
        if values != target {
            return Err(fail("Hilbert function differs from the polynomial ring in 9 variables", &vertex));
        }
        cases.push(A233Case { vertex, orbit_size: o.orbit_size, additions, values });
    }
    // lex order X11 > X12 > ... > X33 realized as a weight
    let w: Vec<i64> = (0..9u32).map(|v| 10i64.pow(8 - v)).collect();
    let diag = matching_from_weight(&gens, &w)?;
    let c = group.canonical_form(&diag.matrix(3, 3)).0;
    let diagonal = catalog
        .orbits
        .iter()
        .position(|o| o.canonical == c)
        .ok_or_else(|| Error::Verification("diagonal vertex missing from the catalog".into()))?;
    let t = &diag.monomials[..9];
    let diagonal_t_values = values_of(t, K_MAX);
    let diagonal_t_h_vector = h_vector(&diagonal_t_values, krull_dim_monomial(t));
    let ci: Vec<u64> = expand_series(&[1, 2, 1], 7, K_MAX).iter().map(|&x| x as u64).collect();
    if diagonal_t_values != ci {
        return Err(fail("diagonal K[T] is not a complete intersection of two quadrics", &diag.matrix(3, 3)));
    }
    // the orbit representative of the diagonal case may be a conjugate; report the diagonal vertex itself
    let vertex = diag.matrix(3, 3);
    let additions: Vec<(usize, usize)> =
        (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).filter(|&(i, j)| vertex.get(i, j) == 0).collect();
    cases[diagonal].additions = additions;
    cases[diagonal].vertex = vertex;
    Ok(A233Report { vertices: catalog.total, cases, diagonal, diagonal_t_values, diagonal_t_h_vector })
}

/// Data of one of the four structured types of vertices of `N(M_3)` in `3 x 6`.
#[derive(Debug, Clone, Copy)]
pub struct TypeData {
    pub name: &'static str,
    pub pattern: [&'static str; 3],
    /// Column labels `[a,b,c,d,e,f]` of `G = [a,b,c][d,e,f] - [a,b,d][c,e,f]`.
    pub labels: [usize; 6],
    /// The all-even orbit representative.
    pub even: [[u32; 6]; 3],
    pub vertices: usize,
    pub orbits: usize,
    pub stabilizer: usize,
}

pub const TYPES: [TypeData; 4] = [
    TypeData {
        name: "Type 1",
        pattern: ["* 0 0 * * *", "0 * 0 * * *", "0 0 * * * *"],
        labels: [1, 4, 2, 5, 3, 6],
        even: [[10, 0, 0, 6, 2, 2], [0, 10, 0, 2, 6, 2], [0, 0, 10, 2, 2, 6]],
        vertices: 108,
        orbits: 5,
        stabilizer: 36,
    },
    TypeData {
        name: "Type 2",
        pattern: ["* * * * 0 0", "0 * * * * 0", "0 0 * * * *"],
        labels: [1, 3, 2, 5, 4, 6],
        even: [[10, 2, 6, 2, 0, 0], [0, 8, 2, 2, 8, 0], [0, 0, 2, 6, 2, 10]],
        vertices: 80,
        orbits: 22,
        stabilizer: 4,
    },
    TypeData {
        name: "Type 3",
        pattern: ["* * * 0 0 *", "0 * * * 0 *", "* 0 0 * * *"],
        labels: [3, 4, 1, 2, 5, 6],
        even: [[8, 8, 2, 0, 0, 2], [0, 2, 8, 8, 0, 2], [2, 0, 0, 2, 10, 6]],
        vertices: 92,
        orbits: 24,
        stabilizer: 4,
    },
    TypeData {
        name: "Type 4",
        pattern: ["0 0 * * * *", "* * 0 0 * *", "* * * * 0 0"],
        labels: [2, 3, 4, 5, 1, 6],
        even: [[0, 0, 2, 8, 8, 2], [8, 2, 0, 0, 2, 8], [2, 8, 8, 2, 0, 0]],
        vertices: 160,
        orbits: 6,
        stabilizer: 48,
    },
];

impl TypeData {
    pub fn even_matrix(&self) -> ExponentMatrix {
        let rows: Vec<&[u32]> = self.even.iter().map(|r| r.as_slice()).collect();
        ExponentMatrix::from_rows(&rows)
    }

    pub fn pattern(&self) -> Pattern {
        Pattern::parse(&self.pattern).expect("valid pattern")
    }

    /// The element `G` of `O_F` that repairs the even vertex.
    pub fn g(&self, mr: &MatrixRing) -> Result<Polynomial> {
        of_element(mr, self.labels)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitVerdict {
    pub canonical: ExponentMatrix,
    pub orbit_size: usize,
    pub sagbi: bool,
    pub all_even: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TypeReport {
    pub name: String,
    pub group_order: usize,
    pub vertices: usize,
    pub orbits: Vec<OrbitVerdict>,
    pub h_vector: Option<Vec<i64>>,
    /// Extensions of the even matching by a term of `G_0`, and their orbit count
    /// under the stabilizer of the even vertex.
    pub extensions: usize,
    pub extension_orbits: usize,
    pub repaired_values: Vec<u64>,
    #[serde(skip)]
    pub catalog: VertexCatalog,
}

/// The structured analysis of one type.
pub fn verify_type(t: &TypeData, reference: &HilbertData) -> Result<TypeReport> {
    let mr = MatrixRing::new(3, 6)?;
    let pattern = t.pattern();
    let gens: Vec<Polynomial> = minor_polynomials(3, &mr)?
        .iter()
        .map(|f| mr.restrict_to_pattern(f, &pattern))
        .filter(|f| !f.is_zero())
        .collect();
    let group = Group::pattern_stabilizer(&pattern);
    let catalog = enumerate_vertices(&gens, 3, 6, &group, &Mode::Exhaustive { cap: u128::MAX })?;
    let ones = vec![1u32; 18];
    let orbits: Vec<OrbitVerdict> = catalog
        .orbits
        .par_iter()
        .map(|o| OrbitVerdict {
            canonical: o.canonical.clone(),
            orbit_size: o.orbit_size,
            sagbi: sagbi_defect(&o.representative, &ones, reference).is_none(),
            all_even: o.canonical.all_even(),
        })
        .collect();
    for o in &orbits {
        if o.sagbi == o.all_even {
            return Err(fail(&format!("{}: SAGBI property and odd coordinates disagree", t.name), &o.canonical));
        }
    }
    let bad: Vec<&OrbitVerdict> = orbits.iter().filter(|o| !o.sagbi).collect();
    let even = t.even_matrix();
    if bad.len() != 1 {
        return Err(fail(&format!("{}: {} non-SAGBI orbits", t.name, bad.len()), &even));
    }
    if group.canonical_form(&even).0 != bad[0].canonical {
        return Err(fail(&format!("{}: the even representative is not the non-SAGBI orbit", t.name), &even));
    }
    let tm = matching_from_exponent(&gens, &even.to_exponent())
        .ok_or_else(|| fail(&format!("{}: no matching has the even exponent", t.name), &even))?;
    let h_vector = {
        let h = semigroup_hilbert(&tm.monomials, &ones, reference.k_max(), Grading::Normalized);
        h_vector(&h.values, krull_dim_monomial(&tm.monomials))
    };
    let g0 = mr.restrict_to_pattern(&t.g(&mr)?, &pattern);
    let ext = extend_matching(&gens, &tm, &g0)?;
    if ext.is_empty() {
        return Err(fail(&format!("{}: no coherent extension by G", t.name), &even));
    }
    let mut repaired_values = Vec::new();
    for x in &ext {
        let v = semigroup_hilbert(&x.monomials, &ones, reference.k_max(), Grading::Normalized).values;
        if v != reference.values {
            return Err(fail(&format!("{}: extension does not restore the Hilbert function", t.name), &x.matrix(3, 6)));
        }
        repaired_values = v;
    }
    let stab: Vec<_> = group.elements().iter().filter(|g| g.act(&even).ok().as_ref() == Some(&even)).collect();
    let mut classes: Vec<Exponent> = Vec::new();
    for x in &ext {
        let e = x.monomials.last().expect("extended").clone();
        let canon = stab.iter().map(|g| g.act_exponent(3, 6, &e)).min().expect("identity");
        if !classes.contains(&canon) {
            classes.push(canon);
        }
    }
    Ok(TypeReport {
        name: t.name.to_string(),
        group_order: group.order(),
        vertices: catalog.total,
        orbits,
        h_vector,
        extensions: ext.len(),
        extension_orbits: classes.len(),
        repaired_values,
        catalog,
    })
}

pub fn verify_g36() -> Result<Vec<TypeReport>> {
    let reference = grassmann_reference(3, 6, 5)?;
    TYPES.iter().map(|t| verify_type(t, &reference)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Repair {
    /// 0-based column removed.
    pub column: usize,
    pub type_name: String,
    pub g: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct G37Sample {
    pub matrix: ExponentMatrix,
    pub defect: u64,
    pub w_t: Vec<usize>,
    pub repairs: Vec<Repair>,
    pub extensions: usize,
}

/// Context shared by the `3 x 7` sample checks.
pub struct G37 {
    pub mr: MatrixRing,
    pub gens: Vec<Polynomial>,
    minors: Vec<crate::minors::Minor>,
    mr6: MatrixRing,
    group6: Group,
    pub reference2: u64,
    reference6: u64,
}

impl G37 {
    pub fn new() -> Result<G37> {
        let mr = MatrixRing::new(3, 7)?;
        let minors = minors(3, &mr)?;
        let gens = minors.iter().map(|m| m.poly.clone()).collect();
        Ok(G37 {
            mr,
            gens,
            minors,
            mr6: MatrixRing::new(3, 6)?,
            group6: Group::full(3, 6),
            reference2: grassmann_reference(3, 7, 2)?.values[2],
            reference6: grassmann_reference(3, 6, 2)?.values[2],
        })
    }

    /// `G_i` for a restriction with all-even exponent matrix `d` on the columns `cols`.
    pub fn repair_polynomial(&self, d: &ExponentMatrix, cols: &[usize]) -> Option<(&'static str, Polynomial)> {
        for t in &TYPES {
            let rep = t.even_matrix();
            if let Some(g) = self.group6.elements().iter().find(|g| g.act(&rep).ok().as_ref() == Some(d)) {
                let big = g.act_polynomial(&self.mr6, &t.g(&self.mr6).ok()?);
                let map: Vec<usize> = (0..18).map(|v| (v / 6) * 7 + cols[v % 6]).collect();
                return Some((t.name, big.rename_variables(&map, self.mr.ring())));
            }
        }
        None
    }

    /// Coherent extensions of `matching` by one term of each extra polynomial.
    pub fn extensions(&self, matching: &Matching, extra: &[Polynomial]) -> Result<Vec<Matching>> {
        let mut family = self.gens.clone();
        let mut current = vec![matching.clone()];
        for g in extra {
            let mut next = Vec::new();
            for mt in &current {
                next.extend(extend_matching(&family, mt, g)?);
            }
            family.push(g.clone());
            current = next;
        }
        Ok(current)
    }

    pub fn degree_two(&self, monomials: &[Exponent]) -> u64 {
        values_of(monomials, 2)[2]
    }

    pub fn check(&self, matching: &Matching) -> Result<G37Sample> {
        let matrix = matching.matrix(3, 7);
        let defect = self.reference2 - self.degree_two(&matching.monomials);
        if defect > 3 {
            return Err(fail(&format!("degree-2 defect {defect} exceeds 3"), &matrix));
        }
        let mut w_t = Vec::new();
        let mut restrictions = Vec::new();
        for i in 0..7 {
            let cols: Vec<usize> = (0..7).filter(|&c| c != i).collect();
            let r = restrict_matching(&self.minors, matching, 3, 7, &cols)?;
            let deficient = self.degree_two(&r.monomials) != self.reference6;
            if deficient != r.matrix.all_even() {
                return Err(fail(&format!("restriction {} : even entries and degree-2 defect disagree", i + 1), &matrix));
            }
            if deficient {
                w_t.push(i);
            }
            restrictions.push((cols, r));
        }
        if w_t.len() as u64 != defect {
            return Err(fail(&format!("|W_T| = {} but h = {defect}", w_t.len()), &matrix));
        }
        let mut repairs = Vec::new();
        let mut extra = Vec::new();
        for &i in &w_t {
            let (cols, r) = &restrictions[i];
            let (name, g) = self
                .repair_polynomial(&r.matrix, cols)
                .ok_or_else(|| fail(&format!("restriction {} matches no type", i + 1), &r.matrix))?;
            repairs.push(Repair { column: i, type_name: name.to_string(), g: g.to_text(None) });
            extra.push(g);
        }
        let ext = self.extensions(matching, &extra)?;
        if ext.is_empty() {
            return Err(fail("no coherent extension by the G_i", &matrix));
        }
        for x in &ext {
            if self.degree_two(&x.monomials) != self.reference2 {
                return Err(fail("extension does not repair degree 2", &matrix));
            }
        }
        Ok(G37Sample { matrix, defect, w_t, repairs, extensions: ext.len() })
    }

    /// `count` random coherent matchings from a seeded generator.
    pub fn samples(&self, count: usize, seed: u64) -> Vec<Matching> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| random_coherent_matching(&self.gens, &mut rng, 10)).collect()
    }
}

pub fn verify_g37(count: usize, seed: u64) -> Result<Vec<G37Sample>> {
    let ctx = G37::new()?;
    let samples = ctx.samples(count, seed);
    samples.par_iter().map(|mt| ctx.check(mt)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub enum UniversalReport {
    A233(A233Report),
    G36(Vec<TypeReport>),
    G37 { count: usize, seed: u64, samples: Vec<G37Sample> },
}

pub fn verify_universal(case: UniversalCase) -> Result<UniversalReport> {
    Ok(match case {
        UniversalCase::A233 => UniversalReport::A233(verify_a233()?),
        UniversalCase::G36 => UniversalReport::G36(verify_g36()?),
        UniversalCase::G37Sampled { count, seed } => {
            UniversalReport::G37 { count, seed, samples: verify_g37(count, seed)? }
        }
    })
}

impl UniversalReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        match self {
            UniversalReport::A233(r) => {
                s.push_str(&format!("A233: {} vertices, {} orbits\n", r.vertices, r.cases.len()));
                for (k, c) in r.cases.iter().enumerate() {
                    let adds: Vec<String> = c.additions.iter().map(|(i, j)| format!("X{}{}*Delta", i + 1, j + 1)).collect();
                    s.push_str(&format!(
                        "{}\t{}\t{}\t{}{}\n",
                        c.vertex.compact(),
                        c.orbit_size,
                        adds.len(),
                        adds.join(" "),
                        if k == r.diagonal { "\tdiagonal" } else { "" }
                    ));
                }
                if let Some(h) = &r.diagonal_t_h_vector {
                    s.push_str(&format!("diagonal K[T] h-vector {h:?}\n"));
                }
            }
            UniversalReport::G36(types) => {
                for t in types {
                    let sagbi = t.orbits.iter().filter(|o| o.sagbi).count();
                    s.push_str(&format!(
                        "{}: group {}, {} vertices, {} orbits, {} SAGBI, {} repaired by G ({} extensions, {} orbits)\n",
                        t.name,
                        t.group_order,
                        t.vertices,
                        t.orbits.len(),
                        sagbi,
                        t.orbits.len() - sagbi,
                        t.extensions,
                        t.extension_orbits
                    ));
                }
            }
            UniversalReport::G37 { count, seed, samples } => {
                s.push_str(&format!("G37_sampled: {count} samples, seed {seed}\n"));
                let mut by_h = [0usize; 4];
                for x in samples {
                    by_h[x.defect as usize] += 1;
                }
                s.push_str(&format!("defect histogram h=0..3: {by_h:?}\n"));
                for x in samples.iter().filter(|x| x.defect > 0) {
                    let w: Vec<String> = x.w_t.iter().map(|i| (i + 1).to_string()).collect();
                    s.push_str(&format!("{}\th={}\tW_T={{{}}}\n", x.matrix.compact(), x.defect, w.join(",")));
                    for r in &x.repairs {
                        s.push_str(&format!("\tG_{} ({}) = {}\n", r.column + 1, r.type_name, r.g));
                    }
                }
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 8), 1);
        assert_eq!(binomial(9, 8), 9);
        assert_eq!(binomial(10, 8), 45);
    }

    #[test]
    fn type_patterns_have_expected_stabilizers() {
        for t in &TYPES {
            assert_eq!(Group::pattern_stabilizer(&t.pattern()).order(), t.stabilizer, "{}", t.name);
            let e = t.even_matrix();
            assert!(e.all_even());
            assert_eq!(e.row_sums(), vec![20; 3]);
            assert_eq!(e.col_sums(), vec![10; 6]);
        }
    }
}
