//! Runs a [`JobSpec`] and renders its result as TSV or JSON.

use serde_json::{json, Value};

use sagbi_core::hilbert::{krull_dim_monomial, semigroup_hilbert, subalgebra_hilbert, Grading, HilbertData};
use sagbi_core::matchings::{enumerate_vertices, Mode, VertexCatalog};
use sagbi_core::minors::Group;
use sagbi_core::relations::{minimize_relations, sagbi_with_relations, verify_relations};
use sagbi_core::sagbi::{sagbi_by_degree, SagbiStatus};
use sagbi_core::universal::verify_universal;
use sagbi_core::{Error, Exponent, Polynomial};

use crate::job::{Format, Input, JobSpec, MethodArg, Task};
use crate::Failure;

pub fn dispatch(job: &JobSpec) -> Result<String, Failure> {
    let input = job.input.as_ref();
    match &job.task {
        Task::Sagbi { opts, relations, only_relations } => {
            sagbi(input.expect("validated"), opts, *relations, *only_relations, job.format)
        }
        Task::Matchings { mode, full_support, k_max } => {
            matchings(input.expect("validated"), mode, *full_support, *k_max, job.grading, job.format)
        }
        Task::Verify(case) => {
            let r = verify_universal(*case)?;
            Ok(match job.format {
                Format::Tsv => format!("{case}: pass\n{}", r.to_text()),
                Format::Json => json_line(json!({ "case": case.to_string(), "pass": true, "report": r })),
            })
        }
        Task::Hilbert { k_max, method } => hilbert(input.expect("validated"), *k_max, *method, job.grading, job.format),
    }
}

fn json_line(v: Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"))
}

fn status_text(s: &SagbiStatus) -> String {
    match s {
        SagbiStatus::Complete { at } => format!("complete@{at}"),
        SagbiStatus::Truncated { at } => format!("truncated@{at}"),
    }
}

fn monomial(input: &Input, e: &Exponent) -> String {
    Polynomial::monomial(&input.ring, e.clone(), sagbi_core::Rat::ONE).to_text(None)
}

fn sagbi(
    input: &Input,
    opts: &sagbi_core::sagbi::SagbiOptions,
    with_relations: bool,
    only_relations: bool,
    format: Format,
) -> Result<String, Failure> {
    let (res, rho, rels) = sagbi_with_relations(&input.gens, &input.order, opts)?;
    if let Err(r) = verify_relations(&input.gens, &rels)? {
        return Err(Failure::Compute(format!("relation does not vanish: {}", r.to_text(None))));
    }
    let min = minimize_relations(&rels)?;
    let members = res.basis.members();
    let max_sagbi = members.iter().filter_map(|p| p.degree()).max();
    let max_rel = min.max_degree();
    let dash = |d: Option<u64>| d.map_or("-".to_string(), |d| d.to_string());
    let order = &input.order;
    match format {
        Format::Tsv => {
            let mut s = format!("# {}\n", input.description);
            s.push_str("#SAGBI\t#rel\tmax_deg_sagbi\tmax_deg_rel\tstatus\n");
            s.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                members.len(),
                min.len(),
                dash(max_sagbi),
                dash(max_rel),
                status_text(&res.status)
            ));
            if !only_relations {
                for (u, (p, e)) in members.iter().zip(res.basis.initials()).enumerate() {
                    s.push_str(&format!("{}\t{}\t{}\t{}\n", u + 1, dash(p.degree()), monomial(input, e), p.to_text(Some(order))));
                }
            }
            if with_relations {
                let po = sagbi_core::relations::presentation_order(&min.ring);
                for (i, r) in min.generators.iter().enumerate() {
                    s.push_str(&format!("relation\t{}\t{}\t{}\n", i + 1, dash(r.degree()), r.to_text(Some(&po))));
                }
                for (u, img) in rho.images().iter().enumerate() {
                    s.push_str(&format!("rho\t{}\t{}\n", u + 1, img.to_text(Some(&po))));
                }
            }
            Ok(s)
        }
        Format::Json => {
            let mut v = json!({
                "input": input.description,
                "sagbi": members.len(),
                "relations": min.len(),
                "max_deg_sagbi": max_sagbi,
                "max_deg_rel": max_rel,
                "status": res.status,
                "log": res.log,
            });
            if !only_relations {
                v["basis"] = members
                    .iter()
                    .zip(res.basis.initials())
                    .map(|(p, e)| json!({ "polynomial": p.to_text(Some(order)), "initial": monomial(input, e), "terms": p.to_json() }))
                    .collect();
            }
            if with_relations {
                v["ideal"] = min.to_json();
                v["rho"] = rho.images().iter().map(|p| json!(p.to_text(None))).collect();
            }
            Ok(json_line(v))
        }
    }
}

/// Hilbert values of the subalgebra from the initial algebra of a degree-bounded
/// run; the values are exact up to `k_max` either way.
fn reference(input: &Input, k_max: usize, grading: Grading) -> Result<(HilbertData, SagbiStatus), Error> {
    let r = sagbi_by_degree(&input.gens, &input.order, k_max as u64)?;
    let init = r.basis.initials();
    let h = semigroup_hilbert(init, input.ring.degrees(), k_max, grading).with_dim(krull_dim_monomial(init));
    Ok((h, r.status))
}

fn matchings(
    input: &Input,
    mode: &Mode,
    full_support: bool,
    k_max: usize,
    grading: Grading,
    format: Format,
) -> Result<String, Failure> {
    let mr = input.matrix.as_ref().expect("validated");
    let (m, n) = (mr.rows(), mr.cols());
    let group = Group::full(m, n);
    let mut catalog: VertexCatalog = enumerate_vertices(&input.gens, m, n, &group, mode)?;
    let (reference, status) = reference(input, k_max, grading)?;
    catalog.annotate(input.ring.degrees(), &reference);
    let orbits = catalog.orbit_count();
    if full_support {
        catalog.orbits.retain(|o| o.full_support);
    }
    let ref_h = reference.numerator.as_ref().map_or("truncated".to_string(), |h| format!("{h:?}"));
    match format {
        Format::Tsv => {
            let mut s = format!("# {}\n", input.description);
            s.push_str(&format!(
                "# shape {m}x{n}\tgroup {}\tvertices {}{}\torbits {orbits}\tshown {}\treference_h {ref_h} ({})\tgrading {grading}\n",
                catalog.group_order,
                catalog.total,
                if catalog.lower_bound { " (lower bound)" } else { "" },
                catalog.orbit_count(),
                status_text(&status),
            ));
            if let Mode::Random { trials, stall_limit, seed } = mode {
                s.push_str(&format!("# random seed {seed}\tsamples {}\ttrials {trials}\tstall {stall_limit}\n", catalog.samples));
            }
            s.push_str(&catalog.to_tsv());
            Ok(s)
        }
        Format::Json => {
            let mut v = catalog.to_json();
            v["input"] = json!(input.description);
            v["reference"] = json!(reference);
            v["reference_status"] = json!(status);
            v["orbits_total"] = json!(orbits);
            Ok(json_line(v))
        }
    }
}

fn hilbert(input: &Input, k_max: usize, method: MethodArg, grading: Grading, format: Format) -> Result<String, Failure> {
    let h = match method {
        MethodArg::Semigroup => {
            let (h, status) = reference(input, k_max, grading)?;
            if status.is_complete() {
                h
            } else {
                HilbertData::new(h.grading, h.values)
            }
        }
        MethodArg::Linear => subalgebra_hilbert(&input.gens, k_max, &input.order, grading)?,
    };
    match format {
        Format::Tsv => {
            let dim = h.dim.map_or("-".to_string(), |d| d.to_string());
            let num = h.numerator.as_ref().map_or("-".to_string(), |v| format!("{v:?}"));
            let mut s = format!("# {}\n# grading {grading}\tdim {dim}\th_vector {num}\n", input.description);
            for (k, v) in h.values.iter().enumerate() {
                s.push_str(&format!("{k}\t{v}\n"));
            }
            Ok(s)
        }
        Format::Json => Ok(json_line(json!({ "input": input.description, "hilbert": h }))),
    }
}
