//! Exact self-checks behind `boxsim verify`.

use boxsim_core::behavior::{pr_for_facet, FACET_COUNT};
use boxsim_core::boxworld::{feasibility_search, matches_exactly, MAX_SEARCH_LAMBDA};
use boxsim_core::{Behavior, ExactBehavior, Partition, PrRelabeling, Strategy};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Flip Alice's first table entry in the input-signaling strategy.
    AliceTable,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

fn strategies(fault: Option<Fault>) -> [(&'static str, Strategy); 3] {
    let mut input = Strategy::input_signaling();
    if fault == Some(Fault::AliceTable) {
        input.alice_table_mut()[0] ^= 1;
    }
    [
        ("input", input),
        ("output", Strategy::output_signaling()),
        ("xor", Strategy::xor_signaling()),
    ]
}

pub fn run_checks(fault: Option<Fault>) -> Vec<Check> {
    let mut out = Vec::new();
    let pr = ExactBehavior::pr_box(PrRelabeling::CANONICAL);
    let pr_f = pr.to_behavior();

    for (name, s) in strategies(fault) {
        let exact = s.induced_exact();
        out.push(check(
            &format!("pr-reproduction/{name}"),
            exact.same_as(&pr),
            format!("lambda_card {}, denominator {}", s.lambda_card(), exact.denominator()),
        ));
        out.push(check(
            &format!("pointwise-pr/{name}"),
            s.satisfies_pr_pointwise(),
            "a ^ b = x y for every (x, y, lambda)",
        ));
    }

    let parts = Partition::enumerate();
    let nonconstant = parts.iter().filter(|p| !p.is_constant()).count();
    out.push(check(
        "partitions/count",
        parts.len() == 15 && nonconstant == 14,
        format!("{} total, {nonconstant} non-constant", parts.len()),
    ));
    let closed = (0u16..256).all(|code| {
        let f = |y: u8, b: u8| (code >> (2 * (2 * y + b))) & 3;
        parts.contains(&Partition::from_function(f))
    });
    out.push(check(
        "partitions/closure",
        closed,
        "all 256 functions {0,1}^2 -> {0..3} land in the enumeration",
    ));

    let and_free = (1..=MAX_SEARCH_LAMBDA).all(|l| matches!(feasibility_search(&pr_f, &Partition::AND, l), Ok(None)));
    out.push(check(
        "feasibility/and",
        and_free,
        format!("no strategy for lambda_card 1..={MAX_SEARCH_LAMBDA}"),
    ));
    for (name, partition) in [
        ("input", Partition::INPUT),
        ("output", Partition::OUTPUT),
        ("xor", Partition::XOR),
    ] {
        let found = match feasibility_search(&pr_f, &partition, 2) {
            Ok(Some(s)) => matches_exactly(&s.induced_exact(), &pr_f),
            _ => false,
        };
        out.push(check(&format!("feasibility/{name}"), found, "witness at lambda_card 2"));
    }

    let vertices = Behavior::deterministic_vertices();
    let distinct = (0..vertices.len()).all(|i| (0..i).all(|j| vertices[i] != vertices[j]));
    let local = vertices
        .iter()
        .all(|v| v.max_chsh() <= 2.0 + 1e-12 && v.saturated_facets(1e-12).len() == 4);
    out.push(check(
        "polytope/vertices",
        vertices.len() == 16 && distinct && local,
        "16 local vertices, each saturating 4 facets",
    ));
    let boxes = (0..FACET_COUNT).all(|f| {
        let values = Behavior::pr_box(pr_for_facet(f)).chsh_values();
        values.iter().filter(|&&v| (v - 4.0).abs() < 1e-12).count() == 1 && (values[f] - 4.0).abs() < 1e-12
    });
    out.push(check(
        "polytope/facets",
        boxes,
        format!("{FACET_COUNT} facets, one PR box reaching 4 on each"),
    ));
    out
}
