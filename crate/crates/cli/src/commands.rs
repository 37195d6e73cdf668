use std::collections::BTreeSet;
use std::fmt::Write;

use hypercrn::centrality::{reaction_centrality, species_centrality, CentralityError};
use hypercrn::kinetics::{flux, ode_rhs, ode_symbolic, parse_parameters, KineticState, Num, Parameters, Scalar};
use hypercrn::loops::LoopError;
use hypercrn::{
    adjacency_matrix, complex_matrices, conservation_laws, enumerate_closed_loops, format_canonical, hypercycle_basis,
    hyperspanning_forest, stoichiometric_matrix, to_dot, BasisSet, CentralityReport, ClosedLoop, IntegerMatrix,
    LoopOptions, ReactionNetwork, Traversal,
};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::{read_source, Command, Failure, Format, LoopArgs, EXIT_BUDGET, EXIT_PARSE};

pub(crate) fn execute(command: &Command, net: &ReactionNetwork) -> Result<String, Failure> {
    let format = command.input().format;
    match command {
        Command::Parse(_) => Ok(parse(net, format)),
        Command::Matrices(_) => Ok(matrices(net, format)),
        Command::Cycles(_) => Ok(cycles(net, format)),
        Command::Conservation(_) => Ok(conservation(net, format)),
        Command::Forest(_) => Ok(forest(net, format)),
        Command::Loops { loops: args, list, .. } => loops(net, args, *list, format),
        Command::Centrality {
            loops: args, reactions, ..
        } => centrality(net, args, *reactions, format),
        Command::Ode { rates, .. } => match rates {
            None => Ok(ode(net, format)),
            Some(path) => {
                let text = read_source(path)?;
                let params = parse_parameters(&text, net).map_err(|e| Failure {
                    code: match e {
                        hypercrn::kinetics::KineticsError::Syntax { .. } => EXIT_PARSE,
                        _ => crate::EXIT_USAGE,
                    },
                    message: format!("{}: {e}", path.display()),
                })?;
                Ok(ode_values(net, &params, format))
            }
        },
        Command::ExportDot { highlight_forest, .. } => Ok(export_dot(net, *highlight_forest, format)),
    }
}

fn json_text(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

fn int(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(i) => json!(i),
        Err(_) => json!(v.to_string()),
    }
}

fn matrix_json(m: &IntegerMatrix) -> Value {
    json!({
        "rows": m.row_labels().to_vec(),
        "cols": m.col_labels().to_vec(),
        "entries": m.rows().iter().map(|r| r.iter().map(int).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

/// `2 A + B - C`; `0` for the zero vector.
fn expression(labels: &[String], values: &[BigInt]) -> String {
    let mut out = String::new();
    for (label, v) in labels.iter().zip(values) {
        if v.is_zero() {
            continue;
        }
        let sign = match (out.is_empty(), v.is_negative()) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        out.push_str(sign);
        let mag = v.abs();
        if mag != BigInt::from(1) {
            write!(out, "{mag} ").unwrap();
        }
        out.push_str(label);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn basis_matrix(basis: &BasisSet, cols: &[String], prefix: &str) -> IntegerMatrix {
    let rows: Vec<String> = (1..=basis.rank()).map(|i| format!("{prefix}{i}")).collect();
    IntegerMatrix::new(
        hypercrn::zmodule::index_set(rows),
        hypercrn::zmodule::index_set(cols.iter().cloned()),
        basis.vectors.iter().map(|v| v.values().to_vec()).collect(),
    )
    .expect("basis vectors share one index")
}

fn parse(net: &ReactionNetwork, format: Format) -> String {
    let canonical = format_canonical(net);
    match format {
        Format::Table => format!(
            "# species: {}\n# reactions: {}\n{canonical}",
            net.num_species(),
            net.num_reactions()
        ),
        Format::Json => json_text(json!({
            "canonical": canonical,
            "num_species": net.num_species(),
            "num_reactions": net.num_reactions(),
            "species": net.species().to_vec(),
            "reactions": net.reaction_ids().to_vec(),
        })),
    }
}

fn matrices(net: &ReactionNetwork, format: Format) -> String {
    let (a, b) = complex_matrices(net);
    let n = stoichiometric_matrix(net);
    let l = adjacency_matrix(net);
    match format {
        Format::Table => {
            let mut out = String::new();
            for (title, m) in [
                ("A (reactants)", &a),
                ("B (products)", &b),
                ("N (stoichiometry)", &n),
                ("L (adjacency)", &l),
            ] {
                writeln!(out, "{title}\n{m}").unwrap();
            }
            out
        }
        Format::Json => json_text(json!({
            "A": matrix_json(&a),
            "B": matrix_json(&b),
            "N": matrix_json(&n),
            "L": matrix_json(&l),
        })),
    }
}

fn cycles(net: &ReactionNetwork, format: Format) -> String {
    let n = stoichiometric_matrix(net);
    let basis = hypercycle_basis(&n);
    let ids = net.reaction_ids();
    match format {
        Format::Table => {
            let mut out = format!("hypercyclomatic number: {}\n", basis.rank());
            if basis.rank() > 0 {
                writeln!(out, "{}", basis_matrix(&basis, ids, "y")).unwrap();
                for (i, v) in basis.vectors.iter().enumerate() {
                    writeln!(out, "y{}: {}", i + 1, expression(ids, v.values())).unwrap();
                }
            }
            out
        }
        Format::Json => json_text(json!({
            "hypercyclomatic_number": basis.rank(),
            "reactions": ids.to_vec(),
            "basis": basis.vectors.iter().map(|v| v.values().iter().map(int).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })),
    }
}

fn conservation(net: &ReactionNetwork, format: Format) -> String {
    let n = stoichiometric_matrix(net);
    let basis = conservation_laws(&n);
    let sp = net.species();
    match format {
        Format::Table => {
            let mut out = format!("conservation laws: {}\n", basis.rank());
            if basis.rank() > 0 {
                writeln!(out, "{}", basis_matrix(&basis, sp, "z")).unwrap();
                for (i, v) in basis.vectors.iter().enumerate() {
                    writeln!(out, "z{}: {}", i + 1, expression(sp, v.values())).unwrap();
                }
            }
            out
        }
        Format::Json => json_text(json!({
            "rank": basis.rank(),
            "species": sp.to_vec(),
            "basis": basis.vectors.iter().map(|v| v.values().iter().map(int).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })),
    }
}

fn forest(net: &ReactionNetwork, format: Format) -> String {
    let ids: Vec<String> = hyperspanning_forest(net)
        .into_iter()
        .map(|j| net.reaction_ids()[j].clone())
        .collect();
    match format {
        Format::Table => {
            let mut out = format!("# rank: {}\n", ids.len());
            for id in &ids {
                writeln!(out, "{id}").unwrap();
            }
            out
        }
        Format::Json => json_text(json!({ "rank": ids.len(), "forest": ids })),
    }
}

fn loop_options(args: &LoopArgs, traversal: Traversal) -> LoopOptions {
    LoopOptions {
        max_length: args.max_length.map(|k| k as usize),
        traversal,
        state_budget: Some(args.budget),
        ..LoopOptions::default()
    }
}

fn selected(args: &LoopArgs) -> Traversal {
    if args.undirected {
        Traversal::Undirected
    } else {
        Traversal::Directed
    }
}

fn traversal_name(t: Traversal) -> &'static str {
    match t {
        Traversal::Directed => "directed",
        Traversal::Undirected => "undirected",
    }
}

fn loop_failure(e: LoopError) -> Failure {
    match e {
        LoopError::BudgetExceeded(b) => Failure {
            code: EXIT_BUDGET,
            message: format!("loop search exceeded the budget of {b} visited states"),
        },
        other => Failure::usage(other.to_string()),
    }
}

fn find_loops(net: &ReactionNetwork, args: &LoopArgs) -> Result<Vec<ClosedLoop>, Failure> {
    enumerate_closed_loops(net, &loop_options(args, selected(args))).map_err(loop_failure)
}

fn loops(net: &ReactionNetwork, args: &LoopArgs, list: bool, format: Format) -> Result<String, Failure> {
    let primary = selected(args);
    let found = find_loops(net, args)?;
    // the other reading, reported for comparison
    let other = match primary {
        Traversal::Directed => Traversal::Undirected,
        Traversal::Undirected => Traversal::Directed,
    };
    let other_count = match enumerate_closed_loops(net, &loop_options(args, other)) {
        Ok(l) => Some(l.len()),
        Err(LoopError::BudgetExceeded(_)) => None,
        Err(e) => return Err(loop_failure(e)),
    };
    let counts = |t: Traversal| if t == primary { Some(found.len()) } else { other_count };
    Ok(match format {
        Format::Table => {
            let mut out = format!("loop_total: {} ({})\n", found.len(), traversal_name(primary));
            for t in [Traversal::Directed, Traversal::Undirected] {
                match counts(t) {
                    Some(c) => writeln!(out, "{}: {c}", traversal_name(t)).unwrap(),
                    None => writeln!(out, "{}: budget of {} states exceeded", traversal_name(t), args.budget).unwrap(),
                }
            }
            if list {
                for l in &found {
                    writeln!(out, "{}", l.display(net)).unwrap();
                }
            }
            out
        }
        Format::Json => {
            let mut v = json!({
                "loop_total": found.len(),
                "traversal": traversal_name(primary),
                "budget": args.budget,
                "max_length": args.max_length,
                "counts": {
                    "directed": counts(Traversal::Directed),
                    "undirected": counts(Traversal::Undirected),
                },
            });
            if list {
                v["loops"] = found
                    .iter()
                    .map(|l| {
                        json!({
                            "species": l.species().iter().map(|&s| net.species()[s].clone()).collect::<Vec<_>>(),
                            "reactions": l.reactions().iter().map(|&r| net.reaction_ids()[r].clone()).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
            }
            json_text(v)
        }
    })
}

fn centrality(net: &ReactionNetwork, args: &LoopArgs, reactions: bool, format: Format) -> Result<String, Failure> {
    let found = find_loops(net, args)?;
    let report = if reactions {
        reaction_centrality(net, &found)
    } else {
        species_centrality(net, &found)
    }
    .map_err(|e| match e {
        CentralityError::Loops(l) => loop_failure(l),
        other => Failure::usage(other.to_string()),
    })?;
    Ok(match format {
        Format::Table => centrality_table(&report),
        Format::Json => json_text(centrality_json(&report)),
    })
}

fn class(report: &CentralityReport, i: usize) -> &'static str {
    if report.high.contains(&i) {
        "high"
    } else if report.low.contains(&i) {
        "low"
    } else {
        ""
    }
}

fn centrality_table(report: &CentralityReport) -> String {
    let mut out = String::new();
    writeln!(out, "loops: {}", report.loop_total).unwrap();
    writeln!(out, "mean: {:.6}", report.mean).unwrap();
    writeln!(out, "std: {:.6} (population {:.6})", report.std, report.population_std).unwrap();
    writeln!(
        out,
        "high above {:.6}, low below {:.6}",
        report.hi_threshold, report.lo_threshold
    )
    .unwrap();
    let width = report
        .labels
        .iter()
        .map(|l| l.chars().count())
        .max()
        .unwrap_or(0)
        .max(5);
    let cw = report.loop_total.to_string().len().max(5);
    writeln!(
        out,
        "{:<width$}  {:>cw$}  {:>10}  class",
        "label", "count", "proportion"
    )
    .unwrap();
    for i in report.ranking() {
        let p = report.counts[i] as f64 / report.loop_total as f64;
        let line = format!(
            "{:<width$}  {:>cw$}  {:>10.6}  {}",
            report.labels[i],
            report.counts[i],
            p,
            class(report, i)
        );
        writeln!(out, "{}", line.trim_end()).unwrap();
    }
    out
}

fn centrality_json(report: &CentralityReport) -> Value {
    let items: Vec<Value> = report
        .ranking()
        .into_iter()
        .map(|i| {
            json!({
                "label": report.labels[i],
                "count": report.counts[i],
                "proportion": report.counts[i] as f64 / report.loop_total as f64,
                "class": class(report, i),
            })
        })
        .collect();
    json!({
        "loop_total": report.loop_total,
        "mean": report.mean,
        "std": report.std,
        "population_std": report.population_std,
        "hi_threshold": report.hi_threshold,
        "lo_threshold": report.lo_threshold,
        "high": report.high_labels(),
        "low": report.low_labels(),
        "items": items,
    })
}

fn ode(net: &ReactionNetwork, format: Format) -> String {
    let eqs = ode_symbolic(net);
    match format {
        Format::Table => eqs.iter().map(|l| format!("{l}\n")).collect(),
        Format::Json => json_text(json!({
            "species": net.species().to_vec(),
            "equations": eqs,
        })),
    }
}

fn evaluated<T: Scalar>(
    net: &ReactionNetwork,
    state: &KineticState<T>,
    format: Format,
    to_json: impl Fn(&T) -> Value,
) -> String
where
    for<'a> Num<'a, T>: std::fmt::Display,
{
    let xdot = ode_rhs(net, state);
    let j = flux(net, state);
    match format {
        Format::Table => {
            let mut out = String::new();
            for (s, v) in net.species().iter().zip(&xdot) {
                writeln!(out, "d[{s}]/dt = {}", Num(v)).unwrap();
            }
            for (r, v) in net.reaction_ids().iter().zip(&j) {
                writeln!(out, "J[{r}] = {}", Num(v)).unwrap();
            }
            out
        }
        Format::Json => json_text(json!({
            "species": net.species().to_vec(),
            "derivatives": xdot.iter().map(&to_json).collect::<Vec<_>>(),
            "reactions": net.reaction_ids().to_vec(),
            "flux": j.iter().map(&to_json).collect::<Vec<_>>(),
        })),
    }
}

fn ode_values(net: &ReactionNetwork, params: &Parameters, format: Format) -> String {
    match params {
        Parameters::Exact(state) => evaluated(net, state, format, |q| json!(Num(q).to_string())),
        Parameters::Floating(state) => evaluated(net, state, format, |f| json!(f)),
    }
}

fn export_dot(net: &ReactionNetwork, highlight: bool, format: Format) -> String {
    let forest: Option<BTreeSet<String>> = highlight.then(|| {
        hyperspanning_forest(net)
            .into_iter()
            .map(|j| net.reaction_ids()[j].clone())
            .collect()
    });
    let dot = to_dot(net, forest.as_ref());
    match format {
        Format::Table => dot,
        Format::Json => json_text(json!({ "dot": dot })),
    }
}
