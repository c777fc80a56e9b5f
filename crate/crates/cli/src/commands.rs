//! One function per subcommand, each returning a report and its text form.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::thread;

use crystal_forge::catalog::{self, FIXTURE_PRIME};
use crystal_forge::modp::{classify_cyclic, monomial_from_matrix, ModpCrystal};
use crystal_forge::roots::{weyl_elements, weyl_group_order, LieType, RootSystem, WeylElement, DEFAULT_WEYL_BOUND};
use crystal_forge::types::count::MAX_COUNT_N;
use crystal_forge::types::{
    circular_decomposition, count_nu, duality_exponents, gl_block_adjoint_polygon, minimal_decomposition,
    MonomialCrystal, PDivTypeMultiset, ShimuraType,
};
use crystal_forge::witt::{format_slope, hodge_polygon, newton_polygon, NewtonPolygon};
use serde_json::{json, Value};

use crate::input::{self, Input};
use crate::report::{CliError, Output, Report};

type Res = Result<Output, CliError>;

fn polygon_json(np: &NewtonPolygon) -> Value {
    json!({ "slopes": np, "display": np.to_string() })
}

fn pdiv_json(t: &PDivTypeMultiset) -> Value {
    json!({
        "display": t.to_string(),
        "parts": t.to_json(),
        "dimension": t.dimension(),
        "height": t.height(),
    })
}

fn type_json(t: &ShimuraType) -> Value {
    let (big, small) = t.epsilon_sets();
    json!({
        "spec": t.to_spec(),
        "delta": format_slope(&t.delta()),
        "epsilon": big,
        "epsilon_tilde": small,
        "nilpotency_classes": t.nilpotency_classes(),
        "fshw": t.fshw_invariant(),
    })
}

fn not_applicable(command: &str, inp: &Input) -> CliError {
    CliError::Parse(format!("{command} does not accept a {}", inp.kind()))
}

fn dieudonne(crystal: &MonomialCrystal) -> Result<(), CliError> {
    if crystal.exponents().iter().any(|&e| !(0..=1).contains(&e)) {
        return Err(CliError::Domain("exponents must lie in {0, 1}".into()));
    }
    Ok(())
}

pub fn slopes(reference: &str, inp: Input, adjoint: bool, ascii: bool) -> Res {
    let (np, note) = match &inp {
        Input::Type(t) => (t.adjoint_newton_polygon(), "adjoint crystal of the type"),
        Input::Crystal { crystal, adjoint: true, .. } => (crystal.newton_polygon(), "adjoint crystal"),
        Input::Crystal { crystal, spec, .. } if adjoint => {
            let n = spec.as_ref().map_or(1, |t| t.n());
            (gl_block_adjoint_polygon(&crystal.newton_polygon(), n)?, "adjoint of the block-cyclic module")
        }
        Input::Crystal { crystal, .. } => (crystal.newton_polygon(), "orbit formula"),
        Input::Matrix(map) if adjoint => {
            (gl_block_adjoint_polygon(&newton_polygon(map)?, 1)?, "adjoint of the lifted module")
        }
        Input::Matrix(map) => (newton_polygon(map)?, "characteristic polynomial of a Frobenius power"),
        Input::Family(_) => return Err(not_applicable("slopes", &inp)),
    };
    let mut result = polygon_json(&np);
    let picture = np.render_ascii();
    if ascii {
        result["ascii"] = Value::String(picture.clone());
    }
    let report = Report::new("slopes", json!(reference), result).note(note);
    Ok(Output::new(report, format!("Newton polygon {np}\n{picture}")))
}

pub fn hodge(reference: &str, inp: Input) -> Res {
    let hp = match &inp {
        Input::Type(t) => t.adjoint_crystal().hodge_polygon(),
        Input::Crystal { crystal, .. } => crystal.hodge_polygon(),
        Input::Matrix(map) => hodge_polygon(map)?,
        Input::Family(_) => return Err(not_applicable("hodge", &inp)),
    };
    let report = Report::new("hodge", json!(reference), polygon_json(&hp));
    Ok(Output::new(report, format!("Hodge polygon {hp}\n{}", hp.render_ascii())))
}

pub fn ordinary(reference: &str, inp: Input, spec: Option<ShimuraType>) -> Res {
    let (computed, minimal, ordinary) = match &inp {
        Input::Type(t) => {
            let np = t.adjoint_newton_polygon();
            (np.clone(), np, true)
        }
        Input::Crystal { crystal, spec: own, adjoint, .. } => {
            let t = spec.as_ref().or(own.as_ref()).ok_or_else(|| CliError::Parse("ordinary needs --spec".into()))?;
            if *adjoint {
                let (c, m) = (crystal.newton_polygon(), t.adjoint_newton_polygon());
                let ok = c == m;
                (c, m, ok)
            } else {
                let v = crystal_forge::types::sh_ordinary_verdict(&crystal.newton_polygon(), t)?;
                (v.adjoint, v.expected, v.ordinary)
            }
        }
        Input::Matrix(map) => {
            let t = spec.as_ref().ok_or_else(|| CliError::Parse("ordinary needs --spec".into()))?;
            let v = crystal_forge::types::sh_ordinary_verdict(&newton_polygon(map)?, t)?;
            (v.adjoint, v.expected, v.ordinary)
        }
        Input::Family(_) => return Err(not_applicable("ordinary", &inp)),
    };
    let result = json!({
        "ordinary": ordinary,
        "computed": polygon_json(&computed),
        "minimal": polygon_json(&minimal),
    });
    let verdict = if ordinary { "Sh-ordinary" } else { "not Sh-ordinary" };
    let text = format!("{verdict}\ncomputed {computed}\nminimal  {minimal}\n");
    Ok(Output::new(Report::new("ordinary", json!(reference), result), text))
}

fn modp_fshw(c: &ModpCrystal, blocks: Option<&[usize]>) -> Result<Value, CliError> {
    let gl = c.gl_fshw_invariant()?;
    let fshw = match blocks {
        Some(b) => c.block_fshw_invariant(b)?,
        None => gl,
    };
    Ok(json!({
        "fshw": fshw,
        "gl_fshw": gl,
        "hasse_witt": c.hasse_witt(),
        "dimension": c.dimension(),
        "ordinary": c.is_ordinary()?,
    }))
}

pub fn fshw(reference: &str, inp: Input, p: Option<u64>) -> Res {
    let result = match &inp {
        Input::Type(t) => {
            let np = t.adjoint_newton_polygon();
            json!({ "fshw": t.fshw_invariant(), "slope_minus_delta": np.multiplicity(-t.delta()) })
        }
        Input::Crystal { spec: Some(t), adjoint: true, .. } => json!({ "fshw": t.fshw_invariant() }),
        Input::Crystal { crystal, blocks, .. } => {
            dieudonne(crystal)?;
            let c = ModpCrystal::from_monomial(crystal, p.unwrap_or(FIXTURE_PRIME), 1)?;
            modp_fshw(&c, blocks.as_deref())?
        }
        Input::Matrix(map) => modp_fshw(&ModpCrystal::from_lift(map)?, None)?,
        Input::Family(_) => return Err(not_applicable("fshw", &inp)),
    };
    let text = format!("FSHW invariant {}\n", result["fshw"]);
    Ok(Output::new(Report::new("fshw", json!(reference), result), text))
}

pub fn decompose(reference: &str, inp: Input, primes: &[u64]) -> Res {
    let (result, text) = match &inp {
        Input::Type(t) => {
            let dec = minimal_decomposition(t);
            let pos = t.positive_pdiv_type();
            let neg = t.negative_pdiv_type();
            let mut duality = serde_json::Map::new();
            for &p in primes {
                duality.insert(p.to_string(), json!(duality_exponents(t, p)));
            }
            let mut text = format!("positive type {pos}\nnegative type {neg}\n");
            for (j, piece) in dec.pieces.iter().enumerate() {
                let slope = format_slope(&piece.slope);
                let _ = writeln!(text, "  u_{}: a = {}, kind {}, slope {slope}, roots {:?}", j + 1, piece.a, piece.kind, piece.coords);
            }
            let result = json!({
                "type": type_json(t),
                "positive_type": pdiv_json(&pos),
                "negative_type": pdiv_json(&neg),
                "decomposition": dec,
                "duality_exponents": duality,
            });
            (result, text)
        }
        Input::Crystal { crystal, .. } => {
            dieudonne(crystal)?;
            let ty = circular_decomposition(crystal);
            (json!({ "type": pdiv_json(&ty) }), format!("{ty}\n"))
        }
        Input::Matrix(map) => {
            let ty = circular_decomposition(&monomial_from_matrix(map)?);
            (json!({ "type": pdiv_json(&ty) }), format!("{ty}\n"))
        }
        Input::Family(_) => return Err(not_applicable("decompose", &inp)),
    };
    Ok(Output::new(Report::new("decompose", json!(reference), result), text))
}

pub fn classify(reference: &str, inp: Input) -> Res {
    let ty = match &inp {
        Input::Crystal { crystal, .. } => classify_cyclic(crystal)?,
        Input::Matrix(map) => classify_cyclic(&monomial_from_matrix(map)?)?,
        _ => return Err(not_applicable("classify-cyclic", &inp)),
    };
    let text = format!("{ty}\n");
    Ok(Output::new(Report::new("classify-cyclic", json!(reference), pdiv_json(&ty)), text))
}

pub fn count(n: usize) -> Res {
    if !(1..=MAX_COUNT_N).contains(&n) {
        return Err(CliError::Domain(format!("n must lie in 1..={MAX_COUNT_N}")));
    }
    let (formula, oracle) = count_nu(n);
    let result = json!({ "n": n, "formula": formula, "oracle": oracle, "agree": formula == oracle });
    let text = format!("N({n}): formula {formula}, oracle {oracle}\n");
    let mut out = Output::new(Report::new("count-nu", json!(n), result), text);
    out.failed = formula != oracle;
    Ok(out)
}

pub fn catalog_list() -> Res {
    let items = catalog::list();
    let mut text = String::new();
    for i in &items {
        let param = i.param.as_ref().map_or(String::new(), |p| format!(" [{} {}..={}]", p.name, p.min, p.max));
        let _ = writeln!(text, "{:<18} {}{param}", i.id, i.title);
    }
    Ok(Output::new(Report::new("catalog list", Value::Null, json!(items)), text))
}

pub fn catalog_show(reference: &str, param: Option<usize>) -> Res {
    let entry = input::catalog_entry(reference, param)?;
    let checks = entry.verify()?;
    let mut text = format!("{} ({})\n", entry.id, entry.title);
    for c in &checks {
        let mark = match (c.pass, c.counts()) {
            (true, _) => "ok",
            (false, true) => "MISMATCH",
            (false, false) => "disputed",
        };
        let _ = writeln!(text, "  {:<22} {:<40} {mark}", c.key, c.actual);
    }
    let failed = checks.iter().any(|c| c.counts() && !c.pass);
    let result = json!({ "id": entry.id, "title": entry.title, "param": entry.param, "checks": checks });
    let mut out = Output::new(Report::new("catalog show", json!(reference), result), text);
    out.failed = failed;
    Ok(out)
}

pub fn roots(rs: &RootSystem) -> Res {
    let positive: Vec<&[i64]> = (0..rs.num_positive()).map(|i| rs.root(i)).collect();
    let autos: Vec<Vec<usize>> = rs.diagram_automorphisms().iter().map(|a| a.images().to_vec()).collect();
    let result = json!({
        "name": rs.name(),
        "rank": rs.rank(),
        "num_positive": rs.num_positive(),
        "positive_roots": positive,
        "highest_root": rs.highest_root(),
        "minuscule_nodes": rs.minuscule_nodes(),
        "weyl_order": weyl_group_order(rs.lie_type(), rs.rank()),
        "diagram_automorphisms": autos,
    });
    let text = format!(
        "{}: {} positive roots, highest root {:?}, minuscule nodes {:?}, |W| = {}\n",
        rs.name(),
        rs.num_positive(),
        rs.highest_root(),
        rs.minuscule_nodes(),
        weyl_group_order(rs.lie_type(), rs.rank())
    );
    Ok(Output::new(Report::new("roots", json!(rs.name()), result), text))
}

pub fn nilradical(rs: &RootSystem, nodes: &[usize]) -> Res {
    let set: BTreeSet<usize> = nodes.iter().copied().collect();
    let roots: Vec<&[i64]> = rs.intersect_nilradicals(&set)?.into_iter().map(|i| rs.root(i)).collect();
    let text = format!("dim of the intersection over {set:?}: {}\n", roots.len());
    let result = json!({ "nodes": set, "dimension": roots.len(), "roots": roots });
    Ok(Output::new(Report::new("nilradical", json!(rs.name()), result), text))
}

/// Worker count from `CRYSTAL_FORGE_THREADS`, else the machine's parallelism.
pub fn thread_count() -> Result<usize, CliError> {
    let default = thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var("CRYSTAL_FORGE_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) | Err(_) => Err(CliError::Parse(format!("CRYSTAL_FORGE_THREADS={v:?} is not a positive integer"))),
            Ok(k) => Ok(k),
        },
        Err(_) => Ok(default),
    }
}

fn scan_max(rs: &RootSystem, ws: &[WeylElement], x: usize, y: usize, threads: usize) -> Result<usize, CliError> {
    let chunk = ws.len().div_ceil(threads).max(1);
    thread::scope(|s| {
        let handles: Vec<_> = ws
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter().try_fold(0, |best, w| rs.projection_dim(x, w, y).map(|d| best.max(d)))
                })
            })
            .collect();
        handles.into_iter().try_fold(0, |best, h| Ok(best.max(h.join().expect("worker panicked")?)))
    })
}

pub fn weyl_scan(rs: &RootSystem, x: Option<usize>, y: Option<usize>, allow_e7: bool) -> Res {
    if rs.lie_type() == LieType::E7 && !allow_e7 {
        return Err(CliError::Domain("E7 has 2903040 Weyl elements; pass --allow-e7 to scan it".into()));
    }
    let bound = if allow_e7 { weyl_group_order(rs.lie_type(), rs.rank()) } else { DEFAULT_WEYL_BOUND };
    let ws = weyl_elements(rs, bound.max(DEFAULT_WEYL_BOUND))?;
    let threads = thread_count()?;
    let minuscule: Vec<usize> = rs.minuscule_nodes().into_iter().collect();
    let xs = x.map_or(minuscule.clone(), |v| vec![v]);
    let ys = y.map_or(minuscule, |v| vec![v]);
    let mut pairs = Vec::new();
    let mut text = format!("{}: {} Weyl elements\n", rs.name(), ws.len());
    let mut failed = false;
    for &x in &xs {
        for &y in &ys {
            let bound = rs.intersect_nilradicals(&BTreeSet::from([x, y]))?.len();
            let max = scan_max(rs, &ws, x, y, threads)?;
            let at_identity = rs.projection_dim(x, &WeylElement::identity(rs), y)?;
            let holds = max == bound && at_identity == bound;
            failed |= !holds;
            let _ = writeln!(text, "  ({x}, {y}): max {max}, identity {at_identity}, intersection {bound}");
            pairs.push(json!({ "x": x, "y": y, "max": max, "at_identity": at_identity, "intersection": bound, "holds": holds }));
        }
    }
    let result = json!({ "weyl_order": ws.len(), "pairs": pairs });
    let mut out = Output::new(Report::new("weyl-scan", json!(rs.name()), result), text);
    out.failed = failed;
    Ok(out)
}
