//! The `gauss-schemes` command-line tool.
//!
//! Exit status: 0 on success, 1 when the input violates a precondition of
//! the computation, 2 on a usage error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::coding::{build_inert_constellation, build_split_constellation, mannheim_distance, Constellation};
use crate::gaussian::{factor, two_square, GaussInt};
use crate::quotient_ring::{PointOrdering, QuotientRing};
use crate::quotient_scheme::{quotient, quotient_chain};
use crate::scheme::{
    block_circulant_form, build_scheme, closed_subsets, eigenvalues, is_primitive_bruteforce,
    is_primitive_connectivity, is_primitive_by_primality, is_pseudocyclic, relation_vector, signed_refinement,
    verify_axioms, AssociationScheme, OrbitalScheme, RelationVector, MAX_BRUTEFORCE_CLASSES,
};
use crate::sweep::{sweep, Check};
use crate::tiling::{
    classify_tile, clean_quotient_check, fundamental_representatives, is_clean_boundary, is_clean_odd, render_svg,
    LabelMode, SvgOptions,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "gauss-schemes", version, about = "Association schemes on the quotients Z[i]/(alpha)")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Shorthand for --format json.
    #[arg(long, global = true, conflicts_with = "format")]
    pub json: bool,
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Ordering {
    Coords,
    Gfp,
}

impl From<Ordering> for PointOrdering {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Coords => PointOrdering::Coords,
            Ordering::Gfp => PointOrdering::Gfp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Labels {
    None,
    Index,
    Gfp,
}

fn parse_gauss(s: &str) -> Result<GaussInt, String> {
    s.parse::<GaussInt>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct AlphaArg {
    /// Modulus, e.g. 3+2i, -1-1i, 7, 2i.
    #[arg(long, value_parser = parse_gauss, allow_hyphen_values = true)]
    pub alpha: GaussInt,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor a Gaussian integer into primes.
    Factor(AlphaArg),
    /// Residues, invariant factors and coordinates of Z[i]/(alpha).
    Ring {
        #[command(flatten)]
        alpha: AlphaArg,
        #[arg(long, value_enum, default_value_t = Ordering::Coords)]
        ordering: Ordering,
        /// Residue table (the default text output).
        #[arg(long)]
        table: bool,
    },
    /// The rotation-orbital scheme of Z[i]/(alpha).
    Scheme(SchemeArgs),
    /// Quotient schemes and divisor chains.
    Quotient(QuotientArgs),
    /// Tile type, cleanliness, fundamental representatives and SVG.
    Tiles(TilesArgs),
    /// GF(p) and GF(p^2) constellations and Mannheim distances.
    Code(CodeArgs),
    /// Property checks for every alpha up to associates.
    Sweep {
        #[arg(long, default_value_t = 100)]
        norm_bound: i64,
        /// axioms, primitivity, clean or circulant; all when omitted.
        #[arg(long = "check")]
        checks: Vec<Check>,
    },
}

#[derive(Debug, Args)]
pub struct SchemeArgs {
    #[command(flatten)]
    pub alpha: AlphaArg,
    #[arg(long, value_enum, default_value_t = Ordering::Coords)]
    pub ordering: Ordering,
    /// Print only the relation vector.
    #[arg(long)]
    pub vector: bool,
    /// Orbit members of each class.
    #[arg(long)]
    pub orbits: bool,
    /// First rows of the adjacency matrices.
    #[arg(long)]
    pub circulant: bool,
    /// Intersection numbers p_ij^k.
    #[arg(long, visible_alias = "tensor")]
    pub intersection: bool,
    /// Check the five scheme conditions.
    #[arg(long, visible_alias = "verify")]
    pub axioms: bool,
    /// Closed class sets and the primitivity verdict.
    #[arg(long)]
    pub primitivity: bool,
    /// Eigenmatrix from character sums.
    #[arg(long, visible_alias = "pmatrix")]
    pub eigen: bool,
    /// Write each adjacency matrix as DIR/A<k>.csv, points in the chosen ordering.
    #[arg(long, value_name = "DIR")]
    pub matrices: Option<PathBuf>,
    /// Per-class sums of p_ii^k and whether they are constant.
    #[arg(long)]
    pub pseudocyclic: bool,
    /// Classes acting as involutions and their composition table.
    #[arg(long)]
    pub involutions: bool,
    /// The {+-1}-orbital refinement and its merge map.
    #[arg(long)]
    pub refine: bool,
}

#[derive(Debug, Args)]
pub struct QuotientArgs {
    #[command(flatten)]
    pub alpha: AlphaArg,
    /// Closed class set, comma separated. Tokens containing `i` are residue
    /// representatives, others class indices. Repeat to quotient again.
    #[arg(long = "zero-tilde", required_unless_present = "chain", allow_hyphen_values = true)]
    pub zero_tilde: Vec<String>,
    /// Print only the relation vector of the last quotient.
    #[arg(long)]
    pub vector: bool,
    /// The divisor chain of alpha with its involution sets.
    #[arg(long, conflicts_with = "zero_tilde")]
    pub chain: bool,
}

#[derive(Debug, Args)]
pub struct TilesArgs {
    #[command(flatten)]
    pub alpha: AlphaArg,
    /// Tile type of alpha.
    #[arg(long)]
    pub classify: bool,
    /// Boundary and odd-order cleanliness verdicts.
    #[arg(long)]
    pub clean: bool,
    /// Residue representatives in the fundamental parallelogram.
    #[arg(long)]
    pub reps: bool,
    /// Check that every quotient along a divisor chain stays clean.
    #[arg(long)]
    pub quotient_check: bool,
    /// Write an SVG drawing of the tiling to this file.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Half-width of the drawn window in lattice units.
    #[arg(long)]
    pub window: Option<i64>,
    #[arg(long, value_enum, default_value_t = Labels::None)]
    pub labels: Labels,
    /// Colour residues by scheme class.
    #[arg(long)]
    pub orbit_colors: bool,
    /// Colour by quotient point class for this closed class set.
    #[arg(long, value_delimiter = ',')]
    pub group: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct CodeArgs {
    /// Odd rational prime: p = 1 mod 4 gives GF(p), p = 3 mod 4 gives GF(p^2).
    #[arg(long)]
    pub p: i64,
    /// Split prime over p; defaults to a + bi with a > b > 0.
    #[arg(long, value_parser = parse_gauss, allow_hyphen_values = true)]
    pub pi: Option<GaussInt>,
    /// Carrier table in layout order.
    #[arg(long)]
    pub table: bool,
    /// Mannheim weight of every label.
    #[arg(long)]
    pub distances: bool,
}

#[derive(Debug)]
pub enum CliError {
    Domain(String),
    Usage(String),
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Domain(e.to_string())
    }
}

fn domain<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Domain(msg.into()))
}

/// A command result in all three renderings.
pub struct Output {
    pub text: String,
    pub json: Value,
    /// Header first.
    pub csv: Vec<Vec<String>>,
}

fn envelope(command: &str, body: Value) -> Value {
    let mut v = json!({ "schema_version": SCHEMA_VERSION, "command": command });
    if let (Value::Object(top), Value::Object(rest)) = (&mut v, body) {
        top.extend(rest);
    }
    v
}

fn row<I: IntoIterator<Item = S>, S: ToString>(cells: I) -> Vec<String> {
    cells.into_iter().map(|c| c.to_string()).collect()
}

fn braces<T: ToString>(items: &[T]) -> String {
    format!("{{{}}}", items.iter().map(T::to_string).collect::<Vec<_>>().join(", "))
}

fn group_name((d1, d2): (usize, usize)) -> String {
    if d1 == 1 { format!("Z_{d2}") } else { format!("Z_{d1} x Z_{d2}") }
}

/// Rounding noise from the character sums printed as an exact zero.
fn snap(x: f64) -> f64 {
    if x.abs() < 1e-12 { 0.0 } else { x }
}

fn bits(v: &[u8]) -> String {
    v.iter().map(u8::to_string).collect::<Vec<_>>().join(",")
}

fn run_factor(alpha: GaussInt) -> Result<Output, CliError> {
    let f = factor(alpha)?;
    let text = format!("{alpha} = {f}\n");
    let json = envelope(
        "factor",
        json!({
            "alpha": alpha,
            "unit": f.unit,
            "factors": f.factors.iter().map(|(p, m)| json!({"prime": p, "multiplicity": m})).collect::<Vec<_>>(),
            "length": f.length(),
        }),
    );
    let mut csv = vec![row(["prime", "multiplicity"])];
    csv.extend(f.factors.iter().map(|(p, m)| row([p.to_string(), m.to_string()])));
    Ok(Output { text, json, csv })
}

fn run_ring(alpha: GaussInt, ordering: PointOrdering) -> Result<Output, CliError> {
    let ring = QuotientRing::build(alpha)?;
    let order = ring.ordering(ordering)?;
    let (d1, d2) = ring.invariant_factors();
    let (g1, g2) = ring.coordinate_basis();
    let mut text = String::new();
    let _ = writeln!(text, "Z[i]/({alpha}): {} points, {}", ring.order(), group_name((d1, d2)));
    let _ = writeln!(text, "basis: g1 = {g1}, g2 = {g2}");
    let mut csv = vec![row(["position", "index", "rep", "c1", "c2"])];
    for (pos, &idx) in order.iter().enumerate() {
        let r = ring.residue(idx);
        let (c1, c2) = ring.coords_of_index(idx);
        let _ = writeln!(text, "{pos:>4}  {:<8} ({c1},{c2})", r.rep.to_string());
        csv.push(row([pos.to_string(), idx.to_string(), r.rep.to_string(), c1.to_string(), c2.to_string()]));
    }
    let mut body = serde_json::to_value(ring.to_export())?;
    body["ordering"] = json!(order);
    Ok(Output { text, json: envelope("ring", body), csv })
}

fn orbit_labels(scheme: &OrbitalScheme, ordering: PointOrdering) -> Result<Vec<Vec<String>>, CliError> {
    let ring = scheme.ring();
    Ok(match ordering {
        PointOrdering::Coords => (0..scheme.scheme().rank())
            .map(|c| scheme.orbit_members(c).iter().map(GaussInt::to_string).collect())
            .collect(),
        PointOrdering::Gfp => {
            let order = ring.ordering(ordering)?;
            let mut label = vec![0; ring.order()];
            for (g, &idx) in order.iter().enumerate() {
                label[idx] = g;
            }
            scheme.orbits().iter().map(|o| o.iter().map(|&i| label[i].to_string()).collect()).collect()
        }
    })
}

fn primitivity_json(s: &AssociationScheme, alpha: GaussInt) -> Result<(String, Value), CliError> {
    let (p, method) = if s.d() <= MAX_BRUTEFORCE_CLASSES {
        (is_primitive_bruteforce(s)?, "subset scan")
    } else {
        (is_primitive_connectivity(s), "connectivity")
    };
    let predicted = is_primitive_by_primality(alpha)?;
    let witness = p.witness.as_ref().map_or(String::new(), |w| format!(", closed set {w:?}"));
    let text = format!("primitive: {} ({method}{witness}); gaussian prime: {predicted}\n", p.primitive);
    Ok((text, json!({"primitive": p.primitive, "method": method, "witness": p.witness, "gaussian_prime": predicted})))
}

fn run_scheme(args: &SchemeArgs) -> Result<Output, CliError> {
    let alpha = args.alpha.alpha;
    let ordering = PointOrdering::from(args.ordering);
    let ring = QuotientRing::build(alpha)?;
    ring.ordering(ordering)?;
    let orbital = OrbitalScheme::for_ordering(ring.clone(), ordering)?;
    let s = orbital.scheme();

    let others = args.orbits
        || args.circulant
        || args.intersection
        || args.axioms
        || args.primitivity
        || args.eigen
        || args.pseudocyclic
        || args.involutions
        || args.refine
        || args.matrices.is_some();
    let any = args.vector || others;
    let (show_orbits, show_circulant, show_vector) =
        if any { (args.orbits, args.circulant, args.vector) } else { (true, true, true) };
    // `--vector` alone prints just the vector
    let bare_vector = args.vector && !others;

    let mut text = String::new();
    let mut body = serde_json::Map::new();
    body.insert("alpha".into(), json!(alpha));
    body.insert("ordering".into(), json!(format!("{:?}", args.ordering).to_lowercase()));
    let vector = relation_vector(&orbital, ordering)?;
    if !bare_vector {
        let _ = writeln!(
            text,
            "Z[i]/({alpha}): {} points, {}, {} classes",
            ring.order(),
            group_name(ring.invariant_factors()),
            s.d()
        );
        body.insert("points".into(), json!(ring.order()));
        body.insert("rank".into(), json!(s.rank()));
        body.insert("valencies".into(), json!(s.valencies()));
    }
    if show_orbits {
        let labels = orbit_labels(&orbital, ordering)?;
        let _ = writeln!(text, "classes:");
        for (c, members) in labels.iter().enumerate() {
            let _ = writeln!(text, "  R{c} = {}  (valency {})", braces(members), s.valencies()[c]);
        }
        body.insert("classes".into(), json!(labels));
    }
    if show_circulant {
        let _ = writeln!(text, "circulant first rows:");
        let mut rows = Vec::new();
        for c in 0..s.rank() {
            let form = block_circulant_form(&orbital, c)?;
            let blocks = form.first_block_row();
            let _ = writeln!(
                text,
                "  D{c} = [{}]",
                blocks.iter().map(|b| bits(b)).collect::<Vec<_>>().join("|")
            );
            rows.push(blocks);
        }
        body.insert("circulant_first_rows".into(), json!(rows));
    }
    if args.intersection {
        let p = s.intersection_numbers();
        let _ = writeln!(text, "intersection numbers p_ij^k:");
        for k in 0..s.rank() {
            let _ = writeln!(text, "  k = {k}");
            for i in 0..s.rank() {
                let r: Vec<String> = (0..s.rank()).map(|j| p.get(i, j, k).to_string()).collect();
                let _ = writeln!(text, "    {}", r.join(" "));
            }
        }
        body.insert("intersection_numbers".into(), json!(p.to_nested()));
    }
    if args.axioms {
        let report = verify_axioms(s.table());
        let _ = writeln!(text, "axioms:");
        for c in &report.checks {
            let _ = writeln!(text, "  {:?}: {}", c.axiom, if c.passed { "pass" } else { "FAIL" });
        }
        body.insert("axioms".into(), serde_json::to_value(&report)?);
    }
    if args.primitivity {
        let (t, v) = primitivity_json(s, alpha)?;
        text.push_str(&t);
        body.insert("primitivity".into(), v);
    }
    if args.eigen {
        let e = eigenvalues(&orbital);
        let _ = writeln!(text, "eigenmatrix P (rows by eigenspace):");
        let mut rows = Vec::new();
        for (r, vals) in e.rows.iter().enumerate() {
            let cells: Vec<String> = vals
                .iter()
                .map(|z| if z.im.abs() < 1e-9 { format!("{:.6}", z.re) } else { format!("{:.6}{:+.6}i", z.re, z.im) })
                .collect();
            let _ = writeln!(text, "  [{}]  multiplicity {}", cells.join(", "), e.multiplicities[r]);
            rows.push(vals.iter().map(|z| [snap(z.re), snap(z.im)]).collect::<Vec<_>>());
        }
        body.insert("eigenmatrix".into(), json!({"rows": rows, "multiplicities": e.multiplicities}));
    }
    if args.pseudocyclic {
        let r = is_pseudocyclic(s);
        let _ = writeln!(text, "sum_i p_ii^k for k = 1..d: {:?} ({})", r.sums, if r.constant { "constant" } else { "not constant" });
        body.insert("pseudocyclic".into(), serde_json::to_value(&r)?);
    }
    if args.involutions {
        let inv = crate::quotient_scheme::involutions(s)?;
        let _ = writeln!(text, "involutions A = {} (order {})", braces(&inv.classes), inv.order());
        for (x, r) in inv.composition.iter().enumerate() {
            let _ = writeln!(text, "  {} composed with A: {}", inv.classes[x], braces(r));
        }
        body.insert("involutions".into(), json!({"classes": inv.classes, "composition": inv.composition}));
    }
    if args.refine {
        let r = signed_refinement(ring.clone())?;
        let _ = writeln!(text, "refinement by {{1,-1}}: {} classes", r.refined.scheme().d());
        for (c, parts) in r.merge.iter().enumerate() {
            let _ = writeln!(text, "  R{c} = union of {}", braces(parts));
        }
        body.insert("refinement".into(), json!({"classes": r.refined.scheme().d(), "merge": r.merge}));
    }
    if let Some(dir) = &args.matrices {
        let order = ring.ordering(ordering)?;
        std::fs::create_dir_all(dir)?;
        for c in 0..s.rank() {
            let mut w = csv::Writer::from_path(dir.join(format!("A{c}.csv")))?;
            for &x in &order {
                w.write_record(order.iter().map(|&y| u8::from(s.relation(x, y) == c).to_string()))?;
            }
            w.flush()?;
        }
        let _ = writeln!(text, "wrote {} matrices to {}", s.rank(), dir.display());
        body.insert("matrices".into(), json!(dir.display().to_string()));
    }
    if show_vector {
        if bare_vector {
            let _ = writeln!(text, "{vector}");
        } else {
            let _ = writeln!(text, "vector: {vector}");
        }
        body.insert("vector".into(), json!(vector.to_string()));
    }

    let mut csv = vec![row(["position", "point", "class"])];
    let order = ring.ordering(ordering)?;
    for (pos, (&idx, &class)) in order.iter().zip(&vector.entries).enumerate() {
        csv.push(row([pos.to_string(), ring.residue(idx).rep.to_string(), class.to_string()]));
    }
    Ok(Output { text, json: envelope("scheme", Value::Object(body)), csv })
}

fn run_quotient(args: &QuotientArgs) -> Result<Output, CliError> {
    let alpha = args.alpha.alpha;
    if args.chain {
        let chain = quotient_chain(alpha)?;
        let mut text = String::new();
        let mut steps = Vec::new();
        let mut csv = vec![row(["divisor", "points", "involutions"])];
        for step in &chain {
            let points = step.scheme.ring().order();
            let _ = writeln!(text, "{}: {points} points, A = {}", step.divisor, braces(&step.involutions.classes));
            steps.push(json!({"divisor": step.divisor, "points": points, "involutions": step.involutions.classes}));
            csv.push(row([step.divisor.to_string(), points.to_string(), format!("{:?}", step.involutions.classes)]));
        }
        return Ok(Output { text, json: envelope("quotient", json!({"alpha": alpha, "chain": steps})), csv });
    }

    let ring = QuotientRing::build(alpha)?;
    let base = build_scheme(ring.clone())?;
    let mut current = base.scheme().clone();
    let mut point_of: Vec<usize> = (0..ring.order()).collect();
    let mut text = String::new();
    let mut levels = Vec::new();
    for (level, spec) in args.zero_tilde.iter().enumerate() {
        let mut classes = Vec::new();
        for tok in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if tok.contains('i') {
                let z = parse_gauss(tok).map_err(CliError::Usage)?;
                classes.push(current.relation(point_of[0], point_of[ring.index_of(z)]));
            } else {
                let c: usize = tok.parse().map_err(|_| CliError::Usage(format!("bad class token {tok:?}")))?;
                if c >= current.rank() {
                    return domain(format!("class {c} out of range 0..{}", current.rank()));
                }
                classes.push(c);
            }
        }
        let q = quotient(&current, &classes)?;
        let blocks: Vec<Vec<String>> = if level == 0 {
            q.point_classes.iter().map(|b| b.iter().map(|&x| ring.residue(x).rep.to_string()).collect()).collect()
        } else {
            q.point_classes.iter().map(|b| b.iter().map(usize::to_string).collect()).collect()
        };
        let vector = RelationVector { entries: q.scheme.first_row(), block: None };
        if !args.vector {
            let _ = writeln!(text, "level {}: 0~ = {} -> {} points", level + 1, braces(&q.zero_tilde), q.scheme.points());
            for (k, b) in blocks.iter().enumerate() {
                let _ = writeln!(text, "  point {k} = {}", braces(b));
            }
            for (k, m) in q.relation_classes.iter().enumerate() {
                let _ = writeln!(text, "  class {k} = {}", braces(m));
            }
            let _ = writeln!(text, "  vector: {vector}");
        }
        levels.push(json!({
            "zero_tilde": q.zero_tilde,
            "points": q.scheme.points(),
            "point_classes": blocks,
            "relation_classes": q.relation_classes,
            "vector": vector.to_string(),
        }));
        let map: Vec<usize> = (0..current.points()).map(|x| q.point_class_of(x)).collect();
        point_of = point_of.into_iter().map(|x| map[x]).collect();
        current = q.scheme;
    }
    let final_vector = RelationVector { entries: current.first_row(), block: None };
    let mut further = Vec::new();
    if current.d() <= MAX_BRUTEFORCE_CLASSES {
        for set in closed_subsets(&current)? {
            if set.len() > 1 && set.len() < current.rank() {
                let q = quotient(&current, &set)?;
                further.push(json!({"zero_tilde": set, "points": q.scheme.points()}));
                if !args.vector {
                    let _ = writeln!(text, "further quotient: 0~ = {} -> {} points", braces(&set), q.scheme.points());
                }
            }
        }
    }
    if args.vector {
        let _ = writeln!(text, "{final_vector}");
    }
    let mut csv = vec![row(["point", "class"])];
    csv.extend(final_vector.entries.iter().enumerate().map(|(x, c)| row([x, *c])));
    let json = envelope(
        "quotient",
        json!({"alpha": alpha, "levels": levels, "vector": final_vector.to_string(), "further_quotients": further}),
    );
    Ok(Output { text, json, csv })
}

fn run_tiles(args: &TilesArgs) -> Result<Output, CliError> {
    let alpha = args.alpha.alpha;
    let any = args.classify || args.clean || args.reps || args.quotient_check || args.svg.is_some();
    let (classify, clean, reps) = if any { (args.classify, args.clean, args.reps) } else { (true, true, true) };
    let mut text = String::new();
    let mut body = serde_json::Map::new();
    body.insert("alpha".into(), json!(alpha));
    let mut csv = vec![row(["field", "value"])];
    if classify {
        let t = classify_tile(alpha)?;
        let name = serde_json::to_value(t)?;
        let _ = writeln!(text, "tile type: {}", name.as_str().unwrap_or_default());
        csv.push(row(["tile_type".to_string(), name.as_str().unwrap_or_default().to_string()]));
        body.insert("tile_type".into(), name);
    }
    if clean {
        let b = is_clean_boundary(alpha)?;
        let odd = is_clean_odd(alpha)?;
        let _ = write!(text, "clean (boundary): {}", b.clean);
        if let Some(w) = b.witness {
            let _ = write!(text, ", witness {w} equidistant from {}", braces(&b.equidistant));
        }
        let _ = writeln!(text, "\nclean (odd order): {odd}");
        csv.push(row(["clean_boundary".to_string(), b.clean.to_string()]));
        csv.push(row(["clean_odd".to_string(), odd.to_string()]));
        body.insert("clean_boundary".into(), json!(b.clean));
        body.insert("clean_odd".into(), json!(odd));
        body.insert("boundary_witness".into(), json!(b.witness));
        body.insert("equidistant".into(), json!(b.equidistant));
    }
    if reps {
        let r = fundamental_representatives(alpha)?;
        let _ = writeln!(text, "representatives: {}", braces(&r));
        csv.extend(r.iter().map(|z| row(["representative".to_string(), z.to_string()])));
        body.insert("representatives".into(), json!(r));
    }
    if args.quotient_check {
        let steps = clean_quotient_check(alpha)?;
        for s in &steps {
            let _ = writeln!(
                text,
                "quotient {}: {} points, A = {}: {}",
                s.divisor,
                s.points,
                braces(&s.involutions),
                if s.pass { "pass" } else { "FAIL" }
            );
        }
        body.insert("quotient_check".into(), serde_json::to_value(&steps)?);
    }
    if let Some(path) = &args.svg {
        let labels = match args.labels {
            Labels::None => LabelMode::None,
            Labels::Index => LabelMode::Index,
            Labels::Gfp => LabelMode::Gfp,
        };
        let opts = SvgOptions {
            window: args.window,
            labels,
            orbit_colors: args.orbit_colors,
            quotient_grouping: args.group.clone(),
        };
        let svg = render_svg(alpha, &opts)?;
        std::fs::write(path, svg)?;
        let _ = writeln!(text, "wrote {}", path.display());
        body.insert("svg".into(), json!(path.display().to_string()));
    }
    Ok(Output { text, json: envelope("tiles", Value::Object(body)), csv })
}

fn run_code(args: &CodeArgs) -> Result<Output, CliError> {
    let p = args.p;
    let (constellation, modulus): (Constellation, GaussInt) = if p % 4 == 1 {
        let pi = match args.pi {
            Some(pi) => pi,
            None => two_square(p)?,
        };
        if pi.norm() != p {
            return domain(format!("norm({pi}) = {} is not p = {p}", pi.norm()));
        }
        (build_split_constellation(pi)?, pi)
    } else {
        if args.pi.is_some() {
            return domain(format!("p = {p} is not 1 mod 4, so it has no split prime pi"));
        }
        (build_inert_constellation(p)?, GaussInt::real(p))
    };
    let ring = QuotientRing::build(modulus)?;
    let field = if p % 4 == 1 { format!("GF({p}) as Z[i]/({modulus})") } else { format!("GF({}) as Z_{p}[i]", p * p) };
    let mut text = format!("{field}: {} points\n", constellation.carrier.len());
    let mut body = serde_json::to_value(&constellation)?;
    let mut csv = vec![row(["label", "re", "im"])];

    let show_table = args.table || !args.distances;
    if show_table {
        let layout = constellation.layout_order();
        for &(label, z) in &layout {
            let _ = writeln!(text, "{label:>4}  {z}");
            csv.push(row([label, z.re, z.im]));
        }
        body["layout"] = json!(layout);
    }
    if args.distances {
        let residues: Vec<_> = constellation.carrier.iter().map(|&(_, z)| ring.reduce(z)).collect();
        let mut matrix = Vec::with_capacity(residues.len());
        for x in &residues {
            let r: Vec<i64> = residues.iter().map(|y| mannheim_distance(&ring, x, y)).collect::<Result<_, _>>()?;
            matrix.push(r);
        }
        let _ = writeln!(text, "Mannheim distances (carrier order):");
        for r in &matrix {
            let _ = writeln!(text, "  {}", r.iter().map(i64::to_string).collect::<Vec<_>>().join(" "));
        }
        if !show_table {
            csv = vec![row(std::iter::once("label".to_string()).chain(constellation.carrier.iter().map(|(l, _)| l.to_string())))];
            for ((l, _), r) in constellation.carrier.iter().zip(&matrix) {
                csv.push(row(std::iter::once(l.to_string()).chain(r.iter().map(i64::to_string))));
            }
        }
        body["distances"] = json!(matrix);
    }
    Ok(Output { text, json: envelope("code", body), csv })
}

fn run_sweep(norm_bound: i64, checks: &[Check]) -> Result<Output, CliError> {
    let checks = if checks.is_empty() { Check::ALL.to_vec() } else { checks.to_vec() };
    let report = sweep(norm_bound, &checks).map_err(CliError::Domain)?;
    let mut text = String::new();
    for c in &report.checks {
        let rows: Vec<_> = report.rows.iter().filter(|r| r.check == *c).collect();
        let passed = rows.iter().filter(|r| r.pass).count();
        let _ = writeln!(text, "{c}: {passed}/{} pass", rows.len());
    }
    for r in report.failures() {
        let _ = writeln!(text, "FAIL {} (norm {}) {}: {}", r.alpha, r.norm, r.check, r.detail);
    }
    let mut csv = vec![row(["alpha", "norm", "check", "pass", "detail"])];
    csv.extend(report.rows.iter().map(|r| row([r.alpha.to_string(), r.norm.to_string(), r.check.to_string(), r.pass.to_string(), r.detail.clone()])));
    Ok(Output { text, json: envelope("sweep", serde_json::to_value(&report)?), csv })
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Factor(a) => run_factor(a.alpha),
        Command::Ring { alpha, ordering, .. } => run_ring(alpha.alpha, (*ordering).into()),
        Command::Scheme(args) => run_scheme(args),
        Command::Quotient(args) => run_quotient(args),
        Command::Tiles(args) => run_tiles(args),
        Command::Code(args) => run_code(args),
        Command::Sweep { norm_bound, checks } => run_sweep(*norm_bound, checks),
    }
}

pub fn render(output: &Output, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Text => output.text.clone(),
        Format::Json => serde_json::to_string_pretty(&output.json)? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &output.csv {
                w.write_record(r)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Domain(e.to_string()))?)?
        }
    })
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let format = if cli.json { Format::Json } else { cli.format };
    let result = execute(&cli).and_then(|out| render(&out, format));
    let result = result.and_then(|s| match &cli.out {
        Some(path) => std::fs::write(path, s).map_err(CliError::from),
        None => {
            print!("{s}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
