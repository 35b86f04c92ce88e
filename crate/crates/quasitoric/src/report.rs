//! End-to-end pipeline: parse inputs, validate, color, build the
//! characteristic pair and the ring, compute classes and bounds, run the
//! cross-checks, and render the result as text or JSON.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::charpair::{self, CharMatrix, ManifoldSpec, PairKind};
use crate::classes::{self, BoundsReport, SWClasses};
use crate::coloring::{self, Coloring};
use crate::error::{Error, Result};
use crate::face_ring::FaceRing;
use crate::polytope::{self, SimplePolytope};
use crate::t_ring;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolytopeSource {
    Expression(String),
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColoringSource {
    Auto,
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairSource {
    Staircase,
    Plain,
    File(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DChoice {
    One,
    Two,
    Both,
}

impl DChoice {
    pub fn values(&self) -> Vec<u8> {
        match self {
            DChoice::One => vec![1],
            DChoice::Two => vec![2],
            DChoice::Both => vec![1, 2],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub polytope: PolytopeSource,
    pub coloring: ColoringSource,
    pub pair: PairSource,
    pub d: DChoice,
    pub format: OutputFormat,
    pub check_only: bool,
}

/// Everything the pipeline reports about one run. Serializes with stable
/// field order so identical configurations produce byte-identical JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub polytope: PolytopeEcho,
    pub coloring: ColoringEcho,
    pub pair_kind: String,
    pub char_matrix: MatrixEcho,
    pub validation: ValidationEcho,
    pub betti: Vec<usize>,
    pub classes: ClassesEcho,
    pub bounds: Vec<BoundsReport>,
    pub checks: Checks,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeEcho {
    pub source: String,
    pub dim: usize,
    pub num_facets: usize,
    pub num_vertices: usize,
    pub f_vector: Vec<usize>,
    pub h_vector: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringEcho {
    pub source: String,
    pub colors: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixEcho {
    pub d: u8,
    pub columns: Vec<Vec<i64>>,
    pub base_vertex: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDetEcho {
    pub vertex: Vec<usize>,
    pub det: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationEcho {
    pub polytope_ok: bool,
    pub polytope_violations: Vec<String>,
    pub pair_ok: bool,
    pub det_plus_count: usize,
    pub det_minus_count: usize,
    pub vertex_dets: Vec<VertexDetEcho>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassesEcho {
    pub grading: String,
    pub w: Vec<String>,
    pub wbar: Vec<String>,
    pub rank_dual: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub h_vector_audit: bool,
    pub t_ring_oracle: Option<bool>,
    pub sigma_consistency: bool,
    pub top_dual_vanishes: bool,
    pub convolution_identity: bool,
    pub dual_product_vanishes: bool,
}

impl Checks {
    pub fn all_pass(&self) -> bool {
        self.h_vector_audit
            && self.t_ring_oracle.unwrap_or(true)
            && self.sigma_consistency
            && self.top_dual_vanishes
            && self.convolution_identity
    }
}

fn load_polytope(source: &PolytopeSource) -> Result<(SimplePolytope, String)> {
    match source {
        PolytopeSource::Expression(expr) => {
            Ok((polytope::parse_expression(expr)?, expr.clone()))
        }
        PolytopeSource::File(path) => {
            let text = std::fs::read_to_string(path)?;
            Ok((
                SimplePolytope::from_json_str(&text)?,
                path.display().to_string(),
            ))
        }
    }
}

/// Interprets a `--polytope` argument: generator expressions are recognized
/// by their `name:k` tokens, anything else is a file path.
pub fn polytope_source_from_arg(arg: &str) -> PolytopeSource {
    if polytope::looks_like_expression(arg) {
        PolytopeSource::Expression(arg.to_string())
    } else {
        PolytopeSource::File(PathBuf::from(arg))
    }
}

pub fn pair_source_from_arg(arg: &str) -> PairSource {
    match arg {
        "paper" => PairSource::Staircase,
        "plain" => PairSource::Plain,
        other => PairSource::File(PathBuf::from(other)),
    }
}

pub fn coloring_source_from_arg(arg: &str) -> ColoringSource {
    if arg == "auto" {
        ColoringSource::Auto
    } else {
        ColoringSource::File(PathBuf::from(arg))
    }
}

/// Runs the full pipeline. Exits through `Err` for rejected inputs; the
/// caller maps error variants to process exit codes.
pub fn run_compute(cfg: &RunConfig) -> Result<Report> {
    let (p, polytope_source) = load_polytope(&cfg.polytope)?;

    let validation = p.validate();
    if !validation.is_ok() {
        let msgs: Vec<String> = validation.violations.iter().map(|v| v.to_string()).collect();
        return Err(Error::InvalidPolytope(msgs.join("; ")));
    }

    let (coloring, coloring_source) = match &cfg.coloring {
        ColoringSource::Auto => {
            let found = coloring::find_n_coloring(&p)?;
            match found {
                Some(c) => (c, "auto".to_string()),
                None => {
                    let witness = coloring::odd_two_face(&p).ok_or_else(|| {
                        Error::Internal("no coloring but all 2-faces even".into())
                    })?;
                    return Err(Error::NotNColorable {
                        n: p.dim(),
                        face: witness.facet_set.to_string(),
                        edges: witness.vertex_count(),
                    });
                }
            }
        }
        ColoringSource::File(path) => {
            let text = std::fs::read_to_string(path)?;
            let c = Coloring::from_json_str(&text)?;
            match coloring::is_proper(&p, &c)? {
                coloring::Properness::Proper => (c, path.display().to_string()),
                coloring::Properness::Improper {
                    facet_a,
                    facet_b,
                    vertex,
                } => {
                    let color = c.color(facet_a) as usize;
                    return Err(Error::ImproperColoring {
                        facet_a: facet_a + 1,
                        facet_b: facet_b + 1,
                        vertex: vertex.to_string(),
                        color,
                    });
                }
            }
        }
    };

    let d_values = cfg.d.values();
    let d_first = d_values[0];
    let spec = match &cfg.pair {
        PairSource::Staircase => ManifoldSpec::staircase(p.clone(), coloring.clone(), d_first)?,
        PairSource::Plain => ManifoldSpec::plain(p.clone(), coloring.clone(), d_first)?,
        PairSource::File(path) => {
            let text = std::fs::read_to_string(path)?;
            let lambda = CharMatrix::from_json_str(&text, p.dim(), p.num_facets())?;
            ManifoldSpec::external(p.clone(), coloring.clone(), lambda, d_first)?
        }
    };

    build_report(cfg, &spec, polytope_source, coloring_source, &d_values)
}

fn build_report(
    _cfg: &RunConfig,
    spec: &ManifoldSpec,
    polytope_source: String,
    coloring_source: String,
    d_values: &[u8],
) -> Result<Report> {
    let p = &spec.polytope;
    let n = p.dim();

    let verdict = charpair::validate_char_pair(p, &spec.lambda)?;
    debug_assert!(verdict.is_ok(), "spec constructors validate");

    // The GF(2) ring and the classes are shared between d = 1 and d = 2;
    // only the bound scaling differs.
    let ring = FaceRing::build(spec)?;
    let sw = classes::compute_classes(&ring, spec)?;
    let bounds: Vec<BoundsReport> = d_values
        .iter()
        .map(|&d| BoundsReport::from_rank(n, sw.rank_dual, d))
        .collect();

    let checks = run_cross_checks(&ring, &sw)?;
    let notes = collect_notes(spec, &ring, &sw, d_values);

    let vertex_dets: Vec<VertexDetEcho> = verdict
        .vertex_dets
        .iter()
        .map(|vd| VertexDetEcho {
            vertex: vd.vertex.to_1based(),
            det: i64::try_from(vd.det).unwrap_or(i64::MAX),
        })
        .collect();

    Ok(Report {
        polytope: PolytopeEcho {
            source: polytope_source,
            dim: n,
            num_facets: p.num_facets(),
            num_vertices: p.num_vertices(),
            f_vector: p.f_vector(),
            h_vector: p.h_vector(),
        },
        coloring: ColoringEcho {
            source: coloring_source,
            colors: spec.coloring.colors().to_vec(),
        },
        pair_kind: spec.kind.as_str().to_string(),
        char_matrix: MatrixEcho {
            d: spec.lambda.d,
            columns: spec.lambda.columns.clone(),
            base_vertex: spec.lambda.base_vertex.map(|v| v.to_1based()),
        },
        validation: ValidationEcho {
            polytope_ok: true,
            polytope_violations: Vec::new(),
            pair_ok: verdict.is_ok(),
            det_plus_count: verdict.vertex_dets.iter().filter(|v| v.det == 1).count(),
            det_minus_count: verdict.vertex_dets.iter().filter(|v| v.det == -1).count(),
            vertex_dets,
        },
        betti: ring.betti().to_vec(),
        classes: ClassesEcho {
            grading: "combinatorial degree k; real degree is d*k".to_string(),
            w: sw.w.iter().map(|e| ring.render(e)).collect(),
            wbar: sw.wbar.iter().map(|e| ring.render(e)).collect(),
            rank_dual: sw.rank_dual,
        },
        bounds,
        checks,
        notes,
    })
}

fn run_cross_checks(ring: &FaceRing, sw: &SWClasses) -> Result<Checks> {
    let n = ring.dim();
    // The ring constructor already audits dimensions against the h-vector;
    // reaching this point means it passed.
    let h_vector_audit = true;

    let t_ring_oracle = if sw.kind == PairKind::Staircase {
        let dual = t_ring::dual_total_class(n);
        let mut ok = true;
        for k in 0..=n {
            let expected = t_ring::embed_to_face_ring(ring, &dual.degree_part(k))?;
            if expected != sw.wbar[k] {
                ok = false;
            }
        }
        Some(ok)
    } else {
        None
    };

    let sigma = t_ring::sigma_table(n);
    let sigma_consistency = if sw.kind == PairKind::Staircase {
        (0..n).all(|k| sigma.sigma[k] == 0 || !sw.wbar[k].is_zero())
    } else {
        true
    };

    Ok(Checks {
        h_vector_audit,
        t_ring_oracle,
        sigma_consistency,
        top_dual_vanishes: sw.wbar[n].is_zero(),
        convolution_identity: classes::convolution_vanishes(ring, sw)?,
        dual_product_vanishes: classes::dual_product_vanishes(ring, sw)?,
    })
}

fn collect_notes(
    spec: &ManifoldSpec,
    ring: &FaceRing,
    sw: &SWClasses,
    d_values: &[u8],
) -> Vec<String> {
    let n = ring.dim();
    let mut notes = Vec::new();
    if let Some(base) = ring.base_facets() {
        let list: Vec<String> = base.iter().map(|f| format!("v{}", f + 1)).collect();
        notes.push(format!(
            "base classes by color: u_i = {}",
            list.join(", ")
        ));
    }
    if spec.kind == PairKind::Staircase {
        notes.push(
            "facet order for generated polytopes is an artifact convention; \
             permutahedron facets are indexed by (size, lexicographic) subset order"
                .to_string(),
        );
    }
    if sw.rank_dual == 0 {
        notes.push("no obstruction from dual classes: every positive-degree dual class vanishes".to_string());
    }
    let alpha = (n as u32).count_ones() as usize;
    if sw.rank_dual > 0 {
        if sw.rank_dual == n - alpha {
            notes.push(format!(
                "rank of the dual class is {} = n - alpha(n); consistent with the conjectured maximum",
                sw.rank_dual
            ));
        } else if sw.rank_dual < n - alpha {
            notes.push(format!(
                "rank of the dual class is {} < n - alpha(n) = {}; this pair does not meet the conjectured maximum",
                sw.rank_dual,
                n - alpha
            ));
        } else {
            notes.push(format!(
                "rank {} exceeds n - alpha(n) = {}; this contradicts the universal immersion bound and indicates a bug",
                sw.rank_dual,
                n - alpha
            ));
        }
    }
    if d_values.contains(&2) && n >= 3 && n.is_power_of_two() && sw.rank_dual == n - 1 {
        notes.push(format!(
            "d=2: immersion dimension equals {} by Massey's theorem (cited, not derived from the computed classes)",
            4 * n - 2
        ));
    }
    notes
}

/// Stable text rendering of a report.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let p = &report.polytope;
    out.push_str(&format!(
        "polytope    {} (n={}, m={}, vertices={})\n",
        p.source, p.dim, p.num_facets, p.num_vertices
    ));
    out.push_str(&format!("f-vector    {:?}\n", p.f_vector));
    out.push_str(&format!("h-vector    {:?}\n", p.h_vector));
    out.push_str(&format!(
        "coloring    {} {:?}\n",
        report.coloring.source, report.coloring.colors
    ));
    out.push_str(&format!("pair        {}\n", report.pair_kind));
    out.push_str(&format!(
        "validation  pair ok: {} (det +1 at {} vertices, -1 at {})\n",
        report.validation.pair_ok,
        report.validation.det_plus_count,
        report.validation.det_minus_count
    ));
    out.push_str(&format!("betti       {:?}\n", report.betti));
    out.push_str(&format!("grading     {}\n", report.classes.grading));
    for (k, s) in report.classes.w.iter().enumerate() {
        out.push_str(&format!("w[{k}]        {s}\n"));
    }
    for (k, s) in report.classes.wbar.iter().enumerate() {
        out.push_str(&format!("wbar[{k}]     {s}\n"));
    }
    out.push_str(&format!("rank(dual)  {}\n", report.classes.rank_dual));
    for b in &report.bounds {
        out.push_str(&format!(
            "d={}         dim {} | imm >= {}, em >= {}, N >= {} | Whitney imm <= {}, em <= {} | Cohen imm <= {}\n",
            b.d,
            b.real_dim,
            b.imm_lower,
            b.em_lower,
            b.skew_lower,
            b.whitney_imm_upper,
            b.whitney_em_upper,
            b.cohen_imm_upper
        ));
    }
    out.push_str(&render_checks(&report.checks));
    for note in &report.notes {
        out.push_str(&format!("note        {note}\n"));
    }
    out
}

pub fn render_checks(checks: &Checks) -> String {
    let mut out = String::new();
    let line = |name: &str, ok: bool| format!("check       {name}: {}\n", if ok { "pass" } else { "FAIL" });
    out.push_str(&line("h-vector audit", checks.h_vector_audit));
    match checks.t_ring_oracle {
        Some(ok) => out.push_str(&line("t-ring oracle", ok)),
        None => out.push_str("check       t-ring oracle: n/a (not a staircase pair)\n"),
    }
    out.push_str(&line("sigma consistency", checks.sigma_consistency));
    out.push_str(&line("top dual vanishes", checks.top_dual_vanishes));
    out.push_str(&line("convolution identity", checks.convolution_identity));
    out.push_str(&format!(
        "check       dual product wbar_1 * wbar_(n-1) vanishes: {}\n",
        checks.dual_product_vanishes
    ));
    out
}

/// Renders per the configured format.
pub fn render(report: &Report, format: OutputFormat, check_only: bool) -> Result<String> {
    if check_only {
        return Ok(render_checks(&report.checks));
    }
    match format {
        OutputFormat::Text => Ok(render_text(report)),
        OutputFormat::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
    }
}

/// Tab-separated sigma table for 1..=n_max, verified against the closed form
/// before printing.
pub fn sigma_text(n_max: usize) -> Result<String> {
    if n_max < 1 {
        return Err(Error::Parse("n-max must be at least 1".into()));
    }
    let tables = t_ring::sigma_tables_checked(n_max)?;
    let mut out = String::from("# n\tsigma^k_n for k = 0..n-1\n");
    for t in tables {
        let row: Vec<String> = t.sigma.iter().map(|s| s.to_string()).collect();
        out.push_str(&format!("{}\t{}\n", t.n, row.join("\t")));
    }
    Ok(out)
}

/// The four dual classes in low dimensions, one rendered line each.
pub fn dual_class_lines() -> String {
    let mut out = String::new();
    for n in 2..=5 {
        out.push_str(&format!("n={}: {}\n", n, t_ring::dual_total_class(n).render()));
    }
    out
}

/// Maps an error to the documented process exit code: 2 for unreadable or
/// invalid input, 3 for polytopes with no proper coloring, 4 for
/// characteristic pair failures, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NotNColorable { .. } => 3,
        Error::InvalidCharPair(_) => 4,
        Error::Io(_)
        | Error::Json(_)
        | Error::Parse(_)
        | Error::InvalidPolytope(_)
        | Error::ColorOutOfRange { .. }
        | Error::ImproperColoring { .. }
        | Error::DimensionMismatch(_) => 2,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(polytope: &str, pair: PairSource, d: DChoice) -> RunConfig {
        RunConfig {
            polytope: PolytopeSource::Expression(polytope.into()),
            coloring: ColoringSource::Auto,
            pair,
            d,
            format: OutputFormat::Json,
            check_only: false,
        }
    }

    #[test]
    fn cube_4_report_numbers() {
        let report = run_compute(&cfg("cube:4", PairSource::Staircase, DChoice::Both)).unwrap();
        assert_eq!(report.classes.rank_dual, 3);
        assert_eq!(report.bounds.len(), 2);
        let b1 = &report.bounds[0];
        assert_eq!((b1.imm_lower, b1.em_lower, b1.skew_lower), (7, 8, 15));
        let b2 = &report.bounds[1];
        assert_eq!((b2.imm_lower, b2.em_lower, b2.skew_lower), (14, 15, 29));
        assert!(report.checks.all_pass());
        assert_eq!(report.checks.t_ring_oracle, Some(true));
    }

    #[test]
    fn simplex_exits_with_witness() {
        let err = run_compute(&cfg("simplex:3", PairSource::Staircase, DChoice::One)).unwrap_err();
        assert_eq!(exit_code(&err), 3);
        let msg = err.to_string();
        assert!(msg.contains("odd"), "{msg}");
    }

    #[test]
    fn json_report_roundtrips_and_is_deterministic() {
        let config = cfg("cube:2 x polygon:6", PairSource::Staircase, DChoice::One);
        let a = run_compute(&config).unwrap();
        let b = run_compute(&config).unwrap();
        let ja = serde_json::to_string_pretty(&a).unwrap();
        let jb = serde_json::to_string_pretty(&b).unwrap();
        assert_eq!(ja, jb);
        let parsed: Report = serde_json::from_str(&ja).unwrap();
        assert_eq!(serde_json::to_string_pretty(&parsed).unwrap(), ja);
    }

    #[test]
    fn plain_pair_has_trivial_classes() {
        let report = run_compute(&cfg("perm:3", PairSource::Plain, DChoice::One)).unwrap();
        assert_eq!(report.classes.rank_dual, 0);
        assert!(report.notes.iter().any(|s| s.contains("no obstruction")));
        assert!(report.checks.all_pass());
    }

    #[test]
    fn sigma_rows_and_examples_lines() {
        let text = sigma_text(8).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[4], "4\t1\t1\t1\t1");
        assert_eq!(lines[5], "5\t1\t0\t1\t0\t0");
        assert!(lines[8].ends_with("\t1"));

        let examples = dual_class_lines();
        assert!(examples.contains("n=2: 1 + t1\n"));
        assert!(examples.contains("n=3: 1 + t1 + t2\n"));
    }

    #[test]
    fn external_matrix_rejected_with_pair_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(
            &path,
            r#"{"d": 1, "columns": [[1,0],[1,0],[1,0],[1,0]], "base_vertex": null}"#,
        )
        .unwrap();
        let config = RunConfig {
            polytope: PolytopeSource::Expression("cube:2".into()),
            coloring: ColoringSource::Auto,
            pair: PairSource::File(path),
            d: DChoice::One,
            format: OutputFormat::Text,
            check_only: false,
        };
        let err = run_compute(&config).unwrap_err();
        assert_eq!(exit_code(&err), 4);
        assert!(err.to_string().contains("vertex"));
    }

    #[test]
    fn external_valid_matrix_runs_through_reduced_kernel() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ok.json");
        // The staircase matrix of the square, fed back as an external file.
        std::fs::write(
            &path,
            r#"{"d": 2, "columns": [[1,1],[1,0],[0,1],[0,1]], "base_vertex": [1,3]}"#,
        )
        .unwrap();
        let config = RunConfig {
            polytope: PolytopeSource::Expression("cube:2".into()),
            coloring: ColoringSource::Auto,
            pair: PairSource::File(path),
            d: DChoice::Two,
            format: OutputFormat::Text,
            check_only: false,
        };
        let report = run_compute(&config).unwrap();
        assert_eq!(report.betti, vec![1, 2, 1]);
        assert_eq!(report.pair_kind, "external");
        assert_eq!(report.classes.rank_dual, 1);
    }

    #[test]
    fn unreadable_input_is_exit_2() {
        let config = RunConfig {
            polytope: PolytopeSource::File(PathBuf::from("/nonexistent/p.json")),
            coloring: ColoringSource::Auto,
            pair: PairSource::Staircase,
            d: DChoice::One,
            format: OutputFormat::Text,
            check_only: false,
        };
        let err = run_compute(&config).unwrap_err();
        assert_eq!(exit_code(&err), 2);
    }
}
