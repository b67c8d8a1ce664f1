use std::fmt::Display;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use polyprod::cube_oracle::{compare_with_ck, OracleError};
use polyprod::decomposition::{self, DecompositionError};
use polyprod::graded_algebra::field::{rank, Field, PrimeField, Rationals};
use polyprod::graded_algebra::homology::HomologyGroup;
use polyprod::graded_algebra::snf::abs_determinant;
use polyprod::graded_algebra::{validate_pair_data, IntegerMatrix, LinalgError};
use polyprod::realmac_chain::{self, build_ck, ck_cohomology, cup_product_table, format_cochain};
use polyprod::simplicial::lex_weight;
use polyprod::spectral::{self, ChainModel, SpectralError, SpectralSequence};
use polyprod::{Coefficients, PairData, PairSpec, PoincareSeries, Preset, Simplex, SimplicialComplex, Variant};

#[derive(Parser)]
#[command(name = "polyprod", version, about = "Exact cohomology of polyhedral products")]
struct Cli {
    /// Z, Q or F<p> (for example F2, F_3).
    #[arg(long, global = true, default_value = "Z")]
    coefficients: Coefficients,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Tex,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check a complex and (optionally) pair data.
    Validate { complex: String, pairs: Option<String> },
    /// Poincaré series of H*(Z) (variant z) or reduced H*(Ẑ) (variant hat).
    Poincare {
        complex: String,
        pairs: Option<String>,
        #[arg(long, default_value = "hat")]
        variant: Variant,
        /// Also run the spectral sequence and compare totals.
        #[arg(long)]
        check: bool,
    },
    /// List the summands of the additive decomposition.
    Decompose {
        complex: String,
        pairs: Option<String>,
        #[arg(long, default_value = "hat")]
        variant: Variant,
    },
    /// Stanley-Reisner presentation (pair data with E empty).
    Sr { complex: String, pairs: Option<String> },
    /// Euler characteristic of the real moment-angle complex.
    Euler {
        complex: String,
        /// Also compare with the cubical oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Genus of the real moment-angle surface of a polygon.
    Genus { complex: String },
    /// Cohomology of the real moment-angle complex from C_K.
    RmacHomology {
        complex: String,
        /// Print cocycle representatives (integers only).
        #[arg(long)]
        representatives: bool,
    },
    /// Cup products H^p x H^q -> H^{p+q} of the real moment-angle complex.
    RmacRing {
        complex: String,
        #[arg(long, default_value_t = 1)]
        p: i64,
        #[arg(long, default_value_t = 1)]
        q: i64,
    },
    /// Run the spectral sequence of the lex filtration.
    SsRun {
        complex: String,
        pairs: Option<String>,
        #[arg(long, default_value = "hat")]
        variant: Variant,
        /// Dump every page with class labels and differentials.
        #[arg(long)]
        pages: bool,
        /// Tables that add one simplex at a time.
        #[arg(long)]
        incremental: bool,
    },
    /// Compare C_K with the cubical cellular oracle.
    OracleCheck { complex: String },
}

struct Failure {
    code: u8,
    message: String,
}

fn input(e: impl Display) -> Failure {
    Failure {
        code: 1,
        message: e.to_string(),
    }
}

fn consistency(e: impl Display) -> Failure {
    Failure {
        code: 2,
        message: e.to_string(),
    }
}

impl From<DecompositionError> for Failure {
    fn from(e: DecompositionError) -> Self {
        match e {
            DecompositionError::VertexCount { .. }
            | DecompositionError::ExteriorPart { .. }
            | DecompositionError::Simplicial(_) => input(e),
            DecompositionError::Spectral(SpectralError::VertexCount { .. }) => input(e),
            _ => consistency(e),
        }
    }
}

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::VertexCount { .. } => input(e),
            _ => consistency(e),
        }
    }
}

impl From<LinalgError> for Failure {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::NotPrime(_) => input(e),
            _ => consistency(e),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::TooLarge { .. } => input(e),
            OracleError::Linalg(l) => l.into(),
        }
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input(format!("cannot read {path}: {e}")))
}

fn load_complex(path: &str) -> Result<SimplicialComplex, Failure> {
    SimplicialComplex::from_json(&read(path)?).map_err(|e| input(format!("{path}: {e}")))
}

fn load_pair_spec(arg: Option<&str>) -> Result<PairSpec, Failure> {
    match arg {
        None => Ok(Preset::DiskSphere1.spec()),
        Some(a) => match Preset::from_name(a) {
            Some(p) if !Path::new(a).exists() => Ok(p.spec()),
            _ => PairSpec::from_json(&read(a)?).map_err(|e| input(format!("{a}: {e}"))),
        },
    }
}

fn load_pairs(arg: Option<&str>, m: usize) -> Result<PairData, Failure> {
    let spec = load_pair_spec(arg)?;
    let report = validate_pair_data(&spec, m);
    if !report.is_ok() {
        return Err(input(format!(
            "{}: invalid pair data\n{report}",
            arg.unwrap_or("default pair data")
        )));
    }
    PairData::new(&spec, m).map_err(input)
}

fn to_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn group_text(g: &HomologyGroup, coeffs: Coefficients) -> String {
    let ring = match coeffs {
        Coefficients::Integers => "Z".to_string(),
        Coefficients::Rationals => "Q".to_string(),
        Coefficients::Prime(p) => format!("F_{p}"),
    };
    let mut parts = Vec::new();
    match g.rank {
        0 => {}
        1 => parts.push(ring),
        r => parts.push(format!("{ring}^{r}")),
    }
    for t in &g.torsion {
        parts.push(format!("Z/{t}"));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" ⊕ ")
    }
}

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::Product => "z",
        Variant::Smash => "hat",
    }
}

fn series_out(s: &PoincareSeries, format: Format) -> String {
    match format {
        Format::Tex => s.to_tex(),
        _ => s.to_string(),
    }
}

fn cmd_validate(complex: &str, pairs: Option<&str>, format: Format) -> Outcome {
    let k = load_complex(complex)?;
    let spec = load_pair_spec(pairs)?;
    let report = validate_pair_data(&spec, k.m());
    let errors: Vec<String> = report.errors.iter().map(|e| e.to_string()).collect();
    let out = match format {
        Format::Json => to_json(&json!({
            "complex": {
                "m": k.m(),
                "dim": k.dim(),
                "faces": k.num_faces(),
                "f_vector": k.f_vector(),
                "ghost_vertices": k.ghost_vertices().to_vec(),
                "minimal_non_faces": k.minimal_non_faces().iter().map(|s| s.to_vec()).collect::<Vec<_>>(),
            },
            "pair_data": { "ok": report.is_ok(), "errors": errors },
        })),
        _ => {
            let mut s = format!(
                "complex: m = {}, dim {}, {} faces, f-vector {:?}, ghost vertices {}\n",
                k.m(),
                k.dim(),
                k.num_faces(),
                k.f_vector(),
                k.ghost_vertices()
            );
            s.push_str(&format!("pair data: {report}"));
            s
        }
    };
    if report.is_ok() {
        Ok(out)
    } else {
        Err(input(out))
    }
}

fn cmd_poincare(complex: &str, pairs: Option<&str>, variant: Variant, check: bool, cli: &Cli) -> Outcome {
    let k = load_complex(complex)?;
    let pair = load_pairs(pairs, k.m())?;
    let s = decomposition::poincare(&k, &pair, variant, cli.coefficients)?;
    if check {
        let e = match cli.coefficients {
            Coefficients::Prime(p) => {
                let f = PrimeField::new(p).ok_or(LinalgError::NotPrime(p))?;
                spectral::einfty_series(&k, &pair, variant, &f)?
            }
            _ => spectral::einfty_series(&k, &pair, variant, &Rationals)?,
        };
        if e != s {
            return Err(consistency(format!("decomposition gives {s}, spectral sequence gives {e}")));
        }
    }
    Ok(match cli.format {
        Format::Json => to_json(&json!({
            "variant": variant_name(variant),
            "coefficients": cli.coefficients.to_string(),
            "poincare": s.to_string(),
        })),
        f => series_out(&s, f),
    })
}

fn cmd_decompose(complex: &str, pairs: Option<&str>, variant: Variant, cli: &Cli) -> Outcome {
    let k = load_complex(complex)?;
    let pair = load_pairs(pairs, k.m())?;
    let d = decomposition::decompose(&k, &pair, variant, cli.coefficients)?;
    Ok(match cli.format {
        Format::Json => serde_json::to_string_pretty(&d).expect("serializable"),
        Format::Text => {
            let mut s = String::new();
            for x in &d.summands {
                s.push_str(&format!(
                    "I = {:<12} sigma = {:<10} link betti {:?}  {}\n",
                    x.set.to_string(),
                    x.sigma.to_string(),
                    x.link_cohomology.betti,
                    x.series
                ));
            }
            s.push_str(&format!("total {}", d.poincare));
            s
        }
        Format::Tex => {
            let mut s = String::from("\\begin{tabular}{llll}\n$I$ & $\\sigma$ & $\\tilde H^*(\\Sigma|N|)$ & series \\\\\n\\hline\n");
            for x in &d.summands {
                s.push_str(&format!(
                    "${}$ & ${}$ & ${}$ & ${}$ \\\\\n",
                    tex_set(x.set),
                    tex_set(x.sigma),
                    x.link_cohomology.series().to_tex(),
                    x.series.to_tex()
                ));
            }
            s.push_str(&format!("\\hline\n\\multicolumn{{3}}{{l}}{{total}} & ${}$ \\\\\n\\end{{tabular}}", d.poincare.to_tex()));
            s
        }
    })
}

fn tex_set(s: Simplex) -> String {
    if s.is_empty() {
        "\\emptyset".into()
    } else {
        format!("\\{{{}\\}}", s.to_vec().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
    }
}

fn cmd_sr(complex: &str, pairs: Option<&str>, format: Format) -> Outcome {
    let k = load_complex(complex)?;
    let pair = load_pairs(pairs, k.m())?;
    let sr = decomposition::sr_presentation(&k, &pair)?;
    let d = decomposition::poincare(&k, &pair, Variant::Product, Coefficients::Rationals)?;
    if d != sr.quotient {
        return Err(consistency(format!(
            "quotient series {} differs from the decomposition {}",
            sr.quotient, d
        )));
    }
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&sr).expect("serializable"),
        _ => {
            let gens: Vec<String> = sr
                .generators
                .iter()
                .map(|g| format!("{}@{} (deg {})", g.label, g.vertex, g.deg))
                .collect();
            format!(
                "generators: {}\nrelations: {}\nquotient: {}",
                gens.join(", "),
                if sr.relations.is_empty() {
                    "none".to_string()
                } else {
                    sr.relations.join(", ")
                },
                series_out(&sr.quotient, format)
            )
        }
    })
}

fn cmd_euler(complex: &str, oracle: bool, format: Format) -> Outcome {
    let k = load_complex(complex)?;
    let formula = realmac_chain::euler_characteristic(&k);
    let h = ck_cohomology(&build_ck(&k), Coefficients::Rationals)?;
    let ck: i128 = h
        .groups
        .iter()
        .map(|g| if g.degree % 2 == 0 { g.rank as i128 } else { -(g.rank as i128) })
        .sum();
    if ck != formula {
        return Err(consistency(format!("formula gives {formula}, C_K gives {ck}")));
    }
    if oracle {
        let cmp = compare_with_ck(&k, Coefficients::Rationals)?;
        let chi: i128 = cmp
            .oracle
            .iter()
            .map(|g| if g.degree % 2 == 0 { g.rank as i128 } else { -(g.rank as i128) })
            .sum();
        if chi != formula {
            return Err(consistency(format!("formula gives {formula}, oracle gives {chi}")));
        }
    }
    Ok(match format {
        Format::Json => to_json(&json!({ "chi": formula.to_string() })),
        _ => format!("chi {formula}"),
    })
}

fn cmd_genus(complex: &str, format: Format) -> Outcome {
    let k = load_complex(complex)?;
    let g = realmac_chain::genus(&k).map_err(input)?;
    let chi = realmac_chain::euler_characteristic(&k);
    if chi != 2 - 2 * g {
        return Err(consistency(format!("genus {g} but chi {chi}")));
    }
    Ok(match format {
        Format::Json => to_json(&json!({ "genus": g.to_string(), "chi": chi.to_string() })),
        _ => format!("genus {g}, chi {chi}"),
    })
}

fn cmd_rmac_homology(complex: &str, representatives: bool, cli: &Cli) -> Outcome {
    let k = load_complex(complex)?;
    let ck = build_ck(&k);
    let h = ck_cohomology(&ck, cli.coefficients)?;
    Ok(match cli.format {
        Format::Json => serde_json::to_string_pretty(&h.groups).expect("serializable"),
        f => {
            let mut lines = Vec::new();
            for g in &h.groups {
                let hg = HomologyGroup {
                    degree: g.degree,
                    rank: g.rank,
                    torsion: g.torsion.clone(),
                };
                let text = group_text(&hg, cli.coefficients);
                lines.push(match f {
                    Format::Tex => format!("H^{{{}}} &= {} \\\\", g.degree, text.replace('⊕', "\\oplus")),
                    _ => format!("H^{} = {}", g.degree, text),
                });
                if representatives {
                    for r in &g.representatives {
                        lines.push(format!("  {}", format_cochain(r)));
                    }
                }
            }
            lines.join("\n")
        }
    })
}

fn cmd_rmac_ring(complex: &str, p: i64, q: i64, format: Format) -> Outcome {
    let k = load_complex(complex)?;
    let ck = build_ck(&k);
    let h = ck_cohomology(&ck, Coefficients::Integers)?;
    let table = cup_product_table(&ck, &h, p, q)?;
    let target_rank = h.group(p + q).map(|g| g.representatives.len()).unwrap_or(0);
    // With a one-dimensional target the table is a bilinear pairing.
    let pairing = (target_rank == 1 && !table.is_empty()).then(|| {
        table
            .iter()
            .map(|row| row.iter().map(|c| c[0]).collect::<Vec<i64>>())
            .collect::<Vec<_>>()
    });
    let (prank, det) = match &pairing {
        Some(m) => {
            let f = Rationals;
            let rows: Vec<_> = m
                .iter()
                .map(|r| r.iter().map(|&x| f.from_i64(x)).collect())
                .collect();
            let r = rank(&f, &rows);
            let det = if m.len() == m[0].len() {
                Some(abs_determinant(&IntegerMatrix::from_rows(m))?)
            } else {
                None
            };
            (Some(r), det)
        }
        None => (None, None),
    };
    Ok(match format {
        Format::Json => to_json(&json!({
            "p": p,
            "q": q,
            "table": table,
            "pairing_rank": prank,
            "abs_determinant": det,
        })),
        _ => {
            let mut s = format!("H^{p} x H^{q} -> H^{}\n", p + q);
            for row in &table {
                let cells: Vec<String> = row.iter().map(|c| format!("{c:?}")).collect();
                s.push_str(&cells.join(" "));
                s.push('\n');
            }
            if let Some(r) = prank {
                s.push_str(&format!("pairing rank {r}"));
                if let Some(d) = det {
                    s.push_str(&format!(", |det| {d}"));
                }
            }
            s.trim_end().to_string()
        }
    })
}

fn cmd_ss_run<F: Field>(
    k: &SimplicialComplex,
    pair: &PairData,
    variant: Variant,
    pages: bool,
    incremental: bool,
    format: Format,
    f: F,
) -> Outcome {
    let max_w = lex_weight(Simplex::full(k.m()), k.m());
    if incremental {
        let tables = spectral::incremental_tables(k, pair, variant, &f)?;
        return Ok(match format {
            Format::Json => serde_json::to_string_pretty(&tables).expect("serializable"),
            Format::Tex => tables
                .iter()
                .map(|t| tex_cells(&t.cells, max_w))
                .collect::<Vec<_>>()
                .join("\n\n"),
            Format::Text => tables
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let added: Vec<String> = t.added.iter().map(|s| s.to_string()).collect();
                    format!(
                        "table {} (adding {})\n{}",
                        i + 1,
                        added.join(" "),
                        spectral::render_cells(&t.cells, max_w)
                    )
                })
                .collect::<Vec<_>>()
                .join("\n")
                .trim_end()
                .to_string(),
        });
    }
    let ss = SpectralSequence::build_e1(ChainModel::full(k, pair, variant)?, f)?;
    let all = ss.run_to_einfty()?;
    // Pages that differ from their predecessor, plus E_1 and E_inf.
    let mut shown = vec![0usize];
    for i in 1..all.len() {
        if ss.differential_count(&all[i - 1]) > 0 {
            shown.push(i);
        }
    }
    if *shown.last().expect("nonempty") != all.len() - 1 {
        shown.push(all.len() - 1);
    }
    let name = |i: usize| -> String {
        if i == all.len() - 1 {
            "E_inf".into()
        } else {
            format!("E_{}", all[i].r)
        }
    };
    Ok(match format {
        Format::Json => {
            let list: Vec<Value> = shown
                .iter()
                .map(|&i| {
                    let p = &all[i];
                    let mut v = json!({
                        "page": name(i),
                        "series": ss.series(p).to_string(),
                    });
                    if pages {
                        v["cells"] = serde_json::to_value(ss.cells(p)).expect("serializable");
                        v["differentials"] = serde_json::to_value(ss.differentials(p)).expect("serializable");
                    }
                    v
                })
                .collect();
            to_json(&json!({ "pages": list }))
        }
        Format::Tex => shown
            .iter()
            .map(|&i| format!("% {}\n{}", name(i), tex_cells(&ss.cells(&all[i]), max_w)))
            .collect::<Vec<_>>()
            .join("\n\n"),
        Format::Text => {
            let mut s = String::new();
            for &i in &shown {
                let p = &all[i];
                s.push_str(&format!("{}: {}\n", name(i), ss.series(p)));
                if pages {
                    s.push_str(&spectral::render_cells(&ss.cells(p), max_w));
                    for (a, b, c) in ss.differentials(p) {
                        let coeff = if c == "1" { String::new() } else { format!("{c}·") };
                        s.push_str(&format!("  d_{}({a}) = {coeff}{b}\n", p.r));
                    }
                }
            }
            s.trim_end().to_string()
        }
    })
}

fn tex_cells(cells: &std::collections::BTreeMap<u64, Vec<spectral::CellEntry>>, max_w: u64) -> String {
    let cols = "c".repeat(max_w as usize + 1);
    let head: Vec<String> = (0..=max_w).map(|w| w.to_string()).collect();
    let row: Vec<String> = (0..=max_w)
        .map(|w| match cells.get(&w) {
            Some(v) if !v.is_empty() => v
                .iter()
                .map(|c| format!("${}$", c.label.replace('⊗', "\\otimes ")))
                .collect::<Vec<_>>()
                .join(", "),
            _ => "0".into(),
        })
        .collect();
    format!(
        "\\begin{{tabular}}{{l|{cols}}}\nfiltration & {} \\\\\n\\hline\n & {} \\\\\n\\end{{tabular}}",
        head.join(" & "),
        row.join(" & ")
    )
}

fn cmd_oracle_check(complex: &str, cli: &Cli) -> Outcome {
    let k = load_complex(complex)?;
    let cmp = compare_with_ck(&k, cli.coefficients)?;
    let text = |v: &[HomologyGroup]| -> Vec<String> {
        v.iter()
            .map(|g| format!("H^{} = {}", g.degree, group_text(g, cli.coefficients)))
            .collect()
    };
    let out = match cli.format {
        Format::Json => to_json(&json!({
            "agree": cmp.agrees(),
            "oracle": cmp.oracle,
            "ck": cmp.ck,
        })),
        _ => format!(
            "oracle: {}\nC_K:    {}\n{}",
            text(&cmp.oracle).join(", "),
            text(&cmp.ck).join(", "),
            if cmp.agrees() { "agree" } else { "MISMATCH" }
        ),
    };
    if cmp.agrees() {
        Ok(out)
    } else {
        Err(consistency(out))
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Validate { complex, pairs } => cmd_validate(complex, pairs.as_deref(), cli.format),
        Command::Poincare {
            complex,
            pairs,
            variant,
            check,
        } => cmd_poincare(complex, pairs.as_deref(), *variant, *check, cli),
        Command::Decompose { complex, pairs, variant } => cmd_decompose(complex, pairs.as_deref(), *variant, cli),
        Command::Sr { complex, pairs } => cmd_sr(complex, pairs.as_deref(), cli.format),
        Command::Euler { complex, oracle } => cmd_euler(complex, *oracle, cli.format),
        Command::Genus { complex } => cmd_genus(complex, cli.format),
        Command::RmacHomology {
            complex,
            representatives,
        } => cmd_rmac_homology(complex, *representatives, cli),
        Command::RmacRing { complex, p, q } => cmd_rmac_ring(complex, *p, *q, cli.format),
        Command::SsRun {
            complex,
            pairs,
            variant,
            pages,
            incremental,
        } => {
            let k = load_complex(complex)?;
            let pair = load_pairs(pairs.as_deref(), k.m())?;
            match cli.coefficients {
                Coefficients::Prime(p) => {
                    let f = PrimeField::new(p).ok_or(LinalgError::NotPrime(p))?;
                    cmd_ss_run(&k, &pair, *variant, *pages, *incremental, cli.format, f)
                }
                _ => cmd_ss_run(&k, &pair, *variant, *pages, *incremental, cli.format, Rationals),
            }
        }
        Command::OracleCheck { complex } => cmd_oracle_check(complex, cli),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
