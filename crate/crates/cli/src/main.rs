use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use latticefusion::duality::{nso_relations, stage_trace};
use latticefusion::gauging::{
    cylinder_partial_gauge, dd_fusion_check, eta_d_fusion_suite, full_gauge, partial_gauge, quadrant_lattice,
};
use latticefusion::model::{
    build_fracton_membrane, build_xm, classify, defect_fusion_product, flipped_bonds, DefectClass, MembraneExtent,
    TermText,
};
use latticefusion::report::SCHEMA;
use latticefusion::simulator::wigner_and_anomaly_suite;
use latticefusion::{
    build_stage, duality_unitary, verify_automorphism, Error, GaugeRegion, Lattice, LatticeSpec, Report, StageId,
};

#[derive(Parser)]
#[command(name = "latticefusion", version, about = "Verification suites for the Xu-Moore duality operator")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print a text rendering of the report instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the duality circuit generator by generator.
    VerifyAutomorphism {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Include the Hamiltonian after every stage.
        #[arg(long)]
        stage_trace: bool,
    },
    /// Dense Wigner, isometry and D^2 checks plus the algebraic relations.
    NsoSuite {
        #[arg(long, default_value_t = 3)]
        lx: usize,
        #[arg(long, default_value_t = 3)]
        ly: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    #[command(subcommand)]
    Gauge(GaugeCommand),
    #[command(subcommand)]
    Fusion(FusionCommand),
    #[command(subcommand)]
    Circuit(CircuitCommand),
}

#[derive(Subcommand)]
enum GaugeCommand {
    /// Gauge the whole torus and compare with the dual model.
    Full {
        #[arg(long)]
        lx: usize,
        #[arg(long)]
        ly: usize,
    },
    /// Gauge an Sx x Sy block of dual sites anchored at (Qx, Qy).
    Partial {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, default_value_t = 0)]
        qx: i64,
        #[arg(long, default_value_t = 0)]
        qy: i64,
        #[arg(long)]
        sx: usize,
        #[arg(long, default_value_t = 0)]
        sy: usize,
    },
}

#[derive(Subcommand)]
enum FusionCommand {
    /// Fuse eta lines into the duality defect at (qx, qy) on a plane window.
    EtaD {
        #[arg(long, default_value_t = 7)]
        lx: usize,
        #[arg(long, default_value_t = 7)]
        ly: usize,
        #[arg(long, default_value_t = 3)]
        qx: i64,
        #[arg(long, default_value_t = 3)]
        qy: i64,
    },
    /// Fuse two duality defects and reduce each auxiliary sector.
    #[command(name = "d-d")]
    DD {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Membrane operator anchored at (i+1/2, j+1/2).
    Fracton {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        i: i64,
        #[arg(long)]
        j: i64,
        /// Upper corner of a rectangular membrane; a plane window defaults to the quadrant.
        #[arg(long, requires = "j2")]
        i2: Option<i64>,
        #[arg(long, requires = "i2")]
        j2: Option<i64>,
    },
}

#[derive(Subcommand)]
enum CircuitCommand {
    /// Write the gate list of one stage.
    Export {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, default_value = "Full")]
        stage: String,
        /// Export the inverse, e.g. the duality unitary for `--stage Full`.
        #[arg(long)]
        invert: bool,
        #[arg(long, value_enum, default_value_t = CircuitFormat::Gatefile)]
        format: CircuitFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CircuitFormat {
    Gatefile,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeometryArg {
    Torus,
    Cylinder,
    Plane,
}

#[derive(Args)]
struct LatticeArgs {
    #[arg(long, value_enum, default_value_t = GeometryArg::Torus)]
    geometry: GeometryArg,
    #[arg(long)]
    lx: usize,
    /// Torus or plane height.
    #[arg(long)]
    ly: Option<usize>,
    /// Cylinder window height.
    #[arg(long)]
    height: Option<usize>,
    #[arg(long, default_value_t = 2)]
    margin: usize,
}

impl LatticeArgs {
    fn spec(&self) -> Result<LatticeSpec, Error> {
        let need = |v: Option<usize>, name: &str| v.ok_or_else(|| Error::InvalidSpec(format!("--{name} is required")));
        let spec = match self.geometry {
            GeometryArg::Torus => LatticeSpec::torus(self.lx, need(self.ly, "ly")?),
            GeometryArg::Plane => LatticeSpec::plane(self.lx, need(self.ly, "ly")?),
            GeometryArg::Cylinder => LatticeSpec::cylinder(self.lx, need(self.height.or(self.ly), "height")?, self.margin),
        };
        spec.validate()?;
        Ok(spec)
    }

    fn lattice(&self) -> Result<Lattice, Error> {
        Lattice::new(self.spec()?)
    }
}

#[derive(Serialize)]
struct TraceEntry {
    stage: StageId,
    terms: Vec<TermText>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tears: Option<latticefusion::duality::TearCensus>,
}

#[derive(Serialize)]
struct TracedReport {
    schema: &'static str,
    report: Report,
    trace: Vec<TraceEntry>,
}

#[derive(Serialize)]
struct GateJson {
    gate: &'static str,
    sites: Vec<String>,
}

#[derive(Serialize)]
struct CircuitJson {
    schema: &'static str,
    lattice: LatticeSpec,
    stage: String,
    inverted: bool,
    n_qubits: usize,
    sites: Vec<String>,
    gates: Vec<GateJson>,
}

enum Output {
    Report(Report),
    Traced(TracedReport),
    Raw(String),
}

fn render_text(r: &Report) -> String {
    let mut s = format!("{} ({} passed, {} failed)\n", r.kind, r.summary.pass, r.summary.fail);
    let (gp, gt) = r.generators_passed();
    if gt > 0 {
        s.push_str(&format!("generators: {gp}/{gt}\n"));
    }
    for c in &r.checks {
        s.push_str(&format!("[{}] {}", if c.pass { "pass" } else { "FAIL" }, c.name));
        if let Some(d) = &c.detail {
            s.push_str(&format!(": {d}"));
        }
        s.push('\n');
    }
    for g in r.generators.iter().filter(|g| !g.pass) {
        s.push_str(&format!("[FAIL] {}: got {} expected {}\n", g.generator, g.got, g.expected));
    }
    for (k, v) in &r.values {
        s.push_str(&format!("{k} = {v}\n"));
    }
    for n in &r.notes {
        s.push_str(&format!("note: {n}\n"));
    }
    s
}

fn run(cmd: Command) -> Result<Output, Error> {
    Ok(match cmd {
        Command::VerifyAutomorphism { lattice, stage_trace: trace } => {
            let l = lattice.lattice()?;
            let mut report = verify_automorphism(&l, &duality_unitary(&l)?)?;
            report.stage = Some("Full".into());
            if !trace {
                return Ok(Output::Report(report));
            }
            let trace = stage_trace(&l)?
                .into_iter()
                .map(|(stage, h, tears)| TraceEntry { stage, terms: h.render(&l), tears })
                .collect();
            Output::Traced(TracedReport { schema: SCHEMA, report, trace })
        }
        Command::NsoSuite { lx, ly, trials, seed } => {
            let l = Lattice::torus(lx, ly)?;
            let mut r = wigner_and_anomaly_suite(&l, trials, seed)?;
            r.absorb(nso_relations(&l)?);
            r.value("trials", trials as i64);
            r.value("seed", seed as i64);
            Output::Report(r)
        }
        Command::Gauge(GaugeCommand::Full { lx, ly }) => {
            let f = full_gauge(lx, ly)?;
            let mut r = Report::new("gauge-full", Some(LatticeSpec::torus(lx, ly)));
            let want = build_xm(&f.dual_lattice, false).swap_couplings();
            let d = f.dual_h.diff(&want, &f.dual_lattice);
            r.check("relabeled dual is the model with couplings swapped", d.is_empty(), (!d.is_empty()).then(|| format!("{d:?}")));
            r.value("dim_log2", f.gauged.dim_log2() as i64);
            r.value("gauss_laws", f.gauged.gauss.len() as i64);
            r.value("terms", f.dual_h.len() as i64);
            Output::Report(r)
        }
        Command::Gauge(GaugeCommand::Partial { lattice, qx, qy, sx, sy }) => {
            let spec = lattice.spec()?;
            match lattice.geometry {
                GeometryArg::Cylinder => {
                    let c = cylinder_partial_gauge(spec, sx)?;
                    let mut r = Report::new("gauge-partial", Some(spec));
                    let back = c.flipped_h.conjugate(&c.flip, latticefusion::Direction::UPUdag)?;
                    let d = back.diff(&c.gauged_h, &c.gauged.lattice);
                    r.check("flip maps the defect back", d.is_empty(), (!d.is_empty()).then(|| format!("{d:?}")));
                    r.value("dim_log2", c.gauged.dim_log2() as i64);
                    Output::Report(r)
                }
                _ => {
                    let sy = if sy == 0 { sx } else { sy };
                    let p = partial_gauge(spec, GaugeRegion { qx, qy, sx, sy })?;
                    let mut r = Report::new("gauge-partial", Some(spec));
                    let formula = spec.lx * spec.ly + sx + sy - 1;
                    r.check("dimension matches LxLy+Sx+Sy-1", p.dim_log2 == formula, Some(format!("formula {formula}")));
                    r.value("dim_log2", p.dim_log2 as i64);
                    r.value("defect_terms", p.defect_terms.len() as i64);
                    r.value("gauss_laws", p.gauged.gauss.len() as i64);
                    Output::Report(r)
                }
            }
        }
        Command::Fusion(FusionCommand::EtaD { lx, ly, qx, qy }) => {
            let l = quadrant_lattice(LatticeSpec::plane(lx, ly), qx, qy)?;
            Output::Report(eta_d_fusion_suite(&l, qx, qy)?)
        }
        Command::Fusion(FusionCommand::DD { lattice, seed }) => Output::Report(dd_fusion_check(&lattice.lattice()?, seed)?),
        Command::Fusion(FusionCommand::Fracton { lattice, i, j, i2, j2 }) => {
            let l = lattice.lattice()?;
            let extent = match (i2, j2) {
                (Some(a), Some(b)) => MembraneExtent::Rect(a, b),
                _ => MembraneExtent::Quadrant,
            };
            let m = build_fracton_membrane(&l, i, j, extent)?;
            let mut r = Report::new("fusion-fracton", Some(*l.spec()));
            let bonds = flipped_bonds(&l, &m);
            let want = if extent == MembraneExtent::Quadrant { 1 } else { 4 };
            r.check(format!("membrane flips {want} bonds"), bonds.len() == want, Some(format!("{bonds:?}")));
            r.check("membrane squares to the identity", m.multiply(&m)?.is_identity(), None);
            r.check("same membrane fuses to the identity", defect_fusion_product(&l, &m, &m)?.classification == DefectClass::Identity, None);
            if let Ok(below) = build_fracton_membrane(&l, i, j - 1, extent) {
                let f = defect_fusion_product(&l, &below, &m)?;
                r.notes.push(format!("f({i},{}) x f({i},{j}) is {:?}", j - 1, f.classification));
                if extent == MembraneExtent::Quadrant {
                    r.check("vertical fracton pair is an eta row line", f.classification == DefectClass::EtaRow, None);
                }
            }
            r.notes.push(format!("membrane class {:?}", classify(&l, &m)));
            r.value("flipped_bonds", bonds.len() as i64);
            Output::Report(r)
        }
        Command::Circuit(CircuitCommand::Export { lattice, stage, invert, format }) => {
            let l = lattice.lattice()?;
            let id: StageId = stage.parse()?;
            let mut c = build_stage(&l, id)?;
            if invert {
                c = c.invert();
            }
            match format {
                CircuitFormat::Gatefile => Output::Raw(c.to_gatefile(&l)),
                CircuitFormat::Json => {
                    let label = |q: usize| l.site(q).to_string();
                    let j = CircuitJson {
                        schema: SCHEMA,
                        lattice: *l.spec(),
                        stage: id.to_string(),
                        inverted: invert,
                        n_qubits: c.n_qubits,
                        sites: (0..l.n_qubits()).map(label).collect(),
                        gates: c.gates.iter().map(|g| GateJson { gate: g.name(), sites: g.qubits().into_iter().map(label).collect() }).collect(),
                    };
                    Output::Raw(serde_json::to_string_pretty(&j).expect("serializable") + "\n")
                }
            }
        }
    })
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), String> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let (text, pass) = match &out {
        Output::Report(r) => (if cli.text { render_text(r) } else { to_json(r) }, r.passed()),
        Output::Traced(t) => (if cli.text { render_text(&t.report) } else { to_json(t) }, t.report.passed()),
        Output::Raw(s) => (s.clone(), true),
    };
    if let Err(e) = emit(&text, &cli.out) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if pass {
        ExitCode::SUCCESS
    } else {
        if cli.out.is_some() {
            if let Output::Report(r) = &out {
                eprintln!("{}", r.failures().join("\n"));
            }
        }
        ExitCode::from(1)
    }
}
