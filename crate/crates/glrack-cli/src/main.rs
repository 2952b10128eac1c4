//! `glr` — command-line front end for GL-racks and Legendrian front
//! diagrams.
//!
//! Exit codes: 0 on success, 1 on domain/cap errors, 2 on usage and format
//! errors. All output is plain line-oriented text. The `GLR_CAP`
//! environment variable overrides the exhaustive-search order cap.

use clap::{Parser, Subcommand, ValueEnum};
use glrack::algebra::{
    self, coset_gl_rack, enumerate_gl_structures, homogeneous_representation, is_gl_isomorphism,
    validate_gl_rack, StructureMode,
};
use glrack::diagram::{self, moves::random_moves, parse_diagram};
use glrack::homology::{
    cocycle_space_2, format_cocycle, legendrian_cohomology, legendrian_homology, parse_cocycle,
};
use glrack::presentation::{
    abelianization, collapse_ud, colorings_listed, count_colorings, env_of_gl_rack,
    env_of_presentation, gl_presentation, GroupPresentation,
};
use glrack::statesum::state_sum;
use glrack::{Caps, Error};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "glr", version, about = "GL-racks and Legendrian front diagrams")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Operations on GL-rack files.
    #[command(subcommand)]
    Rack(RackCmd),
    /// Operations on front diagram files.
    #[command(subcommand)]
    Diagram(DiagramCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    All,
    #[value(name = "u-eq-d")]
    UEqD,
}

#[derive(Subcommand)]
enum RackCmd {
    /// Validate the rack and GL axioms; prints `ok` or the violations.
    Check { file: PathBuf },
    /// Enumerate all GL-structures on the underlying rack.
    GlStructures {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        mode: Mode,
    },
    /// Legendrian homology H_n (or cohomology H^n over Z_m with --coeff).
    Homology {
        file: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        coeff: Option<u64>,
    },
    /// Basis of the Legendrian 2-cocycles over Z_m.
    Cocycles {
        file: PathBuf,
        #[arg(long)]
        coeff: u64,
        /// Write each basis cocycle to DIR/cocycle_<i>.cocycle.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Enveloping group after collapsing u/d identifications.
    Envelope { file: PathBuf },
    /// Homogeneous representation over the automorphism group.
    Homogeneous { file: PathBuf },
}

#[derive(Subcommand)]
enum DiagramCmd {
    /// Component count and classical invariants.
    Info { file: PathBuf },
    /// Count (and optionally list) colorings by a GL-rack.
    Color {
        file: PathBuf,
        #[arg(long)]
        rack: PathBuf,
        #[arg(long)]
        list: bool,
    },
    /// Cocycle state sum over a GL-rack.
    Statesum {
        file: PathBuf,
        #[arg(long)]
        rack: PathBuf,
        #[arg(long)]
        cocycle: PathBuf,
    },
    /// Apply seeded random Legendrian Reidemeister moves.
    Perturb {
        file: PathBuf,
        #[arg(long)]
        moves: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Enveloping group of the diagram presentation.
    Envelope { file: PathBuf },
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))
}

fn print_presentation(p: &GroupPresentation) -> Result<(), Error> {
    let gens: Vec<String> = (0..p.generators).map(|g| format!("e{g}")).collect();
    println!("gens: {}", gens.join(" "));
    let rels: Vec<String> = p
        .relators
        .iter()
        .map(|rel| {
            rel.iter()
                .map(|&(g, e)| if e >= 0 { format!("e{g}") } else { format!("e{g}^-1") })
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    println!("rels: {}", rels.join(", "));
    println!("abelianization: {}", abelianization(p)?);
    if p.is_free() {
        println!("free: rank {}", p.generators);
    } else {
        println!("free: no");
    }
    Ok(())
}

fn run() -> Result<i32, Error> {
    let caps = Caps::from_env();
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Rack(cmd) => match cmd {
            RackCmd::Check { file } => {
                let (table, u, d) = algebra::parse_gl_rack_unvalidated(&read(&file)?)?;
                let report = validate_gl_rack(&table, &u, &d)?;
                if report.ok {
                    println!("ok");
                } else {
                    println!("invalid");
                    for v in &report.violations {
                        println!("violation: {v}");
                    }
                    return Ok(1);
                }
            }
            RackCmd::GlStructures { file, mode } => {
                let gl = algebra::parse_gl_rack(&read(&file)?)?;
                let mode = match mode {
                    Mode::All => StructureMode::All,
                    Mode::UEqD => StructureMode::UEqualsD,
                };
                let pairs = enumerate_gl_structures(gl.rack(), mode, &caps)?;
                for (u, d) in &pairs {
                    let us: Vec<String> = u.0.iter().map(|v| v.to_string()).collect();
                    let ds: Vec<String> = d.0.iter().map(|v| v.to_string()).collect();
                    println!("u: {} ; d: {}", us.join(" "), ds.join(" "));
                }
                println!("count: {}", pairs.len());
            }
            RackCmd::Homology { file, degree, coeff } => {
                let gl = algebra::parse_gl_rack(&read(&file)?)?;
                match coeff {
                    None => {
                        let h = legendrian_homology(&gl, degree, &caps)?;
                        println!("H_{degree} = {h}");
                    }
                    Some(m) => {
                        let h = legendrian_cohomology(&gl, degree, m, &caps)?;
                        println!("H^{degree} = {h}");
                    }
                }
            }
            RackCmd::Cocycles { file, coeff, emit } => {
                let gl = algebra::parse_gl_rack(&read(&file)?)?;
                let basis = cocycle_space_2(&gl, coeff)?;
                println!("dimension: {}", basis.len());
                for (i, phi) in basis.iter().enumerate() {
                    let text = format_cocycle(&gl, phi)?;
                    if let Some(dir) = &emit {
                        std::fs::create_dir_all(dir).map_err(|e| {
                            Error::Format(format!("cannot create {}: {e}", dir.display()))
                        })?;
                        let path = dir.join(format!("cocycle_{i}.cocycle"));
                        std::fs::write(&path, &text).map_err(|e| {
                            Error::Format(format!("cannot write {}: {e}", path.display()))
                        })?;
                    } else {
                        println!();
                        print!("{text}");
                    }
                }
            }
            RackCmd::Envelope { file } => {
                let gl = algebra::parse_gl_rack(&read(&file)?)?;
                let env = collapse_ud(&env_of_gl_rack(&gl));
                print_presentation(&env)?;
            }
            RackCmd::Homogeneous { file } => {
                let gl = algebra::parse_gl_rack(&read(&file)?)?;
                let (data, iso) = homogeneous_representation(&gl, &caps)?;
                println!("group order: {}", data.group.order());
                println!("orbits: {}", data.subgroups.len());
                let (coset, _) = coset_gl_rack(&data)?;
                println!("conditions: ok");
                if is_gl_isomorphism(&coset, &gl, &iso) {
                    println!("isomorphism: ok");
                } else {
                    return Err(Error::Domain(
                        "orbit map is not an isomorphism onto the input".into(),
                    ));
                }
            }
        },
        Cmd::Diagram(cmd) => match cmd {
            DiagramCmd::Info { file } => {
                let d = parse_diagram(&read(&file)?)?;
                let (_, tb, r) = diagram::classical_invariants(&d);
                println!("components: {}", d.components());
                println!("tb: {tb}");
                println!("r: {r}");
            }
            DiagramCmd::Color { file, rack, list } => {
                let d = parse_diagram(&read(&file)?)?;
                let gl = algebra::parse_gl_rack(&read(&rack)?)?;
                if list {
                    let all = colorings_listed(&d, &gl, caps.tuple_count)?;
                    println!("colorings: {}", all.len());
                    for coloring in &all {
                        let cells: Vec<String> =
                            coloring.iter().map(|c| c.to_string()).collect();
                        println!("coloring: {}", cells.join(" "));
                    }
                } else {
                    println!("colorings: {}", count_colorings(&d, &gl));
                }
            }
            DiagramCmd::Statesum { file, rack, cocycle } => {
                let d = parse_diagram(&read(&file)?)?;
                let gl = algebra::parse_gl_rack(&read(&rack)?)?;
                let phi = parse_cocycle(&read(&cocycle)?, &gl)?;
                let sum = state_sum(&d, &gl, &phi)?;
                println!("statesum: {sum}");
            }
            DiagramCmd::Perturb { file, moves, seed } => {
                let d = parse_diagram(&read(&file)?)?;
                let out = random_moves(&d, moves, seed);
                println!("{out}");
            }
            DiagramCmd::Envelope { file } => {
                let d = parse_diagram(&read(&file)?)?;
                let env = collapse_ud(&env_of_presentation(&gl_presentation(&d)));
                print_presentation(&env)?;
            }
        },
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{e}");
            match e {
                Error::Format(_) => ExitCode::from(2),
                Error::Domain(_) | Error::Cap(_) => ExitCode::from(1),
            }
        }
    }
}
