//! `retractlab` command-line front end.
//!
//! Exit status: 0 on success, 1 when a computation finds a counterexample
//! (a property fails, a poset is not a lattice, two methods disagree), 2 on
//! usage or data errors.

mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use retractlab::absorption::AbsorptionProperty;
use retractlab::catalog::catalog_with;
use retractlab::grid::{classify_subset, ret_size, scientific};
use retractlab::retraction::rcon_by_transversals;
use retractlab::*;
use serde_json::json;

use render::{show_partition, show_set};

#[derive(Parser)]
#[command(name = "retractlab", version, about = "Retracts and retraction congruences of finite lattices")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Cap for brute-force searches (overrides RETRACTLAB_MAX_N).
    #[arg(long, global = true)]
    max_n: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct LatticeSource {
    /// Catalog name: chain(k), boolean(k), m3, n5, glued_squares_k7, grid(m,n), l12.
    #[arg(long)]
    fixture: Option<String>,
    /// Grid C_M × C_N.
    #[arg(long, num_args = 2, value_names = ["M", "N"])]
    grid: Option<Vec<usize>>,
    /// Lattice JSON file: {"n": .., "covers": [[lo, hi], ..], "labels": [..]}.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct Shape {
    #[arg(value_name = "M", required_unless_present = "m")]
    pos_m: Option<usize>,
    #[arg(value_name = "N", required_unless_present = "n")]
    pos_n: Option<usize>,
    #[arg(short, conflicts_with = "pos_m")]
    m: Option<usize>,
    #[arg(short, conflicts_with = "pos_n")]
    n: Option<usize>,
}

impl Shape {
    fn get(&self) -> Result<GridShape> {
        let m = self.m.or(self.pos_m).expect("clap enforces M");
        let n = self.n.or(self.pos_n).expect("clap enforces N");
        GridShape::new(m, n)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Bruteforce,
    Transversal,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Atom,
    Coatom,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the input is a lattice.
    Validate(LatticeSource),
    /// Chain / distributive / modular flags.
    Flags(LatticeSource),
    /// All congruences.
    Con(LatticeSource),
    /// All compatible quasiorders.
    Quo(LatticeSource),
    /// All retractions (idempotent endomorphisms).
    Retractions(LatticeSource),
    /// All retracts, optionally with the lattice verdict on the retract poset.
    Retracts {
        #[command(flatten)]
        source: LatticeSource,
        #[arg(long, value_enum, default_value_t = Mode::Bruteforce)]
        mode: Mode,
        /// Exit 1 with a witness pair when the retract poset is not a lattice.
        #[arg(long)]
        check_lattice: bool,
    },
    /// Retraction congruences (kernels of retractions).
    Rcon(LatticeSource),
    /// Exact number of retracts of a grid.
    GridCount(Shape),
    /// Retracts of a grid from the structure theorem.
    GridRetracts(Shape),
    /// The two maximal chains of the retract lattice of a grid.
    GridChains(Shape),
    /// Check an absorption property on every retract.
    Absorption {
        #[command(flatten)]
        source: LatticeSource,
        /// rc, glusqap, or a property JSON file.
        #[arg(long)]
        property: String,
    },
    /// All lattices of a given size up to isomorphism.
    Enumerate {
        #[arg(short)]
        n: usize,
    },
    /// Search the 8-element lattices for RCon = Con minus one congruence.
    SearchL8,
    /// Remove an atom or coatom from B_k and test distributivity.
    BooleanMinus {
        #[arg(short)]
        k: usize,
        #[arg(long, value_enum)]
        which: Which,
    },
    /// Hasse diagram in Graphviz DOT.
    ExportDot(LatticeSource),
}

enum Failure {
    /// A mathematical counterexample; the report was already printed.
    Counterexample,
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

struct Ctx {
    format: Format,
    limits: Limits,
}

impl Ctx {
    fn lattice(&self, src: &LatticeSource) -> std::result::Result<Lattice, Failure> {
        if let Some(name) = &src.fixture {
            return Ok(catalog_with(name, &self.limits)?.lattice);
        }
        if let Some(mn) = &src.grid {
            return Ok(make_grid(GridShape::new(mn[0], mn[1])?, &self.limits)?);
        }
        let path = src.file.as_ref().expect("clap enforces one source");
        let text =
            std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        Ok(Lattice::from_json_str(&text)?)
    }

    fn emit(&self, text: impl FnOnce() -> String, value: impl FnOnce() -> serde_json::Value) -> Outcome {
        match self.format {
            Format::Text => print!("{}", text()),
            Format::Json => println!("{}", serde_json::to_string_pretty(&value()).expect("json")),
            Format::Dot => return Err(Failure::Usage("dot output is not available for this command".into())),
        }
        Ok(())
    }

    fn emit_dot(
        &self,
        text: impl FnOnce() -> String,
        value: impl FnOnce() -> serde_json::Value,
        dot: impl FnOnce() -> String,
    ) -> Outcome {
        if self.format == Format::Dot {
            print!("{}", dot());
            Ok(())
        } else {
            self.emit(text, value)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = match cli.max_n {
        Some(cap) => Limits::DEFAULT.with_brute_force_cap(cap),
        None => Limits::from_env(),
    };
    let ctx = Ctx { format: cli.format, limits };
    match run(&ctx, &cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Counterexample) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(ctx: &Ctx, command: &Command) -> Outcome {
    let limits = &ctx.limits;
    match command {
        Command::Validate(src) => validate(ctx, src),
        Command::Flags(src) => {
            let l = ctx.lattice(src)?;
            let f = l.structural_flags();
            ctx.emit(
                || {
                    format!(
                        "chain: {}\ndistributive: {}\nmodular: {}\n",
                        f.is_chain, f.is_distributive, f.is_modular
                    )
                },
                || json!(f),
            )
        }
        Command::Con(src) => {
            let l = ctx.lattice(src)?;
            let cons = all_congruences(&l, limits)?;
            ctx.emit_dot(
                || {
                    let mut out = format!("{} congruences\n", cons.len());
                    for c in &cons {
                        out.push_str(&format!("{}\n", show_partition(&l, c)));
                    }
                    out
                },
                || json!({ "count": cons.len(), "congruences": cons }),
                || congruence_lattice(&l, limits).map(|c| c.to_dot()).unwrap_or_default(),
            )
        }
        Command::Quo(src) => {
            let l = ctx.lattice(src)?;
            let quo = all_compatible_quasiorders(&l, limits)?;
            ctx.emit(
                || {
                    let mut out = format!("{} compatible quasiorders\n", quo.len());
                    for q in &quo {
                        out.push_str(&format!("{}\n", q.to_bitstrings().join(" ")));
                    }
                    out
                },
                || json!({ "count": quo.len(), "quasiorders": quo }),
            )
        }
        Command::Retractions(src) => {
            let l = ctx.lattice(src)?;
            let maps = all_retractions(&l, limits)?;
            ctx.emit(
                || {
                    let mut out = format!("{} retractions\n", maps.len());
                    for f in &maps {
                        out.push_str(&format!("{:?} -> {}\n", f.as_slice(), show_set(&l, &f.image())));
                    }
                    out
                },
                || json!({ "count": maps.len(), "retractions": maps }),
            )
        }
        Command::Retracts { source, mode, check_lattice } => retracts_cmd(ctx, source, *mode, *check_lattice),
        Command::Rcon(src) => {
            let l = ctx.lattice(src)?;
            let kernels = if l.size() <= limits.retractions {
                rcon(&l, limits)?
            } else {
                rcon_by_transversals(&l, limits)?
            };
            let cons = all_congruences(&l, limits)?;
            ctx.emit(
                || {
                    let mut out = format!(
                        "{} of {} congruences are retraction congruences\n",
                        kernels.len(),
                        cons.len()
                    );
                    for c in &kernels {
                        out.push_str(&format!("{}\n", show_partition(&l, c)));
                    }
                    out
                },
                || json!({ "count": kernels.len(), "congruences": cons.len(), "rcon": kernels }),
            )
        }
        Command::GridCount(shape) => {
            let shape = shape.get()?;
            if !shape.is_grid() {
                let total = ret_size(shape);
                return ctx.emit(
                    || format!("chain of length {}: total {total}\n", shape.size()),
                    || json!({ "m": shape.m, "n": shape.n, "total": total.to_string() }),
                );
            }
            let c = count_retracts(shape)?;
            ctx.emit(
                || {
                    let sci = |v| {
                        let (mant, exp) = scientific(v, 7);
                        format!("{mant}e{exp}")
                    };
                    format!(
                        "sts   {} (~{})\nisc   {} (~{})\ntotal {} (~{})\n",
                        c.sts,
                        sci(&c.sts),
                        c.isc,
                        sci(&c.isc),
                        c.total,
                        sci(&c.total)
                    )
                },
                || c.to_json(),
            )
        }
        Command::GridRetracts(shape) => {
            let shape = shape.get()?;
            let found: Vec<SubsetMask> = grid_retracts(shape, limits)?.collect();
            let l = make_grid(shape, limits)?;
            let straight = found.iter().filter(|s| classify_subset(shape, s).straight).count();
            ctx.emit(
                || {
                    let mut out = format!(
                        "{} nonempty retracts ({} straight, {} injective skew chains)\n",
                        found.len(),
                        straight,
                        found.len() - straight
                    );
                    for s in &found {
                        out.push_str(&format!("{}\n", show_set(&l, s)));
                    }
                    out
                },
                || json!({ "m": shape.m, "n": shape.n, "count": found.len(), "retracts": found }),
            )
        }
        Command::GridChains(shape) => {
            let shape = shape.get()?;
            let (h1, h2) = maximal_chains(shape)?;
            let l = make_grid(shape, limits)?;
            // maximality is checked against the full retract poset when it is small
            let verified = if l.size() <= limits.retractions {
                let p = ret_poset(&l, limits)?;
                Some(p.is_maximal_chain(&h1) && p.is_maximal_chain(&h2))
            } else {
                None
            };
            ctx.emit(
                || {
                    let mut out = String::new();
                    for (name, h) in [("H1", &h1), ("H2", &h2)] {
                        out.push_str(&format!("{name} ({} members)\n", h.len()));
                        for s in h {
                            out.push_str(&format!("  {}\n", show_set(&l, s)));
                        }
                    }
                    out.push_str(&match verified {
                        Some(v) => format!("maximal: {v}\n"),
                        None => "maximal: not checked (grid above the brute-force cap)\n".into(),
                    });
                    out
                },
                || json!({ "h1": h1, "h2": h2, "maximal": verified }),
            )?;
            if verified == Some(false) {
                return Err(Failure::Counterexample);
            }
            Ok(())
        }
        Command::Absorption { source, property } => {
            let l = ctx.lattice(source)?;
            let prop = match property.parse::<BuiltinProperty>() {
                Ok(which) => builtin_property(which),
                Err(_) => {
                    let text = std::fs::read_to_string(property)
                        .map_err(|e| Failure::Usage(format!("{property}: {e}")))?;
                    AbsorptionProperty::from_json_str(&text)?
                }
            };
            let verdict = check_absorption(&l, &prop, &Scope::AllRetracts, limits)?;
            let name = prop.name.clone().unwrap_or_else(|| property.clone());
            ctx.emit(
                || match &verdict {
                    Verdict::Holds => format!("{name}: holds\n"),
                    Verdict::Counterexample { retract, embedding, star } => format!(
                        "{name}: counterexample\n  retract {}\n  embedding {embedding:?}\n  star {star} -> {} escapes\n",
                        show_set(&l, retract),
                        render::name(&l, embedding[*star])
                    ),
                },
                || json!({ "property": name, "result": verdict }),
            )?;
            if verdict.holds() {
                Ok(())
            } else {
                Err(Failure::Counterexample)
            }
        }
        Command::Enumerate { n } => {
            let all = enumerate_lattices(*n, limits)?;
            ctx.emit_dot(
                || {
                    let mut out = format!("{} lattices with {n} elements\n", all.len());
                    for l in &all {
                        let covers: Vec<String> = l.covers().iter().map(|(a, b)| format!("{a}<{b}")).collect();
                        out.push_str(&format!("{}\n", covers.join(" ")));
                    }
                    out
                },
                || json!({ "n": n, "count": all.len(), "lattices": all.iter().map(Lattice::to_json).collect::<Vec<_>>() }),
                || all.iter().map(Lattice::to_dot).collect(),
            )
        }
        Command::SearchL8 => {
            let report = search_l8(limits)?;
            ctx.emit(|| render::search_report(&report), || json!(report))
        }
        Command::BooleanMinus { k, which } => {
            let which = match which {
                Which::Atom => Removal::Atom,
                Which::Coatom => Removal::Coatom,
            };
            let r = boolean_minus_element_check(*k, which)?;
            ctx.emit(
                || {
                    let verdict = match (r.is_lattice, r.is_distributive) {
                        (false, _) => "not a lattice",
                        (true, Some(true)) => "lattice, distributive",
                        _ => "lattice, not distributive",
                    };
                    format!(
                        "B_{} minus {:?} {:#b} ({} elements): {verdict}\n",
                        r.k, r.which, r.removed, r.size
                    )
                },
                || json!(r),
            )
        }
        Command::ExportDot(src) => {
            let l = ctx.lattice(src)?;
            print!("{}", l.to_dot());
            Ok(())
        }
    }
}

fn validate(ctx: &Ctx, src: &LatticeSource) -> Outcome {
    match ctx.lattice(src) {
        Ok(l) => ctx.emit_dot(
            || format!("ok: lattice with {} elements and {} covers\n", l.size(), l.covers().len()),
            || json!({ "valid": true, "n": l.size(), "covers": l.covers().len() }),
            || l.to_dot(),
        ),
        Err(Failure::Usage(msg)) if src.file.is_some() && msg.starts_with("not a lattice") => {
            ctx.emit(|| format!("invalid: {msg}\n"), || json!({ "valid": false, "reason": msg }))?;
            Err(Failure::Counterexample)
        }
        Err(e) => Err(e),
    }
}

fn retracts_cmd(ctx: &Ctx, src: &LatticeSource, mode: Mode, check_lattice: bool) -> Outcome {
    let limits = &ctx.limits;
    let l = ctx.lattice(src)?;
    let (found, agreement) = match mode {
        Mode::Bruteforce => (retracts(&l, RetractMode::BruteForce, limits)?, None),
        Mode::Transversal => (retracts(&l, RetractMode::Transversal, limits)?, None),
        Mode::Both => {
            let a = retracts(&l, RetractMode::BruteForce, limits)?;
            let b = retracts(&l, RetractMode::Transversal, limits)?;
            let same = a == b;
            (a, Some(same))
        }
    };
    let poset = RetPoset::from_retracts(l.size(), found.iter().cloned());
    ctx.emit_dot(
        || {
            let mut out = format!("{} retracts\n", found.len());
            for s in &found {
                out.push_str(&format!("{}\n", show_set(&l, s)));
            }
            if let Some(same) = agreement {
                out.push_str(&format!("oracle agreement: {}\n", if same { "ok" } else { "MISMATCH" }));
            }
            if check_lattice {
                match poset.witness() {
                    None => out.push_str("retract poset: lattice\n"),
                    Some((a, b)) => out.push_str(&format!(
                        "retract poset: not a lattice; witness {} and {}\n",
                        show_set(&l, a),
                        show_set(&l, b)
                    )),
                }
            }
            out
        },
        || {
            let mut v = json!({ "count": found.len(), "retracts": found });
            if let Some(same) = agreement {
                v["oracle_agreement"] = json!(same);
            }
            if check_lattice {
                v["ret_poset"] = poset.to_json();
            }
            v
        },
        || poset.to_dot(),
    )?;
    if agreement == Some(false) || (check_lattice && !poset.is_lattice()) {
        return Err(Failure::Counterexample);
    }
    Ok(())
}
