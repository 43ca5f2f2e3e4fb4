use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tamc_core::analysis::{bench, write_csv, Family};
use tamc_core::bisim::bisim_check;
use tamc_core::calculi::DEFAULT_FUEL;
use tamc_core::gen::{GenConfig, Generator};
use tamc_core::machine::int::{init_itam, IntFlavor};
use tamc_core::machine::source::{init_stam, readback_stam, SFocus, SState};
use tamc_core::machine::target::{init_ttam, source_view, TargetFlavor};
use tamc_core::machine::{Focus, Machine, MachineKind, Readback, RunFinal, State, Step};
use tamc_core::surface::{parse, print_int, print_source, print_target};
use tamc_core::syntax::{metrics, size_int, size_target, SourceTerm};
use tamc_core::transforms::{closure_convert, unwrap, wrap};

const SUMMARY_WIDTH: usize = 60;

#[derive(Parser)]
#[command(name = "tamc", version, about = "Closure conversion workbench: calculi, translations and tupled abstract machines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MachineArg {
    Source,
    Int,
    Target,
}

impl From<MachineArg> for MachineKind {
    fn from(m: MachineArg) -> MachineKind {
        match m {
            MachineArg::Source => MachineKind::Source,
            MachineArg::Int => MachineKind::Int,
            MachineArg::Target => MachineKind::Target,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvertTo {
    Int,
    Target,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    TupleExplosion,
    FunExplosion,
    QuadraticWrap,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::TupleExplosion => Family::TupleExplosion,
            FamilyArg::FunExplosion => Family::FunExplosion,
            FamilyArg::QuadraticWrap => Family::QuadraticWrap,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a machine on a program and print the final state's source term.
    Run {
        /// Program file, or `-` for stdin.
        file: PathBuf,
        #[arg(long, value_enum, default_value = "target")]
        machine: MachineArg,
        /// Print one line per transition.
        #[arg(long)]
        trace: bool,
        /// With --trace, print full states instead of one-line summaries.
        #[arg(long)]
        dump_states: bool,
        #[arg(long, env = "TAMC_FUEL", default_value_t = DEFAULT_FUEL)]
        fuel: u64,
    },
    /// Print the intermediate or target translation of a program.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: ConvertTo,
    },
    /// Check calculi and machines against each other.
    Bisim {
        /// Program files to check.
        files: Vec<PathBuf>,
        /// Seed for generated terms.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of generated terms to check.
        #[arg(long, default_value_t = 0)]
        count: usize,
        /// Also check the explosion families up to this size.
        #[arg(long)]
        families: Option<usize>,
        #[arg(long, env = "TAMC_FUEL", default_value_t = DEFAULT_FUEL)]
        fuel: u64,
    },
    /// Run family instances and write the counters as CSV.
    Bench {
        #[arg(long, value_enum, required = true)]
        family: Vec<FamilyArg>,
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "target")]
        machine: Vec<MachineArg>,
        /// Output file; stdout if absent.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, env = "TAMC_FUEL", default_value_t = DEFAULT_FUEL)]
        fuel: u64,
    },
    /// Print size, width and height of a program and of its translations.
    Metrics { file: PathBuf },
}

/// Exit code 2: bad input or usage. Exit code 1: a check failed.
enum Failure {
    Usage(String),
    Check(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

fn read_program(path: &Path) -> Result<SourceTerm, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
    };
    parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn summarize(text: String) -> String {
    if text.chars().count() <= SUMMARY_WIDTH {
        text
    } else {
        let mut s: String = text.chars().take(SUMMARY_WIDTH - 3).collect();
        s.push_str("...");
        s
    }
}

/// How the driver looks at one kind of machine state.
struct View<M> {
    focus: fn(&M) -> String,
    depths: fn(&M) -> (usize, usize),
    dump: fn(&M) -> String,
    source: fn(&M) -> Result<SourceTerm, String>,
}

fn source_focus(s: &SState) -> String {
    match &s.focus {
        SFocus::Unev(t, _) => format!("◦ {}", print_source(t)),
        SFocus::Ev(c) => format!("• {}", print_source(&tamc_core::machine::source::Readback::new().closure(c))),
    }
}

fn source_view_s() -> View<SState> {
    View {
        focus: source_focus,
        depths: |s| (s.stack.len(), 0),
        dump: |s| format!("  focus: {}\n  state: {}", source_focus(s), print_source(&readback_stam(s))),
        source: |s| Ok(readback_stam(s)),
    }
}

fn int_focus(s: &State<IntFlavor>) -> String {
    let t = Readback::<IntFlavor>::default().focus(&s.focus, &s.env);
    let mark = if matches!(s.focus, Focus::Unev(_)) { "◦" } else { "•" };
    format!("{mark} {}", print_int(&t))
}

fn int_view() -> View<State<IntFlavor>> {
    View {
        focus: int_focus,
        depths: |s| (s.cstack.len(), s.astack.len()),
        dump: |s| {
            let env: Vec<String> = s.env.0.iter().map(|(x, _)| x.to_string()).collect();
            format!(
                "  focus: {}\n  env: [{}]\n  state: {}",
                int_focus(s),
                env.join(", "),
                print_int(&tamc_core::machine::readback(s))
            )
        },
        source: |s| unwrap(&tamc_core::machine::readback(s)).map_err(|e| e.to_string()),
    }
}

fn target_focus(s: &State<TargetFlavor>) -> String {
    let t = Readback::<TargetFlavor>::default().focus(&s.focus, &s.env);
    let mark = if matches!(s.focus, Focus::Unev(_)) { "◦" } else { "•" };
    format!("{mark} {}", print_target(&t))
}

fn target_view() -> View<State<TargetFlavor>> {
    View {
        focus: target_focus,
        depths: |s| (s.cstack.len(), s.astack.len()),
        dump: |s| {
            format!(
                "  focus: {}\n  env: {};{}\n  state: {}",
                target_focus(s),
                s.env.lvals.len(),
                s.env.svals.len(),
                print_target(&tamc_core::machine::readback(s))
            )
        },
        source: |s| source_view(s).map_err(|e| e.to_string()),
    }
}

fn drive<M: Machine>(
    init: M,
    view: View<M>,
    fuel: u64,
    trace: bool,
    dump: bool,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let mut state = init;
    let mut steps = 0u64;
    if trace && dump {
        writeln!(out, "0\tinit\t-")?;
        writeln!(out, "{}", (view.dump)(&state))?;
    }
    let final_ = loop {
        if steps >= fuel {
            break RunFinal::FuelExhausted;
        }
        match state.clone().step().map_err(|e| Failure::Check(e.to_string()))? {
            Step::Transition { rule, next, .. } => {
                steps += 1;
                state = next;
                if trace {
                    let label = rule.label().map_or("-".to_string(), |l| l.to_string());
                    if dump {
                        writeln!(out, "{steps}\t{}\t{label}", rule.name())?;
                        writeln!(out, "{}", (view.dump)(&state))?;
                    } else {
                        let (c, a) = (view.depths)(&state);
                        writeln!(out, "{steps}\t{}\t{label}\t{}\t{c}\t{a}", rule.name(), summarize((view.focus)(&state)))?;
                    }
                }
            }
            Step::Final { halt, state: last } => {
                state = last;
                break halt.into();
            }
        }
    };
    let term = (view.source)(&state).map_err(Failure::Check)?;
    let outcome = match final_ {
        RunFinal::Successful => "successful".to_string(),
        RunFinal::Clash(k) => format!("clash({k})"),
        RunFinal::FuelExhausted => "fuel-exhausted".to_string(),
    };
    writeln!(out, "halt\t{outcome}\t{steps} transitions")?;
    writeln!(out, "{}", print_source(&term))?;
    Ok(())
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Failure> {
    match cli.command {
        Command::Run { file, machine, trace, dump_states, fuel } => {
            let u = read_program(&file)?;
            let usage = |e: tamc_core::Error| Failure::Usage(e.to_string());
            match machine {
                MachineArg::Source => drive(init_stam(&u).map_err(usage)?, source_view_s(), fuel, trace, dump_states, out),
                MachineArg::Int => drive(init_itam(&wrap(&u)).map_err(usage)?, int_view(), fuel, trace, dump_states, out),
                MachineArg::Target => {
                    let t = closure_convert(&u).map_err(usage)?;
                    drive(init_ttam(&t).map_err(usage)?, target_view(), fuel, trace, dump_states, out)
                }
            }
        }
        Command::Convert { file, to } => {
            let u = read_program(&file)?;
            match to {
                ConvertTo::Int => writeln!(out, "{}", print_int(&wrap(&u)))?,
                ConvertTo::Target => {
                    let t = closure_convert(&u).map_err(|e| Failure::Usage(e.to_string()))?;
                    writeln!(out, "{}", print_target(&t))?
                }
            }
            Ok(())
        }
        Command::Bisim { files, seed, count, families, fuel } => {
            let mut items: Vec<(String, SourceTerm)> = Vec::new();
            for f in &files {
                items.push((f.display().to_string(), read_program(f)?));
            }
            let mut g = Generator::new(GenConfig { seed, ..GenConfig::default() });
            items.extend((0..count).map(|k| (format!("seed{seed}#{k}"), g.next_term())));
            if let Some(n_max) = families {
                for f in [Family::TupleExplosion, Family::FunExplosion] {
                    items.extend((0..=n_max).map(|n| (format!("{f}/{n}"), f.instance(n))));
                }
            }
            if items.is_empty() {
                return Err(Failure::Usage("nothing to check: give files, --count or --families".into()));
            }
            let mut failed = 0;
            for (name, u) in &items {
                match bisim_check(u, fuel) {
                    Ok(r) => writeln!(out, "ok\t{name}\t{} steps\t{}", r.labels.len(), r.terminal)?,
                    Err(d) => {
                        failed += 1;
                        writeln!(out, "FAIL\t{name}\t{d}")?;
                    }
                }
            }
            writeln!(out, "{} checked, {failed} failed", items.len())?;
            if failed > 0 {
                return Err(Failure::Check(format!("{failed} bisimulation failures")));
            }
            Ok(())
        }
        Command::Bench { family, n_min, n_max, machine, csv, fuel } => {
            if n_min > n_max {
                return Err(Failure::Usage(format!("--n-min {n_min} exceeds --n-max {n_max}")));
            }
            let families: Vec<Family> = family.into_iter().map(Family::from).collect();
            if n_min == 0 && families.contains(&Family::QuadraticWrap) {
                return Err(Failure::Usage("the quadratic-wrap family starts at n = 1".into()));
            }
            let machines: Vec<MachineKind> = machine.into_iter().map(MachineKind::from).collect();
            let ns: Vec<usize> = (n_min..=n_max).collect();
            let rows = bench(&families, &ns, &machines, fuel).map_err(|e| Failure::Check(e.to_string()))?;
            let written = match csv {
                Some(path) => {
                    let f = fs::File::create(&path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    write_csv(&rows, BufWriter::new(f))
                }
                None => write_csv(&rows, &mut *out),
            };
            written.map_err(|e| Failure::Usage(e.to_string()))
        }
        Command::Metrics { file } => {
            let u = read_program(&file)?;
            let m = metrics(&u);
            writeln!(out, "size\t{}\nwidth\t{}\nheight\t{}", m.size, m.width, m.height)?;
            writeln!(out, "size_int\t{}", size_int(&wrap(&u)))?;
            if let Ok(t) = closure_convert(&u) {
                writeln!(out, "size_target\t{}", size_target(&t))?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("tamc: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("tamc: {msg}");
            ExitCode::from(2)
        }
    }
}
