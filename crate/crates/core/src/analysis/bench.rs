use std::collections::HashMap;
use std::io::Write;

use super::Family;
use crate::error::Result;
use crate::machine::int::{init_itam, readback_itam};
use crate::machine::source::{init_stam, Readback};
use crate::machine::target::{init_ttam, readback_ttam};
use crate::machine::{run, MachineKind, Rule, RunFinal, RunRecord};
use crate::syntax::{metrics, size_int, size_target, unfolded_size, SourceTerm};
use crate::transforms::{closure_convert, naming, unwrap_unchecked, wrap, FreshSupply};

/// One machine run on a source term, translated as the machine requires.
#[derive(Clone, Debug)]
pub struct InstanceRun {
    pub record: RunRecord,
    /// Size of the machine's input in its own calculus.
    pub input_size: u64,
    /// Tree size of the source term denoted by a successful final state.
    pub nf_size: Option<u128>,
}

pub fn run_instance(u: &SourceTerm, machine: MachineKind, fuel: u64, record_measure: bool) -> Result<InstanceRun> {
    let mut memo = HashMap::new();
    Ok(match machine {
        MachineKind::Source => {
            let (record, state) = run(init_stam(u)?, fuel, record_measure)?;
            let nf_size = (record.final_ == RunFinal::Successful)
                .then(|| unfolded_size(&Readback::new().state(&state), &mut memo));
            InstanceRun { record, input_size: metrics(u).size, nf_size }
        }
        MachineKind::Int => {
            let t = wrap(u);
            let (record, state) = run(init_itam(&t)?, fuel, record_measure)?;
            let nf_size = (record.final_ == RunFinal::Successful)
                .then(|| unfolded_size(&unwrap_unchecked(&readback_itam(&state)), &mut memo));
            InstanceRun { record, input_size: size_int(&t), nf_size }
        }
        MachineKind::Target => {
            let t = closure_convert(u)?;
            let (record, state) = run(init_ttam(&t)?, fuel, record_measure)?;
            let nf_size = if record.final_ == RunFinal::Successful {
                let named = naming(&readback_ttam(&state), &[], &[], &mut FreshSupply::new())?;
                Some(unfolded_size(&unwrap_unchecked(&named), &mut memo))
            } else {
                None
            };
            InstanceRun { record, input_size: size_target(&t), nf_size }
        }
    })
}

/// One benchmark observation.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub family: String,
    pub n: usize,
    pub machine: MachineKind,
    /// Size of the machine's input term.
    pub size: u64,
    /// Width and height of the source instance.
    pub width: u64,
    pub height: u64,
    pub beta: u64,
    pub pi: u64,
    pub total: u64,
    pub elem_ops: u64,
    pub env_copy_ops: u64,
    pub lookup_ops: u64,
    /// Variable lookups (`◦sub` or `◦subv`) and the lookup steps they took.
    pub var_lookups: u64,
    pub var_lookup_ops: u64,
}

pub const CSV_HEADER: [&str; 12] =
    ["family", "n", "machine", "size", "width", "height", "beta", "pi", "total", "elem_ops", "env_copy_ops", "lookup_ops"];

pub fn bench(families: &[Family], ns: &[usize], machines: &[MachineKind], fuel: u64) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &family in families {
        for &n in ns {
            let u = family.instance(n);
            let m = metrics(&u);
            for &machine in machines {
                let run = run_instance(&u, machine, fuel, false)?;
                let r = &run.record;
                let cost = r.cost();
                let var_rule = if machine == MachineKind::Source { Rule::USub } else { Rule::USubV };
                rows.push(BenchRow {
                    family: family.name().to_string(),
                    n,
                    machine,
                    size: run.input_size,
                    width: m.width,
                    height: m.height,
                    beta: r.beta(),
                    pi: r.pi(),
                    total: r.total(),
                    elem_ops: cost.elem_ops,
                    env_copy_ops: cost.env_copy_ops,
                    lookup_ops: cost.lookup_ops,
                    var_lookups: r.count(var_rule),
                    var_lookup_ops: r.cost_of(var_rule).lookup_ops,
                });
            }
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.family.clone(),
            r.n.to_string(),
            r.machine.name().to_string(),
            r.size.to_string(),
            r.width.to_string(),
            r.height.to_string(),
            r.beta.to_string(),
            r.pi.to_string(),
            r.total.to_string(),
            r.elem_ops.to_string(),
            r.env_copy_ops.to_string(),
            r.lookup_ops.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
