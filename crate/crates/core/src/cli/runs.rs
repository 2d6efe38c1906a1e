//! Single-run and sweep commands.

use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::output::{emit, json_bytes, Cell, Table, SCHEMA_VERSION};
use super::*;
use crate::channels::{
    bec_capacity, duplex_capacity, optimize_duplex_k, optimize_telex, telex_capacity, AsymmetricBec, MessageWeights,
    Strategy,
};
use crate::hilbert::{LossCause, LossLedger, StateVector, SubsystemSpec};
use crate::montecarlo::{sample_protocol_with_workers, ProtocolConfig, TrialEnsemble};
use crate::protocols::{duplex_run, telex_run, Announcement, DuplexMessage, ProtocolOutcome, QubitState, TelexMessage};
use crate::zeno::{
    cqz_gate, dcqz_entangle, delta1, dmqz_gate, lambda0, lambda1, lambda2, lambda3, lambda4, mqz_gate, qz_gate, zeta_c,
    zeta_q, Ao, GateVariant, HeraldReport, LossEvent, Mode, Rail, ZenoParams,
};

/// Reference CQZ capacities at `M = 2`, keyed by `N`: (C, p★).
pub(crate) const CQZ_REFERENCE: [(u32, f64, f64); 2] = [(2, 0.1515, 0.606), (81, 0.8, 0.466)];

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub(crate) fn ledger_json(l: &LossLedger) -> Value {
    let mut obj = serde_json::Map::new();
    for cause in LossCause::ALL {
        obj.insert(cause.tag().to_string(), json!(l.get(cause)));
    }
    obj.insert("total".into(), json!(l.total()));
    Value::Object(obj)
}

fn events_json(events: &[LossEvent]) -> Value {
    Value::Array(
        events
            .iter()
            .map(
                |e| json!({ "stage": e.stage, "cycle": e.cycle, "cause": e.cause.tag(), "probability": e.probability }),
            )
            .collect(),
    )
}

fn state_json(s: &StateVector) -> Value {
    let labels: Vec<&str> = s.subsystems().iter().map(|x| x.label.as_str()).collect();
    let amps: Vec<Value> = s
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() > 0.0)
        .map(|(i, a)| json!({ "digits": s.digits(i), "re": a.re, "im": a.im }))
        .collect();
    json!({ "subsystems": labels, "dimensions": s.subsystems().iter().map(|x| x.dimension).collect::<Vec<_>>(), "amplitudes": amps })
}

fn qubit_json(q: &QubitState) -> Value {
    json!({ "a": { "re": q.a.re, "im": q.a.im }, "b": { "re": q.b.re, "im": q.b.im } })
}

fn outcome_json(o: &ProtocolOutcome) -> Value {
    json!({
        "status": o.status,
        "decoded_bits": o.decoded_bits.map(|(a, b)| json!([a, b])),
        "announcement": o.announcement,
        "output_states": o.output_states.map(|(a, b)| json!({ "alice": qubit_json(&a), "bob": qubit_json(&b) })),
        "fidelities": o.fidelities.map(|(a, b)| json!({ "alice": a, "bob": b })),
        "herald_probability": o.herald_probability,
        "closed_form_herald": o.closed_form_herald,
        "coherent_herald": o.coherent_herald,
        "ledger": ledger_json(&o.ledger),
        "erasure_cause": o.erasure_cause.map(|c| c.tag()),
        "outcome_probability": o.outcome_probability,
    })
}

fn ensemble_json(e: &TrialEnsemble) -> Value {
    let rates: serde_json::Map<String, Value> = e
        .empirical_rates
        .iter()
        .map(|(k, r)| (k.clone(), json!({ "rate": r.rate, "wilson_low": r.wilson_low, "wilson_high": r.wilson_high })))
        .collect();
    json!({
        "trials": e.trials,
        "seed": e.seed,
        "counts": e.counts,
        "empirical_rates": rates,
        "expected_herald": e.expected_herald,
        "success_rate": e.success_rate(),
        "z_score": e.z_score(),
    })
}

fn write_json(v: Value, format: Option<Format>, out: Option<&Path>) -> Result<(), CliError> {
    if format == Some(Format::Csv) {
        return Err(usage("this command emits JSON only"));
    }
    Ok(emit(&json_bytes(v), out)?)
}

fn write_table(t: &Table, format: Option<Format>, out: Option<&Path>) -> Result<(), CliError> {
    let bytes = match format {
        Some(Format::Json) => json_bytes(t.to_json()),
        _ => t.to_csv()?,
    };
    Ok(emit(&bytes, out)?)
}

fn gate_mode(m: RunMode) -> Result<Mode, CliError> {
    match m {
        RunMode::Analytic => Ok(Mode::Analytic),
        RunMode::Cycle => Ok(Mode::Cycle),
        RunMode::Montecarlo => Err(usage("gate supports analytic and cycle modes")),
    }
}

fn check_weight(name: &str, x: f64) -> Result<f64, CliError> {
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(usage(format!("--{name} must lie in [0, 1], got {x}")))
    }
}

fn real_qubit(label: &str, w0: f64) -> StateVector {
    let a = Complex64::new(w0.sqrt(), 0.0);
    let b = Complex64::new((1.0 - w0).max(0.0).sqrt(), 0.0);
    StateVector::qubit(label, a, b).expect("normalized")
}

fn dual_rail(gamma_sq: f64) -> StateVector {
    let mut amps = vec![Complex64::new(0.0, 0.0); 4];
    amps[0] = Complex64::new(gamma_sq.sqrt(), 0.0);
    amps[3] = Complex64::new((1.0 - gamma_sq).max(0.0).sqrt(), 0.0);
    StateVector::new(vec![SubsystemSpec::qubit("p"), SubsystemSpec::qubit("c")], amps).expect("normalized")
}

pub fn gate(a: &GateArgs, format: Option<Format>, out: Option<&Path>) -> Result<(), CliError> {
    let mode = gate_mode(a.mode)?;
    let alpha_sq = check_weight("alpha-sq", a.alpha_sq)?;
    let gamma_sq = check_weight("gamma-sq", a.gamma_sq)?;
    let p = ZenoParams::new(a.n, a.m, 1)?;
    let v = match a.variant {
        Variant::H => GateVariant::H,
        Variant::V => GateVariant::V,
    };
    let photon = || StateVector::basis(vec![SubsystemSpec::qubit("p")], &[v.pass_level()]).expect("basis");
    let electron = || real_qubit("e", alpha_sq);
    let report: HeraldReport = match a.gate {
        GateKind::Qz | GateKind::Cqz => {
            let (s, ao) = match a.ao {
                AoArg::Present => (photon(), Ao::Present),
                AoArg::Absent => (photon(), Ao::Absent),
                AoArg::Quantum => (electron().tensor(&photon())?, Ao::Quantum("e".into())),
            };
            let f = if a.gate == GateKind::Qz { qz_gate } else { cqz_gate };
            f(&s, v, &ao, &Rail::photon("p"), &p, mode)?
        }
        GateKind::Mqz => mqz_gate(&electron().tensor(&photon())?, v, "e", &Rail::photon("p"), &p, mode)?,
        GateKind::Dmqz | GateKind::Dcqz => {
            let s = electron().tensor(&dual_rail(gamma_sq))?;
            let f = if a.gate == GateKind::Dmqz { dmqz_gate } else { dcqz_entangle };
            f(&s, "e", "p", ("c", 0), ("c", 1), &p, mode)?
        }
    };
    let v = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "gate",
        "parameters": {
            "gate": format!("{:?}", a.gate).to_lowercase(),
            "variant": format!("{:?}", a.variant).to_lowercase(),
            "ao": format!("{:?}", a.ao).to_lowercase(),
            "alpha_sq": alpha_sq, "gamma_sq": gamma_sq, "n": a.n, "m": a.m, "mode": mode,
        },
        "herald_probability": report.herald_probability,
        "closed_form": report.closed_form,
        "coherent_herald": report.coherent_herald,
        "channel_exposure": report.channel_exposure,
        "channel_residue": report.channel_residue,
        "counterfactual": report.counterfactual,
        "ledger": ledger_json(&report.ledger),
        "events": events_json(&report.events),
        "output_state": state_json(&report.output_state),
    });
    write_json(v, format, out)
}

pub fn duplex(a: &DuplexArgs, format: Option<Format>, out: Option<&Path>, workers: usize) -> Result<(), CliError> {
    let message = DuplexMessage::new(a.b1, a.b2)?;
    let params = ZenoParams::new(a.n, 1, a.k)?;
    let mut parameters =
        json!({ "b1": a.b1, "b2": a.b2, "n": a.n, "k": a.k, "mode": format!("{:?}", a.mode).to_lowercase() });
    let body = match a.mode {
        RunMode::Montecarlo => {
            parameters["seed"] = json!(a.seed.unwrap_or(0));
            parameters["trials"] = json!(a.trials);
            let e = sample_protocol_with_workers(
                &ProtocolConfig::Duplex { message, params },
                a.trials,
                a.seed.unwrap_or(0),
                workers,
            )?;
            ("ensemble", ensemble_json(&e))
        }
        m => {
            let mode = gate_mode(m)?;
            parameters["seed"] = json!(a.seed);
            let o = match a.seed {
                Some(seed) => duplex_run(message, &params, mode, Some(&mut ChaCha8Rng::seed_from_u64(seed)))?,
                None => duplex_run(message, &params, mode, None)?,
            };
            ("result", outcome_json(&o))
        }
    };
    let mut v = json!({ "schema_version": SCHEMA_VERSION, "command": "duplex", "parameters": parameters });
    v[body.0] = body.1;
    write_json(v, format, out)
}

/// Parses `0.6`, `0.8i`, `-0.5+0.5i` and similar complex literals.
pub(crate) fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    Complex64::from_str(s.trim()).map_err(|_| usage(format!("invalid complex amplitude `{s}`")))
}

fn qubit_arg(a: &str, b: Option<&str>, names: (&str, &str)) -> Result<QubitState, CliError> {
    let a = parse_complex(a)?;
    let b = match b {
        Some(b) => parse_complex(b)?,
        None => {
            let rest = 1.0 - a.norm_sqr();
            if rest < -1e-9 {
                return Err(usage(format!("|{}|² exceeds 1", names.0)));
            }
            Complex64::new(rest.max(0.0).sqrt(), 0.0)
        }
    };
    QubitState::normalized(a, b).map_err(|e| usage(format!("--{} / --{}: {e}", names.0, names.1)))
}

pub fn telex(a: &TelexArgs, format: Option<Format>, out: Option<&Path>, workers: usize) -> Result<(), CliError> {
    let eta1 = qubit_arg(&a.alpha, a.beta.as_deref(), ("alpha", "beta"))?;
    let eta2 = qubit_arg(&a.gamma, a.delta.as_deref(), ("gamma", "delta"))?;
    let message = TelexMessage { eta1, eta2 };
    let params = ZenoParams::new(a.n, a.m, a.k)?;
    if let Some(mu) = a.mu {
        if mu > 1 {
            return Err(usage("--mu must be 0 or 1"));
        }
    }
    let mut parameters = json!({
        "eta1": qubit_json(&eta1), "eta2": qubit_json(&eta2),
        "n": a.n, "m": a.m, "k": a.k, "mode": format!("{:?}", a.mode).to_lowercase(), "seed": a.seed,
    });
    let body = match a.mode {
        RunMode::Montecarlo => {
            parameters["trials"] = json!(a.trials);
            let e =
                sample_protocol_with_workers(&ProtocolConfig::Telex { message, params }, a.trials, a.seed, workers)?;
            ("ensemble", ensemble_json(&e))
        }
        m => {
            let mode = gate_mode(m)?;
            parameters["mu"] = json!(a.mu);
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let ann = match a.mu {
                Some(mu) => Announcement::Forced(mu),
                None => Announcement::Random(&mut rng),
            };
            ("result", outcome_json(&telex_run(&message, &params, mode, ann)?))
        }
    };
    let mut v = json!({ "schema_version": SCHEMA_VERSION, "command": "telex", "parameters": parameters });
    v[body.0] = body.1;
    write_json(v, format, out)
}

const CAPACITY_COLUMNS: [&str; 15] = [
    "channel",
    "n",
    "m",
    "k",
    "alpha_sq",
    "gamma_sq",
    "lambda0",
    "lambda1",
    "zeta",
    "capacity",
    "p_star",
    "reference_capacity",
    "reference_p_star",
    "diff_capacity",
    "diff_p_star",
];

fn diff(formula: Option<f64>, reference: Option<f64>) -> Cell {
    match (formula, reference) {
        (Some(f), Some(r)) => Cell::F(f - r),
        _ => Cell::Empty,
    }
}

pub fn capacity(a: &CapacityArgs, format: Option<Format>, out: Option<&Path>) -> Result<(), CliError> {
    let mut t = Table::new(&CAPACITY_COLUMNS);
    match a.channel {
        Channel::Cqz => {
            let m = a.m.ok_or_else(|| usage("--m is required for the cqz channel"))?;
            let (l0, l1) = (lambda0(m)?, lambda1(m, a.n)?);
            let r = bec_capacity(&AsymmetricBec::new(l0, l1)?);
            let reference = CQZ_REFERENCE.iter().find(|(n, _, _)| m == 2 && *n == a.n);
            let (rc, rp) = (reference.map(|r| r.1), reference.map(|r| r.2));
            t.push(vec![
                "cqz".into(),
                a.n.into(),
                m.into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                l0.into(),
                l1.into(),
                Cell::Empty,
                r.capacity.into(),
                Cell::opt_f(r.p_star),
                Cell::opt_f(rc),
                Cell::opt_f(rp),
                diff(Some(r.capacity), rc),
                diff(r.p_star, rp),
            ]);
        }
        Channel::Duplex => {
            let (k, c) = match (a.optimize, a.k) {
                (Some(_), _) => {
                    let (k, r) = optimize_duplex_k(a.n)?;
                    (k, r.capacity)
                }
                (None, Some(k)) => (k, duplex_capacity(a.n, k)?.capacity),
                (None, None) => return Err(usage("--k or --optimize is required for the duplex channel")),
            };
            let mut row = vec![Cell::S("duplex".into()), a.n.into(), Cell::Empty, k.into()];
            row.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, zeta_c(a.n, k)?.into(), c.into()]);
            row.extend(std::iter::repeat_with(|| Cell::Empty).take(5));
            t.push(row);
        }
        Channel::Telex => {
            let alpha_sq = check_weight("alpha-sq", a.alpha_sq)?;
            let gamma_sq = check_weight("gamma-sq", a.gamma_sq)?;
            let (m, k, z) = match (a.optimize, a.m, a.k) {
                (Some(s), _, _) => {
                    let strategy = if s == OptimizeArg::Joint { Strategy::Joint } else { Strategy::Separable };
                    let o = optimize_telex(a.n, MessageWeights::new(alpha_sq, gamma_sq)?, strategy)?;
                    (o.m_star, o.k_star, o.zeta_q)
                }
                (None, Some(m), Some(k)) => (m, k, zeta_q(alpha_sq, gamma_sq, m, a.n, k)?),
                _ => return Err(usage("--m and --k, or --optimize, are required for the telex channel")),
            };
            let mut row =
                vec![Cell::S("telex".into()), a.n.into(), m.into(), k.into(), alpha_sq.into(), gamma_sq.into()];
            row.extend([Cell::Empty, Cell::Empty, z.into(), telex_capacity(z)?.into()]);
            row.extend(std::iter::repeat_with(|| Cell::Empty).take(5));
            t.push(row);
        }
    }
    write_table(&t, format, out)
}

/// Integer grid: `1,2,5`, `1..64`, `1..64:3` or `2..1024*2`.
pub(crate) fn parse_grid_u32(s: &str) -> Result<Vec<u32>, CliError> {
    let bad = || usage(format!("invalid integer grid `{s}`"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        if let Some((lo, rest)) = part.split_once("..") {
            let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
            let (hi, step, mul) = if let Some((hi, st)) = rest.split_once(':') {
                (hi, st.trim().parse::<u32>().map_err(|_| bad())?, false)
            } else if let Some((hi, f)) = rest.split_once('*') {
                (hi, f.trim().parse::<u32>().map_err(|_| bad())?, true)
            } else {
                (rest, 1, false)
            };
            let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
            if step == 0 || (mul && (step < 2 || lo == 0)) || lo > hi {
                return Err(bad());
            }
            let mut x = lo as u64;
            while x <= hi as u64 {
                out.push(x as u32);
                x = if mul { x * step as u64 } else { x + step as u64 };
            }
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() || out.contains(&0) {
        return Err(usage(format!("grid `{s}` must contain positive values")));
    }
    Ok(out)
}

/// Real grid: a list, or `a..b:steps` with `steps` evenly spaced points.
pub(crate) fn parse_grid_f64(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || usage(format!("invalid real grid `{s}`"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        if let Some((lo, rest)) = part.split_once("..") {
            let (hi, n) = rest.split_once(':').ok_or_else(bad)?;
            let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
            let n: u32 = n.trim().parse().map_err(|_| bad())?;
            if n < 2 {
                return Err(bad());
            }
            out.extend((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64));
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    for &x in &out {
        check_weight("grid value", x)?;
    }
    Ok(out)
}

const SWEEP_COLUMNS: [&str; 14] = [
    "channel", "n", "m", "k", "alpha_sq", "gamma_sq", "lambda0", "lambda1", "lambda2", "lambda3", "lambda4", "zeta",
    "capacity", "p_star",
];

fn sweep_row(ch: Channel, n: u32, m: u32, k: u32, a: f64, g: f64) -> crate::Result<Vec<Cell>> {
    let e = || Cell::Empty;
    Ok(match ch {
        Channel::Cqz => {
            let (l0, l1) = (lambda0(m)?, lambda1(m, n)?);
            let r = bec_capacity(&AsymmetricBec::new(l0, l1)?);
            vec![
                "cqz".into(),
                n.into(),
                m.into(),
                e(),
                e(),
                e(),
                l0.into(),
                l1.into(),
                e(),
                e(),
                e(),
                e(),
                r.capacity.into(),
                Cell::opt_f(r.p_star),
            ]
        }
        Channel::Duplex => {
            let l2 = lambda2(n, k)?;
            vec![
                "duplex".into(),
                n.into(),
                e(),
                k.into(),
                e(),
                e(),
                e(),
                e(),
                l2.into(),
                e(),
                e(),
                zeta_c(n, k)?.into(),
                duplex_capacity(n, k)?.capacity.into(),
                e(),
            ]
        }
        Channel::Telex => {
            let (l3, l4) = (lambda3(a, m, n)?, lambda4(delta1(a, g)?, n, k)?);
            let z = zeta_q(a, g, m, n, k)?;
            vec![
                "telex".into(),
                n.into(),
                m.into(),
                k.into(),
                a.into(),
                g.into(),
                e(),
                e(),
                e(),
                l3.into(),
                l4.into(),
                z.into(),
                telex_capacity(z)?.into(),
                e(),
            ]
        }
    })
}

pub fn sweep(a: &SweepArgs, format: Option<Format>, out: Option<&Path>) -> Result<(), CliError> {
    let ns = parse_grid_u32(&a.n)?;
    let ms = if a.channel == Channel::Duplex { vec![1] } else { parse_grid_u32(&a.m)? };
    let ks = if a.channel == Channel::Cqz { vec![1] } else { parse_grid_u32(&a.k)? };
    let (alphas, gammas) = if a.channel == Channel::Telex {
        (parse_grid_f64(&a.alpha_sq)?, parse_grid_f64(&a.gamma_sq)?)
    } else {
        (vec![0.5], vec![0.5])
    };
    let mut grid = Vec::new();
    for &n in &ns {
        for &m in &ms {
            for &k in &ks {
                for &al in &alphas {
                    for &g in &gammas {
                        grid.push((n, m, k, al, g));
                    }
                }
            }
        }
    }
    let rows: Vec<Vec<Cell>> =
        grid.par_iter().map(|&(n, m, k, al, g)| sweep_row(a.channel, n, m, k, al, g)).collect::<crate::Result<_>>()?;
    let mut t = Table::new(&SWEEP_COLUMNS);
    rows.into_iter().for_each(|r| t.push(r));
    write_table(&t, format, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_grids() {
        assert_eq!(parse_grid_u32("1,3,5").unwrap(), vec![1, 3, 5]);
        assert_eq!(parse_grid_u32("2..5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_grid_u32("1..10:4").unwrap(), vec![1, 5, 9]);
        assert_eq!(parse_grid_u32("2..32*2").unwrap(), vec![2, 4, 8, 16, 32]);
        assert!(parse_grid_u32("0..3").is_err());
        assert!(parse_grid_u32("5..3").is_err());
        assert!(parse_grid_u32("x").is_err());
    }

    #[test]
    fn real_grids() {
        assert_eq!(parse_grid_f64("0..1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(parse_grid_f64("1.5").is_err());
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("0.8i").unwrap(), Complex64::new(0.0, 0.8));
        assert_eq!(parse_complex("0.5+0.5i").unwrap(), Complex64::new(0.5, 0.5));
        assert!(parse_complex("abc").is_err());
    }
}
