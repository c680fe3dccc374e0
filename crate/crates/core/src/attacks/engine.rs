use std::time::Instant;

use rayon::prelude::*;

use super::grover::{iterations, sample_outcome};
use super::prepare::{copy_names, synthesize, PreparedState};
use super::simon::{solve_period, SimonSampler};
use super::simon::{simon_samples, SimonProblem};
use super::{AttackConfig, AttackKind, AttackResult, Backend, Model};
use crate::bitmath::{rank_of_words, BitVec};
use crate::periodics::{brute_force_periods, build_truncated_fl, KeyedFunction, PeriodReport};
use crate::simulator::{LedgerDelta, LedgerTag, OracleSpec, QState, QueryLedger, Reference, Register};
use crate::util::{derive_seed, mask, rng_from_seed, Rng};
use crate::{Error, Result};

/// The truncated family an attack searches, with its parameters and ground truth.
#[derive(Clone, Debug)]
pub struct AttackSetup {
    /// `F`: the family after truncation.
    pub family: KeyedFunction,
    pub key_width: u32,
    pub input_width: u32,
    /// Output bits kept per copy.
    pub output_width: u32,
    pub copies: u32,
    pub marked_hint: u64,
    pub iterations: u64,
    pub report: PeriodReport,
    pub warnings: Vec<String>,
    pub final_passes: u32,
    pub model: Model,
}

impl AttackSetup {
    pub fn new(f: &KeyedFunction, config: &AttackConfig) -> Result<Self> {
        config.validate()?;
        if config.n != f.input_width || config.kappa != f.key_width || config.m != f.output_width {
            return Err(Error::Config(format!(
                "config widths (n={}, κ={}, m={}) do not match {} ({}, {}, {})",
                config.n, config.kappa, config.m, f.label, f.input_width, f.key_width, f.output_width
            )));
        }
        let family = if config.t == 0 && config.p_split.is_none() {
            f.clone()
        } else {
            build_truncated_fl(f, config.truncation())?
        };
        let (k, n) = (family.key_width, family.input_width);
        let default_hint = if family.key_additive || config.p_split.is_some() { 2 } else { 1 };
        let marked_hint = config.marked_hint.unwrap_or(default_hint);
        let iters = if k == 0 { 0 } else { iterations(config.iteration_policy, k, marked_hint) };
        let report = brute_force_periods(&family)?;
        Ok(Self {
            key_width: k,
            input_width: n,
            output_width: config.m_out(),
            copies: config.c_prime(),
            marked_hint,
            iterations: iters,
            report,
            warnings: config.warnings(n),
            final_passes: config.final_passes,
            model: config.model,
            family,
        })
    }

    fn key_regs(&self) -> Vec<(&'static str, u32)> {
        if self.key_width == 0 {
            vec![]
        } else {
            vec![("k", self.key_width)]
        }
    }

    /// `F(i, x)` masked to the kept width, indexed by `(i << N) | x`.
    fn joint_table(&self, eval: impl Fn(u32, u32) -> u32 + Sync) -> Vec<u32> {
        let n = self.input_width;
        (0..1u32 << (self.key_width + n))
            .into_par_iter()
            .map(|v| eval(v >> n, v & mask(n)) & mask(self.output_width))
            .collect()
    }

    fn f_charges(&self) -> Vec<(LedgerTag, u64)> {
        let f = &self.family;
        [(LedgerTag::EncryptionQuantum, f.oracle_cost), (LedgerTag::PublicFn, f.public_cost)]
            .into_iter()
            .filter(|(_, c)| *c > 0)
            .collect()
    }

    fn p_charges(&self) -> Vec<(LedgerTag, u64)> {
        vec![(LedgerTag::PublicFn, self.family.public_cost)]
    }

    fn charge_f(&self, ledger: &mut QueryLedger, apps: u64) {
        for (tag, c) in self.f_charges() {
            ledger.charge(tag, c * apps);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mode {
    /// Simon test and its uncompute around an oracle phase flip.
    Gms,
    /// Amplitude amplification of the prepared Simon state.
    Dedicated,
    /// Public-function test on a prepared superposition.
    Offline,
}

/// Measured index and the vectors available for the period solve.
#[derive(Clone, Debug)]
pub(crate) struct Attempt {
    pub index: u32,
    pub vectors: Vec<u32>,
}

fn flip_low_rank(s: &mut QState, regs: &[Register], threshold: u32) {
    s.phase_flip_where(|i| {
        let mut buf = [0u32; 32];
        for (b, r) in buf.iter_mut().zip(regs) {
            *b = r.extract(i);
        }
        rank_of_words(&buf[..regs.len()]) < threshold
    });
}

fn registers(s: &QState, names: &[String]) -> Result<Vec<Register>> {
    names.iter().map(|n| s.layout().register(n).cloned()).collect()
}

fn hadamard_all(s: &mut QState, names: &[String]) -> Result<()> {
    names.iter().try_for_each(|n| s.hadamard(n))
}

fn apply_all(s: &mut QState, oracle: &OracleSpec, setup: &AttackSetup, ledger: &mut QueryLedger) -> Result<()> {
    let (xs, ys) = copy_names(setup.copies);
    for (x, y) in xs.iter().zip(&ys) {
        let inputs: Vec<&str> = if setup.key_width == 0 { vec![x] } else { vec!["k", x] };
        s.apply_oracle(oracle, &inputs, y, ledger)?;
    }
    Ok(())
}

/// GMS or dedicated attempt on the statevector backend.
pub(crate) fn statevector_online(setup: &AttackSetup, mode: Mode, rng: &mut Rng, ledger: &mut QueryLedger) -> Result<Attempt> {
    let (c, n, m) = (setup.copies, setup.input_width, setup.output_width);
    let f = &setup.family;
    let table = setup.joint_table(|i, x| f.eval(i, x));
    let oracle = OracleSpec::from_table(setup.key_width + n, m, LedgerTag::Internal, 0, table.clone())
        .with_charges(setup.f_charges());
    let mut s = QState::init(super::prepare::copies_layout(c, n, m, &setup.key_regs())?);
    let (xs, _) = copy_names(c);
    let regs = registers(&s, &xs)?;
    if setup.key_width > 0 {
        s.hadamard("k")?;
    }
    let simon = |s: &mut QState, ledger: &mut QueryLedger| -> Result<()> {
        hadamard_all(s, &xs)?;
        apply_all(s, &oracle, setup, ledger)?;
        hadamard_all(s, &xs)
    };
    let mut vectors = Vec::new();
    let index = match mode {
        Mode::Gms => {
            for _ in 0..setup.iterations {
                simon(&mut s, ledger)?;
                flip_low_rank(&mut s, &regs, n);
                simon(&mut s, ledger)?;
                s.grover_diffusion("k", &Reference::Uniform)?;
            }
            ledger.add_grover_iterations(setup.iterations);
            measure_key(&mut s, setup, rng)?
        }
        Mode::Dedicated => {
            simon(&mut s, ledger)?;
            let psi = s.clone();
            for _ in 0..setup.iterations {
                flip_low_rank(&mut s, &regs, n);
                s.reflect_about(&psi)?;
                setup.charge_f(ledger, 2 * c as u64);
            }
            ledger.add_grover_iterations(setup.iterations);
            let k = measure_key(&mut s, setup, rng)?;
            for x in &xs {
                vectors.push(s.measure(x, rng)?.bits());
            }
            ledger.add_simon_samples(c as u64);
            k
        }
        Mode::Offline => unreachable!("offline attempts start from a prepared state"),
    };
    let row: Vec<u32> = (0..1u32 << n).map(|x| table[((index << n) | x) as usize]).collect();
    vectors.extend(row_batch(setup, mode, &row, Backend::Statevector, rng, ledger)?);
    Ok(Attempt { index, vectors })
}

/// `c′` Simon vectors of `F(index, ·)`, each one oracle application.
pub(crate) fn first_batch(setup: &AttackSetup, index: u32, backend: Backend, rng: &mut Rng, ledger: &mut QueryLedger) -> Result<Vec<u32>> {
    let row: Vec<u32> = (0..1u32 << setup.input_width).map(|x| setup.family.eval(index, x) & mask(setup.output_width)).collect();
    row_batch(setup, Mode::Gms, &row, backend, rng, ledger)
}

/// `c′` Simon vectors of one row, charged as the attack's final pass.
fn row_batch(
    setup: &AttackSetup,
    mode: Mode,
    row: &[u32],
    backend: Backend,
    rng: &mut Rng,
    ledger: &mut QueryLedger,
) -> Result<Vec<u32>> {
    let charges = match mode {
        Mode::Offline => setup.p_charges(),
        _ => setup.f_charges(),
    };
    let eval = |x: u32| row[x as usize];
    let problem = SimonProblem { input_width: setup.input_width, output_width: setup.output_width, eval: &eval, charges };
    simon_samples(&problem, setup.copies, backend, rng, ledger)
}

/// Further batches while the system is indeterminate and still gaining rank.
/// Offline batches re-synthesize the prepared copies: free from a Q1
/// transcript, `c′·2^t` superposition queries under Q2.
pub(crate) fn extend_final(
    setup: &AttackSetup,
    mode: Mode,
    backend: Backend,
    prepared: Option<&[u32]>,
    attempt: &mut Attempt,
    rng: &mut Rng,
    ledger: &mut QueryLedger,
) -> Result<()> {
    let n = setup.input_width;
    let f = &setup.family;
    for _ in 1..setup.final_passes {
        if solve_period(&attempt.vectors, n).is_ok() {
            break;
        }
        let row: Vec<u32> = match (mode, prepared) {
            (Mode::Offline, Some(g)) => {
                let p = f.public_part().ok_or_else(|| Error::Config(format!("{} is not decoupled", f.label)))?;
                g.iter().enumerate().map(|(x, gx)| (gx ^ p(attempt.index, x as u32)) & mask(setup.output_width)).collect()
            }
            _ => (0..1u32 << n).map(|x| f.eval(attempt.index, x) & mask(setup.output_width)).collect(),
        };
        if mode == Mode::Offline {
            let unit = if setup.model == Model::Q2 { (LedgerTag::EncryptionQuantum, f.coset.size()) } else { (LedgerTag::Internal, 1) };
            ledger.charge(unit.0, unit.1 * setup.copies as u64);
        }
        let before = rank_of_words(&attempt.vectors);
        attempt.vectors.extend(row_batch(setup, mode, &row, backend, rng, ledger)?);
        if rank_of_words(&attempt.vectors) == before {
            break;
        }
    }
    Ok(())
}

fn measure_key(s: &mut QState, setup: &AttackSetup, rng: &mut Rng) -> Result<u32> {
    if setup.key_width == 0 {
        Ok(0)
    } else {
        Ok(s.measure("k", rng)?.bits())
    }
}

/// The public-term oracle `U_P` on `(k, x) → y`.
fn public_oracle(setup: &AttackSetup) -> Result<OracleSpec> {
    let p = setup
        .family
        .public_part()
        .ok_or_else(|| Error::Config(format!("{} is not decoupled", setup.family.label)))?
        .clone();
    let table = setup.joint_table(|i, x| p(i, x));
    Ok(OracleSpec::from_table(setup.key_width + setup.input_width, setup.output_width, LedgerTag::Internal, 0, table)
        .with_charges(setup.p_charges()))
}

/// One public-term test in place: `U_P`, `H`, phase flip on low rank, `H`, `U_P`.
fn offline_test(s: &mut QState, setup: &AttackSetup, up: &OracleSpec, ledger: &mut QueryLedger) -> Result<()> {
    let (xs, _) = copy_names(setup.copies);
    let regs = registers(s, &xs)?;
    apply_all(s, up, setup, ledger)?;
    hadamard_all(s, &xs)?;
    flip_low_rank(s, &regs, setup.input_width);
    hadamard_all(s, &xs)?;
    apply_all(s, up, setup, ledger)
}

/// Offline attempt consuming a prepared statevector.
pub(crate) fn statevector_offline(
    setup: &AttackSetup,
    prepared: &mut PreparedState,
    rng: &mut Rng,
    ledger: &mut QueryLedger,
) -> Result<Attempt> {
    let mut s = prepared.take_state()?;
    check_prepared(setup, prepared)?;
    let up = public_oracle(setup)?;
    if setup.key_width > 0 {
        s.append_register("k", setup.key_width)?;
        s.hadamard("k")?;
    }
    for _ in 0..setup.iterations {
        offline_test(&mut s, setup, &up, ledger)?;
        s.grover_diffusion("k", &Reference::Uniform)?;
    }
    ledger.add_grover_iterations(setup.iterations);
    let index = measure_key(&mut s, setup, rng)?;
    let (xs, _) = copy_names(setup.copies);
    apply_all(&mut s, &up, setup, ledger)?;
    hadamard_all(&mut s, &xs)?;
    let mut vectors = Vec::new();
    for x in &xs {
        vectors.push(s.measure(x, rng)?.bits());
    }
    ledger.add_simon_samples(setup.copies as u64);
    Ok(Attempt { index, vectors })
}

fn check_prepared(setup: &AttackSetup, prepared: &PreparedState) -> Result<()> {
    if prepared.copies != setup.copies
        || prepared.input_width != setup.input_width
        || prepared.output_width != setup.output_width
    {
        return Err(Error::Config("prepared state does not match the attack parameters".into()));
    }
    Ok(())
}

/// Hybrid attempt: exact Simon statistics per index, closed-form Grover outcome.
/// `prepared` supplies `G` for the offline mode.
pub(crate) fn hybrid(
    setup: &AttackSetup,
    mode: Mode,
    prepared: Option<&PreparedState>,
    seed: u64,
    rng: &mut Rng,
    ledger: &mut QueryLedger,
) -> Result<Attempt> {
    let (k, n, m, c) = (setup.key_width, setup.input_width, setup.output_width, setup.copies);
    let f = &setup.family;
    let row = |i: u32| -> Result<Vec<u32>> {
        Ok(match mode {
            Mode::Offline => {
                let g = prepared.ok_or_else(|| Error::Config("offline mode needs a prepared table".into()))?;
                check_prepared(setup, g)?;
                let p = f.public_part().ok_or_else(|| Error::Config(format!("{} is not decoupled", f.label)))?;
                g.table().iter().enumerate().map(|(x, gx)| (gx ^ p(i, x as u32)) & mask(m)).collect()
            }
            _ => (0..1u32 << n).map(|x| f.eval(i, x) & mask(m)).collect(),
        })
    };
    let samplers: Vec<SimonSampler> =
        (0..1u32 << k).into_par_iter().map(|i| row(i).map(|r| SimonSampler::new(n, r))).collect::<Result<_>>()?;
    let samples: Vec<Vec<u32>> = samplers
        .par_iter()
        .enumerate()
        .map(|(i, sm)| {
            let mut r = rng_from_seed(derive_seed(seed, i as u64));
            (0..c).map(|_| sm.sample(&mut r)).collect()
        })
        .collect();
    let marked: Vec<u32> = (0..1u32 << k).filter(|&i| rank_of_words(&samples[i as usize]) < n).collect();
    let r = setup.iterations;
    let index = if k == 0 { 0 } else { sample_outcome(k, &marked, r, rng) };
    let mut vectors = Vec::new();
    let apps = match mode {
        Mode::Gms => 2 * r * c as u64 + c as u64,
        Mode::Dedicated => {
            vectors.extend_from_slice(&samples[index as usize]);
            ledger.add_simon_samples(c as u64);
            (2 + 2 * r) * c as u64
        }
        Mode::Offline => 0,
    };
    setup.charge_f(ledger, apps);
    if mode == Mode::Offline {
        ledger.charge(LedgerTag::PublicFn, f.public_cost * (2 * r + 1) * c as u64);
    }
    ledger.add_grover_iterations(r);
    for _ in 0..c {
        vectors.push(samplers[index as usize].sample(rng));
    }
    ledger.add_simon_samples(c as u64);
    Ok(Attempt { index, vectors })
}

/// Per-index probability that the `c`-copy rank test flags, from the statevector.
pub fn statevector_flag_probabilities(setup: &AttackSetup) -> Result<Vec<f64>> {
    let (c, n, m) = (setup.copies, setup.input_width, setup.output_width);
    let f = &setup.family;
    let table = setup.joint_table(|i, x| f.eval(i, x));
    let oracle = OracleSpec::from_table(setup.key_width + n, m, LedgerTag::Internal, 0, table);
    let mut s = QState::init(super::prepare::copies_layout(c, n, m, &setup.key_regs())?);
    let (xs, _) = copy_names(c);
    let regs = registers(&s, &xs)?;
    if setup.key_width > 0 {
        s.hadamard("k")?;
    }
    let mut scratch = QueryLedger::new();
    hadamard_all(&mut s, &xs)?;
    apply_all(&mut s, &oracle, setup, &mut scratch)?;
    hadamard_all(&mut s, &xs)?;
    let key = (setup.key_width > 0).then(|| s.layout().register("k").cloned()).transpose()?;
    let mut probs = vec![0.0; 1 << setup.key_width];
    for (i, a) in s.amplitudes().iter().enumerate() {
        let vs: Vec<u32> = regs.iter().map(|r| r.extract(i)).collect();
        if rank_of_words(&vs) < n {
            probs[key.as_ref().map_or(0, |k| k.extract(i)) as usize] += a.norm_sqr();
        }
    }
    let scale = (1u64 << setup.key_width) as f64;
    Ok(probs.into_iter().map(|p| p * scale).collect())
}

/// Runs the public-term test with a flag qubit on `|ψ_G⟩|key⟩|0⟩` and returns the
/// fidelity with `|ψ_G⟩|key⟩|expected_flag⟩`.
pub fn uncompute_fidelity(setup: &AttackSetup, g_table: &[u32], key: u32, expected_flag: u32) -> Result<f64> {
    let (c, n, m, kw) = (setup.copies, setup.input_width, setup.output_width, setup.key_width);
    let mut extra = vec![("flag", 1, 0)];
    if kw > 0 {
        extra.insert(0, ("k", kw, key));
    }
    let mut s = synthesize(g_table, c, n, m, &extra)?;
    extra.last_mut().expect("flag").2 = expected_flag;
    let reference = synthesize(g_table, c, n, m, &extra)?;
    let up = public_oracle(setup)?;
    let (xs, _) = copy_names(c);
    let regs = registers(&s, &xs)?;
    let mut scratch = QueryLedger::new();
    apply_all(&mut s, &up, setup, &mut scratch)?;
    hadamard_all(&mut s, &xs)?;
    s.flip_flag_if("flag", |i| {
        let vs: Vec<u32> = regs.iter().map(|r| r.extract(i)).collect();
        rank_of_words(&vs) < n
    })?;
    hadamard_all(&mut s, &xs)?;
    apply_all(&mut s, &up, setup, &mut scratch)?;
    s.fidelity(&reference)
}

/// Bookkeeping shared by the attempt loops.
pub(crate) struct Run {
    pub kind: AttackKind,
    pub config: AttackConfig,
    pub ledger: QueryLedger,
    pub prep_snapshot: Option<QueryLedger>,
    pub offline_delta: Option<LedgerDelta>,
    pub attempt_deltas: Vec<LedgerDelta>,
    pub started: Instant,
}

impl Run {
    pub fn new(kind: AttackKind, config: &AttackConfig) -> Self {
        Self {
            kind,
            config: config.clone(),
            ledger: QueryLedger::new(),
            prep_snapshot: None,
            offline_delta: None,
            attempt_deltas: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn attempt_seed(&self, attempt: u32) -> u64 {
        derive_seed(self.config.rng_seed, attempt as u64)
    }

    /// Solves and verifies; `Some` result when this attempt is final.
    pub fn conclude(&mut self, setup: &AttackSetup, attempt: u32, a: Attempt, before: &QueryLedger) -> Option<AttackResult> {
        self.attempt_deltas.push(self.ledger.since(before));
        let solved = solve_period(&a.vectors, setup.input_width);
        let mut warnings = setup.warnings.clone();
        let (period, verified) = match &solved {
            Ok(s) => (*s, setup.report.confirms(a.index, s.bits())),
            Err(e) => {
                warnings.push(format!("attempt {attempt}: {e}"));
                (BitVec::zero(setup.input_width), false)
            }
        };
        if !verified && attempt < self.config.max_retries {
            return None;
        }
        Some(AttackResult {
            attack: self.kind,
            recovered_index: BitVec::masked(setup.key_width, a.index),
            recovered_period: period,
            verified,
            second_stage: None,
            ledger: self.ledger.clone(),
            prep_snapshot: self.prep_snapshot.clone(),
            offline_delta: self.offline_delta,
            attempt_deltas: std::mem::take(&mut self.attempt_deltas),
            attempts: attempt,
            iterations: setup.iterations,
            c_prime: setup.copies,
            marked_hint: setup.marked_hint,
            warnings,
            wall_time: self.started.elapsed(),
        })
    }
}

pub(crate) fn seeded(run: &Run, attempt: u32) -> (u64, Rng) {
    let seed = run.attempt_seed(attempt);
    (seed, rng_from_seed(derive_seed(seed, u64::MAX)))
}

pub(crate) fn require_backend_fit(setup: &AttackSetup, backend: Backend) -> Result<()> {
    if backend == Backend::Statevector {
        let qubits = setup.key_width + setup.copies * (setup.input_width + setup.output_width);
        if qubits > crate::simulator::MAX_QUBITS {
            return Err(Error::Config(format!(
                "statevector needs {qubits} qubits (κ'={}, c′={}, n'={}, m'={}); the cap is {}",
                setup.key_width,
                setup.copies,
                setup.input_width,
                setup.output_width,
                crate::simulator::MAX_QUBITS
            )));
        }
    }
    Ok(())
}
