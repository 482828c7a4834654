//! The braiding protocol: clock-face paths, Trotterized gate schedules,
//! logical state preparation, braid execution, and logical-gate extraction.
//!
//! A braid drives one clock arm around the closed three-segment loop
//! pole -> equator -> sweep -> pole. Each Trotter step emits up to three
//! two-Pauli rotations with angles `delta_tilde` times the instantaneous
//! coupling fractions, in time order z-bond, y-bond, x-bond. The step counts
//! obey the constant-step-size rule: the polar ramps take
//! ceil(pi N_eq / (2 |phi|)) steps when the equatorial sweep takes N_eq.
//!
//! Logical states are prepared either from explicit amplitudes or by
//! replaying the published initialization circuits (with the wire order and
//! one dropped gate repaired; both routes agree to machine precision and the
//! unit tests pin that).

use crate::engine::{
    apply_circuit, apply_depolarizing, apply_gate, Gate, OneQubitKind, QuantumState,
};
use crate::holonomy::ParamPath;
use crate::linalg::{polar_unitary, CMatrix, CVector};
use crate::model::{self, Arm, SystemSpec};
use crate::pauli::Letter;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Angles below this fraction of delta_tilde emit no gate.
const GATE_OMIT_TOL: f64 = 1e-13;

/// The closed clock-face loop with signed equatorial sweep `target_phi`.
pub fn clock_path(target_phi: f64) -> Result<ParamPath> {
    if target_phi.abs() > 2.0 * PI {
        return Err(Error::InvalidArgument(format!(
            "sweep angle {target_phi} outside [-2 pi, 2 pi]"
        )));
    }
    Ok(ParamPath::clock_face(target_phi))
}

/// One Trotterized segment: a linear angle ramp taken in `steps` steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrotterSegment {
    pub steps: usize,
    /// (polar, azimuth) at the segment start.
    pub start: (f64, f64),
    /// (polar, azimuth) at the segment end.
    pub end: (f64, f64),
}

/// A fully scheduled braid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrotterPlan {
    pub n_qubits: usize,
    pub arm: Arm,
    /// Global exchange constant |Delta~| = dt |Delta|.
    pub delta_tilde: f64,
    pub segments: Vec<TrotterSegment>,
    pub gate_schedule: Vec<Gate>,
    /// True when the constant-step-size rule required rounding up.
    pub rounded_polar_steps: bool,
}

impl TrotterPlan {
    /// A plan with no gates (identity braid).
    pub fn empty(n_qubits: usize, arm: Arm) -> TrotterPlan {
        TrotterPlan {
            n_qubits,
            arm,
            delta_tilde: 0.0,
            segments: Vec::new(),
            gate_schedule: Vec::new(),
            rounded_polar_steps: false,
        }
    }

    pub fn total_steps(&self) -> usize {
        self.segments.iter().map(|s| s.steps).sum()
    }

    pub fn gate_count(&self) -> usize {
        self.gate_schedule.len()
    }

    /// Concatenate with another plan (e.g. a braid and its inverse).
    pub fn then(&self, other: &TrotterPlan) -> Result<TrotterPlan> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch(self.n_qubits, other.n_qubits));
        }
        let mut out = self.clone();
        out.segments.extend(other.segments.iter().copied());
        out.gate_schedule
            .extend(other.gate_schedule.iter().copied());
        out.rounded_polar_steps |= other.rounded_polar_steps;
        Ok(out)
    }
}

/// Trotterize a clock-face path into a gate schedule for the given arm.
///
/// `n_equator` fixes the equatorial step count; the polar ramps take
/// `ceil(pi n_equator / (2 |phi|))` steps so the step size stays constant
/// across segments (exactly `n_equator` when |phi| = pi/2). Each step `n`
/// evaluates the couplings at grid angle n * step and emits rotations on the
/// arm's z, y, x bonds in that time order, skipping vanishing couplings.
pub fn trotterize(
    path: &ParamPath,
    delta_tilde: f64,
    n_equator: usize,
    spec: &SystemSpec,
    arm: Arm,
) -> Result<TrotterPlan> {
    if delta_tilde <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "delta_tilde must be positive, got {delta_tilde}"
        )));
    }
    if n_equator == 0 {
        return Err(Error::InvalidArgument("n_equator must be >= 1".into()));
    }
    if path.segments.len() != 3 {
        return Err(Error::InvalidArgument(
            "braid paths have three segments (ramp, sweep, return)".into(),
        ));
    }
    let sweep = path.segments[1];
    let target_phi = sweep.end.1 - sweep.start.1;
    if target_phi == 0.0 {
        return Err(Error::InvalidArgument(
            "the equatorial sweep has zero extent".into(),
        ));
    }

    // Constant step size: delta = |phi| / N_eq on the sweep; the pi/2 ramps
    // then need pi N_eq / (2 |phi|) steps, rounded up when fractional.
    let ramp_steps_exact = PI * n_equator as f64 / (2.0 * target_phi.abs());
    let ramp_steps = ramp_steps_exact.ceil() as usize;
    let rounded = (ramp_steps_exact - ramp_steps as f64).abs() > 1e-9;

    let bonds = spec.arm_bonds(arm)?;
    let n = spec.n_qubits();
    let mut gates: Vec<Gate> = Vec::new();
    let mut segments = Vec::with_capacity(3);

    let mut emit_segment = |seg: &crate::holonomy::PathSegment, steps: usize| {
        for k in 1..=steps {
            let (theta, phi) = seg.point(k as f64 / steps as f64);
            let (st, ct) = theta.sin_cos();
            let (sp, cp) = phi.sin_cos();
            let fractions = [ct, st * sp, st * cp]; // z, y, x
            let placements = [
                (Letter::Z, bonds.z),
                (Letter::Y, bonds.y),
                (Letter::X, bonds.x),
            ];
            for ((axis, bond), fraction) in placements.iter().zip(fractions) {
                let angle = delta_tilde * fraction;
                if angle.abs() <= GATE_OMIT_TOL * delta_tilde {
                    continue;
                }
                gates.push(Gate::TwoPauliRotation {
                    axis_a: *axis,
                    axis_b: *axis,
                    qubit_a: bond.0,
                    qubit_b: bond.1,
                    angle,
                });
            }
        }
        segments.push(TrotterSegment {
            steps,
            start: seg.start,
            end: seg.end,
        });
    };

    emit_segment(&path.segments[0], ramp_steps);
    emit_segment(&path.segments[1], n_equator);
    emit_segment(&path.segments[2], ramp_steps);

    Ok(TrotterPlan {
        n_qubits: n,
        arm,
        delta_tilde,
        segments,
        gate_schedule: gates,
        rounded_polar_steps: rounded,
    })
}

/// Apply the plan's gate schedule in order.
pub fn execute_braid(plan: &TrotterPlan, state: &mut QuantumState) -> Result<()> {
    if plan.n_qubits != state.n_qubits() {
        return Err(Error::DimensionMismatch(plan.n_qubits, state.n_qubits()));
    }
    apply_circuit(state, &plan.gate_schedule)
}

/// Apply the schedule with a depolarizing channel of strength `p` on the
/// qubit pair after every two-qubit gate (density-matrix mode required).
pub fn execute_braid_noisy(plan: &TrotterPlan, state: &mut QuantumState, p: f64) -> Result<()> {
    if plan.n_qubits != state.n_qubits() {
        return Err(Error::DimensionMismatch(plan.n_qubits, state.n_qubits()));
    }
    for gate in &plan.gate_schedule {
        apply_gate(state, gate)?;
        if gate.is_two_qubit() {
            apply_depolarizing(state, &gate.support(), p)?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Logical state preparation
// ---------------------------------------------------------------------------

/// Tomography input labels for one logical qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LogicalLabel {
    Zero,
    One,
    Plus,
    IPlus,
}

impl LogicalLabel {
    pub const ALL: [LogicalLabel; 4] = [
        LogicalLabel::Zero,
        LogicalLabel::One,
        LogicalLabel::Plus,
        LogicalLabel::IPlus,
    ];

    pub fn token(&self) -> &'static str {
        match self {
            LogicalLabel::Zero => "0",
            LogicalLabel::One => "1",
            LogicalLabel::Plus => "+",
            LogicalLabel::IPlus => "i+",
        }
    }
}

impl std::str::FromStr for LogicalLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<LogicalLabel> {
        match s {
            "0" | "zero" => Ok(LogicalLabel::Zero),
            "1" | "one" => Ok(LogicalLabel::One),
            "+" | "plus" => Ok(LogicalLabel::Plus),
            "i+" | "iplus" => Ok(LogicalLabel::IPlus),
            _ => Err(Error::Parse(format!("unknown logical label {s:?}"))),
        }
    }
}

/// How to prepare a logical state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrepMethod {
    ExplicitAmplitudes,
    CircuitReplay,
}

fn superpose(zero: &CVector, one: &CVector, coef_one: Complex64) -> CVector {
    let mut v = zero + one.map(|x| x * coef_one);
    let n = v.norm();
    v.scale_mut(1.0 / n);
    v
}

fn label_state(zero: &CVector, one: &CVector, label: LogicalLabel) -> CVector {
    match label {
        LogicalLabel::Zero => zero.clone(),
        LogicalLabel::One => one.clone(),
        LogicalLabel::Plus => superpose(zero, one, Complex64::new(1.0, 0.0)),
        LogicalLabel::IPlus => superpose(zero, one, Complex64::new(0.0, 1.0)),
    }
}

fn kron_states(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::zeros(a.len() * b.len());
    for i in 0..a.len() {
        for j in 0..b.len() {
            out[i * b.len() + j] = a[i] * b[j];
        }
    }
    out
}

fn g1(kind: OneQubitKind, q: usize) -> Gate {
    Gate::OneQubit { kind, qubit: q }
}
fn cx(c: usize, t: usize) -> Gate {
    Gate::cnot(c, t)
}
fn cy(c: usize, t: usize) -> Gate {
    Gate::Controlled {
        control: c,
        target: t,
        kind: OneQubitKind::Y,
    }
}
fn cz(c: usize, t: usize) -> Gate {
    Gate::Controlled {
        control: c,
        target: t,
        kind: OneQubitKind::Z,
    }
}

/// Four-qubit initialization circuits, wires = qubits 0..3 top to bottom.
/// The |+> circuit carries one repaired gate: the published figure drops the
/// final Hadamard on qubit 3 (its |i+> sibling has it), without which the
/// output is not even a code state.
fn four_qubit_circuit(label: LogicalLabel) -> Vec<Gate> {
    use OneQubitKind::*;
    match label {
        LogicalLabel::Zero => vec![
            g1(X, 0),
            g1(Ry(-FRAC_PI_2), 1),
            g1(Ry(FRAC_PI_2), 2),
            cy(1, 0),
            cx(2, 0),
            cx(2, 1),
            cx(2, 3),
            g1(X, 2),
        ],
        LogicalLabel::One => vec![
            g1(Rx(FRAC_PI_2), 0),
            g1(X, 1),
            g1(H, 2),
            cx(0, 3),
            cx(2, 0),
            cx(0, 1),
            cx(0, 3),
        ],
        LogicalLabel::Plus => vec![
            g1(Rx(FRAC_PI_2), 0),
            g1(X, 1),
            g1(H, 2),
            cx(0, 3),
            cx(2, 0),
            cx(0, 1),
            cz(1, 2),
            g1(H, 3), // repaired: dropped in the published figure
        ],
        LogicalLabel::IPlus => vec![
            g1(Rx(FRAC_PI_2), 0),
            g1(X, 1),
            g1(H, 2),
            g1(S, 1),
            cx(0, 3),
            cx(2, 0),
            g1(H, 3),
            cx(0, 1),
            g1(Sdg, 2),
            g1(Sdg, 3),
            cz(1, 2),
            cz(2, 3),
        ],
    }
}

/// First-junction circuits of the ten-qubit system, on qubits 0..5.
/// The published figure orders its six wires bottom-up; gate positions here
/// are already mapped to qubit indices (wire k -> qubit 5 - k).
fn ten_qubit_q0_circuit(label: LogicalLabel) -> Vec<Gate> {
    use OneQubitKind::*;
    match label {
        LogicalLabel::Zero => vec![
            g1(H, 5),
            g1(X, 4),
            g1(X, 3),
            g1(H, 2),
            g1(H, 1),
            cx(5, 4),
            g1(Sdg, 3),
            cy(2, 3),
            cx(1, 3),
            cx(1, 2),
            cx(1, 0),
            g1(Z, 2),
            g1(Y, 1),
        ],
        LogicalLabel::One => vec![
            g1(H, 5),
            g1(X, 4),
            g1(H, 2),
            g1(H, 1),
            g1(Z, 5),
            cy(2, 3),
            cx(5, 4),
            cx(1, 3),
            cx(1, 2),
            cx(1, 0),
            g1(Z, 2),
            g1(Y, 1),
        ],
        LogicalLabel::Plus => vec![
            g1(H, 5),
            g1(X, 4),
            g1(H, 3),
            g1(H, 2),
            g1(H, 1),
            g1(Z, 5),
            g1(S, 3),
            cx(5, 4),
            cy(2, 3),
            cx(1, 3),
            g1(Z, 3),
            cx(1, 2),
            cz(5, 3),
            cx(1, 0),
            cz(5, 2),
            g1(Y, 1),
        ],
        LogicalLabel::IPlus => vec![
            g1(H, 5),
            g1(X, 4),
            g1(H, 3),
            g1(H, 2),
            g1(H, 1),
            g1(Z, 5),
            cy(2, 3),
            cx(5, 4),
            cx(1, 3),
            g1(Z, 3),
            cx(1, 2),
            cz(5, 3),
            cx(1, 0),
            cz(5, 2),
            g1(Ry(-PI), 1),
        ],
    }
}

/// Second-junction circuits on local qubits 0..3 (physical 6..9). The
/// published figure's four wires map to local qubits (3, 0, 1, 2) top to
/// bottom; gates here carry final local indices.
fn ten_qubit_q1_circuit_local(label: LogicalLabel) -> Vec<Gate> {
    use OneQubitKind::*;
    match label {
        LogicalLabel::Zero => vec![
            g1(SqrtX, 3),
            g1(H, 0),
            g1(X, 1),
            g1(X, 2),
            cx(3, 1),
            cx(0, 3),
            cx(3, 2),
            cx(3, 1),
        ],
        LogicalLabel::One => vec![
            g1(SqrtX, 3),
            g1(H, 0),
            g1(X, 1),
            cx(3, 1),
            cx(0, 3),
            cx(3, 2),
            g1(Z, 0),
            cx(3, 1),
        ],
        LogicalLabel::Plus => vec![
            g1(SqrtX, 3),
            g1(H, 0),
            g1(X, 1),
            g1(H, 2),
            cx(3, 1),
            cy(0, 3),
            g1(S, 0),
            cx(3, 2),
            cx(3, 1),
            cz(0, 2),
            g1(Z, 1),
        ],
        LogicalLabel::IPlus => vec![
            g1(SqrtX, 3),
            g1(H, 0),
            g1(X, 1),
            g1(H, 2),
            cx(3, 1),
            g1(Sdg, 2),
            cy(0, 3),
            g1(S, 0),
            cx(3, 2),
            cx(3, 1),
            cz(0, 2),
            g1(Z, 1),
        ],
    }
}

fn shift_gate(g: &Gate, offset: usize) -> Gate {
    match *g {
        Gate::OneQubit { kind, qubit } => Gate::OneQubit {
            kind,
            qubit: qubit + offset,
        },
        Gate::Controlled {
            control,
            target,
            kind,
        } => Gate::Controlled {
            control: control + offset,
            target: target + offset,
            kind,
        },
        Gate::TwoPauliRotation {
            axis_a,
            axis_b,
            qubit_a,
            qubit_b,
            angle,
        } => Gate::TwoPauliRotation {
            axis_a,
            axis_b,
            qubit_a: qubit_a + offset,
            qubit_b: qubit_b + offset,
            angle,
        },
    }
}

/// The initialization circuit for the given labels on the given system.
pub fn initialization_circuit(labels: &[LogicalLabel], spec: &SystemSpec) -> Result<Vec<Gate>> {
    match spec {
        SystemSpec::FourQubit { .. } | SystemSpec::TetradTorus { .. } => {
            let [label] = labels else {
                return Err(Error::InvalidArgument(
                    "four-qubit systems take one logical label".into(),
                ));
            };
            Ok(four_qubit_circuit(*label))
        }
        SystemSpec::TenQubit { .. } => {
            let [label_q0, label_q1] = labels else {
                return Err(Error::InvalidArgument(
                    "ten-qubit systems take two logical labels".into(),
                ));
            };
            let mut gates = ten_qubit_q0_circuit(*label_q0);
            gates.extend(
                ten_qubit_q1_circuit_local(*label_q1)
                    .iter()
                    .map(|g| shift_gate(g, 6)),
            );
            Ok(gates)
        }
    }
}

/// Code-basis state vectors in logical order (|0..0>, |0..1>, ...).
pub fn code_basis(spec: &SystemSpec) -> Vec<CVector> {
    match spec {
        SystemSpec::FourQubit { .. } | SystemSpec::TetradTorus { .. } => vec![
            model::four_qubit_logical_zero(),
            model::four_qubit_logical_one(),
        ],
        SystemSpec::TenQubit { .. } => {
            let q0 = [
                model::ten_qubit_q0_logical_zero(),
                model::ten_qubit_q0_logical_one(),
            ];
            let q1 = [
                model::ten_qubit_q1_logical_zero(),
                model::ten_qubit_q1_logical_one(),
            ];
            let mut out = Vec::with_capacity(4);
            for a in &q0 {
                for b in &q1 {
                    out.push(kron_states(a, b));
                }
            }
            out
        }
    }
}

/// Prepare the logical product state of the given labels.
pub fn prepare_logical(
    labels: &[LogicalLabel],
    spec: &SystemSpec,
    method: PrepMethod,
) -> Result<QuantumState> {
    let n = spec.n_qubits();
    if labels.len() != spec.n_logical() {
        return Err(Error::InvalidArgument(format!(
            "system takes {} logical labels, got {}",
            spec.n_logical(),
            labels.len()
        )));
    }
    match method {
        PrepMethod::CircuitReplay => {
            let mut st = QuantumState::zero_state(n);
            apply_circuit(&mut st, &initialization_circuit(labels, spec)?)?;
            Ok(st)
        }
        PrepMethod::ExplicitAmplitudes => {
            let v = match spec {
                SystemSpec::FourQubit { .. } | SystemSpec::TetradTorus { .. } => label_state(
                    &model::four_qubit_logical_zero(),
                    &model::four_qubit_logical_one(),
                    labels[0],
                ),
                SystemSpec::TenQubit { .. } => {
                    let a = label_state(
                        &model::ten_qubit_q0_logical_zero(),
                        &model::ten_qubit_q0_logical_one(),
                        labels[0],
                    );
                    let b = label_state(
                        &model::ten_qubit_q1_logical_zero(),
                        &model::ten_qubit_q1_logical_one(),
                        labels[1],
                    );
                    kron_states(&a, &b)
                }
            };
            QuantumState::from_amplitudes(n, v)
        }
    }
}

// ---------------------------------------------------------------------------
// Logical gate extraction
// ---------------------------------------------------------------------------

/// A logical unitary extracted from a braid, with its leakage.
#[derive(Debug, Clone)]
pub struct ExtractedGate {
    /// Polar-unitarized d x d logical action.
    pub unitary: CMatrix,
    /// Average population lost outside the code subspace (0 = none).
    pub leakage: f64,
}

/// Run the braid on the code basis frame and project back onto it.
pub fn extract_logical_gate(plan: &TrotterPlan, spec: &SystemSpec) -> Result<ExtractedGate> {
    let basis = code_basis(spec);
    let d = basis.len();
    let mut raw = CMatrix::zeros(d, d);
    for (col, b) in basis.iter().enumerate() {
        let mut st = QuantumState::from_amplitudes(spec.n_qubits(), b.clone())?;
        execute_braid(plan, &mut st)?;
        let amps = st.amplitudes().expect("braid output is pure");
        for (row, a) in basis.iter().enumerate() {
            raw[(row, col)] = a.dotc(amps);
        }
    }
    let retained: f64 = raw.iter().map(|c| c.norm_sqr()).sum::<f64>() / d as f64;
    let leakage = 1.0 - retained;
    if leakage > 0.5 {
        return Err(Error::ExcessiveLeakage(leakage));
    }
    Ok(ExtractedGate {
        unitary: polar_unitary(&raw),
        leakage,
    })
}

// ---------------------------------------------------------------------------
// Circuit export
// ---------------------------------------------------------------------------

/// Text formats for exported schedules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CircuitFormat {
    /// Line-based native format, e.g. `RXX q0 q3 0.785398163397`.
    Native,
    /// OpenQASM 2.0 with rzz/rxx/ryy (rxx/ryy defined in the header).
    Qasm2,
}

impl std::str::FromStr for CircuitFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<CircuitFormat> {
        match s.to_ascii_lowercase().as_str() {
            "native" => Ok(CircuitFormat::Native),
            "qasm" | "qasm2" | "openqasm" => Ok(CircuitFormat::Qasm2),
            _ => Err(Error::Parse(format!("unknown circuit format {s:?}"))),
        }
    }
}

fn rotation_name(a: Letter, b: Letter) -> Result<String> {
    let la = a.ch().to_ascii_lowercase();
    let lb = b.ch().to_ascii_lowercase();
    if la != lb {
        return Err(Error::InvalidArgument(format!(
            "mixed-axis rotation {la}{lb} has no scheduled-export form"
        )));
    }
    Ok(format!("r{la}{lb}"))
}

/// Emit the gate schedule as text. Angles carry 12 decimal digits.
pub fn export_circuit(plan: &TrotterPlan, format: CircuitFormat) -> Result<String> {
    let mut out = String::new();
    match format {
        CircuitFormat::Native => {
            out.push_str(&format!(
                "# braidlab schedule: arm={:?} delta_tilde={:.12} steps={}\n",
                plan.arm,
                plan.delta_tilde,
                plan.total_steps()
            ));
            out.push_str(&format!("qubits {}\n", plan.n_qubits));
            for gate in &plan.gate_schedule {
                match gate {
                    Gate::TwoPauliRotation {
                        axis_a,
                        axis_b,
                        qubit_a,
                        qubit_b,
                        angle,
                    } => {
                        out.push_str(&format!(
                            "{} q{} q{} {:.12}\n",
                            rotation_name(*axis_a, *axis_b)?.to_ascii_uppercase(),
                            qubit_a,
                            qubit_b,
                            angle
                        ));
                    }
                    _ => {
                        return Err(Error::InvalidArgument(
                            "braid schedules contain only two-Pauli rotations".into(),
                        ))
                    }
                }
            }
        }
        CircuitFormat::Qasm2 => {
            out.push_str("OPENQASM 2.0;\n");
            out.push_str("include \"qelib1.inc\";\n");
            out.push_str(
                "gate rxx(theta) a,b { h a; h b; cx a,b; rz(theta) b; cx a,b; h a; h b; }\n",
            );
            out.push_str("gate ryy(theta) a,b { rx(pi/2) a; rx(pi/2) b; cx a,b; rz(theta) b; cx a,b; rx(-pi/2) a; rx(-pi/2) b; }\n");
            out.push_str(&format!("qreg q[{}];\n", plan.n_qubits));
            for gate in &plan.gate_schedule {
                match gate {
                    Gate::TwoPauliRotation {
                        axis_a,
                        axis_b,
                        qubit_a,
                        qubit_b,
                        angle,
                    } => {
                        out.push_str(&format!(
                            "{}({:.12}) q[{}],q[{}];\n",
                            rotation_name(*axis_a, *axis_b)?,
                            angle,
                            qubit_a,
                            qubit_b
                        ));
                    }
                    _ => {
                        return Err(Error::InvalidArgument(
                            "braid schedules contain only two-Pauli rotations".into(),
                        ))
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Parse the native format back into a gate list (round-trip check support).
pub fn parse_native_circuit(text: &str) -> Result<(usize, Vec<Gate>)> {
    let mut n_qubits = None;
    let mut gates = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["qubits", n] => {
                n_qubits = Some(
                    n.parse::<usize>()
                        .map_err(|e| Error::Parse(format!("bad qubit count: {e}")))?,
                );
            }
            [name, qa, qb, angle] => {
                let axis = match *name {
                    "RXX" => Letter::X,
                    "RYY" => Letter::Y,
                    "RZZ" => Letter::Z,
                    _ => return Err(Error::Parse(format!("unknown gate {name:?}"))),
                };
                let parse_q = |s: &str| -> Result<usize> {
                    s.strip_prefix('q')
                        .ok_or_else(|| Error::Parse(format!("bad qubit token {s:?}")))?
                        .parse::<usize>()
                        .map_err(|e| Error::Parse(format!("bad qubit token {s:?}: {e}")))
                };
                gates.push(Gate::TwoPauliRotation {
                    axis_a: axis,
                    axis_b: axis,
                    qubit_a: parse_q(qa)?,
                    qubit_b: parse_q(qb)?,
                    angle: angle
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad angle {angle:?}: {e}")))?,
                });
            }
            _ => return Err(Error::Parse(format!("bad line {line:?}"))),
        }
    }
    Ok((
        n_qubits.ok_or_else(|| Error::Parse("missing qubits line".into()))?,
        gates,
    ))
}
