//! Labeled multi-register pure states, the protocol's measuring bases, the
//! gate set, and Born-rule measurement.
//!
//! Registers are ordered most-significant first; the protocol convention is
//! `A, B, C, E`. Ket phase conventions are `|x±> = (|0> ± |1>)/√2` and
//! `|y±> = (|0> ± i|1>)/√2`; these are the conventions under which the GHZ
//! state reproduces the protocol's correlation table.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QssError, Result};
use crate::qmath::{self, c, inner, CMatrix, CVector, I, ONE, STRUCT_TOL, ZERO};

/// Probability below which a projected branch is treated as impossible.
pub const BRANCH_EPS: f64 = 1e-12;

/// A protocol measuring basis. Only these two may be announced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
}

impl Basis {
    pub const ALL: [Basis; 2] = [Basis::X, Basis::Y];

    pub fn letter(self) -> char {
        match self {
            Basis::X => 'x',
            Basis::Y => 'y',
        }
    }
}

/// A single-qubit measurement axis; `Z` is computational-basis readout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl From<Basis> for Axis {
    fn from(b: Basis) -> Self {
        match b {
            Basis::X => Axis::X,
            Basis::Y => Axis::Y,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const ALL: [Sign; 2] = [Sign::Plus, Sign::Minus];

    /// `Plus` is bit 0 (the `|0>`, `|x+>`, `|y+>` outcome).
    pub fn bit(self) -> u8 {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    pub fn from_bit(bit: u8) -> Self {
        if bit == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// A measurement result, always paired with the basis it was obtained in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Outcome {
    pub basis: Basis,
    pub sign: Sign,
}

impl Outcome {
    pub fn new(basis: Basis, sign: Sign) -> Self {
        Self { basis, sign }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.basis.letter(), self.sign.symbol())
    }
}

/// `(|b+>, |b->)` for the given axis.
pub fn basis_kets(axis: impl Into<Axis>) -> (CVector, CVector) {
    let h = c(FRAC_1_SQRT_2, 0.0);
    let (plus, minus) = match axis.into() {
        Axis::Z => (vec![ONE, ZERO], vec![ZERO, ONE]),
        Axis::X => (vec![h, h], vec![h, -h]),
        Axis::Y => (vec![h, I * h], vec![h, -I * h]),
    };
    (
        CVector::new(plus).expect("finite"),
        CVector::new(minus).expect("finite"),
    )
}

pub fn outcome_ket(outcome: Outcome) -> CVector {
    let (plus, minus) = basis_kets(outcome.basis);
    match outcome.sign {
        Sign::Plus => plus,
        Sign::Minus => minus,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    S,
    /// The matrix product `S·H`, which maps `|0>` to `|y+>`.
    SH,
    Cnot,
    Identity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub matrix: CMatrix,
}

impl Gate {
    pub fn h() -> Self {
        let h = c(FRAC_1_SQRT_2, 0.0);
        Self {
            kind: GateKind::H,
            matrix: CMatrix::from_rows(&[vec![h, h], vec![h, -h]]).expect("2x2"),
        }
    }

    pub fn s() -> Self {
        Self {
            kind: GateKind::S,
            matrix: CMatrix::diag(&[ONE, I]),
        }
    }

    pub fn sh() -> Self {
        Self::sh_from(&Self::s().matrix)
    }

    /// `S·H` built from a caller-supplied `S`; used for fault injection.
    pub fn sh_from(s: &CMatrix) -> Self {
        Self {
            kind: GateKind::SH,
            matrix: qmath::matmul(s, &Self::h().matrix).expect("2x2"),
        }
    }

    /// Control is the first target, target the second.
    pub fn cnot() -> Self {
        Self {
            kind: GateKind::Cnot,
            matrix: CMatrix::from_real_rows(&[
                &[1.0, 0.0, 0.0, 0.0],
                &[0.0, 1.0, 0.0, 0.0],
                &[0.0, 0.0, 0.0, 1.0],
                &[0.0, 0.0, 1.0, 0.0],
            ])
            .expect("4x4"),
        }
    }

    pub fn identity() -> Self {
        Self {
            kind: GateKind::Identity,
            matrix: CMatrix::identity(2),
        }
    }

    pub fn arity(&self) -> usize {
        match self.kind {
            GateKind::Cnot => 2,
            _ => 1,
        }
    }

    pub fn adjoint(&self) -> CMatrix {
        qmath::adjoint(&self.matrix)
    }
}

/// A named tensor factor of a state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub label: String,
    pub dim: usize,
}

impl Register {
    pub fn new(label: impl Into<String>, dim: usize) -> Self {
        Self {
            label: label.into(),
            dim,
        }
    }

    pub fn qubit(label: impl Into<String>) -> Self {
        Self::new(label, 2)
    }
}

/// A normalized pure state over labeled registers.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: CVector,
    registers: Vec<Register>,
}

impl StateVector {
    pub fn new(amps: CVector, registers: Vec<Register>) -> Result<Self> {
        let state = Self::unchecked(amps, registers)?;
        let norm_sqr = state.amps.norm_sqr();
        if (norm_sqr - 1.0).abs() > STRUCT_TOL {
            return Err(QssError::NotNormalized { norm_sqr });
        }
        Ok(state)
    }

    fn unchecked(amps: CVector, registers: Vec<Register>) -> Result<Self> {
        let total: usize = registers.iter().map(|r| r.dim).product();
        if registers.is_empty() || registers.iter().any(|r| r.dim == 0) || total != amps.dim() {
            return Err(QssError::Shape(format!(
                "registers {:?} do not match amplitude dimension {}",
                registers.iter().map(|r| (&r.label, r.dim)).collect::<Vec<_>>(),
                amps.dim()
            )));
        }
        for (i, r) in registers.iter().enumerate() {
            if registers[..i].iter().any(|o| o.label == r.label) {
                return Err(QssError::Shape(format!("duplicate register label {}", r.label)));
            }
        }
        Ok(Self { amps, registers })
    }

    /// Computational basis state `|0...0>` over the given registers.
    pub fn zero(registers: Vec<Register>) -> Result<Self> {
        let total: usize = registers.iter().map(|r| r.dim).product();
        Self::new(CVector::basis(total.max(1), 0), registers)
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn dims(&self) -> Vec<usize> {
        self.registers.iter().map(|r| r.dim).collect()
    }

    pub fn register_index(&self, label: &str) -> Result<usize> {
        self.registers
            .iter()
            .position(|r| r.label == label)
            .ok_or_else(|| QssError::BadTarget(format!("no register named {label}")))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.norm_sqr()
    }

    /// `self ⊗ |0>` with a new register appended.
    pub fn with_register(&self, register: Register) -> Result<Self> {
        let zero = CVector::basis(register.dim, 0);
        let amps = qmath::tensor(&self.amps, &zero)?;
        let mut registers = self.registers.clone();
        registers.push(register);
        Self::unchecked(amps, registers)
    }

    /// Phase-invariant distance to another state over the same registers.
    pub fn phase_distance(&self, other: &Self) -> Result<f64> {
        if self.dims() != other.dims() {
            return Err(QssError::Shape("register layouts differ".into()));
        }
        self.amps.phase_distance(&other.amps)
    }

    fn resolve_targets(&self, targets: &[&str]) -> Result<Vec<usize>> {
        let mut idx = Vec::with_capacity(targets.len());
        for t in targets {
            let i = self.register_index(t)?;
            if idx.contains(&i) {
                return Err(QssError::BadTarget(format!("register {t} addressed twice")));
            }
            idx.push(i);
        }
        if idx.is_empty() {
            return Err(QssError::BadTarget("no targets given".into()));
        }
        Ok(idx)
    }

    /// Applies `op` to the listed registers (first listed is most significant
    /// within `op`). Works for any operator, unitary or not.
    pub fn apply_operator(&self, op: &CMatrix, targets: &[&str]) -> Result<CVector> {
        let idx = self.resolve_targets(targets)?;
        let dims = self.dims();
        let sub_dim: usize = idx.iter().map(|&i| dims[i]).product();
        if !op.is_square() || op.rows() != sub_dim {
            return Err(QssError::Shape(format!(
                "operator is {}x{} but targets {:?} span dimension {}",
                op.rows(),
                op.cols(),
                targets,
                sub_dim
            )));
        }
        let strides = strides(&dims);
        // Offset contributed by each sub-index of the targeted factors.
        let sub_offsets: Vec<usize> = (0..sub_dim)
            .map(|s| {
                let mut rem = s;
                let mut off = 0;
                for &f in idx.iter().rev() {
                    off += (rem % dims[f]) * strides[f];
                    rem /= dims[f];
                }
                off
            })
            .collect();
        let total = self.amps.dim();
        let mut out = CVector::zeros(total);
        let mut gathered = vec![ZERO; sub_dim];
        for base in 0..total {
            // Visit each block once via its all-zero target digits.
            if idx.iter().any(|&f| (base / strides[f]) % dims[f] != 0) {
                continue;
            }
            for (s, &off) in sub_offsets.iter().enumerate() {
                gathered[s] = self.amps[base + off];
            }
            for (r, &off) in sub_offsets.iter().enumerate() {
                let mut acc = ZERO;
                for (s, g) in gathered.iter().enumerate() {
                    acc += op[(r, s)] * g;
                }
                out[base + off] = acc;
            }
        }
        Ok(out)
    }

    /// Applies a unitary to the listed registers.
    pub fn apply_unitary(&self, u: &CMatrix, targets: &[&str]) -> Result<Self> {
        let dev = u.unitary_deviation();
        if dev > STRUCT_TOL {
            return Err(QssError::InvalidArgument(format!(
                "operator is not unitary (deviation {dev:.3e})"
            )));
        }
        let amps = self.apply_operator(u, targets)?;
        Self::unchecked(amps, self.registers.clone())
    }

    /// Contracts register `label` with `<onto|`, removing that register.
    /// Returns the unnormalized branch.
    pub fn contract(&self, label: &str, onto: &CVector) -> Result<(CVector, Vec<Register>)> {
        let f = self.register_index(label)?;
        let dims = self.dims();
        if onto.dim() != dims[f] {
            return Err(QssError::Shape(format!(
                "projection ket has dimension {} but register {label} has {}",
                onto.dim(),
                dims[f]
            )));
        }
        let mut registers = self.registers.clone();
        registers.remove(f);
        if registers.is_empty() {
            return Err(QssError::BadTarget("cannot project out the only register".into()));
        }
        let outer: usize = dims[..f].iter().product();
        let inner_dim: usize = dims[f + 1..].iter().product();
        let mut out = CVector::zeros(outer * inner_dim);
        for o in 0..outer {
            for k in 0..dims[f] {
                let w = onto[k].conj();
                if w == ZERO {
                    continue;
                }
                for i in 0..inner_dim {
                    out[o * inner_dim + i] += w * self.amps[(o * dims[f] + k) * inner_dim + i];
                }
            }
        }
        Ok((out, registers))
    }

    /// Resets the state's amplitudes keeping the register layout; used when a
    /// non-unitary step (projection) is followed by renormalization.
    fn with_amplitudes(&self, amps: CVector) -> Result<Self> {
        Self::new(amps, self.registers.clone())
    }
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// `(|000> + |111>)/√2` over registers `A, B, C`.
pub fn ghz_state() -> StateVector {
    let mut amps = CVector::zeros(8);
    amps[0] = c(FRAC_1_SQRT_2, 0.0);
    amps[7] = c(FRAC_1_SQRT_2, 0.0);
    StateVector::new(
        amps,
        vec![Register::qubit("A"), Register::qubit("B"), Register::qubit("C")],
    )
    .expect("GHZ state is normalized")
}

/// Applies a gate; for two-qubit gates `targets = [control, target]`.
pub fn apply_gate(state: &StateVector, gate: &Gate, targets: &[&str]) -> Result<StateVector> {
    if targets.len() != gate.arity() {
        return Err(QssError::BadTarget(format!(
            "{:?} takes {} target(s), got {}",
            gate.kind,
            gate.arity(),
            targets.len()
        )));
    }
    for t in targets {
        let i = state.register_index(t)?;
        if state.registers[i].dim != 2 {
            return Err(QssError::BadTarget(format!("register {t} is not a qubit")));
        }
    }
    state.apply_unitary(&gate.matrix, targets)
}

/// A projected branch: its probability and, if possible, the normalized
/// conditional state of the remaining registers.
#[derive(Debug, Clone)]
pub struct Projection {
    pub probability: f64,
    pub state: Option<StateVector>,
}

/// Projects `qubit` onto `onto` and returns the branch over the remaining
/// registers. The conditional state is `None` when the branch probability is
/// at most `1e-12`.
pub fn project_qubit(state: &StateVector, qubit: &str, onto: &CVector) -> Result<Projection> {
    if (onto.norm_sqr() - 1.0).abs() > STRUCT_TOL {
        return Err(QssError::NotNormalized {
            norm_sqr: onto.norm_sqr(),
        });
    }
    let (branch, registers) = state.contract(qubit, onto)?;
    let probability = branch.norm_sqr();
    let conditional = if probability > BRANCH_EPS {
        let amps = branch.normalized().expect("nonzero branch");
        Some(StateVector::new(amps, registers)?)
    } else {
        None
    };
    Ok(Projection {
        probability,
        state: conditional,
    })
}

/// Born-rule measurement of one qubit along `axis`. The returned state keeps
/// the measured register, collapsed onto the observed eigenket.
pub fn measure_qubit<R: Rng + ?Sized>(
    state: &StateVector,
    qubit: &str,
    axis: impl Into<Axis>,
    rng: &mut R,
) -> Result<(Sign, StateVector)> {
    let norm_sqr = state.norm_sqr();
    if (norm_sqr - 1.0).abs() > STRUCT_TOL {
        return Err(QssError::NotNormalized { norm_sqr });
    }
    let f = state.register_index(qubit)?;
    if state.registers[f].dim != 2 {
        return Err(QssError::BadTarget(format!("register {qubit} is not a qubit")));
    }
    let (plus, minus) = basis_kets(axis);
    let p_plus = state.apply_operator(&plus.projector(), &[qubit])?.norm_sqr();
    let u: f64 = rng.random();
    let sign = if p_plus <= BRANCH_EPS {
        Sign::Minus
    } else if p_plus >= 1.0 - BRANCH_EPS {
        Sign::Plus
    } else if u < p_plus {
        Sign::Plus
    } else {
        Sign::Minus
    };
    let ket = if sign == Sign::Plus { plus } else { minus };
    let collapsed = state.apply_operator(&ket.projector(), &[qubit])?;
    let amps = collapsed.normalized().ok_or_else(|| {
        QssError::Inconsistent("selected a zero-probability measurement branch".into())
    })?;
    Ok((sign, state.with_amplitudes(amps)?))
}

/// Two-outcome projective measurement `{P, 1 - P}` on the listed registers.
/// Returns `true` for the `P` outcome together with the collapsed state.
pub fn measure_projector<R: Rng + ?Sized>(
    state: &StateVector,
    projector: &CMatrix,
    targets: &[&str],
    rng: &mut R,
) -> Result<(bool, StateVector)> {
    let dev = projector.hermitian_deviation();
    if dev > STRUCT_TOL {
        return Err(QssError::NotHermitian { deviation: dev });
    }
    let inside = state.apply_operator(projector, targets)?;
    let p_in = inside.norm_sqr();
    let u: f64 = rng.random();
    let hit = if p_in <= BRANCH_EPS {
        false
    } else if p_in >= 1.0 - BRANCH_EPS {
        true
    } else {
        u < p_in
    };
    let branch = if hit {
        inside
    } else {
        state.amplitudes().sub(&inside)?
    };
    let amps = branch.normalized().ok_or_else(|| {
        QssError::Inconsistent("selected a zero-probability measurement branch".into())
    })?;
    Ok((hit, state.with_amplitudes(amps)?))
}

/// Probability of each computational-basis outcome of the whole state.
pub fn z_distribution(state: &StateVector) -> Vec<f64> {
    state.amplitudes().as_slice().iter().map(|z| z.norm_sqr()).collect()
}

/// Overlap magnitude `|<u|v>|` of two states with the same layout.
pub fn fidelity_amplitude(u: &StateVector, v: &StateVector) -> Result<f64> {
    Ok(inner(u.amplitudes(), v.amplitudes())?.norm())
}
