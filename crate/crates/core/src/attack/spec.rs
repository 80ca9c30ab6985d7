use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{QssError, Result};
use crate::qmath::{c, CVector, STRUCT_TOL, ZERO};
use crate::qstate::{Register, StateVector};

/// Post-interaction global state `Σ a_ij |ij>_AB |ε_ij>_CE`.
///
/// Coefficients and ancilla kets are stored row-major: index `2*i + j` holds
/// the term for Alice bit `i`, Bob bit `j`. Each `ε_ij` lives on `C ⊗ E` and has
/// dimension `2 * ancilla_dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackSpec {
    ancilla_dim: usize,
    a: [crate::qmath::Amplitude; 4],
    eps: [CVector; 4],
}

impl AttackSpec {
    pub fn new(ancilla_dim: usize, a: [crate::qmath::Amplitude; 4], eps: [CVector; 4]) -> Result<Self> {
        if ancilla_dim == 0 {
            return Err(QssError::InvalidSpec("ancilla dimension must be positive".into()));
        }
        if 8 * ancilla_dim > crate::qmath::MAX_DIM {
            return Err(QssError::InvalidSpec(format!(
                "ancilla dimension {ancilla_dim} makes the joint state exceed {} amplitudes",
                crate::qmath::MAX_DIM
            )));
        }
        for (k, e) in eps.iter().enumerate() {
            if e.dim() != 2 * ancilla_dim {
                return Err(QssError::InvalidSpec(format!(
                    "eps_{}{} has dimension {} but C⊗E has {}",
                    k / 2,
                    k % 2,
                    e.dim(),
                    2 * ancilla_dim
                )));
            }
            let n = e.norm_sqr();
            if (n - 1.0).abs() > STRUCT_TOL {
                return Err(QssError::InvalidSpec(format!(
                    "eps_{}{} is not normalized (norm^2 = {n:.12})",
                    k / 2,
                    k % 2
                )));
            }
        }
        if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QssError::InvalidSpec("non-finite coefficient".into()));
        }
        let total: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        if (total - 1.0).abs() > STRUCT_TOL {
            return Err(QssError::InvalidSpec(format!(
                "coefficients are not normalized (sum |a_ij|^2 = {total:.12})"
            )));
        }
        Ok(Self { ancilla_dim, a, eps })
    }

    /// Builds a spec from the combined vectors `a_ij |ε_ij>`. Each coefficient
    /// becomes the (real) norm of its vector; a zero vector gets `|0>` as its
    /// ancilla ket.
    pub fn from_weighted(ancilla_dim: usize, weighted: [CVector; 4]) -> Result<Self> {
        let mut a = [ZERO; 4];
        let mut kets: Vec<CVector> = Vec::with_capacity(4);
        for (k, w) in weighted.iter().enumerate() {
            let n = w.norm();
            a[k] = c(n, 0.0);
            kets.push(w.normalized().unwrap_or_else(|| CVector::basis(w.dim(), 0)));
        }
        let kets: [CVector; 4] = kets.try_into().expect("four kets");
        Self::new(ancilla_dim, a, kets)
    }

    /// No interaction: `GHZ ⊗ |0>_E` with a one-dimensional ancilla.
    pub fn honest() -> Self {
        let h = c(FRAC_1_SQRT_2, 0.0);
        Self::new(
            1,
            [h, ZERO, ZERO, h],
            [
                CVector::basis(2, 0),
                CVector::basis(2, 0),
                CVector::basis(2, 1),
                CVector::basis(2, 1),
            ],
        )
        .expect("honest spec is valid")
    }

    /// The two-ancilla-qubit strategy of Karlsson, Koashi and Imoto:
    /// `½|000>, -½|001>, ½|110>, -½|111>` on `C E1 E2`.
    pub fn kki() -> Self {
        let half = c(0.5, 0.0);
        Self::new(
            4,
            [half, -half, half, -half],
            [
                CVector::basis(8, 0b000),
                CVector::basis(8, 0b001),
                CVector::basis(8, 0b110),
                CVector::basis(8, 0b111),
            ],
        )
        .expect("KKI spec is valid")
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    /// Dimension of `C ⊗ E`.
    pub fn ce_dim(&self) -> usize {
        2 * self.ancilla_dim
    }

    pub fn a(&self, i: usize, j: usize) -> crate::qmath::Amplitude {
        self.a[2 * i + j]
    }

    pub fn eps(&self, i: usize, j: usize) -> &CVector {
        &self.eps[2 * i + j]
    }

    pub fn coefficients(&self) -> &[crate::qmath::Amplitude; 4] {
        &self.a
    }

    pub fn ancilla_kets(&self) -> &[CVector; 4] {
        &self.eps
    }

    /// `a_ij |ε_ij>`.
    pub fn weighted(&self, i: usize, j: usize) -> CVector {
        self.eps(i, j).scale(self.a(i, j))
    }

    /// Register layout of the global state: `A, B, C, E`.
    pub fn registers(&self) -> Vec<Register> {
        vec![
            Register::qubit("A"),
            Register::qubit("B"),
            Register::qubit("C"),
            Register::new("E", self.ancilla_dim),
        ]
    }

    pub fn to_file(&self) -> AttackSpecFile {
        AttackSpecFile {
            ancilla_dim: self.ancilla_dim,
            a: self.a.iter().map(|z| [z.re, z.im]).collect(),
            eps: self
                .eps
                .iter()
                .map(|e| e.as_slice().iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: AttackSpecFile = serde_json::from_str(text)
            .map_err(|e| QssError::InvalidSpec(format!("schema error: {e}")))?;
        file.try_into()
    }

    pub fn to_json(&self) -> Result<String> {
        crate::output::to_json(&self.to_file())
    }
}

/// On-disk form: `{ "ancilla_dim": d, "a": [[re, im] x4], "eps": [[[re, im] x 2d] x4] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackSpecFile {
    pub ancilla_dim: usize,
    pub a: Vec<[f64; 2]>,
    pub eps: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<AttackSpecFile> for AttackSpec {
    type Error = QssError;

    fn try_from(file: AttackSpecFile) -> Result<Self> {
        if file.a.len() != 4 {
            return Err(QssError::InvalidSpec(format!(
                "\"a\" must hold 4 coefficients, found {}",
                file.a.len()
            )));
        }
        if file.eps.len() != 4 {
            return Err(QssError::InvalidSpec(format!(
                "\"eps\" must hold 4 vectors, found {}",
                file.eps.len()
            )));
        }
        let a: Vec<_> = file.a.iter().map(|&[re, im]| c(re, im)).collect();
        let mut eps = Vec::with_capacity(4);
        for e in &file.eps {
            if e.is_empty() {
                return Err(QssError::InvalidSpec("empty eps vector".into()));
            }
            eps.push(CVector::new(e.iter().map(|&[re, im]| c(re, im)).collect())?);
        }
        Self::new(
            file.ancilla_dim,
            a.try_into().expect("four coefficients"),
            eps.try_into().expect("four vectors"),
        )
    }
}

/// `|Ψ> = Σ a_ij |i>_A |j>_B |ε_ij>_CE`.
pub fn global_state(spec: &AttackSpec) -> Result<StateVector> {
    let ce = spec.ce_dim();
    let mut amps = CVector::zeros(4 * ce);
    for i in 0..2 {
        for j in 0..2 {
            let w = spec.weighted(i, j);
            for k in 0..ce {
                amps[(2 * i + j) * ce + k] = w[k];
            }
        }
    }
    StateVector::new(amps, spec.registers())
}
