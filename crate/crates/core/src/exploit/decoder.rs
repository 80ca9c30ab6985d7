use rand::Rng;

use crate::error::{QssError, Result};
use crate::qmath::{apply, matmul, tensor, CMatrix, CVector};
use crate::qstate::Gate;

use super::{CaseId, DecoderConfig};

/// Bit assigned to each `C E` computational outcome, indexed by `2c + e`.
pub type OutcomeTable = [u8; 4];

const DETECTION_TABLES: [OutcomeTable; 4] = [
    // Cases I and III: 10, 01 -> 0; 00, 11 -> 1.
    [1, 0, 0, 1],
    // Cases II and IV: 10, 11 -> 0; 00, 01 -> 1.
    [1, 1, 0, 0],
    [1, 0, 0, 1],
    [1, 1, 0, 0],
];

const INFO_TABLES: [OutcomeTable; 4] = [
    // Cases I and II: 00, 11 -> 0; 10, 01 -> 1.
    [0, 1, 1, 0],
    [0, 1, 1, 0],
    // Cases III and IV: the reverse.
    [1, 0, 0, 1],
    [1, 0, 0, 1],
];

/// Charlie's readout circuits and lookup tables. Every component can be
/// replaced, which is how the verification suite injects faults.
#[derive(Debug, Clone, PartialEq)]
pub struct Decoder {
    h: Gate,
    sh: Gate,
    cnot: Gate,
    detection: [OutcomeTable; 4],
    info: [OutcomeTable; 4],
}

impl Default for Decoder {
    fn default() -> Self {
        Self::standard()
    }
}

impl Decoder {
    pub fn standard() -> Self {
        Self {
            h: Gate::h(),
            sh: Gate::sh(),
            cnot: Gate::cnot(),
            detection: DETECTION_TABLES,
            info: INFO_TABLES,
        }
    }

    /// Rebuilds `SH` from the given `S` matrix.
    pub fn with_s_matrix(mut self, s: &CMatrix) -> Self {
        self.sh = Gate::sh_from(s);
        self
    }

    pub fn with_detection_table(mut self, case: CaseId, table: OutcomeTable) -> Self {
        self.detection[case.index()] = table;
        self
    }

    pub fn with_info_table(mut self, case: CaseId, table: OutcomeTable) -> Self {
        self.info[case.index()] = table;
        self
    }

    pub fn config(&self, case: CaseId) -> DecoderConfig {
        DecoderConfig::with_gates(case, &self.h, &self.sh)
    }

    pub fn detection_table(&self, case: CaseId) -> OutcomeTable {
        self.detection[case.index()]
    }

    pub fn info_table(&self, case: CaseId) -> OutcomeTable {
        self.info[case.index()]
    }

    /// The `C E` state just before readout on a detection round: CNOT with
    /// control C and target E, then `W†` on C.
    pub fn detection_circuit(&self, phi: &CVector, case: CaseId) -> Result<CVector> {
        check_input(phi)?;
        let w = tensor(&self.config(case).w.adjoint(), &CMatrix::identity(2))?;
        apply(&matmul(&w, &self.cnot.matrix)?, phi)
    }

    /// The `C E` state just before readout on a key round: `U†` on C.
    pub fn info_circuit(&self, phi: &CVector, case: CaseId) -> Result<CVector> {
        check_input(phi)?;
        let u = tensor(&self.config(case).u.adjoint(), &CMatrix::identity(2))?;
        apply(&u, phi)
    }

    /// Probability of announcing 0 and 1.
    pub fn announcement_distribution(&self, phi: &CVector, case: CaseId) -> Result<[f64; 2]> {
        let out = self.detection_circuit(phi, case)?;
        Ok(bit_distribution(&out, &self.detection[case.index()]))
    }

    /// Probability of guessing secret 0 and 1.
    pub fn secret_distribution(&self, phi: &CVector, case: CaseId) -> Result<[f64; 2]> {
        let out = self.info_circuit(phi, case)?;
        Ok(bit_distribution(&out, &self.info[case.index()]))
    }

    pub fn detection_decode<R: Rng + ?Sized>(
        &self,
        phi: &CVector,
        case: CaseId,
        rng: &mut R,
    ) -> Result<u8> {
        let out = self.detection_circuit(phi, case)?;
        Ok(self.detection[case.index()][sample_outcome(&out, rng)])
    }

    pub fn info_decode<R: Rng + ?Sized>(
        &self,
        phi: &CVector,
        case: CaseId,
        rng: &mut R,
    ) -> Result<u8> {
        let out = self.info_circuit(phi, case)?;
        Ok(self.info[case.index()][sample_outcome(&out, rng)])
    }

    pub(crate) fn cnot(&self) -> &Gate {
        &self.cnot
    }
}

fn check_input(phi: &CVector) -> Result<()> {
    if phi.dim() != 4 {
        return Err(QssError::Shape(format!(
            "decoder acts on two qubits, got dimension {}",
            phi.dim()
        )));
    }
    if phi.norm_sqr() == 0.0 {
        return Err(QssError::NotNormalized { norm_sqr: 0.0 });
    }
    Ok(())
}

fn bit_distribution(state: &CVector, table: &OutcomeTable) -> [f64; 2] {
    let total = state.norm_sqr();
    let mut p = [0.0; 2];
    for (k, z) in state.as_slice().iter().enumerate() {
        p[table[k] as usize] += z.norm_sqr() / total;
    }
    p
}

fn sample_outcome<R: Rng + ?Sized>(state: &CVector, rng: &mut R) -> usize {
    let total = state.norm_sqr();
    let u: f64 = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (k, z) in state.as_slice().iter().enumerate() {
        let p = z.norm_sqr();
        if p > 0.0 {
            last = k;
        }
        acc += p;
        if u < acc {
            return k;
        }
    }
    last
}

/// Sampled announcement bit with the standard decoder.
pub fn detection_decode<R: Rng + ?Sized>(phi: &CVector, case: CaseId, rng: &mut R) -> Result<u8> {
    Decoder::standard().detection_decode(phi, case, rng)
}

/// Sampled secret bit with the standard decoder.
pub fn info_decode<R: Rng + ?Sized>(phi: &CVector, case: CaseId, rng: &mut R) -> Result<u8> {
    Decoder::standard().info_decode(phi, case, rng)
}
