/// ħc in J·m (CODATA).
pub const HBAR_C: f64 = 3.161_526_77e-26;
