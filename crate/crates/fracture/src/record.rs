//! Per-step summary shared by both solvers and by the CSV writer.

/// One load/optimization step. Energies in N·mm, lengths in mm.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    /// applied load magnitude (mm of imposed displacement)
    pub load: f64,
    pub e_bulk: f64,
    pub e_frac: f64,
    pub e_total: f64,
    /// regularized crack surface of the damage field (phase-field only)
    pub gamma: Option<f64>,
    /// staggered iterations used (phase-field only)
    pub stagger_iters: Option<usize>,
    /// objective value J (shape optimization only)
    pub objective: Option<f64>,
    /// counted crack length (shape optimization only)
    pub crack_length: Option<f64>,
    /// nodes zeroed by the irreversibility projection (shape opt only)
    pub projected: Option<usize>,
}

impl StepRecord {
    pub fn new(step: usize, load: f64, e_bulk: f64, e_frac: f64) -> Self {
        StepRecord {
            step,
            load,
            e_bulk,
            e_frac,
            e_total: e_bulk + e_frac,
            gamma: None,
            stagger_iters: None,
            objective: None,
            crack_length: None,
            projected: None,
        }
    }
}
