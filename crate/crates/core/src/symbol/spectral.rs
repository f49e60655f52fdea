use crate::error::{LevyError, Result};

/// Finite measure on the unit sphere of R^d, d ∈ {1, 2}.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralMeasure {
    Atoms { dim: usize, atoms: Vec<Atom> },
    Uniform { dim: usize, mass: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub direction: [f64; 2],
    pub weight: f64,
}

impl SpectralMeasure {
    pub fn atoms(dim: usize, atoms: Vec<Atom>) -> Result<Self> {
        let m = SpectralMeasure::Atoms { dim, atoms };
        m.validate()?;
        Ok(m)
    }

    pub fn uniform(dim: usize, mass: f64) -> Result<Self> {
        let m = SpectralMeasure::Uniform { dim, mass };
        m.validate()?;
        Ok(m)
    }

    /// Symmetric atoms `±e₁, ±e₂, ...` with a common weight.
    pub fn symmetric_axes(dim: usize, weight: f64) -> Result<Self> {
        let mut atoms = Vec::new();
        for k in 0..dim {
            for sign in [1.0, -1.0] {
                let mut direction = [0.0; 2];
                direction[k] = sign;
                atoms.push(Atom { direction, weight });
            }
        }
        Self::atoms(dim, atoms)
    }

    pub fn dim(&self) -> usize {
        match self {
            SpectralMeasure::Atoms { dim, .. } | SpectralMeasure::Uniform { dim, .. } => *dim,
        }
    }

    pub fn total_mass(&self) -> f64 {
        match self {
            SpectralMeasure::Atoms { atoms, .. } => atoms.iter().map(|a| a.weight).sum(),
            SpectralMeasure::Uniform { mass, .. } => *mass,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        if dim != 1 && dim != 2 {
            return Err(LevyError::InvalidModel(format!("spectral dimension {dim} is not 1 or 2")));
        }
        match self {
            SpectralMeasure::Uniform { mass, .. } => {
                if !(mass.is_finite() && *mass > 0.0) {
                    return Err(LevyError::InvalidModel(format!("uniform spectral mass {mass} must be positive")));
                }
            }
            SpectralMeasure::Atoms { atoms, .. } => {
                if atoms.is_empty() {
                    return Err(LevyError::InvalidModel("spectral measure has no atoms".into()));
                }
                for (i, a) in atoms.iter().enumerate() {
                    if dim == 1 && a.direction[1] != 0.0 {
                        return Err(LevyError::InvalidModel(format!("atom {i} has a second component in d=1")));
                    }
                    let norm = a.direction[0].hypot(a.direction[1]);
                    if (norm - 1.0).abs() > 1e-12 {
                        return Err(LevyError::InvalidModel(format!(
                            "atom {i} direction has norm {norm}, expected 1"
                        )));
                    }
                    if !(a.weight.is_finite() && a.weight > 0.0) {
                        return Err(LevyError::InvalidModel(format!("atom {i} weight {} must be positive", a.weight)));
                    }
                }
                let smin = self.smallest_singular_value();
                if smin <= 1e-9 {
                    return Err(LevyError::InvalidModel(format!(
                        "spectral directions do not span R^{dim} (smallest singular value {smin:e})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Smallest singular value of the matrix whose rows are the atom
    /// directions (unweighted).
    pub fn smallest_singular_value(&self) -> f64 {
        match self {
            SpectralMeasure::Uniform { .. } => 1.0,
            SpectralMeasure::Atoms { dim: 1, atoms } => {
                atoms.iter().map(|a| a.direction[0] * a.direction[0]).sum::<f64>().sqrt()
            }
            SpectralMeasure::Atoms { atoms, .. } => {
                // Eigenvalues of the 2×2 Gram matrix DᵀD.
                let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
                for at in atoms {
                    let [x, y] = at.direction;
                    a += x * x;
                    b += x * y;
                    c += y * y;
                }
                let half_tr = 0.5 * (a + c);
                let disc = (0.25 * (a - c) * (a - c) + b * b).sqrt();
                (half_tr - disc).max(0.0).sqrt()
            }
        }
    }

    /// True when μ(A) = μ(−A); then the symbol is real.
    pub fn is_symmetric(&self) -> bool {
        match self {
            SpectralMeasure::Uniform { .. } => true,
            SpectralMeasure::Atoms { atoms, .. } => atoms.iter().all(|a| {
                let mirror = atoms
                    .iter()
                    .filter(|b| {
                        (b.direction[0] + a.direction[0]).abs() < 1e-12
                            && (b.direction[1] + a.direction[1]).abs() < 1e-12
                    })
                    .map(|b| b.weight)
                    .sum::<f64>();
                let same = atoms
                    .iter()
                    .filter(|b| {
                        (b.direction[0] - a.direction[0]).abs() < 1e-12
                            && (b.direction[1] - a.direction[1]).abs() < 1e-12
                    })
                    .map(|b| b.weight)
                    .sum::<f64>();
                (mirror - same).abs() <= 1e-12 * same.max(1.0)
            }),
        }
    }

    /// Atom list, with the uniform measure in d=1 expanded to ±1.
    pub fn discrete(&self) -> Option<Vec<Atom>> {
        match self {
            SpectralMeasure::Atoms { atoms, .. } => Some(atoms.clone()),
            SpectralMeasure::Uniform { dim: 1, mass } => Some(vec![
                Atom { direction: [1.0, 0.0], weight: mass / 2.0 },
                Atom { direction: [-1.0, 0.0], weight: mass / 2.0 },
            ]),
            SpectralMeasure::Uniform { .. } => None,
        }
    }

    /// `∫ θθᵀ μ(dθ)` as `[xx, xy, yy]`.
    pub fn second_moment(&self) -> [f64; 3] {
        match self.discrete() {
            Some(atoms) => {
                let mut m = [0.0; 3];
                for a in atoms {
                    let [x, y] = a.direction;
                    m[0] += a.weight * x * x;
                    m[1] += a.weight * x * y;
                    m[2] += a.weight * y * y;
                }
                m
            }
            None => {
                let mass = self.total_mass();
                [mass / 2.0, 0.0, mass / 2.0]
            }
        }
    }

    /// `∫ θ μ(dθ)`.
    pub fn first_moment(&self) -> [f64; 2] {
        match self.discrete() {
            Some(atoms) => atoms.iter().fold([0.0; 2], |acc, a| {
                [acc[0] + a.weight * a.direction[0], acc[1] + a.weight * a.direction[1]]
            }),
            None => [0.0; 2],
        }
    }
}
