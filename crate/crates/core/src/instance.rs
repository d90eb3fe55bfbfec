//! Block instances `L = A + V` with `A = diag(A0, A1)` and `V = [[0, B], [C, 0]]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::krein::KreinSignature;
use crate::linalg::{block_2x2, c64, hermitian_defect, hermitian_eigenvalues, hermitian_part, set_distance, spectral_norm, CMat};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Hermitian diagonal blocks and `C = -B*`.
    JSelfAdjoint,
    /// Arbitrary `C`; diagonal blocks unconstrained.
    General,
}

#[derive(Debug, Clone)]
pub struct BlockInstance {
    pub a0: CMat,
    pub a1: CMat,
    pub b: CMat,
    pub c: CMat,
    pub mode: Mode,
}

impl BlockInstance {
    /// Validates and assembles an instance. In `JSelfAdjoint` mode `c` must be
    /// absent (it is set to `-b*`) and the diagonal blocks are symmetrized after
    /// the Hermiticity check.
    pub fn new(a0: CMat, a1: CMat, b: CMat, c: Option<CMat>, mode: Mode) -> Result<Self> {
        Self::with_tolerances(a0, a1, b, c, mode, &Tolerances::default())
    }

    pub fn with_tolerances(
        a0: CMat,
        a1: CMat,
        b: CMat,
        c: Option<CMat>,
        mode: Mode,
        tol: &Tolerances,
    ) -> Result<Self> {
        let n0 = a0.nrows();
        let n1 = a1.nrows();
        if n0 == 0 || n1 == 0 {
            return Err(Error::DimensionMismatch("both diagonal blocks must be nonempty".into()));
        }
        if a0.ncols() != n0 || a1.ncols() != n1 {
            return Err(Error::DimensionMismatch("diagonal blocks must be square".into()));
        }
        if b.shape() != (n0, n1) {
            return Err(Error::DimensionMismatch(format!(
                "b is {}x{}, expected {n0}x{n1}",
                b.nrows(),
                b.ncols()
            )));
        }
        match mode {
            Mode::JSelfAdjoint => {
                if c.is_some() {
                    return Err(Error::InvalidInput("c must be omitted in j_self_adjoint mode".into()));
                }
                let d0 = hermitian_defect(&a0);
                if d0 > tol.hermitian {
                    return Err(Error::NotHermitian { block: "a0", defect: d0 });
                }
                let d1 = hermitian_defect(&a1);
                if d1 > tol.hermitian {
                    return Err(Error::NotHermitian { block: "a1", defect: d1 });
                }
                let c = -b.adjoint();
                Ok(BlockInstance { a0: hermitian_part(&a0), a1: hermitian_part(&a1), b, c, mode })
            }
            Mode::General => {
                let c = c.ok_or_else(|| Error::InvalidInput("c is required in general mode".into()))?;
                if c.shape() != (n1, n0) {
                    return Err(Error::DimensionMismatch(format!(
                        "c is {}x{}, expected {n1}x{n0}",
                        c.nrows(),
                        c.ncols()
                    )));
                }
                Ok(BlockInstance { a0, a1, b, c, mode })
            }
        }
    }

    /// J-self-adjoint instance from Hermitian blocks and coupling `b`.
    pub fn j_self_adjoint(a0: CMat, a1: CMat, b: CMat) -> Result<Self> {
        Self::new(a0, a1, b, None, Mode::JSelfAdjoint)
    }

    pub fn n0(&self) -> usize {
        self.a0.nrows()
    }

    pub fn n1(&self) -> usize {
        self.a1.nrows()
    }

    pub fn dim(&self) -> usize {
        self.n0() + self.n1()
    }

    pub fn signature(&self) -> KreinSignature {
        KreinSignature::new(self.n0(), self.n1())
    }

    /// Dense matrix of `L`.
    pub fn assemble(&self) -> CMat {
        block_2x2(&self.a0, &self.b, &self.c, &self.a1)
    }

    /// Dense matrix of the off-diagonal part `V`.
    pub fn perturbation(&self) -> CMat {
        block_2x2(
            &CMat::zeros(self.n0(), self.n0()),
            &self.b,
            &self.c,
            &CMat::zeros(self.n1(), self.n1()),
        )
    }

    /// Dense matrix of the diagonal part `A`.
    pub fn unperturbed(&self) -> CMat {
        block_2x2(
            &self.a0,
            &CMat::zeros(self.n0(), self.n1()),
            &CMat::zeros(self.n1(), self.n0()),
            &self.a1,
        )
    }

    pub fn norm_b(&self) -> f64 {
        spectral_norm(&self.b)
    }

    pub fn norm_c(&self) -> f64 {
        spectral_norm(&self.c)
    }

    /// `||V|| = max(||B||, ||C||)`.
    pub fn norm_v(&self) -> f64 {
        self.norm_b().max(self.norm_c())
    }

    /// `sqrt(||B|| ||C||)`, which equals `||V||` in J-self-adjoint mode.
    pub fn coupling(&self) -> f64 {
        (self.norm_b() * self.norm_c()).sqrt()
    }

    /// Ascending eigenvalues of the Hermitian part of `A0`.
    pub fn sigma0(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.a0)
    }

    pub fn sigma1(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.a1)
    }

    /// `dist(spec A0, spec A1)` for Hermitian diagonal blocks.
    pub fn d(&self) -> f64 {
        set_distance(&self.sigma0(), &self.sigma1())
    }

    pub fn diagonal_blocks_hermitian(&self, tol: &Tolerances) -> bool {
        hermitian_defect(&self.a0) <= tol.hermitian && hermitian_defect(&self.a1) <= tol.hermitian
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        file.into_instance()
    }

    pub fn to_json(&self) -> String {
        let file = InstanceFile {
            n0: self.n0(),
            n1: self.n1(),
            a0: to_nested(&self.a0),
            a1: to_nested(&self.a1),
            b: to_nested(&self.b),
            c: match self.mode {
                Mode::JSelfAdjoint => None,
                Mode::General => Some(to_nested(&self.c)),
            },
            mode: self.mode,
        };
        serde_json::to_string_pretty(&file).expect("instance serializes")
    }
}

type Nested = Vec<Vec<[f64; 2]>>;

/// On-disk layout: row-major nested arrays with `[re, im]` entries.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    n0: usize,
    n1: usize,
    a0: Nested,
    a1: Nested,
    b: Nested,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c: Option<Nested>,
    mode: Mode,
}

fn to_nested(m: &CMat) -> Nested {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

fn from_nested(rows: &Nested, nrows: usize, ncols: usize, name: &str) -> Result<CMat> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch(format!("{name} must be {nrows}x{ncols}")));
    }
    if rows.iter().flatten().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!("{name} has non-finite entries")));
    }
    Ok(CMat::from_fn(nrows, ncols, |i, j| c64(rows[i][j][0], rows[i][j][1])))
}

impl InstanceFile {
    fn into_instance(self) -> Result<BlockInstance> {
        let (n0, n1) = (self.n0, self.n1);
        let a0 = from_nested(&self.a0, n0, n0, "a0")?;
        let a1 = from_nested(&self.a1, n1, n1, "a1")?;
        let b = from_nested(&self.b, n0, n1, "b")?;
        let c = self.c.as_ref().map(|c| from_nested(c, n1, n0, "c")).transpose()?;
        BlockInstance::new(a0, a1, b, c, self.mode)
    }
}
