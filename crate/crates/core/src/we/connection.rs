use crate::coeff::Scalar;
use crate::forms::Form;
use crate::jet::{self, reduce_mod_evolution, Direction, EvolutionSystem};
use crate::su2::AknsSpec;

use super::ideal::{membership, Membership};
use super::{ExteriorIdeal, WeError};

pub type Matrix = Vec<Vec<Scalar>>;

/// Linear connection `dy = F y dt + G y dx`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionData {
    /// Coefficient of `dt`.
    pub f: Matrix,
    /// Coefficient of `dx`.
    pub g: Matrix,
}

fn square(m: &Matrix) -> Option<usize> {
    let n = m.len();
    m.iter().all(|r| r.len() == n).then_some(n)
}

fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(Scalar::zero(), |acc, k| &acc + &(&a[i][k] * &b[k][j]))).collect())
        .collect()
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    let (ab, ba) = (mul(a, b), mul(b, a));
    ab.iter().zip(&ba).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

impl ConnectionData {
    pub fn new(f: Matrix, g: Matrix) -> Result<Self, WeError> {
        match (square(&f), square(&g)) {
            (Some(a), Some(b)) if a == b && a > 0 => Ok(ConnectionData { f, g }),
            _ => Err(WeError::Shape("F and G must be square matrices of one size".into())),
        }
    }

    pub fn zero(n: usize) -> Self {
        let z = vec![vec![Scalar::zero(); n]; n];
        ConnectionData { f: z.clone(), g: z }
    }

    pub fn size(&self) -> usize {
        self.f.len()
    }

    /// `G = [[eta, q], [r, -eta]]`, `F = [[A, B], [C, -A]]`.
    pub fn from_akns(spec: &AknsSpec) -> Self {
        let eta = spec.eta();
        let a = spec.a();
        ConnectionData {
            g: vec![vec![eta.clone(), spec.q.clone()], vec![spec.r.clone(), -eta]],
            f: vec![vec![a.clone(), spec.b()], vec![spec.c(), -a]],
        }
    }

    pub fn try_map<E>(&self, mut op: impl FnMut(&Scalar) -> Result<Scalar, E>) -> Result<ConnectionData, E> {
        let mut m = |x: &Matrix| -> Result<Matrix, E> {
            x.iter().map(|r| r.iter().map(&mut op).collect()).collect()
        };
        Ok(ConnectionData { f: m(&self.f)?, g: m(&self.g)? })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProlongationEntry {
    pub row: usize,
    pub col: usize,
    /// `dF ^ dt + dG ^ dx + [F, G] dx ^ dt`.
    pub form: Form,
    pub membership: Membership,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProlongationReport {
    pub entries: Vec<ProlongationEntry>,
}

impl ProlongationReport {
    pub fn holds(&self) -> bool {
        self.entries.iter().all(|e| e.membership.is_member())
    }
}

/// Check `dF ^ dt + dG ^ dx + [F, G] dx ^ dt` entrywise against the ideal on
/// a chart with independent coordinates `x`, `t`.
pub fn prolongation_residual(conn: &ConnectionData, ideal: &ExteriorIdeal) -> Result<ProlongationReport, WeError> {
    let ctx = ideal.ctx();
    let (Some(dx), Some(dt)) = (ctx.generator("dx"), ctx.generator("dt")) else {
        return Err(WeError::Shape("chart needs coordinates x and t".into()));
    };
    let area = dx.wedge(&dt);
    let br = commutator(&conn.f, &conn.g);
    let n = conn.size();
    let mut entries = Vec::new();
    for row in 0..n {
        for col in 0..n {
            let form = &(&ctx.d_scalar(&conn.f[row][col]).wedge(&dt) + &ctx.d_scalar(&conn.g[row][col]).wedge(&dx))
                + &area.scale(&br[row][col]);
            let membership = membership(&form, ideal);
            entries.push(ProlongationEntry { row, col, form, membership });
        }
    }
    Ok(ProlongationReport { entries })
}

/// `G_t - F_x + [G, F]`, the compatibility of `y_x = G y`, `y_t = F y`.
pub fn zero_curvature_matrix(conn: &ConnectionData) -> Matrix {
    let br = commutator(&conn.g, &conn.f);
    let n = conn.size();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let gt = jet::total_derivative(&conn.g[i][j], Direction::T);
                    let fx = jet::total_derivative(&conn.f[i][j], Direction::X);
                    &(&gt - &fx) + &br[i][j]
                })
                .collect()
        })
        .collect()
}

/// [`zero_curvature_matrix`] with time derivatives eliminated through `sys`.
pub fn zero_curvature_residual(conn: &ConnectionData, sys: &EvolutionSystem) -> Result<Matrix, WeError> {
    zero_curvature_matrix(conn)
        .iter()
        .map(|r| r.iter().map(|e| reduce_mod_evolution(e, sys).map_err(WeError::from)).collect())
        .collect()
}

pub fn is_zero_matrix(m: &Matrix) -> bool {
    m.iter().flatten().all(Scalar::is_zero)
}
