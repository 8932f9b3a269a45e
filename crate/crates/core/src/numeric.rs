//! Small numeric helpers shared by several modules.

use nalgebra::linalg::Schur;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scattering::CMatrix;

/// Neumaier-compensated summation of complex terms, component-wise.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn neumaier(acc: &mut (f64, f64), x: f64) {
    let (sum, comp) = acc;
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    pub fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, z.re);
        neumaier(&mut self.im, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

impl FromIterator<Complex64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = Self::default();
        for z in iter {
            s.add(z);
        }
        s
    }
}

/// Eigenvalues of a dense complex matrix via the complex Schur form.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>> {
    let schur = Schur::try_new(m.clone(), f64::EPSILON, 10_000).ok_or(Error::Eigensolve)?;
    let ev = schur.eigenvalues().ok_or(Error::Eigensolve)?;
    Ok(ev.iter().copied().collect())
}

/// Integer partitions of `n`, each given as multiplicities `m[j-1]` of part `j`.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max_part: usize, m: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(m.clone());
            return;
        }
        for part in (1..=max_part.min(rest)).rev() {
            m[part - 1] += 1;
            rec(rest - part, part, m, out);
            m[part - 1] -= 1;
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return vec![Vec::new()];
    }
    rec(n, n, &mut vec![0; n], &mut out);
    out
}
