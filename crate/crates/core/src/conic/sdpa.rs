//! SDPA sparse-format export (`.dat-s`) of a lowered problem.
//!
//! SDPA's primal is `min cᵀx s.t. Σ xᵢFᵢ − F₀ ⪰ 0`. Our form
//! `max bᵀy s.t. C − Σ yᵢAᵢ ⪰ 0` maps to it with `c = −b`, `Fᵢ = −Aᵢ`,
//! `F₀ = −C`. The orthant is written as one diagonal block.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use super::ipm::SdpData;
use crate::scalar::{to_f64, Real};

pub fn to_sdpa_string<T: Real>(data: &SdpData<T>) -> String {
    let mut out = String::new();
    let n_blocks = data.psd.len() + usize::from(!data.lp.is_empty());
    let _ = writeln!(out, "{}", data.m);
    let _ = writeln!(out, "{n_blocks}");
    let mut dims: Vec<String> = data.psd.iter().map(|b| b.dim.to_string()).collect();
    if !data.lp.is_empty() {
        dims.push(format!("-{}", data.lp.len()));
    }
    let _ = writeln!(out, "{}", dims.join(" "));
    let c: Vec<String> = data.b.iter().map(|&v| format!("{:e}", -to_f64(v))).collect();
    let _ = writeln!(out, "{}", c.join(" "));

    let mut lines: Vec<(usize, usize, usize, usize, f64)> = Vec::new();
    for (k, blk) in data.psd.iter().enumerate() {
        for r in 0..blk.dim {
            for col in r..blk.dim {
                let v = to_f64(blk.c[(r, col)]);
                if v != 0.0 {
                    lines.push((0, k + 1, r + 1, col + 1, -v));
                }
            }
        }
        for (i, trip) in &blk.a {
            for &(r, col, v) in trip {
                if r <= col {
                    lines.push((i + 1, k + 1, r + 1, col + 1, -to_f64(v)));
                }
            }
        }
    }
    if !data.lp.is_empty() {
        let k = data.psd.len() + 1;
        for (l, row) in data.lp.iter().enumerate() {
            let v = to_f64(row.c);
            if v != 0.0 {
                lines.push((0, k, l + 1, l + 1, -v));
            }
            for &(i, a) in &row.a {
                lines.push((i + 1, k, l + 1, l + 1, -to_f64(a)));
            }
        }
    }
    lines.sort_by(|a, b| (a.0, a.1, a.2, a.3).cmp(&(b.0, b.1, b.2, b.3)));
    for (mat, blk, i, j, v) in lines {
        let _ = writeln!(out, "{mat} {blk} {i} {j} {v:e}");
    }
    out
}

pub fn write_sdpa_file<T: Real>(data: &SdpData<T>, path: &Path) -> io::Result<()> {
    std::fs::write(path, to_sdpa_string(data))
}

#[cfg(test)]
mod tests {
    use super::super::{AffineMatrix, AffineScalar, ConicProblem, Sign};

    #[test]
    fn header_and_entries() {
        let mut p = ConicProblem::<f64>::new();
        let t = p.scalar("t", Sign::Nonneg);
        p.add_lmi("t>=3", AffineMatrix::from_scalar(&AffineScalar::var(t).add_const(-3.0)));
        p.minimize(AffineScalar::var(t));
        let s = super::to_sdpa_string(&p.to_sdp().unwrap());
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "1");
        assert_eq!(lines[1], "2");
        assert_eq!(lines[2], "1 -1");
        assert_eq!(lines[3], "1e0");
        // F0 = −C = 3 on the LMI block; F1 = 1 on both blocks
        assert!(lines.contains(&"0 1 1 1 3e0"));
        assert!(lines.contains(&"1 1 1 1 1e0"));
        assert!(lines.contains(&"1 2 1 1 1e0"));
    }
}
