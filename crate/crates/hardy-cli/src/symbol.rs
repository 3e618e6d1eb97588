//! File formats: the shared rational-symbol JSON, the power-quotient term
//! file, and the boundary-function argument parser.

use hardy_core::hardy::BoundaryFunction;
use hardy_core::poly::{Poly, RationalMap};
use hardy_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::Failure;

/// Rational symbol on disk: coefficient pairs `[re, im]`, ascending powers.
#[derive(Debug, Serialize, Deserialize)]
pub struct SymbolFile {
    pub num: Vec<[f64; 2]>,
    pub den: Vec<[f64; 2]>,
}

impl SymbolFile {
    pub fn to_map(&self) -> Result<RationalMap, Failure> {
        let to_poly = |coeffs: &[[f64; 2]]| -> Poly {
            Poly::new(coeffs.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        };
        if self.num.is_empty() || self.den.is_empty() {
            return Err(Failure::usage("symbol file needs nonempty num and den coefficient lists"));
        }
        RationalMap::new(to_poly(&self.num), to_poly(&self.den))
            .map_err(|e| Failure::usage(&format!("invalid symbol: {e}")))
    }
}

/// Power-quotient terms on disk, for `classify --qlp`.
#[derive(Debug, Serialize, Deserialize)]
pub struct QlpFile {
    pub num_terms: Vec<QlpTerm>,
    pub den_terms: Vec<QlpTerm>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct QlpTerm {
    pub coeff: [f64; 2],
    pub power: f64,
}

pub type QlpTerms = Vec<(Complex64, f64)>;

impl QlpFile {
    pub fn terms(&self) -> (QlpTerms, QlpTerms) {
        let conv = |ts: &[QlpTerm]| {
            ts.iter()
                .map(|t| (Complex64::new(t.coeff[0], t.coeff[1]), t.power))
                .collect()
        };
        (conv(&self.num_terms), conv(&self.den_terms))
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &str) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(&format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::usage(&format!(
            "malformed JSON in {path} at line {} column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}

fn parse_complex_pair(s: &str) -> Result<Complex64, Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Failure::usage(&format!("expected re,im — got {s:?}")));
    }
    let re: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Failure::usage(&format!("bad real part {:?}", parts[0])))?;
    let im: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| Failure::usage(&format!("bad imaginary part {:?}", parts[1])))?;
    Ok(Complex64::new(re, im))
}

pub fn parse_point(s: &str) -> Result<Complex64, Failure> {
    parse_complex_pair(s)
}

/// Boundary-function argument: a catalogue name (`g2`, `f2`, `K:re,im`,
/// `k:re,im`, `P:x,y`) or a path to a rational-symbol JSON used as the
/// function `num/den` on the line.
pub fn parse_function(spec: &str) -> Result<BoundaryFunction, Failure> {
    match spec {
        "g2" => return Ok(BoundaryFunction::g_p(2.0)),
        "f2" => return Ok(BoundaryFunction::f_p(2.0)),
        _ => {}
    }
    if let Some(rest) = spec.strip_prefix("K:") {
        let z = parse_complex_pair(rest)?;
        return Ok(BoundaryFunction::kernel(z));
    }
    if let Some(rest) = spec.strip_prefix("k:") {
        let z = parse_complex_pair(rest)?;
        return Ok(BoundaryFunction::kernel_unnormalized(z));
    }
    if let Some(rest) = spec.strip_prefix("P:") {
        let p = parse_complex_pair(rest)?;
        return Ok(BoundaryFunction::poisson(p.re, p.im));
    }
    // fall back to a rational function from a symbol file
    let file: SymbolFile = read_json(spec)?;
    let map = file.to_map()?;
    let n = map.num_degree() as i64;
    let m = map.den_degree() as i64;
    let decay = (m - n).max(0) as f64;
    let poles = map.real_poles();
    let analytic = match map.den().degree() {
        0 => true,
        _ => map.den().roots().is_ok_and(|rs| {
            rs.roots.iter().all(|&(p, _)| p.im < -1e-9 * (1.0 + p.norm()))
        }),
    };
    Ok(BoundaryFunction::new(
        move |z| map.eval(z).unwrap_or(Complex64::new(0.0, 0.0)),
        decay,
        poles,
        analytic,
    ))
}

/// Grid spec `re0:re1:nx,im0:im1:ny`, row-major points.
pub fn parse_grid(spec: &str) -> Result<Vec<Complex64>, Failure> {
    let axes: Vec<&str> = spec.split(',').collect();
    if axes.len() != 2 {
        return Err(Failure::usage("grid spec must be re0:re1:nx,im0:im1:ny"));
    }
    let axis = |s: &str| -> Result<Vec<f64>, Failure> {
        let p: Vec<&str> = s.split(':').collect();
        if p.len() != 3 {
            return Err(Failure::usage("axis spec must be start:stop:count"));
        }
        let a: f64 = p[0].trim().parse().map_err(|_| Failure::usage("bad axis start"))?;
        let b: f64 = p[1].trim().parse().map_err(|_| Failure::usage("bad axis stop"))?;
        let n: usize = p[2].trim().parse().map_err(|_| Failure::usage("bad axis count"))?;
        if n == 0 {
            return Err(Failure::usage("axis count must be positive"));
        }
        Ok((0..n)
            .map(|k| {
                if n == 1 {
                    a
                } else {
                    a + (b - a) * k as f64 / (n - 1) as f64
                }
            })
            .collect())
    };
    let res = axis(axes[0])?;
    let ims = axis(axes[1])?;
    let mut out = Vec::with_capacity(res.len() * ims.len());
    for &im in &ims {
        for &re in &res {
            out.push(Complex64::new(re, im));
        }
    }
    Ok(out)
}

/// Sweep spec `a0:a1:n`, inclusive endpoints.
pub fn parse_sweep(spec: &str) -> Result<Vec<f64>, Failure> {
    let p: Vec<&str> = spec.split(':').collect();
    if p.len() != 3 {
        return Err(Failure::usage("sweep spec must be a0:a1:n"));
    }
    let a: f64 = p[0].trim().parse().map_err(|_| Failure::usage("bad sweep start"))?;
    let b: f64 = p[1].trim().parse().map_err(|_| Failure::usage("bad sweep stop"))?;
    let n: usize = p[2].trim().parse().map_err(|_| Failure::usage("bad sweep count"))?;
    if n < 2 {
        return Err(Failure::usage("sweep needs at least two points"));
    }
    Ok((0..n)
        .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
        .collect())
}
