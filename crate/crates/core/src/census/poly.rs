use std::fmt;

/// Polynomial over `F_p`, stored little-endian: `coeffs[i]` multiplies `t^i`.
///
/// The zero polynomial has no coefficients; otherwise the last entry is
/// nonzero. The modulus is not stored, so every arithmetic method takes `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpPoly {
    coeffs: Vec<u32>,
}

impl FpPoly {
    pub fn new(mut coeffs: Vec<u32>, p: u32) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![1] }
    }

    /// `t^n - t`, the product of all monic irreducibles of degree dividing `n`.
    pub fn frobenius_difference(p: u32, n: u32) -> Self {
        let top = (p as usize).pow(n);
        let mut c = vec![0; top + 1];
        c[top] = 1;
        c[1] = p - 1;
        Self::new(c, p)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn mul(&self, other: &Self, p: u32) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self { coeffs: vec![] };
        }
        let p = p as u64;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u64 * b as u64) % p;
            }
        }
        Self::new(out.into_iter().map(|c| c as u32).collect(), p as u32)
    }

    /// Division by a monic polynomial: returns `(quotient, remainder)`.
    pub fn div_rem_monic(&self, divisor: &Self, p: u32) -> (Self, Self) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self { coeffs: vec![] }, self.clone());
        }
        let p64 = p as u64;
        let mut rem: Vec<u64> = self.coeffs.iter().map(|&c| c as u64).collect();
        let mut quot = vec![0u32; rem.len() - dd];
        for shift in (0..quot.len()).rev() {
            let lead = rem[shift + dd] % p64;
            if lead == 0 {
                continue;
            }
            quot[shift] = lead as u32;
            for (i, &c) in divisor.coeffs.iter().enumerate() {
                let sub = lead * c as u64 % p64;
                rem[shift + i] = (rem[shift + i] + p64 - sub) % p64;
            }
        }
        rem.truncate(dd);
        (
            Self::new(quot, p),
            Self::new(rem.into_iter().map(|c| c as u32).collect(), p),
        )
    }

    pub fn is_divisible_by(&self, divisor: &Self, p: u32) -> bool {
        self.div_rem_monic(divisor, p).1.is_zero()
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}t")?,
                (i, 1) => write!(f, "t^{i}")?,
                (i, c) => write!(f, "{c}t^{i}")?,
            }
        }
        Ok(())
    }
}
