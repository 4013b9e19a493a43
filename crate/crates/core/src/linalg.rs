//! Dense matrices and vectors over Q(ω_p).

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};

/// Column vector over Q(ω_p).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycVector {
    p: u32,
    data: Vec<CycNumber>,
}

/// Square matrix over Q(ω_p), row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycMatrix {
    p: u32,
    dim: usize,
    data: Vec<CycNumber>,
}

impl CycVector {
    pub fn zeros(p: u32, dim: usize) -> Self {
        CycVector {
            p,
            data: vec![CycNumber::zero(p); dim],
        }
    }

    pub fn basis(p: u32, dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(p, dim);
        v.data[i] = CycNumber::one(p);
        v
    }

    pub fn from_vec(p: u32, data: Vec<CycNumber>) -> Self {
        assert!(data.iter().all(|x| x.p() == p));
        CycVector { p, data }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn entries(&self) -> &[CycNumber] {
        &self.data
    }

    pub fn get(&self, i: usize) -> &CycNumber {
        &self.data[i]
    }

    pub fn set(&mut self, i: usize, x: CycNumber) {
        self.data[i] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycNumber::is_zero)
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.data.iter().position(|x| !x.is_zero())
    }

    fn check_dim(&self, other: &CycVector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &CycVector) -> Result<CycVector> {
        self.check_dim(other)?;
        Ok(CycVector {
            p: self.p,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, other: &CycVector) -> Result<CycVector> {
        self.check_dim(other)?;
        Ok(CycVector {
            p: self.p,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn scale(&self, c: &CycNumber) -> CycVector {
        CycVector {
            p: self.p,
            data: self.data.iter().map(|x| x.mul(c)).collect(),
        }
    }

    /// ⟨self, other⟩, antilinear in the first slot.
    pub fn inner(&self, other: &CycVector) -> Result<CycNumber> {
        self.check_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(CycNumber::zero(self.p), |acc, (a, b)| acc.add(&a.conj().mul(b))))
    }

    pub fn norm_sqr(&self) -> CycNumber {
        self.inner(self).expect("same vector")
    }

    /// Entry-wise Galois action.
    pub fn apply_auto(&self, k: u32) -> CycVector {
        CycVector {
            p: self.p,
            data: self.data.iter().map(|x| x.apply_auto(k)).collect(),
        }
    }

    pub fn conj(&self) -> CycVector {
        self.apply_auto(self.p - 1)
    }

    /// μ with self = μ·other, if one exists.
    pub fn proportional_to(&self, other: &CycVector) -> Option<CycNumber> {
        if self.dim() != other.dim() {
            return None;
        }
        let i = match other.first_nonzero() {
            Some(i) => i,
            None => return self.is_zero().then(|| CycNumber::one(self.p)),
        };
        let mu = self.data[i].div(&other.data[i]).ok()?;
        self.data
            .iter()
            .zip(&other.data)
            .all(|(a, b)| *a == b.mul(&mu))
            .then_some(mu)
    }

    /// Rank-one operator |self⟩⟨other|.
    pub fn outer(&self, other: &CycVector) -> CycMatrix {
        assert_eq!(self.dim(), other.dim());
        let conj: Vec<CycNumber> = other.data.iter().map(CycNumber::conj).collect();
        CycMatrix::from_fn(self.p, self.dim(), |i, j| self.data[i].mul(&conj[j]))
    }
}

impl CycMatrix {
    pub fn zeros(p: u32, dim: usize) -> Self {
        CycMatrix {
            p,
            dim,
            data: vec![CycNumber::zero(p); dim * dim],
        }
    }

    pub fn identity(p: u32, dim: usize) -> Self {
        Self::scalar(p, dim, &CycNumber::one(p))
    }

    pub fn scalar(p: u32, dim: usize, c: &CycNumber) -> Self {
        let mut m = Self::zeros(p, dim);
        for i in 0..dim {
            m.data[i * dim + i] = c.clone();
        }
        m
    }

    pub fn from_fn(p: u32, dim: usize, mut f: impl FnMut(usize, usize) -> CycNumber) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let x = f(i, j);
                assert_eq!(x.p(), p);
                data.push(x);
            }
        }
        CycMatrix { p, dim, data }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNumber {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: CycNumber) {
        self.data[i * self.dim + j] = x;
    }

    pub fn row(&self, i: usize) -> &[CycNumber] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> CycVector {
        CycVector {
            p: self.p,
            data: (0..self.dim).map(|i| self.get(i, j).clone()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycNumber::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let x = self.get(i, j);
                if i == j {
                    x.is_one()
                } else {
                    x.is_zero()
                }
            })
        })
    }

    pub fn mul(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(self.p, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * n + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &CycVector) -> Result<CycVector> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
            });
        }
        let data = (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(&v.data)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(CycNumber::zero(self.p), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect();
        Ok(CycVector { p: self.p, data })
    }

    pub fn add(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!(self.dim, other.dim);
        CycMatrix {
            p: self.p,
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!(self.dim, other.dim);
        CycMatrix {
            p: self.p,
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &CycNumber) -> CycMatrix {
        CycMatrix {
            p: self.p,
            dim: self.dim,
            data: self.data.iter().map(|x| x.mul(c)).collect(),
        }
    }

    pub fn neg(&self) -> CycMatrix {
        CycMatrix {
            p: self.p,
            dim: self.dim,
            data: self.data.iter().map(CycNumber::neg).collect(),
        }
    }

    pub fn transpose(&self) -> CycMatrix {
        CycMatrix::from_fn(self.p, self.dim, |i, j| self.get(j, i).clone())
    }

    pub fn conj_transpose(&self) -> CycMatrix {
        CycMatrix::from_fn(self.p, self.dim, |i, j| self.get(j, i).conj())
    }

    /// Entry-wise Galois action g_k.
    pub fn apply_auto(&self, k: u32) -> CycMatrix {
        CycMatrix {
            p: self.p,
            dim: self.dim,
            data: self.data.iter().map(|x| x.apply_auto(k)).collect(),
        }
    }

    pub fn trace(&self) -> CycNumber {
        (0..self.dim).fold(CycNumber::zero(self.p), |acc, i| acc.add(self.get(i, i)))
    }

    /// Tr(self · other) without forming the product.
    pub fn trace_product(&self, other: &CycMatrix) -> CycNumber {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = CycNumber::zero(self.p);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                let b = other.get(k, i);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
        }
        acc
    }

    pub fn pow(&self, mut e: u64) -> CycMatrix {
        let mut base = self.clone();
        let mut acc = Self::identity(self.p, self.dim);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// c with self = c·other, if one exists.
    pub fn proportional_to(&self, other: &CycMatrix) -> Option<CycNumber> {
        let a = CycVector {
            p: self.p,
            data: self.data.clone(),
        };
        let b = CycVector {
            p: other.p,
            data: other.data.clone(),
        };
        a.proportional_to(&b)
    }

    /// Reduced row echelon form by Gauss-Jordan elimination, pivoting on the
    /// first nonzero entry of each column. Returns the pivot columns.
    pub fn rref(&self) -> (CycMatrix, Vec<usize>) {
        let n = self.dim;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..n {
            if row == n {
                break;
            }
            let Some(piv) = (row..n).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if piv != row {
                for j in 0..n {
                    m.data.swap(piv * n + j, row * n + j);
                }
            }
            let inv = m.get(row, col).inv().expect("pivot is nonzero");
            for j in col..n {
                let x = m.get(row, j).mul(&inv);
                m.set(row, j, x);
            }
            for r in 0..n {
                if r == row {
                    continue;
                }
                let f = m.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let pj = m.get(row, j);
                    if pj.is_zero() {
                        continue;
                    }
                    let x = m.get(r, j).sub(&f.mul(pj));
                    m.set(r, j, x);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right nullspace, one vector per free column, each with a 1
    /// in its free position.
    pub fn nullspace(&self) -> Vec<CycVector> {
        let n = self.dim;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = CycVector::zeros(self.p, n);
                v.data[f] = CycNumber::one(self.p);
                for (row, &pc) in pivots.iter().enumerate() {
                    v.data[pc] = r.get(row, f).neg();
                }
                v
            })
            .collect()
    }
}

impl Serialize for CycVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.data.serialize(s)
    }
}

/// `{"d": dim, "p": p, "rows": [[...], ...]}`.
impl Serialize for CycMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[CycNumber]> = (0..self.dim).map(|i| self.row(i)).collect();
        let mut st = s.serialize_struct("CycMatrix", 3)?;
        st.serialize_field("d", &self.dim)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("rows", &rows)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(p: u32, k: i64) -> CycNumber {
        CycNumber::omega_pow(p, k)
    }

    fn fourier(p: u32) -> CycMatrix {
        CycMatrix::from_fn(p, p as usize, |i, j| w(p, (i * j) as i64))
    }

    #[test]
    fn fourier_matrix_squares_to_p_times_parity() {
        let p = 5;
        let f = fourier(p);
        let f2 = f.mul(&f);
        for i in 0..5 {
            for j in 0..5 {
                let expected = if (i + j) % 5 == 0 { 5 } else { 0 };
                assert_eq!(*f2.get(i, j), CycNumber::from_int(p, expected));
            }
        }
        assert_eq!(f.mul(&f.conj_transpose()), CycMatrix::scalar(p, 5, &CycNumber::from_int(p, 5)));
        assert_eq!(f.trace_product(&f), f2.trace());
    }

    #[test]
    fn nullspace_of_rank_deficient_matrix() {
        let p = 7;
        // rows: r, 2r, r + ω·r'
        let r = [w(p, 1), CycNumber::one(p), CycNumber::zero(p)];
        let rp = [CycNumber::zero(p), w(p, 3), CycNumber::from_int(p, 2)];
        let m = CycMatrix::from_fn(p, 3, |i, j| match i {
            0 => r[j].clone(),
            1 => r[j].mul_int(2),
            _ => r[j].add(&w(p, 1).mul(&rp[j])),
        });
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).unwrap().is_zero());
        assert!(fourier(p).nullspace().is_empty());
    }

    #[test]
    fn proportionality() {
        let p = 5;
        let v = CycVector::from_vec(p, vec![w(p, 1), CycNumber::from_ratio(p, 1, 2), w(p, 3)]);
        let mu = w(p, 2).add(&CycNumber::from_int(p, 3));
        assert_eq!(v.scale(&mu).proportional_to(&v), Some(mu));
        let mut u = v.clone();
        u.set(2, w(p, 4));
        assert_eq!(u.proportional_to(&v), None);
    }

    #[test]
    fn outer_product_has_rank_one() {
        let p = 3;
        let v = CycVector::from_vec(p, vec![w(p, 1), CycNumber::one(p), CycNumber::zero(p)]);
        let m = v.outer(&v);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.trace(), v.norm_sqr());
        assert_eq!(m.mul(&m), m.scale(&v.norm_sqr()));
    }

    #[test]
    fn json_layout() {
        let m = CycMatrix::identity(3, 2);
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.starts_with(r#"{"d":2,"p":3,"rows":[[{"p":3,"num":[1,0],"den":[1,1]}"#));
    }
}
