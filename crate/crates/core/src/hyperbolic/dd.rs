//! Double-double arithmetic (about 32 significant digits).
//!
//! Long corridors multiply dozens of reflections together; in plain `f64`
//! the vertex images lose most of their digits once they sit far from the
//! origin. Only the handful of operations the corridor code needs are here.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub const fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn is_sign_negative(self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        // One Newton step from the f64 root doubles the precision.
        let x = self.hi.sqrt();
        let (p, e) = two_prod(x, x);
        let r = ((self.hi - p) - e + self.lo) / (2.0 * x);
        let (hi, lo) = quick_two_sum(x, r);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::new(x)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

/// A vector in Minkowski space with double-double entries.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DdVec3(pub [Dd; 3]);

impl DdVec3 {
    pub fn from_f64(v: [f64; 3]) -> Self {
        DdVec3([Dd::new(v[0]), Dd::new(v[1]), Dd::new(v[2])])
    }

    pub fn to_f64(self) -> [f64; 3] {
        [self.0[0].to_f64(), self.0[1].to_f64(), self.0[2].to_f64()]
    }

    /// Minkowski form `x1 x2 + y1 y2 - z1 z2`.
    pub fn q(&self, o: &DdVec3) -> Dd {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] - self.0[2] * o.0[2]
    }

    /// `J (a x b)`, the Minkowski normal of the plane spanned by `a` and `b`.
    pub fn j_cross(&self, o: &DdVec3) -> DdVec3 {
        let a = &self.0;
        let b = &o.0;
        DdVec3([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            -(a[0] * b[1] - a[1] * b[0]),
        ])
    }

    pub fn scale(&self, s: Dd) -> DdVec3 {
        DdVec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    pub fn sub(&self, o: &DdVec3) -> DdVec3 {
        DdVec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }

    pub fn add(&self, o: &DdVec3) -> DdVec3 {
        DdVec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }

    pub fn neg(&self) -> DdVec3 {
        DdVec3([-self.0[0], -self.0[1], -self.0[2]])
    }

    /// Rescale a spacelike vector to `Q(n,n) = 1`. Returns `None` when the
    /// vector is not spacelike.
    pub fn normalized_spacelike(&self) -> Option<DdVec3> {
        let qq = self.q(self);
        if qq.hi <= 0.0 {
            return None;
        }
        Some(self.scale(Dd::ONE / qq.sqrt()))
    }

    /// Rescale a timelike vector onto the upper sheet `Q(p,p) = -1, z > 0`.
    pub fn normalized_timelike(&self) -> Option<DdVec3> {
        let qq = self.q(self);
        if qq.hi >= 0.0 {
            return None;
        }
        let mut s = Dd::ONE / (-qq).sqrt();
        if self.0[2].is_sign_negative() {
            s = -s;
        }
        Some(self.scale(s))
    }
}

/// A 3x3 matrix with double-double entries, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DdMat3(pub [[Dd; 3]; 3]);

impl DdMat3 {
    pub fn identity() -> Self {
        let mut m = [[Dd::ZERO; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Dd::ONE;
        }
        DdMat3(m)
    }

    /// Reflection `p -> p - 2 Q(p,n) n` in the line with unit normal `n`.
    pub fn reflection(n: &DdVec3) -> Self {
        let j = [Dd::ONE, Dd::ONE, -Dd::ONE];
        let mut m = DdMat3::identity().0;
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] = m[r][c] - (n.0[r] * n.0[c] * j[c]).mul_f64(2.0);
            }
        }
        DdMat3(m)
    }

    /// Rotation by pi about the unit timelike point `v`: `x -> -x - 2 Q(x,v) v`.
    pub fn half_turn(v: &DdVec3) -> Self {
        let j = [Dd::ONE, Dd::ONE, -Dd::ONE];
        let mut m = DdMat3::identity().0;
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] = -m[r][c] - (v.0[r] * v.0[c] * j[c]).mul_f64(2.0);
            }
        }
        DdMat3(m)
    }

    pub fn mul(&self, o: &DdMat3) -> DdMat3 {
        let mut m = [[Dd::ZERO; 3]; 3];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = self.0[r][0] * o.0[0][c] + self.0[r][1] * o.0[1][c] + self.0[r][2] * o.0[2][c];
            }
        }
        DdMat3(m)
    }

    pub fn apply(&self, v: &DdVec3) -> DdVec3 {
        let mut out = [Dd::ZERO; 3];
        for (r, cell) in out.iter_mut().enumerate() {
            *cell = self.0[r][0] * v.0[0] + self.0[r][1] * v.0[1] + self.0[r][2] * v.0[2];
        }
        DdVec3(out)
    }

    pub fn to_f64(&self) -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] = self.0[r][c].to_f64();
            }
        }
        m
    }
}
