//! Neumaier-compensated accumulators. All reductions in the crate go through
//! these in a fixed order, so results do not depend on thread scheduling.

use crate::quaternion::Quaternion;

#[derive(Clone, Copy, Debug, Default)]
pub struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct QuatSum {
    parts: [Compensated; 4],
}

impl QuatSum {
    #[inline]
    pub fn add(&mut self, q: Quaternion) {
        self.parts[0].add(q.w);
        self.parts[1].add(q.x);
        self.parts[2].add(q.y);
        self.parts[3].add(q.z);
    }

    #[inline]
    pub fn value(&self) -> Quaternion {
        Quaternion::new(
            self.parts[0].value(),
            self.parts[1].value(),
            self.parts[2].value(),
            self.parts[3].value(),
        )
    }
}

pub fn fsum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = Compensated::default();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

pub fn qsum<I: IntoIterator<Item = Quaternion>>(values: I) -> Quaternion {
    let mut acc = QuatSum::default();
    for v in values {
        acc.add(v);
    }
    acc.value()
}
