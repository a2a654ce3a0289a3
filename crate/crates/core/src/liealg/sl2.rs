use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::rational::{q, zero, Q};

use super::LieAlgebra;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SL2Triple {
    pub e: Vector,
    pub h: Vector,
    pub f: Vector,
}

impl SL2Triple {
    /// Checks `[h,e]=2e`, `[h,f]=-2f`, `[e,f]=h` and nilpotency of `e`, `f`.
    pub fn validate(&self, g: &LieAlgebra) -> Result<()> {
        let n = g.dim();
        if self.e.len() != n || self.h.len() != n || self.f.len() != n {
            return Err(Error::ShapeMismatch("triple vectors have wrong length".into()));
        }
        if linalg::is_zero_vec(&self.f) || linalg::is_zero_vec(&self.e) {
            return Err(Error::InvalidTriple("e and f must be nonzero".into()));
        }
        let two = q(2);
        if g.bracket(&self.h, &self.e) != linalg::scale(&two, &self.e) {
            return Err(Error::InvalidTriple("[h,e] != 2e".into()));
        }
        if g.bracket(&self.h, &self.f) != linalg::scale(&-two, &self.f) {
            return Err(Error::InvalidTriple("[h,f] != -2f".into()));
        }
        if g.bracket(&self.e, &self.f) != self.h {
            return Err(Error::InvalidTriple("[e,f] != h".into()));
        }
        for (name, x) in [("e", &self.e), ("f", &self.f)] {
            if !ad_nilpotent(g, x) {
                return Err(Error::InvalidTriple(format!("ad {name} is not nilpotent")));
            }
        }
        Ok(())
    }
}

fn ad_nilpotent(g: &LieAlgebra, x: &[Q]) -> bool {
    let ad = g.ad(x);
    let mut p = ad.clone();
    for _ in 0..g.dim() {
        if p.is_zero() {
            return true;
        }
        p = p.mul(&ad);
    }
    p.is_zero()
}

/// The sl2-triple of the nilpotent orbit with Jordan type `partition` in
/// `sl_n`.
///
/// Basis vectors of all Jordan blocks are sorted by decreasing `h`-weight
/// (ties broken by block order), so `f` is strictly lower triangular, `h` is
/// diagonal with non-increasing entries and `e` strictly upper triangular.
/// Within a block of size `k` with vectors `v_1..v_k`, `f v_i = v_{i+1}` and
/// `e v_{i+1} = i(k-i) v_i`.
pub fn sl2_from_partition(g: &LieAlgebra, n: usize, partition: &[usize]) -> Result<SL2Triple> {
    if g.matrix_size() != Some(n) {
        return Err(Error::InvalidDimension(format!("algebra is not sl_{n}")));
    }
    if partition.iter().sum::<usize>() != n || partition.contains(&0) {
        return Err(Error::InvalidDimension(format!(
            "partition {partition:?} does not sum to {n}"
        )));
    }
    if partition.iter().all(|&k| k == 1) {
        return Err(Error::InvalidTriple("zero orbit: f = 0 is degenerate".into()));
    }
    // (weight, block, position in block)
    let mut slots: Vec<(i64, usize, usize)> = Vec::new();
    for (b, &k) in partition.iter().enumerate() {
        for i in 0..k {
            slots.push((k as i64 - 1 - 2 * i as i64, b, i));
        }
    }
    slots.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let pos = |b: usize, i: usize| slots.iter().position(|s| s.1 == b && s.2 == i).unwrap();

    let mut e = vec![vec![zero(); n]; n];
    let mut h = vec![vec![zero(); n]; n];
    let mut f = vec![vec![zero(); n]; n];
    for (b, &k) in partition.iter().enumerate() {
        for i in 0..k {
            let r = pos(b, i);
            h[r][r] = q(k as i64 - 1 - 2 * i as i64);
            if i + 1 < k {
                let s = pos(b, i + 1);
                f[s][r] = q(1);
                let ii = (i + 1) as i64;
                e[r][s] = q(ii * (k as i64 - ii));
            }
        }
    }
    let triple = SL2Triple {
        e: g.from_matrix(&e)?,
        h: g.from_matrix(&h)?,
        f: g.from_matrix(&f)?,
    };
    triple.validate(g)?;
    Ok(triple)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::build_sl_n;

    #[test]
    fn sl2_standard() {
        let g = build_sl_n(2).unwrap();
        let t = sl2_from_partition(&g, 2, &[2]).unwrap();
        assert_eq!(t.e, g.parse_element("e12").unwrap());
        assert_eq!(t.f, g.parse_element("e21").unwrap());
        assert_eq!(t.h, g.parse_element("h1").unwrap());
    }

    #[test]
    fn sl3_minimal_is_the_e31_triple() {
        let g = build_sl_n(3).unwrap();
        let t = sl2_from_partition(&g, 3, &[2, 1]).unwrap();
        assert_eq!(t.f, g.parse_element("e31").unwrap());
        assert_eq!(t.e, g.parse_element("e13").unwrap());
        assert_eq!(t.h, g.parse_element("h1+h2").unwrap());
        assert_eq!(g.bracket(&t.e, &t.f), t.h);
    }

    #[test]
    fn regular_sl4() {
        let g = build_sl_n(4).unwrap();
        let t = sl2_from_partition(&g, 4, &[4]).unwrap();
        assert_eq!(t.f, g.parse_element("e21+e32+e43").unwrap());
        assert_eq!(t.e, g.parse_element("3*e12+4*e23+3*e34").unwrap());
    }

    #[test]
    fn bad_partitions() {
        let g = build_sl_n(3).unwrap();
        assert!(matches!(
            sl2_from_partition(&g, 3, &[2, 2]),
            Err(Error::InvalidDimension(_))
        ));
        assert!(matches!(
            sl2_from_partition(&g, 3, &[1, 1, 1]),
            Err(Error::InvalidTriple(_))
        ));
    }

    #[test]
    fn broken_triple_rejected() {
        let g = build_sl_n(2).unwrap();
        let mut t = sl2_from_partition(&g, 2, &[2]).unwrap();
        t.h = linalg::scale(&q(2), &t.h);
        assert!(t.validate(&g).is_err());
    }
}
