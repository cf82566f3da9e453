//! Closed-form values for dimensions and ranks, used as the reference that
//! brute-force enumeration is compared against.

use crate::error::{Error, Result};
use crate::model::SurfaceSpec;

fn spec(g: u32, s: u32, m: u32) -> Result<(i64, i64, i64)> {
    SurfaceSpec::new(g, s, m)?;
    Ok((g as i64, s as i64, m as i64))
}

/// Dimension of the arc complex, one less than the number of arcs in a
/// maximal system.
pub fn arc_complex_dim(g: u32, s: u32, m: u32) -> Result<i64> {
    let (g, s, m) = spec(g, s, m)?;
    Ok(6 * g - 7 + 2 * s + m)
}

/// Dimension of the spine of filling systems.
pub fn spine_dim(g: u32, s: u32, m: u32) -> Result<i64> {
    let (g, s, m) = spec(g, s, m)?;
    Ok(if m < s { 4 * g - 4 + s + m } else { 4 * g - 5 + s + m })
}

/// The formula `4g - 5 + s + m`, short by one whenever `m < s`.
pub fn harer_claimed_dim(g: u32, s: u32, m: u32) -> Result<i64> {
    let (g, s, m) = spec(g, s, m)?;
    Ok(4 * g - 5 + s + m)
}

/// Smallest rank of a filling system.
pub fn min_filling_rank(g: u32, s: u32, m: u32) -> Result<i64> {
    let (g, s, m) = spec(g, s, m)?;
    Ok(if m < s { 2 * g + s - 3 } else { 2 * g + s - 2 })
}

/// Virtual cohomological dimension of the pure mapping class group.
pub fn vcd_pmod(g: u32, s: u32) -> Result<i64> {
    let (gi, si) = (g as i64, s as i64);
    match (g, s) {
        (0, s) if s >= 3 => Ok(si - 3),
        (1, 0) => Ok(1),
        (g, 0) if g >= 2 => Ok(4 * gi - 5),
        (g, s) if g >= 1 && s >= 1 => Ok(4 * gi - 4 + si),
        _ => Err(Error::OutOfTable { g, s }),
    }
}

/// Geometric dimension of the pure mapping class group, known to equal the
/// vcd once there is at least one puncture.
pub fn gd_pmod(g: u32, s: u32) -> Result<i64> {
    if s == 0 || 2 * g + s <= 2 {
        return Err(Error::OutOfTable { g, s });
    }
    vcd_pmod(g, s)
}

/// `(arcs, triangles, once-punctured monogons)` of any maximal system.
pub fn maximal_piece_counts(g: u32, s: u32, m: u32) -> Result<(u32, u32, u32)> {
    let spec = SurfaceSpec::new(g, s, m)?;
    Ok((spec.maximal_arc_count(), 4 * g + s + m - 4, s - m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn valid_specs() -> impl Iterator<Item = (u32, u32, u32)> {
        (0..4).flat_map(|g| {
            (0..7).flat_map(move |s| (1..=s).map(move |m| (g, s, m)))
        })
        .filter(|&(g, s, m)| SurfaceSpec::new(g, s, m).is_ok())
    }

    #[test]
    fn documented_values() {
        assert_eq!(arc_complex_dim(1, 1, 1).unwrap(), 2);
        assert_eq!(arc_complex_dim(0, 3, 1).unwrap(), 0);
        assert_eq!(arc_complex_dim(1, 2, 1).unwrap(), 4);
        assert_eq!(spine_dim(1, 2, 1).unwrap(), 3);
        assert_eq!(spine_dim(1, 1, 1).unwrap(), 1);
        assert_eq!(spine_dim(0, 5, 5).unwrap(), 5);
        assert_eq!(harer_claimed_dim(1, 2, 1).unwrap(), 2);
        assert_eq!(harer_claimed_dim(1, 1, 1).unwrap(), 1);
        assert_eq!(harer_claimed_dim(0, 4, 2).unwrap(), 1);
        assert_eq!(spine_dim(0, 4, 2).unwrap(), 2);
        assert_eq!(min_filling_rank(1, 2, 1).unwrap(), 1);
        assert_eq!(min_filling_rank(0, 3, 3).unwrap(), 1);
        assert_eq!(min_filling_rank(2, 1, 1).unwrap(), 3);
        assert_eq!(vcd_pmod(0, 5).unwrap(), 2);
        assert_eq!(vcd_pmod(1, 1).unwrap(), 1);
        assert_eq!(vcd_pmod(2, 0).unwrap(), 3);
        assert_eq!(vcd_pmod(1, 0).unwrap(), 1);
        assert_eq!(maximal_piece_counts(1, 1, 1).unwrap(), (3, 2, 0));
        assert_eq!(maximal_piece_counts(0, 3, 1).unwrap(), (1, 0, 2));
        assert_eq!(maximal_piece_counts(0, 3, 3).unwrap(), (3, 2, 0));
    }

    #[test]
    fn domain_guards() {
        assert!(matches!(spine_dim(0, 2, 1), Err(Error::InvalidSpec { .. })));
        assert!(matches!(arc_complex_dim(1, 1, 0), Err(Error::InvalidSpec { .. })));
        assert!(matches!(min_filling_rank(1, 1, 2), Err(Error::InvalidSpec { .. })));
        assert!(matches!(vcd_pmod(0, 2), Err(Error::OutOfTable { .. })));
        assert!(matches!(gd_pmod(2, 0), Err(Error::OutOfTable { .. })));
        assert_eq!(gd_pmod(1, 1).unwrap(), 1);
    }

    #[test]
    fn identities() {
        for (g, s, m) in valid_specs() {
            let spine = spine_dim(g, s, m).unwrap();
            assert_eq!(spine, arc_complex_dim(g, s, m).unwrap() - min_filling_rank(g, s, m).unwrap());
            let correction = i64::from(m < s);
            assert_eq!(harer_claimed_dim(g, s, m).unwrap(), spine - correction);
            if g >= 1 && s >= 2 && m == 1 {
                assert_eq!(spine, vcd_pmod(g, s).unwrap() + 1);
            }
            let (e, t, k) = maximal_piece_counts(g, s, m).unwrap();
            assert_eq!(3 * t + k, 2 * e);
            assert_eq!(e as i64, arc_complex_dim(g, s, m).unwrap() + 1);
        }
    }
}
