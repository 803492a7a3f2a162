use super::{lcd, DatumError, HGDatum, Rational};

/// The seven unordered pairs `(c, f)` for which `HD1(c, f)` is primitive and
/// defined over Q, in table order.
pub const SEVEN_PAIRS: [((i64, i64), (i64, i64)); 7] = [
    ((1, 2), (1, 2)),
    ((1, 2), (1, 3)),
    ((1, 2), (1, 6)),
    ((1, 3), (1, 3)),
    ((1, 6), (1, 6)),
    ((1, 5), (2, 5)),
    ((1, 10), (3, 10)),
];

/// The data attached to a Whipple pair `(c, f)`, all with `lambda = 1`.
#[derive(Clone, Debug)]
pub struct WhippleFamily {
    pub c: Rational,
    pub f: Rational,
    /// `{1/2, c, 1-c, 1/2, f, 1-f}; {1, 3/2-c, 1/2+c, 1, 3/2-f, 1/2+f}`
    pub hd1: HGDatum,
    /// `{1/2, 1/2, f, 1-f}; {1, 1, 3/2-c, 1/2+c}`
    pub hd2: HGDatum,
    /// `{1/2, f, 1-f}; {1, 3/2-c, 1/2+c}`
    pub hd3: HGDatum,
    /// `{(1+2f-2c)/4, (3-2f-2c)/4}`
    pub alpha2: Vec<Rational>,
    /// `{1, 3/2-c}`
    pub beta2: Vec<Rational>,
    /// `M(c, f)`, the lcd of the `HD1` entries
    pub m: u32,
    /// `N(c, f)`, the lcd of `alpha2` and `beta2`
    pub n: u32,
    /// whether `(c, f)` is one of [`SEVEN_PAIRS`] up to order
    pub in_table: bool,
}

pub fn whipple_family(c: Rational, f: Rational) -> Result<WhippleFamily, DatumError> {
    let one = Rational::from_integer(1);
    let half = Rational::new(1, 2);
    let three_half = Rational::new(3, 2);
    let hd1 = HGDatum::new(
        vec![half, c, one - c, half, f, one - f],
        vec![one, three_half - c, half + c, one, three_half - f, half + f],
        one,
    )?;
    let hd2 = HGDatum::new(vec![half, half, f, one - f], vec![one, one, three_half - c, half + c], one)?;
    let hd3 = HGDatum::new(vec![half, f, one - f], vec![one, three_half - c, half + c], one)?;
    let four = Rational::from_integer(4);
    let two = Rational::from_integer(2);
    let alpha2 = vec![(one + two * f - two * c) / four, (Rational::from_integer(3) - two * f - two * c) / four];
    let beta2 = vec![one, three_half - c];
    let m = hd1.lcd();
    let n = lcd(alpha2.iter().chain(beta2.iter()));
    let key = |x: Rational| (*x.numer(), *x.denom());
    let in_table = SEVEN_PAIRS.iter().any(|&(a, b)| (a, b) == (key(c), key(f)) || (b, a) == (key(c), key(f)));
    Ok(WhippleFamily { c, f, hd1, hd2, hd3, alpha2, beta2, m, n, in_table })
}

impl WhippleFamily {
    pub fn seven() -> Vec<WhippleFamily> {
        SEVEN_PAIRS
            .iter()
            .map(|&((a, b), (c, d))| whipple_family(Rational::new(a, b), Rational::new(c, d)).unwrap())
            .collect()
    }

    pub fn label(&self) -> String {
        format!("({},{})", self.c, self.f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_half() {
        let w = whipple_family(Rational::new(1, 2), Rational::new(1, 2)).unwrap();
        assert!(w.hd1.alpha().iter().all(|&a| a == Rational::new(1, 2)));
        assert!(w.hd1.beta().iter().all(|&b| b == Rational::from_integer(1)));
        assert_eq!((w.m, w.n), (2, 4));
        let p = w.hd1.orbit_predicates();
        assert!(p.is_primitive && p.is_self_dual && p.is_defined_over_q);
    }

    #[test]
    fn n_equals_two_m_except_one_pair() {
        for w in WhippleFamily::seven() {
            if (w.c, w.f) == (Rational::new(1, 2), Rational::new(1, 3)) {
                assert_eq!(w.n, w.m);
            } else {
                assert_eq!(w.n, 2 * w.m, "{}", w.label());
            }
        }
    }

    #[test]
    fn tenths() {
        let w = whipple_family(Rational::new(1, 10), Rational::new(3, 10)).unwrap();
        assert_eq!((w.m, w.n), (10, 20));
        let p = w.hd2.orbit_predicates();
        assert!(p.is_primitive && p.is_self_dual && !p.is_defined_over_q);
        assert!(w.hd1.is_defined_over_q());
    }
}
