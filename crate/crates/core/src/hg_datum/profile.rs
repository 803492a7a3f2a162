use super::{frac_part, HGDatum, Rational};

/// The step function `e(x) = #{i : a_i < x} - #{j : b_j not in Z, x >= 1 - b_j}`
/// on `[0, 1)` (entries reduced mod 1), with its extremes, the weight and the
/// Tate twist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EProfile {
    /// points where `e` jumps up (the `a_i`, with multiplicity)
    pub ups: Vec<Rational>,
    /// points where `e` jumps down (the `1 - b_j` for non-integral `b_j`)
    pub downs: Vec<Rational>,
    pub min_e: i64,
    pub max_e: i64,
    /// `w = max_e - min_e`
    pub weight: i64,
    /// `t = -min_e - (n - m)/2`; `None` unless alpha and beta are Galois
    /// stable and `n - m` is even
    pub twist: Option<i64>,
    /// number of integral entries of beta
    pub m: usize,
    pub n: usize,
}

impl EProfile {
    pub fn of(d: &HGDatum) -> Self {
        let mut ups: Vec<Rational> = d.alpha_reduced();
        ups.sort();
        let mut downs: Vec<Rational> =
            d.beta().iter().filter(|b| !b.is_integer()).map(|&b| Rational::from_integer(1) - frac_part(b)).collect();
        downs.sort();
        let eval = |x: Rational| -> i64 {
            ups.iter().filter(|&&a| a < x).count() as i64 - downs.iter().filter(|&&t| x >= t).count() as i64
        };
        let mut pts: Vec<Rational> = ups.iter().chain(&downs).copied().collect();
        pts.push(Rational::from_integer(0));
        pts.sort();
        pts.dedup();
        let mut samples: Vec<Rational> = pts.clone();
        for w in pts.windows(2) {
            samples.push((w[0] + w[1]) / 2);
        }
        samples.push((pts[pts.len() - 1] + Rational::from_integer(1)) / 2);
        let values: Vec<i64> = samples.iter().map(|&x| eval(x)).collect();
        let min_e = *values.iter().min().unwrap();
        let max_e = *values.iter().max().unwrap();
        let n = d.n();
        let m = d.integral_beta_count();
        let twist = if d.is_defined_over_q_as_multisets() && (n - m) % 2 == 0 { Some(-min_e - (n - m) as i64 / 2) } else { None };
        EProfile { ups, downs, min_e, max_e, weight: max_e - min_e, twist, m, n }
    }

    pub fn eval(&self, x: Rational) -> i64 {
        let x = frac_part(x);
        self.ups.iter().filter(|&&a| a < x).count() as i64 - self.downs.iter().filter(|&&t| x >= t).count() as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(alpha: &[(i64, i64)], beta: &[(i64, i64)]) -> HGDatum {
        HGDatum::from_fracs(alpha, beta, Rational::from_integer(1)).unwrap()
    }

    #[test]
    fn quintic_example() {
        let e = EProfile::of(&d(&[(1, 2), (1, 5), (2, 5), (3, 5), (4, 5)], &[(1, 1), (1, 10), (3, 10), (7, 10), (9, 10)]));
        assert_eq!((e.min_e, e.max_e, e.weight, e.twist), (-1, 2, 3, Some(-1)));
    }

    #[test]
    fn hd2_examples() {
        let e = EProfile::of(&d(&[(1, 2), (1, 2), (1, 3), (2, 3)], &[(1, 1), (1, 1), (7, 6), (5, 6)]));
        assert_eq!((e.min_e, e.weight, e.twist), (-1, 4, Some(0)));
        let e = EProfile::of(&d(&[(1, 2), (1, 2), (1, 6), (5, 6)], &[(1, 1), (1, 1), (4, 3), (2, 3)]));
        assert_eq!((e.min_e, e.max_e, e.weight, e.twist), (0, 2, 2, Some(-1)));
    }

    #[test]
    fn twist_undefined_off_q() {
        let e = EProfile::of(&d(&[(1, 3)], &[(1, 1)]));
        assert_eq!(e.twist, None);
    }
}
