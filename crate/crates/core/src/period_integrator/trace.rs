use crate::numeric::Complex;

use super::{ContourPath, Hauptmodul, PathKind, PeriodError};

/// Working precision for the geometry of the trace.
const TRACE_PREC: u32 = 96;
const SEED_TOL: f64 = 1e-10;
const NEWTON_TOL: f64 = 1e-13;
const MAX_STEPS: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq)]
struct Pt(f64, f64);

impl Pt {
    fn add(self, o: Pt) -> Pt {
        Pt(self.0 + o.0, self.1 + o.1)
    }
    fn sub(self, o: Pt) -> Pt {
        Pt(self.0 - o.0, self.1 - o.1)
    }
    fn scale(self, k: f64) -> Pt {
        Pt(self.0 * k, self.1 * k)
    }
    fn norm(self) -> f64 {
        self.0.hypot(self.1)
    }
    fn dot(self, o: Pt) -> f64 {
        self.0 * o.0 + self.1 * o.1
    }
    fn of(z: &Complex) -> Pt {
        let (a, b) = z.to_f64();
        Pt(a, b)
    }
    fn big(self) -> Complex {
        Complex::from_f64(self.0, self.1, TRACE_PREC)
    }
}

struct Level {
    h: Hauptmodul,
}

impl Level {
    fn value(&self, p: Pt) -> Result<Complex, PeriodError> {
        if p.1 <= 0.0 {
            return Err(PeriodError::PathBelowRealAxis);
        }
        self.h.eval(&p.big(), TRACE_PREC)
    }

    /// `log |t|`.
    fn g(&self, p: Pt) -> Result<f64, PeriodError> {
        Ok(self.value(p)?.abs().to_f64().ln())
    }

    /// `d/dtau log t` as a vector `(re, im)`, by a central difference of the ratio.
    fn dlog(&self, p: Pt) -> Result<Pt, PeriodError> {
        let e = 1e-6;
        let r = &self.value(p.add(Pt(e, 0.0)))? / &self.value(p.sub(Pt(e, 0.0)))?;
        Ok(Pt::of(&r.ln()).scale(0.5 / e))
    }

    /// Newton steps orthogonal to the level set.
    fn correct(&self, mut p: Pt) -> Result<Pt, PeriodError> {
        for _ in 0..12 {
            let g = self.g(p)?;
            if g.abs() < NEWTON_TOL {
                return Ok(p);
            }
            let d = self.dlog(p)?;
            let n2 = d.dot(d);
            // delta = -g conj(h') / |h'|^2
            p = p.sub(Pt(d.0, -d.1).scale(g / n2));
        }
        let g = self.g(p)?;
        if g.abs() < 1e3 * NEWTON_TOL {
            Ok(p)
        } else {
            Err(PeriodError::TracingStalled(format!("corrector did not converge at {:?} (log|t| = {g:e})", p)))
        }
    }

    /// Unit tangent `i conj(h')`, oriented along `prev`.
    fn tangent(&self, p: Pt, prev: Pt) -> Result<Pt, PeriodError> {
        let d = self.dlog(p)?;
        let t = Pt(d.1, d.0);
        let t = t.scale(1.0 / t.norm());
        Ok(if t.dot(prev) < 0.0 { t.scale(-1.0) } else { t })
    }

    /// First step off the seed into the upper-left quadrant; the seed may be a
    /// double point of the level set, so the branch is located by a sign change on a small arc.
    fn first_step(&self, seed: Pt, step: f64) -> Result<Pt, PeriodError> {
        let at = |th: f64| seed.add(Pt(th.cos(), th.sin()).scale(step));
        let samples = 64;
        let lo = std::f64::consts::FRAC_PI_2;
        let hi = std::f64::consts::PI;
        let mut prev_th = lo;
        let mut prev_g = self.g(at(lo))?;
        for i in 1..=samples {
            let th = lo + (hi - lo) * i as f64 / samples as f64;
            let g = self.g(at(th))?;
            if g.signum() != prev_g.signum() {
                let (mut a, mut b, mut ga) = (prev_th, th, prev_g);
                for _ in 0..60 {
                    let m = 0.5 * (a + b);
                    let gm = self.g(at(m))?;
                    if gm.signum() == ga.signum() {
                        a = m;
                        ga = gm;
                    } else {
                        b = m;
                    }
                }
                return self.correct(at(0.5 * (a + b)));
            }
            prev_th = th;
            prev_g = g;
        }
        Err(PeriodError::TracingStalled("no branch of the level set leaves the seed to the upper left".into()))
    }
}

/// Polyline along `|t(tau)| = 1` from `seed` to its mirror image across `Re tau = axis`,
/// by tangent prediction and Newton correction.
pub fn trace_level_set(h: Hauptmodul, seed: &Complex, step: f64) -> Result<ContourPath, PeriodError> {
    let lv = Level { h };
    let modulus = h.eval(seed, TRACE_PREC)?.abs().to_f64();
    if (modulus - 1.0).abs() > SEED_TOL {
        return Err(PeriodError::SeedNotOnLevelSet { modulus });
    }
    let end = h.mirror(seed);
    let end_pt = Pt::of(&end);
    let s0 = Pt::of(seed);
    let mut nodes = vec![seed.clone()];
    let mut p = lv.first_step(s0, step)?;
    let mut dir = p.sub(s0);
    dir = dir.scale(1.0 / dir.norm());
    for _ in 0..MAX_STEPS {
        nodes.push(p.big());
        if p.sub(end_pt).norm() < 1.5 * step {
            nodes.push(end);
            return Ok(ContourPath { kind: PathKind::LevelSet(h), nodes, orientation: "seed to mirror point, leaving the seed upward to the left".into() });
        }
        if p.0 < end_pt.0 - 2.0 * step {
            return Err(PeriodError::TracingStalled(format!("trace passed Re tau = {} without meeting the mirror point", end_pt.0)));
        }
        dir = lv.tangent(p, dir)?;
        let next = lv.correct(p.add(dir.scale(step)))?;
        dir = next.sub(p).scale(1.0 / next.sub(p).norm());
        p = next;
    }
    Err(PeriodError::TracingStalled(format!("no closure after {MAX_STEPS} steps")))
}
