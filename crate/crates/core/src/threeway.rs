//! Three-way decisions: the distance-based accept / hesitate / reject rule
//! used when agents screen their neighbours, and the Bayesian minimum-loss
//! classifier over a 3×2 loss table.

use rand::Rng;

use crate::rng::uniform;
use crate::{Error, Result};

/// Acceptance regions over opinion distance `d`:
/// `d <= alpha` accept, `d >= beta` reject, otherwise accept with
/// probability `exp(-lambda (d - alpha))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeWayThresholds {
    alpha: f64,
    beta: f64,
    lambda: f64,
}

impl ThreeWayThresholds {
    /// `alpha == beta` is allowed and yields an empty hesitation zone.
    pub fn new(alpha: f64, beta: f64, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) || alpha > beta {
            return Err(Error::ThresholdOrder { alpha, beta });
        }
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidDecay(lambda));
        }
        Ok(Self {
            alpha,
            beta,
            lambda,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// True when `distance` falls strictly inside the hesitation zone.
    pub fn hesitates(&self, distance: f64) -> bool {
        distance > self.alpha && distance < self.beta
    }
}

fn check_distance(distance: f64) -> Result<()> {
    if distance.is_nan() || distance < 0.0 {
        return Err(Error::InvalidDistance(distance));
    }
    Ok(())
}

pub fn acceptance_probability(distance: f64, thresholds: &ThreeWayThresholds) -> Result<f64> {
    check_distance(distance)?;
    // The accept test comes first so that alpha == beta accepts at the boundary.
    Ok(if distance <= thresholds.alpha {
        1.0
    } else if distance >= thresholds.beta {
        0.0
    } else {
        libm::exp(-thresholds.lambda * (distance - thresholds.alpha))
    })
}

/// Decides whether a neighbour at `distance` is accepted. Draws from `rng`
/// exactly once, and only inside the hesitation zone.
pub fn classify_neighbor<R: Rng + ?Sized>(
    distance: f64,
    thresholds: &ThreeWayThresholds,
    rng: &mut R,
) -> Result<bool> {
    let p = acceptance_probability(distance, thresholds)?;
    Ok(if thresholds.hesitates(distance) {
        uniform(rng) < p
    } else {
        p == 1.0
    })
}

/// Losses for taking action accept (A), defer (D) or reject (R) when the
/// object is in the good state C (`*_p`) or in ¬C (`*_n`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossMatrix {
    pub accept_p: f64,
    pub defer_p: f64,
    pub reject_p: f64,
    pub accept_n: f64,
    pub defer_n: f64,
    pub reject_n: f64,
}

impl LossMatrix {
    pub fn new(
        accept_p: f64,
        defer_p: f64,
        reject_p: f64,
        accept_n: f64,
        defer_n: f64,
        reject_n: f64,
    ) -> Result<Self> {
        let m = Self {
            accept_p,
            defer_p,
            reject_p,
            accept_n,
            defer_n,
            reject_n,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let entries = [
            ("lambda_AP", self.accept_p),
            ("lambda_DP", self.defer_p),
            ("lambda_RP", self.reject_p),
            ("lambda_AN", self.accept_n),
            ("lambda_DN", self.defer_n),
            ("lambda_RN", self.reject_n),
        ];
        for (name, value) in entries {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidLoss { name, value });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThreeWayRegion {
    Positive,
    Boundary,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectedLosses {
    pub accept: f64,
    pub defer: f64,
    pub reject: f64,
}

pub fn expected_losses(loss: &LossMatrix, pr_c: f64) -> Result<ExpectedLosses> {
    loss.validate()?;
    if !(0.0..=1.0).contains(&pr_c) {
        return Err(Error::ProbabilityOutOfRange {
            name: "pr_c",
            value: pr_c,
        });
    }
    let q = 1.0 - pr_c;
    Ok(ExpectedLosses {
        accept: loss.accept_p * pr_c + loss.accept_n * q,
        defer: loss.defer_p * pr_c + loss.defer_n * q,
        reject: loss.reject_p * pr_c + loss.reject_n * q,
    })
}

/// Minimum expected-loss region; ties resolve Positive, then Boundary, then
/// Negative.
pub fn bayes_region(loss: &LossMatrix, pr_c: f64) -> Result<ThreeWayRegion> {
    let r = expected_losses(loss, pr_c)?;
    Ok(if r.accept <= r.defer && r.accept <= r.reject {
        ThreeWayRegion::Positive
    } else if r.defer <= r.reject {
        ThreeWayRegion::Boundary
    } else {
        ThreeWayRegion::Negative
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn th(alpha: f64, beta: f64, lambda: f64) -> ThreeWayThresholds {
        ThreeWayThresholds::new(alpha, beta, lambda).unwrap()
    }

    fn table() -> LossMatrix {
        LossMatrix::new(0.0, 2.0, 6.0, 6.0, 2.0, 0.0).unwrap()
    }

    #[test]
    fn threshold_validation() {
        assert!(ThreeWayThresholds::new(0.7, 0.6, 10.0).is_err());
        assert!(ThreeWayThresholds::new(0.6, 0.6, 10.0).is_ok());
        assert!(ThreeWayThresholds::new(-0.1, 0.6, 10.0).is_err());
        assert!(ThreeWayThresholds::new(0.3, 1.1, 10.0).is_err());
        assert_eq!(
            ThreeWayThresholds::new(0.3, 0.6, -1.0),
            Err(Error::InvalidDecay(-1.0))
        );
    }

    #[test]
    fn acceptance_probability_examples() {
        let t = th(0.3, 0.6, 10.0);
        assert_eq!(acceptance_probability(0.3, &t), Ok(1.0));
        // exp(-1) from the series sum, independent of libm.
        let e_inv: f64 = (0..30)
            .map(|k| {
                let fact: f64 = (1..=k).map(f64::from).product();
                (-1.0f64).powi(k) / fact
            })
            .sum();
        assert!((acceptance_probability(0.4, &t).unwrap() - e_inv).abs() < 1e-12);
        assert_eq!(acceptance_probability(0.6, &t), Ok(0.0));
        assert!(acceptance_probability(-0.1, &t).is_err());
        assert!(acceptance_probability(f64::NAN, &t).is_err());
    }

    #[test]
    fn degenerate_zone_accepts_at_shared_boundary() {
        let t = th(0.6, 0.6, 10.0);
        assert_eq!(acceptance_probability(0.6, &t), Ok(1.0));
        assert!(classify_neighbor(0.6, &t, &mut seeded(0)).unwrap());
        assert_eq!(acceptance_probability(0.6000001, &t), Ok(0.0));
    }

    #[test]
    fn classify_certain_regions_consume_no_draws() {
        let t = th(0.3, 0.6, 10.0);
        let mut rng = seeded(11);
        assert!(classify_neighbor(0.1, &t, &mut rng).unwrap());
        assert!(!classify_neighbor(0.9, &t, &mut rng).unwrap());
        let mut fresh = seeded(11);
        assert_eq!(uniform(&mut rng), uniform(&mut fresh));
    }

    #[test]
    fn classify_zero_decay_always_accepts_in_zone() {
        let t = th(0.3, 0.6, 0.0);
        let mut rng = seeded(4);
        assert!((0..200).all(|_| classify_neighbor(0.45, &t, &mut rng).unwrap()));
    }

    #[test]
    fn expected_losses_examples() {
        let r = expected_losses(&table(), 0.8).unwrap();
        assert!((r.accept - 1.2).abs() < 1e-12);
        assert!((r.defer - 2.0).abs() < 1e-12);
        assert!((r.reject - 4.8).abs() < 1e-12);
        let r = expected_losses(&table(), 1.0).unwrap();
        assert_eq!((r.accept, r.defer, r.reject), (0.0, 2.0, 6.0));
        let r = expected_losses(&table(), 0.0).unwrap();
        assert_eq!((r.accept, r.defer, r.reject), (6.0, 2.0, 0.0));
        assert!(expected_losses(&table(), 1.5).is_err());
    }

    #[test]
    fn bayes_region_examples() {
        assert_eq!(bayes_region(&table(), 0.8), Ok(ThreeWayRegion::Positive));
        assert_eq!(bayes_region(&table(), 0.5), Ok(ThreeWayRegion::Boundary));
        assert_eq!(bayes_region(&table(), 0.0), Ok(ThreeWayRegion::Negative));
    }

    #[test]
    fn bayes_region_tie_precedence() {
        let flat = LossMatrix::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(bayes_region(&flat, 0.3), Ok(ThreeWayRegion::Positive));
        let dr = LossMatrix::new(5.0, 1.0, 1.0, 5.0, 1.0, 1.0).unwrap();
        assert_eq!(bayes_region(&dr, 0.3), Ok(ThreeWayRegion::Boundary));
    }

    #[test]
    fn loss_validation() {
        assert_eq!(
            LossMatrix::new(0.0, -2.0, 6.0, 6.0, 2.0, 0.0),
            Err(Error::InvalidLoss {
                name: "lambda_DP",
                value: -2.0
            })
        );
    }
}
