use std::fmt;
use std::sync::Arc;

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Coefficients of the CDF transport equation: flux derivative and source.
#[derive(Clone)]
pub struct PhysicsModel {
    pub qdot: ScalarFn,
    pub r: ScalarFn,
    pub rdot: ScalarFn,
    theta_r: Option<f64>,
}

impl PhysicsModel {
    /// `q(u) = u`, `r(u) = theta_r * u`.
    pub fn linear(theta_r: f64) -> Self {
        Self {
            qdot: Arc::new(|_| 1.0),
            r: Arc::new(move |u| theta_r * u),
            rdot: Arc::new(move |_| theta_r),
            theta_r: Some(theta_r),
        }
    }

    /// General smooth dynamics, always traced numerically.
    pub fn nonlinear(qdot: ScalarFn, r: ScalarFn, rdot: ScalarFn) -> Self {
        Self {
            qdot,
            r,
            rdot,
            theta_r: None,
        }
    }

    pub fn is_linear(&self) -> bool {
        self.theta_r.is_some()
    }

    /// Source coefficient of a linear model.
    pub fn theta_r(&self) -> Option<f64> {
        self.theta_r
    }
}

impl fmt::Debug for PhysicsModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.theta_r {
            Some(th) => write!(f, "PhysicsModel::linear({th})"),
            None => f.write_str("PhysicsModel::nonlinear(..)"),
        }
    }
}
