use serde::Serialize;

use super::{NetworkError, Result};
use crate::scalar::Scalar;

/// Disparity-filter significance of one edge seen from one endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DisparityScore<T> {
    /// Probability of a weight share at least `pi` under the uniform null model.
    pub alpha: T,
    /// Share of the endpoint's strength carried by the edge.
    pub pi: T,
    pub endpoint_degree: usize,
}

/// Significance `alpha = (1 - pi)^(k - 1)` with `pi = weight / total_strength`.
///
/// This is the closed form of `1 - (k-1) ∫₀^pi (1-x)^(k-2) dx`; a degree-1 node
/// gives `alpha = 1`.
pub fn disparity_alpha<T: Scalar>(
    total_strength: T,
    degree: usize,
    weight: T,
) -> Result<DisparityScore<T>> {
    if degree == 0 {
        return Err(NetworkError::ZeroDegree);
    }
    if !(total_strength > T::zero()) || !total_strength.is_finite() {
        return Err(NetworkError::NonPositiveStrength(total_strength.to_f64_lossy()));
    }
    if !(weight > T::zero()) || !weight.is_finite() {
        return Err(NetworkError::NonPositiveWeight(weight.to_f64_lossy()));
    }
    // Strengths are float sums; allow for rounding in the last place.
    let slack = T::one() + T::epsilon() * T::of(16.0);
    if weight > total_strength * slack {
        return Err(NetworkError::WeightExceedsStrength {
            weight: weight.to_f64_lossy(),
            strength: total_strength.to_f64_lossy(),
        });
    }
    let pi = (weight / total_strength).min(T::one());
    let exponent = i32::try_from(degree - 1).unwrap_or(i32::MAX);
    let alpha = (T::one() - pi).powi(exponent);
    Ok(DisparityScore {
        alpha,
        pi,
        endpoint_degree: degree,
    })
}
