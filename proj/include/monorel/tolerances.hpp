#pragma once

namespace monorel {

/**
 * Numeric tolerances threaded through every subspace and quadratic
 * operation.  All rank decisions use a singular-value cutoff relative to
 * max(sigma_max, 1); the absolute floor keeps pure round-off noise from
 * acquiring rank when the true matrix is zero.
 */
struct Tolerances {
    /// Relative singular-value / eigenvalue cutoff for rank decisions.
    double rank = 1e-10;
    /// Slack allowed below zero when certifying a matrix PSD.
    double psd = 1e-9;
    /// Scaled data tolerance for function and report equality.
    double eq = 1e-8;
    /// Orthonormality and symmetry slack accepted on inputs.
    double orth = 1e-12;
};

inline const Tolerances& default_tol() {
    static const Tolerances t{};
    return t;
}

/// Scaled comparison |a - b| <= tol * (1 + max(|a|, |b|)).
inline bool close(double a, double b, double tol) {
    double scale = 1.0;
    double aa = a < 0 ? -a : a;
    double bb = b < 0 ? -b : b;
    if (aa > scale) scale = aa;
    if (bb > scale) scale = bb;
    double d = a - b;
    if (d < 0) d = -d;
    return d <= tol * scale;
}

}  // namespace monorel
