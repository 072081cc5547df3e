#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "recsynth/matrix.hpp"
#include "recsynth/rng.hpp"

namespace recsynth {

/// Standard normal CDF.
inline double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

/// Standard normal quantile function (Wichura's PPND16 rational
/// approximation, absolute error below 1e-15 on (0, 1)).
inline double std_normal_inv_cdf(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("std_normal_inv_cdf: p must lie in (0, 1), got " + std::to_string(p));

    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                     6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                   1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                 1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                     3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                   5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                 4.2313330701600911252e1) * r + 1.0);
    }

    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double x;
    if (r <= 5.0) {
        r -= 1.6;
        x = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
    } else {
        r -= 5.0;
        x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -x : x;
}

/// Quantile of the standard Gumbel distribution exp(-exp(-x)).
inline double gumbel_inv_cdf(double u) {
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("gumbel_inv_cdf: u must lie in (0, 1), got " + std::to_string(u));
    return -std::log(-std::log(u));
}

/// Symmetric positive-definite correlation matrix (unit diagonal).
struct CorrelationMatrix {
    std::size_t dim = 0;
    Matrix entries;

    CorrelationMatrix() = default;
    explicit CorrelationMatrix(Matrix m) : dim(m.rows()), entries(std::move(m)) {}

    static CorrelationMatrix identity(std::size_t d) {
        Matrix m(d, d);
        for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
        return CorrelationMatrix(std::move(m));
    }

    double operator()(std::size_t i, std::size_t j) const { return entries(i, j); }

    /// Checks symmetry, unit diagonal and the [-1, 1] range. Positive
    /// definiteness is established by cholesky_lower itself.
    void validate() const {
        if (dim == 0 || entries.rows() != dim || entries.cols() != dim)
            throw std::invalid_argument("correlation matrix: not square");
        for (std::size_t i = 0; i < dim; ++i) {
            if (std::fabs(entries(i, i) - 1.0) > 1e-12)
                throw std::invalid_argument("correlation matrix: diagonal entry (" +
                                            std::to_string(i) + "," + std::to_string(i) +
                                            ") is not 1");
            for (std::size_t j = 0; j < dim; ++j) {
                double v = entries(i, j);
                if (!(v >= -1.0 && v <= 1.0))
                    throw std::invalid_argument("correlation matrix: entry (" + std::to_string(i) +
                                                "," + std::to_string(j) + ") outside [-1, 1]");
                if (std::fabs(v - entries(j, i)) > 1e-12)
                    throw std::invalid_argument("correlation matrix: asymmetric at (" +
                                                std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
};

/// Lower-triangular Cholesky factor F with F * F^T = P. Rejects matrices
/// whose pivots fall below 1e-12 so configuration mistakes surface as
/// errors rather than as NaNs downstream.
inline Matrix cholesky_lower(const CorrelationMatrix& corr) {
    corr.validate();
    const std::size_t n = corr.dim;
    Matrix f(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = corr(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= f(j, k) * f(j, k);
        if (diag < 1e-12)
            throw std::invalid_argument("cholesky: matrix is not positive definite (pivot " +
                                        std::to_string(j) + " = " + std::to_string(diag) + ")");
        f(j, j) = std::sqrt(diag);
        for (std::size_t i = j + 1; i < n; ++i) {
            double acc = corr(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= f(i, k) * f(j, k);
            f(i, j) = acc / f(j, j);
        }
    }
    return f;
}

namespace detail {

/// Marsaglia-Tsang Gamma(alpha, 1) sampler; normals come from the inverse
/// CDF so the whole chain stays on one uniform stream.
inline double sample_gamma(double alpha, RngStream& rng) {
    if (alpha < 1.0) {
        double boost = std::pow(rng.next_open01(), 1.0 / alpha);
        return sample_gamma(alpha + 1.0, rng) * boost;
    }
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = std_normal_inv_cdf(rng.next_open01());
        double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        double v = t * t * t;
        double u = rng.next_open01();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

}  // namespace detail

/// Draws theta ~ Dirichlet(alpha) via normalized Gamma variates.
inline std::vector<double> dirichlet_sample(std::span<const double> alpha, RngStream& rng) {
    if (alpha.size() < 2)
        throw std::domain_error("dirichlet_sample: need at least 2 concentration parameters");
    std::vector<double> theta(alpha.size());
    double total = 0.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        if (!(alpha[j] > 0.0))
            throw std::domain_error("dirichlet_sample: alpha[" + std::to_string(j) +
                                    "] must be positive");
        theta[j] = detail::sample_gamma(alpha[j], rng);
        total += theta[j];
    }
    for (double& t : theta) t /= total;
    return theta;
}

/// Single categorical draw; returns a 0-based index into theta.
inline std::size_t categorical_sample(std::span<const double> theta, RngStream& rng) {
    double sum = 0.0;
    for (std::size_t j = 0; j < theta.size(); ++j) {
        if (theta[j] < 0.0)
            throw std::domain_error("categorical_sample: negative probability at index " +
                                    std::to_string(j));
        sum += theta[j];
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw std::domain_error("categorical_sample: probabilities sum to " + std::to_string(sum) +
                                ", not 1");
    double u = rng.next_double() * sum;
    double cum = 0.0;
    for (std::size_t j = 0; j + 1 < theta.size(); ++j) {
        cum += theta[j];
        if (u < cum) return j;
    }
    return theta.size() - 1;
}

}  // namespace recsynth
