#pragma once
#include <cmath>
#include <string>

#include "onesided/errors.hpp"

namespace onesided {

enum class LinkKind { Identity, Logistic };

// A generalized linear model link: mu is strictly increasing with 0 < mu'(z) <= L
// everywhere and mu(0) <= mu_at_zero_bound.
struct LinkSpec {
    LinkKind kind = LinkKind::Identity;
    double lipschitz = 1.0;        // L
    double mu_at_zero_bound = 0.0; // gamma

    static LinkSpec identity() { return LinkSpec{LinkKind::Identity, 1.0, 0.0}; }
    static LinkSpec logistic() { return LinkSpec{LinkKind::Logistic, 0.25, 0.5}; }
    const char* name() const { return kind == LinkKind::Identity ? "identity" : "logistic"; }
};

inline double stable_sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

inline double link_eval(const LinkSpec& link, double z) {
    return link.kind == LinkKind::Identity ? z : stable_sigmoid(z);
}

inline double link_deriv(const LinkSpec& link, double z) {
    if (link.kind == LinkKind::Identity) return 1.0;
    const double m = stable_sigmoid(z);
    return m * (1.0 - m);
}

inline double link_inverse(const LinkSpec& link, double y) {
    if (link.kind == LinkKind::Identity) return y;
    if (!(y > 0.0 && y < 1.0)) {
        throw DomainError("link_inverse: logistic inverse requires 0 < y < 1, got " +
                          std::to_string(y));
    }
    return std::log(y / (1.0 - y));
}

// Smallest value of mu' on [-B*M, B*M]; every score x^T beta with ||x|| <= B,
// ||beta|| <= M lands in that interval. For the logistic link the minimum sits
// at the endpoints since sigma' is even and unimodal.
inline double compute_eta(const LinkSpec& link, double covariate_bound, double norm_bound) {
    if (link.kind == LinkKind::Identity) return 1.0;
    return link_deriv(link, covariate_bound * norm_bound);
}

}  // namespace onesided
