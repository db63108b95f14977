#include "filmspec/params.hpp"

#include <cmath>
#include <string>

#include "filmspec/errors.hpp"

namespace filmspec {

void require_subcritical(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 2.0)) {
        throw ConfigError("epsilon must satisfy 0 < eps < 2, got " + std::to_string(epsilon));
    }
}

Params::Params(double epsilon, double lambda) : epsilon_(epsilon), lambda_(lambda) {
    require_subcritical(epsilon);
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw ConfigError("lambda must be finite and >= 0, got " + std::to_string(lambda));
    }
}

Params Params::unchecked(double epsilon, double lambda) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon) || !std::isfinite(lambda)) {
        throw ConfigError("epsilon must be positive and finite");
    }
    return Params(epsilon, lambda, Unchecked{});
}

Exponents Params::exponents() const noexcept {
    const double inv = 1.0 / epsilon_;
    const double k = 1.0 + lambda_ / epsilon_;
    return Exponents{-1.0 + inv, 1.0 + inv, k, k};
}

Params Params::with_lambda(double lambda) const {
    if (epsilon_ > 0.0 && epsilon_ < 2.0) {
        return Params(epsilon_, lambda);
    }
    return unchecked(epsilon_, lambda);
}

}  // namespace filmspec
