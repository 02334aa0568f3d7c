#include "nemadyn/model.hpp"

#include <cmath>

namespace nemadyn {

namespace {

bool all_finite(std::initializer_list<double> vs) {
    for (double v : vs)
        if (!std::isfinite(v)) return false;
    return true;
}

} // namespace

void State::validate() const {
    if (!all_finite({x, y})) throw InvalidInputError("state has non-finite coordinates");
    if (x < 0.0 || y < 0.0) throw InvalidInputError("state outside the first quadrant");
}

void OriginalParams::validate() const {
    if (!all_finite({r, k, c, m, u})) throw InvalidInputError("non-finite model parameter");
    if (!(r > 0.0) || !(c > 0.0) || !(m > 0.0))
        throw InvalidInputError("rates r, c, m must be positive");
    if (k < 0.0 || u < 0.0) throw InvalidInputError("k and u must be nonnegative");
}

void NormalizedParams::validate() const {
    if (!all_finite({k, m, u})) throw InvalidInputError("non-finite model parameter");
    if (!(m > 0.0)) throw InvalidInputError("death rate m must be positive");
    if (k < 0.0 || u < 0.0) throw InvalidInputError("k and u must be nonnegative");
}

std::pair<std::complex<double>, std::complex<double>> Jacobian2::eigenvalues() const {
    const double tr = trace();
    const double disc = discriminant();
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        return {std::complex<double>((tr + s) / 2.0, 0.0),
                std::complex<double>((tr - s) / 2.0, 0.0)};
    }
    const double s = std::sqrt(-disc);
    return {std::complex<double>(tr / 2.0, s / 2.0), std::complex<double>(tr / 2.0, -s / 2.0)};
}

Deriv vector_field(const OriginalParams& p, const State& s) {
    p.validate();
    if (!all_finite({s.x, s.y})) throw InvalidInputError("non-finite state");
    return vector_field_unchecked(p, s);
}

Deriv vector_field(const NormalizedParams& p, const State& s) {
    p.validate();
    if (!all_finite({s.x, s.y})) throw InvalidInputError("non-finite state");
    return vector_field_unchecked(p, s);
}

Jacobian2 jacobian(const OriginalParams& p, const State& s) {
    p.validate();
    if (!all_finite({s.x, s.y})) throw InvalidInputError("non-finite state");
    const double w = 1.0 + p.k * s.y;
    return {p.r / w - p.c * s.y, -p.r * p.k * s.x / (w * w) - p.c * s.x,
            p.c * s.y * s.y, 2.0 * p.c * s.x * s.y - p.m};
}

Jacobian2 jacobian(const NormalizedParams& p, const State& s) {
    p.validate();
    if (!all_finite({s.x, s.y})) throw InvalidInputError("non-finite state");
    const double w = 1.0 + p.k * s.y;
    return {1.0 / w - s.y, -p.k * s.x / (w * w) - s.x,
            s.y * s.y, 2.0 * s.x * s.y - p.m};
}

std::pair<NormalizedParams, ScaleMap> nondimensionalize(const OriginalParams& p) {
    p.validate();
    NormalizedParams n{p.k * p.r / p.c, p.m / p.r, p.c * p.u / (p.r * p.r)};
    ScaleMap sm{p.c / p.r, p.r};
    return {n, sm};
}

OriginalParams dimensionalize(const NormalizedParams& p, const ScaleMap& sm) {
    p.validate();
    if (!all_finite({sm.y_scale, sm.t_scale}) || !(sm.y_scale > 0.0) || !(sm.t_scale > 0.0))
        throw InvalidInputError("scale map factors must be positive and finite");
    const double r = sm.t_scale;
    const double c = sm.y_scale * r;
    return {r, p.k * sm.y_scale, c, p.m * r, p.u * sm.t_scale / sm.y_scale};
}

} // namespace nemadyn
