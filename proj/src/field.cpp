#include "carroll/field.hpp"

#include <algorithm>
#include <cmath>

namespace carroll {

void Field2D::validate() const {
    if (values.size() != x_axis.n * t_axis.n) throw DomainError("field size does not match grid");
    for (const auto& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw DomainError("field contains non-finite samples");
        }
    }
}

Field2D Field2D::sample(const Axis& x, const Axis& t,
                        const std::function<cplx(double, double)>& f) {
    Field2D out = zeros(x, t);
    for (std::size_t i = 0; i < x.n; ++i) {
        const double xi = x.at(i);
        for (std::size_t j = 0; j < t.n; ++j) out.at(i, j) = f(xi, t.at(j));
    }
    return out;
}

Field2D Field2D::zeros(const Axis& x, const Axis& t) {
    return {x, t, std::vector<cplx>(x.n * t.n), 0};
}

double interior_norm(const Field2D& f, std::size_t ring) {
    double acc = 0.0;
    for (std::size_t i = ring; i + ring < f.nx(); ++i) {
        for (std::size_t j = ring; j + ring < f.nt(); ++j) acc += std::norm(f.at(i, j));
    }
    return std::sqrt(acc * f.x_axis.step * f.t_axis.step);
}

double interior_max(const Field2D& f, std::size_t ring) {
    double m = 0.0;
    for (std::size_t i = ring; i + ring < f.nx(); ++i) {
        for (std::size_t j = ring; j + ring < f.nt(); ++j) m = std::max(m, std::abs(f.at(i, j)));
    }
    return m;
}

double interior_max(const RealField2D& f, std::size_t ring) {
    double m = 0.0;
    for (std::size_t i = ring; i + ring < f.nx(); ++i) {
        for (std::size_t j = ring; j + ring < f.nt(); ++j) m = std::max(m, std::abs(f.at(i, j)));
    }
    return m;
}

}  // namespace carroll
