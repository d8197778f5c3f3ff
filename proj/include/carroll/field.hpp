#pragma once

#include <functional>
#include <vector>

#include "carroll/numerics.hpp"

namespace carroll {

/// Complex samples of a function of (x, t) on a rectangular grid, stored
/// x-major: values[i * nt + j] is the sample at (x_i, t_j).
///
/// `margin` counts the rings of samples along each edge that are not valid
/// (stencil footprints of the operators that produced the field).
struct Field2D {
    Axis x_axis;
    Axis t_axis;
    std::vector<cplx> values;
    std::size_t margin = 0;

    std::size_t nx() const { return x_axis.n; }
    std::size_t nt() const { return t_axis.n; }
    std::size_t index(std::size_t i, std::size_t j) const { return i * t_axis.n + j; }
    cplx& at(std::size_t i, std::size_t j) { return values[index(i, j)]; }
    const cplx& at(std::size_t i, std::size_t j) const { return values[index(i, j)]; }
    bool valid(std::size_t i, std::size_t j) const {
        return i >= margin && j >= margin && i + margin < nx() && j + margin < nt();
    }

    /// Throws DomainError on shape mismatch or non-finite entries.
    void validate() const;

    static Field2D sample(const Axis& x, const Axis& t,
                          const std::function<cplx(double, double)>& f);
    static Field2D zeros(const Axis& x, const Axis& t);
};

/// Real-valued counterpart, same layout.
struct RealField2D {
    Axis x_axis;
    Axis t_axis;
    std::vector<double> values;
    std::size_t margin = 0;

    std::size_t nx() const { return x_axis.n; }
    std::size_t nt() const { return t_axis.n; }
    double& at(std::size_t i, std::size_t j) { return values[i * t_axis.n + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * t_axis.n + j]; }
};

/// Discrete L2 norm sqrt(dx dt sum |v|^2) over samples at least `ring` away
/// from every edge.
double interior_norm(const Field2D& f, std::size_t ring);

/// Largest |v| over samples at least `ring` away from every edge.
double interior_max(const Field2D& f, std::size_t ring);
double interior_max(const RealField2D& f, std::size_t ring);

}  // namespace carroll
