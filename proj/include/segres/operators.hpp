// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#ifndef SEGRES_OPERATORS_HPP
#define SEGRES_OPERATORS_HPP

#include <functional>
#include <span>
#include <vector>

#include "segres/core.hpp"

namespace segres {

/// Per-pixel forward-difference 2-vectors (dx, dy) of one scalar plane.
struct GradientField {
    int width = 0, height = 0;
    std::vector<double> dx, dy;
};

/// Forward differences with periodic wrap:
///   dx(x,y) = p(x+1 mod W, y) - p(x,y),  dy(x,y) = p(x, y+1 mod H) - p(x,y).
GradientField grad(std::span<const double> plane, int width, int height);

/// Exact negative adjoint of grad (backward differences, periodic), so
/// <grad p, q> = -<p, divergence q> holds identically.
std::vector<double> divergence(const GradientField& g);

/// Identity or periodic circular convolution with a normalized kernel.
/// Adjoint is convolution with the 180-degree rotated kernel.
class LinearOperator {
public:
    static LinearOperator identity();
    static LinearOperator convolution(Kernel kernel);

    bool is_identity() const { return !kernel_.has_value(); }
    const Kernel* kernel() const { return kernel_ ? &*kernel_ : nullptr; }

    std::vector<double> apply(std::span<const double> plane, int width, int height) const;
    std::vector<double> apply_adjoint(std::span<const double> plane, int width, int height) const;

private:
    LinearOperator() = default;
    std::optional<Kernel> kernel_;
};

enum class SpectralOp { Identity, Convolution, Laplacian };

/// Solves (a0 * O^T O + a1 * I) x = rhs for operators diagonalized by the 2-D
/// DFT: O = I, periodic convolution, or the forward-difference gradient
/// (O^T O is then the negated periodic 5-point Laplacian).  Throws
/// std::domain_error if the symbol a0*|O_hat|^2 + a1 is not strictly positive
/// at every frequency.  `kernel` is required iff op == Convolution.
std::vector<double> solve_spectral(double a0, double a1, SpectralOp op, const Kernel* kernel,
                                   std::span<const double> rhs, int width, int height);

using MatVec = std::function<void(const std::vector<double>&, std::vector<double>&)>;

struct CgResult {
    std::vector<double> x;
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

/// Plain conjugate gradients for symmetric positive (semi-)definite matvecs.
/// Stops when ||matvec(x) - rhs||_2 <= tol * ||rhs||_2 or after max_iter
/// steps; the final residual is reported either way.
CgResult solve_cg(const MatVec& matvec, const std::vector<double>& rhs, double tol,
                  int max_iter, const std::vector<double>* x0 = nullptr);

}  // namespace segres

#endif  // SEGRES_OPERATORS_HPP
