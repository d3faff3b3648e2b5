// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#include "segres/operators.hpp"

#include <fftw3.h>

#include <cassert>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace segres {

namespace {

// FFTW planning is not thread-safe; executing cached plans on fresh arrays is.
class FftEngine {
public:
    static FftEngine& instance() {
        static FftEngine engine;
        return engine;
    }

    // In-place c2c transform. Forward is unnormalized; inverse divides by W*H.
    void transform(std::complex<double>* data, int width, int height, bool inverse) {
        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto key = std::make_tuple(width, height, inverse);
            auto it = plans_.find(key);
            if (it == plans_.end()) {
                // FFTW_UNALIGNED lets the cached plan run on any buffer.
                plan = fftw_plan_dft_2d(height, width,
                                        reinterpret_cast<fftw_complex*>(data),
                                        reinterpret_cast<fftw_complex*>(data),
                                        inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
                plans_.emplace(key, plan);
            } else {
                plan = it->second;
            }
        }
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data),
                         reinterpret_cast<fftw_complex*>(data));
        if (inverse) {
            const double scale = 1.0 / (double(width) * height);
            const size_t n = size_t(width) * height;
            for (size_t k = 0; k < n; ++k) data[k] *= scale;
        }
    }

private:
    FftEngine() = default;
    std::mutex mutex_;
    std::map<std::tuple<int, int, bool>, fftw_plan> plans_;
};

void fft2(std::vector<std::complex<double>>& data, int width, int height, bool inverse) {
    FftEngine::instance().transform(data.data(), width, height, inverse);
}

// Kernel embedded into a W x H plane with the anchor at the origin
// (wrapped), i.e. the impulse response of the circular convolution.
std::vector<double> embed_kernel(const Kernel& k, int width, int height) {
    std::vector<double> plane(size_t(width) * height, 0.0);
    for (int ky = 0; ky < k.height(); ++ky) {
        for (int kx = 0; kx < k.width(); ++kx) {
            int ox = ((kx - k.anchor_x()) % width + width) % width;
            int oy = ((ky - k.anchor_y()) % height + height) % height;
            plane[oy * width + ox] += k.at(kx, ky);
        }
    }
    return plane;
}

std::vector<std::complex<double>> kernel_symbol(const Kernel& k, int width, int height) {
    auto embedded = embed_kernel(k, width, height);
    std::vector<std::complex<double>> spec(embedded.begin(), embedded.end());
    fft2(spec, width, height, false);
    return spec;
}

// Direct spatial circular convolution; bitwise deterministic, used for
// small kernels and as the adjoint's mirror path.
std::vector<double> convolve_direct(std::span<const double> plane, int width, int height,
                                    const Kernel& k, bool adjoint) {
    std::vector<double> out(size_t(width) * height, 0.0);
    const int ax = k.anchor_x(), ay = k.anchor_y();
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int ky = 0; ky < k.height(); ++ky) {
                for (int kx = 0; kx < k.width(); ++kx) {
                    int dx = kx - ax, dy = ky - ay;
                    if (adjoint) { dx = -dx; dy = -dy; }
                    int sx = ((x - dx) % width + width) % width;
                    int sy = ((y - dy) % height + height) % height;
                    acc += k.at(kx, ky) * plane[sy * width + sx];
                }
            }
            out[y * width + x] = acc;
        }
    }
    return out;
}

std::vector<double> convolve_fft(std::span<const double> plane, int width, int height,
                                 const Kernel& k, bool adjoint) {
    auto symbol = kernel_symbol(k, width, height);
    std::vector<std::complex<double>> spec(plane.begin(), plane.end());
    fft2(spec, width, height, false);
    const size_t n = spec.size();
    for (size_t i = 0; i < n; ++i)
        spec[i] *= adjoint ? std::conj(symbol[i]) : symbol[i];
    fft2(spec, width, height, true);
    std::vector<double> out(n);
    for (size_t i = 0; i < n; ++i) out[i] = spec[i].real();
    return out;
}

constexpr int kDirectConvTapLimit = 81;  // beyond this, FFT wins

std::vector<double> convolve(std::span<const double> plane, int width, int height,
                             const Kernel& k, bool adjoint) {
    if (k.width() > width || k.height() > height)
        throw std::invalid_argument("convolution: kernel larger than plane");
    if (k.width() * k.height() <= kDirectConvTapLimit)
        return convolve_direct(plane, width, height, k, adjoint);
    return convolve_fft(plane, width, height, k, adjoint);
}

}  // namespace

GradientField grad(std::span<const double> plane, int width, int height) {
    if (width < 2 || height < 2)
        throw std::invalid_argument("grad: plane dimensions must be at least 2x2");
    if (plane.size() != size_t(width) * height)
        throw std::invalid_argument("grad: plane size mismatch");
    GradientField g;
    g.width = width;
    g.height = height;
    g.dx.resize(plane.size());
    g.dy.resize(plane.size());
    for (int y = 0; y < height; ++y) {
        const int yn = (y + 1 == height) ? 0 : y + 1;
        for (int x = 0; x < width; ++x) {
            const int xn = (x + 1 == width) ? 0 : x + 1;
            const size_t i = size_t(y) * width + x;
            g.dx[i] = plane[y * width + xn] - plane[i];
            g.dy[i] = plane[yn * width + x] - plane[i];
        }
    }
    return g;
}

std::vector<double> divergence(const GradientField& g) {
    const int width = g.width, height = g.height;
    std::vector<double> out(size_t(width) * height);
    for (int y = 0; y < height; ++y) {
        const int yp = (y == 0) ? height - 1 : y - 1;
        for (int x = 0; x < width; ++x) {
            const int xp = (x == 0) ? width - 1 : x - 1;
            const size_t i = size_t(y) * width + x;
            out[i] = g.dx[i] - g.dx[y * width + xp] + g.dy[i] - g.dy[yp * width + x];
        }
    }
    return out;
}

LinearOperator LinearOperator::identity() { return LinearOperator(); }

LinearOperator LinearOperator::convolution(Kernel kernel) {
    LinearOperator op;
    op.kernel_ = std::move(kernel);
    return op;
}

std::vector<double> LinearOperator::apply(std::span<const double> plane, int width,
                                          int height) const {
    if (is_identity()) return {plane.begin(), plane.end()};
    return convolve(plane, width, height, *kernel_, false);
}

std::vector<double> LinearOperator::apply_adjoint(std::span<const double> plane, int width,
                                                  int height) const {
    if (is_identity()) return {plane.begin(), plane.end()};
    return convolve(plane, width, height, *kernel_, true);
}

std::vector<double> solve_spectral(double a0, double a1, SpectralOp op, const Kernel* kernel,
                                   std::span<const double> rhs, int width, int height) {
    if (rhs.size() != size_t(width) * height)
        throw std::invalid_argument("solve_spectral: rhs size mismatch");
    if (op == SpectralOp::Convolution && kernel == nullptr)
        throw std::invalid_argument("solve_spectral: convolution needs a kernel");

    const size_t n = rhs.size();
    std::vector<double> sym2(n, 1.0);  // |O_hat|^2 per frequency
    switch (op) {
        case SpectralOp::Identity:
            break;
        case SpectralOp::Convolution: {
            auto symbol = kernel_symbol(*kernel, width, height);
            for (size_t i = 0; i < n; ++i) sym2[i] = std::norm(symbol[i]);
            break;
        }
        case SpectralOp::Laplacian: {
            // |grad symbol|^2 = 4 - 2cos(2 pi wx / W) - 2cos(2 pi wy / H)
            for (int wy = 0; wy < height; ++wy) {
                const double cy = std::cos(2.0 * std::numbers::pi * wy / height);
                for (int wx = 0; wx < width; ++wx) {
                    const double cx = std::cos(2.0 * std::numbers::pi * wx / width);
                    sym2[size_t(wy) * width + wx] = 4.0 - 2.0 * cx - 2.0 * cy;
                }
            }
            break;
        }
    }

    std::vector<std::complex<double>> spec(rhs.begin(), rhs.end());
    fft2(spec, width, height, false);
    for (size_t i = 0; i < n; ++i) {
        const double denom = a0 * sym2[i] + a1;
        if (!(denom > 0.0))
            throw std::domain_error("solve_spectral: singular system (non-positive symbol)");
        spec[i] /= denom;
    }
    fft2(spec, width, height, true);
    std::vector<double> x(n);
    for (size_t i = 0; i < n; ++i) x[i] = spec[i].real();

#ifndef NDEBUG
    // Residual bound contract, checked spatially where that is cheap.
    if (op == SpectralOp::Laplacian ||
        (op == SpectralOp::Convolution && kernel->width() * kernel->height() <= 49) ||
        op == SpectralOp::Identity) {
        std::vector<double> ox;
        if (op == SpectralOp::Laplacian) {
            ox = divergence(grad(x, width, height));
            for (auto& v : ox) v = -v;
        } else if (op == SpectralOp::Convolution) {
            auto ax = convolve_direct(x, width, height, *kernel, false);
            ox = convolve_direct(ax, width, height, *kernel, true);
        } else {
            ox = x;
        }
        double rmax = 0.0, bmax = 0.0;
        for (size_t i = 0; i < n; ++i) {
            rmax = std::max(rmax, std::abs(a0 * ox[i] + a1 * x[i] - rhs[i]));
            bmax = std::max(bmax, std::abs(rhs[i]));
        }
        assert(rmax <= 1e-8 * std::max(bmax, 1e-300));
    }
#endif
    return x;
}

CgResult solve_cg(const MatVec& matvec, const std::vector<double>& rhs, double tol,
                  int max_iter, const std::vector<double>* x0) {
    const size_t n = rhs.size();
    CgResult result;
    result.x.assign(n, 0.0);
    if (x0) {
        if (x0->size() != n) throw std::invalid_argument("solve_cg: x0 size mismatch");
        result.x = *x0;
    }

    auto dot = [n](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += a[i] * b[i];
        return s;
    };

    double rhs_norm = std::sqrt(dot(rhs, rhs));
    if (rhs_norm == 0.0) {
        result.converged = true;
        result.x.assign(n, 0.0);
        return result;
    }

    std::vector<double> r(n), p(n), ap(n);
    matvec(result.x, ap);
    for (size_t i = 0; i < n; ++i) r[i] = rhs[i] - ap[i];
    p = r;
    double rr = dot(r, r);

    for (int it = 0; it < max_iter; ++it) {
        if (std::sqrt(rr) <= tol * rhs_norm) {
            result.converged = true;
            break;
        }
        matvec(p, ap);
        const double pap = dot(p, ap);
        if (!(pap > 0.0)) break;  // matrix not SPD along p; stop with the best iterate
        const double alpha = rr / pap;
        for (size_t i = 0; i < n; ++i) {
            result.x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        const double rr_new = dot(r, r);
        const double beta = rr_new / rr;
        rr = rr_new;
        for (size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
        ++result.iterations;
    }
    result.relative_residual = std::sqrt(rr) / rhs_norm;
    result.converged = result.relative_residual <= tol;
    return result;
}

}  // namespace segres
