#include "degenhj/kernel.hpp"

#include "degenhj/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace degenhj {

namespace {

void require_2d(const ConfigPoint& x, const char* op) {
    if (x.dim() != 2) {
        throw Error(ErrorCode::Dimension, std::string(op) + " needs N = 2, got N = " + std::to_string(x.dim()));
    }
}

double off_diagonal_gap(const ConfigPoint& x, const char* op) {
    require_2d(x, op);
    const double gap = std::abs(x[0] - x[1]);
    if (gap < kDegeneracyFloor) {
        throw Error(ErrorCode::DegeneratePoint,
                    std::string(op) + ": |x1 - x2| = " + std::to_string(gap) + " is below the degeneracy floor");
    }
    return gap;
}

}  // namespace

ConfigPoint::ConfigPoint(Vector coords) : coords_(std::move(coords)) {
    if (coords_.size() < 1) {
        throw Error(ErrorCode::InvalidInput, "a configuration point needs at least one coordinate");
    }
    if (!coords_.allFinite()) {
        throw Error(ErrorCode::InvalidInput, "configuration point has a non-finite coordinate");
    }
}

ConfigPoint::ConfigPoint(std::initializer_list<double> coords)
    : ConfigPoint(Vector::Map(coords.begin(), static_cast<Eigen::Index>(coords.size()))) {}

KernelMatrix kernel_matrix(const ConfigPoint& x) {
    const auto n = static_cast<Eigen::Index>(x.dim());
    Matrix e(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        e(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = std::exp(-std::abs(x.coords()(i) - x.coords()(j)));
            e(i, j) = v;
            e(j, i) = v;
        }
    }
    return {std::move(e), x};
}

namespace kernel2d {

SqrtEntries sqrt_entries(double gap) noexcept {
    const double zeta = std::exp(-gap);
    // 1 - zeta via expm1 keeps sqrt(1 - zeta) accurate right next to the diagonal.
    const double plus = std::sqrt(1.0 + zeta);
    const double minus = std::sqrt(-std::expm1(-gap));
    return {0.5 * (plus + minus), 0.5 * (plus - minus)};
}

}  // namespace kernel2d

SqrtKernel sqrt_kernel_2d(const ConfigPoint& x) {
    require_2d(x, "sqrt_kernel_2d");
    const double gap = std::abs(x[0] - x[1]);
    const auto s = kernel2d::sqrt_entries(gap);
    Matrix m(2, 2);
    m << s.diag, s.off, s.off, s.diag;
    return {std::move(m), std::exp(-gap)};
}

SqrtKernel sqrt_kernel_nd(const ConfigPoint& x) {
    const Matrix e = kernel_matrix(x).entries;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(e);
    if (eig.info() != Eigen::Success) {
        throw Error(ErrorCode::Numeric, "symmetric eigendecomposition of E(x) failed");
    }
    Vector lambda = eig.eigenvalues();
    const double negative_tol = 1e-10 * static_cast<double>(x.dim());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda(i) < -negative_tol) {
            throw Error(ErrorCode::Numeric, "E(x) has a negative eigenvalue " + std::to_string(lambda(i)));
        }
        lambda(i) = lambda(i) < 0.0 ? 0.0 : std::sqrt(lambda(i));
    }
    const Matrix& v = eig.eigenvectors();
    Matrix root = v * lambda.asDiagonal() * v.transpose();
    root = 0.5 * (root + root.transpose()).eval();
    std::optional<double> zeta;
    if (x.dim() == 2) zeta = std::exp(-std::abs(x[0] - x[1]));
    return {std::move(root), zeta};
}

SqrtKernel sqrt_kernel(const ConfigPoint& x) {
    return x.dim() == 2 ? sqrt_kernel_2d(x) : sqrt_kernel_nd(x);
}

Eigen::Vector2d inv_sqrt_apply(const ConfigPoint& x, const Eigen::Vector2d& xi) {
    const double gap = off_diagonal_gap(x, "inv_sqrt_apply");
    const double inv_plus = 1.0 / std::sqrt(1.0 + std::exp(-gap));
    const double inv_minus = 1.0 / std::sqrt(-std::expm1(-gap));
    const double sum = xi(0) + xi(1);
    const double diff = xi(0) - xi(1);
    return {0.5 * (inv_plus * sum + inv_minus * diff), 0.5 * (inv_plus * sum - inv_minus * diff)};
}

InvSqrtNorm inv_sqrt_norm_bound(const ConfigPoint& x, const Eigen::Vector2d& xi) {
    const double gap = off_diagonal_gap(x, "inv_sqrt_norm_bound");
    const double sum_sq = (xi(0) + xi(1)) * (xi(0) + xi(1));
    const double diff_sq = (xi(0) - xi(1)) * (xi(0) - xi(1));
    const double exact = 0.25 * (2.0 * sum_sq / (1.0 + std::exp(-gap)) + 2.0 * diff_sq / (-std::expm1(-gap)));
    const double bound = 0.5 * (sum_sq + (1.0 + gap) / gap * diff_sq);
    return {exact, bound};
}

double sqrt_kernel_bound(const ConfigPoint& x) {
    if (x.dim() == 1) return 1.0;
    if (x.dim() == 2) return std::sqrt(1.0 + std::exp(-std::abs(x[0] - x[1])));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(kernel_matrix(x).entries, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) {
        throw Error(ErrorCode::Numeric, "eigenvalue computation of E(x) failed");
    }
    return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

double global_sqrt_kernel_bound(std::size_t n) {
    if (n == 0) throw Error(ErrorCode::Dimension, "dimension must be at least 1");
    if (n == 1) return 1.0;
    if (n == 2) return std::sqrt(2.0);
    return std::sqrt(static_cast<double>(n));
}

void apply_sqrt_kernel(std::span<const double> x, std::span<const double> alpha, std::span<double> out) {
    const std::size_t n = x.size();
    if (alpha.size() != n || out.size() != n) {
        throw Error(ErrorCode::Dimension, "apply_sqrt_kernel: size mismatch");
    }
    if (n == 1) {
        out[0] = alpha[0];
        return;
    }
    if (n == 2) {
        const auto s = kernel2d::sqrt_entries(std::abs(x[0] - x[1]));
        const double a0 = alpha[0];
        const double a1 = alpha[1];
        out[0] = s.diag * a0 + s.off * a1;
        out[1] = s.off * a0 + s.diag * a1;
        return;
    }
    const ConfigPoint p(Vector::Map(x.data(), static_cast<Eigen::Index>(n)));
    const Vector r = sqrt_kernel_nd(p).entries * Vector::Map(alpha.data(), static_cast<Eigen::Index>(n));
    Vector::Map(out.data(), static_cast<Eigen::Index>(n)) = r;
}

}  // namespace degenhj
