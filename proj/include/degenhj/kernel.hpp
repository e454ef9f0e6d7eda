#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>

namespace degenhj {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Inverse square roots of the kernel are only evaluated when |x1 - x2| is at
/// least this large; closer points are treated as lying on the diagonal.
inline constexpr double kDegeneracyFloor = 1e-12;

/// A point of R^N: peakon positions or a state of the control system.
class ConfigPoint {
public:
    explicit ConfigPoint(Vector coords);
    ConfigPoint(std::initializer_list<double> coords);

    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(coords_.size()); }
    [[nodiscard]] const Vector& coords() const noexcept { return coords_; }
    [[nodiscard]] double operator[](std::size_t i) const { return coords_(static_cast<Eigen::Index>(i)); }

private:
    Vector coords_;
};

/// E(x) with entries exp(-|x_i - x_j|).
struct KernelMatrix {
    Matrix entries;
    ConfigPoint source_point;
};

/// Symmetric PSD square root of E(x). `zeta` is exp(-|x1 - x2|) for N = 2.
struct SqrtKernel {
    Matrix entries;
    std::optional<double> zeta;
};

struct InvSqrtNorm {
    double exact_norm_sq;
    double upper_bound;
};

[[nodiscard]] KernelMatrix kernel_matrix(const ConfigPoint& x);

/// Closed form for N = 2: entries 1/2 (sqrt(1+zeta) +- sqrt(1-zeta)).
[[nodiscard]] SqrtKernel sqrt_kernel_2d(const ConfigPoint& x);

/// Eigendecomposition route, valid for every N. Round-off negative
/// eigenvalues are clamped to zero.
[[nodiscard]] SqrtKernel sqrt_kernel_nd(const ConfigPoint& x);

/// sqrt_kernel_2d for N = 2, sqrt_kernel_nd otherwise.
[[nodiscard]] SqrtKernel sqrt_kernel(const ConfigPoint& x);

/// Solves sqrt(E(x)) eta = xi for off-diagonal x in R^2.
[[nodiscard]] Eigen::Vector2d inv_sqrt_apply(const ConfigPoint& x, const Eigen::Vector2d& xi);

/// |sqrt(E(x))^{-1} xi|^2 and the bound obtained from 1/(1-e^{-s}) <= (1+s)/s.
[[nodiscard]] InvSqrtNorm inv_sqrt_norm_bound(const ConfigPoint& x, const Eigen::Vector2d& xi);

/// Operator norm of sqrt(E(x)), i.e. sqrt of the largest eigenvalue of E(x).
[[nodiscard]] double sqrt_kernel_bound(const ConfigPoint& x);

/// Uniform bound B on |sqrt(E(x))| over R^N: 1 for N = 1, sqrt(2) for N = 2
/// (eigenvalues 1 +- zeta), sqrt(N) in general (Gershgorin).
[[nodiscard]] double global_sqrt_kernel_bound(std::size_t n);

/// Allocation-free helpers for the hot loops.
namespace kernel2d {

/// sqrt(E) for N = 2 has equal diagonal entries; `diag`, `off` are its two values.
struct SqrtEntries {
    double diag;
    double off;
};

[[nodiscard]] SqrtEntries sqrt_entries(double gap) noexcept;

}  // namespace kernel2d

/// out = sqrt(E(x)) * alpha without building a ConfigPoint; N = 1 and 2 use
/// closed forms.
void apply_sqrt_kernel(std::span<const double> x, std::span<const double> alpha, std::span<double> out);

}  // namespace degenhj
