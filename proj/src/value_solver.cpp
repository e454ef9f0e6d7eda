#include "degenhj/value_solver.hpp"

#include "degenhj/error.hpp"
#include "degenhj/io.hpp"
#include "sweep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace degenhj {

namespace detail {

SweepContext make_context(const GridSpec& spec, const TerminalData& g, const ControlSet& controls) {
    SweepContext ctx{spec, g.L, &controls, {}};
    const std::size_t n = spec.dim;
    const std::size_t nodes = spec.nodes();
    ctx.sqrt_e.resize(nodes * n * n);
    const double dx = spec.dx();
    Vector y(static_cast<Eigen::Index>(n));
    for (std::size_t node = 0; node < nodes; ++node) {
        std::size_t rest = node;
        for (std::size_t a = 0; a < n; ++a) {
            const std::size_t i = rest % spec.nx;
            y(static_cast<Eigen::Index>(a)) = i + 1 == spec.nx ? spec.hi : spec.lo + dx * static_cast<double>(i);
            rest /= spec.nx;
        }
        double* out = ctx.sqrt_e.data() + node * n * n;
        if (n == 1) {
            out[0] = 1.0;
        } else if (n == 2) {
            const auto e = kernel2d::sqrt_entries(std::abs(y(0) - y(1)));
            out[0] = e.diag;
            out[1] = e.off;
            out[2] = e.off;
            out[3] = e.diag;
        } else {
            const Matrix root = sqrt_kernel_nd(ConfigPoint(y)).entries;
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = 0; b < n; ++b) {
                    out[a * n + b] = root(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
                }
            }
        }
    }
    return ctx;
}

}  // namespace detail

namespace {

void check_inputs(const GridSpec& spec, const TerminalData& g, const ControlSet& controls, double B) {
    controls.validate();
    if (controls.dim() != spec.dim) throw Error(ErrorCode::Dimension, "control set and grid dimensions differ");
    if (!g.g) throw Error(ErrorCode::Configuration, "terminal data has no evaluator");
    if (!(g.L >= 0.0) || !std::isfinite(g.L)) throw Error(ErrorCode::Configuration, "terminal Lipschitz constant must be finite and >= 0");
    const double reach = controls.a_max() * B * spec.dt();
    if (reach > 0.5 * (spec.hi - spec.lo)) {
        throw Error(ErrorCode::Configuration, "a_max * B * dt = " + std::to_string(reach) +
                                                  " exceeds half the domain width; increase nt");
    }
}

template <class Sweep>
ValueGrid run(const GridSpec& spec, const TerminalData& g, const ControlSet& controls, Sweep sweep) {
    const double B = global_sqrt_kernel_bound(spec.dim);
    ValueGrid grid(spec, g, controls.a_max(), B);
    check_inputs(spec, g, controls, B);
    auto last = grid.slice(spec.nt);
    std::vector<double> y(spec.dim);
    for (std::size_t node = 0; node < spec.nodes(); ++node) {
        grid.node_point(node, y);
        last[node] = g(y);
        if (!std::isfinite(last[node])) throw Error(ErrorCode::Numeric, "terminal data is not finite at a node");
    }
    const detail::SweepContext ctx = detail::make_context(spec, g, controls);
    for (std::size_t k = spec.nt; k-- > 0;) {
        const auto& cgrid = grid;
        sweep(ctx, cgrid.slice(k + 1), grid.slice(k));
    }
    return grid;
}

}  // namespace

std::size_t cfl_time_slices(const GridSpec& spec, const ControlSet& controls, double B) {
    const double ratio = controls.a_max() * B * spec.T / spec.dx();
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(ratio - 1e-9)));
}

ValueGrid solve(const GridSpec& spec, const TerminalData& g, const ControlSet& controls) {
    return run(spec, g, controls, detail::sweep_slice_omp);
}

ValueGrid solve_reference(const GridSpec& spec, const TerminalData& g, const ControlSet& controls) {
    return run(spec, g, controls, detail::sweep_slice_serial);
}

void write_grid_csv(std::ostream& os, const ValueGrid& grid) {
    const auto& s = grid.spec();
    os << "t";
    for (std::size_t a = 1; a <= s.dim; ++a) os << ",y_" << a;
    os << ",v\n";
    std::vector<double> y(s.dim);
    for (std::size_t k = 0; k <= s.nt; ++k) {
        const std::string t = format_double(s.time(k));
        const auto slice = grid.slice(k);
        for (std::size_t node = 0; node < s.nodes(); ++node) {
            grid.node_point(node, y);
            os << t;
            for (const double c : y) os << ',' << format_double(c);
            os << ',' << format_double(slice[node]) << '\n';
        }
    }
}

ValueGrid read_grid_csv(std::istream& is, const TerminalData& terminal, double a_max, double B) {
    std::string line;
    std::size_t columns = 0;
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (columns == 0) {
            columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
            if (columns < 3 || line.rfind("t,", 0) != 0) {
                throw Error(ErrorCode::InvalidInput, "grid csv: bad header on line " + std::to_string(line_no));
            }
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw Error(ErrorCode::InvalidInput, "grid csv: bad number on line " + std::to_string(line_no));
            }
        }
        if (row.size() != columns) {
            throw Error(ErrorCode::InvalidInput, "grid csv: wrong column count on line " + std::to_string(line_no));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorCode::InvalidInput, "grid csv: no data rows");

    GridSpec spec;
    spec.dim = columns - 2;
    std::size_t nx = 0;
    while (nx < rows.size() && rows[nx][0] == rows[0][0] && (nx == 0 || rows[nx][1] != rows[0][1])) ++nx;
    spec.nx = nx;
    const std::size_t nodes = spec.nodes();
    if (nx < 3 || rows.size() % nodes != 0 || rows.size() / nodes < 2) {
        throw Error(ErrorCode::InvalidInput, "grid csv: rows do not form a full space-time grid");
    }
    spec.nt = rows.size() / nodes - 1;
    spec.lo = rows[0][1];
    spec.hi = rows[nx - 1][1];
    spec.T = rows.back()[0];
    if (rows[0][0] != 0.0) throw Error(ErrorCode::InvalidInput, "grid csv: first slice must be t = 0");
    ValueGrid grid(spec, terminal, a_max, B);
    for (std::size_t k = 0; k <= spec.nt; ++k) {
        auto slice = grid.slice(k);
        for (std::size_t node = 0; node < nodes; ++node) {
            const auto& row = rows[k * nodes + node];
            if (std::abs(row[0] - spec.time(k)) > 1e-12 * spec.T) {
                throw Error(ErrorCode::InvalidInput, "grid csv: time column is not uniform");
            }
            slice[node] = row[columns - 1];
        }
    }
    return grid;
}

}  // namespace degenhj
