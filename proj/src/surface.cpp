#include "resbench/error.hpp"
#include "resbench/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace resbench {

namespace {

bool strictly_ascending(const std::vector<double>& v)
{
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) {
            return false;
        }
    }
    return true;
}

/// Index i with grid[i] <= x <= grid[i+1] and the fractional position; nullopt
/// outside the grid. A one-point grid accepts only its node.
std::optional<std::pair<std::size_t, double>> bracket(const std::vector<double>& grid, double x)
{
    if (grid.size() == 1) {
        if (x == grid[0]) {
            return std::pair<std::size_t, double>{0, 0.0};
        }
        return std::nullopt;
    }
    if (!(x >= grid.front() && x <= grid.back())) {
        return std::nullopt;
    }
    auto it = std::upper_bound(grid.begin(), grid.end(), x);
    std::size_t hi = static_cast<std::size_t>(it - grid.begin());
    if (hi == grid.size()) {
        hi = grid.size() - 1;
    }
    const std::size_t lo = hi - 1;
    return std::pair<std::size_t, double>{lo, (x - grid[lo]) / (grid[hi] - grid[lo])};
}

bool has_sigma_axis(const ErrorSurface& s)
{
    return !(s.sigma_grid.size() == 1 && std::isnan(s.sigma_grid[0]));
}

} // namespace

void ErrorSurface::validate() const
{
    if (n_grid.empty() || sigma_grid.empty()) {
        throw ContractError("error surface: grids must be nonempty");
    }
    if (!strictly_ascending(n_grid)) {
        throw ContractError("error surface: n grid must be strictly ascending");
    }
    if (has_sigma_axis(*this) && !strictly_ascending(sigma_grid)) {
        throw ContractError("error surface: sigma grid must be strictly ascending");
    }
    if (cells.size() != n_grid.size() * sigma_grid.size()) {
        throw ContractError("error surface: expected " + std::to_string(n_grid.size() * sigma_grid.size())
                            + " cells, found " + std::to_string(cells.size()));
    }
}

ErrorSurface sweep_surface(TaskId task, ModelFamily family, std::span<const std::size_t> n_grid,
                           std::span<const double> sigma_grid, const Protocol& protocol,
                           const ExecOptions& exec)
{
    if (n_grid.empty()) {
        throw ContractError("sweep: n grid must be nonempty");
    }
    ErrorSurface surface;
    surface.task = task;
    surface.family = family;
    surface.n_grid.assign(n_grid.begin(), n_grid.end());
    if (family == ModelFamily::Esn) {
        if (sigma_grid.empty()) {
            throw ContractError("sweep: sigma grid must be nonempty");
        }
        surface.sigma_grid.assign(sigma_grid.begin(), sigma_grid.end());
    } else {
        surface.sigma_grid = {std::numeric_limits<double>::quiet_NaN()};
    }
    surface.cells.resize(surface.sigma_grid.size() * surface.n_grid.size());
    surface.validate();

    std::vector<Hyperparams> configs;
    for (double sigma : surface.sigma_grid) {
        for (std::size_t n : n_grid) {
            configs.push_back({n, family == ModelFamily::Esn ? sigma : 0.0});
        }
    }
    ExecOptions train_exec = exec;
    train_exec.train_only = true;
    const auto results = run_protocols(family, configs, task, protocol, train_exec);
    for (std::size_t i = 0; i < results.size(); ++i) {
        const MeanStd& m = results[i].report.at(Metric::Rnmse, Split::Train);
        SurfaceCell& cell = surface.cells[i];
        cell.runs = m.runs;
        cell.failed = m.runs == 0;
        cell.mean = m.mean;
        cell.std = m.std;
    }
    return surface;
}

std::optional<double> interpolate(const ErrorSurface& surface, double sigma, double n)
{
    const auto bn = bracket(surface.n_grid, n);
    if (!bn) {
        return std::nullopt;
    }
    std::pair<std::size_t, double> bs{0, 0.0};
    if (has_sigma_axis(surface)) {
        const auto b = bracket(surface.sigma_grid, sigma);
        if (!b) {
            return std::nullopt;
        }
        bs = *b;
    }
    const auto [ni, nt] = *bn;
    const auto [si, st] = bs;
    double acc = 0.0;
    for (int ds = 0; ds < 2; ++ds) {
        const double ws = ds ? st : 1.0 - st;
        if (ws == 0.0) {
            continue;
        }
        for (int dn = 0; dn < 2; ++dn) {
            const double wn = dn ? nt : 1.0 - nt;
            if (wn == 0.0) {
                continue;
            }
            const SurfaceCell& c = surface.at(si + ds, ni + dn);
            if (c.failed || !std::isfinite(c.mean)) {
                return std::nullopt;
            }
            acc += ws * wn * c.mean;
        }
    }
    return acc;
}

std::vector<OptimalSigma> optimal_sigma(const ErrorSurface& surface,
                                        std::span<const double> query_n, int refine)
{
    surface.validate();
    if (refine < 1) {
        throw ContractError("optimal_sigma: refine must be at least 1");
    }
    const std::vector<double> queries = query_n.empty()
        ? surface.n_grid
        : std::vector<double>(query_n.begin(), query_n.end());

    // Refined sigma grid: `refine` equal steps per grid interval.
    std::vector<double> fine;
    const auto& sg = surface.sigma_grid;
    if (has_sigma_axis(surface)) {
        for (std::size_t i = 0; i + 1 < sg.size(); ++i) {
            for (int k = 0; k < refine; ++k) {
                fine.push_back(sg[i] + (sg[i + 1] - sg[i]) * k / refine);
            }
        }
        fine.push_back(sg.back());
    }

    std::vector<OptimalSigma> out;
    for (double n : queries) {
        OptimalSigma o;
        o.n = n;
        o.sigma = std::numeric_limits<double>::quiet_NaN();
        o.error = std::numeric_limits<double>::quiet_NaN();
        if (!has_sigma_axis(surface)) {
            o.diagnostic = "surface has no sigma axis";
            out.push_back(o);
            continue;
        }
        bool complete = true;
        double best_err = std::numeric_limits<double>::infinity();
        double best_sigma = 0.0;
        for (double s : fine) {
            const auto e = interpolate(surface, s, n);
            if (!e) {
                complete = false;
                break;
            }
            // Lexicographic on (error, sigma) so the result does not depend on
            // evaluation order.
            if (*e < best_err || (*e == best_err && s < best_sigma)) {
                best_err = *e;
                best_sigma = s;
            }
        }
        if (!complete) {
            o.diagnostic = "N=" + std::to_string(n) + ": column incomplete or outside the grid, skipped";
        } else {
            o.ok = true;
            o.sigma = best_sigma;
            o.error = best_err;
        }
        out.push_back(o);
    }
    return out;
}

FitResult fit_optimal_sigma_curve(std::span<const OptimalSigma> points)
{
    std::vector<double> n;
    std::vector<double> s;
    for (const OptimalSigma& p : points) {
        if (p.ok) {
            n.push_back(p.n);
            s.push_back(p.sigma);
        }
    }
    if (n.size() < 4) {
        throw ContractError("fit_optimal_sigma_curve: need at least 4 usable points, have "
                            + std::to_string(n.size()));
    }
    return fit_power_law(n, s);
}

std::vector<CurvePoint> curve_from_surface(const ErrorSurface& surface)
{
    surface.validate();
    std::vector<CurvePoint> out;
    for (std::size_t j = 0; j < surface.n_grid.size(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < surface.sigma_grid.size(); ++i) {
            const SurfaceCell& c = surface.at(i, j);
            if (!c.failed && std::isfinite(c.mean) && c.mean < best) {
                best = c.mean;
            }
        }
        if (std::isfinite(best)) {
            out.push_back({surface.n_grid[j], best});
        }
    }
    return out;
}

std::vector<std::size_t> default_n_grid()
{
    return {10, 20, 50, 100, 150, 200, 300, 400, 500, 700, 1000};
}

std::vector<double> default_sigma_grid()
{
    std::vector<double> g(30);
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] = 0.01 + 0.29 * static_cast<double>(i) / 29.0;
    }
    g.back() = 0.30;
    return g;
}

std::vector<std::size_t> desk_n_grid()
{
    return {10, 20, 50, 100, 150, 200};
}

std::vector<double> desk_sigma_grid()
{
    return default_sigma_grid();
}

} // namespace resbench
