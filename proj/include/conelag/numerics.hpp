#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <vector>

#include "conelag/space.hpp"

namespace conelag::num {

inline Eigen::VectorXd to_eigen(const Vec& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<long>(v.size()));
}

inline Vec from_eigen(const Eigen::VectorXd& v) {
    return Vec(v.data(), v.data() + v.size());
}

// --------------------------------------------------------------------- NNLS

struct NnlsResult {
    Vec coeffs;      // lambda >= 0
    double residual; // ||A*lambda - y||_2
};

/// Lawson-Hanson nonnegative least squares: min ||A*lambda - y||, lambda >= 0.
/// Columns of A are the generators. Small dense problems only.
inline NnlsResult nnls(const std::vector<Vec>& columns, const Vec& y,
                       int max_iter = 0, double tol = 1e-12) {
    const int m = static_cast<int>(columns.size());
    const int d = static_cast<int>(y.size());
    if (max_iter == 0) max_iter = 30 * std::max(m, 8);

    Eigen::MatrixXd A(d, m);
    for (int j = 0; j < m; ++j) {
        if (static_cast<int>(columns[j].size()) != d)
            throw DimensionMismatch("nnls: column dim mismatch");
        A.col(j) = to_eigen(columns[j]);
    }
    Eigen::VectorXd b = to_eigen(y);

    Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
    std::vector<bool> passive(m, false);
    Eigen::VectorXd w = A.transpose() * (b - A * x);

    auto solve_passive = [&](const std::vector<bool>& p) {
        std::vector<int> idx;
        for (int j = 0; j < m; ++j) if (p[j]) idx.push_back(j);
        Eigen::MatrixXd Ap(d, static_cast<long>(idx.size()));
        for (size_t k = 0; k < idx.size(); ++k) Ap.col(static_cast<long>(k)) = A.col(idx[k]);
        Eigen::VectorXd zp = Ap.colPivHouseholderQr().solve(b);
        Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
        for (size_t k = 0; k < idx.size(); ++k) z[idx[k]] = zp[static_cast<long>(k)];
        return z;
    };

    double scale = std::max(1.0, b.norm());
    for (int iter = 0; iter < max_iter; ++iter) {
        int t = -1;
        double wmax = tol * scale;
        for (int j = 0; j < m; ++j)
            if (!passive[j] && w[j] > wmax) { wmax = w[j]; t = j; }
        if (t < 0) break;
        passive[t] = true;

        for (;;) {
            Eigen::VectorXd z = solve_passive(passive);
            bool ok = true;
            for (int j = 0; j < m; ++j)
                if (passive[j] && z[j] <= 0) { ok = false; break; }
            if (ok) { x = z; break; }
            double alpha = std::numeric_limits<double>::infinity();
            for (int j = 0; j < m; ++j)
                if (passive[j] && z[j] <= 0)
                    alpha = std::min(alpha, x[j] / (x[j] - z[j]));
            x += alpha * (z - x);
            for (int j = 0; j < m; ++j)
                if (passive[j] && std::abs(x[j]) < tol) passive[j] = false;
        }
        w = A.transpose() * (b - A * x);
    }
    NnlsResult r;
    r.coeffs = from_eigen(x);
    r.residual = (A * x - b).norm();
    return r;
}

// ------------------------------------------------------- min-norm over hull

struct MinNormResult {
    Vec point;       // feasible point of conv(vertices)
    double value;    // ||point||_2, upper bound for the minimum
    double lower;    // certified lower bound from the Frank-Wolfe gap
};

/// Euclidean min-norm point of conv(vertices) by Frank-Wolfe with exact line
/// search. The FW gap certifies a lower bound, so `lower <= min <= value`.
inline MinNormResult min_norm_point(const std::vector<Vec>& vertices,
                                    double gap_tol = 1e-14, int max_iter = 200000) {
    if (vertices.empty()) throw EmptySet("min_norm_point: no vertices");
    size_t best = 0;
    for (size_t i = 1; i < vertices.size(); ++i)
        if (norm2(vertices[i]) < norm2(vertices[best])) best = i;
    Vec x = vertices[best];
    double gap = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        // linear minimization oracle: vertex minimizing <x, v>
        size_t s = 0;
        double smin = dot(x, vertices[0]);
        for (size_t i = 1; i < vertices.size(); ++i) {
            double v = dot(x, vertices[i]);
            if (v < smin) { smin = v; s = i; }
        }
        Vec dir = sub(vertices[s], x);
        gap = -dot(x, dir); // <x, x - s>
        if (gap <= gap_tol * std::max(1.0, dot(x, x))) break;
        double dd = dot(dir, dir);
        if (dd <= 0) break;
        double gamma = std::clamp(-dot(x, dir) / dd, 0.0, 1.0);
        if (gamma <= 0) break;
        x = add(x, scale(gamma, dir));
    }
    MinNormResult r;
    r.point = x;
    r.value = norm2(x);
    r.lower = std::sqrt(std::max(0.0, dot(x, x) - gap));
    return r;
}

// -------------------------------------------------- projection on halfspaces

/// Dykstra's algorithm for the euclidean projection of `y` onto
/// {x : rows[i] . x >= offsets[i]}. Rows need not be normalized.
inline Vec project_halfspaces(const std::vector<Vec>& rows, const Vec& offsets,
                              const Vec& y, int sweeps = 4000, double tol = 1e-14) {
    const size_t m = rows.size();
    if (m == 0) return y;
    Vec x = y;
    std::vector<Vec> corr(m, zeros(static_cast<int>(y.size())));
    for (int s = 0; s < sweeps; ++s) {
        double moved = 0.0;
        for (size_t i = 0; i < m; ++i) {
            Vec z = add(x, corr[i]);
            double nn = dot(rows[i], rows[i]);
            double viol = offsets[i] - dot(rows[i], z);
            Vec px = viol > 0 ? add(z, scale(viol / nn, rows[i])) : z;
            corr[i] = sub(z, px);
            moved += norm2(sub(px, x));
            x = px;
        }
        if (moved < tol) break;
    }
    return x;
}

// ------------------------------------------------------------ 1-D minimizers

/// Golden-section refinement of a bracketed 1-D minimum.
inline double golden_min(const std::function<double(double)>& f, double lo,
                         double hi, double xtol = 1e-13) {
    const double phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol * std::max(1.0, std::abs(a) + std::abs(b))) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - phi * (b - a); f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + phi * (b - a); f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

/// Minimum of f over [lo, hi]: coarse scan plus golden refinement around the
/// best cell. Good enough for the smooth 1-D profiles used in cone calculus.
inline double grid_refine_min(const std::function<double(double)>& f, double lo,
                              double hi, int coarse = 512) {
    double best_x = lo, best_f = f(lo);
    for (int i = 1; i <= coarse; ++i) {
        double x = lo + (hi - lo) * i / coarse;
        double v = f(x);
        if (v < best_f) { best_f = v; best_x = x; }
    }
    double h = (hi - lo) / coarse;
    double a = std::max(lo, best_x - h), b = std::min(hi, best_x + h);
    double x = golden_min(f, a, b);
    return f(x) < best_f ? x : best_x;
}

} // namespace conelag::num
