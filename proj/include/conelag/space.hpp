#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "conelag/errors.hpp"

namespace conelag {

using Vec = std::vector<double>;

/// Norm tag of a finite-dimensional normed space.
enum class Norm { Euclidean, Supremum, AbsoluteValue };

inline std::string to_string(Norm n) {
    switch (n) {
        case Norm::Euclidean: return "euclidean";
        case Norm::Supremum: return "supremum";
        case Norm::AbsoluteValue: return "absolute-value";
    }
    return "?";
}

/// A normed space R^dim with one of the supported norms.
struct SpaceSpec {
    int dim = 1;
    Norm norm = Norm::Euclidean;

    SpaceSpec() = default;
    SpaceSpec(int d, Norm n) : dim(d), norm(n) {
        if (d < 1) throw Error("SpaceSpec: dim must be >= 1");
        if (n == Norm::AbsoluteValue && d != 1)
            throw Error("SpaceSpec: absolute-value norm requires dim = 1");
    }

    bool operator==(const SpaceSpec&) const = default;
};

inline SpaceSpec euclidean(int dim) { return SpaceSpec(dim, Norm::Euclidean); }
inline SpaceSpec real_line() { return SpaceSpec(1, Norm::AbsoluteValue); }

// ---------------------------------------------------------------- vec algebra

inline void check_dim(const SpaceSpec& s, const Vec& v, const char* where) {
    if (static_cast<int>(v.size()) != s.dim)
        throw DimensionMismatch(std::string(where) + ": expected dim " +
                                std::to_string(s.dim) + ", got " + std::to_string(v.size()));
}

inline double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot: size mismatch");
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline Vec add(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("add: size mismatch");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("sub: size mismatch");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec scale(double c, const Vec& a) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

inline Vec neg(const Vec& a) { return scale(-1.0, a); }

inline Vec zeros(int dim) { return Vec(static_cast<size_t>(dim), 0.0); }

inline Vec concat(const Vec& a, const Vec& b) {
    Vec r(a);
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

inline double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

inline double norm_sup(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double norm_of(const SpaceSpec& s, const Vec& v) {
    check_dim(s, v, "norm_of");
    switch (s.norm) {
        case Norm::Euclidean: return norm2(v);
        case Norm::Supremum: return norm_sup(v);
        case Norm::AbsoluteValue: return std::abs(v[0]);
    }
    return 0.0;
}

inline double distance(const SpaceSpec& s, const Vec& a, const Vec& b) {
    return norm_of(s, sub(a, b));
}

inline Vec normalized(const Vec& v) {
    double n = norm2(v);
    if (n == 0.0) throw Error("normalized: zero vector");
    return scale(1.0 / n, v);
}

/// Lexicographic comparison, used to order argmin lists and normalize outputs.
inline bool lex_less(const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct VecLexLess {
    bool operator()(const Vec& a, const Vec& b) const { return lex_less(a, b); }
};

inline bool approx_eq(const Vec& a, const Vec& b, double tol) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
}

// ------------------------------------------------------------------------ rng

/// Deterministic RNG wrapper. All randomized sampling in the library goes
/// through these helpers so results are identical across platforms for a
/// fixed seed (uniform_real_distribution is not byte-stable across stdlibs).
struct Rng {
    std::mt19937_64 gen;

    explicit Rng(uint64_t seed) : gen(seed) {}

    double uniform01() {
        return static_cast<double>(gen() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(gen() % static_cast<uint64_t>(hi - lo + 1));
    }
    double gaussian() {
        // Box-Muller; two uniforms consumed per call.
        double u1 = std::max(uniform01(), 1e-300);
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }
    Vec gaussian_vec(int dim) {
        Vec v(static_cast<size_t>(dim));
        for (auto& x : v) x = gaussian();
        return v;
    }
    Vec unit_vec(int dim) {
        for (;;) {
            Vec v = gaussian_vec(dim);
            double n = norm2(v);
            if (n > 1e-12) return scale(1.0 / n, v);
        }
    }
    /// Uniform in the euclidean unit ball.
    Vec ball_vec(int dim) {
        Vec u = unit_vec(dim);
        double r = std::pow(uniform01(), 1.0 / dim);
        return scale(r, u);
    }
};

// ----------------------------------------------------------------- formatting

/// Numeric output convention: 12 significant digits.
inline std::string fmt_g(double x) {
    if (x == 0.0) x = 0.0; // normalize -0
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

inline std::string fmt_vec(const Vec& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += fmt_g(v[i]);
    }
    return s + ")";
}

/// Round to 12 significant digits; applied before numbers enter reports so
/// every output format carries the same precision.
inline double round_sig(double x) {
    if (!std::isfinite(x)) return x;
    return std::strtod(fmt_g(x).c_str(), nullptr);
}

// --------------------------------------------------------------------- grids

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out;
    if (n <= 0) return out;
    if (n == 1) { out.push_back(lo); return out; }
    out.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
    return out;
}

/// Grid lo, lo+step, ..., hi with an exact zero whenever lo <= 0 <= hi.
/// Built from integer multiples of step so catalog grids contain exact zeros.
inline std::vector<double> step_grid(double lo, double hi, double step) {
    if (step <= 0) throw Error("step_grid: step must be positive");
    std::vector<double> out;
    long k0 = static_cast<long>(std::ceil(lo / step - 1e-9));
    long k1 = static_cast<long>(std::floor(hi / step + 1e-9));
    out.reserve(static_cast<size_t>(k1 - k0 + 1));
    for (long k = k0; k <= k1; ++k) out.push_back(k == 0 ? 0.0 : k * step);
    return out;
}

} // namespace conelag
