#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fasa {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr int kMaxDim = 3;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

inline void require(bool cond, const std::string& msg) {
    if (!cond) fail(msg);
}

// Point in R^n, n <= 3. Value semantics, fixed storage: quadrature and
// vertex enumeration run in hot loops and must not allocate.
class Vec {
  public:
    Vec() = default;
    Vec(std::initializer_list<double> xs) {
        require(xs.size() >= 1 && xs.size() <= kMaxDim, "Vec: dimension must be 1..3");
        n_ = static_cast<int>(xs.size());
        int i = 0;
        for (double x : xs) v_[i++] = x;
    }
    static Vec zero(int n) {
        require(n >= 1 && n <= kMaxDim, "Vec: dimension must be 1..3");
        Vec v;
        v.n_ = n;
        return v;
    }
    static Vec scalar(double x) { return Vec{x}; }
    static Vec from(const std::vector<double>& xs) {
        require(!xs.empty() && xs.size() <= kMaxDim, "Vec: dimension must be 1..3");
        Vec v;
        v.n_ = static_cast<int>(xs.size());
        for (int i = 0; i < v.n_; ++i) v.v_[i] = xs[i];
        return v;
    }

    int dim() const { return n_; }
    double operator[](int i) const { return v_[i]; }
    double& operator[](int i) { return v_[i]; }
    double x() const { return v_[0]; }

    std::vector<double> to_vector() const { return {v_.begin(), v_.begin() + n_}; }

    friend Vec operator+(Vec a, const Vec& b) {
        for (int i = 0; i < a.n_; ++i) a.v_[i] += b.v_[i];
        return a;
    }
    friend Vec operator-(Vec a, const Vec& b) {
        for (int i = 0; i < a.n_; ++i) a.v_[i] -= b.v_[i];
        return a;
    }
    friend Vec operator*(double s, Vec a) {
        for (int i = 0; i < a.n_; ++i) a.v_[i] *= s;
        return a;
    }

  private:
    std::array<double, kMaxDim> v_{};
    int n_ = 1;
};

inline double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const Vec& a) {
    double s = 0;
    for (int i = 0; i < a.dim(); ++i) s = std::max(s, std::fabs(a[i]));
    return s;
}

inline double dist(const Vec& a, const Vec& b) { return norm(a - b); }

// Small symmetric-ish n x n matrix, n <= 3.
struct Mat {
    std::array<std::array<double, kMaxDim>, kMaxDim> a{};
    int n = 1;

    static Mat zero(int n) {
        Mat m;
        m.n = n;
        return m;
    }
    static Mat identity(int n, double s = 1.0) {
        Mat m = zero(n);
        for (int i = 0; i < n; ++i) m.a[i][i] = s;
        return m;
    }
    double& operator()(int i, int j) { return a[i][j]; }
    double operator()(int i, int j) const { return a[i][j]; }

    double det() const {
        if (n == 1) return a[0][0];
        if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
               a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    }
    double frobenius() const {
        double s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += a[i][j] * a[i][j];
        return std::sqrt(s);
    }
    Vec mul(const Vec& x) const {
        Vec y = Vec::zero(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) y[i] += a[i][j] * x[j];
        return y;
    }
    // Positive semidefinite up to tol (principal-minor test).
    bool psd(double tol) const {
        if (a[0][0] < -tol) return false;
        if (n >= 2) {
            if (a[1][1] < -tol) return false;
            if (a[0][0] * a[1][1] - a[0][1] * a[1][0] < -tol) return false;
        }
        if (n >= 3) {
            if (a[2][2] < -tol) return false;
            if (det() < -tol) return false;
            if (a[0][0] * a[2][2] - a[0][2] * a[2][0] < -tol) return false;
            if (a[1][1] * a[2][2] - a[1][2] * a[2][1] < -tol) return false;
        }
        return true;
    }
};

// Deterministic pairwise (tree) reduction; used wherever sums must be
// reproducible independent of evaluation batching.
inline double pairwise_sum(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    std::vector<double> cur = xs;
    while (cur.size() > 1) {
        std::vector<double> next;
        next.reserve((cur.size() + 1) / 2);
        for (size_t i = 0; i + 1 < cur.size(); i += 2) next.push_back(cur[i] + cur[i + 1]);
        if (cur.size() % 2) next.push_back(cur.back());
        cur.swap(next);
    }
    return cur[0];
}

// Counter-based random stream: output depends only on (seed, stream, counter),
// so split sub-streams are reproducible regardless of evaluation order.
class RandomStream {
  public:
    explicit RandomStream(uint64_t seed, uint64_t stream = 0) : seed_(seed), stream_(stream) {}

    RandomStream split(uint64_t sub) const {
        return RandomStream(seed_, mix(stream_ ^ mix(sub + 0x9E3779B97F4A7C15ULL)));
    }

    double at(uint64_t counter) const {
        uint64_t z = mix(seed_ ^ mix(stream_ + 0x632BE59BD9B4E019ULL) ^ mix(counter));
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }

    double next() { return at(counter_++); }
    double uniform(double a, double b) { return a + (b - a) * next(); }
    int next_int(int n) { return static_cast<int>(next() * n) % n; }

  private:
    static uint64_t mix(uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    uint64_t seed_;
    uint64_t stream_;
    uint64_t counter_ = 0;
};

}  // namespace fasa
