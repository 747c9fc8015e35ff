#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "pvlab/errors.hpp"

namespace pvlab {

// Uniform 1-D grid on [a,b], endpoints included.
struct Grid1D {
    int n = 0;
    double a = 0.0, b = 0.0;

    Grid1D() = default;
    Grid1D(int n_, double a_, double b_) : n(n_), a(a_), b(b_) {
        if (n < 3 || b <= a) throw BadGrid("Grid1D: need n >= 3 and b > a");
    }
    double h() const { return (b - a) / (n - 1); }
    double x(int i) const { return a + i * h(); }
};

// Slab grid: n1 points in x1 (non-periodic), n2 x n3 points on the unit
// torus in (x2,x3).  Torus spacing is 1/n2, 1/n3 with no duplicated point.
struct Grid {
    Grid1D g1;
    int n2 = 0, n3 = 0;

    Grid() = default;
    Grid(Grid1D g, int n2_, int n3_) : g1(g), n2(n2_), n3(n3_) {
        if (n2 < 4 || n3 < 4) throw BadGrid("Grid: torus needs n2,n3 >= 4");
        if (n2 % 2 || n3 % 2) throw BadGrid("Grid: torus sizes must be even");
    }
    std::size_t size() const {
        return std::size_t(g1.n) * n2 * n3;
    }
    std::size_t idx(int i, int j, int k) const {
        return (std::size_t(i) * n2 + j) * n3 + k;
    }
    double x1(int i) const { return g1.x(i); }
    double x2(int j) const { return double(j) / n2; }
    double x3(int k) const { return double(k) / n3; }
    bool same_shape(const Grid& o) const {
        return g1.n == o.g1.n && g1.a == o.g1.a && g1.b == o.g1.b &&
               n2 == o.n2 && n3 == o.n3;
    }
};

inline Grid plasma_grid(int n1, int n2, int n3) { return Grid(Grid1D(n1, 0.0, 1.0), n2, n3); }
inline Grid vacuum_grid(int n1, int n2, int n3) { return Grid(Grid1D(n1, -1.0, 0.0), n2, n3); }

// Scalar field sampled at grid nodes, x1 slowest / x3 fastest.
struct Field {
    Grid grid;
    std::vector<double> v;

    Field() = default;
    explicit Field(const Grid& g, double fill = 0.0) : grid(g), v(g.size(), fill) {}

    double& operator()(int i, int j, int k) { return v[grid.idx(i, j, k)]; }
    double operator()(int i, int j, int k) const { return v[grid.idx(i, j, k)]; }
    std::size_t size() const { return v.size(); }

    Field& operator+=(const Field& o) {
        for (std::size_t m = 0; m < v.size(); ++m) v[m] += o.v[m];
        return *this;
    }
    Field& operator-=(const Field& o) {
        for (std::size_t m = 0; m < v.size(); ++m) v[m] -= o.v[m];
        return *this;
    }
    Field& operator*=(double s) {
        for (double& x : v) x *= s;
        return *this;
    }
};

inline Field operator+(Field a, const Field& b) { a += b; return a; }
inline Field operator-(Field a, const Field& b) { a -= b; return a; }
inline Field operator*(double s, Field a) { a *= s; return a; }

using Vec3Field = std::array<Field, 3>;
using State8 = std::array<Field, 8>; // (q, v1,v2,v3, H1,H2,H3, S)

inline Vec3Field make_vec3(const Grid& g) { return {Field(g), Field(g), Field(g)}; }
inline State8 make_state(const Grid& g) {
    return {Field(g), Field(g), Field(g), Field(g), Field(g), Field(g), Field(g), Field(g)};
}

// Scalar function of x' sampled on the torus (front, traces, boundary data).
struct TorusField {
    int n2 = 0, n3 = 0;
    std::vector<double> v;

    TorusField() = default;
    TorusField(int n2_, int n3_, double fill = 0.0) : n2(n2_), n3(n3_), v(std::size_t(n2_) * n3_, fill) {
        if (n2 < 4 || n3 < 4) throw BadGrid("TorusField: need n2,n3 >= 4");
        if (n2 % 2 || n3 % 2) throw BadGrid("TorusField: sizes must be even");
    }
    double& operator()(int j, int k) { return v[std::size_t(j) * n3 + k]; }
    double operator()(int j, int k) const { return v[std::size_t(j) * n3 + k]; }
    double x2(int j) const { return double(j) / n2; }
    double x3(int k) const { return double(k) / n3; }
    std::size_t size() const { return v.size(); }

    TorusField& operator+=(const TorusField& o) {
        for (std::size_t m = 0; m < v.size(); ++m) v[m] += o.v[m];
        return *this;
    }
    TorusField& operator-=(const TorusField& o) {
        for (std::size_t m = 0; m < v.size(); ++m) v[m] -= o.v[m];
        return *this;
    }
    TorusField& operator*=(double s) {
        for (double& x : v) x *= s;
        return *this;
    }
};

inline TorusField operator+(TorusField a, const TorusField& b) { a += b; return a; }
inline TorusField operator-(TorusField a, const TorusField& b) { a -= b; return a; }
inline TorusField operator*(double s, TorusField a) { a *= s; return a; }

using TorusVec3 = std::array<TorusField, 3>;

double max_abs(const Field& f);
double max_abs(const TorusField& f);

// Trapezoid in x1, uniform weights on the torus.
double l2_norm(const Field& f);
double l2_inner(const Field& a, const Field& b);
double l2_norm(const TorusField& f);

// Extract the x'-slice at x1 index i.
TorusField slice(const Field& f, int i);
void set_slice(Field& f, int i, const TorusField& s);

} // namespace pvlab
